//! Presentations of small quantum cohomology rings of complete flag
//! manifolds `G/B` (types `A_n`, `B_n`) built from conserved quantities of
//! the Langlands-dual Toda lattice, together with the quantum D-module
//! series, commutant-based quantisation of the integrals, numerical Toda
//! flows and type-A equivariant presentations.

pub mod dmodule;
pub mod equivariant;
pub mod error;
pub mod flow;
pub mod lax;
pub mod poly;
pub mod qhring;
pub mod rootdata;
pub mod weyl;

pub use dmodule::{check_annihilation, solve_series, LaurentH, SeriesSolution};
pub use equivariant::{build_equivariant, p1_example_check, EquivariantPresentation};
pub use error::{Error, Result};
pub use flow::{hamiltonian_flow, poisson_bracket, FlowConfig, FlowState, Integrator};
pub use lax::{
    build_lax, conserved_quantities, normalized_integrals, quadratic_relation, to_p_coordinates, ConservedSet,
    LaxMatrix,
};
pub use poly::{GroebnerBasis, Monomial, MonomialOrder, PolyMatrix, Polynomial, Rational, VarTable};
pub use qhring::{build_presentation, classical_limit_report, free_rank_probe, Coords, Presentation};
pub use rootdata::{Family, RootSystem, SignedPermutation};
pub use weyl::{build_hamiltonian, quantize_integral, WeylOp};
