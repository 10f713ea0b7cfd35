use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qtoda::flow::Integrator;
use qtoda::{Coords, Family};

#[derive(Parser, Debug)]
#[command(
    name = "qtoda",
    version,
    about = "Quantum cohomology of flag manifolds via Toda lattices"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Args, Debug)]
pub struct Output {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the payload here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct Target {
    /// Root system family (A or B).
    #[arg(long)]
    pub family: Family,
    #[arg(long)]
    pub rank: usize,
}

#[derive(Args, Debug)]
pub struct CoordsArg {
    /// Coordinates for type B (type A always uses p).
    #[arg(long, default_value = "p")]
    pub coords: Coords,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the presentation of the quantum cohomology ring.
    Present {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        coords: CoordsArg,
        #[command(flatten)]
        output: Output,
    },
    /// Normal form of a polynomial modulo the relations.
    Reduce {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        coords: CoordsArg,
        #[arg(long)]
        expr: String,
        #[command(flatten)]
        output: Output,
    },
    /// Product of two classes in the quotient.
    Multiply {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        coords: CoordsArg,
        /// Pass exactly twice, once per factor.
        #[arg(long, required = true, num_args = 1)]
        expr: Vec<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Basis of the quotient as a free module over the q-polynomials.
    Basis {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        coords: CoordsArg,
        /// Keep only basis monomials of this degree.
        #[arg(long)]
        degree: Option<u32>,
        #[command(flatten)]
        output: Output,
    },
    /// Compare the q = 0 quotient with the classical cohomology ring.
    ClassicalCheck {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        coords: CoordsArg,
        #[command(flatten)]
        output: Output,
    },
    /// Quotient dimension at random rational specializations of q.
    RankProbe {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 3)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Sectors of the D-module series up to a total degree.
    Dsolve {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        cutoff: u32,
        #[command(flatten)]
        output: Output,
    },
    /// Quantize a classical integral by solving for the commutant of the Hamiltonian.
    Quantize {
        #[command(flatten)]
        target: Target,
        /// Integral in p1.., q1.. (p-coordinates).
        #[arg(long, conflicts_with = "degree", required_unless_present = "degree")]
        expr: Option<String>,
        /// Use the conserved quantity of this weighted degree.
        #[arg(long)]
        degree: Option<u32>,
        #[command(flatten)]
        output: Output,
    },
    /// Check that the Hamiltonian and the quantized integrals kill the series.
    Annihilate {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        cutoff: u32,
        #[command(flatten)]
        output: Output,
    },
    /// Integrate the classical Toda flow and report conservation drift.
    Flow {
        #[command(flatten)]
        target: Target,
        /// Initial momenta, comma separated.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        m: Vec<f64>,
        /// Initial positions, comma separated (default all zero).
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        y: Vec<f64>,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        #[arg(long, default_value_t = 10.0)]
        t_end: f64,
        #[arg(long, default_value = "rk4")]
        integrator: Integrator,
        /// Trajectory states to include after the initial one (0 for none).
        #[arg(long, default_value_t = 0)]
        samples: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Poisson brackets among the conserved quantities.
    PoissonCheck {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        output: Output,
    },
    /// Type A presentation with equivariant parameters.
    Equivariant {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        output: Output,
    },
    /// The projective-line equivariant example.
    P1Example {
        #[command(flatten)]
        output: Output,
    },
}

impl Command {
    pub fn output(&self) -> &Output {
        match self {
            Command::Present { output, .. }
            | Command::Reduce { output, .. }
            | Command::Multiply { output, .. }
            | Command::Basis { output, .. }
            | Command::ClassicalCheck { output, .. }
            | Command::RankProbe { output, .. }
            | Command::Dsolve { output, .. }
            | Command::Quantize { output, .. }
            | Command::Annihilate { output, .. }
            | Command::Flow { output, .. }
            | Command::PoissonCheck { output, .. }
            | Command::Equivariant { output, .. }
            | Command::P1Example { output } => output,
        }
    }
}
