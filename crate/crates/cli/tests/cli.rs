use std::process::{Command, Output};

fn qtoda(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qtoda"))
        .args(args)
        .output()
        .expect("spawn qtoda")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn present_json_has_two_relations_in_field_order() {
    let o = qtoda(&["present", "--family", "A", "--rank", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(
        v["relations"],
        serde_json::json!(["-p1^2 + p1*p2 - p2^2 + q1 + q2", "p1^2*p2 - p1*p2^2 - p2*q1 + p1*q2"])
    );
    let keys = [
        "\"family\"",
        "\"rank\"",
        "\"variables\"",
        "\"relations\"",
        "\"weyl_order\"",
        "\"poincare\"",
    ];
    let pos: Vec<usize> = keys.iter().map(|k| text.find(k).unwrap()).collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn reduce_rank_one_square() {
    let o = qtoda(&["reduce", "--family", "A", "--rank", "1", "--expr", "p1^2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "q1\n");
}

#[test]
fn unknown_family_is_a_usage_error() {
    let o = qtoda(&["present", "--family", "Z", "--rank", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("--family"));
}

#[test]
fn usage_errors_name_the_flag_and_emit_nothing() {
    for (args, flag) in [
        (vec!["present", "--family", "B", "--rank", "1"], "--rank"),
        (
            vec!["reduce", "--family", "A", "--rank", "2", "--expr", "p1 +"],
            "--expr",
        ),
        (
            vec!["multiply", "--family", "A", "--rank", "2", "--expr", "p1"],
            "--expr",
        ),
        (
            vec!["annihilate", "--family", "A", "--rank", "1", "--cutoff", "0"],
            "--cutoff",
        ),
        (vec!["flow", "--family", "A", "--rank", "2", "--m", "0.1"], "--m"),
        (vec!["equivariant", "--family", "B", "--rank", "2"], "--family"),
        (vec!["present", "--family", "A"], "--rank"),
        (vec!["present", "--family", "A", "--rank", "1", "--bogus"], "--bogus"),
    ] {
        let o = qtoda(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}");
        assert!(String::from_utf8_lossy(&o.stderr).contains(flag), "{args:?}");
    }
}

#[test]
fn failed_verdicts_exit_one() {
    // not an integral, so no commuting quantization exists
    let o = qtoda(&["quantize", "--family", "A", "--rank", "2", "--expr", "p1^2"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn output_is_deterministic() {
    let args = [
        "flow",
        "--family",
        "A",
        "--rank",
        "2",
        "--m",
        "0.3,-0.2",
        "--samples",
        "3",
        "--format",
        "json",
    ];
    let a = qtoda(&args);
    let b = qtoda(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let probe = ["rank-probe", "--family", "B", "--rank", "2", "--seed", "5"];
    assert_eq!(qtoda(&probe).stdout, qtoda(&probe).stdout);
}

#[test]
fn flow_doubles_have_seventeen_digits() {
    let o = qtoda(&[
        "flow", "--family", "A", "--rank", "1", "--m", "0.1", "--t-end", "0.01", "--format", "json",
    ]);
    let text = stdout(&o);
    assert!(text.contains("\"dt\": 1.0000000000000000e-3"), "{text}");
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["initial"]["m"][0].as_f64(), Some(0.1));
}

#[test]
fn out_flag_writes_the_payload_to_a_file() {
    let dir = std::env::temp_dir().join(format!("qtoda-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("p1.json");
    let o = qtoda(&["p1-example", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["factorization"], true);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn every_subcommand_has_a_json_mode() {
    let runs: [&[&str]; 13] = [
        &["present", "--family", "B", "--rank", "2", "--coords", "native"],
        &["reduce", "--family", "B", "--rank", "2", "--expr", "p1^4"],
        &[
            "multiply", "--family", "A", "--rank", "2", "--expr", "p1", "--expr", "p2",
        ],
        &["basis", "--family", "A", "--rank", "2"],
        &["classical-check", "--family", "A", "--rank", "2"],
        &["rank-probe", "--family", "A", "--rank", "2"],
        &["dsolve", "--family", "A", "--rank", "2", "--cutoff", "2"],
        &["quantize", "--family", "B", "--rank", "2", "--degree", "4"],
        &["annihilate", "--family", "A", "--rank", "1", "--cutoff", "3"],
        &[
            "flow", "--family", "B", "--rank", "2", "--m", "0.1,0.2", "--t-end", "0.1",
        ],
        &["poisson-check", "--family", "A", "--rank", "2"],
        &["equivariant", "--family", "A", "--rank", "2"],
        &["p1-example"],
    ];
    for args in runs {
        let mut a = args.to_vec();
        a.extend(["--format", "json"]);
        let o = qtoda(&a);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert!(v.is_object(), "{args:?}");
    }
}
