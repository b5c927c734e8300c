use std::path::PathBuf;
use std::process::{Command, Output};

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tmfgenus"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn assert_golden(args: &[&str], name: &str) {
    let o = run(args);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let expected = std::fs::read_to_string(golden(name)).unwrap();
    assert_eq!(
        stdout(&o),
        expected,
        "output of {args:?} drifted from {name}"
    );
}

#[test]
fn eisenstein_json() {
    assert_golden(
        &[
            "eisenstein",
            "--kind",
            "Gt",
            "--k",
            "4",
            "--q-order",
            "3",
            "--json",
        ],
        "eisenstein_gt4.json",
    );
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(golden("eisenstein_gt4.json")).unwrap())
            .unwrap();
    assert_eq!(v["coeffs"], serde_json::json!(["1/240", "-1", "-7", "-28"]));
}

#[test]
fn hecke_json() {
    assert_golden(
        &[
            "hecke",
            "--op",
            "Tp",
            "--p",
            "2",
            "--kind",
            "G",
            "--k",
            "4",
            "--q-order",
            "10",
            "--json",
        ],
        "hecke_t2_g4.json",
    );
}

#[test]
fn charseries_witten_verifies() {
    assert_golden(
        &[
            "charseries",
            "--genus",
            "witten",
            "--u-order",
            "8",
            "--q-order",
            "6",
            "--verify",
            "--json",
        ],
        "charseries_witten.json",
    );
    let text = stdout(&run(&[
        "charseries",
        "--genus",
        "witten",
        "--u-order",
        "8",
        "--q-order",
        "6",
        "--verify",
    ]));
    assert!(text.contains("identity: PASS"));
}

#[test]
fn charseries_ochanine() {
    assert_golden(
        &[
            "charseries",
            "--genus",
            "ochanine",
            "--u-order",
            "6",
            "--q-order",
            "3",
            "--json",
        ],
        "charseries_ochanine.json",
    );
}

#[test]
fn verify_ochanine_passes() {
    assert_golden(
        &[
            "verify",
            "--genus",
            "ochanine",
            "--p",
            "5",
            "--M",
            "2",
            "--q-order",
            "10",
            "--c",
            "2",
            "--json",
        ],
        "verify_ochanine.json",
    );
}

#[test]
fn congruences_report_expected_failure() {
    assert_golden(
        &["congruences", "--k-max", "8", "--q-order", "6", "--json"],
        "congruences_small.json",
    );
    let text = stdout(&run(&["congruences"]));
    assert!(text.contains("k=2 (q^0: -3/8)"));
}

#[test]
fn bernoulli_text() {
    assert_golden(&["bernoulli", "--k", "12"], "bernoulli_12.txt");
}

#[test]
fn measure_solve_dirac() {
    let moments = golden("dirac_moments.json");
    assert_golden(
        &[
            "measure-solve",
            "--moments",
            moments.to_str().unwrap(),
            "--p",
            "5",
            "--M",
            "2",
            "--json",
        ],
        "measure_dirac.json",
    );
}

#[test]
fn infeasible_moments_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    // x^2 and x^22 agree on (Z/25)^x, but these moments do not
    let mut m: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(golden("dirac_moments.json")).unwrap())
            .unwrap();
    m["moments"][10]["coeffs"][0] = serde_json::json!("5");
    std::fs::write(&path, m.to_string()).unwrap();
    let o = run(&[
        "measure-solve",
        "--moments",
        path.to_str().unwrap(),
        "--p",
        "5",
        "--M",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("INFEASIBLE"));
}

#[test]
fn perturbed_family_exits_one() {
    let family = tmfgenus::verify::Family::named("ochanine", 22, 10).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&family.to_json()).unwrap();
    // g_4 += q
    v["forms"][1]["coeffs"][1] = serde_json::json!("0");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("family.json");
    std::fs::write(&path, v.to_string()).unwrap();
    let o = run(&[
        "verify",
        "--family",
        path.to_str().unwrap(),
        "--p",
        "5",
        "--mode",
        "spin",
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let c = report["conditions"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["id"] == "c")
        .unwrap();
    assert_eq!(c["pass"], false);
    assert_eq!(c["details"]["first_mismatch"]["k"], 4);
    assert_eq!(c["details"]["first_mismatch"]["q_index"], 1);
}

#[test]
fn unperturbed_family_file_passes() {
    let family = tmfgenus::verify::Family::named("ochanine", 22, 10).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("family.json");
    std::fs::write(&path, family.to_json()).unwrap();
    let o = run(&["verify", "--family", path.to_str().unwrap(), "--p", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).ends_with("overall: PASS\n"));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.json");
    let o = run(&[
        "eisenstein",
        "--kind",
        "Gt",
        "--k",
        "4",
        "--q-order",
        "3",
        "--json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(
        std::fs::read_to_string(path).unwrap(),
        std::fs::read_to_string(golden("eisenstein_gt4.json")).unwrap()
    );
}

#[test]
fn usage_and_config_errors_exit_two() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        run(&["eisenstein", "--kind", "G", "--k", "3", "--q-order", "3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["verify", "--genus", "ochanine", "--p", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["verify", "--genus", "ochanine", "--p", "5", "--c", "10"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["hecke", "--op", "Tp", "--p", "2", "--kind", "Gt", "--k", "4"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn verify_is_deterministic() {
    let args = ["verify", "--genus", "wsig", "--p", "3", "--json"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    assert_eq!(run(&args).status.code(), Some(0));
}
