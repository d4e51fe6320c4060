use std::path::PathBuf;
use std::process::Command;

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "data", name].iter().collect();
    p.display().to_string()
}

fn ultrashift(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_ultrashift")).args(args).output().expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).expect("utf-8"),
        String::from_utf8(out.stderr).expect("utf-8"),
    )
}

#[test]
fn ktheory_of_skip_two() {
    let (code, out, _) = ultrashift(&["ktheory", &data("skip_two.ug")]);
    assert_eq!(code, 0);
    assert_eq!(out, "K0 = Z^1 (+) Z/2\nK1 = Z^0\n");
}

#[test]
fn ktheory_emits_matrix() {
    let (code, out, _) = ultrashift(&["ktheory", "--emit-matrix", &data("skip_two.ug")]);
    assert_eq!(code, 0);
    assert!(out.contains("v1  1  0 -1  -1\n"));
    let (_, out, _) = ultrashift(&["ktheory", "--emit-matrix", &data("bouquet.ug")]);
    assert!(out.contains("(no rows; columns v1)"));
    assert!(out.ends_with("K0 = Z^1\nK1 = Z^0\n"));
}

#[test]
fn ktheory_refuses_position_dependent_ranges() {
    let (code, _, err) = ultrashift(&["ktheory", &data("upper_tail.ug")]);
    assert_eq!(code, 4);
    assert!(err.starts_with("error:"));
}

#[test]
fn membership_exit_codes() {
    let file = data("skip_two.ug");
    assert_eq!(ultrashift(&["member", &file, "@"]).0, 0);
    assert_eq!(ultrashift(&["member", &file, "e1.e3.(e3)*"]).0, 0);
    let (code, out, _) = ultrashift(&["member", &file, "e1.e2"]);
    assert_eq!(code, 1);
    assert_eq!(out.trim(), "not a path: s(e2) ∉ r(e1)");
    assert_eq!(ultrashift(&["member", &file, "e1..e2"]).0, 2);
}

#[test]
fn xf_membership() {
    let forbid = data("skip_two.forbid");
    assert_eq!(ultrashift(&["xf-member", "--forbid", &forbid, "e1.e3"]).0, 0);
    assert_eq!(ultrashift(&["xf-member", "--forbid", &forbid, "e3.(e1.e2)*"]).0, 1);
    assert_eq!(ultrashift(&["xf-member", "--forbid", &forbid, "--alphabet", "finite(2)", "@"]).0, 1);
    assert_eq!(ultrashift(&["xf-member", "--forbid", &forbid, "--alphabet", "tiny", "@"]).0, 2);
}

#[test]
fn shift_and_theta() {
    assert_eq!(ultrashift(&["shift", "e1.e2.(e3)*"]).1, "e2.(e3)*\n");
    assert_eq!(ultrashift(&["shift", "@"]).1, "@\n");
    let file = data("skip_two.ug");
    assert_eq!(ultrashift(&["theta", &file, "e2.~e1", "e1.e3.(e3)*"]).1, "e2.(e3)*\n");
    assert_eq!(ultrashift(&["theta", &file, "e1", "@"]).1, "e1\n");
    assert_eq!(ultrashift(&["theta", &file, "~e1", "e1"]).1, "@\n");
    let (code, _, err) = ultrashift(&["theta", &file, "~e1", "e2"]);
    assert_eq!(code, 4);
    assert!(err.contains("not in the domain"));
}

#[test]
fn from_forbidden_round_trip() {
    let (code, presentation, _) = ultrashift(&["from-forbidden", &data("skip_two.forbid")]);
    assert_eq!(code, 0);
    let path = std::env::temp_dir().join(format!("ultrashift-cli-{}.ug", std::process::id()));
    std::fs::write(&path, &presentation).unwrap();
    let (code, out, _) = ultrashift(&["forbidden", path.to_str().unwrap()]);
    std::fs::remove_file(&path).unwrap();
    assert_eq!(code, 0);
    assert_eq!(out, "forbid { e1.e1; e1.e2 }\n");
    assert_eq!(ultrashift(&["forbidden", &data("skip_two.ug")]).1, "forbid { e1.e1; e1.e2 }\n");
    assert!(ultrashift(&["forbidden", &data("upper_tail.ug")]).1.starts_with("infinitely many"));
}

#[test]
fn obstruct_exit_codes() {
    let (code, out, _) = ultrashift(&["obstruct", &data("skip_two.ug"), &data("bouquet.ug")]);
    assert_eq!(code, 3);
    assert!(out.lines().next().unwrap().ends_with("NotConjugate"));
    assert!(out.contains("K0 torsion"));
    let (code, out, _) = ultrashift(&["obstruct", &data("bouquet.ug"), &data("bouquet.ug")]);
    assert_eq!(code, 0);
    assert!(out.contains("identical K-theory"));
    let (code, out, _) = ultrashift(&["obstruct", &data("split_source.ug"), &data("bouquet.ug")]);
    assert_eq!(code, 0);
    assert!(out.contains("Inconclusive"));
}

#[test]
fn info_and_validate() {
    let (code, out, _) = ultrashift(&["info", &data("split_source.ug")]);
    assert_eq!(code, 0);
    assert!(out.contains("H3 vertex preimages finite or cofinite: false"));
    let (code, out, _) = ultrashift(&["validate", &data("skip_two.ug")]);
    assert_eq!(code, 0);
    assert_eq!(out, "valid\neligible (H1-H4): true\n");
}

#[test]
fn paths_listing() {
    let (code, out, _) = ultrashift(&["paths", &data("skip_two.ug"), "--len", "2", "--max-edge", "3"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().collect::<Vec<_>>(), ["e1.e3", "e2.e1", "e2.e2", "e2.e3", "e3.e1", "e3.e2", "e3.e3"]);
}

#[test]
fn input_errors_exit_two() {
    let (code, _, err) = ultrashift(&["validate", &data("empty_range.ug")]);
    assert_eq!(code, 2);
    assert!(err.ends_with("empty_range.ug: parse error at 2:26: empty range for edge e1\n"));
    assert_eq!(ultrashift(&["validate", &data("missing.ug")]).0, 2);
    assert_eq!(ultrashift(&["frobnicate"]).0, 2);
    assert_eq!(ultrashift(&[]).0, 2);
}

#[test]
fn output_is_deterministic() {
    let runs: Vec<_> =
        (0..3).map(|_| ultrashift(&["obstruct", &data("double_emitter.ug"), &data("skip_two.ug")])).collect();
    assert!(runs.windows(2).all(|w| w[0] == w[1]));
}
