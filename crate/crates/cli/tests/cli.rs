use std::path::PathBuf;
use std::process::{Command, Output};

fn config(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs").join(name)
}

fn golden(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(path).unwrap()
}

fn jetvar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jetvar")).args(args).env_remove("JETVAR_MAX_TERMS").output().unwrap()
}

fn run_config(cmd: &str, name: &str, extra: &[&str]) -> Output {
    let path = config(name);
    let mut args = vec![cmd, "--config", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    jetvar(&args)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn check_algebra_exit_codes() {
    let ok = run_config("check-algebra", "su2_k2.toml", &[]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("killing[0] : -2/1 0/1 0/1"));
    let explicit = run_config("check-algebra", "su2_explicit.toml", &[]);
    assert_eq!(explicit.status.code(), Some(0));
    let corrupted = run_config("check-algebra", "su2_corrupted.toml", &[]);
    assert_eq!(corrupted.status.code(), Some(1));
    assert!(stdout(&corrupted).starts_with("FAIL structure constants"));
    let non_invariant = run_config("check-algebra", "su2_noninvariant.toml", &[]);
    assert_eq!(non_invariant.status.code(), Some(1));
}

#[test]
fn malformed_and_missing_configs_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "k = 2\n\n[algebra\nname = \"su2\"\n").unwrap();
    let o = jetvar(&["check-algebra", "--config", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("bad.toml:3:"), "{err}");

    let invalid = dir.path().join("invalid.toml");
    std::fs::write(&invalid, "k = 2\nh = \"1/0\"\n[algebra]\nname = \"su2\"\n").unwrap();
    assert_eq!(jetvar(&["transgression", "--config", invalid.to_str().unwrap()]).status.code(), Some(2));

    assert_eq!(jetvar(&["transgression"]).status.code(), Some(2));
    assert_eq!(jetvar(&["transgression", "--config", "/nonexistent.toml"]).status.code(), Some(2));
    assert_eq!(jetvar(&["no-such-command"]).status.code(), Some(2));
    // a broken algebra cannot drive the variational commands
    assert_eq!(run_config("verify-conservation", "su2_corrupted.toml", &[]).status.code(), Some(2));
}

#[test]
fn transgression_passes_and_detects_non_invariant_tensor() {
    for name in ["u1_k2.toml", "su2_k2.toml", "u1_k3.toml", "u1_su2_k3.toml"] {
        let o = run_config("transgression", name, &[]);
        assert_eq!(o.status.code(), Some(0), "{name}");
    }
    let o = run_config("transgression", "su2_noninvariant.toml", &[]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("FAIL L_xi P(F) = 0"));
    assert!(out.contains("FAIL ad-invariance"));
}

#[test]
fn golden_outputs() {
    let cases = [
        ("verify-conservation", "su2_k2.toml", "su2_k2_conservation.txt"),
        ("euler-lagrange", "u1_k2.toml", "u1_k2_euler_lagrange.txt"),
        ("transgression", "u1_su2_k3.toml", "u1_su2_k3_transgression.txt"),
    ];
    for (cmd, cfg, file) in cases {
        let o = run_config(cmd, cfg, &[]);
        assert_eq!(stdout(&o), golden(file), "{cmd} {cfg}");
    }
}

#[test]
fn output_is_deterministic() {
    let a = run_config("verify-conservation", "u1_k3.toml", &[]);
    let b = run_config("verify-conservation", "u1_k3.toml", &[]);
    assert_eq!(a.stdout, b.stdout);
    let s1 = jetvar(&["first-variational-selftest", "--seed", "11"]);
    let s2 = jetvar(&["first-variational-selftest", "--seed", "11"]);
    assert_eq!(s1.status.code(), Some(0));
    assert_eq!(s1.stdout, s2.stdout);
}

#[test]
fn abelian_field_equations_are_the_dual_strength() {
    // δℒ/δa_0 = ε^{0βγ}ℱ_{βγ} = 2(∂_1a_2 − ∂_2a_1)
    let out = stdout(&run_config("euler-lagrange", "u1_k2.toml", &[]));
    assert!(out.contains("d/da[r=0;mu=0;D=()] : -2/1*a[r=0;mu=1;D=(2)]"));
    assert!(out.contains("d/da[r=0;mu=0;D=()] : 2/1*a[r=0;mu=2;D=(1)]"));
    let o = run_config("euler-lagrange", "su2_k2.toml", &["--compare-background"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("PASS background independence"));
}

#[test]
fn long_output_is_truncated_and_dumped() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("full.txt");
    let o = run_config("verify-conservation", "u1_k3.toml", &["--dump", dump.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let screen = stdout(&o);
    assert!(screen.contains("... 440 more lines"), "{screen}");
    let full = std::fs::read_to_string(&dump).unwrap();
    assert_eq!(full.lines().filter(|l| l.starts_with("J^")).count(), 480 + 120);
    assert!(screen.lines().count() < full.lines().count());
}

#[test]
fn zero_gauge_parameters_give_zero_current() {
    let o = run_config("verify-conservation", "su2_zero_parameters.toml", &[]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("modified current (0 monomials)"));
    assert!(!out.contains("J^"));
}

#[test]
fn closed_form_comparison_for_scaled_tensor() {
    let o = run_config("verify-conservation", "su2_explicit.toml", &[]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("PASS modified current against the 3D closed form"));
}

#[test]
fn term_limit_exits_with_three() {
    let path = config("su2_k2.toml");
    let o = Command::new(env!("CARGO_BIN_EXE_jetvar"))
        .args(["verify-conservation", "--config", path.to_str().unwrap()])
        .env("JETVAR_MAX_TERMS", "50")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    assert!(o.stdout.is_empty());
    let bad = Command::new(env!("CARGO_BIN_EXE_jetvar"))
        .args(["verify-conservation", "--config", path.to_str().unwrap()])
        .env("JETVAR_MAX_TERMS", "lots")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
