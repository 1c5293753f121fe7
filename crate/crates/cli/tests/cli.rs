use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_subriem"));
    c.env_remove("SUBRIEM_OUT");
    c
}

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(name)
}

fn run(args: &[&str], out: &Path) -> Output {
    bin().args(args).arg("--out").arg(out).output().unwrap()
}

fn report(dir: &Path, experiment: &str) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join(experiment).join("report.json")).unwrap()).unwrap()
}

fn check<'a>(rep: &'a Value, name: &str) -> &'a Value {
    rep["checks"].as_array().unwrap().iter().find(|c| c["name"] == name).unwrap()
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let p = dir.join("config.toml");
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn heisenberg_demo_passes_with_constant_kappa1() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(&["run", config("heisenberg-demo.toml").to_str().unwrap()], tmp.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let rep = report(tmp.path(), "heisenberg-circles");
    assert_eq!(rep["pass"], true);
    let curves = rep["curves"].as_array().unwrap();
    assert_eq!(curves.len(), 8);
    for c in curves {
        assert_eq!(c["verdict"]["kappa1Constant"], true);
    }
    // λ₀ = (1, 0, 1): a unit-speed circle of curvature 1
    assert!((curves[0]["verdict"]["kappa1Mean"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    // λ₀ = (0, 1, 0): a straight line
    assert_eq!(curves[3]["verdict"]["geodesic"], true);
}

#[test]
fn csv_files_follow_the_schema() {
    let tmp = tempfile::tempdir().unwrap();
    run(&["run", config("heisenberg-demo.toml").to_str().unwrap()], tmp.path());
    let dir = tmp.path().join("heisenberg-circles");
    let traj = std::fs::read_to_string(dir.join("ic000_trajectory.csv")).unwrap();
    let curv = std::fs::read_to_string(dir.join("ic000_curvature.csv")).unwrap();
    assert_eq!(traj.lines().next(), Some("t,x1,x2,x3,lambda1,lambda2,lambda3"));
    assert_eq!(curv.lines().next(), Some("t,y1,y2,kappa1,kappa2"));
    assert_eq!(traj.lines().count(), 5001 + 1);
    let last: Vec<f64> = curv.lines().last().unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(last[0], 5.0);
    assert!((last[3] - 1.0).abs() < 1e-9);
}

#[test]
fn product_htype_fails_with_large_residual() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(&["run", config("product-htype.toml").to_str().unwrap()], tmp.path());
    assert_eq!(out.status.code(), Some(1));
    let rep = report(tmp.path(), "product-htype");
    let htype = check(&rep, "htype");
    assert_eq!(htype["pass"], false);
    assert!(htype["maxResidual"].as_f64().unwrap() >= 0.5);
    assert_eq!(check(&rep, "j2")["pass"], false);
    assert_eq!(check(&rep, "theorem1")["pass"], true);
    assert_eq!(check(&rep, "local-condition-d")["pass"], true);
}

#[test]
fn custom_carnot_and_hopf_config_passes() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(&["run", config("carnot-custom.toml").to_str().unwrap()], tmp.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert_eq!(report(tmp.path(), "custom-heisenberg")["model"], "step2-carnot");
    assert_eq!(report(tmp.path(), "hopf-sphere")["pass"], true);
}

#[test]
fn input_errors_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    for text in [
        "[e]\nmodel = \"heisenberg\"\nT = 1.0\nh = 0.0\n",
        "[e]\nmodel = \"heisenberg\"\nT = 1.0\nh = -0.1\n",
        "[e]\nmodel = \"nosuchmodel\"\nT = 1.0\nh = 0.1\n",
        "[e]\nmodel = \"heisenberg\"\nT = 1.0\nh = 0.1\nchecks = [\"nosuchcheck\"]\n",
        "[e]\nmodel = \"step2-carnot\"\nn = 2\nm = 3\nstructure_constants = []\nT = 1.0\nh = 0.1\n",
        "not toml at all [",
    ] {
        let p = write_config(tmp.path(), text);
        let out = run(&["run", p.to_str().unwrap()], tmp.path());
        assert_eq!(out.status.code(), Some(2), "{text}");
        assert!(!out.stderr.is_empty());
    }
    let missing = run(&["run", "/nonexistent/config.toml"], tmp.path());
    assert_eq!(missing.status.code(), Some(2));
    assert_eq!(run(&["verify", "nosuchmodel"], tmp.path()).status.code(), Some(2));
    assert_eq!(run(&["verify", "heisenberg", "--tol-numeric", "-1"], tmp.path()).status.code(), Some(2));
}

#[test]
fn verify_product_separates_the_theorems() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(&["verify", "product-heisenberg"], tmp.path());
    assert_eq!(out.status.code(), Some(1));
    let rep = report(tmp.path(), "verify-product-heisenberg");
    for name in ["j2", "htype"] {
        assert_eq!(check(&rep, name)["pass"], false, "{name}");
    }
    for name in ["theorem1", "kappa1-constant", "step2-decomposition", "nondegenerate"] {
        assert_eq!(check(&rep, name)["pass"], true, "{name}");
    }
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("htype") && stdout.contains("FAIL"));
}

#[test]
fn verify_is_deterministic_and_records_the_seed() {
    let tmp = tempfile::tempdir().unwrap();
    let strip = |sub: &str| {
        let out = tmp.path().join(sub);
        assert_eq!(run(&["verify", "heisenberg", "--seed", "7"], &out).status.code(), Some(0));
        let text = std::fs::read_to_string(out.join("verify-heisenberg/report.json")).unwrap();
        text[..text.find("\"timing\"").unwrap()].to_string()
    };
    let a = strip("a");
    assert_eq!(a, strip("b"));
    let rep: Value =
        serde_json::from_str(&std::fs::read_to_string(tmp.path().join("a/verify-heisenberg/report.json")).unwrap())
            .unwrap();
    assert_eq!(rep["seed"], 7);
    for c in rep["checks"].as_array().unwrap() {
        assert!(c["tolerance"].is_number());
    }
}

#[test]
fn flags_override_config_and_environment() {
    let tmp = tempfile::tempdir().unwrap();
    let env_dir = tmp.path().join("env");
    let text = format!(
        "[e]\nmodel = \"heisenberg\"\nT = 1.0\nh = 0.01\nchecks = [\"j2\"]\ntol_algebraic = 1e-3\noutput_dir = \"{}\"\n",
        tmp.path().join("cfg").display()
    );
    let p = write_config(tmp.path(), &text);
    let status = bin().args(["run", p.to_str().unwrap()]).env("SUBRIEM_OUT", &env_dir).output().unwrap().status;
    assert_eq!(status.code(), Some(0));
    assert_eq!(report(&env_dir, "e")["tolerances"]["algebraic"], 1e-3);

    let flag_dir = tmp.path().join("flag");
    let status = bin()
        .args(["run", p.to_str().unwrap(), "--tol-algebraic", "1e-12", "--seed", "3", "--out"])
        .arg(&flag_dir)
        .env("SUBRIEM_OUT", &env_dir)
        .output()
        .unwrap()
        .status;
    assert_eq!(status.code(), Some(0));
    let rep = report(&flag_dir, "e");
    assert_eq!(rep["tolerances"]["algebraic"], 1e-12);
    assert_eq!(rep["seed"], 3);

    let status = bin().args(["run", p.to_str().unwrap()]).output().unwrap().status;
    assert_eq!(status.code(), Some(0));
    assert!(tmp.path().join("cfg/e/report.json").exists());
}

#[test]
fn listing_verbs() {
    let models = bin().arg("list-models").output().unwrap();
    assert_eq!(models.status.code(), Some(0));
    assert_eq!(
        String::from_utf8(models.stdout).unwrap().lines().collect::<Vec<_>>(),
        ["heisenberg", "quaternionic-htype", "product-heisenberg", "hopf"]
    );
    let checks = bin().arg("list-checks").output().unwrap();
    assert_eq!(String::from_utf8(checks.stdout).unwrap().lines().count(), 17);
}
