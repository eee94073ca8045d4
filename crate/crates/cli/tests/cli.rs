use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn gasfold(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gasfold"))
        .args(args)
        .output()
        .expect("binary runs")
}

struct Run {
    dir: TempDir,
}

impl Run {
    fn new(config: &str) -> Self {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("out");
        let text = format!(
            "{config}\n[output]\ndir = {:?}\nformats = [\"csv\", \"json\", \"svg\"]\n",
            out.display().to_string()
        );
        std::fs::write(dir.path().join("run.toml"), text).unwrap();
        Self { dir }
    }

    fn raw(config: &str) -> Self {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("run.toml"), config).unwrap();
        Self { dir }
    }

    fn config(&self) -> PathBuf {
        self.dir.path().join("run.toml")
    }

    fn out(&self) -> PathBuf {
        self.dir.path().join("out")
    }

    fn exec(&self, cmd: &str, extra: &[&str]) -> Output {
        let cfg = self.config();
        let mut args = vec![cmd, "--config", cfg.to_str().unwrap()];
        args.extend_from_slice(extra);
        gasfold(&args)
    }

    fn read(&self, name: &str) -> String {
        std::fs::read_to_string(self.out().join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
    }
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

fn column(csv: &str, name: &str) -> Vec<f64> {
    let header: Vec<&str> = csv.lines().next().unwrap().split(',').collect();
    let i = header.iter().position(|h| *h == name).unwrap();
    rows(csv).iter().map(|r| r[i].parse().unwrap()).collect()
}

fn crossings(xs: &[f64], x: f64) -> usize {
    xs.windows(2)
        .filter(|w| (w[0] - x) * (w[1] - x) < 0.0)
        .count()
}

#[test]
fn thermo_reports_ideal_gas_exponent() {
    let run = Run::new(
        "[model]\ntype = \"ideal_gas\"\nn = 3\nR = 1.0\ns0 = 0.2\nrho_range = [0.1, 10.0]",
    );
    let o = run.exec("thermo", &[]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("rho^-0.666666666666666"), "{text}");
    assert!(text.contains("applicable: yes"), "{text}");
    let json: serde_json::Value = serde_json::from_str(&run.read("thermo.json")).unwrap();
    assert!((json["m"].as_f64().unwrap() + 2.0 / 3.0).abs() < 1e-14);
    assert!(run
        .read("thermo.csv")
        .starts_with("rho,T,p,A,dp_drho,hyperbolic,applicable\n"));
}

#[test]
fn thermo_power_law_is_hyperbolic() {
    let run = Run::new(
        "[model]\ntype = \"power_law\"\nA0 = 1.0\nm = -0.6666666666666666\nrho_range = [0.1, 10.0]",
    );
    let o = run.exec("thermo", &[]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("hyperbolic at 41/41 densities in [0.1, 10]: yes"));
    let json: serde_json::Value = serde_json::from_str(&run.read("thermo.json")).unwrap();
    assert_eq!(json["hyperbolic"], true);
}

#[test]
fn malformed_config_names_the_key() {
    let run = Run::raw("[family]\nlambda = \"one\"\n");
    let o = run.exec("profile", &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("lambda"), "{}", stderr(&o));

    let run = Run::raw("[run]\ntimes = [0.0]\nstep = 0.1\n");
    let o = run.exec("profile", &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("step"));

    let run = Run::raw("[model]\nrho_range = [0.0, 1.0]\n");
    let o = run.exec("thermo", &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("model.rho_range"));
}

#[test]
fn empty_config_prints_usage() {
    let run = Run::raw("# nothing here\n\n");
    let o = run.exec("validate", &[]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("Usage:") && err.contains("validate"), "{err}");
    let o = gasfold(&["profile"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn profiles_fold_after_the_cusp() {
    let run = Run::new("[run]\ntimes = [0.0, 2.7, 3.75]");
    let o = run.exec("profile", &[]);
    assert!(o.status.success(), "{}", stderr(&o));
    for t in ["0", "2.7", "3.75"] {
        assert!(run
            .read(&format!("profile_t{t}.csv"))
            .starts_with("t,x,rho,u,branch\n"));
    }
    let early = column(&run.read("profile_t0.csv"), "x");
    assert!(
        early.windows(2).all(|w| w[1] > w[0]),
        "t=0 profile is not a graph"
    );
    let late = column(&run.read("profile_t3.75.csv"), "x");
    let three = (0..2000)
        .map(|k| -15.0 + 0.01 * k as f64)
        .filter(|&x| crossings(&late, x) == 3)
        .count();
    assert!(three > 0, "no x with three preimages at t=3.75");
    let svg = run.read("profile.svg");
    assert!(svg.contains("t=3.75 plus") && svg.contains("<polyline"));
}

#[test]
fn empty_feasible_set_gives_header_only() {
    let run = Run::new("[family]\nalpha2 = 2.0\n[run]\ntimes = [-10.0]");
    let o = run.exec("profile", &["--format", "csv"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(run.read("profile_t-10.csv"), "t,x,rho,u,branch\n");
    assert!(!run.out().join("profile.svg").exists());
}

#[test]
fn caustic_worked_point() {
    let run = Run::new("[run]\ncaustic_rho_range = [1.0, 2.0]\ncaustic_points = 2");
    let o = run.exec("caustic", &[]);
    assert!(o.status.success(), "{}", stderr(&o));
    let plus = run.read("caustic_plus.csv");
    assert!(plus.starts_with("rho,t,x,branch\n"));
    let first = &rows(&plus)[0];
    assert_eq!(first[0], "1");
    assert!((first[1].parse::<f64>().unwrap() - 2.78).abs() < 1e-12);
    assert!((first[2].parse::<f64>().unwrap() + 3.014_666_666_666_667).abs() < 1e-9);
    assert_eq!(first[3], "plus");
    let minus = rows(&run.read("caustic_minus.csv"));
    assert!((minus[0][1].parse::<f64>().unwrap() - 2.78).abs() < 1e-9);
    assert!((minus[0][2].parse::<f64>().unwrap() + 1.212).abs() < 1e-9);
}

#[test]
fn shock_output_is_reproducible() {
    let run = Run::new("[run]\nshock_span = 1.0");
    let a = run.exec("shock", &[]);
    assert!(a.status.success(), "{}", stderr(&a));
    let first = run.read("shock.csv");
    assert!(first.starts_with("t,x_s,rho1,rho2,residual_H,residual_x\n"));
    for col in ["residual_H", "residual_x"] {
        assert!(column(&first, col).iter().all(|r| *r < 1e-8));
    }
    assert_eq!(
        rows(&first).len(),
        rows(&run.read("shock_plus.csv")).len() * 2
    );
    let svg = run.read("shock.svg");
    assert!(svg.contains("front plus") && svg.contains("caustic minus"));
    let b = run.exec("shock", &[]);
    assert!(b.status.success());
    assert_eq!(first, run.read("shock.csv"));
}

#[test]
fn format_and_out_overrides() {
    let run = Run::new("");
    let other = run.dir.path().join("elsewhere");
    let o = run.exec(
        "caustic",
        &["--out", other.to_str().unwrap(), "--format", "svg"],
    );
    assert!(o.status.success());
    assert!(Path::new(&other).join("caustic.svg").exists());
    assert!(!Path::new(&other).join("caustic_plus.csv").exists());
    assert!(!run.out().exists());
    let o = run.exec("caustic", &["--format", "png"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn validate_passes_on_the_reference_family() {
    let run = Run::new("");
    let o = run.exec("validate", &[]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["passed"], true);
    assert_eq!(report["checks"].as_array().unwrap().len(), 11);
    assert_eq!(
        report,
        serde_json::from_str::<serde_json::Value>(&run.read("validate.json")).unwrap()
    );
}

#[test]
fn validate_detects_a_corrupted_sound_speed() {
    let run = Run::new("[run]\ncorrupt_m_offset = 0.1");
    let o = run.exec("validate", &[]);
    assert_eq!(o.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["passed"], false);
    let check = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["id"] == "solution-property")
        .unwrap();
    assert_eq!(check["passed"], false);
    assert!(check["worst"].as_f64().unwrap() > 1e3 * check["tolerance"].as_f64().unwrap());
}
