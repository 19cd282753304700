use std::process::{Command, Output};

fn annulus(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_annulus"))
        .args(args)
        .output()
        .expect("run annulus")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

const SMALL: [&str; 4] = ["--n-r", "16", "--n-theta", "64"];

#[test]
fn mu_prints_root() {
    let o = annulus(&["mu", "--b", "0.6"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "61.2844751\n");

    let o = annulus(&["mu", "--b", "0.1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["mu"].as_f64().unwrap() - 10.982189807128642).abs() < 1e-8);
}

#[test]
fn invalid_input_exits_2() {
    let o = annulus(&["mu", "--b", "1.5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("b must lie in (0,1)"));

    let o = annulus(&["sweep", "--a", "0.5", "--h-min", "0", "--h-max", "0.6"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("geometry"));

    let o = annulus(&["derivative", "--a", "0.3", "--h", "0"]);
    assert_eq!(o.status.code(), Some(2));

    let o = annulus(&["solve", "--a", "0.3", "--h", "-0.1"]);
    assert_eq!(o.status.code(), Some(2));

    let o = annulus(&["solve", "--a", "0.3", "--h", "0.1", "--n-theta", "30"]);
    assert_eq!(o.status.code(), Some(2));

    let o = annulus(&["solve", "--a", "0.3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sweep_csv_is_decreasing() {
    let mut args = vec![
        "sweep", "--a", "0.3", "--h-min", "0", "--h-max", "0.6", "--steps", "7",
    ];
    args.extend(SMALL);
    let o = annulus(&args);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("h,lambda,lambda_dot,fd_check,lower,upper"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 7);
    let h: Vec<f64> = rows.iter().map(|r| r[0].parse().unwrap()).collect();
    assert_eq!(h, vec![0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6]);
    let lambda: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    assert!(lambda.windows(2).all(|w| w[1] < w[0]));
    assert_eq!(rows[0][3], "");
    assert_eq!(rows[6][3], "");
    assert!(rows[3][3].parse::<f64>().unwrap() < 0.0);
}

#[test]
fn sweep_json_has_flux_arrays() {
    let args = [
        "sweep",
        "--a",
        "0.1",
        "--h-min",
        "0.1",
        "--h-max",
        "0.8",
        "--steps",
        "8",
        "--format",
        "json",
        "--n-r",
        "24",
        "--n-theta",
        "96",
    ];
    let o = annulus(&args);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["a"], 0.1);
    let points = v["points"].as_array().unwrap();
    assert_eq!(points.len(), 8);
    for p in points {
        for key in ["h", "lambda", "lambda_dot", "lower", "upper"] {
            assert!(p[key].is_f64(), "{key}");
        }
        let flux = &p["flux"];
        let n = flux["phi"].as_array().unwrap().len();
        assert_eq!(n, 96);
        assert_eq!(flux["u_n"].as_array().unwrap().len(), n);
        assert_eq!(flux["u_n_sq"].as_array().unwrap().len(), n);
    }
    // h >= a uses the disc as lower bound
    assert_eq!(points[1]["lower_kind"], "disc bound");
    assert_eq!(points[0]["lower_kind"], "disc bound");
}

#[test]
fn invariant_violation_exits_3() {
    // a small hole near the wall is badly resolved on a coarse mesh and λ turns upward
    let mut args = vec![
        "sweep", "--a", "0.1", "--h-min", "0.6", "--h-max", "0.8", "--steps", "3",
    ];
    args.extend(SMALL);
    let o = annulus(&args);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("not decreasing"));
    assert_eq!(stdout(&o).lines().count(), 4);
}

#[test]
fn output_is_deterministic() {
    let mut args = vec![
        "sweep", "--a", "0.6", "--h-min", "0", "--h-max", "0.3", "--steps", "4", "--format", "json",
    ];
    args.extend(SMALL);
    let first = annulus(&args);
    let second = annulus(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn out_flag_and_mesh_dump_write_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("solve.csv");
    let mesh = dir.path().join("mesh.txt");
    let mut args = vec![
        "solve",
        "--a",
        "0.3",
        "--h",
        "0.2",
        "--out",
        out.to_str().unwrap(),
        "--mesh-dump",
        mesh.to_str().unwrap(),
    ];
    args.extend(["--n-r", "4", "--n-theta", "16"]);
    let o = annulus(&args);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(o.stdout.is_empty());

    let csv = std::fs::read_to_string(&out).unwrap();
    let mut lines = csv.lines();
    assert!(lines
        .next()
        .unwrap()
        .starts_with("a,h,lambda,lambda_dot,lower,upper"));
    assert!(lines.next().unwrap().starts_with("0.3,0.2,"));

    let dump = std::fs::read_to_string(&mesh).unwrap();
    assert!(dump.starts_with("# a 0.3 h 0.2 n_r 4 n_theta 16 nodes 80 triangles 128"));
    assert_eq!(dump.lines().filter(|l| l.starts_with("v ")).count(), 80);
    assert_eq!(dump.lines().filter(|l| l.starts_with("t ")).count(), 128);
    let first_tri: Vec<usize> = dump
        .lines()
        .find(|l| l.starts_with("t "))
        .unwrap()
        .split_whitespace()
        .skip(1)
        .map(|s| s.parse().unwrap())
        .collect();
    assert!(first_tri.iter().all(|&i| i < 80));
}

#[test]
fn bounds_command() {
    let o = annulus(&["bounds", "--a", "0.3", "--h", "0.1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let row = text.lines().nth(1).unwrap();
    assert_eq!(row, "0.3,0.1,14.5615227,26.8642366,annulus,");

    let mut args = vec!["bounds", "--a", "0.3", "--h", "0.1", "--check"];
    args.extend(SMALL);
    let o = annulus(&args);
    assert_eq!(o.status.code(), Some(0));

    let o = annulus(&["bounds", "--a", "0.1", "--h", "0.3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["lower_kind"], "disc bound");
}

#[test]
fn derivative_command() {
    let mut args = vec!["derivative", "--a", "0.3", "--h", "0.1", "--delta", "0.01"];
    args.extend(SMALL);
    let o = annulus(&args);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let fields: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    let lambda_dot: f64 = fields[4].parse().unwrap();
    let fd: f64 = fields[5].parse().unwrap();
    assert!(lambda_dot < 0.0 && fd < 0.0);
    assert_eq!(fields[6], "");
}
