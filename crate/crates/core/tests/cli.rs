use std::path::Path;
use std::process::Command as Process;

use ponderomotive::cli::{dispatch, parse_config, Command, RunConfig, RunManifest, MANIFEST_NAME};

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap()
}

fn small() -> RunConfig {
    RunConfig {
        planes: (-8, -6),
        samples_per_plane: 50,
        seed: 3,
        ..Default::default()
    }
}

#[test]
fn scatter_writes_headers_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let m = dispatch(Command::Scatter, &small(), 1, dir.path()).unwrap();
    let records = read(dir.path(), "records.csv");
    assert_eq!(
        records.lines().next().unwrap(),
        "plane_n,x0_over_R,y0_over_R,W_MeV,theta_deg,alpha_deg,X_cm,Y_cm,detected"
    );
    assert_eq!(
        records.lines().count() as u64,
        1 + m.trajectories.total - m.trajectories.failed
    );
    assert_eq!(m.trajectories.total, 150);
    let hist = read(dir.path(), "histogram.csv");
    assert_eq!(hist.lines().next().unwrap(), "alpha_deg,count,n_smoothed");
    assert_eq!(hist.lines().count(), 361);

    let stored: RunManifest = serde_json::from_str(&read(dir.path(), MANIFEST_NAME)).unwrap();
    assert_eq!(stored.seed, 3);
    assert_eq!(stored.outputs, m.outputs);
    assert!(stored.sampling.is_some());
}

#[test]
fn manifest_config_text_replays_byte_for_byte() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let first = dispatch(Command::Scatter, &small(), 1, a.path()).unwrap();
    let replay = parse_config(&first.config_text).unwrap();
    assert_eq!(replay, small());
    let second = dispatch(Command::Scatter, &replay, 1, b.path()).unwrap();
    assert_eq!(first.outputs, second.outputs);
    assert_eq!(read(a.path(), "records.csv"), read(b.path(), "records.csv"));
}

#[test]
fn potential_map_without_asymmetry_is_symmetric_under_axis_swap() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig {
        grid_n: 31,
        ..Default::default()
    };
    cfg.physical.mu = 0.0;
    dispatch(Command::PotentialMap, &cfg, 1, dir.path()).unwrap();
    let text = read(dir.path(), "potential_map.csv");
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "x_over_R,y_over_R,U_MeV");
    let u: Vec<f64> = lines
        .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(u.len(), 31 * 31);
    for j in 0..31 {
        for i in 0..31 {
            let (a, b) = (u[j * 31 + i], u[i * 31 + j]);
            assert!((a - b).abs() <= 1e-12 * a.abs().max(1e-300), "({i},{j})");
        }
    }
}

#[test]
fn asymmetric_potential_map_peaks_off_axis_along_x() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = RunConfig {
        grid_n: 41,
        ..Default::default()
    };
    dispatch(Command::PotentialMap, &cfg, 1, dir.path()).unwrap();
    let rows: Vec<Vec<f64>> = read(dir.path(), "potential_map.csv")
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    let on_x = |x: f64| {
        rows.iter()
            .find(|r| r[1] == 0.0 && (r[0] - x).abs() < 1e-9)
            .unwrap()[2]
    };
    // grid spacing 0.15 R: x = 1.2 is the node nearest the side maximum
    assert!(on_x(1.2) > on_x(0.9) && on_x(1.2) > on_x(1.5));
}

#[test]
fn trajectory_dump_spans_the_pulse() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = RunConfig::default();
    dispatch(Command::Trajectory, &cfg, 1, dir.path()).unwrap();
    let text = read(dir.path(), "trajectory.csv");
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "phi,rho_x,rho_y,zeta,q_x,q_y,q_z,q0,U"
    );
    let phis: Vec<f64> = lines
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(phis[0], -cfg.physical.omega_tau);
    assert_eq!(*phis.last().unwrap(), cfg.physical.omega_tau);
    assert!(phis.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_ponder");
    let dir = tempfile::tempdir().unwrap();

    let bad = dir.path().join("bad.cfg");
    std::fs::write(&bad, "mu = -1.55\nnot_a_key = 1\n").unwrap();
    let out = Process::new(bin)
        .args(["scatter", "--config"])
        .arg(&bad)
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let out = Process::new(bin)
        .args(["potential-map", "--eta0", "-1", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    let out = Process::new(bin)
        .args(["trajectory", "--mu", "0", "--out"])
        .arg(dir.path().join("t"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("t").join(MANIFEST_NAME).exists());
}
