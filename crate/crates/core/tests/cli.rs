use std::path::Path;
use std::process::{Command, Output};

use hybrid_teleport::scenario::{read_csv, FidelityRow, HomScanRow, Payload, PortCsvRow, ResultEnvelope, ScenarioConfig};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_hybrid-teleport"));
    cmd.env_remove("HYBRID_TELEPORT_SEED").env("SOURCE_DATE_EPOCH", "1700000000");
    cmd
}

fn run_ok(cmd: &mut Command) -> Output {
    let out = cmd.output().unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    out
}

fn envelope(out: &Output) -> ResultEnvelope {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(bin().args(["teleport", "--depolarizing-p", "1.5"]).output().unwrap().status.code(), Some(1));
    assert_eq!(bin().args(["teleport", "--no-such-flag"]).output().unwrap().status.code(), Some(1));
    let bad = write(dir.path(), "bad.toml", "[noise]\nmystery = 1\n");
    assert_eq!(bin().arg("teleport").arg("--config").arg(&bad).output().unwrap().status.code(), Some(1));
    let missing = dir.path().join("absent.toml");
    assert_eq!(bin().arg("teleport").arg("--config").arg(&missing).output().unwrap().status.code(), Some(2));
    // a source this noisy cannot reach the requested teleportation fidelity
    let out = bin()
        .args(["calibrate", "--target-source", "0.8", "--target-average", "0.99"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not achievable"));
    assert_eq!(bin().arg("--help").output().unwrap().status.code(), Some(0));
    assert_eq!(bin().args(["calibrate", "--target-source", "0.5"]).output().unwrap().status.code(), Some(1));
}

#[test]
fn seed_from_environment_and_flag() {
    let env = envelope(&run_ok(bin().args(["teleport", "--shots", "100"]).env("HYBRID_TELEPORT_SEED", "77")));
    assert_eq!(env.seed, 77);
    let env = envelope(&run_ok(
        bin().args(["teleport", "--shots", "100", "--seed", "5"]).env("HYBRID_TELEPORT_SEED", "77"),
    ));
    assert_eq!(env.seed, 5);
    let env = envelope(&run_ok(bin().args(["teleport", "--shots", "100"])));
    assert_eq!(env.seed, hybrid_teleport::rng::DEFAULT_SEED);
}

#[test]
fn flags_override_the_scenario_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "s.toml", "input = \"D\"\nseed = 3\n[noise]\ndepolarizing_p = 0.2\n");
    let env = envelope(&run_ok(bin().arg("teleport").arg("--config").arg(&cfg).args(["--depolarizing-p", "0.4"])));
    assert_eq!(env.config.noise.depolarizing_p, 0.4);
    assert_eq!(env.seed, 3);
    let Payload::Teleport(r) = env.payload else { panic!("wrong payload") };
    assert_eq!(r.records.len(), 1);
    assert!((r.average_fidelity - 0.8).abs() < 1e-12);
}

#[test]
fn config_echo_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let text = "experiment = \"tomo\"\ninput = { alpha = [0.6, 0.0], beta = [0.0, 0.8] }\nshots = 2000\nseed = 12\nport_map = [\"B\", \"A\", \"D\", \"C\"]\n[noise]\ndepolarizing_p = 0.05\n[tomo]\nshots_per_basis = 500\nbootstrap = 10\ncount_model = \"multinomial\"\n";
    let cfg = write(dir.path(), "s.toml", text);
    let env = envelope(&run_ok(bin().arg("tomo").arg("--config").arg(&cfg)));
    let parsed = ScenarioConfig::from_toml(text).unwrap();
    assert_eq!(env.config, parsed);
    let again: ScenarioConfig = ScenarioConfig::from_toml(&env.config.to_toml().unwrap()).unwrap();
    assert_eq!(again, parsed);
    let json = env.to_json().unwrap();
    let back: ResultEnvelope = serde_json::from_str(&json).unwrap();
    assert_eq!(back, env);
}

#[test]
fn csv_tables_parse_back_to_the_payload() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("out.csv");

    let env = envelope(&run_ok(bin().arg("hom-scan").arg("--csv").arg(&csv)));
    let rows: Vec<HomScanRow> = read_csv(std::fs::File::open(&csv).unwrap()).unwrap();
    let Payload::HomScan(scan) = env.payload else { panic!() };
    let flat: Vec<_> = scan.curves.iter().flat_map(|c| c.points.iter().map(move |p| (c, p))).collect();
    assert_eq!(rows.len(), flat.len());
    for (row, (curve, p)) in rows.iter().zip(flat) {
        assert_eq!((row.basis_a, row.basis_b), (curve.basis_a, curve.basis_b));
        assert!((row.delta_x_mm - p.delta_x_mm).abs() <= 1e-12);
        assert!((row.probability - p.probability).abs() <= 1e-12);
    }

    let env = envelope(&run_ok(bin().args(["teleport", "--shots", "4000"]).arg("--csv").arg(&csv)));
    let rows: Vec<PortCsvRow> = read_csv(std::fs::File::open(&csv).unwrap()).unwrap();
    let Payload::Teleport(t) = env.payload else { panic!() };
    for (row, p) in rows.iter().zip(&t.ports) {
        assert_eq!(row.port, p.port);
        assert!((row.observed_pct - p.observed_pct).abs() <= 1e-12);
        assert!((row.stderr_pct - p.stderr_pct).abs() <= 1e-12);
    }

    let env = envelope(&run_ok(bin().args(["tomo", "--bootstrap", "5"]).arg("--csv").arg(&csv)));
    let rows: Vec<FidelityRow> = read_csv(std::fs::File::open(&csv).unwrap()).unwrap();
    let Payload::Tomo(t) = env.payload else { panic!() };
    assert_eq!(rows.len(), 6);
    for (row, e) in rows.iter().zip(&t.entries) {
        assert_eq!(row.state, e.state);
        assert!((row.fidelity - e.fidelity).abs() <= 1e-12);
    }
    let header = std::fs::read_to_string(&csv).unwrap();
    assert!(header.starts_with("state,F,stderr\n"));
}

#[test]
fn every_subcommand_runs() {
    for sub in ["hom-scan", "source-verify", "bsm-verify", "teleport", "tomo", "calibrate"] {
        let env = envelope(&run_ok(bin().args([sub, "--bootstrap", "2"])));
        assert_eq!(env.config.experiment.name(), sub);
        assert_eq!(env.timestamp_unix, 1_700_000_000);
    }
}

#[test]
fn json_only_experiments_refuse_csv() {
    let dir = tempfile::tempdir().unwrap();
    let status = bin()
        .arg("source-verify")
        .arg("--csv")
        .arg(dir.path().join("x.csv"))
        .output()
        .unwrap()
        .status;
    assert_eq!(status.code(), Some(1));
}
