use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::Instant;

use crowdcast::analysis::random_congestion_game;
use crowdcast::engine::{closed_form_trajectory, GameSection};
use crowdcast::loss::rows_mse;
use crowdcast_cli::data::{parse_day_csv, DayMatrix};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn crowdcast(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crowdcast")).args(args).output().unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn read_columns(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    (header, rows)
}

fn column(header: &[String], rows: &[Vec<String>], name: &str) -> Vec<String> {
    let i = header.iter().position(|h| h == name).unwrap();
    rows.iter().map(|r| r[i].clone()).collect()
}

#[test]
fn simulate_matches_closed_form_column_for_column() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("traj.csv");
    let cfg = configs().join("linear_closed_form.toml");
    let res = crowdcast(&["simulate", "--config", path_str(&cfg), "--out", path_str(&out)]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let stdout = String::from_utf8_lossy(&res.stdout);
    assert!(stdout.contains("final point_pred: 0"));

    let (header, rows) = read_columns(&out);
    assert_eq!(header, ["t", "a_0", "y_0", "point_pred"]);
    let ys: Vec<f64> = column(&header, &rows, "y_0").iter().map(|v| v.parse().unwrap()).collect();
    let closed = closed_form_trajectory(0.5, 2.0, 0.0, 0.4, 50);
    assert_eq!(ys.len(), closed.len());
    for (y, c) in ys.iter().zip(&closed) {
        assert!((y - c).abs() <= 1e-12 * c.abs());
    }
}

#[test]
fn naive_flapping_alternates() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("traj.csv");
    let cfg = configs().join("flapping_naive.toml");
    assert!(crowdcast(&["simulate", "--config", path_str(&cfg), "--out", path_str(&out), "--emit-plot-data"])
        .status
        .success());
    let (header, rows) = read_columns(&out);
    assert_eq!(header, ["t", "a_0", "a_1", "a_prob", "y_0", "y_1", "nash", "pred"]);
    let y0 = column(&header, &rows, "y_0");
    assert_eq!(y0.len(), 100);
    for (t, v) in y0.iter().enumerate() {
        assert_eq!(v, if t % 2 == 0 { "1" } else { "0" });
    }

    let (plot_header, plot_rows) = read_columns(&dir.path().join("traj.plot.csv"));
    assert_eq!(plot_header, ["t", "series", "value"]);
    assert_eq!(plot_rows.len(), 100 * 7);
}

#[test]
fn unknown_policy_exits_2_and_lists_names() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "[sim]\nsetting = \"linear\"\nstages = 5\n\n[policy]\nname = \"oracle\"\n").unwrap();
    let res = crowdcast(&["simulate", "--config", path_str(&cfg), "--out", path_str(&dir.path().join("o.csv"))]);
    assert_eq!(res.status.code(), Some(2));
    let err = String::from_utf8_lossy(&res.stderr);
    for name in ["expodamp", "naive", "average", "kalman", "partpred", "fixed"] {
        assert!(err.contains(name), "{err}");
    }
}

#[test]
fn invalid_keys_and_values_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o.csv");
    let cfg = dir.path().join("typo.toml");
    std::fs::write(&cfg, "[sim]\nsetting = \"linear\"\nstages = 5\nsede = 3\n\n[policy]\nname = \"naive\"\n").unwrap();
    let res = crowdcast(&["simulate", "--config", path_str(&cfg), "--out", path_str(&out)]);
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains("sede"));

    std::fs::write(
        &cfg,
        "[sim]\nsetting = \"linear\"\nstages = 5\n\n[policy]\nname = \"naive\"\n\n[linear]\nbeta = 0.5\ngamma = 0.5\nx0_mean = 0.0\nvar_ey = -1.0\n",
    )
    .unwrap();
    let res = crowdcast(&["simulate", "--config", path_str(&cfg), "--out", path_str(&out)]);
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains("linear.var_ey"));
    assert!(!out.exists());
}

#[test]
fn missing_file_exits_1() {
    let res = crowdcast(&["simulate", "--config", "/nonexistent/cfg.toml", "--out", "/tmp/never.csv"]);
    assert_eq!(res.status.code(), Some(1));
}

#[test]
fn analyze_flapping_game() {
    let cfg = configs().join("flapping_game.toml");
    let res = crowdcast(&["analyze", "--config", path_str(&cfg)]);
    assert!(res.status.success());
    let out = String::from_utf8_lossy(&res.stdout);
    assert!(out.contains("candidates: 4"));
    assert!(out.contains("  (0,1) strict\n  (1,0) strict\n"));
    assert!(out.contains("self-fulfilling forecasts: 2\n  (0,1)\n  (1,0)\n"));
    assert!(!out.contains("VIOLATED"));
}

#[test]
fn analyze_constant_game_notes_vacuous_converse() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("flat.toml");
    std::fs::write(&cfg, "[game]\nplayers = 2\nutility = [[1.0, 1.0], [1.0, 1.0]]\n").unwrap();
    let out = crowdcast(&["analyze", "--config", path_str(&cfg)]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success());
    assert!(!text.contains("strict\n"));
    assert!(text.contains("(no strict equilibria)"));
}

#[test]
fn analyze_four_players_three_slots_is_fast() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let game = random_congestion_game(&mut rng, 4, 3).unwrap();
    let section = GameSection::from_game(&game);
    let rows: Vec<String> = section
        .utility
        .unwrap()
        .iter()
        .map(|r| format!("[{}]", r.iter().map(|v| format!("{v:?}")).collect::<Vec<_>>().join(", ")))
        .collect();
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("g.toml");
    std::fs::write(&cfg, format!("[game]\nplayers = 4\nutility = [{}]\n", rows.join(", "))).unwrap();
    let started = Instant::now();
    let out = crowdcast(&["analyze", "--config", path_str(&cfg)]);
    assert!(started.elapsed().as_secs_f64() < 1.0);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("candidates: 81"));
}

#[test]
fn analyze_rejects_oversized_games() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("big.toml");
    let row = format!("[{}]", (1..=13).map(|m| format!("{}.0", -m)).collect::<Vec<_>>().join(", "));
    let rows = vec![row; 3].join(", ");
    std::fs::write(&cfg, format!("[game]\nplayers = 13\nutility = [{rows}]\n")).unwrap();
    let out = crowdcast(&["analyze", "--config", path_str(&cfg)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("too large"));
}

#[test]
fn evaluate_constant_data() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("flat.csv");
    let rows = vec![vec![0.3; 36]; 35];
    std::fs::write(&data, DayMatrix::unlabeled(rows).unwrap().to_csv_string()).unwrap();
    let res = crowdcast(&["evaluate", "--data", path_str(&data), "--policies", "expodamp:alpha=0.4,average,naive"]);
    assert!(res.status.success());
    let table = String::from_utf8_lossy(&res.stdout);
    assert!(table.starts_with("Method"));
    assert!(table.contains("Mean squared error"));
    assert_eq!(table.lines().filter(|l| l.ends_with("| 0.000")).count(), 3, "{table}");
}

#[test]
fn evaluate_rejects_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("ragged.csv");
    std::fs::write(&data, "a,b\n1,2\n3\n").unwrap();
    let res = crowdcast(&["evaluate", "--data", path_str(&data)]);
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains("line 3"));

    std::fs::write(&data, "a,b\n1,2\n3,4\n").unwrap();
    let res = crowdcast(&["evaluate", "--data", path_str(&data), "--policies", "prophet"]);
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains("naive, average, expodamp"));
}

#[test]
fn monte_carlo_reports_losses() {
    let cfg = configs().join("flapping_partpred.toml");
    let res = crowdcast(&["monte-carlo", "--config", path_str(&cfg), "--runs", "8"]);
    assert!(res.status.success());
    let out = String::from_utf8_lossy(&res.stdout);
    assert!(out.contains("runs: 8"));
    assert!(out.contains("self-fulfilling candidate: 1.000"));
}

#[test]
fn two_day_series_parses_and_self_compares_to_zero() {
    let labels: Vec<String> = (0..36).map(|k| format!("{:02}:{:02}", 11 + k * 5 / 60, (k * 5) % 60)).collect();
    let day = |phase: f64| (0..36).map(|k| ((k as f64 / 6.0 + phase).sin() + 1.0) * 20.0).collect::<Vec<f64>>();
    let m = DayMatrix::new(labels, vec![day(0.0), day(0.7)]).unwrap();
    let parsed = parse_day_csv(&m.to_csv_string()).unwrap();
    assert_eq!(parsed.days(), 2);
    assert_eq!(parsed.bins(), 36);
    assert_eq!(rows_mse(parsed.rows(), parsed.rows()).unwrap(), 0.0);

    let mut short = m.to_csv_string();
    short.push_str(&vec!["1"; 35].join(","));
    short.push('\n');
    assert!(parse_day_csv(&short).unwrap_err().to_string().contains("line 4"));
}

proptest! {
    #[test]
    fn day_csv_round_trips(rows in (1usize..8, 1usize..6).prop_flat_map(|(days, bins)| {
        prop::collection::vec(prop::collection::vec(prop_oneof![0.0f64..1e3, any::<f64>().prop_filter("finite", |v| v.is_finite())], bins), days)
    })) {
        let m = DayMatrix::unlabeled(rows).unwrap();
        let text = m.to_csv_string();
        let parsed = parse_day_csv(&text).unwrap();
        prop_assert_eq!(&parsed, &m);
        prop_assert_eq!(parsed.to_csv_string(), text);
    }
}
