use std::process::{Command, Output};

use stfresh_core::ExperimentConfig;

fn stfresh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stfresh"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = stfresh(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["entropy-sweep", "--k-range", "9:3"][..],
        &["simulate", "--runs", "0"],
        &["simulate", "--preset", "fig7"],
        &["optimize", "--values", "5,1"],
        &["optimize", "--sweep", "theta"],
        &["cdf", "--w-grid", "0:1"],
        &["entropy-sweep", "--eta", "300"],
        &["timeline", "--k", "0"],
        &["frobnicate"],
        &["entropy-sweep", "--config", "/nonexistent/cfg.json"],
    ] {
        assert_eq!(stfresh(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn non_convergent_truncation_exits_with_three() {
    // a periodic source observed almost never
    let out = stfresh(&["entropy-sweep", "--q", "1", "--eta", "1", "--zeta", "1e-12", "--k-range", "1:1"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn dumped_config_reparses_identically() {
    let text = stdout(&["simulate", "--preset", "fig2b", "--eta", "3", "--seed", "99", "--dump-config"]);
    let cfg: ExperimentConfig = serde_json::from_str(&text).unwrap();
    assert_eq!(cfg.source.eta(), 3.0);
    assert_eq!(cfg.sim.base_seed, 99);
    assert_eq!(cfg.spatial.num_rings(), 15);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cfg.json");
    std::fs::write(&path, &text).unwrap();
    let again = stdout(&["simulate", "--config", path.to_str().unwrap(), "--dump-config"]);
    assert_eq!(again, text);
    assert_eq!(serde_json::from_str::<ExperimentConfig>(&again).unwrap(), cfg);
}

#[test]
fn config_and_preset_conflict() {
    assert_eq!(
        stfresh(&["timeline", "--config", "x.json", "--preset", "fig3"]).status.code(),
        Some(2)
    );
}

#[test]
fn entropy_sweep_schema_and_minima() {
    for eta in ["1", "5"] {
        let text = stdout(&["entropy-sweep", "--eta", eta]);
        assert!(text.starts_with("K,R_m,H_bits,p_s,c\n"));
        let h: Vec<f64> = rows(&text).iter().map(|r| r[2].parse().unwrap()).collect();
        assert_eq!(h.len(), 60);
        let argmin = (0..h.len()).min_by(|&a, &b| h[a].total_cmp(&h[b])).unwrap();
        assert!(argmin > 0 && argmin < 59, "eta={eta}");
    }
}

#[test]
fn flat_reliability_puts_the_minimum_at_unit_load() {
    let text = stdout(&["entropy-sweep", "--alpha", "0"]);
    let r = rows(&text);
    let best = r
        .iter()
        .min_by(|a, b| a[2].parse::<f64>().unwrap().total_cmp(&b[2].parse().unwrap()))
        .unwrap();
    // load 1.03 at K = 27, the grid point nearest to one packet per slot
    assert_eq!(best[0], "27");
    assert!(r.iter().all(|row| row[4] == "1"));
}

#[test]
fn timeline_schema() {
    let text = stdout(&["timeline", "--preset", "fig2a", "--slots", "3000"]);
    assert!(text.starts_with("slot,h_bits,y,delta,reception\n"));
    let r = rows(&text);
    assert_eq!(r.len(), 3000);
    for row in &r {
        assert_eq!(row.len(), 5);
        if row[4] == "1" {
            assert_eq!(row[3], "0");
        }
    }
}

#[test]
fn wider_timeline_resets_more_often() {
    let count = |preset| {
        let text = stdout(&["timeline", "--preset", preset, "--slots", "20000"]);
        rows(&text).iter().filter(|r| r[4] == "1").count()
    };
    assert!(count("fig2b") > count("fig2a"));
}

#[test]
fn cdf_curves_end_at_one_and_shift_right_with_alpha() {
    let text = stdout(&["cdf", "--radii", "25,125", "--alphas", "0.02,0.06", "--w-grid", "0:1:101"]);
    assert!(text.starts_with("alpha,R_m,w_bits,cdf\n"));
    let r = rows(&text);
    assert_eq!(r.len(), 4 * 101);
    for curve in r.chunks(101) {
        assert_eq!(curve[100][2], "1");
        assert_eq!(curve[100][3], "1");
    }
    let value = |i: usize| r[i][3].parse::<f64>().unwrap();
    for w in 0..101 {
        assert!(value(202 + w) <= value(w) + 1e-12);
        assert!(value(303 + w) <= value(101 + w) + 1e-12);
    }
    // the 125 m curve snaps to 13 rings
    assert_eq!(r[101][1], "130");
}

#[test]
fn optimize_csv_and_json_agree() {
    let csv = stdout(&["optimize", "--values", "1,5", "--k-max", "40"]);
    assert!(csv.starts_with("sweep_value,K_star,R_m_star,H_star,R_aoi\n"));
    let json = stdout(&["optimize", "--values", "1,5", "--k-max", "40", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    let arr = v.as_array().unwrap();
    assert_eq!(arr.len(), 2);
    for (row, obj) in rows(&csv).iter().zip(arr) {
        assert_eq!(row[1], obj["k_star"].to_string());
        assert!(obj["r_aoi_erasure_variant"].as_f64().unwrap() > obj["r_aoi"].as_f64().unwrap());
    }
}

#[test]
fn simulate_reports_runs_and_summary() {
    let text = stdout(&["simulate", "--preset", "desk"]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "run,seed,time_avg_h,empirical_ps,aoi_mean");
    assert_eq!(lines.len(), 1 + 5 + 2);
    assert_eq!(lines[6], "mean,stderr,analytic_H,rel_err");
    let rel: f64 = lines[7].split(',').nth(3).unwrap().parse().unwrap();
    assert!(rel < 0.05);

    let json = stdout(&["simulate", "--preset", "desk", "--runs", "2", "--slots", "5000", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["runs"].as_array().unwrap().len(), 2);
    assert!(v["summary"]["analytic_h"].as_f64().unwrap() > 0.0);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let out = stfresh(&["entropy-sweep", "--k-range", "1:5", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 6);
}
