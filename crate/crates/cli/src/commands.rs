use serde::Serialize;

use stfresh_core::sweep::{SweepParam, SweepSpec};
use stfresh_core::{
    entropy_vs_radius, run_batch, sweep, timeline, ExperimentConfig, OutputFormat, ReceiverModel,
};

use crate::args::{parse_k_range, parse_w_grid};
use crate::error::{CliError, Result};
use crate::format::{sig9, to_json, Table};

fn render<T: Serialize>(cfg: &ExperimentConfig, rows: &T, table: Table) -> Result<String> {
    Ok(match cfg.output.format {
        OutputFormat::Json => to_json(rows)?,
        OutputFormat::Csv => table.into_string(),
    })
}

#[derive(Serialize)]
struct SweepRecord {
    k: usize,
    r_m: f64,
    h_bits: f64,
    p_s: f64,
    c: f64,
}

pub fn entropy_sweep(cfg: &ExperimentConfig, k_range: &str) -> Result<String> {
    let ks = parse_k_range(k_range)?;
    let curve = entropy_vs_radius(cfg, &ks)?;
    let mut table = Table::new(&["K", "R_m", "H_bits", "p_s", "c"]);
    let mut rows = Vec::with_capacity(curve.len());
    for p in curve {
        table.row([
            p.num_rings.to_string(),
            sig9(p.radius),
            sig9(p.h),
            sig9(p.success_prob),
            sig9(p.correct_prob),
        ]);
        rows.push(SweepRecord {
            k: p.num_rings,
            r_m: p.radius,
            h_bits: p.h,
            p_s: p.success_prob,
            c: p.correct_prob,
        });
    }
    render(cfg, &rows, table)
}

pub fn timeline_cmd(cfg: &ExperimentConfig, slots: Option<u64>) -> Result<String> {
    let slots = slots.unwrap_or(cfg.sim.slots);
    if slots == 0 {
        return Err(CliError::Usage("--slots must be at least 1".into()));
    }
    let trace = timeline(cfg, cfg.sim.base_seed, slots)?;
    let mut table = Table::new(&["slot", "h_bits", "y", "delta", "reception"]);
    for p in &trace {
        table.row([
            p.slot.to_string(),
            sig9(p.h),
            p.y.map(|y| y.to_string()).unwrap_or_default(),
            p.delta.map(|d| d.to_string()).unwrap_or_default(),
            u8::from(p.reception).to_string(),
        ]);
    }
    render(cfg, &trace, table)
}

#[derive(Serialize)]
struct CdfRecord {
    alpha: f64,
    r_m: f64,
    w_bits: f64,
    cdf: f64,
}

pub fn cdf(cfg: &ExperimentConfig, radii: &[f64], alphas: &[f64], w_grid: &str) -> Result<String> {
    let thresholds = parse_w_grid(w_grid)?;
    let width = cfg.spatial.ring_width();
    let radii = if radii.is_empty() {
        vec![cfg.spatial.coverage_radius()]
    } else {
        radii.to_vec()
    };
    let alphas = if alphas.is_empty() {
        vec![cfg.spatial.alpha()]
    } else {
        alphas.to_vec()
    };

    let mut table = Table::new(&["alpha", "R_m", "w_bits", "cdf"]);
    let mut rows = Vec::new();
    for &alpha in &alphas {
        for &radius in &radii {
            if !(radius > 0.0 && radius.is_finite()) {
                return Err(CliError::Usage(format!("invalid radius {radius}")));
            }
            let rings = ((radius / width).round() as usize).max(1);
            let spatial = cfg.spatial.with_num_rings(rings)?.with_alpha(alpha)?;
            let snapped = spatial.coverage_radius();
            if (snapped - radius).abs() > 1e-9 {
                eprintln!("note: radius {} m snapped to {} m ({rings} rings)", sig9(radius), sig9(snapped));
            }
            let model = ReceiverModel::new(cfg.source, &spatial, &cfg.channel)?;
            let values = model.uncertainty_cdf(&thresholds)?;
            for (&w, &f) in thresholds.iter().zip(&values) {
                table.row([sig9(alpha), sig9(snapped), sig9(w), sig9(f)]);
                rows.push(CdfRecord {
                    alpha,
                    r_m: snapped,
                    w_bits: w,
                    cdf: f,
                });
            }
        }
    }
    render(cfg, &rows, table)
}

pub fn optimize(cfg: &ExperimentConfig, param: &str, values: &[f64], k_max: Option<usize>) -> Result<String> {
    let param: SweepParam = param
        .parse()
        .map_err(|e: stfresh_core::Error| CliError::Usage(e.to_string()))?;
    if k_max == Some(0) {
        return Err(CliError::Usage("--k-max must be at least 1".into()));
    }
    let spec = SweepSpec {
        param,
        values: values.to_vec(),
        base: cfg.clone(),
        max_rings: k_max,
    };
    spec.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let table_rows = sweep(&spec)?;
    if !table_rows.radius_non_decreasing() {
        eprintln!("note: optimal radius is not monotone non-decreasing over the {param} grid");
    }
    if !table_rows.entropy_non_increasing() {
        eprintln!("note: minimum entropy is not monotone non-increasing over the {param} grid");
    }

    let mut table = Table::new(&["sweep_value", "K_star", "R_m_star", "H_star", "R_aoi"]);
    for r in &table_rows.rows {
        table.row([
            sig9(r.sweep_value),
            r.k_star.to_string(),
            sig9(r.r_m_star),
            sig9(r.h_star),
            sig9(r.r_aoi),
        ]);
    }
    render(cfg, &table_rows.rows, table)
}

#[derive(Serialize)]
struct SimulateReport {
    runs: Vec<RunRecord>,
    summary: Summary,
}

#[derive(Serialize)]
struct RunRecord {
    run: usize,
    seed: u64,
    time_avg_h: f64,
    empirical_ps: f64,
    aoi_mean: f64,
}

#[derive(Serialize)]
struct Summary {
    mean: f64,
    stderr: f64,
    analytic_h: f64,
    rel_err: f64,
}

pub fn simulate(cfg: &ExperimentConfig, runs: Option<usize>, slots: Option<u64>) -> Result<String> {
    let runs = runs.unwrap_or(cfg.sim.topologies);
    let slots = slots.unwrap_or(cfg.sim.slots);
    if runs == 0 {
        return Err(CliError::Usage("--runs must be at least 1".into()));
    }
    if slots == 0 {
        return Err(CliError::Usage("--slots must be at least 1".into()));
    }
    let analytic_h = ReceiverModel::new(cfg.source, &cfg.spatial, &cfg.channel)?.avg_conditional_entropy()?;
    let batch = run_batch(cfg, runs, slots, cfg.sim.base_seed)?;

    let mut table = Table::new(&["run", "seed", "time_avg_h", "empirical_ps", "aoi_mean"]);
    let records: Vec<RunRecord> = batch
        .runs
        .iter()
        .enumerate()
        .map(|(i, r)| RunRecord {
            run: i,
            seed: r.seed,
            time_avg_h: r.time_avg_h,
            empirical_ps: r.empirical_ps,
            aoi_mean: r.empirical_aoi_mean,
        })
        .collect();
    for r in &records {
        table.row([
            r.run.to_string(),
            r.seed.to_string(),
            sig9(r.time_avg_h),
            sig9(r.empirical_ps),
            sig9(r.aoi_mean),
        ]);
    }
    let summary = Summary {
        mean: batch.mean,
        stderr: batch.std_error,
        analytic_h,
        rel_err: (batch.mean - analytic_h).abs() / analytic_h,
    };
    let mut tail = Table::new(&["mean", "stderr", "analytic_H", "rel_err"]);
    tail.row([
        sig9(summary.mean),
        sig9(summary.stderr),
        sig9(summary.analytic_h),
        sig9(summary.rel_err),
    ]);
    table.append(tail);
    render(cfg, &SimulateReport { runs: records, summary }, table)
}
