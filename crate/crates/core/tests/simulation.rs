use stfresh_core::sim::{run_with, AccessModel, Simulation};
use stfresh_core::{
    conditional_entropy_h, run, run_batch, success_prob, timeline, ChannelConfig, ExperimentConfig, Preset,
    ReceiverModel, SourceParams, SpatialConfig,
};

fn desk() -> ExperimentConfig {
    Preset::Desk.config()
}

fn analytic(cfg: &ExperimentConfig) -> f64 {
    ReceiverModel::new(cfg.source, &cfg.spatial, &cfg.channel)
        .unwrap()
        .avg_conditional_entropy()
        .unwrap()
}

#[test]
fn silent_population_never_updates() {
    let mut cfg = desk();
    cfg.channel = ChannelConfig::new(0.0, 0.1).unwrap();
    let r = run_with(&cfg, 3, 20_000, AccessModel::Aggregated).unwrap();
    assert_eq!(r.reception_count, 0);
    assert_eq!(r.time_avg_h, cfg.source.stationary_entropy());
    let r = run_with(&cfg, 3, 2_000, AccessModel::PerNode).unwrap();
    assert_eq!(r.reception_count, 0);
}

#[test]
fn single_ring_readings_are_never_flipped() {
    let mut cfg = desk();
    cfg.spatial = SpatialConfig::new(10.0, 1, 0.05, 0.5).unwrap();
    cfg.channel = ChannelConfig::new(0.05, 0.1).unwrap();
    let r = run_with(&cfg, 11, 100_000, AccessModel::Aggregated).unwrap();
    assert!(r.reception_count > 1000);
    assert_eq!(r.flipped_readings, 0);
}

#[test]
fn runs_are_reproducible() {
    let cfg = desk();
    let a = run_with(&cfg, 5, 30_000, AccessModel::Aggregated).unwrap();
    let b = run_with(&cfg, 5, 30_000, AccessModel::Aggregated).unwrap();
    assert_eq!(a, b);
    let c = run_with(&cfg, 6, 30_000, AccessModel::Aggregated).unwrap();
    assert_ne!(a, c);

    let one = run_batch(&cfg, 1, cfg.sim.slots, 77).unwrap();
    assert_eq!(one.runs[0], run(&cfg, 77).unwrap());
    assert_eq!(one.mean, one.runs[0].time_avg_h);
    assert_eq!(one.std_error, 0.0);

    let x = run_batch(&cfg, 4, 20_000, 9).unwrap();
    let y = run_batch(&cfg, 4, 20_000, 9).unwrap();
    assert_eq!(x, y);
    assert_eq!(x.runs[2], run_with(&cfg, stfresh_core::sim::run_seed(9, 2), 20_000, AccessModel::Aggregated).unwrap());
}

#[test]
fn batch_rejects_zero_topologies() {
    assert!(run_batch(&desk(), 0, 10, 1).is_err());
}

#[test]
fn trace_decimation_keeps_every_nth_slot() {
    let mut cfg = desk();
    cfg.sim.trace_decimation = 100;
    let r = run_with(&cfg, 1, 1_000, AccessModel::Aggregated).unwrap();
    let slots: Vec<u64> = r.h_samples.iter().map(|s| s.0).collect();
    assert_eq!(slots, (0..10).map(|i| i * 100).collect::<Vec<_>>());
}

#[test]
fn desk_scale_matches_analysis() {
    let cfg = desk();
    let batch = run_batch(&cfg, 5, 100_000, cfg.sim.base_seed).unwrap();
    let h = analytic(&cfg);
    let rel = (batch.mean - h).abs() / h;
    assert!(rel < 0.05, "sim {} vs analysis {h}", batch.mean);
}

#[test]
fn empirical_success_rate_matches_closed_form() {
    let cfg = desk();
    let slots = 1_000_000;
    let r = run_with(&cfg, 21, slots, AccessModel::Aggregated).unwrap();
    let m = cfg.spatial.node_count().rounded as f64;
    let p = success_prob(m, cfg.channel.zeta(), cfg.channel.epsilon());
    let se = (p * (1.0 - p) / slots as f64).sqrt();
    assert!((r.empirical_ps - p).abs() < 4.0 * se, "{} vs {p}", r.empirical_ps);
}

/// Pearson statistic of the gaps between receptions against the geometric
/// age law; gaps are i.i.d. unlike per-slot ages.
#[test]
fn silent_gaps_follow_geometric_age_law() {
    let cfg = Preset::Fig5.config();
    let m = cfg.spatial.node_count().rounded as f64;
    let p = success_prob(m, cfg.channel.zeta(), cfg.channel.epsilon());
    let sim = Simulation::new(&cfg, 4).unwrap();

    const BINS: usize = 30;
    let mut counts = [0u64; BINS + 1];
    let mut last: Option<u64> = None;
    for rec in sim.take(1_000_000) {
        if rec.reception.is_some() {
            if let Some(prev) = last {
                let gap = (rec.slot - prev - 1) as usize;
                counts[gap.min(BINS)] += 1;
            }
            last = Some(rec.slot);
        }
    }
    let n: u64 = counts.iter().sum();
    let mut chi2 = 0.0;
    for (d, &obs) in counts.iter().enumerate() {
        let prob = if d < BINS {
            stfresh_core::aoi_pmf(p, d as u64).unwrap()
        } else {
            stfresh_core::channel::aoi_tail(p, BINS as u64).unwrap()
        };
        let expected = prob * n as f64;
        assert!(expected > 5.0);
        chi2 += (obs as f64 - expected).powi(2) / expected;
    }
    // chi-square critical value, 30 degrees of freedom, significance 0.01
    assert!(chi2 < 50.892, "chi2 = {chi2} over {n} gaps");
}

#[test]
fn flip_rate_tracks_realized_topology() {
    let mut cfg = Preset::Fig5.config();
    cfg.spatial = cfg.spatial.with_alpha(0.06).unwrap();
    let sim = Simulation::new(&cfg, 8).unwrap();
    let c_topo = sim.topology().realized_correct_prob(&cfg.spatial);
    let (mut n, mut flips) = (0u64, 0u64);
    for rec in sim.take(1_000_000) {
        if let Some((_, correct)) = rec.reception {
            n += 1;
            flips += u64::from(!correct);
        }
    }
    let p = 1.0 - c_topo;
    let se = (p * (1.0 - p) / n as f64).sqrt();
    let rate = flips as f64 / n as f64;
    assert!((rate - p).abs() < 3.0 * se, "flip rate {rate} vs {p}");
}

#[test]
fn per_node_and_aggregated_access_agree() {
    // m = round(0.05 pi 10^2) = 16 nodes over two rings
    let cfg = ExperimentConfig {
        source: SourceParams::new(0.01, 2.0).unwrap(),
        spatial: SpatialConfig::new(5.0, 2, 0.05, 0.3).unwrap(),
        channel: ChannelConfig::new(0.06, 0.2).unwrap(),
        ..desk()
    };
    assert!(cfg.spatial.node_count().rounded <= 20);
    let slots = 400_000;
    let a = run_with(&cfg, 31, slots, AccessModel::Aggregated).unwrap();
    let b = run_with(&cfg, 31, slots, AccessModel::PerNode).unwrap();
    assert_eq!(
        Simulation::new(&cfg, 31).unwrap().topology(),
        Simulation::new(&cfg, 31).unwrap().with_access(AccessModel::PerNode).topology()
    );

    let p = (a.empirical_ps + b.empirical_ps) / 2.0;
    let se = (2.0 * p * (1.0 - p) / slots as f64).sqrt();
    assert!((a.empirical_ps - b.empirical_ps).abs() < 4.0 * se);

    let fa = a.flipped_readings as f64 / a.reception_count as f64;
    let fb = b.flipped_readings as f64 / b.reception_count as f64;
    let f = (fa + fb) / 2.0;
    let se = (f * (1.0 - f) * (1.0 / a.reception_count as f64 + 1.0 / b.reception_count as f64)).sqrt();
    assert!((fa - fb).abs() < 4.0 * se);
}

#[test]
fn timeline_follows_closed_form_between_resets() {
    let cfg = Preset::Fig2a.config();
    let model = ReceiverModel::new(cfg.source, &cfg.spatial, &cfg.channel).unwrap();
    let c = model.correct_prob();
    let trace = timeline(&cfg, 12, 5_000).unwrap();
    assert_eq!(trace.len(), 5_000);
    let mut seen_reception = false;
    for (i, p) in trace.iter().enumerate() {
        assert_eq!(p.slot, i as u64);
        match (p.y, p.delta) {
            (Some(y), Some(d)) => {
                seen_reception = true;
                if p.reception {
                    assert_eq!(d, 0);
                }
                let expect = conditional_entropy_h(&cfg.source, c, y, d).unwrap();
                assert!((p.h - expect).abs() < 1e-12);
            }
            (None, None) => {
                assert!(!seen_reception);
                assert_eq!(p.h, cfg.source.stationary_entropy());
            }
            _ => unreachable!(),
        }
    }
    assert!(seen_reception);
}

#[test]
fn wider_coverage_resets_more_often_to_higher_values() {
    let stats = |preset: Preset| {
        let cfg = preset.config();
        let trace = timeline(&cfg, 2, 50_000).unwrap();
        let resets: Vec<f64> = trace.iter().filter(|p| p.reception).map(|p| p.h).collect();
        let mean = resets.iter().sum::<f64>() / resets.len() as f64;
        (resets.len(), mean)
    };
    let (n_small, h_small) = stats(Preset::Fig2a);
    let (n_wide, h_wide) = stats(Preset::Fig2b);
    assert!(n_wide > n_small, "{n_wide} vs {n_small}");
    assert!(h_wide > h_small, "{h_wide} vs {h_small}");
}
