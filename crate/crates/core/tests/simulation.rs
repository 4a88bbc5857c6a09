//! Statistical behavior of the Monte Carlo validator: determinism,
//! agreement with the analytic rates, the conditional-independence
//! structure of the sampled rounds, and estimator consistency.

use poisson_wiretap::channel::{ChannelParams, DetectorConfig};
use poisson_wiretap::simulate::{estimate_conditional_mi, SimulationConfig};
use std::collections::BTreeMap;

fn paper_point(eve_mode: DetectorConfig, p: f64, samples: u64, seed: u64) -> SimulationConfig {
    SimulationConfig {
        params: ChannelParams::new(1.35, 0.5, 2.0, 1.0).unwrap(),
        kappa: 0,
        eve_mode,
        p,
        samples,
        seed,
    }
}

#[test]
fn identical_config_and_seed_give_bit_identical_reports() {
    let config = paper_point(DetectorConfig::Threshold(0), 0.5, 20_000, 42);
    let first = estimate_conditional_mi(&config).unwrap();
    let second = estimate_conditional_mi(&config).unwrap();
    assert_eq!(first, second);

    let pnr = paper_point(DetectorConfig::Pnr, 0.5, 20_000, 42);
    assert_eq!(
        estimate_conditional_mi(&pnr).unwrap(),
        estimate_conditional_mi(&pnr).unwrap()
    );
}

#[test]
fn different_seeds_give_different_histograms() {
    let a = estimate_conditional_mi(&paper_point(DetectorConfig::Threshold(0), 0.5, 20_000, 1))
        .unwrap();
    let b = estimate_conditional_mi(&paper_point(DetectorConfig::Threshold(0), 0.5, 20_000, 2))
        .unwrap();
    assert_ne!(a.counts, b.counts);
}

#[test]
fn empirical_rate_tracks_analytic_rate_threshold() {
    let report =
        estimate_conditional_mi(&paper_point(DetectorConfig::Threshold(0), 0.5, 200_000, 7))
            .unwrap();
    assert!(
        (report.empirical_rate - report.analytic_rate).abs() <= 3.0 * report.standard_error,
        "empirical {} vs analytic {} (se {})",
        report.empirical_rate,
        report.analytic_rate,
        report.standard_error
    );
    assert!(report.empirical_rate >= -3.0 * report.standard_error);
}

#[test]
fn empirical_rate_tracks_analytic_rate_pnr() {
    let report =
        estimate_conditional_mi(&paper_point(DetectorConfig::Pnr, 0.5, 200_000, 11)).unwrap();
    assert!(
        (report.empirical_rate - report.analytic_rate).abs() <= 3.0 * report.standard_error,
        "empirical {} vs analytic {} (se {})",
        report.empirical_rate,
        report.analytic_rate,
        report.standard_error
    );
}

#[test]
fn blind_eavesdropper_leaves_plain_mutual_information() {
    // Without signal gain or dark counts the observation is constant, so
    // I(A;B|E) must estimate I(A;B), which is the analytic rate here.
    let config = SimulationConfig {
        params: ChannelParams::new(1.35, 0.5, 0.0, 0.0).unwrap(),
        kappa: 0,
        eve_mode: DetectorConfig::Threshold(0),
        p: 0.5,
        samples: 100_000,
        seed: 23,
    };
    let report = estimate_conditional_mi(&config).unwrap();
    assert!((report.empirical_rate - report.analytic_rate).abs() <= 3.0 * report.standard_error);
}

/// Parse an `"a,b,e"` histogram key.
fn parse_key(key: &str) -> (u8, u8, u32) {
    let mut parts = key.split(',');
    let a = parts.next().unwrap().parse().unwrap();
    let b = parts.next().unwrap().parse().unwrap();
    let e = parts.next().unwrap().parse().unwrap();
    (a, b, e)
}

#[test]
fn alice_and_eve_are_conditionally_independent_given_bob() {
    let samples = 1_000_000_u64;
    let report =
        estimate_conditional_mi(&paper_point(DetectorConfig::Threshold(0), 0.5, samples, 31))
            .unwrap();

    // Plug-in I(A;E|B) from the reported histogram.
    let mut by_b: BTreeMap<u8, BTreeMap<(u8, u32), u64>> = BTreeMap::new();
    for (key, &count) in &report.counts {
        let (a, b, e) = parse_key(key);
        *by_b.entry(b).or_default().entry((a, e)).or_insert(0) += count;
    }
    let n = samples as f64;
    let mut cmi = 0.0;
    for slice in by_b.values() {
        let n_b: u64 = slice.values().sum();
        let mut pa: BTreeMap<u8, f64> = BTreeMap::new();
        let mut pe: BTreeMap<u32, f64> = BTreeMap::new();
        for (&(a, e), &c) in slice {
            *pa.entry(a).or_insert(0.0) += c as f64 / n_b as f64;
            *pe.entry(e).or_insert(0.0) += c as f64 / n_b as f64;
        }
        for (&(a, e), &c) in slice {
            let p_ae = c as f64 / n_b as f64;
            cmi += (n_b as f64 / n) * p_ae * (p_ae / (pa[&a] * pe[&e])).ln();
        }
    }

    // Under independence the plug-in estimate is chi-square distributed
    // with one degree of freedom per b-slice: mean df/(2n) and standard
    // deviation sqrt(2 df)/(2n). Allow mean + 3 sigma with df = 2.
    let bound = (2.0 + 3.0 * 2.0) / (2.0 * n);
    assert!(cmi <= bound, "I(A;E|B) = {cmi}, bound {bound}");
}

#[test]
fn public_round_flip_rate_matches_detection_error() {
    use poisson_wiretap::channel::tau;
    use poisson_wiretap::simulate::{replica_rng, sample_round, simulate_public_round};
    use rand::Rng;

    let config = paper_point(DetectorConfig::Threshold(0), 0.5, 1, 0);
    let mut rng = replica_rng(99, 0);
    let n = 100_000;
    let mut a_bits = Vec::with_capacity(n);
    let mut b_bits = Vec::with_capacity(n);
    for _ in 0..n {
        let (a, b, _) = sample_round(&config, &mut rng);
        a_bits.push(a);
        b_bits.push(b);
    }
    let x_bits: Vec<u8> = (0..n).map(|_| rng.random_range(0..2) as u8).collect();
    let sent = simulate_public_round(&a_bits, &x_bits).unwrap();
    let reconstructed = simulate_public_round(&sent, &b_bits).unwrap();
    let flips = reconstructed
        .iter()
        .zip(&x_bits)
        .filter(|(r, x)| r != x)
        .count();

    // Reconstruction flips exactly where Alice's detected bit differs
    // from Bob's; compare the empirical rate against the channel value.
    let p_a1_b0 = 1.0 - tau(0.5, 0).unwrap();
    let p_a0_b1 = tau(1.85, 0).unwrap();
    let expected = 0.5 * p_a1_b0 + 0.5 * p_a0_b1;
    let rate = flips as f64 / n as f64;
    let sigma = (expected * (1.0 - expected) / n as f64).sqrt();
    assert!(
        (rate - expected).abs() <= 3.0 * sigma,
        "flip rate {rate} vs expected {expected}"
    );
}

#[test]
fn estimator_gap_shrinks_with_sample_count() {
    // Fixed seed family; the absolute estimation gap must decrease in at
    // least two of the three sample-size increases.
    let sizes = [1_000_u64, 10_000, 100_000, 1_000_000];
    let mut gaps = Vec::new();
    for (i, &samples) in sizes.iter().enumerate() {
        let report = estimate_conditional_mi(&paper_point(
            DetectorConfig::Threshold(0),
            0.5,
            samples,
            100 + i as u64,
        ))
        .unwrap();
        gaps.push((report.empirical_rate - report.analytic_rate).abs());
    }
    let decreases = gaps.windows(2).filter(|w| w[1] < w[0]).count();
    assert!(decreases >= 2, "gaps {gaps:?}");
}
