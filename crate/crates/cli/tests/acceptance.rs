//! Acceptance suite: one test per criterion, each printing a PASS line
//! with the measured quantities (visible under `--nocapture`). Every
//! tolerance is pinned here.
//!
//! Criteria 6 and 9 encode expectations the slotted model does not
//! satisfy; they are asserted as stated and fail with the measured
//! discrepancies. See the README's known-discrepancies section.

#![allow(clippy::needless_range_loop)] // index loops mirror the joint-table math

use poisson_wiretap::capacity::{
    capacity_oneway_pnr, capacity_oneway_pnr_closedform, capacity_oneway_threshold,
    capacity_twoway_pnr, capacity_twoway_threshold, optimize_preindex, rate_twoway_pnr,
    rate_twoway_threshold,
};
use poisson_wiretap::channel::{
    n_trunc, poisson_pmf, reduce_to_binary, tau, BinaryChannel, ChannelParams, DetectorConfig, Side,
};
use poisson_wiretap::degradation::{classify_binary, classify_threshold, DegradationClass};
use poisson_wiretap::infotheory::{
    binary_entropy, mi_pnr, mi_pnr_preindex, mi_threshold, mi_threshold_preindex, PreIndex,
};
use poisson_wiretap::simulate::{estimate_conditional_mi, SimulationConfig};
use poisson_wiretap_cli::ops::{find_crossover, optimize_xi, BaseParams, RegimeSel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use std::time::Instant;

fn params(xi: f64, zeta: f64, ggp: f64, gnp: f64) -> ChannelParams {
    ChannelParams::new(xi, zeta, ggp, gnp).unwrap()
}

fn base(xi: f64, zeta: f64, ggp: f64, gnp: f64) -> BaseParams {
    BaseParams {
        xi,
        zeta,
        gamma_gp: ggp,
        gamma_np: gnp,
        kappa: 0,
        kappa_prime: 0,
    }
}

/// The random parameter grid shared by the ordering and positivity
/// criteria: xi in [0.1, 10], zeta in [0.05, 2], gamma_gp in [0.1, 5],
/// gamma_np in [0.5, 2], on-off detectors.
fn random_grid(count: usize, seed: u64) -> Vec<ChannelParams> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            params(
                rng.random_range(0.1..10.0),
                rng.random_range(0.05..2.0),
                rng.random_range(0.1..5.0),
                rng.random_range(0.5..2.0),
            )
        })
        .collect()
}

#[test]
fn criterion_01_optimal_signal_strength() {
    let start = Instant::now();
    let optimum = optimize_xi(&base(0.0, 0.5, 2.0, 1.0), RegimeSel::TwPnr, (0.1, 10.0)).unwrap();
    let elapsed = start.elapsed();
    assert!(!optimum.monotone, "interior optimum expected");
    assert!(
        (1.30..=1.40).contains(&optimum.xi),
        "acceptance 01 (optimal-xi): FAIL -- xi* = {}",
        optimum.xi
    );
    assert!(elapsed.as_secs() < 30, "budget exceeded: {elapsed:?}");
    println!(
        "acceptance 01 (optimal-xi): PASS -- xi* = {:.4}, value = {:.6} nats, {:?}",
        optimum.xi, optimum.value, elapsed
    );
}

#[test]
fn criterion_02_crossover_reproduction() {
    for (xi, target) in [(1.35, 0.5626), (5.0, 0.8014)] {
        let start = Instant::now();
        let crossing = find_crossover(
            &base(xi, 0.5, 0.0, 1.0),
            RegimeSel::TwPnr,
            RegimeSel::OwPnr,
            (0.05, 3.0),
        )
        .unwrap();
        let elapsed = start.elapsed();
        assert!(
            (crossing.gamma_gp - target).abs() <= 0.005,
            "acceptance 02 (crossover): FAIL -- at xi = {xi}: gamma_gp* = {}, target {target}",
            crossing.gamma_gp
        );
        assert!(elapsed.as_secs() < 60, "budget exceeded: {elapsed:?}");
        println!(
            "acceptance 02 (crossover): PASS -- xi = {xi}: gamma_gp* = {:.4} (target {target} +/- 0.005), {:?}",
            crossing.gamma_gp, elapsed
        );
    }
}

#[test]
fn criterion_03_oneway_zero_under_interception() {
    let point = params(1.35, 0.5, 2.0, 1.0);
    let threshold = capacity_oneway_threshold(&point, 0, 0).unwrap();
    assert_eq!(threshold.value, 0.0, "threshold capacity must be exactly 0");
    assert_eq!(threshold.degradation, DegradationClass::AntiDegraded);
    let pnr = capacity_oneway_pnr(&point).unwrap();
    assert_eq!(pnr.value, 0.0, "pnr capacity must be exactly 0");
    assert_eq!(pnr.degradation, DegradationClass::AntiDegraded);
    println!(
        "acceptance 03 (one-way zero under interception): PASS -- both detectors exactly 0, anti-degraded"
    );
}

#[test]
fn criterion_04_ordering_suite() {
    let start = Instant::now();
    let grid = random_grid(100, 0x04de4);
    let mut min_vs_oneway = f64::INFINITY;
    let mut min_vs_pnr = f64::INFINITY;
    for point in &grid {
        let tw_thr = capacity_twoway_threshold(point, 0, 0).unwrap().value;
        let tw_pnr = capacity_twoway_pnr(point, 0).unwrap().value;
        let ow_thr = capacity_oneway_threshold(point, 0, 0).unwrap().value;
        min_vs_oneway = min_vs_oneway.min(tw_thr - ow_thr);
        min_vs_pnr = min_vs_pnr.min(tw_thr - tw_pnr);
        assert!(
            tw_thr >= ow_thr - 1e-9,
            "acceptance 04 (ordering): FAIL -- two-way {tw_thr} below one-way {ow_thr} at {point:?}"
        );
        assert!(
            tw_thr >= tw_pnr - 1e-9,
            "acceptance 04 (ordering): FAIL -- threshold {tw_thr} below pnr {tw_pnr} at {point:?}"
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 300, "budget exceeded: {elapsed:?}");
    println!(
        "acceptance 04 (ordering): PASS -- 100 points, min slack vs one-way {min_vs_oneway:.3e}, vs pnr {min_vs_pnr:.3e}, {elapsed:?}"
    );
}

#[test]
fn criterion_05_twoway_positivity() {
    let grid = random_grid(100, 0x04de4);
    let mut checked = 0;
    let mut min_value = f64::INFINITY;
    for point in &grid {
        let eve = reduce_to_binary(point, Side::Eavesdropper, 0);
        let strictly_noisy = eve.r1 > 1e-9 && eve.r0 < 1.0 - 1e-9 && eve.r0 - eve.r1 > 1e-9;
        if point.xi() < 0.1 || !strictly_noisy {
            continue;
        }
        checked += 1;
        let tw = capacity_twoway_threshold(point, 0, 0).unwrap().value;
        min_value = min_value.min(tw);
        assert!(
            tw > 1e-6,
            "acceptance 05 (positivity): FAIL -- {tw} at {point:?}"
        );
    }
    assert!(checked >= 50, "grid left too few strictly noisy points");
    println!(
        "acceptance 05 (positivity): PASS -- {checked} strictly noisy points, min two-way capacity {min_value:.3e} nats"
    );
}

#[test]
fn criterion_06_closed_form_consistency() {
    // As published, the closed form should match the series route to 1e-4
    // nats at matched dark counts. The closed form is the
    // continuous-observation limit and genuinely exceeds the slotted
    // series value at these intensities (the two converge only as the
    // per-slot intensities tend to zero), so this criterion records the
    // discrepancy rather than papering over it.
    let mut worst: (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
    for i in 0..20 {
        let gamma_gp = 0.1 + 0.8 * i as f64 / 19.0;
        let point = params(1.35, 0.5, gamma_gp, 1.0);
        let series = capacity_oneway_pnr(&point).unwrap().value;
        let closed = capacity_oneway_pnr_closedform(&point).unwrap().value;
        let gap = (series - closed).abs();
        if gap > worst.0 {
            worst = (gap, gamma_gp, series, closed);
        }
    }
    assert!(
        worst.0 <= 1e-4,
        "acceptance 06 (closed-form consistency): FAIL -- max |series - closed| = {:.3e} nats at \
         gamma_gp = {:.3} (series {:.6}, closed {:.6}); the closed form is the \
         continuous-observation limit and exceeds the slotted series value at xi = 1.35, \
         zeta = 0.5",
        worst.0,
        worst.1,
        worst.2,
        worst.3
    );
    println!(
        "acceptance 06 (closed-form consistency): PASS -- max gap {:.3e} nats",
        worst.0
    );
}

// --- plug-in oracles for criterion 07, independent of the library kernels ---

fn plugin_mi(joint: &[Vec<f64>]) -> f64 {
    let rows: Vec<f64> = joint.iter().map(|r| r.iter().sum()).collect();
    let mut cols = vec![0.0; joint[0].len()];
    for row in joint {
        for (j, &v) in row.iter().enumerate() {
            cols[j] += v;
        }
    }
    let mut mi = 0.0;
    for (i, row) in joint.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if v > 0.0 {
                mi += v * (v / (rows[i] * cols[j])).ln();
            }
        }
    }
    mi
}

fn conditional_mi_over_slices(slices: &[(f64, Vec<Vec<f64>>)]) -> f64 {
    slices
        .iter()
        .filter(|(w, _)| *w > 0.0)
        .map(|(w, joint)| w * plugin_mi(joint))
        .sum()
}

#[test]
fn criterion_07_oracle_equivalence() {
    let mut rng = ChaCha12Rng::seed_from_u64(0x07ac1e);
    let rel = |got: f64, oracle: f64| (got - oracle).abs() / got.abs().max(oracle.abs());
    let mut worst = 0.0_f64;
    for _ in 0..50 {
        let xi = rng.random_range(0.3..4.0);
        let zeta = rng.random_range(0.05..1.5);
        let ggp = rng.random_range(0.2..3.0);
        let gnp = rng.random_range(0.5..2.0);
        let p = rng.random_range(0.1..0.9);
        let p0 = rng.random_range(0.6..1.0);
        let p1 = rng.random_range(0.0..0.4);
        let kappa = rng.random_range(0..3_u32);
        let kappa_prime = rng.random_range(0..3_u32);
        let point = params(xi, zeta, ggp, gnp);
        let pre = PreIndex::new(p0, p1, p).unwrap();

        // Threshold MI against the 2x2 joint.
        let (r0, r1) = (tau(zeta, kappa).unwrap(), tau(xi + zeta, kappa).unwrap());
        let joint = vec![
            vec![p * r0, p * (1.0 - r0)],
            vec![(1.0 - p) * r1, (1.0 - p) * (1.0 - r1)],
        ];
        worst = worst.max(rel(
            mi_threshold(xi, zeta, p, kappa).unwrap(),
            plugin_mi(&joint),
        ));

        // Pre-indexed threshold MI against the V -> X -> Y' chain.
        let mut chain = vec![vec![0.0; 2]; 2];
        for (v, (pv, px0)) in [(p, p0), (1.0 - p, p1)].into_iter().enumerate() {
            for (x, px) in [px0, 1.0 - px0].into_iter().enumerate() {
                let r = if x == 0 { r0 } else { r1 };
                chain[v][0] += pv * px * r;
                chain[v][1] += pv * px * (1.0 - r);
            }
        }
        worst = worst.max(rel(
            mi_threshold_preindex(xi, zeta, &pre, kappa).unwrap(),
            plugin_mi(&chain),
        ));

        // Counting MI against the truncated 2 x (N+1) joint.
        let len = n_trunc(xi + zeta) as usize + 1;
        let joint = vec![
            (0..len)
                .map(|y| p * poisson_pmf(zeta, y as u32).unwrap())
                .collect::<Vec<_>>(),
            (0..len)
                .map(|y| (1.0 - p) * poisson_pmf(xi + zeta, y as u32).unwrap())
                .collect(),
        ];
        worst = worst.max(rel(mi_pnr(xi, zeta, p).unwrap(), plugin_mi(&joint)));

        // Pre-indexed counting MI.
        let mut chain = vec![vec![0.0; len]; 2];
        for (v, (pv, px0)) in [(p, p0), (1.0 - p, p1)].into_iter().enumerate() {
            for (y, cell) in chain[v].iter_mut().enumerate() {
                *cell = pv
                    * (px0 * poisson_pmf(zeta, y as u32).unwrap()
                        + (1.0 - px0) * poisson_pmf(xi + zeta, y as u32).unwrap());
            }
        }
        worst = worst.max(rel(
            mi_pnr_preindex(xi, zeta, &pre).unwrap(),
            plugin_mi(&chain),
        ));

        // Two-way rates against conditional-MI enumeration.
        let (l0, l1) = point.legitimate_means();
        let (e0, e1) = point.eavesdropper_means();
        let pa = [tau(l0, kappa).unwrap(), tau(l1, kappa).unwrap()];
        let pe = [tau(e0, kappa_prime).unwrap(), tau(e1, kappa_prime).unwrap()];
        let pb = [p, 1.0 - p];
        let slices: Vec<(f64, Vec<Vec<f64>>)> = (0..2)
            .map(|e| {
                let w: f64 = (0..2)
                    .map(|b| pb[b] * if e == 0 { pe[b] } else { 1.0 - pe[b] })
                    .sum();
                let mut joint = vec![vec![0.0; 2]; 2];
                for b in 0..2 {
                    let p_e = if e == 0 { pe[b] } else { 1.0 - pe[b] };
                    for a in 0..2 {
                        let p_a = if a == 0 { pa[b] } else { 1.0 - pa[b] };
                        joint[a][b] = pb[b] * p_a * p_e / w;
                    }
                }
                (w, joint)
            })
            .collect();
        worst = worst.max(rel(
            rate_twoway_threshold(&point, kappa, kappa_prime, p).unwrap(),
            conditional_mi_over_slices(&slices),
        ));

        let len = n_trunc(e0.max(e1)) as usize + 1;
        let slices: Vec<(f64, Vec<Vec<f64>>)> = (0..len)
            .map(|z| {
                let pz = [
                    poisson_pmf(e0, z as u32).unwrap(),
                    poisson_pmf(e1, z as u32).unwrap(),
                ];
                let w: f64 = (0..2).map(|b| pb[b] * pz[b]).sum();
                let mut joint = vec![vec![0.0; 2]; 2];
                if w > 0.0 {
                    for b in 0..2 {
                        for a in 0..2 {
                            let p_a = if a == 0 { pa[b] } else { 1.0 - pa[b] };
                            joint[a][b] = pb[b] * p_a * pz[b] / w;
                        }
                    }
                }
                (w, joint)
            })
            .collect();
        worst = worst.max(rel(
            rate_twoway_pnr(&point, kappa, p).unwrap(),
            conditional_mi_over_slices(&slices),
        ));
    }
    assert!(
        worst <= 1e-10,
        "acceptance 07 (oracle equivalence): FAIL -- worst relative gap {worst:.3e}"
    );
    println!("acceptance 07 (oracle equivalence): PASS -- worst relative gap {worst:.3e}");
}

#[test]
fn criterion_08_monte_carlo_validation() {
    let start = Instant::now();
    let point = params(1.35, 0.5, 2.0, 1.0);
    for (label, eve_mode, p_opt) in [
        (
            "threshold",
            DetectorConfig::Threshold(0),
            capacity_twoway_threshold(&point, 0, 0)
                .unwrap()
                .p_opt
                .unwrap(),
        ),
        (
            "pnr",
            DetectorConfig::Pnr,
            capacity_twoway_pnr(&point, 0).unwrap().p_opt.unwrap(),
        ),
    ] {
        let report = estimate_conditional_mi(&SimulationConfig {
            params: point,
            kappa: 0,
            eve_mode,
            p: p_opt,
            samples: 1_000_000,
            seed: 42,
        })
        .unwrap();
        let gap = (report.empirical_rate - report.analytic_rate).abs();
        assert!(
            gap <= 3.0 * report.standard_error,
            "acceptance 08 (monte carlo): FAIL -- {label}: |{} - {}| > 3 x {}",
            report.empirical_rate,
            report.analytic_rate,
            report.standard_error
        );
        println!(
            "acceptance 08 (monte carlo): PASS -- {label}: empirical {:.6}, analytic {:.6}, se {:.2e}",
            report.empirical_rate, report.analytic_rate, report.standard_error
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 120, "budget exceeded: {elapsed:?}");
}

#[test]
fn criterion_09_optimal_input_near_uniform() {
    // As published, every achieving input distribution should sit within
    // 0.05 of uniform across the interception range at xi = 1.35. The
    // dense-grid-verified optima drift beyond that for strong
    // interceptors (up to |p - 0.5| ~ 0.083 at gamma_gp = 3 for the
    // two-way pnr figure), so this criterion records the measured drift.
    let mut worst: (f64, f64, &str) = (0.0, 0.0, "");
    let mut checked = 0;
    for i in 0..30 {
        let gamma_gp = 0.1 + 2.9 * i as f64 / 29.0;
        let b = base(1.35, 0.5, gamma_gp, 1.0);
        for regime in RegimeSel::ALL {
            let result = poisson_wiretap_cli::ops::evaluate_regime(regime, &b).unwrap();
            if let Some(p_opt) = result.p_opt {
                checked += 1;
                let deviation = (p_opt - 0.5).abs();
                if deviation > worst.0 {
                    worst = (deviation, gamma_gp, regime.token());
                }
            }
        }
    }
    assert!(checked > 60, "too few optimizing distributions to check");
    assert!(
        worst.0 < 0.05,
        "acceptance 09 (optimal input near uniform): FAIL -- max |p* - 0.5| = {:.4} at \
         gamma_gp = {:.3} ({}); the optimizing distribution genuinely drifts beyond 0.05 \
         for strong interceptors",
        worst.0,
        worst.1,
        worst.2
    );
    println!(
        "acceptance 09 (optimal input near uniform): PASS -- max |p* - 0.5| = {:.4}",
        worst.0
    );
}

#[test]
fn criterion_10_asymptotics() {
    let reference = capacity_twoway_pnr(&params(1.35, 0.5, 2.0, 1.0), 0)
        .unwrap()
        .value;
    let far = capacity_twoway_pnr(&params(50.0, 0.5, 2.0, 1.0), 0)
        .unwrap()
        .value;
    assert!(
        far < 0.25 * reference,
        "acceptance 10 (asymptotics): FAIL -- pnr capacity {far} at xi = 50 is not below a \
         quarter of {reference}"
    );

    let mut previous = f64::NEG_INFINITY;
    for i in 0..50 {
        let xi = 0.1 + (50.0 - 0.1) * i as f64 / 49.0;
        let value = capacity_twoway_threshold(&params(xi, 0.5, 2.0, 1.0), 0, 0)
            .unwrap()
            .value;
        assert!(
            value >= previous - 1e-9,
            "acceptance 10 (asymptotics): FAIL -- threshold capacity decreased at xi = {xi}: \
             {value} < {previous}"
        );
        previous = value;
    }
    println!(
        "acceptance 10 (asymptotics): PASS -- pnr {far:.2e} << {reference:.4} at xi = 50; \
         threshold capacity nondecreasing over 50 grid points"
    );
}

// --- brute-force degrading-channel search for criterion 11 -----------------

fn coarse_witness_error(main: &BinaryChannel, cand: &BinaryChannel) -> f64 {
    let (r0, r1) = (main.r0, main.r1);
    let (r2, r3) = (cand.r0, cand.r1);
    let mut best = f64::INFINITY;
    for ai in 0..=1000 {
        let a = ai as f64 / 1000.0;
        if (a * r0 - r2).abs() > (1.0 - r0) + best {
            continue;
        }
        for bi in 0..=1000 {
            let b = bi as f64 / 1000.0;
            let e0 = (a * r0 + b * (1.0 - r0) - r2).abs();
            if e0 >= best {
                continue;
            }
            let e1 = (a * r1 + b * (1.0 - r1) - r3).abs();
            best = best.min(e0.max(e1));
        }
    }
    best
}

fn exact_witness_exists(main: &BinaryChannel, cand: &BinaryChannel) -> bool {
    let (r0, r1) = (main.r0, main.r1);
    let (r2, r3) = (cand.r0, cand.r1);
    let det = r0 - r1;
    if det.abs() > 1e-9 {
        let a = (r2 * (1.0 - r1) - r3 * (1.0 - r0)) / det;
        let b = (r0 * r3 - r1 * r2) / det;
        let slack = 1e-7;
        (-slack..=1.0 + slack).contains(&a) && (-slack..=1.0 + slack).contains(&b)
    } else {
        (r2 - r3).abs() <= 1e-9
    }
}

/// One-way secrecy rate with a three-branch randomization: branch `i` has
/// probability `q_i` and input law `P(X=0) = p_i`.
fn three_branch_rate(
    legit: (f64, f64),
    eve: (f64, f64),
    p: [f64; 3],
    q: [f64; 3],
    h: impl Fn(f64) -> f64,
) -> f64 {
    let info = |(r0, r1): (f64, f64)| {
        let t: Vec<f64> = p.iter().map(|pi| pi * r0 + (1.0 - pi) * r1).collect();
        let mix: f64 = q.iter().zip(&t).map(|(qi, ti)| qi * ti).sum();
        h(mix) - q.iter().zip(&t).map(|(qi, &ti)| qi * h(ti)).sum::<f64>()
    };
    info(legit) - info(eve)
}

#[test]
fn criterion_11_appendix_properties() {
    // (a) classifier vs brute-force degrading-matrix search, 200 pairs.
    let mut rng = ChaCha12Rng::seed_from_u64(0x11a);
    let mut degraded_seen = 0;
    for i in 0..200 {
        let bob = BinaryChannel {
            r0: rng.random_range(0.0..1.0),
            r1: rng.random_range(0.0..1.0),
        };
        let eve = BinaryChannel {
            r0: rng.random_range(0.0..1.0),
            r1: rng.random_range(0.0..1.0),
        };
        let degraded = matches!(
            classify_binary(&bob, &eve).class,
            DegradationClass::Degraded | DegradationClass::Both
        );
        if degraded {
            degraded_seen += 1;
            let err = coarse_witness_error(&bob, &eve);
            assert!(
                err <= 2e-3,
                "acceptance 11a (witness search): FAIL -- pair {i}: degraded verdict, best \
                 grid witness error {err}"
            );
        }
        assert_eq!(
            degraded,
            exact_witness_exists(&bob, &eve),
            "acceptance 11a (witness search): FAIL -- pair {i} disagrees with the exact solve"
        );
    }
    assert!(degraded_seen >= 20);
    println!(
        "acceptance 11a (witness search): PASS -- 200 pairs, {degraded_seen} degraded verdicts \
         all witnessed within 2e-3"
    );

    // (b) a three-branch randomization must not improve on the two-branch
    // optimum beyond tolerance, on 20 neither-class instances.
    let mut rng = ChaCha12Rng::seed_from_u64(0x11b);
    let h = |x: f64| binary_entropy(x.clamp(0.0, 1.0)).unwrap();
    let mut instances = 0;
    let mut max_improvement = f64::NEG_INFINITY;
    while instances < 20 {
        let point = params(
            rng.random_range(1.0..3.0),
            rng.random_range(0.3..0.8),
            rng.random_range(1.1..1.6),
            rng.random_range(1.6..2.5),
        );
        if classify_threshold(&point, 0, 0).class != DegradationClass::Neither {
            continue;
        }
        instances += 1;
        let bob = reduce_to_binary(&point, Side::Legitimate, 0);
        let eve = reduce_to_binary(&point, Side::Eavesdropper, 0);
        let legit = (bob.r0, bob.r1);
        let evec = (eve.r0, eve.r1);
        let two_branch = optimize_preindex(
            |p, p0, p1| three_branch_rate(legit, evec, [p0, p1, 0.0], [p, 1.0 - p, 0.0], h),
            1e-7,
        )
        .unwrap()
        .1;

        let grid: Vec<f64> = (0..21).map(|i| i as f64 / 20.0).collect();
        let mut three_branch = f64::NEG_INFINITY;
        for &p0 in &grid {
            for &p1 in &grid {
                for &p2 in &grid {
                    for &q0 in &grid {
                        for &q1 in &grid {
                            if q0 + q1 > 1.0 {
                                continue;
                            }
                            let rate = three_branch_rate(
                                legit,
                                evec,
                                [p0, p1, p2],
                                [q0, q1, 1.0 - q0 - q1],
                                h,
                            );
                            three_branch = three_branch.max(rate);
                        }
                    }
                }
            }
        }
        let improvement = three_branch - two_branch;
        max_improvement = max_improvement.max(improvement);
        assert!(
            improvement < 1e-4,
            "acceptance 11b (two branches suffice): FAIL -- three-branch grid beats the \
             two-branch optimum by {improvement} at {point:?}"
        );
    }
    println!(
        "acceptance 11b (two branches suffice): PASS -- 20 neither-class instances, max \
         improvement {max_improvement:.3e}"
    );
}
