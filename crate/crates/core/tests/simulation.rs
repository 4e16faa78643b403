//! Synthetic populations, sampled gaps, convergence studies and bootstrap
//! intervals.

use gpi_core::simulation::{
    bootstrap_gap_ci, convergence_study, empirical_quantile, sample_population, sampled_gap,
    subsample, LognormalSpec, LognormalStratum, PovertyLine, StudyDesign,
};
use gpi_core::sum::compensated_sum;
use gpi_core::{decompose, GpiSpec};

fn design(grid: Vec<usize>, replications: usize, indicators: Vec<GpiSpec>) -> StudyDesign {
    StudyDesign {
        grid,
        replications,
        seed: 2024,
        poverty_line: PovertyLine::default(),
        indicators,
    }
}

/// Alternating strata with log-locations two apart.
fn heterogeneous(k: usize, total: usize) -> LognormalSpec {
    let base = LognormalSpec::homogeneous(k, total, 0.0, 1.0);
    LognormalSpec {
        strata: base
            .strata
            .into_iter()
            .enumerate()
            .map(|(i, s)| LognormalStratum {
                location: if i % 2 == 0 { 0.0 } else { 2.0 },
                ..s
            })
            .collect(),
        transform: None,
    }
}

#[test]
fn same_seed_gives_bit_identical_populations() {
    let spec = LognormalSpec::reference_model();
    let a = sample_population(&spec, 11).unwrap();
    let b = sample_population(&spec, 11).unwrap();
    let c = sample_population(&spec, 12).unwrap();
    let bits = |s: &gpi_core::Stratification| -> Vec<u64> {
        s.pooled().iter().map(|y| y.to_bits()).collect()
    };
    assert_eq!(bits(&a), bits(&b));
    assert_ne!(bits(&a), bits(&c));
}

#[test]
fn near_degenerate_lognormal_splits_at_its_median() {
    let z = 143080.0_f64;
    let spec = LognormalSpec::homogeneous(1, 10_000, z.ln(), 1e-8);
    let pooled = sample_population(&spec, 3).unwrap().pooled();
    let below = pooled.iter().filter(|&&y| y < z).count() as f64 / 1e4;
    assert!((below - 0.5).abs() < 0.03, "{below}");
}

#[test]
fn thirtieth_percentile_line_gives_thirty_percent_poor() {
    for seed in 0..20 {
        let spec = LognormalSpec::homogeneous(10, 3278, -12.0, 1.0);
        let population = sample_population(&spec, seed).unwrap();
        let pooled = population.pooled();
        let z = empirical_quantile(&pooled, 0.3).unwrap();
        let rate = pooled.iter().filter(|&&y| y < z).count() as f64 / pooled.len() as f64;
        assert!((rate - 0.30).abs() <= 0.02, "{rate}");
        // the reference model's transform puts its 30% line at 392 × 365
        let reference = sample_population(&LognormalSpec::reference_model(), seed).unwrap();
        let rate = reference.pooled().iter().filter(|&&y| y < 143080.0).count() as f64 / 3278.0;
        assert!((rate - 0.30).abs() <= 0.03, "{rate}");
    }
}

#[test]
fn sub_sample_weights_are_shares_of_n() {
    let spec = LognormalSpec::homogeneous(7, 2000, 0.0, 1.0);
    let population = sample_population(&spec, 5).unwrap();
    let z = empirical_quantile(&population.pooled(), 0.3).unwrap();
    let sizes = [13, 40, 1, 99, 250, 7, 33];
    let n: usize = sizes.iter().sum();
    for seed in 0..50 {
        let r = sampled_gap(&population, z, &GpiSpec::Sen, &sizes, seed).unwrap();
        assert_eq!(r.size, n);
        for (g, &ni) in r.groups.iter().zip(&sizes) {
            assert_eq!(g.weight, ni as f64 / n as f64);
        }
        let total = compensated_sum(r.groups.iter().map(|g| g.weight));
        assert!((total - 1.0).abs() <= 1e-15);
        assert_eq!(r.groups.iter().map(|g| g.poor).sum::<usize>(), r.poor);
    }
}

#[test]
fn additive_gap_vanishes_on_every_sub_sample() {
    let spec = heterogeneous(6, 3000);
    let population = sample_population(&spec, 8).unwrap();
    let z = empirical_quantile(&population.pooled(), 0.3).unwrap();
    for seed in 0..30 {
        let sizes: Vec<usize> = (0..6).map(|i| 10 + 50 * i + seed as usize).collect();
        for alpha in [0.0, 1.0, 2.0] {
            let r = sampled_gap(&population, z, &GpiSpec::fgt(alpha), &sizes, seed).unwrap();
            assert!(r.gap.abs() <= 1e-12, "{}", r.gap);
        }
    }
}

#[test]
fn sub_sampling_is_seeded_and_without_replacement() {
    let spec = LognormalSpec::homogeneous(3, 300, 0.0, 1.0);
    let population = sample_population(&spec, 1).unwrap();
    let a = subsample(&population, &[50, 100, 100], 9).unwrap();
    let b = subsample(&population, &[50, 100, 100], 9).unwrap();
    assert_eq!(a.pooled(), b.pooled());
    // a full draw of a stratum is a permutation of it
    let mut full = a.groups()[1].incomes.clone();
    let mut original = population.groups()[1].incomes.clone();
    full.sort_by(f64::total_cmp);
    original.sort_by(f64::total_cmp);
    assert_eq!(full, original);
    let z = empirical_quantile(&population.pooled(), 0.3).unwrap();
    let whole = decompose(&population, z, &GpiSpec::Sen).unwrap();
    let sampled = sampled_gap(&population, z, &GpiSpec::Sen, &[100, 100, 100], 4).unwrap();
    assert_eq!(whole.gap, sampled.gap);
}

#[test]
fn homogeneous_gap_shrinks_while_heterogeneous_gap_does_not() {
    let indicators = vec![GpiSpec::Sen, GpiSpec::Shorrocks];
    let homogeneous = convergence_study(
        &LognormalSpec::homogeneous(10, 3278, 0.0, 1.0),
        &design(vec![500, 3278, 20000], 40, indicators.clone()),
    )
    .unwrap();
    let hetero = convergence_study(
        &heterogeneous(10, 3278),
        &design(vec![500, 3278, 20000], 40, indicators),
    )
    .unwrap();
    for label in ["SEN", "SHORROCKS"] {
        let curve = homogeneous.median_abs_curve(label);
        assert!(curve.windows(2).all(|w| w[1] < w[0]), "{label} {curve:?}");
        let h = hetero.median_abs_curve(label);
        assert!(h[2] > 5.0 * curve[2], "{label} {h:?} vs {curve:?}");
        // the heterogeneous gap settles instead of vanishing
        assert!(h[2] > 0.5 * h[1], "{label} {h:?}");
    }
    for c in &homogeneous.cells {
        assert_eq!(c.group_sizes.iter().sum::<usize>(), c.n);
        assert_eq!(c.group_poor.iter().sum::<usize>(), c.poor);
    }
}

/// At a fixed n the homogeneous gap carries a positive bias of order 1/n
/// (roughly the indicator times (K - 1)/q), which 200 replications resolve
/// easily at n = 20000. What holds is that the bias vanishes as n grows.
#[test]
fn homogeneous_mean_gap_decays_like_one_over_n() {
    let study = convergence_study(
        &LognormalSpec::homogeneous(10, 20000, 0.0, 1.0),
        &design(vec![2000, 20000], 60, vec![GpiSpec::Sen, GpiSpec::Shorrocks]),
    )
    .unwrap();
    for label in ["SEN", "SHORROCKS"] {
        let small = study.summary(label, 2000).unwrap();
        let large = study.summary(label, 20000).unwrap();
        assert!(small.mean > 0.0 && large.mean > 0.0);
        let ratio = small.mean / large.mean;
        assert!((5.0..20.0).contains(&ratio), "{label} ratio {ratio}");
    }
}

#[test]
#[ignore = "fails: the fixed-n bias is about 100 standard errors at n = 20000"]
fn homogeneous_mean_gap_within_three_standard_errors_at_20000() {
    let study = convergence_study(
        &LognormalSpec::homogeneous(10, 20000, 0.0, 1.0),
        &design(vec![20000], 200, vec![GpiSpec::Sen, GpiSpec::Shorrocks]),
    )
    .unwrap();
    for label in ["SEN", "SHORROCKS"] {
        let s = study.summary(label, 20000).unwrap();
        assert!(s.mean.abs() < 3.0 * s.std_error, "{label}: mean {} se {}", s.mean, s.std_error);
    }
}

#[test]
fn one_cell_study_repeats_exactly() {
    let model = LognormalSpec::reference_model();
    let d = design(vec![3278], 1, vec![GpiSpec::Sen]);
    let a = convergence_study(&model, &d).unwrap();
    let b = convergence_study(&model, &d).unwrap();
    assert_eq!(a.cells.len(), 1);
    assert_eq!(a.to_json(), b.to_json());
    assert_eq!(a.to_csv(), b.to_csv());
}

#[test]
fn fgt_bootstrap_interval_is_degenerate_at_zero() {
    let population = sample_population(&LognormalSpec::homogeneous(10, 3278, 0.0, 1.0), 6).unwrap();
    let z = empirical_quantile(&population.pooled(), 0.3).unwrap();
    for alpha in [0.0, 1.0, 2.0] {
        let ci = bootstrap_gap_ci(&population, z, &GpiSpec::fgt(alpha), 200, 0.95, 1).unwrap();
        assert!(ci.contains(0.0), "{ci:?}");
        assert!(ci.width() <= 1e-10, "{ci:?}");
    }
}

#[test]
fn bootstrap_is_a_function_of_the_seed() {
    let population = sample_population(&LognormalSpec::homogeneous(4, 800, 0.0, 1.0), 2).unwrap();
    let z = empirical_quantile(&population.pooled(), 0.3).unwrap();
    let a = bootstrap_gap_ci(&population, z, &GpiSpec::Sen, 1000, 0.95, 77).unwrap();
    let b = bootstrap_gap_ci(&population, z, &GpiSpec::Sen, 1000, 0.95, 77).unwrap();
    let c = bootstrap_gap_ci(&population, z, &GpiSpec::Sen, 1000, 0.95, 78).unwrap();
    assert_eq!(a, b);
    assert_ne!(a.lower, c.lower);
    assert!(a.lower <= a.upper);
}

fn sen_bootstrap(total: usize, seed: u64, replicates: usize) -> gpi_core::simulation::BootstrapInterval {
    let population = sample_population(&LognormalSpec::homogeneous(10, total, 0.0, 1.0), seed).unwrap();
    let z = empirical_quantile(&population.pooled(), 0.3).unwrap();
    bootstrap_gap_ci(&population, z, &GpiSpec::Sen, replicates, 0.95, seed).unwrap()
}

/// For homogeneous strata the gap is a degenerate second-order statistic:
/// resampling adds an upward bias of the same order as the gap itself, and
/// the interval width falls like 1/N rather than 1/√N.
#[test]
fn homogeneous_sen_bootstrap_is_biased_and_narrows_like_one_over_n() {
    let mut ratios = Vec::new();
    let mut positive_bias = 0;
    for seed in 0..4 {
        let small = sen_bootstrap(3278, seed, 200);
        let large = sen_bootstrap(13112, seed, 200);
        ratios.push(small.width() / large.width());
        positive_bias += (small.bias() > 0.0) as usize + (large.bias() > 0.0) as usize;
    }
    ratios.sort_by(f64::total_cmp);
    let median = (ratios[1] + ratios[2]) / 2.0;
    assert!((2.8..6.0).contains(&median), "{ratios:?}");
    assert_eq!(positive_bias, 8);
}

#[test]
#[ignore = "fails: coverage of the point gap is rare and the width ratio is about 4, not 2"]
fn homogeneous_sen_bootstrap_covers_estimate_and_narrows_like_root_n() {
    let mut ratios = Vec::new();
    for seed in 0..10 {
        let small = sen_bootstrap(3278, seed, 1000);
        let large = sen_bootstrap(13112, seed, 1000);
        assert!(small.contains(small.estimate), "{small:?}");
        assert!(large.contains(large.estimate), "{large:?}");
        ratios.push(small.width() / large.width());
    }
    ratios.sort_by(f64::total_cmp);
    let median = (ratios[4] + ratios[5]) / 2.0;
    assert!((1.4..=2.6).contains(&median), "{ratios:?}");
}
