//! Indicator properties: an independent definition-level oracle, preset
//! equivalence of the generic functional, monotonicity, scale invariance and
//! bounds.

use gpi_core::{evaluate_gpi, fgt, order_and_count, ray, sen, shorrocks, GpiSpec, OrderedSample};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const Z: f64 = 100.0;

/// Evaluates the indicators straight from unsorted incomes: the rank of a poor
/// household is one plus the number of poor incomes strictly below it (plus
/// earlier ties), with no sorting and plain summation.
mod oracle {
    fn ranks(incomes: &[f64], z: f64) -> Vec<(usize, f64)> {
        let poor: Vec<f64> = incomes.iter().copied().filter(|&y| y < z).collect();
        poor.iter()
            .enumerate()
            .map(|(i, &y)| {
                let below = poor.iter().filter(|&&o| o < y).count();
                let earlier_ties = poor[..i].iter().filter(|&&o| o == y).count();
                (below + earlier_ties + 1, (z - y) / z)
            })
            .collect()
    }

    pub fn sen(incomes: &[f64], z: f64) -> f64 {
        let r = ranks(incomes, z);
        let (n, q) = (incomes.len() as f64, r.len() as f64);
        r.iter().map(|&(j, u)| (q - j as f64 + 1.0) * u).sum::<f64>() * 2.0 / (n * (q + 1.0))
    }

    pub fn shorrocks(incomes: &[f64], z: f64) -> f64 {
        let n = incomes.len() as f64;
        ranks(incomes, z)
            .iter()
            .map(|&(j, u)| (2.0 * n - 2.0 * j as f64 + 1.0) * u)
            .sum::<f64>()
            / (n * n)
    }

    pub fn fgt(incomes: &[f64], z: f64, alpha: f64) -> f64 {
        incomes
            .iter()
            .filter(|&&y| y < z)
            .map(|&y| ((z - y) / z).powf(alpha))
            .sum::<f64>()
            / incomes.len() as f64
    }

    pub fn ray(incomes: &[f64], z: f64, alpha: f64) -> f64 {
        let gaps: Vec<f64> = incomes.iter().filter(|&&y| y < z).map(|&y| z - y).collect();
        if gaps.is_empty() {
            return 0.0;
        }
        let g = gaps.iter().sum::<f64>() / gaps.len() as f64;
        g / (incomes.len() as f64 * z) * gaps.iter().map(|s| (s / g).powf(alpha)).sum::<f64>()
    }
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
        || (a == 0.0 && b == 0.0)
}

fn random_incomes(rng: &mut ChaCha8Rng, max_n: usize) -> Vec<f64> {
    let n = rng.random_range(1..=max_n);
    (0..n).map(|_| rng.random_range(0.0..2.0 * Z)).collect()
}

#[test]
fn closed_forms_match_definition_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for _ in 0..500 {
        let mut incomes = random_incomes(&mut rng, 60);
        // some ties, including at the line
        if incomes.len() > 3 {
            incomes[1] = incomes[0];
            incomes[2] = Z;
        }
        let s = order_and_count(&incomes, Z).unwrap();
        assert!(rel_close(sen(&s), oracle::sen(&incomes, Z), 1e-12));
        assert!(rel_close(shorrocks(&s), oracle::shorrocks(&incomes, Z), 1e-12));
        for alpha in [0.0, 0.5, 1.0, 2.0, 3.0] {
            assert!(rel_close(fgt(&s, alpha).unwrap(), oracle::fgt(&incomes, Z, alpha), 1e-12));
            assert!(rel_close(ray(&s, alpha).unwrap(), oracle::ray(&incomes, Z, alpha), 1e-11));
        }
    }
}

#[test]
fn generic_functional_reproduces_presets() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let s = order_and_count(&random_incomes(&mut rng, 50), Z).unwrap();
        assert!(rel_close(evaluate_gpi(&s, &GpiSpec::Sen).unwrap(), sen(&s), 1e-12));
        assert!(rel_close(
            evaluate_gpi(&s, &GpiSpec::Shorrocks).unwrap(),
            shorrocks(&s),
            1e-12
        ));
        for alpha in [0.0, 1.0, 2.0] {
            assert!(rel_close(
                evaluate_gpi(&s, &GpiSpec::fgt(alpha)).unwrap(),
                fgt(&s, alpha).unwrap(),
                1e-12
            ));
        }
    }
}

#[test]
fn ray_alpha_one_equals_fgt_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..200 {
        let s = order_and_count(&random_incomes(&mut rng, 50), Z).unwrap();
        assert!(rel_close(ray(&s, 1.0).unwrap(), fgt(&s, 1.0).unwrap(), 1e-12));
    }
}

/// Ray at α = 2 penalizes the spread of shortfalls around their mean, so a
/// loss for the least-poor household can lower it.
#[test]
fn ray_alpha_two_is_not_monotone() {
    let before = order_and_count(&[99.0, 0.0, 150.0], Z).unwrap();
    let after = order_and_count(&[98.0, 0.0, 150.0], Z).unwrap();
    assert_eq!(before.q_poor(), after.q_poor());
    assert!(ray(&after, 2.0).unwrap() < ray(&before, 2.0).unwrap());
    assert!(sen(&after) > sen(&before));
}

#[test]
fn ray_above_alpha_two_can_exceed_one() {
    let s = order_and_count(&[0.0, 99.9], Z).unwrap();
    assert!(ray(&s, 3.0).unwrap() > 1.0);
    assert!(ray(&s, 2.0).unwrap() <= 1.0);
}

fn incomes_strategy() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0..2.0 * Z, 1..50)
}

proptest! {
    #[test]
    fn poorer_poor_never_lowers_poverty(
        incomes in incomes_strategy(),
        pick in any::<prop::sample::Index>(),
        shrink in 0.0f64..1.0,
    ) {
        let poor: Vec<usize> = (0..incomes.len()).filter(|&i| incomes[i] < Z).collect();
        prop_assume!(!poor.is_empty());
        let k = poor[pick.index(poor.len())];
        let mut lowered = incomes.clone();
        lowered[k] *= shrink;
        let before = order_and_count(&incomes, Z).unwrap();
        let after = order_and_count(&lowered, Z).unwrap();
        prop_assert_eq!(before.q_poor(), after.q_poor());
        let slack = 1e-12;
        prop_assert!(sen(&after) >= sen(&before) - slack);
        prop_assert!(shorrocks(&after) >= shorrocks(&before) - slack);
        for alpha in [1.0, 2.0, 3.0] {
            prop_assert!(fgt(&after, alpha).unwrap() >= fgt(&before, alpha).unwrap() - slack);
        }
        prop_assert!(ray(&after, 1.0).unwrap() >= ray(&before, 1.0).unwrap() - slack);
    }

    #[test]
    fn indicators_ignore_the_currency_unit(incomes in incomes_strategy()) {
        let base = order_and_count(&incomes, Z).unwrap();
        for c in [0.5, 365.0, 1e6] {
            let scaled: Vec<f64> = incomes.iter().map(|y| y * c).collect();
            let s = order_and_count(&scaled, Z * c).unwrap();
            prop_assert_eq!(s.q_poor(), base.q_poor());
            prop_assert!(rel_close(sen(&s), sen(&base), 1e-12));
            prop_assert!(rel_close(shorrocks(&s), shorrocks(&base), 1e-12));
            for alpha in [0.0, 1.0, 2.0] {
                prop_assert!(rel_close(fgt(&s, alpha).unwrap(), fgt(&base, alpha).unwrap(), 1e-12));
                prop_assert!(rel_close(ray(&s, alpha).unwrap(), ray(&base, alpha).unwrap(), 1e-12));
            }
        }
    }

    #[test]
    fn indicators_lie_in_unit_interval(incomes in incomes_strategy(), alpha in 1.0f64..4.0) {
        let s = order_and_count(&incomes, Z).unwrap();
        // Ray ≤ (Z/g)^(α-2) Q/N, bounded by 1 only up to α = 2.
        let ray_alpha = alpha.min(2.0);
        let values = [
            sen(&s),
            shorrocks(&s),
            fgt(&s, alpha).unwrap(),
            ray(&s, ray_alpha).unwrap(),
        ];
        for v in values {
            prop_assert!((0.0..=1.0).contains(&v), "{v}");
        }
    }

    #[test]
    fn sorting_is_idempotent(incomes in incomes_strategy()) {
        let once = order_and_count(&incomes, Z).unwrap();
        let twice = OrderedSample::new(once.values().to_vec(), Z).unwrap();
        prop_assert_eq!(once, twice);
    }
}
