use proptest::prelude::*;

use gma_core::bench::{randfixedsum, SplitMix64};

#[test]
fn means_are_symmetric() {
    let mut rng = SplitMix64::new(1);
    let n = 4;
    let mut sums = [0.0; 4];
    for _ in 0..100_000 {
        let x = randfixedsum(n, 2.0, 0.0, 1.0, &mut rng).unwrap();
        assert!((x.iter().sum::<f64>() - 2.0).abs() <= 1e-9);
        for (s, v) in sums.iter_mut().zip(&x) {
            assert!((0.0..=1.0).contains(v));
            *s += v;
        }
    }
    for s in sums {
        assert!((s / 1e5 - 0.5).abs() <= 0.01);
    }
}

#[test]
fn marginal_matches_the_slice_density() {
    // three unit components summing to 1.5: the first has density
    // proportional to 1 − |x − ½|, so P(x < ¼) = 0.15625 / 0.75
    let mut rng = SplitMix64::new(2);
    let samples = 200_000;
    let below = (0..samples)
        .filter(|_| randfixedsum(3, 1.5, 0.0, 1.0, &mut rng).unwrap()[0] < 0.25)
        .count();
    let p = below as f64 / samples as f64;
    assert!((p - 0.15625 / 0.75).abs() < 0.005, "{p}");
}

#[test]
fn two_components_are_uniform() {
    let mut rng = SplitMix64::new(3);
    let mut bins = [0usize; 10];
    for _ in 0..100_000 {
        let x = randfixedsum(2, 1.0, 0.0, 1.0, &mut rng).unwrap();
        bins[((x[0] * 10.0) as usize).min(9)] += 1;
    }
    for b in bins {
        assert!((b as f64 / 1e4 - 1.0).abs() < 0.05, "{bins:?}");
    }
}

proptest! {
    #[test]
    fn contract_holds(n in 1usize..12, frac in 0.0f64..=1.0, low in -5.0f64..5.0, width in 0.1f64..10.0, seed in any::<u64>()) {
        let high = low + width;
        let total = n as f64 * (low + frac * width);
        let x = randfixedsum(n, total, low, high, &mut SplitMix64::new(seed)).unwrap();
        prop_assert_eq!(x.len(), n);
        prop_assert!((x.iter().sum::<f64>() - total).abs() <= 1e-9 * (1.0 + total.abs()));
        prop_assert!(x.iter().all(|&v| v >= low - 1e-9 && v <= high + 1e-9));
    }
}
