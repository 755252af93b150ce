//! Deterministic rational parameter samples for the specialize-and-confirm
//! solver strategy.

use super::ParamContext;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Draws one small rational value per declared symbol, deterministically from
/// `seed`. Every symbol is sampled nonzero, symbols standing for `exp(c^2)`
/// are sampled positive (so denominators like `2E + n a^2` cannot vanish),
/// and declared distinct pairs are resampled until they differ.
pub fn random_rational_sample(ctx: &ParamContext, seed: u64) -> Vec<BigRational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let values: Vec<BigRational> = (0..ctx.num_symbols() as u32)
            .map(|v| {
                let num = rng.gen_range(1..=9i64);
                let den = rng.gen_range(1..=4i64);
                let sign = if ctx.is_exp_symbol(v) || rng.gen_bool(0.5) {
                    1
                } else {
                    -1
                };
                BigRational::new(BigInt::from(sign * num), BigInt::from(den))
            })
            .collect();
        if ctx.assignment_admissible(&values) {
            return values;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::MultiPoly;
    use num_traits::{Signed, Zero};

    fn ctx3x3() -> ParamContext {
        ParamContext::new(&["a1", "a2", "b1", "b2", "E1", "E2"])
            .unwrap()
            .with_exp_def("E1", MultiPoly::var(2))
            .unwrap()
            .with_exp_def("E2", MultiPoly::var(3))
            .unwrap()
            .with_nonzero(&["a1", "a2", "b1", "b2"])
            .unwrap()
            .with_distinct("b1", "b2")
            .unwrap()
    }

    #[test]
    fn deterministic_and_admissible() {
        let ctx = ParamContext::new(&["a", "b", "E"])
            .unwrap()
            .with_exp_def("E", MultiPoly::var(1))
            .unwrap()
            .with_nonzero(&["a", "b"])
            .unwrap();
        let s0 = random_rational_sample(&ctx, 0);
        let s0_again = random_rational_sample(&ctx, 0);
        assert_eq!(s0, s0_again);
        assert!(!s0[0].is_zero() && !s0[1].is_zero());
        assert!(s0[2].is_positive());
    }

    #[test]
    fn distinct_pairs_hold() {
        let ctx = ctx3x3();
        for seed in 0..50 {
            let s = random_rational_sample(&ctx, seed);
            assert_ne!(s[2], s[3], "b1 != b2 must hold (seed {seed})");
            assert!(s[4].is_positive() && s[5].is_positive());
        }
    }
}
