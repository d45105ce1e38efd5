//! The library agrees with the oracles on random inputs.

use bsa_core::orthogonality::{dini, lambda_profile, SpaceModel};
use bsa_core::sampling::{geometric, measure, pl_function, sparse_seq, step_function, stream};
use bsa_core::scalar::{rat, Scalar};
use bsa_core::spaces::{Measure, PiecewiseAffine, SparseSeq, StepNorm};
use num_traits::One;
use proptest::prelude::*;
use rand::Rng;

use crate::oracle::*;

fn seqs(seed: u64) -> (SparseSeq, SparseSeq) {
    let mut rng = stream(seed, 0);
    let (la, lb) = (geometric(&mut rng, 0.4, 6), geometric(&mut rng, 0.4, 6));
    (sparse_seq(&mut rng, la, 8, 4), sparse_seq(&mut rng, lb, 10, 4))
}

fn measures(seed: u64) -> (Measure, Measure) {
    let mut rng = stream(seed, 0);
    let mut draw = || {
        let atoms = rng.gen_range(0..=3);
        let pieces = geometric(&mut rng, 0.4, 5);
        measure(&mut rng, atoms, pieces, 4)
    };
    (draw(), draw())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn profile_matches_the_tv_norm(seed in any::<u64>(), l in -64i64..64) {
        let (x, y) = measures(seed);
        prop_assume!(!y.is_zero());
        let p = lambda_profile(&x, &y, SpaceModel::TvMeasure).unwrap();
        let lambda = rat(l, 8);
        prop_assert_eq!(p.eval(&lambda), tv_norm(&x.add_scaled(&y, &lambda)));
    }

    #[test]
    fn dini_derivatives(seed in any::<u64>()) {
        let (x, y) = measures(seed);
        prop_assume!(!x.is_zero());
        let d = dini(&x, &y, SpaceModel::TvMeasure).unwrap();
        prop_assert_eq!((d.d_minus, d.d_plus), weighted_sum_dini(&tv_coordinates(&x, &y)));

        let (a, b) = seqs(seed);
        let d = dini(&a, &b, SpaceModel::C0Sup).unwrap();
        prop_assert_eq!((d.d_minus, d.d_plus), max_dini(&seq_coords(&a, &b)));
        let d = dini(&a, &b, SpaceModel::L1Sum).unwrap();
        prop_assert_eq!((d.d_minus, d.d_plus), weighted_sum_dini(&seq_coords(&a, &b)));
    }

    #[test]
    fn total_variation(seed in any::<u64>()) {
        let (x, y) = measures(seed);
        prop_assert_eq!(x.tv_norm(), tv_norm(&x));
        prop_assert!(tv_norm(&x.add_scaled(&y, &Scalar::one())) <= tv_norm(&x) + tv_norm(&y));
        prop_assert_eq!(tv_distance(&x, &y), x.sub(&y).tv_norm());
    }

    #[test]
    fn pairings(seed in any::<u64>()) {
        let (x, _) = measures(seed);
        let (a, b) = seqs(seed);
        let mut rng = stream(seed, 1);
        let pieces = geometric(&mut rng, 0.3, 6);
        let f = pl_function(&mut rng, pieces, 4);
        let g = step_function(&mut rng, pieces, 4);
        let more = geometric(&mut rng, 0.3, 6);
        let h = step_function(&mut rng, more, 4);
        prop_assert_eq!(x.pair(&f), measure_integral(&x, &f));
        prop_assert_eq!(a.pair(&b), seq_pair(&a, &b));
        prop_assert_eq!(g.pair(&h), step_integral_product(&g, &h));
        prop_assert_eq!(g.norm(StepNorm::L1), step_l1(&g));
        prop_assert_eq!(PiecewiseAffine::from_step(&g).ess_sup(), step_sup(&g));
        prop_assert_eq!(f.sup_norm(), pl_sup(&f));
    }

    #[test]
    fn attaining_measures_have_separated_supports(seed in any::<u64>()) {
        let (x, _) = measures(seed);
        prop_assume!(!x.is_zero());
        let attains = bsa_core::attainment::measure_attainment(&x).is_ok();
        prop_assert_eq!(attains, !supports_touch(&x));
    }
}
