use proptest::prelude::*;
use xintersect_core::balls::{ball_size, best_ball_pair};
use xintersect_core::bounds::trivial_product;
use xintersect_core::domain::{
    agreements, hamming_distance, r_intersecting, Rank, SizeVector,
};
use xintersect_core::family::{dual, Family};

fn size_vector() -> impl Strategy<Value = SizeVector> {
    prop::collection::vec(2u32..=5, 1..=4).prop_map(|v| SizeVector::new(v).unwrap())
}

fn domain_and_ranks(count: usize) -> impl Strategy<Value = (SizeVector, Vec<u64>)> {
    size_vector().prop_flat_map(move |p| {
        let d = p.domain_size_u64().unwrap();
        let ranks = prop::collection::vec(0..d, count);
        (Just(p), ranks)
    })
}

fn family_from_ranks(p: &SizeVector, ranks: &[u64]) -> Family {
    let points: Vec<_> = ranks
        .iter()
        .map(|&x| p.unrank(Rank(x)).unwrap())
        .collect();
    Family::from_points(p, &points).unwrap()
}

proptest! {
    #[test]
    fn rank_unrank_roundtrip((p, ranks) in domain_and_ranks(1)) {
        let x = p.unrank(Rank(ranks[0])).unwrap();
        prop_assert_eq!(p.rank(&x).unwrap(), Rank(ranks[0]));
        p.validate_point(&x).unwrap();
    }

    #[test]
    fn hamming_distance_is_a_metric((p, ranks) in domain_and_ranks(3)) {
        let x = p.unrank(Rank(ranks[0])).unwrap();
        let y = p.unrank(Rank(ranks[1])).unwrap();
        let z = p.unrank(Rank(ranks[2])).unwrap();
        prop_assert_eq!(hamming_distance(&x, &x).unwrap(), 0);
        prop_assert_eq!(
            hamming_distance(&x, &y).unwrap(),
            hamming_distance(&y, &x).unwrap()
        );
        prop_assert!(
            hamming_distance(&x, &z).unwrap()
                <= hamming_distance(&x, &y).unwrap() + hamming_distance(&y, &z).unwrap()
        );
        prop_assert_eq!(hamming_distance(&x, &y).unwrap() == 0, x == y);
    }

    #[test]
    fn agreements_complement_distance((p, ranks) in domain_and_ranks(2), r in 0u32..6) {
        let x = p.unrank(Rank(ranks[0])).unwrap();
        let y = p.unrank(Rank(ranks[1])).unwrap();
        let n = p.len() as u32;
        prop_assert_eq!(
            agreements(&x, &y).unwrap() + hamming_distance(&x, &y).unwrap(),
            n
        );
        prop_assert_eq!(
            r_intersecting(&x, &y, r).unwrap(),
            agreements(&x, &y).unwrap() >= r
        );
    }

    #[test]
    fn dual_is_an_antitone_galois_map((p, ranks) in domain_and_ranks(6), r in 1u32..4) {
        let a = family_from_ranks(&p, &ranks);
        let b = family_from_ranks(&p, &ranks[..3]);
        prop_assume!(r as usize <= p.len());
        // b is built from a subset of the seed ranks of a.
        prop_assert!(b.is_subset_of(&a).unwrap());
        let da = dual(&a, r).unwrap();
        let db = dual(&b, r).unwrap();
        prop_assert!(da.is_subset_of(&db).unwrap());
        // Closure is extensive and dual^3 = dual.
        let dda = dual(&da, r).unwrap();
        prop_assert!(a.is_subset_of(&dda).unwrap());
        prop_assert_eq!(dual(&dda, r).unwrap(), da);
    }

    #[test]
    fn ball_sizes_are_monotone_and_cap_at_the_domain(
        p in size_vector(),
        radius in 0u32..5,
    ) {
        let coords: Vec<usize> = (0..p.len()).collect();
        let radius = radius.min(p.len() as u32);
        let size = ball_size(&p, &coords, radius).unwrap();
        prop_assert!(size <= p.domain_size());
        if radius > 0 {
            prop_assert!(ball_size(&p, &coords, radius - 1).unwrap() < size);
        }
        prop_assert_eq!(
            ball_size(&p, &coords, p.len() as u32).unwrap(),
            p.domain_size()
        );
    }

    #[test]
    fn best_ball_pair_dominates_the_fixing_pair(p in size_vector(), r in 1u32..4) {
        prop_assume!(r as usize <= p.len());
        let best = best_ball_pair(&p, r).unwrap();
        prop_assert!(best.product >= trivial_product(&p, r).unwrap());
        let spec = &best.best;
        prop_assert_eq!(
            spec.coords.len() as u32,
            spec.radius_a + spec.radius_b + r
        );
    }

    #[test]
    fn normalization_strips_unit_coordinates(
        raw in prop::collection::vec(1u32..=5, 1..=5),
        r in 0u32..4,
    ) {
        prop_assume!(raw.iter().any(|&v| v >= 2));
        let (p, nr) = SizeVector::normalize(&raw, r).unwrap();
        prop_assert!(p.min_entry() >= 2);
        prop_assert!(nr <= r);
        let dropped = raw.len() - p.len();
        prop_assert_eq!(dropped, raw.iter().filter(|&&v| v < 2).count());
        // Domain size is unchanged by dropping unit coordinates.
        let full: u64 = raw.iter().map(|&v| u64::from(v)).product();
        prop_assert_eq!(p.domain_size_u64(), Some(full));
    }
}
