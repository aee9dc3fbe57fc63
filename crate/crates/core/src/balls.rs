//! Hamming balls restricted to a coordinate set, and the ball-pair
//! construction for r-cross-intersecting families.
//!
//! The ball with center c, coordinate set T and given radius contains every
//! point that differs from c in at most `radius` coordinates of T (and
//! arbitrarily outside T). Two balls around a common center with radii l and
//! m on a common T with |T| = l + m + r form an r-cross-intersecting pair.

use crate::domain::{Point, SizeVector};
use crate::family::Family;
use crate::{Error, Result};
use num_bigint::BigUint;
use num_traits::{One, Zero};

/// A Hamming ball: points within `radius` of `center` on the coordinates in
/// `coords` (0-based indices, strictly increasing).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BallSpec {
    pub center: Point,
    pub coords: Vec<usize>,
    pub radius: u32,
}

/// A pair of balls around one center on one coordinate set, with
/// |coords| = radius_a + radius_b + r.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BallPairSpec {
    pub center: Point,
    pub coords: Vec<usize>,
    pub radius_a: u32,
    pub radius_b: u32,
    pub r: u32,
}

/// Result of the optimal ball-pair search.
#[derive(Debug, Clone)]
pub struct BallPairSearch {
    /// Canonical optimum: smallest (|coords|, radius_a) among the optima.
    pub best: BallPairSpec,
    pub product: BigUint,
    /// All optimal (coordinate-prefix, radius split) choices, sorted.
    pub optima: Vec<BallPairSpec>,
}

fn validate_coord_set(p: &SizeVector, coords: &[usize]) -> Result<()> {
    for (k, &i) in coords.iter().enumerate() {
        if i >= p.len() {
            return Err(Error::invalid(format!(
                "coordinate index {} out of range for {} coordinates",
                i + 1,
                p.len()
            )));
        }
        if k > 0 && coords[k - 1] >= i {
            return Err(Error::invalid(
                "coordinate set must be strictly increasing",
            ));
        }
    }
    Ok(())
}

/// Elementary symmetric sums e_0..e_t of the values (p_i - 1) for i in T.
fn symmetric_sums(p: &SizeVector, coords: &[usize]) -> Vec<BigUint> {
    let mut e = vec![BigUint::one()];
    for &i in coords {
        let v = BigUint::from(p.entry(i) - 1);
        e.push(BigUint::zero());
        for j in (1..e.len()).rev() {
            let add = &e[j - 1] * &v;
            e[j] += add;
        }
    }
    e
}

/// Product of the alphabet sizes outside T.
fn outside_product(p: &SizeVector, coords: &[usize]) -> BigUint {
    let mut acc = BigUint::one();
    let mut it = coords.iter().peekable();
    for i in 0..p.len() {
        if it.peek() == Some(&&i) {
            it.next();
        } else {
            acc *= BigUint::from(p.entry(i));
        }
    }
    acc
}

/// Number of points within `radius` of any fixed center on the coordinates
/// in `coords`, by the closed form
/// (prod over i outside T of p_i) * sum_{j <= radius} e_j(p_i - 1 : i in T).
pub fn ball_size(p: &SizeVector, coords: &[usize], radius: u32) -> Result<BigUint> {
    validate_coord_set(p, coords)?;
    if radius as usize > coords.len() {
        return Err(Error::invalid(format!(
            "radius {radius} exceeds coordinate set size {}",
            coords.len()
        )));
    }
    let e = symmetric_sums(p, coords);
    let mut inner = BigUint::zero();
    for ej in e.iter().take(radius as usize + 1) {
        inner += ej;
    }
    Ok(outside_product(p, coords) * inner)
}

/// Materializes the members of a ball as a family.
pub fn ball_members(p: &SizeVector, spec: &BallSpec) -> Result<Family> {
    p.validate_point(&spec.center)?;
    validate_coord_set(p, &spec.coords)?;
    if spec.radius as usize > spec.coords.len() {
        return Err(Error::invalid(format!(
            "radius {} exceeds coordinate set size {}",
            spec.radius,
            spec.coords.len()
        )));
    }
    Family::from_fn(p, |x| {
        let mismatches = spec
            .coords
            .iter()
            .filter(|&&i| x.coord(i) != spec.center.coord(i))
            .count();
        mismatches <= spec.radius as usize
    })
}

/// Strict log-concavity of the ball-size sequence at radius l:
/// size(l)^2 > size(l-1) * size(l+1). Requires 1 <= l <= |T| - 1.
pub fn log_concave_check(p: &SizeVector, coords: &[usize], l: u32) -> Result<bool> {
    validate_coord_set(p, coords)?;
    if coords.len() < 2 || l == 0 || l as usize >= coords.len() {
        return Err(Error::invalid(format!(
            "radius {l} is not interior to 1..={}",
            coords.len().saturating_sub(1)
        )));
    }
    let mid = ball_size(p, coords, l)?;
    let lo = ball_size(p, coords, l - 1)?;
    let hi = ball_size(p, coords, l + 1)?;
    Ok(&mid * &mid > lo * hi)
}

/// Searches for the maximal-product ball pair: coordinate sets are the
/// prefixes of the (alphabet size, index)-sorted coordinate order, radii run
/// over all splits l + m = |T| - r. Ties are reported in full; the canonical
/// best is the lexicographically smallest (|T|, l).
pub fn best_ball_pair(p: &SizeVector, r: u32) -> Result<BallPairSearch> {
    let n = p.len();
    if r as usize > n {
        return Err(Error::invalid(format!(
            "intersection requirement {r} exceeds coordinate count {n}"
        )));
    }
    let order = p.coords_by_size();
    let center = p.all_ones();
    let mut best_product = BigUint::zero();
    let mut optima: Vec<BallPairSpec> = Vec::new();

    for t in r as usize..=n {
        let mut coords: Vec<usize> = order[..t].to_vec();
        coords.sort_unstable();
        let e = symmetric_sums(p, &coords);
        let outside = outside_product(p, &coords);
        let mut sizes = Vec::with_capacity(t + 1);
        let mut cum = BigUint::zero();
        for ej in &e {
            cum += ej;
            sizes.push(&outside * &cum);
        }
        for l in 0..=(t - r as usize) {
            let m = t - r as usize - l;
            let product = &sizes[l] * &sizes[m];
            if product > best_product {
                best_product = product.clone();
                optima.clear();
            }
            if product == best_product {
                optima.push(BallPairSpec {
                    center: center.clone(),
                    coords: coords.clone(),
                    radius_a: l as u32,
                    radius_b: m as u32,
                    r,
                });
            }
        }
    }

    let best = optima[0].clone();
    Ok(BallPairSearch {
        best,
        product: best_product,
        optima,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::hamming_distance;

    fn sv(entries: &[u32]) -> SizeVector {
        SizeVector::new(entries.to_vec()).unwrap()
    }

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    /// Counts ball members by scanning the whole domain.
    fn count_by_enumeration(p: &SizeVector, coords: &[usize], radius: u32) -> u64 {
        let center = p.all_ones();
        p.points()
            .unwrap()
            .filter(|x| {
                coords
                    .iter()
                    .filter(|&&i| x.coord(i) != center.coord(i))
                    .count()
                    <= radius as usize
            })
            .count() as u64
    }

    #[test]
    fn ball_size_matches_enumeration() {
        let cases: &[(&[u32], &[usize], u32)] = &[
            (&[2, 3, 4], &[0, 1], 1),
            (&[2, 3, 4], &[0, 1, 2], 2),
            (&[3, 3, 3], &[1], 0),
            (&[3, 3, 3, 3, 3], &[0, 1, 2, 3, 4], 1),
            (&[5, 2], &[0, 1], 2),
            (&[4, 4, 4], &[2], 1),
        ];
        for &(p, t, rad) in cases {
            let p = sv(p);
            assert_eq!(
                ball_size(&p, t, rad).unwrap(),
                big(count_by_enumeration(&p, t, rad)),
                "p={:?} T={t:?} radius={rad}",
                p.entries()
            );
        }
    }

    #[test]
    fn ball_size_examples() {
        assert_eq!(ball_size(&sv(&[2, 3, 4]), &[0, 1], 1).unwrap(), big(16));
        assert_eq!(
            ball_size(&sv(&[3, 3, 3, 3, 3]), &[0, 1, 2, 3, 4], 1).unwrap(),
            big(11)
        );
    }

    #[test]
    fn ball_size_degenerate_radii() {
        let p = sv(&[3, 4, 5]);
        // Radius 0 pins every T coordinate; radius |T| frees them all.
        assert_eq!(ball_size(&p, &[0, 2], 0).unwrap(), big(4));
        assert_eq!(ball_size(&p, &[0, 2], 2).unwrap(), big(60));
        assert_eq!(ball_size(&p, &[], 0).unwrap(), big(60));
    }

    #[test]
    fn ball_size_rejects_bad_input() {
        let p = sv(&[3, 3]);
        assert!(ball_size(&p, &[0, 1], 3).is_err());
        assert!(ball_size(&p, &[2], 0).is_err());
        assert!(ball_size(&p, &[1, 0], 1).is_err());
        assert!(ball_size(&p, &[0, 0], 1).is_err());
    }

    #[test]
    fn ball_members_matches_size_and_distance() {
        let p = sv(&[2, 3, 4]);
        let spec = BallSpec {
            center: p.all_ones(),
            coords: vec![0, 1],
            radius: 1,
        };
        let fam = ball_members(&p, &spec).unwrap();
        assert_eq!(BigUint::from(fam.len()), big(16));
        for x in fam.points() {
            let on_t = spec
                .coords
                .iter()
                .filter(|&&i| x.coord(i) != spec.center.coord(i))
                .count();
            assert!(on_t <= 1);
        }

        // Full radius on all coordinates is the whole domain.
        let all = BallSpec {
            center: p.all_ones(),
            coords: vec![0, 1, 2],
            radius: 3,
        };
        assert_eq!(ball_members(&p, &all).unwrap().len(), 24);

        // Radius 0 on all coordinates is just the center.
        let point = BallSpec {
            center: Point::new(vec![2, 1, 3]),
            coords: vec![0, 1, 2],
            radius: 0,
        };
        let fam = ball_members(&p, &point).unwrap();
        assert_eq!(fam.len(), 1);
        assert_eq!(
            hamming_distance(&fam.points().next().unwrap(), &point.center).unwrap(),
            0
        );
    }

    #[test]
    fn log_concavity_examples() {
        let p = sv(&[3, 3, 3]);
        let t = &[0, 1, 2];
        let sizes: Vec<BigUint> = (0..=2).map(|l| ball_size(&p, t, l).unwrap()).collect();
        assert_eq!(sizes, vec![big(1), big(7), big(19)]);
        assert!(log_concave_check(&p, t, 1).unwrap());

        let q = sv(&[2, 2, 2, 2]);
        let tq = &[0, 1, 2, 3];
        let sizes: Vec<BigUint> = (1..=3).map(|l| ball_size(&q, tq, l).unwrap()).collect();
        assert_eq!(sizes, vec![big(5), big(11), big(15)]);
        assert!(log_concave_check(&q, tq, 2).unwrap());

        let b = sv(&[2, 2]);
        assert!(log_concave_check(&b, &[0, 1], 1).unwrap());
        assert!(log_concave_check(&b, &[0, 1], 0).is_err());
        assert!(log_concave_check(&b, &[0], 1).is_err());
    }

    #[test]
    fn best_pair_frozen_cases() {
        // p = 3^5, r = 4: best is the (radius 0, radius 1) split on all five
        // coordinates, with product 1 * 11 = 11; the mirrored split ties.
        let s = best_ball_pair(&sv(&[3, 3, 3, 3, 3]), 4).unwrap();
        assert_eq!(s.product, big(11));
        assert_eq!(s.best.coords, vec![0, 1, 2, 3, 4]);
        assert_eq!((s.best.radius_a, s.best.radius_b), (0, 1));
        assert_eq!(s.optima.len(), 2);
        assert_eq!(
            (s.optima[1].radius_a, s.optima[1].radius_b),
            (1, 0)
        );

        // p = (4,4,4), r = 2: fixing two coordinates beats any wider ball.
        let s = best_ball_pair(&sv(&[4, 4, 4]), 2).unwrap();
        assert_eq!(s.product, big(16));
        assert_eq!(s.best.coords, vec![0, 1]);
        assert_eq!((s.best.radius_a, s.best.radius_b), (0, 0));

        // p = 3^4, r = 2: the point pair on |T| = 2 ties with the radius-1
        // pair on |T| = 4; the canonical best is the smaller T.
        let s = best_ball_pair(&sv(&[3, 3, 3, 3]), 2).unwrap();
        assert_eq!(s.product, big(81));
        assert_eq!(s.optima.len(), 2);
        assert_eq!(s.best.coords, vec![0, 1]);
        assert_eq!((s.best.radius_a, s.best.radius_b), (0, 0));
        assert_eq!(s.optima[1].coords, vec![0, 1, 2, 3]);
        assert_eq!((s.optima[1].radius_a, s.optima[1].radius_b), (1, 1));
    }

    #[test]
    fn best_pair_prefers_small_alphabets() {
        // With mixed sizes the prefix order pins the small alphabets first.
        let s = best_ball_pair(&sv(&[5, 2, 4]), 1).unwrap();
        assert_eq!(s.best.coords, vec![1]);
        assert_eq!(s.product, big(400));
    }

    #[test]
    fn best_pair_radii_near_balance() {
        // Log-concavity forces every optimal split to be nearly balanced.
        for (p, r) in [
            (sv(&[3, 3, 3, 3, 3]), 2),
            (sv(&[2, 2, 2, 2, 2, 2]), 1),
            (sv(&[2, 3, 2, 3]), 1),
            (sv(&[5, 5, 4]), 1),
        ] {
            let s = best_ball_pair(&p, r).unwrap();
            for opt in &s.optima {
                let t = opt.coords.len() as i64;
                let skew = t - 2 * opt.radius_a as i64 - opt.r as i64;
                assert!(skew.abs() <= 1, "unbalanced optimum for {:?}", p.entries());
            }
        }
    }

    #[test]
    fn best_pair_rejects_oversized_requirement() {
        assert!(best_ball_pair(&sv(&[2, 2]), 3).is_err());
    }

    #[test]
    fn degenerate_requirement_gives_whole_domain() {
        // r = 0 arises from normalization; the best pair is (S_p, S_p).
        let s = best_ball_pair(&sv(&[3, 4]), 0).unwrap();
        assert_eq!(s.product, big(144));
        assert_eq!(s.best.coords, Vec::<usize>::new());
    }
}
