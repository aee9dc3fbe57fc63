//! Families of points stored as bitsets over ranks, and the pairwise
//! operations on them: cross-intersection tests, duals, relevant
//! coordinates, concentration witnesses, and the function-set construction
//! over binary coordinates.

use crate::domain::{Point, Rank, SizeVector};
use crate::{Error, Result};

/// Hard cap on explicit family domains.
pub const DOMAIN_CAP: u64 = 1 << 20;

/// A set of points of a fixed domain, stored as a bitset indexed by rank.
#[derive(Debug, Clone)]
pub struct Family {
    domain: SizeVector,
    size: u64,
    weights: Vec<u64>,
    words: Vec<u64>,
    count: u64,
}

impl PartialEq for Family {
    fn eq(&self, other: &Self) -> bool {
        self.domain == other.domain && self.words == other.words
    }
}

impl Eq for Family {}

impl Family {
    fn blank(domain: &SizeVector) -> Result<Family> {
        let size = domain
            .domain_size_u64()
            .filter(|&s| s <= DOMAIN_CAP)
            .ok_or_else(|| {
                Error::limit(format!(
                    "explicit families require domain size at most {DOMAIN_CAP}"
                ))
            })?;
        let weights = domain.rank_weights()?;
        Ok(Family {
            domain: domain.clone(),
            size,
            weights,
            words: vec![0; size.div_ceil(64) as usize],
            count: 0,
        })
    }

    pub fn empty(domain: &SizeVector) -> Result<Family> {
        Self::blank(domain)
    }

    pub fn full(domain: &SizeVector) -> Result<Family> {
        let mut f = Self::blank(domain)?;
        for rank in 0..f.size {
            f.set_rank(rank);
        }
        Ok(f)
    }

    pub fn from_points(domain: &SizeVector, points: &[Point]) -> Result<Family> {
        let mut f = Self::blank(domain)?;
        for x in points {
            let rank = domain.rank(x)?;
            f.set_rank(rank.0);
        }
        Ok(f)
    }

    /// Builds the family of all points satisfying the predicate.
    pub fn from_fn(domain: &SizeVector, mut pred: impl FnMut(&Point) -> bool) -> Result<Family> {
        let mut f = Self::blank(domain)?;
        for (rank, x) in domain.points()?.enumerate() {
            if pred(&x) {
                f.set_rank(rank as u64);
            }
        }
        Ok(f)
    }

    pub fn domain(&self) -> &SizeVector {
        &self.domain
    }

    /// Domain size |S_p| as a u64 (guaranteed to fit by construction).
    pub fn domain_len(&self) -> u64 {
        self.size
    }

    pub fn len(&self) -> u64 {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn contains_rank(&self, rank: Rank) -> bool {
        assert!(rank.0 < self.size, "rank out of range");
        self.words[(rank.0 / 64) as usize] >> (rank.0 % 64) & 1 == 1
    }

    pub fn contains(&self, x: &Point) -> Result<bool> {
        Ok(self.contains_rank(self.domain.rank(x)?))
    }

    pub(crate) fn set_rank(&mut self, rank: u64) {
        let w = &mut self.words[(rank / 64) as usize];
        let bit = 1u64 << (rank % 64);
        if *w & bit == 0 {
            *w |= bit;
            self.count += 1;
        }
    }

    /// 0-based digit of a rank at coordinate i; the coordinate value is one
    /// more than the digit.
    pub(crate) fn digit(&self, rank: u64, i: usize) -> u32 {
        (rank / self.weights[i] % u64::from(self.domain.entry(i))) as u32
    }

    pub(crate) fn weight(&self, i: usize) -> u64 {
        self.weights[i]
    }

    pub fn ranks(&self) -> impl Iterator<Item = Rank> + '_ {
        (0..self.size).filter(|&r| self.contains_rank(Rank(r))).map(Rank)
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        self.ranks().map(|r| self.domain.unrank(r).expect("in range"))
    }

    pub fn is_subset_of(&self, other: &Family) -> Result<bool> {
        if self.domain != other.domain {
            return Err(Error::mismatch("families live in different domains"));
        }
        Ok(self
            .words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0))
    }

    /// Members as sorted coordinate lists, the serialization form.
    pub fn to_point_lists(&self) -> Vec<Vec<u32>> {
        self.points().map(Point::into_coords).collect()
    }
}

fn same_domain(a: &Family, b: &Family) -> Result<()> {
    if a.domain != b.domain {
        return Err(Error::mismatch("families live in different domains"));
    }
    Ok(())
}

/// Whether every a in A agrees with every b in B in at least r coordinates.
/// Empty families qualify vacuously.
pub fn are_r_cross_intersecting(a: &Family, b: &Family, r: u32) -> Result<bool> {
    same_domain(a, b)?;
    if r == 0 || a.is_empty() || b.is_empty() {
        return Ok(true);
    }
    let n = a.domain.len() as u32;
    if r > n {
        return Ok(false);
    }
    let max_dist = n - r;
    let b_points: Vec<Point> = b.points().collect();
    for x in a.points() {
        for y in &b_points {
            let dist = x
                .coords()
                .iter()
                .zip(y.coords())
                .filter(|(u, v)| u != v)
                .count() as u32;
            if dist > max_dist {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The largest family B with (A, B) r-cross-intersecting: all points that
/// agree with every member of A in at least r coordinates. The dual of the
/// empty family is the whole domain.
pub fn dual(a: &Family, r: u32) -> Result<Family> {
    let n = a.domain.len() as u32;
    if r == 0 || a.is_empty() {
        return Family::full(&a.domain);
    }
    if r > n {
        return Family::empty(&a.domain);
    }
    let max_dist = (n - r) as usize;
    let a_points: Vec<Point> = a.points().collect();
    Family::from_fn(&a.domain, |y| {
        a_points.iter().all(|x| {
            x.coords()
                .iter()
                .zip(y.coords())
                .filter(|(u, v)| u != v)
                .count()
                <= max_dist
        })
    })
}

/// Whether A and B are each other's duals, i.e. the pair is maximal: no
/// point can be added to either side without breaking cross-intersection.
pub fn check_mutual_duality(a: &Family, b: &Family, r: u32) -> Result<bool> {
    same_domain(a, b)?;
    Ok(dual(a, r)? == *b && dual(b, r)? == *a)
}

/// Coordinates the family actually depends on: i is relevant when two points
/// differing only at i disagree about membership.
pub fn relevant_coordinates(a: &Family) -> Vec<usize> {
    let n = a.domain.len();
    let mut relevant = Vec::new();
    for i in 0..n {
        let p_i = u64::from(a.domain.entry(i));
        let w = a.weight(i);
        let mut depends = false;
        'scan: for rank in 0..a.domain_len() {
            if a.digit(rank, i) != 0 {
                continue;
            }
            let base = a.contains_rank(Rank(rank));
            for v in 1..p_i {
                if a.contains_rank(Rank(rank + v * w)) != base {
                    depends = true;
                    break 'scan;
                }
            }
        }
        if depends {
            relevant.push(i);
        }
    }
    relevant
}

/// Smallest value l at coordinate i on which both families concentrate:
/// at most a 1/p_i fraction of each family avoids l. Returns None when no
/// value concentrates both sides. Exact integer comparison throughout.
pub fn concentration_witness(a: &Family, b: &Family, i: usize) -> Result<Option<u32>> {
    same_domain(a, b)?;
    if i >= a.domain.len() {
        return Err(Error::invalid(format!(
            "coordinate index {} out of range for {} coordinates",
            i + 1,
            a.domain.len()
        )));
    }
    if a.is_empty() || b.is_empty() {
        return Err(Error::invalid(
            "concentration witness requires nonempty families",
        ));
    }
    let p_i = a.domain.entry(i) as usize;
    let mut count_a = vec![0u64; p_i];
    let mut count_b = vec![0u64; p_i];
    for rank in a.ranks() {
        count_a[a.digit(rank.0, i) as usize] += 1;
    }
    for rank in b.ranks() {
        count_b[b.digit(rank.0, i) as usize] += 1;
    }
    let p = p_i as u64;
    for l in 0..p_i {
        let off_a = a.len() - count_a[l];
        let off_b = b.len() - count_b[l];
        if off_a * p <= a.len() && off_b * p <= b.len() {
            return Ok(Some(l as u32 + 1));
        }
    }
    Ok(None)
}

/// The coordinatewise cyclic successor: value x_i becomes x_i mod p_i + 1.
pub fn antipodal(p: &SizeVector, x: &Point) -> Result<Point> {
    p.validate_point(x)?;
    Ok(Point::new(
        x.coords()
            .iter()
            .zip(p.entries())
            .map(|(&v, &pi)| v % pi + 1)
            .collect(),
    ))
}

/// A set W of binary patterns over the coordinates with alphabet size 2.
/// Bit j of a pattern gives the value (1 or 2) at coords[j].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionSet {
    /// 0-based indices of the binary coordinates, strictly increasing.
    pub coords: Vec<usize>,
    /// Distinct patterns, each below 2^|coords|.
    pub functions: Vec<u64>,
}

/// Pattern of a point restricted to the binary coordinates.
fn binary_pattern(x: &Point, coords: &[usize]) -> u64 {
    let mut pat = 0u64;
    for (j, &i) in coords.iter().enumerate() {
        if x.coord(i) == 2 {
            pat |= 1 << j;
        }
    }
    pat
}

/// Builds the pair (A_W, B_W) from a pattern set W over the binary
/// coordinates: A_W collects the points whose pattern lies in W, and B_W the
/// points whose coordinatewise-flipped pattern avoids W. The pair is always
/// 1-cross-intersecting, with |A_W| * |B_W| = |W| * (2^|I| - |W|) * M^2
/// where M is the product of the non-binary alphabet sizes.
pub fn function_set_pair(p: &SizeVector, w: &FunctionSet) -> Result<(Family, Family)> {
    let binary: Vec<usize> = (0..p.len()).filter(|&i| p.entry(i) == 2).collect();
    if binary.is_empty() {
        return Err(Error::invalid("domain has no binary coordinates"));
    }
    if w.coords != binary {
        return Err(Error::invalid(format!(
            "pattern coordinates must be exactly the binary coordinates {:?}",
            binary.iter().map(|i| i + 1).collect::<Vec<_>>()
        )));
    }
    if w.functions.is_empty() {
        return Err(Error::invalid("pattern set must be nonempty"));
    }
    let span = w.coords.len();
    if span > 63 {
        return Err(Error::limit("more than 63 binary coordinates"));
    }
    let full = 1u64 << span;
    let mut seen = vec![false; full as usize];
    for &f in &w.functions {
        if f >= full {
            return Err(Error::invalid(format!(
                "pattern {f} out of range for {span} binary coordinates"
            )));
        }
        if seen[f as usize] {
            return Err(Error::invalid(format!("duplicate pattern {f}")));
        }
        seen[f as usize] = true;
    }

    let mask = full - 1;
    let a = Family::from_fn(p, |x| seen[binary_pattern(x, &w.coords) as usize])?;
    let b = Family::from_fn(p, |y| {
        !seen[(binary_pattern(y, &w.coords) ^ mask) as usize]
    })?;
    Ok((a, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(entries: &[u32]) -> SizeVector {
        SizeVector::new(entries.to_vec()).unwrap()
    }

    fn fam(p: &SizeVector, pts: &[&[u32]]) -> Family {
        let points: Vec<Point> = pts.iter().map(|c| Point::new(c.to_vec())).collect();
        Family::from_points(p, &points).unwrap()
    }

    #[test]
    fn family_basics() {
        let p = sv(&[2, 3]);
        let f = fam(&p, &[&[1, 1], &[2, 3], &[1, 1]]);
        assert_eq!(f.len(), 2);
        assert!(f.contains(&Point::new(vec![1, 1])).unwrap());
        assert!(!f.contains(&Point::new(vec![1, 2])).unwrap());
        assert_eq!(f.to_point_lists(), vec![vec![1, 1], vec![2, 3]]);
        assert_eq!(Family::full(&p).unwrap().len(), 6);
        assert!(Family::empty(&p).unwrap().is_empty());
    }

    #[test]
    fn family_domain_cap() {
        let p = sv(&[2; 21]);
        assert!(Family::empty(&p).is_err());
        let q = sv(&[2; 20]);
        assert!(Family::empty(&q).is_ok());
    }

    #[test]
    fn cube_pair_is_two_cross_intersecting() {
        let p = sv(&[2, 2, 2]);
        let a = fam(&p, &[&[1, 1, 1], &[1, 2, 2]]);
        let b = fam(&p, &[&[1, 1, 2], &[1, 2, 1]]);
        assert!(are_r_cross_intersecting(&a, &b, 2).unwrap());
        assert!(!are_r_cross_intersecting(&a, &b, 3).unwrap());
        assert!(are_r_cross_intersecting(&a, &a, 2).is_ok());
        assert!(!are_r_cross_intersecting(&a, &a, 2).unwrap());
    }

    #[test]
    fn cross_intersection_edge_cases() {
        let p = sv(&[3, 3]);
        let empty = Family::empty(&p).unwrap();
        let full = Family::full(&p).unwrap();
        assert!(are_r_cross_intersecting(&empty, &full, 2).unwrap());
        assert!(are_r_cross_intersecting(&full, &full, 0).unwrap());
        assert!(!are_r_cross_intersecting(&full, &full, 3).unwrap());

        let q = sv(&[3, 3, 3]);
        let other = Family::empty(&q).unwrap();
        assert!(are_r_cross_intersecting(&full, &other, 1).is_err());
    }

    #[test]
    fn dual_of_cube_pair() {
        let p = sv(&[2, 2, 2]);
        let a = fam(&p, &[&[1, 1, 1], &[1, 2, 2]]);
        let b = fam(&p, &[&[1, 1, 2], &[1, 2, 1]]);
        assert_eq!(dual(&a, 2).unwrap(), b);
        assert_eq!(dual(&b, 2).unwrap(), a);
        assert!(check_mutual_duality(&a, &b, 2).unwrap());
        assert!(!check_mutual_duality(&a, &a, 2).unwrap());
    }

    #[test]
    fn dual_degenerate_cases() {
        let p = sv(&[2, 3]);
        let empty = Family::empty(&p).unwrap();
        let full = Family::full(&p).unwrap();
        assert_eq!(dual(&empty, 1).unwrap(), full);
        assert_eq!(dual(&full, 0).unwrap(), full);
        // No point agrees with everything once some coordinate must match.
        assert_eq!(dual(&full, 2).unwrap(), empty);
    }

    #[test]
    fn dual_is_antitone_and_idempotent_in_pairs() {
        let p = sv(&[2, 3, 2]);
        let a = fam(&p, &[&[1, 1, 1], &[1, 2, 1]]);
        let bigger = fam(&p, &[&[1, 1, 1], &[1, 2, 1], &[2, 3, 2]]);
        let da = dual(&a, 1).unwrap();
        let db = dual(&bigger, 1).unwrap();
        assert!(db.is_subset_of(&da).unwrap());
        // dual of dual of dual equals dual.
        let dda = dual(&da, 1).unwrap();
        assert_eq!(dual(&dda, 1).unwrap(), da);
        assert!(a.is_subset_of(&dda).unwrap());
        assert!(are_r_cross_intersecting(&a, &da, 1).unwrap());
    }

    #[test]
    fn relevant_coordinates_of_fixing_and_ball() {
        let p = sv(&[3, 3, 3]);
        let fixing = Family::from_fn(&p, |x| x.coord(0) == 1).unwrap();
        assert_eq!(relevant_coordinates(&fixing), vec![0]);

        let ball = Family::from_fn(&p, |x| {
            (x.coord(0) != 1) as u32 + (x.coord(2) != 1) as u32 <= 1
        })
        .unwrap();
        assert_eq!(relevant_coordinates(&ball), vec![0, 2]);

        assert_eq!(
            relevant_coordinates(&Family::full(&p).unwrap()),
            Vec::<usize>::new()
        );
        assert_eq!(
            relevant_coordinates(&Family::empty(&p).unwrap()),
            Vec::<usize>::new()
        );
    }

    #[test]
    fn concentration_witness_on_fixing_pair() {
        let p = sv(&[2, 3]);
        let a = Family::from_fn(&p, |x| x.coord(0) == 1).unwrap();
        let b = a.clone();
        assert_eq!(concentration_witness(&a, &b, 0).unwrap(), Some(1));
        assert_eq!(concentration_witness(&a, &b, 1).unwrap(), None);
    }

    #[test]
    fn concentration_witness_picks_smallest_value() {
        let p = sv(&[4, 2]);
        let a = Family::from_fn(&p, |x| x.coord(0) == 3).unwrap();
        assert_eq!(concentration_witness(&a, &a, 0).unwrap(), Some(3));
        let full = Family::full(&p).unwrap();
        assert_eq!(concentration_witness(&full, &full, 0).unwrap(), None);
        assert!(concentration_witness(&a, &Family::empty(&p).unwrap(), 0).is_err());
        assert!(concentration_witness(&a, &a, 2).is_err());
    }

    #[test]
    fn antipodal_cycles_each_coordinate() {
        let p = sv(&[2, 3, 5]);
        let x = Point::new(vec![2, 3, 1]);
        assert_eq!(antipodal(&p, &x).unwrap(), Point::new(vec![1, 1, 2]));
        // Applying it p_i times at coordinate i returns to the start.
        let mut y = p.all_ones();
        for _ in 0..30 {
            y = antipodal(&p, &y).unwrap();
        }
        assert_eq!(y, p.all_ones());
        assert!(antipodal(&p, &Point::new(vec![3, 1, 1])).is_err());
    }

    #[test]
    fn function_set_pair_odd_patterns() {
        let p = sv(&[2, 2, 2]);
        let w = FunctionSet {
            coords: vec![0, 1, 2],
            functions: vec![0b001, 0b010, 0b100, 0b111],
        };
        let (a, b) = function_set_pair(&p, &w).unwrap();
        assert_eq!(a.len(), 4);
        assert_eq!(b.len(), 4);
        assert_eq!(a, b);
        assert!(are_r_cross_intersecting(&a, &b, 1).unwrap());
        assert_eq!(a.len() * b.len(), 16);
    }

    #[test]
    fn function_set_pair_mixed_domain() {
        // Binary coordinates are 1 and 3 (1-based); coordinate 2 is free.
        let p = sv(&[2, 3, 2]);
        let w = FunctionSet {
            coords: vec![0, 2],
            functions: vec![0b00, 0b11],
        };
        let (a, b) = function_set_pair(&p, &w).unwrap();
        assert_eq!(a.len(), 2 * 3);
        assert_eq!(b.len(), 2 * 3);
        assert!(are_r_cross_intersecting(&a, &b, 1).unwrap());
        // Half of the patterns used: the product meets |S_p|^2 / 4.
        assert_eq!(a.len() * b.len(), 144 / 4);
    }

    #[test]
    fn function_set_pair_validation() {
        let p = sv(&[2, 3, 2]);
        let bad_coords = FunctionSet {
            coords: vec![0, 1],
            functions: vec![0],
        };
        assert!(function_set_pair(&p, &bad_coords).is_err());
        let dup = FunctionSet {
            coords: vec![0, 2],
            functions: vec![1, 1],
        };
        assert!(function_set_pair(&p, &dup).is_err());
        let oob = FunctionSet {
            coords: vec![0, 2],
            functions: vec![4],
        };
        assert!(function_set_pair(&p, &oob).is_err());
        let no_binary = sv(&[3, 3]);
        let w = FunctionSet {
            coords: vec![],
            functions: vec![0],
        };
        assert!(function_set_pair(&no_binary, &w).is_err());
    }
}
