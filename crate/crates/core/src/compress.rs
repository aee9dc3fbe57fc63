//! Supports, monotone families, support systems, and the shift compression
//! that turns a maximal cross-intersecting pair into a monotone one.
//!
//! The support of a point is the set of coordinates with value above 1. A
//! family is monotone when membership is determined by the support and the
//! set of supports is subset-closed; such a family is encoded compactly by
//! its support system.

use crate::domain::{Point, Rank, SizeVector};
use crate::family::{are_r_cross_intersecting, Family};
use crate::{Error, Result};
use num_bigint::BigUint;
use num_traits::{One, Zero};

/// Hard cap on coordinates for bitmask-encoded supports.
pub const SUPPORT_COORD_CAP: usize = 30;

/// The support of x as a bitmask: bit i set when x_i > 1.
pub fn support_vector(x: &Point) -> Result<u32> {
    if x.len() > SUPPORT_COORD_CAP {
        return Err(Error::limit(format!(
            "support masks require at most {SUPPORT_COORD_CAP} coordinates"
        )));
    }
    let mut mask = 0u32;
    for (i, &v) in x.coords().iter().enumerate() {
        if v > 1 {
            mask |= 1 << i;
        }
    }
    Ok(mask)
}

/// A set of subsets of [n], encoded as sorted distinct bitmasks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportSystem {
    n: usize,
    masks: Vec<u32>,
}

impl SupportSystem {
    pub fn new(n: usize, mut masks: Vec<u32>) -> Result<Self> {
        if n == 0 || n > SUPPORT_COORD_CAP {
            return Err(Error::invalid(format!(
                "coordinate count must be in 1..={SUPPORT_COORD_CAP}"
            )));
        }
        let full = (1u32 << n) - 1;
        if let Some(&bad) = masks.iter().find(|&&m| m & !full != 0) {
            return Err(Error::invalid(format!(
                "support mask {bad:#b} uses coordinates beyond {n}"
            )));
        }
        masks.sort_unstable();
        masks.dedup();
        Ok(SupportSystem { n, masks })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    pub fn masks(&self) -> &[u32] {
        &self.masks
    }

    pub fn contains(&self, mask: u32) -> bool {
        self.masks.binary_search(&mask).is_ok()
    }

    /// Whether every subset of every member is a member.
    pub fn is_subset_closed(&self) -> bool {
        self.masks.iter().all(|&m| {
            let mut bits = m;
            while bits != 0 {
                let b = bits & bits.wrapping_neg();
                if !self.contains(m & !b) {
                    return false;
                }
                bits ^= b;
            }
            true
        })
    }

    /// Coordinates the encoded monotone family depends on. Meaningful for
    /// subset-closed systems: i is relevant when some member without i
    /// cannot be extended by i.
    pub fn relevant_coords(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&i| {
                let bit = 1u32 << i;
                self.masks
                    .iter()
                    .any(|&m| m & bit == 0 && !self.contains(m | bit))
            })
            .collect()
    }

    /// When the encoded monotone family is a Hamming ball around the
    /// all-ones point, returns (coordinate-set mask, radius).
    pub fn ball_shape(&self) -> Option<(u32, u32)> {
        if self.masks.is_empty() {
            return None;
        }
        let t_mask: u32 = self.relevant_coords().iter().map(|&i| 1u32 << i).sum();
        let t = t_mask.count_ones();
        let radius = self
            .masks
            .iter()
            .map(|&m| (m & t_mask).count_ones())
            .max()
            .unwrap();
        let mut expected: u64 = 1;
        let mut choose: u64 = 1;
        for j in 1..=radius as u64 {
            choose = choose * (u64::from(t) - j + 1) / j;
            expected += choose;
        }
        expected <<= self.n as u32 - t;
        (expected == self.masks.len() as u64).then_some((t_mask, radius))
    }
}

/// The set of supports of the members of A.
pub fn support_system(a: &Family) -> Result<SupportSystem> {
    let masks: Result<Vec<u32>> = a.points().map(|x| support_vector(&x)).collect();
    SupportSystem::new(a.domain().len(), masks?)
}

/// Whether membership in A depends only on the support and the support
/// system is subset-closed.
pub fn is_monotone(a: &Family) -> Result<bool> {
    if a.is_empty() {
        return Ok(true);
    }
    let s = support_system(a)?;
    if !s.is_subset_closed() {
        return Ok(false);
    }
    Ok(size_from_support(a.domain(), &s)? == BigUint::from(a.len()))
}

/// Cardinality of the monotone family with the given support system,
/// computed as the sum over members s of the product of (p_i - 1) for i in s.
pub fn size_from_support(p: &SizeVector, s: &SupportSystem) -> Result<BigUint> {
    if p.len() != s.n() {
        return Err(Error::mismatch(format!(
            "support system over {} coordinates, domain has {}",
            s.n(),
            p.len()
        )));
    }
    if !s.is_subset_closed() {
        return Err(Error::invalid("support system is not subset-closed"));
    }
    let mut total = BigUint::zero();
    for &mask in s.masks() {
        let mut term = BigUint::one();
        let mut bits = mask;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            term *= BigUint::from(p.entry(i) - 1);
            bits &= bits - 1;
        }
        total += term;
    }
    Ok(total)
}

/// Materializes the monotone family with the given support system.
pub fn family_from_support(p: &SizeVector, s: &SupportSystem) -> Result<Family> {
    if p.len() != s.n() {
        return Err(Error::mismatch(format!(
            "support system over {} coordinates, domain has {}",
            s.n(),
            p.len()
        )));
    }
    if !s.is_subset_closed() {
        return Err(Error::invalid("support system is not subset-closed"));
    }
    Family::from_fn(p, |x| s.contains(support_vector(x).expect("within cap")))
}

/// Whether the monotone families with these support systems are
/// r-cross-intersecting: every pair of members must cover at most n - r
/// coordinates.
pub fn supports_cross_intersecting(
    sa: &SupportSystem,
    sb: &SupportSystem,
    r: u32,
) -> Result<bool> {
    if sa.n() != sb.n() {
        return Err(Error::mismatch(
            "support systems over different coordinate counts",
        ));
    }
    if r as usize > sa.n() {
        return Ok(sa.is_empty() || sb.is_empty());
    }
    let budget = sa.n() as u32 - r;
    Ok(sa
        .masks()
        .iter()
        .all(|&a| sb.masks().iter().all(|&b| (a | b).count_ones() <= budget)))
}

/// The compression that replaces value j by 1 in coordinate i wherever the
/// projected point is absent from the family. Preserves cardinality.
pub fn shift(a: &Family, i: usize, j: u32) -> Result<Family> {
    let p = a.domain();
    if i >= p.len() {
        return Err(Error::invalid(format!(
            "coordinate index {} out of range for {} coordinates",
            i + 1,
            p.len()
        )));
    }
    if j < 2 || j > p.entry(i) {
        return Err(Error::invalid(format!(
            "shift value {} outside 2..={} at coordinate {}",
            j,
            p.entry(i),
            i + 1
        )));
    }
    let w = a.weight(i);
    let drop = u64::from(j - 1) * w;
    let mut out = Family::empty(p)?;
    for rank in a.ranks() {
        let rank = rank.0;
        if a.digit(rank, i) == j - 1 && !a.contains_rank(Rank(rank - drop)) {
            out.set_rank(rank - drop);
        } else {
            out.set_rank(rank);
        }
    }
    Ok(out)
}

/// Sum of all coordinates over all members; strictly decreases under any
/// shift that changes the family.
pub fn potential(a: &Family) -> u64 {
    a.points()
        .map(|x| x.coords().iter().map(|&v| u64::from(v)).sum::<u64>())
        .sum()
}

/// Outcome of compressing a pair to a shift fixpoint.
#[derive(Debug, Clone)]
pub struct CompressOutcome {
    pub a: Family,
    pub b: Family,
    /// Full (i, j) sweeps performed, including the final quiescent one.
    pub sweeps: u32,
    pub a_monotone: bool,
    pub b_monotone: bool,
}

/// Repeatedly applies the shift with the same (i, j) to both families,
/// cycling over all (i, j) in lexicographic order until a full sweep changes
/// nothing. Cardinalities and cross-intersection are preserved; the result
/// is monotone whenever the input pair was maximal.
pub fn compress_pair(a: &Family, b: &Family, r: u32) -> Result<CompressOutcome> {
    if !are_r_cross_intersecting(a, b, r)? {
        return Err(Error::invalid("input pair is not r-cross-intersecting"));
    }
    let p = a.domain().clone();
    let mut cur_a = a.clone();
    let mut cur_b = b.clone();
    let mut sweeps = 0u32;
    loop {
        sweeps += 1;
        let mut changed = false;
        for i in 0..p.len() {
            for j in 2..=p.entry(i) {
                let next_a = shift(&cur_a, i, j)?;
                let next_b = shift(&cur_b, i, j)?;
                if next_a != cur_a || next_b != cur_b {
                    changed = true;
                    cur_a = next_a;
                    cur_b = next_b;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let a_monotone = is_monotone(&cur_a)?;
    let b_monotone = is_monotone(&cur_b)?;
    Ok(CompressOutcome {
        a: cur_a,
        b: cur_b,
        sweeps,
        a_monotone,
        b_monotone,
    })
}
