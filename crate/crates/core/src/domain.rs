//! Mixed-radix product domains S_p = [p_1] x ... x [p_n] and their points.
//!
//! Coordinates are 1-based: coordinate i of a point ranges over 1..=p_i.
//! Ranks order points lexicographically by coordinate, the last coordinate
//! varying fastest.

use crate::{Error, Result};
use num_bigint::BigUint;
use num_traits::One;

/// Alphabet sizes (p_1, ..., p_n). Entries are at least 1; a normalized
/// vector has every entry at least 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SizeVector {
    entries: Vec<u32>,
}

/// A point of S_p, stored as 1-based coordinate values.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    coords: Vec<u32>,
}

/// Position of a point in the lexicographic enumeration of S_p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rank(pub u64);

impl SizeVector {
    /// Builds a size vector. Entries must be nonempty and positive.
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::invalid("size vector must be nonempty"));
        }
        if let Some(pos) = entries.iter().position(|&p| p == 0) {
            return Err(Error::invalid(format!(
                "alphabet size at coordinate {} is zero",
                pos + 1
            )));
        }
        Ok(SizeVector { entries })
    }

    /// Drops unit coordinates and lowers the intersection requirement by one
    /// for each dropped coordinate (a unit coordinate agrees on every pair).
    /// The requirement never drops below zero.
    pub fn normalize(raw: &[u32], r: u32) -> Result<(Self, u32)> {
        if raw.is_empty() {
            return Err(Error::invalid("size vector must be nonempty"));
        }
        if let Some(pos) = raw.iter().position(|&p| p == 0) {
            return Err(Error::invalid(format!(
                "alphabet size at coordinate {} is zero",
                pos + 1
            )));
        }
        let kept: Vec<u32> = raw.iter().copied().filter(|&p| p >= 2).collect();
        if kept.is_empty() {
            return Err(Error::invalid(
                "size vector is empty after dropping unit coordinates",
            ));
        }
        let dropped = (raw.len() - kept.len()) as u32;
        Ok((SizeVector { entries: kept }, r.saturating_sub(dropped)))
    }

    /// Number of coordinates n.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Alphabet size of coordinate i (0-based index).
    pub fn entry(&self, i: usize) -> u32 {
        self.entries[i]
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    /// Smallest alphabet size, usually written k.
    pub fn min_entry(&self) -> u32 {
        *self.entries.iter().min().expect("nonempty")
    }

    /// Coordinate indices sorted by (alphabet size, index). Prefixes of this
    /// order are the candidate coordinate sets for ball constructions.
    pub fn coords_by_size(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.sort_by_key(|&i| (self.entries[i], i));
        idx
    }

    /// |S_p| as an exact integer.
    pub fn domain_size(&self) -> BigUint {
        let mut acc = BigUint::one();
        for &p in &self.entries {
            acc *= BigUint::from(p);
        }
        acc
    }

    /// |S_p| when it fits in a u64.
    pub fn domain_size_u64(&self) -> Option<u64> {
        let mut acc: u64 = 1;
        for &p in &self.entries {
            acc = acc.checked_mul(u64::from(p))?;
        }
        Some(acc)
    }

    /// Mixed-radix place weights: weight of coordinate i is the product of
    /// the alphabet sizes after it. Requires |S_p| to fit in a u64.
    pub(crate) fn rank_weights(&self) -> Result<Vec<u64>> {
        self.domain_size_u64()
            .ok_or_else(|| Error::limit("domain size exceeds u64; ranks are unavailable"))?;
        let n = self.len();
        let mut w = vec![1u64; n];
        for i in (0..n.saturating_sub(1)).rev() {
            w[i] = w[i + 1] * u64::from(self.entries[i + 1]);
        }
        Ok(w)
    }

    /// Checks that x is a point of S_p.
    pub fn validate_point(&self, x: &Point) -> Result<()> {
        if x.len() != self.len() {
            return Err(Error::mismatch(format!(
                "point has {} coordinates, domain has {}",
                x.len(),
                self.len()
            )));
        }
        for (i, (&v, &p)) in x.coords.iter().zip(&self.entries).enumerate() {
            if v == 0 || v > p {
                return Err(Error::invalid(format!(
                    "coordinate {} is {v}, outside 1..={p}",
                    i + 1
                )));
            }
        }
        Ok(())
    }

    /// Lexicographic position of x in S_p.
    pub fn rank(&self, x: &Point) -> Result<Rank> {
        self.validate_point(x)?;
        let w = self.rank_weights()?;
        let mut acc = 0u64;
        for (i, &v) in x.coords.iter().enumerate() {
            acc += u64::from(v - 1) * w[i];
        }
        Ok(Rank(acc))
    }

    /// Inverse of [`SizeVector::rank`].
    pub fn unrank(&self, rank: Rank) -> Result<Point> {
        let size = self
            .domain_size_u64()
            .ok_or_else(|| Error::limit("domain size exceeds u64; ranks are unavailable"))?;
        if rank.0 >= size {
            return Err(Error::invalid(format!(
                "rank {} out of range for domain of size {size}",
                rank.0
            )));
        }
        let w = self.rank_weights()?;
        let coords = (0..self.len())
            .map(|i| (rank.0 / w[i] % u64::from(self.entries[i])) as u32 + 1)
            .collect();
        Ok(Point { coords })
    }

    /// The all-ones point (1, ..., 1).
    pub fn all_ones(&self) -> Point {
        Point {
            coords: vec![1; self.len()],
        }
    }

    /// Iterates over all points in rank order. Requires |S_p| to fit in u64.
    pub fn points(&self) -> Result<Points<'_>> {
        self.rank_weights()?;
        Ok(Points {
            domain: self,
            next: Some(self.all_ones()),
        })
    }
}

impl Point {
    pub fn new(coords: Vec<u32>) -> Self {
        Point { coords }
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> u32 {
        self.coords[i]
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn into_coords(self) -> Vec<u32> {
        self.coords
    }
}

/// Iterator over all points of a domain in rank order.
pub struct Points<'a> {
    domain: &'a SizeVector,
    next: Option<Point>,
}

impl Iterator for Points<'_> {
    type Item = Point;

    fn next(&mut self) -> Option<Point> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut i = succ.coords.len();
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            if succ.coords[i] < self.domain.entries[i] {
                succ.coords[i] += 1;
                self.next = Some(succ);
                break;
            }
            succ.coords[i] = 1;
        }
        Some(current)
    }
}

/// Number of coordinates where x and y differ.
pub fn hamming_distance(x: &Point, y: &Point) -> Result<u32> {
    if x.len() != y.len() {
        return Err(Error::mismatch(format!(
            "points have {} and {} coordinates",
            x.len(),
            y.len()
        )));
    }
    Ok(x.coords
        .iter()
        .zip(&y.coords)
        .filter(|(a, b)| a != b)
        .count() as u32)
}

/// Number of coordinates where x and y agree.
pub fn agreements(x: &Point, y: &Point) -> Result<u32> {
    Ok(x.len() as u32 - hamming_distance(x, y)?)
}

/// Whether x and y agree in at least r coordinates, equivalently whether
/// their Hamming distance is at most n - r.
pub fn r_intersecting(x: &Point, y: &Point, r: u32) -> Result<bool> {
    Ok(agreements(x, y)? >= r)
}
