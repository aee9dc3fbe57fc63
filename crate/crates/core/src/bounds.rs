//! Closed-form upper bounds on |A| * |B| for r-cross-intersecting pairs and
//! the regime classification that tells which extremal shapes are known.
//!
//! Exact quantities use arbitrary-precision arithmetic. Real-exponent
//! comparisons are evaluated in log space with a certified error bound and
//! fall back to exact integer power comparison when the margin is too small
//! to decide.

use crate::domain::SizeVector;
use crate::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

const EPS: f64 = f64::EPSILON;

/// A log-space value with a certified absolute error bound.
#[derive(Debug, Clone, Copy)]
struct LogValue {
    value: f64,
    abs_err: f64,
}

impl LogValue {
    fn zero() -> Self {
        LogValue {
            value: 0.0,
            abs_err: 0.0,
        }
    }

    /// ln(x) for an integer x >= 1, exact in f64 up to one rounding.
    fn ln_int(x: u32) -> Self {
        let v = f64::from(x).ln();
        LogValue {
            value: v,
            abs_err: 2.0 * EPS * v.abs(),
        }
    }

    /// Scales by the exact rational num/den (both fitting in f64 exactly).
    fn scale(self, num: u32, den: u32) -> Self {
        let c = f64::from(num) / f64::from(den);
        let v = self.value * c;
        LogValue {
            value: v,
            abs_err: self.abs_err * c + 3.0 * EPS * v.abs(),
        }
    }

    fn add(self, other: LogValue) -> Self {
        let v = self.value + other.value;
        LogValue {
            value: v,
            abs_err: self.abs_err + other.abs_err + EPS * (self.value.abs() + other.value.abs()),
        }
    }

    fn sub(self, other: LogValue) -> Self {
        self.add(LogValue {
            value: -other.value,
            abs_err: other.abs_err,
        })
    }
}

/// ln of the product of the alphabet sizes at the given coordinates.
fn log_product(p: &SizeVector, coords: impl Iterator<Item = usize>) -> LogValue {
    coords.fold(LogValue::zero(), |acc, i| {
        acc.add(LogValue::ln_int(p.entry(i)))
    })
}

/// ln of prod_{i in T} (p_i - 1)^{1 - 2/p_i}.
fn log_reduced_product(p: &SizeVector, t: &[usize]) -> LogValue {
    t.iter().fold(LogValue::zero(), |acc, &i| {
        let pi = p.entry(i);
        acc.add(LogValue::ln_int(pi - 1).scale(pi - 2, pi))
    })
}

fn validate_coord_subset(p: &SizeVector, t: &[usize]) -> Result<()> {
    for (k, &i) in t.iter().enumerate() {
        if i >= p.len() {
            return Err(Error::invalid(format!(
                "coordinate index {} out of range for {} coordinates",
                i + 1,
                p.len()
            )));
        }
        if k > 0 && t[k - 1] >= i {
            return Err(Error::invalid(
                "coordinate set must be strictly increasing",
            ));
        }
    }
    Ok(())
}

/// The bound |S_p|^2 / k^2 with k the smallest alphabet size, exact.
pub fn min_alphabet_bound(p: &SizeVector) -> BigRational {
    let size = BigInt::from(p.domain_size());
    let k = BigInt::from(p.min_entry());
    BigRational::new(&size * &size, &k * &k)
}

/// The squared size of the family fixing the r smallest coordinates:
/// prod of p_i^2 over the n - r largest entries.
pub fn trivial_product(p: &SizeVector, r: u32) -> Result<BigUint> {
    if r as usize > p.len() {
        return Err(Error::invalid(format!(
            "intersection requirement {r} exceeds coordinate count {}",
            p.len()
        )));
    }
    let order = p.coords_by_size();
    let mut acc = BigUint::one();
    for &i in &order[r as usize..] {
        let v = BigUint::from(p.entry(i));
        acc *= &v * &v;
    }
    Ok(acc)
}

/// Outcome of the fixing-criterion hypothesis
/// 2/p_{r+1} + sum_{i<=r} 1/p_i <= 1 over the ascending-sorted sizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixingCriterion {
    HoldsStrict,
    HoldsWithEquality,
    Fails,
    /// Some alphabet is smaller than 3; the criterion is out of scope.
    SmallAlphabet,
    /// r >= n leaves no spare coordinate for the hypothesis.
    NoSpareCoordinate,
}

#[derive(Debug, Clone)]
pub struct FixingReport {
    pub criterion: FixingCriterion,
    /// Exact value of the hypothesis sum when it is defined.
    pub hypothesis: Option<BigRational>,
}

impl FixingReport {
    pub fn holds(&self) -> bool {
        matches!(
            self.criterion,
            FixingCriterion::HoldsStrict | FixingCriterion::HoldsWithEquality
        )
    }

    pub fn with_equality(&self) -> bool {
        self.criterion == FixingCriterion::HoldsWithEquality
    }
}

/// Evaluates the fixing criterion exactly. When it holds, the maximum
/// product is the trivial one and (strictly, with all alphabets >= 3) every
/// optimal pair fixes r coordinates.
pub fn fixing_criterion(p: &SizeVector, r: u32) -> FixingReport {
    if p.min_entry() < 3 {
        return FixingReport {
            criterion: FixingCriterion::SmallAlphabet,
            hypothesis: None,
        };
    }
    if r as usize >= p.len() {
        return FixingReport {
            criterion: FixingCriterion::NoSpareCoordinate,
            hypothesis: None,
        };
    }
    let mut sorted: Vec<u32> = p.entries().to_vec();
    sorted.sort_unstable();
    let mut sum = BigRational::new(BigInt::from(2), BigInt::from(sorted[r as usize]));
    for &pi in &sorted[..r as usize] {
        sum += BigRational::new(BigInt::one(), BigInt::from(pi));
    }
    let one = BigRational::one();
    let criterion = if sum < one {
        FixingCriterion::HoldsStrict
    } else if sum == one {
        FixingCriterion::HoldsWithEquality
    } else {
        FixingCriterion::Fails
    };
    FixingReport {
        criterion,
        hypothesis: Some(sum),
    }
}

/// A real bound with a certified relative error.
#[derive(Debug, Clone, Copy)]
pub struct EntropyBound {
    pub value: f64,
    pub rel_err: f64,
}

/// The per-family size bound |S_p| / prod_{i in T} (p_i - 1)^{1 - 2/p_i},
/// certified to relative error below 1e-12.
pub fn entropy_size_bound(p: &SizeVector, t: &[usize]) -> Result<EntropyBound> {
    validate_coord_subset(p, t)?;
    let log_bound = log_product(p, 0..p.len()).sub(log_reduced_product(p, t));
    let value = log_bound.value.exp();
    let rel_err = log_bound.abs_err + 2.0 * EPS;
    if rel_err >= 1e-12 {
        return Err(Error::limit(
            "cannot certify the bound to relative error below 1e-12 for this input",
        ));
    }
    Ok(EntropyBound { value, rel_err })
}

/// Admissibility report for a candidate relevant coordinate set.
#[derive(Debug, Clone, Copy)]
pub struct RelevantSetReport {
    /// prod of the r smallest alphabet sizes >= prod_{i in T} (p_i-1)^{1-2/p_i}.
    pub admissible: bool,
    /// Number of coordinates in T with alphabet size above 2.
    pub wide_coords: usize,
    /// wide_coords < 5r, a consequence of admissibility.
    pub width_ok: bool,
}

/// Decides the admissibility inequality exactly: log-space with certified
/// error first, exact common-power integer comparison when the margin is
/// too small.
pub fn relevant_set_filter(p: &SizeVector, r: u32, t: &[usize]) -> Result<RelevantSetReport> {
    validate_coord_subset(p, t)?;
    if (r as usize) > p.len() {
        return Err(Error::invalid(format!(
            "intersection requirement {r} exceeds coordinate count {}",
            p.len()
        )));
    }
    let order = p.coords_by_size();
    let lhs_coords = &order[..r as usize];
    let lhs_log = log_product(p, lhs_coords.iter().copied());
    let rhs_log = log_reduced_product(p, t);
    let diff = lhs_log.sub(rhs_log);

    let admissible = if diff.value.abs() > diff.abs_err {
        diff.value > 0.0
    } else {
        exact_filter_compare(p, lhs_coords, t)?
    };

    let wide_coords = t.iter().filter(|&&i| p.entry(i) > 2).count();
    Ok(RelevantSetReport {
        admissible,
        wide_coords,
        width_ok: (wide_coords as u64) < 5 * u64::from(r),
    })
}

/// Exact comparison of prod(lhs p_i) vs prod_{i in T}(p_i - 1)^{1 - 2/p_i}
/// by raising both sides to the lcm of the T alphabets.
fn exact_filter_compare(p: &SizeVector, lhs_coords: &[usize], t: &[usize]) -> Result<bool> {
    let mut lcm: u64 = 1;
    for &i in t {
        if p.entry(i) > 2 {
            lcm = lcm.lcm(&u64::from(p.entry(i)));
        }
    }
    // Estimated bit length of both raised sides.
    let lhs_log2: f64 = lhs_coords
        .iter()
        .map(|&i| f64::from(p.entry(i)).log2())
        .sum();
    let rhs_log2: f64 = t
        .iter()
        .filter(|&&i| p.entry(i) > 2)
        .map(|&i| f64::from(p.entry(i) - 1).log2())
        .sum();
    if lcm > u64::from(u32::MAX) || (lhs_log2 + rhs_log2) * lcm as f64 > 8e6 {
        return Err(Error::limit(
            "exact tie-break would need an oversized power comparison",
        ));
    }
    let mut lhs = BigUint::one();
    for &i in lhs_coords {
        lhs *= BigUint::from(p.entry(i)).pow(lcm as u32);
    }
    let mut rhs = BigUint::one();
    for &i in t {
        let pi = u64::from(p.entry(i));
        if pi > 2 {
            let exp = lcm / pi * (pi - 2);
            rhs *= BigUint::from(p.entry(i) - 1).pow(exp as u32);
        }
    }
    Ok(lhs >= rhs)
}

/// Which extremal-structure statement applies to (p, r).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// Smallest alphabet exceeds r + 1: the unique optimum fixes r
    /// coordinates.
    MinAboveRPlus1,
    /// Smallest alphabet equals r + 1 > 4: exactly two optimal shapes
    /// (fix r coordinates, or a radius-1 ball pair on r + 2 coordinates).
    MinEqualsRPlus1Above4,
    /// Smallest alphabet at least 3 and the relevant-coordinate bound stays
    /// below r + 4: optima are ball pairs on few coordinates.
    SmallMinBallsApply,
    /// None of the proved regimes applies.
    Unclassified,
}

/// Aggregate bound report for one instance.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub min_alphabet: BigRational,
    pub trivial_product: BigUint,
    pub fixing: FixingReport,
    pub regime: Regime,
    /// r ln(p_1) / ((1 - 2/p_1) ln(p_1 - 1)) over the smallest alphabet;
    /// meaningful only when p_1 >= 3.
    pub n_bound: Option<f64>,
}

/// Upper bound on the number of relevant coordinates of a maximal pair,
/// defined for smallest alphabet at least 3.
pub fn relevant_coordinate_bound(p1: u32, r: u32) -> Option<f64> {
    if p1 < 3 {
        return None;
    }
    let p = f64::from(p1);
    Some(f64::from(r) * p.ln() / ((1.0 - 2.0 / p) * (p - 1.0).ln()))
}

/// Classifies the instance and collects all bound values.
pub fn classify_regime(p: &SizeVector, r: u32) -> Result<BoundReport> {
    let trivial = trivial_product(p, r)?;
    let p1 = p.min_entry();
    let n_bound = relevant_coordinate_bound(p1, r);
    let regime = if p1 > r + 1 {
        Regime::MinAboveRPlus1
    } else if p1 == r + 1 && p1 > 4 {
        Regime::MinEqualsRPlus1Above4
    } else {
        match n_bound {
            // A float margin keeps a knife-edge comparison from deciding.
            Some(nb) if nb < f64::from(r + 4) - 1e-9 => Regime::SmallMinBallsApply,
            _ => Regime::Unclassified,
        }
    };
    Ok(BoundReport {
        min_alphabet: min_alphabet_bound(p),
        trivial_product: trivial,
        fixing: fixing_criterion(p, r),
        regime,
        n_bound,
    })
}

/// Convenience accessor used by reports: the bound as a float for display.
pub fn rational_to_f64(x: &BigRational) -> f64 {
    x.numer()
        .to_f64()
        .and_then(|n| x.denom().to_f64().map(|d| n / d))
        .unwrap_or(f64::INFINITY)
}
