//! Exact computation of the maximal product |A| * |B| over
//! r-cross-intersecting pairs, with enumeration of all optimal pairs.
//!
//! Two engines cross-validate each other: a support-system search over
//! monotone families (every instance has a monotone optimum, so the monotone
//! maximum is the global maximum) and a brute-force scan of all subsets on
//! tiny domains. A third engine lives in the rectangle view of commgame.

use crate::balls::best_ball_pair;
use crate::bounds::relevant_set_filter;
use crate::compress::SupportSystem;
use crate::domain::SizeVector;
use crate::family::Family;
use crate::{Error, Result};
use num_bigint::BigUint;
use rayon::prelude::*;
use std::time::{Duration, Instant};

/// Caps and toggles for the search engines.
#[derive(Debug, Clone)]
pub struct SearchOptions {
    /// Coordinate cap for the support-system search.
    pub max_n: usize,
    /// Domain-size cap for the brute-force search.
    pub max_full_domain: u64,
    /// Skip support systems whose relevant set is inadmissible for a
    /// maximal pair. Disable for oracle-pure runs.
    pub pruning: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            max_n: 6,
            max_full_domain: 16,
            pruning: true,
        }
    }
}

/// Hard ceiling for the brute-force engine; the subset scan is exponential
/// in the domain size, so raising max_full_domain past this has no effect.
pub const FULL_DOMAIN_CEILING: u64 = 32;

/// Hard ceiling for the support-system engine: partial systems are tracked
/// as 64-bit sets over the 2^n candidate supports.
pub const MONOTONE_N_CEILING: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    Monotone,
    Full,
}

#[derive(Debug, Clone)]
pub struct SearchStats {
    pub nodes: u64,
    pub elapsed: Duration,
}

/// An optimal pair, in the representation native to the engine that found
/// it. Monotone witnesses are unordered (lexicographically sorted);
/// brute-force witnesses are ordered by the first component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessPair {
    Monotone { a: SupportSystem, b: SupportSystem },
    Explicit { a: Family, b: Family },
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub p: SizeVector,
    pub r: u32,
    pub max_product: BigUint,
    pub witnesses: Vec<WitnessPair>,
    pub mode: SearchMode,
    pub stats: SearchStats,
}

fn validate_instance(p: &SizeVector, r: u32) -> Result<()> {
    if p.min_entry() < 2 {
        return Err(Error::invalid(
            "size vector must be normalized (every alphabet size at least 2)",
        ));
    }
    if r as usize > p.len() {
        return Err(Error::invalid(format!(
            "intersection requirement {r} exceeds coordinate count {}",
            p.len()
        )));
    }
    Ok(())
}

/// Shared tables for one monotone search.
struct MonotoneCtx {
    n: usize,
    budget: u32,
    /// Support masks with popcount <= budget, sorted by (popcount, value).
    /// Any larger support forces an empty partner, so product zero.
    order: Vec<u32>,
    /// Product of (p_i - 1) over the bits of each mask, indexed by mask.
    weight: Vec<u64>,
    /// Admissibility of each candidate relevant set, indexed by mask.
    admissible: Vec<bool>,
    prune: bool,
}

/// One partial assignment in the subset-lattice DFS.
#[derive(Clone, Copy)]
struct NodeState {
    idx: usize,
    /// Bitset over mask values: masks included in S_A so far.
    included: u64,
    weight_a: u64,
    /// For each mask b, the largest |a \ b| over included a.
    need: [u8; 64],
}

#[derive(Default)]
struct LocalBest {
    nodes: u64,
    max: u128,
    /// (S_A, S_B) as bitsets over mask values, product equal to max.
    pairs: Vec<(u64, u64)>,
}

impl LocalBest {
    fn offer(&mut self, product: u128, a_bits: u64, b_bits: u64) {
        if product > self.max {
            self.max = product;
            self.pairs.clear();
        }
        if product == self.max {
            self.pairs.push((a_bits, b_bits));
        }
    }

    fn merge(mut self, other: LocalBest) -> LocalBest {
        self.nodes += other.nodes;
        if other.max > self.max {
            self.max = other.max;
            self.pairs = other.pairs;
        } else if other.max == self.max {
            self.pairs.extend(other.pairs);
        }
        self
    }
}

impl MonotoneCtx {
    fn new(p: &SizeVector, r: u32, prune: bool) -> Result<MonotoneCtx> {
        let n = p.len();
        let budget = n as u32 - r;
        let mut order: Vec<u32> = (0..1u32 << n)
            .filter(|m| m.count_ones() <= budget)
            .collect();
        order.sort_by_key(|m| (m.count_ones(), *m));
        let mut weight = vec![0u64; 1 << n];
        for m in 0..1u32 << n {
            let mut acc = 1u64;
            for i in 0..n {
                if m >> i & 1 == 1 {
                    acc *= u64::from(p.entry(i) - 1);
                }
            }
            weight[m as usize] = acc;
        }
        let mut admissible = vec![true; 1 << n];
        if prune {
            for m in 0..1u32 << n {
                let t: Vec<usize> = (0..n).filter(|i| m >> i & 1 == 1).collect();
                admissible[m as usize] = relevant_set_filter(p, r, &t)?.admissible;
            }
        }
        Ok(MonotoneCtx {
            n,
            budget,
            order,
            weight,
            admissible,
            prune,
        })
    }

    fn include(&self, state: &NodeState, mask: u32) -> NodeState {
        let mut next = *state;
        next.idx += 1;
        next.included |= 1u64 << mask;
        next.weight_a += self.weight[mask as usize];
        for &b in &self.order {
            let excess = (mask & !b).count_ones() as u8;
            if excess > next.need[b as usize] {
                next.need[b as usize] = excess;
            }
        }
        next
    }

    fn eligible(&self, included: u64, mask: u32) -> bool {
        let mut bits = mask;
        while bits != 0 {
            let b = bits & bits.wrapping_neg();
            if included >> (mask ^ b) & 1 == 0 {
                return false;
            }
            bits ^= b;
        }
        true
    }

    /// Relevant coordinates of the monotone family S_A, as a mask.
    fn relevant_mask(&self, included: u64) -> u32 {
        let mut rel = 0u32;
        for &m in &self.order {
            if included >> m & 1 == 0 {
                continue;
            }
            for i in 0..self.n {
                let bit = 1u32 << i;
                if m & bit == 0 && included >> (m | bit) & 1 == 0 {
                    rel |= bit;
                }
            }
        }
        rel
    }

    fn leaf(&self, state: &NodeState, local: &mut LocalBest) {
        if self.prune && !self.admissible[self.relevant_mask(state.included) as usize] {
            return;
        }
        let mut weight_b = 0u64;
        let mut b_bits = 0u64;
        for &b in &self.order {
            if b.count_ones() + u32::from(state.need[b as usize]) <= self.budget {
                weight_b += self.weight[b as usize];
                b_bits |= 1u64 << b;
            }
        }
        local.offer(
            u128::from(state.weight_a) * u128::from(weight_b),
            state.included,
            b_bits,
        );
    }

    fn dfs(&self, state: NodeState, local: &mut LocalBest) {
        local.nodes += 1;
        if state.idx == self.order.len() {
            self.leaf(&state, local);
            return;
        }
        let mask = self.order[state.idx];
        let mut excluded = state;
        excluded.idx += 1;
        self.dfs(excluded, local);
        if self.eligible(state.included, mask) {
            self.dfs(self.include(&state, mask), local);
        }
    }

    /// Expands the DFS tree to a frontier of partial states.
    fn frontier(&self, depth: usize) -> (Vec<NodeState>, u64) {
        let root = NodeState {
            // The empty support is always present (position 0 in order).
            idx: 1,
            included: 1,
            weight_a: 1,
            need: [0; 64],
        };
        let mut states = vec![root];
        let mut visited = 0u64;
        for level in 1..depth.min(self.order.len()) {
            let mut next = Vec::with_capacity(states.len() * 2);
            for s in &states {
                visited += 1;
                let mask = self.order[level];
                let mut excluded = *s;
                excluded.idx += 1;
                next.push(excluded);
                if self.eligible(s.included, mask) {
                    next.push(self.include(s, mask));
                }
            }
            states = next;
        }
        (states, visited)
    }

    /// The maximal partner of a support-system bitset.
    fn partner_bits(&self, a_bits: u64) -> u64 {
        let mut out = 0u64;
        for &b in &self.order {
            let ok = self.order.iter().all(|&a| {
                a_bits >> a & 1 == 0 || (a | b).count_ones() <= self.budget
            });
            if ok {
                out |= 1u64 << b;
            }
        }
        out
    }
}

fn bits_to_masks(bits: u64) -> Vec<u32> {
    (0..64).filter(|i| bits >> i & 1 == 1).collect()
}

/// Degenerate requirement: the unique optimum is the whole domain twice.
fn whole_domain_result(p: &SizeVector, mode: SearchMode, start: Instant) -> Result<SearchResult> {
    let size = p.domain_size();
    let witnesses = match mode {
        SearchMode::Monotone => {
            let all: Vec<u32> = (0..1u32 << p.len()).collect();
            let s = SupportSystem::new(p.len(), all)?;
            vec![WitnessPair::Monotone { a: s.clone(), b: s }]
        }
        SearchMode::Full => {
            let full = Family::full(p)?;
            vec![WitnessPair::Explicit {
                a: full.clone(),
                b: full,
            }]
        }
    };
    Ok(SearchResult {
        p: p.clone(),
        r: 0,
        max_product: &size * &size,
        witnesses,
        mode,
        stats: SearchStats {
            nodes: 1,
            elapsed: start.elapsed(),
        },
    })
}

/// Exact maximum of |A| * |B| via enumeration of subset-closed support
/// systems; the partner of each candidate is computed directly.
pub fn monotone_max(p: &SizeVector, r: u32, opts: &SearchOptions) -> Result<SearchResult> {
    let start = Instant::now();
    validate_instance(p, r)?;
    let n_cap = opts.max_n.min(MONOTONE_N_CEILING);
    if p.len() > n_cap {
        return Err(Error::limit(format!(
            "support-system search capped at {n_cap} coordinates (got {})",
            p.len()
        )));
    }
    if p.domain_size_u64().is_none() {
        return Err(Error::limit(
            "alphabet sizes too large for exact u64 weight accounting",
        ));
    }
    if r == 0 {
        return whole_domain_result(p, SearchMode::Monotone, start);
    }

    let ctx = MonotoneCtx::new(p, r, opts.pruning)?;
    let (frontier, prefix_nodes) = ctx.frontier(12);
    let best = frontier
        .into_par_iter()
        .map(|state| {
            let mut local = LocalBest::default();
            ctx.dfs(state, &mut local);
            local
        })
        .reduce(LocalBest::default, LocalBest::merge);

    // Keep only mutually-dual optima and canonicalize as unordered pairs.
    let mut canon: Vec<(Vec<u32>, Vec<u32>)> = Vec::new();
    for &(a_bits, b_bits) in &best.pairs {
        if ctx.partner_bits(b_bits) != a_bits {
            continue;
        }
        let a = bits_to_masks(a_bits);
        let b = bits_to_masks(b_bits);
        let pair = if a <= b { (a, b) } else { (b, a) };
        canon.push(pair);
    }
    canon.sort();
    canon.dedup();
    let witnesses = canon
        .into_iter()
        .map(|(a, b)| {
            Ok(WitnessPair::Monotone {
                a: SupportSystem::new(p.len(), a)?,
                b: SupportSystem::new(p.len(), b)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(SearchResult {
        p: p.clone(),
        r,
        max_product: BigUint::from(best.max),
        witnesses,
        mode: SearchMode::Monotone,
        stats: SearchStats {
            nodes: prefix_nodes + best.nodes,
            elapsed: start.elapsed(),
        },
    })
}

/// Brute force over every subset of a tiny domain: for each nonempty A the
/// partner is dual(A), and optima are reported as ordered pairs
/// (A, dual(A)) with A closed under double dualization.
pub fn full_max(p: &SizeVector, r: u32, opts: &SearchOptions) -> Result<SearchResult> {
    let start = Instant::now();
    validate_instance(p, r)?;
    let d = p.domain_size_u64().unwrap_or(u64::MAX);
    let cap = opts.max_full_domain.min(FULL_DOMAIN_CEILING);
    if d > cap {
        return Err(Error::limit(format!(
            "brute-force search capped at domain size {cap} (got {d})"
        )));
    }
    if r == 0 {
        return whole_domain_result(p, SearchMode::Full, start);
    }
    let d = d as usize;
    let n = p.len() as u32;
    let max_dist = n - r;

    let coords: Vec<Vec<u32>> = p.points()?.map(|x| x.coords().to_vec()).collect();
    let compat: Vec<u64> = (0..d)
        .map(|x| {
            let mut m = 0u64;
            for y in 0..d {
                let dist = coords[x]
                    .iter()
                    .zip(&coords[y])
                    .filter(|(u, v)| u != v)
                    .count() as u32;
                if dist <= max_dist {
                    m |= 1u64 << y;
                }
            }
            m
        })
        .collect();
    let full_mask = if d == 64 { u64::MAX } else { (1u64 << d) - 1 };
    let dual_bits = |mask: u64| -> u64 {
        let mut out = full_mask;
        let mut bits = mask;
        while bits != 0 {
            let x = bits.trailing_zeros() as usize;
            out &= compat[x];
            bits &= bits - 1;
        }
        out
    };

    let total = (1u64 << d) - 1;
    let chunk = 1u64 << 12;
    let ranges: Vec<(u64, u64)> = (0..total.div_ceil(chunk))
        .map(|i| (1 + i * chunk, (1 + (i + 1) * chunk).min(total + 1)))
        .collect();
    let best = ranges
        .into_par_iter()
        .map(|(lo, hi)| {
            let mut local = LocalBest::default();
            for a in lo..hi {
                local.nodes += 1;
                let b = dual_bits(a);
                let product =
                    u128::from(a.count_ones()) * u128::from(b.count_ones());
                local.offer(product, a, b);
            }
            local
        })
        .reduce(LocalBest::default, LocalBest::merge);

    // Closed optima only, ordered by the member list of A.
    let mut closed: Vec<(Vec<u32>, u64, u64)> = best
        .pairs
        .iter()
        .filter(|&&(a, b)| dual_bits(b) == a)
        .map(|&(a, b)| (bits_to_masks(a), a, b))
        .collect();
    closed.sort();
    closed.dedup();
    let witnesses = closed
        .into_iter()
        .map(|(_, a_bits, b_bits)| {
            let mut a = Family::empty(p)?;
            let mut b = Family::empty(p)?;
            for x in 0..d as u64 {
                if a_bits >> x & 1 == 1 {
                    a.set_rank(x);
                }
                if b_bits >> x & 1 == 1 {
                    b.set_rank(x);
                }
            }
            Ok(WitnessPair::Explicit { a, b })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(SearchResult {
        p: p.clone(),
        r,
        max_product: BigUint::from(best.max),
        witnesses,
        mode: SearchMode::Full,
        stats: SearchStats {
            nodes: best.nodes,
            elapsed: start.elapsed(),
        },
    })
}

/// Runs the engine appropriate to the requested mode and returns its
/// canonical optimal pairs.
pub fn enumerate_optimal_pairs(
    p: &SizeVector,
    r: u32,
    mode: SearchMode,
    opts: &SearchOptions,
) -> Result<Vec<WitnessPair>> {
    let result = match mode {
        SearchMode::Monotone => monotone_max(p, r, opts)?,
        SearchMode::Full => full_max(p, r, opts)?,
    };
    Ok(result.witnesses)
}

/// Verdict on the ball conjecture for one instance.
#[derive(Debug, Clone)]
pub struct ConjectureVerdict {
    /// Whether the best ball pair attains the search maximum.
    pub consistent: bool,
    pub ball_product: BigUint,
    pub search_product: BigUint,
    /// Whether every optimal pair is a pair of balls; evaluated only when
    /// every alphabet size is at least 3.
    pub all_optima_are_balls: Option<bool>,
    /// A witness of inconsistency (products differ) or a non-ball optimum.
    pub counterexample: Option<WitnessPair>,
}

/// Compares the optimal ball-pair product with the exact search maximum,
/// and (for alphabets of size at least 3) checks that every optimum is a
/// ball pair.
pub fn check_ball_conjecture(
    p: &SizeVector,
    r: u32,
    opts: &SearchOptions,
) -> Result<ConjectureVerdict> {
    let ball = best_ball_pair(p, r)?;
    let search = monotone_max(p, r, opts)?;
    let consistent = ball.product == search.max_product;

    let mut all_balls = None;
    let mut counterexample = None;
    if !consistent {
        counterexample = search.witnesses.first().cloned();
    }
    if p.min_entry() >= 3 {
        let mut ok = true;
        for w in &search.witnesses {
            if let WitnessPair::Monotone { a, b } = w {
                if a.ball_shape().is_none() || b.ball_shape().is_none() {
                    ok = false;
                    if counterexample.is_none() {
                        counterexample = Some(w.clone());
                    }
                    break;
                }
            }
        }
        all_balls = Some(ok);
    }

    Ok(ConjectureVerdict {
        consistent,
        ball_product: ball.product,
        search_product: search.max_product,
        all_optima_are_balls: all_balls,
        counterexample,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::trivial_product;
    use crate::compress::{family_from_support, supports_cross_intersecting};
    use crate::family::{are_r_cross_intersecting, check_mutual_duality};

    fn sv(entries: &[u32]) -> SizeVector {
        SizeVector::new(entries.to_vec()).unwrap()
    }

    fn opts() -> SearchOptions {
        SearchOptions::default()
    }

    #[test]
    fn monotone_singleton_against_radius_one_ball() {
        let res = monotone_max(&sv(&[3, 3, 3, 3, 3]), 4, &opts()).unwrap();
        assert_eq!(res.max_product, BigUint::from(11u32));
        assert_eq!(res.witnesses.len(), 1);
        let WitnessPair::Monotone { a, b } = &res.witnesses[0] else {
            panic!("monotone witness expected");
        };
        assert_eq!(a.masks(), &[0]);
        assert_eq!(b.masks(), &[0b00000, 0b00001, 0b00010, 0b00100, 0b01000, 0b10000]);
    }

    #[test]
    fn monotone_fixings_for_wide_alphabets() {
        let res = monotone_max(&sv(&[4, 4, 4]), 2, &opts()).unwrap();
        assert_eq!(res.max_product, BigUint::from(16u32));
        // One witness per choice of the free coordinate.
        assert_eq!(res.witnesses.len(), 3);
        for (w, free) in res.witnesses.iter().zip([0b001u32, 0b010, 0b100]) {
            let WitnessPair::Monotone { a, b } = w else {
                panic!("monotone witness expected");
            };
            assert_eq!(a.masks(), &[0, free]);
            assert_eq!(a, b);
        }
    }

    #[test]
    fn monotone_full_requirement_forces_singletons() {
        for p in [sv(&[2, 2]), sv(&[3, 3, 3]), sv(&[5, 4])] {
            let r = p.len() as u32;
            let res = monotone_max(&p, r, &opts()).unwrap();
            assert_eq!(res.max_product, BigUint::from(1u32));
        }
    }

    #[test]
    fn monotone_respects_caps_and_validation() {
        assert!(monotone_max(&sv(&[2; 7]), 1, &opts()).is_err());
        assert!(monotone_max(&sv(&[1, 3]), 1, &opts()).is_err());
        assert!(monotone_max(&sv(&[3, 3]), 3, &opts()).is_err());
        let mut narrow = opts();
        narrow.max_n = 3;
        assert!(monotone_max(&sv(&[2; 4]), 1, &narrow).is_err());
        // The hard ceiling wins over a user-raised cap.
        narrow.max_n = 9;
        assert!(monotone_max(&sv(&[2; 7]), 6, &narrow).is_err());
        assert!(monotone_max(&sv(&[2; 6]), 5, &narrow).is_ok());
    }

    #[test]
    fn monotone_witnesses_are_valid_maximal_pairs() {
        for (p, r) in [
            (sv(&[3, 3, 3]), 1u32),
            (sv(&[3, 3, 3, 3]), 2),
            (sv(&[2, 3, 4]), 2),
            (sv(&[2, 2, 2, 2]), 2),
        ] {
            let res = monotone_max(&p, r, &opts()).unwrap();
            assert!(res.max_product >= trivial_product(&p, r).unwrap());
            assert!(!res.witnesses.is_empty());
            for w in &res.witnesses {
                let WitnessPair::Monotone { a, b } = w else {
                    panic!("monotone witness expected");
                };
                assert!(supports_cross_intersecting(a, b, r).unwrap());
                let fa = family_from_support(&p, a).unwrap();
                let fb = family_from_support(&p, b).unwrap();
                assert!(are_r_cross_intersecting(&fa, &fb, r).unwrap());
                assert!(check_mutual_duality(&fa, &fb, r).unwrap());
                assert_eq!(
                    BigUint::from(fa.len()) * BigUint::from(fb.len()),
                    res.max_product
                );
            }
        }
    }

    #[test]
    fn pruning_does_not_change_results() {
        let mut no_prune = opts();
        no_prune.pruning = false;
        for (p, r) in [
            (sv(&[3, 3, 3]), 1u32),
            (sv(&[2, 2, 2]), 2),
            (sv(&[3, 3, 3, 3]), 2),
            (sv(&[2, 3, 2]), 1),
        ] {
            let pruned = monotone_max(&p, r, &opts()).unwrap();
            let unpruned = monotone_max(&p, r, &no_prune).unwrap();
            assert_eq!(pruned.max_product, unpruned.max_product);
            assert_eq!(pruned.witnesses, unpruned.witnesses);
        }
    }

    #[test]
    fn full_cube_pair_example() {
        let p = sv(&[2, 2, 2]);
        let res = full_max(&p, 2, &opts()).unwrap();
        assert_eq!(res.max_product, BigUint::from(4u32));
        let target_a = Family::from_points(
            &p,
            &[
                crate::domain::Point::new(vec![1, 1, 1]),
                crate::domain::Point::new(vec![1, 2, 2]),
            ],
        )
        .unwrap();
        let target_b = Family::from_points(
            &p,
            &[
                crate::domain::Point::new(vec![1, 1, 2]),
                crate::domain::Point::new(vec![1, 2, 1]),
            ],
        )
        .unwrap();
        assert!(res.witnesses.iter().any(|w| match w {
            WitnessPair::Explicit { a, b } => *a == target_a && *b == target_b,
            _ => false,
        }));
    }

    #[test]
    fn full_square_has_six_optimal_pairs() {
        let res = full_max(&sv(&[2, 2]), 1, &opts()).unwrap();
        assert_eq!(res.max_product, BigUint::from(4u32));
        assert_eq!(res.witnesses.len(), 6);
        for w in &res.witnesses {
            let WitnessPair::Explicit { a, b } = w else {
                panic!("explicit witness expected");
            };
            assert_eq!(a.len(), 2);
            assert_eq!(b.len(), 2);
            assert!(check_mutual_duality(a, b, 1).unwrap());
        }
    }

    #[test]
    fn full_requirement_equal_to_length_gives_one() {
        let res = full_max(&sv(&[3, 3]), 2, &opts()).unwrap();
        assert_eq!(res.max_product, BigUint::from(1u32));
    }

    #[test]
    fn full_respects_domain_cap() {
        assert!(full_max(&sv(&[2, 3, 3]), 1, &opts()).is_err());
        let mut wide = opts();
        wide.max_full_domain = 18;
        let res = full_max(&sv(&[2, 3, 3]), 1, &wide).unwrap();
        assert_eq!(res.max_product, BigUint::from(81u32));
        // The hard ceiling wins over a user-raised cap.
        wide.max_full_domain = 1 << 30;
        assert!(full_max(&sv(&[2; 6]), 1, &wide).is_err());
    }

    #[test]
    fn engines_agree_on_small_instances() {
        for (p, r) in [
            (sv(&[2, 2]), 1u32),
            (sv(&[2, 2, 2]), 1),
            (sv(&[2, 2, 2]), 2),
            (sv(&[3, 4]), 1),
            (sv(&[2, 3]), 2),
            (sv(&[2, 2, 2, 2]), 3),
        ] {
            let m = monotone_max(&p, r, &opts()).unwrap();
            let f = full_max(&p, r, &opts()).unwrap();
            assert_eq!(m.max_product, f.max_product, "{:?} r={r}", p.entries());
        }
    }

    #[test]
    fn full_witnesses_fix_one_coordinate_when_r_is_one() {
        let res = full_max(&sv(&[3, 4]), 1, &opts()).unwrap();
        assert_eq!(res.max_product, BigUint::from(16u32));
        assert_eq!(res.witnesses.len(), 3);
        for (w, v) in res.witnesses.iter().zip(1u32..=3) {
            let WitnessPair::Explicit { a, b } = w else {
                panic!("explicit witness expected");
            };
            assert_eq!(a, b);
            let expected =
                Family::from_fn(&sv(&[3, 4]), |x| x.coord(0) == v).unwrap();
            assert_eq!(*a, expected);
        }
    }

    #[test]
    fn degenerate_requirement_returns_whole_domain() {
        let m = monotone_max(&sv(&[3, 3]), 0, &opts()).unwrap();
        assert_eq!(m.max_product, BigUint::from(81u32));
        assert_eq!(m.witnesses.len(), 1);
        let f = full_max(&sv(&[3, 3]), 0, &opts()).unwrap();
        assert_eq!(f.max_product, BigUint::from(81u32));
    }

    #[test]
    fn search_is_deterministic_across_worker_counts() {
        let p = sv(&[3, 3, 3, 3]);
        let baseline = monotone_max(&p, 2, &opts()).unwrap();
        for threads in [1, 3] {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            let res = pool.install(|| monotone_max(&p, 2, &opts()).unwrap());
            assert_eq!(res.max_product, baseline.max_product);
            assert_eq!(res.witnesses, baseline.witnesses);
        }
    }

    #[test]
    fn conjecture_verdict_on_known_instances() {
        let v = check_ball_conjecture(&sv(&[3, 3, 3, 3, 3]), 4, &opts()).unwrap();
        assert!(v.consistent);
        assert_eq!(v.ball_product, BigUint::from(11u32));
        assert_eq!(v.all_optima_are_balls, Some(true));
        assert!(v.counterexample.is_none());

        let v = check_ball_conjecture(&sv(&[2, 2, 2]), 2, &opts()).unwrap();
        assert!(v.consistent);
        assert_eq!(v.search_product, BigUint::from(4u32));
        assert_eq!(v.all_optima_are_balls, None);
    }

    #[test]
    fn conjecture_open_case_four_triples() {
        // The smallest open regime instance: the verdict is a finding, not
        // an assumption. Both the trivial pair and the radius-1 pair appear
        // among the optima if the predicted product 81 is right.
        let v = check_ball_conjecture(&sv(&[3, 3, 3, 3]), 2, &opts()).unwrap();
        assert_eq!(v.ball_product, BigUint::from(81u32));
        assert!(v.consistent);
        assert_eq!(v.all_optima_are_balls, Some(true));
    }
}
