//! Seeded randomized verification suites.
//!
//! Each suite draws every random choice from one ChaCha8 stream, so a
//! (suite, p, r, trials, seed) tuple always reproduces the same checks and
//! the same first counterexample.

use crate::balls::{ball_members, ball_size, log_concave_check, BallSpec};
use crate::bounds::entropy_size_bound;
use crate::compress::{
    compress_pair, family_from_support, potential, shift, supports_cross_intersecting,
    SupportSystem,
};
use crate::domain::{Point, SizeVector};
use crate::family::{
    are_r_cross_intersecting, concentration_witness, dual, relevant_coordinates, Family,
};
use crate::search::{check_ball_conjecture, monotone_max, ConjectureVerdict, SearchOptions, WitnessPair};
use crate::{Error, Result};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// Domain cap for suites that materialize random families per trial.
pub const VERIFY_DOMAIN_CAP: u64 = 1 << 14;

/// Seed used when the caller does not pick one.
pub const DEFAULT_SEED: u64 = 1729;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    /// Closed-form ball size equals brute-force member count.
    BallSize,
    /// Ball sizes are strictly log-concave in the radius.
    LogConcavity,
    /// dual is antitone and dual^3 = dual.
    DualGalois,
    /// Shifts preserve cardinality and cross-intersection.
    Shift,
    /// Compression terminates, strictly decreasing the potential unless
    /// the pair was already a fixpoint.
    Compression,
    /// The support-level budget test matches point-level
    /// cross-intersection on monotone pairs.
    SupportCriterion,
    /// Every certified optimal pair concentrates on every relevant
    /// coordinate.
    Concentration,
    /// Certified optimal pairs respect the per-family entropy size bound.
    EntropyBound,
    /// Best ball pair against the exact search maximum.
    BallConjecture,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::BallSize => "ball-size",
            Suite::LogConcavity => "log-concavity",
            Suite::DualGalois => "dual",
            Suite::Shift => "shift",
            Suite::Compression => "compression",
            Suite::SupportCriterion => "support-criterion",
            Suite::Concentration => "concentration",
            Suite::EntropyBound => "entropy-bound",
            Suite::BallConjecture => "ball-conjecture",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct TrialConfig {
    pub trials: u32,
    pub seed: u64,
}

impl Default for TrialConfig {
    fn default() -> Self {
        TrialConfig {
            trials: 200,
            seed: DEFAULT_SEED,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: Suite,
    /// Checks actually executed (sampled suites may run fewer than asked).
    pub trials: u32,
    pub failures: u32,
    pub first_counterexample: Option<String>,
    /// Filled by the ball-conjecture suite only.
    pub verdict: Option<ConjectureVerdict>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

struct Runner {
    suite: Suite,
    ran: u32,
    failures: u32,
    first: Option<String>,
}

impl Runner {
    fn new(suite: Suite) -> Runner {
        Runner {
            suite,
            ran: 0,
            failures: 0,
            first: None,
        }
    }

    fn check(&mut self, ok: bool, certificate: impl FnOnce() -> String) {
        self.ran += 1;
        if !ok {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(certificate());
            }
        }
    }

    fn report(self, verdict: Option<ConjectureVerdict>) -> SuiteReport {
        SuiteReport {
            suite: self.suite,
            trials: self.ran,
            failures: self.failures,
            first_counterexample: self.first,
            verdict,
        }
    }
}

fn require_small_domain(p: &SizeVector) -> Result<u64> {
    match p.domain_size_u64() {
        Some(d) if d <= VERIFY_DOMAIN_CAP => Ok(d),
        _ => Err(Error::limit(format!(
            "randomized suites are capped at domain size {VERIFY_DOMAIN_CAP}"
        ))),
    }
}

fn random_coord_set(rng: &mut ChaCha8Rng, n: usize, min_len: usize) -> Vec<usize> {
    loop {
        let t: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
        if t.len() >= min_len {
            return t;
        }
    }
}

fn random_point(rng: &mut ChaCha8Rng, p: &SizeVector) -> Point {
    Point::new((0..p.len()).map(|i| rng.gen_range(1..=p.entry(i))).collect())
}

fn random_family(rng: &mut ChaCha8Rng, p: &SizeVector, d: u64, max_len: u64) -> Result<Family> {
    let mut fam = Family::empty(p)?;
    let count = rng.gen_range(0..=max_len.min(d));
    for _ in 0..count {
        fam.set_rank(rng.gen_range(0..d));
    }
    Ok(fam)
}

fn random_support_system(rng: &mut ChaCha8Rng, n: usize) -> Result<SupportSystem> {
    let mut masks = vec![0u32];
    for _ in 0..rng.gen_range(1..=4u32) {
        let seed_mask = rng.gen_range(0..1u32 << n);
        let mut s = seed_mask;
        loop {
            masks.push(s);
            if s == 0 {
                break;
            }
            s = (s - 1) & seed_mask;
        }
    }
    SupportSystem::new(n, masks)
}

fn points_of(fam: &Family) -> Vec<Vec<u32>> {
    fam.to_point_lists()
}

fn ball_size_suite(p: &SizeVector, cfg: &TrialConfig) -> Result<SuiteReport> {
    require_small_domain(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut run = Runner::new(Suite::BallSize);
    for trial in 0..cfg.trials {
        let coords = random_coord_set(&mut rng, p.len(), 0);
        let radius = rng.gen_range(0..=coords.len() as u32);
        let spec = BallSpec {
            center: random_point(&mut rng, p),
            coords: coords.clone(),
            radius,
        };
        let formula = ball_size(p, &coords, radius)?;
        let counted = ball_members(p, &spec)?.len();
        run.check(formula == counted.into(), || {
            format!(
                "trial {trial}: ball size formula {formula} != member count {counted} \
                 (coords {coords:?}, radius {radius})"
            )
        });
    }
    Ok(run.report(None))
}

fn log_concavity_suite(p: &SizeVector, cfg: &TrialConfig) -> Result<SuiteReport> {
    if p.len() < 2 {
        return Err(Error::invalid(
            "log-concavity needs at least 2 coordinates",
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut run = Runner::new(Suite::LogConcavity);
    for trial in 0..cfg.trials {
        let coords = random_coord_set(&mut rng, p.len(), 2);
        let l = rng.gen_range(1..coords.len() as u32);
        let strict = log_concave_check(p, &coords, l)?;
        run.check(strict, || {
            format!("trial {trial}: log-concavity not strict at coords {coords:?}, l={l}")
        });
    }
    Ok(run.report(None))
}

fn dual_suite(p: &SizeVector, r: u32, cfg: &TrialConfig) -> Result<SuiteReport> {
    let d = require_small_domain(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut run = Runner::new(Suite::DualGalois);
    for trial in 0..cfg.trials {
        let a = random_family(&mut rng, p, d, 8)?;
        let mut b = Family::empty(p)?;
        for rank in a.ranks() {
            if rng.gen_bool(0.5) {
                b.set_rank(rank.0);
            }
        }
        let dual_a = dual(&a, r)?;
        let dual_b = dual(&b, r)?;
        let antitone = dual_a.is_subset_of(&dual_b)?;
        let triple = dual(&dual(&dual_a, r)?, r)? == dual_a;
        run.check(antitone && triple, || {
            format!(
                "trial {trial}: dual violates {} on A={:?}",
                if antitone { "dual^3 = dual" } else { "antitonicity" },
                points_of(&a)
            )
        });
    }
    Ok(run.report(None))
}

fn shift_suite(p: &SizeVector, r: u32, cfg: &TrialConfig) -> Result<SuiteReport> {
    let d = require_small_domain(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut run = Runner::new(Suite::Shift);
    for trial in 0..cfg.trials {
        let a = random_family(&mut rng, p, d, 8)?;
        let b = dual(&a, r)?;
        let i = rng.gen_range(0..p.len());
        let j = rng.gen_range(2..=p.entry(i));
        let sa = shift(&a, i, j)?;
        let sb = shift(&b, i, j)?;
        let ok = sa.len() == a.len()
            && sb.len() == b.len()
            && are_r_cross_intersecting(&sa, &sb, r)?;
        run.check(ok, || {
            format!(
                "trial {trial}: shift at (i={}, j={j}) broke the pair A={:?}, B={:?}",
                i + 1,
                points_of(&a),
                points_of(&b)
            )
        });
    }
    Ok(run.report(None))
}

fn compression_suite(p: &SizeVector, r: u32, cfg: &TrialConfig) -> Result<SuiteReport> {
    let d = require_small_domain(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut run = Runner::new(Suite::Compression);
    for trial in 0..cfg.trials {
        let seed_fam = random_family(&mut rng, p, d, 6)?;
        let b = dual(&seed_fam, r)?;
        let a = dual(&b, r)?;
        let before = potential(&a) + potential(&b);
        let out = compress_pair(&a, &b, r)?;
        let after = potential(&out.a) + potential(&out.b);
        let unchanged = out.a == a && out.b == b;
        let ok = out.a.len() == a.len()
            && out.b.len() == b.len()
            && are_r_cross_intersecting(&out.a, &out.b, r)?
            && (after < before || (after == before && unchanged));
        run.check(ok, || {
            format!(
                "trial {trial}: compression potential {before} -> {after} on A={:?}, B={:?}",
                points_of(&a),
                points_of(&b)
            )
        });
    }
    Ok(run.report(None))
}

fn support_criterion_suite(p: &SizeVector, r: u32, cfg: &TrialConfig) -> Result<SuiteReport> {
    require_small_domain(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut run = Runner::new(Suite::SupportCriterion);
    for trial in 0..cfg.trials {
        let sa = random_support_system(&mut rng, p.len())?;
        let sb = random_support_system(&mut rng, p.len())?;
        let coarse = supports_cross_intersecting(&sa, &sb, r)?;
        let fa = family_from_support(p, &sa)?;
        let fb = family_from_support(p, &sb)?;
        let fine = are_r_cross_intersecting(&fa, &fb, r)?;
        run.check(coarse == fine, || {
            format!(
                "trial {trial}: support criterion {coarse} but point level {fine} \
                 (S_A={:?}, S_B={:?})",
                sa.masks(),
                sb.masks()
            )
        });
    }
    Ok(run.report(None))
}

/// Explicit families of every monotone optimum, with the pair's relevant
/// coordinates.
fn certified_optima(p: &SizeVector, r: u32) -> Result<Vec<(Family, Family, Vec<usize>)>> {
    let result = monotone_max(p, r, &SearchOptions::default())?;
    let mut out = Vec::new();
    for w in &result.witnesses {
        let WitnessPair::Monotone { a, b } = w else {
            continue;
        };
        let fa = family_from_support(p, a)?;
        let fb = family_from_support(p, b)?;
        let mut rel = relevant_coordinates(&fa);
        for i in relevant_coordinates(&fb) {
            if !rel.contains(&i) {
                rel.push(i);
            }
        }
        rel.sort_unstable();
        out.push((fa, fb, rel));
    }
    Ok(out)
}

fn concentration_suite(p: &SizeVector, r: u32, cfg: &TrialConfig) -> Result<SuiteReport> {
    let optima = certified_optima(p, r)?;
    let mut checks: Vec<(usize, usize)> = Vec::new();
    for (w, (_, _, rel)) in optima.iter().enumerate() {
        for &i in rel {
            checks.push((w, i));
        }
    }
    if checks.len() > cfg.trials as usize {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        checks = checks
            .choose_multiple(&mut rng, cfg.trials as usize)
            .copied()
            .collect();
    }
    let mut run = Runner::new(Suite::Concentration);
    for (w, i) in checks {
        let (fa, fb, _) = &optima[w];
        let witness = concentration_witness(fa, fb, i)?;
        run.check(witness.is_some(), || {
            format!(
                "optimum {w}: no concentration witness at coordinate {} for A={:?}, B={:?}",
                i + 1,
                points_of(fa),
                points_of(fb)
            )
        });
    }
    Ok(run.report(None))
}

fn entropy_suite(p: &SizeVector, r: u32, cfg: &TrialConfig) -> Result<SuiteReport> {
    let optima = certified_optima(p, r)?;
    let mut run = Runner::new(Suite::EntropyBound);
    for (w, (fa, fb, rel)) in optima.iter().enumerate().take(cfg.trials as usize) {
        let bound = entropy_size_bound(p, rel)?;
        let limit = bound.value * (1.0 + 1e-9 + bound.rel_err);
        let ok = fa.len() as f64 <= limit && fb.len() as f64 <= limit;
        run.check(ok, || {
            format!(
                "optimum {w}: sizes {} and {} exceed the bound {} on coordinates {:?}",
                fa.len(),
                fb.len(),
                bound.value,
                rel.iter().map(|i| i + 1).collect::<Vec<_>>()
            )
        });
    }
    Ok(run.report(None))
}

fn conjecture_suite(p: &SizeVector, r: u32) -> Result<SuiteReport> {
    let verdict = check_ball_conjecture(p, r, &SearchOptions::default())?;
    let mut run = Runner::new(Suite::BallConjecture);
    run.check(verdict.counterexample.is_none(), || {
        format!(
            "ball product {} vs search maximum {}, all optima balls: {:?}",
            verdict.ball_product, verdict.search_product, verdict.all_optima_are_balls
        )
    });
    Ok(run.report(Some(verdict)))
}

/// Runs one suite against the instance (p, r).
pub fn run_suite(suite: Suite, p: &SizeVector, r: u32, cfg: &TrialConfig) -> Result<SuiteReport> {
    match suite {
        Suite::BallSize => ball_size_suite(p, cfg),
        Suite::LogConcavity => log_concavity_suite(p, cfg),
        Suite::DualGalois => dual_suite(p, r, cfg),
        Suite::Shift => shift_suite(p, r, cfg),
        Suite::Compression => compression_suite(p, r, cfg),
        Suite::SupportCriterion => support_criterion_suite(p, r, cfg),
        Suite::Concentration => concentration_suite(p, r, cfg),
        Suite::EntropyBound => entropy_suite(p, r, cfg),
        Suite::BallConjecture => conjecture_suite(p, r),
    }
}
