//! Command-line driver for the exact r-cross-intersection toolkit: search,
//! ball optimization, closed-form bounds, randomized verification suites,
//! and the matrix cross-check. Every run prints one JSON document; exit
//! code 0 means success (and, for verification, consistency), 2 means a
//! counterexample was found, 1 means a usage or resource error.

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;
use serde_json::{json, Map, Value};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;
use xintersect_core::balls::{ball_size, best_ball_pair, BallPairSpec};
use xintersect_core::bounds::{
    classify_regime, entropy_size_bound, relevant_set_filter, FixingCriterion, Regime,
};
use xintersect_core::commgame::{build_matrix, max_all_ones_rectangle};
use xintersect_core::compress::{family_from_support, supports_cross_intersecting};
use xintersect_core::domain::SizeVector;
use xintersect_core::family::{
    are_r_cross_intersecting, check_mutual_duality, DOMAIN_CAP,
};
use xintersect_core::search::{
    full_max, monotone_max, SearchOptions, SearchResult, WitnessPair,
};
use xintersect_core::verify::{run_suite, Suite, TrialConfig, DEFAULT_SEED};
use xintersect_core::{Error, Result};

#[derive(Parser)]
#[command(
    name = "xintersect",
    version,
    about = "Exact search and verification for r-cross-intersecting families"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Print an indented key/value view instead of compact JSON.
    #[arg(long, global = true)]
    pretty: bool,
}

#[derive(Args)]
struct InstanceArgs {
    /// Alphabet sizes, comma-separated (e.g. 3,3,3,3,3).
    #[arg(long, value_name = "LIST")]
    p: String,
    /// Required number of agreeing coordinates (at least 1).
    #[arg(long)]
    r: u32,
}

#[derive(Args)]
struct CapArgs {
    /// Coordinate cap for the support-system search.
    #[arg(long, value_name = "N")]
    max_n: Option<usize>,
    /// Domain-size cap for the brute-force search.
    #[arg(long, value_name = "SIZE")]
    max_domain: Option<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    /// Support-system enumeration over monotone families.
    Monotone,
    /// Brute force over every subset of a tiny domain.
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    /// Strict log-concavity of ball sizes.
    Logconcavity,
    /// Antitonicity and triple-dual identity of the partner map.
    Dual,
    /// Shifts preserve cardinality and cross-intersection.
    Shift,
    /// Concentration witnesses on certified optimal pairs.
    Lemma9,
    /// Entropy size bound on certified optimal pairs.
    Theorem5,
    /// Optimal ball pair against the exact search maximum.
    Conjecture3,
}

impl SuiteArg {
    fn suite(self) -> Suite {
        match self {
            SuiteArg::Logconcavity => Suite::LogConcavity,
            SuiteArg::Dual => Suite::DualGalois,
            SuiteArg::Shift => Suite::Shift,
            SuiteArg::Lemma9 => Suite::Concentration,
            SuiteArg::Theorem5 => Suite::EntropyBound,
            SuiteArg::Conjecture3 => Suite::BallConjecture,
        }
    }

    fn name(self) -> &'static str {
        match self {
            SuiteArg::Logconcavity => "logconcavity",
            SuiteArg::Dual => "dual",
            SuiteArg::Shift => "shift",
            SuiteArg::Lemma9 => "lemma9",
            SuiteArg::Theorem5 => "theorem5",
            SuiteArg::Conjecture3 => "conjecture3",
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Exact maximum of |A|*|B| over r-cross-intersecting pairs.
    Search {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, value_enum, default_value_t = ModeArg::Monotone)]
        mode: ModeArg,
        /// Include all optimal pairs in the report.
        #[arg(long)]
        enumerate_optima: bool,
        /// Disable the relevant-set admissibility pruning.
        #[arg(long)]
        no_pruning: bool,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Optimal ball-pair construction for the instance.
    Balls {
        #[command(flatten)]
        instance: InstanceArgs,
    },
    /// Closed-form bounds and the regime classification.
    Bounds {
        #[command(flatten)]
        instance: InstanceArgs,
        /// 1-based coordinates (comma-separated) for the subset bounds,
        /// indexing the normalized vector.
        #[arg(long = "T", value_name = "LIST")]
        t: Option<String>,
    },
    /// Seeded randomized verification suites.
    Verify {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, value_enum)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 200)]
        trials: u32,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Agreement matrix and its maximum all-1 rectangle.
    Commgame {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Write the matrix as a plain-text portable bitmap.
        #[arg(long, value_name = "PATH")]
        dump_matrix: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(1);
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn configure_threads() -> std::result::Result<(), String> {
    let Ok(raw) = std::env::var("XINTERSECT_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .map_err(|_| format!("XINTERSECT_THREADS must be a positive integer, got {raw:?}"))?;
    if threads == 0 {
        return Err("XINTERSECT_THREADS must be at least 1".into());
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| e.to_string())
}

struct Instance {
    raw_p: Vec<u32>,
    raw_r: u32,
    p: SizeVector,
    r: u32,
}

fn parse_instance(args: &InstanceArgs) -> Result<Instance> {
    let raw_p = parse_u32_list(&args.p, "--p")?;
    if args.r == 0 {
        return Err(Error::invalid("--r must be at least 1"));
    }
    let (p, r) = SizeVector::normalize(&raw_p, args.r)?;
    Ok(Instance {
        raw_p,
        raw_r: args.r,
        p,
        r,
    })
}

fn parse_u32_list(raw: &str, flag: &str) -> Result<Vec<u32>> {
    raw.split(',')
        .map(|part| {
            part.trim()
                .parse::<u32>()
                .map_err(|_| Error::invalid(format!("{flag} expects comma-separated integers, got {part:?}")))
        })
        .collect()
}

/// 1-based, distinct coordinate list to 0-based sorted indices.
fn parse_coord_list(raw: &str, n: usize) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for v in parse_u32_list(raw, "--T")? {
        if v == 0 || v as usize > n {
            return Err(Error::invalid(format!(
                "--T coordinates are 1-based and at most {n}, got {v}"
            )));
        }
        out.push(v as usize - 1);
    }
    out.sort_unstable();
    if out.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::invalid("--T coordinates must be distinct"));
    }
    Ok(out)
}

fn run(cli: Cli) -> Result<u8> {
    let started = Instant::now();
    let (name, instance, result, exit) = match &cli.command {
        Command::Search {
            instance,
            mode,
            enumerate_optima,
            no_pruning,
            caps,
        } => {
            let inst = parse_instance(instance)?;
            let result = run_search(&inst, *mode, *enumerate_optima, *no_pruning, caps)?;
            ("search", inst, result, 0)
        }
        Command::Balls { instance } => {
            let inst = parse_instance(instance)?;
            let result = run_balls(&inst)?;
            ("balls", inst, result, 0)
        }
        Command::Bounds { instance, t } => {
            let inst = parse_instance(instance)?;
            let result = run_bounds(&inst, t.as_deref())?;
            ("bounds", inst, result, 0)
        }
        Command::Verify {
            instance,
            suite,
            trials,
            seed,
        } => {
            let inst = parse_instance(instance)?;
            let (result, exit) = run_verify(&inst, *suite, *trials, *seed)?;
            ("verify", inst, result, exit)
        }
        Command::Commgame {
            instance,
            dump_matrix,
        } => {
            let inst = parse_instance(instance)?;
            let result = run_commgame(&inst, dump_matrix.as_deref())?;
            ("commgame", inst, result, 0)
        }
    };
    let envelope = json!({
        "command": name,
        "p": instance.raw_p,
        "r": instance.raw_r,
        "normalized_p": instance.p.entries(),
        "normalized_r": instance.r,
        "result": result,
        "elapsed_ms": started.elapsed().as_millis() as u64,
        "version": env!("CARGO_PKG_VERSION"),
    });
    if cli.pretty {
        print!("{}", render_pretty(&envelope));
    } else {
        println!("{}", serde_json::to_string(&envelope).expect("serializable"));
    }
    Ok(exit)
}

fn run_search(
    inst: &Instance,
    mode: ModeArg,
    enumerate_optima: bool,
    no_pruning: bool,
    caps: &CapArgs,
) -> Result<Value> {
    let mut opts = SearchOptions::default();
    if let Some(n) = caps.max_n {
        opts.max_n = n;
    }
    if let Some(d) = caps.max_domain {
        opts.max_full_domain = d;
    }
    opts.pruning = !no_pruning;
    let result = match mode {
        ModeArg::Monotone => monotone_max(&inst.p, inst.r, &opts)?,
        ModeArg::Full => full_max(&inst.p, inst.r, &opts)?,
    };
    revalidate(&inst.p, inst.r, &result)?;
    let mut out = Map::new();
    out.insert(
        "mode".into(),
        match mode {
            ModeArg::Monotone => "monotone",
            ModeArg::Full => "full",
        }
        .into(),
    );
    out.insert("max_product".into(), result.max_product.to_string().into());
    out.insert("witness_count".into(), result.witnesses.len().into());
    out.insert("nodes".into(), result.stats.nodes.into());
    if mode == ModeArg::Monotone {
        out.insert("pruning".into(), opts.pruning.into());
    }
    if enumerate_optima {
        let list: Vec<Value> = result.witnesses.iter().map(witness_json).collect();
        out.insert("witnesses".into(), list.into());
    }
    Ok(out.into())
}

/// Every emitted witness is re-checked against the pair axioms; a failure
/// here is an internal inconsistency, never user error.
fn revalidate(p: &SizeVector, r: u32, result: &SearchResult) -> Result<()> {
    let claim = |ok: bool| {
        if ok {
            Ok(())
        } else {
            Err(Error::invalid(
                "internal: a reported witness failed re-validation",
            ))
        }
    };
    for w in &result.witnesses {
        match w {
            WitnessPair::Monotone { a, b } => {
                claim(supports_cross_intersecting(a, b, r)?)?;
                if p.domain_size_u64().is_some_and(|d| d <= DOMAIN_CAP) {
                    let fa = family_from_support(p, a)?;
                    let fb = family_from_support(p, b)?;
                    claim(are_r_cross_intersecting(&fa, &fb, r)?)?;
                    claim(check_mutual_duality(&fa, &fb, r)?)?;
                    claim(
                        BigUint::from(fa.len()) * BigUint::from(fb.len())
                            == result.max_product,
                    )?;
                }
            }
            WitnessPair::Explicit { a, b } => {
                claim(are_r_cross_intersecting(a, b, r)?)?;
                claim(check_mutual_duality(a, b, r)?)?;
                claim(
                    BigUint::from(a.len()) * BigUint::from(b.len()) == result.max_product,
                )?;
            }
        }
    }
    Ok(())
}

fn witness_json(w: &WitnessPair) -> Value {
    match w {
        WitnessPair::Monotone { a, b } => json!({
            "kind": "support-systems",
            "a": a.masks(),
            "b": b.masks(),
        }),
        WitnessPair::Explicit { a, b } => json!({
            "kind": "families",
            "a": a.to_point_lists(),
            "b": b.to_point_lists(),
        }),
    }
}

fn ball_pair_json(p: &SizeVector, spec: &BallPairSpec) -> Result<Value> {
    Ok(json!({
        "coords": spec.coords.iter().map(|i| i + 1).collect::<Vec<_>>(),
        "radius_a": spec.radius_a,
        "radius_b": spec.radius_b,
        "size_a": ball_size(p, &spec.coords, spec.radius_a)?.to_string(),
        "size_b": ball_size(p, &spec.coords, spec.radius_b)?.to_string(),
    }))
}

fn run_balls(inst: &Instance) -> Result<Value> {
    let search = best_ball_pair(&inst.p, inst.r)?;
    let optima: Vec<Value> = search
        .optima
        .iter()
        .map(|spec| ball_pair_json(&inst.p, spec))
        .collect::<Result<_>>()?;
    Ok(json!({
        "product": search.product.to_string(),
        "best": ball_pair_json(&inst.p, &search.best)?,
        "optima": optima,
    }))
}

fn rational_string(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

fn criterion_name(c: &FixingCriterion) -> &'static str {
    match c {
        FixingCriterion::HoldsStrict => "holds-strict",
        FixingCriterion::HoldsWithEquality => "holds-with-equality",
        FixingCriterion::Fails => "fails",
        FixingCriterion::SmallAlphabet => "small-alphabet",
        FixingCriterion::NoSpareCoordinate => "no-spare-coordinate",
    }
}

fn regime_name(r: &Regime) -> &'static str {
    match r {
        Regime::MinAboveRPlus1 => "p1_gt_r_plus_1",
        Regime::MinEqualsRPlus1Above4 => "p1_eq_r_plus_1_gt_4",
        Regime::SmallMinBallsApply => "small_p1_balls_apply",
        Regime::Unclassified => "unclassified",
    }
}

fn run_bounds(inst: &Instance, t: Option<&str>) -> Result<Value> {
    let report = classify_regime(&inst.p, inst.r)?;
    let mut out = Map::new();
    out.insert(
        "theorem1".into(),
        rational_string(&report.min_alphabet).into(),
    );
    out.insert(
        "trivial_product".into(),
        report.trivial_product.to_string().into(),
    );
    out.insert(
        "lemma2_applies".into(),
        json!({
            "holds": report.fixing.holds(),
            "with_equality": report.fixing.with_equality(),
            "reason": criterion_name(&report.fixing.criterion),
            "hypothesis": report.fixing.hypothesis.as_ref().map(rational_string),
        }),
    );
    out.insert("theorem7_regime".into(), regime_name(&report.regime).into());
    out.insert("n_bound".into(), json!(report.n_bound));
    if let Some(raw) = t {
        let coords = parse_coord_list(raw, inst.p.len())?;
        let one_based: Vec<usize> = coords.iter().map(|i| i + 1).collect();
        let entropy = entropy_size_bound(&inst.p, &coords)?;
        let filter = relevant_set_filter(&inst.p, inst.r, &coords)?;
        out.insert(
            "theorem5".into(),
            json!({
                "coords": one_based,
                "value": entropy.value,
                "rel_err": entropy.rel_err,
            }),
        );
        out.insert(
            "theorem6".into(),
            json!({
                "coords": one_based,
                "admissible": filter.admissible,
                "wide_coords": filter.wide_coords,
                "width_ok": filter.width_ok,
            }),
        );
    }
    Ok(out.into())
}

fn run_verify(inst: &Instance, suite: SuiteArg, trials: u32, seed: u64) -> Result<(Value, u8)> {
    let cfg = TrialConfig { trials, seed };
    let report = run_suite(suite.suite(), &inst.p, inst.r, &cfg)?;
    let verdict = report.verdict.as_ref().map(|v| {
        json!({
            "consistent": v.consistent,
            "ball_product": v.ball_product.to_string(),
            "search_product": v.search_product.to_string(),
            "all_optima_are_balls": v.all_optima_are_balls,
            "counterexample": v.counterexample.as_ref().map(witness_json),
        })
    });
    let exit = if report.passed() { 0 } else { 2 };
    let result = json!({
        "suite": suite.name(),
        "property": report.suite.name(),
        "trials": report.trials,
        "failures": report.failures,
        "passed": report.passed(),
        "seed": seed,
        "first_counterexample": report.first_counterexample,
        "verdict": verdict,
    });
    Ok((result, exit))
}

fn run_commgame(inst: &Instance, dump: Option<&std::path::Path>) -> Result<Value> {
    let matrix = build_matrix(&inst.p, inst.r)?;
    let rect = max_all_ones_rectangle(&matrix)?;
    let dumped = match dump {
        Some(path) => {
            std::fs::write(path, matrix.to_pbm()).map_err(|e| {
                Error::invalid(format!("cannot write {}: {e}", path.display()))
            })?;
            Some(path.display().to_string())
        }
        None => None,
    };
    Ok(json!({
        "dimension": matrix.dim(),
        "ones": matrix.ones().to_string(),
        "rectangle": {
            "rows": rect.rows,
            "cols": rect.cols,
            "area": rect.area.to_string(),
        },
        "matrix_dump": dumped,
    }))
}

fn render_pretty(value: &Value) -> String {
    let mut out = String::new();
    render(value, 0, &mut out);
    out
}

fn scalar(value: &Value) -> Option<String> {
    match value {
        Value::Null => Some("none".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(scalar).collect::<Option<_>>()?;
            Some(format!("[{}]", parts.join(", ")))
        }
        Value::Object(_) => None,
    }
}

fn render(value: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match value {
        Value::Object(map) => {
            for (key, val) in map {
                match scalar(val) {
                    Some(s) => out.push_str(&format!("{pad}{key}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{key}:\n"));
                        render(val, indent + 1, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                match scalar(item) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        render(item, indent + 1, out);
                    }
                }
            }
        }
        other => {
            let s = scalar(other).expect("scalars are inlined");
            out.push_str(&format!("{pad}{s}\n"));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn coordinate_lists_are_one_based_and_distinct() {
        assert_eq!(parse_coord_list("1,3,2", 3).unwrap(), vec![0, 1, 2]);
        assert!(parse_coord_list("0,1", 3).is_err());
        assert!(parse_coord_list("1,4", 3).is_err());
        assert!(parse_coord_list("2,2", 3).is_err());
        assert!(parse_coord_list("1,x", 3).is_err());
    }

    #[test]
    fn rationals_render_reduced() {
        let third = BigRational::new(BigInt::from(2), BigInt::from(6));
        assert_eq!(rational_string(&third), "1/3");
        let four = BigRational::new(BigInt::from(16), BigInt::from(4));
        assert_eq!(rational_string(&four), "4");
    }

    #[test]
    fn pretty_rendering_inlines_scalars() {
        let v = json!({"a": 1, "b": [1, 2], "c": {"d": null}});
        assert_eq!(render_pretty(&v), "a: 1\nb: [1, 2]\nc:\n  d: none\n");
    }
}
