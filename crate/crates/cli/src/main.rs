//! `diffseq`: compute exact diffsequence Ramsey numbers, evaluate and certify
//! the analytic lower bounds, emit avoiding colorings, and verify avoidance
//! claims. Every command prints one JSON document on stdout; structured
//! errors go to stderr.
//!
//! Exit codes: 0 success, 1 usage error, 2 resource cap reached,
//! 3 verification found a counterexample, 4 internal consistency failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use diffseq_core::analysis::{longest_mono, verify_avoidance, VerifyOutcome};
use diffseq_core::bounds::{
    bound_report, certify_bound, decimal_string, CertifyOutcome, THEOREM_BOUND_PRECISION,
};
use diffseq_core::coloring::{self as coloring_mod, Coloring};
use diffseq_core::dividing::{build_intervals, dividing_coloring, j_intervals, nested_alpha};
use diffseq_core::error::Error as CoreError;
use diffseq_core::exactreal::factorial_alpha;
use diffseq_core::gapset::{DividingSeq, GapSet, Generator};
use diffseq_core::solver::{delta, SolverConfig, SolverStatus};

const EXIT_USAGE: u8 = 1;
const EXIT_RESOURCE: u8 = 2;
const EXIT_COUNTEREXAMPLE: u8 = 3;
const EXIT_INTERNAL: u8 = 4;

#[derive(Parser)]
#[command(
    name = "diffseq",
    version,
    about = "Diffsequence Ramsey numbers: exact search, bounds, colorings, certificates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact Ramsey-type number by backtracking search over colorings.
    Delta {
        /// Gap set descriptor: pow2 | factorial | dividing:1,2|2,3 |
        /// explicit:1,2,6 | floorpow:3/2:floor
        #[arg(long)]
        gapset: String,
        /// Target diffsequence length.
        #[arg(long)]
        k: u64,
        /// Number of colors.
        #[arg(long, default_value_t = 2)]
        r: u32,
        /// Give up (exit 2) if the answer exceeds this.
        #[arg(long, default_value_t = 4096)]
        cap: u64,
        /// Node budget; accepts forms like 1000000 or 1e9.
        #[arg(long, value_parser = parse_budget, default_value = "100000000")]
        budget: u64,
        /// Worker threads for subtree search.
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Evaluate the analytic lower bounds at (t, u) or at the optimum.
    Bound {
        #[arg(long)]
        k: u64,
        #[arg(long, requires = "u")]
        t: Option<u32>,
        #[arg(long, requires = "t")]
        u: Option<u32>,
        /// Search (t, u) exhaustively instead of giving them.
        #[arg(long, conflicts_with = "t")]
        optimize: bool,
        /// Also machine-check the bound against its block coloring.
        #[arg(long)]
        certify: bool,
    },
    /// Machine-check the refined bound at (k, t, u).
    Certify {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        t: u32,
        #[arg(long)]
        u: u32,
    },
    /// Emit a coloring of [1..n].
    Color {
        /// pt | ptu | dividing | factorial-beatty
        #[arg(long)]
        family: String,
        #[arg(long)]
        t: Option<u32>,
        #[arg(long)]
        u: Option<u32>,
        /// Dividing generator, e.g. 1,2,3|2,3 (prefix | repeating tail).
        #[arg(long)]
        a: Option<String>,
        #[arg(long)]
        n: u64,
        /// Initial series precision for factorial-beatty.
        #[arg(long, default_value_t = 3)]
        terms: u64,
        /// Cap on block sizes in bits.
        #[arg(long, default_value_t = diffseq_core::bits::DEFAULT_BIT_CAP)]
        bit_cap: u64,
        /// Write the coloring file here instead of inlining the bits.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a coloring file for monochromatic diffsequences of length k.
    Verify {
        #[arg(long)]
        coloring: PathBuf,
        #[arg(long)]
        gapset: String,
        #[arg(long)]
        k: u64,
        /// Range bound; defaults to the length of an explicit coloring.
        #[arg(long)]
        n: Option<u64>,
    },
    /// Longest monochromatic diffsequence in a coloring file.
    Longest {
        #[arg(long)]
        coloring: PathBuf,
        #[arg(long)]
        gapset: String,
        #[arg(long)]
        n: Option<u64>,
    },
    /// Inspect the series slope: enclosing interval, floors, mod-2 windows.
    Alpha {
        #[arg(long, default_value_t = 3)]
        terms: u64,
        /// Also report the parity of floor(m * alpha) for this m.
        #[arg(long)]
        floor_at: Option<u64>,
        /// Also report an interval around d * alpha mod 2 for this d.
        #[arg(long)]
        mod2_at: Option<u64>,
        #[arg(long, default_value_t = diffseq_core::exactreal::DEFAULT_REFINE_CAP)]
        refine_cap: u32,
    },
    /// Inspect the nested-interval table for a dividing generator.
    Intervals {
        /// Generator, e.g. 1,2,3|2,3 (prefix | repeating tail).
        #[arg(long)]
        a: String,
        /// Table depth.
        #[arg(long, conflicts_with = "n")]
        t: Option<usize>,
        /// Or: choose the depth needed to cover gaps up to n.
        #[arg(long)]
        n: Option<u64>,
    },
}

fn parse_budget(s: &str) -> Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    if let Some((mant, exp)) = s.split_once(['e', 'E']) {
        let mant: u64 = mant.parse().map_err(|_| format!("bad mantissa in `{s}`"))?;
        let exp: u32 = exp.parse().map_err(|_| format!("bad exponent in `{s}`"))?;
        return mant
            .checked_mul(10u64.checked_pow(exp).ok_or("exponent too large")?)
            .ok_or_else(|| format!("budget `{s}` overflows"));
    }
    Err(format!("cannot parse `{s}` as a node count"))
}

struct Failure {
    kind: String,
    message: String,
    exit: u8,
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Failure {
        let exit = match &e {
            CoreError::MemoryCap { .. } => EXIT_RESOURCE,
            CoreError::Internal(_) => EXIT_INTERNAL,
            _ => EXIT_USAGE,
        };
        Failure {
            kind: e.kind().to_string(),
            message: e.to_string(),
            exit,
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        kind: "usage".into(),
        message: message.into(),
        exit: EXIT_USAGE,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let failure = usage(e.to_string());
                emit_failure(&failure);
                return ExitCode::from(EXIT_USAGE);
            }
            // --help / --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match run(cli.command) {
        Ok((doc, exit)) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&doc).expect("valid json")
            );
            ExitCode::from(exit)
        }
        Err(failure) => {
            emit_failure(&failure);
            ExitCode::from(failure.exit)
        }
    }
}

fn emit_failure(f: &Failure) {
    let doc = json!({"error": {"kind": f.kind, "message": f.message}});
    eprintln!(
        "{}",
        serde_json::to_string_pretty(&doc).expect("valid json")
    );
}

fn run(command: Command) -> Result<(Value, u8), Failure> {
    match command {
        Command::Delta {
            gapset,
            k,
            r,
            cap,
            budget,
            threads,
        } => run_delta(&gapset, k, r, cap, budget, threads),
        Command::Bound {
            k,
            t,
            u,
            optimize,
            certify,
        } => run_bound(k, t, u, optimize, certify),
        Command::Certify { k, t, u } => run_certify(k, t, u),
        Command::Color {
            family,
            t,
            u,
            a,
            n,
            terms,
            bit_cap,
            out,
        } => run_color(
            &family,
            t,
            u,
            a.as_deref(),
            n,
            terms,
            bit_cap,
            out.as_deref(),
        ),
        Command::Verify {
            coloring,
            gapset,
            k,
            n,
        } => run_verify(&coloring, &gapset, k, n),
        Command::Longest {
            coloring,
            gapset,
            n,
        } => run_longest(&coloring, &gapset, n),
        Command::Alpha {
            terms,
            floor_at,
            mod2_at,
            refine_cap,
        } => run_alpha(terms, floor_at, mod2_at, refine_cap),
        Command::Intervals { a, t, n } => run_intervals(&a, t, n),
    }
}

fn run_delta(
    gapset: &str,
    k: u64,
    r: u32,
    cap: u64,
    budget: u64,
    threads: usize,
) -> Result<(Value, u8), Failure> {
    if k < 1 {
        return Err(usage("--k must be at least 1"));
    }
    if !(2..=9).contains(&r) {
        return Err(usage("--r must be between 2 and 9"));
    }
    if threads < 1 {
        return Err(usage("--threads must be at least 1"));
    }
    let g = GapSet::parse(gapset)?;
    let config = SolverConfig { budget, threads };
    let result = delta(&g, k, r, cap, &config);
    let exit = match result.status {
        SolverStatus::Found { .. } => 0,
        _ => EXIT_RESOURCE,
    };
    Ok((serde_json::to_value(&result).expect("serializable"), exit))
}

fn run_bound(
    k: u64,
    t: Option<u32>,
    u: Option<u32>,
    optimize: bool,
    certify: bool,
) -> Result<(Value, u8), Failure> {
    if k < 2 {
        return Err(usage("--k must be at least 2"));
    }
    let params = match (t, u, optimize) {
        (Some(t), Some(u), false) => Some((t, u)),
        (None, None, true) => None,
        _ => {
            return Err(usage(
                "give both --t and --u, or --optimize to search for them",
            ))
        }
    };
    let report = bound_report(k, params, certify)?;
    let mut doc = json!({
        "k": report.k,
        "t": report.t,
        "u": report.u,
        "refined_bound": big_to_json(&report.refined_bound),
        "simple_bound": big_to_json(&report.simple_bound),
        "theorem_bound": {
            "value": decimal_string(&report.theorem_bound.value, 8),
            "precision": THEOREM_BOUND_PRECISION,
        },
        "certified_bound": match &report.certified_bound {
            Some(b) => big_to_json(b),
            None => Value::from("not run"),
        },
        "consistent": report.consistent,
    });
    if let Some(cert) = &report.certificate {
        doc["certificate"] = serde_json::to_value(cert).expect("serializable");
    }
    if let Some((witness, largest)) = &report.discrepancy {
        doc["discrepancy"] = json!({
            "counterexample": witness,
            "largest_verified_n": largest,
        });
    }
    let exit = if report.discrepancy.is_some() {
        EXIT_COUNTEREXAMPLE
    } else {
        0
    };
    Ok((doc, exit))
}

fn run_certify(k: u64, t: u32, u: u32) -> Result<(Value, u8), Failure> {
    match certify_bound(k, t, u)? {
        CertifyOutcome::Certified(cert) => Ok((
            json!({
                "result": "certificate",
                "certificate": cert,
            }),
            0,
        )),
        CertifyOutcome::Discrepancy {
            counterexample,
            largest_verified_n,
        } => Ok((
            json!({
                "result": "discrepancy",
                "counterexample": counterexample,
                "largest_verified_n": largest_verified_n,
                "certified_bound": largest_verified_n + 1,
            }),
            EXIT_COUNTEREXAMPLE,
        )),
    }
}

#[allow(clippy::too_many_arguments)]
fn run_color(
    family: &str,
    t: Option<u32>,
    u: Option<u32>,
    a: Option<&str>,
    n: u64,
    terms: u64,
    bit_cap: u64,
    out: Option<&std::path::Path>,
) -> Result<(Value, u8), Failure> {
    if n < 1 {
        return Err(usage("--n must be at least 1"));
    }
    let need_t = || t.ok_or_else(|| usage(format!("--family {family} needs --t")));
    let (coloring, mut doc) = match family {
        "pt" => {
            let t = need_t()?;
            let c = Coloring::periodic(coloring_mod::thue_morse_block_with_cap(t, bit_cap)?);
            let doc = json!({"family": "pt", "t": t, "n": n, "period": 1u64 << t});
            (c, doc)
        }
        "ptu" => {
            let t = need_t()?;
            let u = u.ok_or_else(|| usage("--family ptu needs --u"))?;
            let c = Coloring::periodic(coloring_mod::stretch_block_with_cap(t, u, bit_cap)?);
            let doc = json!({"family": "ptu", "t": t, "u": u, "n": n, "period": 1u64 << (t + u)});
            (c, doc)
        }
        "dividing" => {
            let a = a.ok_or_else(|| usage("--family dividing needs --a"))?;
            let g = GapSet::parse(&format!("dividing:{a}"))?;
            let dc = dividing_coloring(&g, n)?;
            let doc = json!({
                "family": "dividing",
                "a": a,
                "n": n,
                "alpha": dc.alpha.to_string(),
                "T": dc.levels,
                "k_run": dc.run_bound,
                "window": format!("[1/{}, 1]", 1u64 << dc.run_bound),
                "avoid_length": dc.avoid_length,
                "index_scale": dc.index_scale,
            });
            (dc.coloring, doc)
        }
        "factorial-beatty" => {
            if terms < 1 {
                return Err(usage("--terms must be at least 1"));
            }
            let c = Coloring::beatty(factorial_alpha(terms), 1);
            let doc = json!({"family": "factorial-beatty", "n": n, "terms": terms});
            (c, doc)
        }
        other => {
            return Err(usage(format!(
                "unknown family `{other}`; expected pt, ptu, dividing or factorial-beatty"
            )))
        }
    };
    let bits: diffseq_core::Bits = coloring.materialize(n)?.into_iter().collect();
    let explicit = Coloring::explicit(bits);
    match out {
        Some(path) => {
            std::fs::write(path, explicit.to_file_string()?).map_err(|e| Failure {
                kind: "io".into(),
                message: format!("cannot write {}: {e}", path.display()),
                exit: EXIT_USAGE,
            })?;
            doc["file"] = Value::from(path.display().to_string());
        }
        None => {
            let Coloring::Explicit { bits } = &explicit else {
                unreachable!()
            };
            doc["bits"] = Value::from(bits.to_string());
        }
    }
    Ok((doc, 0))
}

fn load_coloring(path: &std::path::Path, n: Option<u64>) -> Result<(Coloring, u64), Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure {
        kind: "io".into(),
        message: format!("cannot read {}: {e}", path.display()),
        exit: EXIT_USAGE,
    })?;
    let coloring = Coloring::parse_file(&text)?;
    let n = match (n, &coloring) {
        (Some(n), _) => n,
        (None, Coloring::Explicit { bits }) => bits.len(),
        (None, _) => return Err(usage("--n is required when the coloring file is periodic")),
    };
    if n < 1 {
        return Err(usage("--n must be at least 1"));
    }
    Ok((coloring, n))
}

fn run_verify(
    path: &std::path::Path,
    gapset: &str,
    k: u64,
    n: Option<u64>,
) -> Result<(Value, u8), Failure> {
    let g = GapSet::parse(gapset)?;
    let (coloring, n) = load_coloring(path, n)?;
    match verify_avoidance(&coloring, &g, k, n)? {
        VerifyOutcome::Certified(cert) => {
            let mut doc = serde_json::to_value(&cert).expect("serializable");
            doc["result"] = Value::from("certificate");
            Ok((doc, 0))
        }
        VerifyOutcome::Counterexample(witness) => Ok((
            json!({
                "result": "counterexample",
                "gapset": g.to_string(),
                "k": k,
                "n": n,
                "witness": witness,
            }),
            EXIT_COUNTEREXAMPLE,
        )),
    }
}

fn run_longest(
    path: &std::path::Path,
    gapset: &str,
    n: Option<u64>,
) -> Result<(Value, u8), Failure> {
    let g = GapSet::parse(gapset)?;
    let (coloring, n) = load_coloring(path, n)?;
    let (length, witness) = longest_mono(&coloring, &g, n)?;
    Ok((
        json!({
            "gapset": g.to_string(),
            "n": n,
            "length": length,
            "witness": witness,
        }),
        0,
    ))
}

fn run_alpha(
    terms: u64,
    floor_at: Option<u64>,
    mod2_at: Option<u64>,
    refine_cap: u32,
) -> Result<(Value, u8), Failure> {
    if terms < 1 {
        return Err(usage("--terms must be at least 1"));
    }
    let alpha = factorial_alpha(terms);
    let (lo, hi) = alpha.interval();
    let width = &hi - &lo;
    let mut doc = json!({
        "terms": terms,
        "lo": lo.to_string(),
        "hi": hi.to_string(),
        "width": width.to_string(),
    });
    if let Some(m) = floor_at {
        if m < 1 {
            return Err(usage("--floor-at must be at least 1"));
        }
        let parity = alpha.floor_parity(m, refine_cap)?;
        doc["floor_parity"] = json!({"m": m, "parity": parity});
    }
    if let Some(d) = mod2_at {
        if d < 1 {
            return Err(usage("--mod2-at must be at least 1"));
        }
        let (x, y) = alpha.scaled_mod2_range(d, refine_cap)?;
        doc["mod2"] = json!({"d": d, "lo": x.to_string(), "hi": y.to_string()});
    }
    Ok((doc, 0))
}

fn run_intervals(a: &str, t: Option<usize>, n: Option<u64>) -> Result<(Value, u8), Failure> {
    let g = GapSet::parse(&format!("dividing:{a}"))?;
    let GapSet::Dividing(seq) = &g else {
        unreachable!()
    };
    let scale = seq.value(1).expect("nonempty generator");
    let reduced: DividingSeq = seq.reduce_first();
    let gen = Generator::Eventually(reduced);
    let values = match (t, n) {
        (Some(depth), None) => {
            if depth < 1 {
                return Err(usage("--t must be at least 1"));
            }
            let mut vs = Vec::with_capacity(depth);
            for i in 1..=depth {
                vs.push(gen.value(i).ok_or_else(|| {
                    usage(format!(
                        "generator is finite and shorter than depth {depth}"
                    ))
                })?);
            }
            vs
        }
        (None, Some(bound)) => nested_alpha(&gen, bound)?.a,
        _ => return Err(usage("give exactly one of --t or --n")),
    };
    let table = build_intervals(&values)?;
    let levels: Vec<Value> = (1..=table.depth())
        .map(|b| {
            let (c, d) = table.level(b);
            json!({"b": b, "c": c.to_string(), "d": d.to_string()})
        })
        .collect();
    let js: Vec<Value> = j_intervals(&values)?
        .into_iter()
        .enumerate()
        .map(|(i, j)| match j {
            Some(j) => json!({"t": j.t, "lo": j.lo.to_string(), "hi": j.hi.to_string()}),
            None => json!({"t": i + 1, "empty": true}),
        })
        .collect();
    let alpha = table.level1_midpoint();
    let window = format!("[{}, 1]", table.window_floor());
    Ok((
        json!({
            "a": values,
            "index_scale": scale,
            "depth": table.depth(),
            "k_run": table.run_bound(),
            "window": window,
            "levels": levels,
            "running_intersections": js,
            "alpha": alpha.to_string(),
        }),
        0,
    ))
}

fn big_to_json(b: &BigInt) -> Value {
    match b.to_i64() {
        Some(v) => Value::from(v),
        None => Value::from(b.to_string()),
    }
}
