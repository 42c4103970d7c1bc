//! `supersat`: bounds, exact values, constructions and structure reports
//! for `t`-intersection supersaturation in `G(n, k, t)`.

mod sweep;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use supersat::bounds::{regularized_edge_bound, sandwich_seeded};
use supersat::constructions::{
    clique_construction, colex_family, disjoint_stars, full_star, greedy_packing, lex_family,
    sharpness_construction, star_plus_star, Construction,
};
use supersat::johnson::DEFAULT_BUDGET;
use supersat::structure::{greedy_regularize, intersection_structure, shadow_ratio};
use supersat::{Error, Family, Params, Result};

#[derive(Parser)]
#[command(
    name = "supersat",
    version,
    about = "Supersaturation for forbidden intersections in uniform set families"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bound and, when possible, certify rho(ell) for G(n, k, t).
    Rho {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        t: u32,
        #[arg(long)]
        ell: u128,
        /// Node budget for the exact search.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        exact_budget: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write the report here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the best family found here.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Build an explicit family and record its predicted and actual edge counts.
    Construct {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        t: u32,
        #[arg(long)]
        r: Option<u128>,
        /// Family size, for the size-driven kinds.
        #[arg(long)]
        m: Option<u128>,
        /// Family file; metadata goes to `<out>.json`.
        #[arg(long)]
        out: PathBuf,
    },
    /// Regularize a family and report its intersection structure.
    Analyze {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        t: u32,
        /// Diversity threshold; defaults to 2k.
        #[arg(long)]
        s: Option<u32>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate bounds over a range of n and ell as CSV.
    Sweep {
        /// `A..B` (inclusive) or a single value.
        #[arg(long)]
        n_range: String,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        t: u32,
        /// `X` or `X..Y` (inclusive), each end an integer or `alpha`, `alpha+R`, `alpha-R`.
        #[arg(long)]
        ell_spec: String,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        exact_budget: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Directory for witness families; omitted when absent.
        #[arg(long)]
        witness_dir: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    FullStar,
    StarPlusStar,
    Clique,
    Sharpness,
    Lex,
    Colex,
    Packing,
    DisjointStars,
}

pub(crate) fn usage_err(msg: impl Into<String>) -> Error {
    Error::Usage(msg.into())
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Usage(_) | Error::Parse { .. } | Error::Io(_) => 2,
        Error::Budget { .. } => 3,
        Error::Infeasible(_) => 4,
        Error::Overflow(_) | Error::Internal(_) => 1,
    }
}

/// Writes through a temporary file in the target directory, then renames.
pub(crate) fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Pretty JSON with sorted keys.
pub(crate) fn to_json(value: &impl serde::Serialize) -> String {
    let v = serde_json::to_value(value).expect("reports serialize");
    let mut s = serde_json::to_string_pretty(&v).expect("values print");
    s.push('\n');
    s
}

fn sidecar(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

fn cmd_rho(
    p: Params,
    ell: u128,
    budget: u64,
    seed: u64,
    out: Option<PathBuf>,
    witness: Option<PathBuf>,
) -> Result<u8> {
    let mut report = sandwich_seeded(p, ell, budget, seed)?;
    if let (Some(path), Some(w)) = (&witness, &report.witness) {
        write_atomic(path, w.to_text().as_bytes())?;
        report.witness_file = Some(path.display().to_string());
    }
    let text = to_json(&report);
    if let Some(path) = &out {
        write_atomic(path, text.as_bytes())?;
    }
    print!("{text}");
    if report.exact.is_none() {
        eprintln!("warning: rho({ell}) not certified within {budget} nodes");
        return Ok(3);
    }
    Ok(0)
}

fn build(kind: Kind, p: Params, r: Option<u128>, m: Option<u128>) -> Result<(Construction, Value)> {
    let need_r = || r.ok_or_else(|| usage_err("this kind needs --r"));
    let need_m = || m.ok_or_else(|| usage_err("this kind needs --m"));
    Ok(match kind {
        Kind::FullStar => (full_star(p, None)?, Value::Null),
        Kind::StarPlusStar => (star_plus_star(p, need_r()?)?, Value::Null),
        Kind::Clique => {
            let out = clique_construction(p, need_r()?)?;
            (
                out.construction,
                json!({ "x": out.x, "dense_part": out.dense_part }),
            )
        }
        Kind::Sharpness => (sharpness_construction(p, need_r()?)?, Value::Null),
        Kind::Lex => (lex_family(p, need_m()?)?, Value::Null),
        Kind::Colex => (colex_family(p, need_m()?)?, Value::Null),
        Kind::Packing => (greedy_packing(p)?, Value::Null),
        Kind::DisjointStars => {
            let m = need_m()?;
            let c = disjoint_stars(p, m)?.ok_or_else(|| {
                Error::Infeasible(format!(
                    "no disjoint stars of total size {m} fit in [{}]",
                    p.n
                ))
            })?;
            (c, Value::Null)
        }
    })
}

fn cmd_construct(
    kind: Kind,
    p: Params,
    r: Option<u128>,
    m: Option<u128>,
    out: &Path,
) -> Result<u8> {
    let (c, extra) = build(kind, p, r, m)?;
    let actual = c.family.count_t_pairs(p.t)?;
    for note in &c.spec.notes {
        eprintln!("warning: {note}");
    }
    let meta = json!({
        "spec": c.spec,
        "actual_edges": actual,
        "size": c.family.len(),
        "family_file": out.display().to_string(),
        "details": extra,
    });
    write_atomic(out, c.family.to_text().as_bytes())?;
    let text = to_json(&meta);
    write_atomic(&sidecar(out), text.as_bytes())?;
    print!("{text}");
    Ok(0)
}

fn cmd_analyze(
    input: &Path,
    t: u32,
    s: Option<u32>,
    seed: u64,
    out: Option<PathBuf>,
) -> Result<u8> {
    let text = std::fs::read_to_string(input)
        .map_err(|e| usage_err(format!("cannot read {}: {e}", input.display())))?;
    let f = Family::parse(&text)?;
    if f.is_empty() {
        return Err(usage_err(format!("{} holds no sets", input.display())));
    }
    if t >= f.k() {
        return Err(usage_err(format!("t={t} must be below k={}", f.k())));
    }
    let s = s.unwrap_or(2 * f.k());
    let reg = greedy_regularize(&f, s, seed)?;
    let ratio = match shadow_ratio(&f, t) {
        Ok(r) => serde_json::to_value(r).expect("ratio serializes"),
        Err(Error::Usage(msg)) => json!({ "skipped": msg }),
        Err(e) => return Err(e),
    };
    let structure = if reg.sub.len() >= 2 {
        serde_json::to_value(intersection_structure(&reg.sub, &reg.partition, t)?)
            .expect("structure serializes")
    } else {
        Value::Null
    };
    let sub_pairs = reg.sub.count_t_pairs(t)?;
    let edge_bound = if reg.report.accepted && sub_pairs > 0 {
        let bound = regularized_edge_bound(&reg.sub, t)?;
        json!({ "bound": bound, "t_pairs": sub_pairs, "holds": sub_pairs as f64 >= bound })
    } else {
        Value::Null
    };
    let report = json!({
        "input": { "path": input.display().to_string(), "n": f.n(), "k": f.k(), "size": f.len() },
        "t": t,
        "t_pairs": f.count_t_pairs(t)?,
        "shadow_ratio": ratio,
        "regularize": reg.report,
        "partition": reg.partition,
        "sub": { "size": reg.sub.len(), "t_pairs": sub_pairs, "members": reg.sub.members() },
        "structure": structure,
        "edge_bound": edge_bound,
    });
    let text = to_json(&report);
    if let Some(path) = &out {
        write_atomic(path, text.as_bytes())?;
    }
    print!("{text}");
    Ok(0)
}

fn configure_threads() {
    if let Some(n) = std::env::var("RHO_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        // Fails only if a pool already exists, in which case it is kept.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global();
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Rho {
            n,
            k,
            t,
            ell,
            exact_budget,
            seed,
            out,
            witness,
        } => cmd_rho(Params::new(n, k, t)?, ell, exact_budget, seed, out, witness),
        Command::Construct {
            kind,
            n,
            k,
            t,
            r,
            m,
            out,
        } => cmd_construct(kind, Params::new(n, k, t)?, r, m, &out),
        Command::Analyze {
            input,
            t,
            s,
            seed,
            out,
        } => cmd_analyze(&input, t, s, seed, out),
        Command::Sweep {
            n_range,
            k,
            t,
            ell_spec,
            exact_budget,
            seed,
            witness_dir,
            out,
        } => {
            let spec = sweep::SweepSpec::parse(&n_range, k, t, &ell_spec)?;
            sweep::run(&spec, exact_budget, seed, witness_dir.as_deref(), &out)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    configure_threads();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
