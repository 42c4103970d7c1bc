//! The `sweep` command: one CSV row per `(n, ℓ)`.

use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;

use supersat::binom::binomial;
use supersat::bounds::{sandwich_seeded, small_excess_value, BoundReport};
use supersat::johnson::{alpha, AlphaMode, MAX_EXPLICIT_VERTICES};
use supersat::{Params, Result};

use crate::{usage_err, write_atomic};

pub const COLUMNS: &[&str] = &[
    "n",
    "k",
    "t",
    "ell",
    "r",
    "alpha",
    "lower_trivial",
    "lower_turan",
    "lower_turan_balanced",
    "lower_spectral",
    "lower_solver",
    "upper_averaging",
    "upper_construction",
    "upper_solver",
    "ref_asymptotic_lower",
    "ref_small_excess",
    "exact",
    "certified",
    "witness",
];

/// One end of an `ℓ` range.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EllBound {
    Absolute(u128),
    /// `alpha + offset`.
    Alpha(i128),
}

impl EllBound {
    fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("alpha") {
            let offset = match rest.chars().next() {
                None => 0,
                Some('+') => rest[1..]
                    .parse::<i128>()
                    .map_err(|_| usage_err(format!("bad offset in {s:?}")))?,
                Some('-') => -rest[1..]
                    .parse::<i128>()
                    .map_err(|_| usage_err(format!("bad offset in {s:?}")))?,
                _ => return Err(usage_err(format!("bad ell bound {s:?}"))),
            };
            return Ok(EllBound::Alpha(offset));
        }
        s.parse()
            .map(EllBound::Absolute)
            .map_err(|_| usage_err(format!("bad ell bound {s:?}")))
    }

    fn resolve(self, alpha: Option<u128>) -> Result<i128> {
        match self {
            EllBound::Absolute(v) => Ok(v as i128),
            EllBound::Alpha(off) => {
                let a = alpha.ok_or_else(|| {
                    usage_err("alpha-relative ell needs a known independence number")
                })?;
                Ok(a as i128 + off)
            }
        }
    }
}

fn split_range(s: &str) -> (&str, Option<&str>) {
    match s.split_once("..") {
        Some((a, b)) => (a, Some(b.strip_prefix('=').unwrap_or(b))),
        None => (s, None),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepSpec {
    pub n_lo: u32,
    pub n_hi: u32,
    pub k: u32,
    pub t: u32,
    pub ell_lo: EllBound,
    pub ell_hi: EllBound,
}

impl SweepSpec {
    pub fn parse(n_range: &str, k: u32, t: u32, ell_spec: &str) -> Result<Self> {
        let num = |s: &str| {
            s.trim()
                .parse::<u32>()
                .map_err(|_| usage_err(format!("bad n range {n_range:?}")))
        };
        let (a, b) = split_range(n_range);
        let n_lo = num(a)?;
        let n_hi = b.map(num).transpose()?.unwrap_or(n_lo);
        let (a, b) = split_range(ell_spec);
        let ell_lo = EllBound::parse(a)?;
        let ell_hi = b.map(EllBound::parse).transpose()?.unwrap_or(ell_lo);
        if t >= k {
            return Err(usage_err(format!("need t < k, got k={k} t={t}")));
        }
        Ok(SweepSpec {
            n_lo,
            n_hi,
            k,
            t,
            ell_lo,
            ell_hi,
        })
    }
}

fn known_alpha(p: Params, budget: u64) -> Result<Option<u128>> {
    let explicit = binomial(p.n as i64, p.k as i64)? <= MAX_EXPLICIT_VERTICES as u128;
    let mode = if explicit {
        AlphaMode::Exact { budget }
    } else {
        AlphaMode::Formula
    };
    match alpha(p, mode) {
        Ok(a) => Ok(a.value),
        Err(supersat::Error::Budget { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Instances in output order: increasing `n`, then increasing `ℓ`.
fn instances(spec: &SweepSpec, budget: u64) -> Result<Vec<(Params, u128, Option<u128>)>> {
    let mut out = Vec::new();
    for n in spec.n_lo..=spec.n_hi {
        if n < spec.k {
            continue;
        }
        let p = Params::new(n, spec.k, spec.t)?;
        let needs_alpha =
            matches!(spec.ell_lo, EllBound::Alpha(_)) || matches!(spec.ell_hi, EllBound::Alpha(_));
        let a = if needs_alpha {
            known_alpha(p, budget)?
        } else {
            None
        };
        let order = binomial(n as i64, spec.k as i64)? as i128;
        let lo = spec.ell_lo.resolve(a)?.max(0);
        let hi = spec.ell_hi.resolve(a)?.min(order);
        for ell in lo..=hi {
            out.push((p, ell as u128, a));
        }
    }
    Ok(out)
}

fn cell(report: &BoundReport, name: &str) -> String {
    report
        .get(name)
        .map(|b| {
            b.integer
                .map_or_else(|| format!("{}", b.value), |v| v.to_string())
        })
        .unwrap_or_default()
}

fn row(report: &BoundReport, witness: Option<&str>) -> Result<String> {
    let p = report.params;
    let star = binomial(p.n as i64 - p.t as i64 - 1, p.k as i64 - p.t as i64 - 1)?;
    let r = (report.ell > star).then(|| report.ell - star);
    let small_excess = match r {
        Some(r) if p.k >= 2 * p.t + 3 => small_excess_value(p, r)?.to_string(),
        _ => String::new(),
    };
    let opt = |v: Option<String>| v.unwrap_or_default();
    let fields = [
        p.n.to_string(),
        p.k.to_string(),
        p.t.to_string(),
        report.ell.to_string(),
        opt(r.map(|r| r.to_string())),
        opt(report.alpha.map(|a| a.to_string())),
        cell(report, "trivial"),
        cell(report, "turan"),
        cell(report, "turan_balanced"),
        cell(report, "spectral"),
        cell(report, "solver_lower"),
        cell(report, "averaging"),
        cell(report, "construction"),
        opt(report
            .get("solver_incumbent")
            .or(report.get("local_search"))
            .and_then(|b| b.integer)
            .map(|v| v.to_string())),
        cell(report, "asymptotic_lower"),
        small_excess,
        opt(report.exact.map(|v| v.to_string())),
        report.exact.is_some().to_string(),
        witness.unwrap_or_default().to_string(),
    ];
    Ok(fields.join(","))
}

pub fn run(
    spec: &SweepSpec,
    budget: u64,
    seed: u64,
    witness_dir: Option<&Path>,
    out: &Path,
) -> Result<u8> {
    let todo = instances(spec, budget)?;
    let rows: Vec<String> = todo
        .par_iter()
        .map(|&(p, ell, _)| {
            let report = sandwich_seeded(p, ell, budget, seed)?;
            let witness = match (witness_dir, &report.witness) {
                (Some(dir), Some(w)) => {
                    let path = dir.join(format!("n{}_k{}_t{}_l{}.fam", p.n, p.k, p.t, ell));
                    write_atomic(&path, w.to_text().as_bytes())?;
                    Some(path.display().to_string())
                }
                _ => None,
            };
            row(&report, witness.as_deref())
        })
        .collect::<Result<_>>()?;
    let mut csv = COLUMNS.join(",");
    csv.push('\n');
    for r in &rows {
        writeln!(csv, "{r}").expect("string write");
    }
    write_atomic(out, csv.as_bytes())?;
    eprintln!("wrote {} rows to {}", rows.len(), out.display());
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_specs() {
        let s = SweepSpec::parse("6..8", 3, 1, "alpha+1..alpha+3").unwrap();
        assert_eq!((s.n_lo, s.n_hi), (6, 8));
        assert_eq!(
            (s.ell_lo, s.ell_hi),
            (EllBound::Alpha(1), EllBound::Alpha(3))
        );
        let s = SweepSpec::parse("7", 3, 0, "4..=6").unwrap();
        assert_eq!(
            (s.n_lo, s.n_hi, s.ell_lo, s.ell_hi),
            (7, 7, EllBound::Absolute(4), EllBound::Absolute(6))
        );
        assert_eq!(
            SweepSpec::parse("5", 3, 0, "alpha").unwrap().ell_hi,
            EllBound::Alpha(0)
        );
        assert!(SweepSpec::parse("a..b", 3, 1, "1").is_err());
        assert!(SweepSpec::parse("5", 3, 1, "beta+1").is_err());
        assert!(SweepSpec::parse("5", 3, 3, "1").is_err());
    }

    #[test]
    fn empty_range_has_no_instances() {
        let s = SweepSpec::parse("9..6", 3, 1, "1..3").unwrap();
        assert!(instances(&s, 1000).unwrap().is_empty());
        let s = SweepSpec::parse("6", 3, 1, "5..2").unwrap();
        assert!(instances(&s, 1000).unwrap().is_empty());
    }
}
