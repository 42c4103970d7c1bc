//! Lower and upper bounds on `ρ(ℓ)` and the [`sandwich`] report that
//! checks them against each other and against the exact solver.
//!
//! Certified bounds are exact integers. Asymptotic statements are carried
//! as floating-point reference values and never enter the consistency
//! check.

use serde::Serialize;

use crate::binom::{binomial, factorial, mul};
use crate::constructions::{
    clique_construction, disjoint_stars, full_star, greedy_packing, lex_family,
    sharpness_construction, star_plus_star, Construction, ConstructionKind,
};
use crate::error::{usage, Error, Result};
use crate::johnson::{
    independence_number, johnson_params, spectral_edge_bound, MAX_EXPLICIT_VERTICES,
};
use crate::kk::colex_segment;
use crate::setfam::{Family, KSet, Params};
use crate::solver::{rho_exact, rho_local_search, turan_edges, Method, SolveResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Lower,
    Upper,
    /// Asymptotic or conditional value, not a bound at this `n`.
    Reference,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundEntry {
    pub name: String,
    pub kind: BoundKind,
    pub value: f64,
    pub certified: bool,
    /// Exact integer form of a certified bound.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub integer: Option<u128>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl BoundEntry {
    fn certified(name: &str, kind: BoundKind, value: u128) -> Self {
        BoundEntry {
            name: name.into(),
            kind,
            value: value as f64,
            certified: true,
            integer: Some(value),
            note: None,
        }
    }

    fn reference(name: &str, value: f64, note: &str) -> Self {
        BoundEntry {
            name: name.into(),
            kind: BoundKind::Reference,
            value,
            certified: false,
            integer: None,
            note: Some(note.into()),
        }
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SolverSummary {
    pub value: u64,
    pub lower: u64,
    pub certified: bool,
    pub method: Method,
    pub nodes_expanded: u64,
}

impl From<&SolveResult> for SolverSummary {
    fn from(r: &SolveResult) -> Self {
        SolverSummary {
            value: r.value,
            lower: r.lower,
            certified: r.certified,
            method: r.method,
            nodes_expanded: r.nodes_expanded,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub params: Params,
    pub ell: u128,
    pub bounds: Vec<BoundEntry>,
    /// Certified `ρ(ℓ)`.
    pub exact: Option<u64>,
    pub alpha: Option<u128>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solver: Option<SolverSummary>,
    /// Set by callers that write [`BoundReport::witness`] to disk.
    pub witness_file: Option<String>,
    /// Family attaining the smallest certified upper bound.
    #[serde(skip)]
    pub witness: Option<Family>,
}

impl BoundReport {
    pub fn lower_bounds(&self) -> impl Iterator<Item = &BoundEntry> {
        self.bounds.iter().filter(|b| b.kind == BoundKind::Lower)
    }

    pub fn upper_bounds(&self) -> impl Iterator<Item = &BoundEntry> {
        self.bounds.iter().filter(|b| b.kind == BoundKind::Upper)
    }

    pub fn get(&self, name: &str) -> Option<&BoundEntry> {
        self.bounds.iter().find(|b| b.name == name)
    }

    /// Largest certified lower bound.
    pub fn best_lower(&self) -> u128 {
        self.lower_bounds()
            .filter_map(|b| b.integer)
            .max()
            .unwrap_or(0)
    }

    /// Smallest certified upper bound.
    pub fn best_upper(&self) -> Option<u128> {
        self.upper_bounds().filter_map(|b| b.integer).min()
    }
}

/// Mean of `e(S)` over all `ℓ`-subsets `S`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Averaging {
    pub mean: f64,
    /// `⌊mean⌋`, attained or beaten by some `ℓ`-subset.
    pub floor: u128,
    /// `(ℓ²/nᵗ)·(t!/2)·C(k,t)²`
    pub asymptotic: f64,
}

pub fn averaging_upper_bound(p: Params, ell: u128) -> Result<Averaging> {
    let jp = johnson_params(p)?;
    let order = jp.vertex_count;
    if ell < 2 || ell > order {
        return usage(format!(
            "averaging bound needs 2 <= ell <= C(n,k)={order}, got {ell}"
        ));
    }
    let num = mul(
        jp.edge_count,
        mul(ell, ell - 1, "averaging bound")?,
        "averaging bound",
    )?;
    let den = mul(order, order - 1, "averaging bound")?;
    let asymptotic = (ell as f64).powi(2) / (p.n as f64).powi(p.t as i32) * factorial(p.t)? as f64
        / 2.0
        * (binomial(p.ki(), p.ti())? as f64).powi(2);
    Ok(Averaging {
        mean: num as f64 / den as f64,
        floor: num / den,
        asymptotic,
    })
}

#[derive(Clone, Debug)]
pub struct ConstructionBound {
    pub value: u64,
    pub kind: ConstructionKind,
    pub witness: Family,
}

/// The sparsest family of size `ℓ` among the explicit constructions, each
/// trimmed to `ℓ` members by dropping the member in the most `t`-pairs.
/// Constructions whose preconditions fail are skipped; `None` when none
/// reaches size `ℓ`.
pub fn construction_upper_bound(p: Params, ell: u128) -> Result<Option<ConstructionBound>> {
    let total = binomial(p.ni(), p.ki())?;
    if ell > total {
        return usage(format!("ell={ell} exceeds C(n,k)={total}"));
    }
    let star_size = binomial(p.ni() - p.ti() - 1, p.ki() - p.ti() - 1)?;
    let r = ell.checked_sub(star_size).filter(|&r| r >= 1);
    let mut candidates: Vec<Construction> = Vec::new();
    let mut keep = |c: Result<Construction>| match c {
        Ok(c) => {
            candidates.push(c);
            Ok(())
        }
        Err(Error::Usage(_)) | Err(Error::Infeasible(_)) => Ok(()),
        Err(e) => Err(e),
    };
    if ell <= star_size {
        keep(full_star(p, None))?;
    }
    if let Some(r) = r {
        keep(star_plus_star(p, r))?;
        keep(clique_construction(p, r).map(|o| o.construction))?;
        keep(sharpness_construction(p, r))?;
    }
    if p.t >= 1 {
        keep(greedy_packing(p))?;
    }
    if ell <= LEX_LIMIT {
        keep(lex_family(p, ell))?;
    }
    if let Some(c) = disjoint_stars(p, ell)? {
        candidates.push(c);
    }
    let mut best: Option<ConstructionBound> = None;
    for c in candidates {
        if (c.family.len() as u128) < ell {
            continue;
        }
        let kind = c.spec.kind;
        let witness = trim(c.family, ell as usize, p.t);
        let value = witness.count_t_pairs(p.t)?;
        if best.as_ref().is_none_or(|b| value < b.value) {
            best = Some(ConstructionBound {
                value,
                kind,
                witness,
            });
        }
    }
    if ell <= LEX_LIMIT {
        let segment = colex_segment(ell, p.n, p.k)?;
        let value = segment.count_t_pairs(p.t)?;
        if best.as_ref().is_none_or(|b| value < b.value) {
            best = Some(ConstructionBound {
                value,
                kind: ConstructionKind::ColexSegment,
                witness: segment,
            });
        }
    }
    Ok(best)
}

/// Largest `ℓ` for which lex and colex segments are tried.
const LEX_LIMIT: u128 = 1 << 16;

/// Drops members with the most `t`-pairs, latest in colex order first,
/// until `size` remain.
fn trim(family: Family, size: usize, t: u32) -> Family {
    if family.len() <= size {
        return family;
    }
    let (n, k) = (family.n(), family.k());
    let mut members = family.into_members();
    members.sort();
    let t = t as usize;
    let mut cnt: Vec<usize> = members
        .iter()
        .map(|a| members.iter().filter(|b| a.meet(b) == t).count())
        .collect();
    let mut alive = vec![true; members.len()];
    for _ in size..members.len() {
        let worst = (0..members.len())
            .filter(|&i| alive[i])
            .max_by_key(|&i| (cnt[i], i))
            .expect("members left");
        alive[worst] = false;
        for i in 0..members.len() {
            if alive[i] && members[i].meet(&members[worst]) == t {
                cnt[i] -= 1;
            }
        }
    }
    let kept: Vec<KSet> = members
        .into_iter()
        .zip(alive)
        .filter(|(_, a)| *a)
        .map(|(m, _)| m)
        .collect();
    Family::new(n, k, kept).expect("subfamily of a valid family")
}

/// `(α/2)·q·(q-1)` with `q = ⌊ℓ/α⌋`.
pub fn turan_lower_bound(alpha: u128, ell: u128) -> Result<u128> {
    if alpha == 0 {
        return usage("Turán bound needs alpha >= 1");
    }
    let q = ell / alpha;
    mul(
        alpha,
        mul(q, q.saturating_sub(1), "Turán bound")?,
        "Turán bound",
    )
    .map(|x| x / 2)
}

/// `(ℓ²/nᵗ)·(t!/2)`, an asymptotic reference for `ℓ ≫ n^(k-t-1)`.
pub fn asymptotic_lower(p: Params, ell: u128) -> Result<f64> {
    if p.k < 2 * p.t + 1 {
        return usage(format!("needs k >= 2t+1, got k={} t={}", p.k, p.t));
    }
    Ok((ell as f64).powi(2) / (p.n as f64).powi(p.t as i32) * factorial(p.t)? as f64 / 2.0)
}

/// `(ℓ²/nᵗ)·(t!/2)·C(k-t-1,t)²`, the asymptotic value of many disjoint
/// stars.
pub fn disjoint_stars_reference(p: Params, ell: u128) -> Result<f64> {
    let base = asymptotic_lower(p, ell)?;
    Ok(base * (binomial(p.ki() - p.ti() - 1, p.ti())? as f64).powi(2))
}

/// `r·C(k,t)·C(n-k-t-1,k-2t-1)`, the value of `ρ(C(n-t-1,k-t-1) + r)` for
/// large `n` and small `r`.
pub fn small_excess_value(p: Params, r: u128) -> Result<u128> {
    let (n, k, t) = (p.ni(), p.ki(), p.ti());
    if k < 2 * t + 3 {
        return usage(format!("needs k >= 2t+3, got k={k} t={t}"));
    }
    if r == 0 {
        return usage("needs r >= 1");
    }
    mul(
        mul(r, binomial(k, t)?, "small-excess value")?,
        binomial(n - k - t - 1, k - 2 * t - 1)?,
        "small-excess value",
    )
}

/// `(k+t)·|g|² / (4k·|∂^(t) g|)`, a lower bound on the `t`-pairs of a
/// regularized family that has at least one.
pub fn regularized_edge_bound(g: &Family, t: u32) -> Result<f64> {
    if t >= g.k() {
        return usage(format!("t={t} must be below k={}", g.k()));
    }
    if g.count_t_pairs(t)? == 0 {
        return usage("family is t-avoiding");
    }
    let shadow = g.shadow(t)?.len() as f64;
    let size = g.len() as f64;
    let k = g.k() as f64;
    Ok((k + t as f64) * size * size / (4.0 * k * shadow))
}

/// Every applicable bound at `(p, ℓ)`, the exact value when the solver
/// certifies it within `budget`, and a consistency check of the lot.
pub fn sandwich(p: Params, ell: u128, budget: u64) -> Result<BoundReport> {
    sandwich_seeded(p, ell, budget, 0)
}

/// [`sandwich`] with the seed used by local search on implicit graphs.
pub fn sandwich_seeded(p: Params, ell: u128, budget: u64, seed: u64) -> Result<BoundReport> {
    let jp = johnson_params(p)?;
    let order = jp.vertex_count;
    if ell > order {
        return usage(format!("ell={ell} exceeds C(n,k)={order}"));
    }
    let mut bounds = vec![BoundEntry::certified("trivial", BoundKind::Lower, 0)];
    let explicit = order <= MAX_EXPLICIT_VERTICES as u128;

    let alpha = if explicit {
        match independence_number(p, budget) {
            Ok((a, _)) => Some(a as u128),
            Err(Error::Budget { .. }) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    if let Some(a) = alpha {
        bounds.push(
            BoundEntry::certified("turan", BoundKind::Lower, turan_lower_bound(a, ell)?)
                .with_note("floor(ell/alpha) reading of the bracket, with exact alpha"),
        );
        let balanced = turan_edges(ell as u64, a as u64) as u128;
        bounds.push(BoundEntry::certified(
            "turan_balanced",
            BoundKind::Lower,
            balanced,
        ));
    }
    bounds.push(BoundEntry::certified(
        "spectral",
        BoundKind::Lower,
        spectral_edge_bound(p, ell)?,
    ));

    let mut witness: Option<(u128, Family)> = None;
    let offer = |value: u128, family: Family, witness: &mut Option<(u128, Family)>| {
        if witness.as_ref().is_none_or(|(v, _)| value < *v) {
            *witness = Some((value, family));
        }
    };
    if ell >= 2 {
        let avg = averaging_upper_bound(p, ell)?;
        bounds.push(
            BoundEntry::certified("averaging", BoundKind::Upper, avg.floor)
                .with_note(format!("mean {:.6}", avg.mean)),
        );
        bounds.push(BoundEntry::reference(
            "averaging_asymptotic",
            avg.asymptotic,
            "asymptotic form of the averaging bound",
        ));
    } else {
        bounds.push(BoundEntry::certified("averaging", BoundKind::Upper, 0).with_note("ell <= 1"));
    }
    if let Some(c) = construction_upper_bound(p, ell)? {
        let name = format!(
            "construction:{}",
            serde_json::to_value(c.kind)
                .ok()
                .and_then(|v| v.as_str().map(String::from))
                .unwrap_or_default()
        );
        bounds.push(
            BoundEntry::certified("construction", BoundKind::Upper, c.value as u128)
                .with_note(name),
        );
        offer(c.value as u128, c.witness, &mut witness);
    }
    if p.k > 2 * p.t {
        bounds.push(BoundEntry::reference(
            "asymptotic_lower",
            asymptotic_lower(p, ell)?,
            "asymptotic; needs n^(k-t-1) = o(ell)",
        ));
        bounds.push(BoundEntry::reference(
            "disjoint_stars_asymptotic",
            disjoint_stars_reference(p, ell)?,
            "asymptotic; needs n^(k-t-1) = o(ell) = o(n^(k-t))",
        ));
    }
    if p.k >= 2 * p.t + 3 {
        let star_size = binomial(p.ni() - p.ti() - 1, p.ki() - p.ti() - 1)?;
        if ell > star_size {
            let value = small_excess_value(p, ell - star_size)?;
            bounds.push(BoundEntry::reference(
                "small_excess",
                value as f64,
                "exact only for n > n0 and r = o(n^(k-2t-1))",
            ));
        }
    }

    let r = if explicit {
        let r = rho_exact(p, ell, budget)?;
        if !r.certified {
            bounds.push(BoundEntry::certified(
                "solver_lower",
                BoundKind::Lower,
                r.lower as u128,
            ));
            bounds.push(BoundEntry::certified(
                "solver_incumbent",
                BoundKind::Upper,
                r.value as u128,
            ));
        }
        r
    } else {
        let r = rho_local_search(p, ell, seed, LOCAL_SEARCH_ITERATIONS)?;
        bounds.push(BoundEntry::certified(
            "local_search",
            BoundKind::Upper,
            r.value as u128,
        ));
        r
    };
    let exact = r.certified.then_some(r.value);
    let solver = Some(SolverSummary::from(&r));
    offer(r.value as u128, r.witness, &mut witness);

    let report = BoundReport {
        params: p,
        ell,
        bounds,
        exact,
        alpha,
        solver,
        witness_file: None,
        witness: witness.map(|(_, f)| f),
    };
    check_consistency(&report)?;
    Ok(report)
}

const LOCAL_SEARCH_ITERATIONS: u64 = 20_000;

fn check_consistency(report: &BoundReport) -> Result<()> {
    let lower = report
        .lower_bounds()
        .filter(|b| b.certified)
        .max_by_key(|b| b.integer);
    let upper = report
        .upper_bounds()
        .filter(|b| b.certified)
        .min_by_key(|b| b.integer);
    let fail = |msg: String| {
        Err(Error::Internal(format!(
            "inconsistent sandwich at {} ell={}: {msg}",
            report.params, report.ell
        )))
    };
    if let (Some(lo), Some(hi)) = (lower, upper) {
        if lo.integer > hi.integer {
            return fail(format!(
                "{} = {:?} exceeds {} = {:?}",
                lo.name, lo.integer, hi.name, hi.integer
            ));
        }
    }
    if let Some(exact) = report.exact {
        let exact = exact as u128;
        if let Some(lo) = lower.filter(|b| b.integer > Some(exact)) {
            return fail(format!(
                "{} = {:?} exceeds exact {exact}",
                lo.name, lo.integer
            ));
        }
        if let Some(hi) = upper.filter(|b| b.integer < Some(exact)) {
            return fail(format!(
                "{} = {:?} is below exact {exact}",
                hi.name, hi.integer
            ));
        }
    }
    Ok(())
}
