//! Extremal and baseline families for `G(n, k, t)` with predicted sizes and
//! edge counts.
//!
//! Wherever a construction may take "any" subfamily, it takes the
//! colex-first members, so every output is deterministic.

use serde::Serialize;

use crate::binom::{binomial, mul};
use crate::enumerate::{all_ksets, all_ksets_lex, ksets_containing};
use crate::error::{usage, Error, Result};
use crate::setfam::{Family, KSet, Params};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstructionKind {
    FullStar,
    StarPlusStar,
    CliqueConstruction,
    SharpnessConstruction,
    LexFamily,
    ColexSegment,
    GreedyPacking,
    DisjointStars,
}

/// What is known in advance about a construction's `t`-pair count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum EdgePrediction {
    Exact(u128),
    AtMost(u128),
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstructionSpec {
    pub kind: ConstructionKind,
    pub params: Params,
    pub r: Option<u128>,
    pub predicted_edges: EdgePrediction,
    pub predicted_size: u128,
    /// Free-form remarks, e.g. when a regime condition is not met.
    pub notes: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct Construction {
    pub family: Family,
    pub spec: ConstructionSpec,
}

impl Construction {
    fn new(
        family: Family,
        kind: ConstructionKind,
        params: Params,
        r: Option<u128>,
        predicted_edges: EdgePrediction,
    ) -> Self {
        let predicted_size = family.len() as u128;
        Construction {
            family,
            spec: ConstructionSpec {
                kind,
                params,
                r,
                predicted_edges,
                predicted_size,
                notes: Vec::new(),
            },
        }
    }

    /// Recounts the family's `t`-pairs and checks them and the size against
    /// the prediction.
    pub fn verify(&self) -> Result<u64> {
        let actual = self.family.count_t_pairs(self.spec.params.t)?;
        let ok = match self.spec.predicted_edges {
            EdgePrediction::Exact(v) => actual as u128 == v,
            EdgePrediction::AtMost(v) => actual as u128 <= v,
            EdgePrediction::Unknown => true,
        };
        if !ok || self.family.len() as u128 != self.spec.predicted_size {
            return Err(Error::Internal(format!(
                "{:?}: predicted {:?} edges / {} sets, found {actual} / {}",
                self.spec.kind,
                self.spec.predicted_edges,
                self.spec.predicted_size,
                self.family.len()
            )));
        }
        Ok(actual)
    }
}

fn interval(p: Params, a: u32, b: u32) -> Result<KSet> {
    KSet::interval(p.n, a, b)
}

/// `d = C(n-k-t-1, k-2t-1)`: neighbours of a set disjoint from a
/// `(t+1)`-star's center inside that star, per chosen `t`-subset.
pub fn star_link_degree(p: Params) -> Result<u128> {
    let (n, k, t) = (p.ni(), p.ki(), p.ti());
    binomial(n - k - t - 1, k - 2 * t - 1)
}

fn star(p: Params, center: &KSet, avoid: &KSet) -> Vec<KSet> {
    ksets_containing(p.n, p.k, center, avoid).collect()
}

/// All `k`-sets containing a `(t+1)`-set center (default `[t+1]`). The
/// family is `(t+1)`-intersecting, so it has no `t`-pairs.
pub fn full_star(p: Params, center: Option<&KSet>) -> Result<Construction> {
    let center = match center {
        Some(c) => c.clone(),
        None => interval(p, 1, p.t + 1)?,
    };
    if center.ground() != p.n || center.len() != p.t as usize + 1 {
        return usage(format!(
            "star center must be a {}-subset of [{}]",
            p.t + 1,
            p.n
        ));
    }
    let members = star(p, &center, &KSet::empty(p.n)?);
    let family = Family::new(p.n, p.k, members)?;
    Ok(Construction::new(
        family,
        ConstructionKind::FullStar,
        p,
        None,
        EdgePrediction::Exact(0),
    ))
}

/// The full star on `[t+1]` plus the colex-first `r` sets of the star on
/// `[t+2, 2t+2]` that avoid `[t+1]`. Exactly `r · C(k,t) · d` edges.
pub fn star_plus_star(p: Params, r: u128) -> Result<Construction> {
    let c1 = interval(p, 1, p.t + 1)?;
    let c2 = interval(p, p.t + 2, 2 * p.t + 2)?;
    star_plus_star_with_centers(p, r, &c1, &c2)
}

/// [`star_plus_star`] with explicit disjoint `(t+1)`-set centers.
pub fn star_plus_star_with_centers(
    p: Params,
    r: u128,
    c1: &KSet,
    c2: &KSet,
) -> Result<Construction> {
    if p.k < 2 * p.t + 2 {
        return usage(format!(
            "star-plus-star needs k >= 2t+2, got k={} t={}",
            p.k, p.t
        ));
    }
    if 2 * p.t + 2 > p.n {
        return usage("ground set too small for two disjoint centers");
    }
    for c in [c1, c2] {
        if c.ground() != p.n || c.len() != p.t as usize + 1 {
            return usage(format!("centers must be {}-subsets of [{}]", p.t + 1, p.n));
        }
    }
    if !c1.is_disjoint(c2) {
        return usage("star centers must be disjoint");
    }
    let second_size = binomial(p.ni() - 2 * p.ti() - 2, p.ki() - p.ti() - 1)?;
    if r > second_size {
        return usage(format!(
            "r={r} exceeds the second star's {second_size} sets"
        ));
    }
    let mut members = star(p, c1, &KSet::empty(p.n)?);
    members.extend(star(p, c2, c1).into_iter().take(r as usize));
    let family = Family::new(p.n, p.k, members)?;
    let predicted = mul(
        mul(r, binomial(p.ki(), p.ti())?, "edges")?,
        star_link_degree(p)?,
        "edges",
    )?;
    Ok(Construction::new(
        family,
        ConstructionKind::StarPlusStar,
        p,
        Some(r),
        EdgePrediction::Exact(predicted),
    ))
}

/// Outcome of [`clique_construction`].
#[derive(Clone, Debug)]
pub struct CliqueOutcome {
    pub construction: Construction,
    /// Smallest `x` with `C(x,k) >= r + C(x,t)·C(n,k-2t-1)`.
    pub x: u32,
    /// Number of sets taken from the dense part `C([t+2, t+1+x], k)`.
    pub dense_part: usize,
}

/// `C(x,k) >= r + C(x,t)·C(n,k-2t-1)`.
pub fn clique_condition(p: Params, r: u128, x: u32) -> Result<bool> {
    let lhs = binomial(x as i64, p.ki())?;
    let rhs = mul(
        binomial(x as i64, p.ti())?,
        binomial(p.ni(), p.ki() - 2 * p.ti() - 1)?,
        "clique condition",
    )?;
    Ok(lhs >= r.saturating_add(rhs))
}

/// Star on `[t+1]` thinned to the sets meeting the window `[t+2, t+1+x]` in
/// fewer than `t` elements, topped up to `C(n-t-1,k-t-1) + r` sets with
/// colex-first `k`-subsets of the window. All `t`-pairs lie inside the
/// window part, so the count is at most `½ C(x,k) C(k,t) C(x-k,k-t)`.
pub fn clique_construction(p: Params, r: u128) -> Result<CliqueOutcome> {
    let (n, k, t) = (p.ni(), p.ki(), p.ti());
    if k < 2 * t + 1 {
        return usage(format!(
            "clique construction needs k >= 2t+1, got k={k} t={t}"
        ));
    }
    if r == 0 {
        return usage("clique construction needs r >= 1");
    }
    let max_x = p.n - p.t - 1;
    let mut x = None;
    for cand in 1..=max_x {
        if clique_condition(p, r, cand)? {
            x = Some(cand);
            break;
        }
    }
    let x = x.ok_or_else(|| {
        Error::Infeasible(format!(
            "no x <= n-t-1 = {max_x} satisfies C(x,k) >= r + C(x,t)C(n,k-2t-1) for r={r}"
        ))
    })?;
    let ell = binomial(n - t - 1, k - t - 1)? + r;
    let window = interval(p, p.t + 2, p.t + 1 + x)?;
    let thinned: Vec<KSet> = star(p, &interval(p, 1, p.t + 1)?, &KSet::empty(p.n)?)
        .into_iter()
        .filter(|f| f.meet(&window) < p.t as usize)
        .collect();
    let fill = ell - thinned.len() as u128;
    let window_elems = window.to_vec();
    let dense: Vec<KSet> = crate::enumerate::SubsetsOf::colex(p.n, &window_elems, p.k as usize)
        .take(fill as usize)
        .collect();
    if (dense.len() as u128) < fill {
        return Err(Error::Internal(format!(
            "window holds {} sets, need {fill}",
            dense.len()
        )));
    }
    let dense_part = dense.len();
    let mut members = thinned;
    members.extend(dense);
    let family = Family::new(p.n, p.k, members)?;
    let bound = mul(
        mul(binomial(x as i64, k)?, binomial(k, t)?, "clique bound")?,
        binomial(x as i64 - k, k - t)?,
        "clique bound",
    )? / 2;
    let construction = Construction::new(
        family,
        ConstructionKind::CliqueConstruction,
        p,
        Some(r),
        EdgePrediction::AtMost(bound),
    );
    Ok(CliqueOutcome {
        construction,
        x,
        dense_part,
    })
}

/// Threshold above which [`sharpness_construction`] beats
/// [`star_plus_star`]: `C(n-2t-1,k-2t-1)·(C(k,t)-1)`.
pub fn sharpness_threshold(p: Params) -> Result<u128> {
    let (n, k, t) = (p.ni(), p.ki(), p.ti());
    mul(
        binomial(n - 2 * t - 1, k - 2 * t - 1)?,
        binomial(k, t)? - 1,
        "sharpness threshold",
    )
}

/// `G1 ∪ G2'` where `G1` is the star on `[t+1]` minus the sets containing
/// `[t+2, 2t+1]`, and `G2'` is the colex-first `C(n-2t-1,k-2t-1) + r` sets
/// containing `[t+2, 2t+2]` and avoiding `[t+1]`. Exactly
/// `(r + C(n-2t-1,k-2t-1))·(C(k,t)-1)·d` edges.
pub fn sharpness_construction(p: Params, r: u128) -> Result<Construction> {
    let (n, k, t) = (p.ni(), p.ki(), p.ti());
    if k < 2 * t + 1 {
        return usage(format!(
            "sharpness construction needs k >= 2t+1, got k={k} t={t}"
        ));
    }
    if 2 * t + 2 > n {
        return usage("sharpness construction needs n >= 2t+2");
    }
    let c1 = interval(p, 1, p.t + 1)?;
    let blocker = interval(p, p.t + 2, 2 * p.t + 1)?;
    let c2 = interval(p, p.t + 2, 2 * p.t + 2)?;
    let base = binomial(n - 2 * t - 1, k - 2 * t - 1)?;
    let take = base + r;
    let available = binomial(n - 2 * t - 2, k - t - 1)?;
    if take > available {
        return usage(format!(
            "second star has {available} sets, need C(n-2t-1,k-2t-1)+r = {take}"
        ));
    }
    let mut members: Vec<KSet> = star(p, &c1, &KSet::empty(p.n)?)
        .into_iter()
        .filter(|g| !blocker.is_subset(g))
        .collect();
    members.extend(star(p, &c2, &c1).into_iter().take(take as usize));
    let family = Family::new(p.n, p.k, members)?;
    let predicted = mul(
        mul(take, binomial(k, t)? - 1, "sharpness edges")?,
        star_link_degree(p)?,
        "sharpness edges",
    )?;
    let mut c = Construction::new(
        family,
        ConstructionKind::SharpnessConstruction,
        p,
        Some(r),
        EdgePrediction::Exact(predicted),
    );
    let threshold = sharpness_threshold(p)?;
    if r <= threshold {
        c.spec.notes.push(format!(
            "r={r} <= C(n-2t-1,k-2t-1)(C(k,t)-1) = {threshold}: no improvement over star-plus-star is claimed"
        ));
    }
    Ok(c)
}

/// Maximal family with pairwise intersections at most `t-1`, grown greedily
/// in colex order. It is `t`-avoiding.
pub fn greedy_packing(p: Params) -> Result<Construction> {
    if p.t == 0 {
        return usage("packing needs t >= 1");
    }
    let limit = p.t as usize - 1;
    let mut members: Vec<KSet> = Vec::new();
    for s in all_ksets(p.n, p.k) {
        if members.iter().all(|m| m.meet(&s) <= limit) {
            members.push(s);
        }
    }
    let family = Family::new(p.n, p.k, members)?;
    Ok(Construction::new(
        family,
        ConstructionKind::GreedyPacking,
        p,
        None,
        EdgePrediction::Exact(0),
    ))
}

/// First `m` `k`-sets in lexicographic order.
pub fn lex_family(p: Params, m: u128) -> Result<Construction> {
    let total = binomial(p.ni(), p.ki())?;
    if m > total {
        return usage(format!("m={m} exceeds C(n,k)={total}"));
    }
    let family = Family::new(p.n, p.k, all_ksets_lex(p.n, p.k).take(m as usize).collect())?;
    Ok(Construction::new(
        family,
        ConstructionKind::LexFamily,
        p,
        Some(m),
        EdgePrediction::Unknown,
    ))
}

/// First `m` `k`-sets in colex order: all of `C([x], k)` when `m = C(x, k)`.
pub fn colex_family(p: Params, m: u128) -> Result<Construction> {
    let family = crate::kk::colex_segment(m, p.n, p.k)?;
    Ok(Construction::new(
        family,
        ConstructionKind::ColexSegment,
        p,
        Some(m),
        EdgePrediction::Unknown,
    ))
}

/// Whole `(t+1)`-stars on the consecutive disjoint centers
/// `[1, t+1], [t+2, 2t+2], ...`, in order and without repeats, truncated to
/// `ell` sets. `None` when all stars together are smaller than `ell`.
pub fn disjoint_stars(p: Params, ell: u128) -> Result<Option<Construction>> {
    let width = p.t + 1;
    let mut members = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut j = 0;
    while (j + 1) * width <= p.n && (members.len() as u128) < ell {
        let center = interval(p, j * width + 1, (j + 1) * width)?;
        for s in star(p, &center, &KSet::empty(p.n)?) {
            if members.len() as u128 == ell {
                break;
            }
            if seen.insert(s.clone()) {
                members.push(s);
            }
        }
        j += 1;
    }
    if (members.len() as u128) < ell {
        return Ok(None);
    }
    let family = Family::new(p.n, p.k, members)?;
    Ok(Some(Construction::new(
        family,
        ConstructionKind::DisjointStars,
        p,
        None,
        EdgePrediction::Unknown,
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u32, k: u32, t: u32) -> Params {
        Params::new(n, k, t).unwrap()
    }

    #[test]
    fn full_star_examples() {
        let c = full_star(p(6, 3, 1), None).unwrap();
        assert_eq!(c.family.len(), 4);
        assert_eq!(c.verify().unwrap(), 0);
        assert_eq!(full_star(p(10, 4, 1), None).unwrap().family.len(), 28);
        // a star on {1,2} whose sets would need more room than [n] offers
        let c = full_star(p(3, 3, 0), Some(&KSet::new(3, &[2]).unwrap())).unwrap();
        assert_eq!(c.family.len(), 1);
        assert!(full_star(p(6, 3, 1), Some(&KSet::new(6, &[1]).unwrap())).is_err());
    }

    #[test]
    fn full_star_is_its_own_restriction() {
        let pp = p(9, 4, 1);
        let a1 = full_star(pp, None).unwrap().family;
        let center = KSet::new(9, &[1, 2]).unwrap();
        assert_eq!(a1.restrict_containing(&center), a1);
        assert_eq!(a1.link(&center).len() as u128, binomial(7, 2).unwrap());
    }

    #[test]
    fn star_plus_star_examples() {
        let c = star_plus_star(p(20, 5, 1), 1).unwrap();
        assert_eq!(c.spec.predicted_edges, EdgePrediction::Exact(390));
        assert_eq!(c.verify().unwrap(), 390);
        let c = star_plus_star(p(12, 5, 1), 2).unwrap();
        assert_eq!(c.spec.predicted_edges, EdgePrediction::Exact(100));
        assert_eq!(c.verify().unwrap(), 100);
        let c = star_plus_star(p(12, 5, 1), 0).unwrap();
        assert_eq!(c.verify().unwrap(), 0);
        assert_eq!(c.family.len() as u128, binomial(10, 3).unwrap());
        assert!(star_plus_star(p(12, 5, 1), 10_000).is_err());
        assert!(star_plus_star(p(12, 3, 1), 1).is_err());
    }

    #[test]
    fn star_plus_star_matrix() {
        for n in 8..=16u32 {
            for k in 2..=6u32 {
                for t in 0..=2u32 {
                    if k < 2 * t + 2 || k > n || 2 * t + 2 > n {
                        continue;
                    }
                    let pp = p(n, k, t);
                    for r in 0..=5u128 {
                        if let Ok(c) = star_plus_star(pp, r) {
                            c.verify().unwrap();
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn clique_construction_properties() {
        let pp = p(20, 5, 1);
        for r in [1u128, 5, 40] {
            let out = clique_construction(pp, r).unwrap();
            assert!(clique_condition(pp, r, out.x).unwrap());
            assert!(!clique_condition(pp, r, out.x - 1).unwrap());
            let c = &out.construction;
            assert_eq!(c.family.len() as u128, binomial(18, 3).unwrap() + r);
            c.verify().unwrap();
            // every t-pair sits inside the window part
            let window = KSet::interval(20, 3, 2 + out.x).unwrap();
            let m = c.family.members();
            for i in 0..m.len() {
                for j in i + 1..m.len() {
                    if m[i].meet(&m[j]) == 1 {
                        assert!(m[i].is_subset(&window) && m[j].is_subset(&window));
                    }
                }
            }
        }
        assert!(matches!(
            clique_construction(p(9, 5, 1), 1),
            Err(Error::Infeasible(_))
        ));
        assert!(clique_construction(pp, 0).is_err());
    }

    #[test]
    fn sharpness_examples() {
        let pp = p(23, 5, 1);
        let threshold = sharpness_threshold(pp).unwrap();
        assert_eq!(threshold, 760);
        let c = sharpness_construction(pp, threshold + 1).unwrap();
        assert!(c.spec.notes.is_empty());
        let edges = c.verify().unwrap() as u128;
        let d = star_link_degree(pp).unwrap();
        assert_eq!(edges, (threshold + 1 + 190) * 4 * d);
        assert!(edges < (threshold + 1) * 5 * d);
        let below = sharpness_construction(p(14, 5, 1), 1).unwrap();
        assert_eq!(below.spec.notes.len(), 1);
        below.verify().unwrap();
    }

    #[test]
    fn sharpness_parts_are_independent() {
        let pp = p(14, 5, 1);
        let c = sharpness_construction(pp, 3).unwrap();
        let one_two = KSet::new(14, &[1, 2]).unwrap();
        let g1 = c.family.restrict_containing(&one_two);
        let g2 = c.family.minus(&g1);
        assert_eq!(g1.count_t_pairs(1).unwrap(), 0);
        assert_eq!(g2.count_t_pairs(1).unwrap(), 0);
    }

    #[test]
    fn packing_examples() {
        let c = greedy_packing(p(6, 3, 1)).unwrap();
        assert!(!c.family.is_empty());
        assert_eq!(c.verify().unwrap(), 0);
        for (n, k, t) in [(8, 3, 2), (9, 4, 2), (7, 2, 1), (10, 4, 3)] {
            let f = greedy_packing(p(n, k, t)).unwrap().family;
            let m = f.members();
            for i in 0..m.len() {
                for j in i + 1..m.len() {
                    assert!(m[i].meet(&m[j]) < t as usize);
                }
            }
        }
        assert!(greedy_packing(p(6, 3, 0)).is_err());
    }

    #[test]
    fn lex_examples() {
        assert!(lex_family(p(5, 2, 1), 0).unwrap().family.is_empty());
        assert_eq!(lex_family(p(5, 2, 1), 10).unwrap().family.len(), 10);
        let f = lex_family(p(5, 2, 1), 3).unwrap().family;
        assert_eq!(
            f,
            Family::from_lists(5, 2, &[&[1, 2], &[1, 3], &[1, 4]]).unwrap()
        );
        assert!(lex_family(p(5, 2, 1), 11).is_err());
    }

    #[test]
    fn disjoint_stars_fill() {
        let pp = p(9, 4, 1);
        let c = disjoint_stars(pp, 40).unwrap().unwrap();
        assert_eq!(c.family.len(), 40);
        assert!(disjoint_stars(pp, 10_000).unwrap().is_none());
    }
}
