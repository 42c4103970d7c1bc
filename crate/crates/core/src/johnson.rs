//! The generalized Johnson graph `G(n, k, t)`: vertices are the `k`-subsets
//! of `[n]`, adjacent when they meet in exactly `t` elements.
//!
//! Queries work on the implicit graph. [`JohnsonGraph`] materializes small
//! instances (vertices in colex order) for the exact searches.

use serde::Serialize;

use crate::binom::{binomial, mul};
use crate::enumerate::{all_ksets, colex_rank, SubsetsOf};
use crate::error::{usage, Error, Result};
use crate::graph::{maximum_independent_set, DenseGraph};
use crate::setfam::{Element, Family, KSet, Params};

/// Largest vertex count the explicit graph will materialize.
pub const MAX_EXPLICIT_VERTICES: usize = 8192;

/// Default node-expansion cap for exact searches.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct JohnsonParams {
    pub params: Params,
    /// `C(n, k)`
    pub vertex_count: u128,
    /// `C(k, t) · C(n - k, k - t)`
    pub degree: u128,
    pub edge_count: u128,
}

pub fn johnson_params(p: Params) -> Result<JohnsonParams> {
    let (n, k, t) = (p.ni(), p.ki(), p.ti());
    let vertex_count = binomial(n, k)?;
    let degree = mul(binomial(k, t)?, binomial(n - k, k - t)?, "Johnson degree")?;
    let edge_count = mul(vertex_count, degree, "Johnson edge count")? / 2;
    Ok(JohnsonParams {
        params: p,
        vertex_count,
        degree,
        edge_count,
    })
}

/// Spectrum of `G(n, k, t)` as `(eigenvalue, multiplicity)` pairs, one per
/// eigenspace `V_j` of the Johnson scheme, `j = 0..=min(k, n - k)`. The
/// `j = 0` entry is the degree.
pub fn eigenvalues(p: Params) -> Result<Vec<(i128, u128)>> {
    let n = p.ni();
    // J(n, k) and J(n, n - k) are isomorphic with the same distances
    let k = p.ki().min(n - p.ki());
    let dist = p.ki() - p.ti();
    let overflow = || Error::Overflow(format!("eigenvalues of G{p}"));
    let mut out = Vec::with_capacity(k as usize + 1);
    for j in 0..=k {
        let mut value: i128 = 0;
        for h in 0..=dist.min(j) {
            let term = [
                binomial(j, h)?,
                binomial(k - j, dist - h)?,
                binomial(n - k - j, dist - h)?,
            ]
            .into_iter()
            .try_fold(1u128, |acc, x| acc.checked_mul(x))
            .and_then(|x| i128::try_from(x).ok())
            .ok_or_else(overflow)?;
            value = if h % 2 == 0 {
                value.checked_add(term)
            } else {
                value.checked_sub(term)
            }
            .ok_or_else(overflow)?;
        }
        let mult = binomial(n, j)? - binomial(n, j - 1)?;
        out.push((value, mult));
    }
    Ok(out)
}

/// Smallest eigenvalue of `G(n, k, t)`.
pub fn min_eigenvalue(p: Params) -> Result<i128> {
    Ok(eigenvalues(p)?
        .into_iter()
        .map(|(v, _)| v)
        .min()
        .expect("at least one eigenspace"))
}

/// Spectral lower bound on the edges induced by any `size` vertices of a
/// `D`-regular graph on `N` vertices with smallest eigenvalue `λ`:
/// `2e >= D·s²/N + λ·(s - s²/N)`.
pub fn spectral_edge_bound(p: Params, size: u128) -> Result<u128> {
    let jp = johnson_params(p)?;
    let lambda = min_eigenvalue(p)?;
    let overflow = || Error::Overflow(format!("spectral bound for G{p}"));
    let s = i128::try_from(size).map_err(|_| overflow())?;
    let order = i128::try_from(jp.vertex_count).map_err(|_| overflow())?;
    let degree = i128::try_from(jp.degree).map_err(|_| overflow())?;
    if s > order {
        return usage(format!("{size} vertices requested from {order}"));
    }
    let num = s
        .checked_mul(s)
        .and_then(|ss| degree.checked_mul(ss))
        .and_then(|a| {
            s.checked_mul(order)
                .and_then(|b| b.checked_sub(s * s))
                .and_then(|b| lambda.checked_mul(b))
                .and_then(|b| a.checked_add(b))
        })
        .ok_or_else(overflow)?;
    if num <= 0 {
        return Ok(0);
    }
    let den = 2 * order;
    Ok(((num + den - 1) / den) as u128)
}

fn check_vertex(v: &KSet, p: Params) -> Result<()> {
    if v.ground() != p.n || v.len() != p.k as usize {
        return usage(format!("{v} is not a {}-subset of [{}]", p.k, p.n));
    }
    Ok(())
}

/// Every `k`-set meeting `v` in exactly `t` elements, in colex order.
pub fn neighbors(v: &KSet, p: Params) -> Result<Family> {
    check_vertex(v, p)?;
    let inside = v.to_vec();
    let outside: Vec<Element> = (1..=p.n).filter(|e| !v.contains(*e)).collect();
    let mut out = Vec::new();
    for x in SubsetsOf::colex(p.n, &inside, p.t as usize) {
        for y in SubsetsOf::colex(p.n, &outside, (p.k - p.t) as usize) {
            out.push(x.union(&y));
        }
    }
    out.sort();
    Family::new(p.n, p.k, out)
}

/// `N_B`: the `k`-sets containing the `(t+1)`-set `c` that meet `b` in
/// exactly `t` elements.
pub fn star_neighborhood(b: &KSet, c: &KSet, p: Params) -> Result<Family> {
    check_vertex(b, p)?;
    if c.ground() != p.n || c.len() != p.t as usize + 1 {
        return usage(format!(
            "center {c} must be a {}-subset of [{}]",
            p.t + 1,
            p.n
        ));
    }
    if c.is_subset(b) {
        return usage(format!("{b} contains the center {c}"));
    }
    let shared = b.meet(c);
    let mut out = Vec::new();
    if shared <= p.t as usize && p.k > p.t {
        let need = p.t as usize - shared;
        let from_b: Vec<Element> = b.difference(c).to_vec();
        let free: Vec<Element> = (1..=p.n)
            .filter(|e| !b.contains(*e) && !c.contains(*e))
            .collect();
        let rest = (p.k - p.t - 1) as usize;
        if need <= rest {
            for x in SubsetsOf::colex(p.n, &from_b, need) {
                for y in SubsetsOf::colex(p.n, &free, rest - need) {
                    out.push(c.union(&x).union(&y));
                }
            }
        }
    }
    out.sort();
    Family::new(p.n, p.k, out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaRegime {
    /// `C(n-t-1, k-t-1)`, proven only for `n` beyond an unspecified `n₀`.
    ExactFormula,
    /// Only the order `Θ(n^t)` is known (`k <= 2t+1`).
    ThetaNt,
    /// Certified by exhaustive search.
    ComputedExact,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlphaValue {
    /// Absent when only an order of magnitude is known.
    pub value: Option<u128>,
    pub regime: AlphaRegime,
    pub note: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlphaMode {
    Formula,
    Exact { budget: u64 },
}

/// Independence number of `G(n, k, t)`.
pub fn alpha(p: Params, mode: AlphaMode) -> Result<AlphaValue> {
    match mode {
        AlphaMode::Formula if p.k > 2 * p.t + 1 => Ok(AlphaValue {
            value: Some(binomial(p.ni() - p.ti() - 1, p.ki() - p.ti() - 1)?),
            regime: AlphaRegime::ExactFormula,
            note: "C(n-t-1,k-t-1); holds for n > n0, with n0 unknown, so it is a reference value at fixed n"
                .into(),
        }),
        AlphaMode::Formula => Ok(AlphaValue {
            value: None,
            regime: AlphaRegime::ThetaNt,
            note: "k <= 2t+1: alpha = Theta(n^t), no closed form".into(),
        }),
        AlphaMode::Exact { budget } => {
            let (value, _) = independence_number(p, budget)?;
            Ok(AlphaValue {
                value: Some(value as u128),
                regime: AlphaRegime::ComputedExact,
                note: "maximum independent set search".into(),
            })
        }
    }
}

/// Exact independence number with a maximum independent family as witness.
pub fn independence_number(p: Params, budget: u64) -> Result<(usize, Family)> {
    let jg = JohnsonGraph::build(p)?;
    // vertex-transitive, so some maximum independent set contains vertex 0
    let out = maximum_independent_set(&jg.graph, Some(0), budget);
    if !out.complete {
        return Err(Error::Budget {
            budget,
            lower: out.set.len() as u64,
            upper: out.upper as u64,
        });
    }
    let witness = jg.family_of(&out.set);
    Ok((out.set.len(), witness))
}

/// Materialized `G(n, k, t)` with vertices in colex order, so a vertex's
/// index is its colex rank.
#[derive(Clone, Debug)]
pub struct JohnsonGraph {
    pub params: Params,
    pub vertices: Vec<KSet>,
    pub graph: DenseGraph,
}

impl JohnsonGraph {
    pub fn build(p: Params) -> Result<Self> {
        let count = binomial(p.ni(), p.ki())?;
        if count > MAX_EXPLICIT_VERTICES as u128 {
            return usage(format!("G({},{},{}) has {count} vertices, above the explicit limit {MAX_EXPLICIT_VERTICES}", p.n, p.k, p.t));
        }
        let vertices: Vec<KSet> = all_ksets(p.n, p.k).collect();
        let t = p.t as usize;
        let graph =
            DenseGraph::from_predicate(vertices.len(), |i, j| vertices[i].meet(&vertices[j]) == t);
        Ok(JohnsonGraph {
            params: p,
            vertices,
            graph,
        })
    }

    pub fn index_of(&self, v: &KSet) -> usize {
        colex_rank(v) as usize
    }

    pub fn family_of(&self, indices: &[usize]) -> Family {
        let members = indices.iter().map(|&i| self.vertices[i].clone()).collect();
        Family::from_unique(self.params.n, self.params.k, members)
    }
}

#[cfg(test)]
mod tests {
    #[test]
    fn spectrum_annihilates_adjacency() {
        for (n, k, t) in [
            (8, 3, 1),
            (8, 3, 2),
            (8, 3, 0),
            (7, 3, 1),
            (7, 4, 2),
            (6, 4, 3),
            (5, 3, 1),
            (6, 2, 0),
            (9, 4, 1),
        ] {
            let p = Params::new(n, k, t).unwrap();
            let jg = JohnsonGraph::build(p).unwrap();
            let order = jg.graph.order();
            let spec = eigenvalues(p).unwrap();
            assert_eq!(spec.iter().map(|&(_, m)| m).sum::<u128>(), order as u128);
            assert_eq!(
                spec.iter().map(|&(v, m)| v * m as i128).sum::<i128>(),
                0,
                "trace"
            );
            let sq: i128 = spec.iter().map(|&(v, m)| v * v * m as i128).sum();
            assert_eq!(sq, 2 * jg.graph.edge_count() as i128, "trace of A^2");
            // the product of (A - λI) over distinct eigenvalues vanishes
            let mut distinct: Vec<i128> = spec.iter().map(|&(v, _)| v).collect();
            distinct.sort();
            distinct.dedup();
            let adj: Vec<Vec<i128>> = (0..order)
                .map(|i| {
                    (0..order)
                        .map(|j| jg.graph.adjacent(i, j) as i128)
                        .collect()
                })
                .collect();
            let mut prod: Vec<Vec<i128>> = (0..order)
                .map(|i| (0..order).map(|j| (i == j) as i128).collect())
                .collect();
            for &lambda in &distinct {
                let next = (0..order)
                    .map(|i| {
                        (0..order)
                            .map(|j| {
                                (0..order)
                                    .map(|l| {
                                        prod[i][l] * (adj[l][j] - if l == j { lambda } else { 0 })
                                    })
                                    .sum()
                            })
                            .collect()
                    })
                    .collect();
                prod = next;
            }
            assert!(prod.iter().flatten().all(|&x| x == 0), "G{p}");
        }
    }

    #[test]
    fn spectral_bound_examples() {
        let p = Params::new(8, 3, 1).unwrap();
        assert_eq!(min_eigenvalue(p).unwrap(), -5);
        assert_eq!(spectral_edge_bound(p, 20).unwrap(), 75);
        assert_eq!(spectral_edge_bound(p, 56).unwrap(), 840);
        assert_eq!(
            spectral_edge_bound(Params::new(8, 3, 0).unwrap(), 16).unwrap(),
            0
        );
    }

    use super::*;

    fn p(n: u32, k: u32, t: u32) -> Params {
        Params::new(n, k, t).unwrap()
    }

    #[test]
    fn closed_forms() {
        let j = johnson_params(p(5, 2, 1)).unwrap();
        assert_eq!((j.vertex_count, j.degree, j.edge_count), (10, 6, 30));
        let j = johnson_params(p(5, 2, 0)).unwrap();
        assert_eq!((j.degree, j.edge_count), (3, 15));
        let j = johnson_params(p(4, 4, 2)).unwrap();
        assert_eq!((j.vertex_count, j.degree, j.edge_count), (1, 0, 0));
    }

    #[test]
    fn neighbor_examples() {
        let v = KSet::new(5, &[1, 2]).unwrap();
        assert_eq!(neighbors(&v, p(5, 2, 1)).unwrap().len(), 6);
        let v = KSet::new(6, &[1, 2, 3]).unwrap();
        let nb = neighbors(&v, p(6, 3, 0)).unwrap();
        assert_eq!(nb, Family::from_lists(6, 3, &[&[4, 5, 6]]).unwrap());
        assert!(neighbors(&KSet::new(5, &[1]).unwrap(), p(5, 2, 1)).is_err());
    }

    #[test]
    fn neighbors_by_filtering() {
        for n in 1..=9u32 {
            for k in 1..=n.min(4) {
                for t in 0..k {
                    let pp = p(n, k, t);
                    let all: Vec<KSet> = all_ksets(n, k).collect();
                    for v in all.iter().step_by(3) {
                        let want: Vec<KSet> = all
                            .iter()
                            .filter(|u| u.meet(v) == t as usize)
                            .cloned()
                            .collect();
                        assert_eq!(neighbors(v, pp).unwrap().members(), &want[..]);
                    }
                }
            }
        }
    }

    #[test]
    fn star_neighborhood_sizes() {
        let pp = p(20, 5, 1);
        let c = KSet::new(20, &[1, 2]).unwrap();
        let b = KSet::new(20, &[3, 4, 5, 6, 7]).unwrap();
        let nb = star_neighborhood(&b, &c, pp).unwrap();
        assert_eq!(nb.len(), 390);
        // enumeration oracle
        let brute = all_ksets(20, 5)
            .filter(|k| c.is_subset(k) && k.meet(&b) == 1)
            .count();
        assert_eq!(brute, 390);
        let b2 = KSet::new(20, &[1, 4, 5, 6, 7]).unwrap();
        let nb2 = star_neighborhood(&b2, &c, pp).unwrap();
        let brute2 = all_ksets(20, 5)
            .filter(|k| c.is_subset(k) && k.meet(&b2) == 1)
            .count();
        assert_eq!(nb2.len(), brute2);
        // the gap in order n^{k-t-1} vs n^{k-2t-1} only shows once n is large enough
        let big = p(30, 5, 1);
        let c30 = KSet::new(30, &[1, 2]).unwrap();
        let apart =
            star_neighborhood(&KSet::new(30, &[3, 4, 5, 6, 7]).unwrap(), &c30, big).unwrap();
        let touching =
            star_neighborhood(&KSet::new(30, &[1, 4, 5, 6, 7]).unwrap(), &c30, big).unwrap();
        assert_eq!(apart.len(), 5 * 253);
        assert!(touching.len() >= apart.len());
        assert!(!nb.is_empty());
        let inside = KSet::new(20, &[1, 2, 5, 6, 7]).unwrap();
        assert!(star_neighborhood(&inside, &c, pp).is_err());
        let pk = p(5, 5, 1);
        let b = KSet::new(5, &[1, 2, 3, 4, 5]).unwrap();
        assert!(star_neighborhood(&b, &KSet::new(5, &[1, 2]).unwrap(), pk).is_err());
    }

    #[test]
    fn star_neighborhood_too_small_ground_set() {
        let pp = p(6, 5, 1);
        let c = KSet::new(6, &[1, 2]).unwrap();
        let b = KSet::new(6, &[2, 3, 4, 5, 6]).unwrap();
        let got = star_neighborhood(&b, &c, pp).unwrap();
        let brute = all_ksets(6, 5)
            .filter(|k| c.is_subset(k) && k.meet(&b) == 1)
            .count();
        assert_eq!(got.len(), brute);
    }

    #[test]
    fn alpha_values() {
        let a = alpha(
            p(5, 2, 0),
            AlphaMode::Exact {
                budget: DEFAULT_BUDGET,
            },
        )
        .unwrap();
        assert_eq!(a.value, Some(4));
        let a = alpha(p(10, 4, 1), AlphaMode::Formula).unwrap();
        assert_eq!((a.value, a.regime), (Some(28), AlphaRegime::ExactFormula));
        let a = alpha(p(10, 3, 1), AlphaMode::Formula).unwrap();
        assert_eq!((a.value, a.regime), (None, AlphaRegime::ThetaNt));
    }

    #[test]
    fn alpha_g631_by_exhaustion() {
        let pp = p(6, 3, 1);
        let verts: Vec<KSet> = all_ksets(6, 3).collect();
        let mut best = 0;
        for mask in 0u32..1 << 20 {
            let chosen: Vec<&KSet> = (0..20)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| &verts[i])
                .collect();
            if chosen.len() <= best {
                continue;
            }
            let indep = chosen
                .iter()
                .enumerate()
                .all(|(i, a)| chosen[i + 1..].iter().all(|b| a.meet(b) != 1));
            if indep {
                best = chosen.len();
            }
        }
        let (value, witness) = independence_number(pp, DEFAULT_BUDGET).unwrap();
        assert_eq!(value, best);
        assert_eq!(witness.count_t_pairs(1).unwrap(), 0);
    }

    #[test]
    fn exact_alpha_budget_error() {
        let err = alpha(p(9, 4, 1), AlphaMode::Exact { budget: 2 }).unwrap_err();
        assert!(matches!(err, Error::Budget { .. }));
    }
}
