//! Computing `ρ(ℓ)`: the fewest `t`-pairs over all families of `ℓ`
//! `k`-subsets of `[n]`.
//!
//! [`rho_exact`] certifies the minimum on the materialized graph, by plain
//! enumeration when `C(C(n,k), ℓ)` is small and by branch-and-bound
//! otherwise. [`rho_local_search`] gives uncertified upper bounds at any
//! scale without materializing the graph.
//!
//! Because `G(n,k,t)` is `D`-regular, a set `S` and its complement `T`
//! satisfy `e(S) = |E| - |T|·D + e(T)`, so only `ℓ <= N/2` is ever searched.

use std::collections::{HashMap, HashSet};
use std::sync::{Mutex, OnceLock};

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::binom::binomial;
use crate::bounds::construction_upper_bound;
use crate::error::{usage, Error, Result};
use crate::graph::{bits, maximum_independent_set, DenseGraph};
use crate::johnson::{min_eigenvalue, spectral_edge_bound, JohnsonGraph, DEFAULT_BUDGET};
use crate::setfam::{Family, KSet, Params};

/// Instances with at most this many candidate subsets are enumerated.
pub const EXHAUSTIVE_LIMIT: u128 = 10_000_000;

const INCUMBENT_ITERATIONS: u64 = 20_000;

/// Link Kneser graphs up to this order get exact supersaturation tables.
const KNESER_EXACT_LIMIT: u128 = 36;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exhaustive,
    BranchAndBound,
    LocalSearch,
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub params: Params,
    pub ell: u128,
    /// Induced `t`-pairs of the witness.
    pub value: u64,
    /// Proven lower bound on `ρ(ℓ)`; equals `value` when certified.
    pub lower: u64,
    pub certified: bool,
    pub witness: Family,
    pub nodes_expanded: u64,
    pub method: Method,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Enumeration below [`EXHAUSTIVE_LIMIT`], branch-and-bound above.
    Auto,
    Exhaustive,
    BranchAndBound,
}

#[derive(Clone, Copy, Debug)]
pub struct ExactOptions {
    /// Cap on search-node expansions.
    pub budget: u64,
    pub strategy: Strategy,
}

impl Default for ExactOptions {
    fn default() -> Self {
        ExactOptions {
            budget: DEFAULT_BUDGET,
            strategy: Strategy::Auto,
        }
    }
}

/// Certified `ρ(ℓ)` with the default strategy.
pub fn rho_exact(p: Params, ell: u128, budget: u64) -> Result<SolveResult> {
    rho_exact_with(
        p,
        ell,
        ExactOptions {
            budget,
            strategy: Strategy::Auto,
        },
    )
}

#[derive(Clone)]
struct Core {
    value: u64,
    lower: u64,
    set: Vec<usize>,
    nodes: u64,
    complete: bool,
    method: Method,
}

pub fn rho_exact_with(p: Params, ell: u128, opts: ExactOptions) -> Result<SolveResult> {
    let jg = JohnsonGraph::build(p)?;
    let order = jg.graph.order();
    if ell > order as u128 {
        return usage(format!("ell={ell} exceeds C(n,k)={order}"));
    }
    let ell = ell as usize;
    let m = ell.min(order - ell);
    let core = solve_reduced(&jg, m, opts)?;
    finish(&jg, ell, &core)
}

/// Certified `ρ(ℓ)` for every `ℓ = 0..=C(n,k)`, solving each complementary
/// pair of sizes once.
pub fn rho_exact_profile(p: Params, opts: ExactOptions) -> Result<Vec<SolveResult>> {
    let jg = JohnsonGraph::build(p)?;
    let order = jg.graph.order();
    let mut out: Vec<Option<SolveResult>> = vec![None; order + 1];
    for m in 0..=order / 2 {
        let core = solve_reduced(&jg, m, opts)?;
        out[m] = Some(finish(&jg, m, &core)?);
        if order - m != m {
            out[order - m] = Some(finish(&jg, order - m, &core)?);
        }
    }
    Ok(out
        .into_iter()
        .map(|r| r.expect("every size solved"))
        .collect())
}

fn solve_reduced(jg: &JohnsonGraph, m: usize, opts: ExactOptions) -> Result<Core> {
    let (g, p) = (&jg.graph, jg.params);
    let exhaustive = match opts.strategy {
        Strategy::Exhaustive => true,
        Strategy::BranchAndBound => false,
        Strategy::Auto => binomial(g.order() as i64, m as i64).is_ok_and(|c| c <= EXHAUSTIVE_LIMIT),
    };
    if exhaustive {
        return Ok(exhaustive_min(g, m, opts.budget));
    }
    let spectral = (0..=m as u128)
        .map(|q| spectral_edge_bound(p, q).map(|x| x as u64))
        .collect::<Result<Vec<_>>>()?;
    let greedy = greedy_incumbent(g, m);
    let polished = local_search_from(p, jg.family_of(&greedy), 0, INCUMBENT_ITERATIONS)?;
    let incumbent = if polished.value < g.induced_edges(&greedy) {
        polished.witness.iter().map(|v| jg.index_of(v)).collect()
    } else {
        greedy
    };
    let prep = Prepared {
        spectral,
        lambda: min_eigenvalue(p)? as f64,
        link: LinkBound::new(p, &jg.vertices, opts.budget)?,
    };
    Ok(run_with_stack(|| {
        branch_and_bound(g, &jg.vertices, prep, incumbent, m, opts.budget)
    }))
}

/// Maps a solution for `min(ℓ, N-ℓ)` back to size `ℓ` and recounts it.
fn finish(jg: &JohnsonGraph, ell: usize, core: &Core) -> Result<SolveResult> {
    let g = &jg.graph;
    let order = g.order();
    let (set, value, lower) = if ell == core.set.len() {
        (core.set.clone(), core.value, core.lower)
    } else {
        let chosen: HashSet<usize> = core.set.iter().copied().collect();
        let rest: Vec<usize> = (0..order).filter(|v| !chosen.contains(v)).collect();
        let shift = g.edge_count() - core.set.len() as u64 * g.degree(0) as u64;
        (rest, shift + core.value, shift + core.lower)
    };
    let witness = jg.family_of(&set);
    let recount = witness.count_t_pairs(jg.params.t)?;
    if recount != value || witness.len() != ell {
        return Err(Error::Internal(format!(
            "witness recount {recount} != reported {value}"
        )));
    }
    Ok(SolveResult {
        params: jg.params,
        ell: ell as u128,
        value,
        lower: if core.complete { value } else { lower },
        certified: core.complete,
        witness,
        nodes_expanded: core.nodes,
        method: core.method,
    })
}

fn run_with_stack<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    std::thread::scope(|s| {
        std::thread::Builder::new()
            .stack_size(256 << 20)
            .spawn_scoped(s, f)
            .expect("spawn search thread")
            .join()
            .expect("search thread panicked")
    })
}

struct Enumerator<'a> {
    g: &'a DenseGraph,
    m: usize,
    chosen: Vec<usize>,
    mask: Vec<u64>,
    best: u64,
    best_set: Vec<usize>,
    nodes: u64,
    budget: u64,
    aborted: bool,
}

impl Enumerator<'_> {
    fn walk(&mut self, from: usize, edges: u64) {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.aborted = true;
            return;
        }
        if self.chosen.len() == self.m {
            if edges < self.best {
                self.best = edges;
                self.best_set = self.chosen.clone();
            }
            return;
        }
        let last = self.g.order() - (self.m - self.chosen.len());
        for v in from..=last {
            let add: u64 = self
                .g
                .row(v)
                .iter()
                .zip(&self.mask)
                .map(|(a, b)| (a & b).count_ones() as u64)
                .sum();
            self.chosen.push(v);
            bits::set(&mut self.mask, v);
            self.walk(v + 1, edges + add);
            bits::clear(&mut self.mask, v);
            self.chosen.pop();
            if self.aborted {
                return;
            }
        }
    }
}

fn exhaustive_min(g: &DenseGraph, m: usize, budget: u64) -> Core {
    let mut e = Enumerator {
        g,
        m,
        chosen: Vec::with_capacity(m),
        mask: vec![0; g.words()],
        best: u64::MAX,
        best_set: Vec::new(),
        nodes: 0,
        budget,
        aborted: false,
    };
    e.walk(0, 0);
    if e.best == u64::MAX {
        // aborted before the first leaf: fall back to the first m vertices
        e.best_set = (0..m).collect();
        e.best = g.induced_edges(&e.best_set);
    }
    Core {
        value: e.best,
        lower: 0,
        set: e.best_set,
        nodes: e.nodes,
        complete: !e.aborted,
        method: Method::Exhaustive,
    }
}

const UNDECIDED: u8 = 0;
const IN: u8 = 1;
const OUT: u8 = 2;

/// Fewest edges in a graph on `q` vertices with independence number at
/// most `a`.
pub fn turan_edges(q: u64, a: u64) -> u64 {
    if q == 0 {
        return 0;
    }
    if a == 0 {
        return u64::MAX;
    }
    let (b, rem) = (q / a, q % a);
    rem * (b + 1) * b / 2 + (a - rem) * b * b.saturating_sub(1) / 2
}

/// Include/exclude search over vertices. The bound at a node is the
/// current edge count plus the larger of two completion bounds for the
/// vertices still to be chosen. The first takes them as cheaply as
/// possible from a fixed clique partition: the `j`-th vertex taken from
/// one clique costs its edges into the selection plus `j` edges inside the
/// clique. The second adds the smallest edge counts into the selection to
/// a bound on the edges among the new vertices: Turán, with the pool's
/// independence number capped by the number of cliques meeting it and by
/// `α` of the whole graph, or the spectral bound of the whole graph.
///
/// Branching is orbital: permutations of `[n]` preserving every block of
/// the partition generated by the chosen sets fix the selection, so when
/// the branch vertex is excluded, every undecided vertex with the same
/// intersection profile against the blocks is excluded with it.
struct BranchAndBound<'a> {
    g: &'a DenseGraph,
    verts: &'a [KSet],
    blocks: Vec<KSet>,
    m: usize,
    alpha: u64,
    /// Spectral lower bound on the edges among any `q` vertices.
    spectral: Vec<u64>,
    lambda: f64,
    shift: f64,
    cliques: Vec<Vec<u32>>,
    status: Vec<u8>,
    cnt: Vec<u32>,
    chosen: Vec<u32>,
    edges: u64,
    undecided: usize,
    best: u64,
    best_set: Vec<u32>,
    nodes: u64,
    budget: u64,
    aborted: bool,
    costs: Vec<u64>,
    plain: Vec<u64>,
    scratch: Vec<u32>,
    pool: Vec<u32>,
    dyn_cliques: Vec<Vec<u32>>,
    dyn_masks: Vec<u64>,
    link: Option<LinkBound>,
}

impl BranchAndBound<'_> {
    fn include(&mut self, v: usize) {
        self.status[v] = IN;
        self.undecided -= 1;
        self.edges += self.cnt[v] as u64;
        self.chosen.push(v as u32);
        for &u in self.g.neighbors(v) {
            self.cnt[u as usize] += 1;
        }
        if let Some(link) = &mut self.link {
            link.include(v);
        }
    }

    fn undo_include(&mut self, v: usize) {
        if let Some(link) = &mut self.link {
            link.undo_include(v);
        }
        for &u in self.g.neighbors(v) {
            self.cnt[u as usize] -= 1;
        }
        self.chosen.pop();
        self.edges -= self.cnt[v] as u64;
        self.undecided += 1;
        self.status[v] = UNDECIDED;
    }

    /// Lower bound on the edges the remaining picks add; `u64::MAX` when
    /// the pool cannot supply them.
    fn completion_bound(&mut self) -> u64 {
        let need = self.m - self.chosen.len();
        if need == 0 {
            return 0;
        }
        if let Some(link) = &mut self.link {
            let bound = link.bound(need, self.edges);
            if bound == u64::MAX || self.edges + bound >= self.best {
                return bound;
            }
        }
        let fixed = self.partition_bound(need, false);
        if fixed == u64::MAX || self.edges + fixed >= self.best {
            return fixed;
        }
        fixed.max(self.partition_bound(need, true))
    }

    /// Completion bound over the fixed clique partition, or over one built
    /// greedily from the undecided vertices in order of edges into the
    /// selection.
    fn partition_bound(&mut self, need: usize, dynamic: bool) -> u64 {
        if dynamic {
            self.pool.clear();
            self.pool.extend(
                (0..self.status.len() as u32).filter(|&v| self.status[v as usize] == UNDECIDED),
            );
            let cnt = &self.cnt;
            self.pool.sort_by_key(|&v| cnt[v as usize]);
            self.dyn_cliques.clear();
            self.dyn_masks.clear();
            let w = self.g.words();
            for &v in &self.pool {
                let row = self.g.row(v as usize);
                let slot = (0..self.dyn_cliques.len()).find(|&c| {
                    self.dyn_masks[c * w..(c + 1) * w]
                        .iter()
                        .zip(row)
                        .all(|(m, r)| m & !r == 0)
                });
                let c = match slot {
                    Some(c) => c,
                    None => {
                        self.dyn_cliques.push(Vec::new());
                        self.dyn_masks.extend(std::iter::repeat_n(0, w));
                        self.dyn_cliques.len() - 1
                    }
                };
                self.dyn_cliques[c].push(v);
                bits::set(&mut self.dyn_masks[c * w..(c + 1) * w], v as usize);
            }
        }
        self.costs.clear();
        self.plain.clear();
        let mut meeting = 0u64;
        let cliques = if dynamic {
            &self.dyn_cliques
        } else {
            &self.cliques
        };
        for clique in cliques {
            self.scratch.clear();
            self.scratch.extend(
                clique
                    .iter()
                    .filter(|&&v| self.status[v as usize] == UNDECIDED)
                    .map(|&v| self.cnt[v as usize]),
            );
            if self.scratch.is_empty() {
                continue;
            }
            meeting += 1;
            self.scratch.sort_unstable();
            self.costs.extend(
                self.scratch
                    .iter()
                    .enumerate()
                    .map(|(j, &c)| c as u64 + j as u64),
            );
            self.plain.extend(self.scratch.iter().map(|&c| c as u64));
        }
        if self.costs.len() < need {
            return u64::MAX;
        }
        let inner = turan_edges(need as u64, meeting.min(self.alpha)).max(self.spectral[need]);
        let cheapest = smallest_sum(&mut self.plain, need);
        smallest_sum(&mut self.costs, need)
            .max(cheapest.saturating_add(inner))
            .max(self.cauchy_schwarz(need, cheapest))
    }

    /// With `M = A - λI - cJ` positive semidefinite and `x = 1_S`,
    /// `x'Mx >= (x'M1_C)² / (1_C'M1_C)`, and `x'M1_C` is at least its
    /// value with the cheapest completion.
    fn cauchy_schwarz(&self, need: usize, cheapest: u64) -> u64 {
        let chosen = self.chosen.len() as f64;
        let s = chosen + need as f64;
        let base = self.lambda * s + self.shift * s * s;
        let a = 2.0 * self.edges as f64 - self.lambda * chosen - self.shift * chosen * chosen;
        let cross = a + cheapest as f64 - need as f64 * self.shift * chosen;
        let twice = if a > 1e-9 && cross > 0.0 {
            base + cross * cross / a
        } else {
            base
        };
        let total = (twice / 2.0 - 1e-6).ceil().max(0.0) as u64;
        total.saturating_sub(self.edges)
    }

    /// Fewest edges into the selection, then most undecided neighbours.
    fn pick(&self) -> usize {
        let mut best = usize::MAX;
        let mut key = (u32::MAX, 0usize);
        for v in 0..self.status.len() {
            if self.status[v] != UNDECIDED || self.cnt[v] > key.0 {
                continue;
            }
            let open = self
                .g
                .neighbors(v)
                .iter()
                .filter(|&&u| self.status[u as usize] == UNDECIDED)
                .count();
            if self.cnt[v] < key.0 || open > key.1 {
                best = v;
                key = (self.cnt[v], open);
            }
        }
        best
    }

    fn refine(&mut self, v: usize) {
        let c = &self.verts[v];
        let mut next = Vec::with_capacity(self.blocks.len() + 1);
        for b in &self.blocks {
            next.extend(
                [b.intersection(c), b.difference(c)]
                    .into_iter()
                    .filter(|x| !x.is_empty()),
            );
        }
        self.blocks = next;
    }

    /// Undecided vertices in the orbit of `v`, including `v`.
    fn orbit(&self, v: usize) -> Vec<usize> {
        if self.blocks.iter().all(|b| b.len() == 1) {
            return vec![v];
        }
        let profile: Vec<usize> = self.blocks.iter().map(|b| b.meet(&self.verts[v])).collect();
        (0..self.status.len())
            .filter(|&u| {
                self.status[u] == UNDECIDED
                    && self.cnt[u] == self.cnt[v]
                    && self
                        .blocks
                        .iter()
                        .zip(&profile)
                        .all(|(b, &x)| b.meet(&self.verts[u]) == x)
            })
            .collect()
    }

    fn search(&mut self) {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.aborted = true;
            return;
        }
        let need = self.m - self.chosen.len();
        if need == 0 {
            if self.edges < self.best {
                self.best = self.edges;
                self.best_set = self.chosen.clone();
            }
            return;
        }
        if self.undecided < need {
            return;
        }
        let bound = self.completion_bound();
        if bound == u64::MAX || self.edges + bound >= self.best {
            return;
        }
        let v = self.pick();
        let orbit = self.orbit(v);
        let saved = self
            .blocks
            .iter()
            .any(|b| b.len() > 1)
            .then(|| self.blocks.clone());
        if saved.is_some() {
            self.refine(v);
        }
        self.include(v);
        self.search();
        self.undo_include(v);
        if let Some(blocks) = saved {
            self.blocks = blocks;
        }
        if self.aborted {
            return;
        }
        for &u in &orbit {
            self.status[u] = OUT;
            if let Some(link) = &mut self.link {
                link.close(u);
            }
        }
        self.undecided -= orbit.len();
        self.search();
        self.undecided += orbit.len();
        for &u in &orbit {
            self.status[u] = UNDECIDED;
            if let Some(link) = &mut self.link {
                link.reopen(u);
            }
        }
    }
}

fn smallest_sum(xs: &mut [u64], count: usize) -> u64 {
    if count < xs.len() {
        xs.select_nth_unstable(count - 1);
    }
    xs[..count].iter().sum()
}

struct Prepared {
    spectral: Vec<u64>,
    lambda: f64,
    link: Option<LinkBound>,
}

/// A `t`-pair `{A, B}` is a disjoint pair in the link of `T = A ∩ B`, so
/// `e(S)` is the sum over `t`-sets `T` of the disjoint pairs in the link
/// of `T`. Each term is at least `f(d_T)`, where `d_T` counts members
/// through `T` and `f` is a convex lower bound on the Kneser
/// supersaturation function of `C([n] - T, k - t)`. The completion adds
/// `C(k, t)` to the `d_T` per new vertex, capped by the undecided vertices
/// through each `T`; with `f` convex the cheapest spread is greedy.
struct LinkBound {
    of_vertex: Vec<Vec<u32>>,
    per_vertex: usize,
    hull: Vec<f64>,
    step: Vec<f64>,
    inside: Vec<u32>,
    open: Vec<u32>,
    scratch: Vec<f64>,
}

impl LinkBound {
    fn new(p: Params, verts: &[KSet], budget: u64) -> Result<Option<LinkBound>> {
        // below t = k-1 the link tables come from the spectral bound or
        // tiny exact solves, and in practice never prune
        if p.t == 0 || p.t + 1 != p.k {
            return Ok(None);
        }
        let (lp, link_size) = (
            Params::new(p.n - p.t, p.k - p.t, 0)?,
            binomial(p.ni() - p.ti(), p.ki() - p.ti())?,
        );
        let floor = kneser_floor(lp, link_size, budget)?;
        let hull = convex_minorant(&floor);
        let step = hull.windows(2).map(|w| w[1] - w[0]).collect();
        let tsets: Vec<KSet> = crate::enumerate::all_ksets(p.n, p.t).collect();
        let index: std::collections::HashMap<&KSet, u32> = tsets
            .iter()
            .enumerate()
            .map(|(i, x)| (x, i as u32))
            .collect();
        let of_vertex = verts
            .iter()
            .map(|v| {
                crate::enumerate::SubsetsOf::colex(p.n, &v.to_vec(), p.t as usize)
                    .map(|x| index[&x])
                    .collect()
            })
            .collect();
        Ok(Some(LinkBound {
            of_vertex,
            per_vertex: binomial(p.ki(), p.ti())? as usize,
            hull,
            step,
            inside: vec![0; tsets.len()],
            open: vec![link_size as u32; tsets.len()],
            scratch: Vec::new(),
        }))
    }

    fn include(&mut self, v: usize) {
        for &x in &self.of_vertex[v] {
            self.inside[x as usize] += 1;
            self.open[x as usize] -= 1;
        }
    }

    fn undo_include(&mut self, v: usize) {
        for &x in &self.of_vertex[v] {
            self.inside[x as usize] -= 1;
            self.open[x as usize] += 1;
        }
    }

    fn close(&mut self, v: usize) {
        for &x in &self.of_vertex[v] {
            self.open[x as usize] -= 1;
        }
    }

    fn reopen(&mut self, v: usize) {
        for &x in &self.of_vertex[v] {
            self.open[x as usize] += 1;
        }
    }

    fn bound(&mut self, need: usize, edges: u64) -> u64 {
        let rounds = need * self.per_vertex;
        let mut total = 0.0;
        self.scratch.clear();
        for (x, &a) in self.inside.iter().enumerate() {
            let a = a as usize;
            total += self.hull[a];
            let room = (self.open[x] as usize).min(rounds);
            self.scratch.extend_from_slice(&self.step[a..a + room]);
        }
        if self.scratch.len() < rounds {
            return u64::MAX;
        }
        if rounds < self.scratch.len() {
            self.scratch
                .select_nth_unstable_by(rounds - 1, |a, b| a.total_cmp(b));
        }
        total += self.scratch[..rounds].iter().sum::<f64>();
        ((total - 1e-6).ceil().max(0.0) as u64).saturating_sub(edges)
    }
}

/// Lower bounds on the fewest disjoint pairs among `d` members of
/// `C([n], k)`, for `d = 0..=size`.
type FloorCache = Mutex<HashMap<(u32, u32), Vec<f64>>>;

fn kneser_floor(p: Params, size: u128, budget: u64) -> Result<Vec<f64>> {
    static CACHE: OnceLock<FloorCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().expect("cache lock").get(&(p.n, p.k)) {
        return Ok(hit.clone());
    }
    let floor: Vec<f64> = if p.k == 1 {
        (0..=size)
            .map(|d| (d * d.saturating_sub(1) / 2) as f64)
            .collect()
    } else if size <= KNESER_EXACT_LIMIT {
        (0..=size)
            .map(|d| rho_exact(p, d, budget).map(|r| r.lower as f64))
            .collect::<Result<_>>()?
    } else {
        (0..=size)
            .map(|d| spectral_edge_bound(p, d).map(|x| x as f64))
            .collect::<Result<_>>()?
    };
    cache
        .lock()
        .expect("cache lock")
        .insert((p.n, p.k), floor.clone());
    Ok(floor)
}

/// Largest convex function below the points `(d, f[d])`.
fn convex_minorant(f: &[f64]) -> Vec<f64> {
    let mut hull: Vec<usize> = Vec::new();
    for i in 0..f.len() {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // drop b when it lies on or above the chord from a to i
            if (f[b] - f[a]) * (i - a) as f64 >= (f[i] - f[a]) * (b - a) as f64 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(i);
    }
    let mut out = vec![0.0; f.len()];
    for w in hull.windows(2) {
        let (a, b) = (w[0], w[1]);
        for (i, slot) in out.iter_mut().enumerate().take(b + 1).skip(a) {
            *slot = f[a] + (f[b] - f[a]) * (i - a) as f64 / (b - a) as f64;
        }
    }
    if hull.len() == 1 {
        out[0] = f[0];
    }
    out
}

/// Greedy min-degree fill from vertex 0 followed by improving swaps.
fn greedy_incumbent(g: &DenseGraph, m: usize) -> Vec<usize> {
    let order = g.order();
    let mut inside = vec![false; order];
    let mut cnt = vec![0u32; order];
    let mut set = Vec::with_capacity(m);
    let add = |v: usize, inside: &mut Vec<bool>, cnt: &mut Vec<u32>, set: &mut Vec<usize>| {
        inside[v] = true;
        set.push(v);
        for &u in g.neighbors(v) {
            cnt[u as usize] += 1;
        }
    };
    for _ in 0..m {
        let v = (0..order)
            .filter(|&v| !inside[v])
            .min_by_key(|&v| cnt[v])
            .expect("m <= order");
        add(v, &mut inside, &mut cnt, &mut set);
    }
    loop {
        let mut improved = false;
        'outer: for slot in set.iter_mut() {
            let u = *slot;
            for v in 0..order {
                if inside[v] {
                    continue;
                }
                let delta = cnt[v] as i64 - g.adjacent(u, v) as i64 - cnt[u] as i64;
                if delta < 0 {
                    inside[u] = false;
                    for &w in g.neighbors(u) {
                        cnt[w as usize] -= 1;
                    }
                    *slot = v;
                    inside[v] = true;
                    for &w in g.neighbors(v) {
                        cnt[w as usize] += 1;
                    }
                    improved = true;
                    break 'outer;
                }
            }
        }
        if !improved {
            return set;
        }
    }
}

fn branch_and_bound(
    g: &DenseGraph,
    verts: &[KSet],
    prep: Prepared,
    incumbent: Vec<usize>,
    m: usize,
    budget: u64,
) -> Core {
    let order = g.order();
    let incumbent_value = g.induced_edges(&incumbent);
    if m <= 1 || incumbent_value == 0 {
        return Core {
            value: incumbent_value,
            lower: incumbent_value,
            set: incumbent,
            nodes: 1,
            complete: true,
            method: Method::BranchAndBound,
        };
    }
    let mis = maximum_independent_set(g, Some(0), budget);
    let cliques = g
        .greedy_clique_partition()
        .into_iter()
        .map(|c| c.into_iter().map(|v| v as u32).collect())
        .collect();
    let n = verts[0].ground();
    let mut bb = BranchAndBound {
        g,
        verts,
        blocks: vec![KSet::interval(n, 1, n).expect("non-empty ground set")],
        m,
        alpha: mis.upper as u64,
        spectral: prep.spectral,
        lambda: prep.lambda,
        shift: (g.degree(0) as f64 - prep.lambda) / order as f64,
        cliques,
        status: vec![UNDECIDED; order],
        cnt: vec![0; order],
        chosen: Vec::with_capacity(m),
        edges: 0,
        undecided: order,
        best: incumbent_value,
        best_set: incumbent.iter().map(|&v| v as u32).collect(),
        nodes: mis.nodes,
        budget,
        aborted: false,
        costs: Vec::with_capacity(order),
        plain: Vec::with_capacity(order),
        scratch: Vec::new(),
        pool: Vec::with_capacity(order),
        dyn_cliques: Vec::new(),
        dyn_masks: Vec::new(),
        link: prep.link,
    };
    let global = turan_edges(m as u64, bb.alpha).max(bb.spectral[m]);
    // the whole vertex set is one orbit
    bb.refine(0);
    bb.include(0);
    let root_bound = bb.completion_bound();
    let lower = if root_bound == u64::MAX {
        bb.best
    } else {
        (bb.edges + root_bound).max(global).min(bb.best)
    };
    if lower < bb.best {
        bb.search();
    }
    let set = bb.best_set.iter().map(|&v| v as usize).collect();
    Core {
        value: bb.best,
        lower,
        set,
        nodes: bb.nodes,
        complete: !bb.aborted,
        method: Method::BranchAndBound,
    }
}

/// Uncertified upper bound on `ρ(ℓ)` by simulated annealing over single
/// swaps, started from the best construction of size `ℓ`.
pub fn rho_local_search(p: Params, ell: u128, seed: u64, iterations: u64) -> Result<SolveResult> {
    let total = binomial(p.ni(), p.ki())?;
    if ell > total {
        return usage(format!("ell={ell} exceeds C(n,k)={total}"));
    }
    let start = match construction_upper_bound(p, ell)? {
        Some(c) => c.witness,
        None => crate::constructions::lex_family(p, ell)?.family,
    };
    local_search_from(p, start, seed, iterations)
}

/// Simulated annealing from a given family. The result is never worse
/// than `start`.
pub fn local_search_from(
    p: Params,
    start: Family,
    seed: u64,
    iterations: u64,
) -> Result<SolveResult> {
    if start.n() != p.n || start.k() != p.k {
        return usage("start family does not match (n, k)");
    }
    let t = p.t as usize;
    let total = binomial(p.ni(), p.ki())?;
    let mut members: Vec<KSet> = start.members().to_vec();
    let ell = members.len();
    let mut index: HashSet<KSet> = members.iter().cloned().collect();
    let mut cnt: Vec<i64> = members
        .iter()
        .map(|a| members.iter().filter(|b| a.meet(b) == t).count() as i64)
        .collect();
    let mut value: i64 = cnt.iter().sum::<i64>() / 2;
    let mut best = value;
    let mut best_members = members.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (t_start, t_end) = (2.0f64, 0.02f64);

    if ell > 0 && (ell as u128) < total && value > 0 {
        for it in 0..iterations {
            let temp = t_start * (t_end / t_start).powf(it as f64 / iterations.max(1) as f64);
            let ui = if rng.gen_bool(0.5) {
                rng.gen_range(0..ell)
            } else {
                (0..ell)
                    .max_by_key(|&i| (cnt[i], std::cmp::Reverse(i)))
                    .unwrap()
            };
            let Some(v) = propose(&members[ui], p, &index, &mut rng) else {
                continue;
            };
            let cv = members
                .iter()
                .enumerate()
                .filter(|&(i, w)| i != ui && w.meet(&v) == t)
                .count() as i64;
            let delta = cv - cnt[ui];
            if delta <= 0 || rng.gen::<f64>() < (-(delta as f64) / temp).exp() {
                let u = members[ui].clone();
                for (i, w) in members.iter().enumerate() {
                    if i == ui {
                        continue;
                    }
                    cnt[i] += (w.meet(&v) == t) as i64 - (w.meet(&u) == t) as i64;
                }
                cnt[ui] = cv;
                index.remove(&u);
                index.insert(v.clone());
                members[ui] = v;
                value += delta;
                if value < best {
                    best = value;
                    best_members = members.clone();
                    if best == 0 {
                        break;
                    }
                }
            }
        }
    }
    let witness = Family::new(p.n, p.k, best_members)?;
    let recount = witness.count_t_pairs(p.t)?;
    if recount as i64 != best {
        return Err(Error::Internal(format!(
            "local search bookkeeping {best} != recount {recount}"
        )));
    }
    Ok(SolveResult {
        params: p,
        ell: ell as u128,
        value: recount,
        lower: 0,
        certified: false,
        witness,
        nodes_expanded: iterations,
        method: Method::LocalSearch,
    })
}

/// A non-member: either `u` with one element swapped, or a uniform
/// random `k`-set.
fn propose(u: &KSet, p: Params, index: &HashSet<KSet>, rng: &mut ChaCha8Rng) -> Option<KSet> {
    for _ in 0..16 {
        let cand = if rng.gen_bool(0.5) && p.k < p.n {
            let inside = u.to_vec();
            let out = inside[rng.gen_range(0..inside.len())];
            let mut incoming = rng.gen_range(1..=p.n);
            while u.contains(incoming) {
                incoming = rng.gen_range(1..=p.n);
            }
            let mut c = u.clone();
            c.remove(out);
            c.insert(incoming);
            c
        } else {
            let picks: Vec<u32> = sample(rng, p.n as usize, p.k as usize)
                .into_iter()
                .map(|i| i as u32 + 1)
                .collect();
            KSet::from_sorted_unchecked(p.n, &picks)
        };
        if !index.contains(&cand) {
            return Some(cand);
        }
    }
    None
}
