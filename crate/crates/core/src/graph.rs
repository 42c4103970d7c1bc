//! Small dense graphs stored as bit matrices, and an exact maximum
//! independent set search used for independence numbers and sunflowers.

/// Bit operations on fixed-width word slices.
pub(crate) mod bits {
    #[inline]
    pub fn get(row: &[u64], i: usize) -> bool {
        row[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn set(row: &mut [u64], i: usize) {
        row[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn clear(row: &mut [u64], i: usize) {
        row[i / 64] &= !(1 << (i % 64));
    }

    pub fn is_empty(row: &[u64]) -> bool {
        row.iter().all(|&w| w == 0)
    }

    pub fn first(row: &[u64]) -> Option<usize> {
        row.iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }
}

/// Undirected simple graph on `0..order` with a bit-matrix adjacency and
/// adjacency lists.
#[derive(Clone, Debug)]
pub struct DenseGraph {
    order: usize,
    words: usize,
    adj: Vec<u64>,
    nbrs: Vec<Vec<u32>>,
}

impl DenseGraph {
    /// Builds the graph whose edges are the pairs satisfying `adjacent`.
    pub fn from_predicate(order: usize, mut adjacent: impl FnMut(usize, usize) -> bool) -> Self {
        let words = order.div_ceil(64).max(1);
        let mut adj = vec![0u64; order * words];
        let mut nbrs = vec![Vec::new(); order];
        for i in 0..order {
            for j in i + 1..order {
                if adjacent(i, j) {
                    bits::set(&mut adj[i * words..(i + 1) * words], j);
                    bits::set(&mut adj[j * words..(j + 1) * words], i);
                    nbrs[i].push(j as u32);
                    nbrs[j].push(i as u32);
                }
            }
        }
        DenseGraph {
            order,
            words,
            adj,
            nbrs,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn words(&self) -> usize {
        self.words
    }

    #[inline]
    pub fn row(&self, v: usize) -> &[u64] {
        &self.adj[v * self.words..(v + 1) * self.words]
    }

    #[inline]
    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        bits::get(self.row(u), v)
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.nbrs[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.nbrs[v].len()
    }

    pub fn edge_count(&self) -> u64 {
        self.nbrs.iter().map(|l| l.len() as u64).sum::<u64>() / 2
    }

    /// Edges induced by the vertex list `set`.
    pub fn induced_edges(&self, set: &[usize]) -> u64 {
        let mut e = 0;
        for (i, &u) in set.iter().enumerate() {
            e += set[i + 1..]
                .iter()
                .filter(|&&v| self.adjacent(u, v))
                .count() as u64;
        }
        e
    }

    pub fn is_independent(&self, set: &[usize]) -> bool {
        self.induced_edges(set) == 0
    }

    pub(crate) fn full_mask(&self) -> Vec<u64> {
        let mut m = vec![0u64; self.words];
        for v in 0..self.order {
            bits::set(&mut m, v);
        }
        m
    }

    /// Greedy partition of the vertices into cliques, scanning in index order.
    pub fn greedy_clique_partition(&self) -> Vec<Vec<usize>> {
        let mut cliques: Vec<(Vec<usize>, Vec<u64>)> = Vec::new();
        for v in 0..self.order {
            // a clique accepts v when all its members are neighbours of v
            match cliques.iter_mut().find(|(_, common)| bits::get(common, v)) {
                Some((members, common)) => {
                    members.push(v);
                    for (c, r) in common.iter_mut().zip(self.row(v)) {
                        *c &= r;
                    }
                }
                None => cliques.push((vec![v], self.row(v).to_vec())),
            }
        }
        cliques.into_iter().map(|(m, _)| m).collect()
    }
}

/// Result of [`maximum_independent_set`].
#[derive(Clone, Debug)]
pub struct MisOutcome {
    /// Best independent set found, sorted.
    pub set: Vec<usize>,
    /// Proven upper bound on the independence number.
    pub upper: usize,
    pub nodes: u64,
    /// True when the search finished, so `set.len() == upper`.
    pub complete: bool,
}

struct MisSearch<'a> {
    g: &'a DenseGraph,
    /// Rows of the complement graph.
    co: Vec<u64>,
    best: Vec<usize>,
    current: Vec<usize>,
    nodes: u64,
    budget: u64,
    aborted: bool,
}

impl MisSearch<'_> {
    fn co_row(&self, v: usize) -> &[u64] {
        let w = self.g.words;
        &self.co[v * w..(v + 1) * w]
    }

    /// Colour classes that are cliques of `g` (independent in the
    /// complement): vertices in class order with their class number.
    fn colour(&self, pool: &[u64]) -> (Vec<usize>, Vec<usize>) {
        let mut left = pool.to_vec();
        let mut order = Vec::new();
        let mut colours = Vec::new();
        let mut colour = 0;
        while !bits::is_empty(&left) {
            colour += 1;
            let mut q = left.clone();
            while let Some(v) = bits::first(&q) {
                bits::clear(&mut left, v);
                bits::clear(&mut q, v);
                for (a, b) in q.iter_mut().zip(self.g.row(v)) {
                    *a &= b;
                }
                order.push(v);
                colours.push(colour);
            }
        }
        (order, colours)
    }

    fn expand(&mut self, mut pool: Vec<u64>) {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.aborted = true;
            return;
        }
        let (order, colours) = self.colour(&pool);
        for i in (0..order.len()).rev() {
            if self.current.len() + colours[i] <= self.best.len() || self.aborted {
                return;
            }
            let v = order[i];
            self.current.push(v);
            let next: Vec<u64> = pool
                .iter()
                .zip(self.co_row(v))
                .map(|(a, b)| a & b)
                .collect();
            if bits::is_empty(&next) {
                if self.current.len() > self.best.len() {
                    self.best = self.current.clone();
                }
            } else {
                self.expand(next);
            }
            self.current.pop();
            bits::clear(&mut pool, v);
        }
    }
}

/// Exact maximum independent set by clique search in the complement with a
/// greedy-colouring bound. `root`, when given, is forced into the set,
/// which is sound for vertex-transitive graphs. At most `budget` search
/// nodes are expanded.
pub fn maximum_independent_set(g: &DenseGraph, root: Option<usize>, budget: u64) -> MisOutcome {
    let w = g.words;
    let full = g.full_mask();
    let mut co = vec![0u64; g.order * w];
    for v in 0..g.order {
        for i in 0..w {
            co[v * w + i] = !g.adj[v * w + i] & full[i];
        }
        bits::clear(&mut co[v * w..(v + 1) * w], v);
    }
    let mut search = MisSearch {
        g,
        co,
        best: Vec::new(),
        current: Vec::new(),
        nodes: 0,
        budget,
        aborted: false,
    };
    if g.order == 0 {
        return MisOutcome {
            set: Vec::new(),
            upper: 0,
            nodes: 0,
            complete: true,
        };
    }
    let (pool, base) = match root {
        Some(r) => {
            search.current.push(r);
            search.best = vec![r];
            (search.co_row(r).to_vec(), 1)
        }
        None => (full, 0),
    };
    let root_bound = base + search.colour(&pool).1.last().copied().unwrap_or(0);
    if !bits::is_empty(&pool) {
        search.expand(pool);
    }
    let mut set = search.best;
    set.sort_unstable();
    let complete = !search.aborted;
    let upper = if complete { set.len() } else { root_bound };
    MisOutcome {
        set,
        upper,
        nodes: search.nodes,
        complete,
    }
}
