//! Colexicographic and lexicographic generation of `k`-subsets.

use crate::binom::binom;
use crate::setfam::{Element, KSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Order {
    Colex,
    Lex,
}

/// The `k`-subsets of a sorted pool of elements, as [`KSet`]s over `[n]`.
///
/// Because the pool is sorted, colex order on index vectors is colex order
/// on the produced sets.
pub struct SubsetsOf {
    n: u32,
    pool: Vec<Element>,
    idx: Vec<usize>,
    order: Order,
    done: bool,
}

impl SubsetsOf {
    pub fn colex(n: u32, pool: &[Element], k: usize) -> Self {
        Self::with_order(n, pool.to_vec(), k, Order::Colex)
    }

    pub fn lex(n: u32, pool: &[Element], k: usize) -> Self {
        Self::with_order(n, pool.to_vec(), k, Order::Lex)
    }

    fn with_order(n: u32, pool: Vec<Element>, k: usize, order: Order) -> Self {
        debug_assert!(pool.windows(2).all(|w| w[0] < w[1]));
        let done = k > pool.len();
        SubsetsOf {
            n,
            pool,
            idx: (0..k).collect(),
            order,
            done,
        }
    }

    fn exhausted() -> Self {
        SubsetsOf {
            n: 0,
            pool: Vec::new(),
            idx: Vec::new(),
            order: Order::Colex,
            done: true,
        }
    }

    fn advance(&mut self) {
        let k = self.idx.len();
        let m = self.pool.len();
        match self.order {
            Order::Colex => {
                // smallest j whose index can move up without colliding
                for j in 0..k {
                    let ceiling = if j + 1 < k { self.idx[j + 1] } else { m };
                    if self.idx[j] + 1 < ceiling {
                        self.idx[j] += 1;
                        for (i, v) in self.idx[..j].iter_mut().enumerate() {
                            *v = i;
                        }
                        return;
                    }
                }
                self.done = true;
            }
            Order::Lex => {
                for j in (0..k).rev() {
                    if self.idx[j] < m - k + j {
                        self.idx[j] += 1;
                        for i in j + 1..k {
                            self.idx[i] = self.idx[i - 1] + 1;
                        }
                        return;
                    }
                }
                self.done = true;
            }
        }
    }
}

impl Iterator for SubsetsOf {
    type Item = KSet;

    fn next(&mut self) -> Option<KSet> {
        if self.done {
            return None;
        }
        let elems: Vec<Element> = self.idx.iter().map(|&i| self.pool[i]).collect();
        let out = KSet::from_sorted_unchecked(self.n, &elems);
        if self.idx.is_empty() {
            self.done = true;
        } else {
            self.advance();
        }
        Some(out)
    }
}

/// All `k`-subsets of `[n]` in colex order.
pub fn all_ksets(n: u32, k: u32) -> SubsetsOf {
    SubsetsOf::with_order(n, (1..=n).collect(), k as usize, Order::Colex)
}

/// All `k`-subsets of `[n]` in lexicographic order.
pub fn all_ksets_lex(n: u32, k: u32) -> SubsetsOf {
    SubsetsOf::with_order(n, (1..=n).collect(), k as usize, Order::Lex)
}

/// `k`-subsets of `[n]` containing `center` and disjoint from `avoid`, in
/// colex order.
pub fn ksets_containing(n: u32, k: u32, center: &KSet, avoid: &KSet) -> impl Iterator<Item = KSet> {
    let c = center.clone();
    let pool: Vec<Element> = (1..=n)
        .filter(|e| !center.contains(*e) && !avoid.contains(*e))
        .collect();
    let rest = (k as usize).checked_sub(center.len());
    let it = match rest {
        Some(r) => SubsetsOf::with_order(n, pool, r, Order::Colex),
        None => SubsetsOf::exhausted(),
    };
    it.map(move |s| s.union(&c))
}

/// Position of `set` in the colex order of all `|set|`-subsets.
pub fn colex_rank(set: &KSet) -> u128 {
    set.elements()
        .enumerate()
        .map(|(i, e)| binom(e as i64 - 1, i as i64 + 1))
        .sum()
}
