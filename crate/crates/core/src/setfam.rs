//! Subsets of `[n]`, uniform families of them, and the counting and
//! restriction operators everything else is built from.
//!
//! A [`KSet`] is a bitset over `[n]` with one inline machine word, so the
//! common `n <= 64` case never allocates; larger ground sets (up to
//! [`MAX_N`]) spill to the heap. Sets order colexicographically, which for
//! bitsets is plain numeric order of the bit pattern.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;

use indexmap::IndexSet;
use smallvec::{smallvec, SmallVec};

use crate::enumerate::SubsetsOf;
use crate::error::{usage, Error, Result};

/// Elements are 1-based.
pub type Element = u32;

/// Largest supported ground set.
pub const MAX_N: u32 = 1024;

fn word_count(n: u32) -> usize {
    (n as usize).div_ceil(64).max(1)
}

/// A subset of `[n] = {1, ..., n}`. In a family context every member has
/// the family's uniform size `k`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct KSet {
    n: u32,
    words: SmallVec<[u64; 1]>,
}

impl KSet {
    /// Builds a set from elements in any order. Duplicates and elements
    /// outside `[1..n]` are rejected.
    pub fn new(n: u32, elements: &[Element]) -> Result<Self> {
        if n > MAX_N {
            return usage(format!("ground set size {n} exceeds {MAX_N}"));
        }
        let mut set = Self::empty_unchecked(n);
        for &e in elements {
            if e == 0 || e > n {
                return usage(format!("element {e} outside [1..{n}]"));
            }
            if set.contains(e) {
                return usage(format!("duplicate element {e}"));
            }
            set.insert(e);
        }
        Ok(set)
    }

    pub fn empty(n: u32) -> Result<Self> {
        Self::new(n, &[])
    }

    /// The interval `[a, b]`; empty when `a > b`.
    pub fn interval(n: u32, a: Element, b: Element) -> Result<Self> {
        if a > b {
            return Self::empty(n);
        }
        Self::new(n, &(a..=b).collect::<Vec<_>>())
    }

    pub(crate) fn empty_unchecked(n: u32) -> Self {
        KSet {
            n,
            words: smallvec![0; word_count(n)],
        }
    }

    pub(crate) fn from_sorted_unchecked(n: u32, elements: &[Element]) -> Self {
        let mut set = Self::empty_unchecked(n);
        for &e in elements {
            set.insert(e);
        }
        set
    }

    /// Ground-set size `n`.
    pub fn ground(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn contains(&self, e: Element) -> bool {
        if e == 0 {
            return false;
        }
        let i = (e - 1) as usize;
        self.words
            .get(i / 64)
            .is_some_and(|w| w >> (i % 64) & 1 == 1)
    }

    pub(crate) fn insert(&mut self, e: Element) {
        let i = (e - 1) as usize;
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub(crate) fn remove(&mut self, e: Element) {
        let i = (e - 1) as usize;
        self.words[i / 64] &= !(1 << (i % 64));
    }

    /// Elements in increasing order.
    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros();
                w &= w - 1;
                Some(wi as u32 * 64 + b + 1)
            })
        })
    }

    pub fn to_vec(&self) -> Vec<Element> {
        self.elements().collect()
    }

    /// `self ⊆ other`.
    pub fn is_subset(&self, other: &KSet) -> bool {
        self.words
            .iter()
            .enumerate()
            .all(|(i, &w)| w & !other.words.get(i).copied().unwrap_or(0) == 0)
    }

    pub fn is_disjoint(&self, other: &KSet) -> bool {
        self.meet(other) == 0
    }

    /// `|self ∩ other|`, rejecting sets over different ground sets.
    pub fn intersection_size(&self, other: &KSet) -> Result<usize> {
        if self.n != other.n {
            return usage(format!("ground sets differ: [{}] vs [{}]", self.n, other.n));
        }
        Ok(self.meet(other))
    }

    /// `|self ∩ other|` without the ground-set check.
    #[inline]
    pub(crate) fn meet(&self, other: &KSet) -> usize {
        if self.words.len() == 1 && other.words.len() == 1 {
            return (self.words[0] & other.words[0]).count_ones() as usize;
        }
        self.words
            .iter()
            .zip(other.words.iter())
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    fn zip_with(&self, other: &KSet, f: impl Fn(u64, u64) -> u64) -> KSet {
        let words = self
            .words
            .iter()
            .enumerate()
            .map(|(i, &a)| f(a, other.words.get(i).copied().unwrap_or(0)))
            .collect();
        KSet { n: self.n, words }
    }

    pub fn intersection(&self, other: &KSet) -> KSet {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn union(&self, other: &KSet) -> KSet {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn difference(&self, other: &KSet) -> KSet {
        self.zip_with(other, |a, b| a & !b)
    }

    /// Image under the ground-set permutation `perm`, where `perm[i - 1]`
    /// is the image of element `i`.
    pub fn relabel(&self, perm: &[Element]) -> KSet {
        let mut out = Self::empty_unchecked(self.n);
        for e in self.elements() {
            out.insert(perm[(e - 1) as usize]);
        }
        out
    }
}

impl Ord for KSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n
            .cmp(&other.n)
            .then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }
}

impl PartialOrd for KSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for KSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.elements().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Display for KSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Serializes as the sorted element list.
impl serde::Serialize for KSet {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.elements())
    }
}

/// Validated triple `(n, k, t)` with `t < k <= n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct Params {
    pub n: u32,
    pub k: u32,
    pub t: u32,
}

impl Params {
    pub fn new(n: u32, k: u32, t: u32) -> Result<Self> {
        if !(t < k && k <= n) {
            return usage(format!("need t < k <= n, got n={n} k={k} t={t}"));
        }
        if n > MAX_N {
            return usage(format!("n={n} exceeds {MAX_N}"));
        }
        Ok(Params { n, k, t })
    }

    pub(crate) fn ni(&self) -> i64 {
        self.n as i64
    }
    pub(crate) fn ki(&self) -> i64 {
        self.k as i64
    }
    pub(crate) fn ti(&self) -> i64 {
        self.t as i64
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} k={} t={}", self.n, self.k, self.t)
    }
}

/// A duplicate-free, insertion-ordered collection of `k`-subsets of `[n]`.
///
/// Equality is set equality: two families with the same members in a
/// different order compare equal.
#[derive(Clone, Debug)]
pub struct Family {
    n: u32,
    k: u32,
    members: Vec<KSet>,
}

impl Family {
    pub fn new(n: u32, k: u32, members: Vec<KSet>) -> Result<Self> {
        if n > MAX_N {
            return usage(format!("n={n} exceeds {MAX_N}"));
        }
        if k > n {
            return usage(format!("k={k} exceeds n={n}"));
        }
        let mut seen = HashSet::with_capacity(members.len());
        for m in &members {
            if m.n != n {
                return usage(format!("member {m} is over [{}], family over [{n}]", m.n));
            }
            if m.len() != k as usize {
                return usage(format!("member {m} has size {}, expected {k}", m.len()));
            }
            if !seen.insert(m) {
                return usage(format!("duplicate member {m}"));
            }
        }
        Ok(Family { n, k, members })
    }

    /// Convenience constructor from element lists.
    pub fn from_lists(n: u32, k: u32, sets: &[&[Element]]) -> Result<Self> {
        let members = sets
            .iter()
            .map(|s| KSet::new(n, s))
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, k, members)
    }

    pub fn empty(n: u32, k: u32) -> Result<Self> {
        Self::new(n, k, Vec::new())
    }

    /// Caller guarantees uniformity and distinctness.
    pub(crate) fn from_unique(n: u32, k: u32, members: Vec<KSet>) -> Self {
        debug_assert!(members.iter().all(|m| m.len() == k as usize && m.n == n));
        debug_assert_eq!(members.iter().collect::<HashSet<_>>().len(), members.len());
        Family { n, k, members }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[KSet] {
        &self.members
    }

    pub fn iter(&self) -> std::slice::Iter<'_, KSet> {
        self.members.iter()
    }

    pub fn into_members(self) -> Vec<KSet> {
        self.members
    }

    pub fn contains(&self, set: &KSet) -> bool {
        self.members.contains(set)
    }

    /// Same family with members sorted colexicographically.
    pub fn sorted(&self) -> Family {
        let mut members = self.members.clone();
        members.sort();
        Family {
            n: self.n,
            k: self.k,
            members,
        }
    }

    fn check_t(&self, t: u32) -> Result<()> {
        if t >= self.k {
            return usage(format!("t={t} must be below k={}", self.k));
        }
        Ok(())
    }

    /// `ρ(F)`: unordered pairs of members meeting in exactly `t` elements.
    pub fn count_t_pairs(&self, t: u32) -> Result<u64> {
        self.check_t(t)?;
        let t = t as usize;
        let m = &self.members;
        let mut count = 0u64;
        for (i, a) in m.iter().enumerate() {
            count += m[i + 1..].iter().filter(|b| a.meet(b) == t).count() as u64;
        }
        Ok(count)
    }

    /// `ρ(A, B)`: pairs `(A, B) ∈ self × other` with `|A ∩ B| = t`.
    /// The two families must be disjoint.
    pub fn cross_t_pairs(&self, other: &Family, t: u32) -> Result<u64> {
        self.check_t(t)?;
        if self.n != other.n || self.k != other.k {
            return usage("cross count needs families over the same (n, k)");
        }
        let mine: HashSet<&KSet> = self.members.iter().collect();
        if let Some(dup) = other.members.iter().find(|b| mine.contains(b)) {
            return usage(format!("families overlap in {dup}"));
        }
        let t = t as usize;
        Ok(self
            .members
            .iter()
            .map(|a| other.members.iter().filter(|b| a.meet(b) == t).count() as u64)
            .sum())
    }

    /// `∂^(i)(F)`: every `i`-set contained in some member, in first-seen order.
    pub fn shadow(&self, i: u32) -> Result<Family> {
        if i > self.k {
            return usage(format!("shadow level {i} exceeds k={}", self.k));
        }
        if i == self.k {
            return Ok(self.clone());
        }
        let mut seen: IndexSet<KSet> = IndexSet::new();
        for m in &self.members {
            let pool = m.to_vec();
            for sub in SubsetsOf::colex(self.n, &pool, i as usize) {
                seen.insert(sub);
            }
        }
        Ok(Family {
            n: self.n,
            k: i,
            members: seen.into_iter().collect(),
        })
    }

    /// `F[X]`: members containing `x`.
    pub fn restrict_containing(&self, x: &KSet) -> Family {
        let members = self
            .members
            .iter()
            .filter(|m| x.is_subset(m))
            .cloned()
            .collect();
        Family {
            n: self.n,
            k: self.k,
            members,
        }
    }

    /// `F(X)`: members containing `x`, with `x` removed.
    pub fn link(&self, x: &KSet) -> Family {
        let members = self
            .members
            .iter()
            .filter(|m| x.is_subset(m))
            .map(|m| m.difference(x))
            .collect();
        let k = self.k.saturating_sub(x.len() as u32);
        Family {
            n: self.n,
            k,
            members,
        }
    }

    /// `d_F(v)` for `v = 1..=n`, indexed by `v - 1`.
    pub fn degrees(&self) -> Vec<u64> {
        let mut deg = vec![0u64; self.n as usize];
        for m in &self.members {
            for e in m.elements() {
                deg[(e - 1) as usize] += 1;
            }
        }
        deg
    }

    /// Most frequent element and its degree; ties go to the smallest element.
    pub fn max_degree_element(&self) -> Result<(Element, u64)> {
        if self.members.is_empty() {
            return usage("max degree of an empty family");
        }
        let deg = self.degrees();
        let (mut best, mut best_d) = (1, 0);
        for (i, &d) in deg.iter().enumerate() {
            if d > best_d {
                best = i as Element + 1;
                best_d = d;
            }
        }
        Ok((best, best_d))
    }

    /// `s`-diverse: no element lies in more than `|F| / s` members.
    /// Vacuously true for the empty family.
    pub fn is_s_diverse(&self, s: f64) -> Result<bool> {
        if s.is_nan() || s <= 0.0 {
            return usage(format!("diversity parameter must be positive, got {s}"));
        }
        if self.members.is_empty() {
            return Ok(true);
        }
        let (_, d) = self.max_degree_element()?;
        // d <= |F| / s  <=>  d * s <= |F|
        Ok(d as f64 * s <= self.members.len() as f64)
    }

    /// Concatenation of two disjoint families.
    pub fn disjoint_union(&self, other: &Family) -> Result<Family> {
        if self.n != other.n || self.k != other.k {
            return usage("union needs families over the same (n, k)");
        }
        let mut members = self.members.clone();
        members.extend(other.members.iter().cloned());
        Family::new(self.n, self.k, members)
    }

    /// Members of `self` not in `other`, order preserved.
    pub fn minus(&self, other: &Family) -> Family {
        let drop: HashSet<&KSet> = other.members.iter().collect();
        let members = self
            .members
            .iter()
            .filter(|m| !drop.contains(m))
            .cloned()
            .collect();
        Family {
            n: self.n,
            k: self.k,
            members,
        }
    }

    pub fn relabel(&self, perm: &[Element]) -> Result<Family> {
        let mut sorted = perm.to_vec();
        sorted.sort_unstable();
        if sorted != (1..=self.n).collect::<Vec<_>>() {
            return usage("relabeling must be a permutation of [1..n]");
        }
        let members = self.members.iter().map(|m| m.relabel(perm)).collect();
        Ok(Family {
            n: self.n,
            k: self.k,
            members,
        })
    }

    /// Serializes to the family text format: a `n=<n> k=<k>` header, then
    /// one set per line as increasing space-separated elements.
    pub fn to_text(&self) -> String {
        let mut out = format!("n={} k={}\n", self.n, self.k);
        for m in &self.members {
            let line: Vec<String> = m.elements().map(|e| e.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parses the family text format. Lines starting with `#` are comments.
    /// Blank lines are skipped, except for `k = 0` where a blank line is the
    /// empty set.
    pub fn parse(text: &str) -> Result<Family> {
        let perr = |line: usize, msg: String| Error::Parse { line, msg };
        let mut header: Option<(u32, u32)> = None;
        let mut members = Vec::new();
        let mut seen = HashSet::new();
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            if raw.starts_with('#') {
                continue;
            }
            let Some((n, k)) = header else {
                if raw.trim().is_empty() {
                    continue;
                }
                header = Some(parse_header(raw).map_err(|m| perr(lineno, m))?);
                continue;
            };
            if raw.trim().is_empty() && k != 0 {
                continue;
            }
            let mut elems = Vec::with_capacity(k as usize);
            for tok in raw.split_whitespace() {
                let e: Element = tok
                    .parse()
                    .map_err(|_| perr(lineno, format!("bad element {tok:?}")))?;
                if e == 0 || e > n {
                    return Err(perr(lineno, format!("element {e} outside [1..{n}]")));
                }
                if elems.last().is_some_and(|&p| p >= e) {
                    return Err(perr(lineno, "elements must be strictly increasing".into()));
                }
                elems.push(e);
            }
            if elems.len() != k as usize {
                return Err(perr(
                    lineno,
                    format!("expected {k} elements, found {}", elems.len()),
                ));
            }
            let set = KSet::from_sorted_unchecked(n, &elems);
            if !seen.insert(set.clone()) {
                return Err(perr(lineno, format!("duplicate set {set}")));
            }
            members.push(set);
        }
        let (n, k) = header.ok_or_else(|| perr(0, "missing `n=<n> k=<k>` header".into()))?;
        Ok(Family { n, k, members })
    }
}

fn parse_header(line: &str) -> std::result::Result<(u32, u32), String> {
    let mut n = None;
    let mut k = None;
    for tok in line.split_whitespace() {
        let (key, val) = tok
            .split_once('=')
            .ok_or_else(|| format!("bad header token {tok:?}"))?;
        let v: u32 = val
            .parse()
            .map_err(|_| format!("bad header value {val:?}"))?;
        match key {
            "n" => n = Some(v),
            "k" => k = Some(v),
            _ => return Err(format!("unknown header key {key:?}")),
        }
    }
    match (n, k) {
        (Some(n), Some(k)) if k <= n && n <= MAX_N => Ok((n, k)),
        (Some(n), Some(k)) => Err(format!("invalid header n={n} k={k}")),
        _ => Err("header needs both n= and k=".into()),
    }
}

impl PartialEq for Family {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.k == other.k && self.members.len() == other.members.len() && {
            let mine: HashSet<&KSet> = self.members.iter().collect();
            other.members.iter().all(|m| mine.contains(m))
        }
    }
}

impl Eq for Family {}

impl serde::Serialize for Family {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("Family", 3)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("k", &self.k)?;
        st.serialize_field("members", &self.members)?;
        st.end()
    }
}

impl<'a> IntoIterator for &'a Family {
    type Item = &'a KSet;
    type IntoIter = std::slice::Iter<'a, KSet>;
    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}
