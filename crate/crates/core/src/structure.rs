//! Delta-system analysis of uniform families: `k`-partitions, projections,
//! intersection structures and their rank, sunflowers, and a randomized
//! regularizer that peels a family until every link is large and diverse.
//!
//! Subsets of `[k]` (part indices) are returned as [`KSet`]s over ground
//! set `k`. Internally they are `u64` masks, so `k <= 63`.

use std::collections::{BTreeMap, HashMap};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::binom::binomial;
use crate::error::{usage, Result};
use crate::graph::{maximum_independent_set, DenseGraph};
use crate::setfam::{Element, Family, KSet};

/// Largest number of parts.
pub const MAX_PARTS: u32 = 63;

/// Random partitions tried by [`greedy_regularize`].
pub const REGULARIZE_ROUNDS: u64 = 64;

/// Sunflower candidates up to this many are searched exactly.
pub const SUNFLOWER_EXACT_LIMIT: usize = 24;

type Mask = u64;

fn mask_of(set: &KSet) -> Mask {
    set.elements().fold(0, |m, e| m | 1 << (e - 1))
}

fn set_of(k: u32, mask: Mask) -> KSet {
    let elems: Vec<Element> = (0..k)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| i + 1)
        .collect();
    KSet::from_sorted_unchecked(k, &elems)
}

/// A partition `[n] = X_1 ⊔ ... ⊔ X_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KPartition {
    n: u32,
    parts: Vec<KSet>,
    #[serde(skip)]
    part_of: Vec<u32>,
}

impl KPartition {
    pub fn new(n: u32, parts: Vec<KSet>) -> Result<Self> {
        if parts.is_empty() || parts.len() > MAX_PARTS as usize {
            return usage(format!(
                "a partition needs 1..={MAX_PARTS} parts, got {}",
                parts.len()
            ));
        }
        let mut part_of = vec![u32::MAX; n as usize];
        for (i, part) in parts.iter().enumerate() {
            if part.ground() != n {
                return usage(format!("part {part} is not over [{n}]"));
            }
            for e in part.elements() {
                let slot = &mut part_of[(e - 1) as usize];
                if *slot != u32::MAX {
                    return usage(format!(
                        "element {e} lies in parts {} and {}",
                        *slot + 1,
                        i + 1
                    ));
                }
                *slot = i as u32;
            }
        }
        if let Some(e) = part_of.iter().position(|&p| p == u32::MAX) {
            return usage(format!("element {} is in no part", e + 1));
        }
        Ok(KPartition { n, parts, part_of })
    }

    /// Builds a partition from element lists.
    pub fn from_lists(n: u32, parts: &[&[Element]]) -> Result<Self> {
        let parts = parts
            .iter()
            .map(|p| KSet::new(n, p))
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, parts)
    }

    /// Parts assigned by colour: element `e` goes to part `colour[e - 1]`.
    pub fn from_colouring(n: u32, k: u32, colour: &[u32]) -> Result<Self> {
        if colour.len() != n as usize {
            return usage(format!(
                "colouring has {} entries, expected {n}",
                colour.len()
            ));
        }
        let mut lists = vec![Vec::new(); k as usize];
        for (i, &c) in colour.iter().enumerate() {
            if c >= k {
                return usage(format!("colour {c} out of range for {k} parts"));
            }
            lists[c as usize].push(i as Element + 1);
        }
        let parts = lists
            .iter()
            .map(|l| KSet::new(n, l))
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, parts)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.parts.len() as u32
    }

    pub fn parts(&self) -> &[KSet] {
        &self.parts
    }

    /// 1-based index of the part holding `e`.
    pub fn part_of(&self, e: Element) -> u32 {
        self.part_of[(e - 1) as usize] + 1
    }

    fn check_ground(&self, set: &KSet) -> Result<()> {
        if set.ground() != self.n {
            return usage(format!(
                "set {set} is over [{}], partition over [{}]",
                set.ground(),
                self.n
            ));
        }
        Ok(())
    }

    /// Elements of `set` listed by part, or `None` unless it is a transversal.
    fn transversal(&self, set: &KSet) -> Option<Vec<Element>> {
        if set.ground() != self.n || set.len() != self.parts.len() {
            return None;
        }
        let mut slots = vec![0; self.parts.len()];
        for e in set.elements() {
            let p = self.part_of[(e - 1) as usize] as usize;
            if slots[p] != 0 {
                return None;
            }
            slots[p] = e;
        }
        Some(slots)
    }

    fn transversals(&self, f: &Family) -> Result<Vec<Vec<Element>>> {
        f.iter()
            .map(|m| match self.transversal(m) {
                Some(t) => Ok(t),
                None => usage(format!("member {m} is not a transversal of the partition")),
            })
            .collect()
    }
}

/// True iff every member meets every part exactly once.
pub fn is_k_partite(f: &Family, partition: &KPartition) -> bool {
    f.iter().all(|m| partition.transversal(m).is_some())
}

/// `π(y)`: indices of the parts `y` meets.
pub fn projection(y: &KSet, partition: &KPartition) -> Result<KSet> {
    partition.check_ground(y)?;
    let mask = y
        .elements()
        .fold(0, |m, e| m | 1 << partition.part_of[(e - 1) as usize]);
    Ok(set_of(partition.k(), mask))
}

/// `F_J`: the elements of the transversal `member` lying in the parts `j`.
pub fn restrict_to_parts(member: &KSet, j: &KSet, partition: &KPartition) -> Result<KSet> {
    let Some(slots) = partition.transversal(member) else {
        return usage(format!(
            "member {member} is not a transversal of the partition"
        ));
    };
    if j.ground() != partition.k() {
        return usage(format!("part set {j} is not over [{}]", partition.k()));
    }
    let elems: Vec<Element> = j.elements().map(|i| slots[(i - 1) as usize]).collect();
    KSet::new(partition.n, &elems)
}

fn pair_mask(a: &[Element], b: &[Element]) -> Mask {
    a.iter()
        .zip(b)
        .enumerate()
        .filter(|(_, (x, y))| x == y)
        .fold(0, |m, (i, _)| m | 1 << i)
}

fn int_masks(slots: &[Vec<Element>]) -> Vec<Mask> {
    let mut seen = std::collections::HashSet::new();
    for (i, a) in slots.iter().enumerate() {
        for b in &slots[i + 1..] {
            seen.insert(pair_mask(a, b));
        }
    }
    let mut out: Vec<Mask> = seen.into_iter().collect();
    out.sort_unstable_by_key(|&m| (m.count_ones(), m));
    out
}

fn closed_masks(m: &[Mask]) -> bool {
    let set: std::collections::HashSet<Mask> = m.iter().copied().collect();
    m.iter().all(|&a| m.iter().all(|&b| set.contains(&(a & b))))
}

fn rank_masks(m: &[Mask], k: u32) -> u32 {
    let full: Mask = if k == 64 { !0 } else { (1 << k) - 1 };
    let proper: Vec<Mask> = m.iter().copied().filter(|&x| x != full).collect();
    let covered = |x: Mask| proper.iter().any(|&y| x & !y == 0);
    for c in 0..=k {
        if c == 0 {
            if !covered(0) {
                return 0;
            }
            continue;
        }
        // Gosper's hack over the c-subsets of [k].
        let mut x: Mask = (1 << c) - 1;
        while x <= full {
            if !covered(x) {
                return c;
            }
            let low = x & x.wrapping_neg();
            let ripple = x + low;
            x = (((ripple ^ x) >> 2) / low) | ripple;
        }
    }
    k + 1
}

fn check_masks(m: &[KSet], k: u32) -> Result<Vec<Mask>> {
    if k > MAX_PARTS {
        return usage(format!("k={k} exceeds {MAX_PARTS}"));
    }
    m.iter()
        .map(|s| {
            if s.ground() != k {
                usage(format!("subset {s} is not over [{k}]"))
            } else {
                Ok(mask_of(s))
            }
        })
        .collect()
}

/// Size of the smallest subset of `[k]` contained in no member of
/// `m ∖ {[k]}`; `k + 1` if there is none.
pub fn rank_of(m: &[KSet], k: u32) -> Result<u32> {
    Ok(rank_masks(&check_masks(m, k)?, k))
}

/// True iff `A ∩ B ∈ m` for all `A, B ∈ m`.
pub fn is_closed_under_intersection(m: &[KSet], k: u32) -> Result<bool> {
    Ok(closed_masks(&check_masks(m, k)?))
}

/// The smallest intersection-closed family containing `m`.
pub fn close_under_intersection(m: &[KSet], k: u32) -> Result<Vec<KSet>> {
    let mut cur = check_masks(m, k)?;
    cur.sort_unstable();
    cur.dedup();
    loop {
        let mut next = cur.clone();
        for (i, &a) in cur.iter().enumerate() {
            for &b in &cur[i + 1..] {
                next.push(a & b);
            }
        }
        next.sort_unstable();
        next.dedup();
        if next.len() == cur.len() {
            break;
        }
        cur = next;
    }
    cur.sort_unstable_by_key(|&x| (x.count_ones(), x));
    Ok(cur.into_iter().map(|x| set_of(k, x)).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    /// Some member has exactly `t` elements.
    Type1HasTSet,
    /// All supersets of a unique `(t+1)`-set, plus sets of size `<= t - 1`.
    Type2Center,
    Neither,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureVerdict {
    pub classification: Classification,
    pub center: Option<KSet>,
    /// Why the dichotomy was not applied, when it was not.
    pub note: Option<String>,
}

fn is_center(
    m: &std::collections::HashSet<Mask>,
    members: &[Mask],
    k: u32,
    t: u32,
    center: Mask,
) -> bool {
    let full: Mask = (1 << k) - 1;
    if members
        .iter()
        .any(|&x| x.count_ones() >= t && x & center != center)
    {
        return false;
    }
    let free = full & !center;
    // Every proper superset of the center must be present.
    let mut sub = free;
    loop {
        let s = center | sub;
        if s != full && !m.contains(&s) {
            return false;
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & free;
    }
    true
}

fn classify_masks(members: &[Mask], k: u32, t: u32) -> StructureVerdict {
    let neither = |note: String| StructureVerdict {
        classification: Classification::Neither,
        center: None,
        note: Some(note),
    };
    if k < 2 * t + 3 {
        return neither(format!("needs k >= 2t+3, have k={k}, t={t}"));
    }
    if !closed_masks(members) {
        return neither("not closed under intersection".into());
    }
    let rank = rank_masks(members, k);
    if rank + t + 1 < k {
        return neither(format!("rank {rank} is below k-t-1={}", k - t - 1));
    }
    if members.iter().any(|&x| x.count_ones() == t) {
        return StructureVerdict {
            classification: Classification::Type1HasTSet,
            center: None,
            note: None,
        };
    }
    let set: std::collections::HashSet<Mask> = members.iter().copied().collect();
    let centers: Vec<Mask> = crate::enumerate::all_ksets(k, t + 1)
        .map(|c| mask_of(&c))
        .filter(|&c| is_center(&set, members, k, t, c))
        .collect();
    match centers.as_slice() {
        [c] => StructureVerdict {
            classification: Classification::Type2Center,
            center: Some(set_of(k, *c)),
            note: None,
        },
        [] => neither("no t-set and no center".into()),
        _ => neither(format!("{} candidate centers", centers.len())),
    }
}

/// Applies the type-1/type-2 dichotomy to a family over `[k]`. Returns
/// `Neither` with a note when its hypotheses fail (`k >= 2t+3`, closed
/// under intersection, rank at least `k - t - 1`).
pub fn classify_structure(m: &[KSet], k: u32, t: u32) -> Result<StructureVerdict> {
    let mut masks = check_masks(m, k)?;
    masks.sort_unstable();
    masks.dedup();
    Ok(classify_masks(&masks, k, t))
}

/// `Int(F)` with its closure flag, rank and classification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntersectionStructure {
    pub k: u32,
    pub t: u32,
    /// Ordered by size, then colex.
    pub subsets: Vec<KSet>,
    pub closed_under_intersection: bool,
    pub rank: u32,
    pub classification: Classification,
    pub center: Option<KSet>,
    pub note: Option<String>,
}

impl IntersectionStructure {
    pub fn contains(&self, j: &KSet) -> bool {
        self.subsets.contains(j)
    }
}

/// `Int(F) = {π(E ∩ F) : E ≠ F}` for a `k`-partite family.
pub fn intersection_structure(
    f: &Family,
    partition: &KPartition,
    t: u32,
) -> Result<IntersectionStructure> {
    if f.len() < 2 {
        return usage(format!(
            "intersection structure needs at least 2 members, got {}",
            f.len()
        ));
    }
    if f.k() != partition.k() {
        return usage(format!(
            "family is {}-uniform but the partition has {} parts",
            f.k(),
            partition.k()
        ));
    }
    let slots = partition.transversals(f)?;
    let masks = int_masks(&slots);
    let k = partition.k();
    let verdict = classify_masks(&masks, k, t);
    Ok(IntersectionStructure {
        k,
        t,
        closed_under_intersection: closed_masks(&masks),
        rank: rank_masks(&masks, k),
        subsets: masks.iter().map(|&x| set_of(k, x)).collect(),
        classification: verdict.classification,
        center: verdict.center,
        note: verdict.note,
    })
}

/// True unless `f` is a counterexample to: a `k`-partite family with more
/// than `C(n, k-t-2)` members has `rank(Int(F)) >= k - t - 1`.
pub fn check_rank_threshold(f: &Family, partition: &KPartition, t: u32) -> Result<bool> {
    if !is_k_partite(f, partition) {
        return usage("family is not k-partite with respect to the partition");
    }
    let (n, k) = (f.n() as i64, f.k() as i64);
    let threshold = binomial(n, k - t as i64 - 2)?;
    if f.len() as u128 <= threshold || f.len() < 2 {
        return Ok(true);
    }
    let st = intersection_structure(f, partition, t)?;
    Ok(st.rank as i64 >= k - t as i64 - 1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Sunflower {
    pub kernel: KSet,
    pub petals: Family,
    /// Whether the petal count is the maximum possible for this kernel.
    pub exact: bool,
}

impl Sunflower {
    /// Every pair of petals meets exactly in the kernel.
    pub fn is_valid(&self) -> bool {
        let m = self.petals.members();
        m.iter().all(|p| self.kernel.is_subset(p))
            && m.iter()
                .enumerate()
                .all(|(i, a)| m[i + 1..].iter().all(|b| a.intersection(b) == self.kernel))
    }
}

/// A largest sunflower in `f` with the given kernel: exact by maximum
/// independent set when at most [`SUNFLOWER_EXACT_LIMIT`] members contain
/// the kernel, greedy by fewest conflicts otherwise.
pub fn largest_sunflower(f: &Family, kernel: &KSet) -> Result<Sunflower> {
    if kernel.ground() != f.n() {
        return usage(format!("kernel {kernel} is not over [{}]", f.n()));
    }
    let cands: Vec<KSet> = f
        .iter()
        .filter(|m| kernel.is_subset(m) && *m != kernel)
        .cloned()
        .collect();
    let g = DenseGraph::from_predicate(cands.len(), |i, j| {
        cands[i].intersection(&cands[j]) != *kernel
    });
    let (chosen, exact) = if cands.len() <= SUNFLOWER_EXACT_LIMIT {
        let out = maximum_independent_set(&g, None, u64::MAX);
        (out.set, out.complete)
    } else {
        let mut order: Vec<usize> = (0..cands.len()).collect();
        order.sort_by_key(|&v| (g.degree(v), v));
        let mut picked: Vec<usize> = Vec::new();
        for v in order {
            if picked.iter().all(|&u| !g.adjacent(u, v)) {
                picked.push(v);
            }
        }
        (picked, false)
    };
    let petals = Family::new(
        f.n(),
        f.k(),
        chosen.into_iter().map(|i| cands[i].clone()).collect(),
    )?;
    Ok(Sunflower {
        kernel: kernel.clone(),
        petals,
        exact,
    })
}

/// A sunflower with at least `s` petals and the given kernel, if the search
/// finds one.
pub fn find_sunflowers(f: &Family, kernel: &KSet, s: usize) -> Result<Option<Sunflower>> {
    if s < 2 {
        return usage(format!("a sunflower needs s >= 2 petals, got {s}"));
    }
    let sf = largest_sunflower(f, kernel)?;
    Ok((sf.petals.len() >= s).then_some(sf))
}

/// Which regularity predicates hold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RegularityVerdict {
    pub k_partite: bool,
    /// `|F(F_J)| >= s` for every `J ∈ Int(F)` and `F`.
    pub links_large: bool,
    /// `F(F_J)` is `s`-diverse for every `J ∈ Int(F)` and `F`.
    pub links_diverse: bool,
    pub closed_under_intersection: bool,
}

impl RegularityVerdict {
    pub fn all(&self) -> bool {
        self.k_partite && self.links_large && self.links_diverse && self.closed_under_intersection
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PeelPhase {
    /// `|J|` of the offending restrictions.
    pub j_size: u32,
    /// Removed because the link had fewer than `s` members.
    pub removed_small: usize,
    /// Removed because one element was too frequent in the link.
    pub removed_concentrated: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegularizeReport {
    pub s: u32,
    pub seed: u64,
    pub rounds: u64,
    pub chosen_round: Option<u64>,
    pub input_size: usize,
    pub transversal_size: usize,
    pub final_size: usize,
    pub phases: Vec<PeelPhase>,
    pub verdict: RegularityVerdict,
    /// Nonempty and every predicate holds.
    pub accepted: bool,
}

#[derive(Clone, Debug)]
pub struct Regularized {
    pub sub: Family,
    pub partition: KPartition,
    pub report: RegularizeReport,
}

fn random_partition(n: u32, k: u32, seed: u64, round: u64) -> KPartition {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(round);
    let mut order: Vec<u32> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut colour = vec![0u32; n as usize];
    for (pos, &e) in order.iter().enumerate() {
        colour[e as usize] = pos as u32 % k;
    }
    KPartition::from_colouring(n, k, &colour).expect("balanced colouring is a partition")
}

/// Link of `F_J` for every distinct restriction: key is `F_J` by part,
/// value the member indices containing it.
fn links_by_restriction(slots: &[Vec<Element>], j: Mask) -> HashMap<Vec<Element>, Vec<usize>> {
    let mut groups: HashMap<Vec<Element>, Vec<usize>> = HashMap::new();
    for (idx, s) in slots.iter().enumerate() {
        let key: Vec<Element> = s
            .iter()
            .enumerate()
            .map(|(i, &e)| if j >> i & 1 == 1 { e } else { 0 })
            .collect();
        groups.entry(key).or_default().push(idx);
    }
    groups
}

/// The most frequent element of a link outside `key`, with its count.
fn heaviest(slots: &[Vec<Element>], group: &[usize], j: Mask) -> (Element, usize) {
    let mut count: BTreeMap<Element, usize> = BTreeMap::new();
    for &idx in group {
        for (i, &e) in slots[idx].iter().enumerate() {
            if j >> i & 1 == 0 {
                *count.entry(e).or_default() += 1;
            }
        }
    }
    count.into_iter().fold(
        (0, 0),
        |best, (e, c)| if c > best.1 { (e, c) } else { best },
    )
}

/// Checks the regularity predicates for `sub` with threshold `s`.
pub fn check_regularity(sub: &Family, partition: &KPartition, s: u32) -> RegularityVerdict {
    let Ok(slots) = partition.transversals(sub) else {
        return RegularityVerdict {
            k_partite: false,
            links_large: false,
            links_diverse: false,
            closed_under_intersection: false,
        };
    };
    let masks = int_masks(&slots);
    let (mut large, mut diverse) = (true, true);
    for &j in &masks {
        for group in links_by_restriction(&slots, j).values() {
            large &= group.len() >= s as usize;
            diverse &= heaviest(&slots, group, j).1 * s as usize <= group.len();
        }
    }
    RegularityVerdict {
        k_partite: f_k_matches(sub, partition),
        links_large: large,
        links_diverse: diverse,
        closed_under_intersection: closed_masks(&masks),
    }
}

fn f_k_matches(f: &Family, partition: &KPartition) -> bool {
    f.k() == partition.k() && is_k_partite(f, partition)
}

/// One full pass over `Int(sub)` in increasing `|J|`. Removes the members
/// behind the first offending `J` and reports it; `None` when clean.
fn peel_once(slots: &mut Vec<Vec<Element>>, s: usize) -> Option<PeelPhase> {
    for j in int_masks(slots) {
        let groups = links_by_restriction(slots, j);
        let mut doomed = vec![false; slots.len()];
        let mut phase = PeelPhase {
            j_size: j.count_ones(),
            ..Default::default()
        };
        for group in groups.values() {
            if group.len() < s {
                for &idx in group {
                    doomed[idx] = true;
                }
                phase.removed_small += group.len();
                continue;
            }
            let (v, c) = heaviest(slots, group, j);
            if c * s > group.len() {
                for &idx in group.iter().filter(|&&idx| slots[idx].contains(&v)) {
                    doomed[idx] = true;
                }
                phase.removed_concentrated += c;
            }
        }
        if phase.removed_small + phase.removed_concentrated > 0 {
            let mut i = 0;
            slots.retain(|_| {
                i += 1;
                !doomed[i - 1]
            });
            return Some(phase);
        }
    }
    None
}

/// Finds a `k`-partite subfamily whose links `F(F_J)`, for `J ∈ Int(F)`,
/// all have at least `s` members and are `s`-diverse.
///
/// Tries [`REGULARIZE_ROUNDS`] seeded balanced random partitions, keeps the
/// largest transversal subfamily, then peels offending restrictions in
/// increasing `|J|`. A link that is too small loses all its members; a
/// link with an overweight element `v` loses the members containing `v`.
pub fn greedy_regularize(f: &Family, s: u32, seed: u64) -> Result<Regularized> {
    let (n, k) = (f.n(), f.k());
    if k == 0 || k > MAX_PARTS || k > n {
        return usage(format!(
            "regularizing needs 1 <= k <= min(n, {MAX_PARTS}), got k={k}"
        ));
    }
    if (s as u64) < 2 * k as u64 {
        return usage(format!("regularizing needs s >= 2k = {}, got {s}", 2 * k));
    }
    let verdict_empty = RegularityVerdict {
        k_partite: true,
        links_large: true,
        links_diverse: true,
        closed_under_intersection: true,
    };
    let mut report = RegularizeReport {
        s,
        seed,
        rounds: REGULARIZE_ROUNDS,
        chosen_round: None,
        input_size: f.len(),
        transversal_size: 0,
        final_size: 0,
        phases: Vec::new(),
        verdict: verdict_empty,
        accepted: false,
    };
    if f.len() < s as usize {
        let partition = random_partition(n, k, seed, 0);
        return Ok(Regularized {
            sub: Family::empty(n, k)?,
            partition,
            report,
        });
    }

    let (round, partition, mut slots) = (0..REGULARIZE_ROUNDS)
        .into_par_iter()
        .map(|round| {
            let partition = random_partition(n, k, seed, round);
            let slots: Vec<Vec<Element>> =
                f.iter().filter_map(|m| partition.transversal(m)).collect();
            (round, partition, slots)
        })
        .max_by(|a, b| a.2.len().cmp(&b.2.len()).then(b.0.cmp(&a.0)))
        .expect("at least one round");
    report.chosen_round = Some(round);
    report.transversal_size = slots.len();

    while slots.len() >= 2 {
        match peel_once(&mut slots, s as usize) {
            Some(phase) => report.phases.push(phase),
            None => break,
        }
    }
    if slots.len() == 1 {
        // A lone member has empty Int and cannot satisfy |link| >= s anyway.
        report.phases.push(PeelPhase {
            j_size: 0,
            removed_small: 1,
            removed_concentrated: 0,
        });
        slots.clear();
    }

    let members: Vec<KSet> = slots
        .iter()
        .map(|sl| KSet::from_sorted_unchecked(n, &sorted(sl)))
        .collect();
    let sub = Family::new(n, k, members)?;
    report.final_size = sub.len();
    report.verdict = if sub.is_empty() {
        verdict_empty
    } else {
        check_regularity(&sub, &partition, s)
    };
    report.accepted = !sub.is_empty() && report.verdict.all();
    Ok(Regularized {
        sub,
        partition,
        report,
    })
}

fn sorted(slots: &[Element]) -> Vec<Element> {
    let mut v = slots.to_vec();
    v.sort_unstable();
    v
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ShadowRatio {
    pub t_avoiding: bool,
    pub shadow_size: usize,
    pub family_size: usize,
    /// `|∂^(k-t-1)(F)| / |F|`.
    pub ratio: f64,
}

/// Whether `f` is `t`-avoiding, and its `(k-t-1)`-shadow ratio.
pub fn shadow_ratio(f: &Family, t: u32) -> Result<ShadowRatio> {
    let k = f.k();
    if k < 2 * t + 1 {
        return usage(format!("needs k >= 2t+1, have k={k}, t={t}"));
    }
    if f.is_empty() {
        return usage("shadow ratio of an empty family");
    }
    let shadow = f.shadow(k - t - 1)?.len();
    Ok(ShadowRatio {
        t_avoiding: f.count_t_pairs(t)? == 0,
        shadow_size: shadow,
        family_size: f.len(),
        ratio: shadow as f64 / f.len() as f64,
    })
}
