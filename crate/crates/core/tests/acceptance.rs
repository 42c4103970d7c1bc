//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::collections::HashSet;
use std::process::ExitCode;
use std::time::Instant;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use supersat::binom::{binomial, checked_binomial};
use supersat::bounds::{
    averaging_upper_bound, construction_upper_bound, small_excess_value, turan_lower_bound,
};
use supersat::constructions::{sharpness_construction, sharpness_threshold, star_plus_star};
use supersat::enumerate::all_ksets;
use supersat::johnson::{independence_number, johnson_params};
use supersat::kk::{colex_segment, kk_shadow_lower_bound};
use supersat::solver::{rho_exact_profile, rho_exact_with, ExactOptions, SolveResult, Strategy};
use supersat::structure::{
    classify_structure, close_under_intersection, greedy_regularize, rank_of, Classification,
};
use supersat::{Family, KSet, Params};

/// Node budget per solve for the `n = 8` profiles.
const N8_BUDGET: u64 = 5_000_000;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(failures: &[String], detail: String) -> Outcome {
    match failures.first() {
        None => Outcome { pass: true, detail },
        Some(first) => Outcome {
            pass: false,
            detail: format!("{} failures, first: {first}", failures.len()),
        },
    }
}

fn c(n: i64, k: i64) -> u128 {
    binomial(n, k).unwrap()
}

fn popcount_meet(a: u32, b: u32) -> u32 {
    (a & b).count_ones()
}

/// `k`-subsets of `[n]` as bitmasks, by brute force over all masks.
fn ksets_masks(n: u32, k: u32) -> Vec<u32> {
    (0u32..1 << n).filter(|m| m.count_ones() == k).collect()
}

fn johnson_closed_forms() -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0;
    for n in 1..=10u32 {
        for k in 1..=n.min(4) {
            for t in 0..k {
                let p = Params::new(n, k, t).unwrap();
                let jp = johnson_params(p).unwrap();
                let verts = ksets_masks(n, k);
                let degrees: Vec<u128> = verts
                    .iter()
                    .map(|&a| {
                        verts
                            .iter()
                            .filter(|&&b| a != b && popcount_meet(a, b) == t)
                            .count() as u128
                    })
                    .collect();
                let edges: u128 = degrees.iter().sum::<u128>() / 2;
                let degree = c(k as i64, t as i64) * c((n - k) as i64, (k - t) as i64);
                let ok = jp.vertex_count == verts.len() as u128
                    && degrees.iter().all(|&d| d == jp.degree && d == degree)
                    && jp.edge_count == edges
                    && edges == jp.vertex_count * degree / 2;
                if !ok {
                    failures.push(format!("{p}: {jp:?} vs |V|={} |E|={edges}", verts.len()));
                }
                checked += 1;
            }
        }
    }
    outcome(&failures, format!("{checked} parameter triples"))
}

fn star_plus_star_values() -> Outcome {
    let mut failures = Vec::new();
    let mut cases: Vec<(u32, u32, u32, u128)> = Vec::new();
    for n in 14..=20 {
        for r in 1..=3 {
            cases.push((n, 5, 1, r));
        }
    }
    for n in 16..=18 {
        cases.push((n, 7, 2, 1));
    }
    for &(n, k, t, r) in &cases {
        let p = Params::new(n, k, t).unwrap();
        let fam = star_plus_star(p, r).unwrap().family;
        let got = fam.count_t_pairs(t).unwrap() as u128;
        let (ni, ki, ti) = (n as i64, k as i64, t as i64);
        let want = r * c(ki, ti) * c(ni - ki - ti - 1, ki - 2 * ti - 1);
        if got != want
            || small_excess_value(p, r).unwrap() != want
            || fam.len() as u128 != c(ni - ti - 1, ki - ti - 1) + r
        {
            failures.push(format!("{p} r={r}: {got} pairs, expected {want}"));
        }
    }
    outcome(&failures, format!("{} instances", cases.len()))
}

fn sharpness_values() -> Outcome {
    let mut failures = Vec::new();
    let mut checked = Vec::new();
    for (k, t) in [(5u32, 0u32), (5, 1), (6, 0), (6, 1), (7, 2)] {
        let mut feasible = 0;
        for n in (k + 1)..=40 {
            if feasible == 2 {
                break;
            }
            let p = Params::new(n, k, t).unwrap();
            let (ni, ki, ti) = (n as i64, k as i64, t as i64);
            if c(ni - ti - 1, ki - ti - 1) > 6000 {
                break;
            }
            let threshold = c(ni - 2 * ti - 1, ki - 2 * ti - 1) * (c(ki, ti) - 1);
            assert_eq!(sharpness_threshold(p).unwrap(), threshold);
            let mut any = false;
            for r in threshold + 1..=threshold + 2 {
                let Ok(con) = sharpness_construction(p, r) else {
                    continue;
                };
                any = true;
                let got = con.family.count_t_pairs(t).unwrap() as u128;
                let d = c(ni - ki - ti - 1, ki - 2 * ti - 1);
                let want = (r + c(ni - 2 * ti - 1, ki - 2 * ti - 1)) * (c(ki, ti) - 1) * d;
                let star = r * c(ki, ti) * d;
                if got != want || want >= star {
                    failures.push(format!(
                        "{p} r={r}: {got} pairs, formula {want}, star-plus-star {star}"
                    ));
                }
                checked.push(format!("({n},{k},{t},r={r})"));
            }
            if any {
                feasible += 1;
            }
        }
    }
    let first = checked.first().cloned().unwrap_or_default();
    if checked.is_empty() {
        failures.push("no feasible instance".into());
    }
    outcome(
        &failures,
        format!("{} instances, first {first}", checked.len()),
    )
}

struct Profile {
    p: Params,
    alpha: u128,
    results: Vec<SolveResult>,
}

fn profiles() -> Vec<Profile> {
    let mut params = Vec::new();
    for n in 1..=7u32 {
        for k in 1..=n.min(3) {
            for t in 0..k {
                params.push((Params::new(n, k, t).unwrap(), u64::MAX));
            }
        }
    }
    for t in 0..3 {
        params.push((Params::new(8, 3, t).unwrap(), N8_BUDGET));
    }
    params
        .into_iter()
        .map(|(p, budget)| {
            let (alpha, _) = independence_number(p, u64::MAX).unwrap();
            let opts = ExactOptions {
                budget,
                strategy: Strategy::Auto,
            };
            Profile {
                p,
                alpha: alpha as u128,
                results: rho_exact_profile(p, opts).unwrap(),
            }
        })
        .collect()
}

fn sandwich_consistency(profiles: &[Profile]) -> Outcome {
    let mut failures = Vec::new();
    let (mut certified, mut skipped) = (0, Vec::new());
    for pr in profiles {
        for r in &pr.results {
            if !r.certified {
                skipped.push(format!("{} l={}", pr.p, r.ell));
                continue;
            }
            certified += 1;
            let rho = r.value as u128;
            let lower = turan_lower_bound(pr.alpha, r.ell).unwrap();
            let mut upper = u128::MAX;
            if r.ell >= 2 {
                upper = upper.min(averaging_upper_bound(pr.p, r.ell).unwrap().floor);
            }
            if let Some(cb) = construction_upper_bound(pr.p, r.ell).unwrap() {
                upper = upper.min(cb.value as u128);
            }
            if !(lower <= rho && rho <= upper) {
                failures.push(format!(
                    "{} l={}: {lower} <= {rho} <= {upper} fails",
                    pr.p, r.ell
                ));
            }
        }
    }
    let detail = format!(
        "{certified} certified instances; uncertified within budget: [{}]",
        skipped.join(", ")
    );
    outcome(&failures, detail)
}

fn kruskal_katona() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut failures = Vec::new();
    for trial in 0..1000 {
        let n = rng.gen_range(2..=16u32);
        let k = rng.gen_range(2..=n.min(5));
        let mut all: Vec<KSet> = all_ksets(n, k).collect();
        all.shuffle(&mut rng);
        let size = rng.gen_range(1..=all.len().min(600));
        let f = Family::new(n, k, all[..size].to_vec()).unwrap();
        for i in 1..k {
            let shadow = f.shadow(i).unwrap().len() as f64;
            let bound = kk_shadow_lower_bound(size as u128, k, i).unwrap();
            if shadow < bound - 1e-9 {
                failures.push(format!(
                    "trial {trial} n={n} k={k} |f|={size} i={i}: {shadow} < {bound}"
                ));
            }
        }
    }
    let mut segments = 0;
    for n in 2..=16u32 {
        for k in 2..=n.min(5) {
            for x in k..=n {
                let m = c(x as i64, k as i64);
                let seg = colex_segment(m, n, k).unwrap();
                for i in 1..k {
                    let shadow = seg.shadow(i).unwrap().len() as f64;
                    let bound = kk_shadow_lower_bound(m, k, i).unwrap();
                    if (shadow - bound).abs() > 1e-9 * bound.max(1.0)
                        || shadow != c(x as i64, i as i64) as f64
                    {
                        failures.push(format!(
                            "colex n={n} k={k} x={x} i={i}: {shadow} vs {bound}"
                        ));
                    }
                }
                segments += 1;
            }
        }
    }
    outcome(
        &failures,
        format!("1000 random families, {segments} colex segments"),
    )
}

/// Random dense families: every `k`-subset of `[n]` kept with probability `q`.
fn regularized_edge_bound_fuzz() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut failures = Vec::new();
    let (mut tried, mut accepted, mut tight) = (0, 0, f64::INFINITY);
    while accepted < 150 && tried < 3000 {
        tried += 1;
        let k = rng.gen_range(2..=3u32);
        let n = if k == 2 {
            rng.gen_range(8..=24)
        } else {
            rng.gen_range(12..=21)
        };
        let t = rng.gen_range(0..k);
        let q: f64 = rng.gen_range(0.3..=1.0);
        let members: Vec<KSet> = all_ksets(n, k).filter(|_| rng.gen_bool(q)).collect();
        let f = Family::new(n, k, members).unwrap();
        let out = greedy_regularize(&f, 2 * k, tried).unwrap();
        if !out.report.accepted {
            continue;
        }
        let g = out.sub;
        let pairs = g.count_t_pairs(t).unwrap();
        if pairs == 0 {
            continue;
        }
        accepted += 1;
        let shadow = g.shadow(t).unwrap().len() as f64;
        let size = g.len() as f64;
        let bound = (k + t) as f64 * size * size / (4.0 * k as f64 * shadow);
        tight = tight.min(pairs as f64 / bound);
        if (pairs as f64) < bound {
            failures.push(format!(
                "n={n} k={k} t={t} |g|={}: {pairs} < {bound:.3}",
                g.len()
            ));
        }
    }
    if accepted < 100 {
        failures.push(format!(
            "only {accepted} accepted non-t-avoiding families out of {tried}"
        ));
    }
    outcome(
        &failures,
        format!("{accepted} accepted families from {tried} draws, min ratio {tight:.3}"),
    )
}

fn mask(set: &KSet) -> u32 {
    set.elements().fold(0, |m, e| m | 1 << (e - 1))
}

/// Every `(t+1)`-set `c` such that all members of size `>= t` contain `c`
/// and every proper superset of `c` is a member.
fn centers(members: &HashSet<u32>, k: u32, t: u32) -> Vec<u32> {
    let full = (1u32 << k) - 1;
    (0..=full)
        .filter(|c| c.count_ones() == t + 1)
        .filter(|&c| members.iter().all(|&m| m.count_ones() < t || m & c == c))
        .filter(|&c| {
            (0..full)
                .filter(|s| s & c == c)
                .all(|s| members.contains(&s))
        })
        .collect()
}

fn dichotomy_fuzz() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut failures = Vec::new();
    let (mut applied, mut type1, mut type2, mut draws) = (0, 0, 0, 0);
    while applied < 1500 && draws < 200_000 {
        draws += 1;
        let k = rng.gen_range(5..=9u32);
        let t = rng.gen_range(0..=((k - 3) / 2).min(2));
        let mut e: Vec<u32> = (1..=k).collect();
        let mut gens: Vec<KSet> = Vec::new();
        if rng.gen_bool(0.5) {
            e.shuffle(&mut rng);
            for &x in &e[(t + 1) as usize..] {
                gens.push(KSet::new(k, &(1..=k).filter(|&y| y != x).collect::<Vec<_>>()).unwrap());
            }
        }
        for _ in 0..rng.gen_range(0..2 * k) {
            e.shuffle(&mut rng);
            let size = rng.gen_range(0..k) as usize;
            gens.push(KSet::new(k, &e[..size]).unwrap());
        }
        if gens.is_empty() {
            continue;
        }
        let m = close_under_intersection(&gens, k).unwrap();
        if rank_of(&m, k).unwrap() + t + 1 < k {
            continue;
        }
        applied += 1;
        let masks: HashSet<u32> = m.iter().map(mask).collect();
        let v = classify_structure(&m, k, t).unwrap();
        let has_t = masks.iter().any(|x| x.count_ones() == t);
        match v.classification {
            Classification::Type1HasTSet if has_t => type1 += 1,
            Classification::Type2Center if !has_t => {
                let found = centers(&masks, k, t);
                let center = v.center.as_ref().map(mask);
                if found.len() != 1 || center != Some(found[0]) {
                    failures.push(format!(
                        "k={k} t={t} {m:?}: centers {found:?}, classifier {center:?}"
                    ));
                }
                type2 += 1;
            }
            other => failures.push(format!("k={k} t={t} {m:?}: {other:?} ({:?})", v.note)),
        }
    }
    if applied < 1000 {
        failures.push(format!("only {applied} families met the hypotheses"));
    }
    outcome(
        &failures,
        format!("{applied} families ({type1} type 1, {type2} type 2)"),
    )
}

fn monotone_and_threshold(profiles: &[Profile]) -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0;
    for pr in profiles {
        for w in pr.results.windows(2) {
            if w[0].certified && w[1].certified && w[1].value < w[0].value {
                failures.push(format!(
                    "{}: rho({}) = {} > rho({}) = {}",
                    pr.p, w[0].ell, w[0].value, w[1].ell, w[1].value
                ));
            }
        }
        for r in pr.results.iter().filter(|r| r.certified) {
            checked += 1;
            if (r.value == 0) != (r.ell <= pr.alpha) {
                failures.push(format!(
                    "{} l={}: rho={} with alpha={}",
                    pr.p, r.ell, r.value, pr.alpha
                ));
            }
        }
    }
    outcome(
        &failures,
        format!(
            "{checked} certified values over {} profiles",
            profiles.len()
        ),
    )
}

fn naive_rho(p: Params, ell: usize) -> u64 {
    let verts = ksets_masks(p.n, p.k);
    let adj: Vec<Vec<bool>> = verts
        .iter()
        .map(|&a| {
            verts
                .iter()
                .map(|&b| a != b && popcount_meet(a, b) == p.t)
                .collect()
        })
        .collect();
    (0..verts.len())
        .combinations(ell)
        .map(|s| {
            s.iter()
                .tuple_combinations()
                .filter(|(&a, &b)| adj[a][b])
                .count() as u64
        })
        .min()
        .unwrap_or(0)
}

fn oracle_equivalence() -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0;
    for n in 1..=12u32 {
        for k in 1..=n {
            let order = c(n as i64, k as i64);
            if order > 447 {
                continue;
            }
            for t in 0..k {
                let p = Params::new(n, k, t).unwrap();
                for ell in 0..=order {
                    if checked_binomial(order as i64, ell as i64).is_none_or(|x| x > 100_000) {
                        continue;
                    }
                    let opts = ExactOptions {
                        budget: u64::MAX,
                        strategy: Strategy::BranchAndBound,
                    };
                    let bb = rho_exact_with(p, ell, opts).unwrap();
                    let naive = naive_rho(p, ell as usize);
                    if !bb.certified || bb.value != naive {
                        failures.push(format!(
                            "{p} l={ell}: branch-and-bound {} vs naive {naive}",
                            bb.value
                        ));
                    }
                    checked += 1;
                }
            }
        }
    }
    outcome(&failures, format!("{checked} instances"))
}

fn main() -> ExitCode {
    let mut all_pass = true;
    let mut report = |id: u32, name: &str, run: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let o = run();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!(
            "[{verdict}] {id}. {name}: {} ({:.1}s)",
            o.detail,
            start.elapsed().as_secs_f64()
        );
        all_pass &= o.pass;
    };
    report(1, "Johnson closed forms", &mut johnson_closed_forms);
    report(2, "star-plus-star edge count", &mut star_plus_star_values);
    report(3, "sharpness construction", &mut sharpness_values);
    let start = Instant::now();
    let profiles = profiles();
    println!(
        "       exact profiles computed in {:.1}s",
        start.elapsed().as_secs_f64()
    );
    report(4, "sandwich consistency", &mut || {
        sandwich_consistency(&profiles)
    });
    report(5, "Kruskal-Katona", &mut kruskal_katona);
    report(
        6,
        "regularized families edge bound",
        &mut regularized_edge_bound_fuzz,
    );
    report(7, "intersection structure dichotomy", &mut dichotomy_fuzz);
    report(8, "monotonicity and zero threshold", &mut || {
        monotone_and_threshold(&profiles)
    });
    report(9, "branch-and-bound vs naive", &mut oracle_equivalence);
    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
