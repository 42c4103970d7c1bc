use proptest::prelude::*;

use supersat::binom::binomial;
use supersat::enumerate::all_ksets;
use supersat::johnson::{johnson_params, neighbors};
use supersat::kk::kk_shadow_lower_bound;
use supersat::solver::{rho_exact, rho_local_search};
use supersat::structure::{intersection_structure, is_k_partite, projection, KPartition};
use supersat::{Family, KSet, Params};

fn params(max_n: u32) -> impl Strategy<Value = Params> {
    (2..=max_n)
        .prop_flat_map(|n| (Just(n), 1..=n))
        .prop_flat_map(|(n, k)| (Just(n), Just(k), 0..k))
        .prop_map(|(n, k, t)| Params::new(n, k, t).unwrap())
}

/// A nonempty random subfamily of `C([n], k)`.
fn family(max_n: u32, max_k: u32) -> impl Strategy<Value = Family> {
    (2..=max_n)
        .prop_flat_map(move |n| (Just(n), 1..=n.min(max_k)))
        .prop_flat_map(|(n, k)| {
            let all: Vec<KSet> = all_ksets(n, k).collect();
            let len = all.len();
            (
                Just((n, k)),
                proptest::sample::subsequence(all, 1..=len.min(40)),
            )
        })
        .prop_map(|((n, k), members)| Family::new(n, k, members).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pair_counts_partition_all_pairs(f in family(9, 4)) {
        let total: u64 = (0..f.k()).map(|t| f.count_t_pairs(t).unwrap()).sum();
        let len = f.len() as u64;
        prop_assert_eq!(total, len * (len - 1) / 2);
    }

    #[test]
    fn link_and_restriction_agree(f in family(9, 4), e in 1u32..=9) {
        let e = e.min(f.n());
        let x = KSet::new(f.n(), &[e]).unwrap();
        let restricted = f.restrict_containing(&x);
        let link = f.link(&x);
        prop_assert_eq!(restricted.len(), link.len());
        prop_assert_eq!(restricted.len() as u64, f.degrees()[(e - 1) as usize]);
        prop_assert!(link.iter().all(|m| !m.contains(e)));
    }

    #[test]
    fn text_round_trip(f in family(10, 4)) {
        prop_assert_eq!(Family::parse(&f.to_text()).unwrap(), f);
    }

    #[test]
    fn shadow_respects_kruskal_katona(f in family(10, 5)) {
        for i in 1..f.k() {
            let shadow = f.shadow(i).unwrap().len() as f64;
            prop_assert!(shadow >= kk_shadow_lower_bound(f.len() as u128, f.k(), i).unwrap() - 1e-9);
        }
    }

    #[test]
    fn johnson_degree_is_regular(p in params(8)) {
        let jp = johnson_params(p).unwrap();
        for v in all_ksets(p.n, p.k).take(5) {
            prop_assert_eq!(neighbors(&v, p).unwrap().len() as u128, jp.degree);
        }
        prop_assert_eq!(jp.vertex_count, binomial(p.n as i64, p.k as i64).unwrap());
    }

    #[test]
    fn projections_of_pairs_lie_in_int(seed in 0u64..1000) {
        let (n, k) = (9u32, 3u32);
        let colour: Vec<u32> = (0..n).map(|e| (e + seed as u32) % k).collect();
        let part = KPartition::from_colouring(n, k, &colour).unwrap();
        let members: Vec<KSet> = all_ksets(n, k)
            .filter(|m| is_k_partite(&Family::new(n, k, vec![m.clone()]).unwrap(), &part))
            .enumerate()
            .filter(|(i, _)| !(*i as u64 * 7 + seed).is_multiple_of(3))
            .map(|(_, m)| m)
            .collect();
        let f = Family::new(n, k, members).unwrap();
        let st = intersection_structure(&f, &part, 1).unwrap();
        for (i, a) in f.iter().enumerate() {
            for b in &f.members()[i + 1..] {
                prop_assert!(st.contains(&projection(&a.intersection(b), &part).unwrap()));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn rho_is_monotone(p in params(6), ell in 0u128..20) {
        let order = binomial(p.n as i64, p.k as i64).unwrap();
        prop_assume!(ell < order);
        let a = rho_exact(p, ell, u64::MAX).unwrap();
        let b = rho_exact(p, ell + 1, u64::MAX).unwrap();
        prop_assert!(a.certified && b.certified);
        prop_assert!(a.value <= b.value);
        let heuristic = rho_local_search(p, ell + 1, 0, 2000).unwrap();
        prop_assert!(heuristic.value >= b.value);
    }
}
