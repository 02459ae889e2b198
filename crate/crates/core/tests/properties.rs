use std::sync::Arc;

use proptest::prelude::*;

use orbikit::category::validate_category;
use orbikit::complexes::{grothendieck, poset_category, validate_complex, ComplexOfGroups};
use orbikit::constructors::{action_groupoid, group_as_groupoid, pair_groupoid, unit_groupoid, GroupAction};
use orbikit::group::GroupDesc;
use orbikit::groupoid::{validate_groupoid, FiniteGroupoid};
use orbikit::gspaces::{covering_from_gxset, fiber_functor, gxset_isomorphism, pi1, GxSet};
use orbikit::inertia::{center_dimension, convolution_algebra, inertia_groupoid, k0_rank};
use orbikit::morphisms::{is_equivalence, morita_equivalent, skeleton};
use orbikit::nerve::{chain_complex, homology};

fn group(choice: usize) -> GroupDesc {
    match choice % 8 {
        0 => GroupDesc::trivial(),
        1 => GroupDesc::cyclic(2),
        2 => GroupDesc::cyclic(3),
        3 => GroupDesc::cyclic(4),
        4 => GroupDesc::symmetric(3),
        5 => GroupDesc::dihedral(4),
        6 => GroupDesc::quaternion(),
        _ => GroupDesc::direct_product(&GroupDesc::cyclic(2), &GroupDesc::cyclic(2)),
    }
}

/// `K` acting on the left cosets of the chosen subgroups.
fn coset_action(k: &GroupDesc, picks: &[usize]) -> GroupAction {
    let subs = k.subgroups();
    let mut carrier = Vec::new();
    let mut label = Vec::new();
    for (b, &p) in picks.iter().enumerate() {
        let h = &subs[p % subs.len()];
        let mut rep_of = vec![usize::MAX; k.order()];
        for g in 0..k.order() {
            if rep_of[g] == usize::MAX {
                for &x in h {
                    rep_of[k.mul(g, x)] = carrier.len();
                }
                carrier.push(format!("{b}/{g}"));
            }
        }
        label.push(rep_of);
    }
    let m = carrier.len();
    let mut act = vec![0; k.order() * m];
    for rep_of in &label {
        for g in 0..k.order() {
            for a in 0..k.order() {
                act[a * m + rep_of[g]] = rep_of[k.mul(a, g)];
            }
        }
    }
    GroupAction::new(k.clone(), carrier, act).unwrap()
}

fn groupoid() -> impl Strategy<Value = Arc<FiniteGroupoid>> {
    prop_oneof![
        (1usize..6).prop_map(|n| Arc::new(unit_groupoid(n))),
        (1usize..5).prop_map(|n| Arc::new(pair_groupoid(n))),
        (0usize..8).prop_map(|c| Arc::new(group_as_groupoid(&group(c)))),
        (0usize..8, prop::collection::vec(0usize..16, 1..3))
            .prop_map(|(c, picks)| Arc::new(action_groupoid(&coset_action(&group(c), &picks)))),
    ]
}

fn small_groupoid() -> impl Strategy<Value = Arc<FiniteGroupoid>> {
    groupoid().prop_filter("nerve too large", |g| {
        (0..g.num_objects()).map(|x| g.outgoing(x).len().pow(4)).sum::<usize>() <= 20_000
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn constructions_are_groupoids(g in groupoid()) {
        prop_assert!(validate_groupoid(&g).is_valid());
        let back = FiniteGroupoid::from_tables(&g.to_tables()).unwrap();
        prop_assert_eq!(&back, &*g);
    }

    #[test]
    fn restriction_stays_a_groupoid(g in groupoid(), mask in any::<u64>()) {
        let mut objs: Vec<usize> = (0..g.num_objects()).filter(|x| mask >> (x % 64) & 1 == 1).collect();
        if objs.is_empty() {
            objs.push(0);
        }
        let sub = g.restrict(&objs).unwrap();
        prop_assert!(validate_groupoid(&sub).is_valid());
        prop_assert_eq!(sub.num_objects(), objs.len());
    }

    #[test]
    fn boundary_squares_to_zero(g in small_groupoid()) {
        let cx = chain_complex(&g, 4).unwrap();
        prop_assert_eq!(cx.square_zero_failure().unwrap(), None);
    }

    #[test]
    fn skeleton_is_an_equivalence(g in small_groupoid()) {
        let (s, incl) = skeleton(&g);
        prop_assert!(is_equivalence(&incl).unwrap().is_ok());
        prop_assert!(morita_equivalent(&s, &g).is_equivalent());
        prop_assert_eq!(s.num_objects(), g.num_orbits());
        let (hs, hg) = (homology(&s, 4).unwrap(), homology(&g, 4).unwrap());
        for n in 0..4 {
            prop_assert_eq!(hs.degree(n), hg.degree(n));
        }
    }

    #[test]
    fn class_functions_count_inertia_orbits(g in groupoid()) {
        let (lambda, _) = inertia_groupoid(&g).unwrap();
        let z = center_dimension(&convolution_algebra(&g).unwrap());
        prop_assert_eq!(z, lambda.num_orbits());
        prop_assert_eq!(z, k0_rank(&g).unwrap());
    }

    #[test]
    fn coverings_round_trip(c in 0usize..8, picks in prop::collection::vec(0usize..16, 1..4)) {
        let k = group(c);
        let g = Arc::new(group_as_groupoid(&k));
        let k = pi1(&g, 0).unwrap();
        let subs = k.subgroups();
        let parts: Vec<GxSet> = picks.iter().map(|&p| GxSet::cosets(k.clone(), &subs[p % subs.len()]).unwrap()).collect();
        let s = GxSet::sum(&parts).unwrap();
        let e = covering_from_gxset(&g, 0, &s).unwrap();
        let back = fiber_functor(&e, 0).unwrap();
        prop_assert!(gxset_isomorphism(&s, &back).is_some());
    }

    #[test]
    fn nested_subgroups_give_a_category(c in 0usize..8, gens in prop::collection::vec(0usize..8, 3)) {
        let k = group(c);
        let names = ["a", "b", "c"];
        let idx = Arc::new(poset_category(&names, &[(0, 1), (1, 2)]).unwrap());
        let subs: Vec<Vec<usize>> = (1..=3)
            .map(|i| k.generated_subgroup(&gens[..i].iter().map(|&g| g % k.order()).collect::<Vec<_>>()))
            .collect();
        let f = ComplexOfGroups::from_subgroups(idx, &k, &subs).unwrap();
        prop_assert!(validate_complex(&f).is_valid());
        let total = grothendieck(&f).unwrap();
        prop_assert!(validate_category(&total).is_valid());
        let arrows: usize = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)].iter().map(|&(_, j)| subs[j].len()).sum();
        prop_assert_eq!(total.num_arrows(), arrows);
    }
}
