mod common;

use coex_core::canonical::MvEffectAlgebra;
use coex_core::effects::{Effect, IntervalEffectAlgebra};
use coex_core::fixtures;
use coex_core::groups::{ConeSpec, Group, GroupElement, HermitianMatrix, IntVector, IntVectorGroup};
use coex_core::observables::observable_from_witness;
use coex_core::witness::{beta_recovery_check, d_value, d_value_rec, BetaTable, GroundSet, VerifiedWitness};
use common::{ints, mobius_int};
use proptest::prelude::*;

fn cone_strategy() -> impl Strategy<Value = ConeSpec> {
    (1usize..=2).prop_flat_map(|dim| {
        let functional = prop::collection::vec(1i64..=2, dim);
        let gens = prop::collection::vec(prop::collection::vec(-2i64..=3, dim), 1..=3);
        (functional, gens).prop_filter_map("f(g) > 0", |(f, gens)| {
            let f = IntVector::new(f).ok()?;
            let gens: Vec<IntVector> = gens.into_iter().map(|g| IntVector::new(g).unwrap()).collect();
            ConeSpec::new(gens, Some(f)).ok()
        })
    })
}

fn vec_strategy(dim: usize) -> impl Strategy<Value = IntVector> {
    prop::collection::vec(-4i64..=6, dim).prop_map(|v| IntVector::new(v).unwrap())
}

/// Every coefficient vector with `k_i · f(g_i) ≤ f(x)`, tried one by one.
fn box_contains(cone: &ConeSpec, x: &IntVector) -> bool {
    let w = cone.weight(x);
    if w < 0 {
        return false;
    }
    let bounds: Vec<i128> = cone.generators().iter().map(|g| w / cone.weight(g)).collect();
    let mut k = vec![0i128; bounds.len()];
    loop {
        let mut sum = vec![0i128; x.dimension()];
        for (g, &c) in cone.generators().iter().zip(&k) {
            for (s, &e) in sum.iter_mut().zip(g.entries()) {
                *s += c * e as i128;
            }
        }
        if sum.iter().zip(x.entries()).all(|(&s, &e)| s == e as i128) {
            return true;
        }
        let mut i = 0;
        loop {
            if i == k.len() {
                return false;
            }
            if k[i] < bounds[i] {
                k[i] += 1;
                break;
            }
            k[i] = 0;
            i += 1;
        }
    }
}

proptest! {
    #[test]
    fn cone_membership_matches_box_enumeration(cone in cone_strategy(), raw in prop::collection::vec(-4i64..=6, 2)) {
        let x = IntVector::new(raw[..cone.dimension()].to_vec()).unwrap();
        prop_assert_eq!(cone.contains(&x), box_contains(&cone, &x));
    }

    #[test]
    fn cone_is_conical_monoid(cone in cone_strategy(), a in vec_strategy(2), b in vec_strategy(2)) {
        let d = cone.dimension();
        let x = IntVector::new(a.entries()[..d].to_vec()).unwrap();
        let y = IntVector::new(b.entries()[..d].to_vec()).unwrap();
        if cone.contains(&x) && cone.contains(&y) {
            prop_assert!(cone.contains(&x.checked_add(&y).unwrap()));
        }
        if cone.contains(&x) && cone.contains(&x.checked_neg().unwrap()) {
            prop_assert!(x.is_zero());
        }
        prop_assert!(cone.contains(&IntVector::zeros(d)));
    }

    #[test]
    fn order_is_translation_invariant(cone in cone_strategy(), a in vec_strategy(2), b in vec_strategy(2), c in vec_strategy(2)) {
        let d = cone.dimension();
        let cut = |v: &IntVector| GroupElement::int(&v.entries()[..d]);
        for g in [Group::Int(IntVectorGroup::cone(cone.clone())), Group::Int(IntVectorGroup::coordinatewise(d).unwrap())] {
            let (x, y, z) = (cut(&a), cut(&b), cut(&c));
            prop_assert_eq!(g.leq(&x, &y).unwrap(), g.leq(&x.add(&z).unwrap(), &y.add(&z).unwrap()).unwrap());
        }
    }

    #[test]
    fn diagonal_psd(values in prop::collection::vec(-1.0f64..1.0, 1..=4)) {
        let m = HermitianMatrix::diagonal(&values);
        let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
        prop_assert!((m.min_eigenvalue() - min).abs() < 1e-12);
        let alg = fixtures::hermitian(values.len(), 1e-9);
        prop_assert_eq!(alg.group().is_positive(&GroupElement::Hermitian(m)), min >= -1e-9);
    }

    #[test]
    fn recurrence_and_inversion(n in 0usize..=4, seed in prop::collection::vec(0i64..=2, 16), pick in 0usize..24) {
        // C2xC3 has 6 elements; take n distinct ones by rotating from `pick`
        let alg = fixtures::c2xc3();
        let all = alg.enumerate_effects().unwrap();
        let ground = GroundSet::new(&alg, (0..n).map(|i| all[(pick + i) % all.len()].clone()).collect()).unwrap();
        let table: Vec<Effect> = (0..1usize << n).map(|z| all[(seed[z] as usize * 2 + z) % all.len()].clone()).collect();
        let raw: Vec<Vec<i64>> = table.iter().map(ints).collect();
        let beta = BetaTable::new(ground.clone(), table).unwrap();
        for a in ground.subsets() {
            for x in a.subsets() {
                let direct = d_value(&beta, x, a).unwrap();
                prop_assert_eq!(&direct, &d_value_rec(&beta, x, a).unwrap());
                prop_assert_eq!(&direct, &GroupElement::int(&mobius_int(&raw, x.bits(), a.bits())));
                prop_assert!(beta_recovery_check(&alg, &beta, x, a).unwrap());
            }
        }
    }

    #[test]
    fn observables_are_additive(picks in prop::collection::btree_set(0usize..6, 1..=3), ev1 in 0u32..256, ev2 in 0u32..256) {
        let alg: IntervalEffectAlgebra = fixtures::c2xc3();
        let all = alg.enumerate_effects().unwrap();
        let ground = GroundSet::new(&alg, picks.iter().map(|&i| all[i].clone()).collect()).unwrap();
        let mv = MvEffectAlgebra::new(&alg).unwrap();
        let witness = VerifiedWitness::new(&alg, mv.meet_witness(ground.clone()).unwrap()).unwrap();
        let alpha = observable_from_witness(&alg, &witness, ground.full()).unwrap();
        let m = alpha.len() as u32;
        let mask = (1u32 << m) - 1;
        let (e1, e2) = (ev1 & mask, ev2 & mask & !ev1);
        let idx = |e: u32| (0..m as usize).filter(|k| e >> k & 1 == 1).collect::<Vec<_>>();
        let joint = alpha.eval(&alg, &idx(e1 | e2)).unwrap();
        let parts = alpha.eval(&alg, &idx(e1)).unwrap().value().add(alpha.eval(&alg, &idx(e2)).unwrap().value()).unwrap();
        prop_assert_eq!(joint.value(), &parts);
        prop_assert_eq!(alpha.eval(&alg, &idx(mask)).unwrap(), alg.unit_effect());
    }
}
