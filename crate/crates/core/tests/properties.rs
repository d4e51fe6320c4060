use num_bigint::BigInt;
use proptest::prelude::*;

use ultrashift::catalog;
use ultrashift::invariants::obstruction;
use ultrashift::ktheory::boundary_matrix;
use ultrashift::partialaction::PartialAction;
use ultrashift::shiftspace::{EdgeShift, Word};
use ultrashift::ultragraph::Ultragraph;
use ultrashift::vertexset::{IndexSet, Universe};
use ultrashift::Index;

fn arb_vertex_set() -> impl Strategy<Value = IndexSet> {
    (any::<bool>(), proptest::collection::vec(1 as Index..9, 0..4)).prop_map(|(cofinite, xs)| {
        if cofinite {
            IndexSet::cofinite(Universe::POSITIVE, xs).unwrap()
        } else {
            IndexSet::finite(Universe::POSITIVE, xs).unwrap()
        }
    })
}

fn arb_word() -> impl Strategy<Value = Word> {
    let letters = || proptest::collection::vec(1 as Index..10, 0..4);
    (letters(), letters(), any::<bool>()).prop_map(|(pre, period, periodic)| {
        if periodic && !period.is_empty() {
            Word::periodic(pre, period).unwrap()
        } else {
            Word::finite(pre)
        }
    })
}

fn graphs() -> [Ultragraph; 2] {
    [catalog::skip_two(), catalog::upper_tail()]
}

proptest! {
    #[test]
    fn xa_lattice_laws(a in arb_vertex_set(), b in arb_vertex_set(), x in arb_word()) {
        for g in graphs() {
            if !EdgeShift::new(&g).unwrap().contains(&x).unwrap() {
                continue;
            }
            let act = PartialAction::new(&g).unwrap();
            let xa = act.in_xa(&a, &x).unwrap();
            let xb = act.in_xa(&b, &x).unwrap();
            prop_assert_eq!(act.in_xa(&a.intersect(&b).unwrap(), &x).unwrap(), xa && xb);
            prop_assert_eq!(act.in_xa(&a.union(&b).unwrap(), &x).unwrap(), xa || xb);
        }
    }
}

#[test]
fn obstruction_is_symmetric() {
    let all = [
        catalog::skip_two(),
        catalog::upper_tail(),
        catalog::split_source(),
        catalog::double_emitter(),
        catalog::bouquet(),
        catalog::successor_chain(),
    ];
    for a in &all {
        for b in &all {
            let ab = obstruction(a, b);
            let ba = obstruction(b, a);
            assert_eq!(ab.verdict.is_not_conjugate(), ba.verdict.is_not_conjugate());
            assert_eq!(ab.left, ba.right);
        }
    }
}

#[test]
fn groups_are_stable_across_truncations() {
    for g in [catalog::skip_two(), catalog::double_emitter(), catalog::bouquet()] {
        let first = boundary_matrix::<BigInt>(&g, 2).unwrap().groups();
        for n in 3..=8 {
            assert_eq!(boundary_matrix::<BigInt>(&g, n).unwrap().groups(), first, "n = {n}");
        }
    }
}
