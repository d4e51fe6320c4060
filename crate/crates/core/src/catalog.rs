//! Ready-made presentations used in tests, documentation and the CLI data.

use crate::ultragraph::{ExceptionalEdge, RangeRule, SourceRule, TailRule, Ultragraph};
use crate::vertexset::{IndexSet, Universe};

const V: Universe = Universe::POSITIVE;

fn cof(xs: &[u32]) -> IndexSet {
    IndexSet::cofinite(V, xs.iter().copied()).expect("vertices")
}

fn edge(index: u32, source: u32, range: IndexSet) -> ExceptionalEdge {
    ExceptionalEdge { index, source, range }
}

/// `s(e_i) = v_i` for `i ≥ 1`, `r(e_1) = {v_3, v_4, …}` and every other range
/// is all of `G⁰`. Its edge shift is the one-step shift forbidding `e1e1` and
/// `e1e2`; K₀ is `Z ⊕ Z/2`.
pub fn skip_two() -> Ultragraph {
    Ultragraph::new(
        V,
        vec![edge(1, 1, cof(&[1, 2]))],
        vec![TailRule::new(2, SourceRule::Identity, RangeRule::Constant(IndexSet::all(V)))],
    )
    .expect("valid presentation")
}

/// `s(e_i) = v_i`, `r(e_i) = {v_j : j ≥ i}` for `i ≥ 1`.
pub fn upper_tail() -> Ultragraph {
    Ultragraph::new(V, vec![], vec![TailRule::new(1, SourceRule::Identity, RangeRule::UpperTail { offset: 0 })])
        .expect("valid presentation")
}

/// Two infinite tail families: the upper-tail edges
/// `e_2, e_4, e_6, …` leave `v_2, v_3, v_4, …`, while `e_1, e_3, e_5, …` all
/// leave `v_1` with range `G⁰`. Here `s⁻¹(v_1)` is infinite and so is its
/// complement.
pub fn split_source() -> Ultragraph {
    Ultragraph::new(
        V,
        vec![edge(1, 1, IndexSet::all(V))],
        vec![
            TailRule::new(2, SourceRule::Identity, RangeRule::UpperTail { offset: 0 }).with_stride(2),
            TailRule::new(3, SourceRule::Constant(1), RangeRule::Constant(IndexSet::all(V))).with_stride(2),
        ],
    )
    .expect("valid presentation")
}

/// `v_1` emits `e_0` (range `G⁰∖{v_2}`) and `e_1` (range `G⁰∖{v_1,v_2}`),
/// `r(e_2) = G⁰∖{v_1,v_2}`, and `s(e_i) = v_i`, `r(e_i) = G⁰` for `i ≥ 3`.
pub fn double_emitter() -> Ultragraph {
    Ultragraph::new(
        V,
        vec![edge(0, 1, cof(&[2])), edge(1, 1, cof(&[1, 2])), edge(2, 2, cof(&[1, 2]))],
        vec![TailRule::new(3, SourceRule::Identity, RangeRule::Constant(IndexSet::all(V)))],
    )
    .expect("valid presentation")
}

/// One vertex with loops `e_1, e_2, …`; its edge shift is the full shift.
pub fn bouquet() -> Ultragraph {
    let u = Universe::first_n(1);
    Ultragraph::new(u, vec![], vec![TailRule::new(1, SourceRule::Constant(1), RangeRule::Constant(IndexSet::all(u)))])
        .expect("valid presentation")
}

/// The graph `v_i → v_{i+1}` with edges `e_i`, `i ≥ 1`.
pub fn successor_chain() -> Ultragraph {
    Ultragraph::new(V, vec![], vec![TailRule::new(1, SourceRule::Identity, RangeRule::Shift { offset: 1 })])
        .expect("valid presentation")
}
