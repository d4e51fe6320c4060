//! Finitely presented ultragraphs.
//!
//! A presentation lists finitely many exceptional edges and any number of
//! tail families. A family covers the edges `e_{start + stride·k}` for
//! `k ≥ 0`; its `k`-th edge sits at position `q = start + k`, which is also
//! its source under [`SourceRule::Identity`]. With one family of stride 1
//! this is the usual "all edges from `start` on" tail.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::vertexset::{IndexSet, Kind, Universe};
use crate::Index;

/// Largest threshold an upper-tail range is materialized for.
pub const MAX_MATERIALIZED: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExceptionalEdge {
    pub index: Index,
    pub source: Index,
    pub range: IndexSet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceRule {
    /// The edge at position `q` leaves `v_q`.
    Identity,
    Constant(Index),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RangeRule {
    Constant(IndexSet),
    /// The edge at position `q` has range `{v_j : j ≥ q + offset}`.
    UpperTail {
        offset: Index,
    },
    /// The edge at position `q` has range `{v_{q + offset}}`.
    Shift {
        offset: Index,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TailRule {
    pub start: Index,
    pub stride: Index,
    pub source: SourceRule,
    pub range: RangeRule,
}

impl TailRule {
    pub fn new(start: Index, source: SourceRule, range: RangeRule) -> Self {
        TailRule { start, stride: 1, source, range }
    }

    pub fn with_stride(mut self, stride: Index) -> Self {
        self.stride = stride;
        self
    }

    /// Position of edge `e` within this family.
    pub fn position(&self, e: Index) -> Option<Index> {
        if e < self.start || !(e - self.start).is_multiple_of(self.stride) {
            return None;
        }
        Some(self.start + (e - self.start) / self.stride)
    }

    /// Edge at position `q`, if it fits in the index type.
    pub fn edge_at(&self, q: u64) -> Option<Index> {
        let start = u64::from(self.start);
        if q < start {
            return None;
        }
        let e = start + u64::from(self.stride) * (q - start);
        Index::try_from(e).ok()
    }

    fn source_at(&self, q: Index) -> Index {
        match self.source {
            SourceRule::Identity => q,
            SourceRule::Constant(v) => v,
        }
    }

    pub(crate) fn range_at(&self, q: Index, vertices: Universe) -> Result<IndexSet> {
        match &self.range {
            RangeRule::Constant(r) => Ok(r.clone()),
            RangeRule::UpperTail { offset } => {
                let t = u64::from(q) + u64::from(*offset);
                if t > MAX_MATERIALIZED {
                    return Err(Error::Capacity(t));
                }
                IndexSet::cofinite(vertices, vertices.start()..t as Index)
            }
            RangeRule::Shift { offset } => {
                let t = u64::from(q) + u64::from(*offset);
                let t = Index::try_from(t).map_err(|_| Error::Capacity(t))?;
                IndexSet::singleton(vertices, t)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degree {
    Finite(usize),
    Infinite,
}

/// A finite description of an ultragraph `(G⁰, 𝒢¹, r, s)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ultragraph {
    vertices: Universe,
    edges: BTreeMap<Index, ExceptionalEdge>,
    tails: Vec<TailRule>,
}

impl Ultragraph {
    pub fn new(vertices: Universe, edges: Vec<ExceptionalEdge>, tails: Vec<TailRule>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for edge in edges {
            if !vertices.contains(edge.source) {
                return Err(Error::InvalidPresentation(format!(
                    "source v{} of e{} is not a vertex",
                    edge.source, edge.index
                )));
            }
            check_range(&edge.range, vertices, edge.index)?;
            let index = edge.index;
            if map.insert(index, edge).is_some() {
                return Err(Error::DuplicateEdge(index));
            }
        }
        let max_exceptional = map.keys().next_back().copied();
        for tail in &tails {
            if tail.stride == 0 {
                return Err(Error::InvalidPresentation("tail stride must be positive".into()));
            }
            if let Some(m) = max_exceptional {
                if tail.start <= m {
                    return Err(Error::InvalidPresentation(format!(
                        "tail start e{} does not exceed exceptional edge e{m}",
                        tail.start
                    )));
                }
            }
            match tail.source {
                SourceRule::Identity => {
                    if vertices.is_finite() {
                        return Err(Error::InvalidPresentation(
                            "identity tail needs an infinite vertex universe".into(),
                        ));
                    }
                    if !vertices.contains(tail.start) {
                        return Err(Error::InvalidPresentation(format!(
                            "identity tail starting at e{} would leave v{}, which is not a vertex",
                            tail.start, tail.start
                        )));
                    }
                }
                SourceRule::Constant(v) => {
                    if !vertices.contains(v) {
                        return Err(Error::InvalidPresentation(format!("tail source v{v} is not a vertex")));
                    }
                }
            }
            match &tail.range {
                RangeRule::Constant(r) => check_range(r, vertices, tail.start)?,
                RangeRule::UpperTail { .. } | RangeRule::Shift { .. } => {
                    if vertices.is_finite() {
                        return Err(Error::InvalidPresentation(
                            "position-dependent ranges need an infinite vertex universe".into(),
                        ));
                    }
                }
            }
            if let RangeRule::Shift { offset } = tail.range {
                let first = u64::from(tail.start) + u64::from(offset);
                if first < u64::from(vertices.start()) {
                    return Err(Error::InvalidPresentation(format!(
                        "range v{first} of e{} is not a vertex",
                        tail.start
                    )));
                }
            }
        }
        for (i, a) in tails.iter().enumerate() {
            for b in &tails[i + 1..] {
                let g = a.stride.gcd(&b.stride);
                if (i64::from(a.start) - i64::from(b.start)).rem_euclid(i64::from(g)) == 0 {
                    return Err(Error::InvalidPresentation(format!(
                        "tail families starting at e{} and e{} overlap",
                        a.start, b.start
                    )));
                }
            }
        }
        Ok(Ultragraph { vertices, edges: map, tails })
    }

    pub fn vertices(&self) -> Universe {
        self.vertices
    }

    pub fn exceptional_edges(&self) -> impl Iterator<Item = &ExceptionalEdge> {
        self.edges.values()
    }

    pub fn tails(&self) -> &[TailRule] {
        &self.tails
    }

    pub fn has_infinite_edges(&self) -> bool {
        !self.tails.is_empty()
    }

    fn family_of(&self, e: Index) -> Option<(usize, Index)> {
        self.tails.iter().enumerate().find_map(|(f, t)| t.position(e).map(|q| (f, q)))
    }

    pub fn is_edge(&self, e: Index) -> bool {
        self.edges.contains_key(&e) || self.family_of(e).is_some()
    }

    pub fn source(&self, e: Index) -> Result<Index> {
        if let Some(edge) = self.edges.get(&e) {
            return Ok(edge.source);
        }
        let (f, q) = self.family_of(e).ok_or(Error::UnknownEdge(e))?;
        Ok(self.tails[f].source_at(q))
    }

    pub fn range(&self, e: Index) -> Result<IndexSet> {
        if let Some(edge) = self.edges.get(&e) {
            return Ok(edge.range.clone());
        }
        let (f, q) = self.family_of(e).ok_or(Error::UnknownEdge(e))?;
        self.tails[f].range_at(q, self.vertices)
    }

    /// Whether `v ∈ r(e)`, without materializing the range.
    pub fn range_contains(&self, e: Index, v: Index) -> Result<bool> {
        if let Some(edge) = self.edges.get(&e) {
            return Ok(edge.range.contains(v));
        }
        let (f, q) = self.family_of(e).ok_or(Error::UnknownEdge(e))?;
        let t = u64::from(q);
        Ok(match &self.tails[f].range {
            RangeRule::Constant(r) => r.contains(v),
            RangeRule::UpperTail { offset } => u64::from(v) >= t + u64::from(*offset),
            RangeRule::Shift { offset } => u64::from(v) == t + u64::from(*offset),
        })
    }

    /// Whether `s⁻¹(r(e))` is infinite.
    pub fn range_preimage_is_infinite(&self, e: Index) -> Result<bool> {
        let (cofinite_range, range) = if let Some(edge) = self.edges.get(&e) {
            (edge.range.is_infinite(), Some(&edge.range))
        } else {
            let (f, _) = self.family_of(e).ok_or(Error::UnknownEdge(e))?;
            match &self.tails[f].range {
                RangeRule::Constant(r) => (r.is_infinite(), Some(r)),
                RangeRule::UpperTail { .. } => (true, None),
                RangeRule::Shift { .. } => (false, None),
            }
        };
        for t in &self.tails {
            let hit = match t.source {
                SourceRule::Identity => cofinite_range,
                SourceRule::Constant(v) => match range {
                    Some(r) => r.contains(v),
                    None => self.range_contains(e, v)?,
                },
            };
            if hit {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Edges with index at most `max`, in increasing order.
    pub fn edges_up_to(&self, max: Index) -> Vec<Index> {
        (0..=max).filter(|&e| self.is_edge(e)).collect()
    }

    /// Number of edges when finite.
    pub fn edge_count(&self) -> Option<usize> {
        if self.has_infinite_edges() {
            None
        } else {
            Some(self.edges.len())
        }
    }

    /// One past the largest edge index mentioned explicitly (exceptional
    /// edges and family starts).
    pub fn edge_horizon(&self) -> Index {
        let a = self.edges.keys().next_back().map_or(0, |&e| e + 1);
        let b = self.tails.iter().map(|t| t.start + 1).max().unwrap_or(0);
        a.max(b)
    }

    /// One past the largest vertex index the presentation mentions. Beyond it
    /// every vertex has the same out-degree.
    pub fn vertex_horizon(&self) -> Index {
        let mut h = self.vertices.start();
        let mut bump = |v: Index| h = h.max(v.saturating_add(1));
        for edge in self.edges.values() {
            bump(edge.source);
            edge.range.support().iter().copied().for_each(&mut bump);
        }
        for tail in &self.tails {
            bump(tail.start);
            if let SourceRule::Constant(v) = tail.source {
                bump(v);
            }
            if let RangeRule::Constant(r) = &tail.range {
                r.support().iter().copied().for_each(&mut bump);
            }
        }
        h
    }

    pub fn all_edges(&self) -> EdgeSubset<'_> {
        EdgeSubset {
            graph: self,
            exceptional: self.edges.keys().copied().collect(),
            families: self.tails.iter().map(|_| Slice { cofinite: true, exceptions: BTreeSet::new() }).collect(),
        }
    }

    pub fn no_edges(&self) -> EdgeSubset<'_> {
        EdgeSubset {
            graph: self,
            exceptional: BTreeSet::new(),
            families: self.tails.iter().map(|_| Slice::default()).collect(),
        }
    }

    /// `s⁻¹(A)` as an exact edge subset.
    pub fn preimage(&self, a: &IndexSet) -> Result<EdgeSubset<'_>> {
        if a.universe() != self.vertices {
            return Err(Error::UniverseMismatch(a.universe().to_string(), self.vertices.to_string()));
        }
        let exceptional = self.edges.values().filter(|e| a.contains(e.source)).map(|e| e.index).collect();
        let families = self
            .tails
            .iter()
            .map(|t| match t.source {
                SourceRule::Constant(v) => Slice { cofinite: a.contains(v), exceptions: BTreeSet::new() },
                SourceRule::Identity => Slice {
                    cofinite: a.kind() == Kind::Cofinite,
                    exceptions: a
                        .support()
                        .iter()
                        .filter(|&&q| q >= t.start)
                        .filter_map(|&q| t.edge_at(u64::from(q)))
                        .collect(),
                },
            })
            .collect();
        Ok(EdgeSubset { graph: self, exceptional, families })
    }

    /// `s⁻¹(A)` as an [`IndexSet`] of edge indices; fails when the preimage is
    /// infinite and co-infinite.
    pub fn source_preimage(&self, a: &IndexSet) -> Result<IndexSet> {
        self.preimage(a)?.to_index_set()
    }

    pub fn out_degree(&self, v: Index) -> Degree {
        let mut n = self.edges.values().filter(|e| e.source == v).count();
        for t in &self.tails {
            match t.source {
                SourceRule::Constant(w) if w == v => return Degree::Infinite,
                SourceRule::Constant(_) => {}
                SourceRule::Identity => {
                    if v >= t.start {
                        n += 1;
                    }
                }
            }
        }
        Degree::Finite(n)
    }

    fn vertices_where(&self, pred: impl Fn(Degree) -> bool) -> IndexSet {
        match self.vertices {
            Universe::Finite { .. } => {
                let members: Vec<Index> = self.vertices.members().filter(|&v| pred(self.out_degree(v))).collect();
                IndexSet::finite(self.vertices, members).expect("members of the universe")
            }
            Universe::Infinite { start } => {
                let h = self.vertex_horizon();
                // every vertex at or past the horizon behaves like `h`
                if pred(self.out_degree(h)) {
                    let excluded: Vec<Index> = (start..h).filter(|&v| !pred(self.out_degree(v))).collect();
                    IndexSet::cofinite(self.vertices, excluded).expect("vertices")
                } else {
                    let members: Vec<Index> = (start..h).filter(|&v| pred(self.out_degree(v))).collect();
                    IndexSet::finite(self.vertices, members).expect("vertices")
                }
            }
        }
    }

    /// Vertices with `s⁻¹(v) = ∅`.
    pub fn sinks(&self) -> IndexSet {
        self.vertices_where(|d| d == Degree::Finite(0))
    }

    /// Vertices with `0 < |s⁻¹(v)| < ∞`.
    pub fn regular_vertices(&self) -> IndexSet {
        self.vertices_where(|d| matches!(d, Degree::Finite(n) if n > 0))
    }

    /// Vertices to inspect so that every vertex's behavior is represented.
    fn representative_vertices(&self) -> Vec<Index> {
        match self.vertices {
            Universe::Finite { .. } => self.vertices.members().collect(),
            Universe::Infinite { start } => (start..=self.vertex_horizon()).collect(),
        }
    }

    pub fn validate_hypotheses(&self) -> HypothesisReport {
        let infinite_edges = self.has_infinite_edges();

        let mut h2_witness = None;
        for edge in self.edges.values() {
            let ok = self.preimage(&edge.range).map(|p| p.complement().is_finite()).unwrap_or(false);
            if !ok {
                h2_witness = Some(edge.index);
                break;
            }
        }
        if h2_witness.is_none() {
            h2_witness =
                self.first_tail_edge_where(|r| self.preimage(r).map(|p| !p.complement().is_finite()).unwrap_or(true));
        }

        let h3_witness = self.representative_vertices().into_iter().find(|&v| {
            let single = IndexSet::singleton(self.vertices, v).expect("vertex");
            let p = self.preimage(&single).expect("same universe");
            !(p.is_finite() || p.complement().is_finite())
        });

        let sinks = self.sinks();
        let sink_witness = sinks.first();

        let non_sinks = sinks.complement();
        let mut h5_witness = None;
        for edge in self.edges.values() {
            if edge.range.intersect(&non_sinks).map(|s| s.is_empty()).unwrap_or(true) {
                h5_witness = Some(edge.index);
                break;
            }
        }
        if h5_witness.is_none() {
            h5_witness = self.first_tail_edge_where(|r| r.intersect(&non_sinks).map(|s| s.is_empty()).unwrap_or(true));
        }

        HypothesisReport {
            infinite_edges,
            range_preimages_cofinite: h2_witness.is_none(),
            vertex_preimages_split: h3_witness.is_none(),
            no_sinks: sink_witness.is_none(),
            ranges_reach_non_sinks: h5_witness.is_none(),
            h2_witness,
            h3_witness,
            sink_witness,
            h5_witness,
        }
    }

    /// Positions whose ranges represent every range of the family: one for
    /// a constant range, otherwise every position up to the vertex horizon
    /// (past it, ranges only move further out through uniform vertices).
    pub(crate) fn representative_positions(&self, t: &TailRule) -> std::ops::RangeInclusive<Index> {
        match t.range {
            RangeRule::Constant(_) => t.start..=t.start,
            _ => t.start..=t.start.max(self.vertex_horizon()),
        }
    }

    /// First tail edge whose range satisfies `bad`, checked on representative
    /// positions.
    fn first_tail_edge_where(&self, bad: impl Fn(&IndexSet) -> bool) -> Option<Index> {
        for t in &self.tails {
            for q in self.representative_positions(t) {
                let hit = t.range_at(q, self.vertices).map(|r| bad(&r)).unwrap_or(true);
                if hit {
                    return Some(t.edge_at(u64::from(q)).unwrap_or(t.start));
                }
            }
        }
        None
    }

    pub fn classify(&self) -> Classification {
        let singleton = |r: &IndexSet| r.kind() == Kind::Finite && r.support().len() == 1;
        let is_graph = self.edges.values().all(|e| singleton(&e.range))
            && self.tails.iter().all(|t| match &t.range {
                RangeRule::Constant(r) => singleton(r),
                RangeRule::Shift { .. } => true,
                RangeRule::UpperTail { .. } => false,
            });
        let sinks = self.sinks();
        let non_sinks = sinks.complement();
        let is_bouquet = is_graph
            && match non_sinks.members() {
                Some(&[w]) => {
                    let loop_at_w = |s: Index, r: &IndexSet| s == w && r.support() == [w];
                    self.edges.values().all(|e| loop_at_w(e.source, &e.range))
                        && self.tails.iter().all(|t| match (&t.source, &t.range) {
                            (SourceRule::Constant(s), RangeRule::Constant(r)) => loop_at_w(*s, r),
                            _ => false,
                        })
                }
                _ => false,
            };
        Classification { is_graph, is_bouquet, sinks, regular_vertices: self.regular_vertices() }
    }

    /// Whether the loop `α₁…αₙ` (read cyclically) has an exit.
    pub fn loop_has_exit(&self, lp: &[Index]) -> Result<bool> {
        let sinks = self.sinks();
        for (i, &e) in lp.iter().enumerate() {
            let next = lp[(i + 1) % lp.len()];
            let r = self.range(e)?;
            if !r.intersect(&sinks)?.is_empty() {
                return Ok(true);
            }
            let p = self.preimage(&r)?;
            let only_next = match p.finite_members() {
                Some(m) => m.iter().all(|&f| f == next),
                None => false,
            };
            if !only_next {
                return Ok(true);
            }
        }
        Ok(false)
    }

    pub fn check_condition_l(&self, max_loop_len: usize) -> Result<ConditionL> {
        if max_loop_len == 0 {
            return Err(Error::Usage("max_loop_len must be at least 1".into()));
        }
        let report = self.validate_hypotheses();
        if report.infinite_edges && report.range_preimages_cofinite {
            return Ok(ConditionL::Satisfied("H1 and H2 hold".into()));
        }
        let candidates: Vec<Index> = match self.edge_count() {
            Some(_) => self.edges.keys().copied().collect(),
            None => {
                let h = self.edge_horizon();
                let stride = self.tails.iter().map(|t| t.stride).max().unwrap_or(1);
                self.edges_up_to(h.saturating_add(stride.saturating_mul(max_loop_len as Index)))
            }
        };
        let mut info = BTreeMap::new();
        for &e in &candidates {
            info.insert(e, (self.source(e)?, self.range(e)?));
        }
        let mut found = None;
        let mut stack: Vec<Index> = Vec::new();
        for &first in &candidates {
            self.search_loops(first, &candidates, &info, max_loop_len, &mut stack, &mut found)?;
            if found.is_some() {
                break;
            }
        }
        if let Some(lp) = found {
            return Ok(ConditionL::Violated(lp));
        }
        match self.edge_count() {
            Some(n) if max_loop_len >= n => Ok(ConditionL::Satisfied(format!(
                "every loop of length at most {n} has an exit, which covers all primitive loops"
            ))),
            _ => Ok(ConditionL::UnknownUpTo(max_loop_len)),
        }
    }

    // Loops are enumerated once per rotation class: the first edge is the
    // smallest index occurring in the loop.
    fn search_loops(
        &self,
        first: Index,
        candidates: &[Index],
        info: &BTreeMap<Index, (Index, IndexSet)>,
        max_len: usize,
        stack: &mut Vec<Index>,
        found: &mut Option<Vec<Index>>,
    ) -> Result<()> {
        stack.push(first);
        let result = self.extend_loop(candidates, info, max_len, stack, found);
        stack.pop();
        result
    }

    fn extend_loop(
        &self,
        candidates: &[Index],
        info: &BTreeMap<Index, (Index, IndexSet)>,
        max_len: usize,
        stack: &mut Vec<Index>,
        found: &mut Option<Vec<Index>>,
    ) -> Result<()> {
        let first = stack[0];
        let last = *stack.last().expect("nonempty");
        let (first_source, _) = &info[&first];
        let (_, last_range) = &info[&last];
        if last_range.contains(*first_source) && !self.loop_has_exit(stack)? {
            *found = Some(stack.clone());
            return Ok(());
        }
        if stack.len() == max_len {
            return Ok(());
        }
        for &f in candidates.iter().filter(|&&f| f >= first) {
            let (fs, _) = &info[&f];
            if last_range.contains(*fs) {
                stack.push(f);
                self.extend_loop(candidates, info, max_len, stack, found)?;
                stack.pop();
                if found.is_some() {
                    return Ok(());
                }
            }
        }
        Ok(())
    }
}

fn check_range(r: &IndexSet, vertices: Universe, edge: Index) -> Result<()> {
    if r.universe() != vertices {
        return Err(Error::UniverseMismatch(r.universe().to_string(), vertices.to_string()));
    }
    if r.is_empty() {
        return Err(Error::EmptyRange(edge));
    }
    Ok(())
}

/// Portion of one tail family inside an [`EdgeSubset`]: all of the family
/// except `exceptions` when `cofinite`, otherwise exactly `exceptions`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Slice {
    pub cofinite: bool,
    pub exceptions: BTreeSet<Index>,
}

/// A subset of the edge set `𝒢¹` of a particular presentation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeSubset<'g> {
    graph: &'g Ultragraph,
    exceptional: BTreeSet<Index>,
    families: Vec<Slice>,
}

impl<'g> EdgeSubset<'g> {
    pub fn contains(&self, e: Index) -> bool {
        if self.graph.edges.contains_key(&e) {
            return self.exceptional.contains(&e);
        }
        match self.graph.family_of(e) {
            Some((f, _)) => self.families[f].cofinite != self.families[f].exceptions.contains(&e),
            None => false,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.families.iter().all(|s| !s.cofinite)
    }

    pub fn is_infinite(&self) -> bool {
        !self.is_finite()
    }

    pub fn is_empty(&self) -> bool {
        self.exceptional.is_empty() && self.families.iter().all(|s| !s.cofinite && s.exceptions.is_empty())
    }

    /// Complement inside `𝒢¹`.
    pub fn complement(&self) -> EdgeSubset<'g> {
        EdgeSubset {
            graph: self.graph,
            exceptional: self.graph.edges.keys().filter(|e| !self.exceptional.contains(e)).copied().collect(),
            families: self
                .families
                .iter()
                .map(|s| Slice { cofinite: !s.cofinite, exceptions: s.exceptions.clone() })
                .collect(),
        }
    }

    pub fn union(&self, other: &EdgeSubset<'g>) -> EdgeSubset<'g> {
        let families = self
            .families
            .iter()
            .zip(&other.families)
            .map(|(a, b)| match (a.cofinite, b.cofinite) {
                (true, true) => Slice { cofinite: true, exceptions: &a.exceptions & &b.exceptions },
                (true, false) => Slice { cofinite: true, exceptions: &a.exceptions - &b.exceptions },
                (false, true) => Slice { cofinite: true, exceptions: &b.exceptions - &a.exceptions },
                (false, false) => Slice { cofinite: false, exceptions: &a.exceptions | &b.exceptions },
            })
            .collect();
        EdgeSubset { graph: self.graph, exceptional: &self.exceptional | &other.exceptional, families }
    }

    pub fn intersect(&self, other: &EdgeSubset<'g>) -> EdgeSubset<'g> {
        self.complement().union(&other.complement()).complement()
    }

    /// Members in increasing order when the subset is finite.
    pub fn finite_members(&self) -> Option<Vec<Index>> {
        if !self.is_finite() {
            return None;
        }
        let mut all: BTreeSet<Index> = self.exceptional.clone();
        for s in &self.families {
            all.extend(s.exceptions.iter().copied());
        }
        Some(all.into_iter().collect())
    }

    pub fn members_below(&self, bound: Index) -> Vec<Index> {
        (0..bound).filter(|&e| self.contains(e)).collect()
    }

    /// Express the subset as a finite or cofinite set of edge indices.
    pub fn to_index_set(&self) -> Result<IndexSet> {
        self.as_index_set()?.ok_or_else(|| Error::NotFiniteOrCofinite(self.describe()))
    }

    fn as_index_set(&self) -> Result<Option<IndexSet>> {
        if let Some(m) = self.finite_members() {
            return IndexSet::finite(Universe::NATURALS, m).map(Some);
        }
        let tails = &self.graph.tails;
        let included: Vec<&TailRule> =
            tails.iter().zip(&self.families).filter(|(_, s)| s.cofinite).map(|(t, _)| t).collect();
        let period = included.iter().fold(1u64, |acc, t| acc.lcm(&u64::from(t.stride)));
        if period > MAX_MATERIALIZED {
            return Ok(None);
        }
        let covers = (0..period)
            .all(|r| included.iter().any(|t| r % u64::from(t.stride) == u64::from(t.start) % u64::from(t.stride)));
        if !covers {
            return Ok(None);
        }
        let mut bound = included.iter().map(|t| u64::from(t.start)).max().unwrap_or(0) + period;
        bound = bound.max(u64::from(self.graph.edge_horizon()));
        for s in &self.families {
            if let Some(&m) = s.exceptions.iter().next_back() {
                bound = bound.max(u64::from(m) + 1);
            }
        }
        let bound = Index::try_from(bound).map_err(|_| Error::Capacity(bound))?;
        let excluded: Vec<Index> = (0..bound).filter(|&e| !self.contains(e)).collect();
        IndexSet::cofinite(Universe::NATURALS, excluded).map(Some)
    }

    /// Render as an edge set, or describe it when it is neither finite nor
    /// cofinite.
    pub fn describe(&self) -> String {
        if let Ok(Some(s)) = self.as_index_set() {
            return s.labeled("e").to_string();
        }
        let mut parts: Vec<String> =
            self.graph.edges.keys().filter(|&&e| self.contains(e)).map(|e| format!("e{e}")).collect();
        parts.extend(
            self.graph
                .tails
                .iter()
                .zip(&self.families)
                .filter(|(_, s)| s.cofinite)
                .map(|(t, _)| format!("family(start=e{},stride={})", t.start, t.stride)),
        );
        format!("infinite edge set covering {}", parts.join(" + "))
    }
}

/// Outcome of the structural hypotheses check. Each flag is evaluated on its
/// own; a failing flag carries the first offending edge or vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypothesisReport {
    /// H1: `𝒢¹` is infinite.
    pub infinite_edges: bool,
    /// H2: `s⁻¹(r(e))ᶜ` is finite for every edge.
    pub range_preimages_cofinite: bool,
    /// H3: every `s⁻¹(v)` is finite or cofinite.
    pub vertex_preimages_split: bool,
    /// H4: no sinks.
    pub no_sinks: bool,
    /// H5: every `r(e)` contains a vertex that is not a sink.
    pub ranges_reach_non_sinks: bool,
    pub h2_witness: Option<Index>,
    pub h3_witness: Option<Index>,
    pub sink_witness: Option<Index>,
    pub h5_witness: Option<Index>,
}

impl HypothesisReport {
    /// H1 through H4, the hypotheses of the crossed-product realization.
    pub fn eligible(&self) -> bool {
        self.infinite_edges && self.range_preimages_cofinite && self.vertex_preimages_split && self.no_sinks
    }

    pub fn lines(&self) -> Vec<(String, String)> {
        let flag = |ok: bool, witness: Option<String>| match (ok, witness) {
            (true, _) => "true".to_string(),
            (false, Some(w)) => format!("false ({w})"),
            (false, None) => "false".to_string(),
        };
        vec![
            ("H1 infinite edges".into(), flag(self.infinite_edges, None)),
            (
                "H2 range preimages cofinite".into(),
                flag(self.range_preimages_cofinite, self.h2_witness.map(|e| format!("at e{e}"))),
            ),
            (
                "H3 vertex preimages finite or cofinite".into(),
                flag(self.vertex_preimages_split, self.h3_witness.map(|v| format!("at v{v}"))),
            ),
            ("H4 no sinks".into(), flag(self.no_sinks, self.sink_witness.map(|v| format!("sink v{v}")))),
            (
                "H5 ranges reach non-sinks".into(),
                flag(self.ranges_reach_non_sinks, self.h5_witness.map(|e| format!("at e{e}"))),
            ),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub is_graph: bool,
    pub is_bouquet: bool,
    pub sinks: IndexSet,
    pub regular_vertices: IndexSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConditionL {
    Satisfied(String),
    /// A loop with no exit.
    Violated(Vec<Index>),
    UnknownUpTo(usize),
}

impl fmt::Display for ConditionL {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConditionL::Satisfied(reason) => write!(f, "satisfied ({reason})"),
            ConditionL::Violated(lp) => {
                let w: Vec<String> = lp.iter().map(|e| format!("e{e}")).collect();
                write!(f, "violated (loop {} has no exit)", w.join("."))
            }
            ConditionL::UnknownUpTo(n) => write!(f, "unknown (no exitless loop up to length {n})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use proptest::prelude::*;

    fn vset(g: &Ultragraph, xs: &[Index]) -> IndexSet {
        IndexSet::finite(g.vertices(), xs.iter().copied()).unwrap()
    }

    #[test]
    fn lookups_on_skip_two() {
        let g = catalog::skip_two();
        assert_eq!(g.range(1).unwrap(), IndexSet::cofinite(Universe::POSITIVE, [1, 2]).unwrap());
        assert!(g.range(7).unwrap().is_full());
        assert_eq!(g.source(7).unwrap(), 7);
        assert!(matches!(g.source(0), Err(Error::UnknownEdge(0))));
    }

    #[test]
    fn upper_tail_sources_and_preimages() {
        let g = catalog::upper_tail();
        assert_eq!(g.source(4).unwrap(), 4);
        let p = g.preimage(&g.range(3).unwrap()).unwrap();
        assert_eq!(p.complement().finite_members().unwrap(), vec![1, 2]);
    }

    #[test]
    fn preimage_examples() {
        let b = catalog::bouquet();
        let all_edges = b.source_preimage(&vset(&b, &[1])).unwrap();
        assert_eq!(all_edges, IndexSet::cofinite(Universe::NATURALS, [0]).unwrap());
        let g = catalog::skip_two();
        assert_eq!(g.source_preimage(&vset(&g, &[2])).unwrap(), IndexSet::finite(Universe::NATURALS, [2]).unwrap());
    }

    #[test]
    fn split_source_preimage_is_mixed() {
        let g = catalog::split_source();
        let v1 = vset(&g, &[1]);
        assert!(matches!(g.source_preimage(&v1), Err(Error::NotFiniteOrCofinite(_))));
        let p = g.preimage(&v1).unwrap();
        assert!(p.is_infinite() && p.complement().is_infinite());
        assert!(p.contains(1) && p.contains(3) && !p.contains(2) && p.contains(99));
    }

    #[test]
    fn hypotheses() {
        let r = catalog::skip_two().validate_hypotheses();
        assert!(r.infinite_edges && r.range_preimages_cofinite && r.vertex_preimages_split);
        assert!(r.no_sinks && r.ranges_reach_non_sinks);

        let single = Ultragraph::new(
            Universe::first_n(1),
            vec![ExceptionalEdge { index: 0, source: 1, range: IndexSet::all(Universe::first_n(1)) }],
            vec![],
        )
        .unwrap();
        assert!(!single.validate_hypotheses().infinite_edges);

        let r = catalog::split_source().validate_hypotheses();
        assert!(!r.vertex_preimages_split);
        assert_eq!(r.h3_witness, Some(1));
        // as literally presented, v1 lies outside r(e_i) for every upper-tail edge
        assert!(!r.range_preimages_cofinite);
    }

    #[test]
    fn classification() {
        let c = catalog::bouquet().classify();
        assert!(c.is_graph && c.is_bouquet);
        assert!(c.regular_vertices.is_empty());

        let c = catalog::skip_two().classify();
        assert!(!c.is_graph);
        assert!(c.regular_vertices.is_full());

        let g = catalog::double_emitter();
        assert!(g.classify().regular_vertices.is_full());
        let v1 = vset(&g, &[1]);
        assert_eq!(g.preimage(&v1).unwrap().finite_members().unwrap(), vec![0, 1]);
    }

    #[test]
    fn condition_l() {
        assert_eq!(catalog::skip_two().check_condition_l(4).unwrap(), ConditionL::Satisfied("H1 and H2 hold".into()));
        let u = Universe::first_n(1);
        let single =
            Ultragraph::new(u, vec![ExceptionalEdge { index: 0, source: 1, range: IndexSet::all(u) }], vec![]).unwrap();
        assert_eq!(single.check_condition_l(3).unwrap(), ConditionL::Violated(vec![0]));

        let u = Universe::first_n(2);
        let two = Ultragraph::new(
            u,
            vec![
                ExceptionalEdge { index: 0, source: 1, range: IndexSet::finite(u, [1]).unwrap() },
                ExceptionalEdge { index: 1, source: 1, range: IndexSet::finite(u, [2]).unwrap() },
            ],
            vec![],
        )
        .unwrap();
        assert!(matches!(two.check_condition_l(2).unwrap(), ConditionL::Satisfied(_)));
        assert_eq!(two.check_condition_l(1).unwrap(), ConditionL::UnknownUpTo(1));

        // a two-cycle with no exit
        let cyc = Ultragraph::new(
            u,
            vec![
                ExceptionalEdge { index: 0, source: 1, range: IndexSet::finite(u, [2]).unwrap() },
                ExceptionalEdge { index: 1, source: 2, range: IndexSet::finite(u, [1]).unwrap() },
            ],
            vec![],
        )
        .unwrap();
        assert_eq!(cyc.check_condition_l(2).unwrap(), ConditionL::Violated(vec![0, 1]));
    }

    #[test]
    fn construction_errors() {
        let u = Universe::POSITIVE;
        let empty = Ultragraph::new(u, vec![ExceptionalEdge { index: 0, source: 1, range: IndexSet::none(u) }], vec![]);
        assert_eq!(empty, Err(Error::EmptyRange(0)));
        let e = ExceptionalEdge { index: 3, source: 1, range: IndexSet::all(u) };
        assert_eq!(Ultragraph::new(u, vec![e.clone(), e.clone()], vec![]), Err(Error::DuplicateEdge(3)));
        let tail = TailRule::new(2, SourceRule::Identity, RangeRule::Constant(IndexSet::all(u)));
        assert!(Ultragraph::new(u, vec![e], vec![tail.clone()]).is_err());
        let overlapping = vec![tail.clone().with_stride(2), TailRule { start: 4, ..tail.with_stride(4) }];
        assert!(Ultragraph::new(u, vec![], overlapping).is_err());
        let below = TailRule::new(0, SourceRule::Constant(1), RangeRule::Shift { offset: 0 });
        assert!(matches!(Ultragraph::new(u, vec![], vec![below]), Err(Error::InvalidPresentation(_))));
    }

    // Random presentations with an identity tail over edges/vertices < 64.
    fn arb_identity_graph() -> impl Strategy<Value = Ultragraph> {
        let range = (any::<bool>(), proptest::collection::vec(1u32..12, 0..4));
        (
            proptest::collection::vec((1u32..10, range), 0..5),
            6u32..10,
            any::<bool>(),
            proptest::collection::vec(1u32..12, 0..3),
        )
            .prop_filter_map("valid", |(edges, start, cof_tail, tail_excl)| {
                let u = Universe::POSITIVE;
                let edges: Vec<ExceptionalEdge> = edges
                    .into_iter()
                    .enumerate()
                    .map(|(i, (s, (c, xs)))| ExceptionalEdge {
                        index: i as Index,
                        source: s,
                        range: if c { IndexSet::cofinite(u, xs).unwrap() } else { IndexSet::finite(u, xs).unwrap() },
                    })
                    .collect();
                let range = if cof_tail {
                    IndexSet::cofinite(u, tail_excl).unwrap()
                } else {
                    IndexSet::finite(u, tail_excl).unwrap()
                };
                let tail = TailRule::new(start, SourceRule::Identity, RangeRule::Constant(range));
                Ultragraph::new(u, edges, vec![tail]).ok()
            })
    }

    fn arb_vertex_set() -> impl Strategy<Value = IndexSet> {
        (any::<bool>(), proptest::collection::vec(1u32..20, 0..5)).prop_map(|(c, xs)| {
            if c {
                IndexSet::cofinite(Universe::POSITIVE, xs).unwrap()
            } else {
                IndexSet::finite(Universe::POSITIVE, xs).unwrap()
            }
        })
    }

    proptest! {
        #[test]
        fn ranges_are_nonempty(g in arb_identity_graph()) {
            for e in g.edges_up_to(63) {
                prop_assert!(!g.range(e).unwrap().is_empty());
            }
        }

        #[test]
        fn preimage_matches_brute_force(g in arb_identity_graph(), a in arb_vertex_set(), b in arb_vertex_set()) {
            let brute = |s: &IndexSet| -> Vec<Index> {
                g.edges_up_to(63).into_iter().filter(|&e| s.contains(g.source(e).unwrap())).collect()
            };
            let pa = g.source_preimage(&a).unwrap();
            let pb = g.source_preimage(&b).unwrap();
            let pab = g.source_preimage(&a.union(&b).unwrap()).unwrap();
            prop_assert_eq!(pab.clone(), pa.union(&pb).unwrap());
            prop_assert_eq!(pab.members_below(64), brute(&a.union(&b).unwrap()));
            // complement inside 𝒢¹ against materialized indices
            for e0 in g.edges_up_to(20) {
                let r = g.range(e0).unwrap();
                let comp = g.preimage(&r).unwrap().complement();
                let brute_comp: Vec<Index> = g
                    .edges_up_to(63)
                    .into_iter()
                    .filter(|&e| !r.contains(g.source(e).unwrap()))
                    .collect();
                prop_assert_eq!(comp.members_below(64), brute_comp);
            }
        }
    }
}
