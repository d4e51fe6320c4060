//! Words of the full shift, the shift map, cylinders and shift-space
//! membership.
//!
//! Infinite words are always eventually periodic. A one-sided word over the
//! edge alphabet is one of
//!
//! - `@`, the empty sequence Ø,
//! - `e1.e5.e7`, a finite word,
//! - `e1.e2.(e3.e4)*`, the infinite word `e1 e2 e3 e4 e3 e4 ...`.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::ultragraph::{RangeRule, SourceRule, TailRule, Ultragraph};
use crate::vertexset::{parse_index, IndexSet, Universe};
use crate::Index;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Length {
    Finite(usize),
    Infinite,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Word {
    Empty,
    Finite(Vec<Index>),
    /// `pre` followed by `period` repeated forever, kept canonical.
    Periodic {
        pre: Vec<Index>,
        period: Vec<Index>,
    },
}

impl Word {
    pub fn finite(letters: Vec<Index>) -> Word {
        if letters.is_empty() {
            Word::Empty
        } else {
            Word::Finite(letters)
        }
    }

    /// Builds `pre·period^∞` with a primitive period and minimal preperiod.
    pub fn periodic(mut pre: Vec<Index>, mut period: Vec<Index>) -> Result<Word> {
        if period.is_empty() {
            return Err(Error::Usage("empty period".into()));
        }
        let n = period.len();
        if let Some(p) = (1..n).find(|&p| n.is_multiple_of(p) && (p..n).all(|i| period[i] == period[i - p])) {
            period.truncate(p);
        }
        while let (Some(&a), Some(&b)) = (pre.last(), period.last()) {
            if a != b {
                break;
            }
            pre.pop();
            period.rotate_right(1);
        }
        Ok(Word::Periodic { pre, period })
    }

    /// The constant word `e^∞`.
    pub fn repeat(e: Index) -> Word {
        Word::Periodic { pre: Vec::new(), period: vec![e] }
    }

    pub fn len(&self) -> Length {
        match self {
            Word::Empty => Length::Finite(0),
            Word::Finite(w) => Length::Finite(w.len()),
            Word::Periodic { .. } => Length::Infinite,
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Word::Empty)
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Word::Periodic { .. })
    }

    /// Letter at 0-based position `i`.
    pub fn letter(&self, i: usize) -> Option<Index> {
        match self {
            Word::Empty => None,
            Word::Finite(w) => w.get(i).copied(),
            Word::Periodic { pre, period } => {
                Some(if i < pre.len() { pre[i] } else { period[(i - pre.len()) % period.len()] })
            }
        }
    }

    pub fn first(&self) -> Option<Index> {
        self.letter(0)
    }

    /// The first `n` letters, or fewer for a short finite word.
    pub fn prefix(&self, n: usize) -> Vec<Index> {
        (0..n).map_while(|i| self.letter(i)).collect()
    }

    pub fn starts_with(&self, stem: &[Index]) -> bool {
        stem.iter().enumerate().all(|(i, &a)| self.letter(i) == Some(a))
    }

    /// Removes the first `n` letters.
    pub fn drop_prefix(&self, n: usize) -> Word {
        match self {
            Word::Empty => Word::Empty,
            Word::Finite(w) => Word::finite(w.get(n..).map(<[Index]>::to_vec).unwrap_or_default()),
            Word::Periodic { pre, period } => {
                if n <= pre.len() {
                    Word::Periodic { pre: pre[n..].to_vec(), period: period.clone() }
                } else {
                    let mut period = period.clone();
                    let k = (n - pre.len()) % period.len();
                    period.rotate_left(k);
                    Word::Periodic { pre: Vec::new(), period }
                }
            }
        }
    }

    /// `stem·self`.
    pub fn prepend(&self, stem: &[Index]) -> Word {
        match self {
            Word::Empty => Word::finite(stem.to_vec()),
            Word::Finite(w) => Word::Finite([stem, w].concat()),
            Word::Periodic { pre, period } => {
                Word::periodic([stem, pre].concat(), period.clone()).expect("period stays nonempty")
            }
        }
    }

    /// The letters needed to see every adjacent pair once, including the wrap
    /// of the period.
    fn adjacency_window(&self) -> Vec<Index> {
        match self {
            Word::Empty => Vec::new(),
            Word::Finite(w) => w.clone(),
            Word::Periodic { pre, period } => {
                let mut w = pre.clone();
                w.extend_from_slice(period);
                w.push(period[0]);
                w
            }
        }
    }

    pub fn parse(text: &str) -> Result<Word> {
        let text = text.trim();
        if text == "@" || text == "Ø" {
            return Ok(Word::Empty);
        }
        if text.is_empty() {
            return Err(Error::Usage("empty word; use @ for the empty sequence".into()));
        }
        let (head, period) = match text.find('(') {
            Some(open) => {
                let rest = &text[open + 1..];
                let body = rest
                    .strip_suffix(")*")
                    .ok_or_else(|| Error::Usage(format!("periodic part must end with ')*': {text}")))?;
                (text[..open].trim_end_matches('.'), Some(parse_letters(body)?))
            }
            None => (text, None),
        };
        let pre = if head.is_empty() { Vec::new() } else { parse_letters(head)? };
        match period {
            Some(p) => Word::periodic(pre, p),
            None => Ok(Word::finite(pre)),
        }
    }
}

fn parse_letters(text: &str) -> Result<Vec<Index>> {
    if text.trim().is_empty() {
        return Err(Error::Usage("empty letter list".into()));
    }
    text.split('.').map(|t| parse_index(t.trim())).collect()
}

fn write_letters(f: &mut fmt::Formatter<'_>, letters: &[Index]) -> fmt::Result {
    for (i, a) in letters.iter().enumerate() {
        if i > 0 {
            f.write_str(".")?;
        }
        write!(f, "e{a}")?;
    }
    Ok(())
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Word::Empty => f.write_str("@"),
            Word::Finite(w) => write_letters(f, w),
            Word::Periodic { pre, period } => {
                if !pre.is_empty() {
                    write_letters(f, pre)?;
                    f.write_str(".")?;
                }
                f.write_str("(")?;
                write_letters(f, period)?;
                f.write_str(")*")
            }
        }
    }
}

/// The shift map σ.
pub fn shift(x: &Word) -> Word {
    x.drop_prefix(1)
}

/// The generalized cylinder `Z(stem, excluded)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cylinder {
    stem: Vec<Index>,
    excluded: BTreeSet<Index>,
}

impl Cylinder {
    pub fn new(stem: Vec<Index>, excluded: impl IntoIterator<Item = Index>) -> Self {
        Cylinder { stem, excluded: excluded.into_iter().collect() }
    }

    pub fn stem(&self) -> &[Index] {
        &self.stem
    }

    /// A word equal to the stem is a member: the condition on the letter
    /// after the stem is vacuous when there is none.
    pub fn contains(&self, y: &Word) -> bool {
        if !y.starts_with(&self.stem) {
            return false;
        }
        match y.letter(self.stem.len()) {
            Some(a) => !self.excluded.contains(&a),
            None => true,
        }
    }
}

/// A finite set of forbidden blocks.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ForbiddenSet {
    words: Vec<Vec<Index>>,
}

impl ForbiddenSet {
    pub fn new(words: impl IntoIterator<Item = Vec<Index>>) -> Result<Self> {
        let set: BTreeSet<Vec<Index>> = words.into_iter().collect();
        if set.iter().any(Vec::is_empty) {
            return Err(Error::Usage("forbidden words must be nonempty".into()));
        }
        Ok(ForbiddenSet { words: set.into_iter().collect() })
    }

    pub fn words(&self) -> &[Vec<Index>] {
        &self.words
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn max_block_length(&self) -> usize {
        self.words.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Whether some forbidden word occurs in `letters`.
    pub fn occurs_in(&self, letters: &[Index]) -> bool {
        self.words.iter().any(|w| letters.windows(w.len()).any(|b| b == w.as_slice()))
    }

    /// Whether a forbidden word occurs starting at one of `starts`.
    fn occurs_starting_in(&self, letters: &[Index], starts: usize) -> bool {
        self.words.iter().any(|w| (0..starts).any(|i| letters.get(i..i + w.len()).is_some_and(|b| b == w.as_slice())))
    }

    /// Parses `forbid { e1.e1; e1.e2 }`. Letters may carry any alphabetic
    /// prefix (`a1`, `e1`) or none.
    pub fn parse(text: &str) -> Result<Self> {
        let body = strip_comments(text);
        let body = body.trim();
        let inner = body
            .strip_prefix("forbid")
            .map(str::trim_start)
            .and_then(|s| s.strip_prefix('{'))
            .and_then(|s| s.trim_end().strip_suffix('}'))
            .ok_or_else(|| Error::Usage("expected `forbid { w1; w2; ... }`".into()))?;
        let words = inner
            .split([';', ','])
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(parse_letters)
            .collect::<Result<Vec<_>>>()?;
        ForbiddenSet::new(words)
    }
}

fn strip_comments(text: &str) -> String {
    text.lines().map(|l| l.split('#').next().unwrap_or("")).collect::<Vec<_>>().join("\n")
}

impl fmt::Display for ForbiddenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("forbid {")?;
        for (i, w) in self.words.iter().enumerate() {
            f.write_str(if i == 0 { " " } else { "; " })?;
            write_letters(f, w)?;
        }
        f.write_str(" }")
    }
}

fn check_alphabet(alphabet: &Universe, x: &Word) -> Result<()> {
    for a in x.adjacency_window() {
        alphabet.check(a)?;
    }
    Ok(())
}

/// Membership in `X_F` over `alphabet`.
///
/// A finite word over an infinite alphabet is a member exactly when it has no
/// forbidden subblock: a letter fresh to `F` extends it infinitely often.
pub fn in_xf(forbidden: &ForbiddenSet, alphabet: &Universe, x: &Word) -> Result<bool> {
    check_alphabet(alphabet, x)?;
    Ok(match x {
        Word::Empty => !alphabet.is_finite(),
        Word::Finite(w) => !alphabet.is_finite() && !forbidden.occurs_in(w),
        Word::Periodic { pre, period } => {
            let window = pre.len() + 2 * period.len() + forbidden.max_block_length();
            let letters = x.prefix(window);
            !forbidden.occurs_starting_in(&letters, pre.len() + period.len())
        }
    })
}

/// The first adjacent pair `(e, f)` with `s(f) ∉ r(e)`.
pub fn path_violation(g: &Ultragraph, x: &Word) -> Result<Option<(Index, Index)>> {
    letters_violation(g, &x.adjacency_window())
}

fn letters_violation(g: &Ultragraph, letters: &[Index]) -> Result<Option<(Index, Index)>> {
    if let Some(&last) = letters.last() {
        g.source(last)?;
    }
    for pair in letters.windows(2) {
        if !g.range_contains(pair[0], g.source(pair[1])?)? {
            return Ok(Some((pair[0], pair[1])));
        }
    }
    Ok(None)
}

pub fn is_path(g: &Ultragraph, x: &Word) -> Result<bool> {
    Ok(path_violation(g, x)?.is_none())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    Member,
    NotAPath {
        from: Index,
        to: Index,
    },
    /// Finite words are not members when the edge set is finite.
    FiniteWordFiniteGraph,
    /// `s⁻¹(r(last))` is finite.
    NoInfiniteExtension {
        last: Index,
    },
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member)
    }
}

impl fmt::Display for Membership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Membership::Member => f.write_str("member"),
            Membership::NotAPath { from, to } => write!(f, "not a path: s(e{to}) ∉ r(e{from})"),
            Membership::FiniteWordFiniteGraph => {
                f.write_str("not a member: finite words are excluded when the edge set is finite")
            }
            Membership::NoInfiniteExtension { last } => {
                write!(f, "not a member: s^-1(r(e{last})) is finite")
            }
        }
    }
}

/// The edge shift `X_G`, checked once for applicability.
#[derive(Debug, Clone, Copy)]
pub struct EdgeShift<'g> {
    graph: &'g Ultragraph,
    infinite: bool,
}

impl<'g> EdgeShift<'g> {
    /// Refuses presentations with a range made of sinks only, where the
    /// characterization by paths does not apply.
    pub fn new(graph: &'g Ultragraph) -> Result<Self> {
        let report = graph.validate_hypotheses();
        if !report.ranges_reach_non_sinks {
            let e = report.h5_witness.map(|e| format!("e{e}")).unwrap_or_else(|| "some edge".into());
            return Err(Error::Inapplicable(format!("r({e}) contains only sinks")));
        }
        Ok(EdgeShift { graph, infinite: graph.has_infinite_edges() })
    }

    pub fn graph(&self) -> &'g Ultragraph {
        self.graph
    }

    pub fn membership(&self, x: &Word) -> Result<Membership> {
        match x {
            Word::Finite(w) => self.finite_membership(w),
            Word::Empty if !self.infinite => Ok(Membership::FiniteWordFiniteGraph),
            Word::Empty => Ok(Membership::Member),
            Word::Periodic { .. } => Ok(match path_violation(self.graph, x)? {
                Some((from, to)) => Membership::NotAPath { from, to },
                None => Membership::Member,
            }),
        }
    }

    /// Membership of the finite word `letters` (empty means Ø).
    pub fn finite_membership(&self, letters: &[Index]) -> Result<Membership> {
        if let Some((from, to)) = letters_violation(self.graph, letters)? {
            return Ok(Membership::NotAPath { from, to });
        }
        let Some(&last) = letters.last() else {
            return self.membership(&Word::Empty);
        };
        if !self.infinite {
            return Ok(Membership::FiniteWordFiniteGraph);
        }
        Ok(if self.graph.range_preimage_is_infinite(last)? {
            Membership::Member
        } else {
            Membership::NoInfiniteExtension { last }
        })
    }

    pub fn contains(&self, x: &Word) -> Result<bool> {
        Ok(self.membership(x)?.is_member())
    }

    pub fn contains_letters(&self, letters: &[Index]) -> Result<bool> {
        Ok(self.finite_membership(letters)?.is_member())
    }

    /// Up to `k` edges `a` with index at most `max_edge` such that `α·a` is
    /// a member, each paired with an infinite member word extending `α·a`.
    pub fn extensions(&self, alpha: &[Index], k: usize, max_edge: Index) -> Result<Vec<(Index, Word)>> {
        let mut out = Vec::new();
        for a in self.graph.edges_up_to(max_edge) {
            if out.len() == k {
                break;
            }
            let mut word = alpha.to_vec();
            word.push(a);
            if !self.contains_letters(&word)? {
                continue;
            }
            if let Some(tail) = self.infinite_continuation(a, max_edge)? {
                let witness = tail.prepend(&word[..word.len() - 1]);
                if self.contains(&witness)? {
                    out.push((a, witness));
                }
            }
        }
        Ok(out)
    }

    /// An eventually periodic path starting with `a`, if one exists using
    /// edges up to `max_edge`.
    fn infinite_continuation(&self, a: Index, max_edge: Index) -> Result<Option<Word>> {
        let edges = self.graph.edges_up_to(max_edge.max(a));
        let mut path = vec![a];
        let mut seen = vec![a];
        loop {
            let last = *path.last().expect("nonempty");
            let mut next = None;
            for &f in &edges {
                if self.graph.range_contains(last, self.graph.source(f)?)? {
                    next = Some(f);
                    if seen.contains(&f) {
                        break;
                    }
                }
            }
            match next {
                None => return Ok(None),
                Some(f) => {
                    if let Some(at) = path.iter().position(|&e| e == f) {
                        let period = path[at..].to_vec();
                        path.truncate(at);
                        return Word::periodic(path, period).map(Some);
                    }
                    if seen.len() > edges.len() {
                        return Ok(None);
                    }
                    seen.push(f);
                    path.push(f);
                }
            }
        }
    }
}

/// `x ∈ X_G`.
pub fn in_edge_shift(g: &Ultragraph, x: &Word) -> Result<bool> {
    EdgeShift::new(g)?.contains(x)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ForbiddenVerdict {
    FinitelyForbidden(ForbiddenSet),
    InfinitelyForbidden,
}

/// Decides whether `{ef : s(f) ∉ r(e)}` is finite and lists it when it is.
/// A finite answer means the edge shift is a shift of finite type.
pub fn edge_shift_forbidden_set(g: &Ultragraph) -> Result<ForbiddenVerdict> {
    let mut words = Vec::new();
    let mut record = |e: Index, range: &IndexSet| -> Result<bool> {
        let missing = g.preimage(range)?.complement();
        match missing.finite_members() {
            Some(fs) => {
                words.extend(fs.into_iter().map(|f| vec![e, f]));
                Ok(true)
            }
            None => Ok(false),
        }
    };
    for edge in g.exceptional_edges() {
        if !record(edge.index, &edge.range)? {
            return Ok(ForbiddenVerdict::InfinitelyForbidden);
        }
    }
    for t in g.tails() {
        let positions = g.representative_positions(t);
        let last = *positions.end();
        let constant = matches!(t.range, RangeRule::Constant(_));
        for q in positions {
            let range = t.range_at(q, g.vertices())?;
            let e = t.edge_at(u64::from(q)).ok_or(Error::Capacity(u64::from(q)))?;
            // The last representative stands for every later edge of the family.
            if (constant || q == last) && !g.preimage(&range)?.complement().is_empty() {
                return Ok(ForbiddenVerdict::InfinitelyForbidden);
            }
            if !record(e, &range)? {
                return Ok(ForbiddenVerdict::InfinitelyForbidden);
            }
        }
    }
    Ok(ForbiddenVerdict::FinitelyForbidden(ForbiddenSet::new(words)?))
}

/// The ultragraph whose edge shift is the one-step shift `X_F` over the
/// positive integers: one vertex per letter, `s(a) = v_a` and
/// `r(a) = {v_b : ab ∉ F}`.
///
/// Letters up to the largest first coordinate in `F` become exceptional
/// edges; the rest are covered by an identity tail with range `all`.
pub fn ultragraph_from_one_step(forbidden: &ForbiddenSet) -> Result<Ultragraph> {
    let vertices = Universe::POSITIVE;
    for w in forbidden.words() {
        if w.len() != 2 {
            return Err(Error::Usage(format!("forbidden word of length {} in a one-step set", w.len())));
        }
        for &a in w {
            vertices.check(a)?;
        }
    }
    let max_first = forbidden.words().iter().map(|w| w[0]).max().unwrap_or(0);
    let mut edges = Vec::new();
    for a in 1..=max_first {
        let excluded = forbidden.words().iter().filter(|w| w[0] == a).map(|w| w[1]);
        edges.push(crate::ultragraph::ExceptionalEdge {
            index: a,
            source: a,
            range: IndexSet::cofinite(vertices, excluded)?,
        });
    }
    let start = max_first.checked_add(1).ok_or(Error::Capacity(u64::from(max_first) + 1))?;
    let tail = TailRule::new(start, SourceRule::Identity, RangeRule::Constant(IndexSet::all(vertices)));
    Ultragraph::new(vertices, edges, vec![tail])
}

/// All paths of length `len` over edges with index at most `max_edge`, in
/// lexicographic order.
pub fn enumerate_paths(g: &Ultragraph, len: usize, max_edge: Index) -> Result<Vec<Word>> {
    if len == 0 {
        return Err(Error::Usage("path length must be at least 1".into()));
    }
    let edges = g.edges_up_to(max_edge);
    let mut sources = Vec::with_capacity(edges.len());
    for &e in &edges {
        sources.push(g.source(e)?);
    }
    let mut out = Vec::new();
    let mut stack = Vec::with_capacity(len);
    extend_paths(g, &edges, &sources, len, &mut stack, &mut out)?;
    Ok(out)
}

fn extend_paths(
    g: &Ultragraph,
    edges: &[Index],
    sources: &[Index],
    len: usize,
    stack: &mut Vec<Index>,
    out: &mut Vec<Word>,
) -> Result<()> {
    if stack.len() == len {
        out.push(Word::Finite(stack.clone()));
        return Ok(());
    }
    for (i, &f) in edges.iter().enumerate() {
        if let Some(&e) = stack.last() {
            if !g.range_contains(e, sources[i])? {
                continue;
            }
        }
        stack.push(f);
        extend_paths(g, edges, sources, len, stack, out)?;
        stack.pop();
    }
    Ok(())
}
