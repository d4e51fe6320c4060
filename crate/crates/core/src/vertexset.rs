//! Finite and cofinite subsets of a countable index set.
//!
//! An [`IndexSet`] is either a finite list of members or the complement of a
//! finite list, relative to a declared [`Universe`]. The representation is
//! canonical: two sets are equal as sets iff their values compare equal. In a
//! finite universe every set is stored in finite form.
//!
//! These sets carry edge ranges `r(e)`, the elements of the generated algebra
//! (built by closing singletons and ranges under union and intersection; no
//! membership test for that algebra is offered) and source preimages.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::Index;

/// The ambient index set: `[start, ∞)` or `start, start+1, …, start+len-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Universe {
    Infinite { start: Index },
    Finite { start: Index, len: Index },
}

impl Universe {
    /// `{0, 1, 2, …}`: edge indices.
    pub const NATURALS: Universe = Universe::Infinite { start: 0 };
    /// `{1, 2, 3, …}`: vertex indices and one-step alphabets.
    pub const POSITIVE: Universe = Universe::Infinite { start: 1 };

    /// `{1, …, n}`.
    pub fn first_n(n: Index) -> Universe {
        Universe::Finite { start: 1, len: n }
    }

    pub fn start(&self) -> Index {
        match *self {
            Universe::Infinite { start } | Universe::Finite { start, .. } => start,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Universe::Finite { .. })
    }

    /// Number of elements, `None` when infinite.
    pub fn size(&self) -> Option<usize> {
        match *self {
            Universe::Infinite { .. } => None,
            Universe::Finite { len, .. } => Some(len as usize),
        }
    }

    pub fn contains(&self, i: Index) -> bool {
        match *self {
            Universe::Infinite { start } => i >= start,
            Universe::Finite { start, len } => i >= start && u64::from(i) < u64::from(start) + u64::from(len),
        }
    }

    /// Members of a finite universe in increasing order; empty for infinite ones.
    pub fn members(&self) -> impl Iterator<Item = Index> {
        let (start, end) = match *self {
            Universe::Infinite { .. } => (0u64, 0u64),
            Universe::Finite { start, len } => (u64::from(start), u64::from(start) + u64::from(len)),
        };
        (start..end).map(|i| i as Index)
    }

    pub fn check(&self, i: Index) -> Result<()> {
        if self.contains(i) {
            Ok(())
        } else {
            Err(Error::OutOfUniverse { index: u64::from(i), universe: self.to_string() })
        }
    }
}

impl fmt::Display for Universe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Universe::Infinite { start } => write!(f, "[{start}..)"),
            Universe::Finite { start, len: 0 } => write!(f, "[{start}..{start})"),
            Universe::Finite { start, len } => {
                write!(f, "[{start}..={}]", u64::from(start) + u64::from(len) - 1)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Finite,
    Cofinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cardinality {
    Finite(usize),
    Infinite,
}

/// A finite or cofinite subset of a [`Universe`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IndexSet {
    universe: Universe,
    kind: Kind,
    support: Vec<Index>,
}

impl IndexSet {
    pub fn none(universe: Universe) -> Self {
        IndexSet { universe, kind: Kind::Finite, support: Vec::new() }
    }

    pub fn all(universe: Universe) -> Self {
        IndexSet { universe, kind: Kind::Cofinite, support: Vec::new() }.normalized()
    }

    pub fn singleton(universe: Universe, i: Index) -> Result<Self> {
        Self::finite(universe, [i])
    }

    pub fn finite<I: IntoIterator<Item = Index>>(universe: Universe, members: I) -> Result<Self> {
        Self::build(universe, Kind::Finite, members)
    }

    pub fn cofinite<I: IntoIterator<Item = Index>>(universe: Universe, excluded: I) -> Result<Self> {
        Self::build(universe, Kind::Cofinite, excluded)
    }

    fn build<I: IntoIterator<Item = Index>>(universe: Universe, kind: Kind, items: I) -> Result<Self> {
        let mut support: Vec<Index> = items.into_iter().collect();
        support.sort_unstable();
        support.dedup();
        for &i in &support {
            universe.check(i)?;
        }
        Ok(IndexSet { universe, kind, support }.normalized())
    }

    // Finite universes only hold finite-form sets.
    fn normalized(self) -> Self {
        match (self.universe, self.kind) {
            (Universe::Finite { .. }, Kind::Cofinite) => {
                let support = difference(&self.universe.members().collect::<Vec<_>>(), &self.support);
                IndexSet { universe: self.universe, kind: Kind::Finite, support }
            }
            _ => self,
        }
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    /// Members when finite, excluded indices when cofinite.
    pub fn support(&self) -> &[Index] {
        &self.support
    }

    pub fn contains(&self, i: Index) -> bool {
        if !self.universe.contains(i) {
            return false;
        }
        let hit = self.support.binary_search(&i).is_ok();
        match self.kind {
            Kind::Finite => hit,
            Kind::Cofinite => !hit,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.kind == Kind::Finite && self.support.is_empty()
    }

    pub fn is_infinite(&self) -> bool {
        self.kind == Kind::Cofinite
    }

    pub fn is_full(&self) -> bool {
        match self.universe.size() {
            None => self.kind == Kind::Cofinite && self.support.is_empty(),
            Some(n) => self.support.len() == n,
        }
    }

    pub fn cardinality(&self) -> Cardinality {
        match self.kind {
            Kind::Finite => Cardinality::Finite(self.support.len()),
            Kind::Cofinite => Cardinality::Infinite,
        }
    }

    /// Members in increasing order. Only meaningful for finite sets.
    pub fn members(&self) -> Option<&[Index]> {
        match self.kind {
            Kind::Finite => Some(&self.support),
            Kind::Cofinite => None,
        }
    }

    /// Smallest member, if any.
    pub fn first(&self) -> Option<Index> {
        match self.kind {
            Kind::Finite => self.support.first().copied(),
            Kind::Cofinite => {
                let mut candidate = self.universe.start();
                for &x in &self.support {
                    match x.cmp(&candidate) {
                        Ordering::Less => continue,
                        Ordering::Equal => candidate = candidate.checked_add(1)?,
                        Ordering::Greater => break,
                    }
                }
                Some(candidate)
            }
        }
    }

    /// Members below `bound`, in increasing order.
    pub fn members_below(&self, bound: Index) -> Vec<Index> {
        match self.kind {
            Kind::Finite => self.support.iter().copied().filter(|&i| i < bound).collect(),
            Kind::Cofinite => {
                (self.universe.start()..bound).filter(|i| self.support.binary_search(i).is_err()).collect()
            }
        }
    }

    pub fn complement(&self) -> Self {
        match self.universe {
            Universe::Finite { .. } => {
                let all: Vec<Index> = self.universe.members().collect();
                IndexSet { universe: self.universe, kind: Kind::Finite, support: difference(&all, &self.support) }
            }
            Universe::Infinite { .. } => IndexSet {
                universe: self.universe,
                kind: match self.kind {
                    Kind::Finite => Kind::Cofinite,
                    Kind::Cofinite => Kind::Finite,
                },
                support: self.support.clone(),
            },
        }
    }

    fn same_universe(&self, other: &Self) -> Result<()> {
        if self.universe == other.universe {
            Ok(())
        } else {
            Err(Error::UniverseMismatch(self.universe.to_string(), other.universe.to_string()))
        }
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.same_universe(other)?;
        let (kind, support) = match (self.kind, other.kind) {
            (Kind::Finite, Kind::Finite) => (Kind::Finite, union(&self.support, &other.support)),
            (Kind::Finite, Kind::Cofinite) => (Kind::Cofinite, difference(&other.support, &self.support)),
            (Kind::Cofinite, Kind::Finite) => (Kind::Cofinite, difference(&self.support, &other.support)),
            (Kind::Cofinite, Kind::Cofinite) => (Kind::Cofinite, intersection(&self.support, &other.support)),
        };
        Ok(IndexSet { universe: self.universe, kind, support })
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.same_universe(other)?;
        let (kind, support) = match (self.kind, other.kind) {
            (Kind::Finite, Kind::Finite) => (Kind::Finite, intersection(&self.support, &other.support)),
            (Kind::Finite, Kind::Cofinite) => (Kind::Finite, difference(&self.support, &other.support)),
            (Kind::Cofinite, Kind::Finite) => (Kind::Finite, difference(&other.support, &self.support)),
            (Kind::Cofinite, Kind::Cofinite) => (Kind::Cofinite, union(&self.support, &other.support)),
        };
        Ok(IndexSet { universe: self.universe, kind, support })
    }

    pub fn difference(&self, other: &Self) -> Result<Self> {
        self.intersect(&other.complement())
    }

    pub fn is_subset(&self, other: &Self) -> Result<bool> {
        Ok(self.difference(other)?.is_empty())
    }

    /// Render with a letter in front of each index, e.g. `finite(v1,v2)`.
    pub fn labeled<'a>(&'a self, prefix: &'a str) -> Labeled<'a> {
        Labeled { set: self, prefix }
    }

    /// Parse `all`, `none`, `finite(...)` or `cofinite(...)`. Items may carry a
    /// letter prefix (`v3`, `e3`) or be bare integers.
    pub fn parse(text: &str, universe: Universe) -> Result<Self> {
        let t = text.trim();
        let fail = |reason: String| Error::Parse { line: 1, column: 1, reason };
        match t {
            "all" => return Ok(IndexSet::all(universe)),
            "none" => return Ok(IndexSet::none(universe)),
            _ => {}
        }
        let (kind, rest) = if let Some(rest) = t.strip_prefix("cofinite") {
            (Kind::Cofinite, rest)
        } else if let Some(rest) = t.strip_prefix("finite") {
            (Kind::Finite, rest)
        } else {
            return Err(fail(format!("expected a set, found `{t}`")));
        };
        let inner = rest
            .trim()
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| fail(format!("expected parenthesized list in `{t}`")))?;
        let mut items = Vec::new();
        for token in inner.split(',') {
            let token = token.trim();
            if token.is_empty() {
                if inner.trim().is_empty() {
                    break;
                }
                return Err(fail(format!("empty item in `{t}`")));
            }
            items.push(parse_index(token)?);
        }
        Self::build(universe, kind, items)
    }
}

/// Parse an index, optionally preceded by ASCII letters (`v12`, `e0`, `a3`).
pub fn parse_index(token: &str) -> Result<Index> {
    let digits = token.trim_start_matches(|c: char| c.is_ascii_alphabetic());
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse { line: 1, column: 1, reason: format!("expected an index, found `{token}`") });
    }
    match digits.parse::<u64>() {
        Ok(v) if v <= u64::from(Index::MAX) => Ok(v as Index),
        Ok(v) => Err(Error::Capacity(v)),
        Err(_) => Err(Error::Capacity(u64::MAX)),
    }
}

pub struct Labeled<'a> {
    set: &'a IndexSet,
    prefix: &'a str,
}

impl fmt::Display for Labeled<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let set = self.set;
        if set.is_empty() {
            return f.write_str("none");
        }
        if set.is_full() {
            return f.write_str("all");
        }
        let name = match set.kind {
            Kind::Finite => "finite",
            Kind::Cofinite => "cofinite",
        };
        write!(f, "{name}(")?;
        for (n, i) in set.support.iter().enumerate() {
            if n > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}{}", self.prefix, i)?;
        }
        f.write_str(")")
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.labeled("").fmt(f)
    }
}

fn union(a: &[Index], b: &[Index]) -> Vec<Index> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

fn intersection(a: &[Index], b: &[Index]) -> Vec<Index> {
    a.iter().copied().filter(|x| b.binary_search(x).is_ok()).collect()
}

fn difference(a: &[Index], b: &[Index]) -> Vec<Index> {
    a.iter().copied().filter(|x| b.binary_search(x).is_err()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const U: Universe = Universe::NATURALS;

    fn fin(xs: &[Index]) -> IndexSet {
        IndexSet::finite(U, xs.iter().copied()).unwrap()
    }

    fn cof(xs: &[Index]) -> IndexSet {
        IndexSet::cofinite(U, xs.iter().copied()).unwrap()
    }

    #[test]
    fn union_examples() {
        assert_eq!(fin(&[1, 2]).union(&fin(&[2, 3])).unwrap(), fin(&[1, 2, 3]));
        assert_eq!(fin(&[1, 2]).union(&cof(&[2, 3])).unwrap(), cof(&[3]));
        assert_eq!(cof(&[1]).union(&cof(&[2])).unwrap(), cof(&[]));
    }

    #[test]
    fn intersect_examples() {
        assert_eq!(cof(&[1, 2]).intersect(&cof(&[2, 3])).unwrap(), cof(&[1, 2, 3]));
        assert_eq!(fin(&[1, 2]).intersect(&cof(&[1])).unwrap(), fin(&[2]));
        assert_eq!(fin(&[]).intersect(&cof(&[])).unwrap(), fin(&[]));
    }

    #[test]
    fn complement_and_queries() {
        assert_eq!(fin(&[5]).complement(), cof(&[5]));
        assert!(cof(&[1, 2]).contains(3));
        assert!(!cof(&[1, 2]).contains(2));
        assert!(cof(&[]).is_infinite());
        assert_eq!(cof(&[]).cardinality(), Cardinality::Infinite);
        assert_eq!(fin(&[4, 9]).cardinality(), Cardinality::Finite(2));
        assert_eq!(cof(&[0, 1, 3]).first(), Some(2));
    }

    #[test]
    fn universe_mismatch_is_an_error() {
        let a = IndexSet::all(Universe::POSITIVE);
        assert!(matches!(a.union(&cof(&[])), Err(Error::UniverseMismatch(..))));
    }

    #[test]
    fn finite_universe_normalizes_cofinite_input() {
        let u = Universe::first_n(4);
        let s = IndexSet::cofinite(u, [2]).unwrap();
        assert_eq!(s.kind(), Kind::Finite);
        assert_eq!(s.support(), &[1, 3, 4]);
        assert_eq!(s.complement(), IndexSet::finite(u, [2]).unwrap());
        assert!(IndexSet::finite(u, [5]).is_err());
        assert!(IndexSet::all(u).is_full());
        assert_eq!(IndexSet::all(u).to_string(), "all");
    }

    #[test]
    fn rendering_and_parsing() {
        let s = IndexSet::cofinite(Universe::POSITIVE, [1, 2]).unwrap();
        assert_eq!(s.labeled("v").to_string(), "cofinite(v1,v2)");
        assert_eq!(IndexSet::parse("cofinite(v1, v2)", Universe::POSITIVE).unwrap(), s);
        assert_eq!(IndexSet::parse("all", U).unwrap().to_string(), "all");
        assert_eq!(IndexSet::parse("none", U).unwrap().to_string(), "none");
        assert_eq!(IndexSet::parse("finite()", U).unwrap(), fin(&[]));
        assert!(IndexSet::parse("finite(v0)", Universe::POSITIVE).is_err());
        assert!(matches!(parse_index("e99999999999"), Err(Error::Capacity(_))));
    }

    // Brute-force oracle: bit i of a u64 stands for index i; a cofinite set is
    // represented by its complement's mask with the top bit region all ones.
    fn to_mask(s: &IndexSet) -> u64 {
        let mut m = 0u64;
        for i in 0..64 {
            if s.contains(i) {
                m |= 1 << i;
            }
        }
        m
    }

    fn arb_set() -> impl Strategy<Value = IndexSet> {
        (any::<bool>(), proptest::collection::vec(0u32..48, 0..8)).prop_map(|(c, xs)| {
            if c {
                IndexSet::cofinite(U, xs).unwrap()
            } else {
                IndexSet::finite(U, xs).unwrap()
            }
        })
    }

    proptest! {
        #[test]
        fn lattice_matches_bitset(a in arb_set(), b in arb_set(), c in arb_set()) {
            prop_assert_eq!(to_mask(&a.union(&b).unwrap()), to_mask(&a) | to_mask(&b));
            prop_assert_eq!(to_mask(&a.intersect(&b).unwrap()), to_mask(&a) & to_mask(&b));
            prop_assert_eq!(to_mask(&a.complement()), !to_mask(&a));
            prop_assert_eq!(a.complement().complement(), a.clone());
            // De Morgan
            prop_assert_eq!(
                a.union(&b).unwrap().complement(),
                a.complement().intersect(&b.complement()).unwrap()
            );
            prop_assert_eq!(a.union(&b).unwrap(), b.union(&a).unwrap());
            prop_assert_eq!(
                a.union(&b).unwrap().union(&c).unwrap(),
                a.union(&b.union(&c).unwrap()).unwrap()
            );
            prop_assert_eq!(
                a.intersect(&b).unwrap().intersect(&c).unwrap(),
                a.intersect(&b.intersect(&c).unwrap()).unwrap()
            );
            prop_assert_eq!(a.union(&a).unwrap(), a.clone());
            prop_assert_eq!(a.intersect(&a).unwrap(), a.clone());
        }

        #[test]
        fn canonical_iff_equal_as_sets(a in arb_set(), b in arb_set()) {
            // supports lie below 48, so agreement on 0..64 decides equality
            prop_assert_eq!(a == b, to_mask(&a) == to_mask(&b));
        }

        #[test]
        fn closure_of_generators_stays_finite_or_cofinite(
            ranges in proptest::collection::vec(arb_set(), 1..4),
            singles in proptest::collection::vec(0u32..48, 1..4),
            ops in proptest::collection::vec((any::<bool>(), 0usize..16, 0usize..16), 1..12),
        ) {
            let mut pool: Vec<IndexSet> = ranges;
            pool.extend(singles.into_iter().map(|i| IndexSet::singleton(U, i).unwrap()));
            for (is_union, i, j) in ops {
                let a = &pool[i % pool.len()];
                let b = &pool[j % pool.len()];
                let next = if is_union { a.union(b).unwrap() } else { a.intersect(b).unwrap() };
                // canonical: sorted, duplicate-free support inside the universe
                prop_assert!(next.support().windows(2).all(|w| w[0] < w[1]));
                pool.push(next);
            }
        }
    }
}
