//! The partial action of the free group on the edges, realized on words.
//!
//! For a reduced word `g` the set `X_g` is
//!
//! - `X` itself for the neutral element `0`,
//! - the words starting with `a` for a path `a`,
//! - `{x : s(x) ∈ r(a)} ∪ {Ø}` for `a⁻¹`,
//! - `{ay : s(y) ∈ r(a) ∩ r(b)} ∪ {a}` for `ab⁻¹` with `r(a) ∩ r(b) ≠ ∅`,
//!
//! and is empty for every other group element. `θ_g` maps `X_{g⁻¹}` onto `X_g`.
//! Ranges of paths are ranges of their last edge.

use std::fmt;

use crate::error::{Error, Result};
use crate::shiftspace::{EdgeShift, Word};
use crate::ultragraph::Ultragraph;
use crate::vertexset::{parse_index, IndexSet};
use crate::Index;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub edge: Index,
    pub inverse: bool,
}

impl Letter {
    pub fn positive(edge: Index) -> Self {
        Letter { edge, inverse: false }
    }

    pub fn negative(edge: Index) -> Self {
        Letter { edge, inverse: true }
    }

    pub fn exponent(&self) -> i8 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    fn flip(self) -> Self {
        Letter { edge: self.edge, inverse: !self.inverse }
    }
}

/// A reduced word in the free group on the edges. The empty word is `0`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupWord(Vec<Letter>);

impl GroupWord {
    pub fn neutral() -> Self {
        GroupWord(Vec::new())
    }

    /// Free reduction of an arbitrary letter list.
    pub fn reduce(raw: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in raw {
            if out.last() == Some(&l.flip()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        GroupWord(out)
    }

    pub fn from_exponents(raw: &[(Index, i8)]) -> Self {
        GroupWord::reduce(raw.iter().map(|&(e, x)| Letter { edge: e, inverse: x < 0 }))
    }

    /// The element `a` for a path `a`.
    pub fn path(a: &[Index]) -> Self {
        GroupWord::reduce(a.iter().copied().map(Letter::positive))
    }

    /// The element `ab⁻¹`.
    pub fn transition(a: &[Index], b: &[Index]) -> Self {
        GroupWord::path(a).mul(&GroupWord::path(b).inverse())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn is_neutral(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Self {
        GroupWord(self.0.iter().rev().map(|l| l.flip()).collect())
    }

    pub fn mul(&self, other: &GroupWord) -> Self {
        GroupWord::reduce(self.0.iter().chain(&other.0).copied())
    }

    /// Parses `e1.e3.~e2`; `0` is the neutral element.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text == "0" || text.is_empty() {
            return Ok(GroupWord::neutral());
        }
        let letters = text
            .split('.')
            .map(|t| {
                let t = t.trim();
                match t.strip_prefix('~') {
                    Some(rest) => parse_index(rest).map(Letter::negative),
                    None => parse_index(t).map(Letter::positive),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GroupWord::reduce(letters))
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{}e{}", if l.inverse { "~" } else { "" }, l.edge)?;
        }
        Ok(())
    }
}

/// Where a reduced group word sits relative to `V = {ab⁻¹ : a, b ∈ W ∪ {0}}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DomainForm {
    Neutral,
    PositivePath(Vec<Index>),
    InversePath(Vec<Index>),
    /// `ab⁻¹` with both paths nonempty and `r(a) ∩ r(b) ≠ ∅`.
    Transition(Vec<Index>, Vec<Index>),
    OutsideV,
}

impl fmt::Display for DomainForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DomainForm::Neutral => f.write_str("neutral"),
            DomainForm::PositivePath(a) => write!(f, "path {}", Word::finite(a.clone())),
            DomainForm::InversePath(a) => write!(f, "inverse path {}", Word::finite(a.clone())),
            DomainForm::Transition(a, b) => {
                write!(f, "transition {} / {}", Word::finite(a.clone()), Word::finite(b.clone()))
            }
            DomainForm::OutsideV => f.write_str("outside V (empty domain)"),
        }
    }
}

/// The partial action on the edge shift of one presentation.
#[derive(Debug, Clone, Copy)]
pub struct PartialAction<'g> {
    space: EdgeShift<'g>,
}

impl<'g> PartialAction<'g> {
    pub fn new(graph: &'g Ultragraph) -> Result<Self> {
        Ok(PartialAction { space: EdgeShift::new(graph)? })
    }

    pub fn space(&self) -> &EdgeShift<'g> {
        &self.space
    }

    fn graph(&self) -> &'g Ultragraph {
        self.space.graph()
    }

    fn is_path(&self, a: &[Index]) -> Result<bool> {
        let g = self.graph();
        for &e in a {
            g.source(e)?;
        }
        for pair in a.windows(2) {
            if !g.range_contains(pair[0], g.source(pair[1])?)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn path_range(&self, a: &[Index]) -> Result<IndexSet> {
        self.graph().range(*a.last().expect("nonempty path"))
    }

    pub fn classify(&self, w: &GroupWord) -> Result<DomainForm> {
        let letters = w.letters();
        if letters.is_empty() {
            return Ok(DomainForm::Neutral);
        }
        for l in letters {
            self.graph().source(l.edge)?;
        }
        let k = letters.iter().take_while(|l| !l.inverse).count();
        if letters[k..].iter().any(|l| !l.inverse) {
            return Ok(DomainForm::OutsideV);
        }
        let a: Vec<Index> = letters[..k].iter().map(|l| l.edge).collect();
        let b: Vec<Index> = letters[k..].iter().rev().map(|l| l.edge).collect();
        if !self.is_path(&a)? || !self.is_path(&b)? {
            return Ok(DomainForm::OutsideV);
        }
        Ok(match (a.is_empty(), b.is_empty()) {
            (false, true) => DomainForm::PositivePath(a),
            (true, false) => DomainForm::InversePath(b),
            _ => {
                if self.path_range(&a)?.intersect(&self.path_range(&b)?)?.is_empty() {
                    DomainForm::OutsideV
                } else {
                    DomainForm::Transition(a, b)
                }
            }
        })
    }

    fn require_member(&self, x: &Word) -> Result<()> {
        let m = self.space.membership(x)?;
        if m.is_member() {
            Ok(())
        } else {
            Err(Error::Usage(format!("{x} is not in the edge shift ({m})")))
        }
    }

    fn starts_in(&self, x: &Word, a: &[Index], range: &IndexSet) -> Result<bool> {
        match x.letter(a.len()) {
            Some(y) => Ok(range.contains(self.graph().source(y)?)),
            None => Ok(false),
        }
    }

    /// `x ∈ X_h`.
    pub fn contains(&self, h: &GroupWord, x: &Word) -> Result<bool> {
        self.require_member(x)?;
        self.contains_member(&self.classify(h)?, x)
    }

    fn contains_member(&self, form: &DomainForm, x: &Word) -> Result<bool> {
        Ok(match form {
            DomainForm::Neutral => true,
            DomainForm::PositivePath(a) => x.starts_with(a),
            DomainForm::InversePath(a) => match x.first() {
                None => true,
                Some(e) => self.path_range(a)?.contains(self.graph().source(e)?),
            },
            DomainForm::Transition(a, b) => {
                if !x.starts_with(a) {
                    false
                } else if x.len() == crate::shiftspace::Length::Finite(a.len()) {
                    true
                } else {
                    let both = self.path_range(a)?.intersect(&self.path_range(b)?)?;
                    self.starts_in(x, a, &both)?
                }
            }
            DomainForm::OutsideV => false,
        })
    }

    /// `x ∈ X_{g⁻¹}`, the domain of `θ_g`.
    pub fn in_domain(&self, g: &GroupWord, x: &Word) -> Result<bool> {
        self.contains(&g.inverse(), x)
    }

    /// `θ_g(x)` for `x` in the domain of `θ_g`.
    pub fn theta(&self, g: &GroupWord, x: &Word) -> Result<Word> {
        self.require_member(x)?;
        let form = self.classify(g)?;
        if let DomainForm::OutsideV = form {
            return Err(Error::Precondition(format!("θ_{g} is the empty map ({g} lies outside V)")));
        }
        let inverse = self.classify(&g.inverse())?;
        if !self.contains_member(&inverse, x)? {
            let case = match &form {
                DomainForm::PositivePath(_) => "s(x) ∉ r(a) for θ_a",
                DomainForm::InversePath(_) => "x does not start with a for θ_{a⁻¹}",
                DomainForm::Transition(..) => "x is neither a nor ay with s(y) ∈ r(a) ∩ r(b) for θ_{ba⁻¹}",
                _ => unreachable!("neutral domain is everything"),
            };
            return Err(Error::Precondition(format!("{x} is not in the domain of θ_{g}: {case}")));
        }
        Ok(match form {
            DomainForm::Neutral | DomainForm::OutsideV => x.clone(),
            DomainForm::PositivePath(a) => x.prepend(&a),
            DomainForm::InversePath(a) => x.drop_prefix(a.len()),
            // g = ba⁻¹ here: the domain is X_{ab⁻¹}.
            DomainForm::Transition(b, a) => x.drop_prefix(a.len()).prepend(&b),
        })
    }

    /// `x ∈ X_A`: `s(x) ∈ A` for nonempty `x`, and Ø is a member exactly
    /// when `s⁻¹(A)ᶜ` is finite.
    pub fn in_xa(&self, a: &IndexSet, x: &Word) -> Result<bool> {
        self.require_member(x)?;
        let g = self.graph();
        let pre = g.preimage(a)?;
        let missing = pre.complement();
        if pre.is_infinite() && missing.is_infinite() {
            return Err(Error::Inapplicable(format!("s^-1({a}) and its complement are both infinite")));
        }
        match x.first() {
            Some(e) => Ok(a.contains(g.source(e)?)),
            None => Ok(missing.is_finite()),
        }
    }
}

pub fn reduce(raw: &[(Index, i8)]) -> GroupWord {
    GroupWord::from_exponents(raw)
}

pub fn classify(g: &Ultragraph, w: &GroupWord) -> Result<DomainForm> {
    PartialAction::new(g)?.classify(w)
}

pub fn in_domain(g: &Ultragraph, w: &GroupWord, x: &Word) -> Result<bool> {
    PartialAction::new(g)?.in_domain(w, x)
}

pub fn theta(g: &Ultragraph, w: &GroupWord, x: &Word) -> Result<Word> {
    PartialAction::new(g)?.theta(w, x)
}

pub fn in_xa(g: &Ultragraph, a: &IndexSet, x: &Word) -> Result<bool> {
    PartialAction::new(g)?.in_xa(a, x)
}
