//! Full-shift detection and conjugacy-obstruction reports.
//!
//! Conjugacy of the edge shifts of two presentations that both satisfy H1–H4
//! forces isomorphic ultragraph C*-algebras, hence equal `K₀` and `K₁`. A
//! difference in K-theory therefore refutes conjugacy. Reports never claim
//! that two shifts are conjugate.
//!
//! The refutation covers plain conjugacy between the two given presentations.
//! Separating a shift of finite type from the edge shifts of *all* graphs
//! needs the conjugacy to be eventually finite periodic as well; that
//! refinement is about a class of targets, not a fixed one, and is not
//! reported here.

use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::ktheory::{k_groups, KOptions};
use crate::shiftspace::{edge_shift_forbidden_set, ForbiddenSet, ForbiddenVerdict};
use crate::ultragraph::{HypothesisReport, Ultragraph};
use crate::FpAbelianGroup;

/// Whether the presentation is a bouquet of loops, whose edge shift is the
/// full shift on its edges.
pub fn is_full_shift_edge(g: &Ultragraph) -> bool {
    g.classify().is_bouquet
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SftCheck {
    /// The edge shift is not of finite type.
    Vacuous,
    /// Of finite type and a bouquet of loops.
    Confirmed,
    /// Of finite type but not a bouquet; never expected.
    Counterexample,
}

impl fmt::Display for SftCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SftCheck::Vacuous => "Vacuous",
            SftCheck::Confirmed => "Confirmed",
            SftCheck::Counterexample => "COUNTEREXAMPLE",
        })
    }
}

/// For a graph with infinitely many edges: an edge shift of finite type
/// should come from a bouquet of loops.
pub fn graph_sft_implies_full_check(g: &Ultragraph) -> Result<SftCheck> {
    if !g.classify().is_graph {
        return Err(Error::Usage("presentation is not a graph (some range is not a singleton)".into()));
    }
    if !g.has_infinite_edges() {
        return Err(Error::Usage("graph has finitely many edges".into()));
    }
    Ok(match edge_shift_forbidden_set(g)? {
        ForbiddenVerdict::InfinitelyForbidden => SftCheck::Vacuous,
        ForbiddenVerdict::FinitelyForbidden(_) if is_full_shift_edge(g) => SftCheck::Confirmed,
        ForbiddenVerdict::FinitelyForbidden(_) => SftCheck::Counterexample,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SftStatus {
    Sft(ForbiddenSet),
    NotSft,
    Unknown(String),
}

impl fmt::Display for SftStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SftStatus::Sft(forbidden) => write!(f, "SFT {forbidden}"),
            SftStatus::NotSft => f.write_str("not SFT (infinitely many forbidden pairs)"),
            SftStatus::Unknown(reason) => write!(f, "unknown ({reason})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KTheory {
    Groups { k0: FpAbelianGroup, k1: FpAbelianGroup },
    Unavailable(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    NotConjugate(String),
    Inconclusive(String),
}

impl Verdict {
    pub fn is_not_conjugate(&self) -> bool {
        matches!(self, Verdict::NotConjugate(_))
    }

    pub fn reason(&self) -> &str {
        match self {
            Verdict::NotConjugate(r) | Verdict::Inconclusive(r) => r,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SideReport {
    pub hypotheses: HypothesisReport,
    pub sft: SftStatus,
    pub k_theory: KTheory,
}

impl SideReport {
    pub fn new(g: &Ultragraph, opts: KOptions) -> Self {
        let sft = match edge_shift_forbidden_set(g) {
            Ok(ForbiddenVerdict::FinitelyForbidden(f)) => SftStatus::Sft(f),
            Ok(ForbiddenVerdict::InfinitelyForbidden) => SftStatus::NotSft,
            Err(e) => SftStatus::Unknown(e.to_string()),
        };
        let k_theory = match k_groups::<BigInt>(g, opts) {
            Ok(k) => KTheory::Groups { k0: k.k0, k1: k.k1 },
            Err(e) => KTheory::Unavailable(e.to_string()),
        };
        SideReport { hypotheses: g.validate_hypotheses(), sft, k_theory }
    }

    fn failed_hypotheses(&self) -> Vec<&'static str> {
        let h = &self.hypotheses;
        [
            (h.infinite_edges, "H1"),
            (h.range_preimages_cofinite, "H2"),
            (h.vertex_preimages_split, "H3"),
            (h.no_sinks, "H4"),
        ]
        .into_iter()
        .filter(|(ok, _)| !ok)
        .map(|(_, name)| name)
        .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObstructionReport {
    pub left: SideReport,
    pub right: SideReport,
    pub verdict: Verdict,
}

fn describe(g: &FpAbelianGroup) -> String {
    if g.has_torsion() {
        format!("{g} (torsion)")
    } else {
        g.to_string()
    }
}

fn decide(left: &SideReport, right: &SideReport) -> Verdict {
    for (name, side) in [("A", left), ("B", right)] {
        let failed = side.failed_hypotheses();
        if !failed.is_empty() {
            return Verdict::Inconclusive(format!("{name} is ineligible: {} fail", failed.join(", ")));
        }
    }
    let (l, r) = match (&left.k_theory, &right.k_theory) {
        (KTheory::Groups { k0, k1 }, KTheory::Groups { k0: k0b, k1: k1b }) => ((k0, k1), (k0b, k1b)),
        (KTheory::Unavailable(why), _) => return Verdict::Inconclusive(format!("K-theory of A unavailable: {why}")),
        (_, KTheory::Unavailable(why)) => return Verdict::Inconclusive(format!("K-theory of B unavailable: {why}")),
    };
    let mut differences = Vec::new();
    if l.0 != r.0 {
        let torsion = if l.0.has_torsion() != r.0.has_torsion() { "K0 torsion: " } else { "K0 differs: " };
        differences.push(format!("{torsion}{} vs {}", describe(l.0), describe(r.0)));
    }
    if l.1 != r.1 {
        differences.push(format!("K1 differs: {} vs {}", l.1, r.1));
    }
    if differences.is_empty() {
        Verdict::Inconclusive("identical K-theory".into())
    } else {
        Verdict::NotConjugate(differences.join("; "))
    }
}

/// Compares two presentations. Total: every failure becomes part of the
/// report.
pub fn obstruction(a: &Ultragraph, b: &Ultragraph) -> ObstructionReport {
    obstruction_with(a, b, KOptions::default())
}

pub fn obstruction_with(a: &Ultragraph, b: &Ultragraph, opts: KOptions) -> ObstructionReport {
    let left = SideReport::new(a, opts);
    let right = SideReport::new(b, opts);
    let verdict = decide(&left, &right);
    ObstructionReport { left, right, verdict }
}

impl ObstructionReport {
    /// `key: value` pairs in a fixed order.
    pub fn lines(&self) -> Vec<(String, String)> {
        let mut out = vec![
            (
                "verdict".to_string(),
                match self.verdict {
                    Verdict::NotConjugate(_) => "NotConjugate",
                    Verdict::Inconclusive(_) => "Inconclusive",
                }
                .to_string(),
            ),
            ("reason".to_string(), self.verdict.reason().to_string()),
        ];
        for (name, side) in [("A", &self.left), ("B", &self.right)] {
            for (k, v) in side.hypotheses.lines() {
                out.push((format!("{name} {k}"), v));
            }
            out.push((format!("{name} shift"), side.sft.to_string()));
            match &side.k_theory {
                KTheory::Groups { k0, k1 } => {
                    out.push((format!("{name} K0"), k0.to_string()));
                    out.push((format!("{name} K1"), k1.to_string()));
                }
                KTheory::Unavailable(why) => out.push((format!("{name} K-theory"), format!("unavailable ({why})"))),
            }
        }
        out
    }
}

impl fmt::Display for ObstructionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lines = self.lines();
        let width = lines.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0) + 1;
        for (k, v) in lines {
            writeln!(f, "{:<width$} {v}", format!("{k}:"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::ultragraph::{ExceptionalEdge, RangeRule, SourceRule, TailRule};
    use crate::vertexset::{IndexSet, Universe};

    #[test]
    fn full_shift_detection() {
        assert!(is_full_shift_edge(&catalog::bouquet()));
        assert!(!is_full_shift_edge(&catalog::skip_two()));
        let u = Universe::first_n(2);
        let g = Ultragraph::new(
            u,
            vec![],
            vec![TailRule::new(1, SourceRule::Constant(1), RangeRule::Constant(IndexSet::singleton(u, 2).unwrap()))],
        )
        .unwrap();
        assert!(!is_full_shift_edge(&g));
    }

    #[test]
    fn sft_check_examples() {
        assert_eq!(graph_sft_implies_full_check(&catalog::bouquet()).unwrap(), SftCheck::Confirmed);
        assert_eq!(graph_sft_implies_full_check(&catalog::successor_chain()).unwrap(), SftCheck::Vacuous);
        assert!(matches!(graph_sft_implies_full_check(&catalog::skip_two()), Err(Error::Usage(_))));
        let u = Universe::first_n(1);
        let finite =
            Ultragraph::new(u, vec![ExceptionalEdge { index: 0, source: 1, range: IndexSet::all(u) }], vec![]).unwrap();
        assert!(matches!(graph_sft_implies_full_check(&finite), Err(Error::Usage(_))));
    }

    #[test]
    fn obstruction_examples() {
        let r = obstruction(&catalog::skip_two(), &catalog::bouquet());
        assert!(r.verdict.is_not_conjugate());
        assert_eq!(r.verdict.reason(), "K0 torsion: Z^1 (+) Z/2 (torsion) vs Z^1");
        let r = obstruction(&catalog::bouquet(), &catalog::bouquet());
        assert_eq!(r.verdict, Verdict::Inconclusive("identical K-theory".into()));
        let r = obstruction(&catalog::double_emitter(), &catalog::bouquet());
        assert!(r.verdict.is_not_conjugate());
        assert!(r.verdict.reason().contains("torsion"));
    }

    #[test]
    fn ineligible_side_is_inconclusive() {
        let r = obstruction(&catalog::split_source(), &catalog::bouquet());
        assert!(!r.verdict.is_not_conjugate());
        assert!(r.verdict.reason().contains("H3"));
        let r = obstruction(&catalog::upper_tail(), &catalog::skip_two());
        assert!(!r.verdict.is_not_conjugate());
        assert!(r.verdict.reason().contains("unavailable"));
        assert_eq!(
            obstruction(&catalog::skip_two(), &catalog::upper_tail()).verdict.is_not_conjugate(),
            r.verdict.is_not_conjugate()
        );
    }

    #[test]
    fn report_layout() {
        let text = obstruction(&catalog::skip_two(), &catalog::bouquet()).to_string();
        let first: Vec<&str> = text.lines().take(2).collect();
        assert!(first[0].starts_with("verdict:"));
        assert!(first[0].ends_with(" NotConjugate"));
        let col = first[0].find("NotConjugate").unwrap();
        assert!(text.lines().all(|l| l.len() > col && l.as_bytes()[col - 1] == b' '));
        assert!(text.contains("A K0:"));
        assert!(text.contains("B shift:"));
    }
}
