use std::fmt;

use super::Scalar;
use crate::error::{Error, Result};
use crate::vertexset::{IndexSet, Universe};
use crate::Index;

/// A finite set `T` of tracked vertices. Over an infinite vertex set the
/// untracked remainder gets its own coordinate `τ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tracked {
    universe: Universe,
    vertices: Vec<Index>,
}

impl Tracked {
    pub fn new(universe: Universe, vertices: impl IntoIterator<Item = Index>) -> Result<Self> {
        let mut vertices: Vec<Index> = vertices.into_iter().collect();
        vertices.sort_unstable();
        vertices.dedup();
        for &v in &vertices {
            universe.check(v)?;
        }
        Ok(Tracked { universe, vertices })
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    pub fn vertices(&self) -> &[Index] {
        &self.vertices
    }

    pub fn has_tau(&self) -> bool {
        !self.universe.is_finite()
    }

    pub fn position(&self, v: Index) -> Option<usize> {
        self.vertices.binary_search(&v).ok()
    }

    pub fn contains(&self, v: Index) -> bool {
        self.position(v).is_some()
    }

    /// Number of coordinates, `τ` included.
    pub fn dimension(&self) -> usize {
        self.vertices.len() + usize::from(self.has_tau())
    }

    pub fn labels(&self) -> Vec<String> {
        let mut out: Vec<String> = self.vertices.iter().map(|v| format!("v{v}")).collect();
        if self.has_tau() {
            out.push("tau".into());
        }
        out
    }
}

/// An integer function on vertices that is constant outside `T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZgFunction<Z> {
    tracked: Tracked,
    coeffs: Vec<Z>,
    tail: Z,
}

impl<Z: Scalar> ZgFunction<Z> {
    pub fn zero(tracked: &Tracked) -> Self {
        ZgFunction { tracked: tracked.clone(), coeffs: vec![Z::zero(); tracked.vertices.len()], tail: Z::zero() }
    }

    /// `δ_v`.
    pub fn delta(tracked: &Tracked, v: Index) -> Result<Self> {
        let i = tracked.position(v).ok_or_else(|| Error::TrackedSetTooSmall(format!("v{v} is not tracked")))?;
        let mut f = ZgFunction::zero(tracked);
        f.coeffs[i] = Z::one();
        Ok(f)
    }

    pub fn tracked(&self) -> &Tracked {
        &self.tracked
    }

    pub fn coefficients(&self) -> &[Z] {
        &self.coeffs
    }

    /// Coefficient of `τ`; always zero over a finite vertex set.
    pub fn tail(&self) -> &Z {
        &self.tail
    }

    /// The value at `v`.
    pub fn value(&self, v: Index) -> Z {
        match self.tracked.position(v) {
            Some(i) => self.coeffs[i].clone(),
            None => self.tail.clone(),
        }
    }

    /// Coordinates in the basis `δ_t (t ∈ T)`, then `τ`.
    pub fn coordinates(&self) -> Vec<Z> {
        let mut out = self.coeffs.clone();
        if self.tracked.has_tau() {
            out.push(self.tail.clone());
        }
        out
    }

    fn zip(&self, other: &Self, op: impl Fn(Z, Z) -> Z) -> Self {
        assert_eq!(self.tracked, other.tracked, "functions over different tracked sets");
        ZgFunction {
            tracked: self.tracked.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| op(a.clone(), b.clone())).collect(),
            tail: op(self.tail.clone(), other.tail.clone()),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a - b)
    }

    pub fn scale(&self, k: &Z) -> Self {
        ZgFunction {
            tracked: self.tracked.clone(),
            coeffs: self.coeffs.iter().map(|a| a.clone() * k.clone()).collect(),
            tail: self.tail.clone() * k.clone(),
        }
    }
}

impl<Z: Scalar> fmt::Display for ZgFunction<Z> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        if self.tracked.has_tau() {
            write!(f, " | τ:{}", self.tail)?;
        }
        f.write_str(")")
    }
}

/// `χ_A` over `T`; the finite data of `A` must be tracked.
pub fn chi<Z: Scalar>(a: &IndexSet, tracked: &Tracked) -> Result<ZgFunction<Z>> {
    if a.universe() != tracked.universe {
        return Err(Error::UniverseMismatch(a.universe().to_string(), tracked.universe.to_string()));
    }
    if let Some(v) = a.support().iter().find(|&&v| !tracked.contains(v)) {
        return Err(Error::TrackedSetTooSmall(format!("{} mentions untracked v{v}", a.labeled("v"))));
    }
    let mut f = ZgFunction::zero(tracked);
    for (i, &v) in tracked.vertices.iter().enumerate() {
        if a.contains(v) {
            f.coeffs[i] = Z::one();
        }
    }
    if a.is_infinite() {
        f.tail = Z::one();
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t3() -> Tracked {
        Tracked::new(Universe::POSITIVE, [1, 2, 3]).unwrap()
    }

    #[test]
    fn chi_examples() {
        let u = Universe::POSITIVE;
        let all: ZgFunction<i64> = chi(&IndexSet::all(u), &t3()).unwrap();
        assert_eq!(all.to_string(), "(1,1,1 | τ:1)");
        let cof: ZgFunction<i64> = chi(&IndexSet::cofinite(u, [1, 2]).unwrap(), &t3()).unwrap();
        assert_eq!(cof.coordinates(), vec![0, 0, 1, 1]);
        let single: ZgFunction<i64> = chi(&IndexSet::singleton(u, 2).unwrap(), &t3()).unwrap();
        assert_eq!(single, ZgFunction::delta(&t3(), 2).unwrap());
        assert_eq!(single.coordinates(), vec![0, 1, 0, 0]);
        assert_eq!(cof.value(7), 1);
        assert_eq!(cof.value(1), 0);
        assert!(matches!(chi::<i64>(&IndexSet::singleton(u, 9).unwrap(), &t3()), Err(Error::TrackedSetTooSmall(_))));
    }

    #[test]
    fn arithmetic() {
        let u = Universe::POSITIVE;
        let d1: ZgFunction<i64> = ZgFunction::delta(&t3(), 1).unwrap();
        let c = chi(&IndexSet::cofinite(u, [1, 2]).unwrap(), &t3()).unwrap();
        assert_eq!(d1.sub(&c).to_string(), "(1,0,-1 | τ:-1)");
        assert_eq!(c.scale(&-2).add(&c).coordinates(), vec![0, 0, -1, -1]);
        let fin = Tracked::new(Universe::first_n(2), [1, 2]).unwrap();
        assert!(!fin.has_tau());
        let f: ZgFunction<i64> = chi(&IndexSet::all(Universe::first_n(2)), &fin).unwrap();
        assert_eq!(f.to_string(), "(1,1)");
    }
}
