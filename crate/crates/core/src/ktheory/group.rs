use std::fmt;

use super::{Matrix, Scalar, SmithForm};

/// `Z^r ⊕ Z/d₁ ⊕ … ⊕ Z/d_k` with `1 < d₁ | d₂ | … | d_k`.
///
/// The representation is canonical, so equality is isomorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpAbelianGroup<Z> {
    free_rank: usize,
    torsion: Vec<Z>,
}

impl<Z: Scalar> FpAbelianGroup<Z> {
    pub fn free(rank: usize) -> Self {
        FpAbelianGroup { free_rank: rank, torsion: Vec::new() }
    }

    /// From invariant factors; factors equal to one are dropped. Returns
    /// `None` unless the remaining factors are positive and form a
    /// divisibility chain.
    pub fn new(free_rank: usize, factors: Vec<Z>) -> Option<Self> {
        let torsion: Vec<Z> = factors.into_iter().filter(|d| !d.is_one()).collect();
        let positive = torsion.iter().all(Z::is_positive);
        let chain = torsion.windows(2).all(|w| w[1].is_multiple_of(&w[0]));
        (positive && chain).then_some(FpAbelianGroup { free_rank, torsion })
    }

    /// `Z^cols / (row space of M)`.
    pub fn cokernel(m: &Matrix<Z>, smith: &SmithForm<Z>) -> Self {
        let d = smith.invariant_factors();
        FpAbelianGroup::new(m.cols() - d.len(), d).expect("Smith form gives a divisibility chain")
    }

    /// Kernel of `x ↦ xᵀM` on `Z^rows`, which is free.
    pub fn left_kernel(m: &Matrix<Z>, smith: &SmithForm<Z>) -> Self {
        FpAbelianGroup::free(m.rows() - smith.rank())
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[Z] {
        &self.torsion
    }

    pub fn has_torsion(&self) -> bool {
        !self.torsion.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

impl<Z: Scalar> fmt::Display for FpAbelianGroup<Z> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z^{}", self.free_rank)?;
        for d in &self.torsion {
            write!(f, " (+) Z/{d}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let g = FpAbelianGroup::<i64>::new(1, vec![1, 1, 2]).unwrap();
        assert_eq!(g.to_string(), "Z^1 (+) Z/2");
        assert!(g.has_torsion());
        assert_eq!(FpAbelianGroup::<i64>::free(0).to_string(), "Z^0");
        assert!(FpAbelianGroup::<i64>::free(0).is_trivial());
        assert!(FpAbelianGroup::<i64>::new(0, vec![2, 3]).is_none());
        assert!(FpAbelianGroup::<i64>::new(0, vec![-2]).is_none());
        assert_ne!(g, FpAbelianGroup::free(1));
    }
}
