use super::{Matrix, Scalar};

/// `U·M·V = S` with `S` diagonal, nonnegative and `d₁ | d₂ | …`, and `U`, `V`
/// unimodular.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm<Z> {
    pub s: Matrix<Z>,
    pub u: Matrix<Z>,
    pub v: Matrix<Z>,
}

impl<Z: Scalar> SmithForm<Z> {
    /// Nonzero diagonal entries, in order.
    pub fn invariant_factors(&self) -> Vec<Z> {
        self.s.diagonal().into_iter().take_while(|d| !d.is_zero()).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }

    /// Checks every defining property against the input matrix.
    pub fn verify(&self, m: &Matrix<Z>) -> Result<(), String> {
        if self.u.mul(m).mul(&self.v) != self.s {
            return Err("U·M·V differs from S".into());
        }
        for (name, x) in [("U", &self.u), ("V", &self.v)] {
            let det = x.determinant();
            if !det.is_one() && !(-det).is_one() {
                return Err(format!("{name} is not unimodular"));
            }
        }
        if !self.s.is_diagonal() {
            return Err("S is not diagonal".into());
        }
        let diag = self.s.diagonal();
        if diag.iter().any(Z::is_negative) {
            return Err("S has a negative entry".into());
        }
        let rank = self.rank();
        if diag[rank..].iter().any(|d| !d.is_zero()) {
            return Err("zero diagonal entries are not trailing".into());
        }
        if diag[..rank].windows(2).any(|w| !w[1].is_multiple_of(&w[0])) {
            return Err("invariant factors do not form a divisibility chain".into());
        }
        Ok(())
    }
}

/// Smith normal form by row and column reduction over the integers.
pub fn smith_normal_form<Z: Scalar>(m: &Matrix<Z>) -> SmithForm<Z> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut s = Matrix::from_rows((0..rows).map(|i| m.row(i).to_vec()).collect(), cols);
    let mut u = Matrix::identity(rows);
    let mut v = Matrix::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = smallest_entry(&s, t) else {
                let form = SmithForm { s, u, v };
                debug_assert_eq!(form.verify(m), Ok(()));
                return form;
            };
            s.swap_rows(t, pi);
            u.swap_rows(t, pi);
            s.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let pivot = s[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..rows {
                if s[(i, t)].is_zero() {
                    continue;
                }
                let q = -(s[(i, t)].clone() / pivot.clone());
                s.add_row(i, t, &q);
                u.add_row(i, t, &q);
                clean &= s[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                if s[(t, j)].is_zero() {
                    continue;
                }
                let q = -(s[(t, j)].clone() / pivot.clone());
                s.add_col(j, t, &q);
                v.add_col(j, t, &q);
                clean &= s[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            // The pivot must divide the rest; otherwise pull the offending
            // row in and reduce again with a smaller remainder.
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !s[(i, j)].is_multiple_of(&pivot)));
            match bad {
                Some(i) => {
                    let one = Z::one();
                    s.add_row(t, i, &one);
                    u.add_row(t, i, &one);
                }
                None => break,
            }
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    let form = SmithForm { s, u, v };
    debug_assert_eq!(form.verify(m), Ok(()));
    form
}

fn smallest_entry<Z: Scalar>(s: &Matrix<Z>, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, Z)> = None;
    for i in t..s.rows() {
        for j in t..s.cols() {
            let a = s[(i, j)].abs();
            if !a.is_zero() && best.as_ref().is_none_or(|b| a < b.2) {
                best = Some((i, j, a));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// Solutions of `xᵀ·M = target`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RowSolution<Z> {
    /// An integer combination of the rows.
    Integral(Vec<Z>),
    /// Solvable over the rationals only: `x = numerators / denominator` with
    /// `denominator > 1`.
    RationalOnly { numerators: Vec<Z>, denominator: Z },
    /// Not in the rational row space.
    Unsolvable,
}

/// Decides whether `target` is an integer combination of the rows of `m`.
pub fn solve_row_combination<Z: Scalar>(m: &Matrix<Z>, target: &[Z]) -> RowSolution<Z> {
    assert_eq!(target.len(), m.cols(), "dimension mismatch");
    let f = smith_normal_form(m);
    let d = f.invariant_factors();
    // xᵀ U⁻¹ S = target·V; write y = xᵀ U⁻¹ and w = target·V.
    let w = f.v.left_apply(target);
    if w[d.len()..].iter().any(|x| !x.is_zero()) {
        return RowSolution::Unsolvable;
    }
    let lcm = d.iter().fold(Z::one(), |acc, x| acc.lcm(x));
    let mut y = vec![Z::zero(); m.rows()];
    for (i, di) in d.iter().enumerate() {
        y[i] = w[i].clone() * (lcm.clone() / di.clone());
    }
    let x = f.u.left_apply(&y);
    let g = x.iter().fold(lcm.clone(), |acc, a| acc.gcd(a));
    let numerators: Vec<Z> = x.into_iter().map(|a| a / g.clone()).collect();
    let denominator = lcm / g;
    if denominator.is_one() {
        RowSolution::Integral(numerators)
    } else {
        RowSolution::RationalOnly { numerators, denominator }
    }
}
