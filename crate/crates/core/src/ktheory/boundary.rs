use std::collections::BTreeSet;

use super::{chi, smith_normal_form, FpAbelianGroup, Matrix, Scalar, SmithForm, Tracked, ZgFunction};
use crate::error::{Error, Result};
use crate::ultragraph::{Degree, RangeRule, SourceRule, Ultragraph};
use crate::vertexset::IndexSet;
use crate::Index;

/// K-theory needs at most one tail family, with stride one and a constant
/// range.
fn check_supported(g: &Ultragraph) -> Result<()> {
    match g.tails() {
        [] => Ok(()),
        [t] if t.stride != 1 => Err(Error::TailNotSupported(format!("tail with stride {}", t.stride))),
        [t] => match t.range {
            RangeRule::Constant(_) => Ok(()),
            RangeRule::UpperTail { .. } => Err(Error::TailNotSupported("upper-tail ranges".into())),
            RangeRule::Shift { .. } => Err(Error::TailNotSupported("shifted singleton ranges".into())),
        },
        ts => Err(Error::TailNotSupported(format!("{} tail families", ts.len()))),
    }
}

/// `T_n`: every vertex named by the finite data of the presentation plus the
/// sources of the first `n` tail edges. Over a finite vertex set this is the
/// whole vertex set.
pub fn tracked_set(g: &Ultragraph, n: usize) -> Result<Tracked> {
    check_supported(g)?;
    let universe = g.vertices();
    if universe.is_finite() {
        return Tracked::new(universe, universe.members());
    }
    let mut base = BTreeSet::new();
    for e in g.exceptional_edges() {
        base.insert(e.source);
        base.extend(e.range.support().iter().copied());
    }
    let mut identity_start = None;
    for t in g.tails() {
        if let RangeRule::Constant(r) = &t.range {
            base.extend(r.support().iter().copied());
        }
        match t.source {
            SourceRule::Constant(v) => {
                base.insert(v);
            }
            SourceRule::Identity => identity_start = Some(t.start),
        }
    }
    let mut vertices = base.clone();
    match identity_start {
        Some(start) => {
            for k in 0..n {
                let v = u64::from(start) + k as u64;
                vertices.insert(Index::try_from(v).map_err(|_| Error::Capacity(v))?);
            }
        }
        None => {
            let mut v = universe.start();
            let mut added = 0;
            while added < n {
                if !base.contains(&v) {
                    vertices.insert(v);
                    added += 1;
                }
                v = v.checked_add(1).ok_or(Error::Capacity(u64::from(v) + 1))?;
            }
        }
    }
    Tracked::new(universe, vertices)
}

/// `∂(δ_v) = δ_v − Σ_{e ∈ s⁻¹(v)} χ_{r(e)}` over `T`.
pub fn delta_relation<Z: Scalar>(g: &Ultragraph, v: Index, tracked: &Tracked) -> Result<ZgFunction<Z>> {
    check_supported(g)?;
    match g.out_degree(v) {
        Degree::Finite(k) if k > 0 => {}
        _ => return Err(Error::NotRegular(v)),
    }
    let mut f = ZgFunction::delta(tracked, v)?;
    let edges = g.preimage(&IndexSet::singleton(g.vertices(), v)?)?.finite_members().ok_or(Error::NotRegular(v))?;
    for e in edges {
        f = f.sub(&chi(&g.range(e)?, tracked)?);
    }
    Ok(f)
}

/// The matrix of `∂` on the regular tracked vertices: one row per regular
/// vertex, one column per coordinate of `T` (and `τ`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryMatrix<Z> {
    pub tracked: Tracked,
    pub regular: Vec<Index>,
    pub matrix: Matrix<Z>,
}

impl<Z: Scalar> BoundaryMatrix<Z> {
    pub fn smith(&self) -> SmithForm<Z> {
        smith_normal_form(&self.matrix)
    }

    pub fn groups(&self) -> (FpAbelianGroup<Z>, FpAbelianGroup<Z>) {
        let f = self.smith();
        (FpAbelianGroup::cokernel(&self.matrix, &f), FpAbelianGroup::left_kernel(&self.matrix, &f))
    }

    /// Coordinates of a function in the column basis.
    pub fn coordinates(&self, f: &ZgFunction<Z>) -> Vec<Z> {
        assert_eq!(f.tracked(), &self.tracked, "function over a different tracked set");
        f.coordinates()
    }
}

/// The truncated boundary matrix for `T_n`, `n ≥ 2`. Presentations without
/// regular tracked vertices give a matrix with no rows.
pub fn boundary_matrix<Z: Scalar>(g: &Ultragraph, n: usize) -> Result<BoundaryMatrix<Z>> {
    if n < 2 {
        return Err(Error::Usage(format!("truncation parameter must be at least 2, got {n}")));
    }
    let tracked = tracked_set(g, n)?;
    let regular: Vec<Index> =
        tracked.vertices().iter().copied().filter(|&v| matches!(g.out_degree(v), Degree::Finite(k) if k > 0)).collect();
    let rows = regular
        .iter()
        .map(|&v| delta_relation::<Z>(g, v, &tracked).map(|f| f.coordinates()))
        .collect::<Result<Vec<_>>>()?;
    let matrix = Matrix::from_rows(rows, tracked.dimension())
        .with_labels(regular.iter().map(|v| format!("v{v}")).collect(), tracked.labels());
    Ok(BoundaryMatrix { tracked, regular, matrix })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KOptions {
    /// First truncation tried.
    pub n_start: usize,
    /// Largest truncation allowed while looking for three agreeing ones.
    pub n_max: usize,
}

impl Default for KOptions {
    fn default() -> Self {
        KOptions { n_start: 2, n_max: 16 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KGroups<Z> {
    pub k0: FpAbelianGroup<Z>,
    pub k1: FpAbelianGroup<Z>,
    /// The truncation whose result agreed with the next two.
    pub n: usize,
}

/// `K₀` and `K₁`, accepted once the truncations `n`, `n+1`, `n+2` agree.
pub fn k_groups<Z: Scalar>(g: &Ultragraph, opts: KOptions) -> Result<KGroups<Z>> {
    let n_start = opts.n_start.max(2);
    if n_start + 2 > opts.n_max {
        return Err(Error::Usage(format!("n_max {} leaves no room for three truncations", opts.n_max)));
    }
    let mut window = Vec::with_capacity(3);
    for n in n_start..=opts.n_max {
        window.push(boundary_matrix::<Z>(g, n)?.groups());
        if window.len() > 3 {
            window.remove(0);
        }
        if window.len() == 3 && window[0] == window[1] && window[1] == window[2] {
            let (k0, k1) = window.swap_remove(0);
            return Ok(KGroups { k0, k1, n: n - 2 });
        }
    }
    let candidates: Vec<String> = window.iter().map(|(a, b)| format!("K0 = {a}, K1 = {b}")).collect();
    Err(Error::NotStabilized(format!("up to n = {}: {}", opts.n_max, candidates.join("; "))))
}

pub fn k0<Z: Scalar>(g: &Ultragraph) -> Result<FpAbelianGroup<Z>> {
    k_groups(g, KOptions::default()).map(|k| k.k0)
}

pub fn k1<Z: Scalar>(g: &Ultragraph) -> Result<FpAbelianGroup<Z>> {
    k_groups(g, KOptions::default()).map(|k| k.k1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::vertexset::Universe;

    #[test]
    fn relations_of_skip_two() {
        let g = catalog::skip_two();
        let t = Tracked::new(Universe::POSITIVE, [1, 2, 3]).unwrap();
        assert_eq!(delta_relation::<i64>(&g, 1, &t).unwrap().to_string(), "(1,0,-1 | τ:-1)");
        assert_eq!(delta_relation::<i64>(&g, 2, &t).unwrap().to_string(), "(-1,0,-1 | τ:-1)");
        assert!(matches!(delta_relation::<i64>(&g, 9, &t), Err(Error::TrackedSetTooSmall(_))));
    }

    #[test]
    fn relations_of_double_emitter() {
        let g = catalog::double_emitter();
        let t = Tracked::new(Universe::POSITIVE, [1, 2, 3, 4]).unwrap();
        assert_eq!(delta_relation::<i64>(&g, 1, &t).unwrap().coordinates(), vec![0, 0, -2, -2, -2]);
        let b = boundary_matrix::<i64>(&g, 2).unwrap();
        assert_eq!(b.regular, vec![1, 2, 3, 4]);
        assert_eq!(
            b.matrix,
            Matrix::from_i64(&[&[0, 0, -2, -2, -2], &[0, 1, -1, -1, -1], &[-1, -1, 0, -1, -1], &[-1, -1, -1, 0, -1],])
                .with_labels(b.matrix.row_labels().to_vec(), b.matrix.col_labels().to_vec())
        );
    }

    #[test]
    fn skip_two_matrix_at_two() {
        let b = boundary_matrix::<i64>(&catalog::skip_two(), 2).unwrap();
        assert_eq!(b.tracked.vertices(), &[1, 2, 3]);
        assert_eq!(b.matrix.to_string(), "   v1 v2 v3 tau\nv1  1  0 -1  -1\nv2 -1  0 -1  -1\nv3 -1 -1  0  -1\n");
    }

    #[test]
    fn unsupported_and_degenerate() {
        assert!(matches!(boundary_matrix::<i64>(&catalog::upper_tail(), 2), Err(Error::TailNotSupported(_))));
        assert!(matches!(boundary_matrix::<i64>(&catalog::split_source(), 2), Err(Error::TailNotSupported(_))));
        assert!(matches!(boundary_matrix::<i64>(&catalog::skip_two(), 1), Err(Error::Usage(_))));
        let b = catalog::bouquet();
        let tb = tracked_set(&b, 5).unwrap();
        assert!(matches!(delta_relation::<i64>(&b, 1, &tb), Err(Error::NotRegular(1))));
        let m = boundary_matrix::<i64>(&b, 3).unwrap();
        assert_eq!((m.matrix.rows(), m.matrix.cols()), (0, 1));
    }

    #[test]
    fn growing_sinks_do_not_stabilize() {
        // A single loop at v1 in an infinite vertex set: every other vertex
        // is a sink and adds a free generator.
        let u = Universe::POSITIVE;
        let g = Ultragraph::new(
            u,
            vec![crate::ultragraph::ExceptionalEdge { index: 1, source: 1, range: IndexSet::singleton(u, 1).unwrap() }],
            vec![],
        )
        .unwrap();
        assert!(matches!(k_groups::<i64>(&g, KOptions::default()), Err(Error::NotStabilized(_))));
    }
}
