//! Dense real linear algebra behind the ray model.
//!
//! Frames are `d x k` matrices with orthonormal columns. Every frame that
//! leaves this module is canonical: it is rebuilt from the orthogonal
//! projector by a pivoted Gram-Schmidt pass over the projector's columns, so
//! it depends only on the subspace and not on the vectors that spanned it.

use nalgebra::{DMatrix, DVector};

/// Tolerance for similarity comparisons and orthogonality tests.
pub const TOL_EQ: f64 = 1e-9;
/// Tolerance for unit-norm and canonical-sign decisions.
pub const TOL_UNIT: f64 = 1e-12;
/// Singular values below this fraction of the largest one count as zero.
pub const RANK_REL: f64 = 1e-10;
/// Gram-Schmidt residuals below this norm are discarded during completion.
pub const RESIDUAL_DISCARD: f64 = 1e-10;

const PIVOT_TIE: f64 = 1e-9;
const ZERO_SPAN: f64 = 1e-12;
// eigenvalue of 2I - P_a - P_b; its square root is the singular value of the stacked pair
const NULL_EIGEN: f64 = 1e-14;

/// Flips `v` so that its first component with magnitude above `TOL_UNIT` is positive.
pub fn canonicalize_sign(v: &mut DVector<f64>) {
    if let Some(first) = v.iter().copied().find(|c| c.abs() > TOL_UNIT) {
        if first < 0.0 {
            v.neg_mut();
        }
    }
}

pub fn is_sign_canonical(v: &DVector<f64>) -> bool {
    v.iter()
        .copied()
        .find(|c| c.abs() > TOL_UNIT)
        .is_none_or(|c| c > 0.0)
}

pub fn projector(frame: &DMatrix<f64>) -> DMatrix<f64> {
    frame * frame.transpose()
}

pub fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Orthonormal basis of the column space of `m`, rank decided by the
/// diagonal of a column-pivoted QR factorization.
///
/// nalgebra's bidiagonal SVD can return factors that do not reconstruct the
/// input (seen on a 5 x 5 matrix of two stacked frames, error 1e-2), so it is
/// not used here.
fn column_space(m: &DMatrix<f64>) -> DMatrix<f64> {
    let d = m.nrows();
    if m.ncols() == 0 {
        return DMatrix::zeros(d, 0);
    }
    let qr = m.clone().col_piv_qr();
    let r = qr.r();
    let lead = r[(0, 0)].abs();
    if lead <= ZERO_SPAN {
        return DMatrix::zeros(d, 0);
    }
    let rank = (0..r.nrows().min(r.ncols()))
        .take_while(|&i| r[(i, i)].abs() > RANK_REL * lead)
        .count();
    qr.q().columns(0, rank).into_owned()
}

/// Canonical frame for the projector `p` of known rank.
///
/// Pivots on the projector column with the largest residual norm (lowest
/// index on near-ties), orthonormalizes with a second re-orthogonalization
/// pass, and fixes each column's sign.
pub fn canonical_frame(p: &DMatrix<f64>, rank: usize) -> DMatrix<f64> {
    let d = p.nrows();
    let mut residual = p.clone();
    let mut cols: Vec<DVector<f64>> = Vec::with_capacity(rank);
    for _ in 0..rank {
        let mut best = 0usize;
        let mut best_norm = -1.0;
        for j in 0..d {
            let n = residual.column(j).norm();
            if n > best_norm + PIVOT_TIE {
                best = j;
                best_norm = n;
            }
        }
        let mut q: DVector<f64> = residual.column(best).into_owned();
        for prev in &cols {
            let c = prev.dot(&q);
            q.axpy(-c, prev, 1.0);
        }
        let n = q.norm();
        if n <= ZERO_SPAN {
            break;
        }
        q /= n;
        for j in 0..d {
            let c = q.dot(&residual.column(j));
            let mut col = residual.column_mut(j);
            col.axpy(-c, &q, 1.0);
        }
        cols.push(q);
    }
    for q in &mut cols {
        canonicalize_sign(q);
    }
    if cols.is_empty() {
        DMatrix::zeros(d, 0)
    } else {
        DMatrix::from_columns(&cols)
    }
}

/// Canonical frame of the span of the columns of `m`.
pub fn span_frame(m: &DMatrix<f64>) -> DMatrix<f64> {
    let basis = column_space(m);
    let rank = basis.ncols();
    canonical_frame(&projector(&basis), rank)
}

/// Canonical frame of the orthogonal complement of the span of `frame`.
pub fn complement_frame(frame: &DMatrix<f64>) -> DMatrix<f64> {
    let d = frame.nrows();
    let p = DMatrix::identity(d, d) - projector(frame);
    canonical_frame(&p, d - frame.ncols())
}

/// Concatenates frames column-wise.
pub fn hstack(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let d = a.nrows();
    let mut out = DMatrix::zeros(d, a.ncols() + b.ncols());
    out.columns_mut(0, a.ncols()).copy_from(a);
    out.columns_mut(a.ncols(), b.ncols()).copy_from(b);
    out
}

/// Intersection of two spans computed as the common null space of
/// `I - P_a` and `I - P_b`, found as the kernel of `2I - P_a - P_b` by a
/// symmetric eigendecomposition. Shares no code with the complement/sum route.
pub fn nullspace_intersection(pa: &DMatrix<f64>, pb: &DMatrix<f64>) -> DMatrix<f64> {
    let d = pa.nrows();
    let gram = DMatrix::<f64>::identity(d, d) * 2.0 - pa - pb;
    let eig = gram.symmetric_eigen();
    let null: Vec<DVector<f64>> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, l)| **l <= NULL_EIGEN)
        .map(|(i, _)| eig.eigenvectors.column(i).into_owned())
        .collect();
    if null.is_empty() {
        return DMatrix::zeros(d, 0);
    }
    let m = DMatrix::from_columns(&null);
    let rank = m.ncols();
    let basis = column_space(&m);
    canonical_frame(&projector(&basis), rank.min(basis.ncols()))
}

/// Extends the orthonormal columns of `frame` by standard basis vectors in
/// index order, keeping residuals of norm at least `RESIDUAL_DISCARD`.
pub fn complete_with_standard_basis(frame: &DMatrix<f64>) -> Vec<DVector<f64>> {
    let d = frame.nrows();
    let mut cols: Vec<DVector<f64>> = frame.column_iter().map(|c| c.into_owned()).collect();
    for i in 0..d {
        if cols.len() == d {
            break;
        }
        let mut v = DVector::zeros(d);
        v[i] = 1.0;
        for _ in 0..2 {
            for q in &cols {
                let c = q.dot(&v);
                v.axpy(-c, q, 1.0);
            }
        }
        let n = v.norm();
        if n >= RESIDUAL_DISCARD {
            v /= n;
            cols.push(v);
        }
    }
    cols.into_iter()
        .skip(frame.ncols())
        .map(|mut v| {
            canonicalize_sign(&mut v);
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn col(values: &[f64]) -> DMatrix<f64> {
        DMatrix::from_column_slice(values.len(), 1, values)
    }

    #[test]
    fn span_of_parallel_vectors_has_rank_one() {
        let m = DMatrix::from_column_slice(2, 2, &[1.0, 1.0, -2.0, -2.0]);
        let f = span_frame(&m);
        assert_eq!(f.ncols(), 1);
        assert!((f[(0, 0)] - f[(1, 0)]).abs() < 1e-12);
        assert!(f[(0, 0)] > 0.0);
    }

    #[test]
    fn canonical_frame_is_independent_of_spanning_set() {
        let a = DMatrix::from_column_slice(3, 2, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0]);
        let b = DMatrix::from_column_slice(3, 2, &[1.0, 1.0, 0.0, 3.0, -1.0, 0.0]);
        let fa = span_frame(&a);
        let fb = span_frame(&b);
        assert!(max_abs_diff(&fa, &fb) < 1e-12);
    }

    #[test]
    fn span_contains_every_column() {
        // complements of a 3-plane and a 2-plane in R^5 sharing one line
        #[rustfmt::skip]
        let m = DMatrix::from_column_slice(5, 5, &[
            0.11614180607157251, -0.5860891520057591, -0.11080076521240251, 0.7545711963435311, -0.24770160851444206,
            0.6991834399169813, -0.14801886564437244, 0.5501078585584848, 2.508290104883e-17, 0.43198874604717247,
            0.1958650924244147, -0.10558751749896951, -0.05172716594138561, -0.9212586147932307, 0.3147935937895029,
            0.8432026433891449, 0.033009166144149164, 0.25618931679137147, -3.5508769240179804e-17, -0.47147293781721666,
            4.1778831669498713e-17, 0.7685130296932853, 0.5380878727101122, 3.764111909800324e-17, 0.34619238066998753,
        ]);
        let f = span_frame(&m);
        assert_eq!(f.ncols(), 4);
        let p = projector(&f);
        assert!(max_abs_diff(&(&p * &m), &m) < 1e-12);
    }

    #[test]
    fn complement_of_line_in_plane() {
        let f = span_frame(&col(&[1.0, 0.0]));
        let c = complement_frame(&f);
        assert_eq!(c.ncols(), 1);
        assert!((c[(1, 0)] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn nullspace_route_finds_common_line() {
        let a = span_frame(&DMatrix::from_column_slice(
            3,
            2,
            &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0],
        ));
        let b = span_frame(&DMatrix::from_column_slice(
            3,
            2,
            &[0.0, 1.0, 0.0, 0.0, 0.0, 1.0],
        ));
        let meet = nullspace_intersection(&projector(&a), &projector(&b));
        assert_eq!(meet.ncols(), 1);
        assert!((meet[(1, 0)] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn completion_uses_standard_vectors_in_order() {
        let f = span_frame(&col(&[1.0, 1.0, 0.0]));
        let extra = complete_with_standard_basis(&f);
        assert_eq!(extra.len(), 2);
        // e1 residual is (1,-1,0)/sqrt2, e2's residual vanishes, e3 survives.
        assert!((extra[0][0] - 0.5f64.sqrt()).abs() < 1e-12);
        assert!((extra[1][2] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_vectors_span_nothing() {
        let f = span_frame(&DMatrix::zeros(3, 2));
        assert_eq!(f.ncols(), 0);
    }
}
