//! Seeded generators for points and subspaces.
//!
//! Every random draw in the crate goes through [`stream_rng`], so a seed and
//! a stream index fully determine a run.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::structure::{Point, SpStructure, StructureKind};
use crate::subspace::Subspace;

/// Independent generator for `(seed, stream)`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform direction on the unit sphere of `R^d`.
pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, d: usize) -> DVector<f64> {
    loop {
        let v = DVector::from_fn(d, |_, _| rng.sample::<f64, _>(StandardNormal));
        let n = v.norm();
        if n > 1e-6 {
            return v / n;
        }
    }
}

/// Uniform random point: a uniform ray, or a uniform index.
pub fn random_point<R: Rng + ?Sized>(st: &SpStructure, rng: &mut R) -> Point {
    match st.kind() {
        StructureKind::Ray => Point::from_vector(unit_vector(rng, st.dimension()))
            .expect("unit vector is a valid ray"),
        _ => Point::index(rng.random_range(0..st.dimension())),
    }
}

/// `k` random orthonormal vectors in `R^d` (Gram-Schmidt on Gaussian draws).
pub fn random_orthonormal<R: Rng + ?Sized>(rng: &mut R, d: usize, k: usize) -> Vec<DVector<f64>> {
    let mut out: Vec<DVector<f64>> = Vec::with_capacity(k);
    while out.len() < k {
        let mut v = unit_vector(rng, d);
        for _ in 0..2 {
            for q in &out {
                let c = q.dot(&v);
                v.axpy(-c, q, 1.0);
            }
        }
        let n = v.norm();
        if n > 1e-3 {
            out.push(v / n);
        }
    }
    out
}

/// Random point of a ray subspace (uniform on the subspace's unit sphere).
pub fn random_point_in<R: Rng + ?Sized>(b: &Subspace, rng: &mut R) -> Option<Point> {
    if b.is_empty() {
        return None;
    }
    match b.frame() {
        Some(frame) => {
            let coeffs = unit_vector(rng, frame.ncols());
            Point::from_vector(frame * coeffs).ok()
        }
        None => {
            let idx = b.point_indices().expect("finite subspace");
            Some(Point::index(idx[rng.random_range(0..idx.len())]))
        }
    }
}

/// Random subspace of dimension `dim` (ray), of random size (classical), or
/// drawn from the catalog (explicit; `dim` is ignored).
pub fn random_subspace<R: Rng + ?Sized>(st: &SpStructure, rng: &mut R, dim: usize) -> Subspace {
    match st.kind() {
        StructureKind::Ray => {
            let d = st.dimension();
            let cols = random_orthonormal(rng, d, dim.min(d));
            span_vectors(st, &cols)
        }
        StructureKind::Classical => {
            let pts: Vec<usize> = (0..st.dimension())
                .filter(|_| rng.random_bool(0.5))
                .collect();
            Subspace::from_points(st.clone(), &pts).expect("classical subsets are subspaces")
        }
        StructureKind::Explicit => match st.catalog() {
            Some(cat) => {
                let (mask, _) = cat.subspaces[rng.random_range(0..cat.subspaces.len())];
                let pts = crate::explicit::mask_to_vec(mask);
                Subspace::from_points(st.clone(), &pts).expect("catalog entries are subspaces")
            }
            None => {
                let x = random_point(st, rng);
                st.point_subspace(&x).expect("points generate subspaces")
            }
        },
    }
}

/// Ray subspace spanned by the given vectors.
pub fn span_vectors(st: &SpStructure, cols: &[DVector<f64>]) -> Subspace {
    let d = st.dimension();
    let m = if cols.is_empty() {
        DMatrix::zeros(d, 0)
    } else {
        DMatrix::from_columns(cols)
    };
    Subspace::from_frame(st.clone(), crate::linalg::span_frame(&m))
}
