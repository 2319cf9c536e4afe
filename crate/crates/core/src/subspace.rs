//! Subspaces: closed sets of points, the events of the theory.

use std::cmp::Ordering;

use bitvec::prelude::*;
use nalgebra::{DMatrix, DVector};

use crate::error::{Result, SpError};
use crate::explicit::{closure_mask, mask_to_vec, vec_to_mask};
use crate::linalg::{self, TOL_EQ};
use crate::structure::{OrthoSet, Point, PointRepr, SpStructure, StructureKind};

pub(crate) type PointSet = BitVec<usize, Lsb0>;

#[derive(Debug, Clone)]
pub(crate) enum Carrier {
    /// Classical and explicit models: the point set and one basis of it.
    Points { set: PointSet, basis: Vec<usize> },
    /// Ray model: canonical orthonormal frame and its projector.
    Frame {
        frame: DMatrix<f64>,
        projector: DMatrix<f64>,
    },
}

/// A subspace of a structure.
#[derive(Debug, Clone)]
pub struct Subspace {
    structure: SpStructure,
    carrier: Carrier,
}

impl Subspace {
    pub(crate) fn from_frame(structure: SpStructure, frame: DMatrix<f64>) -> Self {
        let projector = linalg::projector(&frame);
        Subspace {
            structure,
            carrier: Carrier::Frame { frame, projector },
        }
    }

    pub(crate) fn from_points_with_basis(
        structure: SpStructure,
        points: &[usize],
        basis: Vec<usize>,
    ) -> Self {
        let n = structure.dimension();
        let mut set = bitvec![usize, Lsb0; 0; n];
        for &p in points {
            set.set(p, true);
        }
        Subspace {
            structure,
            carrier: Carrier::Points { set, basis },
        }
    }

    /// Wraps a point set produced by a lattice operation, recovering a basis.
    ///
    /// Explicit models look the set up in the subspace catalog; sets outside
    /// the catalog (possible only for non-conforming matrices) fall back to a
    /// greedy maximal ortho-set inside the set.
    pub(crate) fn from_set(structure: SpStructure, set: PointSet) -> Self {
        let basis = match structure.kind() {
            StructureKind::Classical => set.iter_ones().collect(),
            _ => {
                let found = structure.catalog().and_then(|cat| {
                    let mask = vec_to_mask(&set.iter_ones().collect::<Vec<_>>());
                    cat.basis_of(mask).map(mask_to_vec)
                });
                found.unwrap_or_else(|| greedy_basis(&structure, &set))
            }
        };
        Subspace {
            structure,
            carrier: Carrier::Points { set, basis },
        }
    }

    /// The subspace with the given points.
    ///
    /// Every point set is a subspace of a classical structure; in an explicit
    /// structure the set must be the closure of one of its ortho-subsets.
    pub fn from_points(structure: SpStructure, points: &[usize]) -> Result<Self> {
        let n = match structure.point_count() {
            Some(n) => n,
            None => {
                return Err(SpError::NotASubspace(
                    "ray subspaces are given by spanning vectors".into(),
                ))
            }
        };
        let mut set = bitvec![usize, Lsb0; 0; n];
        for &p in points {
            if p >= n {
                return Err(SpError::InvalidPoint(format!(
                    "point index {p} out of range"
                )));
            }
            set.set(p, true);
        }
        if structure.kind() == StructureKind::Explicit {
            let sorted: Vec<usize> = set.iter_ones().collect();
            let is_subspace = match structure.catalog() {
                Some(cat) => cat.basis_of(vec_to_mask(&sorted)).is_some(),
                None => {
                    let basis = greedy_basis(&structure, &set);
                    closure_points(&structure, &basis) == set
                }
            };
            if !is_subspace {
                return Err(SpError::NotASubspace(format!(
                    "{sorted:?} is not the closure of an ortho-set"
                )));
            }
        }
        Ok(Subspace::from_set(structure, set))
    }

    pub fn structure(&self) -> &SpStructure {
        &self.structure
    }

    pub(crate) fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn dim(&self) -> usize {
        match &self.carrier {
            Carrier::Points { basis, .. } => basis.len(),
            Carrier::Frame { frame, .. } => frame.ncols(),
        }
    }

    pub fn is_empty(&self) -> bool {
        match &self.carrier {
            Carrier::Points { set, .. } => set.not_any(),
            Carrier::Frame { frame, .. } => frame.ncols() == 0,
        }
    }

    pub fn is_whole(&self) -> bool {
        match &self.carrier {
            Carrier::Points { set, .. } => set.all(),
            Carrier::Frame { frame, .. } => frame.ncols() == frame.nrows(),
        }
    }

    /// Canonical orthonormal frame (ray model only).
    pub fn frame(&self) -> Option<&DMatrix<f64>> {
        match &self.carrier {
            Carrier::Frame { frame, .. } => Some(frame),
            Carrier::Points { .. } => None,
        }
    }

    /// Orthogonal projector (ray model only).
    pub fn projector(&self) -> Option<&DMatrix<f64>> {
        match &self.carrier {
            Carrier::Frame { projector, .. } => Some(projector),
            Carrier::Points { .. } => None,
        }
    }

    /// Sorted point indices (finite models only).
    pub fn point_indices(&self) -> Option<Vec<usize>> {
        match &self.carrier {
            Carrier::Points { set, .. } => Some(set.iter_ones().collect()),
            Carrier::Frame { .. } => None,
        }
    }

    /// The stored basis of this subspace.
    pub fn basis(&self) -> OrthoSet {
        let points = match &self.carrier {
            Carrier::Points { basis, .. } => basis.iter().copied().map(Point::index).collect(),
            Carrier::Frame { frame, .. } => frame
                .column_iter()
                .map(|c| Point(PointRepr::Ray(c.into_owned())))
                .collect(),
        };
        OrthoSet::from_trusted(points)
    }

    /// `s(x, B)`: similarity of a point to this subspace, summed over the stored basis.
    pub(crate) fn similarity_from(&self, x: &Point) -> f64 {
        let s: f64 = match &self.carrier {
            Carrier::Frame { frame, .. } => {
                let v = x.vec();
                frame.column_iter().map(|c| c.dot(v).powi(2)).sum()
            }
            Carrier::Points { basis, .. } => basis
                .iter()
                .map(|&b| self.structure.sim(x, &Point::index(b)))
                .sum(),
        };
        s.clamp(0.0, 1.0)
    }

    /// `s(x, B)` for a validated point.
    pub fn similarity_to(&self, x: &Point) -> Result<f64> {
        self.structure.check_point(x)?;
        Ok(self.similarity_from(x))
    }

    pub fn contains(&self, x: &Point) -> bool {
        match (&self.carrier, &x.0) {
            (Carrier::Points { set, .. }, PointRepr::Index(i)) => set.get(*i).is_some_and(|b| *b),
            (Carrier::Frame { .. }, PointRepr::Ray(_)) => self.similarity_from(x) >= 1.0 - TOL_EQ,
            _ => false,
        }
    }

    /// `x ⊥ B`.
    pub fn orthogonal_to_point(&self, x: &Point) -> bool {
        match &self.carrier {
            Carrier::Points { set, .. } if self.structure.kind() == StructureKind::Classical => {
                !set[x.idx()]
            }
            _ => self.similarity_from(x) <= TOL_EQ,
        }
    }

    /// Distance used for equality: projector max-difference or 0/1 for point sets.
    pub fn residual(&self, other: &Subspace) -> f64 {
        match (&self.carrier, &other.carrier) {
            (Carrier::Frame { projector: a, .. }, Carrier::Frame { projector: b, .. }) => {
                if a.nrows() != b.nrows() {
                    return f64::INFINITY;
                }
                linalg::max_abs_diff(a, b)
            }
            (Carrier::Points { set: a, .. }, Carrier::Points { set: b, .. }) => {
                if a == b {
                    0.0
                } else {
                    1.0
                }
            }
            _ => f64::INFINITY,
        }
    }

    /// Equality as subspaces of the same structure.
    pub fn equals(&self, other: &Subspace) -> bool {
        self.structure == other.structure
            && self.dim() == other.dim()
            && self.residual(other) <= TOL_EQ
    }

    /// Inclusion `self ⊆ other`.
    pub fn is_subset_of(&self, other: &Subspace) -> bool {
        match (&self.carrier, &other.carrier) {
            (Carrier::Frame { projector: a, .. }, Carrier::Frame { projector: b, .. }) => {
                let pa_in_b = b * a;
                linalg::max_abs_diff(&pa_in_b, a) <= TOL_EQ
            }
            (Carrier::Points { set: a, .. }, Carrier::Points { set: b, .. }) => {
                a.iter_ones().all(|i| b[i])
            }
            _ => false,
        }
    }

    /// Deduplication and ordering key: dimension, then rounded frame or point indices.
    pub fn canonical_key(&self) -> Vec<i64> {
        let mut key = vec![self.dim() as i64];
        match &self.carrier {
            Carrier::Frame { frame, .. } => {
                key.extend(frame.iter().map(|v| (v * 1e12).round() as i64));
            }
            Carrier::Points { set, .. } => key.extend(set.iter_ones().map(|i| i as i64)),
        }
        key
    }

    pub fn canonical_cmp(&self, other: &Subspace) -> Ordering {
        self.canonical_key().cmp(&other.canonical_key())
    }

    /// Human-readable literal: point labels, or frame columns.
    pub fn describe(&self) -> String {
        match &self.carrier {
            Carrier::Points { set, .. } => {
                let labels: Vec<String> = set
                    .iter_ones()
                    .map(|i| self.structure.label_of(&Point::index(i)))
                    .collect();
                format!("{{{}}}", labels.join(", "))
            }
            Carrier::Frame { frame, .. } => {
                if frame.ncols() == 0 {
                    return "span{}".to_string();
                }
                let cols: Vec<String> = frame
                    .column_iter()
                    .map(|c| {
                        let parts: Vec<String> =
                            c.iter().map(|v| format!("{:.6}", clean(*v))).collect();
                        format!("({})", parts.join(", "))
                    })
                    .collect();
                format!("span{{{}}}", cols.join(", "))
            }
        }
    }

    /// Literal form accepted by the subspace parser: labels, indices, or frame columns.
    pub fn to_literal(&self) -> serde_json::Value {
        match &self.carrier {
            Carrier::Points { set, .. } => match self.structure.labels() {
                Some(labels) => serde_json::Value::from(
                    set.iter_ones()
                        .map(|i| labels[i].clone())
                        .collect::<Vec<_>>(),
                ),
                None => serde_json::Value::from(set.iter_ones().collect::<Vec<_>>()),
            },
            Carrier::Frame { frame, .. } => serde_json::Value::from(
                frame
                    .column_iter()
                    .map(|c| c.iter().map(|v| round12(*v)).collect::<Vec<f64>>())
                    .collect::<Vec<_>>(),
            ),
        }
    }
}

fn clean(v: f64) -> f64 {
    if v.abs() < 5e-7 {
        0.0
    } else {
        v
    }
}

pub(crate) fn round12(v: f64) -> f64 {
    let r = (v * 1e12).round() / 1e12;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn greedy_basis(st: &SpStructure, set: &PointSet) -> Vec<usize> {
    let mut basis: Vec<usize> = Vec::new();
    for i in set.iter_ones() {
        if basis
            .iter()
            .all(|&b| st.orthogonal_points(&Point::index(b), &Point::index(i)))
        {
            basis.push(i);
        }
    }
    basis
}

fn closure_points(st: &SpStructure, basis: &[usize]) -> PointSet {
    let n = st.dimension();
    let mut set = bitvec![usize, Lsb0; 0; n];
    if n <= 31 {
        let mask = closure_mask(st, n, vec_to_mask(basis));
        for i in mask_to_vec(mask) {
            set.set(i, true);
        }
        return set;
    }
    for x in 0..n {
        let s: f64 = basis.iter().map(|&b| st.raw(x, b).clamp(0.0, 1.0)).sum();
        if s >= 1.0 - TOL_EQ {
            set.set(x, true);
        }
    }
    set
}

impl SpStructure {
    pub fn empty_subspace(&self) -> Subspace {
        match self.kind() {
            StructureKind::Ray => {
                Subspace::from_frame(self.clone(), DMatrix::zeros(self.dimension(), 0))
            }
            _ => Subspace::from_points_with_basis(self.clone(), &[], Vec::new()),
        }
    }

    /// The whole space Ω.
    pub fn whole_space(&self) -> Subspace {
        let n = self.dimension();
        match self.kind() {
            StructureKind::Ray => Subspace::from_frame(self.clone(), DMatrix::identity(n, n)),
            _ => Subspace::from_set(self.clone(), bitvec![usize, Lsb0; 1; n]),
        }
    }

    /// Ray subspace spanned by arbitrary (not necessarily orthonormal) vectors.
    pub fn subspace_from_vectors(&self, vectors: &[Vec<f64>]) -> Result<Subspace> {
        if self.kind() != StructureKind::Ray {
            return Err(SpError::NotASubspace(
                "spanning vectors given for a finite structure".into(),
            ));
        }
        let d = self.dimension();
        let mut cols = Vec::with_capacity(vectors.len());
        for v in vectors {
            if v.len() != d || v.iter().any(|c| !c.is_finite()) {
                return Err(SpError::InvalidPoint(format!(
                    "spanning vector must have {d} finite components"
                )));
            }
            cols.push(DVector::from_column_slice(v));
        }
        let m = if cols.is_empty() {
            DMatrix::zeros(d, 0)
        } else {
            DMatrix::from_columns(&cols)
        };
        Ok(Subspace::from_frame(self.clone(), linalg::span_frame(&m)))
    }

    /// The subspace `{x}` generated by a single point.
    pub fn point_subspace(&self, x: &Point) -> Result<Subspace> {
        self.span(&self.ortho_set(vec![x.clone()])?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frame_is_canonical_regardless_of_spanning_vectors() {
        let st = SpStructure::ray(3).unwrap();
        let a = st
            .subspace_from_vectors(&[vec![1.0, 1.0, 0.0], vec![1.0, -1.0, 0.0]])
            .unwrap();
        let b = st
            .subspace_from_vectors(&[vec![0.0, 2.0, 0.0], vec![3.0, 0.0, 0.0]])
            .unwrap();
        assert!(a.equals(&b));
        assert_eq!(a.canonical_key(), b.canonical_key());
        assert_eq!(a.dim(), 2);
    }

    #[test]
    fn explicit_rejects_non_subspace_sets() {
        let m = vec![
            vec![1.0, 0.5, 0.0, 0.5],
            vec![0.5, 1.0, 0.5, 0.0],
            vec![0.0, 0.5, 1.0, 0.5],
            vec![0.5, 0.0, 0.5, 1.0],
        ];
        let st =
            SpStructure::explicit(vec!["h".into(), "d".into(), "v".into(), "a".into()], m).unwrap();
        assert!(Subspace::from_points(st.clone(), &[0]).is_ok());
        assert!(matches!(
            Subspace::from_points(st.clone(), &[0, 2]),
            Err(SpError::NotASubspace(_))
        ));
        assert!(Subspace::from_points(st, &[0, 1, 2, 3]).is_ok());
    }

    #[test]
    fn membership_and_inclusion() {
        let st = SpStructure::ray(3).unwrap();
        let plane = st
            .subspace_from_vectors(&[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]])
            .unwrap();
        let line = st.subspace_from_vectors(&[vec![1.0, 1.0, 0.0]]).unwrap();
        assert!(line.is_subset_of(&plane));
        assert!(!plane.is_subset_of(&line));
        assert!(plane.contains(&Point::ray(&[3.0, -1.0, 0.0]).unwrap()));
        assert!(!plane.contains(&Point::ray(&[0.0, 0.0, 1.0]).unwrap()));
        assert!(st.empty_subspace().is_subset_of(&line));
    }

    #[test]
    fn basis_similarity_matches_projector_quadratic_form() {
        let st = SpStructure::ray(4).unwrap();
        let b = st
            .subspace_from_vectors(&[vec![1.0, 2.0, 0.0, -1.0], vec![0.5, 0.0, 1.0, 1.0]])
            .unwrap();
        let x = Point::ray(&[0.3, -0.2, 0.9, 0.1]).unwrap();
        let v = x.as_vector().unwrap();
        let quad = (v.transpose() * b.projector().unwrap() * v)[(0, 0)];
        assert!((b.similarity_to(&x).unwrap() - quad).abs() < 1e-12);
    }
}
