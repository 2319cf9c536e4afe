//! The three concrete similarity-projection models and point-level operations.

use std::fmt;
use std::sync::{Arc, OnceLock};

use nalgebra::DVector;

use crate::error::{Result, SpError};
use crate::explicit::Catalog;
use crate::linalg::{self, TOL_EQ, TOL_UNIT};
use crate::subspace::{Carrier, Subspace};

/// Largest explicit model whose ortho-sets and subspaces are enumerated exhaustively.
pub const EXHAUSTIVE_LIMIT: usize = 12;

/// Tolerance for loader checks on explicit matrices.
pub const MATRIX_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StructureKind {
    Classical,
    Ray,
    Explicit,
}

pub(crate) struct ExplicitModel {
    pub(crate) labels: Vec<String>,
    /// Row-major `n x n` similarity matrix.
    pub(crate) matrix: Vec<f64>,
    pub(crate) catalog: OnceLock<Option<Catalog>>,
}

pub(crate) enum Model {
    Classical { n: usize },
    Ray { dim: usize },
    Explicit(ExplicitModel),
}

/// A sample space together with its similarity function.
///
/// Cheap to clone; clones share the underlying model and the explicit-model
/// subspace catalog.
#[derive(Clone)]
pub struct SpStructure(pub(crate) Arc<Model>);

impl fmt::Debug for SpStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            Model::Classical { n } => write!(f, "Classical(n={n})"),
            Model::Ray { dim } => write!(f, "Ray(d={dim})"),
            Model::Explicit(m) => write!(f, "Explicit({:?})", m.labels),
        }
    }
}

impl PartialEq for SpStructure {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        match (&*self.0, &*other.0) {
            (Model::Classical { n: a }, Model::Classical { n: b }) => a == b,
            (Model::Ray { dim: a }, Model::Ray { dim: b }) => a == b,
            (Model::Explicit(a), Model::Explicit(b)) => {
                a.labels == b.labels && a.matrix == b.matrix
            }
            _ => false,
        }
    }
}

/// A point of a structure: an index into a finite space or a canonical unit ray.
#[derive(Debug, Clone, PartialEq)]
pub struct Point(pub(crate) PointRepr);

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum PointRepr {
    Index(usize),
    Ray(DVector<f64>),
}

impl serde::Serialize for Point {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match &self.0 {
            PointRepr::Index(i) => serializer.serialize_u64(*i as u64),
            PointRepr::Ray(v) => serializer.collect_seq(v.iter()),
        }
    }
}

impl Point {
    pub fn index(i: usize) -> Self {
        Point(PointRepr::Index(i))
    }

    /// Normalizes `components` and fixes the sign so that `v` and `-v` give the same point.
    pub fn ray(components: &[f64]) -> Result<Self> {
        Self::from_vector(DVector::from_column_slice(components))
    }

    pub fn from_vector(mut v: DVector<f64>) -> Result<Self> {
        if v.is_empty() || v.iter().any(|c| !c.is_finite()) {
            return Err(SpError::InvalidPoint(
                "ray components must be finite and non-empty".into(),
            ));
        }
        let n = v.norm();
        if n <= TOL_UNIT {
            return Err(SpError::InvalidPoint(
                "zero vector does not define a ray".into(),
            ));
        }
        v /= n;
        linalg::canonicalize_sign(&mut v);
        Ok(Point(PointRepr::Ray(v)))
    }

    pub fn as_index(&self) -> Option<usize> {
        match &self.0 {
            PointRepr::Index(i) => Some(*i),
            PointRepr::Ray(_) => None,
        }
    }

    pub fn as_vector(&self) -> Option<&DVector<f64>> {
        match &self.0 {
            PointRepr::Ray(v) => Some(v),
            PointRepr::Index(_) => None,
        }
    }

    /// Re-applies normalization and sign canonicalization.
    pub fn recanonicalized(&self) -> Self {
        match &self.0 {
            PointRepr::Index(_) => self.clone(),
            PointRepr::Ray(v) => {
                Point::from_vector(v.clone()).expect("stored rays are unit vectors")
            }
        }
    }

    pub(crate) fn vec(&self) -> &DVector<f64> {
        match &self.0 {
            PointRepr::Ray(v) => v,
            PointRepr::Index(_) => panic!("index point used as a ray"),
        }
    }

    pub(crate) fn idx(&self) -> usize {
        match &self.0 {
            PointRepr::Index(i) => *i,
            PointRepr::Ray(_) => panic!("ray point used as an index"),
        }
    }
}

/// A duplicate-free list of pairwise orthogonal points.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthoSet {
    points: Vec<Point>,
}

impl OrthoSet {
    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub(crate) fn from_trusted(points: Vec<Point>) -> Self {
        OrthoSet { points }
    }
}

impl SpStructure {
    pub fn classical(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(SpError::InvalidStructure(
                "classical structure needs at least one point".into(),
            ));
        }
        Ok(SpStructure(Arc::new(Model::Classical { n })))
    }

    pub fn ray(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(SpError::InvalidStructure(
                "ray structure needs dimension at least 1".into(),
            ));
        }
        Ok(SpStructure(Arc::new(Model::Ray { dim })))
    }

    /// Builds an explicit model from labels and a square similarity matrix.
    ///
    /// The matrix must be symmetric and have a unit diagonal within
    /// `MATRIX_TOL`. Range and standardness are left to the axiom validator
    /// so that non-conforming matrices can still be inspected.
    pub fn explicit(labels: Vec<String>, matrix: Vec<Vec<f64>>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(SpError::InvalidStructure(
                "explicit structure needs at least one point".into(),
            ));
        }
        if matrix.len() != n || matrix.iter().any(|row| row.len() != n) {
            return Err(SpError::InvalidStructure(format!("matrix must be {n}x{n}")));
        }
        for (i, a) in labels.iter().enumerate() {
            if labels[..i].contains(a) {
                return Err(SpError::InvalidStructure(format!(
                    "duplicate point label {a:?}"
                )));
            }
        }
        #[allow(clippy::needless_range_loop)]
        for i in 0..n {
            for j in 0..n {
                let v = matrix[i][j];
                if !v.is_finite() {
                    return Err(SpError::InvalidStructure(format!(
                        "entry ({i},{j}) is not finite"
                    )));
                }
                if (v - matrix[j][i]).abs() > MATRIX_TOL {
                    return Err(SpError::InvalidStructure(format!(
                        "matrix is not symmetric at ({i},{j})"
                    )));
                }
            }
            if (matrix[i][i] - 1.0).abs() > MATRIX_TOL {
                return Err(SpError::InvalidStructure(format!(
                    "diagonal entry {i} is not 1"
                )));
            }
        }
        let flat = matrix.into_iter().flatten().collect();
        Ok(SpStructure(Arc::new(Model::Explicit(ExplicitModel {
            labels,
            matrix: flat,
            catalog: OnceLock::new(),
        }))))
    }

    pub fn kind(&self) -> StructureKind {
        match &*self.0 {
            Model::Classical { .. } => StructureKind::Classical,
            Model::Ray { .. } => StructureKind::Ray,
            Model::Explicit(_) => StructureKind::Explicit,
        }
    }

    /// Number of points for finite models; `None` for the ray model.
    pub fn point_count(&self) -> Option<usize> {
        match &*self.0 {
            Model::Classical { n } => Some(*n),
            Model::Ray { .. } => None,
            Model::Explicit(m) => Some(m.labels.len()),
        }
    }

    /// Ray dimension, or the point count for finite models.
    pub fn dimension(&self) -> usize {
        match &*self.0 {
            Model::Classical { n } => *n,
            Model::Ray { dim } => *dim,
            Model::Explicit(m) => m.labels.len(),
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        match &*self.0 {
            Model::Explicit(m) => Some(&m.labels),
            _ => None,
        }
    }

    pub fn label_of(&self, x: &Point) -> String {
        match (&*self.0, &x.0) {
            (Model::Explicit(m), PointRepr::Index(i)) if *i < m.labels.len() => {
                m.labels[*i].clone()
            }
            (_, PointRepr::Index(i)) => i.to_string(),
            (_, PointRepr::Ray(v)) => format!("{:?}", v.as_slice()),
        }
    }

    pub fn point_by_label(&self, label: &str) -> Result<Point> {
        match &*self.0 {
            Model::Explicit(m) => m
                .labels
                .iter()
                .position(|l| l == label)
                .map(Point::index)
                .ok_or_else(|| SpError::InvalidPoint(format!("unknown label {label:?}"))),
            Model::Classical { n } => match label.parse::<usize>() {
                Ok(i) if i < *n => Ok(Point::index(i)),
                _ => Err(SpError::InvalidPoint(format!(
                    "unknown classical point {label:?}"
                ))),
            },
            Model::Ray { .. } => Err(SpError::InvalidPoint("ray points have no labels".into())),
        }
    }

    /// All points of a finite model in index order.
    pub fn points(&self) -> Option<Vec<Point>> {
        self.point_count()
            .map(|n| (0..n).map(Point::index).collect())
    }

    pub fn check_point(&self, x: &Point) -> Result<()> {
        match (&*self.0, &x.0) {
            (Model::Classical { n }, PointRepr::Index(i)) if i < n => Ok(()),
            (Model::Explicit(m), PointRepr::Index(i)) if *i < m.labels.len() => Ok(()),
            (Model::Ray { dim }, PointRepr::Ray(v)) if v.len() == *dim => {
                if (v.norm() - 1.0).abs() > TOL_UNIT {
                    return Err(SpError::InvalidPoint(
                        "ray point is not a unit vector".into(),
                    ));
                }
                Ok(())
            }
            _ => Err(SpError::InvalidPoint(format!(
                "{x:?} is not a point of {self:?}"
            ))),
        }
    }

    pub(crate) fn same_structure(&self, other: &SpStructure) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(SpError::MixedStructures)
        }
    }

    /// Explicit matrix entry without clamping.
    pub(crate) fn raw(&self, i: usize, j: usize) -> f64 {
        match &*self.0 {
            Model::Explicit(m) => m.matrix[i * m.labels.len() + j],
            Model::Classical { .. } => {
                if i == j {
                    1.0
                } else {
                    0.0
                }
            }
            Model::Ray { .. } => panic!("raw matrix access on the ray model"),
        }
    }

    /// Similarity of two already-validated points, clamped to [0, 1].
    pub(crate) fn sim(&self, x: &Point, y: &Point) -> f64 {
        match (&*self.0, &x.0, &y.0) {
            (Model::Classical { .. }, PointRepr::Index(a), PointRepr::Index(b)) => {
                if a == b {
                    1.0
                } else {
                    0.0
                }
            }
            (Model::Ray { .. }, PointRepr::Ray(a), PointRepr::Ray(b)) => {
                let c = a.dot(b);
                (c * c).clamp(0.0, 1.0)
            }
            (Model::Explicit(_), PointRepr::Index(a), PointRepr::Index(b)) => {
                self.raw(*a, *b).clamp(0.0, 1.0)
            }
            _ => panic!("point kind does not match structure"),
        }
    }

    /// Similarity `s(x, y)` between two points.
    pub fn similarity(&self, x: &Point, y: &Point) -> Result<f64> {
        self.check_point(x)?;
        self.check_point(y)?;
        Ok(self.sim(x, y))
    }

    pub fn orthogonal_points(&self, x: &Point, y: &Point) -> bool {
        match &*self.0 {
            Model::Classical { .. } => x.idx() != y.idx(),
            _ => self.sim(x, y) <= TOL_EQ,
        }
    }

    /// Point equality: index equality or, for rays, equality up to sign.
    pub fn same_point(&self, x: &Point, y: &Point) -> bool {
        match &*self.0 {
            Model::Ray { .. } => self.sim(x, y) >= 1.0 - TOL_EQ,
            _ => x.idx() == y.idx(),
        }
    }

    /// Validates `points` as an ortho-set of this structure.
    pub fn ortho_set(&self, points: Vec<Point>) -> Result<OrthoSet> {
        for x in &points {
            self.check_point(x)?;
        }
        for (i, x) in points.iter().enumerate() {
            for y in &points[..i] {
                if self.same_point(x, y) {
                    return Err(SpError::NotOrthoSet(format!(
                        "duplicate point {}",
                        self.label_of(x)
                    )));
                }
                if !self.orthogonal_points(x, y) {
                    return Err(SpError::NotOrthoSet(format!(
                        "s({}, {}) = {} is not 0",
                        self.label_of(x),
                        self.label_of(y),
                        self.sim(x, y)
                    )));
                }
            }
        }
        Ok(OrthoSet { points })
    }

    pub(crate) fn sum_to_ortho_set(&self, x: &Point, a: &[Point]) -> f64 {
        a.iter().map(|y| self.sim(x, y)).sum()
    }

    /// `s(x, A)`: the summed similarity of `x` to an ortho-set.
    pub fn similarity_to_ortho_set(&self, x: &Point, a: &OrthoSet) -> Result<f64> {
        self.check_point(x)?;
        for y in a.points() {
            self.check_point(y)?;
        }
        let total = self.sum_to_ortho_set(x, a.points());
        if total > 1.0 + TOL_EQ {
            if self.kind() == StructureKind::Explicit {
                return Err(SpError::BoundednessViolated { value: total });
            }
            return Err(SpError::NotOrthoSet(format!("s(x, A) = {total} exceeds 1")));
        }
        Ok(total.min(1.0))
    }

    /// The subspace generated by an ortho-set: all points `x` with `s(x, A) = 1`.
    pub fn span(&self, a: &OrthoSet) -> Result<Subspace> {
        for y in a.points() {
            self.check_point(y)?;
        }
        Ok(match &*self.0 {
            Model::Ray { dim } => {
                let cols: Vec<DVector<f64>> = a.points().iter().map(|p| p.vec().clone()).collect();
                let m = if cols.is_empty() {
                    nalgebra::DMatrix::zeros(*dim, 0)
                } else {
                    nalgebra::DMatrix::from_columns(&cols)
                };
                Subspace::from_frame(self.clone(), linalg::span_frame(&m))
            }
            _ => {
                let basis: Vec<usize> = a.points().iter().map(|p| p.idx()).collect();
                let n = self.dimension();
                let set = (0..n)
                    .filter(|&x| {
                        let s: f64 = basis.iter().map(|&b| self.raw(x, b).clamp(0.0, 1.0)).sum();
                        s >= 1.0 - TOL_EQ
                    })
                    .collect::<Vec<_>>();
                Subspace::from_points_with_basis(self.clone(), &set, basis)
            }
        })
    }

    /// `t(x, B)`: the unique point of `B` closest to `x`.
    pub fn project(&self, x: &Point, b: &Subspace) -> Result<Point> {
        self.check_point(x)?;
        self.same_structure(b.structure())?;
        if b.is_empty() {
            return Err(SpError::EmptySubspace);
        }
        let target = b.similarity_from(x);
        if target <= TOL_EQ {
            return Err(SpError::OrthogonalProjectionUndefined);
        }
        match b.carrier() {
            Carrier::Frame { projector, .. } => Point::from_vector(projector * x.vec()),
            Carrier::Points { set, .. } => {
                let mut best: Option<(usize, f64)> = None;
                for y in set.iter_ones() {
                    let s = self.sim(x, &Point::index(y));
                    if best.is_none_or(|(_, bs)| s > bs) {
                        best = Some((y, s));
                    }
                }
                match best {
                    Some((y, s)) if (s - target).abs() <= TOL_EQ => Ok(Point::index(y)),
                    _ => Err(SpError::ProjectionMissing { target }),
                }
            }
        }
    }

    /// Extends an ortho-set to a basis of the whole space.
    pub fn extend_to_basis(&self, a: &OrthoSet) -> Result<OrthoSet> {
        for y in a.points() {
            self.check_point(y)?;
        }
        match &*self.0 {
            Model::Classical { n } => {
                Ok(OrthoSet::from_trusted((0..*n).map(Point::index).collect()))
            }
            Model::Ray { dim } => {
                let cols: Vec<DVector<f64>> = a.points().iter().map(|p| p.vec().clone()).collect();
                let frame = if cols.is_empty() {
                    nalgebra::DMatrix::zeros(*dim, 0)
                } else {
                    nalgebra::DMatrix::from_columns(&cols)
                };
                let mut points: Vec<Point> = a.points().to_vec();
                for v in linalg::complete_with_standard_basis(&frame) {
                    points.push(Point(PointRepr::Ray(v)));
                }
                Ok(OrthoSet::from_trusted(points))
            }
            Model::Explicit(_) => {
                let start: Vec<usize> = a.points().iter().map(|p| p.idx()).collect();
                let found =
                    crate::explicit::complete_basis(self, &start, EXPLICIT_COMPLETION_BUDGET)?;
                Ok(OrthoSet::from_trusted(
                    found.into_iter().map(Point::index).collect(),
                ))
            }
        }
    }

    /// Whether `s(x, C) = 1` for every point `x` (finite models: every point; rays: `|C| = d`).
    pub fn is_basis(&self, c: &OrthoSet) -> bool {
        match &*self.0 {
            Model::Ray { dim } => c.len() == *dim,
            _ => (0..self.dimension())
                .all(|x| self.sum_to_ortho_set(&Point::index(x), c.points()) >= 1.0 - TOL_EQ),
        }
    }

    pub(crate) fn explicit_model(&self) -> Option<&ExplicitModel> {
        match &*self.0 {
            Model::Explicit(m) => Some(m),
            _ => None,
        }
    }

    /// Subspace catalog of an explicit model within the exhaustive limit.
    pub(crate) fn catalog(&self) -> Option<&Catalog> {
        let m = self.explicit_model()?;
        m.catalog
            .get_or_init(|| (m.labels.len() <= EXHAUSTIVE_LIMIT).then(|| Catalog::build(self)))
            .as_ref()
    }
}

/// Node budget for the explicit-model basis completion search.
pub const EXPLICIT_COMPLETION_BUDGET: usize = 1 << 20;
