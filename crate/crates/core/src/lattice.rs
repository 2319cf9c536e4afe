//! Lattice operations on subspaces and checkers for the lattice laws.
//!
//! Sum is the least upper bound, intersection the greatest lower bound and
//! the orthogonal complement an involution. In the ray model intersection is
//! computed through complements and sums; the common-null-space routine
//! [`independent_intersection`] is kept separate so that the De Morgan
//! checker has something independent to compare against.

use serde::Serialize;

use crate::error::{Result, SpError};
use crate::linalg::{self, TOL_EQ};
use crate::structure::{Point, SpStructure, StructureKind, EXHAUSTIVE_LIMIT};
use crate::subspace::{Carrier, PointSet, Subspace};

/// `A^⊥`: every point orthogonal to all of `A`.
pub fn ortho_complement(a: &Subspace) -> Subspace {
    let st = a.structure().clone();
    match a.carrier() {
        Carrier::Frame { frame, .. } => Subspace::from_frame(st, linalg::complement_frame(frame)),
        Carrier::Points { set, .. } => {
            let mut out = !set.clone();
            if st.kind() == StructureKind::Explicit {
                for x in 0..st.dimension() {
                    if out[x] {
                        let px = Point::index(x);
                        let orth = set
                            .iter_ones()
                            .all(|y| st.orthogonal_points(&px, &Point::index(y)));
                        out.set(x, orth);
                    }
                }
            }
            Subspace::from_set(st, out)
        }
    }
}

/// `A ⊕ B`: the smallest subspace containing both.
pub fn sum(a: &Subspace, b: &Subspace) -> Result<Subspace> {
    a.structure().same_structure(b.structure())?;
    let st = a.structure().clone();
    match (a.carrier(), b.carrier()) {
        (Carrier::Frame { frame: fa, .. }, Carrier::Frame { frame: fb, .. }) => Ok(
            Subspace::from_frame(st, linalg::span_frame(&linalg::hstack(fa, fb))),
        ),
        (Carrier::Points { set: sa, .. }, Carrier::Points { set: sb, .. }) => {
            let union: PointSet = sa.clone() | sb;
            if st.kind() == StructureKind::Classical {
                return Ok(Subspace::from_set(st, union));
            }
            let cat = st.catalog().ok_or(SpError::EnumerationTooLarge {
                points: st.dimension(),
                limit: EXHAUSTIVE_LIMIT,
            })?;
            let mask = crate::explicit::vec_to_mask(&union.iter_ones().collect::<Vec<_>>());
            let least = crate::explicit::mask_to_vec(cat.least_above(mask));
            let mut set = PointSet::repeat(false, st.dimension());
            for i in least {
                set.set(i, true);
            }
            Ok(Subspace::from_set(st, set))
        }
        _ => Err(SpError::MixedStructures),
    }
}

/// `A ∩ B`. Ray model: `(A^⊥ ⊕ B^⊥)^⊥`.
pub fn intersect(a: &Subspace, b: &Subspace) -> Result<Subspace> {
    a.structure().same_structure(b.structure())?;
    match (a.carrier(), b.carrier()) {
        (Carrier::Frame { .. }, Carrier::Frame { .. }) => Ok(ortho_complement(&sum(
            &ortho_complement(a),
            &ortho_complement(b),
        )?)),
        (Carrier::Points { set: sa, .. }, Carrier::Points { set: sb, .. }) => {
            Ok(Subspace::from_set(a.structure().clone(), sa.clone() & sb))
        }
        _ => Err(SpError::MixedStructures),
    }
}

/// Sum of a finite family, folded pairwise in input order. The empty family sums to `∅`.
pub fn sum_all(st: &SpStructure, family: &[Subspace]) -> Result<Subspace> {
    family
        .iter()
        .try_fold(st.empty_subspace(), |acc, x| sum(&acc, x))
}

/// Intersection of a finite family. The empty family intersects to `Ω`.
pub fn intersect_all(st: &SpStructure, family: &[Subspace]) -> Result<Subspace> {
    family
        .iter()
        .try_fold(st.whole_space(), |acc, x| intersect(&acc, x))
}

/// Intersection by a route that does not use complements or sums:
/// common null space of `I - P_A` and `I - P_B` for rays, set intersection otherwise.
pub fn independent_intersection(a: &Subspace, b: &Subspace) -> Result<Subspace> {
    a.structure().same_structure(b.structure())?;
    match (a.carrier(), b.carrier()) {
        (Carrier::Frame { projector: pa, .. }, Carrier::Frame { projector: pb, .. }) => {
            Ok(Subspace::from_frame(
                a.structure().clone(),
                linalg::nullspace_intersection(pa, pb),
            ))
        }
        (Carrier::Points { set: sa, .. }, Carrier::Points { set: sb, .. }) => {
            Ok(Subspace::from_set(a.structure().clone(), sa.clone() & sb))
        }
        _ => Err(SpError::MixedStructures),
    }
}

/// `A ⊥ B`: every basis point of `A` is orthogonal to every basis point of `B`.
pub fn is_orthogonal(a: &Subspace, b: &Subspace) -> bool {
    if a.structure() != b.structure() {
        return false;
    }
    match (a.carrier(), b.carrier()) {
        (Carrier::Frame { frame: fa, .. }, Carrier::Frame { frame: fb, .. }) => {
            let cross = fa.transpose() * fb;
            cross.iter().all(|c| c * c <= TOL_EQ)
        }
        (Carrier::Points { set: sa, .. }, Carrier::Points { set: sb, .. })
            if a.structure().kind() == StructureKind::Classical =>
        {
            !(sa.clone() & sb).any()
        }
        _ => {
            let st = a.structure();
            let ba = a.basis();
            let bb = b.basis();
            ba.points()
                .iter()
                .all(|x| bb.points().iter().all(|y| st.orthogonal_points(x, y)))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrthomodularCheck {
    pub holds: bool,
    /// Set when `A ⊆ C` did not hold, so the law was not tested.
    pub vacuous: bool,
    pub residual: f64,
}

/// Checks `C = A ⊕ (A^⊥ ∩ C)` for `A ⊆ C`.
pub fn check_orthomodular(a: &Subspace, c: &Subspace) -> Result<OrthomodularCheck> {
    a.structure().same_structure(c.structure())?;
    if !a.is_subset_of(c) {
        return Ok(OrthomodularCheck {
            holds: true,
            vacuous: true,
            residual: 0.0,
        });
    }
    let rebuilt = sum(a, &intersect(&ortho_complement(a), c)?)?;
    let residual = rebuilt.residual(c);
    Ok(OrthomodularCheck {
        holds: rebuilt.equals(c),
        vacuous: false,
        residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeMorganCheck {
    pub holds: bool,
    /// `(A ∩ B)^⊥` against `A^⊥ ⊕ B^⊥`.
    pub meet_residual: f64,
    /// `(A ⊕ B)^⊥` against `A^⊥ ∩ B^⊥`.
    pub sum_residual: f64,
    /// The lattice intersection against the independent intersection.
    pub cross_check_residual: f64,
}

/// Checks both De Morgan identities, with intersections taken by the independent route.
pub fn check_de_morgan(a: &Subspace, b: &Subspace) -> Result<DeMorganCheck> {
    let ac = ortho_complement(a);
    let bc = ortho_complement(b);

    let meet = independent_intersection(a, b)?;
    let lhs1 = ortho_complement(&meet);
    let rhs1 = sum(&ac, &bc)?;

    let lhs2 = ortho_complement(&sum(a, b)?);
    let rhs2 = independent_intersection(&ac, &bc)?;

    let lattice_meet = intersect(a, b)?;

    let holds = lhs1.equals(&rhs1) && lhs2.equals(&rhs2) && lattice_meet.equals(&meet);
    Ok(DeMorganCheck {
        holds,
        meet_residual: lhs1.residual(&rhs1),
        sum_residual: lhs2.residual(&rhs2),
        cross_check_residual: lattice_meet.residual(&meet),
    })
}

/// Whether `A ∩ (B ⊕ C) = (A ∩ B) ⊕ (A ∩ C)`.
pub fn distributes(a: &Subspace, b: &Subspace, c: &Subspace) -> Result<bool> {
    let lhs = intersect(a, &sum(b, c)?)?;
    let rhs = sum(&intersect(a, b)?, &intersect(a, c)?)?;
    Ok(lhs.equals(&rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(st: &SpStructure, v: &[f64]) -> Subspace {
        st.subspace_from_vectors(&[v.to_vec()]).unwrap()
    }

    #[test]
    fn complement_examples() {
        let st = SpStructure::ray(3).unwrap();
        assert!(ortho_complement(&st.whole_space()).is_empty());
        let e1 = line(&st, &[1.0, 0.0, 0.0]);
        let expect = st
            .subspace_from_vectors(&[vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]])
            .unwrap();
        assert!(ortho_complement(&e1).equals(&expect));
        assert!(ortho_complement(&ortho_complement(&e1)).equals(&e1));

        let c = SpStructure::classical(4).unwrap();
        let a = Subspace::from_points(c.clone(), &[0, 2]).unwrap();
        assert_eq!(ortho_complement(&a).point_indices().unwrap(), vec![1, 3]);
    }

    #[test]
    fn sum_examples() {
        let c = SpStructure::classical(4).unwrap();
        let a = Subspace::from_points(c.clone(), &[0, 1]).unwrap();
        let b = Subspace::from_points(c.clone(), &[1, 3]).unwrap();
        assert_eq!(sum(&a, &b).unwrap().point_indices().unwrap(), vec![0, 1, 3]);

        let st = SpStructure::ray(2).unwrap();
        let e1 = line(&st, &[1.0, 0.0]);
        let e2 = line(&st, &[0.0, 1.0]);
        let diag = line(&st, &[1.0, 1.0]);
        assert!(sum(&e1, &e2).unwrap().is_whole());
        assert!(sum(&e1, &diag).unwrap().is_whole());
        assert!(sum(&e1, &e1).unwrap().equals(&e1));
    }

    #[test]
    fn intersect_examples() {
        let st = SpStructure::ray(2).unwrap();
        let e1 = line(&st, &[1.0, 0.0]);
        let diag = line(&st, &[1.0, 1.0]);
        assert!(intersect(&e1, &ortho_complement(&e1)).unwrap().is_empty());
        assert!(intersect(&e1, &diag).unwrap().is_empty());

        let c = SpStructure::classical(4).unwrap();
        let a = Subspace::from_points(c.clone(), &[1, 2]).unwrap();
        let b = Subspace::from_points(c.clone(), &[2, 3]).unwrap();
        assert_eq!(intersect(&a, &b).unwrap().point_indices().unwrap(), vec![2]);
    }

    #[test]
    fn mixed_structures_are_rejected() {
        let a = SpStructure::ray(2).unwrap().whole_space();
        let b = SpStructure::ray(3).unwrap().whole_space();
        assert_eq!(sum(&a, &b).unwrap_err(), SpError::MixedStructures);
        assert_eq!(intersect(&a, &b).unwrap_err(), SpError::MixedStructures);
    }

    #[test]
    fn orthogonality_examples() {
        let st = SpStructure::ray(2).unwrap();
        let e1 = line(&st, &[1.0, 0.0]);
        assert!(is_orthogonal(&e1, &ortho_complement(&e1)));
        assert!(!is_orthogonal(&e1, &line(&st, &[1.0, 1.0])));
        let c = SpStructure::classical(4).unwrap();
        let a = Subspace::from_points(c.clone(), &[0, 1]).unwrap();
        let b = Subspace::from_points(c.clone(), &[2, 3]).unwrap();
        assert!(is_orthogonal(&a, &b));
        assert!(!is_orthogonal(
            &a,
            &Subspace::from_points(c, &[1, 2]).unwrap()
        ));
    }

    #[test]
    fn orthomodular_examples() {
        let st = SpStructure::ray(3).unwrap();
        let a = line(&st, &[1.0, 0.0, 0.0]);
        let c = st
            .subspace_from_vectors(&[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]])
            .unwrap();
        let meet = intersect(&ortho_complement(&a), &c).unwrap();
        assert!(meet.equals(&line(&st, &[0.0, 1.0, 0.0])));
        let chk = check_orthomodular(&a, &c).unwrap();
        assert!(chk.holds && !chk.vacuous);
        assert!(check_orthomodular(&c, &c).unwrap().holds);
        assert!(check_orthomodular(&c, &a).unwrap().vacuous);
    }

    #[test]
    fn de_morgan_on_whole_space() {
        let st = SpStructure::ray(3).unwrap();
        let w = st.whole_space();
        let chk = check_de_morgan(&w, &w).unwrap();
        assert!(chk.holds);
        assert!(ortho_complement(&intersect(&w, &w).unwrap()).is_empty());
    }

    #[test]
    fn explicit_sum_uses_catalog() {
        let m = vec![
            vec![1.0, 0.5, 0.0, 0.5],
            vec![0.5, 1.0, 0.5, 0.0],
            vec![0.0, 0.5, 1.0, 0.5],
            vec![0.5, 0.0, 0.5, 1.0],
        ];
        let st =
            SpStructure::explicit(vec!["h".into(), "d".into(), "v".into(), "a".into()], m).unwrap();
        let h = Subspace::from_points(st.clone(), &[0]).unwrap();
        let d = Subspace::from_points(st.clone(), &[1]).unwrap();
        assert!(sum(&h, &d).unwrap().is_whole());
        assert_eq!(ortho_complement(&h).point_indices().unwrap(), vec![2]);
        assert!(check_de_morgan(&h, &d).unwrap().holds);
    }

    #[test]
    fn three_lines_in_the_plane_do_not_distribute() {
        let st = SpStructure::ray(2).unwrap();
        let a = line(&st, &[1.0, 0.0]);
        let b = line(&st, &[0.5, 3f64.sqrt() / 2.0]);
        let c = line(&st, &[-0.5, 3f64.sqrt() / 2.0]);
        assert!(!distributes(&a, &b, &c).unwrap());
    }
}
