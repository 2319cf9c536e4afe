//! Fixed structures and measures shared by the suites and the command line.

use std::sync::Arc;

use crate::error::Result;
use crate::prob::ProbabilityMeasure;
use crate::sigma::{generate_sigma_star, SigmaStarField, DEFAULT_CAP};
use crate::structure::SpStructure;
use crate::subspace::Subspace;

/// Three points with off-diagonal similarity 1/2. Fails O-Projection.
pub fn half_matrix() -> SpStructure {
    SpStructure::explicit(
        vec!["a".into(), "b".into(), "c".into()],
        vec![
            vec![1.0, 0.5, 0.5],
            vec![0.5, 1.0, 0.5],
            vec![0.5, 0.5, 1.0],
        ],
    )
    .expect("valid matrix")
}

/// Four planar rays at 0°, 45°, 90° and 135°, as an explicit matrix.
pub fn planar_rays() -> SpStructure {
    SpStructure::explicit(
        vec!["h".into(), "d".into(), "v".into(), "a".into()],
        vec![
            vec![1.0, 0.5, 0.0, 0.5],
            vec![0.5, 1.0, 0.5, 0.0],
            vec![0.0, 0.5, 1.0, 0.5],
            vec![0.5, 0.0, 0.5, 1.0],
        ],
    )
    .expect("valid matrix")
}

/// Line through the origin of the plane at `deg` degrees.
pub(crate) fn line(st: &SpStructure, deg: f64) -> Subspace {
    let r = deg.to_radians();
    st.subspace_from_vectors(&[vec![r.cos(), r.sin()]])
        .expect("nonzero vector")
}

/// The six-event field of the plane generated by the lines at 0° and 45°,
/// with the table measure 1, 0, 3/4, 1/4 on the lines at 0°, 90°, 45°, 135°.
///
/// The table satisfies every measure axiom, yet no mixture of two rays
/// reproduces it: a mixed state needs `(p(45°) - 1/2)^2 <= p(0°) (1 - p(0°))`.
pub fn square_field_table() -> Result<(Arc<SigmaStarField>, ProbabilityMeasure)> {
    square_table([1.0, 0.0, 0.75, 0.25])
}

/// A table on the six-event field with the given values on the lines at 0°, 90°, 45°, 135°.
pub(crate) fn square_table(values: [f64; 4]) -> Result<(Arc<SigmaStarField>, ProbabilityMeasure)> {
    let st = SpStructure::ray(2)?;
    let f = Arc::new(generate_sigma_star(
        &st,
        &[line(&st, 0.0), line(&st, 45.0)],
        DEFAULT_CAP,
    )?);
    let degs = [0.0, 90.0, 45.0, 135.0];
    let table = f
        .events()
        .iter()
        .map(|e| {
            if e.is_empty() {
                0.0
            } else if e.is_whole() {
                1.0
            } else {
                let k = degs
                    .iter()
                    .position(|deg| line(&st, *deg).equals(e))
                    .expect("the field holds only these lines");
                values[k]
            }
        })
        .collect();
    let p = ProbabilityMeasure::table(f.clone(), table)?;
    Ok((f, p))
}
