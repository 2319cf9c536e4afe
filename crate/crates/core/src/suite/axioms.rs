use super::fixtures::{half_matrix, planar_rays};
use super::{run_trials, CheckRecord, SuiteConfig, Trial};
use crate::axioms::{validate_sp_axioms, Axiom, ValidationBudget, ValidationReport, Verdict};
use crate::linalg::TOL_EQ;
use crate::structure::SpStructure;

const CLASSICAL_MAX: usize = 12;
const CLASSICAL_ANALYTIC: usize = 40;
const RAY_DIMS: [usize; 3] = [2, 3, 4];
const RAY_SAMPLES: usize = 10_000;

fn failures(r: &ValidationReport) -> String {
    r.results
        .iter()
        .filter(|a| a.verdict == Verdict::Fail)
        .map(|a| format!("{} ({})", a.axiom.name(), a.max_residual))
        .collect::<Vec<_>>()
        .join(", ")
}

pub(super) fn run(cfg: &SuiteConfig) -> Vec<CheckRecord> {
    let seed = cfg.seed;
    let samples = cfg.scale.map_or(RAY_SAMPLES, |s| s * 20);
    let budget = ValidationBudget { samples: 0, seed };
    vec![
        run_trials(
            "classical.axioms",
            "classical delta structures satisfy every axiom",
            CLASSICAL_MAX + 1,
            |i| {
                let n = if i < CLASSICAL_MAX {
                    i + 1
                } else {
                    CLASSICAL_ANALYTIC
                };
                let r = validate_sp_axioms(&SpStructure::classical(n)?, budget)?;
                Ok(Trial::holds(r.overall() == Verdict::Pass, || {
                    format!("n = {n}: {}", failures(&r))
                }))
            },
        ),
        run_trials(
            "axioms.planar-rays",
            "four planar rays at 45° steps satisfy every axiom",
            1,
            |_| {
                let r = validate_sp_axioms(&planar_rays(), budget)?;
                Ok(Trial::holds(r.overall() == Verdict::Pass, || failures(&r)))
            },
        ),
        run_trials(
            "axioms.half-matrix",
            "three points at similarity ½ fail O-Projection with a re-checked witness",
            1,
            |_| {
                let st = half_matrix();
                let r = validate_sp_axioms(&st, budget)?;
                let op = r.result(Axiom::OProjection);
                let Some(w) = op.witness.as_ref() else {
                    return Ok(Trial::fail(1.0, "no witness".into()));
                };
                let x = w.x.clone().expect("witness point");
                let a = st.ortho_set(w.ortho_set.clone())?;
                let sxa = st.similarity_to_ortho_set(&x, &a)?;
                // No point orthogonal to A may complete s(x, A) to 1.
                let mut completes = false;
                for y in st.points().expect("finite") {
                    let perp = a
                        .points()
                        .iter()
                        .all(|p| st.similarity(&y, p).is_ok_and(|v| v <= TOL_EQ));
                    completes |= perp && (sxa + st.similarity(&x, &y)? - 1.0).abs() <= TOL_EQ;
                }
                let ok = op.verdict == Verdict::Fail && sxa < 1.0 - TOL_EQ && !completes;
                Ok(Trial::holds(ok, || {
                    format!("witness at {} not confirmed", st.label_of(&x))
                }))
            },
        ),
        run_trials(
            "axioms.ray-sampled",
            "seeded spot-checks of the ray model pass with residuals within 1e-9",
            RAY_DIMS.len(),
            |i| {
                let d = RAY_DIMS[i];
                let r = validate_sp_axioms(
                    &SpStructure::ray(d)?,
                    ValidationBudget {
                        samples,
                        seed: seed.wrapping_add(i as u64),
                    },
                )?;
                let worst = r.results.iter().map(|a| a.max_residual).fold(0.0, f64::max);
                let ok = r.overall() == Verdict::SampledPass && worst <= TOL_EQ;
                Ok(if ok {
                    Trial::pass(worst)
                } else {
                    Trial::fail(worst, format!("d = {d}: {}", failures(&r)))
                })
            },
        ),
    ]
}
