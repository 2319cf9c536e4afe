//! Validation of the defining properties of a similarity-projection structure.
//!
//! Finite models within [`EXHAUSTIVE_LIMIT`] points are checked over every
//! ortho-set and every candidate witness; larger explicit models and the ray
//! model are checked on seeded samples, and their verdicts say so.

use serde::Serialize;

use crate::error::{Result, SpError};
use crate::linalg::{TOL_EQ, TOL_UNIT};
use crate::sample::{random_orthonormal, random_point, stream_rng, unit_vector};
use crate::structure::{Point, SpStructure, StructureKind, EXHAUSTIVE_LIMIT, MATRIX_TOL};

/// Ray points with `s(x, A)` above this are not given an O-Projection witness.
const OPROJ_MARGIN: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axiom {
    Symmetry,
    NonNegativity,
    Boundedness,
    OProjection,
    Factorization,
    Standardness,
}

impl Axiom {
    pub const ALL: [Axiom; 6] = [
        Axiom::Symmetry,
        Axiom::NonNegativity,
        Axiom::Boundedness,
        Axiom::OProjection,
        Axiom::Factorization,
        Axiom::Standardness,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::Symmetry => "symmetry",
            Axiom::NonNegativity => "non-negativity",
            Axiom::Boundedness => "boundedness",
            Axiom::OProjection => "o-projection",
            Axiom::Factorization => "factorization",
            Axiom::Standardness => "standardness",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    SampledPass,
    Fail,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Analytic,
    Exhaustive,
    Sampled,
}

/// A concrete counterexample: the points and ortho-set involved and the failing residual.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub x: Option<Point>,
    pub y: Option<Point>,
    pub z: Option<Point>,
    pub ortho_set: Vec<Point>,
    pub residual: f64,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomResult {
    pub axiom: Axiom,
    pub verdict: Verdict,
    pub checks: u64,
    pub max_residual: f64,
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub kind: StructureKind,
    pub mode: Mode,
    pub results: Vec<AxiomResult>,
    /// Number of individual axiom evaluations performed.
    pub budget_used: u64,
}

impl ValidationReport {
    pub fn overall(&self) -> Verdict {
        if self.results.iter().any(|r| r.verdict == Verdict::Fail) {
            Verdict::Fail
        } else if self
            .results
            .iter()
            .any(|r| r.verdict == Verdict::SampledPass)
        {
            Verdict::SampledPass
        } else {
            Verdict::Pass
        }
    }

    pub fn result(&self, axiom: Axiom) -> &AxiomResult {
        self.results
            .iter()
            .find(|r| r.axiom == axiom)
            .expect("every axiom is reported")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValidationBudget {
    /// Sampled trials for the ray model and for explicit models above the exhaustive limit.
    pub samples: usize,
    pub seed: u64,
}

impl Default for ValidationBudget {
    fn default() -> Self {
        ValidationBudget {
            samples: 10_000,
            seed: 0,
        }
    }
}

struct Tally {
    axiom: Axiom,
    sampled: bool,
    checks: u64,
    max_residual: f64,
    witness: Option<Witness>,
}

impl Tally {
    fn new(axiom: Axiom, sampled: bool) -> Self {
        Tally {
            axiom,
            sampled,
            checks: 0,
            max_residual: 0.0,
            witness: None,
        }
    }

    /// Records a residual; values above `TOL_EQ` fail and keep the first witness.
    fn record(&mut self, residual: f64, witness: impl FnOnce() -> Witness) {
        self.record_with(residual, residual > TOL_EQ, witness)
    }

    fn record_with(&mut self, residual: f64, failed: bool, witness: impl FnOnce() -> Witness) {
        self.checks += 1;
        if residual > self.max_residual {
            self.max_residual = residual;
        }
        if failed && self.witness.is_none() {
            let mut w = witness();
            w.residual = residual;
            self.witness = Some(w);
        }
    }

    fn finish(self) -> AxiomResult {
        let verdict = match (&self.witness, self.sampled) {
            (Some(_), _) => Verdict::Fail,
            (None, true) => Verdict::SampledPass,
            (None, false) => Verdict::Pass,
        };
        AxiomResult {
            axiom: self.axiom,
            verdict,
            checks: self.checks,
            max_residual: self.max_residual,
            witness: self.witness,
        }
    }
}

fn witness(
    x: Option<usize>,
    y: Option<usize>,
    z: Option<usize>,
    set: &[usize],
    note: &str,
) -> Witness {
    Witness {
        x: x.map(Point::index),
        y: y.map(Point::index),
        z: z.map(Point::index),
        ortho_set: set.iter().copied().map(Point::index).collect(),
        residual: 0.0,
        note: note.to_string(),
    }
}

/// Checks every defining property of `st`.
pub fn validate_sp_axioms(st: &SpStructure, budget: ValidationBudget) -> Result<ValidationReport> {
    match st.kind() {
        StructureKind::Ray => Ok(validate_ray(st, budget)),
        StructureKind::Classical | StructureKind::Explicit => {
            let n = st.dimension();
            if n <= EXHAUSTIVE_LIMIT {
                Ok(validate_exhaustive(st))
            } else if st.kind() == StructureKind::Classical {
                Ok(analytic_classical())
            } else if budget.samples == 0 {
                Err(SpError::BudgetRequired {
                    points: n,
                    limit: EXHAUSTIVE_LIMIT,
                })
            } else {
                Ok(validate_explicit_sampled(st, budget))
            }
        }
    }
}

fn analytic_classical() -> ValidationReport {
    ValidationReport {
        kind: StructureKind::Classical,
        mode: Mode::Analytic,
        results: Axiom::ALL
            .iter()
            .map(|&axiom| AxiomResult {
                axiom,
                verdict: Verdict::Pass,
                checks: 0,
                max_residual: 0.0,
                witness: None,
            })
            .collect(),
        budget_used: 0,
    }
}

/// Matrix-level checks shared by the exhaustive and sampled finite validators.
fn matrix_checks(st: &SpStructure, tallies: &mut [Tally]) {
    let n = st.dimension();
    for i in 0..n {
        for j in 0..n {
            let a = st.raw(i, j);
            let asym = (a - st.raw(j, i)).abs();
            tallies[0].record_with(asym, asym > MATRIX_TOL, || {
                witness(Some(i), Some(j), None, &[], "s(x,y) != s(y,x)")
            });
            tallies[1].record_with((-a).max(0.0), a < 0.0, || {
                witness(Some(i), Some(j), None, &[], "negative similarity")
            });
        }
    }
    for i in 0..n {
        for j in 0..i {
            let diff = (0..n)
                .map(|z| (st.raw(i, z) - st.raw(j, z)).abs())
                .fold(0.0, f64::max);
            tallies[5].record_with(0.0, diff <= MATRIX_TOL, || {
                witness(
                    Some(j),
                    Some(i),
                    None,
                    &[],
                    "distinct points with identical similarity rows",
                )
            });
        }
    }
}

fn clamp01(v: f64) -> f64 {
    v.clamp(0.0, 1.0)
}

fn validate_exhaustive(st: &SpStructure) -> ValidationReport {
    let n = st.dimension();
    let mut t: Vec<Tally> = Axiom::ALL.iter().map(|&a| Tally::new(a, false)).collect();
    matrix_checks(st, &mut t);

    let s = |a: usize, b: usize| st.raw(a, b);
    let orth = |a: usize, b: usize| a != b && clamp01(s(a, b)) <= TOL_EQ;
    let mut orth_mask = vec![0u32; n];
    for (i, m) in orth_mask.iter_mut().enumerate() {
        for j in 0..n {
            if orth(i, j) {
                *m |= 1 << j;
            }
        }
    }
    let members = |mask: u32| (0..n).filter(move |i| mask & (1 << i) != 0);

    for mask in 0u32..(1u32 << n) {
        if !members(mask).all(|i| (mask & !(1 << i)) & !orth_mask[i] == 0) {
            continue;
        }
        let set: Vec<usize> = members(mask).collect();
        let sum_to = |x: usize| set.iter().map(|&a| s(x, a)).sum::<f64>();
        let closure: Vec<usize> = (0..n).filter(|&x| sum_to(x) >= 1.0 - TOL_EQ).collect();
        for x in 0..n {
            let sxa = sum_to(x);
            t[2].record((sxa - 1.0).max(0.0), || {
                witness(Some(x), None, None, &set, "s(x, A) > 1")
            });

            if sxa < 1.0 - TOL_EQ {
                let mut best = f64::INFINITY;
                for y in 0..n {
                    let perp = set.iter().map(|&a| clamp01(s(y, a))).sum::<f64>() <= TOL_EQ
                        && !set.contains(&y);
                    if perp {
                        best = best.min((sxa + s(x, y) - 1.0).abs());
                    }
                }
                t[3].record(best, || {
                    witness(
                        Some(x),
                        None,
                        None,
                        &set,
                        "no y orthogonal to A with s(x,A) + s(x,y) = 1",
                    )
                });
            }

            for &y in &closure {
                if (s(x, y) - sxa).abs() > TOL_EQ {
                    continue;
                }
                for &z in &closure {
                    let r = (s(x, z) - s(x, y) * s(y, z)).abs();
                    t[4].record(r, || {
                        witness(Some(x), Some(y), Some(z), &set, "s(x,z) != s(x,y) s(y,z)")
                    });
                }
            }
        }
    }

    let budget_used = t.iter().map(|x| x.checks).sum();
    ValidationReport {
        kind: st.kind(),
        mode: Mode::Exhaustive,
        results: t.into_iter().map(Tally::finish).collect(),
        budget_used,
    }
}

fn validate_explicit_sampled(st: &SpStructure, budget: ValidationBudget) -> ValidationReport {
    use rand::seq::SliceRandom;
    use rand::Rng;

    let n = st.dimension();
    let mut t: Vec<Tally> = Axiom::ALL
        .iter()
        .map(|&a| {
            Tally::new(
                a,
                !matches!(
                    a,
                    Axiom::Symmetry | Axiom::NonNegativity | Axiom::Standardness
                ),
            )
        })
        .collect();
    matrix_checks(st, &mut t);
    let s = |a: usize, b: usize| st.raw(a, b);
    let orth = |a: usize, b: usize| a != b && clamp01(s(a, b)) <= TOL_EQ;
    let mut rng = stream_rng(budget.seed, 0);
    let mut order: Vec<usize> = (0..n).collect();

    for _ in 0..budget.samples {
        order.shuffle(&mut rng);
        let limit = rng.random_range(0..=n);
        let mut set: Vec<usize> = Vec::new();
        for &c in order.iter().take(limit) {
            if set.iter().all(|&a| orth(a, c)) {
                set.push(c);
            }
        }
        let x = rng.random_range(0..n);
        let sum_to = |p: usize| set.iter().map(|&a| s(p, a)).sum::<f64>();
        let sxa = sum_to(x);
        t[2].record((sxa - 1.0).max(0.0), || {
            witness(Some(x), None, None, &set, "s(x, A) > 1")
        });
        if sxa < 1.0 - TOL_EQ {
            let best = (0..n)
                .filter(|&y| {
                    !set.contains(&y)
                        && set.iter().map(|&a| clamp01(s(y, a))).sum::<f64>() <= TOL_EQ
                })
                .map(|y| (sxa + s(x, y) - 1.0).abs())
                .fold(f64::INFINITY, f64::min);
            t[3].record(best, || {
                witness(
                    Some(x),
                    None,
                    None,
                    &set,
                    "no y orthogonal to A with s(x,A) + s(x,y) = 1",
                )
            });
        }
        let closure: Vec<usize> = (0..n).filter(|&p| sum_to(p) >= 1.0 - TOL_EQ).collect();
        if let Some(&y) = closure.iter().find(|&&y| (s(x, y) - sxa).abs() <= TOL_EQ) {
            for &z in &closure {
                let r = (s(x, z) - s(x, y) * s(y, z)).abs();
                t[4].record(r, || {
                    witness(Some(x), Some(y), Some(z), &set, "s(x,z) != s(x,y) s(y,z)")
                });
            }
        }
    }

    let budget_used = t.iter().map(|x| x.checks).sum();
    ValidationReport {
        kind: st.kind(),
        mode: Mode::Sampled,
        results: t.into_iter().map(Tally::finish).collect(),
        budget_used,
    }
}

fn validate_ray(st: &SpStructure, budget: ValidationBudget) -> ValidationReport {
    use rand::Rng;

    let d = st.dimension();
    let mut t: Vec<Tally> = Axiom::ALL.iter().map(|&a| Tally::new(a, true)).collect();
    let mut rng = stream_rng(budget.seed, 0);

    for _ in 0..budget.samples {
        let x = random_point(st, &mut rng);
        let y = random_point(st, &mut rng);
        let k = rng.random_range(0..=d);
        let frame = random_orthonormal(&mut rng, d, k);
        let set: Vec<Point> = frame
            .iter()
            .map(|v| Point::from_vector(v.clone()).expect("unit vector"))
            .collect();
        let ray_witness = |note: &str, y: Option<&Point>, z: Option<&Point>| Witness {
            x: Some(x.clone()),
            y: y.cloned(),
            z: z.cloned(),
            ortho_set: set.clone(),
            residual: 0.0,
            note: note.to_string(),
        };

        let sxy = st.sim(&x, &y);
        t[0].record((sxy - st.sim(&y, &x)).abs(), || {
            ray_witness("s(x,y) != s(y,x)", Some(&y), None)
        });
        let raw_dot = x.vec().dot(y.vec());
        t[1].record((-(raw_dot * raw_dot)).max(0.0), || {
            ray_witness("negative similarity", Some(&y), None)
        });

        let sxa = st.sum_to_ortho_set(&x, &set);
        t[2].record((sxa - 1.0).max(0.0), || {
            ray_witness("s(x, A) > 1", None, None)
        });

        if sxa < 1.0 - OPROJ_MARGIN {
            // Gram-Schmidt step: remove the components of x along A.
            let mut r = x.vec().clone();
            for a in &frame {
                let c = a.dot(&r);
                r.axpy(-c, a, 1.0);
            }
            let w = Point::from_vector(r).expect("residual is non-zero when s(x, A) < 1");
            let perp = st.sum_to_ortho_set(&w, &set);
            let balance = (sxa + st.sim(&x, &w) - 1.0).abs();
            t[3].record(perp.max(balance), || {
                ray_witness("projection witness failed", Some(&w), None)
            });
        }

        if k > 0 && sxa > TOL_EQ {
            let span = crate::sample::span_vectors(st, &frame);
            let proj = st.project(&x, &span).expect("x is not orthogonal to A");
            let coeffs = unit_vector(&mut rng, k);
            let mut zv = nalgebra::DVector::zeros(d);
            for (c, a) in coeffs.iter().zip(&frame) {
                zv.axpy(*c, a, 1.0);
            }
            let zin = Point::from_vector(zv).expect("unit combination of orthonormal vectors");
            let attained = (st.sim(&x, &proj) - sxa).abs();
            let factor = (st.sim(&x, &zin) - st.sim(&x, &proj) * st.sim(&proj, &zin)).abs();
            t[4].record(attained.max(factor), || {
                ray_witness("s(x,z) != s(x,t) s(t,z)", Some(&proj), Some(&zin))
            });
        }

        // distinct rays are told apart by x itself: s(x,x) = 1 > s(y,x)
        let distinct = !st.same_point(&x, &y);
        let indistinct = distinct && st.sim(&y, &x) >= 1.0 - TOL_UNIT;
        t[5].record_with(0.0, indistinct, || {
            ray_witness("indistinguishable distinct rays", Some(&y), None)
        });
    }

    let budget_used = t.iter().map(|x| x.checks).sum();
    ValidationReport {
        kind: StructureKind::Ray,
        mode: Mode::Sampled,
        results: t.into_iter().map(Tally::finish).collect(),
        budget_used,
    }
}
