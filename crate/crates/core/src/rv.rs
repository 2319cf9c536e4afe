//! Real random variables as partial functions.
//!
//! A variable is given by its outcomes: distinct values paired with pairwise
//! orthogonal events summing to Ω. It has a value only at points lying in
//! one of those events.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SpError};
use crate::lattice::{intersect, is_orthogonal, ortho_complement, sum, sum_all};
use crate::prob::{pure_state, ProbabilityMeasure};
use crate::structure::{Point, SpStructure, StructureKind};
use crate::subspace::Subspace;

/// Angle of the Givens rotations used to pick the domain basis of a ray event.
const BASIS_TURN: f64 = 1.0;

#[derive(Debug, Clone)]
pub struct RealRandomVariable {
    structure: SpStructure,
    outcomes: Vec<(f64, Subspace)>,
    /// Domain basis: (outcome index, point).
    basis: Vec<(usize, Point)>,
}

/// Builds a variable from `(value, event)` pairs.
pub fn make_rv(st: &SpStructure, pairs: Vec<(f64, Subspace)>) -> Result<RealRandomVariable> {
    for (i, (r, e)) in pairs.iter().enumerate() {
        st.same_structure(e.structure())?;
        if !r.is_finite() {
            return Err(SpError::NonFiniteValue(*r));
        }
        if pairs[..i].iter().any(|(q, _)| q == r) {
            return Err(SpError::DuplicateValue(*r));
        }
    }
    for i in 0..pairs.len() {
        for j in i + 1..pairs.len() {
            if !is_orthogonal(&pairs[i].1, &pairs[j].1) {
                return Err(SpError::EventsNotOrthogonal(i, j));
            }
        }
    }
    let events: Vec<Subspace> = pairs.iter().map(|(_, e)| e.clone()).collect();
    if !sum_all(st, &events)?.is_whole() {
        return Err(SpError::DomainNotTotalOnBasis);
    }
    let basis = pairs
        .iter()
        .enumerate()
        .flat_map(|(i, (_, e))| domain_basis(e).into_iter().map(move |p| (i, p)))
        .collect();
    Ok(RealRandomVariable {
        structure: st.clone(),
        outcomes: pairs,
        basis,
    })
}

/// A basis for `e`. For rays this is the stored frame turned by fixed plane
/// rotations, so it differs from the basis used to evaluate `s(x, e)`.
fn domain_basis(e: &Subspace) -> Vec<Point> {
    match e.frame() {
        Some(frame) => {
            let mut f = frame.clone();
            let (s, c) = BASIS_TURN.sin_cos();
            for k in 1..f.ncols() {
                let a = f.column(k - 1).into_owned();
                let b = f.column(k).into_owned();
                f.set_column(k - 1, &(&a * c - &b * s));
                f.set_column(k, &(&a * s + &b * c));
            }
            f.column_iter()
                .map(|col| {
                    Point::from_vector(col.into_owned())
                        .expect("rotated frame columns are unit vectors")
                })
                .collect()
        }
        None => e.basis().points().to_vec(),
    }
}

impl RealRandomVariable {
    pub fn structure(&self) -> &SpStructure {
        &self.structure
    }

    pub fn outcomes(&self) -> &[(f64, Subspace)] {
        &self.outcomes
    }

    /// Domain basis points with their values.
    pub fn domain_basis(&self) -> Vec<(f64, Point)> {
        self.basis
            .iter()
            .map(|(i, p)| (self.outcomes[*i].0, p.clone()))
            .collect()
    }

    /// Whether the variable has a value at every point (as in the classical model).
    pub fn is_total(&self) -> bool {
        match self.structure.points() {
            Some(points) => points.iter().all(|x| self.eval_at_point(x).is_ok()),
            None => self.outcomes.iter().filter(|(_, e)| !e.is_empty()).count() <= 1,
        }
    }

    /// `X(x)`: the value of the event containing `x`, if any.
    pub fn eval_at_point(&self, x: &Point) -> Result<f64> {
        self.structure.check_point(x)?;
        self.outcomes
            .iter()
            .find(|(_, e)| e.contains(x))
            .map(|(r, _)| *r)
            .ok_or(SpError::ValueUndefinedAtPoint)
    }

    /// Indicator of `a`: 1 on `a`, 0 on `a^⊥`.
    pub fn indicator(a: &Subspace) -> Result<Self> {
        let st = a.structure().clone();
        make_rv(&st, vec![(1.0, a.clone()), (0.0, ortho_complement(a))])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    #[serde(default = "yes")]
    pub lo_closed: bool,
    #[serde(default = "yes")]
    pub hi_closed: bool,
}

fn yes() -> bool {
    true
}

impl Interval {
    pub fn contains(&self, r: f64) -> bool {
        let above = if self.lo_closed {
            r >= self.lo
        } else {
            r > self.lo
        };
        let below = if self.hi_closed {
            r <= self.hi
        } else {
            r < self.hi
        };
        above && below
    }
}

/// A finite union of points and intervals of the real line.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ValueSet {
    #[serde(default)]
    pub points: Vec<f64>,
    #[serde(default)]
    pub intervals: Vec<Interval>,
}

impl ValueSet {
    pub fn all() -> Self {
        ValueSet {
            points: Vec::new(),
            intervals: vec![Interval {
                lo: f64::NEG_INFINITY,
                hi: f64::INFINITY,
                lo_closed: true,
                hi_closed: true,
            }],
        }
    }

    pub fn of(points: &[f64]) -> Self {
        ValueSet {
            points: points.to_vec(),
            intervals: Vec::new(),
        }
    }

    pub fn contains(&self, r: f64) -> bool {
        self.points.contains(&r) || self.intervals.iter().any(|i| i.contains(r))
    }
}

/// `X^{-1}(S)`: the sum of the events whose value lies in `S`.
pub fn preimage(x: &RealRandomVariable, s: &ValueSet) -> Result<Subspace> {
    let parts: Vec<Subspace> = x
        .outcomes
        .iter()
        .filter(|(r, _)| s.contains(*r))
        .map(|(_, e)| e.clone())
        .collect();
    sum_all(&x.structure, &parts)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Expectation {
    pub value: f64,
    /// `r_i p(E_i)` per outcome, in outcome order.
    pub contributions: Vec<f64>,
}

/// `Σ r_i p(E_i)`.
pub fn expectation(x: &RealRandomVariable, p: &ProbabilityMeasure) -> Result<Expectation> {
    x.structure.same_structure(p.structure())?;
    let contributions: Vec<f64> = x
        .outcomes
        .iter()
        .map(|(r, e)| Ok(r * p.evaluate(e)?))
        .collect::<Result<_>>()?;
    let value = contributions.iter().fold(0.0, |acc, c| acc + c);
    Ok(Expectation {
        value,
        contributions,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpectResidual {
    /// Expectation under the pure state at `x`.
    pub by_events: f64,
    /// `Σ X(b) s(x, b)` over the domain basis.
    pub by_basis: f64,
    pub residual: f64,
}

/// Compares the pure-state expectation at `x` with the domain-basis sum.
pub fn check_expect_theorem(x: &RealRandomVariable, at: &Point) -> Result<ExpectResidual> {
    let by_events = expectation(x, &pure_state(&x.structure, at)?)?.value;
    let by_basis = x
        .basis
        .iter()
        .map(|(i, b)| x.outcomes[*i].0 * x.structure.sim(at, b))
        .fold(0.0, |acc, c| acc + c);
    Ok(ExpectResidual {
        by_events,
        by_basis,
        residual: by_events - by_basis,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompatibilityCheck {
    pub compatible: bool,
    /// Outcome indices `(i, j)` with `E_i != (E_i ∩ F_j) ⊕ (E_i ∩ F_j^⊥)`.
    pub witness: Option<(usize, usize)>,
}

/// Whether every event of `x` commutes with every event of `y`.
pub fn compatible(x: &RealRandomVariable, y: &RealRandomVariable) -> Result<CompatibilityCheck> {
    x.structure.same_structure(&y.structure)?;
    if x.structure.kind() == StructureKind::Classical {
        return Ok(CompatibilityCheck {
            compatible: true,
            witness: None,
        });
    }
    for (i, (_, e)) in x.outcomes.iter().enumerate() {
        for (j, (_, f)) in y.outcomes.iter().enumerate() {
            let split = sum(&intersect(e, f)?, &intersect(e, &ortho_complement(f))?)?;
            if !split.equals(e) {
                return Ok(CompatibilityCheck {
                    compatible: false,
                    witness: Some((i, j)),
                });
            }
        }
    }
    Ok(CompatibilityCheck {
        compatible: true,
        witness: None,
    })
}
