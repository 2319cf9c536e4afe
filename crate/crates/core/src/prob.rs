//! *-probabilities: measures on σ*-fields with an additional continuity axiom.
//!
//! A measure is a table over the events of a field, a pure state `B ↦ s(x, B)`,
//! or a convex mixture of measures. Pure states and mixtures of them are
//! functional: they evaluate any subspace unless restricted to a field.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Result, SpError};
use crate::lattice::{is_orthogonal, sum_all};
use crate::linalg::TOL_EQ;
use crate::sample::{random_orthonormal, random_subspace, span_vectors, stream_rng};
use crate::sigma::SigmaStarField;
use crate::similarity::{
    continuity_slack, subspace_similarity, Bounds, SamplerConfig, TheoremVerdict,
};
use crate::structure::{Point, SpStructure, StructureKind};
use crate::subspace::Subspace;

/// Tolerance on mixture weights and on measure equality.
pub const TOL_WEIGHT: f64 = 1e-12;

#[derive(Debug, Clone)]
pub enum Backing {
    /// Values indexed like the events of the measure's field.
    Table(Vec<f64>),
    Pure(Point),
    Mixed(Vec<(f64, ProbabilityMeasure)>),
}

#[derive(Debug, Clone)]
pub struct ProbabilityMeasure {
    structure: SpStructure,
    /// `None` means every subspace is in the domain.
    field: Option<Arc<SigmaStarField>>,
    backing: Backing,
}

impl ProbabilityMeasure {
    /// A table over the events of `field`, with `p(∅) = 0`, `p(Ω) = 1` and values in `[0, 1]`.
    pub fn table(field: Arc<SigmaStarField>, values: Vec<f64>) -> Result<Self> {
        if values.len() != field.len() {
            return Err(SpError::InvalidMeasure(format!(
                "{} values for a field of {} events",
                values.len(),
                field.len()
            )));
        }
        if let Some((i, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_finite() || **v < -TOL_EQ || **v > 1.0 + TOL_EQ)
        {
            return Err(SpError::InvalidMeasure(format!(
                "value {v} of event {i} is outside [0, 1]"
            )));
        }
        let st = field.structure().clone();
        let m = ProbabilityMeasure {
            structure: st.clone(),
            field: Some(field),
            backing: Backing::Table(values),
        };
        let empty = m
            .evaluate(&st.empty_subspace())
            .map_err(|_| SpError::InvalidMeasure("field lacks ∅".into()))?;
        let whole = m
            .evaluate(&st.whole_space())
            .map_err(|_| SpError::InvalidMeasure("field lacks Ω".into()))?;
        if empty.abs() > TOL_EQ || (whole - 1.0).abs() > TOL_EQ {
            return Err(SpError::InvalidMeasure(format!(
                "p(∅) = {empty}, p(Ω) = {whole}"
            )));
        }
        Ok(m)
    }

    pub fn structure(&self) -> &SpStructure {
        &self.structure
    }

    pub fn field(&self) -> Option<&Arc<SigmaStarField>> {
        self.field.as_ref()
    }

    pub fn backing(&self) -> &Backing {
        &self.backing
    }

    /// The same measure with its domain limited to `field`.
    pub fn restricted_to(&self, field: Arc<SigmaStarField>) -> Result<Self> {
        self.structure.same_structure(field.structure())?;
        if let Some(own) = &self.field {
            if !same_field(own, &field) {
                return Err(SpError::EventNotInField);
            }
        }
        Ok(ProbabilityMeasure {
            structure: self.structure.clone(),
            field: Some(field),
            backing: self.backing.clone(),
        })
    }

    /// Whether this is a pure state or a convex combination of pure states.
    pub fn is_mixed_state(&self) -> bool {
        match &self.backing {
            Backing::Table(_) => false,
            Backing::Pure(_) => true,
            Backing::Mixed(c) => c.iter().all(|(_, m)| m.is_mixed_state()),
        }
    }

    /// `p(A)`.
    pub fn evaluate(&self, a: &Subspace) -> Result<f64> {
        self.structure.same_structure(a.structure())?;
        let idx = match &self.field {
            Some(f) => Some(f.index_of(a).ok_or(SpError::EventNotInField)?),
            None => None,
        };
        self.eval_inner(a, idx)
    }

    fn eval_inner(&self, a: &Subspace, idx: Option<usize>) -> Result<f64> {
        match &self.backing {
            Backing::Table(v) => Ok(v[idx.expect("tables always have a field")]),
            Backing::Pure(x) => Ok(if a.is_empty() {
                0.0
            } else {
                a.similarity_from(x)
            }),
            Backing::Mixed(parts) => {
                let mut total = 0.0;
                for (w, m) in parts {
                    total += w * m.eval_inner(a, idx)?;
                }
                Ok(total)
            }
        }
    }
}

fn same_field(a: &Arc<SigmaStarField>, b: &Arc<SigmaStarField>) -> bool {
    Arc::ptr_eq(a, b)
        || (a.len() == b.len() && a.events().iter().zip(b.events()).all(|(x, y)| x.equals(y)))
}

/// The pure state `p_x(B) = s(x, B)`.
pub fn pure_state(st: &SpStructure, x: &Point) -> Result<ProbabilityMeasure> {
    st.check_point(x)?;
    Ok(ProbabilityMeasure {
        structure: st.clone(),
        field: None,
        backing: Backing::Pure(x.clone()),
    })
}

/// The convex combination `Σ w_i p_i`, evaluated in component order.
pub fn mix(components: Vec<(f64, ProbabilityMeasure)>) -> Result<ProbabilityMeasure> {
    let first = components
        .first()
        .ok_or_else(|| SpError::WeightsNotConvex("no components".into()))?;
    let st = first.1.structure.clone();
    let mut total = 0.0;
    let mut field: Option<Arc<SigmaStarField>> = None;
    for (w, m) in &components {
        if !w.is_finite() || *w < 0.0 {
            return Err(SpError::WeightsNotConvex(format!(
                "weight {w} is negative or not finite"
            )));
        }
        st.same_structure(&m.structure)?;
        total += w;
        if let Some(f) = &m.field {
            match &field {
                Some(g) if !same_field(f, g) => return Err(SpError::EventNotInField),
                _ => field = Some(f.clone()),
            }
        }
    }
    if (total - 1.0).abs() > TOL_WEIGHT {
        return Err(SpError::WeightsNotConvex(format!("weights sum to {total}")));
    }
    if components.len() == 1 {
        return Ok(components.into_iter().next().unwrap().1);
    }
    Ok(ProbabilityMeasure {
        structure: st,
        field,
        backing: Backing::Mixed(components),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ItemCheck {
    pub item: &'static str,
    pub verdict: TheoremVerdict,
    pub checked: usize,
    pub failures: usize,
    pub inconclusive: usize,
    pub max_violation: f64,
    pub witness: Option<String>,
}

impl ItemCheck {
    fn new(item: &'static str) -> Self {
        ItemCheck {
            item,
            verdict: TheoremVerdict::Vacuous,
            checked: 0,
            failures: 0,
            inconclusive: 0,
            max_violation: 0.0,
            witness: None,
        }
    }

    fn record(
        &mut self,
        verdict: TheoremVerdict,
        violation: f64,
        witness: impl FnOnce() -> String,
    ) {
        self.checked += 1;
        self.max_violation = self.max_violation.max(violation);
        match verdict {
            TheoremVerdict::FailCertified => {
                self.failures += 1;
                if self.witness.is_none() {
                    self.witness = Some(witness());
                }
            }
            TheoremVerdict::Inconclusive => self.inconclusive += 1,
            _ => {}
        }
    }

    fn finish(mut self) -> Self {
        self.verdict = if self.failures > 0 {
            TheoremVerdict::FailCertified
        } else if self.inconclusive > 0 {
            TheoremVerdict::Inconclusive
        } else if self.checked > 0 {
            TheoremVerdict::Pass
        } else {
            TheoremVerdict::Vacuous
        };
        self
    }
}

fn exact(ok: bool) -> TheoremVerdict {
    if ok {
        TheoremVerdict::Pass
    } else {
        TheoremVerdict::FailCertified
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureReport {
    /// Events scanned (field members or sampled subspaces).
    pub events: usize,
    pub sampled_domain: bool,
    pub items: Vec<ItemCheck>,
}

impl MeasureReport {
    pub fn verdict(&self) -> TheoremVerdict {
        let v: Vec<TheoremVerdict> = self.items.iter().map(|i| i.verdict).collect();
        if v.contains(&TheoremVerdict::FailCertified) {
            TheoremVerdict::FailCertified
        } else if v.contains(&TheoremVerdict::Inconclusive) {
            TheoremVerdict::Inconclusive
        } else {
            TheoremVerdict::Pass
        }
    }

    pub fn item(&self, name: &str) -> Option<&ItemCheck> {
        self.items.iter().find(|i| i.item == name)
    }
}

pub const ITEM_EMPTY: &str = "empty set has probability 0";
pub const ITEM_WHOLE: &str = "whole space has probability 1";
pub const ITEM_RANGE: &str = "values in [0, 1]";
pub const ITEM_ADDITIVE: &str = "additivity over orthogonal families";
pub const ITEM_CONTINUITY: &str = "continuity bound";

/// Direction analysis for `p(A) <= p(B) + slack(s(A, B))`, with slack decreasing in `s`.
fn continuity_verdict(pa: f64, pb: f64, s: Bounds) -> (TheoremVerdict, f64) {
    let best = pb + continuity_slack(s.hi);
    let worst = pb + continuity_slack(s.lo);
    let v = if pa <= best + TOL_EQ {
        TheoremVerdict::Pass
    } else if pa > worst + TOL_EQ {
        TheoremVerdict::FailCertified
    } else {
        TheoremVerdict::Inconclusive
    };
    (v, (pa - best).max(0.0))
}

/// Checks the four measure axioms on the members of `f`.
///
/// Additivity is checked on every orthogonal pair and on the maximal
/// pairwise-orthogonal family grown greedily from each event. The continuity
/// bound is checked on every ordered pair, computing `s(A, B)` only when
/// `p(A) > p(B)`.
pub fn validate_measure(
    p: &ProbabilityMeasure,
    f: &SigmaStarField,
    cfg: &SamplerConfig,
) -> Result<MeasureReport> {
    p.structure.same_structure(f.structure())?;
    let st = f.structure();
    let ev = f.events();
    let values: Vec<f64> = ev.iter().map(|e| p.evaluate(e)).collect::<Result<_>>()?;
    let find = |s: &Subspace| f.index_of(s);

    let mut empty = ItemCheck::new(ITEM_EMPTY);
    let mut whole = ItemCheck::new(ITEM_WHOLE);
    match find(&st.empty_subspace()) {
        Some(i) => empty.record(exact(values[i].abs() <= TOL_EQ), values[i].abs(), || {
            format!("p(∅) = {}", values[i])
        }),
        None => empty.record(TheoremVerdict::FailCertified, 1.0, || {
            "∅ is not an event".into()
        }),
    }
    match find(&st.whole_space()) {
        Some(i) => {
            let d = (values[i] - 1.0).abs();
            whole.record(exact(d <= TOL_EQ), d, || format!("p(Ω) = {}", values[i]))
        }
        None => whole.record(TheoremVerdict::FailCertified, 1.0, || {
            "Ω is not an event".into()
        }),
    }
    let mut range = ItemCheck::new(ITEM_RANGE);
    for (i, v) in values.iter().enumerate() {
        let out = (-v).max(v - 1.0).max(0.0);
        range.record(exact(out <= TOL_EQ), out, || format!("p(event {i}) = {v}"));
    }

    let mut additive = ItemCheck::new(ITEM_ADDITIVE);
    let check_family = |family: &[usize], additive: &mut ItemCheck| -> Result<()> {
        let parts: Vec<Subspace> = family.iter().map(|&i| ev[i].clone()).collect();
        let total = sum_all(st, &parts)?;
        let lhs = match find(&total) {
            Some(k) => values[k],
            None => p.evaluate(&total).unwrap_or(f64::NAN),
        };
        let rhs: f64 = family.iter().map(|&i| values[i]).sum();
        let d = (lhs - rhs).abs();
        additive.record(exact(d <= TOL_EQ), if d.is_nan() { 1.0 } else { d }, || {
            format!("events {family:?}: p(sum) = {lhs}, sum of p = {rhs}")
        });
        Ok(())
    };
    let nonempty: Vec<usize> = (0..ev.len()).filter(|&i| !ev[i].is_empty()).collect();
    for (k, &i) in nonempty.iter().enumerate() {
        for &j in &nonempty[k + 1..] {
            if is_orthogonal(&ev[i], &ev[j]) {
                check_family(&[i, j], &mut additive)?;
            }
        }
    }
    let mut families: Vec<Vec<usize>> = Vec::new();
    for &seed in &nonempty {
        let mut fam = vec![seed];
        for &j in &nonempty {
            if fam.iter().all(|&c| c != j && is_orthogonal(&ev[c], &ev[j])) {
                fam.push(j);
            }
        }
        fam.sort_unstable();
        if fam.len() > 2 && !families.contains(&fam) {
            families.push(fam);
        }
    }
    for fam in &families {
        check_family(fam, &mut additive)?;
    }

    let pairs: Vec<(usize, usize)> = (0..ev.len())
        .flat_map(|i| (0..ev.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| i != j && values[i] > values[j] + TOL_EQ)
        .collect();
    let results: Vec<Result<(TheoremVerdict, f64)>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let s = subspace_similarity(&ev[i], &ev[j], cfg)?;
            Ok(continuity_verdict(values[i], values[j], s.bounds()))
        })
        .collect();
    let mut continuity = ItemCheck::new(ITEM_CONTINUITY);
    let trivially = ev.len() * ev.len().saturating_sub(1) - pairs.len();
    for _ in 0..trivially {
        continuity.record(TheoremVerdict::Pass, 0.0, String::new);
    }
    for (&(i, j), r) in pairs.iter().zip(results) {
        let (v, viol) = r?;
        continuity.record(v, viol, || {
            format!(
                "A = event {i}, B = event {j}: p(A) = {}, p(B) = {}",
                values[i], values[j]
            )
        });
    }

    Ok(MeasureReport {
        events: ev.len(),
        sampled_domain: false,
        items: [empty, whole, range, additive, continuity]
            .into_iter()
            .map(ItemCheck::finish)
            .collect(),
    })
}

/// Checks the measure axioms of a functional measure on seeded random events.
///
/// `events` random subspaces (of random dimension) are drawn; additivity is
/// checked on `events` random orthogonal pairs and the continuity bound on
/// consecutive pairs of the drawn subspaces.
pub fn validate_functional(
    p: &ProbabilityMeasure,
    events: usize,
    cfg: &SamplerConfig,
) -> Result<MeasureReport> {
    if p.field.is_some() {
        return Err(SpError::InvalidMeasure(
            "measure is restricted to a field".into(),
        ));
    }
    let st = &p.structure;
    let d = st.dimension();
    let mut rng = stream_rng(cfg.seed, u64::MAX - 1);

    let mut empty = ItemCheck::new(ITEM_EMPTY);
    let e0 = p.evaluate(&st.empty_subspace())?;
    empty.record(exact(e0.abs() <= TOL_EQ), e0.abs(), || {
        format!("p(∅) = {e0}")
    });
    let mut whole = ItemCheck::new(ITEM_WHOLE);
    let w = p.evaluate(&st.whole_space())?;
    whole.record(exact((w - 1.0).abs() <= TOL_EQ), (w - 1.0).abs(), || {
        format!("p(Ω) = {w}")
    });

    use rand::Rng;
    let drawn: Vec<Subspace> = (0..events)
        .map(|_| {
            let k = rng.random_range(0..=d);
            random_subspace(st, &mut rng, k)
        })
        .collect();
    let values: Vec<f64> = drawn.iter().map(|e| p.evaluate(e)).collect::<Result<_>>()?;
    let mut range = ItemCheck::new(ITEM_RANGE);
    for (i, v) in values.iter().enumerate() {
        let out = (-v).max(v - 1.0).max(0.0);
        range.record(exact(out <= TOL_EQ), out, || {
            format!("{}: p = {v}", drawn[i].describe())
        });
    }

    let mut additive = ItemCheck::new(ITEM_ADDITIVE);
    for _ in 0..events {
        let (a, b) = if st.kind() == StructureKind::Ray {
            let k = rng.random_range(0..=d);
            let cols = random_orthonormal(&mut rng, d, k);
            let split = rng.random_range(0..=k);
            (
                span_vectors(st, &cols[..split]),
                span_vectors(st, &cols[split..]),
            )
        } else {
            let a = random_subspace(st, &mut rng, 0);
            let b = random_subspace(st, &mut rng, 0);
            if !is_orthogonal(&a, &b) {
                continue;
            }
            (a, b)
        };
        let s = sum_all(st, &[a.clone(), b.clone()])?;
        let d = (p.evaluate(&s)? - p.evaluate(&a)? - p.evaluate(&b)?).abs();
        additive.record(exact(d <= TOL_EQ), d, || {
            format!("A = {}, B = {}", a.describe(), b.describe())
        });
    }

    let mut continuity = ItemCheck::new(ITEM_CONTINUITY);
    for i in 0..drawn.len().saturating_sub(1) {
        for (x, y) in [(i, i + 1), (i + 1, i)] {
            if values[x] <= values[y] + TOL_EQ {
                continuity.record(TheoremVerdict::Pass, 0.0, String::new);
                continue;
            }
            let s = subspace_similarity(&drawn[x], &drawn[y], cfg)?;
            let (v, viol) = continuity_verdict(values[x], values[y], s.bounds());
            continuity.record(v, viol, || {
                format!("A = {}, B = {}", drawn[x].describe(), drawn[y].describe())
            });
        }
    }

    Ok(MeasureReport {
        events: drawn.len(),
        sampled_domain: true,
        items: [empty, whole, range, additive, continuity]
            .into_iter()
            .map(ItemCheck::finish)
            .collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EqualityCheck {
    pub equal: bool,
    pub scanned: usize,
    pub max_difference: f64,
    /// First event on which the measures differ by more than the tolerance.
    pub witness: Option<String>,
}

/// Whether `|p(A) - q(A)| <= 1e-12` on every listed event.
pub fn measures_equal(
    p: &ProbabilityMeasure,
    q: &ProbabilityMeasure,
    events: &[Subspace],
) -> Result<EqualityCheck> {
    p.structure.same_structure(&q.structure)?;
    let mut out = EqualityCheck {
        equal: true,
        scanned: 0,
        max_difference: 0.0,
        witness: None,
    };
    for e in events {
        let d = (p.evaluate(e)? - q.evaluate(e)?).abs();
        out.scanned += 1;
        out.max_difference = out.max_difference.max(d);
        if d > TOL_WEIGHT && out.equal {
            out.equal = false;
            out.witness = Some(e.describe());
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MixtureFit {
    /// Smallest worst-case deviation found over the grid.
    pub best_error: f64,
    pub weight: f64,
    /// Angles (radians) of the two mixed rays.
    pub angles: [f64; 2],
}

/// Grid search for the two-ray mixture `w p_x + (1 - w) p_y` closest to `p` on the events of `f`.
///
/// Only for the ray model in dimension 2, where every mixed state is a
/// mixture of two rays. `steps` points are used per angle and for the weight.
pub fn fit_two_ray_mixture(
    p: &ProbabilityMeasure,
    f: &SigmaStarField,
    steps: usize,
) -> Result<MixtureFit> {
    let st = f.structure();
    if st.kind() != StructureKind::Ray || st.dimension() != 2 {
        return Err(SpError::InvalidMeasure(
            "two-ray fit needs the ray model in dimension 2".into(),
        ));
    }
    let targets: Vec<(f64, [f64; 3])> = f
        .events()
        .iter()
        .map(|e| {
            let m = e.projector().unwrap();
            Ok((p.evaluate(e)?, [m[(0, 0)], m[(0, 1)], m[(1, 1)]]))
        })
        .collect::<Result<_>>()?;
    let steps = steps.max(2);
    let angle = |i: usize| std::f64::consts::PI * i as f64 / steps as f64;
    // p_θ(E) = x^T P x for x = (cos θ, sin θ)
    let pure: Vec<Vec<f64>> = (0..steps)
        .map(|i| {
            let (s, c) = angle(i).sin_cos();
            targets
                .iter()
                .map(|(_, m)| c * c * m[0] + 2.0 * c * s * m[1] + s * s * m[2])
                .collect()
        })
        .collect();
    let best = (0..steps)
        .into_par_iter()
        .map(|i| {
            let mut best = (f64::INFINITY, 0.0, i, 0);
            for j in 0..steps {
                for k in 0..=steps {
                    let w = k as f64 / steps as f64;
                    let err = targets
                        .iter()
                        .enumerate()
                        .map(|(e, (t, _))| (w * pure[i][e] + (1.0 - w) * pure[j][e] - t).abs())
                        .fold(0.0, f64::max);
                    if err < best.0 {
                        best = (err, w, i, j);
                    }
                }
            }
            best
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(
            (f64::INFINITY, 0.0, 0, 0),
            |a, b| if b.0 < a.0 { b } else { a },
        );
    Ok(MixtureFit {
        best_error: best.0,
        weight: best.1,
        angles: [angle(best.2), angle(best.3)],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sigma::{generate_sigma_star, DEFAULT_CAP};

    fn line(st: &SpStructure, deg: f64) -> Subspace {
        let r = deg.to_radians();
        st.subspace_from_vectors(&[vec![r.cos(), r.sin()]]).unwrap()
    }

    fn cfg() -> SamplerConfig {
        SamplerConfig {
            samples: 2000,
            refine_top: 5,
            seed: 3,
        }
    }

    #[test]
    fn pure_state_values() {
        let st = SpStructure::ray(2).unwrap();
        let p = pure_state(&st, &Point::ray(&[1.0, 0.0]).unwrap()).unwrap();
        assert!((p.evaluate(&line(&st, 30.0)).unwrap() - 0.75).abs() < 1e-12);
        assert_eq!(p.evaluate(&st.empty_subspace()).unwrap(), 0.0);
        assert!((p.evaluate(&st.whole_space()).unwrap() - 1.0).abs() < 1e-15);

        let c = SpStructure::classical(5).unwrap();
        let q = pure_state(&c, &Point::index(2)).unwrap();
        assert_eq!(
            q.evaluate(&Subspace::from_points(c.clone(), &[1, 2]).unwrap())
                .unwrap(),
            1.0
        );
        assert_eq!(
            q.evaluate(&Subspace::from_points(c.clone(), &[0, 4]).unwrap())
                .unwrap(),
            0.0
        );
    }

    #[test]
    fn mixing_checks_weights_and_is_affine() {
        let st = SpStructure::ray(2).unwrap();
        let e1 = pure_state(&st, &Point::ray(&[1.0, 0.0]).unwrap()).unwrap();
        let e2 = pure_state(&st, &Point::ray(&[0.0, 1.0]).unwrap()).unwrap();
        assert!(matches!(
            mix(vec![(0.5, e1.clone()), (0.6, e2.clone())]),
            Err(SpError::WeightsNotConvex(_))
        ));
        let m = mix(vec![(0.3, e1.clone()), (0.7, e2.clone())]).unwrap();
        let b = line(&st, 17.0);
        let expect = 0.3 * e1.evaluate(&b).unwrap() + 0.7 * e2.evaluate(&b).unwrap();
        assert_eq!(m.evaluate(&b).unwrap(), expect);
        assert!(m.is_mixed_state());
    }

    #[test]
    fn table_violating_additivity_is_rejected() {
        let st = SpStructure::ray(2).unwrap();
        let f = Arc::new(generate_sigma_star(&st, &[line(&st, 0.0)], DEFAULT_CAP).unwrap());
        let values: Vec<f64> = f
            .events()
            .iter()
            .map(|e| match e.dim() {
                0 => 0.0,
                2 => 1.0,
                _ => 0.6,
            })
            .collect();
        let p = ProbabilityMeasure::table(f.clone(), values).unwrap();
        let r = validate_measure(&p, &f, &cfg()).unwrap();
        let add = r.item(ITEM_ADDITIVE).unwrap();
        assert_eq!(add.verdict, TheoremVerdict::FailCertified);
        assert!(add.witness.is_some());
        assert!((add.max_violation - 0.2).abs() < 1e-12);
    }

    #[test]
    fn pure_state_passes_on_orthogonal_line_field() {
        let st = SpStructure::ray(2).unwrap();
        let f = generate_sigma_star(&st, &[line(&st, 10.0), line(&st, 70.0)], DEFAULT_CAP).unwrap();
        let p = pure_state(&st, &Point::ray(&[0.3, 0.8]).unwrap()).unwrap();
        let r = validate_measure(&p, &f, &cfg()).unwrap();
        assert_eq!(r.verdict(), TheoremVerdict::Pass, "{r:#?}");
    }

    #[test]
    fn unequal_measures_report_witness() {
        let st = SpStructure::ray(2).unwrap();
        let e1 = pure_state(&st, &Point::ray(&[1.0, 0.0]).unwrap()).unwrap();
        let e2 = pure_state(&st, &Point::ray(&[0.0, 1.0]).unwrap()).unwrap();
        let half = mix(vec![(0.5, e1.clone()), (0.5, e2)]).unwrap();
        let r = measures_equal(&half, &e1, &[line(&st, 90.0)]).unwrap();
        assert!(!r.equal);
        assert!((r.max_difference - 0.5).abs() < 1e-12);
    }
}
