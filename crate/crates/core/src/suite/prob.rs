use std::sync::Arc;

use rand::Rng;

use super::fixtures::{planar_rays, square_field_table, square_table};
use super::sigma::random_field;
use super::{run_trials, trial_rng, CheckRecord, SuiteConfig, Trial};
use crate::error::Result;
use crate::linalg::TOL_EQ;
use crate::prob::{
    fit_two_ray_mixture, measures_equal, mix, pure_state, validate_measure, MeasureReport,
    ProbabilityMeasure, ITEM_ADDITIVE, ITEM_CONTINUITY, TOL_WEIGHT,
};
use crate::sample::{random_point, random_subspace, span_vectors, unit_vector};
use crate::sigma::{generate_sigma_star, SigmaStarField, DEFAULT_CAP};
use crate::similarity::{SamplerConfig, TheoremVerdict};
use crate::structure::{Point, SpStructure};
use crate::subspace::Subspace;

const FIELDS: usize = 20;
const POINTS_PER_FIELD: usize = 4;
const LINES_PER_SCALE: usize = 50;
const FIT_STEPS: usize = 120;

const TAG_FINITE: u32 = 0x400;
const TAG_PLANE: u32 = 0x401;
const TAG_SPACE: u32 = 0x402;
const TAG_POINT: u32 = 0x403;
const TAG_MIX: u32 = 0x404;
const TAG_LINES: u32 = 0x405;
const TAG_CLASSICAL: u32 = 0x406;

fn to_trial(r: &MeasureReport, skip: &[&str]) -> Trial {
    let items = r.items.iter().filter(|i| !skip.contains(&i.item));
    let residual = items.clone().map(|i| i.max_violation).fold(0.0, f64::max);
    let verdict = items
        .clone()
        .fold(TheoremVerdict::Pass, |acc, i| match (acc, i.verdict) {
            (TheoremVerdict::FailCertified, _) | (_, TheoremVerdict::FailCertified) => {
                TheoremVerdict::FailCertified
            }
            (TheoremVerdict::Inconclusive, _) | (_, TheoremVerdict::Inconclusive) => {
                TheoremVerdict::Inconclusive
            }
            _ => TheoremVerdict::Pass,
        });
    let witness = || {
        items
            .clone()
            .filter(|i| i.failures > 0 || i.inconclusive > 0)
            .map(|i| {
                format!(
                    "{} ({} failed, {} open): {}",
                    i.item,
                    i.failures,
                    i.inconclusive,
                    i.witness.clone().unwrap_or_default()
                )
            })
            .collect::<Vec<_>>()
            .join("; ")
    };
    match verdict {
        TheoremVerdict::FailCertified => Trial::fail(residual, witness()),
        TheoremVerdict::Inconclusive => Trial::inconclusive(residual, witness()),
        _ => Trial::pass(residual),
    }
}

fn sampler(seed: u64) -> SamplerConfig {
    SamplerConfig {
        seed,
        ..SamplerConfig::default()
    }
}

/// Pure state at a seeded point, validated on the field.
fn pure_on_field(f: &SigmaStarField, x: &Point, seed: u64) -> Result<Trial> {
    let st = f.structure();
    let r = validate_measure(&pure_state(st, x)?, f, &sampler(seed))?;
    let t = to_trial(&r, &[]);
    Ok(match t.witness {
        Some(w) => Trial {
            witness: Some(format!("pure state at {}: {w}", st.label_of(x))),
            ..t
        },
        None => t,
    })
}

fn line_field(st: &SpStructure, vectors: &[Vec<f64>]) -> Result<SigmaStarField> {
    let gens = vectors
        .iter()
        .map(|v| st.subspace_from_vectors(std::slice::from_ref(v)))
        .collect::<Result<Vec<_>>>()?;
    generate_sigma_star(st, &gens, DEFAULT_CAP)
}

pub(super) fn run(cfg: &SuiteConfig) -> Vec<CheckRecord> {
    let seed = cfg.seed;
    let fields = cfg.scale.unwrap_or(FIELDS);
    let mut out = Vec::new();

    // Finite fields: the classical powerset, every subspace of the planar
    // rays, and seeded classical and planar-ray fields; pure states at every point.
    let mut finite: Vec<SigmaStarField> = Vec::new();
    let c4 = SpStructure::classical(4).unwrap();
    let singles: Vec<Subspace> = (0..4)
        .map(|x| Subspace::from_points(c4.clone(), &[x]).unwrap())
        .collect();
    finite.push(generate_sigma_star(&c4, &singles, DEFAULT_CAP).unwrap());
    let sq = planar_rays();
    let sq_lines: Vec<Subspace> = (0..4)
        .map(|x| Subspace::from_points(sq.clone(), &[x]).unwrap())
        .collect();
    finite.push(generate_sigma_star(&sq, &sq_lines, DEFAULT_CAP).unwrap());
    for i in 0..fields {
        if let Ok(f) = random_field(seed, TAG_FINITE, 4 * i + 2 + i % 2) {
            finite.push(f);
        }
    }
    let cases: Vec<(usize, usize)> = finite
        .iter()
        .enumerate()
        .flat_map(|(k, f)| (0..f.structure().dimension()).map(move |x| (k, x)))
        .collect();
    out.push(run_trials(
        "prob.pure-finite",
        "pure states satisfy the measure axioms on finite fields",
        cases.len(),
        |t| {
            let (k, x) = cases[t];
            pure_on_field(&finite[k], &Point::index(x), seed)
        },
    ));

    out.push(run_trials(
        "prob.pure-plane",
        "pure states satisfy the measure axioms on fields of lines in the plane",
        fields * POINTS_PER_FIELD,
        |t| {
            let f = random_field(seed, TAG_PLANE, 4 * (t / POINTS_PER_FIELD))?;
            let mut rng = trial_rng(seed, TAG_POINT, t);
            let x = random_point(f.structure(), &mut rng);
            pure_on_field(&f, &x, seed)
        },
    ));

    let space_fields = fields.div_ceil(4);
    out.push(run_trials(
        "prob.pure-space",
        "pure states satisfy the measure axioms on fields of lines in 3-space (sampled similarities)",
        space_fields * 2,
        |t| {
            let f = random_field(seed, TAG_SPACE, 4 * (t / 2) + 1)?;
            let mut rng = trial_rng(seed, TAG_POINT, 1 << 20 | t);
            let x = random_point(f.structure(), &mut rng);
            pure_on_field(&f, &x, seed)
        },
    ));

    out.push(run_trials(
        "prob.additivity-rejected",
        "a table with p(L) + p(L⊥) != 1 is rejected with a witness",
        1,
        |_| {
            let (f, p) = square_table([0.7, 0.7, 0.5, 0.5])?;
            let r = validate_measure(&p, &f, &SamplerConfig::default())?;
            let item = r.item(ITEM_ADDITIVE).expect("additivity is reported");
            Ok(Trial::holds(
                item.verdict == TheoremVerdict::FailCertified && item.witness.is_some(),
                || "additivity violation not detected".into(),
            ))
        },
    ));

    out.push(run_trials(
        "prob.mixed-additive",
        "mixed states satisfy the first three measure axioms",
        fields * 2,
        |t| {
            let f = random_field(seed, TAG_MIX, t % 2 * 2 + (t / 2) * 4)?;
            let st = f.structure();
            let mut rng = trial_rng(seed, TAG_MIX, t);
            let p = random_mixture(st, &mut rng)?;
            let r = validate_measure(&p, &f, &sampler(seed))?;
            Ok(to_trial(&r, &[ITEM_CONTINUITY]))
        },
    ));

    out.push(run_trials(
        "prob.mixing-affine",
        "a mixture evaluates to the weighted sum of its components",
        fields * 5,
        |t| {
            let st = match t % 3 {
                0 => SpStructure::ray(2)?,
                1 => SpStructure::ray(3)?,
                _ => SpStructure::classical(5)?,
            };
            let mut rng = trial_rng(seed, TAG_MIX, 1 << 20 | t);
            let k = rng.random_range(2..=3);
            let raw: Vec<f64> = (0..k).map(|_| rng.random_range(0.05..1.0)).collect();
            let total: f64 = raw.iter().sum();
            let mut parts = Vec::new();
            for w in &raw {
                parts.push((w / total, pure_state(&st, &random_point(&st, &mut rng))?));
            }
            let weights_sum: f64 = parts.iter().map(|(w, _)| w).sum();
            if (weights_sum - 1.0).abs() > TOL_WEIGHT {
                parts[0].0 += 1.0 - weights_sum;
            }
            let m = mix(parts.clone())?;
            let dim = rng.random_range(0..=st.dimension());
            let e = random_subspace(&st, &mut rng, dim);
            let direct = parts
                .iter()
                .map(|(w, p)| Ok(w * p.evaluate(&e)?))
                .collect::<Result<Vec<f64>>>()?
                .into_iter()
                .fold(0.0, |a, b| a + b);
            let got = m.evaluate(&e)?;
            Ok(Trial::within((got - direct).abs(), 0.0, || {
                format!("{} gives {got} against {direct}", e.describe())
            }))
        },
    ));

    out.extend(non_freeness(seed, LINES_PER_SCALE * fields));

    out.push(run_trials(
        "prob.table-not-mixture",
        "a table measure on a plane field meets every axiom but is no mixture of rays",
        1,
        |_| {
            let (f, p) = square_field_table()?;
            let r = validate_measure(&p, &f, &SamplerConfig::default())?;
            let fit = fit_two_ray_mixture(&p, &f, FIT_STEPS)?;
            // Least worst-case error of a mixed state, from the positivity of its density matrix.
            let floor = (1.5 - 1.75f64.sqrt()) / 4.0;
            let ok = r.verdict() == TheoremVerdict::Pass && fit.best_error >= floor - TOL_EQ;
            Ok(Trial::holds(ok, || {
                format!(
                    "verdict {:?}, best mixture error {} below {floor}",
                    r.verdict(),
                    fit.best_error
                )
            }))
        },
    ));

    out.push(run_trials(
        "classical.measures",
        "classical measures are point-mass mixtures and meet every axiom",
        fields,
        |t| {
            let mut rng = trial_rng(seed, TAG_CLASSICAL, t);
            let n = rng.random_range(2..=5);
            let st = SpStructure::classical(n)?;
            let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..1.0)).collect();
            let total: f64 = raw.iter().sum();
            let mass: Vec<f64> = raw.iter().map(|r| r / total).collect();
            let singles = (0..n)
                .map(|x| Subspace::from_points(st.clone(), &[x]))
                .collect::<Result<Vec<_>>>()?;
            let f = Arc::new(generate_sigma_star(&st, &singles, DEFAULT_CAP)?);
            let table: Vec<f64> = f
                .events()
                .iter()
                .map(|e| {
                    let pts = e.point_indices().unwrap();
                    if pts.len() == n {
                        1.0
                    } else {
                        pts.iter().map(|&x| mass[x]).sum()
                    }
                })
                .collect();
            let p = ProbabilityMeasure::table(f.clone(), table)?;
            let r = validate_measure(&p, &f, &SamplerConfig::default())?;
            let mut parts = Vec::new();
            for (x, w) in mass.iter().enumerate() {
                if *w > 0.0 {
                    parts.push((*w, pure_state(&st, &Point::index(x))?));
                }
            }
            let q = mix(parts)?;
            let eq = measures_equal(&p, &q, f.events())?;
            let t = to_trial(&r, &[]);
            Ok(if eq.max_difference > 1e-12 {
                Trial::fail(
                    eq.max_difference,
                    format!(
                        "differs from the point-mass mixture at {}",
                        eq.witness.unwrap_or_default()
                    ),
                )
            } else {
                t
            })
        },
    ));
    out
}

fn random_mixture<R: Rng>(st: &SpStructure, rng: &mut R) -> Result<ProbabilityMeasure> {
    let k = rng.random_range(2..=3);
    let w = 1.0 / k as f64;
    let mut parts = Vec::new();
    for i in 0..k {
        let wi = if i + 1 == k {
            1.0 - w * (k - 1) as f64
        } else {
            w
        };
        parts.push((wi, pure_state(st, &random_point(st, rng))?));
    }
    mix(parts)
}

/// Two different mixtures that agree on every event of the plane.
fn non_freeness(seed: u64, lines: usize) -> Vec<CheckRecord> {
    let st = SpStructure::ray(2).unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let pure = |v: [f64; 2]| pure_state(&st, &Point::ray(&v).unwrap()).unwrap();
    let p = mix(vec![(0.5, pure([1.0, 0.0])), (0.5, pure([0.0, 1.0]))]).unwrap();
    let q = mix(vec![(0.5, pure([h, h])), (0.5, pure([h, -h]))]).unwrap();
    let (p, q, st) = (&p, &q, &st);
    vec![
        run_trials(
            "prob.non-freeness-field",
            "½p(e1) + ½p(e2) = ½p((e1+e2)/√2) + ½p((e1−e2)/√2) on the field of both bases",
            1,
            |_| {
                let f = line_field(st, &[vec![1.0, 0.0], vec![1.0, 1.0]])?;
                let eq = measures_equal(p, q, f.events())?;
                Ok(Trial::within(eq.max_difference, TOL_WEIGHT, || {
                    eq.witness.clone().unwrap_or_default()
                }))
            },
        ),
        run_trials(
            "prob.non-freeness-lines",
            "both mixtures give every line of the plane probability ½",
            lines,
            |t| {
                let mut rng = trial_rng(seed, TAG_LINES, t);
                let l = span_vectors(st, &[unit_vector(&mut rng, 2)]);
                let (a, b) = (p.evaluate(&l)?, q.evaluate(&l)?);
                let r = (a - b).abs().max((a - 0.5).abs()).max((b - 0.5).abs());
                Ok(Trial::within(r, TOL_WEIGHT, || {
                    format!("{}: {a} against {b}", l.describe())
                }))
            },
        ),
    ]
}
