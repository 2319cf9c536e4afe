use rand::Rng;

use super::fixtures::line;
use super::{run_trials, trial_rng, CheckRecord, SuiteConfig, Trial};
use crate::error::Result;
use crate::lattice::{intersect, is_orthogonal, sum};
use crate::linalg::TOL_EQ;
use crate::prob::{mix, pure_state, ProbabilityMeasure, TOL_WEIGHT};
use crate::rv::{
    check_expect_theorem, compatible, expectation, make_rv, preimage, RealRandomVariable, ValueSet,
};
use crate::sample::{
    random_orthonormal, random_point, random_point_in, random_subspace, span_vectors,
};
use crate::structure::{Point, SpStructure};
use crate::subspace::Subspace;

const CASES: usize = 500;
const STRUCTURAL_CASES: usize = 100;

const TAG_RV: u32 = 0x500;
const TAG_MEASURE: u32 = 0x502;
const TAG_ANGLE: u32 = 0x503;

/// Seeded ray variable: a random orthonormal basis grouped into events with distinct values.
fn random_rv<R: Rng>(st: &SpStructure, rng: &mut R) -> Result<RealRandomVariable> {
    let d = st.dimension();
    let basis = random_orthonormal(rng, d, d);
    let k = rng.random_range(1..=d);
    let mut groups: Vec<Vec<_>> = vec![Vec::new(); k];
    for (i, b) in basis.into_iter().enumerate() {
        let g = if i < k { i } else { rng.random_range(0..k) };
        groups[g].push(b);
    }
    let pairs = groups
        .iter()
        .enumerate()
        .map(|(g, cols)| {
            let value = g as f64 * 2.0 - 3.0 + rng.random_range(0.0..1.0);
            (value, span_vectors(st, cols))
        })
        .collect();
    make_rv(st, pairs)
}

/// Set partitions of `0..n` as block labels (restricted growth strings).
fn partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut labels = vec![0; n];
    fn grow(i: usize, max: usize, labels: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == labels.len() {
            out.push(labels.clone());
            return;
        }
        for b in 0..=max + 1 {
            labels[i] = b;
            grow(i + 1, max.max(b), labels, out);
        }
    }
    if n > 0 {
        grow(1, 0, &mut labels, &mut out);
    }
    out
}

fn classical_rv(st: &SpStructure, labels: &[usize]) -> Result<RealRandomVariable> {
    let blocks = labels.iter().max().map_or(0, |m| m + 1);
    let pairs = (0..blocks)
        .map(|b| {
            let pts: Vec<usize> = (0..labels.len()).filter(|&x| labels[x] == b).collect();
            Ok((
                1.5 * (b + 1) as f64,
                Subspace::from_points(st.clone(), &pts)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    make_rv(st, pairs)
}

fn random_measure<R: Rng>(
    st: &SpStructure,
    rng: &mut R,
) -> Result<(Vec<(f64, ProbabilityMeasure)>, ProbabilityMeasure)> {
    let k = rng.random_range(2..=3);
    let raw: Vec<f64> = (0..k).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let mut parts = Vec::new();
    for w in raw {
        parts.push((w / total, pure_state(st, &random_point(st, rng))?));
    }
    let m = mix(parts.clone())?;
    Ok((parts, m))
}

fn ray_structure(i: usize) -> Result<SpStructure> {
    SpStructure::ray(2 + i % 2)
}

fn show(x: &RealRandomVariable) -> String {
    x.outcomes()
        .iter()
        .map(|(r, e)| format!("{r} on {}", e.describe()))
        .collect::<Vec<_>>()
        .join(", ")
}

pub(super) fn run(cfg: &SuiteConfig) -> Vec<CheckRecord> {
    let seed = cfg.seed;
    let cases = cfg.scale.unwrap_or(CASES);
    let structural = cases.min(STRUCTURAL_CASES);
    let mut out = Vec::new();

    out.push(run_trials(
        "rv.expectation-identity",
        "pure-state expectation equals the sum of X(b) s(x, b) over a domain basis",
        cases,
        |i| {
            let st = ray_structure(i)?;
            let mut rng = trial_rng(seed, TAG_RV, i);
            let x = random_rv(&st, &mut rng)?;
            let at = random_point(&st, &mut rng);
            let r = check_expect_theorem(&x, &at)?;
            Ok(Trial::within(r.residual.abs(), TOL_EQ, || {
                format!(
                    "{} at {}: {} against {}",
                    show(&x),
                    st.label_of(&at),
                    r.by_events,
                    r.by_basis
                )
            }))
        },
    ));

    let c4 = SpStructure::classical(4).unwrap();
    let parts4 = partitions(4);
    out.push(run_trials(
        "classical.expectation-identity",
        "expectation identity on every variable and point of the classical 4-point space",
        parts4.len() * 4,
        |t| {
            let x = classical_rv(&c4, &parts4[t / 4])?;
            let at = Point::index(t % 4);
            let r = check_expect_theorem(&x, &at)?;
            Ok(Trial::within(r.residual.abs(), TOL_EQ, || {
                format!("{} at {}", show(&x), t % 4)
            }))
        },
    ));

    out.push(run_trials(
        "rv.die",
        "a fair die has expectation 3.5",
        1,
        |_| {
            let st = SpStructure::classical(6)?;
            let faces = (0..6)
                .map(|i| Ok(((i + 1) as f64, Subspace::from_points(st.clone(), &[i])?)))
                .collect::<Result<Vec<_>>>()?;
            let x = make_rv(&st, faces)?;
            let parts = (0..6)
                .map(|i| Ok((1.0 / 6.0, pure_state(&st, &Point::index(i))?)))
                .collect::<Result<Vec<_>>>()?;
            let e = expectation(&x, &mix(parts)?)?.value;
            let oracle = (1..=6).fold(0.0, |acc, face| acc + face as f64 * (1.0 / 6.0));
            Ok(Trial::holds(e == oracle && e == 3.5, || {
                format!("expectation {e}, finite sum {oracle}")
            }))
        },
    ));

    out.push(run_trials(
        "rv.definedness",
        "a point lies in at most one outcome event, and has a value exactly when it lies in one",
        structural,
        |i| {
            let st = ray_structure(i)?;
            let mut rng = trial_rng(seed, TAG_RV, i);
            let x = random_rv(&st, &mut rng)?;
            let mut points: Vec<Point> = x.domain_basis().into_iter().map(|(_, p)| p).collect();
            points.push(random_point(&st, &mut rng));
            for (_, e) in x.outcomes() {
                points.extend(random_point_in(e, &mut rng));
            }
            for p in &points {
                let inside = x.outcomes().iter().filter(|(_, e)| e.contains(p)).count();
                if inside > 1 || x.eval_at_point(p).is_ok() != (inside == 1) {
                    return Ok(Trial::fail(
                        1.0,
                        format!("{} at {}: {inside} events", show(&x), st.label_of(p)),
                    ));
                }
            }
            Ok(Trial::pass(0.0))
        },
    ));

    out.push(run_trials(
        "rv.preimage",
        "preimages of disjoint value sets are orthogonal, complementary sets sum to Ω, and meets match",
        structural,
        |i| {
            let st = ray_structure(i)?;
            let mut rng = trial_rng(seed, TAG_RV, i);
            let x = random_rv(&st, &mut rng)?;
            let values: Vec<f64> = x.outcomes().iter().map(|(r, _)| *r).collect();
            let k = values.len();
            let pick = |mask: usize| -> Vec<f64> {
                (0..k).filter(|j| mask & (1 << j) != 0).map(|j| values[j]).collect()
            };
            let full = (1 << k) - 1;
            let mut ok = preimage(&x, &ValueSet::all())?.is_whole()
                && preimage(&x, &ValueSet::of(&[]))?.is_empty();
            for s in 0..=full {
                let a = preimage(&x, &ValueSet::of(&pick(s)))?;
                let b = preimage(&x, &ValueSet::of(&pick(full & !s)))?;
                ok &= is_orthogonal(&a, &b) && sum(&a, &b)?.is_whole();
                for t in 0..=full {
                    let c = preimage(&x, &ValueSet::of(&pick(t)))?;
                    let meet = preimage(&x, &ValueSet::of(&pick(s & t)))?;
                    ok &= intersect(&a, &c)?.equals(&meet);
                }
            }
            Ok(Trial::holds(ok, || show(&x)))
        },
    ));

    out.push(run_trials(
        "rv.indicator",
        "the expectation of an indicator is the probability of its event",
        structural,
        |i| {
            let st = match i % 3 {
                2 => SpStructure::classical(5)?,
                _ => ray_structure(i)?,
            };
            let mut rng = trial_rng(seed, TAG_MEASURE, i);
            let dim = rng.random_range(0..=st.dimension());
            let a = random_subspace(&st, &mut rng, dim);
            let (_, p) = random_measure(&st, &mut rng)?;
            let e = expectation(&RealRandomVariable::indicator(&a)?, &p)?.value;
            let pa = p.evaluate(&a)?;
            Ok(Trial::within((e - pa).abs(), 0.0, || {
                format!("{}: {e} against {pa}", a.describe())
            }))
        },
    ));

    out.push(run_trials(
        "rv.expectation-affine",
        "expectation is affine in the measure",
        structural,
        |i| {
            let st = ray_structure(i)?;
            let mut rng = trial_rng(seed, TAG_MEASURE, 1 << 20 | i);
            let x = random_rv(&st, &mut rng)?;
            let (parts, m) = random_measure(&st, &mut rng)?;
            let whole = expectation(&x, &m)?.value;
            let mut split = 0.0;
            for (w, p) in &parts {
                split += w * expectation(&x, p)?.value;
            }
            Ok(Trial::within((whole - split).abs(), TOL_WEIGHT, || {
                format!("{}: {whole} against {split}", show(&x))
            }))
        },
    ));

    let c5 = SpStructure::classical(5).unwrap();
    let parts5 = partitions(5);
    let n4 = parts4.len();
    out.push(run_trials(
        "classical.rv-total",
        "every variable on a classical space has a value at every point",
        n4 + parts5.len(),
        |t| {
            let x = if t < n4 {
                classical_rv(&c4, &parts4[t])?
            } else {
                classical_rv(&c5, &parts5[t - n4])?
            };
            Ok(Trial::holds(x.is_total(), || show(&x)))
        },
    ));

    let plane = SpStructure::ray(2).unwrap();
    let plane = &plane;
    let spin = |deg: f64| {
        make_rv(
            plane,
            vec![(1.0, line(plane, deg)), (-1.0, line(plane, deg + 90.0))],
        )
    };
    out.push(run_trials(
        "rv.compatibility",
        "spins along the same or perpendicular axes commute; other axes do not",
        structural,
        |i| {
            let mut rng = trial_rng(seed, TAG_ANGLE, i);
            let a: f64 = rng.random_range(0.0..180.0);
            let (delta, expect) = match i % 3 {
                0 => (0.0, true),
                1 => (90.0, true),
                _ => (rng.random_range(1.0..89.0), false),
            };
            let got = compatible(&spin(a)?, &spin(a + delta)?)?.compatible;
            Ok(Trial::holds(got == expect, || {
                format!("axes at {a:.3}° and {:.3}°", a + delta)
            }))
        },
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_counts_are_bell_numbers() {
        let counts: Vec<usize> = (1..=5).map(|n| partitions(n).len()).collect();
        assert_eq!(counts, [1, 2, 5, 15, 52]);
    }
}
