use rand::Rng;

use super::fixtures::{line, planar_rays};
use super::{run_trials, trial_rng, CheckRecord, SuiteConfig, Trial};
use crate::error::{Result, SpError};
use crate::lattice::ortho_complement;
use crate::sample::{random_subspace, span_vectors, unit_vector};
use crate::sigma::DEFAULT_CAP;
use crate::sigma::{atoms, generate_sigma_star, is_boolean, validate_sigma_star, SigmaStarField};
use crate::structure::SpStructure;
use crate::subspace::Subspace;

const FIELDS: usize = 40;
const POWERSET_MAX: usize = 6;
const NON_BOOLEAN_PAIRS: usize = 20;

const TAG_FIELD: u32 = 0x300;
const TAG_LINE: u32 = 0x301;
const TAG_PAIR: u32 = 0x302;

/// Seeded field for trial `i`. The kind cycles through: lines of the plane,
/// lines of 3-space, subsets of a classical space, events of the four planar rays.
pub(super) fn random_field(seed: u64, tag: u32, i: usize) -> Result<SigmaStarField> {
    let mut rng = trial_rng(seed, tag, i);
    let (st, gens): (SpStructure, Vec<Subspace>) = match i % 4 {
        0 => {
            let st = SpStructure::ray(2)?;
            let k = rng.random_range(1..=3);
            let gens = (0..k)
                .map(|_| span_vectors(&st, &[unit_vector(&mut rng, 2)]))
                .collect();
            (st, gens)
        }
        1 => {
            let st = SpStructure::ray(3)?;
            let k = rng.random_range(1..=2);
            let gens = (0..k)
                .map(|_| span_vectors(&st, &[unit_vector(&mut rng, 3)]))
                .collect();
            (st, gens)
        }
        2 => {
            let st = SpStructure::classical(rng.random_range(3..=6))?;
            let k = rng.random_range(1..=3);
            let gens = (0..k).map(|_| random_subspace(&st, &mut rng, 0)).collect();
            (st, gens)
        }
        _ => {
            let st = planar_rays();
            let k = rng.random_range(1..=2);
            let gens = (0..k).map(|_| random_subspace(&st, &mut rng, 0)).collect();
            (st, gens)
        }
    };
    generate_sigma_star(&st, &gens, DEFAULT_CAP)
}

fn same_events(f: &SigmaStarField, g: &SigmaStarField) -> bool {
    f.len() == g.len() && f.events().iter().all(|e| g.contains(e))
}

pub(super) fn run(cfg: &SuiteConfig) -> Vec<CheckRecord> {
    let seed = cfg.seed;
    let fields = cfg.scale.unwrap_or(FIELDS);
    let mut out = Vec::new();

    out.push(run_trials(
        "classical.powerset",
        "singletons of a classical space generate its powerset: Boolean, one atom per point",
        POWERSET_MAX,
        |i| {
            let n = i + 1;
            let st = SpStructure::classical(n)?;
            let gens: Vec<Subspace> = (0..n)
                .map(|x| Subspace::from_points(st.clone(), &[x]))
                .collect::<Result<_>>()?;
            let f = generate_sigma_star(&st, &gens, DEFAULT_CAP)?;
            let all_subsets = (0u32..1 << n).all(|mask| {
                let pts: Vec<usize> = (0..n).filter(|x| mask & (1 << x) != 0).collect();
                Subspace::from_points(st.clone(), &pts).is_ok_and(|s| f.contains(&s))
            });
            let at = atoms(&f)?;
            let singleton_atoms =
                at.atoms.len() == n && at.atoms.iter().all(|&a| f.events()[a].dim() == 1);
            let ok = f.len() == 1 << n
                && all_subsets
                && singleton_atoms
                && at.decompositions.len() == f.len() - 1
                && is_boolean(&f)?.boolean;
            Ok(Trial::holds(ok, || {
                format!("n = {n}: {} events, {} atoms", f.len(), at.atoms.len())
            }))
        },
    ));

    out.push(run_trials(
        "sigma.single-line",
        "one line generates exactly {∅, L, L⊥, Ω}",
        fields,
        |i| {
            let d = 2 + i % 2;
            let st = SpStructure::ray(d)?;
            let mut rng = trial_rng(seed, TAG_LINE, i);
            let l = span_vectors(&st, &[unit_vector(&mut rng, d)]);
            let f = generate_sigma_star(&st, std::slice::from_ref(&l), DEFAULT_CAP)?;
            let expected = [
                st.empty_subspace(),
                l.clone(),
                ortho_complement(&l),
                st.whole_space(),
            ];
            let ok = f.len() == 4 && expected.iter().all(|e| f.contains(e));
            Ok(Trial::holds(ok, || {
                format!("d = {d}: {} events from {}", f.len(), l.describe())
            }))
        },
    ));

    out.push(run_trials(
        "sigma.idempotent",
        "generating from the members of a field returns the field",
        fields,
        |i| {
            let f = random_field(seed, TAG_FIELD, i)?;
            let g = generate_sigma_star(f.structure(), f.events(), DEFAULT_CAP)?;
            Ok(Trial::holds(same_events(&f, &g), || {
                format!("{} events became {}", f.len(), g.len())
            }))
        },
    ));

    out.push(run_trials(
        "sigma.rescan",
        "closure under complement, orthogonal sums and intersections, re-checked by scan",
        fields,
        |i| {
            let f = random_field(seed, TAG_FIELD, i)?;
            let r = validate_sigma_star(&f)?;
            let failed: Vec<String> = r
                .checks
                .iter()
                .filter(|c| c.failures > 0)
                .map(|c| format!("{}: {}", c.law, c.witness.clone().unwrap_or_default()))
                .collect();
            Ok(Trial::holds(failed.is_empty(), || failed.join("; ")))
        },
    ));

    out.push(run_trials(
        "classical.atoms",
        "every non-empty event of a classical field is a sum of atoms",
        fields.div_ceil(4),
        |i| {
            let f = random_field(seed, TAG_FIELD, 4 * i + 2)?;
            let at = atoms(&f)?;
            Ok(Trial::holds(at.decompositions.len() == f.len() - 1, || {
                format!(
                    "{} of {} events decomposed",
                    at.decompositions.len(),
                    f.len() - 1
                )
            }))
        },
    ));

    let plane = SpStructure::ray(2).expect("plane");
    let plane = &plane;
    out.push(run_trials(
        "sigma.non-boolean",
        "two non-orthogonal lines of the plane generate a non-Boolean field",
        NON_BOOLEAN_PAIRS + 1,
        |i| {
            let degs = if i == 0 {
                [0.0, 45.0]
            } else {
                let mut rng = trial_rng(seed, TAG_PAIR, i);
                let a: f64 = rng.random_range(0.0..180.0);
                [a, a + rng.random_range(1.0..89.0)]
            };
            let f = generate_sigma_star(plane, &degs.map(|d| line(plane, d)), DEFAULT_CAP)?;
            let b = is_boolean(&f)?;
            Ok(Trial::holds(!b.boolean && b.witness.is_some(), || {
                format!("lines at {degs:?} degrees")
            }))
        },
    ));

    out.push(run_trials(
        "sigma.cap",
        "closure stops with an error at the event cap",
        2,
        |i| {
            let (st, gens, cap) = if i == 0 {
                let st = SpStructure::classical(6)?;
                let gens = (0..6)
                    .map(|x| Subspace::from_points(st.clone(), &[x]))
                    .collect::<Result<Vec<_>>>()?;
                (st, gens, 10)
            } else {
                let gens = [0.0, 50.0, 100.0].map(|d| line(plane, d)).to_vec();
                (plane.clone(), gens, 5)
            };
            let r = generate_sigma_star(&st, &gens, cap);
            Ok(Trial::holds(
                matches!(r, Err(SpError::ClosureCapExceeded { cap: c }) if c == cap),
                || format!("cap {cap} not enforced"),
            ))
        },
    ));
    out
}
