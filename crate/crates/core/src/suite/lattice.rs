use rand::Rng;

use super::fixtures::{line, planar_rays};
use super::{run_trials, trial_rng, CheckRecord, SuiteConfig, Trial};
use crate::error::Result;
use crate::lattice::{
    check_de_morgan, check_orthomodular, distributes, independent_intersection, intersect,
    ortho_complement, sum,
};
use crate::linalg::TOL_EQ;
use crate::sample::{random_orthonormal, random_point_in, random_subspace, span_vectors};
use crate::structure::SpStructure;
use crate::subspace::Subspace;

const PER_DIM: usize = 200;
const DIMS: [usize; 4] = [2, 3, 4, 5];
const PLANAR_TRIPLES: usize = 20;

const TAG_CASE: u32 = 0x100;
const TAG_LINES: u32 = 0x101;

struct Case {
    a: Subspace,
    b: Subspace,
    inner: Subspace,
    outer: Subspace,
}

/// Random subspaces for trial `i`; the dimension cycles through [`DIMS`].
fn ray_case(seed: u64, i: usize) -> Case {
    let d = DIMS[i % DIMS.len()];
    let st = SpStructure::ray(d).expect("positive dimension");
    let mut rng = trial_rng(seed, TAG_CASE, i);
    let dim_a = rng.random_range(0..=d);
    let a = random_subspace(&st, &mut rng, dim_a);

    // B shares a direction with A half the time, so meets are not always trivial.
    let extra = rng.random_range(0..d);
    let mut cols = random_orthonormal(&mut rng, d, extra);
    if rng.random_bool(0.5) {
        if let Some(p) = random_point_in(&a, &mut rng) {
            cols.push(p.as_vector().unwrap().clone());
        }
    }
    let b = span_vectors(&st, &cols);

    let dim_c = rng.random_range(0..=d);
    let outer = random_subspace(&st, &mut rng, dim_c);
    let frame = outer.frame().unwrap().clone();
    let k = frame.ncols();
    let m = rng.random_range(0..=k);
    let inner_cols: Vec<_> = random_orthonormal(&mut rng, k.max(1), m)
        .into_iter()
        .map(|q| &frame * q)
        .collect();
    let inner = span_vectors(&st, &inner_cols);
    Case { a, b, inner, outer }
}

fn all_subspaces(st: &SpStructure) -> Vec<Subspace> {
    let n = st.point_count().unwrap();
    (0u32..1 << n)
        .filter_map(|mask| {
            let pts: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            Subspace::from_points(st.clone(), &pts).ok()
        })
        .collect()
}

fn mask_of(s: &Subspace) -> u32 {
    s.point_indices()
        .unwrap()
        .into_iter()
        .fold(0, |m, i| m | (1 << i))
}

pub(super) fn run(cfg: &SuiteConfig) -> Vec<CheckRecord> {
    let seed = cfg.seed;
    let n = cfg.scale.unwrap_or(PER_DIM) * DIMS.len();
    let mut out = Vec::new();

    let ray = |id: &str, law: &str, f: &(dyn Fn(&Case) -> Result<f64> + Sync)| {
        run_trials(id, law, n, |i| {
            let c = ray_case(seed, i);
            let r = f(&c)?;
            Ok(Trial::within(r, TOL_EQ, || {
                format!("A = {}, B = {}", c.a.describe(), c.b.describe())
            }))
        })
    };
    out.push(ray("lattice.complement-sum", "A ⊕ A⊥ = Ω", &|c| {
        let whole = c.a.structure().whole_space();
        Ok(sum(&c.a, &ortho_complement(&c.a))?.residual(&whole))
    }));
    out.push(ray("lattice.complement-meet", "A ∩ A⊥ = ∅", &|c| {
        let empty = c.a.structure().empty_subspace();
        let ac = ortho_complement(&c.a);
        Ok(intersect(&c.a, &ac)?
            .residual(&empty)
            .max(independent_intersection(&c.a, &ac)?.residual(&empty)))
    }));
    out.push(ray("lattice.double-complement", "(A⊥)⊥ = A", &|c| {
        Ok(ortho_complement(&ortho_complement(&c.a)).residual(&c.a))
    }));
    out.push(ray(
        "lattice.orthomodular",
        "C = A ⊕ (A⊥ ∩ C) for A ⊆ C",
        &|c| {
            let r = check_orthomodular(&c.inner, &c.outer)?;
            Ok(if r.vacuous { f64::INFINITY } else { r.residual })
        },
    ));
    out.push(ray(
        "lattice.de-morgan",
        "(A ∩ B)⊥ = A⊥ ⊕ B⊥ and (A ⊕ B)⊥ = A⊥ ∩ B⊥, meets cross-checked",
        &|c| {
            let r = check_de_morgan(&c.a, &c.b)?;
            Ok(r.meet_residual
                .max(r.sum_residual)
                .max(r.cross_check_residual))
        },
    ));

    out.extend(classical_exhaustive());

    let planar = SpStructure::ray(2).expect("plane");
    let planar_ref = &planar;
    out.push(run_trials(
        "lattice.non-distributive",
        "distinct coplanar lines do not distribute",
        PLANAR_TRIPLES + 1,
        |i| {
            let degs = if i == 0 {
                [0.0, 60.0, 120.0]
            } else {
                let mut rng = trial_rng(seed, TAG_LINES, i);
                let a: f64 = rng.random_range(0.0..60.0);
                [
                    a,
                    a + rng.random_range(1.0..60.0),
                    a + rng.random_range(61.0..120.0),
                ]
            };
            let [a, b, c] = degs.map(|d| line(planar_ref, d));
            Ok(Trial::holds(!distributes(&a, &b, &c)?, || {
                format!("lines at {degs:?} degrees distribute")
            }))
        },
    ));

    let mut members = vec![planar.empty_subspace(), planar.whole_space()];
    for deg in [0.0, 30.0, 60.0, 90.0, 120.0, 150.0] {
        members.push(line(&planar, deg));
    }
    out.push(nested_orthomodular(
        "lattice.planar-orthomodular",
        "orthomodular law among the lines at 0°, 60°, 120° and their complements",
        &members,
    ));
    out.push(nested_orthomodular(
        "explicit.orthomodular",
        "orthomodular law on every nested pair of the four planar rays",
        &all_subspaces(&planar_rays()),
    ));
    out
}

fn nested_orthomodular(id: &str, law: &str, members: &[Subspace]) -> CheckRecord {
    let pairs: Vec<(usize, usize)> = (0..members.len())
        .flat_map(|i| (0..members.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| members[i].is_subset_of(&members[j]))
        .collect();
    run_trials(id, law, pairs.len(), |t| {
        let (a, c) = (&members[pairs[t].0], &members[pairs[t].1]);
        let r = check_orthomodular(a, c)?;
        Ok(Trial::within(r.residual, TOL_EQ, || {
            format!("A = {}, C = {}", a.describe(), c.describe())
        }))
    })
}

/// Every pair of subsets of the classical 4-point space against bitmask set operations.
fn classical_exhaustive() -> Vec<CheckRecord> {
    let st = SpStructure::classical(4).expect("positive size");
    let subs = all_subspaces(&st);
    let n = subs.len();
    let full = (1u32 << 4) - 1;
    let pair = |t: usize| (&subs[t / n], &subs[t % n]);
    let show = |a: &Subspace, b: &Subspace| format!("A = {}, B = {}", a.describe(), b.describe());
    vec![
        run_trials(
            "classical.complement",
            "complement is set complement",
            n,
            |t| {
                let a = &subs[t];
                Ok(Trial::holds(
                    mask_of(&ortho_complement(a)) == full & !mask_of(a),
                    || a.describe(),
                ))
            },
        ),
        run_trials("classical.union", "sum is union", n * n, |t| {
            let (a, b) = pair(t);
            Ok(Trial::holds(
                mask_of(&sum(a, b)?) == mask_of(a) | mask_of(b),
                || show(a, b),
            ))
        }),
        run_trials(
            "classical.intersection",
            "meet is intersection",
            n * n,
            |t| {
                let (a, b) = pair(t);
                Ok(Trial::holds(
                    mask_of(&intersect(a, b)?) == mask_of(a) & mask_of(b)
                        && mask_of(&independent_intersection(a, b)?) == mask_of(a) & mask_of(b),
                    || show(a, b),
                ))
            },
        ),
        run_trials(
            "classical.de-morgan",
            "both De Morgan identities",
            n * n,
            |t| {
                let (a, b) = pair(t);
                Ok(Trial::holds(check_de_morgan(a, b)?.holds, || show(a, b)))
            },
        ),
        run_trials(
            "classical.orthomodular",
            "orthomodular law on nested pairs",
            n * n,
            |t| {
                let (a, c) = pair(t);
                let r = check_orthomodular(a, c)?;
                Ok(Trial::holds(r.holds, || show(a, c)))
            },
        ),
    ]
}
