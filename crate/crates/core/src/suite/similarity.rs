use super::fixtures::planar_rays;
use super::{run_trials, trial_rng, CheckRecord, SuiteConfig, Trial};
use crate::linalg::{TOL_EQ, TOL_UNIT};
use crate::sample::{random_point, unit_vector};
use crate::similarity::{
    check_point_continuity, check_similarity_theorems, sampled_similarity, singleton_residual,
    subspace_similarity, SamplerConfig, TheoremVerdict,
};
use crate::structure::{Point, SpStructure};
use crate::subspace::Subspace;

const LINE_PAIRS_PER_DIM: usize = 100;
const LINE_PAIR_SAMPLES: usize = 100_000;
const LINE_PAIR_TOL: f64 = 1e-3;
/// Point triples per line pair of the default scale.
const TRIPLES_PER_SCALE: usize = 100;

const TAG_SINGLETON: u32 = 0x200;
const TAG_LINE_PAIR: u32 = 0x201;
const TAG_TRIPLE: u32 = 0x202;

fn classical_subspaces(n: usize) -> Vec<Subspace> {
    let st = SpStructure::classical(n).expect("positive size");
    (0u32..1 << n)
        .map(|mask| {
            let pts: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            Subspace::from_points(st.clone(), &pts).expect("subsets are subspaces")
        })
        .collect()
}

fn angle_deg(p: &Point) -> f64 {
    let v = p.as_vector().unwrap();
    v[1].atan2(v[0]).to_degrees()
}

pub(super) fn run(cfg: &SuiteConfig) -> Vec<CheckRecord> {
    let seed = cfg.seed;
    let scale = cfg.scale.unwrap_or(LINE_PAIRS_PER_DIM);
    let mut out = Vec::new();

    let finite = [SpStructure::classical(4).unwrap(), planar_rays()];
    let n_finite = finite.len() * 16;
    out.push(run_trials(
        "similarity.singleton",
        "s({x}, {y}) = s(x, y)",
        n_finite + scale,
        |i| {
            let (st, x, y, limit) = if i < n_finite {
                let st = finite[i / 16].clone();
                let (x, y) = (Point::index(i % 16 / 4), Point::index(i % 4));
                (st, x, y, 0.0)
            } else {
                let d = 2 + (i - n_finite) % 3;
                let st = SpStructure::ray(d).unwrap();
                let mut rng = trial_rng(seed, TAG_SINGLETON, i);
                let x = random_point(&st, &mut rng);
                let y = random_point(&st, &mut rng);
                (st, x, y, TOL_UNIT)
            };
            let r = singleton_residual(&st, &x, &y)?;
            Ok(Trial::within(r, limit, || {
                format!("{} and {}", st.label_of(&x), st.label_of(&y))
            }))
        },
    ));

    let subs = classical_subspaces(4);
    let n = subs.len();
    let exact = SamplerConfig::default();
    out.push(run_trials(
        "classical.similarity-oracle",
        "s(A, B) is 1 when A = B and 0 otherwise",
        n * n,
        |t| {
            let (a, b) = (&subs[t / n], &subs[t % n]);
            let want = if t / n == t % n { 1.0 } else { 0.0 };
            let got = subspace_similarity(a, b, &exact)?.value;
            Ok(Trial::within((got - want).abs(), 0.0, || {
                format!("A = {}, B = {}: {got}", a.describe(), b.describe())
            }))
        },
    ));
    for (id, law) in [
        ("classical.point-bound", "point bound"),
        ("classical.identity", "identity"),
        ("classical.triangle", "triangle bound"),
    ] {
        out.push(run_trials(id, law, n * n * n, |t| {
            let (a, b, c) = (&subs[t / (n * n)], &subs[t / n % n], &subs[t % n]);
            let report = check_similarity_theorems(a, b, c, &exact)?;
            let check = report
                .checks
                .iter()
                .find(|ch| ch.law == law)
                .expect("every law is reported");
            let residual = if check.margin.is_finite() {
                (-check.margin).max(0.0)
            } else {
                0.0
            };
            let show = || {
                format!(
                    "A = {}, B = {}, C = {}: {}",
                    a.describe(),
                    b.describe(),
                    c.describe(),
                    check.detail
                )
            };
            Ok(match check.verdict {
                TheoremVerdict::Pass | TheoremVerdict::Vacuous => Trial::pass(residual),
                TheoremVerdict::FailCertified => Trial::fail(residual, show()),
                TheoremVerdict::Inconclusive => Trial::inconclusive(residual, show()),
            })
        }));
    }

    out.push(run_trials(
        "similarity.line-pairs",
        "sampled s(A, B) of two lines matches cos²θ from above",
        2 * scale,
        |i| {
            let d = 2 + i % 2;
            let st = SpStructure::ray(d).unwrap();
            let mut rng = trial_rng(seed, TAG_LINE_PAIR, i);
            let u = unit_vector(&mut rng, d);
            let v = unit_vector(&mut rng, d);
            let oracle = u.dot(&v).powi(2);
            let a = st.subspace_from_vectors(&[u.iter().copied().collect()])?;
            let b = st.subspace_from_vectors(&[v.iter().copied().collect()])?;
            let est = sampled_similarity(
                &a,
                &b,
                &SamplerConfig {
                    samples: LINE_PAIR_SAMPLES,
                    refine_top: 50,
                    seed: seed.wrapping_add(i as u64),
                },
            );
            let gap = (est.value - oracle).abs();
            let ok = gap <= LINE_PAIR_TOL && est.value >= oracle - TOL_EQ;
            Ok(if ok {
                Trial::pass(gap)
            } else {
                Trial::fail(
                    gap,
                    format!("d = {d}, cos²θ = {oracle}, sampled {}", est.value),
                )
            })
        },
    ));

    let plane = SpStructure::ray(2).unwrap();
    out.push(run_trials(
        "similarity.continuity-points",
        "s(z, x) <= s(z, y) + 1/2 sqrt(1 - s(x, y)) + 1 - s(x, y) on rays of the plane",
        TRIPLES_PER_SCALE * scale,
        |i| {
            let mut rng = trial_rng(seed, TAG_TRIPLE, i);
            let [x, y, z] = [(); 3].map(|_| random_point(&plane, &mut rng));
            let r = check_point_continuity(&plane, &x, &y, &z)?;
            Ok(Trial::within((-r).max(0.0), TOL_EQ, || {
                format!(
                    "x, y, z at {:.4}°, {:.4}°, {:.4}°: slack {r:.6}",
                    angle_deg(&x),
                    angle_deg(&y),
                    angle_deg(&z)
                )
            }))
        },
    ));

    let classical = SpStructure::classical(4).unwrap();
    out.push(run_trials(
        "classical.continuity-points",
        "point continuity bound on the classical 4-point space",
        64,
        |i| {
            let [x, y, z] = [i / 16, i / 4 % 4, i % 4].map(Point::index);
            let r = check_point_continuity(&classical, &x, &y, &z)?;
            Ok(Trial::within((-r).max(0.0), 0.0, || format!("{i:03}")))
        },
    ));
    out
}
