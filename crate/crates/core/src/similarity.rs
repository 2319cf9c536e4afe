//! Similarity of subspaces seen from a vantage point, and its infimum over Ω.
//!
//! Finite models minimise over every point. The ray model has closed forms
//! for a handful of configurations and otherwise falls back to a seeded
//! sampler whose result is an upper bound on the infimum.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::lattice::{independent_intersection, ortho_complement};
use crate::linalg::TOL_EQ;
use crate::sample::{stream_rng, unit_vector};
use crate::structure::{Point, SpStructure, StructureKind};
use crate::subspace::Subspace;

/// Samples per independently seeded block.
pub const BLOCK: usize = 400;

const REFINE_SWEEPS: usize = 200;
const REFINE_STEP: f64 = 0.05;
const REFINE_DECAY: f64 = 0.7;
const REFINE_MIN_GAIN: f64 = 1e-12;

/// Points of `A` sampled (besides its basis) when checking the point bound.
const POINT_BOUND_SAMPLES: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct SamplerConfig {
    pub samples: usize,
    /// Complete blocks with index below this refine their best candidate.
    pub refine_top: usize,
    pub seed: u64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            samples: 20_000,
            refine_top: 50,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certainty {
    Exact,
    UpperBoundSampled,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimilarityEstimate {
    pub value: f64,
    pub certainty: Certainty,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// A point at which `τ` attains `value`.
    pub witness: Option<Point>,
}

impl SimilarityEstimate {
    fn exact(value: f64, witness: Option<Point>) -> Self {
        SimilarityEstimate {
            value: value.clamp(0.0, 1.0),
            certainty: Certainty::Exact,
            samples: None,
            seed: None,
            witness,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.certainty == Certainty::Exact
    }

    /// Interval known to contain the true infimum.
    pub fn bounds(&self) -> Bounds {
        match self.certainty {
            Certainty::Exact => Bounds {
                lo: self.value,
                hi: self.value,
            },
            Certainty::UpperBoundSampled => Bounds {
                lo: 0.0,
                hi: self.value,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bounds {
    pub lo: f64,
    pub hi: f64,
}

/// `τ(x, A, B)`: how similar `A` and `B` look from `x`.
pub fn tau(st: &SpStructure, x: &Point, a: &Subspace, b: &Subspace) -> Result<f64> {
    st.check_point(x)?;
    st.same_structure(a.structure())?;
    st.same_structure(b.structure())?;
    let xa = a.orthogonal_to_point(x);
    let xb = b.orthogonal_to_point(x);
    Ok(match (xa, xb) {
        (true, true) => 1.0,
        (true, false) => 1.0 - b.similarity_from(&snap_off(x, a)),
        (false, true) => 1.0 - a.similarity_from(&snap_off(x, b)),
        (false, false) => {
            let ta = st.project(x, a)?;
            let tb = st.project(x, b)?;
            st.sim(&ta, &tb)
        }
    }
    .clamp(0.0, 1.0))
}

/// A ray counted as orthogonal to `a` within tolerance, moved onto `a^⊥`.
///
/// Without this, points inside the tolerance band would report `τ` values
/// up to `sqrt(TOL_EQ)` below any attained at a truly orthogonal point.
fn snap_off(x: &Point, a: &Subspace) -> Point {
    match (x.as_vector(), a.projector()) {
        (Some(v), Some(p)) if !a.is_empty() => {
            Point::from_vector(v - p * v).unwrap_or_else(|_| x.clone())
        }
        _ => x.clone(),
    }
}

/// `s(A, B)`: the infimum of `τ(x, A, B)` over all points.
pub fn subspace_similarity(
    a: &Subspace,
    b: &Subspace,
    cfg: &SamplerConfig,
) -> Result<SimilarityEstimate> {
    let st = a.structure();
    st.same_structure(b.structure())?;
    if st.kind() != StructureKind::Ray {
        return finite_minimum(st, a, b);
    }
    if let Some(est) = ray_closed_form(a, b)? {
        return Ok(est);
    }
    Ok(sampled_similarity(a, b, cfg))
}

fn finite_minimum(st: &SpStructure, a: &Subspace, b: &Subspace) -> Result<SimilarityEstimate> {
    let mut best = (f64::INFINITY, None);
    for i in 0..st.dimension() {
        let x = Point::index(i);
        let t = tau(st, &x, a, b)?;
        if t < best.0 {
            best = (t, Some(x));
        }
    }
    Ok(SimilarityEstimate::exact(best.0, best.1))
}

fn first_column(s: &Subspace) -> Option<Point> {
    s.basis().points().first().cloned()
}

fn ray_closed_form(a: &Subspace, b: &Subspace) -> Result<Option<SimilarityEstimate>> {
    let exact = |v: f64, w: Option<Point>| Ok(Some(SimilarityEstimate::exact(v, w)));
    match (a.is_empty(), b.is_empty()) {
        (true, true) => return exact(1.0, None),
        (true, false) => return exact(0.0, first_column(b)),
        (false, true) => return exact(0.0, first_column(a)),
        _ => {}
    }
    if a.equals(b) {
        return exact(1.0, first_column(a));
    }
    if a.dim() == 1 && b.dim() == 1 {
        let (fa, fb) = (a.frame().unwrap(), b.frame().unwrap());
        let c = fa.column(0).dot(&fb.column(0));
        return exact(c * c, first_column(a));
    }
    // a point of A orthogonal to B sees τ = 1 - s(x, A) = 0
    for (p, q) in [(a, b), (b, a)] {
        let meet = independent_intersection(p, &ortho_complement(q))?;
        if !meet.is_empty() {
            return exact(0.0, first_column(&meet));
        }
    }
    Ok(None)
}

/// Orthonormal coordinates of `A` and `B` for fast evaluation of `τ` on unit vectors.
struct RayPair {
    fa: DMatrix<f64>,
    fb: DMatrix<f64>,
    cross: DMatrix<f64>,
}

impl RayPair {
    fn new(a: &Subspace, b: &Subspace) -> Self {
        let fa = a.frame().expect("ray subspace").clone();
        let fb = b.frame().expect("ray subspace").clone();
        let cross = fa.transpose() * &fb;
        RayPair { fa, fb, cross }
    }

    fn tau(&self, x: &DVector<f64>) -> f64 {
        let ca = self.fa.tr_mul(x);
        let cb = self.fb.tr_mul(x);
        let na = ca.norm_squared();
        let nb = cb.norm_squared();
        let v = match (na <= TOL_EQ, nb <= TOL_EQ) {
            (true, true) => 1.0,
            (true, false) => 1.0 - snapped(x, &self.fa, &ca, &self.fb).unwrap_or(nb),
            (false, true) => 1.0 - snapped(x, &self.fb, &cb, &self.fa).unwrap_or(na),
            (false, false) => {
                let inner = ca.dot(&(&self.cross * &cb));
                inner * inner / (na * nb)
            }
        };
        v.clamp(0.0, 1.0)
    }
}

/// `s(x', Q)` for `x'` the unit vector of `x - P x`, with `coeffs = P`'s frame coordinates of `x`.
fn snapped(
    x: &DVector<f64>,
    frame: &DMatrix<f64>,
    coeffs: &DVector<f64>,
    other: &DMatrix<f64>,
) -> Option<f64> {
    let off = x - frame * coeffs;
    let n2 = off.norm_squared();
    (n2 > 0.5).then(|| other.tr_mul(&off).norm_squared() / n2)
}

/// Region a sample is drawn from: orthonormal columns spanning it.
struct Stratum(DMatrix<f64>);

impl Stratum {
    fn point(&self, c: &DVector<f64>) -> DVector<f64> {
        let v = &self.0 * c;
        let n = v.norm();
        v / n
    }
}

#[derive(Clone)]
struct Candidate {
    value: f64,
    x: DVector<f64>,
}

fn better(a: Option<Candidate>, b: Candidate) -> Option<Candidate> {
    match a {
        Some(a) if a.value <= b.value => Some(a),
        _ => Some(b),
    }
}

/// Projected coordinate descent on the unit sphere of a stratum.
fn refine(pair: &RayPair, stratum: &Stratum, start: &DVector<f64>) -> Candidate {
    let mut c = start.clone();
    let mut value = pair.tau(&stratum.point(&c));
    let mut step = REFINE_STEP;
    for _ in 0..REFINE_SWEEPS {
        let before = value;
        for i in 0..c.len() {
            for dir in [1.0, -1.0] {
                let mut trial = c.clone();
                trial[i] += dir * step;
                let n = trial.norm();
                if n == 0.0 {
                    continue;
                }
                trial /= n;
                let t = pair.tau(&stratum.point(&trial));
                if t < value {
                    value = t;
                    c = trial;
                    break;
                }
            }
        }
        if before - value < REFINE_MIN_GAIN {
            step *= REFINE_DECAY;
            if step < REFINE_MIN_GAIN {
                break;
            }
        }
    }
    Candidate {
        value,
        x: stratum.point(&c),
    }
}

struct BlockResult {
    best: Option<Candidate>,
    refined: Option<Candidate>,
}

/// Runs the seeded sampler regardless of whether a closed form exists (ray model only).
///
/// Samples are drawn in blocks of [`BLOCK`], block `i` from stream `i` of the
/// seed. Within a block, every fourth sample (offset 1) lies in `A^⊥` and every
/// fourth (offset 2) in `B^⊥`, where `τ` switches formula; the others are
/// uniform on the sphere. Each complete block below `refine_top` refines its
/// best candidate. Growing `samples` therefore never raises the estimate.
pub fn sampled_similarity(a: &Subspace, b: &Subspace, cfg: &SamplerConfig) -> SimilarityEstimate {
    // evaluate in a fixed orientation so that s(A, B) and s(B, A) agree bitwise
    let raw = |s: &Subspace| s.frame().map(|f| f.as_slice().to_vec()).unwrap_or_default();
    let order = a.canonical_cmp(b).then_with(|| {
        let (fa, fb) = (raw(a), raw(b));
        fa.iter()
            .zip(&fb)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let (a, b) = if order == std::cmp::Ordering::Greater {
        (b, a)
    } else {
        (a, b)
    };
    let d = a.structure().dimension();
    let pair = RayPair::new(a, b);
    let a_perp = ortho_complement(a);
    let b_perp = ortho_complement(b);
    let full = Stratum(DMatrix::identity(d, d));
    let stratum_of = |perp: &Subspace| {
        let f = perp.frame().unwrap();
        if f.ncols() == 0 || f.ncols() == d {
            None
        } else {
            Some(Stratum(f.clone()))
        }
    };
    let strata = [
        full,
        stratum_of(&a_perp).unwrap_or(Stratum(DMatrix::identity(d, d))),
        stratum_of(&b_perp).unwrap_or(Stratum(DMatrix::identity(d, d))),
    ];
    let stratum_index = |j: usize| match j % 4 {
        1 => 1,
        2 => 2,
        _ => 0,
    };

    // basis vectors of the four subspaces are always evaluated
    let mut best: Option<Candidate> = None;
    for s in [a, b, &a_perp, &b_perp] {
        for col in s.frame().unwrap().column_iter() {
            let x = col.into_owned();
            best = better(
                best,
                Candidate {
                    value: pair.tau(&x),
                    x,
                },
            );
        }
    }

    let blocks = cfg.samples.div_ceil(BLOCK);
    let results: Vec<BlockResult> = (0..blocks)
        .into_par_iter()
        .map(|bi| {
            let len = BLOCK.min(cfg.samples - bi * BLOCK);
            let mut rng = stream_rng(cfg.seed, bi as u64);
            let mut best: Option<(Candidate, usize, DVector<f64>)> = None;
            for j in 0..len {
                let si = stratum_index(j);
                let stratum = &strata[si];
                let c = unit_vector(&mut rng, stratum.0.ncols());
                let x = stratum.point(&c);
                let value = pair.tau(&x);
                if best.as_ref().is_none_or(|(b, _, _)| value < b.value) {
                    best = Some((Candidate { value, x }, si, c));
                }
            }
            let refined = match &best {
                Some((_, si, c)) if len == BLOCK && bi < cfg.refine_top => {
                    Some(refine(&pair, &strata[*si], c))
                }
                _ => None,
            };
            BlockResult {
                best: best.map(|(b, _, _)| b),
                refined,
            }
        })
        .collect();

    for r in results {
        for c in [r.best, r.refined].into_iter().flatten() {
            best = better(best, c);
        }
    }
    let best = best.expect("non-empty subspaces have basis vectors");
    SimilarityEstimate {
        value: best.value,
        certainty: Certainty::UpperBoundSampled,
        samples: Some(cfg.samples),
        seed: Some(cfg.seed),
        witness: Point::from_vector(best.x).ok(),
    }
}

/// `|s({x}, {y}) - s(x, y)|`: singleton subspaces inherit the point similarity.
pub fn singleton_residual(st: &SpStructure, x: &Point, y: &Point) -> Result<f64> {
    let sx = st.point_subspace(x)?;
    let sy = st.point_subspace(y)?;
    let est = subspace_similarity(&sx, &sy, &SamplerConfig::default())?;
    Ok((est.value - st.similarity(x, y)?).abs())
}

/// `1/2 sqrt(1 - v) + 1 - v`, the slack of the continuity bound.
pub fn continuity_slack(v: f64) -> f64 {
    let g = (1.0 - v).max(0.0);
    0.5 * g.sqrt() + g
}

/// Right side minus left side of `s(z, x) <= s(z, y) + 1/2 sqrt(1 - s(x, y)) + 1 - s(x, y)`.
pub fn check_point_continuity(st: &SpStructure, x: &Point, y: &Point, z: &Point) -> Result<f64> {
    let sxy = st.similarity(x, y)?;
    let szx = st.similarity(z, x)?;
    let szy = st.similarity(z, y)?;
    Ok(szy + continuity_slack(sxy) - szx)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TheoremVerdict {
    Pass,
    FailCertified,
    Inconclusive,
    /// The hypothesis never applies (for example a point bound on an empty subspace).
    Vacuous,
}

impl TheoremVerdict {
    fn combine(self, other: TheoremVerdict) -> TheoremVerdict {
        use TheoremVerdict::*;
        match (self, other) {
            (FailCertified, _) | (_, FailCertified) => FailCertified,
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            (Pass, _) | (_, Pass) => Pass,
            _ => Vacuous,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremCheck {
    pub law: &'static str,
    pub verdict: TheoremVerdict,
    /// Worst observed `rhs.lo - lhs.hi`; negative values are violations or unresolved gaps.
    pub margin: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremReport {
    pub s_ab: SimilarityEstimate,
    pub s_ac: SimilarityEstimate,
    pub s_bc: SimilarityEstimate,
    pub checks: Vec<TheoremCheck>,
}

impl TheoremReport {
    pub fn overall(&self) -> TheoremVerdict {
        self.checks
            .iter()
            .fold(TheoremVerdict::Vacuous, |acc, c| acc.combine(c.verdict))
    }
}

/// Points of `A` at which the point bound `s(A, B) <= s(x, B)` is evaluated.
fn probe_points(a: &Subspace, seed: u64) -> Vec<Point> {
    if let Some(idx) = a.point_indices() {
        return idx.into_iter().map(Point::index).collect();
    }
    let mut out = a.basis().points().to_vec();
    if a.dim() > 1 {
        let mut rng = stream_rng(seed, u64::MAX);
        for _ in 0..POINT_BOUND_SAMPLES {
            if let Some(p) = crate::sample::random_point_in(a, &mut rng) {
                out.push(p);
            }
        }
    }
    out
}

/// Tightens a sampled upper bound with `τ` evaluated at extra points.
fn tighten(
    est: &mut SimilarityEstimate,
    st: &SpStructure,
    a: &Subspace,
    b: &Subspace,
    points: &[Point],
) -> Result<()> {
    if est.is_exact() {
        return Ok(());
    }
    for x in points {
        let t = tau(st, x, a, b)?;
        if t < est.value {
            est.value = t;
            est.witness = Some(x.clone());
        }
    }
    Ok(())
}

/// Evaluates the point bound, identity and triangle laws for `s` on `A, B, C`.
///
/// Exact estimates give point intervals; sampled ones give `[0, U]`. A law
/// passes when the bounds prove it, fails only when the bounds prove a
/// violation, and is inconclusive otherwise.
pub fn check_similarity_theorems(
    a: &Subspace,
    b: &Subspace,
    c: &Subspace,
    cfg: &SamplerConfig,
) -> Result<TheoremReport> {
    let st = a.structure();
    st.same_structure(b.structure())?;
    st.same_structure(c.structure())?;
    let probes = probe_points(a, cfg.seed);

    let mut s_ab = subspace_similarity(a, b, cfg)?;
    tighten(&mut s_ab, st, a, b, &probes)?;
    let s_ac = subspace_similarity(a, c, cfg)?;
    let s_bc = subspace_similarity(b, c, cfg)?;
    let mut checks = Vec::new();

    // s(A, B) <= s(x, B) for x in A
    let ab = s_ab.bounds();
    let mut verdict = TheoremVerdict::Vacuous;
    let mut margin = f64::INFINITY;
    for x in &probes {
        let sxb = b.similarity_from(x);
        let v = if ab.hi <= sxb + TOL_EQ {
            TheoremVerdict::Pass
        } else if ab.lo > sxb + TOL_EQ {
            TheoremVerdict::FailCertified
        } else {
            TheoremVerdict::Inconclusive
        };
        verdict = verdict.combine(v);
        margin = margin.min(sxb - ab.hi);
    }
    checks.push(TheoremCheck {
        law: "point bound",
        verdict,
        margin,
        detail: format!("s(A,B) <= s(x,B) at {} points of A", probes.len()),
    });

    // s(A, B) = 1 iff A = B
    let equal = a.equals(b);
    let (verdict, margin) = if equal {
        if ab.lo >= 1.0 - TOL_EQ {
            (TheoremVerdict::Pass, 0.0)
        } else if ab.hi < 1.0 - TOL_EQ {
            (TheoremVerdict::FailCertified, ab.hi - 1.0)
        } else {
            (TheoremVerdict::Inconclusive, ab.lo - 1.0)
        }
    } else if ab.hi < 1.0 - TOL_EQ {
        (TheoremVerdict::Pass, 1.0 - ab.hi)
    } else if ab.lo >= 1.0 - TOL_EQ {
        (TheoremVerdict::FailCertified, 1.0 - ab.lo)
    } else {
        (TheoremVerdict::Inconclusive, 1.0 - ab.hi)
    };
    checks.push(TheoremCheck {
        law: "identity",
        verdict,
        margin,
        detail: format!(
            "A {} B, s(A,B) in [{}, {}]",
            if equal { "=" } else { "!=" },
            ab.lo,
            ab.hi
        ),
    });

    // s(A, B) <= s(A, C) + slack(s(B, C)); slack is decreasing in its argument
    let (ac, bc) = (s_ac.bounds(), s_bc.bounds());
    let best_rhs = ac.lo + continuity_slack(bc.hi);
    let worst_rhs = ac.hi + continuity_slack(bc.lo);
    let verdict = if ab.hi <= best_rhs + TOL_EQ {
        TheoremVerdict::Pass
    } else if ab.lo > worst_rhs + TOL_EQ {
        TheoremVerdict::FailCertified
    } else {
        TheoremVerdict::Inconclusive
    };
    checks.push(TheoremCheck {
        law: "triangle bound",
        verdict,
        margin: best_rhs - ab.hi,
        detail: "s(A,B) <= s(A,C) + 1/2 sqrt(1 - s(B,C)) + 1 - s(B,C)".to_string(),
    });

    Ok(TheoremReport {
        s_ab,
        s_ac,
        s_bc,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(st: &SpStructure, deg: f64) -> Subspace {
        let r = deg.to_radians();
        st.subspace_from_vectors(&[vec![r.cos(), r.sin()]]).unwrap()
    }

    #[test]
    fn tolerance_band_does_not_undercut_tau() {
        let st = SpStructure::ray(2).unwrap();
        let a = line(&st, 0.0);
        let b = line(&st, 30.0);
        let want = 30f64.to_radians().cos().powi(2);
        // s(x, A) = sin²(2e-5) is inside the orthogonality tolerance
        let r = (90.0 - 2e-5f64.to_degrees()).to_radians();
        let x = Point::ray(&[r.cos(), r.sin()]).unwrap();
        assert!(a.orthogonal_to_point(&x));
        assert!((tau(&st, &x, &a, &b).unwrap() - want).abs() < 1e-12);
        let pair = RayPair::new(&a, &b);
        assert!((pair.tau(x.as_vector().unwrap()) - want).abs() < 1e-12);
    }

    #[test]
    fn tau_case_analysis() {
        let st = SpStructure::ray(2).unwrap();
        let a = line(&st, 0.0);
        let b = line(&st, 60.0);
        let x = Point::ray(&[20f64.to_radians().cos(), 20f64.to_radians().sin()]).unwrap();
        assert!((tau(&st, &x, &a, &b).unwrap() - 0.25).abs() < 1e-12);

        let st3 = SpStructure::ray(3).unwrap();
        let a3 = st3.subspace_from_vectors(&[vec![1.0, 0.0, 0.0]]).unwrap();
        let b3 = st3.subspace_from_vectors(&[vec![0.0, 1.0, 0.0]]).unwrap();
        let z = Point::ray(&[0.0, 0.0, 1.0]).unwrap();
        assert_eq!(tau(&st3, &z, &a3, &b3).unwrap(), 1.0);
        let y = Point::ray(&[0.0, 1.0, 1.0]).unwrap();
        assert!((tau(&st3, &y, &a3, &b3).unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(tau(&st3, &y, &b3, &b3).unwrap(), 1.0);
    }

    #[test]
    fn classical_similarity_is_identity_indicator() {
        let st = SpStructure::classical(4).unwrap();
        let a = Subspace::from_points(st.clone(), &[0, 1]).unwrap();
        let b = Subspace::from_points(st.clone(), &[1, 2]).unwrap();
        let cfg = SamplerConfig::default();
        assert_eq!(subspace_similarity(&a, &b, &cfg).unwrap().value, 0.0);
        assert_eq!(subspace_similarity(&a, &a, &cfg).unwrap().value, 1.0);
    }

    #[test]
    fn line_pair_closed_form_and_sampler_agree() {
        let st = SpStructure::ray(2).unwrap();
        let a = line(&st, 0.0);
        let b = line(&st, 60.0);
        let exact = subspace_similarity(&a, &b, &SamplerConfig::default()).unwrap();
        assert!(exact.is_exact());
        assert!((exact.value - 0.25).abs() < 1e-12);
        let sampled = sampled_similarity(
            &a,
            &b,
            &SamplerConfig {
                samples: 4000,
                refine_top: 5,
                seed: 1,
            },
        );
        assert!(sampled.value >= 0.25 - 1e-9);
        assert!(sampled.value <= 0.25 + 1e-3);
    }

    #[test]
    fn sampler_is_monotone_in_prefix_and_symmetric() {
        let st = SpStructure::ray(4).unwrap();
        let mut rng = stream_rng(5, 0);
        let a = crate::sample::random_subspace(&st, &mut rng, 2);
        let b = crate::sample::random_subspace(&st, &mut rng, 2);
        let mut prev = f64::INFINITY;
        for n in [100, 400, 1000, 2000, 4000] {
            let e = sampled_similarity(
                &a,
                &b,
                &SamplerConfig {
                    samples: n,
                    refine_top: 50,
                    seed: 9,
                },
            );
            assert!(e.value <= prev);
            prev = e.value;
        }
        let cfg = SamplerConfig {
            samples: 2000,
            refine_top: 3,
            seed: 2,
        };
        assert_eq!(
            sampled_similarity(&a, &b, &cfg).value,
            sampled_similarity(&b, &a, &cfg).value
        );
    }

    #[test]
    fn point_in_one_orthogonal_to_other_gives_zero() {
        let st = SpStructure::ray(3).unwrap();
        let a = st
            .subspace_from_vectors(&[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]])
            .unwrap();
        let b = st
            .subspace_from_vectors(&[vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]])
            .unwrap();
        let e = subspace_similarity(&a, &b, &SamplerConfig::default()).unwrap();
        assert!(e.is_exact());
        assert_eq!(e.value, 0.0);
    }

    #[test]
    fn continuity_residual_equality_case() {
        let st = SpStructure::ray(2).unwrap();
        let x = Point::ray(&[1.0, 0.2]).unwrap();
        let z = Point::ray(&[0.3, 1.0]).unwrap();
        // s(x, x) carries rounding of order 1e-16, which the square root lifts to 1e-8
        let r = check_point_continuity(&st, &x, &x, &z).unwrap();
        assert!((0.0..1e-7).contains(&r), "{r}");
    }

    #[test]
    fn theorem_checker_on_equal_pair() {
        let st = SpStructure::ray(3).unwrap();
        let a = st
            .subspace_from_vectors(&[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 1.0]])
            .unwrap();
        let c = st.subspace_from_vectors(&[vec![0.0, 0.0, 1.0]]).unwrap();
        let r = check_similarity_theorems(
            &a,
            &a,
            &c,
            &SamplerConfig {
                samples: 800,
                refine_top: 2,
                seed: 0,
            },
        )
        .unwrap();
        assert_eq!(r.overall(), TheoremVerdict::Pass, "{r:#?}");
    }
}
