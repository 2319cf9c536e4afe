//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Failures traced to the point continuity counterexample are reported as
//! FAIL but do not fail the target; any other failure does.

use std::path::PathBuf;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use simproj::lattice::{check_orthomodular, distributes, intersect, ortho_complement, sum};
use simproj::prob::pure_state;
use simproj::sigma::{atoms, generate_sigma_star, is_boolean};
use simproj::similarity::{
    check_point_continuity, continuity_slack, subspace_similarity, SamplerConfig,
};
use simproj::suite::{run_property_suite, CheckRecord, SuiteConfig, SuiteReport};
use simproj::{Point, SpStructure, Subspace};

const SEED: u64 = 42;
const TOL_EQ: f64 = 1e-9;
const TOL_WEIGHT: f64 = 1e-12;

/// Checks that fail because the point continuity bound is false for rays.
const CONTINUITY_CHECKS: [&str; 3] = [
    "similarity.continuity-points",
    "prob.pure-plane",
    "prob.pure-space",
];

struct Problem {
    text: String,
    continuity: bool,
}

#[derive(Default)]
struct Findings(Vec<Problem>);

impl Findings {
    fn fail(&mut self, text: impl Into<String>) {
        self.0.push(Problem {
            text: text.into(),
            continuity: false,
        });
    }

    fn require(&mut self, ok: bool, text: impl FnOnce() -> String) {
        if !ok {
            self.fail(text());
        }
    }

    /// A suite check must exist, pass, and satisfy `extra`.
    fn check(
        &mut self,
        r: &SuiteReport,
        id: &str,
        extra: impl FnOnce(&CheckRecord) -> Result<(), String>,
    ) {
        let Some(c) = r.check(id) else {
            self.fail(format!("{id}: missing from the {} report", r.suite));
            return;
        };
        if c.failures > 0 || c.inconclusive > 0 {
            let text = format!(
                "{id}: {} of {} trials failed, {} open, max residual {:.3e}",
                c.failures, c.trials, c.inconclusive, c.max_residual
            );
            let traced = CONTINUITY_CHECKS.contains(&id)
                && c.inconclusive == 0
                && c.witnesses.iter().all(|w| {
                    id == "similarity.continuity-points" || w.contains("continuity bound (")
                });
            self.0.push(Problem {
                text,
                continuity: traced,
            });
            return;
        }
        if let Err(e) = extra(c) {
            self.fail(format!("{id}: {e}"));
        }
    }

    fn checks(&mut self, r: &SuiteReport, ids: &[&str]) {
        for id in ids {
            self.check(r, id, |_| Ok(()));
        }
    }
}

fn trials(n: u64) -> impl FnOnce(&CheckRecord) -> Result<(), String> {
    move |c| {
        if c.trials == n {
            Ok(())
        } else {
            Err(format!("{} trials, expected {n}", c.trials))
        }
    }
}

fn residual_within(limit: f64) -> impl FnOnce(&CheckRecord) -> Result<(), String> {
    move |c| {
        if c.max_residual <= limit {
            Ok(())
        } else {
            Err(format!("max residual {:e} above {limit:e}", c.max_residual))
        }
    }
}

struct Suites {
    reports: Vec<(SuiteReport, Duration)>,
}

impl Suites {
    fn run() -> Self {
        let reports = simproj::suite::SUITES
            .iter()
            .map(|id| {
                let start = Instant::now();
                let r = run_property_suite(
                    id,
                    &SuiteConfig {
                        seed: SEED,
                        scale: None,
                    },
                )
                .expect("known suite");
                (r, start.elapsed())
            })
            .collect();
        Suites { reports }
    }

    fn get(&self, id: &str) -> (&SuiteReport, Duration) {
        let (r, t) = self
            .reports
            .iter()
            .find(|(r, _)| r.suite == id)
            .expect("suite was run");
        (r, *t)
    }
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn simproj(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_simproj"))
        .args(args)
        .output()
        .expect("spawn simproj")
}

fn line(st: &SpStructure, deg: f64) -> Subspace {
    let t = deg.to_radians();
    st.subspace_from_vectors(&[vec![t.cos(), t.sin()]]).unwrap()
}

/// x = (1, 0), y with sin = 1/4, z at 135° + y/2: the bound undershoots by exactly 1/16.
///
/// s(x, y) = 15/16 gives slack 1/2 * 1/4 + 1/16 = 3/16, while
/// s(z, x) - s(z, y) = sin(y) = 1/4. The same numbers arise for the pure state
/// at z on the events span{x} and span{y}.
fn continuity_counterexample() -> Result<String, String> {
    let st = SpStructure::ray(2).unwrap();
    let y_deg = 0.25f64.asin().to_degrees();
    let z_deg = 135.0 + y_deg / 2.0;
    let at = |deg: f64| {
        let t = deg.to_radians();
        Point::ray(&[t.cos(), t.sin()]).unwrap()
    };
    let (x, y, z) = (at(0.0), at(y_deg), at(z_deg));
    let points = check_point_continuity(&st, &x, &y, &z).map_err(|e| e.to_string())?;

    let (a, b) = (line(&st, 0.0), line(&st, y_deg));
    let p = pure_state(&st, &z).map_err(|e| e.to_string())?;
    let sab = subspace_similarity(&a, &b, &SamplerConfig::default()).map_err(|e| e.to_string())?;
    if !sab.is_exact() {
        return Err("similarity of two lines was not computed exactly".into());
    }
    let gap =
        p.evaluate(&a).map_err(|e| e.to_string())? - p.evaluate(&b).map_err(|e| e.to_string())?;
    let measure = continuity_slack(sab.value) - gap;

    for (what, got) in [("points", points), ("pure state", measure)] {
        if (got + 1.0 / 16.0).abs() > 1e-12 {
            return Err(format!("{what}: residual {got}, expected -1/16"));
        }
    }
    Ok(format!(
        "x at 0°, y at {y_deg:.4}°, z at {z_deg:.4}°: bound short by {:.6} for points and pure states",
        -points
    ))
}

fn lattice_laws(s: &Suites, f: &mut Findings) {
    let (r, t) = s.get("lattice");
    for id in [
        "lattice.complement-sum",
        "lattice.complement-meet",
        "lattice.double-complement",
        "lattice.orthomodular",
        "lattice.de-morgan",
    ] {
        f.check(r, id, |c| {
            trials(800)(c)?;
            residual_within(TOL_EQ)(c)
        });
    }
    f.check(r, "classical.complement", trials(16));
    for id in [
        "classical.union",
        "classical.intersection",
        "classical.de-morgan",
        "classical.orthomodular",
    ] {
        f.check(r, id, trials(256));
    }
    f.require(t < Duration::from_secs(10), || {
        format!("lattice suite took {t:?}")
    });
}

fn non_distributive(s: &Suites, f: &mut Findings) {
    let (r, _) = s.get("lattice");
    f.checks(
        r,
        &["lattice.non-distributive", "lattice.planar-orthomodular"],
    );

    let st = SpStructure::ray(2).unwrap();
    let [a, b, c] = [0.0, 60.0, 120.0].map(|d| line(&st, d));
    f.require(!distributes(&a, &b, &c).unwrap(), || {
        "lines at 0°, 60°, 120° distribute".into()
    });
    let whole = sum(&b, &c).unwrap();
    let lhs = intersect(&a, &whole).unwrap();
    f.require(lhs.equals(&a), || "A ∩ (B ⊕ C) should be A".into());
    for (inner, outer) in [(&a, &whole), (&b, &whole), (&st.empty_subspace(), &c)] {
        f.require(check_orthomodular(inner, outer).unwrap().holds, || {
            "orthomodular law fails among the planar lines".into()
        });
    }
    let ac = ortho_complement(&a);
    f.require(check_orthomodular(&ac, &whole).unwrap().holds, || {
        "orthomodular law fails for a complement".into()
    });
}

fn similarity_theorems(s: &Suites, f: &mut Findings) {
    let (r, t) = s.get("similarity");
    f.check(r, "similarity.singleton", residual_within(TOL_EQ));
    f.check(r, "classical.similarity-oracle", trials(256));
    for id in [
        "classical.point-bound",
        "classical.identity",
        "classical.triangle",
    ] {
        f.check(r, id, trials(4096));
    }
    f.check(r, "similarity.line-pairs", trials(200));
    f.check(r, "similarity.continuity-points", trials(10_000));
    f.check(r, "classical.continuity-points", |_| Ok(()));
    f.require(t < Duration::from_secs(20), || {
        format!("similarity suite took {t:?}")
    });
}

fn sigma_generation(s: &Suites, f: &mut Findings) {
    let (r, _) = s.get("sigma");
    f.checks(
        r,
        &[
            "classical.powerset",
            "sigma.single-line",
            "sigma.idempotent",
            "sigma.rescan",
        ],
    );

    let c4 = SpStructure::classical(4).unwrap();
    let singletons: Vec<Subspace> = (0..4)
        .map(|i| Subspace::from_points(c4.clone(), &[i]).unwrap())
        .collect();
    let field = generate_sigma_star(&c4, &singletons, 4096).unwrap();
    f.require(field.len() == 16, || {
        format!("{} events from singletons", field.len())
    });
    f.require(is_boolean(&field).unwrap().boolean, || {
        "powerset not Boolean".into()
    });
    let n_atoms = atoms(&field).unwrap().atoms.len();
    f.require(n_atoms == 4, || format!("{n_atoms} atoms"));

    let plane = SpStructure::ray(2).unwrap();
    let one = generate_sigma_star(&plane, &[line(&plane, 30.0)], 4096).unwrap();
    f.require(one.len() == 4, || {
        format!("{} events from one line", one.len())
    });
}

fn measure_axioms(s: &Suites, f: &mut Findings) {
    let (r, _) = s.get("prob");
    f.checks(
        r,
        &[
            "prob.pure-finite",
            "prob.pure-plane",
            "prob.pure-space",
            "prob.additivity-rejected",
            "prob.mixed-additive",
        ],
    );
    f.check(r, "prob.mixing-affine", residual_within(0.0));
}

fn non_freeness(s: &Suites, f: &mut Findings) {
    let (r, _) = s.get("prob");
    f.check(r, "prob.non-freeness-field", residual_within(TOL_WEIGHT));
    f.check(r, "prob.non-freeness-lines", |c| {
        trials(1000)(c)?;
        residual_within(TOL_WEIGHT)(c)
    });
}

fn expectation(s: &Suites, f: &mut Findings) {
    let (r, _) = s.get("rv");
    f.check(r, "rv.expectation-identity", |c| {
        trials(500)(c)?;
        residual_within(TOL_EQ)(c)
    });
    f.check(r, "classical.expectation-identity", residual_within(TOL_EQ));
    f.check(r, "rv.die", |_| Ok(()));

    let out = simproj(&[
        "--structure",
        &fixture("classical6.json"),
        "--json",
        "rv",
        "expect",
        &fixture("die.json"),
        &fixture("fair_die.json"),
    ]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap_or_default();
    f.require(v["value"] == 3.5, || {
        format!("CLI die expectation {}", v["value"])
    });
}

fn validator(s: &Suites, f: &mut Findings) {
    let (r, _) = s.get("axioms");
    f.checks(r, &["classical.axioms", "axioms.half-matrix"]);
    f.check(r, "axioms.ray-sampled", residual_within(TOL_EQ));

    let good = simproj(&["validate", &fixture("classical4.json")]);
    f.require(good.status.code() == Some(0), || {
        format!("classical fixture exited {:?}", good.status.code())
    });
    let bad = simproj(&["validate", &fixture("bad3x3.json")]);
    let text = String::from_utf8_lossy(&bad.stdout);
    let flagged = text
        .lines()
        .any(|l| l.starts_with("o-projection") && l.contains("FAIL"));
    f.require(
        bad.status.code() == Some(1) && flagged && text.contains("witness:"),
        || format!("half-matrix fixture exited {:?}", bad.status.code()),
    );
    let ray = simproj(&["--seed", "42", "validate", &fixture("plane.json")]);
    f.require(ray.status.code() == Some(3), || {
        format!("ray spot-check exited {:?}", ray.status.code())
    });
}

fn classical_reduction(s: &Suites, f: &mut Findings) {
    let lattice = s.get("lattice").0;
    f.checks(
        lattice,
        &[
            "classical.complement",
            "classical.union",
            "classical.intersection",
        ],
    );
    f.checks(s.get("similarity").0, &["classical.similarity-oracle"]);
    f.checks(s.get("sigma").0, &["classical.powerset", "classical.atoms"]);
    f.checks(s.get("prob").0, &["classical.measures"]);
    f.checks(
        s.get("rv").0,
        &["classical.rv-total", "classical.expectation-identity"],
    );
    f.checks(s.get("axioms").0, &["classical.axioms"]);
}

fn determinism(_: &Suites, f: &mut Findings) {
    let mut runs = Vec::new();
    for _ in 0..2 {
        let start = Instant::now();
        let out = simproj(&["suite", "all", "--seed", "42", "--json"]);
        let t = start.elapsed();
        f.require(t < Duration::from_secs(60), || {
            format!("suite all took {t:?}")
        });
        f.require(matches!(out.status.code(), Some(0 | 1)), || {
            format!("suite all exited {:?}", out.status.code())
        });
        runs.push(out.stdout);
    }
    f.require(!runs[0].is_empty() && runs[0] == runs[1], || {
        "the two JSON reports differ".into()
    });
}

type Criterion = (&'static str, fn(&Suites, &mut Findings));

const CRITERIA: [Criterion; 10] = [
    (
        "lattice laws, ray d = 2..5 and classical n = 4",
        lattice_laws,
    ),
    (
        "coplanar lines do not distribute, orthomodularity holds",
        non_distributive,
    ),
    (
        "similarity bounds and sampled line pairs",
        similarity_theorems,
    ),
    ("star-field generation", sigma_generation),
    (
        "measure axioms, additivity rejection, affine mixing",
        measure_axioms,
    ),
    ("two bases give the same mixed state", non_freeness),
    ("expectation identity and the fair die", expectation),
    ("structure validator", validator),
    ("classical probability is recovered", classical_reduction),
    ("suite reports are reproducible", determinism),
];

fn main() {
    let start = Instant::now();
    let suites = Suites::run();
    let counterexample = continuity_counterexample();

    let mut passed = 0;
    let mut unexplained = 0;
    for (i, (title, run)) in CRITERIA.iter().enumerate() {
        let mut f = Findings::default();
        run(&suites, &mut f);
        let status = if f.0.is_empty() { "PASS" } else { "FAIL" };
        println!("criterion {:2}  {status}  {title}", i + 1);
        passed += usize::from(f.0.is_empty());
        for p in &f.0 {
            let explained = p.continuity && counterexample.is_ok();
            unexplained += usize::from(!explained);
            let note = if explained {
                "  [point continuity bound is false on rays]"
            } else {
                ""
            };
            println!("    - {}{note}", p.text);
        }
    }
    match &counterexample {
        Ok(msg) => println!("continuity counterexample: {msg}"),
        Err(e) => {
            println!("continuity counterexample did not reproduce: {e}");
        }
    }
    println!(
        "{passed} of {} criteria pass, {unexplained} unexplained failures ({:.1} s)",
        CRITERIA.len(),
        start.elapsed().as_secs_f64()
    );
    if unexplained > 0 {
        std::process::exit(1);
    }
}
