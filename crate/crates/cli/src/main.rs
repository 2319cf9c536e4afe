use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use simproj::axioms::{validate_sp_axioms, ValidationBudget, Verdict};
use simproj::io::{
    field_listing, load_field, load_measure, parse_point, parse_rv, parse_structure,
    parse_subspace, point_literal, read_file, REPORT_VERSION,
};
use simproj::lattice::{
    check_de_morgan, check_orthomodular, distributes, intersect, ortho_complement, sum,
};
use simproj::prob::{measures_equal, mix, pure_state, validate_functional, validate_measure};
use simproj::rv::{
    check_expect_theorem, compatible, expectation, preimage, RealRandomVariable, ValueSet,
};
use simproj::sigma::{atoms, is_boolean, validate_sigma_star};
use simproj::similarity::{
    check_point_continuity, check_similarity_theorems, subspace_similarity, SamplerConfig,
    TheoremVerdict,
};
use simproj::suite::{run_property_suite, SuiteConfig, SuiteVerdict};
use simproj::{SpError, SpStructure, StructureKind, Subspace};

mod render;

/// Similarity-projection structures: validation, lattice operations,
/// similarities, star-fields, measures, random variables and property suites.
///
/// Literal arguments are JSON (`[1, 0]`, `[[1, 0]]`, `"empty"`); bare words
/// are read as point labels or the keywords `empty` and `whole`.
#[derive(Debug, Parser)]
#[command(name = "simproj", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
struct Global {
    /// Emit the JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for every sampled computation; required wherever sampling happens.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Trial count for suites, sample budget for validation.
    #[arg(long, global = true)]
    scale: Option<usize>,
    /// Event cap for star-field generation.
    #[arg(long, global = true)]
    cap: Option<usize>,
    /// Structure file, or `classical:N` / `ray:D`.
    #[arg(long, global = true)]
    structure: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a structure file against the defining axioms.
    Validate { file: PathBuf },
    /// Subspace lattice operations.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// Similarities between points and subspaces.
    #[command(subcommand)]
    Sim(SimCmd),
    /// Star-field generation and checks.
    #[command(subcommand)]
    Sigma(SigmaCmd),
    /// Probability measures.
    #[command(subcommand)]
    Prob(ProbCmd),
    /// Real random variables.
    #[command(subcommand)]
    Rv(RvCmd),
    /// Run a seeded property suite: lattice, similarity, sigma, prob, rv, axioms or all.
    Suite { id: String },
}

#[derive(Debug, Subcommand)]
enum LatticeCmd {
    /// Orthogonal complement `A⊥`.
    Complement { a: String },
    /// Smallest subspace containing `A` and `B`.
    Sum { a: String, b: String },
    /// Intersection `A ∩ B`.
    Meet { a: String, b: String },
    /// Check `C = A ⊕ (A⊥ ∩ C)` for `A ⊆ C`.
    Orthomodular { a: String, c: String },
    /// Check both De Morgan identities.
    DeMorgan { a: String, b: String },
    /// Whether `A ∩ (B ⊕ C) = (A ∩ B) ⊕ (A ∩ C)`.
    Distributes { a: String, b: String, c: String },
}

#[derive(Debug, Subcommand)]
enum SimCmd {
    /// `τ(x, A, B)`.
    Tau { x: String, a: String, b: String },
    /// `s(A, B)`, exact where possible, otherwise a seeded upper bound.
    Subspace {
        a: String,
        b: String,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Slack of the point continuity bound for `x, y, z`.
    Continuity { x: String, y: String, z: String },
    /// Point bound, identity and triangle bound on `A, B, C`.
    Theorems {
        a: String,
        b: String,
        c: String,
        #[arg(long)]
        samples: Option<usize>,
    },
}

#[derive(Debug, Subcommand)]
enum SigmaCmd {
    /// Generate and list the field of a field file.
    Generate { field: PathBuf },
    /// Re-check the closure laws of the generated field.
    Validate { field: PathBuf },
    /// Atoms and atomic decompositions.
    Atoms { field: PathBuf },
    /// Whether the field is Boolean.
    Boolean { field: PathBuf },
}

#[derive(Debug, Subcommand)]
enum ProbCmd {
    /// Probability of an event under the pure state at a point.
    Pure { x: String, event: String },
    /// Probability of an event under a mixture given as `[[w, point], ...]`.
    Mix { components: String, event: String },
    /// Probability of an event under a measure file.
    Evaluate { measure: PathBuf, event: String },
    /// Check the measure axioms on the measure's field (or on seeded events).
    Validate {
        measure: PathBuf,
        /// Events drawn when the measure has no field.
        #[arg(long, default_value_t = 200)]
        events: usize,
    },
    /// Whether two measures agree on every event of a field.
    Equal {
        p: PathBuf,
        q: PathBuf,
        #[arg(long)]
        field: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
enum RvCmd {
    /// Build a variable and list its outcomes and domain basis.
    Make { rv: PathBuf },
    /// Value at a point, or `undefined`.
    Eval { rv: PathBuf, x: String },
    /// Preimage of a value set `{"points": [...], "intervals": [...]}`.
    Preimage { rv: PathBuf, values: String },
    /// Expectation under a measure file.
    Expect { rv: PathBuf, measure: PathBuf },
    /// Pure-state expectation against the domain-basis sum at a point.
    Theorem { rv: PathBuf, x: String },
    /// Whether two variables commute event by event.
    Compatible { x: PathBuf, y: PathBuf },
}

/// Result of a command: exit code, JSON body and text rendering.
struct Outcome {
    code: u8,
    body: Value,
    text: String,
}

impl Outcome {
    fn ok(body: Value, text: String) -> Self {
        Outcome {
            code: 0,
            body,
            text,
        }
    }

    fn check(pass: bool, body: Value, text: String) -> Self {
        Outcome {
            code: if pass { 0 } else { 1 },
            body,
            text,
        }
    }
}

fn theorem_code(v: TheoremVerdict) -> u8 {
    match v {
        TheoremVerdict::Pass | TheoremVerdict::Vacuous => 0,
        TheoremVerdict::FailCertified => 1,
        TheoremVerdict::Inconclusive => 3,
    }
}

fn literal(s: &str) -> Value {
    serde_json::from_str(s).unwrap_or_else(|_| Value::String(s.to_string()))
}

fn structure(g: &Global) -> Result<SpStructure> {
    let given = g
        .structure
        .as_deref()
        .ok_or_else(|| anyhow!("--structure is required for this command"))?;
    let sized = |prefix: &str| -> Option<Result<usize>> {
        given
            .strip_prefix(prefix)
            .map(|n| n.parse().with_context(|| format!("bad size in {given:?}")))
    };
    if let Some(n) = sized("classical:") {
        return Ok(SpStructure::classical(n?)?);
    }
    if let Some(d) = sized("ray:") {
        return Ok(SpStructure::ray(d?)?);
    }
    Ok(parse_structure(&read_file(Path::new(given))?)?)
}

fn subspace(st: &SpStructure, s: &str) -> Result<Subspace> {
    parse_subspace(st, &literal(s)).with_context(|| format!("subspace {s}"))
}

fn sampler(g: &Global, samples: Option<usize>) -> SamplerConfig {
    let mut cfg = SamplerConfig {
        seed: g.seed.unwrap_or(0),
        ..SamplerConfig::default()
    };
    if let Some(n) = samples {
        cfg.samples = n;
    }
    cfg
}

fn need_seed(g: &Global, what: &str) -> Result<u64> {
    g.seed
        .ok_or_else(|| anyhow!("{what} is sampled; pass --seed to make it reproducible"))
}

fn base_dir(p: &Path) -> &Path {
    p.parent().unwrap_or(Path::new("."))
}

fn run(cli: Cli) -> Result<Outcome> {
    let g = &cli.global;
    match cli.command {
        Command::Validate { file } => validate(g, &file),
        Command::Lattice(cmd) => lattice(g, cmd),
        Command::Sim(cmd) => sim(g, cmd),
        Command::Sigma(cmd) => sigma(g, cmd),
        Command::Prob(cmd) => prob(g, cmd),
        Command::Rv(cmd) => rv(g, cmd),
        Command::Suite { id } => suite(g, &id),
    }
}

fn validate(g: &Global, file: &Path) -> Result<Outcome> {
    let st = parse_structure(&read_file(file)?)?;
    let sampled = match st.kind() {
        StructureKind::Ray => true,
        StructureKind::Explicit => st.dimension() > simproj::structure::EXHAUSTIVE_LIMIT,
        StructureKind::Classical => false,
    };
    let budget = ValidationBudget {
        samples: g.scale.unwrap_or(ValidationBudget::default().samples),
        seed: if sampled {
            need_seed(g, "validation of this structure")?
        } else {
            0
        },
    };
    let report = validate_sp_axioms(&st, budget)?;
    let code = match report.overall() {
        Verdict::Pass => 0,
        Verdict::Fail => 1,
        Verdict::SampledPass => 3,
    };
    Ok(Outcome {
        code,
        text: render::validation(&st, &report),
        body: serde_json::to_value(&report)?,
    })
}

fn lattice(g: &Global, cmd: LatticeCmd) -> Result<Outcome> {
    let st = structure(g)?;
    let show = |s: &Subspace| json!({ "subspace": s.to_literal(), "dim": s.dim() });
    Ok(match cmd {
        LatticeCmd::Complement { a } => {
            let r = ortho_complement(&subspace(&st, &a)?);
            Outcome::ok(show(&r), r.describe())
        }
        LatticeCmd::Sum { a, b } => {
            let r = sum(&subspace(&st, &a)?, &subspace(&st, &b)?)?;
            Outcome::ok(show(&r), r.describe())
        }
        LatticeCmd::Meet { a, b } => {
            let r = intersect(&subspace(&st, &a)?, &subspace(&st, &b)?)?;
            Outcome::ok(show(&r), r.describe())
        }
        LatticeCmd::Orthomodular { a, c } => {
            let r = check_orthomodular(&subspace(&st, &a)?, &subspace(&st, &c)?)?;
            let text = if r.vacuous {
                "A is not contained in C; nothing to check".to_string()
            } else {
                format!("holds: {} (residual {:e})", r.holds, r.residual)
            };
            Outcome::check(r.holds, serde_json::to_value(r)?, text)
        }
        LatticeCmd::DeMorgan { a, b } => {
            let r = check_de_morgan(&subspace(&st, &a)?, &subspace(&st, &b)?)?;
            let text = format!(
                "holds: {} (meet {:e}, sum {:e}, cross-check {:e})",
                r.holds, r.meet_residual, r.sum_residual, r.cross_check_residual
            );
            Outcome::check(r.holds, serde_json::to_value(r)?, text)
        }
        LatticeCmd::Distributes { a, b, c } => {
            let r = distributes(
                &subspace(&st, &a)?,
                &subspace(&st, &b)?,
                &subspace(&st, &c)?,
            )?;
            Outcome::ok(json!({ "distributes": r }), format!("distributes: {r}"))
        }
    })
}

fn sim(g: &Global, cmd: SimCmd) -> Result<Outcome> {
    let st = structure(g)?;
    let point = |s: &str| parse_point(&st, &literal(s)).with_context(|| format!("point {s}"));
    Ok(match cmd {
        SimCmd::Tau { x, a, b } => {
            let t = simproj::similarity::tau(
                &st,
                &point(&x)?,
                &subspace(&st, &a)?,
                &subspace(&st, &b)?,
            )?;
            Outcome::ok(json!({ "tau": t }), format!("τ = {t}"))
        }
        SimCmd::Subspace { a, b, samples } => {
            let est = subspace_similarity(
                &subspace(&st, &a)?,
                &subspace(&st, &b)?,
                &sampler(g, samples),
            )?;
            if !est.is_exact() {
                need_seed(g, "this similarity")?;
            }
            let text = render::estimate(&st, &est);
            Outcome::ok(serde_json::to_value(&est)?, text)
        }
        SimCmd::Continuity { x, y, z } => {
            let slack = check_point_continuity(&st, &point(&x)?, &point(&y)?, &point(&z)?)?;
            let holds = slack >= -simproj::linalg::TOL_EQ;
            Outcome::check(
                holds,
                json!({ "holds": holds, "slack": slack }),
                format!("holds: {holds} (right side minus left side {slack})"),
            )
        }
        SimCmd::Theorems { a, b, c, samples } => {
            if st.kind() == StructureKind::Ray {
                need_seed(g, "a ray similarity")?;
            }
            let r = check_similarity_theorems(
                &subspace(&st, &a)?,
                &subspace(&st, &b)?,
                &subspace(&st, &c)?,
                &sampler(g, samples),
            )?;
            Outcome {
                code: theorem_code(r.overall()),
                text: render::theorems(&st, &r),
                body: serde_json::to_value(&r)?,
            }
        }
    })
}

fn sigma(g: &Global, cmd: SigmaCmd) -> Result<Outcome> {
    let st = structure(g)?;
    let field = |p: &Path| load_field(&st, p, g.cap);
    Ok(match cmd {
        SigmaCmd::Generate { field: p } => {
            let f = field(&p)?;
            let meta = f.metadata();
            let body = json!({ "events": field_listing(&f), "metadata": meta });
            let mut text = format!(
                "{} events ({} rounds, {} operations)\n",
                f.len(),
                meta.rounds,
                meta.operations
            );
            for (i, e) in f.events().iter().enumerate() {
                text.push_str(&format!("{i:4}  {}\n", e.describe()));
            }
            Outcome::ok(body, text)
        }
        SigmaCmd::Validate { field: p } => {
            let r = validate_sigma_star(&field(&p)?)?;
            Outcome::check(r.holds(), serde_json::to_value(&r)?, render::sigma(&r))
        }
        SigmaCmd::Atoms { field: p } => {
            let f = field(&p)?;
            let a = atoms(&f)?;
            let mut text = format!("atoms: {:?}\n", a.atoms);
            for (e, parts) in &a.decompositions {
                text.push_str(&format!("{e:4} = {parts:?}\n"));
            }
            Outcome::ok(serde_json::to_value(&a)?, text)
        }
        SigmaCmd::Boolean { field: p } => {
            let b = is_boolean(&field(&p)?)?;
            let text = match b.witness {
                Some([x, y, z]) => {
                    format!("Boolean: false (events {x}, {y}, {z} do not distribute)")
                }
                None => "Boolean: true".to_string(),
            };
            Outcome::ok(serde_json::to_value(b)?, text)
        }
    })
}

fn prob(g: &Global, cmd: ProbCmd) -> Result<Outcome> {
    let st = structure(g)?;
    let measure =
        |p: &Path| -> Result<_> { Ok(load_measure(&st, &read_file(p)?, base_dir(p), g.cap)?) };
    let value = |v: f64| Outcome::ok(json!({ "probability": v }), format!("p = {v}"));
    Ok(match cmd {
        ProbCmd::Pure { x, event } => {
            let p = pure_state(&st, &parse_point(&st, &literal(&x))?)?;
            value(p.evaluate(&subspace(&st, &event)?)?)
        }
        ProbCmd::Mix { components, event } => {
            let parts: Vec<(f64, Value)> = serde_json::from_value(literal(&components))
                .context("components must be [[weight, point], ...]")?;
            let parts = parts
                .iter()
                .map(|(w, x)| Ok((*w, pure_state(&st, &parse_point(&st, x)?)?)))
                .collect::<Result<Vec<_>>>()?;
            value(mix(parts)?.evaluate(&subspace(&st, &event)?)?)
        }
        ProbCmd::Evaluate { measure: m, event } => {
            value(measure(&m)?.evaluate(&subspace(&st, &event)?)?)
        }
        ProbCmd::Validate { measure: m, events } => {
            let p = measure(&m)?;
            let report = match p.field().cloned() {
                Some(f) => {
                    if st.kind() == StructureKind::Ray {
                        need_seed(g, "validation on a ray field")?;
                    }
                    validate_measure(&p, &f, &sampler(g, None))?
                }
                None => {
                    need_seed(g, "validation without a field")?;
                    validate_functional(&p, events, &sampler(g, None))?
                }
            };
            Outcome {
                code: theorem_code(report.verdict()),
                text: render::measure(&report),
                body: serde_json::to_value(&report)?,
            }
        }
        ProbCmd::Equal { p, q, field } => {
            let f = Arc::new(load_field(&st, &field, g.cap)?);
            let r = measures_equal(&measure(&p)?, &measure(&q)?, f.events())?;
            let text = format!(
                "equal: {} over {} events (max difference {:e}){}",
                r.equal,
                r.scanned,
                r.max_difference,
                r.witness
                    .as_ref()
                    .map(|w| format!(", first difference at {w}"))
                    .unwrap_or_default()
            );
            Outcome::check(r.equal, serde_json::to_value(&r)?, text)
        }
    })
}

fn rv(g: &Global, cmd: RvCmd) -> Result<Outcome> {
    let st = structure(g)?;
    let load = |p: &Path| -> Result<RealRandomVariable> { Ok(parse_rv(&st, &read_file(p)?)?) };
    let point = |s: &str| parse_point(&st, &literal(s)).with_context(|| format!("point {s}"));
    Ok(match cmd {
        RvCmd::Make { rv } => {
            let x = load(&rv)?;
            let outcomes: Vec<Value> = x
                .outcomes()
                .iter()
                .map(|(r, e)| json!({ "value": r, "event": e.to_literal() }))
                .collect();
            let basis: Vec<Value> = x
                .domain_basis()
                .iter()
                .map(|(r, p)| json!({ "value": r, "point": point_literal(&st, p) }))
                .collect();
            let mut text = String::new();
            for (r, e) in x.outcomes() {
                text.push_str(&format!("{r} on {}\n", e.describe()));
            }
            text.push_str(&format!("total: {}", x.is_total()));
            Outcome::ok(
                json!({ "outcomes": outcomes, "domain_basis": basis, "total": x.is_total() }),
                text,
            )
        }
        RvCmd::Eval { rv, x } => match load(&rv)?.eval_at_point(&point(&x)?) {
            Ok(v) => Outcome::ok(json!({ "value": v }), format!("X = {v}")),
            Err(SpError::ValueUndefinedAtPoint) => {
                Outcome::ok(json!({ "value": null }), "undefined".to_string())
            }
            Err(e) => return Err(e.into()),
        },
        RvCmd::Preimage { rv, values } => {
            let set: ValueSet = serde_json::from_value(literal(&values))
                .context("value set must be {\"points\": [...], \"intervals\": [...]}")?;
            let e = preimage(&load(&rv)?, &set)?;
            Outcome::ok(
                json!({ "subspace": e.to_literal(), "dim": e.dim() }),
                e.describe(),
            )
        }
        RvCmd::Expect { rv, measure } => {
            let p = load_measure(&st, &read_file(&measure)?, base_dir(&measure), g.cap)?;
            let e = expectation(&load(&rv)?, &p)?;
            let text = format!("E = {}", e.value);
            Outcome::ok(serde_json::to_value(&e)?, text)
        }
        RvCmd::Theorem { rv, x } => {
            let r = check_expect_theorem(&load(&rv)?, &point(&x)?)?;
            let holds = r.residual.abs() <= simproj::linalg::TOL_EQ;
            Outcome::check(
                holds,
                serde_json::to_value(r)?,
                format!(
                    "by events {}, by basis {}, residual {:e}",
                    r.by_events, r.by_basis, r.residual
                ),
            )
        }
        RvCmd::Compatible { x, y } => {
            let c = compatible(&load(&x)?, &load(&y)?)?;
            let text = match c.witness {
                Some((i, j)) => format!("compatible: false (outcome {i} against outcome {j})"),
                None => "compatible: true".to_string(),
            };
            Outcome::ok(serde_json::to_value(&c)?, text)
        }
    })
}

fn suite(g: &Global, id: &str) -> Result<Outcome> {
    let seed = need_seed(g, "a property suite")?;
    let start = Instant::now();
    let report = run_property_suite(
        id,
        &SuiteConfig {
            seed,
            scale: g.scale,
        },
    )?;
    let code = match report.verdict() {
        SuiteVerdict::Pass => 0,
        SuiteVerdict::Fail => 1,
        SuiteVerdict::Inconclusive => 3,
    };
    Ok(Outcome {
        code,
        text: render::suite(&report, start.elapsed()),
        body: serde_json::to_value(&report)?,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.global.json;
    match run(cli) {
        Ok(out) => {
            if json {
                let mut body = out.body;
                if let Value::Object(map) = &mut body {
                    map.entry("report_version").or_insert(json!(REPORT_VERSION));
                }
                println!(
                    "{}",
                    serde_json::to_string_pretty(&body).expect("serializable")
                );
            } else {
                println!("{}", out.text.trim_end());
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
