//! Human-readable report text.

use std::fmt::Write;
use std::time::Duration;

use simproj::axioms::{ValidationReport, Verdict};
use simproj::prob::MeasureReport;
use simproj::sigma::SigmaReport;
use simproj::similarity::{SimilarityEstimate, TheoremReport, TheoremVerdict};
use simproj::suite::SuiteReport;
use simproj::{Point, SpStructure};

fn label(st: &SpStructure, p: &Option<Point>) -> String {
    p.as_ref().map_or("-".into(), |x| st.label_of(x))
}

pub fn validation(st: &SpStructure, r: &ValidationReport) -> String {
    let mut s = format!("{:?} structure, {:?} check\n", r.kind, r.mode);
    for a in &r.results {
        let verdict = match a.verdict {
            Verdict::Pass => "pass",
            Verdict::SampledPass => "sampled-pass",
            Verdict::Fail => "FAIL",
        };
        let _ = writeln!(
            s,
            "{:16} {:12} checks {:8} max residual {:e}",
            a.axiom.name(),
            verdict,
            a.checks,
            a.max_residual
        );
        if let (Verdict::Fail, Some(w)) = (a.verdict, &a.witness) {
            let set: Vec<String> = w.ortho_set.iter().map(|p| st.label_of(p)).collect();
            let _ = writeln!(
                s,
                "    witness: x = {}, y = {}, z = {}, ortho-set {{{}}}: {} (residual {:e})",
                label(st, &w.x),
                label(st, &w.y),
                label(st, &w.z),
                set.join(", "),
                w.note,
                w.residual
            );
        }
    }
    s
}

pub fn estimate(st: &SpStructure, e: &SimilarityEstimate) -> String {
    let how = if e.is_exact() {
        "exact".to_string()
    } else {
        format!(
            "upper bound from {} samples, seed {}",
            e.samples.unwrap_or(0),
            e.seed.unwrap_or(0)
        )
    };
    format!(
        "s = {} ({how}; attained at {})",
        e.value,
        label(st, &e.witness)
    )
}

fn theorem_verdict(v: TheoremVerdict) -> &'static str {
    match v {
        TheoremVerdict::Pass => "pass",
        TheoremVerdict::FailCertified => "FAIL",
        TheoremVerdict::Inconclusive => "inconclusive",
        TheoremVerdict::Vacuous => "vacuous",
    }
}

pub fn theorems(st: &SpStructure, r: &TheoremReport) -> String {
    let mut s = String::new();
    for (name, e) in [
        ("s(A, B)", &r.s_ab),
        ("s(A, C)", &r.s_ac),
        ("s(B, C)", &r.s_bc),
    ] {
        let _ = writeln!(s, "{name}: {}", estimate(st, e));
    }
    for c in &r.checks {
        let _ = writeln!(
            s,
            "{:14} {:12} margin {:e}  {}",
            c.law,
            theorem_verdict(c.verdict),
            c.margin,
            c.detail
        );
    }
    s
}

pub fn sigma(r: &SigmaReport) -> String {
    let mut s = format!("{} events\n", r.events);
    for c in &r.checks {
        let status = if c.failures == 0 { "pass" } else { "FAIL" };
        let _ = writeln!(
            s,
            "{status:5} {} ({} checked, {} failed)",
            c.law, c.checked, c.failures
        );
        if let Some(w) = &c.witness {
            let _ = writeln!(s, "    witness: {w}");
        }
    }
    s
}

pub fn measure(r: &MeasureReport) -> String {
    let domain = if r.sampled_domain {
        "sampled events"
    } else {
        "field events"
    };
    let mut s = format!("{} {domain}\n", r.events);
    for i in &r.items {
        let _ = writeln!(
            s,
            "{:12} {} ({} checked, {} failed, {} inconclusive, max violation {:e})",
            theorem_verdict(i.verdict),
            i.item,
            i.checked,
            i.failures,
            i.inconclusive,
            i.max_violation
        );
        if let Some(w) = &i.witness {
            let _ = writeln!(s, "    witness: {w}");
        }
    }
    s
}

pub fn suite(r: &SuiteReport, elapsed: Duration) -> String {
    let mut s = format!("suite {} seed {}\n", r.suite, r.seed);
    for c in &r.checks {
        let status = if c.failures > 0 {
            "FAIL"
        } else if c.inconclusive > 0 {
            "open"
        } else {
            "pass"
        };
        let _ = writeln!(
            s,
            "{status:4} {:32} {:6} trials {:5} failed {:4} open  max residual {:.3e}  {}",
            c.id, c.trials, c.failures, c.inconclusive, c.max_residual, c.law
        );
        for w in &c.witnesses {
            let _ = writeln!(s, "       {w}");
        }
    }
    let _ = writeln!(s, "{:?} in {:.2} s", r.verdict(), elapsed.as_secs_f64());
    s
}
