//! σ*-fields: families of subspaces closed under complement, orthogonal sums
//! and intersections.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Result, SpError};
use crate::lattice::{
    check_orthomodular, distributes, intersect, is_orthogonal, ortho_complement, sum,
};
use crate::structure::SpStructure;
use crate::subspace::Subspace;

pub const DEFAULT_CAP: usize = 4096;

/// Largest field on which [`is_boolean`] enumerates triples.
pub const TRIPLE_LIMIT: usize = 512;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ClosureMetadata {
    pub rounds: usize,
    /// Lattice operations evaluated during closure.
    pub operations: usize,
    pub capped: bool,
}

/// A finite family of events, kept in canonical order so indices are stable.
#[derive(Debug, Clone)]
pub struct SigmaStarField {
    structure: SpStructure,
    events: Vec<Subspace>,
    generators: Vec<Subspace>,
    metadata: ClosureMetadata,
    index: HashMap<Vec<i64>, usize>,
}

/// Deduplicating event store used during closure.
struct Store {
    events: Vec<Subspace>,
    keys: HashMap<Vec<i64>, usize>,
}

impl Store {
    fn find(&self, s: &Subspace) -> Option<usize> {
        if let Some(&i) = self.keys.get(&s.canonical_key()) {
            return Some(i);
        }
        // rounding can split equal projectors across keys
        self.events
            .iter()
            .position(|e| e.dim() == s.dim() && e.equals(s))
    }

    fn insert(&mut self, s: Subspace) -> bool {
        if self.find(&s).is_some() {
            return false;
        }
        self.keys.insert(s.canonical_key(), self.events.len());
        self.events.push(s);
        true
    }
}

impl SigmaStarField {
    /// Wraps an arbitrary family (deduplicated and sorted) without closing it.
    pub fn from_events(st: &SpStructure, events: Vec<Subspace>) -> Result<Self> {
        for e in &events {
            st.same_structure(e.structure())?;
        }
        Ok(Self::finish(
            st,
            events,
            Vec::new(),
            ClosureMetadata::default(),
        ))
    }

    fn finish(
        st: &SpStructure,
        events: Vec<Subspace>,
        generators: Vec<Subspace>,
        metadata: ClosureMetadata,
    ) -> Self {
        let mut store = Store {
            events: Vec::new(),
            keys: HashMap::new(),
        };
        for e in events {
            store.insert(e);
        }
        let mut events = store.events;
        events.sort_by(|a, b| a.canonical_cmp(b));
        let index = events
            .iter()
            .enumerate()
            .map(|(i, e)| (e.canonical_key(), i))
            .collect();
        SigmaStarField {
            structure: st.clone(),
            events,
            generators,
            metadata,
            index,
        }
    }

    pub fn structure(&self) -> &SpStructure {
        &self.structure
    }

    pub fn events(&self) -> &[Subspace] {
        &self.events
    }

    pub fn generators(&self) -> &[Subspace] {
        &self.generators
    }

    pub fn metadata(&self) -> ClosureMetadata {
        self.metadata
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Index of the member equal to `s`.
    pub fn index_of(&self, s: &Subspace) -> Option<usize> {
        if s.structure() != &self.structure {
            return None;
        }
        if let Some(&i) = self.index.get(&s.canonical_key()) {
            return Some(i);
        }
        self.events
            .iter()
            .position(|e| e.dim() == s.dim() && e.equals(s))
    }

    pub fn contains(&self, s: &Subspace) -> bool {
        self.index_of(s).is_some()
    }
}

/// Closes `generators ∪ {∅}` under complement, orthogonal sum and intersection.
///
/// Always returns the family reached; when more than `cap` events appear the
/// closure stops and `metadata.capped` is set.
pub fn close_family(
    st: &SpStructure,
    generators: &[Subspace],
    cap: usize,
) -> Result<SigmaStarField> {
    for g in generators {
        st.same_structure(g.structure())?;
    }
    let mut store = Store {
        events: Vec::new(),
        keys: HashMap::new(),
    };
    let mut meta = ClosureMetadata::default();
    store.insert(st.empty_subspace());
    for g in generators {
        store.insert(g.clone());
    }
    // events[done..] are new since the last round
    let mut done = 0;
    'rounds: while done < store.events.len() {
        meta.rounds += 1;
        let frontier_end = store.events.len();
        let mut found = Vec::new();
        for i in done..frontier_end {
            found.push(ortho_complement(&store.events[i]));
            meta.operations += 1;
            for j in 0..frontier_end {
                if j >= done && j > i {
                    continue;
                }
                let (a, b) = (&store.events[i], &store.events[j]);
                if is_orthogonal(a, b) {
                    found.push(sum(a, b)?);
                    meta.operations += 1;
                }
                found.push(intersect(a, b)?);
                meta.operations += 1;
            }
        }
        done = frontier_end;
        for e in found {
            if store.insert(e) && store.events.len() > cap {
                meta.capped = true;
                break 'rounds;
            }
        }
    }
    Ok(SigmaStarField::finish(
        st,
        store.events,
        generators.to_vec(),
        meta,
    ))
}

/// The least σ*-field containing `generators`, or `ClosureCapExceeded`.
pub fn generate_sigma_star(
    st: &SpStructure,
    generators: &[Subspace],
    cap: usize,
) -> Result<SigmaStarField> {
    let f = close_family(st, generators, cap)?;
    if f.metadata.capped {
        return Err(SpError::ClosureCapExceeded { cap });
    }
    Ok(f)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LawCheck {
    pub law: &'static str,
    pub checked: usize,
    pub failures: usize,
    /// First failure: event indices involved and the missing or offending event.
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SigmaReport {
    pub events: usize,
    pub checks: Vec<LawCheck>,
}

impl SigmaReport {
    pub fn holds(&self) -> bool {
        self.checks.iter().all(|c| c.failures == 0)
    }
}

struct LawTally(LawCheck);

impl LawTally {
    fn new(law: &'static str) -> Self {
        LawTally(LawCheck {
            law,
            checked: 0,
            failures: 0,
            witness: None,
        })
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.0.checked += 1;
        if !ok {
            self.0.failures += 1;
            if self.0.witness.is_none() {
                self.0.witness = Some(witness());
            }
        }
    }
}

/// Re-checks every closure property and the bounded orthomodular lattice laws by direct scan.
pub fn validate_sigma_star(f: &SigmaStarField) -> Result<SigmaReport> {
    let st = &f.structure;
    let ev = &f.events;
    let mut bounds = LawTally::new("contains empty set and whole space");
    bounds.record(f.contains(&st.empty_subspace()), || "missing ∅".into());
    bounds.record(f.contains(&st.whole_space()), || "missing Ω".into());

    let mut complement = LawTally::new("closed under complement");
    let mut involution = LawTally::new("complement is an involution");
    let mut complemented = LawTally::new("A ∩ A⊥ = ∅ and A ⊕ A⊥ = Ω");
    for (i, a) in ev.iter().enumerate() {
        let c = ortho_complement(a);
        complement.record(f.contains(&c), || {
            format!("event {i}: complement {} missing", c.describe())
        });
        involution.record(ortho_complement(&c).equals(a), || format!("event {i}"));
        let ok = intersect(a, &c)?.is_empty() && sum(a, &c)?.is_whole();
        complemented.record(ok, || format!("event {i}"));
    }

    let mut sums = LawTally::new("closed under orthogonal sums");
    let mut meets = LawTally::new("closed under intersections");
    let mut orthomodular = LawTally::new("orthomodular law on nested members");
    for (i, a) in ev.iter().enumerate() {
        for (j, b) in ev.iter().enumerate().skip(i) {
            if is_orthogonal(a, b) {
                let s = sum(a, b)?;
                sums.record(f.contains(&s), || {
                    format!("events {i}, {j}: sum {} missing", s.describe())
                });
            }
            let m = intersect(a, b)?;
            meets.record(f.contains(&m), || {
                format!("events {i}, {j}: intersection {} missing", m.describe())
            });
        }
        for (j, c) in ev.iter().enumerate() {
            if i != j && a.is_subset_of(c) {
                let r = check_orthomodular(a, c)?;
                orthomodular.record(r.holds, || {
                    format!("events {i} ⊆ {j}, residual {}", r.residual)
                });
            }
        }
    }

    Ok(SigmaReport {
        events: ev.len(),
        checks: [
            bounds,
            complement,
            involution,
            complemented,
            sums,
            meets,
            orthomodular,
        ]
        .into_iter()
        .map(|t| t.0)
        .collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Atoms {
    /// Event indices of the atoms.
    pub atoms: Vec<usize>,
    /// Events written as sums of pairwise-orthogonal atoms: (event, atom event indices).
    pub decompositions: Vec<(usize, Vec<usize>)>,
}

/// Minimal non-empty events, and atomic decompositions where they exist.
pub fn atoms(f: &SigmaStarField) -> Result<Atoms> {
    let ev = &f.events;
    let atoms: Vec<usize> = (0..ev.len())
        .filter(|&i| {
            !ev[i].is_empty()
                && !ev.iter().enumerate().any(|(j, e)| {
                    j != i && !e.is_empty() && e.dim() < ev[i].dim() && e.is_subset_of(&ev[i])
                })
        })
        .collect();

    let mut decompositions = Vec::new();
    for (i, e) in ev.iter().enumerate() {
        if e.is_empty() {
            continue;
        }
        let inside: Vec<usize> = atoms
            .iter()
            .copied()
            .filter(|&a| ev[a].is_subset_of(e))
            .collect();
        let mut chosen = Vec::new();
        if decompose(f, e, &inside, 0, 0, &mut chosen)? {
            decompositions.push((i, chosen));
        }
    }
    Ok(Atoms {
        atoms,
        decompositions,
    })
}

/// Depth-first search for pairwise-orthogonal atoms whose dimensions add up to `target`'s.
fn decompose(
    f: &SigmaStarField,
    target: &Subspace,
    inside: &[usize],
    from: usize,
    dim: usize,
    chosen: &mut Vec<usize>,
) -> Result<bool> {
    if dim == target.dim() {
        let parts: Vec<Subspace> = chosen.iter().map(|&a| f.events[a].clone()).collect();
        return Ok(crate::lattice::sum_all(&f.structure, &parts)?.equals(target));
    }
    for k in from..inside.len() {
        let a = &f.events[inside[k]];
        if dim + a.dim() > target.dim() || !chosen.iter().all(|&c| is_orthogonal(&f.events[c], a)) {
            continue;
        }
        chosen.push(inside[k]);
        if decompose(f, target, inside, k + 1, dim + a.dim(), chosen)? {
            return Ok(true);
        }
        chosen.pop();
    }
    Ok(false)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BooleanCheck {
    pub boolean: bool,
    /// Event indices `(a, b, c)` with `a ∩ (b ⊕ c) != (a ∩ b) ⊕ (a ∩ c)`.
    pub witness: Option<[usize; 3]>,
}

/// Whether every member triple distributes.
pub fn is_boolean(f: &SigmaStarField) -> Result<BooleanCheck> {
    let n = f.events.len();
    if n > TRIPLE_LIMIT {
        return Err(SpError::TripleEnumerationTooLarge {
            events: n,
            limit: TRIPLE_LIMIT,
        });
    }
    let ev = &f.events;
    let per_a: Vec<Result<Option<[usize; 3]>>> = (0..n)
        .into_par_iter()
        .map(|a| {
            for b in 0..n {
                for c in b..n {
                    if !distributes(&ev[a], &ev[b], &ev[c])? {
                        return Ok(Some([a, b, c]));
                    }
                }
            }
            Ok(None)
        })
        .collect();
    for r in per_a {
        if let Some(w) = r? {
            return Ok(BooleanCheck {
                boolean: false,
                witness: Some(w),
            });
        }
    }
    Ok(BooleanCheck {
        boolean: true,
        witness: None,
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
    fn single_line_generates_four_events() {
        let st = SpStructure::ray(2).unwrap();
        let f = generate_sigma_star(&st, &[line(&st, 0.0)], DEFAULT_CAP).unwrap();
        assert_eq!(f.len(), 4);
        assert!(validate_sigma_star(&f).unwrap().holds());
        let a = atoms(&f).unwrap();
        assert_eq!(a.atoms.len(), 2);
        assert!(is_boolean(&f).unwrap().boolean);
    }

    #[test]
    fn empty_generators_give_trivial_field() {
        let st = SpStructure::ray(3).unwrap();
        let f = generate_sigma_star(&st, &[], DEFAULT_CAP).unwrap();
        assert_eq!(f.len(), 2);
        let a = atoms(&f).unwrap();
        assert_eq!(a.atoms.len(), 1);
        assert!(f.events()[a.atoms[0]].is_whole());
    }

    #[test]
    fn classical_singletons_generate_powerset() {
        let st = SpStructure::classical(4).unwrap();
        let gens: Vec<Subspace> = (0..4)
            .map(|i| Subspace::from_points(st.clone(), &[i]).unwrap())
            .collect();
        let f = generate_sigma_star(&st, &gens, DEFAULT_CAP).unwrap();
        assert_eq!(f.len(), 16);
        assert!(is_boolean(&f).unwrap().boolean);
        let a = atoms(&f).unwrap();
        assert_eq!(a.atoms.len(), 4);
        assert_eq!(a.decompositions.len(), 15);
    }

    #[test]
    fn two_skew_lines_are_not_boolean() {
        let st = SpStructure::ray(2).unwrap();
        let f = generate_sigma_star(&st, &[line(&st, 0.0), line(&st, 45.0)], DEFAULT_CAP).unwrap();
        assert_eq!(f.len(), 6);
        let b = is_boolean(&f).unwrap();
        assert!(!b.boolean);
        let [a, x, y] = b.witness.unwrap();
        let ev = f.events();
        assert!(!distributes(&ev[a], &ev[x], &ev[y]).unwrap());
    }

    #[test]
    fn missing_complement_is_reported() {
        let st = SpStructure::ray(2).unwrap();
        let f = SigmaStarField::from_events(
            &st,
            vec![st.empty_subspace(), st.whole_space(), line(&st, 0.0)],
        )
        .unwrap();
        let r = validate_sigma_star(&f).unwrap();
        assert!(!r.holds());
        let c = r
            .checks
            .iter()
            .find(|c| c.law == "closed under complement")
            .unwrap();
        assert_eq!(c.failures, 1);
    }

    #[test]
    fn cap_is_enforced() {
        let st = SpStructure::classical(6).unwrap();
        let gens: Vec<Subspace> = (0..6)
            .map(|i| Subspace::from_points(st.clone(), &[i]).unwrap())
            .collect();
        assert_eq!(
            generate_sigma_star(&st, &gens, 10).unwrap_err(),
            SpError::ClosureCapExceeded { cap: 10 }
        );
        assert!(close_family(&st, &gens, 10).unwrap().metadata().capped);
    }
}
