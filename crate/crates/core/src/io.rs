//! JSON input formats for structures, points, subspaces, fields, measures and
//! random variables.
//!
//! Literals:
//! - point: an index (`2`), a label (`"h"`) or ray components (`[1, 0, 0]`);
//! - subspace: `"empty"`, `"whole"`, a list of points (finite models; the set
//!   must already be a subspace) or a list of spanning vectors (ray model).

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Result, SpError};
use crate::prob::{mix, pure_state, ProbabilityMeasure};
use crate::rv::{make_rv, RealRandomVariable};
use crate::sigma::{generate_sigma_star, SigmaStarField, DEFAULT_CAP};
use crate::structure::{Point, SpStructure, StructureKind};
use crate::subspace::Subspace;

pub const REPORT_VERSION: u32 = 1;

fn parse_err(e: impl std::fmt::Display) -> SpError {
    SpError::Parse(e.to_string())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum StructureFile {
    Classical {
        n: usize,
    },
    Ray {
        d: usize,
    },
    Explicit {
        points: Vec<String>,
        matrix: Vec<Vec<f64>>,
    },
}

impl StructureFile {
    pub fn build(self) -> Result<SpStructure> {
        match self {
            StructureFile::Classical { n } => SpStructure::classical(n),
            StructureFile::Ray { d } => SpStructure::ray(d),
            StructureFile::Explicit { points, matrix } => SpStructure::explicit(points, matrix),
        }
    }

    pub fn describe(st: &SpStructure) -> Self {
        match st.kind() {
            StructureKind::Classical => StructureFile::Classical { n: st.dimension() },
            StructureKind::Ray => StructureFile::Ray { d: st.dimension() },
            StructureKind::Explicit => {
                let n = st.dimension();
                StructureFile::Explicit {
                    points: st.labels().unwrap().to_vec(),
                    matrix: (0..n)
                        .map(|i| (0..n).map(|j| st.raw(i, j)).collect())
                        .collect(),
                }
            }
        }
    }
}

pub fn parse_structure(text: &str) -> Result<SpStructure> {
    serde_json::from_str::<StructureFile>(text)
        .map_err(parse_err)?
        .build()
}

pub fn parse_point(st: &SpStructure, v: &Value) -> Result<Point> {
    let p =
        match v {
            Value::Number(n) => Point::index(n.as_u64().ok_or_else(|| {
                parse_err(format!("point index {n} is not a non-negative integer"))
            })? as usize),
            Value::String(label) => st.point_by_label(label)?,
            Value::Array(items) => {
                let comps: Vec<f64> = items
                    .iter()
                    .map(|c| {
                        c.as_f64()
                            .ok_or_else(|| parse_err("ray components must be numbers"))
                    })
                    .collect::<Result<_>>()?;
                Point::ray(&comps)?
            }
            other => return Err(parse_err(format!("not a point literal: {other}"))),
        };
    st.check_point(&p)?;
    Ok(p)
}

pub fn point_literal(st: &SpStructure, p: &Point) -> Value {
    match (p.as_index(), p.as_vector()) {
        (Some(i), _) => match st.labels() {
            Some(labels) => Value::from(labels[i].clone()),
            None => Value::from(i),
        },
        (_, Some(v)) => Value::from(v.iter().copied().collect::<Vec<f64>>()),
        _ => Value::Null,
    }
}

pub fn parse_subspace(st: &SpStructure, v: &Value) -> Result<Subspace> {
    match v {
        Value::String(s) if s == "empty" => Ok(st.empty_subspace()),
        Value::String(s) if s == "whole" => Ok(st.whole_space()),
        Value::Array(items) => match st.kind() {
            StructureKind::Ray => {
                let vectors: Vec<Vec<f64>> = items
                    .iter()
                    .map(|item| serde_json::from_value(item.clone()).map_err(parse_err))
                    .collect::<Result<_>>()?;
                st.subspace_from_vectors(&vectors)
            }
            _ => {
                let idx: Vec<usize> = items
                    .iter()
                    .map(|item| Ok(parse_point(st, item)?.as_index().unwrap()))
                    .collect::<Result<_>>()?;
                Subspace::from_points(st.clone(), &idx)
            }
        },
        other => Err(parse_err(format!("not a subspace literal: {other}"))),
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldFile {
    pub generators: Vec<Value>,
    #[serde(default)]
    pub cap: Option<usize>,
}

impl FieldFile {
    pub fn generators(&self, st: &SpStructure) -> Result<Vec<Subspace>> {
        self.generators
            .iter()
            .map(|g| parse_subspace(st, g))
            .collect()
    }

    /// Generates the field; `cap_override` wins over the file's cap.
    pub fn build(&self, st: &SpStructure, cap_override: Option<usize>) -> Result<SigmaStarField> {
        let cap = cap_override.or(self.cap).unwrap_or(DEFAULT_CAP);
        generate_sigma_star(st, &self.generators(st)?, cap)
    }
}

pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| parse_err(format!("{}: {e}", path.display())))
}

pub fn load_field(st: &SpStructure, path: &Path, cap: Option<usize>) -> Result<SigmaStarField> {
    let file: FieldFile = serde_json::from_str(&read_file(path)?).map_err(parse_err)?;
    file.build(st, cap)
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum MeasureFile {
    Table {
        field: String,
        /// Event index (in the field's canonical order) to value.
        values: std::collections::BTreeMap<String, f64>,
    },
    Pure {
        #[serde(default = "all")]
        field: String,
        point: Value,
    },
    Mixed {
        #[serde(default = "all")]
        field: String,
        components: Vec<(f64, Value)>,
    },
}

fn all() -> String {
    "all".to_string()
}

/// Loads a measure; field paths are resolved against `base`.
pub fn load_measure(
    st: &SpStructure,
    text: &str,
    base: &Path,
    cap: Option<usize>,
) -> Result<ProbabilityMeasure> {
    let file: MeasureFile = serde_json::from_str(text).map_err(parse_err)?;
    let field_at = |name: &str| -> Result<Option<Arc<SigmaStarField>>> {
        if name == "all" {
            return Ok(None);
        }
        let path: PathBuf = base.join(name);
        Ok(Some(Arc::new(load_field(st, &path, cap)?)))
    };
    match file {
        MeasureFile::Table { field, values } => {
            let f =
                field_at(&field)?.ok_or_else(|| parse_err("a table measure needs a field file"))?;
            let mut table = vec![f64::NAN; f.len()];
            for (k, v) in values {
                let i: usize = k.parse().map_err(parse_err)?;
                if i >= table.len() {
                    return Err(parse_err(format!("event index {i} out of range")));
                }
                table[i] = v;
            }
            if let Some(i) = table.iter().position(|v| v.is_nan()) {
                return Err(parse_err(format!("no value for event {i}")));
            }
            ProbabilityMeasure::table(f, table)
        }
        MeasureFile::Pure { field, point } => {
            let p = pure_state(st, &parse_point(st, &point)?)?;
            match field_at(&field)? {
                Some(f) => p.restricted_to(f),
                None => Ok(p),
            }
        }
        MeasureFile::Mixed { field, components } => {
            let parts = components
                .iter()
                .map(|(w, lit)| Ok((*w, pure_state(st, &parse_point(st, lit)?)?)))
                .collect::<Result<Vec<_>>>()?;
            let m = mix(parts)?;
            match field_at(&field)? {
                Some(f) => m.restricted_to(f),
                None => Ok(m),
            }
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outcome {
    pub value: f64,
    pub event: Value,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RvFile {
    pub outcomes: Vec<Outcome>,
}

pub fn parse_rv(st: &SpStructure, text: &str) -> Result<RealRandomVariable> {
    let file: RvFile = serde_json::from_str(text).map_err(parse_err)?;
    let pairs = file
        .outcomes
        .iter()
        .map(|o| Ok((o.value, parse_subspace(st, &o.event)?)))
        .collect::<Result<Vec<_>>>()?;
    make_rv(st, pairs)
}

/// Events of a field in canonical order, as literals with their indices.
pub fn field_listing(f: &SigmaStarField) -> Vec<Value> {
    f.events()
        .iter()
        .enumerate()
        .map(|(i, e)| serde_json::json!({ "index": i, "dim": e.dim(), "event": e.to_literal() }))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn structure_round_trip() {
        let text = r#"{"kind": "explicit", "points": ["a", "b"], "matrix": [[1, 0], [0, 1]]}"#;
        let st = parse_structure(text).unwrap();
        assert_eq!(st.kind(), StructureKind::Explicit);
        let back = serde_json::to_string(&StructureFile::describe(&st)).unwrap();
        assert_eq!(parse_structure(&back).unwrap(), st);
        assert!(parse_structure(r#"{"kind": "ray"}"#).is_err());
        assert!(matches!(
            parse_structure(
                r#"{"kind": "explicit", "points": ["a", "b"], "matrix": [[1, 0.2], [0.3, 1]]}"#
            ),
            Err(SpError::InvalidStructure(_))
        ));
    }

    #[test]
    fn literals() {
        let st = SpStructure::ray(3).unwrap();
        let p = parse_point(&st, &json!([0, 3, 4])).unwrap();
        assert!((p.as_vector().unwrap()[1] - 0.6).abs() < 1e-15);
        let plane = parse_subspace(&st, &json!([[1, 0, 0], [1, 1, 0]])).unwrap();
        assert_eq!(plane.dim(), 2);
        assert!(parse_subspace(&st, &json!("whole")).unwrap().is_whole());
        let again = parse_subspace(&st, &plane.to_literal()).unwrap();
        assert!(again.equals(&plane));

        let c = SpStructure::classical(4).unwrap();
        let s = parse_subspace(&c, &json!([0, 2])).unwrap();
        assert_eq!(s.point_indices().unwrap(), vec![0, 2]);
        assert!(parse_point(&c, &json!(7)).is_err());
    }

    #[test]
    fn rv_file() {
        let st = SpStructure::ray(2).unwrap();
        let x = parse_rv(
            &st,
            r#"{"outcomes": [{"value": 1, "event": [[1, 1]]}, {"value": -1, "event": [[-1, 1]]}]}"#,
        )
        .unwrap();
        assert_eq!(x.outcomes().len(), 2);
    }
}
