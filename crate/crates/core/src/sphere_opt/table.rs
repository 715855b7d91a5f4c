//! Reproduction of the table of optimal constellation types for 3..=9 stars.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::classify::{classify, reference_solid};
use super::family::{optimize_family_multistart, ConstellationFamily};
use super::search::{multi_start, LocalOptions};
use super::{objective_value, Objective, ShapeSignature, SIGNATURE_TOL};
use crate::error::{Error, Result};
use crate::states::{Constellation, PolygonSpec, Ring};

/// Expected constellation type for `n` stars under `objective`, if tabulated.
pub fn table_entry(n: usize, objective: Objective) -> Option<&'static str> {
    Some(match (n, objective) {
        (3, _) => "triangle",
        (4, _) => "tetrahedron",
        (5, _) => "1-4-0",
        (6, _) => "octahedron",
        (7, Objective::Tammes) => "1-3-3-0",
        (7, _) => "1-5-1",
        (8, _) => "0-4-4-0",
        (9, _) => "0-3-3-3-0",
        _ => return None,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableEntry {
    pub n: usize,
    pub objective: Objective,
    pub label: String,
}

/// Polygon family of a tabulated type, at a reasonable starting point.
fn starting_family(label: &str) -> Option<ConstellationFamily> {
    let ring = |count, theta, twist| Ring { count, theta, twist };
    let spec = match label {
        "1-4-0" => PolygonSpec { n: 5, north: 1, rings: vec![ring(4, 1.8, 0.0)], south: 0 },
        "1-5-1" => PolygonSpec { n: 7, north: 1, rings: vec![ring(5, 1.5, 0.0)], south: 1 },
        "1-3-3-0" => PolygonSpec {
            n: 7,
            north: 1,
            rings: vec![ring(3, 1.2, 0.0), ring(3, 2.3, PI / 3.0)],
            south: 0,
        },
        "0-4-4-0" => PolygonSpec {
            n: 8,
            north: 0,
            rings: vec![ring(4, 1.0, 0.0), ring(4, PI - 1.0, PI / 4.0)],
            south: 0,
        },
        "0-3-3-3-0" => PolygonSpec {
            n: 9,
            north: 0,
            rings: vec![ring(3, 0.8, 0.0), ring(3, PI / 2.0, PI / 3.0), ring(3, PI - 0.8, 0.0)],
            south: 0,
        },
        _ => return None,
    };
    ConstellationFamily::new(spec).ok()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TableOptions {
    /// Random starts of the unconstrained search.
    pub starts: usize,
    /// Starts of the search inside the tabulated family.
    pub family_starts: usize,
    pub seed: u64,
    pub local: LocalOptions,
    pub signature_tol: f64,
}

impl Default for TableOptions {
    fn default() -> Self {
        TableOptions {
            starts: 50,
            family_starts: 8,
            seed: 20_240_917,
            local: LocalOptions::default(),
            signature_tol: SIGNATURE_TOL,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveValues {
    pub wehrl: f64,
    pub thomson: f64,
    pub tammes: f64,
}

impl ObjectiveValues {
    pub fn of(c: &Constellation) -> Result<ObjectiveValues> {
        Ok(ObjectiveValues {
            wehrl: objective_value(Objective::Wehrl, c)?,
            thomson: objective_value(Objective::Thomson, c)?,
            tammes: objective_value(Objective::Tammes, c)?,
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TableRecord {
    pub n: usize,
    pub objective: Objective,
    /// Tabulated type.
    pub table_type: String,
    /// Type of the best constellation found by the unconstrained search.
    pub family_type: String,
    pub best_value: f64,
    /// Optimal value inside the tabulated type.
    pub reference_value: f64,
    pub param_names: Vec<String>,
    /// Optimal parameters inside the tabulated type (empty for rigid shapes).
    pub params: Vec<f64>,
    pub signature: ShapeSignature,
    /// Best constellation has the tabulated shape.
    pub matches_table: bool,
    /// Best value equals the tabulated shape's value within `1e-7`.
    pub value_matches_table: bool,
    pub best_constellation: Constellation,
    pub reference_constellation: Constellation,
    /// All three objectives at the best constellation.
    pub values: ObjectiveValues,
    /// Number of starts that reached the best shape.
    pub hits: usize,
}

/// One row: unconstrained multi-start search and the tabulated reference.
pub fn table_row(n: usize, objective: Objective, opts: &TableOptions) -> Result<TableRecord> {
    let label = table_entry(n, objective)
        .ok_or_else(|| Error::InvalidInput(format!("no table entry for n = {n}")))?;
    let search = multi_start(objective, n, opts.starts, opts.seed, &opts.local)?;
    let best = search.best;

    let (reference, param_names, params) = if let Some(solid) = reference_solid(label) {
        (solid.constellation(), Vec::new(), Vec::new())
    } else {
        let family = starting_family(label).expect("every tabulated type has a family");
        let fam = optimize_family_multistart(
            &family,
            objective,
            opts.family_starts,
            opts.seed ^ n as u64,
            &opts.local,
        )?;
        (fam.constellation, fam.param_names, fam.params)
    };
    let reference_value = objective_value(objective, &reference)?;
    let reference_sig = ShapeSignature::of(&reference);
    let hits = search.runs.iter().filter(|(_, s)| s.matches(&best.signature, opts.signature_tol)).count();
    Ok(TableRecord {
        n,
        objective,
        table_type: label.to_string(),
        family_type: classify(&best.constellation, opts.signature_tol),
        best_value: best.value,
        reference_value,
        param_names,
        params,
        matches_table: best.signature.matches(&reference_sig, opts.signature_tol),
        value_matches_table: (best.value - reference_value).abs() <= 1e-7,
        values: ObjectiveValues::of(&best.constellation)?,
        signature: best.signature,
        best_constellation: best.constellation,
        reference_constellation: reference,
        hits,
    })
}

/// Rows for every `n` in `ns` and every objective.
pub fn reproduce_table(ns: &[usize], opts: &TableOptions) -> Result<Vec<TableRecord>> {
    let mut out = Vec::new();
    for &n in ns {
        for objective in Objective::ALL {
            out.push(table_row(n, objective, opts)?);
        }
    }
    Ok(out)
}
