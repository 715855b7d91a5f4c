//! Optimization of star constellations for three objectives: the Wehrl
//! entropy (maximized), the Thomson energy `sum 1/r_ij` (minimized) and the
//! Tammes minimal chordal distance (maximized).
//!
//! Internally every objective is a *score* to be maximized; the Thomson
//! score is the negated energy. Reported values are always the natural ones.

mod classify;
mod family;
mod search;
mod table;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::husimi::{wehrl_entropy, wehrl_entropy_of_stars, QuadratureConfig};
use crate::states::{chordal, constellation_to_state, Constellation};

pub use classify::{classify, polygon_type, reference_solid, Solid};
pub use family::{optimize_family, optimize_family_multistart, ConstellationFamily, FamilyOutcome};
pub use search::{
    local_maximize, multi_start, pattern_improvement, random_constellation, LocalOptions, LocalOutcome,
    MultiStartOutcome,
};
pub use table::{reproduce_table, table_entry, table_row, ObjectiveValues, TableEntry, TableOptions, TableRecord};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    Wehrl,
    Thomson,
    Tammes,
}

impl Objective {
    pub const ALL: [Objective; 3] = [Objective::Wehrl, Objective::Thomson, Objective::Tammes];

    /// Score to maximize; `-inf` where the objective is undefined.
    pub fn score(self, pts: &[[f64; 3]]) -> f64 {
        match self {
            Objective::Wehrl => wehrl_entropy_of_stars(pts),
            Objective::Thomson => thomson_energy_of(pts).map_or(f64::NEG_INFINITY, |e| -e),
            Objective::Tammes => min_distance_of(pts),
        }
    }

    /// Natural value corresponding to a score.
    pub fn value_from_score(self, score: f64) -> f64 {
        match self {
            Objective::Thomson => -score,
            _ => score,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Objective::Wehrl => "wehrl",
            Objective::Thomson => "thomson",
            Objective::Tammes => "tammes",
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Objective {
    type Err = Error;
    fn from_str(s: &str) -> Result<Objective> {
        match s.to_ascii_lowercase().as_str() {
            "wehrl" => Ok(Objective::Wehrl),
            "thomson" => Ok(Objective::Thomson),
            "tammes" => Ok(Objective::Tammes),
            other => Err(Error::InvalidInput(format!("unknown objective '{other}'"))),
        }
    }
}

fn thomson_energy_of(pts: &[[f64; 3]]) -> Option<f64> {
    let mut e = 0.0;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let d = chordal(pts[i], pts[j]);
            if d == 0.0 {
                return None;
            }
            e += 1.0 / d;
        }
    }
    Some(e)
}

fn min_distance_of(pts: &[[f64; 3]]) -> f64 {
    let mut m = f64::INFINITY;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            m = m.min(chordal(pts[i], pts[j]));
        }
    }
    m
}

/// Electrostatic energy `sum_{i<j} 1/|x_i - x_j|` of unit charges at the stars.
pub fn thomson_energy(c: &Constellation) -> Result<f64> {
    let pts = c.vectors();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if chordal(pts[i], pts[j]) == 0.0 {
                return Err(Error::CoincidentStars(i, j));
            }
        }
    }
    Ok(thomson_energy_of(&pts).expect("no coincident stars"))
}

/// Smallest pairwise chordal distance.
pub fn tammes_min_distance(c: &Constellation) -> Result<f64> {
    if c.n() < 2 {
        return Err(Error::InvalidInput("need at least two stars".into()));
    }
    Ok(min_distance_of(&c.vectors()))
}

/// Wehrl entropy of the state with constellation `c`, by adaptive quadrature.
pub fn wehrl_objective(c: &Constellation, q: &QuadratureConfig) -> Result<f64> {
    Ok(wehrl_entropy(&constellation_to_state(c)?, q)?.value)
}

/// Evaluate an objective on a constellation (natural value).
pub fn objective_value(objective: Objective, c: &Constellation) -> Result<f64> {
    match objective {
        Objective::Wehrl => {
            if c.n() == 0 {
                return Err(Error::Unsupported("empty constellation".into()));
            }
            Ok(wehrl_entropy_of_stars(&c.vectors()))
        }
        Objective::Thomson => thomson_energy(c),
        Objective::Tammes => tammes_min_distance(c),
    }
}

/// Default tolerance for comparing two [`ShapeSignature`]s.
pub const SIGNATURE_TOL: f64 = 1e-4;

/// Sorted pairwise chordal distances: a fingerprint of a constellation up to
/// rotations, reflections and relabeling.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShapeSignature(pub Vec<f64>);

impl ShapeSignature {
    pub fn of(c: &Constellation) -> ShapeSignature {
        ShapeSignature::of_vectors(&c.vectors())
    }

    pub fn of_vectors(pts: &[[f64; 3]]) -> ShapeSignature {
        let mut d = Vec::with_capacity(pts.len() * pts.len().saturating_sub(1) / 2);
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                d.push(chordal(pts[i], pts[j]));
            }
        }
        d.sort_by(f64::total_cmp);
        ShapeSignature(d)
    }

    /// Largest entrywise difference; infinite for different star counts.
    pub fn distance(&self, other: &ShapeSignature) -> f64 {
        if self.0.len() != other.0.len() {
            return f64::INFINITY;
        }
        self.0.iter().zip(&other.0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    pub fn matches(&self, other: &ShapeSignature, tol: f64) -> bool {
        self.distance(other) <= tol
    }

    pub fn lex_cmp(&self, other: &ShapeSignature) -> Ordering {
        for (a, b) in self.0.iter().zip(&other.0) {
            match a.total_cmp(b) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        self.0.len().cmp(&other.0.len())
    }
}
