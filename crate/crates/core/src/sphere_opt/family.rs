//! Optimization inside a polygon family: pole stars plus regular polygons
//! whose latitudes and relative twists are the free parameters.

use std::f64::consts::{PI, TAU};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::search::{maximin_lp, LocalOptions};
use super::{min_distance_of, Objective, ShapeSignature};
use crate::error::{Error, Result};
use crate::rng;
use crate::states::{chordal, Constellation, PolygonSpec};

/// Latitudes stay this far inside `(0, pi)`.
const POLE_MARGIN: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstellationFamily {
    /// Current parameter values; frozen entries are held at these values.
    pub spec: PolygonSpec,
    pub free_theta: Vec<bool>,
    pub free_twist: Vec<bool>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Param {
    Theta(usize),
    Twist(usize),
}

impl ConstellationFamily {
    /// All latitudes free; all twists free except the first ring's, which
    /// only rotates the whole constellation about the axis.
    pub fn new(spec: PolygonSpec) -> Result<ConstellationFamily> {
        spec.validate()?;
        let rings = spec.rings.len();
        let free_twist = (0..rings).map(|i| i > 0).collect();
        Ok(ConstellationFamily { spec, free_theta: vec![true; rings], free_twist })
    }

    pub fn with_frozen_twist(mut self, ring: usize, twist: f64) -> Self {
        self.spec.rings[ring].twist = twist;
        self.free_twist[ring] = false;
        self
    }

    pub fn with_frozen_theta(mut self, ring: usize, theta: f64) -> Self {
        self.spec.rings[ring].theta = theta;
        self.free_theta[ring] = false;
        self
    }

    fn layout(&self) -> Vec<Param> {
        let mut out = Vec::new();
        for i in 0..self.spec.rings.len() {
            if self.free_theta[i] {
                out.push(Param::Theta(i));
            }
            if self.free_twist[i] {
                out.push(Param::Twist(i));
            }
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.layout().len()
    }

    /// Names of the free parameters, e.g. `theta1`, `twist2` (rings counted from 1).
    pub fn param_names(&self) -> Vec<String> {
        self.layout()
            .into_iter()
            .map(|p| match p {
                Param::Theta(i) => format!("theta{}", i + 1),
                Param::Twist(i) => format!("twist{}", i + 1),
            })
            .collect()
    }

    pub fn params(&self) -> Vec<f64> {
        self.layout()
            .into_iter()
            .map(|p| match p {
                Param::Theta(i) => self.spec.rings[i].theta,
                Param::Twist(i) => self.spec.rings[i].twist,
            })
            .collect()
    }

    pub fn spec_at(&self, params: &[f64]) -> PolygonSpec {
        let mut spec = self.spec.clone();
        for (p, &v) in self.layout().into_iter().zip(params) {
            match p {
                Param::Theta(i) => spec.rings[i].theta = v,
                Param::Twist(i) => spec.rings[i].twist = v,
            }
        }
        spec
    }

    pub fn constellation_at(&self, params: &[f64]) -> Result<Constellation> {
        self.spec_at(params).constellation()
    }

    fn bounds(&self) -> (Vec<f64>, Vec<f64>) {
        self.layout()
            .into_iter()
            .map(|p| match p {
                Param::Theta(_) => (POLE_MARGIN, PI - POLE_MARGIN),
                Param::Twist(_) => (-1e6, 1e6),
            })
            .unzip()
    }

    fn points(&self, params: &[f64]) -> Vec<[f64; 3]> {
        self.constellation_at(params).expect("parameters kept in bounds").vectors()
    }

    fn random_params(&self, seed: u64, index: u64) -> Vec<f64> {
        let mut r = rng::stream(seed, index);
        self.layout()
            .into_iter()
            .map(|p| match p {
                Param::Theta(_) => r.random_range(-1.0f64..1.0).acos().clamp(POLE_MARGIN, PI - POLE_MARGIN),
                Param::Twist(i) => r.random_range(0.0..TAU / self.spec.rings[i].count as f64),
            })
            .collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyOutcome {
    pub param_names: Vec<String>,
    pub params: Vec<f64>,
    pub spec: PolygonSpec,
    pub constellation: Constellation,
    pub value: f64,
    pub score: f64,
}

fn family_compass(
    family: &ConstellationFamily,
    objective: Objective,
    mut p: Vec<f64>,
    opts: &LocalOptions,
) -> Result<(Vec<f64>, f64)> {
    let (lo, hi) = family.bounds();
    let mut best = objective.score(&family.points(&p));
    let mut h = opts.initial_step;
    let mut evals = 1;
    while h >= opts.step_tol {
        let mut improved = false;
        for k in 0..p.len() {
            for sign in [1.0, -1.0] {
                let old = p[k];
                p[k] = (old + sign * h).clamp(lo[k], hi[k]);
                evals += 1;
                let s = objective.score(&family.points(&p));
                if s > best + 1e-15 * (1.0 + best.abs()) {
                    best = s;
                    improved = true;
                    break;
                }
                p[k] = old;
            }
        }
        if evals > opts.max_evaluations {
            return Err(Error::IterationCap(evals));
        }
        if !improved {
            h *= 0.5;
        }
    }
    Ok((p, best))
}

fn pair_distances(pts: &[[f64; 3]]) -> Vec<f64> {
    let mut d = Vec::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            d.push(chordal(pts[i], pts[j]));
        }
    }
    d
}

/// Sequential LP for the maximin objective with finite-difference gradients
/// in parameter space.
fn family_slp(family: &ConstellationFamily, mut p: Vec<f64>, opts: &LocalOptions) -> Result<(Vec<f64>, f64)> {
    const FD: f64 = 1e-7;
    let (lo, hi) = family.bounds();
    let dim = p.len();
    let mut best = min_distance_of(&family.points(&p));
    let mut r = opts.initial_step;
    let mut solves = 0;
    while r >= opts.step_tol {
        solves += 1;
        if solves > opts.max_evaluations {
            return Err(Error::IterationCap(solves));
        }
        let d0 = pair_distances(&family.points(&p));
        let mut jac = vec![vec![0.0; dim]; d0.len()];
        for k in 0..dim {
            let mut up = p.clone();
            let mut down = p.clone();
            up[k] = (p[k] + FD).min(hi[k]);
            down[k] = (p[k] - FD).max(lo[k]);
            let du = pair_distances(&family.points(&up));
            let dd = pair_distances(&family.points(&down));
            for (row, (a, b)) in jac.iter_mut().zip(du.iter().zip(&dd)) {
                row[k] = (a - b) / (up[k] - down[k]);
            }
        }
        let step_lo: Vec<f64> = (0..dim).map(|k| (-r).max(lo[k] - p[k])).collect();
        let step_hi: Vec<f64> = (0..dim).map(|k| r.min(hi[k] - p[k])).collect();
        let Ok((step, predicted)) = maximin_lp(&d0, &jac, &step_lo, &step_hi, r) else {
            r *= 0.5;
            continue;
        };
        if predicted.abs() <= 1e-14 {
            break;
        }
        if predicted < 0.0 {
            r *= 0.5;
            continue;
        }
        let trial: Vec<f64> = (0..dim).map(|k| (p[k] + step[k]).clamp(lo[k], hi[k])).collect();
        let value = min_distance_of(&family.points(&trial));
        let ratio = (value - best) / predicted;
        if ratio > 0.1 {
            p = trial;
            best = value;
            if ratio > 0.75 {
                r = (2.0 * r).min(0.5);
            }
        } else {
            r *= 0.5;
        }
    }
    Ok((p, best))
}

fn outcome(family: &ConstellationFamily, objective: Objective, params: Vec<f64>, score: f64) -> Result<FamilyOutcome> {
    let spec = family.spec_at(&params);
    Ok(FamilyOutcome {
        param_names: family.param_names(),
        constellation: spec.constellation()?,
        spec,
        params,
        value: objective.value_from_score(score),
        score,
    })
}

/// Optimize the free parameters of `family`, starting from its current values.
pub fn optimize_family(
    family: &ConstellationFamily,
    objective: Objective,
    opts: &LocalOptions,
) -> Result<FamilyOutcome> {
    optimize_from(family, objective, family.params(), opts)
}

fn optimize_from(
    family: &ConstellationFamily,
    objective: Objective,
    start: Vec<f64>,
    opts: &LocalOptions,
) -> Result<FamilyOutcome> {
    if start.is_empty() {
        return Err(Error::InvalidInput("family has no free parameters".into()));
    }
    let (p, score) = match objective {
        Objective::Tammes => family_slp(family, start, opts)?,
        _ => family_compass(family, objective, start, opts)?,
    };
    outcome(family, objective, p, score)
}

/// Best of [`optimize_family`] from the family's own parameters and
/// `starts - 1` seeded random parameter vectors.
pub fn optimize_family_multistart(
    family: &ConstellationFamily,
    objective: Objective,
    starts: usize,
    seed: u64,
    opts: &LocalOptions,
) -> Result<FamilyOutcome> {
    let runs = (0..starts.max(1))
        .into_par_iter()
        .map(|i| {
            let start = if i == 0 { family.params() } else { family.random_params(seed, i as u64) };
            optimize_from(family, objective, start, opts)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut best = 0;
    for i in 1..runs.len() {
        let (a, b) = (&runs[i], &runs[best]);
        let tie = (a.score - b.score).abs() <= 1e-12 * (1.0 + b.score.abs());
        let wins = if tie {
            ShapeSignature::of(&a.constellation).lex_cmp(&ShapeSignature::of(&b.constellation)).is_lt()
        } else {
            a.score > b.score
        };
        if wins {
            best = i;
        }
    }
    Ok(runs.into_iter().nth(best).expect("non-empty"))
}
