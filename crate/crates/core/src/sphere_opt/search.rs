//! Local search from a starting constellation and seeded multi-start.
//!
//! Smooth objectives (Wehrl, Thomson) use a compass search: each star is
//! moved along the four directions of a tangent frame, the step is halved
//! after a sweep without improvement. The Tammes objective is a maximin and
//! stalls single-star moves at its kinks, so it uses sequential linear
//! programming over all stars at once inside a trust region.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{min_distance_of, Objective, ShapeSignature};
use crate::error::{Error, Result};
use crate::rng;
use crate::states::{chordal, Constellation};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalOptions {
    /// First step, as an angle in radians.
    pub initial_step: f64,
    /// Search stops once the step falls below this.
    pub step_tol: f64,
    /// Objective evaluations (or LP solves for Tammes) before giving up.
    pub max_evaluations: usize,
}

impl Default for LocalOptions {
    fn default() -> Self {
        LocalOptions {
            initial_step: 0.1,
            step_tol: 1e-7,
            max_evaluations: 20_000_000,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LocalOutcome {
    pub constellation: Constellation,
    /// Natural objective value (energy for Thomson).
    pub value: f64,
    /// Maximized score (negated energy for Thomson).
    pub score: f64,
    pub evaluations: usize,
    pub signature: ShapeSignature,
}

pub(crate) fn tangent_frame(x: [f64; 3]) -> ([f64; 3], [f64; 3]) {
    let a = if x[2].abs() < 0.9 { [0.0, 0.0, 1.0] } else { [1.0, 0.0, 0.0] };
    let e1 = normalize(cross(a, x));
    (e1, cross(x, e1))
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn normalize(v: [f64; 3]) -> [f64; 3] {
    let r = dot(v, v).sqrt();
    [v[0] / r, v[1] / r, v[2] / r]
}

/// Move `x` along the great circle with unit tangent `t` by angle `h`.
fn geodesic_step(x: [f64; 3], t: [f64; 3], h: f64) -> [f64; 3] {
    let (s, c) = h.sin_cos();
    normalize([c * x[0] + s * t[0], c * x[1] + s * t[1], c * x[2] + s * t[2]])
}

/// Move `x` by the tangent vector `a e1 + b e2`.
fn tangent_step(x: [f64; 3], frame: ([f64; 3], [f64; 3]), a: f64, b: f64) -> [f64; 3] {
    let (e1, e2) = frame;
    let t = [a * e1[0] + b * e2[0], a * e1[1] + b * e2[1], a * e1[2] + b * e2[2]];
    let len = (a * a + b * b).sqrt();
    if len == 0.0 {
        return x;
    }
    geodesic_step(x, [t[0] / len, t[1] / len, t[2] / len], len)
}

fn compass_dirs(x: [f64; 3]) -> [[f64; 3]; 4] {
    let (e1, e2) = tangent_frame(x);
    let neg = |v: [f64; 3]| [-v[0], -v[1], -v[2]];
    [e1, neg(e1), e2, neg(e2)]
}

fn improves(new: f64, old: f64) -> bool {
    new > old + 1e-15 * (1.0 + old.abs())
}

fn compass(objective: Objective, mut pts: Vec<[f64; 3]>, opts: &LocalOptions) -> Result<(Vec<[f64; 3]>, f64, usize)> {
    let mut best = objective.score(&pts);
    let mut evals = 1;
    let mut h = opts.initial_step;
    while h >= opts.step_tol {
        let mut improved = false;
        for i in 0..pts.len() {
            for dir in compass_dirs(pts[i]) {
                let old = pts[i];
                pts[i] = geodesic_step(old, dir, h);
                evals += 1;
                let s = objective.score(&pts);
                if improves(s, best) {
                    best = s;
                    improved = true;
                    break;
                }
                pts[i] = old;
            }
        }
        if evals > opts.max_evaluations {
            return Err(Error::IterationCap(evals));
        }
        if !improved {
            h *= 0.5;
        }
    }
    Ok((pts, best, evals))
}

/// One trust-region step for `max_x min_p (d_p + g_p . x)` with
/// `lo <= x <= hi`, where `base = min_p d_p` and `r` is the trust radius.
/// Posed in units of `r` so the LP stays well scaled as the radius shrinks.
/// Returns the step and the predicted gain of the minimum.
pub(crate) fn maximin_lp(d: &[f64], grads: &[Vec<f64>], lo: &[f64], hi: &[f64], r: f64) -> Result<(Vec<f64>, f64)> {
    use microlp::{ComparisonOp, LinearExpr, OptimizationDirection, Problem};
    let base = d.iter().copied().fold(f64::INFINITY, f64::min);
    let mut lp = Problem::new(OptimizationDirection::Maximize);
    // gain in units of r, with a generous bound keeping the LP bounded
    let s = lp.add_var(1.0, (-1.0, 4.0 * (lo.len() as f64).max(1.0)));
    let us: Vec<_> = lo.iter().zip(hi).map(|(&l, &h)| lp.add_var(0.0, (l / r, h / r))).collect();
    for (dp, g) in d.iter().zip(grads) {
        let mut e = LinearExpr::empty();
        e.add(s, 1.0);
        for (u, &gi) in us.iter().zip(g) {
            if gi != 0.0 {
                e.add(*u, -gi);
            }
        }
        lp.add_constraint(e, ComparisonOp::Le, (dp - base) / r);
    }
    let outcome = lp.solve().map_err(|e| Error::LinearProgram(e.to_string()))?;
    let sol = outcome
        .solution()
        .ok_or_else(|| Error::LinearProgram("solver interrupted".into()))?;
    Ok((us.iter().map(|&u| r * sol[u]).collect(), r * sol[s]))
}

fn tammes_slp(mut pts: Vec<[f64; 3]>, opts: &LocalOptions) -> Result<(Vec<[f64; 3]>, f64, usize)> {
    let n = pts.len();
    let mut best = min_distance_of(&pts);
    let mut r = opts.initial_step;
    let mut solves = 0;
    while r >= opts.step_tol {
        solves += 1;
        if solves > opts.max_evaluations {
            return Err(Error::IterationCap(solves));
        }
        let frames: Vec<_> = pts.iter().map(|&x| tangent_frame(x)).collect();
        let mut d = Vec::new();
        let mut grads = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let dij = chordal(pts[i], pts[j]);
                let u = [pts[i][0] - pts[j][0], pts[i][1] - pts[j][1], pts[i][2] - pts[j][2]];
                let mut g = vec![0.0; 2 * n];
                g[2 * i] = dot(u, frames[i].0) / dij;
                g[2 * i + 1] = dot(u, frames[i].1) / dij;
                g[2 * j] = -dot(u, frames[j].0) / dij;
                g[2 * j + 1] = -dot(u, frames[j].1) / dij;
                d.push(dij);
                grads.push(g);
            }
        }
        let Ok((step, predicted)) = maximin_lp(&d, &grads, &vec![-r; 2 * n], &vec![r; 2 * n], r) else {
            // degenerate LP: treat as a rejected step
            r *= 0.5;
            continue;
        };
        if predicted.abs() <= 1e-14 {
            // first-order stationary: no direction raises every active pair
            break;
        }
        if predicted < 0.0 {
            // the zero step is feasible, so this is a solver failure; retry smaller
            r *= 0.5;
            continue;
        }
        let trial: Vec<_> = (0..n)
            .map(|i| tangent_step(pts[i], frames[i], step[2 * i], step[2 * i + 1]))
            .collect();
        let value = min_distance_of(&trial);
        let ratio = (value - best) / predicted;
        if ratio > 0.1 {
            pts = trial;
            best = value;
            if ratio > 0.75 {
                r = (2.0 * r).min(0.5);
            }
        } else {
            r *= 0.5;
        }
    }
    Ok((pts, best, solves))
}

/// Locally maximize the objective's score from `c0`.
pub fn local_maximize(objective: Objective, c0: &Constellation, opts: &LocalOptions) -> Result<LocalOutcome> {
    if c0.n() == 0 {
        return Err(Error::InvalidInput("empty constellation".into()));
    }
    if objective == Objective::Tammes && c0.n() < 2 {
        return Err(Error::InvalidInput("need at least two stars".into()));
    }
    let pts = c0.vectors();
    let (pts, score, evaluations) = match objective {
        Objective::Tammes => tammes_slp(pts, opts)?,
        _ => compass(objective, pts, opts)?,
    };
    Ok(LocalOutcome {
        signature: ShapeSignature::of_vectors(&pts),
        constellation: Constellation::from_vectors(&pts),
        value: objective.value_from_score(score),
        score,
        evaluations,
    })
}

/// Largest score gain of any single-star compass move of size `h`.
pub fn pattern_improvement(objective: Objective, c: &Constellation, h: f64) -> f64 {
    let mut pts = c.vectors();
    let base = objective.score(&pts);
    let mut gain = f64::NEG_INFINITY;
    for i in 0..pts.len() {
        for dir in compass_dirs(pts[i]) {
            let old = pts[i];
            pts[i] = geodesic_step(old, dir, h);
            gain = gain.max(objective.score(&pts) - base);
            pts[i] = old;
        }
    }
    gain
}

/// Uniformly random constellation from stream `index` of `seed`.
pub fn random_constellation(n: usize, seed: u64, index: u64) -> Constellation {
    let mut r = rng::stream(seed, index);
    let pts: Vec<_> = (0..n).map(|_| rng::unit_vector(&mut r)).collect();
    Constellation::from_vectors(&pts)
}

#[derive(Clone, Debug, Serialize)]
pub struct MultiStartOutcome {
    pub best: LocalOutcome,
    pub best_index: usize,
    /// Score and signature reached from every start, in start order.
    pub runs: Vec<(f64, ShapeSignature)>,
}

/// Whether `a` beats `b`: higher score, ties broken by the lexicographically
/// smaller signature so the result does not depend on scheduling.
fn better(a: &LocalOutcome, b: &LocalOutcome) -> bool {
    if (a.score - b.score).abs() <= 1e-12 * (1.0 + b.score.abs()) {
        a.signature.lex_cmp(&b.signature) == Ordering::Less
    } else {
        a.score > b.score
    }
}

/// Run [`local_maximize`] from `starts` seeded random constellations in parallel.
pub fn multi_start(
    objective: Objective,
    n: usize,
    starts: usize,
    seed: u64,
    opts: &LocalOptions,
) -> Result<MultiStartOutcome> {
    if starts == 0 {
        return Err(Error::InvalidInput("at least one start required".into()));
    }
    let outcomes = (0..starts)
        .into_par_iter()
        .map(|i| local_maximize(objective, &random_constellation(n, seed, i as u64), opts))
        .collect::<Result<Vec<_>>>()?;
    let mut best_index = 0;
    for (i, o) in outcomes.iter().enumerate().skip(1) {
        if better(o, &outcomes[best_index]) {
            best_index = i;
        }
    }
    let runs = outcomes.iter().map(|o| (o.score, o.signature.clone())).collect();
    let best = outcomes.into_iter().nth(best_index).expect("non-empty");
    Ok(MultiStartOutcome { best, best_index, runs })
}
