//! Naming constellations: dedicated names for the equatorial triangle and the
//! two Platonic solids that occur, otherwise the polygon type `kN-k1-...-kS`
//! along the symmetry axis that needs the fewest rings.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::ShapeSignature;
use crate::states::{Constellation, PolygonSpec, Ring};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Solid {
    Triangle,
    Tetrahedron,
    Octahedron,
}

impl Solid {
    pub const ALL: [Solid; 3] = [Solid::Triangle, Solid::Tetrahedron, Solid::Octahedron];

    pub fn name(self) -> &'static str {
        match self {
            Solid::Triangle => "triangle",
            Solid::Tetrahedron => "tetrahedron",
            Solid::Octahedron => "octahedron",
        }
    }

    pub fn spec(self) -> PolygonSpec {
        let ring = |count, theta| Ring { count, theta, twist: 0.0 };
        match self {
            Solid::Triangle => PolygonSpec { n: 3, north: 0, rings: vec![ring(3, PI / 2.0)], south: 0 },
            Solid::Tetrahedron => PolygonSpec { n: 4, north: 1, rings: vec![ring(3, (-1.0f64 / 3.0).acos())], south: 0 },
            Solid::Octahedron => PolygonSpec { n: 6, north: 1, rings: vec![ring(4, PI / 2.0)], south: 1 },
        }
    }

    pub fn constellation(self) -> Constellation {
        self.spec().constellation().expect("valid solid")
    }
}

/// The solid called `name`, if any.
pub fn reference_solid(name: &str) -> Option<Solid> {
    Solid::ALL.into_iter().find(|s| s.name() == name)
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn unit(v: [f64; 3]) -> Option<[f64; 3]> {
    let r = dot(v, v).sqrt();
    (r > 1e-6).then(|| [v[0] / r, v[1] / r, v[2] / r])
}

fn candidate_axes(pts: &[[f64; 3]]) -> Vec<[f64; 3]> {
    let n = pts.len();
    let mut axes = Vec::new();
    for i in 0..n {
        axes.push(pts[i]);
        for j in i + 1..n {
            axes.extend(unit([pts[i][0] + pts[j][0], pts[i][1] + pts[j][1], pts[i][2] + pts[j][2]]));
            for k in j + 1..n {
                let a = [pts[j][0] - pts[i][0], pts[j][1] - pts[i][1], pts[j][2] - pts[i][2]];
                let b = [pts[k][0] - pts[i][0], pts[k][1] - pts[i][1], pts[k][2] - pts[i][2]];
                axes.extend(unit([a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]));
            }
        }
    }
    let flipped: Vec<_> = axes.iter().map(|a| [-a[0], -a[1], -a[2]]).collect();
    axes.extend(flipped);
    axes
}

/// Counts `[north, ring_1, ..., south]` seen along `axis`, if every latitude
/// group is a regular polygon of at least two stars.
fn counts_along(pts: &[[f64; 3]], axis: [f64; 3], tol: f64) -> Option<Vec<usize>> {
    let helper = if axis[2].abs() < 0.9 { [0.0, 0.0, 1.0] } else { [1.0, 0.0, 0.0] };
    let e1 = unit([
        helper[1] * axis[2] - helper[2] * axis[1],
        helper[2] * axis[0] - helper[0] * axis[2],
        helper[0] * axis[1] - helper[1] * axis[0],
    ])?;
    let e2 = [
        axis[1] * e1[2] - axis[2] * e1[1],
        axis[2] * e1[0] - axis[0] * e1[2],
        axis[0] * e1[1] - axis[1] * e1[0],
    ];
    let (mut north, mut south) = (0, 0);
    // (z, rho, azimuth) of off-axis stars
    let mut rest = Vec::new();
    for &p in pts {
        let z = dot(p, axis);
        let (x, y) = (dot(p, e1), dot(p, e2));
        let rho = x.hypot(y);
        if rho < tol {
            if z > 0.0 {
                north += 1;
            } else {
                south += 1;
            }
        } else {
            rest.push((z, rho, y.atan2(x)));
        }
    }
    rest.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut counts = vec![north];
    let mut start = 0;
    while start < rest.len() {
        let mut end = start + 1;
        while end < rest.len() && rest[end - 1].0 - rest[end].0 < tol {
            end += 1;
        }
        let group = &rest[start..end];
        let k = group.len();
        if k < 2 {
            return None;
        }
        let rho = group.iter().map(|g| g.1).sum::<f64>() / k as f64;
        let mut az: Vec<f64> = group.iter().map(|g| g.2).collect();
        az.sort_by(f64::total_cmp);
        let ideal = 2.0 * PI / k as f64;
        for i in 0..k {
            let gap = if i + 1 < k { az[i + 1] - az[i] } else { az[0] + 2.0 * PI - az[k - 1] };
            if (gap - ideal).abs() * rho > tol {
                return None;
            }
        }
        counts.push(k);
        start = end;
    }
    counts.push(south);
    Some(counts)
}

/// Polygon type such as `1-4-0`, or `None` if no axis organizes the stars
/// into regular polygons.
pub fn polygon_type(c: &Constellation, tol: f64) -> Option<String> {
    let pts = c.vectors();
    let best = candidate_axes(&pts)
        .into_iter()
        .filter_map(|axis| counts_along(&pts, axis, tol))
        .min_by(|a, b| a.len().cmp(&b.len()).then_with(|| b.cmp(a)))?;
    Some(best.iter().map(|k| k.to_string()).collect::<Vec<_>>().join("-"))
}

/// Name of a constellation: a solid's name, else its polygon type, else `irregular`.
pub fn classify(c: &Constellation, tol: f64) -> String {
    let sig = ShapeSignature::of(c);
    if let Some(s) = Solid::ALL.into_iter().find(|s| sig.matches(&ShapeSignature::of(&s.constellation()), tol)) {
        return s.name().to_string();
    }
    polygon_type(c, tol).unwrap_or_else(|| "irregular".to_string())
}
