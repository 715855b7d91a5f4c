//! File formats: JSON states and constellations, CSV spectra clouds and
//! optimization reports, SVG plots.
//!
//! State files are `{"n": N, "amps": [[re, im], ...]}` with `N + 1`
//! amplitudes in the number basis `|n-k, k>`, `k = 0..N`. Constellation
//! files are `{"n": N, "stars": [{"theta": t, "phi": p}, ...]}`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lieb_solovej::{barycentric_xy, simplex_orbit, SpectraCloud};
use crate::sphere_opt::TableRecord;
use crate::states::{Constellation, SpinState, Star};
use crate::Complex64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub n: usize,
    pub amps: Vec<[f64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstellationFile {
    pub n: usize,
    pub stars: Vec<Star>,
}

/// Contents of either kind of file.
#[derive(Clone, Debug, PartialEq)]
pub enum Document {
    State(SpinState),
    Constellation(Constellation),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawDocument {
    State(StateFile),
    Constellation(ConstellationFile),
}

impl StateFile {
    pub fn from_state(s: &SpinState) -> StateFile {
        StateFile { n: s.n(), amps: s.amplitudes().iter().map(|a| [a.re, a.im]).collect() }
    }

    pub fn into_state(self) -> Result<SpinState> {
        if self.amps.len() != self.n + 1 {
            return Err(Error::DimensionMismatch(self.n + 1, self.amps.len()));
        }
        if self.amps.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("non-finite amplitude".into()));
        }
        SpinState::new(self.amps.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
    }
}

impl ConstellationFile {
    pub fn from_constellation(c: &Constellation) -> ConstellationFile {
        ConstellationFile { n: c.n(), stars: c.stars.clone() }
    }

    pub fn into_constellation(self) -> Result<Constellation> {
        if self.stars.len() != self.n {
            return Err(Error::DimensionMismatch(self.n, self.stars.len()));
        }
        if self.stars.iter().any(|s| !s.theta.is_finite() || !s.phi.is_finite()) {
            return Err(Error::InvalidInput("non-finite star coordinate".into()));
        }
        Ok(Constellation::new(self.stars.into_iter().map(|s| Star::new(s.theta, s.phi)).collect()))
    }
}

pub fn parse_document(text: &str) -> Result<Document> {
    let raw: RawDocument = serde_json::from_str(text)
        .map_err(|e| Error::InvalidInput(format!("neither a state nor a constellation file: {e}")))?;
    Ok(match raw {
        RawDocument::State(f) => Document::State(f.into_state()?),
        RawDocument::Constellation(f) => Document::Constellation(f.into_constellation()?),
    })
}

pub fn read_document(path: &Path) -> Result<Document> {
    parse_document(&fs::read_to_string(path)?)
}

pub fn read_state(path: &Path) -> Result<SpinState> {
    let f: StateFile = serde_json::from_str(&fs::read_to_string(path)?)
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    f.into_state()
}

pub fn read_constellation(path: &Path) -> Result<Constellation> {
    let f: ConstellationFile = serde_json::from_str(&fs::read_to_string(path)?)
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    f.into_constellation()
}

pub fn state_json(s: &SpinState) -> String {
    serde_json::to_string_pretty(&StateFile::from_state(s)).expect("serializable") + "\n"
}

pub fn constellation_json(c: &Constellation) -> String {
    serde_json::to_string_pretty(&ConstellationFile::from_constellation(c)).expect("serializable") + "\n"
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => Error::Io(e),
        other => Error::InvalidInput(format!("csv: {other:?}")),
    }
}

fn csv_string(rows: Vec<Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.write_record(&row).map_err(csv_error)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("utf-8"))
}

/// Columns `kind, lambda1..lambdaR, bary_x, bary_y` with `R = steps + 1`,
/// the largest rank the image of a pure state can have.
pub fn spectra_csv(cloud: &SpectraCloud) -> Result<String> {
    let dim = cloud.n + 1 + cloud.steps;
    let r = (cloud.steps + 1).min(dim);
    let mut header = vec!["kind".to_string()];
    header.extend((1..=r).map(|i| format!("lambda{i}")));
    header.extend(["bary_x".to_string(), "bary_y".to_string()]);
    let mut rows = vec![header];
    for p in &cloud.points {
        let mut row = vec![p.kind.label()];
        row.extend((0..r).map(|i| p.spectrum.values.get(i).copied().unwrap_or(0.0).to_string()));
        let (x, y) = p.spectrum.barycentric();
        row.extend([x.to_string(), y.to_string()]);
        rows.push(row);
    }
    csv_string(rows)
}

const SIMPLEX_PX: f64 = 560.0;
const MARGIN_PX: f64 = 20.0;

fn simplex_xy(x: f64, y: f64) -> (f64, f64) {
    let height = SIMPLEX_PX * 3f64.sqrt() / 2.0;
    (MARGIN_PX + SIMPLEX_PX * x, MARGIN_PX + height - SIMPLEX_PX * y)
}

/// Scatter plot of a spectra cloud on the equilateral probability simplex of
/// the three largest eigenvalues, with the hull of the coherent image's
/// permutations outlined.
pub fn simplex_svg(cloud: &SpectraCloud) -> String {
    let w = SIMPLEX_PX + 2.0 * MARGIN_PX;
    let h = SIMPLEX_PX * 3f64.sqrt() / 2.0 + 2.0 * MARGIN_PX;
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.1} {h:.1}">"#);
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let corners: Vec<_> = [(0.0, 0.0), (1.0, 0.0), (0.5, 3f64.sqrt() / 2.0)]
        .iter()
        .map(|&(x, y)| simplex_xy(x, y))
        .collect();
    let _ = writeln!(s, r#"<polygon points="{}" fill="none" stroke="black" stroke-width="1"/>"#, points_attr(&corners));

    // hexagon of coherent-image permutations, in angular order about the centre
    let mut hull: Vec<_> = simplex_orbit(&cloud.coherent).iter().map(|p| barycentric_xy(*p)).collect();
    hull.sort_by(|a, b| (a.1 - 0.2887).atan2(a.0 - 0.5).total_cmp(&(b.1 - 0.2887).atan2(b.0 - 0.5)));
    let hull: Vec<_> = hull.into_iter().map(|(x, y)| simplex_xy(x, y)).collect();
    let _ = writeln!(
        s,
        r#"<polygon points="{}" fill="none" stroke="gray" stroke-dasharray="4 3" stroke-width="1"/>"#,
        points_attr(&hull)
    );
    for p in &cloud.points {
        let (x, y) = p.spectrum.barycentric();
        let (px, py) = simplex_xy(x, y);
        let (r, fill) = match p.kind {
            crate::lieb_solovej::CloudKind::Sample => (1.2, "#4477aa"),
            crate::lieb_solovej::CloudKind::Number(_) => (3.5, "#cc3311"),
            crate::lieb_solovej::CloudKind::Segment(..) => (1.6, "#228833"),
        };
        let _ = writeln!(s, r#"<circle cx="{px:.2}" cy="{py:.2}" r="{r}" fill="{fill}"/>"#);
    }
    let (cx, cy) = cloud.coherent.barycentric();
    let (cx, cy) = simplex_xy(cx, cy);
    let _ = writeln!(s, r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="5" fill="none" stroke="black" stroke-width="1.5"/>"#);
    s.push_str("</svg>\n");
    s
}

fn points_attr(pts: &[(f64, f64)]) -> String {
    pts.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect::<Vec<_>>().join(" ")
}

/// Orthographic view of a constellation from a fixed oblique direction;
/// stars on the near hemisphere are filled, far ones hollow.
pub fn sphere_svg(c: &Constellation) -> String {
    const R: f64 = 200.0;
    const C: f64 = 220.0;
    // view direction and screen axes
    let view = normalize([1.0, 0.7, 0.5]);
    let right = normalize([-view[1], view[0], 0.0]);
    let up = [
        view[1] * right[2] - view[2] * right[1],
        view[2] * right[0] - view[0] * right[2],
        view[0] * right[1] - view[1] * right[0],
    ];
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="440" height="440" viewBox="0 0 440 440">"#);
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<circle cx="{C}" cy="{C}" r="{R}" fill="none" stroke="black" stroke-width="1"/>"#);
    let mut stars: Vec<_> = c.vectors();
    // far side first so near stars draw on top
    stars.sort_by(|a, b| dot(*a, view).total_cmp(&dot(*b, view)));
    for p in stars {
        let (x, y) = (C + R * dot(p, right), C - R * dot(p, up));
        if dot(p, view) >= 0.0 {
            let _ = writeln!(s, r##"<circle cx="{x:.2}" cy="{y:.2}" r="7" fill="#cc3311"/>"##);
        } else {
            let _ = writeln!(s, r##"<circle cx="{x:.2}" cy="{y:.2}" r="7" fill="none" stroke="#cc3311" stroke-width="1.5"/>"##);
        }
    }
    s.push_str("</svg>\n");
    s
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn normalize(v: [f64; 3]) -> [f64; 3] {
    let r = dot(v, v).sqrt();
    [v[0] / r, v[1] / r, v[2] / r]
}

/// One line per record: type found and expected, values and match flags.
pub fn table_csv(records: &[TableRecord]) -> Result<String> {
    let mut rows = vec![[
        "n",
        "objective",
        "table_type",
        "family_type",
        "matches_table",
        "value_matches_table",
        "best_value",
        "reference_value",
        "wehrl",
        "thomson",
        "tammes",
        "params",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect::<Vec<_>>()];
    for r in records {
        let params = r
            .param_names
            .iter()
            .zip(&r.params)
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(";");
        rows.push(vec![
            r.n.to_string(),
            r.objective.to_string(),
            r.table_type.clone(),
            r.family_type.clone(),
            r.matches_table.to_string(),
            r.value_matches_table.to_string(),
            r.best_value.to_string(),
            r.reference_value.to_string(),
            r.values.wehrl.to_string(),
            r.values.thomson.to_string(),
            r.values.tammes.to_string(),
            params,
        ]);
    }
    csv_string(rows)
}
