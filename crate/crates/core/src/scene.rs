//! JSON scene files.
//!
//! ```json
//! {
//!   "variables": ["x1", "x2", "x3"],
//!   "p": 2,
//!   "f": ["x1", "x2"],
//!   "g": [{"num": "1", "den": "x3"}, "0"],
//!   "extension": "x3",
//!   "labels": {"Y": "y", "w": "w"},
//!   "check_regular": true
//! }
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parse::parse_poly;
use crate::poly::{Frac, Poly, PolyRing};
use crate::tangent::{DeformationScene, Labels};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Perturbation {
    Poly(String),
    Frac { num: String, den: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneLabels {
    #[serde(rename = "Y", default = "default_y")]
    pub y: String,
    #[serde(default = "default_w")]
    pub w: String,
}

fn default_y() -> String {
    "y".into()
}

fn default_w() -> String {
    "w".into()
}

fn yes() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneFile {
    pub variables: Vec<String>,
    pub p: usize,
    pub f: Vec<String>,
    pub g: Vec<Perturbation>,
    pub extension: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<SceneLabels>,
    #[serde(default = "yes")]
    pub check_regular: bool,
}

fn poly_field(text: &str, ring: &PolyRing, field: String) -> Result<Poly> {
    parse_poly(text, ring).map_err(|e| match e {
        Error::Parse { offset, message } => Error::scene(field, format!("{message} at character offset {offset} in {text:?}")),
        other => other,
    })
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_') && chars.all(|c| c.is_alphanumeric() || c == '_')
}

impl SceneFile {
    pub fn from_json(text: &str) -> Result<SceneFile> {
        serde_json::from_str(text)
            .map_err(|e| Error::scene("json", format!("{e} (line {}, column {})", e.line(), e.column())))
    }

    pub fn to_scene(&self) -> Result<DeformationScene> {
        if self.variables.is_empty() {
            return Err(Error::scene("variables", "at least one variable is required"));
        }
        for (i, v) in self.variables.iter().enumerate() {
            if !valid_name(v) {
                return Err(Error::scene(format!("variables[{i}]"), format!("{v:?} is not an identifier")));
            }
            if v == "eps" {
                return Err(Error::scene(format!("variables[{i}]"), "'eps' is reserved for the dual unit"));
            }
            if self.variables[..i].contains(v) {
                return Err(Error::scene(format!("variables[{i}]"), format!("duplicate variable {v:?}")));
            }
        }
        if self.p == 0 {
            return Err(Error::scene("p", "codimension must be at least 1"));
        }
        if self.f.len() != self.p {
            return Err(Error::scene("f", format!("expected p = {} entries, found {}", self.p, self.f.len())));
        }
        if self.g.len() != self.p {
            return Err(Error::scene("g", format!("expected p = {} entries, found {}", self.p, self.g.len())));
        }
        let ring = PolyRing::new(&self.variables);
        let f = self
            .f
            .iter()
            .enumerate()
            .map(|(i, s)| poly_field(s, &ring, format!("f[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        let mut g = Vec::with_capacity(self.p);
        for (i, entry) in self.g.iter().enumerate() {
            g.push(match entry {
                Perturbation::Poly(s) => Frac::from_poly(poly_field(s, &ring, format!("g[{i}]"))?),
                Perturbation::Frac { num, den } => {
                    let num = poly_field(num, &ring, format!("g[{i}].num"))?;
                    let den = poly_field(den, &ring, format!("g[{i}].den"))?;
                    Frac::new(num, den).ok_or_else(|| Error::scene(format!("g[{i}].den"), "zero denominator"))?
                }
            });
        }
        let extension = poly_field(&self.extension, &ring, "extension".into())?;
        let labels = self.labels.as_ref().map_or_else(Labels::default, |l| Labels { y: l.y.clone(), w: l.w.clone() });
        DeformationScene::new(f, g, extension, labels, self.check_regular)
    }

    pub fn from_scene(scene: &DeformationScene) -> SceneFile {
        let g = scene
            .g
            .iter()
            .map(|x| match x.as_poly() {
                Some(p) => Perturbation::Poly(p.to_string()),
                None => Perturbation::Frac { num: x.num().to_string(), den: x.den().to_string() },
            })
            .collect();
        SceneFile {
            variables: scene.ring.names().to_vec(),
            p: scene.p(),
            f: scene.f.iter().map(|x| x.to_string()).collect(),
            g,
            extension: scene.extension.to_string(),
            labels: Some(SceneLabels { y: scene.labels.y.clone(), w: scene.labels.w.clone() }),
            check_regular: scene.check_regular,
        }
    }
}

pub fn parse_scene(text: &str) -> Result<DeformationScene> {
    SceneFile::from_json(text)?.to_scene()
}

/// Canonical pretty JSON with a trailing newline.
pub fn render_scene(scene: &DeformationScene) -> String {
    let mut out = serde_json::to_string_pretty(&SceneFile::from_scene(scene)).expect("scene files serialize");
    out.push('\n');
    out
}
