//! JSON encodings of subspaces, systems, operators, graphs and families.
//!
//! Complex numbers are `[re, im]` pairs; plain numbers are accepted as reals
//! on input.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use subclosure_core::blockmodel::Family;
use subclosure_core::images::{OperatorFamily, OperatorKind};
use subclosure_core::numerics::c64;
use subclosure_core::paircalc::{FunctionQuad, ScalarFunction};
use subclosure_core::systems::WeightedGraph;
use subclosure_core::{CMatrix, Subspace, SubspaceSystem, Tolerances, C64};

/// Failure to produce an analysis input.
#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("cannot parse {path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error(transparent)]
    Core(#[from] subclosure_core::Error),
}

impl InputError {
    fn parse(path: &Path, message: impl Into<String>) -> Self {
        InputError::Parse { path: path.to_path_buf(), message: message.into() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cx(pub C64);

impl Serialize for Cx {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.0.re, self.0.im].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cx {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Pair([f64; 2]),
            Real(f64),
        }
        Ok(match Raw::deserialize(d)? {
            Raw::Pair([re, im]) => Cx(c64(re, im)),
            Raw::Real(re) => Cx(c64(re, 0.0)),
        })
    }
}

pub fn cx_vec(v: &[C64]) -> Vec<Cx> {
    v.iter().map(|&z| Cx(z)).collect()
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SubspaceJson {
    pub ambient_dim: usize,
    /// Spanning vectors (columns).
    pub vectors: Vec<Vec<Cx>>,
}

impl SubspaceJson {
    pub fn from_subspace(s: &Subspace) -> Self {
        let b = s.basis();
        Self { ambient_dim: s.ambient_dim(), vectors: (0..b.cols()).map(|j| cx_vec(&b.column(j))).collect() }
    }

    fn to_subspace(&self, path: &Path, tol: &Tolerances) -> Result<Subspace, InputError> {
        let d = self.ambient_dim;
        if let Some(v) = self.vectors.iter().find(|v| v.len() != d) {
            return Err(InputError::parse(path, format!("vector of length {} in ambient dimension {d}", v.len())));
        }
        if self.vectors.is_empty() {
            return Ok(Subspace::zero(d));
        }
        let cols: Vec<Vec<C64>> = self.vectors.iter().map(|v| v.iter().map(|z| z.0).collect()).collect();
        Ok(Subspace::from_spanning(&CMatrix::from_columns(d, &cols), tol)?)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SystemJson {
    pub ambient_dim: usize,
    pub members: Vec<SubspaceJson>,
}

impl SystemJson {
    pub fn from_system(s: &SubspaceSystem) -> Self {
        Self { ambient_dim: s.ambient_dim(), members: s.members().iter().map(SubspaceJson::from_subspace).collect() }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct OperatorJson {
    pub ambient_dim: usize,
    /// Row-major matrices.
    pub matrices: Vec<Vec<Vec<Cx>>>,
    #[serde(default)]
    pub kind: Option<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct GraphJson {
    pub n: usize,
    /// `[i, j, weight]` with 1-based vertices.
    pub edges: Vec<(usize, usize, f64)>,
}

/// Polynomial coefficients of `f₁..f₄`, lowest degree first.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct QuadJson {
    pub f1: Vec<Cx>,
    pub f2: Vec<Cx>,
    pub f3: Vec<Cx>,
    pub f4: Vec<Cx>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct AlphaJson {
    pub alpha: Vec<Vec<Cx>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FamilySpec {
    pub family: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    #[serde(default = "default_members")]
    pub n: usize,
    #[serde(default = "default_horizon")]
    pub horizon: usize,
}

fn default_members() -> usize {
    3
}

fn default_horizon() -> usize {
    100
}

impl FamilySpec {
    pub fn family(&self) -> Result<Family, InputError> {
        Ok(Family::parse(&self.family, self.params.get("rate").copied())?)
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, InputError> {
    let text = fs::read_to_string(path).map_err(|source| InputError::Io { path: path.to_path_buf(), source })?;
    serde_json::from_str(&text).map_err(|e| InputError::parse(path, e.to_string()))
}

pub fn load_subspace(path: &Path, tol: &Tolerances) -> Result<Subspace, InputError> {
    read_json::<SubspaceJson>(path)?.to_subspace(path, tol)
}

pub fn load_system(path: &Path, tol: &Tolerances) -> Result<SubspaceSystem, InputError> {
    let raw: SystemJson = read_json(path)?;
    if raw.members.is_empty() {
        return Err(InputError::parse(path, "system has no members"));
    }
    let mut members = Vec::with_capacity(raw.members.len());
    for m in &raw.members {
        if m.ambient_dim != raw.ambient_dim {
            return Err(InputError::parse(path, "member ambient_dim differs from system ambient_dim"));
        }
        members.push(m.to_subspace(path, tol)?);
    }
    Ok(SubspaceSystem::new(members)?)
}

fn matrix(path: &Path, d: usize, rows: &[Vec<Cx>]) -> Result<CMatrix, InputError> {
    if rows.len() != d || rows.iter().any(|r| r.len() != d) {
        return Err(InputError::parse(path, format!("matrix is not {d}x{d}")));
    }
    let data = rows.iter().flat_map(|r| r.iter().map(|z| z.0)).collect();
    Ok(CMatrix::from_vec(d, d, data))
}

pub fn load_operators(path: &Path, tol: &Tolerances) -> Result<OperatorFamily, InputError> {
    let raw: OperatorJson = read_json(path)?;
    let mats = raw
        .matrices
        .iter()
        .map(|m| matrix(path, raw.ambient_dim, m))
        .collect::<Result<Vec<_>, _>>()?;
    let kinds = match &raw.kind {
        None => vec![OperatorKind::General; mats.len()],
        Some(ks) => ks
            .iter()
            .map(|k| match k.as_str() {
                "nonnegative" => Ok(OperatorKind::Nonnegative),
                "general" => Ok(OperatorKind::General),
                other => Err(InputError::parse(path, format!("unknown operator kind '{other}'"))),
            })
            .collect::<Result<Vec<_>, _>>()?,
    };
    Ok(OperatorFamily::new(mats, kinds, tol)?)
}

pub fn load_graph(path: &Path) -> Result<WeightedGraph, InputError> {
    let raw: GraphJson = read_json(path)?;
    let mut edges = Vec::with_capacity(raw.edges.len());
    for &(i, j, w) in &raw.edges {
        if i == 0 || j == 0 {
            return Err(InputError::parse(path, "vertices are numbered from 1"));
        }
        edges.push((i - 1, j - 1, w));
    }
    Ok(WeightedGraph::new(raw.n, edges)?)
}

pub fn load_quad(path: &Path) -> Result<FunctionQuad, InputError> {
    let raw: QuadJson = read_json(path)?;
    let f = |c: &[Cx]| ScalarFunction::Polynomial(c.iter().map(|z| z.0).collect());
    Ok(FunctionQuad::new(f(&raw.f1), f(&raw.f2), f(&raw.f3), f(&raw.f4)))
}

pub fn load_alpha(path: &Path) -> Result<CMatrix, InputError> {
    let raw: AlphaJson = read_json(path)?;
    let n = raw.alpha.len();
    matrix(path, n, &raw.alpha)
}

pub fn load_family_spec(path: &Path) -> Result<FamilySpec, InputError> {
    read_json(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_accepts_pairs_and_reals() {
        let v: Vec<Cx> = serde_json::from_str("[[1.0, 2.0], 3.5]").unwrap();
        assert_eq!(v, vec![Cx(c64(1.0, 2.0)), Cx(c64(3.5, 0.0))]);
        assert_eq!(serde_json::to_string(&v).unwrap(), "[[1.0,2.0],[3.5,0.0]]");
    }

    #[test]
    fn subspace_round_trip() {
        let s = Subspace::coordinate(3, &[1]);
        let j = SubspaceJson::from_subspace(&s);
        let back = j.to_subspace(Path::new("-"), &Tolerances::default()).unwrap();
        assert!(back.projector_distance(&s) < 1e-15);
    }
}
