//! Versioned JSON schema for command results.
//!
//! Every document carries the schema version, the engine version, the
//! space, the arity window and the truncation degree. Scalars are strings
//! such as `"-3/2"`; monomials are maps from basis or parameter names to
//! exponents. [`Document::from_json`] followed by the `to_*` conversions
//! rebuilds the engine objects exactly.

use std::collections::BTreeMap;
use std::sync::Arc;

use linf_core::cochain::{ArityWindow, Cochain};
use linf_core::deform::ParamCochain;
use linf_core::gspace::{GradedSpace, Scalar};
use linf_core::paramring::{ParamMonomial, ParamPoly, ParamRing};
use linf_core::symw::Monomial;
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub schema_version: u32,
    pub engine_version: String,
    pub command: String,
    pub space: Basis,
    pub window: Window,
    pub truncation: Option<u32>,
    pub result: Result,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Basis {
    pub even: Vec<String>,
    pub odd: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub min: u32,
    pub max: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub input: BTreeMap<String, u32>,
    pub output: String,
    pub coefficient: String,
}

pub type CochainJson = Vec<Term>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyTerm {
    pub monomial: BTreeMap<String, u32>,
    pub coefficient: String,
}

pub type PolyJson = Vec<PolyTerm>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamTerm {
    pub monomial: BTreeMap<String, u32>,
    pub cochain: CochainJson,
}

pub type ParamCochainJson = Vec<ParamTerm>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketEntry {
    pub left: CochainJson,
    pub right: CochainJson,
    pub value: CochainJson,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountsJson {
    pub even: usize,
    pub odd: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArityJson {
    pub arity: u32,
    pub cocycles: CountsJson,
    pub coboundaries: CountsJson,
    pub cohomology: CountsJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParameterJson {
    pub name: String,
    pub odd: bool,
    pub arity: u32,
    pub delta: CochainJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationJson {
    pub parameter: String,
    pub generator: PolyJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Result {
    BracketTable {
        entries: Vec<BracketEntry>,
    },
    Cohomology {
        codifferential: CochainJson,
        stable_arity: u32,
        dimensions: Vec<ArityJson>,
        total: CountsJson,
        cocycles: Vec<CochainJson>,
        coboundaries: Vec<CochainJson>,
        deltas: Vec<CochainJson>,
    },
    Deformation {
        codifferential: CochainJson,
        ring: Basis,
        parameters: Vec<ParameterJson>,
        deformation: ParamCochainJson,
        relations: Vec<RelationJson>,
        order: u32,
        status: String,
    },
    Transport {
        codifferential: CochainJson,
        ring: Basis,
        conjugation: String,
        morphism: ParamCochainJson,
        transported: ParamCochainJson,
        relations: Vec<PolyJson>,
    },
    Check {
        codifferential: CochainJson,
        odd: bool,
        square: CochainJson,
        holds: bool,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum SchemaError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schema version {0}")]
    Version(u32),
    #[error("bad scalar `{0}`")]
    Scalar(String),
    #[error(transparent)]
    Engine(#[from] linf_core::Error),
}

impl Document {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    pub fn from_json(text: &str) -> std::result::Result<Document, SchemaError> {
        let doc: Document = serde_json::from_str(text)?;
        if doc.schema_version != SCHEMA_VERSION {
            return Err(SchemaError::Version(doc.schema_version));
        }
        Ok(doc)
    }

    pub fn space(&self) -> std::result::Result<GradedSpace, SchemaError> {
        Ok(GradedSpace::new(&self.space.even, &self.space.odd)?)
    }

    pub fn window(&self) -> std::result::Result<ArityWindow, SchemaError> {
        Ok(ArityWindow::new(self.window.min, self.window.max)?)
    }
}

pub fn basis_of(space: &GradedSpace) -> Basis {
    Basis {
        even: space.even_names().to_vec(),
        odd: space.odd_names().to_vec(),
    }
}

pub fn ring_basis(ring: &ParamRing) -> Basis {
    Basis {
        even: ring.even_names().to_vec(),
        odd: ring.odd_names().to_vec(),
    }
}

pub fn ring_of(b: &Basis) -> std::result::Result<Arc<ParamRing>, SchemaError> {
    Ok(ParamRing::new(&b.even, &b.odd)?)
}

pub fn window_of(w: ArityWindow) -> Window {
    Window { min: w.min(), max: w.max() }
}

fn scalar_str(x: &Scalar) -> String {
    x.to_string()
}

fn parse_scalar(s: &str) -> std::result::Result<Scalar, SchemaError> {
    s.parse().map_err(|_| SchemaError::Scalar(s.to_string()))
}

fn named(names: &[String], exps: &[u32]) -> BTreeMap<String, u32> {
    names
        .iter()
        .zip(exps)
        .filter(|(_, &e)| e > 0)
        .map(|(n, &e)| (n.clone(), e))
        .collect()
}

pub fn cochain_json(c: &Cochain) -> CochainJson {
    let w = c.space();
    c.coordinates()
        .into_iter()
        .map(|((m, out), x)| Term {
            input: named(w.names(), m.exps()),
            output: w.name(out).to_string(),
            coefficient: scalar_str(&x),
        })
        .collect()
}

pub fn to_cochain(space: &GradedSpace, terms: &CochainJson) -> std::result::Result<Cochain, SchemaError> {
    let mut c = Cochain::zero(space);
    for t in terms {
        let pairs: Vec<(&str, u32)> = t.input.iter().map(|(n, &e)| (n.as_str(), e)).collect();
        let m = Monomial::from_pairs(space, &pairs)?;
        let out = space.index_of(&t.output)?;
        let x = parse_scalar(&t.coefficient)?;
        c = c.add(&Cochain::basis(space, &m, out)?.scale(&x))?;
    }
    Ok(c)
}

pub fn poly_json(p: &ParamPoly) -> PolyJson {
    let ring = p.ring();
    p.terms()
        .iter()
        .map(|(m, c)| PolyTerm {
            monomial: named(ring.names(), m.exps()),
            coefficient: scalar_str(c),
        })
        .collect()
}

fn param_monomial(ring: &Arc<ParamRing>, m: &BTreeMap<String, u32>) -> std::result::Result<ParamMonomial, SchemaError> {
    let mut exps = vec![0; ring.dim()];
    for (n, &e) in m {
        exps[ring.index_of(n)?] = e;
    }
    Ok(ParamMonomial::new(ring, exps)?)
}

pub fn to_poly(ring: &Arc<ParamRing>, terms: &PolyJson) -> std::result::Result<ParamPoly, SchemaError> {
    let mut out = Vec::new();
    for t in terms {
        out.push((param_monomial(ring, &t.monomial)?, parse_scalar(&t.coefficient)?));
    }
    Ok(ParamPoly::from_terms(ring, out))
}

pub fn param_cochain_json(x: &ParamCochain) -> ParamCochainJson {
    let ring = x.ring();
    x.terms()
        .iter()
        .map(|(m, c)| ParamTerm {
            monomial: named(ring.names(), m.exps()),
            cochain: cochain_json(c),
        })
        .collect()
}

pub fn to_param_cochain(
    space: &GradedSpace,
    ring: &Arc<ParamRing>,
    terms: &ParamCochainJson,
) -> std::result::Result<ParamCochain, SchemaError> {
    let mut out = ParamCochain::zero(space, ring);
    for t in terms {
        let m = param_monomial(ring, &t.monomial)?;
        let c = to_cochain(space, &t.cochain)?;
        out = out.add(&ParamCochain::term(&c, &ParamPoly::monomial(ring, m, Scalar::from_integer(1.into())))?)?;
    }
    Ok(out)
}
