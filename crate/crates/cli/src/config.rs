//! Job configuration: a TOML document describing a space, a codifferential
//! and the options of each command.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;
use std::sync::Arc;

use linf_core::cochain::{ArityWindow, Cochain};
use linf_core::deform::ParamCochain;
use linf_core::gspace::{GradedSpace, Parity, Scalar};
use linf_core::morph::Conjugation;
use linf_core::paramring::{ParamPoly, ParamRing};
use linf_core::symw::Monomial;
use serde::Deserialize;
use toml::Spanned;

use crate::expr;

/// A config error with its position in the source document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub expected: Option<String>,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)?;
        if let Some(e) = &self.expected {
            write!(f, " (expected {e})")?;
        }
        Ok(())
    }
}

/// 1-based line and column of a byte offset.
pub fn position(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct RawConfig {
    #[serde(default)]
    name: Option<String>,
    space: Spanned<RawSpace>,
    #[serde(default)]
    differential: Vec<Spanned<RawTerm>>,
    #[serde(default)]
    window: Option<Spanned<RawWindow>>,
    #[serde(default)]
    order: Option<Spanned<u32>>,
    #[serde(default)]
    truncation: Option<Spanned<u32>>,
    #[serde(default)]
    morphism: Option<Spanned<RawMorphism>>,
    #[serde(default)]
    ring_map: Option<Spanned<RawRingMap>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpace {
    #[serde(default)]
    even: Vec<Spanned<String>>,
    #[serde(default)]
    odd: Vec<Spanned<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawCoefficient {
    Int(i64),
    Text(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTerm {
    input: Spanned<BTreeMap<Spanned<String>, Spanned<u32>>>,
    output: Spanned<String>,
    #[serde(default)]
    coefficient: Option<Spanned<RawCoefficient>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWindow {
    #[serde(default = "one")]
    min: u32,
    max: u32,
}

fn one() -> u32 {
    1
}

fn yes() -> bool {
    true
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRing {
    #[serde(default)]
    even: Vec<Spanned<String>>,
    #[serde(default)]
    odd: Vec<Spanned<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMorphism {
    #[serde(default)]
    parameters: Option<Spanned<RawRing>>,
    #[serde(default)]
    conjugation: Option<Spanned<String>>,
    #[serde(default = "yes")]
    identity: bool,
    #[serde(default)]
    terms: Vec<Spanned<RawTerm>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRingMap {
    target: Spanned<RawRing>,
    #[serde(default)]
    images: BTreeMap<Spanned<String>, Spanned<String>>,
    #[serde(default)]
    relations: Vec<Spanned<String>>,
}

/// A validated job configuration.
#[derive(Debug, Clone)]
pub struct JobConfig {
    pub name: Option<String>,
    pub space: GradedSpace,
    pub differential: Cochain,
    pub window: Option<ArityWindow>,
    pub order: Option<u32>,
    pub truncation: Option<u32>,
    pub morphism: Option<MorphismConfig>,
    pub ring_map: Option<RingMapConfig>,
}

/// `g = I + Σ terms` (or `Σ terms` alone) over a parameter ring.
#[derive(Debug, Clone)]
pub struct MorphismConfig {
    pub ring: Arc<ParamRing>,
    pub map: ParamCochain,
    pub conjugation: Conjugation,
}

/// Base change `λ` from the miniversal parameter ring to `target`.
#[derive(Debug, Clone)]
pub struct RingMapConfig {
    pub target: Arc<ParamRing>,
    /// Generator images as written, parsed once the source ring is known.
    pub images: Vec<(String, ParamPoly)>,
    pub relations: Vec<ParamPoly>,
}

/// Default working degree for parameter expressions.
pub const DEFAULT_TRUNCATION: u32 = 4;

struct Ctx<'a> {
    text: &'a str,
}

impl Ctx<'_> {
    fn at(&self, span: Range<usize>, message: impl Into<String>) -> Diagnostic {
        let (line, column) = position(self.text, span.start);
        Diagnostic {
            line,
            column,
            message: message.into(),
            expected: None,
        }
    }

    fn expecting(&self, span: Range<usize>, message: impl Into<String>, expected: impl Into<String>) -> Diagnostic {
        Diagnostic {
            expected: Some(expected.into()),
            ..self.at(span, message)
        }
    }
}

pub fn parse_config(text: &str) -> Result<JobConfig, Diagnostic> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map_or((1, 1), |s| position(text, s.start));
        Diagnostic {
            line,
            column,
            message: e.message().trim().to_string(),
            expected: None,
        }
    })?;
    let cx = Ctx { text };
    let space = build_space(&cx, &raw.space)?;
    let window = match &raw.window {
        Some(w) => {
            let r = w.get_ref();
            Some(
                ArityWindow::new(r.min, r.max)
                    .map_err(|_| cx.expecting(w.span(), "invalid arity window", "1 <= min <= max"))?,
            )
        }
        None => None,
    };
    let truncation = raw.truncation.as_ref().map(|t| *t.get_ref());
    let ring = ParamRing::trivial();
    let mut differential = Cochain::zero(&space);
    for term in &raw.differential {
        let (c, parity_span) = build_term(&cx, &space, &ring, term, None, 0)?;
        if !c.is_zero() && c.parity() != Parity::Odd {
            return Err(cx.expecting(
                parity_span,
                "differential term is even; a codifferential is an odd cochain",
                "an odd number of odd inputs and outputs",
            ));
        }
        differential = differential
            .add(&c.augment())
            .map_err(|e| cx.at(term.span(), e.to_string()))?;
    }
    let degree = truncation.unwrap_or(DEFAULT_TRUNCATION);
    let ring_map = raw
        .ring_map
        .as_ref()
        .map(|r| build_ring_map(&cx, r, degree))
        .transpose()?;
    let morphism = raw
        .morphism
        .as_ref()
        .map(|m| build_morphism(&cx, &space, m, ring_map.as_ref().map(|r| &r.target), degree))
        .transpose()?;
    Ok(JobConfig {
        name: raw.name.clone(),
        space,
        differential,
        window,
        order: raw.order.as_ref().map(|o| *o.get_ref()),
        truncation,
        morphism,
        ring_map,
    })
}

fn build_space(cx: &Ctx, raw: &Spanned<RawSpace>) -> Result<GradedSpace, Diagnostic> {
    let r = raw.get_ref();
    let mut seen: BTreeMap<&str, ()> = BTreeMap::new();
    for n in r.even.iter().chain(&r.odd) {
        if seen.insert(n.get_ref(), ()).is_some() {
            return Err(cx.at(n.span(), format!("duplicate basis name `{}`", n.get_ref())));
        }
        if n.get_ref().is_empty() || !n.get_ref().chars().all(|c| c.is_alphanumeric() || c == '_') {
            return Err(cx.expecting(n.span(), format!("invalid basis name `{}`", n.get_ref()), "letters, digits or `_`"));
        }
    }
    let even: Vec<&str> = r.even.iter().map(|s| s.get_ref().as_str()).collect();
    let odd: Vec<&str> = r.odd.iter().map(|s| s.get_ref().as_str()).collect();
    GradedSpace::new(&even, &odd).map_err(|e| cx.at(raw.span(), e.to_string()))
}

fn build_ring(cx: &Ctx, raw: &Spanned<RawRing>) -> Result<Arc<ParamRing>, Diagnostic> {
    let r = raw.get_ref();
    let even: Vec<&str> = r.even.iter().map(|s| s.get_ref().as_str()).collect();
    let odd: Vec<&str> = r.odd.iter().map(|s| s.get_ref().as_str()).collect();
    ParamRing::new(&even, &odd).map_err(|e| cx.at(raw.span(), e.to_string()))
}

/// Parses one `{ input, output, coefficient }` term. Returns the term and
/// the span to blame for a parity problem.
fn build_term(
    cx: &Ctx,
    space: &GradedSpace,
    ring: &Arc<ParamRing>,
    term: &Spanned<RawTerm>,
    expected_parity: Option<Parity>,
    degree: u32,
) -> Result<(ParamCochain, Range<usize>), Diagnostic> {
    let t = term.get_ref();
    let mut exps = vec![0u32; space.dim()];
    for (name, exp) in t.input.get_ref() {
        let i = space
            .index_of(name.get_ref())
            .map_err(|_| cx.expecting(name.span(), format!("unknown basis vector `{}`", name.get_ref()), space_names(space)))?;
        if space.is_odd(i) && *exp.get_ref() > 1 {
            return Err(cx.at(
                exp.span(),
                format!("odd basis vector squared (`{}` has exponent {})", name.get_ref(), exp.get_ref()),
            ));
        }
        exps[i] += *exp.get_ref();
    }
    if exps.iter().all(|&e| e == 0) {
        return Err(cx.expecting(t.input.span(), "empty input monomial", "at least one basis vector"));
    }
    let input = Monomial::new(space, exps).map_err(|e| cx.at(t.input.span(), e.to_string()))?;
    let out = space.index_of(t.output.get_ref()).map_err(|_| {
        cx.expecting(t.output.span(), format!("unknown basis vector `{}`", t.output.get_ref()), space_names(space))
    })?;
    let coefficient = match &t.coefficient {
        None => ParamPoly::one(ring),
        Some(c) => match c.get_ref() {
            RawCoefficient::Int(n) => ParamPoly::constant(ring, Scalar::from_integer((*n).into())),
            RawCoefficient::Text(s) => expr::parse(s, ring, degree).map_err(|e| {
                // +1 for the opening quote
                cx.at(c.span().start + 1 + e.offset..c.span().end, format!("bad coefficient: {}", e.message))
            })?,
        },
    };
    let basis = Cochain::basis(space, &input, out).map_err(|e| cx.at(term.span(), e.to_string()))?;
    if let Some(p) = expected_parity {
        let total = match coefficient.parity() {
            Some(q) => Parity::from_bool(q.is_odd() != basis.parity().is_odd()),
            None => return Err(cx.at(term.span(), "coefficient mixes even and odd parameters")),
        };
        if !coefficient.is_zero() && total != p {
            return Err(cx.at(term.span(), format!("term has parity {total}, expected {p}")));
        }
    }
    let value = ParamCochain::term(&basis, &coefficient).map_err(|e| cx.at(term.span(), e.to_string()))?;
    let blame = t.output.span().start.min(t.input.span().start)..term.span().end;
    Ok((value, blame))
}

fn space_names(space: &GradedSpace) -> String {
    space.names().iter().map(|n| format!("`{n}`")).collect::<Vec<_>>().join(", ")
}

fn build_morphism(
    cx: &Ctx,
    space: &GradedSpace,
    raw: &Spanned<RawMorphism>,
    target: Option<&Arc<ParamRing>>,
    degree: u32,
) -> Result<MorphismConfig, Diagnostic> {
    let m = raw.get_ref();
    let ring = match (&m.parameters, target) {
        (Some(p), _) => build_ring(cx, p)?,
        (None, Some(t)) => t.clone(),
        (None, None) => ParamRing::trivial(),
    };
    let conjugation = match &m.conjugation {
        None => Conjugation::InverseFirst,
        Some(s) => match s.get_ref().as_str() {
            "inverse-first" => Conjugation::InverseFirst,
            "inverse-last" => Conjugation::InverseLast,
            other => {
                return Err(cx.expecting(
                    s.span(),
                    format!("unknown conjugation `{other}`"),
                    "`inverse-first` or `inverse-last`",
                ))
            }
        },
    };
    let mut map = if m.identity {
        ParamCochain::constant(&linf_core::morph::identity_cochain(space), &ring)
    } else {
        ParamCochain::zero(space, &ring)
    };
    for term in &m.terms {
        let (c, _) = build_term(cx, space, &ring, term, Some(Parity::Even), degree)?;
        map = map.add(&c).map_err(|e| cx.at(term.span(), e.to_string()))?;
    }
    Ok(MorphismConfig { ring, map, conjugation })
}

fn build_ring_map(cx: &Ctx, raw: &Spanned<RawRingMap>, degree: u32) -> Result<RingMapConfig, Diagnostic> {
    let r = raw.get_ref();
    let target = build_ring(cx, &r.target)?;
    let parse = |s: &Spanned<String>| {
        expr::parse(s.get_ref(), &target, degree)
            .map_err(|e| cx.at(s.span().start + 1 + e.offset..s.span().end, format!("bad expression: {}", e.message)))
    };
    let mut images = Vec::new();
    for (name, image) in &r.images {
        images.push((name.get_ref().clone(), parse(image)?));
    }
    let relations = r.relations.iter().map(parse).collect::<Result<Vec<_>, _>>()?;
    Ok(RingMapConfig { target, images, relations })
}
