//! Command dispatch and rendering.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use linf_core::cochain::{basis_keys, bracket, check_codifferential, ArityWindow, Cochain};
use linf_core::deform::{cohomology, miniversal_with_truncation, CohomologyData, Counts, Deformation, ParamCochain};
use linf_core::gspace::Scalar;
use linf_core::morph::{transport, Conjugation, Morphism, RingMorphism};
use linf_core::paramring::{ParamPoly, RelationIdeal};
use num_traits::One;

use crate::config::{JobConfig, DEFAULT_TRUNCATION};
use crate::notation::{self, linear_combination, monomial_key, param_monomial, Notation, Style};
use crate::structured::{self as st, Document};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    BracketTable,
    Cohomology,
    Deform,
    Transport,
    Check,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::BracketTable => "bracket-table",
            Command::Cohomology => "cohomology",
            Command::Deform => "deform",
            Command::Transport => "transport",
            Command::Check => "check",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Plain,
    Latex,
    Structured,
}

/// Command-line overrides of config values.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub window: Option<ArityWindow>,
    pub order: Option<u32>,
}

/// How a successful run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Done,
    /// The deformation stopped at the order or degree limit.
    Truncated,
    /// `check` found `[d,d] ≠ 0`.
    NotCodifferential,
}

#[derive(Debug, Clone)]
pub struct Output {
    pub text: String,
    pub outcome: Outcome,
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Engine(linf_core::Error),
}

impl From<linf_core::Error> for RunError {
    fn from(e: linf_core::Error) -> Self {
        use linf_core::Error as E;
        match e {
            E::NotCodifferential(_)
            | E::NotCocycle { .. }
            | E::RelationViolated(_)
            | E::NotInvertible
            | E::OddMorphism
            | E::BadImage(_) => RunError::Precondition(e.to_string()),
            other => RunError::Engine(other),
        }
    }
}

pub const DEFAULT_MAX_ARITY: u32 = 6;
pub const DEFAULT_MAX_ORDER: u32 = 6;

fn window_for(cmd: Command, cfg: &JobConfig, o: &Overrides, order: u32) -> Result<ArityWindow, RunError> {
    if let Some(w) = o.window.or(cfg.window) {
        return Ok(w);
    }
    let max = match cmd {
        Command::Deform => order + 3,
        _ => DEFAULT_MAX_ARITY,
    };
    Ok(ArityWindow::up_to(max)?)
}

pub fn execute(cmd: Command, cfg: &JobConfig, o: &Overrides, format: Format) -> Result<Output, RunError> {
    let order = o.order.or(cfg.order).unwrap_or(DEFAULT_MAX_ORDER);
    let window = window_for(cmd, cfg, o, order)?;
    let r = Renderer {
        n: Notation::new(&cfg.space),
        format,
    };
    match cmd {
        Command::BracketTable => bracket_table(&r, cfg, window),
        Command::Cohomology => {
            require_codifferential(&r, &cfg.differential, window)?;
            let h = cohomology(&cfg.differential, window)?;
            Ok(r.cohomology(&h))
        }
        Command::Deform => {
            require_codifferential(&r, &cfg.differential, window)?;
            let truncation = cfg.truncation.unwrap_or(order + 2);
            let defm = miniversal_with_truncation(&cfg.differential, order, window, truncation)?;
            Ok(r.deformation(&defm))
        }
        Command::Transport => {
            require_codifferential(&r, &cfg.differential, window)?;
            run_transport(&r, cfg, window, order)
        }
        Command::Check => Ok(r.check(&cfg.differential, window)?),
    }
}

fn require_codifferential(r: &Renderer, d: &Cochain, window: ArityWindow) -> Result<(), RunError> {
    let report = check_codifferential(d, window)?;
    if report.holds() {
        return Ok(());
    }
    let n = &r.n;
    let mut msg = format!("d = {} is not a codifferential", n.cochain(Style::Plain, d));
    if !report.odd {
        msg.push_str("; d is not odd");
    }
    if !report.square.is_zero() {
        write!(msg, "; [d, d] = {} on arities {window}", n.cochain(Style::Plain, &report.square)).unwrap();
    }
    Err(RunError::Precondition(msg))
}

fn bracket_table(r: &Renderer, cfg: &JobConfig, window: ArityWindow) -> Result<Output, RunError> {
    let keys = basis_keys(&cfg.space, window);
    let basis: Vec<Cochain> = keys
        .iter()
        .map(|k| Cochain::from_key(&cfg.space, k))
        .collect::<Result<_, _>>()?;
    let mut entries = Vec::new();
    for i in 0..basis.len() {
        for j in i..basis.len() {
            let v = bracket(&basis[i], &basis[j], window)?;
            entries.push((basis[i].clone(), basis[j].clone(), v));
        }
    }
    Ok(r.bracket_table(cfg, window, &entries))
}

fn run_transport(r: &Renderer, cfg: &JobConfig, window: ArityWindow, order: u32) -> Result<Output, RunError> {
    let Some(m) = &cfg.morphism else {
        return Err(RunError::Precondition("transport needs a [morphism] section".into()));
    };
    let truncation = cfg.truncation.unwrap_or(DEFAULT_TRUNCATION);
    let (d, relations) = match &cfg.ring_map {
        Some(rm) => {
            let defm = miniversal_with_truncation(&cfg.differential, order, window, truncation)?;
            let named: Vec<(&str, ParamPoly)> = rm.images.iter().map(|(n, p)| (n.as_str(), p.clone())).collect();
            let lam = RingMorphism::from_named(defm.ring(), &rm.target, &named, truncation)?;
            let ideal = RelationIdeal::new(&rm.target, rm.relations.clone(), truncation)?;
            let pushed = lam.pushout_deformation(&defm, &ideal)?;
            let rels: Vec<ParamPoly> = pushed.relations().values().cloned().collect();
            (pushed.current().clone(), rels)
        }
        None => (ParamCochain::constant(&cfg.differential, &m.ring), Vec::new()),
    };
    let g = Morphism::new(m.map.clone(), window, truncation)?;
    let result = transport(&d, &g, m.conjugation)?;
    Ok(r.transport(cfg, window, truncation, m.conjugation, g.map(), &result, &relations))
}

struct Renderer {
    n: Notation,
    format: Format,
}

fn style(format: Format) -> Style {
    match format {
        Format::Latex => Style::Latex,
        _ => Style::Plain,
    }
}

fn conjugation_name(c: Conjugation) -> &'static str {
    match c {
        Conjugation::InverseFirst => "inverse-first",
        Conjugation::InverseLast => "inverse-last",
    }
}

fn counts(c: Counts) -> st::CountsJson {
    st::CountsJson { even: c.even, odd: c.odd }
}

impl Renderer {
    fn doc(&self, cmd: Command, window: ArityWindow, truncation: Option<u32>, result: st::Result) -> String {
        let doc = Document {
            schema_version: st::SCHEMA_VERSION,
            engine_version: st::ENGINE_VERSION.to_string(),
            command: cmd.name().to_string(),
            space: st::basis_of(self.n.space()),
            window: st::window_of(window),
            truncation,
            result,
        };
        doc.to_json() + "\n"
    }

    /// A parameter-valued cochain as `Σ (cochain)·(monomial)`, using the
    /// `hᵏ` labels of `deltas` where a coefficient is one of them.
    fn param_cochain(&self, s: Style, x: &ParamCochain, deltas: &[Cochain], used: &mut BTreeSet<usize>) -> String {
        let ring = x.ring();
        let mut terms: Vec<_> = x.terms().iter().collect();
        terms.sort_by_key(|(m, _)| monomial_key(ring, m));
        let mut items: Vec<(Scalar, String)> = Vec::new();
        for (m, c) in terms {
            let mono = param_monomial(s, ring, m);
            if let Some((i, label)) = deltas
                .iter()
                .enumerate()
                .find(|(_, d)| *d == c)
                .and_then(|(i, d)| self.n.delta_label(s, d).map(|l| (i, l)))
            {
                if !m.is_one() {
                    used.insert(i);
                    items.push((Scalar::one(), label + &mono));
                    continue;
                }
            }
            let coords = c.coordinates();
            if m.is_one() || coords.len() == 1 {
                for (k, v) in coords {
                    items.push((v, self.n.basis(s, &k) + &mono));
                }
            } else {
                let inner = self.n.cochain(s, c);
                items.push((Scalar::one(), format!("({inner}){mono}")));
            }
        }
        linear_combination(s, &items)
    }

    fn label_definitions(&self, s: Style, deltas: &[Cochain], used: &BTreeSet<usize>) -> Vec<(String, String)> {
        used.iter()
            .filter_map(|&i| {
                let d = &deltas[i];
                self.n.delta_label(s, d).map(|l| (l, self.n.cochain(s, d)))
            })
            .collect()
    }

    fn bracket_table(&self, cfg: &JobConfig, window: ArityWindow, entries: &[(Cochain, Cochain, Cochain)]) -> Output {
        let text = match self.format {
            Format::Structured => self.doc(
                Command::BracketTable,
                window,
                None,
                st::Result::BracketTable {
                    entries: entries
                        .iter()
                        .map(|(a, b, v)| st::BracketEntry {
                            left: st::cochain_json(a),
                            right: st::cochain_json(b),
                            value: st::cochain_json(v),
                        })
                        .collect(),
                },
            ),
            f => {
                let s = style(f);
                let name = |c: &Cochain| self.n.cochain(s, c);
                let mut out = String::new();
                match s {
                    Style::Plain => {
                        writeln!(out, "bracket table on {}, arities {window}", cfg.space).unwrap();
                        for (a, b, v) in entries {
                            writeln!(out, "[{}, {}] = {}", name(a), name(b), name(v)).unwrap();
                        }
                    }
                    Style::Latex => {
                        writeln!(out, "% bracket table, arities {window}").unwrap();
                        writeln!(out, "\\begin{{align*}}").unwrap();
                        let lines: Vec<String> = entries
                            .iter()
                            .map(|(a, b, v)| format!("[{}, {}] &= {}", name(a), name(b), name(v)))
                            .collect();
                        writeln!(out, "{}", lines.join("\\\\\n")).unwrap();
                        writeln!(out, "\\end{{align*}}").unwrap();
                    }
                }
                out
            }
        };
        Output { text, outcome: Outcome::Done }
    }

    fn cohomology(&self, h: &CohomologyData) -> Output {
        let d = h.codifferential();
        let text = match self.format {
            Format::Structured => self.doc(
                Command::Cohomology,
                h.window(),
                None,
                st::Result::Cohomology {
                    codifferential: st::cochain_json(d),
                    stable_arity: h.stable_arity(),
                    dimensions: h
                        .dimensions()
                        .iter()
                        .map(|a| st::ArityJson {
                            arity: a.arity,
                            cocycles: counts(a.cocycles),
                            coboundaries: counts(a.coboundaries),
                            cohomology: counts(a.cohomology),
                        })
                        .collect(),
                    total: counts(h.dimension()),
                    cocycles: h.cocycle_basis().iter().map(st::cochain_json).collect(),
                    coboundaries: h.coboundary_basis().iter().map(st::cochain_json).collect(),
                    deltas: h.delta_basis().iter().map(st::cochain_json).collect(),
                },
            ),
            f => {
                let s = style(f);
                let n = &self.n;
                let dim = h.dimension();
                let delta_line = |c: &Cochain| match n.delta_label(s, c) {
                    Some(l) => format!("{l} = {}", n.cochain(s, c)),
                    None => n.cochain(s, c),
                };
                let mut out = String::new();
                match s {
                    Style::Plain => {
                        writeln!(out, "cohomology of d = {} on arities {}", n.cochain(s, d), h.window()).unwrap();
                        writeln!(out, "exact through arity {}", h.stable_arity()).unwrap();
                        writeln!(out, "arity  cocycles  coboundaries  cohomology   (even/odd)").unwrap();
                        for a in h.dimensions() {
                            writeln!(
                                out,
                                "{:>5}  {:>8}  {:>12}  {:>10}",
                                a.arity,
                                format!("{}/{}", a.cocycles.even, a.cocycles.odd),
                                format!("{}/{}", a.coboundaries.even, a.coboundaries.odd),
                                format!("{}/{}", a.cohomology.even, a.cohomology.odd),
                            )
                            .unwrap();
                        }
                        writeln!(out, "dim H = {} (even {}, odd {})", dim.total(), dim.even, dim.odd).unwrap();
                        writeln!(out, "deltas:").unwrap();
                        if h.delta_basis().is_empty() {
                            writeln!(out, "  none").unwrap();
                        }
                        for c in h.delta_basis() {
                            writeln!(out, "  {}", delta_line(c)).unwrap();
                        }
                        writeln!(out, "coboundaries:").unwrap();
                        if h.coboundary_basis().is_empty() {
                            writeln!(out, "  none").unwrap();
                        }
                        for c in h.coboundary_basis() {
                            writeln!(out, "  {}", n.cochain(s, c)).unwrap();
                        }
                    }
                    Style::Latex => {
                        writeln!(out, "% cohomology, arities {}, exact through arity {}", h.window(), h.stable_arity())
                            .unwrap();
                        writeln!(out, "\\dim H({}) = {}", n.cochain(s, d), dim.total()).unwrap();
                        writeln!(out, "\\begin{{align*}}").unwrap();
                        let lines: Vec<String> = h
                            .delta_basis()
                            .iter()
                            .map(|c| match n.delta_label(s, c) {
                                Some(l) => format!("{l} &= {}", n.cochain(s, c)),
                                None => format!("&{}", n.cochain(s, c)),
                            })
                            .collect();
                        writeln!(out, "{}", lines.join("\\\\\n")).unwrap();
                        writeln!(out, "\\end{{align*}}").unwrap();
                    }
                }
                out
            }
        };
        Output { text, outcome: Outcome::Done }
    }

    fn sorted_relations<'a>(&self, s: Style, rels: impl Iterator<Item = &'a ParamPoly>) -> Vec<String> {
        let mut rels: Vec<&ParamPoly> = rels.filter(|p| !p.is_zero()).collect();
        rels.sort_by_key(|p| {
            let ring = p.ring();
            p.terms().keys().map(|m| monomial_key(ring, m)).min()
        });
        rels.into_iter().map(|p| notation::relation(s, p)).collect()
    }

    fn relation_block(&self, s: Style, rels: &[String]) -> String {
        let mut out = String::new();
        match s {
            Style::Plain => {
                writeln!(out, "relations:").unwrap();
                if rels.is_empty() {
                    writeln!(out, "  no relations").unwrap();
                }
                for r in rels {
                    writeln!(out, "  {r} = 0").unwrap();
                }
            }
            Style::Latex => {
                if rels.is_empty() {
                    writeln!(out, "\\text{{no relations}}").unwrap();
                } else {
                    writeln!(out, "\\begin{{align*}}").unwrap();
                    let lines: Vec<String> = rels.iter().map(|r| format!("{r} &= 0")).collect();
                    writeln!(out, "{}", lines.join("\\\\\n")).unwrap();
                    writeln!(out, "\\end{{align*}}").unwrap();
                }
            }
        }
        out
    }

    fn deformation(&self, defm: &Deformation) -> Output {
        let outcome = match defm.status() {
            linf_core::deform::Status::Miniversal => Outcome::Done,
            _ => Outcome::Truncated,
        };
        let h = defm.cohomology();
        let text = match self.format {
            Format::Structured => self.doc(
                Command::Deform,
                defm.window(),
                Some(defm.truncation()),
                st::Result::Deformation {
                    codifferential: st::cochain_json(defm.base()),
                    ring: st::ring_basis(defm.ring()),
                    parameters: defm
                        .parameters()
                        .iter()
                        .map(|p| st::ParameterJson {
                            name: p.name.clone(),
                            odd: p.parity.is_odd(),
                            arity: p.arity,
                            delta: st::cochain_json(&h.delta_basis()[p.delta]),
                        })
                        .collect(),
                    deformation: st::param_cochain_json(defm.current()),
                    relations: defm
                        .relations()
                        .iter()
                        .map(|(&i, r)| st::RelationJson {
                            parameter: defm
                                .parameters()
                                .iter()
                                .find(|p| p.delta == i)
                                .map_or_else(String::new, |p| p.name.clone()),
                            generator: st::poly_json(r),
                        })
                        .collect(),
                    order: defm.order(),
                    status: defm.status().to_string(),
                },
            ),
            f => {
                let s = style(f);
                let n = &self.n;
                let mut used = BTreeSet::new();
                let body = self.param_cochain(s, defm.current(), h.delta_basis(), &mut used);
                let defs = self.label_definitions(s, h.delta_basis(), &used);
                let rels = self.sorted_relations(s, defm.relations().values());
                let status = format!("{} at order {}", defm.status(), defm.order());
                let mut out = String::new();
                match s {
                    Style::Plain => {
                        writeln!(out, "miniversal deformation of d = {}", n.cochain(s, defm.base())).unwrap();
                        writeln!(out, "exact on arities {}, working degree {}", defm.window(), defm.truncation()).unwrap();
                        let params: Vec<String> = defm
                            .parameters()
                            .iter()
                            .map(|p| {
                                let d = &h.delta_basis()[p.delta];
                                let dual = n.delta_label(s, d).unwrap_or_else(|| n.cochain(s, d));
                                format!("{} ({dual})", notation::symbol(s, &p.name))
                            })
                            .collect();
                        if params.is_empty() {
                            writeln!(out, "parameters: none").unwrap();
                        } else {
                            writeln!(out, "parameters: {}", params.join(", ")).unwrap();
                        }
                        writeln!(out, "d∞ = {body}").unwrap();
                        for (l, v) in &defs {
                            writeln!(out, "  {l} = {v}").unwrap();
                        }
                        out.push_str(&self.relation_block(s, &rels));
                        writeln!(out, "status: {status}").unwrap();
                    }
                    Style::Latex => {
                        writeln!(out, "% miniversal deformation, exact on arities {}, working degree {}", defm.window(), defm.truncation())
                            .unwrap();
                        writeln!(out, "% status: {status}").unwrap();
                        writeln!(out, "\\begin{{align*}}").unwrap();
                        let mut lines = vec![format!("d_\\infty &= {body}")];
                        lines.extend(defs.iter().map(|(l, v)| format!("{l} &= {v}")));
                        writeln!(out, "{}", lines.join("\\\\\n")).unwrap();
                        writeln!(out, "\\end{{align*}}").unwrap();
                        out.push_str(&self.relation_block(s, &rels));
                    }
                }
                out
            }
        };
        Output { text, outcome }
    }

    #[allow(clippy::too_many_arguments)]
    fn transport(
        &self,
        cfg: &JobConfig,
        window: ArityWindow,
        truncation: u32,
        conjugation: Conjugation,
        g: &ParamCochain,
        result: &ParamCochain,
        relations: &[ParamPoly],
    ) -> Output {
        let text = match self.format {
            Format::Structured => self.doc(
                Command::Transport,
                window,
                Some(truncation),
                st::Result::Transport {
                    codifferential: st::cochain_json(&cfg.differential),
                    ring: st::ring_basis(result.ring()),
                    conjugation: conjugation_name(conjugation).to_string(),
                    morphism: st::param_cochain_json(g),
                    transported: st::param_cochain_json(result),
                    relations: relations.iter().map(st::poly_json).collect(),
                },
            ),
            f => {
                let s = style(f);
                let n = &self.n;
                let mut none = BTreeSet::new();
                let g_text = self.param_cochain(s, g, &[], &mut none);
                let body = self.param_cochain(s, result, &[], &mut none);
                let rels = self.sorted_relations(s, relations.iter());
                let mut out = String::new();
                match s {
                    Style::Plain => {
                        writeln!(out, "transport of d = {}", n.cochain(s, &cfg.differential)).unwrap();
                        if cfg.ring_map.is_some() {
                            writeln!(out, "after push-out of its miniversal deformation").unwrap();
                        }
                        writeln!(
                            out,
                            "arities {window}, working degree {truncation}, conjugation {}",
                            conjugation_name(conjugation)
                        )
                        .unwrap();
                        writeln!(out, "g = {g_text}").unwrap();
                        writeln!(out, "g*(d) = {body}").unwrap();
                        if cfg.ring_map.is_some() {
                            out.push_str(&self.relation_block(s, &rels));
                        }
                    }
                    Style::Latex => {
                        writeln!(
                            out,
                            "% transport, arities {window}, working degree {truncation}, conjugation {}",
                            conjugation_name(conjugation)
                        )
                        .unwrap();
                        writeln!(out, "\\begin{{align*}}").unwrap();
                        writeln!(out, "g &= {g_text}\\\\").unwrap();
                        writeln!(out, "g^*(d) &= {body}").unwrap();
                        writeln!(out, "\\end{{align*}}").unwrap();
                        if cfg.ring_map.is_some() {
                            out.push_str(&self.relation_block(s, &rels));
                        }
                    }
                }
                out
            }
        };
        Output { text, outcome: Outcome::Done }
    }

    fn check(&self, d: &Cochain, window: ArityWindow) -> Result<Output, RunError> {
        let report = check_codifferential(d, window)?;
        let holds = report.holds();
        let outcome = if holds { Outcome::Done } else { Outcome::NotCodifferential };
        let text = match self.format {
            Format::Structured => self.doc(
                Command::Check,
                window,
                None,
                st::Result::Check {
                    codifferential: st::cochain_json(d),
                    odd: report.odd,
                    square: st::cochain_json(&report.square),
                    holds,
                },
            ),
            f => {
                let s = style(f);
                let n = &self.n;
                let mut out = String::new();
                match s {
                    Style::Plain => {
                        writeln!(out, "d = {}", n.cochain(s, d)).unwrap();
                        writeln!(out, "[d, d] = {} on arities {window}", n.cochain(s, &report.square)).unwrap();
                        if !report.odd {
                            writeln!(out, "d is not odd").unwrap();
                        }
                        let verdict = if holds { "codifferential" } else { "not a codifferential" };
                        writeln!(out, "{verdict}").unwrap();
                    }
                    Style::Latex => {
                        writeln!(out, "% check, arities {window}").unwrap();
                        writeln!(out, "[d, d] = {}", n.cochain(s, &report.square)).unwrap();
                    }
                }
                out
            }
        };
        Ok(Output { text, outcome })
    }
}
