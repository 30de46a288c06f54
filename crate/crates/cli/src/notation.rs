//! Names of basis cochains and parameters in plain text and LaTeX.

use std::cmp::Reverse;

use linf_core::cochain::{BasisKey, Cochain};
use linf_core::gspace::{GradedSpace, Parity, Scalar};
use linf_core::paramring::{ParamMonomial, ParamPoly, ParamRing};
use num_traits::{One, Signed};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Style {
    Plain,
    Latex,
}

fn sup(s: &str) -> String {
    s.chars()
        .map(|c| match c {
            '0' => '⁰',
            '1' => '¹',
            '2' => '²',
            '3' => '³',
            '4' => '⁴',
            '5' => '⁵',
            '6' => '⁶',
            '7' => '⁷',
            '8' => '⁸',
            '9' => '⁹',
            other => other,
        })
        .collect()
}

fn sub(s: &str) -> String {
    s.chars()
        .map(|c| match c {
            '0' => '₀',
            '1' => '₁',
            '2' => '₂',
            '3' => '₃',
            '4' => '₄',
            '5' => '₅',
            '6' => '₆',
            '7' => '₇',
            '8' => '₈',
            '9' => '₉',
            'a' => 'ₐ',
            'e' => 'ₑ',
            'h' => 'ₕ',
            'i' => 'ᵢ',
            'j' => 'ⱼ',
            'k' => 'ₖ',
            'l' => 'ₗ',
            'm' => 'ₘ',
            'n' => 'ₙ',
            'o' => 'ₒ',
            'p' => 'ₚ',
            'r' => 'ᵣ',
            's' => 'ₛ',
            't' => 'ₜ',
            'u' => 'ᵤ',
            'v' => 'ᵥ',
            'x' => 'ₓ',
            other => other,
        })
        .collect()
}

/// `x` with optional upper and lower indices.
fn indexed(style: Style, stem: &str, upper: Option<&str>, lower: Option<&str>) -> String {
    match style {
        Style::Plain => {
            let mut s = stem.to_string();
            if let Some(u) = upper {
                s.push_str(&sup(u));
            }
            if let Some(l) = lower {
                s.push_str(&sub(l));
            }
            s
        }
        Style::Latex => {
            let mut s = stem.to_string();
            if let Some(u) = upper {
                s.push_str(&format!("^{{{u}}}"));
            }
            if let Some(l) = lower {
                s.push_str(&format!("_{{{l}}}"));
            }
            s
        }
    }
}

fn greek(style: Style, odd: bool) -> &'static str {
    match (style, odd) {
        (Style::Plain, false) => "φ",
        (Style::Plain, true) => "ψ",
        (Style::Latex, false) => "\\varphi",
        (Style::Latex, true) => "\\psi",
    }
}

/// Splits `theta1_2` into (`theta`, `1`, Some(`2`)).
fn split_name(name: &str) -> (&str, &str, Option<&str>) {
    let stem_end = name.find(|c: char| c.is_ascii_digit()).unwrap_or(name.len());
    let (stem, rest) = name.split_at(stem_end);
    match rest.split_once('_') {
        Some((a, b)) if !a.is_empty() && !b.is_empty() && b.chars().all(|c| c.is_ascii_digit()) => (stem, a, Some(b)),
        _ => (stem, rest, None),
    }
}

/// A basis vector or parameter name: `theta1` is `θ₁`, `theta1_2` is `θ¹₂`, `t3` is `t₃`.
pub fn symbol(style: Style, name: &str) -> String {
    let (stem, first, second) = split_name(name);
    if stem.is_empty() || stem.ends_with('_') {
        return match style {
            Style::Plain => name.to_string(),
            Style::Latex => format!("\\mathrm{{{}}}", name.replace('_', "\\_")),
        };
    }
    let stem = match (style, stem) {
        (Style::Plain, "theta") => "θ".to_string(),
        (Style::Plain, "lambda") => "λ".to_string(),
        (Style::Latex, "theta") => "\\theta".to_string(),
        (Style::Latex, "lambda") => "\\lambda".to_string(),
        (Style::Latex, s) if s.chars().count() > 1 => format!("\\mathrm{{{s}}}"),
        (_, s) => s.to_string(),
    };
    match (first.is_empty(), second) {
        (true, _) => stem,
        (false, None) => indexed(style, &stem, None, Some(first)),
        (false, Some(b)) => indexed(style, &stem, Some(first), Some(b)),
    }
}

/// How basis cochains of a space are named.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Shape {
    /// `φ_k(eᵏ) = k!·e`.
    EvenLine,
    /// One odd vector: `φ(f) = f`.
    OddLine,
    /// One even and one odd vector: `φᵏₑ, φᵏf, ψᵏₑ, ψᵏf`.
    Mixed,
    /// Odd vectors only, arity ≤ 2 named `φ^i_j` and `ψ_k` when the dimension is 2.
    OddPlane,
    Generic,
}

#[derive(Debug, Clone)]
pub struct Notation {
    space: GradedSpace,
    shape: Shape,
}

impl Notation {
    pub fn new(space: &GradedSpace) -> Self {
        let shape = match (space.even_dim(), space.odd_dim()) {
            (1, 0) => Shape::EvenLine,
            (0, 1) => Shape::OddLine,
            (1, 1) => Shape::Mixed,
            (0, 2) => Shape::OddPlane,
            _ => Shape::Generic,
        };
        Notation {
            space: space.clone(),
            shape,
        }
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    /// Name of the basis cochain for `key`.
    pub fn basis(&self, style: Style, key: &BasisKey) -> String {
        let (m, out) = key;
        let w = &self.space;
        let odd_cochain = m.parity(w).is_odd() != w.is_odd(*out);
        let g = greek(style, odd_cochain);
        let name = |i: usize| w.name(i).to_string();
        match self.shape {
            Shape::EvenLine => indexed(style, g, None, Some(&m.degree().to_string())),
            Shape::OddLine => g.to_string(),
            // φᵏₑ: eᵏ→e, φᵏf: e^{k−1}f→f, ψᵏₑ: e^{k−1}f→e, ψᵏf: eᵏ→f
            Shape::Mixed => indexed(style, g, Some(&m.degree().to_string()), Some(&name(*out))),
            Shape::OddPlane if m.degree() == 1 => {
                let i = m.as_basis().expect("degree one");
                indexed(style, g, Some(&(i + 1).to_string()), Some(&(out + 1).to_string()))
            }
            Shape::OddPlane if m.degree() == 2 => indexed(style, g, None, Some(&(out + 1).to_string())),
            _ => {
                let input = self.monomial(style, m);
                match style {
                    Style::Plain => format!("{g}[{input}→{}]", name(*out)),
                    Style::Latex => format!("{g}^{{{input}}}_{{{}}}", symbol(style, &name(*out))),
                }
            }
        }
    }

    fn monomial(&self, style: Style, m: &linf_core::symw::Monomial) -> String {
        let mut parts = Vec::new();
        for (i, &e) in m.exps().iter().enumerate() {
            if e == 0 {
                continue;
            }
            let n = symbol(style, self.space.name(i));
            parts.push(match (style, e) {
                (_, 1) => n,
                (Style::Plain, e) => format!("{n}{}", sup(&e.to_string())),
                (Style::Latex, e) => format!("{n}^{{{e}}}"),
            });
        }
        match style {
            Style::Plain => parts.join("·"),
            Style::Latex => parts.join(""),
        }
    }

    /// `hᵏ` for an even delta `φᵏₑ + cφᵏf` on the 1|1 space.
    pub fn delta_label(&self, style: Style, c: &Cochain) -> Option<String> {
        if self.shape != Shape::Mixed || c.parity() != Parity::Even {
            return None;
        }
        let coords = c.coordinates();
        let (k, lead) = coords.iter().find(|((m, out), _)| *out == 0 && m.exp(1) == 0)?;
        if !lead.is_one() || coords.len() > 2 {
            return None;
        }
        let degree = k.0.degree();
        if coords.keys().any(|(m, _)| m.degree() != degree) {
            return None;
        }
        Some(indexed(style, "h", Some(&degree.to_string()), None))
    }

    /// `2φ¹ₑ − φ¹f`; zero renders as `0`.
    pub fn cochain(&self, style: Style, c: &Cochain) -> String {
        let terms: Vec<(Scalar, String)> = c
            .coordinates()
            .into_iter()
            .map(|(k, x)| (x, self.basis(style, &k)))
            .collect();
        linear_combination(style, &terms)
    }
}

/// `Σ cᵢ·xᵢ` with signs folded into the joins.
pub fn linear_combination(style: Style, terms: &[(Scalar, String)]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let minus = match style {
        Style::Plain => "−",
        Style::Latex => "-",
    };
    let mut out = String::new();
    for (i, (c, x)) in terms.iter().enumerate() {
        let neg = c.is_negative();
        match (i, neg) {
            (0, true) => out.push_str(minus),
            (0, false) => {}
            (_, true) => out.push_str(&format!(" {minus} ")),
            (_, false) => out.push_str(" + "),
        }
        let a = c.abs();
        if !a.is_one() || x.is_empty() {
            out.push_str(&scalar(style, &a));
        }
        out.push_str(x);
    }
    out
}

pub fn scalar(style: Style, x: &Scalar) -> String {
    if x.denom().is_one() {
        return x.numer().to_string();
    }
    match style {
        Style::Plain => format!("{}/{}", x.numer(), x.denom()),
        Style::Latex => format!("\\tfrac{{{}}}{{{}}}", x.numer(), x.denom()),
    }
}

/// Sort key: degree, then odd factors, then even factors (both descending).
pub fn monomial_key(ring: &ParamRing, m: &ParamMonomial) -> (u32, Reverse<Vec<u32>>, Reverse<Vec<u32>>) {
    let odd: Vec<u32> = (0..ring.dim()).filter(|&i| ring.is_odd(i)).map(|i| m.exps()[i]).collect();
    let even: Vec<u32> = (0..ring.dim()).filter(|&i| !ring.is_odd(i)).map(|i| m.exps()[i]).collect();
    (m.degree(), Reverse(odd), Reverse(even))
}

/// A parameter monomial with odd factors first (ring order), then even ones.
/// Even parameters are central, so the sign is unchanged.
pub fn param_monomial(style: Style, ring: &ParamRing, m: &ParamMonomial) -> String {
    let mut parts = Vec::new();
    let odd = (0..ring.dim()).filter(|&i| ring.is_odd(i));
    let even = (0..ring.dim()).filter(|&i| !ring.is_odd(i));
    for i in odd.chain(even) {
        let e = m.exps()[i];
        if e == 0 {
            continue;
        }
        let n = symbol(style, ring.name(i));
        parts.push(match (style, e) {
            (_, 1) => n,
            (Style::Plain, e) => format!("{n}{}", sup(&e.to_string())),
            (Style::Latex, e) => format!("{n}^{{{e}}}"),
        });
    }
    parts.concat()
}

/// Terms of a polynomial in display order.
pub fn poly_terms(style: Style, p: &ParamPoly) -> Vec<(Scalar, String)> {
    let ring = p.ring();
    let mut terms: Vec<(&ParamMonomial, &Scalar)> = p.terms().iter().collect();
    terms.sort_by_key(|(m, _)| monomial_key(ring, m));
    terms
        .into_iter()
        .map(|(m, c)| (c.clone(), param_monomial(style, ring, m)))
        .collect()
}

pub fn poly(style: Style, p: &ParamPoly) -> String {
    linear_combination(style, &poly_terms(style, p))
}

/// A relation with its leading coefficient made positive.
pub fn relation(style: Style, p: &ParamPoly) -> String {
    let mut terms = poly_terms(style, p);
    if terms.first().is_some_and(|(c, _)| c.is_negative()) {
        for t in &mut terms {
            t.0 = -t.0.clone();
        }
    }
    linear_combination(style, &terms)
}
