#![allow(dead_code)]

pub mod criteria;

use std::collections::BTreeMap;
use std::sync::Arc;

use linf_core::cochain::{Cochain, Vector};
use linf_core::gspace::{int, GradedSpace, Parity, Scalar};
use linf_core::paramring::{ParamPoly, ParamRing};
use linf_core::symw::{koszul_sign, monomial_product, unshuffles, Monomial};
use num_traits::Zero;

pub fn line_even() -> GradedSpace {
    GradedSpace::new::<&str>(&["e"], &[]).unwrap()
}

pub fn line_odd() -> GradedSpace {
    GradedSpace::new::<&str>(&[], &["f"]).unwrap()
}

pub fn plane_even() -> GradedSpace {
    GradedSpace::new::<&str>(&["e1", "e2"], &[]).unwrap()
}

pub fn plane_odd() -> GradedSpace {
    GradedSpace::new::<&str>(&[], &["f1", "f2"]).unwrap()
}

pub fn cube_odd() -> GradedSpace {
    GradedSpace::new::<&str>(&[], &["f1", "f2", "f3"]).unwrap()
}

pub fn mixed() -> GradedSpace {
    GradedSpace::new::<&str>(&["e"], &["f"]).unwrap()
}

fn basis(w: &GradedSpace, exps: Vec<u32>, out: usize) -> Cochain {
    Cochain::basis(w, &Monomial::new(w, exps).unwrap(), out).unwrap()
}

/// `φ_k(e^k) = k!·e` on the 1|0 space.
pub fn phi_line(k: u32) -> Cochain {
    basis(&line_even(), vec![k], 0)
}

/// `φ_{I,i}(e^I) = I!·e_i` on the 2|0 space (`i` is 1-based).
pub fn phi_plane(i1: u32, i2: u32, i: usize) -> Cochain {
    basis(&plane_even(), vec![i1, i2], i - 1)
}

/// `φ^i_j(f_k) = δ^i_k f_j` on the 0|2 space.
pub fn phi02(i: usize, j: usize) -> Cochain {
    let w = plane_odd();
    Cochain::basis(&w, &Monomial::basis(&w, i - 1), j - 1).unwrap()
}

/// `ψ_i(f₁f₂) = f_i` on the 0|2 space.
pub fn psi02(i: usize) -> Cochain {
    basis(&plane_odd(), vec![1, 1], i - 1)
}

/// `φᵏₑ(eᵏ) = k!·e`.
pub fn pe(k: u32) -> Cochain {
    basis(&mixed(), vec![k, 0], 0)
}

/// `φᵏf(e^{k−1}f) = (k−1)!·f`.
pub fn pf(k: u32) -> Cochain {
    basis(&mixed(), vec![k - 1, 1], 1)
}

/// `ψᵏₑ(e^{k−1}f) = (k−1)!·e`.
pub fn qe(k: u32) -> Cochain {
    basis(&mixed(), vec![k - 1, 1], 0)
}

/// `ψᵏf(eᵏ) = k!·f`.
pub fn qf(k: u32) -> Cochain {
    basis(&mixed(), vec![k, 0], 1)
}

/// `hᵏ = φᵏₑ + (k−L+1)φᵏf`, the even cocycles of `ψᴸₑ`.
pub fn h_e(k: u32, l: u32) -> Cochain {
    pe(k).add(&pf(k).scale(&int(k as i64 - l as i64 + 1))).unwrap()
}

/// `hᵏ = φᵏₑ + Lφᵏf`, the even cocycles of `ψᴸf`.
pub fn h_f(k: u32, l: u32) -> Cochain {
    pe(k).add(&pf(k).scale(&int(l as i64))).unwrap()
}

pub fn sum(terms: &[(i64, Cochain)]) -> Cochain {
    let w = terms[0].1.space().clone();
    terms
        .iter()
        .fold(Cochain::zero(&w), |acc, (c, x)| acc.add(&x.scale(&int(*c))).unwrap())
}

/// Value of a cochain on an ordered word of basis indices, through the
/// Koszul sign of sorting the word.
fn on_word(space: &GradedSpace, c: &Cochain, word: &[usize]) -> Vector {
    let mut m = Monomial::one(space.dim());
    let mut s = Scalar::from_integer(1.into());
    for &i in word {
        match monomial_product(space, &m, &Monomial::basis(space, i)) {
            Some((x, p)) => {
                s *= x;
                m = p;
            }
            None => return Vector::new(),
        }
    }
    c.eval(&m).into_iter().map(|(i, x)| (i, x * &s)).collect()
}

/// `(a∘b~)(w₁…wₙ) = Σ_σ ε(σ) a(b(w_σ(1..l)), w_σ(l+1..n))` over unshuffles.
fn compose_on_word(space: &GradedSpace, a: &Cochain, b: &Cochain, word: &[usize]) -> Vector {
    let n = word.len();
    let parities: Vec<Parity> = word.iter().map(|&i| space.parity(i)).collect();
    let mut out = Vector::new();
    for l in b.arities() {
        let l = l as usize;
        if l > n {
            continue;
        }
        for u in unshuffles(l, n).unwrap() {
            let eps = koszul_sign(&parities, &u.permutation()).unwrap();
            let inner: Vec<usize> = u.left.iter().map(|&p| word[p]).collect();
            let rest: Vec<usize> = u.right.iter().map(|&p| word[p]).collect();
            for (j, x) in on_word(space, b, &inner) {
                let mut w = vec![j];
                w.extend(&rest);
                for (k, y) in on_word(space, a, &w) {
                    *out.entry(k).or_insert_with(Scalar::zero) += &x * &y * Scalar::from_integer(eps.into());
                }
            }
        }
    }
    out.retain(|_, x| !x.is_zero());
    out
}

/// Bracket from the unshuffle word formula, evaluated on one sorted monomial.
pub fn word_bracket(a: &Cochain, b: &Cochain, m: &Monomial) -> Vector {
    let space = a.space();
    let word = m.word();
    let mut out = compose_on_word(space, a, b, &word);
    let s = if a.parity().is_odd() && b.parity().is_odd() { 1 } else { -1 };
    for (k, x) in compose_on_word(space, b, a, &word) {
        *out.entry(k).or_insert_with(Scalar::zero) += x * Scalar::from_integer(s.into());
    }
    out.retain(|_, x| !x.is_zero());
    out
}

/// Parses `"2*theta1*t1 - theta2*t1*t2^2 + 1/2*t3"`; factors multiply left to right.
pub fn poly(ring: &Arc<ParamRing>, text: &str) -> ParamPoly {
    let mut out = ParamPoly::zero(ring);
    let cleaned = text.replace(' ', "");
    let mut terms = Vec::new();
    let mut cur = String::new();
    for ch in cleaned.chars() {
        if (ch == '+' || ch == '-') && !cur.is_empty() {
            terms.push(std::mem::take(&mut cur));
        }
        cur.push(ch);
    }
    if !cur.is_empty() {
        terms.push(cur);
    }
    for term in terms {
        let (neg, body) = match term.strip_prefix('-') {
            Some(b) => (true, b.to_string()),
            None => (false, term.trim_start_matches('+').to_string()),
        };
        let mut p = ParamPoly::one(ring);
        for factor in body.split('*') {
            if let Ok(c) = factor.parse::<Scalar>() {
                p = p.scale(&c);
                continue;
            }
            let (name, exp) = match factor.split_once('^') {
                Some((n, e)) => (n, e.parse::<u32>().unwrap()),
                None => (factor, 1),
            };
            for _ in 0..exp {
                p = p.mul(&ParamPoly::generator(ring, name).unwrap()).unwrap();
            }
        }
        out = out.add(&if neg { p.neg() } else { p }).unwrap();
    }
    out
}

/// Keys a deformation's relations by the parameter name of their delta.
pub fn relations_by_name(defm: &linf_core::deform::Deformation) -> BTreeMap<String, ParamPoly> {
    defm.relations()
        .iter()
        .map(|(&i, r)| {
            let name = defm.parameters().iter().find(|p| p.delta == i).unwrap().name.clone();
            (name, r.clone())
        })
        .collect()
}
