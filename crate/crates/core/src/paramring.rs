//! Graded-commutative parameter rings `K[[t]] ⊗ Λ[θ]`, truncated polynomials
//! over them, and degree-truncated relation ideals.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactla::{Echelon, PivotRule};
use crate::gspace::{Parity, Scalar};
use crate::symw::add_to;

/// Named even generators followed by named odd generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParamRing {
    names: Vec<String>,
    n_even: usize,
}

impl ParamRing {
    pub fn new<S: AsRef<str>>(even: &[S], odd: &[S]) -> Result<Arc<Self>> {
        let names: Vec<String> = even
            .iter()
            .chain(odd.iter())
            .map(|s| s.as_ref().to_string())
            .collect();
        let mut seen = HashSet::new();
        for n in &names {
            if !seen.insert(n.as_str()) {
                return Err(Error::DuplicateName(n.clone()));
            }
        }
        Ok(Arc::new(ParamRing {
            names,
            n_even: even.len(),
        }))
    }

    /// The ring with no generators (the ground field).
    pub fn trivial() -> Arc<Self> {
        Arc::new(ParamRing {
            names: Vec::new(),
            n_even: 0,
        })
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn is_odd(&self, index: usize) -> bool {
        index >= self.n_even
    }

    pub fn parity(&self, index: usize) -> Parity {
        Parity::from_bool(self.is_odd(index))
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn even_names(&self) -> &[String] {
        &self.names[..self.n_even]
    }

    pub fn odd_names(&self) -> &[String] {
        &self.names[self.n_even..]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    /// All monomials of total degree at most `max_degree`, in monomial order.
    pub fn monomials_up_to(&self, max_degree: u32) -> Vec<ParamMonomial> {
        fn rec(ring: &ParamRing, i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<ParamMonomial>) {
            if i == ring.dim() {
                out.push(ParamMonomial::from_exps(cur.clone()));
                return;
            }
            let cap = if ring.is_odd(i) { left.min(1) } else { left };
            for e in 0..=cap {
                cur.push(e);
                rec(ring, i + 1, left - e, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(self, 0, max_degree, &mut Vec::new(), &mut out);
        out.sort();
        out
    }
}

fn same_ring(a: &Arc<ParamRing>, b: &Arc<ParamRing>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// Exponent vector over the generators; odd exponents are 0 or 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParamMonomial {
    exps: Vec<u32>,
    degree: u32,
}

impl Ord for ParamMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| other.exps.cmp(&self.exps))
    }
}

impl PartialOrd for ParamMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl ParamMonomial {
    fn from_exps(exps: Vec<u32>) -> Self {
        let degree = exps.iter().sum();
        ParamMonomial { exps, degree }
    }

    pub fn new(ring: &ParamRing, exps: Vec<u32>) -> Result<Self> {
        if exps.len() != ring.dim() {
            return Err(Error::DimensionMismatch {
                expected: ring.dim(),
                found: exps.len(),
            });
        }
        for (i, &e) in exps.iter().enumerate() {
            if ring.is_odd(i) && e > 1 {
                return Err(Error::OddSquared(ring.name(i).to_string()));
            }
        }
        Ok(ParamMonomial::from_exps(exps))
    }

    pub fn one(ring: &ParamRing) -> Self {
        ParamMonomial::from_exps(vec![0; ring.dim()])
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    pub fn parity(&self, ring: &ParamRing) -> Parity {
        let odd: u32 = (ring.n_even..ring.dim()).map(|i| self.exps[i]).sum();
        Parity::from_bool(odd % 2 == 1)
    }

    /// Product with its reordering sign (`true` = minus); `None` if an odd
    /// generator would be squared.
    pub fn mul(&self, other: &ParamMonomial, ring: &ParamRing) -> Option<(bool, ParamMonomial)> {
        let mut count = 0u32;
        let mut odd_other_before = 0u32;
        for i in ring.n_even..ring.dim() {
            if self.exps[i] + other.exps[i] > 1 {
                return None;
            }
            if self.exps[i] == 1 {
                count += odd_other_before;
            }
            odd_other_before += other.exps[i];
        }
        let exps = self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect();
        Some((count % 2 == 1, ParamMonomial::from_exps(exps)))
    }

    /// Factors `(generator index, exponent)` with odd generators first, as
    /// the paper writes them (θ₂t₁t₂).
    pub fn factors(&self, ring: &ParamRing) -> Vec<(usize, u32)> {
        let odd = (ring.n_even..ring.dim()).filter(|&i| self.exps[i] > 0);
        let even = (0..ring.n_even).filter(|&i| self.exps[i] > 0);
        odd.chain(even).map(|i| (i, self.exps[i])).collect()
    }

    pub fn display(&self, ring: &ParamRing) -> String {
        if self.is_one() {
            return "1".into();
        }
        self.factors(ring)
            .into_iter()
            .map(|(i, e)| {
                if e == 1 {
                    ring.name(i).to_string()
                } else {
                    format!("{}^{}", ring.name(i), e)
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

/// A truncated polynomial in the parameters with exact coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamPoly {
    ring: Arc<ParamRing>,
    terms: BTreeMap<ParamMonomial, Scalar>,
}

impl ParamPoly {
    pub fn zero(ring: &Arc<ParamRing>) -> Self {
        ParamPoly {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &Arc<ParamRing>, c: Scalar) -> Self {
        let mut p = ParamPoly::zero(ring);
        add_to(&mut p.terms, ParamMonomial::one(ring), c);
        p
    }

    pub fn one(ring: &Arc<ParamRing>) -> Self {
        ParamPoly::constant(ring, Scalar::one())
    }

    pub fn generator(ring: &Arc<ParamRing>, name: &str) -> Result<Self> {
        let i = ring.index_of(name)?;
        Ok(ParamPoly::generator_at(ring, i))
    }

    pub fn generator_at(ring: &Arc<ParamRing>, index: usize) -> Self {
        let mut exps = vec![0; ring.dim()];
        exps[index] = 1;
        ParamPoly::monomial(ring, ParamMonomial::from_exps(exps), Scalar::one())
    }

    pub fn monomial(ring: &Arc<ParamRing>, m: ParamMonomial, c: Scalar) -> Self {
        let mut p = ParamPoly::zero(ring);
        add_to(&mut p.terms, m, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (ParamMonomial, Scalar)>>(ring: &Arc<ParamRing>, terms: I) -> Self {
        let mut p = ParamPoly::zero(ring);
        for (m, c) in terms {
            add_to(&mut p.terms, m, c);
        }
        p
    }

    pub fn ring(&self) -> &Arc<ParamRing> {
        &self.ring
    }

    pub fn terms(&self) -> &BTreeMap<ParamMonomial, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest total degree of a term (0 for the zero polynomial).
    pub fn degree(&self) -> u32 {
        self.terms.keys().next_back().map_or(0, ParamMonomial::degree)
    }

    /// Lowest total degree of a term.
    pub fn low_degree(&self) -> Option<u32> {
        self.terms.keys().next().map(ParamMonomial::degree)
    }

    /// Parity of a homogeneous polynomial; `None` if mixed, even for zero.
    pub fn parity(&self) -> Option<Parity> {
        let mut it = self.terms.keys().map(|m| m.parity(&self.ring));
        let first = it.next().unwrap_or(Parity::Even);
        it.all(|p| p == first).then_some(first)
    }

    /// The constant term: every generator sent to zero.
    pub fn augment(&self) -> Scalar {
        self.terms
            .get(&ParamMonomial::one(&self.ring))
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }

    pub fn truncated(&self, max_degree: u32) -> ParamPoly {
        ParamPoly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree <= max_degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Terms of exactly the given degree.
    pub fn homogeneous(&self, degree: u32) -> ParamPoly {
        ParamPoly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree == degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> ParamPoly {
        ParamPoly::from_terms(&self.ring, self.terms.iter().map(|(m, x)| (m.clone(), x * c)))
    }

    pub fn neg(&self) -> ParamPoly {
        self.scale(&-Scalar::one())
    }

    pub fn add(&self, other: &ParamPoly) -> Result<ParamPoly> {
        if !same_ring(&self.ring, &other.ring) {
            return Err(Error::RingMismatch);
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            add_to(&mut out.terms, m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &ParamPoly) -> Result<ParamPoly> {
        self.add(&other.neg())
    }

    pub(crate) fn add_assign(&mut self, other: &ParamPoly) {
        for (m, c) in &other.terms {
            add_to(&mut self.terms, m.clone(), c.clone());
        }
    }

    pub(crate) fn add_term(&mut self, m: ParamMonomial, c: Scalar) {
        add_to(&mut self.terms, m, c);
    }

    /// Graded-commutative product.
    pub fn mul(&self, other: &ParamPoly) -> Result<ParamPoly> {
        if !same_ring(&self.ring, &other.ring) {
            return Err(Error::RingMismatch);
        }
        Ok(self.mul_bounded(other, u32::MAX))
    }

    /// Product with every term of degree above `max_degree` dropped.
    pub fn mul_truncated(&self, other: &ParamPoly, max_degree: u32) -> Result<ParamPoly> {
        if !same_ring(&self.ring, &other.ring) {
            return Err(Error::RingMismatch);
        }
        Ok(self.mul_bounded(other, max_degree))
    }

    pub(crate) fn mul_bounded(&self, other: &ParamPoly, max_degree: u32) -> ParamPoly {
        let mut out = ParamPoly::zero(&self.ring);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                if a.degree + b.degree > max_degree {
                    continue;
                }
                if let Some((neg, m)) = a.mul(b, &self.ring) {
                    let c = x * y;
                    add_to(&mut out.terms, m, if neg { -c } else { c });
                }
            }
        }
        out
    }

    /// Inverse of a unit as a power series truncated at `max_degree`.
    pub fn inverse(&self, max_degree: u32) -> Result<ParamPoly> {
        let c = self.augment();
        if c.is_zero() {
            return Err(Error::NotUnit);
        }
        let c_inv = c.recip();
        // self = c(1 + n) with n in the maximal ideal
        let mut n = self.scale(&c_inv);
        n.add_term(ParamMonomial::one(&self.ring), -Scalar::one());
        let minus_n = n.neg();
        let mut sum = ParamPoly::one(&self.ring);
        let mut power = ParamPoly::one(&self.ring);
        for _ in 0..max_degree {
            power = power.mul_bounded(&minus_n, max_degree);
            if power.is_zero() {
                break;
            }
            sum.add_assign(&power);
        }
        Ok(sum.scale(&c_inv))
    }

    /// Substitutes `images[i]` (polynomials in another ring) for generator `i`,
    /// truncating at `max_degree`.
    pub fn substitute(&self, target: &Arc<ParamRing>, images: &[ParamPoly], max_degree: u32) -> Result<ParamPoly> {
        if images.len() != self.ring.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ring.dim(),
                found: images.len(),
            });
        }
        if images.iter().any(|p| !same_ring(&p.ring, target)) {
            return Err(Error::RingMismatch);
        }
        let mut out = ParamPoly::zero(target);
        for (m, c) in &self.terms {
            // canonical order of generators: even ones first, odd ones in order
            let mut term = ParamPoly::constant(target, c.clone());
            for (i, &e) in m.exps.iter().enumerate() {
                for _ in 0..e {
                    term = term.mul_bounded(&images[i], max_degree);
                }
            }
            out.add_assign(&term);
        }
        Ok(out)
    }
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c < &Scalar::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", m.display(&self.ring))?;
            } else {
                write!(f, "{abs}*{}", m.display(&self.ring))?;
            }
        }
        Ok(())
    }
}

/// The span of `{g·μ}` truncated at `truncation`, together with all of
/// `𝔪^{truncation+1}`: membership in `I + 𝔪^{D+1}`.
#[derive(Debug, Clone)]
pub struct RelationIdeal {
    ring: Arc<ParamRing>,
    generators: Vec<ParamPoly>,
    truncation: u32,
    span: Echelon<ParamMonomial>,
}

impl RelationIdeal {
    pub fn new(ring: &Arc<ParamRing>, generators: Vec<ParamPoly>, truncation: u32) -> Result<Self> {
        let mut span = Echelon::new(PivotRule::Last);
        let monomials = ring.monomials_up_to(truncation);
        let mut tag = 0;
        let mut kept = Vec::new();
        for g in generators {
            if !same_ring(&g.ring, ring) {
                return Err(Error::RingMismatch);
            }
            if g.degree() > truncation {
                return Err(Error::DegreeOverflow {
                    degree: g.degree(),
                    truncation,
                });
            }
            if g.is_zero() {
                continue;
            }
            let low = g.low_degree().unwrap_or(0);
            for mu in monomials.iter().filter(|m| m.degree + low <= truncation) {
                let prod = g.mul_bounded(&ParamPoly::monomial(ring, mu.clone(), Scalar::one()), truncation);
                span.insert(&prod.terms, tag);
                tag += 1;
            }
            kept.push(g);
        }
        Ok(RelationIdeal {
            ring: ring.clone(),
            generators: kept,
            truncation,
            span,
        })
    }

    pub fn empty(ring: &Arc<ParamRing>, truncation: u32) -> Self {
        RelationIdeal {
            ring: ring.clone(),
            generators: Vec::new(),
            truncation,
            span: Echelon::new(PivotRule::Last),
        }
    }

    pub fn ring(&self) -> &Arc<ParamRing> {
        &self.ring
    }

    pub fn generators(&self) -> &[ParamPoly] {
        &self.generators
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    /// Canonical representative modulo the truncated ideal; zero iff `p` is in it.
    pub fn reduce(&self, p: &ParamPoly) -> Result<ParamPoly> {
        if !same_ring(&p.ring, &self.ring) {
            return Err(Error::RingMismatch);
        }
        if p.degree() > self.truncation {
            return Err(Error::DegreeOverflow {
                degree: p.degree(),
                truncation: self.truncation,
            });
        }
        let (rem, _) = self.span.reduce(&p.terms);
        Ok(ParamPoly {
            ring: self.ring.clone(),
            terms: rem,
        })
    }

    pub fn contains(&self, p: &ParamPoly) -> Result<bool> {
        Ok(self.reduce(p)?.is_zero())
    }

    /// Equality of truncated ideals.
    pub fn equals(&self, other: &RelationIdeal) -> Result<bool> {
        if !same_ring(&self.ring, &other.ring) {
            return Err(Error::RingMismatch);
        }
        if self.truncation != other.truncation {
            return Err(Error::TruncationMismatch {
                left: self.truncation,
                right: other.truncation,
            });
        }
        for g in &self.generators {
            if !other.contains(g)? {
                return Ok(false);
            }
        }
        for g in &other.generators {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub fn ideal_equal(a: &RelationIdeal, b: &RelationIdeal) -> Result<bool> {
    a.equals(b)
}
