//! Cochains `L = Hom(S(W), W)`, the coderivation lift, the bracket and the
//! differential `D = [d, ·]`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::gspace::{sign, GradedSpace, Parity, Scalar};
use crate::symw::{add_to, monomials_of_degree, product_raw, splittings, MonoSum, Monomial};

/// A vector of W as a sparse map from basis index to coefficient.
pub type Vector = BTreeMap<usize, Scalar>;

/// A basis cochain: input monomial and output basis index. The derived order
/// (arity, monomial, output) is the canonical cochain-basis order.
pub type BasisKey = (Monomial, usize);

/// Inclusive range of arities kept by a computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ArityWindow {
    min: u32,
    max: u32,
}

impl ArityWindow {
    pub fn new(min: u32, max: u32) -> Result<Self> {
        if min == 0 || min > max {
            return Err(Error::InvalidWindow {
                min: min as usize,
                max: max as usize,
            });
        }
        Ok(ArityWindow { min, max })
    }

    pub fn up_to(max: u32) -> Result<Self> {
        ArityWindow::new(1, max)
    }

    pub fn min(&self) -> u32 {
        self.min
    }

    pub fn max(&self) -> u32 {
        self.max
    }

    pub fn contains(&self, arity: u32) -> bool {
        (self.min..=self.max).contains(&arity)
    }

    pub fn arities(&self) -> impl Iterator<Item = u32> {
        self.min..=self.max
    }
}

impl fmt::Display for ArityWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..={}", self.min, self.max)
    }
}

/// All basis cochains with arity in the window, in canonical order.
pub fn basis_keys(space: &GradedSpace, window: ArityWindow) -> Vec<BasisKey> {
    window
        .arities()
        .flat_map(|n| monomials_of_degree(space, n))
        .flat_map(|m| (0..space.dim()).map(move |i| (m.clone(), i)))
        .collect()
}

/// Parity of the basis cochain `m ↦ w_out`.
pub fn key_parity(space: &GradedSpace, key: &BasisKey) -> Parity {
    key.0.parity(space) + space.parity(key.1)
}

/// An element of `L`, stored by its values on canonical monomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cochain {
    space: GradedSpace,
    parity: Parity,
    values: BTreeMap<Monomial, Vector>,
}

impl Cochain {
    pub fn zero(space: &GradedSpace) -> Self {
        Cochain {
            space: space.clone(),
            parity: Parity::Even,
            values: BTreeMap::new(),
        }
    }

    /// The cochain sending `input` to `I!·w_out` (`I!` the product of the
    /// factorials of the even exponents) and every other monomial to zero.
    pub fn basis(space: &GradedSpace, input: &Monomial, output: usize) -> Result<Self> {
        space.check_index(output)?;
        let input = Monomial::new(space, input.exps().to_vec())?;
        let mut c = Cochain::zero(space);
        let norm = Scalar::from_integer(input.even_factorial(space));
        c.add_value(input, output, norm)?;
        Ok(c)
    }

    pub fn from_key(space: &GradedSpace, key: &BasisKey) -> Result<Self> {
        Cochain::basis(space, &key.0, key.1)
    }

    /// Builds a cochain from coordinates on the normalized basis cochains.
    pub fn from_coordinates<'a, I>(space: &GradedSpace, coords: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a BasisKey, &'a Scalar)>,
    {
        let mut c = Cochain::zero(space);
        for ((m, i), x) in coords {
            let norm = Scalar::from_integer(m.even_factorial(space));
            space.check_index(*i)?;
            c.add_value(m.clone(), *i, x * norm)?;
        }
        Ok(c)
    }

    /// Adds `value·w_output` to the value on `input`, keeping parity homogeneous.
    pub fn add_value(&mut self, input: Monomial, output: usize, value: Scalar) -> Result<()> {
        if value.is_zero() {
            return Ok(());
        }
        let p = input.parity(&self.space) + self.space.parity(output);
        if self.values.is_empty() {
            self.parity = p;
        } else if p != self.parity {
            return Err(Error::MixedParity);
        }
        let slot = self.values.entry(input.clone()).or_default();
        add_to(slot, output, value);
        if slot.is_empty() {
            self.values.remove(&input);
        }
        if self.values.is_empty() {
            self.parity = Parity::Even;
        }
        Ok(())
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    /// Parity; the zero cochain is conventionally even.
    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// Raw values `φ(m)` on canonical monomials.
    pub fn values(&self) -> &BTreeMap<Monomial, Vector> {
        &self.values
    }

    pub fn eval(&self, m: &Monomial) -> Vector {
        self.values.get(m).cloned().unwrap_or_default()
    }

    pub fn arities(&self) -> BTreeSet<u32> {
        self.values.keys().map(Monomial::degree).collect()
    }

    /// Least arity with a nonzero component (the order of the element).
    pub fn order(&self) -> Option<u32> {
        self.values.keys().next().map(Monomial::degree)
    }

    pub fn max_arity(&self) -> Option<u32> {
        self.values.keys().next_back().map(Monomial::degree)
    }

    /// Coordinates on the normalized basis cochains.
    pub fn coordinates(&self) -> BTreeMap<BasisKey, Scalar> {
        let mut out = BTreeMap::new();
        for (m, v) in &self.values {
            let norm = Scalar::from_integer(m.even_factorial(&self.space));
            for (&i, x) in v {
                out.insert((m.clone(), i), x / &norm);
            }
        }
        out
    }

    pub fn coordinate(&self, key: &BasisKey) -> Scalar {
        let norm = Scalar::from_integer(key.0.even_factorial(&self.space));
        self.values
            .get(&key.0)
            .and_then(|v| v.get(&key.1))
            .map(|x| x / norm)
            .unwrap_or_else(Scalar::zero)
    }

    pub fn truncate(&self, window: ArityWindow) -> Cochain {
        Cochain {
            space: self.space.clone(),
            parity: self.parity,
            values: self
                .values
                .iter()
                .filter(|(m, _)| window.contains(m.degree()))
                .map(|(m, v)| (m.clone(), v.clone()))
                .collect(),
        }
        .normalized()
    }

    pub fn arity_part(&self, arity: u32) -> Cochain {
        Cochain {
            space: self.space.clone(),
            parity: self.parity,
            values: self
                .values
                .iter()
                .filter(|(m, _)| m.degree() == arity)
                .map(|(m, v)| (m.clone(), v.clone()))
                .collect(),
        }
        .normalized()
    }

    fn normalized(mut self) -> Self {
        if self.values.is_empty() {
            self.parity = Parity::Even;
        }
        self
    }

    pub fn scale(&self, c: &Scalar) -> Cochain {
        if c.is_zero() {
            return Cochain::zero(&self.space);
        }
        Cochain {
            space: self.space.clone(),
            parity: self.parity,
            values: self
                .values
                .iter()
                .map(|(m, v)| (m.clone(), v.iter().map(|(&i, x)| (i, x * c)).collect()))
                .collect(),
        }
    }

    pub fn add(&self, other: &Cochain) -> Result<Cochain> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        let mut out = self.clone();
        for (m, v) in &other.values {
            for (&i, x) in v {
                out.add_value(m.clone(), i, x.clone())?;
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Cochain) -> Result<Cochain> {
        self.add(&other.scale(&-Scalar::one()))
    }

    /// Applies the cochain linearly to a combination of monomials.
    pub fn apply(&self, s: &MonoSum) -> Vector {
        let mut out = Vector::new();
        for (m, c) in s {
            if let Some(v) = self.values.get(m) {
                for (&i, x) in v {
                    add_to(&mut out, i, c * x);
                }
            }
        }
        out
    }

    /// `(self ∘ other~)(m)`, the first half of the bracket.
    fn compose_on(&self, other: &Cochain, m: &Monomial, self_arities: &BTreeSet<u32>) -> Vector {
        let n = m.degree();
        let mut lifted = MonoSum::new();
        for k in other.arities() {
            if k > n || !self_arities.contains(&(n - k + 1)) {
                continue;
            }
            lift_into(&mut lifted, other, m, k);
        }
        self.apply(&lifted)
    }
}

fn lift_into(out: &mut MonoSum, phi: &Cochain, m: &Monomial, k: u32) {
    let space = &phi.space;
    for (c, mu, rho) in splittings(space, m, k) {
        let Some(v) = phi.values.get(&mu) else {
            continue;
        };
        for (&i, x) in v {
            let w = Monomial::basis(space, i);
            if let Some((neg, prod)) = product_raw(space, &w, &rho) {
                add_to(out, prod, sign(neg) * &c * x);
            }
        }
    }
}

/// The coderivation `φ~` evaluated on a monomial.
pub fn tilde(phi: &Cochain, m: &Monomial) -> MonoSum {
    let mut out = MonoSum::new();
    for k in phi.arities() {
        if k <= m.degree() {
            lift_into(&mut out, phi, m, k);
        }
    }
    out
}

/// `[a, b] = a∘b~ − (−1)^{|a||b|} b∘a~`, restricted to the window.
pub fn bracket(a: &Cochain, b: &Cochain, window: ArityWindow) -> Result<Cochain> {
    if a.space != b.space {
        return Err(Error::SpaceMismatch);
    }
    let space = &a.space;
    let mut out = Cochain::zero(space);
    if a.is_zero() || b.is_zero() {
        return Ok(out);
    }
    let (ar_a, ar_b) = (a.arities(), b.arities());
    let targets: BTreeSet<u32> = ar_a
        .iter()
        .flat_map(|p| ar_b.iter().map(move |q| p + q - 1))
        .filter(|n| window.contains(*n))
        .collect();
    let minus = !a.parity.koszul(b.parity);
    for n in targets {
        for m in monomials_of_degree(space, n) {
            let mut v = a.compose_on(b, &m, &ar_a);
            for (i, x) in b.compose_on(a, &m, &ar_b) {
                add_to(&mut v, i, if minus { -x } else { x });
            }
            for (i, x) in v {
                out.add_value(m.clone(), i, x)?;
            }
        }
    }
    Ok(out)
}

/// `D(φ) = [d, φ]`.
pub fn differential(d: &Cochain, phi: &Cochain, window: ArityWindow) -> Result<Cochain> {
    bracket(d, phi, window)
}

/// Outcome of checking `[d, d] = 0`; `square` is the certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodifferentialReport {
    pub odd: bool,
    pub square: Cochain,
}

impl CodifferentialReport {
    pub fn holds(&self) -> bool {
        self.odd && self.square.is_zero()
    }
}

pub fn check_codifferential(d: &Cochain, window: ArityWindow) -> Result<CodifferentialReport> {
    Ok(CodifferentialReport {
        odd: d.is_zero() || d.parity().is_odd(),
        square: bracket(d, d, window)?,
    })
}

/// For an arity-2 `d` on a purely odd space: whether `[a,b] := d(ab)` satisfies
/// `[[a,b],c] + [[b,c],a] − [[a,c],b] = 0` on all basis triples. Cross-checked
/// against `[d,d] = 0`.
pub fn jacobi_correspondence(d: &Cochain) -> Result<bool> {
    let space = d.space();
    if space.even_dim() > 0 {
        return Err(Error::NotPurelyOdd);
    }
    if d.arities().iter().any(|&a| a != 2) {
        return Err(Error::WrongArity(2));
    }
    let br = |x: &Vector, y: &Vector| -> Vector {
        let mut out = Vector::new();
        for (&i, a) in x {
            for (&j, b) in y {
                let (mi, mj) = (Monomial::basis(space, i), Monomial::basis(space, j));
                if let Some((neg, m)) = product_raw(space, &mi, &mj) {
                    for (k, v) in d.eval(&m) {
                        add_to(&mut out, k, sign(neg) * a * b * v);
                    }
                }
            }
        }
        out
    };
    let unit = |i: usize| -> Vector { [(i, Scalar::one())].into_iter().collect() };
    let n = space.dim();
    let mut jacobi = true;
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let (ua, ub, uc) = (unit(a), unit(b), unit(c));
                let mut sum = br(&br(&ua, &ub), &uc);
                for (k, v) in br(&br(&ub, &uc), &ua) {
                    add_to(&mut sum, k, v);
                }
                for (k, v) in br(&br(&ua, &uc), &ub) {
                    add_to(&mut sum, k, -v);
                }
                if !sum.is_empty() {
                    jacobi = false;
                }
            }
        }
    }
    let square_zero = bracket(d, d, ArityWindow::new(3, 3)?)?.is_zero();
    if jacobi != square_zero {
        return Err(Error::Internal(
            "Jacobi identity and [d,d] = 0 disagree".into(),
        ));
    }
    Ok(jacobi)
}
