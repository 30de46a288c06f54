//! Monomials of the reduced symmetric coalgebra S(W), Koszul signs,
//! unshuffles and the unshuffle coproduct.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::gspace::{binomial, GradedSpace, Parity, Scalar};

/// Exponent vector over the global basis order of a space.
///
/// Degree 0 (the unit) is only used transiently; every public entry point
/// that produces basis words of S(W) returns degree ≥ 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u32>,
    degree: u32,
}

impl Ord for Monomial {
    /// Degree first, then lexicographically *descending* exponent vectors,
    /// so `e^k` precedes `e^{k-1} f`.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| other.exps.cmp(&self.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Monomial {
    pub fn new(space: &GradedSpace, exps: Vec<u32>) -> Result<Self> {
        if exps.len() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                found: exps.len(),
            });
        }
        for (i, &e) in exps.iter().enumerate() {
            if space.is_odd(i) && e > 1 {
                return Err(Error::OddSquared(space.name(i).to_string()));
            }
        }
        let degree = exps.iter().sum();
        if degree == 0 {
            return Err(Error::DegreeZero);
        }
        Ok(Monomial { exps, degree })
    }

    pub(crate) fn from_exps_unchecked(exps: Vec<u32>) -> Self {
        let degree = exps.iter().sum();
        Monomial { exps, degree }
    }

    /// Builds a monomial from `(name, exponent)` pairs; repeated names add up.
    pub fn from_pairs<S: AsRef<str>>(space: &GradedSpace, pairs: &[(S, u32)]) -> Result<Self> {
        let mut exps = vec![0; space.dim()];
        for (name, e) in pairs {
            exps[space.index_of(name.as_ref())?] += e;
        }
        Monomial::new(space, exps)
    }

    pub fn one(dim: usize) -> Self {
        Monomial {
            exps: vec![0; dim],
            degree: 0,
        }
    }

    pub fn basis(space: &GradedSpace, index: usize) -> Self {
        let mut exps = vec![0; space.dim()];
        exps[index] = 1;
        Monomial { exps, degree: 1 }
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn exp(&self, index: usize) -> u32 {
        self.exps[index]
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    /// The single basis index of a degree-1 monomial.
    pub fn as_basis(&self) -> Option<usize> {
        if self.degree == 1 {
            self.exps.iter().position(|&e| e == 1)
        } else {
            None
        }
    }

    pub fn parity(&self, space: &GradedSpace) -> Parity {
        let odd: u32 = (space.even_dim()..space.dim()).map(|i| self.exps[i]).sum();
        Parity::from_bool(odd % 2 == 1)
    }

    /// Canonical word: basis indices in global order, with multiplicity.
    pub fn word(&self) -> Vec<usize> {
        self.exps
            .iter()
            .enumerate()
            .flat_map(|(i, &e)| std::iter::repeat_n(i, e as usize))
            .collect()
    }

    /// Product of the factorials of the even exponents.
    pub fn even_factorial(&self, space: &GradedSpace) -> BigInt {
        (0..space.even_dim()).fold(BigInt::from(1), |acc, i| {
            acc * crate::gspace::factorial(self.exps[i])
        })
    }

    /// `self / other` when `other` divides `self` (as multisets).
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut exps = Vec::with_capacity(self.exps.len());
        for (a, b) in self.exps.iter().zip(&other.exps) {
            exps.push(a.checked_sub(*b)?);
        }
        Some(Monomial::from_exps_unchecked(exps))
    }

    pub fn display(&self, space: &GradedSpace) -> String {
        if self.degree == 0 {
            return "1".to_string();
        }
        let mut out = String::new();
        for (i, &e) in self.exps.iter().enumerate() {
            match e {
                0 => {}
                1 => out.push_str(space.name(i)),
                _ => out.push_str(&format!("{}^{}", space.name(i), e)),
            }
        }
        out
    }
}

/// Sparse linear combination of monomials.
pub type MonoSum = BTreeMap<Monomial, Scalar>;

pub(crate) fn add_to<K: Ord>(map: &mut BTreeMap<K, Scalar>, key: K, value: Scalar) {
    if value.is_zero() {
        return;
    }
    match map.entry(key) {
        std::collections::btree_map::Entry::Vacant(slot) => {
            slot.insert(value);
        }
        std::collections::btree_map::Entry::Occupied(mut slot) => {
            *slot.get_mut() += value;
            if slot.get().is_zero() {
                slot.remove();
            }
        }
    }
}

/// All monomials of the given degree (degree 0 gives the unit), in canonical order.
pub(crate) fn monomials_of_degree(space: &GradedSpace, degree: u32) -> Vec<Monomial> {
    fn rec(space: &GradedSpace, i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i == space.dim() {
            if left == 0 {
                out.push(Monomial::from_exps_unchecked(cur.clone()));
            }
            return;
        }
        let cap = if space.is_odd(i) { left.min(1) } else { left };
        for e in (0..=cap).rev() {
            cur.push(e);
            rec(space, i + 1, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(space, 0, degree, &mut Vec::new(), &mut out);
    out
}

pub fn enumerate_monomials(space: &GradedSpace, degree: u32) -> Result<Vec<Monomial>> {
    if degree == 0 {
        return Err(Error::DegreeZero);
    }
    Ok(monomials_of_degree(space, degree))
}

/// Sub-monomials of `m` (as multisets) of the given degree.
pub(crate) fn sub_monomials(m: &Monomial, degree: u32) -> Vec<Monomial> {
    fn rec(m: &Monomial, i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i == m.exps.len() {
            if left == 0 {
                out.push(Monomial::from_exps_unchecked(cur.clone()));
            }
            return;
        }
        for e in (0..=m.exps[i].min(left)).rev() {
            cur.push(e);
            rec(m, i + 1, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if degree <= m.degree {
        rec(m, 0, degree, &mut Vec::new(), &mut out);
    }
    out
}

/// An unshuffle of type (k, n−k): two increasing, complementary index lists.
/// Indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Unshuffle {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl Unshuffle {
    /// The permutation `σ` as the list `σ(0), …, σ(n−1)`.
    pub fn permutation(&self) -> Vec<usize> {
        self.left.iter().chain(&self.right).copied().collect()
    }
}

pub fn unshuffles(k: usize, n: usize) -> Result<Vec<Unshuffle>> {
    if k > n {
        return Err(Error::InvalidUnshuffle { k, n });
    }
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut lefts = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut lefts);
    Ok(lefts
        .into_iter()
        .map(|left| {
            let right = (0..n).filter(|i| !left.contains(i)).collect();
            Unshuffle { left, right }
        })
        .collect())
}

/// Koszul sign of reordering a word `w_0 … w_{n−1}` into `w_{σ(0)} … w_{σ(n−1)}`:
/// `-1` to the number of inverted odd–odd pairs.
pub fn koszul_sign(parities: &[Parity], permutation: &[usize]) -> Result<i32> {
    let n = parities.len();
    if permutation.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: permutation.len(),
        });
    }
    let mut seen = vec![false; n];
    for &p in permutation {
        if p >= n {
            return Err(Error::IndexOutOfRange { index: p, len: n });
        }
        if std::mem::replace(&mut seen[p], true) {
            return Err(Error::Internal(format!("index {p} repeated in permutation")));
        }
    }
    let mut inversions = 0usize;
    for a in 0..n {
        for b in a + 1..n {
            let (x, y) = (permutation[a], permutation[b]);
            if x > y && parities[x].is_odd() && parities[y].is_odd() {
                inversions += 1;
            }
        }
    }
    Ok(if inversions.is_multiple_of(2) { 1 } else { -1 })
}

/// Number of odd–odd pairs `(x in a, y in b)` with `x` after `y` in basis order;
/// the sign of sorting the concatenated word `a b`.
fn merge_sign(space: &GradedSpace, a: &Monomial, b: &Monomial) -> bool {
    let mut count = 0u32;
    let mut odd_b_before = 0u32;
    for i in space.even_dim()..space.dim() {
        if a.exps[i] == 1 {
            count += odd_b_before;
        }
        odd_b_before += b.exps[i];
    }
    count % 2 == 1
}

/// Product in S(W) with its sorting sign; `None` when an odd letter repeats.
/// The boolean is `true` for a minus sign.
pub(crate) fn product_raw(space: &GradedSpace, a: &Monomial, b: &Monomial) -> Option<(bool, Monomial)> {
    for i in space.even_dim()..space.dim() {
        if a.exps[i] + b.exps[i] > 1 {
            return None;
        }
    }
    let exps = a.exps.iter().zip(&b.exps).map(|(x, y)| x + y).collect();
    Some((merge_sign(space, a, b), Monomial::from_exps_unchecked(exps)))
}

pub fn monomial_product(space: &GradedSpace, a: &Monomial, b: &Monomial) -> Option<(Scalar, Monomial)> {
    product_raw(space, a, b).map(|(neg, m)| (crate::gspace::sign(neg), m))
}

/// Coefficient of `mu ⊗ rho` in the full (unreduced) coproduct of `mu·rho`.
pub(crate) fn split_coefficient(space: &GradedSpace, mu: &Monomial, rho: &Monomial) -> Scalar {
    // the word (mu)(rho) differs from the canonical word of mu·rho by the
    // sign of sorting it
    let neg = merge_sign(space, mu, rho);
    let mut c = BigInt::from(1);
    for i in 0..space.even_dim() {
        c *= binomial(mu.exps[i] + rho.exps[i], mu.exps[i]);
    }
    let c = Scalar::from_integer(c);
    if neg {
        -c
    } else {
        c
    }
}

/// All `(c, μ, ρ)` with `deg μ = k`, `μρ = m`, where `c` is the combined
/// coefficient of the unshuffles of type (k, n−k).
pub(crate) fn splittings(space: &GradedSpace, m: &Monomial, k: u32) -> Vec<(Scalar, Monomial, Monomial)> {
    sub_monomials(m, k)
        .into_iter()
        .map(|mu| {
            let rho = m.checked_div(&mu).expect("sub-monomial divides");
            (split_coefficient(space, &mu, &rho), mu, rho)
        })
        .collect()
}

/// Reduced coproduct: every splitting into two factors of positive degree.
pub fn coproduct(space: &GradedSpace, m: &Monomial) -> Vec<(Scalar, Monomial, Monomial)> {
    (1..m.degree)
        .flat_map(|k| splittings(space, m, k))
        .collect()
}
