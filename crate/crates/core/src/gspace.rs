//! Z₂-graded vector spaces and the exact scalars used throughout the crate.

use std::collections::HashSet;
use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};

/// Exact rational scalar, always kept in lowest terms by `num-rational`.
pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn frac(num: i64, den: i64) -> Scalar {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// `(-1)^k` as a scalar.
pub fn sign(negative: bool) -> Scalar {
    if negative {
        int(-1)
    } else {
        int(1)
    }
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::from(1), |acc, k| acc * BigInt::from(k))
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum Parity {
    #[default]
    Even,
    Odd,
}

impl Parity {
    pub fn from_bool(odd: bool) -> Self {
        if odd {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    /// Sign `(-1)^{|a||b|}` as a boolean "negative" flag.
    pub fn koszul(self, other: Parity) -> bool {
        self.is_odd() && other.is_odd()
    }
}

impl Add for Parity {
    type Output = Parity;

    fn add(self, rhs: Parity) -> Parity {
        Parity::from_bool(self.is_odd() != rhs.is_odd())
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Parity::Even => write!(f, "even"),
            Parity::Odd => write!(f, "odd"),
        }
    }
}

/// A finite m|n dimensional space with named basis vectors.
///
/// Global basis order: even vectors in declaration order, then odd ones.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GradedSpace {
    names: Vec<String>,
    n_even: usize,
}

impl GradedSpace {
    pub fn new<S: AsRef<str>>(even: &[S], odd: &[S]) -> Result<Self> {
        let names: Vec<String> = even
            .iter()
            .chain(odd.iter())
            .map(|s| s.as_ref().to_string())
            .collect();
        if names.is_empty() {
            return Err(Error::EmptySpace);
        }
        let mut seen = HashSet::new();
        for name in &names {
            if !seen.insert(name.as_str()) {
                return Err(Error::DuplicateName(name.clone()));
            }
        }
        Ok(GradedSpace {
            names,
            n_even: even.len(),
        })
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn even_dim(&self) -> usize {
        self.n_even
    }

    pub fn odd_dim(&self) -> usize {
        self.names.len() - self.n_even
    }

    pub fn parity(&self, index: usize) -> Parity {
        Parity::from_bool(index >= self.n_even)
    }

    pub fn is_odd(&self, index: usize) -> bool {
        index >= self.n_even
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

    pub fn check_index(&self, index: usize) -> Result<()> {
        if index < self.dim() {
            Ok(())
        } else {
            Err(Error::InvalidBasisIndex(index))
        }
    }
}

impl fmt::Display for GradedSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}|{} ⟨{}⟩",
            self.even_dim(),
            self.odd_dim(),
            self.names.join(", ")
        )
    }
}
