//! Exact rational linear algebra: row echelon forms, kernels, particular
//! solutions, and an incremental echelon basis over arbitrary ordered keys.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::gspace::Scalar;
use crate::symw::add_to;

/// Sparse rational matrix stored by rows; no zero entries are kept.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BTreeMap<usize, Scalar>>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![BTreeMap::new(); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RatMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_dense(rows: &[Vec<Scalar>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = RatMatrix::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged matrix");
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.data[i].get(&j).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        if v.is_zero() {
            self.data[i].remove(&j);
        } else {
            self.data[i].insert(j, v);
        }
    }

    pub fn row(&self, i: usize) -> &BTreeMap<usize, Scalar> {
        &self.data[i]
    }

    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j)).collect())
            .collect()
    }

    pub fn transpose(&self) -> RatMatrix {
        let mut t = RatMatrix::zeros(self.cols, self.rows);
        for (i, row) in self.data.iter().enumerate() {
            for (&j, v) in row {
                t.data[j].insert(i, v.clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, x: &[Scalar]) -> Result<Vec<Scalar>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: x.len(),
            });
        }
        Ok(self
            .data
            .iter()
            .map(|row| row.iter().map(|(&j, v)| v * &x[j]).sum())
            .collect())
    }

    /// Reduced row echelon form and its (strictly increasing) pivot columns.
    pub fn rref(&self) -> (RatMatrix, Vec<usize>) {
        let mut rows: Vec<BTreeMap<usize, Scalar>> =
            self.data.iter().filter(|r| !r.is_empty()).cloned().collect();
        let mut pivots = Vec::new();
        let mut done = 0;
        for col in 0..self.cols {
            let Some(p) = (done..rows.len()).find(|&r| rows[r].contains_key(&col)) else {
                continue;
            };
            rows.swap(done, p);
            let inv = rows[done][&col].recip();
            for v in rows[done].values_mut() {
                *v *= &inv;
            }
            let pivot_row = rows[done].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r == done {
                    continue;
                }
                if let Some(f) = row.get(&col).cloned() {
                    for (&j, v) in &pivot_row {
                        add_to(row, j, -(&f * v));
                    }
                }
            }
            pivots.push(col);
            done += 1;
        }
        rows.truncate(done);
        let mut out = RatMatrix::zeros(self.rows, self.cols);
        for (i, row) in rows.into_iter().enumerate() {
            out.data[i] = row;
        }
        (out, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the null space, one vector per free column (free entry = 1).
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![Scalar::zero(); self.cols];
                v[fc] = Scalar::one();
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = -r.get(i, fc);
                }
                v
            })
            .collect()
    }

    /// Canonical solution of `self · x = b` with every free variable set to zero.
    pub fn solve_particular(&self, b: &[Scalar]) -> Result<Solution> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: b.len(),
            });
        }
        let mut aug = RatMatrix::zeros(self.rows, self.cols + 1);
        for (i, row) in self.data.iter().enumerate() {
            aug.data[i] = row.clone();
            if !b[i].is_zero() {
                aug.data[i].insert(self.cols, b[i].clone());
            }
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            // the left kernel contains y with yᵀA = 0, yᵀb ≠ 0
            let witness = self
                .transpose()
                .kernel_basis()
                .into_iter()
                .find(|y| !y.iter().zip(b).map(|(a, c)| a * c).sum::<Scalar>().is_zero())
                .ok_or_else(|| Error::Internal("inconsistent system without witness".into()))?;
            return Ok(Solution::Inconsistent { witness });
        }
        let mut x = vec![Scalar::zero(); self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(i, self.cols);
        }
        Ok(Solution::Unique(x))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    /// The free-variables-zero solution.
    Unique(Vec<Scalar>),
    /// No solution; `witness` is a left-kernel vector with `witness · b ≠ 0`.
    Inconsistent { witness: Vec<Scalar> },
}

/// Which key of a new row becomes its pivot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PivotRule {
    First,
    Last,
}

#[derive(Debug, Clone)]
struct EchelonRow<K> {
    vec: BTreeMap<K, Scalar>,
    combo: BTreeMap<usize, Scalar>,
}

/// Incrementally built, fully reduced echelon basis of sparse vectors keyed
/// by `K`, remembering how each row combines the inserted vectors.
#[derive(Debug, Clone)]
pub struct Echelon<K: Ord + Clone> {
    rows: Vec<EchelonRow<K>>,
    pivots: BTreeMap<K, usize>,
    rule: PivotRule,
}

impl<K: Ord + Clone> Echelon<K> {
    pub fn new(rule: PivotRule) -> Self {
        Echelon {
            rows: Vec::new(),
            pivots: BTreeMap::new(),
            rule,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, key: &K) -> bool {
        self.pivots.contains_key(key)
    }

    /// Reduces `v`; returns the remainder and coordinates `c` with
    /// `v = remainder + Σ c[tag] · inserted[tag]`.
    pub fn reduce(&self, v: &BTreeMap<K, Scalar>) -> (BTreeMap<K, Scalar>, BTreeMap<usize, Scalar>) {
        let mut rem = v.clone();
        let mut coords = BTreeMap::new();
        let hits: Vec<(K, usize)> = rem
            .keys()
            .filter_map(|k| self.pivots.get(k).map(|&r| (k.clone(), r)))
            .collect();
        for (key, r) in hits {
            let Some(f) = rem.get(&key).cloned() else {
                continue;
            };
            let row = &self.rows[r];
            for (k, x) in &row.vec {
                add_to(&mut rem, k.clone(), -(&f * x));
            }
            for (&t, x) in &row.combo {
                add_to(&mut coords, t, &f * x);
            }
        }
        (rem, coords)
    }

    /// Inserts `v` under `tag`; returns false when `v` is already in the span.
    pub fn insert(&mut self, v: &BTreeMap<K, Scalar>, tag: usize) -> bool {
        let (rem, coords) = self.reduce(v);
        if rem.is_empty() {
            return false;
        }
        let mut combo: BTreeMap<usize, Scalar> = coords.into_iter().map(|(t, x)| (t, -x)).collect();
        add_to(&mut combo, tag, Scalar::one());
        let pivot = match self.rule {
            PivotRule::First => rem.keys().next().cloned(),
            PivotRule::Last => rem.keys().next_back().cloned(),
        }
        .expect("nonempty remainder");
        let inv = rem[&pivot].recip();
        let vec: BTreeMap<K, Scalar> = rem.into_iter().map(|(k, x)| (k, x * &inv)).collect();
        let combo: BTreeMap<usize, Scalar> = combo.into_iter().map(|(t, x)| (t, x * &inv)).collect();
        for row in &mut self.rows {
            if let Some(f) = row.vec.get(&pivot).cloned() {
                for (k, x) in &vec {
                    add_to(&mut row.vec, k.clone(), -(&f * x));
                }
                for (&t, x) in &combo {
                    add_to(&mut row.combo, t, -(&f * x));
                }
            }
        }
        self.pivots.insert(pivot, self.rows.len());
        self.rows.push(EchelonRow { vec, combo });
        true
    }
}
