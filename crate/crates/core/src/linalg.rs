//! Exact linear algebra over Q(ζ_N): small dense matrices for group work and
//! an incremental sparse echelon basis for module filtrations.
//!
//! Pivoting is deterministic (first nonzero entry), so every result is
//! reproducible bit for bit.

use std::collections::BTreeMap;
use std::ops::Bound::{Excluded, Unbounded};
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalars::{CycloNumber, Rational};

/// Solve a small rational system given as augmented rows `[a_0 .. a_{k-1} | b]`.
/// Free variables are set to zero. Returns `None` when inconsistent.
pub(crate) fn solve_augmented_rational(rows: &mut [Vec<Rational>], k: usize) -> Option<Vec<Rational>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..k {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].recip();
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                for j in 0..=k {
                    let t = &f * &rows[r][j];
                    rows[i][j] -= t;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    if rows[r..].iter().any(|row| !row[k].is_zero()) {
        return None;
    }
    let mut sol = vec![Rational::zero(); k];
    for (i, &col) in pivots.iter().enumerate() {
        sol[col] = rows[i][k].clone();
    }
    Some(sol)
}

/// Dense matrix over a fixed cyclotomic field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    order: u32,
    data: Vec<CycloNumber>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize, order: u32) -> Self {
        Matrix {
            rows,
            cols,
            order,
            data: vec![CycloNumber::zero(order); rows * cols],
        }
    }

    pub fn identity(n: usize, order: u32) -> Self {
        let mut m = Self::zeros(n, n, order);
        for i in 0..n {
            m.data[i * n + i] = CycloNumber::one(order);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<CycloNumber>>, order: u32) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::InvalidInput("ragged matrix rows".into()));
            }
            for v in row {
                data.push(v.embed(order)?);
            }
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            order,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> &CycloNumber {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: CycloNumber) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<CycloNumber> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<CycloNumber> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows, self.order);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols, self.order);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + &(a * b);
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[CycloNumber]) -> Vec<CycloNumber> {
        (0..self.rows)
            .map(|i| {
                let mut acc = CycloNumber::zero(self.order);
                for (j, x) in v.iter().enumerate() {
                    if !x.is_zero() {
                        acc = &acc + &(self.get(i, j) * x);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Matrix { data, ..self.clone() }
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let v = self.get(i, j);
                    if i == j {
                        v.is_one()
                    } else {
                        v.is_zero()
                    }
                })
            })
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, col).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    let a = m.get(r, j).clone();
                    let b = m.get(p, j).clone();
                    m.set(r, j, b);
                    m.set(p, j, a);
                }
            }
            let inv = m.get(r, col).inv().expect("pivot is nonzero");
            for j in 0..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, col).is_zero() {
                    continue;
                }
                let f = m.get(i, col).clone();
                for j in 0..m.cols {
                    let v = m.get(i, j) - &(&f * m.get(r, j));
                    m.set(i, j, v);
                }
            }
            pivots.push(col);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of {v : M v = 0}.
    pub fn nullspace(&self) -> Vec<Vec<CycloNumber>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![CycloNumber::zero(self.order); self.cols];
                v[f] = CycloNumber::one(self.order);
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -r.get(i, f);
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(Error::InvalidInput("non-square matrix has no inverse".into()));
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n, self.order);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, CycloNumber::one(self.order));
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::InvalidInput("matrix is singular".into()));
        }
        let mut inv = Self::zeros(n, n, self.order);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Ok(inv)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            write!(f, "{}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Sparse vector keyed by basis labels.
pub type SparseVec<K> = BTreeMap<K, CycloNumber>;

pub fn add_scaled<K: Ord + Clone>(acc: &mut SparseVec<K>, v: &SparseVec<K>, factor: &CycloNumber) {
    for (k, c) in v {
        let delta = c * factor;
        match acc.get_mut(k) {
            Some(slot) => {
                *slot = &*slot + &delta;
                if slot.is_zero() {
                    acc.remove(k);
                }
            }
            None => {
                if !delta.is_zero() {
                    acc.insert(k.clone(), delta);
                }
            }
        }
    }
}

/// Incrementally maintained reduced echelon basis of a subspace of a sparse
/// vector space. Each stored row is normalized so its largest label carries
/// coefficient 1; that label is the row's pivot and no other row has an
/// entry there.
#[derive(Clone, Debug)]
pub struct Echelon<K: Ord + Clone> {
    order: u32,
    rows: BTreeMap<K, SparseVec<K>>,
}

impl<K: Ord + Clone> Echelon<K> {
    pub fn new(order: u32) -> Self {
        Echelon {
            order,
            rows: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn rows(&self) -> impl Iterator<Item = &SparseVec<K>> {
        self.rows.values()
    }

    /// Reduce `v` against the basis; the remainder is zero iff `v` is in the span.
    pub fn reduce(&self, v: &SparseVec<K>) -> SparseVec<K> {
        let mut v = v.clone();
        v.retain(|_, c| !c.is_zero());
        let mut bound: Option<K> = None;
        loop {
            let lead = match &bound {
                None => v.keys().next_back().cloned(),
                Some(b) => v.range(..b.clone()).next_back().map(|(k, _)| k.clone()),
            };
            let Some(lead) = lead else {
                return v;
            };
            if let Some(row) = self.rows.get(&lead) {
                let factor = -&v[&lead];
                add_scaled(&mut v, row, &factor);
            }
            bound = Some(lead);
        }
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        self.reduce(v).is_empty()
    }

    /// Insert `v`; returns the new basis row when `v` enlarged the span.
    pub fn insert(&mut self, v: &SparseVec<K>) -> Option<SparseVec<K>> {
        let r = self.reduce(v);
        let (lead, c) = r.iter().next_back()?;
        let inv = c.inv().expect("nonzero leading coefficient");
        let lead = lead.clone();
        let row: SparseVec<K> = r.into_iter().map(|(k, x)| (k, &x * &inv)).collect();
        debug_assert!(row[&lead].is_one());
        for (_, other) in self.rows.range_mut((Excluded(lead.clone()), Unbounded)) {
            if let Some(c) = other.get(&lead) {
                let factor = -c;
                add_scaled(other, &row, &factor);
            }
        }
        self.rows.insert(lead, row.clone());
        Some(row)
    }
}

pub fn one_hot<K: Ord>(k: K, order: u32) -> SparseVec<K> {
    let mut v = BTreeMap::new();
    v.insert(k, CycloNumber::one(order));
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rat;

    fn q(n: i64, d: i64) -> CycloNumber {
        CycloNumber::from_rational(rat(n, d), 1)
    }

    #[test]
    fn inverse_and_nullspace() {
        let m = Matrix::from_rows(vec![vec![q(2, 1), q(1, 1)], vec![q(1, 1), q(1, 1)]], 1).unwrap();
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        let s = Matrix::from_rows(vec![vec![q(1, 1), q(2, 1)], vec![q(2, 1), q(4, 1)]], 1).unwrap();
        assert!(s.inverse().is_err());
        let ns = s.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(s.mul_vec(&ns[0]).iter().all(|x| x.is_zero()));
        assert_eq!(s.rank(), 1);
    }

    #[test]
    fn echelon_tracks_span() {
        let mut e: Echelon<i32> = Echelon::new(1);
        let mut v1 = BTreeMap::new();
        v1.insert(1, q(1, 1));
        v1.insert(2, q(1, 1));
        let mut v2 = BTreeMap::new();
        v2.insert(2, q(1, 1));
        assert!(e.insert(&v1).is_some());
        assert!(e.insert(&v2).is_some());
        assert_eq!(e.dim(), 2);
        assert!(e.contains(&one_hot(1, 1)));
        assert!(e.insert(&one_hot(1, 1)).is_none());
        assert!(!e.contains(&one_hot(3, 1)));
    }

    #[test]
    fn rational_solver() {
        let mut rows = vec![vec![rat(1, 1), rat(1, 1), rat(3, 1)], vec![rat(1, 1), rat(-1, 1), rat(1, 1)]];
        assert_eq!(solve_augmented_rational(&mut rows, 2).unwrap(), vec![rat(2, 1), rat(1, 1)]);
        let mut bad = vec![vec![rat(0, 1), rat(1, 1)]];
        assert!(solve_augmented_rational(&mut bad, 1).is_none());
    }
}
