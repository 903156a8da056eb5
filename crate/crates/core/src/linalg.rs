//! Exact rational linear algebra.
//!
//! Vectors are stored sparsely as column-sorted `(index, value)` lists with no
//! explicit zeros. Row reduction runs over the integers: every row is kept
//! primitive (content divided out) and only converted back to rationals once the
//! reduced row-echelon form is complete.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::Value;

use crate::error::{Error, Result};

/// Arbitrary-precision rational scalar, always in lowest terms.
pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Formats as `"num/den"`, including a `/1` for integers.
pub fn format_rational(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses `"num/den"` or a bare integer.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let err = || Error::ParseRational(s.to_string());
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| err())?;
    let d: BigInt = d.parse().map_err(|_| err())?;
    if d.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(n, d))
}

/// Finitely supported vector over the rationals.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparseVec {
    entries: Vec<(usize, Rational)>,
}

impl SparseVec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn unit(index: usize) -> Self {
        Self {
            entries: vec![(index, Rational::one())],
        }
    }

    /// Builds a vector from arbitrary entries; duplicates are summed and zeros dropped.
    pub fn from_entries<I: IntoIterator<Item = (usize, Rational)>>(entries: I) -> Self {
        let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
        for (i, x) in entries {
            *acc.entry(i).or_insert_with(Rational::zero) += x;
        }
        Self {
            entries: acc.into_iter().filter(|(_, x)| !x.is_zero()).collect(),
        }
    }

    pub fn from_dense(values: &[Rational]) -> Self {
        Self {
            entries: values
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(i, x)| (i, x.clone()))
                .collect(),
        }
    }

    pub fn entries(&self) -> &[(usize, Rational)] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<(usize, Rational)> {
        self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn leading(&self) -> Option<&(usize, Rational)> {
        self.entries.first()
    }

    /// One past the largest stored index (0 for the zero vector).
    pub fn support_bound(&self) -> usize {
        self.entries.last().map_or(0, |(i, _)| i + 1)
    }

    pub fn get(&self, index: usize) -> Rational {
        match self.entries.binary_search_by_key(&index, |(i, _)| *i) {
            Ok(pos) => self.entries[pos].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn to_dense(&self, len: usize) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); len];
        for (i, x) in &self.entries {
            out[*i] = x.clone();
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::new();
        }
        Self {
            entries: self.entries.iter().map(|(i, x)| (*i, x * c)).collect(),
        }
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, c: &Rational, other: &SparseVec) -> Self {
        if c.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (self.entries.iter().peekable(), other.entries.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some((i, x)), Some((j, y))) => {
                    if i < j {
                        out.push((*i, x.clone()));
                        a.next();
                    } else if j < i {
                        out.push((*j, y * c));
                        b.next();
                    } else {
                        let s = x + y * c;
                        if !s.is_zero() {
                            out.push((*i, s));
                        }
                        a.next();
                        b.next();
                    }
                }
                (Some((i, x)), None) => {
                    out.push((*i, x.clone()));
                    a.next();
                }
                (None, Some((j, y))) => {
                    out.push((*j, y * c));
                    b.next();
                }
                (None, None) => break,
            }
        }
        Self { entries: out }
    }

    pub fn sub(&self, other: &SparseVec) -> Self {
        self.add_scaled(&-Rational::one(), other)
    }

    pub fn add(&self, other: &SparseVec) -> Self {
        self.add_scaled(&Rational::one(), other)
    }

    pub fn dot_dense(&self, dense: &[Rational]) -> Rational {
        self.entries
            .iter()
            .filter(|(i, _)| *i < dense.len())
            .fold(Rational::zero(), |acc, (i, x)| acc + x * &dense[*i])
    }

    pub fn dot(&self, other: &SparseVec) -> Rational {
        let mut acc = Rational::zero();
        let (mut a, mut b) = (0, 0);
        while a < self.entries.len() && b < other.entries.len() {
            let (i, x) = &self.entries[a];
            let (j, y) = &other.entries[b];
            match i.cmp(j) {
                std::cmp::Ordering::Less => a += 1,
                std::cmp::Ordering::Greater => b += 1,
                std::cmp::Ordering::Equal => {
                    acc += x * y;
                    a += 1;
                    b += 1;
                }
            }
        }
        acc
    }
}

/// Row-major sparse matrix over the rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![SparseVec::new(); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            rows: n,
            cols: n,
            data: (0..n).map(SparseVec::unit).collect(),
        }
    }

    pub fn from_rows(cols: usize, rows: Vec<SparseVec>) -> Result<Self> {
        for r in &rows {
            if r.support_bound() > cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: r.support_bound(),
                });
            }
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data: rows,
        })
    }

    pub fn from_dense(cols: usize, rows: &[Vec<Rational>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len());
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            data.push(SparseVec::from_dense(r));
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, Rational)>,
    ) -> Result<Self> {
        let mut per_row: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); rows];
        for (r, c, x) in triplets {
            if r >= rows || c >= cols {
                return Err(Error::DimensionMismatch {
                    expected: rows.max(cols),
                    found: r.max(c),
                });
            }
            per_row[r].push((c, x));
        }
        Ok(Self {
            rows,
            cols,
            data: per_row.into_iter().map(SparseVec::from_entries).collect(),
        })
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &SparseVec {
        &self.data[r]
    }

    pub fn row_vecs(&self) -> &[SparseVec] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        self.data[r].get(c)
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(SparseVec::nnz).sum()
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &Rational)> + '_ {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.entries().iter().map(move |(c, x)| (r, *c, x)))
    }

    pub fn transpose(&self) -> Self {
        let mut per_col: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); self.cols];
        for (r, c, x) in self.triplets() {
            per_col[c].push((r, x.clone()));
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            data: per_col
                .into_iter()
                .map(|entries| SparseVec { entries })
                .collect(),
        }
    }

    /// Matrix times column vector.
    pub fn mul_vec(&self, v: &SparseVec) -> SparseVec {
        SparseVec::from_entries(
            self.data
                .iter()
                .enumerate()
                .map(|(r, row)| (r, row.dot(v))),
        )
    }

    /// `[[row, col, "num/den"], ...]`
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.triplets()
                .map(|(r, c, x)| serde_json::json!([r, c, format_rational(x)]))
                .collect(),
        )
    }

    pub fn from_json(rows: usize, cols: usize, value: &Value) -> Result<Self> {
        let bad = || Error::ParseRational(value.to_string());
        let arr = value.as_array().ok_or_else(bad)?;
        let mut triplets = Vec::with_capacity(arr.len());
        for t in arr {
            let t = t.as_array().ok_or_else(bad)?;
            if t.len() != 3 {
                return Err(bad());
            }
            let r = t[0].as_u64().ok_or_else(bad)? as usize;
            let c = t[1].as_u64().ok_or_else(bad)? as usize;
            let x = parse_rational(t[2].as_str().ok_or_else(bad)?)?;
            triplets.push((r, c, x));
        }
        Self::from_triplets(rows, cols, triplets)
    }
}

type IntRow = Vec<(usize, BigInt)>;

fn make_primitive(mut row: IntRow) -> IntRow {
    let mut g = BigInt::zero();
    for (_, x) in &row {
        g = g.gcd(x);
        if g.is_one() {
            break;
        }
    }
    let negate = row.first().is_some_and(|(_, x)| x.is_negative());
    if !g.is_zero() && !g.is_one() {
        for (_, x) in row.iter_mut() {
            *x = &*x / &g;
        }
    }
    if negate {
        for (_, x) in row.iter_mut() {
            *x = -&*x;
        }
    }
    row
}

fn int_row(v: &SparseVec) -> IntRow {
    let lcm = v
        .entries()
        .iter()
        .fold(BigInt::one(), |acc, (_, x)| acc.lcm(x.denom()));
    make_primitive(
        v.entries()
            .iter()
            .map(|(i, x)| (*i, x.numer() * (&lcm / x.denom())))
            .collect(),
    )
}

/// Eliminates column `col` from `row` using `pivot`; both must hold a nonzero entry there.
fn eliminate(row: &IntRow, row_coef: &BigInt, pivot: &IntRow, pivot_coef: &BigInt) -> IntRow {
    let g = row_coef.gcd(pivot_coef);
    let a = pivot_coef / &g;
    let b = row_coef / &g;
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        let ci = row.get(i).map(|e| e.0);
        let cj = pivot.get(j).map(|e| e.0);
        match (ci, cj) {
            (Some(x), Some(y)) if x == y => {
                let s = &a * &row[i].1 - &b * &pivot[j].1;
                if !s.is_zero() {
                    out.push((x, s));
                }
                i += 1;
                j += 1;
            }
            (Some(x), Some(y)) if x < y => {
                out.push((x, &a * &row[i].1));
                i += 1;
            }
            (Some(x), None) => {
                out.push((x, &a * &row[i].1));
                i += 1;
            }
            (_, Some(y)) => {
                out.push((y, -(&b * &pivot[j].1)));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    make_primitive(out)
}

/// Fraction-free incremental echelon form keyed by pivot column.
#[derive(Default)]
struct IntEchelon {
    rows: BTreeMap<usize, IntRow>,
}

impl IntEchelon {
    fn insert(&mut self, mut row: IntRow) -> bool {
        loop {
            let Some((lead, coef)) = row.first().cloned() else {
                return false;
            };
            match self.rows.get(&lead) {
                Some(pivot) => row = eliminate(&row, &coef, pivot, &pivot[0].1),
                None => {
                    self.rows.insert(lead, row);
                    return true;
                }
            }
        }
    }

    /// Back-substitutes into reduced row-echelon form, normalized to unit pivots.
    fn into_reduced(self) -> Vec<(usize, SparseVec)> {
        let mut done: BTreeMap<usize, IntRow> = BTreeMap::new();
        for (pivot_col, mut row) in self.rows.into_iter().rev() {
            let targets: Vec<usize> = row
                .iter()
                .skip(1)
                .map(|(c, _)| *c)
                .filter(|c| done.contains_key(c))
                .collect();
            for c in targets {
                let pos = row.binary_search_by_key(&c, |e| e.0);
                if let Ok(pos) = pos {
                    let coef = row[pos].1.clone();
                    let other = &done[&c];
                    row = eliminate(&row, &coef, other, &other[0].1);
                }
            }
            done.insert(pivot_col, row);
        }
        done.into_iter()
            .map(|(c, row)| {
                let lead = row[0].1.clone();
                let v = SparseVec {
                    entries: row
                        .into_iter()
                        .map(|(i, x)| (i, Rational::new(x, lead.clone())))
                        .collect(),
                };
                (c, v)
            })
            .collect()
    }
}

/// Result of [`rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub reduced: SparseMatrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

/// Reduced row-echelon form over the rationals. Zero rows are dropped.
pub fn rref(m: &SparseMatrix) -> Rref {
    let rows = reduce_rows(m.row_vecs().iter());
    let pivots: Vec<usize> = rows.iter().map(|(c, _)| *c).collect();
    let rank = pivots.len();
    Rref {
        reduced: SparseMatrix {
            rows: rank,
            cols: m.ncols(),
            data: rows.into_iter().map(|(_, v)| v).collect(),
        },
        pivots,
        rank,
    }
}

fn reduce_rows<'a>(rows: impl Iterator<Item = &'a SparseVec>) -> Vec<(usize, SparseVec)> {
    let mut ech = IntEchelon::default();
    for r in rows {
        if !r.is_zero() {
            ech.insert(int_row(r));
        }
    }
    ech.into_reduced()
}

pub fn rank(m: &SparseMatrix) -> usize {
    let mut ech = IntEchelon::default();
    m.row_vecs()
        .iter()
        .filter(|r| !r.is_zero())
        .filter(|r| ech.insert(int_row(r)))
        .count()
}

/// Null space `{v : m v = 0}`.
pub fn kernel(m: &SparseMatrix) -> Subspace {
    let r = rref(m);
    let n = m.ncols();
    let mut is_pivot = vec![false; n];
    for &p in &r.pivots {
        is_pivot[p] = true;
    }
    let vectors: Vec<SparseVec> = (0..n)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut entries = vec![(f, Rational::one())];
            for (row, &p) in r.reduced.row_vecs().iter().zip(&r.pivots) {
                let x = row.get(f);
                if !x.is_zero() {
                    entries.push((p, -x));
                }
            }
            SparseVec::from_entries(entries)
        })
        .collect();
    Subspace::span(n, &vectors).expect("kernel vectors lie in the ambient space")
}

/// A subspace of `Q^n` held as its reduced row-echelon basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<SparseVec>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: (0..ambient_dim).map(SparseVec::unit).collect(),
            pivots: (0..ambient_dim).collect(),
        }
    }

    pub fn span(ambient_dim: usize, vectors: &[SparseVec]) -> Result<Self> {
        for v in vectors {
            check_ambient(ambient_dim, v)?;
        }
        let rows = reduce_rows(vectors.iter());
        let (pivots, basis) = rows.into_iter().unzip();
        Ok(Self {
            ambient_dim,
            basis,
            pivots,
        })
    }

    pub fn span_dense(ambient_dim: usize, vectors: &[Vec<Rational>]) -> Result<Self> {
        let mut sparse = Vec::with_capacity(vectors.len());
        for v in vectors {
            if v.len() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    found: v.len(),
                });
            }
            sparse.push(SparseVec::from_dense(v));
        }
        Self::span(ambient_dim, &sparse)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[SparseVec] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_matrix(&self) -> SparseMatrix {
        SparseMatrix {
            rows: self.basis.len(),
            cols: self.ambient_dim,
            data: self.basis.clone(),
        }
    }

    /// Component of `v` outside the span: `v - sum v[p_i] b_i`.
    pub fn residual(&self, v: &SparseVec) -> Result<SparseVec> {
        check_ambient(self.ambient_dim, v)?;
        let coeffs: Vec<Rational> = self.pivots.iter().map(|&p| v.get(p)).collect();
        let mut r = v.clone();
        for (c, b) in coeffs.iter().zip(&self.basis) {
            if !c.is_zero() {
                r = r.add_scaled(&-c, b);
            }
        }
        Ok(r)
    }

    pub fn contains(&self, v: &SparseVec) -> Result<bool> {
        Ok(self.residual(v)?.is_zero())
    }

    /// Coordinates of `v` over the RREF basis.
    pub fn membership(&self, v: &SparseVec) -> Result<Vec<Rational>> {
        if !self.residual(v)?.is_zero() {
            return Err(Error::NotMember);
        }
        Ok(self.pivots.iter().map(|&p| v.get(p)).collect())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_same(other)?;
        let all: Vec<SparseVec> = self.basis.iter().chain(&other.basis).cloned().collect();
        Subspace::span(self.ambient_dim, &all)
    }

    pub fn intersection(&self, other: &Subspace) -> Result<Subspace> {
        self.check_same(other)?;
        if self.dim() == 0 || other.dim() == 0 {
            return Ok(Subspace::zero(self.ambient_dim));
        }
        // Solve x B1 = y B2 through the kernel of [B1; -B2]^T.
        let d1 = self.dim();
        let mut stacked = self.basis.clone();
        stacked.extend(other.basis.iter().map(|b| b.scale(&-Rational::one())));
        let m = SparseMatrix {
            rows: stacked.len(),
            cols: self.ambient_dim,
            data: stacked,
        }
        .transpose();
        let ker = kernel(&m);
        let vectors: Vec<SparseVec> = ker
            .basis()
            .iter()
            .map(|k| {
                k.entries()
                    .iter()
                    .take_while(|(i, _)| *i < d1)
                    .fold(SparseVec::new(), |acc, (i, x)| acc.add_scaled(x, &self.basis[*i]))
            })
            .collect();
        Subspace::span(self.ambient_dim, &vectors)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> Result<bool> {
        self.check_same(other)?;
        for b in &other.basis {
            if !self.contains(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Equality as subspaces; RREF bases are unique so this is a direct comparison.
    pub fn equals(&self, other: &Subspace) -> Result<bool> {
        self.check_same(other)?;
        Ok(self.pivots == other.pivots && self.basis == other.basis)
    }

    fn check_same(&self, other: &Subspace) -> Result<()> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: other.ambient_dim,
            });
        }
        Ok(())
    }
}

fn check_ambient(ambient_dim: usize, v: &SparseVec) -> Result<()> {
    if v.support_bound() > ambient_dim {
        return Err(Error::DimensionMismatch {
            expected: ambient_dim,
            found: v.support_bound(),
        });
    }
    Ok(())
}

/// Incremental echelon basis that remembers how each basis row was built from
/// the inserted vectors, so members can be written back in terms of the inputs.
#[derive(Clone, Debug, Default)]
pub struct EchelonSolver {
    rows: BTreeMap<usize, (SparseVec, SparseVec)>,
    inserted: usize,
}

impl EchelonSolver {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts the next input vector; returns whether it raised the rank.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let idx = self.inserted;
        self.inserted += 1;
        let (residual, combo) = self.reduce(v.clone(), SparseVec::unit(idx), true);
        match residual.leading().cloned() {
            None => false,
            Some((lead, a)) => {
                let inv = a.recip();
                self.rows
                    .insert(lead, (residual.scale(&inv), combo.scale(&inv)));
                true
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn inserted(&self) -> usize {
        self.inserted
    }

    /// Coefficients `c` over inserted vectors with `sum c_k input_k = w`, or `None`.
    pub fn solve(&self, w: &SparseVec) -> Option<SparseVec> {
        let (residual, combo) = self.reduce(w.clone(), SparseVec::new(), false);
        residual.is_zero().then_some(combo)
    }

    // With `subtract` the combination tracks `v - sum coef*row`; otherwise it
    // accumulates `sum coef*row` so that it expresses the reduced part of `v`.
    fn reduce(&self, mut v: SparseVec, mut combo: SparseVec, subtract: bool) -> (SparseVec, SparseVec) {
        for (&p, (row, rc)) in &self.rows {
            let coef = v.get(p);
            if coef.is_zero() {
                continue;
            }
            v = v.add_scaled(&-&coef, row);
            combo = if subtract {
                combo.add_scaled(&-&coef, rc)
            } else {
                combo.add_scaled(&coef, rc)
            };
        }
        (v, combo)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        int(n)
    }

    fn dense(rows: &[&[i64]]) -> SparseMatrix {
        let cols = rows[0].len();
        let rows: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
        SparseMatrix::from_dense(cols, &rows).unwrap()
    }

    fn det(m: &[Vec<Rational>]) -> Rational {
        // Cofactor expansion along the first row; test-only oracle.
        let n = m.len();
        if n == 1 {
            return m[0][0].clone();
        }
        let mut acc = Rational::zero();
        for j in 0..n {
            let minor: Vec<Vec<Rational>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect())
                .collect();
            let term = &m[0][j] * det(&minor);
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    #[test]
    fn identity_rref() {
        let r = rref(&SparseMatrix::identity(2));
        assert_eq!(r.rank, 2);
        assert_eq!(r.pivots, vec![0, 1]);
    }

    #[test]
    fn proportional_rows() {
        let r = rref(&dense(&[&[1, 2], &[2, 4]]));
        assert_eq!(r.rank, 1);
        assert_eq!(r.reduced, dense(&[&[1, 2]]));
    }

    #[test]
    fn hilbert_matrix_full_rank() {
        let h: Vec<Vec<Rational>> = (0..5)
            .map(|i| (0..5).map(|j| rat(1, i + j + 1)).collect())
            .collect();
        assert!(!det(&h).is_zero());
        let r = rref(&SparseMatrix::from_dense(5, &h).unwrap());
        assert_eq!(r.rank, 5);
        assert_eq!(r.reduced, SparseMatrix::identity(5));
    }

    #[test]
    fn rref_with_fractions() {
        let r = rref(&dense(&[&[2, 4, 6], &[1, 3, 5]]));
        assert_eq!(r.pivots, vec![0, 1]);
        assert_eq!(r.reduced.get(0, 2), q(-1));
        assert_eq!(r.reduced.get(1, 2), q(2));
    }

    #[test]
    fn kernels() {
        assert_eq!(kernel(&SparseMatrix::identity(4)).dim(), 0);
        assert_eq!(kernel(&SparseMatrix::zeros(2, 3)).dim(), 3);
        let k = kernel(&dense(&[&[1, 1, 0], &[0, 1, 1]]));
        assert_eq!(k.dim(), 1);
        let v = SparseVec::from_dense(&[q(1), q(-1), q(1)]);
        assert!(k.contains(&v).unwrap());
    }

    #[test]
    fn span_equality_and_membership() {
        let a = Subspace::span_dense(2, &[vec![q(1), q(0)], vec![q(0), q(1)]]).unwrap();
        let b = Subspace::span_dense(2, &[vec![q(1), q(1)], vec![q(1), q(-1)]]).unwrap();
        assert!(a.equals(&b).unwrap());

        let s = Subspace::span_dense(2, &[vec![q(1), q(2)]]).unwrap();
        assert_eq!(s.membership(&SparseVec::from_dense(&[q(2), q(4)])).unwrap(), vec![q(2)]);
        assert_eq!(
            s.membership(&SparseVec::from_dense(&[q(2), q(5)])),
            Err(Error::NotMember)
        );

        let x = Subspace::span_dense(3, &[vec![q(1), q(0), q(0)]]).unwrap();
        let y = Subspace::span_dense(3, &[vec![q(0), q(1), q(0)]]).unwrap();
        assert_eq!(x.sum(&y).unwrap().dim(), 2);
        assert_eq!(x.intersection(&y).unwrap().dim(), 0);
        assert!(matches!(x.sum(&a), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn intersection_of_planes() {
        let p1 = Subspace::span_dense(3, &[vec![q(1), q(0), q(0)], vec![q(0), q(1), q(0)]]).unwrap();
        let p2 = Subspace::span_dense(3, &[vec![q(1), q(1), q(1)], vec![q(0), q(1), q(0)]]).unwrap();
        let i = p1.intersection(&p2).unwrap();
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&SparseVec::unit(1)).unwrap());
    }

    #[test]
    fn solver_recovers_combination() {
        let inputs = [
            SparseVec::from_dense(&[q(1), q(1), q(0)]),
            SparseVec::from_dense(&[q(2), q(2), q(0)]),
            SparseVec::from_dense(&[q(0), q(1), q(1)]),
        ];
        let mut s = EchelonSolver::new();
        let raised: Vec<bool> = inputs.iter().map(|v| s.insert(v)).collect();
        assert_eq!(raised, vec![true, false, true]);
        let w = SparseVec::from_dense(&[q(3), q(1), q(-2)]);
        let c = s.solve(&w).unwrap();
        let rebuilt = c
            .entries()
            .iter()
            .fold(SparseVec::new(), |acc, (k, x)| acc.add_scaled(x, &inputs[*k]));
        assert_eq!(rebuilt, w);
        assert!(s.solve(&SparseVec::unit(0)).is_none());
    }

    #[test]
    fn rational_strings() {
        assert_eq!(format_rational(&rat(-3, 10)), "-3/10");
        assert_eq!(format_rational(&int(4)), "4/1");
        assert_eq!(parse_rational("6/-4").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn matrix_json() {
        let m = dense(&[&[0, 2], &[-1, 0]]);
        let j = m.to_json();
        assert_eq!(j, serde_json::json!([[0, 1, "2/1"], [1, 0, "-1/1"]]));
        assert_eq!(SparseMatrix::from_json(2, 2, &j).unwrap(), m);
    }
}
