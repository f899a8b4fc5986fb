//! Exact integer linear algebra over arbitrary-precision integers.
//!
//! Everything downstream (primitivity of Euler classes, simple connectivity
//! of torus bundles, fundamental groups, spin tests) reduces to the handful
//! of operations here.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integer coordinates of a cohomology class in a fixed free basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntVec(pub Vec<BigInt>);

impl IntVec {
    pub fn new(entries: Vec<BigInt>) -> Self {
        IntVec(entries)
    }

    pub fn zeros(len: usize) -> Self {
        IntVec(vec![BigInt::zero(); len])
    }

    /// The i-th standard basis vector.
    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.0[i] = BigInt::one();
        v
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn slice(&self, start: usize, end: usize) -> IntVec {
        IntVec(self.0[start..end].to_vec())
    }

    /// Reduction mod 2, one bit per coordinate.
    pub fn parity(&self) -> Vec<bool> {
        self.0.iter().map(Integer::is_odd).collect()
    }

    pub fn scaled(&self, c: &BigInt) -> IntVec {
        IntVec(self.0.iter().map(|x| x * c).collect())
    }
}

impl From<Vec<i64>> for IntVec {
    fn from(v: Vec<i64>) -> Self {
        IntVec(v.into_iter().map(BigInt::from).collect())
    }
}

impl From<&[i64]> for IntVec {
    fn from(v: &[i64]) -> Self {
        IntVec(v.iter().copied().map(BigInt::from).collect())
    }
}

impl fmt::Display for IntVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for IntVec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        crate::json::serialize_int_slice(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for IntVec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(IntVec(crate::json::deserialize_int_vec(d)?))
    }
}

/// A `rows × cols` integer matrix, stored row-major.
///
/// Read as a homomorphism `Z^cols → Z^rows`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMat { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from row vectors; every row must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<IntVec>) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in &rows {
            if r.len() != cols {
                return Err(Error::LengthMismatch { expected: cols, actual: r.len() });
            }
            data.extend(r.0.iter().cloned());
        }
        Ok(IntMat { rows: rows.len(), cols, data })
    }

    /// Convenience constructor for literals; panics on ragged input.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows.iter().map(|r| IntVec::from(*r)).collect();
        Self::from_rows(cols, rows).expect("ragged matrix literal")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: BigInt) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> IntVec {
        IntVec(self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn row_vecs(&self) -> Vec<IntVec> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    /// The first `k` rows.
    pub fn top_rows(&self, k: usize) -> IntMat {
        IntMat { rows: k, cols: self.cols, data: self.data[..k * self.cols].to_vec() }
    }

    pub fn transpose(&self) -> IntMat {
        let mut t = IntMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMat) -> Result<IntMat> {
        if self.cols != other.rows {
            return Err(Error::LengthMismatch { expected: self.cols, actual: other.rows });
        }
        let mut out = IntMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] += a * other.get(l, j);
                }
            }
        }
        Ok(out)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += c · row[src]
    fn add_row(&mut self, dst: usize, src: usize, c: &BigInt) {
        for j in 0..self.cols {
            let delta = c * self.get(src, j);
            self.data[dst * self.cols + j] += delta;
        }
    }

    /// col[dst] += c · col[src]
    fn add_col(&mut self, dst: usize, src: usize, c: &BigInt) {
        for i in 0..self.rows {
            let delta = c * self.get(i, src);
            self.data[i * self.cols + dst] += delta;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let x = -std::mem::take(&mut self.data[i * self.cols + j]);
            self.data[i * self.cols + j] = x;
        }
    }
}

impl fmt::Display for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", self.row(i))?;
        }
        write!(f, "]")
    }
}

impl Serialize for IntMat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.rows))?;
        for r in self.row_vecs() {
            seq.serialize_element(&r)?;
        }
        seq.end()
    }
}

/// `U · A · V = D` with `U`, `V` unimodular and `D` in Smith form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfDecomposition {
    pub u: IntMat,
    pub v: IntMat,
    pub d: IntMat,
}

impl SnfDecomposition {
    /// Diagonal entries `d_1 | d_2 | …`, including trailing zeros.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.d.diagonal()
    }

    pub fn rank(&self) -> usize {
        self.d.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

/// Structure of `Z^rows / im(A)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cokernel {
    pub free_rank: usize,
    #[serde(serialize_with = "crate::json::serialize_int_vec")]
    pub torsion: Vec<BigInt>,
}

impl Cokernel {
    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

/// gcd of the entries; 0 for the zero vector.
pub fn content(v: &IntVec) -> BigInt {
    v.0.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

pub fn is_primitive(v: &IntVec) -> bool {
    content(v).is_one()
}

/// Smallest nonzero |entry| in the lower-right block starting at (t, t),
/// ties broken by row-major position.
fn find_pivot(m: &IntMat, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..m.rows {
        for j in t..m.cols {
            let x = m.get(i, j);
            if x.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if m.get(bi, bj).abs() <= x.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

pub fn smith_normal_form(a: &IntMat) -> SnfDecomposition {
    let (k, n) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut u = IntMat::identity(k);
    let mut v = IntMat::identity(n);

    for t in 0..k.min(n) {
        loop {
            let Some((pi, pj)) = find_pivot(&d, t) else {
                return SnfDecomposition { u, v, d };
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let pivot = d.get(t, t).clone();
            let mut cleared = true;
            for i in t + 1..k {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let q = -(d.get(i, t) / &pivot);
                d.add_row(i, t, &q);
                u.add_row(i, t, &q);
                cleared &= d.get(i, t).is_zero();
            }
            for j in t + 1..n {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let q = -(d.get(t, j) / &pivot);
                d.add_col(j, t, &q);
                v.add_col(j, t, &q);
                cleared &= d.get(t, j).is_zero();
            }
            if !cleared {
                // a smaller remainder exists; re-pivot on it
                continue;
            }

            let offender = (t + 1..k).find(|&i| (t + 1..n).any(|j| !(d.get(i, j) % &pivot).is_zero()));
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row(t, i, &one);
                    u.add_row(t, i, &one);
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    SnfDecomposition { u, v, d }
}

/// Whether the rows of `a` extend to a basis of `Z^cols`.
pub fn extends_to_basis(a: &IntMat) -> Result<bool> {
    if a.rows > a.cols {
        return Err(Error::Dimension(format!(
            "{} rows cannot extend to a basis of rank {}",
            a.rows, a.cols
        )));
    }
    let snf = smith_normal_form(a);
    Ok(snf.invariant_factors().iter().all(One::is_one))
}

pub fn cokernel(a: &IntMat) -> Cokernel {
    let snf = smith_normal_form(a);
    let diag = snf.invariant_factors();
    let rank = diag.iter().filter(|x| !x.is_zero()).count();
    Cokernel {
        free_rank: a.rows - rank,
        torsion: diag.into_iter().filter(|x| x > &BigInt::one()).collect(),
    }
}

/// Reduced GF(2) row basis; each entry is (pivot column, bits).
fn gf2_echelon(rows: &[Vec<bool>]) -> Vec<(usize, Vec<bool>)> {
    let mut basis: Vec<(usize, Vec<bool>)> = Vec::new();
    for r in rows {
        let mut r = r.clone();
        for (p, b) in &basis {
            if r[*p] {
                xor_into(&mut r, b);
            }
        }
        if let Some(p) = r.iter().position(|&x| x) {
            for (_, b) in basis.iter_mut() {
                if b[p] {
                    xor_into(b, &r);
                }
            }
            basis.push((p, r));
        }
    }
    basis
}

fn xor_into(dst: &mut [bool], src: &[bool]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= *s;
    }
}

/// Whether `w mod 2` lies in the GF(2) span of the rows of `rows mod 2`.
pub fn gf2_in_span(w: &IntVec, rows: &IntMat) -> Result<bool> {
    if w.len() != rows.cols {
        return Err(Error::LengthMismatch { expected: rows.cols, actual: w.len() });
    }
    let bits: Vec<Vec<bool>> = rows.row_vecs().iter().map(IntVec::parity).collect();
    Ok(gf2_in_span_bits(&w.parity(), &bits))
}

pub(crate) fn gf2_in_span_bits(w: &[bool], rows: &[Vec<bool>]) -> bool {
    let mut w = w.to_vec();
    for (p, b) in gf2_echelon(rows) {
        if w[p] {
            xor_into(&mut w, &b);
        }
    }
    !w.iter().any(|&x| x)
}
