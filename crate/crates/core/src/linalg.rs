//! Exact rational linear algebra.
//!
//! Scalars are arbitrary-precision rationals, so every equality tested by the
//! analysis layers is decided exactly. Row reduction always produces reduced
//! row-echelon form with pivots in ascending column order; kernel and image
//! bases are read off that form and are therefore canonical.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest ambient dimension accepted by the commutant and closure solvers.
pub const MAX_DIM: usize = 32;

/// An exact rational number, always kept in lowest terms with a positive
/// denominator.
pub type Scalar = BigRational;

pub fn int(value: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(value))
}

pub fn frac(numer: i64, denom: i64) -> Scalar {
    Scalar::new(BigInt::from(numer), BigInt::from(denom))
}

/// Parses `"p"` or `"p/q"` (surrounding whitespace ignored).
pub fn parse_scalar(text: &str) -> Result<Scalar> {
    let trimmed = text.trim();
    Scalar::from_str(trimmed).map_err(|_| Error::InvalidScalar(text.to_string()))
}

/// Renders a scalar as `"p"` or `"p/q"`.
pub fn format_scalar(value: &Scalar) -> String {
    value.to_string()
}

/// A configuration: a finite weighted combination of basis states.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vector {
    entries: Vec<Scalar>,
}

impl Vector {
    pub fn new(entries: Vec<Scalar>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidDimension("vectors must have dimension >= 1".into()));
        }
        Ok(Vector { entries })
    }

    pub fn from_ints(values: &[i64]) -> Self {
        Vector::new(values.iter().map(|&v| int(v)).collect()).expect("non-empty vector")
    }

    pub fn zeros(dim: usize) -> Self {
        Vector { entries: vec![Scalar::zero(); dim] }
    }

    /// Standard basis vector `e_index`.
    pub fn unit(dim: usize, index: usize) -> Self {
        let mut v = Vector::zeros(dim);
        v.entries[index] = Scalar::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Scalar> {
        self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, factor: &Scalar) -> Vector {
        Vector { entries: self.entries.iter().map(|x| x * factor).collect() }
    }

    pub fn checked_add(&self, other: &Vector) -> Result<Vector> {
        self.same_dim(other)?;
        Ok(Vector { entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect() })
    }

    pub fn checked_sub(&self, other: &Vector) -> Result<Vector> {
        self.same_dim(other)?;
        Ok(Vector { entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect() })
    }

    fn same_dim(&self, other: &Vector) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::ShapeMismatch(format!("vector dims {} and {}", self.dim(), other.dim())));
        }
        Ok(())
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Dense exact-rational matrix, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidDimension("matrices must be at least 1x1".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        Matrix::new(r, c, rows.into_iter().flatten().collect())
    }

    /// Convenience constructor for integer literals. Panics on ragged input.
    pub fn from_ints<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        Matrix::from_rows(rows.iter().map(|row| row.as_ref().iter().map(|&v| int(v)).collect()).collect())
            .expect("well-formed integer matrix")
    }

    pub fn identity(n: usize) -> Self {
        Matrix::scalar(n, Scalar::one())
    }

    pub fn scalar(n: usize, value: Scalar) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = value.clone();
        }
        m
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn diag(values: &[Scalar]) -> Self {
        let n = values.len();
        let mut m = Matrix::zeros(n, n);
        for (i, v) in values.iter().enumerate() {
            m.data[i * n + i] = v.clone();
        }
        m
    }

    pub fn diag_ints(values: &[i64]) -> Self {
        Matrix::diag(&values.iter().map(|&v| int(v)).collect::<Vec<_>>())
    }

    /// Block-diagonal sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &Matrix) -> Matrix {
        let rows = self.rows + other.rows;
        let cols = self.cols + other.cols;
        let mut m = Matrix::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.data[i * cols + j] = self.get(i, j).clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                m.data[(i + self.rows) * cols + j + self.cols] = other.get(i, j).clone();
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

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> &Scalar {
        &self.data[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Scalar) {
        self.data[row * self.cols + col] = value;
    }

    pub fn row(&self, row: usize) -> &[Scalar] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    pub fn row_vectors(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column(&self, col: usize) -> Vector {
        Vector { entries: (0..self.rows).map(|r| self.get(r, col).clone()).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Matrix::identity(self.rows)
    }

    /// True iff the matrix equals `λ·𝟙` for some λ.
    pub fn is_scalar_multiple_of_identity(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        let lambda = self.get(0, 0);
        (0..self.rows).all(|i| {
            (0..self.cols).all(|j| {
                let x = self.get(i, j);
                if i == j {
                    x == lambda
                } else {
                    x.is_zero()
                }
            })
        })
    }

    pub fn transpose(&self) -> Matrix {
        let mut m = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        m
    }

    pub fn scale(&self, factor: &Scalar) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * factor).collect() }
    }

    pub fn checked_add(&self, other: &Matrix) -> Result<Matrix> {
        self.same_shape(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn checked_sub(&self, other: &Matrix) -> Result<Matrix> {
        self.same_shape(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    pub fn checked_mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &Vector) -> Result<Vector> {
        if self.cols != v.dim() {
            return Err(Error::ShapeMismatch(format!(
                "cannot apply {}x{} matrix to vector of dim {}",
                self.rows,
                self.cols,
                v.dim()
            )));
        }
        let entries = (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v.entries())
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Scalar::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect();
        Ok(Vector { entries })
    }

    pub fn pow(&self, exponent: u32) -> Matrix {
        assert!(self.is_square(), "pow of a non-square matrix");
        let mut result = Matrix::identity(self.rows);
        for _ in 0..exponent {
            result = &result * self;
        }
        result
    }

    /// Flattens row-major into a vector of length `rows·cols`.
    pub fn vectorize(&self) -> Vec<Scalar> {
        self.data.clone()
    }

    pub fn from_vectorized(n: usize, entries: Vec<Scalar>) -> Result<Matrix> {
        Matrix::new(n, n, entries)
    }

    pub fn rank(&self) -> usize {
        rank(self)
    }

    pub fn kernel_basis(&self) -> SubspaceBasis {
        kernel_basis(self)
    }

    pub fn image_basis(&self) -> SubspaceBasis {
        image_basis(self)
    }

    fn same_shape(&self, other: &Matrix) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch(format!("{}x{} vs {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        Ok(())
    }

    fn zip_with(&self, other: &Matrix, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        }
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for (c, x) in self.row(r).iter().enumerate() {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
            }
        }
        write!(f, "]")
    }
}

// Operator impls panic on shape mismatch; use the checked_* methods on
// untrusted input.
impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        self.checked_add(rhs).expect("matrix add")
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        self.checked_sub(rhs).expect("matrix sub")
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.checked_mul(rhs).expect("matrix mul")
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| -x).collect() }
    }
}

pub fn mat_add(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    a.checked_add(b)
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    a.checked_mul(b)
}

/// The Lie bracket `[x, y] = xy − yx`.
pub fn commutator(x: &Matrix, y: &Matrix) -> Result<Matrix> {
    if !x.is_square() || !y.is_square() || x.rows() != y.rows() {
        return Err(Error::ShapeMismatch(format!(
            "commutator needs square matrices of equal dim, got {}x{} and {}x{}",
            x.rows(),
            x.cols(),
            y.rows(),
            y.cols()
        )));
    }
    Ok(&(x * y) - &(y * x))
}

/// True iff `p·p = p` exactly. Non-square input is never idempotent.
pub fn is_idempotent(p: &Matrix) -> bool {
    p.is_square() && &(p * p) == p
}

/// Reduces `rows` in place to reduced row-echelon form and returns the pivot
/// columns in ascending order. Zero rows are dropped.
pub fn rref_rows(rows: &mut Vec<Vec<Scalar>>, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..cols {
        let Some(found) = (next..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(next, found);
        let inv = rows[next][col].recip();
        if !inv.is_one() {
            for x in rows[next][col..].iter_mut() {
                if !x.is_zero() {
                    *x *= &inv;
                }
            }
        }
        let pivot_row = rows[next].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == next || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                if !p.is_zero() {
                    *x -= &factor * p;
                }
            }
        }
        pivots.push(col);
        next += 1;
        if next == rows.len() {
            break;
        }
    }
    rows.truncate(next);
    pivots
}

/// Reduced row-echelon form of a matrix together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref {
    pub rows: Vec<Vec<Scalar>>,
    pub pivots: Vec<usize>,
    pub cols: usize,
}

pub fn rref(a: &Matrix) -> Rref {
    let mut rows = a.row_vectors();
    let pivots = rref_rows(&mut rows, a.cols());
    Rref { rows, pivots, cols: a.cols() }
}

/// Null space basis: one vector per free column (ascending), with that free
/// variable set to 1.
pub fn kernel_basis(a: &Matrix) -> SubspaceBasis {
    let reduced = rref(a);
    SubspaceBasis { ambient_dim: a.cols(), vectors: kernel_from_rref(&reduced) }
}

fn kernel_from_rref(reduced: &Rref) -> Vec<Vector> {
    let mut is_pivot = vec![false; reduced.cols];
    for &p in &reduced.pivots {
        is_pivot[p] = true;
    }
    (0..reduced.cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![Scalar::zero(); reduced.cols];
            v[free] = Scalar::one();
            for (row, &p) in reduced.rows.iter().zip(&reduced.pivots) {
                v[p] = -&row[free];
            }
            Vector { entries: v }
        })
        .collect()
}

/// Column-space basis, taken as the nonzero rows of the RREF of the transpose.
pub fn image_basis(a: &Matrix) -> SubspaceBasis {
    let mut rows = a.transpose().row_vectors();
    rref_rows(&mut rows, a.rows());
    SubspaceBasis { ambient_dim: a.rows(), vectors: rows.into_iter().map(|entries| Vector { entries }).collect() }
}

pub fn rank(a: &Matrix) -> usize {
    rref(a).pivots.len()
}

/// Inverse of a square matrix held as an integer matrix over one common
/// denominator, so products against it run in integer arithmetic.
#[derive(Clone, Debug)]
pub struct ScaledInverse {
    numer: Vec<Vec<BigInt>>,
    denom: BigInt,
}

impl ScaledInverse {
    /// Fraction-free Gauss-Jordan on `[s·a | I]`. `None` when `a` is singular
    /// or not square.
    pub fn new(a: &Matrix) -> Option<Self> {
        if !a.is_square() {
            return None;
        }
        let n = a.rows;
        let scale = a.data.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let mut rows: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                let mut row: Vec<BigInt> = a.row(i).iter().map(|x| x.numer() * (&scale / x.denom())).collect();
                row.extend((0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
                row
            })
            .collect();
        let mut prev = BigInt::one();
        for k in 0..n {
            let p = (k..n).find(|&i| !rows[i][k].is_zero())?;
            rows.swap(k, p);
            let pivot_row = rows[k].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i == k {
                    continue;
                }
                let factor = row[k].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    if x.is_zero() && (factor.is_zero() || y.is_zero()) {
                        continue;
                    }
                    *x = (&pivot_row[k] * &*x - &factor * y) / &prev;
                }
            }
            prev = pivot_row[k].clone();
        }
        let sign = if prev.is_negative() { -BigInt::one() } else { BigInt::one() };
        let numer = rows.into_iter().map(|row| row[n..].iter().map(|x| x * &scale * &sign).collect()).collect();
        Some(ScaledInverse { numer, denom: prev.abs() })
    }

    pub fn to_matrix(&self) -> Matrix {
        let n = self.numer.len();
        let data = self.numer.iter().flatten().map(|x| Scalar::new(x.clone(), self.denom.clone())).collect();
        Matrix { rows: n, cols: n, data }
    }

    /// `m · a⁻¹`.
    pub fn right_apply(&self, m: &Matrix) -> Result<Matrix> {
        let n = self.numer.len();
        if m.cols != n {
            return Err(Error::ShapeMismatch(format!("cannot multiply {}x{} by {n}x{n}", m.rows, m.cols)));
        }
        let mut data = Vec::with_capacity(m.rows * n);
        for i in 0..m.rows {
            let row = m.row(i);
            let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            let ints: Vec<BigInt> = row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
            let denom = &lcm * &self.denom;
            for j in 0..n {
                let mut sum = BigInt::zero();
                for (x, inv) in ints.iter().zip(&self.numer) {
                    if !x.is_zero() && !inv[j].is_zero() {
                        sum += x * &inv[j];
                    }
                }
                data.push(Scalar::new(sum, denom.clone()));
            }
        }
        Matrix::new(m.rows, n, data)
    }
}

/// A linearly independent list of vectors in a common ambient space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceBasis {
    ambient_dim: usize,
    vectors: Vec<Vector>,
}

impl SubspaceBasis {
    pub fn new(ambient_dim: usize, vectors: Vec<Vector>) -> Result<Self> {
        if ambient_dim == 0 {
            return Err(Error::InvalidDimension("ambient dimension must be >= 1".into()));
        }
        if let Some(v) = vectors.iter().find(|v| v.dim() != ambient_dim) {
            return Err(Error::ShapeMismatch(format!("vector of dim {} in ambient dim {ambient_dim}", v.dim())));
        }
        let mut rows: Vec<Vec<Scalar>> = vectors.iter().map(|v| v.entries.clone()).collect();
        if rref_rows(&mut rows, ambient_dim).len() != vectors.len() {
            return Err(Error::LinearlyDependent);
        }
        Ok(SubspaceBasis { ambient_dim, vectors })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn vectors(&self) -> &[Vector] {
        &self.vectors
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn contains(&self, v: &Vector) -> bool {
        let mut span = EchelonSpan::new(self.ambient_dim);
        for b in &self.vectors {
            span.insert(b.entries());
        }
        span.contains(v.entries())
    }

    /// Exact subspace containment `span(self) ⊆ span(other)`.
    pub fn is_subspace_of(&self, other: &SubspaceBasis) -> bool {
        let mut span = EchelonSpan::new(other.ambient_dim);
        for b in &other.vectors {
            span.insert(b.entries());
        }
        self.vectors.iter().all(|v| span.contains(v.entries()))
    }
}

/// Incrementally maintained reduced echelon basis of a subspace of `k^dim`.
///
/// Every stored row has a leading 1 at its pivot and zeros at every other
/// row's pivot, so reduction against the rows is order-independent.
#[derive(Clone, Debug)]
pub struct EchelonSpan {
    dim: usize,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl EchelonSpan {
    pub fn new(dim: usize) -> Self {
        EchelonSpan { dim, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Remainder of `v` after eliminating every stored pivot.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut out = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if out[p].is_zero() {
                continue;
            }
            let factor = out[p].clone();
            for (x, r) in out.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x -= &factor * r;
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Adds `v` to the span. Returns false if it was already a member.
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        assert_eq!(v.len(), self.dim, "echelon span dimension mismatch");
        let mut rem = self.reduce(v);
        let Some(pivot) = rem.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = rem[pivot].recip();
        for x in rem.iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        for row in self.rows.iter_mut() {
            if row[pivot].is_zero() {
                continue;
            }
            let factor = row[pivot].clone();
            for (x, r) in row.iter_mut().zip(&rem) {
                if !r.is_zero() {
                    *x -= &factor * r;
                }
            }
        }
        let at = self.pivots.partition_point(|&p| p < pivot);
        self.pivots.insert(at, pivot);
        self.rows.insert(at, rem);
        true
    }

    /// Basis rows in RREF order (ascending pivots).
    pub fn rows(&self) -> &[Vec<Scalar>] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<Vec<Scalar>> {
        self.rows
    }
}

/// Polynomial with rational coefficients, stored in ascending degree order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    coeffs: Vec<Scalar>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Scalar::zero());
        }
        Polynomial { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Polynomial::new(coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        self.coeffs.iter().rev().fold(Scalar::zero(), |acc, c| acc * x + c)
    }

    /// Horner evaluation at a square matrix.
    pub fn eval_matrix(&self, a: &Matrix) -> Matrix {
        let n = a.rows();
        self.coeffs.iter().rev().fold(Matrix::zeros(n, n), |acc, c| &(&acc * a) + &Matrix::scalar(n, c.clone()))
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() == 1 {
            return Polynomial::new(vec![Scalar::zero()]);
        }
        Polynomial::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * int(i as i64)).collect())
    }

    /// Quotient of synthetic division by `(x − root)`; the remainder is
    /// discarded, so callers should only pass actual roots.
    pub fn deflate(&self, root: &Scalar) -> Polynomial {
        let d = self.degree();
        if d == 0 {
            return Polynomial::new(vec![Scalar::zero()]);
        }
        let mut quotient = vec![Scalar::zero(); d];
        let mut carry = Scalar::zero();
        for i in (0..=d).rev() {
            let value = &self.coeffs[i] + &carry * root;
            if i > 0 {
                quotient[i - 1] = value.clone();
            }
            carry = value;
        }
        Polynomial::new(quotient)
    }

    /// Distinct rational roots in descending order, or `None` when the
    /// integer-scaled coefficients are too large to enumerate divisors.
    pub fn rational_roots(&self) -> Option<Vec<Scalar>> {
        if self.degree() == 0 {
            return Some(Vec::new());
        }
        let lcm = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> =
            self.coeffs.iter().map(|c| (c * Scalar::from_integer(lcm.clone())).to_integer()).collect();
        let mut roots = Vec::new();
        let lowest = ints.iter().position(|c| !c.is_zero()).unwrap_or(0);
        if lowest > 0 {
            roots.push(Scalar::zero());
        }
        let constant = &ints[lowest];
        let leading = ints.last().expect("non-empty");
        let numerators = divisors(constant)?;
        let denominators = divisors(leading)?;
        for p in &numerators {
            for q in &denominators {
                for sign in [1, -1] {
                    let candidate = Scalar::new(p * BigInt::from(sign), q.clone());
                    if !roots.contains(&candidate) && self.eval(&candidate).is_zero() {
                        roots.push(candidate);
                    }
                }
            }
        }
        roots.sort_by(|a, b| b.cmp(a));
        Some(roots)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() && self.coeffs.len() > 1 {
                continue;
            }
            let magnitude = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let show_coeff = i == 0 || !magnitude.is_one();
            if show_coeff {
                write!(f, "{magnitude}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "{}x", if show_coeff { "*" } else { "" })?,
                _ => write!(f, "{}x^{i}", if show_coeff { "*" } else { "" })?,
            }
        }
        Ok(())
    }
}

// Divisor enumeration is capped; beyond this the rational root search gives up.
const DIVISOR_LIMIT: u64 = 1 << 40;

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let m: u64 = n.abs().try_into().ok()?;
    if m > DIVISOR_LIMIT {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= m {
        if m.is_multiple_of(d) {
            out.push(BigInt::from(d));
            if d != m / d {
                out.push(BigInt::from(m / d));
            }
        }
        d += 1;
    }
    out.sort();
    Some(out)
}

/// Monic minimal polynomial, found as the first linear dependency among
/// `𝟙, A, A², …`.
pub fn minimal_polynomial(a: &Matrix) -> Result<Polynomial> {
    if !a.is_square() {
        return Err(Error::ShapeMismatch("minimal polynomial of a non-square matrix".into()));
    }
    let n = a.rows();
    let mut powers = vec![Matrix::identity(n)];
    loop {
        let k = powers.len();
        let next = powers.last().map(|p| p * a).expect("non-empty");
        // Solve Σ c_i vec(A^i) = vec(A^k) via the augmented system.
        let mut rows: Vec<Vec<Scalar>> = (0..n * n)
            .map(|e| {
                let mut row: Vec<Scalar> = powers.iter().map(|p| p.data[e].clone()).collect();
                row.push(next.data[e].clone());
                row
            })
            .collect();
        let pivots = rref_rows(&mut rows, k + 1);
        if !pivots.contains(&k) {
            let mut coeffs = vec![Scalar::zero(); k + 1];
            for (row, &p) in rows.iter().zip(&pivots) {
                coeffs[p] = -&row[k];
            }
            coeffs[k] = Scalar::one();
            return Ok(Polynomial::new(coeffs));
        }
        powers.push(next);
    }
}

/// Scalars travel as `"p/q"` strings; integers are also accepted on input.
#[derive(Deserialize)]
#[serde(untagged)]
enum ScalarRepr {
    Text(String),
    Int(i64),
}

impl ScalarRepr {
    fn into_scalar<E: de::Error>(self) -> std::result::Result<Scalar, E> {
        match self {
            ScalarRepr::Text(s) => parse_scalar(&s).map_err(E::custom),
            ScalarRepr::Int(i) => Ok(int(i)),
        }
    }
}

pub fn serialize_scalar<S: Serializer>(x: &Scalar, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_scalar(x))
}

pub fn deserialize_scalar<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Scalar, D::Error> {
    ScalarRepr::deserialize(d)?.into_scalar()
}

impl Serialize for Vector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.entries.iter().map(format_scalar))
    }
}

impl<'de> Deserialize<'de> for Vector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<ScalarRepr>::deserialize(d)?;
        let entries = raw.into_iter().map(ScalarRepr::into_scalar).collect::<std::result::Result<_, _>>()?;
        Vector::new(entries).map_err(de::Error::custom)
    }
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq((0..self.rows).map(|r| self.row(r).iter().map(format_scalar).collect::<Vec<_>>()))
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<Vec<ScalarRepr>>::deserialize(d)?;
        let rows = raw
            .into_iter()
            .map(|row| row.into_iter().map(ScalarRepr::into_scalar).collect::<std::result::Result<Vec<_>, _>>())
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Matrix::from_rows(rows).map_err(de::Error::custom)
    }
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.coeffs.iter().map(format_scalar))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn swap() -> Matrix {
        Matrix::from_ints(&[[0, 1], [1, 0]])
    }

    #[test]
    fn scalars_stay_reduced() {
        let x = parse_scalar("6/-4").unwrap();
        assert_eq!(x, frac(-3, 2));
        assert_eq!(format_scalar(&x), "-3/2");
        assert_eq!(format_scalar(&int(7)), "7");
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("abc").is_err());
    }

    #[test]
    fn addition_examples() {
        let a = Matrix::from_ints(&[[1, 2], [3, 4]]);
        assert_eq!(mat_add(&a, &Matrix::zeros(2, 2)).unwrap(), a);
        assert_eq!(mat_add(&a, &Matrix::identity(2)).unwrap(), Matrix::from_ints(&[[2, 2], [3, 5]]));
        assert!(mat_add(&a, &a.scale(&int(-1))).unwrap().is_zero());
        assert!(matches!(mat_add(&a, &Matrix::zeros(3, 3)), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn multiplication_examples() {
        let a = Matrix::from_ints(&[[1, 2], [3, 4]]);
        assert_eq!(mat_mul(&Matrix::identity(2), &a).unwrap(), a);
        assert_eq!(mat_mul(&swap(), &Matrix::diag_ints(&[1, -1])).unwrap(), Matrix::from_ints(&[[0, -1], [1, 0]]));
        let n = Matrix::from_ints(&[[0, 1], [0, 0]]);
        assert!(mat_mul(&n, &n).unwrap().is_zero());
        assert!(mat_mul(&a, &Matrix::zeros(3, 1)).is_err());
    }

    #[test]
    fn commutator_examples() {
        let a = Matrix::from_ints(&[[1, 2], [3, 4]]);
        assert!(commutator(&Matrix::identity(2), &a).unwrap().is_zero());
        assert_eq!(commutator(&swap(), &Matrix::diag_ints(&[1, -1])).unwrap(), Matrix::from_ints(&[[0, -2], [2, 0]]));
        assert!(commutator(&a, &(&a * &a)).unwrap().is_zero());
        assert!(commutator(&a, &Matrix::identity(3)).is_err());
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&Matrix::identity(3)).is_empty());
        assert_eq!(kernel_basis(&Matrix::zeros(2, 2)).dim(), 2);
        let k = kernel_basis(&Matrix::from_ints(&[[1, 1], [1, 1]]));
        assert_eq!(k.vectors(), &[Vector::from_ints(&[-1, 1])]);
    }

    #[test]
    fn rank_and_image_examples() {
        assert_eq!(rank(&Matrix::identity(4)), 4);
        let ones = Matrix::from_ints(&[[1, 1], [1, 1]]);
        assert_eq!(rank(&ones), 1);
        assert_eq!(image_basis(&ones).vectors(), &[Vector::from_ints(&[1, 1])]);
        assert_eq!(rank(&Matrix::zeros(3, 3)), 0);
        let wide = Matrix::from_ints(&[[1, 2, 3], [2, 4, 6]]);
        assert_eq!(rank(&wide) + kernel_basis(&wide).dim(), 3);
    }

    #[test]
    fn idempotent_examples() {
        assert!(is_idempotent(&Matrix::diag_ints(&[1, 0])));
        let half_sum = (&Matrix::identity(2) + &swap()).scale(&frac(1, 2));
        assert!(is_idempotent(&half_sum));
        assert!(is_idempotent(&Matrix::from_ints(&[[1, 1], [0, 0]])));
        assert!(!is_idempotent(&swap()));
    }

    #[test]
    fn minimal_polynomial_examples() {
        assert_eq!(minimal_polynomial(&Matrix::identity(3)).unwrap(), Polynomial::from_ints(&[-1, 1]));
        assert_eq!(minimal_polynomial(&Matrix::diag_ints(&[1, 2])).unwrap(), Polynomial::from_ints(&[2, -3, 1]));
        assert_eq!(
            minimal_polynomial(&Matrix::from_ints(&[[0, 1], [0, 0]])).unwrap(),
            Polynomial::from_ints(&[0, 0, 1])
        );
        assert_eq!(minimal_polynomial(&Matrix::zeros(2, 2)).unwrap(), Polynomial::from_ints(&[0, 1]));
    }

    #[test]
    fn rational_roots_and_deflation() {
        // (2x − 1)(x + 3)(x − 2) = 2x³ + x² − 13x + 6
        let p = Polynomial::from_ints(&[6, -13, 1, 2]);
        assert_eq!(p.rational_roots().unwrap(), vec![int(2), frac(1, 2), int(-3)]);
        let q = p.deflate(&int(2));
        assert_eq!(q, Polynomial::from_ints(&[-3, 5, 2]));
        assert_eq!(Polynomial::from_ints(&[-2, 0, 1]).rational_roots().unwrap(), vec![]);
        assert_eq!(Polynomial::from_ints(&[0, 0, 1]).rational_roots().unwrap(), vec![int(0)]);
        assert_eq!(p.derivative(), Polynomial::from_ints(&[-13, 2, 6]));
    }

    #[test]
    fn polynomial_display() {
        assert_eq!(Polynomial::from_ints(&[2, -3, 1]).to_string(), "x^2 - 3*x + 2");
        assert_eq!(Polynomial::from_ints(&[0, 0, 1]).to_string(), "x^2");
        assert_eq!(Polynomial::from_ints(&[-1, 1]).to_string(), "x - 1");
    }

    #[test]
    fn subspace_basis_rejects_dependent_vectors() {
        let v = Vector::from_ints(&[1, 2]);
        assert_eq!(SubspaceBasis::new(2, vec![v.clone(), v.scale(&int(2))]), Err(Error::LinearlyDependent));
        let b = SubspaceBasis::new(2, vec![v.clone()]).unwrap();
        assert!(b.contains(&v.scale(&frac(-5, 3))));
        assert!(!b.contains(&Vector::unit(2, 0)));
    }

    #[test]
    fn serde_uses_rational_strings() {
        let m = Matrix::from_rows(vec![vec![frac(1, 2), int(-3)], vec![int(0), frac(7, 3)]]).unwrap();
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(json, r#"[["1/2","-3"],["0","7/3"]]"#);
        assert_eq!(serde_json::from_str::<Matrix>(&json).unwrap(), m);
        assert_eq!(
            serde_json::from_str::<Vector>(r#"[1, "-2/4"]"#).unwrap(),
            Vector::new(vec![int(1), frac(-1, 2)]).unwrap()
        );
        assert!(serde_json::from_str::<Matrix>(r#"[["1"],["1","2"]]"#).is_err());
        assert!(serde_json::from_str::<Vector>(r#"["1/0"]"#).is_err());
    }

    #[test]
    fn echelon_span_keeps_rref() {
        let mut span = EchelonSpan::new(3);
        assert!(span.insert(&Vector::from_ints(&[0, 2, 4]).into_entries()));
        assert!(span.insert(&Vector::from_ints(&[1, 1, 1]).into_entries()));
        assert!(!span.insert(&Vector::from_ints(&[2, 4, 6]).into_entries()));
        let expected: Vec<Vec<Scalar>> = vec![vec![int(1), int(0), int(-1)], vec![int(0), int(1), int(2)]];
        assert_eq!(span.rows(), expected.as_slice());
    }

    #[test]
    fn scaled_inverse_examples() {
        let a = Matrix::from_rows(vec![
            vec![int(0), int(2), int(1)],
            vec![frac(1, 2), int(1), int(0)],
            vec![int(3), int(-1), frac(2, 3)],
        ])
        .unwrap();
        let inv = ScaledInverse::new(&a).unwrap();
        assert!((&a * &inv.to_matrix()).is_identity());
        let m = Matrix::from_ints(&[[1, 2, 3], [4, 5, 6]]);
        assert_eq!(inv.right_apply(&m).unwrap(), &m * &inv.to_matrix());
        assert_eq!(ScaledInverse::new(&swap()).unwrap().to_matrix(), swap());
        assert_eq!(
            ScaledInverse::new(&Matrix::diag_ints(&[-2, 4])).unwrap().to_matrix(),
            Matrix::diag(&[frac(-1, 2), frac(1, 4)])
        );
        assert!(ScaledInverse::new(&Matrix::from_ints(&[[1, 2], [2, 4]])).is_none());
        assert!(ScaledInverse::new(&Matrix::zeros(2, 3)).is_none());
        assert!(inv.right_apply(&Matrix::identity(2)).is_err());
    }
}
