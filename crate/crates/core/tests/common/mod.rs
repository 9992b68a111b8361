//! Independent reference arithmetic for cross-checking the library: plain
//! row-of-rows matrices, schoolbook products, and a separate elimination.
#![allow(dead_code)]

use std::collections::BTreeMap;

use action_triple::linalg::{frac, int, Matrix, Scalar, Vector};
use action_triple::ncexpr::{Generator, NcExpr};
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Rows = Vec<Vec<Scalar>>;

pub fn rows(m: &Matrix) -> Rows {
    (0..m.rows()).map(|r| m.row(r).to_vec()).collect()
}

pub fn matrix(r: &Rows) -> Matrix {
    Matrix::from_rows(r.clone()).expect("rectangular rows")
}

pub fn entries(v: &Vector) -> Vec<Scalar> {
    v.entries().to_vec()
}

pub fn identity(n: usize) -> Rows {
    (0..n).map(|i| (0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }).collect()).collect()
}

pub fn zeros(r: usize, c: usize) -> Rows {
    vec![vec![Scalar::zero(); c]; r]
}

pub fn mul(a: &Rows, b: &Rows) -> Rows {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            let mut out = vec![Scalar::zero(); cols];
            for (x, b_row) in row.iter().zip(b).filter(|(x, _)| !x.is_zero()) {
                for (o, y) in out.iter_mut().zip(b_row) {
                    *o += x * y;
                }
            }
            out
        })
        .collect()
}

pub fn add(a: &Rows, b: &Rows) -> Rows {
    a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(p, q)| p + q).collect()).collect()
}

pub fn sub(a: &Rows, b: &Rows) -> Rows {
    a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(p, q)| p - q).collect()).collect()
}

pub fn scale(a: &Rows, c: &Scalar) -> Rows {
    a.iter().map(|x| x.iter().map(|p| p * c).collect()).collect()
}

pub fn bracket(a: &Rows, b: &Rows) -> Rows {
    sub(&mul(a, b), &mul(b, a))
}

pub fn apply(a: &Rows, v: &[Scalar]) -> Vec<Scalar> {
    a.iter().map(|row| row.iter().zip(v).fold(Scalar::zero(), |acc, (x, y)| acc + x * y)).collect()
}

pub fn is_zero(a: &Rows) -> bool {
    a.iter().all(|r| r.iter().all(Zero::is_zero))
}

pub fn is_zero_vec(v: &[Scalar]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn block_diag(a: &Rows, b: &Rows) -> Rows {
    let (n, m) = (a.len(), b.len());
    let mut out = zeros(n + m, n + m);
    for i in 0..n {
        for j in 0..n {
            out[i][j] = a[i][j].clone();
        }
    }
    for i in 0..m {
        for j in 0..m {
            out[n + i][n + j] = b[i][j].clone();
        }
    }
    out
}

/// Rank by plain Gaussian elimination on a copy.
pub fn rank(a: &Rows) -> usize {
    let mut m = a.clone();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        for i in r + 1..m.len() {
            if !m[i][c].is_zero() {
                let f = &m[i][c] / &m[r][c];
                let pivot_row = m[r].clone();
                for (x, p) in m[i].iter_mut().zip(pivot_row).skip(c) {
                    *x -= &f * p;
                }
            }
        }
        r += 1;
    }
    r
}

/// Gauss-Jordan inverse; `None` when singular.
pub fn inverse(a: &Rows) -> Option<Rows> {
    let n = a.len();
    let mut m: Rows = a.iter().zip(identity(n)).map(|(r, i)| r.iter().cloned().chain(i).collect()).collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, p);
        let pivot = m[c][c].clone();
        for x in m[c].iter_mut() {
            *x /= &pivot;
        }
        for i in 0..n {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let pivot_row = m[c].clone();
                for (x, p) in m[i].iter_mut().zip(pivot_row) {
                    *x -= &f * p;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Matrix of `Y ↦ xY − Yx` on row-major flattened `Y`.
pub fn sylvester(x: &Rows) -> Rows {
    let n = x.len();
    let mut out = zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                out[i * n + j][k * n + j] += &x[i][k];
                out[i * n + j][i * n + k] -= &x[k][j];
            }
        }
    }
    out
}

pub fn stack(a: &Rows, b: &Rows) -> Rows {
    a.iter().chain(b).cloned().collect()
}

/// Direct recursive evaluation, independent of normal forms.
pub fn eval(e: &NcExpr, values: &BTreeMap<String, Rows>, n: usize) -> Rows {
    match e {
        NcExpr::Const(c) => scale(&identity(n), c),
        NcExpr::Gen(g) => values[&g.name].clone(),
        NcExpr::Sum(terms) => terms.iter().fold(zeros(n, n), |acc, t| add(&acc, &eval(t, values, n))),
        NcExpr::ScalarMul(c, inner) => scale(&eval(inner, values, n), c),
        NcExpr::Product(factors) => factors.iter().fold(identity(n), |acc, f| mul(&acc, &eval(f, values, n))),
        NcExpr::Power(base, k) => {
            let b = eval(base, values, n);
            (0..*k).fold(identity(n), |acc, _| mul(&acc, &b))
        }
    }
}

pub fn rand_scalar(rng: &mut ChaCha8Rng) -> Scalar {
    let q = rng.gen_range(1..=3);
    let p = rng.gen_range(-5 * q..=5 * q);
    frac(p, q)
}

pub fn rand_small_int(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Scalar {
    int(rng.gen_range(lo..=hi))
}

pub fn rand_rows(rng: &mut ChaCha8Rng, r: usize, c: usize) -> Rows {
    (0..r).map(|_| (0..c).map(|_| rand_scalar(rng)).collect()).collect()
}

pub fn rand_square(rng: &mut ChaCha8Rng, n: usize) -> Rows {
    rand_rows(rng, n, n)
}

pub fn rand_int_rows(rng: &mut ChaCha8Rng, r: usize, c: usize, lo: i64, hi: i64) -> Rows {
    (0..r).map(|_| (0..c).map(|_| rand_small_int(rng, lo, hi)).collect()).collect()
}

/// A product of an `n×k` and a `k×n` matrix, so rank at most `k`.
pub fn rand_low_rank(rng: &mut ChaCha8Rng, n: usize) -> Rows {
    let k = rng.gen_range(1..=n);
    mul(&rand_int_rows(rng, n, k, -2, 2), &rand_int_rows(rng, k, n, -2, 2))
}

/// `c₀ + c₁·u + c₂·u²` with small integer coefficients.
pub fn rand_poly_in(rng: &mut ChaCha8Rng, u: &Rows) -> Rows {
    let n = u.len();
    let mut out = zeros(n, n);
    let mut power = identity(n);
    for _ in 0..3 {
        out = add(&out, &scale(&power, &rand_small_int(rng, -3, 3)));
        power = mul(&power, u);
    }
    out
}

/// Unimodular integer matrix, a product of unit triangular factors.
pub fn rand_unimodular(rng: &mut ChaCha8Rng, n: usize) -> Rows {
    let mut lower = identity(n);
    let mut upper = identity(n);
    for i in 0..n {
        for j in 0..i {
            lower[i][j] = rand_small_int(rng, -2, 2);
            upper[j][i] = rand_small_int(rng, -2, 2);
        }
    }
    mul(&lower, &upper)
}

pub fn conjugate(s: &Rows, s_inv: &Rows, a: &Rows) -> Rows {
    mul(&mul(s, a), s_inv)
}

/// Random expression of depth at most `depth` over `gens`.
pub fn rand_expr(rng: &mut ChaCha8Rng, depth: usize, gens: &[Generator]) -> NcExpr {
    if depth <= 1 || rng.gen_bool(0.3) {
        return if rng.gen_bool(0.15) {
            NcExpr::Const(rand_small_int(rng, -3, 3))
        } else {
            NcExpr::Gen(gens[rng.gen_range(0..gens.len())].clone())
        };
    }
    match rng.gen_range(0..4) {
        0 => NcExpr::Sum((0..rng.gen_range(2..=3)).map(|_| rand_expr(rng, depth - 1, gens)).collect()),
        1 => NcExpr::Product((0..rng.gen_range(2..=3)).map(|_| rand_expr(rng, depth - 1, gens)).collect()),
        2 => NcExpr::ScalarMul(rand_scalar(rng), Box::new(rand_expr(rng, depth - 1, gens))),
        _ => NcExpr::Power(Box::new(rand_expr(rng, depth - 1, gens)), rng.gen_range(0..=3)),
    }
}

/// Signed permutation matrix.
pub fn rand_signed_permutation(rng: &mut ChaCha8Rng, n: usize) -> Rows {
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    let mut out = zeros(n, n);
    for (i, &j) in perm.iter().enumerate() {
        out[i][j] = if rng.gen_bool(0.3) { int(-1) } else { int(1) };
    }
    out
}
