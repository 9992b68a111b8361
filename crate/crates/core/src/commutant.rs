//! Commutants, generated subalgebras, and the search for nontrivial
//! idempotents inside them.
//!
//! Subalgebras of `End(V)` are handled as subspaces of `k^{n²}` (matrices
//! flattened row-major). Spans, intersections and closures carry the RREF
//! basis of their span. Commutant bases are read off a Krylov presentation
//! instead, which keeps their entries small.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    commutator, int, is_idempotent, kernel_basis, minimal_polynomial, EchelonSpan, Matrix, Scalar, ScaledInverse,
    Vector, MAX_DIM,
};

pub const DEFAULT_BUDGET: usize = 500;
pub const DEFAULT_SEED: u64 = 42;

/// Small-integer coefficient range used for candidate combinations.
const COEFF_RANGE: std::ops::RangeInclusive<i64> = -3..=3;

/// A linearly independent spanning set of a subspace of `End(V)`. Equality
/// compares spans.
#[derive(Clone, Debug)]
pub struct SubalgebraBasis {
    n: usize,
    elements: Vec<Matrix>,
    closed: bool,
}

impl SubalgebraBasis {
    /// Canonical basis of the span of `matrices` (not checked for closure).
    pub fn span_of(n: usize, matrices: &[Matrix]) -> Result<Self> {
        check_dim(n)?;
        let mut span = EchelonSpan::new(n * n);
        for m in matrices {
            check_square(m, n)?;
            span.insert(&m.vectorize());
        }
        Ok(Self::from_span(n, span, false))
    }

    /// All of `End(V)`.
    pub fn full(n: usize) -> Result<Self> {
        check_dim(n)?;
        let mut span = EchelonSpan::new(n * n);
        for i in 0..n * n {
            let mut v = vec![Scalar::zero(); n * n];
            v[i] = Scalar::one();
            span.insert(&v);
        }
        Ok(Self::from_span(n, span, true))
    }

    fn from_span(n: usize, span: EchelonSpan, closed: bool) -> Self {
        let elements =
            span.into_rows().into_iter().map(|row| Matrix::from_vectorized(n, row).expect("n² entries")).collect();
        SubalgebraBasis { n, elements, closed }
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn elements(&self) -> &[Matrix] {
        &self.elements
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    /// True only once closure under products has been verified.
    pub fn is_closed(&self) -> bool {
        self.closed
    }

    fn echelon(&self) -> EchelonSpan {
        let mut span = EchelonSpan::new(self.n * self.n);
        for m in &self.elements {
            span.insert(&m.vectorize());
        }
        span
    }

    /// Exact span membership.
    pub fn contains(&self, m: &Matrix) -> bool {
        m.rows() == self.n && m.is_square() && self.echelon().contains(&m.vectorize())
    }

    pub fn contains_identity(&self) -> bool {
        self.contains(&Matrix::identity(self.n))
    }

    /// Checks every pairwise product of basis elements for membership and
    /// sets the closed flag on success.
    pub fn verify_closure(&mut self) -> bool {
        let span = self.echelon();
        let closed = self.elements.iter().all(|a| self.elements.iter().all(|b| span.contains(&(a * b).vectorize())));
        self.closed = closed;
        closed
    }
}

impl PartialEq for SubalgebraBasis {
    fn eq(&self, other: &Self) -> bool {
        if self.n != other.n || self.dim() != other.dim() {
            return false;
        }
        let span = self.echelon();
        other.elements.iter().all(|m| span.contains(&m.vectorize()))
    }
}

impl Eq for SubalgebraBasis {}

fn check_dim(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidDimension("ambient dimension must be >= 1".into()));
    }
    if n > MAX_DIM {
        return Err(Error::DimBudgetExceeded { dim: n, max: MAX_DIM });
    }
    Ok(())
}

fn check_square(m: &Matrix, n: usize) -> Result<()> {
    if !m.is_square() || m.rows() != n {
        return Err(Error::ShapeMismatch(format!("expected {n}x{n}, got {}x{}", m.rows(), m.cols())));
    }
    Ok(())
}

/// Matrix of the linear map `Y ↦ xY − Yx` on `k^{n²}`.
pub fn sylvester_matrix(x: &Matrix) -> Result<Matrix> {
    if !x.is_square() {
        return Err(Error::ShapeMismatch("commutant of a non-square matrix".into()));
    }
    let n = x.rows();
    check_dim(n)?;
    let nn = n * n;
    let mut data = vec![Scalar::zero(); nn * nn];
    for i in 0..n {
        for j in 0..n {
            let row = (i * n + j) * nn;
            // (xY)_ij = Σ_k x_ik Y_kj
            for k in 0..n {
                let c = x.get(i, k);
                if !c.is_zero() {
                    data[row + k * n + j] += c;
                }
            }
            // (Yx)_ij = Σ_l Y_il x_lj
            for l in 0..n {
                let c = x.get(l, j);
                if !c.is_zero() {
                    data[row + i * n + l] -= c;
                }
            }
        }
    }
    Matrix::new(nn, nn, data)
}

/// `Comm(x) = {Y : xY − Yx = 0}`, the null space of [`sylvester_matrix`].
///
/// Solved through a Krylov presentation of `k^n` as a `k[x]`-module: `Y` is
/// fixed by its values `w_i = Y v_i` on the Krylov start vectors, subject
/// only to the relations `x^{d_i} v_i = Σ c·x^k v_j`. That system has `n·r`
/// unknowns for `r` Krylov blocks instead of `n²`. Unknowns are taken in
/// Krylov coordinates, so a cyclic `x` yields the basis `𝟙, x, …, x^{n−1}`.
pub fn commutant_basis(x: &Matrix) -> Result<SubalgebraBasis> {
    if !x.is_square() {
        return Err(Error::ShapeMismatch("commutant of a non-square matrix".into()));
    }
    let n = x.rows();
    check_dim(n)?;
    let krylov = Krylov::new(x);
    let companion = krylov.companion();
    let longest = krylov.blocks.iter().map(|b| b.len).max().unwrap_or(0);
    let mut powers = vec![Matrix::identity(n)];
    for k in 0..longest {
        powers.push(&powers[k] * &companion);
    }

    let size = n * krylov.blocks.len();
    let mut data = vec![Scalar::zero(); size * size];
    for (i, block) in krylov.blocks.iter().enumerate() {
        for (j, other) in krylov.blocks.iter().enumerate() {
            let mut entry = if i == j { powers[block.len].clone() } else { Matrix::zeros(n, n) };
            for (power, c) in powers.iter().zip(&block.relation[other.start..other.start + other.len]) {
                if !c.is_zero() {
                    entry = &entry - &power.scale(c);
                }
            }
            for a in 0..n {
                for b in 0..n {
                    data[(i * n + a) * size + j * n + b] = entry.get(a, b).clone();
                }
            }
        }
    }
    let relations = Matrix::new(size, size, data)?;

    let basis = Matrix::from_rows(krylov.vectors.iter().map(|v| v.entries().to_vec()).collect())?.transpose();
    let inverse = ScaledInverse::new(&basis).expect("Krylov vectors span k^n");
    let mut elements = Vec::new();
    for u in kernel_basis(&relations).vectors() {
        let mut images = Matrix::zeros(n, n);
        for (i, block) in krylov.blocks.iter().enumerate() {
            let coords = Vector::new(u.entries()[i * n..(i + 1) * n].to_vec())?;
            let mut cur = basis.apply(&coords)?;
            for k in 0..block.len {
                for (a, value) in cur.entries().iter().enumerate() {
                    images.set(a, block.start + k, value.clone());
                }
                cur = x.apply(&cur)?;
            }
        }
        elements.push(inverse.right_apply(&images)?);
    }
    Ok(SubalgebraBasis { n, elements, closed: false })
}

struct KrylovBlock {
    start: usize,
    len: usize,
    /// Coordinates of `x^len v` in the Krylov basis.
    relation: Vec<Scalar>,
}

/// Basis `x^k v_i` grown from the standard basis vectors, kept in echelon
/// form together with each row's coordinates in the basis.
struct Krylov {
    n: usize,
    vectors: Vec<Vector>,
    rows: Vec<(usize, Vec<Scalar>, Vec<Scalar>)>,
    blocks: Vec<KrylovBlock>,
}

impl Krylov {
    fn new(x: &Matrix) -> Self {
        let n = x.rows();
        let mut krylov = Krylov { n, vectors: Vec::new(), rows: Vec::new(), blocks: Vec::new() };
        for j in 0..n {
            if krylov.rows.len() == n {
                break;
            }
            let mut v = Vector::unit(n, j);
            let start = krylov.rows.len();
            loop {
                let (rem, coords) = krylov.reduce(v.entries());
                if rem.iter().all(Zero::is_zero) {
                    if krylov.rows.len() > start {
                        krylov.blocks.push(KrylovBlock { start, len: krylov.rows.len() - start, relation: coords });
                    }
                    break;
                }
                krylov.insert(rem, coords);
                let next = x.apply(&v).expect("square");
                krylov.vectors.push(v);
                v = next;
            }
        }
        krylov
    }

    /// `x` written in the Krylov basis: each vector maps to its successor,
    /// and the last vector of a block to the block's relation.
    fn companion(&self) -> Matrix {
        let mut out = Matrix::zeros(self.n, self.n);
        for block in &self.blocks {
            for k in 0..block.len - 1 {
                out.set(block.start + k + 1, block.start + k, Scalar::one());
            }
            for (s, c) in block.relation.iter().enumerate() {
                out.set(s, block.start + block.len - 1, c.clone());
            }
        }
        out
    }

    /// Splits `v` into a remainder and coordinates with `v = rem + Σ c_s b_s`.
    fn reduce(&self, v: &[Scalar]) -> (Vec<Scalar>, Vec<Scalar>) {
        let mut rem = v.to_vec();
        let mut coords = vec![Scalar::zero(); self.n];
        for (p, row, track) in &self.rows {
            if rem[*p].is_zero() {
                continue;
            }
            let f = rem[*p].clone();
            for (x, r) in rem.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x -= &f * r;
                }
            }
            for (c, t) in coords.iter_mut().zip(track) {
                if !t.is_zero() {
                    *c += &f * t;
                }
            }
        }
        (rem, coords)
    }

    /// Records the next basis vector `b = rem + Σ coords·b_s`.
    fn insert(&mut self, mut rem: Vec<Scalar>, coords: Vec<Scalar>) {
        let index = self.rows.len();
        let pivot = rem.iter().position(|x| !x.is_zero()).expect("nonzero remainder");
        let inv = rem[pivot].recip();
        for x in rem.iter_mut() {
            *x *= &inv;
        }
        let mut track: Vec<Scalar> = coords.into_iter().map(|c| -c * &inv).collect();
        track[index] = inv;
        self.rows.push((pivot, rem, track));
    }
}

/// Exact intersection of the spans of the given bases.
pub fn intersect(bases: &[SubalgebraBasis]) -> Result<SubalgebraBasis> {
    let (first, rest) =
        bases.split_first().ok_or_else(|| Error::ShapeMismatch("intersection of zero subspaces".into()))?;
    let n = first.n;
    if let Some(b) = rest.iter().find(|b| b.n != n) {
        return Err(Error::ShapeMismatch(format!("ambient dims {n} and {}", b.n)));
    }
    let mut acc = first.clone();
    for b in rest {
        acc = intersect_pair(&acc, b);
    }
    Ok(acc)
}

fn intersect_pair(a: &SubalgebraBasis, b: &SubalgebraBasis) -> SubalgebraBasis {
    let n = a.n;
    let nn = n * n;
    if a.dim() == 0 || b.dim() == 0 {
        return SubalgebraBasis { n, elements: Vec::new(), closed: false };
    }
    // Columns a_1..a_k, -b_1..-b_m; a kernel vector (x, y) gives Σ x_i a_i in both spans.
    let k = a.dim();
    let cols = k + b.dim();
    let mut data = vec![Scalar::zero(); nn * cols];
    let flat_a: Vec<Vec<Scalar>> = a.elements.iter().map(Matrix::vectorize).collect();
    let flat_b: Vec<Vec<Scalar>> = b.elements.iter().map(Matrix::vectorize).collect();
    for e in 0..nn {
        for (c, v) in flat_a.iter().enumerate() {
            data[e * cols + c] = v[e].clone();
        }
        for (c, v) in flat_b.iter().enumerate() {
            data[e * cols + k + c] = -&v[e];
        }
    }
    let system = Matrix::new(nn, cols, data).expect("well-formed system");
    let mut span = EchelonSpan::new(nn);
    for sol in kernel_basis(&system).vectors() {
        let mut v = vec![Scalar::zero(); nn];
        for (coeff, basis) in sol.entries()[..k].iter().zip(&flat_a) {
            if coeff.is_zero() {
                continue;
            }
            for (x, y) in v.iter_mut().zip(basis) {
                *x += coeff * y;
            }
        }
        span.insert(&v);
    }
    SubalgebraBasis::from_span(n, span, false)
}

/// Smallest unital subalgebra containing `gens`.
///
/// Starts from `span{𝟙} ∪ gens` and left-multiplies every new basis element
/// by every generator until the span stops growing. The span of all words in
/// the generators is reached after at most `n²` insertions.
pub fn algebra_closure(n: usize, gens: &[Matrix]) -> Result<SubalgebraBasis> {
    check_dim(n)?;
    for g in gens {
        check_square(g, n)?;
    }
    let mut span = EchelonSpan::new(n * n);
    let mut queue = vec![Matrix::identity(n)];
    span.insert(&queue[0].vectorize());
    for g in gens {
        if span.insert(&g.vectorize()) {
            queue.push(g.clone());
        }
    }
    let mut next = 0;
    while next < queue.len() {
        let w = queue[next].clone();
        next += 1;
        for g in gens {
            let product = g * &w;
            if span.insert(&product.vectorize()) {
                queue.push(product);
            }
        }
    }
    Ok(SubalgebraBasis::from_span(n, span, true))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "projector")]
pub enum ProjectorVerdict {
    Found(Matrix),
    NotFoundWithinBudget,
    ProvedTrivial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProjectorSearchOutcome {
    #[serde(flatten)]
    pub verdict: ProjectorVerdict,
    pub attempts: usize,
    pub budget: usize,
}

impl ProjectorSearchOutcome {
    pub fn projector(&self) -> Option<&Matrix> {
        match &self.verdict {
            ProjectorVerdict::Found(p) => Some(p),
            _ => None,
        }
    }

    pub fn is_found(&self) -> bool {
        self.projector().is_some()
    }

    pub fn label(&self) -> &'static str {
        match self.verdict {
            ProjectorVerdict::Found(_) => "Found",
            ProjectorVerdict::NotFoundWithinBudget => "NotFoundWithinBudget",
            ProjectorVerdict::ProvedTrivial => "ProvedTrivial",
        }
    }
}

/// Searches `span(b)` for an idempotent other than `0` and `𝟙`.
///
/// Candidates are examined in a fixed order: the basis elements, then
/// pairwise combinations `a·b_i + c·b_j` with `a, c ∈ [−3, 3] \ {0}`, then
/// seeded random combinations with coefficients in `[−3, 3]`. Each candidate
/// counts as one attempt and is tested directly for idempotency; failing
/// that, every simple rational root `λ` of its minimal polynomial `m` yields
/// the spectral idempotent `g(c)/g(λ)` with `g = m/(x − λ)`, which is kept
/// once it is verified nontrivial, idempotent, and inside `span(b)`.
///
/// `NotFoundWithinBudget` is an inconclusive verdict; only a one-dimensional
/// `b` is reported as `ProvedTrivial`.
pub fn find_unifying_projector(b: &SubalgebraBasis, budget: usize, seed: u64) -> ProjectorSearchOutcome {
    let outcome = |verdict, attempts| ProjectorSearchOutcome { verdict, attempts, budget };
    if b.dim() <= 1 {
        // span{λ𝟙}: λ² = λ forces λ ∈ {0, 1}.
        return outcome(ProjectorVerdict::ProvedTrivial, 0);
    }
    let span = b.echelon();
    let elements = b.elements();
    let mut attempts = 0;

    let try_candidate = |c: &Matrix, attempts: &mut usize| -> Option<Matrix> {
        *attempts += 1;
        if is_nontrivial_projector(c, &span) {
            return Some(c.clone());
        }
        spectral_projector(c, &span)
    };

    for e in elements {
        if attempts >= budget {
            return outcome(ProjectorVerdict::NotFoundWithinBudget, attempts);
        }
        if let Some(p) = try_candidate(e, &mut attempts) {
            return outcome(ProjectorVerdict::Found(p), attempts);
        }
    }
    for i in 0..elements.len() {
        for j in i + 1..elements.len() {
            for a in COEFF_RANGE.filter(|&a| a != 0) {
                for c in COEFF_RANGE.filter(|&c| c != 0) {
                    if attempts >= budget {
                        return outcome(ProjectorVerdict::NotFoundWithinBudget, attempts);
                    }
                    let candidate = &elements[i].scale(&int(a)) + &elements[j].scale(&int(c));
                    if let Some(p) = try_candidate(&candidate, &mut attempts) {
                        return outcome(ProjectorVerdict::Found(p), attempts);
                    }
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = b.ambient_dim();
    while attempts < budget {
        let mut candidate = Matrix::zeros(n, n);
        for e in elements {
            let k: i64 = rng.gen_range(COEFF_RANGE);
            if k != 0 {
                candidate = &candidate + &e.scale(&int(k));
            }
        }
        if let Some(p) = try_candidate(&candidate, &mut attempts) {
            return outcome(ProjectorVerdict::Found(p), attempts);
        }
    }
    outcome(ProjectorVerdict::NotFoundWithinBudget, attempts)
}

fn is_nontrivial_projector(p: &Matrix, span: &EchelonSpan) -> bool {
    !p.is_zero() && !p.is_identity() && is_idempotent(p) && span.contains(&p.vectorize())
}

fn spectral_projector(c: &Matrix, span: &EchelonSpan) -> Option<Matrix> {
    let m = minimal_polynomial(c).ok()?;
    if m.degree() < 2 {
        return None;
    }
    let derivative = m.derivative();
    for root in m.rational_roots()? {
        if derivative.eval(&root).is_zero() {
            continue;
        }
        let g = m.deflate(&root);
        let p = g.eval_matrix(c).scale(&g.eval(&root).recip());
        if is_nontrivial_projector(&p, span) {
            return Some(p);
        }
    }
    None
}

/// Commutation data for a candidate projector against `U`, `D`, and `[U, D]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JacobiReport {
    pub update_preserves: bool,
    pub discrimination_preserves: bool,
    pub bracket_preserves: bool,
    /// Both `[U,Π] = 0` and `[D,Π] = 0`, so `[[U,D],Π] = 0` is forced.
    pub restriction_applies: bool,
    pub bracket_is_zero: bool,
    pub bracket_is_central: bool,
    pub bracket: Matrix,
}

/// Checks the Jacobi restriction: a projector preserved by both `u` and `d`
/// must be preserved by `[u, d]`.
pub fn check_jacobi_restriction(u: &Matrix, d: &Matrix, p: &Matrix) -> Result<JacobiReport> {
    let bracket = commutator(u, d)?;
    let update_preserves = commutator(u, p)?.is_zero();
    if !is_idempotent(p) {
        return Err(Error::NotIdempotent);
    }
    let discrimination_preserves = commutator(d, p)?.is_zero();
    let bracket_preserves = commutator(&bracket, p)?.is_zero();
    let restriction_applies = update_preserves && discrimination_preserves;
    if restriction_applies && !bracket_preserves {
        return Err(Error::JacobiViolation);
    }
    Ok(JacobiReport {
        update_preserves,
        discrimination_preserves,
        bracket_preserves,
        restriction_applies,
        bracket_is_zero: bracket.is_zero(),
        bracket_is_central: bracket.is_scalar_multiple_of_identity(),
        bracket,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::frac;

    fn swap() -> Matrix {
        Matrix::from_ints(&[[0, 1], [1, 0]])
    }

    fn nilpotent() -> Matrix {
        Matrix::from_ints(&[[0, 1], [0, 0]])
    }

    #[test]
    fn commutant_of_identity_is_everything() {
        for n in 1..=4 {
            assert_eq!(commutant_basis(&Matrix::identity(n)).unwrap().dim(), n * n);
        }
    }

    #[test]
    fn commutant_of_distinct_diagonal() {
        let c = commutant_basis(&Matrix::diag_ints(&[1, 2])).unwrap();
        assert_eq!(c.elements(), &[Matrix::diag_ints(&[1, 0]), Matrix::diag_ints(&[0, 1])]);
    }

    #[test]
    fn commutant_of_nilpotent() {
        let c = commutant_basis(&nilpotent()).unwrap();
        assert_eq!(c, SubalgebraBasis::span_of(2, &[Matrix::identity(2), nilpotent()]).unwrap());
    }

    #[test]
    fn krylov_solve_matches_sylvester_kernel() {
        let cases = [
            Matrix::from_ints(&[[2, 0, 0, 0], [0, 2, 0, 0], [0, 0, 3, 1], [0, 0, 0, 3]]),
            Matrix::from_ints(&[[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 0], [0, 0, 0, 0]]),
            Matrix::from_ints(&[[1, 2, -1], [0, 1, 3], [2, -2, 1]]),
            Matrix::from_ints(&[[0, 0, 1], [0, 0, 0], [0, 1, 0]]),
            swap().direct_sum(&swap()).direct_sum(&Matrix::identity(1)),
            Matrix::identity(3),
        ];
        for x in cases {
            let n = x.rows();
            let direct: Vec<Matrix> = kernel_basis(&sylvester_matrix(&x).unwrap())
                .vectors()
                .iter()
                .map(|v| Matrix::from_vectorized(n, v.entries().to_vec()).unwrap())
                .collect();
            assert_eq!(commutant_basis(&x).unwrap(), SubalgebraBasis::span_of(n, &direct).unwrap(), "{x:?}");
        }
    }

    #[test]
    fn commutant_dimension_budget() {
        let big = Matrix::identity(MAX_DIM + 1);
        assert_eq!(commutant_basis(&big), Err(Error::DimBudgetExceeded { dim: MAX_DIM + 1, max: MAX_DIM }));
    }

    #[test]
    fn intersection_examples() {
        let full = SubalgebraBasis::full(3).unwrap();
        assert_eq!(intersect(&[full.clone(), full.clone()]).unwrap().dim(), 9);
        let cu = commutant_basis(&swap()).unwrap();
        let cd = commutant_basis(&Matrix::diag_ints(&[1, -1])).unwrap();
        let both = intersect(&[cu.clone(), cd]).unwrap();
        assert_eq!(both.elements(), &[Matrix::identity(2)]);
        assert_eq!(intersect(std::slice::from_ref(&cu)).unwrap(), cu);
        assert!(intersect(&[]).is_err());
        assert!(intersect(&[cu, full]).is_err());
    }

    #[test]
    fn closure_examples() {
        let empty = algebra_closure(2, &[]).unwrap();
        assert_eq!(empty.elements(), &[Matrix::identity(2)]);
        let n = algebra_closure(2, &[nilpotent()]).unwrap();
        assert_eq!(n.dim(), 2);
        assert!(n.contains(&nilpotent()));
        let mut full = algebra_closure(2, &[swap(), Matrix::diag_ints(&[1, -1])]).unwrap();
        assert_eq!(full.dim(), 4);
        assert!(full.is_closed());
        assert!(full.verify_closure());
    }

    #[test]
    fn projector_in_diagonal_algebra() {
        let b = commutant_basis(&Matrix::diag_ints(&[1, 2])).unwrap();
        let out = find_unifying_projector(&b, DEFAULT_BUDGET, DEFAULT_SEED);
        assert_eq!(out.verdict, ProjectorVerdict::Found(Matrix::diag_ints(&[1, 0])));
        assert_eq!(out.attempts, 1);
    }

    #[test]
    fn projector_in_scalars_is_trivial() {
        let b = algebra_closure(3, &[]).unwrap();
        let out = find_unifying_projector(&b, DEFAULT_BUDGET, DEFAULT_SEED);
        assert_eq!(out.verdict, ProjectorVerdict::ProvedTrivial);
    }

    #[test]
    fn projector_in_swap_commutant_is_spectral() {
        let b = commutant_basis(&swap()).unwrap();
        let out = find_unifying_projector(&b, DEFAULT_BUDGET, DEFAULT_SEED);
        let expected = (&Matrix::identity(2) + &swap()).scale(&frac(1, 2));
        assert_eq!(out.verdict, ProjectorVerdict::Found(expected));
    }

    #[test]
    fn nilpotent_algebra_has_no_projector() {
        // span{I, N} is local: its only idempotents are 0 and I.
        let b = algebra_closure(2, &[nilpotent()]).unwrap();
        let out = find_unifying_projector(&b, 60, 7);
        assert_eq!(out.verdict, ProjectorVerdict::NotFoundWithinBudget);
        assert_eq!(out.attempts, 60);
    }

    #[test]
    fn search_respects_tiny_budget() {
        let b = commutant_basis(&swap()).unwrap();
        let out = find_unifying_projector(&b, 1, 0);
        assert_eq!(out.verdict, ProjectorVerdict::NotFoundWithinBudget);
        assert_eq!(out.attempts, 1);
    }

    #[test]
    fn jacobi_examples() {
        let pi = (&Matrix::identity(2) + &swap()).scale(&frac(1, 2));
        let r = check_jacobi_restriction(&swap(), &Matrix::diag_ints(&[1, -1]), &pi).unwrap();
        assert!(r.update_preserves);
        assert!(!r.discrimination_preserves);
        assert!(!r.restriction_applies);
        assert!(!r.bracket_is_central);

        let d = Matrix::diag_ints(&[1, 2]);
        let r = check_jacobi_restriction(&d, &d, &Matrix::diag_ints(&[1, 0])).unwrap();
        assert!(r.update_preserves && r.discrimination_preserves && r.bracket_preserves);
        assert!(r.bracket_is_zero && r.bracket_is_central);

        assert_eq!(check_jacobi_restriction(&d, &d, &swap()), Err(Error::NotIdempotent));
    }
}
