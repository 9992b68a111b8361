//! Builders and checks for canonical situations: the liar configuration,
//! class A toy systems, and grafting/supplementary witnesses.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{commutator, format_scalar, int, is_idempotent, kernel_basis, rank, Matrix, Scalar, Vector};
use crate::ncexpr::{Generator, NcExpr};
use crate::triple::{ActionTriple, SelfRep};

/// A token operator `T`, a falsity operator `F`, and a rank-one projector
/// `Π_L` onto the line of the liar configuration `|L⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiarScenario {
    token: Matrix,
    falsity: Matrix,
    liar_proj: Matrix,
    liar_vec: Vector,
}

impl LiarScenario {
    /// Takes `|L⟩` to be the canonical image basis vector of `Π_L`.
    pub fn new(token: Matrix, falsity: Matrix, liar_proj: Matrix) -> Result<Self> {
        check_rank_one(&liar_proj)?;
        let liar_vec = liar_proj.image_basis().vectors()[0].clone();
        LiarScenario::with_vector(token, falsity, liar_proj, liar_vec)
    }

    pub fn with_vector(token: Matrix, falsity: Matrix, liar_proj: Matrix, liar_vec: Vector) -> Result<Self> {
        let n = liar_proj.rows();
        if n < 2 {
            return Err(Error::InvalidDimension("liar scenarios need dim >= 2".into()));
        }
        for m in [&token, &falsity] {
            if !m.is_square() || m.rows() != n {
                return Err(Error::ShapeMismatch(format!("operators must be {n}x{n}")));
            }
        }
        check_rank_one(&liar_proj)?;
        if liar_proj.apply(&liar_vec)? != liar_vec || liar_vec.is_zero() {
            return Err(Error::LiarVectorOutsideProjector);
        }
        Ok(LiarScenario { token, falsity, liar_proj, liar_vec })
    }

    pub fn dim(&self) -> usize {
        self.liar_proj.rows()
    }

    pub fn token(&self) -> &Matrix {
        &self.token
    }

    pub fn falsity(&self) -> &Matrix {
        &self.falsity
    }

    pub fn liar_proj(&self) -> &Matrix {
        &self.liar_proj
    }

    pub fn liar_vec(&self) -> &Vector {
        &self.liar_vec
    }
}

fn check_rank_one(p: &Matrix) -> Result<()> {
    if !p.is_square() {
        return Err(Error::ShapeMismatch("liar projector must be square".into()));
    }
    let r = rank(p);
    if r != 1 {
        return Err(Error::NotRankOne { rank: r });
    }
    if !is_idempotent(p) {
        return Err(Error::NotIdempotent);
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum LiarVerdict {
    /// `[T, Π_L] = 0`, so `T|L⟩ = λ|L⟩`. `demonstrative` flags `λ = 1`.
    Collapse {
        #[serde(serialize_with = "crate::linalg::serialize_scalar")]
        lambda: Scalar,
        demonstrative: bool,
    },
    NoCollapse {
        commutator: Matrix,
    },
}

impl LiarVerdict {
    pub fn label(&self) -> String {
        match self {
            LiarVerdict::Collapse { lambda, .. } => format!("Collapse(λ={})", format_scalar(lambda)),
            LiarVerdict::NoCollapse { .. } => "NoCollapse".to_string(),
        }
    }
}

/// If `T` commutes with `Π_L` it maps the liar line into itself; returns the
/// exact eigenvalue in that case.
pub fn liar_collapse_check(s: &LiarScenario) -> Result<LiarVerdict> {
    check_rank_one(&s.liar_proj)?;
    let bracket = commutator(&s.token, &s.liar_proj)?;
    if !bracket.is_zero() {
        return Ok(LiarVerdict::NoCollapse { commutator: bracket });
    }
    let image = s.token.apply(&s.liar_vec)?;
    let pivot = s.liar_vec.entries().iter().position(|x| !x.is_zero()).expect("liar vector is nonzero");
    let lambda = &image.entries()[pivot] / &s.liar_vec.entries()[pivot];
    debug_assert_eq!(image, s.liar_vec.scale(&lambda));
    let demonstrative = lambda.is_one();
    Ok(LiarVerdict::Collapse { lambda, demonstrative })
}

/// A liar configuration whose distinction `[T, Π_L] ≠ 0` is held open, with
/// a non-scalar supplement `Σ ∈ Comm(T) ∩ Comm(F)`.
///
/// In dim 2, `T = F = [[1,1],[0,0]]` and `Σ = T`. In higher dims the context
/// coordinates are appended as an identity block, `T = F = B ⊕ 𝟙`, and `Σ`
/// projects onto them.
pub fn build_supplemented_liar(dim: usize) -> Result<(LiarScenario, Matrix)> {
    if dim < 2 {
        return Err(Error::InvalidDimension("the liar line needs a proper complement: dim >= 2".into()));
    }
    let block = Matrix::from_ints(&[[1, 1], [0, 0]]);
    let (token, supplement) = if dim == 2 {
        (block.clone(), block)
    } else {
        let context = Matrix::identity(dim - 2);
        (block.direct_sum(&context), Matrix::zeros(2, 2).direct_sum(&context))
    };
    let mut proj = Matrix::zeros(dim, dim);
    proj.set(0, 0, Scalar::one());
    let scenario = LiarScenario::new(token.clone(), token, proj)?;
    debug_assert!(!commutator(scenario.token(), scenario.liar_proj())?.is_zero());
    debug_assert!(commutator(scenario.token(), &supplement)?.is_zero());
    debug_assert!(commutator(scenario.falsity(), &supplement)?.is_zero());
    Ok((scenario, supplement))
}

/// Features on coordinates `0..n`, discrimination-table coordinates on
/// `n..2n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassAToy {
    pub n_features: usize,
    pub active: bool,
    /// Row `i` of `D`: feature `i` weighted `i+1`, table entry `i` weighted `−(i+1)`.
    pub discrimination_table: Vec<Vector>,
    pub update_rule: Matrix,
    /// The self-representation composite, over generators `D` and `X`.
    pub composite: String,
    /// `X = U + 𝟙`, a polynomial in the update.
    pub coefficient: Matrix,
}

pub const TOY_COMPOSITE: &str = "D*D + X*D";

/// Builds a class A toy with `2·n_features` coordinates.
///
/// Active toys swap each feature with its table entry, so `U` rewrites the
/// apparatus and `[U, D] ≠ 0`. Inactive toys negate the features and leave the
/// table fixed, which keeps `D` inside `Comm(U)`.
pub fn build_classa_toy(n_features: usize, active: bool) -> Result<(ClassAToy, ActionTriple)> {
    if n_features == 0 {
        return Err(Error::InvalidDimension("class A toys need at least one feature".into()));
    }
    let n = 2 * n_features;
    let weights: Vec<Scalar> = (1..=n_features as i64).chain((1..=n_features as i64).map(|w| -w)).map(int).collect();
    let discrimination = Matrix::diag(&weights);
    let discrimination_table = (0..n).map(|r| Vector::new(discrimination.row(r).to_vec()).expect("n >= 2")).collect();
    let mut update = Matrix::zeros(n, n);
    for i in 0..n_features {
        if active {
            update.set(i, i + n_features, Scalar::one());
            update.set(i + n_features, i, Scalar::one());
        } else {
            update.set(i, i, int(-1));
            update.set(i + n_features, i + n_features, Scalar::one());
        }
    }
    let coefficient = &update + &Matrix::identity(n);
    let generators: BTreeMap<String, Generator> =
        [Generator::untagged("D"), Generator::tagged("X")].into_iter().map(|g| (g.name.clone(), g)).collect();
    let expr: NcExpr = crate::ncexpr::parse_expr(TOY_COMPOSITE, &generators)?;
    let self_rep = SelfRep::Composite {
        expr,
        discrimination: generators["D"].clone(),
        coefficients: [("X".to_string(), coefficient.clone())].into_iter().collect(),
    };
    let triple = ActionTriple::new(update.clone(), discrimination, self_rep)?;
    let toy = ClassAToy {
        n_features,
        active,
        discrimination_table,
        update_rule: update,
        composite: TOY_COMPOSITE.to_string(),
        coefficient,
    };
    Ok((toy, triple))
}

/// Grafting: `Dv ≠ 0` but `DUv = 0`. Supplementary: `Dv = 0` but `DUv ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    pub grafting: Option<Vector>,
    pub supplementary: Option<Vector>,
    /// `ker(DU) ⊆ ker(D)`: certifies that no grafting witness exists.
    pub ker_du_within_ker_d: bool,
    /// `ker(D) ⊆ ker(DU)`: certifies that no supplementary witness exists.
    pub ker_d_within_ker_du: bool,
    pub update_kernel_dim: usize,
    pub update_rank: usize,
}

pub fn find_witnesses(u: &Matrix, d: &Matrix) -> Result<WitnessReport> {
    if !u.is_square() || !d.is_square() {
        return Err(Error::ShapeMismatch("witness search needs square operators".into()));
    }
    let du = d.checked_mul(u)?;
    let ker_d = kernel_basis(d);
    let ker_du = kernel_basis(&du);
    let grafting = ker_du.vectors().iter().find(|v| !ker_d.contains(v)).cloned();
    let supplementary = ker_d.vectors().iter().find(|v| !ker_du.contains(v)).cloned();
    Ok(WitnessReport {
        grafting,
        supplementary,
        ker_du_within_ker_d: ker_du.is_subspace_of(&ker_d),
        ker_d_within_ker_du: ker_d.is_subspace_of(&ker_du),
        update_kernel_dim: kernel_basis(u).dim(),
        update_rank: rank(u),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triple::{is_active_classa, propagation_report, Vanishing};

    fn e(i: usize) -> Vector {
        Vector::unit(2, i)
    }

    #[test]
    fn collapse_for_block_diagonal_token() {
        let s = LiarScenario::new(Matrix::diag_ints(&[1, 5]), Matrix::identity(2), Matrix::diag_ints(&[1, 0])).unwrap();
        assert_eq!(liar_collapse_check(&s).unwrap(), LiarVerdict::Collapse { lambda: int(1), demonstrative: true });
    }

    #[test]
    fn no_collapse_when_token_moves_the_line() {
        let s =
            LiarScenario::new(Matrix::from_ints(&[[1, 1], [0, 0]]), Matrix::identity(2), Matrix::diag_ints(&[1, 0]))
                .unwrap();
        assert_eq!(
            liar_collapse_check(&s).unwrap(),
            LiarVerdict::NoCollapse { commutator: Matrix::from_ints(&[[0, -1], [0, 0]]) }
        );
    }

    #[test]
    fn identity_token_collapses() {
        let s = LiarScenario::new(Matrix::identity(3), Matrix::identity(3), Matrix::diag_ints(&[0, 1, 0])).unwrap();
        assert_eq!(liar_collapse_check(&s).unwrap().label(), "Collapse(λ=1)");
    }

    #[test]
    fn non_demonstrative_eigenvalue_is_reported() {
        let s = LiarScenario::new(Matrix::diag_ints(&[3, 1]), Matrix::identity(2), Matrix::diag_ints(&[1, 0])).unwrap();
        assert_eq!(liar_collapse_check(&s).unwrap(), LiarVerdict::Collapse { lambda: int(3), demonstrative: false });
    }

    #[test]
    fn liar_projector_must_be_rank_one() {
        let err = LiarScenario::new(Matrix::identity(2), Matrix::identity(2), Matrix::identity(2));
        assert_eq!(err, Err(Error::NotRankOne { rank: 2 }));
        let err = LiarScenario::new(Matrix::identity(2), Matrix::identity(2), Matrix::diag_ints(&[2, 0]));
        assert_eq!(err, Err(Error::NotIdempotent));
        let err = LiarScenario::with_vector(
            Matrix::identity(2),
            Matrix::identity(2),
            Matrix::diag_ints(&[1, 0]),
            Vector::from_ints(&[0, 1]),
        );
        assert_eq!(err, Err(Error::LiarVectorOutsideProjector));
    }

    #[test]
    fn supplemented_liar_dim_two() {
        let (s, sigma) = build_supplemented_liar(2).unwrap();
        assert_eq!(sigma, Matrix::from_ints(&[[1, 1], [0, 0]]));
        assert!(matches!(liar_collapse_check(&s).unwrap(), LiarVerdict::NoCollapse { .. }));
        assert!(commutator(s.token(), &sigma).unwrap().is_zero());
        assert!(commutator(s.falsity(), &sigma).unwrap().is_zero());
        assert!(!sigma.is_scalar_multiple_of_identity());
    }

    #[test]
    fn supplemented_liar_block_construction() {
        for dim in 3..=6 {
            let (s, sigma) = build_supplemented_liar(dim).unwrap();
            assert!(matches!(liar_collapse_check(&s).unwrap(), LiarVerdict::NoCollapse { .. }));
            assert!(commutator(s.token(), &sigma).unwrap().is_zero());
            assert!(commutator(s.falsity(), &sigma).unwrap().is_zero());
            assert!(is_idempotent(&sigma) && !sigma.is_scalar_multiple_of_identity());
        }
        assert!(build_supplemented_liar(1).is_err());
    }

    #[test]
    fn inactive_toy() {
        let (toy, t) = build_classa_toy(1, false).unwrap();
        assert!(!is_active_classa(&t).active);
        assert_eq!(toy.update_rule, Matrix::diag_ints(&[-1, 1]));
        let r = propagation_report(&t).unwrap();
        assert!(r.direct.is_zero());
    }

    #[test]
    fn active_toy_one_feature() {
        let (_, t) = build_classa_toy(1, true).unwrap();
        assert_eq!(t.update(), &Matrix::from_ints(&[[0, 1], [1, 0]]));
        assert_eq!(t.discrimination(), &Matrix::diag_ints(&[1, -1]));
        assert_eq!(is_active_classa(&t).bracket, Matrix::from_ints(&[[0, -2], [2, 0]]));
        let r = propagation_report(&t).unwrap();
        assert_eq!(r.vanishing, Vanishing::NonVanishing);
        assert_eq!(r.expansion_matches_direct, Some(true));
    }

    #[test]
    fn active_toy_two_features_propagates_to_r_equal_d() {
        let (_, t) = build_classa_toy(2, true).unwrap();
        let r_equal_d = SelfRep::Composite {
            expr: NcExpr::gen(&Generator::untagged("D")),
            discrimination: Generator::untagged("D"),
            coefficients: BTreeMap::new(),
        };
        let t2 = ActionTriple::new(t.update().clone(), t.discrimination().clone(), r_equal_d).unwrap();
        assert_eq!(propagation_report(&t2).unwrap().vanishing, Vanishing::NonVanishing);
        assert!(build_classa_toy(0, true).is_err());
    }

    #[test]
    fn grafting_witness() {
        let u = Matrix::from_ints(&[[0, 0], [1, 0]]);
        let w = find_witnesses(&u, &Matrix::diag_ints(&[1, 0])).unwrap();
        assert_eq!(w.grafting, Some(e(0)));
        assert_eq!(w.supplementary, None);
        assert!(w.ker_d_within_ker_du);
    }

    #[test]
    fn supplementary_witness() {
        let u = Matrix::from_ints(&[[0, 1], [0, 0]]);
        let d = Matrix::diag_ints(&[1, 0]);
        let w = find_witnesses(&u, &d).unwrap();
        let v = w.supplementary.clone().unwrap();
        assert_eq!(v, e(1));
        assert!(d.apply(&v).unwrap().is_zero());
        assert!(!d.apply(&u.apply(&v).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn identity_update_has_no_witnesses() {
        let w = find_witnesses(&Matrix::identity(2), &Matrix::diag_ints(&[1, 0])).unwrap();
        assert_eq!((w.grafting, w.supplementary), (None, None));
        assert!(w.ker_du_within_ker_d && w.ker_d_within_ker_du);
        assert_eq!((w.update_kernel_dim, w.update_rank), (0, 2));
    }
}
