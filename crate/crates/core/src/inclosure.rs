//! The diagonal defect between update-then-describe and describe-then-update,
//! and the inclosure construction over a finite admissible set.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{commutator, kernel_basis, Vector};
use crate::triple::ActionTriple;

/// A finite, duplicate-free list of admissible configurations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibleSet {
    configs: Vec<Vector>,
}

impl AdmissibleSet {
    pub fn new(configs: Vec<Vector>) -> Result<Self> {
        let Some(first) = configs.first() else {
            return Err(Error::InvalidAdmissibleSet("must contain at least one configuration".into()));
        };
        let dim = first.dim();
        if let Some(v) = configs.iter().find(|v| v.dim() != dim) {
            return Err(Error::ShapeMismatch(format!("configuration {v} has dim {}, expected {dim}", v.dim())));
        }
        for (i, v) in configs.iter().enumerate() {
            if configs[..i].contains(v) {
                return Err(Error::InvalidAdmissibleSet(format!("duplicate configuration {v}")));
            }
        }
        Ok(AdmissibleSet { configs })
    }

    pub fn configs(&self) -> &[Vector] {
        &self.configs
    }

    pub fn dim(&self) -> usize {
        self.configs[0].dim()
    }

    pub fn len(&self) -> usize {
        self.configs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.configs.is_empty()
    }

    pub fn contains(&self, v: &Vector) -> bool {
        self.configs.contains(v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagonalDefect {
    pub state: Vector,
    /// `ρ₀ = R s`
    pub rho0: Vector,
    /// `ρ₁ = R U s`
    pub rho1: Vector,
    /// `ρ₁ − U ρ₀`
    pub defect: Vector,
    /// `defect = −[U, R] s`, checked exactly.
    pub matches_commutator: bool,
    pub in_kernel: bool,
}

pub fn diagonal_defect(t: &ActionTriple, s: &Vector) -> Result<DiagonalDefect> {
    let u = t.update();
    let r = t.self_rep_matrix();
    let rho0 = r.apply(s)?;
    let rho1 = r.apply(&u.apply(s)?)?;
    let defect = rho1.checked_sub(&u.apply(&rho0)?)?;
    let bracket_s = commutator(u, r)?.apply(s)?;
    let matches_commutator = defect.checked_add(&bracket_s)?.is_zero();
    debug_assert!(matches_commutator);
    let in_kernel = defect.is_zero();
    Ok(DiagonalDefect { state: s.clone(), rho0, rho1, defect, matches_commutator, in_kernel })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InclosureRow {
    pub rho: Vector,
    /// Index into the admissible set of `q(ρ)`.
    pub representative: usize,
    /// `σ_q(ρ) = R U q(ρ)`
    pub sigma: Vector,
    /// `U ρ`, the update of the prior totalisation.
    pub deferred: Vector,
    pub closure: bool,
    pub transcendence: bool,
    /// `q(ρ) ∉ ker[U, R]`, decided by kernel membership.
    pub predicted_transcendence: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InclosureReport {
    pub omega: Vec<Vector>,
    pub rows: Vec<InclosureRow>,
    pub closure_everywhere: bool,
    pub prediction_matches: bool,
}

impl InclosureReport {
    pub fn transcendent_count(&self) -> usize {
        self.rows.iter().filter(|r| r.transcendence).count()
    }
}

/// Builds `Ω = R(V_S)` with first-occurrence representatives and checks the
/// Closure and Transcendence clauses for every `ρ ∈ Ω`.
pub fn inclosure_check(t: &ActionTriple, v_s: &AdmissibleSet) -> Result<InclosureReport> {
    let u = t.update();
    let r = t.self_rep_matrix();
    if v_s.dim() != t.dim() {
        return Err(Error::ShapeMismatch(format!(
            "admissible configurations have dim {}, triple has dim {}",
            v_s.dim(),
            t.dim()
        )));
    }
    for (index, s) in v_s.configs().iter().enumerate() {
        let image = u.apply(s)?;
        if !v_s.contains(&image) {
            return Err(Error::NotClosed { index, image: image.to_string() });
        }
    }

    let mut omega: Vec<Vector> = Vec::new();
    let mut reps: Vec<usize> = Vec::new();
    for (index, s) in v_s.configs().iter().enumerate() {
        let rho = r.apply(s)?;
        if !omega.contains(&rho) {
            omega.push(rho);
            reps.push(index);
        }
    }

    let kernel = kernel_basis(&commutator(u, r)?);
    let mut rows = Vec::with_capacity(omega.len());
    for (rho, &rep) in omega.iter().zip(&reps) {
        let q = &v_s.configs()[rep];
        debug_assert_eq!(&r.apply(q)?, rho);
        let sigma = r.apply(&u.apply(q)?)?;
        let deferred = u.apply(rho)?;
        rows.push(InclosureRow {
            rho: rho.clone(),
            representative: rep,
            closure: omega.contains(&sigma),
            transcendence: sigma != deferred,
            predicted_transcendence: !kernel.contains(q),
            sigma,
            deferred,
        });
    }
    let closure_everywhere = rows.iter().all(|row| row.closure);
    let prediction_matches = rows.iter().all(|row| row.transcendence == row.predicted_transcendence);
    Ok(InclosureReport { omega, rows, closure_everywhere, prediction_matches })
}
