//! Action triples `(U, D, R)`: activity, propagation of non-commutation from
//! `D` to `R`, and identity classification by projector search over the
//! commutants of every nonempty subset of `{U, D, R}`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::commutant::{commutant_basis, find_unifying_projector, intersect, ProjectorSearchOutcome};
use crate::error::{Error, Result};
use crate::linalg::{commutator, Matrix};
use crate::ncexpr::{
    evaluate, evaluate_expansion, leibniz_expand_with_update, Assignment, ExpansionForm, Generator, NcExpr,
};

/// How the self-representation is supplied.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SelfRep {
    /// A raw matrix with no known factorization through `D`.
    Matrix(Matrix),
    /// `R = F(D)` for a composite `F` whose other generators commute with `U`.
    Composite { expr: NcExpr, discrimination: Generator, coefficients: BTreeMap<String, Matrix> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionTriple {
    update: Matrix,
    discrimination: Matrix,
    self_rep: SelfRep,
    self_rep_matrix: Matrix,
}

impl ActionTriple {
    pub fn new(update: Matrix, discrimination: Matrix, self_rep: SelfRep) -> Result<Self> {
        let n = update.rows();
        for (label, m) in [("update", &update), ("discrimination", &discrimination)] {
            if !m.is_square() || m.rows() != n {
                return Err(Error::ShapeMismatch(format!("{label} is {}x{}, expected {n}x{n}", m.rows(), m.cols())));
            }
        }
        let self_rep_matrix = match &self_rep {
            SelfRep::Matrix(r) => {
                if !r.is_square() || r.rows() != n {
                    return Err(Error::ShapeMismatch(format!(
                        "self-representation is {}x{}, expected {n}x{n}",
                        r.rows(),
                        r.cols()
                    )));
                }
                r.clone()
            }
            SelfRep::Composite { expr, discrimination: d, .. } => {
                if let Some(g) = expr.generators().into_values().find(|g| g.name != d.name && !g.commutes_with_update) {
                    return Err(Error::UntaggedGenerator(g.name));
                }
                let assignment = composite_assignment(&update, &discrimination, &self_rep);
                evaluate(expr, &assignment)?
            }
        };
        Ok(ActionTriple { update, discrimination, self_rep, self_rep_matrix })
    }

    /// Triple with a raw-matrix self-representation.
    pub fn from_matrices(update: Matrix, discrimination: Matrix, self_rep: Matrix) -> Result<Self> {
        ActionTriple::new(update, discrimination, SelfRep::Matrix(self_rep))
    }

    pub fn dim(&self) -> usize {
        self.update.rows()
    }

    pub fn update(&self) -> &Matrix {
        &self.update
    }

    pub fn discrimination(&self) -> &Matrix {
        &self.discrimination
    }

    pub fn self_rep(&self) -> &SelfRep {
        &self.self_rep
    }

    /// The evaluated `R`.
    pub fn self_rep_matrix(&self) -> &Matrix {
        &self.self_rep_matrix
    }
}

fn composite_assignment(update: &Matrix, discrimination: &Matrix, self_rep: &SelfRep) -> Assignment {
    let mut a = Assignment::new(update.rows()).with_update(update.clone());
    if let SelfRep::Composite { discrimination: d, coefficients, .. } = self_rep {
        for (name, m) in coefficients {
            a.insert(name.clone(), m.clone());
        }
        a.insert(d.name.clone(), discrimination.clone());
    }
    a
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ActivityReport {
    pub active: bool,
    pub bracket: Matrix,
}

/// An active update acts non-trivially on the apparatus: `[U, D] ≠ 0`.
pub fn is_active_classa(t: &ActionTriple) -> ActivityReport {
    let bracket = commutator(&t.update, &t.discrimination).expect("shapes checked at construction");
    ActivityReport { active: !bracket.is_zero(), bracket }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Vanishing {
    /// `R` is a composite that never mentions `D`.
    NoDOccurrence,
    /// `R` mentions `D` but `[U, R]` evaluates to zero.
    EmpiricalCancellation,
    NonVanishing,
    /// `R` was given as a raw matrix and commutes with `U`.
    Commutes,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExpansionSummary {
    pub form: String,
    pub term_count: usize,
    pub value: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropagationReport {
    pub update_discrimination_bracket: Matrix,
    pub direct: Matrix,
    pub expansion: Option<ExpansionSummary>,
    pub expansion_matches_direct: Option<bool>,
    pub vanishing: Vanishing,
    #[serde(skip)]
    pub form: Option<ExpansionForm>,
}

/// Computes `[U, R]` directly and, for composite `R`, through the symbolic
/// Leibniz expansion, and compares the two exactly.
pub fn propagation_report(t: &ActionTriple) -> Result<PropagationReport> {
    let bracket = commutator(&t.update, &t.discrimination)?;
    let direct = commutator(&t.update, &t.self_rep_matrix)?;
    let (expansion, matches, form, mentions_d) = match &t.self_rep {
        SelfRep::Matrix(_) => (None, None, None, None),
        SelfRep::Composite { expr, discrimination: d, .. } => {
            let form = leibniz_expand_with_update(expr, d, "U")?;
            let assignment = composite_assignment(&t.update, &t.discrimination, &t.self_rep);
            let value = evaluate_expansion(&form, &assignment)?;
            let matches = value == direct;
            let summary = ExpansionSummary { form: form.to_string(), term_count: form.terms.len(), value };
            let mentions_d = !form.terms.is_empty();
            (Some(summary), Some(matches), Some(form), Some(mentions_d))
        }
    };
    let vanishing = match (direct.is_zero(), mentions_d) {
        (false, _) => Vanishing::NonVanishing,
        (true, None) => Vanishing::Commutes,
        (true, Some(false)) => Vanishing::NoDOccurrence,
        (true, Some(true)) => Vanishing::EmpiricalCancellation,
    };
    Ok(PropagationReport {
        update_discrimination_bracket: bracket,
        direct,
        expansion,
        expansion_matches_direct: matches,
        vanishing,
        form,
    })
}

/// The seven nonempty subsets of `{U, D, R}` in report order.
pub const SUBSETS: [&str; 7] = ["U", "D", "R", "UD", "UR", "DR", "UDR"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubsetOutcome {
    pub subset: String,
    pub intersection_dim: usize,
    pub search: ProjectorSearchOutcome,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum Overall {
    Unconditional {
        projector: Matrix,
    },
    /// Maximal proper subsets whose common commutant holds a projector.
    Supplemental {
        frames: Vec<String>,
    },
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityVerdict {
    pub per_subset: Vec<SubsetOutcome>,
    pub overall: Overall,
}

impl IdentityVerdict {
    pub fn outcome(&self, subset: &str) -> Option<&SubsetOutcome> {
        self.per_subset.iter().find(|o| o.subset == subset)
    }
}

/// Runs the projector search on `∩_{X∈S} Comm(X)` for every nonempty `S`.
///
/// `Unconditional` needs a projector for the full subset. Otherwise, if the
/// full search was inconclusive the verdict is `Inconclusive`; if the full
/// intersection is provably trivial the identity is `Supplemental`, listing
/// the maximal proper subsets where a projector was found (possibly none).
pub fn classify_identity(t: &ActionTriple, budget: usize, seed: u64) -> Result<IdentityVerdict> {
    let commutants = [
        ('U', commutant_basis(&t.update)?),
        ('D', commutant_basis(&t.discrimination)?),
        ('R', commutant_basis(&t.self_rep_matrix)?),
    ];
    let mut per_subset = Vec::with_capacity(SUBSETS.len());
    for subset in SUBSETS {
        let parts: Vec<_> =
            commutants.iter().filter(|(label, _)| subset.contains(*label)).map(|(_, c)| c.clone()).collect();
        let common = intersect(&parts)?;
        per_subset.push(SubsetOutcome {
            subset: subset.to_string(),
            intersection_dim: common.dim(),
            search: find_unifying_projector(&common, budget, seed),
        });
    }
    let full = &per_subset[SUBSETS.len() - 1];
    let overall = if let Some(p) = full.search.projector() {
        Overall::Unconditional { projector: p.clone() }
    } else if full.intersection_dim > 1 {
        Overall::Inconclusive
    } else {
        let found: Vec<&str> =
            per_subset[..SUBSETS.len() - 1].iter().filter(|o| o.search.is_found()).map(|o| o.subset.as_str()).collect();
        let frames = found
            .iter()
            .filter(|s| !found.iter().any(|other| other.len() > s.len() && s.chars().all(|c| other.contains(c))))
            .map(|s| s.to_string())
            .collect();
        Overall::Supplemental { frames }
    };
    Ok(IdentityVerdict { per_subset, overall })
}
