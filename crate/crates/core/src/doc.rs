//! Scenario documents: the JSON input format, validation, execution into a
//! [`Report`], and builders for the canonical scenarios.

use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;

use serde::de::{self, MapAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize};
use serde_json::{json, Value};

use crate::commutant::{
    check_jacobi_restriction, commutant_basis, find_unifying_projector, intersect, DEFAULT_BUDGET, DEFAULT_SEED,
};
use crate::error::{Error, Result};
use crate::inclosure::{diagonal_defect, inclosure_check, AdmissibleSet};
use crate::linalg::{commutator, Matrix, Vector, MAX_DIM};
use crate::ncexpr::{evaluate, evaluate_expansion, leibniz_expand_with_update, parse_expr, Assignment, Generator};
use crate::report::{to_compact_json, Report, Section};
use crate::scenarios::{
    build_classa_toy, build_supplemented_liar, find_witnesses, liar_collapse_check, LiarScenario, LiarVerdict,
};
use crate::triple::{classify_identity, is_active_classa, propagation_report, ActionTriple, Overall, SelfRep};

pub const MAX_BUDGET: usize = 100_000;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorDecl {
    #[serde(default)]
    pub commutes_with_update: bool,
}

/// Which names play the update, discrimination and self-representation roles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TripleSpec {
    #[serde(default = "default_update")]
    pub update: String,
    #[serde(default = "default_discrimination")]
    pub discrimination: String,
    /// A matrix or expression name. Defaults to `R` when defined, otherwise
    /// to the discrimination itself.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub self_rep: Option<String>,
}

impl Default for TripleSpec {
    fn default() -> Self {
        TripleSpec { update: default_update(), discrimination: default_discrimination(), self_rep: None }
    }
}

fn default_update() -> String {
    "U".into()
}

fn default_discrimination() -> String {
    "D".into()
}

fn default_token() -> String {
    "T".into()
}

fn default_projector() -> String {
    "P".into()
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

fn default_name() -> String {
    "scenario".into()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Analysis {
    Propagation,
    Identity {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        budget: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
    },
    /// `state` indexes the admissible set, or the standard basis when no set
    /// is declared. Without it every state is examined.
    Diagonal {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        state: Option<usize>,
    },
    Inclosure,
    Liar {
        #[serde(default = "default_token")]
        token: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        falsity: Option<String>,
        #[serde(default = "default_projector")]
        projector: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        supplement: Option<String>,
    },
    Witnesses,
    Active,
    Expand {
        expr: String,
    },
    Commutant {
        matrix: String,
    },
    ProjectorSearch {
        of: Vec<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        budget: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
    },
    Jacobi {
        projector: String,
    },
}

impl Analysis {
    pub fn name(&self) -> &'static str {
        match self {
            Analysis::Propagation => "propagation",
            Analysis::Identity { .. } => "identity",
            Analysis::Diagonal { .. } => "diagonal",
            Analysis::Inclosure => "inclosure",
            Analysis::Liar { .. } => "liar",
            Analysis::Witnesses => "witnesses",
            Analysis::Active => "active",
            Analysis::Expand { .. } => "expand",
            Analysis::Commutant { .. } => "commutant",
            Analysis::ProjectorSearch { .. } => "projector_search",
            Analysis::Jacobi { .. } => "jacobi",
        }
    }

    fn needs_triple(&self) -> bool {
        matches!(
            self,
            Analysis::Propagation
                | Analysis::Identity { .. }
                | Analysis::Diagonal { .. }
                | Analysis::Inclosure
                | Analysis::Witnesses
                | Analysis::Active
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDoc {
    #[serde(default = "default_name")]
    pub name: String,
    pub dim: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default, deserialize_with = "unique_map")]
    pub matrices: BTreeMap<String, Matrix>,
    #[serde(default, deserialize_with = "unique_map")]
    pub generators: BTreeMap<String, GeneratorDecl>,
    #[serde(default, deserialize_with = "unique_map")]
    pub expressions: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub triple: Option<TripleSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub admissible_set: Option<Vec<Vector>>,
    #[serde(default)]
    pub analysis: Vec<Analysis>,
}

fn unique_map<'de, D, V>(de: D) -> std::result::Result<BTreeMap<String, V>, D::Error>
where
    D: Deserializer<'de>,
    V: Deserialize<'de>,
{
    struct UniqueMap<V>(PhantomData<V>);

    impl<'de, V: Deserialize<'de>> Visitor<'de> for UniqueMap<V> {
        type Value = BTreeMap<String, V>;

        fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
            f.write_str("a map with unique names")
        }

        fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> std::result::Result<Self::Value, A::Error> {
            let mut out = BTreeMap::new();
            while let Some(key) = access.next_key::<String>()? {
                if out.contains_key(&key) {
                    return Err(de::Error::custom(format!("duplicate name {key:?}")));
                }
                let value = access.next_value()?;
                out.insert(key, value);
            }
            Ok(out)
        }
    }

    de.deserialize_map(UniqueMap(PhantomData))
}

/// Parses and validates a scenario document.
pub fn parse_scenario(text: &str) -> Result<ScenarioDoc> {
    let doc: ScenarioDoc = serde_json::from_str(text).map_err(|e| {
        let message = e.to_string();
        let message = match message.rfind(" at line ") {
            Some(at) => message[..at].to_string(),
            None => message,
        };
        Error::Parse { line: e.line(), column: e.column(), message }
    })?;
    doc.validate()?;
    Ok(doc)
}

fn invalid(message: impl Into<String>) -> Error {
    Error::Validation(message.into())
}

impl ScenarioDoc {
    pub fn new(name: impl Into<String>, dim: usize) -> Self {
        ScenarioDoc {
            name: name.into(),
            dim,
            seed: DEFAULT_SEED,
            matrices: BTreeMap::new(),
            generators: BTreeMap::new(),
            expressions: BTreeMap::new(),
            triple: None,
            admissible_set: None,
            analysis: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        to_compact_json(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 || self.dim > MAX_DIM {
            return Err(invalid(format!("dim {} outside the supported range 1..={MAX_DIM}", self.dim)));
        }
        for (name, m) in &self.matrices {
            if m.rows() != self.dim || m.cols() != self.dim {
                return Err(invalid(format!(
                    "matrix {name:?} is {}x{}, expected {n}x{n}",
                    m.rows(),
                    m.cols(),
                    n = self.dim
                )));
            }
        }
        for name in self.expressions.keys() {
            if self.matrices.contains_key(name) || self.generators.contains_key(name) {
                return Err(invalid(format!("name {name:?} is declared twice")));
            }
        }
        let generators = self.generator_map();
        for (name, text) in &self.expressions {
            parse_expr(text, &generators).map_err(|e| invalid(format!("expression {name:?}: {e}")))?;
        }
        if let Some(configs) = &self.admissible_set {
            if let Some(v) = configs.iter().find(|v| v.dim() != self.dim) {
                return Err(invalid(format!(
                    "admissible configuration {v} has dim {}, expected {}",
                    v.dim(),
                    self.dim
                )));
            }
            AdmissibleSet::new(configs.clone()).map_err(|e| invalid(format!("admissible_set: {e}")))?;
        }
        if self.triple.is_some() || self.analysis.iter().any(Analysis::needs_triple) {
            self.build_triple()?;
        }
        for a in &self.analysis {
            self.validate_analysis(a)?;
        }
        Ok(())
    }

    fn validate_analysis(&self, a: &Analysis) -> Result<()> {
        let check_budget = |budget: &Option<usize>| match budget {
            Some(b) if *b == 0 || *b > MAX_BUDGET => {
                Err(invalid(format!("{}: budget {b} outside 1..={MAX_BUDGET}", a.name())))
            }
            _ => Ok(()),
        };
        match a {
            Analysis::Identity { budget, .. } => check_budget(budget),
            Analysis::Diagonal { state: Some(i) } => {
                let count = self.states().len();
                if *i >= count {
                    return Err(invalid(format!("diagonal: state {i} out of range, {count} states available")));
                }
                Ok(())
            }
            Analysis::Inclosure if self.admissible_set.is_none() => {
                Err(invalid("inclosure: the document declares no admissible_set"))
            }
            Analysis::Liar { token, falsity, projector, supplement } => {
                for name in [Some(token), falsity.as_ref(), Some(projector), supplement.as_ref()].into_iter().flatten()
                {
                    self.matrix(name)?;
                }
                Ok(())
            }
            Analysis::Expand { expr } => {
                if !self.expressions.contains_key(expr) {
                    return Err(invalid(format!("unknown expression {expr:?}")));
                }
                Ok(())
            }
            Analysis::Commutant { matrix } => self.matrix(matrix).map(|_| ()),
            Analysis::ProjectorSearch { of, budget, .. } => {
                if of.is_empty() {
                    return Err(invalid("projector_search: `of` names no matrices"));
                }
                for name in of {
                    self.matrix(name)?;
                }
                check_budget(budget)
            }
            Analysis::Jacobi { projector } => {
                let spec = self.triple_spec();
                self.matrix(&spec.update)?;
                self.matrix(&spec.discrimination)?;
                self.matrix(projector).map(|_| ())
            }
            _ => Ok(()),
        }
    }

    pub fn matrix(&self, name: &str) -> Result<&Matrix> {
        self.matrices.get(name).ok_or_else(|| invalid(format!("unknown matrix {name:?}")))
    }

    pub fn generator_map(&self) -> BTreeMap<String, Generator> {
        self.generators
            .iter()
            .map(|(name, decl)| {
                (name.clone(), Generator { name: name.clone(), commutes_with_update: decl.commutes_with_update })
            })
            .collect()
    }

    pub fn triple_spec(&self) -> TripleSpec {
        self.triple.clone().unwrap_or_default()
    }

    fn discrimination_generator(&self, spec: &TripleSpec) -> Generator {
        self.generator_map()
            .remove(&spec.discrimination)
            .unwrap_or_else(|| Generator::untagged(spec.discrimination.clone()))
    }

    /// Resolves the triple roles against the declared matrices and expressions.
    pub fn build_triple(&self) -> Result<ActionTriple> {
        let spec = self.triple_spec();
        let update = self.matrix(&spec.update)?.clone();
        let discrimination = self.matrix(&spec.discrimination)?.clone();
        let self_rep_name = spec.self_rep.clone().unwrap_or_else(|| {
            if self.matrices.contains_key("R") || self.expressions.contains_key("R") {
                "R".into()
            } else {
                spec.discrimination.clone()
            }
        });
        let self_rep = if let Some(r) = self.matrices.get(&self_rep_name) {
            SelfRep::Matrix(r.clone())
        } else if let Some(text) = self.expressions.get(&self_rep_name) {
            let expr = parse_expr(text, &self.generator_map())
                .map_err(|e| invalid(format!("expression {self_rep_name:?}: {e}")))?;
            let d = self.discrimination_generator(&spec);
            let mut coefficients = BTreeMap::new();
            for name in expr.generators().into_keys().filter(|name| *name != d.name) {
                let m = self.matrices.get(&name).ok_or_else(|| invalid(format!("generator {name:?} has no matrix")))?;
                coefficients.insert(name, m.clone());
            }
            SelfRep::Composite { expr, discrimination: d, coefficients }
        } else {
            return Err(invalid(format!("unknown matrix or expression {self_rep_name:?}")));
        };
        ActionTriple::new(update, discrimination, self_rep).map_err(|e| invalid(format!("triple: {e}")))
    }

    /// The admissible set when declared, otherwise the standard basis.
    pub fn states(&self) -> Vec<Vector> {
        match &self.admissible_set {
            Some(configs) => configs.clone(),
            None => (0..self.dim).map(|i| Vector::unit(self.dim, i)).collect(),
        }
    }
}

/// Executes every requested analysis in order. Analysis failures become
/// error sections rather than aborting the run.
pub fn run(doc: &ScenarioDoc) -> Report {
    let mut report = Report::new(doc.name.clone(), doc.seed);
    for a in &doc.analysis {
        let section = run_analysis(doc, a).unwrap_or_else(|e| Section::error(a.name(), e));
        report.push(section);
    }
    report
}

fn with_params(value: impl Serialize, params: Value) -> Value {
    let mut value = serde_json::to_value(value).expect("report values serialize");
    if let (Value::Object(map), Value::Object(extra)) = (&mut value, params) {
        map.extend(extra);
    }
    value
}

fn relation(holds: bool) -> &'static str {
    if holds {
        "="
    } else {
        "≠"
    }
}

fn run_analysis(doc: &ScenarioDoc, a: &Analysis) -> Result<Section> {
    let name = a.name();
    match a {
        Analysis::Propagation => {
            let p = propagation_report(&doc.build_triple()?)?;
            Ok(Section::new(name, format!("{:?}", p.vanishing), &p))
        }
        Analysis::Active => {
            let r = is_active_classa(&doc.build_triple()?);
            Ok(Section::new(name, if r.active { "active" } else { "inactive" }, &r))
        }
        Analysis::Identity { budget, seed } => {
            let budget = budget.unwrap_or(DEFAULT_BUDGET);
            let seed = seed.unwrap_or(doc.seed);
            let v = classify_identity(&doc.build_triple()?, budget, seed)?;
            let verdict = match &v.overall {
                Overall::Unconditional { .. } => "Unconditional".to_string(),
                Overall::Supplemental { frames } if frames.is_empty() => "Supplemental(no frame)".to_string(),
                Overall::Supplemental { frames } => format!("Supplemental(frames: {})", frames.join(", ")),
                Overall::Inconclusive => "Inconclusive".to_string(),
            };
            Ok(Section {
                analysis: name.into(),
                verdict,
                result: with_params(&v, json!({ "budget": budget, "seed": seed })),
            })
        }
        Analysis::Diagonal { state } => {
            let t = doc.build_triple()?;
            let states = doc.states();
            let indices: Vec<usize> = match state {
                Some(i) => vec![*i],
                None => (0..states.len()).collect(),
            };
            let mut rows = Vec::with_capacity(indices.len());
            for i in &indices {
                let s = states.get(*i).ok_or_else(|| invalid(format!("state {i} out of range")))?;
                rows.push(with_params(diagonal_defect(&t, s)?, json!({ "index": i })));
            }
            let outside = rows.iter().filter(|r| r["in_kernel"] == json!(false)).count();
            let verdict = format!("defect nonzero for {outside} of {} states", rows.len());
            Ok(Section::new(name, verdict, json!({ "states": rows })))
        }
        Analysis::Inclosure => {
            let t = doc.build_triple()?;
            let configs = doc.admissible_set.clone().ok_or_else(|| invalid("no admissible_set declared"))?;
            let r = inclosure_check(&t, &AdmissibleSet::new(configs)?)?;
            let verdict = format!(
                "Closure {}; Transcendence at {} of {}; prediction {}",
                if r.closure_everywhere { "holds" } else { "fails" },
                r.transcendent_count(),
                r.rows.len(),
                if r.prediction_matches { "matches" } else { "mismatches" }
            );
            Ok(Section::new(name, verdict, &r))
        }
        Analysis::Liar { token, falsity, projector, supplement } => {
            let t = doc.matrix(token)?.clone();
            let f = match falsity {
                Some(f) => Some(doc.matrix(f)?.clone()),
                None => None,
            };
            let scenario =
                LiarScenario::new(t.clone(), f.clone().unwrap_or_else(|| t.clone()), doc.matrix(projector)?.clone())?;
            let verdict = liar_collapse_check(&scenario)?;
            let mut label = verdict.label();
            let supplement_check = match supplement {
                Some(s_name) => {
                    let s = doc.matrix(s_name)?;
                    let with_token = commutator(&t, s)?.is_zero();
                    let with_falsity = match &f {
                        Some(f) => Some(commutator(f, s)?.is_zero()),
                        None => None,
                    };
                    let scalar = s.is_scalar_multiple_of_identity();
                    let sustains = with_token
                        && with_falsity.unwrap_or(true)
                        && !scalar
                        && matches!(verdict, LiarVerdict::NoCollapse { .. });
                    label = format!(
                        "{label}; supplement {s_name} {}",
                        if sustains { "sustains" } else { "does not sustain" }
                    );
                    Some(json!({
                        "name": s_name,
                        "commutes_with_token": with_token,
                        "commutes_with_falsity": with_falsity,
                        "scalar": scalar,
                        "sustains_distinction": sustains,
                    }))
                }
                None => None,
            };
            let result = json!({
                "liar_vec": scenario.liar_vec(),
                "verdict": verdict,
                "supplement": supplement_check,
            });
            Ok(Section::new(name, label, result))
        }
        Analysis::Witnesses => {
            let t = doc.build_triple()?;
            let w = find_witnesses(t.update(), t.discrimination())?;
            let verdict = format!(
                "grafting: {}; supplementary: {}",
                if w.grafting.is_some() { "found" } else { "none" },
                if w.supplementary.is_some() { "found" } else { "none" }
            );
            Ok(Section::new(name, verdict, &w))
        }
        Analysis::Expand { expr } => {
            let text = doc.expressions.get(expr).ok_or_else(|| invalid(format!("unknown expression {expr:?}")))?;
            let e = parse_expr(text, &doc.generator_map())?;
            let spec = doc.triple_spec();
            let d = doc.discrimination_generator(&spec);
            let form = leibniz_expand_with_update(&e, &d, &spec.update)?;
            let terms: Vec<Value> = form
                .terms
                .iter()
                .map(|t| json!({ "coeff": crate::linalg::format_scalar(&t.coeff), "left": t.left.to_string(), "right": t.right.to_string() }))
                .collect();
            let mut result = json!({ "expression": e.to_string(), "form": form.to_string(), "terms": terms });
            let names: Vec<String> = e.generators().into_keys().chain([spec.update.clone()]).collect();
            if names.iter().all(|n| doc.matrices.contains_key(n)) {
                let mut assignment = Assignment::new(doc.dim).with_update(doc.matrix(&spec.update)?.clone());
                for n in e.generators().into_keys() {
                    assignment.insert(n.clone(), doc.matrix(&n)?.clone());
                }
                let value = evaluate_expansion(&form, &assignment)?;
                let direct = commutator(doc.matrix(&spec.update)?, &evaluate(&e, &assignment)?)?;
                result["evaluation"] = json!({ "expansion": value, "direct": direct, "matches": value == direct });
            }
            Ok(Section::new(name, form.to_string(), result))
        }
        Analysis::Commutant { matrix } => {
            let b = commutant_basis(doc.matrix(matrix)?)?;
            let verdict = format!("dim Comm({matrix}) = {}", b.dim());
            Ok(Section::new(name, verdict, json!({ "matrix": matrix, "dim": b.dim(), "basis": b.elements() })))
        }
        Analysis::ProjectorSearch { of, budget, seed } => {
            let budget = budget.unwrap_or(DEFAULT_BUDGET);
            let seed = seed.unwrap_or(doc.seed);
            let mut commutants = Vec::with_capacity(of.len());
            for m in of {
                commutants.push(commutant_basis(doc.matrix(m)?)?);
            }
            let common = intersect(&commutants)?;
            let outcome = find_unifying_projector(&common, budget, seed);
            let result = with_params(&outcome, json!({ "of": of, "intersection_dim": common.dim(), "seed": seed }));
            Ok(Section::new(name, outcome.label(), result))
        }
        Analysis::Jacobi { projector } => {
            let spec = doc.triple_spec();
            let r = check_jacobi_restriction(
                doc.matrix(&spec.update)?,
                doc.matrix(&spec.discrimination)?,
                doc.matrix(projector)?,
            )?;
            let verdict = if r.restriction_applies {
                "applies: [[U,D],P] = 0".to_string()
            } else {
                format!(
                    "not applicable: [U,P] {} 0, [D,P] {} 0",
                    relation(r.update_preserves),
                    relation(r.discrimination_preserves)
                )
            };
            Ok(Section::new(name, verdict, &r))
        }
    }
}

/// A document for `dim` coordinates holding a collapsed liar `T = diag(1..dim)`
/// and a supplemented one whose distinction stays open.
pub fn gen_liar(dim: usize) -> Result<ScenarioDoc> {
    if !(2..=MAX_DIM).contains(&dim) {
        return Err(Error::InvalidDimension(format!("liar documents need 2 <= dim <= {MAX_DIM}")));
    }
    let (open, supplement) = build_supplemented_liar(dim)?;
    let mut doc = ScenarioDoc::new("liar", dim);
    let weights: Vec<i64> = (1..=dim as i64).collect();
    doc.matrices.insert("T".into(), Matrix::diag_ints(&weights));
    doc.matrices.insert("P".into(), open.liar_proj().clone());
    doc.matrices.insert("T_open".into(), open.token().clone());
    doc.matrices.insert("F_open".into(), open.falsity().clone());
    doc.matrices.insert("S".into(), supplement);
    doc.analysis = vec![
        Analysis::Liar { token: "T".into(), falsity: None, projector: "P".into(), supplement: None },
        Analysis::Liar {
            token: "T_open".into(),
            falsity: Some("F_open".into()),
            projector: "P".into(),
            supplement: Some("S".into()),
        },
        Analysis::Commutant { matrix: "T_open".into() },
    ];
    Ok(doc)
}

/// A class A toy document with `dim / 2` features. The admissible set is the
/// union of the update orbits of the standard basis.
pub fn gen_classa(dim: usize, active: bool) -> Result<ScenarioDoc> {
    if !(2..=MAX_DIM).contains(&dim) || !dim.is_multiple_of(2) {
        return Err(Error::InvalidDimension(format!("class A documents need an even dim in 2..={MAX_DIM}")));
    }
    let (toy, triple) = build_classa_toy(dim / 2, active)?;
    let mut doc = ScenarioDoc::new(if active { "classA_active" } else { "godel_fixed" }, dim);
    doc.matrices.insert("U".into(), triple.update().clone());
    doc.matrices.insert("D".into(), triple.discrimination().clone());
    doc.matrices.insert("X".into(), toy.coefficient.clone());
    doc.generators.insert("D".into(), GeneratorDecl { commutes_with_update: false });
    doc.generators.insert("X".into(), GeneratorDecl { commutes_with_update: true });
    doc.expressions.insert("R".into(), toy.composite.clone());
    doc.triple = Some(TripleSpec { self_rep: Some("R".into()), ..TripleSpec::default() });
    let mut configs: Vec<Vector> = Vec::new();
    for i in 0..dim {
        let mut v = Vector::unit(dim, i);
        while !configs.contains(&v) {
            configs.push(v.clone());
            v = triple.update().apply(&v)?;
        }
    }
    doc.admissible_set = Some(configs);
    doc.analysis = vec![
        Analysis::Active,
        Analysis::Propagation,
        Analysis::Expand { expr: "R".into() },
        Analysis::Identity { budget: None, seed: None },
        Analysis::Witnesses,
        Analysis::Diagonal { state: None },
        Analysis::Inclosure,
    ];
    Ok(doc)
}
