//! JSON job specifications and reports.
//!
//! Reports are `serde_json::Value` trees whose object keys are sorted, so a
//! job always serializes to the same bytes.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::groups::{Character, GroupSpec, GroupSpecFile, ReflectionGroup};
use crate::params::{is_regular_by_degrees, regularity_of_context, regularity_probe, regularity_probe_rank1, DEFAULT_PROBE_BOUND};
use crate::parse::{format_laurent, parse_expression};
use crate::pbw::{reflection_class_count, AlgebraContext, PBWElement, Parameter};
use crate::rank1::{
    canonical_twist_reduction, check_pushforward_holonomic_with, find_stable_ladders, is_reducible, singular_cycle_detailed,
    CyclicDatum, LaurentModule, TwistP,
};
use crate::representations::{
    bernstein_filtration_dims, find_singular_vectors, gk_dimension, holonomicity, ModuleModel, Vector, DEFAULT_TRUNCATION,
    DEFAULT_WINDOW,
};
use crate::scalars::CycloNumber;

pub const SCHEMA: &str = "cherednik-kernel/1";
pub const DEFAULT_ASSOCIATIVITY_SAMPLES: usize = 100;
pub const DEFAULT_LADDER_BOUND: i64 = 10;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupRef {
    Named(String),
    Spec(GroupSpecFile),
}

impl GroupRef {
    pub fn build(&self) -> Result<Arc<ReflectionGroup>> {
        let spec = match self {
            GroupRef::Named(name) => GroupSpec::named(name)?,
            GroupRef::Spec(file) => GroupSpec::from_file_spec(file)?,
        };
        Ok(Arc::new(ReflectionGroup::close(spec)?))
    }
}

/// `"trivial"`, `"sign"` (−1 on every generator) or explicit generator values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CharacterSpec {
    Name(String),
    Values(Vec<String>),
}

impl Default for CharacterSpec {
    fn default() -> Self {
        CharacterSpec::Name("trivial".into())
    }
}

impl CharacterSpec {
    pub fn build(&self, group: &ReflectionGroup) -> Result<Character> {
        let n = group.field_order();
        let gens = group.generator_indices().len();
        match self {
            CharacterSpec::Name(s) if s == "trivial" => Ok(Character::trivial(group)),
            CharacterSpec::Name(s) if s == "sign" => {
                Character::from_generator_values(group, &vec![CycloNumber::from_int(-1, n); gens])
            }
            CharacterSpec::Name(s) => Err(Error::InvalidInput(format!("unknown character '{s}'"))),
            CharacterSpec::Values(v) => {
                let values = v.iter().map(|s| CycloNumber::parse_in(s, n)).collect::<Result<Vec<_>>>()?;
                Character::from_generator_values(group, &values)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ModuleSpec {
    Verma {
        #[serde(default)]
        character: CharacterSpec,
    },
    VermaQuotient {
        #[serde(default)]
        character: CharacterSpec,
        top: u32,
    },
    Regular,
    /// Rank-1 cyclic contexts only.
    Laurent { p: String },
    /// `right` is a module over the Weyl algebra of `right_rank` extra
    /// coordinates.
    Tensor {
        left: Box<ModuleSpec>,
        right: Box<ModuleSpec>,
        right_rank: usize,
    },
    Sum { parts: Vec<ModuleSpec> },
}

impl ModuleSpec {
    pub fn build(&self, ctx: &Arc<AlgebraContext>, truncation: u32) -> Result<ModuleModel> {
        match self {
            ModuleSpec::Verma { character } => ModuleModel::verma(ctx.clone(), character.build(ctx.group())?, truncation),
            ModuleSpec::VermaQuotient { character, top } => {
                ModuleModel::verma_quotient(ctx.clone(), character.build(ctx.group())?, *top)
            }
            ModuleSpec::Regular => Ok(ModuleModel::regular(ctx.clone(), truncation)),
            ModuleSpec::Laurent { p } => {
                let (datum, _) = CyclicDatum::from_context(ctx)?;
                let twist = TwistP::parse(p, datum.m())?;
                ModuleModel::laurent(Arc::new(LaurentModule::new(datum, twist)?))
            }
            ModuleSpec::Tensor { left, right, right_rank } => {
                let weyl = AlgebraContext::named(&format!("trivial:{right_rank}"), &[])?;
                ModuleModel::external_tensor(left.build(ctx, truncation)?, right.build(&weyl, truncation)?)
            }
            ModuleSpec::Sum { parts } => {
                ModuleModel::direct_sum(parts.iter().map(|p| p.build(ctx, truncation)).collect::<Result<_>>()?)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupOp {
    Info,
    Reflections,
    Parabolics,
    Characters,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlgebraOp {
    Normal,
    Multiply,
    Associativity,
    Fourier,
    Opposite,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModuleOp {
    Hilbert,
    Gk,
    Holonomic,
    Relations,
    Singular,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rank1Op {
    Reducible,
    Reduce,
    Ladders,
    Cycle,
    Pushforward,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParamsOp {
    Regular,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegularityMode {
    Degrees,
    Probe,
    Auto,
}

fn default_p() -> String {
    "0".into()
}

fn default_mode() -> RegularityMode {
    RegularityMode::Auto
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case", deny_unknown_fields)]
pub enum JobSpec {
    Group {
        group: GroupRef,
        op: GroupOp,
    },
    Algebra {
        group: GroupRef,
        #[serde(default)]
        c: Vec<String>,
        op: AlgebraOp,
        #[serde(default)]
        expr: Option<String>,
        #[serde(default)]
        rhs: Option<String>,
        #[serde(default)]
        samples: Option<usize>,
        #[serde(default)]
        seed: Option<u64>,
    },
    Module {
        group: GroupRef,
        #[serde(default)]
        c: Vec<String>,
        module: ModuleSpec,
        op: ModuleOp,
        #[serde(default)]
        window: Option<usize>,
        #[serde(default)]
        truncation: Option<u32>,
        #[serde(default)]
        degree: Option<u32>,
        #[serde(default)]
        bound: Option<u32>,
    },
    Rank1 {
        m: u32,
        c: Vec<String>,
        #[serde(default = "default_p")]
        p: String,
        op: Rank1Op,
        #[serde(default)]
        bound: Option<i64>,
        #[serde(default)]
        window: Option<usize>,
    },
    Params {
        op: ParamsOp,
        #[serde(default = "default_mode")]
        mode: RegularityMode,
        #[serde(default)]
        degrees: Option<Vec<u32>>,
        #[serde(default)]
        group: Option<GroupRef>,
        #[serde(default)]
        m: Option<u32>,
        #[serde(default)]
        c: Vec<String>,
        #[serde(default)]
        bound: Option<u32>,
    },
}

impl JobSpec {
    pub fn from_json(src: &str) -> Result<Self> {
        serde_json::from_str(src).map_err(|e| Error::InvalidInput(format!("job: {e}")))
    }

    pub fn command(&self) -> &'static str {
        match self {
            JobSpec::Group { .. } => "group",
            JobSpec::Algebra { .. } => "algebra",
            JobSpec::Module { .. } => "module",
            JobSpec::Rank1 { .. } => "rank1",
            JobSpec::Params { .. } => "params",
        }
    }

    fn op_name(&self) -> String {
        let v = match self {
            JobSpec::Group { op, .. } => serde_json::to_value(op),
            JobSpec::Algebra { op, .. } => serde_json::to_value(op),
            JobSpec::Module { op, .. } => serde_json::to_value(op),
            JobSpec::Rank1 { op, .. } => serde_json::to_value(op),
            JobSpec::Params { op, .. } => serde_json::to_value(op),
        };
        v.ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()
    }
}

/// Outcome of a job: a result tree or an error with its exit code.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    pub op: String,
    pub outcome: std::result::Result<Value, Error>,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        match &self.outcome {
            Ok(_) => 0,
            Err(e) => e.exit_code(),
        }
    }

    pub fn to_value(&self) -> Value {
        let mut v = json!({ "schema": SCHEMA, "command": self.command, "op": self.op });
        match &self.outcome {
            Ok(r) => v["result"] = r.clone(),
            Err(e) => {
                v["error"] = json!({ "kind": error_kind(e), "message": e.to_string() });
                v["exit_code"] = json!(e.exit_code());
            }
        }
        v
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("report serializes") + "\n"
    }

    /// `path: value` lines, one per leaf.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        flatten_text("", &self.to_value(), &mut out);
        out
    }
}

fn flatten_text(prefix: &str, v: &Value, out: &mut String) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten_text(&p, x, out);
            }
        }
        Value::Array(items) if items.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in items.iter().enumerate() {
                flatten_text(&format!("{prefix}[{i}]"), x, out);
            }
        }
        Value::String(s) => out.push_str(&format!("{prefix}: {s}\n")),
        _ => out.push_str(&format!("{prefix}: {v}\n")),
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::DivisionByZero => "division-by-zero",
        Error::OrderMismatch { .. } => "order-mismatch",
        Error::UnsupportedOrder { .. } => "unsupported-order",
        Error::BadEmbedding { .. } => "bad-embedding",
        Error::Parse { .. } => "parse",
        Error::InvalidInput(_) => "invalid-input",
        Error::ContextMismatch(_) => "context-mismatch",
        Error::Budget(_) => "budget",
        Error::ZeroModule => "zero-module",
        Error::RegularityRequired(_) => "regularity-required",
        Error::InvalidTwist(_) => "invalid-twist",
        Error::Inconsistency(_) => "inconsistency",
        Error::Falsification(_) => "falsification",
    }
}

pub fn run_job(job: &JobSpec) -> Report {
    Report {
        command: job.command().to_string(),
        op: job.op_name(),
        outcome: dispatch(job),
    }
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

/// Empty: c = 0; one value: constant; otherwise one value per class.
pub fn build_context(group: &GroupRef, c: &[String]) -> Result<Arc<AlgebraContext>> {
    let group = group.build()?;
    let n = group.field_order();
    let classes = reflection_class_count(&group.find_reflections());
    let values = c.iter().map(|s| CycloNumber::parse_in(s, n)).collect::<Result<Vec<_>>>()?;
    let parameter = match values.len() {
        0 => Parameter::constant(CycloNumber::zero(n), classes),
        1 => Parameter::constant(values[0].clone(), classes),
        _ => Parameter::new(values),
    };
    AlgebraContext::new(group, parameter)
}

fn element_json(ctx: &AlgebraContext, e: &PBWElement) -> Value {
    json!({ "text": ctx.format_element(e), "terms": to_json(&e.to_records()) })
}

fn vector_json(v: &Vector) -> Value {
    Value::Array(
        v.iter()
            .map(|(l, c)| json!({ "label": l, "coeff": c.to_string() }))
            .collect(),
    )
}

fn need<'a>(v: &'a Option<String>, name: &str) -> Result<&'a str> {
    v.as_deref().ok_or_else(|| Error::InvalidInput(format!("missing field '{name}'")))
}

fn dispatch(job: &JobSpec) -> Result<Value> {
    match job {
        JobSpec::Group { group, op } => group_job(&*group.build()?, *op),
        JobSpec::Algebra { group, c, op, expr, rhs, samples, seed } => {
            let ctx = build_context(group, c)?;
            algebra_job(&ctx, *op, expr, rhs, *samples, *seed)
        }
        JobSpec::Module { group, c, module, op, window, truncation, degree, bound } => {
            let ctx = build_context(group, c)?;
            let model = module.build(&ctx, truncation.unwrap_or(DEFAULT_TRUNCATION))?;
            module_job(&model, module, *op, window.unwrap_or(DEFAULT_WINDOW), *degree, *bound)
        }
        JobSpec::Rank1 { m, c, p, op, bound, window } => {
            let datum = CyclicDatum::parse(*m, c)?;
            let twist = TwistP::parse(p, *m)?;
            rank1_job(&datum, &twist, *op, *bound, window.unwrap_or(DEFAULT_WINDOW))
        }
        JobSpec::Params { op: ParamsOp::Regular, mode, degrees, group, m, c, bound } => {
            params_job(*mode, degrees, group, *m, c, bound.unwrap_or(DEFAULT_PROBE_BOUND))
        }
    }
}

fn group_job(group: &ReflectionGroup, op: GroupOp) -> Result<Value> {
    let reflections = group.find_reflections();
    Ok(match op {
        GroupOp::Info => json!({
            "name": group.spec().name,
            "order": group.order(),
            "rank": group.rank(),
            "cyclotomic_order": group.field_order(),
            "reflections": reflections.len(),
            "reflection_classes": reflection_class_count(&reflections),
            "degrees": group.spec().degrees,
        }),
        GroupOp::Reflections => Value::Array(
            reflections
                .iter()
                .map(|r| {
                    json!({
                        "element": r.element,
                        "class_id": r.class_id,
                        "alpha": r.alpha.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                        "alpha_check": r.alpha_check.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                        "lambda": r.lambda.to_string(),
                    })
                })
                .collect(),
        ),
        GroupOp::Parabolics => to_json(&group.parabolic_classes()?),
        GroupOp::Characters => Value::Array(
            group
                .linear_characters()
                .iter()
                .map(|ch| json!({ "generator_values": ch.generator_labels(group), "trivial": ch.is_trivial() }))
                .collect(),
        ),
    })
}

fn algebra_job(
    ctx: &Arc<AlgebraContext>,
    op: AlgebraOp,
    expr: &Option<String>,
    rhs: &Option<String>,
    samples: Option<usize>,
    seed: Option<u64>,
) -> Result<Value> {
    match op {
        AlgebraOp::Normal => {
            let e = parse_expression(need(expr, "expr")?, ctx)?;
            Ok(element_json(ctx, &e))
        }
        AlgebraOp::Multiply => {
            let a = parse_expression(need(expr, "expr")?, ctx)?;
            let b = parse_expression(need(rhs, "rhs")?, ctx)?;
            Ok(element_json(ctx, &ctx.multiply(&a, &b)?))
        }
        AlgebraOp::Associativity => {
            let r = ctx.verify_associativity(samples.unwrap_or(DEFAULT_ASSOCIATIVITY_SAMPLES), seed.unwrap_or(0));
            Ok(json!({
                "samples": r.samples,
                "seed": r.seed,
                "passed": r.passed(),
                "failures": to_json(&r.failures),
            }))
        }
        AlgebraOp::Fourier => {
            let e = parse_expression(need(expr, "expr")?, ctx)?;
            let (dual, image) = ctx.fourier_image(&e)?;
            Ok(json!({ "image": element_json(&dual, &image), "dual": true }))
        }
        AlgebraOp::Opposite => {
            let e = parse_expression(need(expr, "expr")?, ctx)?;
            let (opp, image) = ctx.opposite_image(&e)?;
            Ok(json!({
                "image": element_json(&opp, &image),
                "parameter": opp.parameter().values().iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            }))
        }
    }
}

fn module_job(
    model: &ModuleModel,
    spec: &ModuleSpec,
    op: ModuleOp,
    window: usize,
    degree: Option<u32>,
    bound: Option<u32>,
) -> Result<Value> {
    match op {
        ModuleOp::Hilbert => {
            let h = bernstein_filtration_dims(model, &model.default_generators(), window)?;
            Ok(json!({ "filtration": to_json(&h.kind), "dims": h.dims, "window": window }))
        }
        ModuleOp::Gk => {
            let h = bernstein_filtration_dims(model, &model.default_generators(), window)?;
            let gk = gk_dimension(&h)?;
            let hol = holonomicity(model, window)?;
            Ok(json!({
                "gk": gk.gk_dim,
                "report": to_json(&gk),
                "dims": h.dims,
                "holonomic": hol.holonomic,
                "holonomic_reason": hol.reason,
                "regularity": to_json(&regularity_of_context(model.context())),
            }))
        }
        ModuleOp::Holonomic => Ok(to_json(&holonomicity(model, window)?)),
        ModuleOp::Relations => {
            let r = model.check_relations(degree.unwrap_or(8))?;
            Ok(json!({ "checked": r.checked, "failures": r.failures, "degree": degree.unwrap_or(8) }))
        }
        ModuleOp::Singular => {
            let ModuleSpec::Verma { character } = spec else {
                return Err(Error::InvalidInput("singular-vector search needs a Verma module".into()));
            };
            let ctx = model.context();
            let bound = bound.unwrap_or(DEFAULT_PROBE_BOUND);
            let found = find_singular_vectors(ctx, &character.build(ctx.group())?, bound)?;
            Ok(json!({
                "bound": bound,
                "singular_vectors": found
                    .iter()
                    .map(|s| json!({
                        "degree": s.degree,
                        "vector": vector_json(&s.vector),
                        "character": s.character.as_ref().map(|ch| ch.generator_labels(ctx.group())),
                    }))
                    .collect::<Vec<_>>(),
            }))
        }
    }
}

fn rank1_job(datum: &CyclicDatum, twist: &TwistP, op: Rank1Op, bound: Option<i64>, window: usize) -> Result<Value> {
    match op {
        Rank1Op::Reducible => Ok(to_json(&is_reducible(datum, twist)?)),
        Rank1Op::Reduce => {
            let r = canonical_twist_reduction(datum, twist)?;
            Ok(json!({
                "k": r.k,
                "shift": r.shift,
                "reduced_p": format_laurent(r.reduced.terms()),
                "ladder": r.ladder,
            }))
        }
        Rank1Op::Ladders => {
            let module = LaurentModule::new(datum.clone(), twist.clone())?;
            Ok(to_json(&find_stable_ladders(&module, bound.unwrap_or(DEFAULT_LADDER_BOUND))?))
        }
        Rank1Op::Cycle => {
            let module = LaurentModule::new(datum.clone(), twist.clone())?;
            let c = singular_cycle_detailed(&module, None, None)?;
            Ok(json!({
                "cycle": to_json(&c.cycle.components),
                "d": c.d,
                "graded_dims": c.graded_dims,
                "stable_from": c.stable_from,
                "checked_up_to": c.checked_up_to,
                "generator_exponent": module.generator_exponent(),
            }))
        }
        Rank1Op::Pushforward => Ok(to_json(&check_pushforward_holonomic_with(datum, twist, window)?)),
    }
}

fn params_job(
    mode: RegularityMode,
    degrees: &Option<Vec<u32>>,
    group: &Option<GroupRef>,
    m: Option<u32>,
    c: &[String],
    bound: u32,
) -> Result<Value> {
    let verdict = match (mode, degrees, group, m) {
        (RegularityMode::Degrees | RegularityMode::Auto, Some(deg), _, _) => {
            let [value] = c else {
                return Err(Error::InvalidInput("the degree criterion needs one constant rational c".into()));
            };
            let q = CycloNumber::parse(value)?
                .as_rational()
                .ok_or_else(|| Error::InvalidInput("the degree criterion needs a rational c".into()))?;
            is_regular_by_degrees(deg, &q)
        }
        (RegularityMode::Probe | RegularityMode::Auto, _, _, Some(m)) => regularity_probe_rank1(&CyclicDatum::parse(m, c)?, bound)?,
        (RegularityMode::Probe, _, Some(g), None) => regularity_probe(&build_context(g, c)?, bound)?,
        (RegularityMode::Auto, _, Some(g), None) => regularity_of_context(&build_context(g, c)?),
        _ => return Err(Error::InvalidInput("give degrees, m, or a group for the regularity test".into())),
    };
    let mut v = to_json(&verdict);
    v["regular"] = json!(verdict.is_regular());
    Ok(v)
}
