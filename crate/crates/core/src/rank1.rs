//! Rank one: H_c(Z/m, C) and its modules C[x^{±1}] with a twisted Dunkl
//! action
//!
//!   y = ∂_x + p(x) + Σ_i 2c_i / ((1 − λ^i) x) · (1 − s_i),
//!
//! where s_i acts on h by λ^{-i}, hence on x^j by λ^{ij}. With these
//! conventions [y, x] = 1 + 2 Σ_i c_i s_i, so the module lives over the
//! algebra whose parameter on the class of s_i is −c_i.

use std::collections::{BTreeMap, VecDeque};
use std::ops::Add;
use std::sync::{Arc, OnceLock};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::{GroupSpec, ReflectionGroup};
use crate::linalg::{Echelon, Matrix};
use crate::params::{regularity_probe_rank1, RegularityVerdict, DEFAULT_PROBE_BOUND};
use crate::parse::{format_laurent, parse_laurent, LaurentPoly};
use crate::pbw::{AlgebraContext, Parameter};
use crate::representations::{bernstein_filtration_dims, gk_dimension, ModuleKind, ModuleModel, DEFAULT_WINDOW};
use crate::scalars::CycloNumber;

pub const DEFAULT_LAURENT_WINDOW: (i64, i64) = (-40, 40);
const GENERATION_MARGIN: i64 = 8;

/// The data (m, λ, c_1, …, c_{m-1}) with λ = ζ_m.
#[derive(Clone, Debug)]
pub struct CyclicDatum {
    m: u32,
    lambda: CycloNumber,
    c: Vec<CycloNumber>,
    kappa: Vec<CycloNumber>,
    ctx: OnceLock<Arc<AlgebraContext>>,
}

impl PartialEq for CyclicDatum {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && self.c == other.c
    }
}

impl CyclicDatum {
    pub fn new(m: u32, c: Vec<CycloNumber>) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidInput("m must be at least 2".into()));
        }
        if c.len() != (m - 1) as usize {
            return Err(Error::InvalidInput(format!("expected {} parameter values, got {}", m - 1, c.len())));
        }
        let c = c
            .iter()
            .map(|v| {
                v.reduce_order()
                    .embed(m)
                    .map_err(|_| Error::InvalidInput(format!("parameter {v} does not lie in Q(z{m})")))
            })
            .collect::<Result<Vec<_>>>()?;
        let lambda = CycloNumber::root(m, 1)?;
        let two = CycloNumber::from_int(2, m);
        let kappa = (1..m as i64)
            .map(|i| {
                let denom = &CycloNumber::one(m) - &lambda.pow(i).unwrap();
                &(&two * &c[(i - 1) as usize]) * &denom.inv().unwrap()
            })
            .collect();
        Ok(CyclicDatum {
            m,
            lambda,
            c,
            kappa,
            ctx: OnceLock::new(),
        })
    }

    pub fn parse(m: u32, values: &[String]) -> Result<Self> {
        let c = values
            .iter()
            .map(|s| CycloNumber::parse_in(s, m))
            .collect::<Result<Vec<_>>>()?;
        Self::new(m, c)
    }

    /// The same value on every reflection.
    pub fn constant(m: u32, c: CycloNumber) -> Result<Self> {
        Self::new(m, vec![c; (m - 1) as usize])
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn lambda(&self) -> &CycloNumber {
        &self.lambda
    }

    pub fn c(&self) -> &[CycloNumber] {
        &self.c
    }

    /// κ_i = 2c_i / (1 − λ^i).
    pub fn kappa(&self) -> &[CycloNumber] {
        &self.kappa
    }

    pub fn lambda_pow(&self, k: i64) -> CycloNumber {
        self.lambda.pow(k.rem_euclid(self.m as i64)).unwrap()
    }

    /// Σ_i κ_i (1 − λ^{it}).
    pub fn reflection_sum(&self, t: i64) -> CycloNumber {
        let one = CycloNumber::one(self.m);
        self.kappa
            .iter()
            .enumerate()
            .fold(CycloNumber::zero(self.m), |acc, (i, k)| {
                &acc + &(k * &(&one - &self.lambda_pow((i as i64 + 1) * t)))
            })
    }

    /// Parameter of the algebra the Laurent modules are modules over.
    pub fn algebra_parameter(&self) -> Parameter {
        Parameter::new(self.c.iter().map(|v| -v).collect())
    }

    /// H(Z/m, C) with group element i equal to s_i (acting on h by λ^{-i}).
    pub fn algebra_context(&self) -> Result<Arc<AlgebraContext>> {
        if let Some(ctx) = self.ctx.get() {
            return Ok(ctx.clone());
        }
        let gen = Matrix::from_rows(vec![vec![self.lambda_pow(-1)]], self.m)?;
        let mut spec = GroupSpec::new(self.m, 1, vec![gen])?;
        spec.name = format!("rank1:{}", self.m);
        spec.degrees = Some(vec![self.m]);
        let group = Arc::new(ReflectionGroup::close(spec)?);
        for (i, r) in group.find_reflections().iter().enumerate() {
            if r.element != i + 1 || r.class_id != i {
                return Err(Error::Inconsistency("unexpected reflection indexing in Z/m".into()));
            }
        }
        let ctx = AlgebraContext::new(group, self.algebra_parameter())?;
        Ok(self.ctx.get_or_init(|| ctx).clone())
    }

    /// Recover the datum from a rank-1 algebra context, returning also the
    /// group index of each s_i (position i − 1).
    pub fn from_context(ctx: &AlgebraContext) -> Result<(CyclicDatum, Vec<usize>)> {
        if ctx.rank() != 1 {
            return Err(Error::InvalidInput("expected a rank-1 algebra".into()));
        }
        let group = ctx.group();
        let m = group.order() as u32;
        let n = ctx.order();
        if m < 2 || n % m != 0 {
            return Err(Error::InvalidInput("expected a nontrivial cyclic group containing its own roots of unity".into()));
        }
        let lambda = CycloNumber::root(m, 1)?.embed(n)?;
        let mut s_index = vec![usize::MAX; (m - 1) as usize];
        let mut c = vec![CycloNumber::zero(m); (m - 1) as usize];
        for r in ctx.reflections() {
            let mu = group.element(r.element).get(0, 0);
            let i = (1..m as i64)
                .find(|&i| lambda.pow(-i).map(|v| &v == mu).unwrap_or(false))
                .ok_or_else(|| Error::InvalidInput("group element is not a power of ζ_m".into()))?;
            s_index[(i - 1) as usize] = r.element;
            let value = ctx.parameter().value(r.class_id);
            c[(i - 1) as usize] = -value
                .reduce_order()
                .embed(m)
                .map_err(|_| Error::InvalidInput("parameter does not lie in Q(ζ_m)".into()))?;
        }
        Ok((CyclicDatum::new(m, c)?, s_index))
    }
}

/// The twist p ∈ C[x^{±1}].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistP {
    terms: LaurentPoly,
}

impl TwistP {
    pub fn new(terms: LaurentPoly) -> Self {
        TwistP {
            terms: terms.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn zero() -> Self {
        TwistP { terms: LaurentPoly::new() }
    }

    pub fn parse(src: &str, m: u32) -> Result<Self> {
        Ok(Self::new(parse_laurent(src, m)?))
    }

    pub fn terms(&self) -> &LaurentPoly {
        &self.terms
    }

    pub fn xp(&self) -> LaurentPoly {
        self.terms.iter().map(|(e, c)| (e + 1, c.clone())).collect()
    }

    /// x·p must be W-invariant, i.e. lie in C[x^{±m}].
    pub fn validate(&self, m: u32) -> Result<()> {
        for (e, c) in &self.terms {
            if (e + 1).rem_euclid(m as i64) != 0 {
                return Err(Error::InvalidTwist(format!(
                    "x*p has a term x^{} not in C[x^(±{m})]",
                    e + 1
                )));
            }
            if c.order() != m {
                return Err(Error::InvalidTwist(format!("coefficients must lie in Q(z{m})")));
            }
        }
        Ok(())
    }

    /// Constant term of x·p.
    pub fn residue(&self, m: u32) -> CycloNumber {
        self.terms.get(&-1).cloned().unwrap_or_else(|| CycloNumber::zero(m))
    }

    /// Order of the pole of p at 0 (0 when p is regular there).
    pub fn pole_order(&self) -> u32 {
        self.terms.keys().next().map_or(0, |&e| (-e).max(0) as u32)
    }

    /// Largest positive exponent of p (0 when there is none).
    pub fn top_exponent(&self) -> u32 {
        self.terms.keys().next_back().map_or(0, |&e| e.max(0) as u32)
    }

    pub fn lowest_exponent(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }
}

impl std::fmt::Display for TwistP {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&format_laurent(&self.terms))
    }
}

/// C[x^{±1}] with the twisted Dunkl action, materialized on the exponent
/// window [lo, hi] and presented with generator x^{-k}.
#[derive(Clone, Debug)]
pub struct LaurentModule {
    datum: CyclicDatum,
    twist: TwistP,
    k: i64,
    window: (i64, i64),
    generation_verified: bool,
}

impl LaurentModule {
    /// Default window [−40, 40], widened as needed for `DEFAULT_WINDOW`
    /// Bernstein steps from the generator.
    pub fn new(datum: CyclicDatum, twist: TwistP) -> Result<Self> {
        Self::with_reach(datum, twist, DEFAULT_WINDOW)
    }

    /// Choose k (starting at max(1, pole order) + 4) so that x^{-k} provably
    /// generates within the window, sizing the window for `steps` Bernstein
    /// steps from the generator.
    pub fn with_reach(datum: CyclicDatum, twist: TwistP, steps: usize) -> Result<Self> {
        twist.validate(datum.m)?;
        let down = twist.pole_order().max(1) as i64;
        let up = twist.top_exponent().max(1) as i64;
        let k0 = down + 4;
        let steps = steps as i64;
        let window_for = |k: i64| {
            let lo = (-k - (steps * down).max(GENERATION_MARGIN) - down - 2).min(DEFAULT_LAURENT_WINDOW.0);
            let hi = (-k + steps * up + up + 2).max(GENERATION_MARGIN + up + 2).max(DEFAULT_LAURENT_WINDOW.1);
            (lo, hi)
        };
        let last = k0 + 4 * datum.m as i64 + 40;
        for k in k0..=last {
            let (lo, hi) = window_for(k);
            let module = Self::with_window(datum.clone(), twist.clone(), k, lo, hi)?;
            if module.generation_verified {
                return Ok(module);
            }
        }
        let (lo, hi) = window_for(k0);
        Self::with_window(datum, twist, k0, lo, hi)
    }

    /// Fixed generator exponent and window; generation is checked, not assumed.
    pub fn with_window(datum: CyclicDatum, twist: TwistP, k: i64, lo: i64, hi: i64) -> Result<Self> {
        twist.validate(datum.m)?;
        if lo > -k || hi < -k {
            return Err(Error::InvalidInput("the generator lies outside the window".into()));
        }
        let mut module = LaurentModule {
            datum,
            twist,
            k,
            window: (lo, hi),
            generation_verified: false,
        };
        module.generation_verified = module.verify_generation();
        Ok(module)
    }

    pub fn datum(&self) -> &CyclicDatum {
        &self.datum
    }

    pub fn twist(&self) -> &TwistP {
        &self.twist
    }

    pub fn generator_exponent(&self) -> i64 {
        self.k
    }

    pub fn window(&self) -> (i64, i64) {
        self.window
    }

    pub fn generation_verified(&self) -> bool {
        self.generation_verified
    }

    pub fn check_exponent(&self, j: i64) -> Result<()> {
        if j < self.window.0 || j > self.window.1 {
            return Err(Error::Budget(format!(
                "exponent {j} leaves the window [{}, {}]",
                self.window.0, self.window.1
            )));
        }
        Ok(())
    }

    /// y · x^j.
    pub fn act_y_exponent(&self, j: i64) -> Result<LaurentPoly> {
        let m = self.datum.m;
        let mut out = LaurentPoly::new();
        let lead = &CycloNumber::from_int(j, m) + &self.datum.reflection_sum(j);
        if !lead.is_zero() {
            out.insert(j - 1, lead);
        }
        for (e, c) in &self.twist.terms {
            let slot = out.entry(j + e).or_insert_with(|| CycloNumber::zero(m));
            *slot = &*slot + c;
        }
        out.retain(|_, c| !c.is_zero());
        for &e in out.keys() {
            self.check_exponent(e)?;
        }
        Ok(out)
    }

    /// y · v for a Laurent polynomial v.
    pub fn laurent_act_y(&self, v: &LaurentPoly) -> Result<LaurentPoly> {
        let mut out = LaurentPoly::new();
        for (j, c) in v {
            self.check_exponent(*j)?;
            for (e, d) in self.act_y_exponent(*j)? {
                let slot = out.entry(e).or_insert_with(|| CycloNumber::zero(self.datum.m));
                *slot = &*slot + &(c * &d);
            }
        }
        out.retain(|_, c| !c.is_zero());
        Ok(out)
    }

    /// Scalar by which group element `g` (= s_g) acts on x^j.
    pub fn group_scalar(&self, g: usize, j: i64) -> CycloNumber {
        self.datum.lambda_pow(g as i64 * j)
    }

    /// Closure of x^{-k} under x and y inside the window contains every
    /// x^j with j in [−k − 8, 8].
    fn verify_generation(&self) -> bool {
        let (lo, hi) = self.window;
        let target_lo = -self.k - GENERATION_MARGIN;
        let target_hi = GENERATION_MARGIN;
        if target_lo < lo || target_hi > hi {
            return false;
        }
        let m = self.datum.m;
        let mut span: Echelon<i64> = Echelon::new(m);
        let mut queue = VecDeque::from([BTreeMap::from([(-self.k, CycloNumber::one(m))])]);
        while let Some(v) = queue.pop_front() {
            let Some(row) = span.insert(&v) else { continue };
            if row.keys().next_back().is_some_and(|&j| j < hi) {
                queue.push_back(row.iter().map(|(j, c)| (j + 1, c.clone())).collect());
            }
            if let Ok(w) = self.laurent_act_y(&row) {
                queue.push_back(w);
            }
        }
        (target_lo..=target_hi).all(|j| span.contains(&BTreeMap::from([(j, CycloNumber::one(m))])))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReducibilityReport {
    pub reducible: bool,
    /// Constant term of x·p.
    pub constant_term: String,
    pub negative_terms: bool,
    /// k with constant term m·k, when reducible.
    pub k: Option<i64>,
    /// The invariant ladder t = −m·k, when reducible.
    pub ladder: Option<i64>,
}

/// Reducible iff x·p has constant term in mZ and no terms of negative degree.
pub fn is_reducible(datum: &CyclicDatum, twist: &TwistP) -> Result<ReducibilityReport> {
    twist.validate(datum.m)?;
    let a = twist.residue(datum.m);
    let negative_terms = twist.pole_order() >= 2;
    let m = datum.m as i64;
    let k = a.as_integer().filter(|v| v % m == 0).map(|v| v / m);
    let reducible = !negative_terms && k.is_some();
    Ok(ReducibilityReport {
        reducible,
        constant_term: a.to_string(),
        negative_terms,
        k: if reducible { k } else { None },
        ladder: if reducible { k.map(|k| -m * k) } else { None },
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistReduction {
    pub k: i64,
    /// Basis change x^i ↦ x^{i + mk}.
    pub shift: i64,
    /// Scalar part p − mk x^{-1} of the operator in the new basis.
    pub reduced: TwistP,
    pub ladder: i64,
}

/// Rewrites a reducible module in the basis e_i = x^{i − mk}, after which
/// the constant term of x·p is 0 and C[x] is a submodule.
pub fn canonical_twist_reduction(datum: &CyclicDatum, twist: &TwistP) -> Result<TwistReduction> {
    let report = is_reducible(datum, twist)?;
    let k = match (report.reducible, report.k) {
        (true, Some(k)) => k,
        _ => {
            return Err(Error::InvalidInput(
                "twist is irreducible: constant term of x*p is not in mZ or x*p has negative terms".into(),
            ))
        }
    };
    let m = datum.m as i64;
    let mut terms = twist.terms.clone();
    let slot = terms.entry(-1).or_insert_with(|| CycloNumber::zero(datum.m));
    *slot = &*slot - &CycloNumber::from_int(m * k, datum.m);
    Ok(TwistReduction {
        k,
        shift: m * k,
        reduced: TwistP::new(terms),
        ladder: -m * k,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LadderSearch {
    pub ladders: Vec<i64>,
    pub bound: i64,
}

fn ladder_is_stable(module: &LaurentModule, t: i64) -> Result<bool> {
    let e_min = module.twist.lowest_exponent().unwrap_or(0);
    let last = (t + 1).max(t - e_min);
    for j in t..=last {
        let image = module.act_y_exponent(j).map_err(|_| {
            Error::Budget(format!("window too small to test the ladder at {t}"))
        })?;
        if image.keys().any(|&e| e < t) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All t with |t| ≤ bound such that span{x^j : j ≥ t} is y-stable, by
/// direct action on the boundary monomials.
pub fn find_stable_ladders(module: &LaurentModule, bound: i64) -> Result<LadderSearch> {
    let mut ladders = Vec::new();
    for t in -bound..=bound {
        if ladder_is_stable(module, t)? {
            ladders.push(t);
        }
    }
    Ok(LadderSearch { ladders, bound })
}

/// Components of the support of gr M in h × h*, with multiplicities.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SingularCycle {
    pub components: BTreeMap<String, u32>,
}

impl SingularCycle {
    pub fn new(zero_section: u32, zero_fiber: u32) -> Self {
        let mut components = BTreeMap::new();
        if zero_section > 0 {
            components.insert("zero_section".to_string(), zero_section);
        }
        if zero_fiber > 0 {
            components.insert("zero_fiber".to_string(), zero_fiber);
        }
        SingularCycle { components }
    }

    pub fn zero_section(&self) -> u32 {
        self.components.get("zero_section").copied().unwrap_or(0)
    }

    pub fn zero_fiber(&self) -> u32 {
        self.components.get("zero_fiber").copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }
}

impl Add for SingularCycle {
    type Output = SingularCycle;
    fn add(self, rhs: SingularCycle) -> SingularCycle {
        SingularCycle::new(self.zero_section() + rhs.zero_section(), self.zero_fiber() + rhs.zero_fiber())
    }
}

/// Details of the filtration F_i = x^{-k-di} C[x] used for the cycle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleComputation {
    pub cycle: SingularCycle,
    pub d: u32,
    pub graded_dims: Vec<usize>,
    /// First index of the range where ξ : Q_i → Q_{i+1} is an isomorphism.
    pub stable_from: usize,
    pub checked_up_to: usize,
}

pub fn singular_cycle(module: &LaurentModule) -> Result<SingularCycle> {
    Ok(singular_cycle_detailed(module, None, None)?.cycle)
}

/// Cycle of the subquotient L_lower / L_upper, where L_t = span{x^j : j ≥ t},
/// L_None on the left is the whole module and on the right is 0. Both bounds
/// must be stable ladders.
pub fn singular_cycle_detailed(module: &LaurentModule, lower: Option<i64>, upper: Option<i64>) -> Result<CycleComputation> {
    if !module.generation_verified {
        return Err(Error::InvalidInput("generation by x^-k is not verified on the window".into()));
    }
    for t in [lower, upper].into_iter().flatten() {
        if !ladder_is_stable(module, t)? {
            return Err(Error::InvalidInput(format!("span of x^j, j >= {t}, is not a submodule")));
        }
    }
    if let (Some(a), Some(b)) = (lower, upper) {
        if a >= b {
            return Ok(CycleComputation {
                cycle: SingularCycle::default(),
                d: 1,
                graded_dims: vec![],
                stable_from: 0,
                checked_up_to: 0,
            });
        }
    }
    let m = module.datum.m;
    let d = module.twist.pole_order().max(1) as i64;
    let k = module.k;
    let (lo, _) = module.window;
    let top = ((-k - lo) / d - 2).max(0) as usize;
    let in_range = |j: i64| lower.is_none_or(|a| j >= a) && upper.is_none_or(|b| j < b);
    let band = |i: usize| -> Vec<i64> {
        let start = -k - d * i as i64;
        (start..start + d).filter(|&j| in_range(j)).collect()
    };
    // Goodness: y F_i ⊂ F_{i+1}.
    for i in 1..=top {
        for j in band(i) {
            let image = module.act_y_exponent(j)?;
            if image.keys().any(|&e| e < -k - d * (i as i64 + 1)) {
                return Err(Error::Inconsistency(format!("filtration is not compatible with y at step {i}")));
            }
        }
    }
    let mut graded_dims = vec![];
    let mut iso = vec![];
    for i in 1..=top {
        let src = band(i);
        let dst = band(i + 1);
        graded_dims.push(src.len());
        if src.len() != dst.len() {
            iso.push(false);
            continue;
        }
        if src.is_empty() {
            iso.push(true);
            continue;
        }
        let mut mat = Matrix::zeros(dst.len(), src.len(), m);
        for (cj, &j) in src.iter().enumerate() {
            let image = module.act_y_exponent(j)?;
            for (ri, e) in dst.iter().enumerate() {
                if let Some(c) = image.get(e) {
                    mat.set(ri, cj, c.clone());
                }
            }
        }
        iso.push(mat.rank() == src.len());
    }
    let stable_run = iso.iter().rev().take_while(|&&b| b).count();
    if stable_run < 3 {
        return Err(Error::Budget("window too small to reach the stable range of the filtration".into()));
    }
    let stable_from = iso.len() - stable_run + 1;
    let fiber = *graded_dims.last().unwrap() as u32;
    let section = u32::from(upper.is_none());
    Ok(CycleComputation {
        cycle: SingularCycle::new(section, fiber),
        d: d as u32,
        graded_dims,
        stable_from,
        checked_up_to: top,
    })
}

/// Result of localizing a rank-1 module away from 0.
#[derive(Clone, Debug)]
pub enum Localized {
    Zero,
    Laurent(Arc<LaurentModule>),
}

/// Invert x. Verma modules give Laurent modules with p = q/x, modules
/// supported at the origin give 0, Laurent modules are unchanged.
pub fn localize_j0(v: &ModuleModel) -> Result<Localized> {
    let ctx = v.context();
    match v.kind() {
        ModuleKind::Zero | ModuleKind::VermaQuotient { .. } => Ok(Localized::Zero),
        ModuleKind::Laurent(m) => Ok(Localized::Laurent(m.clone())),
        ModuleKind::Verma { character } => {
            let (datum, s_index) = CyclicDatum::from_context(ctx)?;
            let n = ctx.order();
            let tau = character.value(s_index[0]);
            let m = datum.m as i64;
            let lambda = CycloNumber::root(datum.m, 1)?.embed(n)?;
            let e = (0..m)
                .find(|&e| lambda.pow(e).map(|v| &v == tau).unwrap_or(false))
                .ok_or_else(|| Error::InvalidInput("character value is not a power of ζ_m".into()))?;
            // x^j ⊗ τ ↦ x^{j+e}; matching the y-actions forces
            // p = q/x with q = −e − Σ κ_i (1 − λ^{ie}).
            let q = &CycloNumber::from_int(-e, datum.m) - &datum.reflection_sum(e);
            let twist = TwistP::new(LaurentPoly::from([(-1, q)]));
            Ok(Localized::Laurent(Arc::new(LaurentModule::new(datum, twist)?)))
        }
        _ => Err(Error::InvalidInput("localization is implemented for rank-1 Verma, finite and Laurent modules".into())),
    }
}

/// The Laurent module viewed as a module over H_c(Z/m, C).
pub fn extend_j0(module: &Arc<LaurentModule>) -> Result<ModuleModel> {
    ModuleModel::laurent(module.clone())
}

pub fn extend_j0_localized(l: &Localized, datum: &CyclicDatum) -> Result<ModuleModel> {
    match l {
        Localized::Zero => Ok(ModuleModel::zero(datum.algebra_context()?)),
        Localized::Laurent(m) => extend_j0(m),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PushforwardReport {
    pub regularity: RegularityVerdict,
    pub generator_exponent: i64,
    pub window: (i64, i64),
    pub dims: Vec<usize>,
    pub gk: u32,
    pub holonomic: bool,
}

/// GK dimension of the extension by poles of the Laurent module; GK ≠ 1 at
/// a regular parameter raises a falsification alarm.
pub fn check_pushforward_holonomic(datum: &CyclicDatum, twist: &TwistP) -> Result<PushforwardReport> {
    check_pushforward_holonomic_with(datum, twist, DEFAULT_WINDOW)
}

pub fn check_pushforward_holonomic_with(datum: &CyclicDatum, twist: &TwistP, steps: usize) -> Result<PushforwardReport> {
    twist.validate(datum.m)?;
    let regularity = regularity_probe_rank1(datum, DEFAULT_PROBE_BOUND)?;
    if !regularity.is_regular() {
        return Err(Error::RegularityRequired(format!(
            "c = ({}) is not regular",
            datum.c.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ")
        )));
    }
    let module = Arc::new(LaurentModule::with_reach(datum.clone(), twist.clone(), steps)?);
    if !module.generation_verified {
        return Err(Error::Budget("could not verify a generator x^-k within the window".into()));
    }
    let model = extend_j0(&module)?;
    let h = bernstein_filtration_dims(&model, &model.default_generators(), steps)?;
    let gk = gk_dimension(&h)?.gk_dim;
    if gk != 1 {
        return Err(Error::Falsification(format!(
            "extension of the Laurent module with p = {twist} has GK dimension {gk}, expected 1"
        )));
    }
    Ok(PushforwardReport {
        regularity,
        generator_exponent: module.k,
        window: module.window,
        dims: h.dims,
        gk,
        holonomic: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::Character;
    use crate::scalars::rat;

    fn datum(m: u32, c: (i64, i64)) -> CyclicDatum {
        CyclicDatum::constant(m, CycloNumber::from_rational(rat(c.0, c.1), m)).unwrap()
    }

    fn module(m: u32, c: (i64, i64), p: &str) -> LaurentModule {
        LaurentModule::new(datum(m, c), TwistP::parse(p, m).unwrap()).unwrap()
    }

    #[test]
    fn y_action_examples() {
        let z = module(2, (1, 3), "0");
        assert!(z.act_y_exponent(0).unwrap().is_empty());
        let v = z.act_y_exponent(-1).unwrap();
        assert_eq!(v, LaurentPoly::from([(-2, CycloNumber::from_rational(rat(-1, 3), 2))]));
        let px = module(2, (1, 3), "x");
        assert_eq!(px.act_y_exponent(0).unwrap(), LaurentPoly::from([(1, CycloNumber::one(2))]));
    }

    #[test]
    fn reducibility_examples() {
        let r = is_reducible(&datum(3, (1, 7)), &TwistP::zero()).unwrap();
        assert!(r.reducible);
        assert_eq!(r.k, Some(0));
        let d2 = datum(2, (1, 3));
        assert!(!is_reducible(&d2, &TwistP::parse("x^-1", 2).unwrap()).unwrap().reducible);
        let r = is_reducible(&d2, &TwistP::parse("2*x^-1 + x", 2).unwrap()).unwrap();
        assert!(r.reducible);
        assert_eq!((r.k, r.ladder), (Some(1), Some(-2)));
        assert!(matches!(is_reducible(&d2, &TwistP::parse("x^-2", 2).unwrap()), Err(Error::InvalidTwist(_))));
    }

    #[test]
    fn twist_reduction() {
        let d2 = datum(2, (1, 3));
        let red = canonical_twist_reduction(&d2, &TwistP::parse("2*x^-1", 2).unwrap()).unwrap();
        assert_eq!(red.k, 1);
        assert!(red.reduced.terms().is_empty());
        let d3 = datum(3, (1, 7));
        let red = canonical_twist_reduction(&d3, &TwistP::zero()).unwrap();
        assert_eq!((red.k, red.shift), (0, 0));
        assert!(canonical_twist_reduction(&d2, &TwistP::parse("x^-1", 2).unwrap()).is_err());
        // In the new basis C[x] is a submodule.
        let red = canonical_twist_reduction(&d2, &TwistP::parse("2*x^-1 + x", 2).unwrap()).unwrap();
        let m = LaurentModule::new(d2, red.reduced).unwrap();
        assert!(find_stable_ladders(&m, 6).unwrap().ladders.contains(&0));
    }

    #[test]
    fn ladder_examples() {
        assert_eq!(find_stable_ladders(&module(2, (1, 3), "0"), 6).unwrap().ladders, vec![0]);
        assert!(find_stable_ladders(&module(2, (1, 3), "x^-1"), 6).unwrap().ladders.is_empty());
        assert_eq!(find_stable_ladders(&module(2, (1, 3), "2*x^-1"), 6).unwrap().ladders, vec![-2]);
    }

    #[test]
    fn cycle_examples() {
        for (m, p) in [(2, "x"), (3, "0"), (2, "x^-1"), (2, "2*x^-1")] {
            let c = singular_cycle(&module(m, (1, 3), p)).unwrap();
            assert_eq!(c, SingularCycle::new(1, 1), "m = {m}, p = {p}");
        }
        assert!(SingularCycle::new(0, 0).is_empty());
    }

    #[test]
    fn irregular_twist_has_fiber_multiplicity_equal_to_pole_order() {
        let c = singular_cycle_detailed(&module(2, (1, 3), "x^-3"), None, None).unwrap();
        assert_eq!(c.d, 3);
        assert_eq!(c.cycle, SingularCycle::new(1, 3));
        let c = singular_cycle(&module(3, (1, 7), "x^-4")).unwrap();
        assert_eq!(c, SingularCycle::new(1, 4));
    }

    #[test]
    fn cycle_is_additive_along_ladders() {
        let m = module(2, (1, 3), "2*x^-1");
        let whole = singular_cycle(&m).unwrap();
        let sub = singular_cycle_detailed(&m, Some(-2), None).unwrap().cycle;
        let quot = singular_cycle_detailed(&m, None, Some(-2)).unwrap().cycle;
        assert_eq!(sub, SingularCycle::new(1, 0));
        assert_eq!(quot, SingularCycle::new(0, 1));
        assert_eq!(sub + quot, whole);
    }

    #[test]
    fn laurent_module_satisfies_algebra_relations() {
        for (m, c, p) in [(2, (1, 3), "x^-1 + x"), (3, (2, 5), "x^-4 + 1/2*x^-1"), (4, (1, 7), "x^3")] {
            let module = Arc::new(module(m, c, p));
            let model = extend_j0(&module).unwrap();
            let check = model.check_relations(6).unwrap();
            assert!(check.failures.is_empty(), "{:?}", check.failures);
        }
    }

    #[test]
    fn localization_of_vermas_matches_dunkl_display() {
        for m in [2u32, 3, 4] {
            let d = CyclicDatum::new(
                m,
                (1..m as i64).map(|i| CycloNumber::from_rational(rat(i, 7), m)).collect(),
            )
            .unwrap();
            let ctx = d.algebra_context().unwrap();
            for ch in ctx.group().linear_characters() {
                let verma = ModuleModel::verma(ctx.clone(), ch.clone(), 30).unwrap();
                let Localized::Laurent(lm) = localize_j0(&verma).unwrap() else { panic!() };
                let (_, s_index) = CyclicDatum::from_context(&ctx).unwrap();
                let e = (0..m as i64).find(|&e| &d.lambda_pow(e) == ch.value(s_index[0])).unwrap();
                for j in 0..12i64 {
                    let from_verma = verma.act_y(0, &vec![j]).unwrap();
                    let from_laurent = lm.act_y_exponent(j + e).unwrap();
                    let shifted: BTreeMap<i64, CycloNumber> =
                        from_verma.into_iter().map(|(l, c)| (l[0] + e, c)).collect();
                    assert_eq!(shifted, from_laurent, "m = {m}, e = {e}, j = {j}");
                }
                if ch.is_trivial() {
                    assert!(lm.twist().terms().is_empty());
                }
            }
        }
    }

    #[test]
    fn localization_and_extension() {
        let d = datum(2, (1, 3));
        let lm = Arc::new(LaurentModule::new(d.clone(), TwistP::parse("x^-1", 2).unwrap()).unwrap());
        let ext = extend_j0(&lm).unwrap();
        let Localized::Laurent(back) = localize_j0(&ext).unwrap() else { panic!() };
        for j in -10..10 {
            assert_eq!(back.act_y_exponent(j).unwrap(), lm.act_y_exponent(j).unwrap());
        }
        let half = CyclicDatum::constant(2, CycloNumber::from_rational(rat(-1, 2), 2)).unwrap();
        let ctx = half.algebra_context().unwrap();
        let fin = ModuleModel::verma_quotient(ctx.clone(), Character::trivial(ctx.group()), 1).unwrap();
        assert!(matches!(localize_j0(&fin).unwrap(), Localized::Zero));
        let zero = extend_j0_localized(&Localized::Zero, &d).unwrap();
        assert!(zero.default_generators().is_empty());
        let h = bernstein_filtration_dims(&ext, &ext.default_generators(), 10).unwrap();
        assert!(h.dims.windows(2).all(|w| w[1] - w[0] <= 2 && w[1] > w[0]));
    }

    #[test]
    fn pushforward_examples() {
        let d = datum(2, (1, 3));
        let r = check_pushforward_holonomic(&d, &TwistP::parse("x^-1", 2).unwrap()).unwrap();
        assert!(r.holonomic);
        assert_eq!(r.gk, 1);
        let half = datum(2, (1, 2));
        assert!(matches!(check_pushforward_holonomic(&half, &TwistP::zero()), Err(Error::RegularityRequired(_))));
        assert!(matches!(check_pushforward_holonomic(&d, &TwistP::parse("1", 2).unwrap()), Err(Error::InvalidTwist(_))));
    }
}
