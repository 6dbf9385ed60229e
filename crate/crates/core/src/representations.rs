//! Module models over H_c: Verma modules and their finite-dimensional
//! quotients, the regular module, rank-1 Laurent modules, external tensor
//! products with Weyl-algebra modules and direct sums. Provides Bernstein
//! Hilbert data, GK dimension, singular-vector search and holonomicity tests.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::Character;
use crate::linalg::{add_scaled, Echelon, Matrix, SparseVec};
use crate::params::{regularity_of_context, Regularity};
use crate::pbw::{AlgebraContext, FiltrationKind, PBWElement, Word};
use crate::rank1::LaurentModule;
use crate::scalars::{rat_int, CycloNumber, Rational};

pub const DEFAULT_TRUNCATION: u32 = 40;
pub const DEFAULT_WINDOW: usize = 24;
pub const DEFAULT_STABLE_RUN: usize = 6;

pub type Label = Vec<i64>;
pub type Vector = SparseVec<Label>;

#[derive(Clone, Debug)]
pub enum ModuleKind {
    Zero,
    /// C[h] ⊗ τ.
    Verma { character: Character },
    /// C[h] ⊗ τ modulo polynomials of degree ≥ `top`.
    VermaQuotient { character: Character, top: u32 },
    /// H_c acting on itself by left multiplication.
    Regular,
    /// C[x^{±1}] restricted to H_c(Z/m, C).
    Laurent(Arc<LaurentModule>),
    /// M ⊠ N with N a module over the Weyl algebra of the extra coordinates.
    Tensor {
        left: Box<ModuleModel>,
        right: Box<ModuleModel>,
        left_rank: usize,
    },
    Sum(Vec<ModuleModel>),
}

#[derive(Clone, Debug)]
pub struct ModuleModel {
    ctx: Arc<AlgebraContext>,
    kind: ModuleKind,
    truncation: u32,
}

fn labels_of_degree(rank: usize, d: u32) -> Vec<Vec<u32>> {
    if rank == 0 {
        return if d == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=d).rev() {
        for mut rest in labels_of_degree(rank - 1, d - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn to_u32(l: &[i64]) -> Vec<u32> {
    l.iter().map(|&v| v as u32).collect()
}

fn to_i64(l: &[u32]) -> Label {
    l.iter().map(|&v| v as i64).collect()
}

fn single(label: Label, c: CycloNumber) -> Vector {
    let mut v = Vector::new();
    if !c.is_zero() {
        v.insert(label, c);
    }
    v
}

fn same_context(a: &AlgebraContext, b: &AlgebraContext) -> bool {
    std::ptr::eq(a, b)
        || (a.group().spec() == b.group().spec()
            && a.parameter() == b.parameter()
            && a.is_fourier_dual() == b.is_fourier_dual())
}

impl ModuleModel {
    pub fn zero(ctx: Arc<AlgebraContext>) -> Self {
        ModuleModel {
            ctx,
            kind: ModuleKind::Zero,
            truncation: 0,
        }
    }

    pub fn verma(ctx: Arc<AlgebraContext>, character: Character, truncation: u32) -> Result<Self> {
        if character.values().len() != ctx.group().order() {
            return Err(Error::InvalidInput("character does not match the group".into()));
        }
        Character::from_values(ctx.group(), character.values().to_vec())?;
        Ok(ModuleModel {
            ctx,
            kind: ModuleKind::Verma { character },
            truncation,
        })
    }

    /// The quotient of a Verma module by all polynomials of degree ≥ `top`;
    /// valid exactly when every vector of degree `top` is singular.
    pub fn verma_quotient(ctx: Arc<AlgebraContext>, character: Character, top: u32) -> Result<Self> {
        if top == 0 {
            return Ok(Self::zero(ctx));
        }
        let verma = Self::verma(ctx.clone(), character.clone(), top + 1)?;
        for mono in labels_of_degree(ctx.rank(), top) {
            for i in 0..ctx.rank() {
                if !verma.act_y(i, &to_i64(&mono))?.is_empty() {
                    return Err(Error::InvalidInput(format!(
                        "degree-{top} polynomials do not span a submodule of this Verma module"
                    )));
                }
            }
        }
        Ok(ModuleModel {
            ctx,
            kind: ModuleKind::VermaQuotient { character, top },
            truncation: top,
        })
    }

    pub fn regular(ctx: Arc<AlgebraContext>, truncation: u32) -> Self {
        ModuleModel {
            ctx,
            kind: ModuleKind::Regular,
            truncation,
        }
    }

    pub fn laurent(module: Arc<LaurentModule>) -> Result<Self> {
        let ctx = module.datum().algebra_context()?;
        let (lo, hi) = module.window();
        Ok(ModuleModel {
            ctx,
            truncation: lo.unsigned_abs().max(hi.unsigned_abs()) as u32,
            kind: ModuleKind::Laurent(module),
        })
    }

    /// M ⊠ N over H_c(W, h1 ⊕ h2), where N lives over a trivial-group
    /// (Weyl algebra) context on h2.
    pub fn external_tensor(left: ModuleModel, right: ModuleModel) -> Result<Self> {
        if right.ctx.group().order() != 1 {
            return Err(Error::InvalidInput(
                "the second factor must be a module over the Weyl algebra (trivial group)".into(),
            ));
        }
        let left_rank = left.ctx.rank();
        let ctx = left.ctx.extend_trivially(right.ctx.rank())?;
        let truncation = left.truncation.max(right.truncation);
        Ok(ModuleModel {
            ctx,
            kind: ModuleKind::Tensor {
                left: Box::new(left),
                right: Box::new(right),
                left_rank,
            },
            truncation,
        })
    }

    pub fn direct_sum(parts: Vec<ModuleModel>) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| Error::InvalidInput("direct sum of no modules".into()))?;
        let ctx = first.ctx.clone();
        for p in &parts {
            if !same_context(&ctx, &p.ctx) {
                return Err(Error::ContextMismatch("summands live over different algebras".into()));
            }
        }
        let truncation = parts.iter().map(|p| p.truncation).max().unwrap_or(0);
        Ok(ModuleModel {
            ctx,
            kind: ModuleKind::Sum(parts),
            truncation,
        })
    }

    pub fn context(&self) -> &Arc<AlgebraContext> {
        &self.ctx
    }

    pub fn kind(&self) -> &ModuleKind {
        &self.kind
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn rank(&self) -> usize {
        self.ctx.rank()
    }

    fn order(&self) -> u32 {
        self.ctx.order()
    }

    pub fn is_finite_dimensional(&self) -> bool {
        match &self.kind {
            ModuleKind::Zero | ModuleKind::VermaQuotient { .. } => true,
            ModuleKind::Tensor { left, right, .. } => left.is_finite_dimensional() && right.is_finite_dimensional(),
            ModuleKind::Sum(parts) => parts.iter().all(|p| p.is_finite_dimensional()),
            _ => false,
        }
    }

    pub fn label_degree(&self, label: &Label) -> u32 {
        match &self.kind {
            ModuleKind::Zero => 0,
            ModuleKind::Verma { .. } | ModuleKind::VermaQuotient { .. } => label.iter().sum::<i64>() as u32,
            ModuleKind::Regular => label[1..].iter().sum::<i64>() as u32,
            ModuleKind::Laurent(_) => label[0].unsigned_abs() as u32,
            ModuleKind::Tensor { left, right, .. } => {
                let (l, r) = split_tensor(label);
                left.label_degree(&l) + right.label_degree(&r)
            }
            ModuleKind::Sum(parts) => parts[label[0] as usize].label_degree(&label[1..].to_vec()),
        }
    }

    fn guard(&self, label: &Label) -> Result<()> {
        if self.label_degree(label) > self.truncation {
            return Err(Error::Budget(format!(
                "basis vector {label:?} exceeds the truncation bound {}",
                self.truncation
            )));
        }
        Ok(())
    }

    /// Generators of the module: 1 ⊗ τ, the unit, x^{-k}, and their
    /// products or unions for composite modules.
    pub fn default_generators(&self) -> Vec<Vector> {
        let one = CycloNumber::one(self.order());
        match &self.kind {
            ModuleKind::Zero => vec![],
            ModuleKind::Verma { .. } | ModuleKind::VermaQuotient { .. } => {
                vec![single(vec![0; self.rank()], one)]
            }
            ModuleKind::Regular => vec![single(vec![0; 2 * self.rank() + 1], one)],
            ModuleKind::Laurent(m) => vec![single(vec![-m.generator_exponent()], one)],
            ModuleKind::Tensor { left, right, .. } => {
                let mut out = Vec::new();
                for a in left.default_generators() {
                    for b in right.default_generators() {
                        out.push(self.tensor_vectors(&a, &b));
                    }
                }
                out
            }
            ModuleKind::Sum(parts) => parts
                .iter()
                .enumerate()
                .flat_map(|(t, p)| p.default_generators().into_iter().map(move |v| tag(t, &v)))
                .collect(),
        }
    }

    fn tensor_vectors(&self, a: &Vector, b: &Vector) -> Vector {
        let order = self.order();
        let mut out = Vector::new();
        for (la, ca) in a {
            for (lb, cb) in b {
                let mut label = vec![la.len() as i64];
                label.extend(la);
                label.extend(lb);
                let c = ca * &cb.embed(order).expect("Weyl factor has rational coefficients");
                if !c.is_zero() {
                    out.insert(label, c);
                }
            }
        }
        out
    }

    /// Action of x_i on a basis vector.
    pub fn act_x(&self, i: usize, label: &Label) -> Result<Vector> {
        let order = self.order();
        match &self.kind {
            ModuleKind::Zero => Ok(Vector::new()),
            ModuleKind::Verma { .. } => {
                let mut l = label.clone();
                l[i] += 1;
                self.guard(&l)?;
                Ok(single(l, CycloNumber::one(order)))
            }
            ModuleKind::VermaQuotient { top, .. } => {
                let mut l = label.clone();
                l[i] += 1;
                if self.label_degree(&l) >= *top {
                    return Ok(Vector::new());
                }
                Ok(single(l, CycloNumber::one(order)))
            }
            ModuleKind::Regular => self.regular_left(&self.ctx.x(i), label),
            ModuleKind::Laurent(m) => {
                let j = label[0] + 1;
                m.check_exponent(j)?;
                Ok(single(vec![j], CycloNumber::one(order)))
            }
            ModuleKind::Tensor { left, right, left_rank } => {
                let (l, r) = split_tensor(label);
                if i < *left_rank {
                    Ok(self.tensor_vectors(&left.act_x(i, &l)?, &single(r, CycloNumber::one(1))))
                } else {
                    let rv = right.act_x(i - left_rank, &r)?;
                    Ok(self.tensor_vectors(&single(l, CycloNumber::one(order)), &rv))
                }
            }
            ModuleKind::Sum(parts) => Ok(tag(label[0] as usize, &parts[label[0] as usize].act_x(i, &label[1..].to_vec())?)),
        }
    }

    /// Action of y_i on a basis vector.
    pub fn act_y(&self, i: usize, label: &Label) -> Result<Vector> {
        let order = self.order();
        match &self.kind {
            ModuleKind::Zero => Ok(Vector::new()),
            ModuleKind::Verma { character } | ModuleKind::VermaQuotient { character, .. } => {
                self.guard(label)?;
                // y_i x^n v = Σ_h (h · P_h)(x) τ(h) v, where [y_i, x^n] = Σ_h h P_h.
                let n = to_u32(label);
                let mut out = Vector::new();
                for (h, p) in self.ctx.commutator(i, &n).iter() {
                    let tau = character.value(*h);
                    for (mono, c) in p {
                        let moved = self.ctx.act_x(*h, mono);
                        let scaled: Vector = moved.iter().map(|(e, v)| (to_i64(e), &(v * c) * tau)).collect();
                        add_scaled(&mut out, &scaled, &CycloNumber::one(order));
                    }
                }
                if let ModuleKind::VermaQuotient { top, .. } = &self.kind {
                    let top = *top;
                    out.retain(|l, _| (l.iter().sum::<i64>() as u32) < top);
                }
                Ok(out)
            }
            ModuleKind::Regular => self.regular_left(&self.ctx.y(i), label),
            ModuleKind::Laurent(m) => {
                let image = m.act_y_exponent(label[0])?;
                Ok(image.into_iter().map(|(j, c)| (vec![j], c)).collect())
            }
            ModuleKind::Tensor { left, right, left_rank } => {
                let (l, r) = split_tensor(label);
                if i < *left_rank {
                    Ok(self.tensor_vectors(&left.act_y(i, &l)?, &single(r, CycloNumber::one(1))))
                } else {
                    let rv = right.act_y(i - left_rank, &r)?;
                    Ok(self.tensor_vectors(&single(l, CycloNumber::one(order)), &rv))
                }
            }
            ModuleKind::Sum(parts) => Ok(tag(label[0] as usize, &parts[label[0] as usize].act_y(i, &label[1..].to_vec())?)),
        }
    }

    /// Action of the group element with index `g`.
    pub fn act_g(&self, g: usize, label: &Label) -> Result<Vector> {
        match &self.kind {
            ModuleKind::Zero => Ok(Vector::new()),
            ModuleKind::Verma { character } | ModuleKind::VermaQuotient { character, .. } => {
                let moved = self.ctx.act_x(g, &to_u32(label));
                let tau = character.value(g);
                Ok(moved.iter().map(|(e, v)| (to_i64(e), v * tau)).collect())
            }
            ModuleKind::Regular => self.regular_left(&self.ctx.g(g), label),
            ModuleKind::Laurent(m) => Ok(single(label.clone(), m.group_scalar(g, label[0]))),
            ModuleKind::Tensor { left, .. } => {
                let (l, r) = split_tensor(label);
                Ok(self.tensor_vectors(&left.act_g(g, &l)?, &single(r, CycloNumber::one(1))))
            }
            ModuleKind::Sum(parts) => Ok(tag(label[0] as usize, &parts[label[0] as usize].act_g(g, &label[1..].to_vec())?)),
        }
    }

    fn regular_left(&self, e: &PBWElement, label: &Label) -> Result<Vector> {
        let r = self.rank();
        let w = Word::new(label[0] as usize, to_u32(&label[1..1 + r]), to_u32(&label[1 + r..]));
        let prod = self.ctx.mul(e, &self.ctx.word(w));
        let mut out = Vector::new();
        for (w, c) in prod.terms() {
            let mut l = vec![w.g as i64];
            l.extend(to_i64(&w.m));
            l.extend(to_i64(&w.n));
            self.guard(&l)?;
            out.insert(l, c.clone());
        }
        Ok(out)
    }

    fn apply(&self, v: &Vector, f: impl Fn(&Label) -> Result<Vector>) -> Result<Vector> {
        let mut out = Vector::new();
        for (l, c) in v {
            add_scaled(&mut out, &f(l)?, c);
        }
        Ok(out)
    }

    pub fn act_x_vec(&self, i: usize, v: &Vector) -> Result<Vector> {
        self.apply(v, |l| self.act_x(i, l))
    }

    pub fn act_y_vec(&self, i: usize, v: &Vector) -> Result<Vector> {
        self.apply(v, |l| self.act_y(i, l))
    }

    pub fn act_g_vec(&self, g: usize, v: &Vector) -> Result<Vector> {
        self.apply(v, |l| self.act_g(g, l))
    }

    /// Action of an algebra element, word by word (x's first, then y's, then g).
    pub fn act_element(&self, e: &PBWElement, v: &Vector) -> Result<Vector> {
        let mut out = Vector::new();
        for (w, c) in e.terms() {
            let mut cur = v.clone();
            for (i, &p) in w.n.iter().enumerate() {
                for _ in 0..p {
                    cur = self.act_x_vec(i, &cur)?;
                }
            }
            for (i, &p) in w.m.iter().enumerate() {
                for _ in 0..p {
                    cur = self.act_y_vec(i, &cur)?;
                }
            }
            if w.g != 0 {
                cur = self.act_g_vec(w.g, &cur)?;
            }
            add_scaled(&mut out, &cur, c);
        }
        Ok(out)
    }

    /// Basis labels of degree at most `d` (restricted to the truncation).
    pub fn basis_up_to(&self, d: u32) -> Vec<Label> {
        let d = d.min(self.truncation);
        let r = self.rank();
        match &self.kind {
            ModuleKind::Zero => vec![],
            ModuleKind::Verma { .. } => (0..=d).flat_map(|k| labels_of_degree(r, k)).map(|l| to_i64(&l)).collect(),
            ModuleKind::VermaQuotient { top, .. } => (0..=d.min(top.saturating_sub(1)))
                .flat_map(|k| labels_of_degree(r, k))
                .map(|l| to_i64(&l))
                .collect(),
            ModuleKind::Regular => {
                let mut out = Vec::new();
                for g in 0..self.ctx.group().order() {
                    for k in 0..=d {
                        for mn in labels_of_degree(2 * r, k) {
                            let mut l = vec![g as i64];
                            l.extend(to_i64(&mn));
                            out.push(l);
                        }
                    }
                }
                out
            }
            ModuleKind::Laurent(m) => {
                let (lo, hi) = m.window();
                (-(d as i64)..=d as i64).filter(|j| *j >= lo && *j <= hi).map(|j| vec![j]).collect()
            }
            ModuleKind::Tensor { left, right, .. } => {
                let mut out = Vec::new();
                for l in left.basis_up_to(d) {
                    let dl = left.label_degree(&l);
                    for rr in right.basis_up_to(d - dl) {
                        let mut label = vec![l.len() as i64];
                        label.extend(&l);
                        label.extend(rr);
                        out.push(label);
                    }
                }
                out
            }
            ModuleKind::Sum(parts) => parts
                .iter()
                .enumerate()
                .flat_map(|(t, p)| {
                    p.basis_up_to(d).into_iter().map(move |l| {
                        let mut out = vec![t as i64];
                        out.extend(l);
                        out
                    })
                })
                .collect(),
        }
    }

    /// Checks ρ(a)ρ(b)v = ρ(ab)v for all algebra generators a, b and basis
    /// vectors v of degree ≤ `degree`; returns the failing cases.
    pub fn check_relations(&self, degree: u32) -> Result<RelationCheck> {
        let ctx = &self.ctx;
        let r = self.rank();
        let mut gens: Vec<(String, PBWElement)> = Vec::new();
        for i in 0..r {
            gens.push((format!("x{}", i + 1), ctx.x(i)));
            gens.push((format!("y{}", i + 1), ctx.y(i)));
        }
        for g in ctx.group().generator_indices() {
            gens.push((format!("g{g}"), ctx.g(g)));
        }
        let products: Vec<Vec<PBWElement>> = gens
            .iter()
            .map(|(_, a)| gens.iter().map(|(_, b)| ctx.mul(a, b)).collect())
            .collect();
        let mut checked = 0;
        let mut failures = Vec::new();
        for label in self.basis_up_to(degree) {
            let v = single(label.clone(), CycloNumber::one(self.order()));
            for (ia, (na, a)) in gens.iter().enumerate() {
                for (ib, (nb, b)) in gens.iter().enumerate() {
                    let lhs = self.act_element(a, &self.act_element(b, &v)?)?;
                    let rhs = self.act_element(&products[ia][ib], &v)?;
                    checked += 1;
                    if lhs != rhs {
                        failures.push(format!("{na}*{nb} on {label:?}"));
                    }
                }
            }
        }
        Ok(RelationCheck { checked, failures })
    }
}

fn split_tensor(label: &Label) -> (Label, Label) {
    let n = label[0] as usize;
    (label[1..1 + n].to_vec(), label[1 + n..].to_vec())
}

fn tag(t: usize, v: &Vector) -> Vector {
    v.iter()
        .map(|(l, c)| {
            let mut out = vec![t as i64];
            out.extend(l);
            (out, c.clone())
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationCheck {
    pub checked: usize,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertData {
    pub kind: FiltrationKind,
    pub dims: Vec<usize>,
    pub generators: Vec<Vector>,
}

/// dim F_j for j = 0..=J with F_0 the W-span of the generators and
/// F_{j+1} = F_j + Σ x_i F_j + Σ y_i F_j.
pub fn bernstein_filtration_dims(m: &ModuleModel, generators: &[Vector], max_degree: usize) -> Result<HilbertData> {
    let top_gen = generators
        .iter()
        .flat_map(|v| v.keys().map(|l| m.label_degree(l)))
        .max()
        .unwrap_or(0);
    if !generators.is_empty() && !m.is_finite_dimensional() && max_degree as u32 + top_gen > m.truncation {
        return Err(Error::Budget(format!(
            "window {max_degree} plus generator degree {top_gen} exceeds truncation {}",
            m.truncation
        )));
    }
    let group_gens = m.ctx.group().generator_indices();
    let mut basis: Echelon<Label> = Echelon::new(m.order());
    let w_close = |basis: &mut Echelon<Label>, seeds: Vec<Vector>| -> Result<Vec<Vector>> {
        let mut added = Vec::new();
        let mut queue = seeds;
        while let Some(v) = queue.pop() {
            if let Some(row) = basis.insert(&v) {
                for &g in &group_gens {
                    queue.push(m.act_g_vec(g, &row)?);
                }
                added.push(row);
            }
        }
        Ok(added)
    };
    let mut fresh = w_close(&mut basis, generators.to_vec())?;
    let mut dims = vec![basis.dim()];
    for _ in 0..max_degree {
        let mut images = Vec::new();
        for v in &fresh {
            for i in 0..m.rank() {
                images.push(m.act_x_vec(i, v)?);
                images.push(m.act_y_vec(i, v)?);
            }
        }
        fresh = w_close(&mut basis, images)?;
        dims.push(basis.dim());
    }
    Ok(HilbertData {
        kind: FiltrationKind::Bernstein,
        dims,
        generators: generators.to_vec(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GKReport {
    pub gk_dim: u32,
    #[serde(serialize_with = "ser_rational")]
    pub leading_coefficient: Rational,
    /// First and last index j of the stabilized range.
    pub window: (usize, usize),
    /// True when at least the required run of vanishing differences was seen.
    pub polynomiality_verified: bool,
    /// Coefficients of the fitted h(j), constant term first.
    #[serde(serialize_with = "ser_rationals")]
    pub polynomial: Vec<Rational>,
}

fn ser_rational<S: serde::Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&crate::scalars::format_rational(q))
}

fn ser_rationals<S: serde::Serializer>(qs: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(qs.len()))?;
    for q in qs {
        seq.serialize_element(&crate::scalars::format_rational(q))?;
    }
    seq.end()
}

fn differences(v: &[Rational]) -> Vec<Rational> {
    v.windows(2).map(|w| &w[1] - &w[0]).collect()
}

fn factorial(k: u32) -> Rational {
    (1..=k as i64).fold(Rational::one(), |acc, i| acc * rat_int(i))
}

/// GK dimension from Hilbert data: the least k whose (k+1)-st differences
/// vanish on a trailing run of `DEFAULT_STABLE_RUN` points.
pub fn gk_dimension(h: &HilbertData) -> Result<GKReport> {
    gk_dimension_with_run(h, DEFAULT_STABLE_RUN)
}

/// As [`gk_dimension`] with a configurable run length. Sequences too short
/// for the full run are accepted when all available differences (at least
/// three) vanish; the report then has `polynomiality_verified = false`.
pub fn gk_dimension_with_run(h: &HilbertData, run: usize) -> Result<GKReport> {
    if h.dims.iter().all(|&d| d == 0) {
        return Err(Error::ZeroModule);
    }
    let values: Vec<Rational> = h.dims.iter().map(|&d| rat_int(d as i64)).collect();
    let mut diffs = vec![values.clone()];
    for k in 0..values.len() {
        let next = differences(diffs.last().unwrap());
        diffs.push(next);
        let d = &diffs[k + 1];
        let needed = run.min(d.len());
        if needed < 3.min(run) || d.is_empty() {
            break;
        }
        let tail_zero = d.iter().rev().take_while(|v| v.is_zero()).count();
        if tail_zero < needed {
            continue;
        }
        let start = d.len() - tail_zero;
        let kth = diffs[k].last().unwrap().clone();
        let leading = &kth / &factorial(k as u32);
        let polynomial = fit_polynomial(&values, k);
        return Ok(GKReport {
            gk_dim: k as u32,
            leading_coefficient: leading,
            window: (start, values.len() - 1),
            polynomiality_verified: tail_zero >= run,
            polynomial,
        });
    }
    Err(Error::Budget(format!(
        "window too small: no difference order vanishes on {run} trailing points of {} values",
        values.len()
    )))
}

/// Interpolate the last k+1 points by a degree-k polynomial in j.
fn fit_polynomial(values: &[Rational], k: usize) -> Vec<Rational> {
    let n = values.len();
    let mut rows: Vec<Vec<Rational>> = (n - k - 1..n)
        .map(|j| {
            let mut row: Vec<Rational> = (0..=k).map(|p| rat_int((j as i64).pow(p as u32))).collect();
            row.push(values[j].clone());
            row
        })
        .collect();
    crate::linalg::solve_augmented_rational(&mut rows, k + 1).unwrap_or_default()
}

/// Holonomicity for regular c: holonomic iff GK = rank. GK below the rank
/// contradicts the Bernstein inequality and is reported as an inconsistency.
pub fn is_holonomic_regular(m: &ModuleModel, h: &HilbertData) -> Result<bool> {
    match regularity_of_context(&m.ctx).regularity {
        Regularity::Regular | Regularity::RegularUpToBound => {}
        Regularity::NotRegular => {
            return Err(Error::RegularityRequired("the parameter is not regular".into()));
        }
        Regularity::Unknown => {
            return Err(Error::RegularityRequired("regularity of the parameter is not established".into()));
        }
    }
    let gk = gk_dimension(h)?;
    let r = m.rank() as u32;
    if gk.gk_dim < r {
        return Err(Error::Inconsistency(format!(
            "GK dimension {} is below the rank {r} at a regular parameter",
            gk.gk_dim
        )));
    }
    Ok(gk.gk_dim == r)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HolonomicityReport {
    pub holonomic: bool,
    pub reason: String,
}

/// Holonomicity by structure: sums and external tensors factor, finite-
/// dimensional and Verma modules are holonomic, and any other module is
/// decided by the GK criterion at a regular parameter.
pub fn holonomicity(m: &ModuleModel, window: usize) -> Result<HolonomicityReport> {
    let verdict = |holonomic: bool, reason: &str| HolonomicityReport {
        holonomic,
        reason: reason.to_string(),
    };
    match &m.kind {
        ModuleKind::Zero => Err(Error::ZeroModule),
        ModuleKind::VermaQuotient { .. } => Ok(verdict(true, "finite-dimensional")),
        ModuleKind::Verma { .. } => Ok(verdict(true, "Verma module (category O)")),
        ModuleKind::Sum(parts) => {
            let mut reasons = Vec::new();
            let mut all = true;
            for p in parts.iter().filter(|p| !matches!(p.kind, ModuleKind::Zero)) {
                let r = holonomicity(p, window)?;
                all &= r.holonomic;
                reasons.push(r.reason);
            }
            Ok(HolonomicityReport {
                holonomic: all,
                reason: format!("sum of [{}]", reasons.join("; ")),
            })
        }
        ModuleKind::Tensor { left, right, .. } => {
            let a = holonomicity(left, window)?;
            let b = holonomicity(right, window)?;
            Ok(HolonomicityReport {
                holonomic: a.holonomic && b.holonomic,
                reason: format!("tensor of [{}] and [{}]", a.reason, b.reason),
            })
        }
        ModuleKind::Regular | ModuleKind::Laurent(_) => {
            let h = bernstein_filtration_dims(m, &m.default_generators(), window)?;
            let holonomic = is_holonomic_regular(m, &h)?;
            let gk = gk_dimension(&h)?.gk_dim;
            Ok(verdict(holonomic, &format!("GK {gk} against rank {}", m.rank())))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularVector {
    pub degree: u32,
    pub vector: Vector,
    /// The linear character W acts by on the vector, when there is one.
    pub character: Option<Character>,
}

/// Nonzero homogeneous vectors of degree 1..=bound in the Verma module of
/// `character` killed by every y_i, grouped by linear W-characters.
pub fn find_singular_vectors(ctx: &Arc<AlgebraContext>, character: &Character, bound: u32) -> Result<Vec<SingularVector>> {
    let verma = ModuleModel::verma(ctx.clone(), character.clone(), bound + 1)?;
    let r = ctx.rank();
    let n = ctx.order();
    let group = ctx.group();
    let chars = group.linear_characters();
    let mut out = Vec::new();
    for d in 1..=bound {
        let cols: Vec<Label> = labels_of_degree(r, d).iter().map(|l| to_i64(l)).collect();
        let rows: Vec<Label> = labels_of_degree(r, d - 1).iter().map(|l| to_i64(l)).collect();
        let row_index: BTreeMap<&Label, usize> = rows.iter().enumerate().map(|(k, l)| (l, k)).collect();
        let mut mat = Matrix::zeros(r * rows.len(), cols.len(), n);
        for (cj, col) in cols.iter().enumerate() {
            for i in 0..r {
                for (l, c) in verma.act_y(i, col)? {
                    mat.set(i * rows.len() + row_index[&l], cj, c);
                }
            }
        }
        let kernel: Vec<Vector> = mat
            .nullspace()
            .into_iter()
            .map(|v| {
                cols.iter()
                    .zip(v)
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(l, c)| (l.clone(), c))
                    .collect()
            })
            .collect();
        if kernel.is_empty() {
            continue;
        }
        let mut span: Echelon<Label> = Echelon::new(n);
        let inv_order = CycloNumber::from_int(group.order() as i64, n).inv()?;
        for chi in &chars {
            for v in &kernel {
                // e_χ v = |W|^{-1} Σ_g χ(g^{-1}) g·v
                let mut proj = Vector::new();
                for g in 0..group.order() {
                    let coeff = chi.value(group.inv(g)) * &inv_order;
                    add_scaled(&mut proj, &verma.act_g_vec(g, v)?, &coeff);
                }
                if proj.is_empty() {
                    continue;
                }
                if span.insert(&proj).is_some() {
                    out.push(SingularVector {
                        degree: d,
                        vector: proj,
                        character: Some(chi.clone()),
                    });
                }
            }
        }
        for v in &kernel {
            if span.insert(v).is_some() {
                out.push(SingularVector {
                    degree: d,
                    vector: v.clone(),
                    character: None,
                });
            }
        }
    }
    Ok(out)
}
