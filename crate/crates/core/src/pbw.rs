//! Rational Cherednik algebras H_c(W, h) in PBW normal form.
//!
//! Every element is a combination of words `g · y^m · x^n`. Products are
//! normal ordered by moving group elements left and then straightening
//! `x^n · y_i` with a memoized table of commutators `[y_i, x^n]`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{GroupSpec, ReflectionDatum, ReflectionGroup};
use crate::linalg::Matrix;
use crate::scalars::CycloNumber;

pub type Exponents = Vec<u32>;

/// Commutative polynomial in one set of variables.
pub type Poly = BTreeMap<Exponents, CycloNumber>;

pub(crate) fn poly_add(acc: &mut Poly, key: Exponents, c: CycloNumber) {
    if c.is_zero() {
        return;
    }
    match acc.get_mut(&key) {
        Some(slot) => {
            *slot = &*slot + &c;
            if slot.is_zero() {
                acc.remove(&key);
            }
        }
        None => {
            acc.insert(key, c);
        }
    }
}

pub(crate) fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Exponents = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            poly_add(&mut out, e, ca * cb);
        }
    }
    out
}

fn add_exps(a: &[u32], b: &[u32]) -> Exponents {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn total(e: &[u32]) -> u32 {
    e.iter().sum()
}

/// A PBW basis word `g · ∏ y_i^{m_i} · ∏ x_i^{n_i}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    pub g: usize,
    pub m: Exponents,
    pub n: Exponents,
}

impl Word {
    pub fn new(g: usize, m: Exponents, n: Exponents) -> Self {
        Word { g, m, n }
    }

    pub fn unit(rank: usize) -> Self {
        Word::new(0, vec![0; rank], vec![0; rank])
    }

    pub fn degree(&self, kind: FiltrationKind) -> u32 {
        match kind {
            FiltrationKind::Bernstein => total(&self.m) + total(&self.n),
            FiltrationKind::Geometric => total(&self.m),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FiltrationKind {
    Bernstein,
    Geometric,
}

/// Values of c on the conjugacy classes of reflections, indexed by class id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Parameter {
    values: Vec<CycloNumber>,
}

impl Parameter {
    pub fn new(values: Vec<CycloNumber>) -> Self {
        Parameter { values }
    }

    pub fn constant(c: CycloNumber, classes: usize) -> Self {
        Parameter {
            values: vec![c; classes],
        }
    }

    pub fn value(&self, class_id: usize) -> &CycloNumber {
        &self.values[class_id]
    }

    pub fn values(&self) -> &[CycloNumber] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }
}

pub fn reflection_class_count(reflections: &[ReflectionDatum]) -> usize {
    reflections.iter().map(|r| r.class_id + 1).max().unwrap_or(0)
}

/// Element of H_c, independent of its context; all products go through an
/// [`AlgebraContext`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PBWElement {
    terms: BTreeMap<Word, CycloNumber>,
}

impl PBWElement {
    pub fn zero() -> Self {
        PBWElement::default()
    }

    pub fn from_word(w: Word, c: CycloNumber) -> Self {
        let mut e = PBWElement::zero();
        e.add_term(w, c);
        e
    }

    pub fn add_term(&mut self, w: Word, c: CycloNumber) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(slot) => {
                *slot = &*slot + &c;
                if slot.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    pub fn terms(&self) -> &BTreeMap<Word, CycloNumber> {
        &self.terms
    }

    pub fn coeff(&self, w: &Word) -> Option<&CycloNumber> {
        self.terms.get(w)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &CycloNumber) -> Self {
        let mut out = PBWElement::zero();
        for (w, v) in &self.terms {
            out.add_term(w.clone(), v * c);
        }
        out
    }

    /// Top filtration degree; `None` stands for −∞ on the zero element.
    pub fn filtration_degree(&self, kind: FiltrationKind) -> Option<u32> {
        self.terms.keys().map(|w| w.degree(kind)).max()
    }

    pub fn principal_symbol(&self, kind: FiltrationKind) -> Result<GradedSymbol> {
        let degree = self
            .filtration_degree(kind)
            .ok_or_else(|| Error::InvalidInput("the zero element has no principal symbol".into()))?;
        let terms = self
            .terms
            .iter()
            .filter(|(w, _)| w.degree(kind) == degree)
            .map(|(w, c)| (w.clone(), c.clone()))
            .collect();
        Ok(GradedSymbol { kind, degree, terms })
    }

    pub fn to_records(&self) -> Vec<TermRecord> {
        self.terms
            .iter()
            .map(|(w, c)| TermRecord {
                g: w.g,
                m: w.m.clone(),
                n: w.n.clone(),
                coeff: c.to_string(),
            })
            .collect()
    }

    /// Image under x ↦ −x, y ↦ −y, g ↦ g.
    pub fn antipode(&self) -> Self {
        let mut out = PBWElement::zero();
        for (w, c) in &self.terms {
            let c = if (total(&w.m) + total(&w.n)) % 2 == 1 { -c } else { c.clone() };
            out.add_term(w.clone(), c);
        }
        out
    }
}

impl std::ops::Add for &PBWElement {
    type Output = PBWElement;
    fn add(self, rhs: &PBWElement) -> PBWElement {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }
}

impl std::ops::Sub for &PBWElement {
    type Output = PBWElement;
    fn sub(self, rhs: &PBWElement) -> PBWElement {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), -c);
        }
        out
    }
}

impl std::ops::Neg for &PBWElement {
    type Output = PBWElement;
    fn neg(self) -> PBWElement {
        PBWElement {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect(),
        }
    }
}

/// Serialized form of one term.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub g: usize,
    pub m: Vec<u32>,
    pub n: Vec<u32>,
    pub coeff: String,
}

/// Homogeneous element of C[h ⊕ h*] ⋊ CW.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSymbol {
    pub kind: FiltrationKind,
    pub degree: u32,
    pub terms: BTreeMap<Word, CycloNumber>,
}

type CommutatorTable = BTreeMap<usize, Poly>;

/// Outcome of a randomized associativity check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AssociativityReport {
    pub samples: usize,
    pub seed: u64,
    pub failures: Vec<[TermRecord; 3]>,
}

impl AssociativityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// The algebra H_c(W, h): group, normalized reflection data and parameter,
/// plus memo tables for normal ordering.
pub struct AlgebraContext {
    group: Arc<ReflectionGroup>,
    reflections: Vec<ReflectionDatum>,
    parameter: Parameter,
    dual: bool,
    inverse_mats: Vec<Matrix>,
    /// (s, c(s) α_s[i] α_s^∨[j]) for reflections with c(s) ≠ 0.
    relation: Vec<(usize, Vec<Vec<CycloNumber>>)>,
    commutators: Mutex<HashMap<(usize, Exponents), Arc<CommutatorTable>>>,
    x_action: Mutex<HashMap<(usize, Exponents), Arc<Poly>>>,
    y_action: Mutex<HashMap<(usize, Exponents), Arc<Poly>>>,
    fourier: OnceLock<Arc<AlgebraContext>>,
    opposite: OnceLock<Arc<AlgebraContext>>,
}

impl fmt::Debug for AlgebraContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AlgebraContext")
            .field("group", &self.group.spec().name)
            .field("order", &self.group.order())
            .field("parameter", &self.parameter)
            .field("dual", &self.dual)
            .finish()
    }
}

impl AlgebraContext {
    pub fn new(group: Arc<ReflectionGroup>, parameter: Parameter) -> Result<Arc<Self>> {
        let reflections = group.find_reflections();
        Self::with_reflections(group, reflections, parameter, false)
    }

    /// Build a context from a named group family and either one value per
    /// reflection class or a single constant value.
    pub fn named(name: &str, values: &[CycloNumber]) -> Result<Arc<Self>> {
        let group = Arc::new(ReflectionGroup::close(GroupSpec::named(name)?)?);
        let classes = reflection_class_count(&group.find_reflections());
        let parameter = if values.len() == 1 && classes != 1 {
            Parameter::constant(values[0].clone(), classes)
        } else {
            Parameter::new(values.to_vec())
        };
        Self::new(group, parameter)
    }

    /// Build a context from explicit reflection data (any rescaling of the
    /// normalized eigenvectors defines the same algebra).
    pub fn with_reflections(
        group: Arc<ReflectionGroup>,
        reflections: Vec<ReflectionDatum>,
        parameter: Parameter,
        dual: bool,
    ) -> Result<Arc<Self>> {
        let order = group.field_order();
        let classes = reflection_class_count(&reflections);
        if parameter.values.len() != classes {
            return Err(Error::InvalidInput(format!(
                "parameter has {} values but there are {} reflection classes",
                parameter.values.len(),
                classes
            )));
        }
        let values = parameter
            .values
            .iter()
            .map(|v| {
                v.reduce_order().embed(order).map_err(|_| {
                    Error::InvalidInput(format!("parameter value {v} does not lie in Q(z{order})"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let parameter = Parameter::new(values);
        let r = group.rank();
        let relation = reflections
            .iter()
            .filter(|s| !parameter.value(s.class_id).is_zero())
            .map(|s| {
                let c = parameter.value(s.class_id);
                let table = (0..r)
                    .map(|i| (0..r).map(|j| &(c * &s.alpha[i]) * &s.alpha_check[j]).collect())
                    .collect();
                (s.element, table)
            })
            .collect();
        let inverse_mats = (0..group.order())
            .map(|g| group.element(group.inv(g)).clone())
            .collect();
        Ok(Arc::new(AlgebraContext {
            group,
            reflections,
            parameter,
            dual,
            inverse_mats,
            relation,
            commutators: Mutex::new(HashMap::new()),
            x_action: Mutex::new(HashMap::new()),
            y_action: Mutex::new(HashMap::new()),
            fourier: OnceLock::new(),
            opposite: OnceLock::new(),
        }))
    }

    pub fn group(&self) -> &Arc<ReflectionGroup> {
        &self.group
    }

    pub fn reflections(&self) -> &[ReflectionDatum] {
        &self.reflections
    }

    pub fn parameter(&self) -> &Parameter {
        &self.parameter
    }

    pub fn rank(&self) -> usize {
        self.group.rank()
    }

    pub fn order(&self) -> u32 {
        self.group.field_order()
    }

    /// True for a context produced by [`AlgebraContext::fourier_dual`] an odd
    /// number of times.
    pub fn is_fourier_dual(&self) -> bool {
        self.dual
    }

    pub fn scalar(&self, v: i64) -> CycloNumber {
        CycloNumber::from_int(v, self.order())
    }

    pub fn one(&self) -> PBWElement {
        PBWElement::from_word(Word::unit(self.rank()), self.scalar(1))
    }

    pub fn constant(&self, c: CycloNumber) -> PBWElement {
        PBWElement::from_word(Word::unit(self.rank()), c)
    }

    pub fn x(&self, i: usize) -> PBWElement {
        let mut w = Word::unit(self.rank());
        w.n[i] = 1;
        PBWElement::from_word(w, self.scalar(1))
    }

    pub fn y(&self, i: usize) -> PBWElement {
        let mut w = Word::unit(self.rank());
        w.m[i] = 1;
        PBWElement::from_word(w, self.scalar(1))
    }

    pub fn g(&self, g: usize) -> PBWElement {
        let mut w = Word::unit(self.rank());
        w.g = g;
        PBWElement::from_word(w, self.scalar(1))
    }

    pub fn word(&self, w: Word) -> PBWElement {
        PBWElement::from_word(w, self.scalar(1))
    }

    fn check_word(&self, w: &Word) -> Result<()> {
        if w.g >= self.group.order() || w.m.len() != self.rank() || w.n.len() != self.rank() {
            return Err(Error::ContextMismatch(format!(
                "word {w:?} does not belong to a rank-{} algebra over a group of order {}",
                self.rank(),
                self.group.order()
            )));
        }
        Ok(())
    }

    pub fn check_element(&self, e: &PBWElement) -> Result<()> {
        for (w, c) in &e.terms {
            self.check_word(w)?;
            if c.order() != self.order() {
                return Err(Error::ContextMismatch("coefficient lies in a different field".into()));
            }
        }
        Ok(())
    }

    /// g · x^n as a polynomial in x, using g·x_j = Σ_k (g^{-1})_{jk} x_k.
    pub fn act_x(&self, g: usize, n: &[u32]) -> Arc<Poly> {
        self.act(g, n, true)
    }

    /// g · y^m as a polynomial in y, using g·y_j = Σ_i g_{ij} y_i.
    pub fn act_y(&self, g: usize, m: &[u32]) -> Arc<Poly> {
        self.act(g, m, false)
    }

    fn act(&self, g: usize, e: &[u32], on_x: bool) -> Arc<Poly> {
        let cache = if on_x { &self.x_action } else { &self.y_action };
        let key = (g, e.to_vec());
        if let Some(p) = cache.lock().unwrap().get(&key) {
            return p.clone();
        }
        let r = self.rank();
        let order = self.order();
        let mut result = Poly::new();
        result.insert(vec![0; r], CycloNumber::one(order));
        if g != 0 {
            for (j, &pow) in e.iter().enumerate() {
                if pow == 0 {
                    continue;
                }
                let mut lin = Poly::new();
                for k in 0..r {
                    let coeff = if on_x {
                        self.inverse_mats[g].get(j, k).clone()
                    } else {
                        self.group.element(g).get(k, j).clone()
                    };
                    let mut ek = vec![0; r];
                    ek[k] = 1;
                    poly_add(&mut lin, ek, coeff);
                }
                for _ in 0..pow {
                    result = poly_mul(&result, &lin);
                }
            }
        } else {
            result = Poly::from([(e.to_vec(), CycloNumber::one(order))]);
        }
        let result = Arc::new(result);
        cache.lock().unwrap().insert(key, result.clone());
        result
    }

    /// [y_i, x^n] written as Σ_h h · P_h(x).
    pub fn commutator(&self, i: usize, n: &[u32]) -> Arc<CommutatorTable> {
        let key = (i, n.to_vec());
        if let Some(t) = self.commutators.lock().unwrap().get(&key) {
            return t.clone();
        }
        let r = self.rank();
        let mut out = CommutatorTable::new();
        if let Some(k) = (0..r).rev().find(|&k| n[k] > 0) {
            let mut prev_n = n.to_vec();
            prev_n[k] -= 1;
            // [y_i, x^{n'} x_k] = [y_i, x^{n'}] x_k + x^{n'} [y_i, x_k]
            let prev = self.commutator(i, &prev_n);
            for (h, p) in prev.iter() {
                let shifted: Poly = p
                    .iter()
                    .map(|(e, c)| {
                        let mut e = e.clone();
                        e[k] += 1;
                        (e, c.clone())
                    })
                    .collect();
                out.insert(*h, shifted);
            }
            if i == k {
                let slot = out.entry(0).or_default();
                poly_add(slot, prev_n.clone(), CycloNumber::one(self.order()));
            }
            for (s, table) in &self.relation {
                let a = &table[i][k];
                if a.is_zero() {
                    continue;
                }
                // x^{n'} s = s (s^{-1} · x^{n'})
                let moved = self.act_x(self.group.inv(*s), &prev_n);
                let slot = out.entry(*s).or_default();
                for (e, c) in moved.iter() {
                    poly_add(slot, e.clone(), -(a * c));
                }
            }
            out.retain(|_, p| !p.is_empty());
        }
        let out = Arc::new(out);
        self.commutators.lock().unwrap().insert(key, out.clone());
        out
    }

    fn right_multiply_y(&self, e: &PBWElement, i: usize) -> PBWElement {
        let mut out = PBWElement::zero();
        for (w, c) in &e.terms {
            let mut up = w.clone();
            up.m[i] += 1;
            out.add_term(up, c.clone());
            // h y^a x^b y_i = h y^{a+e_i} x^b − Σ_{h'} h h' (h'^{-1}·y^a) P_{h'}(x)
            let comm = self.commutator(i, &w.n);
            for (h, p) in comm.iter() {
                let gh = self.group.mul(w.g, *h);
                let ya = self.act_y(self.group.inv(*h), &w.m);
                for (ym, yc) in ya.iter() {
                    let cy = c * yc;
                    for (xn, xc) in p {
                        out.add_term(Word::new(gh, ym.clone(), xn.clone()), -(&cy * xc));
                    }
                }
            }
        }
        out
    }

    /// Normal form of the product of two basis words.
    pub fn multiply_words(&self, a: &Word, b: &Word) -> PBWElement {
        let g = self.group.mul(a.g, b.g);
        let ginv = self.group.inv(b.g);
        let py = self.act_y(ginv, &a.m);
        let px = self.act_x(ginv, &a.n);
        let mut acc = PBWElement::zero();
        for (ym, yc) in py.iter() {
            for (xn, xc) in px.iter() {
                acc.add_term(Word::new(g, ym.clone(), xn.clone()), yc * xc);
            }
        }
        for i in 0..self.rank() {
            for _ in 0..b.m[i] {
                acc = self.right_multiply_y(&acc, i);
            }
        }
        if b.n.iter().any(|&v| v > 0) {
            let mut out = PBWElement::zero();
            for (w, c) in acc.terms {
                out.add_term(Word::new(w.g, w.m, add_exps(&w.n, &b.n)), c);
            }
            acc = out;
        }
        acc
    }

    pub fn multiply(&self, a: &PBWElement, b: &PBWElement) -> Result<PBWElement> {
        self.check_element(a)?;
        self.check_element(b)?;
        Ok(self.mul(a, b))
    }

    /// Product without context validation.
    pub fn mul(&self, a: &PBWElement, b: &PBWElement) -> PBWElement {
        let mut out = PBWElement::zero();
        for (wa, ca) in &a.terms {
            for (wb, cb) in &b.terms {
                let c = ca * cb;
                for (w, v) in self.multiply_words(wa, wb).terms {
                    out.add_term(w, &v * &c);
                }
            }
        }
        out
    }

    pub fn pow(&self, a: &PBWElement, k: u32) -> PBWElement {
        let mut out = self.one();
        for _ in 0..k {
            out = self.mul(&out, a);
        }
        out
    }

    /// Product in gr H_c ≅ C[h ⊕ h*] ⋊ CW; `None` when it vanishes.
    pub fn symbol_product(&self, a: &GradedSymbol, b: &GradedSymbol) -> Option<GradedSymbol> {
        let mut terms = PBWElement::zero();
        for (wa, ca) in &a.terms {
            for (wb, cb) in &b.terms {
                let ginv = self.group.inv(wb.g);
                let g = self.group.mul(wa.g, wb.g);
                let py = self.act_y(ginv, &wa.m);
                let px = self.act_x(ginv, &wa.n);
                let c = ca * cb;
                for (ym, yc) in py.iter() {
                    for (xn, xc) in px.iter() {
                        let w = Word::new(g, add_exps(ym, &wb.m), add_exps(xn, &wb.n));
                        terms.add_term(w, &(&c * yc) * xc);
                    }
                }
            }
        }
        if terms.is_zero() {
            return None;
        }
        Some(GradedSymbol {
            kind: a.kind,
            degree: a.degree + b.degree,
            terms: terms.terms,
        })
    }

    /// H_c(W, h ⊕ C^extra) with W acting trivially on the new summand. Group
    /// elements keep their indices and reflection classes their ids.
    pub fn extend_trivially(&self, extra: usize) -> Result<Arc<AlgebraContext>> {
        let r = self.rank();
        let n = self.order();
        let widen = |m: &Matrix| {
            let mut out = Matrix::identity(r + extra, n);
            for i in 0..r {
                for j in 0..r {
                    out.set(i, j, m.get(i, j).clone());
                }
            }
            out
        };
        let spec = self.group.spec();
        let gens = spec.generators.iter().map(widen).collect();
        let mut wide = GroupSpec::new(n, r + extra, gens)?;
        wide.name = format!("{}+trivial:{extra}", spec.name);
        wide.degrees = spec.degrees.as_ref().map(|d| {
            let mut d = d.clone();
            d.extend(std::iter::repeat(1).take(extra));
            d
        });
        let group = Arc::new(ReflectionGroup::close(wide)?);
        if group.order() != self.group.order()
            || (0..group.order()).any(|g| *group.element(g) != widen(self.group.element(g)))
        {
            return Err(Error::Inconsistency("widened group does not match element indexing".into()));
        }
        let reflections = group.find_reflections();
        for (a, b) in reflections.iter().zip(&self.reflections) {
            if a.element != b.element || a.class_id != b.class_id {
                return Err(Error::Inconsistency("widened reflections do not match".into()));
            }
        }
        Self::with_reflections(group, reflections, self.parameter.clone(), self.dual)
    }

    /// H_c(W, h*): the same abstract group acting contragrediently, with the
    /// same indexing of elements and reflection classes.
    pub fn fourier_dual(&self) -> Result<Arc<AlgebraContext>> {
        if let Some(d) = self.fourier.get() {
            return Ok(d.clone());
        }
        let group = Arc::new(self.group.dual());
        let reflections = group.find_reflections();
        let d = Self::with_reflections(group, reflections, self.parameter.clone(), !self.dual)?;
        Ok(self.fourier.get_or_init(|| d).clone())
    }

    fn fourier_with_sign(&self, e: &PBWElement, sign_on_m: bool) -> Result<(Arc<AlgebraContext>, PBWElement)> {
        self.check_element(e)?;
        let target = self.fourier_dual()?;
        let r = self.rank();
        let mut out = PBWElement::zero();
        for (w, c) in &e.terms {
            let flips = if sign_on_m { total(&w.m) } else { total(&w.n) };
            let c = if flips % 2 == 1 { -c } else { c.clone() };
            let prod = target.multiply_words(&Word::new(w.g, vec![0; r], w.m.clone()), &Word::new(0, w.n.clone(), vec![0; r]));
            for (tw, tc) in prod.terms {
                out.add_term(tw, &tc * &c);
            }
        }
        Ok((target, out))
    }

    /// Fourier transform x ↦ x, y ↦ −y, g ↦ g into H_c(W, h*). Applied to a
    /// dual context it realizes the inverse transform, so that applying it
    /// twice returns the original element.
    pub fn fourier_image(&self, e: &PBWElement) -> Result<(Arc<AlgebraContext>, PBWElement)> {
        self.fourier_with_sign(e, !self.dual)
    }

    /// The transform x ↦ x, y ↦ −y read literally in both directions; its
    /// square is the antipode.
    pub fn fourier_image_literal(&self, e: &PBWElement) -> Result<(Arc<AlgebraContext>, PBWElement)> {
        self.fourier_with_sign(e, true)
    }

    /// Parameter c̄ with c̄(s) = c(s^{-1}).
    pub fn opposite_parameter(&self) -> Parameter {
        let classes = reflection_class_count(&self.reflections);
        let values = (0..classes)
            .map(|k| {
                let s = self.reflections.iter().find(|r| r.class_id == k).unwrap();
                let sinv = self.group.inv(s.element);
                let t = self.reflections.iter().find(|r| r.element == sinv).unwrap();
                self.parameter.value(t.class_id).clone()
            })
            .collect();
        Parameter::new(values)
    }

    pub fn opposite_context(&self) -> Result<Arc<AlgebraContext>> {
        if let Some(o) = self.opposite.get() {
            return Ok(o.clone());
        }
        let o = Self::with_reflections(
            self.group.clone(),
            self.reflections.clone(),
            self.opposite_parameter(),
            self.dual,
        )?;
        Ok(self.opposite.get_or_init(|| o).clone())
    }

    /// Anti-isomorphism H_c → H_{c̄}: x ↦ x, y ↦ −y, g ↦ g^{-1}.
    pub fn opposite_image(&self, e: &PBWElement) -> Result<(Arc<AlgebraContext>, PBWElement)> {
        self.check_element(e)?;
        let target = self.opposite_context()?;
        let r = self.rank();
        let mut out = PBWElement::zero();
        for (w, c) in &e.terms {
            let c = if total(&w.m) % 2 == 1 { -c } else { c.clone() };
            // (g y^m x^n)^op = x^n (−y)^m g^{-1}
            let xy = target.multiply_words(&Word::new(0, vec![0; r], w.n.clone()), &Word::new(0, w.m.clone(), vec![0; r]));
            let tail = Word::new(self.group.inv(w.g), vec![0; r], vec![0; r]);
            for (xw, xc) in xy.terms {
                for (tw, tc) in target.multiply_words(&xw, &tail).terms {
                    out.add_term(tw, &(&tc * &xc) * &c);
                }
            }
        }
        Ok((target, out))
    }

    pub fn random_word(&self, rng: &mut impl Rng, max_degree: u32) -> Word {
        let r = self.rank();
        let mut w = Word::unit(r);
        w.g = rng.gen_range(0..self.group.order());
        let d = rng.gen_range(0..=max_degree);
        for _ in 0..d {
            let slot = rng.gen_range(0..2 * r);
            if slot < r {
                w.m[slot] += 1;
            } else {
                w.n[slot - r] += 1;
            }
        }
        w
    }

    /// Random element with up to `terms` words and small integer coefficients.
    pub fn random_element(&self, rng: &mut impl Rng, terms: usize, max_degree: u32) -> PBWElement {
        let mut e = PBWElement::zero();
        for _ in 0..terms.max(1) {
            let w = self.random_word(rng, max_degree);
            let c = rng.gen_range(-3i64..=3);
            e.add_term(w, self.scalar(if c == 0 { 1 } else { c }));
        }
        e
    }

    /// Check (ab)c = a(bc) on random basis-word triples.
    pub fn verify_associativity(&self, samples: usize, seed: u64) -> AssociativityReport {
        self.verify_associativity_with_degree(samples, seed, 3)
    }

    pub fn verify_associativity_with_degree(&self, samples: usize, seed: u64, max_degree: u32) -> AssociativityReport {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut failures = Vec::new();
        for _ in 0..samples {
            let a = self.random_word(&mut rng, max_degree);
            let b = self.random_word(&mut rng, max_degree);
            let c = self.random_word(&mut rng, max_degree);
            let (ea, eb, ec) = (self.word(a.clone()), self.word(b.clone()), self.word(c.clone()));
            let left = self.mul(&self.mul(&ea, &eb), &ec);
            let right = self.mul(&ea, &self.mul(&eb, &ec));
            if left != right {
                let rec = |w: &Word| self.word(w.clone()).to_records().remove(0);
                failures.push([rec(&a), rec(&b), rec(&c)]);
            }
        }
        AssociativityReport {
            samples,
            seed,
            failures,
        }
    }

    pub fn element_from_records(&self, records: &[TermRecord]) -> Result<PBWElement> {
        let mut e = PBWElement::zero();
        for rec in records {
            let w = Word::new(rec.g, rec.m.clone(), rec.n.clone());
            self.check_word(&w)?;
            e.add_term(w, CycloNumber::parse_in(&rec.coeff, self.order())?);
        }
        Ok(e)
    }

    /// Text form accepted by the expression parser.
    pub fn format_element(&self, e: &PBWElement) -> String {
        if e.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (idx, (w, c)) in e.terms.iter().enumerate() {
            let mut factors = Vec::new();
            if w.g != 0 {
                factors.push(format!("g{}", w.g));
            }
            for (vars, exps) in [("y", &w.m), ("x", &w.n)] {
                for (i, &p) in exps.iter().enumerate() {
                    match p {
                        0 => {}
                        1 => factors.push(format!("{vars}{}", i + 1)),
                        _ => factors.push(format!("{vars}{}^{p}", i + 1)),
                    }
                }
            }
            let negative = c.term_count() == 1 && c.to_string().starts_with('-');
            let magnitude = if negative { -c } else { c.clone() };
            let coeff = if magnitude.term_count() > 1 {
                format!("({magnitude})")
            } else {
                magnitude.to_string()
            };
            if idx == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            if factors.is_empty() {
                out.push_str(&coeff);
            } else if magnitude.is_one() {
                out.push_str(&factors.join("*"));
            } else {
                out.push_str(&format!("{coeff}*{}", factors.join("*")));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rat;

    fn ctx(name: &str, c: &[(i64, i64)]) -> Arc<AlgebraContext> {
        let n = GroupSpec::named(name).unwrap().cyclotomic_order;
        let values: Vec<CycloNumber> = c.iter().map(|&(a, b)| CycloNumber::from_rational(rat(a, b), n)).collect();
        AlgebraContext::named(name, &values).unwrap()
    }

    #[test]
    fn z2_relation() {
        let a = ctx("cyclic:2", &[(1, 3)]);
        let yx = a.mul(&a.y(0), &a.x(0));
        assert_eq!(yx, a.word(Word::new(0, vec![1], vec![1])));
        let xy = a.mul(&a.x(0), &a.y(0));
        let expected = &(&yx - &a.one()) + &a.g(1).scale(&CycloNumber::from_rational(rat(2, 3), 2));
        assert_eq!(xy, expected);
        let sx = a.mul(&a.g(1), &a.x(0));
        assert_eq!(sx, a.word(Word::new(1, vec![0], vec![1])));
        let xs = a.mul(&a.x(0), &a.g(1));
        assert_eq!(xs, a.word(Word::new(1, vec![0], vec![1])).scale(&a.scalar(-1)));
        assert_eq!(a.format_element(&xy), "-1 + y1*x1 + 2/3*g1");
    }

    #[test]
    fn weyl_algebra_at_zero() {
        for name in ["cyclic:3", "s3-reflection", "minus-id:2"] {
            let a = ctx(name, &[(0, 1)]);
            for i in 0..a.rank() {
                for j in 0..a.rank() {
                    let comm = &a.mul(&a.y(i), &a.x(j)) - &a.mul(&a.x(j), &a.y(i));
                    let expected = if i == j { a.one() } else { PBWElement::zero() };
                    assert_eq!(comm, expected);
                }
            }
        }
    }

    #[test]
    fn filtration_degrees() {
        let a = ctx("cyclic:2", &[(1, 3)]);
        let yx = a.mul(&a.y(0), &a.x(0));
        assert_eq!(yx.filtration_degree(FiltrationKind::Bernstein), Some(2));
        assert_eq!(yx.filtration_degree(FiltrationKind::Geometric), Some(1));
        assert_eq!(a.g(1).filtration_degree(FiltrationKind::Bernstein), Some(0));
        assert_eq!(PBWElement::zero().filtration_degree(FiltrationKind::Geometric), None);
        let e = &a.y(0) + &a.pow(&a.x(0), 3);
        let sym = e.principal_symbol(FiltrationKind::Geometric).unwrap();
        assert_eq!(sym.terms.len(), 1);
        assert!(sym.terms.contains_key(&Word::new(0, vec![1], vec![0])));
        assert!(PBWElement::zero().principal_symbol(FiltrationKind::Bernstein).is_err());
    }

    #[test]
    fn symbols_multiply() {
        let a = ctx("cyclic:2", &[(1, 3)]);
        let sx = a.x(0).principal_symbol(FiltrationKind::Bernstein).unwrap();
        let sy = a.y(0).principal_symbol(FiltrationKind::Bernstein).unwrap();
        let prod = a.symbol_product(&sx, &sy).unwrap();
        let direct = a.mul(&a.x(0), &a.y(0)).principal_symbol(FiltrationKind::Bernstein).unwrap();
        assert_eq!(prod, direct);
    }

    #[test]
    fn associativity_small() {
        assert!(ctx("cyclic:2", &[(1, 3)]).verify_associativity(100, 1).passed());
        assert!(ctx("cyclic:3", &[(1, 2), (1, 5)]).verify_associativity(100, 2).passed());
        assert!(ctx("s3-reflection", &[(1, 3)]).verify_associativity(50, 3).passed());
    }

    #[test]
    fn fourier_basics() {
        let a = ctx("cyclic:3", &[(1, 2), (1, 5)]);
        let (d, fy) = a.fourier_image(&a.y(0)).unwrap();
        assert_eq!(fy, d.x(0).scale(&a.scalar(-1)));
        let (_, fs) = a.fourier_image(&a.g(1)).unwrap();
        assert_eq!(fs, d.g(1));
        let e = &a.mul(&a.x(0), &a.y(0)) + &a.g(2);
        let (_, fe) = a.fourier_image(&e).unwrap();
        let (_, back) = d.fourier_image(&fe).unwrap();
        assert_eq!(back, e);
        let (_, lit) = d.fourier_image_literal(&fe).unwrap();
        assert_eq!(lit, e.antipode());
    }

    #[test]
    fn opposite_parameter_swaps_classes() {
        let a = ctx("cyclic:3", &[(1, 2), (1, 5)]);
        let cbar = a.opposite_parameter();
        assert_eq!(cbar.values()[0], CycloNumber::from_rational(rat(1, 5), 3));
        assert_eq!(cbar.values()[1], CycloNumber::from_rational(rat(1, 2), 3));
        let (o, og) = a.opposite_image(&a.g(1)).unwrap();
        assert_eq!(og, o.g(2));
        let xy = a.mul(&a.x(0), &a.y(0));
        let (_, img) = a.opposite_image(&xy).unwrap();
        let expected = o.mul(&o.y(0).scale(&a.scalar(-1)), &o.x(0));
        assert_eq!(img, expected);
    }

    #[test]
    fn rescaled_reflections_give_same_products() {
        let a = ctx("s3-reflection", &[(2, 7)]);
        let mut refl = a.reflections().to_vec();
        let three = a.scalar(3);
        let third = three.inv().unwrap();
        for r in &mut refl {
            r.alpha = r.alpha.iter().map(|v| v * &three).collect();
            r.alpha_check = r.alpha_check.iter().map(|v| v * &third).collect();
        }
        let b = AlgebraContext::with_reflections(a.group().clone(), refl, a.parameter().clone(), false).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let u = a.random_element(&mut rng, 2, 3);
            let v = a.random_element(&mut rng, 2, 3);
            assert_eq!(a.mul(&u, &v), b.mul(&u, &v));
        }
    }

    #[test]
    fn context_mismatch_detected() {
        let a = ctx("cyclic:2", &[(1, 3)]);
        let b = ctx("s3-reflection", &[(1, 3)]);
        assert!(matches!(a.multiply(&b.x(1), &a.x(0)), Err(Error::ContextMismatch(_))));
    }

    #[test]
    fn records_round_trip() {
        let a = ctx("cyclic:3", &[(1, 2), (1, 5)]);
        let e = a.mul(&a.x(0), &a.pow(&a.y(0), 2));
        let back = a.element_from_records(&e.to_records()).unwrap();
        assert_eq!(back, e);
    }
}
