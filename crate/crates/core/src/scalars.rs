//! Exact arithmetic in the cyclotomic fields Q(ζ_N).
//!
//! An element of Q(ζ_N) is stored in the power basis 1, ζ, …, ζ^{φ(N)-1},
//! i.e. as a rational polynomial reduced modulo the N-th cyclotomic
//! polynomial Φ_N. This representation is canonical, so structural equality
//! is value equality.
//!
//! Values of different orders never mix implicitly: arithmetic operators
//! panic on an order mismatch, and the `checked_*` methods report it as
//! [`Error::OrderMismatch`]. Use [`CycloNumber::embed`] to move values into a
//! common order.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::atomic::{AtomicU32, Ordering};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub const DEFAULT_MAX_ORDER: u32 = 120;

static MAX_ORDER: AtomicU32 = AtomicU32::new(DEFAULT_MAX_ORDER);

/// Raise or lower the largest cyclotomic order accepted by constructors.
pub fn set_max_order(limit: u32) {
    MAX_ORDER.store(limit.max(1), Ordering::Relaxed);
}

pub fn max_order() -> u32 {
    MAX_ORDER.load(Ordering::Relaxed)
}

fn check_order(order: u32) -> Result<()> {
    let limit = max_order();
    if order == 0 || order > limit {
        return Err(Error::UnsupportedOrder { order, limit });
    }
    Ok(())
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Formats a rational as `a` or `a/b`.
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

type PhiCache = Mutex<HashMap<u32, Arc<Vec<BigInt>>>>;

fn phi_cache() -> &'static PhiCache {
    static CACHE: OnceLock<PhiCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Integer coefficients of Φ_N, lowest degree first. Φ_N is monic.
pub fn cyclotomic_polynomial(order: u32) -> Arc<Vec<BigInt>> {
    if let Some(p) = phi_cache().lock().unwrap().get(&order) {
        return p.clone();
    }
    // x^N - 1 divided by Φ_d for every proper divisor d of N.
    let n = order as usize;
    let mut poly = vec![BigInt::zero(); n + 1];
    poly[0] = BigInt::from(-1);
    poly[n] = BigInt::one();
    for d in 1..order {
        if order % d == 0 {
            let divisor = cyclotomic_polynomial(d);
            poly = exact_monic_division(&poly, &divisor);
        }
    }
    let poly = Arc::new(poly);
    phi_cache()
        .lock()
        .unwrap()
        .insert(order, poly.clone());
    poly
}

fn exact_monic_division(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dd = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![BigInt::zero(); num.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= &c * dj;
        }
        quot[i] = c;
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()));
    quot
}

pub fn euler_phi(order: u32) -> usize {
    cyclotomic_polynomial(order).len() - 1
}

/// Reduce a rational polynomial modulo Φ_N in place and truncate it to φ(N)
/// coefficients.
fn reduce_mod_phi(mut poly: Vec<Rational>, order: u32) -> Vec<Rational> {
    let phi = cyclotomic_polynomial(order);
    let deg = phi.len() - 1;
    if poly.len() > deg {
        for i in (deg..poly.len()).rev() {
            let c = std::mem::replace(&mut poly[i], Rational::zero());
            if c.is_zero() {
                continue;
            }
            for (j, pj) in phi.iter().enumerate().take(deg) {
                if !pj.is_zero() {
                    poly[i - deg + j] -= &c * pj;
                }
            }
        }
        poly.truncate(deg);
    }
    poly.resize(deg, Rational::zero());
    poly
}

/// An exact element of Q(ζ_N) in canonical power-basis form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycloNumber {
    order: u32,
    coeffs: Vec<Rational>,
}

impl CycloNumber {
    pub fn zero(order: u32) -> Self {
        CycloNumber {
            order,
            coeffs: vec![Rational::zero(); euler_phi(order)],
        }
    }

    pub fn one(order: u32) -> Self {
        Self::from_rational(Rational::one(), order)
    }

    pub fn from_rational(q: Rational, order: u32) -> Self {
        let mut coeffs = vec![Rational::zero(); euler_phi(order)];
        coeffs[0] = q;
        CycloNumber { order, coeffs }
    }

    pub fn from_int(n: i64, order: u32) -> Self {
        Self::from_rational(rat_int(n), order)
    }

    /// Build from raw power-basis coefficients, reducing modulo Φ_N.
    pub fn from_coeffs(order: u32, coeffs: Vec<Rational>) -> Result<Self> {
        check_order(order)?;
        Ok(CycloNumber {
            order,
            coeffs: reduce_mod_phi(coeffs, order),
        })
    }

    /// ζ_N^k in canonical form.
    pub fn root(order: u32, k: i64) -> Result<Self> {
        check_order(order)?;
        let e = k.rem_euclid(order as i64) as usize;
        let mut poly = vec![Rational::zero(); e + 1];
        poly[e] = Rational::one();
        Ok(CycloNumber {
            order,
            coeffs: reduce_mod_phi(poly, order),
        })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// The value as a rational number, when it lies in Q.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// The value as a machine integer, when it is a rational integer.
    pub fn as_integer(&self) -> Option<i64> {
        self.as_rational()
            .filter(|q| q.is_integer())
            .and_then(|q| q.numer().to_i64())
    }

    /// Represent the same value in Q(ζ_M).
    pub fn embed(&self, target: u32) -> Result<Self> {
        check_order(target)?;
        if target % self.order != 0 {
            return Err(Error::BadEmbedding {
                from: self.order,
                to: target,
            });
        }
        if target == self.order {
            return Ok(self.clone());
        }
        let step = (target / self.order) as usize;
        let mut poly = vec![Rational::zero(); (self.coeffs.len().max(1) - 1) * step + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            poly[i * step] = c.clone();
        }
        Ok(CycloNumber {
            order: target,
            coeffs: reduce_mod_phi(poly, target),
        })
    }

    /// Represent the value in the smallest order dividing the current one
    /// that still contains it.
    pub fn reduce_order(&self) -> Self {
        let mut best = self.clone();
        for d in 1..self.order {
            if self.order % d != 0 {
                continue;
            }
            if let Some(v) = self.try_descend(d) {
                best = v;
                break;
            }
        }
        best
    }

    fn try_descend(&self, d: u32) -> Option<CycloNumber> {
        // Images of the basis of Q(ζ_d) inside Q(ζ_N); solve by elimination.
        let k = euler_phi(d);
        let images: Vec<CycloNumber> = (0..k)
            .map(|i| CycloNumber::root(d, i as i64).unwrap().embed(self.order).unwrap())
            .collect();
        let n = self.coeffs.len();
        let mut rows: Vec<Vec<Rational>> = (0..n)
            .map(|r| {
                let mut row: Vec<Rational> = images.iter().map(|img| img.coeffs[r].clone()).collect();
                row.push(self.coeffs[r].clone());
                row
            })
            .collect();
        let solution = crate::linalg::solve_augmented_rational(&mut rows, k)?;
        CycloNumber::from_coeffs(d, solution).ok()
    }

    fn assert_same_order(&self, other: &Self) {
        assert_eq!(
            self.order, other.order,
            "cyclotomic order mismatch; embed into a common order first"
        );
    }

    fn same_order(&self, other: &Self) -> Result<()> {
        if self.order != other.order {
            return Err(Error::OrderMismatch {
                left: self.order,
                right: other.order,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_order(other)?;
        Ok(self + other)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.same_order(other)?;
        Ok(self - other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_order(other)?;
        Ok(self * other)
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.same_order(other)?;
        Ok(self * &other.inv()?)
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return CycloNumber::zero(self.order);
        }
        CycloNumber {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.scale(&rat_int(k))
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against Φ_N.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(CycloNumber::from_rational(q.recip(), self.order));
        }
        let phi: Vec<Rational> = cyclotomic_polynomial(self.order)
            .iter()
            .map(|c| Rational::from_integer(c.clone()))
            .collect();
        let a = trim(self.coeffs.clone());
        // Invariant: r0 = s0 * a (mod Φ), r1 = s1 * a (mod Φ).
        let (mut r0, mut r1) = (phi, a);
        let (mut s0, mut s1) = (vec![], vec![Rational::one()]);
        while !(r1.len() == 1) {
            let (q, r) = poly_divrem(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            if r1.is_empty() {
                // gcd is r0 of positive degree: impossible since Φ_N is irreducible.
                unreachable!("Φ_N is irreducible over Q");
            }
        }
        let c = r1[0].recip();
        let inv: Vec<Rational> = s1.into_iter().map(|x| x * &c).collect();
        Ok(CycloNumber {
            order: self.order,
            coeffs: reduce_mod_phi(inv, self.order),
        })
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = CycloNumber::one(self.order);
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            b = &b * &b;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Number of nonzero power-basis coefficients.
    pub fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// Parse the textual scalar syntax (`1/2 + 1/3*z3^2`) into the smallest
    /// order that contains every root literal.
    pub fn parse(src: &str) -> Result<Self> {
        let ast = ScalarParser::new(src).parse()?;
        let order = ast.root_orders().into_iter().fold(1u32, |acc, n| acc.lcm(&n));
        ast.eval(order)
    }

    /// Parse and evaluate directly in Q(ζ_order).
    pub fn parse_in(src: &str, order: u32) -> Result<Self> {
        let ast = ScalarParser::new(src).parse()?;
        for n in ast.root_orders() {
            if order % n != 0 {
                return Err(Error::BadEmbedding { from: n, to: order });
            }
        }
        ast.eval(order)
    }
}

fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let mut out = vec![Rational::zero(); n];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    trim(out)
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut rem = trim(a.to_vec());
    let b = trim(b.to_vec());
    let lead = b.last().expect("nonzero divisor").clone();
    if rem.len() < b.len() {
        return (vec![], rem);
    }
    let mut quot = vec![Rational::zero(); rem.len() - b.len() + 1];
    while rem.len() >= b.len() {
        let shift = rem.len() - b.len();
        let c = rem.last().unwrap() / &lead;
        for (j, bj) in b.iter().enumerate() {
            rem[shift + j] -= &c * bj;
        }
        quot[shift] = c;
        rem.pop();
        rem = trim(rem);
    }
    (trim(quot), rem)
}

impl<'a> Add<&'a CycloNumber> for &'a CycloNumber {
    type Output = CycloNumber;
    fn add(self, rhs: &CycloNumber) -> CycloNumber {
        self.assert_same_order(rhs);
        CycloNumber {
            order: self.order,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a CycloNumber> for &'a CycloNumber {
    type Output = CycloNumber;
    fn sub(self, rhs: &CycloNumber) -> CycloNumber {
        self.assert_same_order(rhs);
        CycloNumber {
            order: self.order,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<'a> Mul<&'a CycloNumber> for &'a CycloNumber {
    type Output = CycloNumber;
    fn mul(self, rhs: &CycloNumber) -> CycloNumber {
        self.assert_same_order(rhs);
        if self.coeffs.len() == 1 {
            return CycloNumber {
                order: self.order,
                coeffs: vec![&self.coeffs[0] * &rhs.coeffs[0]],
            };
        }
        let n = self.coeffs.len();
        let mut prod = vec![Rational::zero(); 2 * n - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        CycloNumber {
            order: self.order,
            coeffs: reduce_mod_phi(prod, self.order),
        }
    }
}

impl Add for CycloNumber {
    type Output = CycloNumber;
    fn add(self, rhs: CycloNumber) -> CycloNumber {
        &self + &rhs
    }
}

impl Sub for CycloNumber {
    type Output = CycloNumber;
    fn sub(self, rhs: CycloNumber) -> CycloNumber {
        &self - &rhs
    }
}

impl Mul for CycloNumber {
    type Output = CycloNumber;
    fn mul(self, rhs: CycloNumber) -> CycloNumber {
        &self * &rhs
    }
}

impl Neg for &CycloNumber {
    type Output = CycloNumber;
    fn neg(self) -> CycloNumber {
        CycloNumber {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for CycloNumber {
    type Output = CycloNumber;
    fn neg(self) -> CycloNumber {
        -&self
    }
}

impl fmt::Display for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let root = match i {
                0 => String::new(),
                1 => format!("z{}", self.order),
                _ => format!("z{}^{}", self.order, i),
            };
            if root.is_empty() {
                write!(f, "{}", format_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "{root}")?;
            } else {
                write!(f, "{}*{root}", format_rational(&mag))?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [Q(z{})]", self, self.order)
    }
}

// Scalar literal syntax.

#[derive(Debug)]
enum ScalarAst {
    Rational(Rational),
    Root { order: u32, exp: i64 },
    Neg(Box<ScalarAst>),
    Add(Box<ScalarAst>, Box<ScalarAst>),
    Sub(Box<ScalarAst>, Box<ScalarAst>),
    Mul(Box<ScalarAst>, Box<ScalarAst>),
}

impl ScalarAst {
    fn root_orders(&self) -> Vec<u32> {
        match self {
            ScalarAst::Rational(_) => vec![],
            ScalarAst::Root { order, .. } => vec![*order],
            ScalarAst::Neg(a) => a.root_orders(),
            ScalarAst::Add(a, b) | ScalarAst::Sub(a, b) | ScalarAst::Mul(a, b) => {
                let mut v = a.root_orders();
                v.extend(b.root_orders());
                v
            }
        }
    }

    fn eval(&self, order: u32) -> Result<CycloNumber> {
        check_order(order)?;
        Ok(match self {
            ScalarAst::Rational(q) => CycloNumber::from_rational(q.clone(), order),
            ScalarAst::Root { order: n, exp } => CycloNumber::root(*n, *exp)?.embed(order)?,
            ScalarAst::Neg(a) => -a.eval(order)?,
            ScalarAst::Add(a, b) => a.eval(order)? + b.eval(order)?,
            ScalarAst::Sub(a, b) => a.eval(order)? - b.eval(order)?,
            ScalarAst::Mul(a, b) => a.eval(order)? * b.eval(order)?,
        })
    }
}

struct ScalarParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> ScalarParser<'a> {
    fn new(src: &'a str) -> Self {
        ScalarParser {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::parse(1, self.pos + 1, msg))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn number(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a number");
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(text.parse::<BigInt>().unwrap())
    }

    fn parse(mut self) -> Result<ScalarAst> {
        let e = self.expr()?;
        if self.peek().is_some() {
            return self.err("unexpected trailing input");
        }
        Ok(e)
    }

    fn expr(&mut self) -> Result<ScalarAst> {
        let mut lhs = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                ScalarAst::Neg(Box::new(self.term()?))
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    lhs = ScalarAst::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(b'-') => {
                    self.pos += 1;
                    lhs = ScalarAst::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<ScalarAst> {
        let mut lhs = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            lhs = ScalarAst::Mul(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<ScalarAst> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(b'z') => {
                self.pos += 1;
                let n = self.number()?;
                let order = n
                    .to_u32()
                    .filter(|&o| o >= 1)
                    .ok_or_else(|| Error::parse(1, self.pos, "bad root order"))?;
                let mut exp = 1i64;
                if self.peek() == Some(b'^') {
                    self.pos += 1;
                    let neg = if self.peek() == Some(b'-') {
                        self.pos += 1;
                        true
                    } else {
                        false
                    };
                    let e = self
                        .number()?
                        .to_i64()
                        .ok_or_else(|| Error::parse(1, self.pos, "exponent too large"))?;
                    exp = if neg { -e } else { e };
                }
                Ok(ScalarAst::Root { order, exp })
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.number()?;
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let den = self.number()?;
                    if den.is_zero() {
                        return self.err("zero denominator");
                    }
                    Ok(ScalarAst::Rational(Rational::new(num, den)))
                } else {
                    Ok(ScalarAst::Rational(Rational::from_integer(num)))
                }
            }
            Some(_) => self.err("unexpected character"),
            None => self.err("unexpected end of input"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u32, k: i64) -> CycloNumber {
        CycloNumber::root(n, k).unwrap()
    }

    #[test]
    fn roots_of_unity() {
        assert_eq!(z(4, 2), CycloNumber::from_int(-1, 4));
        assert!(z(3, 0).is_one());
        assert_eq!(&z(3, 1) + &z(3, 2), CycloNumber::from_int(-1, 3));
        assert!((&z(3, 1) * &z(3, 2)).is_one());
        for n in [5u32, 7, 12] {
            assert_eq!(CycloNumber::one(n).checked_div(&z(n, 1)).unwrap(), z(n, n as i64 - 1));
        }
    }

    #[test]
    fn rationals_in_order_one() {
        let a = CycloNumber::from_rational(rat(1, 2), 1);
        let b = CycloNumber::from_rational(rat(1, 3), 1);
        assert_eq!(a + b, CycloNumber::from_rational(rat(5, 6), 1));
    }

    #[test]
    fn embeddings() {
        assert_eq!(CycloNumber::from_int(-1, 2).embed(4).unwrap(), z(4, 2));
        assert_eq!(CycloNumber::from_rational(rat(3, 7), 1).embed(5).unwrap(), CycloNumber::from_rational(rat(3, 7), 5));
        let e = z(3, 1).embed(6).unwrap();
        assert_eq!(e, z(6, 2));
        // ζ_6^2 satisfies Φ_3(t) = t^2 + t + 1.
        let one = CycloNumber::one(6);
        assert!((&(&(&e * &e) + &e) + &one).is_zero());
        assert!(matches!(z(3, 1).embed(4), Err(Error::BadEmbedding { .. })));
    }

    #[test]
    fn phi_vanishes_at_zeta() {
        for n in 1..=60u32 {
            let phi = cyclotomic_polynomial(n);
            let zeta = z(n, 1);
            let mut acc = CycloNumber::zero(n);
            let mut power = CycloNumber::one(n);
            for c in phi.iter() {
                acc = &acc + &power.scale(&Rational::from_integer(c.clone()));
                power = &power * &zeta;
            }
            assert!(acc.is_zero(), "Φ_{n}(ζ_{n}) != 0");
        }
    }

    #[test]
    fn degrees_of_cyclotomic_polynomials() {
        let expected = [(1u32, 1usize), (2, 1), (3, 2), (4, 2), (6, 2), (8, 4), (12, 4), (15, 8), (120, 32)];
        for (n, d) in expected {
            assert_eq!(euler_phi(n), d);
        }
    }

    #[test]
    fn division_by_zero_and_mismatch() {
        assert_eq!(CycloNumber::one(3).checked_div(&CycloNumber::zero(3)), Err(Error::DivisionByZero));
        assert!(matches!(z(3, 1).checked_add(&z(4, 1)), Err(Error::OrderMismatch { .. })));
        assert!(matches!(CycloNumber::root(121, 1), Err(Error::UnsupportedOrder { .. })));
    }

    #[test]
    fn parse_and_display() {
        let v = CycloNumber::parse("1/2 + 1/3*z3^2").unwrap();
        assert_eq!(v.order(), 3);
        // z3^2 = -1 - z3
        assert_eq!(v.to_string(), "1/6 - 1/3*z3");
        assert_eq!(CycloNumber::parse_in(&v.to_string(), 3).unwrap(), v);
        assert_eq!(CycloNumber::parse("-3").unwrap().to_string(), "-3");
        assert_eq!(CycloNumber::parse("z4^-1").unwrap(), -z(4, 1));
        assert!(CycloNumber::parse("1/0").is_err());
        assert!(CycloNumber::parse_in("z3", 4).is_err());
        assert_eq!(CycloNumber::zero(5).to_string(), "0");
    }

    #[test]
    fn descend_to_smaller_order() {
        let v = z(6, 2).embed(12).unwrap();
        let r = v.reduce_order();
        assert_eq!(r.order(), 3);
        assert_eq!(r, z(3, 1));
    }
}
