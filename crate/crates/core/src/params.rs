//! Regularity of parameters: the degree criterion for real groups with a
//! constant parameter, and a bounded Verma singular-vector probe in rank 1.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::pbw::AlgebraContext;
use crate::rank1::CyclicDatum;
use crate::representations::find_singular_vectors;
use crate::scalars::{format_rational, rat_int, Rational};

pub const DEFAULT_PROBE_BOUND: u32 = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regularity {
    Regular,
    RegularUpToBound,
    NotRegular,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Witness {
    /// c = m/d with d not dividing m.
    Degree { m: i64, d: u32 },
    /// A singular vector in the Verma module of the given character.
    SingularVector { character: Vec<String>, degree: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegularityVerdict {
    pub regularity: Regularity,
    pub method: String,
    pub witnesses: Vec<Witness>,
    pub bound: Option<u32>,
}

impl RegularityVerdict {
    pub fn is_regular(&self) -> bool {
        matches!(self.regularity, Regularity::Regular | Regularity::RegularUpToBound)
    }
}

/// Regular iff c ≠ m/d_i for every degree d_i and integer m with d_i ∤ m.
/// Valid for real reflection groups with constant c.
pub fn is_regular_by_degrees(degrees: &[u32], c: &Rational) -> RegularityVerdict {
    let mut witnesses = Vec::new();
    if !c.is_integer() {
        for &d in degrees {
            let m = c * rat_int(d as i64);
            if m.is_integer() {
                witnesses.push(Witness::Degree {
                    m: m.to_integer().try_into().unwrap_or(i64::MAX),
                    d,
                });
                break;
            }
        }
    }
    RegularityVerdict {
        regularity: if witnesses.is_empty() {
            Regularity::Regular
        } else {
            Regularity::NotRegular
        },
        method: format!("degrees {degrees:?}, c = {}", format_rational(c)),
        witnesses,
        bound: None,
    }
}

/// Search every linear character's Verma module for singular vectors up to
/// `bound`. A hit proves non-regularity; no hit is only "regular up to bound".
pub fn regularity_probe(ctx: &Arc<AlgebraContext>, bound: u32) -> Result<RegularityVerdict> {
    if ctx.rank() != 1 {
        return Err(Error::InvalidInput("the Verma probe is implemented in rank 1".into()));
    }
    let mut witnesses = Vec::new();
    for ch in ctx.group().linear_characters() {
        if let Some(sv) = find_singular_vectors(ctx, &ch, bound)?.into_iter().next() {
            witnesses.push(Witness::SingularVector {
                character: ch.generator_labels(ctx.group()),
                degree: sv.degree,
            });
        }
    }
    Ok(RegularityVerdict {
        regularity: if witnesses.is_empty() {
            Regularity::RegularUpToBound
        } else {
            Regularity::NotRegular
        },
        method: "Verma singular-vector probe".into(),
        witnesses,
        bound: Some(bound),
    })
}

pub fn regularity_probe_rank1(datum: &CyclicDatum, bound: u32) -> Result<RegularityVerdict> {
    regularity_probe(&datum.algebra_context()?, bound)
}

fn is_real(ctx: &AlgebraContext) -> bool {
    ctx.group().elements().iter().all(|g| {
        (0..g.rows()).all(|i| g.row(i).iter().all(|v| v.reduce_order().order() == 1))
    })
}

/// Best available verdict for a context: trivially regular for c = 0, the
/// degree criterion where it applies, the rank-1 probe otherwise.
pub fn regularity_of_context(ctx: &Arc<AlgebraContext>) -> RegularityVerdict {
    if ctx.reflections().is_empty() || ctx.parameter().is_zero() {
        return RegularityVerdict {
            regularity: Regularity::Regular,
            method: "zero parameter".into(),
            witnesses: vec![],
            bound: None,
        };
    }
    let values = ctx.parameter().values();
    let constant = values.windows(2).all(|w| w[0] == w[1]);
    let rational = values[0].as_rational();
    if let (Some(deg), true, Some(c)) = (&ctx.group().spec().degrees, constant, rational) {
        if is_real(ctx) {
            return is_regular_by_degrees(deg, &c);
        }
    }
    if ctx.rank() == 1 {
        if let Ok(v) = regularity_probe(ctx, DEFAULT_PROBE_BOUND) {
            return v;
        }
    }
    RegularityVerdict {
        regularity: Regularity::Unknown,
        method: "no applicable criterion".into(),
        witnesses: vec![],
        bound: None,
    }
}
