//! Parameter regimes, lemma checks, the Taylor identity and the final chain.
//!
//! Every check produces a [`BoundReport`]: a measurement with the implied
//! constant of each envelope set to 1. Nothing here draws a conclusion.

mod lemmas;
mod params;
mod taylor;

pub use lemmas::{check_bound, check_expansion, check_lemma1, factorial_margin, lemma1_margin, Probe};
pub use params::{
    build_params, default_scale, doublestar_r, expansion_order, Overrides, ParamSet, Regime, DEFAULT_B, DEFAULT_C0,
    STAR_R,
};
pub use taylor::{final_report, taylor_identity_check, taylor_parts, TaylorParts};

use crate::dirichlet::{GSpec, MollifierSpec, Variant};
use crate::error::{Error, Result};
use crate::format::{decimal, double};
use crate::precision::{float, PrecisionContext};
use crate::roots::{find_mollifier_root_with_bound, RootResult, RootStatus};
use crate::sieve::{mobius_table, MobiusTable};
use rug::Float;
use serde::{Serialize, Serializer};

fn as_decimal<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&double(*x))
}

#[derive(Clone, Debug, Serialize)]
pub struct Entry {
    pub name: String,
    pub value: String,
}

impl Entry {
    pub fn float(name: &str, x: &Float, err: f64) -> Self {
        Self { name: name.into(), value: decimal(x, err) }
    }

    pub fn num(name: &str, x: f64) -> Self {
        Self { name: name.into(), value: double(x) }
    }

    pub fn text(name: &str, value: impl Into<String>) -> Self {
        Self { name: name.into(), value: value.into() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GridRow {
    pub label: String,
    #[serde(serialize_with = "as_decimal")]
    pub lhs: f64,
    #[serde(serialize_with = "as_decimal")]
    pub rhs: f64,
    #[serde(serialize_with = "as_decimal")]
    pub ratio: f64,
    pub in_domain: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub lemma_id: String,
    #[serde(serialize_with = "as_decimal")]
    pub lhs: f64,
    #[serde(serialize_with = "as_decimal")]
    pub rhs_envelope: f64,
    #[serde(serialize_with = "as_decimal")]
    pub ratio: f64,
    pub hypotheses_satisfied: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violations: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub params: Option<ParamSet>,
    pub notes: Vec<String>,
    pub extra: Vec<Entry>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub rows: Vec<GridRow>,
}

impl BoundReport {
    fn new(lemma_id: &str, lhs: f64, rhs_envelope: f64) -> Self {
        let ratio = if rhs_envelope > 0.0 { lhs / rhs_envelope } else { f64::NAN };
        Self {
            lemma_id: lemma_id.into(),
            lhs,
            rhs_envelope,
            ratio,
            hypotheses_satisfied: true,
            violations: None,
            params: None,
            notes: Vec::new(),
            extra: Vec::new(),
            rows: Vec::new(),
        }
    }

    /// Looks up an `extra` entry by name.
    pub fn get(&self, name: &str) -> Option<&str> {
        self.extra.iter().find(|e| e.name == name).map(|e| e.value.as_str())
    }

    /// CSV dump of the grid rows (columns label,lhs,rhs,ratio,in_domain).
    pub fn rows_csv(&self) -> String {
        let mut out = String::from("label,lhs,rhs,ratio,in_domain\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                r.label,
                double(r.lhs),
                double(r.rhs),
                double(r.ratio),
                r.in_domain
            ));
        }
        out
    }
}

/// A parameter set made concrete: the Moebius table, the located mollifier
/// root and the resulting G.
pub struct Instance {
    pub params: ParamSet,
    pub table: MobiusTable,
    pub root: RootResult,
    pub g: GSpec,
    pub notes: Vec<String>,
}

const FALLBACK_RADII: [f64; 3] = [0.25, 0.5, 1.0];

pub fn variant_for(regime: Regime) -> Variant {
    match regime {
        Regime::Doublestar => Variant::Standard,
        Regime::Star => Variant::Tilde,
    }
}

/// Bracket radius the construction allows for the mollifier root: V^(a-1) for the
/// standard mollifier and V^(-c0) for the tilde one.
pub fn stated_root_radius(params: &ParamSet, variant: Variant) -> f64 {
    let v = params.length as f64;
    match variant {
        Variant::Standard => v.powf(params.a - 1.0).min(1.0),
        Variant::Tilde => v.powf(-params.c0),
    }
}

/// Locates the real root of M_V nearest 1, widening the bracket when the
/// stated radius holds no sign change.
pub fn locate_root(
    params: &ParamSet,
    variant: Variant,
    table: &MobiusTable,
    ctx: &PrecisionContext,
    notes: &mut Vec<String>,
) -> Result<RootResult> {
    let length = params.length as usize;
    let stated = stated_root_radius(params, variant);
    let mut radii = vec![stated];
    radii.extend(FALLBACK_RADII.iter().copied().filter(|&r| r > stated));
    for radius in radii {
        let found = find_mollifier_root_with_bound(length, radius, stated, table, ctx)?;
        if found.status == RootStatus::Found {
            if radius > stated {
                notes.push(format!(
                    "no sign change of M_V within {} of 1; bracket widened to {}",
                    double(stated),
                    double(radius)
                ));
            }
            if !found.within_stated_bound {
                notes.push(format!(
                    "mollifier root {} lies outside the stated bracket |s-1| <= {}",
                    double(found.value.to_f64()),
                    double(stated)
                ));
            }
            if found.sign_changes > 1 {
                notes.push(format!("M_V has {} sign changes in the scanned bracket", found.sign_changes));
            }
            return Ok(found);
        }
    }
    Err(Error::NonConvergence(format!("M_V has no real root within 1 of s = 1 for V = {length}")))
}

pub fn mollifier_for(
    params: &ParamSet,
    variant: Variant,
    ctx: &PrecisionContext,
    notes: &mut Vec<String>,
) -> Result<(MobiusTable, RootResult, MollifierSpec)> {
    let table = mobius_table(params.length as usize)?;
    let root = locate_root(params, variant, &table, ctx, notes)?;
    let spec = MollifierSpec::new(params.length as usize, root.value.clone(), variant)?;
    Ok((table, root, spec))
}

pub fn instantiate(params: &ParamSet, ctx: &PrecisionContext) -> Result<Instance> {
    let bits = ctx.working_bits;
    let mut notes = Vec::new();
    let variant = variant_for(params.regime);
    let (table, root, spec) = mollifier_for(params, variant, ctx, &mut notes)?;
    let g = GSpec::new(spec, params.scale, float(bits, params.v), float(bits, params.s0))?;
    Ok(Instance { params: params.clone(), table, root, g, notes })
}
