use crate::error::{Error, Result};
use crate::format::double;
use serde::{Serialize, Serializer};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// Zeros right up against Re s = 1; a = 1 + r.
    Star,
    /// Zeros bounded away from Re s = 1 by b; a = b + (1 + 2r)/2.
    Doublestar,
}

impl std::str::FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "star" => Ok(Regime::Star),
            "doublestar" => Ok(Regime::Doublestar),
            _ => Err(Error::Domain(format!("unknown regime '{s}' (expected star or doublestar)"))),
        }
    }
}

pub const DEFAULT_B: f64 = 0.1;
pub const DEFAULT_C0: f64 = 1e-3;
pub const STAR_R: f64 = 1.0 / 3000.0;

fn as_decimal<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&double(*x))
}

#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub b: Option<f64>,
    pub epsilon: Option<f64>,
    pub r: Option<f64>,
    pub a: Option<f64>,
    pub z0: Option<f64>,
    pub z1: Option<f64>,
    pub scale: Option<u64>,
    pub big_j: Option<u32>,
    pub c0: Option<f64>,
    pub strict: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ParamSet {
    pub regime: Regime,
    #[serde(serialize_with = "as_decimal")]
    pub b: f64,
    #[serde(serialize_with = "as_decimal")]
    pub epsilon: f64,
    #[serde(serialize_with = "as_decimal")]
    pub r: f64,
    #[serde(serialize_with = "as_decimal")]
    pub a: f64,
    #[serde(serialize_with = "as_decimal")]
    pub gamma0: f64,
    #[serde(serialize_with = "as_decimal")]
    pub beta0: f64,
    #[serde(rename = "T", serialize_with = "as_decimal")]
    pub height: f64,
    #[serde(serialize_with = "as_decimal")]
    pub v: f64,
    #[serde(serialize_with = "as_decimal")]
    pub w_re: f64,
    #[serde(serialize_with = "as_decimal")]
    pub w_im: f64,
    #[serde(serialize_with = "as_decimal")]
    pub s0: f64,
    #[serde(serialize_with = "as_decimal")]
    pub z0: f64,
    #[serde(serialize_with = "as_decimal")]
    pub z1: f64,
    #[serde(rename = "U")]
    pub scale: u64,
    #[serde(rename = "V")]
    pub length: u64,
    #[serde(rename = "J")]
    pub big_j: u32,
    #[serde(serialize_with = "as_decimal")]
    pub c0: f64,
    pub strict: bool,
    pub notes: Vec<String>,
}

/// J = 2 floor(z0 log U + 2).
pub fn expansion_order(z0: f64, scale: u64) -> u32 {
    (2.0 * (z0 * (scale as f64).ln() + 2.0).floor()) as u32
}

/// U = V^(2/3), rounded.
pub fn default_scale(length: u64) -> u64 {
    ((length as f64).powf(2.0 / 3.0).round() as u64).clamp(2, length)
}

pub fn doublestar_r(b: f64) -> f64 {
    (1.0f64 / 100.0).min(20.0 * b / 181.0).min(10.0 * (1.0 - 2.0 * b) / 221.0)
}

pub fn build_params(regime: Regime, length: u64, gamma0: f64, beta0: f64, over: &Overrides) -> Result<ParamSet> {
    if length < 2 {
        return Err(Error::Domain("V must be at least 2".into()));
    }
    if !(gamma0 >= 2.0) {
        return Err(Error::Domain(format!("gamma0 must be at least 2, got {gamma0}")));
    }
    let mut notes = Vec::new();
    let (b, r, epsilon, a) = match regime {
        Regime::Doublestar => {
            let b = over.b.unwrap_or(DEFAULT_B);
            let r = over.r.unwrap_or_else(|| doublestar_r(b));
            let epsilon = over.epsilon.unwrap_or(r / 100.0);
            let a = over.a.unwrap_or(b + (1.0 + 2.0 * r) / 2.0);
            (b, r, epsilon, a)
        }
        Regime::Star => {
            let r = over.r.unwrap_or(STAR_R);
            let epsilon = over.epsilon.unwrap_or(r / 10.0);
            let a = over.a.unwrap_or(1.0 + r);
            (over.b.unwrap_or(0.5), r, epsilon, a)
        }
    };
    if !(r > 0.0 && epsilon > 0.0) {
        return Err(Error::InconsistentParams(format!("r={r} and epsilon={epsilon} must be positive")));
    }
    let height = 2.0 * gamma0 / 3.0;
    let v = gamma0;
    let s0 = a + r;
    let mut beta0 = beta0;
    let z0 = match over.z0 {
        Some(z0) => {
            if (s0 - beta0 - z0).abs() > 1e-15 {
                notes.push(format!("z0 overridden to {}; beta0 moved to s0 - z0 = {}", double(z0), double(s0 - z0)));
                beta0 = s0 - z0;
            }
            z0
        }
        None => s0 - beta0,
    };
    if !(z0 >= 0.0) {
        return Err(Error::InconsistentParams(format!("z0 = s0 - beta0 = {z0} is negative")));
    }
    let z1 = over.z1.unwrap_or(z0);
    if z1 < z0 {
        return Err(Error::InconsistentParams(format!("z1={z1} below z0={z0}")));
    }
    if z1 > 2.0 * z0 {
        return Err(Error::InconsistentParams(format!("z1={z1} above 2 z0={}", 2.0 * z0)));
    }
    let scale = over.scale.unwrap_or_else(|| default_scale(length));
    if scale < 2 || scale > length {
        return Err(Error::InconsistentParams(format!("need 2 <= U <= V, got U={scale}")));
    }
    let formula_j = expansion_order(z0, scale);
    let big_j = match over.big_j {
        Some(0) => return Err(Error::InconsistentParams("J must be positive".into())),
        Some(j) => {
            if j != formula_j {
                notes.push(format!("J overridden to {j}; 2 floor(z0 log U + 2) = {formula_j}"));
            }
            j
        }
        None => formula_j,
    };
    let c0 = over.c0.unwrap_or(DEFAULT_C0);

    let mut violated = Vec::new();
    match regime {
        Regime::Doublestar => {
            if !(0.0 < 200.0 * epsilon && 200.0 * epsilon <= 2.0 * r) {
                violated.push("0 < 200 eps <= 2r fails".to_string());
            }
            if !(2.0 * r <= (1.0 - a).min(1.0 / 50.0)) {
                violated.push("2r <= min(1 - a, 1/50) fails".to_string());
            }
            if !(a >= b + (1.0 + 2.0 * r) / 2.0 - 1e-15 && a < 1.0) {
                violated.push("b + (1+2r)/2 <= a < 1 fails".to_string());
            }
            if !(0.0 < b && b < 0.5) {
                violated.push("0 < b < 1/2 fails".to_string());
            }
        }
        Regime::Star => {
            if !(0.0 < 10.0 * epsilon && 10.0 * epsilon <= r + 1e-18 && r <= 1.0 / 1000.0) {
                violated.push("0 < 10 eps <= r <= 1/1000 fails".to_string());
            }
            if (a - 1.0 - r).abs() > 1e-15 {
                violated.push("a = 1 + r fails".to_string());
            }
        }
    }
    if !(2.0 <= height && height <= v && v <= 2.0 * height) {
        violated.push("2 <= T <= v <= 2T fails".to_string());
    }
    if over.strict && !violated.is_empty() {
        return Err(Error::InconsistentParams(violated.join("; ")));
    }
    notes.extend(violated);
    if gamma0 <= 1e10 {
        notes.push(format!("desk scale: gamma0 = {} instead of gamma0 > 1e10", double(gamma0)));
    }
    // Compared in logs: T^(2/r) overflows a double for the star regime.
    let log10_floor = 2.0 / r * height.log10();
    if (length as f64).log10() < log10_floor {
        notes.push(format!("desk scale: V = {length} below T^(2/r) = 10^{}", double(log10_floor)));
    }
    let beta_lo = match regime {
        Regime::Doublestar => b + (1.0 - 2.0 * epsilon) / 2.0,
        Regime::Star => 1.0 - epsilon,
    };
    if beta0 < beta_lo {
        notes.push(format!("beta0 = {} below the regime's lower bound {}", double(beta0), double(beta_lo)));
    }
    Ok(ParamSet {
        regime,
        b,
        epsilon,
        r,
        a,
        gamma0,
        beta0,
        height,
        v,
        w_re: a,
        w_im: v,
        s0,
        z0,
        z1,
        scale,
        length,
        big_j,
        c0,
        strict: over.strict,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn doublestar_defaults() {
        let p = build_params(Regime::Doublestar, 10_000, 14.1347, 0.5, &Overrides::default()).unwrap();
        assert_eq!(p.r, 0.01);
        assert!((p.a - 0.61).abs() < 1e-15);
        assert!((p.epsilon - 1e-4).abs() < 1e-18);
        assert_eq!(p.scale, 464);
        assert_eq!(p.big_j, expansion_order(p.z0, 464));
    }

    #[test]
    fn star_and_scale() {
        let p = build_params(Regime::Star, 10_000, 14.1347, 0.5, &Overrides::default()).unwrap();
        assert_eq!(p.a, 1.0 + 1.0 / 3000.0);
        assert_eq!(default_scale(1_000_000), 10_000);
    }

    #[test]
    fn z1_below_z0_rejected() {
        let over = Overrides { z1: Some(0.0), ..Default::default() };
        let e = build_params(Regime::Star, 100, 14.0, 0.5, &over).unwrap_err();
        assert_eq!(e.kind(), "inconsistent-params");
    }
}
