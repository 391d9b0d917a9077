//! Entropy and divergences between densities on a shared grid.
//!
//! Natural logarithms throughout. Grid points where a density is at most
//! [`SUPPORT_EPSILON`] count as outside its support.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::density::{Grid, SpectralDensity};
use crate::error::{Error, Result};

pub const SUPPORT_EPSILON: f64 = 1e-12;
/// Largest mass outside the reference support that still counts as none.
pub const SUPPORT_MASS_TOLERANCE: f64 = 1e-9;

/// `-integral f ln f`, skipping points outside the support.
pub fn spectral_entropy(d: &SpectralDensity) -> f64 {
    let integrand: Vec<f64> = d
        .values()
        .iter()
        .map(|&f| if f > SUPPORT_EPSILON { -f * f.ln() } else { 0.0 })
        .collect();
    d.grid().integrate(&integrand)
}

/// Entropy of the semicircle law of radius `2 sqrt(p (1 - p))`, the limiting
/// scaled spectrum of `G(n, p)` after removing the leading eigenvalue.
pub fn er_entropy_theoretical(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(format!(
            "edge probability must lie strictly inside (0, 1), got {p}"
        )));
    }
    let pi = std::f64::consts::PI;
    Ok(0.5 * (4.0 * pi * pi * p * (1.0 - p)).ln() - 0.5)
}

/// `integral d1 ln(d1 / d2)`; infinite when `d1` has mass where `d2` has none.
///
/// Grid points with `d2 <= SUPPORT_EPSILON` but `d1 > SUPPORT_EPSILON` lie
/// outside the support of `d2`. The result is infinite when `d1` puts more
/// than [`SUPPORT_MASS_TOLERANCE`] of its mass there; smaller amounts are
/// kernel-tail residue where both densities are numerically zero, and those
/// points are skipped.
pub fn kl_divergence(d1: &SpectralDensity, d2: &SpectralDensity) -> Result<f64> {
    d1.require_same_grid(d2)?;
    let len = d1.values().len();
    let mut integrand = Vec::with_capacity(len);
    let mut outside = Vec::with_capacity(len);
    let mut violated = false;
    for (&a, &b) in d1.values().iter().zip(d2.values()) {
        if a <= SUPPORT_EPSILON {
            integrand.push(0.0);
            outside.push(0.0);
        } else if b <= SUPPORT_EPSILON {
            integrand.push(0.0);
            outside.push(a);
            violated = true;
        } else {
            integrand.push(a * (a / b).ln());
            outside.push(0.0);
        }
    }
    if violated && d1.grid().integrate(&outside) > SUPPORT_MASS_TOLERANCE {
        return Ok(f64::INFINITY);
    }
    // discretization can push a true zero slightly negative
    Ok(d1.grid().integrate(&integrand).max(0.0))
}

/// Jensen-Shannon divergence, `(KL(d1||m) + KL(d2||m)) / 2` with `m` the
/// midpoint density. Always finite, at most `ln 2`, symmetric.
pub fn js_divergence(d1: &SpectralDensity, d2: &SpectralDensity) -> Result<f64> {
    d1.require_same_grid(d2)?;
    Ok(js_on_grid(d1.grid(), d1.values(), d2.values()))
}

/// JS divergence of two normalized tabulations on `grid`.
pub(crate) fn js_on_grid(grid: &Grid, a: &[f64], b: &[f64]) -> f64 {
    let half_kl = |x: f64, m: f64| {
        if x <= SUPPORT_EPSILON {
            0.0
        } else {
            x * (x / m).ln()
        }
    };
    let integrand: Vec<f64> = a
        .iter()
        .zip(b)
        .map(|(&x, &y)| {
            let m = 0.5 * (x + y);
            0.5 * (half_kl(x, m) + half_kl(y, m))
        })
        .collect();
    grid.integrate(&integrand).clamp(0.0, std::f64::consts::LN_2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DivergenceKind {
    Kl,
    Js,
    Entropy,
}

/// A tagged scalar for JSON output; infinity serializes as `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DivergenceValue {
    pub kind: DivergenceKind,
    #[serde(with = "crate::divergence::extended_f64")]
    pub value: f64,
}

impl fmt::Display for DivergenceValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.value == f64::INFINITY {
            f.write_str("inf")
        } else {
            write!(f, "{:?}", self.value)
        }
    }
}

/// Serde helper writing `+inf` as the string `"inf"`.
pub mod extended_f64 {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &f64, s: S) -> Result<S::Ok, S::Error> {
        if *value == f64::INFINITY {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*value)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(x) => Ok(x),
            Repr::Text(t) if t == "inf" => Ok(f64::INFINITY),
            Repr::Text(t) => Err(D::Error::custom(format!("expected a number or \"inf\", got {t:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian(mu: f64, sigma: f64) -> impl Fn(f64) -> f64 {
        move |x| (-0.5 * ((x - mu) / sigma).powi(2)).exp() / (sigma * (2.0 * std::f64::consts::PI).sqrt())
    }

    fn grid() -> Grid {
        Grid::new(-12.0, 12.0, 4001).unwrap()
    }

    #[test]
    fn standard_normal_entropy() {
        let d = SpectralDensity::tabulate(grid(), gaussian(0.0, 1.0)).unwrap();
        let exact = 0.5 * (2.0 * std::f64::consts::PI * std::f64::consts::E).ln();
        assert!((spectral_entropy(&d) - exact).abs() < 1e-6);
    }

    #[test]
    fn gaussian_kl_closed_form() {
        // KL(N(0,1) || N(0.5,1)) = 0.5^2 / 2
        // on a wider grid the tail of one density drops below the support
        // threshold before the other's does and KL becomes infinite
        let narrow = Grid::new(-6.0, 6.5, 4001).unwrap();
        let a = SpectralDensity::tabulate(narrow, gaussian(0.0, 1.0)).unwrap();
        let b = SpectralDensity::tabulate(narrow, gaussian(0.5, 1.0)).unwrap();
        let v = kl_divergence(&a, &b).unwrap();
        assert!((v - 0.125).abs() < 1e-6, "{v}");
        // unequal widths: ln(s2/s1) + (s1^2 + mu^2) / (2 s2^2) - 1/2
        let a = SpectralDensity::tabulate(grid(), gaussian(0.0, 1.0)).unwrap();
        let c = SpectralDensity::tabulate(grid(), gaussian(1.0, 2.0)).unwrap();
        let exact = 2f64.ln() + (1.0 + 1.0) / 8.0 - 0.5;
        assert!((kl_divergence(&a, &c).unwrap() - exact).abs() < 1e-6);
    }

    #[test]
    fn kl_self_is_zero() {
        let a = SpectralDensity::tabulate(grid(), gaussian(0.3, 0.7)).unwrap();
        assert_eq!(kl_divergence(&a, &a).unwrap(), 0.0);
        assert!(js_divergence(&a, &a).unwrap().abs() < 1e-15);
    }

    #[test]
    fn disjoint_supports() {
        let g = Grid::new(0.0, 4.0, 401).unwrap();
        let left = SpectralDensity::tabulate(g, |x| if x < 1.0 { 1.0 } else { 0.0 }).unwrap();
        let right = SpectralDensity::tabulate(g, |x| if x > 3.0 { 1.0 } else { 0.0 }).unwrap();
        assert_eq!(kl_divergence(&left, &right).unwrap(), f64::INFINITY);
        assert!((js_divergence(&left, &right).unwrap() - std::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn negligible_tail_outside_support_is_ignored() {
        let g = Grid::new(0.0, 4.0, 401).unwrap();
        let base = |x: f64| if x < 2.0 { 1.0 } else { 0.0 };
        let a = SpectralDensity::tabulate(g, |x| base(x) + if x > 3.0 { 1e-11 } else { 0.0 }).unwrap();
        let b = SpectralDensity::tabulate(g, base).unwrap();
        let kl = kl_divergence(&a, &b).unwrap();
        assert!(kl.is_finite() && kl < 1e-9);
        let c = SpectralDensity::tabulate(g, |x| base(x) + if x > 3.0 { 1e-3 } else { 0.0 }).unwrap();
        assert_eq!(kl_divergence(&c, &b).unwrap(), f64::INFINITY);
    }

    #[test]
    fn er_closed_form() {
        let at_half = er_entropy_theoretical(0.5).unwrap();
        assert!((at_half - (std::f64::consts::PI.ln() - 0.5)).abs() < 1e-15);
        assert!((at_half - 0.644_729_9).abs() < 1e-6);
        assert!((er_entropy_theoretical(0.2).unwrap() - er_entropy_theoretical(0.8).unwrap()).abs() < 1e-15);
        assert!(er_entropy_theoretical(0.0).is_err());
        assert!(er_entropy_theoretical(1.0).is_err());
    }

    #[test]
    fn semicircle_entropy_matches_closed_form() {
        let p: f64 = 0.3;
        let r = 2.0 * (p * (1.0 - p)).sqrt();
        let g = Grid::new(-1.2, 1.2, 20_001).unwrap();
        let d = SpectralDensity::tabulate(g, |x| (r * r - x * x).max(0.0).sqrt()).unwrap();
        let exact = er_entropy_theoretical(p).unwrap();
        assert!((spectral_entropy(&d) - exact).abs() < 1e-3);
    }

    #[test]
    fn json_encoding() {
        let v = DivergenceValue {
            kind: DivergenceKind::Kl,
            value: f64::INFINITY,
        };
        let json = serde_json::to_string(&v).unwrap();
        assert_eq!(json, r#"{"kind":"kl","value":"inf"}"#);
        assert_eq!(serde_json::from_str::<DivergenceValue>(&json).unwrap(), v);
        let js = DivergenceValue {
            kind: DivergenceKind::Js,
            value: 0.25,
        };
        assert_eq!(serde_json::to_string(&js).unwrap(), r#"{"kind":"js","value":0.25}"#);
    }
}
