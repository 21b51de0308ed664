//! Hyperbolicity constants of the coned-off graph, measured on finite balls
//! or configured by hand, and exact evaluation of the conjugator length
//! bounds built from them.

mod bounds;
mod estimate;
mod fit;
pub mod rational;

use std::path::Path;

use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::GroupSpec;

pub use bounds::{bound_hyperbolic, bound_parabolic, bound_relative, exponential_term, ExtNat};
pub use estimate::{estimate_bcp, estimate_delta, estimate_epsilon};
pub use fit::fit_quadratic_nonneg;
pub use rational::{parse_rational, rat, Rational};

/// Where a constant came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "lowercase")]
pub enum Source {
    Configured,
    Measured {
        radius: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        exp_cap: Option<u64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        k_max: Option<u64>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub delta: Source,
    pub eps_coeffs: Source,
    pub c_bcp: Source,
    pub ml: Source,
    pub peripheral_poly: Source,
}

impl Default for Provenance {
    fn default() -> Self {
        Provenance {
            delta: Source::Configured,
            eps_coeffs: Source::Configured,
            c_bcp: Source::Configured,
            ml: Source::Configured,
            peripheral_poly: Source::Configured,
        }
    }
}

/// Everything the bound formulas consume.
///
/// `eps_coeffs = (e0, e1, e2)` define `ε(k) = e0 + e1 k + e2 k²`;
/// `peripheral_poly` lists the coefficients of the peripheral conjugacy
/// bound `P`, constant term first (empty means `P ≡ 0`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypConstants {
    #[serde(with = "rational::serde_str")]
    pub delta: Rational,
    #[serde(with = "rational::serde_str_array")]
    pub eps_coeffs: [Rational; 3],
    #[serde(with = "rational::serde_str")]
    pub c_bcp: Rational,
    #[serde(with = "rational::serde_str")]
    pub ml: Rational,
    #[serde(with = "rational::serde_str_vec", default)]
    pub peripheral_poly: Vec<Rational>,
    #[serde(default)]
    pub provenance: Provenance,
}

/// Radii and caps used when measuring constants on finite balls.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasureParams {
    pub delta_radius: usize,
    pub delta_exp_cap: u64,
    pub eps_radius: usize,
    pub k_max: u64,
    pub bcp_radius: usize,
    pub bcp_exp_cap: u64,
    pub cap: usize,
}

impl Default for MeasureParams {
    fn default() -> Self {
        MeasureParams {
            delta_radius: 4,
            delta_exp_cap: 8,
            eps_radius: 2,
            k_max: 3,
            bcp_radius: 4,
            bcp_exp_cap: 4,
            cap: crate::DEFAULT_ENUMERATION_CAP,
        }
    }
}

/// Measures `δ`, `ε` and `c(1)` on finite balls. `ML` and the peripheral
/// polynomial are configured (`ML = 2`, `P ≡ 0` for abelian peripherals).
pub fn measure(spec: &GroupSpec, params: &MeasureParams) -> Result<HypConstants> {
    let delta = estimate_delta(spec, params.delta_radius, params.delta_exp_cap, params.cap)?;
    let samples = (0..=params.k_max)
        .map(|k| Ok((k, estimate_epsilon(spec, k as usize, params.eps_radius, params.cap)?)))
        .collect::<Result<Vec<_>>>()?;
    let eps_coeffs = fit_quadratic_nonneg(&samples);
    let c_bcp = estimate_bcp(spec, params.bcp_radius, params.bcp_exp_cap, params.cap)?;
    let consts = HypConstants {
        delta,
        eps_coeffs,
        c_bcp,
        ml: default_ml(),
        peripheral_poly: Vec::new(),
        provenance: Provenance {
            delta: Source::Measured {
                radius: params.delta_radius,
                exp_cap: Some(params.delta_exp_cap),
                k_max: None,
            },
            eps_coeffs: Source::Measured { radius: params.eps_radius, exp_cap: None, k_max: Some(params.k_max) },
            c_bcp: Source::Measured { radius: params.bcp_radius, exp_cap: Some(params.bcp_exp_cap), k_max: None },
            ml: Source::Configured,
            peripheral_poly: Source::Configured,
        },
    };
    consts.validate()?;
    Ok(consts)
}

/// Default `ML`; the constant is not pinned down numerically, only `ML > 1`.
pub fn default_ml() -> Rational {
    rat(2)
}

impl HypConstants {
    pub fn configured(delta: Rational, eps_coeffs: [Rational; 3], ml: Rational, peripheral_poly: Vec<Rational>) -> Result<Self> {
        let c = HypConstants {
            delta,
            eps_coeffs,
            c_bcp: Rational::zero(),
            ml,
            peripheral_poly,
            provenance: Provenance::default(),
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.ml <= Rational::one() {
            return Err(Error::Config(format!("ML must exceed 1 (got {})", self.ml)));
        }
        let negative = self.delta < Rational::zero()
            || self.c_bcp < Rational::zero()
            || self.eps_coeffs.iter().any(|c| *c < Rational::zero())
            || self.peripheral_poly.iter().any(|c| *c < Rational::zero());
        if negative {
            return Err(Error::Config("constants must be non-negative".into()));
        }
        Ok(())
    }

    /// `ε(k)`; monotone in `k` since the coefficients are non-negative.
    pub fn epsilon(&self, k: u64) -> Rational {
        let k = rat(k as i64);
        let [e0, e1, e2] = &self.eps_coeffs;
        e0 + e1 * &k + e2 * &k * &k
    }

    /// `P(y)` by Horner's rule.
    pub fn peripheral(&self, y: &Rational) -> Rational {
        self.peripheral_poly.iter().rev().fold(Rational::zero(), |acc, c| acc * y + c)
    }

    /// Degree of `P`, ignoring trailing zero coefficients; 0 for `P ≡ 0`.
    pub fn peripheral_degree(&self) -> usize {
        self.peripheral_poly.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
    }

    /// `M(k) = max{ε(k), P(ε(k))}`, the per-coset travel bound for parabolic pairs.
    pub fn parabolic_travel(&self, k: u64) -> Rational {
        let e = self.epsilon(k);
        let p = self.peripheral(&e);
        if p > e {
            p
        } else {
            e
        }
    }

    /// Fellow-traveller constant `E = 4δ + 3k`.
    pub fn fellow_traveller(&self, k: u64) -> Rational {
        rat(4) * &self.delta + rat(3 * k as i64)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let c: HypConstants =
            serde_json::from_str(text).map_err(|e| Error::Config(format!("constants: {e}")))?;
        c.validate()?;
        Ok(c)
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        HypConstants::from_json_str(&text)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("constants serialize")
    }
}
