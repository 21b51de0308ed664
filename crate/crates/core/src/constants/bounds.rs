use std::fmt;

use num::{BigInt, BigUint, One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::rational::{rat, Rational};
use super::HypConstants;

/// Largest power evaluated exactly, in bits. Anything beyond is reported as
/// [`ExtNat::Infinite`].
pub const MAX_EXACT_BITS: f64 = (1u64 << 27) as f64;

/// A natural number, or a value too large to materialise.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtNat {
    Finite(BigUint),
    Infinite,
}

impl ExtNat {
    pub fn from_u64(n: u64) -> Self {
        ExtNat::Finite(BigUint::from(n))
    }

    pub fn as_u64(&self) -> Option<u64> {
        match self {
            ExtNat::Finite(n) => n.to_u64(),
            ExtNat::Infinite => None,
        }
    }

    /// Magnitude flag: the value is larger than an enumeration cap.
    pub fn exceeds(&self, cap: usize) -> bool {
        match self {
            ExtNat::Finite(n) => *n > BigUint::from(cap),
            ExtNat::Infinite => true,
        }
    }

    /// Number of decimal digits (0 for the infinite value).
    pub fn digits(&self) -> usize {
        match self {
            ExtNat::Finite(n) => n.to_string().len(),
            ExtNat::Infinite => 0,
        }
    }
}

impl std::ops::Add for ExtNat {
    type Output = ExtNat;

    fn add(self, rhs: ExtNat) -> ExtNat {
        match (self, rhs) {
            (ExtNat::Finite(a), ExtNat::Finite(b)) => ExtNat::Finite(a + b),
            _ => ExtNat::Infinite,
        }
    }
}

impl fmt::Display for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtNat::Finite(n) => write!(f, "{n}"),
            ExtNat::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for ExtNat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn ceil_nat(r: &Rational) -> BigUint {
    let c: BigInt = r.ceil().to_integer();
    if c.is_negative() {
        BigUint::zero()
    } else {
        c.to_biguint().expect("non-negative")
    }
}

/// `|X|^{⌈6·ML·(16δ)²⌉}`. The exponent is rounded up so the result stays an
/// upper bound; with `δ = 0` the term is exactly 1.
pub fn exponential_term(consts: &HypConstants, x_count: usize) -> ExtNat {
    let sixteen_delta = rat(16) * &consts.delta;
    let exponent = ceil_nat(&(rat(6) * &consts.ml * &sixteen_delta * &sixteen_delta));
    if exponent.is_zero() || x_count <= 1 {
        return ExtNat::Finite(BigUint::one());
    }
    let bits = exponent.to_f64().unwrap_or(f64::INFINITY) * (x_count as f64).log2();
    match exponent.to_u32() {
        Some(e) if bits <= MAX_EXACT_BITS => ExtNat::Finite(BigUint::from(x_count).pow(e)),
        _ => ExtNat::Infinite,
    }
}

fn delta_margin(consts: &HypConstants, l: u64) -> Rational {
    rat(34) * &consts.delta + rat(l as i64)
}

/// Relative length bound `2(L + 34δ) + |X|^{6·ML·(16δ)²}`.
pub fn bound_relative(l: u64, consts: &HypConstants, x_count: usize) -> ExtNat {
    ExtNat::Finite(ceil_nat(&(rat(2) * delta_margin(consts, l)))) + exponential_term(consts, x_count)
}

/// Conjugator length bound for hyperbolic pairs,
/// `2(34δ + L)·ε(L) + |X|^{6·ML·(16δ)²}`: cubic in `L`.
pub fn bound_hyperbolic(l: u64, consts: &HypConstants, x_count: usize) -> ExtNat {
    let linear = rat(2) * delta_margin(consts, l) * consts.epsilon(l);
    ExtNat::Finite(ceil_nat(&linear)) + exponential_term(consts, x_count)
}

/// Conjugator length bound for parabolic pairs,
/// `2(34δ + L)·M(L) + |X|^{6·ML(16δ)²}` with `M(L) = max{ε(L), P(ε(L))}`.
pub fn bound_parabolic(l: u64, consts: &HypConstants, x_count: usize) -> ExtNat {
    let linear = rat(2) * delta_margin(consts, l) * consts.parabolic_travel(l);
    ExtNat::Finite(ceil_nat(&linear)) + exponential_term(consts, x_count)
}
