use serde::{Deserialize, Serialize};

use super::element::{Exponents, NormalForm};
use super::spec::GroupSpec;
use crate::error::{Error, Result};

/// Splits `g` as `c^{-1} * core * c` with `core` cyclically reduced: at most
/// one syllable, or first and last syllables in distinct factors.
pub fn cyclic_reduce(g: &NormalForm) -> (NormalForm, NormalForm) {
    let mut core = g.clone();
    let mut c = NormalForm::identity();
    loop {
        let (first, last) = match (core.first(), core.last()) {
            (Some(f), Some(l)) if core.len() >= 2 && f.factor == l.factor => (f, l),
            _ => break,
        };
        debug_assert!(first.factor == last.factor);
        // core = s_1 M s_m  =>  core = s_m^{-1} (s_m s_1 M) s_m
        let step = NormalForm::from_syllables([last.clone()]);
        let mut rotated = Vec::with_capacity(core.len());
        rotated.push(last.clone());
        rotated.extend_from_slice(&core.syllables()[..core.len() - 1]);
        core = NormalForm::from_syllables(rotated);
        c = step.multiply(&c);
    }
    (core, c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassKind {
    Identity,
    Parabolic,
    Hyperbolic,
}

impl ClassKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ClassKind::Identity => "identity",
            ClassKind::Parabolic => "parabolic",
            ClassKind::Hyperbolic => "hyperbolic",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Classification {
    Identity,
    /// `conjugator^{-1} * representative * conjugator` is the classified element.
    Parabolic { factor: usize, representative: NormalForm, conjugator: NormalForm },
    Hyperbolic,
}

impl Classification {
    pub fn kind(&self) -> ClassKind {
        match self {
            Classification::Identity => ClassKind::Identity,
            Classification::Parabolic { .. } => ClassKind::Parabolic,
            Classification::Hyperbolic => ClassKind::Hyperbolic,
        }
    }
}

pub fn classify(spec: &GroupSpec, g: &NormalForm) -> Classification {
    if g.is_identity() {
        return Classification::Identity;
    }
    let (core, conjugator) = cyclic_reduce(g);
    match core.syllables() {
        [s] if spec.is_peripheral(s.factor) => {
            Classification::Parabolic { factor: s.factor, representative: core.clone(), conjugator }
        }
        _ => Classification::Hyperbolic,
    }
}

/// Conjugacy search inside an abelian peripheral factor: the only conjugator
/// needed is the zero vector, and only when the two elements coincide.
pub fn peripheral_csp(
    spec: &GroupSpec,
    factor: usize,
    a: &[i64],
    b: &[i64],
) -> Result<Option<Exponents>> {
    if factor >= spec.num_factors() || !spec.is_peripheral(factor) {
        return Err(Error::NotPeripheral(factor));
    }
    let rank = spec.rank(factor);
    if a.len() != rank || b.len() != rank {
        return Err(Error::PreconditionViolated(format!(
            "exponent vectors must have length {rank}"
        )));
    }
    Ok((a == b).then(|| Exponents::from_elem(0, rank)))
}

/// Decides conjugacy by the classical free-product criterion and returns a
/// conjugator `x` with `x^{-1} a x = b`.
///
/// Cyclically reduced elements of syllable length at least two are conjugate
/// iff one is a cyclic permutation of the other; shorter cores are conjugate
/// iff equal, since every factor is abelian.
pub fn free_product_conjugacy(a: &NormalForm, b: &NormalForm) -> Option<NormalForm> {
    let (alpha, ca) = cyclic_reduce(a);
    let (beta, cb) = cyclic_reduce(b);
    if alpha.len() != beta.len() {
        return None;
    }
    let m = alpha.len();
    let rotation = if m <= 1 {
        (alpha == beta).then_some(0)?
    } else {
        let sa = alpha.syllables();
        let sb = beta.syllables();
        (0..m).find(|&j| (0..m).all(|i| sa[(i + j) % m] == sb[i]))?
    };
    let y: NormalForm = NormalForm::from_syllables(alpha.syllables()[..rotation].iter().cloned());
    let x = ca.inverse().multiply(&y).multiply(&cb);
    debug_assert_eq!(a.conjugate_by(&x), *b);
    Some(x)
}
