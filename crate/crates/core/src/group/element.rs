use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use super::spec::{GenId, GroupSpec};
use crate::error::{Error, Result};

/// Exponent vector of a syllable in a free abelian factor.
pub type Exponents = SmallVec<[i64; 2]>;

/// A single generator letter `g^{±1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub gen: GenId,
    pub sign: i8,
}

impl Letter {
    pub fn inverse(self) -> Letter {
        Letter { gen: self.gen, sign: -self.sign }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word {
    pub letters: Vec<Letter>,
}

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word { letters }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn normalize(&self, spec: &GroupSpec) -> NormalForm {
        let mut nf = NormalForm::identity();
        for l in &self.letters {
            nf.push_letter(spec, *l);
        }
        nf
    }
}

/// Tokenizes `g`, `g^-1`, `g^k` (expanded to |k| letters) and `1`.
pub fn parse_word(text: &str, spec: &GroupSpec) -> Result<Word> {
    let mut letters = Vec::new();
    for token in text.split_whitespace() {
        if token == "1" {
            continue;
        }
        let (name, power) = match token.split_once('^') {
            Some((name, exp)) => {
                let k: i64 =
                    exp.parse().map_err(|_| Error::MalformedExponent(token.to_string()))?;
                (name, k)
            }
            None => (token, 1),
        };
        let gen = spec.lookup(name).ok_or_else(|| Error::UnknownGenerator(token.to_string()))?;
        let sign = if power < 0 { -1 } else { 1 };
        for _ in 0..power.unsigned_abs() {
            letters.push(Letter { gen, sign });
        }
    }
    Ok(Word { letters })
}

/// One maximal block of a normal form: a nonzero element of factor `factor`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Syllable {
    pub factor: usize,
    pub exps: Exponents,
}

impl Syllable {
    pub fn new(factor: usize, exps: &[i64]) -> Self {
        Syllable { factor, exps: Exponents::from_slice(exps) }
    }

    pub fn is_zero(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn inverse(&self) -> Syllable {
        Syllable { factor: self.factor, exps: self.exps.iter().map(|e| -e).collect() }
    }

    pub fn l1(&self) -> u64 {
        self.exps.iter().map(|e| e.unsigned_abs()).sum()
    }

    pub fn sup(&self) -> u64 {
        self.exps.iter().map(|e| e.unsigned_abs()).max().unwrap_or(0)
    }
}

fn add_into(acc: &mut Exponents, other: &[i64]) {
    for (a, b) in acc.iter_mut().zip(other) {
        *a = a.checked_add(*b).expect("exponent overflow");
    }
}

/// Canonical alternating-syllable form of an element of a free product of
/// free abelian groups. Two elements are equal iff their normal forms are
/// structurally equal.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NormalForm {
    syllables: Vec<Syllable>,
}

impl NormalForm {
    pub fn identity() -> Self {
        NormalForm { syllables: Vec::new() }
    }

    /// Builds a normal form from syllables that may not be reduced.
    pub fn from_syllables(syllables: impl IntoIterator<Item = Syllable>) -> Self {
        let mut nf = NormalForm::identity();
        for s in syllables {
            nf.push_syllable(s);
        }
        nf
    }

    pub fn syllable(factor: usize, exps: &[i64]) -> Self {
        NormalForm::from_syllables([Syllable::new(factor, exps)])
    }

    pub fn generator(spec: &GroupSpec, gen: GenId, sign: i8) -> Self {
        let mut nf = NormalForm::identity();
        nf.push_letter(spec, Letter { gen, sign });
        nf
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn len(&self) -> usize {
        self.syllables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn first(&self) -> Option<&Syllable> {
        self.syllables.first()
    }

    pub fn last(&self) -> Option<&Syllable> {
        self.syllables.last()
    }

    /// Right-multiplies by one syllable, merging and cancelling at the boundary.
    pub fn push_syllable(&mut self, s: Syllable) {
        if s.is_zero() {
            return;
        }
        match self.syllables.last_mut() {
            Some(last) if last.factor == s.factor => {
                add_into(&mut last.exps, &s.exps);
                if last.is_zero() {
                    self.syllables.pop();
                }
            }
            _ => self.syllables.push(s),
        }
    }

    pub fn push_letter(&mut self, spec: &GroupSpec, l: Letter) {
        match self.syllables.last_mut() {
            Some(last) if last.factor == l.gen.factor => {
                last.exps[l.gen.coord] += l.sign as i64;
                if last.is_zero() {
                    self.syllables.pop();
                }
            }
            _ => {
                let mut exps: Exponents = SmallVec::from_elem(0, spec.rank(l.gen.factor));
                exps[l.gen.coord] = l.sign as i64;
                self.syllables.push(Syllable { factor: l.gen.factor, exps });
            }
        }
    }

    pub fn multiply(&self, other: &NormalForm) -> NormalForm {
        // Cancel the overlap first so only the last boundary can merge.
        let mut i = 0;
        let n = self.syllables.len();
        while i < n
            && i < other.syllables.len()
            && self.syllables[n - 1 - i].factor == other.syllables[i].factor
            && self.syllables[n - 1 - i]
                .exps
                .iter()
                .zip(&other.syllables[i].exps)
                .all(|(a, b)| *a == -*b)
        {
            i += 1;
        }
        let mut out = Vec::with_capacity(n - i + other.syllables.len() - i);
        out.extend_from_slice(&self.syllables[..n - i]);
        let mut rest = other.syllables[i..].iter();
        if let (Some(last), Some(first)) = (out.last_mut(), other.syllables.get(i)) {
            if last.factor == first.factor {
                add_into(&mut last.exps, &first.exps);
                rest.next();
            }
        }
        out.extend(rest.cloned());
        NormalForm { syllables: out }
    }

    pub fn inverse(&self) -> NormalForm {
        NormalForm { syllables: self.syllables.iter().rev().map(Syllable::inverse).collect() }
    }

    /// `self^{-1} * other`, the displacement used by every left-invariant metric.
    pub fn left_divide(&self, other: &NormalForm) -> NormalForm {
        self.inverse().multiply(other)
    }

    /// Conjugate `x^{-1} self x`.
    pub fn conjugate_by(&self, x: &NormalForm) -> NormalForm {
        x.inverse().multiply(&self.multiply(x))
    }

    /// Word length with respect to the standard generators: the sum of the
    /// l1 norms of the syllables.
    pub fn x_length(&self) -> u64 {
        self.syllables.iter().map(Syllable::l1).sum()
    }

    /// Length in the coned-off graph: one per peripheral syllable, |e| per
    /// non-peripheral syllable.
    pub fn rel_length(&self, spec: &GroupSpec) -> u64 {
        self.syllables
            .iter()
            .map(|s| if spec.is_peripheral(s.factor) { 1 } else { s.l1() })
            .sum()
    }

    /// `‖self^{-1} other‖_X` without materialising the product.
    pub fn x_distance(&self, other: &NormalForm) -> u64 {
        self.displacement_length(other, Syllable::l1)
    }

    /// `‖self^{-1} other‖_{X∪H}` without materialising the product.
    pub fn rel_distance(&self, spec: &GroupSpec, other: &NormalForm) -> u64 {
        self.displacement_length(other, |s| if spec.is_peripheral(s.factor) { 1 } else { s.l1() })
    }

    fn displacement_length(&self, other: &NormalForm, len: impl Fn(&Syllable) -> u64) -> u64 {
        let n = self.syllables.iter().zip(&other.syllables).take_while(|(a, b)| a == b).count();
        let (u, v) = (&self.syllables[n..], &other.syllables[n..]);
        match (u.first(), v.first()) {
            (Some(a), Some(b)) if a.factor == b.factor => {
                let merged = Syllable {
                    factor: a.factor,
                    exps: b.exps.iter().zip(&a.exps).map(|(y, x)| y - x).collect(),
                };
                u[1..].iter().chain(&v[1..]).map(&len).sum::<u64>() + len(&merged)
            }
            _ => u.iter().chain(v).map(&len).sum(),
        }
    }

    /// Largest absolute exponent appearing in any syllable.
    pub fn sup_exponent(&self) -> u64 {
        self.syllables.iter().map(Syllable::sup).max().unwrap_or(0)
    }

    /// Geodesic word for the element in canonical order: syllable order,
    /// then coordinate order inside each syllable.
    pub fn to_word(&self) -> Word {
        let mut letters = Vec::with_capacity(self.x_length() as usize);
        for s in &self.syllables {
            for (coord, &e) in s.exps.iter().enumerate() {
                let sign = if e < 0 { -1 } else { 1 };
                for _ in 0..e.unsigned_abs() {
                    letters.push(Letter { gen: GenId { factor: s.factor, coord }, sign });
                }
            }
        }
        Word { letters }
    }

    pub fn display<'a>(&'a self, spec: &'a GroupSpec) -> DisplayNf<'a> {
        DisplayNf { nf: self, spec }
    }
}

/// Renders a normal form in the token syntax accepted by [`parse_word`].
pub struct DisplayNf<'a> {
    nf: &'a NormalForm,
    spec: &'a GroupSpec,
}

impl fmt::Display for DisplayNf<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.nf.is_identity() {
            return f.write_str("1");
        }
        let mut first = true;
        for s in self.nf.syllables() {
            for (coord, &e) in s.exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first {
                    f.write_str(" ")?;
                }
                first = false;
                let name = self.spec.generator_name(GenId { factor: s.factor, coord });
                if e == 1 {
                    write!(f, "{name}")?;
                } else {
                    write!(f, "{name}^{e}")?;
                }
            }
        }
        Ok(())
    }
}
