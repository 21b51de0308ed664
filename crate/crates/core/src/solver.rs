//! Bounded conjugator search, the exhaustive oracle it is checked against,
//! conjugacy diagrams and the empirical lemma checks run on them.

use std::sync::RwLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cayley::{ball_x, geodesic_x, Ball};
use crate::constants::{bound_hyperbolic, bound_parabolic, rat, ExtNat, HypConstants, Rational};
use crate::error::{Error, Result};
use crate::geometry::{decompose, synchronous_pairs, ConjugacyDiagram, LemmaReport, SymmetricPair};
use crate::group::{classify, free_product_conjugacy, peripheral_csp, ClassKind, Classification, GroupSpec, NormalForm};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "kebab-case")]
pub enum NotConjugateReason {
    ClassificationMismatch,
    FreeProductCriterion,
    /// Every candidate of `X`-length at most `radius` was tried.
    ExhaustedBound { radius: usize },
}

impl NotConjugateReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            NotConjugateReason::ClassificationMismatch => "classification-mismatch",
            NotConjugateReason::FreeProductCriterion => "free-product-criterion",
            NotConjugateReason::ExhaustedBound { .. } => "exhausted-bound",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum CspOutcome {
    Found { x: NormalForm, x_len: u64, searched_radius: usize },
    NotConjugate { reason: NotConjugateReason },
    /// The certified radius `bound` was larger than `cap`; shells up to
    /// `cap` were searched without success.
    BoundExceedsCap { bound: ExtNat, cap: usize },
}

impl CspOutcome {
    fn found(x: NormalForm, searched_radius: usize) -> Self {
        let x_len = x.x_length();
        CspOutcome::Found { x, x_len, searched_radius }
    }

    pub fn conjugator(&self) -> Option<&NormalForm> {
        match self {
            CspOutcome::Found { x, .. } => Some(x),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            CspOutcome::Found { .. } => "found",
            CspOutcome::NotConjugate { .. } => "not-conjugate",
            CspOutcome::BoundExceedsCap { .. } => "bound-exceeds-cap",
        }
    }
}

pub fn verify_conjugation(a: &NormalForm, x: &NormalForm, b: &NormalForm) -> bool {
    a.multiply(x) == x.multiply(b)
}

/// `X`-ball around the identity grown on demand and shared between searches.
#[derive(Debug)]
pub struct Searcher {
    spec: GroupSpec,
    cap: usize,
    ball: RwLock<Ball>,
}

impl Searcher {
    pub fn new(spec: &GroupSpec, cap: usize) -> Result<Self> {
        let ball = ball_x(spec, 0, cap)?;
        Ok(Searcher { spec: spec.clone(), cap, ball: RwLock::new(ball) })
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    fn ensure(&self, radius: usize) {
        if self.ball.read().expect("ball lock").radius() >= radius {
            return;
        }
        self.ball.write().expect("ball lock").grow_to(radius);
    }

    /// First conjugator in canonical enumeration order among elements of
    /// `X`-length at most `radius`. Shells are scanned in parallel on the
    /// current rayon pool; the leftmost hit wins, so the answer does not
    /// depend on the number of workers.
    pub fn first_conjugator(&self, a: &NormalForm, b: &NormalForm, radius: usize) -> Option<NormalForm> {
        for d in 0..=radius {
            self.ensure(d);
            let ball = self.ball.read().expect("ball lock");
            if ball.radius() < d {
                break;
            }
            let shell = ball.shell(d);
            let hit = if shell.len() < 256 {
                shell.iter().position(|x| verify_conjugation(a, x, b))
            } else {
                shell.par_iter().position_first(|x| verify_conjugation(a, x, b))
            };
            if let Some(i) = hit {
                return Some(shell[i].clone());
            }
        }
        None
    }

    pub fn oracle(&self, a: &NormalForm, b: &NormalForm, cap: usize) -> Result<CspOutcome> {
        self.check(cap)?;
        Ok(match self.first_conjugator(a, b, cap) {
            Some(x) => {
                let r = x.x_length() as usize;
                CspOutcome::found(x, r)
            }
            None => CspOutcome::NotConjugate { reason: NotConjugateReason::ExhaustedBound { radius: cap } },
        })
    }

    pub fn solve(&self, a: &NormalForm, b: &NormalForm, consts: &HypConstants, cap: usize) -> Result<CspOutcome> {
        self.check(cap)?;
        let spec = &self.spec;
        let (ca, cb) = (classify(spec, a), classify(spec, b));
        if ca.kind() != cb.kind() {
            return Ok(CspOutcome::NotConjugate { reason: NotConjugateReason::ClassificationMismatch });
        }
        match ca.kind() {
            ClassKind::Identity => Ok(CspOutcome::found(NormalForm::identity(), 0)),
            ClassKind::Parabolic => parabolic_csp(spec, a, b),
            ClassKind::Hyperbolic => {
                let l = a.x_length().max(b.x_length());
                let bound = bound_hyperbolic(l, consts, spec.x_count());
                let certified = !bound.exceeds(cap);
                let radius = bound.as_u64().map_or(cap, |u| (u as usize).min(cap));
                if let Some(x) = self.first_conjugator(a, b, radius) {
                    let r = x.x_length() as usize;
                    return Ok(CspOutcome::found(x, r));
                }
                Ok(if certified {
                    CspOutcome::NotConjugate { reason: NotConjugateReason::ExhaustedBound { radius } }
                } else if free_product_conjugacy(a, b).is_none() {
                    CspOutcome::NotConjugate { reason: NotConjugateReason::FreeProductCriterion }
                } else {
                    CspOutcome::BoundExceedsCap { bound, cap }
                })
            }
        }
    }

    fn check(&self, cap: usize) -> Result<()> {
        if cap > self.cap {
            return Err(Error::RadiusExceedsCap { radius: cap, cap: self.cap });
        }
        Ok(())
    }
}

/// Minimum-length conjugator by exhaustive iterative deepening over `X`-ball
/// shells, ties broken by canonical enumeration order.
pub fn oracle_min_conjugator(spec: &GroupSpec, a: &NormalForm, b: &NormalForm, cap: usize) -> Result<CspOutcome> {
    Searcher::new(spec, cap)?.oracle(a, b, cap)
}

/// Classifies both inputs and searches up to `min(U, cap)`, where `U` is the
/// hyperbolic conjugator bound at `L = max(‖a‖_X, ‖b‖_X)`. Parabolic pairs
/// are routed to [`parabolic_csp`].
pub fn solve_csp(
    spec: &GroupSpec,
    a: &NormalForm,
    b: &NormalForm,
    consts: &HypConstants,
    cap: usize,
) -> Result<CspOutcome> {
    Searcher::new(spec, cap)?.solve(a, b, consts, cap)
}

/// Conjugacy search for two parabolic elements.
///
/// Writing `a = c_a^{-1} r_a c_a` and `b = c_b^{-1} r_b c_b` with `r_a, r_b`
/// in peripheral factors, the pair is conjugate iff `r_a = r_b` in the same
/// factor `H_i`, and the conjugators are exactly `c_a^{-1} H_i c_b`. The
/// shortest of them drops the `H_i` syllables where `c_a^{-1}` meets `c_b`.
pub fn parabolic_csp(spec: &GroupSpec, a: &NormalForm, b: &NormalForm) -> Result<CspOutcome> {
    let parts = |g: &NormalForm| match classify(spec, g) {
        Classification::Parabolic { factor, representative, conjugator } => Ok((factor, representative, conjugator)),
        other => Err(Error::PreconditionViolated(format!(
            "parabolic_csp needs parabolic inputs, got {}",
            other.kind().as_str()
        ))),
    };
    let (fa, ra, ca) = parts(a)?;
    let (fb, rb, cb) = parts(b)?;
    let criterion = free_product_conjugacy(a, b);
    if fa != fb {
        debug_assert!(criterion.is_none());
        return Ok(CspOutcome::NotConjugate { reason: NotConjugateReason::FreeProductCriterion });
    }
    let exps = |r: &NormalForm| r.syllables()[0].exps.clone();
    let Some(twist) = peripheral_csp(spec, fa, &exps(&ra), &exps(&rb))? else {
        debug_assert!(criterion.is_none());
        return Ok(CspOutcome::NotConjugate { reason: NotConjugateReason::FreeProductCriterion });
    };
    debug_assert!(twist.iter().all(|&e| e == 0));
    let mut left = ca.inverse().syllables().to_vec();
    if left.last().is_some_and(|s| s.factor == fa) {
        left.pop();
    }
    let mut right = cb.syllables();
    if right.first().is_some_and(|s| s.factor == fa) {
        right = &right[1..];
    }
    let x = NormalForm::from_syllables(left).multiply(&NormalForm::from_syllables(right.iter().cloned()));
    if !verify_conjugation(a, &x, b) {
        return Err(Error::NotAConjugator);
    }
    debug_assert!(criterion.is_some_and(|y| verify_conjugation(a, &y, b)));
    let r = x.x_length() as usize;
    Ok(CspOutcome::found(x, r))
}

/// Assembles the closed path `θ_q^{-1} θ_a θ_p θ_b^{-1}`: `θ_q` runs along the
/// canonical geodesic word of `x` from `1`, `θ_p` along the same word from
/// `a`, `θ_a` from `1` to `a` and `θ_b` from `x` to `xb`. The symmetric pair
/// `(θ_p, θ_q)` has characteristic elements `a^{-1}` and `b^{-1}`.
pub fn build_diagram(spec: &GroupSpec, a: &NormalForm, b: &NormalForm, x: &NormalForm) -> Result<ConjugacyDiagram> {
    if !verify_conjugation(a, x, b) {
        return Err(Error::NotAConjugator);
    }
    let one = NormalForm::identity();
    let theta_q = geodesic_x(spec, &one, x);
    let theta_p = theta_q.restart(spec, a.clone());
    let theta_a = geodesic_x(spec, &one, a);
    let theta_b = geodesic_x(spec, x, &x.multiply(b));
    assert_eq!(theta_p.end(), theta_b.end(), "conjugacy diagram must close");
    let pair = SymmetricPair::new(theta_p.clone(), theta_q.clone())?;
    Ok(ConjugacyDiagram {
        a: a.clone(),
        b: b.clone(),
        x: x.clone(),
        theta_a,
        theta_b,
        theta_p,
        theta_q,
        pair,
    })
}

fn diagram_l(d: &ConjugacyDiagram) -> u64 {
    d.a.x_length().max(d.b.x_length())
}

/// Middle closeness: synchronous vertices `(u, v)` with `u` farther than
/// `L + 2δ` from both ends of `θ_p` (relative metric) must satisfy
/// `d_rel(u, v) ≤ 4δ`.
pub fn check_lemma_middle(spec: &GroupSpec, diagram: &ConjugacyDiagram, delta: &Rational) -> LemmaReport {
    let mut report = LemmaReport::new(diagram.x.display(spec).to_string());
    let margin = rat(diagram_l(diagram) as i64) + rat(2) * delta;
    let limit = rat(4) * delta;
    let (p0, p1) = (diagram.theta_p.start(), diagram.theta_p.end());
    for (k, (u, v)) in synchronous_pairs(&diagram.pair).into_iter().enumerate() {
        let far = |w: &NormalForm| rat(u.rel_distance(spec, w) as i64) > margin;
        if far(p0) && far(p1) {
            let d = u.rel_distance(spec, &v);
            if rat(d as i64) > limit {
                report.push("middle-closeness", vec![k], format!("d_rel(p_{k}, q_{k}) = {d} > 4δ = {limit}"));
            }
        }
    }
    report
}

/// Peripheral components of `θ_p` and `θ_q` must have `Γ`-length at most
/// `ε(L)` for hyperbolic `a` and at most `M(L)` for parabolic `a`.
pub fn check_component_bounds(spec: &GroupSpec, diagram: &ConjugacyDiagram, consts: &HypConstants) -> LemmaReport {
    let mut report = LemmaReport::new(diagram.x.display(spec).to_string());
    let l = diagram_l(diagram);
    let threshold = match classify(spec, &diagram.a).kind() {
        ClassKind::Identity => return report,
        ClassKind::Hyperbolic => consts.epsilon(l),
        ClassKind::Parabolic => consts.parabolic_travel(l),
    };
    for (name, path) in [("theta_p", &diagram.theta_p), ("theta_q", &diagram.theta_q)] {
        for c in decompose(spec, path) {
            let len = c.gamma_length(path);
            if rat(len as i64) > threshold {
                report.push(
                    "component-length",
                    vec![c.start, c.end],
                    format!("{name} component in factor {} has Γ-length {len} > {threshold}", c.factor),
                );
            }
        }
    }
    report
}

/// Bound matching the classification of `a`: the hyperbolic or parabolic
/// conjugator bound, and `0` for the identity.
pub fn class_bound(spec: &GroupSpec, a: &NormalForm, b: &NormalForm, consts: &HypConstants) -> ExtNat {
    let l = a.x_length().max(b.x_length());
    match classify(spec, a).kind() {
        ClassKind::Identity => ExtNat::from_u64(0),
        ClassKind::Hyperbolic => bound_hyperbolic(l, consts, spec.x_count()),
        ClassKind::Parabolic => bound_parabolic(l, consts, spec.x_count()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::default_ml;
    use crate::group::parse_element;

    fn nf(spec: &GroupSpec, text: &str) -> NormalForm {
        parse_element(text, spec).unwrap()
    }

    fn flat_consts() -> HypConstants {
        HypConstants::configured(rat(0), [rat(0), rat(1), rat(1)], default_ml(), vec![]).unwrap()
    }

    #[test]
    fn verification() {
        let g = GroupSpec::z2_star_z();
        let a = nf(&g, "u s");
        assert!(verify_conjugation(&a, &NormalForm::identity(), &a));
        assert!(verify_conjugation(&a, &nf(&g, "u"), &nf(&g, "s u")));
        assert!(!verify_conjugation(&nf(&g, "u"), &nf(&g, "s"), &nf(&g, "u")));
    }

    #[test]
    fn oracle_examples() {
        let f = GroupSpec::free_group();
        let out = oracle_min_conjugator(&f, &nf(&f, "a b"), &nf(&f, "b a"), 3).unwrap();
        assert_eq!(out, CspOutcome::Found { x: nf(&f, "a"), x_len: 1, searched_radius: 1 });
        let g = GroupSpec::z2_star_z();
        let out = oracle_min_conjugator(&g, &nf(&g, "u"), &nf(&g, "s"), 4).unwrap();
        assert_eq!(out, CspOutcome::NotConjugate { reason: NotConjugateReason::ExhaustedBound { radius: 4 } });
        assert!(free_product_conjugacy(&nf(&g, "u"), &nf(&g, "s")).is_none());
        let a = nf(&g, "s u t");
        let out = oracle_min_conjugator(&g, &a, &a, 4).unwrap();
        assert_eq!(out.conjugator(), Some(&NormalForm::identity()));
    }

    #[test]
    fn oracle_respects_cap() {
        let g = GroupSpec::z2_star_z();
        let s = Searcher::new(&g, 3).unwrap();
        assert!(matches!(s.oracle(&nf(&g, "u"), &nf(&g, "u"), 4), Err(Error::RadiusExceedsCap { .. })));
    }

    #[test]
    fn solver_routing() {
        let g = GroupSpec::z2_star_z();
        let c = flat_consts();
        let a = nf(&g, "s u^2");
        assert_eq!(solve_csp(&g, &a, &a, &c, 6).unwrap().conjugator(), Some(&NormalForm::identity()));
        let out = solve_csp(&g, &nf(&g, "s t"), &nf(&g, "u"), &c, 6).unwrap();
        assert_eq!(out, CspOutcome::NotConjugate { reason: NotConjugateReason::ClassificationMismatch });
        let x = nf(&g, "t u s");
        let b = a.conjugate_by(&x);
        let solved = solve_csp(&g, &a, &b, &c, 6).unwrap();
        let oracle = oracle_min_conjugator(&g, &a, &b, 6).unwrap();
        assert_eq!(solved, oracle);
        assert!(verify_conjugation(&a, solved.conjugator().unwrap(), &b));
    }

    #[test]
    fn solver_reports_truncation_honestly() {
        let g = GroupSpec::z2_star_z();
        let big = HypConstants::configured(rat(1), [rat(0), rat(1), rat(1)], default_ml(), vec![]).unwrap();
        let a = nf(&g, "s u");
        let b = nf(&g, "t u");
        let out = solve_csp(&g, &a, &b, &big, 3).unwrap();
        assert_eq!(out, CspOutcome::NotConjugate { reason: NotConjugateReason::FreeProductCriterion });
        let b = nf(&g, "u s").conjugate_by(&nf(&g, "u^6"));
        let out = solve_csp(&g, &a, &b, &big, 3).unwrap();
        assert!(matches!(out, CspOutcome::BoundExceedsCap { cap: 3, .. }));
        let zero = HypConstants::configured(rat(0), [rat(0), rat(0), rat(0)], default_ml(), vec![]).unwrap();
        let out = solve_csp(&g, &a, &b, &zero, 3).unwrap();
        assert!(matches!(out, CspOutcome::NotConjugate { reason: NotConjugateReason::ExhaustedBound { .. } }));
    }

    #[test]
    fn parabolic_examples() {
        let g = GroupSpec::z2_star_z();
        let st = nf(&g, "s t");
        assert_eq!(parabolic_csp(&g, &st, &st).unwrap().conjugator(), Some(&NormalForm::identity()));
        let a = nf(&g, "u^-1 s t u");
        let out = parabolic_csp(&g, &a, &st).unwrap();
        assert_eq!(out.conjugator(), Some(&nf(&g, "u^-1")));
        let out = parabolic_csp(&g, &st, &a).unwrap();
        assert_eq!(out.conjugator(), Some(&nf(&g, "u")));
        let out = parabolic_csp(&g, &nf(&g, "s"), &nf(&g, "t")).unwrap();
        assert_eq!(out.label(), "not-conjugate");
        assert!(matches!(parabolic_csp(&g, &nf(&g, "u"), &st), Err(Error::PreconditionViolated(_))));
    }

    #[test]
    fn parabolic_conjugator_is_shortest() {
        let g = GroupSpec::z2_star_z();
        let a = nf(&g, "s");
        for text in ["u s^2 t", "t u", "s u^-1 t^3", "u t u"] {
            let x = nf(&g, text);
            let b = a.conjugate_by(&x);
            let out = parabolic_csp(&g, &a, &b).unwrap();
            let oracle = oracle_min_conjugator(&g, &a, &b, 6).unwrap();
            assert_eq!(out.conjugator().unwrap().x_length(), oracle.conjugator().unwrap().x_length(), "{text}");
        }
    }

    #[test]
    fn diagrams() {
        let f = GroupSpec::free_group();
        let (a, b, x) = (nf(&f, "a b"), nf(&f, "b a"), nf(&f, "a"));
        let d = build_diagram(&f, &a, &b, &x).unwrap();
        let perimeter = d.theta_q.len() + d.theta_a.len() + d.theta_p.len() + d.theta_b.len();
        assert_eq!(perimeter, 6);
        assert_eq!(d.pair.g1, a.inverse());
        assert_eq!(d.pair.g2, b.inverse());
        assert!(matches!(build_diagram(&f, &a, &a, &x), Err(Error::NotAConjugator)));

        let id = NormalForm::identity();
        let d = build_diagram(&f, &a, &a, &id).unwrap();
        assert!(d.theta_p.is_empty() && d.theta_q.is_empty());
        assert!(check_lemma_middle(&f, &d, &rat(0)).is_clean());
        assert!(check_component_bounds(&f, &d, &flat_consts()).is_clean());
    }

    #[test]
    fn lemma_checks_flag_violations() {
        let g = GroupSpec::z2_star_z();
        let a = nf(&g, "u");
        let x = nf(&g, "s^3 u^2 s^-3");
        let b = a.conjugate_by(&x);
        let d = build_diagram(&g, &a, &b, &x).unwrap();
        let tight = HypConstants::configured(rat(0), [rat(0), rat(0), rat(0)], default_ml(), vec![]).unwrap();
        let report = check_component_bounds(&g, &d, &tight);
        assert_eq!(report.violations.len(), 4);
        assert!(check_component_bounds(&g, &d, &flat_consts()).is_clean());
    }
}
