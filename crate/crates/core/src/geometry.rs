//! Path vocabulary of relatively hyperbolic geometry made executable:
//! peripheral components, phase vertices, backtracking, symmetric pairs and
//! their characteristic elements, synchronicity and minimality.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::cayley::{ball_x, Path};
use crate::error::{Error, Result};
use crate::group::{GroupSpec, NormalForm};

/// A maximal run of consecutive edges of a path lying in one peripheral
/// factor. Indices refer to the path's vertex list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub factor: usize,
    pub start: usize,
    pub end: usize,
    pub label: NormalForm,
    pub start_vertex: NormalForm,
    pub end_vertex: NormalForm,
}

impl Component {
    /// Number of `Γ`-edges (or the `Γ`-length of the peripheral steps) inside.
    pub fn gamma_length(&self, path: &Path) -> u64 {
        path.edges()[self.start..self.end].iter().map(|e| e.gamma_length()).sum()
    }
}

pub fn decompose(spec: &GroupSpec, path: &Path) -> Vec<Component> {
    let edges = path.edges();
    let vertices = path.vertices();
    let mut out = Vec::new();
    let mut i = 0;
    while i < edges.len() {
        let f = edges[i].factor();
        if !spec.is_peripheral(f) {
            i += 1;
            continue;
        }
        let mut j = i + 1;
        while j < edges.len() && edges[j].factor() == f {
            j += 1;
        }
        out.push(Component {
            factor: f,
            start: i,
            end: j,
            label: vertices[i].left_divide(&vertices[j]),
            start_vertex: vertices[i].clone(),
            end_vertex: vertices[j].clone(),
        });
        i = j;
    }
    out
}

/// Vertex indices that survive coning off: everything except the strict
/// interiors of components.
pub fn phase_vertices(spec: &GroupSpec, path: &Path) -> Vec<usize> {
    let mut phase = vec![true; path.len() + 1];
    for c in decompose(spec, path) {
        for flag in &mut phase[c.start + 1..c.end] {
            *flag = false;
        }
    }
    phase.iter().enumerate().filter(|(_, &p)| p).map(|(i, _)| i).collect()
}

fn in_factor(g: &NormalForm, factor: usize) -> bool {
    match g.syllables() {
        [] => true,
        [s] => s.factor == factor,
        _ => false,
    }
}

/// Two components are connected when they start in the same left coset of
/// their common peripheral subgroup. Components in different factors never are.
pub fn connected(c1: &Component, c2: &Component) -> bool {
    c1.factor == c2.factor && in_factor(&c1.start_vertex.left_divide(&c2.start_vertex), c1.factor)
}

pub fn is_without_backtracking(spec: &GroupSpec, path: &Path) -> bool {
    let comps = decompose(spec, path);
    for (i, a) in comps.iter().enumerate() {
        for b in &comps[i + 1..] {
            if connected(a, b) {
                return false;
            }
        }
    }
    true
}

/// Length of the coned-off image of a path: each component counts once.
pub fn relative_path_length(spec: &GroupSpec, path: &Path) -> usize {
    let comps = decompose(spec, path);
    let inside: usize = comps.iter().map(|c| c.end - c.start).sum();
    path.len() - inside + comps.len()
}

/// Two paths with identical labels together with their characteristic
/// elements `g1 = p_-^{-1} q_-` and `g2 = p_+^{-1} q_+`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricPair {
    pub p: Path,
    pub q: Path,
    pub g1: NormalForm,
    pub g2: NormalForm,
}

impl SymmetricPair {
    pub fn new(p: Path, q: Path) -> Result<Self> {
        if p.edges() != q.edges() {
            return Err(Error::PreconditionViolated("paths of a symmetric pair must share labels".into()));
        }
        let g1 = p.start().left_divide(q.start());
        let g2 = p.end().left_divide(q.end());
        debug_assert_eq!(g2, g1.conjugate_by(&p.label()));
        Ok(SymmetricPair { p, q, g1, g2 })
    }

    /// Builds the pair `(p, g1-translate of p)` from one path.
    pub fn from_path(spec: &GroupSpec, p: Path, g1: &NormalForm) -> Self {
        let q = p.restart(spec, p.start().multiply(g1));
        SymmetricPair::new(p, q).expect("labels agree by construction")
    }
}

/// `(p_k, q_k)` for every vertex index `k`.
pub fn synchronous_pairs(pair: &SymmetricPair) -> Vec<(NormalForm, NormalForm)> {
    pair.p.vertices().iter().cloned().zip(pair.q.vertices().iter().cloned()).collect()
}

/// True iff no symmetric geodesic pair with the same characteristic elements
/// is shorter in the coned-off graph. Candidate labels are the conjugators
/// `w` with `w^{-1} g1 w = g2`, searched exhaustively in the `X`-ball of
/// radius `search_cap`.
pub fn is_minimal_pair(spec: &GroupSpec, pair: &SymmetricPair, search_cap: usize) -> Result<bool> {
    let current = relative_path_length(spec, &pair.p);
    if current > search_cap {
        return Err(Error::SearchCapExceeded { length: current, cap: search_cap });
    }
    if current == 0 {
        return Ok(true);
    }
    let ball = ball_x(spec, search_cap, search_cap)?;
    let shorter = ball.iter().any(|(_, w)| {
        (w.rel_length(spec) as usize) < current && pair.g1.conjugate_by(w) == pair.g2
    });
    Ok(!shorter)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: String,
    pub indices: Vec<usize>,
    pub details: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub pair_id: String,
    pub violations: Vec<Violation>,
}

impl LemmaReport {
    pub fn new(pair_id: impl Into<String>) -> Self {
        LemmaReport { pair_id: pair_id.into(), violations: Vec::new() }
    }

    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, kind: &str, indices: Vec<usize>, details: String) {
        self.violations.push(Violation { kind: kind.to_string(), indices, details });
    }
}

/// Checks the two conclusions that hold for minimal symmetric pairs:
/// connected components across the pair are synchronous, and the products
/// `u_k^{-1} v_k` over synchronous vertices are pairwise distinct.
pub fn check_minimal_pair_properties(spec: &GroupSpec, pair: &SymmetricPair) -> LemmaReport {
    let mut report = LemmaReport::new("");
    let cp = decompose(spec, &pair.p);
    let cq = decompose(spec, &pair.q);
    for s in &cp {
        for t in &cq {
            if connected(s, t) && s.start != t.start {
                report.push(
                    "connected-not-synchronous",
                    vec![s.start, t.start],
                    format!("components in factor {} start at vertices {} and {}", s.factor, s.start, t.start),
                );
            }
        }
    }
    let mut seen: HashMap<NormalForm, usize> = HashMap::new();
    for (k, (u, v)) in synchronous_pairs(pair).into_iter().enumerate() {
        let product = u.left_divide(&v);
        if let Some(&first) = seen.get(&product) {
            report.push(
                "repeated-synchronous-product",
                vec![first, k],
                format!("u^-1 v agrees at synchronous indices {first} and {k}"),
            );
        } else {
            seen.insert(product, k);
        }
    }
    report
}

/// The closed quadrilateral `θ_q^{-1} θ_a θ_p θ_b^{-1}` witnessing `x^{-1} a x = b`.
#[derive(Debug, Clone)]
pub struct ConjugacyDiagram {
    pub a: NormalForm,
    pub b: NormalForm,
    pub x: NormalForm,
    pub theta_a: Path,
    pub theta_b: Path,
    pub theta_p: Path,
    pub theta_q: Path,
    pub pair: SymmetricPair,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::EdgeLabel;
    use crate::group::{parse_element, parse_word};

    fn nf(spec: &GroupSpec, text: &str) -> NormalForm {
        parse_element(text, spec).unwrap()
    }

    fn word_path(spec: &GroupSpec, text: &str) -> Path {
        Path::from_word(spec, NormalForm::identity(), &parse_word(text, spec).unwrap())
    }

    fn peripheral(spec: &GroupSpec, text: &str) -> EdgeLabel {
        let s = nf(spec, text).syllables()[0].clone();
        EdgeLabel::PeripheralStep { factor: s.factor, exps: s.exps }
    }

    #[test]
    fn decompose_examples() {
        let g = GroupSpec::z2_star_z();
        let u = EdgeLabel::XStep { gen: g.lookup("u").unwrap(), sign: 1 };
        let p = Path::new(&g, NormalForm::identity(), vec![peripheral(&g, "s"), u.clone(), peripheral(&g, "t")]);
        let comps = decompose(&g, &p);
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0].label, nf(&g, "s"));
        assert_eq!(comps[1].label, nf(&g, "t"));

        assert!(decompose(&g, &word_path(&g, "u u")).is_empty());

        let back = word_path(&g, "s u u^-1 s");
        let comps = decompose(&g, &back);
        assert_eq!(comps.len(), 2);
        assert_eq!((comps[0].start, comps[0].end), (0, 1));
        assert_eq!((comps[1].start, comps[1].end), (3, 4));
        assert_eq!(back.vertices()[3], nf(&g, "s"));
    }

    #[test]
    fn phase_vertex_examples() {
        let g = GroupSpec::z2_star_z();
        let single = Path::new(&g, NormalForm::identity(), vec![peripheral(&g, "s^2 t")]);
        assert_eq!(phase_vertices(&g, &single), vec![0, 1]);
        assert_eq!(phase_vertices(&g, &word_path(&g, "s t")), vec![0, 2]);
        let f = GroupSpec::free_group();
        assert_eq!(phase_vertices(&f, &word_path(&f, "a b a")), vec![0, 1, 2, 3]);
    }

    #[test]
    fn connected_examples() {
        let g = GroupSpec::z2_star_z();
        let back = word_path(&g, "s u u^-1 s");
        let comps = decompose(&g, &back);
        assert!(connected(&comps[0], &comps[1]));
        assert!(connected(&comps[0], &comps[0]));
        let other = word_path(&g, "u s");
        let c = &decompose(&g, &other)[0];
        assert!(!connected(&comps[0], c));
    }

    #[test]
    fn backtracking_examples() {
        let g = GroupSpec::z2_star_z();
        assert!(is_without_backtracking(&g, &word_path(&g, "s u t")));
        assert!(!is_without_backtracking(&g, &word_path(&g, "s u u^-1 s")));
        assert!(is_without_backtracking(&g, &Path::empty(NormalForm::identity())));
    }

    #[test]
    fn relative_lengths_of_paths() {
        let g = GroupSpec::z2_star_z();
        assert_eq!(relative_path_length(&g, &word_path(&g, "s t u s^-1 u^-1")), 4);
        assert_eq!(relative_path_length(&g, &word_path(&g, "")), 0);
    }

    #[test]
    fn symmetric_pair_invariants() {
        let g = GroupSpec::z2_star_z();
        let p = word_path(&g, "u s t");
        let g1 = nf(&g, "s u^-1");
        let pair = SymmetricPair::from_path(&g, p.clone(), &g1);
        assert_eq!(pair.g1, g1);
        assert_eq!(pair.g2, g1.conjugate_by(&p.label()));
        let sync = synchronous_pairs(&pair);
        assert_eq!(sync.len(), 4);
        assert_eq!(sync[0], (pair.p.start().clone(), pair.q.start().clone()));
        assert_eq!(sync[3], (pair.p.end().clone(), pair.q.end().clone()));
        assert!(SymmetricPair::new(p, word_path(&g, "u s")).is_err());
    }

    #[test]
    fn minimality_examples() {
        let g = GroupSpec::z2_star_z();
        // a = s is conjugated to u^-1 s u by u; t commutes with s, so t u also works.
        let a = nf(&g, "s");
        let minimal = SymmetricPair::from_path(
            &g,
            Path::from_word(&g, a.clone(), &nf(&g, "u").to_word()),
            &a.inverse(),
        );
        assert!(is_minimal_pair(&g, &minimal, 4).unwrap());
        assert!(check_minimal_pair_properties(&g, &minimal).is_clean());

        let padded = SymmetricPair::from_path(
            &g,
            Path::from_word(&g, a.clone(), &nf(&g, "t u").to_word()),
            &a.inverse(),
        );
        assert!(!is_minimal_pair(&g, &padded, 4).unwrap());
        let report = check_minimal_pair_properties(&g, &padded);
        assert!(!report.is_clean());

        let trivial = SymmetricPair::from_path(&g, Path::empty(a.clone()), &a.inverse());
        assert!(is_minimal_pair(&g, &trivial, 0).unwrap());
        assert!(check_minimal_pair_properties(&g, &trivial).is_clean());

        let long = SymmetricPair::from_path(&g, word_path(&g, "u s u s u"), &a);
        assert!(matches!(is_minimal_pair(&g, &long, 3), Err(Error::SearchCapExceeded { .. })));
    }

    #[test]
    fn report_json_shape() {
        let mut r = LemmaReport::new("7");
        r.push("repeated-synchronous-product", vec![0, 2], "x".into());
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        assert_eq!(v["pair_id"], "7");
        assert_eq!(v["violations"][0]["kind"], "repeated-synchronous-product");
        assert_eq!(v["violations"][0]["indices"][1], 2);
    }
}
