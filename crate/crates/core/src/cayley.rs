//! Metrics, balls and geodesics in the Cayley graph `Γ(G,X)` and in the
//! coned-off graph `Γ(G, X ∪ H)`.
//!
//! The coned-off graph is modelled with every peripheral coset `gH_i` turned
//! into a clique: one edge per element of `H_i \ {1}`. Its vertex set is `G`
//! itself, so both metrics are left-invariant word metrics and
//! `d(g, h) = |g^{-1} h|`.

use std::collections::HashSet;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::is_without_backtracking;
use crate::group::{Exponents, GenId, GroupSpec, Letter, NormalForm, Syllable, Word};

/// Largest relative distance `enumerate_rel_geodesics` accepts.
pub const MAX_ENUMERATION_DISTANCE: usize = 8;

/// An edge of `Γ` (single generator) or of the coned-off graph (one move
/// inside a peripheral coset).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum EdgeLabel {
    XStep { gen: GenId, sign: i8 },
    PeripheralStep { factor: usize, exps: Exponents },
}

impl EdgeLabel {
    pub fn from_letter(l: Letter) -> Self {
        EdgeLabel::XStep { gen: l.gen, sign: l.sign }
    }

    pub fn factor(&self) -> usize {
        match self {
            EdgeLabel::XStep { gen, .. } => gen.factor,
            EdgeLabel::PeripheralStep { factor, .. } => *factor,
        }
    }

    pub fn syllable(&self, spec: &GroupSpec) -> Syllable {
        match self {
            EdgeLabel::XStep { gen, sign } => {
                let mut exps = Exponents::from_elem(0, spec.rank(gen.factor));
                exps[gen.coord] = *sign as i64;
                Syllable { factor: gen.factor, exps }
            }
            EdgeLabel::PeripheralStep { factor, exps } => {
                Syllable { factor: *factor, exps: exps.clone() }
            }
        }
    }

    pub fn element(&self, spec: &GroupSpec) -> NormalForm {
        NormalForm::from_syllables([self.syllable(spec)])
    }

    /// Distance in `Γ` between the endpoints of the edge.
    pub fn gamma_length(&self) -> u64 {
        match self {
            EdgeLabel::XStep { .. } => 1,
            EdgeLabel::PeripheralStep { exps, .. } => exps.iter().map(|e| e.unsigned_abs()).sum(),
        }
    }

    pub fn render(&self, spec: &GroupSpec) -> String {
        match self {
            EdgeLabel::XStep { gen, sign } => {
                let name = spec.generator_name(*gen);
                if *sign > 0 {
                    name.to_string()
                } else {
                    format!("{name}^-1")
                }
            }
            EdgeLabel::PeripheralStep { .. } => {
                format!("[{}]", self.element(spec).display(spec))
            }
        }
    }
}

/// A walk: start vertex plus edge labels, with the vertex sequence cached.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Path {
    start: NormalForm,
    edges: Vec<EdgeLabel>,
    #[serde(skip)]
    vertices: Vec<NormalForm>,
}

impl Path {
    pub fn new(spec: &GroupSpec, start: NormalForm, edges: Vec<EdgeLabel>) -> Self {
        let mut vertices = Vec::with_capacity(edges.len() + 1);
        vertices.push(start.clone());
        let mut cur = start.clone();
        for e in &edges {
            cur.push_syllable(e.syllable(spec));
            vertices.push(cur.clone());
        }
        Path { start, edges, vertices }
    }

    pub fn empty(start: NormalForm) -> Self {
        Path { vertices: vec![start.clone()], start, edges: Vec::new() }
    }

    /// Walks the letters of `word` from `start` in `Γ`.
    pub fn from_word(spec: &GroupSpec, start: NormalForm, word: &Word) -> Self {
        Path::new(spec, start, word.letters.iter().map(|l| EdgeLabel::from_letter(*l)).collect())
    }

    pub fn start(&self) -> &NormalForm {
        &self.start
    }

    pub fn end(&self) -> &NormalForm {
        self.vertices.last().expect("paths have a start vertex")
    }

    pub fn edges(&self) -> &[EdgeLabel] {
        &self.edges
    }

    pub fn vertices(&self) -> &[NormalForm] {
        &self.vertices
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// The group element `φ(p) = p_-^{-1} p_+` read along the path.
    pub fn label(&self) -> NormalForm {
        self.start.left_divide(self.end())
    }

    pub fn gamma_length(&self) -> u64 {
        self.edges.iter().map(EdgeLabel::gamma_length).sum()
    }

    /// The same labelled path started at `start`.
    pub fn restart(&self, spec: &GroupSpec, start: NormalForm) -> Path {
        Path::new(spec, start, self.edges.clone())
    }

    pub fn render(&self, spec: &GroupSpec) -> String {
        self.edges.iter().map(|e| e.render(spec)).collect::<Vec<_>>().join(" ")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    X,
    Relative,
}

/// Elements around the identity organised into shells of exact distance.
///
/// For the relative metric the graph is truncated: peripheral steps have
/// exponent sup-norm at most `exp_cap`, and optionally vertices are confined
/// to the `X`-ball of radius `x_confine`.
#[derive(Debug, Clone)]
pub struct Ball {
    pub metric: Metric,
    pub exp_cap: Option<u64>,
    pub x_confine: Option<usize>,
    shells: Vec<Vec<NormalForm>>,
    seen: HashSet<NormalForm>,
    steps: Vec<Syllable>,
}

impl Ball {
    fn start(metric: Metric, steps: Vec<Syllable>, exp_cap: Option<u64>, x_confine: Option<usize>) -> Self {
        let id = NormalForm::identity();
        let mut seen = HashSet::new();
        seen.insert(id.clone());
        Ball { metric, exp_cap, x_confine, shells: vec![vec![id]], seen, steps }
    }

    pub fn radius(&self) -> usize {
        self.shells.len() - 1
    }

    pub fn shells(&self) -> &[Vec<NormalForm>] {
        &self.shells
    }

    pub fn shell(&self, d: usize) -> &[NormalForm] {
        &self.shells[d]
    }

    pub fn shell_sizes(&self) -> Vec<usize> {
        self.shells.iter().map(Vec::len).collect()
    }

    pub fn len(&self) -> usize {
        self.seen.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, g: &NormalForm) -> bool {
        self.seen.contains(g)
    }

    /// All elements in canonical enumeration order with their distance.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &NormalForm)> {
        self.shells.iter().enumerate().flat_map(|(d, s)| s.iter().map(move |g| (d, g)))
    }

    /// Adds the next shell by one breadth-first step in canonical edge order.
    /// Returns false once the truncated graph is exhausted.
    pub fn grow(&mut self) -> bool {
        let mut next = Vec::new();
        for g in self.shells.last().expect("ball has a shell") {
            for step in &self.steps {
                let mut h = g.clone();
                h.push_syllable(step.clone());
                if let Some(r) = self.x_confine {
                    if h.x_length() > r as u64 {
                        continue;
                    }
                }
                if !self.seen.contains(&h) {
                    self.seen.insert(h.clone());
                    next.push(h);
                }
            }
        }
        if next.is_empty() {
            return false;
        }
        self.shells.push(next);
        true
    }

    pub fn grow_to(&mut self, radius: usize) {
        while self.radius() < radius && self.grow() {}
    }

    /// One JSON object per line: `{"element": "...", "length": d}`.
    pub fn write_jsonl<W: Write>(&self, spec: &GroupSpec, mut out: W) -> Result<()> {
        for (d, g) in self.iter() {
            let line = serde_json::json!({ "element": g.display(spec).to_string(), "length": d });
            writeln!(out, "{line}")?;
        }
        Ok(())
    }
}

/// Generator steps `x^{±1}` in canonical order: factor, coordinate, +1 before -1.
pub fn x_steps(spec: &GroupSpec) -> Vec<EdgeLabel> {
    spec.generators()
        .iter()
        .flat_map(|&gen| [EdgeLabel::XStep { gen, sign: 1 }, EdgeLabel::XStep { gen, sign: -1 }])
        .collect()
}

fn exponent_vectors(rank: usize, cap: i64) -> Vec<Exponents> {
    let mut out = vec![Exponents::new()];
    for _ in 0..rank {
        out = out
            .into_iter()
            .flat_map(|v| {
                (-cap..=cap).map(move |e| {
                    let mut w = v.clone();
                    w.push(e);
                    w
                })
            })
            .collect();
    }
    out.retain(|v| v.iter().any(|&e| e != 0));
    out
}

/// Edges of the truncated coned-off graph in canonical order: per factor,
/// either the generator steps (non-peripheral) or every nonzero exponent
/// vector of sup-norm at most `exp_cap` (peripheral).
pub fn relative_steps(spec: &GroupSpec, exp_cap: u64) -> Vec<EdgeLabel> {
    let mut out = Vec::new();
    for f in 0..spec.num_factors() {
        if spec.is_peripheral(f) {
            for exps in exponent_vectors(spec.rank(f), exp_cap as i64) {
                out.push(EdgeLabel::PeripheralStep { factor: f, exps });
            }
        } else {
            for &gen in spec.generators().iter().filter(|g| g.factor == f) {
                out.push(EdgeLabel::XStep { gen, sign: 1 });
                out.push(EdgeLabel::XStep { gen, sign: -1 });
            }
        }
    }
    out
}

fn check_cap(radius: usize, cap: usize) -> Result<()> {
    if radius > cap {
        return Err(Error::RadiusExceedsCap { radius, cap });
    }
    Ok(())
}

/// All elements with `‖g‖_X ≤ radius`, shelled by exact `X`-distance.
pub fn ball_x(spec: &GroupSpec, radius: usize, cap: usize) -> Result<Ball> {
    check_cap(radius, cap)?;
    let steps = x_steps(spec).iter().map(|e| e.syllable(spec)).collect();
    let mut ball = Ball::start(Metric::X, steps, None, None);
    ball.grow_to(radius);
    Ok(ball)
}

/// Breadth-first ball in the truncated coned-off graph.
pub fn ball_rel(
    spec: &GroupSpec,
    radius: usize,
    exp_cap: u64,
    x_confine: Option<usize>,
    cap: usize,
) -> Result<Ball> {
    check_cap(radius, cap)?;
    let steps = relative_steps(spec, exp_cap).iter().map(|e| e.syllable(spec)).collect();
    let mut ball = Ball::start(Metric::Relative, steps, Some(exp_cap), x_confine);
    ball.grow_to(radius);
    Ok(ball)
}

pub fn dist_x(g: &NormalForm, h: &NormalForm) -> u64 {
    g.left_divide(h).x_length()
}

pub fn dist_rel(spec: &GroupSpec, g: &NormalForm, h: &NormalForm) -> u64 {
    g.left_divide(h).rel_length(spec)
}

/// The canonical `Γ`-geodesic from `g` to `h`: syllables of `g^{-1}h` in
/// order, generators in factor order inside each syllable.
pub fn geodesic_x(spec: &GroupSpec, g: &NormalForm, h: &NormalForm) -> Path {
    Path::from_word(spec, g.clone(), &g.left_divide(h).to_word())
}

/// The canonical relative geodesic: one peripheral step per peripheral
/// syllable of `g^{-1}h`, single generator steps elsewhere.
pub fn geodesic_rel(spec: &GroupSpec, g: &NormalForm, h: &NormalForm) -> Path {
    let mut edges = Vec::new();
    for s in g.left_divide(h).syllables() {
        if spec.is_peripheral(s.factor) {
            edges.push(EdgeLabel::PeripheralStep { factor: s.factor, exps: s.exps.clone() });
        } else {
            let e = s.exps[0];
            let gen = GenId { factor: s.factor, coord: 0 };
            let sign = if e < 0 { -1 } else { 1 };
            edges.extend((0..e.unsigned_abs()).map(|_| EdgeLabel::XStep { gen, sign }));
        }
    }
    Path::new(spec, g.clone(), edges)
}

/// Vertex sequence of [`geodesic_rel`] from `g` to `h`, without building
/// the path. Every vertex of a relative geodesic is a phase vertex.
pub fn rel_geodesic_vertices(spec: &GroupSpec, g: &NormalForm, h: &NormalForm) -> Vec<NormalForm> {
    let t = g.left_divide(h);
    let mut out = Vec::with_capacity(t.rel_length(spec) as usize + 1);
    let mut cur = g.clone();
    out.push(cur.clone());
    for s in t.syllables() {
        if spec.is_peripheral(s.factor) {
            cur.push_syllable(s.clone());
            out.push(cur.clone());
        } else {
            let unit = Syllable::new(s.factor, &[s.exps[0].signum()]);
            for _ in 0..s.exps[0].unsigned_abs() {
                cur.push_syllable(unit.clone());
                out.push(cur.clone());
            }
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct GeodesicEnumeration {
    pub paths: Vec<Path>,
    /// Set when `count_cap` stopped the enumeration early.
    pub count_cap_exceeded: bool,
}

/// Every relative geodesic without backtracking from `g` to `h` whose
/// peripheral steps have sup-norm at most `exp_cap`, in canonical order, up
/// to `count_cap` paths.
pub fn enumerate_rel_geodesics(
    spec: &GroupSpec,
    g: &NormalForm,
    h: &NormalForm,
    exp_cap: u64,
    count_cap: usize,
) -> Result<GeodesicEnumeration> {
    let target = g.left_divide(h);
    let distance = target.rel_length(spec) as usize;
    if distance > MAX_ENUMERATION_DISTANCE {
        return Err(Error::DistanceTooLarge { distance, limit: MAX_ENUMERATION_DISTANCE });
    }
    let steps: Vec<(EdgeLabel, NormalForm)> = relative_steps(spec, exp_cap)
        .into_iter()
        .map(|e| {
            let inv = e.element(spec).inverse();
            (e, inv)
        })
        .collect();
    let mut out = GeodesicEnumeration { paths: Vec::new(), count_cap_exceeded: false };
    let mut stack = Vec::with_capacity(distance);
    descend(spec, g, &steps, &target, distance, count_cap, &mut stack, &mut out);
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn descend(
    spec: &GroupSpec,
    origin: &NormalForm,
    steps: &[(EdgeLabel, NormalForm)],
    remaining: &NormalForm,
    remaining_len: usize,
    count_cap: usize,
    stack: &mut Vec<EdgeLabel>,
    out: &mut GeodesicEnumeration,
) {
    if out.count_cap_exceeded {
        return;
    }
    if remaining_len == 0 {
        let path = Path::new(spec, origin.clone(), stack.clone());
        if is_without_backtracking(spec, &path) {
            if out.paths.len() == count_cap {
                out.count_cap_exceeded = true;
            } else {
                out.paths.push(path);
            }
        }
        return;
    }
    for (edge, inv) in steps {
        let rest = inv.multiply(remaining);
        if rest.rel_length(spec) as usize + 1 == remaining_len {
            stack.push(edge.clone());
            descend(spec, origin, steps, &rest, remaining_len - 1, count_cap, stack, out);
            stack.pop();
        }
    }
}
