//! Planted-conjugator experiments: random `a` and `x`, `b = x^{-1} a x`,
//! then the oracle, the bounded solver and the lemma checks on each pair.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::constants::{ExtNat, HypConstants};
use crate::error::{Error, Result};
use crate::group::{classify, ClassKind, GroupSpec, Letter, NormalForm, Word};
use crate::solver::{build_diagram, check_component_bounds, check_lemma_middle, class_bound, CspOutcome, Searcher};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ExperimentParams {
    pub trials: usize,
    /// Upper bound on the random word length of `a`.
    pub l_max: usize,
    /// Upper bound on the random word length of the planted conjugator.
    pub x_max: usize,
    /// Search radius for both the oracle and the solver.
    pub cap: usize,
    pub seed: u64,
    /// Record wall time per trial. Off by default so reports are reproducible.
    pub timing: bool,
}

impl ExperimentParams {
    pub fn new(trials: usize, l_max: usize, cap: usize, seed: u64) -> Self {
        ExperimentParams { trials, l_max, x_max: cap / 2, cap, seed, timing: false }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExperimentRecord {
    pub trial: usize,
    pub a: String,
    pub b: String,
    pub x_planted: String,
    #[serde(rename = "L")]
    pub l: u64,
    pub x_planted_len: u64,
    /// Oracle minimum; `None` when the oracle exhausted its radius.
    pub x_min_len: Option<u64>,
    pub x_min: Option<String>,
    pub solver: String,
    pub solver_len: Option<u64>,
    pub bound: ExtNat,
    pub class: ClassKind,
    pub middle_violations: usize,
    pub component_violations: usize,
    pub millis: Option<u128>,
}

impl ExperimentRecord {
    /// True when the solver found a conjugator of the oracle's minimal length.
    pub fn solver_matches_oracle(&self) -> bool {
        self.x_min_len.is_some() && self.solver_len == self.x_min_len
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelSummary {
    #[serde(rename = "L")]
    pub l: u64,
    pub trials: usize,
    pub max_min_len: u64,
    pub mean_min_len: f64,
    pub max_bound: ExtNat,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentSummary {
    pub trials: usize,
    pub per_l: Vec<LevelSummary>,
    pub incomplete: usize,
    pub solver_mismatches: usize,
    pub middle_violations: usize,
    pub component_violations: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub params: ExperimentParams,
    pub records: Vec<ExperimentRecord>,
    pub summary: ExperimentSummary,
}

/// Random element of `X`-length at most `max_len`, from a reduced-or-not
/// random word whose length is uniform on `0..=max_len`.
pub fn random_element(spec: &GroupSpec, rng: &mut impl Rng, max_len: usize) -> NormalForm {
    let gens = spec.generators();
    let len = rng.gen_range(0..=max_len);
    let letters = (0..len)
        .map(|_| Letter { gen: gens[rng.gen_range(0..gens.len())], sign: if rng.gen::<bool>() { 1 } else { -1 } })
        .collect();
    Word::new(letters).normalize(spec)
}

/// Independent generator for trial `trial` under `seed`.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

fn run_trial(
    searcher: &Searcher,
    consts: &HypConstants,
    params: &ExperimentParams,
    trial: usize,
) -> Result<ExperimentRecord> {
    let spec = searcher.spec();
    let started = Instant::now();
    let mut rng = trial_rng(params.seed, trial);
    let a = random_element(spec, &mut rng, params.l_max);
    let x = random_element(spec, &mut rng, params.x_max);
    let b = a.conjugate_by(&x);
    let l = a.x_length().max(b.x_length());

    let oracle = searcher.oracle(&a, &b, params.cap)?;
    let solved = searcher.solve(&a, &b, consts, params.cap)?;
    if let Some(y) = solved.conjugator() {
        assert!(crate::solver::verify_conjugation(&a, y, &b), "solver returned a non-conjugator");
    }
    let (mut middle, mut component) = (0, 0);
    if let Some(x_min) = oracle.conjugator() {
        let diagram = build_diagram(spec, &a, &b, x_min)?;
        middle = check_lemma_middle(spec, &diagram, &consts.delta).violations.len();
        component = check_component_bounds(spec, &diagram, consts).violations.len();
    }
    let render = |g: &NormalForm| g.display(spec).to_string();
    Ok(ExperimentRecord {
        trial,
        a: render(&a),
        b: render(&b),
        x_planted: render(&x),
        l,
        x_planted_len: x.x_length(),
        x_min_len: oracle.conjugator().map(NormalForm::x_length),
        x_min: oracle.conjugator().map(render),
        solver: solved.label().to_string(),
        solver_len: match &solved {
            CspOutcome::Found { x_len, .. } => Some(*x_len),
            _ => None,
        },
        bound: class_bound(spec, &a, &b, consts),
        class: classify(spec, &a).kind(),
        middle_violations: middle,
        component_violations: component,
        millis: params.timing.then(|| started.elapsed().as_millis()),
    })
}

/// Runs all trials on the current rayon pool. Trial `i` draws from its own
/// seeded stream and records come back ordered by trial id, so the report
/// does not depend on the number of workers.
pub fn experiment_growth(
    spec: &GroupSpec,
    consts: &HypConstants,
    params: &ExperimentParams,
    global_cap: usize,
) -> Result<ExperimentReport> {
    let searcher = Searcher::new(spec, global_cap)?;
    let records = (0..params.trials)
        .into_par_iter()
        .map(|t| run_trial(&searcher, consts, params, t))
        .collect::<Result<Vec<_>>>()?;
    let summary = summarize(&records);
    Ok(ExperimentReport { params: *params, records, summary })
}

pub fn summarize(records: &[ExperimentRecord]) -> ExperimentSummary {
    let mut by_l: BTreeMap<u64, Vec<&ExperimentRecord>> = BTreeMap::new();
    for r in records {
        by_l.entry(r.l).or_default().push(r);
    }
    let per_l = by_l
        .into_iter()
        .map(|(l, rs)| {
            let lens: Vec<u64> = rs.iter().filter_map(|r| r.x_min_len).collect();
            LevelSummary {
                l,
                trials: rs.len(),
                max_min_len: lens.iter().copied().max().unwrap_or(0),
                mean_min_len: if lens.is_empty() { 0.0 } else { lens.iter().sum::<u64>() as f64 / lens.len() as f64 },
                max_bound: rs.iter().map(|r| r.bound.clone()).max().unwrap_or(ExtNat::from_u64(0)),
            }
        })
        .collect();
    ExperimentSummary {
        trials: records.len(),
        per_l,
        incomplete: records.iter().filter(|r| r.x_min_len.is_none()).count(),
        solver_mismatches: records.iter().filter(|r| !r.solver_matches_oracle()).count(),
        middle_violations: records.iter().map(|r| r.middle_violations).sum(),
        component_violations: records.iter().map(|r| r.component_violations).sum(),
    }
}

pub const CSV_HEADER: [&str; 9] = [
    "trial",
    "L",
    "x_planted_len",
    "x_min_len",
    "bound",
    "class",
    "middle_violations",
    "component_violations",
    "millis",
];

pub fn write_csv<W: Write>(records: &[ExperimentRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    let opt = |v: Option<String>| v.unwrap_or_default();
    for r in records {
        w.write_record([
            r.trial.to_string(),
            r.l.to_string(),
            r.x_planted_len.to_string(),
            opt(r.x_min_len.map(|v| v.to_string())),
            r.bound.to_string(),
            r.class.as_str().to_string(),
            r.middle_violations.to_string(),
            r.component_violations.to_string(),
            opt(r.millis.map(|v| v.to_string())),
        ])?;
    }
    w.flush().map_err(Error::Io)
}

/// Runs `f` on a dedicated pool of `workers` threads.
pub fn with_workers<R: Send>(workers: usize, f: impl FnOnce() -> R + Send) -> Result<R> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Config(format!("worker pool: {e}")))?;
    Ok(pool.install(f))
}
