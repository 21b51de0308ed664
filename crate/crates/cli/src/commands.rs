use std::fs::File;
use std::io::{BufWriter, Write};

use serde_json::{json, Value};

use relhyp::cayley::enumerate_rel_geodesics;
use relhyp::constants::{
    bound_hyperbolic, bound_parabolic, bound_relative, estimate_bcp, estimate_delta, estimate_epsilon,
    fit_quadratic_nonneg, ExtNat,
};
use relhyp::experiment::{experiment_growth, with_workers, write_csv, ExperimentParams};
use relhyp::geometry::check_minimal_pair_properties;
use relhyp::solver::{build_diagram, check_component_bounds, check_lemma_middle, CspOutcome, NotConjugateReason, Searcher};
use relhyp::{
    ball_rel, ball_x, classify, dist_rel, dist_x, parse_element, Classification, Error, GroupSpec, LemmaReport,
    NormalForm, Result,
};

use crate::config::{OutputMode, RunConfig};
use crate::{Command, MetricArg};

/// What a subcommand prints: a human summary and a JSON document.
pub struct Report {
    text: String,
    json: Value,
    /// Already written (ball dumps, CSV on stdout).
    streamed: bool,
}

impl Report {
    fn new(text: impl Into<String>, json: Value) -> Self {
        Report { text: text.into(), json, streamed: false }
    }

    pub fn emit(&self, mode: OutputMode) {
        if self.streamed {
            return;
        }
        let body = match mode {
            OutputMode::Text => self.text.clone(),
            OutputMode::Json => serde_json::to_string_pretty(&self.json).expect("json"),
        };
        // A closed pipe (`relhyp ... | head`) is not an error worth reporting.
        let _ = writeln!(std::io::stdout().lock(), "{body}");
    }
}

/// Largest number printed in full; larger values are summarised by digit count.
const MAX_PRINTED_DIGITS: usize = 400;

fn ext_json(e: &ExtNat) -> Value {
    let digits = e.digits();
    let value = match e {
        ExtNat::Infinite => Value::from("inf"),
        _ if digits <= MAX_PRINTED_DIGITS => Value::from(e.to_string()),
        _ => Value::Null,
    };
    json!({ "value": value, "digits": digits })
}

fn ext_text(e: &ExtNat) -> String {
    match e {
        ExtNat::Finite(_) if e.digits() > MAX_PRINTED_DIGITS => format!("<{} digits>", e.digits()),
        _ => e.to_string(),
    }
}

fn ignore_closed_pipe(r: Result<()>) -> Result<()> {
    match r {
        Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        Err(Error::Csv(e)) if matches!(e.kind(), csv::ErrorKind::Io(io) if io.kind() == std::io::ErrorKind::BrokenPipe) => Ok(()),
        other => other,
    }
}

fn element(spec: &GroupSpec, text: &str) -> Result<NormalForm> {
    parse_element(text, spec)
}

fn show(spec: &GroupSpec, g: &NormalForm) -> String {
    g.display(spec).to_string()
}

fn outcome_json(spec: &GroupSpec, out: &CspOutcome) -> Value {
    match out {
        CspOutcome::Found { x, x_len, searched_radius } => json!({
            "outcome": "found", "x": show(spec, x), "x_len": x_len, "searched_radius": searched_radius,
        }),
        CspOutcome::NotConjugate { reason } => {
            let mut v = json!({ "outcome": "not-conjugate", "reason": reason.as_str() });
            if let NotConjugateReason::ExhaustedBound { radius } = reason {
                v["radius"] = json!(radius);
            }
            v
        }
        CspOutcome::BoundExceedsCap { bound, cap } => {
            json!({ "outcome": "bound-exceeds-cap", "bound": ext_json(bound), "cap": cap })
        }
    }
}

fn outcome_text(spec: &GroupSpec, out: &CspOutcome) -> String {
    match out {
        CspOutcome::Found { x, x_len, .. } => format!("found x = {} (length {x_len})", show(spec, x)),
        CspOutcome::NotConjugate { reason: NotConjugateReason::ExhaustedBound { radius } } => {
            format!("not conjugate: exhausted-bound (radius {radius})")
        }
        CspOutcome::NotConjugate { reason } => format!("not conjugate: {}", reason.as_str()),
        CspOutcome::BoundExceedsCap { bound, cap } => {
            format!("no conjugator within cap {cap}; certified bound {} exceeds it", ext_text(bound))
        }
    }
}

fn classification_json(spec: &GroupSpec, c: &Classification) -> Value {
    match c {
        Classification::Parabolic { factor, representative, conjugator } => json!({
            "kind": "parabolic",
            "factor": spec.factor(*factor).name,
            "representative": show(spec, representative),
            "conjugator": show(spec, conjugator),
        }),
        other => json!({ "kind": other.kind().as_str() }),
    }
}

fn report_json(r: &LemmaReport) -> Value {
    serde_json::to_value(r).expect("report serializes")
}

pub fn dispatch(cfg: &RunConfig, cmd: &Command) -> Result<Report> {
    let spec = &cfg.group;
    let caps = &cfg.caps;
    match cmd {
        Command::Nf { word } => {
            let g = element(spec, word)?;
            let text = show(spec, &g);
            Ok(Report::new(
                text.clone(),
                json!({
                    "normal_form": text,
                    "syllables": g.len(),
                    "x_length": g.x_length(),
                    "rel_length": g.rel_length(spec),
                }),
            ))
        }
        Command::Eq { left, right } => {
            let equal = element(spec, left)? == element(spec, right)?;
            Ok(Report::new(equal.to_string(), json!({ "equal": equal })))
        }
        Command::Classify { word } => {
            let g = element(spec, word)?;
            let c = classify(spec, &g);
            let text = match &c {
                Classification::Parabolic { factor, representative, conjugator } => format!(
                    "parabolic in {}: representative {}, conjugator {}",
                    spec.factor(*factor).name,
                    show(spec, representative),
                    show(spec, conjugator)
                ),
                other => other.kind().as_str().to_string(),
            };
            Ok(Report::new(text, classification_json(spec, &c)))
        }
        Command::Dist { from, to, geodesics } => {
            let (g, h) = (element(spec, from)?, element(spec, to)?);
            let (dx, dr) = (dist_x(&g, &h), dist_rel(spec, &g, &h));
            let mut text = format!("d_X = {dx}\nd_rel = {dr}");
            let mut doc = json!({ "dist_x": dx, "dist_rel": dr });
            if *geodesics {
                let e = enumerate_rel_geodesics(spec, &g, &h, caps.exp_cap, caps.count_cap)?;
                let paths: Vec<String> = e.paths.iter().map(|p| p.render(spec)).collect();
                for p in &paths {
                    text.push_str(&format!("\n  {p}"));
                }
                if e.count_cap_exceeded {
                    text.push_str(&format!("\n  (stopped at count cap {})", caps.count_cap));
                }
                doc["geodesics"] = json!(paths);
                doc["count_cap_exceeded"] = json!(e.count_cap_exceeded);
            }
            Ok(Report::new(text, doc))
        }
        Command::Ball { metric, x_confine, out } => {
            let ball = match metric {
                MetricArg::X => ball_x(spec, caps.ball_radius, caps.global)?,
                MetricArg::Rel => ball_rel(spec, caps.ball_radius, caps.exp_cap, *x_confine, caps.global)?,
            };
            match out {
                Some(path) => {
                    let mut w = BufWriter::new(File::create(path)?);
                    ball.write_jsonl(spec, &mut w)?;
                    w.flush()?;
                    let sizes = ball.shell_sizes();
                    Ok(Report::new(
                        format!("{} elements, shell sizes {sizes:?}", ball.len()),
                        json!({ "elements": ball.len(), "shell_sizes": sizes }),
                    ))
                }
                None => {
                    let stdout = std::io::stdout();
                    let mut lock = BufWriter::new(stdout.lock());
                    ignore_closed_pipe(ball.write_jsonl(spec, &mut lock).and_then(|_| Ok(lock.flush()?)))?;
                    Ok(Report { streamed: true, ..Report::new("", Value::Null) })
                }
            }
        }
        Command::Csp { a, b } | Command::Oracle { a, b } => {
            let (a, b) = (element(spec, a)?, element(spec, b)?);
            let searcher = Searcher::new(spec, caps.global)?;
            let out = match cmd {
                Command::Csp { .. } => {
                    let consts = cfg.constants()?;
                    with_workers(cfg.workers, || searcher.solve(&a, &b, &consts, caps.search_cap))??
                }
                _ => with_workers(cfg.workers, || searcher.oracle(&a, &b, caps.search_cap))??,
            };
            Ok(Report::new(outcome_text(spec, &out), outcome_json(spec, &out)))
        }
        Command::Delta => {
            let d = with_workers(cfg.workers, || estimate_delta(spec, caps.ball_radius, caps.exp_cap, caps.global))??;
            Ok(Report::new(
                format!("delta = {d}"),
                json!({ "delta": d.to_string(), "radius": caps.ball_radius, "exp_cap": caps.exp_cap }),
            ))
        }
        Command::Epsilon { k, k_max } => {
            let ks: Vec<u64> = match k_max {
                Some(m) => (0..=*m).collect(),
                None => vec![*k],
            };
            let samples = with_workers(cfg.workers, || {
                ks.iter()
                    .map(|&k| Ok((k, estimate_epsilon(spec, k as usize, caps.ball_radius, caps.global)?)))
                    .collect::<Result<Vec<_>>>()
            })??;
            let mut text: Vec<String> = samples.iter().map(|(k, e)| format!("epsilon({k}) = {e}")).collect();
            let mut doc = json!({
                "radius": caps.ball_radius,
                "samples": samples.iter().map(|(k, e)| json!({ "k": k, "epsilon": e.to_string() })).collect::<Vec<_>>(),
            });
            if k_max.is_some() {
                let fit = fit_quadratic_nonneg(&samples);
                text.push(format!("fit: eps(k) = {} + {}k + {}k^2", fit[0], fit[1], fit[2]));
                doc["eps_coeffs"] = json!(fit.iter().map(|c| c.to_string()).collect::<Vec<_>>());
            }
            Ok(Report::new(text.join("\n"), doc))
        }
        Command::Bcp => {
            let c = with_workers(cfg.workers, || estimate_bcp(spec, caps.ball_radius, caps.exp_cap, caps.global))??;
            Ok(Report::new(
                format!("c(1) = {c}"),
                json!({ "c_bcp": c.to_string(), "radius": caps.ball_radius, "exp_cap": caps.exp_cap }),
            ))
        }
        Command::Bounds { l } => {
            let consts = cfg.constants()?;
            let n = spec.x_count();
            let bounds = [
                ("relative", bound_relative(*l, &consts, n)),
                ("hyperbolic", bound_hyperbolic(*l, &consts, n)),
                ("parabolic", bound_parabolic(*l, &consts, n)),
            ];
            let mut text = Vec::new();
            let mut doc = json!({ "L": l, "x_count": n, "cap": caps.search_cap });
            for (name, b) in &bounds {
                let flag = b.exceeds(caps.search_cap);
                text.push(format!("{name}: {}{}", ext_text(b), if flag { "  [exceeds cap]" } else { "" }));
                let mut v = ext_json(b);
                v["exceeds_cap"] = json!(flag);
                doc[*name] = v;
            }
            Ok(Report::new(text.join("\n"), doc))
        }
        Command::Experiment { trials, lmax, x_max, out, timing } => {
            let consts = cfg.constants()?;
            let params = ExperimentParams {
                trials: *trials,
                l_max: *lmax,
                x_max: x_max.unwrap_or(caps.search_cap / 2),
                cap: caps.search_cap,
                seed: cfg.seed,
                timing: *timing,
            };
            let report = with_workers(cfg.workers, || experiment_growth(spec, &consts, &params, caps.global))??;
            let summary = serde_json::to_value(&report.summary)?;
            match out {
                Some(path) => {
                    write_csv(&report.records, BufWriter::new(File::create(path)?))?;
                    let s = &report.summary;
                    let mut text = vec![format!(
                        "{} trials: {} incomplete, {} solver mismatches, {} middle / {} component violations",
                        s.trials, s.incomplete, s.solver_mismatches, s.middle_violations, s.component_violations
                    )];
                    for lv in &s.per_l {
                        text.push(format!(
                            "  L={:>2}: {:>3} trials, max min-length {}, mean {:.3}, max bound {}",
                            lv.l,
                            lv.trials,
                            lv.max_min_len,
                            lv.mean_min_len,
                            ext_text(&lv.max_bound)
                        ));
                    }
                    Ok(Report::new(text.join("\n"), summary))
                }
                None => {
                    ignore_closed_pipe(write_csv(&report.records, std::io::stdout().lock()))?;
                    Ok(Report { streamed: true, ..Report::new("", summary) })
                }
            }
        }
        Command::CheckLemmas { a, b, x } => {
            let (a, b) = (element(spec, a)?, element(spec, b)?);
            let x = match x {
                Some(t) => element(spec, t)?,
                None => {
                    let searcher = Searcher::new(spec, caps.global)?;
                    let out = with_workers(cfg.workers, || searcher.oracle(&a, &b, caps.search_cap))??;
                    out.conjugator()
                        .cloned()
                        .ok_or_else(|| Error::PreconditionViolated(outcome_text(spec, &out)))?
                }
            };
            let consts = cfg.constants()?;
            let diagram = build_diagram(spec, &a, &b, &x)?;
            let middle = check_lemma_middle(spec, &diagram, &consts.delta);
            let component = check_component_bounds(spec, &diagram, &consts);
            let pair = check_minimal_pair_properties(spec, &diagram.pair);
            let line = |name: &str, r: &LemmaReport| {
                let mut s = format!("{name}: {} violation(s)", r.violations.len());
                for v in &r.violations {
                    s.push_str(&format!("\n  {}: {}", v.kind, v.details));
                }
                s
            };
            let text = [
                format!("x = {} (length {})", show(spec, &x), x.x_length()),
                format!("theta_p: {}", diagram.theta_p.render(spec)),
                line("middle closeness", &middle),
                line("component bounds", &component),
                line("minimal pair", &pair),
            ]
            .join("\n");
            Ok(Report::new(
                text,
                json!({
                    "x": show(spec, &x),
                    "x_len": x.x_length(),
                    "middle": report_json(&middle),
                    "components": report_json(&component),
                    "minimal_pair": report_json(&pair),
                }),
            ))
        }
    }
}
