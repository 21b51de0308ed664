use std::collections::HashMap;

use rayon::prelude::*;

use super::rational::{rat, Rational};
use crate::cayley::{ball_x, enumerate_rel_geodesics, rel_geodesic_vertices, Path};
use crate::error::Result;
use crate::geometry::decompose;
use crate::group::{GroupSpec, NormalForm};

/// Geodesics enumerated per endpoint pair when scanning for coset penetration.
const BCP_COUNT_CAP: usize = 256;

/// Elements of the `X`-ball whose syllables all respect the exponent cap.
fn sample_points(spec: &GroupSpec, radius: usize, exp_cap: u64, cap: usize) -> Result<Vec<NormalForm>> {
    let ball = ball_x(spec, radius, cap)?;
    Ok(ball.iter().map(|(_, g)| g.clone()).filter(|g| g.sup_exponent() <= exp_cap).collect())
}

/// Four-point hyperbolicity defect of the relative metric.
///
/// The sample is the `X`-ball of the given radius (syllables capped at
/// `exp_cap`), measured with the coned-off distance. By left invariance one
/// point of every quadruple is placed at the identity. For a quadruple the
/// three pair sums `S1 ≥ S2 ≥ S3` give the defect `(S1 - S2) / 2`; the
/// estimate is the maximum defect.
pub fn estimate_delta(spec: &GroupSpec, radius: usize, exp_cap: u64, cap: usize) -> Result<Rational> {
    let points = sample_points(spec, radius, exp_cap, cap)?;
    debug_assert!(points[0].is_identity());
    let n = points.len();
    let dist: Vec<Vec<u32>> = points
        .par_iter()
        .map(|a| points.iter().map(|b| a.rel_distance(spec, b) as u32).collect())
        .collect();
    let twice = (1..n)
        .into_par_iter()
        .map(|x| {
            let mut best = 0u32;
            let dx = &dist[x];
            for y in x + 1..n {
                let dy = &dist[y];
                for z in y + 1..n {
                    let s1 = dist[0][x] + dy[z];
                    let s2 = dist[0][y] + dx[z];
                    let s3 = dist[0][z] + dx[y];
                    let (hi, mid) = top_two(s1, s2, s3);
                    best = best.max(hi - mid);
                }
            }
            best
        })
        .max()
        .unwrap_or(0);
    Ok(Rational::new((twice as i64).into(), 2.into()))
}

fn top_two(a: u32, b: u32, c: u32) -> (u32, u32) {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if c >= hi {
        (c, hi)
    } else if c >= lo {
        (hi, c)
    } else {
        (hi, lo)
    }
}

fn one_sided(from: &[NormalForm], to: &[NormalForm]) -> u64 {
    from.iter()
        .map(|u| to.iter().map(|v| u.x_distance(v)).min().unwrap_or(0))
        .max()
        .unwrap_or(0)
}

/// Largest `Γ`-distance from a phase vertex of one relative geodesic to the
/// nearest phase vertex of another, over pairs of `k`-similar relative
/// geodesics.
///
/// The first geodesic runs from `1` to `h` with `‖h‖_X ≤ radius`; the second
/// from `g` to `h·b` with `‖g‖_X, ‖b‖_X ≤ k`. Relative geodesics are unique
/// in this family and never backtrack, and all of their vertices are phase
/// vertices.
pub fn estimate_epsilon(spec: &GroupSpec, k: usize, radius: usize, cap: usize) -> Result<Rational> {
    let ends = ball_x(spec, radius, cap)?;
    let near = ball_x(spec, k, cap)?;
    let near: Vec<&NormalForm> = near.iter().map(|(_, g)| g).collect();
    let ends: Vec<&NormalForm> = ends.iter().map(|(_, g)| g).collect();
    let one = NormalForm::identity();
    let worst = ends
        .par_iter()
        .map(|h| {
            let p = rel_geodesic_vertices(spec, &one, h);
            let mut best = 0u64;
            for b in &near {
                let h2 = h.multiply(b);
                for g in &near {
                    let q = rel_geodesic_vertices(spec, g, &h2);
                    best = best.max(one_sided(&p, &q)).max(one_sided(&q, &p));
                }
            }
            best
        })
        .max()
        .unwrap_or(0);
    Ok(rat(worst as i64))
}

/// Canonical key of the coset `vH_i` containing the component start `v`.
fn coset_key(v: &NormalForm, factor: usize) -> NormalForm {
    match v.last() {
        Some(s) if s.factor == factor => {
            NormalForm::from_syllables(v.syllables()[..v.len() - 1].iter().cloned())
        }
        _ => v.clone(),
    }
}

fn penetration_discrepancy(spec: &GroupSpec, p: &Path, q: &Path) -> u64 {
    let index = |path: &Path| {
        decompose(spec, path)
            .into_iter()
            .map(|c| ((c.factor, coset_key(&c.start_vertex, c.factor)), c))
            .collect::<HashMap<_, _>>()
    };
    let (cp, cq) = (index(p), index(q));
    let mut worst = 0;
    for (key, s) in &cp {
        worst = worst.max(match cq.get(key) {
            Some(t) => s.start_vertex.x_distance(&t.start_vertex).max(s.end_vertex.x_distance(&t.end_vertex)),
            None => s.label.x_length(),
        });
    }
    for (key, t) in &cq {
        if !cp.contains_key(key) {
            worst = worst.max(t.label.x_length());
        }
    }
    worst
}

/// Bounded coset penetration constant for relative geodesics.
///
/// For every endpoint `h` in the capped `X`-ball, all relative geodesics
/// without backtracking from `1` to `h` are enumerated and compared pairwise:
/// entry and exit points of shared cosets, and the distance travelled in
/// cosets only one of them penetrates. Returns the largest discrepancy.
pub fn estimate_bcp(spec: &GroupSpec, radius: usize, exp_cap: u64, cap: usize) -> Result<Rational> {
    let points = sample_points(spec, radius, exp_cap, cap)?;
    let one = NormalForm::identity();
    let per_point: Result<Vec<u64>> = points
        .par_iter()
        .map(|h| {
            let geos = enumerate_rel_geodesics(spec, &one, h, exp_cap, BCP_COUNT_CAP)?;
            let mut worst = 0;
            for (i, p) in geos.paths.iter().enumerate() {
                for q in &geos.paths[i + 1..] {
                    worst = worst.max(penetration_discrepancy(spec, p, q));
                }
            }
            Ok(worst)
        })
        .collect();
    Ok(rat(per_point?.into_iter().max().unwrap_or(0) as i64))
}
