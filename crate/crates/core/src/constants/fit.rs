use num::{Signed, Zero};

use super::rational::{rat, Rational};

/// Solves the square system `m x = rhs` exactly; `None` when singular.
fn solve(mut m: Vec<Vec<Rational>>, mut rhs: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = rhs.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &m[col][col];
            let pivot_row = m[col].clone();
            for (c, p) in pivot_row.iter().enumerate().skip(col) {
                m[r][c] -= &factor * p;
            }
            let delta = &factor * &rhs[col];
            rhs[r] -= delta;
        }
    }
    Some((0..n).map(|i| &rhs[i] / &m[i][i]).collect())
}

/// Least-squares fit of `y ≈ c0 + c1 k + c2 k²` with every coefficient
/// constrained to be non-negative. Exact: each active set is solved through
/// its normal equations and the feasible solution with the smallest
/// residual wins.
pub fn fit_quadratic_nonneg(points: &[(u64, Rational)]) -> [Rational; 3] {
    let powers = |k: u64, j: usize| rat((k as i64).pow(j as u32));
    let mut best: Option<(Rational, [Rational; 3])> = None;
    for mask in 0u8..8 {
        let active: Vec<usize> = (0..3).filter(|j| mask & (1 << j) != 0).collect();
        let coeffs = if active.is_empty() {
            Some(Vec::new())
        } else {
            let n = active.len();
            let mut m = vec![vec![rat(0); n]; n];
            let mut rhs = vec![rat(0); n];
            for (k, y) in points {
                for (a, &ja) in active.iter().enumerate() {
                    rhs[a] += powers(*k, ja) * y;
                    for (b, &jb) in active.iter().enumerate() {
                        m[a][b] += powers(*k, ja) * powers(*k, jb);
                    }
                }
            }
            solve(m, rhs)
        };
        let Some(coeffs) = coeffs else { continue };
        if coeffs.iter().any(|c| c.is_negative()) {
            continue;
        }
        let mut full = [rat(0), rat(0), rat(0)];
        for (c, &j) in coeffs.into_iter().zip(&active) {
            full[j] = c;
        }
        let sse = points
            .iter()
            .map(|(k, y)| {
                let fit = &full[0] + &full[1] * powers(*k, 1) + &full[2] * powers(*k, 2);
                let r = fit - y;
                &r * &r
            })
            .fold(rat(0), |a, b| a + b);
        if best.as_ref().is_none_or(|(b, _)| sse < *b) {
            best = Some((sse, full));
        }
    }
    best.expect("the empty model is always feasible").1
}
