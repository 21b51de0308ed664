//! Fixed workloads shared by the benchmarks in `benches/`.

use relhyp::{parse_element, GroupSpec, NormalForm};

/// Planted conjugate pairs `(a, x^{-1} a x)` in `Z^2 * Z` with conjugators
/// of increasing length.
pub fn planted_pairs() -> Vec<(NormalForm, NormalForm)> {
    let g = GroupSpec::z2_star_z();
    let cases = [
        ("s u t^-1 u", "t"),
        ("s^2 u^-1 t u", "u s"),
        ("u s t u^-2", "s^-1 u t"),
        ("t u s^-1 u s", "u t^2 u"),
    ];
    cases
        .iter()
        .map(|(a, x)| {
            let a = parse_element(a, &g).expect("valid word");
            let x = parse_element(x, &g).expect("valid word");
            let b = a.conjugate_by(&x);
            (a, b)
        })
        .collect()
}

/// A long word whose normal form needs many cancellations.
pub fn cancelling_word(repeats: usize) -> String {
    "s u t u^-1 s^-1 t^-1 u ".repeat(repeats) + &"u^-1 t s u t^-1 u^-1 s^-1 ".repeat(repeats)
}
