//! Cardinality series. A bundle with fiber sizes `k_0, ..., k_{m-1}`
//! determines the exact counting function `x |-> sum_b k_b^x` (Dirichlet
//! side) or `x |-> sum_b x^{k_b}` (polynomial side); both are captured by
//! the histogram of fiber sizes. Two bundles have the same series exactly
//! when they are isomorphic, so the series is a complete invariant.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::bundle::Bundle;
use crate::finset;

#[derive(Copy, Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeriesKind {
    Dirichlet,
    Polynomial,
}

/// `coefficients[n]` counts the base points whose fiber has exactly `n`
/// elements; zero counts are never stored.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CardinalitySeries {
    pub kind: SeriesKind,
    pub coefficients: BTreeMap<usize, usize>,
}

pub fn series_of(bundle: &Bundle, kind: SeriesKind) -> CardinalitySeries {
    let mut coefficients = BTreeMap::new();
    for &k in bundle.fiber_sizes() {
        *coefficients.entry(k).or_insert(0) += 1;
    }
    CardinalitySeries { kind, coefficients }
}

impl CardinalitySeries {
    /// Exact value at the canonical set of size `x`.
    pub fn eval(&self, x: usize) -> BigUint {
        self.coefficients
            .iter()
            .map(|(&n, &a)| {
                let term = match self.kind {
                    SeriesKind::Dirichlet => finset::exponential_big(n, x),
                    SeriesKind::Polynomial => finset::exponential_big(x, n),
                };
                BigUint::from(a) * term
            })
            .sum()
    }

    /// Human form. Dirichlet terms ascend in the base (`2^X + 2·3^X`);
    /// polynomial terms descend in the exponent (`2·X^3 + X^2`). Unit
    /// coefficients are omitted, the empty series renders as `0`.
    pub fn render(&self) -> String {
        if self.coefficients.is_empty() {
            return "0".to_string();
        }
        let mut terms: Vec<(usize, usize)> =
            self.coefficients.iter().map(|(&n, &a)| (n, a)).collect();
        if matches!(self.kind, SeriesKind::Polynomial) {
            terms.reverse();
        }
        let mut out = String::new();
        for (i, (n, a)) in terms.into_iter().enumerate() {
            if i > 0 {
                out.push_str(" + ");
            }
            let body = match self.kind {
                SeriesKind::Dirichlet => format!("{n}^X"),
                SeriesKind::Polynomial => match n {
                    0 => "1".to_string(),
                    1 => "X".to_string(),
                    _ => format!("X^{n}"),
                },
            };
            if a == 1 {
                out.push_str(&body);
            } else if matches!(self.kind, SeriesKind::Polynomial) && n == 0 {
                let _ = write!(out, "{a}");
            } else {
                let _ = write!(out, "{a}·{body}");
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::all_bundles;
    use crate::functor;

    #[test]
    fn series_golden_renders() {
        let b = Bundle::new(vec![2, 3, 3]);
        let s = series_of(&b, SeriesKind::Dirichlet);
        assert_eq!(s.render(), "2^X + 2·3^X");

        let b = Bundle::new(vec![0, 0]);
        assert_eq!(series_of(&b, SeriesKind::Dirichlet).render(), "2·0^X");

        let b = Bundle::new(vec![]);
        assert_eq!(series_of(&b, SeriesKind::Dirichlet).render(), "0");

        let b = Bundle::new(vec![2, 3, 3, 0]);
        assert_eq!(series_of(&b, SeriesKind::Polynomial).render(), "2·X^3 + X^2 + 1");
    }

    #[test]
    fn series_eval_examples() {
        let s = CardinalitySeries {
            kind: SeriesKind::Dirichlet,
            coefficients: BTreeMap::from([(2, 1), (3, 2)]),
        };
        assert_eq!(s.eval(1), BigUint::from(8usize));
        assert_eq!(s.eval(2), BigUint::from(22usize));
        // 0^0 = 1: at x = 0 every base point contributes one element.
        assert_eq!(s.eval(0), BigUint::from(3usize));
    }

    #[test]
    fn series_agrees_with_the_functors() {
        for b in all_bundles(3, 3) {
            let d = series_of(&b, SeriesKind::Dirichlet);
            let p = series_of(&b, SeriesKind::Polynomial);
            for x in 0..=4 {
                assert_eq!(d.eval(x), functor::dir_card(&b, x));
                assert_eq!(p.eval(x), functor::poly_card(&b, x));
            }
        }
    }

    #[test]
    fn series_is_a_complete_isomorphism_invariant() {
        let bundles = all_bundles(3, 3);
        for a in &bundles {
            for b in &bundles {
                let mut fa = a.fiber_sizes().to_vec();
                let mut fb = b.fiber_sizes().to_vec();
                fa.sort_unstable();
                fb.sort_unstable();
                let iso = fa == fb;
                let same = series_of(a, SeriesKind::Dirichlet) == series_of(b, SeriesKind::Dirichlet);
                assert_eq!(iso, same);
            }
        }
    }

    #[test]
    fn machine_form_round_trips() {
        let b = Bundle::new(vec![2, 3, 3]);
        let s = series_of(&b, SeriesKind::Dirichlet);
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"{"kind":"dirichlet","coefficients":{"2":1,"3":2}}"#);
        let back: CardinalitySeries = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
    }
}
