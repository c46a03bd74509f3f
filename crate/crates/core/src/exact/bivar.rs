use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed};

use super::{fmt_rational, EpsPoly};

/// A polynomial `Q(z, w)` with `Q[eps]` coefficients, used for spectral-curve
/// relations between two commuting operators (`z` stands for the first
/// operator, `w` for the second).
#[derive(Clone, Default, PartialEq, Eq)]
pub struct BivarPoly {
    /// Keyed by `(w exponent, z exponent)` so iteration is lexicographic in `w`.
    terms: BTreeMap<(u32, u32), EpsPoly>,
}

impl BivarPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Adds `c * z^a * w^b`.
    pub fn with_term(mut self, a: u32, b: u32, c: EpsPoly) -> Self {
        self.add_term(a, b, &c);
        self
    }

    pub fn add_term(&mut self, a: u32, b: u32, c: &EpsPoly) {
        let entry = self.terms.entry((b, a)).or_default();
        entry.add_assign_ref(c);
        if entry.is_zero() {
            self.terms.remove(&(b, a));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, a: u32, b: u32) -> EpsPoly {
        self.terms.get(&(b, a)).cloned().unwrap_or_default()
    }

    /// Terms as `((z exponent, w exponent), coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), &EpsPoly)> + '_ {
        self.terms.iter().map(|((b, a), c)| ((*a, *b), c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Substitutes a rational value for `eps` in every coefficient.
    pub fn specialize_eps(&self, value: &super::Rational) -> Self {
        let mut out = Self::zero();
        for ((a, b), c) in self.terms() {
            out.add_term(a, b, &EpsPoly::constant(c.eval(value)));
        }
        out
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms sorted by decreasing weight `wz*a + ww*b`, ties broken with `w`
    /// ranked above `z`.
    pub fn sorted_terms(&self, wz: u32, ww: u32) -> Vec<((u32, u32), &EpsPoly)> {
        let mut v: Vec<_> = self.terms().collect();
        v.sort_by(|((a1, b1), _), ((a2, b2), _)| {
            let k1 = (wz * a1 + ww * b1, *b1, *a1);
            let k2 = (wz * a2 + ww * b2, *b2, *a2);
            k2.cmp(&k1)
        });
        v
    }

    /// The highest monomial under (weight, then `w` above `z`).
    pub fn leading_term(&self, wz: u32, ww: u32) -> Option<((u32, u32), &EpsPoly)> {
        self.sorted_terms(wz, ww).into_iter().next()
    }

    /// Human-readable form, descending in `w` and then in `z`.
    pub fn display(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, ((b, a), c)) in self.terms.iter().rev().map(|((b, a), c)| ((*b, *a), c)).enumerate() {
            let mono = match (a, b) {
                (0, 0) => String::new(),
                _ => {
                    let mut parts = Vec::new();
                    if b > 0 {
                        parts.push(if b == 1 { "w".to_string() } else { format!("w^{b}") });
                    }
                    if a > 0 {
                        parts.push(if a == 1 { "z".to_string() } else { format!("z^{a}") });
                    }
                    parts.join("*")
                }
            };
            let (neg, coeff) = coefficient_text(c);
            out.push_str(match (i, neg) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            });
            match (coeff, mono.is_empty()) {
                (None, true) => out.push('1'),
                (None, false) => out.push_str(&mono),
                (Some(c), true) => out.push_str(&c),
                (Some(c), false) => out.push_str(&format!("{c}*{mono}")),
            }
        }
        out
    }
}

/// Sign and magnitude text of a coefficient; `None` magnitude means 1.
fn coefficient_text(c: &EpsPoly) -> (bool, Option<String>) {
    if let Some((e, r)) = c.as_monomial() {
        let neg = r.is_negative();
        let mag = r.abs();
        let text = match (e, mag.is_one()) {
            (0, true) => None,
            (0, false) => Some(fmt_rational(&mag)),
            (e, _) => {
                let eps = if e == 1 { "eps".to_string() } else { format!("eps^{e}") };
                if mag.is_one() {
                    Some(eps)
                } else if mag.numer().is_one() {
                    Some(format!("({eps}/{})", mag.denom()))
                } else {
                    Some(format!("({}*{eps})", fmt_rational(&mag)))
                }
            }
        };
        (neg, text)
    } else {
        (false, Some(format!("({c})")))
    }
}

impl fmt::Display for BivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display())
    }
}

impl fmt::Debug for BivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BivarPoly({self})")
    }
}
