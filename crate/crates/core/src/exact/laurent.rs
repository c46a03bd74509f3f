use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::{fmt_rational, EpsPoly, Rational};

/// A Laurent polynomial in `x` with coefficients in `Q[eps]`.
///
/// This is the coefficient ring of every concrete operator. The derivative is
/// `d/dx` and treats `eps` as a constant.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct XLaurent {
    terms: BTreeMap<i32, EpsPoly>,
}

impl XLaurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(EpsPoly::constant(c), 0)
    }

    pub fn from_eps(p: EpsPoly) -> Self {
        Self::monomial(p, 0)
    }

    /// `p * x^n`.
    pub fn monomial(p: EpsPoly, n: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !p.is_zero() {
            terms.insert(n, p);
        }
        Self { terms }
    }

    /// `c * eps^e * x^n`.
    pub fn term(c: Rational, eps_exp: u32, x_exp: i32) -> Self {
        Self::monomial(EpsPoly::monomial(c, eps_exp), x_exp)
    }

    /// The indeterminate `x`.
    pub fn x() -> Self {
        Self::term(Rational::one(), 0, 1)
    }

    /// Sum of `c * eps^e * x^n` monomials.
    pub fn from_monomials<I: IntoIterator<Item = (Rational, u32, i32)>>(it: I) -> Self {
        let mut out = Self::zero();
        for (c, e, n) in it {
            out.add_term(n, &EpsPoly::monomial(c, e));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(EpsPoly::is_one)
    }

    /// Coefficient of `x^n`.
    pub fn coeff(&self, n: i32) -> EpsPoly {
        self.terms.get(&n).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i32, &EpsPoly)> + '_ {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    /// Every monomial as `(x exponent, eps exponent, coefficient)`.
    pub fn monomials(&self) -> impl Iterator<Item = (i32, u32, &Rational)> + '_ {
        self.terms
            .iter()
            .flat_map(|(n, p)| p.terms().map(move |(e, c)| (*n, e, c)))
    }

    pub fn monomial_count(&self) -> usize {
        self.terms.values().map(EpsPoly::len).sum()
    }

    pub fn min_x_exp(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_x_exp(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    pub fn max_eps_exp(&self) -> Option<u32> {
        self.terms.values().filter_map(EpsPoly::degree).max()
    }

    pub(crate) fn add_term(&mut self, n: i32, p: &EpsPoly) {
        if p.is_zero() {
            return;
        }
        let entry = self.terms.entry(n).or_default();
        entry.add_assign_ref(p);
        if entry.is_zero() {
            self.terms.remove(&n);
        }
    }

    pub fn add_assign_ref(&mut self, rhs: &XLaurent) {
        for (n, p) in &rhs.terms {
            self.add_term(*n, p);
        }
    }

    pub fn sub_assign_ref(&mut self, rhs: &XLaurent) {
        for (n, p) in &rhs.terms {
            self.add_term(*n, &-p);
        }
    }

    /// `self += a * b`.
    pub fn add_product(&mut self, a: &XLaurent, b: &XLaurent) {
        for (i, pa) in &a.terms {
            for (j, pb) in &b.terms {
                let entry = self.terms.entry(i + j).or_default();
                entry.add_product(pa, pb);
                if entry.is_zero() {
                    self.terms.remove(&(i + j));
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(n, p)| (*n, p.scale(c))).collect(),
        }
    }

    pub fn mul_eps(&self, p: &EpsPoly) -> Self {
        let mut out = Self::zero();
        for (n, q) in &self.terms {
            out.add_term(*n, &(q * p));
        }
        out
    }

    /// Multiplies by `x^k`.
    pub fn shift(&self, k: i32) -> Self {
        Self {
            terms: self.terms.iter().map(|(n, p)| (n + k, p.clone())).collect(),
        }
    }

    /// `d/dx`, with `d/dx x^n = n x^(n-1)` for every integer `n`.
    pub fn derive(&self) -> Self {
        let mut terms = BTreeMap::new();
        for (n, p) in &self.terms {
            if *n != 0 {
                terms.insert(n - 1, p.scale(&Rational::from_integer((*n).into())));
            }
        }
        Self { terms }
    }

    pub fn nth_derivative(&self, k: usize) -> Self {
        (0..k).fold(self.clone(), |acc, _| acc.derive())
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| &acc * self)
    }

    /// `Some((c, n))` if this is `c * x^n` with a nonzero rational `c`.
    pub fn as_unit(&self) -> Option<(Rational, i32)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (n, p) = self.terms.iter().next()?;
        let (e, c) = p.as_monomial()?;
        (e == 0).then(|| (c.clone(), *n))
    }

    /// Inverse in the ring, which exists exactly for `c * x^n` with `c` a
    /// nonzero rational.
    pub fn unit_inverse(&self) -> Option<Self> {
        let (c, n) = self.as_unit()?;
        Some(Self::term(c.recip(), 0, -n))
    }

    /// Substitutes a rational value for `eps`.
    pub fn specialize_eps(&self, value: &Rational) -> Self {
        let mut out = Self::zero();
        for (n, p) in &self.terms {
            out.add_term(*n, &EpsPoly::constant(p.eval(value)));
        }
        out
    }

    /// Evaluates at rational `x` and `eps`; `None` at a pole.
    pub fn eval(&self, x: &Rational, eps: &Rational) -> Option<Rational> {
        if x.is_zero() && self.min_x_exp().is_some_and(|n| n < 0) {
            return None;
        }
        let mut acc = Rational::zero();
        for (n, p) in &self.terms {
            let xp = if *n >= 0 {
                num_traits::pow(x.clone(), *n as usize)
            } else {
                num_traits::pow(x.recip(), n.unsigned_abs() as usize)
            };
            acc += p.eval(eps) * xp;
        }
        Some(acc)
    }
}

/// Writes one monomial `c * eps^e * x^n` in the operator-text grammar.
pub(crate) fn write_monomial(out: &mut String, c: &Rational, e: u32, n: i32) {
    let mag = c.abs();
    let mut parts: Vec<String> = Vec::new();
    if !mag.is_one() || (e == 0 && n <= 0) {
        parts.push(fmt_rational(&mag));
    }
    match e {
        0 => {}
        1 => parts.push("eps".into()),
        e => parts.push(format!("eps^{e}")),
    }
    match n {
        n if n > 1 => parts.push(format!("x^{n}")),
        1 => parts.push("x".into()),
        _ => {}
    }
    out.push_str(&parts.join("*"));
    match n {
        -1 => out.push_str("/x"),
        n if n < -1 => out.push_str(&format!("/x^{}", -n)),
        _ => {}
    }
}

impl fmt::Display for XLaurent {
    /// Canonical text: monomials ordered by `x` exponent, then `eps`
    /// exponent, joined with ` + ` / ` - `.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut s = String::new();
        for (i, (n, e, c)) in self.monomials().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => s.push('-'),
                (0, false) => {}
                (_, true) => s.push_str(" - "),
                (_, false) => s.push_str(" + "),
            }
            write_monomial(&mut s, c, e, n);
        }
        f.write_str(&s)
    }
}

impl fmt::Debug for XLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "XLaurent({self})")
    }
}

impl Add for &XLaurent {
    type Output = XLaurent;
    fn add(self, rhs: &XLaurent) -> XLaurent {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl Sub for &XLaurent {
    type Output = XLaurent;
    fn sub(self, rhs: &XLaurent) -> XLaurent {
        let mut out = self.clone();
        out.sub_assign_ref(rhs);
        out
    }
}

impl Mul for &XLaurent {
    type Output = XLaurent;
    fn mul(self, rhs: &XLaurent) -> XLaurent {
        let mut out = XLaurent::zero();
        out.add_product(self, rhs);
        out
    }
}

impl Neg for &XLaurent {
    type Output = XLaurent;
    fn neg(self) -> XLaurent {
        XLaurent {
            terms: self.terms.iter().map(|(n, p)| (*n, -p)).collect(),
        }
    }
}

impl Add for XLaurent {
    type Output = XLaurent;
    fn add(mut self, rhs: XLaurent) -> XLaurent {
        self.add_assign_ref(&rhs);
        self
    }
}

impl Sub for XLaurent {
    type Output = XLaurent;
    fn sub(mut self, rhs: XLaurent) -> XLaurent {
        self.sub_assign_ref(&rhs);
        self
    }
}

impl Mul for XLaurent {
    type Output = XLaurent;
    fn mul(self, rhs: XLaurent) -> XLaurent {
        &self * &rhs
    }
}

impl Neg for XLaurent {
    type Output = XLaurent;
    fn neg(self) -> XLaurent {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn x_pow(n: i32) -> XLaurent {
        XLaurent::term(int(1), 0, n)
    }

    #[test]
    fn power_rule() {
        assert_eq!(x_pow(2).derive(), x_pow(1).scale(&int(2)));
        let zeta2 = x_pow(-2).scale(&int(26));
        assert_eq!(zeta2.derive(), x_pow(-3).scale(&int(-52)));
        assert!(XLaurent::constant(int(7)).derive().is_zero());
    }

    #[test]
    fn units() {
        let u = XLaurent::term(rat(-3, 4), 0, -5);
        assert_eq!(&u * &u.unit_inverse().unwrap(), XLaurent::one());
        assert!(XLaurent::term(int(1), 2, 0).unit_inverse().is_none());
        assert!((&x_pow(1) + &XLaurent::one()).unit_inverse().is_none());
    }

    #[test]
    fn display_uses_operator_grammar() {
        let p = XLaurent::from_monomials([
            (int(-58240), 0, -9),
            (rat(-55, 243), 2, -3),
            (rat(152, 243), 0, 0),
            (rat(1, 198359290368), 0, 18),
            (int(1), 2, 1),
        ]);
        assert_eq!(
            p.to_string(),
            "-58240/x^9 - 55/243*eps^2/x^3 + 152/243 + eps^2*x + 1/198359290368*x^18"
        );
    }

    #[test]
    fn specialization() {
        let p = XLaurent::from_monomials([(int(1), 2, 3), (int(1), 0, 6)]);
        let q = p.specialize_eps(&int(0));
        assert_eq!(q, x_pow(6));
        assert_eq!(p.eval(&int(2), &int(-1)), Some(int(72)));
    }
}
