use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{fmt_rational, Rational};

/// A polynomial in the deformation parameter `eps` over the rationals.
///
/// Stored sparsely; zero coefficients are never kept.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct EpsPoly {
    terms: BTreeMap<u32, Rational>,
}

impl EpsPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0)
    }

    /// `c * eps^k`.
    pub fn monomial(c: Rational, k: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(k, c);
        }
        Self { terms }
    }

    /// The indeterminate `eps`.
    pub fn eps() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    pub fn from_terms<I: IntoIterator<Item = (u32, Rational)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (k, c) in it {
            p.add_term(k, &c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().copied()
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<u32> {
        self.terms.keys().next().copied()
    }

    pub fn coeff(&self, k: u32) -> Rational {
        self.terms.get(&k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.terms.values().next_back()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (u32, &Rational)> + '_ {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(c)` if this is the constant `c` (including zero).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }

    /// `Some((k, c))` if this is the single monomial `c * eps^k`.
    pub fn as_monomial(&self) -> Option<(u32, &Rational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(k, c)| (*k, c))
        } else {
            None
        }
    }

    pub(crate) fn add_term(&mut self, k: u32, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(k).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub(crate) fn add_assign_ref(&mut self, rhs: &EpsPoly) {
        for (k, c) in &rhs.terms {
            self.add_term(*k, c);
        }
    }

    pub(crate) fn sub_assign_ref(&mut self, rhs: &EpsPoly) {
        for (k, c) in &rhs.terms {
            self.add_term(*k, &-c);
        }
    }

    /// `self += a * b`, without materialising the product.
    pub(crate) fn add_product(&mut self, a: &EpsPoly, b: &EpsPoly) {
        for (i, ca) in &a.terms {
            for (j, cb) in &b.terms {
                self.add_term(i + j, &(ca * cb));
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    /// Multiplies by `eps^k`.
    pub fn shift(&self, k: u32) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, v)| (e + k, v.clone())).collect(),
        }
    }

    /// Evaluates at `eps = value`.
    pub fn eval(&self, value: &Rational) -> Rational {
        let mut acc = Rational::zero();
        let mut power = Rational::one();
        let mut last = 0u32;
        for (k, c) in &self.terms {
            for _ in last..*k {
                power *= value;
            }
            last = *k;
            acc += c * &power;
        }
        acc
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Euclidean division over the rationals; `None` if `divisor` is zero.
    pub fn div_rem(&self, divisor: &EpsPoly) -> Option<(EpsPoly, EpsPoly)> {
        let dd = divisor.degree()?;
        let lc = divisor.leading_coeff()?.clone();
        let mut rem = self.clone();
        let mut quot = EpsPoly::zero();
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let c = rem.leading_coeff().unwrap() / &lc;
            let step = EpsPoly::monomial(c, rd - dd);
            rem = &rem - &(&step * divisor);
            quot.add_assign_ref(&step);
        }
        Some((quot, rem))
    }

    /// Exact quotient, `None` if `divisor` does not divide `self`.
    pub fn exact_div(&self, divisor: &EpsPoly) -> Option<EpsPoly> {
        let (q, r) = self.div_rem(divisor)?;
        r.is_zero().then_some(q)
    }

    /// Monic greatest common divisor (zero iff both inputs are zero).
    pub fn gcd(&self, other: &EpsPoly) -> EpsPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        match a.leading_coeff() {
            Some(lc) => {
                let inv = lc.recip();
                a.scale(&inv)
            }
            None => a,
        }
    }
}

impl fmt::Debug for EpsPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EpsPoly({self})")
    }
}

impl fmt::Display for EpsPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.terms.iter().rev().enumerate() {
            let neg = c < &Rational::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            match (*k, mag.is_one()) {
                (0, _) => write!(f, "{}", fmt_rational(&mag))?,
                (1, true) => write!(f, "eps")?,
                (k, true) => write!(f, "eps^{k}")?,
                (1, false) => write!(f, "{}*eps", fmt_rational(&mag))?,
                (k, false) => write!(f, "{}*eps^{k}", fmt_rational(&mag))?,
            }
        }
        Ok(())
    }
}

impl Add for &EpsPoly {
    type Output = EpsPoly;
    fn add(self, rhs: &EpsPoly) -> EpsPoly {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl Sub for &EpsPoly {
    type Output = EpsPoly;
    fn sub(self, rhs: &EpsPoly) -> EpsPoly {
        let mut out = self.clone();
        out.sub_assign_ref(rhs);
        out
    }
}

impl Mul for &EpsPoly {
    type Output = EpsPoly;
    fn mul(self, rhs: &EpsPoly) -> EpsPoly {
        let mut out = EpsPoly::zero();
        out.add_product(self, rhs);
        out
    }
}

impl Neg for &EpsPoly {
    type Output = EpsPoly;
    fn neg(self) -> EpsPoly {
        EpsPoly {
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

impl From<Rational> for EpsPoly {
    fn from(c: Rational) -> Self {
        EpsPoly::constant(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    #[test]
    fn arithmetic_and_display() {
        let e = EpsPoly::eps();
        let p = &e.pow(4).scale(&rat(-1, 3888)) + &EpsPoly::one();
        assert_eq!(p.to_string(), "-1/3888*eps^4 + 1");
        assert_eq!(p.eval(&int(-1)), rat(3887, 3888));
        let sq = &p * &p;
        assert_eq!(sq.coeff(8), rat(1, 3888 * 3888));
        assert!((&p - &p).is_zero());
    }

    #[test]
    fn division_and_gcd() {
        let e = EpsPoly::eps();
        let a = &(&e * &e) - &EpsPoly::one();
        let b = &e - &EpsPoly::one();
        assert_eq!(a.exact_div(&b), Some(&e + &EpsPoly::one()));
        assert_eq!(a.gcd(&b.scale(&int(7))), b);
        assert!(a.exact_div(&e).is_none());
    }
}
