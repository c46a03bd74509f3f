use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::One;

use super::{EpsPoly, Rational, XLaurent, ZSeries};
use crate::error::{Error, Result};

/// A polynomial in `x` and `z` (non-negative exponents) over `Q[eps]`.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct XZPoly {
    terms: BTreeMap<(u32, u32), EpsPoly>,
}

impl XZPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(EpsPoly::constant(c), 0, 0)
    }

    /// `p * x^i * z^j`.
    pub fn monomial(p: EpsPoly, i: u32, j: u32) -> Self {
        let mut out = Self::zero();
        out.add_term(i, j, &p);
        out
    }

    /// `c * eps^e * x^i * z^j`.
    pub fn term(c: Rational, e: u32, i: u32, j: u32) -> Self {
        Self::monomial(EpsPoly::monomial(c, e), i, j)
    }

    pub fn x() -> Self {
        Self::term(Rational::one(), 0, 1, 0)
    }

    pub fn z() -> Self {
        Self::term(Rational::one(), 0, 0, 1)
    }

    /// Sum of `c * eps^e * x^i * z^j` terms.
    pub fn from_terms<I: IntoIterator<Item = (Rational, u32, u32, u32)>>(it: I) -> Self {
        let mut out = Self::zero();
        for (c, e, i, j) in it {
            out.add_term(i, j, &EpsPoly::monomial(c, e));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), &EpsPoly)> + '_ {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    fn add_term(&mut self, i: u32, j: u32, p: &EpsPoly) {
        if p.is_zero() {
            return;
        }
        let entry = self.terms.entry((i, j)).or_default();
        entry.add_assign_ref(p);
        if entry.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        for ((i, j), p) in &self.terms {
            out.add_term(*i, *j, &p.scale(c));
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| &acc * self)
    }

    /// `d/dx`.
    pub fn derive_x(&self) -> Self {
        let mut out = Self::zero();
        for ((i, j), p) in &self.terms {
            if *i > 0 {
                out.add_term(i - 1, *j, &p.scale(&Rational::from_integer((*i).into())));
            }
        }
        out
    }

    /// Largest `x^a z^b` dividing every term, with the gcd of the rational
    /// content when all coefficients are constants.
    fn monomial_content(&self) -> Option<(u32, u32, Rational)> {
        let a = self.terms.keys().map(|k| k.0).min()?;
        let b = self.terms.keys().map(|k| k.1).min()?;
        let mut content: Option<Rational> = None;
        for p in self.terms.values() {
            match p.as_constant() {
                Some(c) => {
                    content = Some(match content {
                        None => c,
                        Some(g) => rational_gcd(&g, &c),
                    })
                }
                None => {
                    content = Some(Rational::one());
                    break;
                }
            }
        }
        Some((a, b, content.unwrap_or_else(Rational::one)))
    }

    fn divide_monomial(&self, a: u32, b: u32, c: &Rational) -> Self {
        let inv = c.recip();
        let mut out = Self::zero();
        for ((i, j), p) in &self.terms {
            out.add_term(i - a, j - b, &p.scale(&inv));
        }
        out
    }

    /// The exact series in `z` with `x`-polynomial coefficients.
    pub fn to_series(&self) -> ZSeries {
        let Some(max_z) = self.terms.keys().map(|k| k.1).max() else {
            return ZSeries::zero();
        };
        let mut coeffs = vec![XLaurent::zero(); max_z as usize + 1];
        for ((i, j), p) in &self.terms {
            coeffs[*j as usize].add_assign_ref(&XLaurent::monomial(p.clone(), *i as i32));
        }
        ZSeries::exact(0, coeffs)
    }

    pub fn specialize_eps(&self, value: &Rational) -> Self {
        let mut out = Self::zero();
        for ((i, j), p) in &self.terms {
            out.add_term(*i, *j, &EpsPoly::constant(p.eval(value)));
        }
        out
    }
}

fn rational_gcd(a: &Rational, b: &Rational) -> Rational {
    use num_integer::Integer;
    let n = a.numer().gcd(b.numer());
    let d = a.denom().lcm(b.denom());
    Rational::new(n, d)
}

impl fmt::Display for XZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((i, j), p)| format!("({p})*x^{i}*z^{j}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for XZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "XZPoly({self})")
    }
}

impl Add for &XZPoly {
    type Output = XZPoly;
    fn add(self, rhs: &XZPoly) -> XZPoly {
        let mut out = self.clone();
        for ((i, j), p) in &rhs.terms {
            out.add_term(*i, *j, p);
        }
        out
    }
}

impl Sub for &XZPoly {
    type Output = XZPoly;
    fn sub(self, rhs: &XZPoly) -> XZPoly {
        let mut out = self.clone();
        for ((i, j), p) in &rhs.terms {
            out.add_term(*i, *j, &-p);
        }
        out
    }
}

impl Mul for &XZPoly {
    type Output = XZPoly;
    fn mul(self, rhs: &XZPoly) -> XZPoly {
        let mut out = XZPoly::zero();
        for ((i1, j1), p1) in &self.terms {
            for ((i2, j2), p2) in &rhs.terms {
                out.add_term(i1 + i2, j1 + j2, &(p1 * p2));
            }
        }
        out
    }
}

impl Neg for &XZPoly {
    type Output = XZPoly;
    fn neg(self) -> XZPoly {
        self.scale(&-Rational::one())
    }
}

/// A quotient of two [`XZPoly`] values with nonzero denominator.
///
/// No canonical form is kept: equality is decided by cross-multiplication.
/// Only common monomial factors are cancelled.
#[derive(Clone)]
pub struct XZFraction {
    num: XZPoly,
    den: XZPoly,
}

impl XZFraction {
    pub fn new(num: XZPoly, den: XZPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduced(num, den))
    }

    fn reduced(num: XZPoly, den: XZPoly) -> Self {
        if num.is_zero() {
            return Self {
                num,
                den: XZPoly::one(),
            };
        }
        let (Some((a1, b1, _)), Some((a2, b2, c))) = (num.monomial_content(), den.monomial_content())
        else {
            return Self { num, den };
        };
        let (a, b) = (a1.min(a2), b1.min(b2));
        Self {
            num: num.divide_monomial(a, b, &c),
            den: den.divide_monomial(a, b, &c),
        }
    }

    pub fn from_poly(p: XZPoly) -> Self {
        Self {
            num: p,
            den: XZPoly::one(),
        }
    }

    pub fn zero() -> Self {
        Self::from_poly(XZPoly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(XZPoly::one())
    }

    pub fn numerator(&self) -> &XZPoly {
        &self.num
    }

    pub fn denominator(&self) -> &XZPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// `a == b` iff `a.num * b.den - b.num * a.den` is the zero polynomial.
    pub fn equals(&self, other: &XZFraction) -> bool {
        (&(&self.num * &other.den) - &(&other.num * &self.den)).is_zero()
    }

    pub fn add(&self, rhs: &XZFraction) -> XZFraction {
        if self.den == rhs.den {
            return Self::reduced(&self.num + &rhs.num, self.den.clone());
        }
        Self::reduced(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }

    pub fn sub(&self, rhs: &XZFraction) -> XZFraction {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &XZFraction) -> XZFraction {
        Self::reduced(&self.num * &rhs.num, &self.den * &rhs.den)
    }

    pub fn mul_poly(&self, p: &XZPoly) -> XZFraction {
        Self::reduced(&self.num * p, self.den.clone())
    }

    pub fn div(&self, rhs: &XZFraction) -> Result<XZFraction> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduced(&self.num * &rhs.den, &self.den * &rhs.num))
    }

    pub fn neg(&self) -> XZFraction {
        Self {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, c: &Rational) -> XZFraction {
        Self::reduced(self.num.scale(c), self.den.clone())
    }

    /// `d/dx` by the quotient rule.
    pub fn derive_x(&self) -> XZFraction {
        let n = &(&self.num.derive_x() * &self.den) - &(&self.num * &self.den.derive_x());
        Self::reduced(n, &self.den * &self.den)
    }

    pub fn specialize_eps(&self, value: &Rational) -> Result<XZFraction> {
        XZFraction::new(self.num.specialize_eps(value), self.den.specialize_eps(value))
    }

    /// Laurent expansion in `z`, keeping `order` terms beyond the lowest
    /// exponent. The lowest `z`-coefficient of the denominator must be a unit
    /// of [`XLaurent`].
    pub fn to_series(&self, order: usize) -> Result<ZSeries> {
        let den = self.den.to_series();
        let inv = den.inverse(order)?;
        Ok(self.num.to_series().multiply(&inv))
    }
}

impl fmt::Display for XZFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

impl fmt::Debug for XZFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "XZFraction({self})")
    }
}

impl From<XZPoly> for XZFraction {
    fn from(p: XZPoly) -> Self {
        XZFraction::from_poly(p)
    }
}
