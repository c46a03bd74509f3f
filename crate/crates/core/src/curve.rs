//! The genus-2 curve `w^2 = W(z)`, its function field `a + b w`, and the
//! functions `chi_0, chi_1, chi_2, lambda, mu` expanded at `q = (0, 1)`.

use std::fmt;

use crate::diffop::Coefficient;
use crate::error::{Error, Result};
use crate::exact::{int, rat, BivarPoly, EpsPoly, Rational, XZFraction, XZPoly, ZSeries};

/// `W(z) = 1 - 2 z^3 - (eps^p / 3888) z^4 + z^6`, with `p = 4` for the curve
/// itself and `p = 2` for the variant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CurveDef {
    eps_power: u32,
}

impl Default for CurveDef {
    fn default() -> Self {
        Self { eps_power: 4 }
    }
}

impl CurveDef {
    /// The curve with `c4 = -eps^4 / 3888`.
    pub fn standard() -> Self {
        Self::default()
    }

    /// The same curve with `eps^2` in place of `eps^4`.
    pub fn eps2_variant() -> Self {
        Self { eps_power: 2 }
    }

    pub fn eps_power(&self) -> u32 {
        self.eps_power
    }

    /// `W` as a polynomial in `z` (no `x` dependence).
    pub fn w_squared(&self) -> XZPoly {
        XZPoly::from_terms([
            (int(1), 0, 0, 0),
            (int(-2), 0, 0, 3),
            (rat(-1, 3888), self.eps_power, 0, 4),
            (int(1), 0, 0, 6),
        ])
    }

    /// The branch of `w` with `w(0) = 1`.
    pub fn w_series(&self, order: usize) -> Result<ZSeries> {
        self.w_squared().to_series().sqrt(order)
    }

    pub fn w(&self) -> CurveElem {
        CurveElem::new(XZFraction::zero(), XZFraction::one(), *self)
    }

    pub fn lambda(&self) -> CurveElem {
        lambda_on(*self)
    }

    pub fn mu(&self) -> CurveElem {
        mu_on(*self)
    }

    pub fn chi(&self, j: usize) -> CurveElem {
        chi_on(j, *self)
    }
}

/// `a + b w` with `w^2 = W(z)`. Elements with `b = 0` carry no curve.
#[derive(Clone)]
pub struct CurveElem {
    a: XZFraction,
    b: XZFraction,
    curve: Option<CurveDef>,
}

impl CurveElem {
    pub fn new(a: XZFraction, b: XZFraction, curve: CurveDef) -> Self {
        Self { a, b, curve: Some(curve) }
    }

    /// A `w`-free element.
    pub fn scalar(a: XZFraction) -> Self {
        Self { a, b: XZFraction::zero(), curve: None }
    }

    pub fn a(&self) -> &XZFraction {
        &self.a
    }

    pub fn b(&self) -> &XZFraction {
        &self.b
    }

    pub fn curve(&self) -> Option<CurveDef> {
        self.curve
    }

    fn merged(&self, rhs: &Self) -> Option<CurveDef> {
        match (self.curve, rhs.curve) {
            (Some(c), Some(d)) => {
                assert_eq!(c, d, "elements of different curves");
                Some(c)
            }
            (c, d) => c.or(d),
        }
    }

    /// `(z, w) -> (z, -w)`.
    pub fn sigma(&self) -> Self {
        Self { a: self.a.clone(), b: self.b.neg(), curve: self.curve }
    }

    /// `(a + b w)(a - b w) = a^2 - b^2 W`.
    pub fn norm(&self) -> XZFraction {
        let a2 = self.a.mul(&self.a);
        if self.b.is_zero() {
            return a2;
        }
        let w2 = self.curve.unwrap_or_default().w_squared();
        a2.sub(&self.b.mul(&self.b).mul_poly(&w2))
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let conj = self.sigma();
        Ok(Self { a: conj.a.div(&n)?, b: conj.b.div(&n)?, curve: self.curve })
    }

    /// Exact equality of both parts by cross-multiplication.
    pub fn equals(&self, rhs: &Self) -> bool {
        self.a.equals(&rhs.a) && self.b.equals(&rhs.b)
    }

    pub fn specialize_eps(&self, value: &Rational) -> Result<Self> {
        Ok(Self {
            a: self.a.specialize_eps(value)?,
            b: self.b.specialize_eps(value)?,
            curve: self.curve,
        })
    }

    /// Expansion at `q`, substituting the `w(0) = 1` branch.
    pub fn to_series(&self, order: usize) -> Result<ZSeries> {
        let a = self.a.to_series(order)?;
        if self.b.is_zero() {
            return Ok(a);
        }
        let b = self.b.to_series(order)?;
        // The w factor needs enough terms to cover b's pole.
        let extra = (-b.valuation().unwrap_or(0)).max(0) as usize;
        let w = self.curve.unwrap_or_default().w_series(order + extra)?;
        Ok(&a + &b.multiply(&w))
    }
}

impl PartialEq for CurveElem {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

impl fmt::Display for CurveElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{} + ({})*w", self.a, self.b)
        }
    }
}

impl fmt::Debug for CurveElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CurveElem({self})")
    }
}

impl Coefficient for CurveElem {
    fn zero() -> Self {
        Self::scalar(XZFraction::zero())
    }
    fn one() -> Self {
        Self::scalar(XZFraction::one())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    fn is_one(&self) -> bool {
        self.b.is_zero() && self.a.equals(&XZFraction::one())
    }
    fn plus(&self, rhs: &Self) -> Self {
        Self { a: self.a.add(&rhs.a), b: self.b.add(&rhs.b), curve: self.merged(rhs) }
    }
    fn minus(&self, rhs: &Self) -> Self {
        Self { a: self.a.sub(&rhs.a), b: self.b.sub(&rhs.b), curve: self.merged(rhs) }
    }
    fn times(&self, rhs: &Self) -> Self {
        let curve = self.merged(rhs);
        let mut a = self.a.mul(&rhs.a);
        if !self.b.is_zero() && !rhs.b.is_zero() {
            let w2 = curve.unwrap_or_default().w_squared();
            a = a.add(&self.b.mul(&rhs.b).mul_poly(&w2));
        }
        let b = self.a.mul(&rhs.b).add(&self.b.mul(&rhs.a));
        Self { a, b, curve }
    }
    fn negated(&self) -> Self {
        Self { a: self.a.neg(), b: self.b.neg(), curve: self.curve }
    }
    fn scaled(&self, c: &Rational) -> Self {
        Self { a: self.a.scale(c), b: self.b.scale(c), curve: self.curve }
    }
    fn derivative(&self) -> Self {
        Self { a: self.a.derive_x(), b: self.b.derive_x(), curve: self.curve }
    }
    fn from_eps(p: &EpsPoly) -> Self {
        Self::scalar(XZFraction::from_poly(XZPoly::monomial(p.clone(), 0, 0)))
    }
    fn unit_inverse(&self) -> Option<Self> {
        self.inverse().ok()
    }
}

fn poly(terms: &[(Rational, u32, u32, u32)]) -> XZPoly {
    XZPoly::from_terms(terms.iter().cloned())
}

fn frac(num: XZPoly, den: XZPoly) -> XZFraction {
    XZFraction::new(num, den).expect("nonzero denominator")
}

/// `kappa = (eps^2 + x^3) z^3 - x^3`.
pub fn kappa() -> XZPoly {
    poly(&[(int(1), 2, 0, 3), (int(1), 0, 3, 3), (int(-1), 0, 3, 0)])
}

fn lambda_on(curve: CurveDef) -> CurveElem {
    // (1 + w) / (2 z^3) - 1/2
    let half_z3 = frac(XZPoly::one(), XZPoly::term(int(2), 0, 0, 3));
    let a = half_z3.sub(&XZFraction::from_poly(XZPoly::constant(rat(1, 2))));
    CurveElem::new(a, half_z3, curve)
}

fn mu_on(curve: CurveDef) -> CurveElem {
    // (1 + w) / (2 z^4) - 1 / (2 z)
    let half_z4 = frac(XZPoly::one(), XZPoly::term(int(2), 0, 0, 4));
    let a = half_z4.sub(&frac(XZPoly::one(), XZPoly::term(int(2), 0, 0, 1)));
    CurveElem::new(a, half_z4, curve)
}

fn chi_on(j: usize, curve: CurveDef) -> CurveElem {
    let k = kappa();
    match j {
        0 => {
            let mut a = frac(XZPoly::one(), XZPoly::term(int(2), 0, 0, 1));
            a = a.sub(&XZFraction::from_poly(poly(&[(rat(1, 5832), 2, 3, 0), (rat(1, 5832), 0, 6, 0)])));
            a = a.add(&frac(poly(&[(int(10), 0, 0, 3), (int(-10), 0, 0, 0)]), k.clone()));
            a = a.add(&frac(poly(&[(int(1), 2, 3, 1)]), k.scale(&int(216))));
            a = a.sub(&frac(poly(&[(int(1), 2, 0, 2)]), k.scale(&int(6))));
            let den = &k * &XZPoly::term(int(1), 0, 3, 0);
            a = a.add(&frac(XZPoly::term(int(16), 2, 0, 3), den));
            let mut b = frac(XZPoly::constant(int(-108)), k.scale(&int(6)));
            b = b.sub(&frac(XZPoly::term(int(1), 0, 3, 0), &k * &XZPoly::term(int(2), 0, 0, 1)));
            CurveElem::new(a, b, curve)
        }
        1 => {
            let den = &k * &XZPoly::term(int(12), 0, 2, 0);
            let a_num = poly(&[
                (int(132), 2, 0, 3),
                (int(-204), 0, 3, 0),
                (int(204), 0, 3, 3),
                (int(-1), 2, 3, 2),
            ]);
            let b_num = XZPoly::term(int(-108), 0, 3, 0);
            CurveElem::new(frac(a_num, den.clone()), frac(b_num, den), curve)
        }
        2 => {
            let den = &k * &XZPoly::x();
            CurveElem::scalar(frac(XZPoly::term(int(-3), 2, 0, 3), den))
        }
        _ => panic!("chi index must be 0, 1 or 2, got {j}"),
    }
}

pub fn chi(j: usize) -> CurveElem {
    chi_on(j, CurveDef::standard())
}

pub fn lambda_fn() -> CurveElem {
    lambda_on(CurveDef::standard())
}

pub fn mu_fn() -> CurveElem {
    mu_on(CurveDef::standard())
}

/// `[chi_0, chi_1, chi_2]` expanded at `q`.
pub fn chi_series(curve: CurveDef, order: usize) -> Result<[ZSeries; 3]> {
    Ok([curve.chi(0).to_series(order)?, curve.chi(1).to_series(order)?, curve.chi(2).to_series(order)?])
}

pub fn curve_series(e: &CurveElem, order: usize) -> Result<ZSeries> {
    e.to_series(order)
}

/// `Q(lambda, mu)` as a curve function.
pub fn eval_on_curve(q: &BivarPoly, curve: CurveDef) -> CurveElem {
    let (l, m) = (curve.lambda(), curve.mu());
    let mut acc = CurveElem::zero();
    for ((i, j), c) in q.terms() {
        let mut term = CurveElem::from_eps(c);
        for _ in 0..i {
            term = term.times(&l);
        }
        for _ in 0..j {
            term = term.times(&m);
        }
        acc = acc.plus(&term);
    }
    acc
}

/// Whether `mu^3 - (eps^4/15552) mu^2 - lambda^4 - lambda^3` vanishes on `curve`.
pub fn bc_function_identity_on(curve: CurveDef) -> bool {
    eval_on_curve(&crate::opdata::bc_polynomial(), curve).is_zero()
}

pub fn bc_function_identity() -> bool {
    bc_function_identity_on(CurveDef::standard())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::XLaurent;

    #[test]
    fn sigma_is_an_involution() {
        let c = chi(0);
        assert!(c.sigma().sigma().equals(&c));
        assert!(!c.sigma().equals(&c));
        assert!(chi(2).sigma().equals(&chi(2)));
        assert!(chi(2).b().is_zero());
    }

    #[test]
    fn chi1_w_part() {
        // -108 x^3 / (12 x^2 kappa) = -9 x / kappa
        let expected = frac(XZPoly::term(int(-9), 0, 1, 0), kappa());
        assert!(chi(1).b().equals(&expected));
        let misreduced = frac(XZPoly::constant(int(-9)), &XZPoly::term(int(1), 0, 2, 0) * &kappa());
        assert!(!chi(1).b().equals(&misreduced));
    }

    #[test]
    fn mu_is_lambda_over_z() {
        let z = CurveElem::scalar(XZFraction::from_poly(XZPoly::z()));
        assert!(mu_fn().times(&z).minus(&lambda_fn()).is_zero());
    }

    #[test]
    fn norm_of_one_plus_w() {
        let one_plus_w = CurveElem::one().plus(&CurveDef::standard().w());
        let expected = &XZPoly::one() - &CurveDef::standard().w_squared();
        assert!(one_plus_w.norm().equals(&XZFraction::from_poly(expected)));
    }

    #[test]
    fn w_series_squares_back() {
        let w = CurveDef::standard().w_series(12).unwrap();
        let sq = w.multiply(&w);
        let p = sq.precision().unwrap();
        assert_eq!(sq, CurveDef::standard().w_squared().to_series().truncate(p));
        assert_eq!(w.coeff(4), Some(XLaurent::term(rat(-1, 7776), 4, 0)));
    }

    #[test]
    fn lambda_expansion() {
        let s = lambda_fn().to_series(6).unwrap();
        assert_eq!(s.valuation(), Some(-3));
        assert_eq!(s.coeff(-3), Some(XLaurent::one()));
        assert_eq!(s.coeff(0), Some(XLaurent::constant(int(-1))));
        assert_eq!(s.coeff(1), Some(XLaurent::term(rat(-1, 15552), 4, 0)));
        assert_eq!(mu_fn().to_series(6).unwrap().valuation(), Some(-4));
    }

    #[test]
    fn function_field_relation() {
        assert!(bc_function_identity());
        assert!(!bc_function_identity_on(CurveDef::eps2_variant()));
    }
}
