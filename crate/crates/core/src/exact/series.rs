use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{EpsPoly, Rational, XLaurent};
use crate::error::{Error, Result};

/// Terms kept beyond the lowest exponent when a computation has to truncate
/// an otherwise exact quantity.
pub const DEFAULT_SERIES_ORDER: usize = 16;

/// A truncated Laurent series in `z` with [`XLaurent`] coefficients.
///
/// `precision` is the first exponent whose coefficient is unknown (the series
/// is `... + O(z^precision)`); `None` marks an exact finite sum. Coefficients
/// are dense from `lowest`; coefficients between the stored ones and
/// `precision` are known to be zero.
#[derive(Clone, PartialEq, Eq)]
pub struct ZSeries {
    lowest: i32,
    coeffs: Vec<XLaurent>,
    precision: Option<i32>,
}

fn min_opt(a: Option<i32>, b: Option<i32>) -> Option<i32> {
    match (a, b) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, None) => a,
        (None, b) => b,
    }
}

fn below(e: i32, precision: Option<i32>) -> bool {
    precision.is_none_or(|p| e < p)
}

impl ZSeries {
    /// Exact series `sum coeffs[i] z^(lowest+i)`.
    pub fn exact(lowest: i32, coeffs: Vec<XLaurent>) -> Self {
        Self::build(lowest, coeffs, None)
    }

    /// Series known only below `z^precision`.
    pub fn truncated(lowest: i32, coeffs: Vec<XLaurent>, precision: i32) -> Self {
        Self::build(lowest, coeffs, Some(precision))
    }

    fn build(mut lowest: i32, mut coeffs: Vec<XLaurent>, precision: Option<i32>) -> Self {
        if let Some(p) = precision {
            let keep = (p - lowest).max(0) as usize;
            coeffs.truncate(keep);
        }
        let lead = coeffs.iter().take_while(|c| c.is_zero()).count();
        coeffs.drain(..lead);
        lowest += lead as i32;
        while coeffs.last().is_some_and(XLaurent::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            lowest = precision.unwrap_or(0);
        }
        Self {
            lowest,
            coeffs,
            precision,
        }
    }

    pub fn zero() -> Self {
        Self::exact(0, Vec::new())
    }

    pub fn one() -> Self {
        Self::constant(XLaurent::one())
    }

    /// A `z`-independent series.
    pub fn constant(c: XLaurent) -> Self {
        Self::exact(0, vec![c])
    }

    /// `c * z^k`.
    pub fn monomial(c: XLaurent, k: i32) -> Self {
        Self::exact(k, vec![c])
    }

    /// `O(z^p)`.
    pub fn big_o(p: i32) -> Self {
        Self::truncated(p, Vec::new(), p)
    }

    pub fn precision(&self) -> Option<i32> {
        self.precision
    }

    /// Exponent of the first nonzero known coefficient.
    pub fn valuation(&self) -> Option<i32> {
        (!self.coeffs.is_empty()).then_some(self.lowest)
    }

    /// Coefficient of `z^e`, or `None` if it lies beyond the precision.
    pub fn coeff(&self, e: i32) -> Option<XLaurent> {
        if !below(e, self.precision) {
            return None;
        }
        let i = e - self.lowest;
        if i < 0 {
            return Some(XLaurent::zero());
        }
        Some(self.coeffs.get(i as usize).cloned().unwrap_or_default())
    }

    fn coeff_ref(&self, e: i32) -> Option<&XLaurent> {
        let i = e - self.lowest;
        if i < 0 {
            return None;
        }
        self.coeffs.get(i as usize)
    }

    /// Known nonzero terms as `(exponent, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &XLaurent)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (self.lowest + i as i32, c))
    }

    /// Exact zero (not merely zero to the known precision).
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty() && self.precision.is_none()
    }

    /// All known coefficients vanish.
    pub fn is_known_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.precision.is_none() && self.lowest == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Forgets every term at or beyond `z^p`.
    pub fn truncate(&self, p: i32) -> Self {
        Self::build(self.lowest, self.coeffs.clone(), Some(min_opt(self.precision, Some(p)).unwrap()))
    }

    /// Lower bound for the exponent of any term, `None` for the exact zero.
    fn order_bound(&self) -> Option<i32> {
        if self.coeffs.is_empty() {
            self.precision
        } else {
            Some(self.lowest)
        }
    }

    fn combine(&self, rhs: &Self, negate: bool) -> Self {
        let precision = min_opt(self.precision, rhs.precision);
        let lo = match (self.order_bound(), rhs.order_bound()) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (None, None) => return Self::zero(),
        };
        let hi_a = self.lowest + self.coeffs.len() as i32;
        let hi_b = rhs.lowest + rhs.coeffs.len() as i32;
        let mut hi = hi_a.max(hi_b);
        if let Some(p) = precision {
            hi = hi.min(p);
        }
        let mut coeffs = Vec::with_capacity((hi - lo).max(0) as usize);
        for e in lo..hi {
            let mut c = self.coeff_ref(e).cloned().unwrap_or_default();
            if let Some(b) = rhs.coeff_ref(e) {
                if negate {
                    c.sub_assign_ref(b);
                } else {
                    c.add_assign_ref(b);
                }
            }
            coeffs.push(c);
        }
        Self::build(lo, coeffs, precision)
    }

    pub fn multiply(&self, rhs: &Self) -> Self {
        let (oa, ob) = match (self.order_bound(), rhs.order_bound()) {
            (Some(a), Some(b)) => (a, b),
            _ => return Self::zero(),
        };
        let precision = min_opt(self.precision.map(|p| p + ob), rhs.precision.map(|p| p + oa));
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Self::build(oa + ob, Vec::new(), precision);
        }
        let lo = self.lowest + rhs.lowest;
        let mut len = self.coeffs.len() + rhs.coeffs.len() - 1;
        if let Some(p) = precision {
            len = len.min((p - lo).max(0) as usize);
        }
        let mut coeffs = vec![XLaurent::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                coeffs[i + j].add_product(a, b);
            }
        }
        Self::build(lo, coeffs, precision)
    }

    pub fn negate(&self) -> Self {
        Self {
            lowest: self.lowest,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            precision: self.precision,
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.map_coeffs(|a| a.scale(c))
    }

    /// Multiplies every coefficient by the `z`-free factor `c`.
    pub fn mul_xlaurent(&self, c: &XLaurent) -> Self {
        self.map_coeffs(|a| a * c)
    }

    pub fn mul_eps(&self, p: &EpsPoly) -> Self {
        self.map_coeffs(|a| a.mul_eps(p))
    }

    /// Multiplies by `z^k`.
    pub fn shift(&self, k: i32) -> Self {
        Self::build(self.lowest + k, self.coeffs.clone(), self.precision.map(|p| p + k))
    }

    /// `d/dx` applied coefficient-wise (`z` is independent of `x`).
    pub fn derive(&self) -> Self {
        self.map_coeffs(XLaurent::derive)
    }

    pub fn specialize_eps(&self, value: &Rational) -> Self {
        self.map_coeffs(|a| a.specialize_eps(value))
    }

    fn map_coeffs(&self, f: impl Fn(&XLaurent) -> XLaurent) -> Self {
        Self::build(self.lowest, self.coeffs.iter().map(f).collect(), self.precision)
    }

    /// Number of known terms from the valuation on; exact series keep
    /// exponents `v..=v+order`.
    fn relative_order(&self, order: usize) -> usize {
        match (self.precision, self.valuation()) {
            (Some(p), Some(v)) => (p - v).max(0) as usize,
            _ => order + 1,
        }
    }

    /// Multiplicative inverse. The leading coefficient must be a unit of
    /// [`XLaurent`]; exact inputs are expanded `order` terms past the lowest.
    pub fn inverse(&self, order: usize) -> Result<Self> {
        let v = self.valuation().ok_or(Error::DivisionByZero)?;
        let lead = &self.coeffs[0];
        let lead_inv = lead
            .unit_inverse()
            .ok_or_else(|| Error::NotInvertible(format!("{lead} (coefficient of z^{v})")))?;
        let n = self.relative_order(order);
        let mut out: Vec<XLaurent> = Vec::with_capacity(n);
        for k in 0..n {
            if k == 0 {
                out.push(lead_inv.clone());
                continue;
            }
            let mut acc = XLaurent::zero();
            for j in 1..=k.min(self.coeffs.len() - 1) {
                acc.add_product(&self.coeffs[j], &out[k - j]);
            }
            out.push(-&(&acc * &lead_inv));
        }
        Ok(Self::truncated(-v, out, -v + n as i32))
    }

    /// The square root with constant term 1. Exact inputs are expanded
    /// through `z^order`.
    pub fn sqrt(&self, order: usize) -> Result<Self> {
        let c0 = self.coeff(0).unwrap_or_default();
        if self.valuation() != Some(0) || !c0.is_one() {
            let shown = match self.valuation() {
                Some(v) if v < 0 => format!("pole of order {}", -v),
                _ => c0.to_string(),
            };
            return Err(Error::SqrtConstantTerm(shown));
        }
        let n = self.relative_order(order);
        let half = Rational::new(1.into(), 2.into());
        let mut out: Vec<XLaurent> = Vec::with_capacity(n);
        for k in 0..n {
            if k == 0 {
                out.push(XLaurent::one());
                continue;
            }
            let mut acc = self.coeffs.get(k).cloned().unwrap_or_default();
            for j in 1..k {
                acc.sub_assign_ref(&(&out[j] * &out[k - j]));
            }
            out.push(acc.scale(&half));
        }
        Ok(Self::truncated(0, out, n as i32))
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| acc.multiply(self))
    }
}

impl fmt::Display for ZSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match e {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*z")?,
                e => write!(f, "({c})*z^{e}")?,
            }
        }
        match (self.precision, first) {
            (Some(p), true) => write!(f, "O(z^{p})"),
            (Some(p), false) => write!(f, " + O(z^{p})"),
            (None, true) => write!(f, "0"),
            (None, false) => Ok(()),
        }
    }
}

impl fmt::Debug for ZSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ZSeries({self})")
    }
}

impl Add for &ZSeries {
    type Output = ZSeries;
    fn add(self, rhs: &ZSeries) -> ZSeries {
        self.combine(rhs, false)
    }
}

impl Sub for &ZSeries {
    type Output = ZSeries;
    fn sub(self, rhs: &ZSeries) -> ZSeries {
        self.combine(rhs, true)
    }
}

impl Mul for &ZSeries {
    type Output = ZSeries;
    fn mul(self, rhs: &ZSeries) -> ZSeries {
        self.multiply(rhs)
    }
}

impl Neg for &ZSeries {
    type Output = ZSeries;
    fn neg(self) -> ZSeries {
        self.negate()
    }
}

impl From<XLaurent> for ZSeries {
    fn from(c: XLaurent) -> Self {
        ZSeries::constant(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn c(n: i64) -> XLaurent {
        XLaurent::constant(int(n))
    }

    #[test]
    fn perfect_square_root() {
        let s = ZSeries::exact(0, vec![c(1), c(2), c(1)]);
        let r = s.sqrt(5).unwrap();
        assert_eq!(r, ZSeries::truncated(0, vec![c(1), c(1)], 6));
        assert_eq!(ZSeries::one().sqrt(3).unwrap(), ZSeries::truncated(0, vec![c(1)], 4));
    }

    #[test]
    fn sqrt_rejects_other_constants() {
        let s = ZSeries::exact(0, vec![c(4), c(1)]);
        assert!(matches!(s.sqrt(4), Err(Error::SqrtConstantTerm(_))));
        let s = ZSeries::exact(1, vec![c(1)]);
        assert!(matches!(s.sqrt(4), Err(Error::SqrtConstantTerm(_))));
    }

    #[test]
    fn geometric_series() {
        let s = ZSeries::exact(0, vec![c(1), c(-1)]);
        let inv = s.inverse(3).unwrap();
        assert_eq!(inv, ZSeries::truncated(0, vec![c(1), c(1), c(1), c(1)], 4));
        assert_eq!((&inv * &s).truncate(4), ZSeries::truncated(0, vec![c(1)], 4));
    }

    #[test]
    fn precision_propagates() {
        let a = ZSeries::truncated(-1, vec![c(1), c(2)], 3);
        let b = ZSeries::truncated(0, vec![c(1)], 5);
        let p = &a * &b;
        // min(3 + 0, 5 + (-1)) = 3
        assert_eq!(p.precision(), Some(3));
        assert_eq!((&a + &b).precision(), Some(3));
        assert_eq!(p.coeff(3), None);
        assert_eq!(p.coeff(-1), Some(c(1)));
    }

    #[test]
    fn inverse_needs_unit_lead() {
        let s = ZSeries::exact(0, vec![XLaurent::term(int(1), 2, 0)]);
        assert!(matches!(s.inverse(4), Err(Error::NotInvertible(_))));
        let s = ZSeries::exact(2, vec![XLaurent::term(rat(1, 2), 0, -3)]);
        let inv = s.inverse(2).unwrap();
        assert_eq!(inv.coeff(-2), Some(XLaurent::term(int(2), 0, 3)));
    }
}
