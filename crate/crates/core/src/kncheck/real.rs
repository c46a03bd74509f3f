//! Binary fixed-point reals and complex numbers at a chosen precision.
//!
//! A [`Real`] is `m / 2^bits` with an arbitrary-size integer `m`. Every value
//! in one computation carries the same `bits`, so the absolute rounding error
//! of each operation is at most one unit in the last place. The only
//! non-field operations needed are square and cube roots, which reduce to
//! exact integer roots.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_traits::{Signed, ToPrimitive, Zero};

use crate::exact::Rational;

/// Fraction bits needed for `digits` decimal digits.
pub fn bits_for_digits(digits: u32) -> u32 {
    (f64::from(digits) * std::f64::consts::LOG2_10).ceil() as u32 + 8
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Real {
    m: BigInt,
    bits: u32,
}

impl Real {
    pub fn zero(bits: u32) -> Self {
        Self { m: BigInt::zero(), bits }
    }

    pub fn from_int(n: i64, bits: u32) -> Self {
        Self { m: BigInt::from(n) << bits, bits }
    }

    /// Nearest representable value below or at `r` in magnitude.
    pub fn from_rational(r: &Rational, bits: u32) -> Self {
        Self { m: (r.numer() << bits) / r.denom(), bits }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.m.is_negative()
    }

    pub fn abs(&self) -> Self {
        Self { m: self.m.abs(), bits: self.bits }
    }

    pub fn div(&self, rhs: &Real) -> Self {
        debug_assert_eq!(self.bits, rhs.bits);
        assert!(!rhs.m.is_zero(), "division by zero");
        Self { m: (&self.m << self.bits) / &rhs.m, bits: self.bits }
    }

    pub fn half(&self) -> Self {
        Self { m: &self.m >> 1u32, bits: self.bits }
    }

    /// Square root of a non-negative value.
    pub fn sqrt(&self) -> Self {
        assert!(!self.m.is_negative(), "square root of a negative real");
        Self { m: (&self.m << self.bits).sqrt(), bits: self.bits }
    }

    /// Real cube root.
    pub fn cbrt(&self) -> Self {
        Self { m: (&self.m << (2 * self.bits)).cbrt(), bits: self.bits }
    }

    pub fn to_f64(&self) -> f64 {
        let len = self.m.bits();
        if len == 0 {
            return 0.0;
        }
        let shift = len.saturating_sub(62);
        let top = (&self.m >> shift).to_f64().expect("fits");
        top * 2f64.powi(shift as i32 - self.bits as i32)
    }

    /// `log10 |self|`, `-inf` for zero.
    pub fn log10_abs(&self) -> f64 {
        let len = self.m.bits();
        if len == 0 {
            return f64::NEG_INFINITY;
        }
        let shift = len.saturating_sub(62);
        let top = (&self.m >> shift).abs().to_f64().expect("fits");
        top.log10() + (shift as f64 - f64::from(self.bits)) * std::f64::consts::LOG10_2
    }

    /// Whether `|self| < 10^(-k)`.
    pub fn below_pow10(&self, k: u32) -> bool {
        // |m| * 10^k < 2^bits
        self.m.abs() * BigInt::from(10u32).pow(k) < (BigInt::from(1u32) << self.bits)
    }

    /// Scientific notation with `sig` significant digits.
    pub fn to_sci(&self, sig: usize) -> String {
        if self.m.is_zero() {
            return "0".into();
        }
        let sig = sig.max(1);
        let mut e = self.log10_abs().floor() as i64;
        loop {
            let k = sig as i64 - 1 - e;
            let scaled = if k >= 0 {
                (self.m.abs() * BigInt::from(10u32).pow(k as u32)) >> self.bits
            } else {
                (self.m.abs() >> self.bits) / BigInt::from(10u32).pow((-k) as u32)
            };
            let digits = scaled.to_string();
            match digits.len().cmp(&sig) {
                Ordering::Greater => e += 1,
                Ordering::Less if e > -100_000 => e -= 1,
                _ => {
                    let sign = if self.m.sign() == Sign::Minus { "-" } else { "" };
                    let (head, tail) = digits.split_at(1);
                    let mantissa = if tail.is_empty() { head.to_string() } else { format!("{head}.{tail}") };
                    return format!("{sign}{mantissa}e{e}");
                }
            }
        }
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_sci(f.precision().unwrap_or(20)))
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        debug_assert_eq!(self.bits, other.bits);
        Some(self.m.cmp(&other.m))
    }
}

impl Add for &Real {
    type Output = Real;
    fn add(self, rhs: &Real) -> Real {
        debug_assert_eq!(self.bits, rhs.bits);
        Real { m: &self.m + &rhs.m, bits: self.bits }
    }
}

impl Sub for &Real {
    type Output = Real;
    fn sub(self, rhs: &Real) -> Real {
        debug_assert_eq!(self.bits, rhs.bits);
        Real { m: &self.m - &rhs.m, bits: self.bits }
    }
}

impl Mul for &Real {
    type Output = Real;
    fn mul(self, rhs: &Real) -> Real {
        debug_assert_eq!(self.bits, rhs.bits);
        Real { m: (&self.m * &rhs.m) >> self.bits, bits: self.bits }
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real { m: -&self.m, bits: self.bits }
    }
}

/// `re + i im` with both parts at the same precision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigComplex {
    pub re: Real,
    pub im: Real,
}

impl BigComplex {
    pub fn new(re: Real, im: Real) -> Self {
        Self { re, im }
    }

    pub fn zero(bits: u32) -> Self {
        Self::new(Real::zero(bits), Real::zero(bits))
    }

    pub fn from_int(n: i64, bits: u32) -> Self {
        Self::new(Real::from_int(n, bits), Real::zero(bits))
    }

    pub fn from_real(re: Real) -> Self {
        let bits = re.bits();
        Self::new(re, Real::zero(bits))
    }

    pub fn from_rational(r: &Rational, bits: u32) -> Self {
        Self::from_real(Real::from_rational(r, bits))
    }

    pub fn i(bits: u32) -> Self {
        Self::new(Real::zero(bits), Real::from_int(1, bits))
    }

    pub fn bits(&self) -> u32 {
        self.re.bits()
    }

    /// Decimal digits carried, guard bits excluded.
    pub fn digits(&self) -> u32 {
        (f64::from(self.bits().saturating_sub(8)) * std::f64::consts::LOG10_2).floor() as u32
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -&self.im)
    }

    pub fn norm_sqr(&self) -> Real {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    /// Modulus, computed as `a sqrt(1 + (b/a)^2)` with `a >= b` so tiny
    /// values keep their relative accuracy.
    pub fn abs(&self) -> Real {
        let (x, y) = (self.re.abs(), self.im.abs());
        let (a, b) = if x >= y { (x, y) } else { (y, x) };
        if a.is_zero() {
            return a;
        }
        let r = b.div(&a);
        let one = Real::from_int(1, a.bits());
        &a * &(&one + &(&r * &r)).sqrt()
    }

    pub fn scale(&self, r: &Real) -> Self {
        Self::new(&self.re * r, &self.im * r)
    }

    pub fn scale_int(&self, n: i64) -> Self {
        let bits = self.bits();
        let r = Real { m: BigInt::from(n) << bits, bits };
        self.scale(&r)
    }

    /// `self * i^k`, exact.
    pub fn times_i_pow(&self, k: u8) -> Self {
        match k % 4 {
            0 => self.clone(),
            1 => Self::new(-&self.im, self.re.clone()),
            2 => Self::new(-&self.re, -&self.im),
            _ => Self::new(self.im.clone(), -&self.re),
        }
    }

    pub fn div(&self, rhs: &BigComplex) -> Self {
        let d = rhs.norm_sqr();
        let n = self * &rhs.conj();
        Self::new(n.re.div(&d), n.im.div(&d))
    }

    pub fn recip(&self) -> Self {
        Self::from_int(1, self.bits()).div(self)
    }

    pub fn powu(&self, n: u32) -> Self {
        let mut acc = Self::from_int(1, self.bits());
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Principal square root: real part non-negative, and the imaginary part
    /// non-negative on the negative real axis.
    pub fn sqrt(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let r = self.abs();
        if !self.re.is_negative() {
            let u = (&r + &self.re).half().sqrt();
            let v = self.im.div(&(&u + &u));
            Self::new(u, v)
        } else {
            let mut v = (&r - &self.re).half().sqrt();
            if self.im.is_negative() {
                v = -&v;
            }
            let u = self.im.div(&(&v + &v));
            Self::new(u, v)
        }
    }

    /// Principal fourth root, `sqrt(sqrt(z))`: both square roots halve the
    /// principal argument.
    pub fn fourth_root(&self) -> Self {
        self.sqrt().sqrt()
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = f.precision().unwrap_or(20);
        let sign = if self.im.is_negative() { "-" } else { "+" };
        write!(f, "{} {} {}i", self.re.to_sci(p), sign, self.im.abs().to_sci(p))
    }
}

impl Add for &BigComplex {
    type Output = BigComplex;
    fn add(self, rhs: &BigComplex) -> BigComplex {
        BigComplex::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub for &BigComplex {
    type Output = BigComplex;
    fn sub(self, rhs: &BigComplex) -> BigComplex {
        BigComplex::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul for &BigComplex {
    type Output = BigComplex;
    fn mul(self, rhs: &BigComplex) -> BigComplex {
        BigComplex::new(
            &(&self.re * &rhs.re) - &(&self.im * &rhs.im),
            &(&self.re * &rhs.im) + &(&self.im * &rhs.re),
        )
    }
}

impl Neg for &BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex::new(-&self.re, -&self.im)
    }
}
