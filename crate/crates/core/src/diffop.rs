//! Ordinary differential operators `sum c_k D^k` over a differential ring.

use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::exact::{binomial_rows, BivarPoly, EpsPoly, Rational, XLaurent, ZSeries};

/// A commutative differential ring usable as operator coefficients.
///
/// Method names avoid the `std::ops` traits so that reference-based
/// arithmetic on the concrete types stays unambiguous.
pub trait Coefficient: Clone + PartialEq + fmt::Display + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    /// Exact zero. Truncated series with unknown tails are not zero.
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn negated(&self) -> Self;
    fn scaled(&self, c: &Rational) -> Self;
    fn derivative(&self) -> Self;
    fn from_eps(p: &EpsPoly) -> Self;
    /// Multiplicative inverse when this is a unit of the ring.
    fn unit_inverse(&self) -> Option<Self>;

    /// Zero as far as the representation can tell; agrees with
    /// [`Coefficient::is_zero`] for exact rings.
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    /// `self += a * b`.
    fn add_product(&mut self, a: &Self, b: &Self) {
        *self = self.plus(&a.times(b));
    }
}

impl Coefficient for XLaurent {
    fn zero() -> Self {
        XLaurent::zero()
    }
    fn one() -> Self {
        XLaurent::one()
    }
    fn is_zero(&self) -> bool {
        XLaurent::is_zero(self)
    }
    fn is_one(&self) -> bool {
        XLaurent::is_one(self)
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn negated(&self) -> Self {
        -self
    }
    fn scaled(&self, c: &Rational) -> Self {
        self.scale(c)
    }
    fn derivative(&self) -> Self {
        self.derive()
    }
    fn from_eps(p: &EpsPoly) -> Self {
        XLaurent::from_eps(p.clone())
    }
    fn unit_inverse(&self) -> Option<Self> {
        XLaurent::unit_inverse(self)
    }
    fn add_product(&mut self, a: &Self, b: &Self) {
        XLaurent::add_product(self, a, b)
    }
}

impl Coefficient for ZSeries {
    fn zero() -> Self {
        ZSeries::zero()
    }
    fn one() -> Self {
        ZSeries::one()
    }
    fn is_zero(&self) -> bool {
        ZSeries::is_zero(self)
    }
    fn is_one(&self) -> bool {
        ZSeries::is_one(self)
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self.multiply(rhs)
    }
    fn negated(&self) -> Self {
        self.negate()
    }
    fn scaled(&self, c: &Rational) -> Self {
        self.scale(c)
    }
    fn derivative(&self) -> Self {
        self.derive()
    }
    fn from_eps(p: &EpsPoly) -> Self {
        ZSeries::constant(XLaurent::from_eps(p.clone()))
    }
    fn unit_inverse(&self) -> Option<Self> {
        let v = self.valuation()?;
        let lead = self.coeff(v)?;
        lead.unit_inverse()?;
        let span = match self.precision() {
            Some(p) => (p - v - 1).max(0) as usize,
            None => crate::exact::DEFAULT_SERIES_ORDER,
        };
        self.inverse(span).ok()
    }
    fn is_negligible(&self) -> bool {
        self.is_known_zero()
    }
}

fn binomials() -> &'static [Vec<Rational>] {
    static TABLE: OnceLock<Vec<Vec<Rational>>> = OnceLock::new();
    TABLE.get_or_init(|| binomial_rows(64))
}

/// `C(n, k)` for `k <= n`.
pub fn binomial(n: usize, k: usize) -> Rational {
    let table = binomials();
    if n < table.len() {
        return table[n][k].clone();
    }
    binomial_rows(n)[n][k].clone()
}

/// `c_0 + c_1 D + ... + c_n D^n` with `c_n != 0`; the zero operator has no
/// coefficients.
#[derive(Clone, PartialEq)]
pub struct DiffOp<C> {
    coeffs: Vec<C>,
}

impl<C: Coefficient> DiffOp<C> {
    /// Trailing exact zeros are trimmed.
    pub fn new(mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(C::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn identity() -> Self {
        Self::multiplication(C::one())
    }

    /// Multiplication by `c`.
    pub fn multiplication(c: C) -> Self {
        Self::new(vec![c])
    }

    /// `D^n`.
    pub fn d_pow(n: usize) -> Self {
        let mut coeffs = vec![C::zero(); n + 1];
        coeffs[n] = C::one();
        Self { coeffs }
    }

    /// `None` for the zero operator.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Every coefficient is zero up to known truncation.
    pub fn is_negligible(&self) -> bool {
        self.coeffs.iter().all(C::is_negligible)
    }

    /// Coefficient of `D^k`.
    pub fn coeff(&self, k: usize) -> C {
        self.coeffs.get(k).cloned().unwrap_or_else(C::zero)
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&C> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(C::is_one)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.zip(rhs, C::plus)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.zip(rhs, C::minus)
    }

    fn zip(&self, rhs: &Self, f: impl Fn(&C, &C) -> C) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = C::zero();
        let coeffs = (0..n)
            .map(|k| {
                let a = self.coeffs.get(k).unwrap_or(&zero);
                let b = rhs.coeffs.get(k).unwrap_or(&zero);
                f(a, b)
            })
            .collect();
        Self::new(coeffs)
    }

    pub fn neg(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(C::negated).collect() }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.scaled(c)).collect())
    }

    /// `c * self`, with `c` acting by left multiplication.
    pub fn left_mul(&self, c: &C) -> Self {
        Self::new(self.coeffs.iter().map(|a| c.times(a)).collect())
    }

    /// `self ∘ rhs` via `D^i b = sum_k C(i,k) b^(k) D^(i-k)`.
    pub fn compose(&self, rhs: &Self) -> Self {
        let (Some(n), Some(m)) = (self.order(), rhs.order()) else {
            return Self::zero();
        };
        // derivs[k][j] = (b_j)^(k)
        let mut derivs: Vec<Vec<C>> = Vec::with_capacity(n + 1);
        derivs.push(rhs.coeffs.clone());
        for k in 1..=n {
            let next = derivs[k - 1].iter().map(C::derivative).collect();
            derivs.push(next);
        }
        let mut out = vec![C::zero(); n + m + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for k in 0..=i {
                let scaled = a.scaled(&binomial(i, k));
                for (j, b) in derivs[k].iter().enumerate() {
                    if b.is_zero() {
                        continue;
                    }
                    out[i - k + j].add_product(&scaled, b);
                }
            }
        }
        Self::new(out)
    }

    /// `self ∘ rhs - rhs ∘ self`.
    pub fn commutator(&self, rhs: &Self) -> Self {
        self.compose(rhs).sub(&rhs.compose(self))
    }

    /// `self^k`, with `self^0` the identity.
    pub fn power(&self, k: u32) -> Self {
        self.powers(k).pop().expect("powers is nonempty")
    }

    /// `[self^0, self^1, ..., self^k]`.
    pub fn powers(&self, k: u32) -> Vec<Self> {
        let mut out = vec![Self::identity()];
        for i in 1..=k as usize {
            let next = if i == 1 { self.clone() } else { self.compose(&out[i - 1]) };
            out.push(next);
        }
        out
    }

    /// `sum c_k f^(k)`.
    pub fn apply(&self, f: &C) -> C {
        let mut acc = C::zero();
        let mut g = f.clone();
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                g = g.derivative();
            }
            if !c.is_zero() {
                acc.add_product(c, &g);
            }
        }
        acc
    }

    /// `(q, r)` with `self = q ∘ t + r` and `ord r < ord t`. `t` must be monic.
    pub fn right_reduce(&self, t: &Self) -> Result<(Self, Self)> {
        let m = t.order().ok_or(Error::DivisionByZero)?;
        if !t.is_monic() {
            return Err(Error::NotMonic(t.leading().map(|c| c.to_string()).unwrap_or_default()));
        }
        let Some(n) = self.order().filter(|&n| n >= m) else {
            return Ok((Self::zero(), self.clone()));
        };
        let mut rem = self.coeffs.clone();
        let mut quot = vec![C::zero(); n - m + 1];
        // shifted = D^j ∘ t, built upward
        let mut shifted = vec![t.clone()];
        for j in 1..=n - m {
            let next = Self::d_pow(1).compose(&shifted[j - 1]);
            shifted.push(next);
        }
        for k in (m..=n).rev() {
            let c = std::mem::replace(&mut rem[k], C::zero());
            if c.is_zero() {
                continue;
            }
            let j = k - m;
            for (i, s) in shifted[j].coeffs.iter().enumerate().take(k) {
                if !s.is_zero() {
                    rem[i] = rem[i].minus(&c.times(s));
                }
            }
            quot[j] = c;
        }
        rem.truncate(m);
        Ok((Self::new(quot), Self::new(rem)))
    }

    pub fn map_coeffs<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> DiffOp<D> {
        DiffOp::new(self.coeffs.iter().map(f).collect())
    }
}

impl DiffOp<XLaurent> {
    pub fn specialize_eps(&self, value: &Rational) -> Self {
        self.map_coeffs(|c| c.specialize_eps(value))
    }

    /// Lifts to constant-in-`z` series coefficients.
    pub fn to_series(&self) -> DiffOp<ZSeries> {
        self.map_coeffs(|c| ZSeries::from(c.clone()))
    }
}

/// The order in which a monomial `z^a w^b` is realized.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MonomialOrder {
    /// `A^a ∘ B^b`.
    AFirst,
    /// `B^b ∘ A^a`.
    BFirst,
}

/// `Q(A, B) = sum q_ab A^a ∘ B^b`. Fails unless `[A, B] = 0`.
pub fn eval_poly_at_pair<C: Coefficient>(q: &BivarPoly, a: &DiffOp<C>, b: &DiffOp<C>) -> Result<DiffOp<C>> {
    eval_poly_at_pair_with(q, a, b, MonomialOrder::AFirst)
}

pub fn eval_poly_at_pair_with<C: Coefficient>(
    q: &BivarPoly,
    a: &DiffOp<C>,
    b: &DiffOp<C>,
    order: MonomialOrder,
) -> Result<DiffOp<C>> {
    ensure_commuting(a, b)?;
    let max_a = q.terms().map(|((i, _), _)| i).max().unwrap_or(0);
    let max_b = q.terms().map(|((_, j), _)| j).max().unwrap_or(0);
    let pa = a.powers(max_a);
    let pb = b.powers(max_b);
    let mut acc = DiffOp::zero();
    for ((i, j), c) in q.terms() {
        let (i, j) = (i as usize, j as usize);
        let mono = match (i, j) {
            (_, 0) => pa[i].clone(),
            (0, _) => pb[j].clone(),
            _ => match order {
                MonomialOrder::AFirst => pa[i].compose(&pb[j]),
                MonomialOrder::BFirst => pb[j].compose(&pa[i]),
            },
        };
        acc = acc.add(&mono.left_mul(&C::from_eps(c)));
    }
    Ok(acc)
}

/// Fails with the leading nonzero commutator coefficient `W_k`.
pub fn ensure_commuting<C: Coefficient>(a: &DiffOp<C>, b: &DiffOp<C>) -> Result<()> {
    let w = a.commutator(b);
    match w.order() {
        None => Ok(()),
        Some(k) => Err(Error::NonCommuting { order: k, coefficient: w.coeff(k).to_string() }),
    }
}

impl<C: Coefficient> fmt::Display for DiffOp<C> {
    /// Terms by descending `D` order as `(c)*D^k`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*D")?,
                k => write!(f, "({c})*D^{k}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl<C: Coefficient> fmt::Debug for DiffOp<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DiffOp({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    type Op = DiffOp<XLaurent>;

    fn xp(c: Rational, n: i32) -> XLaurent {
        XLaurent::term(c, 0, n)
    }

    fn mult(c: XLaurent) -> Op {
        Op::multiplication(c)
    }

    #[test]
    fn leibniz_first_order() {
        let a = XLaurent::from_monomials([(int(3), 0, 2), (int(1), 2, -1)]);
        let lhs = Op::d_pow(1).compose(&mult(a.clone()));
        assert_eq!(lhs, Op::new(vec![a.derive(), a]));
    }

    #[test]
    fn d2_times_x2() {
        let lhs = Op::d_pow(2).compose(&mult(xp(int(1), 2)));
        let expected = Op::new(vec![XLaurent::constant(int(2)), xp(int(4), 1), xp(int(1), 2)]);
        assert_eq!(lhs, expected);
        for k in 0..=4 {
            let f = xp(int(1), k);
            assert_eq!(lhs.apply(&f), Op::d_pow(2).apply(&xp(int(1), 2).times(&f)));
        }
    }

    #[test]
    fn weyl_relation() {
        let w = Op::d_pow(1).commutator(&mult(XLaurent::x()));
        assert_eq!(w, Op::identity());
    }

    #[test]
    fn euler_operator() {
        let e = Op::new(vec![XLaurent::zero(), XLaurent::x()]);
        for n in [-3, 0, 5] {
            assert_eq!(e.apply(&xp(int(1), n)), xp(int(n.into()), n));
        }
        assert_eq!(Op::d_pow(1).apply(&xp(int(1), 3)), xp(int(3), 2));
    }

    #[test]
    fn reduction_round_trip() {
        let t = Op::new(vec![xp(int(1), -3), xp(rat(1, 2), -2), XLaurent::zero(), XLaurent::one()]);
        let a = Op::new((0..8).map(|k| xp(int(k as i64 + 1), k - 2)).collect());
        let (q, r) = a.right_reduce(&t).unwrap();
        assert!(r.order().unwrap() < 3);
        assert_eq!(q.compose(&t).add(&r), a);
        let (q, r) = t.right_reduce(&t).unwrap();
        assert_eq!((q, r), (Op::identity(), Op::zero()));
    }

    #[test]
    fn reduction_rejects_non_monic() {
        let t = Op::new(vec![XLaurent::one(), xp(int(2), 0)]);
        assert!(matches!(Op::d_pow(3).right_reduce(&t), Err(Error::NotMonic(_))));
    }

    #[test]
    fn powers_and_orders() {
        let d3 = Op::d_pow(1).power(3);
        assert_eq!(d3, Op::d_pow(3));
        assert_eq!(Op::d_pow(2).power(0), Op::identity());
        assert_eq!(binomial(48, 24), int(32247603683100));
    }

    #[test]
    fn non_commuting_pair_is_reported() {
        let q = BivarPoly::zero().with_term(1, 0, EpsPoly::one());
        let err = eval_poly_at_pair(&q, &Op::d_pow(1), &mult(XLaurent::x())).unwrap_err();
        assert!(matches!(err, Error::NonCommuting { order: 0, .. }));
        let a = Op::d_pow(2);
        assert_eq!(eval_poly_at_pair(&q, &a, &Op::d_pow(3)).unwrap(), a);
    }
}
