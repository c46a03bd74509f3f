//! Truncated Taylor series `sum c_k t^k` at a point, used to differentiate
//! closed forms exactly up to rounding.

use std::ops::{Add, Mul, Neg, Sub};

use super::real::BigComplex;

/// The germ `f(x0 + t)` through `t^(len-1)`. Binary operations truncate to
/// the shorter operand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Jet {
    c: Vec<BigComplex>,
}

impl Jet {
    pub fn constant(v: BigComplex, len: usize) -> Self {
        let bits = v.bits();
        let mut c = vec![BigComplex::zero(bits); len.max(1)];
        c[0] = v;
        Self { c }
    }

    /// The identity germ `x0 + t`.
    pub fn variable(x0: BigComplex, len: usize) -> Self {
        let bits = x0.bits();
        let mut j = Self::constant(x0, len.max(2));
        j.c[1] = BigComplex::from_int(1, bits);
        j
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    pub fn value(&self) -> &BigComplex {
        &self.c[0]
    }

    /// The `t^k` coefficient, `f^(k)(x0) / k!`.
    pub fn coeff(&self, k: usize) -> &BigComplex {
        &self.c[k]
    }

    fn bits(&self) -> u32 {
        self.c[0].bits()
    }

    /// The germ of `f'`; one term shorter.
    pub fn derivative(&self) -> Self {
        assert!(self.c.len() > 1, "jet too short to differentiate");
        Self { c: self.c.iter().enumerate().skip(1).map(|(k, v)| v.scale_int(k as i64)).collect() }
    }

    pub fn scale(&self, s: &BigComplex) -> Self {
        Self { c: self.c.iter().map(|v| v * s).collect() }
    }

    pub fn scale_int(&self, n: i64) -> Self {
        Self { c: self.c.iter().map(|v| v.scale_int(n)).collect() }
    }

    pub fn add_const(&self, s: &BigComplex) -> Self {
        let mut out = self.clone();
        out.c[0] = &out.c[0] + s;
        out
    }

    pub fn powu(&self, n: u32) -> Self {
        let mut acc = Self::constant(BigComplex::from_int(1, self.bits()), self.len());
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn div(&self, rhs: &Jet) -> Self {
        let n = self.len().min(rhs.len());
        let inv0 = rhs.c[0].recip();
        let mut q: Vec<BigComplex> = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = self.c[k].clone();
            for (j, qj) in q.iter().enumerate() {
                acc = &acc - &(qj * &rhs.c[k - j]);
            }
            q.push(&acc * &inv0);
        }
        Self { c: q }
    }

    pub fn recip(&self) -> Self {
        Self::constant(BigComplex::from_int(1, self.bits()), self.len()).div(self)
    }

    /// `f^(p/q)` on the branch whose value at `x0` is `g0`; the caller
    /// guarantees `g0^q = f(x0)^p` and `f(x0) != 0`.
    ///
    /// Uses `f g' = (p/q) f' g`, which fixes each coefficient from the lower ones.
    pub fn pow_rat(&self, p: i64, q: i64, g0: BigComplex) -> Self {
        let n = self.len();
        let mut g = vec![g0];
        for k in 1..n {
            // k q f0 g_k = sum_{j=1..k} ((p + q) j - q k) f_j g_{k-j}
            let mut acc = BigComplex::zero(self.bits());
            for j in 1..=k {
                let w = (p + q) * j as i64 - q * k as i64;
                if w != 0 {
                    acc = &acc + &(&self.c[j] * &g[k - j]).scale_int(w);
                }
            }
            g.push(acc.div(&self.c[0].scale_int(q * k as i64)));
        }
        Self { c: g }
    }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        Jet { c: self.c.iter().zip(&rhs.c).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        Jet { c: self.c.iter().zip(&rhs.c).map(|(a, b)| a - b).collect() }
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        let n = self.len().min(rhs.len());
        let bits = self.bits();
        let c = (0..n)
            .map(|k| (0..=k).fold(BigComplex::zero(bits), |acc, j| &acc + &(&self.c[j] * &rhs.c[k - j])))
            .collect();
        Jet { c }
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet { c: self.c.iter().map(|v| -v).collect() }
    }
}
