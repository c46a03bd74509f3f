//! Exact data for the rank-3 pair `L1` (order 9), `L2` (order 12), the
//! `eps = 0` cube root `calL`, and their spectral curve.

use crate::diffop::DiffOp;
use crate::exact::{int, parse_rational, rat, BivarPoly, EpsPoly, Rational, XLaurent};

/// One monomial `c * eps^e * x^n` as `(c, e, n)`.
pub type Monomial = (&'static str, u32, i32);

/// `L1 = D^9 + sum_{n<=7} f_n D^n`; `L1_COEFFS[n]` holds `f_n`.
pub const L1_COEFFS: [&[Monomial]; 8] = [
    &[
        ("152/243", 0, 0),
        ("-58240", 0, -9),
        ("-55/243", 2, -3),
        ("-37/11337408", 4, 3),
        ("115/11337408", 2, 6),
        ("37/1417176", 0, 9),
        ("1/198359290368", 6, 9),
        ("1/66119763456", 4, 12),
        ("1/66119763456", 2, 15),
        ("1/198359290368", 0, 18),
    ],
    &[
        ("58240", 0, -8),
        ("55/243", 2, -2),
        ("-152/243", 0, 1),
        ("5/5668704", 4, 4),
        ("2/177147", 2, 7),
        ("17/1417176", 0, 10),
    ],
    &[
        ("-43200", 0, -7),
        ("26/243", 2, -1),
        ("-73/243", 0, 2),
        ("1/1259712", 4, 5),
        ("1/419904", 2, 8),
        ("1/629856", 0, 11),
    ],
    &[
        ("-143/1944", 2, 0),
        ("19120", 0, -6),
        ("79/486", 0, 3),
        ("1/11337408", 4, 6),
        ("1/5668704", 2, 9),
        ("1/11337408", 0, 12),
    ],
    &[("-4800", 0, -5), ("-2/243", 2, 1), ("16/243", 0, 4)],
    &[("-24", 0, -4), ("1/216", 2, 2), ("1/108", 0, 5)],
    &[("384", 0, -3), ("1/1944", 2, 3), ("1/1944", 0, 6)],
    &[("-78", 0, -2)],
];

/// `L2 = D^12 + sum_{n<=10} g_n D^n`; `L2_COEFFS[n]` holds `g_n`.
pub const L2_COEFFS: [&[Monomial]; 11] = [
    &[
        ("45660160", 0, -12),
        ("-4928/729", 2, -6),
        ("-20048/729", 0, -3),
        ("-605/708588", 2, 3),
        ("4553/708588", 0, 6),
        ("79/99179645184", 6, 6),
        ("269/16529940864", 4, 9),
        ("683/16529940864", 2, 12),
        ("1/1156831381426176", 8, 12),
        ("661/24794911296", 0, 15),
        ("1/289207845356544", 6, 15),
        ("1/192805230237696", 4, 18),
        ("1/289207845356544", 2, 21),
        ("1/1156831381426176", 0, 24),
    ],
    &[
        ("-45660160", 0, -11),
        ("4928/729", 2, -5),
        ("20048/729", 0, -2),
        ("-203/2834352", 4, 1),
        ("1691/2834352", 2, 4),
        ("7111/708588", 0, 7),
        ("55/49589822592", 6, 7),
        ("127/16529940864", 4, 10),
        ("217/16529940864", 2, 13),
        ("325/49589822592", 0, 16),
    ],
    &[
        ("27758080", 0, -10),
        ("-182/27", 2, -4),
        ("296/9", 0, -1),
        ("-413/5668704", 4, 2),
        ("4339/2834352", 2, 5),
        ("6595/1417176", 0, 8),
        ("1/3673320192", 6, 8),
        ("1/918330048", 4, 11),
        ("5/3673320192", 2, 14),
        ("1/1836660096", 0, 17),
    ],
    &[
        ("-5992/729", 0, 0),
        ("-11567360", 0, -9),
        ("1028/729", 2, -3),
        ("25/1417176", 4, 3),
        ("457/708588", 2, 6),
        ("1393/1417176", 0, 9),
        ("1/49589822592", 6, 9),
        ("1/16529940864", 4, 12),
        ("1/16529940864", 2, 15),
        ("1/49589822592", 0, 18),
    ],
    &[
        ("3395840", 0, -8),
        ("271/243", 2, -2),
        ("-2834/243", 0, 1),
        ("193/11337408", 4, 4),
        ("317/2834352", 2, 7),
        ("307/2834352", 0, 10),
    ],
    &[
        ("-693504", 0, -7),
        ("-13/243", 2, -1),
        ("221/243", 0, 2),
        ("1/314928", 4, 5),
        ("1/104976", 2, 8),
        ("1/157464", 0, 11),
    ],
    &[
        ("-167/972", 2, 0),
        ("86464", 0, -6),
        ("316/243", 0, 3),
        ("1/5668704", 4, 6),
        ("1/2834352", 2, 9),
        ("1/5668704", 0, 12),
    ],
    &[("-672", 0, -5), ("1/486", 2, 1), ("109/486", 0, 4)],
    &[("-2856", 0, -4), ("1/108", 2, 2), ("1/54", 0, 5)],
    &[("824", 0, -3), ("1/1458", 2, 3), ("1/1458", 0, 6)],
    &[("-104", 0, -2)],
];

/// `calL = D^3 - 26/x^2 D - 28/x^3 + x^6/5832`, coefficients of `D^0..D^2`.
pub const CAL_L_COEFFS: [&[Monomial]; 3] = [&[("-28", 0, -3), ("1/5832", 0, 6)], &[("-26", 0, -2)], &[]];

/// The two potentials of the reduced third-order operator, as transcribed.
pub const ZETA1: &[Monomial] = &[("28", 0, -2), ("-1/5832", 2, 3), ("-1/5832", 0, 6)];
pub const ZETA2: &[Monomial] = &[("26", 0, -2)];

/// `ZETA1` with the `x` power that the `chi_0` expansion and `calL` require.
pub const ZETA1_CORRECTED: &[Monomial] = &[("28", 0, -3), ("-1/5832", 2, 3), ("-1/5832", 0, 6)];

/// `L2` reduces to `mu + L2_EIGEN_OFFSET` modulo the third-order operator, so
/// `L2 - L2_EIGEN_OFFSET` is the member of the commutant with eigenvalue `mu`.
pub const L2_EIGEN_OFFSET: Monomial = ("-1541/11337408", 4, 0);

pub fn monomials_to_laurent(ms: &[Monomial]) -> XLaurent {
    XLaurent::from_monomials(ms.iter().map(|(c, e, n)| (rational(c), *e, *n)))
}

fn rational(s: &str) -> Rational {
    parse_rational(s).unwrap_or_else(|| panic!("bad rational literal {s}"))
}

fn monic(lower: &[&[Monomial]], order: usize) -> DiffOp<XLaurent> {
    let mut coeffs: Vec<XLaurent> = lower.iter().map(|ms| monomials_to_laurent(ms)).collect();
    coeffs.resize(order, XLaurent::zero());
    coeffs.push(XLaurent::one());
    DiffOp::new(coeffs)
}

pub fn make_l1() -> DiffOp<XLaurent> {
    monic(&L1_COEFFS, 9)
}

pub fn make_l2() -> DiffOp<XLaurent> {
    monic(&L2_COEFFS, 12)
}

pub fn make_cal_l() -> DiffOp<XLaurent> {
    monic(&CAL_L_COEFFS, 3)
}

pub fn zeta1() -> XLaurent {
    monomials_to_laurent(ZETA1)
}

pub fn zeta1_corrected() -> XLaurent {
    monomials_to_laurent(ZETA1_CORRECTED)
}

pub fn zeta2() -> XLaurent {
    monomials_to_laurent(ZETA2)
}

pub fn l2_eigen_offset() -> XLaurent {
    monomials_to_laurent(&[L2_EIGEN_OFFSET])
}

/// `L2 - L2_EIGEN_OFFSET`, whose joint eigenvalue with `L1` is `(lambda, mu)`.
pub fn make_l2_mu() -> DiffOp<XLaurent> {
    make_l2().sub(&DiffOp::multiplication(l2_eigen_offset()))
}

/// `w^3 - (eps^4/15552) w^2 - z^4 - z^3`, with `z ~ L1`, `w ~ L2`.
pub fn bc_polynomial() -> BivarPoly {
    BivarPoly::zero()
        .with_term(0, 3, EpsPoly::one())
        .with_term(0, 2, EpsPoly::monomial(rat(-1, 15552), 4))
        .with_term(4, 0, EpsPoly::constant(int(-1)))
        .with_term(3, 0, EpsPoly::constant(int(-1)))
}

/// Everything above, built once.
#[derive(Clone, Debug)]
pub struct OperatorBundle {
    pub l1: DiffOp<XLaurent>,
    pub l2: DiffOp<XLaurent>,
    pub cal_l: DiffOp<XLaurent>,
    pub zeta1: XLaurent,
    pub zeta2: XLaurent,
    pub bc: BivarPoly,
}

impl OperatorBundle {
    pub fn new() -> Self {
        Self {
            l1: make_l1(),
            l2: make_l2(),
            cal_l: make_cal_l(),
            zeta1: zeta1(),
            zeta2: zeta2(),
            bc: bc_polynomial(),
        }
    }
}

impl Default for OperatorBundle {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes() {
        let (l1, l2) = (make_l1(), make_l2());
        assert_eq!(l1.order(), Some(9));
        assert_eq!(l2.order(), Some(12));
        assert!(l1.is_monic() && l2.is_monic());
        assert!(l1.coeff(8).is_zero() && l2.coeff(11).is_zero());
        assert_eq!(make_cal_l().order(), Some(3));
    }

    #[test]
    fn transcribed_spot_values() {
        let l1 = make_l1();
        assert_eq!(l1.coeff(7), XLaurent::term(int(-78), 0, -2));
        let f6 = XLaurent::from_monomials([(int(384), 0, -3), (rat(1, 1944), 2, 3), (rat(1, 1944), 0, 6)]);
        assert_eq!(l1.coeff(6), f6);
        assert_eq!(l1.coeff(0).coeff(-9), EpsPoly::constant(int(-58240)));
        let l2 = make_l2();
        assert_eq!(l2.coeff(10), XLaurent::term(int(-104), 0, -2));
        assert_eq!(l2.coeff(0).coeff(-12), EpsPoly::constant(int(45660160)));
        let g9 = XLaurent::from_monomials([(int(824), 0, -3), (rat(1, 1458), 2, 3), (rat(1, 1458), 0, 6)]);
        assert_eq!(l2.coeff(9), g9);
        assert_eq!(make_cal_l().coeff(1), XLaurent::term(int(-26), 0, -2));
    }

    #[test]
    fn support_is_even_and_windowed() {
        for op in [make_l1(), make_l2()] {
            for c in op.coeffs() {
                for (n, e, _) in c.monomials() {
                    assert!(e % 2 == 0 && e <= 8, "eps^{e}");
                    assert!((-12..=24).contains(&n), "x^{n}");
                }
            }
        }
    }
}
