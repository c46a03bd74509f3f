//! Recovers the coefficients of a monic operator from its remainder modulo
//! the third-order operator built from `chi`.

use crate::diffop::DiffOp;
use crate::error::{Error, Result};
use crate::exact::{XLaurent, ZSeries};

use super::rank3::{known_coeff, power_remainders, verify_rank3, Rank3Report};

/// `f_0..f_{n-1}` of `D^n + sum f_k D^k`, with the check that produced them.
#[derive(Clone, Debug)]
pub struct DerivedOperator {
    pub coeffs: Vec<XLaurent>,
    pub check: Rank3Report,
}

impl DerivedOperator {
    pub fn operator(&self) -> DiffOp<XLaurent> {
        let mut c = self.coeffs.clone();
        c.push(XLaurent::one());
        DiffOp::new(c)
    }
}

struct Equation {
    j: usize,
    order: i32,
    row: Vec<XLaurent>,
    rhs: XLaurent,
}

/// Solves `D^order + sum_{k<order} f_k D^k = eigen (mod T)` for
/// `z`-independent `f_k`, using the `z^s` coefficients of the three
/// remainders for `s` from the lowest pole through `z^0`.
///
/// The unknowns enter linearly through `f_k * (D^k mod T)`. The system is
/// solved by Gauss-Jordan elimination with pivots restricted to units of the
/// coefficient ring, and the result is then checked by a full reduction.
pub fn derive_operator(chi: &[ZSeries; 3], eigen: &ZSeries, order: usize) -> Result<DerivedOperator> {
    let rems = power_remainders(chi, order);
    let lowest = rems
        .iter()
        .flat_map(|r| r.iter().filter_map(ZSeries::valuation))
        .chain(eigen.valuation())
        .min()
        .unwrap_or(0)
        .min(0);
    let mut eqs = Vec::new();
    for s in lowest..=0 {
        for j in 0..3 {
            let row = rems[..order].iter().map(|r| known_coeff(&r[j], s)).collect::<Result<Vec<_>>>()?;
            let target = if j == 0 { known_coeff(eigen, s)? } else { XLaurent::zero() };
            let rhs = &target - &known_coeff(&rems[order][j], s)?;
            eqs.push(Equation { j, order: s, row, rhs });
        }
    }
    let coeffs = solve_unit_pivots(eqs, order)?;
    let mut full = coeffs.clone();
    full.push(XLaurent::one());
    let check = verify_rank3(&DiffOp::new(full), chi, eigen, 0)?;
    if let Some((j, s, diff)) = &check.failure {
        return Err(Error::Inconsistent(format!("substitution check failed at Q_{j}, z^{s}: {diff}")));
    }
    Ok(DerivedOperator { coeffs, check })
}

fn solve_unit_pivots(mut eqs: Vec<Equation>, n: usize) -> Result<Vec<XLaurent>> {
    let mut pivot_of = vec![None; n];
    for col in 0..n {
        let used: Vec<usize> = pivot_of.iter().flatten().copied().collect();
        let candidates = || (0..eqs.len()).filter(|i| !used.contains(i));
        let Some(p) = candidates().find(|&i| eqs[i].row[col].as_unit().is_some()) else {
            return Err(match candidates().find(|&i| !eqs[i].row[col].is_zero()) {
                Some(i) => Error::NotInvertible(format!(
                    "f_{col}: no unit pivot, first entry {} at Q_{}, z^{}",
                    eqs[i].row[col], eqs[i].j, eqs[i].order
                )),
                None => Error::Underdetermined(format!("f_{col} does not occur in any equation")),
            });
        };
        let inv = eqs[p].row[col].unit_inverse().expect("unit");
        let prow: Vec<XLaurent> = eqs[p].row.iter().map(|c| c * &inv).collect();
        let prhs = &eqs[p].rhs * &inv;
        for (i, eq) in eqs.iter_mut().enumerate() {
            if i == p || eq.row[col].is_zero() {
                continue;
            }
            let a = eq.row[col].clone();
            for (c, pc) in eq.row.iter_mut().zip(&prow) {
                c.sub_assign_ref(&(&a * pc));
            }
            eq.rhs.sub_assign_ref(&(&a * &prhs));
        }
        eqs[p].row = prow;
        eqs[p].rhs = prhs;
        pivot_of[col] = Some(p);
    }
    for (i, eq) in eqs.iter().enumerate() {
        if !pivot_of.contains(&Some(i)) && !eq.rhs.is_zero() {
            return Err(Error::Inconsistent(format!("Q_{}, z^{}: 0 = {}", eq.j, eq.order, eq.rhs)));
        }
    }
    Ok(pivot_of.iter().map(|p| eqs[p.expect("pivot")].rhs.clone()).collect())
}

/// `f_0..f_8` of the order-9 operator with eigenvalue `lambda`.
pub fn derive_l1_coeffs(chi: &[ZSeries; 3], lambda: &ZSeries) -> Result<Vec<XLaurent>> {
    Ok(derive_operator(chi, lambda, 9)?.coeffs)
}
