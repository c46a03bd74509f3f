//! Reduction modulo `T = D^3 - chi_2 D^2 - chi_1 D - chi_0` over `z`-series.

use serde::Serialize;

use crate::diffop::DiffOp;
use crate::error::{Error, Result};
use crate::exact::{XLaurent, ZSeries};

/// The monic third-order operator with the given `chi_0, chi_1, chi_2`.
pub fn third_order(chi: &[ZSeries; 3]) -> DiffOp<ZSeries> {
    DiffOp::new(vec![chi[0].negate(), chi[1].negate(), chi[2].negate(), ZSeries::one()])
}

/// `D^n mod T` for `n = 0..=n_max`, as `[c_0, c_1, c_2]` with
/// `D^n = c_0 + c_1 D + c_2 D^2 (mod T)`.
pub fn power_remainders(chi: &[ZSeries; 3], n_max: usize) -> Vec<[ZSeries; 3]> {
    let mut out = vec![[ZSeries::one(), ZSeries::zero(), ZSeries::zero()]];
    for _ in 0..n_max {
        let [c, b, a] = out.last().expect("nonempty").clone();
        // D (a D^2 + b D + c) = a D^3 + (a' + b) D^2 + (b' + c) D + c'
        let next = [
            &c.derive() + &a.multiply(&chi[0]),
            &(&b.derive() + &c) + &a.multiply(&chi[1]),
            &(&a.derive() + &b) + &a.multiply(&chi[2]),
        ];
        out.push(next);
    }
    out
}

/// Outcome of comparing `L mod T` with `(eigen, 0, 0)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Rank3Report {
    pub passed: bool,
    /// Lowest `z` order compared.
    pub first_order: i32,
    /// Highest `z` order at which all three remainders were known and matched.
    pub verified_through: Option<i32>,
    /// Matched orders `0..=verified_through`.
    pub nonnegative_orders: usize,
    /// First mismatch as `(j, z order, difference)`.
    pub failure: Option<(usize, i32, String)>,
}

/// Checks `L mod T = eigen + 0 D + 0 D^2` order by order in `z`. Passes iff
/// there is no mismatch and at least `check_order` non-negative orders match.
pub fn verify_rank3(
    l: &DiffOp<XLaurent>,
    chi: &[ZSeries; 3],
    eigen: &ZSeries,
    check_order: usize,
) -> Result<Rank3Report> {
    let (_, rem) = l.to_series().right_reduce(&third_order(chi))?;
    let diffs = [&rem.coeff(0) - eigen, rem.coeff(1), rem.coeff(2)];
    Ok(compare_to_zero(&diffs, eigen.valuation().unwrap_or(0).min(0), check_order))
}

fn compare_to_zero(diffs: &[ZSeries; 3], start: i32, check_order: usize) -> Rank3Report {
    let first_order = diffs.iter().filter_map(ZSeries::valuation).chain([start]).min().unwrap_or(start);
    let limit = diffs.iter().filter_map(ZSeries::precision).min();
    let mut verified_through = None;
    let mut failure = None;
    let mut s = first_order;
    while limit.is_none_or(|p| s < p) && s < check_order as i32 + 64 {
        let mut bad = None;
        for (j, d) in diffs.iter().enumerate() {
            match d.coeff(s) {
                Some(c) if c.is_zero() => {}
                Some(c) => {
                    bad = Some((j, s, c.to_string()));
                    break;
                }
                None => unreachable!("order below precision"),
            }
        }
        if bad.is_some() {
            failure = bad;
            break;
        }
        verified_through = Some(s);
        if limit.is_none() && s >= check_order as i32 {
            break;
        }
        s += 1;
    }
    let nonnegative_orders = verified_through.map_or(0, |v| (v + 1).max(0) as usize);
    Rank3Report {
        passed: failure.is_none() && nonnegative_orders >= check_order,
        first_order,
        verified_through,
        nonnegative_orders,
        failure,
    }
}

/// Errors unless `s` is known at order `e`.
pub(crate) fn known_coeff(s: &ZSeries, e: i32) -> Result<XLaurent> {
    s.coeff(e).ok_or(Error::TruncationTooShort { needed: e, available: s.precision().unwrap_or(i32::MAX) })
}
