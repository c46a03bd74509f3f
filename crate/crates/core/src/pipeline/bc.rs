//! Discovery of the algebraic relation between two commuting operators.

use std::collections::BTreeMap;

use crate::diffop::{ensure_commuting, eval_poly_at_pair, DiffOp};
use crate::error::{Error, Result};
use crate::exact::{BivarPoly, EpsPoly, XLaurent};

use super::linalg::first_dependent_column;

/// A relation `Q(A, B) = 0` found by [`find_bc_relation`].
#[derive(Clone, Debug)]
pub struct BcRelation {
    pub poly: BivarPoly,
    /// Weight of the leading monomial, with `z` and `w` weighted by the
    /// operator orders.
    pub weight: u32,
    pub weight_z: u32,
    pub weight_w: u32,
}

impl BcRelation {
    pub fn display(&self) -> String {
        self.poly.display()
    }
}

/// Monomials `z^a w^b` of weight at most `bound`, in increasing order of
/// (weight, `w` exponent).
pub fn candidate_monomials(wz: u32, ww: u32, bound: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for b in 0..=bound / ww.max(1) {
        for a in 0..=(bound - ww * b) / wz.max(1) {
            out.push((a, b));
        }
    }
    out.sort_by_key(|&(a, b)| (wz * a + ww * b, b));
    out
}

/// The minimal relation `Q(A, B) = 0` with monomial weights `ord A`, `ord B`
/// and total weight at most `weight_bound`, or `None` if there is none.
///
/// The columns `A^a ∘ B^b` are ordered by (weight, `w` exponent); the first
/// column depending on earlier ones over `Q(eps)` determines `Q`, so `Q` has
/// the smallest possible leading monomial. `Q` is primitive over `Q[eps]`
/// with its leading coefficient normalized to be monic in `eps`; for a
/// constant leading coefficient that coefficient is 1.
pub fn find_bc_relation(a: &DiffOp<XLaurent>, b: &DiffOp<XLaurent>, weight_bound: u32) -> Result<Option<BcRelation>> {
    ensure_commuting(a, b)?;
    let (Some(wz), Some(ww)) = (a.order(), b.order()) else {
        return Err(Error::InvalidArgument("operators must be nonzero".into()));
    };
    let (wz, ww) = (wz as u32, ww as u32);
    if wz == 0 || ww == 0 {
        return Err(Error::InvalidArgument("operators must have positive order".into()));
    }
    let monos = candidate_monomials(wz, ww, weight_bound);
    let max_a = monos.iter().map(|m| m.0).max().unwrap_or(0);
    let max_b = monos.iter().map(|m| m.1).max().unwrap_or(0);
    let pa = a.powers(max_a);
    let pb = b.powers(max_b);
    let columns: Vec<DiffOp<XLaurent>> = monos
        .iter()
        .map(|&(i, j)| match (i, j) {
            (_, 0) => pa[i as usize].clone(),
            (0, _) => pb[j as usize].clone(),
            _ => pa[i as usize].compose(&pb[j as usize]),
        })
        .collect();

    let mut rows: BTreeMap<(usize, i32), Vec<EpsPoly>> = BTreeMap::new();
    for (c, op) in columns.iter().enumerate() {
        for (k, coeff) in op.coeffs().iter().enumerate() {
            for (n, p) in coeff.terms() {
                rows.entry((k, n)).or_insert_with(|| vec![EpsPoly::zero(); columns.len()])[c] = p.clone();
            }
        }
    }
    let rows: Vec<Vec<EpsPoly>> = rows.into_values().collect();
    let Some((col, v)) = first_dependent_column(&rows) else {
        return Ok(None);
    };

    let lead = v[col].leading_coeff().expect("nonzero").recip();
    let mut poly = BivarPoly::zero();
    for (c, coeff) in v.iter().enumerate() {
        if !coeff.is_zero() {
            let (i, j) = monos[c];
            poly.add_term(i, j, &coeff.scale(&lead));
        }
    }
    if !eval_poly_at_pair(&poly, a, b)?.is_zero() {
        return Err(Error::Inconsistent("relation fails re-evaluation".into()));
    }
    let (i, j) = monos[col];
    Ok(Some(BcRelation { poly, weight: wz * i + ww * j, weight_z: wz, weight_w: ww }))
}
