//! Monic operators of a given order commuting with a fixed operator.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use num_traits::Zero;

use crate::diffop::DiffOp;
use crate::error::{Error, Result};
use crate::exact::{EpsPoly, Rational, XLaurent};

use super::linalg::{AffineEchelon, SparseRow};

/// Monomial coordinates `(D order, x exponent, eps exponent) -> c`.
type Coordinates = BTreeMap<(usize, i32, u32), Rational>;

/// Ansatz bounds for [`solve_commuting`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ansatz {
    pub target_order: usize,
    pub window: RangeInclusive<i32>,
    /// Largest (even) `eps` exponent allowed in a coefficient.
    pub eps_degree: u32,
}

impl Ansatz {
    pub fn new(target_order: usize, window: RangeInclusive<i32>, eps_degree: u32) -> Self {
        Self { target_order, window, eps_degree }
    }

    /// Unknown monomials `eps^e x^n D^k`, ordered by `k`, then `n`, then `e`.
    fn unknowns(&self) -> Vec<(usize, i32, u32)> {
        let mut out = Vec::new();
        for k in 0..self.target_order {
            for n in self.window.clone() {
                for e in (0..=self.eps_degree).step_by(2) {
                    out.push((k, n, e));
                }
            }
        }
        out
    }
}

/// `particular + sum t_i basis_i`, all members commuting with the input.
#[derive(Clone, Debug)]
pub struct AffineSolutionSet {
    pub particular: DiffOp<XLaurent>,
    /// A basis over `Q` of the homogeneous solutions.
    pub homogeneous_basis: Vec<DiffOp<XLaurent>>,
    /// Members of the basis whose `eps = 0` parts are independent; they
    /// generate the homogeneous solutions over `Q[eps]`.
    pub generators: Vec<DiffOp<XLaurent>>,
    pub warnings: Vec<String>,
}

impl AffineSolutionSet {
    /// Rank over `Q[eps]`: the number of generators.
    pub fn dimension(&self) -> usize {
        self.generators.len()
    }

    /// Dimension over `Q`.
    pub fn rational_dimension(&self) -> usize {
        self.homogeneous_basis.len()
    }

    /// `particular + sum t_i basis_i`.
    pub fn member(&self, t: &[Rational]) -> DiffOp<XLaurent> {
        self.homogeneous_basis
            .iter()
            .zip(t)
            .fold(self.particular.clone(), |acc, (b, c)| acc.add(&b.scale(c)))
    }

    /// Whether `op - particular` lies in the `Q`-span of the basis.
    pub fn contains(&self, op: &DiffOp<XLaurent>) -> bool {
        let diff = op.sub(&self.particular);
        in_span(&self.homogeneous_basis, &diff)
    }
}

/// Monomial coordinates `(k, n, e) -> c` of an operator.
fn coordinates(op: &DiffOp<XLaurent>) -> Coordinates {
    let mut out = BTreeMap::new();
    for (k, c) in op.coeffs().iter().enumerate() {
        for (n, e, r) in c.monomials() {
            out.insert((k, n, e), r.clone());
        }
    }
    out
}

/// Whether `target` is a `Q`-combination of `basis`.
pub fn in_span(basis: &[DiffOp<XLaurent>], target: &DiffOp<XLaurent>) -> bool {
    let coords: Vec<_> = basis.iter().map(coordinates).collect();
    let t = coordinates(target);
    let mut keys: Vec<_> = coords.iter().flat_map(|c| c.keys().copied()).chain(t.keys().copied()).collect();
    keys.sort();
    keys.dedup();
    let mut e = AffineEchelon::new(basis.len());
    for key in keys {
        let row: SparseRow = coords
            .iter()
            .enumerate()
            .filter_map(|(i, c)| c.get(&key).map(|v| (i, v.clone())))
            .collect();
        let rhs = t.get(&key).cloned().unwrap_or_else(Rational::zero);
        if e.push(row, rhs, String::new).is_err() {
            return false;
        }
    }
    true
}

fn monomial_op(k: usize, n: i32, e: u32, c: &Rational) -> DiffOp<XLaurent> {
    let mut coeffs = vec![XLaurent::zero(); k + 1];
    coeffs[k] = XLaurent::monomial(EpsPoly::monomial(c.clone(), e), n);
    DiffOp::new(coeffs)
}

fn assemble(unknowns: &[(usize, i32, u32)], values: &[Rational], leading: Option<usize>) -> DiffOp<XLaurent> {
    let len = leading.map_or(0, |m| m + 1).max(unknowns.iter().map(|u| u.0 + 1).max().unwrap_or(0));
    let mut coeffs = vec![XLaurent::zero(); len];
    if let Some(m) = leading {
        coeffs[m] = XLaurent::one();
    }
    for ((k, n, e), v) in unknowns.iter().zip(values) {
        if !v.is_zero() {
            coeffs[*k].add_assign_ref(&XLaurent::term(v.clone(), *e, *n));
        }
    }
    DiffOp::new(coeffs)
}

/// All monic `B` of the ansatz shape with `[A, B] = 0`.
///
/// `[A, B]` is linear in the unknown monomial coefficients of `B`; each
/// monomial `eps^e x^n D^k` of the commutator gives one equation over `Q`.
/// Pivots are chosen by column order (`D` order, then `x`, then `eps`), so
/// the particular solution sets the trailing free coordinates to zero.
pub fn solve_commuting(a: &DiffOp<XLaurent>, ansatz: &Ansatz) -> Result<AffineSolutionSet> {
    let unknowns = ansatz.unknowns();
    let m = ansatz.target_order;
    let base = a.commutator(&DiffOp::d_pow(m));
    let mut rows: BTreeMap<(usize, i32, u32), SparseRow> = BTreeMap::new();
    let one = Rational::from_integer(1.into());
    // [A, eps^e M] = eps^e [A, M], so one commutator serves every eps power.
    let mut cache: Option<((usize, i32), Coordinates)> = None;
    for (idx, &(k, n, e)) in unknowns.iter().enumerate() {
        if cache.as_ref().is_none_or(|(kn, _)| *kn != (k, n)) {
            cache = Some(((k, n), coordinates(&a.commutator(&monomial_op(k, n, 0, &one)))));
        }
        let (_, w) = cache.as_ref().expect("filled");
        for (&(dk, dn, de), c) in w {
            rows.entry((dk, dn, de + e)).or_default().insert(idx, c.clone());
        }
    }
    let rhs_of = coordinates(&base);
    for key in rhs_of.keys() {
        rows.entry(*key).or_default();
    }
    let mut echelon = AffineEchelon::new(unknowns.len());
    // Highest D order first: the D^(k+8) equation leads with the D^k unknowns,
    // so rows enter nearly triangular and fill-in stays small.
    for (key, row) in rows.into_iter().rev() {
        let rhs = -rhs_of.get(&key).cloned().unwrap_or_else(Rational::zero);
        echelon.push(row, rhs, || format!("coefficient of eps^{} x^{} D^{}", key.2, key.1, key.0))?;
    }
    let sol = echelon.solve();
    let particular = assemble(&unknowns, &sol.particular, Some(m));
    let homogeneous_basis: Vec<_> = sol.basis.iter().map(|v| assemble(&unknowns, v, None)).collect();

    for (i, op) in std::iter::once(&particular).chain(&homogeneous_basis).enumerate() {
        let w = a.commutator(op);
        if !w.is_zero() {
            return Err(Error::Inconsistent(format!(
                "solution {i} fails substitution: W_{} = {}",
                w.order().unwrap_or(0),
                w.leading().map(|c| c.to_string()).unwrap_or_default()
            )));
        }
    }

    // The eps^0 part of an operator is its eps = 0 specialization.
    let zero = Rational::zero();
    let mut generators = Vec::new();
    let mut projected: Vec<DiffOp<XLaurent>> = Vec::new();
    for op in &homogeneous_basis {
        let p = op.specialize_eps(&zero);
        if !p.is_zero() && !in_span(&projected, &p) {
            projected.push(p);
            generators.push(op.clone());
        }
    }

    let mut warnings = Vec::new();
    let (lo, hi) = (*ansatz.window.start(), *ansatz.window.end());
    for op in std::iter::once(&particular).chain(&homogeneous_basis) {
        for ((k, n, _), _) in coordinates(op) {
            if (n == lo || n == hi) && k < m {
                let w = format!("solution touches the window edge at x^{n} in the D^{k} coefficient");
                if !warnings.contains(&w) {
                    warnings.push(w);
                }
            }
        }
    }

    Ok(AffineSolutionSet { particular, homogeneous_basis, generators, warnings })
}
