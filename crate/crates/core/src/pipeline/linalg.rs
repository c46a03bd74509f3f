//! Exact elimination: sparse affine systems over `Q`, and fraction-free
//! column dependence over `Q[eps]`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{EpsPoly, Rational};

/// A sparse row `sum a_j t_j`.
pub type SparseRow = BTreeMap<usize, Rational>;

/// Incremental row echelon form of `sum a_j t_j = rhs` over `Q`.
///
/// Each stored row is normalized so its pivot entry is 1 and every other entry
/// lies in a later column. Pivots are the first nonzero column of the reduced
/// row, so the result depends only on column order and row order.
#[derive(Clone, Debug, Default)]
pub struct AffineEchelon {
    columns: usize,
    pivots: BTreeMap<usize, (SparseRow, Rational)>,
}

/// `particular + span(basis)` as dense vectors over `Q`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineSolution {
    pub particular: Vec<Rational>,
    pub basis: Vec<Vec<Rational>>,
    pub free_columns: Vec<usize>,
}

fn axpy(row: &mut SparseRow, c: &Rational, other: &SparseRow) {
    for (j, v) in other {
        let entry = row.entry(*j).or_insert_with(Rational::zero);
        *entry -= c * v;
        if entry.is_zero() {
            row.remove(j);
        }
    }
}

impl AffineEchelon {
    pub fn new(columns: usize) -> Self {
        Self { columns, pivots: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn columns(&self) -> usize {
        self.columns
    }

    /// Adds one equation. `Err(Inconsistent)` if it reduces to `0 = c != 0`;
    /// `label` names the equation in that message.
    pub fn push(&mut self, mut row: SparseRow, mut rhs: Rational, label: impl FnOnce() -> String) -> Result<()> {
        row.retain(|_, v| !v.is_zero());
        while let Some((&lead, _)) = row.iter().next() {
            let Some((prow, prhs)) = self.pivots.get(&lead) else {
                let inv = row[&lead].recip();
                for v in row.values_mut() {
                    *v *= &inv;
                }
                rhs *= &inv;
                self.pivots.insert(lead, (row, rhs));
                return Ok(());
            };
            let c = row[&lead].clone();
            axpy(&mut row, &c, prow);
            rhs -= &c * prhs;
        }
        if rhs.is_zero() {
            Ok(())
        } else {
            Err(Error::Inconsistent(format!("{} reduces to 0 = {}", label(), rhs)))
        }
    }

    /// Back-substitutes to reduced form and reads off the solution set.
    pub fn solve(mut self) -> AffineSolution {
        let keys: Vec<usize> = self.pivots.keys().rev().copied().collect();
        for (idx, &p) in keys.iter().enumerate() {
            let (prow, prhs) = self.pivots[&p].clone();
            // Earlier pivots (smaller columns) may reference column p.
            for &q in &keys[idx + 1..] {
                let (row, rhs) = self.pivots.get_mut(&q).expect("pivot");
                if let Some(c) = row.get(&p).cloned() {
                    axpy(row, &c, &prow);
                    *rhs -= &c * &prhs;
                }
            }
        }
        let n = self.columns;
        let free_columns: Vec<usize> = (0..n).filter(|j| !self.pivots.contains_key(j)).collect();
        let mut particular = vec![Rational::zero(); n];
        for (p, (_, rhs)) in &self.pivots {
            particular[*p] = rhs.clone();
        }
        let basis = free_columns
            .iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); n];
                v[f] = Rational::one();
                for (p, (row, _)) in &self.pivots {
                    if let Some(c) = row.get(&f) {
                        v[*p] = -c.clone();
                    }
                }
                v
            })
            .collect();
        AffineSolution { particular, basis, free_columns }
    }
}

/// Content (monic gcd) of a row of `Q[eps]` entries.
fn content(row: &[EpsPoly]) -> EpsPoly {
    row.iter().fold(EpsPoly::zero(), |g, c| if c.is_zero() { g } else { g.gcd(c) })
}

fn make_primitive(row: &mut [EpsPoly]) {
    let g = content(row);
    if g.is_zero() || g.is_one() {
        return;
    }
    for c in row.iter_mut() {
        *c = c.exact_div(&g).expect("content divides every entry");
    }
}

/// The first column of `rows` (dense, all of equal length) that depends on
/// the columns before it, over the fraction field `Q(eps)`.
///
/// Returns `(c, v)` with `v` a primitive vector in `Q[eps]^(c+1)` such that
/// `sum_j v_j col_j = 0` and `v_c != 0`; `None` if all columns are
/// independent. Elimination is fraction-free: rows are combined as
/// `p * r - a * pivot` and reduced to their primitive part, so no element of
/// `Q[eps]` is ever inverted.
pub fn first_dependent_column(rows: &[Vec<EpsPoly>]) -> Option<(usize, Vec<EpsPoly>)> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut work: Vec<Vec<EpsPoly>> = rows.iter().filter(|r| r.iter().any(|c| !c.is_zero())).cloned().collect();
    // pivot_rows[k] = (column, row) in fully reduced form over the pivots so far
    let mut pivot_rows: Vec<(usize, Vec<EpsPoly>)> = Vec::new();
    for col in 0..ncols {
        let Some(pos) = work.iter().position(|r| !r[col].is_zero()) else {
            return Some((col, kernel_vector(&pivot_rows, col)));
        };
        let prow = work.remove(pos);
        let p = prow[col].clone();
        let eliminate = |r: &mut Vec<EpsPoly>| {
            let a = r[col].clone();
            if a.is_zero() {
                return;
            }
            for (x, y) in r.iter_mut().zip(&prow) {
                *x = &(&p * x) - &(&a * y);
            }
            make_primitive(r);
        };
        for r in work.iter_mut() {
            eliminate(r);
        }
        for (_, r) in pivot_rows.iter_mut() {
            eliminate(r);
        }
        work.retain(|r| r.iter().any(|c| !c.is_zero()));
        pivot_rows.push((col, prow));
    }
    None
}

/// Kernel vector for dependent column `col` given reduced pivot rows, where
/// each pivot row is zero in every other pivot column.
fn kernel_vector(pivot_rows: &[(usize, Vec<EpsPoly>)], col: usize) -> Vec<EpsPoly> {
    // v_col = L, v_pk = -m_k L / d_k with L = lcm of the pivots d_k.
    let mut l = EpsPoly::one();
    for (pc, r) in pivot_rows {
        let d = &r[*pc];
        let g = l.gcd(d);
        l = (&l * d).exact_div(&g).expect("gcd divides");
    }
    let mut v = vec![EpsPoly::zero(); col + 1];
    v[col] = l.clone();
    for (pc, r) in pivot_rows {
        let scale = l.exact_div(&r[*pc]).expect("pivot divides lcm");
        v[*pc] = -&(&r[col] * &scale);
    }
    make_primitive(&mut v);
    v
}
