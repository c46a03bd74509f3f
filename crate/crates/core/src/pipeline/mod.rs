//! Constructive algorithms on top of the operator ring: recovering an
//! operator from its rank-3 reduction, solving for the commutant, and finding
//! the algebraic relation of a commuting pair.

mod bc;
mod commutant;
mod derive;
pub mod linalg;
mod rank3;

pub use bc::{candidate_monomials, find_bc_relation, BcRelation};
pub use commutant::{in_span, solve_commuting, AffineSolutionSet, Ansatz};
pub use derive::{derive_l1_coeffs, derive_operator, DerivedOperator};
pub use rank3::{power_remainders, third_order, verify_rank3, Rank3Report};
