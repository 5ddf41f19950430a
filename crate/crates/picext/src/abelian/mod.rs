//! Exact integer linear algebra and the category of finitely generated
//! abelian groups: presentations, maps, kernels, cokernels, Hom groups.

pub mod group;
pub mod map;
pub mod matrix;
pub mod smith;

pub use group::{CanonicalForm, FgAbGroup, GroupElement};
pub use map::{
    count_homs_brute, descend_through, factor_through, hom_group, quotient_by, subgroup_generated,
    GroupMap, HomGroup, Solver,
};
pub use matrix::IntMatrix;
pub use smith::{column_hnf, smith_normal_form, SmithDecomposition};

use crate::error::Result;
use num_bigint::BigInt;

/// Solve A x = b over the integers.
pub fn solve_integer(a: &IntMatrix, b: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    if b.len() != a.rows() {
        return Err(crate::error::Error::Argument(format!(
            "right-hand side has length {}, expected {}",
            b.len(),
            a.rows()
        )));
    }
    let snf = smith_normal_form(a);
    Ok(smith::solve(&snf, b))
}
