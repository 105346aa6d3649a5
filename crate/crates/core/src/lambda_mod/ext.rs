//! `Ext^1_Λ(Λ/(f), Λ)` at finite level.

use super::algebra::mult_matrix;
use super::group::CohomologyGroup;
use super::LambdaError;
use crate::modarith::linalg::coker_exponents;
use crate::modarith::TruncatedSeries;

/// From the resolution `0 -> Λ -f-> Λ -> Λ/(f) -> 0`, `Ext^1` is the
/// cokernel of the dual map `f^*` on `Hom(Λ_trunc, Z/p^N)`, i.e. of the
/// transposed multiplication matrix.
pub fn ext1_elementary(f: &TruncatedSeries) -> Result<CohomologyGroup, LambdaError> {
    if f.is_zero() {
        return Err(LambdaError::ZeroElement);
    }
    let dual = mult_matrix(f).transpose();
    Ok(CohomologyGroup::finite(
        f.ring().p(),
        coker_exponents(&dual),
    ))
}
