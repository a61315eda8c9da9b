//! Unimodular normal form of the group-likes for `θ ≤ 2`, `s ≤ 3`.

use crate::datum::GenericDatum;
use crate::scalars::{gcd_reducer, mat_mul};

use super::{apply, identity_matrix, transport, DatumIsomorphism, IsomorphismError};

/// Moves `g_1` to `y_1^k` with `k > 0` and, for two vertices, `g_2` to
/// `y_1^{l_1} y_2^{l_2}` with `l_2 ≥ 0` and `0 ≤ l_1 < l_2` when `l_2 > 0`.
///
/// Returns the transformed datum and the isomorphism onto it (`σ = id`).
pub fn canonicalize_group_data(datum: &GenericDatum) -> Result<(GenericDatum, DatumIsomorphism), IsomorphismError> {
    let (s, theta) = (datum.group_rank(), datum.theta());
    if s > 3 || theta > 2 {
        return Err(IsomorphismError::Unsupported(format!(
            "canonical forms need group rank at most 3 and at most 2 vertices (got s={s}, θ={theta})"
        )));
    }
    let (mut m, _) = gcd_reducer(datum.g(0))?;
    if theta == 2 && s >= 2 {
        let g2 = apply(&m, datum.g(1));
        let (tail, l) = gcd_reducer(&g2[1..])?;
        let mut block = identity_matrix(s);
        for (i, row) in tail.iter().enumerate() {
            block[i + 1][1..].copy_from_slice(row);
        }
        m = mat_mul(&block, &m)?;
        if l > 0 {
            let l1 = apply(&m, datum.g(1))[0];
            let mut shear = identity_matrix(s);
            shear[0][1] = -l1.div_euclid(l);
            m = mat_mul(&shear, &m)?;
        }
    }
    let sigma: Vec<usize> = (0..theta).collect();
    transport(datum, &m, &sigma)
}
