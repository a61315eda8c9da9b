//! Isomorphisms of generic data, canonical group coordinates and the
//! classification of CY data of global dimension at most 4.
//!
//! An isomorphism `(M, σ, α)` sends `y_j ↦ ∏_m y'_m^{M[m][j]}`, so in exponent
//! coordinates `g ↦ M g`. It must satisfy
//! 1. `M g_i = g'_{σ(i)}`,
//! 2. `χ_i = χ'_{σ(i)} ∘ M`,
//! 3. `λ_ij = α_i α_j λ'_{σ(i)σ(j)}` when `σ(i) < σ(j)` and
//!    `λ_ij = -α_i α_j χ_j(g_i) λ'_{σ(j)σ(i)}` otherwise.

mod canonical;
mod classify;

use std::collections::BTreeSet;

use num_integer::Integer;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::datum::{DatumError, GenericDatum, RawDatum};
use crate::scalars::{
    determinant, evaluate, mat_mul, solve_integer_affine, solve_multiplicative_system, unimodular_inverse,
    Monomial, Param, ScalarError,
};

pub use canonical::canonicalize_group_data;
pub use classify::{
    classify, classify_raw, representative, Classification, ClassificationLabel, LabelParam, LabelValue,
};

/// Default coefficient bound for the kernel-lattice search.
pub const DEFAULT_SEARCH_BOUND: i64 = 8;

/// Candidate budget per permutation; exceeding it makes the search inconclusive.
const CANDIDATE_BUDGET: u64 = 4_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum IsomorphismError {
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("no matching case: {0}")]
    NoMatchingCase(String),
    #[error("linking cannot be transported: {0}")]
    Linking(String),
    #[error("not unimodular: determinant {0}")]
    NotUnimodular(i128),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Datum(#[from] DatumError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatumIsomorphism {
    /// `s × s`, determinant `±1`; column `j` is the image of `y_j`.
    pub matrix: Vec<Vec<i64>>,
    /// 0-based permutation of the vertices.
    pub sigma: Vec<usize>,
    pub alpha: Vec<Monomial>,
}

impl DatumIsomorphism {
    pub fn identity(s: usize, theta: usize) -> DatumIsomorphism {
        DatumIsomorphism {
            matrix: identity_matrix(s),
            sigma: (0..theta).collect(),
            alpha: vec![Monomial::one(); theta],
        }
    }

    /// The isomorphism in the opposite direction.
    pub fn inverse(&self) -> Result<DatumIsomorphism, IsomorphismError> {
        let matrix = unimodular_inverse(&self.matrix)?
            .ok_or_else(|| IsomorphismError::NotUnimodular(determinant(&self.matrix).unwrap_or(0)))?;
        let mut sigma = vec![0; self.sigma.len()];
        let mut alpha = vec![Monomial::one(); self.sigma.len()];
        for (i, &si) in self.sigma.iter().enumerate() {
            sigma[si] = i;
            alpha[si] = self.alpha[i].inv();
        }
        Ok(DatumIsomorphism { matrix, sigma, alpha })
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &DatumIsomorphism) -> Result<DatumIsomorphism, IsomorphismError> {
        let matrix = mat_mul(&other.matrix, &self.matrix)?;
        let sigma = self.sigma.iter().map(|&s| other.sigma[s]).collect();
        let alpha = self.sigma.iter().enumerate().map(|(i, &s)| &self.alpha[i] * &other.alpha[s]).collect();
        Ok(DatumIsomorphism { matrix, sigma, alpha })
    }

    /// Checks the three defining conditions from `source` to `target`.
    pub fn verify(&self, source: &GenericDatum, target: &GenericDatum) -> bool {
        let (s, theta) = (source.group_rank(), source.theta());
        if target.group_rank() != s || target.theta() != theta || self.sigma.len() != theta {
            return false;
        }
        if determinant(&self.matrix).map(|d| d.abs() != 1).unwrap_or(true) {
            return false;
        }
        let sig = &self.sigma;
        for i in 0..theta {
            for j in 0..theta {
                if source.cartan().entry(i, j) != target.cartan().entry(sig[i], sig[j]) {
                    return false;
                }
            }
            if apply(&self.matrix, source.g(i)) != target.g(sig[i]) {
                return false;
            }
            for j in 0..s {
                let column: Vec<i64> = (0..s).map(|m| self.matrix[m][j]).collect();
                if source.chi(i)[j] != evaluate(target.chi(sig[i]), &column) {
                    return false;
                }
            }
        }
        for i in 0..theta {
            for j in i + 1..theta {
                if source.cartan().connected(i, j) {
                    continue;
                }
                let lhs = source.linked(i, j);
                let rhs_linked = target.linked(sig[i], sig[j]);
                if lhs != rhs_linked {
                    return false;
                }
                if lhs && linking_scalar(source, sig, i, j) != &self.alpha[i] * &self.alpha[j] {
                    return false;
                }
            }
        }
        true
    }
}

/// Outcome of the isomorphism search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "lowercase")]
pub enum IsomorphismOutcome {
    Found { witness: DatumIsomorphism },
    None,
    /// The solution lattice is infinite and no unimodular point was found within `bound`.
    Inconclusive { bound: i64 },
}

pub(crate) fn identity_matrix(n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

pub(crate) fn apply(m: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

/// The value `α_i α_j` must take for a linked pair `i < j`.
fn linking_scalar(source: &GenericDatum, sigma: &[usize], i: usize, j: usize) -> Monomial {
    if sigma[i] < sigma[j] {
        Monomial::one()
    } else {
        // 1 = -α_i α_j χ_j(g_i)
        (Monomial::minus_one() * source.braiding(i, j)).inv()
    }
}

/// Solves condition 3 for `α`, given that the zero patterns already agree.
fn solve_alpha(source: &GenericDatum, sigma: &[usize]) -> Result<Option<Vec<Monomial>>, ScalarError> {
    let theta = source.theta();
    let mut rows = Vec::new();
    let mut values = Vec::new();
    for (i, j) in source.linking() {
        let mut row = vec![0i64; theta];
        row[i] = 1;
        row[j] = 1;
        rows.push(row);
        values.push(linking_scalar(source, sigma, i, j));
    }
    if rows.is_empty() {
        return Ok(Some(vec![Monomial::one(); theta]));
    }
    Ok(solve_multiplicative_system(&rows, &values)?.ok())
}

fn linking_pattern_matches(source: &GenericDatum, target: &GenericDatum, sigma: &[usize]) -> bool {
    let theta = source.theta();
    (0..theta).all(|i| {
        (i + 1..theta).all(|j| source.cartan().connected(i, j) || source.linked(i, j) == target.linked(sigma[i], sigma[j]))
    })
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in permutations(n - 1) {
        for pos in 0..=rest.len() {
            let mut p = rest.clone();
            p.insert(pos, n - 1);
            out.push(p);
        }
    }
    out.sort();
    out
}

/// Integer system in `(M, slack)` for conditions 1 and 2 under a fixed `σ`.
fn group_system(source: &GenericDatum, target: &GenericDatum, sigma: &[usize]) -> (Vec<Vec<i64>>, Vec<Rational64>) {
    let (s, theta) = (source.group_rank(), source.theta());
    let var = |m: usize, j: usize| m * s + j;
    let width = s * s + theta * s;
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for i in 0..theta {
        // M g_i = g'_{σ(i)}
        for m in 0..s {
            let mut row = vec![0i64; width];
            for j in 0..s {
                row[var(m, j)] = source.g(i)[j];
            }
            rows.push(row);
            rhs.push(Rational64::from_integer(target.g(sigma[i])[m]));
        }
        // χ_i(y_j) = ∏_m χ'_{σ(i)}(y'_m)^{M[m][j]}
        let chi_t = target.chi(sigma[i]);
        let params: BTreeSet<Param> =
            source.chi(i).iter().chain(chi_t).flat_map(|c| c.params().collect::<Vec<_>>()).collect();
        for j in 0..s {
            for &p in &params {
                let coeffs: Vec<Rational64> = chi_t.iter().map(|c| c.exponent(p)).collect();
                let value = source.chi(i)[j].exponent(p);
                let l = coeffs.iter().chain(std::iter::once(&value)).fold(1i64, |acc, x| acc.lcm(x.denom()));
                let mut row = vec![0i64; width];
                for m in 0..s {
                    row[var(m, j)] = (coeffs[m] * l).to_integer();
                }
                rows.push(row);
                rhs.push(value * l);
            }
            let mut row = vec![0i64; width];
            for m in 0..s {
                row[var(m, j)] = i64::from(chi_t[m].is_negative());
            }
            row[s * s + i * s + j] = -2;
            rows.push(row);
            rhs.push(Rational64::from_integer(i64::from(source.chi(i)[j].is_negative())));
        }
    }
    (rows, rhs)
}

/// Coefficient vectors in `[-bound, bound]^d`, ordered by max-norm then lexicographically.
fn shells(d: usize, bound: i64) -> impl Iterator<Item = Vec<i64>> {
    (0..=bound).flat_map(move |r| {
        let side = (2 * r + 1) as u64;
        let count = side.checked_pow(d as u32).unwrap_or(u64::MAX);
        (0..count).filter_map(move |mut code| {
            let mut c = vec![0i64; d];
            for x in c.iter_mut() {
                *x = (code % side) as i64 - r;
                code /= side;
            }
            (c.iter().any(|x| x.abs() == r) || (d == 0 && r == 0)).then_some(c)
        })
    })
}

/// Searches for an isomorphism from `source` to `target`.
pub fn find_isomorphism(
    source: &GenericDatum,
    target: &GenericDatum,
    bound: i64,
) -> Result<IsomorphismOutcome, IsomorphismError> {
    let (s, theta) = (source.group_rank(), source.theta());
    if target.theta() != theta || target.group_rank() != s {
        return Ok(IsomorphismOutcome::None);
    }
    let mut inconclusive = false;
    for sigma in permutations(theta) {
        let cartan_ok = (0..theta)
            .all(|i| (0..theta).all(|j| source.cartan().entry(i, j) == target.cartan().entry(sigma[i], sigma[j])));
        if !cartan_ok || !linking_pattern_matches(source, target, &sigma) {
            continue;
        }
        let Some(alpha) = solve_alpha(source, &sigma)? else { continue };
        let (rows, rhs) = group_system(source, target, &sigma);
        let Some(solution) = solve_integer_affine(&rows, &rhs)? else { continue };
        let d = solution.kernel.len();
        let total = (2 * bound as u64 + 1).checked_pow(d as u32).unwrap_or(u64::MAX);
        let limit = total.min(CANDIDATE_BUDGET);
        for coeffs in shells(d, bound).take(limit as usize) {
            let point = solution.point(&coeffs)?;
            let matrix: Vec<Vec<i64>> = (0..s).map(|m| point[m * s..(m + 1) * s].to_vec()).collect();
            if determinant(&matrix)?.abs() == 1 {
                let witness = DatumIsomorphism { matrix, sigma, alpha };
                debug_assert!(witness.verify(source, target));
                return Ok(IsomorphismOutcome::Found { witness });
            }
        }
        if d > 0 {
            inconclusive = true;
        }
    }
    Ok(if inconclusive { IsomorphismOutcome::Inconclusive { bound } } else { IsomorphismOutcome::None })
}

/// Image of a datum under a group automorphism `M` and a relabelling `σ`.
///
/// `α` is solved from condition 3 so that the target keeps linking values in
/// `{0, 1}`; this fails only when those equations are inconsistent.
pub fn transport(
    datum: &GenericDatum,
    matrix: &[Vec<i64>],
    sigma: &[usize],
) -> Result<(GenericDatum, DatumIsomorphism), IsomorphismError> {
    let (s, theta) = (datum.group_rank(), datum.theta());
    if matrix.len() != s || matrix.iter().any(|r| r.len() != s) || sigma.len() != theta {
        return Err(ScalarError::Dimension("transport shape mismatch".into()).into());
    }
    let mut seen = vec![false; theta];
    for &x in sigma {
        if x >= theta || std::mem::replace(&mut seen[x], true) {
            return Err(IsomorphismError::Unsupported("sigma is not a permutation".into()));
        }
    }
    let inverse = unimodular_inverse(matrix)?
        .ok_or_else(|| IsomorphismError::NotUnimodular(determinant(matrix).unwrap_or(0)))?;
    let mut raw = RawDatum {
        group_rank: s,
        cartan: datum.cartan().permuted(sigma).entries().to_vec(),
        g: vec![Vec::new(); theta],
        chi: vec![Vec::new(); theta],
        linking: Vec::new(),
    };
    for i in 0..theta {
        raw.g[sigma[i]] = apply(matrix, datum.g(i));
        raw.chi[sigma[i]] =
            (0..s).map(|m| (0..s).map(|h| datum.chi(i)[h].pow(inverse[h][m])).product()).collect();
    }
    raw.linking = datum.linking().map(|(i, j)| (sigma[i].min(sigma[j]), sigma[i].max(sigma[j]))).collect();
    let alpha = solve_alpha(datum, sigma)?.ok_or_else(|| {
        IsomorphismError::Linking("the α equations have no monomial solution".into())
    })?;
    let image = GenericDatum::new(raw)?;
    let iso = DatumIsomorphism { matrix: matrix.to_vec(), sigma: sigma.to_vec(), alpha };
    debug_assert!(iso.verify(datum, &image));
    Ok((image, iso))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datum::tests::{a2xa1_pointed, raw, uqsl2};

    fn case_one(k: i64, q1: &str, q2: &str) -> GenericDatum {
        let inv = |t: &str| t.parse::<Monomial>().unwrap().inv().to_string();
        GenericDatum::new(raw(2, "A1xA1", &[&[k, 0], &[k, 0]], &[&[q1, q2], &[&inv(q1), &inv(q2)]], &[])).unwrap()
    }

    #[test]
    fn identity_is_found() {
        for r in [uqsl2(), a2xa1_pointed()] {
            let d = GenericDatum::new(r).unwrap();
            match find_isomorphism(&d, &d, DEFAULT_SEARCH_BOUND).unwrap() {
                IsomorphismOutcome::Found { witness } => assert!(witness.verify(&d, &d)),
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn case_one_shear() {
        let a = case_one(2, "q", "t");
        let b = case_one(2, "q", "q^2*t");
        let IsomorphismOutcome::Found { witness } = find_isomorphism(&a, &b, DEFAULT_SEARCH_BOUND).unwrap() else {
            panic!()
        };
        assert!(witness.verify(&a, &b));
        assert!(witness.inverse().unwrap().verify(&b, &a));
        assert_eq!(find_isomorphism(&a, &case_one(3, "q", "t"), 8).unwrap(), IsomorphismOutcome::None);
    }

    #[test]
    fn transport_round_trip() {
        let d = GenericDatum::new(uqsl2()).unwrap();
        let (image, iso) = transport(&d, &[vec![-1]], &[1, 0]).unwrap();
        assert!(iso.verify(&d, &image));
        let back = iso.inverse().unwrap();
        assert!(back.verify(&image, &d));
        assert!(iso.then(&back).unwrap().verify(&d, &d));
    }

    #[test]
    fn shells_cover_the_box() {
        let all: Vec<Vec<i64>> = shells(2, 2).collect();
        assert_eq!(all.len(), 25);
        assert_eq!(all[0], vec![0, 0]);
        assert_eq!(shells(0, 3).count(), 1);
    }
}
