//! Global dimension, integral character, Nakayama automorphisms and the
//! Calabi-Yau verdicts for `U(D, λ)` and for the Nichols algebra `B(V)`.

use num_integer::Integer;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::cartan::RootSystem;
use crate::datum::GenericDatum;
use crate::scalars::{evaluate, solve_integer_affine, ExponentVector, Monomial, Param};

/// An automorphism scaling every generator: `x_k ↦ c_k x_k`, `y_h ↦ e_h y_h`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagonalAutomorphism {
    pub x_scalars: Vec<Monomial>,
    pub y_scalars: Vec<Monomial>,
}

impl DiagonalAutomorphism {
    pub fn is_identity(&self) -> bool {
        self.x_scalars.iter().chain(&self.y_scalars).all(Monomial::is_one)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algebra {
    Pointed,
    Nichols,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyReport {
    pub algebra: Algebra,
    pub dimension: usize,
    pub is_cy: bool,
    /// `ξ(y_1), …, ξ(y_s)`; only for the pointed algebra.
    pub integral_character: Option<Vec<Monomial>>,
    pub nakayama: DiagonalAutomorphism,
    /// `z` with `S² = Ad(y^z)`, when it exists.
    pub conjugator: Option<ExponentVector>,
    pub failures: Vec<String>,
    pub dualizing_shift: usize,
}

impl CyReport {
    /// `_ψ A[p+s]` or `_φ R[p]`.
    pub fn dualizing_complex(&self) -> String {
        match self.algebra {
            Algebra::Pointed => format!("_ψ A[{}]", self.dualizing_shift),
            Algebra::Nichols => format!("_φ R[{}]", self.dualizing_shift),
        }
    }
}

/// `p + s`.
pub fn gldim(datum: &GenericDatum, rs: &RootSystem) -> usize {
    rs.p() + datum.group_rank()
}

/// `ξ(y_h) = ∏_t χ_{β_t}(y_h)`.
pub fn integral_character(datum: &GenericDatum, rs: &RootSystem) -> Vec<Monomial> {
    let mut total = vec![0i64; datum.theta()];
    for root in rs.roots() {
        total.iter_mut().zip(root).for_each(|(t, m)| *t += m);
    }
    datum.chi_of(&total)
}

/// `ψ(x_k) = ∏_{t ≠ j_k} χ_{β_t}(g_k) x_k` and `ψ(y_h) = ξ(y_h) y_h`.
pub fn nakayama_pointed(datum: &GenericDatum, rs: &RootSystem) -> DiagonalAutomorphism {
    let x_scalars = (0..datum.theta())
        .map(|k| {
            let jk = rs.simple_position(k);
            (0..rs.p())
                .filter(|&t| t != jk)
                .map(|t| evaluate(&datum.chi_of(rs.root(t)), datum.g(k)))
                .product()
        })
        .collect();
    DiagonalAutomorphism { x_scalars, y_scalars: integral_character(datum, rs) }
}

/// `φ(x_k) = ∏_{t < j_k} χ_k(g_{β_t})^{-1} · ∏_{t > j_k} χ_{β_t}(g_k) x_k`.
pub fn nakayama_nichols(datum: &GenericDatum, rs: &RootSystem) -> DiagonalAutomorphism {
    let x_scalars = (0..datum.theta())
        .map(|k| {
            let jk = rs.simple_position(k);
            let before: Monomial = (0..jk).map(|t| evaluate(datum.chi(k), &datum.g_of(rs.root(t)))).product();
            let after: Monomial =
                (jk + 1..rs.p()).map(|t| evaluate(&datum.chi_of(rs.root(t)), datum.g(k))).product();
            &after / &before
        })
        .collect();
    DiagonalAutomorphism { x_scalars, y_scalars: vec![Monomial::one(); datum.group_rank()] }
}

/// Finds `z ∈ Z^s` with `χ_k(y^z) = χ_k(g_k)^{-1}` for all `k`, i.e. conjugation
/// by `y^z` realises the squared antipode.
pub fn s2_inner(datum: &GenericDatum) -> Option<ExponentVector> {
    let (s, theta) = (datum.group_rank(), datum.theta());
    let targets: Vec<Monomial> = (0..theta).map(|k| datum.braiding(k, k).inv()).collect();
    let params: std::collections::BTreeSet<Param> = (0..theta)
        .flat_map(|k| datum.chi(k).iter().chain(std::iter::once(&targets[k])).flat_map(|m| m.params()).collect::<Vec<_>>())
        .collect();
    // unknowns: z_1..z_s, then one slack per k for the sign equations
    let width = s + theta;
    let mut rows: Vec<Vec<i64>> = Vec::new();
    let mut rhs: Vec<Rational64> = Vec::new();
    for k in 0..theta {
        for &p in &params {
            let coeffs: Vec<Rational64> = datum.chi(k).iter().map(|m| m.exponent(p)).collect();
            let target = targets[k].exponent(p);
            let l = coeffs.iter().chain(std::iter::once(&target)).fold(1i64, |acc, x| acc.lcm(x.denom()));
            let mut row: Vec<i64> = coeffs.iter().map(|c| (c * l).to_integer()).collect();
            row.resize(width, 0);
            rows.push(row);
            rhs.push(target * l);
        }
        let mut row: Vec<i64> = datum.chi(k).iter().map(|m| i64::from(m.is_negative())).collect();
        row.resize(width, 0);
        row[s + k] = -2;
        rows.push(row);
        rhs.push(Rational64::from_integer(i64::from(targets[k].is_negative())));
    }
    let solution = solve_integer_affine(&rows, &rhs).ok()??;
    let z = solution.particular[..s].to_vec();
    debug_assert!((0..theta).all(|k| evaluate(datum.chi(k), &z) == targets[k]));
    Some(z)
}

fn format_scalars(prefix: &str, values: &[Monomial]) -> Vec<String> {
    values
        .iter()
        .enumerate()
        .filter(|(_, v)| !v.is_one())
        .map(|(i, v)| format!("{prefix}{}) = {v}", i + 1))
        .collect()
}

/// CY decision for `U(D, λ)`: `ξ = ε` and `S²` inner.
pub fn is_cy_pointed(datum: &GenericDatum, rs: &RootSystem) -> CyReport {
    let nakayama = nakayama_pointed(datum, rs);
    let xi = nakayama.y_scalars.clone();
    let conjugator = s2_inner(datum);
    let mut failures: Vec<String> =
        format_scalars("integral character is not trivial: ξ(y_", &xi);
    if conjugator.is_none() {
        failures.push("squared antipode is not inner".into());
    }
    CyReport {
        algebra: Algebra::Pointed,
        dimension: gldim(datum, rs),
        is_cy: failures.is_empty(),
        integral_character: Some(xi),
        nakayama,
        conjugator,
        failures,
        dualizing_shift: gldim(datum, rs),
    }
}

/// The report for a bare group algebra `kZ^s`, which is CY of dimension `s`.
pub fn group_algebra_report(s: usize) -> CyReport {
    CyReport {
        algebra: Algebra::Pointed,
        dimension: s,
        is_cy: true,
        integral_character: Some(vec![Monomial::one(); s]),
        nakayama: DiagonalAutomorphism { x_scalars: Vec::new(), y_scalars: vec![Monomial::one(); s] },
        conjugator: Some(vec![0; s]),
        failures: Vec::new(),
        dualizing_shift: s,
    }
}

/// CY decision for `B(V)`: `φ` is the identity.
pub fn is_cy_nichols(datum: &GenericDatum, rs: &RootSystem) -> CyReport {
    let nakayama = nakayama_nichols(datum, rs);
    let failures = format_scalars("Nakayama automorphism is not trivial: φ(x_", &nakayama.x_scalars);
    CyReport {
        algebra: Algebra::Nichols,
        dimension: rs.p(),
        is_cy: failures.is_empty(),
        integral_character: None,
        nakayama,
        conjugator: None,
        failures,
        dualizing_shift: rs.p(),
    }
}

/// The two formulas for the `x_k`-scalars of the Nakayama automorphisms agree.
pub fn coeff_identity_check(datum: &GenericDatum, rs: &RootSystem) -> bool {
    nakayama_pointed(datum, rs).x_scalars == nakayama_nichols(datum, rs).x_scalars
}

/// How the two CY verdicts constrain each other on one datum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationCheck {
    pub pointed_cy: bool,
    pub nichols_cy: bool,
    /// When `U(D, λ)` is CY: `φ(x_k) = χ_k(g_k)^{-1} x_k` for all `k`.
    pub nichols_twist_is_inverse_braiding: Option<bool>,
    /// When `B(V)` is CY: `ψ` fixes every `x_k`, scales `y_h` by `ξ(y_h)`, and `ξ ≠ ε`.
    pub pointed_twist_is_winding: Option<bool>,
    pub mutually_exclusive: bool,
}

impl RelationCheck {
    pub fn holds(&self) -> bool {
        self.mutually_exclusive
            && self.nichols_twist_is_inverse_braiding != Some(false)
            && self.pointed_twist_is_winding != Some(false)
    }
}

pub fn cy_relation_check(datum: &GenericDatum, rs: &RootSystem) -> RelationCheck {
    let pointed = is_cy_pointed(datum, rs);
    let nichols = is_cy_nichols(datum, rs);
    let inverse_braiding = pointed.is_cy.then(|| {
        (0..datum.theta()).all(|k| nichols.nakayama.x_scalars[k] == datum.braiding(k, k).inv())
    });
    let winding = nichols.is_cy.then(|| {
        let xi = integral_character(datum, rs);
        pointed.nakayama.x_scalars.iter().all(Monomial::is_one)
            && pointed.nakayama.y_scalars == xi
            && !xi.iter().all(Monomial::is_one)
    });
    RelationCheck {
        pointed_cy: pointed.is_cy,
        nichols_cy: nichols.is_cy,
        nichols_twist_is_inverse_braiding: inverse_braiding,
        pointed_twist_is_winding: winding,
        mutually_exclusive: !(pointed.is_cy && nichols.is_cy),
    }
}
