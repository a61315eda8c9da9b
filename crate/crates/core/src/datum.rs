//! Generic data `(D, λ)`: validation, root-vector characters and PBW degrees.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::cartan::{CartanError, CartanMatrix, RootSystem};
use crate::scalars::{evaluate, ExponentVector, Monomial, Param};

/// One failed condition of a datum, with 1-based indices in its message.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    RootOfUnity { i: usize },
    QCompatibility { i: usize, j: usize },
    IllegalLinking { i: usize, j: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::RootOfUnity { i } => write!(f, "χ_i(g_i) is a root of unity at {}", i + 1),
            Violation::QCompatibility { i, j } => write!(f, "q-compatibility failed at ({},{})", i + 1, j + 1),
            Violation::IllegalLinking { i, j } => write!(f, "illegal linking at ({},{})", i + 1, j + 1),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DatumError {
    #[error(transparent)]
    Cartan(#[from] CartanError),
    #[error("dimension mismatch: {0}")]
    Shape(String),
    #[error("{}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("index out of range: {0}")]
    Index(String),
    #[error("negative PBW exponent at position {0}")]
    NegativeExponent(usize),
}

/// Unvalidated datum as read from a file. Indices are 0-based; `linking`
/// lists the pairs `i < j` with `λ_ij = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RawDatum {
    pub group_rank: usize,
    pub cartan: Vec<Vec<i64>>,
    pub g: Vec<ExponentVector>,
    pub chi: Vec<Vec<Monomial>>,
    pub linking: Vec<(usize, usize)>,
}

impl RawDatum {
    /// Parameters occurring in the characters, in name order.
    pub fn parameters(&self) -> BTreeSet<Param> {
        self.chi.iter().flatten().flat_map(|m| m.params()).collect()
    }
}

/// A validated generic datum of finite Cartan type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenericDatum {
    group_rank: usize,
    cartan: CartanMatrix,
    g: Vec<ExponentVector>,
    chi: Vec<Vec<Monomial>>,
    linking: BTreeSet<(usize, usize)>,
}

impl GenericDatum {
    /// Validates against the Cartan matrix carried by the raw datum.
    pub fn new(raw: RawDatum) -> Result<GenericDatum, DatumError> {
        let cartan = CartanMatrix::new(raw.cartan.clone())?;
        Self::validate(raw, cartan)
    }

    /// Validates with an already-built Cartan matrix (which must match `raw.cartan`).
    pub fn validate(raw: RawDatum, cartan: CartanMatrix) -> Result<GenericDatum, DatumError> {
        let theta = cartan.rank();
        let s = raw.group_rank;
        if cartan.entries() != raw.cartan.as_slice() {
            return Err(DatumError::Shape("Cartan matrix does not match the datum".into()));
        }
        if s == 0 {
            return Err(DatumError::Shape("group rank must be positive".into()));
        }
        if raw.g.len() != theta || raw.chi.len() != theta {
            return Err(DatumError::Shape(format!(
                "expected {theta} group-likes and characters, found {} and {}",
                raw.g.len(),
                raw.chi.len()
            )));
        }
        if let Some(i) = (0..theta).find(|&i| raw.g[i].len() != s || raw.chi[i].len() != s) {
            return Err(DatumError::Shape(format!("row {} does not have {s} entries", i + 1)));
        }

        let q = |i: usize, j: usize| evaluate(&raw.chi[j], &raw.g[i]);
        let mut violations = Vec::new();
        for i in 0..theta {
            if q(i, i).is_root_of_unity() {
                violations.push(Violation::RootOfUnity { i });
            }
        }
        // reference vertex with d = 1 in each component
        let reference: Vec<usize> = cartan
            .components()
            .iter()
            .map(|c| *c.iter().find(|&&i| cartan.symmetrizer()[i] == 1).expect("minimal symmetrizer has a 1"))
            .collect();
        for i in 0..theta {
            for j in i + 1..theta {
                let qq = q(i, j) * q(j, i);
                let ok = qq == q(i, i).pow(cartan.entry(i, j)) && qq == q(j, j).pow(cartan.entry(j, i));
                if !ok {
                    violations.push(Violation::QCompatibility { i, j });
                }
            }
            let r = reference[cartan.component_of(i)];
            if r != i && q(i, i) != q(r, r).pow(cartan.symmetrizer()[i]) {
                let (a, b) = (i.min(r), i.max(r));
                let v = Violation::QCompatibility { i: a, j: b };
                if !violations.contains(&v) {
                    violations.push(v);
                }
            }
        }
        let mut linking = BTreeSet::new();
        for &(a, b) in &raw.linking {
            let (i, j) = (a.min(b), a.max(b));
            if j >= theta {
                return Err(DatumError::Index(format!("linking pair ({},{})", a + 1, b + 1)));
            }
            let trivial_product = (0..s).all(|h| (&raw.chi[i][h] * &raw.chi[j][h]).is_one());
            let nontrivial_group = raw.g[i].iter().zip(&raw.g[j]).any(|(x, y)| x + y != 0);
            if i == j || cartan.connected(i, j) || !trivial_product || !nontrivial_group {
                violations.push(Violation::IllegalLinking { i, j });
            }
            linking.insert((i, j));
        }
        if !violations.is_empty() {
            return Err(DatumError::Invalid(violations));
        }
        Ok(GenericDatum { group_rank: s, cartan, g: raw.g, chi: raw.chi, linking })
    }

    pub fn group_rank(&self) -> usize {
        self.group_rank
    }

    pub fn theta(&self) -> usize {
        self.cartan.rank()
    }

    pub fn cartan(&self) -> &CartanMatrix {
        &self.cartan
    }

    pub fn g(&self, i: usize) -> &[i64] {
        &self.g[i]
    }

    /// Values `χ_i(y_1), …, χ_i(y_s)`.
    pub fn chi(&self, i: usize) -> &[Monomial] {
        &self.chi[i]
    }

    /// `q_ij = χ_j(g_i)`.
    pub fn braiding(&self, i: usize, j: usize) -> Monomial {
        evaluate(&self.chi[j], &self.g[i])
    }

    pub fn linked(&self, i: usize, j: usize) -> bool {
        self.linking.contains(&(i.min(j), i.max(j)))
    }

    /// Pairs `i < j` with `λ_ij = 1`.
    pub fn linking(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.linking.iter().copied()
    }

    pub fn root_system(&self) -> RootSystem {
        RootSystem::new(self.cartan.clone())
    }

    pub fn to_raw(&self) -> RawDatum {
        RawDatum {
            group_rank: self.group_rank,
            cartan: self.cartan.entries().to_vec(),
            g: self.g.clone(),
            chi: self.chi.clone(),
            linking: self.linking.iter().copied().collect(),
        }
    }

    /// The same datum with every linking parameter set to zero.
    pub fn without_linking(&self) -> GenericDatum {
        GenericDatum { linking: BTreeSet::new(), ..self.clone() }
    }

    /// `χ_β(y_h) = ∏_i χ_i(y_h)^{m_i}` for a root `β = Σ m_i α_i`.
    pub fn chi_of(&self, root: &[i64]) -> Vec<Monomial> {
        (0..self.group_rank)
            .map(|h| root.iter().zip(&self.chi).map(|(&m, c)| c[h].pow(m)).product())
            .collect()
    }

    /// `g_β = Σ_i m_i g_i` in exponent coordinates.
    pub fn g_of(&self, root: &[i64]) -> ExponentVector {
        (0..self.group_rank).map(|h| root.iter().zip(&self.g).map(|(&m, g)| m * g[h]).sum()).collect()
    }

    /// Character of the `t`-th positive root (0-based).
    pub fn chi_beta(&self, rs: &RootSystem, t: usize) -> Result<Vec<Monomial>, DatumError> {
        if t >= rs.p() {
            return Err(DatumError::Index(format!("root {} of {}", t + 1, rs.p())));
        }
        Ok(self.chi_of(rs.root(t)))
    }

    /// Group-like of the `t`-th positive root (0-based).
    pub fn g_beta(&self, rs: &RootSystem, t: usize) -> Result<ExponentVector, DatumError> {
        if t >= rs.p() {
            return Err(DatumError::Index(format!("root {} of {}", t + 1, rs.p())));
        }
        Ok(self.g_of(rs.root(t)))
    }
}

/// Degree of a PBW monomial `x_{β_1}^{a_1} ⋯ x_{β_p}^{a_p} y`.
///
/// Ordered by total height first, then by `a_p`, `a_{p-1}`, …, `a_1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PbwDegree {
    pub exponents: Vec<u64>,
    pub total: u64,
}

impl PbwDegree {
    pub fn new(rs: &RootSystem, exponents: &[i64]) -> Result<PbwDegree, DatumError> {
        if exponents.len() != rs.p() {
            return Err(DatumError::Shape(format!("expected {} PBW exponents, found {}", rs.p(), exponents.len())));
        }
        if let Some(i) = exponents.iter().position(|&a| a < 0) {
            return Err(DatumError::NegativeExponent(i + 1));
        }
        let exponents: Vec<u64> = exponents.iter().map(|&a| a as u64).collect();
        let total = exponents.iter().zip(rs.heights()).map(|(&a, &h)| a * h as u64).sum();
        Ok(PbwDegree { exponents, total })
    }
}

impl Ord for PbwDegree {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total
            .cmp(&other.total)
            .then_with(|| self.exponents.iter().rev().cmp(other.exponents.iter().rev()))
    }
}

impl PartialOrd for PbwDegree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
