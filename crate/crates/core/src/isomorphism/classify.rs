//! Identification of CY data of global dimension at most 4.
//!
//! Besides group algebras, the only such data live on `A1×A1` with `s = 1`
//! (dimension 3) or `s = 2` (dimension 4), with `χ_2 = χ_1^{-1}`. Labels are
//! read off the canonical group coordinates; the linking parameter picks the
//! odd (`λ = 0`) or even (`λ = 1`) subcase. Among the two representatives
//! related by swapping the vertices, the one whose `χ_1(y_1)` has a positive
//! leading exponent is chosen.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cartan::RootSystem;
use crate::datum::{GenericDatum, RawDatum};
use crate::homology::{gldim, is_cy_pointed};
use crate::scalars::Monomial;

use super::{canonicalize_group_data, identity_matrix, transport, DatumIsomorphism, IsomorphismError};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LabelValue {
    Int(i64),
    Scalar(Monomial),
}

impl fmt::Display for LabelValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LabelValue::Int(v) => write!(f, "{v}"),
            LabelValue::Scalar(m) => write!(f, "{m}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelParam {
    pub name: String,
    pub value: LabelValue,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationLabel {
    pub dimension: usize,
    /// `dim{d}/Case1`, `dim3/Case2/I`, …, `dim4/Case2/VI`.
    pub case_name: String,
    pub canonical_params: Vec<LabelParam>,
}

impl ClassificationLabel {
    fn new(dimension: usize, case_name: String, params: Vec<(&str, LabelValue)>) -> Self {
        ClassificationLabel {
            dimension,
            case_name,
            canonical_params: params
                .into_iter()
                .map(|(name, value)| LabelParam { name: name.to_string(), value })
                .collect(),
        }
    }

    pub fn param(&self, name: &str) -> Option<&LabelValue> {
        self.canonical_params.iter().find(|p| p.name == name).map(|p| &p.value)
    }

    fn int(&self, name: &str) -> Result<i64, IsomorphismError> {
        match self.param(name) {
            Some(LabelValue::Int(v)) => Ok(*v),
            _ => Err(IsomorphismError::NoMatchingCase(format!("label lacks integer `{name}`"))),
        }
    }

    fn scalar(&self, name: &str) -> Result<Monomial, IsomorphismError> {
        match self.param(name) {
            Some(LabelValue::Scalar(v)) => Ok(v.clone()),
            _ => Err(IsomorphismError::NoMatchingCase(format!("label lacks scalar `{name}`"))),
        }
    }
}

impl fmt::Display for ClassificationLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = self.case_name.split('/');
        let dim = parts.next().unwrap_or("");
        let case = parts.next().unwrap_or("").replace("Case", "Case ");
        write!(f, "{dim} {case}")?;
        if let Some(sub) = parts.next() {
            write!(f, " ({sub})")?;
        }
        for p in &self.canonical_params {
            write!(f, ", {}={}", p.name, p.value)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Classification {
    Label { label: ClassificationLabel },
    NotCy,
    DimensionAbove4 { dimension: usize },
}

fn no_match(what: impl Into<String>) -> IsomorphismError {
    IsomorphismError::NoMatchingCase(what.into())
}

/// Canonical coordinates plus the representative choice on `χ_1(y_1)`.
fn representative_datum(datum: &GenericDatum) -> Result<(GenericDatum, DatumIsomorphism), IsomorphismError> {
    let (mut c, mut iso) = canonicalize_group_data(datum)?;
    if c.chi(0)[0].leading_exponent_sign() < 0 {
        let (swapped, swap) = transport(&c, &identity_matrix(c.group_rank()), &[1, 0])?;
        let (again, second) = canonicalize_group_data(&swapped)?;
        iso = iso.then(&swap)?.then(&second)?;
        c = again;
    }
    if c.chi(0)[0].leading_exponent_sign() <= 0 {
        return Err(no_match(format!("χ_1(y_1) = {} has no positive orientation", c.chi(0)[0])));
    }
    Ok((c, iso))
}

/// In Case I the stabilizer of `g_1 = g_2` moves `q2` within `q1^Z q2^{±1}`;
/// picks the smallest member whose exponent at the leading parameter of `q1`
/// lies in `[0, e)`, `e` being that exponent of `q1`.
fn reduce_case_one(q1: &Monomial, q2: &Monomial) -> Monomial {
    let (p, e) = q1.factors().next().expect("q1 is not a root of unity");
    let reduce = |x: &Monomial| {
        let b = (x.exponent(p) / e).floor().to_integer();
        x * &q1.pow(-b)
    };
    reduce(q2).min(reduce(&q2.inv()))
}

/// Label of a validated datum, or why it has none.
pub fn classify(datum: &GenericDatum, rs: &RootSystem) -> Result<Classification, IsomorphismError> {
    let dimension = gldim(datum, rs);
    if dimension > 4 {
        return Ok(Classification::DimensionAbove4 { dimension });
    }
    if !is_cy_pointed(datum, rs).is_cy {
        return Ok(Classification::NotCy);
    }
    let s = datum.group_rank();
    if datum.theta() != 2 || datum.cartan().entries() != [vec![2, 0], vec![0, 2]] || !(1..=2).contains(&s) {
        return Err(no_match(format!("CY datum of dimension {dimension} outside the A1×A1 families")));
    }
    let (c, _) = representative_datum(datum)?;
    if (0..s).any(|h| c.chi(1)[h] != c.chi(0)[h].inv()) {
        return Err(no_match("χ_2 is not χ_1^{-1}"));
    }
    let linked = c.linked(0, 1);
    let pick = |odd: &str, even: &str| if linked { even.to_string() } else { odd.to_string() };
    let k = c.g(0)[0];
    let q = LabelValue::Scalar(c.chi(0)[0].clone());
    let label = if s == 1 {
        if c.g(1) != [k] {
            return Err(no_match("g_1 != g_2 in rank 1"));
        }
        ClassificationLabel::new(3, format!("dim3/Case2/{}", pick("I", "II")), vec![("k", LabelValue::Int(k)), ("q", q)])
    } else {
        let (l1, l2) = (c.g(1)[0], c.g(1)[1]);
        let q2 = LabelValue::Scalar(c.chi(0)[1].clone());
        match (l1, l2) {
            (l1, 0) if l1 == k => ClassificationLabel::new(
                4,
                format!("dim4/Case2/{}", pick("I", "II")),
                vec![("k", LabelValue::Int(k)), ("q1", q), ("q2", LabelValue::Scalar(reduce_case_one(&c.chi(0)[0], &c.chi(0)[1])))],
            ),
            (0, l) if l > 0 => ClassificationLabel::new(
                4,
                format!("dim4/Case2/{}", pick("III", "IV")),
                vec![("k", LabelValue::Int(k)), ("l", LabelValue::Int(l)), ("q", q), ("chi1(y2)", q2)],
            ),
            (l1, l2) if l2 > 0 && 0 < l1 && l1 < l2 => ClassificationLabel::new(
                4,
                format!("dim4/Case2/{}", pick("V", "VI")),
                vec![
                    ("k", LabelValue::Int(k)),
                    ("l1", LabelValue::Int(l1)),
                    ("l2", LabelValue::Int(l2)),
                    ("q", q),
                    ("chi1(y2)", q2),
                ],
            ),
            _ => return Err(no_match(format!("canonical g_2 = ({l1},{l2}) fits no case"))),
        }
    };
    Ok(Classification::Label { label })
}

/// Like [`classify`], but also accepts bare group algebras (empty Cartan matrix).
pub fn classify_raw(raw: &RawDatum) -> Result<Classification, IsomorphismError> {
    if raw.cartan.is_empty() {
        if !raw.g.is_empty() || !raw.chi.is_empty() || !raw.linking.is_empty() {
            return Err(IsomorphismError::Unsupported("group algebra descriptor carries vertex data".into()));
        }
        let s = raw.group_rank;
        if s > 4 {
            return Ok(Classification::DimensionAbove4 { dimension: s });
        }
        let label = ClassificationLabel::new(s, format!("dim{s}/Case1"), Vec::new());
        return Ok(Classification::Label { label });
    }
    let datum = GenericDatum::new(raw.clone())?;
    let rs = datum.root_system();
    classify(&datum, &rs)
}

/// The canonical datum named by a label.
pub fn representative(label: &ClassificationLabel) -> Result<RawDatum, IsomorphismError> {
    let parts: Vec<&str> = label.case_name.split('/').collect();
    if parts.len() == 2 && parts[1] == "Case1" {
        return Ok(RawDatum { group_rank: label.dimension, ..RawDatum::default() });
    }
    let [_, "Case2", sub] = parts.as_slice() else {
        return Err(no_match(format!("unknown case `{}`", label.case_name)));
    };
    let cartan = vec![vec![2, 0], vec![0, 2]];
    let k = label.int("k")?;
    let even = matches!(*sub, "II" | "IV" | "VI");
    let linking = if even { vec![(0, 1)] } else { Vec::new() };
    let pair = |a: Monomial, b: Monomial| vec![vec![a.clone(), b.clone()], vec![a.inv(), b.inv()]];
    let (group_rank, g, chi) = match (label.dimension, *sub) {
        (3, "I" | "II") => {
            let q = label.scalar("q")?;
            (1, vec![vec![k], vec![k]], vec![vec![q.clone()], vec![q.inv()]])
        }
        (4, "I" | "II") => (2, vec![vec![k, 0], vec![k, 0]], pair(label.scalar("q1")?, label.scalar("q2")?)),
        (4, "III" | "IV") => {
            let l = label.int("l")?;
            (2, vec![vec![k, 0], vec![0, l]], pair(label.scalar("q")?, label.scalar("chi1(y2)")?))
        }
        (4, "V" | "VI") => {
            let (l1, l2) = (label.int("l1")?, label.int("l2")?);
            (2, vec![vec![k, 0], vec![l1, l2]], pair(label.scalar("q")?, label.scalar("chi1(y2)")?))
        }
        _ => return Err(no_match(format!("unknown case `{}`", label.case_name))),
    };
    Ok(RawDatum { group_rank, cartan, g, chi, linking })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datum::tests::{a2xa1_pointed, raw, uqsl2};

    fn label_of(r: RawDatum) -> ClassificationLabel {
        match classify_raw(&r).unwrap() {
            Classification::Label { label } => label,
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn uqsl2_is_case_two_even() {
        let label = label_of(uqsl2());
        assert_eq!(label.case_name, "dim3/Case2/II");
        assert_eq!(label.param("k"), Some(&LabelValue::Int(1)));
        // χ_1(y) = q^-2 is flipped to the positive orientation
        assert_eq!(label.param("q"), Some(&LabelValue::Scalar("q^2".parse().unwrap())));
        assert_eq!(label.to_string(), "dim3 Case 2 (II), k=1, q=q^2");
    }

    #[test]
    fn dim4_case_one() {
        let label = label_of(raw(2, "A1xA1", &[&[3, 0], &[3, 0]], &[&["q", "t"], &["q^-1", "t^-1"]], &[]));
        assert_eq!(label.case_name, "dim4/Case2/I");
        assert_eq!(label.param("k"), Some(&LabelValue::Int(3)));
    }

    #[test]
    fn dim4_case_six() {
        // g_1 = y1^2, g_2 = y1 y2^3, χ_1(y2) = q^{(2-1)/3}
        let label = label_of(raw(
            2,
            "A1xA1",
            &[&[2, 0], &[1, 3]],
            &[&["q", "q^1/3"], &["q^-1", "q^-1/3"]],
            &[(0, 1)],
        ));
        assert_eq!(label.case_name, "dim4/Case2/VI");
        assert_eq!(label.to_string(), "dim4 Case 2 (VI), k=2, l1=1, l2=3, q=q^1, chi1(y2)=q^1/3");
    }

    #[test]
    fn other_outcomes() {
        assert_eq!(classify_raw(&a2xa1_pointed()).unwrap(), Classification::DimensionAbove4 { dimension: 7 });
        assert_eq!(classify_raw(&raw(1, "A1", &[&[1]], &[&["q"]], &[])).unwrap(), Classification::NotCy);
        let group = RawDatum { group_rank: 3, ..RawDatum::default() };
        assert_eq!(label_of(group).case_name, "dim3/Case1");
        let big = RawDatum { group_rank: 5, ..RawDatum::default() };
        assert_eq!(classify_raw(&big).unwrap(), Classification::DimensionAbove4 { dimension: 5 });
    }

    #[test]
    fn representative_round_trip() {
        let r = raw(2, "A1xA1", &[&[2, 0], &[1, 3]], &[&["q", "q^1/3"], &["q^-1", "q^-1/3"]], &[(0, 1)]);
        let label = label_of(r.clone());
        assert_eq!(representative(&label).unwrap(), r);
        let json = serde_json_like(&label);
        assert!(json.contains("dim4/Case2/VI"));
    }

    fn serde_json_like(label: &ClassificationLabel) -> String {
        format!("{label:?}")
    }
}
