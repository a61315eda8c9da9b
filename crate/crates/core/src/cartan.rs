//! Finite-type Cartan matrices and their positive roots.
//!
//! Indices are 0-based in the API; text output is 1-based. Reflections use
//! `s_i(v) = v - (Σ_j a_ij v_j) α_i`, so for `[[2,-2],[-1,2]]` the positive
//! roots are `α1, α2, α1+α2, 2α1+α2`.

use std::fmt;

use num_integer::Integer;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalars::determinant;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CartanError {
    #[error("not a generalized Cartan matrix: {0}")]
    NotGeneralized(String),
    #[error("not symmetrizable")]
    NotSymmetrizable,
    #[error("not finite type")]
    NotFiniteType,
    #[error("unknown Cartan type `{0}`")]
    UnknownType(String),
    #[error("cannot read matrix `{0}`")]
    Syntax(String),
    #[error("word not reduced: {0}")]
    WordNotReduced(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "Vec<Vec<i64>>", try_from = "Vec<Vec<i64>>")]
pub struct CartanMatrix {
    entries: Vec<Vec<i64>>,
    symmetrizer: Vec<i64>,
    components: Vec<Vec<usize>>,
    component_of: Vec<usize>,
}

impl From<CartanMatrix> for Vec<Vec<i64>> {
    fn from(c: CartanMatrix) -> Self {
        c.entries
    }
}

impl TryFrom<Vec<Vec<i64>>> for CartanMatrix {
    type Error = CartanError;
    fn try_from(entries: Vec<Vec<i64>>) -> Result<Self, CartanError> {
        CartanMatrix::new(entries)
    }
}

impl CartanMatrix {
    /// Validates a square integer matrix as a Cartan matrix of finite type.
    pub fn new(entries: Vec<Vec<i64>>) -> Result<CartanMatrix, CartanError> {
        let n = entries.len();
        if n == 0 {
            return Err(CartanError::NotGeneralized("empty matrix".into()));
        }
        if entries.iter().any(|r| r.len() != n) {
            return Err(CartanError::NotGeneralized("matrix is not square".into()));
        }
        for i in 0..n {
            if entries[i][i] != 2 {
                return Err(CartanError::NotGeneralized(format!("a_{0}{0} != 2", i + 1)));
            }
            for j in 0..n {
                if i == j {
                    continue;
                }
                if entries[i][j] > 0 {
                    return Err(CartanError::NotGeneralized(format!("a_{}{} > 0", i + 1, j + 1)));
                }
                if (entries[i][j] == 0) != (entries[j][i] == 0) {
                    return Err(CartanError::NotGeneralized(format!(
                        "a_{}{} and a_{}{} disagree on zero",
                        i + 1,
                        j + 1,
                        j + 1,
                        i + 1
                    )));
                }
            }
        }

        // connected components in index order
        let mut component_of = vec![usize::MAX; n];
        let mut components: Vec<Vec<usize>> = Vec::new();
        for start in 0..n {
            if component_of[start] != usize::MAX {
                continue;
            }
            let id = components.len();
            let mut members = vec![start];
            component_of[start] = id;
            let mut k = 0;
            while k < members.len() {
                let i = members[k];
                for j in 0..n {
                    if entries[i][j] != 0 && component_of[j] == usize::MAX {
                        component_of[j] = id;
                        members.push(j);
                    }
                }
                k += 1;
            }
            members.sort_unstable();
            components.push(members);
        }

        // minimal symmetrizer, one component at a time
        let mut symmetrizer = vec![0i64; n];
        for comp in &components {
            let mut d: Vec<Option<Rational64>> = vec![None; n];
            d[comp[0]] = Some(Rational64::from_integer(1));
            let mut stack = vec![comp[0]];
            while let Some(i) = stack.pop() {
                let di = d[i].expect("visited");
                for &j in comp {
                    if i == j || entries[i][j] == 0 {
                        continue;
                    }
                    // d_i a_ij = d_j a_ji
                    let dj = di * Rational64::new(entries[i][j], entries[j][i]);
                    match d[j] {
                        None => {
                            d[j] = Some(dj);
                            stack.push(j);
                        }
                        Some(existing) if existing != dj => return Err(CartanError::NotSymmetrizable),
                        Some(_) => {}
                    }
                }
            }
            let lcm = comp.iter().fold(1i64, |acc, &i| acc.lcm(d[i].unwrap().denom()));
            let ints: Vec<i64> = comp.iter().map(|&i| (d[i].unwrap() * lcm).to_integer()).collect();
            let g = ints.iter().fold(0i64, |acc, x| acc.gcd(x));
            for (&i, v) in comp.iter().zip(ints) {
                symmetrizer[i] = v / g;
            }
        }

        let sym: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| symmetrizer[i] * entries[i][j]).collect())
            .collect();
        for k in 1..=n {
            let minor: Vec<Vec<i64>> = sym[..k].iter().map(|r| r[..k].to_vec()).collect();
            if determinant(&minor).map_err(|_| CartanError::NotFiniteType)? <= 0 {
                return Err(CartanError::NotFiniteType);
            }
        }

        Ok(CartanMatrix { entries, symmetrizer, components, component_of })
    }

    /// A named type such as `A2`, `B2`, `G2` or a product like `A2xA1`.
    pub fn named(name: &str) -> Result<CartanMatrix, CartanError> {
        let unknown = || CartanError::UnknownType(name.to_string());
        let mut blocks = Vec::new();
        for part in name.split(['x', 'X']) {
            let part = part.trim();
            let (family, rank) = part.split_at(part.char_indices().nth(1).map_or(part.len(), |(i, _)| i));
            let rank: usize = rank.parse().map_err(|_| unknown())?;
            let block = named_block(family, rank).ok_or_else(unknown)?;
            blocks.push(block);
        }
        let n: usize = blocks.iter().map(Vec::len).sum();
        let mut entries = vec![vec![0i64; n]; n];
        let mut offset = 0;
        for b in blocks {
            for (i, row) in b.iter().enumerate() {
                for (j, &v) in row.iter().enumerate() {
                    entries[offset + i][offset + j] = v;
                }
            }
            offset += b.len();
        }
        CartanMatrix::new(entries)
    }

    /// Parses either a named type or a literal like `[[2,-1],[-1,2]]` / `2 -1; -1 2`.
    pub fn parse(text: &str) -> Result<CartanMatrix, CartanError> {
        let t = text.trim();
        if t.starts_with(|c: char| c.is_ascii_alphabetic()) {
            return CartanMatrix::named(t);
        }
        let bad = || CartanError::Syntax(text.to_string());
        let body = t.trim_start_matches('[').trim_end_matches(']');
        let rows: Vec<&str> = if body.contains(';') { body.split(';').collect() } else { body.split("],").collect() };
        let entries = rows
            .iter()
            .map(|r| {
                r.split(|c: char| c == ',' || c.is_whitespace() || c == '[' || c == ']')
                    .filter(|s| !s.is_empty())
                    .map(|s| s.parse::<i64>().map_err(|_| bad()))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        CartanMatrix::new(entries)
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.entries[i][j]
    }

    pub fn symmetrizer(&self) -> &[i64] {
        &self.symmetrizer
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn component_of(&self, i: usize) -> usize {
        self.component_of[i]
    }

    pub fn connected(&self, i: usize, j: usize) -> bool {
        self.component_of[i] == self.component_of[j]
    }

    /// The matrix with rows and columns relabelled: result entry `(σ(i), σ(j))` is `a_ij`.
    pub fn permuted(&self, sigma: &[usize]) -> CartanMatrix {
        let n = self.rank();
        let mut entries = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                entries[sigma[i]][sigma[j]] = self.entries[i][j];
            }
        }
        CartanMatrix::new(entries).expect("relabelling preserves validity")
    }
}

impl fmt::Display for CartanMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .entries
            .iter()
            .map(|r| r.iter().map(i64::to_string).collect::<Vec<_>>().join(" "))
            .collect();
        f.write_str(&rows.join("; "))
    }
}

fn named_block(family: &str, n: usize) -> Option<Vec<Vec<i64>>> {
    let chain = |n: usize| -> Vec<Vec<i64>> {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| match i.abs_diff(j) {
                        0 => 2,
                        1 => -1,
                        _ => 0,
                    })
                    .collect()
            })
            .collect()
    };
    let mut m = match (family, n) {
        ("A", 1..=4) => return Some(chain(n)),
        ("B" | "C", 2) => {
            let mut m = chain(2);
            m[0][1] = -2;
            return Some(m);
        }
        ("B" | "C", 3) => chain(3),
        ("D", 4) => {
            let mut m = chain(4);
            m[2][3] = 0;
            m[3][2] = 0;
            m[1][3] = -1;
            m[3][1] = -1;
            return Some(m);
        }
        ("G", 2) => return Some(vec![vec![2, -1], vec![-3, 2]]),
        ("F", 4) => {
            let mut m = chain(4);
            m[1][2] = -2;
            return Some(m);
        }
        _ => return None,
    };
    // rank 3 B (last root short) and C (last root long)
    if family == "B" {
        m[2][1] = -2;
    } else {
        m[1][2] = -2;
    }
    Some(m)
}

/// Action of a Weyl group element, stored as the images of the simple roots.
#[derive(Clone)]
struct WeylElement {
    columns: Vec<Vec<i64>>,
}

impl WeylElement {
    fn identity(n: usize) -> Self {
        WeylElement { columns: (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect() }
    }

    /// `self ↦ self · s_i`.
    fn right_multiply(&mut self, cartan: &CartanMatrix, i: usize) {
        let ci = self.columns[i].clone();
        for (j, col) in self.columns.iter_mut().enumerate() {
            let a = cartan.entry(i, j);
            if a != 0 {
                col.iter_mut().zip(&ci).for_each(|(x, y)| *x -= a * y);
            }
        }
    }

    fn image_is_positive(&self, i: usize) -> bool {
        self.columns[i].iter().all(|&x| x >= 0)
    }
}

/// Greedy longest word choosing the smallest admissible index at each step.
pub fn longest_word(cartan: &CartanMatrix) -> Vec<usize> {
    longest_word_by(cartan, |admissible| admissible[0])
}

/// Greedy longest word with a caller-supplied choice among the admissible indices.
///
/// An index `i` is admissible when appending `s_i` increases the length, i.e.
/// the current element maps `α_i` to a positive root. The walk ends at `w_0`.
pub fn longest_word_by(cartan: &CartanMatrix, mut choose: impl FnMut(&[usize]) -> usize) -> Vec<usize> {
    let n = cartan.rank();
    let mut w = WeylElement::identity(n);
    let mut word = Vec::new();
    loop {
        let admissible: Vec<usize> = (0..n).filter(|&i| w.image_is_positive(i)).collect();
        if admissible.is_empty() {
            return word;
        }
        let i = choose(&admissible);
        assert!(admissible.contains(&i), "choice outside the admissible set");
        w.right_multiply(cartan, i);
        word.push(i);
    }
}

/// A Cartan matrix with a fixed reduced longest word and the induced root order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootSystem {
    cartan: CartanMatrix,
    word: Vec<usize>,
    roots: Vec<Vec<i64>>,
    heights: Vec<i64>,
    simple_positions: Vec<usize>,
}

impl RootSystem {
    pub fn new(cartan: CartanMatrix) -> RootSystem {
        let word = longest_word(&cartan);
        RootSystem::with_word(cartan, word).expect("greedy word is reduced")
    }

    /// Roots `β_t = s_{i_1} ⋯ s_{i_{t-1}}(α_{i_t})` for a given longest word.
    pub fn with_word(cartan: CartanMatrix, word: Vec<usize>) -> Result<RootSystem, CartanError> {
        let n = cartan.rank();
        if let Some(&bad) = word.iter().find(|&&i| i >= n) {
            return Err(CartanError::WordNotReduced(format!("index {} out of range", bad + 1)));
        }
        let mut w = WeylElement::identity(n);
        let mut roots: Vec<Vec<i64>> = Vec::with_capacity(word.len());
        for &i in &word {
            let beta = w.columns[i].clone();
            if beta.iter().any(|&x| x < 0) || roots.contains(&beta) {
                return Err(CartanError::WordNotReduced(format!("root {} repeats or is negative", roots.len() + 1)));
            }
            roots.push(beta);
            w.right_multiply(&cartan, i);
        }
        if (0..n).any(|i| w.image_is_positive(i)) {
            return Err(CartanError::WordNotReduced("word is not a longest element".into()));
        }
        let heights = roots.iter().map(|r| r.iter().sum()).collect();
        let simple_positions = (0..n)
            .map(|k| {
                roots
                    .iter()
                    .position(|r| r.iter().enumerate().all(|(j, &x)| x == i64::from(j == k)))
                    .expect("every simple root is positive")
            })
            .collect();
        Ok(RootSystem { cartan, word, roots, heights, simple_positions })
    }

    pub fn cartan(&self) -> &CartanMatrix {
        &self.cartan
    }

    pub fn theta(&self) -> usize {
        self.cartan.rank()
    }

    /// Number of positive roots.
    pub fn p(&self) -> usize {
        self.roots.len()
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    /// Coordinates of `β_t` in the simple roots (0-based `t`).
    pub fn root(&self, t: usize) -> &[i64] {
        &self.roots[t]
    }

    pub fn roots(&self) -> &[Vec<i64>] {
        &self.roots
    }

    pub fn heights(&self) -> &[i64] {
        &self.heights
    }

    /// Position `j_k` of the simple root `α_k` in the root order (0-based).
    pub fn simple_position(&self, k: usize) -> usize {
        self.simple_positions[k]
    }
}

/// Formats a root as `α1+2α2`.
pub fn format_root(root: &[i64]) -> String {
    let terms: Vec<String> = root
        .iter()
        .enumerate()
        .filter(|(_, &m)| m != 0)
        .map(|(i, &m)| if m == 1 { format!("α{}", i + 1) } else { format!("{m}α{}", i + 1) })
        .collect();
    terms.join("+")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<i64>> {
        rows.iter().map(|r| r.to_vec()).collect()
    }

    #[test]
    fn a2_is_valid() {
        let c = CartanMatrix::new(m(&[&[2, -1], &[-1, 2]])).unwrap();
        assert_eq!(c.symmetrizer(), &[1, 1]);
        assert_eq!(c.components().len(), 1);
    }

    #[test]
    fn b2_symmetrizer() {
        let c = CartanMatrix::new(m(&[&[2, -2], &[-1, 2]])).unwrap();
        assert_eq!(c.symmetrizer(), &[1, 2]);
    }

    #[test]
    fn affine_a1_rejected() {
        assert_eq!(CartanMatrix::new(m(&[&[2, -2], &[-2, 2]])), Err(CartanError::NotFiniteType));
    }

    #[test]
    fn malformed_matrices_rejected() {
        for bad in [m(&[&[1]]), m(&[&[2, 1], &[1, 2]]), m(&[&[2, 0], &[-1, 2]])] {
            assert!(matches!(CartanMatrix::new(bad), Err(CartanError::NotGeneralized(_))));
        }
        let cyclic = m(&[&[2, -1, -1], &[-2, 2, -1], &[-1, -1, 2]]);
        assert_eq!(CartanMatrix::new(cyclic), Err(CartanError::NotSymmetrizable));
        assert!(CartanMatrix::new(m(&[&[2, -1], &[-4, 2]])).is_err());
    }

    #[test]
    fn small_words() {
        assert_eq!(longest_word(&CartanMatrix::named("A1").unwrap()), vec![0]);
        assert_eq!(longest_word(&CartanMatrix::named("A2").unwrap()), vec![0, 1, 0]);
        assert_eq!(longest_word(&CartanMatrix::named("A1xA1").unwrap()), vec![0, 1]);
    }

    #[test]
    fn a2_roots() {
        let rs = RootSystem::new(CartanMatrix::named("A2").unwrap());
        assert_eq!(rs.roots(), &[vec![1, 0], vec![1, 1], vec![0, 1]]);
        assert_eq!(rs.heights(), &[1, 2, 1]);
        assert_eq!((rs.simple_position(0), rs.simple_position(1)), (0, 2));
    }

    #[test]
    fn b2_roots() {
        let rs = RootSystem::new(CartanMatrix::named("B2").unwrap());
        let mut roots = rs.roots().to_vec();
        roots.sort();
        assert_eq!(roots, vec![vec![0, 1], vec![1, 0], vec![1, 1], vec![2, 1]]);
    }

    #[test]
    fn named_types_are_valid() {
        for (name, p) in [
            ("A3", 6),
            ("A4", 10),
            ("B3", 9),
            ("C3", 9),
            ("D4", 12),
            ("G2", 6),
            ("F4", 24),
            ("A2xA1", 4),
            ("B2xA1xA1", 6),
        ] {
            let rs = RootSystem::new(CartanMatrix::named(name).unwrap());
            assert_eq!(rs.p(), p, "{name}");
        }
        assert!(CartanMatrix::named("E6").is_err());
        assert!(CartanMatrix::named("A5").is_err());
    }

    #[test]
    fn non_reduced_word_rejected() {
        let c = CartanMatrix::named("A2").unwrap();
        assert!(RootSystem::with_word(c.clone(), vec![0, 0, 1]).is_err());
        assert!(RootSystem::with_word(c.clone(), vec![0, 1]).is_err());
        assert!(RootSystem::with_word(c, vec![1, 0, 1]).is_ok());
    }

    #[test]
    fn literal_parsing() {
        let a = CartanMatrix::parse("[[2,-1],[-1,2]]").unwrap();
        let b = CartanMatrix::parse("2 -1; -1 2").unwrap();
        assert_eq!(a, b);
        assert_eq!(a, CartanMatrix::parse("A2").unwrap());
        assert_eq!(format_root(&[1, 2]), "α1+2α2");
    }
}
