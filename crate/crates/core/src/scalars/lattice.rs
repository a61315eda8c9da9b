//! Exact integer and multiplicative linear systems.
//!
//! `solve_integer_affine` column-reduces `A` to Hermite form with a unimodular
//! transform, which gives both a particular integer solution and a basis of
//! the integer kernel. `solve_multiplicative_system` splits a system over the
//! monomial group into one rational system per parameter plus a system over
//! `Z/2` for the signs.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Zero};

use super::{Monomial, Param, ScalarError};

/// One integer solution of `A z = b` plus a basis of `{z ∈ Z^n : A z = 0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSolution {
    pub particular: Vec<i64>,
    pub kernel: Vec<Vec<i64>>,
}

impl AffineSolution {
    /// `particular + Σ c_i kernel_i`.
    pub fn point(&self, coefficients: &[i64]) -> Result<Vec<i64>, ScalarError> {
        let mut out: Vec<i128> = self.particular.iter().map(|&x| x as i128).collect();
        for (c, v) in coefficients.iter().zip(&self.kernel) {
            for (o, x) in out.iter_mut().zip(v) {
                *o = checked(o.checked_add(checked((*c as i128).checked_mul(*x as i128))?))?;
            }
        }
        out.into_iter().map(narrow).collect()
    }
}

fn checked(v: Option<i128>) -> Result<i128, ScalarError> {
    v.ok_or(ScalarError::Overflow)
}

fn narrow(v: i128) -> Result<i64, ScalarError> {
    i64::try_from(v).map_err(|_| ScalarError::Overflow)
}

fn check_shape(a: &[Vec<i64>], rows: usize) -> Result<usize, ScalarError> {
    if a.len() != rows {
        return Err(ScalarError::Dimension(format!(
            "matrix has {} rows but right-hand side has {rows} entries",
            a.len()
        )));
    }
    let n = a.first().map_or(0, Vec::len);
    if a.iter().any(|r| r.len() != n) {
        return Err(ScalarError::Dimension("ragged matrix".into()));
    }
    Ok(n)
}

/// Extended gcd: `(g, x, y)` with `x a + y b = g ≥ 0`.
fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Solves `A z = b` over the integers.
///
/// Returns `Ok(None)` when there is no rational or no integer solution.
pub fn solve_integer_affine(
    a: &[Vec<i64>],
    b: &[Rational64],
) -> Result<Option<AffineSolution>, ScalarError> {
    let n = check_shape(a, b.len())?;
    let m = a.len();
    if b.iter().any(|x| !x.is_integer()) {
        return Ok(None);
    }
    let mut h: Vec<Vec<i128>> =
        a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut u: Vec<Vec<i128>> =
        (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect();

    // Column operations: (col_c, col_j) <- (x col_c + y col_j, -b/g col_c + a/g col_j).
    let combine = |mat: &mut Vec<Vec<i128>>, c: usize, j: usize, k: [i128; 4]| -> Result<(), ScalarError> {
        for row in mat.iter_mut() {
            let (vc, vj) = (row[c], row[j]);
            row[c] = checked(checked(k[0].checked_mul(vc))?.checked_add(checked(k[1].checked_mul(vj))?))?;
            row[j] = checked(checked(k[2].checked_mul(vc))?.checked_add(checked(k[3].checked_mul(vj))?))?;
        }
        Ok(())
    };

    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, column)
    let mut rank = 0;
    for r in 0..m {
        if rank == n {
            break;
        }
        for j in rank + 1..n {
            let (x, y) = (h[r][rank], h[r][j]);
            if y == 0 {
                continue;
            }
            let (g, s, t) = ext_gcd(x, y);
            let k = [s, t, -y / g, x / g];
            combine(&mut h, rank, j, k)?;
            combine(&mut u, rank, j, k)?;
        }
        if h[r][rank] != 0 {
            if h[r][rank] < 0 {
                for row in h.iter_mut().chain(u.iter_mut()) {
                    row[rank] = -row[rank];
                }
            }
            pivots.push((r, rank));
            rank += 1;
        }
    }

    // Forward substitution on the lower echelon form H w = b.
    let mut w = vec![0i128; n];
    let mut next_pivot = pivots.iter().peekable();
    for r in 0..m {
        let determined = next_pivot.peek().map_or(rank, |&&(_, c)| c);
        let mut rest = b[r].to_integer() as i128;
        for j in 0..determined {
            rest = checked(rest.checked_sub(checked(h[r][j].checked_mul(w[j]))?))?;
        }
        match next_pivot.peek() {
            Some(&&(pr, c)) if pr == r => {
                if rest % h[r][c] != 0 {
                    return Ok(None);
                }
                w[c] = rest / h[r][c];
                next_pivot.next();
            }
            _ => {
                if rest != 0 {
                    return Ok(None);
                }
            }
        }
    }

    let mut particular = vec![0i128; n];
    for (i, p) in particular.iter_mut().enumerate() {
        for j in 0..rank {
            *p = checked(p.checked_add(checked(u[i][j].checked_mul(w[j]))?))?;
        }
    }
    let mut kernel: Vec<Vec<i128>> = (rank..n).map(|j| (0..n).map(|i| u[i][j]).collect()).collect();
    reduce_basis(&mut kernel)?;
    reduce_against(&mut particular, &kernel)?;

    Ok(Some(AffineSolution {
        particular: particular.into_iter().map(narrow).collect::<Result<_, _>>()?,
        kernel: kernel
            .into_iter()
            .map(|v| v.into_iter().map(narrow).collect::<Result<Vec<_>, _>>())
            .collect::<Result<_, _>>()?,
    }))
}

fn dot(a: &[i128], b: &[i128]) -> Result<i128, ScalarError> {
    a.iter().zip(b).try_fold(0i128, |acc, (x, y)| checked(acc.checked_add(checked(x.checked_mul(*y))?)))
}

fn nearest(num: i128, den: i128) -> i128 {
    // round(num / den) for den > 0
    (2 * num + den).div_euclid(2 * den)
}

/// Subtract rounded projections `v -= round(<v,b>/<b,b>) b` until nothing shrinks.
fn reduce_against(v: &mut [i128], basis: &[Vec<i128>]) -> Result<(), ScalarError> {
    loop {
        let mut changed = false;
        for b in basis {
            let bb = dot(b, b)?;
            if bb == 0 {
                continue;
            }
            let c = nearest(dot(v, b)?, bb);
            if c != 0 {
                for (x, y) in v.iter_mut().zip(b) {
                    *x = checked(x.checked_sub(checked(c.checked_mul(*y))?))?;
                }
                changed = true;
            }
        }
        if !changed {
            return Ok(());
        }
    }
}

/// Pairwise (Lagrange) reduction of a lattice basis; the span is unchanged.
fn reduce_basis(basis: &mut [Vec<i128>]) -> Result<(), ScalarError> {
    for _ in 0..64 {
        let mut changed = false;
        for i in 0..basis.len() {
            for j in 0..basis.len() {
                if i == j {
                    continue;
                }
                let bb = dot(&basis[j], &basis[j])?;
                let c = nearest(dot(&basis[i], &basis[j])?, bb);
                if c != 0 {
                    let bj = basis[j].clone();
                    for (x, y) in basis[i].iter_mut().zip(&bj) {
                        *x = checked(x.checked_sub(checked(c.checked_mul(*y))?))?;
                    }
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    basis.sort_by_key(|v| v.iter().map(|x| x.unsigned_abs()).sum::<u128>());
    Ok(())
}

/// Exact determinant of a square integer matrix (fraction-free elimination).
pub fn determinant(a: &[Vec<i64>]) -> Result<i128, ScalarError> {
    let n = a.len();
    if a.iter().any(|r| r.len() != n) {
        return Err(ScalarError::Dimension("determinant of a non-square matrix".into()));
    }
    let mut m: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&i| m[i][k] != 0) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return Ok(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = checked(
                    checked(m[i][j].checked_mul(m[k][k]))?.checked_sub(checked(m[i][k].checked_mul(m[k][j]))?),
                )?;
                m[i][j] = t / prev;
            }
        }
        prev = m[k][k];
    }
    Ok(if n == 0 { 1 } else { sign * m[n - 1][n - 1] })
}

/// Inverse of a unimodular integer matrix (`None` if `det ≠ ±1`).
pub fn unimodular_inverse(a: &[Vec<i64>]) -> Result<Option<Vec<Vec<i64>>>, ScalarError> {
    let n = a.len();
    let det = determinant(a)?;
    if det.abs() != 1 {
        return Ok(None);
    }
    let mut inv = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            // inverse[i][j] = cofactor(j, i) / det
            let minor: Vec<Vec<i64>> = (0..n)
                .filter(|&r| r != j)
                .map(|r| (0..n).filter(|&c| c != i).map(|c| a[r][c]).collect())
                .collect();
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            inv[i][j] = narrow(sign * determinant(&minor)? * det)?;
        }
    }
    Ok(Some(inv))
}

/// Matrix product of integer matrices.
pub fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Result<Vec<Vec<i64>>, ScalarError> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            if row.len() != inner {
                return Err(ScalarError::Dimension("matrix product shape mismatch".into()));
            }
            (0..cols)
                .map(|j| {
                    let s = (0..inner).try_fold(0i128, |acc, k| {
                        checked(acc.checked_add(row[k] as i128 * b[k][j] as i128))
                    })?;
                    narrow(s)
                })
                .collect()
        })
        .collect()
}

/// Unimodular `M` with `M v = (g, 0, …, 0)` and `g = gcd(v) ≥ 0`.
///
/// Built from successive two-coordinate Bézout steps: for a pair `(v_0, v_j)`
/// with `v_0 = g k̄_0`, `v_j = g k̄_j` and `a k̄_0 + b k̄_j = 1`, the block
/// `[[a, b], [-k̄_j, k̄_0]]` sends it to `(g, 0)`.
pub fn gcd_reducer(v: &[i64]) -> Result<(Vec<Vec<i64>>, i64), ScalarError> {
    let n = v.len();
    let mut m: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    if n == 0 {
        return Ok((m, 0));
    }
    let mut cur: Vec<i64> = v.to_vec();
    for j in 1..n {
        if cur[j] == 0 {
            continue;
        }
        let (g, a, b) = ext_gcd(cur[0] as i128, cur[j] as i128);
        let (k0, kj) = (cur[0] as i128 / g, cur[j] as i128 / g);
        let mut step: Vec<Vec<i64>> =
            (0..n).map(|i| (0..n).map(|c| i64::from(i == c)).collect()).collect();
        step[0][0] = narrow(a)?;
        step[0][j] = narrow(b)?;
        step[j][0] = narrow(-kj)?;
        step[j][j] = narrow(k0)?;
        m = mat_mul(&step, &m)?;
        cur[0] = narrow(g)?;
        cur[j] = 0;
    }
    if cur[0] < 0 {
        for x in m[0].iter_mut() {
            *x = -*x;
        }
        // keep det = ±1 and the remaining coordinates untouched
        cur[0] = -cur[0];
    }
    Ok((m, cur[0]))
}

/// Why a multiplicative system has no monomial solution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Obstruction {
    /// Row combination `r` with `rᵀA = 0` (over `Z`, or over `Z/2` for sign obstructions).
    pub relation: Vec<i64>,
    /// `∏ c_i^{r_i}`, which would have to be `1` (or, for signs, positive).
    pub value: Monomial,
    pub sign_only: bool,
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel: Vec<String> = self.relation.iter().map(i64::to_string).collect();
        if self.sign_only {
            write!(f, "relation [{}] (mod 2) forces sign of {} to be positive", rel.join(", "), self.value)
        } else {
            write!(f, "relation [{}] gives {} != 1", rel.join(", "), self.value)
        }
    }
}

/// Row reduction of `[A | I]` over a field: the row combinations used and the
/// pivot columns. Combination rows past the rank are left-kernel relations.
struct Reduced<T> {
    combos: Vec<Vec<T>>,
    pivots: Vec<usize>,
}

fn rational_reduce(a: &[Vec<i64>], n: usize) -> Reduced<Rational64> {
    let m = a.len();
    let mut rows: Vec<Vec<Rational64>> =
        a.iter().map(|r| r.iter().map(|&x| Rational64::from_integer(x)).collect()).collect();
    let mut combos: Vec<Vec<Rational64>> = (0..m)
        .map(|i| (0..m).map(|j| if i == j { Rational64::one() } else { Rational64::zero() }).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..m).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        combos.swap(r, p);
        let inv = rows[r][c].recip();
        rows[r].iter_mut().for_each(|x| *x *= inv);
        combos[r].iter_mut().for_each(|x| *x *= inv);
        for i in 0..m {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c];
                let (pr, pc) = (rows[r].clone(), combos[r].clone());
                rows[i].iter_mut().zip(&pr).for_each(|(x, y)| *x -= f * y);
                combos[i].iter_mut().zip(&pc).for_each(|(x, y)| *x -= f * y);
            }
        }
        pivots.push(c);
        r += 1;
    }
    Reduced { combos, pivots }
}

fn parity_reduce(a: &[Vec<i64>], n: usize) -> Reduced<bool> {
    let m = a.len();
    let mut rows: Vec<Vec<bool>> = a.iter().map(|r| r.iter().map(|x| x.is_odd()).collect()).collect();
    let mut combos: Vec<Vec<bool>> = (0..m).map(|i| (0..m).map(|j| i == j).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..m).find(|&i| rows[i][c]) else { continue };
        rows.swap(r, p);
        combos.swap(r, p);
        for i in 0..m {
            if i != r && rows[i][c] {
                let (pr, pc) = (rows[r].clone(), combos[r].clone());
                rows[i].iter_mut().zip(&pr).for_each(|(x, y)| *x ^= y);
                combos[i].iter_mut().zip(&pc).for_each(|(x, y)| *x ^= y);
            }
        }
        pivots.push(c);
        r += 1;
    }
    Reduced { combos, pivots }
}

fn integer_relation(combo: &[Rational64]) -> Vec<i64> {
    let l = combo.iter().fold(1i64, |acc, x| acc.lcm(x.denom()));
    let ints: Vec<i64> = combo.iter().map(|x| (x * Rational64::from_integer(l)).to_integer()).collect();
    let g = ints.iter().fold(0i64, |acc, x| acc.gcd(x));
    ints.into_iter().map(|x| if g > 1 { x / g } else { x }).collect()
}

/// Finds monomials `x_1..x_n` with `∏_j x_j^{A[i][j]} = c_i` for every row `i`.
///
/// Exponents live in a divisible group, so the parameter part is solvable iff
/// it is rationally consistent; the sign part is a system over `Z/2`.
pub fn solve_multiplicative_system(
    a: &[Vec<i64>],
    c: &[Monomial],
) -> Result<Result<Vec<Monomial>, Obstruction>, ScalarError> {
    let n = check_shape(a, c.len())?;
    let params: BTreeSet<Param> = c.iter().flat_map(|x| x.params()).collect();

    let rat = rational_reduce(a, n);
    let rank = rat.pivots.len();
    // Rows rank..m are zero in A: each combo is a left-kernel relation.
    for combo in &rat.combos[rank..] {
        let relation = integer_relation(combo);
        let value: Monomial = relation.iter().zip(c).map(|(r, ci)| ci.pow(*r)).product();
        if !value.is_root_of_unity() {
            return Ok(Err(Obstruction { relation, value, sign_only: false }));
        }
    }
    let mut exps: Vec<Vec<(Param, Rational64)>> = vec![Vec::new(); n];
    for &p in &params {
        for (row, &col) in rat.pivots.iter().enumerate() {
            let e: Rational64 =
                rat.combos[row].iter().zip(c).map(|(w, ci)| *w * ci.exponent(p)).sum();
            if !e.is_zero() {
                exps[col].push((p, e));
            }
        }
    }

    let par = parity_reduce(a, n);
    let prank = par.pivots.len();
    for combo in &par.combos[prank..] {
        let negative = combo.iter().zip(c).filter(|(on, ci)| **on && ci.is_negative()).count().is_odd();
        if negative {
            let relation: Vec<i64> = combo.iter().map(|&b| i64::from(b)).collect();
            let value: Monomial = relation.iter().zip(c).map(|(r, ci)| ci.pow(*r)).product();
            return Ok(Err(Obstruction { relation, value, sign_only: true }));
        }
    }
    let mut signs = vec![false; n];
    for (row, &col) in par.pivots.iter().enumerate() {
        signs[col] = par.combos[row].iter().zip(c).filter(|(on, ci)| **on && ci.is_negative()).count().is_odd();
    }

    Ok(Ok(exps
        .into_iter()
        .zip(signs)
        .map(|(factors, negative)| Monomial::from_factors(negative, factors))
        .collect()))
}

/// Evaluates `∏_j x_j^{A[i][j]}` for every row.
pub fn apply_multiplicative(a: &[Vec<i64>], x: &[Monomial]) -> Vec<Monomial> {
    a.iter().map(|row| row.iter().zip(x).map(|(k, xj)| xj.pow(*k)).product()).collect()
}
