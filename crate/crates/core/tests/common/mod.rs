#![allow(dead_code)]

use num_rational::Rational64;
use pointed_cy::cartan::CartanMatrix;
use pointed_cy::datum::{GenericDatum, RawDatum};
use pointed_cy::scalars::{Monomial, Param};
use rand::Rng;

pub const TYPES: [&str; 4] = ["A1xA1", "A2", "B2", "A2xA1"];

pub fn mono(text: &str) -> Monomial {
    text.parse().unwrap()
}

pub fn q_pow(e: Rational64) -> Monomial {
    Monomial::param_pow(Param::new("q").unwrap(), e)
}

pub fn raw(s: usize, cartan: &str, g: &[&[i64]], chi: &[&[&str]], linking: &[(usize, usize)]) -> RawDatum {
    RawDatum {
        group_rank: s,
        cartan: CartanMatrix::parse(cartan).unwrap().entries().to_vec(),
        g: g.iter().map(|r| r.to_vec()).collect(),
        chi: chi.iter().map(|r| r.iter().map(|x| mono(x)).collect()).collect(),
        linking: linking.to_vec(),
    }
}

pub fn uqsl2() -> RawDatum {
    raw(1, "A1xA1", &[&[1], &[1]], &[&["q^-2"], &["q^2"]], &[(0, 1)])
}

pub fn a2xa1_pointed() -> RawDatum {
    raw(
        3,
        "A2xA1",
        &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]],
        &[&["q", "q^-2", "q^4"], &["q", "q", "q^-2"], &["q^-4", "q^2", "q^-4"]],
        &[],
    )
}

/// Gauss-Jordan inverse over the rationals.
fn rational_inverse(m: &[Vec<i64>]) -> Option<Vec<Vec<Rational64>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational64>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<Rational64> = row.iter().map(|&x| Rational64::from_integer(x)).collect();
            r.extend((0..n).map(|j| Rational64::from_integer(i64::from(i == j))));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| a[r][c] != Rational64::from_integer(0))?;
        a.swap(c, p);
        let pivot = a[c][c];
        for x in a[c].iter_mut() {
            *x /= pivot;
        }
        for r in 0..n {
            if r != c {
                let f = a[r][c];
                let row_c = a[c].clone();
                for (x, y) in a[r].iter_mut().zip(row_c) {
                    *x -= f * y;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

fn small_rational(rng: &mut impl Rng, span: i64, max_den: i64) -> Rational64 {
    Rational64::new(rng.gen_range(-span..=span), rng.gen_range(1..=max_den))
}

/// A random valid datum of the named type.
///
/// The braiding exponents are built as `d_i a_ij c + K_ij` with `c` constant on
/// components and `K` antisymmetric, which is the general solution of the
/// compatibility conditions; group-likes and characters then realize them.
pub fn random_datum(rng: &mut impl Rng, cartan_name: &str) -> RawDatum {
    let cartan = CartanMatrix::named(cartan_name).unwrap();
    let theta = cartan.rank();
    let d = cartan.symmetrizer().to_vec();
    let params = [Param::new("q").unwrap(), Param::new("t").unwrap()];
    let s = theta + rng.gen_range(0..=1);
    loop {
        // c per component and parameter
        let comp_c: Vec<[Rational64; 2]> = cartan
            .components()
            .iter()
            .map(|_| {
                let mut cq = 0;
                while cq == 0 {
                    cq = rng.gen_range(-2..=2);
                }
                let ct = if rng.gen_bool(0.3) { rng.gen_range(-1..=1) } else { 0 };
                [Rational64::from_integer(cq), Rational64::from_integer(ct)]
            })
            .collect();
        let dj = rng.gen_bool(0.3);
        let mut skew = vec![vec![[Rational64::from_integer(0); 2]; theta]; theta];
        if !dj {
            for i in 0..theta {
                for j in i + 1..theta {
                    for p in 0..2 {
                        let v = if p == 0 { small_rational(rng, 2, 2) } else { Rational64::from_integer(rng.gen_range(-1..=1)) };
                        skew[i][j][p] = v;
                        skew[j][i][p] = -v;
                    }
                }
            }
        }
        let e = |i: usize, j: usize, p: usize| {
            let c = comp_c[cartan.component_of(i)][p];
            c * Rational64::from_integer(d[i] * cartan.entry(i, j)) + skew[i][j][p]
        };
        let g0: Vec<Vec<i64>> = (0..theta).map(|_| (0..theta).map(|_| rng.gen_range(-2..=2)).collect()).collect();
        let Some(inv) = rational_inverse(&g0) else { continue };
        let g1: Vec<Vec<i64>> = (0..theta).map(|_| (0..s - theta).map(|_| rng.gen_range(-1..=1)).collect()).collect();
        let x1: Vec<Vec<[Rational64; 2]>> = (0..theta)
            .map(|_| (0..s - theta).map(|_| [Rational64::from_integer(rng.gen_range(-1..=1)), Rational64::from_integer(0)]).collect())
            .collect();
        // exponent of χ_j(y_h) for parameter p
        let mut x = vec![vec![[Rational64::from_integer(0); 2]; s]; theta];
        for j in 0..theta {
            for (h, v) in x1[j].iter().enumerate() {
                x[j][theta + h] = *v;
            }
            for p in 0..2 {
                // column j of E − G1 X1^T
                let rhs: Vec<Rational64> = (0..theta)
                    .map(|i| {
                        let mut r = e(i, j, p);
                        for h in 0..s - theta {
                            r -= Rational64::from_integer(g1[i][h]) * x1[j][h][p];
                        }
                        r
                    })
                    .collect();
                for h in 0..theta {
                    x[j][h][p] = (0..theta).map(|i| inv[h][i] * rhs[i]).sum();
                }
            }
        }
        let g: Vec<Vec<i64>> = (0..theta).map(|i| g0[i].iter().chain(&g1[i]).copied().collect()).collect();
        let mut chi: Vec<Vec<Monomial>> = x
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| Monomial::from_factors(false, params.iter().copied().zip(v.iter().copied())))
                    .collect()
            })
            .collect();
        let mut candidate = RawDatum { group_rank: s, cartan: cartan.entries().to_vec(), g, chi: chi.clone(), linking: Vec::new() };
        if rng.gen_bool(0.3) {
            for row in chi.iter_mut() {
                for v in row.iter_mut() {
                    if rng.gen_bool(0.3) {
                        *v = &*v * &Monomial::minus_one();
                    }
                }
            }
            let signed = RawDatum { chi, ..candidate.clone() };
            if GenericDatum::new(signed.clone()).is_ok() {
                candidate = signed;
            }
        }
        if GenericDatum::new(candidate.clone()).is_err() {
            continue;
        }
        for i in 0..theta {
            for j in i + 1..theta {
                let mut linked = candidate.clone();
                linked.linking.push((i, j));
                if rng.gen_bool(0.5) && GenericDatum::new(linked.clone()).is_ok() {
                    candidate = linked;
                }
            }
        }
        return candidate;
    }
}

/// A random element of `GL_s(Z)` as a product of elementary moves.
pub fn random_unimodular(rng: &mut impl Rng, s: usize) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<i64>> = (0..s).map(|i| (0..s).map(|j| i64::from(i == j)).collect()).collect();
    for _ in 0..rng.gen_range(0..6) {
        let (a, b) = (rng.gen_range(0..s), rng.gen_range(0..s));
        match rng.gen_range(0..3) {
            0 if a != b => {
                let f = rng.gen_range(-2..=2);
                let row_b = m[b].clone();
                for (x, y) in m[a].iter_mut().zip(row_b) {
                    *x += f * y;
                }
            }
            1 => m.swap(a, b),
            _ => m[a].iter_mut().for_each(|x| *x = -*x),
        }
    }
    m
}

pub fn random_permutation(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    use rand::seq::SliceRandom;
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

/// A random member of the `A1×A1`, `χ_2 = χ_1^{-1}` families, moved by a random
/// group automorphism and possibly a vertex swap.
pub fn random_cy_family(rng: &mut impl Rng) -> RawDatum {
    use pointed_cy::isomorphism::transport;
    loop {
        let s = rng.gen_range(1..=2);
        let k = *[-3i64, -2, -1, 1, 2, 3].iter().nth(rng.gen_range(0..6)).unwrap();
        let e = Rational64::new(*[-2i64, -1, 1, 2].iter().nth(rng.gen_range(0..4)).unwrap(), rng.gen_range(1..=2));
        let (g, chi1) = if s == 1 {
            (vec![vec![k], vec![k]], vec![q_pow(e)])
        } else {
            let l2 = rng.gen_range(0..=3);
            if l2 == 0 {
                let second = if rng.gen_bool(0.5) { mono("t") } else { q_pow(small_rational(rng, 2, 2)) };
                (vec![vec![k, 0], vec![k, 0]], vec![q_pow(e), second])
            } else {
                let l1 = rng.gen_range(-3..=3);
                let second = q_pow(e * Rational64::new(k - l1, l2));
                (vec![vec![k, 0], vec![l1, l2]], vec![q_pow(e), second])
            }
        };
        let chi2 = chi1.iter().map(Monomial::inv).collect();
        let linking = if rng.gen_bool(0.5) { vec![(0, 1)] } else { Vec::new() };
        let raw = RawDatum { group_rank: s, cartan: vec![vec![2, 0], vec![0, 2]], g, chi: vec![chi1, chi2], linking };
        let Ok(datum) = GenericDatum::new(raw) else { continue };
        let m = random_unimodular(rng, s);
        let sigma = random_permutation(rng, 2);
        let (moved, _) = transport(&datum, &m, &sigma).unwrap();
        return moved.to_raw();
    }
}

/// The shared randomized sample: 50 data per type, a third of the `A1×A1`
/// ones drawn from the CY families.
pub fn sample(seed: u64) -> Vec<RawDatum> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for name in TYPES {
        for n in 0..50 {
            if name == "A1xA1" && n % 3 == 0 {
                out.push(random_cy_family(&mut rng));
            } else {
                out.push(random_datum(&mut rng, name));
            }
        }
    }
    out
}
