#![allow(dead_code)]

use qmap::linalg::{Complex64, ComplexMatrix};
use qmap::maps::{OsrTerm, Sign, SignedOsr};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> ComplexMatrix {
    let data = (0..rows * cols)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    ComplexMatrix::new(rows, cols, data).unwrap()
}

pub fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let x = random_matrix(rng, n, n);
    (&x + &x.adjoint()).scale_real(0.5)
}

/// Random OSR with `n` terms; signs drawn uniformly unless `all_plus`.
pub fn random_osr(rng: &mut ChaCha8Rng, dim: usize, n: usize, all_plus: bool) -> SignedOsr {
    let terms = (0..n)
        .map(|_| {
            let sign = if all_plus || rng.gen_bool(0.5) {
                Sign::Plus
            } else {
                Sign::Minus
            };
            OsrTerm::new(sign, random_matrix(rng, dim, dim))
        })
        .collect();
    SignedOsr::new(dim, terms).unwrap()
}

/// Dimension in {2, 3, 4} and 1..=8 terms.
pub fn random_case(rng: &mut ChaCha8Rng, all_plus: bool) -> SignedOsr {
    let dim = rng.gen_range(2..=4);
    let n = rng.gen_range(1..=8);
    random_osr(rng, dim, n, all_plus)
}

pub fn rel_err(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.distance(b) / b.frob_norm().max(f64::MIN_POSITIVE)
}

/// Superoperator action by explicit index sums: out[i,j] = Σ η C[i,k] ρ[k,l] conj(C[j,l]).
pub fn naive_apply(osr: &SignedOsr, rho: &ComplexMatrix) -> ComplexMatrix {
    let d = osr.dim();
    let mut out = ComplexMatrix::zeros(d, d);
    for t in osr.terms() {
        let eta = t.sign.value();
        for i in 0..d {
            for j in 0..d {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..d {
                    for l in 0..d {
                        acc += t.op[(i, k)] * rho[(k, l)] * t.op[(j, l)].conj();
                    }
                }
                out[(i, j)] += acc * eta;
            }
        }
    }
    out
}

/// Choi matrix by explicit index sums: B[(i,j),(k,l)] = Σ η C[i,j] conj(C[k,l]).
pub fn naive_choi(osr: &SignedOsr) -> ComplexMatrix {
    let d = osr.dim();
    let mut b = ComplexMatrix::zeros(d * d, d * d);
    for t in osr.terms() {
        let eta = t.sign.value();
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        b[(i * d + j, k * d + l)] += t.op[(i, j)] * t.op[(k, l)].conj() * eta;
                    }
                }
            }
        }
    }
    b
}

/// Rank of the operators as vectors, by modified Gram-Schmidt with a relative cutoff.
pub fn operator_rank(ops: &[&ComplexMatrix], rel_tol: f64) -> usize {
    let scale = ops.iter().map(|m| m.frob_norm()).fold(0.0, f64::max);
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    for m in ops {
        let mut v = m.as_slice().to_vec();
        for _ in 0..2 {
            for b in &basis {
                let c: Complex64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= c * bi;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > rel_tol * scale {
            basis.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    basis.len()
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn det(m: &ComplexMatrix) -> Complex64 {
    let n = m.rows();
    let mut a: Vec<Vec<Complex64>> = (0..n)
        .map(|i| (0..n).map(|j| m[(i, j)]).collect())
        .collect();
    let mut det = Complex64::new(1.0, 0.0);
    for k in 0..n {
        let p = (k..n)
            .max_by(|&x, &y| a[x][k].norm().partial_cmp(&a[y][k].norm()).unwrap())
            .unwrap();
        if a[p][k].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        det *= a[k][k];
        let (top, rest) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in rest.iter_mut() {
            let f = row[k] / pivot_row[k];
            for (x, &y) in row[k..].iter_mut().zip(&pivot_row[k..]) {
                *x -= f * y;
            }
        }
    }
    det
}

pub fn leading_minor(m: &ComplexMatrix, k: usize) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            out[(i, j)] = m[(i, j)];
        }
    }
    out
}

/// Every fixture at small dimensions, with representative parameters.
pub fn all_fixtures() -> Vec<(String, SignedOsr)> {
    use qmap::mapio::{gen_fixture, FixtureParams, QuantumMap};
    let mut out = Vec::new();
    let mut push = |label: String, params: FixtureParams, name: &str| {
        let doc = gen_fixture(name, &params).unwrap();
        match doc.to_map().unwrap() {
            QuantumMap::Osr(osr) => out.push((label, osr)),
            _ => panic!("fixtures are osr documents"),
        }
    };
    for dim in 2..=3 {
        for name in ["identity", "transpose", "completely_depolarizing"] {
            push(
                format!("{name} d={dim}"),
                FixtureParams::with_dim(dim),
                name,
            );
        }
        for p in [0.0, 0.5, 1.2, 1.5] {
            let params = FixtureParams {
                p: Some(p),
                ..FixtureParams::with_dim(dim)
            };
            push(
                format!("depolarizing d={dim} p={p}"),
                params,
                "depolarizing",
            );
        }
        for (p, q, seed) in [(1.0, 0, 0), (2.0, 1, 7), (1.0, 2, 11)] {
            let params = FixtureParams {
                p: Some(p),
                q: Some(q),
                seed: Some(seed),
                ..FixtureParams::with_dim(dim)
            };
            push(format!("random_hp d={dim} ({p}, {q})"), params, "random_hp");
        }
    }
    for gamma in [0.0, 0.3, 1.0] {
        let params = FixtureParams {
            gamma: Some(gamma),
            ..FixtureParams::with_dim(2)
        };
        push(
            format!("amplitude_damping gamma={gamma}"),
            params,
            "amplitude_damping",
        );
    }
    out
}
