//! Named example maps.
//!
//! | name                     | params            | trace preserving |
//! |--------------------------|-------------------|------------------|
//! | `identity`               | `dim`             | yes              |
//! | `transpose`              | `dim`             | yes              |
//! | `depolarizing`           | `dim`, `p`        | yes              |
//! | `completely_depolarizing`| `dim`             | yes              |
//! | `amplitude_damping`      | `gamma` (dim 2)   | yes              |
//! | `random_hp`              | `dim`, `p`, `q`, `seed` | not imposed |

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{MapDocument, Meta};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::maps::{osr_from_choi, ChoiMatrix, OsrTerm, SignedOsr, DEFAULT_RANK_TOL};

pub const FIXTURE_NAMES: &[&str] = &[
    "identity",
    "transpose",
    "depolarizing",
    "completely_depolarizing",
    "amplitude_damping",
    "random_hp",
];

/// Optional fixture parameters; each fixture reads the ones it needs.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FixtureParams {
    pub dim: Option<usize>,
    /// Depolarizing strength, or the positive-term count for `random_hp`.
    pub p: Option<f64>,
    /// Negative-term count for `random_hp`.
    pub q: Option<usize>,
    pub gamma: Option<f64>,
    pub seed: Option<u64>,
}

impl FixtureParams {
    pub fn with_dim(dim: usize) -> Self {
        Self {
            dim: Some(dim),
            ..Default::default()
        }
    }
}

/// Generates the named fixture as an `osr` document.
pub fn gen_fixture(name: &str, params: &FixtureParams) -> Result<MapDocument> {
    let dim = params.dim.unwrap_or(2);
    if dim == 0 {
        return Err(Error::ParamOutOfRange("dim must be positive".into()));
    }
    let (osr, description) = match name {
        "identity" => (identity(dim), format!("identity map, d={dim}")),
        "transpose" => (transpose(dim)?, format!("transpose map, d={dim}")),
        "depolarizing" => {
            let p = params
                .p
                .ok_or_else(|| Error::ParamOutOfRange("depolarizing needs p".into()))?;
            if !p.is_finite() {
                return Err(Error::ParamOutOfRange(format!("p must be finite, got {p}")));
            }
            (
                depolarizing(dim, p)?,
                format!("(1-p)ρ + p·Tr(ρ)I/d with p={p}, d={dim}"),
            )
        }
        "completely_depolarizing" => (completely_depolarizing(dim), format!("Tr(ρ)I/d, d={dim}")),
        "amplitude_damping" => {
            if dim != 2 {
                return Err(Error::ParamOutOfRange(format!(
                    "amplitude_damping is defined for dim 2, got {dim}"
                )));
            }
            let gamma = params
                .gamma
                .ok_or_else(|| Error::ParamOutOfRange("amplitude_damping needs gamma".into()))?;
            if !(0.0..=1.0).contains(&gamma) {
                return Err(Error::ParamOutOfRange(format!(
                    "gamma must lie in [0, 1], got {gamma}"
                )));
            }
            (
                amplitude_damping(gamma),
                format!("amplitude damping, γ={gamma}"),
            )
        }
        "random_hp" => {
            let p = params.p.unwrap_or(1.0);
            if p < 0.0 || p.fract() != 0.0 {
                return Err(Error::ParamOutOfRange(format!(
                    "random_hp needs a non-negative integer p, got {p}"
                )));
            }
            let p = p as usize;
            let q = params.q.unwrap_or(0);
            let seed = params.seed.unwrap_or(0);
            if p + q > dim * dim {
                return Err(Error::ParamOutOfRange(format!(
                    "p + q = {} exceeds d² = {}",
                    p + q,
                    dim * dim
                )));
            }
            (
                random_hp(dim, p, q, seed)?,
                format!("random Hermiticity-preserving map, p={p}, q={q}, seed={seed}, d={dim}"),
            )
        }
        other => return Err(Error::UnknownFixture(other.to_string())),
    };
    Ok(MapDocument::from_osr(
        &osr,
        Some(Meta {
            name: Some(name.to_string()),
            description: Some(description),
        }),
    ))
}

fn unit(d: usize, i: usize, j: usize) -> ComplexMatrix {
    let mut e = ComplexMatrix::zeros(d, d);
    e[(i, j)] = Complex64::new(1.0, 0.0);
    e
}

fn identity(dim: usize) -> SignedOsr {
    SignedOsr::new(dim, vec![OsrTerm::plus(ComplexMatrix::identity(dim))]).expect("d×d operator")
}

fn transpose(dim: usize) -> Result<SignedOsr> {
    let n = dim * dim;
    let mut swap = ComplexMatrix::zeros(n, n);
    for i in 0..dim {
        for j in 0..dim {
            swap[(i * dim + j, j * dim + i)] = Complex64::new(1.0, 0.0);
        }
    }
    osr_from_choi(&ChoiMatrix::new(dim, swap)?, DEFAULT_RANK_TOL)
}

fn depolarizing(dim: usize, p: f64) -> Result<SignedOsr> {
    // B = (1−p)·vec(I)vec(I)† + (p/d)·I
    let n = dim * dim;
    let mut b = ComplexMatrix::identity(n).scale_real(p / dim as f64);
    for r in 0..dim {
        for s in 0..dim {
            b[(r * dim + r, s * dim + s)] += Complex64::new(1.0 - p, 0.0);
        }
    }
    osr_from_choi(&ChoiMatrix::new(dim, b)?, DEFAULT_RANK_TOL)
}

fn completely_depolarizing(dim: usize) -> SignedOsr {
    let scale = 1.0 / (dim as f64).sqrt();
    let terms = (0..dim)
        .flat_map(|i| (0..dim).map(move |j| OsrTerm::plus(unit(dim, i, j).scale_real(scale))))
        .collect();
    SignedOsr::new(dim, terms).expect("d×d operators")
}

fn amplitude_damping(gamma: f64) -> SignedOsr {
    SignedOsr::new(
        2,
        vec![
            OsrTerm::plus(ComplexMatrix::from_real_rows(&[
                [1.0, 0.0],
                [0.0, (1.0 - gamma).sqrt()],
            ])),
            OsrTerm::plus(ComplexMatrix::from_real_rows(&[
                [0.0, gamma.sqrt()],
                [0.0, 0.0],
            ])),
        ],
    )
    .expect("2×2 operators")
}

/// `B = Σₖ ±wₖ vₖvₖ†` over random orthonormal `vₖ` with weights in `[0.5, 1.5]`.
fn random_hp(dim: usize, p: usize, q: usize, seed: u64) -> Result<SignedOsr> {
    let n = dim * dim;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(p + q);
    while basis.len() < p + q {
        let mut v: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0))
            .collect();
        for _ in 0..2 {
            for b in &basis {
                let overlap: Complex64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= overlap * bi;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-6 {
            continue;
        }
        basis.push(v.into_iter().map(|z| z / norm).collect());
    }
    let mut b = ComplexMatrix::zeros(n, n);
    for (k, v) in basis.iter().enumerate() {
        let weight = 0.5 + rng.gen::<f64>();
        let signed = if k < p { weight } else { -weight };
        b = &b + &ComplexMatrix::outer(v, v).scale_real(signed);
    }
    let b = (&b + &b.adjoint()).scale_real(0.5);
    osr_from_choi(&ChoiMatrix::new(dim, b)?, DEFAULT_RANK_TOL)
}
