//! Representations of a linear map on d×d matrices and the conversions between them.
//!
//! Three forms carry the same map:
//!
//! * [`Superoperator`] `A`, acting on row-major vectorized inputs: `vec(Φ(ρ)) = A·vec(ρ)`.
//! * [`ChoiMatrix`] `B = Σ ηₖ vec(Cₖ) vec(Cₖ)†`, obtained from `A` by [`reshuffle`].
//! * [`SignedOsr`], the list of `(ηₖ, Cₖ)` with `Φ(ρ) = Σ ηₖ Cₖ ρ Cₖ†` and `ηₖ = ±1`.
//!
//! The vectorization is row-major everywhere: `vec(C)[i·d + j] = C[i, j]`.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{herm_eig, ComplexMatrix, HermEig};

/// Relative cutoff below which Choi eigenvalues are treated as zero.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;
/// Relative tolerance for the HP / CP / TP predicates.
pub const DEFAULT_TOL: f64 = 1e-8;
/// Hermiticity tolerance enforced when wrapping a matrix as a [`ChoiMatrix`].
pub const CHOI_HERMITIAN_TOL: f64 = 1e-10;

/// Sign of an operator-sum term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_i64(v: i64) -> Option<Self> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

/// One `(ηₖ, Cₖ)` pair.
#[derive(Debug, Clone, PartialEq)]
pub struct OsrTerm {
    pub sign: Sign,
    pub op: ComplexMatrix,
}

impl OsrTerm {
    pub fn new(sign: Sign, op: ComplexMatrix) -> Self {
        Self { sign, op }
    }

    pub fn plus(op: ComplexMatrix) -> Self {
        Self::new(Sign::Plus, op)
    }

    pub fn minus(op: ComplexMatrix) -> Self {
        Self::new(Sign::Minus, op)
    }
}

/// Signed operator-sum representation `Φ(ρ) = Σ ηₖ Cₖ ρ Cₖ†`.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedOsr {
    dim: usize,
    terms: Vec<OsrTerm>,
}

impl SignedOsr {
    pub fn new(dim: usize, terms: Vec<OsrTerm>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimensionMismatch(
                "dimension must be positive".into(),
            ));
        }
        for (k, term) in terms.iter().enumerate() {
            if term.op.shape() != (dim, dim) {
                return Err(Error::DimensionMismatch(format!(
                    "term {k} is {}x{}, expected {dim}x{dim}",
                    term.op.rows(),
                    term.op.cols()
                )));
            }
        }
        Ok(Self { dim, terms })
    }

    /// The map with no terms.
    pub fn empty(dim: usize) -> Self {
        Self {
            dim,
            terms: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[OsrTerm] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<OsrTerm> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(#{+1}, #{−1})`.
    pub fn sign_counts(&self) -> (usize, usize) {
        let plus = self.terms.iter().filter(|t| t.sign == Sign::Plus).count();
        (plus, self.terms.len() - plus)
    }

    /// True when all `+1` terms precede all `−1` terms.
    pub fn is_sign_ordered(&self) -> bool {
        self.terms
            .windows(2)
            .all(|w| !(w[0].sign == Sign::Minus && w[1].sign == Sign::Plus))
    }

    /// Same map with terms stably reordered so `+1` terms come first.
    pub fn sign_ordered(&self) -> Self {
        let (plus, minus): (Vec<_>, Vec<_>) = self
            .terms
            .iter()
            .cloned()
            .partition(|t| t.sign == Sign::Plus);
        Self {
            dim: self.dim,
            terms: plus.into_iter().chain(minus).collect(),
        }
    }
}

/// Superoperator `A` with `vec(Φ(ρ)) = A·vec(ρ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Superoperator {
    dim: usize,
    matrix: ComplexMatrix,
}

impl Superoperator {
    pub fn new(dim: usize, matrix: ComplexMatrix) -> Result<Self> {
        check_square_of(dim, &matrix)?;
        Ok(Self { dim, matrix })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        if rho.shape() != (self.dim, self.dim) {
            return Err(Error::DimensionMismatch(format!(
                "input is {}x{}, map acts on {d}x{d}",
                rho.rows(),
                rho.cols(),
                d = self.dim
            )));
        }
        let out = self.matrix.matmul(&ComplexMatrix::column(&vec(rho)))?;
        unvec(out.as_slice(), self.dim)
    }

    pub fn to_choi_matrix(&self) -> ComplexMatrix {
        reshuffle(&self.matrix).expect("superoperator shape validated at construction")
    }

    pub fn to_choi(&self) -> Result<ChoiMatrix> {
        ChoiMatrix::new(self.dim, self.to_choi_matrix())
    }
}

/// Hermitian Choi matrix `B = Σ ηₖ vec(Cₖ) vec(Cₖ)†`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiMatrix {
    dim: usize,
    matrix: ComplexMatrix,
}

impl ChoiMatrix {
    /// Wraps a d²×d² matrix, requiring Hermiticity within [`CHOI_HERMITIAN_TOL`].
    pub fn new(dim: usize, matrix: ComplexMatrix) -> Result<Self> {
        check_square_of(dim, &matrix)?;
        let scale = matrix.frob_norm().max(1.0);
        let defect = matrix.hermiticity_defect();
        if defect > CHOI_HERMITIAN_TOL * scale {
            return Err(Error::NotHermitian {
                defect: defect / scale,
            });
        }
        Ok(Self { dim, matrix })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn eig(&self) -> Result<HermEig> {
        herm_eig(&self.matrix, CHOI_HERMITIAN_TOL)
    }

    pub fn to_superop(&self) -> Superoperator {
        Superoperator {
            dim: self.dim,
            matrix: reshuffle(&self.matrix).expect("choi shape validated at construction"),
        }
    }
}

/// Counts of positive, negative and near-zero Choi eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Signature {
    pub p: usize,
    pub q: usize,
    pub z: usize,
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.p, self.q, self.z)
    }
}

/// Classification summary of a map given by its Choi-layout matrix.
///
/// `signature` and `choi_eigenvalues` are only defined for Hermiticity-preserving maps.
#[derive(Debug, Clone, PartialEq)]
pub struct MapReport {
    pub dim: usize,
    pub hermiticity_preserving: bool,
    pub completely_positive: bool,
    pub trace_preserving: bool,
    pub signature: Option<Signature>,
    pub choi_eigenvalues: Option<Vec<f64>>,
}

impl MapReport {
    /// Classifies the map whose Choi-layout matrix is `raw`. Predicates use `tol`;
    /// the signature uses [`DEFAULT_RANK_TOL`].
    pub fn analyze(dim: usize, raw: &ComplexMatrix, tol: f64) -> Result<Self> {
        check_square_of(dim, raw)?;
        let hermiticity_preserving = is_hp(raw, tol)?;
        let trace_preserving = choi_trace_defect(dim, raw) <= tol;
        if !hermiticity_preserving {
            return Ok(Self {
                dim,
                hermiticity_preserving,
                completely_positive: false,
                trace_preserving,
                signature: None,
                choi_eigenvalues: None,
            });
        }
        // Hermitian within `tol`; symmetrize before handing to the stricter Choi wrapper.
        let hermitian = (raw + &raw.adjoint()).scale_real(0.5);
        let choi = ChoiMatrix::new(dim, hermitian)?;
        let eig = choi.eig()?;
        let sig = signature_of_values(&eig.values, DEFAULT_RANK_TOL);
        let completely_positive = cp_from_values(&eig.values, choi.matrix.frob_norm(), tol);
        Ok(Self {
            dim,
            hermiticity_preserving,
            completely_positive,
            trace_preserving,
            signature: Some(sig),
            choi_eigenvalues: Some(eig.values),
        })
    }
}

fn check_square_of(dim: usize, m: &ComplexMatrix) -> Result<()> {
    if dim == 0 || m.shape() != (dim * dim, dim * dim) {
        return Err(Error::DimensionMismatch(format!(
            "expected {n}x{n} matrix for dimension {dim}, got {}x{}",
            m.rows(),
            m.cols(),
            n = dim * dim
        )));
    }
    Ok(())
}

/// Row-major vectorization, `vec(C)[i·d + j] = C[i, j]`.
pub fn vec(c: &ComplexMatrix) -> Vec<Complex64> {
    c.as_slice().to_vec()
}

/// Inverse of [`vec`].
pub fn unvec(v: &[Complex64], dim: usize) -> Result<ComplexMatrix> {
    if dim == 0 || v.len() != dim * dim {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} cannot be reshaped to {dim}x{dim}",
            v.len()
        )));
    }
    ComplexMatrix::new(dim, dim, v.to_vec())
}

/// `Σₖ ηₖ Cₖ ρ Cₖ†`.
pub fn apply_osr(osr: &SignedOsr, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    let d = osr.dim;
    if rho.shape() != (d, d) {
        return Err(Error::DimensionMismatch(format!(
            "input is {}x{}, map acts on {d}x{d}",
            rho.rows(),
            rho.cols()
        )));
    }
    let mut out = ComplexMatrix::zeros(d, d);
    for term in &osr.terms {
        let conj = &(&term.op * rho) * &term.op.adjoint();
        out = &out + &conj.scale_real(term.sign.value());
    }
    Ok(out)
}

/// `A = Σₖ ηₖ Cₖ ⊗ conj(Cₖ)`.
pub fn superop_from_osr(osr: &SignedOsr) -> Superoperator {
    let d = osr.dim;
    let mut a = ComplexMatrix::zeros(d * d, d * d);
    for term in &osr.terms {
        let k = term.op.kron(&term.op.conj());
        a = &a + &k.scale_real(term.sign.value());
    }
    Superoperator { dim: d, matrix: a }
}

/// `B = Σₖ ηₖ vec(Cₖ) vec(Cₖ)†`.
pub fn choi_from_osr(osr: &SignedOsr) -> ChoiMatrix {
    ChoiMatrix {
        dim: osr.dim,
        matrix: choi_matrix_from_terms(osr.dim, &osr.terms),
    }
}

pub(crate) fn choi_matrix_from_terms(dim: usize, terms: &[OsrTerm]) -> ComplexMatrix {
    let n = dim * dim;
    let mut b = ComplexMatrix::zeros(n, n);
    for term in terms {
        let v = term.op.as_slice();
        let s = term.sign.value();
        for i in 0..n {
            let vi = v[i] * s;
            for j in 0..n {
                b[(i, j)] += vi * v[j].conj();
            }
        }
    }
    b
}

/// Index permutation `B[(i,j),(k,l)] = A[(i,k),(j,l)]` between superoperator and
/// Choi layouts. It is an involution.
pub fn reshuffle(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "reshuffle needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    let d = (n as f64).sqrt().round() as usize;
    if d * d != n {
        return Err(Error::DimensionNotSquare(n));
    }
    let mut out = ComplexMatrix::zeros(n, n);
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                for l in 0..d {
                    out[(i * d + j, k * d + l)] = m[(i * d + k, j * d + l)];
                }
            }
        }
    }
    Ok(out)
}

/// Canonical (spectral) signed OSR of a Choi matrix.
///
/// Each eigenpair with `|λ| > rank_tol · max|λ|` becomes the term
/// `(sign λ, √|λ| · unvec(v))`. Positive terms come first, then negative ones,
/// each group by decreasing `|λ|`. The operators are mutually orthogonal in the
/// Hilbert–Schmidt inner product, so the decomposition is minimal.
pub fn osr_from_choi(choi: &ChoiMatrix, rank_tol: f64) -> Result<SignedOsr> {
    let eig = choi.eig()?;
    Ok(osr_from_eig(choi.dim, &eig, rank_tol))
}

pub(crate) fn osr_from_eig(dim: usize, eig: &HermEig, rank_tol: f64) -> SignedOsr {
    let max_abs = eig.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let cutoff = rank_tol * max_abs;
    let n = eig.values.len();
    let positive = (0..n).filter(|&k| eig.values[k] > cutoff);
    let negative = (0..n).rev().filter(|&k| eig.values[k] < -cutoff);
    let terms = positive
        .chain(negative)
        .map(|k| {
            let lambda = eig.values[k];
            let scale = lambda.abs().sqrt();
            let v: Vec<Complex64> = eig.vector(k).into_iter().map(|z| z * scale).collect();
            let sign = if lambda > 0.0 {
                Sign::Plus
            } else {
                Sign::Minus
            };
            OsrTerm::new(
                sign,
                ComplexMatrix::new(dim, dim, v).expect("eigenvector length d²"),
            )
        })
        .collect();
    SignedOsr { dim, terms }
}

/// Inertia of the Choi matrix with a cutoff of `rank_tol · max(1, max|λ|)`.
pub fn signature(choi: &ChoiMatrix, rank_tol: f64) -> Result<Signature> {
    let eig = choi.eig()?;
    Ok(signature_of_values(&eig.values, rank_tol))
}

pub(crate) fn signature_of_values(values: &[f64], rank_tol: f64) -> Signature {
    let max_abs = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let cutoff = rank_tol * max_abs.max(1.0);
    let p = values.iter().filter(|&&v| v > cutoff).count();
    let q = values.iter().filter(|&&v| v < -cutoff).count();
    Signature {
        p,
        q,
        z: values.len() - p - q,
    }
}

/// Completely positive: smallest Choi eigenvalue `≥ −tol · max(1, ‖B‖_F)`.
pub fn is_cp(choi: &ChoiMatrix, tol: f64) -> Result<bool> {
    let eig = choi.eig()?;
    Ok(cp_from_values(&eig.values, choi.matrix.frob_norm(), tol))
}

fn cp_from_values(values: &[f64], norm: f64, tol: f64) -> bool {
    values.last().is_none_or(|&min| min >= -tol * norm.max(1.0))
}

/// Hermiticity preserving: `‖B − B†‖_F ≤ tol · max(1, ‖B‖_F)` for the d²×d² Choi-layout matrix.
pub fn is_hp(matrix: &ComplexMatrix, tol: f64) -> Result<bool> {
    if !matrix.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "expected a square matrix, got {}x{}",
            matrix.rows(),
            matrix.cols()
        )));
    }
    Ok(matrix.is_hermitian(tol))
}

/// Trace preserving: `‖Σₖ ηₖ Cₖ†Cₖ − I‖_F ≤ tol`.
pub fn is_tp(osr: &SignedOsr, tol: f64) -> bool {
    tp_defect(osr) <= tol
}

/// `‖Σₖ ηₖ Cₖ†Cₖ − I‖_F`.
pub fn tp_defect(osr: &SignedOsr) -> f64 {
    let d = osr.dim;
    let mut acc = ComplexMatrix::zeros(d, d);
    for term in &osr.terms {
        acc = &acc + &(&term.op.adjoint() * &term.op).scale_real(term.sign.value());
    }
    acc.distance(&ComplexMatrix::identity(d))
}

/// Trace-preservation defect read off a Choi-layout matrix:
/// `(Σₖ ηₖ Cₖ†Cₖ)[i, j] = Σₐ B[(a,j),(a,i)]`.
pub fn choi_trace_defect(dim: usize, b: &ComplexMatrix) -> f64 {
    let d = dim;
    let mut acc = ComplexMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            acc[(i, j)] = (0..d).map(|a| b[(a * d + j, a * d + i)]).sum();
        }
    }
    acc.distance(&ComplexMatrix::identity(d))
}

/// Splits a signed OSR into two completely positive maps with `Φ = Φ₊ − Φ₋`.
pub fn cp_difference(osr: &SignedOsr) -> (SignedOsr, SignedOsr) {
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for term in &osr.terms {
        match term.sign {
            Sign::Plus => plus.push(term.clone()),
            Sign::Minus => minus.push(OsrTerm::plus(term.op.clone())),
        }
    }
    (
        SignedOsr {
            dim: osr.dim,
            terms: plus,
        },
        SignedOsr {
            dim: osr.dim,
            terms: minus,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pauli() -> [ComplexMatrix; 4] {
        [
            ComplexMatrix::identity(2),
            ComplexMatrix::from_real_rows(&[[0.0, 1.0], [1.0, 0.0]]),
            ComplexMatrix::from_rows(&[[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]]),
            ComplexMatrix::from_real_rows(&[[1.0, 0.0], [0.0, -1.0]]),
        ]
    }

    fn transpose_osr() -> SignedOsr {
        let [i, x, y, z] = pauli();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        SignedOsr::new(
            2,
            vec![
                OsrTerm::plus(i.scale_real(h)),
                OsrTerm::plus(x.scale_real(h)),
                OsrTerm::plus(z.scale_real(h)),
                OsrTerm::minus(y.scale_real(h)),
            ],
        )
        .unwrap()
    }

    fn unit(d: usize, i: usize, j: usize) -> ComplexMatrix {
        let mut e = ComplexMatrix::zeros(d, d);
        e[(i, j)] = c(1.0, 0.0);
        e
    }

    fn depolarizing_all() -> SignedOsr {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let terms = (0..2)
            .flat_map(|i| (0..2).map(move |j| OsrTerm::plus(unit(2, i, j).scale_real(h))))
            .collect();
        SignedOsr::new(2, terms).unwrap()
    }

    fn identity_osr() -> SignedOsr {
        SignedOsr::new(2, vec![OsrTerm::plus(ComplexMatrix::identity(2))]).unwrap()
    }

    /// Oracle: entry 1 at row (i,j), col (j,i).
    fn swap4() -> ComplexMatrix {
        let mut s = ComplexMatrix::zeros(4, 4);
        for i in 0..2 {
            for j in 0..2 {
                s[(i * 2 + j, j * 2 + i)] = c(1.0, 0.0);
            }
        }
        s
    }

    /// Depolarizing Choi built entrywise: (1−p)·vec(I)vec(I)† + (p/2)·I₄.
    fn depolarizing_choi(p: f64) -> ChoiMatrix {
        let mut b = ComplexMatrix::identity(4).scale_real(p / 2.0);
        for &r in &[0, 3] {
            for &s in &[0, 3] {
                b[(r, s)] += c(1.0 - p, 0.0);
            }
        }
        ChoiMatrix::new(2, b).unwrap()
    }

    #[test]
    fn vec_conventions() {
        assert_eq!(
            vec(&ComplexMatrix::identity(2)),
            vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]
        );
        assert_eq!(
            vec(&unit(2, 0, 1)),
            vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]
        );
        let m = ComplexMatrix::from_rows(&[
            [c(1.0, 2.0), c(3.0, -1.0), c(0.5, 0.0)],
            [c(0.0, 1.0), c(-2.0, 0.0), c(1.0, 1.0)],
            [c(4.0, 0.0), c(0.0, 0.0), c(-1.0, -3.0)],
        ]);
        assert_eq!(unvec(&vec(&m), 3).unwrap(), m);
        assert!(unvec(&vec(&m), 2).is_err());
    }

    #[test]
    fn apply_identity_map() {
        let rho =
            ComplexMatrix::from_rows(&[[c(0.3, 0.0), c(0.1, 0.2)], [c(0.1, -0.2), c(0.7, 0.0)]]);
        assert_eq!(apply_osr(&identity_osr(), &rho).unwrap(), rho);
    }

    #[test]
    fn apply_transpose_map() {
        let rho =
            ComplexMatrix::from_rows(&[[c(1.0, 0.0), c(0.0, 1.0)], [c(0.0, -1.0), c(0.0, 0.0)]]);
        let out = apply_osr(&transpose_osr(), &rho).unwrap();
        assert!(out.distance(&rho.transpose()) < 1e-15);
        // Brute force over the basis E_ij.
        for i in 0..2 {
            for j in 0..2 {
                let out = apply_osr(&transpose_osr(), &unit(2, i, j)).unwrap();
                assert!(out.distance(&unit(2, j, i)) < 1e-15);
            }
        }
    }

    #[test]
    fn apply_completely_depolarizing() {
        let rho =
            ComplexMatrix::from_rows(&[[c(0.25, 0.0), c(0.1, -0.3)], [c(0.1, 0.3), c(0.75, 0.0)]]);
        let out = apply_osr(&depolarizing_all(), &rho).unwrap();
        assert!(out.distance(&ComplexMatrix::identity(2).scale(rho.trace() / 2.0)) < 1e-15);
    }

    #[test]
    fn apply_rejects_wrong_dimension() {
        assert!(apply_osr(&identity_osr(), &ComplexMatrix::identity(3)).is_err());
    }

    #[test]
    fn superop_examples() {
        assert_eq!(
            superop_from_osr(&identity_osr()).matrix,
            ComplexMatrix::identity(4)
        );

        let a = superop_from_osr(&transpose_osr());
        let mut expected = ComplexMatrix::zeros(4, 4);
        for i in 0..2 {
            for j in 0..2 {
                expected[(i * 2 + j, j * 2 + i)] = c(1.0, 0.0);
            }
        }
        assert!(a.matrix.distance(&expected) < 1e-15);

        let proj = SignedOsr::new(
            2,
            vec![OsrTerm::plus(ComplexMatrix::from_real_diagonal(&[
                1.0, 0.0,
            ]))],
        )
        .unwrap();
        assert_eq!(
            superop_from_osr(&proj).matrix,
            ComplexMatrix::from_real_diagonal(&[1.0, 0.0, 0.0, 0.0])
        );
    }

    #[test]
    fn choi_examples() {
        let b = choi_from_osr(&identity_osr());
        let mut expected = ComplexMatrix::zeros(4, 4);
        for &r in &[0, 3] {
            for &s in &[0, 3] {
                expected[(r, s)] = c(1.0, 0.0);
            }
        }
        assert_eq!(b.matrix, expected);
        assert!(choi_from_osr(&transpose_osr()).matrix.distance(&swap4()) < 1e-15);
        assert!(
            choi_from_osr(&depolarizing_all())
                .matrix
                .distance(&ComplexMatrix::identity(4).scale_real(0.5))
                < 1e-15
        );
    }

    #[test]
    fn reshuffle_examples() {
        let vv = choi_from_osr(&identity_osr()).matrix;
        assert_eq!(reshuffle(&ComplexMatrix::identity(4)).unwrap(), vv);
        let a_t = superop_from_osr(&transpose_osr()).matrix;
        assert!(reshuffle(&a_t).unwrap().distance(&swap4()) < 1e-15);

        let data: Vec<Complex64> = (0..81).map(|k| c(k as f64, -(k as f64) / 3.0)).collect();
        let m = ComplexMatrix::new(9, 9, data).unwrap();
        assert_eq!(reshuffle(&reshuffle(&m).unwrap()).unwrap(), m);
    }

    #[test]
    fn reshuffle_rejects_non_square_dimension() {
        assert!(matches!(
            reshuffle(&ComplexMatrix::zeros(3, 3)),
            Err(Error::DimensionNotSquare(3))
        ));
        assert!(reshuffle(&ComplexMatrix::zeros(4, 2)).is_err());
    }

    #[test]
    fn extraction_of_identity_choi() {
        let osr = osr_from_choi(&choi_from_osr(&identity_osr()), DEFAULT_RANK_TOL).unwrap();
        assert_eq!(osr.len(), 1);
        assert_eq!(osr.terms()[0].sign, Sign::Plus);
        // Equal to I up to a global phase.
        let op = &osr.terms()[0].op;
        let phase = op[(0, 0)];
        assert!((phase.norm() - 1.0).abs() < 1e-14);
        assert!(op.distance(&ComplexMatrix::identity(2).scale(phase)) < 1e-14);
    }

    #[test]
    fn extraction_of_swap() {
        let choi = ChoiMatrix::new(2, swap4()).unwrap();
        let osr = osr_from_choi(&choi, DEFAULT_RANK_TOL).unwrap();
        let signs: Vec<Sign> = osr.terms().iter().map(|t| t.sign).collect();
        assert_eq!(signs, vec![Sign::Plus, Sign::Plus, Sign::Plus, Sign::Minus]);
        assert!(choi_from_osr(&osr).matrix.distance(&swap4()) < 1e-13);
        // The negative term spans Y/√2.
        let y = &pauli()[2];
        let neg = &osr.terms()[3].op;
        let overlap: Complex64 = y
            .as_slice()
            .iter()
            .zip(neg.as_slice())
            .map(|(a, b)| a.conj() * b)
            .sum();
        assert!((overlap.norm() - 2.0 * std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-13);
        let rho =
            ComplexMatrix::from_rows(&[[c(0.2, 0.0), c(0.3, 0.4)], [c(0.3, -0.4), c(0.8, 0.0)]]);
        assert!(apply_osr(&osr, &rho).unwrap().distance(&rho.transpose()) < 1e-13);
    }

    #[test]
    fn extraction_of_scaled_identity_choi() {
        let choi = ChoiMatrix::new(2, ComplexMatrix::identity(4).scale_real(0.5)).unwrap();
        let osr = osr_from_choi(&choi, DEFAULT_RANK_TOL).unwrap();
        assert_eq!(osr.sign_counts(), (4, 0));
        for t in osr.terms() {
            assert!((t.op.frob_norm() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-14);
        }
        assert!(choi_from_osr(&osr).matrix.distance(choi.matrix()) < 1e-14);
    }

    #[test]
    fn signature_examples() {
        let tol = DEFAULT_RANK_TOL;
        assert_eq!(
            signature(&choi_from_osr(&identity_osr()), tol).unwrap(),
            Signature { p: 1, q: 0, z: 3 }
        );
        assert_eq!(
            signature(&choi_from_osr(&transpose_osr()), tol).unwrap(),
            Signature { p: 3, q: 1, z: 0 }
        );
        let b = depolarizing_choi(2.0);
        let values = b.eig().unwrap().values;
        for (got, want) in values.iter().zip([1.0, 1.0, 1.0, -1.0]) {
            assert!((got - want).abs() < 1e-13);
        }
        assert_eq!(signature(&b, tol).unwrap(), Signature { p: 3, q: 1, z: 0 });
    }

    #[test]
    fn predicates_on_identity_and_transpose() {
        let id = identity_osr();
        assert!(is_cp(&choi_from_osr(&id), DEFAULT_TOL).unwrap());
        assert!(is_tp(&id, DEFAULT_TOL));
        let t = transpose_osr();
        assert!(!is_cp(&choi_from_osr(&t), DEFAULT_TOL).unwrap());
        assert!(tp_defect(&t) < 1e-15);
        assert!(is_hp(choi_from_osr(&t).matrix(), DEFAULT_TOL).unwrap());
    }

    #[test]
    fn cp_boundary_of_depolarizing_family() {
        let boundary = 4.0 / 3.0;
        assert!(is_cp(&depolarizing_choi(boundary - 1e-6), DEFAULT_TOL).unwrap());
        assert!(!is_cp(&depolarizing_choi(boundary + 1e-3), DEFAULT_TOL).unwrap());
    }

    #[test]
    fn is_hp_detects_non_hermitian() {
        let mut m = ComplexMatrix::identity(4);
        m[(0, 1)] = c(0.5, 0.0);
        assert!(!is_hp(&m, DEFAULT_TOL).unwrap());
        assert!(is_hp(&ComplexMatrix::zeros(4, 3), DEFAULT_TOL).is_err());
        assert!(ChoiMatrix::new(2, m).is_err());
    }

    #[test]
    fn trace_defect_agrees_between_osr_and_choi() {
        let amp = SignedOsr::new(
            2,
            vec![
                OsrTerm::plus(ComplexMatrix::from_real_rows(&[[1.0, 0.0], [0.0, 0.6]])),
                OsrTerm::plus(ComplexMatrix::from_real_rows(&[[0.0, 0.8], [0.0, 0.0]])),
                OsrTerm::minus(ComplexMatrix::from_rows(&[
                    [c(0.1, 0.2), c(0.0, 0.3)],
                    [c(0.5, 0.0), c(0.0, -0.1)],
                ])),
            ],
        )
        .unwrap();
        let from_choi = choi_trace_defect(2, choi_from_osr(&amp).matrix());
        assert!((from_choi - tp_defect(&amp)).abs() < 1e-14);
    }

    #[test]
    fn cp_difference_examples() {
        let (plus, minus) = cp_difference(&transpose_osr());
        assert_eq!(plus.len(), 3);
        assert_eq!(minus.len(), 1);
        assert!(minus.terms()[0].sign == Sign::Plus);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(minus.terms()[0].op, pauli()[2].scale_real(h));

        let (plus, minus) = cp_difference(&identity_osr());
        assert_eq!(plus, identity_osr());
        assert!(minus.is_empty());

        let neg = SignedOsr::new(2, vec![OsrTerm::minus(ComplexMatrix::identity(2))]).unwrap();
        let (plus, minus) = cp_difference(&neg);
        assert!(plus.is_empty());
        assert_eq!(minus, identity_osr());
    }

    #[test]
    fn report_for_transpose() {
        let b = choi_from_osr(&transpose_osr());
        let r = MapReport::analyze(2, b.matrix(), DEFAULT_TOL).unwrap();
        assert!(r.hermiticity_preserving);
        assert!(!r.completely_positive);
        assert!(r.trace_preserving);
        assert_eq!(r.signature, Some(Signature { p: 3, q: 1, z: 0 }));
    }

    #[test]
    fn report_for_non_hp_map() {
        // Φ(ρ) = E₀₁ ρ E₀₀ is not Hermiticity preserving.
        let a = unit(2, 0, 1).kron(&unit(2, 0, 0));
        let b = reshuffle(&a).unwrap();
        let r = MapReport::analyze(2, &b, DEFAULT_TOL).unwrap();
        assert!(!r.hermiticity_preserving);
        assert!(!r.completely_positive);
        assert!(r.signature.is_none());
    }

    #[test]
    fn sign_ordering() {
        let [i, x, ..] = pauli();
        let osr =
            SignedOsr::new(2, vec![OsrTerm::minus(i.clone()), OsrTerm::plus(x.clone())]).unwrap();
        assert!(!osr.is_sign_ordered());
        let ordered = osr.sign_ordered();
        assert!(ordered.is_sign_ordered());
        assert_eq!(ordered.terms()[0].op, x);
        assert_eq!(choi_from_osr(&ordered), choi_from_osr(&osr));
    }
}
