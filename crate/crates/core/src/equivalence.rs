//! Pseudo-unitary freedom of signed operator-sum representations.
//!
//! Two sign-ordered OSRs `{γᵢ, Cᵢ}` and `{γⱼ, Dⱼ}` padded to the same sign counts
//! `(p, q)` give the same map exactly when `Dⱼ = Σᵢ u[j,i] Cᵢ` for some `u` with
//! `u†ηu = η`, `η = diag(+1 ×p, −1 ×q)`. This module checks membership in
//! `U(p, q)`, samples it, applies it to an OSR, and for two OSRs of the same map
//! builds an explicit witness `u = v·w⁻¹` from their expansions over the
//! canonical spectral OSR.

use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{invert, mat_exp, ComplexMatrix};
use crate::maps::{choi_from_osr, osr_from_eig, OsrTerm, Sign, SignedOsr, DEFAULT_RANK_TOL};

/// Default tolerance for [`find_equivalence`] and witness verification.
pub const DEFAULT_EQUIV_TOL: f64 = 1e-8;
/// Smallest |γ-norm| accepted for a completion vector.
pub const ISOTROPY_TOL: f64 = 1e-8;
/// Condition limit used when inverting the expansion matrix `w`.
pub const WITNESS_COND_LIMIT: f64 = 1e14;

/// Indefinite metric `η = diag(+1 ×p, −1 ×q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Metric {
    p: usize,
    q: usize,
}

impl Metric {
    pub fn new(p: usize, q: usize) -> Result<Self> {
        if p + q == 0 {
            return Err(Error::DimensionMismatch("metric needs p + q >= 1".into()));
        }
        Ok(Self { p, q })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn size(&self) -> usize {
        self.p + self.q
    }

    pub fn sign(&self, k: usize) -> Sign {
        if k < self.p {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn signs(&self) -> Vec<Sign> {
        (0..self.size()).map(|k| self.sign(k)).collect()
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "U({}, {})", self.p, self.q)
    }
}

/// The diagonal ±1 matrix of a metric, `+1` entries first.
pub fn metric_matrix(m: Metric) -> ComplexMatrix {
    let diag: Vec<f64> = m.signs().iter().map(|s| s.value()).collect();
    ComplexMatrix::from_real_diagonal(&diag)
}

/// `‖u† diag(row_signs) u − diag(col_signs)‖_F`.
fn gram_defect(u: &ComplexMatrix, row_signs: &[Sign], col_signs: &[Sign]) -> f64 {
    let eta_rows =
        ComplexMatrix::from_real_diagonal(&row_signs.iter().map(|s| s.value()).collect::<Vec<_>>());
    let eta_cols =
        ComplexMatrix::from_real_diagonal(&col_signs.iter().map(|s| s.value()).collect::<Vec<_>>());
    (&(&u.adjoint() * &eta_rows) * u).distance(&eta_cols)
}

/// `‖U†ηU − η‖_F`.
pub fn pseudo_unitary_defect(u: &ComplexMatrix, m: Metric) -> Result<f64> {
    if u.shape() != (m.size(), m.size()) {
        return Err(Error::DimensionMismatch(format!(
            "{} needs a {n}x{n} matrix, got {}x{}",
            m,
            u.rows(),
            u.cols(),
            n = m.size()
        )));
    }
    let signs = m.signs();
    Ok(gram_defect(u, &signs, &signs))
}

/// Membership in `U(p, q)`: `‖U†ηU − η‖_F ≤ tol`.
pub fn is_pseudo_unitary(u: &ComplexMatrix, m: Metric, tol: f64) -> Result<bool> {
    Ok(pseudo_unitary_defect(u, m)? <= tol)
}

/// Deterministic sample of `U(p, q)`.
///
/// Draws `M` with real and imaginary parts uniform in `[−scale, scale]`, forms the
/// generator `X = (M − ηM†η)/2` (which satisfies `X†η + ηX = 0`) and returns `exp(X)`.
pub fn random_pseudo_unitary(m: Metric, seed: u64, scale: f64) -> Result<ComplexMatrix> {
    if !(0.0..=2.0).contains(&scale) {
        return Err(Error::ParamOutOfRange(format!(
            "scale must lie in [0, 2], got {scale}"
        )));
    }
    let n = m.size();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data: Vec<Complex64> = (0..n * n)
        .map(|_| {
            let re = (rng.gen::<f64>() * 2.0 - 1.0) * scale;
            let im = (rng.gen::<f64>() * 2.0 - 1.0) * scale;
            Complex64::new(re, im)
        })
        .collect();
    let draw = ComplexMatrix::new(n, n, data)?;
    let eta = metric_matrix(m);
    let reflected = &(&eta * &draw.adjoint()) * &eta;
    let generator = (&draw - &reflected).scale_real(0.5);
    mat_exp(&generator)
}

/// Appends zero operators so the sign counts become exactly `(target_p, target_q)`,
/// returning the terms sign-ordered.
pub fn pad_osr(osr: &SignedOsr, target_p: usize, target_q: usize) -> Result<SignedOsr> {
    let (p, q) = osr.sign_counts();
    if target_p < p || target_q < q {
        return Err(Error::TargetTooSmall {
            target_p,
            target_q,
            p,
            q,
        });
    }
    let d = osr.dim();
    let zero = ComplexMatrix::zeros(d, d);
    let ordered = osr.sign_ordered().into_terms();
    let (plus, minus) = ordered.split_at(p);
    let terms = plus
        .iter()
        .cloned()
        .chain(std::iter::repeat_n(
            OsrTerm::plus(zero.clone()),
            target_p - p,
        ))
        .chain(minus.iter().cloned())
        .chain(std::iter::repeat_n(OsrTerm::minus(zero), target_q - q))
        .collect();
    SignedOsr::new(d, terms)
}

/// `Dⱼ = Σᵢ U[j,i] Cᵢ`, signs kept. The input must be sign-ordered.
///
/// When `U ∈ U(p, q)` for the input's sign counts, the output has the same Choi matrix.
pub fn transform_osr(osr: &SignedOsr, u: &ComplexMatrix) -> Result<SignedOsr> {
    if !osr.is_sign_ordered() {
        return Err(Error::SignPatternMismatch(
            "operator list must have all +1 terms before all -1 terms".into(),
        ));
    }
    let terms = transform_unchecked(osr, u)?
        .into_iter()
        .zip(osr.terms())
        .map(|(op, term)| OsrTerm::new(term.sign, op))
        .collect();
    SignedOsr::new(osr.dim(), terms)
}

/// Square completion of a partially γ-orthonormal set of columns.
#[derive(Debug, Clone)]
pub struct Completion {
    /// First `r` columns are the input; the rest were added.
    pub matrix: ComplexMatrix,
    /// γ-norm sign of every column, so `matrix† γ matrix = diag(column_signs)`.
    pub column_signs: Vec<Sign>,
}

fn gamma_inner(a: &[Complex64], b: &[Complex64], gamma: &[Sign]) -> Complex64 {
    a.iter()
        .zip(b)
        .zip(gamma)
        .map(|((x, y), s)| x.conj() * y * s.value())
        .sum()
}

/// Extends `w_partial` (N×r, columns γ-orthonormal) to an N×N matrix `W` with
/// `W†γW = diag(column_signs)`.
///
/// New columns come from γ-Gram–Schmidt over the standard basis, greedily taking
/// the projected candidate with the largest |γ-norm|. If every projected basis
/// vector is isotropic, pairwise combinations `x + y` and `x + iy` are tried
/// before giving up with [`Error::NumericalBreakdown`].
pub fn complete_to_pseudo_unitary(w_partial: &ComplexMatrix, gamma: Metric) -> Result<Completion> {
    let n = gamma.size();
    let r = w_partial.cols();
    if w_partial.rows() != n || r > n {
        return Err(Error::DimensionMismatch(format!(
            "partial matrix is {}x{r}, metric needs {n} rows and at most {n} columns",
            w_partial.rows()
        )));
    }
    let gamma_signs = gamma.signs();

    let mut columns: Vec<Vec<Complex64>> = (0..r).map(|j| w_partial.col(j)).collect();
    let mut signs = Vec::with_capacity(n);
    let scale = w_partial.frob_norm().max(1.0);
    for (j, col) in columns.iter().enumerate() {
        let norm = gamma_inner(col, col, &gamma_signs).re;
        if (norm.abs() - 1.0).abs() > ISOTROPY_TOL * scale * scale {
            return Err(Error::NumericalBreakdown(format!(
                "column {j} has γ-norm {norm:.3e}, expected ±1"
            )));
        }
        signs.push(if norm > 0.0 { Sign::Plus } else { Sign::Minus });
    }
    let defect = gram_defect(w_partial, &gamma_signs, &signs);
    if defect > ISOTROPY_TOL * scale * scale {
        return Err(Error::NumericalBreakdown(format!(
            "input columns are not γ-orthonormal (defect {defect:.3e})"
        )));
    }

    let project = |x: &mut Vec<Complex64>, basis: &[Vec<Complex64>], basis_signs: &[Sign]| {
        // Two passes of classical Gram–Schmidt.
        for _ in 0..2 {
            for (q, s) in basis.iter().zip(basis_signs) {
                let coef = gamma_inner(q, x, &gamma_signs) * s.value();
                for (xi, qi) in x.iter_mut().zip(q) {
                    *xi -= coef * qi;
                }
            }
        }
    };

    while columns.len() < n {
        let candidates: Vec<Vec<Complex64>> = (0..n)
            .map(|m| {
                let mut x = vec![Complex64::new(0.0, 0.0); n];
                x[m] = Complex64::new(1.0, 0.0);
                project(&mut x, &columns, &signs);
                x
            })
            .collect();
        let norm_of = |x: &Vec<Complex64>| gamma_inner(x, x, &gamma_signs).re;

        let mut best = candidates
            .iter()
            .map(|x| (norm_of(x), x.clone()))
            .max_by(|a, b| a.0.abs().total_cmp(&b.0.abs()))
            .expect("at least one candidate");

        if best.0.abs() < ISOTROPY_TOL {
            let i_unit = Complex64::new(0.0, 1.0);
            for a in 0..n {
                for b in a + 1..n {
                    for phase in [Complex64::new(1.0, 0.0), i_unit] {
                        let mut x: Vec<Complex64> = candidates[a]
                            .iter()
                            .zip(&candidates[b])
                            .map(|(&u, &v)| u + phase * v)
                            .collect();
                        project(&mut x, &columns, &signs);
                        let norm = norm_of(&x);
                        if norm.abs() > best.0.abs() {
                            best = (norm, x);
                        }
                    }
                }
            }
        }
        let (norm, x) = best;
        if norm.abs() < ISOTROPY_TOL {
            return Err(Error::NumericalBreakdown(format!(
                "every completion candidate is isotropic (|γ-norm| {:.3e})",
                norm.abs()
            )));
        }
        let inv = 1.0 / norm.abs().sqrt();
        columns.push(x.into_iter().map(|z| z * inv).collect());
        signs.push(if norm > 0.0 { Sign::Plus } else { Sign::Minus });
    }

    let mut matrix = ComplexMatrix::zeros(n, n);
    for (j, col) in columns.iter().enumerate() {
        matrix.set_col(j, col);
    }
    Ok(Completion {
        matrix,
        column_signs: signs,
    })
}

/// Why two equal maps came back without an explicit witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoWitnessReason {
    /// Some operator of an input list is not in the span of the canonical operators.
    SupportViolation,
    /// The expansion matrix `w` could not be inverted.
    Singular,
    IllConditioned,
    /// No γ-normalizable completion vector was found.
    NumericalBreakdown,
    /// The constructed `u` failed the membership or operator-match check.
    VerificationFailed,
}

impl NoWitnessReason {
    pub fn as_str(self) -> &'static str {
        match self {
            NoWitnessReason::SupportViolation => "support_violation",
            NoWitnessReason::Singular => "singular",
            NoWitnessReason::IllConditioned => "ill_conditioned",
            NoWitnessReason::NumericalBreakdown => "numerical_breakdown",
            NoWitnessReason::VerificationFailed => "verification_failed",
        }
    }
}

impl fmt::Display for NoWitnessReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone)]
pub enum Verdict {
    NotEquivalent {
        choi_distance: f64,
    },
    EquivalentWithWitness {
        u: ComplexMatrix,
        metric: Metric,
        padded_size: usize,
    },
    EquivalentNoWitness {
        reason: NoWitnessReason,
    },
}

impl Verdict {
    pub fn is_equivalent(&self) -> bool {
        !matches!(self, Verdict::NotEquivalent { .. })
    }
}

/// Residual norms recorded along the witness construction. Steps that were not
/// reached stay `None`.
#[derive(Debug, Clone, Default)]
pub struct Diagnostics {
    pub choi_distance: f64,
    pub canonical_terms: Option<(usize, usize)>,
    pub max_expansion_residual_c: Option<f64>,
    pub max_expansion_residual_d: Option<f64>,
    /// `‖u†ηu − η‖_F`.
    pub witness_metric_defect: Option<f64>,
    /// `maxⱼ ‖Dⱼ − Σᵢ u[j,i]Cᵢ‖_F` on the padded lists.
    pub max_operator_mismatch: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct EquivalenceResult {
    pub verdict: Verdict,
    pub diagnostics: Diagnostics,
    /// The sign-ordered, zero-padded lists the witness relates, when padding was reached.
    pub padded: Option<(SignedOsr, SignedOsr)>,
}

/// Expansion coefficients of each operator over the canonical operators:
/// `w[i,k] = ⟨Kₖ, Cᵢ⟩ / ‖Kₖ‖²`. Returns the coefficient rows and the largest
/// relative residual `‖Cᵢ − Σₖ w[i,k]Kₖ‖ / max(1, ‖Cᵢ‖)`.
fn expand(ops: &[OsrTerm], canonical: &[OsrTerm]) -> (Vec<Vec<Complex64>>, f64) {
    let weights: Vec<f64> = canonical.iter().map(|k| k.op.frob_norm().powi(2)).collect();
    let mut rows = Vec::with_capacity(ops.len());
    let mut worst = 0.0f64;
    for term in ops {
        let c = term.op.as_slice();
        let coeffs: Vec<Complex64> = canonical
            .iter()
            .zip(&weights)
            .map(|(k, &w)| {
                let inner: Complex64 =
                    k.op.as_slice()
                        .iter()
                        .zip(c)
                        .map(|(a, b)| a.conj() * b)
                        .sum();
                inner / w
            })
            .collect();
        let mut residual = term.op.clone();
        for (k, &coef) in canonical.iter().zip(&coeffs) {
            residual = &residual - &k.op.scale(coef);
        }
        worst = worst.max(residual.frob_norm() / term.op.frob_norm().max(1.0));
        rows.push(coeffs);
    }
    (rows, worst)
}

/// Builds the square expansion matrix for a padded list. Row `i` holds the
/// coefficients of padded operator `i`; columns follow the padded canonical
/// order `[K₊, new₊, K₋, new₋]`.
fn square_expansion(
    rows: &[Vec<Complex64>],
    metric: Metric,
    canonical_counts: (usize, usize),
) -> Result<ComplexMatrix> {
    let n = metric.size();
    let r = canonical_counts.0 + canonical_counts.1;
    // With no canonical operators the partial matrix has zero columns.
    let mut partial = ComplexMatrix::zeros(n, r);
    for (i, row) in rows.iter().enumerate() {
        for (k, &z) in row.iter().enumerate() {
            partial[(i, k)] = z;
        }
    }
    let completion = complete_to_pseudo_unitary(&partial, metric)?;

    let (p0, q0) = canonical_counts;
    let new_plus: Vec<usize> = (r..n)
        .filter(|&j| completion.column_signs[j] == Sign::Plus)
        .collect();
    let new_minus: Vec<usize> = (r..n)
        .filter(|&j| completion.column_signs[j] == Sign::Minus)
        .collect();
    if new_plus.len() != metric.p() - p0 || new_minus.len() != metric.q() - q0 {
        return Err(Error::NumericalBreakdown(format!(
            "completion produced {} positive and {} negative columns, expected {} and {}",
            new_plus.len(),
            new_minus.len(),
            metric.p() - p0,
            metric.q() - q0
        )));
    }
    let order: Vec<usize> = (0..p0)
        .chain(new_plus)
        .chain(p0..r)
        .chain(new_minus)
        .collect();
    let mut w = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        w.set_col(dst, &completion.matrix.col(src));
    }
    Ok(w)
}

/// Rows of coefficients for a padded list: the original sign-ordered rows with
/// zero rows inserted where padding operators sit.
fn padded_rows(
    rows: &[Vec<Complex64>],
    counts: (usize, usize),
    metric: Metric,
    r: usize,
) -> Vec<Vec<Complex64>> {
    let zero = vec![Complex64::new(0.0, 0.0); r];
    let (p, q) = counts;
    rows[..p]
        .iter()
        .cloned()
        .chain(std::iter::repeat_n(zero.clone(), metric.p() - p))
        .chain(rows[p..p + q].iter().cloned())
        .chain(std::iter::repeat_n(zero, metric.q() - q))
        .collect()
}

/// Largest `‖Dⱼ − Σᵢ u[j,i]Cᵢ‖_F`.
fn operator_mismatch(c: &SignedOsr, d: &SignedOsr, u: &ComplexMatrix) -> Result<f64> {
    let mapped = transform_unchecked(c, u)?;
    Ok(mapped
        .iter()
        .zip(d.terms())
        .map(|(m, t)| m.distance(&t.op))
        .fold(0.0, f64::max))
}

fn transform_unchecked(c: &SignedOsr, u: &ComplexMatrix) -> Result<Vec<ComplexMatrix>> {
    let n = c.len();
    if u.shape() != (n, n) {
        return Err(Error::DimensionMismatch(format!(
            "{n} operators but transform is {}x{}",
            u.rows(),
            u.cols()
        )));
    }
    let dim = c.dim();
    Ok((0..n)
        .map(|j| {
            let mut op = ComplexMatrix::zeros(dim, dim);
            for (i, t) in c.terms().iter().enumerate() {
                op = &op + &t.op.scale(u[(j, i)]);
            }
            op
        })
        .collect())
}

/// Decides whether two signed OSRs describe the same map and, if so, constructs
/// a pseudo-unitary witness relating their sign-ordered, zero-padded lists.
pub fn find_equivalence(c: &SignedOsr, d: &SignedOsr, tol: f64) -> Result<EquivalenceResult> {
    if c.dim() != d.dim() {
        return Err(Error::DimensionMismatch(format!(
            "maps act on dimensions {} and {}",
            c.dim(),
            d.dim()
        )));
    }
    let dim = c.dim();
    let choi_c = choi_from_osr(c);
    let choi_d = choi_from_osr(d);
    let choi_distance = choi_c.matrix().distance(choi_d.matrix());
    let mut diagnostics = Diagnostics {
        choi_distance,
        ..Default::default()
    };
    if choi_distance > tol * choi_c.matrix().frob_norm().max(1.0) {
        return Ok(EquivalenceResult {
            verdict: Verdict::NotEquivalent { choi_distance },
            diagnostics,
            padded: None,
        });
    }
    let no_witness = |reason, diagnostics, padded| {
        Ok(EquivalenceResult {
            verdict: Verdict::EquivalentNoWitness { reason },
            diagnostics,
            padded,
        })
    };

    let canonical = osr_from_eig(dim, &choi_c.eig()?, DEFAULT_RANK_TOL);
    let canonical_counts = canonical.sign_counts();
    diagnostics.canonical_terms = Some(canonical_counts);

    let c = c.sign_ordered();
    let d = d.sign_ordered();
    let (w_rows, residual_c) = expand(c.terms(), canonical.terms());
    let (v_rows, residual_d) = expand(d.terms(), canonical.terms());
    diagnostics.max_expansion_residual_c = Some(residual_c);
    diagnostics.max_expansion_residual_d = Some(residual_d);
    if residual_c > tol || residual_d > tol {
        return no_witness(NoWitnessReason::SupportViolation, diagnostics, None);
    }

    let (pc, qc) = c.sign_counts();
    let (pd, qd) = d.sign_counts();
    let mut target_p = pc.max(pd).max(canonical_counts.0);
    let target_q = qc.max(qd).max(canonical_counts.1);
    if target_p + target_q == 0 {
        target_p = 1;
    }
    let metric = Metric::new(target_p, target_q)?;
    let padded_c = pad_osr(&c, target_p, target_q)?;
    let padded_d = pad_osr(&d, target_p, target_q)?;
    let padded = Some((padded_c.clone(), padded_d.clone()));

    let r = canonical.len();
    let w_rows = padded_rows(&w_rows, (pc, qc), metric, r);
    let v_rows = padded_rows(&v_rows, (pd, qd), metric, r);
    let squares = square_expansion(&w_rows, metric, canonical_counts)
        .and_then(|w| Ok((w, square_expansion(&v_rows, metric, canonical_counts)?)));
    let (w, v) = match squares {
        Ok(pair) => pair,
        Err(Error::NumericalBreakdown(_)) => {
            return no_witness(NoWitnessReason::NumericalBreakdown, diagnostics, padded)
        }
        Err(e) => return Err(e),
    };

    let w_inv = match invert(&w, WITNESS_COND_LIMIT) {
        Ok(inv) => inv,
        Err(Error::Singular { .. }) => {
            return no_witness(NoWitnessReason::Singular, diagnostics, padded)
        }
        Err(Error::IllConditioned { .. }) => {
            return no_witness(NoWitnessReason::IllConditioned, diagnostics, padded)
        }
        Err(e) => return Err(e),
    };
    let u = &v * &w_inv;

    let metric_defect = pseudo_unitary_defect(&u, metric)?;
    let mismatch = operator_mismatch(&padded_c, &padded_d, &u)?;
    diagnostics.witness_metric_defect = Some(metric_defect);
    diagnostics.max_operator_mismatch = Some(mismatch);
    if metric_defect > tol || mismatch > tol {
        return no_witness(NoWitnessReason::VerificationFailed, diagnostics, padded);
    }
    Ok(EquivalenceResult {
        verdict: Verdict::EquivalentWithWitness {
            u,
            metric,
            padded_size: metric.size(),
        },
        diagnostics,
        padded,
    })
}

/// True iff `U ∈ U(p, q)` within `tol` and `‖Dⱼ − Σᵢ U[j,i]Cᵢ‖_F ≤ tol` for every `j`.
///
/// Both lists must already be padded and sign-ordered to match `m`.
pub fn verify_equivalence(
    c: &SignedOsr,
    d: &SignedOsr,
    u: &ComplexMatrix,
    m: Metric,
    tol: f64,
) -> Result<bool> {
    if c.dim() != d.dim() {
        return Err(Error::DimensionMismatch(format!(
            "maps act on dimensions {} and {}",
            c.dim(),
            d.dim()
        )));
    }
    for (name, osr) in [("first", c), ("second", d)] {
        let pattern: Vec<Sign> = osr.terms().iter().map(|t| t.sign).collect();
        if pattern != m.signs() {
            return Err(Error::SignPatternMismatch(format!(
                "{name} list does not have the sign pattern of {m}"
            )));
        }
    }
    if !is_pseudo_unitary(u, m, tol)? {
        return Ok(false);
    }
    Ok(operator_mismatch(c, d, u)? <= tol)
}
