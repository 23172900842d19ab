//! Variational quantities of smooth maps: Christoffel symbols, second
//! fundamental forms, tension fields, geodesy/harmonicity verdicts, and
//! the exact parameter certificate that guarantees harmonicity of every
//! structure-intertwining map between two metallic families.
//!
//! Numeric quantities are computed through a three-tier derivative
//! ladder — exact zeros for linear maps, central differences of an
//! analytic Jacobian when one is attached, and second-order stencils
//! otherwise — so that reported residuals degrade gracefully and
//! honestly with the information available. The certificate, by
//! contrast, is decided entirely in exact arithmetic.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use thiserror::Error;

use crate::exact::{metallic_conjugate, metallic_mean, ExactError, QuadExt};
use crate::maps::{MapError, SmoothMap};
use crate::matrix::ExactMatrix;
use crate::structures::{StructureError, StructureSpec};

type MetricFn = dyn Fn(&[f64]) -> Option<Vec<Vec<f64>>> + Send + Sync;

/// Default residual tolerance for geodesy and harmonicity verdicts on
/// unit-scale maps.
pub const DEFAULT_TOLERANCE: f64 = 1e-8;

/// Central-difference step used on metric coefficients.
const METRIC_FD_STEP: f64 = 1e-6;

/// Errors from metric handling and variational computations.
#[derive(Debug, Error)]
pub enum VariationError {
    /// A metric or map evaluation returned nothing at a required point.
    #[error("evaluation failed at {point:?}")]
    EvaluationFailure { point: Vec<f64> },
    /// The metric is not invertible where an inverse is required.
    #[error("metric is singular at {point:?}")]
    SingularMetric { point: Vec<f64> },
    /// Incompatible dimensions between maps, metrics, and tensors.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    /// A parameter violated a documented precondition.
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

/// A Riemannian metric in coordinates: a symmetric positive-definite
/// matrix field on `R^dim`. Constant metrics carry their exact matrix,
/// which lets derivative-level quantities short-circuit to exact zeros.
#[derive(Clone)]
pub struct MetricField {
    dim: usize,
    eval: Arc<MetricFn>,
    constant_exact: Option<ExactMatrix>,
}

impl MetricField {
    /// The flat Euclidean metric on `R^dim`.
    pub fn euclidean(dim: usize) -> Self {
        Self::constant(ExactMatrix::identity(dim)).expect("identity is symmetric")
    }

    /// A constant-coefficient metric from an exact symmetric matrix.
    pub fn constant(matrix: ExactMatrix) -> Result<Self, VariationError> {
        if !matrix.is_square() || matrix.rows() == 0 {
            return Err(VariationError::InvalidParameters(
                "a metric must be a square matrix of positive dimension".into(),
            ));
        }
        if !matrix.is_symmetric() {
            return Err(VariationError::InvalidParameters(
                "a metric must be symmetric".into(),
            ));
        }
        let rows = matrix.to_f64_rows();
        Ok(Self {
            dim: matrix.rows(),
            eval: Arc::new(move |_: &[f64]| Some(rows.clone())),
            constant_exact: Some(matrix),
        })
    }

    /// A position-dependent metric from an evaluation closure returning
    /// the matrix as nested rows (`None` outside the domain).
    pub fn from_fn(
        dim: usize,
        eval: impl Fn(&[f64]) -> Option<Vec<Vec<f64>>> + Send + Sync + 'static,
    ) -> Result<Self, VariationError> {
        if dim == 0 {
            return Err(VariationError::InvalidParameters(
                "a metric needs positive dimension".into(),
            ));
        }
        Ok(Self { dim, eval: Arc::new(eval), constant_exact: None })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The exact matrix when the metric has constant coefficients.
    pub fn constant_exact(&self) -> Option<&ExactMatrix> {
        self.constant_exact.as_ref()
    }

    /// Evaluate the metric at `x`, with shape validation.
    pub fn eval_at(&self, x: &[f64]) -> Result<DMatrix<f64>, VariationError> {
        if x.len() != self.dim {
            return Err(VariationError::DimensionMismatch(format!(
                "point has {} components, expected {}",
                x.len(),
                self.dim
            )));
        }
        let value = (self.eval)(x)
            .ok_or_else(|| VariationError::EvaluationFailure { point: x.to_vec() })?;
        if value.len() != self.dim || value.iter().any(|row| row.len() != self.dim) {
            return Err(VariationError::DimensionMismatch(format!(
                "metric evaluation is not a {0}x{0} matrix",
                self.dim
            )));
        }
        Ok(DMatrix::from_fn(self.dim, self.dim, |i, j| value[i][j]))
    }

    /// Inverse metric at `x`: exact inversion for constant metrics,
    /// float inversion otherwise.
    fn inverse_at(&self, x: &[f64]) -> Result<DMatrix<f64>, VariationError> {
        if let Some(exact) = &self.constant_exact {
            let inverse = exact
                .inverse()
                .ok_or_else(|| VariationError::SingularMetric { point: x.to_vec() })?;
            let rows = inverse.to_f64_rows();
            return Ok(DMatrix::from_fn(self.dim, self.dim, |i, j| rows[i][j]));
        }
        self.eval_at(x)?
            .try_inverse()
            .ok_or_else(|| VariationError::SingularMetric { point: x.to_vec() })
    }
}

impl std::fmt::Debug for MetricField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MetricField")
            .field("dim", &self.dim)
            .field("constant", &self.constant_exact.is_some())
            .finish()
    }
}

/// The second fundamental form of a map at a point: a
/// `dim_source × dim_source × dim_target` array, symmetric in the first
/// two indices.
#[derive(Debug, Clone)]
pub struct SecondFormTensor {
    point: Vec<f64>,
    values: Vec<Vec<Vec<f64>>>,
}

impl SecondFormTensor {
    /// Build a tensor from raw values (shape-checked): `values[i][j][a]`
    /// with `i, j` source indices and `a` a target index.
    pub fn from_values(
        point: Vec<f64>,
        values: Vec<Vec<Vec<f64>>>,
    ) -> Result<Self, VariationError> {
        let n = values.len();
        if n == 0 || point.len() != n {
            return Err(VariationError::DimensionMismatch(
                "tensor must have one row per component of the base point".into(),
            ));
        }
        let m = values[0].first().map(Vec::len).unwrap_or(0);
        let rectangular = values
            .iter()
            .all(|plane| plane.len() == n && plane.iter().all(|fiber| fiber.len() == m));
        if !rectangular || m == 0 {
            return Err(VariationError::DimensionMismatch(
                "tensor values must form a square array of equal-length fibers".into(),
            ));
        }
        Ok(Self { point, values })
    }

    pub fn point(&self) -> &[f64] {
        &self.point
    }

    pub fn values(&self) -> &[Vec<Vec<f64>>] {
        &self.values
    }

    pub fn dim_source(&self) -> usize {
        self.values.len()
    }

    pub fn dim_target(&self) -> usize {
        self.values[0][0].len()
    }

    pub fn get(&self, i: usize, j: usize, a: usize) -> f64 {
        self.values[i][j][a]
    }

    /// Largest absolute entry.
    pub fn max_norm(&self) -> f64 {
        self.values
            .iter()
            .flatten()
            .flatten()
            .fold(0.0f64, |acc, v| acc.max(v.abs()))
    }

    /// Largest absolute violation of symmetry in the two source indices.
    pub fn symmetry_defect(&self) -> f64 {
        let n = self.dim_source();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                for a in 0..self.dim_target() {
                    worst = worst.max((self.values[i][j][a] - self.values[j][i][a]).abs());
                }
            }
        }
        worst
    }
}

/// Outcome of a thresholded residual check, reported with the raw
/// residual and the tolerance that produced the verdict.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CheckVerdict {
    pub passed: bool,
    pub max_residual: f64,
    pub tolerance: f64,
}

/// Verdict of the exact harmonicity certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateVerdict {
    /// The certifying coefficient is non-zero: every
    /// structure-intertwining map between the two families is harmonic.
    GuaranteedHarmonic,
    /// The coefficient vanishes, so the criterion makes no promise.
    ConditionFails,
}

impl std::fmt::Display for CertificateVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::GuaranteedHarmonic => write!(f, "guaranteed_harmonic"),
            Self::ConditionFails => write!(f, "condition_fails"),
        }
    }
}

/// Exact harmonicity certificate for maps from a `(p₁, q₁)` source
/// family into a `(p₂, q₂)` target family.
///
/// The certifying coefficient factors as
/// `−(x − aσ)(x − a(p₂−σ))` with `x = q₁−q₂`, `a = p₂−p₁`, and `σ` the
/// target metallic mean, so it vanishes exactly when `x` hits one of
/// the two conjugate roots; both root comparisons are reported.
#[derive(Debug, Clone, Serialize)]
pub struct HarmonicityCertificate {
    pub p1: i64,
    pub q1: i64,
    pub p2: i64,
    pub q2: i64,
    /// `q₁ − q₂`, the left side of the root comparison.
    pub lhs: QuadExt,
    /// `(p₂ − p₁)·σ` for the target mean σ.
    pub rhs_sigma: QuadExt,
    /// `(p₂ − p₁)·(p₂ − σ)`, the conjugate-root right side.
    pub rhs_conjugate: QuadExt,
    /// `(p₂−p₁)²q₂ − (q₁−q₂)² + p₂(p₂−p₁)(q₁−q₂)`, exactly.
    pub coeff: QuadExt,
    pub sigma_root_matched: bool,
    pub conjugate_root_matched: bool,
    pub verdict: CertificateVerdict,
}

/// Conformality verdict for the horizontal restriction of a map.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ConformalityReport {
    /// True when the pulled-back target metric is `λ·g` on horizontal
    /// vectors within the tolerance.
    pub conformal: bool,
    /// Best-fit dilation factor λ.
    pub lambda: f64,
    /// Largest deviation from exact proportionality.
    pub max_residual: f64,
}

/// Per-point summary record consumed by the command-line interface.
#[derive(Debug, Clone, Serialize)]
pub struct PointReport {
    pub point: Vec<f64>,
    pub second_form_norm: f64,
    pub tension: Vec<f64>,
    pub totally_geodesic: bool,
    pub harmonic: bool,
    pub tolerance: f64,
}

/// Christoffel symbols `Γ^k_{ij}` of the Levi-Civita connection of `g`
/// at `x`, indexed `[k][i][j]`.
///
/// Constant metrics short-circuit to exact zeros; otherwise the metric
/// derivatives come from central differences and
/// `Γ^k_{ij} = ½ g^{kl}(∂_i g_{jl} + ∂_j g_{il} − ∂_l g_{ij})`.
pub fn christoffel(g: &MetricField, x: &[f64]) -> Result<Vec<Vec<Vec<f64>>>, VariationError> {
    let n = g.dim();
    if x.len() != n {
        return Err(VariationError::DimensionMismatch(format!(
            "point has {} components, expected {}",
            x.len(),
            n
        )));
    }
    if g.constant_exact().is_some() {
        return Ok(vec![vec![vec![0.0; n]; n]; n]);
    }
    let ginv = g.inverse_at(x)?;
    let h = METRIC_FD_STEP;
    // dg[l][i][j] = ∂_l g_{ij}
    let mut dg = vec![vec![vec![0.0; n]; n]; n];
    for l in 0..n {
        let plus = g.eval_at(&offset(x, &[(l, h)]))?;
        let minus = g.eval_at(&offset(x, &[(l, -h)]))?;
        for i in 0..n {
            for j in 0..n {
                dg[l][i][j] = (plus[(i, j)] - minus[(i, j)]) / (2.0 * h);
            }
        }
    }
    let mut gamma = vec![vec![vec![0.0; n]; n]; n];
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let mut sum = 0.0;
                for l in 0..n {
                    sum += ginv[(k, l)] * (dg[i][j][l] + dg[j][i][l] - dg[l][i][j]);
                }
                gamma[k][i][j] = 0.5 * sum;
            }
        }
    }
    Ok(gamma)
}

/// The second fundamental form of `map` at `x` for source metric `g_m`
/// and target metric `g_n`:
/// `values[i][j][a] = ∂_i∂_j F^a − Γ(M)^k_{ij} ∂_k F^a
///  + Γ(N)^a_{bc}(F(x)) ∂_i F^b ∂_j F^c`.
pub fn second_fundamental_form(
    map: &SmoothMap,
    g_m: &MetricField,
    g_n: &MetricField,
    x: &[f64],
) -> Result<SecondFormTensor, VariationError> {
    check_metric_dims(map, g_m, g_n)?;
    let n = map.dim_source();
    let m = map.dim_target();
    let jac = map.jacobian_at(x)?;
    let image = map.eval(x)?;
    let gamma_m = christoffel(g_m, x)?;
    let gamma_n = christoffel(g_n, &image)?;
    let d2 = second_partials(map, x)?;

    let mut values = vec![vec![vec![0.0; m]; n]; n];
    for i in 0..n {
        for j in 0..n {
            for a in 0..m {
                let mut v = d2[i][j][a];
                for k in 0..n {
                    v -= gamma_m[k][i][j] * jac[a][k];
                }
                for b in 0..m {
                    for c in 0..m {
                        v += gamma_n[a][b][c] * jac[b][i] * jac[c][j];
                    }
                }
                values[i][j][a] = v;
            }
        }
    }
    SecondFormTensor::from_values(x.to_vec(), values)
}

/// The tension field `τ^a = g_M^{ij}(x) · values[i][j][a]` of `map` at
/// `x` — the metric trace of the second fundamental form.
pub fn tension(
    map: &SmoothMap,
    g_m: &MetricField,
    g_n: &MetricField,
    x: &[f64],
) -> Result<Vec<f64>, VariationError> {
    let form = second_fundamental_form(map, g_m, g_n, x)?;
    let ginv = g_m.inverse_at(x)?;
    let n = form.dim_source();
    let mut tau = vec![0.0; form.dim_target()];
    for a in 0..form.dim_target() {
        let mut sum = 0.0;
        for i in 0..n {
            for j in 0..n {
                sum += ginv[(i, j)] * form.get(i, j, a);
            }
        }
        tau[a] = sum;
    }
    Ok(tau)
}

/// True when the second fundamental form vanishes (below `tol`) at
/// every sample point.
pub fn is_totally_geodesic(
    map: &SmoothMap,
    g_m: &MetricField,
    g_n: &MetricField,
    samples: &[Vec<f64>],
    tol: f64,
) -> Result<CheckVerdict, VariationError> {
    check_samples(samples, tol)?;
    let mut worst = 0.0f64;
    for point in samples {
        worst = worst.max(second_fundamental_form(map, g_m, g_n, point)?.max_norm());
    }
    Ok(CheckVerdict { passed: worst < tol, max_residual: worst, tolerance: tol })
}

/// True when the tension field vanishes (below `tol`) at every sample
/// point.
pub fn is_harmonic(
    map: &SmoothMap,
    g_m: &MetricField,
    g_n: &MetricField,
    samples: &[Vec<f64>],
    tol: f64,
) -> Result<CheckVerdict, VariationError> {
    check_samples(samples, tol)?;
    let mut worst = 0.0f64;
    for point in samples {
        for component in tension(map, g_m, g_n, point)? {
            worst = worst.max(component.abs());
        }
    }
    Ok(CheckVerdict { passed: worst < tol, max_residual: worst, tolerance: tol })
}

/// Residual of the parameter-rescaling identity for the second
/// fundamental form of a map between metallic families:
/// `max‖T − (1/q₁)[(p₂−p₁)·(J₂ T) + q₂·T]‖`, where `J₂` acts on the
/// target index of `T`. With identical parameters the identity is a
/// tautology and the residual is exactly zero.
pub fn geodesic_criterion_residual(
    form: &SecondFormTensor,
    target: &StructureSpec,
    p1: i64,
    q1: i64,
    p2: i64,
    q2: i64,
) -> Result<f64, VariationError> {
    for value in [p1, q1, p2, q2] {
        if value < 1 {
            return Err(VariationError::InvalidParameters(format!(
                "family parameters must be positive integers, got {value}"
            )));
        }
    }
    if target.dim() != form.dim_target() {
        return Err(VariationError::DimensionMismatch(format!(
            "structure dimension {} does not match the tensor's target dimension {}",
            target.dim(),
            form.dim_target()
        )));
    }
    let j2 = target.tensor().to_f64_rows();
    // Scalar factors first: with p₁ = p₂ and q₁ = q₂ they are exactly
    // 0 and 1, which makes the identity hold bit-for-bit.
    let c_j = (p2 - p1) as f64 / q1 as f64;
    let c_t = q2 as f64 / q1 as f64;
    let n = form.dim_source();
    let m = form.dim_target();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            for a in 0..m {
                let mut rotated = 0.0;
                for b in 0..m {
                    rotated += j2[a][b] * form.get(i, j, b);
                }
                let residual = form.get(i, j, a) - c_j * rotated - c_t * form.get(i, j, a);
                worst = worst.max(residual.abs());
            }
        }
    }
    Ok(worst)
}

/// Exact harmonicity certificate for the parameter pair
/// `(p₁, q₁) → (p₂, q₂)`.
pub fn harmonicity_certificate(
    p1: i64,
    q1: i64,
    p2: i64,
    q2: i64,
) -> Result<HarmonicityCertificate, VariationError> {
    for value in [p1, q1, p2, q2] {
        if value < 1 {
            return Err(VariationError::InvalidParameters(format!(
                "family parameters must be positive integers, got {value}"
            )));
        }
    }
    let sigma = metallic_mean(p2, q2)?;
    let conjugate = metallic_conjugate(p2, q2)?;
    let a = QuadExt::from_integer(p2 - p1);
    let lhs = QuadExt::from_integer(q1 - q2);
    let rhs_sigma = &a * &sigma;
    let rhs_conjugate = &a * &conjugate;
    // coeff = a²q₂ − x² + p₂·a·x with x = q₁ − q₂; a rational number.
    let coeff = &(&(&a.square() * &QuadExt::from_integer(q2)) - &lhs.square())
        + &(&(&QuadExt::from_integer(p2) * &a) * &lhs);
    let sigma_root_matched = lhs == rhs_sigma;
    let conjugate_root_matched = lhs == rhs_conjugate;
    let verdict = if coeff.is_zero() {
        CertificateVerdict::ConditionFails
    } else {
        CertificateVerdict::GuaranteedHarmonic
    };
    Ok(HarmonicityCertificate {
        p1,
        q1,
        p2,
        q2,
        lhs,
        rhs_sigma,
        rhs_conjugate,
        coeff,
        sigma_root_matched,
        conjugate_root_matched,
        verdict,
    })
}

/// Check whether the pulled-back target metric restricted to the
/// horizontal space equals `λ·g_M` for a single `λ ≥ 0` within `tol`;
/// reports the best-fit λ.
pub fn horizontal_conformality(
    map: &SmoothMap,
    g_m: &MetricField,
    g_n: &MetricField,
    x: &[f64],
    tol: f64,
) -> Result<ConformalityReport, VariationError> {
    check_metric_dims(map, g_m, g_n)?;
    if !(tol > 0.0) {
        return Err(VariationError::InvalidParameters(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let pair = map.vertical_horizontal(x, g_m)?;
    if pair.horizontal.is_empty() {
        // The differential vanishes: the pull-back is 0 = 0·g.
        return Ok(ConformalityReport { conformal: true, lambda: 0.0, max_residual: 0.0 });
    }
    let gm_x = g_m.eval_at(x)?;
    let gn_fx = g_n.eval_at(&map.eval(x)?)?;
    let basis: Vec<DVector<f64>> =
        pair.horizontal.iter().map(|v| DVector::from_vec(v.clone())).collect();
    let images: Vec<DVector<f64>> = pair
        .horizontal
        .iter()
        .map(|v| map.pushforward(x, v).map(DVector::from_vec))
        .collect::<Result<_, _>>()?;
    let r = basis.len();
    let mut pulled = vec![vec![0.0; r]; r];
    let mut source = vec![vec![0.0; r]; r];
    for alpha in 0..r {
        for beta in 0..r {
            pulled[alpha][beta] = (images[alpha].transpose() * &gn_fx * &images[beta])[(0, 0)];
            source[alpha][beta] = (basis[alpha].transpose() * &gm_x * &basis[beta])[(0, 0)];
        }
    }
    // Least-squares dilation: λ = ⟨A, B⟩ / ⟨B, B⟩ in the Frobenius
    // inner product; B ≠ 0 because g_M is definite on an independent
    // basis.
    let mut ab = 0.0;
    let mut bb = 0.0;
    for alpha in 0..r {
        for beta in 0..r {
            ab += pulled[alpha][beta] * source[alpha][beta];
            bb += source[alpha][beta] * source[alpha][beta];
        }
    }
    let lambda = ab / bb;
    let mut residual = 0.0f64;
    for alpha in 0..r {
        for beta in 0..r {
            residual = residual.max((pulled[alpha][beta] - lambda * source[alpha][beta]).abs());
        }
    }
    Ok(ConformalityReport {
        conformal: residual < tol && lambda > -tol,
        lambda,
        max_residual: residual,
    })
}

/// Full per-point summary: second-form norm, tension vector, and both
/// verdicts at a single sample point.
pub fn point_report(
    map: &SmoothMap,
    g_m: &MetricField,
    g_n: &MetricField,
    x: &[f64],
    tol: f64,
) -> Result<PointReport, VariationError> {
    if !(tol > 0.0) {
        return Err(VariationError::InvalidParameters(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let form = second_fundamental_form(map, g_m, g_n, x)?;
    let tau = tension(map, g_m, g_n, x)?;
    let second_form_norm = form.max_norm();
    let tension_norm = tau.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    Ok(PointReport {
        point: x.to_vec(),
        second_form_norm,
        tension: tau,
        totally_geodesic: second_form_norm < tol,
        harmonic: tension_norm < tol,
        tolerance: tol,
    })
}

/// Second partial derivatives `d2[i][j][a] = ∂_i ∂_j F^a(x)` through
/// the derivative ladder: exact zeros for linear maps, differentiated
/// analytic Jacobian when available, else symmetric second-order
/// stencils with step `fd_step^(2/3)`.
fn second_partials(map: &SmoothMap, x: &[f64]) -> Result<Vec<Vec<Vec<f64>>>, VariationError> {
    let n = map.dim_source();
    let m = map.dim_target();
    let mut d2 = vec![vec![vec![0.0; m]; n]; n];
    if map.linear_matrix().is_some() {
        return Ok(d2);
    }
    if map.has_analytic_jacobian() {
        let h = map.fd_step();
        for i in 0..n {
            let plus = map.jacobian_at(&offset(x, &[(i, h)]))?;
            let minus = map.jacobian_at(&offset(x, &[(i, -h)]))?;
            for j in 0..n {
                for a in 0..m {
                    d2[i][j][a] = (plus[a][j] - minus[a][j]) / (2.0 * h);
                }
            }
        }
        return Ok(d2);
    }
    let h = map.fd_step().powf(2.0 / 3.0);
    let center = map.eval(x)?;
    for i in 0..n {
        let plus = map.eval(&offset(x, &[(i, h)]))?;
        let minus = map.eval(&offset(x, &[(i, -h)]))?;
        for a in 0..m {
            d2[i][i][a] = (plus[a] - 2.0 * center[a] + minus[a]) / (h * h);
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let pp = map.eval(&offset(x, &[(i, h), (j, h)]))?;
            let pm = map.eval(&offset(x, &[(i, h), (j, -h)]))?;
            let mp = map.eval(&offset(x, &[(i, -h), (j, h)]))?;
            let mm = map.eval(&offset(x, &[(i, -h), (j, -h)]))?;
            for a in 0..m {
                let v = (pp[a] - pm[a] - mp[a] + mm[a]) / (4.0 * h * h);
                d2[i][j][a] = v;
                d2[j][i][a] = v;
            }
        }
    }
    Ok(d2)
}

fn check_metric_dims(
    map: &SmoothMap,
    g_m: &MetricField,
    g_n: &MetricField,
) -> Result<(), VariationError> {
    if g_m.dim() != map.dim_source() {
        return Err(VariationError::DimensionMismatch(format!(
            "source metric dimension {} does not match the map's source dimension {}",
            g_m.dim(),
            map.dim_source()
        )));
    }
    if g_n.dim() != map.dim_target() {
        return Err(VariationError::DimensionMismatch(format!(
            "target metric dimension {} does not match the map's target dimension {}",
            g_n.dim(),
            map.dim_target()
        )));
    }
    Ok(())
}

fn check_samples(samples: &[Vec<f64>], tol: f64) -> Result<(), VariationError> {
    if !(tol > 0.0) {
        return Err(VariationError::InvalidParameters(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if samples.is_empty() {
        return Err(VariationError::InvalidParameters(
            "at least one sample point is required".into(),
        ));
    }
    Ok(())
}

fn offset(x: &[f64], steps: &[(usize, f64)]) -> Vec<f64> {
    let mut moved = x.to_vec();
    for &(index, delta) in steps {
        moved[index] += delta;
    }
    moved
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::pair_averaging_triple;
    use crate::structures::StructureKind;
    use proptest::prelude::*;

    fn polar_like() -> MetricField {
        MetricField::from_fn(2, |x| {
            Some(vec![vec![1.0, 0.0], vec![0.0, x[0] * x[0]]])
        })
        .unwrap()
    }

    fn conformal() -> MetricField {
        MetricField::from_fn(2, |x| {
            let scale = (2.0 * x[0]).exp();
            Some(vec![vec![scale, 0.0], vec![0.0, scale]])
        })
        .unwrap()
    }

    fn squaring_map() -> SmoothMap {
        SmoothMap::from_fn(1, 1, |x| Some(vec![x[0] * x[0]])).unwrap()
    }

    fn saddle_map() -> SmoothMap {
        SmoothMap::from_fn(2, 1, |x| Some(vec![x[0] * x[0] - x[1] * x[1]]))
            .unwrap()
            .with_jacobian(|x| Some(vec![vec![2.0 * x[0], -2.0 * x[1]]]))
    }

    fn quadratic_map() -> SmoothMap {
        SmoothMap::from_fn(2, 1, |x| Some(vec![x[0] * x[0] + x[1] * x[1]]))
            .unwrap()
            .with_jacobian(|x| Some(vec![vec![2.0 * x[0], 2.0 * x[1]]]))
    }

    #[test]
    fn constant_metrics_have_exactly_zero_christoffels() {
        let gamma = christoffel(&MetricField::euclidean(3), &[0.4, -2.0, 7.0]).unwrap();
        for plane in &gamma {
            for row in plane {
                for &entry in row {
                    assert_eq!(entry, 0.0);
                }
            }
        }
    }

    #[test]
    fn polar_like_christoffels_match_the_hand_formula() {
        // g = diag(1, x₁²): the non-zero symbols at x₁ = 1 are
        // Γ²₁₂ = Γ²₂₁ = 1/x₁ = 1 and Γ¹₂₂ = −x₁ = −1.
        let gamma = christoffel(&polar_like(), &[1.0, 0.3]).unwrap();
        let expected =
            [[[0.0, 0.0], [0.0, -1.0]], [[0.0, 1.0], [1.0, 0.0]]];
        for k in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    assert!(
                        (gamma[k][i][j] - expected[k][i][j]).abs() < 1e-5,
                        "gamma[{k}][{i}][{j}] = {}",
                        gamma[k][i][j]
                    );
                }
            }
        }
    }

    #[test]
    fn conformal_christoffels_match_the_hand_formula() {
        // g = e^{2x₁}·I at the origin: Γ¹ = [[1, 0], [0, −1]],
        // Γ² = [[0, 1], [1, 0]].
        let gamma = christoffel(&conformal(), &[0.0, 0.0]).unwrap();
        let expected = [[[1.0, 0.0], [0.0, -1.0]], [[0.0, 1.0], [1.0, 0.0]]];
        for k in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    assert!(
                        (gamma[k][i][j] - expected[k][i][j]).abs() < 1e-5,
                        "gamma[{k}][{i}][{j}] = {}",
                        gamma[k][i][j]
                    );
                }
            }
        }
    }

    #[test]
    fn linear_maps_between_flat_spaces_are_exactly_geodesic() {
        let (map, _, _) = pair_averaging_triple(1, 1).unwrap();
        let g_m = MetricField::euclidean(4);
        let g_n = MetricField::euclidean(2);
        let form = second_fundamental_form(&map, &g_m, &g_n, &[0.2, -0.7, 1.0, 3.0]).unwrap();
        assert_eq!(form.max_norm(), 0.0);
        let tau = tension(&map, &g_m, &g_n, &[0.2, -0.7, 1.0, 3.0]).unwrap();
        assert!(tau.iter().all(|&t| t == 0.0));
        let samples = vec![vec![0.0; 4], vec![1.0, 2.0, 3.0, 4.0]];
        let geodesic = is_totally_geodesic(&map, &g_m, &g_n, &samples, 1e-8).unwrap();
        assert!(geodesic.passed);
        assert_eq!(geodesic.max_residual, 0.0);
        let harmonic = is_harmonic(&map, &g_m, &g_n, &samples, 1e-8).unwrap();
        assert!(harmonic.passed);
        assert_eq!(harmonic.max_residual, 0.0);
    }

    #[test]
    fn affine_maps_with_constant_jacobians_vanish_exactly() {
        let map = SmoothMap::affine(
            ExactMatrix::from_integers(&[&[3, -1], &[2, 5]]).unwrap(),
            vec![4.0, -9.0],
        )
        .unwrap();
        let g = MetricField::euclidean(2);
        let form = second_fundamental_form(&map, &g, &g, &[0.3, 0.7]).unwrap();
        assert_eq!(form.max_norm(), 0.0);
    }

    #[test]
    fn squaring_map_second_derivative_is_two() {
        let g = MetricField::euclidean(1);
        let form = second_fundamental_form(&squaring_map(), &g, &g, &[0.5]).unwrap();
        assert!((form.get(0, 0, 0) - 2.0).abs() < 1e-4);
        let verdict =
            is_totally_geodesic(&squaring_map(), &g, &g, &[vec![0.5]], 1e-8).unwrap();
        assert!(!verdict.passed);
        assert!((verdict.max_residual - 2.0).abs() < 1e-4);
    }

    #[test]
    fn saddle_map_is_harmonic_but_not_geodesic() {
        let g_m = MetricField::euclidean(2);
        let g_n = MetricField::euclidean(1);
        let samples = vec![vec![1.0, 1.0], vec![0.3, -0.8]];
        let harmonic =
            is_harmonic(&saddle_map(), &g_m, &g_n, &samples, DEFAULT_TOLERANCE).unwrap();
        assert!(harmonic.passed, "residual {}", harmonic.max_residual);
        let geodesic =
            is_totally_geodesic(&saddle_map(), &g_m, &g_n, &samples, DEFAULT_TOLERANCE).unwrap();
        assert!(!geodesic.passed);
        assert!((geodesic.max_residual - 2.0).abs() < 1e-6);
    }

    #[test]
    fn saddle_map_without_a_jacobian_still_passes_loose_budgets() {
        let raw = SmoothMap::from_fn(2, 1, |x| Some(vec![x[0] * x[0] - x[1] * x[1]])).unwrap();
        let g_m = MetricField::euclidean(2);
        let g_n = MetricField::euclidean(1);
        let samples = vec![vec![1.0, 1.0]];
        let harmonic = is_harmonic(&raw, &g_m, &g_n, &samples, 1e-6).unwrap();
        assert!(harmonic.passed, "residual {}", harmonic.max_residual);
        let geodesic = is_totally_geodesic(&raw, &g_m, &g_n, &samples, 1e-6).unwrap();
        assert!((geodesic.max_residual - 2.0).abs() < 1e-4);
    }

    #[test]
    fn quadratic_map_has_tension_four() {
        let g_m = MetricField::euclidean(2);
        let g_n = MetricField::euclidean(1);
        let tau = tension(&quadratic_map(), &g_m, &g_n, &[0.0, 0.0]).unwrap();
        assert_eq!(tau.len(), 1);
        assert!((tau[0] - 4.0).abs() < 1e-8);
        let verdict =
            is_harmonic(&quadratic_map(), &g_m, &g_n, &[vec![0.0, 0.0]], DEFAULT_TOLERANCE)
                .unwrap();
        assert!(!verdict.passed);
        assert!((verdict.max_residual - 4.0).abs() < 1e-8);
    }

    #[test]
    fn tension_is_the_plain_trace_for_a_euclidean_source() {
        let map = SmoothMap::from_fn(2, 1, |x| {
            Some(vec![x[0] * x[0] * x[0] + 0.5 * x[1] * x[1] + x[0] * x[1]])
        })
        .unwrap();
        let g_m = MetricField::euclidean(2);
        let g_n = MetricField::euclidean(1);
        let x = [0.4, -0.9];
        let form = second_fundamental_form(&map, &g_m, &g_n, &x).unwrap();
        let tau = tension(&map, &g_m, &g_n, &x).unwrap();
        let trace = form.get(0, 0, 0) + form.get(1, 1, 0);
        assert_eq!(tau[0], trace);
    }

    #[test]
    fn curved_targets_contribute_the_connection_term() {
        // The linear embedding t ↦ (t, 0) into the conformal metric
        // e^{2y₁}·I: the flat second derivatives vanish, leaving
        // values[0][0][a] = Γ^a₁₁(F(0)) = (1, 0).
        let map = SmoothMap::linear(ExactMatrix::from_integers(&[&[1], &[0]]).unwrap());
        let g_m = MetricField::euclidean(1);
        let form = second_fundamental_form(&map, &g_m, &conformal(), &[0.0]).unwrap();
        assert!((form.get(0, 0, 0) - 1.0).abs() < 1e-5);
        assert!(form.get(0, 0, 1).abs() < 1e-5);
    }

    #[test]
    fn curved_sources_contribute_with_the_opposite_sign() {
        // The identity on (R², polar-like g) into flat R² at x₁ = 1:
        // values[i][j][a] = −Γ^a_{ij}, so values[1][1][0] = 1.
        let map = SmoothMap::linear(ExactMatrix::identity(2));
        let g_n = MetricField::euclidean(2);
        let form = second_fundamental_form(&map, &polar_like(), &g_n, &[1.0, 0.2]).unwrap();
        assert!((form.get(1, 1, 0) - 1.0).abs() < 1e-5);
        assert!((form.get(0, 1, 1) + 1.0).abs() < 1e-5);
    }

    #[test]
    fn rescaling_residual_vanishes_for_identical_parameters() {
        let target =
            StructureSpec::canonical(StructureKind::Metallic { p: 2, q: 3 }, &[1, 1]).unwrap();
        let values = vec![
            vec![vec![0.37, -1.2], vec![5.0, 0.01]],
            vec![vec![5.0, 0.01], vec![-2.25, 3.75]],
        ];
        let form = SecondFormTensor::from_values(vec![0.0, 0.0], values).unwrap();
        let residual = geodesic_criterion_residual(&form, &target, 2, 3, 2, 3).unwrap();
        assert_eq!(residual, 0.0);
    }

    #[test]
    fn rescaling_residual_on_an_eigenline_matches_hand_arithmetic() {
        // J₂ = diag(2, −1) for parameters (1, 2); a unit entry on the
        // σ-eigencoordinate with (p₁,q₁) = (1,1) gives
        // |1 − (0·2 + 2·1)| = 1.
        let target =
            StructureSpec::canonical(StructureKind::Metallic { p: 1, q: 2 }, &[1, 1]).unwrap();
        let form =
            SecondFormTensor::from_values(vec![0.0], vec![vec![vec![1.0, 0.0]]]).unwrap();
        let residual = geodesic_criterion_residual(&form, &target, 1, 1, 1, 2).unwrap();
        assert!((residual - 1.0).abs() < 1e-12);
        // The zero tensor has zero residual for any parameters.
        let zero =
            SecondFormTensor::from_values(vec![0.0], vec![vec![vec![0.0, 0.0]]]).unwrap();
        assert_eq!(geodesic_criterion_residual(&zero, &target, 7, 3, 5, 9).unwrap(), 0.0);
        // Mismatched target dimension is refused.
        let wrong =
            SecondFormTensor::from_values(vec![0.0], vec![vec![vec![1.0]]]).unwrap();
        assert!(matches!(
            geodesic_criterion_residual(&wrong, &target, 1, 1, 1, 2),
            Err(VariationError::DimensionMismatch(_))
        ));
    }

    #[test]
    fn certificate_frozen_examples() {
        // Different q, same p: coeff = −(q₁−q₂)² = −1.
        let cert = harmonicity_certificate(1, 1, 1, 2).unwrap();
        assert_eq!(cert.coeff, QuadExt::from_integer(-1));
        assert_eq!(cert.verdict, CertificateVerdict::GuaranteedHarmonic);
        assert!(!cert.sigma_root_matched && !cert.conjugate_root_matched);

        // Identical parameters: everything vanishes.
        let cert = harmonicity_certificate(1, 1, 1, 1).unwrap();
        assert!(cert.coeff.is_zero());
        assert_eq!(cert.verdict, CertificateVerdict::ConditionFails);
        assert!(cert.sigma_root_matched && cert.conjugate_root_matched);

        // (2,8) → (3,4): σ_{3,4} = 4 is rational and q₁−q₂ = 4 hits the
        // σ root exactly, so the coefficient vanishes.
        let cert = harmonicity_certificate(2, 8, 3, 4).unwrap();
        assert!(cert.coeff.is_zero());
        assert_eq!(cert.verdict, CertificateVerdict::ConditionFails);
        assert_eq!(cert.lhs, QuadExt::from_integer(4));
        assert_eq!(cert.rhs_sigma, QuadExt::from_integer(4));
        assert!(cert.sigma_root_matched);
        assert!(!cert.conjugate_root_matched);

        // Same q, different p: coeff = a²q₂ = 1.
        let cert = harmonicity_certificate(1, 1, 2, 1).unwrap();
        assert_eq!(cert.coeff, QuadExt::from_integer(1));
        assert_eq!(cert.verdict, CertificateVerdict::GuaranteedHarmonic);

        assert!(matches!(
            harmonicity_certificate(0, 1, 1, 1),
            Err(VariationError::InvalidParameters(_))
        ));
    }

    #[test]
    fn certificate_coefficient_vanishes_exactly_on_the_conjugate_roots() {
        for p1 in 1..=10i64 {
            for q1 in 1..=10i64 {
                for p2 in 1..=10i64 {
                    for q2 in 1..=10i64 {
                        let cert = harmonicity_certificate(p1, q1, p2, q2).unwrap();
                        let root_hit = cert.sigma_root_matched || cert.conjugate_root_matched;
                        assert_eq!(
                            cert.coeff.is_zero(),
                            root_hit,
                            "({p1},{q1},{p2},{q2}): coeff {} vs roots {} {}",
                            cert.coeff,
                            cert.sigma_root_matched,
                            cert.conjugate_root_matched
                        );
                        // The coefficient is the negated product of the
                        // two root differences.
                        let product = &(&cert.lhs - &cert.rhs_sigma)
                            * &(&cert.lhs - &cert.rhs_conjugate);
                        assert_eq!(cert.coeff, -product);
                        assert!(cert.coeff.is_rational());
                    }
                }
            }
        }
    }

    #[test]
    fn averaging_map_is_horizontally_conformal_with_half_dilation() {
        let (map, _, _) = pair_averaging_triple(1, 1).unwrap();
        let report = horizontal_conformality(
            &map,
            &MetricField::euclidean(4),
            &MetricField::euclidean(2),
            &[0.0; 4],
            1e-9,
        )
        .unwrap();
        assert!(report.conformal);
        assert!((report.lambda - 0.5).abs() < 1e-12);
        assert!(report.max_residual < 1e-12);
    }

    #[test]
    fn identity_is_conformal_and_unequal_stretches_are_not() {
        let id = SmoothMap::linear(ExactMatrix::identity(2));
        let g = MetricField::euclidean(2);
        let report = horizontal_conformality(&id, &g, &g, &[0.3, 0.4], 1e-9).unwrap();
        assert!(report.conformal);
        assert!((report.lambda - 1.0).abs() < 1e-12);

        let stretch = SmoothMap::linear(ExactMatrix::diagonal(&[
            QuadExt::from_integer(1),
            QuadExt::from_integer(2),
        ]));
        let report = horizontal_conformality(&stretch, &g, &g, &[0.0, 0.0], 1e-9).unwrap();
        assert!(!report.conformal);
        // Pull-back diag(1, 4) against diag(1, 1): best λ = 2.5,
        // residual 1.5.
        assert!((report.lambda - 2.5).abs() < 1e-12);
        assert!((report.max_residual - 1.5).abs() < 1e-12);
    }

    #[test]
    fn zero_maps_are_vacuously_conformal() {
        let zero = SmoothMap::linear(ExactMatrix::zeros(2, 2));
        let g = MetricField::euclidean(2);
        let report = horizontal_conformality(&zero, &g, &g, &[1.0, 2.0], 1e-9).unwrap();
        assert!(report.conformal);
        assert_eq!(report.lambda, 0.0);
    }

    #[test]
    fn point_reports_carry_the_wire_keys() {
        let g_m = MetricField::euclidean(2);
        let g_n = MetricField::euclidean(1);
        let report = point_report(&saddle_map(), &g_m, &g_n, &[1.0, 1.0], 1e-8).unwrap();
        assert!(report.harmonic);
        assert!(!report.totally_geodesic);
        assert!((report.second_form_norm - 2.0).abs() < 1e-6);
        let value: serde_json::Value =
            serde_json::from_str(&serde_json::to_string(&report).unwrap()).unwrap();
        let object = value.as_object().unwrap();
        for key in
            ["point", "second_form_norm", "tension", "totally_geodesic", "harmonic", "tolerance"]
        {
            assert!(object.contains_key(key), "missing {key}");
        }
        assert_eq!(object.len(), 6);
        assert_eq!(object["tolerance"], serde_json::json!(1e-8));
    }

    #[test]
    fn metric_construction_and_evaluation_reject_bad_shapes() {
        assert!(matches!(
            MetricField::constant(ExactMatrix::from_integers(&[&[1, 2], &[3, 4]]).unwrap()),
            Err(VariationError::InvalidParameters(_))
        ));
        assert!(matches!(
            MetricField::constant(ExactMatrix::zeros(2, 3)),
            Err(VariationError::InvalidParameters(_))
        ));
        assert!(matches!(MetricField::from_fn(0, |_| None), Err(_)));

        let ragged = MetricField::from_fn(2, |_| Some(vec![vec![1.0, 0.0]])).unwrap();
        assert!(matches!(
            ragged.eval_at(&[0.0, 0.0]),
            Err(VariationError::DimensionMismatch(_))
        ));
        let partial = MetricField::from_fn(1, |x| {
            if x[0] > 0.0 {
                Some(vec![vec![1.0]])
            } else {
                None
            }
        })
        .unwrap();
        assert!(matches!(
            partial.eval_at(&[-1.0]),
            Err(VariationError::EvaluationFailure { .. })
        ));

        // A singular constant metric is caught when the inverse is
        // needed for the tension trace.
        let degenerate = MetricField::constant(
            ExactMatrix::from_integers(&[&[1, 0], &[0, 0]]).unwrap(),
        )
        .unwrap();
        let map = SmoothMap::linear(ExactMatrix::identity(2));
        assert!(matches!(
            tension(&map, &degenerate, &MetricField::euclidean(2), &[0.0, 0.0]),
            Err(VariationError::SingularMetric { .. })
        ));
    }

    #[test]
    fn empty_samples_and_bad_tolerances_are_refused() {
        let g = MetricField::euclidean(1);
        let map = squaring_map();
        assert!(matches!(
            is_harmonic(&map, &g, &g, &[], 1e-8),
            Err(VariationError::InvalidParameters(_))
        ));
        assert!(matches!(
            is_totally_geodesic(&map, &g, &g, &[vec![0.0]], 0.0),
            Err(VariationError::InvalidParameters(_))
        ));
        assert!(matches!(
            point_report(&map, &g, &g, &[0.0], -1.0),
            Err(VariationError::InvalidParameters(_))
        ));
    }

    proptest! {
        #[test]
        fn second_forms_are_symmetric_on_quadratic_maps(
            coeffs in proptest::collection::vec(-3.0f64..=3.0, 6),
            x in proptest::collection::vec(-1.0f64..=1.0, 2),
        ) {
            let c = coeffs.clone();
            let jc = coeffs.clone();
            let map = SmoothMap::from_fn(2, 1, move |p| {
                Some(vec![
                    c[0] * p[0] * p[0] + c[1] * p[0] * p[1] + c[2] * p[1] * p[1]
                        + c[3] * p[0] + c[4] * p[1] + c[5],
                ])
            })
            .unwrap()
            .with_jacobian(move |p| {
                Some(vec![vec![
                    2.0 * jc[0] * p[0] + jc[1] * p[1] + jc[3],
                    jc[1] * p[0] + 2.0 * jc[2] * p[1] + jc[4],
                ]])
            });
            let g_m = MetricField::euclidean(2);
            let g_n = MetricField::euclidean(1);
            let form = second_fundamental_form(&map, &g_m, &g_n, &x).unwrap();
            prop_assert!(form.symmetry_defect() < 1e-8, "defect {}", form.symmetry_defect());
        }

        #[test]
        fn affine_maps_have_vanishing_form_and_tension(
            entries in proptest::collection::vec(-9i64..=9, 6),
            shift in proptest::collection::vec(-5.0f64..=5.0, 2),
            x in proptest::collection::vec(-2.0f64..=2.0, 3),
        ) {
            let matrix = ExactMatrix::from_fn(2, 3, |i, j| QuadExt::from_integer(entries[i * 3 + j]));
            let map = SmoothMap::affine(matrix, shift).unwrap();
            let g_m = MetricField::euclidean(3);
            let g_n = MetricField::euclidean(2);
            let form = second_fundamental_form(&map, &g_m, &g_n, &x).unwrap();
            prop_assert!(form.max_norm() < 1e-10);
            let tau = tension(&map, &g_m, &g_n, &x).unwrap();
            prop_assert!(tau.iter().all(|t| t.abs() < 1e-10));
        }

        #[test]
        fn rescaling_residual_is_zero_whenever_parameters_coincide(
            p in 1i64..=9,
            q in 1i64..=9,
            raw in proptest::collection::vec(-10.0f64..=10.0, 8),
        ) {
            let target = StructureSpec::canonical(
                StructureKind::Metallic { p, q }, &[1, 1]).unwrap();
            let values = vec![
                vec![vec![raw[0], raw[1]], vec![raw[2], raw[3]]],
                vec![vec![raw[4], raw[5]], vec![raw[6], raw[7]]],
            ];
            let form = SecondFormTensor::from_values(vec![0.0, 0.0], values).unwrap();
            prop_assert_eq!(geodesic_criterion_residual(&form, &target, p, q, p, q).unwrap(), 0.0);
        }

        #[test]
        fn certificates_never_guarantee_when_a_root_is_hit(
            p1 in 1i64..=30, q1 in 1i64..=30, p2 in 1i64..=30, q2 in 1i64..=30,
        ) {
            let cert = harmonicity_certificate(p1, q1, p2, q2).unwrap();
            let root_hit = cert.sigma_root_matched || cert.conjugate_root_matched;
            prop_assert_eq!(cert.coeff.is_zero(), root_hit);
            prop_assert_eq!(
                cert.verdict == CertificateVerdict::GuaranteedHarmonic,
                !cert.coeff.is_zero()
            );
        }
    }
}
