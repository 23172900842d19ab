//! Smooth maps between flat model spaces: pushforwards, kernels, and the
//! structure-intertwining check that defines a metallic map.
//!
//! A [`SmoothMap`] carries a float evaluation function plus as much
//! optional exact data as the map admits: an analytic Jacobian closure,
//! and — for linear maps — the exact matrix itself. Every operation
//! prefers the most exact route available and falls back through
//! analytic derivatives to central finite differences.
//!
//! The headline predicate is [`is_metallic_map`]: a map `F` between
//! spaces carrying structure tensors `J₁`, `J₂` intertwines them when
//! `F_* ∘ J₁ = J₂ ∘ F_*`. For linear maps and exact structures this is
//! decided exactly (a matrix identity over `Q(√d)`); otherwise it is
//! sampled at caller-provided points against a tolerance.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{ExactError, QuadExt};
use crate::matrix::ExactMatrix;
use crate::numeric::svd_nullspace;
use crate::structures::{StructureError, StructureSpec};
use crate::variation::{MetricField, VariationError};

type PointFn = dyn Fn(&[f64]) -> Option<Vec<f64>> + Send + Sync;
type JacobianFn = dyn Fn(&[f64]) -> Option<Vec<Vec<f64>>> + Send + Sync;

/// Default central-difference step for first derivatives.
pub const DEFAULT_FD_STEP: f64 = 1e-6;

/// Relative singular-value cutoff for numeric rank decisions.
pub const RANK_CUTOFF: f64 = 1e-9;

/// Errors from map construction and map operations.
#[derive(Debug, Error)]
pub enum MapError {
    /// The evaluation function returned nothing at a required point.
    #[error("map evaluation failed at {point:?}")]
    EvaluationFailure { point: Vec<f64> },
    /// Incompatible dimensions between map, vectors, or structures.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    /// A singular value sits too close to the rank cutoff to trust.
    #[error("rank decision ambiguous: singular value {value:.3e} near cutoff {cutoff:.3e}")]
    RankAmbiguous { value: f64, cutoff: f64 },
    /// The operation needs the exact linear matrix, which is absent.
    #[error("operation requires an exact linear map")]
    NotLinear,
    /// A JSON map file failed to parse.
    #[error("map file parse error: {0}")]
    Parse(String),
    /// A parameter violated a documented precondition.
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

/// A smooth map `F : R^{dim_source} → R^{dim_target}`.
#[derive(Clone)]
pub struct SmoothMap {
    dim_source: usize,
    dim_target: usize,
    eval: Arc<PointFn>,
    jacobian: Option<Arc<JacobianFn>>,
    fd_step: f64,
    linear_matrix: Option<ExactMatrix>,
}

/// Vertical (kernel) and horizontal (metric-orthogonal complement) bases
/// of a map's differential at a point, in float coordinates.
#[derive(Debug, Clone)]
pub struct DistributionPair {
    pub vertical: Vec<Vec<f64>>,
    pub horizontal: Vec<Vec<f64>>,
}

/// The same splitting computed exactly (linear maps, exact metrics).
#[derive(Debug, Clone)]
pub struct ExactDistributionPair {
    pub vertical: Vec<Vec<QuadExt>>,
    pub horizontal: Vec<Vec<QuadExt>>,
}

/// Verdict of a metallic-map check.
#[derive(Debug, Clone, Serialize)]
pub struct IntertwineReport {
    /// True when the intertwining relation holds (exactly, or within
    /// tolerance on the numeric path).
    pub metallic: bool,
    /// Largest residual observed: exactly zero on a passing exact check.
    pub max_residual: f64,
    /// True when the verdict came from exact arithmetic.
    pub exact: bool,
}

impl SmoothMap {
    /// The linear map `x ↦ Ax` with exact matrix `A`; evaluation and
    /// Jacobian derive from the float image of `A`, and exact operations
    /// use `A` itself.
    pub fn linear(matrix: ExactMatrix) -> Self {
        let rows = matrix.to_f64_rows();
        let dim_source = matrix.cols();
        let dim_target = matrix.rows();
        let eval_rows = rows.clone();
        Self {
            dim_source,
            dim_target,
            eval: Arc::new(move |x: &[f64]| {
                Some(eval_rows.iter().map(|r| dot(r, x)).collect())
            }),
            jacobian: Some(Arc::new(move |_: &[f64]| Some(rows.clone()))),
            fd_step: DEFAULT_FD_STEP,
            linear_matrix: Some(matrix),
        }
    }

    /// The affine map `x ↦ Ax + b`. The constant Jacobian `A` is
    /// attached analytically, so derivative-based operations stay at
    /// machine precision, but a shifted map is not linear: exact
    /// operations stay unavailable (use [`Self::linear`] when `b = 0`).
    pub fn affine(matrix: ExactMatrix, shift: Vec<f64>) -> Result<Self, MapError> {
        if shift.len() != matrix.rows() {
            return Err(MapError::DimensionMismatch(format!(
                "shift has {} components but the matrix has {} rows",
                shift.len(),
                matrix.rows()
            )));
        }
        let rows = matrix.to_f64_rows();
        let dim_source = matrix.cols();
        let dim_target = matrix.rows();
        let eval_rows = rows.clone();
        Ok(Self {
            dim_source,
            dim_target,
            eval: Arc::new(move |x: &[f64]| {
                Some(eval_rows.iter().zip(&shift).map(|(r, b)| dot(r, x) + b).collect())
            }),
            jacobian: Some(Arc::new(move |_: &[f64]| Some(rows.clone()))),
            fd_step: DEFAULT_FD_STEP,
            linear_matrix: None,
        })
    }

    /// A general map from an evaluation closure. The closure returns
    /// `None` outside its domain, which surfaces as
    /// [`MapError::EvaluationFailure`].
    pub fn from_fn(
        dim_source: usize,
        dim_target: usize,
        eval: impl Fn(&[f64]) -> Option<Vec<f64>> + Send + Sync + 'static,
    ) -> Result<Self, MapError> {
        if dim_source == 0 || dim_target == 0 {
            return Err(MapError::InvalidParameters("dimensions must be positive".into()));
        }
        Ok(Self {
            dim_source,
            dim_target,
            eval: Arc::new(eval),
            jacobian: None,
            fd_step: DEFAULT_FD_STEP,
            linear_matrix: None,
        })
    }

    /// Attach an analytic Jacobian (`dim_target × dim_source`, row-major).
    pub fn with_jacobian(
        mut self,
        jacobian: impl Fn(&[f64]) -> Option<Vec<Vec<f64>>> + Send + Sync + 'static,
    ) -> Self {
        self.jacobian = Some(Arc::new(jacobian));
        self
    }

    /// Override the finite-difference step (must be positive and finite).
    pub fn with_fd_step(mut self, step: f64) -> Result<Self, MapError> {
        if !(step > 0.0) || !step.is_finite() {
            return Err(MapError::InvalidParameters(format!(
                "finite-difference step must be positive and finite, got {step}"
            )));
        }
        self.fd_step = step;
        Ok(self)
    }

    pub fn dim_source(&self) -> usize {
        self.dim_source
    }

    pub fn dim_target(&self) -> usize {
        self.dim_target
    }

    pub fn fd_step(&self) -> f64 {
        self.fd_step
    }

    /// The exact matrix when the map is linear.
    pub fn linear_matrix(&self) -> Option<&ExactMatrix> {
        self.linear_matrix.as_ref()
    }

    /// True when an analytic Jacobian is attached (always true for
    /// linear maps).
    pub fn has_analytic_jacobian(&self) -> bool {
        self.jacobian.is_some()
    }

    /// Evaluate `F(x)`.
    pub fn eval(&self, x: &[f64]) -> Result<Vec<f64>, MapError> {
        self.check_source_dim(x.len())?;
        let value = (self.eval)(x).ok_or_else(|| MapError::EvaluationFailure {
            point: x.to_vec(),
        })?;
        if value.len() != self.dim_target {
            return Err(MapError::DimensionMismatch(format!(
                "evaluation returned {} components, expected {}",
                value.len(),
                self.dim_target
            )));
        }
        Ok(value)
    }

    /// The Jacobian at `x`: exact float image for linear maps, the
    /// analytic closure when attached, central finite differences with
    /// step [`fd_step`](Self::fd_step) otherwise.
    pub fn jacobian_at(&self, x: &[f64]) -> Result<Vec<Vec<f64>>, MapError> {
        self.check_source_dim(x.len())?;
        if let Some(matrix) = &self.linear_matrix {
            return Ok(matrix.to_f64_rows());
        }
        if let Some(jac) = &self.jacobian {
            let value = jac(x).ok_or_else(|| MapError::EvaluationFailure {
                point: x.to_vec(),
            })?;
            if value.len() != self.dim_target
                || value.iter().any(|row| row.len() != self.dim_source)
            {
                return Err(MapError::DimensionMismatch(
                    "analytic Jacobian has the wrong shape".into(),
                ));
            }
            return Ok(value);
        }
        let h = self.fd_step;
        let mut columns = Vec::with_capacity(self.dim_source);
        for j in 0..self.dim_source {
            let mut forward = x.to_vec();
            forward[j] += h;
            let mut backward = x.to_vec();
            backward[j] -= h;
            let f_plus = self.eval(&forward)?;
            let f_minus = self.eval(&backward)?;
            columns.push(
                f_plus
                    .iter()
                    .zip(&f_minus)
                    .map(|(a, b)| (a - b) / (2.0 * h))
                    .collect::<Vec<f64>>(),
            );
        }
        Ok((0..self.dim_target)
            .map(|i| (0..self.dim_source).map(|j| columns[j][i]).collect())
            .collect())
    }

    /// Jacobian as an `nalgebra` matrix.
    pub fn jacobian_dmatrix(&self, x: &[f64]) -> Result<DMatrix<f64>, MapError> {
        let rows = self.jacobian_at(x)?;
        Ok(DMatrix::from_fn(self.dim_target, self.dim_source, |i, j| rows[i][j]))
    }

    /// Pushforward `F_*(v)` at `x` through the best available Jacobian.
    pub fn pushforward(&self, x: &[f64], v: &[f64]) -> Result<Vec<f64>, MapError> {
        if v.len() != self.dim_source {
            return Err(MapError::DimensionMismatch(format!(
                "vector has {} components, expected {}",
                v.len(),
                self.dim_source
            )));
        }
        let jac = self.jacobian_at(x)?;
        Ok(jac.iter().map(|row| dot(row, v)).collect())
    }

    /// Exact pushforward of an exact vector; requires a linear map.
    pub fn pushforward_exact(&self, v: &[QuadExt]) -> Result<Vec<QuadExt>, MapError> {
        let matrix = self.linear_matrix.as_ref().ok_or(MapError::NotLinear)?;
        if v.len() != self.dim_source {
            return Err(MapError::DimensionMismatch(format!(
                "vector has {} components, expected {}",
                v.len(),
                self.dim_source
            )));
        }
        Ok(matrix.mul_vec(v))
    }

    /// Kernel and metric-orthogonal complement of the differential at
    /// `x`, exactly when both the map and the source metric are exact,
    /// else by SVD with the [`RANK_CUTOFF`] policy.
    pub fn vertical_horizontal(
        &self,
        x: &[f64],
        g: &MetricField,
    ) -> Result<DistributionPair, MapError> {
        if g.dim() != self.dim_source {
            return Err(MapError::DimensionMismatch(format!(
                "metric dimension {} does not match source dimension {}",
                g.dim(),
                self.dim_source
            )));
        }
        if let (Some(_), Some(exact_g)) = (&self.linear_matrix, g.constant_exact()) {
            let exact = self.vertical_horizontal_exact(exact_g)?;
            return Ok(DistributionPair {
                vertical: exact.vertical.iter().map(|v| to_floats(v)).collect(),
                horizontal: exact.horizontal.iter().map(|v| to_floats(v)).collect(),
            });
        }
        let jac = self.jacobian_dmatrix(x)?;
        let kernel = svd_nullspace(&jac, RANK_CUTOFF)
            .map_err(|a| MapError::RankAmbiguous { value: a.value, cutoff: a.cutoff })?;
        let vertical: Vec<Vec<f64>> =
            kernel.basis.iter().map(|v| v.iter().cloned().collect()).collect();
        let horizontal = if kernel.rank == self.dim_source {
            // Full column rank: trivial kernel, everything horizontal.
            identity_basis(self.dim_source)
        } else {
            // h is horizontal iff g(v, h) = 0 for all vertical v: the
            // nullspace of the (k × n) matrix with rows vᵀG.
            let metric = g.eval_at(x).map_err(metric_error)?;
            let rows = DMatrix::from_fn(vertical.len(), self.dim_source, |i, j| {
                let v = DVector::from_vec(vertical[i].clone());
                (metric.column(j).transpose() * v)[(0, 0)]
            });
            let complement = svd_nullspace(&rows, RANK_CUTOFF)
                .map_err(|a| MapError::RankAmbiguous { value: a.value, cutoff: a.cutoff })?;
            complement.basis.iter().map(|v| v.iter().cloned().collect()).collect()
        };
        Ok(DistributionPair { vertical, horizontal })
    }

    /// Exact kernel/complement splitting for a linear map under an exact
    /// source metric.
    pub fn vertical_horizontal_exact(
        &self,
        g: &ExactMatrix,
    ) -> Result<ExactDistributionPair, MapError> {
        let matrix = self.linear_matrix.as_ref().ok_or(MapError::NotLinear)?;
        if g.rows() != self.dim_source || g.cols() != self.dim_source {
            return Err(MapError::DimensionMismatch(
                "metric shape does not match the source dimension".into(),
            ));
        }
        let vertical = matrix.nullspace();
        let horizontal = if vertical.is_empty() {
            (0..self.dim_source)
                .map(|j| {
                    let mut e = vec![QuadExt::zero(); self.dim_source];
                    e[j] = QuadExt::one();
                    e
                })
                .collect()
        } else {
            let pairing_rows: Vec<Vec<QuadExt>> =
                vertical.iter().map(|v| g.transpose().mul_vec(v)).collect();
            let pairing = ExactMatrix::from_rows(pairing_rows).expect("rows share the length");
            pairing.nullspace()
        };
        Ok(ExactDistributionPair { vertical, horizontal })
    }

    fn check_source_dim(&self, len: usize) -> Result<(), MapError> {
        if len != self.dim_source {
            return Err(MapError::DimensionMismatch(format!(
                "point has {len} components, expected {}",
                self.dim_source
            )));
        }
        Ok(())
    }

    /// Serialize a linear map to the JSON map-file form.
    pub fn to_json(&self) -> Result<String, MapError> {
        let matrix = self.linear_matrix.as_ref().ok_or(MapError::NotLinear)?;
        let file = MapFile {
            dim_source: self.dim_source,
            dim_target: self.dim_target,
            linear_matrix: matrix.clone(),
        };
        Ok(serde_json::to_string_pretty(&file).expect("serialization is total"))
    }

    /// Parse a JSON map file (linear maps only; general maps are
    /// constructed programmatically).
    pub fn from_json_str(text: &str) -> Result<Self, MapError> {
        let file: MapFile =
            serde_json::from_str(text).map_err(|e| MapError::Parse(e.to_string()))?;
        if file.linear_matrix.rows() != file.dim_target
            || file.linear_matrix.cols() != file.dim_source
        {
            return Err(MapError::Parse(format!(
                "linear_matrix is {}x{} but the declared dimensions are {}x{}",
                file.linear_matrix.rows(),
                file.linear_matrix.cols(),
                file.dim_target,
                file.dim_source
            )));
        }
        Ok(Self::linear(file.linear_matrix))
    }
}

impl std::fmt::Debug for SmoothMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SmoothMap")
            .field("dim_source", &self.dim_source)
            .field("dim_target", &self.dim_target)
            .field("fd_step", &self.fd_step)
            .field("linear", &self.linear_matrix.is_some())
            .field("analytic_jacobian", &self.jacobian.is_some())
            .finish()
    }
}

/// Wire format of a linear-map file.
#[derive(Serialize, Deserialize)]
struct MapFile {
    dim_source: usize,
    dim_target: usize,
    linear_matrix: ExactMatrix,
}

/// Decide whether `F` intertwines the structure tensors: `F_*J₁ = J₂F_*`.
///
/// With a linear map whose matrix shares a quadratic field with both
/// structure tensors the check is the exact matrix identity
/// `A·J₁ − J₂·A = 0` and `tol` is ignored. Otherwise the residual
/// `max_i ‖F_*(J₁eᵢ) − J₂F_*(eᵢ)‖₂` is sampled at the given points and
/// compared against `tol`.
pub fn is_metallic_map(
    map: &SmoothMap,
    source: &StructureSpec,
    target: &StructureSpec,
    samples: &[Vec<f64>],
    tol: f64,
) -> Result<IntertwineReport, MapError> {
    if source.dim() != map.dim_source() {
        return Err(MapError::DimensionMismatch(format!(
            "source structure lives on R^{} but the map starts on R^{}",
            source.dim(),
            map.dim_source()
        )));
    }
    if target.dim() != map.dim_target() {
        return Err(MapError::DimensionMismatch(format!(
            "target structure lives on R^{} but the map lands on R^{}",
            target.dim(),
            map.dim_target()
        )));
    }
    if let Some(matrix) = map.linear_matrix() {
        // Exact route, available when all three matrices share a field.
        let fields = [
            matrix.field_radicand()?,
            source.tensor().field_radicand()?,
            target.tensor().field_radicand()?,
        ];
        let compatible = {
            let mut field = 1;
            fields.iter().all(|&d| {
                if d == 1 || field == d {
                    true
                } else if field == 1 {
                    field = d;
                    true
                } else {
                    false
                }
            })
        };
        if compatible {
            let residual = &(matrix * source.tensor()) - &(target.tensor() * matrix);
            return Ok(IntertwineReport {
                metallic: residual.is_zero(),
                max_residual: residual.max_abs().to_f64(),
                exact: true,
            });
        }
    }
    if !(tol > 0.0) {
        return Err(MapError::InvalidParameters(format!(
            "numeric check needs a positive tolerance, got {tol}"
        )));
    }
    if samples.is_empty() {
        return Err(MapError::InvalidParameters(
            "numeric check needs at least one sample point".into(),
        ));
    }
    let j1 = source.tensor().to_dmatrix();
    let j2 = target.tensor().to_dmatrix();
    let mut max_residual = 0.0f64;
    for point in samples {
        let jac = map.jacobian_dmatrix(point)?;
        let lhs = &jac * &j1;
        let rhs = &j2 * &jac;
        for col in 0..map.dim_source() {
            let diff = lhs.column(col) - rhs.column(col);
            max_residual = max_residual.max(diff.norm());
        }
    }
    Ok(IntertwineReport { metallic: max_residual < tol, max_residual, exact: false })
}

/// The canonical metallic submersion triple on parameters `(p, q)`:
/// the pair-averaging map
/// `F(x₁,x₂,x₃,x₄) = ((x₁+x₂)/2, (x₃+x₄)/2)` from `R⁴` to `R²`, with
/// `J₁ = diag(σ, σ, p−σ, p−σ)` upstairs and `J₂ = diag(σ, p−σ)`
/// downstairs (σ the metallic mean, Euclidean metrics). The triple
/// intertwines exactly for every valid `(p, q)`.
pub fn pair_averaging_triple(
    p: i64,
    q: i64,
) -> Result<(SmoothMap, StructureSpec, StructureSpec), MapError> {
    use crate::structures::StructureKind;
    let source = StructureSpec::canonical(StructureKind::Metallic { p, q }, &[2, 2])?;
    let target = StructureSpec::canonical(StructureKind::Metallic { p, q }, &[1, 1])?;
    let half = QuadExt::from_fraction(1, 2).expect("denominator 2");
    let zero = QuadExt::zero;
    let matrix = ExactMatrix::from_rows(vec![
        vec![half.clone(), half.clone(), zero(), zero()],
        vec![zero(), zero(), half.clone(), half],
    ])
    .expect("rows share the length");
    Ok((SmoothMap::linear(matrix), source, target))
}

fn dot(row: &[f64], v: &[f64]) -> f64 {
    row.iter().zip(v).map(|(a, b)| a * b).sum()
}

fn metric_error(e: VariationError) -> MapError {
    match e {
        VariationError::EvaluationFailure { point } => MapError::EvaluationFailure { point },
        other => MapError::InvalidParameters(other.to_string()),
    }
}

fn to_floats(v: &[QuadExt]) -> Vec<f64> {
    v.iter().map(QuadExt::to_f64).collect()
}

fn identity_basis(dim: usize) -> Vec<Vec<f64>> {
    (0..dim)
        .map(|j| (0..dim).map(|i| if i == j { 1.0 } else { 0.0 }).collect())
        .collect()
}
