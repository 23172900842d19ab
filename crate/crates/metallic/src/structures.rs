//! Canonical polynomial structures on flat model spaces and their exact
//! verification.
//!
//! A structure here is an endomorphism field with constant coefficients
//! on `R^n`, stored as an exact matrix, together with optional metric and
//! contact data. Six families are supported, each defined by a polynomial
//! identity on the structure tensor:
//!
//! | kind                | identity              | extra data        |
//! |---------------------|-----------------------|-------------------|
//! | metallic `(p,q)`    | `J² = pJ + qI`        | —                 |
//! | golden              | `P² = P + I`          | —                 |
//! | almost product      | `φ² = I`              | —                 |
//! | almost complex      | `J² = −I`             | even dim          |
//! | almost contact      | `φ² = −I + η⊗ξ`       | `ξ`, `η`, odd dim |
//! | almost para-contact | `φ² = I − η⊗ξ`        | `ξ`, `η`, odd dim |
//!
//! The golden family is the metallic family at `p = q = 1`; it keeps its
//! own tag because the constancy classification treats it as a distinct
//! target. Every check in this module is exact — residuals are matrices
//! over `Q(√d)` and "passes" means identically zero, never "small".

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{metallic_conjugate, metallic_mean, ExactError, QuadExt};
use crate::matrix::ExactMatrix;

/// The six supported structure families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StructureKind {
    /// `J² = pJ + qI` with positive integer parameters.
    Metallic { p: i64, q: i64 },
    /// `P² = P + I`, the metallic structure at `(1,1)`.
    Golden,
    /// `φ² = I`.
    AlmostProduct,
    /// `J² = −I`; needs even dimension.
    AlmostComplex,
    /// `φ² = −I + η⊗ξ` with `φξ = 0`, `η∘φ = 0`, `η(ξ) = 1`; odd dimension.
    AlmostContact,
    /// `φ² = I − η⊗ξ` with the same chain conditions; odd dimension.
    AlmostParaContact,
}

impl StructureKind {
    /// Wire name used in JSON files and CLI arguments.
    pub fn name(&self) -> &'static str {
        match self {
            StructureKind::Metallic { .. } => "metallic",
            StructureKind::Golden => "golden",
            StructureKind::AlmostProduct => "product",
            StructureKind::AlmostComplex => "complex",
            StructureKind::AlmostContact => "contact",
            StructureKind::AlmostParaContact => "para_contact",
        }
    }

    /// True for the two families carrying `ξ`/`η` data.
    pub fn is_contact_type(&self) -> bool {
        matches!(self, StructureKind::AlmostContact | StructureKind::AlmostParaContact)
    }

    fn requires_odd_dim(&self) -> bool {
        self.is_contact_type()
    }

    fn requires_even_dim(&self) -> bool {
        matches!(self, StructureKind::AlmostComplex)
    }
}

impl std::fmt::Display for StructureKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StructureKind::Metallic { p, q } => write!(f, "metallic({p},{q})"),
            other => f.write_str(other.name()),
        }
    }
}

/// Errors from structure construction and the structure operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    /// Dimension has the wrong parity for the kind.
    #[error("dimension parity violated: {0}")]
    DimensionParity(String),
    /// A canonical block was requested with multiplicity zero.
    #[error("structure block multiplicities must be positive")]
    EmptyBlock,
    /// The operation needs a metric but the structure carries none.
    #[error("operation requires a metric but none is attached")]
    MissingMetric,
    /// The operation is defined for a different structure kind.
    #[error("wrong structure kind: {0}")]
    WrongKind(String),
    /// The kind has no exact real eigendecomposition.
    #[error("exact eigenstructure unavailable: {0}")]
    UnsupportedKind(String),
    /// Component data violates a structural invariant.
    #[error("invalid structure data: {0}")]
    InvalidData(String),
    /// A JSON document failed to parse against the structure schema.
    #[error("structure file parse error: {0}")]
    Parse(String),
    /// Exact-arithmetic failure (mixed fields, bad parameters).
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// A structure tensor on `R^dim` with optional metric and contact data.
///
/// Fields are read-only after construction; [`StructureSpec::new`]
/// validates shapes, field consistency, parity, and metric definiteness
/// once, so later operations can use panicking exact arithmetic freely.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureSpec {
    kind: StructureKind,
    dim: usize,
    j: ExactMatrix,
    g: Option<ExactMatrix>,
    xi: Option<Vec<QuadExt>>,
    eta: Option<Vec<QuadExt>>,
}

/// One named exact identity check with its residual magnitude.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityCheck {
    /// Which identity was checked.
    pub name: String,
    /// Largest absolute entry of the exact residual, stringified for
    /// reporting; zero iff the identity holds.
    pub residual_norm: QuadExt,
    /// True iff the residual vanishes identically.
    pub ok: bool,
}

impl IdentityCheck {
    fn from_matrix(name: &str, residual: &ExactMatrix) -> Self {
        Self { name: name.to_owned(), residual_norm: residual.max_abs(), ok: residual.is_zero() }
    }

    fn from_vector(name: &str, residual: &[QuadExt]) -> Self {
        Self::from_matrix(name, &ExactMatrix::column(residual))
    }
}

/// Outcome of an exact verification: the residual of the headline
/// identity plus the full list of per-identity checks.
#[derive(Debug, Clone)]
pub struct VerifyOutcome {
    /// Exact residual matrix of the kind's defining (or metric) identity.
    pub residual: ExactMatrix,
    /// All identities checked, including the contact chain conditions.
    pub checks: Vec<IdentityCheck>,
    /// True iff every check passed exactly.
    pub ok: bool,
}

impl VerifyOutcome {
    fn collect(residual: ExactMatrix, checks: Vec<IdentityCheck>) -> Self {
        let ok = checks.iter().all(|c| c.ok);
        Self { residual, checks, ok }
    }
}

/// The complementary projectors `Q = (I+φ)/2`, `Q′ = (I−φ)/2` of an
/// almost product structure.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectorPair {
    pub q: ExactMatrix,
    pub q_prime: ExactMatrix,
}

/// An exact eigenvalue with a basis of its eigenspace.
#[derive(Debug, Clone)]
pub struct Eigenspace {
    pub value: QuadExt,
    pub basis: Vec<Vec<QuadExt>>,
}

impl StructureSpec {
    /// Assemble and validate a structure from raw components.
    ///
    /// Checks performed here (all exact):
    /// * `J` is `dim×dim`; `g`/`ξ`/`η` shapes match when present;
    /// * all entries live in one quadratic field;
    /// * metallic parameters are positive;
    /// * parity: even `dim` for almost complex, odd for contact kinds;
    /// * `ξ`/`η` are present exactly for the contact kinds;
    /// * `g` is symmetric, and positive definite for every kind except
    ///   almost para-contact, whose metric must have signature
    ///   `((dim+1)/2, (dim−1)/2)`.
    pub fn new(
        kind: StructureKind,
        dim: usize,
        j: ExactMatrix,
        g: Option<ExactMatrix>,
        xi: Option<Vec<QuadExt>>,
        eta: Option<Vec<QuadExt>>,
    ) -> Result<Self, StructureError> {
        if dim == 0 {
            return Err(StructureError::InvalidData("dimension must be positive".into()));
        }
        if j.rows() != dim || j.cols() != dim {
            return Err(StructureError::InvalidData(format!(
                "structure tensor is {}x{}, expected {dim}x{dim}",
                j.rows(),
                j.cols()
            )));
        }
        if let StructureKind::Metallic { p, q } = kind {
            if p < 1 || q < 1 {
                return Err(StructureError::InvalidData(format!(
                    "metallic parameters must be positive integers, got p={p}, q={q}"
                )));
            }
        }
        if kind.requires_even_dim() && dim % 2 != 0 {
            return Err(StructureError::DimensionParity(format!(
                "almost complex structures need even dimension, got {dim}"
            )));
        }
        if kind.requires_odd_dim() && dim % 2 == 0 {
            return Err(StructureError::DimensionParity(format!(
                "contact-type structures need odd dimension, got {dim}"
            )));
        }
        if kind.is_contact_type() != (xi.is_some() && eta.is_some())
            || (xi.is_some() != eta.is_some())
        {
            return Err(StructureError::InvalidData(
                "xi and eta must be present exactly for contact-type kinds".into(),
            ));
        }
        if let Some(v) = &xi {
            if v.len() != dim {
                return Err(StructureError::InvalidData("xi length does not match dim".into()));
            }
        }
        if let Some(v) = &eta {
            if v.len() != dim {
                return Err(StructureError::InvalidData("eta length does not match dim".into()));
            }
        }
        if let Some(metric) = &g {
            if metric.rows() != dim || metric.cols() != dim {
                return Err(StructureError::InvalidData("metric shape does not match dim".into()));
            }
            if !metric.is_symmetric() {
                return Err(StructureError::InvalidData("metric must be symmetric".into()));
            }
            if kind == StructureKind::AlmostParaContact {
                let expected = ((dim + 1) / 2, dim / 2, 0);
                let inertia = metric.inertia();
                if inertia != expected {
                    return Err(StructureError::InvalidData(format!(
                        "para-contact metric must have signature ({}, {}), found ({}, {}) with {} null directions",
                        expected.0, expected.1, inertia.0, inertia.1, inertia.2
                    )));
                }
            } else if !metric.is_positive_definite() {
                return Err(StructureError::InvalidData(
                    "metric must be positive definite".into(),
                ));
            }
        }
        let spec = Self { kind, dim, j, g, xi, eta };
        spec.field_radicand()?;
        Ok(spec)
    }

    /// The canonical model of a kind, built from block multiplicities.
    ///
    /// * `Metallic(p,q)` / `Golden`: multiplicities `(m₁, m₂)` give
    ///   `J = diag(σ·I_{m₁}, (p−σ)·I_{m₂})` on `R^{m₁+m₂}` with the
    ///   Euclidean metric, `σ = σ_{p,q}` the metallic mean.
    /// * `AlmostProduct`: `(m₁, m₂)` give `diag(+I_{m₁}, −I_{m₂})`.
    /// * `AlmostComplex`: `(n)` gives the rotation block
    ///   `[[0, −I_n], [I_n, 0]]` on `R^{2n}`.
    /// * `AlmostContact`: `(n)` gives the rotation block on the first
    ///   `2n` coordinates, a zero last row/column, `ξ = e_{2n+1}`,
    ///   `η = e^{2n+1}`, Euclidean metric.
    /// * `AlmostParaContact`: `(n)` gives the swap block
    ///   `[[0, I_n], [I_n, 0]]` padded the same way, with metric
    ///   `diag(I_n, −I_n, 1)` of signature `(n+1, n)`.
    pub fn canonical(kind: StructureKind, multiplicities: &[usize]) -> Result<Self, StructureError> {
        match kind {
            StructureKind::Metallic { p, q } => {
                let (m1, m2) = two_blocks(multiplicities)?;
                let sigma = metallic_mean(p, q)?;
                let conj = metallic_conjugate(p, q)?;
                Self::eigen_diagonal(kind, &sigma, m1, &conj, m2)
            }
            StructureKind::Golden => {
                let (m1, m2) = two_blocks(multiplicities)?;
                let sigma = metallic_mean(1, 1)?;
                let conj = metallic_conjugate(1, 1)?;
                Self::eigen_diagonal(kind, &sigma, m1, &conj, m2)
            }
            StructureKind::AlmostProduct => {
                let (m1, m2) = two_blocks(multiplicities)?;
                Self::eigen_diagonal(
                    kind,
                    &QuadExt::one(),
                    m1,
                    &QuadExt::from_integer(-1),
                    m2,
                )
            }
            StructureKind::AlmostComplex => {
                let n = one_block(multiplicities)?;
                let dim = 2 * n;
                let j = rotation_block(n, dim, -1);
                Self::new(kind, dim, j, Some(ExactMatrix::identity(dim)), None, None)
            }
            StructureKind::AlmostContact => {
                let n = one_block(multiplicities)?;
                let dim = 2 * n + 1;
                let j = rotation_block(n, dim, -1);
                let (xi, eta) = reeb_pair(dim);
                Self::new(kind, dim, j, Some(ExactMatrix::identity(dim)), Some(xi), Some(eta))
            }
            StructureKind::AlmostParaContact => {
                let n = one_block(multiplicities)?;
                let dim = 2 * n + 1;
                let j = rotation_block(n, dim, 1);
                let (xi, eta) = reeb_pair(dim);
                let mut g = ExactMatrix::identity(dim);
                for i in n..2 * n {
                    g.set(i, i, QuadExt::from_integer(-1));
                }
                Self::new(kind, dim, j, Some(g), Some(xi), Some(eta))
            }
        }
    }

    fn eigen_diagonal(
        kind: StructureKind,
        first: &QuadExt,
        m1: usize,
        second: &QuadExt,
        m2: usize,
    ) -> Result<Self, StructureError> {
        let dim = m1 + m2;
        let mut entries = vec![first.clone(); m1];
        entries.extend(vec![second.clone(); m2]);
        Self::new(
            kind,
            dim,
            ExactMatrix::diagonal(&entries),
            Some(ExactMatrix::identity(dim)),
            None,
            None,
        )
    }

    pub fn kind(&self) -> StructureKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The structure tensor.
    pub fn tensor(&self) -> &ExactMatrix {
        &self.j
    }

    /// The metric, when attached.
    pub fn metric(&self) -> Option<&ExactMatrix> {
        self.g.as_ref()
    }

    pub fn xi(&self) -> Option<&[QuadExt]> {
        self.xi.as_deref()
    }

    pub fn eta(&self) -> Option<&[QuadExt]> {
        self.eta.as_deref()
    }

    /// The single quadratic field all components live in.
    pub fn field_radicand(&self) -> Result<u64, ExactError> {
        let mut field = self.j.field_radicand()?;
        let mut merge = |d: u64| -> Result<(), ExactError> {
            if d == 1 {
                return Ok(());
            }
            if field == 1 {
                field = d;
                Ok(())
            } else if field == d {
                Ok(())
            } else {
                Err(ExactError::MixedRadicands { left: field, right: d })
            }
        };
        if let Some(g) = &self.g {
            merge(g.field_radicand()?)?;
        }
        for vector in [&self.xi, &self.eta].into_iter().flatten() {
            merge(ExactMatrix::column(vector).field_radicand()?)?;
        }
        Ok(field)
    }

    /// Verify the kind's defining polynomial identity (and, for contact
    /// kinds, the chain conditions `φξ = 0`, `η∘φ = 0`, `η(ξ) = 1`),
    /// returning exact residuals. Failure is a result, not an error.
    pub fn verify(&self) -> VerifyOutcome {
        let j = &self.j;
        let square = j * j;
        let identity = ExactMatrix::identity(self.dim);
        let residual = match self.kind {
            StructureKind::Metallic { p, q } => {
                let linear = j.scale(&QuadExt::from_integer(p));
                let constant = identity.scale(&QuadExt::from_integer(q));
                &(&square - &linear) - &constant
            }
            StructureKind::Golden => &(&square - j) - &identity,
            StructureKind::AlmostProduct => &square - &identity,
            StructureKind::AlmostComplex => &square + &identity,
            StructureKind::AlmostContact => {
                let outer = ExactMatrix::outer(self.xi().unwrap(), self.eta().unwrap());
                &(&square + &identity) - &outer
            }
            StructureKind::AlmostParaContact => {
                let outer = ExactMatrix::outer(self.xi().unwrap(), self.eta().unwrap());
                &(&square - &identity) + &outer
            }
        };
        let mut checks = vec![IdentityCheck::from_matrix("square identity", &residual)];
        if self.kind.is_contact_type() {
            let xi = self.xi().unwrap();
            let eta = self.eta().unwrap();
            checks.push(IdentityCheck::from_vector("phi annihilates xi", &j.mul_vec(xi)));
            let eta_phi = j.transpose().mul_vec(eta);
            checks.push(IdentityCheck::from_vector("eta annihilates the image of phi", &eta_phi));
            let pairing = eta
                .iter()
                .zip(xi)
                .fold(QuadExt::zero(), |acc, (e, x)| acc + e * x)
                - QuadExt::one();
            checks.push(IdentityCheck::from_vector("eta(xi) = 1", &[pairing]));
        }
        VerifyOutcome::collect(residual, checks)
    }

    /// Verify metric compatibility exactly. The headline identity per
    /// kind, with `G` the metric and `T` the structure tensor:
    ///
    /// * metallic / golden: `TᵀG = GT` (self-adjointness), plus the
    ///   equivalent quadratic form `TᵀGT = p·GT + q·G`;
    /// * almost product: `TᵀGT = G`, plus self-adjointness;
    /// * almost complex: `TᵀGT = G`, plus skew-adjointness `TᵀG = −GT`;
    /// * almost contact: `TᵀGT = G − ηᵀη` and `Gξ = η`;
    /// * almost para-contact: `TᵀGT = −G + ηᵀη` and `Gξ = η`.
    pub fn verify_compatibility(&self) -> Result<VerifyOutcome, StructureError> {
        let g = self.g.as_ref().ok_or(StructureError::MissingMetric)?;
        let j = &self.j;
        let jt = j.transpose();
        let jtg = &jt * g;
        let gj = g * j;
        let jtgj = &jt * &gj;
        let outcome = match self.kind {
            StructureKind::Metallic { p, q } => {
                let residual = &jtg - &gj;
                let quadratic = &(&jtgj - &gj.scale(&QuadExt::from_integer(p)))
                    - &g.scale(&QuadExt::from_integer(q));
                VerifyOutcome::collect(
                    residual.clone(),
                    vec![
                        IdentityCheck::from_matrix("self-adjointness", &residual),
                        IdentityCheck::from_matrix("quadratic metric identity", &quadratic),
                    ],
                )
            }
            StructureKind::Golden => {
                let residual = &jtg - &gj;
                let quadratic = &(&jtgj - &gj) - g;
                VerifyOutcome::collect(
                    residual.clone(),
                    vec![
                        IdentityCheck::from_matrix("self-adjointness", &residual),
                        IdentityCheck::from_matrix("quadratic metric identity", &quadratic),
                    ],
                )
            }
            StructureKind::AlmostProduct => {
                let residual = &jtgj - g;
                let adjoint = &jtg - &gj;
                VerifyOutcome::collect(
                    residual.clone(),
                    vec![
                        IdentityCheck::from_matrix("metric invariance", &residual),
                        IdentityCheck::from_matrix("self-adjointness", &adjoint),
                    ],
                )
            }
            StructureKind::AlmostComplex => {
                let residual = &jtgj - g;
                let skew = &jtg + &gj;
                VerifyOutcome::collect(
                    residual.clone(),
                    vec![
                        IdentityCheck::from_matrix("metric invariance", &residual),
                        IdentityCheck::from_matrix("skew-adjointness", &skew),
                    ],
                )
            }
            StructureKind::AlmostContact | StructureKind::AlmostParaContact => {
                let xi = self.xi().unwrap();
                let eta = self.eta().unwrap();
                let outer = ExactMatrix::outer(eta, eta);
                let expected = if self.kind == StructureKind::AlmostContact {
                    g - &outer
                } else {
                    &outer - g
                };
                let residual = &jtgj - &expected;
                let eta_vs_metric: Vec<QuadExt> = g
                    .mul_vec(xi)
                    .iter()
                    .zip(eta)
                    .map(|(gxi, e)| gxi - e)
                    .collect();
                VerifyOutcome::collect(
                    residual.clone(),
                    vec![
                        IdentityCheck::from_matrix("metric transfer identity", &residual),
                        IdentityCheck::from_vector("eta is the metric dual of xi", &eta_vs_metric),
                    ],
                )
            }
        };
        Ok(outcome)
    }

    /// The projector pair `Q = (I+φ)/2`, `Q′ = (I−φ)/2` of an almost
    /// product structure. Requires a structure that passes [`verify`].
    ///
    /// [`verify`]: StructureSpec::verify
    pub fn product_projectors(&self) -> Result<ProjectorPair, StructureError> {
        if self.kind != StructureKind::AlmostProduct {
            return Err(StructureError::WrongKind(format!(
                "projectors are defined for product structures, not {}",
                self.kind
            )));
        }
        if !self.verify().ok {
            return Err(StructureError::InvalidData(
                "projectors require a verified product structure".into(),
            ));
        }
        let identity = ExactMatrix::identity(self.dim);
        let half = QuadExt::from_fraction(1, 2).expect("denominator 2");
        Ok(ProjectorPair {
            q: (&identity + &self.j).scale(&half),
            q_prime: (&identity - &self.j).scale(&half),
        })
    }

    /// The fundamental two-form `ω_{ij} = g(e_i, φe_j)` of an almost
    /// para-contact metric structure. For a structure passing both
    /// [`verify`] and [`verify_compatibility`] the result is exactly
    /// skew-symmetric.
    ///
    /// [`verify`]: StructureSpec::verify
    /// [`verify_compatibility`]: StructureSpec::verify_compatibility
    pub fn fundamental_two_form(&self) -> Result<ExactMatrix, StructureError> {
        if self.kind != StructureKind::AlmostParaContact {
            return Err(StructureError::WrongKind(format!(
                "the fundamental two-form is defined for para-contact structures, not {}",
                self.kind
            )));
        }
        let g = self.g.as_ref().ok_or(StructureError::MissingMetric)?;
        if !self.verify().ok || !self.verify_compatibility()?.ok {
            return Err(StructureError::InvalidData(
                "the fundamental two-form requires a verified, compatible structure".into(),
            ));
        }
        Ok(g * &self.j)
    }

    /// Exact eigenvalues and eigenspace bases, for the kinds whose
    /// spectrum is real and lives in a quadratic field (metallic, golden,
    /// almost product). Eigenvalues with trivial eigenspace are omitted.
    pub fn eigenstructure(&self) -> Result<Vec<Eigenspace>, StructureError> {
        let values: Vec<QuadExt> = match self.kind {
            StructureKind::Metallic { p, q } => {
                vec![metallic_mean(p, q)?, metallic_conjugate(p, q)?]
            }
            StructureKind::Golden => vec![metallic_mean(1, 1)?, metallic_conjugate(1, 1)?],
            StructureKind::AlmostProduct => {
                vec![QuadExt::one(), QuadExt::from_integer(-1)]
            }
            other => {
                return Err(StructureError::UnsupportedKind(format!(
                    "{other} has no real exact spectrum on all of R^n"
                )))
            }
        };
        let mut spaces = Vec::new();
        for value in values {
            let shifted = &self.j - &ExactMatrix::scalar(self.dim, &value);
            let basis = shifted.nullspace();
            if !basis.is_empty() {
                spaces.push(Eigenspace { value, basis });
            }
        }
        Ok(spaces)
    }

    /// Serialize to the JSON structure-file form.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&StructureFile::from(self)).expect("serialization is total")
    }

    /// Parse a JSON structure file.
    pub fn from_json_str(text: &str) -> Result<Self, StructureError> {
        let file: StructureFile =
            serde_json::from_str(text).map_err(|e| StructureError::Parse(e.to_string()))?;
        file.into_spec()
    }
}

fn two_blocks(multiplicities: &[usize]) -> Result<(usize, usize), StructureError> {
    match multiplicities {
        [m1, m2] if *m1 > 0 && *m2 > 0 => Ok((*m1, *m2)),
        [_, _] => Err(StructureError::EmptyBlock),
        other => Err(StructureError::InvalidData(format!(
            "this kind takes two block multiplicities, got {}",
            other.len()
        ))),
    }
}

fn one_block(multiplicities: &[usize]) -> Result<usize, StructureError> {
    match multiplicities {
        [n] if *n > 0 => Ok(*n),
        [_] => Err(StructureError::EmptyBlock),
        other => Err(StructureError::InvalidData(format!(
            "this kind takes one block multiplicity, got {}",
            other.len()
        ))),
    }
}

/// The `dim×dim` matrix with `[[0, s·I_n], [I_n, 0]]` in the top-left
/// `2n×2n` corner and zeros elsewhere; `s = −1` rotates, `s = +1` swaps.
fn rotation_block(n: usize, dim: usize, s: i64) -> ExactMatrix {
    let mut m = ExactMatrix::zeros(dim, dim);
    for i in 0..n {
        m.set(i, n + i, QuadExt::from_integer(s));
        m.set(n + i, i, QuadExt::one());
    }
    m
}

/// Standard contact pair: `ξ` the last basis vector, `η` the last dual.
fn reeb_pair(dim: usize) -> (Vec<QuadExt>, Vec<QuadExt>) {
    let mut xi = vec![QuadExt::zero(); dim];
    xi[dim - 1] = QuadExt::one();
    (xi.clone(), xi)
}

/// Wire format of a structure file.
#[derive(Serialize, Deserialize)]
struct StructureFile {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    q: Option<i64>,
    dim: usize,
    #[serde(rename = "J")]
    j: ExactMatrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    g: Option<ExactMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    xi: Option<Vec<QuadExt>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    eta: Option<Vec<QuadExt>>,
}

impl From<&StructureSpec> for StructureFile {
    fn from(spec: &StructureSpec) -> Self {
        let (p, q) = match spec.kind {
            StructureKind::Metallic { p, q } => (Some(p), Some(q)),
            _ => (None, None),
        };
        Self {
            kind: spec.kind.name().to_owned(),
            p,
            q,
            dim: spec.dim,
            j: spec.j.clone(),
            g: spec.g.clone(),
            xi: spec.xi.clone(),
            eta: spec.eta.clone(),
        }
    }
}

impl StructureFile {
    fn into_spec(self) -> Result<StructureSpec, StructureError> {
        let kind = match self.kind.as_str() {
            "metallic" => match (self.p, self.q) {
                (Some(p), Some(q)) => StructureKind::Metallic { p, q },
                _ => {
                    return Err(StructureError::Parse(
                        "metallic structures need both \"p\" and \"q\"".into(),
                    ))
                }
            },
            "golden" => StructureKind::Golden,
            "product" => StructureKind::AlmostProduct,
            "complex" => StructureKind::AlmostComplex,
            "contact" => StructureKind::AlmostContact,
            "para_contact" => StructureKind::AlmostParaContact,
            other => {
                return Err(StructureError::Parse(format!(
                    "unknown kind \"{other}\"; expected one of metallic, golden, product, complex, contact, para_contact"
                )))
            }
        };
        if !matches!(kind, StructureKind::Metallic { .. }) && (self.p.is_some() || self.q.is_some())
        {
            return Err(StructureError::Parse(format!(
                "\"p\"/\"q\" are only meaningful for metallic structures, not {}",
                self.kind
            )));
        }
        StructureSpec::new(kind, self.dim, self.j, self.g, self.xi, self.eta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::golden_ratio;
    use proptest::prelude::*;

    fn canonical(kind: StructureKind, mults: &[usize]) -> StructureSpec {
        StructureSpec::canonical(kind, mults).unwrap()
    }

    #[test]
    fn canonical_metallic_is_the_eigenvalue_diagonal() {
        let s = canonical(StructureKind::Metallic { p: 1, q: 1 }, &[2, 2]);
        let phi = golden_ratio();
        let conj = QuadExt::one() - &phi;
        assert_eq!(
            s.tensor(),
            &ExactMatrix::diagonal(&[phi.clone(), phi, conj.clone(), conj])
        );
        let outcome = s.verify();
        assert!(outcome.ok);
        assert!(outcome.residual.is_zero());
        assert!(s.verify_compatibility().unwrap().ok);
    }

    #[test]
    fn copper_structure_collapses_to_integers() {
        // σ_{1,2} = 2 and p−σ = −1 are rational, so the whole canonical
        // structure lives over Q.
        let s = canonical(StructureKind::Metallic { p: 1, q: 2 }, &[1, 1]);
        assert_eq!(s.tensor(), &ExactMatrix::from_integers(&[&[2, 0], &[0, -1]]).unwrap());
        assert_eq!(s.field_radicand(), Ok(1));
        let spaces = s.eigenstructure().unwrap();
        assert_eq!(spaces.len(), 2);
        assert_eq!(spaces[0].value, QuadExt::from_integer(2));
        assert_eq!(spaces[1].value, QuadExt::from_integer(-1));
        assert_eq!(spaces[0].basis, vec![vec![QuadExt::one(), QuadExt::zero()]]);
    }

    #[test]
    fn identity_tensor_fails_the_metallic_identity() {
        let s = StructureSpec::new(
            StructureKind::Metallic { p: 1, q: 1 },
            2,
            ExactMatrix::identity(2),
            None,
            None,
            None,
        )
        .unwrap();
        let outcome = s.verify();
        assert!(!outcome.ok);
        // I − I − I = −I.
        assert_eq!(outcome.residual, ExactMatrix::identity(2).scale(&QuadExt::from_integer(-1)));
        assert_eq!(outcome.checks[0].residual_norm, QuadExt::one());
    }

    #[test]
    fn golden_equals_metallic_one_one() {
        let golden = canonical(StructureKind::Golden, &[2, 1]);
        let metallic = canonical(StructureKind::Metallic { p: 1, q: 1 }, &[2, 1]);
        assert_eq!(golden.tensor(), metallic.tensor());
        assert!(golden.verify().ok);
    }

    #[test]
    fn contact_canonical_passes_all_chain_checks() {
        // dim 3: φ = [[0,−1,0],[1,0,0],[0,0,0]], φ² = diag(−1,−1,0) which
        // is exactly −I + ξ⊗η.
        let s = canonical(StructureKind::AlmostContact, &[1]);
        assert_eq!(s.dim(), 3);
        let outcome = s.verify();
        assert!(outcome.ok, "checks: {:?}", outcome.checks);
        assert_eq!(outcome.checks.len(), 4);
        let compat = s.verify_compatibility().unwrap();
        assert!(compat.ok, "checks: {:?}", compat.checks);
        // Larger model too.
        assert!(canonical(StructureKind::AlmostContact, &[3]).verify().ok);
    }

    #[test]
    fn para_contact_canonical_passes_with_indefinite_metric() {
        let s = canonical(StructureKind::AlmostParaContact, &[1]);
        assert_eq!(s.metric().unwrap().inertia(), (2, 1, 0));
        assert!(s.verify().ok);
        assert!(s.verify_compatibility().unwrap().ok);
    }

    #[test]
    fn fundamental_two_form_is_skew_with_expected_rank() {
        let s3 = canonical(StructureKind::AlmostParaContact, &[1]);
        let omega3 = s3.fundamental_two_form().unwrap();
        assert!(omega3.is_skew_symmetric());
        assert_eq!(omega3, ExactMatrix::from_integers(&[&[0, 1, 0], &[-1, 0, 0], &[0, 0, 0]]).unwrap());
        let s5 = canonical(StructureKind::AlmostParaContact, &[2]);
        let omega5 = s5.fundamental_two_form().unwrap();
        assert!(omega5.is_skew_symmetric());
        assert_eq!(omega5.rank(), 4);
    }

    #[test]
    fn projectors_split_the_identity() {
        let diag = canonical(StructureKind::AlmostProduct, &[1, 1]);
        let pair = diag.product_projectors().unwrap();
        assert_eq!(pair.q, ExactMatrix::from_integers(&[&[1, 0], &[0, 0]]).unwrap());
        assert_eq!(pair.q_prime, ExactMatrix::from_integers(&[&[0, 0], &[0, 1]]).unwrap());

        // Non-diagonal product structure: the coordinate swap.
        let swap = StructureSpec::new(
            StructureKind::AlmostProduct,
            2,
            ExactMatrix::from_integers(&[&[0, 1], &[1, 0]]).unwrap(),
            None,
            None,
            None,
        )
        .unwrap();
        let pair = swap.product_projectors().unwrap();
        let half = QuadExt::from_fraction(1, 2).unwrap();
        assert_eq!(pair.q, ExactMatrix::from_integers(&[&[1, 1], &[1, 1]]).unwrap().scale(&half));
        assert_projector_identities(&swap, &pair);

        // Degenerate product structure φ = I is accepted.
        let degenerate = StructureSpec::new(
            StructureKind::AlmostProduct,
            2,
            ExactMatrix::identity(2),
            None,
            None,
            None,
        )
        .unwrap();
        let pair = degenerate.product_projectors().unwrap();
        assert_eq!(pair.q, ExactMatrix::identity(2));
        assert!(pair.q_prime.is_zero());
    }

    fn assert_projector_identities(s: &StructureSpec, pair: &ProjectorPair) {
        let identity = ExactMatrix::identity(s.dim());
        assert_eq!(&pair.q + &pair.q_prime, identity);
        assert_eq!(&pair.q * &pair.q, pair.q);
        assert_eq!(&pair.q_prime * &pair.q_prime, pair.q_prime);
        assert!((&pair.q * &pair.q_prime).is_zero());
        assert!((&pair.q_prime * &pair.q).is_zero());
        assert_eq!(&pair.q - &pair.q_prime, *s.tensor());
    }

    #[test]
    fn incompatible_metric_is_reported_not_errored() {
        // diag(σ, p−σ) is not self-adjoint for g = [[1,1],[1,2]]: the
        // off-diagonal entries of Jᵀg and gJ differ.
        let sigma = metallic_mean(2, 1).unwrap();
        let conj = metallic_conjugate(2, 1).unwrap();
        let s = StructureSpec::new(
            StructureKind::Metallic { p: 2, q: 1 },
            2,
            ExactMatrix::diagonal(&[sigma, conj]),
            Some(
                ExactMatrix::from_integers(&[&[1, 1], &[1, 2]]).unwrap(),
            ),
            None,
            None,
        )
        .unwrap();
        assert!(s.verify().ok);
        let compat = s.verify_compatibility().unwrap();
        assert!(!compat.ok);
        assert!(!compat.residual.is_zero());
    }

    #[test]
    fn eigenstructure_reconstructs_the_tensor() {
        let s = canonical(StructureKind::Metallic { p: 2, q: 1 }, &[2, 1]);
        let spaces = s.eigenstructure().unwrap();
        let total: usize = spaces.iter().map(|e| e.basis.len()).sum();
        assert_eq!(total, s.dim());
        // Assemble P = [basis columns], D = diag(eigenvalues), and check
        // P·D·P⁻¹ = J exactly.
        let dim = s.dim();
        let mut columns: Vec<Vec<QuadExt>> = Vec::new();
        let mut eigenvalues = Vec::new();
        for space in &spaces {
            for vector in &space.basis {
                columns.push(vector.clone());
                eigenvalues.push(space.value.clone());
            }
        }
        let p_matrix = ExactMatrix::from_fn(dim, dim, |i, j| columns[j][i].clone());
        let d_matrix = ExactMatrix::diagonal(&eigenvalues);
        let inverse = p_matrix.inverse().unwrap();
        let reconstructed = &(&p_matrix * &d_matrix) * &inverse;
        assert_eq!(&reconstructed, s.tensor());
    }

    #[test]
    fn wrong_kind_and_missing_data_errors() {
        let metallic = canonical(StructureKind::Metallic { p: 1, q: 1 }, &[1, 1]);
        assert!(matches!(
            metallic.product_projectors(),
            Err(StructureError::WrongKind(_))
        ));
        assert!(matches!(
            metallic.fundamental_two_form(),
            Err(StructureError::WrongKind(_))
        ));
        assert!(matches!(
            canonical(StructureKind::AlmostComplex, &[1]).eigenstructure(),
            Err(StructureError::UnsupportedKind(_))
        ));
        let no_metric = StructureSpec::new(
            StructureKind::Golden,
            2,
            canonical(StructureKind::Golden, &[1, 1]).tensor().clone(),
            None,
            None,
            None,
        )
        .unwrap();
        assert!(matches!(
            no_metric.verify_compatibility(),
            Err(StructureError::MissingMetric)
        ));
    }

    #[test]
    fn construction_rejects_invalid_shapes_and_parities() {
        assert!(matches!(
            StructureSpec::new(
                StructureKind::AlmostComplex,
                3,
                ExactMatrix::zeros(3, 3),
                None,
                None,
                None
            ),
            Err(StructureError::DimensionParity(_))
        ));
        assert!(matches!(
            StructureSpec::canonical(StructureKind::Metallic { p: 1, q: 1 }, &[0, 2]),
            Err(StructureError::EmptyBlock)
        ));
        assert!(matches!(
            StructureSpec::canonical(StructureKind::AlmostContact, &[1, 1]),
            Err(StructureError::InvalidData(_))
        ));
        // Indefinite metric for a Riemannian kind.
        assert!(matches!(
            StructureSpec::new(
                StructureKind::AlmostProduct,
                2,
                ExactMatrix::identity(2),
                Some(ExactMatrix::from_integers(&[&[1, 2], &[2, 1]]).unwrap()),
                None,
                None
            ),
            Err(StructureError::InvalidData(_))
        ));
        // Euclidean metric has the wrong signature for para-contact.
        assert!(matches!(
            StructureSpec::new(
                StructureKind::AlmostParaContact,
                3,
                ExactMatrix::zeros(3, 3),
                Some(ExactMatrix::identity(3)),
                Some(vec![QuadExt::zero(), QuadExt::zero(), QuadExt::one()]),
                Some(vec![QuadExt::zero(), QuadExt::zero(), QuadExt::one()]),
            ),
            Err(StructureError::InvalidData(_))
        ));
        // Metallic parameters must be positive.
        assert!(matches!(
            StructureSpec::new(
                StructureKind::Metallic { p: 0, q: 1 },
                1,
                ExactMatrix::identity(1),
                None,
                None,
                None
            ),
            Err(StructureError::InvalidData(_))
        ));
    }

    #[test]
    fn json_round_trip_and_liberal_parsing() {
        let original = canonical(StructureKind::Metallic { p: 3, q: 1 }, &[1, 2]);
        let text = original.to_json();
        let parsed = StructureSpec::from_json_str(&text).unwrap();
        assert_eq!(parsed, original);

        let product = StructureSpec::from_json_str(
            r#"{"kind": "product", "dim": 2, "J": [[1, 0], [0, -1]]}"#,
        )
        .unwrap();
        assert!(product.verify().ok);
        assert!(product.metric().is_none());

        assert!(matches!(
            StructureSpec::from_json_str(r#"{"kind": "spiral", "dim": 1, "J": [[0]]}"#),
            Err(StructureError::Parse(_))
        ));
        assert!(matches!(
            StructureSpec::from_json_str(r#"{"kind": "metallic", "dim": 1, "J": [[0]]}"#),
            Err(StructureError::Parse(_))
        ));
        assert!(matches!(
            StructureSpec::from_json_str(r#"{"kind": "golden", "p": 2, "dim": 1, "J": [[0]]}"#),
            Err(StructureError::Parse(_))
        ));
        assert!(matches!(
            StructureSpec::from_json_str("not json"),
            Err(StructureError::Parse(_))
        ));
    }

    fn any_kind_and_mults() -> impl Strategy<Value = (StructureKind, Vec<usize>)> {
        let two = || (1usize..=4, 1usize..=4);
        prop_oneof![
            ((1i64..=6, 1i64..=6), two())
                .prop_map(|((p, q), (a, b))| (StructureKind::Metallic { p, q }, vec![a, b])),
            two().prop_map(|(a, b)| (StructureKind::Golden, vec![a, b])),
            two().prop_map(|(a, b)| (StructureKind::AlmostProduct, vec![a, b])),
            (1usize..=4).prop_map(|n| (StructureKind::AlmostComplex, vec![n])),
            (1usize..=4).prop_map(|n| (StructureKind::AlmostContact, vec![n])),
            (1usize..=4).prop_map(|n| (StructureKind::AlmostParaContact, vec![n])),
        ]
    }

    proptest! {
        #[test]
        fn every_canonical_structure_verifies_exactly((kind, mults) in any_kind_and_mults()) {
            let s = StructureSpec::canonical(kind, &mults).unwrap();
            prop_assert!(s.verify().ok);
            prop_assert!(s.verify_compatibility().unwrap().ok);
        }

        #[test]
        fn projector_identities_hold_for_conjugated_product_structures(
            (a, b) in (1usize..=2, 1usize..=2),
            seed in proptest::collection::vec(-3i64..=3, 16),
        ) {
            let dim = a + b;
            // Conjugate the canonical diag(±1) block by a random
            // invertible integer matrix to get a non-diagonal product
            // structure; skip singular draws.
            let t = ExactMatrix::from_fn(dim, dim, |i, j| {
                QuadExt::from_integer(seed[i * 4 + j])
            });
            prop_assume!(!t.determinant().is_zero());
            let canonical_j = StructureSpec::canonical(StructureKind::AlmostProduct, &[a, b])
                .unwrap()
                .tensor()
                .clone();
            let conjugated = &(&t * &canonical_j) * &t.inverse().unwrap();
            let s = StructureSpec::new(StructureKind::AlmostProduct, dim, conjugated, None, None, None)
                .unwrap();
            prop_assert!(s.verify().ok);
            let pair = s.product_projectors().unwrap();
            assert_projector_identities(&s, &pair);
        }

        #[test]
        fn json_round_trip_is_lossless((kind, mults) in any_kind_and_mults()) {
            let s = StructureSpec::canonical(kind, &mults).unwrap();
            let back = StructureSpec::from_json_str(&s.to_json()).unwrap();
            prop_assert_eq!(back, s);
        }
    }
}
