//! Exact constancy classification for structure-intertwining maps
//! between a metallic family and the five companion structure families,
//! cross-checked by a brute-force intertwiner-nullspace oracle.
//!
//! For each pairing the classifier evaluates an exact obstruction
//! scalar: when it is non-zero, every intertwining map between the
//! families is forced to be constant; when it vanishes, a witness
//! search constructs an explicit non-zero linear intertwiner between
//! the canonical minimal models by exact eigenvalue alignment. An
//! independent floating-point oracle solves the same intertwining
//! equations as a Sylvester-type linear system — joined, for the
//! contact-type families, with the derived Reeb-chain constraint — so
//! the two routes can be compared on every grid cell.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::exact::{metallic_conjugate, metallic_mean, ExactError, QuadExt, Rational};
use crate::matrix::ExactMatrix;
use crate::numeric::svd_nullspace;
use crate::structures::{StructureError, StructureKind, StructureSpec};

/// Largest per-side dimension the float oracle accepts.
pub const ORACLE_DIM_CAP: usize = 12;

/// Largest grid bound accepted by [`enumerate_grid`].
pub const GRID_CAP: i64 = 1000;

/// Relative singular-value cutoff for the oracle's rank decisions.
const ORACLE_CUTOFF: f64 = 1e-9;

/// Errors from classification and oracle runs.
#[derive(Debug, Error)]
pub enum ConstancyError {
    /// A parameter violated a documented precondition.
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    /// Incompatible matrix shapes.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    /// A singular value sits too close to the rank cutoff to trust.
    #[error("rank decision ambiguous: singular value {value:.3e} near cutoff {cutoff:.3e}")]
    RankAmbiguous { value: f64, cutoff: f64 },
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

/// The five structure families a metallic space is paired against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TargetFamily {
    Golden,
    AlmostProduct,
    AlmostComplex,
    AlmostContact,
    AlmostParaContact,
}

impl TargetFamily {
    /// All families in their fixed report order.
    pub const ALL: [TargetFamily; 5] = [
        TargetFamily::Golden,
        TargetFamily::AlmostProduct,
        TargetFamily::AlmostComplex,
        TargetFamily::AlmostContact,
        TargetFamily::AlmostParaContact,
    ];

    /// Stable wire token for files and reports.
    pub fn name(self) -> &'static str {
        match self {
            Self::Golden => "golden",
            Self::AlmostProduct => "product",
            Self::AlmostComplex => "complex",
            Self::AlmostContact => "contact",
            Self::AlmostParaContact => "para_contact",
        }
    }

    fn is_contact_type(self) -> bool {
        matches!(self, Self::AlmostContact | Self::AlmostParaContact)
    }

    /// The smallest canonical model of the family: two-dimensional for
    /// the eigen-split families, three-dimensional for the contact
    /// kinds.
    pub fn canonical_minimal(self) -> Result<StructureSpec, ConstancyError> {
        let spec = match self {
            Self::Golden => StructureSpec::canonical(StructureKind::Golden, &[1, 1])?,
            Self::AlmostProduct => {
                StructureSpec::canonical(StructureKind::AlmostProduct, &[1, 1])?
            }
            Self::AlmostComplex => StructureSpec::canonical(StructureKind::AlmostComplex, &[1])?,
            Self::AlmostContact => StructureSpec::canonical(StructureKind::AlmostContact, &[1])?,
            Self::AlmostParaContact => {
                StructureSpec::canonical(StructureKind::AlmostParaContact, &[1])?
            }
        };
        Ok(spec)
    }
}

impl std::fmt::Display for TargetFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.name())
    }
}

impl std::str::FromStr for TargetFamily {
    type Err = ConstancyError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        match text {
            "golden" => Ok(Self::Golden),
            "product" => Ok(Self::AlmostProduct),
            "complex" => Ok(Self::AlmostComplex),
            "contact" => Ok(Self::AlmostContact),
            "para_contact" => Ok(Self::AlmostParaContact),
            other => Err(ConstancyError::InvalidParameters(format!(
                "unknown family '{other}' (expected golden, product, complex, contact, \
                 or para_contact)"
            ))),
        }
    }
}

impl Serialize for TargetFamily {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

/// Which side of the map carries the metallic structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// The metallic space is the source: the differential `A`
    /// satisfies `A·J₁ = S·A`.
    MetallicSource,
    /// The metallic space is the target: the differential `A`
    /// satisfies `A·S = J₁·A`.
    MetallicTarget,
}

impl Direction {
    /// Both directions in their fixed report order.
    pub const ALL: [Direction; 2] = [Direction::MetallicSource, Direction::MetallicTarget];

    /// Stable wire token for arguments and reports.
    pub fn name(self) -> &'static str {
        match self {
            Self::MetallicSource => "source",
            Self::MetallicTarget => "target",
        }
    }
}

impl std::fmt::Display for Direction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.name())
    }
}

impl std::str::FromStr for Direction {
    type Err = ConstancyError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        match text {
            "source" => Ok(Self::MetallicSource),
            "target" => Ok(Self::MetallicTarget),
            other => Err(ConstancyError::InvalidParameters(format!(
                "unknown direction '{other}' (expected source or target)"
            ))),
        }
    }
}

impl Serialize for Direction {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

/// An exact obstruction scalar, kept as the fraction in which it
/// arises rather than pre-divided, so reports show the underived form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Obstruction {
    numerator: QuadExt,
    denominator: QuadExt,
}

impl Obstruction {
    fn integral(value: QuadExt) -> Self {
        Self { numerator: value, denominator: QuadExt::one() }
    }

    fn fraction(numerator: QuadExt, denominator: QuadExt) -> Self {
        Self { numerator, denominator }
    }

    pub fn numerator(&self) -> &QuadExt {
        &self.numerator
    }

    pub fn denominator(&self) -> &QuadExt {
        &self.denominator
    }

    /// True when the obstruction vanishes (zero numerator).
    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    /// The divided-out value.
    pub fn value(&self) -> QuadExt {
        self.numerator.checked_div(&self.denominator).expect("denominators are non-zero")
    }
}

impl std::fmt::Display for Obstruction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.denominator.is_one() {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "{}/{}", self.numerator, self.denominator)
        }
    }
}

impl Serialize for Obstruction {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if self.denominator.is_one() {
            self.numerator.serialize(serializer)
        } else {
            let mut map = serializer.serialize_map(Some(2))?;
            map.serialize_entry("numerator", &self.numerator)?;
            map.serialize_entry("denominator", &self.denominator)?;
            map.end()
        }
    }
}

/// Verdict of a constancy classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstancyVerdict {
    /// The obstruction is non-zero: every intertwining map is constant.
    ForcedConstant,
    /// The obstruction vanishes: constancy is not forced, and a
    /// non-constant witness may exist.
    ObstructionVanishes,
}

impl std::fmt::Display for ConstancyVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::ForcedConstant => write!(f, "forced_constant"),
            Self::ObstructionVanishes => write!(f, "obstruction_vanishes"),
        }
    }
}

/// Full classification of one `(p, q, family, direction)` cell.
#[derive(Debug, Clone, Serialize)]
pub struct ClassificationResult {
    pub p: i64,
    pub q: i64,
    pub family: TargetFamily,
    pub direction: Direction,
    pub obstruction: Obstruction,
    pub verdict: ConstancyVerdict,
    /// Exact non-zero intertwiner between the canonical minimal models,
    /// present only when the obstruction vanishes and the eigen-aligned
    /// search finds one.
    pub witness: Option<ExactMatrix>,
}

/// Nullspace of an intertwining system found by the float oracle.
#[derive(Debug, Clone)]
pub struct IntertwinerNullspace {
    /// Dimension of the solution space.
    pub dimension: usize,
    /// Basis matrices (rows), one per nullspace dimension.
    pub basis: Vec<Vec<Vec<f64>>>,
    /// Largest residual of the defining equations over the basis.
    pub max_residual: f64,
}

/// The exact obstruction scalar for maps between a metallic `(p, q)`
/// family and the given target family; direction-independent.
pub fn obstruction(p: i64, q: i64, family: TargetFamily) -> Result<Obstruction, ConstancyError> {
    check_parameters(p, q)?;
    let (p, q) = (p as i128, q as i128);
    let value = match family {
        TargetFamily::Golden => Obstruction::integral(integer_quad(
            p * p - p * q - p - q * q + 3 * q - 1,
        )),
        TargetFamily::AlmostProduct => {
            Obstruction::integral(integer_quad(p * p - (q - 1) * (q - 1)))
        }
        TargetFamily::AlmostComplex => {
            Obstruction::integral(integer_quad(p * p + (q + 1) * (q + 1)))
        }
        TargetFamily::AlmostContact => Obstruction::fraction(
            integer_quad(p * p + (q + 1) * (q + 1)),
            integer_quad(p * p + q + 1),
        ),
        TargetFamily::AlmostParaContact => Obstruction::fraction(
            integer_quad((q - 1) * (q - 1) - p * p),
            integer_quad(p * p + q - 1),
        ),
    };
    Ok(value)
}

/// Classify one parameter cell: verdict from the exact obstruction,
/// with a witness search on the canonical minimal models whenever the
/// obstruction vanishes.
pub fn classify(
    p: i64,
    q: i64,
    family: TargetFamily,
    direction: Direction,
) -> Result<ClassificationResult, ConstancyError> {
    let obstruction = obstruction(p, q, family)?;
    let (verdict, witness) = if obstruction.is_zero() {
        (ConstancyVerdict::ObstructionVanishes, witness(p, q, family, direction)?)
    } else {
        (ConstancyVerdict::ForcedConstant, None)
    };
    Ok(ClassificationResult { p, q, family, direction, obstruction, verdict, witness })
}

/// Exact non-zero intertwiner between the canonical minimal `(p, q)`
/// metallic model and the family's canonical minimal model, built by
/// aligning a metallic eigenvalue (σ or p−σ) with a real eigenvalue of
/// the family structure. Every returned matrix is verified exactly —
/// the intertwining relation, and for contact kinds the Reeb chain —
/// before it is handed out.
pub fn witness(
    p: i64,
    q: i64,
    family: TargetFamily,
    direction: Direction,
) -> Result<Option<ExactMatrix>, ConstancyError> {
    check_parameters(p, q)?;
    let sigma = metallic_mean(p, q)?;
    let conjugate = metallic_conjugate(p, q)?;
    let metallic = StructureSpec::canonical(StructureKind::Metallic { p, q }, &[1, 1])?;
    let target = family.canonical_minimal()?;
    let candidates = family_eigenpairs(family)?;
    for (mu, w_index) in [(sigma, 0usize), (conjugate, 1usize)] {
        for (value, v) in &candidates {
            if *value != mu {
                continue;
            }
            let mut w = vec![QuadExt::zero(); metallic.dim()];
            w[w_index] = QuadExt::one();
            let a = match direction {
                Direction::MetallicSource => ExactMatrix::outer(v, &w),
                Direction::MetallicTarget => ExactMatrix::outer(&w, v),
            };
            if witness_is_valid(&a, &metallic, &target, p, q, direction) {
                return Ok(Some(a));
            }
        }
    }
    Ok(None)
}

/// Real eigenpairs of the family's canonical minimal structure tensor
/// (value, eigenvector) — also eigenpairs of its transpose, which the
/// reverse direction relies on.
fn family_eigenpairs(
    family: TargetFamily,
) -> Result<Vec<(QuadExt, Vec<QuadExt>)>, ConstancyError> {
    let one = QuadExt::one;
    let zero = QuadExt::zero;
    let minus_one = || QuadExt::from_integer(-1);
    let pairs = match family {
        TargetFamily::Golden => {
            let phi = metallic_mean(1, 1)?;
            let phi_bar = metallic_conjugate(1, 1)?;
            vec![
                (phi, vec![one(), zero()]),
                (phi_bar, vec![zero(), one()]),
            ]
        }
        TargetFamily::AlmostProduct => vec![
            (one(), vec![one(), zero()]),
            (minus_one(), vec![zero(), one()]),
        ],
        TargetFamily::AlmostComplex => vec![],
        TargetFamily::AlmostContact => {
            vec![(zero(), vec![zero(), zero(), one()])]
        }
        TargetFamily::AlmostParaContact => vec![
            (one(), vec![one(), one(), zero()]),
            (minus_one(), vec![one(), minus_one(), zero()]),
            (zero(), vec![zero(), zero(), one()]),
        ],
    };
    Ok(pairs)
}

/// Exact validity gate for a witness candidate: non-zero, intertwining
/// relation, and — for contact kinds — the chain constraint obtained
/// by applying the relation twice through the structure identity.
fn witness_is_valid(
    a: &ExactMatrix,
    metallic: &StructureSpec,
    target: &StructureSpec,
    p: i64,
    q: i64,
    direction: Direction,
) -> bool {
    if a.is_zero() {
        return false;
    }
    let j1 = metallic.tensor();
    let s = target.tensor();
    let relation = match direction {
        Direction::MetallicSource => &(a * j1) - &(s * a),
        Direction::MetallicTarget => &(a * s) - &(j1 * a),
    };
    if !relation.is_zero() {
        return false;
    }
    if !target.kind().is_contact_type() {
        return true;
    }
    let xi = target.xi().expect("contact structures carry xi");
    let eta = target.eta().expect("contact structures carry eta");
    let xi_eta = ExactMatrix::outer(xi, eta);
    let (offset, sign) = match target.kind() {
        StructureKind::AlmostContact => (q + 1, -1i64),
        StructureKind::AlmostParaContact => (q - 1, 1),
        _ => unreachable!("contact type"),
    };
    let p_factor = QuadExt::from_integer(p);
    let offset_factor = QuadExt::from_integer(offset);
    let sign_factor = QuadExt::from_integer(sign);
    let chain = match direction {
        // p·A·J₁ + offset·A + sign·ξηᵀ·A = 0
        Direction::MetallicSource => &(&(a * j1).scale(&p_factor) + &a.scale(&offset_factor))
            + &(&xi_eta * a).scale(&sign_factor),
        // p·A·S + offset·A + sign·(Aξ)ηᵀ = 0
        Direction::MetallicTarget => &(&(a * s).scale(&p_factor) + &a.scale(&offset_factor))
            + &(a * &xi_eta).scale(&sign_factor),
    };
    chain.is_zero()
}

/// Nullspace of the bare intertwining system between two arbitrary
/// square float matrices: solutions `A` of `A·J₁ = S·A`
/// (`MetallicSource`, `A` sized `dim(S)×dim(J₁)`) or `A·S = J₁·A`
/// (`MetallicTarget`, `A` sized `dim(J₁)×dim(S)`), via a
/// rank-revealing decomposition of the Sylvester-type coefficient
/// matrix.
pub fn intertwiner_nullspace(
    j1: &[Vec<f64>],
    s: &[Vec<f64>],
    direction: Direction,
) -> Result<IntertwinerNullspace, ConstancyError> {
    let j1 = float_square(j1, "J1")?;
    let s = float_square(s, "S")?;
    let system = sylvester_system(&j1, &s, direction);
    solve_system(&system, &j1, &s, direction, None)
}

/// Oracle verdict for one parameter cell on the canonical minimal
/// models, in floating point: the intertwining system joined, for the
/// contact-type families, with the Reeb-chain constraint rows.
pub fn canonical_oracle(
    p: i64,
    q: i64,
    family: TargetFamily,
    direction: Direction,
) -> Result<IntertwinerNullspace, ConstancyError> {
    check_parameters(p, q)?;
    let metallic = StructureSpec::canonical(StructureKind::Metallic { p, q }, &[1, 1])?;
    let target = family.canonical_minimal()?;
    let j1 = metallic.tensor().to_dmatrix();
    let s = target.tensor().to_dmatrix();
    let sylvester = sylvester_system(&j1, &s, direction);
    if !family.is_contact_type() {
        return solve_system(&sylvester, &j1, &s, direction, None);
    }
    let xi: Vec<f64> = target.xi().expect("contact xi").iter().map(QuadExt::to_f64).collect();
    let eta: Vec<f64> = target.eta().expect("contact eta").iter().map(QuadExt::to_f64).collect();
    let dim2 = s.nrows();
    let xi_eta = DMatrix::from_fn(dim2, dim2, |i, j| xi[i] * eta[j]);
    let offset = match family {
        TargetFamily::AlmostContact => (q + 1) as f64,
        _ => (q - 1) as f64,
    };
    let sign = match family {
        TargetFamily::AlmostContact => -1.0,
        _ => 1.0,
    };
    let unknowns = sylvester.ncols();
    let scaled_identity = DMatrix::<f64>::identity(unknowns, unknowns) * offset;
    let chain = match direction {
        // vec(p·A·J₁ + offset·A + sign·ξηᵀ·A)
        Direction::MetallicSource => {
            let d1 = j1.nrows();
            p as f64 * j1.transpose().kronecker(&DMatrix::identity(dim2, dim2))
                + scaled_identity
                + sign * DMatrix::<f64>::identity(d1, d1).kronecker(&xi_eta)
        }
        // vec(p·A·S + offset·A + sign·A·ξηᵀ)
        Direction::MetallicTarget => {
            let d1 = j1.nrows();
            p as f64 * s.transpose().kronecker(&DMatrix::identity(d1, d1))
                + scaled_identity
                + sign * xi_eta.transpose().kronecker(&DMatrix::identity(d1, d1))
        }
    };
    let mut joint = DMatrix::zeros(sylvester.nrows() + chain.nrows(), unknowns);
    joint.view_mut((0, 0), (sylvester.nrows(), unknowns)).copy_from(&sylvester);
    joint.view_mut((sylvester.nrows(), 0), (chain.nrows(), unknowns)).copy_from(&chain);
    solve_system(&joint, &j1, &s, direction, Some(&chain))
}

/// The full classification table over a parameter grid:
/// `(p, q, family, direction)` in deterministic order — `p` outermost,
/// then `q`, then the family report order, then direction.
pub fn enumerate_grid(
    p_max: i64,
    q_max: i64,
) -> Result<Vec<ClassificationResult>, ConstancyError> {
    for (name, bound) in [("p_max", p_max), ("q_max", q_max)] {
        if !(1..=GRID_CAP).contains(&bound) {
            return Err(ConstancyError::InvalidParameters(format!(
                "{name} must lie in 1..={GRID_CAP}, got {bound}"
            )));
        }
    }
    let mut rows =
        Vec::with_capacity((p_max as usize) * (q_max as usize) * TargetFamily::ALL.len() * 2);
    for p in 1..=p_max {
        for q in 1..=q_max {
            for family in TargetFamily::ALL {
                for direction in Direction::ALL {
                    rows.push(classify(p, q, family, direction)?);
                }
            }
        }
    }
    Ok(rows)
}

fn check_parameters(p: i64, q: i64) -> Result<(), ConstancyError> {
    if p < 1 || q < 1 {
        return Err(ConstancyError::InvalidParameters(format!(
            "family parameters must be positive integers, got ({p}, {q})"
        )));
    }
    Ok(())
}

fn integer_quad(value: i128) -> QuadExt {
    QuadExt::from_rational(Rational::from(BigInt::from(value)))
}

/// Column-major coefficient matrix of the intertwining system.
fn sylvester_system(
    j1: &DMatrix<f64>,
    s: &DMatrix<f64>,
    direction: Direction,
) -> DMatrix<f64> {
    let d1 = j1.nrows();
    let d2 = s.nrows();
    match direction {
        // vec(A·J₁ − S·A) = (J₁ᵀ ⊗ I − I ⊗ S)·vec(A), A is d2×d1.
        Direction::MetallicSource => {
            j1.transpose().kronecker(&DMatrix::identity(d2, d2))
                - DMatrix::<f64>::identity(d1, d1).kronecker(s)
        }
        // vec(A·S − J₁·A) = (Sᵀ ⊗ I − I ⊗ J₁)·vec(A), A is d1×d2.
        Direction::MetallicTarget => {
            s.transpose().kronecker(&DMatrix::identity(d1, d1))
                - DMatrix::<f64>::identity(d2, d2).kronecker(j1)
        }
    }
}

fn solve_system(
    system: &DMatrix<f64>,
    j1: &DMatrix<f64>,
    s: &DMatrix<f64>,
    direction: Direction,
    chain: Option<&DMatrix<f64>>,
) -> Result<IntertwinerNullspace, ConstancyError> {
    let kernel = svd_nullspace(system, ORACLE_CUTOFF)
        .map_err(|a| ConstancyError::RankAmbiguous { value: a.value, cutoff: a.cutoff })?;
    let (a_rows, a_cols) = matrix_shape(j1, s, direction);
    let mut basis = Vec::with_capacity(kernel.basis.len());
    let mut max_residual = 0.0f64;
    for vector in &kernel.basis {
        let a = unvec(vector.as_slice(), a_rows, a_cols);
        max_residual = max_residual.max(relation_residual(&a, j1, s, direction));
        if let Some(chain) = chain {
            max_residual = max_residual.max((chain * vector).amax());
        }
        basis.push(dmatrix_rows(&a));
    }
    Ok(IntertwinerNullspace { dimension: basis.len(), basis, max_residual })
}

fn matrix_shape(
    j1: &DMatrix<f64>,
    s: &DMatrix<f64>,
    direction: Direction,
) -> (usize, usize) {
    match direction {
        Direction::MetallicSource => (s.nrows(), j1.nrows()),
        Direction::MetallicTarget => (j1.nrows(), s.nrows()),
    }
}

fn relation_residual(
    a: &DMatrix<f64>,
    j1: &DMatrix<f64>,
    s: &DMatrix<f64>,
    direction: Direction,
) -> f64 {
    let difference = match direction {
        Direction::MetallicSource => a * j1 - s * a,
        Direction::MetallicTarget => a * s - j1 * a,
    };
    difference.amax()
}

/// Reassemble a column-major vectorization into a matrix.
fn unvec(data: &[f64], rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |i, j| data[j * rows + i])
}

fn dmatrix_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()
}

fn float_square(rows: &[Vec<f64>], label: &str) -> Result<DMatrix<f64>, ConstancyError> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|row| row.len() != n) {
        return Err(ConstancyError::DimensionMismatch(format!(
            "{label} must be a non-empty square matrix"
        )));
    }
    if n > ORACLE_DIM_CAP {
        return Err(ConstancyError::InvalidParameters(format!(
            "{label} has dimension {n}, above the oracle cap {ORACLE_DIM_CAP}"
        )));
    }
    if rows.iter().flatten().any(|value| !value.is_finite()) {
        return Err(ConstancyError::InvalidParameters(format!(
            "{label} contains non-finite entries"
        )));
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}
