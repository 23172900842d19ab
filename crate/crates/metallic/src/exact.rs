//! Exact arithmetic in real quadratic fields `Q(√d)`.
//!
//! A [`QuadExt`] is a number `a + b√d` with rational `a`, `b` and a
//! square-free integer radicand `d`. Values are kept in a canonical
//! normal form — square factors are extracted from the radicand, perfect
//! squares collapse to rationals, and a vanishing radical coefficient
//! forces `d = 1` — so structural equality coincides with equality of
//! real numbers and the type can derive `Eq` and `Hash`.
//!
//! The metallic means `σ_{p,q} = (p + √(p² + 4q)) / 2` (golden, silver,
//! bronze, copper, …) live here, together with their defining-polynomial
//! residual and the conjugate root `p − σ_{p,q}`. Each mean generates the
//! field in which all spectral data of the corresponding structure tensor
//! can be represented exactly.
//!
//! Arithmetic between members of *different* quadratic fields is refused:
//! the checked entry points return [`ExactError::MixedRadicands`] and the
//! operator impls panic, since a mixed operand inside library code is a
//! programming error, not a data error. Rationals (`d = 1`) embed into
//! every field and combine freely with everything.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Arbitrary-precision rational number, the coefficient type of [`QuadExt`].
pub type Rational = BigRational;

/// Largest accepted radicand. Square-free reduction is guaranteed exact
/// below this bound (trial division up to 2¹⁶ plus a perfect-square check
/// covers every factorization pattern of a 32-bit integer), and every
/// metallic discriminant `p² + 4q` for supported parameters stays inside.
pub const RADICAND_CAP: u64 = 1 << 32;

/// Largest supported metallic parameter: keeps `p² + 4q` within
/// [`RADICAND_CAP`].
pub const PARAMETER_CAP: i64 = 65_535;

/// Errors from exact-arithmetic operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    /// Two operands live in genuinely different quadratic fields.
    #[error("cannot combine elements of Q(\u{221a}{left}) and Q(\u{221a}{right})")]
    MixedRadicands { left: u64, right: u64 },
    /// Division by an exact zero.
    #[error("division by zero")]
    DivisionByZero,
    /// Radicand outside the range for which square-free reduction is exact.
    #[error("radicand {0} exceeds the supported bound 2^32")]
    RadicandTooLarge(u64),
    /// A parameter violated a documented precondition.
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    /// A rational literal could not be parsed as `num` or `num/den`.
    #[error("malformed rational literal `{0}`")]
    MalformedRational(String),
}

/// Parse a rational from `"num"` or `"num/den"` (optionally signed).
pub fn parse_rational(text: &str) -> Result<Rational, ExactError> {
    let bad = || ExactError::MalformedRational(text.to_owned());
    let trimmed = text.trim();
    let (num_text, den_text) = match trimmed.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (trimmed, "1"),
    };
    let numer = BigInt::from_str(num_text).map_err(|_| bad())?;
    let denom = BigInt::from_str(den_text).map_err(|_| bad())?;
    if denom.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(numer, denom))
}

/// Format a rational as `"num"` or `"num/den"` in lowest terms.
pub fn format_rational(value: &Rational) -> String {
    value.to_string()
}

/// Integer square root: the largest `s` with `s² ≤ n`.
fn isqrt(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut s = (n as f64).sqrt() as u64;
    // Float rounding can land one off in either direction; settle exactly.
    while s.checked_mul(s).map_or(true, |sq| sq > n) {
        s -= 1;
    }
    while (s + 1).checked_mul(s + 1).map_or(false, |sq| sq <= n) {
        s += 1;
    }
    s
}

/// Split `n = outside² · inside` with `inside` square-free.
///
/// Trial division runs up to 2¹⁶; any remaining square factor of a value
/// below [`RADICAND_CAP`] must then be the remainder itself, which the
/// final perfect-square check catches.
fn square_free_split(n: u64) -> (u64, u64) {
    debug_assert!(n >= 1 && n <= RADICAND_CAP);
    let mut inside = n;
    let mut outside = 1u64;
    let mut f = 2u64;
    while f <= 1 << 16 && f * f <= inside {
        while inside % (f * f) == 0 {
            inside /= f * f;
            outside *= f;
        }
        f += 1;
    }
    let s = isqrt(inside);
    if s * s == inside {
        outside *= s;
        inside = 1;
    }
    (outside, inside)
}

/// An element `a + b√d` of the real quadratic field `Q(√d)`.
///
/// Invariants (enforced by every constructor):
/// * `d` is square-free and `1 ≤ d ≤ 2³²`;
/// * `b = 0` implies `d = 1`, so rationals have a unique representation.
///
/// Under these invariants structural equality is numeric equality, which
/// is why `Eq` and `Hash` are derived rather than hand-written.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadExt {
    a: Rational,
    b: Rational,
    d: u64,
}

impl QuadExt {
    /// Build `a + b√d`, normalising the radicand.
    ///
    /// `d = 0` is accepted and collapses to the rational `a` (since
    /// `√0 = 0`); radicands above [`RADICAND_CAP`] are refused.
    pub fn new(a: Rational, b: Rational, d: u64) -> Result<Self, ExactError> {
        if d > RADICAND_CAP {
            return Err(ExactError::RadicandTooLarge(d));
        }
        if d == 0 || b.is_zero() {
            return Ok(Self { a, b: Rational::zero(), d: 1 });
        }
        let (outside, inside) = square_free_split(d);
        let b = b * Rational::from(BigInt::from(outside));
        if inside == 1 {
            Ok(Self { a: a + b, b: Rational::zero(), d: 1 })
        } else {
            Ok(Self { a, b, d: inside })
        }
    }

    /// The rational `r`, i.e. `r + 0·√1`.
    pub fn from_rational(value: Rational) -> Self {
        Self { a: value, b: Rational::zero(), d: 1 }
    }

    /// The integer `n` as an exact value.
    pub fn from_integer(value: i64) -> Self {
        Self::from_rational(Rational::from(BigInt::from(value)))
    }

    /// The fraction `num/den` as an exact value. `den` must be nonzero.
    pub fn from_fraction(num: i64, den: i64) -> Result<Self, ExactError> {
        if den == 0 {
            return Err(ExactError::DivisionByZero);
        }
        Ok(Self::from_rational(Rational::new(BigInt::from(num), BigInt::from(den))))
    }

    /// `√d` in normal form: `√12` becomes `2√3`, `√49` becomes `7`.
    pub fn sqrt(d: u64) -> Result<Self, ExactError> {
        Self::new(Rational::zero(), Rational::one(), d)
    }

    /// Exact zero.
    pub fn zero() -> Self {
        Self::from_integer(0)
    }

    /// Exact one.
    pub fn one() -> Self {
        Self::from_integer(1)
    }

    /// Rational part `a`.
    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    /// Radical coefficient `b`.
    pub fn radical_part(&self) -> &Rational {
        &self.b
    }

    /// The square-free radicand `d` (1 for rationals).
    pub fn radicand(&self) -> u64 {
        self.d
    }

    /// True when the value lies in `Q`, i.e. the radical coefficient is zero.
    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// True for the exact zero.
    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// True for the exact one.
    pub fn is_one(&self) -> bool {
        self.b.is_zero() && self.a.is_one()
    }

    /// Common radicand for a pair of operands, treating rationals as
    /// members of every field.
    fn unify(&self, other: &Self) -> Result<u64, ExactError> {
        match (self.d, other.d) {
            (d, e) if d == e => Ok(d),
            (1, e) => Ok(e),
            (d, 1) => Ok(d),
            (d, e) => Err(ExactError::MixedRadicands { left: d, right: e }),
        }
    }

    /// Exact sum, refusing mixed radicands.
    pub fn checked_add(&self, other: &Self) -> Result<Self, ExactError> {
        let d = self.unify(other)?;
        Ok(Self::reduced(&self.a + &other.a, &self.b + &other.b, d))
    }

    /// Exact difference, refusing mixed radicands.
    pub fn checked_sub(&self, other: &Self) -> Result<Self, ExactError> {
        let d = self.unify(other)?;
        Ok(Self::reduced(&self.a - &other.a, &self.b - &other.b, d))
    }

    /// Exact product, refusing mixed radicands.
    pub fn checked_mul(&self, other: &Self) -> Result<Self, ExactError> {
        let d = self.unify(other)?;
        let rad = Rational::from(BigInt::from(d));
        let a = &self.a * &other.a + &self.b * &other.b * rad;
        let b = &self.a * &other.b + &self.b * &other.a;
        Ok(Self::reduced(a, b, d))
    }

    /// Exact quotient, refusing mixed radicands and zero divisors.
    pub fn checked_div(&self, other: &Self) -> Result<Self, ExactError> {
        let inv = other.checked_inverse()?;
        self.checked_mul(&inv)
    }

    /// Exact multiplicative inverse via the conjugate:
    /// `1/(a + b√d) = (a − b√d)/(a² − b²d)`.
    pub fn checked_inverse(&self) -> Result<Self, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        let norm = self.norm();
        // The field norm of a nonzero element is nonzero: a² = b²d with
        // b ≠ 0 would make √d rational, impossible for square-free d > 1.
        debug_assert!(!norm.is_zero());
        Ok(Self::reduced(&self.a / &norm, -(&self.b) / &norm, self.d))
    }

    /// Galois conjugate `a − b√d`.
    pub fn conjugate(&self) -> Self {
        Self { a: self.a.clone(), b: -(&self.b), d: self.d }
    }

    /// Field norm `a² − b²d ∈ Q` (the product with the conjugate).
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * Rational::from(BigInt::from(self.d))
    }

    /// Field trace `2a ∈ Q` (the sum with the conjugate).
    pub fn trace(&self) -> Rational {
        &self.a + &self.a
    }

    /// `self²`, always defined (same field).
    pub fn square(&self) -> Self {
        self.checked_mul(self).expect("squaring stays inside the field")
    }

    /// Exact sign of the real number: −1, 0, or +1.
    ///
    /// When `a` and `b` disagree in sign the comparison `a² vs b²d`
    /// settles it: normal form rules out `a² = b²d` for nonzero parts.
    pub fn sign(&self) -> i8 {
        let sa = rational_sign(&self.a);
        let sb = rational_sign(&self.b);
        match (sa, sb) {
            (0, 0) => 0,
            (s, 0) | (0, s) => s,
            (s, t) if s == t => s,
            (s, t) => {
                let a2 = &self.a * &self.a;
                let b2d = &self.b * &self.b * Rational::from(BigInt::from(self.d));
                match a2.cmp(&b2d) {
                    Ordering::Greater => s,
                    Ordering::Less => t,
                    Ordering::Equal => unreachable!("a² = b²d is impossible in normal form"),
                }
            }
        }
    }

    /// True when the value is strictly positive.
    pub fn is_positive(&self) -> bool {
        self.sign() > 0
    }

    /// True when the value is strictly negative.
    pub fn is_negative(&self) -> bool {
        self.sign() < 0
    }

    /// Absolute value.
    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Exact comparison, failing on mixed radicands.
    pub fn checked_cmp(&self, other: &Self) -> Result<Ordering, ExactError> {
        let diff = self.checked_sub(other)?;
        Ok(match diff.sign() {
            1 => Ordering::Greater,
            -1 => Ordering::Less,
            _ => Ordering::Equal,
        })
    }

    /// Residual of the metallic defining polynomial: `self² − p·self − q`.
    ///
    /// Zero exactly when the value is a root of `x² − px − q`.
    pub fn minimal_poly_residual(&self, p: i64, q: i64) -> Self {
        let px = self.checked_mul(&Self::from_integer(p)).expect("same field");
        self.square()
            .checked_sub(&px)
            .and_then(|t| t.checked_sub(&Self::from_integer(q)))
            .expect("same field")
    }

    /// Closest `f64`, for reporting and for seeding float cross-checks.
    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        if self.b.is_zero() {
            return a;
        }
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        a + b * (self.d as f64).sqrt()
    }

    /// Internal constructor for coefficients already in a square-free field.
    fn reduced(a: Rational, b: Rational, d: u64) -> Self {
        if b.is_zero() {
            Self { a, b, d: 1 }
        } else {
            debug_assert!(d > 1, "nonzero radical part requires d > 1");
            Self { a, b, d }
        }
    }
}

fn rational_sign(value: &Rational) -> i8 {
    if value.is_zero() {
        0
    } else if value.is_positive() {
        1
    } else {
        -1
    }
}

/// The metallic mean `σ_{p,q} = (p + √(p² + 4q)) / 2`, the positive root
/// of `x² − px − q`.
///
/// Requires `p, q ≥ 1` and `p ≤ 65 535` with `p² + 4q ≤ 2³²` so the
/// discriminant stays within exact square-free reduction range. When the
/// discriminant is a perfect square the mean is returned as an exact
/// rational (e.g. `σ_{1,2} = 2`).
pub fn metallic_mean(p: i64, q: i64) -> Result<QuadExt, ExactError> {
    let disc = metallic_discriminant(p, q)?;
    let half = Rational::new(BigInt::from(1), BigInt::from(2));
    QuadExt::new(Rational::from(BigInt::from(p)) * &half, half, disc)
}

/// The conjugate root `p − σ_{p,q} = (p − √(p² + 4q)) / 2` of `x² − px − q`.
///
/// Always strictly negative for `p, q ≥ 1`; the product of the two roots
/// is `−q` and their sum is `p`.
pub fn metallic_conjugate(p: i64, q: i64) -> Result<QuadExt, ExactError> {
    let sigma = metallic_mean(p, q)?;
    QuadExt::from_integer(p).checked_sub(&sigma)
}

/// The golden ratio `φ = σ_{1,1} = (1 + √5)/2`.
pub fn golden_ratio() -> QuadExt {
    metallic_mean(1, 1).expect("(1,1) is within parameter range")
}

fn metallic_discriminant(p: i64, q: i64) -> Result<u64, ExactError> {
    if p < 1 || q < 1 {
        return Err(ExactError::InvalidParameters(format!(
            "metallic parameters must be positive integers, got p={p}, q={q}"
        )));
    }
    if p > PARAMETER_CAP {
        return Err(ExactError::InvalidParameters(format!(
            "metallic parameter p={p} exceeds the supported bound {PARAMETER_CAP}"
        )));
    }
    let disc = (p as u64) * (p as u64) + 4 * (q as u64);
    if disc > RADICAND_CAP {
        return Err(ExactError::InvalidParameters(format!(
            "discriminant p²+4q = {disc} exceeds the supported bound 2^32"
        )));
    }
    Ok(disc)
}

impl Default for QuadExt {
    fn default() -> Self {
        Self::zero()
    }
}

impl PartialOrd for QuadExt {
    /// Numeric order inside one field; `None` across genuinely different
    /// fields (deciding that would need degree-4 arithmetic).
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.checked_cmp(other).ok()
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let radical = |b: &Rational| -> String {
            let mag = b.abs();
            if mag.is_one() {
                format!("\u{221a}{}", self.d)
            } else {
                format!("{}\u{221a}{}", mag, self.d)
            }
        };
        if self.a.is_zero() {
            let sign = if self.b.is_negative() { "-" } else { "" };
            write!(f, "{sign}{}", radical(&self.b))
        } else {
            let op = if self.b.is_negative() { "-" } else { "+" };
            write!(f, "{} {op} {}", self.a, radical(&self.b))
        }
    }
}

impl fmt::Debug for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuadExt({self})")
    }
}

// Operator impls delegate to the checked methods and panic on mixed
// radicands or zero divisors: inside library code those are invariant
// violations, and callers handling untrusted data use the checked API.
macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident, $msg:expr) => {
        impl $trait for &QuadExt {
            type Output = QuadExt;
            fn $method(self, rhs: &QuadExt) -> QuadExt {
                self.$checked(rhs).expect($msg)
            }
        }
        impl $trait for QuadExt {
            type Output = QuadExt;
            fn $method(self, rhs: QuadExt) -> QuadExt {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&QuadExt> for QuadExt {
            type Output = QuadExt;
            fn $method(self, rhs: &QuadExt) -> QuadExt {
                (&self).$method(rhs)
            }
        }
        impl $trait<QuadExt> for &QuadExt {
            type Output = QuadExt;
            fn $method(self, rhs: QuadExt) -> QuadExt {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add, "operands lie in different quadratic fields");
forward_binop!(Sub, sub, checked_sub, "operands lie in different quadratic fields");
forward_binop!(Mul, mul, checked_mul, "operands lie in different quadratic fields");
forward_binop!(Div, div, checked_div, "division failed: zero divisor or mixed fields");

impl Neg for &QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt { a: -(&self.a), b: -(&self.b), d: self.d }
    }
}

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        -&self
    }
}

impl From<i64> for QuadExt {
    fn from(value: i64) -> Self {
        Self::from_integer(value)
    }
}

impl Serialize for QuadExt {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("QuadExt", 3)?;
        s.serialize_field("a", &format_rational(&self.a))?;
        s.serialize_field("b", &format_rational(&self.b))?;
        s.serialize_field("d", &self.d)?;
        s.end()
    }
}

/// Accepted wire forms: a bare integer, a bare `"num/den"` string, or a
/// full `{"a": …, "b": …, "d": …}` object whose `a`/`b` entries may each
/// be an integer or a rational string (`b` defaults to 0, `d` to 1).
#[derive(Deserialize)]
#[serde(untagged)]
enum QuadExtRepr {
    Int(i64),
    Text(String),
    Full {
        a: RationalRepr,
        #[serde(default)]
        b: Option<RationalRepr>,
        #[serde(default)]
        d: Option<u64>,
    },
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RationalRepr {
    Int(i64),
    Text(String),
}

impl RationalRepr {
    fn into_rational(self) -> Result<Rational, ExactError> {
        match self {
            RationalRepr::Int(n) => Ok(Rational::from(BigInt::from(n))),
            RationalRepr::Text(t) => parse_rational(&t),
        }
    }
}

impl<'de> Deserialize<'de> for QuadExt {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = QuadExtRepr::deserialize(deserializer)?;
        let value = match repr {
            QuadExtRepr::Int(n) => Ok(QuadExt::from_integer(n)),
            QuadExtRepr::Text(t) => parse_rational(&t).map(QuadExt::from_rational),
            QuadExtRepr::Full { a, b, d } => {
                let a = a.into_rational();
                let b = b.map_or(Ok(Rational::zero()), RationalRepr::into_rational);
                match (a, b) {
                    (Ok(a), Ok(b)) => QuadExt::new(a, b, d.unwrap_or(1)),
                    (Err(e), _) | (_, Err(e)) => Err(e),
                }
            }
        };
        value.map_err(D::Error::custom)
    }
}
