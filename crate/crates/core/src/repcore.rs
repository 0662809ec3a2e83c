//! Representation labels `(l₀, l₁)`, their classification, and the matrix
//! coefficients `a_j`, `c_j`.

use crate::error::{Error, Result};
use crate::qarith::{sqrt_principal, CScalar, Deformation, HalfInt};

const I: CScalar = CScalar::new(0.0, 1.0);

/// Relative tolerance for "real", "pure imaginary" and "integer" tests on `l₁`.
pub const LABEL_REL_TOL: f64 = 1e-9;
/// Absolute tolerance used instead when `|l₁| < SMALL_L1`.
pub const LABEL_ABS_TOL: f64 = 1e-12;
pub const SMALL_L1: f64 = 1e-3;

/// An irreducible representation label together with its deformation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RepLabel {
    pub l0: HalfInt,
    pub l1: CScalar,
    pub d: Deformation,
}

impl RepLabel {
    pub fn new(l0: HalfInt, l1: CScalar, d: Deformation) -> Result<Self> {
        if !l0.is_nonnegative() {
            return Err(Error::InvalidArgument(format!("l0 must be >= 0, got {l0}")));
        }
        if !(l1.re.is_finite() && l1.im.is_finite()) {
            return Err(Error::InvalidArgument("l1 must be finite".into()));
        }
        Ok(RepLabel { l0, l1, d })
    }

    /// Same label at `1/q`.
    pub fn inverted(&self) -> RepLabel {
        RepLabel { d: self.d.inverse(), ..*self }
    }

    /// Same `(l₀, l₁)` under a different deformation.
    pub fn with_deformation(&self, d: Deformation) -> RepLabel {
        RepLabel { d, ..*self }
    }

    fn tol(&self) -> f64 {
        let r = self.l1.norm();
        if r < SMALL_L1 {
            LABEL_ABS_TOL
        } else {
            LABEL_REL_TOL * r
        }
    }

    pub fn l1_is_real(&self) -> bool {
        self.l1.im.abs() <= self.tol()
    }

    pub fn l1_is_imaginary(&self) -> bool {
        self.l1.re.abs() <= self.tol()
    }

    /// `|l₁|` as a half-integer when `l₁` is real and `|l₁| - l₀` is a
    /// non-negative integer.
    fn terminating_spin(&self) -> Option<HalfInt> {
        if !self.l1_is_real() {
            return None;
        }
        let steps = self.l1.re.abs() - self.l0.to_f64();
        let rounded = steps.round();
        if rounded < 0.0 || (steps - rounded).abs() > LABEL_REL_TOL * steps.abs().max(1.0) {
            return None;
        }
        Some(self.l0 + HalfInt::from_int(rounded as i64))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Kind {
    /// Spins `l₀, …, |l₁| - 1`; `n = |l₁| - l₀ - 1`.
    Finite { n: u64, spins: Vec<HalfInt>, dim: usize },
    Infinite,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Unitarity {
    Principal { rho: f64 },
    Complementary,
    NonUnitary,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Classification {
    pub kind: Kind,
    pub unitary: Unitarity,
    pub warnings: Vec<String>,
}

impl Classification {
    pub fn is_finite(&self) -> bool {
        matches!(self.kind, Kind::Finite { .. })
    }

    pub fn is_unitary(&self) -> bool {
        !matches!(self.unitary, Unitarity::NonUnitary)
    }

    /// Highest spin of a finite representation.
    pub fn top_spin(&self) -> Option<HalfInt> {
        match &self.kind {
            Kind::Finite { spins, .. } => spins.last().copied(),
            Kind::Infinite => None,
        }
    }
}

pub fn classify(label: &RepLabel) -> Classification {
    let mut warnings = Vec::new();
    let kind = match label.terminating_spin() {
        Some(top) if top > label.l0 => {
            let spins: Vec<HalfInt> = label.l0.range_to(top - HalfInt::ONE).collect();
            let dim = spins.iter().map(|j| j.multiplicity()).sum();
            Kind::Finite { n: spins.len() as u64 - 1, spins, dim }
        }
        Some(_) => {
            warnings.push(format!(
                "degenerate label: |l1| = l0 = {}; treated as infinite-dimensional",
                label.l0
            ));
            Kind::Infinite
        }
        None => Kind::Infinite,
    };
    let unitary = if label.l1_is_imaginary() {
        Unitarity::Principal { rho: label.l1.im }
    } else if label.l0 == HalfInt::ZERO && label.l1_is_real() {
        let r = label.l1.re.abs();
        if r > label.tol() && r <= 1.0 + label.tol() {
            Unitarity::Complementary
        } else {
            Unitarity::NonUnitary
        }
    } else {
        Unitarity::NonUnitary
    };
    Classification { kind, unitary, warnings }
}

fn check_spin(j: HalfInt, label: &RepLabel) -> Result<()> {
    if j < label.l0 || !j.same_parity(label.l0) {
        return Err(Error::InvalidArgument(format!(
            "spin {j} is not in the ladder l0 = {}, l0+1, ...",
            label.l0
        )));
    }
    Ok(())
}

/// `a_j = i[l₀][l₁] / ([j][j+1])`, with `a₀ = 0`.
pub fn coeff_a(j: HalfInt, label: &RepLabel) -> Result<CScalar> {
    check_spin(j, label)?;
    if j == HalfInt::ZERO {
        return Ok(CScalar::new(0.0, 0.0));
    }
    let d = &label.d;
    let l0 = d.bracket_half(label.l0);
    let l1 = d.bracket_complex(label.l1);
    Ok(I * l0 * l1 / (d.bracket_half(j) * d.bracket_half(j + HalfInt::ONE)))
}

/// `a_{l₀}` with the common `[l₀]` cancelled, i.e. `i[l₁]/[l₀+1]`. Agrees with
/// [`coeff_a`] for `l₀ > 0` and gives the continuous value at `l₀ = 0`.
fn coeff_a_bottom(label: &RepLabel) -> CScalar {
    let d = &label.d;
    I * d.bracket_complex(label.l1) / d.bracket_half(label.l0 + HalfInt::ONE)
}

/// `c_j = (i/[j]) √(([j]² - [l₀]²)([j]² - [l₁]²) / ([2j-1][2j+1]))`.
///
/// `c_{l₀} = 0`, and for finite labels `c_{|l₁|} = 0`, both exactly.
pub fn coeff_c(j: HalfInt, label: &RepLabel) -> Result<CScalar> {
    check_spin(j, label)?;
    let zero = CScalar::new(0.0, 0.0);
    if j == label.l0 {
        return Ok(zero);
    }
    if label.terminating_spin() == Some(j) {
        return Ok(zero);
    }
    let d = &label.d;
    let bj = d.bracket_half(j);
    let num = (bj * bj - d.bracket_half(label.l0).powi(2))
        * (CScalar::new(bj * bj, 0.0) - d.bracket_complex(label.l1).powi(2));
    let two_j = j + j;
    let den = d.bracket_half(two_j - HalfInt::ONE) * d.bracket_half(two_j + HalfInt::ONE);
    if den == 0.0 {
        if num == zero {
            return Ok(zero);
        }
        return Err(Error::Singularity { j: j.to_string() });
    }
    Ok(I / bj * sqrt_principal(num / den))
}

/// `i[l₀][l₁]`, the scalar by which the Casimir acts.
pub fn casimir_eigenvalue(label: &RepLabel) -> CScalar {
    let d = &label.d;
    I * d.bracket_half(label.l0) * d.bracket_complex(label.l1)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RecurrenceResidual {
    pub j: HalfInt,
    /// `|(a_{j+1}[j+2] - a_j[j]) c_{j+1}|`
    pub first: f64,
    /// `|c_j²[2j-1] - a_j² - c_{j+1}²[2j+3] - 1|`
    pub second: f64,
}

/// Substitutes the closed-form coefficients into both difference equations
/// for every `j` in `l₀..=j_max`.
///
/// At `j = l₀ = 0` the second equation is evaluated with the cancelled value
/// `a₀ = i[l₁]`; the matrix builders use `a₀ = 0`, which is unobservable.
pub fn check_recurrences(label: &RepLabel, j_max: HalfInt) -> Result<Vec<RecurrenceResidual>> {
    if j_max < label.l0 + HalfInt::ONE || !j_max.same_parity(label.l0) {
        return Err(Error::InvalidArgument(format!(
            "j_max = {j_max} must be at least l0 + 1 = {} with the parity of l0",
            label.l0 + HalfInt::ONE
        )));
    }
    let d = &label.d;
    let one = CScalar::new(1.0, 0.0);
    label
        .l0
        .range_to(j_max)
        .map(|j| {
            let next = j + HalfInt::ONE;
            let a = if j == label.l0 { coeff_a_bottom(label) } else { coeff_a(j, label)? };
            let a_next = coeff_a(next, label)?;
            let c = coeff_c(j, label)?;
            let c_next = coeff_c(next, label)?;
            let b = |x: HalfInt| d.bracket_half(x);
            let first = ((a_next * b(next + HalfInt::ONE) - a * b(j)) * c_next).norm();
            let two_j = j + j;
            let second = (c * c * b(two_j - HalfInt::ONE)
                - a * a
                - c_next * c_next * b(two_j + HalfInt::from_int(3))
                - one)
                .norm();
            Ok(RecurrenceResidual { j, first, second })
        })
        .collect()
}
