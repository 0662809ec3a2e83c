//! Scalar foundation: exact half-integers, the deformation parameter and
//! symmetric q-numbers.
//!
//! q-numbers are evaluated in the hyperbolic form
//!
//! ```text
//! [A] = sinh(A·λ/2) / sinh(λ/2),   λ = ln q
//! ```
//!
//! which is algebraically identical to `(q^{A/2} - q^{-A/2}) / (q^{1/2} - q^{-1/2})`
//! but does not cancel catastrophically as `q → 1`.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::Error;

/// Complex scalar used for `l₁` and for every matrix entry.
pub type CScalar = Complex64;

/// `q` values closer than this to 1 are rejected.
pub const MIN_DISTANCE_FROM_ONE: f64 = 1e-12;

/// A number of the form `k/2`, stored as `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HalfInt {
    twice: i64,
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { twice: 0 };
    pub const HALF: HalfInt = HalfInt { twice: 1 };
    pub const ONE: HalfInt = HalfInt { twice: 2 };

    pub const fn from_twice(twice: i64) -> Self {
        HalfInt { twice }
    }

    pub const fn from_int(n: i64) -> Self {
        HalfInt { twice: 2 * n }
    }

    pub const fn twice(self) -> i64 {
        self.twice
    }

    pub fn to_f64(self) -> f64 {
        self.twice as f64 / 2.0
    }

    pub fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    pub fn is_nonnegative(self) -> bool {
        self.twice >= 0
    }

    pub fn abs(self) -> Self {
        HalfInt { twice: self.twice.abs() }
    }

    /// True when `self - other` is an integer.
    pub fn same_parity(self, other: HalfInt) -> bool {
        (self.twice - other.twice) % 2 == 0
    }

    /// `2j + 1` for a spin `j`.
    pub fn multiplicity(self) -> usize {
        debug_assert!(self.twice >= 0);
        (self.twice + 1) as usize
    }

    /// Iterator over `self, self+1, ..., last` (inclusive).
    pub fn range_to(self, last: HalfInt) -> impl Iterator<Item = HalfInt> {
        let start = self.twice;
        let end = last.twice;
        (start..=end).step_by(2).map(HalfInt::from_twice)
    }

    /// Magnetic quantum numbers `-j, -j+1, ..., j`.
    pub fn projections(self) -> impl Iterator<Item = HalfInt> {
        (-self).range_to(self)
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt { twice: self.twice + rhs.twice }
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt { twice: self.twice - rhs.twice }
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt { twice: -self.twice }
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

impl FromStr for HalfInt {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::Parse(format!("expected an integer or k/2, got {s:?}"));
        let s = s.trim();
        match s.split_once('/') {
            None => s.parse::<i64>().map(HalfInt::from_int).map_err(|_| bad()),
            Some((num, den)) => {
                if den.trim() != "2" {
                    return Err(bad());
                }
                num.trim().parse::<i64>().map(HalfInt::from_twice).map_err(|_| bad())
            }
        }
    }
}

/// The deformation parameter `q > 0`, `q ≠ 1`, stored through `λ = ln q`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Deformation {
    q: f64,
    ln_q: f64,
}

impl Deformation {
    pub fn new(q: f64) -> Result<Self, Error> {
        if !q.is_finite() || q <= 0.0 {
            return Err(Error::InvalidArgument(format!("q must be a positive real, got {q}")));
        }
        if (q - 1.0).abs() <= MIN_DISTANCE_FROM_ONE {
            return Err(Error::InvalidArgument(format!(
                "q must differ from 1 by more than {MIN_DISTANCE_FROM_ONE:e}, got {q}"
            )));
        }
        Ok(Deformation { q, ln_q: q.ln() })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn ln_q(&self) -> f64 {
        self.ln_q
    }

    /// The deformation at `1/q`. `ln(1/q)` is taken as exactly `-ln q`, so
    /// q-numbers at `q` and `1/q` agree bit for bit.
    pub fn inverse(&self) -> Deformation {
        Deformation { q: 1.0 / self.q, ln_q: -self.ln_q }
    }

    /// `q^e`.
    pub fn pow(&self, e: f64) -> f64 {
        (e * self.ln_q).exp()
    }

    pub fn sqrt_q(&self) -> f64 {
        self.pow(0.5)
    }

    /// `q^{1/2} - q^{-1/2}`.
    pub fn delta(&self) -> f64 {
        2.0 * (0.5 * self.ln_q).sinh()
    }

    /// `(q^{1/2} - q^{-1/2}) / 2`.
    pub fn alpha(&self) -> f64 {
        0.5 * self.delta()
    }

    /// Real q-number `[x]`.
    pub fn bracket(&self, x: f64) -> f64 {
        let half = 0.5 * self.ln_q;
        (x * half).sinh() / half.sinh()
    }

    pub fn bracket_half(&self, x: HalfInt) -> f64 {
        self.bracket(x.to_f64())
    }

    /// Complex q-number `[z]` by analytic continuation of the real formula.
    pub fn bracket_complex(&self, z: CScalar) -> CScalar {
        let half = 0.5 * self.ln_q;
        if z.im == 0.0 {
            return CScalar::new(self.bracket(z.re), 0.0);
        }
        (z * half).sinh() / half.sinh()
    }
}

/// `[a]` for a complex argument.
pub fn q_number(a: CScalar, d: &Deformation) -> CScalar {
    d.bracket_complex(a)
}

/// Principal square root with the cut on the negative real axis mapped to
/// `+i·√|z|` regardless of the sign of a zero imaginary part.
pub fn sqrt_principal(z: CScalar) -> CScalar {
    if z.im == 0.0 {
        if z.re >= 0.0 {
            CScalar::new(z.re.sqrt(), 0.0)
        } else {
            CScalar::new(0.0, (-z.re).sqrt())
        }
    } else {
        let r = z.sqrt();
        if r.re < 0.0 {
            -r
        } else {
            r
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn d(q: f64) -> Deformation {
        Deformation::new(q).unwrap()
    }

    #[test]
    fn halfint_parse_and_display() {
        assert_eq!("3/2".parse::<HalfInt>().unwrap(), HalfInt::from_twice(3));
        assert_eq!("2".parse::<HalfInt>().unwrap(), HalfInt::from_int(2));
        assert_eq!("-1/2".parse::<HalfInt>().unwrap(), HalfInt::from_twice(-1));
        assert_eq!(HalfInt::from_twice(3).to_string(), "3/2");
        assert_eq!(HalfInt::from_twice(4).to_string(), "2");
        assert_eq!(HalfInt::from_twice(-1).to_string(), "-1/2");
        assert!("1/3".parse::<HalfInt>().is_err());
        assert!("1.5".parse::<HalfInt>().is_err());
        assert!("".parse::<HalfInt>().is_err());
    }

    #[test]
    fn halfint_ranges() {
        let j = HalfInt::from_twice(3);
        let ms: Vec<_> = j.projections().map(|m| m.twice()).collect();
        assert_eq!(ms, vec![-3, -1, 1, 3]);
        assert_eq!(j.multiplicity(), 4);
        assert_eq!(HalfInt::ZERO.range_to(HalfInt::from_int(2)).count(), 3);
    }

    #[test]
    fn deformation_rejects_bad_q() {
        assert!(Deformation::new(0.0).is_err());
        assert!(Deformation::new(-1.3).is_err());
        assert!(Deformation::new(1.0).is_err());
        assert!(Deformation::new(1.0 + 1e-13).is_err());
        assert!(Deformation::new(f64::NAN).is_err());
        assert!(Deformation::new(1.0 + 1e-8).is_ok());
    }

    #[test]
    fn delta_and_alpha() {
        let dq = d(4.0);
        assert!((dq.delta() - 1.5).abs() < 1e-15);
        assert_eq!(dq.alpha(), dq.delta() / 2.0);
        assert!(d(0.5).delta() < 0.0);
    }

    #[test]
    fn q_number_examples() {
        for q in [0.5, 1.3, 2.0, 4.0] {
            let dq = d(q);
            assert_eq!(dq.bracket(0.0), 0.0);
            assert!((dq.bracket(1.0) - 1.0).abs() < 1e-15);
        }
        assert!((d(4.0).bracket(2.0) - 2.5).abs() < 1e-14);
        let z = q_number(CScalar::new(0.0, 2.7), &d(1.3));
        assert!(z.re.abs() < 1e-15);
        assert!(z.im != 0.0);
    }

    #[test]
    fn sqrt_branch() {
        assert_eq!(sqrt_principal(CScalar::new(4.0, 0.0)), CScalar::new(2.0, 0.0));
        assert_eq!(sqrt_principal(CScalar::new(-1.0, 0.0)), CScalar::new(0.0, 1.0));
        assert_eq!(sqrt_principal(CScalar::new(-9.0, -0.0)), CScalar::new(0.0, 3.0));
        let r = sqrt_principal(CScalar::new(-2.0, 1e-3));
        assert!(r.re >= 0.0);
    }

    #[test]
    fn product_and_telescoping_identities() {
        for q in [0.5, 1.3, 2.0] {
            let dq = d(q);
            for tj in 0..=20i64 {
                let j = tj as f64 / 2.0;
                let b = |x: f64| dq.bracket(x);
                let tele = b(j + 1.0).powi(2) - b(j).powi(2) - b(2.0 * j + 1.0);
                assert!(tele.abs() < 1e-12 * b(2.0 * j + 1.0).max(1.0), "telescoping j={j} q={q}");
                for m in HalfInt::from_twice(tj).projections() {
                    let m = m.to_f64();
                    let lhs = b(j + m) * b(j - m + 1.0);
                    let rhs = b(j) * b(j + 1.0) - b(m) * b(m - 1.0);
                    assert!((lhs - rhs).abs() < 1e-12 * lhs.abs().max(1.0), "product j={j} m={m} q={q}");
                }
            }
        }
    }

    #[test]
    fn classical_limit_is_linear() {
        let eps = 1e-6;
        let dq = d(1.0 + eps);
        for a in 0..=20 {
            let a = a as f64;
            assert!((dq.bracket(a) - a).abs() <= 1e2 * eps);
        }
    }

    proptest! {
        #[test]
        fn symmetric_under_inversion(a in -20.0f64..20.0, q in 0.2f64..5.0) {
            prop_assume!((q - 1.0).abs() > 1e-6);
            let dq = d(q);
            let direct = Deformation::new(1.0 / q).unwrap();
            let x = dq.bracket(a);
            prop_assert!((x - direct.bracket(a)).abs() < 1e-13 * x.abs().max(1.0));
            prop_assert_eq!(x, dq.inverse().bracket(a));
        }

        #[test]
        fn odd_function(a in -20.0f64..20.0, q in 0.2f64..5.0) {
            prop_assume!((q - 1.0).abs() > 1e-6);
            let dq = d(q);
            prop_assert_eq!(dq.bracket(-a), -dq.bracket(a));
        }
    }
}
