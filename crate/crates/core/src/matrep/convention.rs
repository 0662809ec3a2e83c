//! Catalogued readings of the typographically ambiguous tokens in the
//! boost actions, the q-vector operators and the coproduct.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// One ambiguous token and its admissible readings. Option 0 is the default.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axis {
    /// Exponent of the `|j-1⟩` term of `N±`: `-(j±m)/2` or `-(j∓m)/2`.
    LowerExponent,
    /// Exponent of the `|j+1⟩` term of `N±`: `(j∓m)/2` or `(j±m)/2`.
    UpperExponent,
    /// Target of the `|j-1⟩` term of `N±`: `m±1` or `m`.
    LowerShift,
    /// `q^{-1/4}` on the `|j-1⟩` term: present or absent.
    LowerQuarter,
    /// `q^{1/4}` on the `|j+1⟩` term: present or absent.
    UpperQuarter,
    /// Boost paired with `N₋` in the fifth algebra line: `Ñ₃` or `N₃`.
    TildePairing,
    /// Prefactor exponent `x` in `S± = ±q^{∓x} …`, `T± = ±q^{±x} …`:
    /// `1/4`, `1/2`, `0` or `1`.
    VectorExponent,
    /// Raising/lowering operators inside `S`, `T`: standard `U_q(su(2))`
    /// generators or the tensor-form ones.
    VectorForm,
    /// Diagonal factor in `Δ(I₋^R)`: `T₃^L` or `T₃^R`.
    CoproductRMinus,
    /// Shifted generators `T₃ = 2 - δI₃` (literal) or `T₃ = 1 - αI₃` (unit).
    ShiftNormalization,
}

impl Axis {
    pub const ALL: [Axis; 10] = [
        Axis::LowerExponent,
        Axis::UpperExponent,
        Axis::LowerShift,
        Axis::LowerQuarter,
        Axis::UpperQuarter,
        Axis::TildePairing,
        Axis::VectorExponent,
        Axis::VectorForm,
        Axis::CoproductRMinus,
        Axis::ShiftNormalization,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn options(self) -> u8 {
        match self {
            Axis::VectorExponent => 4,
            _ => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Axis::LowerExponent => "lower_exponent",
            Axis::UpperExponent => "upper_exponent",
            Axis::LowerShift => "lower_shift",
            Axis::LowerQuarter => "lower_quarter",
            Axis::UpperQuarter => "upper_quarter",
            Axis::TildePairing => "tilde_pairing",
            Axis::VectorExponent => "vector_exponent",
            Axis::VectorForm => "vector_form",
            Axis::CoproductRMinus => "coproduct_r_minus",
            Axis::ShiftNormalization => "shift_normalization",
        }
    }

    /// Human-readable reading for option `k`.
    pub fn describe(self, k: u8) -> &'static str {
        match (self, k) {
            (Axis::LowerExponent, 0) => "q^{-(j±m)/2}",
            (Axis::LowerExponent, _) => "q^{-(j∓m)/2}",
            (Axis::UpperExponent, 0) => "q^{(j∓m)/2}",
            (Axis::UpperExponent, _) => "q^{(j±m)/2}",
            (Axis::LowerShift, 0) => "|j-1, m±1>",
            (Axis::LowerShift, _) => "|j-1, m>",
            (Axis::LowerQuarter, 0) => "with q^{-1/4}",
            (Axis::LowerQuarter, _) => "without q^{-1/4}",
            (Axis::UpperQuarter, 0) => "with q^{1/4}",
            (Axis::UpperQuarter, _) => "without q^{1/4}",
            (Axis::TildePairing, 0) => "Ñ3 N- pairing",
            (Axis::TildePairing, _) => "N3 N- pairing",
            (Axis::VectorExponent, 0) => "x = 1/4",
            (Axis::VectorExponent, 1) => "x = 1/2",
            (Axis::VectorExponent, 2) => "x = 0",
            (Axis::VectorExponent, _) => "x = 1",
            (Axis::VectorForm, 0) => "standard generators",
            (Axis::VectorForm, _) => "tensor-form generators",
            (Axis::CoproductRMinus, 0) => "T3^L",
            (Axis::CoproductRMinus, _) => "T3^R",
            (Axis::ShiftNormalization, 0) => "T3 = 2 - δ I3",
            (Axis::ShiftNormalization, _) => "T3 = 1 - α I3",
        }
    }
}

/// A choice of reading for every [`Axis`]. Ordered lexicographically by
/// option index, which is also the resolver's tie-break order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConventionId([u8; 10]);

impl ConventionId {
    pub fn get(&self, axis: Axis) -> u8 {
        self.0[axis.index()]
    }

    pub fn with(mut self, axis: Axis, option: u8) -> Result<Self, Error> {
        if option >= axis.options() {
            return Err(Error::InvalidArgument(format!(
                "option {option} out of range for axis {}",
                axis.name()
            )));
        }
        self.0[axis.index()] = option;
        Ok(self)
    }

    /// Every combination of the given axes, other axes taken from `self`,
    /// in ascending order.
    pub fn catalog(self, axes: &[Axis]) -> Vec<ConventionId> {
        let mut out = vec![self];
        for &axis in axes {
            out = out
                .into_iter()
                .flat_map(|c| (0..axis.options()).map(move |k| c.with(axis, k).unwrap()))
                .collect();
        }
        out.sort();
        out
    }

    /// Readings of the boost actions and the algebra line pairing.
    pub fn lorentz_catalog() -> Vec<ConventionId> {
        ConventionId::default().catalog(&[
            Axis::LowerExponent,
            Axis::UpperExponent,
            Axis::LowerShift,
            Axis::LowerQuarter,
            Axis::UpperQuarter,
            Axis::TildePairing,
        ])
    }

    pub fn vector_catalog() -> Vec<ConventionId> {
        ConventionId::default().catalog(&[Axis::VectorExponent, Axis::VectorForm])
    }

    pub fn coproduct_catalog() -> Vec<ConventionId> {
        ConventionId::default().catalog(&[Axis::CoproductRMinus, Axis::ShiftNormalization])
    }

    pub fn describe(&self) -> Vec<(&'static str, &'static str)> {
        Axis::ALL.iter().map(|&a| (a.name(), a.describe(self.get(a)))).collect()
    }
}

impl fmt::Display for ConventionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("c")?;
        for k in self.0 {
            write!(f, "{k}")?;
        }
        Ok(())
    }
}

impl FromStr for ConventionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::Parse(format!("malformed convention id {s:?}"));
        let digits = s.strip_prefix('c').ok_or_else(bad)?;
        if digits.len() != Axis::ALL.len() {
            return Err(bad());
        }
        let mut id = ConventionId::default();
        for (axis, ch) in Axis::ALL.iter().zip(digits.chars()) {
            let k = ch.to_digit(10).ok_or_else(bad)? as u8;
            id = id.with(*axis, k).map_err(|_| bad())?;
        }
        Ok(id)
    }
}
