//! The `|j, m⟩` basis and dense generator matrices.

mod build;
mod convention;
pub mod export;

pub use build::{
    build_basis, build_casimir_matrix, build_from_suq2, build_generators, build_m, build_n,
    build_n3_tilde, build_st_vectors, n3_tilde_direct, spectral, standard_su_q2, tensor_embed,
};
pub use convention::{Axis, ConventionId};

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::qarith::{CScalar, Deformation, HalfInt};
use crate::repcore::RepLabel;

/// Dense complex matrix type used throughout.
pub type Mat = DMatrix<CScalar>;

/// Ordered `(j, m)` index set: blocks of ascending `j`, and `m = -j..=j`
/// inside each block.
#[derive(Clone, Debug, PartialEq)]
pub struct Basis {
    spins: Vec<HalfInt>,
    offsets: Vec<usize>,
    dim: usize,
    j_max: Option<HalfInt>,
}

impl Basis {
    /// Consecutive spins `first, first+1, …, last`. `truncated` marks a cut
    /// through an infinite ladder.
    pub fn ladder(first: HalfInt, last: HalfInt, truncated: bool) -> Result<Basis> {
        if !first.is_nonnegative() || last < first || !first.same_parity(last) {
            return Err(Error::InvalidArgument(format!("invalid spin range {first}..={last}")));
        }
        let spins: Vec<HalfInt> = first.range_to(last).collect();
        let mut offsets = Vec::with_capacity(spins.len());
        let mut dim = 0;
        for j in &spins {
            offsets.push(dim);
            dim += j.multiplicity();
        }
        Ok(Basis { spins, offsets, dim, j_max: truncated.then_some(last) })
    }

    /// A single spin-`j` block.
    pub fn single(j: HalfInt) -> Result<Basis> {
        Basis::ladder(j, j, false)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn spins(&self) -> &[HalfInt] {
        &self.spins
    }

    pub fn truncated(&self) -> bool {
        self.j_max.is_some()
    }

    pub fn j_max(&self) -> Option<HalfInt> {
        self.j_max
    }

    pub fn lowest(&self) -> HalfInt {
        self.spins[0]
    }

    pub fn highest(&self) -> HalfInt {
        *self.spins.last().unwrap()
    }

    pub fn offset(&self, j: HalfInt) -> Option<usize> {
        let k = self.spins.binary_search(&j).ok()?;
        Some(self.offsets[k])
    }

    pub fn index(&self, j: HalfInt, m: HalfInt) -> Option<usize> {
        if m.abs() > j || !m.same_parity(j) {
            return None;
        }
        let start = self.offset(j)?;
        Some(start + ((m + j).twice() / 2) as usize)
    }

    pub fn state(&self, index: usize) -> (HalfInt, HalfInt) {
        assert!(index < self.dim, "index {index} out of range for dim {}", self.dim);
        let k = match self.offsets.binary_search(&index) {
            Ok(k) => k,
            Err(k) => k - 1,
        };
        let j = self.spins[k];
        let m = HalfInt::from_int((index - self.offsets[k]) as i64) - j;
        (j, m)
    }

    pub fn states(&self) -> impl Iterator<Item = (usize, HalfInt, HalfInt)> + '_ {
        self.spins.iter().flat_map(|&j| j.projections().map(move |m| (j, m))).enumerate().map(
            |(k, (j, m))| (k, j, m),
        )
    }

    /// Columns on which a relation moving `j` by up to `depth` steps is free
    /// of truncation error. Every column for untruncated bases.
    pub fn interior_columns(&self, depth: u32) -> Vec<usize> {
        match self.j_max {
            None => (0..self.dim).collect(),
            Some(top) => {
                let limit = top - HalfInt::from_int(depth as i64);
                self.states().filter(|&(_, j, _)| j <= limit).map(|(k, _, _)| k).collect()
            }
        }
    }

    /// Description of [`Basis::interior_columns`] for reports.
    pub fn describe_columns(&self, depth: u32) -> String {
        match self.j_max {
            None => "all".to_string(),
            Some(top) => format!("j <= {}", top - HalfInt::from_int(depth as i64)),
        }
    }
}

/// Allowed `(Δj, Δm)` shifts of a matrix in the `|j, m⟩` basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Selection {
    pub delta_j: Vec<i64>,
    pub delta_m: Vec<i64>,
}

impl Selection {
    pub fn new(delta_j: &[i64], delta_m: &[i64]) -> Self {
        Selection { delta_j: delta_j.to_vec(), delta_m: delta_m.to_vec() }
    }

    pub fn diagonal() -> Self {
        Selection::new(&[0], &[0])
    }

    fn allows(&self, row: (HalfInt, HalfInt), col: (HalfInt, HalfInt)) -> bool {
        let dj = (row.0 - col.0).twice();
        let dm = (row.1 - col.1).twice();
        dj % 2 == 0
            && dm % 2 == 0
            && self.delta_j.contains(&(dj / 2))
            && self.delta_m.contains(&(dm / 2))
    }
}

/// A dense operator with its declared selection rule (absent for operators
/// on tensor-product spaces).
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    pub data: Mat,
    pub selection: Option<Selection>,
}

impl OperatorMatrix {
    pub fn new(data: Mat, selection: Option<Selection>) -> Self {
        OperatorMatrix { data, selection }
    }

    pub fn zeros(dim: usize, selection: Selection) -> Self {
        OperatorMatrix { data: Mat::zeros(dim, dim), selection: Some(selection) }
    }

    pub fn identity(dim: usize) -> Self {
        OperatorMatrix { data: Mat::identity(dim, dim), selection: Some(Selection::diagonal()) }
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    /// Largest modulus among entries that the selection rule forbids.
    pub fn selection_violation(&self, basis: &Basis) -> f64 {
        let Some(sel) = &self.selection else { return 0.0 };
        let mut worst = 0.0f64;
        for c in 0..self.data.ncols() {
            let col = basis.state(c);
            for r in 0..self.data.nrows() {
                let v = self.data[(r, c)];
                if v.norm() > worst && !sel.allows(basis.state(r), col) {
                    worst = v.norm();
                }
            }
        }
        worst
    }
}

/// Where a [`GeneratorSet`] came from.
#[derive(Clone, Debug, PartialEq)]
pub enum Origin {
    Label(RepLabel),
    /// Spin-`j` realization built from `U_q(su(2))` matrices.
    Realization { spin: HalfInt },
    /// Undeformed Lorentz representation.
    Classical { l0: HalfInt, l1: CScalar },
    Imported { description: String },
}

/// Rotation and boost generators together with the Casimir matrix.
#[derive(Clone, Debug)]
pub struct GeneratorSet {
    pub basis: Basis,
    pub m_plus: OperatorMatrix,
    pub m_minus: OperatorMatrix,
    pub m3: OperatorMatrix,
    pub n_plus: OperatorMatrix,
    pub n_minus: OperatorMatrix,
    pub n3: OperatorMatrix,
    pub n3_tilde: OperatorMatrix,
    pub casimir: OperatorMatrix,
    /// Scalar the Casimir is expected to act by.
    pub c_scalar: CScalar,
    /// `None` for the undeformed oracle.
    pub d: Option<Deformation>,
    pub origin: Origin,
    pub convention: ConventionId,
}

impl GeneratorSet {
    /// `(name, matrix)` pairs in export order.
    pub fn named(&self) -> [(&'static str, &OperatorMatrix); 8] {
        [
            ("M_plus", &self.m_plus),
            ("M_minus", &self.m_minus),
            ("M3", &self.m3),
            ("N_plus", &self.n_plus),
            ("N_minus", &self.n_minus),
            ("N3", &self.n3),
            ("N3_tilde", &self.n3_tilde),
            ("casimir", &self.casimir),
        ]
    }

    pub fn named_mut(&mut self) -> [(&'static str, &mut OperatorMatrix); 8] {
        [
            ("M_plus", &mut self.m_plus),
            ("M_minus", &mut self.m_minus),
            ("M3", &mut self.m3),
            ("N_plus", &mut self.n_plus),
            ("N_minus", &mut self.n_minus),
            ("N3", &mut self.n3),
            ("N3_tilde", &mut self.n3_tilde),
            ("casimir", &mut self.casimir),
        ]
    }

    /// The six Lorentz generators plus `Ñ₃`.
    pub fn generators(&self) -> [(&'static str, &OperatorMatrix); 7] {
        let [a, b, c, d, e, f, g, _] = self.named();
        [a, b, c, d, e, f, g]
    }

    /// Largest selection-rule violation over all generators.
    pub fn selection_violation(&self) -> f64 {
        self.named().iter().map(|(_, m)| m.selection_violation(&self.basis)).fold(0.0, f64::max)
    }
}

/// Raising, lowering and Cartan matrices of the standard `U_q(su(2))`
/// spin-`j` representation, `[m₊, m₋] = [2m₃]`.
#[derive(Clone, Debug)]
pub struct Su2Generators {
    pub basis: Basis,
    pub plus: OperatorMatrix,
    pub minus: OperatorMatrix,
    pub m3: OperatorMatrix,
}

/// Components `T^l_m`, `m = -l..=l`, in ascending `m`.
#[derive(Clone, Debug)]
pub struct TensorOperator {
    pub rank: HalfInt,
    components: Vec<OperatorMatrix>,
}

impl TensorOperator {
    pub fn new(rank: HalfInt, components: Vec<OperatorMatrix>) -> Result<Self> {
        if components.len() != rank.multiplicity() {
            return Err(Error::InvalidArgument(format!(
                "rank {rank} needs {} components, got {}",
                rank.multiplicity(),
                components.len()
            )));
        }
        Ok(TensorOperator { rank, components })
    }

    pub fn component(&self, m: HalfInt) -> Option<&OperatorMatrix> {
        if m.abs() > self.rank || !m.same_parity(self.rank) {
            return None;
        }
        self.components.get(((m + self.rank).twice() / 2) as usize)
    }

    pub fn components(&self) -> impl Iterator<Item = (HalfInt, &OperatorMatrix)> {
        self.rank.projections().zip(self.components.iter())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(t: i64) -> HalfInt {
        HalfInt::from_twice(t)
    }

    #[test]
    fn basis_index_round_trip() {
        let b = Basis::ladder(h(0), h(10), true).unwrap();
        assert_eq!(b.dim(), 36);
        for (k, j, m) in b.states() {
            assert_eq!(b.index(j, m), Some(k));
            assert_eq!(b.state(k), (j, m));
        }
        assert_eq!(b.index(h(2), h(3)), None);
        assert_eq!(b.index(h(12), h(0)), None);
        assert_eq!(b.index(h(2), h(1)), None);
    }

    #[test]
    fn interior_columns() {
        let b = Basis::ladder(h(1), h(5), true).unwrap();
        assert_eq!(b.interior_columns(1).len(), 2 + 4);
        assert_eq!(b.interior_columns(2).len(), 2);
        assert_eq!(b.describe_columns(2), "j <= 1/2");
        let f = Basis::ladder(h(1), h(5), false).unwrap();
        assert_eq!(f.interior_columns(2).len(), f.dim());
    }

    #[test]
    fn selection_rule_detection() {
        let b = Basis::single(h(2)).unwrap();
        let mut op = OperatorMatrix::zeros(3, Selection::new(&[0], &[1]));
        op.data[(1, 0)] = CScalar::new(2.0, 0.0);
        assert_eq!(op.selection_violation(&b), 0.0);
        op.data[(0, 1)] = CScalar::new(0.5, 0.0);
        assert_eq!(op.selection_violation(&b), 0.5);
    }
}
