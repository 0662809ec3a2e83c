use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::qarith::{CScalar, Deformation, HalfInt};
use crate::repcore::{casimir_eigenvalue, classify, coeff_a, coeff_c, Kind, RepLabel};

use super::{
    Axis, Basis, ConventionId, GeneratorSet, Mat, OperatorMatrix, Origin, Selection,
    Su2Generators, TensorOperator,
};

const I: CScalar = CScalar::new(0.0, 1.0);

fn re(x: f64) -> CScalar {
    CScalar::new(x, 0.0)
}

/// Relative size of a forbidden entry in the derived `Ñ₃` that is still
/// attributed to rounding.
const SELECTION_TOL: f64 = 1e-9;

/// Full basis for finite labels; `l₀..=j_max` otherwise.
pub fn build_basis(label: &RepLabel, j_max: HalfInt) -> Result<Basis> {
    match classify(label).kind {
        Kind::Finite { spins, .. } => Basis::ladder(spins[0], *spins.last().unwrap(), false),
        Kind::Infinite => {
            if j_max < label.l0 || !j_max.same_parity(label.l0) {
                return Err(Error::InvalidArgument(format!(
                    "j_max = {j_max} must be >= l0 = {} and differ from it by an integer",
                    label.l0
                )));
            }
            Basis::ladder(label.l0, j_max, true)
        }
    }
}

/// Diagonal matrix `f(m)` on `|j, m⟩`.
pub fn spectral(basis: &Basis, f: impl Fn(HalfInt) -> CScalar) -> OperatorMatrix {
    let mut op = OperatorMatrix::zeros(basis.dim(), Selection::diagonal());
    for (k, _, m) in basis.states() {
        op.data[(k, k)] = f(m);
    }
    op
}

fn root(d: &Deformation, x: HalfInt) -> f64 {
    d.bracket_half(x).max(0.0).sqrt()
}

/// Rotation generators
/// `M±|j,m⟩ = [j∓m]^{1/2}[j±m+1]^{1/2} q^{-1/4} q^{∓m/2} |j,m±1⟩`, `M₃|j,m⟩ = m|j,m⟩`.
pub fn build_m(basis: &Basis, d: &Deformation) -> (OperatorMatrix, OperatorMatrix, OperatorMatrix) {
    let n = basis.dim();
    let one = HalfInt::ONE;
    let mut plus = OperatorMatrix::zeros(n, Selection::new(&[0], &[1]));
    let mut minus = OperatorMatrix::zeros(n, Selection::new(&[0], &[-1]));
    for (k, j, m) in basis.states() {
        if let Some(t) = basis.index(j, m + one) {
            let mf = m.to_f64();
            plus.data[(t, k)] = re(root(d, j - m) * root(d, j + m + one) * d.pow(-0.25 - 0.5 * mf));
        }
        if let Some(t) = basis.index(j, m - one) {
            let mf = m.to_f64();
            minus.data[(t, k)] = re(root(d, j + m) * root(d, j - m + one) * d.pow(-0.25 + 0.5 * mf));
        }
    }
    let m3 = spectral(basis, |m| re(m.to_f64()));
    (plus, minus, m3)
}

struct Coefficients {
    a: HashMap<HalfInt, CScalar>,
    c: HashMap<HalfInt, CScalar>,
}

impl Coefficients {
    fn new(basis: &Basis, label: &RepLabel) -> Result<Self> {
        let mut a = HashMap::new();
        let mut c = HashMap::new();
        for &j in basis.spins() {
            a.insert(j, coeff_a(j, label)?);
            c.insert(j, coeff_c(j, label)?);
        }
        Ok(Coefficients { a, c })
    }
}

/// Boost generators from the three-term actions with coefficients `c_j`,
/// `a_j`, `c_{j+1}`. The convention selects among the catalogued readings
/// of the `|j±1⟩` terms.
pub fn build_n(
    basis: &Basis,
    label: &RepLabel,
    conv: ConventionId,
) -> Result<(OperatorMatrix, OperatorMatrix, OperatorMatrix)> {
    let d = &label.d;
    let coeffs = Coefficients::new(basis, label)?;
    let n = basis.dim();
    let one = HalfInt::ONE;
    let lower_dm = conv.get(Axis::LowerShift) == 1;
    let lower_quarter = if conv.get(Axis::LowerQuarter) == 0 { -0.25 } else { 0.0 };
    let upper_quarter = if conv.get(Axis::UpperQuarter) == 0 { 0.25 } else { 0.0 };

    let mut out = Vec::with_capacity(2);
    for s in [1i64, -1] {
        let step = HalfInt::from_int(s);
        let sf = s as f64;
        let dm: &[i64] = if lower_dm { &[0, s] } else { &[s] };
        let mut op = OperatorMatrix::zeros(n, Selection::new(&[-1, 0, 1], dm));
        for (k, j, m) in basis.states() {
            let (jf, mf) = (j.to_f64(), m.to_f64());
            let sm = HalfInt::from_int(s) * m;
            let lower_target = if lower_dm { m } else { m + step };
            if let Some(t) = basis.index(j - one, lower_target) {
                let e = match conv.get(Axis::LowerExponent) {
                    0 => -(jf + sf * mf) / 2.0,
                    _ => -(jf - sf * mf) / 2.0,
                };
                let mag = root(d, j - sm) * root(d, j - sm - one) * d.pow(lower_quarter + e);
                op.data[(t, k)] += coeffs.c[&j] * sf * mag;
            }
            if let Some(t) = basis.index(j, m + step) {
                let mag = root(d, j - sm) * root(d, j + sm + one) * d.pow(-0.25 - sf * mf / 2.0);
                op.data[(t, k)] -= coeffs.a[&j] * mag;
            }
            if let Some(t) = basis.index(j + one, m + step) {
                let e = match conv.get(Axis::UpperExponent) {
                    0 => (jf - sf * mf) / 2.0,
                    _ => (jf + sf * mf) / 2.0,
                };
                let mag = root(d, j + sm + one)
                    * root(d, j + sm + HalfInt::from_int(2))
                    * d.pow(upper_quarter + e);
                op.data[(t, k)] += coeffs.c[&(j + one)] * sf * mag;
            }
        }
        out.push(op);
    }
    let n3 = n3_with_exponent(basis, label, &coeffs, -0.5);
    let minus = out.pop().unwrap();
    let plus = out.pop().unwrap();
    Ok((plus, minus, n3))
}

impl std::ops::Mul<HalfInt> for HalfInt {
    type Output = HalfInt;
    /// Product of an integer-valued `self` with `rhs`.
    fn mul(self, rhs: HalfInt) -> HalfInt {
        debug_assert!(self.is_integer());
        HalfInt::from_twice(self.twice() / 2 * rhs.twice())
    }
}

/// `N₃` (exponent `-1/2`) or its `q^{+m/2}` counterpart (exponent `+1/2`).
fn n3_with_exponent(basis: &Basis, label: &RepLabel, coeffs: &Coefficients, e: f64) -> OperatorMatrix {
    let d = &label.d;
    let one = HalfInt::ONE;
    let mut op = OperatorMatrix::zeros(basis.dim(), Selection::new(&[-1, 0, 1], &[0]));
    for (k, j, m) in basis.states() {
        let phase = d.pow(e * m.to_f64());
        if let Some(t) = basis.index(j - one, m) {
            op.data[(t, k)] += coeffs.c[&j] * (root(d, j - m) * root(d, j + m) * phase);
        }
        op.data[(k, k)] -= coeffs.a[&j] * (d.bracket_half(m) * phase);
        if let Some(t) = basis.index(j + one, m) {
            op.data[(t, k)] -=
                coeffs.c[&(j + one)] * (root(d, j + m + one) * root(d, j - m + one) * phase);
        }
    }
    op
}

/// `Ñ₃` read off the boost formula for `N₃` with `q^{+m/2}` in place of
/// `q^{-m/2}`. Cross-check only; [`build_n3_tilde`] is authoritative.
pub fn n3_tilde_direct(basis: &Basis, label: &RepLabel) -> Result<OperatorMatrix> {
    let coeffs = Coefficients::new(basis, label)?;
    Ok(n3_with_exponent(basis, label, &coeffs, 0.5))
}

/// Solves `M₊N₋q^{-1/2} - q^{1/2}N₋M₊ = [2]Ñ₃ + δ C` for `Ñ₃`.
pub fn build_n3_tilde(
    basis: &Basis,
    m_plus: &OperatorMatrix,
    n_minus: &OperatorMatrix,
    c_scalar: CScalar,
    d: &Deformation,
) -> Result<OperatorMatrix> {
    let h = d.sqrt_q();
    let n = basis.dim();
    let lhs = &m_plus.data * &n_minus.data / re(h) - &n_minus.data * &m_plus.data * re(h);
    let data = (lhs - Mat::identity(n, n) * (c_scalar * d.delta())) / re(d.bracket(2.0));
    let op = OperatorMatrix::new(data, Some(Selection::new(&[-1, 0, 1], &[0])));
    let scale = m_plus.data.norm() * n_minus.data.norm() + c_scalar.norm();
    let bad = op.selection_violation(basis);
    if bad > SELECTION_TOL * scale.max(1.0) {
        return Err(Error::ConstructionInconsistency(format!(
            "derived N3_tilde has a forbidden entry of size {bad:e}"
        )));
    }
    Ok(op)
}

/// `2C = (M₊N₋q^{-1/2} - N₋M₊q^{1/2} + M₋N₊q^{-1/2} - N₊M₋q^{1/2}) / (q^{1/2} - q^{-1/2})`.
pub fn build_casimir_matrix(
    m_plus: &OperatorMatrix,
    m_minus: &OperatorMatrix,
    n_plus: &OperatorMatrix,
    n_minus: &OperatorMatrix,
    d: &Deformation,
) -> OperatorMatrix {
    let (h, hi) = (re(d.sqrt_q()), re(1.0 / d.sqrt_q()));
    let (mp, mm, np, nm) = (&m_plus.data, &m_minus.data, &n_plus.data, &n_minus.data);
    let num = mp * nm * hi - nm * mp * h + mm * np * hi - np * mm * h;
    OperatorMatrix::new(num / re(2.0 * d.delta()), Some(Selection::new(&[-1, 0, 1], &[0])))
}

/// Every generator of the representation `label`, truncated at `j_max` when
/// infinite-dimensional.
pub fn build_generators(label: &RepLabel, j_max: HalfInt, conv: ConventionId) -> Result<GeneratorSet> {
    let basis = build_basis(label, j_max)?;
    let d = label.d;
    let (m_plus, m_minus, m3) = build_m(&basis, &d);
    let (n_plus, n_minus, n3) = build_n(&basis, label, conv)?;
    let c_scalar = casimir_eigenvalue(label);
    let n3_tilde = build_n3_tilde(&basis, &m_plus, &n_minus, c_scalar, &d)?;
    let casimir = build_casimir_matrix(&m_plus, &m_minus, &n_plus, &n_minus, &d);
    Ok(GeneratorSet {
        basis,
        m_plus,
        m_minus,
        m3,
        n_plus,
        n_minus,
        n3,
        n3_tilde,
        casimir,
        c_scalar,
        d: Some(d),
        origin: Origin::Label(*label),
        convention: conv,
    })
}

/// Standard spin-`j` matrices `m±|j,m⟩ = [j∓m]^{1/2}[j±m+1]^{1/2}|j,m±1⟩`.
pub fn standard_su_q2(spin: HalfInt, d: &Deformation) -> Result<Su2Generators> {
    let basis = Basis::single(spin)?;
    let n = basis.dim();
    let one = HalfInt::ONE;
    let mut plus = OperatorMatrix::zeros(n, Selection::new(&[0], &[1]));
    let mut minus = OperatorMatrix::zeros(n, Selection::new(&[0], &[-1]));
    for (k, j, m) in basis.states() {
        if let Some(t) = basis.index(j, m + one) {
            plus.data[(t, k)] = re(root(d, j - m) * root(d, j + m + one));
        }
        if let Some(t) = basis.index(j, m - one) {
            minus.data[(t, k)] = re(root(d, j + m) * root(d, j - m + one));
        }
    }
    let m3 = spectral(&basis, |m| re(m.to_f64()));
    Ok(Su2Generators { basis, plus, minus, m3 })
}

/// The spin-`j` realization: `M± = q^{-1/4} m± q^{∓m₃/2}`, `N± = -i M±`,
/// `N₃ = -i[m₃]q^{-m₃/2}`, `Ñ₃ = -i[m₃]q^{m₃/2}`.
///
/// These matrices coincide with the finite label `(j, j+1)`, whose Casimir
/// value `i[j][j+1]` is used as the scalar.
pub fn build_from_suq2(spin: HalfInt, d: &Deformation) -> Result<GeneratorSet> {
    if spin < HalfInt::HALF {
        return Err(Error::InvalidArgument(format!("realization spin must be >= 1/2, got {spin}")));
    }
    let su = standard_su_q2(spin, d)?;
    let basis = su.basis.clone();
    let quarter = re(d.pow(-0.25));
    let down = spectral(&basis, |m| re(d.pow(-0.5 * m.to_f64())));
    let up = spectral(&basis, |m| re(d.pow(0.5 * m.to_f64())));
    let m_plus = OperatorMatrix::new(&su.plus.data * &down.data * quarter, su.plus.selection.clone());
    let m_minus = OperatorMatrix::new(&su.minus.data * &up.data * quarter, su.minus.selection.clone());
    // Same declared bands as label-built boosts, so exports look alike.
    let band = |dm: i64| Some(Selection::new(&[-1, 0, 1], &[dm]));
    let n_plus = OperatorMatrix::new(&m_plus.data * -I, band(1));
    let n_minus = OperatorMatrix::new(&m_minus.data * -I, band(-1));
    let mut n3 = spectral(&basis, |m| -I * d.bracket_half(m) * d.pow(-0.5 * m.to_f64()));
    let mut n3_tilde = spectral(&basis, |m| -I * d.bracket_half(m) * d.pow(0.5 * m.to_f64()));
    n3.selection = band(0);
    n3_tilde.selection = band(0);
    let casimir = build_casimir_matrix(&m_plus, &m_minus, &n_plus, &n_minus, d);
    let c_scalar = I * d.bracket_half(spin) * d.bracket_half(spin + HalfInt::ONE);
    Ok(GeneratorSet {
        basis,
        m_plus,
        m_minus,
        m3: su.m3,
        n_plus,
        n_minus,
        n3,
        n3_tilde,
        casimir,
        c_scalar,
        d: Some(*d),
        origin: Origin::Realization { spin },
        convention: ConventionId::default(),
    })
}

/// The q-vector operators
/// `S± = ±q^{∓x} M± q^{-M₃/2}`, `S₀ = [2]^{-1/2}(q^{-1/2}M₋M₊ - q^{1/2}M₊M₋)` and
/// `T± = ±q^{±x} M± q^{M₃/2}`, `T₀ = [2]^{-1/2}(q^{1/2}M₋M₊ - q^{-1/2}M₊M₋)`.
pub fn build_st_vectors(
    spin: HalfInt,
    d: &Deformation,
    conv: ConventionId,
) -> Result<(TensorOperator, TensorOperator)> {
    let su = standard_su_q2(spin, d)?;
    let (gp, gm) = match conv.get(Axis::VectorForm) {
        0 => (su.plus.data.clone(), su.minus.data.clone()),
        _ => {
            let real = build_from_suq2(spin, d)?;
            (real.m_plus.data, real.m_minus.data)
        }
    };
    let x = match conv.get(Axis::VectorExponent) {
        0 => 0.25,
        1 => 0.5,
        2 => 0.0,
        _ => 1.0,
    };
    let basis = &su.basis;
    let down = spectral(basis, |m| re(d.pow(-0.5 * m.to_f64()))).data;
    let up = spectral(basis, |m| re(d.pow(0.5 * m.to_f64()))).data;
    let norm0 = re(1.0 / d.bracket(2.0).sqrt());
    let (h, hi) = (re(d.sqrt_q()), re(1.0 / d.sqrt_q()));
    let mp = &gm * &gp;
    let pm = &gp * &gm;
    let op = |data: Mat, dm: i64| OperatorMatrix::new(data, Some(Selection::new(&[0], &[dm])));

    let s = vec![
        op(&gm * &down * re(-d.pow(x)), -1),
        op((&mp * hi - &pm * h) * norm0, 0),
        op(&gp * &down * re(d.pow(-x)), 1),
    ];
    let t = vec![
        op(&gm * &up * re(-d.pow(-x)), -1),
        op((&mp * h - &pm * hi) * norm0, 0),
        op(&gp * &up * re(d.pow(x)), 1),
    ];
    Ok((TensorOperator::new(HalfInt::ONE, s)?, TensorOperator::new(HalfInt::ONE, t)?))
}

/// Kronecker product `A ⊗ B`.
pub fn tensor_embed(a: &OperatorMatrix, b: &OperatorMatrix) -> OperatorMatrix {
    OperatorMatrix::new(a.data.kronecker(&b.data), None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(t: i64) -> HalfInt {
        HalfInt::from_twice(t)
    }

    fn label(l0: i64, re_: f64, im: f64, q: f64) -> RepLabel {
        RepLabel::new(h(l0), CScalar::new(re_, im), Deformation::new(q).unwrap()).unwrap()
    }

    fn max_abs(m: &Mat) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn basis_examples() {
        assert_eq!(build_basis(&label(1, 1.5, 0.0, 1.3), h(20)).unwrap().dim(), 2);
        let b = build_basis(&label(0, 2.0, 0.0, 1.3), h(0)).unwrap();
        assert_eq!((b.dim(), b.truncated()), (4, false));
        let b = build_basis(&label(0, 0.0, 2.7, 1.3), h(10)).unwrap();
        assert_eq!((b.dim(), b.truncated()), (36, true));
        assert!(build_basis(&label(2, 0.0, 2.7, 1.3), h(0)).is_err());
        assert!(build_basis(&label(2, 0.0, 2.7, 1.3), h(3)).is_err());
    }

    #[test]
    fn m_examples() {
        let d = Deformation::new(1.3).unwrap();
        let b = Basis::single(h(1)).unwrap();
        let (mp, mm, m3) = build_m(&b, &d);
        assert!((mp.data[(1, 0)] - re(1.0)).norm() < 1e-15);
        assert_eq!(mp.data[(0, 1)], re(0.0));
        assert_eq!(m3.data[(0, 0)], re(-0.5));
        assert!(mm.data[(0, 1)].norm() > 0.0);

        let d = Deformation::new(1.0 + 1e-9).unwrap();
        let b = Basis::single(h(4)).unwrap();
        let (mp, _, _) = build_m(&b, &d);
        for (k, j, m) in b.states() {
            if let Some(t) = b.index(j, m + HalfInt::ONE) {
                let (jf, mf) = (j.to_f64(), m.to_f64());
                let classical = ((jf - mf) * (jf + mf + 1.0)).sqrt();
                assert!((mp.data[(t, k)].re - classical).abs() < 1e-7);
            }
        }
    }

    #[test]
    fn finite_spinor_boosts_follow_rotations() {
        let lab = label(1, 1.5, 0.0, 1.3);
        let b = build_basis(&lab, h(1)).unwrap();
        let (mp, mm, _) = build_m(&b, &lab.d);
        let (np, nm, _) = build_n(&b, &lab, ConventionId::default()).unwrap();
        let a = coeff_a(h(1), &lab).unwrap();
        assert!(max_abs(&(&np.data + &mp.data * a)) < 1e-15);
        assert!(max_abs(&(&nm.data + &mm.data * a)) < 1e-15);
    }

    #[test]
    fn n3_on_ground_state() {
        let lab = label(0, 0.0, 2.7, 1.3);
        let b = build_basis(&lab, h(4)).unwrap();
        let (_, _, n3) = build_n(&b, &lab, ConventionId::default()).unwrap();
        let c1 = coeff_c(h(2), &lab).unwrap();
        let col = n3.data.column(0);
        let target = b.index(h(2), h(0)).unwrap();
        for (r, z) in col.iter().enumerate() {
            if r == target {
                assert!((*z + c1).norm() < 1e-15);
            } else {
                assert_eq!(*z, re(0.0));
            }
        }
    }

    #[test]
    fn selection_rules_are_exact() {
        for lab in [label(0, 0.0, 2.7, 1.3), label(1, 1.5, 0.0, 0.7), label(2, 3.0, 0.0, 2.0)] {
            let g = build_generators(&lab, lab.l0 + HalfInt::from_int(5), ConventionId::default()).unwrap();
            for (name, m) in g.generators() {
                assert_eq!(m.selection_violation(&g.basis), 0.0, "{name}");
            }
        }
    }

    #[test]
    fn derived_tilde_matches_direct_formula() {
        for lab in [label(0, 0.0, 2.7, 1.3), label(2, 0.5, 0.0, 0.7), label(1, 2.5, 0.0, 2.0)] {
            let g = build_generators(&lab, lab.l0 + HalfInt::from_int(5), ConventionId::default()).unwrap();
            let direct = n3_tilde_direct(&g.basis, &lab).unwrap();
            let diff = &g.n3_tilde.data - &direct.data;
            for c in g.basis.interior_columns(1) {
                assert!(diff.column(c).norm() < 1e-12 * g.n3_tilde.data.norm(), "{lab:?}");
            }
        }
    }

    #[test]
    fn finite_tilde_is_diagonal() {
        let lab = label(1, 1.5, 0.0, 1.3);
        let g = build_generators(&lab, h(1), ConventionId::default()).unwrap();
        assert!(g.n3_tilde.data[(0, 1)].norm() < 1e-15 && g.n3_tilde.data[(1, 0)].norm() < 1e-15);
    }

    #[test]
    fn realization_matches_label_j_j_plus_one() {
        let d = Deformation::new(1.3).unwrap();
        for tj in 1..=5 {
            let spin = h(tj);
            let real = build_from_suq2(spin, &d).unwrap();
            let lab = RepLabel::new(spin, re((spin + HalfInt::ONE).to_f64()), d).unwrap();
            let g = build_generators(&lab, spin, ConventionId::default()).unwrap();
            for ((name, a), (_, b)) in real.generators().iter().zip(g.generators().iter()) {
                assert!(max_abs(&(&a.data - &b.data)) < 1e-13, "spin {spin}: {name}");
            }
            assert!((real.c_scalar - g.c_scalar).norm() < 1e-14);
        }
    }

    #[test]
    fn zero_boosts_give_zero_casimir() {
        let d = Deformation::new(1.3).unwrap();
        let b = Basis::single(h(2)).unwrap();
        let (mp, mm, _) = build_m(&b, &d);
        let z = OperatorMatrix::zeros(3, Selection::diagonal());
        let c = build_casimir_matrix(&mp, &mm, &z, &z, &d);
        assert_eq!(max_abs(&c.data), 0.0);
    }

    #[test]
    fn vectors_kill_highest_weight() {
        let d = Deformation::new(1.3).unwrap();
        let (s, t) = build_st_vectors(h(2), &d, ConventionId::default()).unwrap();
        let top = 2;
        for v in [&s, &t] {
            let plus = v.component(HalfInt::ONE).unwrap();
            assert!(plus.data.column(top).norm() < 1e-15);
        }
    }

    #[test]
    fn s0_classical_limit_is_proportional_to_m3() {
        let d = Deformation::new(1.0 + 1e-8).unwrap();
        let (s, _) = build_st_vectors(h(1), &d, ConventionId::default()).unwrap();
        let s0 = &s.component(HalfInt::ZERO).unwrap().data;
        let expect = -2.0f64.sqrt();
        assert!((s0[(0, 0)].re / -0.5 - expect).abs() < 1e-6);
        assert!((s0[(1, 1)].re / 0.5 - expect).abs() < 1e-6);
        assert!(s0[(0, 1)].norm() < 1e-15);
    }

    #[test]
    fn tensor_embed_properties() {
        let a = OperatorMatrix::new(
            Mat::from_fn(2, 2, |r, c| CScalar::new(r as f64 + 1.0, c as f64)),
            None,
        );
        let b = OperatorMatrix::new(Mat::from_fn(3, 3, |r, c| CScalar::new((r * c) as f64, 1.0)), None);
        let i2 = OperatorMatrix::identity(2);
        let i3 = OperatorMatrix::identity(3);
        assert_eq!(tensor_embed(&i2, &i3).data, Mat::identity(6, 6));
        assert_eq!(tensor_embed(&a, &b).dim(), 6);
        let lhs = tensor_embed(&a, &i3).data * tensor_embed(&i2, &b).data;
        assert!(max_abs(&(lhs - tensor_embed(&a, &b).data)) < 1e-14);
    }
}
