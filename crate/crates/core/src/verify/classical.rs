//! Undeformed Lorentz representations from the Gelfand–Naimark matrix
//! elements, written out independently of the q-builders.

use super::{column_residual, op_norm, re, scale, RelationResidual, Tier, Tolerances, VerificationReport, I};
use crate::error::{Error, Result};
use crate::matrep::{
    build_generators, export::label_json, Basis, ConventionId, GeneratorSet, Mat, OperatorMatrix,
    Origin, Selection,
};
use crate::qarith::{sqrt_principal, CScalar, Deformation, HalfInt};
use crate::repcore::RepLabel;
use crate::report::Json;

fn classical_basis(l0: HalfInt, l1: CScalar, j_max: HalfInt) -> Result<Basis> {
    let r = l1.norm();
    if l1.im.abs() <= 1e-9 * r.max(1.0) {
        let steps = r - l0.to_f64();
        if steps >= 1.0 - 1e-9 && (steps - steps.round()).abs() <= 1e-9 {
            let top = l0 + HalfInt::from_int(steps.round() as i64 - 1);
            return Basis::ladder(l0, top, false);
        }
    }
    if j_max < l0 || !j_max.same_parity(l0) {
        return Err(Error::InvalidArgument(format!("j_max = {j_max} incompatible with l0 = {l0}")));
    }
    Basis::ladder(l0, j_max, true)
}

/// `a_j = i l₀l₁/(j(j+1))`, `c_j = (i/j)√((j²-l₀²)(j²-l₁²)/(4j²-1))`.
fn coefficients(j: f64, l0: f64, l1: CScalar) -> (CScalar, CScalar) {
    if j == 0.0 {
        return (CScalar::new(0.0, 0.0), CScalar::new(0.0, 0.0));
    }
    let a = I * l0 * l1 / (j * (j + 1.0));
    let num = (j * j - l0 * l0) * (l1 * -l1 + j * j);
    let c = if num == CScalar::new(0.0, 0.0) {
        num
    } else {
        I / j * sqrt_principal(num / (4.0 * j * j - 1.0))
    };
    (a, c)
}

fn sq(x: f64) -> f64 {
    x.max(0.0).sqrt()
}

/// Classical generators on spins `l₀..` (complete for finite labels,
/// truncated at `j_max` otherwise). `Ñ₃ = N₃`, and the Casimir matrix is
/// `-(½(M₊N₋ + M₋N₊) + M₃N₃)` with expected value `i l₀ l₁`.
pub fn classical_oracle(l0: HalfInt, l1: CScalar, j_max: HalfInt) -> Result<GeneratorSet> {
    let basis = classical_basis(l0, l1, j_max)?;
    let n = basis.dim();
    let l0f = l0.to_f64();
    let band = [-1, 0, 1];
    let mut mp = OperatorMatrix::zeros(n, Selection::new(&[0], &[1]));
    let mut mm = OperatorMatrix::zeros(n, Selection::new(&[0], &[-1]));
    let mut m3 = OperatorMatrix::zeros(n, Selection::diagonal());
    let mut np = OperatorMatrix::zeros(n, Selection::new(&band, &[1]));
    let mut nm = OperatorMatrix::zeros(n, Selection::new(&band, &[-1]));
    let mut n3 = OperatorMatrix::zeros(n, Selection::new(&band, &[0]));
    let one = HalfInt::ONE;
    for (k, j, m) in basis.states() {
        let (jf, mf) = (j.to_f64(), m.to_f64());
        let (a, c) = coefficients(jf, l0f, l1);
        let (_, c1) = coefficients(jf + 1.0, l0f, l1);
        m3.data[(k, k)] = re(mf);
        for (s, mat, nat) in [(1.0, &mut mp, &mut np), (-1.0, &mut mm, &mut nm)] {
            let step = HalfInt::from_int(s as i64);
            let sm = s * mf;
            if let Some(t) = basis.index(j, m + step) {
                let e = sq((jf - sm) * (jf + sm + 1.0));
                mat.data[(t, k)] = re(e);
                nat.data[(t, k)] -= a * e;
            }
            if let Some(t) = basis.index(j - one, m + step) {
                nat.data[(t, k)] += c * s * sq((jf - sm) * (jf - sm - 1.0));
            }
            if let Some(t) = basis.index(j + one, m + step) {
                nat.data[(t, k)] += c1 * s * sq((jf + sm + 1.0) * (jf + sm + 2.0));
            }
        }
        if let Some(t) = basis.index(j - one, m) {
            n3.data[(t, k)] += c * sq((jf - mf) * (jf + mf));
        }
        n3.data[(k, k)] -= a * mf;
        if let Some(t) = basis.index(j + one, m) {
            n3.data[(t, k)] -= c1 * sq((jf + mf + 1.0) * (jf - mf + 1.0));
        }
    }
    let cas = -((&mp.data * &nm.data + &mm.data * &np.data) * re(0.5) + &m3.data * &n3.data);
    Ok(GeneratorSet {
        basis,
        n3_tilde: n3.clone(),
        casimir: OperatorMatrix::new(cas, Some(Selection::new(&band, &[0]))),
        m_plus: mp,
        m_minus: mm,
        m3,
        n_plus: np,
        n_minus: nm,
        n3,
        c_scalar: I * l0f * l1,
        d: None,
        origin: Origin::Classical { l0, l1 },
        convention: ConventionId::default(),
    })
}

/// Lie brackets of the undeformed algebra, written as the `q → 1` form of
/// the deformed relations, and the Casimir value.
pub fn check_classical_relations(gens: &GeneratorSet, tol: &Tolerances) -> VerificationReport {
    let (mp, mm, m3) = (&gens.m_plus.data, &gens.m_minus.data, &gens.m3.data);
    let (np, nm, n3) = (&gens.n_plus.data, &gens.n_minus.data, &gens.n3.data);
    let comm = |a: &Mat, b: &Mat| a * b - b * a;
    let cols = gens.basis.interior_columns(2);
    let desc = gens.basis.describe_columns(2);
    let mut rep = VerificationReport::new(label_json(gens));
    let cases: [(&str, Mat, f64); 13] = [
        ("cl.m_plus_m_minus", comm(mp, mm) - m3 * re(2.0), op_norm(mp) * op_norm(mm)),
        ("cl.m3_m_plus", comm(m3, mp) - mp, op_norm(m3) * op_norm(mp)),
        ("cl.m3_m_minus", comm(m3, mm) + mm, op_norm(m3) * op_norm(mm)),
        ("cl.n_plus_n_minus", comm(np, nm) + m3 * re(2.0), op_norm(np) * op_norm(nm)),
        ("cl.m3_n_plus", comm(m3, np) - np, op_norm(m3) * op_norm(np)),
        ("cl.m3_n_minus", comm(m3, nm) + nm, op_norm(m3) * op_norm(nm)),
        ("cl.m_plus_n_minus", comm(mp, nm) - n3 * re(2.0), op_norm(mp) * op_norm(nm)),
        ("cl.m_minus_n_plus", comm(mm, np) + n3 * re(2.0), op_norm(mm) * op_norm(np)),
        ("cl.m_plus_n3", comm(mp, n3) + np, op_norm(mp) * op_norm(n3)),
        ("cl.m_minus_n3", comm(mm, n3) - nm, op_norm(mm) * op_norm(n3)),
        ("cl.n3_n_plus", comm(n3, np) + mp, op_norm(n3) * op_norm(np)),
        ("cl.n3_n_minus", comm(n3, nm) - mm, op_norm(n3) * op_norm(nm)),
        ("cl.m3_n3", comm(m3, n3), op_norm(m3) * op_norm(n3)),
    ];
    for (id, diff, sc) in cases {
        rep.push(RelationResidual::new(id, Tier::One, column_residual(&diff, &cols), scale(&[sc]), tol.tier1, &desc));
    }
    let n = gens.basis.dim();
    let c = &gens.casimir.data;
    rep.push(RelationResidual::new(
        "cl.casimir",
        Tier::One,
        column_residual(&(c - Mat::identity(n, n) * gens.c_scalar), &gens.basis.interior_columns(1)),
        scale(&[op_norm(c), gens.c_scalar.norm()]),
        tol.tier1,
        &gens.basis.describe_columns(1),
    ));
    rep.sort();
    rep
}

/// Entrywise distance between the q-built generators at `q = 1 + ε` and the
/// classical oracle, at `ε` and `ε/10`.
#[derive(Clone, Debug)]
pub struct LimitComparison {
    pub deviation: f64,
    pub deviation_tenth: f64,
    /// `deviation / deviation_tenth`; close to 10 for first-order behaviour.
    pub ratio: f64,
    /// Per-generator deviation at `ε`.
    pub per_generator: Vec<(&'static str, f64)>,
    pub report: VerificationReport,
}

fn deviation(label: &RepLabel, j_max: HalfInt, eps: f64, oracle: &GeneratorSet) -> Result<Vec<(&'static str, f64)>> {
    let g = build_generators(&label.with_deformation(Deformation::new(1.0 + eps)?), j_max, ConventionId::default())?;
    if g.basis != oracle.basis {
        return Err(Error::ConstructionInconsistency("deformed and classical bases differ".into()));
    }
    let cols = g.basis.interior_columns(1);
    Ok(g.generators()
        .iter()
        .zip(oracle.generators().iter())
        .map(|((name, a), (_, b))| {
            let diff = &a.data - &b.data;
            let worst = cols
                .iter()
                .flat_map(|&c| diff.column(c).iter().map(|z| z.norm()).collect::<Vec<_>>())
                .fold(0.0, f64::max);
            (*name, worst)
        })
        .collect())
}

/// `gate` is the tolerance on the deviation at `ε`; the linear-scaling
/// relation passes when the deviation shrinks at least threefold at `ε/10`.
pub fn classical_limit_compare(label: &RepLabel, j_max: HalfInt, eps: f64, gate: f64) -> Result<LimitComparison> {
    if !(eps > 0.0 && eps <= 1e-3) {
        return Err(Error::InvalidArgument(format!("eps must lie in (0, 1e-3], got {eps}")));
    }
    let oracle = classical_oracle(label.l0, label.l1, j_max)?;
    let per_generator = deviation(label, j_max, eps, &oracle)?;
    let tenth = deviation(label, j_max, eps / 10.0, &oracle)?;
    let dev = per_generator.iter().map(|p| p.1).fold(0.0, f64::max);
    let dev10 = tenth.iter().map(|p| p.1).fold(0.0, f64::max);
    let ratio = dev / dev10;
    let cols = oracle.basis.describe_columns(1);
    let mut report = VerificationReport::new(
        Json::obj()
            .with("kind", "limit")
            .with("l0", label.l0.to_string())
            .with("l1", Json::Arr(vec![label.l1.re.into(), label.l1.im.into()]))
            .with("j_max", oracle.basis.highest().to_string()),
    );
    report.env("eps", eps);
    report.push(RelationResidual::new("limit.deviation", Tier::Two, dev, 1.0, gate, &cols));
    // Passes when 3·dev(ε/10) <= dev(ε); the tolerance field carries dev(ε).
    report.push(RelationResidual::new("limit.linear", Tier::Two, 3.0 * dev10, 1.0, dev, &cols));
    for (name, v) in &per_generator {
        report.metric(&format!("limit.deviation.{name}"), *v);
    }
    report.metric("limit.deviation_tenth", dev10);
    report.metric("limit.ratio", ratio);
    report.sort();
    Ok(LimitComparison { deviation: dev, deviation_tenth: dev10, ratio, per_generator, report })
}
