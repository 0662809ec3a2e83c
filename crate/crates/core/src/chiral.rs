//! Chiral generators `I^{L,R}`, their algebra and adjoint, the shifted
//! diagonal generators and the coproduct on tensor products.

use crate::error::{Error, Result};
use crate::matrep::{build_generators, export::label_json, Axis, Basis, ConventionId, GeneratorSet, Mat, Origin};
use crate::qarith::{CScalar, Deformation, HalfInt};
use crate::repcore::{classify, RepLabel};
use crate::report::Json;
use crate::verify::{
    column_residual, diag_fn, max_abs, op_norm, re, scale, RelationResidual, Tier, Tolerances,
    VerificationReport, I,
};

/// `I±^{L,R} = M± ± iN±`, `I₃^{L,R} = [M₃]q^{-M₃/2} ± iN₃`,
/// `Ĩ₃^{L,R} = [M₃]q^{M₃/2} ± iÑ₃` and the shifted `T₃`, `T̃₃`.
#[derive(Clone, Debug)]
pub struct ChiralSet {
    pub i_plus_l: Mat,
    pub i_minus_l: Mat,
    pub i3_l: Mat,
    pub i3_l_tilde: Mat,
    pub i_plus_r: Mat,
    pub i_minus_r: Mat,
    pub i3_r: Mat,
    pub i3_r_tilde: Mat,
    pub t3_l: Mat,
    pub t3_l_tilde: Mat,
    pub t3_r: Mat,
    pub t3_r_tilde: Mat,
    /// `k` in `T₃ = 2k - kδI₃`, `T̃₃ = 2k + kδĨ₃`; 1 for the literal shift.
    pub shift: f64,
    pub d: Deformation,
    /// `None` on tensor products.
    pub basis: Option<Basis>,
    pub m3: Option<Mat>,
    pub tier: Tier,
    pub input: Json,
}

impl ChiralSet {
    pub fn dim(&self) -> usize {
        self.i3_l.nrows()
    }

    /// `(I₊, I₋, I₃, Ĩ₃)` of one chirality.
    fn side(&self, left: bool) -> [&Mat; 4] {
        if left {
            [&self.i_plus_l, &self.i_minus_l, &self.i3_l, &self.i3_l_tilde]
        } else {
            [&self.i_plus_r, &self.i_minus_r, &self.i3_r, &self.i3_r_tilde]
        }
    }

    fn columns(&self, depth: u32) -> (Vec<usize>, String) {
        match &self.basis {
            Some(b) => (b.interior_columns(depth), b.describe_columns(depth)),
            None => ((0..self.dim()).collect(), "all".into()),
        }
    }

    /// Largest operator norm of `I₊, I₋, I₃` on one side.
    pub fn triple_norm(&self, left: bool) -> f64 {
        self.side(left)[..3].iter().map(|m| op_norm(m)).fold(0.0, f64::max)
    }
}

fn shifted(i3: &Mat, i3_tilde: &Mat, k: f64, d: &Deformation) -> (Mat, Mat) {
    let n = i3.nrows();
    let one = Mat::identity(n, n) * re(2.0 * k);
    (&one - i3 * re(k * d.delta()), &one + i3_tilde * re(k * d.delta()))
}

pub fn build_chiral(gens: &GeneratorSet) -> Result<ChiralSet> {
    let d = gens.d.ok_or_else(|| Error::InvalidArgument("chiral generators need q != 1".into()))?;
    let m3 = &gens.m3.data;
    let down = diag_fn(m3, |m| re(d.bracket(m) * d.pow(-m / 2.0)));
    let up = diag_fn(m3, |m| re(d.bracket(m) * d.pow(m / 2.0)));
    let (mp, mm) = (&gens.m_plus.data, &gens.m_minus.data);
    let (np, nm) = (&gens.n_plus.data * I, &gens.n_minus.data * I);
    let (n3, nt) = (&gens.n3.data * I, &gens.n3_tilde.data * I);
    let (i3_l, i3_l_tilde) = (&down + &n3, &up + &nt);
    let (i3_r, i3_r_tilde) = (&down - &n3, &up - &nt);
    let (t3_l, t3_l_tilde) = shifted(&i3_l, &i3_l_tilde, 1.0, &d);
    let (t3_r, t3_r_tilde) = shifted(&i3_r, &i3_r_tilde, 1.0, &d);
    Ok(ChiralSet {
        i_plus_l: mp + &np,
        i_minus_l: mm + &nm,
        i_plus_r: mp - &np,
        i_minus_r: mm - &nm,
        i3_l,
        i3_l_tilde,
        i3_r,
        i3_r_tilde,
        t3_l,
        t3_l_tilde,
        t3_r,
        t3_r_tilde,
        shift: 1.0,
        d,
        basis: Some(gens.basis.clone()),
        m3: Some(m3.clone()),
        tier: match gens.origin {
            Origin::Realization { .. } => Tier::One,
            _ => Tier::Two,
        },
        input: label_json(gens),
    })
}

fn chiral_relations(cs: &ChiralSet, tol: &Tolerances, prefix: &str, rep: &mut VerificationReport) {
    let (h, hi) = (re(cs.d.sqrt_q()), re(1.0 / cs.d.sqrt_q()));
    let (cols, desc) = cs.columns(2);
    let tier = cs.tier;
    let nr = op_norm;
    for (side, left) in [("l", true), ("r", false)] {
        let [p, m, i3, it] = cs.side(left);
        let lines: [(Mat, f64); 5] = [
            (p * m - m * p - (i3 + it) * re(2.0), scale(&[nr(p) * nr(m), 2.0 * nr(i3), 2.0 * nr(it)])),
            (i3 * p * h - p * i3 * hi - p * re(2.0), scale(&[nr(i3) * nr(p) * h.re, 2.0 * nr(p)])),
            (it * m * h - m * it * hi + m * re(2.0), scale(&[nr(it) * nr(m) * h.re, 2.0 * nr(m)])),
            (it * p * hi - p * it * h - p * re(2.0), scale(&[nr(it) * nr(p) * h.re, 2.0 * nr(p)])),
            (i3 * m * hi - m * i3 * h + m * re(2.0), scale(&[nr(i3) * nr(m) * h.re, 2.0 * nr(m)])),
        ];
        for (k, (diff, sc)) in lines.into_iter().enumerate() {
            rep.push(RelationResidual::new(
                &format!("{prefix}.{side}.line{}", k + 1),
                tier,
                column_residual(&diff, &cols),
                sc,
                tol.for_tier(tier),
                &desc,
            ));
        }
    }
    let (mut worst, mut sc) = (0.0f64, 1.0f64);
    for a in cs.side(true) {
        for b in cs.side(false) {
            worst = worst.max(column_residual(&(a * b - b * a), &cols));
            sc = sc.max(nr(a) * nr(b));
        }
    }
    rep.push(RelationResidual::new(&format!("{prefix}.lr_commute"), tier, worst, sc, tol.for_tier(tier), &desc));
}

/// The five lines per chirality and the left/right commutators.
pub fn check_chiral_relations(cs: &ChiralSet, tol: &Tolerances) -> VerificationReport {
    let mut rep = VerificationReport::new(cs.input.clone());
    chiral_relations(cs, tol, "eq27", &mut rep);
    rep.sort();
    rep
}

/// `1 + α(Ĩ₃^L + Ĩ₃^R) = (1 - α(I₃^L + I₃^R))⁻¹` and
/// `Ĩ₃^L - Ĩ₃^R = (1 + α(Ĩ₃^L + Ĩ₃^R))(I₃^L - I₃^R)`, plus the spectral
/// forms `q^{∓M₃}` of both factors when `M₃` is known. A singular factor
/// fails the first line rather than erroring.
pub fn check_reduction_identities(cs: &ChiralSet, tol: &Tolerances) -> VerificationReport {
    let n = cs.dim();
    let one = Mat::identity(n, n);
    let alpha = re(cs.d.alpha());
    let sigma = &one - (&cs.i3_l + &cs.i3_r) * alpha;
    let tau = &one + (&cs.i3_l_tilde + &cs.i3_r_tilde) * alpha;
    let (cols, desc) = cs.columns(1);
    let mut rep = VerificationReport::new(cs.input.clone());
    let mut add = |id: &str, diff: Mat, sc: f64| {
        rep.push(RelationResidual::new(id, Tier::One, column_residual(&diff, &cols), sc, tol.tier1, &desc));
    };

    let sv = sigma.singular_values();
    let cond = sv.max() / sv.min();
    match sigma.clone().try_inverse() {
        Some(inv) if cond.is_finite() => {
            let sc = scale(&[op_norm(&tau), op_norm(&inv)]);
            add("eq28.line1", &tau - inv, sc);
        }
        _ => add("eq28.line1", Mat::from_element(n, n, re(f64::INFINITY)), 1.0),
    }
    add("eq28.line1_product", &tau * &sigma - &one, scale(&[op_norm(&tau) * op_norm(&sigma)]));
    let lhs = &cs.i3_l_tilde - &cs.i3_r_tilde;
    let diff3 = &cs.i3_l - &cs.i3_r;
    add("eq28.line2", &lhs - &tau * &diff3, scale(&[op_norm(&lhs), op_norm(&tau) * op_norm(&diff3)]));
    if let Some(m3) = &cs.m3 {
        let d = cs.d;
        add("eq28.spectral.minus", &sigma - diag_fn(m3, |m| re(d.pow(-m))), scale(&[op_norm(&sigma)]));
        add("eq28.spectral.plus", &tau - diag_fn(m3, |m| re(d.pow(m))), scale(&[op_norm(&tau)]));
    }
    rep.metric("eq28.condition", cond);
    rep.sort();
    rep
}

/// `I±^L(q)† = I∓^R(1/q)`, `I₃^L† = I₃^R`, `Ĩ₃^L† = Ĩ₃^R`. Tier-1 for
/// unitary labels.
pub fn check_chiral_adjoint(
    label: &RepLabel,
    j_max: HalfInt,
    conv: ConventionId,
    tol: &Tolerances,
) -> Result<VerificationReport> {
    let g = build_generators(label, j_max, conv)?;
    let gi = build_generators(&label.inverted(), j_max, conv)?;
    let (c, ci) = (build_chiral(&g)?, build_chiral(&gi)?);
    let tier = if classify(label).is_unitary() { Tier::One } else { Tier::Two };
    let (cols, desc) = c.columns(1);
    let mut rep = VerificationReport::new(c.input.clone());
    rep.convention = Some(conv);
    for (id, a, b) in [
        ("eq29.plus", &c.i_plus_l, &ci.i_minus_r),
        ("eq29.minus", &c.i_minus_l, &ci.i_plus_r),
        ("eq29.i3", &c.i3_l, &c.i3_r),
        ("eq29.i3_tilde", &c.i3_l_tilde, &c.i3_r_tilde),
    ] {
        rep.push(RelationResidual::new(
            id,
            tier,
            column_residual(&(a.adjoint() - b), &cols),
            scale(&[op_norm(a), op_norm(b)]),
            tol.for_tier(tier),
            &desc,
        ));
    }
    rep.sort();
    Ok(rep)
}

/// The two-dimensional representations `(1/2, ±3/2)`: on each, one
/// chirality triple `I₊, I₋, I₃` should vanish, and not the same one.
pub fn check_spinor_annihilation(d: &Deformation, tol: &Tolerances) -> Result<VerificationReport> {
    let mut rep = VerificationReport::new(Json::obj().with("kind", "spinors").with("q", d.q()));
    let mut vanishing = Vec::new();
    for (name, l1) in [("tau", 1.5), ("tau_tilde", -1.5)] {
        let label = RepLabel::new(HalfInt::HALF, CScalar::new(l1, 0.0), *d)?;
        let cs = build_chiral(&build_generators(&label, HalfInt::HALF, ConventionId::default())?)?;
        let (l, r) = (cs.triple_norm(true), cs.triple_norm(false));
        rep.metric(&format!("eq30.{name}.left_norm"), l);
        rep.metric(&format!("eq30.{name}.right_norm"), r);
        rep.push(RelationResidual::new(&format!("eq30.{name}.vanishing"), Tier::One, l.min(r), 1.0, tol.tier1, "all"));
        let side = if r <= l { "R" } else { "L" };
        rep.notes.push(format!("{name} (l1 = {l1}): the {side} triple vanishes"));
        vanishing.push(side);
    }
    let opposite = vanishing[0] != vanishing[1];
    rep.push(RelationResidual::new("eq30.opposite", Tier::One, if opposite { 0.0 } else { 1.0 }, 1.0, 0.0, "-"));
    rep.sort();
    Ok(rep)
}

/// `Δ` applied to the chiral generators of two factors.
#[derive(Clone, Debug)]
pub struct Coproduct {
    pub set: ChiralSet,
    pub factors: (ChiralSet, ChiralSet),
    pub convention: ConventionId,
}

fn kron(a: &Mat, b: &Mat) -> Mat {
    a.kronecker(b)
}

/// `Δ(I₊^L) = I₊^L⊗1 + T₃^L⊗I₊^L`, `Δ(I₋^L) = I₋^L⊗T̃₃^L + 1⊗I₋^L`,
/// `Δ(I₊^R) = I₊^R⊗T̃₃^R + 1⊗I₊^R`, `Δ(I₋^R) = I₋^R⊗1 + T₃^{L|R}⊗I₋^R`,
/// grouplike `T₃`, `T̃₃`, and `I₃`, `Ĩ₃` recovered from them.
pub fn coproduct(a: &ChiralSet, b: &ChiralSet, conv: ConventionId) -> Result<Coproduct> {
    if a.d != b.d {
        return Err(Error::DeformationMismatch(a.d.q(), b.d.q()));
    }
    let d = a.d;
    let k = if conv.get(Axis::ShiftNormalization) == 0 { 1.0 } else { 0.5 };
    let (na, nb) = (a.dim(), b.dim());
    let (ia, ib) = (Mat::identity(na, na), Mat::identity(nb, nb));
    let (ta_l, tta_l) = shifted(&a.i3_l, &a.i3_l_tilde, k, &d);
    let (ta_r, tta_r) = shifted(&a.i3_r, &a.i3_r_tilde, k, &d);
    let (tb_l, ttb_l) = shifted(&b.i3_l, &b.i3_l_tilde, k, &d);
    let (tb_r, ttb_r) = shifted(&b.i3_r, &b.i3_r_tilde, k, &d);
    let r_minus_t = if conv.get(Axis::CoproductRMinus) == 0 { &ta_l } else { &ta_r };

    let t3_l = kron(&ta_l, &tb_l);
    let t3_r = kron(&ta_r, &tb_r);
    let t3_l_tilde = kron(&tta_l, &ttb_l);
    let t3_r_tilde = kron(&tta_r, &ttb_r);
    let n = na * nb;
    let two = Mat::identity(n, n) * re(2.0 * k);
    let kd = re(k * d.delta());
    let set = ChiralSet {
        i_plus_l: kron(&a.i_plus_l, &ib) + kron(&ta_l, &b.i_plus_l),
        i_minus_l: kron(&a.i_minus_l, &ttb_l) + kron(&ia, &b.i_minus_l),
        i_plus_r: kron(&a.i_plus_r, &ttb_r) + kron(&ia, &b.i_plus_r),
        i_minus_r: kron(&a.i_minus_r, &ib) + kron(r_minus_t, &b.i_minus_r),
        i3_l: (&two - &t3_l) / kd,
        i3_r: (&two - &t3_r) / kd,
        i3_l_tilde: (&t3_l_tilde - &two) / kd,
        i3_r_tilde: (&t3_r_tilde - &two) / kd,
        t3_l,
        t3_l_tilde,
        t3_r,
        t3_r_tilde,
        shift: k,
        d,
        basis: None,
        m3: None,
        tier: Tier::Two,
        input: Json::obj()
            .with("kind", "coproduct")
            .with("left", a.input.clone())
            .with("right", b.input.clone()),
    };
    Ok(Coproduct { set, factors: (a.clone(), b.clone()), convention: conv })
}

/// Swap of the two tensor factors of `C^n ⊗ C^n`.
fn swap_matrix(n: usize) -> Mat {
    let mut p = Mat::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            p[(j * n + i, i * n + j)] = re(1.0);
        }
    }
    p
}

/// The chiral algebra on the `Δ` images (`eq32.eq27.*`), exact grouplike
/// equality of `Δ(T₃)`, `Δ(T̃₃)`, and the cocommutator of `Δ(I₊^L)` as a
/// metric when both factors have the same dimension.
pub fn check_coproduct_homomorphism(cp: &Coproduct, tol: &Tolerances) -> VerificationReport {
    let mut rep = VerificationReport::new(cp.set.input.clone());
    rep.convention = Some(cp.convention);
    chiral_relations(&cp.set, tol, "eq32.eq27", &mut rep);
    let (a, b) = &cp.factors;
    let k = cp.set.shift;
    let d = cp.set.d;
    let (ta_l, tta_l) = shifted(&a.i3_l, &a.i3_l_tilde, k, &d);
    let (ta_r, tta_r) = shifted(&a.i3_r, &a.i3_r_tilde, k, &d);
    let (tb_l, ttb_l) = shifted(&b.i3_l, &b.i3_l_tilde, k, &d);
    let (tb_r, ttb_r) = shifted(&b.i3_r, &b.i3_r_tilde, k, &d);
    for (id, delta, x, y) in [
        ("eq32.grouplike.t3_l", &cp.set.t3_l, &ta_l, &tb_l),
        ("eq32.grouplike.t3_l_tilde", &cp.set.t3_l_tilde, &tta_l, &ttb_l),
        ("eq32.grouplike.t3_r", &cp.set.t3_r, &ta_r, &tb_r),
        ("eq32.grouplike.t3_r_tilde", &cp.set.t3_r_tilde, &tta_r, &ttb_r),
    ] {
        rep.push(RelationResidual::new(id, Tier::One, max_abs(&(delta - kron(x, y))), 1.0, 0.0, "elementwise"));
    }
    if a.dim() == b.dim() {
        let p = swap_matrix(a.dim());
        let x = &cp.set.i_plus_l;
        let cocomm = op_norm(&(x - &p * x * &p));
        rep.metric("eq32.cocommutator", cocomm);
        rep.metric("eq32.cocommutator.relative", cocomm / scale(&[op_norm(x)]));
    }
    rep.sort();
    rep
}

/// Identity matrices in every slot, for degenerate-input checks.
pub fn trivial_set(n: usize, d: Deformation) -> ChiralSet {
    let z = Mat::zeros(n, n);
    let one = Mat::identity(n, n);
    ChiralSet {
        i_plus_l: z.clone(),
        i_minus_l: z.clone(),
        i3_l: z.clone(),
        i3_l_tilde: z.clone(),
        i_plus_r: z.clone(),
        i_minus_r: z.clone(),
        i3_r: z.clone(),
        i3_r_tilde: z,
        t3_l: &one * re(2.0),
        t3_l_tilde: &one * re(2.0),
        t3_r: &one * re(2.0),
        t3_r_tilde: &one * re(2.0),
        shift: 1.0,
        d,
        basis: None,
        m3: None,
        tier: Tier::Two,
        input: Json::obj().with("kind", "trivial").with("dim", n),
    }
}
