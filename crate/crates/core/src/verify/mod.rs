//! Relations evaluated as residuals, collected into reports.
//!
//! A residual is the largest column 2-norm of `LHS - RHS` over the columns
//! that truncation cannot reach. The scale of a relation is the largest
//! product of operator norms among its terms, floored at 1, and a relation
//! passes when `residual <= tolerance * scale`.

mod classical;
mod resolve;

pub use classical::{check_classical_relations, classical_limit_compare, classical_oracle, LimitComparison};
pub use resolve::{resolve_conventions, Resolution, ResolveTarget};

use crate::error::Result;
use crate::matrep::{
    build_from_suq2, build_generators, export::label_json, standard_su_q2, Axis,
    ConventionId, GeneratorSet, Mat, Origin, Su2Generators, TensorOperator,
};
use crate::qarith::{CScalar, Deformation, HalfInt};
use crate::repcore::{classify, coeff_a, coeff_c, RepLabel};
use crate::report::{fmt_g17, Json};

/// Tier-1 relations are guaranteed by construction and gate the exit
/// status; Tier-2 relations are measured and reported.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Tier {
    One,
    Two,
}

impl Tier {
    fn as_i64(self) -> i64 {
        match self {
            Tier::One => 1,
            Tier::Two => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub tier1: f64,
    pub tier2: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { tier1: 1e-10, tier2: 1e-10 }
    }
}

impl Tolerances {
    pub fn uniform(tol: f64) -> Self {
        Tolerances { tier1: tol, tier2: tol }
    }

    pub fn for_tier(&self, tier: Tier) -> f64 {
        match tier {
            Tier::One => self.tier1,
            Tier::Two => self.tier2,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RelationResidual {
    pub id: String,
    pub tier: Tier,
    pub residual: f64,
    pub scale: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Which columns were checked, e.g. `all` or `j <= 6`.
    pub columns: String,
}

impl RelationResidual {
    pub fn new(id: &str, tier: Tier, residual: f64, scale: f64, tolerance: f64, columns: &str) -> Self {
        let scale = if scale.is_finite() { scale.max(1.0) } else { scale };
        let pass = residual.is_finite() && scale.is_finite() && residual <= tolerance * scale;
        RelationResidual {
            id: id.to_string(),
            tier,
            residual,
            scale,
            tolerance,
            pass,
            columns: columns.to_string(),
        }
    }

    /// `residual / scale`.
    pub fn relative(&self) -> f64 {
        self.residual / self.scale
    }

    pub fn to_json(&self) -> Json {
        Json::obj()
            .with("id", self.id.as_str())
            .with("tier", self.tier.as_i64())
            .with("residual", self.residual)
            .with("scale", self.scale)
            .with("tolerance", self.tolerance)
            .with("pass", self.pass)
            .with("columns", self.columns.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    /// What was checked: label, realization, or a composite description.
    pub input: Json,
    pub convention: Option<ConventionId>,
    pub environment: Vec<(String, Json)>,
    pub residuals: Vec<RelationResidual>,
    /// Named measurements that are not pass/fail relations.
    pub metrics: Vec<(String, f64)>,
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn new(input: Json) -> Self {
        VerificationReport {
            input,
            convention: None,
            environment: Vec::new(),
            residuals: Vec::new(),
            metrics: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, r: RelationResidual) {
        self.residuals.push(r);
    }

    pub fn metric(&mut self, name: &str, value: f64) {
        self.metrics.push((name.to_string(), value));
    }

    pub fn env(&mut self, key: &str, value: impl Into<Json>) {
        self.environment.push((key.to_string(), value.into()));
    }

    /// Appends the residuals, metrics and notes of `other`.
    pub fn absorb(&mut self, other: VerificationReport) {
        self.residuals.extend(other.residuals);
        self.metrics.extend(other.metrics);
        self.notes.extend(other.notes);
    }

    /// Sorts residuals by id. Reports from the check functions are already sorted.
    pub fn sort(&mut self) {
        self.residuals.sort_by(|a, b| a.id.cmp(&b.id));
    }

    pub fn get(&self, id: &str) -> Option<&RelationResidual> {
        self.residuals.iter().find(|r| r.id == id)
    }

    pub fn get_metric(&self, name: &str) -> Option<f64> {
        self.metrics.iter().find(|(k, _)| k == name).map(|(_, v)| *v)
    }

    /// Residuals whose id starts with `prefix`.
    pub fn matching<'a>(&'a self, prefix: &'a str) -> impl Iterator<Item = &'a RelationResidual> + 'a {
        self.residuals.iter().filter(move |r| r.id.starts_with(prefix))
    }

    pub fn tier_pass(&self, tier: Tier) -> bool {
        self.residuals.iter().filter(|r| r.tier == tier).all(|r| r.pass)
    }

    pub fn all_pass(&self) -> bool {
        self.residuals.iter().all(|r| r.pass)
    }

    /// Largest `residual / scale` among ids with `prefix`; infinite if any is non-finite.
    pub fn worst_relative(&self, prefix: &str) -> f64 {
        self.matching(prefix)
            .map(|r| if r.relative().is_finite() { r.relative() } else { f64::INFINITY })
            .fold(0.0, f64::max)
    }

    /// Sum of `residual / scale`, infinite if any is non-finite.
    pub fn score(&self) -> f64 {
        self.residuals
            .iter()
            .map(|r| if r.relative().is_finite() { r.relative() } else { f64::INFINITY })
            .sum()
    }

    fn failed(&self, tier: Tier) -> Vec<Json> {
        self.residuals
            .iter()
            .filter(|r| r.tier == tier && !r.pass)
            .map(|r| Json::from(r.id.as_str()))
            .collect()
    }

    pub fn to_json(&self) -> Json {
        let mut env = Json::obj();
        for (k, v) in &self.environment {
            env = env.with(k, v.clone());
        }
        let mut metrics = Json::obj();
        for (k, v) in &self.metrics {
            metrics = metrics.with(k, *v);
        }
        let verdict = Json::obj()
            .with("tier1", if self.tier_pass(Tier::One) { "pass" } else { "fail" })
            .with("tier2", if self.tier_pass(Tier::Two) { "pass" } else { "fail" })
            .with("failed_tier1", Json::Arr(self.failed(Tier::One)))
            .with("failed_tier2", Json::Arr(self.failed(Tier::Two)));
        Json::obj()
            .with("input", self.input.clone())
            .with("convention", self.convention.map(|c| c.to_string()))
            .with("environment", env)
            .with("relations", Json::Arr(self.residuals.iter().map(|r| r.to_json()).collect()))
            .with("metrics", metrics)
            .with("notes", self.notes.iter().map(|s| s.as_str()).collect::<Vec<_>>())
            .with("verdict", verdict)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("input: {}\n", self.input.compact());
        if let Some(c) = self.convention {
            out.push_str(&format!("convention: {c}\n"));
        }
        for (k, v) in &self.environment {
            out.push_str(&format!("{k}: {}\n", v.compact()));
        }
        for r in &self.residuals {
            out.push_str(&format!(
                "{} {:<28} tier {}  residual {}  scale {}  tol {}  [{}]\n",
                if r.pass { "PASS" } else { "FAIL" },
                r.id,
                r.tier.as_i64(),
                fmt_g17(r.residual),
                fmt_g17(r.scale),
                fmt_g17(r.tolerance),
                r.columns
            ));
        }
        for (k, v) in &self.metrics {
            out.push_str(&format!("metric {k} = {}\n", fmt_g17(*v)));
        }
        for n in &self.notes {
            out.push_str(&format!("note: {n}\n"));
        }
        out.push_str(&format!(
            "verdict: tier1 {}, tier2 {}\n",
            if self.tier_pass(Tier::One) { "pass" } else { "fail" },
            if self.tier_pass(Tier::Two) { "pass" } else { "fail" }
        ));
        out
    }
}

/// Largest column 2-norm over `cols`.
pub fn column_residual(m: &Mat, cols: &[usize]) -> f64 {
    cols.iter().map(|&c| m.column(c).norm()).fold(0.0, |a, b| if b.is_nan() { b } else { a.max(b) })
}

/// Largest column 2-norm over all columns.
pub fn op_norm(m: &Mat) -> f64 {
    column_residual(m, &(0..m.ncols()).collect::<Vec<_>>())
}

/// Largest entry modulus.
pub fn max_abs(m: &Mat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub(crate) fn scale(terms: &[f64]) -> f64 {
    terms.iter().copied().fold(1.0, f64::max)
}

pub(crate) fn re(x: f64) -> CScalar {
    CScalar::new(x, 0.0)
}

pub(crate) const I: CScalar = CScalar::new(0.0, 1.0);

/// q-dependent constants, with `None` meaning `q = 1` exactly.
#[derive(Clone, Copy, Debug)]
pub(crate) struct QView {
    d: Option<Deformation>,
    pub h: f64,
    pub delta: f64,
}

impl QView {
    pub fn of(d: Option<Deformation>) -> Self {
        match d {
            Some(d) => QView { d: Some(d), h: d.sqrt_q(), delta: d.delta() },
            None => QView { d: None, h: 1.0, delta: 0.0 },
        }
    }

    pub fn bracket(&self, x: f64) -> f64 {
        self.d.map_or(x, |d| d.bracket(x))
    }
}

/// Diagonal of `f(m)` read from an exactly diagonal `M₃`.
pub(crate) fn diag_fn(m3: &Mat, f: impl Fn(f64) -> CScalar) -> Mat {
    Mat::from_diagonal(&m3.diagonal().map(|z| f(z.re)))
}

fn structural(id: &str) -> bool {
    matches!(
        id,
        "eq4.line01"
            | "eq4.line02m"
            | "eq4.line02p"
            | "eq4.line06m"
            | "eq4.line06p"
            | "eq4.vanish.m3_n3"
            | "eq4.vanish.m3_n3t"
    )
}

/// Tier of an algebra relation on a set with this origin.
fn lorentz_tier(origin: &Origin, id: &str) -> Tier {
    match origin {
        Origin::Realization { .. } | Origin::Classical { .. } => Tier::One,
        _ if structural(id) => Tier::One,
        _ => Tier::Two,
    }
}

/// The ten algebra lines plus the vanishing commutators `[M₃,N₃]`,
/// `[M₃,Ñ₃]`, `[N₃,Ñ₃]`. The Casimir element enters the two mixed lines
/// through its scalar value.
pub fn check_lorentz_relations(gens: &GeneratorSet, tol: &Tolerances) -> VerificationReport {
    let q = QView::of(gens.d);
    let (mp, mm, m3) = (&gens.m_plus.data, &gens.m_minus.data, &gens.m3.data);
    let (np, nm, n3, nt) = (&gens.n_plus.data, &gens.n_minus.data, &gens.n3.data, &gens.n3_tilde.data);
    let n = gens.basis.dim();
    let one = Mat::identity(n, n);
    let (h, hi) = (re(q.h), re(1.0 / q.h));
    let br2 = q.bracket(2.0);
    let two_m3 = diag_fn(m3, |m| re(q.bracket(2.0 * m)));
    let dc = gens.c_scalar * q.delta;
    let paired = if gens.convention.get(Axis::TildePairing) == 0 { nt } else { n3 };
    let cols = gens.basis.interior_columns(2);
    let desc = gens.basis.describe_columns(2);
    let nr = op_norm;

    let mut rep = VerificationReport::new(label_json(gens));
    rep.convention = Some(gens.convention);
    let mut add = |id: &str, diff: Mat, sc: f64| {
        let tier = lorentz_tier(&gens.origin, id);
        rep.push(RelationResidual::new(id, tier, column_residual(&diff, &cols), sc, tol.for_tier(tier), &desc));
    };
    add("eq4.line01", mp * mm - mm * mp - &two_m3, scale(&[nr(mp) * nr(mm), nr(&two_m3)]));
    add("eq4.line02p", m3 * mp - mp * m3 - mp, scale(&[nr(m3) * nr(mp)]));
    add("eq4.line02m", m3 * mm - mm * m3 + mm, scale(&[nr(m3) * nr(mm)]));
    add("eq4.line03", np * nm - nm * np + &two_m3, scale(&[nr(np) * nr(nm), nr(&two_m3)]));
    add("eq4.line04", n3 * np * h - np * n3 * hi + mp, scale(&[nr(n3) * nr(np), nr(mp)]));
    add("eq4.line05", paired * nm * h - nm * paired * hi - mm, scale(&[nr(paired) * nr(nm), nr(mm)]));
    add("eq4.line06p", m3 * np - np * m3 - np, scale(&[nr(m3) * nr(np)]));
    add("eq4.line06m", m3 * nm - nm * m3 + nm, scale(&[nr(m3) * nr(nm)]));
    add(
        "eq4.line07",
        mp * nm * hi - nm * mp * h - nt * re(br2) - &one * dc,
        scale(&[nr(mp) * nr(nm), br2 * nr(nt), dc.norm()]),
    );
    add(
        "eq4.line08",
        mm * np * hi - np * mm * h + n3 * re(br2) - &one * dc,
        scale(&[nr(mm) * nr(np), br2 * nr(n3), dc.norm()]),
    );
    add("eq4.line09", mp * nt * h - nt * mp * hi + np, scale(&[nr(mp) * nr(nt), nr(np)]));
    add("eq4.line10", mm * n3 * h - n3 * mm * hi - nm, scale(&[nr(mm) * nr(n3), nr(nm)]));
    add("eq4.vanish.m3_n3", m3 * n3 - n3 * m3, scale(&[nr(m3) * nr(n3)]));
    add("eq4.vanish.m3_n3t", m3 * nt - nt * m3, scale(&[nr(m3) * nr(nt)]));
    add("eq4.vanish.n3_n3t", n3 * nt - nt * n3, scale(&[nr(n3) * nr(nt)]));
    rep.sort();
    rep
}

/// `C - c·1` on interior columns and the commutators of `C` with the six
/// generators.
pub fn check_casimir(gens: &GeneratorSet, tol: &Tolerances) -> VerificationReport {
    let c = &gens.casimir.data;
    let n = gens.basis.dim();
    let mut rep = VerificationReport::new(label_json(gens));
    rep.convention = Some(gens.convention);
    let lin = gens.basis.interior_columns(1);
    let diff = c - Mat::identity(n, n) * gens.c_scalar;
    rep.push(RelationResidual::new(
        "eq5.scalar",
        Tier::Two,
        column_residual(&diff, &lin),
        scale(&[op_norm(c), gens.c_scalar.norm()]),
        tol.tier2,
        &gens.basis.describe_columns(1),
    ));
    let cols = gens.basis.interior_columns(2);
    let desc = gens.basis.describe_columns(2);
    for (name, g) in gens.generators().into_iter().take(6) {
        let g = &g.data;
        rep.push(RelationResidual::new(
            &format!("eq5.central.{name}"),
            Tier::Two,
            column_residual(&(c * g - g * c), &cols),
            scale(&[op_norm(c) * op_norm(g)]),
            tol.tier2,
            &desc,
        ));
    }
    let mean = lin.iter().map(|&k| c[(k, k)]).sum::<CScalar>() / lin.len().max(1) as f64;
    rep.metric("eq5.diagonal_mean.re", mean.re);
    rep.metric("eq5.diagonal_mean.im", mean.im);
    rep.metric("eq5.expected.re", gens.c_scalar.re);
    rep.metric("eq5.expected.im", gens.c_scalar.im);
    rep.sort();
    rep
}

fn m_tag(m: HalfInt) -> String {
    if m.twice() > 0 {
        format!("m+{m}")
    } else {
        format!("m{m}")
    }
}

/// Transformation law of a q-tensor operator under `acting`:
/// `[M₃,T_m] = mT_m` and `M±T_m - q^{-m/2}T_mM± = [l∓m]^{1/2}[l±m+1]^{1/2}T_{m±1}q^{M₃/2}`,
/// plus the same law with `q → 1/q` (ids `.q.` and `.qinv.`).
pub fn check_tensor_operator(
    name: &str,
    acting: &Su2Generators,
    t: &TensorOperator,
    d: &Deformation,
    tol: &Tolerances,
) -> VerificationReport {
    let (ap, am, a3) = (&acting.plus.data, &acting.minus.data, &acting.m3.data);
    let mut rep = VerificationReport::new(
        Json::obj().with("operator", name).with("rank", t.rank.to_string()).with("q", d.q()),
    );
    let l = t.rank;
    let n = a3.nrows();
    let zero = Mat::zeros(n, n);
    for (m, tm) in t.components() {
        let tm = &tm.data;
        let mf = m.to_f64();
        rep.push(RelationResidual::new(
            &format!("eq1.{name}.weight.{}", m_tag(m)),
            Tier::One,
            op_norm(&(a3 * tm - tm * a3 - tm * re(mf))),
            scale(&[op_norm(a3) * op_norm(tm)]),
            tol.tier1,
            "all",
        ));
        for (variant, dd) in [("q", *d), ("qinv", d.inverse())] {
            let up = diag_fn(a3, |x| re(dd.pow(x / 2.0)));
            for (dir, s, a) in [("plus", 1i64, ap), ("minus", -1, am)] {
                let step = HalfInt::from_int(s);
                let sm = step * m;
                let coef = (d.bracket_half(l - sm) * d.bracket_half(l + sm + HalfInt::ONE)).max(0.0).sqrt();
                let next = t.component(m + step).map_or(&zero, |o| &o.data);
                let lhs = a * tm - tm * a * re(dd.pow(-mf / 2.0));
                let rhs = next * &up * re(coef);
                rep.push(RelationResidual::new(
                    &format!("eq1.{name}.{variant}.{dir}.{}", m_tag(m)),
                    Tier::Two,
                    op_norm(&(&lhs - &rhs)),
                    scale(&[op_norm(a) * op_norm(tm) * dd.pow(-mf / 2.0).max(1.0), op_norm(&rhs)]),
                    tol.tier2,
                    "all",
                ));
            }
        }
    }
    rep.sort();
    for variant in ["q", "qinv"] {
        let prefix = format!("eq1.{name}.{variant}.");
        let ok = rep.matching(&prefix).all(|r| r.pass);
        rep.metric(&format!("eq1.{name}.{variant}.worst"), rep.worst_relative(&prefix));
        rep.notes.push(format!(
            "{name} {} the {} definition",
            if ok { "satisfies" } else { "violates" },
            if variant == "q" { "q" } else { "q -> 1/q" }
        ));
    }
    rep
}

/// The rotations the vector operators are built from and checked against.
pub fn vector_acting(spin: HalfInt, d: &Deformation, conv: ConventionId) -> Result<Su2Generators> {
    let su = standard_su_q2(spin, d)?;
    if conv.get(Axis::VectorForm) == 0 {
        return Ok(su);
    }
    let real = build_from_suq2(spin, d)?;
    Ok(Su2Generators { basis: su.basis, plus: real.m_plus, minus: real.m_minus, m3: su.m3 })
}

/// `S` against the `1/q` law and `T` against the `q` law, plus both the
/// other way round for the record.
pub fn check_vector_operators(
    spin: HalfInt,
    d: &Deformation,
    conv: ConventionId,
    tol: &Tolerances,
) -> Result<VerificationReport> {
    let (s, t) = crate::matrep::build_st_vectors(spin, d, conv)?;
    let acting = vector_acting(spin, d, conv)?;
    let mut rep = VerificationReport::new(
        Json::obj().with("kind", "vectors").with("spin", spin.to_string()).with("q", d.q()),
    );
    rep.convention = Some(conv);
    rep.absorb(check_tensor_operator("S", &acting, &s, d, tol));
    rep.absorb(check_tensor_operator("T", &acting, &t, d, tol));
    rep.sort();
    Ok(rep)
}

/// Score used by the resolver: `S` under the `1/q` law and `T` under the `q` law.
pub(crate) fn vector_score(rep: &VerificationReport) -> f64 {
    rep.matching("eq1.S.qinv.")
        .chain(rep.matching("eq1.T.q."))
        .chain(rep.matching("eq1.S.weight"))
        .chain(rep.matching("eq1.T.weight"))
        .map(|r| if r.relative().is_finite() { r.relative() } else { f64::INFINITY })
        .sum()
}

/// Adjoint identities between the representations at `q` and `1/q`:
/// `M₊(q)† = M₋(1/q)`, `N₊(q)† = N₋(1/q)`, `N₃† = N₃`, `N₃(q) = Ñ₃(1/q)`,
/// and the algebra at `1/q` for `{M±(1/q), M₃, N±(1/q)}` with `N₃(q)`,
/// `Ñ₃(q)` exchanged.
pub fn check_q_adjoint(
    label: &RepLabel,
    j_max: HalfInt,
    conv: ConventionId,
    tol: &Tolerances,
) -> Result<VerificationReport> {
    let g = build_generators(label, j_max, conv)?;
    let gi = build_generators(&label.inverted(), j_max, conv)?;
    let unitary = classify(label).is_unitary();
    let n_tier = if unitary { Tier::One } else { Tier::Two };
    let mut rep = VerificationReport::new(label_json(&g));
    rep.convention = Some(conv);
    let adj = |m: &Mat| m.adjoint();

    for (id, a, b) in [
        ("eq6.m_plus", &g.m_plus.data, &gi.m_minus.data),
        ("eq6.m_minus", &g.m_minus.data, &gi.m_plus.data),
        ("eq6.m3", &g.m3.data, &g.m3.data),
    ] {
        rep.push(RelationResidual::new(id, Tier::One, max_abs(&(adj(a) - b)), 1.0, tol.tier1, "elementwise"));
    }
    for (id, a, b) in [
        ("eq6.n_plus", &g.n_plus.data, &gi.n_minus.data),
        ("eq6.n_minus", &g.n_minus.data, &gi.n_plus.data),
        ("eq6.n3", &g.n3.data, &g.n3.data),
    ] {
        rep.push(RelationResidual::new(
            id,
            n_tier,
            op_norm(&(adj(a) - b)),
            scale(&[op_norm(a), op_norm(b)]),
            tol.for_tier(n_tier),
            "all",
        ));
    }
    rep.push(RelationResidual::new(
        "eq6.n3_inverse",
        Tier::Two,
        column_residual(&(&g.n3.data - &gi.n3_tilde.data), &g.basis.interior_columns(1)),
        scale(&[op_norm(&g.n3.data)]),
        tol.tier2,
        &g.basis.describe_columns(1),
    ));

    let mut swapped = gi.clone();
    swapped.n3 = g.n3_tilde.clone();
    swapped.n3_tilde = g.n3.clone();
    swapped.c_scalar = g.c_scalar;
    for mut r in check_lorentz_relations(&swapped, tol).residuals {
        r.id = r.id.replacen("eq4.", "eq6.inverse.", 1);
        rep.push(r);
    }

    let mut literal = swapped;
    literal.m_plus = g.m_plus.clone();
    literal.m_minus = g.m_minus.clone();
    let lit = check_lorentz_relations(&literal, tol);
    rep.metric("eq6.literal_reading.worst", lit.worst_relative("eq4."));
    rep.sort();
    Ok(rep)
}

/// Self-adjointness of `N₃` forces `a_j` real and `c_j` imaginary. Each
/// spin gets `eq22.a_real.<j>` and `eq22.c_imag.<j>`; `eq22.classification`
/// records whether the outcome agrees with the classifier's unitarity tag.
pub fn check_unitary_coeffs(label: &RepLabel, j_max: HalfInt, tol: &Tolerances) -> Result<VerificationReport> {
    let cls = classify(label);
    let top = cls.top_spin().unwrap_or(j_max);
    let mut rep = VerificationReport::new(
        Json::obj()
            .with("kind", "label")
            .with("l0", label.l0.to_string())
            .with("l1", Json::Arr(vec![label.l1.re.into(), label.l1.im.into()]))
            .with("q", label.d.q()),
    );
    let mut all = true;
    for j in label.l0.range_to(top.max(label.l0)) {
        let a = coeff_a(j, label)?;
        let c = coeff_c(j, label)?;
        for (id, r, sc) in [
            (format!("eq22.a_real.{j}"), a.im.abs(), a.norm()),
            (format!("eq22.c_imag.{j}"), c.re.abs(), c.norm()),
        ] {
            let res = RelationResidual::new(&id, Tier::Two, r, sc, tol.tier2, "-");
            all &= res.pass;
            rep.push(res);
        }
    }
    let agree = all == cls.is_unitary();
    rep.push(RelationResidual::new(
        "eq22.classification",
        Tier::One,
        if agree { 0.0 } else { 1.0 },
        1.0,
        0.0,
        "-",
    ));
    rep.notes.push(format!(
        "coefficients {} unitarity; classifier says {:?}",
        if all { "satisfy" } else { "violate" },
        cls.unitary
    ));
    rep.sort();
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrep::{build_st_vectors, OperatorMatrix};

    fn h(t: i64) -> HalfInt {
        HalfInt::from_twice(t)
    }

    fn label(l0: i64, l1: CScalar, q: f64) -> RepLabel {
        RepLabel::new(h(l0), l1, Deformation::new(q).unwrap()).unwrap()
    }

    #[test]
    fn realization_passes_everything() {
        for q in [0.7, 1.3] {
            let d = Deformation::new(q).unwrap();
            for tj in 1..=5 {
                let g = build_from_suq2(h(tj), &d).unwrap();
                let rep = check_lorentz_relations(&g, &Tolerances::uniform(1e-12));
                assert!(rep.all_pass(), "{}", rep.to_text());
            }
        }
    }

    #[test]
    fn default_reading_satisfies_algebra_on_labels() {
        for lab in [label(1, CScalar::new(0.0, 2.7), 1.3), label(0, re(0.5), 0.7), label(1, re(3.0), 2.0)] {
            let g = build_generators(&lab, lab.l0 + HalfInt::from_int(6), ConventionId::default()).unwrap();
            let rep = check_lorentz_relations(&g, &Tolerances::uniform(1e-11));
            assert!(rep.all_pass(), "{}", rep.to_text());
        }
    }

    #[test]
    fn zero_boosts_fail_line_three() {
        let d = Deformation::new(1.3).unwrap();
        let mut g = build_from_suq2(h(2), &d).unwrap();
        let z = OperatorMatrix::zeros(3, crate::matrep::Selection::diagonal());
        g.n_plus = z.clone();
        g.n_minus = z;
        let rep = check_lorentz_relations(&g, &Tolerances::default());
        let r = rep.get("eq4.line03").unwrap();
        assert!(!r.pass);
        let expect = op_norm(&diag_fn(&g.m3.data, |m| re(d.bracket(2.0 * m))));
        assert!((r.residual - expect).abs() < 1e-15);
    }

    #[test]
    fn perturbation_is_detected() {
        let lab = label(0, CScalar::new(0.0, 2.7), 1.3);
        let mut g = build_generators(&lab, h(8), ConventionId::default()).unwrap();
        let sc = op_norm(&g.n_plus.data);
        g.n_plus.data[(1, 0)] += re(1e-3 * sc);
        let rep = check_lorentz_relations(&g, &Tolerances::uniform(1e-6));
        assert!(!rep.all_pass());
    }

    #[test]
    fn casimir_on_spinor_is_central() {
        let lab = label(1, re(1.5), 1.3);
        let g = build_generators(&lab, h(1), ConventionId::default()).unwrap();
        let rep = check_casimir(&g, &Tolerances::default());
        assert!(rep.matching("eq5.central").all(|r| r.pass), "{}", rep.to_text());
    }

    #[test]
    fn identity_is_a_scalar_tensor() {
        let d = Deformation::new(1.3).unwrap();
        let acting = standard_su_q2(h(2), &d).unwrap();
        let t = TensorOperator::new(HalfInt::ZERO, vec![OperatorMatrix::identity(3)]).unwrap();
        let rep = check_tensor_operator("I", &acting, &t, &d, &Tolerances::default());
        assert!(rep.all_pass(), "{}", rep.to_text());
    }

    #[test]
    fn vectors_follow_opposite_laws() {
        let d = Deformation::new(1.3).unwrap();
        let conv = ConventionId::default().with(Axis::VectorExponent, 1).unwrap();
        for form in 0..2 {
            let conv = conv.with(Axis::VectorForm, form).unwrap();
            let rep = check_vector_operators(h(2), &d, conv, &Tolerances::default()).unwrap();
            assert!(rep.worst_relative("eq1.S.qinv.") < 1e-10);
            assert!(rep.worst_relative("eq1.T.q.") < 1e-10);
            assert!(rep.worst_relative("eq1.S.q.") > 1e-3);
        }
        let rep = check_vector_operators(h(2), &d, ConventionId::default(), &Tolerances::default()).unwrap();
        assert!(rep.worst_relative("eq1.S.qinv.") > 1e-3);
    }

    #[test]
    fn vector_laws_agree_near_one() {
        let d = Deformation::new(1.0 + 1e-6).unwrap();
        let conv = ConventionId::default().with(Axis::VectorExponent, 1).unwrap();
        let (s, t) = build_st_vectors(h(2), &d, conv).unwrap();
        for m in [-1, 0, 1] {
            let m = HalfInt::from_int(m);
            let a = &s.component(m).unwrap().data;
            let b = &t.component(m).unwrap().data;
            assert!(max_abs(&(a - b)) < 1e-4);
        }
    }

    #[test]
    fn adjoint_identities() {
        let tol = Tolerances::uniform(1e-12);
        let lab = label(2, CScalar::new(0.0, 2.7), 1.3);
        let rep = check_q_adjoint(&lab, h(10), ConventionId::default(), &tol).unwrap();
        assert!(rep.get("eq6.m_plus").unwrap().residual < 1e-13);
        assert!(rep.tier_pass(Tier::One), "{}", rep.to_text());
        assert!(rep.matching("eq6.inverse.").all(|r| r.pass), "{}", rep.to_text());
        assert!(rep.get_metric("eq6.literal_reading.worst").unwrap() > 1e-6);
    }

    #[test]
    fn adjoint_mirror() {
        let tol = Tolerances::default();
        let lab = label(0, re(0.5), 1.3);
        let a = check_q_adjoint(&lab, h(8), ConventionId::default(), &tol).unwrap();
        let b = check_q_adjoint(&lab.inverted(), h(8), ConventionId::default(), &tol).unwrap();
        let (x, y) = (a.get("eq6.m_plus").unwrap(), b.get("eq6.m_minus").unwrap());
        assert!((x.residual - y.residual).abs() < 1e-12);
        let (x, y) = (a.get("eq6.n_plus").unwrap(), b.get("eq6.n_minus").unwrap());
        assert!((x.residual - y.residual).abs() < 1e-12);
    }

    #[test]
    fn unitarity_verdicts() {
        let tol = Tolerances::default();
        for (lab, unitary) in [
            (label(0, re(0.5), 0.7), true),
            (label(2, CScalar::new(0.0, 2.7), 1.3), true),
            (label(2, re(0.5), 1.3), false),
        ] {
            let rep = check_unitary_coeffs(&lab, h(12), &tol).unwrap();
            assert!(rep.get("eq22.classification").unwrap().pass);
            assert_eq!(rep.tier_pass(Tier::Two), unitary);
        }
    }

    #[test]
    fn report_is_sorted_and_serializable() {
        let d = Deformation::new(1.3).unwrap();
        let g = build_from_suq2(h(1), &d).unwrap();
        let rep = check_lorentz_relations(&g, &Tolerances::default());
        assert!(rep.residuals.windows(2).all(|w| w[0].id < w[1].id));
        let text = rep.to_json().pretty();
        assert_eq!(text, check_lorentz_relations(&g, &Tolerances::default()).to_json().pretty());
        assert!(text.contains("\"verdict\""));
    }
}
