//! Acceptance criteria 1-11, one line each. Exits non-zero if any fails.

use std::fs;
use std::path::PathBuf;
use std::process::Command;

use num_complex::Complex64;
use qlorentz::chiral::{
    build_chiral, check_chiral_relations, check_coproduct_homomorphism, check_reduction_identities,
    check_spinor_annihilation, coproduct,
};
use qlorentz::matrep::{build_from_suq2, build_generators, export, ConventionId, GeneratorSet};
use qlorentz::qarith::{CScalar, Deformation, HalfInt};
use qlorentz::repcore::{casimir_eigenvalue, check_recurrences, classify, coeff_c, Kind, RepLabel};
use qlorentz::verify::{
    check_casimir, check_lorentz_relations, check_q_adjoint, classical_limit_compare, max_abs,
    resolve_conventions, ResolveTarget, Tolerances, VerificationReport,
};

type Outcome = (bool, String);
type Criterion = (&'static str, fn() -> Outcome);

fn h(twice: i64) -> HalfInt {
    HalfInt::from_twice(twice)
}

fn dq(q: f64) -> Deformation {
    Deformation::new(q).unwrap()
}

fn label(l0_twice: i64, re: f64, im: f64, q: f64) -> RepLabel {
    RepLabel::new(h(l0_twice), CScalar::new(re, im), dq(q)).unwrap()
}

/// Worst `residual / scale` among `ids`.
fn worst(rep: &VerificationReport, ids: &[&str]) -> f64 {
    ids.iter()
        .map(|id| rep.get(id).unwrap_or_else(|| panic!("missing {id}")).relative())
        .fold(0.0, f64::max)
}

fn c1() -> Outcome {
    let labels = [(0, 0.5, 0.0), (1, 1.5, 0.0), (2, 0.0, 2.7), (3, 2.5, 0.0)];
    let mut w = 0.0f64;
    for q in [0.5, 1.3, 2.0] {
        for &(l0, re, im) in &labels {
            let lab = label(l0, re, im, q);
            for r in check_recurrences(&lab, lab.l0 + HalfInt::from_int(20)).unwrap() {
                w = w.max(r.first).max(r.second);
            }
        }
    }
    (w < 1e-10, format!("worst recurrence residual {w:.3e}"))
}

fn lorentz_fixtures() -> Vec<GeneratorSet> {
    let mut out = Vec::new();
    for q in [0.7, 1.3] {
        out.push(build_generators(&label(1, 1.5, 0.0, q), h(1), ConventionId::default()).unwrap());
        out.push(build_generators(&label(0, 0.0, 2.7, q), h(16), ConventionId::default()).unwrap());
    }
    out
}

fn structural_worst(ids: &[&str]) -> f64 {
    lorentz_fixtures()
        .iter()
        .map(|g| worst(&check_lorentz_relations(g, &Tolerances::default()), ids))
        .fold(0.0, f64::max)
}

fn c2() -> Outcome {
    let w = structural_worst(&["eq4.line01", "eq4.line02p", "eq4.line02m"]);
    (w < 1e-13, format!("worst relative residual {w:.3e}"))
}

fn c3() -> Outcome {
    let w = structural_worst(&["eq4.line06p", "eq4.line06m", "eq4.vanish.m3_n3", "eq4.vanish.m3_n3t"]);
    (w < 1e-13, format!("worst relative residual {w:.3e}"))
}

fn c4() -> Outcome {
    let mut ok = true;
    let mut w = 0.0f64;
    let mut dims = Vec::new();
    for q in [0.7, 1.3] {
        for (l0, l1) in [(0, 1.0), (0, 2.0), (1, 1.5), (2, 3.0)] {
            let lab = label(l0, l1, 0.0, q);
            let top = h((2.0 * l1) as i64);
            // Closed form evaluated without the builder's forced zero.
            let d = &lab.d;
            let bj = d.bracket_half(top);
            let num = (bj * bj - d.bracket_half(lab.l0).powi(2))
                * (Complex64::new(bj * bj, 0.0) - d.bracket_complex(lab.l1).powi(2));
            let den = d.bracket_half(top + top - HalfInt::ONE) * d.bracket_half(top + top + HalfInt::ONE);
            w = w.max((num / den).norm().sqrt() / bj);
            ok &= coeff_c(top, &lab).unwrap().norm() == 0.0;
            let expect = (l1 * l1 - lab.l0.to_f64().powi(2)).round() as usize;
            let dim = match classify(&lab).kind {
                Kind::Finite { dim, .. } => dim,
                Kind::Infinite => 0,
            };
            let built = build_generators(&lab, top, ConventionId::default()).unwrap().basis.dim();
            ok &= dim == expect && built == expect;
            dims.push(dim);
        }
    }
    dims.truncate(4);
    (ok && w < 1e-14, format!("closed-form |c_|l1|| <= {w:.3e}, dims {dims:?}"))
}

fn c5() -> Outcome {
    let tol = Tolerances::uniform(1e-12);
    let mut ok = true;
    let mut w = 0.0f64;
    for q in [0.7, 1.3] {
        for spin in [h(1), h(2), h(3)] {
            let g = build_from_suq2(spin, &dq(q)).unwrap();
            let cs = build_chiral(&g).unwrap();
            for rep in [check_lorentz_relations(&g, &tol), check_chiral_relations(&cs, &tol), check_reduction_identities(&cs, &tol)] {
                ok &= rep.all_pass();
                w = w.max(rep.worst_relative(""));
            }
        }
    }
    (ok, format!("worst relative residual {w:.3e}"))
}

fn c6() -> Outcome {
    let mut m = 0.0f64;
    for q in [0.7, 1.3] {
        for lab in [label(1, 1.5, 0.0, q), label(0, 0.0, 2.7, q), label(2, 0.0, 2.7, q), label(0, 0.5, 0.0, q)] {
            let j = lab.l0 + HalfInt::from_int(6);
            let g = build_generators(&lab, j, ConventionId::default()).unwrap();
            let gi = build_generators(&lab.inverted(), j, ConventionId::default()).unwrap();
            m = m.max(max_abs(&(g.m_plus.data.adjoint() - &gi.m_minus.data)));
        }
    }
    let rep = check_q_adjoint(&label(2, 0.0, 2.7, 1.3), h(12), ConventionId::default(), &Tolerances::default()).unwrap();
    let n = worst(&rep, &["eq6.n_plus", "eq6.n_minus"]);
    (m < 1e-13 && n < 1e-12, format!("M elementwise {m:.3e}, N relative {n:.3e}"))
}

fn c7() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (lab, j) in [(label(2, 0.0, 2.5, 1.3), h(10)), (label(1, 1.5, 0.0, 1.3), h(1))] {
        let cmp = classical_limit_compare(&lab, j, 1e-6, 1e-4).unwrap();
        ok &= cmp.deviation < 1e-4 && cmp.ratio >= 3.0;
        parts.push(format!("dev {:.3e} ratio {:.2}", cmp.deviation, cmp.ratio));
    }
    (ok, parts.join("; "))
}

fn general_labels(q: f64) -> Vec<(RepLabel, HalfInt)> {
    vec![
        (label(2, 0.0, 2.7, q), h(10)),
        (label(0, 0.5, 0.0, q), h(12)),
        (label(1, 1.5, 0.0, q), h(1)),
        (label(3, 0.7, 1.1, q), h(11)),
    ]
}

fn full_suite(g: &GeneratorSet, tol: &Tolerances) -> VerificationReport {
    let mut rep = check_lorentz_relations(g, tol);
    rep.absorb(check_casimir(g, tol));
    rep.sort();
    rep
}

fn c8() -> Outcome {
    let catalog = ConventionId::lorentz_catalog();
    let mut same = true;
    let mut worst4 = 0.0f64;
    let mut worst5 = 0.0f64;
    let mut deterministic = true;
    for (lab, j) in general_labels(1.3) {
        let winners: Vec<ConventionId> = [0.8, 1.1, 1.3]
            .iter()
            .map(|&q| resolve_conventions(&ResolveTarget::Lorentz { label: lab, j_max: j }, &dq(q), &catalog).winner)
            .collect();
        same &= winners.iter().all(|w| *w == winners[0]);
        let g = build_generators(&lab, j, winners[0]).unwrap();
        let tol = Tolerances::default();
        deterministic &= full_suite(&g, &tol).to_json().pretty() == full_suite(&g, &tol).to_json().pretty();

        let g = build_generators(&lab.with_deformation(dq(1.0 + 1e-6)), j, winners[0]).unwrap();
        let rep = full_suite(&g, &Tolerances::uniform(1e-4));
        worst4 = worst4.max(rep.worst_relative("eq4."));
        worst5 = worst5.max(rep.worst_relative("eq5."));
    }
    let ok = same && deterministic && worst4 < 1e-4 && worst5 < 1e-4;
    (
        ok,
        format!(
            "resolver stable {same}, deterministic {deterministic}, eq4 worst {worst4:.3e}, eq5 worst {worst5:.3e} at q = 1+1e-6"
        ),
    )
}

fn c9() -> Outcome {
    let mut central = 0.0f64;
    for q in [0.7, 1.3, 1.0 + 1e-6] {
        let g = build_generators(&label(1, 1.5, 0.0, q), h(1), ConventionId::default()).unwrap();
        central = central.max(check_casimir(&g, &Tolerances::default()).worst_relative("eq5.central."));
    }
    let lab = label(1, 1.5, 0.0, 1.0 + 1e-6);
    let g = build_generators(&lab, h(1), ConventionId::default()).unwrap();
    let expected = casimir_eigenvalue(&lab);
    let eig: Vec<CScalar> = g.casimir.data.clone().schur().unpack().1.diagonal().iter().copied().collect();
    let dev = eig.iter().map(|z| (z - expected).norm()).fold(0.0, f64::max);
    let eig: Vec<String> = eig.iter().map(|z| format!("{z:.6}")).collect();
    (
        central < 1e-10 && dev < 1e-4,
        format!("commutators {central:.3e}; eigenvalues {eig:?} vs i[l0][l1] = {expected:.6}, deviation {dev:.3e}"),
    )
}

fn c10() -> Outcome {
    let tol = Tolerances::default();
    let mut spectral = 0.0f64;
    for q in [0.7, 1.3] {
        let mut sets = vec![
            build_generators(&label(2, 0.0, 2.7, q), h(8), ConventionId::default()).unwrap(),
            build_generators(&label(1, 1.5, 0.0, q), h(1), ConventionId::default()).unwrap(),
        ];
        sets.extend([h(1), h(2)].map(|s| build_from_suq2(s, &dq(q)).unwrap()));
        for g in &sets {
            let rep = check_reduction_identities(&build_chiral(g).unwrap(), &tol);
            spectral = spectral.max(worst(&rep, &["eq28.spectral.minus", "eq28.spectral.plus"]));
        }
    }
    let mut annihilation = true;
    for q in [0.7, 1.3] {
        annihilation &= check_spinor_annihilation(&dq(q), &Tolerances::uniform(1e-12)).unwrap().all_pass();
    }

    let tau = |q: f64| build_chiral(&build_generators(&label(1, 1.5, 0.0, q), h(1), ConventionId::default()).unwrap()).unwrap();
    let target = ResolveTarget::Coproduct { label: label(1, 1.5, 0.0, 1.3), j_max: h(1) };
    let conv = resolve_conventions(&target, &dq(1.3), &ConventionId::coproduct_catalog()).winner;
    let near = check_coproduct_homomorphism(&coproduct(&tau(1.0 + 1e-6), &tau(1.0 + 1e-6), conv).unwrap(), &tol);
    let far = check_coproduct_homomorphism(&coproduct(&tau(1.3), &tau(1.3), conv).unwrap(), &tol);
    let grouplike = [&near, &far].iter().all(|r| r.matching("eq32.grouplike.").all(|x| x.residual == 0.0));
    let hom = near.worst_relative("eq32.eq27.");
    let hom_far = far.worst_relative("eq32.eq27.");
    let witness = far.get_metric("eq32.cocommutator.relative").unwrap();
    let ok = spectral < 1e-13 && annihilation && grouplike && hom < 1e-4 && witness > 1e-3;
    (
        ok,
        format!(
            "spectral {spectral:.3e}, annihilation {annihilation}, grouplike {grouplike}, homomorphism {hom:.3e} (q=1.3: {hom_far:.3e}), witness {witness:.3e}, convention {conv}"
        ),
    )
}

fn qlorentz(args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_qlorentz")).args(args).output().unwrap();
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn c11() -> Outcome {
    let dir = std::env::temp_dir().join(format!("qlorentz-acceptance-{}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    let export_dir: PathBuf = dir.join("export");
    let verify = ["verify", "--l0", "0", "--l1", "0+2.7i", "--q", "1.3", "--j-max", "8"];
    let (code_a, a) = qlorentz(&verify);
    let (_, b) = qlorentz(&verify);
    let deterministic = a == b && code_a == 0;

    let ex = export_dir.to_str().unwrap();
    let (code_build, _) = qlorentz(&["build", "--l0", "1", "--l1", "2.7i", "--q", "1.3", "--j-max", "6", "--export", ex]);
    let built = build_generators(&label(2, 0.0, 2.7, 1.3), h(12), ConventionId::default()).unwrap();
    let back = export::import_dir(&export_dir).unwrap();
    let bit_exact = code_build == 0
        && built.named().iter().zip(back.named().iter()).all(|((_, x), (_, y))| {
            x.data.iter().zip(y.data.iter()).all(|(u, v)| u.re.to_bits() == v.re.to_bits() && u.im.to_bits() == v.im.to_bits())
        });
    let (code_pass, _) = qlorentz(&["verify", "--import", ex]);

    let path = export_dir.join("M_plus.txt");
    let text = fs::read_to_string(&path).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let f: Vec<String> = lines[1].split_whitespace().map(String::from).collect();
    let bumped: f64 = f[2].parse::<f64>().unwrap() + 1e-3;
    lines[1] = format!("{} {} {} {}", f[0], f[1], bumped, f[3]);
    fs::write(&path, lines.join("\n") + "\n").unwrap();
    let (code_fail, _) = qlorentz(&["verify", "--import", ex]);
    let (code_usage, _) = qlorentz(&["classify", "--l0", "1", "--l1", "3/2", "--q", "1.3"]);
    let (code_domain, _) = qlorentz(&["verify", "--l0", "2", "--l1", "2.7i", "--q", "1.3", "--j-max", "1"]);
    let _ = fs::remove_dir_all(&dir);

    let codes = [code_pass, code_fail, code_usage, code_domain];
    let ok = deterministic && bit_exact && codes == [0, 1, 2, 2];
    (ok, format!("byte-identical {deterministic}, bit-exact {bit_exact}, exit codes pass/fail/usage/domain {codes:?}"))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("recurrence oracle", c1),
        ("su_q(2) subalgebra", c2),
        ("weight relations", c3),
        ("termination and dimension", c4),
        ("realization suite", c5),
        ("q-adjoint", c6),
        ("classical limit", c7),
        ("near-classical full suite and resolver", c8),
        ("Casimir", c9),
        ("chiral and coproduct", c10),
        ("CLI determinism and round-trip", c11),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let start = std::time::Instant::now();
        let (ok, detail) = f();
        let secs = start.elapsed().as_secs_f64();
        println!("criterion {:>2} {} {name}: {detail} ({secs:.1}s)", k + 1, if ok { "PASS" } else { "FAIL" });
        failed += usize::from(!ok);
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
