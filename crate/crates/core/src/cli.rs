//! Command-line front end. [`run`] returns the exit code and writes the
//! report; `main` only parses arguments.

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::chiral::{
    build_chiral, check_chiral_adjoint, check_chiral_relations, check_coproduct_homomorphism,
    check_reduction_identities, coproduct,
};
use crate::error::{Error, Result};
use crate::matrep::{build_from_suq2, build_generators, export, ConventionId, GeneratorSet, Origin};
use crate::qarith::{CScalar, Deformation, HalfInt};
use crate::repcore::{classify, Kind, RepLabel, Unitarity};
use crate::report::Json;
use crate::verify::{
    check_casimir, check_lorentz_relations, check_q_adjoint, check_unitary_coeffs,
    classical_limit_compare, resolve_conventions, ResolveTarget, Tier,
    Tolerances, VerificationReport,
};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Default truncation above `l₀` for infinite representations.
pub const DEFAULT_J_SPAN: i64 = 8;
pub const DEFAULT_EPS: f64 = 1e-6;
/// Entrywise deviation allowed by `limit` unless a tier-2 tolerance is given.
pub const DEFAULT_LIMIT_GATE: f64 = 1e-4;

#[derive(Debug, Parser)]
#[command(name = "qlorentz", version, about = "Matrix representations of the q-deformed Lorentz algebra")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Finite or infinite, dimension, spin content, unitarity.
    Classify(Common),
    /// Builds the generator matrices, optionally exporting them.
    Build {
        #[command(flatten)]
        common: Common,
        /// Directory for the per-generator text files.
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Algebra, Casimir, adjoint and unitarity checks.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Verify matrices read from an export directory instead of building them.
        #[arg(long, conflicts_with = "realization")]
        import: Option<PathBuf>,
        /// Use the realization on spins (s, s+1) built from U_q(su2).
        #[arg(long, value_parser = parse_half)]
        realization: Option<HalfInt>,
    },
    /// Chiral algebra, reduction identities and chiral adjoint.
    Chiral {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_half)]
        realization: Option<HalfInt>,
    },
    /// Coproduct of a representation with itself.
    Coproduct {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_half)]
        realization: Option<HalfInt>,
    },
    /// Distance to the classical representation at q = 1 + eps and 1 + eps/10.
    Limit {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = DEFAULT_EPS)]
        eps: f64,
    },
    /// Scores the convention catalogue and reports the winner.
    Conventions {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Target::Lorentz)]
        target: Target,
        /// Spin of the vector operators for `--target vector`.
        #[arg(long, value_parser = parse_half, default_value = "1")]
        spin: HalfInt,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Lorentz,
    Vector,
    Coproduct,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Debug, Args)]
pub struct Common {
    #[arg(long, value_parser = parse_half)]
    pub l0: Option<HalfInt>,
    /// `a`, `bi`, `a+bi` or `a-bi`.
    #[arg(long, value_parser = parse_l1, allow_hyphen_values = true)]
    pub l1: Option<CScalar>,
    #[arg(long, allow_negative_numbers = true)]
    pub q: Option<f64>,
    /// Highest spin kept; defaults to the top spin, or l0 + 8 when infinite.
    #[arg(long = "j-max", value_parser = parse_half)]
    pub j_max: Option<HalfInt>,
    #[arg(long, value_parser = parse_convention)]
    pub convention: Option<ConventionId>,
    /// Tolerance for both tiers.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long = "tol-tier1")]
    pub tol_tier1: Option<f64>,
    #[arg(long = "tol-tier2")]
    pub tol_tier2: Option<f64>,
    /// Write the report here instead of standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

fn parse_half(s: &str) -> std::result::Result<HalfInt, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_convention(s: &str) -> std::result::Result<ConventionId, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_decimal(s: &str) -> Option<f64> {
    let ok = !s.is_empty()
        && s.chars().any(|c| c.is_ascii_digit())
        && s.chars().all(|c| c.is_ascii_digit() || matches!(c, '.' | 'e' | 'E' | '+' | '-'));
    ok.then(|| s.parse::<f64>().ok()).flatten().filter(|x| x.is_finite())
}

/// Parses `a`, `bi`, `a+bi` or `a-bi` with decimal components.
pub fn parse_l1(s: &str) -> std::result::Result<CScalar, String> {
    let bad = || format!("expected `a`, `bi`, `a+bi` or `a-bi` with decimal a, b; got {s:?}");
    let s = s.trim();
    let Some(body) = s.strip_suffix('i') else {
        return parse_decimal(s).map(|a| CScalar::new(a, 0.0)).ok_or_else(bad);
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (a, b) = match split {
        Some(k) => (parse_decimal(&body[..k]), parse_decimal(&body[k..])),
        None => (Some(0.0), parse_decimal(body)),
    };
    match (a, b) {
        (Some(a), Some(b)) => Ok(CScalar::new(a, b)),
        _ => Err(bad()),
    }
}

impl Common {
    fn tolerances(&self) -> Tolerances {
        let base = self.tol.map_or_else(Tolerances::default, Tolerances::uniform);
        Tolerances {
            tier1: self.tol_tier1.unwrap_or(base.tier1),
            tier2: self.tol_tier2.unwrap_or(base.tier2),
        }
    }

    fn convention(&self) -> ConventionId {
        self.convention.unwrap_or_default()
    }

    fn deformation(&self) -> Result<Deformation> {
        let q = self.q.ok_or_else(|| Error::InvalidArgument("--q is required".into()))?;
        Deformation::new(q)
    }

    fn label_with(&self, d: Deformation) -> Result<RepLabel> {
        let l0 = self.l0.ok_or_else(|| Error::InvalidArgument("--l0 is required".into()))?;
        let l1 = self.l1.ok_or_else(|| Error::InvalidArgument("--l1 is required".into()))?;
        RepLabel::new(l0, l1, d)
    }

    fn label(&self) -> Result<RepLabel> {
        self.label_with(self.deformation()?)
    }

    /// The requested `j_max`, else the top spin of a finite label, else `l₀ + 8`.
    fn j_max(&self, label: &RepLabel) -> (HalfInt, bool) {
        match self.j_max {
            Some(j) => (j, false),
            None => (
                classify(label).top_spin().unwrap_or(label.l0 + HalfInt::from_int(DEFAULT_J_SPAN)),
                true,
            ),
        }
    }

    fn record(&self, rep: &mut VerificationReport, j_max: Option<(HalfInt, bool)>) {
        let tol = self.tolerances();
        if let Some((j, default)) = j_max {
            rep.env("j_max", j.to_string());
            rep.env("j_max_default", default);
        }
        rep.env("tolerance_tier1", tol.tier1);
        rep.env("tolerance_tier2", tol.tier2);
    }
}

fn exit_for(rep: &VerificationReport) -> i32 {
    if rep.tier_pass(Tier::One) {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

fn render(rep: &VerificationReport, format: Format) -> String {
    match format {
        Format::Json => rep.to_json().pretty(),
        Format::Text => rep.to_text(),
    }
}

fn render_json(v: &Json, format: Format) -> String {
    match format {
        Format::Json => v.pretty(),
        Format::Text => text_lines(v, ""),
    }
}

fn text_lines(v: &Json, prefix: &str) -> String {
    match v {
        Json::Obj(fields) => fields
            .iter()
            .map(|(k, x)| {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                text_lines(x, &key)
            })
            .collect(),
        _ => format!("{prefix}: {}\n", v.compact()),
    }
}

fn classification_json(label: &RepLabel) -> Json {
    let cl = classify(label);
    let (kind, dim, spins) = match &cl.kind {
        Kind::Finite { spins, dim, .. } => (
            "finite",
            Json::from(*dim),
            Json::Arr(spins.iter().map(|s| Json::from(s.to_string())).collect()),
        ),
        Kind::Infinite => ("infinite", Json::Null, Json::Null),
    };
    let unitary = match cl.unitary {
        Unitarity::Principal { .. } => "principal",
        Unitarity::Complementary => "complementary",
        Unitarity::NonUnitary => "none",
    };
    Json::obj()
        .with("kind", kind)
        .with("dim", dim)
        .with("spins", spins)
        .with("unitary", unitary)
        .with("warnings", cl.warnings.iter().map(String::as_str).collect::<Vec<_>>())
}

fn lorentz_suite(gens: &GeneratorSet, tol: &Tolerances) -> VerificationReport {
    let mut rep = check_lorentz_relations(gens, tol);
    rep.absorb(check_casimir(gens, tol));
    rep
}

fn source(common: &Common, realization: Option<HalfInt>) -> Result<(GeneratorSet, Option<(HalfInt, bool)>)> {
    match realization {
        Some(spin) => Ok((build_from_suq2(spin, &common.deformation()?)?, None)),
        None => {
            let label = common.label()?;
            let j = common.j_max(&label);
            Ok((build_generators(&label, j.0, common.convention())?, Some(j)))
        }
    }
}

/// Runs one command. `Ok` carries the exit code and the rendered output;
/// `Err` is a usage or domain error.
pub fn execute(command: &Command) -> Result<(i32, String, Option<PathBuf>)> {
    let (code, text, common) = match command {
        Command::Classify(common) => {
            let label = common.label()?;
            (EXIT_PASS, render_json(&classification_json(&label), common.format), common)
        }
        Command::Build { common, export: dir } => {
            let label = common.label()?;
            let (j, default) = common.j_max(&label);
            let gens = build_generators(&label, j, common.convention())?;
            if let Some(dir) = dir {
                export::export_dir(&gens, dir)?;
            }
            let out = export::label_json(&gens)
                .with("convention", gens.convention.to_string())
                .with("dim", gens.basis.dim())
                .with("j_max", j.to_string())
                .with("j_max_default", default)
                .with("selection_violation", gens.selection_violation());
            (EXIT_PASS, render_json(&out, common.format), common)
        }
        Command::Verify { common, import, realization } => {
            let tol = common.tolerances();
            let mut rep = match (import, realization) {
                (Some(dir), _) => {
                    let gens = export::import_dir(dir)?;
                    let mut rep = lorentz_suite(&gens, &tol);
                    rep.env("import", dir.display().to_string());
                    rep
                }
                (None, Some(_)) => lorentz_suite(&source(common, *realization)?.0, &tol),
                (None, None) => {
                    let label = common.label()?;
                    let (j, default) = common.j_max(&label);
                    let conv = common.convention();
                    let gens = build_generators(&label, j, conv)?;
                    let mut rep = lorentz_suite(&gens, &tol);
                    rep.absorb(check_q_adjoint(&label, j, conv, &tol)?);
                    rep.absorb(check_unitary_coeffs(&label, j, &tol)?);
                    common.record(&mut rep, Some((j, default)));
                    rep.sort();
                    return finish(rep, common);
                }
            };
            common.record(&mut rep, None);
            rep.sort();
            return finish(rep, common);
        }
        Command::Chiral { common, realization } => {
            let tol = common.tolerances();
            let (gens, j) = source(common, *realization)?;
            let cs = build_chiral(&gens)?;
            let mut rep = check_chiral_relations(&cs, &tol);
            rep.convention = Some(gens.convention);
            rep.absorb(check_reduction_identities(&cs, &tol));
            if let (Origin::Label(label), Some((j_max, _))) = (&gens.origin, j) {
                rep.absorb(check_chiral_adjoint(label, j_max, gens.convention, &tol)?);
            }
            common.record(&mut rep, j);
            rep.sort();
            return finish(rep, common);
        }
        Command::Coproduct { common, realization } => {
            let tol = common.tolerances();
            let (gens, j) = source(&Common { convention: None, ..common.clone() }, *realization)?;
            let cs = build_chiral(&gens)?;
            let cp = coproduct(&cs, &cs, common.convention())?;
            let mut rep = check_coproduct_homomorphism(&cp, &tol);
            common.record(&mut rep, j);
            return finish(rep, common);
        }
        Command::Limit { common, eps } => {
            if !(*eps > 0.0 && *eps <= 1e-3) {
                return Err(Error::InvalidArgument(format!("--eps must lie in (0, 1e-3], got {eps}")));
            }
            let label = common.label_with(Deformation::new(1.0 + eps)?)?;
            let (j, default) = common.j_max(&label);
            let gate = common.tol_tier2.or(common.tol).unwrap_or(DEFAULT_LIMIT_GATE);
            let mut rep = classical_limit_compare(&label, j, *eps, gate)?.report;
            common.record(&mut rep, Some((j, default)));
            rep.env("limit_gate", gate);
            return finish(rep, common);
        }
        Command::Conventions { common, target, spin } => {
            let d = common.deformation()?;
            let (t, catalog) = match target {
                Target::Vector => (ResolveTarget::Vector { spin: *spin }, ConventionId::vector_catalog()),
                _ => {
                    let label = common.label_with(d)?;
                    let j_max = common.j_max(&label).0;
                    if *target == Target::Lorentz {
                        (ResolveTarget::Lorentz { label, j_max }, ConventionId::lorentz_catalog())
                    } else {
                        (ResolveTarget::Coproduct { label, j_max }, ConventionId::coproduct_catalog())
                    }
                }
            };
            let res = resolve_conventions(&t, &d, &catalog);
            let table: Vec<Json> = res
                .table
                .iter()
                .map(|(c, s)| Json::obj().with("convention", c.to_string()).with("score", *s))
                .collect();
            let readings = Json::Arr(
                res.winner
                    .describe()
                    .into_iter()
                    .map(|(axis, choice)| Json::obj().with("axis", axis).with("reading", choice))
                    .collect(),
            );
            let out = Json::obj()
                .with("target", format!("{target:?}").to_lowercase())
                .with("q", d.q())
                .with("winner", res.winner.to_string())
                .with("readings", readings)
                .with("table", Json::Arr(table));
            (EXIT_PASS, render_json(&out, common.format), common)
        }
    };
    Ok((code, text, common.output.clone()))
}

fn finish(rep: VerificationReport, common: &Common) -> Result<(i32, String, Option<PathBuf>)> {
    Ok((exit_for(&rep), render(&rep, common.format), common.output.clone()))
}

/// Executes `cli`, writes the report and returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    match execute(&cli.command) {
        Ok((code, text, path)) => {
            let written = match path {
                Some(p) => fs::write(&p, text).map_err(|e| format!("{}: {e}", p.display())),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            match written {
                Ok(()) => code,
                Err(e) => {
                    eprintln!("error: {e}");
                    EXIT_USAGE
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn l1_formats() {
        assert_eq!(parse_l1("1.5").unwrap(), CScalar::new(1.5, 0.0));
        assert_eq!(parse_l1("0+2.7i").unwrap(), CScalar::new(0.0, 2.7));
        assert_eq!(parse_l1("-0.5").unwrap(), CScalar::new(-0.5, 0.0));
        assert_eq!(parse_l1("2.5i").unwrap(), CScalar::new(0.0, 2.5));
        assert_eq!(parse_l1("1-2i").unwrap(), CScalar::new(1.0, -2.0));
        assert_eq!(parse_l1("1e-3+2E+1i").unwrap(), CScalar::new(1e-3, 20.0));
        for bad in ["3/2", "", "i", "1+i", "inf", "nan", "1.5j", "a+bi", "1++2i"] {
            assert!(parse_l1(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn default_j_max() {
        let cli = Cli::parse_from(["qlorentz", "classify", "--l0", "1", "--l1", "2.5i", "--q", "1.3"]);
        let Command::Classify(c) = &cli.command else { panic!() };
        let label = c.label().unwrap();
        assert_eq!(c.j_max(&label), (HalfInt::from_int(9), true));
        let fin = c.label_with(Deformation::new(1.3).unwrap()).unwrap();
        assert!(!classify(&fin).is_finite());
    }

    #[test]
    fn classify_example() {
        let cli = Cli::parse_from(["qlorentz", "classify", "--l0", "1/2", "--l1", "1.5", "--q", "1.3"]);
        let (code, text, _) = execute(&cli.command).unwrap();
        assert_eq!(code, EXIT_PASS);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["kind"], "finite");
        assert_eq!(v["dim"], 2);
        assert_eq!(v["spins"], serde_json::json!(["1/2"]));
    }

    #[test]
    fn domain_errors_before_computation() {
        let cli = Cli::parse_from(["qlorentz", "verify", "--l0", "1", "--l1", "2.5i", "--q", "-1"]);
        assert!(execute(&cli.command).is_err());
        let cli = Cli::parse_from(["qlorentz", "verify", "--l0", "2", "--l1", "2.5i", "--q", "1.3", "--j-max", "1"]);
        assert!(execute(&cli.command).is_err());
        assert!(Cli::try_parse_from(["qlorentz", "classify", "--l0", "1", "--l1", "3/2"]).is_err());
    }
}
