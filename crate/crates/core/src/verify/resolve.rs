//! Picks among catalogued readings by the size of the relation residuals.

use super::{check_lorentz_relations, check_vector_operators, vector_score, Tolerances};
use crate::chiral::{build_chiral, check_coproduct_homomorphism, coproduct};
use crate::matrep::{build_generators, ConventionId};
use crate::qarith::{Deformation, HalfInt};
use crate::repcore::RepLabel;

/// What the catalogue is scored on.
#[derive(Clone, Debug)]
pub enum ResolveTarget {
    /// The algebra suite on the label's generators (the label's own `q` is
    /// replaced by the resolver's).
    Lorentz { label: RepLabel, j_max: HalfInt },
    /// `S` under the `1/q` law and `T` under the `q` law on spin `spin`.
    Vector { spin: HalfInt },
    /// The chiral algebra on `Δ` of the label's chiral set with itself.
    Coproduct { label: RepLabel, j_max: HalfInt },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Resolution {
    pub winner: ConventionId,
    /// Score per convention in catalogue order; failed builds score infinity.
    pub table: Vec<(ConventionId, f64)>,
}

fn score(target: &ResolveTarget, d: &Deformation, conv: ConventionId) -> f64 {
    let tol = Tolerances::default();
    let run = || -> crate::error::Result<f64> {
        Ok(match target {
            ResolveTarget::Lorentz { label, j_max } => {
                let g = build_generators(&label.with_deformation(*d), *j_max, conv)?;
                check_lorentz_relations(&g, &tol).score()
            }
            ResolveTarget::Vector { spin } => vector_score(&check_vector_operators(*spin, d, conv, &tol)?),
            ResolveTarget::Coproduct { label, j_max } => {
                let g = build_generators(&label.with_deformation(*d), *j_max, ConventionId::default())?;
                let cs = build_chiral(&g)?;
                let rep = check_coproduct_homomorphism(&coproduct(&cs, &cs, conv)?, &tol);
                rep.matching("eq32.eq27.").map(|r| r.relative()).sum()
            }
        })
    };
    match run() {
        Ok(s) if s.is_finite() => s,
        _ => f64::INFINITY,
    }
}

/// Scores every convention in `catalog` and returns the lowest; ties go to
/// the smallest id.
pub fn resolve_conventions(target: &ResolveTarget, d: &Deformation, catalog: &[ConventionId]) -> Resolution {
    let mut sorted = catalog.to_vec();
    sorted.sort();
    sorted.dedup();
    let table: Vec<(ConventionId, f64)> = sorted.iter().map(|&c| (c, score(target, d, c))).collect();
    let mut winner = sorted.first().copied().unwrap_or_default();
    let mut best = f64::INFINITY;
    for &(c, s) in &table {
        if s < best {
            best = s;
            winner = c;
        }
    }
    Resolution { winner, table }
}
