//! Coordinate text format, one file per generator:
//!
//! ```text
//! # dim=2 label={"kind":"label",...} convention=c0000000000
//! 1 0 1 0
//! ```
//!
//! Entries are `row col re im` with `%.17g` floats, so a write/read cycle
//! is bit-exact. Entries whose two components are both `+0` are omitted.

use std::fs;
use std::path::Path;

use serde_json::Value;

use super::{Axis, Basis, ConventionId, GeneratorSet, Mat, OperatorMatrix, Origin, Selection};
use crate::error::{Error, Result};
use crate::qarith::{CScalar, Deformation, HalfInt};
use crate::report::{fmt_g17, Json};
use crate::repcore::RepLabel;

/// Header fields of one exported matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Header {
    pub dim: usize,
    /// Compact JSON describing origin, basis and Casimir scalar.
    pub label: String,
    pub convention: ConventionId,
}

fn complex_json(z: CScalar) -> Json {
    Json::Arr(vec![Json::Num(z.re), Json::Num(z.im)])
}

/// JSON description written into every header of `gens`.
pub fn label_json(gens: &GeneratorSet) -> Json {
    let b = &gens.basis;
    let basis = Json::obj()
        .with("first", b.lowest().to_string())
        .with("last", b.highest().to_string())
        .with("truncated", b.truncated());
    let head = match &gens.origin {
        Origin::Label(l) => Json::obj()
            .with("kind", "label")
            .with("l0", l.l0.to_string())
            .with("l1", complex_json(l.l1)),
        Origin::Realization { spin } => {
            Json::obj().with("kind", "realization").with("spin", spin.to_string())
        }
        Origin::Classical { l0, l1 } => Json::obj()
            .with("kind", "classical")
            .with("l0", l0.to_string())
            .with("l1", complex_json(*l1)),
        Origin::Imported { description } => {
            Json::obj().with("kind", "imported").with("description", description.as_str())
        }
    };
    head.with("q", gens.d.map(|d| d.q()))
        .with("c", complex_json(gens.c_scalar))
        .with("basis", basis)
}

pub fn write_matrix(m: &Mat, header: &Header) -> String {
    let mut out = format!(
        "# dim={} label={} convention={}\n",
        header.dim, header.label, header.convention
    );
    for c in 0..m.ncols() {
        for r in 0..m.nrows() {
            let z = m[(r, c)];
            if z.re.to_bits() == 0 && z.im.to_bits() == 0 {
                continue;
            }
            out.push_str(&format!("{r} {c} {} {}\n", fmt_g17(z.re), fmt_g17(z.im)));
        }
    }
    out
}

pub fn parse_matrix(text: &str) -> Result<(Header, Mat)> {
    let mut lines = text.lines();
    let first = lines.next().ok_or_else(|| Error::Parse("empty matrix file".into()))?;
    let header = parse_header(first)?;
    let mut m = Mat::zeros(header.dim, header.dim);
    for (k, line) in lines.enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let bad = || Error::Parse(format!("line {}: expected `row col re im`, got {line:?}", k + 2));
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(bad());
        }
        let r: usize = fields[0].parse().map_err(|_| bad())?;
        let c: usize = fields[1].parse().map_err(|_| bad())?;
        let re: f64 = fields[2].parse().map_err(|_| bad())?;
        let im: f64 = fields[3].parse().map_err(|_| bad())?;
        if r >= header.dim || c >= header.dim {
            return Err(Error::Parse(format!("line {}: index out of range", k + 2)));
        }
        m[(r, c)] = CScalar::new(re, im);
    }
    Ok((header, m))
}

fn parse_header(line: &str) -> Result<Header> {
    let bad = || Error::Parse(format!("malformed header {line:?}"));
    let rest = line.strip_prefix("# dim=").ok_or_else(bad)?;
    let (dim, rest) = rest.split_once(" label=").ok_or_else(bad)?;
    let (label, conv) = rest.rsplit_once(" convention=").ok_or_else(bad)?;
    Ok(Header {
        dim: dim.parse().map_err(|_| bad())?,
        label: label.to_string(),
        convention: conv.trim().parse()?,
    })
}

/// Selection rule of the named generator under `conv`.
pub fn selection_for(name: &str, conv: ConventionId) -> Option<Selection> {
    let lower_dm = conv.get(Axis::LowerShift) == 1;
    let band = [-1, 0, 1];
    Some(match name {
        "M_plus" => Selection::new(&[0], &[1]),
        "M_minus" => Selection::new(&[0], &[-1]),
        "M3" => Selection::diagonal(),
        "N_plus" if lower_dm => Selection::new(&band, &[0, 1]),
        "N_minus" if lower_dm => Selection::new(&band, &[0, -1]),
        "N_plus" => Selection::new(&band, &[1]),
        "N_minus" => Selection::new(&band, &[-1]),
        "N3" | "N3_tilde" | "casimir" => Selection::new(&band, &[0]),
        _ => return None,
    })
}

/// Writes `<name>.txt` for each generator and the Casimir matrix.
pub fn export_dir(gens: &GeneratorSet, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    let header = Header {
        dim: gens.basis.dim(),
        label: label_json(gens).compact(),
        convention: gens.convention,
    };
    for (name, m) in gens.named() {
        fs::write(dir.join(format!("{name}.txt")), write_matrix(&m.data, &header))?;
    }
    Ok(())
}

fn str_field<'a>(v: &'a Value, key: &str) -> Result<&'a str> {
    v.get(key)
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Parse(format!("label field {key:?} missing or not a string")))
}

fn complex_field(v: &Value, key: &str) -> Result<CScalar> {
    let pair = v
        .get(key)
        .and_then(Value::as_array)
        .filter(|a| a.len() == 2)
        .ok_or_else(|| Error::Parse(format!("label field {key:?} must be [re, im]")))?;
    let part = |x: &Value| x.as_f64().ok_or_else(|| Error::Parse(format!("non-numeric {key:?}")));
    Ok(CScalar::new(part(&pair[0])?, part(&pair[1])?))
}

fn parse_label(text: &str) -> Result<(Origin, Basis, CScalar, Option<Deformation>)> {
    let v: Value =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("label JSON: {e}")))?;
    let d = match v.get("q").and_then(Value::as_f64) {
        Some(q) => Some(Deformation::new(q)?),
        None => None,
    };
    let half = |key: &str| -> Result<HalfInt> { str_field(&v, key)?.parse() };
    let origin = match str_field(&v, "kind")? {
        "label" => {
            let d = d.ok_or_else(|| Error::Parse("label without q".into()))?;
            Origin::Label(RepLabel::new(half("l0")?, complex_field(&v, "l1")?, d)?)
        }
        "realization" => Origin::Realization { spin: half("spin")? },
        "classical" => Origin::Classical { l0: half("l0")?, l1: complex_field(&v, "l1")? },
        "imported" => Origin::Imported { description: str_field(&v, "description")?.to_string() },
        other => return Err(Error::Parse(format!("unknown label kind {other:?}"))),
    };
    let b = v.get("basis").ok_or_else(|| Error::Parse("label without basis".into()))?;
    let first: HalfInt = str_field(b, "first")?.parse()?;
    let last: HalfInt = str_field(b, "last")?.parse()?;
    let truncated = b.get("truncated").and_then(Value::as_bool).unwrap_or(false);
    let basis = Basis::ladder(first, last, truncated)?;
    Ok((origin, basis, complex_field(&v, "c")?, d))
}

/// Reads a directory written by [`export_dir`].
pub fn import_dir(dir: &Path) -> Result<GeneratorSet> {
    let mut parsed = Vec::new();
    for name in ["M_plus", "M_minus", "M3", "N_plus", "N_minus", "N3", "N3_tilde", "casimir"] {
        let path = dir.join(format!("{name}.txt"));
        let text = fs::read_to_string(&path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        parsed.push((name, parse_matrix(&text)?));
    }
    let header = parsed[0].1 .0.clone();
    if let Some((name, _)) = parsed.iter().find(|(_, (h, _))| *h != header) {
        return Err(Error::Parse(format!("{name}.txt header differs from M_plus.txt")));
    }
    let (origin, basis, c_scalar, d) = parse_label(&header.label)?;
    if basis.dim() != header.dim {
        return Err(Error::Parse(format!(
            "header dim {} does not match basis dimension {}",
            header.dim,
            basis.dim()
        )));
    }
    let conv = header.convention;
    let mut ops = parsed
        .into_iter()
        .map(|(name, (_, m))| OperatorMatrix::new(m, selection_for(name, conv)));
    let mut next = || ops.next().unwrap();
    Ok(GeneratorSet {
        basis,
        m_plus: next(),
        m_minus: next(),
        m3: next(),
        n_plus: next(),
        n_minus: next(),
        n3: next(),
        n3_tilde: next(),
        casimir: next(),
        c_scalar,
        d,
        origin,
        convention: conv,
    })
}
