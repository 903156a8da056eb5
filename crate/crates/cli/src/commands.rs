//! JSON documents for the non-suite subcommands.

use serde_json::{json, Value};

use wronskian_core::eisenstein::{r_nonconst, s_series, t_nonconst, EisensteinFamily};
use wronskian_core::error::Error;
use wronskian_core::heilbronn::{enumerate_h, euclid_check, run_decomposition};
use wronskian_core::linalg::{format_rational, Subspace};
use wronskian_core::modsym::PresentedSpace;
use wronskian_core::rankzero::{gamma0_span, theorem_check, wronskian_span, SpanReport};

use crate::suite::SCHEMA;

pub fn modsym_dims(level: u64) -> Result<Value, Error> {
    let d = PresentedSpace::build(level)?.dimensions();
    let mut v = serde_json::to_value(d).expect("serializable");
    v["schema"] = json!(SCHEMA);
    Ok(v)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum SeriesKind {
    S,
    T,
    R,
}

impl std::str::FromStr for SeriesKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "s" => Ok(SeriesKind::S),
            "t" => Ok(SeriesKind::T),
            "r" => Ok(SeriesKind::R),
            _ => Err(format!("unknown series {s:?} (expected s, t or r)")),
        }
    }
}

pub fn eis_dump(level: u64, precision: usize, kind: SeriesKind, index: i64) -> Result<Value, Error> {
    let (name, series) = match kind {
        SeriesKind::S => ("s", s_series(index, level, precision)?),
        SeriesKind::T => ("t", t_nonconst(index, level, precision)?),
        SeriesKind::R => ("r", r_nonconst(index, level, precision)?),
    };
    let mut v = series.to_json();
    v["schema"] = json!(SCHEMA);
    v["level"] = json!(level);
    v["series"] = json!(name);
    v["index"] = json!(index);
    Ok(v)
}

pub fn heilbronn_dump(n: i64) -> Value {
    let tuples: Vec<[i64; 4]> = enumerate_h(n).iter().map(|t| [t.a, t.b, t.c, t.d]).collect();
    json!({ "schema": SCHEMA, "n": n, "count": tuples.len(), "tuples": tuples })
}

pub fn euclid_runs(n: i64) -> Value {
    let runs: Vec<Vec<[i64; 4]>> = run_decomposition(n)
        .iter()
        .map(|run| run.iter().map(|t| [t.m1, t.k1, t.m2, t.k2]).collect())
        .collect();
    let check = euclid_check(n);
    json!({
        "schema": SCHEMA,
        "n": n,
        "size": check.size,
        "partition": check.partition,
        "bijection": check.bijection,
        "runs": runs,
    })
}

fn basis_json(s: &Subspace) -> Vec<Vec<String>> {
    s.basis()
        .iter()
        .map(|b| b.to_dense(s.ambient_dim()).iter().map(format_rational).collect())
        .collect()
}

pub fn wronskian_span_doc(level: u64, precision: usize) -> Result<Value, Error> {
    let fam = EisensteinFamily::new(level, precision)?;
    let w = wronskian_span(&fam)?;
    Ok(json!({
        "schema": SCHEMA,
        "level": level,
        "precision": precision,
        "dim": w.dim(),
        "basis": basis_json(&w),
    }))
}

pub fn gamma0_span_doc(level: u64, precision: usize) -> Result<Value, Error> {
    let fam = EisensteinFamily::new(level, precision)?;
    let g = gamma0_span(&fam)?;
    let w = wronskian_span(&fam)?;
    Ok(json!({
        "schema": SCHEMA,
        "level": level,
        "precision": precision,
        "dim": g.dim(),
        "containedInWronskianSpan": w.contains_subspace(&g)?,
        "equalsWronskianSpan": g.equals(&w)?,
        "basis": basis_json(&g),
    }))
}

pub fn theorem_reports(levels: &[(u64, usize, usize)]) -> Result<Vec<SpanReport>, Error> {
    levels
        .iter()
        .map(|&(l, precision, n_max)| {
            let space = PresentedSpace::build(l)?;
            let fam = EisensteinFamily::new(l, precision)?;
            theorem_check(&space, &fam, n_max)
        })
        .collect()
}

pub fn theorem_csv(reports: &[SpanReport]) -> String {
    let mut out = String::from(
        "level,precision,prime,wronskian_dim,cyclic_dim,cyclic_stabilized,n_max,b_span_dim_mod_junk,junk_dim,bridge,verdict\n",
    );
    for r in reports {
        let verdict = serde_json::to_value(r.verdict).expect("serializable");
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            r.level,
            r.precision,
            r.prime,
            r.wronskian_dim,
            r.cyclic_dim,
            r.cyclic_stabilized,
            r.n_max,
            r.b_span_dim_mod_junk,
            r.junk_dim,
            r.bridge,
            verdict.as_str().unwrap_or_default(),
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dims_document() {
        let v = modsym_dims(7).unwrap();
        assert_eq!(v["dimS4plus"], json!(3));
        assert_eq!(v["schema"], json!(1));
    }

    #[test]
    fn eis_document() {
        let v = eis_dump(5, 4, SeriesKind::S, 1).unwrap();
        assert_eq!(v["coeffs"], json!(["3/10", "1/1", "1/1", "1/1"]));
    }

    #[test]
    fn heilbronn_document() {
        assert_eq!(heilbronn_dump(1)["tuples"], json!([[1, 0, 0, 1]]));
        assert_eq!(euclid_runs(3)["size"], json!(4));
    }
}
