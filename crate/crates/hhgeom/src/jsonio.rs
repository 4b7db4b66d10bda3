//! JSON and CSV interchange for bodies, subspaces, functions, gauges,
//! reports, and symmetrization profiles.
//!
//! Bodies round-trip as vertex lists (`{"dim", "vertices"}`) and also load
//! from halfspace form (`{"dim", "halfspaces": [{"a", "b"}]}`). Floats are
//! written with the shortest round-trip representation, so identical
//! inputs produce byte-identical files.

use nalgebra::DVector;
use serde_json::{json, Value};

use crate::concave::ConcaveFn;
use crate::error::{Error, Result};
use crate::gauge::ConvexGauge;
use crate::polytope::{Halfspace, Polytope};
use crate::report::InequalityReport;
use crate::subspace::Subspace;
use crate::symmetrize::SchwarzProfile;

fn bad(what: &str) -> Error {
    Error::Instance(format!("malformed JSON: {what}"))
}

fn as_f64(v: &Value, what: &str) -> Result<f64> {
    v.as_f64().ok_or_else(|| bad(what))
}

fn as_usize(v: &Value, what: &str) -> Result<usize> {
    v.as_u64().map(|u| u as usize).ok_or_else(|| bad(what))
}

fn vector_from(v: &Value, what: &str) -> Result<DVector<f64>> {
    let arr = v.as_array().ok_or_else(|| bad(what))?;
    let mut out = Vec::with_capacity(arr.len());
    for x in arr {
        out.push(as_f64(x, what)?);
    }
    Ok(DVector::from_vec(out))
}

fn vector_json(v: &DVector<f64>) -> Value {
    Value::Array(v.iter().map(|&x| json!(x)).collect())
}

/// `{"dim": n, "vertices": [[..], ..]}`.
pub fn body_to_json(k: &Polytope) -> Value {
    json!({
        "dim": k.dim(),
        "vertices": k.vertices().iter().map(vector_json).collect::<Vec<_>>(),
    })
}

/// Accepts vertex form (`"vertices"`) or halfspace form (`"halfspaces"`,
/// each `{"a": [..], "b": scalar}` meaning `<a, x> <= b`).
pub fn body_from_json(v: &Value) -> Result<Polytope> {
    let obj = v.as_object().ok_or_else(|| bad("body must be an object"))?;
    let dim = as_usize(
        obj.get("dim").ok_or_else(|| bad("body needs a dim field"))?,
        "body dim",
    )?;
    if let Some(verts) = obj.get("vertices") {
        let arr = verts
            .as_array()
            .ok_or_else(|| bad("vertices must be an array"))?;
        let mut pts = Vec::with_capacity(arr.len());
        for p in arr {
            let x = vector_from(p, "vertex coordinates")?;
            if x.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: x.len(),
                });
            }
            pts.push(x);
        }
        return Polytope::hull(&pts);
    }
    if let Some(hs) = obj.get("halfspaces") {
        let arr = hs
            .as_array()
            .ok_or_else(|| bad("halfspaces must be an array"))?;
        let mut rows = Vec::with_capacity(arr.len());
        for h in arr {
            let a = vector_from(
                h.get("a").ok_or_else(|| bad("halfspace needs a field a"))?,
                "halfspace normal",
            )?;
            if a.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: a.len(),
                });
            }
            let b = as_f64(
                h.get("b").ok_or_else(|| bad("halfspace needs a field b"))?,
                "halfspace offset",
            )?;
            rows.push(Halfspace::new(a, b)?);
        }
        return Polytope::from_halfspaces(dim, &rows);
    }
    Err(bad("body needs either vertices or halfspaces"))
}

/// `{"ambient": n, "basis": [[..], ..]}`.
pub fn subspace_to_json(h: &Subspace) -> Value {
    json!({
        "ambient": h.ambient_dim(),
        "basis": h.basis().iter().map(vector_json).collect::<Vec<_>>(),
    })
}

/// The basis is orthonormalized on load, so any spanning set works.
pub fn subspace_from_json(v: &Value) -> Result<Subspace> {
    let obj = v
        .as_object()
        .ok_or_else(|| bad("subspace must be an object"))?;
    let ambient = as_usize(
        obj.get("ambient")
            .ok_or_else(|| bad("subspace needs an ambient field"))?,
        "subspace ambient",
    )?;
    let arr = obj
        .get("basis")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("subspace needs a basis array"))?;
    let mut span = Vec::with_capacity(arr.len());
    for b in arr {
        let x = vector_from(b, "basis vector")?;
        if x.len() != ambient {
            return Err(Error::DimensionMismatch {
                expected: ambient,
                got: x.len(),
            });
        }
        span.push(x);
    }
    Subspace::new(ambient, &span)
}

/// `{"pieces": [{"a": [..], "b": scalar}, ..]}`; the function is the
/// pointwise minimum of the pieces.
pub fn concave_to_json(f: &ConcaveFn) -> Value {
    json!({
        "pieces": f
            .pieces()
            .iter()
            .map(|(a, b)| json!({"a": vector_json(a), "b": b}))
            .collect::<Vec<_>>(),
    })
}

/// Loads the pieces over `domain`. With `allow_negative` the function is
/// taken as a signed exponent; otherwise nonnegativity is certified.
pub fn concave_from_json(v: &Value, domain: Polytope, allow_negative: bool) -> Result<ConcaveFn> {
    let arr = v
        .get("pieces")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("function needs a pieces array"))?;
    let mut pieces = Vec::with_capacity(arr.len());
    for p in arr {
        let a = vector_from(
            p.get("a").ok_or_else(|| bad("piece needs a field a"))?,
            "piece slope",
        )?;
        let b = as_f64(
            p.get("b").ok_or_else(|| bad("piece needs a field b"))?,
            "piece offset",
        )?;
        pieces.push((a, b));
    }
    if allow_negative {
        ConcaveFn::new_signed(pieces, domain)
    } else {
        ConcaveFn::new(pieces, domain)
    }
}

/// `{"kind": "power", "alpha"}` | `{"kind": "exp_minus_one"}` |
/// `{"kind": "max_affine", "pieces": [[m, c], ..]}`.
pub fn gauge_to_json(phi: &ConvexGauge) -> Value {
    match phi {
        ConvexGauge::Power { alpha } => json!({"kind": "power", "alpha": alpha}),
        ConvexGauge::ExpMinusOne => json!({"kind": "exp_minus_one"}),
        ConvexGauge::MaxAffine { pieces } => json!({
            "kind": "max_affine",
            "pieces": pieces.iter().map(|&(m, c)| json!([m, c])).collect::<Vec<_>>(),
        }),
    }
}

pub fn gauge_from_json(v: &Value) -> Result<ConvexGauge> {
    let kind = v
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| bad("gauge needs a kind field"))?;
    match kind {
        "power" => {
            let alpha = as_f64(
                v.get("alpha")
                    .ok_or_else(|| bad("power gauge needs alpha"))?,
                "gauge alpha",
            )?;
            ConvexGauge::power(alpha)
        }
        "exp_minus_one" => Ok(ConvexGauge::exp_minus_one()),
        "max_affine" => {
            let arr = v
                .get("pieces")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("max_affine gauge needs a pieces array"))?;
            let mut pieces = Vec::with_capacity(arr.len());
            for p in arr {
                let pair = p.as_array().ok_or_else(|| bad("gauge piece [m, c]"))?;
                if pair.len() != 2 {
                    return Err(bad("gauge piece must be a pair [m, c]"));
                }
                pieces.push((
                    as_f64(&pair[0], "gauge slope")?,
                    as_f64(&pair[1], "gauge intercept")?,
                ));
            }
            ConvexGauge::max_affine(&pieces)
        }
        other => Err(bad(&format!("unknown gauge kind {other}"))),
    }
}

/// Pretty-printed JSON array of reports.
pub fn reports_to_json(reports: &[InequalityReport]) -> String {
    let mut s = serde_json::to_string_pretty(reports).expect("reports serialize");
    s.push('\n');
    s
}

pub fn reports_from_json(s: &str) -> Result<Vec<InequalityReport>> {
    serde_json::from_str(s).map_err(|e| Error::Instance(format!("report JSON: {e}")))
}

/// CSV with one row per report; `instance_paths` gives the last column
/// (empty string when an instance file was not written).
pub fn reports_to_csv(
    reports: &[InequalityReport],
    instance_paths: &[String],
) -> Result<String> {
    if reports.len() != instance_paths.len() {
        return Err(Error::Instance(format!(
            "{} reports but {} instance paths",
            reports.len(),
            instance_paths.len()
        )));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "name", "lhs", "rhs", "ratio", "slack", "verdict", "seed", "instance_path",
    ])
    .map_err(|e| Error::Instance(format!("CSV: {e}")))?;
    for (r, path) in reports.iter().zip(instance_paths) {
        w.write_record([
            r.name.clone(),
            r.lhs.to_string(),
            r.rhs.to_string(),
            r.ratio.to_string(),
            r.slack.to_string(),
            r.verdict.to_string(),
            r.seed.to_string(),
            path.clone(),
        ])
        .map_err(|e| Error::Instance(format!("CSV: {e}")))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Instance(format!("CSV: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Instance(format!("CSV: {e}")))
}

/// Two-column CSV of the rotated-profile knots: `t, r_t`.
pub fn profile_to_csv(p: &SchwarzProfile) -> String {
    let mut s = String::from("t,r\n");
    for &(t, r) in p.knots() {
        s.push_str(&format!("{t},{r}\n"));
    }
    s
}
