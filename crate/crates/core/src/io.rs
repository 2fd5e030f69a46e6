//! JSON encodings of fixed data, seeds, cones, diagrams, products and series.
//!
//! Every top-level document carries `"format": 1`. Rationals are written as
//! `[numerator, denominator]` pairs; each entry is a JSON integer when it fits
//! in 64 bits and a decimal string otherwise.

use crate::cones::Cone;
use crate::csd::{ScatteringDiagram, Wall};
use crate::dilogprod::Factor;
use crate::lattice::{FixedData, MTilde, NVec, Seed};
use crate::seriesrep::TruncatedSeries;
use crate::{invalid, Result, Q};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Map, Value};

pub const FORMAT: i64 = 1;

fn big_to_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

fn big_from_json(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => match n.as_i64() {
            Some(x) => Ok(BigInt::from(x)),
            None => invalid(format!("expected an integer, found {n}")),
        },
        Value::String(s) => s.parse().or_else(|_| invalid(format!("expected an integer, found '{s}'"))),
        other => invalid(format!("expected an integer, found {other}")),
    }
}

/// A rational as `[num, den]`.
pub fn q_to_json(x: &Q) -> Value {
    json!([big_to_json(x.numer()), big_to_json(x.denom())])
}

/// Reads `[num, den]`, a bare integer, or a string such as `"13/2"`.
pub fn q_from_json(v: &Value) -> Result<Q> {
    match v {
        Value::Array(a) if a.len() == 2 => {
            let (n, d) = (big_from_json(&a[0])?, big_from_json(&a[1])?);
            if d.is_zero() {
                return invalid("zero denominator");
            }
            Ok(Q::new(n, d))
        }
        Value::Number(_) => Ok(Q::from_integer(big_from_json(v)?)),
        Value::String(s) => crate::rat::parse_q(s).map_or_else(|| invalid(format!("bad rational '{s}'")), Ok),
        other => invalid(format!("expected a rational, found {other}")),
    }
}

fn qvec_to_json(v: &[Q]) -> Value {
    Value::Array(v.iter().map(q_to_json).collect())
}

fn qvec_from_json(v: &Value) -> Result<Vec<Q>> {
    array(v)?.iter().map(q_from_json).collect()
}

fn ivec_from_json(v: &Value) -> Result<Vec<i64>> {
    array(v)?
        .iter()
        .map(|x| x.as_i64().map_or_else(|| invalid(format!("expected an integer, found {x}")), Ok))
        .collect()
}

fn array(v: &Value) -> Result<&Vec<Value>> {
    v.as_array().map_or_else(|| invalid(format!("expected an array, found {v}")), Ok)
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).map_or_else(|| invalid(format!("missing field '{key}'")), Ok)
}

fn int_field(v: &Value, key: &str) -> Result<i64> {
    let f = field(v, key)?;
    f.as_i64().map_or_else(|| invalid(format!("field '{key}' must be an integer")), Ok)
}

fn check_format(v: &Value) -> Result<()> {
    match v.get("format") {
        None => Ok(()),
        Some(f) if f.as_i64() == Some(FORMAT) => Ok(()),
        Some(f) => invalid(format!("unsupported format {f}; expected {FORMAT}")),
    }
}

fn with_format(mut v: Value) -> Value {
    if let Value::Object(map) = &mut v {
        let mut out = Map::new();
        out.insert("format".into(), json!(FORMAT));
        out.extend(std::mem::take(map));
        *map = out;
    }
    v
}

/// `{"rank": r, "omega": [[[num,den],...],...], "delta": [...]}`.
pub fn fixed_data_to_json(d: &FixedData) -> Value {
    json!({
        "rank": d.rank(),
        "omega": d.omega().iter().map(|row| qvec_to_json(row)).collect::<Vec<_>>(),
        "delta": d.delta(),
    })
}

pub fn fixed_data_from_json(v: &Value) -> Result<FixedData> {
    let r = int_field(v, "rank")? as usize;
    let omega: Vec<Vec<Q>> = array(field(v, "omega")?)?.iter().map(qvec_from_json).collect::<Result<_>>()?;
    let delta = ivec_from_json(field(v, "delta")?)?;
    if omega.len() != r || delta.len() != r || omega.iter().any(|row| row.len() != r) {
        return invalid("fixed data dimensions do not match the rank");
    }
    FixedData::new(omega, delta)
}

/// A seed: its fixed data, mutation word and basis in initial coordinates.
pub fn seed_to_json(s: &Seed) -> Value {
    json!({ "data": fixed_data_to_json(&s.data), "word": s.word, "basis": s.basis })
}

pub fn seed_from_json(v: &Value) -> Result<Seed> {
    let data = fixed_data_from_json(field(v, "data")?)?;
    let r = data.rank();
    let word = match v.get("word") {
        Some(w) => ivec_from_json(w)?.into_iter().map(|x| x as usize).collect(),
        None => Vec::new(),
    };
    let basis: Vec<NVec> = match v.get("basis") {
        Some(b) => array(b)?.iter().map(ivec_from_json).collect::<Result<_>>()?,
        None => (0..r).map(|i| data.e(i)).collect(),
    };
    if basis.len() != r || basis.iter().any(|b| b.len() != r) {
        return invalid("seed basis dimensions do not match the rank");
    }
    Ok(Seed { data, word, basis })
}

/// `{"generators": [[...rationals...]]}`; lineality directions appear as `+/-` pairs.
pub fn cone_to_json(c: &Cone) -> Value {
    json!({ "ambient": c.ambient(), "generators": c.generators().iter().map(|g| qvec_to_json(g)).collect::<Vec<_>>() })
}

pub fn cone_from_json(v: &Value, ambient: usize) -> Result<Cone> {
    let gens: Vec<Vec<Q>> = array(field(v, "generators")?)?.iter().map(qvec_from_json).collect::<Result<_>>()?;
    let d = v.get("ambient").and_then(Value::as_u64).map_or(ambient, |x| x as usize);
    if gens.iter().any(|g| g.len() != d) {
        return invalid("cone generator has the wrong length");
    }
    Ok(Cone::from_generators(d, &gens))
}

fn wall_to_json(w: &Wall) -> Value {
    json!({ "normal": w.normal, "t": w.t, "s": q_to_json(&w.s), "support": cone_to_json(&w.support) })
}

fn wall_from_json(data: &FixedData, v: &Value) -> Result<Wall> {
    let normal = ivec_from_json(field(v, "normal")?)?;
    let t = int_field(v, "t")?;
    let s = q_from_json(field(v, "s")?)?;
    let support = cone_from_json(field(v, "support")?, data.rank())?;
    Wall::new(data, support, normal, t, s)
}

/// `{"format": 1, "seed": ..., "cutoff": l, "walls": [...]}`.
pub fn diagram_to_json(d: &ScatteringDiagram) -> Value {
    with_format(json!({
        "seed": seed_to_json(&d.seed),
        "cutoff": d.cutoff,
        "walls": d.walls.iter().map(wall_to_json).collect::<Vec<_>>(),
    }))
}

pub fn diagram_from_json(v: &Value) -> Result<ScatteringDiagram> {
    check_format(v)?;
    let seed = seed_from_json(field(v, "seed")?)?;
    let cutoff = int_field(v, "cutoff")?;
    let walls = array(field(v, "walls")?)?.iter().map(|w| wall_from_json(&seed.data, w)).collect::<Result<_>>()?;
    Ok(ScatteringDiagram::new(seed, cutoff, walls))
}

/// A product as a list of `[n_1, ..., n_r, [num, den]]`, left to right.
pub fn product_to_json(c: &[Factor]) -> Value {
    Value::Array(
        c.iter()
            .map(|f| {
                let mut row: Vec<Value> = f.n.iter().map(|x| json!(x)).collect();
                row.push(q_to_json(&f.c));
                Value::Array(row)
            })
            .collect(),
    )
}

/// Reads a product written as `[n_1, ..., n_r, c]` rows, `c` in any accepted rational form.
pub fn product_from_json(v: &Value) -> Result<Vec<Factor>> {
    array(v)?
        .iter()
        .map(|row| {
            let row = array(row)?;
            if row.len() < 2 {
                return invalid("a factor needs a normal and an exponent");
            }
            let n = ivec_from_json(&Value::Array(row[..row.len() - 1].to_vec()))?;
            Ok(Factor::new(n, q_from_json(&row[row.len() - 1])?))
        })
        .collect()
}

fn mtilde_to_json(m: &MTilde) -> Value {
    json!({ "m": qvec_to_json(&m.m), "n": m.n })
}

fn mtilde_from_json(v: &Value) -> Result<MTilde> {
    Ok(MTilde::new(qvec_from_json(field(v, "m")?)?, ivec_from_json(field(v, "n")?)?))
}

/// `{"format": 1, "base": {"m": [...], "n": [...]}, "cutoff": l, "terms": [{"shift": [...], "coeff": [num, den]}]}`.
pub fn series_to_json(s: &TruncatedSeries) -> Value {
    with_format(json!({
        "base": mtilde_to_json(&s.base),
        "cutoff": s.cutoff,
        "terms": s.terms.iter().map(|(a, c)| json!({"shift": a, "coeff": q_to_json(c)})).collect::<Vec<_>>(),
    }))
}

pub fn series_from_json(v: &Value) -> Result<TruncatedSeries> {
    check_format(v)?;
    let base = mtilde_from_json(field(v, "base")?)?;
    let mut s = TruncatedSeries::zero(base, int_field(v, "cutoff")?);
    for t in array(field(v, "terms")?)? {
        s.add_term(ivec_from_json(field(t, "shift")?)?, q_from_json(field(t, "coeff")?)?);
    }
    Ok(s)
}

/// Parses the bracketed list syntax `[[0,1,5],[2,2,1/2]]` used for products on
/// the command line. Entries are integers or fractions `a/b`.
pub fn parse_list(text: &str) -> Result<Value> {
    fn item(chars: &[char], pos: &mut usize) -> Result<Value> {
        while *pos < chars.len() && chars[*pos].is_whitespace() {
            *pos += 1;
        }
        if *pos >= chars.len() {
            return invalid("unexpected end of list");
        }
        if chars[*pos] == '[' {
            *pos += 1;
            let mut out = Vec::new();
            loop {
                while *pos < chars.len() && chars[*pos].is_whitespace() {
                    *pos += 1;
                }
                if *pos < chars.len() && chars[*pos] == ']' {
                    *pos += 1;
                    return Ok(Value::Array(out));
                }
                out.push(item(chars, pos)?);
                while *pos < chars.len() && chars[*pos].is_whitespace() {
                    *pos += 1;
                }
                match chars.get(*pos) {
                    Some(',') => *pos += 1,
                    Some(']') => {}
                    _ => return invalid("expected ',' or ']' in list"),
                }
            }
        }
        let start = *pos;
        while *pos < chars.len() && (chars[*pos].is_ascii_digit() || "-+/".contains(chars[*pos])) {
            *pos += 1;
        }
        let tok: String = chars[start..*pos].iter().collect();
        let x = crate::rat::parse_q(&tok).map_or_else(|| invalid(format!("bad number '{tok}'")), Ok)?;
        Ok(if x.is_integer() { big_to_json(&x.to_integer()) } else { json!(crate::rat::fmt_q(&x)) })
    }
    let chars: Vec<char> = text.chars().collect();
    let mut pos = 0;
    let v = item(&chars, &mut pos)?;
    if chars[pos..].iter().any(|c| !c.is_whitespace()) {
        return invalid("trailing characters after list");
    }
    Ok(v)
}

/// Formats a product the way the bracketed list syntax reads it, one factor per line.
pub fn product_to_list_text(c: &[Factor]) -> String {
    let rows: Vec<String> = c
        .iter()
        .map(|f| {
            let mut parts: Vec<String> = f.n.iter().map(|x| x.to_string()).collect();
            parts.push(crate::rat::fmt_q(&f.c));
            format!("[{}]", parts.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(",\n "))
}
