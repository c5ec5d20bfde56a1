//! JSON encodings shared by the command line and the Python bindings.
//! Rationals are written as integers when integral and as `"num/den"`
//! strings otherwise; both forms are accepted on input.

use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Map, Value};

use crate::bounds::{BoundReport, LowerBound, LowerCertificate, UpperBound, Verdict};
use crate::classify::{exact_value, Classification, Reason, SubschemeCertificate, ValueClaim};
use crate::divisors::{ComponentClass, DivisorClass, NefCertificate};
use crate::error::{Error, Result};
use crate::field::{format_rational, parse_rational, Rational};
use crate::interp::{AlphaRecord, Coeffs, FieldMode, Form, MonomialBasis};
use crate::projective::{LinForm, Point, Subspace};
use crate::scheme::{Construction, FatComponent, FatFlatScheme, FatPointsP2, StarProvenance};

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub fn rational_to_json(q: &Rational) -> Value {
    if q.denom().is_one() {
        if let Some(i) = q.numer().to_i64() {
            return json!(i);
        }
    }
    Value::String(format_rational(q))
}

pub fn rational_from_json(v: &Value) -> Result<Rational> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(|i| Rational::from_integer(i.into()))
            .ok_or_else(|| perr(format!("not an integer: {n}"))),
        Value::String(s) => parse_rational(s),
        other => Err(perr(format!("expected a scalar, found {other}"))),
    }
}

fn get<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| perr(format!("missing field {key:?}")))
}

fn get_u64(v: &Value, key: &str) -> Result<u64> {
    get(v, key)?.as_u64().ok_or_else(|| perr(format!("field {key:?} must be a nonnegative integer")))
}

fn get_i64(v: &Value, key: &str) -> Result<i64> {
    get(v, key)?.as_i64().ok_or_else(|| perr(format!("field {key:?} must be an integer")))
}

fn get_u32(v: &Value, key: &str) -> Result<u32> {
    u32::try_from(get_u64(v, key)?).map_err(|_| perr(format!("field {key:?} is too large")))
}

fn get_str<'a>(v: &'a Value, key: &str) -> Result<&'a str> {
    get(v, key)?.as_str().ok_or_else(|| perr(format!("field {key:?} must be a string")))
}

fn get_array<'a>(v: &'a Value, key: &str) -> Result<&'a Vec<Value>> {
    get(v, key)?.as_array().ok_or_else(|| perr(format!("field {key:?} must be an array")))
}

fn u64_list(v: &Value) -> Result<Vec<u64>> {
    v.as_array()
        .ok_or_else(|| perr("expected an array of integers"))?
        .iter()
        .map(|x| x.as_u64().ok_or_else(|| perr("expected a nonnegative integer")))
        .collect()
}

fn usize_list(v: &Value) -> Result<Vec<usize>> {
    Ok(u64_list(v)?.into_iter().map(|x| x as usize).collect())
}

fn u32_list(v: &Value) -> Result<Vec<u32>> {
    u64_list(v)?.into_iter().map(|x| u32::try_from(x).map_err(|_| perr("integer too large"))).collect()
}

fn i64_list(v: &Value) -> Result<Vec<i64>> {
    v.as_array()
        .ok_or_else(|| perr("expected an array of integers"))?
        .iter()
        .map(|x| x.as_i64().ok_or_else(|| perr("expected an integer")))
        .collect()
}

fn scalars_to_json(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rational_to_json).collect())
}

fn scalars_from_json(v: &Value) -> Result<Vec<Rational>> {
    v.as_array().ok_or_else(|| perr("expected an array of scalars"))?.iter().map(rational_from_json).collect()
}

fn linform_from_json(v: &Value) -> Result<LinForm> {
    LinForm::new(scalars_from_json(v)?)
}

// Schemes

fn construction_to_json(c: &Construction) -> Value {
    let mut m = Map::new();
    m.insert("kind".into(), json!(c.kind));
    if let Some(s) = &c.star {
        m.insert(
            "star".into(),
            json!({
                "e": s.e,
                "s": s.s,
                "m": s.m,
                "hyperplanes": s.hyperplanes.iter().map(|h| scalars_to_json(h.coeffs())).collect::<Vec<_>>(),
            }),
        );
    }
    if let Some(w) = &c.predicted_waldschmidt {
        m.insert("predicted_waldschmidt".into(), rational_to_json(w));
    }
    if let Some(a) = c.predicted_linear_alpha {
        m.insert("predicted_linear_alpha".into(), json!(a));
    }
    Value::Object(m)
}

fn construction_from_json(v: &Value) -> Result<Construction> {
    let star = match v.get("star") {
        None | Some(Value::Null) => None,
        Some(s) => Some(StarProvenance {
            e: get_u64(s, "e")? as usize,
            s: get_u64(s, "s")? as usize,
            m: get_u32(s, "m")?,
            hyperplanes: get_array(s, "hyperplanes")?.iter().map(linform_from_json).collect::<Result<_>>()?,
        }),
    };
    Ok(Construction {
        kind: get_str(v, "kind")?.to_string(),
        star,
        predicted_waldschmidt: v.get("predicted_waldschmidt").map(rational_from_json).transpose()?,
        predicted_linear_alpha: v.get("predicted_linear_alpha").and_then(Value::as_u64),
    })
}

pub fn scheme_to_json(s: &FatFlatScheme) -> Value {
    let components: Vec<Value> = s
        .components()
        .iter()
        .map(|c| {
            let mut m = Map::new();
            m.insert(
                "forms".into(),
                Value::Array(c.subspace.forms().iter().map(|f| scalars_to_json(f.coeffs())).collect()),
            );
            m.insert("multiplicity".into(), json!(c.multiplicity));
            if let Some(l) = &c.label {
                m.insert("label".into(), json!(l));
            }
            Value::Object(m)
        })
        .collect();
    let mut m = Map::new();
    m.insert("ambient_dim".into(), json!(s.ambient_dim()));
    m.insert("components".into(), Value::Array(components));
    if let Some(c) = s.construction() {
        m.insert("construction".into(), construction_to_json(c));
    }
    Value::Object(m)
}

pub fn scheme_from_json(v: &Value) -> Result<FatFlatScheme> {
    let n = get_u64(v, "ambient_dim")? as usize;
    let components = get_array(v, "components")?
        .iter()
        .map(|c| {
            let forms = get_array(c, "forms")?.iter().map(linform_from_json).collect::<Result<Vec<_>>>()?;
            let comp = FatComponent::new(Subspace::new(n, forms)?, get_u32(c, "multiplicity")?);
            Ok(match c.get("label").and_then(Value::as_str) {
                Some(l) => comp.labeled(l),
                None => comp,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let scheme = FatFlatScheme::new(n, components)?;
    Ok(match v.get("construction") {
        None | Some(Value::Null) => scheme,
        Some(c) => scheme.with_construction(construction_from_json(c)?),
    })
}

pub fn points_to_json(z: &FatPointsP2) -> Value {
    json!({
        "points": z.points().iter().map(|p| scalars_to_json(p.coords())).collect::<Vec<_>>(),
        "multiplicities": z.multiplicities(),
    })
}

pub fn points_from_json(v: &Value) -> Result<FatPointsP2> {
    let points = get_array(v, "points")?
        .iter()
        .map(|p| Point::new(scalars_from_json(p)?))
        .collect::<Result<Vec<_>>>()?;
    FatPointsP2::new(points, u32_list(get(v, "multiplicities")?)?)
}

// Forms

pub fn form_to_json(f: &Form) -> Value {
    let basis = f.basis();
    let mut coeffs = Map::new();
    for (i, e) in basis.exponents().iter().enumerate() {
        let key = e.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
        match f.coeffs() {
            Coeffs::Rational(v) if !v[i].is_zero() => {
                coeffs.insert(key, rational_to_json(&v[i]));
            }
            Coeffs::Modular { values, .. } if values[i] != 0 => {
                coeffs.insert(key, json!(values[i]));
            }
            _ => {}
        }
    }
    let mut m = Map::new();
    m.insert("ambient_dim".into(), json!(f.ambient_dim()));
    m.insert("degree".into(), json!(f.degree()));
    m.insert("coeffs".into(), Value::Object(coeffs));
    if let Some(p) = f.modulus() {
        m.insert("modulus".into(), json!(p));
    }
    Value::Object(m)
}

pub fn form_from_json(v: &Value) -> Result<Form> {
    let n = get_u64(v, "ambient_dim")? as usize;
    let d = get_u32(v, "degree")?;
    let basis = MonomialBasis::new(n, d);
    let entries = get(v, "coeffs")?.as_object().ok_or_else(|| perr("coeffs must be an object"))?;
    let index = |key: &str| -> Result<usize> {
        let e = key
            .split(',')
            .map(|t| t.trim().parse::<u32>().map_err(|_| perr(format!("bad exponent tuple {key:?}"))))
            .collect::<Result<Vec<_>>>()?;
        basis.index_of(&e).ok_or_else(|| perr(format!("exponent {key:?} is not a degree-{d} monomial in {} variables", n + 1)))
    };
    let coeffs = match v.get("modulus").and_then(Value::as_u64) {
        Some(p) => {
            let mut values = vec![0u64; basis.len()];
            for (k, c) in entries {
                let x = c.as_u64().filter(|&x| x < p).ok_or_else(|| perr("modular coefficients must lie in [0, p)"))?;
                values[index(k)?] = x;
            }
            Coeffs::Modular { p, values }
        }
        None => {
            let mut values = vec![Rational::zero(); basis.len()];
            for (k, c) in entries {
                values[index(k)?] = rational_from_json(c)?;
            }
            Coeffs::Rational(values)
        }
    };
    Form::new(n, d, coeffs)
}

// Certificates

fn component_to_json(c: &ComponentClass, coeff: u32) -> Value {
    let kind = match c {
        ComponentClass::Exceptional(_) => "E",
        ComponentClass::LineTransform(_) => "line",
        ComponentClass::ConicTransform(_) => "conic",
    };
    json!({ "kind": kind, "points": c.points(), "coeff": coeff })
}

fn component_from_json(v: &Value) -> Result<(ComponentClass, u32)> {
    let points = usize_list(get(v, "points")?)?;
    let c = match get_str(v, "kind")? {
        "E" => match points.as_slice() {
            [i] => ComponentClass::Exceptional(*i),
            _ => return Err(perr("an exceptional component names exactly one point")),
        },
        "line" => ComponentClass::LineTransform(points),
        "conic" => ComponentClass::ConicTransform(points),
        other => return Err(perr(format!("unknown component kind {other:?}"))),
    };
    Ok((c, get_u32(v, "coeff")?))
}

pub fn certificate_to_json(c: &NefCertificate) -> Value {
    json!({
        "t": c.divisor.t,
        "drops": c.divisor.drops,
        "decomposition": c.decomposition.iter().map(|(k, a)| component_to_json(k, *a)).collect::<Vec<_>>(),
    })
}

pub fn certificate_from_json(v: &Value) -> Result<NefCertificate> {
    Ok(NefCertificate {
        divisor: DivisorClass::new(get_i64(v, "t")?, i64_list(get(v, "drops")?)?),
        decomposition: get_array(v, "decomposition")?.iter().map(component_from_json).collect::<Result<_>>()?,
    })
}

// Alpha tables and bound reports

fn field_mode_from_json(name: &str, primes: &Value) -> Result<FieldMode> {
    match name {
        "rational" => Ok(FieldMode::Rational),
        "modp" => {
            let p = u64_list(primes)?;
            match p.as_slice() {
                [a, b] => Ok(FieldMode::Modular { primes: [*a, *b] }),
                _ => Err(perr("modp mode needs two primes")),
            }
        }
        other => Err(perr(format!("unknown field mode {other:?}"))),
    }
}

pub fn alpha_record_to_json(r: &AlphaRecord) -> Value {
    json!({
        "k": r.k,
        "alpha": r.alpha,
        "witness": r.witness.as_ref().map(form_to_json),
        "field_mode": r.field_mode.name(),
        "primes": r.field_mode.primes(),
        "degree_cap": r.degree_cap,
        "degree_cap_hit": r.degree_cap_hit,
        "escalated": r.escalated,
    })
}

pub fn alpha_record_from_json(v: &Value) -> Result<AlphaRecord> {
    let witness = match get(v, "witness")? {
        Value::Null => None,
        w => Some(form_from_json(w)?),
    };
    let flag = |key: &str| get(v, key)?.as_bool().ok_or_else(|| perr(format!("field {key:?} must be a boolean")));
    Ok(AlphaRecord {
        k: get_u32(v, "k")?,
        alpha: get(v, "alpha")?.as_u64().map(|a| a as u32),
        witness,
        field_mode: field_mode_from_json(get_str(v, "field_mode")?, v.get("primes").unwrap_or(&Value::Null))?,
        degree_cap: get_u32(v, "degree_cap")?,
        degree_cap_hit: flag("degree_cap_hit")?,
        escalated: flag("escalated")?,
    })
}

fn lower_to_json(b: &LowerBound) -> Value {
    json!({ "value": rational_to_json(&b.value), "certificate": lower_certificate_to_json(&b.certificate) })
}

fn lower_from_json(v: &Value) -> Result<LowerBound> {
    Ok(LowerBound {
        value: rational_from_json(get(v, "value")?)?,
        certificate: lower_certificate_from_json(get(v, "certificate")?)?,
    })
}

fn lower_certificate_to_json(c: &LowerCertificate) -> Value {
    match c {
        LowerCertificate::ClosedFormStar { e, s, m } => json!({ "kind": c.name(), "e": e, "s": s, "m": m }),
        LowerCertificate::SingleComponent { index, multiplicity } => {
            json!({ "kind": c.name(), "index": index, "multiplicity": multiplicity })
        }
        LowerCertificate::Nef { points, certificate } => {
            json!({ "kind": c.name(), "points": points_to_json(points), "certificate": certificate_to_json(certificate) })
        }
        LowerCertificate::Monotone { subscheme, inner } => {
            json!({ "kind": c.name(), "subscheme": scheme_to_json(subscheme), "inner": lower_to_json(inner) })
        }
    }
}

fn lower_certificate_from_json(v: &Value) -> Result<LowerCertificate> {
    Ok(match get_str(v, "kind")? {
        "closed-form-star" => LowerCertificate::ClosedFormStar {
            e: get_u64(v, "e")? as usize,
            s: get_u64(v, "s")? as usize,
            m: get_u32(v, "m")?,
        },
        "single-component" => LowerCertificate::SingleComponent {
            index: get_u64(v, "index")? as usize,
            multiplicity: get_u32(v, "multiplicity")?,
        },
        "nef" => LowerCertificate::Nef {
            points: points_from_json(get(v, "points")?)?,
            certificate: certificate_from_json(get(v, "certificate")?)?,
        },
        "monotone" => LowerCertificate::Monotone {
            subscheme: scheme_from_json(get(v, "subscheme")?)?,
            inner: Box::new(lower_from_json(get(v, "inner")?)?),
        },
        other => return Err(perr(format!("unknown lower-bound certificate {other:?}"))),
    })
}

pub fn bound_report_to_json(r: &BoundReport) -> Value {
    let verdict = match &r.verdict {
        Verdict::Exact(v) => json!({ "kind": "exact", "value": rational_to_json(v) }),
        Verdict::Interval { lower, upper } => json!({
            "kind": "interval",
            "lower": rational_to_json(lower),
            "upper": upper.as_ref().map(rational_to_json),
        }),
    };
    json!({
        "table": r.table.iter().map(alpha_record_to_json).collect::<Vec<_>>(),
        "upper": r.upper.as_ref().map(|u| json!({ "value": rational_to_json(&u.value), "k": u.k })),
        "lower": lower_to_json(&r.lower),
        "verdict": verdict,
    })
}

pub fn bound_report_from_json(v: &Value) -> Result<BoundReport> {
    let upper = match get(v, "upper")? {
        Value::Null => None,
        u => Some(UpperBound { value: rational_from_json(get(u, "value")?)?, k: get_u32(u, "k")? }),
    };
    let vd = get(v, "verdict")?;
    let verdict = match get_str(vd, "kind")? {
        "exact" => Verdict::Exact(rational_from_json(get(vd, "value")?)?),
        "interval" => Verdict::Interval {
            lower: rational_from_json(get(vd, "lower")?)?,
            upper: match vd.get("upper") {
                None | Some(Value::Null) => None,
                Some(u) => Some(rational_from_json(u)?),
            },
        },
        other => return Err(perr(format!("unknown verdict {other:?}"))),
    };
    Ok(BoundReport {
        table: get_array(v, "table")?.iter().map(alpha_record_from_json).collect::<Result<_>>()?,
        upper,
        lower: lower_from_json(get(v, "lower")?)?,
        verdict,
    })
}

// Classifications

fn sub_certificate_to_json(c: &SubschemeCertificate) -> Value {
    json!({
        "indices": c.indices,
        "multiplicities": c.multiplicities,
        "certificate": certificate_to_json(&c.certificate),
    })
}

fn sub_certificate_from_json(v: &Value) -> Result<SubschemeCertificate> {
    Ok(SubschemeCertificate {
        indices: usize_list(get(v, "indices")?)?,
        multiplicities: u32_list(get(v, "multiplicities")?)?,
        certificate: certificate_from_json(get(v, "certificate")?)?,
    })
}

fn reason_to_json(r: &Reason) -> Value {
    let mut m = Map::new();
    m.insert("kind".into(), json!(r.name()));
    match r {
        Reason::MultiplicityAtLeast3 { index, multiplicity } => {
            m.insert("index".into(), json!(index));
            m.insert("multiplicity".into(), json!(multiplicity));
        }
        Reason::Figure3Bound { n, value, .. } => {
            m.insert("n".into(), json!(n));
            m.insert("value".into(), rational_to_json(value));
        }
        _ => {}
    }
    if let Some(c) = r.certificate() {
        m.insert("certificate".into(), sub_certificate_to_json(c));
    }
    Value::Object(m)
}

fn reason_from_json(v: &Value) -> Result<Reason> {
    let cert = || sub_certificate_from_json(get(v, "certificate")?);
    Ok(match get_str(v, "kind")? {
        "multiplicity-at-least-3" => Reason::MultiplicityAtLeast3 {
            index: get_u64(v, "index")? as usize,
            multiplicity: get_u32(v, "multiplicity")?,
        },
        "two-doubles" => Reason::TwoDoublesCertificate(cert()?),
        "general-position-conic" => Reason::GeneralPositionConic(cert()?),
        "two-lines-split" => Reason::TwoLinesSplitSubscheme(cert()?),
        "double-off-line" => Reason::Figure3Bound {
            n: get_u64(v, "n")? as usize,
            value: rational_from_json(get(v, "value")?)?,
            certificate: cert()?,
        },
        other => return Err(perr(format!("unknown reason {other:?}"))),
    })
}

/// Classification JSON, with the implied value claim for `z`.
pub fn classification_to_json(c: &Classification, z: &FatPointsP2) -> Result<Value> {
    let mut m = Map::new();
    m.insert("verdict".into(), json!(c.name()));
    match c {
        Classification::CaseA => {}
        Classification::CaseB { double } => {
            m.insert("double".into(), json!(double));
        }
        Classification::CaseC { double, certificate } => {
            m.insert("double".into(), json!(double));
            m.insert("certificate".into(), sub_certificate_to_json(certificate));
        }
        Classification::NotBelowFiveHalves(r) => {
            m.insert("reason".into(), reason_to_json(r));
        }
    }
    let value = match exact_value(c, z)? {
        ValueClaim::Exact(v) => json!({ "exact": rational_to_json(&v) }),
        ValueClaim::AtLeast(v) => json!({ "at_least": rational_to_json(&v) }),
    };
    m.insert("value".into(), value);
    Ok(Value::Object(m))
}

pub fn classification_from_json(v: &Value) -> Result<Classification> {
    Ok(match get_str(v, "verdict")? {
        "case-a" => Classification::CaseA,
        "case-b" => Classification::CaseB { double: get_u64(v, "double")? as usize },
        "case-c" => Classification::CaseC {
            double: get_u64(v, "double")? as usize,
            certificate: sub_certificate_from_json(get(v, "certificate")?)?,
        },
        "not-below-5/2" => Classification::NotBelowFiveHalves(reason_from_json(get(v, "reason")?)?),
        other => return Err(perr(format!("unknown verdict {other:?}"))),
    })
}
