//! `--domain` descriptors:
//!
//! * `{"center": "1", "radius": "2"}`: a disc;
//! * `{"center": ["0", "1"], "radii": ["1", "1/2"]}`: a polydisc;
//! * `{"holes": [{"center": "1", "radius": "2"}]}`: the unit disc with open
//!   discs removed.
//!
//! Radii are valuations. Scalars use the backend's text format, and numbers
//! may be given bare.

use anyhow::{anyhow, bail, Context, Result};
use infdiff::affinoid::{Domain, Hole, HoledDisc, Polydisc};
use infdiff::scalar::{Backend, Scalar};
use infdiff::text::{parse_rational, parse_scalar};
use num_rational::BigRational;
use serde_json::{Map, Value};

fn text(v: &Value, what: &str) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        _ => bail!("{} must be a string or a number", what),
    }
}

fn scalar(v: &Value, backend: Backend) -> Result<Scalar> {
    let s = text(v, "a center")?;
    parse_scalar(&s, backend).with_context(|| format!("bad center `{}`", s))
}

fn radius(v: &Value) -> Result<BigRational> {
    let s = text(v, "a radius")?;
    parse_rational(&s).with_context(|| format!("bad radius `{}`", s))
}

fn list<'a>(m: &'a Map<String, Value>, key: &str) -> Result<&'a Vec<Value>> {
    m.get(key)
        .and_then(Value::as_array)
        .ok_or_else(|| anyhow!("`{}` must be an array", key))
}

pub fn parse_domain(json: &str, backend: Backend) -> Result<Domain> {
    let v: Value = serde_json::from_str(json).context("domain descriptor is not JSON")?;
    let m = v
        .as_object()
        .ok_or_else(|| anyhow!("domain descriptor must be an object"))?;
    if let Some(holes) = m.get("holes") {
        let holes = holes
            .as_array()
            .ok_or_else(|| anyhow!("`holes` must be an array"))?
            .iter()
            .map(|h| {
                let center = h
                    .get("center")
                    .ok_or_else(|| anyhow!("hole without center"))?;
                let r = h
                    .get("radius")
                    .ok_or_else(|| anyhow!("hole without radius"))?;
                Ok(Hole {
                    center: scalar(center, backend)?,
                    radius: radius(r)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        return Ok(Domain::Holed(HoledDisc::new(backend, holes)?));
    }
    let center = m
        .get("center")
        .ok_or_else(|| anyhow!("domain without center"))?;
    if center.is_array() {
        let c = list(m, "center")?
            .iter()
            .map(|v| scalar(v, backend))
            .collect::<Result<Vec<_>>>()?;
        let r = list(m, "radii")?
            .iter()
            .map(radius)
            .collect::<Result<Vec<_>>>()?;
        return Ok(Domain::Polydisc(Polydisc::new(c, r)?));
    }
    let r = m
        .get("radius")
        .ok_or_else(|| anyhow!("disc without radius"))?;
    Ok(Domain::Polydisc(Polydisc::new(
        vec![scalar(center, backend)?],
        vec![radius(r)?],
    )?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn descriptors() {
        let b = Backend::PAdic(2);
        let Domain::Polydisc(p) = parse_domain(r#"{"center": 3, "radius": "2"}"#, b).unwrap()
        else {
            panic!()
        };
        assert_eq!(p.center(), &[Scalar::from_integer(b, 3)]);
        let d = parse_domain(r#"{"center": ["0", "1"], "radii": [1, 1]}"#, b).unwrap();
        assert_eq!(d.dim(), 2);
        let h = parse_domain(r#"{"holes": [{"center": "1", "radius": 2}]}"#, b).unwrap();
        assert!(matches!(h, Domain::Holed(_)));
    }

    #[test]
    fn malformed_descriptors() {
        let b = Backend::Hahn;
        assert!(parse_domain("[1]", b).is_err());
        assert!(parse_domain(r#"{"center": "1"}"#, b).is_err());
        assert!(parse_domain(r#"{"center": "1/0", "radius": 1}"#, b).is_err());
        assert!(parse_domain(r#"{"center": "t^(-1)", "radius": 1}"#, b).is_err());
        assert!(parse_domain(
            r#"{"holes": [{"center": "0", "radius": 1}, {"center": "t^(2)", "radius": 1}]}"#,
            b
        )
        .is_err());
    }
}
