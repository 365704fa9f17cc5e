//! Curve descriptors: `name[:key=value[,key=value]*]`.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::Deserialize;

use crate::curve::{catalog, CurveSpec};
use crate::error::{Error, Result};
use crate::geom::Vec2;

/// A parsed descriptor. Values are kept as text until the curve is built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Descriptor {
    pub name: String,
    pub params: Vec<(String, String)>,
}

impl FromStr for Descriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, rest) = match s.split_once(':') {
            Some((n, r)) => (n, Some(r)),
            None => (s, None),
        };
        if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(Error::Parse(format!("bad curve name {name:?} in descriptor {s:?}")));
        }
        let mut params = Vec::new();
        if let Some(rest) = rest {
            for item in rest.split(',') {
                let (k, v) = item
                    .split_once('=')
                    .ok_or_else(|| Error::Parse(format!("expected key=value, got {item:?}")))?;
                let (k, v) = (k.trim(), v.trim());
                if k.is_empty() || v.is_empty() {
                    return Err(Error::Parse(format!("empty key or value in {item:?}")));
                }
                if params.iter().any(|(p, _): &(String, String)| p == k) {
                    return Err(Error::Parse(format!("duplicate key {k:?}")));
                }
                params.push((k.to_string(), v.to_string()));
            }
        }
        Ok(Descriptor { name: name.to_string(), params })
    }
}

impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        for (i, (k, v)) in self.params.iter().enumerate() {
            write!(f, "{}{k}={v}", if i == 0 { ':' } else { ',' })?;
        }
        Ok(())
    }
}

struct Params<'a> {
    desc: &'a Descriptor,
    used: Vec<&'a str>,
}

impl<'a> Params<'a> {
    fn raw(&mut self, key: &'a str) -> Option<&'a str> {
        self.used.push(key);
        self.desc.params.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    fn num(&mut self, key: &'a str, default: f64) -> Result<f64> {
        match self.raw(key) {
            None => Ok(default),
            Some(v) => v
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| Error::Parse(format!("{key}={v} is not a finite number"))),
        }
    }

    fn opt_num(&mut self, key: &'a str) -> Result<Option<f64>> {
        if self.desc.params.iter().any(|(k, _)| k == key) {
            self.num(key, 0.0).map(Some)
        } else {
            self.used.push(key);
            Ok(None)
        }
    }

    fn finish(&self) -> Result<()> {
        for (k, _) in &self.desc.params {
            if !self.used.contains(&k.as_str()) {
                return Err(Error::Parse(format!("unknown key {k:?} for curve {:?}", self.desc.name)));
            }
        }
        Ok(())
    }
}

/// Catalog names accepted by [`build_curve`].
pub const CATALOG: &[&str] = &[
    "circle",
    "ellipse",
    "parabola",
    "logarithmic_spiral",
    "cycloid",
    "limacon",
    "figure_eight",
    "radius_profile",
    "flat_profile",
    "csv",
];

/// Builds the curve named by a descriptor. `t0` and `t1` override the
/// parameter interval of any curve; `csv:path=FILE` reads `t,x,y` samples.
pub fn build_curve(desc: &Descriptor) -> Result<CurveSpec> {
    let mut p = Params { desc, used: Vec::new() };
    let spec = match desc.name.as_str() {
        "circle" => catalog::circle(p.num("r", 1.0)?),
        "ellipse" => catalog::ellipse(p.num("a", 2.0)?, p.num("b", 1.0)?),
        "parabola" => catalog::parabola(),
        "logarithmic_spiral" => catalog::logarithmic_spiral(p.num("k", 1.0)?),
        "cycloid" => catalog::cycloid(),
        "limacon" => catalog::limacon_default(),
        "figure_eight" => catalog::figure_eight(),
        "radius_profile" => {
            let m = p.num("m", 2.0)?;
            if !(m >= 1.0 && m.fract() == 0.0 && m <= 64.0) {
                return Err(Error::Parse(format!("m={m} must be a positive integer")));
            }
            catalog::radius_profile(m as u32, p.num("c", 1.0)?, p.num("R0", 1.0)?)
        }
        "flat_profile" => catalog::flat_profile(p.num("R0", 1.0)?),
        "csv" => {
            let path = p.raw("path").ok_or_else(|| Error::Parse("csv descriptor needs path=FILE".into()))?;
            read_samples(Path::new(path))
        }
        other => {
            return Err(Error::Parse(format!("unknown curve {other:?}; known: {}", CATALOG.join(", "))));
        }
    }?;
    let t0 = p.opt_num("t0")?;
    let t1 = p.opt_num("t1")?;
    p.finish()?;
    if t0.is_none() && t1.is_none() {
        return Ok(spec);
    }
    let (a, b) = spec.interval();
    spec.with_interval((t0.unwrap_or(a), t1.unwrap_or(b)))
}

#[derive(Deserialize)]
struct Row {
    t: f64,
    x: f64,
    y: f64,
}

/// Reads a `t,x,y` CSV into a sampled curve.
pub fn read_samples(path: &Path) -> Result<CurveSpec> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let headers = rdr.headers().map_err(|e| Error::Parse(e.to_string()))?.clone();
    if headers.iter().collect::<Vec<_>>() != ["t", "x", "y"] {
        return Err(Error::Parse(format!("{}: header must be t,x,y", path.display())));
    }
    let mut t = Vec::new();
    let mut pts = Vec::new();
    for row in rdr.deserialize::<Row>() {
        let row = row.map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        t.push(row.t);
        pts.push(Vec2::new(row.x, row.y));
    }
    CurveSpec::sampled(t, pts)
}
