//! File formats: configuration JSON and trajectory CSV.
//!
//! Complex numbers are `[re, im]` pairs; the point at infinity is the
//! string `"inf"`.

use std::io::{Read, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize, Serializer};

use crate::dynamics::{Body, Configuration, Sample, StepStats, Termination, Trajectory};
use crate::error::{Error, Result};
use crate::geom::{CurvatureRadius, PlanePoint};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BodyJson {
    pub mass: f64,
    pub z: [f64; 2],
    #[serde(default)]
    pub v: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigJson {
    #[serde(rename = "R")]
    pub radius: f64,
    pub bodies: Vec<BodyJson>,
}

impl From<&Configuration> for ConfigJson {
    fn from(c: &Configuration) -> Self {
        Self {
            radius: c.radius().get(),
            bodies: c
                .bodies()
                .iter()
                .map(|b| BodyJson {
                    mass: b.mass,
                    z: [b.z.re, b.z.im],
                    v: [b.v.re, b.v.im],
                })
                .collect(),
        }
    }
}

impl TryFrom<ConfigJson> for Configuration {
    type Error = Error;

    fn try_from(j: ConfigJson) -> Result<Self> {
        let radius = CurvatureRadius::new(j.radius)?;
        let bodies = j
            .bodies
            .into_iter()
            .map(|b| Body::new(b.mass, Complex64::new(b.z[0], b.z[1]), Complex64::new(b.v[0], b.v[1])))
            .collect();
        Configuration::new(radius, bodies)
    }
}

/// Deserialization errors carry the path of the offending field, e.g. `bodies[1].z`.
fn located(e: serde_path_to_error::Error<serde_json::Error>) -> Error {
    let path = e.path().to_string();
    let inner = e.into_inner();
    if path == "." || path.is_empty() {
        Error::Json(inner)
    } else {
        Error::Parse(format!("json field `{path}`: {inner}"))
    }
}

pub fn read_config<R: Read>(reader: R) -> Result<Configuration> {
    let mut de = serde_json::Deserializer::from_reader(reader);
    let j: ConfigJson = serde_path_to_error::deserialize(&mut de).map_err(located)?;
    j.try_into()
}

pub fn config_from_str(s: &str) -> Result<Configuration> {
    let mut de = serde_json::Deserializer::from_str(s);
    let j: ConfigJson = serde_path_to_error::deserialize(&mut de).map_err(located)?;
    j.try_into()
}

pub fn config_to_string(c: &Configuration) -> Result<String> {
    Ok(serde_json::to_string_pretty(&ConfigJson::from(c))?)
}

pub fn complex_json(z: Complex64) -> serde_json::Value {
    serde_json::json!([z.re, z.im])
}

pub fn plane_point_json(p: PlanePoint) -> serde_json::Value {
    match p {
        PlanePoint::Finite(z) => complex_json(z),
        PlanePoint::Infinity => serde_json::Value::String("inf".into()),
    }
}

pub fn serialize_complex_vec<S: Serializer>(v: &[Complex64], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|z| [z.re, z.im]))
}

pub fn csv_header(n: usize) -> Vec<String> {
    let mut h = vec!["t".to_string()];
    for k in 0..n {
        for part in ["z_re", "z_im", "v_re", "v_im"] {
            h.push(format!("{part}{k}"));
        }
    }
    h.push("energy".into());
    h
}

pub fn write_trajectory_csv<W: Write>(traj: &Trajectory, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(csv_header(traj.masses.len()))?;
    for s in &traj.samples {
        let mut row = vec![s.t.to_string()];
        for (z, v) in s.z.iter().zip(&s.v) {
            row.extend([z.re, z.im, v.re, v.im].iter().map(f64::to_string));
        }
        row.push(s.energy.total.to_string());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a trajectory written by [`write_trajectory_csv`]; masses and R come
/// from the accompanying configuration. Energies are recomputed from the
/// states.
pub fn read_trajectory_csv<R: Read>(reader: R, config: &Configuration) -> Result<Trajectory> {
    let n = config.n();
    let mut rd = csv::Reader::from_reader(reader);
    let header: Vec<String> = rd.headers()?.iter().map(str::to_string).collect();
    if header != csv_header(n) {
        return Err(Error::Parse(format!(
            "trajectory header does not match a {n}-body configuration"
        )));
    }
    let mut samples = Vec::new();
    for (line, rec) in rd.records().enumerate() {
        let rec = rec?;
        let vals = rec
            .iter()
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Parse(format!("row {}: bad number '{s}'", line + 1)))
            })
            .collect::<Result<Vec<f64>>>()?;
        let z: Vec<Complex64> = (0..n).map(|k| Complex64::new(vals[1 + 4 * k], vals[2 + 4 * k])).collect();
        let v: Vec<Complex64> = (0..n).map(|k| Complex64::new(vals[3 + 4 * k], vals[4 + 4 * k])).collect();
        let cfg = Configuration::from_parts(config.radius(), &config.masses(), &z, Some(&v))?;
        samples.push(Sample {
            t: vals[0],
            z,
            v,
            energy: crate::dynamics::energy(&cfg),
        });
    }
    if samples.is_empty() {
        return Err(Error::Parse("trajectory has no rows".into()));
    }
    if samples.windows(2).any(|w| w[1].t <= w[0].t) {
        return Err(Error::Parse("trajectory times must be strictly increasing".into()));
    }
    Ok(Trajectory {
        radius: config.radius(),
        masses: config.masses(),
        samples,
        stats: StepStats::default(),
        termination: Termination::Completed,
    })
}
