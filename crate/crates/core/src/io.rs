//! Artifact formats: profile and field CSV, JSON records for certificates
//! and half-strip runs.
//!
//! Numbers are written with `{:.16e}` so every value round-trips exactly;
//! the infinite slope at `t = 0` is written as `inf`.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ode::{ExtinctionCertificate, ExtinctionMethod};
use crate::pde::HalfStripSolution;
use crate::sampled::SampledProfile;

pub const PROFILE_HEADER: &str = "t,v,vp";
pub const FIELD_HEADER: &str = "x,z,u";

fn io_err(e: std::io::Error) -> Error {
    Error::Domain(format!("i/o failure: {e}"))
}

pub fn write_profile_csv<W: Write>(profile: &SampledProfile, mut out: W) -> Result<()> {
    write_columns_csv(&profile.grid, &profile.values, &profile.slopes, &mut out)
}

pub fn write_columns_csv<W: Write>(t: &[f64], v: &[f64], vp: &[f64], mut out: W) -> Result<()> {
    writeln!(out, "{PROFILE_HEADER}").map_err(io_err)?;
    for ((t, v), vp) in t.iter().zip(v).zip(vp) {
        writeln!(out, "{t:.16e},{v:.16e},{vp:.16e}").map_err(io_err)?;
    }
    Ok(())
}

/// Columns of a profile CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileColumns {
    pub t: Vec<f64>,
    pub v: Vec<f64>,
    pub vp: Vec<f64>,
}

pub fn read_profile_csv<R: BufRead>(input: R) -> Result<ProfileColumns> {
    let mut lines = input.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Domain("empty profile file".into()))?
        .map_err(io_err)?;
    if header.trim() != PROFILE_HEADER {
        return Err(Error::Domain(format!(
            "expected header `{PROFILE_HEADER}`, found `{}`",
            header.trim()
        )));
    }
    let mut cols = ProfileColumns {
        t: Vec::new(),
        v: Vec::new(),
        vp: Vec::new(),
    };
    for (lineno, line) in lines.enumerate() {
        let line = line.map_err(io_err)?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(Error::Domain(format!(
                "line {}: expected 3 fields",
                lineno + 2
            )));
        }
        let parse = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| Error::Domain(format!("line {}: cannot parse `{s}`", lineno + 2)))
        };
        cols.t.push(parse(fields[0])?);
        cols.v.push(parse(fields[1])?);
        cols.vp.push(parse(fields[2])?);
    }
    Ok(cols)
}

/// Field CSV, one row per node, `z` outer and `x` inner.
pub fn write_field_csv<W: Write>(solution: &HalfStripSolution, mut out: W) -> Result<()> {
    let geom = solution.problem.geometry;
    writeln!(out, "{FIELD_HEADER}").map_err(io_err)?;
    for k in 0..geom.nz {
        let z = geom.z(k);
        for i in 0..geom.nx {
            let x = geom.x(i);
            let u = solution.field[k * geom.nx + i];
            writeln!(out, "{x:.16e},{z:.16e},{u:.16e}").map_err(io_err)?;
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateRecord {
    pub gamma: f64,
    pub t0: f64,
    pub u0: f64,
    pub du0: f64,
    #[serde(rename = "E")]
    pub energy: f64,
    pub u_max: Option<f64>,
    pub t_turn: Option<f64>,
    pub t_extinction: f64,
    pub method: String,
}

impl From<&ExtinctionCertificate> for CertificateRecord {
    fn from(c: &ExtinctionCertificate) -> Self {
        Self {
            gamma: c.gamma.value(),
            t0: c.initial.0,
            u0: c.initial.1,
            du0: c.initial.2,
            energy: c.energy,
            u_max: c.turning_point.map(|p| p.1),
            t_turn: c.turning_point.map(|p| p.0),
            t_extinction: c.extinction_time,
            method: match c.method {
                ExtinctionMethod::Quadrature => "quadrature",
                ExtinctionMethod::Integration => "integration",
            }
            .to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldSidecar {
    pub gamma: f64,
    #[serde(rename = "L")]
    pub length: f64,
    #[serde(rename = "H")]
    pub height: f64,
    pub nx: usize,
    pub nz: usize,
    pub residual_max: f64,
    pub symmetry_defect: f64,
    pub profile_error: Option<f64>,
    pub newton_iters: usize,
    pub seed: u64,
}

impl From<&HalfStripSolution> for FieldSidecar {
    fn from(s: &HalfStripSolution) -> Self {
        let g = s.problem.geometry;
        Self {
            gamma: s.problem.gamma.value(),
            length: g.length,
            height: g.height,
            nx: g.nx,
            nz: g.nz,
            residual_max: s.residual_max,
            symmetry_defect: s.symmetry_defect,
            profile_error: Some(s.profile_error).filter(|e| e.is_finite()),
            newton_iters: s.newton_iters,
            seed: s.problem.seed,
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| Error::Domain(format!("serialization failed: {e}")))?;
    s.push('\n');
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_csv_round_trips_exactly() {
        let t = vec![0.0, 1e-7, 0.1, 1.0 / 3.0];
        let v: Vec<f64> = t.iter().map(|t: &f64| (t * t + 2.0 * t).sqrt()).collect();
        let vp = vec![f64::INFINITY, 2.5, 1.0 / 7.0, 0.9];
        let mut buf = Vec::new();
        write_columns_csv(&t, &v, &vp, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("t,v,vp\n0.0000000000000000e0,0.0000000000000000e0,inf\n"));
        let back = read_profile_csv(buf.as_slice()).unwrap();
        assert_eq!(back, ProfileColumns { t, v, vp });
    }

    #[test]
    fn bad_csv_is_rejected() {
        assert!(read_profile_csv("a,b\n".as_bytes()).is_err());
        assert!(read_profile_csv("t,v,vp\n1,2\n".as_bytes()).is_err());
        assert!(read_profile_csv("t,v,vp\n1,x,3\n".as_bytes()).is_err());
    }

    #[test]
    fn certificate_record_uses_null_for_missing_turn() {
        let rec = CertificateRecord {
            gamma: 1.0,
            t0: 0.0,
            u0: 1.0,
            du0: -1.0,
            energy: 0.5,
            u_max: None,
            t_turn: None,
            t_extinction: 0.7,
            method: "quadrature".into(),
        };
        let json = to_json(&rec).unwrap();
        assert!(json.contains("\"E\": 0.5") && json.contains("\"u_max\": null"));
        let back: CertificateRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back, rec);
    }
}
