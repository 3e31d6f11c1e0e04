//! JSON and CSV formats for profiles and corner manifolds.

use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::radial_geometry::{
    hawking_mass_nodes, mean_curvature_nodes, scalar_curvature_nodes, AnalyticTag, CornerManifold, RadialProfile,
};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileFile {
    pub schema_version: u32,
    pub decay_p: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub analytic: Option<AnalyticTag>,
    pub s: Vec<f64>,
    pub r: Vec<f64>,
    /// Optional exact derivatives; estimated by spline when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dr: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ddr: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CornerFile {
    pub schema_version: u32,
    pub inner: ProfileFile,
    pub outer: ProfileFile,
}

/// Schema or I/O failure, kept apart from the numerical [`Error`].
#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
    #[error(transparent)]
    Model(#[from] Error),
}

impl ProfileFile {
    pub fn from_profile(p: &RadialProfile) -> Self {
        ProfileFile {
            schema_version: SCHEMA_VERSION,
            decay_p: p.decay_p,
            analytic: p.analytic.clone(),
            s: p.s().to_vec(),
            r: p.r().to_vec(),
            dr: Some(p.dr().to_vec()),
            ddr: Some(p.ddr().to_vec()),
        }
    }

    pub fn to_profile(&self) -> Result<RadialProfile> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::InvalidProfile(format!(
                "schema_version {} unsupported (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        let p = match (&self.dr, &self.ddr) {
            (Some(dr), Some(ddr)) => {
                RadialProfile::new(self.s.clone(), self.r.clone(), dr.clone(), ddr.clone(), self.decay_p)?
            }
            (None, None) => RadialProfile::from_samples(self.s.clone(), self.r.clone(), self.decay_p)?,
            _ => return Err(Error::InvalidProfile("give both dr and ddr or neither".into())),
        };
        Ok(match &self.analytic {
            Some(tag) => p.with_tag(tag.clone()),
            None => p,
        })
    }
}

fn read(path: &Path) -> std::result::Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|source| IoError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn parse<T: for<'de> Deserialize<'de>>(path: &Path) -> std::result::Result<T, IoError> {
    serde_json::from_str(&read(path)?).map_err(|e| IoError::Schema {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn schema_err(path: &Path, e: Error) -> IoError {
    match e {
        Error::InvalidProfile(message) => IoError::Schema {
            path: path.display().to_string(),
            message,
        },
        other => IoError::Model(other),
    }
}

pub fn load_profile(path: &Path) -> std::result::Result<RadialProfile, IoError> {
    parse::<ProfileFile>(path)?.to_profile().map_err(|e| schema_err(path, e))
}

pub fn load_corner(path: &Path) -> std::result::Result<CornerManifold, IoError> {
    let f: CornerFile = parse(path)?;
    if f.schema_version != SCHEMA_VERSION {
        return Err(IoError::Schema {
            path: path.display().to_string(),
            message: format!("schema_version {} unsupported", f.schema_version),
        });
    }
    let inner = f.inner.to_profile().map_err(|e| schema_err(path, e))?;
    let outer = f.outer.to_profile().map_err(|e| schema_err(path, e))?;
    Ok(CornerManifold::new(inner, outer)?)
}

pub fn write_text(path: &Path, text: &str) -> std::result::Result<(), IoError> {
    std::fs::write(path, text).map_err(|source| IoError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> std::result::Result<(), IoError> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable value");
    text.push('\n');
    write_text(path, &text)
}

pub fn profile_json(p: &RadialProfile) -> String {
    serde_json::to_string_pretty(&ProfileFile::from_profile(p)).expect("serializable profile")
}

pub fn corner_json(c: &CornerManifold) -> String {
    serde_json::to_string_pretty(&CornerFile {
        schema_version: SCHEMA_VERSION,
        inner: ProfileFile::from_profile(&c.inner),
        outer: ProfileFile::from_profile(&c.outer),
    })
    .expect("serializable corner")
}

/// Node table `s, r, dr, ddr, R, H, m_H`.
pub fn profile_csv(p: &RadialProfile) -> String {
    let rr = scalar_curvature_nodes(p);
    let hh = mean_curvature_nodes(p);
    let mm = hawking_mass_nodes(p);
    let mut out = String::from("s,r,dr,ddr,R,H,m_H\n");
    for i in 0..p.len() {
        let _ = writeln!(
            out,
            "{:e},{:e},{:e},{:e},{:e},{:e},{:e}",
            p.s()[i],
            p.r()[i],
            p.dr()[i],
            p.ddr()[i],
            rr[i],
            hh[i],
            mm[i]
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial_geometry::{flat_exterior, SchwarzschildSlice};

    #[test]
    fn json_round_trip_is_byte_stable() {
        let p = SchwarzschildSlice { mass: 1.0 }.exterior(3.0, 100.0, 50).unwrap();
        let text = profile_json(&p);
        let back: ProfileFile = serde_json::from_str(&text).unwrap();
        let q = back.to_profile().unwrap();
        assert_eq!(q, p);
        assert_eq!(profile_json(&q), text);
    }

    #[test]
    fn rejects_other_schema_versions() {
        let mut f = ProfileFile::from_profile(&flat_exterior(1.0, 10.0, 20).unwrap());
        f.schema_version = 2;
        assert!(f.to_profile().is_err());
        f.schema_version = 1;
        f.ddr = None;
        assert!(f.to_profile().is_err());
    }

    #[test]
    fn flat_csv_has_zero_curvature() {
        let csv = profile_csv(&flat_exterior(1.0, 10.0, 20).unwrap());
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 21);
        for l in &lines[1..] {
            let r: f64 = l.split(',').nth(4).unwrap().parse().unwrap();
            assert!(r.abs() < 1e-12);
        }
    }
}
