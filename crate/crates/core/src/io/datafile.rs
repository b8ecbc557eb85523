use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::mesh::SamplingSpec;
use crate::algebra::BranchConfiguration;
use crate::error::{Error, Result};
use crate::weierstrass::WeierstrassData;

/// `{"c": [re, im], "m": m, "a": [[r, theta], ...]}` with `m + 1` branch values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataFile {
    pub c: [f64; 2],
    pub m: usize,
    pub a: Vec<[f64; 2]>,
}

impl DataFile {
    pub fn from_data(data: &WeierstrassData) -> Self {
        let c = data.c() * data.c_scale();
        Self {
            c: [c.re, c.im],
            m: data.complexity(),
            a: data.config().points().iter().map(|p| [p.r, p.theta]).collect(),
        }
    }

    pub fn to_data(&self) -> Result<WeierstrassData> {
        if self.a.len() != self.m + 1 {
            return Err(Error::Parse(format!(
                "field `a` must hold m + 1 = {} branch values, found {}",
                self.m + 1,
                self.a.len()
            )));
        }
        let pairs: Vec<(f64, f64)> = self.a.iter().map(|p| (p[0], p[1])).collect();
        WeierstrassData::new(
            Complex64::new(self.c[0], self.c[1]),
            BranchConfiguration::from_polar(&pairs)?,
        )
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }
}

/// Data-file fields (all optional) plus a `sampling` block and a seed.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub c: Option<[f64; 2]>,
    pub m: Option<usize>,
    pub a: Option<Vec<[f64; 2]>>,
    pub sampling: Option<SamplingSpec>,
    pub seed: Option<u64>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }

    /// The embedded data, if `c`, `m` and `a` are all present.
    pub fn data(&self) -> Result<Option<DataFile>> {
        match (&self.c, &self.m, &self.a) {
            (Some(c), Some(m), Some(a)) => Ok(Some(DataFile {
                c: *c,
                m: *m,
                a: a.clone(),
            })),
            (None, None, None) => Ok(None),
            _ => Err(Error::Parse("config needs all of `c`, `m`, `a` or none of them".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_convert() {
        let d = DataFile::parse(r#"{"c": [0, 1], "m": 2, "a": [[1, 0], [1, 1.0471975511965976], [1, 2.0943951023931953]]}"#)
            .unwrap();
        let data = d.to_data().unwrap();
        assert_eq!(data.complexity(), 2);
        assert_eq!(DataFile::from_data(&data), d);
    }

    #[test]
    fn diagnostics() {
        let err = DataFile::parse("{\"c\": [1, 0],\n \"m\": 1}").unwrap_err().to_string();
        assert!(err.contains("missing field `a`") && err.contains("line 2"), "{err}");
        let err = DataFile::parse(r#"{"c": [1, 0], "m": 1, "a": [[1, 0]], "x": 1}"#)
            .unwrap_err()
            .to_string();
        assert!(err.contains("unknown field `x`"), "{err}");
        let bad = DataFile {
            c: [1.0, 0.0],
            m: 2,
            a: vec![[1.0, 0.0]],
        };
        assert!(bad.to_data().is_err());
    }

    #[test]
    fn config_blocks() {
        let cfg = ConfigFile::parse(r#"{"sampling": {"n_r": 9, "n_theta": 16}, "seed": 3}"#).unwrap();
        let s = cfg.sampling.unwrap();
        assert_eq!((s.n_r, s.n_theta, s.r_max), (9, 16, 8.0));
        assert_eq!(cfg.data().unwrap(), None);
        let cfg = ConfigFile::parse(r#"{"c": [1, 0]}"#).unwrap();
        assert!(cfg.data().is_err());
    }
}
