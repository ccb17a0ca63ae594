//! JSON coefficient files.
//!
//! ```json
//! {"d": 2, "basis": "schoenberg", "coeffs": [1.0, 0.0], "tail_bound": 0.0, "label": "constant"}
//! ```
//!
//! `tail_bound` is `null` when no bound is known. Floats are written in the shortest
//! form that parses back to the same bits.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use spherepd::convolution::GegenbauerCoeffs;
use spherepd::schoenberg::{schoenberg_from_gegenbauer, SchoenbergSequence};
use spherepd::sphere::Dimension;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Schoenberg,
    Gegenbauer,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoeffFile {
    pub d: usize,
    pub basis: Basis,
    pub coeffs: Vec<f64>,
    pub tail_bound: Option<f64>,
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadrature: Option<String>,
}

impl CoeffFile {
    pub fn from_schoenberg(seq: &SchoenbergSequence, label: impl Into<String>) -> Self {
        Self {
            d: seq.d.get(),
            basis: Basis::Schoenberg,
            coeffs: seq.coeffs.clone(),
            tail_bound: seq.tail_bound.is_finite().then_some(seq.tail_bound),
            label: label.into(),
            quadrature: None,
        }
    }

    pub fn from_gegenbauer(
        g: &GegenbauerCoeffs,
        tail_bound: Option<f64>,
        label: impl Into<String>,
    ) -> Self {
        Self {
            d: g.d.get(),
            basis: Basis::Gegenbauer,
            coeffs: g.a.clone(),
            tail_bound,
            label: label.into(),
            quadrature: None,
        }
    }

    pub fn dimension(&self) -> CliResult<Dimension> {
        Ok(Dimension::new(self.d)?)
    }

    /// The coefficients as a Schoenberg sequence, converting from the Gegenbauer basis
    /// if needed.
    pub fn to_schoenberg(&self) -> CliResult<SchoenbergSequence> {
        let d = self.dimension()?;
        let mut seq = match self.basis {
            Basis::Schoenberg => SchoenbergSequence::new(d, self.coeffs.clone()),
            Basis::Gegenbauer => {
                schoenberg_from_gegenbauer(&GegenbauerCoeffs::new(d, self.coeffs.clone()))
            }
        };
        seq.tail_bound = self.tail_bound.unwrap_or(f64::INFINITY);
        Ok(seq)
    }

    /// The coefficients in the Gegenbauer basis.
    pub fn to_gegenbauer(&self) -> CliResult<GegenbauerCoeffs> {
        let d = self.dimension()?;
        Ok(match self.basis {
            Basis::Gegenbauer => GegenbauerCoeffs::new(d, self.coeffs.clone()),
            Basis::Schoenberg => spherepd::schoenberg::gegenbauer_from_schoenberg(
                &SchoenbergSequence::new(d, self.coeffs.clone()),
            ),
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("coefficient files always serialize");
        s.push('\n');
        s
    }

    pub fn parse(text: &str, path: &Path) -> CliResult<Self> {
        let file: Self = serde_json::from_str(text).map_err(|e| CliError::Format {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        if file.coeffs.iter().any(|x| !x.is_finite()) {
            return Err(CliError::Format {
                path: path.to_path_buf(),
                message: "coefficients must be finite".into(),
            });
        }
        Ok(file)
    }

    pub fn read(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text, path)
    }

    pub fn write(&self, path: &Path) -> CliResult<()> {
        fs::write(path, self.to_json()).map_err(|e| CliError::io(path, e))
    }
}
