//! Experiment documents.
//!
//! Complex numbers are `[re, im]` pairs. Amplitude lists are row-major with
//! the first listed factor slowest. Example network document:
//!
//! ```json
//! {
//!   "kind": "network",
//!   "n": 1,
//!   "momentum_resolution": 256,
//!   "program": [{"momentum": 64}, {"momentum": 0}, {"momentum": 0}],
//!   "data": {"dims": [2], "amplitudes": [[1, 0], [0, 0]]}
//! }
//! ```

use qproc::processor::{NetworkSpec, ProgramAssignment, ProgramValue, Slot};
use qproc::qstate::{vector_norm, CMatrix, FactorRole, StateVector, C64};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Amplitudes whose norm is further than this from 1 are renormalized with a warning.
pub const RENORMALIZE_WARN_TOL: f64 = 1e-8;

pub type JsonComplex = [f64; 2];
pub type JsonMatrix = Vec<Vec<JsonComplex>>;

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ExperimentDoc {
    Conditional(ConditionalDoc),
    Network(NetworkDoc),
    StochasticSweep(SweepDoc),
    Compile(CompileDoc),
}

impl ExperimentDoc {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ExperimentDoc::Conditional(_) => "conditional",
            ExperimentDoc::Network(_) => "network",
            ExperimentDoc::StochasticSweep(_) => "stochastic-sweep",
            ExperimentDoc::Compile(_) => "compile",
        }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
pub struct StateDoc {
    pub dims: Vec<usize>,
    pub amplitudes: Vec<JsonComplex>,
}

#[derive(Clone, Copy, Debug, Default, Deserialize, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum BasisDoc {
    #[default]
    Computational,
    Momentum,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
pub struct ConditionalDoc {
    /// `u_P` for `P = 0..M-1`.
    pub blocks: Vec<JsonMatrix>,
    pub program: StateDoc,
    pub data: StateDoc,
    /// Basis in which the blocks are indexed.
    #[serde(default)]
    pub program_basis: BasisDoc,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum SlotDoc {
    Rotation { qubit: usize, vars: [usize; 3] },
    Controlled {
        control_bit: usize,
        control: usize,
        target: usize,
    },
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(rename_all = "snake_case")]
pub enum ProgramValueDoc {
    Momentum(usize),
    MomentumAmplitudes(Vec<JsonComplex>),
    Bit(u8),
    BitAmplitudes([JsonComplex; 2]),
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
pub struct NetworkDoc {
    pub n: usize,
    /// Omitted: one rotation triple per qubit followed by a CNOT ladder.
    #[serde(default)]
    pub slots: Option<Vec<SlotDoc>>,
    pub program: Vec<ProgramValueDoc>,
    pub data: StateDoc,
    #[serde(default)]
    pub momentum_resolution: Option<usize>,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
pub struct SweepDoc {
    pub alpha: f64,
    pub m_min: u32,
    pub m_max: u32,
    pub trials: u64,
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
pub struct CompileDoc {
    pub matrix: JsonMatrix,
}

pub fn to_complex(c: JsonComplex) -> C64 {
    C64::new(c[0], c[1])
}

pub fn from_complex(c: C64) -> JsonComplex {
    [c.re, c.im]
}

pub fn matrix_to_json(m: &CMatrix) -> JsonMatrix {
    m.row_iter()
        .map(|row| row.iter().map(|&c| from_complex(c)).collect())
        .collect()
}

pub fn matrix_from_json(field: &str, rows: &JsonMatrix) -> Result<CMatrix, CliError> {
    let n = rows.len();
    if n == 0 {
        return Err(CliError::input(field, "matrix has no rows"));
    }
    if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
        return Err(CliError::input(
            &format!("{field}[{i}]"),
            format!("expected {n} entries, found {}", row.len()),
        ));
    }
    Ok(CMatrix::from_fn(n, n, |r, c| to_complex(rows[r][c])))
}

/// Normalizes an amplitude list, warning when it was off by more than
/// [`RENORMALIZE_WARN_TOL`].
fn normalize(field: &str, amps: Vec<C64>, warnings: &mut Vec<String>) -> Result<Vec<C64>, CliError> {
    let norm = vector_norm(&amps);
    if norm == 0.0 || !norm.is_finite() {
        return Err(CliError::input(field, format!("amplitudes have norm {norm}")));
    }
    if (norm - 1.0).abs() > RENORMALIZE_WARN_TOL {
        warnings.push(format!("{field}: norm {norm} renormalized to 1"));
    }
    Ok(amps.into_iter().map(|a| a / norm).collect())
}

impl StateDoc {
    pub fn to_state(
        &self,
        field: &str,
        role: FactorRole,
        warnings: &mut Vec<String>,
    ) -> Result<StateVector, CliError> {
        if self.dims.is_empty() {
            return Err(CliError::input(&format!("{field}.dims"), "must list at least one factor"));
        }
        if self.dims.contains(&0) {
            return Err(CliError::input(&format!("{field}.dims"), "factor dimension 0"));
        }
        let total = self
            .dims
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .ok_or_else(|| CliError::input(&format!("{field}.dims"), "dimension overflow"))?;
        if total != self.amplitudes.len() {
            return Err(CliError::input(
                &format!("{field}.amplitudes"),
                format!(
                    "{} amplitudes do not match product of dims {total}",
                    self.amplitudes.len()
                ),
            ));
        }
        let amps = self.amplitudes.iter().map(|&c| to_complex(c)).collect();
        let amps = normalize(&format!("{field}.amplitudes"), amps, warnings)?;
        StateVector::new(amps, self.dims.clone(), vec![role; self.dims.len()])
            .map_err(|e| CliError::input(field, e))
    }
}

impl NetworkDoc {
    pub fn spec(&self) -> Result<NetworkSpec, CliError> {
        let result = match &self.slots {
            None => NetworkSpec::canonical(self.n),
            Some(slots) => NetworkSpec::new(
                self.n,
                slots
                    .iter()
                    .map(|s| match *s {
                        SlotDoc::Rotation { qubit, vars } => Slot::Rotation { qubit, vars },
                        SlotDoc::Controlled {
                            control_bit,
                            control,
                            target,
                        } => Slot::Controlled {
                            control_bit,
                            control,
                            target,
                        },
                    })
                    .collect(),
            ),
        };
        result.map_err(|e| CliError::input("slots", e))
    }

    pub fn assignment(&self, warnings: &mut Vec<String>) -> Result<ProgramAssignment, CliError> {
        let values = self
            .program
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let field = format!("program[{i}]");
                Ok(match v {
                    ProgramValueDoc::Momentum(p) => ProgramValue::Momentum(*p),
                    ProgramValueDoc::Bit(b @ (0 | 1)) => ProgramValue::Bit(*b == 1),
                    ProgramValueDoc::Bit(other) => {
                        return Err(CliError::input(&format!("{field}.bit"), format!("{other} is not 0 or 1")))
                    }
                    ProgramValueDoc::MomentumAmplitudes(a) => ProgramValue::MomentumAmplitudes(normalize(
                        &format!("{field}.momentum_amplitudes"),
                        a.iter().map(|&c| to_complex(c)).collect(),
                        warnings,
                    )?),
                    ProgramValueDoc::BitAmplitudes(a) => {
                        let v = normalize(
                            &format!("{field}.bit_amplitudes"),
                            a.iter().map(|&c| to_complex(c)).collect(),
                            warnings,
                        )?;
                        ProgramValue::BitAmplitudes([v[0], v[1]])
                    }
                })
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        Ok(ProgramAssignment::new(values))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn missing_dims_is_named() {
        let text = r#"{"kind":"conditional","blocks":[[[[1,0]]]],"program":{"amplitudes":[[1,0]]},"data":{"dims":[1],"amplitudes":[[1,0]]}}"#;
        let err = ExperimentDoc::parse(text).unwrap_err();
        assert!(err.to_string().contains("dims"), "{err}");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn unknown_kind_rejected() {
        assert!(ExperimentDoc::parse(r#"{"kind":"teleport"}"#).is_err());
    }

    #[test]
    fn renormalizes_with_warning() {
        let doc = StateDoc {
            dims: vec![2],
            amplitudes: vec![[1.0, 0.0], [1.0, 0.0]],
        };
        let mut warnings = Vec::new();
        let s = doc.to_state("data", FactorRole::DataQubit, &mut warnings).unwrap();
        assert!((s.norm() - 1.0).abs() < 1e-15);
        assert_eq!(warnings.len(), 1);
        assert!(warnings[0].starts_with("data.amplitudes"));
    }

    #[test]
    fn amplitude_count_checked() {
        let doc = StateDoc {
            dims: vec![2, 2],
            amplitudes: vec![[1.0, 0.0]],
        };
        let err = doc.to_state("data", FactorRole::DataQubit, &mut Vec::new()).unwrap_err();
        assert!(err.to_string().contains("data.amplitudes"));
    }

    #[test]
    fn program_values_parse() {
        let text = r#"{"kind":"network","n":1,"program":[{"momentum":3},{"momentum_amplitudes":[[1,0],[0,0]]},{"momentum":0}],"data":{"dims":[2],"amplitudes":[[1,0],[0,0]]}}"#;
        let ExperimentDoc::Network(doc) = ExperimentDoc::parse(text).unwrap() else {
            panic!("wrong kind");
        };
        let a = doc.assignment(&mut Vec::new()).unwrap();
        assert_eq!(a.values()[0], ProgramValue::Momentum(3));
        assert_eq!(doc.spec().unwrap().num_program_factors(), 3);
    }
}
