//! Text and JSON circuit formats, plus the state dump.
//!
//! The text format is one header line `qubits N` followed by one gate per
//! line, e.g. `cx q[0],q[3];` or `ry(0.25) q[2];`. Blank lines and lines
//! starting with `//` are ignored. Angles are written in the shortest form
//! that parses back to the same `f64`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use dqc_core::circuit::{Circuit, Gate, GateKind, QubitRole};
use dqc_core::partition::Partition;
use dqc_core::sim::StateVector;
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("unknown format `{0}` (expected qasm or json)")]
    UnknownFormat(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Circuit(#[from] dqc_core::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Qasm,
    Json,
}

impl FromStr for Format {
    type Err = FormatError;

    fn from_str(s: &str) -> Result<Self, FormatError> {
        match s {
            "qasm" => Ok(Format::Qasm),
            "json" => Ok(Format::Json),
            other => Err(FormatError::UnknownFormat(other.to_owned())),
        }
    }
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Qasm => "qasm",
            Format::Json => "json",
        }
    }
}

fn kind_from_name(name: &str, angle: Option<f64>) -> Option<GateKind> {
    Some(match (name, angle) {
        ("x", None) => GateKind::X,
        ("h", None) => GateKind::H,
        ("t", None) => GateKind::T,
        ("tdg", None) => GateKind::Tdg,
        ("ry", Some(a)) => GateKind::Ry(a),
        ("cx", None) => GateKind::Cx,
        ("ccx", None) => GateKind::Ccx,
        ("cswap", None) => GateKind::Cswap,
        ("fanout", None) => GateKind::FanOut,
        _ => return None,
    })
}

pub fn to_qasm(circuit: &Circuit) -> String {
    let mut out = format!("qubits {}\n", circuit.n_qubits());
    for gate in circuit.gates() {
        let _ = writeln!(out, "{gate};");
    }
    out
}

pub fn from_qasm(text: &str) -> Result<Circuit, FormatError> {
    let mut circuit: Option<Circuit> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let err = |msg: String| FormatError::Parse { line: i + 1, msg };
        if line.is_empty() || line.starts_with("//") {
            continue;
        }
        let Some(c) = circuit.as_mut() else {
            let n = line
                .strip_prefix("qubits ")
                .and_then(|n| n.trim().parse().ok())
                .ok_or_else(|| err(format!("expected `qubits N`, found `{line}`")))?;
            circuit = Some(Circuit::new(n));
            continue;
        };
        let body = line.strip_suffix(';').ok_or_else(|| err("missing `;`".into()))?;
        let (head, operands) = body.split_once(' ').ok_or_else(|| err("missing operands".into()))?;
        let (name, angle) = match head.split_once('(') {
            Some((name, rest)) => {
                let a = rest.strip_suffix(')').and_then(|a| a.parse::<f64>().ok());
                (name, Some(a.ok_or_else(|| err(format!("bad angle in `{head}`")))?))
            }
            None => (head, None),
        };
        let kind = kind_from_name(name, angle).ok_or_else(|| err(format!("unknown gate `{head}`")))?;
        let qubits = operands
            .split(',')
            .map(|op| {
                op.trim()
                    .strip_prefix("q[")
                    .and_then(|q| q.strip_suffix(']'))
                    .and_then(|q| q.parse().ok())
                    .ok_or_else(|| err(format!("bad operand `{op}`")))
            })
            .collect::<Result<Vec<usize>, _>>()?;
        c.push(Gate::new(kind, qubits)?).map_err(|e| err(e.to_string()))?;
    }
    circuit.ok_or(FormatError::Parse { line: 0, msg: "empty input".into() })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct GateDoc {
    kind: String,
    qubits: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    angle: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct PartitionDoc {
    p: usize,
    assignment: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct CircuitDoc {
    n_qubits: usize,
    gates: Vec<GateDoc>,
    #[serde(default)]
    labels: BTreeMap<usize, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    partition: Option<PartitionDoc>,
}

pub fn to_json(circuit: &Circuit, partition: Option<&Partition>) -> String {
    let doc = CircuitDoc {
        n_qubits: circuit.n_qubits(),
        gates: circuit
            .gates()
            .iter()
            .map(|g| GateDoc {
                kind: g.kind().name().to_owned(),
                qubits: g.qubits().to_vec(),
                angle: match g.kind() {
                    GateKind::Ry(a) => Some(a),
                    _ => None,
                },
            })
            .collect(),
        labels: circuit.labels().iter().map(|(&q, r)| (q, r.as_str().to_owned())).collect(),
        partition: partition.map(|p| PartitionDoc { p: p.p(), assignment: p.assignment().to_vec() }),
    };
    serde_json::to_string_pretty(&doc).expect("circuit documents always serialize")
}

pub fn from_json(text: &str) -> Result<(Circuit, Option<Partition>), FormatError> {
    let doc: CircuitDoc = serde_json::from_str(text)?;
    let mut circuit = Circuit::new(doc.n_qubits);
    for (i, g) in doc.gates.into_iter().enumerate() {
        let kind = kind_from_name(&g.kind, g.angle)
            .ok_or_else(|| FormatError::Parse { line: i, msg: format!("unknown gate `{}`", g.kind) })?;
        circuit.push(Gate::new(kind, g.qubits)?)?;
    }
    for (q, tag) in doc.labels {
        let role = QubitRole::parse(&tag)
            .ok_or_else(|| FormatError::Parse { line: 0, msg: format!("unknown role `{tag}`") })?;
        circuit.set_label(q, role)?;
    }
    let partition = doc.partition.map(|p| Partition::new(p.p, p.assignment)).transpose()?;
    Ok((circuit, partition))
}

pub fn export(circuit: &Circuit, partition: Option<&Partition>, format: Format) -> String {
    match format {
        Format::Qasm => to_qasm(circuit),
        Format::Json => to_json(circuit, partition),
    }
}

pub fn parse(text: &str, format: Format) -> Result<(Circuit, Option<Partition>), FormatError> {
    match format {
        Format::Qasm => Ok((from_qasm(text)?, None)),
        Format::Json => from_json(text),
    }
}

/// Amplitudes with magnitude above this are written by [`state_to_json`].
pub const DUMP_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateDump {
    pub n_qubits: usize,
    /// `(basis index, real part, imaginary part)`.
    pub amplitudes: Vec<(usize, f64, f64)>,
}

impl StateDump {
    pub fn of(state: &StateVector) -> Self {
        let amplitudes = state
            .amplitudes()
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm() > DUMP_THRESHOLD)
            .map(|(i, a)| (i, a.re, a.im))
            .collect();
        StateDump { n_qubits: state.n_qubits(), amplitudes }
    }
}

pub fn state_to_json(state: &StateVector) -> String {
    serde_json::to_string_pretty(&StateDump::of(state)).expect("state dumps always serialize")
}
