//! Gate and circuit representation, macro lowering, and size/depth metrics.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use crate::error::{Error, Result};
use crate::partition::Partition;

pub type Qubit = usize;

/// The kinds of gates a circuit can hold.
///
/// `X`, `H`, `T`, `Tdg` and `Ry` act on one qubit and `Cx` on two; together
/// they form the target gate set of [`Circuit::decompose`]. The remaining
/// kinds are macros that must be lowered before metrics are taken.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateKind {
    X,
    H,
    T,
    Tdg,
    /// Rotation about the Y axis by the given angle in radians.
    Ry(f64),
    Cx,
    /// Toffoli: two controls then the target.
    Ccx,
    /// Controlled swap: control then the two swapped qubits.
    Cswap,
    /// Fan-out: one control then one or more targets.
    FanOut,
}

impl GateKind {
    pub fn name(&self) -> &'static str {
        match self {
            GateKind::X => "x",
            GateKind::H => "h",
            GateKind::T => "t",
            GateKind::Tdg => "tdg",
            GateKind::Ry(_) => "ry",
            GateKind::Cx => "cx",
            GateKind::Ccx => "ccx",
            GateKind::Cswap => "cswap",
            GateKind::FanOut => "fanout",
        }
    }

    pub fn is_single_qubit(&self) -> bool {
        matches!(
            self,
            GateKind::X | GateKind::H | GateKind::T | GateKind::Tdg | GateKind::Ry(_)
        )
    }

    pub fn is_macro(&self) -> bool {
        matches!(self, GateKind::Ccx | GateKind::Cswap | GateKind::FanOut)
    }

    fn check_arity(&self, len: usize) -> Result<()> {
        let ok = match self {
            k if k.is_single_qubit() => len == 1,
            GateKind::Cx => len == 2,
            GateKind::Ccx | GateKind::Cswap => len == 3,
            GateKind::FanOut => len >= 2,
            _ => unreachable!(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Operand {
                gate: self.name(),
                reason: format!("wrong operand count {len}"),
            })
        }
    }
}

/// One circuit element. Operands list controls first, then targets.
#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    kind: GateKind,
    qubits: Vec<Qubit>,
}

impl Gate {
    /// Builds a gate after checking operand count and distinctness.
    pub fn new(kind: GateKind, qubits: Vec<Qubit>) -> Result<Self> {
        let gate = Gate { kind, qubits };
        gate.kind.check_arity(gate.qubits.len())?;
        for (i, q) in gate.qubits.iter().enumerate() {
            if gate.qubits[..i].contains(q) {
                return Err(Error::Operand {
                    gate: kind.name(),
                    reason: format!("qubit {q} repeated"),
                });
            }
        }
        Ok(gate)
    }

    pub fn x(q: Qubit) -> Self {
        Gate { kind: GateKind::X, qubits: vec![q] }
    }

    pub fn h(q: Qubit) -> Self {
        Gate { kind: GateKind::H, qubits: vec![q] }
    }

    pub fn t(q: Qubit) -> Self {
        Gate { kind: GateKind::T, qubits: vec![q] }
    }

    pub fn tdg(q: Qubit) -> Self {
        Gate { kind: GateKind::Tdg, qubits: vec![q] }
    }

    pub fn ry(theta: f64, q: Qubit) -> Self {
        Gate { kind: GateKind::Ry(theta), qubits: vec![q] }
    }

    pub fn cx(control: Qubit, target: Qubit) -> Self {
        Gate { kind: GateKind::Cx, qubits: vec![control, target] }
    }

    pub fn ccx(c0: Qubit, c1: Qubit, target: Qubit) -> Self {
        Gate { kind: GateKind::Ccx, qubits: vec![c0, c1, target] }
    }

    pub fn cswap(control: Qubit, a: Qubit, b: Qubit) -> Self {
        Gate { kind: GateKind::Cswap, qubits: vec![control, a, b] }
    }

    pub fn fan_out(control: Qubit, targets: &[Qubit]) -> Self {
        let mut qubits = Vec::with_capacity(targets.len() + 1);
        qubits.push(control);
        qubits.extend_from_slice(targets);
        Gate { kind: GateKind::FanOut, qubits }
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn qubits(&self) -> &[Qubit] {
        &self.qubits
    }

    pub fn is_two_qubit(&self) -> bool {
        self.qubits.len() == 2
    }

    fn validate(&self, n_qubits: usize) -> Result<()> {
        self.kind.check_arity(self.qubits.len())?;
        for (i, &q) in self.qubits.iter().enumerate() {
            if q >= n_qubits {
                return Err(Error::Operand {
                    gate: self.kind.name(),
                    reason: format!("qubit {q} out of range for {n_qubits} qubits"),
                });
            }
            if self.qubits[..i].contains(&q) {
                return Err(Error::Operand {
                    gate: self.kind.name(),
                    reason: format!("qubit {q} repeated"),
                });
            }
        }
        Ok(())
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind.name())?;
        if let GateKind::Ry(theta) = self.kind {
            write!(f, "({theta})")?;
        }
        for (i, q) in self.qubits.iter().enumerate() {
            let sep = if i == 0 { " " } else { "," };
            write!(f, "{sep}q[{q}]")?;
        }
        Ok(())
    }
}

/// Role tag attached to a qubit index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum QubitRole {
    Data,
    BinaryRegister,
    OneHotRegister,
    Ancilla,
}

impl QubitRole {
    pub fn as_str(&self) -> &'static str {
        match self {
            QubitRole::Data => "data",
            QubitRole::BinaryRegister => "binary-register",
            QubitRole::OneHotRegister => "one-hot-register",
            QubitRole::Ancilla => "ancilla",
        }
    }

    pub fn parse(tag: &str) -> Option<Self> {
        Some(match tag {
            "data" => QubitRole::Data,
            "binary-register" => QubitRole::BinaryRegister,
            "one-hot-register" => QubitRole::OneHotRegister,
            "ancilla" => QubitRole::Ancilla,
            _ => return None,
        })
    }
}

/// An ordered gate sequence over `n_qubits` indexed qubits.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
    labels: BTreeMap<Qubit, QubitRole>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Circuit { n_qubits, gates: Vec::new(), labels: BTreeMap::new() }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn labels(&self) -> &BTreeMap<Qubit, QubitRole> {
        &self.labels
    }

    pub fn set_label(&mut self, qubit: Qubit, role: QubitRole) -> Result<()> {
        if qubit >= self.n_qubits {
            return Err(Error::Operand {
                gate: "label",
                reason: format!("qubit {qubit} out of range for {} qubits", self.n_qubits),
            });
        }
        self.labels.insert(qubit, role);
        Ok(())
    }

    /// Appends `gate`, rejecting out-of-range or repeated operands.
    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.n_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    /// Value-style append: returns the circuit with `gate` added.
    pub fn append_gate(mut self, gate: Gate) -> Result<Self> {
        self.push(gate)?;
        Ok(self)
    }

    /// Appends every gate of `other`, whose register must fit in this one.
    pub fn extend(&mut self, other: &Circuit) -> Result<()> {
        if other.n_qubits > self.n_qubits {
            return Err(Error::Shape(format!(
                "cannot append a {}-qubit circuit to a {}-qubit circuit",
                other.n_qubits, self.n_qubits
            )));
        }
        self.gates.extend_from_slice(&other.gates);
        Ok(())
    }

    /// Grows the register to `n_qubits`; never shrinks.
    pub fn widen(&mut self, n_qubits: usize) {
        self.n_qubits = self.n_qubits.max(n_qubits);
    }

    pub fn is_decomposed(&self) -> bool {
        self.gates.iter().all(|g| !g.kind.is_macro())
    }

    fn require_decomposed(&self) -> Result<()> {
        match self.gates.iter().find(|g| g.kind.is_macro()) {
            Some(g) => Err(Error::MacroInMetric(g.kind.name())),
            None => Ok(()),
        }
    }

    /// Lowers every macro gate to CNOTs and single-qubit gates.
    ///
    /// Toffoli uses the 6-CNOT Clifford+T form, controlled-swap becomes
    /// CNOT, Toffoli, CNOT, and fan-out becomes an exact log-depth CNOT tree.
    pub fn decompose(&self) -> Circuit {
        let mut out = Circuit {
            n_qubits: self.n_qubits,
            gates: Vec::with_capacity(self.gates.len()),
            labels: self.labels.clone(),
        };
        for gate in &self.gates {
            lower_into(gate, &mut out.gates);
        }
        out
    }

    /// Gate count of a decomposed circuit. With a partition, two-qubit gates
    /// crossing QPUs are not counted.
    pub fn size(&self, partition: Option<&Partition>) -> Result<usize> {
        self.require_decomposed()?;
        match partition {
            None => Ok(self.gates.len()),
            Some(p) => {
                p.check_covers(self.n_qubits)?;
                Ok(self.gates.iter().filter(|g| !p.is_cross(g)).count())
            }
        }
    }

    /// Number of ASAP layers of a decomposed circuit.
    pub fn depth(&self) -> Result<usize> {
        self.require_decomposed()?;
        Ok(self.asap_layers().iter().copied().max().map_or(0, |l| l + 1))
    }

    /// Layer index of each gate under greedy ASAP placement.
    pub fn asap_layers(&self) -> Vec<usize> {
        let mut frontier = vec![0usize; self.n_qubits];
        self.gates
            .iter()
            .map(|g| {
                let layer = g.qubits.iter().map(|&q| frontier[q]).max().unwrap_or(0);
                for &q in &g.qubits {
                    frontier[q] = layer + 1;
                }
                layer
            })
            .collect()
    }
}

/// Rounds of (parent, child) CNOTs of a balanced copy tree rooted at
/// `control`. Every round doubles the set of qubits holding the value.
pub(crate) fn copy_tree_rounds(control: Qubit, targets: &[Qubit]) -> Vec<Vec<(Qubit, Qubit)>> {
    let mut holders = vec![control];
    let mut rest = targets.iter().copied();
    let mut rounds = Vec::new();
    let mut remaining = targets.len();
    while remaining > 0 {
        let mut round = Vec::new();
        for &h in holders.clone().iter() {
            match rest.next() {
                Some(t) => {
                    round.push((h, t));
                    holders.push(t);
                    remaining -= 1;
                }
                None => break,
            }
        }
        rounds.push(round);
    }
    rounds
}

fn lower_toffoli(a: Qubit, b: Qubit, c: Qubit, out: &mut Vec<Gate>) {
    out.extend([
        Gate::h(c),
        Gate::cx(b, c),
        Gate::tdg(c),
        Gate::cx(a, c),
        Gate::t(c),
        Gate::cx(b, c),
        Gate::tdg(c),
        Gate::cx(a, c),
        Gate::t(b),
        Gate::t(c),
        Gate::h(c),
        Gate::cx(a, b),
        Gate::t(a),
        Gate::tdg(b),
        Gate::cx(a, b),
    ]);
}

fn lower_into(gate: &Gate, out: &mut Vec<Gate>) {
    let q = &gate.qubits;
    match gate.kind {
        GateKind::Ccx => lower_toffoli(q[0], q[1], q[2], out),
        GateKind::Cswap => {
            out.push(Gate::cx(q[2], q[1]));
            lower_toffoli(q[0], q[1], q[2], out);
            out.push(Gate::cx(q[2], q[1]));
        }
        GateKind::FanOut => {
            let rounds = copy_tree_rounds(q[0], &q[1..]);
            // Replace each target b_i by b_i xor b_parent first (deepest
            // rounds first), so the copy tree then yields b_i xor control.
            for round in rounds.iter().rev() {
                for &(parent, child) in round {
                    if parent != q[0] {
                        out.push(Gate::cx(parent, child));
                    }
                }
            }
            for round in &rounds {
                out.extend(round.iter().map(|&(p, c)| Gate::cx(p, c)));
            }
        }
        _ => out.push(gate.clone()),
    }
}

/// Angle of `Ry` that maps `|0>` to `cos(t/2)|0> + sin(t/2)|1>` with the
/// given nonnegative weights.
pub(crate) fn ry_angle(p0: f64, p1: f64) -> f64 {
    if p1 <= 0.0 {
        0.0
    } else if p0 <= 0.0 {
        PI
    } else {
        2.0 * libm::atan2(libm::sqrt(p1), libm::sqrt(p0))
    }
}
