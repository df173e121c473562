//! Scalar-free arithmetic circuits and randomized multilinear term detection.
//!
//! A circuit has input gates `x_i`, unbounded fan-in addition gates and
//! fan-in two multiplication gates. There are no constants and no scalar
//! gates. To test for a multilinear term of degree `k`, every
//! multiplication gate gets a random nonzero weight from GF(2^l), every
//! variable is replaced by `W0 + v_i` for a random `v_i` in Z_2^k, and the
//! circuit is evaluated in GF(2^l)[Z_2^k]. Squares vanish in that algebra,
//! so a nonzero result certifies a multilinear term.
//!
//! Text format, one gate per line:
//!
//! ```text
//! # comment
//! g1 = INPUT x1
//! g2 = INPUT x2
//! g3 = MUL g1 g2
//! g4 = ADD g3 g1 g2
//! OUTPUT g4
//! ```

use std::collections::HashMap;
use std::fmt;

use rand::Rng;
use thiserror::Error;

use crate::algebra::{AlgebraElem, GroupVector};
use crate::error::{parameter, Error, Result};
use crate::gf2e::{FieldElem, FieldSpec};
use crate::rng::RngStream;

pub type GateId = usize;

/// Default number of independent trials per padding level.
pub const DEFAULT_TRIALS: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    /// Variable `x_{i+1}` (0-based index `i`).
    Input(usize),
    Add(Vec<GateId>),
    Mul(Vec<GateId>),
}

impl Gate {
    pub fn children(&self) -> &[GateId] {
        match self {
            Gate::Input(_) => &[],
            Gate::Add(c) | Gate::Mul(c) => c,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error("circuit has no gates")]
    Empty,
    #[error("output gate g{0} does not exist")]
    MissingOutput(GateId),
    #[error("gate g{gate} references missing gate g{child}")]
    MissingChild { gate: GateId, child: GateId },
    #[error("multiplication gate g{gate} has fan-in {fan_in}, expected 2")]
    MulFanIn { gate: GateId, fan_in: usize },
    #[error("addition gate g{0} has no inputs")]
    EmptyAdd(GateId),
    #[error("gate g{gate} reads variable x{} but the circuit has {vars} variables", .var + 1)]
    VariableOutOfRange { gate: GateId, var: usize, vars: usize },
    #[error("gate g{0} lies on a cycle")]
    Cycle(GateId),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    gates: Vec<Gate>,
    output: GateId,
    num_vars: usize,
}

impl Circuit {
    /// Builds a circuit without checking it; see [`Circuit::validate`].
    pub fn new(num_vars: usize, gates: Vec<Gate>, output: GateId) -> Self {
        Circuit { gates, output, num_vars }
    }

    /// Builds and validates.
    pub fn checked(num_vars: usize, gates: Vec<Gate>, output: GateId) -> Result<Self> {
        let c = Self::new(num_vars, gates, output);
        c.validate()?;
        Ok(c)
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn output(&self) -> GateId {
        self.output
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// Circuit size s(n): the number of gates.
    pub fn size(&self) -> usize {
        self.gates.len()
    }

    pub fn mul_gates(&self) -> impl Iterator<Item = GateId> + '_ {
        self.gates
            .iter()
            .enumerate()
            .filter(|(_, g)| matches!(g, Gate::Mul(_)))
            .map(|(i, _)| i)
    }

    /// Checks fan-in, variable range, child references and acyclicity.
    pub fn validate(&self) -> std::result::Result<(), CircuitError> {
        if self.gates.is_empty() {
            return Err(CircuitError::Empty);
        }
        if self.output >= self.gates.len() {
            return Err(CircuitError::MissingOutput(self.output));
        }
        for (id, gate) in self.gates.iter().enumerate() {
            match gate {
                Gate::Input(var) if *var >= self.num_vars => {
                    return Err(CircuitError::VariableOutOfRange {
                        gate: id,
                        var: *var,
                        vars: self.num_vars,
                    })
                }
                Gate::Add(c) if c.is_empty() => return Err(CircuitError::EmptyAdd(id)),
                Gate::Mul(c) if c.len() != 2 => {
                    return Err(CircuitError::MulFanIn { gate: id, fan_in: c.len() })
                }
                _ => {}
            }
            if let Some(&child) = gate.children().iter().find(|&&c| c >= self.gates.len()) {
                return Err(CircuitError::MissingChild { gate: id, child });
            }
        }
        self.topological_order().map(|_| ())
    }

    /// All gates ordered so that children come before parents.
    fn topological_order(&self) -> std::result::Result<Vec<GateId>, CircuitError> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            New,
            Open,
            Done,
        }
        let mut mark = vec![Mark::New; self.gates.len()];
        let mut order = Vec::with_capacity(self.gates.len());
        for root in 0..self.gates.len() {
            if mark[root] != Mark::New {
                continue;
            }
            let mut stack = vec![(root, 0usize)];
            mark[root] = Mark::Open;
            while let Some(&mut (gate, ref mut next)) = stack.last_mut() {
                let children = self.gates[gate].children();
                if let Some(&child) = children.get(*next) {
                    *next += 1;
                    match mark[child] {
                        Mark::New => {
                            mark[child] = Mark::Open;
                            stack.push((child, 0));
                        }
                        Mark::Open => return Err(CircuitError::Cycle(child)),
                        Mark::Done => {}
                    }
                } else {
                    mark[gate] = Mark::Done;
                    order.push(gate);
                    stack.pop();
                }
            }
        }
        Ok(order)
    }

    /// Gates the output depends on, children first.
    fn output_cone(&self) -> Result<Vec<GateId>> {
        let order = self.topological_order()?;
        let mut needed = vec![false; self.gates.len()];
        needed[self.output] = true;
        for &g in order.iter().rev() {
            if needed[g] {
                for &c in self.gates[g].children() {
                    needed[c] = true;
                }
            }
        }
        Ok(order.into_iter().filter(|&g| needed[g]).collect())
    }

    /// Syntactic degree: inputs 1, additions the max, multiplications the sum.
    pub fn degree(&self) -> Result<usize> {
        self.validate()?;
        let mut deg = vec![0usize; self.gates.len()];
        for g in self.output_cone()? {
            deg[g] = match &self.gates[g] {
                Gate::Input(_) => 1,
                Gate::Add(c) => c.iter().map(|&i| deg[i]).max().unwrap_or(0),
                Gate::Mul(c) => c.iter().map(|&i| deg[i]).sum(),
            };
        }
        Ok(deg[self.output])
    }

    /// Circuit for `P * x_{n+1} * ... * x_{n+j}`.
    pub fn pad_output(&self, j: usize) -> Circuit {
        let mut c = self.clone();
        for t in 0..j {
            c.gates.push(Gate::Input(self.num_vars + t));
            let input = c.gates.len() - 1;
            c.gates.push(Gate::Mul(vec![c.output, input]));
            c.output = c.gates.len() - 1;
        }
        c.num_vars += j;
        c
    }

    /// Attaches an independent uniform nonzero weight to every
    /// multiplication gate, drawn in gate order.
    pub fn augment_with_random_scalars(
        &self,
        spec: &FieldSpec,
        rng: &mut RngStream,
    ) -> Result<WeightedCircuit> {
        self.validate()?;
        let weights = self
            .gates
            .iter()
            .map(|g| matches!(g, Gate::Mul(_)).then(|| spec.random_nonzero(rng)))
            .collect();
        Ok(WeightedCircuit { base: self.clone(), spec: spec.clone(), weights })
    }

    /// Parses the text format. Gate labels may appear in any order; the
    /// variable count is the largest `x` index used.
    pub fn parse(text: &str) -> Result<Circuit> {
        let perr = |line: usize, message: String| Error::Parse { line, message };
        let parse_gate_label = |line: usize, s: &str| -> Result<u64> {
            s.strip_prefix('g')
                .and_then(|d| d.parse().ok())
                .ok_or_else(|| perr(line, format!("expected a gate label like g3, got `{s}`")))
        };

        struct Raw {
            line: usize,
            label: u64,
            op: String,
            args: Vec<String>,
        }
        let mut raws = Vec::new();
        let mut output = None;
        for (i, line) in text.lines().enumerate() {
            let lineno = i + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if tokens[0] == "OUTPUT" {
                if tokens.len() != 2 {
                    return Err(perr(lineno, "expected `OUTPUT g<id>`".into()));
                }
                if output.is_some() {
                    return Err(perr(lineno, "more than one OUTPUT line".into()));
                }
                output = Some((lineno, parse_gate_label(lineno, tokens[1])?));
                continue;
            }
            if tokens.len() < 3 || tokens[1] != "=" {
                return Err(perr(lineno, format!("expected `g<id> = OP ...`, got `{line}`")));
            }
            raws.push(Raw {
                line: lineno,
                label: parse_gate_label(lineno, tokens[0])?,
                op: tokens[2].to_string(),
                args: tokens[3..].iter().map(|s| s.to_string()).collect(),
            });
        }
        let (out_line, out_label) = output.ok_or_else(|| perr(0, "missing OUTPUT line".into()))?;

        let mut index = HashMap::new();
        for (i, r) in raws.iter().enumerate() {
            if index.insert(r.label, i).is_some() {
                return Err(perr(r.line, format!("gate g{} defined twice", r.label)));
            }
        }
        let resolve = |line: usize, s: &str| -> Result<GateId> {
            let label = parse_gate_label(line, s)?;
            index
                .get(&label)
                .copied()
                .ok_or_else(|| perr(line, format!("undefined gate g{label}")))
        };

        let mut num_vars = 0;
        let mut gates = Vec::with_capacity(raws.len());
        for r in &raws {
            let gate = match r.op.as_str() {
                "INPUT" => {
                    let [arg] = r.args.as_slice() else {
                        return Err(perr(r.line, "INPUT takes exactly one variable".into()));
                    };
                    let var: usize = arg
                        .strip_prefix('x')
                        .and_then(|d| d.parse().ok())
                        .filter(|&v| v >= 1)
                        .ok_or_else(|| perr(r.line, format!("expected a variable like x1, got `{arg}`")))?;
                    num_vars = num_vars.max(var);
                    Gate::Input(var - 1)
                }
                "ADD" | "MUL" => {
                    let children = r
                        .args
                        .iter()
                        .map(|a| resolve(r.line, a))
                        .collect::<Result<Vec<_>>>()?;
                    if r.op == "ADD" {
                        Gate::Add(children)
                    } else {
                        Gate::Mul(children)
                    }
                }
                "CONST" | "SCALE" | "SCALAR" => {
                    return Err(perr(
                        r.line,
                        format!("{} gates are not allowed: circuits must be scalar-free", r.op),
                    ))
                }
                other => return Err(perr(r.line, format!("unknown operation `{other}`"))),
            };
            gates.push(gate);
        }
        let output = resolve(out_line, &format!("g{out_label}"))?;
        Circuit::checked(num_vars, gates, output)
    }

    /// Serializes in the text format, labelling gate `i` as `g{i+1}`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (i, g) in self.gates.iter().enumerate() {
            let rhs = match g {
                Gate::Input(v) => format!("INPUT x{}", v + 1),
                Gate::Add(c) | Gate::Mul(c) => {
                    let op = if matches!(g, Gate::Add(_)) { "ADD" } else { "MUL" };
                    let args: Vec<String> = c.iter().map(|c| format!("g{}", c + 1)).collect();
                    format!("{op} {}", args.join(" "))
                }
            };
            s.push_str(&format!("g{} = {rhs}\n", i + 1));
        }
        s.push_str(&format!("OUTPUT g{}\n", self.output + 1));
        s
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Incremental construction of validated circuits.
#[derive(Default)]
pub struct CircuitBuilder {
    gates: Vec<Gate>,
    num_vars: usize,
}

impl CircuitBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Input gate for the 0-based variable `var`.
    pub fn input(&mut self, var: usize) -> GateId {
        self.num_vars = self.num_vars.max(var + 1);
        self.push(Gate::Input(var))
    }

    pub fn add(&mut self, children: &[GateId]) -> GateId {
        self.push(Gate::Add(children.to_vec()))
    }

    pub fn mul(&mut self, a: GateId, b: GateId) -> GateId {
        self.push(Gate::Mul(vec![a, b]))
    }

    fn push(&mut self, g: Gate) -> GateId {
        self.gates.push(g);
        self.gates.len() - 1
    }

    /// Reserve variables beyond the ones used so far.
    pub fn with_num_vars(mut self, n: usize) -> Self {
        self.num_vars = self.num_vars.max(n);
        self
    }

    pub fn finish(self, output: GateId) -> Result<Circuit> {
        Circuit::checked(self.num_vars, self.gates, output)
    }
}

/// Operation counts from one evaluation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EvalStats {
    pub additions: usize,
    pub multiplications: usize,
    pub scalings: usize,
}

/// A circuit whose multiplication gates carry nonzero field weights.
#[derive(Clone, Debug)]
pub struct WeightedCircuit {
    base: Circuit,
    spec: FieldSpec,
    weights: Vec<Option<FieldElem>>,
}

impl WeightedCircuit {
    pub fn new(base: Circuit, spec: FieldSpec, weights: Vec<Option<FieldElem>>) -> Result<Self> {
        base.validate()?;
        for (id, (g, w)) in base.gates.iter().zip(&weights).enumerate() {
            match (g, w) {
                (Gate::Mul(_), Some(w)) if !w.is_zero() && spec.contains(*w) => {}
                (Gate::Mul(_), _) => {
                    return Err(parameter(format!("gate g{id} needs a nonzero weight")))
                }
                (_, Some(_)) => return Err(parameter(format!("gate g{id} is not a multiplication"))),
                _ => {}
            }
        }
        if weights.len() != base.gates.len() {
            return Err(parameter("one weight slot per gate required"));
        }
        Ok(WeightedCircuit { base, spec, weights })
    }

    pub fn base(&self) -> &Circuit {
        &self.base
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn weight(&self, gate: GateId) -> Option<FieldElem> {
        self.weights.get(gate).copied().flatten()
    }

    /// `(gate, weight)` for every multiplication gate.
    pub fn weights(&self) -> impl Iterator<Item = (GateId, FieldElem)> + '_ {
        self.weights.iter().enumerate().filter_map(|(i, w)| w.map(|w| (i, w)))
    }

    pub fn evaluate(&self, assignment: &[AlgebraElem]) -> Result<AlgebraElem> {
        self.evaluate_with_stats(assignment).map(|(v, _)| v)
    }

    /// Evaluates every gate in the output cone exactly once.
    pub fn evaluate_with_stats(&self, assignment: &[AlgebraElem]) -> Result<(AlgebraElem, EvalStats)> {
        if assignment.len() < self.base.num_vars {
            return Err(parameter(format!(
                "assignment covers {} of {} variables",
                assignment.len(),
                self.base.num_vars
            )));
        }
        if let Some(first) = assignment.first() {
            if first.spec() != &self.spec {
                return Err(parameter("assignment lives over a different field"));
            }
        }
        let mut stats = EvalStats::default();
        let mut values: Vec<Option<AlgebraElem>> = vec![None; self.base.gates.len()];
        let get = |values: &[Option<AlgebraElem>], i: GateId| -> AlgebraElem {
            values[i].clone().expect("children are evaluated first")
        };
        for g in self.base.output_cone()? {
            let v = match &self.base.gates[g] {
                Gate::Input(var) => assignment[*var].clone(),
                Gate::Add(c) => {
                    let mut acc = get(&values, c[0]);
                    for &child in &c[1..] {
                        acc.add_assign(values[child].as_ref().expect("children first"))?;
                        stats.additions += 1;
                    }
                    acc
                }
                Gate::Mul(c) => {
                    let a = values[c[0]].as_ref().expect("children first");
                    let b = values[c[1]].as_ref().expect("children first");
                    let prod = a.mul(b)?;
                    stats.multiplications += 1;
                    let w = self.weights[g].expect("validated weights");
                    stats.scalings += 1;
                    prod.scalar_mul(w)
                }
            };
            values[g] = Some(v);
        }
        Ok((get(&values, self.base.output), stats))
    }
}

/// One randomized trial: is there (probably) a multilinear term of degree
/// exactly `k`? Never reports `true` when the expansion has no multilinear
/// term.
pub fn detect_multilinear_trial(
    c: &Circuit,
    k: usize,
    spec: &FieldSpec,
    rng: &mut RngStream,
) -> Result<bool> {
    if k == 0 || k > crate::algebra::MAX_K as usize {
        return Err(parameter(format!("k must be in 1..={}", crate::algebra::MAX_K)));
    }
    c.validate()?;
    let kk = k as u32;
    let mut vrng = rng.child("vectors", 0);
    let assignment = (0..c.num_vars())
        .map(|_| AlgebraElem::one_plus_basis(kk, GroupVector(vrng.gen_range(0..1u64 << k)), spec))
        .collect::<Result<Vec<_>>>()?;
    let weighted = c.augment_with_random_scalars(spec, &mut rng.child("weights", 0))?;
    Ok(!weighted.evaluate(&assignment)?.is_zero())
}

/// Whether the expansion of `c` has a multilinear term of degree at most
/// `k`. The output is padded with `j = 0..=k` fresh variables and each
/// padded circuit gets `trials` independent trials over Z_2^k.
pub fn detect_multilinear(c: &Circuit, k: usize, trials: usize, rng: &RngStream) -> Result<bool> {
    if trials == 0 {
        return Err(parameter("trials must be positive"));
    }
    let degree = c.degree()?;
    if degree > k {
        return Err(parameter(format!("circuit degree {degree} exceeds k={k}")));
    }
    let spec = FieldSpec::for_k(k)?;
    for j in 0..=k {
        let padded = c.pad_output(j);
        for t in 0..trials {
            let mut stream = rng.child("pad", j as u64).child("trial", t as u64);
            if detect_multilinear_trial(&padded, k, &spec, &mut stream)? {
                return Ok(true);
            }
        }
    }
    Ok(false)
}
