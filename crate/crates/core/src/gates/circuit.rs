use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::pauli::qubit_bit;

use super::PermutationGate;

/// A multi-controlled NOT. Each control is `(wire, polarity)`; polarity `true`
/// is a closed circle (fires on `|1⟩`), `false` an open one. No controls is a
/// bare X.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CircuitGate {
    target: usize,
    controls: Vec<(usize, bool)>,
}

impl CircuitGate {
    pub fn new(target: usize, controls: Vec<(usize, bool)>) -> Result<Self> {
        let mut wires = BTreeSet::new();
        for &(w, _) in &controls {
            if w == target {
                return Err(Error::InvalidGate(format!(
                    "wire {w} is both target and control"
                )));
            }
            if !wires.insert(w) {
                return Err(Error::InvalidGate(format!("wire {w} controls twice")));
            }
        }
        Ok(Self { target, controls })
    }

    pub fn x(target: usize) -> Self {
        Self {
            target,
            controls: vec![],
        }
    }

    pub fn cx(control: usize, target: usize) -> Result<Self> {
        Self::new(target, vec![(control, true)])
    }

    /// Positive controls on every listed wire.
    pub fn mcx(controls: &[usize], target: usize) -> Result<Self> {
        Self::new(target, controls.iter().map(|&w| (w, true)).collect())
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn controls(&self) -> &[(usize, bool)] {
        &self.controls
    }

    pub fn is_bare_x(&self) -> bool {
        self.controls.is_empty()
    }

    fn max_wire(&self) -> usize {
        self.controls
            .iter()
            .map(|&(w, _)| w)
            .chain(std::iter::once(self.target))
            .max()
            .unwrap_or(0)
    }

    fn apply(&self, n: usize, state: usize) -> usize {
        let fires = self
            .controls
            .iter()
            .all(|&(w, pol)| (state & qubit_bit(n, w) != 0) == pol);
        if fires {
            state ^ qubit_bit(n, self.target)
        } else {
            state
        }
    }

    fn shifted(&self, by: usize) -> Self {
        Self {
            target: self.target + by,
            controls: self.controls.iter().map(|&(w, p)| (w + by, p)).collect(),
        }
    }
}

/// An ordered product of multi-controlled NOTs. Gates are listed in the order
/// they act on a state: the first gate acts first, so the unitary is
/// `G_last ⋯ G_1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Circuit {
    n: usize,
    gates: Vec<CircuitGate>,
}

impl Circuit {
    pub fn new(n: usize, gates: Vec<CircuitGate>) -> Result<Self> {
        for g in &gates {
            if g.max_wire() >= n {
                return Err(Error::OutOfRange(format!(
                    "wire {} on a {n}-qubit circuit",
                    g.max_wire()
                )));
            }
        }
        Ok(Self { n, gates })
    }

    pub fn empty(n: usize) -> Self {
        Self { n, gates: vec![] }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[CircuitGate] {
        &self.gates
    }

    pub fn push(&mut self, gate: CircuitGate) -> Result<()> {
        if gate.max_wire() >= self.n {
            return Err(Error::OutOfRange(format!(
                "wire {} on a {}-qubit circuit",
                gate.max_wire(),
                self.n
            )));
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn to_permutation(&self) -> PermutationGate {
        let table = (0..1usize << self.n)
            .map(|j| self.gates.iter().fold(j, |s, g| g.apply(self.n, s)) as u32)
            .collect();
        PermutationGate::from_table_unchecked(self.n, table)
    }

    /// Prepends a new wire 0 and adds it as a control of every gate.
    pub fn add_control(&self, polarity: bool) -> Circuit {
        let gates = self
            .gates
            .iter()
            .map(|g| {
                let mut g = g.shifted(1);
                g.controls.insert(0, (0, polarity));
                g
            })
            .collect();
        Circuit {
            n: self.n + 1,
            gates,
        }
    }

    /// Number of wires that carry both a target and a control, ignoring bare X
    /// gates.
    pub fn wire_mismatch(&self) -> usize {
        let mut targets = BTreeSet::new();
        let mut controls = BTreeSet::new();
        for g in self.gates.iter().filter(|g| !g.is_bare_x()) {
            targets.insert(g.target);
            controls.extend(g.controls.iter().map(|&(w, _)| w));
        }
        targets.intersection(&controls).count()
    }
}

/// Text form: a `qubits N` line followed by one gate per line.
impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "qubits {}", self.n)?;
        for g in &self.gates {
            match g.controls.as_slice() {
                [] => writeln!(f, "X {}", g.target)?,
                [(c, true)] => writeln!(f, "CX {} {}", c, g.target)?,
                cs => {
                    write!(f, "MCX")?;
                    for &(w, p) in cs {
                        write!(f, " {}{}", if p { '+' } else { '-' }, w)?;
                    }
                    writeln!(f, " ; {}", g.target)?;
                }
            }
        }
        Ok(())
    }
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    for (i, c) in line.char_indices() {
        if c.is_whitespace() || c == ';' {
            if let Some(s) = start.take() {
                out.push(Token {
                    text: &line[s..i],
                    column: s + 1,
                });
            }
            if c == ';' {
                out.push(Token {
                    text: &line[i..i + 1],
                    column: i + 1,
                });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push(Token {
            text: &line[s..],
            column: s + 1,
        });
    }
    out
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn wire(tok: &Token<'_>, line: usize) -> Result<usize> {
    tok.text.parse::<usize>().map_err(|_| {
        parse_err(
            line,
            tok.column,
            format!("expected a wire index, found {:?}", tok.text),
        )
    })
}

/// Parses the circuit text format:
///
/// ```text
/// # comment
/// qubits 4          (optional; otherwise the largest wire index + 1)
/// X 3
/// CX 0 1
/// MCX +0 -1 ; 2
/// ```
pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let mut declared: Option<(usize, usize)> = None;
    let mut gates: Vec<(CircuitGate, usize)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let toks = tokenize(content);
        let Some(head) = toks.first() else { continue };
        let args = &toks[1..];
        let arity = |want: usize| -> Result<()> {
            if args.len() != want {
                let col = args.get(want).map_or(head.column, |t| t.column);
                return Err(parse_err(
                    line_no,
                    col,
                    format!(
                        "{} takes {want} argument(s), found {}",
                        head.text,
                        args.len()
                    ),
                ));
            }
            Ok(())
        };
        let gate = match head.text.to_ascii_uppercase().as_str() {
            "QUBITS" => {
                arity(1)?;
                if declared.is_some() || !gates.is_empty() {
                    return Err(parse_err(
                        line_no,
                        head.column,
                        "qubits must come first and only once",
                    ));
                }
                let n = args[0]
                    .text
                    .parse::<usize>()
                    .ok()
                    .filter(|&n| (1..=16).contains(&n))
                    .ok_or_else(|| {
                        parse_err(line_no, args[0].column, "qubit count must be in 1..=16")
                    })?;
                declared = Some((n, line_no));
                continue;
            }
            "X" => {
                arity(1)?;
                CircuitGate::x(wire(&args[0], line_no)?)
            }
            "CX" => {
                arity(2)?;
                let c = wire(&args[0], line_no)?;
                let t = wire(&args[1], line_no)?;
                CircuitGate::cx(c, t).map_err(|e| parse_err(line_no, head.column, e.to_string()))?
            }
            "MCX" => {
                let semi = args
                    .iter()
                    .position(|t| t.text == ";")
                    .ok_or_else(|| parse_err(line_no, head.column, "MCX needs '; target'"))?;
                if args.len() != semi + 2 {
                    let col = args.get(semi + 2).map_or(args[semi].column, |t| t.column);
                    return Err(parse_err(
                        line_no,
                        col,
                        "MCX takes exactly one target after ';'",
                    ));
                }
                let mut controls = Vec::new();
                for tok in &args[..semi] {
                    let (pol, rest) = match tok.text.as_bytes().first() {
                        Some(b'+') => (true, &tok.text[1..]),
                        Some(b'-') => (false, &tok.text[1..]),
                        _ => {
                            return Err(parse_err(
                                line_no,
                                tok.column,
                                format!("control must be +w or -w, found {:?}", tok.text),
                            ))
                        }
                    };
                    let w = rest.parse::<usize>().map_err(|_| {
                        parse_err(
                            line_no,
                            tok.column + 1,
                            format!("expected a wire index, found {rest:?}"),
                        )
                    })?;
                    controls.push((w, pol));
                }
                let t = wire(&args[semi + 1], line_no)?;
                CircuitGate::new(t, controls)
                    .map_err(|e| parse_err(line_no, head.column, e.to_string()))?
            }
            other => {
                return Err(parse_err(
                    line_no,
                    head.column,
                    format!("unknown gate {other:?}"),
                ));
            }
        };
        gates.push((gate, line_no));
    }
    let n = match declared {
        Some((n, _)) => n,
        None => match gates.iter().map(|(g, _)| g.max_wire()).max() {
            Some(w) => w + 1,
            None => return Err(parse_err(1, 1, "empty circuit needs a 'qubits N' line")),
        },
    };
    for (g, line_no) in &gates {
        if g.max_wire() >= n {
            return Err(parse_err(
                *line_no,
                1,
                format!("wire {} out of range for {n} qubits", g.max_wire()),
            ));
        }
    }
    Ok(Circuit {
        n,
        gates: gates.into_iter().map(|(g, _)| g).collect(),
    })
}

impl FromStr for Circuit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_circuit(s)
    }
}
