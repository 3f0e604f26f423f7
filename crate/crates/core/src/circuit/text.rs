//! Line-oriented circuit format.
//!
//! ```text
//! n=3 coupling=star:0
//! GATE H 0
//! GATE CNOT 0 2
//! GATE Rz 1 0.25
//! GATE CRz 2 0 -1.5 dur=5e-7
//! ```
//!
//! Angles and durations use the shortest round-tripping float form, so
//! `read(write(c)) == c` bit for bit.

use super::{Circuit, Coupling, Gate, GateKind};
use crate::{Error, Result};
use std::fmt::Write;

pub(super) fn write(circuit: &Circuit) -> String {
    let mut out = String::new();
    let coupling = match circuit.coupling {
        Coupling::AllToAll => "all".to_string(),
        Coupling::Star { center } => format!("star:{center}"),
    };
    writeln!(out, "n={} coupling={}", circuit.n(), coupling).unwrap();
    for g in circuit.gates() {
        out.push_str("GATE ");
        out.push_str(g.kind.name());
        for q in g.qubits() {
            write!(out, " {q}").unwrap();
        }
        if let Some(l) = g.kind.angle() {
            write!(out, " {l:?}").unwrap();
        }
        if let Some(d) = g.duration {
            write!(out, " dur={d:?}").unwrap();
        }
        out.push('\n');
    }
    out
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_header(line: &str) -> Result<(usize, Coupling)> {
    let mut n = None;
    let mut coupling = None;
    for tok in line.split_whitespace() {
        if let Some(v) = tok.strip_prefix("n=") {
            n = Some(v.parse::<usize>().map_err(|e| parse_err(1, e.to_string()))?);
        } else if let Some(v) = tok.strip_prefix("coupling=") {
            coupling = Some(if v == "all" {
                Coupling::AllToAll
            } else if let Some(c) = v.strip_prefix("star:") {
                Coupling::Star {
                    center: c.parse().map_err(|_| parse_err(1, "bad star center"))?,
                }
            } else {
                return Err(parse_err(1, format!("unknown coupling `{v}`")));
            });
        } else {
            return Err(parse_err(1, format!("unexpected header token `{tok}`")));
        }
    }
    match (n, coupling) {
        (Some(n), Some(c)) => Ok((n, c)),
        _ => Err(parse_err(1, "header needs n=<int> coupling=<star:center|all>")),
    }
}

fn kind_from(name: &str, angle: Option<f64>) -> Option<GateKind> {
    Some(match (name, angle) {
        ("X", None) => GateKind::X,
        ("Y", None) => GateKind::Y,
        ("Z", None) => GateKind::Z,
        ("H", None) => GateKind::H,
        ("S", None) => GateKind::S,
        ("Sdg", None) => GateKind::Sdg,
        ("SqrtX", None) => GateKind::SqrtX,
        ("SqrtXdg", None) => GateKind::SqrtXdg,
        ("CNOT", None) => GateKind::Cnot,
        ("SWAP", None) => GateKind::Swap,
        ("Rz", Some(l)) => GateKind::Rz(l),
        ("CRz", Some(l)) => GateKind::CRz(l),
        _ => return None,
    })
}

fn arity_of(name: &str) -> Option<(usize, bool)> {
    Some(match name {
        "X" | "Y" | "Z" | "H" | "S" | "Sdg" | "SqrtX" | "SqrtXdg" => (1, false),
        "Rz" => (1, true),
        "CNOT" | "SWAP" => (2, false),
        "CRz" => (2, true),
        _ => return None,
    })
}

pub(super) fn read(src: &str) -> Result<Circuit> {
    let mut lines = src.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
    let (n, coupling) = parse_header(header)?;
    let mut circuit = Circuit::new(n, coupling);
    for (idx, line) in lines {
        let lineno = idx + 1;
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.first() != Some(&"GATE") || toks.len() < 3 {
            return Err(parse_err(lineno, "expected `GATE kind q0 [q1] [lambda]`"));
        }
        let name = toks[1];
        let (arity, has_angle) =
            arity_of(name).ok_or_else(|| parse_err(lineno, format!("unknown gate `{name}`")))?;
        let mut rest = toks[2..].iter();
        let mut qubits = Vec::with_capacity(arity);
        for _ in 0..arity {
            let q = rest
                .next()
                .ok_or_else(|| parse_err(lineno, "missing qubit"))?
                .parse::<usize>()
                .map_err(|e| parse_err(lineno, e.to_string()))?;
            qubits.push(q);
        }
        let angle = if has_angle {
            Some(
                rest.next()
                    .ok_or_else(|| parse_err(lineno, "missing angle"))?
                    .parse::<f64>()
                    .map_err(|e| parse_err(lineno, e.to_string()))?,
            )
        } else {
            None
        };
        let mut duration = None;
        for tok in rest {
            match tok.strip_prefix("dur=") {
                Some(d) => {
                    duration = Some(d.parse::<f64>().map_err(|e| parse_err(lineno, e.to_string()))?)
                }
                None => return Err(parse_err(lineno, format!("unexpected token `{tok}`"))),
            }
        }
        let kind = kind_from(name, angle).expect("arity table and kind table agree");
        let mut gate = Gate::new(kind, &qubits).map_err(|e| parse_err(lineno, e.to_string()))?;
        gate.duration = duration;
        circuit
            .push(gate)
            .map_err(|e| parse_err(lineno, e.to_string()))?;
    }
    Ok(circuit)
}
