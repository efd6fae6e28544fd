//! OpenQASM 2.0 export and import over the gate vocabulary
//! `h, x, rz, u1, u3, cx, cu1`.

use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::gate::GateOp;

const HEADER: &str = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";

/// 17 significant digits, enough for an exact `f64` round trip.
fn param(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn export_qasm(circuit: &Circuit) -> String {
    let mut out = String::from(HEADER);
    if !circuit.label().is_empty() {
        let _ = writeln!(out, "// {}", circuit.label().replace('\n', " "));
    }
    let _ = writeln!(out, "qreg q[{}];", circuit.n_qubits());
    for g in circuit.gates() {
        let line = match *g {
            GateOp::H { target } => format!("h q[{target}];"),
            GateOp::X { target } => format!("x q[{target}];"),
            GateOp::Rz { target, theta } => format!("rz({}) q[{target}];", param(theta)),
            GateOp::U1 { target, lambda } => format!("u1({}) q[{target}];", param(lambda)),
            GateOp::U3 {
                target,
                theta,
                phi,
                lambda,
            } => format!(
                "u3({},{},{}) q[{target}];",
                param(theta),
                param(phi),
                param(lambda)
            ),
            GateOp::Cnot { control, target } => format!("cx q[{control}],q[{target}];"),
            GateOp::Cu1 {
                control,
                target,
                lambda,
            } => format!("cu1({}) q[{control}],q[{target}];", param(lambda)),
        };
        out.push_str(&line);
        out.push('\n');
    }
    out
}

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::Qasm {
        line,
        message: message.into(),
    }
}

/// Parses the exported dialect back into a circuit. Errors carry the
/// 1-based line of the offending statement.
pub fn import_qasm(text: &str) -> Result<Circuit> {
    let mut circuit: Option<Circuit> = None;
    let mut label = String::from("qasm");
    let mut saw_version = false;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let (code, comment) = match raw.find("//") {
            Some(p) => (&raw[..p], Some(raw[p + 2..].trim())),
            None => (raw, None),
        };
        if code.trim().is_empty() {
            if let (Some(c), None) = (comment, circuit.as_ref()) {
                if saw_version && !c.is_empty() {
                    label = c.to_string();
                }
            }
            continue;
        }
        for stmt in code.split(';') {
            let stmt = stmt.trim();
            if stmt.is_empty() {
                continue;
            }
            if let Some(rest) = stmt.strip_prefix("OPENQASM") {
                if rest.trim() != "2.0" {
                    return Err(err(line, format!("unsupported version `{}`", rest.trim())));
                }
                saw_version = true;
                continue;
            }
            if stmt.starts_with("include") {
                continue;
            }
            if let Some(rest) = stmt.strip_prefix("qreg") {
                if circuit.is_some() {
                    return Err(err(line, "only one quantum register is supported"));
                }
                let n = parse_register_decl(rest.trim(), line)?;
                circuit = Some(Circuit::new(n, label.clone()));
                continue;
            }
            if stmt.starts_with("creg") || stmt.starts_with("barrier") {
                continue;
            }
            let c = circuit
                .as_mut()
                .ok_or_else(|| err(line, "gate before qreg declaration"))?;
            let gate = parse_gate(stmt, line)?;
            c.push(gate).map_err(|e| err(line, e.to_string()))?;
        }
    }
    circuit.ok_or_else(|| err(text.lines().count().max(1), "missing qreg declaration"))
}

fn parse_register_decl(decl: &str, line: usize) -> Result<usize> {
    let inner = decl
        .strip_prefix("q[")
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| err(line, format!("malformed register `{decl}`, expected q[n]")))?;
    let n: usize = inner
        .trim()
        .parse()
        .map_err(|_| err(line, format!("bad register size `{inner}`")))?;
    if n == 0 {
        return Err(err(line, "register size must be positive"));
    }
    Ok(n)
}

fn parse_gate(stmt: &str, line: usize) -> Result<GateOp> {
    let (head, operands) = match stmt.find(')') {
        Some(p) if stmt[..p].contains('(') => (&stmt[..=p], stmt[p + 1..].trim()),
        _ => match stmt.find(char::is_whitespace) {
            Some(p) => (&stmt[..p], stmt[p..].trim()),
            None => return Err(err(line, format!("malformed statement `{stmt}`"))),
        },
    };
    let (name, params) = match head.find('(') {
        Some(p) => {
            let body = &head[p + 1..head.len() - 1];
            let params = body
                .split(',')
                .map(|s| parse_param(s.trim(), line))
                .collect::<Result<Vec<f64>>>()?;
            (head[..p].trim(), params)
        }
        None => (head.trim(), Vec::new()),
    };
    let qubits = operands
        .split(',')
        .map(|s| parse_qubit(s.trim(), line))
        .collect::<Result<Vec<usize>>>()?;

    let expect = |np: usize, nq: usize| -> Result<()> {
        if params.len() != np {
            return Err(err(
                line,
                format!("`{name}` takes {np} parameter(s), got {}", params.len()),
            ));
        }
        if qubits.len() != nq {
            return Err(err(
                line,
                format!("`{name}` takes {nq} qubit(s), got {}", qubits.len()),
            ));
        }
        Ok(())
    };

    let gate = match name {
        "h" => {
            expect(0, 1)?;
            GateOp::h(qubits[0])
        }
        "x" => {
            expect(0, 1)?;
            GateOp::x(qubits[0])
        }
        "rz" => {
            expect(1, 1)?;
            GateOp::rz(qubits[0], params[0])
        }
        "u1" => {
            expect(1, 1)?;
            GateOp::u1(qubits[0], params[0])
        }
        "u3" => {
            expect(3, 1)?;
            GateOp::u3(qubits[0], params[0], params[1], params[2])
        }
        "cx" => {
            expect(0, 2)?;
            GateOp::cnot(qubits[0], qubits[1])
        }
        "cu1" => {
            expect(1, 2)?;
            GateOp::cu1(qubits[0], qubits[1], params[0])
        }
        other => return Err(err(line, format!("unknown gate `{other}`"))),
    };
    Ok(gate)
}

fn parse_qubit(s: &str, line: usize) -> Result<usize> {
    s.strip_prefix("q[")
        .and_then(|r| r.strip_suffix(']'))
        .and_then(|r| r.trim().parse().ok())
        .ok_or_else(|| err(line, format!("malformed qubit operand `{s}`")))
}

/// A float literal, or a product/quotient of literals and `pi` with an
/// optional leading sign (`-pi/2`, `3*pi/4`).
fn parse_param(s: &str, line: usize) -> Result<f64> {
    let bad = || err(line, format!("malformed parameter `{s}`"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Ok(v) = s.parse::<f64>() {
        return if v.is_finite() { Ok(v) } else { Err(bad()) };
    }
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1.0, rest.trim()),
        None => (1.0, s),
    };
    let mut value = 1.0;
    let mut op = '*';
    let mut rest = body;
    loop {
        let end = rest.find(['*', '/']).unwrap_or(rest.len());
        let tok = rest[..end].trim();
        let v = match tok {
            "pi" => PI,
            t => t.parse::<f64>().map_err(|_| bad())?,
        };
        if op == '*' {
            value *= v;
        } else {
            value /= v;
        }
        if end == rest.len() {
            break;
        }
        op = rest.as_bytes()[end] as char;
        rest = &rest[end + 1..];
    }
    if value.is_finite() {
        Ok(sign * value)
    } else {
        Err(bad())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_circuit_has_header_and_register_only() {
        let text = export_qasm(&Circuit::new(1, ""));
        assert_eq!(text, "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[1];\n");
        let back = import_qasm(&text).unwrap();
        assert!(back.is_empty());
        assert_eq!(back.n_qubits(), 1);
    }

    #[test]
    fn h_then_cx() {
        let c = Circuit::from_gates(2, "", [GateOp::h(0), GateOp::cnot(0, 1)]).unwrap();
        let text = export_qasm(&c);
        let body: Vec<&str> = text.lines().skip(3).collect();
        assert_eq!(body, ["h q[0];", "cx q[0],q[1];"]);
    }

    #[test]
    fn out_of_range_qubit_names_line() {
        let text = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[2];\nh q[5];\n";
        match import_qasm(text) {
            Err(Error::Qasm { line, .. }) => assert_eq!(line, 4),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_gate_and_bad_parameter() {
        let unknown = "OPENQASM 2.0;\nqreg q[1];\nt q[0];\n";
        assert!(matches!(import_qasm(unknown), Err(Error::Qasm { line: 3, .. })));
        let bad = "OPENQASM 2.0;\nqreg q[1];\nu1(abc) q[0];\n";
        assert!(matches!(import_qasm(bad), Err(Error::Qasm { line: 3, .. })));
    }

    #[test]
    fn pi_expressions() {
        assert_eq!(parse_param("-pi/2", 1).unwrap(), -PI / 2.0);
        assert_eq!(parse_param("3*pi/4", 1).unwrap(), 3.0 * PI / 4.0);
        assert_eq!(parse_param("1.5e-3", 1).unwrap(), 1.5e-3);
    }

    #[test]
    fn parameters_keep_at_least_15_digits() {
        let c = Circuit::from_gates(1, "", [GateOp::u1(0, PI / 3.0)]).unwrap();
        let text = export_qasm(&c);
        let p = text.lines().last().unwrap();
        let inner = &p[p.find('(').unwrap() + 1..p.find(')').unwrap()];
        let mantissa = inner.split('e').next().unwrap().replace(['.', '-'], "");
        assert!(mantissa.len() >= 15);
        assert_eq!(import_qasm(&text).unwrap().gates(), c.gates());
    }

    #[test]
    fn label_survives_as_comment() {
        let c = Circuit::new(2, "step 3");
        assert_eq!(import_qasm(&export_qasm(&c)).unwrap().label(), "step 3");
    }
}
