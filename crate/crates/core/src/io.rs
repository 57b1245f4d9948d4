//! Text formats: netlists, trace CSV, parameter sets, VCD export.
//!
//! All parsers are total: malformed input yields a structured error
//! carrying the line and column, never a panic. Times are serialized
//! in seconds as scientific notation with 17 significant digits, which
//! round-trips an `f64` bit-faithfully.
//!
//! Netlist grammar (one directive per line, `#` starts a comment):
//!
//! ```text
//! input  <net>
//! output <net>
//! gate   <id> <NOR2|NAND2|CGATE2|INV> <paramset> <netA> <netB> <netOut>
//! ```
//!
//! Trace CSV: a `time_s,net,value` header, then one row per sample.
//! The first row of each net gives its initial value at the window
//! start; every later row is a transition.
//!
//! Parameter files hold named sets with explicit units in the keys:
//!
//! ```text
//! [nor15]
//! kind = nor
//! r_na_ohm = 8.360562682200e3
//! ...
//! ```

use crate::params::{CGateParams, GateParams};
use crate::sim::{DigitalTrace, Gate, GateKind, GateParamSet, Netlist, ParamLibrary};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use thiserror::Error;

/// Parse failure with its location (1-based line and column).
#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown gate kind `{0}`")]
    UnknownGateKind(String),
    #[error("dangling net `{0}`: referenced but never driven or declared as input")]
    DanglingNet(String),
    #[error("missing key `{0}`")]
    MissingKey(String),
    #[error("invalid number `{0}`")]
    BadNumber(String),
    #[error("duplicate driver for net `{0}`")]
    DuplicateDriver(String),
    #[error("invalid parameter set: {0}")]
    BadParams(String),
    #[error("trace for `{0}` is not strictly increasing")]
    NonMonotoneTrace(String),
}

fn err(line: usize, column: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, column, kind }
}

fn syntax(line: usize, column: usize, msg: impl Into<String>) -> ParseError {
    err(line, column, ParseErrorKind::Syntax(msg.into()))
}

/// Column (1-based) of `token` within `line_text`.
fn column_of(line_text: &str, token: &str) -> usize {
    line_text.find(token).map(|p| p + 1).unwrap_or(1)
}

/// Serialize a time or other float at full round-trip precision.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn parse_f64(line: usize, text: &str, token: &str) -> Result<f64, ParseError> {
    token.parse::<f64>().map_err(|_| {
        err(
            line,
            column_of(text, token),
            ParseErrorKind::BadNumber(token.to_string()),
        )
    })
}

// -- netlist -----------------------------------------------------------------

/// Parse the line-based netlist format.
pub fn parse_netlist(text: &str) -> Result<Netlist, ParseError> {
    let mut netlist = Netlist::default();
    let mut ids: BTreeMap<String, usize> = BTreeMap::new();
    let mut driven: Vec<bool> = Vec::new();
    let mut intern = |name: &str, netlist: &mut Netlist, driven: &mut Vec<bool>| -> usize {
        if let Some(&id) = ids.get(name) {
            return id;
        }
        let id = netlist.nets.len();
        netlist.nets.push(name.to_string());
        driven.push(false);
        ids.insert(name.to_string(), id);
        id
    };
    for (lno, raw) in text.lines().enumerate() {
        let line = lno + 1;
        let content = raw.split('#').next().unwrap_or("");
        let mut tokens = content.split_whitespace();
        let Some(head) = tokens.next() else {
            continue;
        };
        match head {
            "input" | "output" => {
                let Some(net) = tokens.next() else {
                    return Err(syntax(line, 1, format!("`{head}` needs a net name")));
                };
                if tokens.next().is_some() {
                    return Err(syntax(line, 1, format!("`{head}` takes exactly one net")));
                }
                let id = intern(net, &mut netlist, &mut driven);
                if head == "input" {
                    if !netlist.inputs.contains(&id) {
                        netlist.inputs.push(id);
                    }
                    driven[id] = true;
                } else if !netlist.outputs.contains(&id) {
                    netlist.outputs.push(id);
                }
            }
            "gate" => {
                let fields: Vec<&str> = tokens.collect();
                if fields.len() != 6 {
                    return Err(syntax(
                        line,
                        1,
                        "`gate` needs: <id> <kind> <paramset> <netA> <netB> <netOut>",
                    ));
                }
                let kind = match fields[1] {
                    "NOR2" => GateKind::Nor2,
                    "NAND2" => GateKind::Nand2,
                    "CGATE2" => GateKind::CGate2,
                    "INV" => GateKind::Inv,
                    other => {
                        return Err(err(
                            line,
                            column_of(raw, other),
                            ParseErrorKind::UnknownGateKind(other.to_string()),
                        ))
                    }
                };
                let input_a = intern(fields[3], &mut netlist, &mut driven);
                let input_b = intern(fields[4], &mut netlist, &mut driven);
                let output = intern(fields[5], &mut netlist, &mut driven);
                if driven[output] {
                    return Err(err(
                        line,
                        column_of(raw, fields[5]),
                        ParseErrorKind::DuplicateDriver(fields[5].to_string()),
                    ));
                }
                driven[output] = true;
                netlist.gates.push(Gate {
                    id: fields[0].to_string(),
                    kind,
                    param_set: fields[2].to_string(),
                    input_a,
                    input_b,
                    output,
                });
            }
            other => {
                return Err(syntax(
                    line,
                    column_of(raw, other),
                    format!("unknown directive `{other}`"),
                ));
            }
        }
    }
    // Every gate input must be driven by a gate or declared an input.
    for g in &netlist.gates {
        for net in [g.input_a, g.input_b] {
            if !driven[net] {
                return Err(err(
                    1,
                    1,
                    ParseErrorKind::DanglingNet(netlist.nets[net].clone()),
                ));
            }
        }
    }
    Ok(netlist)
}

/// Canonical netlist text: inputs, outputs, then gates.
pub fn write_netlist(netlist: &Netlist) -> String {
    let mut out = String::new();
    for &id in &netlist.inputs {
        let _ = writeln!(out, "input {}", netlist.nets[id]);
    }
    for &id in &netlist.outputs {
        let _ = writeln!(out, "output {}", netlist.nets[id]);
    }
    for g in &netlist.gates {
        let _ = writeln!(
            out,
            "gate {} {} {} {} {} {}",
            g.id,
            g.kind.name(),
            g.param_set,
            netlist.nets[g.input_a],
            netlist.nets[g.input_b],
            netlist.nets[g.output]
        );
    }
    out
}

// -- traces --------------------------------------------------------------------

/// Parse `time_s,net,value` CSV into one trace per net (order of first
/// appearance). The first row of a net sets its initial value.
pub fn parse_traces(text: &str) -> Result<Vec<DigitalTrace>, ParseError> {
    let mut lines = text.lines().enumerate();
    let Some((_, header)) = lines.next() else {
        return Ok(Vec::new());
    };
    if header.trim() != "time_s,net,value" {
        return Err(syntax(1, 1, "expected header `time_s,net,value`"));
    }
    let mut order: Vec<String> = Vec::new();
    let mut traces: BTreeMap<String, DigitalTrace> = BTreeMap::new();
    for (lno, raw) in lines {
        let line = lno + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').collect();
        if fields.len() != 3 {
            return Err(syntax(line, 1, "expected `time,net,value`"));
        }
        let t = parse_f64(line, raw, fields[0].trim())?;
        let net = fields[1].trim();
        let value = match fields[2].trim() {
            "0" => false,
            "1" => true,
            other => {
                return Err(syntax(
                    line,
                    column_of(raw, other),
                    format!("value must be 0 or 1, got `{other}`"),
                ))
            }
        };
        if net.is_empty() {
            return Err(syntax(line, 1, "empty net name"));
        }
        match traces.get_mut(net) {
            None => {
                order.push(net.to_string());
                traces.insert(net.to_string(), DigitalTrace::constant(net, value));
                // the initial row's timestamp only anchors the window
                let _ = t;
            }
            Some(trace) => {
                if trace.transitions.last().is_some_and(|&prev| t <= prev) {
                    return Err(err(
                        line,
                        1,
                        ParseErrorKind::NonMonotoneTrace(net.to_string()),
                    ));
                }
                if trace.value_at(f64::INFINITY) == value {
                    return Err(syntax(
                        line,
                        1,
                        format!("net `{net}` repeats value {}", u8::from(value)),
                    ));
                }
                trace.transitions.push(t);
            }
        }
    }
    Ok(order.into_iter().map(|n| traces.remove(&n).unwrap()).collect())
}

/// Serialize traces; the initial value rows carry `t = 0`.
pub fn write_traces(traces: &[DigitalTrace]) -> String {
    let mut out = String::from("time_s,net,value\n");
    for t in traces {
        let _ = writeln!(out, "{},{},{}", format_f64(0.0), t.net, u8::from(t.initial));
        let mut value = t.initial;
        for &tt in &t.transitions {
            value = !value;
            let _ = writeln!(out, "{},{},{}", format_f64(tt), t.net, u8::from(value));
        }
    }
    out
}

// -- parameter sets --------------------------------------------------------------

fn get_key(
    map: &BTreeMap<String, (usize, f64)>,
    section_line: usize,
    key: &str,
) -> Result<f64, ParseError> {
    map.get(key)
        .map(|&(_, v)| v)
        .ok_or_else(|| err(section_line, 1, ParseErrorKind::MissingKey(key.to_string())))
}

/// Parse a parameter-set file into a library of named sets.
pub fn parse_params(text: &str) -> Result<ParamLibrary, ParseError> {
    struct Section {
        name: String,
        line: usize,
        kind: Option<(usize, String)>,
        values: BTreeMap<String, (usize, f64)>,
    }
    let mut sections: Vec<Section> = Vec::new();
    for (lno, raw) in text.lines().enumerate() {
        let line = lno + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(name) = content.strip_prefix('[') {
            let Some(name) = name.strip_suffix(']') else {
                return Err(syntax(line, 1, "unterminated section header"));
            };
            if name.trim().is_empty() {
                return Err(syntax(line, 1, "empty section name"));
            }
            sections.push(Section {
                name: name.trim().to_string(),
                line,
                kind: None,
                values: BTreeMap::new(),
            });
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(syntax(line, 1, "expected `key = value` or `[section]`"));
        };
        let key = key.trim();
        let value = value.trim();
        let Some(section) = sections.last_mut() else {
            return Err(syntax(line, 1, "key before any [section] header"));
        };
        if key == "kind" {
            section.kind = Some((line, value.to_string()));
        } else {
            let v = parse_f64(line, raw, value)?;
            section.values.insert(key.to_string(), (line, v));
        }
    }
    let mut lib = ParamLibrary::new();
    for s in sections {
        let Some((kline, kind)) = s.kind else {
            return Err(err(s.line, 1, ParseErrorKind::MissingKey("kind".into())));
        };
        let set = match kind.as_str() {
            "nor" => {
                let p = GateParams {
                    r_na: get_key(&s.values, s.line, "r_na_ohm")?,
                    r_nb: get_key(&s.values, s.line, "r_nb_ohm")?,
                    r: get_key(&s.values, s.line, "r_ohm")?,
                    c: get_key(&s.values, s.line, "c_farad")?,
                    alpha1: get_key(&s.values, s.line, "alpha1_ohm_s")?,
                    alpha2: get_key(&s.values, s.line, "alpha2_ohm_s")?,
                    eta: get_key(&s.values, s.line, "eta")?,
                    delta_min: get_key(&s.values, s.line, "delta_min_s")?,
                    v_dd: get_key(&s.values, s.line, "v_dd_volt")?,
                };
                p.validate().map_err(|e| {
                    err(s.line, 1, ParseErrorKind::BadParams(e.to_string()))
                })?;
                GateParamSet::Nor(p)
            }
            "cgate" => {
                let p = CGateParams {
                    r_n: get_key(&s.values, s.line, "r_n_ohm")?,
                    r_p: get_key(&s.values, s.line, "r_p_ohm")?,
                    alpha1: get_key(&s.values, s.line, "alpha1_ohm_s")?,
                    alpha2: get_key(&s.values, s.line, "alpha2_ohm_s")?,
                    alpha3: get_key(&s.values, s.line, "alpha3_ohm_s")?,
                    alpha4: get_key(&s.values, s.line, "alpha4_ohm_s")?,
                    c: get_key(&s.values, s.line, "c_farad")?,
                    eta: get_key(&s.values, s.line, "eta")?,
                    delta_min: get_key(&s.values, s.line, "delta_min_s")?,
                    v_dd: get_key(&s.values, s.line, "v_dd_volt")?,
                };
                p.validate().map_err(|e| {
                    err(s.line, 1, ParseErrorKind::BadParams(e.to_string()))
                })?;
                GateParamSet::CGate(p)
            }
            other => {
                return Err(syntax(
                    kline,
                    1,
                    format!("kind must be `nor` or `cgate`, got `{other}`"),
                ))
            }
        };
        lib.insert(s.name, set);
    }
    Ok(lib)
}

/// Serialize a parameter library in the section format.
pub fn write_params(lib: &ParamLibrary) -> String {
    let mut out = String::new();
    for (name, set) in lib {
        let _ = writeln!(out, "[{name}]");
        match set {
            GateParamSet::Nor(p) => {
                let _ = writeln!(out, "kind = nor");
                let _ = writeln!(out, "r_na_ohm = {}", format_f64(p.r_na));
                let _ = writeln!(out, "r_nb_ohm = {}", format_f64(p.r_nb));
                let _ = writeln!(out, "r_ohm = {}", format_f64(p.r));
                let _ = writeln!(out, "c_farad = {}", format_f64(p.c));
                let _ = writeln!(out, "alpha1_ohm_s = {}", format_f64(p.alpha1));
                let _ = writeln!(out, "alpha2_ohm_s = {}", format_f64(p.alpha2));
                let _ = writeln!(out, "eta = {}", format_f64(p.eta));
                let _ = writeln!(out, "delta_min_s = {}", format_f64(p.delta_min));
                let _ = writeln!(out, "v_dd_volt = {}", format_f64(p.v_dd));
            }
            GateParamSet::CGate(p) => {
                let _ = writeln!(out, "kind = cgate");
                let _ = writeln!(out, "r_n_ohm = {}", format_f64(p.r_n));
                let _ = writeln!(out, "r_p_ohm = {}", format_f64(p.r_p));
                let _ = writeln!(out, "alpha1_ohm_s = {}", format_f64(p.alpha1));
                let _ = writeln!(out, "alpha2_ohm_s = {}", format_f64(p.alpha2));
                let _ = writeln!(out, "alpha3_ohm_s = {}", format_f64(p.alpha3));
                let _ = writeln!(out, "alpha4_ohm_s = {}", format_f64(p.alpha4));
                let _ = writeln!(out, "c_farad = {}", format_f64(p.c));
                let _ = writeln!(out, "eta = {}", format_f64(p.eta));
                let _ = writeln!(out, "delta_min_s = {}", format_f64(p.delta_min));
                let _ = writeln!(out, "v_dd_volt = {}", format_f64(p.v_dd));
            }
        }
        let _ = writeln!(out);
    }
    out
}

// -- key-value config ------------------------------------------------------------

/// Parse a flat `key = value` configuration file; later keys win.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, ParseError> {
    let mut map = BTreeMap::new();
    for (lno, raw) in text.lines().enumerate() {
        let line = lno + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(syntax(line, 1, "expected `key = value`"));
        };
        if key.trim().is_empty() {
            return Err(syntax(line, 1, "empty key"));
        }
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

// -- VCD --------------------------------------------------------------------------

/// Femtoseconds per VCD time unit.
const VCD_TIMESCALE: f64 = 1e-15;

/// Short printable VCD identifier for wire index `i`.
fn vcd_ident(mut i: usize) -> String {
    // identifiers use the printable range '!'..='~'
    let mut s = String::new();
    loop {
        s.push((b'!' + (i % 94) as u8) as char);
        i /= 94;
        if i == 0 {
            break;
        }
    }
    s
}

/// Render traces as a VCD document with a 1 fs timescale.
///
/// Timestamps are rounded to the femtosecond grid, kept monotone, and
/// changes landing on the same tick are merged under one timestamp.
pub fn write_vcd(traces: &[DigitalTrace]) -> String {
    let mut out = String::new();
    out.push_str("$timescale 1 fs $end\n");
    out.push_str("$scope module top $end\n");
    for (i, t) in traces.iter().enumerate() {
        let _ = writeln!(out, "$var wire 1 {} {} $end", vcd_ident(i), t.net);
    }
    out.push_str("$upscope $end\n");
    out.push_str("$enddefinitions $end\n");
    out.push_str("$dumpvars\n");
    for (i, t) in traces.iter().enumerate() {
        let _ = writeln!(out, "{}{}", u8::from(t.initial), vcd_ident(i));
    }
    out.push_str("$end\n");
    // merge all transitions into one monotone change list
    let mut changes: Vec<(u64, usize, bool)> = Vec::new();
    for (i, t) in traces.iter().enumerate() {
        let mut value = t.initial;
        let mut last_tick = 0u64;
        for &tt in &t.transitions {
            value = !value;
            let tick = ((tt / VCD_TIMESCALE).round() as u64).max(last_tick + 1);
            last_tick = tick;
            changes.push((tick, i, value));
        }
    }
    changes.sort_by_key(|&(tick, i, _)| (tick, i));
    let mut current = u64::MAX;
    for (tick, i, value) in changes {
        if tick != current {
            let _ = writeln!(out, "#{tick}");
            current = tick;
        }
        let _ = writeln!(out, "{}{}", u8::from(value), vcd_ident(i));
    }
    out
}
