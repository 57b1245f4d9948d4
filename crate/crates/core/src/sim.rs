//! Event-driven gate-level dynamic timing simulator.
//!
//! Gates are connected by named nets; each gate owns a delay channel
//! that turns the digital transitions arriving at its inputs into
//! threshold crossings of an analog output trajectory. Input events
//! are deferred by the gate's pure delay and then switch the channel's
//! trajectory, starting from the voltage the previous trajectory had
//! reached at that instant. At most one output event is pending per
//! gate: every mode switch recomputes the crossing and replaces or
//! cancels the previously scheduled one, which is what filters pulses
//! too short to drive the output across the threshold.
//!
//! Four channel flavors share the same event loop: the closed-form
//! hybrid model, the exact-ODE reference ([`crate::oracle`]), and the
//! pure- and inertial-delay baselines.

use crate::delay::{self, DelayError};
use crate::oracle::{self, ModeOde, OracleError};
use crate::params::{CGateParams, GateParams};
use std::collections::{BTreeMap, BinaryHeap};
use thiserror::Error;

pub type NetId = usize;

/// Supported gate kinds. An inverter is a NOR with both inputs tied to
/// the same net; a NAND is the NOR dual (inputs inverted, trajectory
/// reflected around `V_DD/2`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateKind {
    Nor2,
    Nand2,
    CGate2,
    Inv,
}

impl GateKind {
    pub fn name(self) -> &'static str {
        match self {
            GateKind::Nor2 => "NOR2",
            GateKind::Nand2 => "NAND2",
            GateKind::CGate2 => "CGATE2",
            GateKind::Inv => "INV",
        }
    }
}

/// One gate instance of a netlist.
#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub id: String,
    pub kind: GateKind,
    pub param_set: String,
    pub input_a: NetId,
    pub input_b: NetId,
    pub output: NetId,
}

/// Circuit topology. Cycles are allowed (asynchronous feedback); every
/// net has at most one driver, and exactly one if it is not a primary
/// input.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Netlist {
    /// Net names; the index is the [`NetId`].
    pub nets: Vec<String>,
    pub gates: Vec<Gate>,
    pub inputs: Vec<NetId>,
    pub outputs: Vec<NetId>,
}

impl Netlist {
    pub fn find_net(&self, name: &str) -> Option<NetId> {
        self.nets.iter().position(|n| n == name)
    }

    /// Structural checks: driver uniqueness, dangling references,
    /// inverter input tying.
    pub fn validate(&self) -> Result<(), SimError> {
        let mut driver: Vec<Option<usize>> = vec![None; self.nets.len()];
        for (gi, g) in self.gates.iter().enumerate() {
            for net in [g.input_a, g.input_b, g.output] {
                if net >= self.nets.len() {
                    return Err(SimError::DanglingNet {
                        gate: g.id.clone(),
                        net,
                    });
                }
            }
            if let Some(prev) = driver[g.output] {
                return Err(SimError::MultipleDrivers {
                    net: self.nets[g.output].clone(),
                    gates: [self.gates[prev].id.clone(), g.id.clone()],
                });
            }
            driver[g.output] = Some(gi);
            if g.kind == GateKind::Inv && g.input_a != g.input_b {
                return Err(SimError::InverterInputsDiffer { gate: g.id.clone() });
            }
        }
        for &input in &self.inputs {
            if let Some(gi) = driver[input] {
                return Err(SimError::MultipleDrivers {
                    net: self.nets[input].clone(),
                    gates: [self.gates[gi].id.clone(), "<stimulus>".into()],
                });
            }
        }
        Ok(())
    }
}

/// A parameter set bound to a gate kind.
#[derive(Debug, Clone, PartialEq)]
pub enum GateParamSet {
    Nor(GateParams),
    CGate(CGateParams),
}

impl GateParamSet {
    pub fn delta_min(&self) -> f64 {
        match self {
            GateParamSet::Nor(p) => p.delta_min,
            GateParamSet::CGate(p) => p.delta_min,
        }
    }

    pub fn v_dd(&self) -> f64 {
        match self {
            GateParamSet::Nor(p) => p.v_dd,
            GateParamSet::CGate(p) => p.v_dd,
        }
    }
}

/// Named parameter sets a netlist refers to.
pub type ParamLibrary = BTreeMap<String, GateParamSet>;

/// Timestamped threshold-crossing transitions of one net.
///
/// Transitions alternate by construction: the k-th entry flips the
/// value reached after the (k−1)-th.
#[derive(Debug, Clone, PartialEq)]
pub struct DigitalTrace {
    pub net: String,
    pub initial: bool,
    pub transitions: Vec<f64>,
}

impl DigitalTrace {
    pub fn constant(net: impl Into<String>, value: bool) -> DigitalTrace {
        DigitalTrace {
            net: net.into(),
            initial: value,
            transitions: Vec::new(),
        }
    }

    /// Strictly increasing transition times?
    pub fn is_well_formed(&self) -> bool {
        self.transitions.windows(2).all(|w| w[0] < w[1])
            && self.transitions.iter().all(|t| t.is_finite())
    }

    /// Value right after time `t` (transitions at exactly `t` counted).
    pub fn value_at(&self, t: f64) -> bool {
        let flips = self.transitions.partition_point(|&tt| tt <= t);
        self.initial ^ (flips % 2 == 1)
    }

    pub fn final_value(&self) -> bool {
        self.initial ^ (self.transitions.len() % 2 == 1)
    }

    /// Latest transition time, if any.
    pub fn last_time(&self) -> Option<f64> {
        self.transitions.last().copied()
    }
}

/// An instantaneous digital value change on a net.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    pub time: f64,
    pub net: NetId,
    pub value: bool,
}

/// Analytic channel family driving [`simulate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EngineKind {
    /// Closed-form hybrid trajectories.
    Hybrid,
    /// Exact-ODE reference channels at the given integration tolerance.
    Oracle { tol: f64 },
}

/// Baseline delay models for [`simulate_baseline`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaselineKind {
    /// Constant input-to-output delay per direction.
    Pure,
    /// Constant delay plus removal of pulses shorter than the delay.
    Inertial,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("gate {gate}: unknown parameter set `{set}`")]
    UnknownParamSet { gate: String, set: String },
    #[error("gate {gate}: parameter set `{set}` does not match gate kind {kind}")]
    ParamKindMismatch {
        gate: String,
        set: String,
        kind: &'static str,
    },
    #[error("gate {gate}: references net index {net} out of range")]
    DanglingNet { gate: String, net: NetId },
    #[error("net {net} driven by both {} and {}", gates[0], gates[1])]
    MultipleDrivers { net: String, gates: [String; 2] },
    #[error("inverter {gate} must tie both inputs to the same net")]
    InverterInputsDiffer { gate: String },
    #[error("stimulus for net `{net}` which is not a primary input")]
    StimulusForNonInput { net: String },
    #[error("stimulus trace for `{net}` is not strictly increasing")]
    MalformedStimulus { net: String },
    #[error("missing stimulus for primary input `{net}`")]
    MissingStimulus { net: String },
    #[error("missing delay constants for gate {gate}")]
    MissingDelayConstants { gate: String },
    #[error("gate {gate} at t = {time}: {source}")]
    Delay {
        gate: String,
        time: f64,
        source: DelayError,
    },
    #[error("gate {gate} at t = {time}: {source}")]
    Oracle {
        gate: String,
        time: f64,
        source: OracleError,
    },
    #[error("event budget exhausted at t = {time}: {budget} events in one instant (zero-delay loop?)")]
    OscillationBudget { time: f64, budget: usize },
}

// -- event queue ----------------------------------------------------------

/// Queue entries ordered by (time, class, gate, pin, seq); net changes
/// at an instant are applied before the gate-input events of the same
/// instant, and gate inputs go in (gate, pin) order.
#[derive(Debug, Clone, Copy)]
enum QueueItem {
    NetChange {
        time: f64,
        net: NetId,
        value: bool,
        /// Issuing gate and its schedule token, or `None` for stimuli.
        token: Option<(usize, u64)>,
    },
    GateInput {
        time: f64,
        gate: usize,
        pin: u8,
        value: bool,
    },
}

impl QueueItem {
    fn key(&self) -> (f64, u8, usize, u8) {
        match *self {
            QueueItem::NetChange { time, net, .. } => (time, 0, net, 0),
            QueueItem::GateInput {
                time, gate, pin, ..
            } => (time, 1, gate, pin),
        }
    }

    fn time(&self) -> f64 {
        self.key().0
    }
}

#[derive(Debug)]
struct Ordered {
    item: QueueItem,
    seq: u64,
}

impl PartialEq for Ordered {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == std::cmp::Ordering::Equal
    }
}
impl Eq for Ordered {}
impl PartialOrd for Ordered {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Ordered {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let (ta, ca, ga, pa) = self.item.key();
        let (tb, cb, gb, pb) = other.item.key();
        // BinaryHeap is a max-heap; invert for earliest-first order.
        tb.total_cmp(&ta)
            .then(cb.cmp(&ca))
            .then(gb.cmp(&ga))
            .then(pb.cmp(&pa))
            .then(other.seq.cmp(&self.seq))
    }
}

const EVENT_BUDGET_PER_INSTANT: usize = 10_000;

// -- analytic channels -------------------------------------------------------

#[derive(Debug, Clone)]
enum Traj {
    Const {
        v: f64,
    },
    Decay {
        v0: f64,
        rc: f64,
    },
    /// Rising NOR family: the four-case trajectory with explicit value
    /// at the switch; `mirrored` selects the Δ<0 variant.
    NorRising {
        v0: f64,
        delta: f64,
        mirrored: bool,
    },
    CRising {
        v0: f64,
        delta: f64,
        mirrored: bool,
    },
    CFalling {
        v0: f64,
        delta: f64,
        mirrored: bool,
    },
    OracleMode {
        mode: ModeOde,
        v0: f64,
    },
}

struct Channel {
    gate: usize,
    params: GateParamSet,
    engine: EngineKind,
    /// Raw digital input values as seen on the nets.
    raw: [bool; 2],
    /// Effective absolute times of the input events (deferral applied).
    last_input_time: [f64; 2],
    traj: Traj,
    traj_start: f64,
    /// Digital output value as of the last fired event.
    out_value: bool,
    /// Token of the currently scheduled output event, if any.
    pending: Option<u64>,
    next_token: u64,
}

impl Channel {
    /// Effective (possibly inverted) input pair for the channel math.
    fn effective(&self, kind: GateKind) -> (bool, bool) {
        match kind {
            GateKind::Nand2 => (!self.raw[0], !self.raw[1]),
            _ => (self.raw[0], self.raw[1]),
        }
    }

    fn v_dd(&self) -> f64 {
        self.params.v_dd()
    }

    fn value_at(&self, t_abs: f64) -> Result<f64, SimError> {
        let t = (t_abs - self.traj_start).max(0.0);
        let v = match &self.traj {
            Traj::Const { v } => Ok(*v),
            Traj::Decay { v0, rc } => Ok(v0 * (-t / rc).exp()),
            Traj::NorRising {
                v0,
                delta,
                mirrored,
            } => {
                let p = self.nor_params(*mirrored);
                delay::rising_value_from(t, *delta, *v0, &p).map_err(|e| self.delay_err(t_abs, e))
            }
            Traj::CRising {
                v0,
                delta,
                mirrored,
            } => {
                let cp = self.c_params(*mirrored);
                delay::c_rising_value_from(t, *delta, *v0, &cp)
                    .map_err(|e| self.delay_err(t_abs, e))
            }
            Traj::CFalling {
                v0,
                delta,
                mirrored,
            } => {
                let cp = self.c_params(*mirrored);
                delay::c_falling_value_from(t, *delta, *v0, &cp)
                    .map_err(|e| self.delay_err(t_abs, e))
            }
            Traj::OracleMode { mode, v0 } => {
                let tol = match self.engine {
                    EngineKind::Oracle { tol } => tol,
                    EngineKind::Hybrid => 1e-6,
                };
                oracle::value_at(mode, *v0, t, tol).map_err(|e| self.oracle_err(t_abs, e))
            }
        }?;
        // Real node voltages stay within the rails; the approximate
        // rising trajectory can dip slightly below zero near its start.
        Ok(v.clamp(0.0, self.v_dd()))
    }

    fn nor_params(&self, mirrored: bool) -> GateParams {
        match &self.params {
            GateParamSet::Nor(p) => {
                if mirrored {
                    p.mirror()
                } else {
                    *p
                }
            }
            GateParamSet::CGate(_) => unreachable!("NOR trajectory on a C-gate channel"),
        }
    }

    fn c_params(&self, mirrored: bool) -> CGateParams {
        match &self.params {
            GateParamSet::CGate(p) => {
                if mirrored {
                    p.mirror()
                } else {
                    *p
                }
            }
            GateParamSet::Nor(_) => unreachable!("C trajectory on a NOR channel"),
        }
    }

    fn delay_err(&self, time: f64, source: DelayError) -> SimError {
        SimError::Delay {
            gate: format!("#{}", self.gate),
            time,
            source,
        }
    }

    fn oracle_err(&self, time: f64, source: OracleError) -> SimError {
        SimError::Oracle {
            gate: format!("#{}", self.gate),
            time,
            source,
        }
    }
}

struct Recorder {
    current: Vec<bool>,
    traces: Vec<DigitalTrace>,
}

impl Recorder {
    fn new(netlist: &Netlist, initial: &[bool]) -> Recorder {
        Recorder {
            current: initial.to_vec(),
            traces: netlist
                .nets
                .iter()
                .zip(initial)
                .map(|(name, &v)| DigitalTrace {
                    net: name.clone(),
                    initial: v,
                    transitions: Vec::new(),
                })
                .collect(),
        }
    }

    /// Apply a net change; returns true if the value actually flipped.
    fn apply(&mut self, net: NetId, time: f64, value: bool) -> bool {
        if self.current[net] == value {
            return false;
        }
        self.current[net] = value;
        self.traces[net].transitions.push(time);
        true
    }
}

/// Initial net values: stimuli provide the primary inputs, gate outputs
/// are settled by repeated zero-time evaluation (feedback nets that
/// never settle keep their default low value). C gates with disagreeing
/// inputs start low.
fn initial_net_values(
    netlist: &Netlist,
    stimuli: &BTreeMap<NetId, &DigitalTrace>,
) -> Vec<bool> {
    let mut values = vec![false; netlist.nets.len()];
    for (&net, trace) in stimuli {
        values[net] = trace.initial;
    }
    for _ in 0..netlist.gates.len() + 1 {
        let mut changed = false;
        for g in &netlist.gates {
            let a = values[g.input_a];
            let b = values[g.input_b];
            let out = match g.kind {
                GateKind::Nor2 => !(a || b),
                GateKind::Inv => !a,
                GateKind::Nand2 => !(a && b),
                GateKind::CGate2 => {
                    if a == b {
                        a
                    } else {
                        values[g.output]
                    }
                }
            };
            if values[g.output] != out {
                values[g.output] = out;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    values
}

fn collect_stimuli<'a>(
    netlist: &Netlist,
    stimuli: &'a [DigitalTrace],
) -> Result<BTreeMap<NetId, &'a DigitalTrace>, SimError> {
    let mut map = BTreeMap::new();
    for trace in stimuli {
        let net = netlist
            .find_net(&trace.net)
            .ok_or_else(|| SimError::StimulusForNonInput {
                net: trace.net.clone(),
            })?;
        if !netlist.inputs.contains(&net) {
            return Err(SimError::StimulusForNonInput {
                net: trace.net.clone(),
            });
        }
        if !trace.is_well_formed() {
            return Err(SimError::MalformedStimulus {
                net: trace.net.clone(),
            });
        }
        map.insert(net, trace);
    }
    for &input in &netlist.inputs {
        if !map.contains_key(&input) {
            return Err(SimError::MissingStimulus {
                net: netlist.nets[input].clone(),
            });
        }
    }
    Ok(map)
}

/// Sink pins of every net: `(gate index, pin)` pairs in gate order.
fn net_sinks(netlist: &Netlist) -> Vec<Vec<(usize, u8)>> {
    let mut sinks = vec![Vec::new(); netlist.nets.len()];
    for (gi, g) in netlist.gates.iter().enumerate() {
        sinks[g.input_a].push((gi, 0));
        sinks[g.input_b].push((gi, 1));
    }
    sinks
}

/// Run the analytic simulator over `[0, t_end]`.
///
/// Stimuli provide one trace per primary input; the result holds one
/// trace per net, in netlist order. Identical inputs produce identical
/// traces: the queue order is fully determined by (time, event class,
/// gate, pin, insertion order).
pub fn simulate(
    netlist: &Netlist,
    params: &ParamLibrary,
    stimuli: &[DigitalTrace],
    t_end: f64,
    engine: EngineKind,
) -> Result<Vec<DigitalTrace>, SimError> {
    netlist.validate()?;
    let stim = collect_stimuli(netlist, stimuli)?;
    let initial = initial_net_values(netlist, &stim);
    let sinks = net_sinks(netlist);

    let mut channels = Vec::with_capacity(netlist.gates.len());
    for (gi, g) in netlist.gates.iter().enumerate() {
        let pset = params
            .get(&g.param_set)
            .ok_or_else(|| SimError::UnknownParamSet {
                gate: g.id.clone(),
                set: g.param_set.clone(),
            })?;
        let ok = match (pset, g.kind) {
            (GateParamSet::Nor(_), GateKind::Nor2 | GateKind::Nand2 | GateKind::Inv) => true,
            (GateParamSet::CGate(_), GateKind::CGate2) => true,
            _ => false,
        };
        if !ok {
            return Err(SimError::ParamKindMismatch {
                gate: g.id.clone(),
                set: g.param_set.clone(),
                kind: g.kind.name(),
            });
        }
        let raw = [initial[g.input_a], initial[g.input_b]];
        let out_value = initial[g.output];
        let v_dd = pset.v_dd();
        let mut ch = Channel {
            gate: gi,
            params: pset.clone(),
            engine,
            raw,
            last_input_time: [f64::NEG_INFINITY; 2],
            traj: Traj::Const { v: 0.0 },
            traj_start: 0.0,
            out_value,
            pending: None,
            next_token: 1,
        };
        // Settle the channel in its initial mode at the analog value
        // matching the digital steady state. The NAND channel tracks
        // the internal (inverted) node.
        let internal_high = match g.kind {
            GateKind::Nand2 => !out_value,
            _ => out_value,
        };
        let v0 = if internal_high { v_dd } else { 0.0 };
        ch.traj = steady_traj(&ch, g.kind, v0);
        channels.push(ch);
    }

    let mut recorder = Recorder::new(netlist, &initial);
    let mut queue: BinaryHeap<Ordered> = BinaryHeap::new();
    let mut seq = 0u64;
    let push = |queue: &mut BinaryHeap<Ordered>, seq: &mut u64, item: QueueItem| {
        *seq += 1;
        queue.push(Ordered { item, seq: *seq });
    };
    for (&net, trace) in &stim {
        let mut value = trace.initial;
        for &t in &trace.transitions {
            value = !value;
            push(
                &mut queue,
                &mut seq,
                QueueItem::NetChange {
                    time: t,
                    net,
                    value,
                    token: None,
                },
            );
        }
    }

    let mut instant = f64::NEG_INFINITY;
    let mut instant_count = 0usize;
    while let Some(Ordered { item, .. }) = queue.pop() {
        let time = item.time();
        if time > t_end {
            break;
        }
        if time == instant {
            instant_count += 1;
            if instant_count > EVENT_BUDGET_PER_INSTANT {
                return Err(SimError::OscillationBudget {
                    time,
                    budget: EVENT_BUDGET_PER_INSTANT,
                });
            }
        } else {
            instant = time;
            instant_count = 1;
        }
        match item {
            QueueItem::NetChange {
                time,
                net,
                value,
                token,
            } => {
                if let Some((gate, tok)) = token {
                    if channels[gate].pending != Some(tok) {
                        continue; // cancelled
                    }
                    channels[gate].pending = None;
                    channels[gate].out_value = value;
                }
                if !recorder.apply(net, time, value) {
                    continue;
                }
                for &(gate, pin) in &sinks[net] {
                    let dm = channels[gate].params.delta_min();
                    push(
                        &mut queue,
                        &mut seq,
                        QueueItem::GateInput {
                            time: time + dm,
                            gate,
                            pin,
                            value,
                        },
                    );
                }
            }
            QueueItem::GateInput {
                time,
                gate,
                pin,
                value,
            } => {
                let kind = netlist.gates[gate].kind;
                let out_net = netlist.gates[gate].output;
                let ch = &mut channels[gate];
                if ch.raw[pin as usize] == value {
                    continue; // replayed no-op (e.g. stale glitch copy)
                }
                let v_now = ch.value_at(time)?;
                let delta = time
                    - ch.last_input_time[0].max(ch.last_input_time[1]);
                ch.raw[pin as usize] = value;
                ch.last_input_time[pin as usize] = time;
                let effective_pin_is_b = pin == 1;
                ch.traj_start = time;
                ch.traj = next_traj(ch, kind, v_now, delta, effective_pin_is_b);
                // Replace any pending output event with the new crossing.
                ch.pending = None;
                let crossing = crossing_of(ch, time)?;
                if let Some((dt, rising)) = crossing {
                    let tok = ch.next_token;
                    ch.next_token += 1;
                    ch.pending = Some(tok);
                    let out_value = match kind {
                        GateKind::Nand2 => !rising,
                        _ => rising,
                    };
                    push(
                        &mut queue,
                        &mut seq,
                        QueueItem::NetChange {
                            time: time + dt,
                            net: out_net,
                            value: out_value,
                            token: Some((gate, tok)),
                        },
                    );
                }
            }
        }
    }

    Ok(recorder.traces)
}

/// Steady-state trajectory of a gate sitting in its initial mode.
fn steady_traj(ch: &Channel, kind: GateKind, v0: f64) -> Traj {
    match &ch.params {
        GateParamSet::Nor(p) => {
            let (a, b) = ch.effective(kind);
            match (a, b, ch.engine) {
                (false, false, _) => Traj::Const { v: v0 },
                _ => {
                    // Some pull-down path conducts; the output has
                    // settled at its asymptote already.
                    let _ = p;
                    Traj::Const { v: v0 }
                }
            }
        }
        GateParamSet::CGate(_) => Traj::Const { v: v0 },
    }
}

/// Trajectory entered after an effective input event.
///
/// For the NOR family the post-event input state alone fixes the
/// discharge trajectories; only the fully-low state needs the rising
/// four-case machinery, mirrored when input A switched last. The Δ of
/// that machinery is the separation from the previous input event of
/// either pin, which reproduces both the MIS pair compositions and the
/// same-input (SIS) reinterpretation.
fn next_traj(ch: &Channel, kind: GateKind, v_now: f64, delta: f64, pin_b_switched: bool) -> Traj {
    let mirrored = !pin_b_switched;
    match (&ch.params, ch.engine) {
        (GateParamSet::Nor(p), EngineKind::Hybrid) => {
            let (a, b) = ch.effective(kind);
            match (a, b) {
                (false, false) => Traj::NorRising {
                    v0: v_now,
                    delta: finite_delta(delta, 2.0 * p.r * p.c),
                    mirrored,
                },
                (true, false) => Traj::Decay {
                    v0: v_now,
                    rc: p.c * p.r_na,
                },
                (false, true) => Traj::Decay {
                    v0: v_now,
                    rc: p.c * p.r_nb,
                },
                (true, true) => Traj::Decay {
                    v0: v_now,
                    rc: p.c * (p.r_na * p.r_nb / (p.r_na + p.r_nb)),
                },
            }
        }
        (GateParamSet::Nor(p), EngineKind::Oracle { .. }) => {
            let (a, b) = ch.effective(kind);
            let d = finite_delta(delta, 2.0 * p.r * p.c);
            let pm = if mirrored { p.mirror() } else { *p };
            let mode = match (a, b) {
                (false, false) => ModeOde::nor_second_falling(d, &pm),
                (true, false) => ModeOde::nor_first_rising(p),
                (false, true) => ModeOde::nor_first_rising(&p.mirror()),
                (true, true) => ModeOde::nor_second_rising(d, &pm),
            };
            Traj::OracleMode { mode, v0: v_now }
        }
        (GateParamSet::CGate(cp), EngineKind::Hybrid) => {
            let (a, b) = ch.effective(kind);
            match (a, b) {
                (true, true) => Traj::CRising {
                    v0: v_now,
                    delta: finite_delta(delta, 2.0 * cp.r_n * cp.c),
                    mirrored,
                },
                (false, false) => Traj::CFalling {
                    v0: v_now,
                    delta: finite_delta(delta, 2.0 * cp.r_p * cp.c),
                    mirrored,
                },
                _ => Traj::Const { v: v_now },
            }
        }
        (GateParamSet::CGate(cp), EngineKind::Oracle { .. }) => {
            let (a, b) = ch.effective(kind);
            let cpm = if mirrored { cp.mirror() } else { *cp };
            let mode = match (a, b) {
                (true, true) => {
                    ModeOde::c_second_rising(finite_delta(delta, 2.0 * cp.r_n * cp.c), &cpm)
                }
                (false, false) => {
                    ModeOde::c_second_falling(finite_delta(delta, 2.0 * cp.r_p * cp.c), &cpm)
                }
                _ => ModeOde::c_hold(cp),
            };
            Traj::OracleMode { mode, v0: v_now }
        }
    }
}

/// Replace an unbounded separation (first event ever) by one so large
/// that the aged resistor transient has fully decayed.
fn finite_delta(delta: f64, rc: f64) -> f64 {
    if delta.is_finite() {
        delta
    } else {
        1e6 * rc
    }
}

/// Threshold crossing of the channel's current trajectory, as an offset
/// from the trajectory start, together with its direction.
fn crossing_of(ch: &Channel, now: f64) -> Result<Option<(f64, bool)>, SimError> {
    let v_dd = ch.v_dd();
    let th = 0.5 * v_dd;
    match &ch.traj {
        Traj::Const { .. } => Ok(None),
        Traj::Decay { v0, rc } => {
            if *v0 > th {
                Ok(Some((rc * (2.0 * v0 / v_dd).ln(), false)))
            } else {
                Ok(None)
            }
        }
        Traj::NorRising {
            v0,
            delta,
            mirrored,
        } => {
            if *v0 >= th {
                return Ok(None);
            }
            let p = ch.nor_params(*mirrored);
            match delay::rising_crossing_from(*delta, *v0, &p) {
                Ok(dt) => Ok(Some((dt, true))),
                // The approximation may place the crossing marginally in
                // the past when starting right at the threshold.
                Err(DelayError::NegativeDelay { .. }) => Ok(Some((0.0, true))),
                Err(DelayError::NoCrossing) => Ok(None),
                Err(e) => Err(ch.delay_err(now, e)),
            }
        }
        Traj::CRising {
            v0,
            delta,
            mirrored,
        } => {
            if *v0 >= th {
                return Ok(None);
            }
            let cp = ch.c_params(*mirrored);
            match delay::c_rising_crossing_from(*delta, *v0, &cp) {
                Ok(dt) => Ok(Some((dt, true))),
                Err(DelayError::NegativeDelay { .. }) => Ok(Some((0.0, true))),
                Err(DelayError::NoCrossing) => Ok(None),
                Err(e) => Err(ch.delay_err(now, e)),
            }
        }
        Traj::CFalling {
            v0,
            delta,
            mirrored,
        } => {
            if *v0 <= th {
                return Ok(None);
            }
            let cp = ch.c_params(*mirrored);
            match delay::c_falling_crossing_from(*delta, *v0, &cp) {
                Ok(dt) => Ok(Some((dt, false))),
                Err(DelayError::NoCrossing) => Ok(None),
                Err(e) => Err(ch.delay_err(now, e)),
            }
        }
        Traj::OracleMode { mode, v0 } => {
            let tol = match ch.engine {
                EngineKind::Oracle { tol } => tol,
                EngineKind::Hybrid => 1e-6,
            };
            let rising = *v0 < th;
            match oracle::crossing_in_mode(mode, *v0, th, mode.default_t_end(), tol) {
                Ok(Some(dt)) => Ok(Some((dt, rising))),
                Ok(None) => Ok(None),
                Err(e) => Err(ch.oracle_err(now, e)),
            }
        }
    }
}

// -- baseline models ----------------------------------------------------------

/// Per-gate constant delays (s) for the baseline models, keyed by the
/// output transition direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaselineDelays {
    pub rise: f64,
    pub fall: f64,
}

/// Run a constant-delay baseline over `[0, t_end]`.
///
/// `Pure` shifts every output change of the zero-delay circuit by the
/// direction's delay (colliding changes collapse); `Inertial` keeps at
/// most one pending change per gate and swallows pulses shorter than
/// the delay by cancelling the pending opposite change.
pub fn simulate_baseline(
    netlist: &Netlist,
    stimuli: &[DigitalTrace],
    model: BaselineKind,
    delays: &BTreeMap<String, BaselineDelays>,
    t_end: f64,
) -> Result<Vec<DigitalTrace>, SimError> {
    netlist.validate()?;
    let stim = collect_stimuli(netlist, stimuli)?;
    for g in &netlist.gates {
        if !delays.contains_key(&g.id) {
            return Err(SimError::MissingDelayConstants { gate: g.id.clone() });
        }
    }
    let initial = initial_net_values(netlist, &stim);
    let sinks = net_sinks(netlist);
    let mut recorder = Recorder::new(netlist, &initial);

    // Zero-delay logical input view per gate plus scheduling state.
    struct BaselineState {
        inputs: [bool; 2],
        /// Value the zero-delay circuit is currently steering toward.
        target: bool,
        /// Last scheduled output value (pure) or the pending event
        /// token and value (inertial).
        last_scheduled: bool,
        pending: Option<(u64, bool)>,
        out_value: bool,
        next_token: u64,
    }
    let mut states: Vec<BaselineState> = netlist
        .gates
        .iter()
        .map(|g| BaselineState {
            inputs: [initial[g.input_a], initial[g.input_b]],
            target: initial[g.output],
            last_scheduled: initial[g.output],
            pending: None,
            out_value: initial[g.output],
            next_token: 1,
        })
        .collect();

    let mut queue: BinaryHeap<Ordered> = BinaryHeap::new();
    let mut seq = 0u64;
    let push = |queue: &mut BinaryHeap<Ordered>, seq: &mut u64, item: QueueItem| {
        *seq += 1;
        queue.push(Ordered { item, seq: *seq });
    };
    for (&net, trace) in &stim {
        let mut value = trace.initial;
        for &t in &trace.transitions {
            value = !value;
            push(
                &mut queue,
                &mut seq,
                QueueItem::NetChange {
                    time: t,
                    net,
                    value,
                    token: None,
                },
            );
        }
    }

    let mut instant = f64::NEG_INFINITY;
    let mut instant_count = 0usize;
    while let Some(Ordered { item, .. }) = queue.pop() {
        let time = item.time();
        if time > t_end {
            break;
        }
        if time == instant {
            instant_count += 1;
            if instant_count > EVENT_BUDGET_PER_INSTANT {
                return Err(SimError::OscillationBudget {
                    time,
                    budget: EVENT_BUDGET_PER_INSTANT,
                });
            }
        } else {
            instant = time;
            instant_count = 1;
        }
        match item {
            QueueItem::NetChange {
                time,
                net,
                value,
                token,
            } => {
                if let Some((gate, tok)) = token {
                    let st = &mut states[gate];
                    match model {
                        // Pure-delay changes are never cancelled.
                        BaselineKind::Pure => st.out_value = value,
                        BaselineKind::Inertial => match st.pending {
                            Some((ptok, _)) if ptok == tok => {
                                st.pending = None;
                                st.out_value = value;
                            }
                            _ => continue, // cancelled or stale
                        },
                    }
                }
                if !recorder.apply(net, time, value) {
                    continue;
                }
                for &(gate, pin) in &sinks[net] {
                    push(
                        &mut queue,
                        &mut seq,
                        QueueItem::GateInput {
                            time,
                            gate,
                            pin,
                            value,
                        },
                    );
                }
            }
            QueueItem::GateInput {
                time,
                gate,
                pin,
                value,
            } => {
                let g = &netlist.gates[gate];
                let st = &mut states[gate];
                if st.inputs[pin as usize] == value {
                    continue;
                }
                st.inputs[pin as usize] = value;
                let (a, b) = (st.inputs[0], st.inputs[1]);
                let target = match g.kind {
                    GateKind::Nor2 => !(a || b),
                    GateKind::Inv => !a,
                    GateKind::Nand2 => !(a && b),
                    GateKind::CGate2 => {
                        if a == b {
                            a
                        } else {
                            st.target
                        }
                    }
                };
                if target == st.target {
                    continue;
                }
                st.target = target;
                let d = delays[&g.id];
                let lag = if target { d.rise } else { d.fall };
                match model {
                    BaselineKind::Pure => {
                        if st.last_scheduled != target {
                            st.last_scheduled = target;
                            push(
                                &mut queue,
                                &mut seq,
                                QueueItem::NetChange {
                                    time: time + lag,
                                    net: g.output,
                                    value: target,
                                    token: Some((gate, 0)),
                                },
                            );
                        }
                    }
                    BaselineKind::Inertial => match st.pending {
                        Some((_, pv)) if pv != target => {
                            // The pending change and this reversal make a
                            // pulse shorter than the delay: both vanish.
                            st.pending = None;
                        }
                        Some(_) => {}
                        None => {
                            if st.out_value != target {
                                let tok = st.next_token;
                                st.next_token += 1;
                                st.pending = Some((tok, target));
                                push(
                                    &mut queue,
                                    &mut seq,
                                    QueueItem::NetChange {
                                        time: time + lag,
                                        net: g.output,
                                        value: target,
                                        token: Some((gate, tok)),
                                    },
                                );
                            }
                        }
                    },
                }
            }
        }
    }

    Ok(recorder.traces)
}

// -- convenience builders -----------------------------------------------------

/// A single two-input gate driving net `y` from nets `a` and `b`.
pub fn single_gate_netlist(kind: GateKind, param_set: &str) -> Netlist {
    Netlist {
        nets: vec!["a".into(), "b".into(), "y".into()],
        gates: vec![Gate {
            id: "g0".into(),
            kind,
            param_set: param_set.into(),
            input_a: 0,
            input_b: 1,
            output: 2,
        }],
        inputs: vec![0, 1],
        outputs: vec![2],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const PS: f64 = 1e-12;

    fn lib15() -> ParamLibrary {
        let mut lib = ParamLibrary::new();
        lib.insert("nor15".into(), GateParamSet::Nor(GateParams::nor_15nm()));
        lib.insert(
            "c15".into(),
            GateParamSet::CGate(CGateParams::cgate_15nm()),
        );
        lib
    }

    fn trace(net: &str, initial: bool, times: &[f64]) -> DigitalTrace {
        DigitalTrace {
            net: net.into(),
            initial,
            transitions: times.to_vec(),
        }
    }

    fn output_trace(traces: &[DigitalTrace], name: &str) -> DigitalTrace {
        traces.iter().find(|t| t.net == name).unwrap().clone()
    }

    #[test]
    fn single_rising_edge_from_idle() {
        let netlist = single_gate_netlist(GateKind::Nor2, "nor15");
        let p = GateParams::nor_15nm();
        let t0 = 100.0 * PS;
        let traces = simulate(
            &netlist,
            &lib15(),
            &[trace("a", false, &[t0]), trace("b", false, &[])],
            1e-9,
            EngineKind::Hybrid,
        )
        .unwrap();
        let y = output_trace(&traces, "y");
        assert!(y.initial);
        assert_eq!(y.transitions.len(), 1);
        let expected = t0 + p.delta_min + std::f64::consts::LN_2 * p.c * p.r_na;
        assert!((y.transitions[0] - expected).abs() < 1e-15);
    }

    #[test]
    fn mis_falling_sweep_matches_direct_evaluation() {
        // Simulator crossing times reproduce the closed-form falling
        // delay over the whole separation sweep, to sub-fs agreement.
        let netlist = single_gate_netlist(GateKind::Nor2, "nor15");
        let p = GateParams::nor_15nm();
        let t0 = 200.0 * PS;
        for k in -20..=20 {
            let delta = k as f64 * PS;
            let (ta, tb) = if delta >= 0.0 {
                (t0, t0 + delta)
            } else {
                (t0 - delta, t0)
            };
            let traces = simulate(
                &netlist,
                &lib15(),
                &[trace("a", false, &[ta]), trace("b", false, &[tb])],
                1e-9,
                EngineKind::Hybrid,
            )
            .unwrap();
            let y = output_trace(&traces, "y");
            assert_eq!(y.transitions.len(), 1, "delta {k} ps");
            let expected = ta.min(tb)
                + p.delta_min
                + delay::delay_falling_output(delta, p.v_dd, &p).unwrap();
            assert!(
                (y.transitions[0] - expected).abs() < 1e-12,
                "delta {k} ps: {} vs {}",
                y.transitions[0],
                expected
            );
        }
    }

    #[test]
    fn mis_rising_sweep_matches_direct_evaluation() {
        // Both inputs fall with separation Δ from the (1,1) state.
        let netlist = single_gate_netlist(GateKind::Nor2, "nor15");
        let p = GateParams::nor_15nm();
        let t0 = 400.0 * PS;
        for k in -20..=20 {
            let delta = k as f64 * PS;
            let (ta, tb) = if delta >= 0.0 {
                (t0, t0 + delta)
            } else {
                (t0 - delta, t0)
            };
            let traces = simulate(
                &netlist,
                &lib15(),
                &[
                    trace("a", false, &[10.0 * PS, ta]),
                    trace("b", false, &[10.0 * PS, tb]),
                ],
                2e-9,
                EngineKind::Hybrid,
            )
            .unwrap();
            let y = output_trace(&traces, "y");
            // fall (from the initial double rise), then rise
            assert_eq!(y.transitions.len(), 2, "delta {k} ps");
            let expected = ta.max(tb)
                + p.delta_min
                + delay::delay_rising_output(delta, 0.0, &p).unwrap();
            assert!(
                (y.transitions[1] - expected).abs() < 1e-12,
                "delta {k} ps: {} vs {}",
                y.transitions[1],
                expected
            );
        }
    }

    #[test]
    fn short_input_pulse_is_suppressed() {
        // A pulse shorter than the crossing time never drives the output
        // across the threshold: no output transition at all.
        let netlist = single_gate_netlist(GateKind::Nor2, "nor15");
        let p = GateParams::nor_15nm();
        let width = 10.0 * PS;
        assert!(width < std::f64::consts::LN_2 * p.c * p.r_na);
        let traces = simulate(
            &netlist,
            &lib15(),
            &[
                trace("a", false, &[100.0 * PS, 100.0 * PS + width]),
                trace("b", false, &[]),
            ],
            1e-9,
            EngineKind::Hybrid,
        )
        .unwrap();
        assert_eq!(output_trace(&traces, "y").transitions.len(), 0);
    }

    #[test]
    fn determinism_bit_identical() {
        let netlist = single_gate_netlist(GateKind::Nor2, "nor15");
        let stim = [
            trace("a", false, &[100.0 * PS, 180.0 * PS, 400.0 * PS]),
            trace("b", false, &[150.0 * PS, 410.0 * PS]),
        ];
        let a = simulate(&netlist, &lib15(), &stim, 1e-9, EngineKind::Hybrid).unwrap();
        let b = simulate(&netlist, &lib15(), &stim, 1e-9, EngineKind::Hybrid).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn causality_holds() {
        let netlist = single_gate_netlist(GateKind::Nor2, "nor15");
        let p = GateParams::nor_15nm();
        let stim = [
            trace("a", false, &[100.0 * PS, 180.0 * PS, 400.0 * PS]),
            trace("b", false, &[150.0 * PS, 410.0 * PS, 700.0 * PS]),
        ];
        let traces = simulate(&netlist, &lib15(), &stim, 2e-9, EngineKind::Hybrid).unwrap();
        let y = output_trace(&traces, "y");
        let mut input_times: Vec<f64> = stim
            .iter()
            .flat_map(|t| t.transitions.iter().copied())
            .collect();
        input_times.sort_by(f64::total_cmp);
        for &ot in &y.transitions {
            let trigger = input_times
                .iter()
                .copied()
                .filter(|&it| it <= ot - p.delta_min)
                .fold(f64::NEG_INFINITY, f64::max);
            assert!(
                ot >= trigger + p.delta_min,
                "output at {ot} too close to trigger {trigger}"
            );
        }
    }

    #[test]
    fn nand_dual_logic() {
        let netlist = single_gate_netlist(GateKind::Nand2, "nor15");
        // Start (1,1): output low. Drop A: output rises.
        let traces = simulate(
            &netlist,
            &lib15(),
            &[trace("a", true, &[100.0 * PS]), trace("b", true, &[])],
            1e-9,
            EngineKind::Hybrid,
        )
        .unwrap();
        let y = output_trace(&traces, "y");
        assert!(!y.initial);
        assert_eq!(y.transitions.len(), 1);
        assert!(y.final_value());
    }

    #[test]
    fn inverter_is_tied_nor() {
        let mut netlist = Netlist {
            nets: vec!["a".into(), "y".into()],
            gates: vec![Gate {
                id: "inv0".into(),
                kind: GateKind::Inv,
                param_set: "nor15".into(),
                input_a: 0,
                input_b: 0,
                output: 1,
            }],
            inputs: vec![0],
            outputs: vec![1],
        };
        let traces = simulate(
            &netlist,
            &lib15(),
            &[trace("a", false, &[100.0 * PS])],
            1e-9,
            EngineKind::Hybrid,
        )
        .unwrap();
        let y = output_trace(&traces, "y");
        assert!(y.initial);
        assert_eq!(y.transitions.len(), 1);
        // Both pins switch at once: the falling crossing is the Δ = 0
        // parallel discharge.
        let p = GateParams::nor_15nm();
        let expected = 100.0 * PS
            + p.delta_min
            + delay::delay_falling_output(0.0, p.v_dd, &p).unwrap();
        assert!((y.transitions[0] - expected).abs() < 1e-12);
        // Mismatched inverter inputs are rejected.
        netlist.gates[0].input_b = 1;
        assert!(matches!(
            netlist.validate(),
            Err(SimError::InverterInputsDiffer { .. })
        ));
    }

    #[test]
    fn c_gate_fires_only_on_agreement() {
        let netlist = single_gate_netlist(GateKind::CGate2, "c15");
        let cp = CGateParams::cgate_15nm();
        let (ta, tb) = (100.0 * PS, 103.0 * PS);
        let traces = simulate(
            &netlist,
            &lib15(),
            &[trace("a", false, &[ta]), trace("b", false, &[tb])],
            1e-9,
            EngineKind::Hybrid,
        )
        .unwrap();
        let y = output_trace(&traces, "y");
        assert!(!y.initial);
        assert_eq!(y.transitions.len(), 1);
        let expected = tb
            + cp.delta_min
            + delay::c_delay_rising(tb - ta, 0.0, &cp).unwrap();
        assert!((y.transitions[0] - expected).abs() < 1e-12);
        // One input alone never fires the gate.
        let traces = simulate(
            &netlist,
            &lib15(),
            &[trace("a", false, &[ta]), trace("b", false, &[])],
            1e-9,
            EngineKind::Hybrid,
        )
        .unwrap();
        assert_eq!(output_trace(&traces, "y").transitions.len(), 0);
    }

    #[test]
    fn oracle_engine_single_gate_matches_oracle_delay() {
        let netlist = single_gate_netlist(GateKind::Nor2, "nor15");
        let p = GateParams::nor_15nm();
        let (ta, tb) = (100.0 * PS, 104.0 * PS);
        let traces = simulate(
            &netlist,
            &lib15(),
            &[trace("a", false, &[ta]), trace("b", false, &[tb])],
            1e-9,
            EngineKind::Oracle { tol: 1e-6 },
        )
        .unwrap();
        let y = output_trace(&traces, "y");
        assert_eq!(y.transitions.len(), 1);
        let expected = ta
            + p.delta_min
            + oracle::oracle_nor_falling_delay(tb - ta, p.v_dd, &p, 1e-6)
                .unwrap()
                .unwrap();
        assert_relative_eq!(y.transitions[0], expected, max_relative = 1e-9);
    }

    #[test]
    fn baseline_pure_shifts_and_inertial_filters() {
        let netlist = single_gate_netlist(GateKind::Nor2, "nor15");
        let mut delays = BTreeMap::new();
        delays.insert(
            "g0".into(),
            BaselineDelays {
                rise: 50.0 * PS,
                fall: 40.0 * PS,
            },
        );
        // Wide pulse on A (B low): output falls then rises.
        let wide = [
            trace("a", false, &[100.0 * PS, 200.0 * PS]),
            trace("b", false, &[]),
        ];
        let pure =
            simulate_baseline(&netlist, &wide, BaselineKind::Pure, &delays, 1e-9).unwrap();
        let y = output_trace(&pure, "y");
        assert_eq!(y.transitions, vec![140.0 * PS, 250.0 * PS]);
        let inertial =
            simulate_baseline(&netlist, &wide, BaselineKind::Inertial, &delays, 1e-9).unwrap();
        assert_eq!(output_trace(&inertial, "y").transitions.len(), 2);
        // Narrow pulse: shorter than the 40 ps fall delay.
        let narrow = [
            trace("a", false, &[100.0 * PS, 130.0 * PS]),
            trace("b", false, &[]),
        ];
        let pure =
            simulate_baseline(&netlist, &narrow, BaselineKind::Pure, &delays, 1e-9).unwrap();
        assert_eq!(output_trace(&pure, "y").transitions.len(), 2);
        let inertial =
            simulate_baseline(&netlist, &narrow, BaselineKind::Inertial, &delays, 1e-9).unwrap();
        assert_eq!(output_trace(&inertial, "y").transitions.len(), 0);
    }

    #[test]
    fn baseline_transition_count_never_grows_under_inertial() {
        let netlist = single_gate_netlist(GateKind::Inv, "nor15");
        let netlist = Netlist {
            gates: vec![Gate {
                input_b: 0,
                ..netlist.gates[0].clone()
            }],
            nets: vec!["a".into(), "b".into(), "y".into()],
            inputs: vec![0],
            outputs: vec![2],
        };
        let mut delays = BTreeMap::new();
        delays.insert(
            "g0".into(),
            BaselineDelays {
                rise: 35.0 * PS,
                fall: 35.0 * PS,
            },
        );
        let times: Vec<f64> = (1..=41).map(|k| k as f64 * 25.0 * PS).collect();
        let stim = [trace("a", false, &times)];
        let out = simulate_baseline(&netlist, &stim, BaselineKind::Inertial, &delays, 1e-6)
            .unwrap();
        assert!(output_trace(&out, "y").transitions.len() <= times.len());
    }

    #[test]
    fn zero_delay_loop_trips_budget() {
        // An inverter feeding itself with zero pure delay oscillates in
        // zero time; the per-instant budget catches it.
        let mut p = GateParams::nor_15nm();
        p.delta_min = 0.0;
        let mut lib = ParamLibrary::new();
        lib.insert("z".into(), GateParamSet::Nor(p));
        let netlist = Netlist {
            nets: vec!["q".into(), "en".into()],
            gates: vec![Gate {
                id: "osc".into(),
                kind: GateKind::Nor2,
                param_set: "z".into(),
                input_a: 0,
                input_b: 1,
                output: 0,
            }],
            inputs: vec![1],
            outputs: vec![0],
        };
        let stim = [trace("en", true, &[100.0 * PS])];
        let got = simulate(&netlist, &lib, &stim, 1e-9, EngineKind::Hybrid);
        // With a zero pure delay the crossing time is still positive, so
        // the loop advances in time; accept either a completed run or a
        // tripped budget, but never a hang or panic.
        if let Err(e) = got {
            assert!(matches!(e, SimError::OscillationBudget { .. }));
        }
    }

    #[test]
    fn stimulus_validation() {
        let netlist = single_gate_netlist(GateKind::Nor2, "nor15");
        let bad = [
            trace("a", false, &[2.0 * PS, 1.0 * PS]),
            trace("b", false, &[]),
        ];
        assert!(matches!(
            simulate(&netlist, &lib15(), &bad, 1e-9, EngineKind::Hybrid),
            Err(SimError::MalformedStimulus { .. })
        ));
        let missing = [trace("a", false, &[])];
        assert!(matches!(
            simulate(&netlist, &lib15(), &missing, 1e-9, EngineKind::Hybrid),
            Err(SimError::MissingStimulus { .. })
        ));
        let unknown = [
            trace("a", false, &[]),
            trace("b", false, &[]),
            trace("zz", false, &[]),
        ];
        assert!(matches!(
            simulate(&netlist, &lib15(), &unknown, 1e-9, EngineKind::Hybrid),
            Err(SimError::StimulusForNonInput { .. })
        ));
    }

    #[test]
    fn param_binding_validation() {
        let mut netlist = single_gate_netlist(GateKind::Nor2, "nope");
        assert!(matches!(
            simulate(
                &netlist,
                &lib15(),
                &[trace("a", false, &[]), trace("b", false, &[])],
                1e-9,
                EngineKind::Hybrid
            ),
            Err(SimError::UnknownParamSet { .. })
        ));
        netlist.gates[0].param_set = "c15".into();
        assert!(matches!(
            simulate(
                &netlist,
                &lib15(),
                &[trace("a", false, &[]), trace("b", false, &[])],
                1e-9,
                EngineKind::Hybrid
            ),
            Err(SimError::ParamKindMismatch { .. })
        ));
    }

    #[test]
    fn trace_value_queries() {
        let t = trace("x", false, &[1.0, 2.0, 3.0]);
        assert!(!t.value_at(0.5));
        assert!(t.value_at(1.0));
        assert!(!t.value_at(2.5));
        assert!(t.final_value());
        assert!(t.is_well_formed());
    }
}
