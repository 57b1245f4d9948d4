//! Closed-form trajectories and MIS/SIS delay functions.
//!
//! A mode switch starts a new output trajectory from the voltage the
//! previous one reached. For rising inputs (falling output) every
//! trajectory is a plain exponential discharge and the delay functions
//! are exact inversions. For falling inputs (rising output) the serial
//! pull-up pair switches on with hyperbolic resistance decay; the exact
//! solution has no uniform closed form and is approximated piecewise in
//! four regimes of the input separation `Δ`, yielding the case factors
//! `i_k` and `γ_k` below. The same machinery serves the Muller C gate,
//! whose two serial stacks reuse it with substituted resistances and
//! slopes.
//!
//! Sign convention: `Δ = t_B − t_A`. Formulas are derived for `Δ ≥ 0`;
//! negative separations evaluate the mirrored gate at `|Δ|`.

use crate::params::{CGateParams, GateParams};
use thiserror::Error;

/// Largest exponent argument accepted before signalling overflow.
const MAX_EXP_ARG: f64 = 700.0;

/// Errors from trajectory and delay evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DelayError {
    /// The trajectory never crosses the threshold (wrong side or
    /// asymptote short of it).
    #[error("trajectory does not cross the threshold")]
    NoCrossing,
    /// The crossing formula yields a nonpositive time: the trajectory
    /// is already past the threshold at the mode switch.
    #[error("crossing lies at or before the mode switch (log argument {arg} in (0,1])")]
    NegativeDelay { arg: f64 },
    /// `γ_k ≤ 1/2`, for which the plain rising delay is undefined.
    #[error("degenerate parameters: gamma_{case} = {gamma} <= 1/2")]
    DegenerateGamma { case: u8, gamma: f64 },
    /// An intermediate exponent exceeded the overflow guard.
    #[error("exponent argument {arg} exceeds overflow guard {MAX_EXP_ARG}")]
    ExponentOverflow { arg: f64 },
}

/// Output transition direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputDir {
    Rising,
    Falling,
}

/// Approximation regime of the input separation `Δ`.
///
/// Boundaries are half-open on the right; a separation exactly at a
/// boundary belongs to the higher case. `Case::C1` covers
/// `[0, α2/2R)`, `Case::C4` everything from `(α1+α2)/2R` on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Case {
    C1,
    C2,
    C3,
    C4,
}

impl Case {
    /// 1-based case index.
    pub fn index(self) -> u8 {
        match self {
            Case::C1 => 1,
            Case::C2 => 2,
            Case::C3 => 3,
            Case::C4 => 4,
        }
    }
}

fn checked_exp(arg: f64) -> Result<f64, DelayError> {
    if arg > MAX_EXP_ARG {
        return Err(DelayError::ExponentOverflow { arg });
    }
    Ok(arg.exp())
}

/// `(e^x - 1) / x`, stable for small `x`; the `x → 0` limit is 1.
fn expm1_over(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        x.exp_m1() / x
    }
}

/// Classify a nonnegative input separation into its approximation case.
pub fn classify_case(delta: f64, p: &GateParams) -> Case {
    debug_assert!(delta >= 0.0, "classify_case takes a nonnegative separation");
    let [b1, b2, b3] = p.case_boundaries();
    if delta < b1 {
        Case::C1
    } else if delta < b2 {
        Case::C2
    } else if delta < b3 {
        Case::C3
    } else {
        Case::C4
    }
}

/// Constant offset `i_k` of the resistance integral `I₁(t) ≈ t/2R + i_k`.
///
/// Requires `delta ≥ 0`; the blending half-width is `ε = η·Δ`.
pub fn i_k(delta: f64, p: &GateParams) -> f64 {
    let (a1, a2, r) = (p.alpha1, p.alpha2, p.r);
    let e = p.eta * delta;
    let d = delta;
    match classify_case(delta, p) {
        Case::C1 => {
            (d - e) * (d - e) / (2.0 * a2) - (d + e) * (d + e) / (2.0 * (a1 + a2))
                + 4.0 * e * d / (a1 + 2.0 * a2)
                - (a1 + a2) / (8.0 * r * r)
        }
        Case::C2 => {
            (4.0 * r * (d - e) - (a1 + 2.0 * a2)) / (8.0 * r * r)
                - (d + e) * (d + e) / (2.0 * (a1 + a2))
                + 4.0 * e * d / (a1 + 2.0 * a2)
        }
        Case::C3 => {
            (4.0 * r * (d + e) - (a1 + 2.0 * a2)) / (8.0 * r * r)
                - (d + e) * (d + e) / (2.0 * (a1 + a2))
        }
        Case::C4 => -a2 / (8.0 * r * r),
    }
}

fn gamma_unchecked(delta: f64, p: &GateParams) -> Result<(f64, Case), DelayError> {
    let (a1, a2, r, c) = (p.alpha1, p.alpha2, p.r, p.c);
    let e = p.eta * delta;
    let d = delta;
    let rrc = 4.0 * r * r * c;
    let x2 = a2 / rrc;
    let case = classify_case(delta, p);
    let g = match case {
        // Case 4 reduces to (e^{x2} - 1)/x2, which also covers the
        // ideal-switch limit α2 → 0 where γ → 1.
        Case::C4 => expm1_over(x2),
        Case::C1 => {
            let x12 = (a1 + a2) / rrc;
            let b12 = rrc / (a1 + a2);
            let b2 = rrc / a2;
            b12 * checked_exp(x12)?
                - b2
                - ((2.0 * r * (d - e) - rrc) / a2
                    - (4.0 * r * (d - e) - 2.0 * rrc) / (a1 + 2.0 * a2))
                    * checked_exp((d - e) / (2.0 * r * c))?
                - ((4.0 * r * (d + e) - 2.0 * rrc) / (a1 + 2.0 * a2)
                    - (2.0 * r * (d + e) - rrc) / (a1 + a2))
                    * checked_exp((d + e) / (2.0 * r * c))?
        }
        Case::C2 => {
            let x12 = (a1 + a2) / rrc;
            let b12 = rrc / (a1 + a2);
            b12 * checked_exp(x12)?
                - (1.0 - (4.0 * r * (d - e) - 2.0 * rrc) / (a1 + 2.0 * a2))
                    * checked_exp((d - e) / (2.0 * r * c))?
                - ((4.0 * r * (d + e) - 2.0 * rrc) / (a1 + 2.0 * a2)
                    - (2.0 * r * (d + e) - rrc) / (a1 + a2))
                    * checked_exp((d + e) / (2.0 * r * c))?
                + expm1_over(x2)
        }
        Case::C3 => {
            let x12 = (a1 + a2) / rrc;
            let b12 = rrc / (a1 + a2);
            b12 * checked_exp(x12)?
                - (1.0 - (2.0 * r * (d + e) - rrc) / (a1 + a2))
                    * checked_exp((d + e) / (2.0 * r * c))?
                + expm1_over(x2)
        }
    };
    Ok((g, case))
}

/// Source-term factor `γ_k` of the rising trajectory.
///
/// Fails with [`DelayError::DegenerateGamma`] when `γ_k ≤ 1/2`, for
/// which a rising trajectory started at zero never reaches the
/// threshold at positive time.
pub fn gamma_k(delta: f64, p: &GateParams) -> Result<f64, DelayError> {
    let (g, case) = gamma_unchecked(delta, p)?;
    if g <= 0.5 {
        return Err(DelayError::DegenerateGamma {
            case: case.index(),
            gamma: g,
        });
    }
    Ok(g)
}

/// Output voltage after the first rising input: exponential discharge
/// through the nMOS of input A, `v0·e^{−t/(C·R_nA)}`.
pub fn v_rising_first(t: f64, v0: f64, p: &GateParams) -> f64 {
    v0 * (-t / (p.c * p.r_na)).exp()
}

/// Output voltage after the second rising input, `t` measured from it.
/// Both pull-down paths conduct; the decay rate is their parallel
/// combination and the initial value is the first phase at `Δ`.
pub fn v_rising_second(t: f64, delta: f64, v0_at_origin: f64, p: &GateParams) -> f64 {
    let v1 = v_rising_first(delta, v0_at_origin, p);
    v1 * (-(1.0 / (p.c * p.r_na) + 1.0 / (p.c * p.r_nb)) * t).exp()
}

/// Output voltage after the first falling input: discharge through the
/// nMOS of input B, `v0·e^{−t/(C·R_nB)}`.
pub fn v_falling_first(t: f64, v0: f64, p: &GateParams) -> f64 {
    v0 * (-t / (p.c * p.r_nb)).exp()
}

/// Rising trajectory after the second falling input, with the value at
/// the switch given explicitly (`t` measured from the switch):
/// `v·e^{−(2 i_k R + t)/(2RC)} + V_DD (1 − γ_k e^{−t/(2RC)})`.
pub fn rising_value_from(
    t: f64,
    delta: f64,
    v_at_switch: f64,
    p: &GateParams,
) -> Result<f64, DelayError> {
    let (g, _) = gamma_unchecked(delta, p)?;
    let i = i_k(delta, p);
    let two_rc = 2.0 * p.r * p.c;
    let decay = (-t / two_rc).exp();
    Ok(v_at_switch * (-i / p.c).exp() * decay + p.v_dd * (1.0 - g * decay))
}

/// Output voltage after the second falling input, `t` measured from it.
/// The initial value is the first falling phase evaluated at `Δ`.
pub fn v_falling_second(
    t: f64,
    delta: f64,
    v0_at_origin: f64,
    p: &GateParams,
) -> Result<f64, DelayError> {
    rising_value_from(t, delta, v_falling_first(delta, v0_at_origin, p), p)
}

/// Threshold-crossing time of the rising trajectory measured from the
/// mode switch, with the value at the switch given explicitly.
pub fn rising_crossing_from(
    delta: f64,
    v_at_switch: f64,
    p: &GateParams,
) -> Result<f64, DelayError> {
    let (g, _) = gamma_unchecked(delta, p)?;
    let i = i_k(delta, p);
    let arg = 2.0 * g - 2.0 * (v_at_switch / p.v_dd) * (-i / p.c).exp();
    if arg <= 0.0 {
        return Err(DelayError::NoCrossing);
    }
    if arg <= 1.0 {
        return Err(DelayError::NegativeDelay { arg });
    }
    Ok(2.0 * p.r * p.c * arg.ln())
}

/// MIS delay of a falling output transition, measured from the earlier
/// input event and excluding the pure delay.
///
/// The output starts at `v0` above the threshold when the first input
/// rises. If the discharge through that input's nMOS alone reaches the
/// threshold before the second input arrives (`Δ` at least
/// `−ℓ·C·R_nA` with `ℓ = ln(V_DD/2v0)`), the delay is the plateau
/// value `−ℓ·C·R_nA`; otherwise both pull-down paths finish the job
/// and the two branches meet continuously at the boundary.
///
/// Negative `Δ` evaluates the mirrored gate at `|Δ|`.
pub fn delay_falling_output(delta: f64, v0: f64, p: &GateParams) -> Result<f64, DelayError> {
    if delta < 0.0 {
        return delay_falling_output(-delta, v0, &p.mirror());
    }
    if v0 <= p.v_th() {
        return Err(DelayError::NoCrossing);
    }
    let ell = (p.v_dd / (2.0 * v0)).ln();
    let t_first = -ell * p.c * p.r_na;
    if delta >= t_first {
        Ok(t_first)
    } else {
        Ok((-ell * p.c * p.r_na * p.r_nb + delta * p.r_na) / (p.r_na + p.r_nb))
    }
}

/// MIS delay of a rising output transition, measured from the second
/// (later) falling input and excluding the pure delay.
///
/// Inverts the rising trajectory started from `v0` at the first
/// falling input: `2RC·ln(2γ_k − 2(v0/V_DD)·e^{−Δ/(C·R_nB)}·e^{−i_k/C})`.
/// At `v0 = 0` this reduces to `2RC(ln γ_k + ln 2)`.
///
/// Negative `Δ` evaluates the mirrored gate at `|Δ|`.
pub fn delay_rising_output(delta: f64, v0: f64, p: &GateParams) -> Result<f64, DelayError> {
    if delta < 0.0 {
        return delay_rising_output(-delta, v0, &p.mirror());
    }
    let v_at_switch = v_falling_first(delta, v0, p);
    rising_crossing_from(delta, v_at_switch, p)
}

/// Value of the C-gate charging trajectory, `t` from the second input.
/// The first phase holds the output at `v_at_switch` (high impedance).
pub fn c_rising_value_from(
    t: f64,
    delta: f64,
    v_at_switch: f64,
    cp: &CGateParams,
) -> Result<f64, DelayError> {
    rising_value_from(t, delta, v_at_switch, &cp.rising_view())
}

/// Crossing time of the C-gate charging trajectory from the second
/// input, with held initial value `v_at_switch`.
pub fn c_rising_crossing_from(
    delta: f64,
    v_at_switch: f64,
    cp: &CGateParams,
) -> Result<f64, DelayError> {
    rising_crossing_from(delta, v_at_switch, &cp.rising_view())
}

/// Value of the C-gate discharging trajectory, `t` from the second
/// input: `v·e^{−(2 ī'_k R_p + t)/(2 R_p C)}` (no source term).
pub fn c_falling_value_from(
    t: f64,
    delta: f64,
    v_at_switch: f64,
    cp: &CGateParams,
) -> Result<f64, DelayError> {
    let view = cp.falling_view();
    let i = i_k(delta, &view);
    let two_rc = 2.0 * view.r * view.c;
    Ok(v_at_switch * (-(2.0 * i * view.r + t) / two_rc).exp())
}

/// Crossing time of the C-gate discharging trajectory from the second
/// input: `2 R_p C (ln(2v/V_DD) − ī'_k/C)`.
pub fn c_falling_crossing_from(
    delta: f64,
    v_at_switch: f64,
    cp: &CGateParams,
) -> Result<f64, DelayError> {
    if v_at_switch <= cp.v_th() {
        return Err(DelayError::NoCrossing);
    }
    let view = cp.falling_view();
    let i = i_k(delta, &view);
    Ok(2.0 * view.r * view.c * ((2.0 * v_at_switch / view.v_dd).ln() - i / view.c))
}

/// MIS delay of a rising C-gate output, measured from the later input.
///
/// The output holds `v0` through the first phase, then charges through
/// the serial stack of total resistance `2R_n`. Negative `Δ` mirrors.
pub fn c_delay_rising(delta: f64, v0: f64, cp: &CGateParams) -> Result<f64, DelayError> {
    if delta < 0.0 {
        return c_delay_rising(-delta, v0, &cp.mirror());
    }
    c_rising_crossing_from(delta, v0, cp)
}

/// MIS delay of a falling C-gate output, measured from the later input.
///
/// Pure discharge through the serial stack `2R_p` from the held value
/// `v0`. Negative `Δ` mirrors (`α1 ↔ α2`, `α3 ↔ α4`).
pub fn c_delay_falling(delta: f64, v0: f64, cp: &CGateParams) -> Result<f64, DelayError> {
    if delta < 0.0 {
        return c_delay_falling(-delta, v0, &cp.mirror());
    }
    c_falling_crossing_from(delta, v0, cp)
}

/// SIS delay: both transitions happen on input A while input B rests
/// at 0, and the separation is reinterpreted as the time since the
/// previous transition of that same input.
///
/// `dt_prev` is that separation, `v0` the output voltage at the
/// previous transition. For a rising output (A falls now, having risen
/// `dt_prev` ago) the first phase discharged through `R_nA`, which is
/// exactly the mirrored MIS rising delay at `Δ = dt_prev`. For a
/// falling output (A rises now) the charge accumulated since the
/// previous toggle is evaluated from the mirrored rising trajectory
/// with `Δ = dt_prev` (a steady toggle train has equal separations)
/// and inverted through the plateau branch.
pub fn sis_delay(
    dt_prev: f64,
    v0: f64,
    direction: OutputDir,
    p: &GateParams,
) -> Result<f64, DelayError> {
    debug_assert!(dt_prev >= 0.0);
    match direction {
        OutputDir::Rising => delay_rising_output(-dt_prev, v0, p),
        OutputDir::Falling => {
            let m = p.mirror();
            let v_now = rising_value_from(dt_prev, dt_prev, v0, &m)?;
            if v_now <= p.v_th() {
                return Err(DelayError::NoCrossing);
            }
            Ok(p.c * p.r_na * (2.0 * v_now / p.v_dd).ln())
        }
    }
}
