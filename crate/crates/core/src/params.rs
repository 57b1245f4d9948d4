//! Gate parameter sets: the fitted physical constants of one gate instance.

use thiserror::Error;

/// Parameter validation failure.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("{name} must be strictly positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("{name} must be nonnegative, got {value}")]
    Negative { name: &'static str, value: f64 },
    #[error("eta must lie in (0, 1), got {0}")]
    EtaOutOfRange(f64),
    #[error("{name} is not finite")]
    NotFinite { name: &'static str },
}

fn check_pos(name: &'static str, value: f64) -> Result<(), ParamError> {
    if !value.is_finite() {
        return Err(ParamError::NotFinite { name });
    }
    if value <= 0.0 {
        return Err(ParamError::NonPositive { name, value });
    }
    Ok(())
}

fn check_nonneg(name: &'static str, value: f64) -> Result<(), ParamError> {
    if !value.is_finite() {
        return Err(ParamError::NotFinite { name });
    }
    if value < 0.0 {
        return Err(ParamError::Negative { name, value });
    }
    Ok(())
}

/// Physical constants of a two-input NOR gate (and of its NAND dual).
///
/// The two parallel nMOS transistors have constant on-resistances
/// `r_na`, `r_nb`; the two serial pMOS transistors share the total
/// on-resistance `2r` (only the sum enters the equations) and switch on
/// with hyperbolic slopes `alpha1` (input A) and `alpha2` (input B).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateParams {
    /// nMOS on-resistance of input A (Ω).
    pub r_na: f64,
    /// nMOS on-resistance of input B (Ω).
    pub r_nb: f64,
    /// Half the serial pMOS pair resistance (Ω); the pair totals `2r`.
    pub r: f64,
    /// Load capacitance (F).
    pub c: f64,
    /// Switch-on slope of the pMOS on input A (Ω·s).
    pub alpha1: f64,
    /// Switch-on slope of the pMOS on input B (Ω·s).
    pub alpha2: f64,
    /// Fraction of the input separation used as the blending
    /// half-width around `s ≈ Δ` in the piecewise approximation.
    pub eta: f64,
    /// Pure delay added to every input-to-output reaction (s).
    pub delta_min: f64,
    /// Supply voltage (V); the digital threshold is `v_dd / 2`.
    pub v_dd: f64,
}

impl GateParams {
    /// Check positivity and range invariants.
    ///
    /// The three case boundaries `α2/2R < (α1+2α2)/4R < (α1+α2)/2R`
    /// are strictly ordered whenever `alpha1 > 0`, so no separate
    /// ordering check is needed.
    pub fn validate(&self) -> Result<(), ParamError> {
        check_pos("r_na", self.r_na)?;
        check_pos("r_nb", self.r_nb)?;
        check_pos("r", self.r)?;
        check_pos("c", self.c)?;
        check_pos("v_dd", self.v_dd)?;
        check_nonneg("alpha1", self.alpha1)?;
        check_nonneg("alpha2", self.alpha2)?;
        check_nonneg("delta_min", self.delta_min)?;
        if !self.eta.is_finite() {
            return Err(ParamError::NotFinite { name: "eta" });
        }
        if self.eta <= 0.0 || self.eta >= 1.0 {
            return Err(ParamError::EtaOutOfRange(self.eta));
        }
        Ok(())
    }

    /// Swap the roles of inputs A and B.
    ///
    /// Exchanges `alpha1 ↔ alpha2` and `r_na ↔ r_nb`. Delay functions
    /// for negative input separation are evaluated as the mirrored
    /// gate at `|Δ|`; `mirror` is an involution.
    pub fn mirror(&self) -> GateParams {
        GateParams {
            r_na: self.r_nb,
            r_nb: self.r_na,
            alpha1: self.alpha2,
            alpha2: self.alpha1,
            ..*self
        }
    }

    /// The case boundaries `[α2/2R, (α1+2α2)/4R, (α1+α2)/2R]` (s).
    pub fn case_boundaries(&self) -> [f64; 3] {
        [
            self.alpha2 / (2.0 * self.r),
            (self.alpha1 + 2.0 * self.alpha2) / (4.0 * self.r),
            (self.alpha1 + self.alpha2) / (2.0 * self.r),
        ]
    }

    /// Digital threshold voltage `v_dd / 2` (V).
    pub fn v_th(&self) -> f64 {
        0.5 * self.v_dd
    }

    /// 15 nm FinFET NOR2 parameter set (0.8 V supply, 18 ps pure delay).
    pub fn nor_15nm() -> GateParams {
        GateParams {
            r_na: 8360.562682200,
            r_nb: 8255.562682200,
            r: 6699.9626822002,
            c: 3.6331599443276e-15,
            alpha1: 0.859e-7,
            alpha2: 0.268e-7,
            eta: 0.01,
            delta_min: 18e-12,
            v_dd: 0.8,
        }
    }

    /// 65 nm NOR2 parameter set (1.2 V supply, 10.8 ps pure delay).
    pub fn nor_65nm() -> GateParams {
        GateParams {
            r_na: 8409.562682200,
            r_nb: 8285.562682200,
            r: 5191.6426822002,
            c: 30.6331599443276e-15,
            alpha1: 0.959e-7,
            alpha2: 0.273e-7,
            eta: 0.01,
            delta_min: 10.8e-12,
            v_dd: 1.2,
        }
    }
}

/// Physical constants of a two-input Muller C gate.
///
/// Both transistor stacks are serial here: the charging stack totals
/// `2r_n` with switch-on slopes `alpha1`/`alpha2`, the discharging
/// stack totals `2r_p` with slopes `alpha4`/`alpha3` (first/second
/// switched). Between the driven states the output floats and the load
/// capacitance holds its voltage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CGateParams {
    /// Half the charging stack resistance (Ω); the stack totals `2r_n`.
    pub r_n: f64,
    /// Half the discharging stack resistance (Ω).
    pub r_p: f64,
    /// Switch-on slope, charging stack, first input (Ω·s).
    pub alpha1: f64,
    /// Switch-on slope, charging stack, second input (Ω·s).
    pub alpha2: f64,
    /// Switch-on slope, discharging stack, second input (Ω·s).
    pub alpha3: f64,
    /// Switch-on slope, discharging stack, first input (Ω·s).
    pub alpha4: f64,
    /// Load capacitance (F).
    pub c: f64,
    /// Blending fraction, as in [`GateParams::eta`].
    pub eta: f64,
    /// Pure delay (s).
    pub delta_min: f64,
    /// Supply voltage (V).
    pub v_dd: f64,
}

impl CGateParams {
    pub fn validate(&self) -> Result<(), ParamError> {
        check_pos("r_n", self.r_n)?;
        check_pos("r_p", self.r_p)?;
        check_pos("c", self.c)?;
        check_pos("v_dd", self.v_dd)?;
        check_nonneg("alpha1", self.alpha1)?;
        check_nonneg("alpha2", self.alpha2)?;
        check_nonneg("alpha3", self.alpha3)?;
        check_nonneg("alpha4", self.alpha4)?;
        check_nonneg("delta_min", self.delta_min)?;
        if !self.eta.is_finite() {
            return Err(ParamError::NotFinite { name: "eta" });
        }
        if self.eta <= 0.0 || self.eta >= 1.0 {
            return Err(ParamError::EtaOutOfRange(self.eta));
        }
        Ok(())
    }

    /// Swap the roles of inputs A and B: `alpha1 ↔ alpha2` and
    /// `alpha3 ↔ alpha4`. Involutive.
    pub fn mirror(&self) -> CGateParams {
        CGateParams {
            alpha1: self.alpha2,
            alpha2: self.alpha1,
            alpha3: self.alpha4,
            alpha4: self.alpha3,
            ..*self
        }
    }

    /// Digital threshold voltage `v_dd / 2` (V).
    pub fn v_th(&self) -> f64 {
        0.5 * self.v_dd
    }

    /// The rising-output half of the parameters as a NOR-shaped set:
    /// charging through a serial stack of total resistance `2r_n` with
    /// slopes `alpha1`/`alpha2`. Used to share the case machinery.
    pub(crate) fn rising_view(&self) -> GateParams {
        GateParams {
            // The first-phase trajectory of a C gate holds its value, so
            // the parallel-path resistances never enter; placeholders.
            r_na: self.r_n,
            r_nb: self.r_n,
            r: self.r_n,
            c: self.c,
            alpha1: self.alpha1,
            alpha2: self.alpha2,
            eta: self.eta,
            delta_min: self.delta_min,
            v_dd: self.v_dd,
        }
    }

    /// The falling-output half: discharge through `2r_p` with slopes
    /// `alpha4` (first input) and `alpha3` (second input).
    pub(crate) fn falling_view(&self) -> GateParams {
        GateParams {
            r_na: self.r_p,
            r_nb: self.r_p,
            r: self.r_p,
            c: self.c,
            alpha1: self.alpha4,
            alpha2: self.alpha3,
            eta: self.eta,
            delta_min: self.delta_min,
            v_dd: self.v_dd,
        }
    }

    /// 15 nm C gate parameter set. The load capacitance and pure delay
    /// are shared with the 15 nm NOR characterization.
    pub fn cgate_15nm() -> CGateParams {
        CGateParams {
            r_n: 3002.226,
            r_p: 2912.226,
            alpha1: 0.161e-8,
            alpha2: 0.158e-8,
            alpha3: 0.157e-8,
            alpha4: 0.161e-8,
            c: 3.6331599443276e-15,
            eta: 0.01,
            delta_min: 18e-12,
            v_dd: 0.8,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_params_validate() {
        GateParams::nor_15nm().validate().unwrap();
        GateParams::nor_65nm().validate().unwrap();
        CGateParams::cgate_15nm().validate().unwrap();
    }

    #[test]
    fn mirror_is_involutive() {
        let p = GateParams::nor_15nm();
        assert_eq!(p.mirror().mirror(), p);
        let c = CGateParams::cgate_15nm();
        assert_eq!(c.mirror().mirror(), c);
    }

    #[test]
    fn mirror_swaps_fields() {
        let p = GateParams::nor_15nm();
        let m = p.mirror();
        assert_eq!(m.r_na, p.r_nb);
        assert_eq!(m.r_nb, p.r_na);
        assert_eq!(m.alpha1, p.alpha2);
        assert_eq!(m.alpha2, p.alpha1);
        assert_eq!(m.r, p.r);
        assert_eq!(m.c, p.c);
    }

    #[test]
    fn mirror_fixed_point_on_symmetric_params() {
        let mut p = GateParams::nor_15nm();
        p.r_na = 8000.0;
        p.r_nb = 8000.0;
        p.alpha1 = 5e-8;
        p.alpha2 = 5e-8;
        assert_eq!(p.mirror(), p);
    }

    #[test]
    fn case_boundaries_ordered() {
        let p = GateParams::nor_15nm();
        let [b1, b2, b3] = p.case_boundaries();
        assert!(b1 < b2 && b2 < b3);
        // 15 nm values land near 2.00, 5.21 and 8.41 ps.
        assert!((b1 - 2.0000111397e-12).abs() < 1e-18);
        assert!((b2 - 5.2052528729e-12).abs() < 1e-18);
        assert!((b3 - 8.4104946061e-12).abs() < 1e-18);
    }

    #[test]
    fn invalid_params_rejected() {
        let mut p = GateParams::nor_15nm();
        p.r_na = 0.0;
        assert!(matches!(p.validate(), Err(ParamError::NonPositive { .. })));
        let mut p = GateParams::nor_15nm();
        p.eta = 1.0;
        assert!(matches!(p.validate(), Err(ParamError::EtaOutOfRange(_))));
        let mut p = GateParams::nor_15nm();
        p.alpha1 = -1e-9;
        assert!(matches!(p.validate(), Err(ParamError::Negative { .. })));
        let mut p = GateParams::nor_15nm();
        p.c = f64::NAN;
        assert!(matches!(p.validate(), Err(ParamError::NotFinite { .. })));
    }
}
