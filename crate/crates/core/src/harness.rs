//! Waveform generation, accuracy metrics and MIS sweep curves.
//!
//! The accuracy experiment mirrors the usual model-comparison flow:
//! a reference gate (the exact-ODE channel) is characterized at its
//! six characteristic delays, the hybrid model is parametrized from
//! those numbers, the constant-delay baselines get the same saturated
//! delays, and all models replay seeded random waveforms against the
//! reference trace. The comparison metric is the area under the
//! deviation trace, normalized to the inertial baseline.

use crate::delay::{self, OutputDir};
use crate::fit::{self, CharacteristicDelays, FitError};
use crate::oracle::{self, OracleError};
use crate::params::{CGateParams, GateParams};
use crate::sim::{
    self, BaselineDelays, BaselineKind, DigitalTrace, EngineKind, GateKind, GateParamSet,
    ParamLibrary, SimError,
};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HarnessError {
    #[error("waveform config: {0}")]
    BadConfig(String),
    #[error("deviation traces are for different nets: `{a}` vs `{b}`")]
    NetMismatch { a: String, b: String },
    #[error("trace `{net}` has transitions outside the observation window (t_end = {t_end})")]
    WindowMismatch { net: String, t_end: f64 },
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Fit(#[from] FitError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("reference characterization produced no crossing")]
    ReferenceNoCrossing,
}

/// How random stimulus transitions are distributed over the inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WaveformMode {
    /// Independent gap streams on each input.
    Local,
    /// One gap stream; every transition lands on a uniformly chosen input.
    Global,
}

/// Random waveform parameters: inter-transition gaps are normal with
/// mean `mu` and deviation `sigma`, resampled until they are at least
/// one picosecond.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveformConfig {
    pub mode: WaveformMode,
    pub mu: f64,
    pub sigma: f64,
    /// Total number of transitions across both inputs.
    pub n_transitions: usize,
    pub seed: u64,
}

const MIN_GAP: f64 = 1e-12;

fn positive_gap(rng: &mut ChaCha8Rng, normal: &Normal<f64>) -> f64 {
    loop {
        let g = normal.sample(rng);
        if g >= MIN_GAP {
            return g;
        }
    }
}

/// Generate stimulus traces for the two inputs `a` and `b`, both
/// starting low at `t = 0`. Deterministic for a fixed seed.
pub fn gen_waveform(cfg: &WaveformConfig) -> Result<[DigitalTrace; 2], HarnessError> {
    if !(cfg.mu > 0.0) {
        return Err(HarnessError::BadConfig(format!(
            "mu must be positive, got {}",
            cfg.mu
        )));
    }
    if !(cfg.sigma >= 0.0) {
        return Err(HarnessError::BadConfig(format!(
            "sigma must be nonnegative, got {}",
            cfg.sigma
        )));
    }
    if cfg.n_transitions == 0 {
        return Err(HarnessError::BadConfig("n_transitions must be >= 1".into()));
    }
    let normal = Normal::new(cfg.mu, cfg.sigma)
        .map_err(|e| HarnessError::BadConfig(format!("bad normal parameters: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut a = Vec::new();
    let mut b = Vec::new();
    match cfg.mode {
        WaveformMode::Local => {
            let n_a = cfg.n_transitions - cfg.n_transitions / 2;
            let n_b = cfg.n_transitions / 2;
            let mut t = 0.0;
            for _ in 0..n_a {
                t += positive_gap(&mut rng, &normal);
                a.push(t);
            }
            t = 0.0;
            for _ in 0..n_b {
                t += positive_gap(&mut rng, &normal);
                b.push(t);
            }
        }
        WaveformMode::Global => {
            let mut t = 0.0;
            for _ in 0..cfg.n_transitions {
                t += positive_gap(&mut rng, &normal);
                if rng.gen_bool(0.5) {
                    a.push(t);
                } else {
                    b.push(t);
                }
            }
        }
    }
    Ok([
        DigitalTrace {
            net: "a".into(),
            initial: false,
            transitions: a,
        },
        DigitalTrace {
            net: "b".into(),
            initial: false,
            transitions: b,
        },
    ])
}

/// Deviation-area accuracy metric between two digital traces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviationReport {
    /// `V_DD` times the total duration on which the traces disagree (V·s).
    pub area: f64,
    /// Area divided by a baseline's area, when one was supplied.
    pub normalized: Option<f64>,
    /// Transition-count difference, `a` minus `b`.
    pub transition_count_delta: i64,
}

impl DeviationReport {
    /// Populate the normalized field against a baseline area.
    pub fn normalize_against(mut self, baseline_area: f64) -> DeviationReport {
        self.normalized = Some(if baseline_area == 0.0 {
            if self.area == 0.0 {
                1.0
            } else {
                f64::INFINITY
            }
        } else {
            self.area / baseline_area
        });
        self
    }
}

/// Area under the deviation trace of two same-net traces over
/// `[0, t_end]`: the supply voltage times the total time the digital
/// values differ. Symmetric in its arguments.
pub fn deviation_area(
    a: &DigitalTrace,
    b: &DigitalTrace,
    v_dd: f64,
    t_end: f64,
) -> Result<DeviationReport, HarnessError> {
    if a.net != b.net {
        return Err(HarnessError::NetMismatch {
            a: a.net.clone(),
            b: b.net.clone(),
        });
    }
    for t in [a, b] {
        if t.transitions.last().is_some_and(|&last| last > t_end) {
            return Err(HarnessError::WindowMismatch {
                net: t.net.clone(),
                t_end,
            });
        }
    }
    let mut area = 0.0;
    let mut t = 0.0;
    let mut va = a.initial;
    let mut vb = b.initial;
    let (mut ia, mut ib) = (0, 0);
    loop {
        let next_a = a.transitions.get(ia).copied().unwrap_or(f64::INFINITY);
        let next_b = b.transitions.get(ib).copied().unwrap_or(f64::INFINITY);
        let next = next_a.min(next_b).min(t_end);
        if va != vb {
            area += next - t;
        }
        t = next;
        if t >= t_end {
            break;
        }
        if next_a <= next {
            va = !va;
            ia += 1;
        }
        if next_b <= next {
            vb = !vb;
            ib += 1;
        }
    }
    Ok(DeviationReport {
        area: v_dd * area,
        normalized: None,
        transition_count_delta: a.transitions.len() as i64 - b.transitions.len() as i64,
    })
}

/// One point of a MIS delay sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct MisSweepRow {
    /// Input separation (s), signed.
    pub delta: f64,
    /// Delay including the pure delay (s), when defined.
    pub delay: Option<f64>,
    /// Approximation case index at `|delta|`.
    pub case_index: u8,
    /// Error text for points where the delay is undefined.
    pub error: Option<String>,
}

/// Sweep a MIS delay curve over a grid of separations.
///
/// NOR falling starts from the supply, NOR rising from ground; the C
/// gate holds those levels through its first phase. Negative
/// separations map to the mirrored gate, and the pure delay is
/// included in the reported values.
pub fn sweep_mis(params: &GateParamSet, direction: OutputDir, grid: &[f64]) -> Vec<MisSweepRow> {
    grid.iter()
        .map(|&d| {
            let (result, case_index, delta_min) = match (params, direction) {
                (GateParamSet::Nor(p), OutputDir::Falling) => (
                    delay::delay_falling_output(d, p.v_dd, p),
                    case_of_nor(d, p),
                    p.delta_min,
                ),
                (GateParamSet::Nor(p), OutputDir::Rising) => (
                    delay::delay_rising_output(d, 0.0, p),
                    case_of_nor(d, p),
                    p.delta_min,
                ),
                (GateParamSet::CGate(p), OutputDir::Rising) => (
                    delay::c_delay_rising(d, 0.0, p),
                    case_of_c(d, p, OutputDir::Rising),
                    p.delta_min,
                ),
                (GateParamSet::CGate(p), OutputDir::Falling) => (
                    delay::c_delay_falling(d, p.v_dd, p),
                    case_of_c(d, p, OutputDir::Falling),
                    p.delta_min,
                ),
            };
            match result {
                Ok(t) => MisSweepRow {
                    delta: d,
                    delay: Some(t + delta_min),
                    case_index,
                    error: None,
                },
                Err(e) => MisSweepRow {
                    delta: d,
                    delay: None,
                    case_index,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect()
}

fn case_of_nor(d: f64, p: &GateParams) -> u8 {
    let q = if d < 0.0 { p.mirror() } else { *p };
    delay::classify_case(d.abs(), &q).index()
}

fn case_of_c(d: f64, p: &CGateParams, dir: OutputDir) -> u8 {
    let q = if d < 0.0 { p.mirror() } else { *p };
    let view = match dir {
        OutputDir::Rising => q.rising_view(),
        OutputDir::Falling => q.falling_view(),
    };
    delay::classify_case(d.abs(), &view).index()
}

/// Accuracy-comparison configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompareConfig {
    pub mode: WaveformMode,
    pub mu: f64,
    pub sigma: f64,
    /// Transitions per run.
    pub n_transitions: usize,
    /// Independent seeded runs to average over.
    pub repetitions: usize,
    pub seed: u64,
    /// Integration tolerance of the reference channels.
    pub oracle_tol: f64,
    /// Seed of the model-fitting stage.
    pub fit_seed: u64,
}

impl Default for CompareConfig {
    fn default() -> Self {
        CompareConfig {
            mode: WaveformMode::Local,
            mu: 100e-12,
            sigma: 50e-12,
            n_transitions: 500,
            repetitions: 20,
            seed: 1,
            oracle_tol: 1e-5,
            fit_seed: 1,
        }
    }
}

/// Mean accuracy of one model against the reference.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelAccuracy {
    pub model: String,
    /// Mean deviation area per run (V·s).
    pub mean_area: f64,
    /// Mean area normalized by the inertial baseline's mean area.
    pub normalized: f64,
    /// Mean absolute transition-count difference per run.
    pub mean_count_delta: f64,
}

/// Outcome of [`compare_nor_models`].
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    /// Characteristic delays measured on the reference gate (s).
    pub reference_delays: CharacteristicDelays,
    /// Pure delay selected for the refit.
    pub delta_min: f64,
    /// Hybrid parameters fitted to the reference delays.
    pub fitted: GateParams,
    /// Per-model accuracy, in the order hybrid, pure, inertial.
    pub models: Vec<ModelAccuracy>,
}

/// Characterize the exact-ODE gate at its six characteristic delays
/// (pure delay included).
pub fn characterize_reference(
    p: &GateParams,
    tol: f64,
) -> Result<CharacteristicDelays, HarnessError> {
    let fall = |d: f64| -> Result<f64, HarnessError> {
        oracle::oracle_nor_falling_delay(d, p.v_dd, p, tol)?
            .map(|t| t + p.delta_min)
            .ok_or(HarnessError::ReferenceNoCrossing)
    };
    let rise = |d: f64| -> Result<f64, HarnessError> {
        oracle::oracle_nor_rising_delay(d, 0.0, p, tol)?
            .map(|t| t + p.delta_min)
            .ok_or(HarnessError::ReferenceNoCrossing)
    };
    Ok(CharacteristicDelays {
        fall_minus_inf: fall(f64::NEG_INFINITY)?,
        fall_zero: fall(0.0)?,
        fall_plus_inf: fall(f64::INFINITY)?,
        rise_minus_inf: rise(f64::NEG_INFINITY)?,
        rise_zero: rise(0.0)?,
        rise_plus_inf: rise(f64::INFINITY)?,
    })
}

/// Run the model-accuracy comparison on a single NOR gate.
///
/// `reference` plays the role of the physical gate: its exact-ODE
/// channels produce the golden traces. The hybrid model is fitted to
/// the reference's measured characteristic delays, the baselines use
/// its saturated delays, and every model replays the same seeded
/// waveforms.
pub fn compare_nor_models(
    reference: &GateParams,
    cfg: &CompareConfig,
) -> Result<ComparisonReport, HarnessError> {
    let d = characterize_reference(reference, cfg.oracle_tol)?;
    let delta_min = fit::choose_delta_min(&d)?;
    let report = fit::fit_gate(&d, reference.c, reference.v_dd, Some(delta_min), cfg.fit_seed)?;
    let fitted = report.params;

    let netlist = sim::single_gate_netlist(GateKind::Nor2, "gate");
    let mut ref_lib = ParamLibrary::new();
    ref_lib.insert("gate".into(), GateParamSet::Nor(*reference));
    let mut fit_lib = ParamLibrary::new();
    fit_lib.insert("gate".into(), GateParamSet::Nor(fitted));
    let mut baseline = BTreeMap::new();
    baseline.insert(
        "g0".to_string(),
        BaselineDelays {
            rise: 0.5 * (d.rise_plus_inf + d.rise_minus_inf),
            fall: 0.5 * (d.fall_plus_inf + d.fall_minus_inf),
        },
    );

    let mut areas = [0.0f64; 3]; // hybrid, pure, inertial
    let mut count_delta = [0.0f64; 3];
    for rep in 0..cfg.repetitions {
        let wf = WaveformConfig {
            mode: cfg.mode,
            mu: cfg.mu,
            sigma: cfg.sigma,
            n_transitions: cfg.n_transitions,
            seed: cfg.seed.wrapping_add(rep as u64),
        };
        let stimuli = gen_waveform(&wf)?;
        let last = stimuli
            .iter()
            .filter_map(|t| t.last_time())
            .fold(0.0, f64::max);
        let t_end = last + 10.0 * cfg.mu;

        let golden = sim::simulate(
            &netlist,
            &ref_lib,
            &stimuli,
            t_end,
            EngineKind::Oracle {
                tol: cfg.oracle_tol,
            },
        )?;
        let golden_y = trace_of(&golden, "y");

        let runs: [Vec<DigitalTrace>; 3] = [
            sim::simulate(&netlist, &fit_lib, &stimuli, t_end, EngineKind::Hybrid)?,
            sim::simulate_baseline(&netlist, &stimuli, BaselineKind::Pure, &baseline, t_end)?,
            sim::simulate_baseline(&netlist, &stimuli, BaselineKind::Inertial, &baseline, t_end)?,
        ];
        for (slot, run) in runs.iter().enumerate() {
            let dev = deviation_area(trace_of(run, "y"), golden_y, reference.v_dd, t_end)?;
            areas[slot] += dev.area;
            count_delta[slot] += dev.transition_count_delta.unsigned_abs() as f64;
        }
    }
    let n = cfg.repetitions.max(1) as f64;
    let mean = |s: f64| s / n;
    let inertial_mean = mean(areas[2]);
    let names = ["hybrid", "pure", "inertial"];
    let models = names
        .iter()
        .enumerate()
        .map(|(i, name)| ModelAccuracy {
            model: (*name).into(),
            mean_area: mean(areas[i]),
            normalized: if inertial_mean > 0.0 {
                mean(areas[i]) / inertial_mean
            } else if mean(areas[i]) == 0.0 {
                1.0
            } else {
                f64::INFINITY
            },
            mean_count_delta: mean(count_delta[i]),
        })
        .collect();
    Ok(ComparisonReport {
        reference_delays: d,
        delta_min,
        fitted,
        models,
    })
}

fn trace_of<'a>(traces: &'a [DigitalTrace], net: &str) -> &'a DigitalTrace {
    traces
        .iter()
        .find(|t| t.net == net)
        .expect("net missing from simulation output")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const PS: f64 = 1e-12;

    #[test]
    fn zero_sigma_is_periodic() {
        let cfg = WaveformConfig {
            mode: WaveformMode::Local,
            mu: 100.0 * PS,
            sigma: 0.0,
            n_transitions: 10,
            seed: 9,
        };
        let [a, _b] = gen_waveform(&cfg).unwrap();
        for (k, &t) in a.transitions.iter().enumerate() {
            assert_relative_eq!(t, (k + 1) as f64 * 100.0 * PS, max_relative = 1e-12);
        }
    }

    #[test]
    fn seeded_generation_is_reproducible() {
        let cfg = WaveformConfig {
            mode: WaveformMode::Global,
            mu: 100.0 * PS,
            sigma: 50.0 * PS,
            n_transitions: 200,
            seed: 1234,
        };
        assert_eq!(gen_waveform(&cfg).unwrap(), gen_waveform(&cfg).unwrap());
    }

    #[test]
    fn local_mean_gap_within_three_standard_errors() {
        let cfg = WaveformConfig {
            mode: WaveformMode::Local,
            mu: 100.0 * PS,
            sigma: 50.0 * PS,
            n_transitions: 500,
            seed: 7,
        };
        let [a, b] = gen_waveform(&cfg).unwrap();
        let mut gaps = Vec::new();
        for tr in [&a, &b] {
            let mut prev = 0.0;
            for &t in &tr.transitions {
                gaps.push(t - prev);
                prev = t;
            }
        }
        let n = gaps.len() as f64;
        let mean = gaps.iter().sum::<f64>() / n;
        // The 1 ps floor barely truncates the distribution at this
        // mu/sigma, so the plain standard error bound applies.
        let se = 50.0 * PS / n.sqrt();
        assert!(
            (mean - 100.0 * PS).abs() < 3.0 * se,
            "mean gap {mean} vs 100 ps (se {se})"
        );
    }

    #[test]
    fn global_mode_splits_transitions() {
        let cfg = WaveformConfig {
            mode: WaveformMode::Global,
            mu: 100.0 * PS,
            sigma: 50.0 * PS,
            n_transitions: 400,
            seed: 21,
        };
        let [a, b] = gen_waveform(&cfg).unwrap();
        assert_eq!(a.transitions.len() + b.transitions.len(), 400);
        // both sides get a decent share
        assert!(a.transitions.len() > 120 && b.transitions.len() > 120);
        // interleaved streams never collide in time
        let mut all: Vec<f64> = a
            .transitions
            .iter()
            .chain(&b.transitions)
            .copied()
            .collect();
        all.sort_by(f64::total_cmp);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn bad_config_rejected() {
        let mut cfg = WaveformConfig {
            mode: WaveformMode::Local,
            mu: 0.0,
            sigma: 1.0 * PS,
            n_transitions: 5,
            seed: 0,
        };
        assert!(gen_waveform(&cfg).is_err());
        cfg.mu = 100.0 * PS;
        cfg.n_transitions = 0;
        assert!(gen_waveform(&cfg).is_err());
    }

    #[test]
    fn deviation_identical_traces_is_zero() {
        let t = DigitalTrace {
            net: "y".into(),
            initial: false,
            transitions: vec![1.0 * PS, 5.0 * PS],
        };
        let dev = deviation_area(&t, &t, 0.8, 10.0 * PS).unwrap();
        assert_eq!(dev.area, 0.0);
        assert_eq!(dev.transition_count_delta, 0);
    }

    #[test]
    fn deviation_single_offset_transition() {
        // One transition shifted by 5 ps at 0.8 V: a 4e-12 V·s rectangle.
        let a = DigitalTrace {
            net: "y".into(),
            initial: false,
            transitions: vec![10.0 * PS],
        };
        let b = DigitalTrace {
            net: "y".into(),
            initial: false,
            transitions: vec![15.0 * PS],
        };
        let dev = deviation_area(&a, &b, 0.8, 100.0 * PS).unwrap();
        assert_relative_eq!(dev.area, 4e-12, max_relative = 1e-12);
        let sym = deviation_area(&b, &a, 0.8, 100.0 * PS).unwrap();
        assert_eq!(dev.area, sym.area);
    }

    #[test]
    fn deviation_window_and_net_checks() {
        let a = DigitalTrace {
            net: "y".into(),
            initial: false,
            transitions: vec![10.0 * PS],
        };
        let mut b = a.clone();
        b.net = "z".into();
        assert!(matches!(
            deviation_area(&a, &b, 0.8, 1e-10),
            Err(HarnessError::NetMismatch { .. })
        ));
        let c = DigitalTrace {
            net: "y".into(),
            initial: false,
            transitions: vec![10.0 * PS, 200.0 * PS],
        };
        assert!(matches!(
            deviation_area(&a, &c, 0.8, 100.0 * PS),
            Err(HarnessError::WindowMismatch { .. })
        ));
    }

    #[test]
    fn deviation_normalization() {
        let a = DigitalTrace {
            net: "y".into(),
            initial: false,
            transitions: vec![10.0 * PS],
        };
        let b = DigitalTrace {
            net: "y".into(),
            initial: false,
            transitions: vec![12.0 * PS],
        };
        let dev = deviation_area(&a, &b, 0.8, 100.0 * PS)
            .unwrap()
            .normalize_against(3.2e-12);
        assert_relative_eq!(dev.normalized.unwrap(), 0.5, max_relative = 1e-12);
    }

    #[test]
    fn falling_sweep_shape_15nm() {
        let p = GateParams::nor_15nm();
        let grid: Vec<f64> = (-40..=40).map(|k| k as f64 * 0.5 * PS).collect();
        let rows = sweep_mis(
            &GateParamSet::Nor(p),
            OutputDir::Falling,
            &grid,
        );
        let delay_at = |d: f64| {
            rows.iter()
                .find(|r| r.delta == d)
                .and_then(|r| r.delay)
                .unwrap()
        };
        // U-shape: minimum ~28.5 ps at the center, approaching the
        // ~39 ps plateau at the grid edge (the knee sits at 21.05 ps).
        let center = delay_at(0.0);
        assert_relative_eq!(center, 28.460739925524042e-12, max_relative = 1e-9);
        assert_relative_eq!(delay_at(20.0 * PS), 38.523931552752e-12, max_relative = 1e-9);
        assert!(rows.iter().all(|r| r.delay.unwrap() >= center));
        // case annotation present and in range
        assert!(rows.iter().all(|r| (1..=4).contains(&r.case_index)));
    }

    #[test]
    fn rising_sweep_peaks_at_zero() {
        let p = GateParams::nor_15nm();
        let grid: Vec<f64> = (-40..=40).map(|k| k as f64 * 0.5 * PS).collect();
        let rows = sweep_mis(&GateParamSet::Nor(p), OutputDir::Rising, &grid);
        let center = rows.iter().find(|r| r.delta == 0.0).unwrap().delay.unwrap();
        assert!(rows
            .iter()
            .all(|r| r.delay.unwrap() <= center + 1e-30));
    }

    #[test]
    fn c_gate_sweep_bumps_at_zero_both_directions() {
        let cp = CGateParams::cgate_15nm();
        let grid: Vec<f64> = (-20..=20).map(|k| k as f64 * 0.1 * PS).collect();
        for dir in [OutputDir::Rising, OutputDir::Falling] {
            let rows = sweep_mis(&GateParamSet::CGate(cp), dir, &grid);
            let center = rows.iter().find(|r| r.delta == 0.0).unwrap().delay.unwrap();
            assert!(rows.iter().all(|r| r.delay.unwrap() <= center + 1e-30));
        }
    }

    #[test]
    fn reference_characterization_close_to_formula_on_falling() {
        // Falling delays are exact in the closed form, so the reference
        // characterization must reproduce them.
        let p = GateParams::nor_15nm();
        let d = characterize_reference(&p, 1e-6).unwrap();
        assert_relative_eq!(d.fall_plus_inf, 39.054526832151900e-12, max_relative = 1e-5);
        assert_relative_eq!(d.fall_zero, 28.460739925524042e-12, max_relative = 1e-5);
    }

    #[test]
    fn compare_small_run_orders_models() {
        // Desk-scale smoke test of the comparison pipeline; the real
        // acceptance run uses the full 500-transition configuration.
        let cfg = CompareConfig {
            n_transitions: 60,
            repetitions: 2,
            ..CompareConfig::default()
        };
        let report = compare_nor_models(&GateParams::nor_15nm(), &cfg).unwrap();
        assert_eq!(report.models.len(), 3);
        let hybrid = &report.models[0];
        let inertial = &report.models[2];
        assert!(hybrid.mean_area.is_finite());
        assert!(inertial.normalized == 1.0);
        assert!(
            hybrid.normalized <= 1.0,
            "hybrid {} vs inertial {}",
            hybrid.mean_area,
            inertial.mean_area
        );
    }
}
