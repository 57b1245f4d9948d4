//! Dynamic digital timing analysis built on hybrid gate delay models.
//!
//! CMOS gates are modeled by replacing transistors with time-varying
//! resistors: switching on follows a hyperbolic decay `α/(t−t_on) + R`,
//! switching off is instantaneous (or linear, for the reference solver).
//! The resulting first-order ODE with non-constant coefficients has
//! closed-form (piecewise-approximated) solutions, which yield analytic
//! input-to-output delay functions that capture multi-input switching
//! (MIS) effects: the speed-up of falling NOR outputs, the slow-down of
//! rising NOR outputs, and the Charlie effect of Muller C gates.
//!
//! The crate is organized around those delay functions:
//!
//! - [`params`] — fitted physical constants of a gate instance.
//! - [`delay`] — closed-form trajectories and MIS/SIS delay functions
//!   for NOR/NAND and Muller C gates.
//! - [`oracle`] — adaptive numerical reference solver for the exact
//!   (unapproximated) mode ODEs; ground truth for accuracy tests.
//! - [`fit`] — parametrization: pure-delay selection, closed-form
//!   seeding, and derivative-free least-squares fitting.
//! - [`sim`] — event-driven gate-level simulator with hybrid, oracle,
//!   pure-delay and inertial-delay channels.
//! - [`harness`] — random waveform generation, deviation-area accuracy
//!   metrics, and MIS sweep curves.
//! - [`io`] — text formats: netlists, trace CSV, parameter sets, VCD.
//!
//! All internal computation is in strict SI units (seconds, ohms,
//! farads, volts); pico/femto scaling happens only at I/O boundaries.

pub mod delay;
pub mod fit;
pub mod harness;
pub mod io;
pub mod oracle;
pub mod params;
pub mod sim;

pub use delay::{Case, DelayError, OutputDir};
pub use params::{CGateParams, GateParams, ParamError};
