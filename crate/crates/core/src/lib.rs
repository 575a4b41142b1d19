//! Four-body coupling design toolkit for Kerr parametric oscillator (KPO) circuits.
//!
//! The crate is organised bottom-up:
//!
//! * [`netlist`] builds and inverts capacitance matrices and derives two-body couplings.
//! * [`elements`] evaluates frequencies and Kerr nonlinearities of junction elements.
//! * [`perturbation`] is a first-order Schrieffer-Wolff engine over normal-ordered
//!   bosonic polynomials, plus closed forms for every four-body coupling.
//! * [`pumpplan`] classifies pump-frequency sets and builds LHZ lattice plans.
//! * [`spinmodel`] is the coherent-state Ising model with its Boltzmann fitter.
//! * [`oracle`] diagonalizes truncated Fock Hamiltonians to check the perturbative results.
//!
//! Internally every frequency is an angular frequency in rad/s. Conversions to GHz/MHz
//! live in [`units`] and happen only at I/O boundaries.

pub mod elements;
pub mod error;
pub mod netlist;
pub mod oracle;
pub mod perturbation;
pub mod presets;
pub mod pumpplan;
pub mod spinmodel;
pub mod units;

pub use elements::{JunctionElement, ModeParams, Snail, SnailExpansion};
pub use error::{Error, Result};
pub use netlist::{CapacitanceMatrix, CircuitNetlist, InverseCapacitance, ReducedModes};
pub use perturbation::{
    BosonicPolynomial, CouplingGraph, DressedSpectrum, FourBodyReport, MixingCoefficients,
    ModeSpectrum, Monomial, TermClass,
};
pub use pumpplan::{LhzPlan, PumpAssignment, ResonanceCondition};
pub use spinmodel::{EffectiveEnergyModel, InteractionSet, OscillationConfig, SpinState};
