//! Nonclassicality diagnostics of the m-fold coherent-superposition-operated
//! Schrödinger cat state
//!
//! ```text
//! |ψ_m⟩ = Ω^m (|α₀⟩ ∓ |−α₀⟩),    Ω = a cos θ + a† e^{iφ} sin θ
//! ```
//!
//! Every quantity has two independent routes:
//!
//! * [`state`] and [`phasespace`] evaluate finite Hermite-polynomial closed
//!   forms (normalization, fidelity, photon-number moments, Mandel Q,
//!   quadrature squeezing, photocount distribution, static and thermally
//!   evolved Wigner function, negative Wigner volume).
//! * [`fockoracle`] builds the state in a truncated number basis and computes
//!   the same observables by direct ladder-operator action, displaced parity
//!   and RK4 integration of the thermal master equation.
//!
//! Mixed partial derivatives at the origin that appear in the second-order
//! moments are extracted exactly from truncated multivariate power series
//! ([`series`]).

pub mod crosscheck;
pub mod error;
pub mod fockoracle;
pub mod phasespace;
pub mod series;
pub mod special;
pub mod state;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
pub use phasespace::{GridSpec, QuadratureSettings, ThermalChannel, WignerGrid};
pub use series::MultiSeries;
pub use state::{Parity, SuperpositionParams};
