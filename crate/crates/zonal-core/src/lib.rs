//! Linear stability of the 3-jet zonal flow (stream function `2P_3(s) = 5s^3 - 3s`)
//! of the Euler equation on a rotating sphere.
//!
//! The library is organized around the parameter-dependent Rayleigh eigenvalue
//! problem on `s = sin(latitude) ∈ [-1, 1]`,
//!
//! ```text
//! ((1 - s^2) Φ')' - k^2/(1 - s^2) Φ - (2ω + 12μ)/(15s^2 - 3 + μ) Φ = λ Φ,
//! ```
//!
//! where `ω` is the nondimensional rotation rate, `k` the azimuthal wavenumber
//! and `μ = c - ω` the spectral shift of a wave with speed `c`. Neutral modes are
//! the roots of `λ₁(μ, ω) = -12`; their Krein signatures feed a Hamiltonian index
//! formula that classifies the flow as linearly unstable or spectrally stable.
//!
//! * [`basisfn`] — associated Legendre / Gegenbauer evaluation and Gauss–Legendre
//!   quadrature.
//! * [`rayleigh`] — Galerkin discretization of the Rayleigh problem plus the
//!   closed forms at the boundary shifts `μ = -12` and `μ = 3`.
//! * [`critical`] — neutral-mode root finding, the function `g(ω)` and the four
//!   critical rotation rates `99/2`, `69/2`, `-3`, `g⁻¹(-12) ≈ -16.0735`.
//! * [`stability`] — index counts, energy forms, classification over `ω`,
//!   exponential-trichotomy dimensions and spectral pictures.

pub mod basisfn;
pub mod critical;
pub mod error;
pub mod parallel;
pub mod rayleigh;
pub mod stability;

pub use error::{Error, Result};
