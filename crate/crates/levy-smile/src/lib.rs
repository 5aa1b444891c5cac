//! Pricing and implied-volatility asymptotics for European FX options under
//! exponential Levy, Heston, and quadratic-volatility dynamics.
//!
//! The library is organized around the Fourier representation of the
//! normalized call price: `pricing` evaluates the transform integral for all
//! supported models, `closed_forms` supplies analytic benchmarks, `pide`
//! solves the equivalent fractional integro-differential equation, the
//! `asym` modules evaluate short-time, long-time, and wing expansions of the
//! smile, and `calibration` fits model parameters to FX delta-space quotes.

pub mod error;
pub mod special;
pub mod quad;
pub mod models;
pub mod smile;
pub mod pricing;
pub mod closed_forms;
pub mod pide;
pub mod asym;
pub mod calibration;

pub use error::{LevyError, Result};
pub use models::{DriftConvention, ModelSpec, TspDerived};
pub use pricing::{ll_call, ll_call_dk, LLQuadratureConfig};
pub use smile::{bs_call, implied_vol, SmilePillars};
