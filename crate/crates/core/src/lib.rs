//! Link-level Monte Carlo simulation and diversity analysis of practical
//! dynamic decode-and-forward (DDF) relaying with HARQ.
//!
//! The crate is organised bottom-up:
//!
//! - [`mi`]: square QAM alphabets and discrete-input mutual information
//!   (Gauss-Hermite quadrature, Monte Carlo, tabulation and lookup).
//! - [`channel`]: quasi-static Rayleigh fading, link budgets and counter-based
//!   per-trial random streams.
//! - [`frame`]: sub-frame segmentation of the HARQ codeword and the data rate
//!   after each sub-frame.
//! - [`schemes`]: relaying schemes (Monostream, Distributed Alamouti,
//!   modulation adaptation, Patching, patched Golden/Silver codes) and the
//!   per-realization block decomposition consumed by the engine.
//! - [`diversity`]: Matryoshka block channels, the macro-diversity bound and
//!   the micro/macro diversity predicates.
//! - [`engine`]: per-trial protocol timeline, outage probability, HARQ
//!   spectral efficiency, slow link adaptation and SNR threshold search.

pub mod channel;
pub mod diversity;
pub mod engine;
mod error;
pub mod frame;
pub mod mi;
pub mod schemes;

pub use error::{Error, Result};

pub use num_complex::Complex64;
