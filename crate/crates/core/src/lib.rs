//! Driven spin-boson work-to-work converter.
//!
//! A two-level system under two periodic bias fields exchanges work through an
//! Ohmic bosonic bath. The crate propagates the full system-bath state with
//! Short Iterative Lanczos steps, extracts powers and fluctuations, builds the
//! linear-response Onsager matrix from equilibrium correlations, and evaluates
//! maximum-efficiency performance against static and dynamic TUR bounds.
//! Energies are in units of the bare tunneling `Delta`, times in `1/Delta`.

pub mod analytic;
pub mod error;
pub mod hilbert;
pub mod linres;
pub mod observables;
pub mod output;
pub mod quad;
pub mod sil;
pub mod tur;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
