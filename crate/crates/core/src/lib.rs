//! Exact computations behind elliptic genera with level structure:
//! q-expansions with Hecke, Atkin and Frobenius operators, p-adic measures
//! certified at finite level, Hirzebruch characteristic series, and a checker
//! for the orientation conditions on concrete families of modular forms.

pub mod error;
pub mod exact;
pub mod genus;
pub mod json;
pub mod linalg;
pub mod measures;
pub mod qforms;
pub mod series;
pub mod verify;

pub use error::{Error, Result};
pub use exact::Rational;
