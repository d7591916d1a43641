//! Exact arithmetic for elliptic surfaces over hyperelliptic base curves:
//! Riemann-Roch spaces, multiplication maps, Koszul cohomology over F_p,
//! and a rule engine deciding the infinitesimal Torelli property.

pub mod acceptance;
pub mod curve;
pub mod divisor;
pub mod error;
pub mod exactlinalg;
pub mod io;
pub mod koszul;
pub mod torelli;
pub mod rrspace;
pub mod series;

pub use error::{Error, Result};
