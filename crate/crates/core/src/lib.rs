#![no_std]
#![allow(clippy::result_large_err)]

extern crate alloc;

pub mod catalog;
pub mod conemaps;
pub mod exactreal;
pub mod radial;
pub mod rigidity;
pub mod spectra;
pub mod stability;
pub mod symcheck;

pub use exactreal::{int, rat, ExactError, QuadReal, Rational};
pub use spectra::{GeometricSpectrum, Spectrum};
