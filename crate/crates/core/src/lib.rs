//! Spin-j pure states in the Majorana stellar representation.
//!
//! - [`states`]: number-basis vectors, constellations of stars, coherent and
//!   polygon states, time reversal.
//! - [`husimi`]: Husimi function and Wehrl entropy on the sphere.
//! - [`orbit_geometry`]: Bargmann invariants and the metric and symplectic
//!   form on SU(2) orbits of number states.
//! - [`lieb_solovej`]: the Lieb-Solovej channel, spectra and majorization.
//! - [`sphere_opt`]: Wehrl, Thomson and Tammes optimization of constellations.
//! - [`cli`]: the `majorana` command-line front end.

pub mod cli;
pub mod error;
pub mod husimi;
pub mod io;
pub mod lieb_solovej;
pub mod orbit_geometry;
pub mod poly;
pub mod quadrature;
pub mod rng;
pub mod sphere_opt;
pub mod spin;
pub mod states;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use states::{Constellation, ExtComplex, PolygonSpec, Ring, SpinState, Star};
