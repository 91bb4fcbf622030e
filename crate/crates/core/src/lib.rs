//! Refined r-divisions of embedded planar graphs with a prescribed vertex
//! set, and the incidence-geometry constructions built on them.

pub mod planar;
pub mod separator;

pub mod arrangement;
pub mod constructions;
pub mod rdivision;
