//! Signed-angle rigidity of planar frameworks, angle-only sensor network
//! localization and bearing-free formation control.

pub mod ais;
pub mod error;
pub mod formation;
pub mod geometry;
pub mod graph;
pub mod localization;
pub mod numerics;
pub mod rigidity;

pub use error::{Error, Result};
pub use geometry::{Angle, Mat2, Vec2};
pub use graph::{AngleIndexSet, AngleTriple, Edge, Graph};
pub use rigidity::{analyze, Framework, RigidityReport};
