//! Symbolic toolkit for reflection mappings: restrictions of the orbit map of
//! a finite complex reflection group to an embedded submanifold.

pub mod curveinv;
pub mod cyclotomic;
pub mod error;
pub mod expr;
pub mod group;
pub mod linalg;
pub mod poly;
pub mod problem;
pub mod refmap;

pub use cyclotomic::{Coeff, CycloElem, CycloField};
pub use error::{Error, Result};
pub use poly::{Poly, PolyRing, Role};
