//! Kazhdan-Lusztig and p-canonical cells of finite crystallographic Coxeter groups.

pub mod cells;
pub mod coxeter;
pub mod error;
pub mod golden;
pub mod hecke;
pub mod laurent;
pub mod pcanonical;
pub mod report;
pub mod stars;
pub mod typea;
pub mod verify;

pub use cells::{CellPartition, CellSide, ColouredWGraph};
pub use coxeter::{CoxeterSystem, Elt, GenSet, GroupSpec, Side, IDENTITY};
pub use error::{Error, Result};
pub use hecke::{Basis, HeckeElt, KLTable};
pub use laurent::LaurentPoly;
pub use pcanonical::PCanTable;
pub use report::{Report, Violation};
pub use stars::{StringDecomposition, TauPartition};
