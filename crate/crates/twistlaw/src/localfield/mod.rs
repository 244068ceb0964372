//! Finite extensions of Q_p presented as towers of unramified and Eisenstein stages.

mod elem;
pub mod extend;
pub mod factor;
mod field;
pub mod linalg;
mod montes;
pub mod normgroup;
pub mod poly;
pub mod roots;
pub mod splitting;
pub mod symbols;
pub mod tower;

pub use elem::{Elem, EXACT};
pub use field::{make_padic_field, precision_floor, LocalField, Stage, StageKind};
pub use poly::{Poly, Segment};
