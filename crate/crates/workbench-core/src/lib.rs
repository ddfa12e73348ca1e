//! Contact algebras, local contact algebras and their duality, checked on
//! exact finite and infinite models.

pub mod algebra;
pub mod axioms;
pub mod bits;
pub mod duality;
pub mod error;
pub mod finite;
pub mod ideals;
pub mod morphism;
pub mod regions;
pub mod spaces;

pub use error::{Error, Result};
