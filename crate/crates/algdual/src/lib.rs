//! Desk-scale verification of duality isomorphisms for generic
//! algebras in presheaf toposes over small categories of finitely
//! presented algebras.

pub mod algebra;
pub mod config;
pub mod duality;
pub mod pairing;
pub mod presheaf;
pub mod realize;
pub mod report;
pub mod runner;
pub mod site;
#[cfg(test)]
pub(crate) mod testsupport;
pub mod theory;
