//! Bounded-size islands in graphs on surfaces, list colorings with small
//! monochromatic components, exact discharging checks, and the gadgets used
//! to show that 2-coloring with small components is hard.

pub mod discharging;
pub mod drawing;
pub mod embedding;
pub mod error;
pub mod gadgets;
pub mod generators;
pub mod graph;
pub mod islands;
pub mod mc;
pub mod peel;

pub use embedding::{Embedding, Face};
pub use error::{Error, Result, TheoremViolation};
pub use graph::Graph;
pub use islands::{IslandWitness, Regime};
