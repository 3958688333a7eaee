//! Exact workbench for diagrammatic interpolation categories: string diagrams
//! over a signature, characters of invariants, Gram radicals, quotient
//! endomorphism algebras and goodness tests.

pub mod arith;
pub mod character;
pub mod cli;
pub mod diagram;
pub mod endalg;
pub mod enumerate;
pub mod error;
pub mod goodness;
pub mod gram;
pub mod presets;
pub mod realize;

pub use diagram::{Builder, ClosedDiagramKey, Diagram, Generator, LinCombo, Signature, Sink, Source};
pub use error::{Error, Result};
