//! Exact random generation of traces in a trace monoid.
//!
//! Finite traces are drawn from the weighted laws `B_{S,p}` and their
//! conditioned versions `D_{S,T}`; infinite traces under the uniform measure
//! are produced as endless streams of growing prefixes.

pub mod alphabet;
pub mod analysis;
pub mod cli;
pub mod error;
pub mod laws;
pub mod mobius;
pub mod sampler;
pub mod stats;
pub mod trace;

pub use alphabet::{DependenceGraph, GraphDocument, Letter, LetterSet};
pub use error::{Error, Result};
pub use laws::{exact_distribution, geometric_param, ExactTable, TraceLaw};
pub use mobius::{MobiusPolynomial, MobiusTable};
pub use sampler::{DirectSampler, PrefixStream, RejectionSampler, UniformSampler};
pub use trace::{NormalForm, Trace};
