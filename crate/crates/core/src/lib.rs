pub mod census;
pub mod classify;
pub mod cli;
pub mod digraph;
pub mod error;
pub mod grouplab;
pub mod io;
pub mod massey;
pub mod padic;
pub mod par;
pub mod presentation;
pub mod report;
pub mod word;

pub use digraph::{Digraph, PairState};
pub use error::{Error, Result};
