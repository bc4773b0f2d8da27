//! Liouville foliation invariants of an integrable top on the pencil
//! so(4) / e(3) / so(3,1): bifurcation diagrams, the separating set in the
//! orbit plane, orbit codes and a numerical oracle.

// `!(x < y)` comparisons are used on purpose so that NaN fails them
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod bifurcation;
pub mod cli;
pub mod code;
pub mod coords;
pub mod data;
pub mod error;
pub mod export;
pub mod family;
pub mod model;
pub mod oracle;
pub mod poly;
pub mod separating;
pub mod topology;

pub use error::{Error, Result};
pub use model::ModelParams;
