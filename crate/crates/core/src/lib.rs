pub mod cli;
pub mod decomposition;
pub mod error;
pub mod homext;
pub mod linalg;
pub mod lss;
pub mod oracle;
pub mod perp;
pub mod quiver;

pub use decomposition::{Decomposition, Term};
pub use error::{Error, Result};
pub use quiver::{parse_quiver, DimVector, Quiver, RootClass, Weight};
