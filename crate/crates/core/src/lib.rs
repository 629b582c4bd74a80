pub mod algebra;
pub mod avariety;
pub mod error;
pub mod groebner;
pub mod holonomy;
pub mod ideal;
pub mod numeric;
pub mod shapes;
pub mod triangulation;

pub use error::{Error, ErrorKind, Result};
