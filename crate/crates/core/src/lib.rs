//! Exact and multiprecision treatment of the two-axis countertwisting
//! Hamiltonian `H = (χ/2i)(J+² - J-²)`.

pub mod charpoly;
pub mod error;
pub mod evolution;
pub mod halfint;
pub mod mp;
pub mod operator;
pub mod poly;
pub mod spectrum;
pub mod spin_algebra;
pub mod table1;
pub mod verify;

pub use error::{Error, Result};
pub use halfint::{HalfInt, Spin};
pub use mp::{Complex, Precision};
pub use rug::Float;
pub use operator::{BasisOrdering, DenseOperator};
