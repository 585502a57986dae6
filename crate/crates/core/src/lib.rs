pub mod certify;
pub mod error;
pub mod field;
pub mod linpoly;
pub mod matgroup;
pub mod matrix;
pub mod scatter;

pub use error::{Error, Result};
pub use field::{Elem, FElem, Field, FieldTower};
pub use matrix::Matrix;
pub use linpoly::{LinearizedPoly, UfSubspace};
