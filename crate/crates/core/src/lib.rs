pub mod error;
pub mod field;
pub mod poly;
pub mod ext;
pub mod rational;
pub mod gw;
pub mod gram;
pub mod kmw;
pub mod sample;
pub mod transfers;
pub mod suites;
pub mod expr;

pub use error::{Error, Result};
pub use field::{field_of_order, make_field, Fe, FiniteField};
pub use poly::Poly;
pub use expr::{eval_expr, Value};
