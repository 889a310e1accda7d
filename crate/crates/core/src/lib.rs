//! c-differential uniformity of functions over GF(p^n).
//!
//! Three independent routes to the c-differential table: direct counting
//! ([`cddt::cddt_brute`]), the additive-character expansion
//! ([`cddt::cddt_char`]) and, for perturbed Gold functions, closed forms
//! built from Weil sums ([`gold::cddt_closed`]).

pub mod cddt;
pub mod charsum;
pub mod error;
pub mod field;
pub mod gold;
pub mod linpoly;
pub mod tables;
pub mod verify;

pub use cddt::{CRange, Cddt, FnTable};
pub use charsum::{CSum, Characters, WeilParams};
pub use error::{Error, Result};
pub use field::{Felt, FieldCtx};
pub use gold::{Conventions, GoldSpec};
pub use linpoly::{Coset, LinPoly};
