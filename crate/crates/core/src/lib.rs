pub mod arith;
pub mod expr;
pub mod seed;
pub mod upper_bound;
pub mod green;
pub mod quiver;
pub mod qtorus;
pub mod borel;
pub mod uq;
pub mod json;
pub mod random;
pub mod verify;
