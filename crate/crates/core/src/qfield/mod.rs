//! The scalar field `Q(q^(1/120))`: exact rational functions in a fractional power of `q`.

pub mod laurent;
mod quantum;
mod scalar;

pub use laurent::{exact_div, poly_gcd, LaurentPoly};
pub use quantum::{q_power, quantum_binomial, quantum_factorial, quantum_integer};
pub use scalar::{ExactScalar, S_PER_Q};
