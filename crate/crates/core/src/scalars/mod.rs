//! Exact arithmetic in `Q(q)` and q-combinatorics.

mod poly;
mod ratfun;

pub use poly::{q_factorial, q_int, Poly};
pub use ratfun::RatFun;

use crate::error::Result;

/// Reduced representative of `num/den`.
pub fn ratfun_normalize(num: Poly, den: Poly) -> Result<RatFun> {
    RatFun::normalize(num, den)
}

/// `1/[n]_base!` as a rational function.
pub fn inv_q_factorial(n: u32, base: &Poly) -> RatFun {
    RatFun::normalize(Poly::one(), q_factorial(n, base)).expect("q-factorial of a nonzero base is nonzero")
}
