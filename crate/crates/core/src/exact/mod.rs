//! Exact scalars: rationals, p-adic valuations, Bernoulli numbers and
//! residues modulo prime powers.

mod bernoulli;
mod rational;
mod residue;

pub use bernoulli::{bernoulli, bernoulli_denominator_valuation, von_staudt_clausen_fraction};
pub use rational::{
    factorial, format_rational, is_p_integral, parse_rational, pow_rational, rat, vp, vp_int,
    Rational, Valuation,
};
pub use residue::{is_prime, padic_log_unit, Modulus, PadicContext, ResidueInt};
