//! Certify odd square-free integers as non-θ-congruent numbers (θ = π/3 or
//! 2π/3) and non-tiling numbers.
//!
//! The certification route is a full 2-descent: for the curves
//!
//! ```text
//! E_{n,π/3}:  y² = x(x − n)(x + 3n)
//! E_{n,2π/3}: y² = x(x + n)(x − 3n)
//! ```
//!
//! the Selmer groups attached to the two 2-isogenies are computed exactly
//! from per-place local-image case tables over the finite square-class group
//! generated by −1, 2, 3 and the primes dividing n ([`descent`]). When the
//! resulting Selmer rank bound is zero the curve has Mordell–Weil rank zero
//! and n is certified non-θ-congruent; when both curves are certified, n is
//! certified a non-tiling number.
//!
//! Independently, a catalog of residue-graph criteria ([`criteria`]) predicts
//! the same Selmer-group collapses from quadratic-residue digraphs on the
//! prime divisors of n ([`graph`]). Every criterion is evaluated side by side
//! with the descent ground truth, so the graph catalog is continuously
//! cross-validated instead of trusted.
//!
//! Supporting modules: exact integer/square-class arithmetic with Legendre
//! and Hilbert symbols ([`arith`]), dense F₂ linear algebra ([`gf2`]), and an
//! exhaustive rational-point search that produces checkable witnesses for
//! numbers that are θ-congruent ([`witness`]).

pub mod arith;
pub mod criteria;
pub mod descent;
pub mod gf2;
pub mod graph;
pub mod witness;
