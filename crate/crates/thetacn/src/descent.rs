//! 2-descent Selmer group computation for the two θ-congruent-number curves
//!
//! ```text
//! θ = π/3:  y² = x(x − n)(x + 3n)
//! θ = 2π/3: y² = x(x + n)(x − 3n)
//! ```
//!
//! Both curves carry the 2-isogeny descent over the finite square-class group
//! D(E) = ⟨−1, 2, 3, p : p | n⟩ ⊆ ℚ*/(ℚ*)². For each place
//! v ∈ M(E) = {∞, 2, 3} ∪ {p | n, p ≥ 5} the local images of the connecting
//! homomorphisms are given by closed-form case tables in congruences of n and
//! of the candidate class d, plus Legendre symbols at the odd primes dividing
//! n. Intersecting over all places yields the two Selmer groups:
//!
//! * S′(E) — classes locally in the image of the dual isogeny's connecting
//!   map everywhere ([`in_image_dual`]); always contains the four torsion
//!   classes [`torsion_seed`].
//! * S(E) — classes locally in the image of the isogeny's connecting map
//!   everywhere ([`in_image`]); always contains the identity.
//!
//! The Mordell–Weil rank is bounded by `s_rank = rk₂S′ + rk₂S − 2 ≥ 0`; when
//! `s_rank = 0` the curve has rank zero, so n is not θ-congruent for the
//! curve's angle. All congruence tests on class representatives use
//! non-negative residues (so −3 ≡ 1 (mod 4)), and the mod-9 branches are
//! applied verbatim even when 3 | n.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::arith::{
    class_mul, factor_square_free, legendre_of_class, ArithError, SquareClass,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DescentError {
    /// Curves are defined here for square-free n ≥ 2.
    #[error("curve parameter must be at least 2, got {0}")]
    ParameterTooSmall(u64),
    /// The parameter must be square-free for D(E) to be generated by its
    /// prime divisors.
    #[error("curve parameter {0} is not square-free (repeated prime {1})")]
    ParameterNotSquareFree(u64, u64),
    /// A local-image query named a place outside M(E) = {∞, 2, 3, p | n}.
    #[error("place {0} is not in M(E) for n = {1}")]
    PlaceNotInM(Place, u64),
}

/// The two supported angles.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Theta {
    PiThird,
    TwoPiThird,
}

impl fmt::Display for Theta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Theta::PiThird => write!(f, "pi/3"),
            Theta::TwoPiThird => write!(f, "2pi/3"),
        }
    }
}

/// A place of ℚ relevant to the descent: the real place, 2, 3, or an odd
/// prime p ≥ 5 dividing n.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Place {
    Infinity,
    Two,
    Three,
    OddPrime(u64),
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinity => write!(f, "infinity"),
            Place::Two => write!(f, "2"),
            Place::Three => write!(f, "3"),
            Place::OddPrime(p) => write!(f, "{p}"),
        }
    }
}

/// One of the curves E_{n,θ}, with n ≥ 2 square-free.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Curve {
    n: u64,
    theta: Theta,
    /// Ascending prime divisors of n, cached at construction.
    primes: Vec<u64>,
}

impl Curve {
    pub fn new(n: u64, theta: Theta) -> Result<Curve, DescentError> {
        if n < 2 {
            return Err(DescentError::ParameterTooSmall(n));
        }
        let primes = factor_square_free(n).map_err(|e| match e {
            ArithError::NotSquareFree(p) => DescentError::ParameterNotSquareFree(n, p),
            other => unreachable!("positive input cannot raise {other}"),
        })?;
        Ok(Curve { n, theta, primes })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn theta(&self) -> Theta {
        self.theta
    }

    /// Ascending prime divisors of n.
    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// The x-coordinates of the three 2-torsion points: 0 and ±n, ∓3n.
    pub fn roots(&self) -> (i128, i128, i128) {
        let n = self.n as i128;
        match self.theta {
            Theta::PiThird => (0, n, -3 * n),
            Theta::TwoPiThird => (0, -n, 3 * n),
        }
    }

    /// The class of +n (square-free by construction).
    fn n_class(&self) -> SquareClass {
        SquareClass::from_parts(false, self.primes.clone())
    }

    /// The class of −n.
    fn minus_n_class(&self) -> SquareClass {
        SquareClass::from_parts(true, self.primes.clone())
    }
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E({}, {})", self.n, self.theta)
    }
}

/// The finite square-class group D(E) = ⟨−1, 2, 3, p | n⟩, as a sorted list
/// of 2^(k+1) classes where k = |{2, 3} ∪ primes(n)|.
pub fn descent_group(curve: &Curve) -> Vec<SquareClass> {
    let mut gens: Vec<u64> = vec![2, 3];
    gens.extend_from_slice(curve.primes());
    gens.sort_unstable();
    gens.dedup();
    let k = gens.len();
    let mut out = Vec::with_capacity(1 << (k + 1));
    for mask in 0u32..(1 << k) {
        let mut support = Vec::new();
        for (i, &p) in gens.iter().enumerate() {
            if (mask >> i) & 1 == 1 {
                support.push(p);
            }
        }
        for negative in [false, true] {
            out.push(SquareClass::from_parts(negative, support.clone()));
        }
    }
    out.sort();
    out
}

/// M(E): ∞, 2, 3, then the prime divisors of n that are ≥ 5, ascending. The
/// fixed places come first so the cheap congruence tests short-circuit the
/// Legendre evaluations during intersection.
pub fn places(curve: &Curve) -> Vec<Place> {
    let mut out = vec![Place::Infinity, Place::Two, Place::Three];
    out.extend(curve.primes().iter().filter(|&&p| p >= 5).map(|&p| Place::OddPrime(p)));
    out
}

fn validate_place(curve: &Curve, place: Place) -> Result<(), DescentError> {
    match place {
        Place::Infinity | Place::Two | Place::Three => Ok(()),
        Place::OddPrime(p) => {
            if p >= 5 && curve.n() % p == 0 && curve.primes().contains(&p) {
                Ok(())
            } else {
                Err(DescentError::PlaceNotInM(place, curve.n()))
            }
        }
    }
}

/// Local membership of d in the image of the dual connecting map at the
/// given place (the defining conditions of S′(E)).
pub fn in_image_dual(
    curve: &Curve,
    place: Place,
    d: &SquareClass,
) -> Result<bool, DescentError> {
    validate_place(curve, place)?;
    let n = curve.n();
    let rep = d.representative();
    Ok(match place {
        Place::Infinity => true,
        Place::Two => {
            if d.contains(2) {
                // Only curves with even n admit even classes locally, and
                // then exactly one residue class mod 8 per angle.
                let target = match curve.theta() {
                    Theta::PiThird => n % 8,
                    Theta::TwoPiThird => (8 - n % 8) % 8,
                };
                n % 2 == 0 && rep.rem_euclid(8) as u64 == target
            } else {
                let gated = match curve.theta() {
                    Theta::PiThird => matches!(n % 8, 2 | 5 | 6),
                    Theta::TwoPiThird => matches!(n % 8, 2 | 3 | 6),
                };
                !(gated && rep.rem_euclid(4) == 3)
            }
        }
        Place::Three => {
            let trigger = match curve.theta() {
                Theta::PiThird => 6,
                Theta::TwoPiThird => 3,
            };
            if d.contains(3) {
                !(n % 9 == trigger && (rep / 3).rem_euclid(3) == 1)
            } else {
                !(n % 9 == trigger && rep.rem_euclid(3) == 2)
            }
        }
        Place::OddPrime(p) => {
            if p % 3 != 1 {
                true
            } else if d.contains(p) {
                // Symbol of the class (±n)·d, inside which p cancels.
                let base = match curve.theta() {
                    Theta::PiThird => curve.n_class(),
                    Theta::TwoPiThird => curve.minus_n_class(),
                };
                let cls = class_mul(&base, d);
                legendre_of_class(&cls, p).expect("p cancels in (±n)·d") != -1
            } else {
                legendre_of_class(d, p).expect("p is outside supp(d)") != -1
            }
        }
    })
}

/// Local membership of d in the image of the connecting map at the given
/// place (the defining conditions of S(E)).
pub fn in_image(curve: &Curve, place: Place, d: &SquareClass) -> Result<bool, DescentError> {
    validate_place(curve, place)?;
    let n = curve.n();
    let rep = d.representative();
    Ok(match place {
        Place::Infinity => !d.negative(),
        Place::Two => {
            if d.contains(2) {
                false
            } else {
                let d4 = rep.rem_euclid(4);
                let d8 = rep.rem_euclid(8);
                match curve.theta() {
                    Theta::PiThird => {
                        n % 8 == 5
                            || (matches!(n % 8, 1 | 3 | 7) && d4 == 1)
                            || (n % 8 == 2 && matches!(d8, 1 | 7))
                            || (n % 8 == 6 && matches!(d8, 1 | 3))
                    }
                    Theta::TwoPiThird => {
                        n % 8 == 3
                            || (matches!(n % 8, 1 | 5 | 7) && d4 == 1)
                            || (n % 8 == 2 && matches!(d8, 1 | 3))
                            || (n % 8 == 6 && matches!(d8, 1 | 7))
                    }
                }
            }
        }
        Place::Three => {
            let trigger = match curve.theta() {
                Theta::PiThird => 6,
                Theta::TwoPiThird => 3,
            };
            if d.contains(3) {
                n % 9 == trigger && (rep / 3).rem_euclid(3) == 1
            } else {
                rep.rem_euclid(3) == 1
            }
        }
        Place::OddPrime(p) => {
            if d.contains(p) {
                let base = match curve.theta() {
                    Theta::PiThird => curve.minus_n_class(),
                    Theta::TwoPiThird => curve.n_class(),
                };
                let cls = class_mul(&base, d);
                p % 3 == 1 && legendre_of_class(&cls, p).expect("p cancels in (±n)·d") == 1
            } else {
                legendre_of_class(d, p).expect("p is outside supp(d)") == 1
            }
        }
    })
}

/// The four classes contributed to S′(E) by the rational 2-torsion:
/// {1, n, −3n, −3} for θ = π/3 and {1, −n, 3n, −3} for θ = 2π/3 (as classes,
/// so shared factors of 3 cancel).
pub fn torsion_seed(curve: &Curve) -> BTreeSet<SquareClass> {
    let minus_three = SquareClass::from_parts(true, vec![3]);
    let second = match curve.theta() {
        Theta::PiThird => curve.n_class(),
        Theta::TwoPiThird => curve.minus_n_class(),
    };
    let third = class_mul(&second, &minus_three);
    BTreeSet::from([SquareClass::one(), second, third, minus_three])
}

/// Everything the descent certifies about one curve.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SelmerReport {
    pub curve: Curve,
    /// S′(E): classes locally in the dual image at every place.
    pub s_prime: BTreeSet<SquareClass>,
    /// S(E): classes locally in the image at every place.
    pub s: BTreeSet<SquareClass>,
    pub rk2_s_prime: u32,
    pub rk2_s: u32,
    /// rk₂S′ + rk₂S − 2; zero certifies Mordell–Weil rank zero.
    pub s_rank: u32,
}

impl SelmerReport {
    pub fn rank_zero(&self) -> bool {
        self.s_rank == 0
    }
}

/// Compute both Selmer groups of a curve by intersecting the local images
/// over all places of M(E).
pub fn selmer(curve: &Curve) -> SelmerReport {
    let group = descent_group(curve);
    let ps = places(curve);
    let mut s_prime = BTreeSet::new();
    let mut s = BTreeSet::new();
    for d in &group {
        if ps.iter().all(|&v| in_image_dual(curve, v, d).expect("places come from M(E)")) {
            s_prime.insert(d.clone());
        }
        if ps.iter().all(|&v| in_image(curve, v, d).expect("places come from M(E)")) {
            s.insert(d.clone());
        }
    }
    let rk2_s_prime = rank_of_subgroup(&s_prime);
    let rk2_s = rank_of_subgroup(&s);
    let s_rank = (rk2_s_prime + rk2_s).checked_sub(2).unwrap_or_else(|| {
        panic!(
            "internal consistency violation on {curve}: rk2(S') = {rk2_s_prime} and \
             rk2(S) = {rk2_s} would give a negative Selmer rank bound"
        )
    });
    SelmerReport { curve: curve.clone(), s_prime, s, rk2_s_prime, rk2_s, s_rank }
}

/// log₂ of a subgroup's size, insisting the size is a power of two (local
/// images are subgroups, so their intersections must be).
fn rank_of_subgroup(set: &BTreeSet<SquareClass>) -> u32 {
    let len = set.len();
    assert!(
        len.is_power_of_two(),
        "internal consistency violation: a Selmer set of size {len} is not a subgroup"
    );
    len.trailing_zeros()
}
