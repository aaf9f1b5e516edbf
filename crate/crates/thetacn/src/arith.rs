//! Exact integer arithmetic: primality, square-free factorization, Legendre
//! and Hilbert symbols, and the group ℚ*/(ℚ*)² of square classes.
//!
//! A square class is represented by its unique square-free integer
//! representative, stored as a sign plus the strictly ascending list of prime
//! divisors. Every congruence test on a representative uses the non-negative
//! residue (`i128::rem_euclid`), so −3 ≡ 1 (mod 4) and −1 ≡ 7 (mod 8); this
//! convention is load-bearing for the local-image tables built on top.
//!
//! Factorization entry points accept magnitudes below 2^62, which keeps all
//! derived representative products comfortably inside `i128`.

use std::fmt;

use thiserror::Error;

/// Upper bound (exclusive) on magnitudes accepted by factorization routines.
pub const MAX_INPUT: u64 = 1 << 62;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    /// Zero has no square class and no factorization into primes.
    #[error("zero input: square classes and factorizations require a nonzero integer")]
    ZeroInput,
    /// The input is divisible by the square of the given prime.
    #[error("not square-free: divisible by {0}^2")]
    NotSquareFree(u64),
    /// `legendre_of_class` was asked for a symbol (d/p) with p dividing d.
    #[error("prime {0} divides the class support; cancel it before taking the symbol")]
    PInSupport(u64),
}

// ---------------------------------------------------------------------------
// Modular arithmetic and primality
// ---------------------------------------------------------------------------

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, m);
        }
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin over the full `u64` range.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    // n is odd, > 37, and coprime to the bases below; this base set is a
    // proven deterministic witness set for all 64-bit integers.
    let d = (n - 1) >> (n - 1).trailing_zeros();
    let s = (n - 1).trailing_zeros();
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Brent-cycle Pollard rho; returns a nontrivial factor of odd composite `n`.
fn pollard_rho(n: u64) -> u64 {
    debug_assert!(n > 3 && !is_prime(n) && n % 2 == 1);
    // Deterministic: walk the polynomial x² + c, escalating c on failure.
    for c in 1..64u64 {
        let f = |x: u64| (mulmod(x, x, n) + c) % n;
        let (mut x, mut ys, mut q, mut g) = (2u64, 2u64, 1u64, 1u64);
        let mut y = 2u64;
        let mut r = 1u64;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0u64;
            while k < r && g == 1 {
                ys = y;
                let m = 128.min(r - k);
                for _ in 0..m {
                    y = f(y);
                    q = mulmod(q, x.abs_diff(y), n);
                }
                g = gcd_u64(q, n);
                k += m;
            }
            r <<= 1;
        }
        if g == n {
            // Backtrack one step at a time.
            g = 1;
            while g == 1 {
                ys = f(ys);
                g = gcd_u64(x.abs_diff(ys), n);
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!("rho failed to split {n} with 63 polynomial offsets");
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Prime factorization of `n ≥ 1` (< 2^62) as ascending `(prime, exponent)`
/// pairs; `factor(1)` is empty.
pub fn factor(n: u64) -> Vec<(u64, u32)> {
    assert!(n >= 1, "factor requires a positive integer");
    assert!(n < MAX_INPUT, "factor supports magnitudes below 2^62");
    let mut out: Vec<(u64, u32)> = Vec::new();
    let mut m = n;
    for p in [2u64, 3, 5] {
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    }
    // Trial division on the 6k±1 wheel up to 2^20, then rho on what remains.
    let mut d = 7u64;
    let mut step = 4u64; // alternates 4, 2: 7, 11, 13, 17, 19, 23, ...
    while d <= 1 << 20 && d * d <= m {
        let mut e = 0;
        while m % d == 0 {
            m /= d;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += step;
        step = 6 - step;
    }
    let mut stack = vec![m];
    let mut hard: Vec<u64> = Vec::new();
    while let Some(v) = stack.pop() {
        if v == 1 {
            continue;
        }
        if is_prime(v) {
            hard.push(v);
        } else {
            let g = pollard_rho(v);
            stack.push(g);
            stack.push(v / g);
        }
    }
    hard.sort_unstable();
    let mut i = 0;
    while i < hard.len() {
        let p = hard[i];
        let mut e = 0;
        while i < hard.len() && hard[i] == p {
            e += 1;
            i += 1;
        }
        out.push((p, e));
    }
    out.sort_unstable_by_key(|&(p, _)| p);
    out
}

/// The ascending prime divisors of a square-free `n ≥ 1`; rejects inputs with
/// a repeated prime factor, naming the offending prime.
pub fn factor_square_free(n: u64) -> Result<Vec<u64>, ArithError> {
    if n == 0 {
        return Err(ArithError::ZeroInput);
    }
    let mut out = Vec::new();
    for (p, e) in factor(n) {
        if e > 1 {
            return Err(ArithError::NotSquareFree(p));
        }
        out.push(p);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Legendre symbol
// ---------------------------------------------------------------------------

/// Legendre symbol (a/p) ∈ {−1, 0, 1} for an odd prime p, via Euler's
/// criterion. `a` may be any integer; it is reduced mod p first.
pub fn legendre(a: i128, p: u64) -> i32 {
    debug_assert!(p > 2 && p % 2 == 1, "legendre requires an odd prime modulus");
    debug_assert!(is_prime(p));
    let r = a.rem_euclid(p as i128) as u64;
    if r == 0 {
        return 0;
    }
    let e = powmod(r, (p - 1) / 2, p);
    if e == 1 {
        1
    } else {
        debug_assert_eq!(e, p - 1);
        -1
    }
}

// ---------------------------------------------------------------------------
// Square classes
// ---------------------------------------------------------------------------

/// An element of ℚ*/(ℚ*)², i.e. a square-free signed integer up to sign and
/// support. The identity is `+1` (empty support).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct SquareClass {
    negative: bool,
    /// Strictly ascending prime divisors of the representative.
    support: Vec<u64>,
}

impl SquareClass {
    /// The identity class `+1`.
    pub fn one() -> Self {
        SquareClass { negative: false, support: Vec::new() }
    }

    /// The class of `−1`.
    pub fn minus_one() -> Self {
        SquareClass { negative: true, support: Vec::new() }
    }

    /// The class of a single prime.
    pub fn from_prime(p: u64) -> Self {
        debug_assert!(is_prime(p));
        SquareClass { negative: false, support: vec![p] }
    }

    /// Assemble a class from a sign and an ascending list of distinct primes.
    /// Intended for tests and table-driven fixtures; panics on malformed
    /// input rather than propagating an error nobody can handle.
    pub fn from_parts(negative: bool, support: Vec<u64>) -> Self {
        for w in support.windows(2) {
            assert!(w[0] < w[1], "support must be strictly ascending");
        }
        for &p in &support {
            assert!(is_prime(p), "{p} is not prime");
        }
        SquareClass { negative, support }
    }

    pub fn negative(&self) -> bool {
        self.negative
    }

    pub fn support(&self) -> &[u64] {
        &self.support
    }

    pub fn contains(&self, p: u64) -> bool {
        self.support.binary_search(&p).is_ok()
    }

    pub fn is_one(&self) -> bool {
        !self.negative && self.support.is_empty()
    }

    /// The signed square-free integer representing this class. The supported
    /// input bound keeps this exact: panics only if a synthetic class
    /// overflows `i128`.
    pub fn representative(&self) -> i128 {
        let mut acc: i128 = if self.negative { -1 } else { 1 };
        for &p in &self.support {
            acc = acc
                .checked_mul(p as i128)
                .expect("square-class representative exceeds i128");
        }
        acc
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.representative())
    }
}

/// The square class of a nonzero integer.
pub fn class_of(k: i128) -> Result<SquareClass, ArithError> {
    if k == 0 {
        return Err(ArithError::ZeroInput);
    }
    let mag = k.unsigned_abs();
    assert!(mag < MAX_INPUT as u128, "class_of supports magnitudes below 2^62");
    let mut support = Vec::new();
    for (p, e) in factor(mag as u64) {
        if e % 2 == 1 {
            support.push(p);
        }
    }
    Ok(SquareClass { negative: k < 0, support })
}

/// Group law of ℚ*/(ℚ*)²: signs multiply, supports take the symmetric
/// difference (shared primes square away).
pub fn class_mul(a: &SquareClass, b: &SquareClass) -> SquareClass {
    let mut support = Vec::with_capacity(a.support.len() + b.support.len());
    let (mut i, mut j) = (0, 0);
    while i < a.support.len() && j < b.support.len() {
        match a.support[i].cmp(&b.support[j]) {
            std::cmp::Ordering::Less => {
                support.push(a.support[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                support.push(b.support[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    support.extend_from_slice(&a.support[i..]);
    support.extend_from_slice(&b.support[j..]);
    SquareClass { negative: a.negative ^ b.negative, support }
}

/// Legendre symbol (d/p) of a square class whose support avoids p; the class
/// is evaluated factor by factor so the representative never needs to fit in
/// a machine word for the symbol to be exact.
pub fn legendre_of_class(d: &SquareClass, p: u64) -> Result<i32, ArithError> {
    if d.contains(p) {
        return Err(ArithError::PInSupport(p));
    }
    let mut acc = if d.negative { legendre(-1, p) } else { 1 };
    for &q in &d.support {
        acc *= legendre(q as i128, p);
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// Hilbert symbol
// ---------------------------------------------------------------------------

/// A place of ℚ at which a Hilbert symbol can be evaluated: the real place,
/// or a finite prime (2 allowed).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum HilbertPlace {
    Infinity,
    Prime(u64),
}

/// Hilbert symbol (a, b)_v ∈ {−1, 1} for nonzero integers via the classical
/// closed forms. Panics on a zero argument.
pub fn hilbert(a: i128, b: i128, place: HilbertPlace) -> i32 {
    assert!(a != 0 && b != 0, "hilbert symbol requires nonzero arguments");
    match place {
        HilbertPlace::Infinity => {
            if a < 0 && b < 0 {
                -1
            } else {
                1
            }
        }
        HilbertPlace::Prime(2) => {
            let (alpha, u) = split_valuation(a, 2);
            let (beta, v) = split_valuation(b, 2);
            // ε(u) = (u−1)/2 mod 2 depends on u mod 4; ω(u) = (u²−1)/8 mod 2
            // depends on u mod 8.
            let eps = |w: i128| u32::from(w.rem_euclid(4) == 3);
            let omega = |w: i128| u32::from(matches!(w.rem_euclid(8), 3 | 5));
            let e = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u);
            if e % 2 == 0 {
                1
            } else {
                -1
            }
        }
        HilbertPlace::Prime(p) => {
            debug_assert!(p > 2 && is_prime(p), "finite Hilbert place must be prime");
            let (alpha, u) = split_valuation(a, p);
            let (beta, v) = split_valuation(b, p);
            let eps_p = u32::from(p % 4 == 3);
            let mut sign = if (alpha * beta * eps_p) % 2 == 1 { -1 } else { 1 };
            if beta % 2 == 1 {
                sign *= legendre(u, p);
            }
            if alpha % 2 == 1 {
                sign *= legendre(v, p);
            }
            sign
        }
    }
}

/// Split `k = p^α · u` with p ∤ u; returns (α mod 2 context kept exact, u).
fn split_valuation(k: i128, p: u64) -> (u32, i128) {
    debug_assert!(k != 0);
    let p = p as i128;
    let mut alpha = 0u32;
    let mut u = k;
    while u % p == 0 {
        u /= p;
        alpha += 1;
    }
    (alpha, u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn factors_small_and_smooth() {
        assert_eq!(factor_square_free(1).unwrap(), Vec::<u64>::new());
        assert_eq!(factor_square_free(15015).unwrap(), vec![3, 5, 7, 11, 13]);
        assert_eq!(factor_square_free(12), Err(ArithError::NotSquareFree(2)));
        assert_eq!(factor_square_free(0), Err(ArithError::ZeroInput));
        assert_eq!(factor(360), vec![(2, 3), (3, 2), (5, 1)]);
    }

    #[test]
    fn factors_large_semiprime() {
        // Both cofactors exceed the trial-division bound, forcing the rho path.
        let p = 2_147_483_647u64; // 2^31 − 1
        let q = 2_147_483_629u64; // 2^31 − 19
        assert!(is_prime(p) && is_prime(q));
        assert_eq!(factor_square_free(p * q).unwrap(), vec![q, p]);
    }

    #[test]
    fn factor_round_trips() {
        for n in 1..2000u64 {
            let product: u64 = factor(n).into_iter().map(|(p, e)| p.pow(e)).product();
            assert_eq!(product, n);
        }
    }

    #[test]
    fn primality_spot_checks() {
        let primes = [2u64, 3, 5, 7, 61, 97, 2_147_483_647, 18_446_744_073_709_551_557];
        for p in primes {
            assert!(is_prime(p), "{p} should be prime");
        }
        for c in [1u64, 4, 341, 561, 25_326_001, 3_215_031_751] {
            assert!(!is_prime(c), "{c} should be composite");
        }
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre(1, 7), 1);
        assert_eq!(legendre(-1, 7), -1);
        assert_eq!(legendre(2, 7), 1);
        assert_eq!(legendre(3, 13), 1);
        assert_eq!(legendre(21, 7), 0);
        assert_eq!(legendre(-11, 7), -1); // −11 ≡ 3 (mod 7), a non-residue
    }

    #[test]
    fn legendre_is_multiplicative() {
        for p in [3u64, 5, 7, 11, 13, 101] {
            for a in -40i128..40 {
                for b in -40i128..40 {
                    assert_eq!(legendre(a * b, p), legendre(a, p) * legendre(b, p));
                }
            }
        }
    }

    #[test]
    fn class_of_strips_squares() {
        assert_eq!(class_of(60).unwrap(), SquareClass::from_parts(false, vec![3, 5]));
        assert_eq!(class_of(-21).unwrap(), SquareClass::from_parts(true, vec![3, 7]));
        assert_eq!(class_of(9).unwrap(), SquareClass::one());
        assert_eq!(class_of(-1).unwrap(), SquareClass::minus_one());
        assert_eq!(class_of(0), Err(ArithError::ZeroInput));
        assert_eq!(class_of(-300).unwrap().representative(), -3);
    }

    #[test]
    fn class_group_laws() {
        let six = class_of(6).unwrap();
        let ten = class_of(10).unwrap();
        assert_eq!(class_mul(&six, &ten), class_of(15).unwrap());
        assert!(class_mul(&six, &six).is_one());
        // Associativity and commutativity over a small generating set.
        let gens: Vec<SquareClass> =
            [-1i128, 2, 3, 5, 7].iter().map(|&k| class_of(k).unwrap()).collect();
        for a in &gens {
            for b in &gens {
                assert_eq!(class_mul(a, b), class_mul(b, a));
                for c in &gens {
                    assert_eq!(
                        class_mul(&class_mul(a, b), c),
                        class_mul(a, &class_mul(b, c))
                    );
                }
            }
        }
    }

    #[test]
    fn class_symbol_matches_integer_symbol() {
        for k in -60i128..60 {
            if k == 0 {
                continue;
            }
            for p in [7u64, 11, 13] {
                let d = class_of(k).unwrap();
                if d.contains(p) {
                    assert_eq!(legendre_of_class(&d, p), Err(ArithError::PInSupport(p)));
                } else {
                    // (k/p) = (rep/p) because k and rep differ by a square.
                    assert_eq!(legendre_of_class(&d, p).unwrap(), legendre(d.representative(), p));
                }
            }
        }
    }

    #[test]
    fn hilbert_examples() {
        for place in [HilbertPlace::Infinity, HilbertPlace::Prime(2), HilbertPlace::Prime(5)] {
            assert_eq!(hilbert(17, 1, place), 1);
            assert_eq!(hilbert(1, -13, place), 1);
        }
        assert_eq!(hilbert(-1, -1, HilbertPlace::Infinity), -1);
        assert_eq!(hilbert(-1, -1, HilbertPlace::Prime(2)), -1);
        assert_eq!(hilbert(2, 7, HilbertPlace::Prime(7)), 1);
        assert_eq!(hilbert(3, 7, HilbertPlace::Prime(7)), -1);
    }

    #[test]
    fn hilbert_product_formula() {
        // ∏_v (a,b)_v = 1 over v ∈ {∞, 2} ∪ {odd p | ab}: the strongest
        // single sanity check the closed forms can get.
        for a in -30i128..=30 {
            for b in -30i128..=30 {
                if a == 0 || b == 0 {
                    continue;
                }
                let mut prod = hilbert(a, b, HilbertPlace::Infinity)
                    * hilbert(a, b, HilbertPlace::Prime(2));
                for (p, _) in factor((a * b).unsigned_abs() as u64) {
                    if p > 2 {
                        prod *= hilbert(a, b, HilbertPlace::Prime(p));
                    }
                }
                assert_eq!(prod, 1, "product formula fails for a={a}, b={b}");
            }
        }
    }

    proptest! {
        #[test]
        fn hilbert_symmetric_and_bimultiplicative(
            a in -1000i128..=1000,
            b in -1000i128..=1000,
            c in -1000i128..=1000,
        ) {
            prop_assume!(a != 0 && b != 0 && c != 0);
            for place in [
                HilbertPlace::Infinity,
                HilbertPlace::Prime(2),
                HilbertPlace::Prime(3),
                HilbertPlace::Prime(5),
                HilbertPlace::Prime(7),
                HilbertPlace::Prime(13),
            ] {
                prop_assert_eq!(hilbert(a, b, place), hilbert(b, a, place));
                prop_assert_eq!(
                    hilbert(a * c, b, place),
                    hilbert(a, b, place) * hilbert(c, b, place)
                );
            }
        }

        #[test]
        fn class_mul_matches_integer_mul(a in -500i128..=500, b in -500i128..=500) {
            prop_assume!(a != 0 && b != 0);
            let lhs = class_mul(&class_of(a).unwrap(), &class_of(b).unwrap());
            prop_assert_eq!(lhs, class_of(a * b).unwrap());
        }
    }
}
