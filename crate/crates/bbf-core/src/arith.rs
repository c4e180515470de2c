//! Integer and rational helpers shared across the crate.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Floor of the square root of a nonnegative integer.
pub fn isqrt(n: &BigInt) -> BigInt {
    debug_assert!(!n.is_negative());
    n.sqrt()
}

/// Whether `n` is a perfect square. Negative integers are never squares.
pub fn is_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

/// Extended gcd: returns `(g, x, y)` with `g = gcd(a, b) >= 0` and `a x + b y = g`.
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let (mut old_r, mut r) = (a.clone(), b.clone());
    let (mut old_s, mut s) = (BigInt::one(), BigInt::zero());
    let (mut old_t, mut t) = (BigInt::zero(), BigInt::one());
    while !r.is_zero() {
        let q = &old_r / &r;
        let next_r = &old_r - &q * &r;
        old_r = core::mem::replace(&mut r, next_r);
        let next_s = &old_s - &q * &s;
        old_s = core::mem::replace(&mut s, next_s);
        let next_t = &old_t - &q * &t;
        old_t = core::mem::replace(&mut t, next_t);
    }
    if old_r.is_negative() {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Gcd of a slice of integers (zero for the empty slice or all zeros).
pub fn content(values: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for v in values {
        g = g.gcd(v);
        if g.is_one() {
            break;
        }
    }
    g
}

/// Trial-division factorisation of a positive integer into `(prime, exponent)` pairs.
pub fn factorize(n: &BigUint) -> Vec<(BigUint, u32)> {
    debug_assert!(!n.is_zero());
    let mut n = n.clone();
    let mut out = Vec::new();
    let mut p = BigUint::from(2u32);
    while &p * &p <= n {
        if (&n % &p).is_zero() {
            let mut e = 0u32;
            while (&n % &p).is_zero() {
                n /= &p;
                e += 1;
            }
            out.push((p.clone(), e));
        }
        p += 1u32;
    }
    if n > BigUint::one() {
        out.push((n, 1));
    }
    out
}

/// All divisors of a nonzero integer, both signs, sorted by absolute value.
pub fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mag = n.magnitude().clone();
    let factors = factorize(&mag);
    let mut positive = vec![BigUint::one()];
    for (p, e) in &factors {
        let mut next = Vec::with_capacity(positive.len() * (*e as usize + 1));
        for d in &positive {
            let mut pk = BigUint::one();
            for _ in 0..=*e {
                next.push(d * &pk);
                pk *= p;
            }
        }
        positive = next;
    }
    positive.sort();
    let mut out = Vec::with_capacity(positive.len() * 2);
    for d in positive {
        let d = BigInt::from(d);
        out.push(d.clone());
        out.push(-d);
    }
    out
}

/// All positive `e` with `e^2` dividing the nonzero integer `n`, ascending.
pub fn square_divisors(n: &BigInt) -> Vec<BigInt> {
    let factors = factorize(n.magnitude());
    let mut out = vec![BigUint::one()];
    for (p, e) in &factors {
        let half = e / 2;
        let mut next = Vec::with_capacity(out.len() * (half as usize + 1));
        for d in &out {
            let mut pk = BigUint::one();
            for _ in 0..=half {
                next.push(d * &pk);
                pk *= p;
            }
        }
        out = next;
    }
    out.sort();
    out.into_iter().map(BigInt::from).collect()
}

/// Exact `floor(sqrt(r) - c)` for a nonnegative rational `r` and rational `c`.
pub fn floor_sqrt_shift(r: &BigRational, c: &BigRational) -> BigInt {
    debug_assert!(!r.is_negative());
    // k <= sqrt(r) - c  <=>  k + c <= sqrt(r)  <=>  k + c <= 0  or  (k + c)^2 <= r.
    let le_sqrt = |k: &BigInt| -> bool {
        let x = BigRational::from(k.clone()) + c;
        if x <= BigRational::zero() {
            true
        } else {
            &x * &x <= *r
        }
    };
    // Seed from integer square roots, then correct by the exact predicate.
    let approx = isqrt(&r.to_integer()) - c.ceil().to_integer();
    let mut k = approx;
    while !le_sqrt(&k) {
        k -= 1;
    }
    loop {
        let next = &k + 1;
        if le_sqrt(&next) {
            k = next;
        } else {
            return k;
        }
    }
}

/// Exact `ceil(-sqrt(r) - c)` for a nonnegative rational `r` and rational `c`.
pub fn ceil_neg_sqrt_shift(r: &BigRational, c: &BigRational) -> BigInt {
    -floor_sqrt_shift(r, &-c)
}
