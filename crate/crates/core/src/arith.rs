//! Integer number theory shared by every other module: primality,
//! factorization, Kronecker symbols and modular square roots.
//!
//! Primality is deterministic below 2^64 (Miller-Rabin with the first twelve
//! prime bases). Above 2^64 it runs 64 Miller-Rabin rounds with bases drawn
//! from a ChaCha stream keyed by the process-wide primality seed and the
//! input, so the error probability is below 2^-128 and every answer is a pure
//! function of `(n, seed)`.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

const SMALL_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
const RANDOM_ROUNDS: usize = 64;
const TRIAL_LIMIT: u32 = 1_000_000;

pub const DEFAULT_PRIMALITY_SEED: u64 = 0x4a55_5353_4543_5542;

static PRIMALITY_SEED: AtomicU64 = AtomicU64::new(DEFAULT_PRIMALITY_SEED);

/// Sets the seed for the randomized Miller-Rabin rounds used above 2^64.
///
/// Meant to be called once at program start (the CLI `--seed` flag).
pub fn set_primality_seed(seed: u64) {
    PRIMALITY_SEED.store(seed, Ordering::Relaxed);
}

pub fn primality_seed() -> u64 {
    PRIMALITY_SEED.load(Ordering::Relaxed)
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut base = base % m;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = ((a % m) as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Reduces a signed big integer into `[0, m)`.
pub fn reduce(n: &BigInt, m: u64) -> u64 {
    n.mod_floor(&BigInt::from(m)).to_u64().expect("residue fits in u64")
}

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let limit = TRIAL_LIMIT as usize;
        let mut composite = vec![false; limit + 1];
        let mut primes = Vec::with_capacity(80_000);
        for i in 2..=limit {
            if !composite[i] {
                primes.push(i as u32);
                let mut j = i * i;
                while j <= limit {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        primes
    })
}

fn miller_rabin_u64(n: u64, a: u64) -> bool {
    let a = a % n;
    if a == 0 {
        return true;
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    let mut x = pow_mod(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &SMALL_WITNESSES {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    SMALL_WITNESSES.iter().all(|&a| miller_rabin_u64(n, a))
}

fn miller_rabin_big(n: &BigUint, a: &BigUint) -> bool {
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let mut x = a.modpow(&d, n);
    if x == one || x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == n_minus_1 {
            return true;
        }
    }
    false
}

fn is_prime_biguint(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    for &p in &small_primes()[..200] {
        if (n % p).is_zero() {
            return false;
        }
    }
    let low = n.iter_u64_digits().next().unwrap_or(0);
    let mut rng = ChaCha8Rng::seed_from_u64(primality_seed() ^ low.rotate_left(17));
    let span = n - 3u32;
    let words = (n.bits() as usize + 64) / 32 + 1;
    (0..RANDOM_ROUNDS).all(|_| {
        let digits: Vec<u32> = (0..words).map(|_| rng.next_u32()).collect();
        let a = BigUint::from_slice(&digits) % &span + 2u32;
        miller_rabin_big(n, &a)
    })
}

/// Primality test. Negative numbers, 0 and 1 are not prime.
pub fn is_prime(n: &BigInt) -> bool {
    match n.to_biguint() {
        Some(m) => is_prime_biguint(&m),
        None => false,
    }
}

/// Signed prime factorization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Factorization {
    #[serde(serialize_with = "crate::json::decimal")]
    pub sign: i8,
    /// `(prime, exponent)` pairs with strictly increasing primes.
    #[serde(serialize_with = "crate::json::factor_pairs")]
    pub factors: Vec<(BigInt, u32)>,
}

impl Factorization {
    pub fn one() -> Self {
        Factorization {
            sign: 1,
            factors: Vec::new(),
        }
    }

    pub fn recompose(&self) -> BigInt {
        let mut acc = BigInt::from(self.sign);
        for (p, e) in &self.factors {
            acc *= num_traits::pow(p.clone(), *e as usize);
        }
        acc
    }

    pub fn exponent_of(&self, p: &BigInt) -> u32 {
        self.factors
            .iter()
            .find(|(q, _)| q == p)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigInt> {
        self.factors.iter().map(|(p, _)| p)
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

fn brent_u64(n: u64, c: u64) -> Option<u64> {
    let step = |x: u64| ((mul_mod(x, x, n) as u128 + c as u128) % n as u128) as u64;
    let block = 128u64;
    let (mut y, mut r, mut q, mut g) = (2u64, 1u64, 1u64, 1u64);
    let (mut x, mut ys) = (0u64, 0u64);
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = step(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..block.min(r - k) {
                y = step(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = gcd_u64(q, n);
            k += block;
        }
        r *= 2;
    }
    if g == n {
        loop {
            ys = step(ys);
            g = gcd_u64(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

fn brent_big(n: &BigUint, c: u64) -> Option<BigUint> {
    let step = |x: &BigUint| (x * x + c) % n;
    let block = 128u64;
    let one = BigUint::one();
    let mut y = BigUint::from(2u32);
    let mut r = 1u64;
    let mut q = BigUint::one();
    let mut g = BigUint::one();
    let mut x = BigUint::zero();
    let mut ys = BigUint::zero();
    let diff = |a: &BigUint, b: &BigUint| if a > b { a - b } else { b - a };
    while g == one {
        x = y.clone();
        for _ in 0..r {
            y = step(&y);
        }
        let mut k = 0;
        while k < r && g == one {
            ys = y.clone();
            for _ in 0..block.min(r - k) {
                y = step(&y);
                q = (q * diff(&x, &y)) % n;
            }
            g = q.gcd(n);
            k += block;
        }
        r *= 2;
    }
    if &g == n {
        loop {
            ys = step(&ys);
            g = diff(&x, &ys).gcd(n);
            if g > one {
                break;
            }
        }
    }
    (&g != n).then_some(g)
}

fn split_composite(n: BigUint, out: &mut BTreeMap<BigUint, u32>) {
    if n.is_one() {
        return;
    }
    if is_prime_biguint(&n) {
        *out.entry(n).or_insert(0) += 1;
        return;
    }
    let r = n.sqrt();
    if &r * &r == n {
        // rho cycles poorly on perfect squares
        split_composite(r.clone(), out);
        split_composite(r, out);
        return;
    }
    let factor = if let Some(small) = n.to_u64() {
        (1u64..).find_map(|c| brent_u64(small, c)).map(BigUint::from)
    } else {
        (1u64..).find_map(|c| brent_big(&n, c))
    }
    .expect("Pollard rho eventually splits a composite");
    let cofactor = &n / &factor;
    split_composite(factor, out);
    split_composite(cofactor, out);
}

/// Factors a nonzero integer: trial division to 10^6, then Pollard rho with
/// Brent's cycle detection on the remaining cofactor.
///
/// Panics on zero.
pub fn factorize(n: &BigInt) -> Factorization {
    assert!(!n.is_zero(), "factorize(0) is undefined");
    let sign = if n.sign() == Sign::Minus { -1 } else { 1 };
    let mut m = n.magnitude().clone();
    let mut found: BTreeMap<BigUint, u32> = BTreeMap::new();
    for &p in small_primes() {
        if let Some(small) = m.to_u64() {
            // u64 fast path
            let mut small = small;
            let p = p as u64;
            if p * p > small {
                break;
            }
            if small % p == 0 {
                let mut e = 0;
                while small % p == 0 {
                    small /= p;
                    e += 1;
                }
                found.insert(BigUint::from(p), e);
                m = BigUint::from(small);
            }
            continue;
        }
        if (&m % p).is_zero() {
            let mut e = 0;
            while (&m % p).is_zero() {
                m /= p;
                e += 1;
            }
            found.insert(BigUint::from(p), e);
        }
    }
    if !m.is_one() {
        let limit = TRIAL_LIMIT as u64;
        if m.to_u64().is_some_and(|s| s < limit * limit) {
            *found.entry(m).or_insert(0) += 1;
        } else {
            split_composite(m, &mut found);
        }
    }
    Factorization {
        sign,
        factors: found
            .into_iter()
            .map(|(p, e)| (BigInt::from(p), e))
            .collect(),
    }
}

/// Kronecker symbol `(a/n)`, with `(a/2) = 0` for even `a`, `+1` for
/// `a = ±1 (mod 8)` and `-1` for `a = ±3 (mod 8)`.
pub fn kronecker(a: i64, n: i64) -> i8 {
    let mut a = a as i128;
    let mut n = n as i128;
    if n == 0 {
        return if a.abs() == 1 { 1 } else { 0 };
    }
    let mut result = 1i8;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    let twos = n.trailing_zeros();
    if twos > 0 {
        if a % 2 == 0 {
            return 0;
        }
        if twos % 2 == 1 && matches!(a.rem_euclid(8), 3 | 5) {
            result = -result;
        }
        n >>= twos;
    }
    // n is now odd and positive: Jacobi symbol
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Square root of `a` modulo an odd prime `p` by Tonelli-Shanks.
///
/// Returns the smaller of the two roots, or `None` for a non-residue.
pub fn sqrt_mod(a: i64, p: u64) -> Option<u64> {
    let a = (a as i128).rem_euclid(p as i128) as u64;
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let root = if p % 4 == 3 {
        pow_mod(a, (p + 1) / 4, p)
    } else {
        let s = (p - 1).trailing_zeros();
        let q = (p - 1) >> s;
        let z = (2..p)
            .find(|&z| pow_mod(z, (p - 1) / 2, p) == p - 1)
            .expect("a non-residue exists modulo an odd prime");
        let mut m = s;
        let mut c = pow_mod(z, q, p);
        let mut t = pow_mod(a, q, p);
        let mut r = pow_mod(a, (q + 1) / 2, p);
        while t != 1 {
            let mut i = 0;
            let mut t2 = t;
            while t2 != 1 {
                t2 = mul_mod(t2, t2, p);
                i += 1;
            }
            let b = pow_mod(c, 1 << (m - i - 1), p);
            m = i;
            c = mul_mod(b, b, p);
            t = mul_mod(t, c, p);
            r = mul_mod(r, b, p);
        }
        r
    };
    Some(root.min(p - root))
}

/// [`sqrt_mod`] for an arbitrary odd prime `p`.
pub fn sqrt_mod_big(a: &BigInt, p: &BigInt) -> Option<BigInt> {
    if let (Some(pu), Some(au)) = (p.to_u64(), a.mod_floor(p).to_i64()) {
        return sqrt_mod(au, pu).map(BigInt::from);
    }
    let a = a.mod_floor(p);
    let one = BigInt::one();
    let pm1 = p - 1u32;
    if a.is_zero() {
        return Some(a);
    }
    if a.modpow(&(&pm1 >> 1), p) != one {
        return None;
    }
    let s = pm1.trailing_zeros().expect("p > 1");
    let q = &pm1 >> s;
    let mut z = BigInt::from(2);
    while z.modpow(&(&pm1 >> 1), p) != pm1 {
        z += 1u32;
    }
    let mut m = s;
    let mut c = z.modpow(&q, p);
    let mut t = a.modpow(&q, p);
    let mut r = a.modpow(&((&q + 1u32) >> 1), p);
    while t != one {
        let mut i = 0;
        let mut t2 = t.clone();
        while t2 != one {
            t2 = &t2 * &t2 % p;
            i += 1;
        }
        let b = c.modpow(&(BigInt::one() << (m - i - 1)), p);
        m = i;
        c = &b * &b % p;
        t = t * &c % p;
        r = r * &b % p;
    }
    let other = p - &r;
    Some(r.min(other))
}

/// True iff no prime square divides `n`.
pub fn is_squarefree(n: u64) -> bool {
    if n == 0 {
        return false;
    }
    factorize(&BigInt::from(n))
        .factors
        .iter()
        .all(|(_, e)| *e == 1)
}

/// Exact signed cube root, if `n` is a perfect cube.
pub fn exact_cbrt(n: &BigInt) -> Option<BigInt> {
    let r = n.cbrt();
    (&r * &r * &r == *n).then_some(r)
}

/// Exact square root of a nonnegative integer, if it is a perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Largest `k` with `p^k | n`; `n` must be nonzero.
pub fn valuation(n: &BigInt, p: u64) -> u32 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut m = n.clone();
    let mut k = 0;
    loop {
        let (q, r) = m.div_rem(&p);
        if !r.is_zero() {
            return k;
        }
        m = q;
        k += 1;
    }
}

fn monotone_zero(lo: &BigInt, hi: &BigInt, f: impl Fn(&BigInt) -> BigInt) -> Option<BigInt> {
    let (mut lo, mut hi) = (lo.clone(), hi.clone());
    while lo <= hi {
        let mid: BigInt = (&lo + &hi).div_floor(&BigInt::from(2));
        let v = f(&mid);
        if v.is_zero() {
            return Some(mid);
        }
        if v.is_negative() {
            lo = mid + 1u32;
        } else {
            hi = mid - 1u32;
        }
    }
    None
}

/// Integer roots of `x³ + px + q` in increasing order.
pub fn depressed_cubic_integer_roots(p: &BigInt, q: &BigInt) -> Vec<BigInt> {
    let f = |x: &BigInt| x * x * x + p * x + q;
    let bound = p.abs().max(q.abs()) + 1u32;
    let mut roots = Vec::new();
    if !p.is_negative() {
        roots.extend(monotone_zero(&-&bound, &bound, f));
    } else {
        // increasing outside [-c', c'] with c' = √(-p/3), decreasing inside;
        // c = isqrt(⌊-p/3⌋) satisfies c ≤ c' < c + 1
        let c = (-p / 3u32).sqrt();
        roots.extend(monotone_zero(&-&bound, &(-&c - 1u32), f));
        roots.extend(monotone_zero(&-&c, &c, |x| -f(x)));
        roots.extend(monotone_zero(&(&c + 1u32), &bound, f));
    }
    roots.sort();
    roots.dedup();
    roots
}
