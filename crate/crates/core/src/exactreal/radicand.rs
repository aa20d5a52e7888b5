//! Squarefree decomposition of radicands.
//!
//! Small factors are removed by trial division up to [`TRIAL_LIMIT`]. Whatever
//! survives has only large prime factors and is finished off with a
//! perfect-square test, Miller–Rabin, and Pollard–Brent splitting.

use alloc::vec::Vec;
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

pub const TRIAL_LIMIT: u64 = 1_000_000;

/// Splits `m` as `root² · kernel` with `kernel` squarefree.
///
/// `m = 0` returns `(0, 1)` so that callers can treat the zero radicand
/// uniformly.
pub fn squarefree_split(m: &BigUint) -> (BigUint, BigUint) {
    if m.is_zero() {
        return (BigUint::zero(), BigUint::one());
    }
    let (mut root, mut kernel, rest) = match m.to_u64() {
        Some(small) => {
            let (r, k, rest) = trial_divide_u64(small);
            (BigUint::from(r), BigUint::from(k), BigUint::from(rest))
        }
        None => trial_divide_big(m),
    };

    if !rest.is_one() {
        let mut primes = Vec::new();
        collect_large_primes(rest, &mut primes);
        primes.sort();
        let mut i = 0;
        while i < primes.len() {
            let mut j = i;
            while j < primes.len() && primes[j] == primes[i] {
                j += 1;
            }
            let count = j - i;
            for _ in 0..count / 2 {
                root *= &primes[i];
            }
            if count % 2 == 1 {
                kernel *= &primes[i];
            }
            i = j;
        }
    }
    (root, kernel)
}

// Returns (root, kernel, cofactor); the cofactor is 1 or has only prime
// factors above the trial limit.
fn trial_divide_u64(mut m: u64) -> (u64, u64, u64) {
    let mut root: u64 = 1;
    let mut kernel: u64 = 1;
    let mut f: u64 = 2;
    while f <= TRIAL_LIMIT && f.saturating_mul(f) <= m {
        if m.is_multiple_of(f) {
            let mut e = 0u32;
            while m.is_multiple_of(f) {
                m /= f;
                e += 1;
            }
            root *= f.pow(e / 2);
            if e % 2 == 1 {
                kernel *= f;
            }
        }
        f += if f == 2 { 1 } else { 2 };
    }
    if f.saturating_mul(f) > m {
        // m is 1 or prime
        if m > 1 {
            kernel *= m;
        }
        return (root, kernel, 1);
    }
    (root, kernel, m)
}

fn trial_divide_big(m: &BigUint) -> (BigUint, BigUint, BigUint) {
    let mut m = m.clone();
    let mut root = BigUint::one();
    let mut kernel = BigUint::one();
    let mut f: u64 = 2;
    while f <= TRIAL_LIMIT {
        let fb = BigUint::from(f);
        if (&fb * &fb) > m {
            break;
        }
        let mut e = 0u32;
        loop {
            let (q, r) = m.div_rem(&fb);
            if !r.is_zero() {
                break;
            }
            m = q;
            e += 1;
        }
        if e > 0 {
            root *= fb.pow(e / 2);
            if e % 2 == 1 {
                kernel *= &fb;
            }
        }
        f += if f == 2 { 1 } else { 2 };
    }
    let fb = BigUint::from(f);
    if &fb * &fb > m {
        if !m.is_one() {
            kernel *= &m;
        }
        return (root, kernel, BigUint::one());
    }
    (root, kernel, m)
}

fn collect_large_primes(m: BigUint, out: &mut Vec<BigUint>) {
    if m.is_one() {
        return;
    }
    let r = m.sqrt();
    if &r * &r == m {
        let mut sub = Vec::new();
        collect_large_primes(r, &mut sub);
        for p in sub {
            out.push(p.clone());
            out.push(p);
        }
        return;
    }
    if is_probable_prime(&m) {
        out.push(m);
        return;
    }
    let d = pollard_brent(&m);
    let other = &m / &d;
    collect_large_primes(d, out);
    collect_large_primes(other, out);
}

const WITNESSES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Miller–Rabin with the first thirteen primes as bases; deterministic below
/// 3.3·10²⁴.
pub fn is_probable_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if n < &two {
        return false;
    }
    for &w in WITNESSES.iter() {
        let w = BigUint::from(w);
        if n == &w {
            return true;
        }
        if (n % &w).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - 1u32;
    let mut d = n_minus_1.clone();
    let mut s = 0u32;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    'outer: for &w in WITNESSES.iter() {
        let mut x = BigUint::from(w).modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

// Finds a nontrivial factor of a composite `n` with no small factors.
fn pollard_brent(n: &BigUint) -> BigUint {
    let mut c = BigUint::one();
    loop {
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut r: u64 = 1;
        let mut q = BigUint::one();
        let mut g = BigUint::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        let m: u64 = 64;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..m.min(r - k) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += m;
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if &g != n {
            return g;
        }
        c += 1u32;
    }
}
