//! Exact integer and modular arithmetic on `u64` operands.
//!
//! Factorization runs trial division up to 10^6 and falls back to Brent's
//! cycle method with deterministic Miller–Rabin primality for the 64-bit
//! range. Modular square roots are assembled per prime power (Tonelli–Shanks
//! plus Hensel lifting, explicit 2-adic case analysis) and combined by CRT.
//! All intermediate products go through `u128`, so moduli up to 2^63 − 1
//! are safe.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ArithError {
    /// `factorize(0)` and friends.
    ZeroInput,
    /// `inv_mod(a, r)` with `gcd(a, r) > 1`.
    NotInvertible { a: u64, modulus: u64 },
}

impl fmt::Display for ArithError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArithError::ZeroInput => write!(f, "input must be a positive integer"),
            ArithError::NotInvertible { a, modulus } => {
                write!(f, "{a} has no inverse modulo {modulus}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ArithError {}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    debug_assert!(m > 0);
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for the full `u64` range.
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
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    // This base set is known to decide primality for all n < 3.3 * 10^24.
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Brent-variant Pollard rho; `n` must be composite, odd, and > 1.
fn pollard_rho(n: u64) -> u64 {
    debug_assert!(n > 1 && n % 2 == 1 && !is_prime(n));
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let mut x = 2u64;
        let mut y = 2u64;
        let mut d = 1u64;
        let mut q = 1u64;
        let mut count = 0u32;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            q = mul_mod(q, x.abs_diff(y) % n, n);
            count += 1;
            if count % 64 == 0 || q == 0 {
                d = gcd(if q == 0 { x.abs_diff(y) } else { q }, n);
                q = 1;
            }
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

const TRIAL_LIMIT: u64 = 1_000_000;

/// Prime factorization with strictly increasing primes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    n: u64,
    factors: Vec<(u64, u32)>,
}

pub fn factorize(n: u64) -> Result<Factorization, ArithError> {
    if n == 0 {
        return Err(ArithError::ZeroInput);
    }
    let mut rest = n;
    let mut factors: Vec<(u64, u32)> = Vec::new();
    let mut push = |p: u64, k: u32| {
        if k > 0 {
            factors.push((p, k));
        }
    };
    let mut k = 0;
    while rest % 2 == 0 {
        rest /= 2;
        k += 1;
    }
    push(2, k);
    let mut p = 3u64;
    while p <= TRIAL_LIMIT && p * p <= rest {
        let mut k = 0;
        while rest % p == 0 {
            rest /= p;
            k += 1;
        }
        push(p, k);
        p += 2;
    }
    if rest > 1 {
        // Whatever remains has no factor below 10^6: a prime, or a product
        // of at most three such primes handled by rho splitting.
        let mut stack = vec![rest];
        let mut large: Vec<u64> = Vec::new();
        while let Some(m) = stack.pop() {
            if is_prime(m) {
                large.push(m);
            } else {
                let d = pollard_rho(m);
                stack.push(d);
                stack.push(m / d);
            }
        }
        large.sort_unstable();
        let mut i = 0;
        while i < large.len() {
            let p = large[i];
            let mut k = 0;
            while i < large.len() && large[i] == p {
                k += 1;
                i += 1;
            }
            factors.push((p, k));
        }
    }
    factors.sort_unstable_by_key(|&(p, _)| p);
    debug_assert_eq!(
        factors.iter().fold(1u128, |acc, &(p, k)| acc * (p as u128).pow(k)),
        n as u128
    );
    Ok(Factorization { n, factors })
}

impl Factorization {
    pub fn of(n: u64) -> Result<Self, ArithError> {
        factorize(n)
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// Number of divisors.
    pub fn tau(&self) -> u64 {
        self.factors.iter().map(|&(_, k)| k as u64 + 1).product()
    }

    /// Number of distinct prime divisors.
    pub fn omega(&self) -> u32 {
        self.factors.len() as u32
    }

    /// Möbius function value in `{-1, 0, 1}`.
    pub fn mu(&self) -> i8 {
        if self.factors.iter().any(|&(_, k)| k > 1) {
            0
        } else if self.factors.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Euler totient.
    pub fn phi(&self) -> u64 {
        self.factors
            .iter()
            .fold(1u64, |acc, &(p, k)| acc * (p - 1) * p.pow(k - 1))
    }

    /// The largest `s` with `s^2 | n`.
    pub fn square_part_root(&self) -> u64 {
        self.factors.iter().fold(1u64, |acc, &(p, k)| acc * p.pow(k / 2))
    }

    /// All divisors, sorted increasing.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, k) in &self.factors {
            let prev = divs.clone();
            let mut pe = 1u64;
            for _ in 0..k {
                pe *= p;
                divs.extend(prev.iter().map(|d| d * pe));
            }
        }
        divs.sort_unstable();
        divs
    }
}

/// The standard multiplicative statistics of `n` in one pass.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MultiplicativeProfile {
    pub tau: u64,
    pub omega: u32,
    pub mu: i8,
    pub phi: u64,
    /// Largest `s` with `s^2 | n`.
    pub square_part_root: u64,
}

pub fn mult_functions(n: u64) -> Result<MultiplicativeProfile, ArithError> {
    let f = factorize(n)?;
    Ok(MultiplicativeProfile {
        tau: f.tau(),
        omega: f.omega(),
        mu: f.mu(),
        phi: f.phi(),
        square_part_root: f.square_part_root(),
    })
}

/// Modular inverse via extended Euclid; `inv_mod(1, 1) == 0`.
pub fn inv_mod(a: u64, r: u64) -> Result<u64, ArithError> {
    if r == 0 {
        return Err(ArithError::ZeroInput);
    }
    if r == 1 {
        return Ok(0);
    }
    let (mut old_r, mut cur_r) = (a as i128 % r as i128, r as i128);
    let (mut old_s, mut cur_s) = (1i128, 0i128);
    while cur_r != 0 {
        let q = old_r / cur_r;
        (old_r, cur_r) = (cur_r, old_r - q * cur_r);
        (old_s, cur_s) = (cur_s, old_s - q * cur_s);
    }
    if old_r != 1 {
        return Err(ArithError::NotInvertible { a, modulus: r });
    }
    Ok(old_s.rem_euclid(r as i128) as u64)
}

/// Sorted distinct residues modulo a fixed modulus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueSet {
    modulus: u64,
    elements: Vec<u64>,
}

impl ResidueSet {
    pub fn new(modulus: u64, mut elements: Vec<u64>) -> Self {
        assert!(modulus >= 1);
        elements.sort_unstable();
        elements.dedup();
        debug_assert!(elements.iter().all(|&x| x < modulus));
        ResidueSet { modulus, elements }
    }

    pub fn empty(modulus: u64) -> Self {
        ResidueSet { modulus, elements: Vec::new() }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn iter(&self) -> core::slice::Iter<'_, u64> {
        self.elements.iter()
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.elements
    }
}

/// A residue folded into the symmetric window `(-r/2, r/2]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SymmetricResidue {
    pub value: i64,
    pub modulus: u64,
}

impl SymmetricResidue {
    pub fn of(residue: u64, modulus: u64) -> Self {
        assert!(modulus >= 1);
        let x = residue % modulus;
        let value = if 2 * (x as u128) > modulus as u128 {
            x as i64 - modulus as i64
        } else {
            x as i64
        };
        SymmetricResidue { value, modulus }
    }
}

/// Tonelli–Shanks square root of a unit modulo an odd prime, deterministic
/// (the non-residue is found by increasing scan).
fn sqrt_unit_mod_prime(a: u64, p: u64) -> Option<u64> {
    debug_assert!(p % 2 == 1 && a % p != 0);
    let a = a % p;
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    let mut z = 2u64;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut q = p - 1;
    let mut s = 0u32;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0u32;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let mut b = c;
        for _ in 0..(m - i - 1) {
            b = mul_mod(b, b, p);
        }
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// Square roots of a unit modulo `p^k`, `gcd(a, p) = 1`.
fn sqrt_unit_mod_prime_power(a: u64, p: u64, k: u32) -> Vec<u64> {
    let q = p.pow(k);
    let a = a % q;
    if p == 2 {
        return match k {
            1 => vec![1],
            2 => {
                if a % 4 == 1 {
                    vec![1, 3]
                } else {
                    vec![]
                }
            }
            _ => {
                if a % 8 != 1 {
                    return vec![];
                }
                // Lift x with x^2 ≡ a (mod 2^j) to 2^(j+1): adding 2^(j-1)
                // flips the failing bit since (x + 2^(j-1))^2 = x^2 + 2^j x
                // modulo 2^(j+1) for j ≥ 3 and odd x.
                let mut x = 1u64;
                for j in 3..k {
                    let next = 1u64 << (j + 1);
                    if mul_mod(x, x, next) != a % next {
                        x += 1 << (j - 1);
                    }
                }
                let half = q / 2;
                vec![x, q - x, (x + half) % q, (q - x + half) % q]
            }
        };
    }
    let root_p = match sqrt_unit_mod_prime(a % p, p) {
        Some(r) => r,
        None => return vec![],
    };
    // Hensel: the derivative 2x is a unit, so each step lifts uniquely.
    let mut x = root_p;
    let mut pj = p;
    for _ in 1..k {
        let pj1 = pj * p;
        let x_sq = ((x as u128 * x as u128) % pj1 as u128) as u64;
        let diff = (a % pj1 + pj1 - x_sq) % pj1;
        debug_assert_eq!(diff % pj, 0);
        let t = mul_mod(diff / pj, inv_mod(mul_mod(2, x, p), p).expect("2x unit"), p);
        x += mul_mod(t, 1, p) * pj;
        debug_assert!(x < pj1);
        pj = pj1;
    }
    vec![x, q - x]
}

/// All solutions of `x^2 ≡ m (mod p^k)`, including the degenerate branches
/// where `p` divides `m`. The result can legitimately be empty.
pub fn sqrt_mod_prime_power(m: u64, p: u64, k: u32) -> ResidueSet {
    assert!(k >= 1);
    debug_assert!(is_prime(p));
    let q = p.pow(k);
    let m = m % q;
    if m == 0 {
        // x^2 ≡ 0 (mod p^k) iff p^ceil(k/2) | x.
        let step = p.pow(k.div_ceil(2));
        let count = p.pow(k / 2);
        return ResidueSet::new(q, (0..count).map(|c| c * step).collect());
    }
    let mut l = 0u32;
    let mut m0 = m;
    while m0 % p == 0 {
        m0 /= p;
        l += 1;
    }
    if l % 2 == 1 {
        return ResidueSet::empty(q);
    }
    let base = sqrt_unit_mod_prime_power(m0, p, k - l);
    if base.is_empty() {
        return ResidueSet::empty(q);
    }
    // Every solution is x = p^(l/2) * (x0 + c * p^(k-l)) with x0 a unit root
    // modulo p^(k-l) and 0 ≤ c < p^(l/2).
    let scale = p.pow(l / 2);
    let q0 = p.pow(k - l);
    let mut roots = Vec::with_capacity(base.len() * scale as usize);
    for x0 in base {
        for c in 0..scale {
            roots.push(scale * (x0 + c * q0));
        }
    }
    ResidueSet::new(q, roots)
}

/// All solutions of `x^2 ≡ m (mod r)`, assembled by CRT over the prime-power
/// components of `r`.
pub fn sqrt_mod(m: u64, r: &Factorization) -> ResidueSet {
    let n = r.n();
    let m = m % n.max(1);
    let mut residues: Vec<u64> = vec![0];
    let mut modulus: u64 = 1;
    for &(p, k) in r.factors() {
        let q = p.pow(k);
        let comp = sqrt_mod_prime_power(m % q, p, k);
        if comp.is_empty() {
            return ResidueSet::empty(n);
        }
        let inv = inv_mod(modulus % q, q).expect("coprime CRT moduli");
        let mut next = Vec::with_capacity(residues.len() * comp.len());
        for &x in &residues {
            for &y in comp.iter() {
                // z ≡ x (mod modulus), z ≡ y (mod q)
                let delta = ((y + q - x % q) % q) as u128;
                let z = x as u128 + modulus as u128 * ((delta * inv as u128) % q as u128);
                next.push(z as u64);
            }
        }
        residues = next;
        modulus *= q;
    }
    debug_assert_eq!(modulus, n);
    ResidueSet::new(n, residues)
}

/// `s(r; m)`: the number of modular square roots of `m` modulo `r`.
///
/// Computed as the product of per-prime-power root counts; equal to
/// `sqrt_mod(m, r).len()` by the CRT bijection.
pub fn root_count(r: &Factorization, m: u64) -> u64 {
    let mut count = 1u64;
    let m = m % r.n().max(1);
    for &(p, k) in r.factors() {
        let q = p.pow(k);
        count *= sqrt_mod_prime_power(m % q, p, k).len() as u64;
        if count == 0 {
            return 0;
        }
    }
    count
}
