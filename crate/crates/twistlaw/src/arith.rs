//! Integer helpers: primality, factorization and p-adic valuations of rationals.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::Error;

const SMALL_PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL_PRIMES {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod_u64(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod_u64(r, a, m);
        }
        a = mul_mod_u64(a, a, m);
        e >>= 1;
    }
    r
}

/// Probable-prime test for big integers (deterministic below 2^64).
pub fn is_prime(n: &BigInt) -> bool {
    if n.sign() != Sign::Plus {
        return false;
    }
    if let Some(m) = n.to_u64() {
        return is_prime_u64(m);
    }
    let n = n.magnitude();
    for &p in &SMALL_PRIMES {
        if (n % p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53] {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: &BigUint, budget: &mut u64) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    let one = BigUint::one();
    for c in 1u32.. {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut x = BigUint::from(2u32);
        let mut y = x.clone();
        let mut d = one.clone();
        while d == one {
            if *budget == 0 {
                return None;
            }
            *budget -= 1;
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            d = diff.gcd(n);
        }
        if &d != n {
            return Some(d);
        }
    }
    None
}

/// Distinct prime divisors of a nonzero integer, sorted.
///
/// Trial division to 10^4, then Pollard rho. `budget` caps the number of rho
/// iterations; exceeding it yields `FactorizationTimeout` with the cofactor.
pub fn prime_divisors(n: &BigInt, budget: u64) -> Result<Vec<BigInt>, Error> {
    let mut out = Vec::new();
    let mut m = n.magnitude().clone();
    if m.is_zero() {
        return Err(Error::Validation("cannot factor zero".into()));
    }
    let mut p = 2u64;
    while p < 10_000 {
        if (&m % p).is_zero() {
            out.push(BigInt::from(p));
            while (&m % p).is_zero() {
                m /= p;
            }
        }
        if BigUint::from(p * p) > m {
            break;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let mut budget = budget;
    let mut stack = vec![m];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        let mi = BigInt::from(m.clone());
        if is_prime(&mi) {
            out.push(mi);
            continue;
        }
        match pollard_rho(&m, &mut budget) {
            Some(d) => {
                let mut rest = m.clone();
                while (&rest % &d).is_zero() {
                    rest /= &d;
                }
                stack.push(d);
                stack.push(rest);
            }
            None => return Err(Error::FactorizationTimeout(mi.to_string())),
        }
    }
    out.sort();
    out.dedup();
    // rho may return composite splits that share primes; normalize
    let mut primes: Vec<BigInt> = Vec::new();
    for q in out {
        if is_prime(&q) {
            primes.push(q);
        } else {
            primes.extend(prime_divisors(&q, budget)?);
        }
    }
    primes.sort();
    primes.dedup();
    Ok(primes)
}

/// v_p(n) for nonzero n.
pub fn val_int(n: &BigInt, p: &BigInt) -> i64 {
    assert!(!n.is_zero());
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// v_p of a nonzero rational.
pub fn val_rat(x: &BigRational, p: &BigInt) -> i64 {
    val_int(x.numer(), p) - val_int(x.denom(), p)
}

/// Modular inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}

pub fn pow_big(p: &BigInt, k: u32) -> BigInt {
    num_traits::pow(p.clone(), k as usize)
}

/// Parses "a", "-a" or "a/b" as an exact rational. Decimal points and exponents are rejected.
pub fn parse_rational(s: &str) -> Result<BigRational, Error> {
    let t = s.trim();
    if t.is_empty() || t.contains(['.', 'e', 'E']) {
        return Err(Error::Validation(format!("not an exact rational: {s:?}")));
    }
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = n
        .parse()
        .map_err(|_| Error::Validation(format!("not an exact rational: {s:?}")))?;
    let d: BigInt = d
        .parse()
        .map_err(|_| Error::Validation(format!("not an exact rational: {s:?}")))?;
    if d.is_zero() {
        return Err(Error::Validation(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(n, d))
}

pub fn rat_to_string(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn is_negative(x: &BigRational) -> bool {
    x.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primes() {
        let ps: Vec<u64> = (0..60).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]);
        assert!(is_prime_u64(4561));
        assert!(!is_prime_u64(3215031751));
    }

    #[test]
    fn factor_semiprime() {
        let n = BigInt::from(1_000_003u64) * BigInt::from(998_244_353u64) * BigInt::from(-8);
        let ps = prime_divisors(&n, 1 << 20).unwrap();
        assert_eq!(ps, vec![BigInt::from(2), BigInt::from(1_000_003u64), BigInt::from(998_244_353u64)]);
    }

    #[test]
    fn parse() {
        assert_eq!(parse_rational("-67/4").unwrap(), BigRational::new((-67).into(), 4.into()));
        assert!(parse_rational("1.5").is_err());
        assert!(parse_rational("1e3").is_err());
        assert!(parse_rational("3/0").is_err());
    }

    #[test]
    fn valuations() {
        let x = BigRational::new(BigInt::from(-14641), BigInt::from(4));
        assert_eq!(val_rat(&x, &BigInt::from(11)), 4);
        assert_eq!(val_rat(&x, &BigInt::from(2)), -2);
    }
}
