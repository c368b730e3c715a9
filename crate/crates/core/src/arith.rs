//! Small integer helpers: trial-division factorisation, unit groups,
//! fundamental discriminants.

use num_integer::Integer;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            return false;
        }
        p += 1;
    }
    true
}

/// Prime factorisation as `(p, exponent)` pairs in increasing `p`.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut k = 0;
            while n.is_multiple_of(p) {
                n /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn smallest_prime_factor(n: u64) -> Option<u64> {
    factorize(n).first().map(|&(p, _)| p)
}

/// Residues in `1..n` coprime to `n`; `[0]` when `n == 1`.
pub fn units_mod(n: u64) -> Vec<u64> {
    if n <= 1 {
        return vec![0];
    }
    (1..n).filter(|k| k.gcd(&n) == 1).collect()
}

pub fn lcm_up_to(n: u64) -> u64 {
    (1..=n.max(1)).fold(1u64, |acc, k| acc.lcm(&k))
}

pub fn factorial(n: u64) -> u64 {
    (1..=n).product::<u64>().max(1)
}

pub fn is_squarefree(n: u64) -> bool {
    factorize(n).iter().all(|&(_, k)| k == 1)
}

/// Fundamental discriminant of `Q(sqrt(n))` for a nonzero non-square `n`.
/// Returns `None` when `n` is a perfect square (the field is `Q`).
pub fn fundamental_discriminant(n: i64) -> Option<i64> {
    assert!(n != 0, "zero has no quadratic field");
    let sign = n.signum();
    let mut core = 1i64;
    for (p, k) in factorize(n.unsigned_abs()) {
        if k % 2 == 1 {
            core *= p as i64;
        }
    }
    let core = sign * core;
    if core == 1 {
        return None;
    }
    Some(if core.rem_euclid(4) == 1 { core } else { 4 * core })
}

/// Whether `d` is the discriminant of a quadratic field.
pub fn is_fundamental_discriminant(d: i64) -> bool {
    d != 0 && d != 1 && fundamental_discriminant(d) == Some(d)
}

/// `p`-adic valuation of a nonzero integer.
pub fn valuation(mut n: u64, p: u64) -> u32 {
    assert!(n != 0 && p >= 2);
    let mut k = 0;
    while n.is_multiple_of(p) {
        n /= p;
        k += 1;
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorisation() {
        assert_eq!(factorize(1), vec![]);
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factorize(97), vec![(97, 1)]);
        assert_eq!(smallest_prime_factor(35), Some(5));
    }

    #[test]
    fn fundamental_discriminants() {
        assert_eq!(fundamental_discriminant(-23), Some(-23));
        assert_eq!(fundamental_discriminant(-44), Some(-11));
        assert_eq!(fundamental_discriminant(-4), Some(-4));
        assert_eq!(fundamental_discriminant(148), Some(37));
        assert_eq!(fundamental_discriminant(-108), Some(-3));
        assert_eq!(fundamental_discriminant(12), Some(12));
        assert_eq!(fundamental_discriminant(49), None);
        assert!(is_fundamental_discriminant(-8));
        assert!(is_fundamental_discriminant(5));
        assert!(!is_fundamental_discriminant(-44));
        assert!(!is_fundamental_discriminant(1));
    }

    #[test]
    fn units() {
        assert_eq!(units_mod(12), vec![1, 5, 7, 11]);
        assert_eq!(units_mod(1), vec![0]);
        assert_eq!(lcm_up_to(5), 60);
    }
}
