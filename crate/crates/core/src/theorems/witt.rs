//! Counting basic commutators: the necklace formula and a Lyndon-word oracle.

/// Möbius function.
pub fn mobius(n: u64) -> i64 {
    assert!(n >= 1);
    let mut n = n;
    let mut sign = 1;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return 0;
            }
            sign = -sign;
        }
        d += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// `(1/n) sum_{d | n} mu(d) r^{n/d}`, exact. Panics on overflow or if the sum
/// is not divisible by `n`.
pub fn witt_count(r: u64, n: u64) -> u64 {
    assert!(r >= 1 && n >= 1);
    let sum = witt_sum(r, n);
    assert_eq!(sum % n as i128, 0, "necklace sum not divisible by {n}");
    (sum / n as i128) as u64
}

/// `sum_{d | n} mu(d) r^{n/d}`.
pub fn witt_sum(r: u64, n: u64) -> i128 {
    (1..=n)
        .filter(|d| n.is_multiple_of(*d))
        .map(|d| {
            let term = (r as i128)
                .checked_pow((n / d) as u32)
                .expect("witt term overflows");
            mobius(d) as i128 * term
        })
        .sum()
}

/// Number of Lyndon words of length `n` over an alphabet of size `r`, by
/// enumerating every word and testing it directly.
pub fn lyndon_count_brute(r: u64, n: u64) -> u64 {
    let n = n as usize;
    let total = (r as u128).pow(n as u32);
    assert!(total <= 1 << 24, "brute-force range too large");
    let mut word = vec![0u64; n];
    let mut count = 0;
    for mut code in 0..total {
        for slot in word.iter_mut().rev() {
            *slot = (code % r as u128) as u64;
            code /= r as u128;
        }
        if is_lyndon(&word) {
            count += 1;
        }
    }
    count
}

/// Strictly smaller than every proper rotation.
fn is_lyndon(w: &[u64]) -> bool {
    let n = w.len();
    (1..n).all(|s| {
        let rotated = w[s..].iter().chain(&w[..s]);
        w.iter().lt(rotated)
    })
}
