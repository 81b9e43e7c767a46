//! Small integer helpers.

use num_integer::Integer;

/// Prime factorization as `(p, k)` pairs with increasing `p`.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut factors = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n % p == 0 {
            let mut k = 0;
            while n % p == 0 {
                n /= p;
                k += 1;
            }
            factors.push((p, k));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        factors.push((n, 1));
    }
    factors
}

/// gcd of all values; 0 for an empty input.
pub fn gcd_all<I: IntoIterator<Item = u64>>(values: I) -> u64 {
    values.into_iter().fold(0, |acc, v| acc.gcd(&v))
}

/// Chinese remaindering for pairwise coprime moduli.
pub fn crt_combine(residues: &[u64], moduli: &[u64]) -> Option<u64> {
    let mut value: u128 = 0;
    let mut modulus: u128 = 1;
    for (&r, &m) in residues.iter().zip(moduli) {
        if r >= m {
            return None;
        }
        let (m, r) = (m as u128, r as u128);
        // find t with value + modulus * t ≡ r (mod m)
        let inv = mod_inverse((modulus % m) as i128, m as i128)? as u128;
        let diff = (r + m - value % m) % m;
        let t = diff * inv % m;
        value += modulus * t;
        modulus *= m;
    }
    u64::try_from(value).ok()
}

fn mod_inverse(a: i128, m: i128) -> Option<i128> {
    if m == 1 {
        return Some(0);
    }
    let g = a.extended_gcd(&m);
    (g.gcd == 1).then(|| g.x.rem_euclid(m))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorizations() {
        assert_eq!(factorize(12), vec![(2, 2), (3, 1)]);
        assert_eq!(factorize(9), vec![(3, 2)]);
        assert_eq!(factorize(97), vec![(97, 1)]);
        assert_eq!(factorize(1), vec![]);
    }

    #[test]
    fn chinese_remainders() {
        assert_eq!(crt_combine(&[1, 2], &[2, 3]), Some(5));
        assert_eq!(crt_combine(&[3, 1], &[4, 3]), Some(7));
        assert_eq!(crt_combine(&[2, 0], &[2, 3]), None);
        for x in 0..60 {
            assert_eq!(crt_combine(&[x % 4, x % 3, x % 5], &[4, 3, 5]), Some(x));
        }
    }

    #[test]
    fn gcds() {
        assert_eq!(gcd_all([6, 4, 1, 4]), 1);
        assert_eq!(gcd_all([4, 2]), 2);
        assert_eq!(gcd_all([]), 0);
    }
}
