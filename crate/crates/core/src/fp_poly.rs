//! Small dense polynomial routines over the prime field F_p, used to
//! validate and pick the polynomial defining the residue field.

fn trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn inv_mod_p(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = ((acc as u128 * base as u128) % m as u128) as u64;
        }
        base = ((base as u128 * base as u128) % m as u128) as u64;
        exp >>= 1;
    }
    acc
}

/// Remainder of `a` modulo the nonzero polynomial `m`.
fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    trim(&mut a);
    let mut m = m.to_vec();
    trim(&mut m);
    let dm = m.len() - 1;
    let lead_inv = inv_mod_p(m[dm], p);
    while a.len() > dm {
        let da = a.len() - 1;
        let q = a[da] * lead_inv % p;
        for (k, &mk) in m.iter().enumerate() {
            let idx = da - dm + k;
            a[idx] = (a[idx] + p - q * mk % p) % p;
        }
        trim(&mut a);
    }
    a
}

fn mul_rem(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    rem(&out, m, p)
}

/// x^(p^k) mod m, by k successive Frobenius powers.
fn x_pow_p_pow(k: u32, m: &[u64], p: u64) -> Vec<u64> {
    let mut cur = rem(&[0, 1], m, p);
    for _ in 0..k {
        let mut acc = vec![1u64];
        let mut base = cur.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_rem(&acc, &base, m, p);
            }
            base = mul_rem(&base, &base, m, p);
            e >>= 1;
        }
        cur = acc;
    }
    cur
}

fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn sub_x(a: &[u64], p: u64) -> Vec<u64> {
    let mut out = a.to_vec();
    if out.len() < 2 {
        out.resize(2, 0);
    }
    out[1] = (out[1] + p - 1) % p;
    trim(&mut out);
    out
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's irreducibility test for a monic polynomial over F_p.
pub(crate) fn is_irreducible(h: &[u64], p: u64) -> bool {
    let mut h: Vec<u64> = h.iter().map(|c| c % p).collect();
    trim(&mut h);
    if h.len() < 2 {
        return false;
    }
    let r = (h.len() - 1) as u64;
    if r == 1 {
        return true;
    }
    if !sub_x(&x_pow_p_pow(r as u32, &h, p), p).is_empty() {
        return false;
    }
    prime_factors(r).into_iter().all(|q| {
        let t = sub_x(&x_pow_p_pow((r / q) as u32, &h, p), p);
        gcd(&h, &t, p).len() == 1
    })
}

/// Lexicographically smallest monic irreducible polynomial of degree `r`.
pub(crate) fn default_irreducible(r: usize, p: u64) -> Vec<u64> {
    if r == 1 {
        return vec![0, 1];
    }
    let mut coeffs = vec![0u64; r];
    loop {
        let mut h = coeffs.clone();
        h.push(1);
        if is_irreducible(&h, p) {
            return h;
        }
        // odometer increment over the lower coefficients
        let mut k = 0;
        loop {
            coeffs[k] += 1;
            if coeffs[k] < p {
                break;
            }
            coeffs[k] = 0;
            k += 1;
        }
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    n >= 2 && prime_factors(n) == [n]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn irreducibility() {
        // x^2 + 1 over F_3 is irreducible, over F_5 it splits
        assert!(is_irreducible(&[1, 0, 1], 3));
        assert!(!is_irreducible(&[1, 0, 1], 5));
        assert!(is_irreducible(&[1, 1, 1], 2));
        assert!(!is_irreducible(&[0, 1, 1], 2));
        // x^4 + x + 1 over F_2
        assert!(is_irreducible(&[1, 1, 0, 0, 1], 2));
        // (x^2+x+1)^2 = x^4 + x^2 + 1 is not
        assert!(!is_irreducible(&[1, 0, 1, 0, 1], 2));
    }

    #[test]
    fn default_polys() {
        assert_eq!(default_irreducible(1, 7), vec![0, 1]);
        assert_eq!(default_irreducible(2, 2), vec![1, 1, 1]);
        assert_eq!(default_irreducible(2, 5), vec![2, 0, 1]);
    }

    #[test]
    fn primes() {
        assert!(is_prime(2) && is_prime(3) && is_prime(97));
        assert!(!is_prime(1) && !is_prime(9) && !is_prime(0));
    }
}
