//! Dense polynomials over F_p, coefficients stored low degree first.
//!
//! Only what the irreducibility test and the slow multiplication used while
//! building the log tables need.

pub(crate) type Poly = Vec<u32>;

fn mulp(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

pub(crate) fn inv_p(a: u32, p: u32) -> u32 {
    debug_assert!(!a.is_multiple_of(p));
    let mut result = 1u64;
    let mut base = a as u64 % p as u64;
    let mut e = p as u64 - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    result as u32
}

pub(crate) fn trim(a: &mut Poly) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub(crate) fn rem(a: &[u32], f: &[u32], p: u32) -> Poly {
    let mut r: Poly = a.to_vec();
    trim(&mut r);
    let df = f.len() - 1;
    let lead_inv = inv_p(f[df], p);
    while r.len() > df {
        let top = r.len() - 1;
        let coef = mulp(r[top], lead_inv, p);
        if coef != 0 {
            let shift = top - df;
            for (i, &fi) in f.iter().enumerate() {
                let sub = mulp(coef, fi, p);
                r[shift + i] = (r[shift + i] + p - sub) % p;
            }
        }
        r.pop();
        trim(&mut r);
    }
    r
}

pub(crate) fn mul(a: &[u32], b: &[u32], p: u32) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    let mut out: Poly = out.into_iter().map(|v| v as u32).collect();
    trim(&mut out);
    out
}

pub(crate) fn mulmod(a: &[u32], b: &[u32], f: &[u32], p: u32) -> Poly {
    rem(&mul(a, b, p), f, p)
}

fn powmod(base: &[u32], mut e: u64, f: &[u32], p: u32) -> Poly {
    let mut result: Poly = vec![1];
    let mut b = rem(base, f, p);
    while e > 0 {
        if e & 1 == 1 {
            result = mulmod(&result, &b, f, p);
        }
        b = mulmod(&b, &b, f, p);
        e >>= 1;
    }
    rem(&result, f, p)
}

fn sub(a: &[u32], b: &[u32], p: u32) -> Poly {
    let len = a.len().max(b.len());
    let mut out: Poly = (0..len)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(&mut out);
    out
}

fn gcd(a: &[u32], b: &[u32], p: u32) -> Poly {
    let mut x: Poly = a.to_vec();
    let mut y: Poly = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

/// Rabin's test: `f` (monic, degree n) is irreducible iff `x^(p^n) = x mod f`
/// and `gcd(x^(p^m) - x, f) = 1` for every proper divisor `m` of `n`.
pub(crate) fn is_irreducible(f: &[u32], p: u32) -> bool {
    let n = f.len() - 1;
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let x: Poly = vec![0, 1];
    // frob[m] = x^(p^m) mod f
    let mut frob = vec![rem(&x, f, p)];
    for m in 1..=n {
        let next = powmod(&frob[m - 1], p as u64, f, p);
        frob.push(next);
    }
    if sub(&frob[n], &x, p) != Vec::<u32>::new() {
        return false;
    }
    (1..n).filter(|m| n.is_multiple_of(*m)).all(|m| {
        let h = sub(&frob[m], &x, p);
        gcd(&h, f, p).len() == 1
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_irreducibles_over_f2() {
        // x^2 + x + 1, x^3 + x + 1, x^3 + x^2 + 1 irreducible; x^2 + 1 = (x+1)^2 not.
        assert!(is_irreducible(&[1, 1, 1], 2));
        assert!(is_irreducible(&[1, 1, 0, 1], 2));
        assert!(is_irreducible(&[1, 0, 1, 1], 2));
        assert!(!is_irreducible(&[1, 0, 1], 2));
        // (x^2+x+1)(x^3+x+1) has no roots in F_2 and F_4 only by the first condition
        let f = mul(&[1, 1, 1], &[1, 1, 0, 1], 2);
        assert_eq!(f.len(), 6);
        assert!(!is_irreducible(&f, 2));
    }

    #[test]
    fn irreducible_count_matches_necklace_formula() {
        // Number of monic irreducibles of degree 4 over F_3 is (3^4 - 3^2) / 4 = 18.
        let count = (0..81u32)
            .filter(|v| {
                let mut f: Poly = (0..4).map(|i| (v / 3u32.pow(i)) % 3).collect();
                f.push(1);
                is_irreducible(&f, 3)
            })
            .count();
        assert_eq!(count, 18);
    }
}
