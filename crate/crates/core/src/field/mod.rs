//! Arithmetic in GF(p^n).
//!
//! Elements are encoded as integers in `[0, p^n)` whose base-p digits are the
//! coefficients `c_0, .., c_{n-1}` of `c_0 + c_1 x + .. + c_{n-1} x^{n-1}`
//! reduced modulo a monic irreducible polynomial. For `p = 2` addition is a
//! plain XOR. Multiplication goes through full log/exp tables built once at
//! construction, so a [`FieldCtx`] is immutable and cheap to share.

mod poly;

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on the field order; every table is O(q).
pub const DEFAULT_MAX_ORDER: u64 = 1 << 22;

/// Fields up to this order get a dense q x q addition table (odd p only).
const ADD_TABLE_MAX: u32 = 1024;

/// A field element, canonically an integer in `[0, q)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Felt(pub u32);

impl Felt {
    pub const ZERO: Felt = Felt(0);
    pub const ONE: Felt = Felt(1);

    #[inline]
    pub fn value(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Felt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Immutable description of GF(p^n) together with its lookup tables.
#[derive(Clone)]
pub struct FieldCtx {
    p: u32,
    n: u32,
    q: u32,
    modulus: Vec<u32>,
    g: Felt,
    /// `log[x]` for nonzero x; `log[0]` is a sentinel.
    log: Vec<u32>,
    /// `exp[i] = g^i` for `i < 2(q-1)`, doubled so a sum of two logs needs no reduction.
    exp: Vec<u32>,
    trace: Vec<u32>,
    /// `p^i mod (q-1)` for `i < n`.
    frob_exp: Vec<u64>,
    neg: Vec<u32>,
    add: Option<Vec<u32>>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("n", &self.n)
            .field("modulus", &self.modulus)
            .field("g", &self.g)
            .finish_non_exhaustive()
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= m {
        if m.is_multiple_of(d) {
            out.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

fn modpow(base: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut result = 1u128;
    let mut b = (base % m) as u128;
    let m = m as u128;
    while e > 0 {
        if e & 1 == 1 {
            result = result * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    result as u64
}

/// Multiplication by polynomial arithmetic, used only to build the tables.
struct SlowMul<'a> {
    p: u32,
    n: u32,
    modulus: &'a [u32],
}

impl SlowMul<'_> {
    fn digits(&self, mut x: u32) -> Vec<u32> {
        let mut d = Vec::with_capacity(self.n as usize);
        for _ in 0..self.n {
            d.push(x % self.p);
            x /= self.p;
        }
        d
    }

    fn undigits(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0u32, |acc, &c| acc * self.p + c)
    }

    fn mul(&self, x: u32, y: u32) -> u32 {
        if self.p == 2 {
            return self.mul_binary(x, y);
        }
        let prod = poly::mulmod(&self.digits(x), &self.digits(y), self.modulus, self.p);
        self.undigits(&prod)
    }

    fn mul_binary(&self, x: u32, y: u32) -> u32 {
        let n = self.n;
        let mut acc: u64 = 0;
        for i in 0..n {
            if (y >> i) & 1 == 1 {
                acc ^= (x as u64) << i;
            }
        }
        let red: u64 = self.modulus.iter().enumerate().fold(0u64, |m, (i, &c)| m | ((c as u64) << i));
        for bit in (n..2 * n).rev() {
            if (acc >> bit) & 1 == 1 {
                acc ^= red << (bit - n);
            }
        }
        acc as u32
    }

    fn pow(&self, x: u32, mut e: u64) -> u32 {
        let mut result = 1u32;
        let mut b = x;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        result
    }
}

impl FieldCtx {
    /// GF(p^n) with the default (lexicographically least) modulus.
    pub fn new(p: u32, n: u32) -> Result<Self> {
        Self::build(p, n, None, DEFAULT_MAX_ORDER)
    }

    /// GF(p^n) defined by an explicit monic modulus `c_0, .., c_n`.
    pub fn with_modulus(p: u32, n: u32, modulus: &[u32]) -> Result<Self> {
        Self::build(p, n, Some(modulus), DEFAULT_MAX_ORDER)
    }

    /// Full constructor. The default modulus is the monic irreducible whose
    /// non-leading digits, read as a base-p integer, are smallest; the
    /// primitive element is the smallest element of order `q - 1`.
    pub fn build(p: u32, n: u32, modulus: Option<&[u32]>, max_order: u64) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if n == 0 {
            return Err(Error::ZeroDegree);
        }
        let q64 = (p as u64)
            .checked_pow(n)
            .filter(|&q| q <= max_order && q <= u32::MAX as u64 / 2)
            .ok_or(Error::TooLarge { p: p as u64, n, max: max_order })?;
        let q = q64 as u32;

        let modulus = match modulus {
            Some(m) => {
                if m.len() != n as usize + 1 {
                    return Err(Error::BadModulus(format!("expected {} digits c_0..c_{n}, got {}", n + 1, m.len())));
                }
                if m[n as usize] != 1 {
                    return Err(Error::BadModulus("leading coefficient must be 1".into()));
                }
                if let Some(bad) = m.iter().find(|&&c| c >= p) {
                    return Err(Error::BadModulus(format!("digit {bad} is not below {p}")));
                }
                if !poly::is_irreducible(m, p) {
                    return Err(Error::Reducible(p));
                }
                m.to_vec()
            }
            None => (0..q)
                .map(|v| {
                    let mut f: Vec<u32> = (0..n).map(|i| (v / p.pow(i)) % p).collect();
                    f.push(1);
                    f
                })
                .find(|f| poly::is_irreducible(f, p))
                .expect("an irreducible polynomial of every degree exists"),
        };

        let slow = SlowMul { p, n, modulus: &modulus };
        let order = q64 - 1;
        let factors = prime_factors(order);
        let g = (1..q)
            .find(|&cand| factors.iter().all(|&r| slow.pow(cand, order / r) != 1))
            .expect("the multiplicative group is cyclic");

        let qm1 = (q - 1) as usize;
        let mut exp = Vec::with_capacity(2 * qm1);
        let mut log = vec![u32::MAX; q as usize];
        let mut x = 1u32;
        for i in 0..qm1 {
            exp.push(x);
            log[x as usize] = i as u32;
            x = slow.mul(x, g);
        }
        debug_assert_eq!(x, 1);
        exp.extend_from_within(..qm1);

        let mut ctx = FieldCtx {
            p,
            n,
            q,
            modulus,
            g: Felt(g),
            log,
            exp,
            trace: Vec::new(),
            frob_exp: (0..n).map(|i| modpow(p as u64, i as u64, order)).collect(),
            neg: Vec::new(),
            add: None,
        };
        if p != 2 {
            ctx.neg = (0..q).map(|x| ctx.neg_digits(x)).collect();
            if q <= ADD_TABLE_MAX {
                let mut table = Vec::with_capacity((q as usize) * (q as usize));
                for a in 0..q {
                    for b in 0..q {
                        table.push(ctx.add_digits(a, b));
                    }
                }
                ctx.add = Some(table);
            }
        }
        ctx.trace = (0..q)
            .map(|x| {
                let t = (0..n).fold(Felt::ZERO, |acc, i| ctx.add(acc, ctx.frobenius(Felt(x), i)));
                debug_assert!(t.0 < p, "trace must land in the prime field");
                t.0
            })
            .collect();
        Ok(ctx)
    }

    /// Parses a field specifier such as `"2^6"`, `"3^4"` or `"7"`.
    pub fn parse_spec(spec: &str) -> Result<(u32, u32)> {
        let spec = spec.trim();
        let (p, n) = match spec.split_once('^') {
            Some((p, n)) => (p.trim(), n.trim()),
            None => (spec, "1"),
        };
        let p = p.parse::<u32>().map_err(|_| Error::Parse(format!("bad prime in field spec {spec:?}")))?;
        let n = n.parse::<u32>().map_err(|_| Error::Parse(format!("bad degree in field spec {spec:?}")))?;
        Ok((p, n))
    }

    /// Parses a comma-separated modulus `c_0,..,c_n`.
    pub fn parse_modulus(digits: &str) -> Result<Vec<u32>> {
        digits
            .split(',')
            .map(|d| d.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad modulus digit {d:?}"))))
            .collect()
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.q as usize
    }

    /// The modulus as `n + 1` digits, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The primitive element `g`.
    pub fn primitive(&self) -> Felt {
        self.g
    }

    pub fn spec(&self) -> String {
        format!("{}^{}", self.p, self.n)
    }

    pub fn elements(&self) -> impl Iterator<Item = Felt> + Clone {
        (0..self.q).map(Felt)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Felt> + Clone {
        (1..self.q).map(Felt)
    }

    /// Embeds `lambda mod p` from the prime field.
    pub fn from_prime(&self, lambda: i64) -> Felt {
        Felt(lambda.rem_euclid(self.p as i64) as u32)
    }

    pub fn digits(&self, x: Felt) -> Vec<u32> {
        let mut v = x.0;
        (0..self.n)
            .map(|_| {
                let d = v % self.p;
                v /= self.p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, digits: &[u32]) -> Result<Felt> {
        if digits.len() > self.n as usize || digits.iter().any(|&d| d >= self.p) {
            return Err(Error::OutOfRange(format!("digit vector {digits:?} for GF({})", self.spec())));
        }
        Ok(Felt(digits.iter().rev().fold(0u32, |acc, &d| acc * self.p + d)))
    }

    /// Checks that `x` lies in `[0, q)`.
    pub fn element(&self, value: u64) -> Result<Felt> {
        if value < self.q as u64 {
            Ok(Felt(value as u32))
        } else {
            Err(Error::OutOfRange(format!("{value} is not an element of GF({})", self.spec())))
        }
    }

    fn add_digits(&self, mut a: u32, mut b: u32) -> u32 {
        let p = self.p;
        let mut out = 0u32;
        let mut place = 1u32;
        while a > 0 || b > 0 {
            let mut s = a % p + b % p;
            if s >= p {
                s -= p;
            }
            out += s * place;
            a /= p;
            b /= p;
            place = place.wrapping_mul(p);
        }
        out
    }

    fn neg_digits(&self, mut a: u32) -> u32 {
        let p = self.p;
        let mut out = 0u32;
        let mut place = 1u32;
        while a > 0 {
            let d = a % p;
            if d != 0 {
                out += (p - d) * place;
            }
            a /= p;
            place = place.wrapping_mul(p);
        }
        out
    }

    #[inline]
    pub fn add(&self, x: Felt, y: Felt) -> Felt {
        if self.p == 2 {
            return Felt(x.0 ^ y.0);
        }
        match &self.add {
            Some(t) => Felt(t[x.index() * self.q as usize + y.index()]),
            None => Felt(self.add_digits(x.0, y.0)),
        }
    }

    #[inline]
    pub fn neg(&self, x: Felt) -> Felt {
        if self.p == 2 {
            x
        } else {
            Felt(self.neg[x.index()])
        }
    }

    #[inline]
    pub fn sub(&self, x: Felt, y: Felt) -> Felt {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn mul(&self, x: Felt, y: Felt) -> Felt {
        if x.0 == 0 || y.0 == 0 {
            return Felt::ZERO;
        }
        Felt(self.exp[(self.log[x.index()] + self.log[y.index()]) as usize])
    }

    pub fn inv(&self, x: Felt) -> Result<Felt> {
        if x.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let l = self.log[x.index()];
        Ok(Felt(self.exp[((self.q - 1 - l) % (self.q - 1)) as usize]))
    }

    pub fn div(&self, x: Felt, y: Felt) -> Result<Felt> {
        Ok(self.mul(x, self.inv(y)?))
    }

    /// `x^e`, with `0^0 = 1`.
    pub fn pow(&self, x: Felt, e: u64) -> Felt {
        if x.is_zero() {
            return if e == 0 { Felt::ONE } else { Felt::ZERO };
        }
        let order = (self.q - 1) as u64;
        let l = self.log[x.index()] as u64;
        Felt(self.exp[((l * (e % order)) % order) as usize])
    }

    /// `x^e` for a signed exponent; negative exponents need `x != 0`.
    pub fn pow_signed(&self, x: Felt, e: i64) -> Result<Felt> {
        if e >= 0 {
            return Ok(self.pow(x, e as u64));
        }
        let order = (self.q - 1) as i64;
        Ok(self.pow(self.inv(x)?, e.unsigned_abs() % order as u64))
    }

    /// `g^e`.
    pub fn gen_pow(&self, e: u64) -> Felt {
        Felt(self.exp[(e % (self.q - 1) as u64) as usize])
    }

    /// `x^(p^i)`; `i` is taken modulo `n`.
    #[inline]
    pub fn frobenius(&self, x: Felt, i: u32) -> Felt {
        if x.is_zero() {
            return x;
        }
        let e = self.frob_exp[(i % self.n) as usize];
        let l = self.log[x.index()] as u64;
        Felt(self.exp[((l * e) % (self.q - 1) as u64) as usize])
    }

    /// Absolute trace into F_p, returned as an integer in `[0, p)`.
    #[inline]
    pub fn trace_abs(&self, x: Felt) -> u32 {
        self.trace[x.index()]
    }

    /// Relative trace into the subfield GF(p^d).
    pub fn trace_rel(&self, x: Felt, d: u32) -> Result<Felt> {
        if d == 0 || !self.n.is_multiple_of(d) {
            return Err(Error::NotADivisor { d, n: self.n });
        }
        Ok((0..self.n / d).fold(Felt::ZERO, |acc, i| self.add(acc, self.frobenius(x, d * i))))
    }

    /// Exponent `l` in `[0, q-1)` with `g^l = x`.
    pub fn dlog(&self, x: Felt) -> Result<u32> {
        if x.is_zero() {
            Err(Error::LogOfZero)
        } else {
            Ok(self.log[x.index()])
        }
    }

    /// Whether `x` is an `r`-th power. Zero counts as one (`0 = 0^r`).
    pub fn is_power(&self, x: Felt, r: u64) -> bool {
        if x.is_zero() {
            return true;
        }
        let g = r.gcd(&((self.q - 1) as u64));
        (self.log[x.index()] as u64).is_multiple_of(g)
    }

    /// Whether `x` lies in the subfield GF(p^d), `d | n`.
    pub fn in_subfield(&self, x: Felt, d: u32) -> bool {
        self.frobenius(x, d) == x
    }

    /// `-1`.
    pub fn minus_one(&self) -> Felt {
        self.neg(Felt::ONE)
    }
}

/// `gcd(p^t + 1, p^n - 1)` by case analysis on `d = gcd(n, t)` and
/// `e = gcd(n, 2t)`: `(2^e - 1)/(2^d - 1)` for `p = 2`; for odd `p`, `2` when
/// `n/d` is odd and `p^d + 1` otherwise.
pub fn gcd_lemma(p: u64, t: u32, n: u32) -> Result<u64> {
    if t < 1 || t > n {
        return Err(Error::OutOfRange(format!("need 1 <= t <= n, got t = {t}, n = {n}")));
    }
    if p < 2 || (p.is_multiple_of(2) && p != 2) {
        return Err(Error::OutOfRange(format!("p = {p} must be 2 or odd")));
    }
    if p.checked_pow(n.max(t)).and_then(|v| v.checked_add(1)).is_none() {
        return Err(Error::OutOfRange(format!("{p}^{n} overflows")));
    }
    let d = n.gcd(&t);
    let e = n.gcd(&(2 * t));
    Ok(if p == 2 {
        ((1u64 << e) - 1) / ((1u64 << d) - 1)
    } else if (n / d) % 2 == 1 {
        2
    } else {
        p.pow(d) + 1
    })
}

/// Euclid's gcd, exposed so callers can cross-check [`gcd_lemma`].
pub fn euclid_gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}
