//! Additive and multiplicative characters of GF(p^n), Gauss sums and the
//! Weil sums `S_k(A, B) = sum_x chi1(A x^(p^k+1) + B x)`.
//!
//! Everything is evaluated in double precision. Quantities that are integers
//! in exact arithmetic go through [`round_integral`], which refuses to round
//! anything that is not within `tol` of an integer.
//!
//! The closed forms dispatch on structural predicates only: permutation
//! status and solvability of `A^(p^k) x^(p^(2k)) + A x` come from rank
//! computations, and "is an r-th power" from the discrete log.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::field::{Felt, FieldCtx};
use crate::linpoly::{Coset, LinPoly};

/// Complex accumulator for character sums.
pub type CSum = Complex64;

/// Default tolerance for the integral-rounding contract.
pub const DEFAULT_TOL: f64 = 1e-6;

/// Rounds `z` to an integer, failing unless `|im| < tol` and `re` is within
/// `tol` of an integer.
pub fn round_integral(z: CSum, tol: f64) -> Result<i64> {
    let r = z.re.round();
    if z.im.abs() < tol && (z.re - r).abs() < tol {
        Ok(r as i64)
    } else {
        Err(Error::NonIntegral { re: z.re, im: z.im, tol })
    }
}

/// Pairwise (cascade) summation; the reduction order depends only on the length.
pub fn pairwise_sum(terms: &[CSum]) -> CSum {
    match terms.len() {
        0 => CSum::new(0.0, 0.0),
        1 => terms[0],
        len if len <= 8 => terms.iter().sum(),
        len => {
            let (lo, hi) = terms.split_at(len / 2);
            pairwise_sum(lo) + pairwise_sum(hi)
        }
    }
}

/// The Jacobi symbol `(2/s)` for odd `s`: `+1` iff `s = +-1 (mod 8)`.
pub fn jacobi2(s: u64) -> Result<i32> {
    if s.is_multiple_of(2) {
        return Err(Error::OutOfRange(format!("Jacobi symbol (2/{s}) needs odd s")));
    }
    Ok(if matches!(s % 8, 1 | 7) { 1 } else { -1 })
}

/// `i^e`.
pub fn i_pow(e: u64) -> CSum {
    match e % 4 {
        0 => CSum::new(1.0, 0.0),
        1 => CSum::new(0.0, 1.0),
        2 => CSum::new(-1.0, 0.0),
        _ => CSum::new(0.0, -1.0),
    }
}

/// `(-1)^e` as a float.
pub(crate) fn sign(e: u64) -> f64 {
    if e.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// The linearized map `f_A(x) = A^(p^k) x^(p^(2k)) + A x` governing `S_k(A, B)`.
pub fn weil_linear_map(ctx: &FieldCtx, k: u32, a: Felt) -> LinPoly {
    let mut f = LinPoly::zero(ctx);
    f.add_term(ctx, 0, a);
    f.add_term(ctx, 2 * k, ctx.frobenius(a, k));
    f
}

/// Parameters of a Weil sum `S_k(A, B)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WeilParams {
    pub k: u32,
    pub a: Felt,
    pub b: Felt,
}

impl WeilParams {
    pub fn new(ctx: &FieldCtx, k: u32, a: Felt, b: Felt) -> Result<Self> {
        if k < 1 || k >= ctx.n() {
            return Err(Error::OutOfRange(format!("need 1 <= k < n, got k = {k}, n = {}", ctx.n())));
        }
        Ok(WeilParams { k, a, b })
    }

    /// `gcd(n, k)`.
    pub fn d(&self, ctx: &FieldCtx) -> u32 {
        ctx.n().gcd(&self.k)
    }

    /// `gcd(n, 2k)`, either `d` or `2d`.
    pub fn e(&self, ctx: &FieldCtx) -> u32 {
        ctx.n().gcd(&(2 * self.k))
    }
}

/// Character evaluator bound to one field.
#[derive(Clone, Debug)]
pub struct Characters<'f> {
    field: &'f FieldCtx,
    /// `exp(2 pi i t / p)` for `t < p`.
    roots: Vec<CSum>,
}

impl<'f> Characters<'f> {
    pub fn new(field: &'f FieldCtx) -> Self {
        let p = field.p();
        let roots = (0..p)
            .map(|t| match (p, t) {
                (_, 0) => CSum::new(1.0, 0.0),
                (2, 1) => CSum::new(-1.0, 0.0),
                _ => CSum::from_polar(1.0, 2.0 * PI * t as f64 / p as f64),
            })
            .collect();
        Characters { field, roots }
    }

    pub fn field(&self) -> &'f FieldCtx {
        self.field
    }

    /// The canonical additive character `exp(2 pi i Tr(x) / p)`.
    #[inline]
    pub fn chi1(&self, x: Felt) -> CSum {
        self.roots[self.field.trace_abs(x) as usize]
    }

    /// The multiplicative character `psi_k(g^l) = exp(2 pi i k l / (q-1))`.
    pub fn psi(&self, kidx: u64, x: Felt) -> Result<CSum> {
        let l = self.field.dlog(x)? as u64;
        let order = (self.field.q() - 1) as u64;
        let t = (kidx % order) * l % order;
        if t == 0 {
            return Ok(CSum::new(1.0, 0.0));
        }
        Ok(CSum::from_polar(1.0, 2.0 * PI * t as f64 / order as f64))
    }

    /// The quadratic character, `+1` on nonzero squares and `-1` otherwise.
    pub fn eta(&self, x: Felt) -> Result<f64> {
        if self.field.p() == 2 {
            return Err(Error::Characteristic("the quadratic character needs odd p".into()));
        }
        Ok(sign(self.field.dlog(x)? as u64))
    }

    /// `G(psi_k, chi_shift) = sum_{z != 0} psi_k(z) chi1(shift z)`.
    pub fn gauss_sum(&self, kidx: u64, shift: Felt) -> CSum {
        let f = self.field;
        let terms: Vec<CSum> =
            f.nonzero().map(|z| self.psi(kidx, z).expect("z is nonzero") * self.chi1(f.mul(shift, z))).collect();
        pairwise_sum(&terms)
    }

    /// `G_U(psi_k, chi) = sum_{alpha in U} psi_k(alpha) chi1(weight(alpha))`.
    pub fn incomplete_gauss<W>(&self, set: &[Felt], kidx: u64, weight: W) -> Result<CSum>
    where
        W: Fn(Felt) -> Felt,
    {
        let order = (self.field.q() - 1) as u64;
        let trivial = kidx.is_multiple_of(order);
        let terms = set
            .iter()
            .map(|&alpha| {
                let mult = if trivial && alpha.is_zero() { CSum::new(1.0, 0.0) } else { self.psi(kidx, alpha)? };
                Ok(mult * self.chi1(weight(alpha)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(pairwise_sum(&terms))
    }

    /// Literal summation of `S_k(A, B)` over all q elements.
    pub fn weil_direct(&self, w: &WeilParams) -> CSum {
        let f = self.field;
        let e = f.p() as u64;
        let exp = e.pow(w.k) + 1;
        let terms: Vec<CSum> =
            f.elements().map(|x| self.chi1(f.add(f.mul(w.a, f.pow(x, exp)), f.mul(w.b, x)))).collect();
        pairwise_sum(&terms)
    }

    /// Closed form of `S_k(A, B)` for odd p and `A != 0`.
    pub fn weil_closed_odd(&self, w: &WeilParams) -> Result<CSum> {
        let f = self.field;
        let (p, n) = (f.p(), f.n());
        if p == 2 {
            return Err(Error::Characteristic("odd-characteristic closed form called with p = 2".into()));
        }
        if w.a.is_zero() {
            return Err(Error::OutOfRange("closed forms need A != 0".into()));
        }
        let d = w.d(f);
        let map = weil_linear_map(f, w.k, w.a);
        let pk1 = (p as u64).pow(w.k) + 1;
        // x_0 solves f_A(x) = -B^(p^k); the weight is conj chi1(A x_0^(p^k+1))
        let weight = |x0: Felt| self.chi1(f.mul(w.a, f.pow(x0, pk1))).conj();

        if (n / d).is_multiple_of(2) {
            let m = n / 2;
            let sgn = sign((m / d) as u64);
            let small = sgn * (p as f64).powi(m as i32);
            let large = -sgn * (p as f64).powi((m + d) as i32);
            let pp = map.is_permutation(f);
            if w.b.is_zero() {
                return Ok(CSum::new(if pp { small } else { large }, 0.0));
            }
            let rhs = f.neg(f.frobenius(w.b, w.k));
            return Ok(match map.solve_affine(f, rhs) {
                Some(sol) if pp => weight(sol.particular) * small,
                Some(sol) => weight(sol.particular) * large,
                None => CSum::new(0.0, 0.0),
            });
        }

        let sqrt_q = (f.q() as f64).sqrt();
        let lead = sign((n - 1) as u64) * sqrt_q;
        let p_mod4_is_1 = p % 4 == 1;
        if w.b.is_zero() {
            let unit = if p_mod4_is_1 { CSum::new(1.0, 0.0) } else { i_pow(n as u64) };
            return Ok(unit * lead * self.eta(w.a)?);
        }
        let unit = if p_mod4_is_1 { CSum::new(1.0, 0.0) } else { i_pow(3 * n as u64) };
        let rhs = f.neg(f.frobenius(w.b, w.k));
        match map.solve_affine(f, rhs) {
            Some(sol) => Ok(unit * lead * self.eta(f.neg(w.a))? * weight(sol.particular)),
            None => Ok(CSum::new(0.0, 0.0)),
        }
    }

    /// Solutions `gamma` of `gamma^(2^(2k)) + gamma = B C^(-1) + 1`, where
    /// `C^(2^k+1) = A`. Only meaningful for p = 2 with `n / gcd(n, k)` odd.
    pub fn even_gamma_solutions(&self, k: u32, a: Felt, b: Felt) -> Result<Option<Coset>> {
        let f = self.field;
        let c = odd_root(f, a, 2u64.pow(k) + 1)?;
        let target = f.add(f.div(b, c)?, Felt::ONE);
        Ok(LinPoly::binomial(f, 0, 2 * k).solve_affine(f, target))
    }

    /// Closed form of `S_k(A, B)` for p = 2 and `A != 0`.
    pub fn weil_closed_even(&self, w: &WeilParams) -> Result<CSum> {
        let f = self.field;
        let n = f.n();
        if f.p() != 2 {
            return Err(Error::Characteristic("even-characteristic closed form called with odd p".into()));
        }
        if w.a.is_zero() {
            return Err(Error::OutOfRange("closed forms need A != 0".into()));
        }
        let d = w.d(f);
        let two_k1 = 2u64.pow(w.k) + 1;
        if (n / d) % 2 == 1 {
            let Some(sol) = self.even_gamma_solutions(w.k, w.a, w.b)? else {
                return Ok(CSum::new(0.0, 0.0));
            };
            let gamma = sol.particular;
            let s11 = (jacobi2((n / d) as u64)?.pow(d)) as f64 * 2f64.powi(((n + d) / 2) as i32);
            return Ok(self.chi1(f.add(f.pow(gamma, two_k1), gamma)) * s11);
        }
        let m = n / 2;
        let sgn = sign((m / d) as u64);
        let map = weil_linear_map(f, w.k, w.a);
        let rhs = f.frobenius(w.b, w.k);
        let Some(sol) = map.solve_affine(f, rhs) else {
            return Ok(CSum::new(0.0, 0.0));
        };
        let weight = self.chi1(f.mul(w.a, f.pow(sol.particular, two_k1)));
        let scale =
            if f.is_power(w.a, (1u64 << d) + 1) { -sgn * 2f64.powi((m + d) as i32) } else { sgn * 2f64.powi(m as i32) };
        Ok(weight * scale)
    }

    /// Dispatches on the characteristic.
    pub fn weil_closed(&self, w: &WeilParams) -> Result<CSum> {
        if self.field.p() == 2 {
            self.weil_closed_even(w)
        } else {
            self.weil_closed_odd(w)
        }
    }
}

/// The unique `C` with `C^r = A` when `gcd(r, q-1) = 1`, computed in the
/// exponent group `Z/(q-1)`.
pub fn odd_root(ctx: &FieldCtx, a: Felt, r: u64) -> Result<Felt> {
    if a.is_zero() {
        return Ok(Felt::ZERO);
    }
    let order = (ctx.q() - 1) as i64;
    let eg = (r as i64 % order.max(1)).extended_gcd(&order);
    if eg.gcd != 1 && order > 1 {
        return Err(Error::Hypothesis(format!("x -> x^{r} is not a bijection of GF({})", ctx.spec())));
    }
    let inv = eg.x.rem_euclid(order.max(1)) as u64;
    Ok(ctx.pow(a, inv))
}
