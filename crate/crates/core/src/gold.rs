//! Perturbed Gold functions `G(x) = x^(p^k+1) + P(x)` with `P` linearized.
//!
//! For `c != 1` every entry of the c-differential table of `G` reduces to
//! Weil sums:
//!
//! ```text
//! Delta(a, b) = 1 + (1/q) sum_{alpha != 0} chi1(alpha (P'(a) - b)) S_k(A_alpha, B_alpha)
//! ```
//!
//! with `P'(a) = P(a) + a^(p^k+1)`, `A_alpha = alpha (1 - c)` and
//! `B_alpha = alpha a^(p^k) + (alpha a)^(p^(n-k)) + P*(alpha)`. [`ClosedRow`]
//! precomputes the per-alpha data of one row `a` and evaluates entries from
//! the partition sets `X_a`, `W_a`, `V_a` (odd p) or `W`, `Y`, `Z1`, `Z2`
//! (p = 2). The constants used are the ones that agree with brute force; see
//! [`Conventions`] for the alternatives that do not.

use num_integer::Integer;
use serde::Serialize;

use crate::cddt::{self, Cddt, FnTable};
use crate::charsum::{i_pow, jacobi2, odd_root, pairwise_sum, round_integral, sign, weil_linear_map, CSum, Characters};
use crate::error::{Error, Result};
use crate::field::{gcd_lemma, Felt, FieldCtx};
use crate::linpoly::{Coset, LinPoly};

/// `G(x) = x^(p^k+1) + P(x)` together with the multiplier `c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoldSpec {
    pub k: u32,
    pub perturb: LinPoly,
    pub c: Felt,
}

impl GoldSpec {
    pub fn new(ctx: &FieldCtx, k: u32, perturb: LinPoly, c: Felt) -> Result<Self> {
        if k < 1 || k >= ctx.n() {
            return Err(Error::OutOfRange(format!("need 1 <= k < n, got k = {k}, n = {}", ctx.n())));
        }
        if perturb.coeffs().len() != ctx.n() as usize {
            return Err(Error::OutOfRange("perturbation has the wrong number of coefficients".into()));
        }
        ctx.element(c.0 as u64)?;
        Ok(GoldSpec { k, perturb, c })
    }

    /// The unperturbed power map.
    pub fn plain(ctx: &FieldCtx, k: u32, c: Felt) -> Result<Self> {
        Self::new(ctx, k, LinPoly::zero(ctx), c)
    }

    pub fn with_c(&self, c: Felt) -> Self {
        GoldSpec { c, ..self.clone() }
    }

    pub fn d(&self, ctx: &FieldCtx) -> u32 {
        ctx.n().gcd(&self.k)
    }

    pub fn e(&self, ctx: &FieldCtx) -> u32 {
        ctx.n().gcd(&(2 * self.k))
    }

    pub fn m(&self, ctx: &FieldCtx) -> Option<u32> {
        ctx.n().is_multiple_of(2).then_some(ctx.n() / 2)
    }

    /// `Q = p^d`.
    pub fn big_q(&self, ctx: &FieldCtx) -> u64 {
        (ctx.p() as u64).pow(self.d(ctx))
    }

    /// `p^k + 1`.
    pub fn exponent(&self, ctx: &FieldCtx) -> u64 {
        (ctx.p() as u64).pow(self.k) + 1
    }

    fn one_minus_c(&self, ctx: &FieldCtx) -> Felt {
        ctx.sub(Felt::ONE, self.c)
    }
}

pub fn gold_table(ctx: &FieldCtx, spec: &GoldSpec) -> FnTable {
    let e = spec.exponent(ctx);
    FnTable::from_fn(ctx, |x| ctx.add(ctx.pow(x, e), spec.perturb.eval(ctx, x)))
}

/// `P'(a) = P(a) + a^(p^k+1)`.
pub fn p_prime_of_a(ctx: &FieldCtx, spec: &GoldSpec, a: Felt) -> Felt {
    ctx.add(spec.perturb.eval(ctx, a), ctx.pow(a, spec.exponent(ctx)))
}

/// `B_alpha = sum_i (a_i')^(p^(n-i))` with `a_0' = alpha a^(p^k) + A a_0`,
/// `a_k' = alpha a + A a_k` and `a_i' = A a_i` otherwise.
pub fn b_alpha(ctx: &FieldCtx, spec: &GoldSpec, a: Felt, alpha: Felt) -> Felt {
    let n = ctx.n();
    let big_a = ctx.mul(alpha, spec.one_minus_c(ctx));
    (0..n).fold(Felt::ZERO, |acc, i| {
        let mut ai = ctx.mul(big_a, spec.perturb.coeff(i as usize));
        if i == 0 {
            ai = ctx.add(ai, ctx.mul(alpha, ctx.frobenius(a, spec.k)));
        }
        if i == spec.k {
            ai = ctx.add(ai, ctx.mul(alpha, a));
        }
        ctx.add(acc, ctx.frobenius(ai, n - i))
    })
}

/// The `a`-dependent part of `B_alpha` as a linearized map of `a`:
/// `a -> alpha a^(p^k) + alpha^(p^(n-k)) a^(p^(n-k))`.
pub fn row_map(ctx: &FieldCtx, k: u32, alpha: Felt) -> LinPoly {
    let n = ctx.n();
    let mut f = LinPoly::zero(ctx);
    f.add_term(ctx, k, alpha);
    f.add_term(ctx, n - k, ctx.frobenius(alpha, n - k));
    f
}

/// `T1` constant multiplying `Sigma_1` in the odd-p, even-`n/d` branch.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum T1Factor {
    /// `p^d + 1`; agrees with brute force.
    #[default]
    PdPlusOne,
    /// `p^d - 1`; fails for example on GF(9), k = 1, P = 0, a = b = 0.
    PdMinusOne,
}

/// Unit multiplying the `X_a` Gauss sum in the odd-p, odd-`n/d` branch.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum OddT1Unit {
    /// `1` or `i^n` (p = 1 or 3 mod 4); agrees with brute force.
    #[default]
    Epsilon,
    /// `1` or `i^(3n)`; differs by `(-1)^n` and fails on GF(27).
    Mu,
}

/// Right-hand side of `L_alpha(x) = +-B_alpha^(p^k)`. Both choices give the
/// same entries because `x^(p^k+1)` is even in `x` for odd p.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum RhsSign {
    #[default]
    Plus,
    Minus,
}

/// Index set of the p = 2, odd-`n/d` sum.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum EvenOddSet {
    /// `alpha` such that `gamma^(2^(2k)) + gamma = B/C + 1` is solvable,
    /// i.e. `Tr_d(B/C) = 1`; agrees with brute force.
    #[default]
    Solvable,
    /// `alpha` with `Tr_n(B/C) = 1`; coincides with the above only for d = 1.
    AbsoluteTrace,
}

/// Weight of `Z1` (p = 2, even `n/d`, `A_alpha` a `(2^d+1)`-th power,
/// solvable, `Tr_d(A_alpha) != 0`).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum Z1Weight {
    /// `-2^d`, the same as `Z2`; agrees with brute force.
    #[default]
    LikeZ2,
    /// `+1`, the same as `Y`; fails for example on GF(16), k = 1.
    LikeY,
}

/// Constants and predicates used by the closed forms. The default is the
/// set that agrees with brute force everywhere it was tested; the other
/// variants exist so tests can show where they break.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Conventions {
    pub t1_factor: T1Factor,
    pub odd_t1_unit: OddT1Unit,
    pub rhs_sign: RhsSign,
    pub even_odd_set: EvenOddSet,
    pub z1_weight: Z1Weight,
}

/// Per-alpha quantities for one row `a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaData {
    pub alpha: Felt,
    pub a_alpha: Felt,
    pub b_alpha: Felt,
    pub in_xa: bool,
    /// Whether `L_alpha(x) = A^(p^k) x^(p^(2k)) + A x` is a permutation.
    pub l_alpha_pp: bool,
    /// All solutions of `L_alpha(x) = +-B_alpha^(p^k)`.
    pub solutions: Option<Coset>,
    pub x_alpha: Option<Felt>,
}

impl AlphaData {
    /// `A_alpha x_alpha^(p^k+1)`.
    pub fn weil_shift(&self, ctx: &FieldCtx, spec: &GoldSpec) -> Option<Felt> {
        self.x_alpha.map(|x| ctx.mul(self.a_alpha, ctx.pow(x, spec.exponent(ctx))))
    }

    /// `delta_alpha = P'(a) - b - (1 - c) x_alpha^(p^k+1)`.
    pub fn delta_alpha(&self, ctx: &FieldCtx, spec: &GoldSpec, a: Felt, b: Felt) -> Option<Felt> {
        self.x_alpha.map(|x| {
            let t = ctx.mul(spec.one_minus_c(ctx), ctx.pow(x, spec.exponent(ctx)));
            ctx.sub(ctx.sub(p_prime_of_a(ctx, spec, a), b), t)
        })
    }
}

pub fn alpha_data(ctx: &FieldCtx, spec: &GoldSpec, a: Felt, alpha: Felt) -> Result<AlphaData> {
    alpha_data_with(ctx, spec, a, alpha, &Conventions::default())
}

pub fn alpha_data_with(ctx: &FieldCtx, spec: &GoldSpec, a: Felt, alpha: Felt, conv: &Conventions) -> Result<AlphaData> {
    if alpha.is_zero() {
        return Err(Error::OutOfRange("alpha must be nonzero".into()));
    }
    let a_alpha = ctx.mul(alpha, spec.one_minus_c(ctx));
    let b = b_alpha(ctx, spec, a, alpha);
    let map = weil_linear_map(ctx, spec.k, a_alpha);
    let mut rhs = ctx.frobenius(b, spec.k);
    if conv.rhs_sign == RhsSign::Minus {
        rhs = ctx.neg(rhs);
    }
    let solutions = map.solve_affine(ctx, rhs);
    Ok(AlphaData {
        alpha,
        a_alpha,
        b_alpha: b,
        in_xa: b.is_zero(),
        l_alpha_pp: map.is_permutation(ctx),
        x_alpha: solutions.as_ref().map(|s| s.particular),
        solutions,
    })
}

/// Index sets of the closed forms; the ones not used by the current branch
/// stay empty.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PartitionSets {
    pub x_a: Vec<Felt>,
    pub w_a: Vec<Felt>,
    pub v_a: Vec<Felt>,
    /// Odd p, even `n/d`: `alpha` outside `X_a` with `L_alpha` not a
    /// permutation and `L_alpha(x) = B_alpha^(p^k)` solvable.
    pub residual: Vec<Felt>,
    pub w: Vec<Felt>,
    pub y: Vec<Felt>,
    pub z1: Vec<Felt>,
    pub z2: Vec<Felt>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Branch {
    OddEven,
    OddOdd,
    EvenOdd,
    EvenEven,
}

/// Precomputed closed-form data for one row `a` of the table.
#[derive(Clone, Debug)]
pub struct ClosedRow<'c, 'f> {
    chars: &'c Characters<'f>,
    spec: GoldSpec,
    conv: Conventions,
    branch: Branch,
    p_prime: Felt,
    data: Vec<AlphaData>,
    sets: PartitionSets,
    /// Per-alpha shift added inside `chi1`, indexed by alpha.
    shift: Vec<Felt>,
}

impl<'c, 'f> ClosedRow<'c, 'f> {
    pub fn new(chars: &'c Characters<'f>, spec: &GoldSpec, a: Felt) -> Result<Self> {
        Self::with_conventions(chars, spec, a, Conventions::default())
    }

    pub fn with_conventions(chars: &'c Characters<'f>, spec: &GoldSpec, a: Felt, conv: Conventions) -> Result<Self> {
        let ctx = chars.field();
        if spec.c == Felt::ONE {
            return Err(Error::UnitMultiplier);
        }
        let (p, n, d) = (ctx.p(), ctx.n(), spec.d(ctx));
        let branch = match (p == 2, (n / d) % 2 == 0) {
            (false, true) => Branch::OddEven,
            (false, false) => Branch::OddOdd,
            (true, false) => Branch::EvenOdd,
            (true, true) => Branch::EvenEven,
        };
        let data =
            ctx.nonzero().map(|alpha| alpha_data_with(ctx, spec, a, alpha, &conv)).collect::<Result<Vec<_>>>()?;
        let mut sets = PartitionSets::default();
        let mut shift = vec![Felt::ZERO; ctx.size()];
        let q1 = (ctx.q() - 1) as u64;
        let pd1 = (p as u64).pow(d) + 1;

        for ad in &data {
            let alpha = ad.alpha;
            if ad.in_xa {
                sets.x_a.push(alpha);
            }
            match branch {
                Branch::OddEven => {
                    let sgn = if ((n / 2) / d) % 2 == 0 { Felt::ONE } else { ctx.minus_one() };
                    let pow_ne = ctx.pow(ad.a_alpha, q1 / pd1) != sgn;
                    if ad.in_xa {
                        if pow_ne {
                            sets.w_a.push(alpha);
                        }
                    } else if pow_ne {
                        sets.v_a.push(alpha);
                    } else if ad.x_alpha.is_some() {
                        sets.residual.push(alpha);
                    }
                    if let Some(s) = ad.weil_shift(ctx, spec) {
                        shift[alpha.index()] = ctx.neg(s);
                    }
                }
                Branch::OddOdd => {
                    if !ad.in_xa && ad.l_alpha_pp {
                        sets.v_a.push(alpha);
                    }
                    if let Some(s) = ad.weil_shift(ctx, spec) {
                        shift[alpha.index()] = ctx.neg(s);
                    }
                }
                Branch::EvenOdd => {
                    let two_k1 = spec.exponent(ctx);
                    let big_c = odd_root(ctx, ad.a_alpha, two_k1)?;
                    let ratio = ctx.div(ad.b_alpha, big_c)?;
                    let sol = chars.even_gamma_solutions(spec.k, ad.a_alpha, ad.b_alpha)?;
                    let member = match conv.even_odd_set {
                        EvenOddSet::Solvable => sol.is_some(),
                        EvenOddSet::AbsoluteTrace => ctx.trace_abs(ratio) == 1,
                    };
                    if member {
                        if let Some(sol) = sol {
                            sets.w.push(alpha);
                            let g = sol.particular;
                            shift[alpha.index()] = ctx.add(ctx.pow(g, two_k1), g);
                        }
                    }
                }
                Branch::EvenEven => {
                    let power = ctx.is_power(ad.a_alpha, pd1);
                    if !power {
                        sets.y.push(alpha);
                    } else if ad.x_alpha.is_some() {
                        if ctx.trace_rel(ad.a_alpha, d)?.is_zero() {
                            sets.z2.push(alpha);
                        } else {
                            sets.z1.push(alpha);
                        }
                    }
                    if let Some(s) = ad.weil_shift(ctx, spec) {
                        shift[alpha.index()] = s;
                    }
                }
            }
        }
        Ok(ClosedRow {
            chars,
            spec: spec.clone(),
            conv,
            branch,
            p_prime: p_prime_of_a(ctx, spec, a),
            data,
            sets,
            shift,
        })
    }

    pub fn sets(&self) -> &PartitionSets {
        &self.sets
    }

    pub fn alpha_data(&self) -> &[AlphaData] {
        &self.data
    }

    pub fn p_prime(&self) -> Felt {
        self.p_prime
    }

    /// `sum_{alpha in set} chi1(alpha v + shift_alpha)`, optionally weighted by `eta(alpha)`.
    fn sum(&self, set: &[Felt], v: Felt, shifted: bool, quadratic: bool) -> Result<CSum> {
        let ctx = self.chars.field();
        let weight = |alpha: Felt| {
            let base = ctx.mul(alpha, v);
            if shifted {
                ctx.add(base, self.shift[alpha.index()])
            } else {
                base
            }
        };
        if quadratic {
            self.chars.incomplete_gauss(set, (ctx.q() as u64 - 1) / 2, weight)
        } else {
            let terms: Vec<CSum> = set.iter().map(|&alpha| self.chars.chi1(weight(alpha))).collect();
            Ok(pairwise_sum(&terms))
        }
    }

    /// The unrounded value of `Delta(a, b)`.
    pub fn value(&self, b: Felt) -> Result<CSum> {
        let ctx = self.chars.field();
        let (p, n, q) = (ctx.p(), ctx.n(), ctx.q() as f64);
        let d = self.spec.d(ctx);
        let v = ctx.sub(self.p_prime, b);
        let s = &self.sets;
        let one = CSum::new(1.0, 0.0);
        match self.branch {
            Branch::OddEven => {
                let m = n / 2;
                let sgn = sign((m / d) as u64);
                let pm = (p as f64).powi(m as i32);
                let pd = (p as f64).powi(d as i32);
                let factor = match self.conv.t1_factor {
                    T1Factor::PdPlusOne => pd + 1.0,
                    T1Factor::PdMinusOne => pd - 1.0,
                };
                let sigma = self.sum(&s.x_a, v, false, false)?;
                let not_w: Vec<Felt> = s.x_a.iter().copied().filter(|x| !s.w_a.contains(x)).collect();
                let sigma1 = self.sum(&not_w, v, false, false)?;
                let t1 = sigma * (sgn * pm) - sigma1 * (sgn * pm * factor);
                let t2 = self.sum(&s.v_a, v, true, false)? * (sgn * pm)
                    - self.sum(&s.residual, v, true, false)? * (sgn * pm * pd);
                Ok(one + (t1 + t2) / q)
            }
            Branch::OddOdd => {
                let p1 = p % 4 == 1;
                let mu = if p1 { one } else { i_pow(3 * n as u64) };
                let eps = match self.conv.odd_t1_unit {
                    OddT1Unit::Epsilon if !p1 => i_pow(n as u64),
                    OddT1Unit::Mu => mu,
                    OddT1Unit::Epsilon => one,
                };
                let lead = sign((n - 1) as u64) * q.sqrt();
                let one_minus_c = self.spec.one_minus_c(ctx);
                let t1 = eps * lead * self.chars.eta(one_minus_c)? * self.sum(&s.x_a, v, false, true)?;
                let t2 = mu * lead * self.chars.eta(ctx.neg(one_minus_c))? * self.sum(&s.v_a, v, true, true)?;
                Ok(one + (t1 + t2) / q)
            }
            Branch::EvenOdd => {
                let coef = (jacobi2((n / d) as u64)?.pow(d)) as f64 * 2f64.powf((d as f64 - n as f64) / 2.0);
                Ok(one + self.sum(&s.w, v, true, false)? * coef)
            }
            Branch::EvenEven => {
                let m = n / 2;
                let sgn = sign((m / d) as u64);
                let pd = 2f64.powi(d as i32);
                let (small, large): (Vec<Felt>, Vec<Felt>) = match self.conv.z1_weight {
                    Z1Weight::LikeZ2 => (s.y.clone(), [s.z1.as_slice(), &s.z2].concat()),
                    Z1Weight::LikeY => ([s.y.as_slice(), &s.z1].concat(), s.z2.clone()),
                };
                let inner = self.sum(&small, v, true, false)? - self.sum(&large, v, true, false)? * pd;
                Ok(one + inner * (sgn * 2f64.powi(-(m as i32))))
            }
        }
    }

    pub fn entry(&self, b: Felt, tol: f64) -> Result<u32> {
        let v = round_integral(self.value(b)?, tol)?;
        u32::try_from(v).map_err(|_| Error::OutOfRange(format!("negative count {v}")))
    }

    /// Upper bound on every entry of the row from the sizes of the index
    /// sets (triangle inequality on the closed form).
    pub fn set_bound(&self) -> f64 {
        let ctx = self.chars.field();
        let (p, n) = (ctx.p() as f64, ctx.n());
        let d = self.spec.d(ctx) as i32;
        let s = &self.sets;
        let len = |v: &Vec<Felt>| v.len() as f64;
        match self.branch {
            Branch::OddEven => {
                let half = p.powi(-((n / 2) as i32));
                1.0 + half * (len(&s.x_a) + (p.powi(d) - 1.0) * (len(&s.x_a) - len(&s.w_a)) + len(&s.v_a))
                    + half * p.powi(d) * (self.data.len() - s.x_a.len() - s.v_a.len()) as f64
            }
            Branch::OddOdd => 1.0 + p.powf(-(n as f64) / 2.0) * (len(&s.x_a) + len(&s.v_a)),
            Branch::EvenOdd => 1.0 + 2f64.powf((d as f64 - n as f64) / 2.0) * len(&s.w),
            Branch::EvenEven => {
                1.0 + 2f64.powi(-((n / 2) as i32)) * (len(&s.y) + 2f64.powi(d) * (len(&s.z1) + len(&s.z2)))
            }
        }
    }
}

fn check_branch(ctx: &FieldCtx, spec: &GoldSpec, even: bool) -> Result<()> {
    if (ctx.p() == 2) != even {
        let want = if even { "p = 2" } else { "odd p" };
        return Err(Error::Characteristic(format!("this closed form needs {want}")));
    }
    if spec.c == Felt::ONE {
        return Err(Error::UnitMultiplier);
    }
    Ok(())
}

/// One entry from the odd-characteristic closed form.
pub fn entry_closed_odd(chars: &Characters<'_>, spec: &GoldSpec, a: Felt, b: Felt, tol: f64) -> Result<u32> {
    check_branch(chars.field(), spec, false)?;
    ClosedRow::new(chars, spec, a)?.entry(b, tol)
}

/// One entry from the characteristic-2 closed form.
pub fn entry_closed_even(chars: &Characters<'_>, spec: &GoldSpec, a: Felt, b: Felt, tol: f64) -> Result<u32> {
    check_branch(chars.field(), spec, true)?;
    ClosedRow::new(chars, spec, a)?.entry(b, tol)
}

/// One entry; `c = 1` is counted directly.
pub fn entry_closed(chars: &Characters<'_>, spec: &GoldSpec, a: Felt, b: Felt, tol: f64) -> Result<u32> {
    let ctx = chars.field();
    if spec.c == Felt::ONE {
        return Ok(cddt::entry_brute(ctx, &gold_table(ctx, spec), spec.c, a, b));
    }
    ClosedRow::new(chars, spec, a)?.entry(b, tol)
}

/// The whole table from the closed forms; `c = 1` is counted directly.
pub fn cddt_closed(chars: &Characters<'_>, spec: &GoldSpec, tol: f64) -> Result<Cddt> {
    cddt_closed_with(chars, spec, Conventions::default(), tol)
}

pub fn cddt_closed_with(chars: &Characters<'_>, spec: &GoldSpec, conv: Conventions, tol: f64) -> Result<Cddt> {
    let ctx = chars.field();
    if spec.c == Felt::ONE {
        return Ok(cddt::cddt_brute(ctx, &gold_table(ctx, spec), spec.c));
    }
    let q = ctx.size();
    let mut counts = Vec::with_capacity(q * q);
    for a in ctx.elements() {
        let row = ClosedRow::with_conventions(chars, spec, a, conv)?;
        for b in ctx.elements() {
            counts.push(row.entry(b, tol)?);
        }
    }
    Cddt::from_counts(spec.c, q, counts)
}

/// Root statistics of `y^(p^k+1) - B y + B` over `B != 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BluherReport {
    pub p: u32,
    pub n: u32,
    pub k: u32,
    /// `Q = p^gcd(n, k)`.
    pub big_q: u64,
    /// `n / gcd(n, k)`.
    pub m: u32,
    /// Number of `B` with exactly `Q + 1` roots, by brute force.
    pub count: u64,
    pub expected: u64,
    pub witnesses: Vec<Felt>,
}

impl BluherReport {
    pub fn passed(&self) -> bool {
        self.count == self.expected
    }
}

pub fn bluher_count(ctx: &FieldCtx, k: u32) -> Result<BluherReport> {
    let n = ctx.n();
    if k < 1 || k >= n {
        return Err(Error::OutOfRange(format!("need 1 <= k < n, got k = {k}")));
    }
    let d = n.gcd(&k);
    let m = n / d;
    if m < 3 {
        return Err(Error::Hypothesis(format!("n / gcd(n, k) = {m} < 3")));
    }
    let big_q = (ctx.p() as u64).pow(d);
    let e = (ctx.p() as u64).pow(k) + 1;
    let pows: Vec<Felt> = ctx.elements().map(|y| ctx.pow(y, e)).collect();
    let mut witnesses = Vec::new();
    for b in ctx.nonzero() {
        let roots =
            ctx.elements().filter(|&y| ctx.add(ctx.sub(pows[y.index()], ctx.mul(b, y)), b).is_zero()).count() as u64;
        if roots == big_q + 1 {
            witnesses.push(b);
        }
    }
    let q2 = big_q * big_q - 1;
    let expected = if m.is_multiple_of(2) { (big_q.pow(m - 1) - big_q) / q2 } else { (big_q.pow(m - 1) - 1) / q2 };
    Ok(BluherReport { p: ctx.p(), n, k, big_q, m, count: witnesses.len() as u64, expected, witnesses })
}

/// Brute-force check of the bounds on the uniformity of `x^(p^k+1) + x^(p^t)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub p: u32,
    pub n: u32,
    pub k: u32,
    pub t: u32,
    /// Failed hypotheses (`n >= 4`, `n / gcd(n, k) >= 3`); the checks below
    /// are informational when this is nonempty.
    pub violations: Vec<String>,
    pub upper: u64,
    /// Whether `x^(p^k - p^t + 1) = -1` has a root.
    pub root_condition: bool,
    /// `gcd(p^k - p^t + 1, p^n - 1) + 1`, when the root condition holds.
    pub gcd_lower: Option<u64>,
    /// `p^gcd(n, k) + 1` for `t` in `{0, k}`.
    pub existential_lower: Option<u64>,
    pub per_c: Vec<(Felt, u32)>,
    pub max_delta: u32,
    pub upper_ok: bool,
    /// Every `delta_c` is at least `gcd_lower`.
    pub lower_ok: Option<bool>,
    /// `Delta_c(0, 0)` equals `gcd_lower` for every `c`.
    pub origin_exact: Option<bool>,
    /// `max_c delta_c >= existential_lower`.
    pub existential_ok: Option<bool>,
}

impl BoundReport {
    /// Whether every applicable check holds. Reports with hypothesis
    /// violations never pass or fail; callers should inspect `violations`.
    pub fn holds(&self) -> bool {
        self.upper_ok
            && self.lower_ok.unwrap_or(true)
            && self.origin_exact.unwrap_or(true)
            && self.existential_ok.unwrap_or(true)
    }
}

pub fn thm_bounds(ctx: &FieldCtx, k: u32, t: u32) -> Result<BoundReport> {
    let (p, n) = (ctx.p(), ctx.n());
    if k < 1 || k >= n || t >= n {
        return Err(Error::OutOfRange(format!("need 1 <= k < n and t < n, got k = {k}, t = {t}")));
    }
    let d = n.gcd(&k);
    let mut violations = Vec::new();
    if n < 4 {
        violations.push(format!("n = {n} < 4"));
    }
    if n / d < 3 {
        violations.push(format!("n / gcd(n, k) = {} < 3", n / d));
    }
    let pk = (p as u64).pow(k);
    let pt = (p as u64).pow(t);
    let q1 = (ctx.q() - 1) as u64;
    let expo = (pk + 1).abs_diff(pt);
    let g = expo.gcd(&q1);
    let root_condition = ctx.is_power(ctx.minus_one(), expo);
    let gcd_lower = root_condition.then_some(g + 1);
    let existential_lower = (t == 0 || t == k).then(|| (p as u64).pow(d) + 1);

    let mut perturb = LinPoly::zero(ctx);
    perturb.add_term(ctx, t, Felt::ONE);
    let table = gold_table(ctx, &GoldSpec::new(ctx, k, perturb, Felt::ZERO)?);
    let per_c: Vec<(Felt, u32)> =
        ctx.elements().filter(|&c| c != Felt::ONE).map(|c| (c, cddt::uniformity_brute(ctx, &table, c))).collect();
    let max_delta = per_c.iter().map(|&(_, v)| v).max().unwrap_or(0);
    let upper = (pk + 1).max(pt);
    let origin = cddt::entry_brute(ctx, &table, Felt::ZERO, Felt::ZERO, Felt::ZERO) as u64;
    // Delta_c(0, 0) counts the zeros of G, independent of c != 1
    Ok(BoundReport {
        p,
        n,
        k,
        t,
        violations,
        upper,
        root_condition,
        gcd_lower,
        existential_lower,
        upper_ok: per_c.iter().all(|&(_, v)| v as u64 <= upper),
        lower_ok: gcd_lower.map(|lo| per_c.iter().all(|&(_, v)| v as u64 >= lo)),
        origin_exact: gcd_lower.map(|lo| origin == lo),
        existential_ok: existential_lower.map(|lo| max_delta as u64 >= lo),
        per_c,
        max_delta,
    })
}

/// `gcd(p^k + 1, p^n - 1)`, the number of preimages of a nonzero power under
/// the unperturbed Gold map.
pub fn gold_gcd(ctx: &FieldCtx, k: u32) -> Result<u64> {
    gcd_lemma(ctx.p() as u64, k, ctx.n())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cddt::cddt_brute;

    fn gf(p: u32, n: u32) -> FieldCtx {
        FieldCtx::new(p, n).unwrap()
    }

    fn spec(ctx: &FieldCtx, k: u32, p: &str, c: u32) -> GoldSpec {
        GoldSpec::new(ctx, k, LinPoly::parse(ctx, p).unwrap(), Felt(c)).unwrap()
    }

    #[test]
    fn gold_table_examples() {
        let f = gf(2, 3);
        let t = gold_table(&f, &spec(&f, 1, "zero", 0));
        assert_eq!(t, FnTable::power(&f, 3));
        let t = gold_table(&f, &spec(&f, 1, "identity", 0));
        assert_eq!(t.eval(Felt::ZERO), Felt::ZERO);
        assert!(GoldSpec::new(&f, 3, LinPoly::zero(&f), Felt(0)).is_err());
        assert!(GoldSpec::new(&f, 1, LinPoly::zero(&f), Felt(8)).is_err());
    }

    #[test]
    fn p_prime_examples() {
        let f = gf(3, 2);
        let s = spec(&f, 1, "identity", 0);
        assert_eq!(p_prime_of_a(&f, &s, Felt::ZERO), Felt::ZERO);
        let g = f.primitive();
        assert_eq!(p_prime_of_a(&f, &s, g), f.add(g, f.pow(g, 4)));
        let s0 = spec(&f, 1, "zero", 0);
        assert_eq!(p_prime_of_a(&f, &s0, g), f.pow(g, 4));
    }

    #[test]
    fn b_alpha_matches_companion_form() {
        let f = gf(3, 3);
        let s = spec(&f, 1, "2,1,5", 7);
        let comp = s.perturb.companion(&f, s.c);
        for a in f.elements() {
            for alpha in f.nonzero() {
                let direct = f.add(row_map(&f, 1, alpha).eval(&f, a), comp.eval(&f, alpha));
                assert_eq!(b_alpha(&f, &s, a, alpha), direct);
            }
        }
    }

    #[test]
    fn b_alpha_is_the_linear_coefficient() {
        // Tr(alpha (a x^(p^k) + a^(p^k) x + (1-c) P(x))) = Tr(B_alpha x)
        let f = gf(2, 4);
        let s = spec(&f, 1, "bin:0,3", 6);
        let omc = f.sub(Felt::ONE, s.c);
        for a in f.elements() {
            for alpha in f.nonzero() {
                let b = b_alpha(&f, &s, a, alpha);
                for x in f.elements() {
                    let lin = f.add(
                        f.add(f.mul(a, f.frobenius(x, 1)), f.mul(f.frobenius(a, 1), x)),
                        f.mul(omc, s.perturb.eval(&f, x)),
                    );
                    assert_eq!(f.trace_abs(f.mul(alpha, lin)), f.trace_abs(f.mul(b, x)));
                }
            }
        }
    }

    #[test]
    fn unperturbed_origin_row_is_all_x_a() {
        let f = gf(3, 2);
        let s = spec(&f, 1, "zero", 2);
        let ch = Characters::new(&f);
        let row = ClosedRow::new(&ch, &s, Felt::ZERO).unwrap();
        assert_eq!(row.sets().x_a.len(), 8);
    }

    #[test]
    fn closed_matches_brute_small() {
        for (p, n, k) in [(3, 2, 1), (2, 3, 1), (2, 4, 1), (2, 4, 2), (5, 2, 1)] {
            let f = gf(p, n);
            let ch = Characters::new(&f);
            for pert in ["zero", "identity", "bin:0,1"] {
                for c in f.elements().filter(|&c| c != Felt::ONE) {
                    let s = spec(&f, k, pert, c.0);
                    let closed = cddt_closed(&ch, &s, 1e-6).unwrap();
                    let brute = cddt_brute(&f, &gold_table(&f, &s), c);
                    assert_eq!(closed, brute, "GF({p}^{n}) k={k} P={pert} c={c}");
                }
            }
        }
    }

    #[test]
    fn entry_dispatch_errors() {
        let f = gf(3, 2);
        let ch = Characters::new(&f);
        let s = spec(&f, 1, "zero", 1);
        assert_eq!(entry_closed_odd(&ch, &s, Felt(1), Felt(1), 1e-6), Err(Error::UnitMultiplier));
        assert_eq!(
            entry_closed(&ch, &s, Felt(1), Felt(1), 1e-6).unwrap(),
            cddt::entry_brute(&f, &gold_table(&f, &s), Felt::ONE, Felt(1), Felt(1))
        );
        let s2 = spec(&f, 1, "zero", 2);
        assert!(matches!(entry_closed_even(&ch, &s2, Felt(1), Felt(1), 1e-6), Err(Error::Characteristic(_))));
    }

    #[test]
    fn t1_factor_golden() {
        // GF(9), k = 1, P = 0, c = 2, a = b = 0: x^4 = 0 has one root, and
        // Sigma_1 = 2, so p^d - 1 shifts the value by (-1) * 2 * 3 * 2 / 9
        let f = gf(3, 2);
        let ch = Characters::new(&f);
        let s = spec(&f, 1, "zero", 2);
        let brute = cddt::entry_brute(&f, &gold_table(&f, &s), s.c, Felt::ZERO, Felt::ZERO);
        assert_eq!(brute, 1);
        let good = ClosedRow::new(&ch, &s, Felt::ZERO).unwrap();
        assert_eq!(good.entry(Felt::ZERO, 1e-6).unwrap(), 1);
        let conv = Conventions { t1_factor: T1Factor::PdMinusOne, ..Default::default() };
        let bad = ClosedRow::with_conventions(&ch, &s, Felt::ZERO, conv).unwrap();
        let z = bad.value(Felt::ZERO).unwrap();
        assert!((z.re - (1.0 - 4.0 / 3.0)).abs() < 1e-9, "{z}");
    }

    #[test]
    fn rhs_sign_is_immaterial() {
        let f = gf(3, 3);
        let ch = Characters::new(&f);
        let s = spec(&f, 1, "identity", 2);
        let minus = Conventions { rhs_sign: RhsSign::Minus, ..Default::default() };
        assert_eq!(cddt_closed(&ch, &s, 1e-6).unwrap(), cddt_closed_with(&ch, &s, minus, 1e-6).unwrap());
    }

    #[test]
    fn bluher_examples() {
        assert_eq!(bluher_count(&gf(3, 4), 1).unwrap().count, 3);
        assert_eq!(bluher_count(&gf(2, 4), 1).unwrap().count, 2);
        let r = bluher_count(&gf(2, 3), 1).unwrap();
        assert_eq!((r.count, r.expected), (1, 1));
        assert!(matches!(bluher_count(&gf(2, 4), 2), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn bound_examples() {
        let r = thm_bounds(&gf(2, 4), 1, 0).unwrap();
        assert!(r.violations.is_empty());
        assert_eq!((r.upper, r.max_delta), (3, 3));
        assert!(r.holds());
        let r = thm_bounds(&gf(3, 4), 1, 0).unwrap();
        assert_eq!(r.upper, 4);
        assert!(r.max_delta >= 4);
        assert!(r.holds());
        let r = thm_bounds(&gf(2, 3), 1, 1).unwrap();
        assert_eq!(r.violations.len(), 1);
    }
}
