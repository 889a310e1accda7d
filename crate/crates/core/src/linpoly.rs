//! Linearized polynomials `P(x) = sum a_i x^(p^i)` and their F_p-linear algebra.
//!
//! Permutation and solvability questions are answered by Gaussian elimination
//! on the n x n matrix of `P` over F_p, never by exponent criteria.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Felt, FieldCtx};

/// `sum_{i < n} a_i x^(p^i)`, stored as the coefficient vector `(a_0, .., a_{n-1})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinPoly {
    coeffs: Vec<Felt>,
}

impl LinPoly {
    pub fn new(ctx: &FieldCtx, coeffs: Vec<Felt>) -> Result<Self> {
        if coeffs.len() != ctx.n() as usize {
            return Err(Error::OutOfRange(format!(
                "linearized polynomial needs {} coefficients, got {}",
                ctx.n(),
                coeffs.len()
            )));
        }
        if let Some(bad) = coeffs.iter().find(|c| c.0 >= ctx.q()) {
            return Err(Error::OutOfRange(format!("coefficient {bad} outside GF({})", ctx.spec())));
        }
        Ok(LinPoly { coeffs })
    }

    pub fn zero(ctx: &FieldCtx) -> Self {
        LinPoly { coeffs: vec![Felt::ZERO; ctx.n() as usize] }
    }

    pub fn identity(ctx: &FieldCtx) -> Self {
        Self::monomial(ctx, 0)
    }

    /// `x^(p^i)`, with `i` reduced mod `n`.
    pub fn monomial(ctx: &FieldCtx, i: u32) -> Self {
        let mut p = Self::zero(ctx);
        p.coeffs[(i % ctx.n()) as usize] = Felt::ONE;
        p
    }

    /// `x^(p^i) + x^(p^j)`. For `i == j` this is `2 x^(p^i)`.
    pub fn binomial(ctx: &FieldCtx, i: u32, j: u32) -> Self {
        let mut p = Self::monomial(ctx, i);
        let j = (j % ctx.n()) as usize;
        p.coeffs[j] = ctx.add(p.coeffs[j], Felt::ONE);
        p
    }

    /// Parses `identity`, `zero`, `mono:i`, `bin:i,j` or a comma-separated
    /// coefficient list `a0,a1,..,a(n-1)` of element values.
    pub fn parse(ctx: &FieldCtx, spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let index = |s: &str| -> Result<u32> {
            let i = s.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad exponent index {s:?}")))?;
            if i >= ctx.n() {
                return Err(Error::OutOfRange(format!("exponent index {i} must be below n = {}", ctx.n())));
            }
            Ok(i)
        };
        match spec {
            "zero" => return Ok(Self::zero(ctx)),
            "identity" | "id" => return Ok(Self::identity(ctx)),
            _ => {}
        }
        if let Some(rest) = spec.strip_prefix("mono:") {
            return Ok(Self::monomial(ctx, index(rest)?));
        }
        if let Some(rest) = spec.strip_prefix("bin:") {
            let (i, j) =
                rest.split_once(',').ok_or_else(|| Error::Parse(format!("binomial needs two indices: {spec:?}")))?;
            return Ok(Self::binomial(ctx, index(i)?, index(j)?));
        }
        let coeffs = spec
            .split(',')
            .map(|c| {
                let v = c.trim().parse::<u64>().map_err(|_| Error::Parse(format!("bad coefficient {c:?}")))?;
                ctx.element(v)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(ctx, coeffs)
    }

    pub fn coeffs(&self) -> &[Felt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Felt {
        self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, ctx: &FieldCtx, other: &LinPoly) -> LinPoly {
        LinPoly { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| ctx.add(a, b)).collect() }
    }

    /// Adds `c * x^(p^i)`.
    pub fn add_term(&mut self, ctx: &FieldCtx, i: u32, c: Felt) {
        let i = (i % ctx.n()) as usize;
        self.coeffs[i] = ctx.add(self.coeffs[i], c);
    }

    pub fn eval(&self, ctx: &FieldCtx, x: Felt) -> Felt {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .fold(Felt::ZERO, |acc, (i, &a)| ctx.add(acc, ctx.mul(a, ctx.frobenius(x, i as u32))))
    }

    /// Column `j` holds the digits of `P(e_j)`, where `e_j` is the element whose
    /// digit vector is the j-th unit vector.
    pub fn matrix(&self, ctx: &FieldCtx) -> FpMatrix {
        let n = ctx.n() as usize;
        let mut m = FpMatrix::zeros(ctx.p(), n, n);
        let mut basis = 1u32;
        for j in 0..n {
            let col = ctx.digits(self.eval(ctx, Felt(basis)));
            for (i, d) in col.into_iter().enumerate() {
                m.set(i, j, d);
            }
            basis *= ctx.p();
        }
        m
    }

    /// Basis of the kernel, as field elements.
    pub fn kernel(&self, ctx: &FieldCtx) -> Vec<Felt> {
        self.matrix(ctx)
            .kernel_basis()
            .into_iter()
            .map(|v| ctx.from_digits(&v).expect("kernel vectors are digit vectors"))
            .collect()
    }

    /// All `x` with `P(x) = b`: `None`, or a coset of the kernel.
    pub fn solve_affine(&self, ctx: &FieldCtx, b: Felt) -> Option<Coset> {
        let m = self.matrix(ctx);
        let particular = m.solve(&ctx.digits(b))?;
        let basis = m
            .kernel_basis()
            .into_iter()
            .map(|v| ctx.from_digits(&v).expect("kernel vectors are digit vectors"))
            .collect();
        Some(Coset { particular: ctx.from_digits(&particular).expect("solutions are digit vectors"), basis })
    }

    /// True iff the kernel is trivial.
    pub fn is_permutation(&self, ctx: &FieldCtx) -> bool {
        self.matrix(ctx).rank() == ctx.n() as usize
    }

    /// The c-companion `P*(x) = sum ((1-c) a_i)^(p^(n-i)) x^(p^(n-i))`, indices
    /// reduced mod n. It satisfies `Tr(alpha (1-c) P(x)) = Tr(P*(alpha) x)`.
    pub fn companion(&self, ctx: &FieldCtx, c: Felt) -> LinPoly {
        let n = ctx.n();
        let one_minus_c = ctx.sub(Felt::ONE, c);
        let mut out = LinPoly::zero(ctx);
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let shift = (n - i as u32) % n;
            out.coeffs[shift as usize] = ctx.frobenius(ctx.mul(one_minus_c, a), shift);
        }
        out
    }
}

impl fmt::Display for LinPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// An affine solution set `particular + span(basis)` over F_p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coset {
    pub particular: Felt,
    pub basis: Vec<Felt>,
}

impl Coset {
    /// Kernel dimension over F_p.
    pub fn dim(&self) -> u32 {
        self.basis.len() as u32
    }

    /// Number of elements, `p^dim`.
    pub fn len(&self, ctx: &FieldCtx) -> u64 {
        (ctx.p() as u64).pow(self.dim())
    }

    /// Enumerates every element of the coset.
    pub fn elements(&self, ctx: &FieldCtx) -> Vec<Felt> {
        let mut out = vec![self.particular];
        for &v in &self.basis {
            let mut next = Vec::with_capacity(out.len() * ctx.p() as usize);
            for &x in &out {
                let mut acc = x;
                for _ in 0..ctx.p() {
                    next.push(acc);
                    acc = ctx.add(acc, v);
                }
            }
            out = next;
        }
        out
    }
}

/// A dense matrix over F_p, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpMatrix {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl FpMatrix {
    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        FpMatrix { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v % self.p;
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        (0..self.rows)
            .map(|i| {
                let s: u64 = (0..self.cols).map(|j| self.get(i, j) as u64 * v[j] as u64).sum();
                (s % self.p as u64) as u32
            })
            .collect()
    }

    pub fn mul(&self, other: &FpMatrix) -> FpMatrix {
        let mut out = FpMatrix::zeros(self.p, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let s: u64 = (0..self.cols).map(|k| self.get(i, k) as u64 * other.get(k, j) as u64).sum();
                out.set(i, j, (s % self.p as u64) as u32);
            }
        }
        out
    }

    fn inv_p(&self, a: u32) -> u32 {
        let p = self.p as u64;
        let mut result = 1u64;
        let mut b = a as u64 % p;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                result = result * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        result as u32
    }

    /// Reduced row echelon form of `[self | rhs]`, returning the pivot columns.
    fn rref(&self, rhs: Option<&[u32]>) -> (Vec<Vec<u32>>, Vec<usize>) {
        let p = self.p as u64;
        let mut a: Vec<Vec<u32>> = (0..self.rows)
            .map(|i| {
                let mut row: Vec<u32> = (0..self.cols).map(|j| self.get(i, j)).collect();
                if let Some(b) = rhs {
                    row.push(b[i] % self.p);
                }
                row
            })
            .collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..self.cols {
            let Some(piv) = (r..self.rows).find(|&i| a[i][col] != 0) else {
                continue;
            };
            a.swap(r, piv);
            let inv = self.inv_p(a[r][col]) as u64;
            for x in a[r].iter_mut() {
                *x = (*x as u64 * inv % p) as u32;
            }
            let pivot = a[r].clone();
            for (i, row) in a.iter_mut().enumerate() {
                if i != r && row[col] != 0 {
                    let f = row[col] as u64;
                    for (x, &y) in row.iter_mut().zip(&pivot) {
                        *x = ((*x as u64 + p - f * y as u64 % p) % p) as u32;
                    }
                }
            }
            pivots.push(col);
            r += 1;
            if r == self.rows {
                break;
            }
        }
        (a, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref(None).1.len()
    }

    /// Basis of the right kernel.
    pub fn kernel_basis(&self) -> Vec<Vec<u32>> {
        let (a, pivots) = self.rref(None);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![0u32; self.cols];
                v[f] = 1;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = (self.p - a[r][f]) % self.p;
                }
                v
            })
            .collect()
    }

    /// One solution of `self * x = b`, if any.
    pub fn solve(&self, b: &[u32]) -> Option<Vec<u32>> {
        let (a, pivots) = self.rref(Some(b));
        let last = self.cols;
        // inconsistent iff some zero row has a nonzero right-hand side
        if a.iter().skip(pivots.len()).any(|row| row[last] != 0) {
            return None;
        }
        let mut x = vec![0u32; self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = a[r][last];
        }
        Some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u32, n: u32) -> FieldCtx {
        FieldCtx::new(p, n).unwrap()
    }

    #[test]
    fn eval_examples() {
        let f = gf(2, 3);
        let id = LinPoly::identity(&f);
        for x in f.elements() {
            assert_eq!(id.eval(&f, x), x);
        }
        let sq = LinPoly::monomial(&f, 1);
        assert_eq!(sq.eval(&f, Felt(3)), f.mul(Felt(3), Felt(3)));
        assert_eq!(sq.eval(&f, Felt(3)), Felt(5));
        assert_eq!(sq.eval(&f, Felt::ZERO), Felt::ZERO);
    }

    #[test]
    fn matrix_examples() {
        let f = gf(2, 2);
        assert_eq!(LinPoly::identity(&f).matrix(&f), FpMatrix::identity(2, 2));
        assert_eq!(LinPoly::zero(&f).matrix(&f), FpMatrix::zeros(2, 2, 2));
        let frob = LinPoly::monomial(&f, 1).matrix(&f);
        assert_ne!(frob, FpMatrix::identity(2, 2));
        assert_eq!(frob.mul(&frob), FpMatrix::identity(2, 2));
    }

    #[test]
    fn matrix_reproduces_eval() {
        for (p, n) in [(2, 4), (3, 3), (5, 2)] {
            let f = gf(p, n);
            let poly = LinPoly::new(&f, (0..n).map(|i| Felt((7 * i + 3) % f.q())).collect()).unwrap();
            let m = poly.matrix(&f);
            for x in f.elements() {
                let via_matrix = f.from_digits(&m.mul_vec(&f.digits(x))).unwrap();
                assert_eq!(via_matrix, poly.eval(&f, x));
            }
        }
    }

    #[test]
    fn solve_examples() {
        let f = gf(2, 2);
        let id = LinPoly::identity(&f);
        for b in f.elements() {
            let s = id.solve_affine(&f, b).unwrap();
            assert_eq!(s.elements(&f), vec![b]);
        }
        // x^2 + x over GF(4): kernel F_2, image {0, 1}
        let l = LinPoly::binomial(&f, 0, 1);
        let mut zeros = l.solve_affine(&f, Felt::ZERO).unwrap().elements(&f);
        zeros.sort();
        assert_eq!(zeros, vec![Felt(0), Felt(1)]);
        assert!(l.solve_affine(&f, f.primitive()).is_none());
    }

    #[test]
    fn permutation_examples() {
        let f4 = gf(2, 2);
        assert!(LinPoly::identity(&f4).is_permutation(&f4));
        assert!(!LinPoly::binomial(&f4, 0, 1).is_permutation(&f4));
        let f8 = gf(2, 3);
        assert!(!LinPoly::binomial(&f8, 0, 1).is_permutation(&f8));
    }

    #[test]
    fn companion_examples() {
        let f = gf(3, 2);
        for c in f.elements() {
            let id = LinPoly::identity(&f).companion(&f, c);
            assert_eq!(id.coeffs()[0], f.sub(Felt::ONE, c));
            assert!(id.coeffs()[1..].iter().all(|x| x.is_zero()));
            assert!(LinPoly::zero(&f).companion(&f, c).is_zero());
        }
        let cube = LinPoly::monomial(&f, 1).companion(&f, Felt::ZERO);
        assert_eq!(cube.coeffs(), &[Felt::ZERO, Felt::ONE]);
    }

    #[test]
    fn parse_forms() {
        let f = gf(2, 4);
        assert_eq!(LinPoly::parse(&f, "mono:2").unwrap(), LinPoly::monomial(&f, 2));
        assert_eq!(LinPoly::parse(&f, "bin:0,3").unwrap(), LinPoly::binomial(&f, 0, 3));
        assert_eq!(LinPoly::parse(&f, "identity").unwrap(), LinPoly::identity(&f));
        assert_eq!(LinPoly::parse(&f, "zero").unwrap(), LinPoly::zero(&f));
        assert_eq!(LinPoly::parse(&f, "1,0,0,1").unwrap(), LinPoly::binomial(&f, 0, 3));
        assert!(LinPoly::parse(&f, "mono:4").is_err());
        assert!(LinPoly::parse(&f, "1,2").is_err());
        assert!(LinPoly::parse(&f, "16,0,0,0").is_err());
    }

    #[test]
    fn coset_enumeration_size() {
        let f = gf(3, 2);
        let l = LinPoly::zero(&f);
        let s = l.solve_affine(&f, Felt::ZERO).unwrap();
        assert_eq!(s.len(&f), 9);
        let mut all = s.elements(&f);
        all.sort();
        all.dedup();
        assert_eq!(all.len(), 9);
    }
}
