//! c-differential tables.
//!
//! The entry `Delta_F(a, b)` counts the solutions `x` of
//! `F(x + a) - c F(x) = b`. When `c = 1` the row `a = 0` is trivial and is
//! excluded from the uniformity; every other pair `(a, b)` is admissible.

use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;

use crate::charsum::{pairwise_sum, round_integral, CSum, Characters};
use crate::error::{Error, Result};
use crate::field::{Felt, FieldCtx};

/// A function GF(q) -> GF(q) stored as its value table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FnTable {
    values: Vec<Felt>,
}

impl FnTable {
    pub fn new(ctx: &FieldCtx, values: Vec<Felt>) -> Result<Self> {
        if values.len() != ctx.size() {
            return Err(Error::TableLength { got: values.len(), expected: ctx.size() });
        }
        if let Some(bad) = values.iter().find(|v| v.0 >= ctx.q()) {
            return Err(Error::OutOfRange(format!("table value {bad} is not an element of GF({})", ctx.spec())));
        }
        Ok(FnTable { values })
    }

    pub fn from_fn(ctx: &FieldCtx, f: impl Fn(Felt) -> Felt) -> Self {
        FnTable { values: ctx.elements().map(f).collect() }
    }

    pub fn identity(ctx: &FieldCtx) -> Self {
        Self::from_fn(ctx, |x| x)
    }

    pub fn power(ctx: &FieldCtx, e: u64) -> Self {
        Self::from_fn(ctx, |x| ctx.pow(x, e))
    }

    /// Parses q integers separated by commas and/or whitespace.
    pub fn parse(ctx: &FieldCtx, text: &str) -> Result<Self> {
        let values = text
            .split(|ch: char| ch == ',' || ch.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<u64>()
                    .map_err(|_| Error::Parse(format!("bad table entry {s:?}")))
                    .and_then(|v| ctx.element(v))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(ctx, values)
    }

    #[inline]
    pub fn eval(&self, x: Felt) -> Felt {
        self.values[x.index()]
    }

    pub fn values(&self) -> &[Felt] {
        &self.values
    }

    /// Whether the function is a bijection.
    pub fn is_permutation(&self) -> bool {
        let mut seen = vec![false; self.values.len()];
        self.values.iter().all(|v| !std::mem::replace(&mut seen[v.index()], true))
    }
}

/// Whether `(a, b)` counts toward the uniformity for multiplier `c`.
#[inline]
pub fn admissible(c: Felt, a: Felt) -> bool {
    !(c == Felt::ONE && a.is_zero())
}

/// A full c-differential table, row-major in `a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cddt {
    c: Felt,
    q: usize,
    counts: Vec<u32>,
    uniformity: u32,
}

impl Cddt {
    pub fn from_counts(c: Felt, q: usize, counts: Vec<u32>) -> Result<Self> {
        if counts.len() != q * q {
            return Err(Error::TableLength { got: counts.len(), expected: q * q });
        }
        let uniformity = (0..q)
            .filter(|&a| admissible(c, Felt(a as u32)))
            .flat_map(|a| counts[a * q..(a + 1) * q].iter().copied())
            .max()
            .unwrap_or(0);
        Ok(Cddt { c, q, counts, uniformity })
    }

    pub fn c(&self) -> Felt {
        self.c
    }

    pub fn q(&self) -> usize {
        self.q
    }

    #[inline]
    pub fn get(&self, a: Felt, b: Felt) -> u32 {
        self.counts[a.index() * self.q + b.index()]
    }

    pub fn row(&self, a: Felt) -> &[u32] {
        &self.counts[a.index() * self.q..(a.index() + 1) * self.q]
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    /// The c-differential uniformity: the largest admissible entry.
    pub fn uniformity(&self) -> u32 {
        self.uniformity
    }

    /// Every row sums to q.
    pub fn rows_sum_to_q(&self) -> bool {
        self.counts.chunks(self.q).all(|r| r.iter().map(|&v| v as usize).sum::<usize>() == self.q)
    }

    /// Admissible `(a, b, count)` triples in row-major order.
    pub fn admissible_entries(&self) -> impl Iterator<Item = (Felt, Felt, u32)> + '_ {
        let q = self.q;
        self.counts.iter().enumerate().filter_map(move |(i, &v)| {
            let (a, b) = (Felt((i / q) as u32), Felt((i % q) as u32));
            admissible(self.c, a).then_some((a, b, v))
        })
    }

    /// Writes `a,b,count` lines with a header.
    pub fn write_csv<W: Write>(&self, out: W, admissible_only: bool) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(["a", "b", "count"]).map_err(io)?;
        for (i, &v) in self.counts.iter().enumerate() {
            let a = (i / self.q) as u32;
            if admissible_only && !admissible(self.c, Felt(a)) {
                continue;
            }
            w.serialize((a, i % self.q, v)).map_err(io)?;
        }
        w.flush().map_err(|e| Error::Io(e.to_string()))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<&[u32]> = self.counts.chunks(self.q).collect();
        serde_json::json!({
            "c": self.c,
            "q": self.q,
            "uniformity": self.uniformity,
            "counts": rows,
        })
    }

    /// Markdown grid, rows indexed by `a` and columns by `b`.
    pub fn to_markdown(&self) -> Result<String> {
        const MAX_Q: usize = 64;
        if self.q > MAX_Q {
            return Err(Error::OutOfRange(format!("markdown output is limited to q <= {MAX_Q}")));
        }
        let mut s = String::from("| a\\b |");
        for b in 0..self.q {
            s.push_str(&format!(" {b} |"));
        }
        s.push_str("\n|---|");
        s.push_str(&"---|".repeat(self.q));
        for (a, row) in self.counts.chunks(self.q).enumerate() {
            s.push_str(&format!("\n| {a} |"));
            for v in row {
                s.push_str(&format!(" {v} |"));
            }
        }
        s.push('\n');
        Ok(s)
    }
}

fn scaled_table(ctx: &FieldCtx, f: &FnTable, c: Felt) -> Vec<Felt> {
    f.values().iter().map(|&y| ctx.mul(c, y)).collect()
}

/// Fills `row` with the counts of `F(x + a) - c F(x)`.
fn fill_row(ctx: &FieldCtx, f: &FnTable, cf: &[Felt], a: Felt, row: &mut [u32]) {
    row.fill(0);
    for x in ctx.elements() {
        row[ctx.sub(f.eval(ctx.add(x, a)), cf[x.index()]).index()] += 1;
    }
}

/// The c-differential table by direct counting, O(q^2).
pub fn cddt_brute(ctx: &FieldCtx, f: &FnTable, c: Felt) -> Cddt {
    let q = ctx.size();
    let cf = scaled_table(ctx, f, c);
    let mut counts = vec![0u32; q * q];
    for (a, row) in ctx.elements().zip(counts.chunks_mut(q)) {
        fill_row(ctx, f, &cf, a, row);
    }
    Cddt::from_counts(c, q, counts).expect("q x q table")
}

/// One entry by direct counting, O(q).
pub fn entry_brute(ctx: &FieldCtx, f: &FnTable, c: Felt, a: Felt, b: Felt) -> u32 {
    ctx.elements().filter(|&x| ctx.sub(f.eval(ctx.add(x, a)), ctx.mul(c, f.eval(x))) == b).count() as u32
}

/// The uniformity alone, streaming one row at a time.
pub fn uniformity_brute(ctx: &FieldCtx, f: &FnTable, c: Felt) -> u32 {
    let cf = scaled_table(ctx, f, c);
    let mut row = vec![0u32; ctx.size()];
    let mut best = 0;
    for a in ctx.elements().filter(|&a| admissible(c, a)) {
        fill_row(ctx, f, &cf, a, &mut row);
        best = best.max(row.iter().copied().max().unwrap_or(0));
    }
    best
}

/// Histogram value -> multiplicity over the admissible entries.
pub fn uniformity_spectrum(ctx: &FieldCtx, f: &FnTable, c: Felt) -> BTreeMap<u32, u64> {
    let cf = scaled_table(ctx, f, c);
    let mut row = vec![0u32; ctx.size()];
    let mut hist = BTreeMap::new();
    for a in ctx.elements().filter(|&a| admissible(c, a)) {
        fill_row(ctx, f, &cf, a, &mut row);
        for &v in &row {
            *hist.entry(v).or_insert(0) += 1;
        }
    }
    hist
}

/// `U_alpha = sum_x chi1(alpha (F(x + a) - c F(x)))`, summed literally.
pub fn u_alpha(chars: &Characters<'_>, f: &FnTable, c: Felt, a: Felt, alpha: Felt) -> CSum {
    let ctx = chars.field();
    let terms: Vec<CSum> = ctx
        .elements()
        .map(|x| {
            let v = ctx.sub(f.eval(ctx.add(x, a)), ctx.mul(c, f.eval(x)));
            chars.chi1(ctx.mul(alpha, v))
        })
        .collect();
    pairwise_sum(&terms)
}

/// `1 + (1/q) sum_{alpha != 0} chi1(-b alpha) U_alpha`, rounded.
fn assemble(chars: &Characters<'_>, us: &[CSum], b: Felt, tol: f64) -> Result<u32> {
    let ctx = chars.field();
    let terms: Vec<CSum> =
        ctx.nonzero().map(|alpha| chars.chi1(ctx.neg(ctx.mul(b, alpha))) * us[alpha.index()]).collect();
    let z = CSum::new(1.0, 0.0) + pairwise_sum(&terms) / ctx.q() as f64;
    let v = round_integral(z, tol)?;
    u32::try_from(v).map_err(|_| Error::OutOfRange(format!("negative count {v}")))
}

fn u_row(chars: &Characters<'_>, f: &FnTable, c: Felt, a: Felt) -> Vec<CSum> {
    let ctx = chars.field();
    let mut us = vec![CSum::new(0.0, 0.0); ctx.size()];
    for alpha in ctx.nonzero() {
        us[alpha.index()] = u_alpha(chars, f, c, a, alpha);
    }
    us
}

/// One entry through the character expansion, O(q^2).
pub fn cddt_entry_char(chars: &Characters<'_>, f: &FnTable, c: Felt, a: Felt, b: Felt, tol: f64) -> Result<u32> {
    assemble(chars, &u_row(chars, f, c, a), b, tol)
}

/// The full table through the character expansion, O(q^3).
pub fn cddt_char(chars: &Characters<'_>, f: &FnTable, c: Felt, tol: f64) -> Result<Cddt> {
    let ctx = chars.field();
    let q = ctx.size();
    let mut counts = Vec::with_capacity(q * q);
    for a in ctx.elements() {
        let us = u_row(chars, f, c, a);
        for b in ctx.elements() {
            counts.push(assemble(chars, &us, b, tol)?);
        }
    }
    Cddt::from_counts(c, q, counts)
}

/// The multipliers a sweep ranges over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CRange {
    /// Every `c != 1`, including `c = 0`.
    AllButOne,
    /// Every `c` outside `{0, 1}`.
    NonzeroButOne,
    Custom(Vec<Felt>),
}

impl CRange {
    pub fn values(&self, ctx: &FieldCtx) -> Vec<Felt> {
        match self {
            CRange::AllButOne => ctx.elements().filter(|&c| c != Felt::ONE).collect(),
            CRange::NonzeroButOne => ctx.nonzero().filter(|&c| c != Felt::ONE).collect(),
            CRange::Custom(cs) => cs.clone(),
        }
    }
}

/// Result of maximizing the uniformity over a set of multipliers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BetaMax {
    pub beta: u32,
    /// Every multiplier attaining `beta`, ascending.
    pub argmax: Vec<Felt>,
    pub per_c: Vec<(Felt, u32)>,
}

pub fn beta_max(ctx: &FieldCtx, f: &FnTable, range: &CRange) -> Result<BetaMax> {
    let cs = range.values(ctx);
    if cs.is_empty() {
        return Err(Error::EmptyRange);
    }
    let per_c: Vec<(Felt, u32)> = cs.iter().map(|&c| (c, uniformity_brute(ctx, f, c))).collect();
    let beta = per_c.iter().map(|&(_, u)| u).max().unwrap_or(0);
    let mut argmax: Vec<Felt> = per_c.iter().filter(|&&(_, u)| u == beta).map(|&(c, _)| c).collect();
    argmax.sort();
    Ok(BetaMax { beta, argmax, per_c })
}
