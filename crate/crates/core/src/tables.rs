//! Sweeps of `beta_G = max_{c != 1} delta_{G,c}` for
//! `G(x) = x^(2^k+1) + x^(2^i) + x^(2^j)` over GF(2^n), n = 3..=6.
//!
//! Row `(0, 0)` stands for the unperturbed Gold function; the other rows are
//! all pairs `0 <= i < j < n` in lexicographic order. Columns are
//! `k = 1..n-1`.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::cddt::{beta_max, CRange, FnTable};
use crate::error::{Error, Result};
use crate::field::{Felt, FieldCtx};

/// Extension degrees covered by the reference grids.
pub const DEGREES: [u32; 4] = [3, 4, 5, 6];

/// Row labels in rendering order.
pub fn row_labels(n: u32) -> Vec<(u32, u32)> {
    let mut rows = vec![(0, 0)];
    for i in 0..n {
        for j in i + 1..n {
            rows.push((i, j));
        }
    }
    rows
}

/// `x^(2^k+1) + x^(2^i) + x^(2^j)`, or the plain power for row `(0, 0)`.
pub fn row_function(ctx: &FieldCtx, k: u32, (i, j): (u32, u32)) -> FnTable {
    let e = (ctx.p() as u64).pow(k) + 1;
    FnTable::from_fn(ctx, |x| {
        let g = ctx.pow(x, e);
        if (i, j) == (0, 0) {
            g
        } else {
            ctx.add(g, ctx.add(ctx.frobenius(x, i), ctx.frobenius(x, j)))
        }
    })
}

/// One grid: `values[r][k - 1]` for row `rows[r]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BetaTable {
    pub n: u32,
    pub rows: Vec<(u32, u32)>,
    pub values: Vec<Vec<u32>>,
}

impl BetaTable {
    pub fn get(&self, row: (u32, u32), k: u32) -> Option<u32> {
        let r = self.rows.iter().position(|&x| x == row)?;
        self.values[r].get(k as usize - 1).copied()
    }

    /// Plain text grid, one line per row.
    pub fn render_text(&self) -> String {
        let mut s = format!("n = {}\n(i,j)", self.n);
        for k in 1..self.n {
            let _ = write!(s, "\tk={k}");
        }
        s.push('\n');
        for (row, vals) in self.rows.iter().zip(&self.values) {
            let _ = write!(s, "({},{})", row.0, row.1);
            for v in vals {
                let _ = write!(s, "\t{v}");
            }
            s.push('\n');
        }
        s
    }

    pub fn render_markdown(&self) -> String {
        let mut s = format!("**GF(2^{})**\n\n| (i,j) |", self.n);
        for k in 1..self.n {
            let _ = write!(s, " k={k} |");
        }
        s.push_str("\n|---|");
        s.push_str(&"---|".repeat(self.n as usize - 1));
        s.push('\n');
        for (row, vals) in self.rows.iter().zip(&self.values) {
            let _ = write!(s, "| ({},{}) |", row.0, row.1);
            for v in vals {
                let _ = write!(s, " {v} |");
            }
            s.push('\n');
        }
        s
    }

    /// `n,i,j,k,beta` lines without a header.
    pub fn csv_rows(&self) -> Vec<[u32; 5]> {
        let mut out = Vec::new();
        for (row, vals) in self.rows.iter().zip(&self.values) {
            for (k, &v) in (1..).zip(vals) {
                out.push([self.n, row.0, row.1, k, v]);
            }
        }
        out
    }
}

/// Computes the grid for GF(2^n) by brute force over the multiplier range.
pub fn sweep(n: u32, range: &CRange) -> Result<BetaTable> {
    let ctx = FieldCtx::new(2, n)?;
    let rows = row_labels(n);
    let cells: Vec<((u32, u32), u32)> = rows.iter().flat_map(|&r| (1..n).map(move |k| (r, k))).collect();
    let betas = cells
        .par_iter()
        .map(|&(r, k)| beta_max(&ctx, &row_function(&ctx, k, r), range).map(|b| b.beta))
        .collect::<Result<Vec<u32>>>()?;
    let values = betas.chunks(n as usize - 1).map(<[u32]>::to_vec).collect();
    Ok(BetaTable { n, rows, values })
}

/// Published grids for n = 3..=6.
pub fn reference(n: u32) -> Result<BetaTable> {
    let values: Vec<Vec<u32>> = match n {
        3 => vec![vec![3, 3], vec![3, 4], vec![4, 3], vec![4, 4]],
        4 => vec![
            vec![3, 5, 3],
            vec![3, 5, 4],
            vec![4, 5, 6],
            vec![6, 5, 3],
            vec![4, 5, 5],
            vec![6, 5, 4],
            vec![5, 5, 6],
        ],
        5 => vec![
            vec![3, 3, 3, 3],
            vec![3, 5, 5, 4],
            vec![4, 3, 6, 6],
            vec![6, 5, 3, 6],
            vec![6, 6, 5, 3],
            vec![4, 5, 6, 7],
            vec![6, 7, 5, 6],
            vec![6, 6, 7, 4],
            vec![7, 5, 6, 5],
            vec![6, 6, 6, 6],
            vec![5, 6, 5, 6],
        ],
        6 => vec![
            vec![3, 5, 9, 5, 3],
            vec![3, 5, 9, 5, 4],
            vec![4, 5, 6, 5, 7],
            vec![7, 5, 9, 10, 7],
            vec![7, 5, 9, 5, 6],
            vec![6, 10, 6, 5, 3],
            vec![4, 5, 8, 7, 6],
            vec![7, 8, 9, 5, 6],
            vec![7, 6, 15, 5, 8],
            vec![6, 10, 6, 8, 4],
            vec![6, 5, 6, 10, 9],
            vec![6, 5, 6, 5, 7],
            vec![8, 10, 13, 6, 7],
            vec![9, 7, 9, 10, 7],
            vec![7, 5, 6, 10, 7],
            vec![7, 10, 8, 5, 6],
        ],
        _ => return Err(Error::OutOfRange(format!("no reference grid for n = {n}"))),
    };
    Ok(BetaTable { n, rows: row_labels(n), values })
}

/// A cell where two grids disagree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub n: u32,
    pub row: (u32, u32),
    pub k: u32,
    pub computed: u32,
    pub expected: u32,
}

pub fn diff(computed: &BetaTable, expected: &BetaTable) -> Vec<Mismatch> {
    let mut out = Vec::new();
    for (r, row) in expected.rows.iter().enumerate() {
        for (k, &want) in (1..).zip(&expected.values[r]) {
            let got = computed.get(*row, k).unwrap_or(0);
            if got != want {
                out.push(Mismatch { n: expected.n, row: *row, k, computed: got, expected: want });
            }
        }
    }
    out
}

/// The multiplier achieving the maximum is not unique in general; this
/// returns every one for a single cell.
pub fn argmax(n: u32, row: (u32, u32), k: u32, range: &CRange) -> Result<Vec<Felt>> {
    let ctx = FieldCtx::new(2, n)?;
    Ok(beta_max(&ctx, &row_function(&ctx, k, row), range)?.argmax)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels() {
        assert_eq!(row_labels(3), vec![(0, 0), (0, 1), (0, 2), (1, 2)]);
        for n in DEGREES {
            let r = reference(n).unwrap();
            assert_eq!(r.rows.len(), 1 + (n * (n - 1) / 2) as usize);
            assert!(r.values.iter().all(|v| v.len() == n as usize - 1));
        }
        assert!(reference(7).is_err());
    }

    #[test]
    fn small_grids_reproduce() {
        for n in [3, 4] {
            let got = sweep(n, &CRange::AllButOne).unwrap();
            assert_eq!(diff(&got, &reference(n).unwrap()), vec![]);
        }
    }

    #[test]
    fn row_function_examples() {
        let f = FieldCtx::new(2, 3).unwrap();
        let g = row_function(&f, 1, (0, 1));
        for x in f.elements() {
            let want = f.add(f.pow(x, 3), f.add(x, f.mul(x, x)));
            assert_eq!(g.eval(x), want);
        }
        assert_eq!(row_function(&f, 1, (0, 0)), FnTable::power(&f, 3));
    }

    #[test]
    fn rendering() {
        let t = reference(3).unwrap();
        assert!(t.render_text().contains("(0,1)\t3\t4\n"));
        assert!(t.render_markdown().contains("| (1,2) | 4 | 4 |"));
        assert_eq!(t.csv_rows()[0], [3, 0, 0, 1, 3]);
        assert_eq!(t.get((0, 2), 1), Some(4));
    }
}
