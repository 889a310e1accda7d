//! Pinned instances for the closed-form constants and worked examples.

use cdiff::cddt::{beta_max, cddt_brute, entry_brute, uniformity_spectrum, CRange};
use cdiff::charsum::{Characters, WeilParams};
use cdiff::gold::{
    cddt_closed, cddt_closed_with, gold_table, thm_bounds, ClosedRow, Conventions, EvenOddSet, GoldSpec, OddT1Unit,
    RhsSign, T1Factor, Z1Weight,
};
use cdiff::tables::row_function;
use cdiff::{Felt, FieldCtx, FnTable, LinPoly};

fn gf(p: u32, n: u32) -> FieldCtx {
    FieldCtx::new(p, n).unwrap()
}

fn plain(ctx: &FieldCtx, k: u32, c: u32) -> GoldSpec {
    GoldSpec::plain(ctx, k, Felt(c)).unwrap()
}

fn closed_value(ctx: &FieldCtx, spec: &GoldSpec, conv: Conventions, a: u32, b: u32) -> f64 {
    let ch = Characters::new(ctx);
    let z = ClosedRow::with_conventions(&ch, spec, Felt(a), conv).unwrap().value(Felt(b)).unwrap();
    assert!(z.im.abs() < 1e-9, "{z}");
    z.re
}

fn brute(ctx: &FieldCtx, spec: &GoldSpec, a: u32, b: u32) -> u32 {
    entry_brute(ctx, &gold_table(ctx, spec), spec.c, Felt(a), Felt(b))
}

#[test]
fn t1_uses_pd_plus_one() {
    // GF(9), k = 1, P = 0, c = 0, a = b = 0: x^4 = 0 has the single root 0
    let f = gf(3, 2);
    let s = plain(&f, 1, 0);
    assert_eq!(brute(&f, &s, 0, 0), 1);
    assert!((closed_value(&f, &s, Conventions::default(), 0, 0) - 1.0).abs() < 1e-9);
    let minus = Conventions { t1_factor: T1Factor::PdMinusOne, ..Default::default() };
    assert!((closed_value(&f, &s, minus, 0, 0) - (-1.0 / 3.0)).abs() < 1e-9);
}

#[test]
fn rhs_sign_of_l_alpha_does_not_matter() {
    let minus = Conventions { rhs_sign: RhsSign::Minus, ..Default::default() };
    for (p, n, pert) in [(3, 2, "identity"), (3, 3, "bin:0,1"), (5, 2, "mono:1")] {
        let f = gf(p, n);
        let ch = Characters::new(&f);
        for c in f.elements().filter(|&c| c != Felt::ONE) {
            let s = GoldSpec::new(&f, 1, LinPoly::parse(&f, pert).unwrap(), c).unwrap();
            let plus = cddt_closed(&ch, &s, 1e-6).unwrap();
            assert_eq!(plus, cddt_closed_with(&ch, &s, minus, 1e-6).unwrap());
            assert_eq!(plus, cddt_brute(&f, &gold_table(&f, &s), c));
        }
    }
}

#[test]
fn odd_t1_unit_is_epsilon() {
    // GF(27), k = 1, P = 0, c = 0, a = 0, b = 1
    let f = gf(3, 3);
    let s = plain(&f, 1, 0);
    assert_eq!(brute(&f, &s, 0, 1), 2);
    assert!((closed_value(&f, &s, Conventions::default(), 0, 1) - 2.0).abs() < 1e-9);
    let mu = Conventions { odd_t1_unit: OddT1Unit::Mu, ..Default::default() };
    assert!(closed_value(&f, &s, mu, 0, 1).abs() < 1e-9);
}

#[test]
fn even_odd_set_is_solvability() {
    // GF(64), k = 2 (d = 2, n/d = 3), P = 0, c = 2, a = b = 1
    let f = gf(2, 6);
    let s = plain(&f, 2, 2);
    assert_eq!(brute(&f, &s, 1, 1), 5);
    assert!((closed_value(&f, &s, Conventions::default(), 1, 1) - 5.0).abs() < 1e-9);
    let abs = Conventions { even_odd_set: EvenOddSet::AbsoluteTrace, ..Default::default() };
    assert!((closed_value(&f, &s, abs, 1, 1) - 1.0).abs() < 1e-9);
}

#[test]
fn z1_is_weighted_like_z2() {
    // GF(16), k = 1, P = 0, c = 0, a = b = 0
    let f = gf(2, 4);
    let s = plain(&f, 1, 0);
    assert_eq!(brute(&f, &s, 0, 0), 1);
    assert!((closed_value(&f, &s, Conventions::default(), 0, 0) - 1.0).abs() < 1e-9);
    let like_y = Conventions { z1_weight: Z1Weight::LikeY, ..Default::default() };
    assert!((closed_value(&f, &s, like_y, 0, 0) - 4.0).abs() < 1e-9);
    let ch = Characters::new(&f);
    let row = ClosedRow::new(&ch, &s, Felt::ZERO).unwrap();
    assert!(!row.sets().z1.is_empty());
}

#[test]
fn worked_uniformities() {
    let f16 = gf(2, 4);
    let x5 = FnTable::power(&f16, 5);
    assert_eq!(beta_max(&f16, &x5, &CRange::AllButOne).unwrap().beta, 5);
    assert_eq!(*uniformity_spectrum(&f16, &x5, Felt::ZERO).keys().max().unwrap(), 5);
    let f8 = gf(2, 3);
    assert_eq!(*uniformity_spectrum(&f8, &FnTable::power(&f8, 3), Felt::ZERO).keys().max().unwrap(), 1);
    let beta = |n: u32, k: u32, row: (u32, u32)| {
        let f = gf(2, n);
        beta_max(&f, &row_function(&f, k, row), &CRange::AllButOne).unwrap().beta
    };
    assert_eq!(beta(3, 1, (0, 1)), 3);
    assert_eq!(beta(3, 1, (0, 2)), 4);
    assert_eq!(beta(4, 1, (0, 3)), 6);
    assert_eq!(beta(4, 2, (2, 3)), 5);
    assert_eq!(beta(5, 1, (2, 3)), 7);
    assert_eq!(beta(6, 2, (0, 5)), 10);
    assert_eq!(beta(6, 3, (1, 4)), 15);
}

#[test]
fn gold_perturbation_tables() {
    let f16 = gf(2, 4);
    let s = GoldSpec::new(&f16, 1, LinPoly::parse(&f16, "bin:0,3").unwrap(), Felt::ZERO).unwrap();
    let t = gold_table(&f16, &s);
    assert_eq!(beta_max(&f16, &t, &CRange::AllButOne).unwrap().beta, 6);
    let s = GoldSpec::new(&f16, 2, LinPoly::parse(&f16, "bin:2,3").unwrap(), Felt::ZERO).unwrap();
    assert_eq!(beta_max(&f16, &gold_table(&f16, &s), &CRange::AllButOne).unwrap().beta, 5);
}

#[test]
fn origin_entry_counts_zeros() {
    // x^(p^k+1) + x^(p^t) at a = b = 0 has gcd(p^k - p^t + 1, p^n - 1) + 1 roots
    for (p, n, k, t) in [(2, 4, 1, 0), (3, 4, 1, 0), (2, 5, 2, 1), (3, 4, 1, 2)] {
        let r = thm_bounds(&gf(p, n), k, t).unwrap();
        assert_eq!(r.origin_exact, Some(true), "{p} {n} {k} {t}");
    }
    let r = thm_bounds(&gf(2, 6), 2, 2).unwrap();
    assert!(r.max_delta as u64 >= 5);
    assert_eq!(r.existential_ok, Some(true));
}

#[test]
fn x_a_fibres_are_p_to_gcd_n_2k() {
    // GF(16), k = 2: the a-part of B_alpha vanishes identically for alpha in GF(4)
    let f = gf(2, 4);
    let hits = f
        .nonzero()
        .map(|alpha| cdiff::gold::row_map(&f, 2, alpha).solve_affine(&f, Felt::ZERO).unwrap().len(&f))
        .max()
        .unwrap();
    assert_eq!(hits, 16);
    let sizes: std::collections::BTreeSet<u64> = f
        .nonzero()
        .map(|alpha| cdiff::gold::row_map(&f, 1, alpha).solve_affine(&f, Felt::ZERO).unwrap().len(&f))
        .collect();
    assert_eq!(sizes.into_iter().collect::<Vec<_>>(), vec![1, 4]);
}

#[test]
fn weil_examples() {
    let f8 = gf(2, 3);
    let ch = Characters::new(&f8);
    let w = WeilParams::new(&f8, 1, Felt::ONE, Felt::ONE).unwrap();
    assert!((ch.weil_direct(&w).re + 4.0).abs() < 1e-9);
}
