use cdiff::cddt::{cddt_brute, cddt_entry_char, entry_brute};
use cdiff::charsum::{Characters, WeilParams};
use cdiff::field::{euclid_gcd, gcd_lemma};
use cdiff::{Felt, FieldCtx, FnTable, LinPoly};
use proptest::prelude::*;

const FIELDS: [(u32, u32); 8] = [(2, 3), (2, 4), (2, 5), (3, 2), (3, 3), (5, 2), (7, 1), (2, 6)];

fn field_and_elems(count: usize) -> impl Strategy<Value = ((u32, u32), Vec<u32>)> {
    prop::sample::select(&FIELDS[..]).prop_flat_map(move |(p, n)| {
        let q = p.pow(n);
        (Just((p, n)), prop::collection::vec(0..q, count))
    })
}

fn ctx((p, n): (u32, u32)) -> FieldCtx {
    FieldCtx::new(p, n).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn field_axioms((pn, v) in field_and_elems(3)) {
        let f = ctx(pn);
        let (x, y, z) = (Felt(v[0]), Felt(v[1]), Felt(v[2]));
        prop_assert_eq!(f.add(f.add(x, y), z), f.add(x, f.add(y, z)));
        prop_assert_eq!(f.mul(f.mul(x, y), z), f.mul(x, f.mul(y, z)));
        prop_assert_eq!(f.mul(x, f.add(y, z)), f.add(f.mul(x, y), f.mul(x, z)));
        prop_assert_eq!(f.add(x, f.neg(x)), Felt::ZERO);
        prop_assert_eq!(f.sub(f.add(x, y), y), x);
        if !x.is_zero() {
            prop_assert_eq!(f.mul(x, f.inv(x).unwrap()), Felt::ONE);
            prop_assert_eq!(f.pow(x, f.q() as u64 - 1), Felt::ONE);
        }
    }

    #[test]
    fn frobenius_and_trace((pn, v) in field_and_elems(2), i in 0u32..8) {
        let f = ctx(pn);
        let (x, y) = (Felt(v[0]), Felt(v[1]));
        prop_assert_eq!(f.frobenius(f.add(x, y), i), f.add(f.frobenius(x, i), f.frobenius(y, i)));
        prop_assert_eq!(f.frobenius(f.mul(x, y), i), f.mul(f.frobenius(x, i), f.frobenius(y, i)));
        prop_assert_eq!(f.frobenius(x, i), f.pow(x, (f.p() as u64).pow(i % f.n())));
        prop_assert_eq!((f.trace_abs(x) + f.trace_abs(y)) % f.p(), f.trace_abs(f.add(x, y)));
        prop_assert_eq!(f.trace_abs(f.frobenius(x, i)), f.trace_abs(x));
    }

    #[test]
    fn linpoly_is_linear_and_solves((pn, v) in field_and_elems(8)) {
        let f = ctx(pn);
        let n = f.n() as usize;
        let coeffs: Vec<Felt> = (0..n).map(|i| Felt(v[i % 6])).collect();
        let l = LinPoly::new(&f, coeffs).unwrap();
        let (x, y) = (Felt(v[6]), Felt(v[7]));
        prop_assert_eq!(l.eval(&f, f.add(x, y)), f.add(l.eval(&f, x), l.eval(&f, y)));
        let target = l.eval(&f, x);
        let sol = l.solve_affine(&f, target).expect("image element");
        let elems = sol.elements(&f);
        prop_assert_eq!(elems.len() as u64, sol.len(&f));
        prop_assert!(elems.contains(&x));
        prop_assert!(elems.iter().all(|&s| l.eval(&f, s) == target));
        prop_assert_eq!(l.is_permutation(&f), sol.len(&f) == 1);
        prop_assert_eq!(LinPoly::parse(&f, &l.to_string()).unwrap(), l);
    }

    #[test]
    fn binomial_permutation_criterion((pn, v) in field_and_elems(1), r in 1u32..6) {
        // x^(p^r) + gamma x is a permutation iff (-1)^(n/e) gamma^((q-1)/(p^e-1)) != 1
        let f = ctx(pn);
        if f.n() == 1 {
            return Ok(());
        }
        let r = 1 + r % (f.n() - 1);
        let gamma = Felt(v[0]);
        let mut l = LinPoly::monomial(&f, r);
        l.add_term(&f, 0, gamma);
        let e = euclid_gcd(f.n() as u64, r as u64) as u32;
        let pe1 = (f.p() as u64).pow(e) - 1;
        let mut lhs = f.pow(gamma, (f.q() as u64 - 1) / pe1);
        if (f.n() / e) % 2 == 1 {
            lhs = f.neg(lhs);
        }
        prop_assert_eq!(l.is_permutation(&f), lhs != Felt::ONE);
    }

    #[test]
    fn gcd_lemma_matches_euclid(p in prop::sample::select(vec![2u64, 3, 5, 7]), n in 1u32..10, t in 0u32..10) {
        let t = 1 + t % n;
        let want = euclid_gcd(p.pow(t) + 1, p.pow(n) - 1);
        prop_assert_eq!(gcd_lemma(p, t, n).unwrap(), want);
    }

    #[test]
    fn char_entry_matches_brute((pn, v) in prop::sample::select(vec![(2u32, 2u32), (2, 3), (3, 2)])
        .prop_flat_map(|(p, n)| (Just((p, n)), prop::collection::vec(0..p.pow(n), p.pow(n) as usize + 3))))
    {
        let f = ctx(pn);
        let q = f.size();
        let table = FnTable::new(&f, v[..q].iter().map(|&x| Felt(x)).collect()).unwrap();
        let (c, a, b) = (Felt(v[q]), Felt(v[q + 1]), Felt(v[q + 2]));
        let ch = Characters::new(&f);
        prop_assert_eq!(cddt_entry_char(&ch, &table, c, a, b, 1e-6).unwrap(), entry_brute(&f, &table, c, a, b));
        prop_assert!(cddt_brute(&f, &table, c).rows_sum_to_q());
    }

    #[test]
    fn weil_closed_matches_direct((pn, v) in field_and_elems(2), k in 0u32..6) {
        let f = ctx(pn);
        if f.n() == 1 || v[0] == 0 {
            return Ok(());
        }
        let k = 1 + k % (f.n() - 1);
        let ch = Characters::new(&f);
        let w = WeilParams::new(&f, k, Felt(v[0]), Felt(v[1])).unwrap();
        let diff = (ch.weil_closed(&w).unwrap() - ch.weil_direct(&w)).norm();
        prop_assert!(diff < 1e-6, "deviation {}", diff);
    }
}
