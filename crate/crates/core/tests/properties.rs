use hierperc::components::UnionFind;
use hierperc::graphgen::{sample_graph, GraphConfig, SampledGraph};
use hierperc::hiergroup::Hierarchy;
use hierperc::theory::{self, Verdict};
use hierperc::CRule;
use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;

fn hierarchy() -> impl Strategy<Value = Hierarchy> {
    (2u64..12, 1u32..8).prop_filter_map("fits", |(n, k)| Hierarchy::new(n, k).ok())
}

fn triple() -> impl Strategy<Value = (Hierarchy, u64, u64, u64, u64)> {
    hierarchy().prop_flat_map(|h| {
        let v = h.vertex_count();
        (Just(h), 0..v, 0..v, 0..v, 0..v)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100_000))]

    #[test]
    fn ultrametric_and_translation_invariant((h, x, y, z, a) in triple()) {
        let (x, y, z, a) = (
            h.address(x).unwrap(),
            h.address(y).unwrap(),
            h.address(z).unwrap(),
            h.address(a).unwrap(),
        );
        let dxz = x.distance(&z).unwrap();
        let dxy = x.distance(&y).unwrap();
        let dyz = y.distance(&z).unwrap();
        prop_assert!(dxz <= dxy.max(dyz));
        prop_assert_eq!(dxy, y.distance(&x).unwrap());
        prop_assert_eq!(dxy == 0, x == y);
        let shifted = x.add_mod(&a).unwrap().distance(&y.add_mod(&a).unwrap()).unwrap();
        prop_assert_eq!(shifted, dxy);
    }
}

/// `1 - (1 - y/n)^m` in exact arithmetic.
fn exact_at_least_one(y: &BigRational, n: u64, m: u32) -> BigRational {
    let q = BigRational::one() - y / BigRational::from_integer(BigInt::from(n));
    BigRational::one() - num::pow(q, m as usize)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn elementary_bracket(n in 2u64..1_000_000, m in 2u32..40, num in 1u64..1_000_000, den in 1u64..1_000) {
        // y = num / den reduced into (0, n)
        let y = BigRational::new(BigInt::from(num), BigInt::from(den));
        let nn = BigRational::from_integer(BigInt::from(n));
        let y = if y >= nn { &y / BigRational::from_integer(BigInt::from(num)) } else { y };
        prop_assume!(y.is_positive() && y < nn);
        let ratio = BigRational::new(BigInt::from(m), BigInt::from(n));
        let linear = &ratio * &y;
        let exact = exact_at_least_one(&y, n, m);
        let gap = &linear - &exact;
        let two = BigRational::from_integer(BigInt::from(2));
        prop_assert!(gap > BigRational::zero());
        prop_assert!(gap < &linear * &linear / two);

        let p = (&y / &nn).to_f64().unwrap();
        let float = theory::one_minus_pow(p, m as f64);
        let want = exact.to_f64().unwrap();
        prop_assert!((float - want).abs() <= 1e-12 * want.abs() + 1e-300, "{} vs {}", float, want);
    }
}

proptest! {
    #[test]
    fn fixed_point_increases_with_lambda(a in 1.01f64..50.0, b in 1.01f64..50.0) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assume!(hi - lo > 1e-9);
        let blo = theory::solve_fixed_point(lo).unwrap();
        let bhi = theory::solve_fixed_point(hi).unwrap();
        prop_assert!(blo <= bhi);
        prop_assert!(blo > 0.0 && bhi <= 1.0);
        prop_assert!(theory::fixed_point_residual(hi, bhi).abs() < 1e-12);
    }

    #[test]
    fn log_rule_criterion(a in 0.05f64..6.0) {
        prop_assume!((a - 1.0).abs() > 1e-6);
        let rule = CRule::ALog { a, c_min: 3.0 };
        let report = theory::percolation_criterion(&rule, 10_000).unwrap();
        let want = if a > 1.0 { Verdict::Percolates } else { Verdict::DoesNotPercolate };
        prop_assert_eq!(report.verdict, want);
    }

    #[test]
    fn adding_an_edge_never_shrinks_a_component(
        edges in proptest::collection::vec((0usize..30, 0usize..30), 0..60),
        extra in (0usize..30, 0usize..30),
    ) {
        let mut uf = UnionFind::new(30);
        for &(a, b) in &edges {
            uf.union(a, b);
        }
        let before = (uf.set_size(extra.0), uf.set_size(extra.1));
        uf.union(extra.0, extra.1);
        prop_assert!(uf.set_size(extra.0) >= before.0.max(before.1));
        prop_assert_eq!(uf.set_size(extra.0), uf.set_size(extra.1));
        let r = uf.find(extra.0);
        prop_assert_eq!(uf.find(r), r);
    }

    #[test]
    fn sampled_graphs_are_valid_and_round_trip(
        n in 2u64..7,
        k in 1u32..4,
        scale in 0.05f64..1.0,
        seed in any::<u64>(),
    ) {
        let c: Vec<f64> = (1..=k).map(|j| scale * (n as f64).powi(2 * j as i32 - 1)).collect();
        let cfg = GraphConfig::from_list(n, k, &c, seed).unwrap();
        let g = sample_graph(&cfg);
        prop_assert!(g.validate().is_ok());
        let mut buf = Vec::new();
        g.write_edge_list(&mut buf).unwrap();
        let back = SampledGraph::read_edge_list(&buf[..]).unwrap();
        prop_assert_eq!(back, g);
    }
}
