use hierperc::graphgen::{pairs_in_class, sample_graph, sample_trial, GraphConfig, SamplePlan, Scope};
use hierperc::hiergroup::BallId;
use num::{BigInt, BigRational, One, ToPrimitive};

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Expected number of class-`k` edges in the whole truncation, exactly.
fn expected_class_edges(n: u64, depth: u32, k: u32, c: i64) -> BigRational {
    let balls = BigInt::from(n).pow(depth - k);
    let pairs = BigInt::from(n).pow(2 * (k - 1)) * BigInt::from(n * (n - 1) / 2);
    let p = BigRational::new(BigInt::from(c), BigInt::from(n).pow(2 * k - 1));
    BigRational::from_integer(balls * pairs) * p
}

#[test]
fn class_two_edge_count_mean() {
    let expected = expected_class_edges(10, 2, 2, 3).to_f64().unwrap();
    assert!((expected - 13.5).abs() < 1e-12);
    assert_eq!(pairs_in_class(10, 2), 4500);

    let cfg = GraphConfig::from_list(10, 2, &[1.0, 3.0], 0).unwrap();
    let plan = SamplePlan::empty().with_class(2, Scope::All);
    let trials = 10_000;
    let total: usize = (0..trials).map(|t| sample_trial(&cfg, t, &plan).edges(2).len()).sum();
    let mean = total as f64 / trials as f64;
    assert!((mean / expected - 1.0).abs() < 0.03, "mean {mean} vs {expected}");
}

#[test]
fn two_sub_balls_are_joined_with_the_exact_probability() {
    // 1 - (1 - 3/1000)^100, exactly
    let q = BigRational::one() - ratio(3, 1000);
    let mut pow = BigRational::one();
    for _ in 0..100 {
        pow *= &q;
    }
    let exact = (BigRational::one() - pow).to_f64().unwrap();
    assert!((exact - 0.2595157404602172).abs() < 1e-15);

    let cfg = GraphConfig::from_list(10, 2, &[1.0, 3.0], 17).unwrap();
    let plan = SamplePlan::empty().with_class(2, Scope::All);
    let trials = 100_000u64;
    let hits = (0..trials)
        .filter(|&t| {
            let g = sample_trial(&cfg, t, &plan);
            g.edges(2).iter().any(|&(u, v)| u / 10 == 0 && v / 10 == 1)
        })
        .count();
    let freq = hits as f64 / trials as f64;
    assert!((freq - exact).abs() < 0.01, "freq {freq} vs {exact}");
}

#[test]
fn class_one_degree_mean() {
    let cfg = GraphConfig::from_list(1000, 1, &[3.0], 5).unwrap();
    let expected = 999.0 * 3.0 / 1000.0;
    let mut sum = 0u64;
    let trials = 20;
    for t in 0..trials {
        let g = sample_trial(&cfg, t, &SamplePlan::full(1));
        sum += g.degree_table(BallId { level: 1, suffix: 0 }, 1).iter().map(|&d| d as u64).sum::<u64>();
    }
    let mean = sum as f64 / (trials * 1000) as f64;
    assert!((mean / expected - 1.0).abs() < 0.02, "mean {mean} vs {expected}");
}

#[test]
fn edge_counts_are_exchangeable_across_balls() {
    let cfg = GraphConfig::from_list(6, 2, &[3.0, 2.0], 1).unwrap();
    let trials = 4000;
    let mut per_ball = [0u64; 6];
    for t in 0..trials {
        let g = sample_trial(&cfg, t, &SamplePlan::full(2));
        for &(u, _) in g.edges(1) {
            per_ball[(u / 6) as usize] += 1;
        }
    }
    // each 1-ball: 15 pairs at p = 1/2
    let mean = 7.5;
    let se = (15.0 * 0.25 / trials as f64).sqrt();
    for count in per_ball {
        let m = count as f64 / trials as f64;
        assert!((m - mean).abs() < 4.0 * se, "ball mean {m}");
    }
}

#[test]
fn sparsity_of_dominant_class() {
    let cfg = GraphConfig::from_list(50, 3, &[2.0, 2.0, 2.0], 3).unwrap();
    let g = sample_graph(&cfg);
    let expected = 2.0 * 49.0 / 50.0 * 125_000.0 / 2.0;
    let got = g.edges(1).len() as f64;
    assert!((got / expected - 1.0).abs() < 0.02, "{got} vs {expected}");
    assert!(g.edges(3).len() < g.edges(1).len() / 10);
}

#[test]
fn same_seed_same_graph() {
    let cfg = GraphConfig::from_list(20, 3, &[3.0, 4.0, 5.0], 99).unwrap();
    let a = sample_graph(&cfg);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let b = pool.install(|| sample_graph(&cfg));
    assert_eq!(a, b);
    let c = sample_graph(&cfg.with_seed(100));
    assert_ne!(a, c);
}
