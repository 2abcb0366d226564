use ihs::format::Instance;
use ihs::models::{gen_dnp, gen_dnp_with, gen_gnp, gen_gnp_with, gen_planted, ModelParams, Sampling};
use ihs::planted::{recover_planted, DEFAULT_CYCLE_CAP};

#[test]
fn skip_sampler_matches_pair_frequencies() {
    // 400 graphs on 40 vertices: each pair should appear about 40 times.
    let (n, p, runs) = (40, 0.1, 400u64);
    let mut counts = vec![0u32; n * n];
    for seed in 0..runs {
        let g = gen_gnp_with(&ModelParams::new(n, p, seed), Sampling::GeometricSkip).unwrap();
        for (u, v) in g.edges() {
            counts[u * n + v] += 1;
        }
    }
    let mean = runs as f64 * p;
    let sd = (runs as f64 * p * (1.0 - p)).sqrt();
    let mut chi2 = 0.0;
    let mut pairs = 0.0;
    for u in 0..n {
        for v in u + 1..n {
            let c = counts[u * n + v] as f64;
            assert!((c - mean).abs() <= 6.0 * sd, "pair ({u},{v}) seen {c} times");
            chi2 += (c - mean).powi(2) / (sd * sd);
            pairs += 1.0;
        }
    }
    // Chi-square with 780 degrees of freedom: mean 780, sd ~ 39.5.
    assert!((chi2 - pairs).abs() <= 5.0 * (2.0 * pairs).sqrt(), "chi2 = {chi2}");
}

#[test]
fn skip_and_naive_agree_on_edge_totals() {
    let (n, p) = (2000, 0.01);
    let trials = (n * (n - 1) / 2) as f64;
    let sd = (trials * p * (1.0 - p)).sqrt();
    for seed in 0..4 {
        for sampling in [Sampling::Naive, Sampling::GeometricSkip] {
            let m = gen_gnp_with(&ModelParams::new(n, p, seed), sampling).unwrap().edge_count() as f64;
            assert!((m - trials * p).abs() <= 5.0 * sd, "{sampling:?} seed {seed}: {m}");
        }
        let d = gen_dnp_with(&ModelParams::new(n, p / 2.0, seed), Sampling::GeometricSkip).unwrap();
        let forward = d.arcs().filter(|&(u, v)| u < v).count() as f64;
        let half = trials * p / 2.0;
        assert!((forward - half).abs() <= 5.0 * (half * (1.0 - p / 2.0)).sqrt());
    }
}

#[test]
fn generators_are_deterministic() {
    let params = ModelParams::new(300, 0.05, 17);
    assert_eq!(gen_gnp(&params).unwrap(), gen_gnp(&params).unwrap());
    assert_eq!(gen_dnp(&params).unwrap(), gen_dnp(&params).unwrap());
    for sampling in [Sampling::Naive, Sampling::GeometricSkip] {
        assert_eq!(gen_gnp_with(&params, sampling).unwrap(), gen_gnp_with(&params, sampling).unwrap());
    }
    assert_ne!(gen_gnp(&params).unwrap(), gen_gnp(&params.with_seed(18)).unwrap());
    let planted = ModelParams::planted(200, 0.1, 0.3, 3, 5);
    assert_eq!(gen_planted(&planted).unwrap(), gen_planted(&planted).unwrap());
}

#[test]
fn generated_files_round_trip() {
    let texts = [
        Instance::undirected(gen_gnp(&ModelParams::new(120, 0.08, 3)).unwrap()).to_text(),
        Instance::directed(gen_dnp(&ModelParams::new(120, 0.04, 3)).unwrap()).to_text(),
        Instance::from_planted(&gen_planted(&ModelParams::planted(150, 0.1, 0.2, 3, 3)).unwrap()).to_text(),
        Instance::from_planted(&gen_planted(&ModelParams::planted(97, 0.13, 1e-5, 4, u64::MAX)).unwrap()).to_text(),
    ];
    for text in texts {
        assert_eq!(Instance::parse(&text).unwrap().to_text(), text);
    }
}

#[test]
fn short_cycle_count_stays_below_mean_bound() {
    // Averaged over seeds, the number of cycles of length at most k stays
    // below sum_{j <= k} (n j p)^j.
    let (n, delta, p, k) = (120, 0.1, 0.05, 3);
    let seeds = 30;
    let total: usize = (0..seeds)
        .map(|seed| {
            let inst = gen_planted(&ModelParams::planted(n, delta, p, k, seed)).unwrap();
            recover_planted(&inst, k, DEFAULT_CYCLE_CAP).unwrap().cycles_found
        })
        .sum();
    let mean = total as f64 / seeds as f64;
    let bound: f64 = (2..=k).map(|j| (n as f64 * j as f64 * p).powi(j as i32)).sum();
    assert!(mean <= bound, "mean {mean} vs bound {bound}");
    assert!(mean > 0.0);
}
