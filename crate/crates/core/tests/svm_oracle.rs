mod support;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use support::qp_oracle::{optimum, Problem};
use t4f_core::learn::{train_binary_svm, SparseVector, SvmParams};

fn random_problem(seed: u64) -> Problem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let xs: Vec<Vec<f64>> = (0..6).map(|_| (0..3).map(|_| rng.gen_range(-2.0..2.0)).collect()).collect();
    let mut ys: Vec<f64> = (0..6).map(|_| if rng.gen_bool(0.5) { 1.0 } else { -1.0 }).collect();
    ys[0] = 1.0;
    ys[1] = -1.0;
    Problem { xs, ys, c: 1.0 }
}

#[test]
fn objective_matches_brute_force_qp() {
    for seed in 0..10 {
        let p = random_problem(seed);
        let xs: Vec<SparseVector> = p.xs.iter().map(|x| SparseVector::from_dense(x).unwrap()).collect();
        let ys: Vec<i8> = p.ys.iter().map(|&y| y as i8).collect();
        let tight = SvmParams { tolerance: 1e-8, max_epochs: 100_000, ..SvmParams::default() };
        let model = train_binary_svm(&xs, &ys, &tight, "").unwrap();
        let got = model.objective(&xs, &ys);
        let want = optimum(&p);
        let loose = train_binary_svm(&xs, &ys, &SvmParams::default(), "").unwrap().objective(&xs, &ys);
        println!("seed {seed}: trainer {got:.8} oracle {want:.8} (default tolerance {loose:.8})");
        // the default stopping rule is coarse; it may only overshoot the optimum
        assert!(loose >= want - 1e-9);
        assert!((got - want).abs() <= 1e-4, "seed {seed}: {got} vs {want}");
    }
}
