use t4f_core::tasks::bootstrap_significance;

/// Exact probability over all n^n resamples that the baseline does at least
/// as well as the model.
fn exact_p(model_ok: &[bool], base_ok: &[bool]) -> f64 {
    let n = model_ok.len();
    let diff: Vec<i32> = (0..n).map(|i| i32::from(model_ok[i]) - i32::from(base_ok[i])).collect();
    let total = (n as u64).pow(n as u32);
    let mut hits = 0u64;
    for mut code in 0..total {
        let mut sum = 0;
        for _ in 0..n {
            sum += diff[(code % n as u64) as usize];
            code /= n as u64;
        }
        hits += u64::from(sum <= 0);
    }
    hits as f64 / total as f64
}

fn preds(ok: &[bool]) -> Vec<u8> {
    ok.iter().map(|&c| if c { 1 } else { 0 }).collect()
}

#[test]
fn matches_enumeration_on_small_n() {
    let cases: [(&[bool], &[bool]); 3] = [
        (&[true, true, true, false, true, false], &[false, true, false, false, true, true]),
        (&[true, true, true, true, false, false], &[true, false, false, false, false, true]),
        (&[true, false, true, false, true, false, true], &[false, true, true, false, true, false, false]),
    ];
    for (m, b) in cases {
        let gold = vec![1u8; m.len()];
        let p = bootstrap_significance(&gold, &preds(m), &preds(b), 200_000, 17).unwrap();
        let exact = exact_p(m, b);
        assert!((p - exact).abs() < 0.005, "{p} vs {exact}");
    }
}

#[test]
fn forty_of_fifty_one_beats_majority() {
    let gold = vec![1u8; 51];
    let model: Vec<u8> = (0..51).map(|i| u8::from(i < 40)).collect();
    // Baseline right on a different 26 so the paired differences vary.
    let base: Vec<u8> = (0..51).map(|i| u8::from(i >= 25)).collect();
    let p = bootstrap_significance(&gold, &model, &base, 10_000, 1).unwrap();
    assert!(p < 0.05, "{p}");
    let p_same = bootstrap_significance(&gold, &model, &model, 10_000, 1).unwrap();
    assert_eq!(p_same, 1.0);
}
