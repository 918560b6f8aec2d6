//! Exact solver for the bias-augmented L1-loss SVM dual on tiny problems.
//!
//! Maximizes `sum(a) - 1/2 a'Qa` over `0 <= a <= C` with
//! `Q_ij = y_i y_j (x_i . x_j + 1)` by trying every assignment of each
//! variable to {0, C, free}, solving the free block exactly and keeping the
//! best point inside the box. Some optimum always has a nonsingular free
//! block, so singular systems can be skipped.

pub struct Problem {
    pub xs: Vec<Vec<f64>>,
    pub ys: Vec<f64>,
    pub c: f64,
}

fn gram(p: &Problem) -> Vec<Vec<f64>> {
    let n = p.xs.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let dot: f64 = p.xs[i].iter().zip(&p.xs[j]).map(|(a, b)| a * b).sum();
                    p.ys[i] * p.ys[j] * (dot + 1.0)
                })
                .collect()
        })
        .collect()
}

/// Gaussian elimination with partial pivoting; `None` when singular.
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-10 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}

pub fn dual_objective(q: &[Vec<f64>], a: &[f64]) -> f64 {
    let lin: f64 = a.iter().sum();
    let mut quad = 0.0;
    for i in 0..a.len() {
        for j in 0..a.len() {
            quad += a[i] * q[i][j] * a[j];
        }
    }
    lin - 0.5 * quad
}

/// Optimal dual objective, equal to the optimal primal objective.
pub fn optimum(p: &Problem) -> f64 {
    let n = p.xs.len();
    let q = gram(p);
    let mut best = f64::NEG_INFINITY;
    for code in 0..3usize.pow(n as u32) {
        // 0 -> at zero, 1 -> at C, 2 -> free
        let mut state = vec![0u8; n];
        let mut rest = code;
        for s in state.iter_mut() {
            *s = (rest % 3) as u8;
            rest /= 3;
        }
        let free: Vec<usize> = (0..n).filter(|&i| state[i] == 2).collect();
        let mut a: Vec<f64> = state.iter().map(|&s| if s == 1 { p.c } else { 0.0 }).collect();
        if !free.is_empty() {
            let m: Vec<Vec<f64>> = free.iter().map(|&i| free.iter().map(|&j| q[i][j]).collect()).collect();
            let rhs: Vec<f64> = free
                .iter()
                .map(|&i| 1.0 - (0..n).filter(|&j| state[j] == 1).map(|j| q[i][j] * p.c).sum::<f64>())
                .collect();
            let Some(sol) = solve(m, rhs) else { continue };
            if sol.iter().any(|&v| v < -1e-12 || v > p.c + 1e-12) {
                continue;
            }
            for (&i, v) in free.iter().zip(sol) {
                a[i] = v.clamp(0.0, p.c);
            }
        }
        best = best.max(dual_objective(&q, &a));
    }
    best
}
