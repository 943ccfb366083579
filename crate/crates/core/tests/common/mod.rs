#![allow(dead_code, clippy::needless_range_loop)]

use rand::Rng;

use fahp::consistency::{build_comparison, ComparisonMatrix, DerivationRule};

/// Straight-line fuzzy weight computation that shares no code with the library:
/// its own scale table, plain `[f64; 3]` arithmetic, loops written out.
pub mod oracle {
    type T = [f64; 3];

    fn real_row(k: usize) -> T {
        match k {
            1 => [1.0, 1.0, 1.0],
            2 => [1.0 / 2.0, 3.0 / 4.0, 1.0],
            3 => [2.0 / 3.0, 1.0, 3.0 / 2.0],
            4 => [1.0, 3.0 / 2.0, 2.0],
            5 => [3.0 / 2.0, 2.0, 5.0 / 2.0],
            6 => [2.0, 5.0 / 2.0, 3.0],
            7 => [5.0 / 2.0, 3.0, 7.0 / 2.0],
            8 => [3.0, 7.0 / 2.0, 4.0],
            9 => [7.0 / 2.0, 4.0, 9.0 / 2.0],
            _ => panic!("intensity {k}"),
        }
    }

    fn inverse_row(k: usize) -> T {
        match k {
            1 => [1.0, 1.0, 1.0],
            2 => [1.0, 4.0 / 3.0, 2.0],
            3 => [2.0 / 3.0, 1.0, 3.0 / 2.0],
            4 => [1.0 / 2.0, 2.0 / 3.0, 1.0],
            5 => [2.0 / 5.0, 1.0 / 2.0, 2.0 / 3.0],
            6 => [1.0 / 3.0, 2.0 / 5.0, 1.0 / 2.0],
            7 => [2.0 / 7.0, 1.0 / 3.0, 2.0 / 5.0],
            8 => [1.0 / 4.0, 2.0 / 7.0, 1.0 / 3.0],
            9 => [2.0 / 9.0, 1.0 / 4.0, 2.0 / 7.0],
            _ => panic!("intensity {k}"),
        }
    }

    pub fn fuzzify(crisp: &[Vec<f64>]) -> Vec<Vec<T>> {
        let n = crisp.len();
        let mut out = vec![vec![[1.0; 3]; n]; n];
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let s = crisp[i][j];
                out[i][j] = if s >= 1.0 {
                    real_row(s.round() as usize)
                } else {
                    inverse_row((1.0 / s).round() as usize)
                };
            }
        }
        out
    }

    pub fn extents(f: &[Vec<T>]) -> Vec<T> {
        let n = f.len();
        let mut rows = vec![[0.0; 3]; n];
        let mut total = [0.0; 3];
        for i in 0..n {
            for j in 0..n {
                for c in 0..3 {
                    rows[i][c] += f[i][j][c];
                }
            }
            for c in 0..3 {
                total[c] += rows[i][c];
            }
        }
        rows.iter()
            .map(|r| [r[0] / total[2], r[1] / total[1], r[2] / total[0]])
            .collect()
    }

    /// V(a >= b)
    pub fn possibility(a: T, b: T) -> f64 {
        let (m2, u2) = (a[1], a[2]);
        let (l1, m1) = (b[0], b[1]);
        if m2 >= m1 {
            1.0
        } else if l1 >= u2 {
            0.0
        } else {
            (l1 - u2) / ((m2 - u2) - (m1 - l1))
        }
    }

    pub fn weights(crisp: &[Vec<f64>]) -> Vec<f64> {
        let s = extents(&fuzzify(crisp));
        let n = s.len();
        let mut d = vec![0.0; n];
        for i in 0..n {
            let mut lo = f64::INFINITY;
            for k in 0..n {
                if k != i {
                    let v = possibility(s[i], s[k]);
                    if v < lo {
                        lo = v;
                    }
                }
            }
            d[i] = lo;
        }
        let sum: f64 = d.iter().sum();
        d.iter().map(|x| x / sum).collect()
    }
}

const SAATY: [f64; 9] = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0];

/// Reciprocal matrix with independent uniform Saaty judgments above the diagonal.
pub fn random_saaty_matrix<R: Rng>(rng: &mut R, n: usize) -> ComparisonMatrix {
    let mut rows = vec![vec![1.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let s = SAATY[rng.gen_range(0..9)];
            let v = if rng.gen_bool(0.5) { s } else { 1.0 / s };
            rows[i][j] = v;
            rows[j][i] = 1.0 / v;
        }
    }
    ComparisonMatrix::from_rows(rows).expect("valid reciprocal matrix")
}

/// Mean-gap derivation over random means in [0, 4].
pub fn random_derived_matrix<R: Rng>(rng: &mut R, n: usize) -> ComparisonMatrix {
    let means: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..=4.0)).collect();
    build_comparison(&means, DerivationRule::MeanGap).expect("n >= 2")
}

/// The acceptance corpus: alternating derived and random-judgment matrices of order 3..=6.
pub fn corpus<R: Rng>(rng: &mut R, count: usize) -> Vec<ComparisonMatrix> {
    (0..count)
        .map(|k| {
            let n = rng.gen_range(3..=6);
            if k % 2 == 0 {
                random_derived_matrix(rng, n)
            } else {
                random_saaty_matrix(rng, n)
            }
        })
        .collect()
}

pub fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("c{i}")).collect()
}
