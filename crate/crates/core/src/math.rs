//! Small dense linear algebra and quadrature helpers.

#[allow(unused_imports)]
use num_traits::Float;

pub type Mat6 = [[f64; 6]; 6];
pub type Vec6 = [f64; 6];

/// LU factorization with partial pivoting of a 6×6 matrix.
#[derive(Debug, Clone)]
pub struct Lu6 {
    lu: Mat6,
    perm: [usize; 6],
}

impl Lu6 {
    /// Returns `None` when a pivot is exactly zero.
    pub fn new(a: &Mat6) -> Option<Self> {
        let mut lu = *a;
        let mut perm = [0, 1, 2, 3, 4, 5];
        for k in 0..6 {
            let mut p = k;
            let mut best = lu[k][k].abs();
            for (i, row) in lu.iter().enumerate().skip(k + 1) {
                if row[k].abs() > best {
                    best = row[k].abs();
                    p = i;
                }
            }
            if best == 0.0 || !best.is_finite() {
                return None;
            }
            if p != k {
                lu.swap(p, k);
                perm.swap(p, k);
            }
            let pivot = lu[k][k];
            for i in k + 1..6 {
                let f = lu[i][k] / pivot;
                lu[i][k] = f;
                if f != 0.0 {
                    for j in k + 1..6 {
                        lu[i][j] -= f * lu[k][j];
                    }
                }
            }
        }
        Some(Self { lu, perm })
    }

    pub fn solve(&self, b: &Vec6) -> Vec6 {
        let mut x = [0.0; 6];
        for i in 0..6 {
            let mut s = b[self.perm[i]];
            for j in 0..i {
                s -= self.lu[i][j] * x[j];
            }
            x[i] = s;
        }
        for i in (0..6).rev() {
            let mut s = x[i];
            for j in i + 1..6 {
                s -= self.lu[i][j] * x[j];
            }
            x[i] = s / self.lu[i][i];
        }
        x
    }

    /// 1-norm of the inverse, from six column solves.
    pub fn inverse_norm1(&self) -> f64 {
        let mut best: f64 = 0.0;
        for c in 0..6 {
            let mut e = [0.0; 6];
            e[c] = 1.0;
            let col = self.solve(&e);
            best = best.max(col.iter().map(|v| v.abs()).sum());
        }
        best
    }
}

pub fn norm1(a: &Mat6) -> f64 {
    (0..6).map(|j| (0..6).map(|i| a[i][j].abs()).sum::<f64>()).fold(0.0, f64::max)
}

/// 1-norm condition number; infinite for singular input.
pub fn cond1(a: &Mat6) -> f64 {
    match Lu6::new(a) {
        Some(lu) => norm1(a) * lu.inverse_norm1(),
        None => f64::INFINITY,
    }
}

pub fn mat_vec(a: &Mat6, x: &Vec6) -> Vec6 {
    let mut y = [0.0; 6];
    for i in 0..6 {
        y[i] = (0..6).map(|j| a[i][j] * x[j]).sum();
    }
    y
}

/// Eight-point Gauss–Legendre nodes and weights on [-1, 1].
pub const GAUSS8: [(f64, f64); 8] = [
    (-0.960_289_856_497_536_2, 0.101_228_536_290_376_26),
    (-0.796_666_477_413_626_7, 0.222_381_034_453_374_48),
    (-0.525_532_409_916_329, 0.313_706_645_877_887_3),
    (-0.183_434_642_495_649_8, 0.362_683_783_378_362),
    (0.183_434_642_495_649_8, 0.362_683_783_378_362),
    (0.525_532_409_916_329, 0.313_706_645_877_887_3),
    (0.796_666_477_413_626_7, 0.222_381_034_453_374_48),
    (0.960_289_856_497_536_2, 0.101_228_536_290_376_26),
];

/// Integrates `f` over `[a, b]` with eight-point Gauss–Legendre.
pub fn gauss8(a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    GAUSS8.iter().map(|&(x, w)| w * f(mid + half * x)).sum::<f64>() * half
}

/// Index `i` such that `grid[i] <= x < grid[i + 1]`, clamped to the grid.
pub fn bracket(grid: &[f64], x: f64) -> usize {
    debug_assert!(grid.len() >= 2);
    let n = grid.len();
    if x <= grid[0] {
        return 0;
    }
    if x >= grid[n - 1] {
        return n - 2;
    }
    grid.partition_point(|&g| g <= x).saturating_sub(1).min(n - 2)
}

pub fn next_pow2(n: usize) -> usize {
    n.max(1).next_power_of_two()
}
