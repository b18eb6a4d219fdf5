//! Symmetric tridiagonal eigensolver with an optional corner coupling.
//!
//! The matrix has diagonal `d`, sub/super-diagonal `e` and, for periodic
//! grids, equal entries `corner` at `(0, n−1)` and `(n−1, 0)`. Symmetric
//! Gaussian elimination of this shape only fills the last column, so the
//! `LDLᵀ` pivots stay `O(n)` to compute. Their signs give the Sturm count
//! (Sylvester inertia) used by bisection, and the same elimination solves
//! the shifted systems of inverse iteration.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
    pub corner: f64,
}

/// Pivots and last-column couplings of `A − σI = LDLᵀ`.
struct Factor {
    pivots: Vec<f64>,
    /// `last_col[i]` couples row `i` to row `n−1` after elimination.
    last_col: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>, corner: f64) -> Result<Self> {
        let n = diag.len();
        if n < 3 {
            return Err(Error::invalid("matrix", format!("needs at least 3 rows, got {n}")));
        }
        if off.len() != n - 1 {
            return Err(Error::invalid("matrix", "off-diagonal must have n-1 entries"));
        }
        Ok(Self { diag, off, corner })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Gershgorin interval containing every eigenvalue.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut r = 0.0;
            if i > 0 {
                r += self.off[i - 1].abs();
            }
            if i + 1 < n {
                r += self.off[i].abs();
            }
            if i == 0 || i == n - 1 {
                r += self.corner.abs();
            }
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    pub fn norm(&self) -> f64 {
        let (lo, hi) = self.gershgorin();
        lo.abs().max(hi.abs())
    }

    pub fn mul(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        let mut y: Vec<f64> = (0..n).map(|i| self.diag[i] * x[i]).collect();
        for i in 0..n - 1 {
            y[i] += self.off[i] * x[i + 1];
            y[i + 1] += self.off[i] * x[i];
        }
        y[0] += self.corner * x[n - 1];
        y[n - 1] += self.corner * x[0];
        y
    }

    fn factor(&self, shift: f64, guard: f64) -> Factor {
        let n = self.len();
        let guarded = |p: f64| {
            if p.abs() < guard {
                if p < 0.0 {
                    -guard
                } else {
                    guard
                }
            } else {
                p
            }
        };
        let mut pivots = vec![0.0; n];
        let mut last_col = vec![0.0; n];
        pivots[0] = guarded(self.diag[0] - shift);
        last_col[0] = if n == 2 { self.off[0] } else { self.corner };
        let mut tail = self.diag[n - 1] - shift;
        for i in 0..n - 2 {
            let l = self.off[i] / pivots[i];
            let next_col = if i + 1 == n - 2 { self.off[n - 2] } else { 0.0 };
            pivots[i + 1] = guarded(self.diag[i + 1] - shift - l * self.off[i]);
            last_col[i + 1] = next_col - l * last_col[i];
            tail -= last_col[i] * last_col[i] / pivots[i];
        }
        let k = n - 2;
        pivots[n - 1] = guarded(tail - last_col[k] * last_col[k] / pivots[k]);
        Factor { pivots, last_col }
    }

    fn pivot_floor(&self) -> f64 {
        let e2 = self
            .off
            .iter()
            .chain(std::iter::once(&self.corner))
            .map(|e| e * e)
            .fold(1.0f64, f64::max);
        f64::MIN_POSITIVE * e2
    }

    /// Number of eigenvalues strictly below `shift`.
    pub fn count_below(&self, shift: f64) -> usize {
        self.factor(shift, self.pivot_floor())
            .pivots
            .iter()
            .filter(|&&p| p < 0.0)
            .count()
    }

    /// Solves `(A − σI)x = b` in place.
    fn solve_shifted(&self, shift: f64, guard: f64, b: &mut [f64]) {
        let n = self.len();
        let f = self.factor(shift, guard);
        let k = n - 2;
        for i in 0..k {
            b[i + 1] -= self.off[i] / f.pivots[i] * b[i];
            b[n - 1] -= f.last_col[i] / f.pivots[i] * b[i];
        }
        b[n - 1] -= f.last_col[k] / f.pivots[k] * b[k];

        b[n - 1] /= f.pivots[n - 1];
        b[k] = (b[k] - f.last_col[k] * b[n - 1]) / f.pivots[k];
        for i in (0..k).rev() {
            b[i] = (b[i] - self.off[i] * b[i + 1] - f.last_col[i] * b[n - 1]) / f.pivots[i];
        }
    }

    /// The `index`-th smallest eigenvalue (0-based) by Sturm bisection.
    pub fn eigenvalue(&self, index: usize) -> f64 {
        let (mut lo, mut hi) = self.gershgorin();
        let pad = f64::EPSILON * self.norm().max(f64::MIN_POSITIVE);
        lo -= pad;
        hi += pad;
        for _ in 0..256 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > index {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= 2.0 * f64::EPSILON * lo.abs().max(hi.abs()) {
                break;
            }
        }
        0.5 * (lo + hi)
    }

    /// Lowest `count` eigenpairs, ascending, with unit-norm eigenvectors.
    pub fn lowest_eigenpairs(&self, count: usize) -> Result<Vec<(f64, Vec<f64>)>> {
        let n = self.len();
        if count == 0 || count > n {
            return Err(Error::invalid("levels", format!("must be in 1..={n}, got {count}")));
        }
        let norm = self.norm();
        let guard = f64::EPSILON * norm;
        let tol = 1e-10 * norm;
        let cluster_gap = 1e-7 * norm;

        // One extra value fixes the gap above the highest requested level.
        let values: Vec<f64> = (0..(count + 1).min(n)).map(|j| self.eigenvalue(j)).collect();
        let mut pairs: Vec<(f64, Vec<f64>)> = Vec::with_capacity(count);
        for (j, &lambda) in values.iter().take(count).enumerate() {
            // Shifting slightly off a (possibly degenerate) eigenvalue keeps
            // the unpivoted factorization well away from exact singularity.
            let gap = values
                .iter()
                .map(|mu| (mu - lambda).abs())
                .filter(|&d| d > cluster_gap)
                .fold(norm, f64::min);
            let shift = lambda - 1e-6 * gap;
            let cluster_start = pairs
                .iter()
                .rposition(|(mu, _)| lambda - mu > cluster_gap)
                .map_or(0, |p| p + 1);
            let mut x = start_vector(n, j);
            let mut residual = f64::INFINITY;
            let mut rayleigh = lambda;
            let orthogonalize = |x: &mut Vec<f64>, pairs: &[(f64, Vec<f64>)]| {
                for _ in 0..2 {
                    for (_, v) in &pairs[cluster_start..] {
                        let d = dot(x, v);
                        x.iter_mut().zip(v).for_each(|(a, b)| *a -= d * b);
                    }
                }
            };
            orthogonalize(&mut x, &pairs);
            for iter in 0..8 {
                self.solve_shifted(shift, guard, &mut x);
                orthogonalize(&mut x, &pairs);
                let len = dot(&x, &x).sqrt();
                if !(len.is_finite() && len > 0.0) {
                    return Err(Error::NonConvergence { level: j, residual });
                }
                x.iter_mut().for_each(|a| *a /= len);
                let ax = self.mul(&x);
                rayleigh = dot(&x, &ax);
                residual = ax
                    .iter()
                    .zip(&x)
                    .map(|(a, b)| (a - rayleigh * b).powi(2))
                    .sum::<f64>()
                    .sqrt();
                if iter >= 1 && residual <= tol {
                    break;
                }
            }
            if !(residual <= tol) {
                return Err(Error::NonConvergence { level: j, residual });
            }
            fix_sign(&mut x);
            pairs.push((rayleigh, x));
        }
        // The Rayleigh quotient refines the bisection value to O(residual²).
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        Ok(pairs)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Deterministic, non-degenerate starting vector for inverse iteration.
fn start_vector(n: usize, level: usize) -> Vec<f64> {
    let mut state = 0x9E37_79B9_7F4A_7C15u64 ^ (level as u64).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    (0..n)
        .map(|_| {
            state = state
                .wrapping_mul(6_364_136_223_846_793_005)
                .wrapping_add(1_442_695_040_888_963_407);
            0.5 + (state >> 11) as f64 / (1u64 << 53) as f64
        })
        .collect()
}

/// Makes the largest-magnitude component positive.
fn fix_sign(x: &mut [f64]) {
    let mut best = 0.0f64;
    let mut sign = 1.0;
    for &v in x.iter() {
        if v.abs() > best * (1.0 + 1e-12) {
            best = v.abs();
            sign = v.signum();
        }
    }
    if sign < 0.0 {
        x.iter_mut().for_each(|v| *v = -*v);
    }
}
