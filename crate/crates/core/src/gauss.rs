//! Gauss–Legendre and Gauss–Laguerre rules.
//!
//! Legendre nodes come from Newton iteration on the three-term recurrence
//! with the usual cosine starting guesses. Laguerre nodes start from the
//! eigenvalues of the Jacobi matrix (Golub–Welsch) and are then polished
//! by Newton iteration; the recurrence is rescaled on the fly so rules
//! with several hundred nodes do not overflow. Weights that underflow are
//! stored as zero and skipped during integration.

use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    /// Gauss–Legendre rule on [-1, 1].
    pub fn legendre(n: usize) -> Self {
        assert!(n >= 1, "rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut pp = 0.0;
            for _ in 0..100 {
                let (p1, p2) = legendre_pair(n, z);
                pp = nf * (z * p1 - p2) / (z * z - 1.0);
                let dz = p1 / pp;
                z -= dz;
                if dz.abs() <= 1e-15 {
                    let (p1, p2) = legendre_pair(n, z);
                    pp = nf * (z * p1 - p2) / (z * z - 1.0);
                    break;
                }
            }
            let w = 2.0 / ((1.0 - z * z) * pp * pp);
            nodes[i] = -z;
            nodes[n - 1 - i] = z;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    /// Gauss–Laguerre rule for ∫₀^∞ f(t) e^{-t} dt.
    pub fn laguerre(n: usize) -> Self {
        assert!(n >= 1, "rule needs at least one node");
        let diag: Vec<f64> = (0..n).map(|i| (2 * i + 1) as f64).collect();
        let off: Vec<f64> = (1..n).map(|i| i as f64).collect();
        let (mut nodes, _) = symmetric_tridiagonal_eigen(diag, off);
        nodes.sort_by(f64::total_cmp);

        let mut weights = Vec::with_capacity(n);
        for z in nodes.iter_mut() {
            for _ in 0..50 {
                let (p1, p2) = laguerre_scaled(n, *z);
                let pp = n as f64 * (p1 - p2) / *z;
                let dz = p1 / pp;
                *z -= dz;
                if dz.abs() <= 4.0 * f64::EPSILON * z.abs() {
                    break;
                }
            }
            weights.push(christoffel_weight(n, *z));
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// ∫_lo^hi f(x) dx.
    pub fn integrate_interval(&self, lo: f64, hi: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * f(mid + half * t))
            .sum::<f64>()
            * half
    }

    /// ∫₀^∞ f(x) e^{-rate·x} dx for a Laguerre rule.
    pub fn integrate_exp(&self, rate: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .filter(|(_, &w)| w > 0.0)
            .map(|(&t, &w)| w * f(t / rate))
            .sum::<f64>()
            / rate
    }
}

/// (P_n(z), P_{n-1}(z)).
fn legendre_pair(n: usize, z: f64) -> (f64, f64) {
    let mut p1 = 1.0;
    let mut p2 = 0.0;
    for j in 0..n {
        let p3 = p2;
        p2 = p1;
        p1 = ((2 * j + 1) as f64 * z * p2 - j as f64 * p3) / (j + 1) as f64;
    }
    (p1, p2)
}

/// (L_n, L_{n-1}) up to a common positive factor.
fn laguerre_scaled(n: usize, z: f64) -> (f64, f64) {
    let mut p1 = 1.0;
    let mut p2 = 0.0;
    for j in 0..n {
        let p3 = p2;
        p2 = p1;
        p1 = ((2 * j + 1) as f64 - z) * p2 / (j + 1) as f64 - j as f64 * p3 / (j + 1) as f64;
        let m = p1.abs().max(p2.abs());
        if m > 1e150 {
            p1 /= m;
            p2 /= m;
        }
    }
    (p1, p2)
}

/// 1 / Σ_{j<n} L_j(z)², the Christoffel form of the Laguerre weight. Every
/// term is positive, which keeps it accurate where z / (n L_{n-1})² loses
/// digits; the running sum is rescaled together with the recurrence.
fn christoffel_weight(n: usize, z: f64) -> f64 {
    let mut p1 = 1.0;
    let mut p2 = 0.0;
    let mut sum = 0.0;
    let mut log_scale = 0.0;
    for j in 0..n {
        sum += p1 * p1;
        let p3 = p2;
        p2 = p1;
        p1 = ((2 * j + 1) as f64 - z) * p2 / (j + 1) as f64 - j as f64 * p3 / (j + 1) as f64;
        let m = p1.abs().max(p2.abs());
        if m > 1e150 {
            p1 /= m;
            p2 /= m;
            sum /= m * m;
            log_scale += m.ln();
        }
    }
    (-2.0 * log_scale).exp() / sum
}

/// Eigenvalues of a symmetric tridiagonal matrix by implicit QL with
/// Wilkinson shifts. Returns (eigenvalues, first eigenvector components).
pub(crate) fn symmetric_tridiagonal_eigen(mut d: Vec<f64>, off: Vec<f64>) -> (Vec<f64>, Vec<f64>) {
    let n = d.len();
    let mut e = off;
    e.push(0.0);
    let mut z = vec![0.0; n];
    z[0] = 1.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter < 100, "tridiagonal QL failed to converge");
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    (d, z)
}
