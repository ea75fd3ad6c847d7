//! Gauss–Legendre and Gauss–Kronrod rules on [-1, 1], computed at start-up.
//!
//! The Kronrod extension of the n-point Gauss rule adds the n+1 zeros of the
//! Stieltjes polynomial E_{n+1}, which is expanded in Legendre polynomials
//! and fixed by orthogonality against P_n P_k for odd k <= n.

use std::sync::OnceLock;

/// P_0..=P_n at x.
pub fn legendre_all(n: usize, x: f64) -> Vec<f64> {
    let mut p = vec![0.0; n + 1];
    p[0] = 1.0;
    if n >= 1 {
        p[1] = x;
    }
    for k in 1..n {
        let kf = k as f64;
        p[k + 1] = ((2.0 * kf + 1.0) * x * p[k] - kf * p[k - 1]) / (kf + 1.0);
    }
    p
}

/// (P_n(x), P_n'(x)).
pub fn legendre(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let (mut p0, mut p1) = (1.0, x);
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let dp = if (1.0 - x * x).abs() < 1e-300 {
        // endpoint limit
        x.powi(n as i32 + 1) * nf * (nf + 1.0) / 2.0
    } else {
        nf * (p0 - x * p1) / (1.0 - x * x)
    };
    (p1, dp)
}

/// n-point Gauss–Legendre nodes (ascending) and weights.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut xs = vec![0.0; n];
    let mut ws = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n {
        let mut x = -(std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre(n, x);
        xs[i] = x;
        ws[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (xs, ws)
}

/// Dense solve with partial pivoting; `a` is row-major n x n.
pub(crate) fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col] == 0.0 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            if f != 0.0 {
                for c in col..n {
                    a[r][c] -= f * a[col][c];
                }
                b[r] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some(x)
}

/// Symmetric Gauss–Kronrod rule stored for non-negative nodes only.
#[derive(Clone, Debug)]
pub struct KronrodRule {
    /// Non-negative nodes, descending; the last one is 0.
    pub nodes: Vec<f64>,
    pub kronrod_weights: Vec<f64>,
    /// Gauss weight for nodes shared with the Gauss rule, else 0.
    pub gauss_weights: Vec<f64>,
}

impl KronrodRule {
    /// Kronrod extension of the n-point Gauss rule (n even, so that the
    /// centre node belongs to the Kronrod part only, or odd, so that it is
    /// shared).
    pub fn new(n: usize) -> Self {
        let (gx, gw) = gauss_legendre(n);
        // Stieltjes polynomial coefficients in the Legendre basis
        let js: Vec<usize> = (0..=n).filter(|j| (j + n + 1) % 2 == 0 && *j <= n).collect();
        let ks: Vec<usize> = (1..=n).filter(|k| k % 2 == 1).collect();
        let (qx, qw) = gauss_legendre(2 * n + 4);
        let triple = |a: usize, b: usize, c: usize| -> f64 {
            qx.iter()
                .zip(&qw)
                .map(|(&x, &w)| {
                    let p = legendre_all(a.max(b).max(c), x);
                    w * p[a] * p[b] * p[c]
                })
                .sum()
        };
        let mat: Vec<Vec<f64>> = ks
            .iter()
            .map(|&k| js.iter().map(|&j| triple(n, k, j)).collect())
            .collect();
        let rhs: Vec<f64> = ks.iter().map(|&k| -triple(n, k, n + 1)).collect();
        let cj = solve_dense(mat, rhs).expect("Stieltjes system is regular");
        let mut coef = vec![0.0; n + 2];
        for (&j, &c) in js.iter().zip(&cj) {
            coef[j] = c;
        }
        coef[n + 1] = 1.0;
        let stieltjes = |x: f64| -> f64 {
            let p = legendre_all(n + 1, x);
            coef.iter().zip(&p).map(|(c, p)| c * p).sum()
        };
        // zeros of E_{n+1} interlace with the Gauss nodes
        let mut edges = vec![-1.0];
        edges.extend(gx.iter().cloned());
        edges.push(1.0);
        let mut kx = Vec::with_capacity(n + 1);
        for w in edges.windows(2) {
            let (mut a, mut b) = (w[0], w[1]);
            let (mut fa, _fb) = (stieltjes(a), stieltjes(b));
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                let fm = stieltjes(mid);
                if fm == 0.0 {
                    a = mid;
                    b = mid;
                    break;
                }
                if (fm > 0.0) == (fa > 0.0) {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
                if b - a < 1e-17 {
                    break;
                }
            }
            kx.push(0.5 * (a + b));
        }
        // merge and keep non-negative nodes, descending
        let mut all: Vec<(f64, f64)> = kx.iter().map(|&x| (x, 0.0)).collect();
        all.extend(gx.iter().zip(&gw).map(|(&x, &w)| (x, w)));
        let mut pos: Vec<(f64, f64)> = all
            .into_iter()
            .filter(|(x, _)| *x > -1e-14)
            .map(|(x, w)| (if x.abs() < 1e-14 { 0.0 } else { x }, w))
            .collect();
        pos.sort_by(|a, b| b.0.total_cmp(&a.0));
        let nodes: Vec<f64> = pos.iter().map(|p| p.0).collect();
        let gauss_weights: Vec<f64> = pos.iter().map(|p| p.1).collect();
        // weights from exactness on even Legendre polynomials
        let q = nodes.len();
        let mut mat = vec![vec![0.0; q]; q];
        for (c, &x) in nodes.iter().enumerate() {
            let p = legendre_all(2 * q, x);
            let mult = if x == 0.0 { 1.0 } else { 2.0 };
            for (r, row) in mat.iter_mut().enumerate() {
                row[c] = mult * p[2 * r];
            }
        }
        let mut rhs = vec![0.0; q];
        rhs[0] = 2.0;
        let kronrod_weights = solve_dense(mat, rhs).expect("Kronrod weight system is regular");
        KronrodRule {
            nodes,
            kronrod_weights,
            gauss_weights,
        }
    }

    /// Kronrod and Gauss estimates of the integral of `f` over [a, b]
    /// where `f` is sampled at `c + h x`.
    pub fn apply<T, F>(&self, mut f: F) -> (T, T)
    where
        T: Copy + std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T> + Default,
        F: FnMut(f64) -> T,
    {
        let mut k = T::default();
        let mut g = T::default();
        for ((&x, &wk), &wg) in self.nodes.iter().zip(&self.kronrod_weights).zip(&self.gauss_weights) {
            let v = if x == 0.0 { f(0.0) } else { f(x) + f(-x) };
            k = k + v * wk;
            if wg != 0.0 {
                g = g + v * wg;
            }
        }
        (k, g)
    }
}

/// The 10-point Gauss / 21-point Kronrod pair used by the adaptive integrator.
pub fn k21() -> &'static KronrodRule {
    static RULE: OnceLock<KronrodRule> = OnceLock::new();
    RULE.get_or_init(|| KronrodRule::new(10))
}
