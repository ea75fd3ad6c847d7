//! Dense complex polynomials: evaluation with derivatives and simultaneous
//! (Aberth–Ehrlich) root finding.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Polynomial with complex coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    pub coeffs: Vec<Complex64>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.len() > 1 && coeffs.last().map_or(false, |c| *c == Complex64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Complex64::new(0.0, 0.0));
        }
        Poly { coeffs }
    }

    pub fn from_real(c: &[f64]) -> Self {
        Poly::new(c.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Value and first two derivatives.
    pub fn eval2(&self, z: Complex64) -> (Complex64, Complex64, Complex64) {
        let zero = Complex64::new(0.0, 0.0);
        let (mut p, mut d1, mut d2) = (zero, zero, zero);
        for &c in self.coeffs.iter().rev() {
            d2 = d2 * z + d1 * 2.0;
            d1 = d1 * z + p;
            p = p * z + c;
        }
        (p, d1, d2)
    }

    /// All derivatives of order 0..=k at z (k-th entry is the k-th derivative).
    pub fn derivatives(&self, z: Complex64, k: usize) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(k + 1);
        let mut q = self.clone();
        for _ in 0..=k {
            out.push(q.eval(z));
            q = q.derivative();
        }
        out
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::new(vec![Complex64::new(0.0, 0.0)]);
        }
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c * i as f64)
                .collect(),
        )
    }

    /// Cauchy bound on the modulus of the roots.
    pub fn root_bound(&self) -> f64 {
        let n = self.degree();
        let lead = self.coeffs[n].norm();
        1.0 + self.coeffs[..n]
            .iter()
            .map(|c| c.norm() / lead)
            .fold(0.0, f64::max)
    }

    /// Sum of coefficient moduli weighted by |z|^k, used to scale residuals.
    pub fn abs_scale(&self, z: Complex64) -> f64 {
        let r = z.norm();
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * r + c.norm())
    }

    /// All roots counted with multiplicity. Exact zero low-order
    /// coefficients are deflated first so that roots at the origin are exact.
    pub fn roots(&self) -> Result<Vec<Complex64>> {
        let n = self.degree();
        if n == 0 {
            return Ok(vec![]);
        }
        let nz = self
            .coeffs
            .iter()
            .take_while(|c| c.norm() == 0.0)
            .count();
        let mut roots = vec![Complex64::new(0.0, 0.0); nz];
        let rest = Poly::new(self.coeffs[nz..].to_vec());
        if rest.degree() > 0 {
            roots.extend(aberth(&rest)?);
        }
        Ok(roots)
    }
}

fn aberth(p: &Poly) -> Result<Vec<Complex64>> {
    let n = p.degree();
    let dp = p.derivative();
    if n == 1 {
        return Ok(vec![-p.coeffs[0] / p.coeffs[1]]);
    }
    // initial guesses on a circle of radius from the geometric coefficient mean
    let r0 = (p.coeffs[0].norm() / p.coeffs[n].norm()).powf(1.0 / n as f64).max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(r0, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4))
        .collect();
    let mut done = vec![false; n];
    for _iter in 0..500 {
        let mut all = true;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let pv = p.eval(z[i]);
            let scale = p.abs_scale(z[i]);
            if pv.norm() <= 4.0 * f64::EPSILON * scale {
                done[i] = true;
                continue;
            }
            all = false;
            let ratio = pv / dp.eval(z[i]);
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    let d = z[i] - z[j];
                    if d.norm() > 0.0 {
                        s += 1.0 / d;
                    }
                }
            }
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if !w.re.is_finite() || !w.im.is_finite() {
                let bump = Complex64::new(1e-8, 1e-8) * (1.0 + z[i].norm());
                z[i] += bump;
                continue;
            }
            z[i] -= w;
            if w.norm() <= 1e-15 * z[i].norm().max(1e-300) {
                done[i] = true;
            }
        }
        if all {
            break;
        }
    }
    // Newton polish (skipped where the derivative vanishes, i.e. multiple roots)
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let (v, d, _) = p.eval2(*zi);
            if d.norm() <= 1e-8 * p.abs_scale(*zi) / (1.0 + zi.norm()) {
                break;
            }
            let step = v / d;
            if !step.re.is_finite() || !step.im.is_finite() {
                break;
            }
            let cand = *zi - step;
            if p.eval(cand).norm() <= v.norm() {
                *zi = cand;
            } else {
                break;
            }
        }
    }
    let worst = z
        .iter()
        .map(|&zi| p.eval(zi).norm() / p.abs_scale(zi).max(1e-300))
        .fold(0.0, f64::max);
    // multiple roots are only resolved to about eps^(1/multiplicity)
    if !(worst < 1e-6) {
        return Err(Error::RootNonConvergence { residual: worst });
    }
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eval2_matches_hand_derivatives() {
        // 1 + 2z + 3z^3
        let p = Poly::from_real(&[1.0, 2.0, 0.0, 3.0]);
        let z = c(0.3, -0.7);
        let (v, d1, d2) = p.eval2(z);
        assert!((v - (1.0 + 2.0 * z + 3.0 * z * z * z)).norm() < 1e-14);
        assert!((d1 - (2.0 + 9.0 * z * z)).norm() < 1e-14);
        assert!((d2 - 18.0 * z).norm() < 1e-14);
    }

    #[test]
    fn roots_of_known_product() {
        let rts = [c(1.0, 0.0), c(-2.0, 0.5), c(-2.0, -0.5), c(0.0, 3.0)];
        let mut p = Poly::new(vec![c(1.0, 0.0)]);
        for r in rts {
            let mut next = vec![c(0.0, 0.0); p.coeffs.len() + 1];
            for (i, &a) in p.coeffs.iter().enumerate() {
                next[i + 1] += a;
                next[i] -= a * r;
            }
            p = Poly::new(next);
        }
        let found = p.roots().unwrap();
        for r in rts {
            let best = found.iter().map(|f| (f - r).norm()).fold(f64::INFINITY, f64::min);
            assert!(best < 1e-12, "missing root {r}");
        }
    }

    #[test]
    fn zero_roots_are_deflated_exactly() {
        let p = Poly::from_real(&[0.0, 0.0, -1.0, 0.0, 1.0]);
        let r = p.roots().unwrap();
        assert_eq!(r.iter().filter(|z| z.norm() == 0.0).count(), 2);
        assert_eq!(r.len(), 4);
    }

    #[test]
    fn double_root_is_found() {
        // (z-1)^2 (z+2)
        let p = Poly::from_real(&[2.0, -3.0, 0.0, 1.0]);
        let r = p.roots().unwrap();
        let near_one = r.iter().filter(|z| (*z - c(1.0, 0.0)).norm() < 1e-6).count();
        assert_eq!(near_one, 2);
    }
}
