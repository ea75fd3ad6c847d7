//! Leading-order far-field formulas near the localisation curves and on the
//! searchlight line, plus the concave-convex special function.

use crate::airy::airy_ai;
use crate::canonical::pearcey;
use crate::error::{Error, Result};
use crate::family::{unscale_point, ContourSpec, InnerPoint, OuterPoint, PhaseFamily};
use crate::quadrature::{evaluate_A, Prefactor};
use num_complex::Complex64;
use std::f64::consts::PI;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CuspBranch {
    Upper,
    Lower,
}

/// Local coordinates `x = x0 + delta x*`, `y = y_curve(x0) + delta y*`,
/// `tau = tau0 + zeta_scale zeta`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExpansionFrame {
    pub x0: f64,
    pub delta: f64,
    pub xstar: f64,
    pub ystar: f64,
    pub zeta_scale: f64,
}

fn check(fam: &PhaseFamily, l: u32, m: u32) -> Result<()> {
    if fam.l != l || fam.m != m {
        return Err(Error::InvalidParameter(format!(
            "formula needs the ({l},{m}) family, got ({},{})",
            fam.l, fam.m
        )));
    }
    Ok(())
}

fn check_k(k: f64) -> Result<()> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::InvalidParameter(format!("k must be positive, got {k}")));
    }
    Ok(())
}

impl ExpansionFrame {
    /// Frame at `x0` on the parabola `y = -kappa x^2/2`.
    pub fn parabola(fam: &PhaseFamily, k: f64, x0: f64, xstar: f64, ystar: f64) -> Result<Self> {
        check(fam, 1, 1)?;
        check_k(k)?;
        Ok(ExpansionFrame {
            x0,
            delta: k.powf(-2.0 / 3.0),
            xstar,
            ystar,
            zeta_scale: k.powf(-1.0 / 3.0) * (2.0 * fam.kappa).cbrt(),
        })
    }

    /// Frame at `x0 > 0` on the cusp `y = +-(4/3) kappa^(1/2) x^(3/2)`.
    pub fn cusp(fam: &PhaseFamily, k: f64, x0: f64, xstar: f64, ystar: f64) -> Result<Self> {
        check(fam, 2, 1)?;
        check_k(k)?;
        if !(x0 > 0.0) {
            return Err(Error::InvalidParameter("cusp frame needs x0 > 0".into()));
        }
        Ok(ExpansionFrame {
            x0,
            delta: k.powf(-2.0 / 3.0),
            xstar,
            ystar,
            zeta_scale: (4.0 * fam.kappa / x0).powf(1.0 / 6.0) * k.powf(-1.0 / 3.0),
        })
    }

    /// Frame at `x0 != 0` on the cubic `y = -kappa^2 x^3/6`.
    pub fn cubic(fam: &PhaseFamily, k: f64, x0: f64, xstar: f64, ystar: f64) -> Result<Self> {
        check(fam, 1, 2)?;
        check_k(k)?;
        if x0 == 0.0 || !x0.is_finite() {
            return Err(Error::InvalidParameter("cubic frame needs x0 != 0".into()));
        }
        Ok(ExpansionFrame {
            x0,
            delta: k.powf(-2.0 / 3.0),
            xstar,
            ystar,
            zeta_scale: k.powf(-1.0 / 3.0) * (2f64.sqrt() * fam.kappa * x0 * x0).powf(-1.0 / 3.0),
        })
    }

    /// Outer point `(x, y)` of the frame; `y0` is the curve height at `x0`.
    pub fn outer(&self, y0: f64) -> OuterPoint {
        OuterPoint {
            x: self.x0 + self.delta * self.xstar,
            y: y0 + self.delta * self.ystar,
        }
    }
}

/// Height of the localisation curve used by each frame.
pub fn parabola_y0(fam: &PhaseFamily, x0: f64) -> f64 {
    -fam.kappa * x0 * x0 / 2.0
}

pub fn cusp_y0(fam: &PhaseFamily, x0: f64, branch: CuspBranch) -> f64 {
    let y = (4.0 / 3.0) * fam.kappa.sqrt() * x0.powf(1.5);
    match branch {
        CuspBranch::Upper => y,
        CuspBranch::Lower => -y,
    }
}

pub fn cubic_y0(fam: &PhaseFamily, x0: f64) -> f64 {
    -fam.kappa * fam.kappa * x0.powi(3) / 6.0
}

/// Inner `(X, Y)` matching a frame at wavenumber `k`.
pub fn matched_point(fam: &PhaseFamily, frame: &ExpansionFrame, y0: f64, k: f64) -> InnerPoint {
    unscale_point(fam, frame.outer(y0), k)
}

/// Contour whose steepest-descent path crosses only the coalescing pair at
/// the frame's base point, so the Airy formula is its leading term. The full
/// real-axis integral also picks up isolated real saddles, which enter at a
/// relative order `k^{-1/6}` and beat against the Airy term.
pub fn coalescing_pair_contour(fam: &PhaseFamily, x0: f64, branch: CuspBranch) -> ContourSpec {
    match (fam.l, fam.m) {
        (2, 1) => match branch {
            CuspBranch::Lower => ContourSpec::new(2, 1),
            CuspBranch::Upper => ContourSpec::new(3, 4),
        },
        (1, 2) if x0 < 0.0 => ContourSpec::new(3, 2),
        _ => ContourSpec::new(2, 1),
    }
}

/// Leading-order `A_21` near the parabola, `x0 > 0`.
pub fn farfield_parabola(fam: &PhaseFamily, k: f64, frame: &ExpansionFrame) -> Result<Complex64> {
    check(fam, 1, 1)?;
    check_k(k)?;
    let kap = fam.kappa;
    let (x0, xs, ys) = (frame.x0, frame.xstar, frame.ystar);
    let c = (2.0 * kap).cbrt();
    let phase = k * kap * kap * x0.powi(3) / 6.0 - k.cbrt() * (kap * x0 * ys + 0.5 * kap * kap * x0 * x0 * xs);
    let ai = airy_ai(Complex64::new(-c * (ys + kap * x0 * xs), 0.0));
    Ok(2.0 * PI * c * (I * phase).exp() * ai)
}

/// Leading-order `A_31` near either branch of the cusp.
///
/// On the lower branch the double saddle is `tau0 = 2 (kappa x0)^(1/2)` with
/// phase `kappa x0^2`; the upper branch follows from `A_31(X, Y) = A_31(X, -Y)`.
pub fn farfield_cusp(fam: &PhaseFamily, k: f64, frame: &ExpansionFrame, branch: CuspBranch) -> Result<Complex64> {
    check(fam, 2, 1)?;
    check_k(k)?;
    if !(frame.x0 > 0.0) {
        return Err(Error::InvalidParameter("cusp formula needs x0 > 0".into()));
    }
    let kap = fam.kappa;
    let (x0, xs) = (frame.x0, frame.xstar);
    let ys = match branch {
        CuspBranch::Lower => frame.ystar,
        CuspBranch::Upper => -frame.ystar,
    };
    let s = (kap * x0).sqrt();
    let c = (4.0 * kap / x0).powf(1.0 / 6.0);
    let phase = k * kap * x0 * x0 - k.cbrt() * (2.0 * s * ys + 2.0 * kap * x0 * xs);
    let ai = airy_ai(Complex64::new(-c * (ys + 2.0 * s * xs), 0.0));
    Ok(2.0 * PI * k.powf(-1.0 / 12.0) * c * (I * phase).exp() * ai)
}

/// Leading-order `A_31` of the `(1,2)` family near the cubic.
pub fn farfield_cubic(fam: &PhaseFamily, k: f64, frame: &ExpansionFrame) -> Result<Complex64> {
    check(fam, 1, 2)?;
    check_k(k)?;
    let kap = fam.kappa;
    let (x0, xs, ys) = (frame.x0, frame.xstar, frame.ystar);
    if x0 == 0.0 {
        return Err(Error::InvalidParameter("cubic formula needs x0 != 0".into()));
    }
    let k2 = kap * kap;
    let phase = k * k2 * k2 * x0.powi(5) / 40.0 - k.cbrt() * (k2 * x0 * x0 * ys / 2.0 + k2 * k2 * x0.powi(4) * xs / 8.0);
    let arg = -x0.signum() * (2.0 * k2 * x0.abs()).cbrt() * (ys + k2 * x0 * x0 * xs / 2.0);
    let amp = 2.0 * PI * k.powf(1.0 / 5.0 - 1.0 / 3.0) * (2f64.sqrt() * kap * x0 * x0).powf(-1.0 / 3.0);
    Ok(amp * (I * phase).exp() * airy_ai(Complex64::new(arg, 0.0)))
}

/// Triple-saddle contribution on the searchlight line `y = k^{-1/2} y*`:
/// `k^{-1/20} (x0/2)^{-1/4} conj P(sqrt(2/x0) y*, 0)`.
pub fn searchlight(fam: &PhaseFamily, k: f64, x0: f64, ystar: f64) -> Result<Complex64> {
    check(fam, 1, 2)?;
    check_k(k)?;
    if !(x0 > 0.0) {
        return Err(Error::InvalidParameter("searchlight needs x0 > 0".into()));
    }
    let p = pearcey((2.0 / x0).sqrt() * ystar, 0.0)?;
    Ok(k.powf(-1.0 / 20.0) * (x0 / 2.0).powf(-0.25) * p.conj())
}

/// Inner point on the searchlight scaling: `X = k^{1/5} x0`, `Y = k^{1/10} y*`.
pub fn searchlight_point(k: f64, x0: f64, ystar: f64) -> InnerPoint {
    InnerPoint {
        X: k.powf(0.2) * x0,
        Y: k.powf(0.1) * ystar,
        k,
    }
}

/// Small-argument value `k^{-1/20} (x0/2)^{-1/4} int exp(-i zeta^4) d zeta`,
/// with the integral equal to `2 e^{-i pi/8} Gamma(5/4)`.
pub fn searchlight_small(k: f64, x0: f64) -> Complex64 {
    const GAMMA_5_4: f64 = 0.906_402_477_055_477;
    k.powf(-1.0 / 20.0) * (x0 / 2.0).powf(-0.25) * Complex64::from_polar(2.0 * GAMMA_5_4, -PI / 8.0)
}

/// Stationary-phase term `sqrt(pi) e^{-sign(Y) i pi/4} / sqrt|Y|`.
#[allow(non_snake_case)]
pub fn searchlight_large(Y: f64) -> Complex64 {
    Complex64::from_polar(PI.sqrt() / Y.abs().sqrt(), -Y.signum() * PI / 4.0)
}

/// Kazakov's concave-convex special function in terms of `A_32`.
#[allow(non_snake_case)]
pub fn kazakov_ccsf(fam: &PhaseFamily, k: f64, X: f64, Y: f64) -> Result<Complex64> {
    check(fam, 1, 2)?;
    check_k(k)?;
    let kap = fam.kappa;
    let a = evaluate_A(
        fam,
        &ContourSpec::new(3, 2),
        &Prefactor::Unity,
        InnerPoint { X, Y, k },
        1e-10,
    )?
    .value
    .to_complex();
    let phase = kap * kap * X * X * Y / 2.0 + 7.0 * kap.powi(4) * X.powi(5) / 120.0;
    Ok(k.powf(-0.2) * 2f64.powf(-0.1) * kap.powf(-0.2) * (I * phase).exp() * a)
}

/// Kazakov's variables `(t_K, z_K, scale v_K / t)` for a point `(X, Y)`.
#[allow(non_snake_case)]
pub fn kazakov_variables(fam: &PhaseFamily, k: f64, X: f64, Y: f64) -> (f64, f64, f64) {
    let kap = fam.kappa;
    let tk = k.powf(-0.2) * 2f64.powf(-0.6) * kap.powf(0.8) * X;
    let zk = k.powf(-0.6) * 2f64.powf(0.2) * kap.powf(0.4) * (Y + kap * kap * X.powi(3) / 6.0);
    let vk = k.powf(-0.2) * 2f64.powf(-0.1) * kap.powf(-0.2);
    (tk, zk, vk)
}
