//! Phase families `(l, m, kappa)`, scalings, sector geometry and the
//! curvilinear coordinates attached to the localisation curve.
//!
//! Sector convention: `S_j = {(2j-2)pi/n < arg t < (2j-1)pi/n}` for
//! `j = 1..=n`, `n = 2m + l`, with arguments taken modulo `2 pi`. The hill
//! `H_j` is the gap between `S_j` and `S_{j+1}`.

use crate::error::{Error, Result};
use crate::poly::Poly;
use num_complex::Complex64;
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseFamily {
    pub l: u32,
    pub m: u32,
    pub kappa: f64,
    pub alpha: f64,
    pub lambda: f64,
    pub c_lm: f64,
    pub n_sectors: u32,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OuterPoint {
    pub x: f64,
    pub y: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[allow(non_snake_case)]
pub struct InnerPoint {
    pub X: f64,
    pub Y: f64,
    pub k: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PoleSide {
    None,
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ContourSpec {
    pub start_sector: u32,
    pub end_sector: u32,
    pub pole_side: PoleSide,
}

impl ContourSpec {
    pub fn new(i: u32, j: u32) -> Self {
        ContourSpec {
            start_sector: i,
            end_sector: j,
            pole_side: PoleSide::None,
        }
    }

    pub fn with_pole(i: u32, j: u32, side: PoleSide) -> Self {
        ContourSpec {
            start_sector: i,
            end_sector: j,
            pole_side: side,
        }
    }

    pub fn validate(&self, fam: &PhaseFamily) -> Result<()> {
        let n = fam.n_sectors;
        if !(1..=n).contains(&self.start_sector) || !(1..=n).contains(&self.end_sector) {
            return Err(Error::InvalidParameter(format!(
                "sector indices must lie in 1..={n}, got ({}, {})",
                self.start_sector, self.end_sector
            )));
        }
        if self.start_sector == self.end_sector {
            return Err(Error::InvalidParameter(
                "start and end sectors must differ".into(),
            ));
        }
        Ok(())
    }
}

/// Sign choice for the two branches of the localisation curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// `x^(num/den)` for real `x`, using the real odd root for negative `x`.
/// Returns NaN for negative `x` with an even denominator.
pub fn real_pow(x: f64, num: i64, den: i64) -> f64 {
    let g = gcd(num.unsigned_abs(), den.unsigned_abs()) as i64;
    let (num, den) = (num / g, den / g);
    if den == 1 {
        return x.powi(num as i32);
    }
    if x >= 0.0 {
        return x.powf(num as f64 / den as f64);
    }
    if den % 2 == 0 {
        return f64::NAN;
    }
    let mag = (-x).powf(num as f64 / den as f64);
    if num % 2 == 0 {
        mag
    } else {
        -mag
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}

pub fn make_family(l: i64, m: i64, kappa: f64) -> Result<PhaseFamily> {
    if l < 1 || m < 1 {
        return Err(Error::InvalidParameter(format!(
            "l and m must be positive integers, got l={l}, m={m}"
        )));
    }
    if !(kappa > 0.0) || !kappa.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "kappa must be positive and finite, got {kappa}"
        )));
    }
    let (lf, mf) = (l as f64, m as f64);
    let alpha = (1.0 / kappa) * (mf / (lf + mf)) * (mf / lf).powf(lf / mf);
    let n = 2 * m + l;
    let c_lm = lf.powf(2.0 * lf) / (mf * (lf + mf)).powf(lf);
    Ok(PhaseFamily {
        l: l as u32,
        m: m as u32,
        kappa,
        alpha,
        lambda: lf / n as f64,
        c_lm,
        n_sectors: n as u32,
    })
}

impl PhaseFamily {
    pub fn n(&self) -> u32 {
        self.n_sectors
    }

    /// `-y t^m - x t^(2m)/2 + alpha m t^n / n` as a polynomial in `t`.
    pub fn phase_poly(&self, x: f64, y: f64) -> Poly {
        self.phase_poly_c(Complex64::new(x, 0.0), Complex64::new(y, 0.0))
    }

    /// As [`phase_poly`](Self::phase_poly) with complex coefficients.
    pub fn phase_poly_c(&self, x: Complex64, y: Complex64) -> Poly {
        let (m, n) = (self.m as usize, self.n_sectors as usize);
        let mut c = vec![Complex64::new(0.0, 0.0); n + 1];
        c[m] -= y;
        c[2 * m] -= x * 0.5;
        c[n] += Complex64::new(self.alpha * self.m as f64 / n as f64, 0.0);
        Poly::new(c)
    }

    /// Valley bisector `(4j-3) pi / (2n)`.
    pub fn sector_bisector(&self, j: u32) -> f64 {
        (4.0 * j as f64 - 3.0) * PI / (2.0 * self.n_sectors as f64)
    }

    /// Hill bisector `(4j-1) pi / (2n)`.
    pub fn hill_bisector(&self, j: u32) -> f64 {
        (4.0 * j as f64 - 1.0) * PI / (2.0 * self.n_sectors as f64)
    }

    /// Sector containing direction `theta`, or `None` on a hill or edge.
    pub fn sector_of_angle(&self, theta: f64) -> Option<u32> {
        match self.classify_direction(theta) {
            Direction::Valley(j) => Some(j),
            Direction::Hill(_) => None,
        }
    }

    /// Valley or hill whose open interval contains `theta` (edges are
    /// assigned to the following interval).
    pub fn classify_direction(&self, theta: f64) -> Direction {
        let n = self.n_sectors as f64;
        let u = (theta * n / PI).rem_euclid(2.0 * n);
        let idx = (u / 2.0).floor() as u32 % self.n_sectors + 1;
        if u - 2.0 * (u / 2.0).floor() < 1.0 {
            Direction::Valley(idx)
        } else {
            Direction::Hill(idx)
        }
    }

    /// `(l/m)^(l/m) kappa x`, the l-th power of the coalescence root.
    pub fn coalescence_tau_pow_l(&self, x: f64) -> f64 {
        let (l, m) = (self.l as f64, self.m as f64);
        (l / m).powf(l / m) * self.kappa * x
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Valley(u32),
    Hill(u32),
}

/// `p = -Y t^m - X t^(2m)/2 + alpha m t^(2m+l)/(2m+l)`.
#[allow(non_snake_case)]
pub fn phase_unscaled(fam: &PhaseFamily, X: f64, Y: f64, t: Complex64) -> Complex64 {
    fam.phase_poly(X, Y).eval(t)
}

/// Scaled phase and its first two derivatives.
pub fn phase_scaled(
    fam: &PhaseFamily,
    pt: OuterPoint,
    tau: Complex64,
) -> (Complex64, Complex64, Complex64) {
    fam.phase_poly(pt.x, pt.y).eval2(tau)
}

/// Real `Y` on the localisation curve `(-Y)^l = C kappa^m X^(l+m)`.
#[allow(non_snake_case)]
pub fn localisation_curve(fam: &PhaseFamily, X: f64) -> Vec<f64> {
    let (l, m) = (fam.l as i64, fam.m as i64);
    let rhs = fam.c_lm * fam.kappa.powi(m as i32) * X.powi((l + m) as i32);
    if l % 2 == 1 {
        let r = real_pow(rhs, 1, l);
        vec![-r]
    } else if rhs < 0.0 {
        vec![]
    } else if rhs == 0.0 {
        vec![0.0]
    } else {
        let r = rhs.powf(1.0 / l as f64);
        vec![r, -r]
    }
}

pub fn scale_point(fam: &PhaseFamily, inner: InnerPoint) -> OuterPoint {
    let n = fam.n_sectors as f64;
    let (l, m) = (fam.l as f64, fam.m as f64);
    OuterPoint {
        x: inner.X * inner.k.powf(-l / n),
        y: inner.Y * inner.k.powf(-(l + m) / n),
    }
}

pub fn unscale_point(fam: &PhaseFamily, pt: OuterPoint, k: f64) -> InnerPoint {
    let n = fam.n_sectors as f64;
    let (l, m) = (fam.l as f64, fam.m as f64);
    InnerPoint {
        X: pt.x * k.powf(l / n),
        Y: pt.y * k.powf((l + m) / n),
        k,
    }
}

/// `t = k^(1/n) tau`.
pub fn unscale_tau(fam: &PhaseFamily, k: f64, tau: Complex64) -> Complex64 {
    tau * k.powf(1.0 / fam.n_sectors as f64)
}

pub fn scale_t(fam: &PhaseFamily, k: f64, t: Complex64) -> Complex64 {
    t * k.powf(-1.0 / fam.n_sectors as f64)
}

/// Curvilinear coordinates `(t, z)` hugging one branch of the localisation
/// curve, together with the unimodular factor turning `A` into `u`.
#[derive(Clone, Copy, Debug)]
pub struct CurvilinearMap {
    pub fam: PhaseFamily,
    pub branch: Branch,
}

impl CurvilinearMap {
    pub fn new(fam: &PhaseFamily, branch: Option<Branch>) -> Result<Self> {
        let branch = match (fam.l % 2, branch) {
            (1, None) | (1, Some(Branch::Plus)) => Branch::Plus,
            (1, Some(Branch::Minus)) => {
                return Err(Error::InvalidParameter(
                    "odd l has a single branch; use Plus".into(),
                ))
            }
            (_, Some(b)) => b,
            (_, None) => {
                return Err(Error::InvalidParameter(
                    "even l requires an explicit branch".into(),
                ))
            }
        };
        Ok(CurvilinearMap { fam: *fam, branch })
    }

    fn shift(&self, x: f64) -> f64 {
        let (l, m) = (self.fam.l as i64, self.fam.m as i64);
        self.fam.c_lm.powf(1.0 / l as f64)
            * self.fam.kappa.powf(m as f64 / l as f64)
            * real_pow(x, l + m, l)
    }

    /// `z = Y +- C^(1/l) kappa^(m/l) X^(1+m/l)`.
    #[allow(non_snake_case)]
    pub fn z_of(&self, X: f64, Y: f64) -> f64 {
        Y + self.branch.sign() * self.shift(X)
    }

    #[allow(non_snake_case)]
    pub fn y_of(&self, t: f64, z: f64) -> f64 {
        z - self.branch.sign() * self.shift(t)
    }

    /// Exponent `theta` of the factor `exp(i theta)` with `u = A exp(i theta)`.
    #[allow(non_snake_case)]
    pub fn phase_factor(&self, X: f64, Y: f64) -> f64 {
        let (l, m) = (self.fam.l as i64, self.fam.m as i64);
        let (lf, mf) = (l as f64, m as f64);
        let kap = self.fam.kappa;
        let kk = lf.powi(3) * (3.0 * mf + lf) / (2.0 * mf * mf * (mf + lf) * (2.0 * mf + lf));
        self.branch.sign() * (lf / mf) * kap.powf(mf / lf) * real_pow(X, m, l) * Y
            + kk * kap.powf(2.0 * mf / lf) * real_pow(X, 2 * m + l, l)
    }

    /// Sampler `u(t, z)` built from a sampler `A(X, Y)`.
    pub fn transform<'a, F>(&'a self, a: F) -> impl Fn(f64, f64) -> Complex64 + 'a
    where
        F: Fn(f64, f64) -> Complex64 + 'a,
    {
        move |t, z| {
            let y = self.y_of(t, z);
            a(t, y) * Complex64::from_polar(1.0, self.phase_factor(t, y))
        }
    }

    /// Central-difference residual of `2i u_t + u_zz +- 2 kappa^(m/l) z t^(m/l-1) u`.
    pub fn residual<F>(&self, u: F, t: f64, z: f64, h: f64) -> Complex64
    where
        F: Fn(f64, f64) -> Complex64,
    {
        let (l, m) = (self.fam.l as i64, self.fam.m as i64);
        let u0 = u(t, z);
        let ut = (u(t + h, z) - u(t - h, z)) / (2.0 * h);
        let uzz = (u(t, z + h) - 2.0 * u0 + u(t, z - h)) / (h * h);
        let coef = 2.0 * self.fam.kappa.powf(m as f64 / l as f64) * real_pow(t, m - l, l);
        Complex64::new(0.0, 2.0) * ut + uzz + self.branch.sign() * coef * z * u0
    }
}
