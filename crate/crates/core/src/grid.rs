//! Rectangular field grids over inner coordinates and the finite-difference
//! PWE residual.

use crate::error::{Error, Result};
use crate::family::{ContourSpec, InnerPoint, PhaseFamily, PoleSide};
use crate::logc::LogComplex;
use crate::quadrature::{evaluate_A, evaluate_A_abs, Prefactor};
use num_complex::Complex64;
use rayon::prelude::*;

#[derive(Clone, Debug, PartialEq)]
pub struct GridMeta {
    pub l: u32,
    pub m: u32,
    pub kappa: f64,
    pub contour: (u32, u32),
    pub pole_side: PoleSide,
    pub prefactor: String,
    pub k: f64,
    pub tol: f64,
}

impl GridMeta {
    pub fn new(fam: &PhaseFamily, spec: &ContourSpec, prefactor: &str, k: f64, tol: f64) -> Self {
        GridMeta {
            l: fam.l,
            m: fam.m,
            kappa: fam.kappa,
            contour: (spec.start_sector, spec.end_sector),
            pole_side: spec.pole_side,
            prefactor: prefactor.to_string(),
            k,
            tol,
        }
    }

    /// Outer `x` of an inner `X`.
    pub fn outer_x(&self, x: f64) -> f64 {
        let n = (self.l + 2 * self.m) as f64;
        x * self.k.powf(-(self.l as f64) / n)
    }
}

/// Row-major grid, `Y` outer and `X` inner: cell `(i, j)` sits at
/// `(x_axis[i], y_axis[j])` and index `j * nx + i`.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldGrid {
    pub x_axis: Vec<f64>,
    pub y_axis: Vec<f64>,
    pub values: Vec<LogComplex>,
    /// `true` where evaluation failed.
    pub mask: Vec<bool>,
    pub meta: GridMeta,
}

/// Derived scalar layers of a grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Layer {
    LogMag,
    Phase,
    Abs,
    /// `Re[A exp(i k x)]` with `x` the outer coordinate.
    RePhys,
}

fn strictly_monotone(a: &[f64]) -> bool {
    a.windows(2).all(|w| w[1] > w[0]) || a.windows(2).all(|w| w[1] < w[0])
}

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

impl FieldGrid {
    pub fn nx(&self) -> usize {
        self.x_axis.len()
    }

    pub fn ny(&self) -> usize {
        self.y_axis.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.nx() * self.ny();
        if self.values.len() != n || self.mask.len() != n {
            return Err(Error::InvalidParameter("grid shape mismatch".into()));
        }
        if !strictly_monotone(&self.x_axis) || !strictly_monotone(&self.y_axis) {
            return Err(Error::InvalidParameter("grid axes must be strictly monotone".into()));
        }
        Ok(())
    }

    pub fn at(&self, i: usize, j: usize) -> Option<LogComplex> {
        let idx = j * self.nx() + i;
        if self.mask[idx] {
            None
        } else {
            Some(self.values[idx])
        }
    }

    /// Samples `f` at every cell; `None` masks the cell.
    pub fn from_fn<F>(x_axis: Vec<f64>, y_axis: Vec<f64>, meta: GridMeta, f: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> Option<LogComplex> + Sync,
    {
        let nx = x_axis.len();
        let cells: Vec<Option<LogComplex>> = (0..nx * y_axis.len())
            .into_par_iter()
            .map(|idx| f(x_axis[idx % nx], y_axis[idx / nx]))
            .collect();
        let mask = cells.iter().map(|c| c.is_none()).collect();
        let values = cells.into_iter().map(|c| c.unwrap_or(LogComplex::ZERO)).collect();
        let g = FieldGrid {
            x_axis,
            y_axis,
            values,
            mask,
            meta,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn masked_count(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    /// Value of `layer` at cell `(i, j)`; NaN when masked.
    pub fn layer(&self, layer: Layer, i: usize, j: usize) -> f64 {
        let Some(v) = self.at(i, j) else {
            return f64::NAN;
        };
        match layer {
            Layer::LogMag => v.log_mag,
            Layer::Phase => v.phase,
            Layer::Abs => v.abs(),
            Layer::RePhys => {
                let kx = self.meta.k * self.meta.outer_x(self.x_axis[i]);
                LogComplex::new(v.log_mag, v.phase + kx).to_complex().re
            }
        }
    }
}

/// Evaluates `A` on a `res.0 x res.1` grid over `x_range x y_range`.
/// Failing cells are masked, never fatal.
pub fn evaluate_grid(
    fam: &PhaseFamily,
    spec: &ContourSpec,
    f: &Prefactor,
    k: f64,
    x_range: (f64, f64),
    y_range: (f64, f64),
    res: (usize, usize),
    tol: f64,
) -> Result<FieldGrid> {
    evaluate_grid_floor(fam, spec, f, k, x_range, y_range, res, tol, None)
}

/// As [`evaluate_grid`]; with `floor = Some(scale)` a cell is also accepted
/// once its error estimate is below `tol * scale`, which lets fields with
/// genuine zeros on the grid (modal fields on their boundary) converge.
#[allow(clippy::too_many_arguments)]
pub fn evaluate_grid_floor(
    fam: &PhaseFamily,
    spec: &ContourSpec,
    f: &Prefactor,
    k: f64,
    x_range: (f64, f64),
    y_range: (f64, f64),
    res: (usize, usize),
    tol: f64,
    floor: Option<f64>,
) -> Result<FieldGrid> {
    if res.0 < 2 || res.1 < 2 {
        return Err(Error::InvalidParameter("grid resolution must be >= 2 per axis".into()));
    }
    if !(k > 0.0) {
        return Err(Error::InvalidParameter(format!("k must be positive, got {k}")));
    }
    spec.validate(fam)?;
    let meta = GridMeta::new(fam, spec, &prefactor_name(f), k, tol);
    let xs = linspace(x_range.0, x_range.1, res.0);
    let ys = linspace(y_range.0, y_range.1, res.1);
    FieldGrid::from_fn(xs, ys, meta, |x, y| {
        let p = InnerPoint { X: x, Y: y, k };
        match floor {
            None => evaluate_A(fam, spec, f, p, tol).map(|r| r.value),
            Some(scale) => evaluate_A_abs(fam, spec, f, p, tol, scale),
        }
            .ok()
            .filter(|v| v.is_finite())
    })
}

pub fn prefactor_name(f: &Prefactor) -> String {
    match f {
        Prefactor::Unity => "unity".into(),
        Prefactor::ExpLinear(c) => format!("exp_linear({},{})", c.re, c.im),
        Prefactor::ExpPower { sigma, beta, reflected } => {
            format!("exp_power({sigma},{beta}{})", if *reflected { ",reflected" } else { "" })
        }
        Prefactor::Pekeris => "pekeris".into(),
        Prefactor::FourierKernel(_) => "fourier_kernel".into(),
    }
}

/// Max over interior cells of `|2i A_X + A_YY|` divided by the largest
/// modulus on the stencil. Axes must be uniform.
pub fn pwe_residual(g: &FieldGrid) -> Result<f64> {
    g.validate()?;
    let (nx, ny) = (g.nx(), g.ny());
    if nx < 3 || ny < 3 {
        return Err(Error::InvalidParameter("grid too small for the residual stencil".into()));
    }
    let hx = uniform_step(&g.x_axis)?;
    let hy = uniform_step(&g.y_axis)?;
    let mut worst: f64 = 0.0;
    for j in 1..ny - 1 {
        for i in 1..nx - 1 {
            let cells = [(i, j), (i + 1, j), (i - 1, j), (i, j + 1), (i, j - 1)];
            let vals: Option<Vec<LogComplex>> = cells.iter().map(|&(a, b)| g.at(a, b)).collect();
            let Some(vals) = vals else { continue };
            let s = vals.iter().map(|v| v.log_mag).fold(f64::NEG_INFINITY, f64::max);
            if s == f64::NEG_INFINITY {
                continue;
            }
            let z: Vec<Complex64> = vals.iter().map(|v| v.scale(-s).to_complex()).collect();
            let ax = (z[1] - z[2]) / (2.0 * hx);
            let ayy = (z[3] - 2.0 * z[0] + z[4]) / (hy * hy);
            let r = (Complex64::new(0.0, 2.0) * ax + ayy).norm();
            worst = worst.max(r);
        }
    }
    Ok(worst)
}

fn uniform_step(a: &[f64]) -> Result<f64> {
    let h = a[1] - a[0];
    for w in a.windows(2) {
        if ((w[1] - w[0]) - h).abs() > 1e-9 * h.abs() {
            return Err(Error::InvalidParameter("residual needs a uniform grid".into()));
        }
    }
    Ok(h)
}
