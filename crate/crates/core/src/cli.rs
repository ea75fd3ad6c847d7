//! Command-line front end.

use crate::asymptotics::{self as asym, CuspBranch, ExpansionFrame};
use crate::bvp::{self, BoundaryCondition, FieldPart, ModalSpec, WaveKind};
use crate::canonical;
use crate::error::{Error, Result};
use crate::family::{make_family, ContourSpec, InnerPoint, OuterPoint, PhaseFamily, PoleSide};
use crate::grid::{evaluate_grid_floor, linspace, pwe_residual, FieldGrid, GridMeta, Layer};
use crate::io::{fmt_f64, write_csv, write_pgm};
use crate::logc::LogComplex;
use crate::quadrature::{evaluate_A, Prefactor};
use crate::saddle::{find_saddles, stokes_constants};
use crate::sdpath::assemble_contour;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(name = "pwe-contour", version, about = "Contour-integral fields of the parabolic wave equation 2i A_X + A_YY = 0")]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Command,
}

#[derive(Args, Debug, Clone)]
pub struct FamilyArgs {
    /// Phase exponent l.
    #[arg(long, default_value_t = 1)]
    pub l: i64,
    /// Phase exponent m.
    #[arg(long, default_value_t = 1)]
    pub m: i64,
    /// Curvature parameter kappa > 0.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub kappa: f64,
}

impl FamilyArgs {
    fn family(&self) -> Result<PhaseFamily> {
        make_family(self.l, self.m, self.kappa)
    }
}

#[derive(Copy, Clone, Debug, ValueEnum)]
pub enum PoleArg {
    None,
    Left,
    Right,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
pub enum PrefactorArg {
    Unity,
    /// Whispering-gallery modal prefactor (family (1,1), contour 2 1).
    Wg,
    /// Creeping-wave modal prefactor (family (1,1), contour 3 2).
    Creeping,
    /// exp(c t) with c = --c-re + i --c-im.
    ExpLinear,
    /// exp(i sigma t^beta).
    ExpPower,
    /// Pekeris caret function; requires --pole.
    Pekeris,
}

#[derive(Args, Debug, Clone)]
pub struct PrefactorArgs {
    #[arg(long, value_enum, default_value_t = PrefactorArg::Unity)]
    pub prefactor: PrefactorArg,
    /// Mode index n for wg/creeping.
    #[arg(long, default_value_t = 0)]
    pub mode: usize,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub c_re: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub c_im: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub sigma: f64,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    /// Evaluate the exp-power prefactor at -t.
    #[arg(long, default_value_t = false)]
    pub reflected: bool,
}

impl PrefactorArgs {
    fn build(&self, fam: &PhaseFamily) -> Result<Prefactor> {
        let modal = |kind| {
            bvp::modal_prefactor_parabola(&ModalSpec {
                family: *fam,
                boundary_condition: BoundaryCondition::Dirichlet,
                mode_index: self.mode,
                wave_kind: kind,
            })
        };
        Ok(match self.prefactor {
            PrefactorArg::Unity => Prefactor::Unity,
            PrefactorArg::Wg => modal(WaveKind::WhisperingGallery)?,
            PrefactorArg::Creeping => modal(WaveKind::Creeping)?,
            PrefactorArg::ExpLinear => Prefactor::ExpLinear(Complex64::new(self.c_re, self.c_im)),
            PrefactorArg::ExpPower => Prefactor::ExpPower {
                sigma: self.sigma,
                beta: self.beta,
                reflected: self.reflected,
            },
            PrefactorArg::Pekeris => Prefactor::Pekeris,
        })
    }
}

#[derive(Args, Debug, Clone)]
pub struct ContourArgs {
    /// Start and end sectors i j of the contour.
    #[arg(long, num_args = 2, value_names = ["I", "J"], default_values_t = [2, 1])]
    pub contour: Vec<u32>,
    /// Side of the origin passed by the contour when F has a pole there.
    #[arg(long, value_enum, default_value_t = PoleArg::None)]
    pub pole: PoleArg,
}

impl ContourArgs {
    fn spec(&self) -> ContourSpec {
        let side = match self.pole {
            PoleArg::None => PoleSide::None,
            PoleArg::Left => PoleSide::Left,
            PoleArg::Right => PoleSide::Right,
        };
        ContourSpec::with_pole(self.contour[0], self.contour[1], side)
    }
}

#[derive(Args, Debug, Clone)]
pub struct GridArgs {
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_hyphen_values = true, default_values_t = [-5.0, 5.0])]
    pub x_range: Vec<f64>,
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_hyphen_values = true, default_values_t = [-5.0, 5.0])]
    pub y_range: Vec<f64>,
    /// Samples along X and Y.
    #[arg(long, num_args = 2, value_names = ["NX", "NY"], default_values_t = [101, 101])]
    pub res: Vec<usize>,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
pub enum LayerArg {
    LogMag,
    Phase,
    Abs,
    RePhys,
}

impl From<LayerArg> for Layer {
    fn from(l: LayerArg) -> Layer {
        match l {
            LayerArg::LogMag => Layer::LogMag,
            LayerArg::Phase => Layer::Phase,
            LayerArg::Abs => Layer::Abs,
            LayerArg::RePhys => Layer::RePhys,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// CSV output path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Optional PGM image of one layer.
    #[arg(long)]
    pub pgm: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = LayerArg::Abs)]
    pub layer: LayerArg,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
pub enum CanonicalFn {
    Airy,
    AiryPrime,
    AiryZero,
    Pearcey,
    C4,
    C5,
    Fresnel,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
pub enum AsymKind {
    Parabola,
    CuspUpper,
    CuspLower,
    Cubic,
    Searchlight,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
pub enum PartArg {
    Total,
    Scattered,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate A(X, Y) on a grid of inner coordinates.
    Field {
        #[command(flatten)]
        fam: FamilyArgs,
        #[command(flatten)]
        contour: ContourArgs,
        #[command(flatten)]
        pre: PrefactorArgs,
        /// Wavenumber.
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        k: f64,
        #[command(flatten)]
        grid: GridArgs,
        /// Relative tolerance per point.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[command(flatten)]
        out: OutputArgs,
        /// Also print the finite-difference PWE residual.
        #[arg(long, default_value_t = false)]
        residual: bool,
    },
    /// List the saddles at an outer point (x, y).
    Saddles {
        #[command(flatten)]
        fam: FamilyArgs,
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
        #[arg(long, allow_hyphen_values = true)]
        y: f64,
    },
    /// Region letters and contributing-saddle signatures over an outer grid.
    Regions {
        #[command(flatten)]
        fam: FamilyArgs,
        #[command(flatten)]
        contour: ContourArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a canonical special function.
    Canonical {
        #[arg(value_enum)]
        func: CanonicalFn,
        /// Real arguments (Airy takes re im; Airy zero takes n).
        #[arg(allow_hyphen_values = true)]
        args: Vec<f64>,
    },
    /// Compare a far-field formula with quadrature.
    Asym {
        #[arg(value_enum)]
        kind: AsymKind,
        #[arg(long, default_value_t = 1.0)]
        kappa: f64,
        #[arg(long, default_value_t = 100.0)]
        k: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        x0: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        xstar: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        ystar: f64,
    },
    /// Fock-Leontovich tangent-ray field, or the Pekeris function at one point.
    Bvp {
        #[arg(long, value_enum, default_value_t = PartArg::Total)]
        part: PartArg,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutputArgs,
        /// Evaluate the Pekeris function at t = re + i im instead.
        #[arg(long, num_args = 2, value_names = ["RE", "IM"], allow_hyphen_values = true)]
        pekeris: Option<Vec<f64>>,
    },
    /// Print the Stokes constants rho_star and mu_star.
    Constants,
}

/// Runs one command; returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    let cmdline = argv.iter().map(|a| a.to_string_lossy()).collect::<Vec<_>>().join(" ");
    match execute(cli.cmd, &cmdline, out) {
        Ok(()) => 0,
        Err(e @ Error::InvalidParameter(_)) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn io_to_err(e: std::io::Error) -> Error {
    Error::Io {
        context: "stdout".into(),
        source: e,
    }
}

fn c(z: Complex64) -> String {
    format!("{} {}", fmt_f64(z.re), fmt_f64(z.im))
}

fn emit_grid(g: &FieldGrid, o: &OutputArgs, cmdline: &str, out: &mut dyn Write) -> Result<()> {
    let extra = [format!("cmd {cmdline}")];
    match &o.out {
        Some(p) => write_csv(g, p, &extra)?,
        None => out.write_all(crate::io::csv_string(g, &extra).as_bytes()).map_err(io_to_err)?,
    }
    if let Some(p) = &o.pgm {
        write_pgm(g, o.layer.into(), p)?;
    }
    Ok(())
}

fn range(v: &[f64]) -> (f64, f64) {
    (v[0], v[1])
}

fn execute(cmd: Command, cmdline: &str, out: &mut dyn Write) -> Result<()> {
    match cmd {
        Command::Field { fam, contour, pre, k, grid, tol, out: o, residual } => {
            let fam = fam.family()?;
            let spec = contour.spec();
            let f = pre.build(&fam)?;
            let floor = matches!(pre.prefactor, PrefactorArg::Wg | PrefactorArg::Creeping).then_some(1.0);
            let g = evaluate_grid_floor(&fam, &spec, &f, k, range(&grid.x_range), range(&grid.y_range), (grid.res[0], grid.res[1]), tol, floor)?;
            emit_grid(&g, &o, cmdline, out)?;
            if g.masked_count() > 0 {
                let (i, j) = first_masked(&g);
                return Err(Error::Assembly(format!(
                    "{} of {} cells failed; first at X={} Y={}",
                    g.masked_count(),
                    g.values.len(),
                    g.x_axis[i],
                    g.y_axis[j]
                )));
            }
            if residual {
                let r = pwe_residual(&g)?;
                writeln!(out, "# pwe_residual {}", fmt_f64(r)).map_err(io_to_err)?;
            }
            Ok(())
        }
        Command::Saddles { fam, x, y } => {
            let fam = fam.family()?;
            let s = find_saddles(&fam, OuterPoint { x, y })?;
            writeln!(out, "re_tau,im_tau,order,re_phi,im_phi").map_err(io_to_err)?;
            for sd in &s.saddles {
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    fmt_f64(sd.location.re),
                    fmt_f64(sd.location.im),
                    sd.order,
                    fmt_f64(sd.re_phi),
                    fmt_f64(sd.im_phi)
                )
                .map_err(io_to_err)?;
            }
            if let Some(r) = s.region_label {
                writeln!(out, "# region {} {}", r, r.description()).map_err(io_to_err)?;
            }
            Ok(())
        }
        Command::Regions { fam, contour, grid, out: path } => {
            let fam = fam.family()?;
            let spec = contour.spec();
            spec.validate(&fam)?;
            let xs = linspace(grid.x_range[0], grid.x_range[1], grid.res[0]);
            let ys = linspace(grid.y_range[0], grid.y_range[1], grid.res[1]);
            let mut s = String::from("x,y,region,signature\n");
            for &y in &ys {
                for &x in &xs {
                    let p = OuterPoint { x, y };
                    let region = crate::saddle::classify_region(&fam, p).map(|r| r.to_string()).unwrap_or_else(|_| "-".into());
                    let sig = assemble_contour(&fam, p, &spec).map(|a| a.signature(&fam)).unwrap_or_else(|_| "?".into());
                    s.push_str(&format!("{},{},{},\"{}\"\n", fmt_f64(x), fmt_f64(y), region, sig));
                }
            }
            match path {
                Some(p) => crate::io::write_atomic(&p, s.as_bytes()),
                None => out.write_all(s.as_bytes()).map_err(io_to_err),
            }
        }
        Command::Canonical { func, args } => {
            let need = |n: usize| {
                if args.len() == n {
                    Ok(())
                } else {
                    Err(Error::InvalidParameter(format!("{func:?} takes {n} arguments, got {}", args.len())))
                }
            };
            let line = match func {
                CanonicalFn::Airy => {
                    need(2)?;
                    c(canonical::airy_ai(Complex64::new(args[0], args[1])))
                }
                CanonicalFn::AiryPrime => {
                    need(2)?;
                    c(canonical::airy_ai_prime(Complex64::new(args[0], args[1])))
                }
                CanonicalFn::AiryZero => {
                    need(1)?;
                    if args[0] < 0.0 || args[0].fract() != 0.0 {
                        return Err(Error::InvalidParameter("zero index must be a non-negative integer".into()));
                    }
                    fmt_f64(canonical::airy_zero(args[0] as usize))
                }
                CanonicalFn::Pearcey => {
                    need(2)?;
                    c(canonical::pearcey(args[0], args[1])?)
                }
                CanonicalFn::C4 => {
                    need(2)?;
                    c(canonical::cuspoid_c4(args[0], args[1])?)
                }
                CanonicalFn::C5 => {
                    need(3)?;
                    c(canonical::swallowtail_c5(args[0], args[1], args[2])?)
                }
                CanonicalFn::Fresnel => {
                    need(1)?;
                    c(canonical::fresnel_fr(args[0]))
                }
            };
            writeln!(out, "{line}").map_err(io_to_err)
        }
        Command::Asym { kind, kappa, k, x0, xstar, ystar } => {
            let (fam, p, approx, spec) = asym_case(kind, kappa, k, x0, xstar, ystar)?;
            let q = evaluate_A(&fam, &spec, &Prefactor::Unity, p, 1e-10)?.value.to_complex();
            writeln!(out, "X {}\nY {}", fmt_f64(p.X), fmt_f64(p.Y)).map_err(io_to_err)?;
            writeln!(out, "contour {} {}", spec.start_sector, spec.end_sector).map_err(io_to_err)?;
            writeln!(out, "quadrature {}", c(q)).map_err(io_to_err)?;
            writeln!(out, "asymptotic {}", c(approx)).map_err(io_to_err)?;
            writeln!(out, "rel_error {}", fmt_f64((approx - q).norm() / q.norm())).map_err(io_to_err)
        }
        Command::Bvp { part, grid, out: o, pekeris } => {
            if let Some(t) = pekeris {
                let v = bvp::pekeris_caret(Complex64::new(t[0], t[1]))?;
                return writeln!(out, "{}", c(v)).map_err(io_to_err);
            }
            let which = match part {
                PartArg::Total => FieldPart::Total,
                PartArg::Scattered => FieldPart::Scattered,
            };
            let fam = bvp::fock_leontovich_family();
            let side = match which {
                FieldPart::Total => PoleSide::Right,
                FieldPart::Scattered => PoleSide::Left,
            };
            let meta = GridMeta::new(&fam, &ContourSpec::with_pole(3, 2, side), "pekeris", 1.0, 1e-10);
            let xs = linspace(grid.x_range[0], grid.x_range[1], grid.res[0]);
            let ys = linspace(grid.y_range[0], grid.y_range[1], grid.res[1]);
            let g = FieldGrid::from_fn(xs, ys, meta, |x, y| {
                bvp::fock_leontovich(x, y, which).ok().map(LogComplex::from_complex)
            })?;
            emit_grid(&g, &o, cmdline, out)?;
            let xs = linspace(grid.x_range[0], grid.x_range[1], 13);
            let mut worst: f64 = 0.0;
            for &x in &xs {
                let v = bvp::fock_leontovich(x, -x * x / 4.0, FieldPart::Total)?;
                worst = worst.max(v.norm());
            }
            writeln!(out, "# boundary max|total| on Y=-X^2/4: {}", fmt_f64(worst)).map_err(io_to_err)
        }
        Command::Constants => {
            let s = stokes_constants()?;
            writeln!(out, "rho_star {}\nmu_star {}", fmt_f64(s.rho_star), fmt_f64(s.mu_star)).map_err(io_to_err)
        }
    }
}

fn first_masked(g: &FieldGrid) -> (usize, usize) {
    let idx = g.mask.iter().position(|&b| b).unwrap_or(0);
    (idx % g.nx(), idx / g.nx())
}

type AsymCase = (PhaseFamily, InnerPoint, Complex64, ContourSpec);

fn asym_case(kind: AsymKind, kappa: f64, k: f64, x0: f64, xs: f64, ys: f64) -> Result<AsymCase> {
    Ok(match kind {
        AsymKind::Parabola => {
            let fam = make_family(1, 1, kappa)?;
            let f = ExpansionFrame::parabola(&fam, k, x0, xs, ys)?;
            let p = asym::matched_point(&fam, &f, asym::parabola_y0(&fam, x0), k);
            (fam, p, asym::farfield_parabola(&fam, k, &f)?, ContourSpec::new(2, 1))
        }
        AsymKind::CuspUpper | AsymKind::CuspLower => {
            let br = if matches!(kind, AsymKind::CuspUpper) { CuspBranch::Upper } else { CuspBranch::Lower };
            let fam = make_family(2, 1, kappa)?;
            let f = ExpansionFrame::cusp(&fam, k, x0, xs, ys)?;
            let p = asym::matched_point(&fam, &f, asym::cusp_y0(&fam, x0, br), k);
            (fam, p, asym::farfield_cusp(&fam, k, &f, br)?, asym::coalescing_pair_contour(&fam, x0, br))
        }
        AsymKind::Cubic => {
            let fam = make_family(1, 2, kappa)?;
            let f = ExpansionFrame::cubic(&fam, k, x0, xs, ys)?;
            let p = asym::matched_point(&fam, &f, asym::cubic_y0(&fam, x0), k);
            (fam, p, asym::farfield_cubic(&fam, k, &f)?, asym::coalescing_pair_contour(&fam, x0, CuspBranch::Upper))
        }
        AsymKind::Searchlight => {
            let fam = make_family(1, 2, kappa)?;
            let p = asym::searchlight_point(k, x0, ys);
            (fam, p, asym::searchlight(&fam, k, x0, ys)?, ContourSpec::new(3, 1))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut o = Vec::new();
        let mut e = Vec::new();
        let mut argv = vec!["pwe-contour"];
        argv.extend_from_slice(args);
        let code = run(argv, &mut o, &mut e);
        (code, String::from_utf8(o).unwrap(), String::from_utf8(e).unwrap())
    }

    #[test]
    fn constants_prints_both() {
        let (code, out, _) = run_str(&["constants"]);
        assert_eq!(code, 0);
        assert!(out.contains("rho_star 6.1452036167653"));
        assert!(out.contains("mu_star 4.06"));
    }

    #[test]
    fn usage_error_exits_2() {
        let (code, _, err) = run_str(&["field", "--bogus"]);
        assert_eq!(code, 2);
        assert!(err.contains("Usage"));
        assert_eq!(run_str(&["saddles", "--l", "0", "--x", "1", "--y", "1"]).0, 2);
    }

    #[test]
    fn canonical_airy_at_origin() {
        let (code, out, _) = run_str(&["canonical", "airy", "0", "0"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("3.550280538878172"));
    }

    #[test]
    fn modal_grid_through_boundary_zero() {
        // (0, 0) lies on the boundary, where the field vanishes.
        let (code, out, err) = run_str(&["field", "--prefactor", "wg", "--mode", "1", "--kappa", "0.5", "--res", "3", "3", "--x-range", "-1", "1", "--y-range", "-1", "1"]);
        assert_eq!(code, 0, "{err}");
        assert!(!out.contains("nan"));
    }
}
