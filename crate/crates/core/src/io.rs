//! CSV and binary PGM writers for field grids. Every file is written to a
//! temporary sibling and renamed into place.

use crate::error::{Error, Result};
use crate::family::PoleSide;
use crate::grid::{FieldGrid, GridMeta, Layer};
use crate::logc::LogComplex;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

pub const CSV_HEADER: &str = "X,Y,log_mag,phase,abs,re_phys";

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        context: path.display().to_string(),
        source,
    }
}

/// Writes `bytes` to `path` via a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().ok_or_else(|| io_err(path, std::io::Error::new(std::io::ErrorKind::InvalidInput, "not a file path")))?;
    let mut tmp = PathBuf::from(dir);
    tmp.push(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    let res = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if let Err(e) = res {
        let _ = fs::remove_file(&tmp);
        return Err(io_err(path, e));
    }
    Ok(())
}

/// 17 significant digits, so values round-trip exactly.
pub fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.16e}")
    }
}

fn pole_name(p: PoleSide) -> &'static str {
    match p {
        PoleSide::None => "none",
        PoleSide::Left => "left",
        PoleSide::Right => "right",
    }
}

pub fn csv_string(g: &FieldGrid, extra: &[String]) -> String {
    let m = &g.meta;
    let mut s = String::new();
    s.push_str(&format!("# family l={} m={} kappa={}\n", m.l, m.m, fmt_f64(m.kappa)));
    s.push_str(&format!("# contour {} {} pole={}\n", m.contour.0, m.contour.1, pole_name(m.pole_side)));
    s.push_str(&format!("# prefactor {}\n", m.prefactor));
    s.push_str(&format!("# k={} tol={}\n", fmt_f64(m.k), fmt_f64(m.tol)));
    s.push_str(&format!("# grid nx={} ny={}\n", g.nx(), g.ny()));
    for line in extra {
        s.push_str(&format!("# {line}\n"));
    }
    s.push_str(CSV_HEADER);
    s.push('\n');
    for j in 0..g.ny() {
        for i in 0..g.nx() {
            let cols = [
                g.x_axis[i],
                g.y_axis[j],
                g.layer(Layer::LogMag, i, j),
                g.layer(Layer::Phase, i, j),
                g.layer(Layer::Abs, i, j),
                g.layer(Layer::RePhys, i, j),
            ];
            let row: Vec<String> = cols.iter().map(|&v| fmt_f64(v)).collect();
            s.push_str(&row.join(","));
            s.push('\n');
        }
    }
    s
}

/// `extra` lines go into the `#` header (e.g. the command line).
pub fn write_csv(g: &FieldGrid, path: &Path, extra: &[String]) -> Result<()> {
    write_atomic(path, csv_string(g, extra).as_bytes())
}

fn parse_err(path: &Path, what: &str) -> Error {
    io_err(path, std::io::Error::new(std::io::ErrorKind::InvalidData, format!("malformed CSV ({what})")))
}

fn kv<'a>(tok: &'a str, key: &str) -> Option<&'a str> {
    tok.strip_prefix(key)?.strip_prefix('=')
}

/// Reads a grid written by [`write_csv`].
pub fn read_csv(path: &Path) -> Result<FieldGrid> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let mut meta = GridMeta {
        l: 0,
        m: 0,
        kappa: 0.0,
        contour: (0, 0),
        pole_side: PoleSide::None,
        prefactor: String::new(),
        k: 0.0,
        tol: 0.0,
    };
    let (mut nx, mut ny) = (0usize, 0usize);
    let mut lines = text.lines();
    let mut saw_header = false;
    for line in lines.by_ref() {
        if let Some(c) = line.strip_prefix("# ") {
            let toks: Vec<&str> = c.split_whitespace().collect();
            match toks.first().copied() {
                Some("family") if toks.len() == 4 => {
                    meta.l = kv(toks[1], "l").and_then(|v| v.parse().ok()).ok_or_else(|| parse_err(path, "l"))?;
                    meta.m = kv(toks[2], "m").and_then(|v| v.parse().ok()).ok_or_else(|| parse_err(path, "m"))?;
                    meta.kappa = kv(toks[3], "kappa").and_then(|v| v.parse().ok()).ok_or_else(|| parse_err(path, "kappa"))?;
                }
                Some("contour") if toks.len() == 4 => {
                    let i = toks[1].parse().map_err(|_| parse_err(path, "contour"))?;
                    let j = toks[2].parse().map_err(|_| parse_err(path, "contour"))?;
                    meta.contour = (i, j);
                    meta.pole_side = match kv(toks[3], "pole") {
                        Some("left") => PoleSide::Left,
                        Some("right") => PoleSide::Right,
                        _ => PoleSide::None,
                    };
                }
                Some("prefactor") => meta.prefactor = toks[1..].join(" "),
                Some(t) if t.starts_with("k=") && toks.len() == 2 => {
                    meta.k = kv(toks[0], "k").and_then(|v| v.parse().ok()).ok_or_else(|| parse_err(path, "k"))?;
                    meta.tol = kv(toks[1], "tol").and_then(|v| v.parse().ok()).ok_or_else(|| parse_err(path, "tol"))?;
                }
                Some("grid") if toks.len() == 3 => {
                    nx = kv(toks[1], "nx").and_then(|v| v.parse().ok()).ok_or_else(|| parse_err(path, "nx"))?;
                    ny = kv(toks[2], "ny").and_then(|v| v.parse().ok()).ok_or_else(|| parse_err(path, "ny"))?;
                }
                _ => {}
            }
            continue;
        }
        if line == CSV_HEADER {
            saw_header = true;
            break;
        }
        return Err(parse_err(path, "missing header"));
    }
    if !saw_header || nx == 0 || ny == 0 {
        return Err(parse_err(path, "missing header"));
    }
    let mut xs = vec![0.0; nx];
    let mut ys = vec![0.0; ny];
    let mut values = Vec::with_capacity(nx * ny);
    let mut mask = Vec::with_capacity(nx * ny);
    for (idx, line) in lines.enumerate() {
        let v: Vec<f64> = line
            .split(',')
            .map(|t| t.parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| parse_err(path, "number"))?;
        if v.len() != 6 || idx >= nx * ny {
            return Err(parse_err(path, "row"));
        }
        xs[idx % nx] = v[0];
        ys[idx / nx] = v[1];
        if v[2].is_nan() {
            values.push(LogComplex::ZERO);
            mask.push(true);
        } else {
            values.push(LogComplex { log_mag: v[2], phase: v[3] });
            mask.push(false);
        }
    }
    if values.len() != nx * ny {
        return Err(parse_err(path, "row count"));
    }
    let g = FieldGrid {
        x_axis: xs,
        y_axis: ys,
        values,
        mask,
        meta,
    };
    g.validate()?;
    Ok(g)
}

/// Binary P5, 8-bit, min-max normalised over unmasked cells; masked cells
/// are 0. The top image row is the largest `Y`.
pub fn pgm_bytes(g: &FieldGrid, layer: Layer) -> Vec<u8> {
    let (nx, ny) = (g.nx(), g.ny());
    let vals: Vec<f64> = (0..ny)
        .rev()
        .flat_map(|j| (0..nx).map(move |i| (i, j)))
        .map(|(i, j)| g.layer(layer, i, j))
        .collect();
    let (lo, hi) = vals
        .iter()
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let mut out = format!("P5\n{nx} {ny}\n255\n").into_bytes();
    out.extend(vals.iter().map(|&v| {
        if !v.is_finite() {
            0
        } else if hi > lo {
            ((v - lo) / (hi - lo) * 255.0).round() as u8
        } else {
            128
        }
    }));
    out
}

pub fn write_pgm(g: &FieldGrid, layer: Layer, path: &Path) -> Result<()> {
    write_atomic(path, &pgm_bytes(g, layer))
}
