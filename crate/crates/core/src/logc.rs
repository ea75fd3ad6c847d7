//! Complex numbers stored as (log-magnitude, phase) so that values far
//! outside the f64 range can be accumulated without overflow.

use num_complex::Complex64;
use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogComplex {
    /// Natural log of the magnitude; `-inf` encodes zero.
    pub log_mag: f64,
    /// Argument in (-pi, pi].
    pub phase: f64,
}

fn wrap_phase(p: f64) -> f64 {
    let mut q = p.rem_euclid(2.0 * PI);
    if q > PI {
        q -= 2.0 * PI;
    }
    q
}

impl LogComplex {
    pub const ZERO: LogComplex = LogComplex {
        log_mag: f64::NEG_INFINITY,
        phase: 0.0,
    };
    pub const ONE: LogComplex = LogComplex {
        log_mag: 0.0,
        phase: 0.0,
    };

    pub fn new(log_mag: f64, phase: f64) -> Self {
        if log_mag == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        LogComplex {
            log_mag,
            phase: wrap_phase(phase),
        }
    }

    /// `exp(w)` for complex `w`.
    pub fn exp(w: Complex64) -> Self {
        Self::new(w.re, w.im)
    }

    pub fn from_complex(z: Complex64) -> Self {
        let a = z.norm();
        if a == 0.0 {
            Self::ZERO
        } else {
            LogComplex {
                log_mag: a.ln(),
                phase: z.arg(),
            }
        }
    }

    /// `z * exp(s)`.
    pub fn from_scaled(z: Complex64, s: f64) -> Self {
        let mut w = Self::from_complex(z);
        if !w.is_zero() {
            w.log_mag += s;
        }
        w
    }

    pub fn is_zero(&self) -> bool {
        self.log_mag == f64::NEG_INFINITY
    }

    pub fn is_finite(&self) -> bool {
        self.is_zero() || (self.log_mag.is_finite() && self.phase.is_finite())
    }

    /// Principal complex logarithm (`-inf` real part for zero).
    pub fn ln(&self) -> Complex64 {
        Complex64::new(self.log_mag, self.phase)
    }

    pub fn abs(&self) -> f64 {
        self.log_mag.exp()
    }

    /// Conversion to an ordinary complex number; overflows to infinity when
    /// the magnitude exceeds the f64 range.
    pub fn to_complex(&self) -> Complex64 {
        if self.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::from_polar(self.log_mag.exp(), self.phase)
    }

    pub fn conj(&self) -> Self {
        LogComplex {
            log_mag: self.log_mag,
            phase: wrap_phase(-self.phase),
        }
    }

    pub fn recip(&self) -> Self {
        LogComplex::new(-self.log_mag, -self.phase)
    }

    pub fn scale(&self, ds: f64) -> Self {
        if self.is_zero() {
            *self
        } else {
            LogComplex {
                log_mag: self.log_mag + ds,
                phase: self.phase,
            }
        }
    }

    pub fn mul_complex(&self, z: Complex64) -> Self {
        *self * LogComplex::from_complex(z)
    }

    /// Magnitude of `self - other` relative to the larger operand.
    pub fn rel_diff(&self, other: &LogComplex) -> f64 {
        let d = *self - *other;
        if d.is_zero() {
            return 0.0;
        }
        let m = self.log_mag.max(other.log_mag);
        (d.log_mag - m).exp()
    }
}

impl Add for LogComplex {
    type Output = LogComplex;
    fn add(self, rhs: LogComplex) -> LogComplex {
        let (a, b) = if self.log_mag >= rhs.log_mag {
            (self, rhs)
        } else {
            (rhs, self)
        };
        if b.is_zero() {
            return a;
        }
        let r = Complex64::from_polar((b.log_mag - a.log_mag).exp(), b.phase - a.phase);
        let s = Complex64::new(1.0, 0.0) + r;
        if s.norm() == 0.0 {
            return LogComplex::ZERO;
        }
        LogComplex::new(a.log_mag + s.norm().ln(), a.phase + s.arg())
    }
}

impl Neg for LogComplex {
    type Output = LogComplex;
    fn neg(self) -> LogComplex {
        if self.is_zero() {
            self
        } else {
            LogComplex::new(self.log_mag, self.phase + PI)
        }
    }
}

impl Sub for LogComplex {
    type Output = LogComplex;
    fn sub(self, rhs: LogComplex) -> LogComplex {
        self + (-rhs)
    }
}

impl Mul for LogComplex {
    type Output = LogComplex;
    fn mul(self, rhs: LogComplex) -> LogComplex {
        if self.is_zero() || rhs.is_zero() {
            return LogComplex::ZERO;
        }
        LogComplex::new(self.log_mag + rhs.log_mag, self.phase + rhs.phase)
    }
}

impl std::iter::Sum for LogComplex {
    fn sum<I: Iterator<Item = LogComplex>>(iter: I) -> LogComplex {
        iter.fold(LogComplex::ZERO, |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_ordinary_values() {
        for z in [
            Complex64::new(1.5, -2.0),
            Complex64::new(-3.0, 0.0),
            Complex64::new(0.0, 1e-200),
        ] {
            let w = LogComplex::from_complex(z).to_complex();
            assert!((w - z).norm() <= 1e-12 * z.norm());
        }
    }

    #[test]
    fn addition_matches_complex() {
        let a = Complex64::new(1.0, 2.0);
        let b = Complex64::new(-0.5, 0.25);
        let s = (LogComplex::from_complex(a) + LogComplex::from_complex(b)).to_complex();
        assert!((s - (a + b)).norm() < 1e-15);
        let d = (LogComplex::from_complex(a) - LogComplex::from_complex(a)).to_complex();
        assert!(d.norm() < 1e-15);
    }

    #[test]
    fn huge_values_do_not_overflow() {
        let a = LogComplex::new(1000.0, 0.3);
        let b = LogComplex::new(999.0, 0.3);
        let s = a + b;
        assert!(s.is_finite());
        assert!((s.log_mag - (1000.0 + (1.0 + (-1.0f64).exp()).ln())).abs() < 1e-12);
        assert!((s.phase - 0.3).abs() < 1e-14);
    }

    #[test]
    fn zero_is_additive_identity() {
        let a = LogComplex::from_complex(Complex64::new(0.2, -0.7));
        assert_eq!(a + LogComplex::ZERO, a);
        assert!((a * LogComplex::ZERO).is_zero());
    }
}
