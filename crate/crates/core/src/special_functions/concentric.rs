//! The concentric annulus `b <= |x| <= 1`: its first Dirichlet eigenvalue and radial mode,
//! and the two-sided bounds it gives for the eccentric annulus.

use core::f64::consts::PI;

use super::bessel::{bessel01, eval};
use crate::error::{Error, Result};
use crate::DISC_EIGENVALUE;

/// Relative bracket width at which [`mu_first`] stops bisecting by default.
pub const DEFAULT_ROOT_TOL: f64 = 1e-10;

const MAX_BISECTIONS: usize = 400;

fn check_radius(b: f64) -> Result<()> {
    if b.is_finite() && b > 0.0 && b < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain("b must lie in (0,1)"))
    }
}

/// `J0(√mu b) Y0(√mu) − J0(√mu) Y0(√mu b)`.
///
/// Its zeros in `mu` are the radially symmetric Dirichlet eigenvalues of `b <= |x| <= 1`.
pub fn cross_product(mu: f64, b: f64) -> Result<f64> {
    check_radius(b)?;
    if !(mu.is_finite() && mu > 0.0) {
        return Err(Error::Domain("mu must be positive and finite"));
    }
    Ok(cross_product_unchecked(mu, b))
}

fn cross_product_unchecked(mu: f64, b: f64) -> f64 {
    let s = libm::sqrt(mu);
    let inner = eval(s * b);
    let outer = eval(s);
    inner.j0 * outer.y0 - outer.j0 * inner.y0
}

/// Smallest positive root of [`cross_product`] in `mu`, i.e. the first Dirichlet eigenvalue
/// of the concentric annulus with inner radius `b`.
///
/// Scans `√mu` upward in steps of `min(0.1, (1 − b)/10)` until the first sign change, then
/// bisects in `mu` until the bracket's relative width is at most `tol`.
pub fn mu_first(b: f64, tol: f64) -> Result<f64> {
    check_radius(b)?;
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::Domain("tol must be positive"));
    }

    let step = f64::min(0.1, (1.0 - b) / 10.0);
    let ceiling = 10.0 * PI / (1.0 - b);

    let mut k = 1usize;
    let mut s_lo = step;
    let mut f_lo = cross_product_unchecked(s_lo * s_lo, b);
    let (mut lo, mut hi, mut f_lo_mu) = loop {
        if f_lo == 0.0 {
            return Ok(s_lo * s_lo);
        }
        k += 1;
        let s_hi = k as f64 * step;
        if s_hi > ceiling {
            return Err(Error::NoBracket { b });
        }
        let f_hi = cross_product_unchecked(s_hi * s_hi, b);
        if f_hi == 0.0 {
            return Ok(s_hi * s_hi);
        }
        if (f_hi < 0.0) != (f_lo < 0.0) {
            break (s_lo * s_lo, s_hi * s_hi, f_lo);
        }
        s_lo = s_hi;
        f_lo = f_hi;
    };

    for _ in 0..MAX_BISECTIONS {
        if hi - lo <= tol * lo {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = cross_product_unchecked(mid, b);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if (f_mid < 0.0) == (f_lo_mu < 0.0) {
            lo = mid;
            f_lo_mu = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// First radial eigenfunction `φ(r) = c1 J0(√mu r) + c2 Y0(√mu r)` of the concentric annulus.
///
/// The coefficients are fixed as `c1 = Y0(√mu)`, `c2 = −J0(√mu)`, so `φ(1) = 0` exactly and
/// `φ(b) = 0` to root-solver accuracy. The overall scale is arbitrary; see
/// [`RadialMode::norm_squared`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialMode {
    pub mu: f64,
    pub b: f64,
    pub c1: f64,
    pub c2: f64,
}

impl RadialMode {
    pub fn new(b: f64, tol: f64) -> Result<Self> {
        let mu = mu_first(b, tol)?;
        let outer = bessel01(libm::sqrt(mu))?;
        Ok(RadialMode {
            mu,
            b,
            c1: outer.y0,
            c2: -outer.j0,
        })
    }

    fn wavenumber(&self) -> f64 {
        libm::sqrt(self.mu)
    }

    /// `φ(r)` for `r > 0`.
    pub fn value(&self, r: f64) -> f64 {
        let v = eval(self.wavenumber() * r);
        self.c1 * v.j0 + self.c2 * v.y0
    }

    /// `φ'(r) = −√mu (c1 J1 + c2 Y1)`.
    pub fn derivative(&self, r: f64) -> f64 {
        let k = self.wavenumber();
        let v = eval(k * r);
        -k * (self.c1 * v.j1 + self.c2 * v.y1)
    }

    /// `∫ φ² dx` over the annulus, from the Lommel integral
    /// `∫ r Z0(kr)² dr = r²/2 (Z0² + Z1²)` with `Z0` vanishing at both ends.
    pub fn norm_squared(&self) -> f64 {
        let k = self.wavenumber();
        let z1 = |r: f64| {
            let v = eval(k * r);
            self.c1 * v.j1 + self.c2 * v.y1
        };
        let outer = z1(1.0);
        let inner = z1(self.b);
        PI * (outer * outer - self.b * self.b * inner * inner)
    }

    /// `u_N²` of the L²-normalised mode at radius `r` (`r = b` or `r = 1`).
    pub fn normalized_flux_sq(&self, r: f64) -> f64 {
        let d = self.derivative(r);
        d * d / self.norm_squared()
    }

    /// `∫_{∂D} (x·n) u_N² ds` for the L²-normalised mode, with `n` the outward normal of the
    /// annulus.
    pub fn rellich_integral(&self) -> f64 {
        let b = self.b;
        2.0 * PI * (self.normalized_flux_sq(1.0) - b * b * self.normalized_flux_sq(b))
    }
}

/// Which estimate supplied the lower bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LowerBound {
    /// `mu(a − h)`: the eccentric annulus lies inside the concentric one with hole `a − h`.
    Annulus,
    /// The unit-disc eigenvalue; used when `h >= a` and no concentric hole fits inside.
    Disc,
}

/// Two-sided bounds on the first eigenvalue of the eccentric annulus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub lower: f64,
    pub upper: f64,
    pub lower_kind: LowerBound,
}

impl Bounds {
    /// Strict containment `lower < lambda < upper`. At `h = 0` both sides equal `mu(a)`.
    pub fn contains(&self, lambda: f64) -> bool {
        self.lower < lambda && lambda < self.upper
    }
}

/// Bounds from domain monotonicity:
/// `D₁ \ D(a+h) ⊂ D_h ⊂ D₁ \ D(a−h)` gives `mu(a − h) <= λ(h) <= mu(a + h)`.
///
/// For `h >= a` the inner comparison disc vanishes and the unit-disc eigenvalue is used as the
/// lower bound instead.
pub fn eigenvalue_bounds(a: f64, h: f64, tol: f64) -> Result<Bounds> {
    if !(a.is_finite() && h.is_finite() && a > 0.0 && a < 1.0 && h >= 0.0 && a + h < 1.0) {
        return Err(Error::Geometry { a, h });
    }
    let upper = mu_first(a + h, tol)?;
    if h == 0.0 {
        return Ok(Bounds {
            lower: upper,
            upper,
            lower_kind: LowerBound::Annulus,
        });
    }
    if h < a {
        Ok(Bounds {
            lower: mu_first(a - h, tol)?,
            upper,
            lower_kind: LowerBound::Annulus,
        })
    } else {
        Ok(Bounds {
            lower: DISC_EIGENVALUE,
            upper,
            lower_kind: LowerBound::Disc,
        })
    }
}
