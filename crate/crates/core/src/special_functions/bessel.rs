//! Bessel functions of the first and second kind, orders 0 and 1, for real positive argument.
//!
//! Three regimes, each accurate to a few ulps of the function scale:
//!
//! - `x < 8`: ascending power series (the logarithmic series for `Y0`, `Y1`);
//! - `8 <= x < 30`: Miller backward recurrence for `J_n`, normalised by
//!   `J0 + 2 Σ J_2k = 1`, with `Y0`, `Y1` from their Neumann series in `J_n`;
//! - `x >= 30`: Hankel asymptotic expansion.

use core::f64::consts::{FRAC_1_PI, FRAC_1_SQRT_2, FRAC_2_PI};

use crate::error::{Error, Result};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

pub(crate) const SERIES_LIMIT: f64 = 8.0;
pub(crate) const ASYMPTOTIC_LIMIT: f64 = 30.0;

const RESCALE_THRESHOLD: f64 = 1e200;
const RESCALE_FACTOR: f64 = 1e-200;

/// `J0, J1, Y0, Y1` at a single argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bessel01 {
    pub j0: f64,
    pub j1: f64,
    pub y0: f64,
    pub y1: f64,
}

/// All four functions at `x > 0`.
pub fn bessel01(x: f64) -> Result<Bessel01> {
    if !x.is_finite() {
        return Err(Error::Domain("Bessel argument must be finite"));
    }
    if x <= 0.0 {
        return Err(Error::Domain(
            "Y0 and Y1 need a positive argument (logarithmic singularity at 0)",
        ));
    }
    Ok(eval(x))
}

/// `J0(x)` for finite `x >= 0`.
pub fn bessel_j0(x: f64) -> Result<f64> {
    check_nonneg(x)?;
    if x == 0.0 {
        return Ok(1.0);
    }
    Ok(eval(x).j0)
}

/// `J1(x)` for finite `x >= 0`.
pub fn bessel_j1(x: f64) -> Result<f64> {
    check_nonneg(x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    Ok(eval(x).j1)
}

/// `Y0(x)` for finite `x > 0`.
pub fn bessel_y0(x: f64) -> Result<f64> {
    bessel01(x).map(|b| b.y0)
}

/// `Y1(x)` for finite `x > 0`.
pub fn bessel_y1(x: f64) -> Result<f64> {
    bessel01(x).map(|b| b.y1)
}

fn check_nonneg(x: f64) -> Result<()> {
    if !x.is_finite() {
        Err(Error::Domain("Bessel argument must be finite"))
    } else if x < 0.0 {
        Err(Error::Domain("Bessel argument must be non-negative"))
    } else {
        Ok(())
    }
}

pub(crate) fn eval(x: f64) -> Bessel01 {
    if x < SERIES_LIMIT {
        series(x)
    } else if x < ASYMPTOTIC_LIMIT {
        miller(x)
    } else {
        hankel(x)
    }
}

pub(crate) fn series(x: f64) -> Bessel01 {
    let half = 0.5 * x;
    let q = half * half;

    // term0 = (-q)^k / (k!)^2, term1 = (-q)^k / (k! (k+1)!)
    let mut term0 = 1.0;
    let mut term1 = 1.0;
    let mut j0 = 1.0;
    let mut j1_sum = 1.0;
    let mut harmonic = 0.0;
    let mut y0_sum = 0.0;
    // psi(k+1) + psi(k+2) at k = 0
    let mut y1_sum = 1.0 - 2.0 * EULER_GAMMA;

    for k in 1..200 {
        let kf = k as f64;
        harmonic += 1.0 / kf;
        term0 *= -q / (kf * kf);
        term1 *= -q / (kf * (kf + 1.0));
        j0 += term0;
        j1_sum += term1;
        y0_sum -= harmonic * term0;
        let psi_pair = 2.0 * harmonic + 1.0 / (kf + 1.0) - 2.0 * EULER_GAMMA;
        y1_sum += psi_pair * term1;
        if kf > q && (harmonic + 1.0) * term0.abs() < 1e-18 {
            break;
        }
    }

    let j1 = half * j1_sum;
    let log_half = libm::log(half);
    let y0 = FRAC_2_PI * ((log_half + EULER_GAMMA) * j0 + y0_sum);
    let y1 = -FRAC_2_PI / x + FRAC_2_PI * log_half * j1 - FRAC_1_PI * half * y1_sum;
    Bessel01 { j0, j1, y0, y1 }
}

pub(crate) fn miller(x: f64) -> Bessel01 {
    let start = x + 15.0 * libm::cbrt(x) + 20.0;
    let mut n = 2 * (libm::ceil(start) as usize).div_ceil(2);

    // f_n, f_{n+1}, f_{n+2} of the unnormalised backward recurrence
    let mut f = 1e-30;
    let mut f_up = 0.0;
    let mut f_up2 = 0.0;
    let mut norm = 0.0;
    // Σ (-1)^k f_2k / k  and  Σ (-1)^k (f_{2k-1} - f_{2k+1}) / k
    let mut neumann0 = 0.0;
    let mut neumann1 = 0.0;
    let mut f1 = 0.0;

    loop {
        if n == 0 {
            norm += f;
            break;
        }
        if n.is_multiple_of(2) {
            let k = n / 2;
            norm += 2.0 * f;
            let t = f / k as f64;
            neumann0 += if k.is_multiple_of(2) { t } else { -t };
        } else {
            let k = n.div_ceil(2);
            let t = (f - f_up2) / k as f64;
            neumann1 += if k.is_multiple_of(2) { t } else { -t };
            if n == 1 {
                f1 = f;
            }
        }

        let mut f_down = 2.0 * n as f64 / x * f - f_up;
        if f_down.abs() > RESCALE_THRESHOLD {
            f_down *= RESCALE_FACTOR;
            f *= RESCALE_FACTOR;
            f_up *= RESCALE_FACTOR;
            norm *= RESCALE_FACTOR;
            neumann0 *= RESCALE_FACTOR;
            neumann1 *= RESCALE_FACTOR;
            f1 *= RESCALE_FACTOR;
        }
        f_up2 = f_up;
        f_up = f;
        f = f_down;
        n -= 1;
    }

    let j0 = f / norm;
    let j1 = f1 / norm;
    let log_term = libm::log(0.5 * x) + EULER_GAMMA;
    let y0 = FRAC_2_PI * (log_term * j0 - 2.0 * neumann0 / norm);
    let y1 = FRAC_2_PI * (-j0 / x + log_term * j1 + neumann1 / norm);
    Bessel01 { j0, j1, y0, y1 }
}

/// `(P, Q)` of the Hankel expansion for order `nu`.
fn hankel_pq(nu: f64, x: f64) -> (f64, f64) {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut previous = f64::INFINITY;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        term *= (mu - odd * odd) / (k as f64 * 8.0 * x);
        let size = term.abs();
        if size > previous {
            break;
        }
        let contribution = if (k / 2) % 2 == 0 { term } else { -term };
        if k % 2 == 0 {
            p += contribution;
        } else {
            q += contribution;
        }
        if size < 1e-18 {
            break;
        }
        previous = size;
    }
    (p, q)
}

pub(crate) fn hankel(x: f64) -> Bessel01 {
    let (s, c) = libm::sincos(x);
    let amplitude = libm::sqrt(FRAC_2_PI / x);

    // chi0 = x - pi/4, chi1 = x - 3pi/4
    let cos0 = FRAC_1_SQRT_2 * (c + s);
    let sin0 = FRAC_1_SQRT_2 * (s - c);
    let cos1 = FRAC_1_SQRT_2 * (s - c);
    let sin1 = -FRAC_1_SQRT_2 * (s + c);

    let (p0, q0) = hankel_pq(0.0, x);
    let (p1, q1) = hankel_pq(1.0, x);
    Bessel01 {
        j0: amplitude * (p0 * cos0 - q0 * sin0),
        y0: amplitude * (p0 * sin0 + q0 * cos0),
        j1: amplitude * (p1 * cos1 - q1 * sin1),
        y1: amplitude * (p1 * sin1 + q1 * cos1),
    }
}
