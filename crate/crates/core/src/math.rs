//! Scalar helpers shared by the closed-form maps.
//!
//! The exponential maps divide by the vertical covector component, which
//! produces 0/0 expressions as it vanishes. Each helper below is the
//! relevant quotient with a Taylor branch below `SERIES_THRESHOLD` so the
//! maps stay continuous across the singular chart locus.

/// Branch threshold for the series forms of the τ-quotients.
pub const SERIES_THRESHOLD: f64 = 1e-4;

pub fn sinh(x: f64) -> f64 {
    libm::sinh(x)
}

pub fn cosh(x: f64) -> f64 {
    libm::cosh(x)
}

pub fn sin(x: f64) -> f64 {
    libm::sin(x)
}

pub fn cos(x: f64) -> f64 {
    libm::cos(x)
}

pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

pub fn hypot(x: f64, y: f64) -> f64 {
    libm::hypot(x, y)
}

pub fn asinh(x: f64) -> f64 {
    libm::asinh(x)
}

pub fn atan2(y: f64, x: f64) -> f64 {
    libm::atan2(y, x)
}

pub fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

/// sinh(τ)/τ, continuous at τ = 0.
pub fn sinhc(tau: f64) -> f64 {
    if abs(tau) < SERIES_THRESHOLD {
        let t2 = tau * tau;
        1.0 + t2 / 6.0 + t2 * t2 / 120.0
    } else {
        sinh(tau) / tau
    }
}

/// (cosh(τ) − 1)/τ², continuous at τ = 0.
pub fn coshm(tau: f64) -> f64 {
    if abs(tau) < SERIES_THRESHOLD {
        let t2 = tau * tau;
        0.5 + t2 / 24.0 + t2 * t2 / 720.0
    } else {
        (cosh(tau) - 1.0) / (tau * tau)
    }
}

/// (sinh(τ) − τ)/τ², continuous (and odd) at τ = 0.
pub fn sinhm(tau: f64) -> f64 {
    if abs(tau) < SERIES_THRESHOLD {
        let t2 = tau * tau;
        tau / 6.0 * (1.0 + t2 / 20.0 + t2 * t2 / 840.0)
    } else {
        (sinh(tau) - tau) / (tau * tau)
    }
}

/// sin(τ)/τ, continuous at τ = 0.
pub fn sinc(tau: f64) -> f64 {
    if abs(tau) < SERIES_THRESHOLD {
        let t2 = tau * tau;
        1.0 - t2 / 6.0 + t2 * t2 / 120.0
    } else {
        sin(tau) / tau
    }
}

/// (1 − cos(τ))/τ², continuous at τ = 0.
pub fn cosm(tau: f64) -> f64 {
    if abs(tau) < SERIES_THRESHOLD {
        let t2 = tau * tau;
        0.5 - t2 / 24.0 + t2 * t2 / 720.0
    } else {
        (1.0 - cos(tau)) / (tau * tau)
    }
}

/// (τ − sin(τ))/τ², continuous (and odd) at τ = 0.
pub fn sinm(tau: f64) -> f64 {
    if abs(tau) < SERIES_THRESHOLD {
        let t2 = tau * tau;
        tau / 6.0 * (1.0 - t2 / 20.0 + t2 * t2 / 840.0)
    } else {
        (tau - sin(tau)) / (tau * tau)
    }
}

/// (sinh(τ)/τ − cosh(τ))/τ², continuous at τ = 0. Used by the chart
/// differential of the family-one exponential map.
pub fn hyp_q1(tau: f64) -> f64 {
    if abs(tau) < SERIES_THRESHOLD {
        let t2 = tau * tau;
        -(1.0 / 3.0 + t2 / 30.0 + t2 * t2 / 840.0)
    } else {
        (sinh(tau) / tau - cosh(tau)) / (tau * tau)
    }
}

/// (τ sinh(τ) − cosh(τ) + 1)/τ², continuous at τ = 0.
pub fn hyp_q2(tau: f64) -> f64 {
    if abs(tau) < SERIES_THRESHOLD {
        let t2 = tau * tau;
        0.5 + t2 / 8.0 + t2 * t2 / 144.0
    } else {
        (tau * sinh(tau) - cosh(tau) + 1.0) / (tau * tau)
    }
}

/// (cosh(τ) − 1)/(2τ²) − (sinh(τ) − τ)/τ³, continuous at τ = 0.
pub fn hyp_q3(tau: f64) -> f64 {
    if abs(tau) < SERIES_THRESHOLD {
        let t2 = tau * tau;
        1.0 / 12.0 + t2 / 80.0 + t2 * t2 / 2016.0
    } else {
        coshm(tau) / 2.0 - (sinh(tau) - tau) / (tau * tau * tau)
    }
}

/// arcosh(1 + d) for d ≥ 0, stable near d = 0.
/// Returns the pair (τ, sinh τ).
pub fn acosh1p(d: f64) -> (f64, f64) {
    debug_assert!(d >= 0.0);
    let s = sqrt(d * (d + 2.0));
    (libm::log1p(d + s), s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_branches_are_continuous() {
        // compare each helper just above and just below the threshold
        let lo = SERIES_THRESHOLD * 0.999;
        let hi = SERIES_THRESHOLD * 1.001;
        // the direct branches carry ~1e-8 cancellation noise right at the
        // seam (worst case: (cosh τ − 1)/τ² loses half the mantissa), so
        // the continuity bound is 1e-7, not machine precision
        for f in [sinhc, coshm, sinhm, sinc, cosm, sinm, hyp_q1, hyp_q2, hyp_q3] {
            let (a, b) = (f(lo), f(hi));
            assert!(abs(a - b) <= 1e-7 * (1.0 + abs(a)), "{a} vs {b}");
            // odd/even symmetry must also hold across zero
            let (an, bn) = (f(-lo), f(-hi));
            assert!(abs(an - bn) <= 1e-7 * (1.0 + abs(an)));
        }
    }

    #[test]
    fn acosh1p_matches_reference() {
        for d in [0.0, 1e-12, 1e-6, 0.5, 3.0, 1e8] {
            let (tau, s) = acosh1p(d);
            assert!(abs(cosh(tau) - (1.0 + d)) <= 1e-9 * (1.0 + d));
            assert!(abs(sinh(tau) - s) <= 1e-9 * (1.0 + s));
        }
    }
}
