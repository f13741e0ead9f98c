//! Error function and its complement.

use std::f64::consts::{FRAC_2_SQRT_PI as TWO_OVER_SQRT_PI, PI};

use super::gamma::gamma_q;

/// Below this |x| erf is summed from its positive-term series.
const SERIES_LIMIT: f64 = 2.0;
/// Above this x, erfc comes from the incomplete-gamma continued fraction.
const ERFC_CF_LIMIT: f64 = 1.5;

/// The error function erf(x) = (2/√π) ∫₀ˣ e^{−t²} dt.
pub fn erf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let ax = x.abs();
    let v = if ax <= SERIES_LIMIT {
        erf_series(ax)
    } else {
        1.0 - erfc_large(ax)
    };
    v.copysign(x)
}

/// The complementary error function erfc(x) = 1 − erf(x), accurate in
/// relative terms for large positive x.
pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.0 {
        2.0 - erfc(-x)
    } else if x < ERFC_CF_LIMIT {
        1.0 - erf_series(x)
    } else {
        erfc_large(x)
    }
}

/// erf(x) = (2/√π) e^{−x²} Σ 2ⁿ x^{2n+1} / (1·3·…·(2n+1)); all terms positive.
fn erf_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    let mut n = 0.0;
    loop {
        n += 1.0;
        term *= 2.0 * x2 / (2.0 * n + 1.0);
        sum += term;
        if term <= sum * 1e-17 {
            break;
        }
    }
    TWO_OVER_SQRT_PI * (-x2).exp() * sum
}

fn erfc_large(x: f64) -> f64 {
    if x > 27.3 {
        return 0.0;
    }
    // erfc(x) = Q(1/2, x²); the continued fraction branch applies for x² > 3/2.
    gamma_q(0.5, x * x).unwrap_or_else(|_| (-x * x).exp() / (x * PI.sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odd_and_limits() {
        assert_eq!(erf(0.0), 0.0);
        for &x in &[0.1, 0.9, 1.7, 2.3, 4.0] {
            assert_eq!(erf(-x), -erf(x));
        }
        assert_eq!(erf(40.0), 1.0);
        assert_eq!(erfc(40.0), 0.0);
        assert_eq!(erfc(-40.0), 2.0);
    }

    #[test]
    fn branches_meet_continuously() {
        for &x in &[SERIES_LIMIT, ERFC_CF_LIMIT] {
            let step = 2e-12 * TWO_OVER_SQRT_PI * (-x * x).exp();
            let jump = erf(x + 1e-12) - erf(x - 1e-12);
            assert!((jump - step).abs() < 1e-15, "x={x}");
            let jump = erfc(x - 1e-12) - erfc(x + 1e-12);
            assert!((jump - step).abs() < 1e-15, "x={x}");
        }
    }

    #[test]
    fn complement() {
        for &x in &[-2.0, -0.3, 0.0, 0.4, 1.2, 1.9, 3.1] {
            assert!((erf(x) + erfc(x) - 1.0).abs() < 2e-16 * 4.0);
        }
    }
}
