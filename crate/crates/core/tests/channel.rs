#![allow(clippy::excessive_precision)]

use fso_relay::audit::{
    gauss_multiplication_audit, printed_snr_cdf, printed_snr_pdf, PrintedCdfTop,
};
use fso_relay::channel::{
    combined_pdf, k_pdf, pointing_geometry, snr_cdf, HopChannel, HopParams, Method, PointingParams,
};
use fso_relay::quad::{integrate_half_line, integrate_points, QuadOptions};
use proptest::prelude::*;

/// A0 of the geometry r = 0.1, ω_z = 1.
const A0: f64 = 0.019792086945219322638;
const ALPHAS: [f64; 3] = [1.0, 2.0, 4.0];
const GS: [f64; 2] = [1.2, 4.0];

fn hop(alpha: f64, g: f64, mu: f64) -> HopParams {
    HopParams::new(alpha, mu, PointingParams::new(g, A0).unwrap()).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn opts() -> QuadOptions {
    QuadOptions::default().with_rel_tol(1e-10)
}

#[test]
fn gain_density_normalised_with_expected_mean() {
    for alpha in ALPHAS {
        for g in GS {
            let ch = HopChannel::new(&hop(alpha, g, 1.0)).unwrap();
            let mass = integrate_half_line(|h| ch.gain_pdf(h), A0, &[A0], opts()).unwrap();
            let mean = integrate_half_line(|h| Ok(h * ch.gain_pdf(h)?), A0, &[A0], opts()).unwrap();
            let want = A0 * g * g / (g * g + 1.0);
            assert!(
                (mass.value - 1.0).abs() < 1e-6,
                "a={alpha} g={g}: mass {}",
                mass.value
            );
            assert!(
                rel(mean.value, want) < 1e-6,
                "a={alpha} g={g}: mean {}",
                mean.value
            );
        }
    }
}

/// f_h(h) = ∫_0^1 f_K(h / t(v)) / t(v) dv with t(v) = A0 v^{1/g²}.
fn mixture_density(h: f64, alpha: f64, g: f64) -> f64 {
    let inv_g2 = 1.0 / (g * g);
    let body = |v: f64| {
        let t = A0 * v.powf(inv_g2);
        if t == 0.0 {
            return Ok(0.0);
        }
        Ok(k_pdf(h / t, alpha)? / t)
    };
    integrate_points(body, &[0.0, 1e-6, 1e-3, 0.1, 1.0], opts())
        .unwrap()
        .value
}

#[test]
fn gain_density_matches_mixture_integral() {
    for alpha in ALPHAS {
        for g in GS {
            for k in 0..20 {
                let h = A0 * 10f64.powf(-3.0 + 4.0 * k as f64 / 19.0);
                let closed = combined_pdf(h, alpha, g, A0).unwrap();
                let brute = mixture_density(h, alpha, g);
                assert!(
                    rel(closed, brute) < 1e-6,
                    "a={alpha} g={g} h={h}: {closed} vs {brute}"
                );
            }
        }
    }
}

#[test]
fn snr_density_is_the_change_of_variables() {
    // P(γ ≤ t) = P(h ≤ √(t/μ)); the density carries the Jacobian 1/(2√(μγ)).
    let mu = 1e4;
    let ch = HopChannel::new(&hop(2.0, 1.2, mu)).unwrap();
    for t in [1e-3, 0.1, 1.0, 3.0, 10.0] {
        let y = (t / mu).sqrt();
        let by_gain = integrate_points(|h| ch.gain_pdf(h), &[0.0, y], opts())
            .unwrap()
            .value;
        let by_snr = ch.snr_mass(t * 1e-30, t).unwrap();
        let closed = ch.snr_cdf(t, Method::ClosedForm).unwrap();
        assert!(rel(by_snr, by_gain) < 1e-8, "t={t}: {by_snr} vs {by_gain}");
        assert!(rel(closed, by_gain) < 1e-8, "t={t}: {closed} vs {by_gain}");
    }
    // Derivative of the closed-form CDF.
    for t in [0.05, 0.5, 5.0] {
        let d = 1e-5 * t;
        let slope = (ch.snr_cdf(t + d, Method::ClosedForm).unwrap()
            - ch.snr_cdf(t - d, Method::ClosedForm).unwrap())
            / (2.0 * d);
        let pdf = ch.snr_pdf(t).unwrap();
        assert!(rel(slope, pdf) < 1e-6, "t={t}: {slope} vs {pdf}");
    }
}

#[test]
fn printed_snr_density_is_twice_the_true_one() {
    let h = hop(2.0, 4.0, 1e3);
    for t in [0.01, 0.3, 2.0] {
        let r = printed_snr_pdf(t, &h).unwrap() / HopChannel::new(&h).unwrap().snr_pdf(t).unwrap();
        assert!((r - 2.0).abs() < 1e-9, "t={t}: ratio {r}");
    }
}

#[test]
fn cdf_closed_form_agrees_with_quadrature() {
    for alpha in ALPHAS {
        for g in GS {
            for mu in [10.0, 1e3, 1e5] {
                let ch = HopChannel::new(&hop(alpha, g, mu)).unwrap();
                for t in [1e-4, 0.1, 1.0, 10.0, 100.0] {
                    let c = ch.snr_cdf(t, Method::ClosedForm).unwrap();
                    let q = ch.snr_cdf(t, Method::Quadrature).unwrap();
                    assert!(
                        rel(c, q) < 1e-9,
                        "a={alpha} g={g} mu={mu} t={t}: {c} vs {q}"
                    );
                }
            }
        }
    }
}

#[test]
fn cdf_matches_k_mixture_reference() {
    // F_h(y) = E[F_K(y / h_p)] with the Bessel-form K CDF, from mpmath.
    let cases = [
        (2.0, 1.2, 1e3, 10.0, 0.99244093100053187),
        (2.0, 4.0, 1e3, 1.0, 0.82612797864539918),
        (4.0, 4.0, 1e3, 1.0, 0.82324218288196442),
        (1.0, 1.2, 1e5, 0.5, 0.38532333545408004),
    ];
    for (alpha, g, mu, t, want) in cases {
        let v = snr_cdf(t, &hop(alpha, g, mu), Method::Quadrature).unwrap();
        assert!(rel(v, want) < 1e-9, "a={alpha} g={g}: {v} vs {want}");
    }
}

#[test]
fn outage_decreases_with_g() {
    for alpha in ALPHAS {
        for t in [0.1, 1.0, 10.0] {
            let mut last = f64::INFINITY;
            for g in [0.8, 1.2, 2.0, 4.0, 8.0] {
                let f = snr_cdf(t, &hop(alpha, g, 1e4), Method::ClosedForm).unwrap();
                assert!(f <= last, "a={alpha} t={t} g={g}: {f} > {last}");
                last = f;
            }
        }
    }
}

#[test]
fn large_g_reduces_to_scaled_k_distribution() {
    // With g → ∞ the pointing loss concentrates at A0; the error is O(1/g²).
    for alpha in ALPHAS {
        for k in 0..8 {
            let h = A0 * 10f64.powf(-1.5 + 0.4 * k as f64);
            let v = combined_pdf(h, alpha, 50.0, A0).unwrap();
            let limit = k_pdf(h / A0, alpha).unwrap() / A0;
            assert!(rel(v, limit) < 5e-3, "a={alpha} h={h}: {v} vs {limit}");
        }
    }
}

#[test]
fn gauss_multiplication_audit_outcome() {
    let gammas = [1e-3, 0.1, 1.0, 10.0, 100.0];
    for alpha in [1.5, 2.0, 3.0] {
        for g in GS {
            let audit = gauss_multiplication_audit(&hop(alpha, g, 1e3), &gammas).unwrap();
            assert!(audit.max_corrected_rel_err() < 1e-9, "a={alpha} g={g}");
            assert!(
                !audit.printed_holds(1e-6),
                "a={alpha} g={g}: printed form unexpectedly holds"
            );
        }
    }
}

#[test]
fn printed_cdf_disagrees_with_quadrature() {
    let h = hop(2.0, 1.2, 1e3);
    let q = snr_cdf(1.0, &h, Method::Quadrature).unwrap();
    for top in [PrintedCdfTop::MinusOne, PrintedCdfTop::MinusHalf] {
        let p = printed_snr_cdf(1.0, &h, top).unwrap();
        assert!(rel(p, q) > 1e-2, "{top:?}: {p} vs {q}");
    }
}

#[test]
fn geometry_constructor_feeds_the_channel() {
    let p = pointing_geometry(0.1, 1.0, 0.125).unwrap();
    assert!(rel(p.a0, A0) < 1e-15);
    let h = HopParams::new(2.0, 1e3, p).unwrap();
    let f = snr_cdf(1.0, &h, Method::ClosedForm).unwrap();
    assert!(f > 0.0 && f < 1.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn densities_nonnegative_and_cdf_monotone(
        alpha in 0.6f64..6.0,
        g in 0.6f64..8.0,
        mu_db in 0.0f64..60.0,
        t1 in 1e-3f64..1e2,
        t2 in 1e-3f64..1e2,
    ) {
        let h = hop(alpha, g, 10f64.powf(mu_db / 10.0));
        let ch = HopChannel::new(&h).unwrap();
        let (lo, hi) = if t1 < t2 { (t1, t2) } else { (t2, t1) };
        prop_assert!(ch.snr_pdf(lo).unwrap() >= 0.0);
        prop_assert!(ch.gain_pdf(lo * A0).unwrap() >= 0.0);
        let f_lo = ch.snr_cdf(lo, Method::ClosedForm).unwrap();
        let f_hi = ch.snr_cdf(hi, Method::ClosedForm).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&f_lo));
        prop_assert!(f_hi >= f_lo - 1e-12 * f_hi);
    }
}
