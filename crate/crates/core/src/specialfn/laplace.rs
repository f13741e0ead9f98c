//! Laplace-type integrals of Meijer G-functions:
//!
//! ```text
//! L(σ) = ∫_0^∞ e^{−σt} t^{s−1} G(c·t) dt
//! ```
//!
//! The single-G case has the closed form
//! σ^{−s} G^{m,n+1}_{p+1,q}(c/σ | 1−s, a; b); the product of two G factors
//! is evaluated by adaptive quadrature.

use super::kernel::MeijerKernel;
use super::meijer::{meijer_g, ContourPolicy, MeijerGSpec};
use crate::error::{domain, Result};
use crate::quad::{integrate_half_line, QuadEstimate, QuadOptions};

fn check_args(c: f64, s: f64, rate: f64) -> Result<()> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(domain(format!(
            "Laplace-G scale must be finite and > 0, got {c}"
        )));
    }
    if !(s > 0.0) || !s.is_finite() {
        return Err(domain(format!(
            "Laplace-G power must be finite and > 0, got {s}"
        )));
    }
    if !(rate > 0.0) || !rate.is_finite() {
        return Err(domain(format!(
            "Laplace-G rate must be finite and > 0, got {rate}"
        )));
    }
    Ok(())
}

/// Near the origin G(x) behaves like x^{min b_j} (j ≤ m); the integral
/// converges at the head only if s + min b_j > 0.
fn check_head(spec: &MeijerGSpec, s: f64) -> Result<()> {
    if let Some(b_min) = spec.min_numerator_bottom() {
        if s + b_min <= 0.0 {
            return Err(domain(format!(
                "Laplace-G integral diverges at the origin: s + min b = {} <= 0",
                s + b_min
            )));
        }
    }
    Ok(())
}

/// The spec and argument of the closed form: returns `(G', x')` with
/// L = rate^{−s} · G'(x').
pub fn laplace_g_spec(spec: &MeijerGSpec, c: f64, s: f64, rate: f64) -> Result<(MeijerGSpec, f64)> {
    check_args(c, s, rate)?;
    check_head(spec, s)?;
    let mut top = Vec::with_capacity(spec.p() + 1);
    top.push(1.0 - s);
    top.extend_from_slice(spec.top());
    let lifted = MeijerGSpec::new(spec.m(), spec.n() + 1, top, spec.bottom().to_vec())?;
    Ok((lifted, c / rate))
}

/// Closed-form value of ∫_0^∞ e^{−rate·t} t^{s−1} G_spec(c·t) dt.
pub fn laplace_g_integral(
    spec: &MeijerGSpec,
    c: f64,
    s: f64,
    rate: f64,
    policy: &ContourPolicy,
) -> Result<f64> {
    let (lifted, x) = laplace_g_spec(spec, c, s, rate)?;
    Ok(rate.powf(-s) * meijer_g(&lifted, x, policy)?)
}

/// The same integral by adaptive quadrature of the integrand.
pub fn laplace_g_integral_quadrature(
    spec: &MeijerGSpec,
    c: f64,
    s: f64,
    rate: f64,
    policy: &ContourPolicy,
    opts: QuadOptions,
) -> Result<QuadEstimate> {
    check_args(c, s, rate)?;
    check_head(spec, s)?;
    let kernel = MeijerKernel::new(spec.clone(), *policy)?;
    integrate_half_line(
        |t| {
            let w = (-rate * t + (s - 1.0) * t.ln()).exp();
            if w == 0.0 {
                return Ok(0.0);
            }
            Ok(w * kernel.eval(c * t)?)
        },
        s / rate,
        &[1.0 / c],
        opts,
    )
}

/// Closed form together with its quadrature cross-check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaplaceCheck {
    pub closed_form: f64,
    pub quadrature: f64,
    pub rel_discrepancy: f64,
}

pub fn laplace_g_integral_checked(
    spec: &MeijerGSpec,
    c: f64,
    s: f64,
    rate: f64,
    policy: &ContourPolicy,
    opts: QuadOptions,
) -> Result<LaplaceCheck> {
    let closed_form = laplace_g_integral(spec, c, s, rate, policy)?;
    let quadrature = laplace_g_integral_quadrature(spec, c, s, rate, policy, opts)?.value;
    Ok(LaplaceCheck {
        closed_form,
        quadrature,
        rel_discrepancy: ((closed_form - quadrature) / quadrature).abs(),
    })
}

/// ∫_0^∞ e^{−rate·t} t^{s−1} G_1(c1·t) G_2(c2·t) dt by adaptive quadrature.
///
/// Both factors are evaluated at the same nodes, so swapping the two
/// (spec, scale) pairs gives a bit-identical result.
#[allow(clippy::too_many_arguments)]
pub fn laplace_product_g_integral(
    spec1: &MeijerGSpec,
    c1: f64,
    spec2: &MeijerGSpec,
    c2: f64,
    s: f64,
    rate: f64,
    policy: &ContourPolicy,
    opts: QuadOptions,
) -> Result<f64> {
    check_args(c1, s, rate)?;
    check_args(c2, s, rate)?;
    let b1 = spec1.min_numerator_bottom().unwrap_or(0.0);
    let b2 = spec2.min_numerator_bottom().unwrap_or(0.0);
    if s + b1 + b2 <= 0.0 {
        return Err(domain(format!(
            "Laplace product integral diverges at the origin: s + b1 + b2 = {} <= 0",
            s + b1 + b2
        )));
    }
    let k1 = MeijerKernel::new(spec1.clone(), *policy)?;
    let k2 = MeijerKernel::new(spec2.clone(), *policy)?;
    let est = integrate_half_line(
        |t| {
            let w = (-rate * t + (s - 1.0) * t.ln()).exp();
            if w == 0.0 {
                return Ok(0.0);
            }
            Ok(w * (k1.eval(c1 * t)? * k2.eval(c2 * t)?))
        },
        s / rate,
        &[1.0 / c1, 1.0 / c2],
        opts,
    )?;
    Ok(est.value)
}
