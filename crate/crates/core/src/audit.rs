//! Literal evaluation of an uncorrected set of closed forms, kept beside the
//! corrected ones so that every discrepancy can be measured and reported.
//!
//! The uncorrected derivation differs from the corrected forms in four
//! places:
//!
//! * the SNR density lacks the Jacobian factor 1/2 of γ = μh²;
//! * after Gauss multiplication two bottom parameters read g² − 1 and
//!   (α − 2)/2 where (g² − 1)/2 and (α − 1)/2 are required;
//! * the CDF carries the top parameter −1 (or −1/2 in the BER section)
//!   instead of 1/2, and a prefactor twice the correct one;
//! * the BER terms append 1 − s as the *last* top parameter, which leaves
//!   g²/2 in the numerator group.
//!
//! Nothing here is used by the link model itself.

use std::f64::consts::PI;

use crate::channel::HopParams;
use crate::error::Result;
use crate::quad::{integrate_half_line, QuadOptions};
use crate::specialfn::{ln_gamma, meijer_g, ContourPolicy, MeijerGSpec, MeijerKernel};

/// Top parameter printed in the first slot of the CDF G-function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrintedCdfTop {
    /// As in the CDF and outage expressions.
    MinusOne,
    /// As in the BER integrals.
    MinusHalf,
}

impl PrintedCdfTop {
    fn value(self) -> f64 {
        match self {
            PrintedCdfTop::MinusOne => -1.0,
            PrintedCdfTop::MinusHalf => -0.5,
        }
    }
}

/// Density of γ as printed, without the factor 1/2.
pub fn printed_snr_pdf(gamma: f64, hop: &HopParams) -> Result<f64> {
    let (alpha, mu) = (hop.alpha, hop.mu);
    let (g, a0) = (hop.pointing.g, hop.pointing.a0);
    let spec = MeijerGSpec::new(3, 0, vec![g * g], vec![g * g - 1.0, alpha - 1.0, 0.0])?;
    let x = alpha * gamma.sqrt() / (a0 * mu.sqrt());
    let c = (alpha * g * g / a0).ln() - ln_gamma(alpha)? - 0.5 * (mu * gamma).ln();
    Ok(c.exp() * meijer_g(&spec, x, &ContourPolicy::default())?)
}

fn gauss_argument(gamma: f64, hop: &HopParams) -> f64 {
    let (alpha, a0) = (hop.alpha, hop.pointing.a0);
    alpha * alpha * gamma / (16.0 * a0 * a0 * hop.mu)
}

/// N(γ) = G^{3,0}_{1,3}(α√γ/(A0√μ) | g²; g² − 1, α − 1, 0), the left side
/// of the multiplication step.
pub fn gauss_direct(gamma: f64, hop: &HopParams) -> Result<f64> {
    let (alpha, mu) = (hop.alpha, hop.mu);
    let (g, a0) = (hop.pointing.g, hop.pointing.a0);
    let spec = MeijerGSpec::new(3, 0, vec![g * g], vec![g * g - 1.0, alpha - 1.0, 0.0])?;
    meijer_g(
        &spec,
        alpha * gamma.sqrt() / (a0 * mu.sqrt()),
        &ContourPolicy::default(),
    )
}

fn gauss_rhs(gamma: f64, hop: &HopParams, bottom: Vec<f64>) -> Result<f64> {
    let (alpha, g) = (hop.alpha, hop.pointing.g);
    let g2 = g * g;
    let spec = MeijerGSpec::new(6, 0, vec![g2 / 2.0, (g2 + 1.0) / 2.0], bottom)?;
    let c = 2f64.powf(alpha - 2.0) / (2.0 * PI);
    Ok(c * meijer_g(&spec, gauss_argument(gamma, hop), &ContourPolicy::default())?)
}

/// Right side of the multiplication step as printed.
pub fn printed_gauss_multiplication(gamma: f64, hop: &HopParams) -> Result<f64> {
    let (alpha, g2) = (hop.alpha, hop.pointing.g * hop.pointing.g);
    gauss_rhs(
        gamma,
        hop,
        vec![
            g2 - 1.0,
            g2 / 2.0,
            (alpha - 2.0) / 2.0,
            alpha / 2.0,
            0.0,
            0.5,
        ],
    )
}

/// Right side of the multiplication step with the corrected parameters.
pub fn gauss_multiplication(gamma: f64, hop: &HopParams) -> Result<f64> {
    let (alpha, g2) = (hop.alpha, hop.pointing.g * hop.pointing.g);
    gauss_rhs(
        gamma,
        hop,
        vec![
            (g2 - 1.0) / 2.0,
            g2 / 2.0,
            (alpha - 1.0) / 2.0,
            alpha / 2.0,
            0.0,
            0.5,
        ],
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaussAuditPoint {
    pub gamma: f64,
    pub direct: f64,
    pub printed: f64,
    pub corrected: f64,
}

impl GaussAuditPoint {
    pub fn printed_ratio(&self) -> f64 {
        self.printed / self.direct
    }

    pub fn corrected_ratio(&self) -> f64 {
        self.corrected / self.direct
    }
}

/// Outcome of the multiplication-step audit for one (α, g).
#[derive(Debug, Clone, PartialEq)]
pub struct GaussAudit {
    pub alpha: f64,
    pub g: f64,
    pub points: Vec<GaussAuditPoint>,
}

impl GaussAudit {
    pub fn max_printed_rel_err(&self) -> f64 {
        self.points
            .iter()
            .map(|p| (p.printed_ratio() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_corrected_rel_err(&self) -> f64 {
        self.points
            .iter()
            .map(|p| (p.corrected_ratio() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    pub fn printed_holds(&self, tol: f64) -> bool {
        self.max_printed_rel_err() <= tol
    }
}

pub fn gauss_multiplication_audit(hop: &HopParams, gammas: &[f64]) -> Result<GaussAudit> {
    let mut points = Vec::with_capacity(gammas.len());
    for &gamma in gammas {
        points.push(GaussAuditPoint {
            gamma,
            direct: gauss_direct(gamma, hop)?,
            printed: printed_gauss_multiplication(gamma, hop)?,
            corrected: gauss_multiplication(gamma, hop)?,
        });
    }
    Ok(GaussAudit {
        alpha: hop.alpha,
        g: hop.pointing.g,
        points,
    })
}

/// Prefactor α g² 2^{α−2} / (2π A0 Γ(α) √μ) as printed.
fn printed_cdf_const(hop: &HopParams) -> Result<f64> {
    let (alpha, mu) = (hop.alpha, hop.mu);
    let (g, a0) = (hop.pointing.g, hop.pointing.a0);
    let ln = (alpha * g * g / a0).ln() + (alpha - 2.0) * 2f64.ln()
        - (2.0 * PI).ln()
        - ln_gamma(alpha)?
        - 0.5 * mu.ln();
    Ok(ln.exp())
}

fn printed_cdf_bottom(hop: &HopParams) -> Vec<f64> {
    let (alpha, g2) = (hop.alpha, hop.pointing.g * hop.pointing.g);
    vec![
        g2 - 1.0,
        g2 / 2.0,
        (alpha - 1.0) / 2.0,
        alpha / 2.0,
        0.0,
        0.5,
        -0.5,
    ]
}

/// The printed G^{6,1}_{3,7} of the CDF.
pub fn printed_cdf_spec(hop: &HopParams, top: PrintedCdfTop) -> Result<MeijerGSpec> {
    let g2 = hop.pointing.g * hop.pointing.g;
    MeijerGSpec::new(
        6,
        1,
        vec![top.value(), g2 / 2.0, (g2 + 1.0) / 2.0],
        printed_cdf_bottom(hop),
    )
}

/// The CDF exactly as printed.
pub fn printed_snr_cdf(gamma_th: f64, hop: &HopParams, top: PrintedCdfTop) -> Result<f64> {
    let spec = printed_cdf_spec(hop, top)?;
    let g = meijer_g(
        &spec,
        gauss_argument(gamma_th, hop),
        &ContourPolicy::default(),
    )?;
    Ok(printed_cdf_const(hop)? * gamma_th.sqrt() * g)
}

/// The printed single-hop BER term's G^{6,2}_{4,7}; fails to construct
/// when its pole families overlap.
pub fn printed_ber_term_spec(hop: &HopParams, p: f64) -> Result<MeijerGSpec> {
    let g2 = hop.pointing.g * hop.pointing.g;
    MeijerGSpec::new(
        6,
        2,
        vec![-1.0, g2 / 2.0, (g2 + 1.0) / 2.0, 0.5 - p],
        printed_cdf_bottom(hop),
    )
}

/// The average BER exactly as printed for two hops with shared pointing
/// parameters. The two-variable G-function is realised by its defining
/// integral with the printed CDF kernels.
pub fn printed_avg_ber(hop1: &HopParams, hop2: &HopParams, p: f64, q: f64) -> Result<f64> {
    let policy = ContourPolicy::default();
    let single = |hop: &HopParams| -> Result<f64> {
        let spec = printed_ber_term_spec(hop, p)?;
        let x = gauss_argument(1.0, hop) / q;
        Ok(printed_cdf_const(hop)? * q.powf(-(p + 0.5)) * meijer_g(&spec, x, &policy)?)
    };
    let i1 = single(hop1)?;
    let i2 = single(hop2)?;
    let k1 = MeijerKernel::new(printed_cdf_spec(hop1, PrintedCdfTop::MinusOne)?, policy)?;
    let k2 = MeijerKernel::new(printed_cdf_spec(hop2, PrintedCdfTop::MinusOne)?, policy)?;
    let (w1, w2) = (gauss_argument(1.0, hop1), gauss_argument(1.0, hop2));
    let product = integrate_half_line(
        |t| {
            let w = (-q * t + p * t.ln()).exp();
            if w == 0.0 {
                return Ok(0.0);
            }
            Ok(w * k1.eval(w1 * t)? * k2.eval(w2 * t)?)
        },
        (p + 1.0) / q,
        &[1.0 / w1, 1.0 / w2],
        QuadOptions::default(),
    )?
    .value;
    let i3 = printed_cdf_const(hop1)? * printed_cdf_const(hop2)? * product;
    Ok(q.powf(p) / (2.0 * ln_gamma(p)?.exp()) * (i1 + i2 - i3))
}
