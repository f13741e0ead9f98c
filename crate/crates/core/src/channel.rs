//! Single-hop statistics: K-distributed turbulence, pointing loss and the
//! resulting law of the electrical SNR γ = μ h², where h = h_a h_p is the
//! combined channel gain.
//!
//! The gain density is
//!
//! ```text
//! f_h(h) = α g² / (A0 Γ(α)) · G^{3,0}_{1,3}(α h / A0 | g²; g² − 1, α − 1, 0)
//! ```
//!
//! and f_γ(γ) = f_h(√(γ/μ)) / (2√(μγ)). Applying Gauss multiplication to
//! the G-function of √γ and integrating term by term gives the CDF
//!
//! ```text
//! F_γ(γ) = C γ^{1/2} G^{6,1}_{3,7}(w γ | 1/2, g²/2, (g²+1)/2;
//!                                  (g²−1)/2, g²/2, (α−1)/2, α/2, 0, 1/2, −1/2)
//! C = α g² 2^{α−4} / (π A0 Γ(α) √μ),   w = α² / (16 A0² μ).
//! ```

use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::error::{domain, Result};
use crate::quad::{integrate_from_zero, integrate_log, integrate_to_infinity, QuadOptions};
use crate::specialfn::{bessel_k, erf, ln_gamma, ContourPolicy, MeijerGSpec, MeijerKernel};

/// Optical geometry the pointing parameters were derived from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointingGeometry {
    /// Receiver aperture radius.
    pub r: f64,
    /// Beam waist at the receiver.
    pub omega_z: f64,
    /// Jitter standard deviation.
    pub sigma_s: f64,
    pub theta: f64,
    pub omega_zeq: f64,
}

/// Pointing-error parameters: g = ω_zeq / (2σ_s) and the peak collected
/// fraction A0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointingParams {
    pub g: f64,
    pub a0: f64,
    /// Present when the parameters were derived from (r, ω_z, σ_s).
    pub geometry: Option<PointingGeometry>,
}

impl PointingParams {
    /// Pointing parameters given directly.
    pub fn new(g: f64, a0: f64) -> Result<Self> {
        if !(g > 0.0) || !g.is_finite() {
            return Err(domain(format!(
                "pointing ratio g must be finite and > 0, got {g}"
            )));
        }
        if !(a0 > 0.0 && a0 <= 1.0) {
            return Err(domain(format!("A0 must lie in (0, 1], got {a0}")));
        }
        Ok(Self {
            g,
            a0,
            geometry: None,
        })
    }

    /// Mean of the pointing loss h_p, A0 g² / (g² + 1).
    pub fn mean_loss(&self) -> f64 {
        let g2 = self.g * self.g;
        self.a0 * g2 / (g2 + 1.0)
    }
}

/// Derives (ϑ, A0, ω_zeq, g) from aperture radius, beam waist and jitter.
pub fn pointing_geometry(r: f64, omega_z: f64, sigma_s: f64) -> Result<PointingParams> {
    for (name, v) in [("r", r), ("omega_z", omega_z), ("sigma_s", sigma_s)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(domain(format!("{name} must be finite and > 0, got {v}")));
        }
    }
    let theta = PI.sqrt() * r / (2f64.sqrt() * omega_z);
    let e = erf(theta);
    let a0 = e * e;
    let omega_zeq = omega_z * (PI.sqrt() * e / (2.0 * theta * (-theta * theta).exp())).sqrt();
    let g = omega_zeq / (2.0 * sigma_s);
    let mut p = PointingParams::new(g, a0)?;
    p.geometry = Some(PointingGeometry {
        r,
        omega_z,
        sigma_s,
        theta,
        omega_zeq,
    });
    Ok(p)
}

/// One hop: turbulence shape α, SNR scale μ (linear) and pointing error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopParams {
    pub alpha: f64,
    pub mu: f64,
    pub pointing: PointingParams,
}

impl HopParams {
    pub fn new(alpha: f64, mu: f64, pointing: PointingParams) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(domain(format!("alpha must be finite and > 0, got {alpha}")));
        }
        if !(mu > 0.0) || !mu.is_finite() {
            return Err(domain(format!("mu must be finite and > 0, got {mu}")));
        }
        Ok(Self {
            alpha,
            mu,
            pointing,
        })
    }
}

/// K-distribution density of unit-mean irradiance.
pub fn k_pdf(i: f64, alpha: f64) -> Result<f64> {
    if !(i > 0.0) || !i.is_finite() {
        return Err(domain(format!("k_pdf requires a finite I > 0, got {i}")));
    }
    if !(alpha > 0.0) {
        return Err(domain(format!("alpha must be > 0, got {alpha}")));
    }
    let k = bessel_k(alpha - 1.0, 2.0 * (alpha * i).sqrt())?;
    if k == 0.0 {
        return Ok(0.0);
    }
    let ln = 2f64.ln() + 0.5 * (alpha + 1.0) * alpha.ln() - ln_gamma(alpha)?
        + 0.5 * (alpha - 1.0) * i.ln()
        + k.ln();
    Ok(ln.exp())
}

/// G^{3,0}_{1,3}(· | g²; g² − 1, α − 1, 0) of the gain density.
pub fn gain_pdf_spec(alpha: f64, g: f64) -> Result<MeijerGSpec> {
    let g2 = g * g;
    MeijerGSpec::new(3, 0, vec![g2], vec![g2 - 1.0, alpha - 1.0, 0.0])
}

/// G^{6,1}_{3,7} of the SNR CDF.
pub fn snr_cdf_spec(alpha: f64, g: f64) -> Result<MeijerGSpec> {
    let g2 = g * g;
    MeijerGSpec::new(
        6,
        1,
        vec![0.5, g2 / 2.0, (g2 + 1.0) / 2.0],
        vec![
            (g2 - 1.0) / 2.0,
            g2 / 2.0,
            (alpha - 1.0) / 2.0,
            alpha / 2.0,
            0.0,
            0.5,
            -0.5,
        ],
    )
}

/// Density of the combined gain h = h_a h_p.
pub fn combined_pdf(i: f64, alpha: f64, g: f64, a0: f64) -> Result<f64> {
    let hop = HopParams::new(alpha, 1.0, PointingParams::new(g, a0)?)?;
    HopChannel::new(&hop)?.gain_pdf(i)
}

/// Density of the electrical SNR.
pub fn snr_pdf(gamma: f64, hop: &HopParams) -> Result<f64> {
    HopChannel::new(hop)?.snr_pdf(gamma)
}

/// How an analytic quantity is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Meijer-G closed form.
    ClosedForm,
    /// Adaptive quadrature of the SNR density.
    Quadrature,
}

/// CDF of the electrical SNR at `gamma_th`.
pub fn snr_cdf(gamma_th: f64, hop: &HopParams, method: Method) -> Result<f64> {
    HopChannel::new(hop)?.snr_cdf(gamma_th, method)
}

/// Quadrature tolerance used for the SNR CDF.
pub const CDF_QUAD_REL_TOL: f64 = 1e-11;

/// A hop with its G-functions prepared for repeated evaluation.
#[derive(Debug)]
pub struct HopChannel {
    hop: HopParams,
    pdf: MeijerKernel,
    cdf: MeijerKernel,
    ln_pdf_const: f64,
    pdf_scale: f64,
    ln_cdf_const: f64,
    cdf_scale: f64,
    quad: QuadOptions,
}

impl HopChannel {
    pub fn new(hop: &HopParams) -> Result<Self> {
        Self::with_policy(hop, ContourPolicy::default())
    }

    pub fn with_policy(hop: &HopParams, policy: ContourPolicy) -> Result<Self> {
        let HopParams { alpha, mu, .. } = *hop;
        let PointingParams { g, a0, .. } = hop.pointing;
        let lg = ln_gamma(alpha)?;
        let ln_pdf_const = (alpha * g * g / a0).ln() - lg;
        let ln_cdf_const =
            (alpha * g * g / a0).ln() + (alpha - 4.0) * 2f64.ln() - PI.ln() - lg - 0.5 * mu.ln();
        Ok(Self {
            hop: *hop,
            pdf: MeijerKernel::new(gain_pdf_spec(alpha, g)?, policy)?,
            cdf: MeijerKernel::new(snr_cdf_spec(alpha, g)?, policy)?,
            ln_pdf_const,
            pdf_scale: alpha / a0,
            ln_cdf_const,
            cdf_scale: alpha * alpha / (16.0 * a0 * a0 * mu),
            quad: QuadOptions::default().with_rel_tol(CDF_QUAD_REL_TOL),
        })
    }

    pub fn params(&self) -> &HopParams {
        &self.hop
    }

    /// The CDF as (C, w, G) with F(γ) = C γ^{1/2} G(wγ).
    pub fn cdf_closed_form_parts(&self) -> (f64, f64, &MeijerGSpec) {
        (self.ln_cdf_const.exp(), self.cdf_scale, self.cdf.spec())
    }

    pub fn cdf_kernel(&self) -> &MeijerKernel {
        &self.cdf
    }

    /// Density of the combined gain.
    pub fn gain_pdf(&self, h: f64) -> Result<f64> {
        if !(h > 0.0) || !h.is_finite() {
            return Err(domain(format!(
                "gain density requires a finite h > 0, got {h}"
            )));
        }
        let g = self.pdf.eval(self.pdf_scale * h)?;
        Ok((self.ln_pdf_const.exp() * g).max(0.0))
    }

    /// Density of the electrical SNR.
    pub fn snr_pdf(&self, gamma: f64) -> Result<f64> {
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(domain(format!(
                "SNR density requires a finite γ > 0, got {gamma}"
            )));
        }
        let mu = self.hop.mu;
        Ok(self.gain_pdf((gamma / mu).sqrt())? / (2.0 * (mu * gamma).sqrt()))
    }

    pub fn snr_cdf(&self, gamma_th: f64, method: Method) -> Result<f64> {
        match method {
            Method::ClosedForm => self.snr_cdf_closed_form(gamma_th),
            Method::Quadrature => self.snr_cdf_quadrature(gamma_th),
        }
    }

    pub fn snr_cdf_closed_form(&self, gamma_th: f64) -> Result<f64> {
        check_threshold(gamma_th)?;
        let g = self.cdf.eval(self.cdf_scale * gamma_th)?;
        Ok((self.ln_cdf_const + 0.5 * gamma_th.ln()).exp() * g)
    }

    /// ∫_0^{γ_th} f_γ, or 1 − ∫_{γ_th}^∞ f_γ when that is the smaller
    /// piece.
    pub fn snr_cdf_quadrature(&self, gamma_th: f64) -> Result<f64> {
        check_threshold(gamma_th)?;
        let lower = integrate_from_zero(|t| self.snr_pdf(t), gamma_th, self.quad)?.value;
        if lower <= 0.5 {
            return Ok(lower.clamp(0.0, 1.0));
        }
        let upper = self.snr_upper_tail(gamma_th)?;
        Ok((1.0 - upper).clamp(0.0, 1.0))
    }

    fn snr_upper_tail(&self, gamma: f64) -> Result<f64> {
        // Tail in the gain variable: ∫_{y}^∞ f_h, y = √(γ/μ).
        // Only its error relative to 1 matters.
        let y = (gamma / self.hop.mu).sqrt();
        let opts = self.quad.with_abs_tol(0.1 * CDF_QUAD_REL_TOL);
        Ok(integrate_to_infinity(|h| self.gain_pdf(h), y, opts)?.value)
    }

    /// ∫_a^b f_γ for 0 < a < b.
    pub fn snr_mass(&self, a: f64, b: f64) -> Result<f64> {
        if a == b {
            return Ok(0.0);
        }
        Ok(integrate_log(|t| self.snr_pdf(t), a, b, self.quad)?.value)
    }
}

fn check_threshold(gamma_th: f64) -> Result<()> {
    if !(gamma_th > 0.0) || gamma_th.is_nan() {
        return Err(domain(format!("SNR threshold must be > 0, got {gamma_th}")));
    }
    Ok(())
}

/// Evaluates the quadrature CDF at many points by integrating the density
/// from the nearest point already known.
#[derive(Debug)]
pub struct CdfTracker<'a> {
    hop: &'a HopChannel,
    known: BTreeMap<u64, f64>,
}

impl<'a> CdfTracker<'a> {
    pub fn new(hop: &'a HopChannel) -> Self {
        Self {
            hop,
            known: BTreeMap::new(),
        }
    }

    pub fn cdf(&mut self, gamma: f64) -> Result<f64> {
        check_threshold(gamma)?;
        if gamma.is_infinite() {
            return Ok(1.0);
        }
        // Positive floats order like their bit patterns.
        let key = gamma.to_bits();
        if let Some(&v) = self.known.get(&key) {
            return Ok(v);
        }
        let below = self
            .known
            .range(..key)
            .next_back()
            .map(|(k, v)| (f64::from_bits(*k), *v));
        let above = self
            .known
            .range(key..)
            .next()
            .map(|(k, v)| (f64::from_bits(*k), *v));
        let nearest = match (below, above) {
            (Some(b), Some(a)) => {
                if (gamma / b.0).ln() <= (a.0 / gamma).ln() {
                    Some(b)
                } else {
                    Some(a)
                }
            }
            (b, a) => b.or(a),
        };
        let v = match nearest {
            None => self.hop.snr_cdf_quadrature(gamma)?,
            Some((x, fx)) if x < gamma => fx + self.hop.snr_mass(x, gamma)?,
            Some((x, fx)) => fx - self.hop.snr_mass(gamma, x)?,
        };
        let v = v.clamp(0.0, 1.0);
        self.known.insert(key, v);
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometry_worked_example() {
        let p = pointing_geometry(0.1, 1.0, 0.1).unwrap();
        let geo = p.geometry.unwrap();
        assert!((geo.theta - 0.12533141373155002512).abs() < 1e-15);
        assert!((p.a0 - 0.019792086945219322638).abs() < 1e-15);
        assert!((geo.omega_zeq - 1.0052552259034757815).abs() < 1e-14);
        assert!((p.g - 5.0262761295173789075).abs() < 1e-13);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(PointingParams::new(0.0, 0.5).is_err());
        assert!(PointingParams::new(1.0, 1.5).is_err());
        assert!(PointingParams::new(1.0, 0.0).is_err());
        let p = PointingParams::new(1.0, 0.5).unwrap();
        assert!(HopParams::new(0.0, 1.0, p).is_err());
        assert!(HopParams::new(1.0, -1.0, p).is_err());
        assert!(pointing_geometry(-1.0, 1.0, 1.0).is_err());
        assert!(k_pdf(0.0, 2.0).is_err());
    }

    #[test]
    fn k_pdf_value() {
        let v = k_pdf(1.0, 1.0).unwrap();
        assert!((v - 0.22778774549906687131).abs() < 1e-15);
    }

    #[test]
    fn tracker_matches_direct_quadrature() {
        let hop = HopParams::new(2.0, 100.0, PointingParams::new(1.2, 0.5).unwrap()).unwrap();
        let ch = HopChannel::new(&hop).unwrap();
        let mut tr = CdfTracker::new(&ch);
        for &g in &[10.0, 1.0, 30.0, 3.0, 1e3, 0.01] {
            let a = tr.cdf(g).unwrap();
            let b = ch.snr_cdf_quadrature(g).unwrap();
            assert!(((a - b) / b).abs() < 1e-9, "γ={g}: {a} vs {b}");
        }
    }
}
