//! End-to-end metrics of the decode-and-forward link. The relay decodes
//! and re-transmits, so the link fails when either hop fails and the
//! end-to-end SNR is min(γ₁, γ₂) with independent hops:
//! F(γ) = F₁(γ) + F₂(γ) − F₁(γ)F₂(γ).
//!
//! The average BER of a binary scheme with conditional error probability
//! Γ(p, qγ)/(2Γ(p)) is, after integrating by parts,
//!
//! ```text
//! P_e = q^p / (2Γ(p)) ∫_0^∞ e^{−qγ} γ^{p−1} F(γ) dγ.
//! ```

use std::fmt;
use std::str::FromStr;

use crate::channel::{CdfTracker, HopChannel, HopParams, Method};
use crate::error::{domain, Error, Result};
use crate::quad::{integrate_points, QuadOptions};
use crate::specialfn::{
    gamma_p, gamma_q, laplace_g_integral, laplace_product_g_integral, ln_gamma, ContourPolicy,
};

/// Both hops of the relay link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkConfig {
    /// Source to relay.
    pub hop1: HopParams,
    /// Relay to destination.
    pub hop2: HopParams,
    /// Both hops use one (g, A0).
    pub shared_pointing: bool,
}

impl LinkConfig {
    pub fn new(hop1: HopParams, hop2: HopParams) -> Self {
        Self {
            hop1,
            hop2,
            shared_pointing: hop1.pointing == hop2.pointing,
        }
    }

    /// Two statistically identical hops.
    pub fn symmetric(hop: HopParams) -> Self {
        Self::new(hop, hop)
    }

    pub fn is_symmetric(&self) -> bool {
        self.hop1 == self.hop2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// Coherent binary phase shift keying.
    Cbpsk,
    /// Non-coherent binary frequency shift keying.
    Nbfsk,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Cbpsk => "cbpsk",
            Scheme::Nbfsk => "nbfsk",
        })
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cbpsk" => Ok(Scheme::Cbpsk),
            "nbfsk" => Ok(Scheme::Nbfsk),
            _ => Err(Error::UnsupportedScheme(s.to_string())),
        }
    }
}

/// BER shape p and rate q of a binary scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Modulation {
    pub scheme: Scheme,
    pub p: f64,
    pub q: f64,
}

impl Modulation {
    pub fn of(scheme: Scheme) -> Self {
        match scheme {
            Scheme::Cbpsk => Self {
                scheme,
                p: 0.5,
                q: 1.0,
            },
            Scheme::Nbfsk => Self {
                scheme,
                p: 1.0,
                q: 0.5,
            },
        }
    }
}

/// Looks up (p, q) by scheme name.
pub fn modulation_params(name: &str) -> Result<Modulation> {
    Ok(Modulation::of(name.parse()?))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageRequest {
    pub gamma_th: f64,
}

impl OutageRequest {
    pub fn new(gamma_th: f64) -> Result<Self> {
        if !(gamma_th > 0.0) || gamma_th.is_nan() {
            return Err(domain(format!(
                "outage threshold must be > 0, got {gamma_th}"
            )));
        }
        Ok(Self { gamma_th })
    }
}

/// CDF of min(γ₁, γ₂) from the per-hop CDFs.
pub fn combine_cdfs(f1: f64, f2: f64) -> f64 {
    f1 + f2 - f1 * f2
}

/// Conditional bit-error probability Γ(p, qγ) / (2Γ(p)).
pub fn ber_conditional(gamma: f64, m: &Modulation) -> f64 {
    if gamma <= 0.0 {
        return 0.5;
    }
    // p > 0 and qγ > 0 always lie in the domain.
    0.5 * gamma_q(m.p, m.q * gamma).unwrap_or(0.0)
}

pub fn outage_probability(link: &LinkConfig, req: &OutageRequest, method: Method) -> Result<f64> {
    DualHop::new(link)?.outage(req.gamma_th, method)
}

pub fn avg_ber(link: &LinkConfig, m: &Modulation, method: Method) -> Result<f64> {
    DualHop::new(link)?.avg_ber(m, method)
}

/// Relative tolerance of the BER quadrature.
pub const BER_QUAD_REL_TOL: f64 = 1e-9;
/// The BER integral is cut where qγ reaches this value; the weight beyond
/// it integrates to Q(p, 80) < 1e-33.
const BER_TAIL_QGAMMA: f64 = 80.0;

/// The link with both hops prepared for repeated evaluation. Identical hops
/// share one channel.
#[derive(Debug)]
pub struct DualHop {
    link: LinkConfig,
    hop1: HopChannel,
    hop2: Option<HopChannel>,
}

impl DualHop {
    pub fn new(link: &LinkConfig) -> Result<Self> {
        let hop1 = HopChannel::new(&link.hop1)?;
        let hop2 = if link.is_symmetric() {
            None
        } else {
            Some(HopChannel::new(&link.hop2)?)
        };
        Ok(Self {
            link: *link,
            hop1,
            hop2,
        })
    }

    pub fn link(&self) -> &LinkConfig {
        &self.link
    }

    pub fn hop1(&self) -> &HopChannel {
        &self.hop1
    }

    pub fn hop2(&self) -> &HopChannel {
        self.hop2.as_ref().unwrap_or(&self.hop1)
    }

    /// Per-hop CDFs (F₁, F₂) at γ.
    pub fn hop_cdfs(&self, gamma: f64, method: Method) -> Result<(f64, f64)> {
        let f1 = self.hop1.snr_cdf(gamma, method)?;
        let f2 = match &self.hop2 {
            Some(h) => h.snr_cdf(gamma, method)?,
            None => f1,
        };
        Ok((f1, f2))
    }

    pub fn outage(&self, gamma_th: f64, method: Method) -> Result<f64> {
        OutageRequest::new(gamma_th)?;
        let (f1, f2) = self.hop_cdfs(gamma_th, method)?;
        Ok(combine_cdfs(f1, f2).clamp(0.0, 1.0))
    }

    pub fn avg_ber(&self, m: &Modulation, method: Method) -> Result<f64> {
        match method {
            Method::Quadrature => self.avg_ber_quadrature(m),
            Method::ClosedForm => self.avg_ber_closed_form(m),
        }
    }

    /// Quadrature of the CDF-weighted BER integral with the quadrature CDF.
    pub fn avg_ber_quadrature(&self, m: &Modulation) -> Result<f64> {
        let mut t1 = CdfTracker::new(&self.hop1);
        let mut t2 = self.hop2.as_ref().map(CdfTracker::new);
        let mut breaks = vec![m.p / m.q];
        for hop in [&self.link.hop1, &self.link.hop2] {
            // Scale at which the hop's CDF turns over.
            breaks.push(hop.mu * hop.pointing.mean_loss().powi(2));
        }
        ber_integral(
            m,
            |g| {
                let f1 = t1.cdf(g)?;
                let f2 = match t2.as_mut() {
                    Some(t) => t.cdf(g)?,
                    None => f1,
                };
                Ok(combine_cdfs(f1, f2))
            },
            &breaks,
        )
    }

    /// Closed form: the single-hop terms by the Laplace-G identity and the
    /// cross term by quadrature of the product of the two CDF G-functions.
    pub fn avg_ber_closed_form(&self, m: &Modulation) -> Result<f64> {
        let policy = ContourPolicy::default();
        let (p, q) = (m.p, m.q);
        let single = |h: &HopChannel| -> Result<f64> {
            let (c, w, spec) = h.cdf_closed_form_parts();
            Ok(c * laplace_g_integral(spec, w, p + 0.5, q, &policy)?)
        };
        let i1 = single(&self.hop1)?;
        let i2 = match &self.hop2 {
            Some(h) => single(h)?,
            None => i1,
        };
        let (c1, w1, s1) = self.hop1.cdf_closed_form_parts();
        let (c2, w2, s2) = self.hop2().cdf_closed_form_parts();
        let opts = QuadOptions::default().with_rel_tol(BER_QUAD_REL_TOL);
        let i3 = c1 * c2 * laplace_product_g_integral(s1, w1, s2, w2, p + 1.0, q, &policy, opts)?;
        let lead = (p * q.ln() - 2f64.ln() - ln_gamma(p)?).exp();
        Ok(lead * (i1 + i2 - i3))
    }
}

/// q^p/(2Γ(p)) ∫_0^∞ e^{−qγ} γ^{p−1} F(γ) dγ for a CDF F, integrated in
/// ln γ. `breaks` are SNR values where F or the weight change character.
pub fn ber_integral<F>(m: &Modulation, mut cdf: F, breaks: &[f64]) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (p, q) = (m.p, m.q);
    let ln_lead = p * q.ln() - 2f64.ln() - ln_gamma(p)?;
    let opts = QuadOptions::default().with_rel_tol(BER_QUAD_REL_TOL);
    let hi = BER_TAIL_QGAMMA / q;
    let mut lo = breaks
        .iter()
        .copied()
        .filter(|b| *b > 0.0)
        .fold(p / q, f64::min)
        * 1e-6;
    let head_bound = |lo: f64, cdf: &mut dyn FnMut(f64) -> Result<f64>| -> Result<f64> {
        Ok(0.5 * cdf(lo)? * gamma_p(p, q * lo)?)
    };
    let integrate = |a: f64, b: f64, breaks: &[f64], cdf: &mut dyn FnMut(f64) -> Result<f64>| {
        let mut points = vec![a.ln(), b.ln()];
        points.extend(breaks.iter().filter(|x| **x > a && **x < b).map(|x| x.ln()));
        points.sort_by(f64::total_cmp);
        let body = |u: f64| -> Result<f64> {
            let g = u.exp();
            let f = cdf(g)?;
            if f == 0.0 {
                return Ok(0.0);
            }
            Ok((ln_lead - q * g + p * u).exp() * f)
        };
        integrate_points(body, &points, opts).map(|e| e.value)
    };
    let mut total = integrate(lo, hi, breaks, &mut cdf)?;
    // Head: F is nondecreasing, so ∫_0^lo ≤ F(lo) P(p, q·lo) / 2.
    while lo > 1e-300 && head_bound(lo, &mut cdf)? > 1e-3 * BER_QUAD_REL_TOL * total {
        let next = lo * 1e-4;
        total += integrate(next, lo, &[], &mut cdf)?;
        lo = next;
    }
    Ok(total)
}
