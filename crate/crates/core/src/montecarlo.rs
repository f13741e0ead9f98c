//! Monte-Carlo estimates of outage and average BER, used as an oracle
//! independent of the G-function machinery.
//!
//! Samples are drawn in fixed-size chunks; chunk `k` owns the ChaCha stream
//! `k` under the master seed, and chunk results are reduced in chunk order.
//! Estimates therefore depend only on (seed, chunk size, sample count),
//! never on the number of worker threads.

use rand::distr::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, Gamma, StandardNormal};
use rayon::prelude::*;

use crate::channel::{HopParams, PointingParams};
use crate::dualhop::{ber_conditional, LinkConfig, Modulation, OutageRequest};
use crate::error::{domain, Result};

pub const DEFAULT_CHUNK_SIZE: usize = 65_536;

/// Tag carried by every Monte-Carlo report.
pub const METHOD_TAG: &str = "monte-carlo";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimPlan {
    pub n_samples: usize,
    pub master_seed: u64,
    pub chunk_size: usize,
}

impl SimPlan {
    pub fn new(n_samples: usize, master_seed: u64) -> Result<Self> {
        Self::with_chunk_size(n_samples, master_seed, DEFAULT_CHUNK_SIZE)
    }

    pub fn with_chunk_size(n_samples: usize, master_seed: u64, chunk_size: usize) -> Result<Self> {
        if n_samples == 0 {
            return Err(domain("n_samples must be >= 1"));
        }
        if chunk_size == 0 {
            return Err(domain("chunk_size must be >= 1"));
        }
        Ok(Self {
            n_samples,
            master_seed,
            chunk_size,
        })
    }

    pub fn n_chunks(&self) -> usize {
        self.n_samples.div_ceil(self.chunk_size)
    }

    /// Sample count of chunk `k`.
    pub fn chunk_len(&self, k: usize) -> usize {
        let start = k * self.chunk_size;
        self.chunk_size.min(self.n_samples - start)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateReport {
    pub value: f64,
    pub stderr: f64,
    pub n: usize,
    pub method: &'static str,
    pub seed: u64,
}

/// The random stream of one chunk.
pub fn chunk_rng(master_seed: u64, chunk_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(chunk_index);
    rng
}

/// Per-hop samplers with the distributions built once.
#[derive(Debug, Clone, Copy)]
pub struct GainSampler {
    turbulence: Gamma<f64>,
    a0: f64,
    inv_g2: f64,
}

impl GainSampler {
    pub fn new(hop: &HopParams) -> Result<Self> {
        let alpha = hop.alpha;
        let turbulence = Gamma::new(alpha, 1.0 / alpha)
            .map_err(|e| domain(format!("gamma sampler for alpha={alpha}: {e}")))?;
        let g = hop.pointing.g;
        Ok(Self {
            turbulence,
            a0: hop.pointing.a0,
            inv_g2: 1.0 / (g * g),
        })
    }

    /// Unit-mean K-distributed irradiance X·Y.
    pub fn turbulence<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let y: f64 = Exp1.sample(rng);
        self.turbulence.sample(rng) * y
    }

    /// Pointing loss A0·U^{1/g²}.
    pub fn pointing<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.sample(Open01);
        self.a0 * u.powf(self.inv_g2)
    }

    pub fn gain<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.turbulence(rng) * self.pointing(rng)
    }
}

/// One draw of the combined gain h = h_a h_p.
pub fn sample_channel_gain<R: Rng + ?Sized>(hop: &HopParams, rng: &mut R) -> Result<f64> {
    Ok(GainSampler::new(hop)?.gain(rng))
}

/// Pointing loss from a Gaussian radial displacement with jitter σ_s = 1:
/// A0·exp(−2ρ²/ω_zeq²) with ω_zeq = 2g.
pub fn sample_pointing_displacement<R: Rng + ?Sized>(p: &PointingParams, rng: &mut R) -> f64 {
    let x: f64 = StandardNormal.sample(rng);
    let y: f64 = StandardNormal.sample(rng);
    let w = 2.0 * p.g;
    p.a0 * (-2.0 * (x * x + y * y) / (w * w)).exp()
}

/// `plan.n_samples` gains of one hop in stream order.
pub fn sample_gains(hop: &HopParams, plan: &SimPlan) -> Result<Vec<f64>> {
    let sampler = GainSampler::new(hop)?;
    let chunks: Vec<Vec<f64>> = (0..plan.n_chunks())
        .into_par_iter()
        .map(|k| {
            let mut rng = chunk_rng(plan.master_seed, k as u64);
            (0..plan.chunk_len(k))
                .map(|_| sampler.gain(&mut rng))
                .collect()
        })
        .collect();
    Ok(chunks.concat())
}

/// Count, mean and sum of squared deviations of one chunk.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: f64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1.0;
        let d = x - self.mean;
        self.mean += d / self.n;
        self.m2 += d * (x - self.mean);
    }

    fn merge(self, o: Moments) -> Moments {
        if o.n == 0.0 {
            return self;
        }
        let n = self.n + o.n;
        let d = o.mean - self.mean;
        Moments {
            n,
            mean: self.mean + d * o.n / n,
            m2: self.m2 + o.m2 + d * d * self.n * o.n / n,
        }
    }
}

/// Mean of `stat(min(γ₁, γ₂))` over the plan.
fn link_moments<F>(link: &LinkConfig, plan: &SimPlan, stat: F) -> Result<Moments>
where
    F: Fn(f64) -> f64 + Sync,
{
    let s1 = GainSampler::new(&link.hop1)?;
    let s2 = GainSampler::new(&link.hop2)?;
    let (mu1, mu2) = (link.hop1.mu, link.hop2.mu);
    let chunks: Vec<Moments> = (0..plan.n_chunks())
        .into_par_iter()
        .map(|k| {
            let mut rng = chunk_rng(plan.master_seed, k as u64);
            let mut m = Moments::default();
            for _ in 0..plan.chunk_len(k) {
                let h1 = s1.gain(&mut rng);
                let h2 = s2.gain(&mut rng);
                m.push(stat((mu1 * h1 * h1).min(mu2 * h2 * h2)));
            }
            m
        })
        .collect();
    Ok(chunks.into_iter().fold(Moments::default(), Moments::merge))
}

fn report(value: f64, stderr: f64, plan: &SimPlan) -> EstimateReport {
    EstimateReport {
        value,
        stderr,
        n: plan.n_samples,
        method: METHOD_TAG,
        seed: plan.master_seed,
    }
}

/// Fraction of trials with min(γ₁, γ₂) < γ_th.
pub fn estimate_outage(
    link: &LinkConfig,
    req: &OutageRequest,
    plan: &SimPlan,
) -> Result<EstimateReport> {
    let th = req.gamma_th;
    let m = link_moments(link, plan, |g| if g < th { 1.0 } else { 0.0 })?;
    let v = m.mean;
    Ok(report(v, (v * (1.0 - v) / m.n).sqrt(), plan))
}

/// Sample mean of the conditional BER at min(γ₁, γ₂).
pub fn estimate_ber(link: &LinkConfig, m: &Modulation, plan: &SimPlan) -> Result<EstimateReport> {
    let mo = link_moments(link, plan, |g| ber_conditional(g, m))?;
    let var = if mo.n > 1.0 {
        mo.m2 / (mo.n - 1.0)
    } else {
        0.0
    };
    Ok(report(mo.mean, (var / mo.n).sqrt(), plan))
}
