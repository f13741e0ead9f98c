//! Globally adaptive 21-point Gauss–Kronrod quadrature, with maps for the
//! half line (0, ∞) and for integrable endpoint singularities.
//!
//! Integrands are fallible so that errors from special-function evaluation
//! propagate out of the integral instead of being turned into NaN.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Tolerances for the adaptive driver. The integral is accepted once the
/// summed error estimate is below `max(abs_tol, rel_tol · |I|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            abs_tol: 1e-300,
            max_intervals: 2000,
        }
    }
}

impl QuadOptions {
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }
}

/// Result of a converged integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadEstimate {
    pub value: f64,
    pub abs_err: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn gk21<F>(f: &mut F, a: f64, b: f64) -> Result<Panel>
where
    F: FnMut(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center)?;
    let mut res_k = fc * WGK[10];
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let x = half * XGK[j];
        let f1 = f(center - x)?;
        let f2 = f(center + x)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    res_abs *= half.abs();
    res_asc *= half.abs();
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    if !value.is_finite() {
        return Err(Error::Domain(format!("integrand not finite on [{a}, {b}]")));
    }
    Ok(Panel { a, b, value, err })
}

/// ∫ f over the interval split at the sorted `points` (at least two).
pub fn integrate_points<F>(mut f: F, points: &[f64], opts: QuadOptions) -> Result<QuadEstimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    assert!(points.len() >= 2, "need at least one interval");
    let mut heap = BinaryHeap::new();
    let mut evaluations = 0;
    for w in points.windows(2) {
        if w[1] > w[0] {
            heap.push(gk21(&mut f, w[0], w[1])?);
            evaluations += 21;
        }
    }
    loop {
        let (value, err) = heap
            .iter()
            .fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.err));
        let target = opts.abs_tol.max(opts.rel_tol * value.abs());
        if err <= target {
            return Ok(QuadEstimate {
                value,
                abs_err: err,
                evaluations,
            });
        }
        let worst = match heap.pop() {
            Some(p) => p,
            None => {
                return Ok(QuadEstimate {
                    value: 0.0,
                    abs_err: 0.0,
                    evaluations,
                })
            }
        };
        let mid = 0.5 * (worst.a + worst.b);
        let too_narrow = mid <= worst.a || mid >= worst.b;
        if heap.len() + 2 > opts.max_intervals || too_narrow {
            heap.push(worst);
            let (value, err) = heap
                .iter()
                .fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.err));
            return Err(Error::Convergence {
                what: "adaptive quadrature",
                partial: value,
                achieved: err,
            });
        }
        heap.push(gk21(&mut f, worst.a, mid)?);
        heap.push(gk21(&mut f, mid, worst.b)?);
        evaluations += 42;
    }
}

/// ∫_a^b f(t) dt.
pub fn integrate<F>(f: F, a: f64, b: f64, opts: QuadOptions) -> Result<QuadEstimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    integrate_points(f, &[a, b], opts)
}

/// Largest |v| for which `scale · e^v` is evaluated; beyond it the
/// integrand is taken to have decayed.
const MAX_LOG_SPAN: f64 = 700.0;

/// ∫_0^∞ f(t) dt via t = scale · exp(u / (1 − u²)), u ∈ (−1, 1).
///
/// The map turns algebraic behaviour t^β (β > 0) at the origin and any
/// faster-than-algebraic decay at infinity into smooth decay at u = ±1.
/// `breaks` are points in t (positive, any order) where the integrand has
/// kinks or sharp features; they become initial panel boundaries.
pub fn integrate_half_line<F>(
    mut f: F,
    scale: f64,
    breaks: &[f64],
    opts: QuadOptions,
) -> Result<QuadEstimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut points = vec![-1.0, 1.0];
    for &t in breaks {
        if t > 0.0 && t.is_finite() {
            points.push(half_line_inverse(t / scale));
        }
    }
    points.sort_by(f64::total_cmp);
    points.dedup();
    let mapped = |u: f64| -> Result<f64> {
        let one_m = 1.0 - u * u;
        let v = u / one_m;
        if v.abs() > MAX_LOG_SPAN {
            return Ok(0.0);
        }
        let t = scale * v.exp();
        let jac = t * (1.0 + u * u) / (one_m * one_m);
        let val = f(t)?;
        Ok(if val == 0.0 { 0.0 } else { val * jac })
    };
    integrate_points(mapped, &points, opts)
}

/// Inverse of v = u / (1 − u²) for v = ln(ratio).
fn half_line_inverse(ratio: f64) -> f64 {
    let v = ratio.ln();
    if v == 0.0 {
        0.0
    } else {
        // v u² + u − v = 0, root in (−1, 1).
        (-1.0 + (1.0 + 4.0 * v * v).sqrt()) / (2.0 * v)
    }
}

/// ∫_a^b f(t) dt for 0 < a < b via t = e^u, suited to integrands spanning
/// several decades.
pub fn integrate_log<F>(mut f: F, a: f64, b: f64, opts: QuadOptions) -> Result<QuadEstimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    debug_assert!(a > 0.0 && b > a);
    integrate(
        |u| {
            let t = u.exp();
            Ok(f(t)? * t)
        },
        a.ln(),
        b.ln(),
        opts,
    )
}

/// ∫_0^b f(t) dt for an integrand with an integrable power singularity or
/// decay at the origin: t = b·e^{−v}, v = w / (1 − w), w ∈ [0, 1).
pub fn integrate_from_zero<F>(mut f: F, b: f64, opts: QuadOptions) -> Result<QuadEstimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    integrate(
        |w| {
            let one_m = 1.0 - w;
            let v = w / one_m;
            if v > MAX_LOG_SPAN {
                return Ok(0.0);
            }
            let t = b * (-v).exp();
            let val = f(t)?;
            Ok(if val == 0.0 {
                0.0
            } else {
                val * t / (one_m * one_m)
            })
        },
        0.0,
        1.0,
        opts,
    )
}

/// ∫_a^∞ f(t) dt via t = a + w / (1 − w).
pub fn integrate_to_infinity<F>(mut f: F, a: f64, opts: QuadOptions) -> Result<QuadEstimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    integrate(
        |w| {
            let one_m = 1.0 - w;
            let t = a + w / one_m;
            if !t.is_finite() {
                return Ok(0.0);
            }
            let val = f(t)?;
            Ok(if val == 0.0 {
                0.0
            } else {
                val / (one_m * one_m)
            })
        },
        0.0,
        1.0,
        opts,
    )
}
