//! Meijer G-function evaluation by quadrature of its Mellin–Barnes integral
//! along a vertical line.
//!
//! With the convention
//!
//! ```text
//! G^{m,n}_{p,q}(x | a; b) = 1/(2πi) ∫_L Φ(s) x^s ds,
//! Φ(s) = Π_{j≤m} Γ(b_j − s) Π_{j≤n} Γ(1 − a_j + s)
//!        / (Π_{j>m} Γ(1 − b_j + s) Π_{j>n} Γ(a_j − s)),
//! ```
//!
//! the poles of Γ(b_j − s) sit at b_j + k (right family) and those of
//! Γ(1 − a_j + s) at a_j − 1 − k (left family). A line Re s = c between the
//! two families gives G = (1/π) ∫_0^∞ Re[Φ(c + it) x^{c+it}] dt, which
//! converges absolutely when 2(m + n) > p + q. Coinciding poles inside one
//! family are harmless because the line never approaches them.
//!
//! The integrand is analytic in a strip around the line and decays
//! exponentially, so the trapezoid rule converges geometrically; the step
//! is halved until two successive sums agree.

use std::cell::Cell;
use std::f64::consts::PI;

use num_complex::Complex64;

use super::gamma::ln_gamma_complex;
use crate::error::{construction, domain, Error, Result};

/// Tolerance for deciding that two poles coincide.
const POLE_COINCIDENCE_TOL: f64 = 1e-12;

/// Largest integer offset for which a gamma ratio is expanded as a product.
const MAX_RATIO_OFFSET: f64 = 16.0;

/// Symbolic description of G^{m,n}_{p,q}(· | top; bottom).
#[derive(Debug, Clone, PartialEq)]
pub struct MeijerGSpec {
    m: usize,
    n: usize,
    top: Vec<f64>,
    bottom: Vec<f64>,
    ratios: Vec<GammaRatio>,
}

/// A numerator gamma factor and a denominator factor whose arguments differ
/// by a small non-negative integer k, so that their ratio is Γ(z)/Γ(z + k)
/// = 1/(z)_k. Evaluating the ratio as a product avoids cancelling two large
/// log-gammas when the parameters are large.
#[derive(Debug, Clone, Copy, PartialEq)]
struct GammaRatio {
    /// Index of Γ(b_i − s), i < m; otherwise of Γ(1 − a_i + s), i < n.
    num: usize,
    /// Index of Γ(a_j − s), j ≥ n; otherwise of Γ(1 − b_j + s), j ≥ m.
    den: usize,
    /// True when the numerator is a bottom parameter.
    from_bottom: bool,
    k: u32,
}

fn integer_offset(d: f64) -> Option<u32> {
    (d > -POLE_COINCIDENCE_TOL
        && d <= MAX_RATIO_OFFSET
        && (d - d.round()).abs() < POLE_COINCIDENCE_TOL)
        .then(|| d.round() as u32)
}

fn pair_ratios(m: usize, n: usize, top: &[f64], bottom: &[f64]) -> Vec<GammaRatio> {
    let mut ratios = Vec::new();
    let mut den_used = vec![false; top.len()];
    for (i, &b) in bottom[..m].iter().enumerate() {
        let hit = (n..top.len()).find(|&j| !den_used[j] && integer_offset(top[j] - b).is_some());
        if let Some(j) = hit {
            den_used[j] = true;
            let k = integer_offset(top[j] - b).unwrap_or(0);
            ratios.push(GammaRatio {
                num: i,
                den: j,
                from_bottom: true,
                k,
            });
        }
    }
    let mut den_used = vec![false; bottom.len()];
    for (i, &a) in top[..n].iter().enumerate() {
        let hit =
            (m..bottom.len()).find(|&j| !den_used[j] && integer_offset(a - bottom[j]).is_some());
        if let Some(j) = hit {
            den_used[j] = true;
            let k = integer_offset(a - bottom[j]).unwrap_or(0);
            ratios.push(GammaRatio {
                num: i,
                den: j,
                from_bottom: false,
                k,
            });
        }
    }
    ratios
}

/// The open interval of admissible contour abscissae. `None` marks a side
/// with no poles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourStrip {
    pub left: Option<f64>,
    pub right: Option<f64>,
}

impl ContourStrip {
    pub fn contains(&self, c: f64) -> bool {
        self.left.is_none_or(|l| c > l) && self.right.is_none_or(|r| c < r)
    }

    /// Midpoint of the strip; one unit inside when a side is open.
    pub fn midpoint(&self) -> f64 {
        match (self.left, self.right) {
            (Some(l), Some(r)) => 0.5 * (l + r),
            (Some(l), None) => l + 1.0,
            (None, Some(r)) => r - 1.0,
            (None, None) => 0.0,
        }
    }

    /// Distance from `c` to the nearest pole.
    pub fn pole_distance(&self, c: f64) -> f64 {
        let dl = self.left.map_or(f64::INFINITY, |l| c - l);
        let dr = self.right.map_or(f64::INFINITY, |r| r - c);
        dl.min(dr)
    }
}

impl MeijerGSpec {
    /// Builds the spec for G^{m,n}_{p,q} with p = `top.len()`, q =
    /// `bottom.len()`.
    ///
    /// Rejects parameter sets where a right-family pole coincides with a
    /// left-family pole, where the families cannot be separated by a
    /// vertical line, or where the contour integral does not converge
    /// absolutely.
    pub fn new(m: usize, n: usize, top: Vec<f64>, bottom: Vec<f64>) -> Result<Self> {
        let (p, q) = (top.len(), bottom.len());
        if m > q || n > p {
            return Err(construction(format!(
                "orders must satisfy m <= q and n <= p, got m={m}, n={n}, p={p}, q={q}"
            )));
        }
        if let Some(v) = top.iter().chain(&bottom).find(|v| !v.is_finite()) {
            return Err(construction(format!("non-finite Meijer-G parameter {v}")));
        }
        if 2 * (m + n) <= p + q {
            return Err(construction(format!(
                "G^{{{m},{n}}}_{{{p},{q}}}: vertical contour integral needs 2(m+n) > p+q"
            )));
        }
        for (i, &a) in top[..n].iter().enumerate() {
            for (j, &b) in bottom[..m].iter().enumerate() {
                let gap = a - 1.0 - b;
                if gap > -POLE_COINCIDENCE_TOL && (gap - gap.round()).abs() < POLE_COINCIDENCE_TOL {
                    return Err(construction(format!(
                        "poles not separable: b_{} + k meets a_{} - 1 - k' (a={a}, b={b})",
                        j + 1,
                        i + 1
                    )));
                }
            }
        }
        let ratios = pair_ratios(m, n, &top, &bottom);
        let spec = Self {
            m,
            n,
            top,
            bottom,
            ratios,
        };
        let strip = spec.strip();
        if let (Some(l), Some(r)) = (strip.left, strip.right) {
            if l >= r {
                return Err(construction(format!(
                    "no vertical line separates the pole families (left {l} >= right {r})"
                )));
            }
        }
        Ok(spec)
    }

    /// G^{1,0}_{0,1}(x | ; 0) = e^{−x}.
    pub fn exponential() -> Self {
        Self {
            m: 1,
            n: 0,
            top: vec![],
            bottom: vec![0.0],
            ratios: vec![],
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.top.len()
    }

    pub fn q(&self) -> usize {
        self.bottom.len()
    }

    pub fn top(&self) -> &[f64] {
        &self.top
    }

    pub fn bottom(&self) -> &[f64] {
        &self.bottom
    }

    /// Smallest right-family base pole min_{j≤m} b_j.
    pub fn min_numerator_bottom(&self) -> Option<f64> {
        self.bottom[..self.m].iter().copied().reduce(f64::min)
    }

    pub fn strip(&self) -> ContourStrip {
        ContourStrip {
            left: self.top[..self.n].iter().map(|a| a - 1.0).reduce(f64::max),
            right: self.min_numerator_bottom(),
        }
    }

    /// 2(m + n) − (p + q); the kernel decays like e^{−δπ|t|/2}.
    pub fn decay_index(&self) -> usize {
        2 * (self.m + self.n) - (self.p() + self.q())
    }

    /// ln Φ(s), imaginary part modulo 2π. Real part is −∞ where a
    /// reciprocal gamma factor vanishes.
    pub fn ln_kernel(&self, s: Complex64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        let mut acc = Complex64::new(0.0, 0.0);
        let mut skip_top = vec![false; self.top.len()];
        let mut skip_bottom = vec![false; self.bottom.len()];
        for r in &self.ratios {
            let z = if r.from_bottom {
                skip_bottom[r.num] = true;
                skip_top[r.den] = true;
                self.bottom[r.num] - s
            } else {
                skip_top[r.num] = true;
                skip_bottom[r.den] = true;
                one - self.top[r.num] + s
            };
            for i in 0..r.k {
                acc -= (z + i as f64).ln();
            }
        }
        for (j, &b) in self.bottom.iter().enumerate() {
            if skip_bottom[j] {
                continue;
            }
            if j < self.m {
                acc += ln_gamma_complex(b - s);
            } else {
                acc -= ln_gamma_complex(one - b + s);
            }
        }
        for (j, &a) in self.top.iter().enumerate() {
            if skip_top[j] {
                continue;
            }
            if j < self.n {
                acc += ln_gamma_complex(one - a + s);
            } else {
                acc -= ln_gamma_complex(a - s);
            }
        }
        if acc.re.is_nan() {
            // +inf − inf only arises at exact poles of a denominator factor.
            Complex64::new(f64::NEG_INFINITY, 0.0)
        } else {
            acc
        }
    }
}

/// How the vertical contour is placed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Abscissa {
    /// Midway between the two pole families.
    Midpoint,
    /// Near the real saddle of |Φ(c) x^c|, kept a margin away from poles.
    /// Minimizes cancellation for arguments far from unity.
    Saddle,
    /// A fixed abscissa; must lie strictly inside the strip.
    Fixed(f64),
}

/// Numerical policy for the contour integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourPolicy {
    pub abscissa: Abscissa,
    /// Initial imaginary extent H of the integration range [−H, H]; doubled
    /// until the last doubling no longer changes the result.
    pub truncation_height: f64,
    /// Maximum number of kernel evaluations.
    pub node_budget: usize,
    /// Target relative error.
    pub rel_tol: f64,
}

impl Default for ContourPolicy {
    fn default() -> Self {
        Self {
            abscissa: Abscissa::Saddle,
            truncation_height: 8.0,
            node_budget: 50_000,
            rel_tol: 1e-11,
        }
    }
}

impl ContourPolicy {
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_abscissa(mut self, abscissa: Abscissa) -> Self {
        self.abscissa = abscissa;
        self
    }

    /// Tenfold tighter tolerance and a larger budget.
    pub fn refined(&self) -> Self {
        Self {
            rel_tol: self.rel_tol / 10.0,
            node_budget: self.node_budget * 4,
            ..*self
        }
    }

    pub(super) fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) {
            return Err(domain(format!(
                "contour rel_tol must be > 0, got {}",
                self.rel_tol
            )));
        }
        if !(self.truncation_height > 0.0) {
            return Err(domain("contour truncation height must be > 0"));
        }
        if self.node_budget < 16 {
            return Err(domain("contour node budget must be at least 16"));
        }
        Ok(())
    }
}

/// Span used in place of an open side of the strip when searching for the
/// saddle.
const OPEN_SIDE_SPAN: f64 = 200.0;
/// Imaginary offset at which the saddle objective is sampled, keeping it
/// clear of the zeros of reciprocal gamma factors on the real axis.
const SADDLE_PROBE_IM: f64 = 0.5;

pub(super) fn choose_abscissa(
    spec: &MeijerGSpec,
    ln_x: f64,
    policy: &ContourPolicy,
) -> Result<f64> {
    let strip = spec.strip();
    match policy.abscissa {
        Abscissa::Midpoint => Ok(strip.midpoint()),
        Abscissa::Fixed(c) => {
            if strip.contains(c) {
                Ok(c)
            } else {
                Err(domain(format!(
                    "contour abscissa {c} outside the pole-free strip ({:?}, {:?})",
                    strip.left, strip.right
                )))
            }
        }
        Abscissa::Saddle => {
            let (lo, hi) = match (strip.left, strip.right) {
                (Some(l), Some(r)) => {
                    let margin = (0.25 * (r - l)).min(0.25);
                    (l + margin, r - margin)
                }
                (Some(l), None) => (l + 0.25, l + OPEN_SIDE_SPAN),
                (None, Some(r)) => (r - OPEN_SIDE_SPAN, r - 0.25),
                (None, None) => (-OPEN_SIDE_SPAN, OPEN_SIDE_SPAN),
            };
            let objective = |c: f64| {
                let v = spec.ln_kernel(Complex64::new(c, SADDLE_PROBE_IM)).re + c * ln_x;
                if v.is_nan() {
                    f64::INFINITY
                } else {
                    v
                }
            };
            Ok(golden_section_min(objective, lo, hi, 1e-6))
        }
    }
}

fn golden_section_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol * (1.0 + a.abs().max(b.abs())) {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Evaluates G^{m,n}_{p,q}(x) for x > 0.
pub fn meijer_g(spec: &MeijerGSpec, x: f64, policy: &ContourPolicy) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain(format!("meijer_g requires a finite x > 0, got {x}")));
    }
    policy.validate()?;
    let ln_x = x.ln();
    let c = choose_abscissa(spec, ln_x, policy)?;
    trapezoid_line(spec, ln_x, c, policy)
}

/// Accumulates h-weighted sums of Re f and |f| over nodes t = h·k.
struct LineSums {
    re: f64,
    abs: f64,
}

fn trapezoid_line(spec: &MeijerGSpec, ln_x: f64, c: f64, policy: &ContourPolicy) -> Result<f64> {
    let evals = Cell::new(0usize);
    let budget = policy.node_budget;
    let mut integrand = |t: f64| -> Complex64 {
        evals.set(evals.get() + 1);
        let s = Complex64::new(c, t);
        let ln_val = spec.ln_kernel(s) + s * ln_x;
        if ln_val.re == f64::NEG_INFINITY {
            Complex64::new(0.0, 0.0)
        } else {
            ln_val.exp()
        }
    };

    let d = spec.strip().pole_distance(c);
    let mut h = (d / 2.0).min(0.5);
    let height = policy.truncation_height;

    // Unweighted sums over the current node set (t = 0 counts half).
    let f0 = integrand(0.0);
    let mut sums = LineSums {
        re: 0.5 * f0.re,
        abs: 0.5 * f0.norm(),
    };
    let mut k_max = 0usize;
    let add_range = |sums: &mut LineSums,
                     from: usize,
                     to: usize,
                     h: f64,
                     integrand: &mut dyn FnMut(f64) -> Complex64| {
        let mut part = LineSums { re: 0.0, abs: 0.0 };
        for k in from..=to {
            let v = integrand(k as f64 * h);
            part.re += v.re;
            part.abs += v.norm();
        }
        sums.re += part.re;
        sums.abs += part.abs;
        part
    };

    let k_new = (height / h).ceil() as usize;
    add_range(&mut sums, 1, k_new, h, &mut integrand);
    k_max = k_max.max(k_new);

    let eps_floor = |abs_sum: f64, h: f64| 64.0 * f64::EPSILON * abs_sum * h / PI;

    // Grow the truncation height.
    loop {
        let k_to = 2 * k_max;
        let part = add_range(&mut sums, k_max + 1, k_to, h, &mut integrand);
        k_max = k_to;
        let value = sums.re * h / PI;
        let tail = part.abs * h / PI;
        if tail <= 0.01 * policy.rel_tol * value.abs() || tail <= eps_floor(sums.abs, h) {
            break;
        }
        if evals.get() > budget {
            return Err(Error::Convergence {
                what: "Meijer-G contour truncation",
                partial: value,
                achieved: tail / value.abs(),
            });
        }
    }

    // Halve the step until successive trapezoid sums agree.
    let mut previous = sums.re * h / PI;
    loop {
        let mut mid = LineSums { re: 0.0, abs: 0.0 };
        for k in 0..k_max {
            let v = integrand((k as f64 + 0.5) * h);
            mid.re += v.re;
            mid.abs += v.norm();
        }
        sums.re += mid.re;
        sums.abs += mid.abs;
        h *= 0.5;
        k_max *= 2;
        let value = sums.re * h / PI;
        let change = (value - previous).abs();
        if change <= policy.rel_tol * value.abs() || change <= eps_floor(sums.abs, h) {
            return Ok(value);
        }
        if evals.get() > budget {
            return Err(Error::Convergence {
                what: "Meijer-G contour quadrature",
                partial: value,
                achieved: change / value.abs(),
            });
        }
        previous = value;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specialfn::bessel_k;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn construction_checks() {
        assert!(MeijerGSpec::new(2, 0, vec![], vec![0.0]).is_err());
        assert!(MeijerGSpec::new(1, 2, vec![0.0], vec![0.0]).is_err());
        // a − 1 − b = 0 ⇒ coinciding poles.
        let err = MeijerGSpec::new(1, 1, vec![1.0], vec![0.0]).unwrap_err();
        assert!(err.to_string().contains("not separable"));
        // Interleaved families without coincidence.
        let err = MeijerGSpec::new(1, 1, vec![1.5], vec![0.0]).unwrap_err();
        assert!(err.to_string().contains("vertical line"));
        // δ = 0
        assert!(MeijerGSpec::new(1, 0, vec![1.0], vec![0.0]).is_err());
        assert!(MeijerGSpec::new(1, 0, vec![], vec![f64::NAN]).is_err());
    }

    #[test]
    fn strip_and_midpoint() {
        let spec = MeijerGSpec::new(1, 1, vec![0.5], vec![0.0]).unwrap();
        let s = spec.strip();
        assert_eq!(s.left, Some(-0.5));
        assert_eq!(s.right, Some(0.0));
        assert_eq!(s.midpoint(), -0.25);
        assert_eq!(MeijerGSpec::exponential().strip().midpoint(), -1.0);
    }

    #[test]
    fn exponential_reduction() {
        let spec = MeijerGSpec::exponential();
        for abscissa in [Abscissa::Midpoint, Abscissa::Saddle, Abscissa::Fixed(-0.3)] {
            let policy = ContourPolicy::default().with_abscissa(abscissa);
            let v = meijer_g(&spec, 2.0, &policy).unwrap();
            assert!(rel(v, (-2f64).exp()) < 1e-10, "{abscissa:?}: {v}");
        }
    }

    #[test]
    fn bessel_reduction() {
        // G^{2,0}_{0,2}(x | 1/2, −1/2) = 2 K_1(2√x)
        let spec = MeijerGSpec::new(2, 0, vec![], vec![0.5, -0.5]).unwrap();
        let v = meijer_g(&spec, 0.25, &ContourPolicy::default()).unwrap();
        assert!(rel(v, 2.0 * bessel_k(1.0, 1.0).unwrap()) < 1e-10);
    }

    #[test]
    fn fixed_abscissa_outside_strip_is_rejected() {
        let spec = MeijerGSpec::exponential();
        let policy = ContourPolicy::default().with_abscissa(Abscissa::Fixed(0.5));
        assert!(matches!(
            meijer_g(&spec, 1.0, &policy),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            meijer_g(&spec, -1.0, &ContourPolicy::default()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn budget_exhaustion_is_a_convergence_error() {
        let spec = MeijerGSpec::exponential();
        let policy = ContourPolicy {
            node_budget: 16,
            rel_tol: 1e-15,
            ..ContourPolicy::default()
        };
        match meijer_g(&spec, 1.0, &policy) {
            Err(Error::Convergence { partial, .. }) => assert!(partial.is_finite()),
            other => panic!("expected convergence error, got {other:?}"),
        }
    }
}
