//! Repeated evaluation of one Meijer G-function at many arguments.
//!
//! On a fixed line Re s = c the trapezoid sum is
//! G(x) ≈ (h/π) x^c Σ_k w_k Re[Φ(c + i t_k) e^{i t_k ln x}], so once the
//! kernel values Φ(c + i t_k) are tabulated each new x costs one complex
//! rotation per node. Tables are built lazily per band of ln x, with c at
//! the saddle for the band centre. Every result is checked against the sum
//! at twice the step and against the cancellation bound; an argument that
//! fails either check is evaluated by [`meijer_g`] from scratch.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;

use super::meijer::{choose_abscissa, meijer_g, Abscissa, ContourPolicy, MeijerGSpec};
use crate::error::{domain, Result};

/// Width of one ln x band sharing a table.
const BAND_WIDTH: f64 = 1.0;
/// Step as a fraction of the distance to the nearest pole. The coarse sum
/// uses twice this step; its aliasing error is about e^{−2π/(2·STEP)}.
const STEP_FRACTION: f64 = 1.0 / 12.0;
/// Kernel magnitude, relative to the running L1 sum, below which the table
/// is truncated.
const TAIL_FLOOR: f64 = 1e-19;
/// Re-seed the rotation from an exact exponential every this many nodes.
const RESEED: usize = 64;

#[derive(Debug)]
struct Table {
    c: f64,
    h: f64,
    phi: Vec<Complex64>,
    l1: f64,
}

impl Table {
    fn build(spec: &MeijerGSpec, c: f64, budget: usize) -> Option<Table> {
        let d = spec.strip().pole_distance(c);
        let h = (d * STEP_FRACTION).min(0.1);
        let mut phi = Vec::new();
        let mut l1 = 0.0;
        // The table extends until a full unit of t lies below the floor.
        let quiet_span = (1.0 / h).ceil() as usize;
        let mut quiet = 0usize;
        for k in 0.. {
            if k > budget {
                return None;
            }
            let ln_v = spec.ln_kernel(Complex64::new(c, k as f64 * h));
            let v = if ln_v.re == f64::NEG_INFINITY {
                Complex64::new(0.0, 0.0)
            } else {
                ln_v.exp()
            };
            if !v.re.is_finite() || !v.im.is_finite() {
                return None;
            }
            let a = v.norm();
            l1 += if k == 0 { 0.5 * a } else { a };
            phi.push(v);
            if k > 0 && a <= TAIL_FLOOR * l1 {
                quiet += 1;
                if quiet >= quiet_span && k % 2 == 0 {
                    break;
                }
            } else {
                quiet = 0;
            }
        }
        Some(Table { c, h, phi, l1 })
    }

    /// Returns (fine sum, coarse sum, scaled L1), all multiplied by
    /// x^c h/π (coarse with its own step).
    fn sums(&self, ln_x: f64) -> (f64, f64, f64) {
        let mut fine = 0.0;
        let mut coarse = 0.0;
        let step = Complex64::from_polar(1.0, self.h * ln_x);
        let mut rot = Complex64::new(1.0, 0.0);
        for (k, v) in self.phi.iter().enumerate() {
            if k % RESEED == 0 {
                rot = Complex64::from_polar(1.0, k as f64 * self.h * ln_x);
            }
            let term = v.re * rot.re - v.im * rot.im;
            let w = if k == 0 { 0.5 } else { 1.0 };
            fine += w * term;
            if k % 2 == 0 {
                coarse += w * term;
            }
            rot *= step;
        }
        let scale = (self.c * ln_x).exp() * self.h / PI;
        (fine * scale, 2.0 * coarse * scale, self.l1 * scale)
    }
}

/// A Meijer G-function prepared for evaluation at many arguments.
///
/// Cheap to share across threads; tables are built on first use.
#[derive(Debug)]
pub struct MeijerKernel {
    spec: MeijerGSpec,
    policy: ContourPolicy,
    tables: Mutex<HashMap<i64, Option<Arc<Table>>>>,
}

impl MeijerKernel {
    pub fn new(spec: MeijerGSpec, policy: ContourPolicy) -> Result<Self> {
        policy.validate()?;
        if let Abscissa::Fixed(c) = policy.abscissa {
            if !spec.strip().contains(c) {
                return Err(domain(format!(
                    "contour abscissa {c} outside the pole-free strip"
                )));
            }
        }
        Ok(Self {
            spec,
            policy,
            tables: Mutex::new(HashMap::new()),
        })
    }

    pub fn spec(&self) -> &MeijerGSpec {
        &self.spec
    }

    pub fn policy(&self) -> &ContourPolicy {
        &self.policy
    }

    fn table_for(&self, ln_x: f64) -> Result<Option<Arc<Table>>> {
        let band = match self.policy.abscissa {
            Abscissa::Saddle => (ln_x / BAND_WIDTH).round() as i64,
            _ => 0,
        };
        if let Some(t) = self.tables.lock().expect("kernel table lock").get(&band) {
            return Ok(t.clone());
        }
        let centre = band as f64 * BAND_WIDTH;
        let c = choose_abscissa(&self.spec, centre, &self.policy)?;
        let table = Table::build(&self.spec, c, self.policy.node_budget).map(Arc::new);
        let mut guard = self.tables.lock().expect("kernel table lock");
        Ok(guard.entry(band).or_insert(table).clone())
    }

    /// G(x) for x > 0, with the same accuracy contract as [`meijer_g`].
    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) || !x.is_finite() {
            return Err(domain(format!("meijer_g requires a finite x > 0, got {x}")));
        }
        let ln_x = x.ln();
        if let Some(table) = self.table_for(ln_x)? {
            let (fine, coarse, l1) = table.sums(ln_x);
            let tol = self.policy.rel_tol * fine.abs();
            let representable = l1 > f64::MIN_POSITIVE && l1.is_finite();
            if representable && (fine - coarse).abs() <= tol && 64.0 * f64::EPSILON * l1 <= tol {
                return Ok(fine);
            }
        }
        meijer_g(&self.spec, x, &self.policy)
    }
}
