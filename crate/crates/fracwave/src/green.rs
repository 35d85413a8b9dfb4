//! The fundamental solution `G_a(x, t)` in its three representations.
//!
//! For order `a` in [1, 2] the fundamental solution is an even, nonnegative
//! spatial density, homogeneous of degree -1 in the similarity sense:
//! `G_a(x, t) = (1/|x|) L_a(t/|x|)` with the one-variable auxiliary kernel
//!
//! ```text
//! L_a(u) = (1/pi) sin(pi a/2) / (u^a + u^-a + 2 cos(pi a/2))
//! ```
//!
//! The denominator is evaluated as
//! `expm1(a ln u)^2 / (1 + expm1(a ln u)) + 4 cos(pi a/4)^2`, a sum of two
//! nonnegative terms, so no cancellation occurs even for `a` close to 2 and
//! `u` close to 1 where the kernel is near-singular. Pointwise evaluation is
//! refused above [`Order::KERNEL_ALPHA_MAX`] instead of returning values
//! from a collapsing denominator.
//!
//! Cross-checking representations: a convergent power series on either side
//! of the characteristic `t = |x|` ([`green_series`]) and the cosine
//! transform of the Mittag-Leffler function ([`green_fourier`]).

use std::cell::RefCell;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quad::{self, QuadConfig, QuadResult};
use crate::special::{cos_pi, mittag_leffler_neg, sin_pi, MlOrder, NeumaierSum};

/// Order of the fractional wave equation, restricted to [1, 2].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Order {
    alpha: f64,
}

impl Order {
    /// Pointwise kernel formulas are refused above this order: the
    /// denominator loses roughly `-log10(2 - a)` digits as `a` approaches 2
    /// (the kernel degenerates to a pair of delta functions).
    pub const KERNEL_ALPHA_MAX: f64 = 1.999;

    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_finite() && (1.0..=2.0).contains(&alpha) {
            Ok(Order { alpha })
        } else {
            Err(Error::OrderOutOfRange {
                alpha,
                lo: 1.0,
                hi: 2.0,
            })
        }
    }

    pub fn alpha(self) -> f64 {
        self.alpha
    }

    /// Guard for operations that evaluate the kernel pointwise.
    pub(crate) fn require_kernel(self) -> Result<()> {
        if self.alpha <= Self::KERNEL_ALPHA_MAX {
            Ok(())
        } else {
            Err(Error::OrderOutOfRange {
                alpha: self.alpha,
                lo: 1.0,
                hi: Self::KERNEL_ALPHA_MAX,
            })
        }
    }

    pub(crate) fn ml(self) -> MlOrder {
        MlOrder::new(self.alpha).expect("kernel order is a valid Mittag-Leffler order")
    }
}

/// A space-time evaluation point with `t > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelPoint {
    x: f64,
    t: f64,
}

impl KernelPoint {
    pub fn new(x: f64, t: f64) -> Result<Self> {
        if x.is_finite() && t.is_finite() && t > 0.0 {
            Ok(KernelPoint { x, t })
        } else {
            Err(Error::InvalidInput(
                "kernel point requires finite x and finite t > 0",
            ))
        }
    }

    pub fn x(self) -> f64 {
        self.x
    }

    pub fn t(self) -> f64 {
        self.t
    }
}

/// Raw auxiliary kernel value; assumes `1 <= alpha <= KERNEL_ALPHA_MAX` and
/// `tau > 0`.
pub(crate) fn l_aux_value(alpha: f64, tau: f64) -> f64 {
    let s = sin_pi(0.5 * alpha);
    let d = alpha * tau.ln();
    let u = d.abs();
    if u > 350.0 {
        // Denominator is e^u to machine accuracy; avoids exp overflow.
        return s / PI * (-u).exp();
    }
    if u >= 1.0 {
        // Away from tau = 1 the leading e^u term dominates; the naive sum
        // is accurate. (Reconstructing e^u as 1 + expm1 would cost
        // eps/e^-u relative error instead.)
        let eu = u.exp();
        let c = cos_pi(0.5 * alpha);
        return s / (PI * (eu + 2.0 * c + 1.0 / eu));
    }
    // Near tau = 1 the denominator nearly cancels for alpha close to 2;
    // both terms of this split are nonnegative.
    let rm1 = d.exp_m1(); // tau^alpha - 1
    let q = cos_pi(0.25 * alpha);
    let den = rm1 * rm1 / (1.0 + rm1) + 4.0 * q * q;
    s / (PI * den)
}

/// log L_a(tau), stable over the whole positive axis. Used to build
/// integrands like tau^beta L^2 without overflowing intermediates.
pub(crate) fn log_l_aux(alpha: f64, tau: f64) -> f64 {
    let s = sin_pi(0.5 * alpha);
    let u = (alpha * tau.ln()).abs();
    let em = -(-u).exp_m1(); // 1 - e^-u
    let q = cos_pi(0.25 * alpha);
    let ln_den = u + (em * em + 4.0 * (-u).exp() * q * q).ln();
    (s / PI).ln() - ln_den
}

/// Auxiliary kernel `L_a(tau)` with `G_a(x, t) = L_a(t/|x|) / |x|`.
pub fn l_aux(order: Order, tau: f64) -> Result<f64> {
    order.require_kernel()?;
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(Error::InvalidInput("l_aux requires finite tau > 0"));
    }
    Ok(l_aux_value(order.alpha(), tau))
}

/// Closed-form fundamental solution.
pub fn green_closed(order: Order, p: KernelPoint) -> Result<f64> {
    order.require_kernel()?;
    let a = order.alpha();
    if p.x == 0.0 {
        // The density vanishes at the origin for a > 1 and is the Cauchy
        // peak 1/(pi t) at a = 1.
        return Ok(if a == 1.0 { 1.0 / (PI * p.t) } else { 0.0 });
    }
    let ax = p.x.abs();
    Ok(l_aux_value(a, p.t / ax) / ax)
}

/// Power-series representation: a geometric-type expansion in
/// `(min/max)^a` on either side of the characteristic `t = |x|`.
///
/// Returns the partial sum with `n_terms` terms. Not applicable on the
/// characteristic itself (the expansion parameter is 1) or at x = 0.
pub fn green_series(order: Order, p: KernelPoint, n_terms: usize) -> Result<f64> {
    order.require_kernel()?;
    let a = order.alpha();
    let ax = p.x.abs();
    if ax == 0.0 {
        return Err(Error::SeriesNotApplicable(
            "series representation needs x != 0",
        ));
    }
    if ax == p.t {
        return Err(Error::SeriesNotApplicable(
            "expansion parameter is 1 on the characteristic t = |x|",
        ));
    }
    let ratio = if p.t < ax { p.t / ax } else { ax / p.t };
    let q = ratio.powf(a);
    let mut acc = NeumaierSum::default();
    let mut qk = 1.0f64;
    for k in 1..=n_terms {
        qk *= -q;
        acc.add(sin_pi(0.5 * a * k as f64) * qk);
    }
    Ok(-acc.total() / (PI * ax))
}

/// Fourier-integral representation
/// `G_a(x, t) = (1/pi) int_0^inf cos(kx) E_a(-(kt)^a) dk`.
///
/// The oscillatory integral is summed between consecutive zeros of the
/// cosine and accelerated with an Euler transform, so the slowly decaying
/// Mittag-Leffler tail does not have to be resolved to extinction. This
/// representation is a cross-check: ask for absolute tolerances around
/// 1e-6..1e-8, not for the closed form's machine accuracy.
pub fn green_fourier(order: Order, p: KernelPoint, cfg: &QuadConfig) -> Result<QuadResult> {
    order.require_kernel()?;
    let a = order.alpha();
    let ml_order = order.ml();
    let t = p.t;
    let ml_failure: RefCell<Option<Error>> = RefCell::new(None);
    let integrand = |k: f64| -> f64 {
        match mittag_leffler_neg(ml_order, (k * t).powf(a)) {
            Ok(v) => v,
            Err(e) => {
                ml_failure.borrow_mut().get_or_insert(e);
                0.0
            }
        }
    };

    let ax = p.x.abs();
    let result = if ax == 0.0 {
        let inf_exp = if a > 1.0 { -a } else { f64::NEG_INFINITY };
        let r = quad::integrate_semi_infinite(&integrand, 0.0, inf_exp, cfg)?;
        QuadResult {
            value: r.value / PI,
            error_estimate: r.error_estimate / PI,
            subdivisions: r.subdivisions,
            converged: r.converged,
        }
    } else {
        oscillatory_cosine(&integrand, ax, cfg)?
    };
    if let Some(e) = ml_failure.into_inner() {
        return Err(e);
    }
    Ok(result)
}

/// Euler-transform accumulator for an alternating-type series of segment
/// integrals (Numerical Recipes `eulsum` layout).
struct EulerAccel {
    wksp: Vec<f64>,
    nterm: usize,
    sum: f64,
    last_increment: f64,
}

impl EulerAccel {
    fn new() -> Self {
        EulerAccel {
            wksp: Vec::new(),
            nterm: 0,
            sum: 0.0,
            last_increment: f64::INFINITY,
        }
    }

    fn push(&mut self, term: f64) {
        if self.wksp.is_empty() {
            self.wksp.push(term);
            self.nterm = 1;
            self.sum = 0.5 * term;
            self.last_increment = self.sum;
            return;
        }
        let mut tmp = self.wksp[0];
        self.wksp[0] = term;
        for j in 1..self.nterm {
            let dum = self.wksp[j];
            self.wksp[j] = 0.5 * (self.wksp[j - 1] + tmp);
            tmp = dum;
        }
        let next = 0.5 * (self.wksp[self.nterm - 1] + tmp);
        if self.wksp.len() == self.nterm {
            self.wksp.push(next);
        } else {
            self.wksp[self.nterm] = next;
        }
        let inc = if next.abs() <= self.wksp[self.nterm - 1].abs() {
            self.nterm += 1;
            0.5 * self.wksp[self.nterm - 1]
        } else {
            next
        };
        self.sum += inc;
        self.last_increment = inc;
    }
}

/// `(1/pi) int_0^inf cos(k ax) g(k) dk` for a decaying amplitude `g`,
/// integrated between consecutive zeros of the cosine.
fn oscillatory_cosine(
    g: &dyn Fn(f64) -> f64,
    ax: f64,
    cfg: &QuadConfig,
) -> Result<QuadResult> {
    const MAX_SEGMENTS: usize = 300;
    let mut euler = EulerAccel::new();
    let mut gk_error = 0.0f64;
    let mut subdivisions = 0usize;
    let mut lo = 0.0f64;
    let mut small_increments = 0usize;
    let mut converged = false;
    for j in 0..MAX_SEGMENTS {
        let hi = (j as f64 + 0.5) * PI / ax;
        let seg_cfg = QuadConfig {
            rel_tol: 0.0,
            abs_tol: cfg.abs_tol * 0.3 / ((j + 1) * (j + 1)) as f64,
            max_subdivisions: 100,
        };
        let seg = quad::integrate_finite(|k| (k * ax).cos() * g(k), lo, hi, &seg_cfg)?;
        gk_error += seg.error_estimate;
        subdivisions += seg.subdivisions;
        euler.push(seg.value);
        lo = hi;
        let scale = cfg.abs_tol.max(cfg.rel_tol * euler.sum.abs());
        if j >= 8 && euler.last_increment.abs() <= 0.25 * scale {
            small_increments += 1;
            if small_increments >= 2 {
                converged = true;
                break;
            }
        } else {
            small_increments = 0;
        }
    }
    let value = euler.sum / PI;
    let error_estimate = (gk_error + 2.0 * euler.last_increment.abs()) / PI;
    if !converged {
        return Err(Error::QuadratureNoConvergence {
            value,
            error_estimate,
        });
    }
    Ok(QuadResult {
        value,
        error_estimate,
        subdivisions,
        converged: error_estimate <= cfg.abs_tol.max(cfg.rel_tol * value.abs()),
    })
}
