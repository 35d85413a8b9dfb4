//! Shared reference computations for the integration tests.
//!
//! The Mittag-Leffler reference here is deliberately written against the
//! MPFR floats from `rug` and shares no code with the crate's evaluator:
//! the defining series is summed as two nonnegative partial sums (even and
//! odd terms) at a precision that grows with the cancellation, and beyond
//! the affordable range the reflected power tail is summed to its smallest
//! term and combined with the exact saddle-pair exponential. Both arms
//! overlap for y = x^(1/a) in [100, 120], where they can be played against
//! each other.

use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

/// Largest y = x^(1/a) evaluated through the series arm.
pub const SERIES_ARM_YMAX: f64 = 120.0;

/// Reference value of E_a(-x) for 1 <= a < 2, x >= 0.
pub fn ml_neg_ref(a: f64, x: f64) -> f64 {
    let (series, tail) = ml_neg_ref_arms(a, x);
    if x.powf(1.0 / a) <= SERIES_ARM_YMAX {
        series.expect("series arm applicable")
    } else {
        tail.expect("tail arm applicable")
    }
}

/// Both arms where they apply: the series value for y <= SERIES_ARM_YMAX
/// and the tail-plus-saddle value for y >= 100 (where the tail truncation
/// floor exp(-y) already sits more than 120 bits below the result).
pub fn ml_neg_ref_arms(a: f64, x: f64) -> (Option<f64>, Option<f64>) {
    assert!((1.0..2.0).contains(&a) && x.is_finite() && x >= 0.0);
    if x == 0.0 {
        return (Some(1.0), None);
    }
    let y = x.powf(1.0 / a);
    let series = (y <= SERIES_ARM_YMAX).then(|| series_arm(a, x, y));
    let tail = (y >= 100.0).then(|| tail_arm(a, x));
    (series, tail)
}

/// Defining series `sum_k (-x)^k / Gamma(1 + a k)`. Even and odd terms go
/// into separate nonnegative accumulators so the working precision only
/// has to absorb one final subtraction; the extreme term is ~exp(y), so
/// the cancellation costs ~1.45 y bits.
fn series_arm(a: f64, x: f64, y: f64) -> f64 {
    let prec = 330 + (2.2 * y).ceil() as u32;
    let a_mp = Float::with_val(prec, a);
    let x_mp = Float::with_val(prec, x);
    let mut even = Float::with_val(prec, 1); // k = 0
    let mut odd = Float::with_val(prec, 0);
    let mut xpow = Float::with_val(prec, 1);
    let mut top = 1i32;
    for k in 1..200_000u32 {
        xpow *= &x_mp;
        let mut g_arg = Float::with_val(prec, &a_mp * k);
        g_arg += 1u32;
        let term = Float::with_val(prec, &xpow / g_arg.gamma());
        let exp = term.get_exp();
        if k % 2 == 0 {
            even += term;
        } else {
            odd += term;
        }
        match exp {
            None => break,
            Some(e) => {
                top = top.max(e);
                // Terms decrease monotonically once a k > y; stop when the
                // remaining tail sits ~180 bits below the final difference.
                if a * f64::from(k) > y && e < top - (prec as i32) + 140 {
                    break;
                }
            }
        }
    }
    Float::with_val(prec, &even - &odd).to_f64()
}

/// Reflected power tail plus saddle pair,
/// `(2/a) exp(y cos(pi/a)) cos(y sin(pi/a))
///  - sum_k (-x)^{-k} / Gamma(1 - a k)`,
/// with `1/Gamma(1 - a k) = sin(pi a k) Gamma(a k) / pi` so the poles of
/// Gamma at integer `a k` become exact zeros of the tail term. The tail is
/// truncated at its smallest term, and the first omitted term is checked
/// to sit at least 120 bits below the sum.
fn tail_arm(a: f64, x: f64) -> f64 {
    const PREC: u32 = 512;
    let a_mp = Float::with_val(PREC, a);
    let x_mp = Float::with_val(PREC, x);
    let pi = Float::with_val(PREC, Constant::Pi);
    let x_inv = Float::with_val(PREC, 1) / &x_mp;

    let mut sum = Float::with_val(PREC, 0);
    let mut xpow = Float::with_val(PREC, 1); // x^-k
    let mut prev_env = i32::MAX;
    let mut bound_env = i32::MIN;
    for k in 1..10_000u32 {
        xpow *= &x_inv;
        let ak = Float::with_val(PREC, &a_mp * k);
        let envelope = Float::with_val(PREC, ak.gamma_ref()) * &xpow;
        let env_exp = envelope.get_exp().expect("finite tail envelope");
        bound_env = env_exp;
        if env_exp >= prev_env {
            break; // smallest term reached: optimal truncation point
        }
        prev_env = env_exp;
        let sine = Float::with_val(PREC, &pi * &ak).sin();
        let signed = if k % 2 == 0 { -envelope } else { envelope };
        sum += signed * sine / &pi;
    }

    let a_inv = Float::with_val(PREC, &a_mp).recip();
    let y = Float::with_val(PREC, (&x_mp).pow(&a_inv));
    let angle = Float::with_val(PREC, &pi / &a_mp);
    let decay = Float::with_val(PREC, angle.cos_ref()) * &y;
    let phase = Float::with_val(PREC, angle.sin_ref()) * &y;
    let saddle = Float::with_val(PREC, decay.exp_ref())
        * Float::with_val(PREC, phase.cos_ref())
        * 2u32
        / &a_mp;
    let total = Float::with_val(PREC, &sum + &saddle);

    let total_exp = total.get_exp().expect("nonzero tail value");
    assert!(
        bound_env < total_exp - 120,
        "tail truncation too coarse: a={a} x={x}"
    );
    total.to_f64()
}

#[allow(dead_code)]
pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}
