//! The single positive-x maximum of the kernel: location, value, the
//! time-invariant product of the two, and recovery of the order from a
//! measured product.
//!
//! For order `a` in (1, 2) the kernel `G_a(., t)` has exactly one maximum at
//! positive x, located at `x* = c_a^(1/a) t` where `c_a` is the positive
//! root of a quadratic in `(x/t)^a`. The product `p = x* G_a(x*, t)` does
//! not depend on t and grows strictly with the order, which makes it usable
//! as a fingerprint: [`recover_alpha`] inverts it by bisection.
//!
//! At `a = 1` the maximum degenerates to `x = 0` (Cauchy kernel) and the
//! product vanishes; at `a = 2` the kernel sharpens into a pair of moving
//! spikes and the product diverges.

use crate::error::{Error, Result};
use crate::green::{green_closed, KernelPoint, Order};
use crate::special::{cos_pi, sin_pi};

/// Closed-form description of the kernel maximum at one time instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtremumReport {
    /// Location of the maximum, `c_alpha^(1/a) t`.
    pub x_star: f64,
    /// Kernel value at the maximum.
    pub g_star: f64,
    /// Product `x_star * g_star`, independent of t.
    pub p: f64,
    /// The ratio `(x_star / t)^a`.
    pub c_alpha: f64,
}

// c_a and 1 - c_a together, both cancellation-free. With c = cos(pi a/2),
// s = sin(pi a/2) and D = sqrt(a^2 - s^2),
//
//   c_a     = (D - c) / (a + 1)
//   1 - c_a = 4 cos^2(pi a/4) / (a + 1 + c + D)
//
// where the second line follows from rationalising (a + 1 + c - D) and
// 1 + c = 2 cos^2(pi a/4). Every term on the right is nonnegative for a in
// [1, 2], so 1 - c_a keeps full relative accuracy even at a = 1.999 where
// the direct difference would lose seven digits.
fn c_alpha_parts(alpha: f64) -> (f64, f64) {
    let c = cos_pi(0.5 * alpha);
    let s = sin_pi(0.5 * alpha);
    let root = (alpha * alpha - s * s).sqrt();
    let q = cos_pi(0.25 * alpha);
    let value = (root - c) / (alpha + 1.0);
    let one_minus = 4.0 * q * q / (alpha + 1.0 + c + root);
    (value, one_minus)
}

/// The constant `c_a` locating the kernel maximum: `x* = c_a^(1/a) t`.
///
/// Exactly 0 at `a = 1` (the maximum sits at the origin) and exactly 1 at
/// `a = 2` (the spike moves with unit speed); strictly increasing in
/// between.
pub fn c_alpha(order: Order) -> f64 {
    c_alpha_parts(order.alpha()).0
}

/// Time-invariant product `p = x*(t) G_a(x*(t), t)` of the maximum location
/// and the maximum value.
///
/// Evaluated t-free from `c_a`: the kernel denominator
/// `1 + 2 c_a cos(pi a/2) + c_a^2` is regrouped as
/// `(1 - c_a)^2 + 4 c_a cos^2(pi a/4)`, again a sum of nonnegative terms.
/// The product vanishes at `a = 1`, increases strictly with the order, and
/// the `a = 2` limit reports `INFINITY`.
pub fn product_p(order: Order) -> f64 {
    let a = order.alpha();
    if a == 2.0 {
        return f64::INFINITY;
    }
    let (ca, one_minus) = c_alpha_parts(a);
    let s = sin_pi(0.5 * a);
    let q = cos_pi(0.25 * a);
    let denom = one_minus * one_minus + 4.0 * ca * q * q;
    ca * s / (std::f64::consts::PI * denom)
}

/// Location, value, and invariant product of the kernel maximum at time t.
///
/// Everything is closed-form; `g_star` is recovered as `p / x_star` so the
/// report stays accurate for orders close to 2 where direct pointwise
/// evaluation of the kernel is refused.
pub fn max_point(order: Order, t: f64) -> Result<ExtremumReport> {
    if !t.is_finite() || !(t > 0.0) {
        return Err(Error::InvalidInput("max_point requires finite t > 0"));
    }
    let a = order.alpha();
    if a == 1.0 {
        return Err(Error::DegenerateAtAlphaOne(
            "maximum sits at x = 0 with value 1/(pi t), not at positive x",
        ));
    }
    let (ca, _) = c_alpha_parts(a);
    let p = product_p(order);
    let x_star = ca.powf(a.recip()) * t;
    Ok(ExtremumReport {
        x_star,
        g_star: p / x_star,
        p,
        c_alpha: ca,
    })
}

// Central difference of the kernel along x with a fixed step; its sign
// tracks the sign of dG/dx away from the peak.
fn central_diff(order: Order, t: f64, x: f64, h: f64) -> f64 {
    let g = |x: f64| {
        green_closed(order, KernelPoint::new(x, t).expect("finite positive point"))
            .expect("order admitted by the kernel guard")
    };
    g(x + h) - g(x - h)
}

/// Locates the kernel maximum by direct search over [`green_closed`],
/// independently of the closed form in [`max_point`].
///
/// The peak always lies strictly inside `(0, t)`, rising on the left and
/// falling past `x = t`, so the sign of a central difference brackets it on
/// `[t e^-40, t]`. Bisection on that sign in log-x space localises the
/// peak, and a second pass with a finer difference step polishes it; the
/// result agrees with `max_point` to about `tol` relative (1e-8 is a safe
/// request for kernel-admissible orders).
pub fn argmax_numeric(order: Order, t: f64, tol: f64) -> Result<f64> {
    order.require_kernel()?;
    if !t.is_finite() || !(t > 0.0) {
        return Err(Error::InvalidInput("argmax_numeric requires finite t > 0"));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidInput("argmax_numeric requires tol > 0"));
    }
    if order.alpha() == 1.0 {
        return Err(Error::DegenerateAtAlphaOne(
            "no positive-x maximum to search for at order 1",
        ));
    }
    let bisect = |mut lo: f64, mut hi: f64, step: f64, width: f64| -> Result<(f64, f64)> {
        let d = |x: f64| central_diff(order, t, x, step * x);
        if !(d(lo) > 0.0 && d(hi) < 0.0) {
            return Err(Error::SearchNoBracket(
                "kernel slope does not change sign across the search interval",
            ));
        }
        while hi - lo > width * hi {
            let mid = (0.5 * (lo.ln() + hi.ln())).exp();
            if d(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok((lo, hi))
    };
    // Coarse pass: step 1e-5 of the local scale, down to a 1e-4 relative
    // bracket. Rewiden before the fine pass so it starts with a valid sign
    // change even when the coarse sign flip is offset by its O(step^2) bias.
    let (lo, hi) = bisect(t * (-40.0f64).exp(), t, 1e-5, 1e-4)?;
    let (lo, hi) = bisect(lo * (1.0 - 1e-3), t.min(hi * (1.0 + 1e-3)), 1e-7, 0.01 * tol)?;
    Ok(0.5 * (lo + hi))
}

/// Recovers the order from a measured product `p = x* G_a(x*, t)` by
/// bisection, using the strict monotonicity of [`product_p`].
///
/// The search domain is clipped to `[1 + 1e-9, 2 - 1e-9]`: the product is 0
/// and infinite at the endpoints, so the clip keeps the bisection inside
/// floating-point-representable territory. Products below the left edge
/// round to the smallest admissible order.
pub fn recover_alpha(p_measured: f64, tol: f64) -> Result<Order> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput("recover_alpha requires tol > 0"));
    }
    const LO: f64 = 1.0 + 1e-9;
    const HI: f64 = 2.0 - 1e-9;
    if !p_measured.is_finite() || !(p_measured > 0.0) {
        return Err(Error::OutOfRange(format!(
            "product {p_measured} is not a positive finite number"
        )));
    }
    let p_hi = product_p(Order::new(HI).expect("in range"));
    if p_measured > p_hi {
        return Err(Error::OutOfRange(format!(
            "product {p_measured} exceeds the order-(2 - 1e-9) value {p_hi:.6e}"
        )));
    }
    let (mut lo, mut hi) = (LO, HI);
    if p_measured <= product_p(Order::new(LO).expect("in range")) {
        return Order::new(LO);
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if product_p(Order::new(mid).expect("in range")) < p_measured {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Order::new(0.5 * (lo + hi))
}

/// Minimises the maximum amplitude `m_a = G_a(x*, 1)` over the order and
/// returns `(alpha_min, m_min)`.
///
/// The amplitude falls from `1/pi` at order 1 to a single interior minimum
/// near 1.13 and then grows without bound towards order 2. Golden-section
/// search over [1.001, 1.999] narrows the bracket to `tol` in the order,
/// and a three-point parabolic fit through the final bracket supplies the
/// returned vertex.
pub fn amplitude_minimum(tol: f64) -> Result<(f64, f64)> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput("amplitude_minimum requires tol > 0"));
    }
    let m = |a: f64| {
        max_point(Order::new(a).expect("in range"), 1.0)
            .expect("order strictly inside (1, 2)")
            .g_star
    };
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (1.001, 1.999);
    let (end_lo, end_hi) = (m(a), m(b));
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let (mut f1, mut f2) = (m(x1), m(x2));
    while b - a > tol {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = m(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = m(x2);
        }
    }
    // Parabola through the bracket ends and midpoint; the vertex lands well
    // inside the bracket because the amplitude is smooth and convex here.
    let (xa, xc) = (a, b);
    let xb = 0.5 * (a + b);
    let (fa, fb, fc) = (m(xa), m(xb), m(xc));
    if fb > end_lo.min(end_hi) {
        return Err(Error::SearchNoBracket(
            "amplitude has no interior minimum in (1.001, 1.999)",
        ));
    }
    let denom = (xb - xa) * (fb - fc) - (xb - xc) * (fb - fa);
    let alpha_min = if denom == 0.0 {
        xb
    } else {
        let num = (xb - xa) * (xb - xa) * (fb - fc) - (xb - xc) * (xb - xc) * (fb - fa);
        xb - 0.5 * num / denom
    };
    Ok((alpha_min, m(alpha_min)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order(alpha: f64) -> Order {
        Order::new(alpha).unwrap()
    }

    // alpha, c_alpha, c_alpha^(1/alpha), p, G(x*, 1); 50-digit arithmetic.
    const MAX_TABLE: [(f64, f64, f64, f64, f64); 9] = [
        (
            1.05,
            0.19906777225606530,
            0.21497198328391840,
            0.062644281483543150,
            0.29140672438606760,
        ),
        (
            1.13,
            0.35996352016760440,
            0.40486328858679290,
            0.11407217146093140,
            0.28175479149791350,
        ),
        (
            1.3,
            0.60896520891510080,
            0.68281320094059750,
            0.21116312869486180,
            0.30925460785464850,
        ),
        (
            1.5,
            0.81199297468753710,
            0.87036519258771610,
            0.35765603257902080,
            0.41092639690204060,
        ),
        (
            1.7,
            0.93676501744386350,
            0.96230369934231260,
            0.65019600935783370,
            0.67566612266191090,
        ),
        (
            1.9,
            0.99353015776011330,
            0.99658958536058500,
            2.0188010457218300,
            2.0257095552442380,
        ),
        (
            1.95,
            0.99841975475315870,
            0.99918930563587150,
            4.0491211668700740,
            4.0524064299239710,
        ),
        (
            1.98,
            0.99975080343524790,
            0.99987413538657710,
            10.130647391931476,
            10.131922642458099,
        ),
        (
            1.999,
            0.99999938284136760,
            0.99999969126626930,
            202.64229433676410,
            202.64235689929490,
        ),
    ];

    #[test]
    fn c_alpha_endpoints_are_exact() {
        assert_eq!(c_alpha(order(1.0)), 0.0);
        assert_eq!(c_alpha(order(2.0)), 1.0);
    }

    #[test]
    fn c_alpha_matches_references() {
        for &(a, ca, _, _, _) in &MAX_TABLE {
            let got = c_alpha(order(a));
            assert!(
                (got - ca).abs() <= 5e-15 * ca,
                "c_alpha({a}) = {got}, want {ca}"
            );
        }
    }

    #[test]
    fn product_matches_references() {
        assert_eq!(product_p(order(1.0)), 0.0);
        assert_eq!(product_p(order(2.0)), f64::INFINITY);
        for &(a, _, _, p, _) in &MAX_TABLE {
            let got = product_p(order(a));
            assert!(
                (got - p).abs() <= 1e-13 * p,
                "product_p({a}) = {got}, want {p}"
            );
        }
    }

    #[test]
    fn max_point_matches_references() {
        for &(a, ca, vp, p, gs) in &MAX_TABLE {
            let r = max_point(order(a), 1.0).unwrap();
            assert!((r.c_alpha - ca).abs() <= 5e-15 * ca);
            assert!((r.x_star - vp).abs() <= 1e-13 * vp);
            assert!((r.p - p).abs() <= 1e-13 * p);
            assert!((r.g_star - gs).abs() <= 1e-13 * gs);
        }
    }

    #[test]
    fn report_is_self_consistent_and_time_invariant() {
        for &(a, _, _, _, _) in &MAX_TABLE {
            let o = order(a);
            let r1 = max_point(o, 1.0).unwrap();
            for t in [0.1, 2.0, 10.0] {
                let rt = max_point(o, t).unwrap();
                assert_eq!(rt.p, r1.p, "p must not depend on t");
                assert!((rt.x_star - t * r1.x_star).abs() <= 1e-15 * rt.x_star);
                // The (x*, G*) locus is the hyperbola x G = p.
                assert!(
                    (rt.x_star * rt.g_star - rt.p).abs() <= 1e-14 * rt.p,
                    "hyperbola violated at a = {a}, t = {t}"
                );
            }
        }
    }

    #[test]
    fn g_star_agrees_with_pointwise_kernel() {
        for a in [1.05, 1.3, 1.5, 1.9, 1.999] {
            let o = order(a);
            for t in [0.3, 1.0, 4.0] {
                let r = max_point(o, t).unwrap();
                let direct =
                    green_closed(o, KernelPoint::new(r.x_star, t).unwrap()).unwrap();
                assert!(
                    (r.g_star - direct).abs() <= 1e-12 * direct,
                    "g_star mismatch at a = {a}, t = {t}: {} vs {direct}",
                    r.g_star
                );
            }
        }
    }

    #[test]
    fn product_equals_kernel_at_unit_distance_and_phase_time() {
        // p = G_a(1, c_a^(1/a)): evaluate the kernel at x = 1 and t equal to
        // the maximum speed.
        for a in [1.1, 1.5, 1.9] {
            let o = order(a);
            let vp = c_alpha(o).powf(1.0 / a);
            let g = green_closed(o, KernelPoint::new(1.0, vp).unwrap()).unwrap();
            let p = product_p(o);
            assert!((p - g).abs() <= 1e-12 * p, "identity fails at a = {a}");
        }
    }

    #[test]
    fn slope_changes_sign_across_the_maximum() {
        for a in [1.1, 1.5, 1.9] {
            let o = order(a);
            let x = max_point(o, 1.0).unwrap().x_star;
            let h = 1e-6 * x;
            assert!(central_diff(o, 1.0, 0.9 * x, h) > 0.0);
            assert!(central_diff(o, 1.0, 1.1 * x, h) < 0.0);
        }
    }

    #[test]
    fn argmax_agrees_with_closed_form() {
        for (a, t) in [(1.1, 0.5), (1.5, 1.0), (1.9, 1.0), (1.999, 1.0), (1.3, 7.0)] {
            let o = order(a);
            let want = max_point(o, t).unwrap().x_star;
            let got = argmax_numeric(o, t, 1e-9).unwrap();
            assert!(
                (got - want).abs() <= 1e-8 * want,
                "argmax({a}, {t}) = {got}, want {want}"
            );
        }
    }

    #[test]
    fn argmax_rejects_degenerate_and_bad_input() {
        assert!(matches!(
            argmax_numeric(order(1.0), 1.0, 1e-8),
            Err(Error::DegenerateAtAlphaOne(_))
        ));
        assert!(argmax_numeric(order(1.5), 0.0, 1e-8).is_err());
        assert!(argmax_numeric(order(1.5), 1.0, 0.0).is_err());
        assert!(matches!(
            max_point(order(1.0), 1.0),
            Err(Error::DegenerateAtAlphaOne(_))
        ));
    }

    #[test]
    fn product_is_strictly_increasing() {
        let mut last = product_p(order(1.001));
        for i in 1..33 {
            let a = 1.001 + (1.999 - 1.001) * i as f64 / 32.0;
            let p = product_p(order(a));
            assert!(p > last, "product not increasing at a = {a}");
            last = p;
        }
    }

    #[test]
    fn recover_roundtrips() {
        for a in [1.05, 1.3, 1.5, 1.9, 1.98] {
            let p = product_p(order(a));
            let got = recover_alpha(p, 1e-10).unwrap().alpha();
            assert!(
                (got - a).abs() <= 1e-8,
                "recover_alpha(product_p({a})) = {got}"
            );
        }
    }

    #[test]
    fn recover_rejects_out_of_range_products() {
        assert!(matches!(recover_alpha(0.0, 1e-8), Err(Error::OutOfRange(_))));
        assert!(matches!(
            recover_alpha(-1.0, 1e-8),
            Err(Error::OutOfRange(_))
        ));
        assert!(matches!(
            recover_alpha(f64::NAN, 1e-8),
            Err(Error::OutOfRange(_))
        ));
        assert!(matches!(
            recover_alpha(3.0e8, 1e-8),
            Err(Error::OutOfRange(_))
        ));
        // Tiny products clip to the left edge of the search domain.
        assert!(recover_alpha(1e-300, 1e-8).unwrap().alpha() - 1.0 < 1e-8);
    }

    #[test]
    fn amplitude_minimum_matches_reference() {
        // 50-digit golden search oracle: (1.1299561723740004, 0.28175478922086385).
        let (alpha_min, m_min) = amplitude_minimum(1e-6).unwrap();
        assert!(
            (alpha_min - 1.1299561723740004).abs() <= 1e-7,
            "alpha_min = {alpha_min}"
        );
        assert!(
            (m_min - 0.28175478922086385).abs() <= 1e-10 * m_min,
            "m_min = {m_min}"
        );
        // Shallower than the order-1 boundary value 1/pi.
        assert!(m_min < 1.0 / std::f64::consts::PI);
    }
}
