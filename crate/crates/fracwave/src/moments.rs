//! One-sided moments and centers of the kernel, and the damped-wave
//! velocities derived from them.
//!
//! The kernel is even in x, so every full-line odd moment vanishes by
//! symmetry; following the damped-wave reading of `G_a` all centers here
//! are taken one-sided, over x in (0, inf). The fractional moments admit a
//! closed form through the Mellin transform of the auxiliary kernel,
//!
//! ```text
//! int_0^inf L_a(tau) tau^(s-1) dtau = (1/a) sin(pi s/2) / sin(pi s/a),
//! ```
//!
//! finite exactly for |s| < a, which turns every center below into either a
//! pure formula or a ratio of two squared-kernel quadratures.
//!
//! Six velocities describe how the damped wave travels: the phase velocity
//! of the maximum, the gravity-center velocity, the pulse velocity of the
//! mass center, the Smith centrovelocity, and the first and second
//! centrovelocities (which coincide with the Smith and pulse velocities
//! respectively). For orders strictly between 1 and 2 they are all constant
//! in time and ordered `v_c < v_p < v_m < v_g`; all tend to 1 at order 2.

use std::f64::consts::FRAC_2_PI;

use crate::error::{Error, Result};
use crate::extrema;
use crate::green::Order;
use crate::quad::{integrate_lalpha_power, QuadConfig};
use crate::special::sin_pi;

/// Moment exponent, validated against the order it will be used with:
/// the one-sided moment of exponent beta is finite only for |beta| < a.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentOrder {
    beta: f64,
}

impl MomentOrder {
    pub fn new(beta: f64, order: Order) -> Result<Self> {
        check_window(beta, order)?;
        Ok(MomentOrder { beta })
    }

    pub fn beta(self) -> f64 {
        self.beta
    }
}

fn check_window(beta: f64, order: Order) -> Result<()> {
    let a = order.alpha();
    if !(beta.abs() < a) {
        return Err(Error::MomentOutOfRange {
            beta,
            lo: -a,
            hi: a,
        });
    }
    Ok(())
}

/// Mellin transform of the auxiliary kernel,
/// `(1/a) sin(pi s/2) / sin(pi s/a)` on the strip |s| < a, with the
/// removable point s = 0 evaluated as its limit 1/2.
pub fn mellin_laux(order: Order, s: f64) -> Result<f64> {
    check_window(s, order)?;
    if s == 0.0 {
        return Ok(0.5);
    }
    let a = order.alpha();
    Ok(sin_pi(0.5 * s) / (a * sin_pi(s / a)))
}

/// One-sided fractional moment `int_0^inf x^beta G_a(x, t) dx`
/// `= t^beta sin(pi beta/2) / (a sin(pi beta/a))`.
///
/// The zeroth moment is the analytic limit 1/2: the kernel carries half of
/// its unit mass on each half line.
pub fn moment_one_sided(order: Order, m: MomentOrder, t: f64) -> Result<f64> {
    if !t.is_finite() || !(t > 0.0) {
        return Err(Error::InvalidInput("moment requires finite t > 0"));
    }
    Ok(t.powf(m.beta) * mellin_laux(order, m.beta)?)
}

/// Center of gravity of the one-sided kernel mass at time t,
/// `2t / (a sin(pi/a))`.
///
/// Undefined at order 1, where the first moment of the Cauchy kernel
/// diverges.
pub fn gravity_center(order: Order, t: f64) -> Result<f64> {
    if !t.is_finite() || !(t > 0.0) {
        return Err(Error::InvalidInput("gravity_center requires finite t > 0"));
    }
    Ok(velocity_gravity(order)? * t)
}

/// Location of the mass center (median-weighted by the squared kernel) at
/// time t: `velocity_pulse(a) * t`.
pub fn mass_center(order: Order, t: f64, cfg: &QuadConfig) -> Result<f64> {
    if !t.is_finite() || !(t > 0.0) {
        return Err(Error::InvalidInput("mass_center requires finite t > 0"));
    }
    Ok(velocity_pulse(order, cfg)? * t)
}

/// Time at which the energy centroid passes the station x:
/// `x / velocity_centro(a)`.
///
/// Undefined at order 1, where the centrovelocity vanishes and the energy
/// centroid never arrives.
pub fn energy_location(order: Order, x: f64, cfg: &QuadConfig) -> Result<f64> {
    if !x.is_finite() || !(x > 0.0) {
        return Err(Error::InvalidInput(
            "energy_location requires finite x > 0",
        ));
    }
    Ok(x / velocity_centro(order, cfg)?)
}

/// Velocity of the kernel maximum, `c_a^(1/a)`.
///
/// Zero at order 1 (the maximum never leaves the origin) and exactly 1 at
/// order 2.
pub fn velocity_phase(order: Order) -> f64 {
    extrema::c_alpha(order).powf(order.alpha().recip())
}

/// Velocity of the gravity center, `2 / (a sin(pi/a))`.
///
/// Diverges as the order approaches 1 from above; undefined at exactly 1.
pub fn velocity_gravity(order: Order) -> Result<f64> {
    let a = order.alpha();
    if a == 1.0 {
        return Err(Error::UndefinedAtAlphaOne(
            "the first moment of the Cauchy kernel diverges",
        ));
    }
    Ok(2.0 / (a * sin_pi(a.recip())))
}

/// Pulse velocity: the mass-center speed, computed as the ratio of the
/// squared-kernel power integrals with exponents -1 and -2.
///
/// At exactly order 1 the closed form 2/pi is returned instead of running
/// the quadratures (beta = -1 is a removable point of the order-1 closed
/// form and the ratio is known exactly).
pub fn velocity_pulse(order: Order, cfg: &QuadConfig) -> Result<f64> {
    if order.alpha() == 1.0 {
        return Ok(FRAC_2_PI);
    }
    let num = integrate_lalpha_power(order, -1.0, cfg)?;
    let den = integrate_lalpha_power(order, -2.0, cfg)?;
    Ok(num.value / den.value)
}

/// Smith centrovelocity: the energy-centroid speed, computed as the ratio
/// of the squared-kernel power integrals with exponents 0 and 1.
///
/// Undefined at order 1, where the denominator integral diverges (its
/// exponent sits on the convergence-window edge); the value tends to 0 as
/// the order falls to 1.
pub fn velocity_centro(order: Order, cfg: &QuadConfig) -> Result<f64> {
    if order.alpha() == 1.0 {
        return Err(Error::UndefinedAtAlphaOne(
            "the energy-centroid denominator integral diverges",
        ));
    }
    let num = integrate_lalpha_power(order, 0.0, cfg)?;
    let den = integrate_lalpha_power(order, 1.0, cfg)?;
    Ok(num.value / den.value)
}

/// The six damped-wave velocities for one order.
///
/// `v_1` and `v_2` are aliases produced by the same computation as `v_c`
/// and `v_m` respectively, so the pairs compare bit-equal; they are kept as
/// separate fields because the six names answer different questions even
/// though only four values are distinct.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VelocityReport {
    /// Velocity of the kernel maximum.
    pub v_p: f64,
    /// Gravity-center velocity; `None` at order 1 where it is undefined.
    pub v_g: Option<f64>,
    /// Pulse (mass-center) velocity.
    pub v_m: f64,
    /// Second centrovelocity, equal to `v_m`.
    pub v_2: f64,
    /// Smith centrovelocity.
    pub v_c: f64,
    /// First centrovelocity, equal to `v_c`.
    pub v_1: f64,
}

/// Computes all six velocities at once.
///
/// At order 1 the degenerate limits are reported: `v_p = v_c = v_1 = 0`,
/// `v_m = v_2 = 2/pi`, and `v_g` is flagged `None`. For orders strictly
/// between 1 and 2 the report satisfies `v_c < v_p < v_m < v_g`.
pub fn velocity_report(order: Order, cfg: &QuadConfig) -> Result<VelocityReport> {
    if order.alpha() == 1.0 {
        return Ok(VelocityReport {
            v_p: 0.0,
            v_g: None,
            v_m: FRAC_2_PI,
            v_2: FRAC_2_PI,
            v_c: 0.0,
            v_1: 0.0,
        });
    }
    let v_m = velocity_pulse(order, cfg)?;
    let v_c = velocity_centro(order, cfg)?;
    Ok(VelocityReport {
        v_p: velocity_phase(order),
        v_g: Some(velocity_gravity(order)?),
        v_m,
        v_2: v_m,
        v_c,
        v_1: v_c,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::green::{green_closed, l_aux, KernelPoint};
    use crate::quad::integrate_semi_infinite;

    fn order(alpha: f64) -> Order {
        Order::new(alpha).unwrap()
    }

    fn moment(alpha: f64, beta: f64, t: f64) -> f64 {
        let o = order(alpha);
        moment_one_sided(o, MomentOrder::new(beta, o).unwrap(), t).unwrap()
    }

    #[test]
    fn mellin_matches_references() {
        // 50-digit substitution into the closed form.
        let cases = [
            (1.5, 0.5, 0.544331053951817355154952016601),
            (1.5, -1.0, 0.769800358919501019345531707336),
            (1.2, 1.1, 3.180112255018127792659402883),
            (1.9, -1.7, 0.735887769909928632198910313277),
        ];
        for (a, s, want) in cases {
            let got = mellin_laux(order(a), s).unwrap();
            assert!(
                (got - want).abs() <= 1e-14 * want.abs(),
                "mellin({a}, {s}) = {got}, want {want}"
            );
        }
        assert_eq!(mellin_laux(order(1.5), 0.0).unwrap(), 0.5);
    }

    #[test]
    fn mellin_rejects_outside_strip() {
        assert!(matches!(
            mellin_laux(order(1.5), 1.5),
            Err(Error::MomentOutOfRange { .. })
        ));
        assert!(matches!(
            mellin_laux(order(1.5), -1.6),
            Err(Error::MomentOutOfRange { .. })
        ));
        assert!(mellin_laux(order(1.5), 1.499).is_ok());
    }

    #[test]
    fn mellin_agrees_with_direct_quadrature() {
        let cfg = QuadConfig::default();
        for (a, s) in [
            (1.2, -1.05),
            (1.5, -1.35),
            (1.5, 0.5),
            (1.8, 1.6),
            (1.9, -1.7),
            (1.0, 0.3),
        ] {
            let o = order(a);
            let closed = mellin_laux(o, s).unwrap();
            let quad = integrate_semi_infinite(
                |tau: f64| tau.powf(s - 1.0) * l_aux(o, tau).unwrap(),
                s - 1.0 + a,
                s - 1.0 - a,
                &cfg,
            )
            .unwrap();
            assert!(
                (quad.value - closed).abs() <= 1e-9 * closed.abs(),
                "strip point ({a}, {s}): quadrature {} vs closed {closed}",
                quad.value
            );
        }
    }

    #[test]
    fn moment_matches_references() {
        assert_eq!(moment(1.5, 0.0, 7.0), 0.5);
        let cases = [
            (1.5, 1.0, 1.0, 0.769800358919501019345531707336),
            (1.5, 0.5, 2.0, 0.769800358919501019345531707336),
            (1.3, -1.2, 0.7, 4.69001464831412740554924548654),
            (1.95, 1.9, 1.0, 0.996970591192346538370062438481),
        ];
        for (a, beta, t, want) in cases {
            let got = moment(a, beta, t);
            assert!(
                (got - want).abs() <= 1e-14 * want,
                "moment({a}, {beta}, {t}) = {got}, want {want}"
            );
        }
    }

    #[test]
    fn moment_agrees_with_kernel_quadrature() {
        let cfg = QuadConfig::default();
        for a in [1.2, 1.5, 1.8] {
            let o = order(a);
            for beta in [0.25, 0.5, 1.0] {
                let closed = moment(a, beta, 1.0);
                // x^beta G_a(x, 1) = x^(beta - 1) L_a(1/x).
                let quad = integrate_semi_infinite(
                    |x: f64| x.powf(beta - 1.0) * l_aux(o, 1.0 / x).unwrap(),
                    beta - 1.0 + a,
                    beta - 1.0 - a,
                    &cfg,
                )
                .unwrap();
                assert!(
                    (quad.value - closed).abs() <= 1e-8 * closed,
                    "moment ({a}, {beta}): quadrature {} vs closed {closed}",
                    quad.value
                );
            }
        }
    }

    #[test]
    fn moment_rejects_outside_window() {
        let o = order(1.5);
        assert!(matches!(
            MomentOrder::new(1.5, o),
            Err(Error::MomentOutOfRange { .. })
        ));
        assert!(matches!(
            MomentOrder::new(-2.0, o),
            Err(Error::MomentOutOfRange { .. })
        ));
        let m = MomentOrder::new(1.49, o).unwrap();
        assert_eq!(m.beta(), 1.49);
        assert!(moment_one_sided(o, m, 0.0).is_err());
        assert!(moment_one_sided(o, m, f64::NAN).is_err());
    }

    #[test]
    fn gravity_center_closed_forms() {
        assert_eq!(gravity_center(order(2.0), 1.0).unwrap(), 1.0);
        let got = gravity_center(order(1.5), 1.0).unwrap();
        assert!((got - 1.539600717839002).abs() <= 1e-14 * got);
        // Linear in t.
        let at2 = gravity_center(order(1.5), 2.0).unwrap();
        assert_eq!(at2, 2.0 * got);
        assert!(matches!(
            gravity_center(order(1.0), 1.0),
            Err(Error::UndefinedAtAlphaOne(_))
        ));
    }

    #[test]
    fn gravity_center_is_first_over_zeroth_moment() {
        for a in [1.2, 1.5, 1.8] {
            let o = order(a);
            for t in [0.5, 1.0, 2.0] {
                let gc = gravity_center(o, t).unwrap();
                let ratio = moment(a, 1.0, t) / moment(a, 0.0, t);
                assert!(
                    (gc - ratio).abs() <= 1e-12 * gc,
                    "identity fails at a = {a}, t = {t}"
                );
            }
        }
    }

    #[test]
    fn phase_and_gravity_velocities() {
        assert_eq!(velocity_phase(order(1.0)), 0.0);
        assert_eq!(velocity_phase(order(2.0)), 1.0);
        let vp = velocity_phase(order(1.5));
        assert!((vp - 0.87036519258771610).abs() <= 1e-14);
        assert_eq!(velocity_gravity(order(2.0)).unwrap(), 1.0);
        let vg = velocity_gravity(order(1.5)).unwrap();
        assert!((vg - 1.539600717839002).abs() <= 1e-14 * vg);
        assert!(velocity_gravity(order(1.01)).unwrap() > 10.0);
        assert!(velocity_gravity(order(1.0)).is_err());
    }

    #[test]
    fn quadrature_velocities_match_references() {
        // Tail-resolved 20-digit quadrature oracle (numeric head on (0, 10)
        // plus an analytic power-series tail).
        let table = [
            (1.1, 0.72115914419063675242, 0.16716563338338296246),
            (1.3, 0.84529460526344646067, 0.49580085803727894348),
            (1.5, 0.92518350054922500983, 0.75),
            (1.7, 0.97354740058682343069, 0.9130595607818166418),
            (1.9, 0.99699840760629948566, 0.99063238835794256599),
            (1.95, 0.99924048772137156453, 0.9976731939033165142),
        ];
        let cfg = QuadConfig::default();
        for (a, vm, vc) in table {
            let o = order(a);
            let got_m = velocity_pulse(o, &cfg).unwrap();
            let got_c = velocity_centro(o, &cfg).unwrap();
            assert!(
                (got_m - vm).abs() <= 1e-9 * vm,
                "v_m({a}) = {got_m}, want {vm}"
            );
            assert!(
                (got_c - vc).abs() <= 1e-9 * vc,
                "v_c({a}) = {got_c}, want {vc}"
            );
        }
    }

    #[test]
    fn order_one_velocity_limits() {
        let cfg = QuadConfig::default();
        // Closed form is authoritative at exactly 1...
        assert_eq!(velocity_pulse(order(1.0), &cfg).unwrap(), FRAC_2_PI);
        // ...and the quadrature ratio reproduces it when run directly.
        let num = integrate_lalpha_power(order(1.0), -1.0, &cfg).unwrap();
        let den = integrate_lalpha_power(order(1.0), -2.0, &cfg).unwrap();
        assert!((num.value / den.value - FRAC_2_PI).abs() <= 1e-9);
        assert!(matches!(
            velocity_centro(order(1.0), &cfg),
            Err(Error::UndefinedAtAlphaOne(_))
        ));
    }

    #[test]
    fn centers_move_at_their_velocities() {
        let cfg = QuadConfig::default();
        for a in [1.2, 1.6] {
            let o = order(a);
            let diff_g = (gravity_center(o, 2.0).unwrap() - gravity_center(o, 0.5).unwrap()) / 1.5;
            assert!((diff_g - velocity_gravity(o).unwrap()).abs() <= 1e-9);
            let diff_m =
                (mass_center(o, 2.0, &cfg).unwrap() - mass_center(o, 0.5, &cfg).unwrap()) / 1.5;
            assert!((diff_m - velocity_pulse(o, &cfg).unwrap()).abs() <= 1e-9);
            let el = energy_location(o, 1.0, &cfg).unwrap();
            assert!((el * velocity_centro(o, &cfg).unwrap() - 1.0).abs() <= 1e-12);
            assert!(
                (energy_location(o, 2.0, &cfg).unwrap() - 2.0 * el).abs() <= 1e-12 * el
            );
        }
        assert!(matches!(
            energy_location(order(1.0), 1.0, &QuadConfig::default()),
            Err(Error::UndefinedAtAlphaOne(_))
        ));
    }

    #[test]
    fn report_aliases_and_order_one_degeneracy() {
        let cfg = QuadConfig::default();
        let r = velocity_report(order(1.5), &cfg).unwrap();
        assert_eq!(r.v_1, r.v_c);
        assert_eq!(r.v_2, r.v_m);
        let vg = r.v_g.unwrap();
        assert!(r.v_c < r.v_p && r.v_p < r.v_m && r.v_m < vg);
        let r1 = velocity_report(order(1.0), &cfg).unwrap();
        assert_eq!(r1.v_p, 0.0);
        assert_eq!(r1.v_g, None);
        assert_eq!(r1.v_m, FRAC_2_PI);
        assert_eq!(r1.v_2, FRAC_2_PI);
        assert_eq!(r1.v_c, 0.0);
        assert_eq!(r1.v_1, 0.0);
    }

    #[test]
    fn velocities_are_ordered_and_flatten_towards_order_two() {
        let cfg = QuadConfig::default();
        for a in [1.1, 1.3, 1.5, 1.7, 1.9] {
            let r = velocity_report(order(a), &cfg).unwrap();
            let vg = r.v_g.unwrap();
            assert!(
                r.v_c < r.v_p && r.v_p < r.v_m && r.v_m < vg,
                "ordering fails at a = {a}: {r:?}"
            );
        }
        let r = velocity_report(order(1.9), &cfg).unwrap();
        for v in [r.v_p, r.v_g.unwrap(), r.v_m, r.v_c] {
            assert!((0.8..=1.2).contains(&v), "near-2 flattening: {v}");
        }
    }

    #[test]
    fn velocities_are_monotone_in_the_order() {
        let cfg = QuadConfig::default();
        let mut last: Option<(f64, f64, f64, f64)> = None;
        for i in 0..17 {
            let a = 1.1 + 0.05 * i as f64;
            let r = velocity_report(order(a), &cfg).unwrap();
            let cur = (r.v_p, r.v_m, r.v_c, r.v_g.unwrap());
            if let Some(prev) = last {
                assert!(cur.0 > prev.0, "v_p not increasing at a = {a}");
                assert!(cur.1 > prev.1, "v_m not increasing at a = {a}");
                assert!(cur.2 > prev.2, "v_c not increasing at a = {a}");
                assert!(cur.3 < prev.3, "v_g not decreasing at a = {a}");
            }
            last = Some(cur);
        }
    }

    #[test]
    fn gravity_velocity_bounds_pointwise_kernel_mean() {
        // Spot check that the closed-form gravity center is consistent with
        // a direct first-moment quadrature of the kernel itself.
        let o = order(1.5);
        let cfg = QuadConfig::default();
        let first = integrate_semi_infinite(
            |x: f64| x * green_closed(o, KernelPoint::new(x, 1.0).unwrap()).unwrap(),
            1.5,
            -1.5,
            &cfg,
        )
        .unwrap();
        let gc = gravity_center(o, 1.0).unwrap();
        assert!((2.0 * first.value - gc).abs() <= 1e-9 * gc);
    }
}
