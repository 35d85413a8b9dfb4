//! Command-line front end: evaluates the kernel, emits figure-ready CSV
//! tables (profiles, surfaces, velocities, products, extrema, moments),
//! inverts the extremum product back to the order, and runs a
//! self-consistency battery.
//!
//! CSV convention: one `#` comment line echoing the tool version and the
//! full argument list (so output is reproducible byte-for-byte), a column
//! header, then data rows with 15-significant-digit cells, `.` decimal
//! separator and `\n` line endings.
//!
//! Exit codes: 0 success, 1 selftest failure, 2 argument error, 3 partial
//! numeric failure (affected cells are `NaN`), 4 inverse-problem range
//! error. The environment variable `FRACWAVE_QUAD_TOL` overrides the
//! default quadrature relative tolerance.

use std::f64::consts::FRAC_2_PI;
use std::io::{self, Write};

use clap::{Parser, Subcommand};

use fracwave::extrema::{amplitude_minimum, max_point, product_p, recover_alpha};
use fracwave::green::{green_closed, green_fourier, green_series, l_aux, KernelPoint, Order};
use fracwave::moments::{
    mellin_laux, moment_one_sided, velocity_centro, velocity_gravity, velocity_phase,
    velocity_pulse, velocity_report, MomentOrder,
};
use fracwave::quad::{integrate_semi_infinite, QuadConfig};
use fracwave::Error;

#[derive(Parser)]
#[command(
    name = "fracwave",
    version,
    about = "Damped-wave kernel for orders between 1 and 2: pointwise values, \
             figure-ready CSV tables, velocities, extremum invariants, and \
             order recovery"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the kernel value G_a(x, t) from the closed form.
    Eval {
        #[arg(long)]
        alpha: f64,
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
        #[arg(long)]
        t: f64,
    },
    /// CSV `alpha,t,x,G`: spatial profiles at a few time instants.
    Profile {
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = -0.5, allow_negative_numbers = true)]
        start: f64,
        #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
        stop: f64,
        #[arg(long, default_value_t = 401)]
        count: usize,
        #[arg(long = "t", value_delimiter = ',', default_value = "0.1,0.2,0.3")]
        t: Vec<f64>,
    },
    /// CSV `x,t,G`: the kernel over a space-time rectangle.
    Surface {
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = -0.5, allow_negative_numbers = true)]
        start: f64,
        #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
        stop: f64,
        #[arg(long, default_value_t = 201)]
        count: usize,
        #[arg(long, default_value_t = 60)]
        slices: usize,
        #[arg(long, default_value_t = 0.3)]
        t_max: f64,
    },
    /// CSV `alpha,v_p,v_g,v_m,v_c`: the damped-wave velocities over a grid
    /// of orders.
    Velocities {
        #[arg(long, default_value_t = 1.01)]
        start: f64,
        #[arg(long, default_value_t = 1.99)]
        stop: f64,
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[arg(long, default_value_t = 2000)]
        max_subdivisions: usize,
    },
    /// CSV `alpha,p`: the extremum product over order grids (a coarse and a
    /// fine panel by default).
    Product {
        #[arg(long)]
        start: Option<f64>,
        #[arg(long)]
        stop: Option<f64>,
        #[arg(long)]
        count: Option<usize>,
    },
    /// CSV `alpha,t,x_star,g_star,p`: the kernel maximum, for one order or
    /// over an order grid.
    Max {
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long, default_value_t = 1.001)]
        start: f64,
        #[arg(long, default_value_t = 1.999)]
        stop: f64,
        #[arg(long, default_value_t = 200)]
        count: usize,
    },
    /// CSV `alpha,t,beta,moment`: one-sided fractional moments.
    Moments {
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long, allow_negative_numbers = true)]
        beta: Option<f64>,
    },
    /// Recover the order from a measured extremum product.
    Recover {
        #[arg(long)]
        p: f64,
    },
    /// Run the cross-check battery and print PASS/FAIL per item.
    Selftest {
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = 2000)]
        max_subdivisions: usize,
    },
}

enum Failure {
    Usage(String),
    Io(io::Error),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<String> for Failure {
    fn from(msg: String) -> Self {
        Failure::Usage(msg)
    }
}

pub fn run() -> u8 {
    let echo = std::env::args().skip(1).collect::<Vec<_>>().join(" ");
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let result = dispatch(cli.cmd, &echo, &mut out)
        .and_then(|code| out.flush().map(|()| code).map_err(Failure::from));
    match result {
        Ok(code) => code,
        // A downstream consumer (head, a closed pager) hanging up early is
        // not an error worth reporting.
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => 0,
        Err(Failure::Io(e)) => {
            eprintln!("fracwave: {e}");
            2
        }
        Err(Failure::Usage(msg)) => {
            let _ = out.flush();
            eprintln!("fracwave: {msg}");
            2
        }
    }
}

fn dispatch<W: Write>(cmd: Cmd, echo: &str, out: &mut W) -> Result<u8, Failure> {
    match cmd {
        Cmd::Eval { alpha, x, t } => cmd_eval(alpha, x, t, out),
        Cmd::Profile {
            alpha,
            start,
            stop,
            count,
            t,
        } => cmd_profile(alpha, grid(start, stop, count)?, t, echo, out),
        Cmd::Surface {
            alpha,
            start,
            stop,
            count,
            slices,
            t_max,
        } => cmd_surface(alpha, grid(start, stop, count)?, slices, t_max, echo, out),
        Cmd::Velocities {
            start,
            stop,
            count,
            max_subdivisions,
        } => cmd_velocities(grid(start, stop, count)?, max_subdivisions, echo, out),
        Cmd::Product { start, stop, count } => cmd_product(start, stop, count, echo, out),
        Cmd::Max {
            alpha,
            t,
            start,
            stop,
            count,
        } => cmd_max(alpha, t, start, stop, count, echo, out),
        Cmd::Moments { alpha, t, beta } => cmd_moments(alpha, t, beta, echo, out),
        Cmd::Recover { p } => cmd_recover(p, out),
        Cmd::Selftest {
            tol,
            max_subdivisions,
        } => cmd_selftest(tol, max_subdivisions, out),
    }
}

/// `printf("%.*g")`-style formatting: `sig` significant digits, fixed
/// notation for moderate magnitudes, scientific otherwise, no trailing
/// zeros.
fn fmt_g(v: f64, sig: usize) -> String {
    if v.is_nan() {
        return "NaN".to_string();
    }
    if v.is_infinite() {
        return if v < 0.0 { "-inf" } else { "inf" }.to_string();
    }
    if v == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{:.*e}", sig - 1, v);
    let (mant, exp) = sci.split_once('e').expect("exponent in {:e} output");
    let exp: i32 = exp.parse().expect("numeric exponent");
    if exp >= -4 && exp < sig as i32 {
        let decimals = (sig as i32 - 1 - exp) as usize;
        let fixed = format!("{v:.decimals$}");
        if fixed.contains('.') {
            fixed.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            fixed
        }
    } else {
        let mant = if mant.contains('.') {
            mant.trim_end_matches('0').trim_end_matches('.')
        } else {
            mant
        };
        format!("{mant}e{}{:02}", if exp < 0 { "-" } else { "+" }, exp.abs())
    }
}

fn cell(v: f64) -> String {
    fmt_g(v, 15)
}

/// Uniform grid hitting both endpoints exactly; the lerp form also lands
/// exactly on 0 for grids symmetric about it, where the kernel value is an
/// exact 0 worth printing as one.
fn grid(start: f64, stop: f64, count: usize) -> Result<Vec<f64>, String> {
    if !start.is_finite() || !stop.is_finite() || !(start < stop) {
        return Err(format!("bad grid: start {start} must be below stop {stop}"));
    }
    if count < 2 {
        return Err(format!("bad grid: count {count} must be at least 2"));
    }
    let n = (count - 1) as f64;
    Ok((0..count)
        .map(|i| {
            let u = i as f64 / n;
            start * (1.0 - u) + stop * u
        })
        .collect())
}

fn default_quad_cfg() -> QuadConfig {
    let mut cfg = QuadConfig::default();
    if let Ok(s) = std::env::var("FRACWAVE_QUAD_TOL") {
        match s.trim().parse::<f64>() {
            Ok(v) if v.is_finite() && v > 0.0 => cfg.rel_tol = v,
            _ => {}
        }
    }
    cfg
}

fn header<W: Write>(out: &mut W, echo: &str) -> io::Result<()> {
    writeln!(out, "# fracwave v{} {echo}", env!("CARGO_PKG_VERSION"))
}

fn s<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn cmd_eval<W: Write>(alpha: f64, x: f64, t: f64, out: &mut W) -> Result<u8, Failure> {
    let o = Order::new(alpha).map_err(s)?;
    let p = KernelPoint::new(x, t).map_err(s)?;
    let g = green_closed(o, p).map_err(s)?;
    writeln!(out, "{}", cell(g))?;
    Ok(0)
}

fn cmd_profile<W: Write>(
    alpha: f64,
    xs: Vec<f64>,
    ts: Vec<f64>,
    echo: &str,
    out: &mut W,
) -> Result<u8, Failure> {
    let o = Order::new(alpha).map_err(s)?;
    if ts.is_empty() {
        return Err("profile needs at least one time instant".to_string().into());
    }
    header(out, echo)?;
    writeln!(out, "alpha,t,x,G")?;
    for &t in &ts {
        for &x in &xs {
            let p = KernelPoint::new(x, t).map_err(s)?;
            let g = green_closed(o, p).map_err(s)?;
            writeln!(out, "{},{},{},{}", cell(alpha), cell(t), cell(x), cell(g))?;
        }
    }
    Ok(0)
}

fn cmd_surface<W: Write>(
    alpha: f64,
    xs: Vec<f64>,
    slices: usize,
    t_max: f64,
    echo: &str,
    out: &mut W,
) -> Result<u8, Failure> {
    let o = Order::new(alpha).map_err(s)?;
    if slices == 0 {
        return Err("surface needs at least one time slice".to_string().into());
    }
    if !t_max.is_finite() || !(t_max > 0.0) {
        return Err(format!("bad t_max {t_max}: must be positive").into());
    }
    header(out, echo)?;
    writeln!(out, "x,t,G")?;
    for i in 1..=slices {
        let t = t_max * i as f64 / slices as f64;
        for &x in &xs {
            let p = KernelPoint::new(x, t).map_err(s)?;
            let g = green_closed(o, p).map_err(s)?;
            writeln!(out, "{},{},{}", cell(x), cell(t), cell(g))?;
        }
    }
    Ok(0)
}

fn cmd_velocities<W: Write>(
    alphas: Vec<f64>,
    max_subdivisions: usize,
    echo: &str,
    out: &mut W,
) -> Result<u8, Failure> {
    let cfg = QuadConfig {
        max_subdivisions,
        ..default_quad_cfg()
    };
    header(out, echo)?;
    writeln!(
        out,
        "# first and second centrovelocities omitted: bit-equal to v_c and v_m"
    )?;
    writeln!(out, "alpha,v_p,v_g,v_m,v_c")?;
    let mut partial_failure = false;
    for &a in &alphas {
        let o = Order::new(a).map_err(s)?;
        let v_p = velocity_phase(o);
        let (v_g, v_m, v_c);
        if a == 1.0 {
            v_g = f64::NAN;
            v_m = FRAC_2_PI;
            v_c = 0.0;
        } else {
            v_g = velocity_gravity(o).map_err(s)?;
            v_m = match velocity_pulse(o, &cfg) {
                Ok(v) => v,
                Err(Error::QuadratureNoConvergence { .. }) => {
                    partial_failure = true;
                    f64::NAN
                }
                Err(e) => return Err(s(e).into()),
            };
            v_c = match velocity_centro(o, &cfg) {
                Ok(v) => v,
                Err(Error::QuadratureNoConvergence { .. }) => {
                    partial_failure = true;
                    f64::NAN
                }
                Err(e) => return Err(s(e).into()),
            };
        }
        writeln!(
            out,
            "{},{},{},{},{}",
            cell(a),
            cell(v_p),
            cell(v_g),
            cell(v_m),
            cell(v_c)
        )?;
    }
    Ok(if partial_failure { 3 } else { 0 })
}

fn cmd_product<W: Write>(
    start: Option<f64>,
    stop: Option<f64>,
    count: Option<usize>,
    echo: &str,
    out: &mut W,
) -> Result<u8, Failure> {
    let panels: Vec<Vec<f64>> = match (start, stop, count) {
        (None, None, None) => vec![grid(1.0, 1.98, 50)?, grid(1.0, 1.05, 50)?],
        (Some(a), Some(b), Some(n)) => vec![grid(a, b, n)?],
        _ => {
            return Err("product needs all of --start/--stop/--count or none"
                .to_string()
                .into())
        }
    };
    header(out, echo)?;
    writeln!(out, "alpha,p")?;
    for panel in &panels {
        writeln!(
            out,
            "# panel [{}, {}] with {} points",
            cell(panel[0]),
            cell(*panel.last().expect("non-empty grid")),
            panel.len()
        )?;
        for &a in panel {
            let o = Order::new(a).map_err(s)?;
            writeln!(out, "{},{}", cell(a), cell(product_p(o)))?;
        }
    }
    Ok(0)
}

fn cmd_max<W: Write>(
    alpha: Option<f64>,
    t: f64,
    start: f64,
    stop: f64,
    count: usize,
    echo: &str,
    out: &mut W,
) -> Result<u8, Failure> {
    let alphas = match alpha {
        Some(a) => vec![a],
        None => grid(start, stop, count)?,
    };
    header(out, echo)?;
    writeln!(out, "alpha,t,x_star,g_star,p")?;
    for &a in &alphas {
        let o = Order::new(a).map_err(s)?;
        let r = max_point(o, t).map_err(s)?;
        writeln!(
            out,
            "{},{},{},{},{}",
            cell(a),
            cell(t),
            cell(r.x_star),
            cell(r.g_star),
            cell(r.p)
        )?;
    }
    Ok(0)
}

fn cmd_moments<W: Write>(
    alpha: f64,
    t: f64,
    beta: Option<f64>,
    echo: &str,
    out: &mut W,
) -> Result<u8, Failure> {
    let o = Order::new(alpha).map_err(s)?;
    let betas = match beta {
        Some(b) => vec![b],
        // Nine exponents spanning the finite-moment window (-a, a) at 90%.
        None => (0..9)
            .map(|i| 0.9 * alpha * (i as f64 - 4.0) / 4.0)
            .collect(),
    };
    header(out, echo)?;
    writeln!(out, "alpha,t,beta,moment")?;
    for &b in &betas {
        let m = MomentOrder::new(b, o).map_err(s)?;
        let value = moment_one_sided(o, m, t).map_err(s)?;
        writeln!(
            out,
            "{},{},{},{}",
            cell(alpha),
            cell(t),
            cell(b),
            cell(value)
        )?;
    }
    Ok(0)
}

fn cmd_recover<W: Write>(p: f64, out: &mut W) -> Result<u8, Failure> {
    match recover_alpha(p, 1e-12) {
        Ok(order) => {
            writeln!(out, "{}", fmt_g(order.alpha(), 10))?;
            Ok(0)
        }
        Err(e @ Error::OutOfRange(_)) => {
            eprintln!("fracwave: {e}");
            Ok(4)
        }
        Err(e) => Err(s(e).into()),
    }
}

fn report<W: Write>(
    out: &mut W,
    all_pass: &mut bool,
    name: &str,
    r: Result<String, String>,
) -> io::Result<()> {
    match r {
        Ok(detail) => writeln!(out, "PASS {name} ({detail})"),
        Err(detail) => {
            *all_pass = false;
            writeln!(out, "FAIL {name} ({detail})")
        }
    }
}

fn cmd_selftest<W: Write>(tol: f64, max_subdivisions: usize, out: &mut W) -> Result<u8, Failure> {
    if !tol.is_finite() || !(tol > 0.0) {
        return Err(format!("bad tol {tol}: must be positive").into());
    }
    if max_subdivisions == 0 {
        return Err("bad max_subdivisions: must be at least 1".to_string().into());
    }
    let cfg = QuadConfig {
        rel_tol: {
            let mut rel = (0.1 * tol).clamp(1e-12, 1e-4);
            if let Ok(s) = std::env::var("FRACWAVE_QUAD_TOL") {
                if let Ok(v) = s.trim().parse::<f64>() {
                    if v.is_finite() && v > 0.0 {
                        rel = v;
                    }
                }
            }
            rel
        },
        abs_tol: 1e-14,
        max_subdivisions,
    };
    let fourier_tol = tol.max(1e-6);
    let fourier_cfg = QuadConfig {
        rel_tol: 0.0,
        abs_tol: 0.01 * fourier_tol,
        max_subdivisions: max_subdivisions.max(100),
    };
    let mut all_pass = true;

    let triple = (|| -> Result<String, String> {
        let thr_series = (0.01 * tol).max(1e-12);
        let mut dev_series = 0f64;
        let mut dev_fourier = 0f64;
        for a in [1.3, 1.5, 1.8] {
            let o = Order::new(a).map_err(s)?;
            for (x, t) in [(0.5, 1.0), (2.0, 1.0)] {
                let pt = KernelPoint::new(x, t).map_err(s)?;
                let closed = green_closed(o, pt).map_err(s)?;
                let series = green_series(o, pt, 200).map_err(s)?;
                let fourier = green_fourier(o, pt, &fourier_cfg).map_err(s)?;
                dev_series = dev_series.max((closed - series).abs());
                dev_fourier = dev_fourier.max((closed - fourier.value).abs());
            }
        }
        if dev_series > thr_series {
            return Err(format!("series deviates {dev_series:.1e} > {thr_series:.1e}"));
        }
        if dev_fourier > fourier_tol {
            return Err(format!(
                "fourier deviates {dev_fourier:.1e} > {fourier_tol:.1e}"
            ));
        }
        Ok(format!(
            "series dev {dev_series:.1e}, fourier dev {dev_fourier:.1e}"
        ))
    })();
    report(out, &mut all_pass, "triple-consistency", triple)?;

    let mellin = (|| -> Result<String, String> {
        let mut worst = 0f64;
        for a in [1.2, 1.5, 1.8] {
            let o = Order::new(a).map_err(s)?;
            for sv in [-0.9 * a, -0.5, 0.3, 0.9 * a] {
                let closed = mellin_laux(o, sv).map_err(s)?;
                let q = integrate_semi_infinite(
                    |tau: f64| ((sv - 1.0) * tau.ln() + l_aux(o, tau).unwrap().ln()).exp(),
                    sv - 1.0 + a,
                    sv - 1.0 - a,
                    &cfg,
                )
                .map_err(s)?;
                worst = worst.max(((q.value - closed) / closed).abs());
            }
        }
        if worst > tol {
            return Err(format!("worst rel dev {worst:.1e} > {tol:.1e}"));
        }
        Ok(format!("12 strip points, worst rel dev {worst:.1e}"))
    })();
    report(out, &mut all_pass, "mellin-identity", mellin)?;

    let moments = (|| -> Result<String, String> {
        let mut worst = 0f64;
        for a in [1.2, 1.5, 1.8] {
            let o = Order::new(a).map_err(s)?;
            for b in [0.25, 0.5, 1.0] {
                let m = MomentOrder::new(b, o).map_err(s)?;
                let closed = moment_one_sided(o, m, 1.0).map_err(s)?;
                let q = integrate_semi_infinite(
                    |x: f64| ((b - 1.0) * x.ln() + l_aux(o, 1.0 / x).unwrap().ln()).exp(),
                    b - 1.0 + a,
                    b - 1.0 - a,
                    &cfg,
                )
                .map_err(s)?;
                worst = worst.max(((q.value - closed) / closed).abs());
            }
        }
        if worst > tol {
            return Err(format!("worst rel dev {worst:.1e} > {tol:.1e}"));
        }
        Ok(format!("9 exponents, worst rel dev {worst:.1e}"))
    })();
    report(out, &mut all_pass, "moment-agreement", moments)?;

    let ordering = (|| -> Result<String, String> {
        for a in [1.1, 1.5, 1.9] {
            let o = Order::new(a).map_err(s)?;
            let r = velocity_report(o, &cfg).map_err(s)?;
            let vg = r.v_g.ok_or_else(|| format!("v_g missing at order {a}"))?;
            if !(r.v_c < r.v_p && r.v_p < r.v_m && r.v_m < vg) {
                return Err(format!("ordering violated at order {a}: {r:?}"));
            }
            if r.v_1 != r.v_c || r.v_2 != r.v_m {
                return Err(format!("centrovelocity aliases differ at order {a}"));
            }
        }
        Ok("v_c < v_p < v_m < v_g at 3 orders".to_string())
    })();
    report(out, &mut all_pass, "velocity-ordering", ordering)?;

    let product = (|| -> Result<String, String> {
        let mut worst = 0f64;
        for a in [1.3, 1.7] {
            let o = Order::new(a).map_err(s)?;
            let p = product_p(o);
            for t in [0.1, 1.0, 10.0] {
                let r = max_point(o, t).map_err(s)?;
                worst = worst.max(((r.p - p) / p).abs());
            }
            let vp = velocity_phase(o);
            let g = green_closed(o, KernelPoint::new(1.0, vp).map_err(s)?).map_err(s)?;
            worst = worst.max(((g - p) / p).abs());
        }
        if worst > 1e-12 {
            return Err(format!("worst rel dev {worst:.1e} > 1e-12"));
        }
        Ok(format!("time-invariance and kernel identity, dev {worst:.1e}"))
    })();
    report(out, &mut all_pass, "product-invariance", product)?;

    let amplitude = (|| -> Result<String, String> {
        let (alpha_min, m_min) = amplitude_minimum(1e-6).map_err(s)?;
        if (alpha_min - 1.13).abs() > 0.02 {
            return Err(format!("alpha_min {alpha_min} outside 1.13 +- 0.02"));
        }
        if (m_min - 0.28).abs() > 0.01 {
            return Err(format!("m_min {m_min} outside 0.28 +- 0.01"));
        }
        Ok(format!("alpha_min {alpha_min:.6}, m_min {m_min:.6}"))
    })();
    report(out, &mut all_pass, "amplitude-minimum", amplitude)?;

    Ok(if all_pass { 0 } else { 1 })
}
