//! Adaptive numerical integration of complex-valued integrands on (0, inf),
//! finite intervals, and vertical contour segments.
//!
//! The semi-infinite rule is a double-exponential (exp-sinh) transformation
//! with level doubling; finite intervals use adaptive Gauss-Kronrod 7-15 with
//! a tanh-sinh fallback when an endpoint value is non-finite; vertical lines
//! use the trapezoid rule with a decay-based tail estimate.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Outcome of a quadrature call.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: Complex64,
    pub abs_err_est: f64,
    pub n_evals: usize,
    pub converged: bool,
}

/// Tolerances and budgets shared by all quadrature entry points.
#[derive(Debug, Clone, Copy)]
pub struct QuadConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_levels: u32,
    pub max_evals: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_levels: 12,
            max_evals: 200_000,
        }
    }
}

impl QuadConfig {
    pub fn validate(&self) -> Result<()> {
        if self.rel_tol <= 0.0 || self.abs_tol <= 0.0 || self.max_levels == 0 || self.max_evals == 0
        {
            return Err(Error::DomainError(
                "quadrature config fields must be strictly positive".into(),
            ));
        }
        if self.max_levels > 20 {
            return Err(Error::DomainError("max_levels must be <= 20".into()));
        }
        Ok(())
    }

    /// Budget-reduced copy for inner integrals of nested quadratures.
    pub fn inner(&self) -> Self {
        Self {
            rel_tol: self.rel_tol.max(1e-11),
            abs_tol: self.abs_tol.max(1e-13),
            max_levels: self.max_levels.min(11),
            max_evals: self.max_evals.min(20_000),
        }
    }

    fn target(&self, value_mag: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value_mag)
    }
}

const HALF_PI: f64 = std::f64::consts::FRAC_PI_2;
const TWO_PI: f64 = std::f64::consts::TAU;

// |K sinh t| <= ~708 keeps exp() representable.
const EXP_SINH_T_CAP: f64 = 6.9;

/// One direction of a double-exponential node sweep. Returns the accumulated
/// sum and the largest |t| where a significant term was seen; errors if a
/// non-finite value shows up while terms are still significant.
///
/// The negligible-run early stop is only allowed past `min_t`: an integrand
/// concentrated away from the map center produces a dead zone of underflowed
/// terms near t = 0 at fine levels, and breaking inside it would silently
/// drop the entire mass further out. `min_t` is the furthest significant |t|
/// observed at coarser levels, so the sweep is forced through the known
/// support before it may stop.
fn de_sweep(
    mut node: impl FnMut(f64) -> Option<(f64, f64)>, // t -> (x, weight), None when out of range
    f: &mut dyn FnMut(f64) -> Complex64,
    ts: impl Iterator<Item = f64>,
    scale_hint: f64,
    min_t: f64,
    n_evals: &mut usize,
    max_evals: usize,
) -> Result<(Complex64, f64)> {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut negligible_run = 0u32;
    let mut t_sig = 0.0f64;
    for t in ts {
        let Some((x, w)) = node(t) else { break };
        if w == 0.0 {
            break;
        }
        if *n_evals >= max_evals {
            return Err(Error::BudgetExceeded {
                n_evals: *n_evals,
                partial: sum,
                abs_err_est: f64::INFINITY,
            });
        }
        let fx = f(x);
        *n_evals += 1;
        let term = fx * w;
        if !term.re.is_finite() || !term.im.is_finite() {
            if negligible_run > 0 {
                // already past the relevant region; the weight underflow race
                // produced inf*0 noise
                break;
            }
            return Err(Error::NonFinite { x });
        }
        sum += term;
        let mag = term.norm();
        if mag <= 1e-18 * (scale_hint + sum.norm()) {
            negligible_run += 1;
            if negligible_run >= 3 && t.abs() >= min_t {
                break;
            }
        } else {
            negligible_run = 0;
            t_sig = t.abs();
        }
    }
    Ok((sum, t_sig))
}

/// Integral over (0, inf) via the exp-sinh double-exponential rule,
/// refined by level doubling until tolerance or budget.
pub fn integrate_semi_infinite(
    mut f: impl FnMut(f64) -> Complex64,
    cfg: &QuadConfig,
) -> Result<QuadResult> {
    cfg.validate()?;
    let node = |t: f64| -> Option<(f64, f64)> {
        if t.abs() > EXP_SINH_T_CAP {
            return None;
        }
        let s = HALF_PI * t.sinh();
        let x = s.exp();
        if x == 0.0 || !x.is_finite() {
            return None;
        }
        Some((x, HALF_PI * t.cosh() * x))
    };
    de_levels(node, &mut f, cfg)
}

/// Shared level-doubling driver over a double-exponential node map.
fn de_levels(
    node: impl Fn(f64) -> Option<(f64, f64)> + Copy,
    f: &mut dyn FnMut(f64) -> Complex64,
    cfg: &QuadConfig,
) -> Result<QuadResult> {
    let mut n_evals = 0usize;
    let mut h = 1.0f64;

    // level 0: all integer nodes
    let (x0, w0) = node(0.0).expect("center node in range");
    let f0 = f(x0);
    n_evals += 1;
    if !f0.re.is_finite() || !f0.im.is_finite() {
        return Err(Error::NonFinite { x: x0 });
    }
    let mut raw = f0 * w0;
    let scale = raw.norm();
    // level 0 spans the whole map range (a handful of nodes at h = 1) so the
    // support tracker starts from a full picture of where the mass lives
    let (s_pos, mut t_sig_pos) = de_sweep(
        node,
        f,
        (1..).map(|j| j as f64 * h),
        scale,
        f64::INFINITY,
        &mut n_evals,
        cfg.max_evals,
    )?;
    raw += s_pos;
    let (s_neg, mut t_sig_neg) = de_sweep(
        node,
        f,
        (1..).map(|j| -(j as f64) * h),
        scale,
        f64::INFINITY,
        &mut n_evals,
        cfg.max_evals,
    )?;
    raw += s_neg;
    let mut value = raw * h;
    let mut err = f64::INFINITY;

    for _level in 1..=cfg.max_levels {
        h *= 0.5;
        // new nodes at odd multiples of the halved spacing
        let scale = value.norm() / h;
        let (s_pos, tp) = de_sweep(
            node,
            f,
            (0..).map(|k| (2 * k + 1) as f64 * h),
            scale,
            t_sig_pos,
            &mut n_evals,
            cfg.max_evals,
        )?;
        t_sig_pos = t_sig_pos.max(tp);
        let (s_neg, tn) = de_sweep(
            node,
            f,
            (0..).map(|k| -((2 * k + 1) as f64) * h),
            scale,
            t_sig_neg,
            &mut n_evals,
            cfg.max_evals,
        )?;
        t_sig_neg = t_sig_neg.max(tn);
        raw += s_pos + s_neg;
        let new_value = raw * h;
        err = (new_value - value).norm();
        value = new_value;
        if err <= cfg.target(value.norm()) {
            return Ok(QuadResult {
                value,
                abs_err_est: err,
                n_evals,
                converged: true,
            });
        }
    }
    Ok(QuadResult {
        value,
        abs_err_est: err,
        n_evals,
        converged: false,
    })
}

// Gauss-Kronrod 7-15 nodes/weights (positive half; symmetric).
const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

fn gk15(
    f: &mut dyn FnMut(f64) -> Complex64,
    a: f64,
    b: f64,
    n_evals: &mut usize,
) -> Result<(Complex64, f64)> {
    let c = 0.5 * (a + b);
    let r = 0.5 * (b - a);
    let mut kronrod = Complex64::new(0.0, 0.0);
    let mut gauss = Complex64::new(0.0, 0.0);
    for (i, (&x, &wk)) in XGK.iter().zip(WGK.iter()).enumerate() {
        let (x1, x2) = (c - r * x, c + r * x);
        let f1 = f(x1);
        *n_evals += 1;
        if !f1.re.is_finite() || !f1.im.is_finite() {
            return Err(Error::NonFinite { x: x1 });
        }
        let pair = if x == 0.0 {
            f1
        } else {
            let f2 = f(x2);
            *n_evals += 1;
            if !f2.re.is_finite() || !f2.im.is_finite() {
                return Err(Error::NonFinite { x: x2 });
            }
            f1 + f2
        };
        kronrod += pair * wk;
        if i % 2 == 1 {
            gauss += pair * WG[i / 2];
        }
    }
    let value = kronrod * r;
    let err = ((kronrod - gauss) * r).norm();
    // QUADPACK-style sharpening of the raw difference
    let err = if err > 0.0 {
        (200.0 * err).powf(1.5).min(err).max(err * 1e-6)
    } else {
        0.0
    };
    Ok((value, err))
}

/// Adaptive Gauss-Kronrod integration on a finite interval. When an endpoint
/// evaluation is non-finite, falls back to a tanh-sinh substitution that never
/// touches the endpoints.
pub fn integrate_finite(
    mut f: impl FnMut(f64) -> Complex64,
    a: f64,
    b: f64,
    cfg: &QuadConfig,
) -> Result<QuadResult> {
    cfg.validate()?;
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::DomainError(format!(
            "invalid interval [{a}, {b}]: need finite a < b"
        )));
    }
    let singular_end = {
        let fa = f(a);
        let fb = f(b);
        !(fa.re.is_finite() && fa.im.is_finite() && fb.re.is_finite() && fb.im.is_finite())
    };
    if singular_end {
        return tanh_sinh_finite(&mut f, a, b, cfg);
    }

    let mut n_evals = 2usize; // the endpoint probes
    let (v0, e0) = match gk15(&mut f, a, b, &mut n_evals) {
        Ok(ve) => ve,
        // interior singularity the probe missed: switch to tanh-sinh
        Err(Error::NonFinite { .. }) => return tanh_sinh_finite(&mut f, a, b, cfg),
        Err(e) => return Err(e),
    };

    // worst-interval-first subdivision
    let mut intervals: Vec<(f64, f64, Complex64, f64)> = vec![(a, b, v0, e0)];
    let mut total_err = e0;
    loop {
        let value: Complex64 = intervals.iter().map(|iv| iv.2).sum();
        if total_err <= cfg.target(value.norm()) {
            return Ok(QuadResult {
                value,
                abs_err_est: total_err,
                n_evals,
                converged: true,
            });
        }
        if n_evals + 30 > cfg.max_evals || intervals.len() > 4000 {
            return Err(Error::BudgetExceeded {
                n_evals,
                partial: value,
                abs_err_est: total_err,
            });
        }
        let (worst, _) = intervals
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.partial_cmp(&y.1 .3).unwrap())
            .expect("non-empty interval list");
        let (ia, ib, _, ierr) = intervals.swap_remove(worst);
        let mid = 0.5 * (ia + ib);
        if mid <= ia || mid >= ib {
            // interval at floating-point resolution; accept its estimate
            total_err -= ierr;
            let (v, _) = gk15(&mut f, ia, ib, &mut n_evals)?;
            intervals.push((ia, ib, v, 0.0));
            continue;
        }
        let (vl, el) = gk15(&mut f, ia, mid, &mut n_evals)?;
        let (vr, er) = gk15(&mut f, mid, ib, &mut n_evals)?;
        total_err += el + er - ierr;
        intervals.push((ia, mid, vl, el));
        intervals.push((mid, ib, vr, er));
    }
}

/// tanh-sinh rule on a finite interval; handles integrable endpoint
/// singularities.
fn tanh_sinh_finite(
    f: &mut dyn FnMut(f64) -> Complex64,
    a: f64,
    b: f64,
    cfg: &QuadConfig,
) -> Result<QuadResult> {
    let r = 0.5 * (b - a);
    let node = move |t: f64| -> Option<(f64, f64)> {
        if t.abs() > 4.0 {
            return None;
        }
        let s = HALF_PI * t.sinh();
        let sech = 1.0 / s.cosh();
        // measure the node from the nearer endpoint: 1 -+ tanh(s) cancels
        // catastrophically there, while e^{-+s} sech(s) stays fully accurate,
        // which is what an endpoint-singular integrand needs
        let x = if s <= 0.0 {
            a + r * s.exp() * sech
        } else {
            b - r * (-s).exp() * sech
        };
        // nodes indistinguishable from an endpoint carry no information
        if x <= a || x >= b {
            return None;
        }
        Some((x, r * HALF_PI * t.cosh() * sech * sech))
    };
    de_levels(node, f, cfg)
}

/// Whether the trapezoid truncation-edge magnitudes are checked against the
/// running integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailCheck {
    Enforce,
    Ignore,
}

/// (1/2*pi*i) * integral of g over the segment [c - i*t_max, c + i*t_max] by
/// the trapezoid rule with `n` nodes. The error estimate combines the
/// stride-two trapezoid difference with a decay-extrapolated tail bound.
pub fn integrate_vertical_line(
    mut g: impl FnMut(Complex64) -> Complex64,
    c: f64,
    t_max: f64,
    n: usize,
    tail: TailCheck,
) -> Result<QuadResult> {
    if !(t_max > 0.0) || n < 3 {
        return Err(Error::DomainError(
            "vertical line rule needs t_max > 0 and n >= 3".into(),
        ));
    }
    let n = if n % 2 == 0 { n + 1 } else { n }; // odd count so the stride-2 rule nests
    let h = 2.0 * t_max / (n - 1) as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut sum_coarse = Complex64::new(0.0, 0.0);
    let mut vals_edge = [0.0f64; 2];
    let mut prev_edge = [0.0f64; 2];
    for j in 0..n {
        let tau = -t_max + j as f64 * h;
        let z = Complex64::new(c, tau);
        let gz = g(z);
        if !gz.re.is_finite() || !gz.im.is_finite() {
            return Err(Error::NonFinite { x: tau });
        }
        let w = if j == 0 || j == n - 1 { 0.5 } else { 1.0 };
        sum += gz * (w * h);
        if j % 2 == 0 {
            let wc = if j == 0 || j == n - 1 { 0.5 } else { 1.0 };
            sum_coarse += gz * (wc * 2.0 * h);
        }
        if j == 0 {
            vals_edge[0] = gz.norm();
        }
        if j == 2 {
            prev_edge[0] = gz.norm();
        }
        if j == n - 3 {
            prev_edge[1] = gz.norm();
        }
        if j == n - 1 {
            vals_edge[1] = gz.norm();
        }
    }
    // dz = i dtau, so (1/2pi i) * integral dz = (1/2pi) * integral dtau
    let value = sum / TWO_PI;
    let coarse = sum_coarse / TWO_PI;
    // tail: assume |g| ~ e^{-d |tau|} beyond the edge
    let mut tail_est = 0.0;
    for side in 0..2 {
        let (gp, ge) = (prev_edge[side], vals_edge[side]);
        if ge > 0.0 && gp > ge {
            let d = (gp / ge).ln() / (2.0 * h);
            tail_est += ge / d / TWO_PI;
        } else {
            tail_est += ge * t_max / TWO_PI; // no observed decay: crude bound
        }
    }
    let edge_mag = vals_edge[0].max(vals_edge[1]);
    let ratio = edge_mag / value.norm().max(f64::MIN_POSITIVE);
    if tail == TailCheck::Enforce && ratio > 1e-3 {
        return Err(Error::TailNotDecaying { edge_ratio: ratio });
    }
    let err = (value - coarse).norm() + tail_est;
    Ok(QuadResult {
        value,
        abs_err_est: err,
        n_evals: n,
        converged: err.is_finite(),
    })
}
