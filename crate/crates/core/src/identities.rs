//! Integral identities tying the M-transform to itself and to the classical
//! transforms: the Parseval-type pairings, the cross-transform relations
//! (natural, Laplace, Mellin, Borel-Dzrbashjan), and the M-convolution with
//! its product theorem. Each check evaluates both sides by independent
//! (nested) quadrature and returns a ResidualReport.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mtransform::{m_transform, natural, FuncHandle, MParams};
use crate::quad::{integrate_finite, integrate_semi_infinite, QuadConfig, QuadResult};
use crate::report::ResidualReport;
use crate::specfun::{gamma, h_1111};

/// (x^m + omega^m)^{-rho} with an explicit rho; the Parseval identities mix
/// two rho values over the same (m, omega).
fn weight_rho(rho: Complex64, m: u32, omega: f64, x: f64) -> Complex64 {
    let base = x.powi(m as i32) + omega.powi(m as i32);
    (-rho * base.ln()).exp()
}

/// exp with the underflow limit: e^{-v/x} -> 0 as the real part diverges.
fn exp_guarded(e: Complex64) -> Complex64 {
    if e.re < -700.0 {
        Complex64::new(0.0, 0.0)
    } else {
        e.exp()
    }
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Parseval-type pairing: the f-against-image-of-g integral equals the
/// mirrored one with (f, rho1) and (g, rho2) exchanged.
pub fn parseval(
    f: &FuncHandle,
    g: &FuncHandle,
    rho1: Complex64,
    rho2: Complex64,
    p: &MParams,
    cfg: &QuadConfig,
) -> Result<ResidualReport> {
    if p.v.re < 0.0 {
        return Err(Error::DomainError("parseval needs Re v >= 0".into()));
    }
    let inner_cfg = cfg.inner();
    let side = |a: &FuncHandle, b: &FuncHandle, ra: Complex64, rb: Complex64| -> Result<(Complex64, usize)> {
        let mut first_err: Option<Error> = None;
        let mut n_evals = 0usize;
        let r = integrate_semi_infinite(
            |tau| {
                let kern = exp_guarded(-p.v / tau) * weight_rho(ra, p.m, p.omega, tau);
                if kern == ZERO {
                    return ZERO;
                }
                let q = MParams {
                    rho: rb,
                    u: Complex64::new(tau, 0.0),
                    ..*p
                };
                match m_transform(b, &q, &inner_cfg) {
                    Ok(img) => {
                        n_evals += img.n_evals;
                        (a.eval)(p.omega * tau) * kern * img.value
                    }
                    Err(e) => {
                        first_err.get_or_insert(e);
                        Complex64::new(f64::NAN, 0.0)
                    }
                }
            },
            cfg,
        );
        if let Some(e) = first_err {
            return Err(e);
        }
        let r = r?;
        Ok((r.value, r.n_evals + n_evals))
    };
    let (lhs, nl) = side(f, g, rho1, rho2)?;
    let (rhs, nr) = side(g, f, rho2, rho1)?;
    Ok(ResidualReport::new("parseval", lhs, rhs, 1e-6, nl + nr))
}

/// Mixed Parseval pairing: u sits in the exponential slot on both sides, the
/// outer variable enters the image's v-slot on the left and shifts u (with
/// the v-slot zeroed) on the right, exactly as displayed.
pub fn parseval_mixed(
    f: &FuncHandle,
    g: &FuncHandle,
    rho1: Complex64,
    rho2: Complex64,
    u: Complex64,
    p: &MParams,
    cfg: &QuadConfig,
) -> Result<ResidualReport> {
    let inner_cfg = cfg.inner();

    let mut first_err: Option<Error> = None;
    let mut n_inner = 0usize;
    let lhs = integrate_semi_infinite(
        |tau| {
            let kern = exp_guarded(-u * tau) * weight_rho(rho1, p.m, p.omega, tau);
            if kern == ZERO {
                return ZERO;
            }
            let q = match MParams::new(rho2, p.m, u, Complex64::new(tau, 0.0), p.omega) {
                Ok(q) => q,
                Err(e) => {
                    first_err.get_or_insert(e);
                    return Complex64::new(f64::NAN, 0.0);
                }
            };
            match m_transform(g, &q, &inner_cfg) {
                Ok(img) => {
                    n_inner += img.n_evals;
                    (f.eval)(p.omega * tau) * kern * img.value
                }
                Err(e) => {
                    first_err.get_or_insert(e);
                    Complex64::new(f64::NAN, 0.0)
                }
            }
        },
        cfg,
    );
    if let Some(e) = first_err {
        return Err(e);
    }
    let lhs = lhs?;

    let mut first_err: Option<Error> = None;
    let mut n_inner_r = 0usize;
    let rhs = integrate_semi_infinite(
        |x| {
            let kern = exp_guarded(-u * x) * weight_rho(rho2, p.m, p.omega, x);
            if kern == ZERO {
                return ZERO;
            }
            let q = match MParams::new(rho1, p.m, u + 1.0 / x, ZERO, p.omega) {
                Ok(q) => q,
                Err(e) => {
                    first_err.get_or_insert(e);
                    return Complex64::new(f64::NAN, 0.0);
                }
            };
            match m_transform(f, &q, &inner_cfg) {
                Ok(img) => {
                    n_inner_r += img.n_evals;
                    (g.eval)(p.omega * x) * kern * img.value
                }
                Err(e) => {
                    first_err.get_or_insert(e);
                    Complex64::new(f64::NAN, 0.0)
                }
            }
        },
        cfg,
    );
    if let Some(e) = first_err {
        return Err(e);
    }
    let rhs = rhs?;

    Ok(ResidualReport::new(
        "parseval_mixed",
        lhs.value,
        rhs.value,
        1e-6,
        lhs.n_evals + rhs.n_evals + n_inner + n_inner_r,
    ))
}

/// Relation with the natural transform: integrating f against the u-section
/// of the image of e^{-ax}g equals the image of g times the natural
/// transform of f, evaluated at u = a*omega.
pub fn relation_natural(
    f: &FuncHandle,
    g: &FuncHandle,
    a: f64,
    p: &MParams,
    cfg: &QuadConfig,
) -> Result<ResidualReport> {
    if !(a > 0.0) {
        return Err(Error::DomainError("relation_natural needs a > 0".into()));
    }
    let inner_cfg = cfg.inner();

    let damped = {
        let ge = g.eval.clone();
        FuncHandle::new(
            format!("exp(-{a}x) {}", g.label),
            move |x| (-a * x).exp() * ge(x),
            g.growth,
        )
    };
    let mut first_err: Option<Error> = None;
    let mut n_inner = 0usize;
    let lhs = integrate_semi_infinite(
        |up| {
            let q = p.with_u(Complex64::new(up * p.omega, 0.0));
            match m_transform(&damped, &q, &inner_cfg) {
                Ok(img) => {
                    n_inner += img.n_evals;
                    (f.eval)(p.omega * up) * img.value
                }
                Err(e) => {
                    first_err.get_or_insert(e);
                    Complex64::new(f64::NAN, 0.0)
                }
            }
        },
        cfg,
    );
    if let Some(e) = first_err {
        return Err(e);
    }
    let lhs = lhs?;

    // RHS written out: int e^{-a omega x - v/x} (x^m+omega^m)^{-rho}
    //                  g(omega x) N[f](omega x, omega) dx
    let mut first_err: Option<Error> = None;
    let mut n_inner_r = 0usize;
    let rhs = integrate_semi_infinite(
        |x| {
            let kern = exp_guarded(-a * p.omega * x - p.v / x) * p.weight(x);
            if kern == ZERO {
                return ZERO;
            }
            match natural(f, Complex64::new(p.omega * x, 0.0), p.omega, &inner_cfg) {
                Ok(nf) => {
                    n_inner_r += nf.n_evals;
                    kern * (g.eval)(p.omega * x) * nf.value
                }
                Err(e) => {
                    first_err.get_or_insert(e);
                    Complex64::new(f64::NAN, 0.0)
                }
            }
        },
        cfg,
    );
    if let Some(e) = first_err {
        return Err(e);
    }
    let rhs = rhs?;

    Ok(ResidualReport::new(
        "relation_natural",
        lhs.value,
        rhs.value,
        1e-6,
        lhs.n_evals + rhs.n_evals + n_inner + n_inner_r,
    ))
}

/// Relation with the Mellin transform: the Mellin transform (u -> z) of the
/// image of e^{-ax}f equals Gamma(z) times the image of x^{-z}f at a*omega.
pub fn relation_mellin(
    f: &FuncHandle,
    a: f64,
    z: Complex64,
    p: &MParams,
    cfg: &QuadConfig,
) -> Result<ResidualReport> {
    if !(a > 0.0) {
        return Err(Error::DomainError("relation_mellin needs a > 0".into()));
    }
    if z.re <= 0.0 || z.re >= 1.0 + p.m as f64 {
        return Err(Error::DomainError(format!(
            "relation_mellin needs 0 < Re z within the image's Mellin strip, got {z}"
        )));
    }
    let inner_cfg = cfg.inner();

    let damped = {
        let fe = f.eval.clone();
        FuncHandle::new(
            format!("exp(-{a}x) {}", f.label),
            move |x| (-a * x).exp() * fe(x),
            f.growth,
        )
    };
    // Mellin of the u-section, split at u = 1 with u -> 1/u on (1, inf) so
    // both pieces live on (0, 1); inner image errors are captured, not folded
    // into the NaN sentinel.
    let mut first_err: Option<Error> = None;
    let mut n_inner = 0usize;
    let mut image_at = |u: f64| -> Complex64 {
        let q = p.with_u(Complex64::new(u * p.omega, 0.0));
        match m_transform(&damped, &q, &inner_cfg) {
            Ok(img) => {
                n_inner += img.n_evals;
                img.value
            }
            Err(e) => {
                first_err.get_or_insert(e);
                Complex64::new(f64::NAN, 0.0)
            }
        }
    };
    let lower = integrate_finite(|u| ((z - 1.0) * u.ln()).exp() * image_at(u), 0.0, 1.0, cfg);
    let upper = integrate_finite(
        |u| ((-z - 1.0) * u.ln()).exp() * image_at(1.0 / u),
        0.0,
        1.0,
        cfg,
    );
    if let Some(e) = first_err {
        return Err(e);
    }
    let (lower, upper) = (lower?, upper?);
    let lhs = lower.value + upper.value;

    let shifted = {
        let fe = f.eval.clone();
        FuncHandle::new(
            format!("x^(-z) {}", f.label),
            move |x| (-z * x.ln()).exp() * fe(x),
            f.growth,
        )
    };
    let q = p.with_u(Complex64::new(a * p.omega, 0.0));
    let rhs_quad = m_transform(&shifted, &q, cfg)?;
    let rhs = gamma(z)? * rhs_quad.value;

    Ok(ResidualReport::new(
        "relation_mellin",
        lhs,
        rhs,
        1e-6,
        lower.n_evals + upper.n_evals + n_inner + rhs_quad.n_evals,
    ))
}

/// Relation with the Borel-Dzrbashjan transform: the Borel transform (at
/// s = omega) of the u-section of the image of e^{-ax}g equals
/// omega^{nu mu - 1} times the image of g x^{-nu mu} H^{1,1}_{1,1}[omega/x]
/// at u = a*omega. The evaluation point a*omega is forced by chaining the
/// identity through the natural-transform relation; setting a = 1 gives the
/// common special case where both sides sit at u = omega.
pub fn relation_borel(
    g: &FuncHandle,
    a: f64,
    nu: f64,
    mu: f64,
    p: &MParams,
    cfg: &QuadConfig,
) -> Result<ResidualReport> {
    if !(a > 0.0 && nu > 0.0 && mu > 0.0) {
        return Err(Error::DomainError("relation_borel needs a, nu, mu > 0".into()));
    }
    let inner_cfg = cfg.inner();
    let om_pow = p.omega.powf(nu * mu - 1.0);

    let damped = {
        let ge = g.eval.clone();
        FuncHandle::new(
            format!("exp(-{a}x) {}", g.label),
            move |x| (-a * x).exp() * ge(x),
            g.growth,
        )
    };
    let mut first_err: Option<Error> = None;
    let mut n_inner = 0usize;
    let lhs_quad = integrate_semi_infinite(
        |up| {
            let kern = (-p.omega.powf(nu) * up.powf(nu)).exp() * up.powf(nu * mu - 1.0);
            if kern == 0.0 {
                return ZERO;
            }
            let q = p.with_u(Complex64::new(up * p.omega, 0.0));
            match m_transform(&damped, &q, &inner_cfg) {
                Ok(img) => {
                    n_inner += img.n_evals;
                    kern * img.value
                }
                Err(e) => {
                    first_err.get_or_insert(e);
                    Complex64::new(f64::NAN, 0.0)
                }
            }
        },
        cfg,
    );
    if let Some(e) = first_err {
        return Err(e);
    }
    let lhs_quad = lhs_quad?;
    let lhs = nu * om_pow * lhs_quad.value;

    // RHS: int e^{-a omega x - v/x} (x^m+omega^m)^{-rho} G(omega x) dx with
    // G(y) = g(y) y^{-nu mu} H^{1,1}_{1,1}[omega/y | (1-nu mu,1); (0,1/nu)]
    let mut first_err: Option<Error> = None;
    let mut n_inner_r = 0usize;
    let rhs_quad = integrate_semi_infinite(
        |x| {
            let kern = exp_guarded(-a * p.omega * x - p.v / x) * p.weight(x);
            if kern == ZERO {
                return ZERO;
            }
            let y = p.omega * x;
            match h_1111(p.omega / y, nu, mu) {
                Ok(h) => {
                    n_inner_r += 1; // contour evaluations are not surfaced
                    kern * (g.eval)(y) * y.powf(-nu * mu) * h
                }
                Err(e) => {
                    first_err.get_or_insert(e);
                    Complex64::new(f64::NAN, 0.0)
                }
            }
        },
        cfg,
    );
    if let Some(e) = first_err {
        return Err(e);
    }
    let rhs_quad = rhs_quad?;
    let rhs = om_pow * rhs_quad.value;

    let tol = if nu == 1.0 && mu == 1.0 { 1e-5 } else { 1e-4 };
    Ok(ResidualReport::new(
        "relation_borel",
        lhs,
        rhs,
        tol,
        lhs_quad.n_evals + rhs_quad.n_evals + n_inner + n_inner_r,
    ))
}

/// The inner integral of the M-convolution, without the bracket^rho e^{v
/// omega/x} prefactor. The prefactor cancels the transform kernel exactly,
/// so the convolution theorem integrates this directly (the raw product is a
/// 0*inf overflow as x -> 0).
fn m_convolve_reduced(
    f: &FuncHandle,
    g: &FuncHandle,
    x: f64,
    p: &MParams,
    cfg: &QuadConfig,
) -> Result<QuadResult> {
    integrate_finite(
        |t| {
            let s = x - p.omega * t;
            if s <= 0.0 || t <= 0.0 {
                return ZERO;
            }
            let kern = exp_guarded(-p.v * p.omega / s - p.v / t);
            if kern == ZERO {
                return ZERO;
            }
            kern * (-p.rho * p.bracket(s).ln()).exp()
                * (f.eval)(s)
                * p.weight(t)
                * (g.eval)(p.omega * t)
        },
        0.0,
        x / p.omega,
        cfg,
    )
}

/// The M-convolution (f * g)(x): bracket^rho e^{v omega/x} times the
/// weighted finite-interval integral over (0, x/omega).
pub fn m_convolve(
    f: &FuncHandle,
    g: &FuncHandle,
    x: f64,
    p: &MParams,
    cfg: &QuadConfig,
) -> Result<QuadResult> {
    if !(x > 0.0) {
        return Err(Error::DomainError("m_convolve needs x > 0".into()));
    }
    if p.v.re < 0.0 {
        return Err(Error::DomainError("m_convolve needs Re v >= 0".into()));
    }
    let pre = (p.rho * p.bracket(x).ln()).exp() * (p.v * p.omega / x).exp();
    if !pre.re.is_finite() || !pre.im.is_finite() {
        return Err(Error::DomainError(format!(
            "convolution prefactor overflows at x = {x}"
        )));
    }
    let inner = m_convolve_reduced(f, g, x, p, cfg)?;
    Ok(QuadResult {
        value: pre * inner.value,
        abs_err_est: pre.norm() * inner.abs_err_est,
        ..inner
    })
}

/// Convolution theorem: the product of the images equals the image of the
/// M-convolution at the same (u, v, omega).
pub fn convolution_theorem(
    f: &FuncHandle,
    g: &FuncHandle,
    p: &MParams,
    cfg: &QuadConfig,
) -> Result<ResidualReport> {
    let fi = m_transform(f, p, cfg)?;
    let gi = m_transform(g, p, cfg)?;
    let lhs = fi.value * gi.value;

    // M[(f*g)](u,v,omega): the kernel e^{-v/y}(y^m+omega^m)^{-rho} cancels
    // the convolution prefactor at x = omega y analytically, leaving
    // e^{-uy} times the reduced inner integral.
    let inner_cfg = cfg.inner();
    let mut first_err: Option<Error> = None;
    let mut n_inner = 0usize;
    let rhs_quad = integrate_semi_infinite(
        |y| {
            let kern = exp_guarded(-p.u * y);
            if kern == ZERO {
                return ZERO;
            }
            match m_convolve_reduced(f, g, p.omega * y, p, &inner_cfg) {
                Ok(c) => {
                    n_inner += c.n_evals;
                    kern * c.value
                }
                Err(e) => {
                    first_err.get_or_insert(e);
                    Complex64::new(f64::NAN, 0.0)
                }
            }
        },
        cfg,
    );
    if let Some(e) = first_err {
        return Err(e);
    }
    let rhs_quad = rhs_quad?;

    Ok(ResidualReport::new(
        "convolution_theorem",
        lhs,
        rhs_quad.value,
        1e-5,
        fi.n_evals + gi.n_evals + rhs_quad.n_evals + n_inner,
    ))
}
