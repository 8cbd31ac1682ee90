//! Two applications of the transform machinery: a first-order transport
//! initial-boundary-value problem solved through the natural-transform
//! inversion of the transformed source, and heat flow with a weighted source
//! solved by a sine series. Each comes with an independent classical solver
//! (method of characteristics, Crank-Nicolson) used as an oracle.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::laplace_inv::{inverse_natural, InversionConfig, InversionMethod};
use crate::mtransform::{m_transform, FuncHandle, GrowthBound, MParams};
use crate::quad::{integrate_finite, QuadConfig};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Source / data functions of two real arguments.
pub type SourceFn = Arc<dyn Fn(f64, f64) -> Complex64 + Send + Sync>;
/// Initial-data function of one real argument.
pub type InitFn = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

// ---------------------------------------------------------------------------
// transport
// ---------------------------------------------------------------------------

/// w_t + w_x = p(t, omega) e^{-v omega / t} r(t, x) on t, x > 0 with
/// w(0, x) = omega phi(omega) and w(t, 0) = 0.
pub struct TransportProblem {
    /// r(t, x)
    pub r: SourceFn,
    /// the constant omega * phi(omega)
    pub phi_omega: Complex64,
    /// rho, m, v, omega enter through here; u is overwritten per node
    pub p: MParams,
    pub x_max: f64,
    pub t_max: f64,
}

impl TransportProblem {
    pub fn new(
        r: SourceFn,
        phi_omega: Complex64,
        p: MParams,
        x_max: f64,
        t_max: f64,
    ) -> Result<Self> {
        if !(x_max > 0.0) || !(t_max > 0.0) {
            return Err(Error::DomainError("x_max, t_max must be positive".into()));
        }
        if p.v.re < 0.0 {
            return Err(Error::DomainError(
                "transport problem needs Re v >= 0".into(),
            ));
        }
        Ok(Self {
            r,
            phi_omega,
            p,
            x_max,
            t_max,
        })
    }

    /// p(t, omega) = ((t/omega)^m + omega^m)^{-rho}, positive for rho real.
    fn p_weight(&self, t: f64) -> Complex64 {
        (-self.p.rho * self.p.bracket(t).ln()).exp()
    }

    /// The physical source p(t, omega) e^{-v omega / t} r(t, x), extended by
    /// its limit 0 at t = 0 when Re v > 0.
    fn source(&self, t: f64, x: f64) -> Complex64 {
        if t <= 0.0 {
            return if self.p.v.re > 0.0 {
                ZERO
            } else {
                self.p_weight(0.0) * (self.r)(0.0, x)
            };
        }
        let e = -self.p.v * self.p.omega / t;
        if e.re < -700.0 {
            return ZERO;
        }
        self.p_weight(t) * e.exp() * (self.r)(t, x)
    }
}

/// A transport solution sample; accuracy degrades across the characteristic
/// t = x where the boundary-vs-initial data jump sits.
#[derive(Debug, Clone, Copy)]
pub struct TransportValue {
    pub value: Complex64,
    pub near_characteristic: bool,
}

/// Heaviside with theta(0) := 1, so that w(0, x) = omega phi(omega) matches
/// the initial condition and w(t, 0) = 0 the boundary condition.
fn theta(t: f64) -> f64 {
    if t >= 0.0 {
        1.0
    } else {
        0.0
    }
}

/// w(t, x) = N^{-1}[ e^{-(u/omega) x} int_0^x e^{(u/omega) y}
///                   M_{rho,m}[r(., y)](u, v, omega) dy ](t)
///           + omega phi(omega) (theta(t) - theta(t - x)).
///
/// The image only exists right of the growth abscissa, so the inversion is
/// forced onto the Bromwich contour regardless of the configured method.
pub fn solve_transport(
    prob: &TransportProblem,
    t: f64,
    x: f64,
    icfg: &InversionConfig,
    qcfg: &QuadConfig,
) -> Result<TransportValue> {
    if t < 0.0 || x < 0.0 {
        return Err(Error::DomainError("transport needs t, x >= 0".into()));
    }
    let near_characteristic = (t - x).abs() <= 0.05;
    let heaviside = prob.phi_omega * (theta(t) - theta(t - x));

    // At t = 0 the characteristic integral is empty and the contour
    // inversion is not defined; the solution is the initial datum.
    if t == 0.0 {
        return Ok(TransportValue {
            value: heaviside,
            near_characteristic,
        });
    }

    let inner_cfg = qcfg.inner();
    let p0 = prob.p;
    let r = prob.r.clone();
    let omega = p0.omega;
    let image = |u: Complex64| -> Result<Complex64> {
        let pu = p0.with_u(u);
        let mut first_err: Option<Error> = None;
        let res = integrate_finite(
            |y| {
                let r_slice = r.clone();
                let handle = FuncHandle::new(
                    "r-slice",
                    move |s| r_slice(s, y),
                    GrowthBound::decaying(),
                );
                match m_transform(&handle, &pu, &inner_cfg) {
                    Ok(q) => ((u / omega) * (y - x)).exp() * q.value,
                    Err(e) => {
                        first_err.get_or_insert(e);
                        Complex64::new(f64::NAN, f64::NAN)
                    }
                }
            },
            0.0,
            x,
            qcfg,
        );
        if let Some(e) = first_err {
            return Err(e);
        }
        Ok(res?.value)
    };

    let icfg = icfg.with_method(InversionMethod::BromwichTrapezoid);
    let source_part = inverse_natural(image, t, omega, &icfg)?;
    Ok(TransportValue {
        value: source_part + heaviside,
        near_characteristic,
    })
}

/// Independent oracle: integrates the stated PDE along the characteristic
/// dx/dt = 1 with a plain trapezoid of step <= dt.
pub fn transport_char_oracle(
    prob: &TransportProblem,
    t: f64,
    x: f64,
    dt: f64,
) -> Result<Complex64> {
    if t < 0.0 || x < 0.0 {
        return Err(Error::DomainError("oracle needs t, x >= 0".into()));
    }
    if !(dt > 0.0) {
        return Err(Error::DomainError("oracle needs dt > 0".into()));
    }
    // Characteristic through (t, x): (tau, x - t + tau). From the initial
    // data when x > t, from the zero boundary when x <= t.
    let (tau0, base) = if x > t {
        (0.0, prob.phi_omega)
    } else {
        (t - x, ZERO)
    };
    let len = t - tau0;
    if len <= 0.0 {
        return Ok(base);
    }
    let n = (len / dt).ceil().max(1.0) as usize;
    let h = len / n as f64;
    let q = |tau: f64| prob.source(tau, x - t + tau);
    let mut acc = 0.5 * (q(tau0) + q(t));
    for j in 1..n {
        acc += q(tau0 + j as f64 * h);
    }
    let value = base + acc * h;
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(Error::NonFinite { x: t });
    }
    Ok(value)
}

// ---------------------------------------------------------------------------
// heat
// ---------------------------------------------------------------------------

/// phi_t = phi_xx + (t^m + 1)^{-rho} e^{-v/t} r(x, t) on (0, pi) with zero
/// Dirichlet data and phi(x, 0) = f_init(x).
pub struct HeatProblem {
    pub f_init: InitFn,
    /// r(x, t)
    pub r: SourceFn,
    pub rho: Complex64,
    pub m: u32,
    pub v: Complex64,
    pub k_max: usize,
    pub t_grid: Vec<f64>,
    pub x_grid: Vec<f64>,
}

/// Minimum time at which the truncated series is considered validated.
pub const HEAT_T_MIN: f64 = 0.05;
/// Default series length.
pub const HEAT_K_MAX_DEFAULT: usize = 40;

impl HeatProblem {
    pub fn new(
        f_init: InitFn,
        r: SourceFn,
        rho: Complex64,
        m: u32,
        v: Complex64,
        k_max: usize,
        t_grid: Vec<f64>,
        x_grid: Vec<f64>,
    ) -> Result<Self> {
        if m < 1 {
            return Err(Error::DomainError("m must be a positive integer".into()));
        }
        if k_max < 1 {
            return Err(Error::DomainError("k_max must be >= 1".into()));
        }
        if v.re < 0.0 {
            return Err(Error::DomainError("heat problem needs Re v >= 0".into()));
        }
        let f0 = f_init(0.0);
        let fpi = f_init(std::f64::consts::PI);
        if f0.norm() > 1e-12 || fpi.norm() > 1e-12 {
            return Err(Error::DomainError(format!(
                "sine expansion needs f(0) = f(pi) = 0, got |f(0)| = {:.3e}, |f(pi)| = {:.3e}",
                f0.norm(),
                fpi.norm()
            )));
        }
        Ok(Self {
            f_init,
            r,
            rho,
            m,
            v,
            k_max,
            t_grid,
            x_grid,
        })
    }

    /// The weighted source (t^m + 1)^{-rho} e^{-v/t} r(x, t), extended by its
    /// limit 0 at t = 0 when Re v > 0.
    pub fn source(&self, x: f64, t: f64) -> Complex64 {
        let w = (-self.rho * (t.powi(self.m as i32) + 1.0).ln()).exp();
        if t <= 0.0 {
            return if self.v.re > 0.0 {
                ZERO
            } else {
                w * (self.r)(x, 0.0)
            };
        }
        let e = -self.v / t;
        if e.re < -700.0 {
            return ZERO;
        }
        w * e.exp() * (self.r)(x, t)
    }
}

/// Which sign convention the series uses for its mode weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesSign {
    /// All-plus kernel (the one a residue computation and the
    /// finite-difference oracle confirm). Default.
    Corrected,
    /// Alternating (-1)^k weights; kept for the sign-audit test.
    Verbatim,
}

/// Truncated-series artifacts for one evaluation time.
#[derive(Debug, Clone)]
pub struct SeriesSolution {
    /// b_k = int_0^pi sin(ky) f(y) dy, k = 1..k_max
    pub fourier_coeffs: Vec<Complex64>,
    /// c_k(t) = int_0^pi sin(ky) int_0^t e^{-k^2 (t - zeta)} q(y, zeta)
    ///          dzeta dy, k = 1..k_max
    pub source_integrals: Vec<Complex64>,
    pub k_max: usize,
    pub tail_bound: f64,
}

fn sine_coefficient(
    f: &mut dyn FnMut(f64) -> Complex64,
    k: usize,
    cfg: &QuadConfig,
) -> Result<Complex64> {
    let kk = k as f64;
    Ok(integrate_finite(|y| (kk * y).sin() * f(y), 0.0, std::f64::consts::PI, cfg)?.value)
}

/// Builds the per-mode integrals at time `t`. The e^{k^2 zeta} factor of the
/// displayed formula is folded against the outer e^{-k^2 t} into
/// e^{-k^2 (t - zeta)} so no term is ever exponentially large.
pub fn heat_series_solution(
    prob: &HeatProblem,
    t: f64,
    cfg: &QuadConfig,
) -> Result<SeriesSolution> {
    if !(t > 0.0) {
        return Err(Error::DomainError("heat series needs t > 0".into()));
    }
    let inner_cfg = cfg.inner();
    let mut fourier_coeffs = Vec::with_capacity(prob.k_max);
    let mut source_integrals = Vec::with_capacity(prob.k_max);
    for k in 1..=prob.k_max {
        fourier_coeffs.push(sine_coefficient(&mut |y| (prob.f_init)(y), k, cfg)?);
        let k2 = (k * k) as f64;
        let mut first_err: Option<Error> = None;
        let c_k = sine_coefficient(
            &mut |y| {
                let inner = integrate_finite(
                    |zeta| {
                        let damp = -k2 * (t - zeta);
                        if damp < -700.0 {
                            return ZERO;
                        }
                        damp.exp() * prob.source(y, zeta)
                    },
                    0.0,
                    t,
                    &inner_cfg,
                );
                match inner {
                    Ok(q) => q.value,
                    Err(e) => {
                        first_err.get_or_insert(e);
                        Complex64::new(f64::NAN, f64::NAN)
                    }
                }
            },
            k,
            cfg,
        );
        if let Some(e) = first_err {
            return Err(e);
        }
        source_integrals.push(c_k?);
    }

    // Tail estimate: the initial-data terms decay like e^{-k^2 t} past
    // k_max (ratio bound e^{-(2K+1)t} per step); the source terms decay at
    // least like the last computed coefficient.
    let kk = prob.k_max;
    let q_ratio = (-(2.0 * kk as f64 + 1.0) * t).exp();
    let geo = q_ratio / (1.0 - q_ratio).max(1e-300);
    let b_last = fourier_coeffs[kk - 1].norm() * (-((kk * kk) as f64) * t).exp();
    let c_last = source_integrals[kk - 1].norm();
    let tail_bound = (2.0 / std::f64::consts::PI) * (b_last * geo + c_last);

    Ok(SeriesSolution {
        fourier_coeffs,
        source_integrals,
        k_max: prob.k_max,
        tail_bound,
    })
}

impl SeriesSolution {
    /// Evaluates the truncated series at (x, t) for the time it was built at.
    pub fn eval(&self, x: f64, t: f64, sign: SeriesSign) -> Complex64 {
        let mut acc = ZERO;
        for k in 1..=self.k_max {
            let s = match sign {
                SeriesSign::Corrected => 1.0,
                SeriesSign::Verbatim => {
                    if k % 2 == 0 {
                        1.0
                    } else {
                        -1.0
                    }
                }
            };
            let decay = (-((k * k) as f64) * t).exp();
            let term = self.fourier_coeffs[k - 1] * decay + self.source_integrals[k - 1];
            acc += s * term * (k as f64 * x).sin();
        }
        acc * 2.0 / std::f64::consts::PI
    }
}

/// Truncated sine-series solution of the heat problem at (x, t).
pub fn solve_heat_series(
    prob: &HeatProblem,
    x: f64,
    t: f64,
    sign: SeriesSign,
    cfg: &QuadConfig,
) -> Result<Complex64> {
    if !(0.0..=std::f64::consts::PI).contains(&x) {
        return Err(Error::DomainError("heat series needs 0 <= x <= pi".into()));
    }
    if t < HEAT_T_MIN {
        return Err(Error::DomainError(format!(
            "t = {t} below validated series range (t_min = {HEAT_T_MIN})"
        )));
    }
    let sol = heat_series_solution(prob, t, cfg)?;
    const TOL: f64 = 1e-6;
    if sol.tail_bound > TOL {
        return Err(Error::TailBoundExceeded {
            tail_bound: sol.tail_bound,
            tol: TOL,
        });
    }
    Ok(sol.eval(x, t, sign))
}

// ---------------------------------------------------------------------------
// Crank-Nicolson oracle
// ---------------------------------------------------------------------------

/// Dense finite-difference solution sampled back onto the problem's grids.
pub struct HeatGrid {
    /// values[ti][xi] at (t_grid[ti], x_grid[xi])
    pub values: Vec<Vec<Complex64>>,
    pub nx: usize,
    pub nt: usize,
}

/// Thomas solve of a constant tridiagonal system (lo, diag, hi) in place.
fn thomas_const(lo: f64, diag: f64, hi: f64, rhs: &mut [Complex64]) {
    let n = rhs.len();
    let mut cp = vec![0.0f64; n];
    cp[0] = hi / diag;
    rhs[0] /= diag;
    for i in 1..n {
        let denom = diag - lo * cp[i - 1];
        cp[i] = hi / denom;
        rhs[i] = (rhs[i] - lo * rhs[i - 1]) / denom;
    }
    for i in (0..n - 1).rev() {
        let next = rhs[i + 1];
        rhs[i] -= cp[i] * next;
    }
}

/// Crank-Nicolson oracle for the heat problem, solved on a uniform
/// (nx + 1) x (nt + 1) mesh up to the largest requested time and sampled at
/// the problem's (t_grid, x_grid) points by bilinear interpolation.
pub fn heat_fd_oracle(prob: &HeatProblem, nx: usize, nt: usize) -> Result<HeatGrid> {
    if nx < 50 || nt < 50 {
        return Err(Error::DomainError("oracle needs nx, nt >= 50".into()));
    }
    let t_end = prob
        .t_grid
        .iter()
        .cloned()
        .fold(0.0f64, f64::max)
        .max(1e-12);
    for &x in &prob.x_grid {
        if !(0.0..=std::f64::consts::PI).contains(&x) {
            return Err(Error::DomainError("x_grid point outside [0, pi]".into()));
        }
    }
    let dx = std::f64::consts::PI / nx as f64;
    let dt = t_end / nt as f64;
    let lam = dt / (dx * dx);
    let n_int = nx - 1; // interior unknowns

    let xs: Vec<f64> = (1..nx).map(|i| i as f64 * dx).collect();
    let mut history: Vec<Vec<Complex64>> = Vec::with_capacity(nt + 1);
    let mut phi: Vec<Complex64> = xs.iter().map(|&x| (prob.f_init)(x)).collect();
    history.push(phi.clone());

    let src = |tn: f64| -> Vec<Complex64> { xs.iter().map(|&x| prob.source(x, tn)).collect() };
    let mut q_old = src(0.0);
    for n in 0..nt {
        let t_new = (n + 1) as f64 * dt;
        let q_new = src(t_new);
        // rhs = (I + lam/2 D) phi^n + dt/2 (q^n + q^{n+1})
        let mut rhs = vec![ZERO; n_int];
        for i in 0..n_int {
            let left = if i > 0 { phi[i - 1] } else { ZERO };
            let right = if i + 1 < n_int { phi[i + 1] } else { ZERO };
            rhs[i] = phi[i] * (1.0 - lam)
                + (left + right) * (lam / 2.0)
                + (q_old[i] + q_new[i]) * (dt / 2.0);
        }
        thomas_const(-lam / 2.0, 1.0 + lam, -lam / 2.0, &mut rhs);
        phi = rhs;
        history.push(phi.clone());
        q_old = q_new;
    }

    let sample_x = |row: &[Complex64], x: f64| -> Complex64 {
        // row holds interior nodes; boundaries are zero
        let pos = x / dx;
        let i0 = (pos.floor() as isize).clamp(0, nx as isize - 1) as usize;
        let frac = pos - i0 as f64;
        let a = if i0 == 0 { ZERO } else { row[i0 - 1] };
        let b = if i0 + 1 > n_int { ZERO } else { row[i0] };
        a * (1.0 - frac) + b * frac
    };

    let mut values = Vec::with_capacity(prob.t_grid.len());
    for &t in &prob.t_grid {
        if t < 0.0 || t > t_end + 1e-12 {
            return Err(Error::DomainError("t_grid point outside [0, t_end]".into()));
        }
        let pos = (t / dt).min(nt as f64);
        let j0 = (pos.floor() as usize).min(nt - 1);
        let frac = pos - j0 as f64;
        let row: Vec<Complex64> = prob
            .x_grid
            .iter()
            .map(|&x| {
                sample_x(&history[j0], x) * (1.0 - frac) + sample_x(&history[j0 + 1], x) * frac
            })
            .collect();
        values.push(row);
    }
    Ok(HeatGrid { values, nx, nt })
}
