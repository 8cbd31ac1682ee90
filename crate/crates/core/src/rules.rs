//! Closed-form M-images of power/exponential functions via the extended
//! H-function, and the operational calculus: scaling, elimination, the
//! further-images table, and the derivative rule with its weighted corollary.

use num_complex::Complex64;
use std::cell::Cell;

use crate::error::{Error, Result};
use crate::mtransform::{m_transform, natural, FuncHandle, MParams};
use crate::quad::{integrate_semi_infinite, QuadConfig};
use crate::report::ResidualReport;
use crate::specfun::{gamma, h_ext_2112, ContourSpec, ExtHParams};

fn cpow(base: f64, expo: Complex64) -> Complex64 {
    // positive real base, real logarithm fixes the branch
    (expo * base.ln()).exp()
}

fn image_preconditions(p: &MParams) -> Result<()> {
    if p.rho == Complex64::new(0.0, 0.0) {
        return Err(Error::DomainError(
            "closed-form images need rho != 0 (gamma(rho) in the denominator); \
             use direct quadrature instead"
                .into(),
        ));
    }
    if p.rho.re <= 0.0 {
        return Err(Error::DomainError("closed-form images need Re rho > 0".into()));
    }
    if p.u.re <= 0.0 {
        return Err(Error::DomainError("closed-form images need Re u > 0".into()));
    }
    if (p.u * p.v).re < 0.0 {
        return Err(Error::DomainError("closed-form images need Re(uv) >= 0".into()));
    }
    Ok(())
}

/// M-image of x^{lambda-1}:
/// omega^{lambda - m rho - 1} u^{-lambda} / (m Gamma(rho)) *
/// H^{2,1}_{1,2}[u omega | (1,1/m); (lambda,1)_{uv}, (rho,1/m)].
pub fn image_power(lambda: Complex64, p: &MParams) -> Result<Complex64> {
    if lambda.re <= 0.0 {
        return Err(Error::DomainError("image_power needs Re lambda > 0".into()));
    }
    image_preconditions(p)?;
    let m = p.m as f64;
    let hp = ExtHParams {
        a: Complex64::new(1.0, 0.0),
        alpha: 1.0 / m,
        b1: lambda,
        beta1: 1.0,
        b_ext: p.u * p.v,
        b2: p.rho,
        beta2: 1.0 / m,
    };
    let spec = ContourSpec::for_params(&hp, 1e-12)?;
    let h = h_ext_2112(p.u * p.omega, &hp, &spec)?;
    let mrho = Complex64::new(m, 0.0) * p.rho;
    let prefactor =
        cpow(p.omega, lambda - mrho - 1.0) * p.u.powc(-lambda) / (m * gamma(p.rho)?);
    Ok(prefactor * h)
}

/// M-image of e^{-a x}:
/// omega^{-m rho} / (m (u + a omega) Gamma(rho)) *
/// H^{2,1}_{1,2}[omega(u + a omega) | (1,1/m); (1,1)_{(u+a omega)v}, (rho,1/m)].
pub fn image_exponential(a: f64, p: &MParams) -> Result<Complex64> {
    if a < 0.0 {
        return Err(Error::DomainError("image_exponential needs a >= 0".into()));
    }
    image_preconditions(p)?;
    let m = p.m as f64;
    let s = p.u + a * p.omega;
    let hp = ExtHParams {
        a: Complex64::new(1.0, 0.0),
        alpha: 1.0 / m,
        b1: Complex64::new(1.0, 0.0),
        beta1: 1.0,
        b_ext: s * p.v,
        b2: p.rho,
        beta2: 1.0 / m,
    };
    let spec = ContourSpec::for_params(&hp, 1e-12)?;
    let h = h_ext_2112(p.omega * s, &hp, &spec)?;
    let mrho = Complex64::new(m, 0.0) * p.rho;
    Ok(cpow(p.omega, -mrho) / (m * s * gamma(p.rho)?) * h)
}

/// M-image of x^{lambda-1} e^{-a x}: the power image at the shifted argument
/// u -> u + a omega (the extension parameter shifts with it).
pub fn image_power_exponential(lambda: Complex64, a: f64, p: &MParams) -> Result<Complex64> {
    if a < 0.0 {
        return Err(Error::DomainError("image_power_exponential needs a >= 0".into()));
    }
    image_power(lambda, &p.with_u(p.u + a * p.omega))
}

/// A closed-form image request; `eval` dispatches to the formula above.
#[derive(Debug, Clone, Copy)]
pub enum ImageKind {
    Power,
    Exponential,
    PowerExponential,
    Unit,
}

#[derive(Debug, Clone, Copy)]
pub struct ImageFormula {
    pub kind: ImageKind,
    pub lambda: Complex64,
    pub a: f64,
    pub params: MParams,
}

impl ImageFormula {
    pub fn eval(&self) -> Result<Complex64> {
        match self.kind {
            ImageKind::Power => image_power(self.lambda, &self.params),
            ImageKind::Exponential => image_exponential(self.a, &self.params),
            ImageKind::PowerExponential => {
                image_power_exponential(self.lambda, self.a, &self.params)
            }
            ImageKind::Unit => image_power(Complex64::new(1.0, 0.0), &self.params),
        }
    }
}

/// Scaling property: M[f(alpha^2 x)](u,v,omega) =
/// alpha^{m rho - 1} M[f](u/alpha, alpha v, alpha omega).
pub fn apply_scaling(
    f: &FuncHandle,
    alpha: f64,
    p: &MParams,
    cfg: &QuadConfig,
) -> Result<ResidualReport> {
    if !(alpha > 0.0) {
        return Err(Error::DomainError("scaling needs alpha > 0".into()));
    }
    let fe = f.eval.clone();
    let a2 = alpha * alpha;
    let scaled = FuncHandle::new(
        format!("{}(alpha^2 x)", f.label),
        move |x| fe(a2 * x),
        f.growth,
    );
    let lhs = m_transform(&scaled, p, cfg)?;
    let q = MParams {
        u: p.u / alpha,
        v: alpha * p.v,
        omega: alpha * p.omega,
        ..*p
    };
    let rhs = m_transform(f, &q, cfg)?;
    let mrho = Complex64::new(p.m as f64, 0.0) * p.rho;
    let rhs_val = cpow(alpha, mrho - 1.0) * rhs.value;
    Ok(ResidualReport::new(
        "scaling",
        lhs.value,
        rhs_val,
        1e-8,
        lhs.n_evals + rhs.n_evals,
    ))
}

/// Elimination property: M_{rho,m}[(x^m/omega^m + omega^m)^eta f] =
/// M_{rho-eta,m}[f]; at eta = rho the left side also equals the natural
/// transform of e^{-v omega/x} f.
pub fn apply_elimination(
    f: &FuncHandle,
    eta: Complex64,
    p: &MParams,
    cfg: &QuadConfig,
) -> Result<Vec<ResidualReport>> {
    if (p.rho - eta).re < 0.0 {
        return Err(Error::DomainError(format!(
            "elimination needs Re(rho - eta) >= 0, got rho = {}, eta = {}",
            p.rho, eta
        )));
    }
    let (pp, fe) = (*p, f.eval.clone());
    let weighted = FuncHandle::new(
        format!("bracket^eta {}", f.label),
        move |x| (eta * pp.bracket(x).ln()).exp() * fe(x),
        f.growth,
    );
    let lhs = m_transform(&weighted, p, cfg)?;
    let reduced = MParams {
        rho: p.rho - eta,
        ..*p
    };
    let rhs = m_transform(f, &reduced, cfg)?;
    let mut out = vec![ResidualReport::new(
        "elimination",
        lhs.value,
        rhs.value,
        1e-8,
        lhs.n_evals + rhs.n_evals,
    )];
    if eta == p.rho {
        let (pp, fe) = (*p, f.eval.clone());
        let damped = FuncHandle::new(
            format!("e^(-v omega/x) {}", f.label),
            move |x| {
                let e = -pp.v * pp.omega / x;
                if e.re < -700.0 {
                    return Complex64::new(0.0, 0.0);
                }
                e.exp() * fe(x)
            },
            f.growth,
        );
        let nat = natural(&damped, p.u, p.omega, cfg)?;
        out.push(ResidualReport::new(
            "elimination_natural",
            lhs.value,
            nat.value,
            1e-8,
            lhs.n_evals + nat.n_evals,
        ));
    }
    Ok(out)
}

/// Central finite difference of order `n` (1 or 2) with one Richardson step.
fn fd_derivative(
    mut g: impl FnMut(f64) -> Result<Complex64>,
    n: u32,
    h: f64,
) -> Result<Complex64> {
    let diff = |g: &mut dyn FnMut(f64) -> Result<Complex64>, h: f64| -> Result<Complex64> {
        Ok(match n {
            1 => (g(h)? - g(-h)?) / (2.0 * h),
            2 => (g(h)? - 2.0 * g(0.0)? + g(-h)?) / (h * h),
            _ => unreachable!(),
        })
    };
    let d1 = diff(&mut g, h)?;
    let d2 = diff(&mut g, h / 2.0)?;
    // both stencils are O(h^2)
    Ok((4.0 * d2 - d1) / 3.0)
}

/// int_lower^inf g(s) ds, iterated `depth` times (innermost variable
/// integrated first). Used for the tail-integral table rows; depth <= 2.
fn iterated_tail(
    g: &dyn Fn(f64) -> Result<Complex64>,
    lower: f64,
    depth: u32,
    cfg: &QuadConfig,
    evals: &Cell<usize>,
) -> Result<Complex64> {
    // cost grows multiplicatively with nesting depth; the outermost level of
    // a double integral gets the loosest (still sub-check-tolerance) target
    let (rel_tol, max_levels) = if depth >= 2 { (1e-8, 7) } else { (1e-9, 8) };
    let outer_cfg = QuadConfig {
        rel_tol,
        abs_tol: 1e-12,
        max_levels,
        max_evals: cfg.inner().max_evals,
    };
    let mut first_err: Option<Error> = None;
    let r = integrate_semi_infinite(
        |y| {
            let s = lower + y;
            let val = if depth == 1 {
                g(s)
            } else {
                iterated_tail(g, s, depth - 1, cfg, evals)
            };
            match val {
                Ok(v) => v,
                Err(e) => {
                    if first_err.is_none() {
                        first_err = Some(e);
                    }
                    Complex64::new(f64::NAN, f64::NAN)
                }
            }
        },
        &outer_cfg,
    );
    if let Some(e) = first_err {
        return Err(e);
    }
    let r = r?;
    evals.set(evals.get() + r.n_evals);
    Ok(r.value)
}

/// Checks all six further-image table rows for the weight x^n (rows 1-2),
/// x^{-n} (rows 3-4) and the shifts e^{-a/x}, e^{-ax} (rows 5-6).
/// Rows with nested tail integrals (2 and 3) support n <= 2.
pub fn table1_residuals(
    f: &FuncHandle,
    n: u32,
    a: f64,
    p: &MParams,
    cfg: &QuadConfig,
) -> Result<Vec<ResidualReport>> {
    if n == 0 || n > 2 {
        return Err(Error::UnsupportedOrder(n));
    }
    let fd_tol = 1e-5;
    let quad_tol = 1e-7;
    let mut out = Vec::new();

    let xn_f = {
        let (fe, ni) = (f.eval.clone(), n as i32);
        FuncHandle::new(
            format!("x^{n} {}", f.label),
            move |x| x.powi(ni) * fe(x),
            f.growth,
        )
    };
    let xmn_f = {
        let (fe, ni) = (f.eval.clone(), n as i32);
        FuncHandle::new(
            format!("x^-{n} {}", f.label),
            move |x| x.powi(-ni) * fe(x),
            f.growth,
        )
    };
    let m_xn = m_transform(&xn_f, p, cfg)?;
    let omega_n = p.omega.powi(n as i32);

    // row 1: M[x^n f] = (-1)^n omega^n d^n/du^n M[f]
    {
        let counter = Cell::new(0usize);
        let du = |h: f64| -> Result<Complex64> {
            let r = m_transform(f, &p.with_u(p.u + h), cfg)?;
            counter.set(counter.get() + r.n_evals);
            Ok(r.value)
        };
        let step = 1e-3 * p.u.norm().max(1.0);
        let d = fd_derivative(du, n, step)?;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        out.push(ResidualReport::new(
            "table1_row1_du",
            m_xn.value,
            sign * omega_n * d,
            fd_tol,
            m_xn.n_evals + counter.get(),
        ));
    }

    // row 2: M[x^n f] = omega^n * iterated integral over the v-tail
    {
        let counter = Cell::new(0usize);
        let g = |s: f64| -> Result<Complex64> {
            let q = MParams {
                v: Complex64::new(s, 0.0),
                v_exactly_zero: false,
                ..*p
            };
            let r = m_transform(f, &q, &cfg.inner())?;
            counter.set(counter.get() + r.n_evals);
            Ok(r.value)
        };
        let tail = iterated_tail(&g, p.v.re, n, cfg, &counter)?;
        out.push(ResidualReport::new(
            "table1_row2_vtail",
            m_xn.value,
            omega_n * tail,
            quad_tol,
            m_xn.n_evals + counter.get(),
        ));
    }

    let m_xmn = m_transform(&xmn_f, p, cfg)?;

    // row 3: M[f/x^n] = omega^{-n} * iterated integral over the u-tail
    {
        let counter = Cell::new(0usize);
        let g = |s: f64| -> Result<Complex64> {
            let r = m_transform(f, &p.with_u(Complex64::new(s, 0.0)), &cfg.inner())?;
            counter.set(counter.get() + r.n_evals);
            Ok(r.value)
        };
        let tail = iterated_tail(&g, p.u.re, n, cfg, &counter)?;
        out.push(ResidualReport::new(
            "table1_row3_utail",
            m_xmn.value,
            tail / omega_n,
            quad_tol,
            m_xmn.n_evals + counter.get(),
        ));
    }

    // row 4: M[f/x^n] = (-1)^n omega^{-n} d^n/dv^n M[f] (needs Re v > 0)
    if p.v.re > 0.0 {
        let counter = Cell::new(0usize);
        let dv = |h: f64| -> Result<Complex64> {
            let q = MParams {
                v: p.v + h,
                v_exactly_zero: false,
                ..*p
            };
            let r = m_transform(f, &q, cfg)?;
            counter.set(counter.get() + r.n_evals);
            Ok(r.value)
        };
        let step = 1e-3 * p.v.norm().max(1e-2);
        let d = fd_derivative(dv, n, step)?;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        out.push(ResidualReport::new(
            "table1_row4_dv",
            m_xmn.value,
            sign / omega_n * d,
            fd_tol,
            m_xmn.n_evals + counter.get(),
        ));
    }

    // row 5: M[e^{-a/x} f] = M[f](u, v + a/omega, omega)
    {
        let (fe, aa) = (f.eval.clone(), a);
        let shifted_f = FuncHandle::new(
            format!("e^(-a/x) {}", f.label),
            move |x| {
                if aa / x > 700.0 {
                    return Complex64::new(0.0, 0.0);
                }
                (-aa / x).exp() * fe(x)
            },
            f.growth,
        );
        let lhs = m_transform(&shifted_f, p, cfg)?;
        let q = MParams {
            v: p.v + a / p.omega,
            v_exactly_zero: p.v_exactly_zero && a == 0.0,
            ..*p
        };
        let rhs = m_transform(f, &q, cfg)?;
        out.push(ResidualReport::new(
            "table1_row5_vshift",
            lhs.value,
            rhs.value,
            quad_tol,
            lhs.n_evals + rhs.n_evals,
        ));
    }

    // row 6: M[e^{-ax} f] = M[f](u + a omega, v, omega)
    {
        let (fe, aa) = (f.eval.clone(), a);
        let damped_f = FuncHandle::new(
            format!("e^(-ax) {}", f.label),
            move |x| (-aa * x).exp() * fe(x),
            f.growth,
        );
        let lhs = m_transform(&damped_f, p, cfg)?;
        let rhs = m_transform(f, &p.with_u(p.u + a * p.omega), cfg)?;
        out.push(ResidualReport::new(
            "table1_row6_ushift",
            lhs.value,
            rhs.value,
            quad_tol,
            lhs.n_evals + rhs.n_evals,
        ));
    }

    Ok(out)
}

/// Value of the derivative-rule right-hand side together with its residual
/// against the directly-quadratured left side.
#[derive(Debug, Clone)]
pub struct DerivativeResult {
    pub value: Complex64,
    pub report: ResidualReport,
}

/// Derivative rule: expresses M[f^{(n)}] through M[f] and lower-order data.
/// The x^{-2} sum carries the factor v and is skipped entirely when v is
/// declared exactly zero (its coefficient vanishes and the individual
/// transforms may diverge).
pub fn m_derivative(
    f: &FuncHandle,
    n: u32,
    p: &MParams,
    cfg: &QuadConfig,
) -> Result<DerivativeResult> {
    derivative_rule(f, n, Complex64::new(0.0, 0.0), p, cfg, "m_derivative")
}

/// Weighted corollary: M[(x^m/omega^m + omega^m)^nu f^{(n)}] expressed with
/// rho replaced by rho - nu throughout (the last sum uses rho - nu + 1).
pub fn m_derivative_weighted(
    f: &FuncHandle,
    n: u32,
    nu: Complex64,
    p: &MParams,
    cfg: &QuadConfig,
) -> Result<DerivativeResult> {
    derivative_rule(f, n, nu, p, cfg, "m_derivative_weighted")
}

fn derivative_rule(
    f: &FuncHandle,
    n: u32,
    nu: Complex64,
    p: &MParams,
    cfg: &QuadConfig,
    id: &str,
) -> Result<DerivativeResult> {
    if n == 0 || n > 4 {
        return Err(Error::UnsupportedOrder(n));
    }
    if (p.rho - nu).re < 0.0 {
        return Err(Error::DomainError(format!(
            "weighted derivative rule needs Re(rho - nu) >= 0, got rho = {}, nu = {}",
            p.rho, nu
        )));
    }
    f.deriv(n)?; // all lower orders exist if n does, but check up front
    for k in 1..n {
        f.deriv(k)?;
    }
    let m = p.m as f64;
    let omega = p.omega;
    let rho_eff = p.rho - nu;
    let p_eff = MParams {
        rho: rho_eff,
        ..*p
    };
    let mut n_evals = 0usize;

    // (u/omega)^n M_{rho-nu}[f]
    let base = m_transform(f, &p_eff, cfg)?;
    n_evals += base.n_evals;
    let mut rhs = (p.u / omega).powu(n) * base.value;

    // boundary sum, present only for v exactly zero
    if p.v_exactly_zero {
        let m_rho_eff = Complex64::new(m, 0.0) * rho_eff;
        for k in 0..n {
            let fk = f.deriv(n - k - 1)?;
            rhs -= p.u.powu(k) * cpow(omega, -(m_rho_eff + (k + 1) as f64)) * fk(0.0);
        }
    } else {
        // -v omega sum of (u/omega)^k M_{rho-nu}[x^{-2} f^{(n-k-1)}]
        for k in 0..n {
            let fk = f.deriv(n - k - 1)?.clone();
            let h = FuncHandle::new(
                format!("x^-2 d^{}({})", n - k - 1, f.label),
                move |x| fk(x) / (x * x),
                f.growth,
            );
            let t = m_transform(&h, &p_eff, cfg)?;
            n_evals += t.n_evals;
            rhs -= p.v * omega * (p.u / omega).powu(k) * t.value;
        }
    }

    // + m(rho-nu)/omega^m sum of (u/omega)^k M_{rho-nu+1}[x^{m-1} f^{(n-k-1)}]
    if rho_eff != Complex64::new(0.0, 0.0) {
        let p_up = MParams {
            rho: rho_eff + 1.0,
            ..*p
        };
        for k in 0..n {
            let fk = f.deriv(n - k - 1)?.clone();
            let mm = p.m as i32;
            let h = FuncHandle::new(
                format!("x^(m-1) d^{}({})", n - k - 1, f.label),
                move |x| x.powi(mm - 1) * fk(x),
                f.growth,
            );
            let t = m_transform(&h, &p_up, cfg)?;
            n_evals += t.n_evals;
            rhs += m * rho_eff / omega.powi(p.m as i32) * (p.u / omega).powu(k) * t.value;
        }
    }

    // direct quadrature of the left side
    let lhs = if nu == Complex64::new(0.0, 0.0) {
        let fn_handle = FuncHandle {
            eval: f.deriv(n)?.clone(),
            growth: f.growth,
            derivs: Vec::new(),
            label: format!("d^{n}({})", f.label),
        };
        m_transform(&fn_handle, p, cfg)?
    } else {
        let (pp, fe) = (*p, f.deriv(n)?.clone());
        let weighted = FuncHandle::new(
            format!("bracket^nu d^{n}({})", f.label),
            move |x| (nu * pp.bracket(x).ln()).exp() * fe(x),
            f.growth,
        );
        m_transform(&weighted, p, cfg)?
    };
    n_evals += lhs.n_evals;

    let report = ResidualReport::new(id, lhs.value, rhs, 1e-7, n_evals);
    Ok(DerivativeResult { value: rhs, report })
}
