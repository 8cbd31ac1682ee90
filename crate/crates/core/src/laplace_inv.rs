//! Numerical inverse Laplace transform (fixed-Talbot and Bromwich-trapezoid
//! with Euler acceleration) and the M-transform inversion formula built on
//! top of it.
//!
//! The fixed-Talbot contour is the method of choice for images available in
//! closed form; its outer nodes leave the right half-plane, so images that
//! are themselves quadratures (defined only for Re s > 0) must use the
//! Bromwich method, whose nodes all sit on a vertical line Re s > 0.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mtransform::MParams;

/// Which contour the inversion uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InversionMethod {
    /// Abate-Valko fixed-Talbot contour; nodes with Re s < 0 appear.
    TalbotFixed,
    /// Trapezoid on the line Re s = A/(2t) with Euler acceleration of the
    /// alternating tail; all nodes stay in the right half-plane.
    BromwichTrapezoid,
}

#[derive(Debug, Clone, Copy)]
pub struct InversionConfig {
    pub method: InversionMethod,
    pub n_nodes: usize,
    pub bromwich_alpha: f64,
}

impl Default for InversionConfig {
    fn default() -> Self {
        Self {
            method: InversionMethod::TalbotFixed,
            n_nodes: 48,
            bromwich_alpha: 1.0,
        }
    }
}

impl InversionConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_nodes < 16 || self.n_nodes % 2 != 0 {
            return Err(Error::DomainError(
                "inversion needs an even node count >= 16".into(),
            ));
        }
        if !(self.bromwich_alpha > 0.0) {
            return Err(Error::DomainError("bromwich_alpha must be positive".into()));
        }
        Ok(())
    }

    pub fn with_method(self, method: InversionMethod) -> Self {
        Self { method, ..self }
    }
}

/// Outcome of running both inversion methods against each other.
#[derive(Debug, Clone, Copy)]
pub struct InversionDiagnostic {
    pub value: Complex64,
    pub talbot: Complex64,
    pub bromwich: Complex64,
    pub method_delta: f64,
    pub disagree: bool,
}

fn check_t(t: f64) -> Result<()> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::DomainError(format!(
            "inversion needs a positive finite time, got {t}"
        )));
    }
    Ok(())
}

/// Fixed-Talbot rule. Both half-contours are summed explicitly so
/// complex-valued originals (images without conjugate symmetry) invert
/// correctly; for real originals the pair collapses to 2 Re(...).
fn talbot_fixed(
    f: &mut dyn FnMut(Complex64) -> Result<Complex64>,
    t: f64,
    n: usize,
) -> Result<Complex64> {
    let r = 2.0 * n as f64 / (5.0 * t);
    // theta = 0 node: s = r, (1/2i) s'(0) = r/2
    let mut sum = (Complex64::new(r * t, 0.0)).exp() * f(Complex64::new(r, 0.0))?;
    for k in 1..n {
        let theta = k as f64 * std::f64::consts::PI / n as f64;
        let cot = theta.cos() / theta.sin();
        let s = Complex64::new(r * theta * cot, r * theta);
        let sigma = theta + (theta * cot - 1.0) * cot;
        let w = Complex64::new(1.0, sigma);
        let term = (s * t).exp() * f(s)? * w;
        let term_conj = (s.conj() * t).exp() * f(s.conj())? * w.conj();
        sum += term + term_conj;
    }
    let value = sum * r / (2.0 * n as f64);
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(Error::NonFinite { x: t });
    }
    Ok(value)
}

/// Bromwich-line trapezoid with Euler acceleration. The line abscissa is
/// A/(2t) with A chosen so the discretization error e^{-A} sits below the
/// double-precision noise floor, never left of the configured alpha.
fn bromwich_euler(
    f: &mut dyn FnMut(Complex64) -> Result<Complex64>,
    t: f64,
    n: usize,
    alpha: f64,
) -> Result<Complex64> {
    let a_param = (2.0 * alpha * t).max(28.3);
    let c = a_param / (2.0 * t);
    let m_binom = n / 3; // terms entering the binomial average
    let base = n - m_binom;

    let mut partial = f(Complex64::new(c, 0.0))?;
    let mut partials = Vec::with_capacity(m_binom + 1);
    for k in 1..=(base + m_binom) {
        let s_up = Complex64::new(c, k as f64 * std::f64::consts::PI / t);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        partial += sign * (f(s_up)? + f(s_up.conj())?);
        if k >= base {
            partials.push(partial);
        }
    }
    // Euler transform: binomially weighted average of the last partial sums
    let mut binom = 1.0f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for (j, s) in partials.iter().enumerate() {
        acc += binom * s;
        binom *= (m_binom - j) as f64 / (j + 1) as f64;
    }
    let value = acc * (0.5f64).powi(m_binom as i32) * (a_param / 2.0).exp() / (2.0 * t);
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(Error::NonFinite { x: t });
    }
    Ok(value)
}

/// Inverse Laplace transform of `f_img` at time `t` with the configured
/// method.
pub fn inverse_laplace(
    mut f_img: impl FnMut(Complex64) -> Result<Complex64>,
    t: f64,
    cfg: &InversionConfig,
) -> Result<Complex64> {
    cfg.validate()?;
    check_t(t)?;
    match cfg.method {
        InversionMethod::TalbotFixed => talbot_fixed(&mut f_img, t, cfg.n_nodes),
        InversionMethod::BromwichTrapezoid => {
            bromwich_euler(&mut f_img, t, cfg.n_nodes, cfg.bromwich_alpha)
        }
    }
}

/// Runs both methods and reports their relative disagreement; the primary
/// value is the fixed-Talbot one.
pub fn inverse_laplace_checked(
    mut f_img: impl FnMut(Complex64) -> Result<Complex64>,
    t: f64,
    cfg: &InversionConfig,
) -> Result<InversionDiagnostic> {
    cfg.validate()?;
    check_t(t)?;
    let talbot = talbot_fixed(&mut f_img, t, cfg.n_nodes)?;
    let bromwich = bromwich_euler(&mut f_img, t, cfg.n_nodes, cfg.bromwich_alpha)?;
    let method_delta = (talbot - bromwich).norm() / talbot.norm().max(1e-300);
    Ok(InversionDiagnostic {
        value: talbot,
        talbot,
        bromwich,
        method_delta,
        disagree: method_delta > 1e-4,
    })
}

/// Inverse natural transform: N[f](u, omega) = (1/omega) L[f](u/omega), so
/// the original is the inverse Laplace transform of omega * F(omega s).
pub fn inverse_natural(
    mut f_img: impl FnMut(Complex64) -> Result<Complex64>,
    t: f64,
    omega: f64,
    cfg: &InversionConfig,
) -> Result<Complex64> {
    if !(omega > 0.0) {
        return Err(Error::DomainError("inverse_natural needs omega > 0".into()));
    }
    inverse_laplace(|s| Ok(omega * f_img(omega * s)?), t, cfg)
}

/// M-transform inversion: the image's u-section is a Laplace image of the
/// weighted original, so
///
///   f(x) = (x^m/omega^m + omega^m)^rho e^{omega v/x}
///          L^{-1}[Mimg](x / omega).
///
/// The accuracy floor is x >= 0.1 omega: the e^{omega v/x} factor is exact
/// but conditions the recovery badly as x -> 0.
pub fn m_inverse(
    m_img: impl FnMut(Complex64) -> Result<Complex64>,
    x: f64,
    p: &MParams,
    cfg: &InversionConfig,
) -> Result<Complex64> {
    if !(x > 0.0) {
        return Err(Error::DomainError("m_inverse needs x > 0".into()));
    }
    if p.v.re < 0.0 {
        return Err(Error::DomainError("m_inverse needs Re v >= 0".into()));
    }
    let weighted = inverse_laplace(m_img, x / p.omega, cfg)?;
    let pre = (p.rho * p.bracket(x).ln()).exp() * (p.omega * p.v / x).exp();
    Ok(pre * weighted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mtransform::{m_transform, natural, FuncHandle, GrowthBound};
    use crate::quad::QuadConfig;

    fn both_methods() -> [InversionConfig; 2] {
        [
            InversionConfig::default(),
            InversionConfig::default().with_method(InversionMethod::BromwichTrapezoid),
        ]
    }

    #[test]
    fn exponential_image() {
        for cfg in both_methods() {
            let r = inverse_laplace(|s| Ok(1.0 / (s + 1.0)), 1.0, &cfg).unwrap();
            assert!(
                (r.re - (-1.0f64).exp()).abs() < 1e-8,
                "{:?}: got {}",
                cfg.method,
                r.re
            );
            assert!(r.im.abs() < 1e-8);
        }
    }

    #[test]
    fn ramp_image() {
        for cfg in both_methods() {
            let r = inverse_laplace(|s| Ok(1.0 / (s * s)), 2.0, &cfg).unwrap();
            assert!((r.re - 2.0).abs() < 1e-8, "{:?}: got {}", cfg.method, r.re);
        }
    }

    #[test]
    fn sine_image() {
        for cfg in both_methods() {
            let r = inverse_laplace(|s| Ok(1.0 / (s * s + 1.0)), std::f64::consts::FRAC_PI_2, &cfg)
                .unwrap();
            assert!((r.re - 1.0).abs() < 1e-6, "{:?}: got {}", cfg.method, r.re);
        }
    }

    #[test]
    fn linearity() {
        let cfg = InversionConfig::default();
        let alpha = Complex64::new(1.3, -0.4);
        let beta = Complex64::new(-0.7, 2.1);
        let f = |s: Complex64| 1.0 / (s + 1.0);
        let g = |s: Complex64| 1.0 / (s * s);
        let t = 0.7;
        let comb = inverse_laplace(|s| Ok(alpha * f(s) + beta * g(s)), t, &cfg).unwrap();
        let fa = inverse_laplace(|s| Ok(f(s)), t, &cfg).unwrap();
        let gb = inverse_laplace(|s| Ok(g(s)), t, &cfg).unwrap();
        assert!((comb - (alpha * fa + beta * gb)).norm() < 1e-8);
    }

    #[test]
    fn methods_agree_on_corpus() {
        let images: [fn(Complex64) -> Complex64; 3] = [
            |s| 1.0 / (s + 1.0),
            |s| 1.0 / (s * s + 1.0),
            |s| 1.0 / ((s + 0.5) * (s + 0.5)),
        ];
        for img in images {
            for &t in &[0.3, 1.0, 2.5] {
                let d =
                    inverse_laplace_checked(|s| Ok(img(s)), t, &InversionConfig::default())
                        .unwrap();
                assert!(!d.disagree, "t={t}: delta {:.3e}", d.method_delta);
            }
        }
    }

    #[test]
    fn inverse_natural_cases() {
        let cfg = InversionConfig::default();
        // F = 1/u is the natural image of 1 for any omega
        for &t in &[0.5, 1.0, 3.0] {
            let r = inverse_natural(|u| Ok(1.0 / u), t, 2.0, &cfg).unwrap();
            assert!((r.re - 1.0).abs() < 1e-7, "got {}", r.re);
        }
        // omega = 1 is plain inverse Laplace
        let a = inverse_natural(|u| Ok(1.0 / (u + 1.0)), 1.0, 1.0, &cfg).unwrap();
        let b = inverse_laplace(|s| Ok(1.0 / (s + 1.0)), 1.0, &cfg).unwrap();
        assert!((a - b).norm() < 1e-14);
    }

    #[test]
    fn inverse_natural_round_trip_quadrature_backed() {
        // natural image of e^{-t} at omega = 2 evaluated by quadrature; the
        // Bromwich method keeps all nodes right of the imaginary axis
        let f = FuncHandle::real("exp(-x)", |x| (-x).exp(), GrowthBound::decaying());
        let qcfg = QuadConfig::default();
        let cfg = InversionConfig::default().with_method(InversionMethod::BromwichTrapezoid);
        let r = inverse_natural(
            |u| Ok(natural(&f, u, 2.0, &qcfg)?.value),
            1.0,
            2.0,
            &cfg,
        )
        .unwrap();
        assert!(
            (r.re - (-1.0f64).exp()).abs() < 1e-7,
            "round trip got {}",
            r.re
        );
    }

    #[test]
    fn m_inverse_reduces_to_laplace() {
        // rho = v = 0, omega = 1: plain inverse Laplace
        let p = MParams::real(0.0, 1, 1.0, 0.0, 1.0).unwrap();
        let cfg = InversionConfig::default();
        let a = m_inverse(|s| Ok(1.0 / (s + 1.0)), 1.3, &p, &cfg).unwrap();
        let b = inverse_laplace(|s| Ok(1.0 / (s + 1.0)), 1.3, &cfg).unwrap();
        assert!((a - b).norm() < 1e-14);
    }

    #[test]
    fn m_inverse_round_trip_exponential() {
        let f = FuncHandle::real("exp(-x)", |x| (-x).exp(), GrowthBound::decaying());
        let p = MParams::real(1.0, 1, 1.0, 1.0, 2.0).unwrap();
        let qcfg = QuadConfig::default();
        let icfg = InversionConfig::default().with_method(InversionMethod::BromwichTrapezoid);
        for &x in &[0.5, 1.0, 2.0] {
            let r = m_inverse(
                |u| Ok(m_transform(&f, &p.with_u(u), &qcfg)?.value),
                x,
                &p,
                &icfg,
            )
            .unwrap();
            assert!(
                (r.re - (-x).exp()).abs() < 1e-5,
                "x = {x}: got {} want {}",
                r.re,
                (-x).exp()
            );
        }
    }

    #[test]
    fn m_inverse_round_trip_unit() {
        let one = FuncHandle::real("1", |_| 1.0, GrowthBound::decaying());
        let p = MParams::real(0.5, 2, 1.0, 0.5, 1.0).unwrap();
        let qcfg = QuadConfig::default();
        let icfg = InversionConfig::default().with_method(InversionMethod::BromwichTrapezoid);
        let r = m_inverse(
            |u| Ok(m_transform(&one, &p.with_u(u), &qcfg)?.value),
            1.0,
            &p,
            &icfg,
        )
        .unwrap();
        assert!((r.re - 1.0).abs() < 1e-5, "got {}", r.re);
    }

    #[test]
    fn config_validation() {
        let bad = InversionConfig {
            n_nodes: 7,
            ..InversionConfig::default()
        };
        assert!(bad.validate().is_err());
        assert!(inverse_laplace(|_| Ok(Complex64::new(0.0, 0.0)), -1.0, &InversionConfig::default()).is_err());
    }
}
