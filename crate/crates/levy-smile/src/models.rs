//! Model parameter sets, characteristic (Levy) exponents on the analyticity
//! strip, martingale drifts, Levy densities, and moment summaries.

use crate::error::{LevyError, Result};
use crate::quad;
use crate::special::{bessel_k1, gamma, norm_pdf};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

pub type C64 = Complex64;

const I: C64 = C64::new(0.0, 1.0);

/// Threshold below which alpha is treated as exactly 0 or 1 to avoid the
/// Gamma(-alpha) poles.
pub const ALPHA_BRANCH_EPS: f64 = 1e-6;

/// Union of all supported model parameter sets. Serialized as a JSON object
/// tagged by `variant`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant")]
pub enum ModelSpec {
    #[serde(rename = "TSP")]
    Tsp {
        alpha: f64,
        sigma: f64,
        c_plus: f64,
        c_minus: f64,
        kappa_plus: f64,
        kappa_minus: f64,
    },
    #[serde(rename = "NIG")]
    Nig { sigma: f64, varkappa_bar: f64 },
    #[serde(rename = "Merton")]
    Merton { sigma: f64, lambda: f64, mu: f64, eta: f64 },
    #[serde(rename = "Heston")]
    Heston { kappa: f64, theta: f64, epsilon: f64, rho: f64, varpi0: f64 },
    #[serde(rename = "BS")]
    Bs { sigma: f64 },
    #[serde(rename = "QVP")]
    Qvp { a: f64, p: f64, q: f64 },
}

/// Drift convention selecting which PIDE form the drift belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DriftConvention {
    /// gamma of the truncated form: -int (e^x - 1 - x 1_{|x|<=1}) nu(dx)
    Truncated,
    /// gamma' of the finite-variation form: -int (e^x - 1) nu(dx)
    FiniteVariation,
    /// gamma'' of the fully compensated form: -int (e^x - 1 - x) nu(dx)
    Compensated,
}

/// Derived TSP quantities shared by the exponent, PIDE, and short-time code.
#[derive(Debug, Clone, Copy)]
pub struct TspDerived {
    pub a_plus: f64,
    pub a_minus: f64,
    pub zeta_plus: f64,
    pub zeta_minus: f64,
    pub eta_plus: f64,
    pub eta_minus: f64,
    pub gamma: f64,
    pub delta: f64,
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub chi: f64,
}

impl TspDerived {
    /// Only valid away from the alpha in {0, 1} branches.
    pub fn new(alpha: f64, c_plus: f64, c_minus: f64, kappa_plus: f64, kappa_minus: f64) -> Self {
        let g = gamma(-alpha);
        let a_plus = g * c_plus;
        let a_minus = g * c_minus;
        let zeta_plus = kappa_plus.powf(alpha) - (kappa_plus - 1.0).powf(alpha);
        let zeta_minus = kappa_minus.powf(alpha) - (kappa_minus + 1.0).powf(alpha);
        let eta_plus = -kappa_plus.powf(alpha);
        let eta_minus = -kappa_minus.powf(alpha);
        let gamma_drift = a_plus * zeta_plus + a_minus * zeta_minus;
        let delta = a_plus * eta_plus + a_minus * eta_minus;
        let p = (a_plus + a_minus) * (PI * alpha / 2.0).cos();
        let q = -(a_plus - a_minus) * (PI * alpha / 2.0).sin();
        let r = p.hypot(q);
        let chi = (-q / p).atan();
        TspDerived {
            a_plus,
            a_minus,
            zeta_plus,
            zeta_minus,
            eta_plus,
            eta_minus,
            gamma: gamma_drift,
            delta,
            p,
            q,
            r,
            chi,
        }
    }
}

impl ModelSpec {
    /// TSP from the tempered-stable scale parametrization
    /// nu(dx) = -sec(alpha pi/2)/Gamma(-alpha) * vartheta_s^alpha e^{-kappa|x|}/|x|^{1+alpha}.
    pub fn tsp_from_vartheta(
        alpha: f64,
        sigma: f64,
        vartheta_plus: f64,
        vartheta_minus: f64,
        kappa_plus: f64,
        kappa_minus: f64,
    ) -> Self {
        let conv = |vt: f64| {
            if vt == 0.0 {
                0.0
            } else if (alpha - 1.0).abs() < ALPHA_BRANCH_EPS {
                // sec(pi/2)/Gamma(-1) -> -2/pi
                2.0 / PI * vt
            } else {
                -(1.0 / (alpha * PI / 2.0).cos()) * vt.powf(alpha) / gamma(-alpha)
            }
        };
        ModelSpec::Tsp {
            alpha,
            sigma,
            c_plus: conv(vartheta_plus),
            c_minus: conv(vartheta_minus),
            kappa_plus,
            kappa_minus,
        }
    }

    /// NIG from the subordinator parametrization (varkappa_1, sigma_1).
    pub fn nig_from_subordinator(sigma: f64, varkappa_1: f64, sigma_1: f64) -> Self {
        ModelSpec::Nig { sigma, varkappa_bar: varkappa_1 / (sigma_1 * sigma) }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: &str| Err(LevyError::OutOfBounds(m.into()));
        match *self {
            ModelSpec::Tsp { alpha, sigma, c_plus, c_minus, kappa_plus, kappa_minus } => {
                if alpha >= 2.0 {
                    return fail("TSP requires alpha < 2");
                }
                if sigma < 0.0 || c_plus < 0.0 || c_minus < 0.0 || c_plus + c_minus == 0.0 {
                    return fail("TSP requires sigma >= 0, c+- >= 0, c+ + c- > 0");
                }
                if kappa_plus < 1.0 || kappa_minus < 0.0 {
                    return fail("TSP requires kappa_plus >= 1 and kappa_minus >= 0");
                }
                Ok(())
            }
            ModelSpec::Nig { sigma, varkappa_bar } => {
                if sigma <= 0.0 || varkappa_bar <= 0.0 {
                    return fail("NIG requires sigma > 0 and varkappa_bar > 0");
                }
                Ok(())
            }
            ModelSpec::Merton { sigma, lambda, eta, .. } => {
                if sigma < 0.0 || lambda <= 0.0 || eta <= 0.0 {
                    return fail("Merton requires sigma >= 0, lambda > 0, eta > 0");
                }
                Ok(())
            }
            ModelSpec::Heston { kappa, theta, epsilon, rho, varpi0 } => {
                if kappa <= 0.0 || theta <= 0.0 || epsilon <= 0.0 || varpi0 <= 0.0 {
                    return fail("Heston requires kappa, theta, epsilon, varpi0 > 0");
                }
                if !(-1.0..=1.0).contains(&rho) || rho.abs() == 1.0 {
                    return fail("Heston requires rho in (-1, 1)");
                }
                Ok(())
            }
            ModelSpec::Bs { sigma } => {
                if sigma <= 0.0 {
                    return fail("BS requires sigma > 0");
                }
                Ok(())
            }
            ModelSpec::Qvp { a, q, .. } => {
                if a <= 0.0 || q <= 0.0 {
                    return fail("QVP requires a > 0 and q > 0 (complex roots)");
                }
                Ok(())
            }
        }
    }

    /// Diffusion volatility entering the -sigma^2 Q(u)/2 part of the shifted
    /// exponent. The NIG `sigma` is a subordinated scale, not a diffusion.
    pub fn diffusion_sigma(&self) -> f64 {
        match *self {
            ModelSpec::Tsp { sigma, .. } | ModelSpec::Merton { sigma, .. } | ModelSpec::Bs { sigma } => sigma,
            _ => 0.0,
        }
    }

    pub fn is_levy(&self) -> bool {
        !matches!(self, ModelSpec::Heston { .. } | ModelSpec::Qvp { .. })
    }

    pub fn tsp_derived(&self) -> Option<TspDerived> {
        match *self {
            ModelSpec::Tsp { alpha, c_plus, c_minus, kappa_plus, kappa_minus, .. }
                if alpha.abs() >= ALPHA_BRANCH_EPS && (alpha - 1.0).abs() >= ALPHA_BRANCH_EPS =>
            {
                Some(TspDerived::new(alpha, c_plus, c_minus, kappa_plus, kappa_minus))
            }
            _ => None,
        }
    }

    pub fn nig_omega_bar(&self) -> Option<f64> {
        match *self {
            ModelSpec::Nig { varkappa_bar, .. } => Some((varkappa_bar * varkappa_bar + 0.25).sqrt()),
            _ => None,
        }
    }

    pub fn merton_q(&self) -> Option<f64> {
        match *self {
            ModelSpec::Merton { mu, eta, .. } => Some(mu + 0.5 * eta * eta),
            _ => None,
        }
    }

    /// (kappa_hat, kappa_check, rho_bar); recomputed every call.
    pub fn heston_derived(&self) -> Option<(f64, f64, f64)> {
        match *self {
            ModelSpec::Heston { kappa, epsilon, rho, .. } => {
                let kappa_hat = kappa - rho * epsilon / 2.0;
                Some((kappa_hat, kappa_hat / epsilon, (1.0 - rho * rho).sqrt()))
            }
            _ => None,
        }
    }

    /// Strip of analyticity of psi: Im(u) in (-lower, upper).
    fn psi_strip(&self) -> (f64, f64) {
        match *self {
            ModelSpec::Tsp { kappa_plus, kappa_minus, .. } => (kappa_plus, kappa_minus),
            ModelSpec::Nig { varkappa_bar, .. } => {
                let omega = (varkappa_bar * varkappa_bar + 0.25).sqrt();
                (0.5 + omega, omega - 0.5)
            }
            _ => (f64::INFINITY, f64::INFINITY),
        }
    }

    /// Levy exponent psi(u), martingale-normalized so psi(0) = psi(-i) = 0.
    pub fn levy_exponent(&self, u: C64) -> Result<C64> {
        if !self.is_levy() {
            return Err(LevyError::UnsupportedVariant(
                "Heston/QVP are priced through their own transform factors".into(),
            ));
        }
        let (lower, upper) = self.psi_strip();
        if u.im < -lower || u.im > upper {
            return Err(LevyError::StripViolation(format!(
                "Im(u) = {} outside ({}, {})",
                u.im, -lower, upper
            )));
        }
        Ok(self.psi_unchecked(u))
    }

    /// psi without the strip check; used by integrands that stay on admissible
    /// contours by construction.
    pub(crate) fn psi_unchecked(&self, u: C64) -> C64 {
        let iu = I * u;
        match *self {
            ModelSpec::Bs { sigma } => -0.5 * sigma * sigma * u * (u + I),
            ModelSpec::Merton { sigma, lambda, mu, eta } => {
                let q = mu + 0.5 * eta * eta;
                -0.5 * sigma * sigma * u * (u + I)
                    + lambda * ((iu * mu - 0.5 * eta * eta * u * u).exp() - 1.0)
                    + lambda * (1.0 - q.exp()) * iu
            }
            ModelSpec::Nig { sigma, varkappa_bar } => {
                let s2k = sigma * sigma * varkappa_bar;
                s2k * (varkappa_bar - (varkappa_bar * varkappa_bar + u * (u + I)).sqrt())
            }
            ModelSpec::Tsp { alpha, sigma, c_plus, c_minus, kappa_plus, kappa_minus } => {
                let diff = -0.5 * sigma * sigma * u * (u + I);
                if alpha.abs() < ALPHA_BRANCH_EPS {
                    // log branch at alpha = 0
                    let mut acc = C64::new(0.0, 0.0);
                    for (c, k, s) in [(c_plus, kappa_plus, 1.0), (c_minus, kappa_minus, -1.0)] {
                        if c == 0.0 {
                            continue;
                        }
                        let lg = (C64::new(k, 0.0) / (C64::new(k, 0.0) - s * iu)).ln();
                        let lin = (k / (k - s)).ln();
                        acc += c * (lg - lin * iu);
                    }
                    diff + acc
                } else if (alpha - 1.0).abs() < ALPHA_BRANCH_EPS {
                    let mut acc = C64::new(0.0, 0.0);
                    for (c, k, s) in [(c_plus, kappa_plus, 1.0), (c_minus, kappa_minus, -1.0)] {
                        if c == 0.0 {
                            continue;
                        }
                        let w = C64::new(k, 0.0) - s * iu;
                        let lin = (k - s) * ((k - s) / k).ln();
                        acc += c * (w * (w / k).ln() - lin * iu);
                    }
                    diff + acc
                } else {
                    let d = TspDerived::new(alpha, c_plus, c_minus, kappa_plus, kappa_minus);
                    let mut acc = C64::new(d.delta, 0.0) + d.gamma * iu;
                    for (a, k, s) in [(d.a_plus, kappa_plus, 1.0), (d.a_minus, kappa_minus, -1.0)] {
                        if a == 0.0 {
                            continue;
                        }
                        acc += a * (C64::new(k, 0.0) - s * iu).powc(C64::new(alpha, 0.0));
                    }
                    diff + acc
                }
            }
            _ => unreachable!("psi_unchecked called on a non-Levy variant"),
        }
    }

    /// Pure-jump-and-drift part psi_0 = psi + sigma^2 u(u+i)/2.
    pub(crate) fn psi0_unchecked(&self, u: C64) -> C64 {
        let s = self.diffusion_sigma();
        self.psi_unchecked(u) + 0.5 * s * s * u * (u + I)
    }

    /// Shifted exponents upsilon(u) = psi(u - i/2), upsilon0(u) = psi_0(u - i/2)
    /// for real u.
    pub fn shifted_exponent(&self, u: f64) -> Result<(C64, C64)> {
        if !self.is_levy() {
            return Err(LevyError::UnsupportedVariant(
                "shifted exponent defined for Levy variants only".into(),
            ));
        }
        let z = C64::new(u, -0.5);
        let ups = self.levy_exponent(z)?;
        let s = self.diffusion_sigma();
        let q = C64::new(u * u + 0.25, 0.0);
        let ups0 = ups + 0.5 * s * s * q;
        Ok((ups, ups0))
    }

    /// Drift gamma / gamma' / gamma'' matching the requested PIDE form.
    pub fn martingale_drift(&self, convention: DriftConvention) -> Result<f64> {
        match *self {
            ModelSpec::Bs { .. } => Ok(0.0),
            ModelSpec::Merton { lambda, mu, eta, .. } => {
                let q = mu + 0.5 * eta * eta;
                let gp = lambda * (1.0 - q.exp());
                match convention {
                    DriftConvention::FiniteVariation => Ok(gp),
                    DriftConvention::Compensated => Ok(gp + lambda * mu),
                    DriftConvention::Truncated => {
                        let inner = quad::integrate(
                            &|x: f64| x * lambda * norm_pdf((x - mu) / eta) / eta,
                            -1.0,
                            1.0,
                            1e-13,
                            1e-13,
                            200,
                        )?;
                        Ok(gp + inner)
                    }
                }
            }
            _ => self.martingale_drift_other(convention),
        }
    }

    fn martingale_drift_other(&self, convention: DriftConvention) -> Result<f64> {
        match *self {
            ModelSpec::Nig { sigma, .. } => match convention {
                DriftConvention::FiniteVariation => Err(LevyError::DivergentIntegral(
                    "NIG jumps have infinite variation".into(),
                )),
                DriftConvention::Compensated => Ok(-0.5 * sigma * sigma),
                DriftConvention::Truncated => {
                    let tail = self.big_jump_mean()?;
                    Ok(-0.5 * sigma * sigma - tail)
                }
            },
            ModelSpec::Tsp { alpha, c_plus, c_minus, kappa_plus, kappa_minus, .. } => {
                if alpha.abs() < ALPHA_BRANCH_EPS {
                    let lg = |c: f64, k: f64, s: f64| if c == 0.0 { 0.0 } else { c * (k / (k - s)).ln() };
                    let gp = -(lg(c_plus, kappa_plus, 1.0) + lg(c_minus, kappa_minus, -1.0));
                    let mean = |c: f64, k: f64, s: f64| if c == 0.0 { 0.0 } else { s * c / k };
                    let full_mean = mean(c_plus, kappa_plus, 1.0) + mean(c_minus, kappa_minus, -1.0);
                    match convention {
                        DriftConvention::FiniteVariation => Ok(gp),
                        DriftConvention::Compensated => Ok(gp + full_mean),
                        DriftConvention::Truncated => Ok(gp + full_mean - self.big_jump_mean()?),
                    }
                } else if (alpha - 1.0).abs() < ALPHA_BRANCH_EPS {
                    let term = |c: f64, k: f64, s: f64| {
                        if c == 0.0 {
                            0.0
                        } else {
                            -c * (s + (k - s) * ((k - s) / k).ln())
                        }
                    };
                    let gpp = term(c_plus, kappa_plus, 1.0) + term(c_minus, kappa_minus, -1.0);
                    match convention {
                        DriftConvention::FiniteVariation => Err(LevyError::DivergentIntegral(
                            "alpha = 1 jumps have infinite variation".into(),
                        )),
                        DriftConvention::Compensated => Ok(gpp),
                        DriftConvention::Truncated => Ok(gpp - self.big_jump_mean()?),
                    }
                } else {
                    let d = TspDerived::new(alpha, c_plus, c_minus, kappa_plus, kappa_minus);
                    match convention {
                        DriftConvention::FiniteVariation => {
                            if alpha > 1.0 {
                                Err(LevyError::DivergentIntegral(
                                    "finite-variation drift diverges for alpha >= 1".into(),
                                ))
                            } else {
                                Ok(d.gamma)
                            }
                        }
                        DriftConvention::Compensated => {
                            if alpha < 1.0 {
                                // gamma'' = gamma' + int x nu(dx)
                                let mean = |a: f64, k: f64, s: f64| {
                                    if a == 0.0 { 0.0 } else { -s * a * alpha * k.powf(alpha - 1.0) }
                                };
                                Ok(d.gamma
                                    + mean(d.a_plus, kappa_plus, 1.0)
                                    + mean(d.a_minus, kappa_minus, -1.0))
                            } else {
                                let corr = d.a_plus * alpha * kappa_plus.powf(alpha - 1.0)
                                    - d.a_minus * alpha * kappa_minus.powf(alpha - 1.0);
                                Ok(d.gamma - corr)
                            }
                        }
                        DriftConvention::Truncated => {
                            let gpp = self.martingale_drift_other(DriftConvention::Compensated)?;
                            Ok(gpp - self.big_jump_mean()?)
                        }
                    }
                }
            }
            _ => Err(LevyError::UnsupportedVariant(
                "drift defined for Levy variants only".into(),
            )),
        }
    }

    /// int_{|x| > 1} x nu(dx), by quadrature.
    fn big_jump_mean(&self) -> Result<f64> {
        let up = quad::integrate_to_infinity(
            &|x: f64| C64::new(x * self.levy_density_unchecked(x), 0.0),
            1.0,
            1e-12,
            1e-12,
            400,
        )?
        .0
        .re;
        let down = quad::integrate_to_infinity(
            &|x: f64| C64::new(x * self.levy_density_unchecked(-x), 0.0),
            1.0,
            1e-12,
            1e-12,
            400,
        )?
        .0
        .re;
        Ok(up - down)
    }

    /// Annualized standard deviation of X(1).
    pub fn annualized_stdev(&self) -> Result<f64> {
        match *self {
            ModelSpec::Bs { sigma } => Ok(sigma),
            ModelSpec::Merton { sigma, lambda, mu, eta } => {
                Ok((sigma * sigma + lambda * (mu * mu + eta * eta)).sqrt())
            }
            ModelSpec::Nig { sigma, varkappa_bar } => {
                let omega = (varkappa_bar * varkappa_bar + 0.25).sqrt();
                Ok(omega * sigma / varkappa_bar)
            }
            ModelSpec::Heston { theta, .. } => Ok(theta.sqrt()),
            ModelSpec::Tsp { alpha, sigma, c_plus, c_minus, kappa_plus, kappa_minus } => {
                if c_minus > 0.0 && kappa_minus == 0.0 {
                    return Err(LevyError::DivergentIntegral(
                        "second moment infinite for untempered negative tail".into(),
                    ));
                }
                let term = |c: f64, k: f64| if c == 0.0 { 0.0 } else { c / k.powf(2.0 - alpha) };
                let jump_var = gamma(2.0 - alpha) * (term(c_plus, kappa_plus) + term(c_minus, kappa_minus));
                Ok((sigma * sigma + jump_var).sqrt())
            }
            ModelSpec::Qvp { .. } => Err(LevyError::UnsupportedVariant(
                "QVP has no stationary-increment stdev".into(),
            )),
        }
    }

    /// Levy density nu(x) with respect to Lebesgue measure, x != 0.
    pub fn levy_density(&self, x: f64) -> Result<f64> {
        if x == 0.0 {
            return Err(LevyError::DomainError("Levy density undefined at x = 0".into()));
        }
        match self {
            ModelSpec::Tsp { .. } | ModelSpec::Nig { .. } | ModelSpec::Merton { .. } => {
                Ok(self.levy_density_unchecked(x))
            }
            _ => Err(LevyError::UnsupportedVariant(
                "no Levy density for BS/Heston/QVP".into(),
            )),
        }
    }

    pub(crate) fn levy_density_unchecked(&self, x: f64) -> f64 {
        match *self {
            ModelSpec::Tsp { alpha, c_plus, c_minus, kappa_plus, kappa_minus, .. } => {
                if x > 0.0 {
                    c_plus * (-kappa_plus * x).exp() / x.powf(alpha + 1.0)
                } else {
                    let ax = -x;
                    c_minus * (-kappa_minus * ax).exp() / ax.powf(alpha + 1.0)
                }
            }
            ModelSpec::Nig { sigma, varkappa_bar } => {
                let omega = (varkappa_bar * varkappa_bar + 0.25).sqrt();
                let ax = x.abs();
                sigma * sigma * omega * varkappa_bar * (-0.5 * x).exp() * bessel_k1(omega * ax)
                    / (PI * ax)
            }
            ModelSpec::Merton { lambda, mu, eta, .. } => lambda * norm_pdf((x - mu) / eta) / eta,
            _ => 0.0,
        }
    }
}
