//! Black-Scholes nondimensional pricing, implied-volatility inversion,
//! forward-delta mapping, FX quote algebra, and the BS asymptotic expansions
//! used to translate price asymptotics into volatility asymptotics.

use crate::error::{LevyError, Result};
use crate::special::{norm_cdf, norm_pdf, norm_quantile};
use std::f64::consts::PI;

/// Nondimensional Black-Scholes call price C(v, k) of total variance v and
/// log-strike k; C(0,k) = (1-e^k)^+ and C(inf,k) = 1.
pub fn bs_call(v: f64, k: f64) -> f64 {
    assert!(v >= 0.0, "total variance must be nonnegative");
    if v == 0.0 {
        return (1.0 - k.exp()).max(0.0);
    }
    let sq = v.sqrt();
    let d_plus = (-k + 0.5 * v) / sq;
    let d_minus = d_plus - sq;
    norm_cdf(d_plus) - k.exp() * norm_cdf(d_minus)
}

/// dC/dv = phi(d+) / (2 sqrt(v)).
pub fn bs_vega_v(v: f64, k: f64) -> f64 {
    let sq = v.sqrt();
    norm_pdf((-k + 0.5 * v) / sq) / (2.0 * sq)
}

/// Time value C(v,k) - (1-e^k)^+, computed without cancellation on either
/// side of the money (both terms are small in the relevant tail).
pub fn bs_time_value(v: f64, k: f64) -> f64 {
    if v == 0.0 {
        return 0.0;
    }
    let sq = v.sqrt();
    let d_plus = (-k + 0.5 * v) / sq;
    let d_minus = d_plus - sq;
    if k >= 0.0 {
        norm_cdf(d_plus) - k.exp() * norm_cdf(d_minus)
    } else {
        k.exp() * norm_cdf(-d_minus) - norm_cdf(-d_plus)
    }
}

/// Implied volatility from a normalized price. Bisection-safeguarded Newton
/// on total variance, bracket [1e-12, 400], tolerance 1e-12 in price.
pub fn implied_vol(price: f64, k: f64, tau: f64) -> Result<f64> {
    implied_total_variance(price, k).map(|v| (v / tau).sqrt())
}

/// Implied volatility directly from the time value; keeps full relative
/// accuracy deep in the wings where the price is pinned to its intrinsic.
pub fn implied_vol_from_time_value(time_value: f64, k: f64, tau: f64) -> Result<f64> {
    implied_total_variance_from_tv(time_value, k).map(|v| (v / tau).sqrt())
}

pub fn implied_total_variance(price: f64, k: f64) -> Result<f64> {
    let intrinsic = (1.0 - k.exp()).max(0.0);
    let tv = price - intrinsic;
    if (intrinsic > 0.0 && tv <= 1e-14) || tv <= 0.0 || price >= 1.0 {
        return Err(LevyError::OutOfBounds(format!(
            "price {price:.6e} outside the no-arbitrage band above {intrinsic:.6e}"
        )));
    }
    implied_total_variance_from_tv(tv, k)
}

pub fn implied_total_variance_from_tv(tv: f64, k: f64) -> Result<f64> {
    let intrinsic = (1.0 - k.exp()).max(0.0);
    let tv_max = 1.0 - intrinsic;
    if tv <= 0.0 || tv >= tv_max {
        return Err(LevyError::OutOfBounds(format!(
            "time value {tv:.6e} outside (0, {tv_max:.6e})"
        )));
    }
    let (mut lo, mut hi) = (1e-12f64, 400.0f64);
    // seed from the ATM-style inversion
    let mut v = if k.abs() < 1e-12 {
        let x = norm_quantile(0.5 * (tv + 1.0));
        (2.0 * x) * (2.0 * x)
    } else {
        (2.0 * k.abs()).max(0.25)
    };
    v = v.clamp(lo, hi);
    let tol = 1e-12 * tv;
    for _ in 0..200 {
        let diff = bs_time_value(v, k) - tv;
        if diff.abs() <= tol {
            return Ok(v);
        }
        if diff > 0.0 {
            hi = v;
        } else {
            lo = v;
        }
        let vega = bs_vega_v(v, k);
        let newton = v - diff / vega;
        v = if vega > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo < 1e-15 * hi {
            return Ok(v);
        }
    }
    let diff = bs_time_value(v, k) - tv;
    if diff.abs() <= 1e-9 * tv.max(1e-12) {
        Ok(v)
    } else {
        Err(LevyError::NonConvergence(format!(
            "implied variance residual {diff:.3e} at v={v:.6e}"
        )))
    }
}

/// Forward delta Phi(d+) at fixed sigma.
pub fn delta_map(sigma: f64, tau: f64, k: f64) -> f64 {
    let sq = sigma * tau.sqrt();
    norm_cdf((-k + 0.5 * sigma * sigma * tau) / sq)
}

/// Log-strike with a given forward delta at fixed sigma.
pub fn delta_to_k(delta: f64, sigma: f64, tau: f64) -> f64 {
    let sq = sigma * tau.sqrt();
    0.5 * sigma * sigma * tau - sq * norm_quantile(delta)
}

/// Smile-consistent strike for a target delta: solves
/// Delta = Phi(d+(k, sigma(k))) by damped fixed-point iteration.
pub fn delta_to_k_smile<F>(delta: f64, tau: f64, vol_at_k: F) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut k = {
        let sigma0 = vol_at_k(0.0)?;
        delta_to_k(delta, sigma0, tau)
    };
    for _ in 0..100 {
        let sigma = vol_at_k(k)?;
        let k_next = delta_to_k(delta, sigma, tau);
        let k_new = 0.5 * k + 0.5 * k_next;
        if (k_new - k).abs() < 1e-12 * (1.0 + k.abs()) {
            return Ok(k_new);
        }
        k = k_new;
    }
    Err(LevyError::NonConvergence(
        "smile-consistent delta inversion did not settle in 100 iterations".into(),
    ))
}

/// Delta-indexed pillar vols at 0.10 / 0.25 / 0.50 / 0.75 / 0.90.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmilePillars {
    pub tau: f64,
    /// vols at deltas [0.10, 0.25, 0.50, 0.75, 0.90]
    pub vols: [f64; 5],
}

pub const PILLAR_DELTAS: [f64; 5] = [0.10, 0.25, 0.50, 0.75, 0.90];

/// ATM/RR/BF quotes mapped to pillar vols. All quantities in decimals.
pub fn quotes_to_pillars(
    tau: f64,
    atm: f64,
    rr25: f64,
    bf25: f64,
    rr10: f64,
    bf10: f64,
) -> Result<SmilePillars> {
    let vols = [
        atm + bf10 - 0.5 * rr10, // delta 0.10
        atm + bf25 - 0.5 * rr25, // delta 0.25
        atm,
        atm + bf25 + 0.5 * rr25, // delta 0.75
        atm + bf10 + 0.5 * rr10, // delta 0.90
    ];
    if vols.iter().any(|&v| v <= 0.0) {
        return Err(LevyError::NegativeVol(format!("pillars {vols:?}")));
    }
    Ok(SmilePillars { tau, vols })
}

/// Inverse of `quotes_to_pillars`: (ATM, RR25, BF25, RR10, BF10).
pub fn pillars_to_quotes(p: &SmilePillars) -> (f64, f64, f64, f64, f64) {
    let atm = p.vols[2];
    let rr25 = p.vols[3] - p.vols[1];
    let bf25 = 0.5 * (p.vols[3] + p.vols[1]) - atm;
    let rr10 = p.vols[4] - p.vols[0];
    let bf10 = 0.5 * (p.vols[4] + p.vols[0]) - atm;
    (atm, rr25, bf25, rr10, bf10)
}

/// RR and BF approximations from smile derivatives in delta space,
/// RR ~ Sigma_Delta / 2 and BF ~ Sigma_DeltaDelta / 32 at Delta = 0.5.
pub fn smile_derivative_quotes(d_sigma_d_delta: f64, d2_sigma_d_delta2: f64) -> (f64, f64) {
    (0.5 * d_sigma_d_delta, d2_sigma_d_delta2 / 32.0)
}

/// Strike-space smile derivatives mapped into delta space at the ATM point:
/// Sigma_Delta = -sigma_k sqrt(2 pi tau),
/// Sigma_DeltaDelta = (sigma_kk - sigma_k / 2) 2 pi tau.
pub fn strike_derivs_to_delta_derivs(sigma_k: f64, sigma_kk: f64, tau: f64) -> (f64, f64) {
    (
        -sigma_k * (2.0 * PI * tau).sqrt(),
        (sigma_kk - 0.5 * sigma_k) * 2.0 * PI * tau,
    )
}

/// Regime selector for the BS price expansions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BsAsymInput {
    /// v -> infinity with k = k_hat v fixed; optional drift coefficients
    /// alpha1, alpha2 of the variance factor g(v) = 1 + a1/v + a2/v^2.
    LongA { k_hat: f64, v: f64, alpha1: f64, alpha2: f64 },
    /// v -> 0 with k fixed; f(v) = 1 + a1 v + a2 v^2.
    ShortB { k: f64, v: f64, alpha1: f64, alpha2: f64 },
    /// |k| -> infinity with v = v_hat |k|, 0 < v_hat < 2.
    WingC { k: f64, v_hat: f64 },
}

fn r_of(k: f64) -> f64 {
    k * k - 0.25
}

/// Evaluates the two-term BS price expansion for the requested regime.
pub fn bs_asymptote(input: BsAsymInput) -> Result<f64> {
    match input {
        BsAsymInput::LongA { k_hat, v, alpha1, alpha2 } => {
            if (k_hat - 0.5).abs() < 1e-12 || (k_hat + 0.5).abs() < 1e-12 {
                // special branches at k_hat = +-1/2
                let base = if k_hat > 0.0 { 0.5 } else { 1.0 - 0.5 * (-0.5 * v).exp() };
                return Ok(base
                    - ((k_hat - 0.5) * v / 2.0).exp() / (2.0 * PI * v).sqrt() * (1.0 - 1.0 / v));
            }
            let r = r_of(k_hat);
            let mut lead = 0.0;
            if k_hat < -0.5 {
                lead += 1.0 - (k_hat * v).exp();
            } else if k_hat < 0.5 {
                lead += 1.0;
            }
            let correction = 1.0
                - (1.0 / v)
                    * ((1.0 / r - 0.5 * alpha1) * (3.0 + 1.0 / r)
                        + alpha1 * alpha1 / 8.0
                        + 0.5 * r * (alpha1 * alpha1 - alpha2));
            Ok(lead
                + (0.5 * alpha1 * r).exp() * norm_pdf((k_hat - 0.5) * v.sqrt()) / (r * v.sqrt())
                    * correction)
        }
        BsAsymInput::ShortB { k, v, alpha1, alpha2 } => {
            if k == 0.0 {
                return Err(LevyError::DomainError("short-time branch requires k != 0".into()));
            }
            let intrinsic = (1.0 - k.exp()).max(0.0);
            let correction =
                1.0 - 0.125 * (1.0 - 12.0 * alpha1 + 4.0 * (alpha1 * alpha1 - alpha2) * k * k) * v;
            Ok(intrinsic
                + norm_pdf(k / v.sqrt()) * (0.5 * k + 0.5 * alpha1 * k * k).exp() * v.powf(1.5)
                    / (k * k)
                    * correction)
        }
        BsAsymInput::WingC { k, v_hat } => {
            if !(0.0 < v_hat && v_hat < 2.0) {
                return Err(LevyError::DomainError(format!("v_hat = {v_hat} outside (0, 2)")));
            }
            let ak = k.abs();
            let intrinsic = (1.0 - k.exp()).max(0.0);
            let r = r_of(1.0 / v_hat);
            // ITM time value carries the extra e^{-|k|} parity factor, folded
            // into the Gaussian argument
            let arg = if k >= 0.0 {
                (1.0 / v_hat.sqrt() - 0.5 * v_hat.sqrt()) * ak.sqrt()
            } else {
                (1.0 / v_hat.sqrt() + 0.5 * v_hat.sqrt()) * ak.sqrt()
            };
            Ok(intrinsic
                + norm_pdf(arg) / (r * (v_hat * ak).sqrt())
                    * (1.0 - (3.0 / (v_hat * v_hat) + 4.0) / (r * r * v_hat * ak)))
        }
    }
}
