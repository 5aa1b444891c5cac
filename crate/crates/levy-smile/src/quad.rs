//! Adaptive Gauss-Kronrod quadrature (7-15 pair) for real- and complex-valued
//! integrands, plus helpers for semi-infinite ranges built from dyadic panels.

use crate::error::{LevyError, Result};
use num_complex::Complex64;

// 15-point Kronrod abscissae (positive half) and weights, 7-point Gauss weights.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_33,
    0.949_107_912_342_758_524_526_189_684_047_85,
    0.864_864_423_359_769_072_789_712_788_640_93,
    0.741_531_185_599_394_439_863_864_773_280_79,
    0.586_087_235_467_691_130_294_144_838_258_73,
    0.405_845_151_377_397_166_906_606_412_076_96,
    0.207_784_955_007_898_467_600_689_403_773_24,
    0.0,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_08,
    0.279_705_391_489_276_667_901_467_771_423_78,
    0.381_830_050_505_118_944_950_369_775_488_98,
    0.417_959_183_673_469_387_755_102_040_816_33,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_97,
    0.063_092_092_629_978_553_290_700_663_189_2,
    0.104_790_010_322_250_183_839_876_322_541_52,
    0.140_653_259_715_525_918_745_189_590_510_24,
    0.169_004_726_639_267_902_826_583_426_598_55,
    0.190_350_578_064_785_409_913_256_402_421_01,
    0.204_432_940_075_298_892_414_161_999_234_65,
    0.209_482_141_084_727_828_012_999_174_891_71,
];

/// One 15-point Kronrod evaluation on [a, b]; returns (integral, error estimate).
fn qk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_g = fc * WG[3];
    let mut res_k = fc * WGK[7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        let fs = f1 + f2;
        res_k += fs * WGK[j];
        if j % 2 == 1 {
            res_g += fs * WG[j / 2];
        }
    }
    let err = ((res_k - res_g) * half).norm();
    (res_k * half, err)
}

#[derive(Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    val: Complex64,
    err: f64,
}

/// Adaptive integral of a complex integrand on [a, b].
pub fn integrate_complex<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_subdivisions: usize,
) -> Result<(Complex64, f64)> {
    if a == b {
        return Ok((Complex64::new(0.0, 0.0), 0.0));
    }
    let (val, err) = qk15(f, a, b);
    let mut segs = vec![Segment { a, b, val, err }];
    let mut total = val;
    let mut total_err = err;
    for _ in 0..max_subdivisions {
        if total_err <= abs_tol.max(rel_tol * total.norm()) {
            return Ok((total, total_err));
        }
        // split the worst segment
        let (idx, _) = segs
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.total_cmp(&y.1.err))
            .unwrap();
        let s = segs[idx];
        let m = 0.5 * (s.a + s.b);
        if m == s.a || m == s.b {
            // interval exhausted at machine precision
            return Ok((total, total_err));
        }
        let (v1, e1) = qk15(f, s.a, m);
        let (v2, e2) = qk15(f, m, s.b);
        total += v1 + v2 - s.val;
        total_err += e1 + e2 - s.err;
        segs[idx] = Segment { a: s.a, b: m, val: v1, err: e1 };
        segs.push(Segment { a: m, b: s.b, val: v2, err: e2 });
    }
    if total_err <= abs_tol.max(rel_tol * total.norm()) {
        Ok((total, total_err))
    } else {
        Err(LevyError::QuadratureFailure(format!(
            "error {total_err:.3e} above tolerance after max subdivisions on [{a}, {b}]"
        )))
    }
}

/// Adaptive integral of a real integrand on [a, b].
pub fn integrate<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_subdivisions: usize,
) -> Result<f64> {
    let g = |x: f64| Complex64::new(f(x), 0.0);
    integrate_complex(&g, a, b, abs_tol, rel_tol, max_subdivisions).map(|(v, _)| v.re)
}

/// Integral over [a, infinity) of a decaying complex integrand, summed over
/// dyadically widening panels. Stops when a panel and the local envelope drop
/// below tolerance.
pub fn integrate_to_infinity<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_subdivisions: usize,
) -> Result<(Complex64, f64)> {
    let mut lo = a;
    let mut width = 1.0f64.max(a.abs() * 0.5);
    let mut total = Complex64::new(0.0, 0.0);
    let mut total_err = 0.0;
    let mut quiet_panels = 0;
    for _ in 0..200 {
        let hi = lo + width;
        let (v, e) =
            integrate_complex(f, lo, hi, abs_tol * 0.25, rel_tol * 0.25, max_subdivisions)?;
        total += v;
        total_err += e;
        let tol = abs_tol.max(rel_tol * total.norm());
        // crude tail bound: residual of a decaying integrand past hi
        let tail_probe = f(hi).norm() * width;
        if v.norm() < tol && tail_probe < tol {
            quiet_panels += 1;
            if quiet_panels >= 2 {
                return Ok((total, total_err));
            }
        } else {
            quiet_panels = 0;
        }
        lo = hi;
        width *= 2.0;
    }
    Err(LevyError::QuadratureFailure(
        "semi-infinite integral did not decay within panel budget".into(),
    ))
}

// Moments of t^m e^{-i theta t} over [-1, 1], stable for small theta.
fn filon_moments(theta: f64) -> (Complex64, Complex64, Complex64) {
    if theta.abs() < 1e-2 {
        let t2 = theta * theta;
        let i0 = Complex64::new(2.0 * (1.0 - t2 / 6.0 + t2 * t2 / 120.0 - t2 * t2 * t2 / 5040.0), 0.0);
        let i1 = Complex64::new(0.0, -2.0 * theta / 3.0 * (1.0 - t2 / 10.0 + t2 * t2 / 280.0));
        let i2 = Complex64::new(2.0 / 3.0 * (1.0 - 3.0 * t2 / 10.0 + t2 * t2 / 56.0), 0.0);
        (i0, i1, i2)
    } else {
        let (s, c) = theta.sin_cos();
        let i0 = Complex64::new(2.0 * s / theta, 0.0);
        let i1 = Complex64::new(0.0, 2.0 * (theta * c - s) / (theta * theta));
        let i2 = Complex64::new(
            2.0 * ((theta * theta - 2.0) * s + 2.0 * theta * c) / (theta * theta * theta),
            0.0,
        );
        (i0, i1, i2)
    }
}

/// One Filon panel: quadratic interpolation of g against the e^{-iux} kernel.
fn filon_panel<F: Fn(f64) -> Complex64>(g: &F, x: f64, a: f64, b: f64) -> Complex64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let (gm, g0, gp) = (g(a), g(c), g(b));
    let theta = h * x;
    let (i0, i1, i2) = filon_moments(theta);
    let lin = 0.5 * (gp - gm);
    let quadr = 0.5 * (gp - 2.0 * g0 + gm);
    h * (-Complex64::i() * c * x).exp() * (g0 * i0 + lin * i1 + quadr * i2)
}

fn filon_recursive<F: Fn(f64) -> Complex64>(
    g: &F,
    x: f64,
    a: f64,
    b: f64,
    whole: Complex64,
    tol: f64,
    depth: usize,
) -> Complex64 {
    let m = 0.5 * (a + b);
    let left = filon_panel(g, x, a, m);
    let right = filon_panel(g, x, m, b);
    let sum = left + right;
    if (sum - whole).norm() < tol || depth == 0 {
        return sum;
    }
    filon_recursive(g, x, a, m, left, 0.5 * tol, depth - 1)
        + filon_recursive(g, x, m, b, right, 0.5 * tol, depth - 1)
}

/// Integral of g(u) e^{-iux} over [a, infinity) for a smooth, decaying
/// amplitude g and arbitrary oscillation rate x. Panels widen dyadically;
/// each is resolved against the amplitude only (Filon), so the cost is
/// independent of the number of oscillations.
pub fn fourier_integral_to_infinity<F: Fn(f64) -> Complex64>(
    g: &F,
    x: f64,
    a: f64,
    abs_tol: f64,
) -> Result<Complex64> {
    let mut lo = a;
    let mut width = 1.0;
    let mut total = Complex64::new(0.0, 0.0);
    let mut quiet = 0;
    for _ in 0..400 {
        let hi = lo + width;
        let whole = filon_panel(g, x, lo, hi);
        let v = filon_recursive(g, x, lo, hi, whole, abs_tol * 0.05, 28);
        total += v;
        let probe = g(hi).norm() * width.min(1.0 / x.abs().max(1e-12)).max(1.0);
        if v.norm() < abs_tol && probe < abs_tol {
            quiet += 1;
            if quiet >= 3 {
                return Ok(total);
            }
        } else {
            quiet = 0;
        }
        lo = hi;
        width *= 2.0;
    }
    Err(LevyError::QuadratureFailure(
        "oscillatory integral did not decay within the panel budget".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_is_exact() {
        let v = integrate(&|x| x * x * x - 2.0 * x + 1.0, -1.0, 3.0, 1e-14, 1e-14, 50).unwrap();
        // antiderivative x^4/4 - x^2 + x
        assert_relative_eq!(v, (81.0 / 4.0 - 9.0 + 3.0) - (0.25 - 1.0 - 1.0), epsilon = 1e-12);
    }

    #[test]
    fn oscillatory_integral() {
        // int_0^{10 pi} sin(x)/ (1+x) dx against a fine reference
        let v = integrate(&|x| x.sin() / (1.0 + x), 0.0, 10.0 * PI, 1e-12, 1e-12, 500).unwrap();
        assert_relative_eq!(v, 0.590658654276882469, epsilon = 1e-9);
    }

    #[test]
    fn gaussian_to_infinity() {
        let f = |x: f64| Complex64::new((-0.5 * x * x).exp(), 0.0);
        let (v, _) = integrate_to_infinity(&f, 0.0, 1e-12, 1e-12, 200).unwrap();
        assert_relative_eq!(v.re, (2.0 * PI).sqrt() / 2.0, epsilon = 1e-10);
    }

    #[test]
    fn power_law_times_exponential() {
        // int_0^inf x^{0.5} e^{-x} dx = Gamma(1.5)
        let f = |x: f64| Complex64::new(x.sqrt() * (-x).exp(), 0.0);
        let (v, _) = integrate_to_infinity(&f, 0.0, 1e-12, 1e-12, 400).unwrap();
        assert_relative_eq!(v.re, crate::special::gamma(1.5), epsilon = 1e-9);
    }

    #[test]
    fn filon_lorentzian_transform() {
        // int_0^inf e^{-iux} / (1 + u^2) du = (pi/2) e^{-x} - i * (slowly
        // convergent imaginary part); check the real part at several x
        for &x in &[0.5_f64, 3.0] {
            let g = |u: f64| Complex64::new(1.0 / (1.0 + u * u), 0.0);
            let v = fourier_integral_to_infinity(&g, x, 0.0, 1e-10).unwrap();
            assert_relative_eq!(v.re, 0.5 * PI * (-x).exp(), max_relative = 1e-6);
        }
    }

    #[test]
    fn filon_matches_gk_on_moderate_oscillation() {
        // same integral two ways: Gaussian amplitude, x = 6
        let g = |u: f64| Complex64::new((-0.5 * u * u).exp(), 0.0);
        let x = 6.0;
        let filon = fourier_integral_to_infinity(&g, x, 0.0, 1e-12).unwrap();
        let direct = integrate_complex(
            &|u: f64| g(u) * (-Complex64::i() * x * u).exp(),
            0.0,
            12.0,
            1e-13,
            1e-13,
            2000,
        )
        .unwrap()
        .0;
        assert!((filon - direct).norm() < 1e-9, "filon {filon} vs gk {direct}");
    }
}
