//! One-dimensional quadrature.

/// Trapezoidal rule on uniformly spaced samples.
pub fn trapezoid<T>(values: &[T], h: f64) -> T
where
    T: Copy + std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T> + Default,
{
    match values.len() {
        0 | 1 => T::default(),
        n => {
            let mut acc = (values[0] + values[n - 1]) * 0.5;
            for &v in &values[1..n - 1] {
                acc = acc + v;
            }
            acc * h
        }
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// 15-point Kronrod estimate and its difference to the embedded 7-point Gauss rule.
fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Adaptive Gauss-Kronrod integration of `f` over `[a, b]`.
///
/// Returns the estimate and its error bound. Subdivision stops when the summed
/// error is below `max(abs_tol, rel_tol |I|)` or after `max_intervals` splits.
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_intervals: usize,
) -> (f64, f64) {
    if a == b {
        return (0.0, 0.0);
    }
    let (v, e) = gk15(&mut f, a, b);
    let mut parts = vec![(a, b, v, e)];
    loop {
        let total: f64 = parts.iter().map(|p| p.2).sum();
        let err: f64 = parts.iter().map(|p| p.3).sum();
        if err <= abs_tol.max(rel_tol * total.abs()) || parts.len() >= max_intervals {
            return (total, err);
        }
        let (i, _) = parts
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("nonempty");
        let (lo, hi, _, _) = parts.swap_remove(i);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&mut f, lo, mid);
        let (v2, e2) = gk15(&mut f, mid, hi);
        parts.push((lo, mid, v1, e1));
        parts.push((mid, hi, v2, e2));
    }
}

/// Integral over `[0, inf)` split into geometrically growing panels.
///
/// Panels `[0, h], [h, 2h], [2h, 4h], ...` are added until a panel contributes
/// less than `tol` relative to the running total `panel_limit` times in a row.
pub fn integrate_half_line<F: FnMut(f64) -> f64>(
    mut f: F,
    h: f64,
    tol: f64,
    panel_limit: usize,
) -> f64 {
    let (mut total, _) = integrate(&mut f, 0.0, h, tol * 1e-3, tol * 1e-2, 400);
    let (mut lo, mut hi) = (h, 2.0 * h);
    let mut quiet = 0;
    for _ in 0..200 {
        let (v, _) = integrate(&mut f, lo, hi, tol * 1e-3, tol * 1e-2, 400);
        total += v;
        if v.abs() <= tol * total.abs().max(f64::MIN_POSITIVE) {
            quiet += 1;
            if quiet >= panel_limit {
                break;
            }
        } else {
            quiet = 0;
        }
        lo = hi;
        hi *= 2.0;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trapezoid_on_linear_is_exact() {
        let h = 0.1;
        let v: Vec<f64> = (0..11).map(|i| 3.0 * i as f64 * h + 1.0).collect();
        assert!((trapezoid(&v, h) - 2.5).abs() < 1e-14);
    }

    #[test]
    fn kronrod_on_smooth_integrand() {
        let (v, _) = integrate(|x| x.sin(), 0.0, std::f64::consts::PI, 1e-14, 1e-14, 100);
        assert!((v - 2.0).abs() < 1e-13);
        let (v, _) = integrate(|x| x.sqrt(), 0.0, 1.0, 1e-13, 1e-13, 500);
        assert!((v - 2.0 / 3.0).abs() < 1e-11);
    }

    #[test]
    fn half_line() {
        let v = integrate_half_line(|x| (-x).exp() * (2.0 * x).cos(), 1.0, 1e-14, 3);
        assert!((v - 0.2).abs() < 1e-12);
    }
}
