//! Real gamma and complex digamma functions.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function for real arguments (Lanczos approximation with reflection).
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        PI / ((PI * x).sin() * gamma(1.0 - x))
    } else {
        let x = x - 1.0;
        let mut a = LANCZOS[0];
        let t = x + LANCZOS_G + 0.5;
        for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
            a += c / (x + i as f64);
        }
        (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
    }
}

/// `B_{2k} / (2k)` for k = 1..=8.
const BERNOULLI_OVER_2K: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32_760.0,
    1.0 / 12.0,
    -3_617.0 / 8_160.0,
];

/// Digamma function `psi(z)` for complex `z`.
///
/// Upward recurrence to `Re z >= 10`, then the asymptotic Bernoulli series;
/// reflection for `Re z <= 0`. Poles at non-positive integers are reported.
pub fn complex_digamma(z: C64) -> Result<C64> {
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        return Err(Error::Pole { re: z.re, im: z.im });
    }
    if z.re <= 0.0 {
        // psi(z) = psi(1 - z) - pi cot(pi z)
        let w = C64::new(PI, 0.0) * z;
        return Ok(complex_digamma(C64::new(1.0, 0.0) - z)? - C64::new(PI, 0.0) * w.cos() / w.sin());
    }
    let mut z = z;
    let mut acc = C64::new(0.0, 0.0);
    while z.re < 10.0 {
        acc -= z.inv();
        z += 1.0;
    }
    let inv2 = (z * z).inv();
    let mut series = C64::new(0.0, 0.0);
    let mut p = inv2;
    for &c in &BERNOULLI_OVER_2K {
        series += p * c;
        p *= inv2;
    }
    Ok(acc + z.ln() - 0.5 * z.inv() - series)
}

pub fn digamma(x: f64) -> Result<f64> {
    complex_digamma(C64::new(x, 0.0)).map(|z| z.re)
}
