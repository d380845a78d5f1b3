//! Composite Simpson quadrature.

use core::ops::{Add, Mul};

/// Composite Simpson rule on `[a, b]` with `intervals` sub-intervals
/// (rounded up to an even count).
pub fn simpson<T, F>(f: F, a: f64, b: f64, intervals: usize) -> T
where
    T: Copy + Add<Output = T> + Mul<f64, Output = T>,
    F: Fn(f64) -> T,
{
    let n = (intervals.max(2) + 1) & !1;
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc = acc + f(a + h * k as f64) * w;
    }
    acc * (h / 3.0)
}

/// Simpson rule on a single step `[t0, t1]` using the midpoint.
pub fn simpson_step<T>(f0: T, fmid: T, f1: T, t0: f64, t1: f64) -> T
where
    T: Copy + Add<Output = T> + Mul<f64, Output = T>,
{
    (f0 + fmid * 4.0 + f1) * ((t1 - t0) / 6.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_for_cubics() {
        let v: f64 = simpson(|x| x * x * x - 2.0 * x + 1.0, -1.0, 3.0, 4);
        // ∫ = [x⁴/4 − x² + x] from −1 to 3 = (81/4 − 9 + 3) − (1/4 − 1 − 1)
        assert!((v - 16.0).abs() < 1e-12);
    }

    #[test]
    fn odd_interval_count_is_rounded_up() {
        let v: f64 = simpson(f64::exp, 0.0, 1.0, 101);
        assert!((v - (core::f64::consts::E - 1.0)).abs() < 1e-10);
    }
}
