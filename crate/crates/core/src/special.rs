//! Hermite polynomials of complex argument, Laguerre polynomials and
//! two-variable Hermite polynomials.
//!
//! All evaluations use three-term recurrences. The explicit factorial sums
//! cancel catastrophically once the degree passes ~20 and are only used as
//! test oracles.

use crate::error::{Error, Result};
use crate::C64;

/// Default highest degree accepted by the checked entry points.
pub const M_MAX: usize = 64;

/// Degree limits for the checked evaluators.
///
/// Degrees above [`M_MAX`] push factorial-weighted sums elsewhere in the
/// crate past comfortable double-precision magnitudes, so they must be
/// requested explicitly through a custom limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub m_max: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { m_max: M_MAX }
    }
}

impl Limits {
    pub fn new(m_max: usize) -> Self {
        Limits { m_max }
    }

    fn check(&self, what: &str, degree: usize) -> Result<()> {
        if degree > self.m_max {
            Err(Error::arg(format!(
                "{what} degree {degree} exceeds limit {}",
                self.m_max
            )))
        } else {
            Ok(())
        }
    }

    pub fn hermite(&self, m: usize, z: C64) -> Result<C64> {
        self.check("hermite", m)?;
        Ok(hermite_unchecked(m, z))
    }

    pub fn laguerre(&self, n: usize, x: C64) -> Result<C64> {
        self.check("laguerre", n)?;
        Ok(laguerre_unchecked(n, x))
    }

    pub fn hermite2(&self, m: usize, n: usize, z: C64, w: C64) -> Result<C64> {
        self.check("hermite2", m.max(n))?;
        Ok(hermite2_unchecked(m, n, z, w))
    }
}

/// Physicists' Hermite polynomial `H_m(z)`.
pub fn hermite(m: usize, z: C64) -> Result<C64> {
    Limits::default().hermite(m, z)
}

/// Laguerre polynomial `L_n(x)`.
pub fn laguerre(n: usize, x: C64) -> Result<C64> {
    Limits::default().laguerre(n, x)
}

/// Two-variable Hermite polynomial
/// `H_{m,n}(z, w) = Σ_l (−1)^l m! n! z^{m−l} w^{n−l} / (l! (m−l)! (n−l)!)`.
pub fn hermite2(m: usize, n: usize, z: C64, w: C64) -> Result<C64> {
    Limits::default().hermite2(m, n, z, w)
}

pub(crate) fn hermite_unchecked(m: usize, z: C64) -> C64 {
    let mut prev = C64::new(1.0, 0.0);
    if m == 0 {
        return prev;
    }
    let mut cur = 2.0 * z;
    for k in 1..m {
        let next = 2.0 * z * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `[H_0(z), …, H_n(z)]`.
pub(crate) fn hermite_table(n: usize, z: C64) -> Vec<C64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(C64::new(1.0, 0.0));
    if n >= 1 {
        out.push(2.0 * z);
    }
    for k in 1..n {
        let next = 2.0 * z * out[k] - 2.0 * k as f64 * out[k - 1];
        out.push(next);
    }
    out
}

pub(crate) fn laguerre_unchecked(n: usize, x: C64) -> C64 {
    let mut prev = C64::new(1.0, 0.0);
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 - x) * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

// H_{0,n} = w^n, H_{j+1,n} = z H_{j,n} − n H_{j,n−1}
pub(crate) fn hermite2_unchecked(m: usize, n: usize, z: C64, w: C64) -> C64 {
    let mut row: Vec<C64> = Vec::with_capacity(n + 1);
    let mut p = C64::new(1.0, 0.0);
    for _ in 0..=n {
        row.push(p);
        p *= w;
    }
    for _ in 0..m {
        let mut next = Vec::with_capacity(n + 1);
        next.push(z * row[0]);
        for j in 1..=n {
            next.push(z * row[j] - j as f64 * row[j - 1]);
        }
        row = next;
    }
    row[n]
}

/// `k!` as a float for `k ≤ 170`.
pub(crate) fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, j| acc * j as f64)
}

/// `ln k!` for `k = 0..=n`.
pub(crate) fn ln_factorial_table(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    out.push(0.0);
    for k in 1..=n {
        acc += (k as f64).ln();
        out.push(acc);
    }
    out
}


#[cfg(test)]
mod tests {
    use super::oracle::*;
    use super::*;
    use std::f64::consts::PI;

    fn rel(a: C64, b: C64) -> f64 {
        (a - b).norm() / b.norm().max(1e-300)
    }

    #[test]
    fn hermite_low_orders() {
        for z in [C64::new(0.3, -2.0), C64::new(-1.0, 0.5)] {
            assert_eq!(hermite(0, z).unwrap(), C64::new(1.0, 0.0));
        }
        assert_eq!(hermite(1, C64::new(2.0, 0.0)).unwrap(), C64::new(4.0, 0.0));
    }

    #[test]
    fn hermite_three_at_one_plus_i() {
        let z = C64::new(1.0, 1.0);
        // 8z³ − 12z = 8(−2+2i) − 12(1+i) = −28 + 4i
        let expected = hermite_sum(3, z);
        assert!((expected - C64::new(-28.0, 4.0)).norm() < 1e-12);
        assert!(rel(hermite(3, z).unwrap(), expected) < 1e-12);
    }

    #[test]
    fn hermite_rejects_degree_above_limit() {
        assert!(matches!(
            hermite(M_MAX + 1, C64::new(0.1, 0.0)),
            Err(Error::Argument(_))
        ));
        assert!(Limits::new(80).hermite(80, C64::new(0.1, 0.0)).is_ok());
        assert!(laguerre(65, C64::new(0.1, 0.0)).is_err());
        assert!(hermite2(3, 65, C64::new(0.1, 0.0), C64::new(0.1, 0.0)).is_err());
    }

    #[test]
    fn recurrence_matches_explicit_sum_on_grid() {
        for m in 0..=15 {
            for i in -6..=6 {
                for j in -6..=6 {
                    let z = C64::new(i as f64 * 0.5, j as f64 * 0.5);
                    let a = hermite(m, z).unwrap();
                    let b = hermite_sum(m, z);
                    // absolute floor for the zeros of H_m
                    let err = (a - b).norm() / b.norm().max(1.0);
                    assert!(err <= 1e-10, "m={m} z={z} err={err}");
                }
            }
        }
    }

    #[test]
    fn hermite_table_agrees_with_single_evaluations() {
        let z = C64::new(0.7, -1.3);
        let table = hermite_table(20, z);
        for (m, h) in table.iter().enumerate() {
            assert_eq!(*h, hermite_unchecked(m, z));
        }
        assert_eq!(hermite_table(0, z).len(), 1);
    }

    /// l-th derivative by the discrete Cauchy integral on a circle around x,
    /// exact for polynomials once the node count exceeds the degree.
    fn contour_derivative(f: impl Fn(C64) -> C64, x: f64, l: usize) -> C64 {
        let nodes = 64;
        let radius = 1.0;
        let mut acc = C64::new(0.0, 0.0);
        for j in 0..nodes {
            let u = C64::from_polar(1.0, 2.0 * PI * j as f64 / nodes as f64);
            acc += f(x + radius * u) / u.powu(l as u32);
        }
        acc * factorial(l) / (nodes as f64 * radius.powi(l as i32))
    }

    #[test]
    fn derivative_relation_holds() {
        for m in 0..=12usize {
            for l in 0..=m {
                for xi in -6..=6 {
                    let x = xi as f64 * 0.5;
                    let lhs = contour_derivative(|z| hermite_unchecked(m, z), x, l);
                    let rhs = 2f64.powi(l as i32) * factorial(m) / factorial(m - l)
                        * hermite_unchecked(m - l, C64::new(x, 0.0));
                    let scale = rhs.norm().max(2f64.powi(l as i32) * factorial(m) / factorial(m - l));
                    assert!(
                        (lhs - rhs).norm() / scale <= 1e-6,
                        "m={m} l={l} x={x}: {lhs} vs {rhs}"
                    );
                }
            }
        }
    }

    #[test]
    fn laguerre_examples() {
        let x = C64::new(0.4, 1.1);
        assert_eq!(laguerre(0, x).unwrap(), C64::new(1.0, 0.0));
        assert!((laguerre(1, x).unwrap() - (1.0 - x)).norm() < 1e-15);
        let x = C64::new(2.5, 0.0);
        // 1 − 4x + 3x² − (2/3)x³ + x⁴/24 at x = 2.5
        let expected = laguerre_sum(4, x);
        assert!((expected.re - 0.9609375).abs() < 1e-12);
        assert!(rel(laguerre(4, x).unwrap(), expected) < 1e-12);
        for n in 0..=20 {
            let x = C64::new(1.7, -0.4);
            assert!(rel(laguerre(n, x).unwrap(), laguerre_sum(n, x)) < 1e-10);
        }
    }

    #[test]
    fn hermite2_examples() {
        let z = C64::new(0.3, 0.8);
        let w = C64::new(-1.2, 0.1);
        assert_eq!(hermite2(0, 0, z, w).unwrap(), C64::new(1.0, 0.0));
        // z²w − 2z at z=1, w=2
        let v = hermite2(2, 1, C64::new(1.0, 0.0), C64::new(2.0, 0.0)).unwrap();
        let expected = hermite2_sum(2, 1, C64::new(1.0, 0.0), C64::new(2.0, 0.0));
        assert!(expected.norm() < 1e-14);
        assert!((v - expected).norm() < 1e-14);
        for m in 0..=8 {
            for n in 0..=8 {
                let a = hermite2(m, n, z, w).unwrap();
                let b = hermite2_sum(m, n, z, w);
                assert!((a - b).norm() / b.norm().max(1.0) < 1e-12, "m={m} n={n}");
            }
        }
    }

    #[test]
    fn hermite2_diagonal_is_laguerre() {
        for n in 0..=10usize {
            for z in [C64::new(0.5, 0.5), C64::new(-1.5, 0.2), C64::new(0.0, 2.0)] {
                let h = hermite2(n, n, z, z.conj()).unwrap();
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                let l = sign * factorial(n) * laguerre(n, C64::new(z.norm_sqr(), 0.0)).unwrap();
                assert!((h - l).norm() <= 1e-10 * l.norm().max(1.0), "n={n} z={z}");
                assert!(h.im.abs() <= 1e-12 * h.norm().max(1.0));
            }
        }
    }

    #[test]
    fn ln_factorial_table_matches_products() {
        let t = ln_factorial_table(30);
        for (k, v) in t.iter().enumerate() {
            assert!((v - factorial(k).ln()).abs() < 1e-12 * v.max(1.0));
        }
    }
}
