//! Truncated multivariate power series over the complex numbers.
//!
//! Every variable carries a maximum degree (its cap); products drop all
//! monomials that exceed a cap in any variable. Because the series used here
//! are only ever differentiated a bounded number of times at the origin, the
//! truncation is exact for the coefficients that are read back.

use crate::error::{Error, Result};
use crate::special::factorial;
use crate::C64;

#[derive(Debug, Clone, PartialEq)]
pub struct MultiSeries {
    vars: Vec<String>,
    caps: Vec<usize>,
    strides: Vec<usize>,
    coeffs: Vec<C64>,
}

impl MultiSeries {
    /// The zero series in the given variables.
    pub fn zero<S: AsRef<str>>(vars: &[S], caps: &[usize]) -> Result<Self> {
        if vars.len() != caps.len() {
            return Err(Error::arg(format!(
                "{} variables but {} caps",
                vars.len(),
                caps.len()
            )));
        }
        let names: Vec<String> = vars.iter().map(|v| v.as_ref().to_owned()).collect();
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::arg(format!("duplicate variable {n}")));
            }
        }
        // last variable varies fastest
        let mut strides = vec![1; caps.len()];
        for i in (0..caps.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * (caps[i + 1] + 1);
        }
        let len = caps.iter().map(|c| c + 1).product();
        Ok(MultiSeries {
            vars: names,
            caps: caps.to_vec(),
            strides,
            coeffs: vec![C64::new(0.0, 0.0); len],
        })
    }

    /// A zero series sharing this series' variables and caps.
    pub fn zeros_like(&self) -> Self {
        MultiSeries {
            vars: self.vars.clone(),
            caps: self.caps.clone(),
            strides: self.strides.clone(),
            coeffs: vec![C64::new(0.0, 0.0); self.coeffs.len()],
        }
    }

    pub fn constant_like(&self, c: C64) -> Self {
        let mut out = self.zeros_like();
        out.coeffs[0] = c;
        out
    }

    /// The series `x_name`. A variable whose cap is 0 truncates to zero.
    pub fn variable_like(&self, name: &str) -> Result<Self> {
        let i = self.index_of(name)?;
        let mut exps = vec![0; self.caps.len()];
        exps[i] = 1;
        let mut out = self.zeros_like();
        if self.caps[i] >= 1 {
            out.set(&exps, C64::new(1.0, 0.0))?;
        }
        Ok(out)
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn caps(&self) -> &[usize] {
        &self.caps
    }

    fn index_of(&self, name: &str) -> Result<usize> {
        self.vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::arg(format!("unknown variable {name}")))
    }

    fn flat(&self, exps: &[usize]) -> Result<usize> {
        if exps.len() != self.caps.len() {
            return Err(Error::arg(format!(
                "exponent tuple has {} entries, series has {} variables",
                exps.len(),
                self.caps.len()
            )));
        }
        let mut idx = 0;
        for ((&e, &c), &s) in exps.iter().zip(&self.caps).zip(&self.strides) {
            if e > c {
                return Err(Error::arg(format!("exponent {e} exceeds cap {c}")));
            }
            idx += e * s;
        }
        Ok(idx)
    }

    fn exponents(&self, mut flat: usize) -> Vec<usize> {
        self.strides
            .iter()
            .map(|&s| {
                let e = flat / s;
                flat %= s;
                e
            })
            .collect()
    }

    pub fn coeff(&self, exps: &[usize]) -> Result<C64> {
        Ok(self.coeffs[self.flat(exps)?])
    }

    pub fn set(&mut self, exps: &[usize], value: C64) -> Result<()> {
        let i = self.flat(exps)?;
        self.coeffs[i] = value;
        Ok(())
    }

    /// Adds `value · Π x_i^{e_i}`; silently drops monomials beyond the caps.
    pub fn add_monomial(&mut self, exps: &[usize], value: C64) -> Result<()> {
        if exps.len() != self.caps.len() {
            return Err(Error::arg("exponent tuple length mismatch"));
        }
        if exps.iter().zip(&self.caps).any(|(e, c)| e > c) {
            return Ok(());
        }
        let i = self.flat(exps)?;
        self.coeffs[i] += value;
        Ok(())
    }

    pub fn constant_term(&self) -> C64 {
        self.coeffs[0]
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.vars != other.vars || self.caps != other.caps {
            return Err(Error::arg(format!(
                "series mismatch: {:?}{:?} vs {:?}{:?}",
                self.vars, self.caps, other.vars, other.caps
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: C64) -> Self {
        let mut out = self.clone();
        out.coeffs.iter_mut().for_each(|a| *a *= c);
        out
    }

    pub fn add_constant(&self, c: C64) -> Self {
        let mut out = self.clone();
        out.coeffs[0] += c;
        out
    }

    /// Truncated Cauchy product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.zeros_like();
        let exps: Vec<Vec<usize>> = (0..self.coeffs.len()).map(|i| self.exponents(i)).collect();
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == C64::new(0.0, 0.0) {
                continue;
            }
            let ei = &exps[i];
            'inner: for (j, b) in other.coeffs.iter().enumerate() {
                if *b == C64::new(0.0, 0.0) {
                    continue;
                }
                let ej = &exps[j];
                for k in 0..ei.len() {
                    if ei[k] + ej[k] > self.caps[k] {
                        continue 'inner;
                    }
                }
                out.coeffs[i + j] += a * b;
            }
        }
        Ok(out)
    }

    fn total_cap(&self) -> usize {
        self.caps.iter().sum()
    }

    /// `exp(a) = e^{a(0)} Σ_k (a − a(0))^k / k!`; the sum is finite because the
    /// shifted series is nilpotent under truncation.
    pub fn exp(&self) -> Self {
        let c = self.coeffs[0];
        let mut shifted = self.clone();
        shifted.coeffs[0] = C64::new(0.0, 0.0);
        let mut total = self.constant_like(C64::new(1.0, 0.0));
        let mut term = total.clone();
        for k in 1..=self.total_cap() {
            term = term
                .mul(&shifted)
                .expect("same space")
                .scale(C64::new(1.0 / k as f64, 0.0));
            if term.coeffs.iter().all(|x| *x == C64::new(0.0, 0.0)) {
                break;
            }
            total = total.add(&term).expect("same space");
        }
        total.scale(c.exp())
    }

    /// `a^{−1/2}` by the binomial series; requires a unit constant term.
    pub fn inv_sqrt(&self) -> Result<Self> {
        let c = self.coeffs[0];
        if (c - C64::new(1.0, 0.0)).norm() > 1e-14 {
            return Err(Error::arg(format!(
                "inv_sqrt requires constant term 1, got {c}"
            )));
        }
        let mut u = self.clone();
        u.coeffs[0] = C64::new(0.0, 0.0);
        let mut total = self.constant_like(C64::new(1.0, 0.0));
        let mut term = total.clone();
        // binom(−1/2, k) = binom(−1/2, k−1) · (−1/2 − k + 1) / k
        let mut binom = 1.0;
        for k in 1..=self.total_cap() {
            binom *= (-0.5 - (k as f64 - 1.0)) / k as f64;
            term = term.mul(&u)?;
            if term.coeffs.iter().all(|x| *x == C64::new(0.0, 0.0)) {
                break;
            }
            total = total.add(&term.scale(C64::new(binom, 0.0)))?;
        }
        Ok(total)
    }

    /// Mixed partial derivative at the origin: `coeff(orders) · Π orders_i!`.
    pub fn derivative_at_zero(&self, orders: &[usize]) -> Result<C64> {
        let c = self.coeff(orders)?;
        let scale: f64 = orders.iter().map(|&o| factorial(o)).product();
        Ok(c * scale)
    }
}
