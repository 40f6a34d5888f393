//! Closed-form observables of the operated cat state.
//!
//! The state is `|ψ_m⟩ = Ω^m (|α₀⟩ ∓ |−α₀⟩)` with
//! `Ω = a cos θ + a† e^{iφ} sin θ`, normalized by `N_m = ⟨ψ_m|ψ_m⟩`.
//! Every formula below is a finite sum of Hermite polynomials evaluated at a
//! handful of complex points; second moments are read off as mixed partial
//! derivatives of small exponential generating functions.
//!
//! Where a printed closed form disagreed with the Fock-space construction
//! the corrected version is used; see `ERRATA.md` at the repository root.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fockoracle;
use crate::series::MultiSeries;
use crate::special::{factorial, hermite_table, ln_factorial_table};
use crate::C64;

/// Largest photon number accepted by [`photocount`].
pub const N_MAX: usize = 128;

/// Which cat state Ω^m acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    /// `|α₀⟩ − |−α₀⟩`
    #[default]
    Odd,
    /// `|α₀⟩ + |−α₀⟩`
    Even,
}

impl Parity {
    /// Sign in front of `|−α₀⟩`, which is also the sign of every
    /// interference term between the two coherent components.
    pub fn cross_sign(self) -> f64 {
        match self {
            Parity::Odd => -1.0,
            Parity::Even => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuperpositionParams {
    /// Number of applications of Ω.
    pub m: usize,
    /// Subtraction/addition mixing angle, strictly inside (0, π/2).
    pub theta: f64,
    /// Relative phase of the addition branch, in [0, 2π).
    pub phi: f64,
    pub alpha0: C64,
    #[serde(default)]
    pub parity: Parity,
}

impl SuperpositionParams {
    /// Parameters for the odd cat.
    pub fn new(m: usize, theta: f64, phi: f64, alpha0: C64) -> Result<Self> {
        Self::with_parity(m, theta, phi, alpha0, Parity::Odd)
    }

    pub fn with_parity(m: usize, theta: f64, phi: f64, alpha0: C64, parity: Parity) -> Result<Self> {
        let p = SuperpositionParams {
            m,
            theta,
            phi,
            alpha0,
            parity,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.theta.is_finite() && self.theta > 0.0 && self.theta < PI / 2.0) {
            return Err(Error::arg(format!(
                "theta must lie strictly inside (0, π/2), got {}",
                self.theta
            )));
        }
        if !(self.phi.is_finite() && self.phi >= 0.0 && self.phi < 2.0 * PI) {
            return Err(Error::arg(format!("phi must lie in [0, 2π), got {}", self.phi)));
        }
        if !(self.alpha0.re.is_finite() && self.alpha0.im.is_finite()) {
            return Err(Error::arg("alpha0 must be finite"));
        }
        if self.parity == Parity::Odd && self.alpha0.norm() == 0.0 {
            return Err(Error::arg("the odd cat vanishes at alpha0 = 0"));
        }
        if self.m > crate::special::M_MAX {
            return Err(Error::arg(format!(
                "m = {} exceeds the Hermite degree limit {}",
                self.m,
                crate::special::M_MAX
            )));
        }
        Ok(())
    }

    /// Same state with `α₀ → −α₀` (identical density matrix).
    pub fn negated(&self) -> Self {
        SuperpositionParams {
            alpha0: -self.alpha0,
            ..*self
        }
    }
}

/// The α₀-dependent constants shared by the closed forms.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormCoefficients {
    /// `A_k = (2 tan θ)^k / k! · (m!/(m−k)!)²` for `k = 0..=m`.
    pub a: Vec<f64>,
    pub b: C64,
    pub c: C64,
    /// `χ = −sin θ cos θ / 2`.
    pub chi: f64,
    /// `R = i √(2 e^{−iφ} sin θ / cos θ)`.
    pub r: C64,
    /// `I_k = 2/k! · (m!/(m−k)!)² · (−|R|²)^k`.
    pub i: Vec<f64>,
    /// `K = i √(2 e^{−iφ} cos θ / sin θ) α`.
    pub k: C64,
}

impl ClosedFormCoefficients {
    pub fn new(p: &SuperpositionParams) -> Self {
        Self::at(p, p.alpha0)
    }

    /// Coefficients with the coherent amplitude replaced by `alpha`; the
    /// mirror terms of the closed forms evaluate them at `−α₀`.
    pub fn at(p: &SuperpositionParams, alpha: C64) -> Self {
        let (s, c) = p.theta.sin_cos();
        let i = C64::i();
        let half_minus = C64::from_polar(1.0, -p.phi / 2.0);
        let half_plus = half_minus.conj();
        let tan = s / c;
        let b = i * half_minus * (tan / 2.0).sqrt() * alpha
            + i * half_plus * (1.0 / (2.0 * tan)).sqrt() * alpha.conj();
        let cc = i * half_minus * (1.0 / (2.0 * tan)).sqrt() * alpha
            - i * half_plus * (tan / 2.0).sqrt() * alpha.conj();
        let r = i * half_minus * (2.0 * tan).sqrt();
        let k = i * half_minus * (2.0 / tan).sqrt() * alpha;
        let m = p.m;
        let falling_sq = |k: usize| (factorial(m) / factorial(m - k)).powi(2);
        let a = (0..=m)
            .map(|k| (2.0 * tan).powi(k as i32) / factorial(k) * falling_sq(k))
            .collect();
        let r2 = r.norm_sqr();
        let iv = (0..=m)
            .map(|k| 2.0 / factorial(k) * falling_sq(k) * (-r2).powi(k as i32))
            .collect();
        ClosedFormCoefficients {
            a,
            b,
            c: cc,
            chi: -0.5 * s * c,
            r,
            i: iv,
            k,
        }
    }
}

fn real_part(quantity: &'static str, z: C64) -> Result<f64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::consistency(quantity, format!("non-finite value {z}")));
    }
    if z.im.abs() > 1e-10 * (1.0 + z.re.abs()) {
        return Err(Error::consistency(
            quantity,
            format!("residual imaginary part {:e} on {}", z.im, z.re),
        ));
    }
    Ok(z.re)
}

fn sign(k: usize) -> f64 {
    if k.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `N_m = ⟨ψ_m|ψ_m⟩`.
pub fn normalization(p: &SuperpositionParams) -> Result<f64> {
    p.validate()?;
    let cf = ClosedFormCoefficients::new(p);
    let m = p.m;
    let hb = hermite_table(m, cf.b);
    let hc = hermite_table(m, cf.c);
    let overlap = (-2.0 * p.alpha0.norm_sqr()).exp();
    let mut direct = 0.0;
    let mut cross = 0.0;
    for k in 0..=m {
        direct += sign(m) * cf.a[k] * hb[m - k].norm_sqr();
        cross += sign(k) * cf.a[k] * hc[m - k].norm_sqr();
    }
    let n = 2.0 * cf.chi.powi(m as i32) * (direct + p.parity.cross_sign() * cross * overlap);
    if !n.is_finite() || n <= 0.0 {
        return Err(Error::consistency(
            "normalization",
            format!("N_m = {n} is not a positive finite number"),
        ));
    }
    Ok(n)
}

/// Overlap fidelity `Tr(ρ_m ρ₀)/Tr(ρ₀²)` with the unoperated odd cat.
pub fn fidelity(p: &SuperpositionParams) -> Result<f64> {
    p.validate()?;
    if p.parity != Parity::Odd {
        return Err(Error::Unsupported(
            "fidelity is defined against the odd cat only".into(),
        ));
    }
    let m = p.m;
    if m % 2 == 1 {
        return Ok(0.0);
    }
    let n = normalization(p)?;
    let cf = ClosedFormCoefficients::new(p);
    let overlap = (-2.0 * p.alpha0.norm_sqr()).exp();
    let hb = hermite_table(m, cf.b.conj());
    let hc = hermite_table(m, cf.c);
    let amp = 2.0 * (hb[m] - overlap * hc[m]);
    let f = cf.chi.abs().powi(m as i32) * amp.norm_sqr() / (n * 2.0 * (1.0 - overlap));
    if !f.is_finite() || !(-1e-12..=1.0 + 1e-9).contains(&f) {
        return Err(Error::consistency("fidelity", format!("F = {f} outside [0, 1]")));
    }
    Ok(f.clamp(0.0, 1.0))
}

/// `⟨a†a⟩`.
pub fn mean_photon(p: &SuperpositionParams) -> Result<f64> {
    let n = normalization(p)?;
    let cf = ClosedFormCoefficients::new(p);
    let m = p.m;
    let x = p.alpha0.norm_sqr();
    let overlap = (-2.0 * x).exp();
    let sigma = p.parity.cross_sign();
    let hb = hermite_table(m, cf.b);
    let hbc = hermite_table(m, cf.b.conj());
    let hmb = hermite_table(m, -cf.b);
    let hc = hermite_table(m, cf.c);
    let hcc = hermite_table(m, cf.c.conj());
    let ra = cf.r.conj() * p.alpha0.conj();
    let mut total = 0.0;
    for k in 0..=m {
        let j = m - k;
        let kf = k as f64;
        let mut bracket = sign(j) * (kf + 1.0 + x) * hb[j].norm_sqr()
            + sigma * (kf + 1.0 - x) * hc[j].norm_sqr() * overlap;
        if j >= 1 {
            bracket += 2.0 * (ra * j as f64 * hmb[j] * hbc[j - 1]).re;
            bracket += sigma * 2.0 * (ra * j as f64 * hcc[j] * hc[j - 1]).re * overlap;
        }
        total += cf.i[k] * bracket;
    }
    let mean = cf.chi.powi(m as i32) / n * total - 1.0;
    if !mean.is_finite() || mean < -1e-9 {
        return Err(Error::consistency(
            "mean_photon",
            format!("⟨a†a⟩ = {mean} is negative or non-finite"),
        ));
    }
    Ok(mean.max(0.0))
}

const VARS4: [&str; 4] = ["t", "s", "lambda", "eta"];

/// `⟨a² a†²⟩`, by extracting `∂^{2m+2}/∂t^m ∂s^m ∂λ ∂η` of the generating
/// functions `f₁`, `f₂` at the origin.
pub fn moment_a2ad2(p: &SuperpositionParams) -> Result<f64> {
    let n = normalization(p)?;
    let m = p.m;
    let base = MultiSeries::zero(&VARS4, &[m, m, 1, 1])?;
    let t = base.variable_like("t")?;
    let s = base.variable_like("s")?;
    let lam = base.variable_like("lambda")?;
    let eta = base.variable_like("eta")?;
    let cf0 = ClosedFormCoefficients::new(p);
    let r = cf0.r;
    let rc = r.conj();
    let x = p.alpha0.norm_sqr();
    let ts = t.mul(&s)?;
    let tt = t.mul(&t)?;
    let ss = s.mul(&s)?;
    let le = lam.mul(&eta)?;
    // 1/(1−4λη) and 1/√(1−4λη) to first order in λη
    let geometric = le.scale(C64::new(4.0, 0.0)).add_constant(C64::new(1.0, 0.0));
    let root = le.scale(C64::new(-4.0, 0.0)).add_constant(C64::new(1.0, 0.0)).inv_sqrt()?;
    let orders = [m, m, 1, 1];

    let generating = |alpha: C64, direct: bool| -> Result<C64> {
        let kk = ClosedFormCoefficients::at(p, alpha).k;
        let ac = alpha.conj();
        let h = ts
            .scale(C64::new(-r.norm_sqr(), 0.0))
            .add(&tt.mul(&eta)?.scale(r * r))?
            .add(&eta.scale(ac * ac))?
            .add(&lam.scale(alpha * alpha))?
            .add(&ss.mul(&lam)?.scale(rc * rc))?;
        let t_eta = t.mul(&eta)?;
        let lam_s = lam.mul(&s)?;
        let (prefactor, exponent) = if direct {
            let h0 = t
                .scale(r * alpha)
                .sub(&s.scale(rc * ac))?
                .add(&t_eta.scale(2.0 * r * ac))?
                .sub(&lam_s.scale(2.0 * rc * alpha))?;
            let pre = t
                .scale(-kk.conj())
                .add(&s.scale(kk))?
                .sub(&ss)?
                .sub(&tt)?
                .add_constant(C64::new(-x, 0.0));
            (pre, h.add(&h0)?.add_constant(C64::new(x, 0.0)))
        } else {
            let l0 = t
                .scale(r * alpha)
                .add(&s.scale(rc * ac))?
                .sub(&t_eta.scale(2.0 * r * ac))?
                .sub(&lam_s.scale(2.0 * rc * alpha))?;
            let pre = t
                .scale(-kk.conj())
                .sub(&s.scale(kk))?
                .sub(&ss)?
                .sub(&tt)?
                .add_constant(C64::new(-x, 0.0));
            (pre, h.sub(&l0)?.add_constant(C64::new(-x, 0.0)))
        };
        let integrand = prefactor.add(&exponent.mul(&geometric)?)?.exp().mul(&root)?;
        integrand.derivative_at_zero(&orders)
    };

    let a0 = p.alpha0;
    let sum = generating(a0, true)?
        + generating(-a0, true)?
        + p.parity.cross_sign() * (generating(a0, false)? + generating(-a0, false)?);
    let value = real_part("moment_a2ad2", sum * cf0.chi.powi(m as i32) / n)?;
    Ok(value)
}

/// `⟨a†² a²⟩ = ⟨a² a†²⟩ − 4⟨a†a⟩ − 2`.
pub fn moment_ad2a2(p: &SuperpositionParams) -> Result<f64> {
    let v = moment_a2ad2(p)? - 4.0 * mean_photon(p)? - 2.0;
    if v < -1e-8 * (1.0 + v.abs()) {
        return Err(Error::consistency(
            "moment_ad2a2",
            format!("⟨a†²a²⟩ = {v} is negative"),
        ));
    }
    Ok(v.max(0.0))
}

/// Mandel's `Q = ⟨a†²a²⟩/⟨a†a⟩ − ⟨a†a⟩`.
pub fn mandel_q(p: &SuperpositionParams) -> Result<f64> {
    let mean = mean_photon(p)?;
    if mean <= 1e-300 {
        return Err(Error::Undefined("Mandel Q needs ⟨a†a⟩ > 0".into()));
    }
    let q = moment_ad2a2(p)? / mean - mean;
    if !q.is_finite() || q < -1.0 - 1e-9 {
        return Err(Error::consistency("mandel_q", format!("Q = {q} below −1")));
    }
    Ok(q)
}

/// `⟨a†⟩`, which vanishes identically: Ω^m maps the cat onto a state of
/// definite photon-number parity.
pub fn mean_ad(p: &SuperpositionParams) -> Result<C64> {
    p.validate()?;
    Ok(C64::new(0.0, 0.0))
}

/// `⟨a†²⟩` from `∂^{2m}/∂t^m ∂s^m` of the generating functions `f₃`, `f₄`.
pub fn mean_ad2(p: &SuperpositionParams) -> Result<C64> {
    let n = normalization(p)?;
    let m = p.m;
    let base = MultiSeries::zero(&["t", "s"], &[m, m])?;
    let t = base.variable_like("t")?;
    let s = base.variable_like("s")?;
    let r = ClosedFormCoefficients::new(p).r;
    let x = p.alpha0.norm_sqr();
    let quad = t
        .mul(&t)?
        .add(&s.mul(&s)?)?
        .add(&t.mul(&s)?.scale(C64::new(r.norm_sqr(), 0.0)))?
        .scale(C64::new(-1.0, 0.0));

    let generating = |alpha: C64, direct: bool| -> Result<C64> {
        let cf = ClosedFormCoefficients::at(p, alpha);
        let lin = t.scale(r).add_constant(alpha.conj());
        let poly = lin.mul(&lin)?;
        let exponent = if direct {
            quad.add(&t.scale(2.0 * cf.b))?.sub(&s.scale(2.0 * cf.b.conj()))?
        } else {
            quad.sub(&t.scale(2.0 * cf.c.conj()))?
                .sub(&s.scale(2.0 * cf.c))?
                .add_constant(C64::new(-2.0 * x, 0.0))
        };
        poly.mul(&exponent.exp())?.derivative_at_zero(&[m, m])
    };

    let a0 = p.alpha0;
    let sum = generating(a0, true)?
        + generating(-a0, true)?
        + p.parity.cross_sign() * (generating(a0, false)? + generating(-a0, false)?);
    let chi = -0.5 * p.theta.sin() * p.theta.cos();
    let v = sum * chi.powi(m as i32) / n;
    if !(v.re.is_finite() && v.im.is_finite()) {
        return Err(Error::consistency("mean_ad2", format!("non-finite ⟨a†²⟩ = {v}")));
    }
    Ok(v)
}

/// Minimum normally ordered quadrature variance over all quadrature angles,
/// `S = −2|⟨a†²⟩ − ⟨a†⟩²| + 2⟨a†a⟩ − 2|⟨a†⟩|²`. Negative values signal
/// squeezing.
pub fn squeezing(p: &SuperpositionParams) -> Result<f64> {
    let ad = mean_ad(p)?;
    let s = -2.0 * (mean_ad2(p)? - ad * ad).norm() + 2.0 * mean_photon(p)? - 2.0 * ad.norm_sqr();
    if !s.is_finite() || s < -1.0 - 1e-9 {
        return Err(Error::consistency("squeezing", format!("S = {s} below −1")));
    }
    Ok(s)
}

/// The ξ-dependent constants of the photocount closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotocountCoefficients {
    /// `F = √(1−ξ) α₀`
    pub f: C64,
    /// `G = −√(1−ξ) R*`
    pub g: C64,
    /// `J = (1−ξ) R α₀`
    pub j: C64,
    /// `T_{m,n} = χ^m n! (m!)² ξ^n / (N_m (1−ξ)^n)`; may overflow to ∞ for
    /// large n, it is never used directly by [`photocount`].
    pub t_mn: f64,
}

impl PhotocountCoefficients {
    pub fn new(p: &SuperpositionParams, xi: f64, n: usize, norm: f64) -> Self {
        let cf = ClosedFormCoefficients::new(p);
        let w = (1.0 - xi).sqrt();
        PhotocountCoefficients {
            f: w * p.alpha0,
            g: -w * cf.r.conj(),
            j: (1.0 - xi) * cf.r * p.alpha0,
            t_mn: cf.chi.powi(p.m as i32) * factorial(n) * factorial(p.m).powi(2) * xi.powi(n as i32)
                / (norm * (1.0 - xi).powi(n as i32)),
        }
    }
}

/// Probability of `n` counts for a detector of quantum efficiency `ξ`.
///
/// For `ξ = 1` the number-basis distribution `|⟨n|ψ_m⟩|²/N_m` is returned
/// from the Fock construction, which sidesteps the removable `0/0` of the
/// closed form.
pub fn photocount(p: &SuperpositionParams, xi: f64, n: usize) -> Result<f64> {
    p.validate()?;
    if n > N_MAX {
        return Err(Error::arg(format!("n = {n} exceeds N_MAX = {N_MAX}")));
    }
    if !(xi > 0.0 && xi <= 1.0) {
        return Err(Error::arg(format!("efficiency xi must lie in (0, 1], got {xi}")));
    }
    if xi == 1.0 {
        let cutoff = fockoracle::cutoff_select(p, 1e-16)?.max(n + 8);
        let v = fockoracle::build_state(p, cutoff)?;
        return Ok(v.probability(n));
    }
    let norm = normalization(p)?;
    let lnf = ln_factorial_table(n.max(p.m));
    photocount_with(p, xi, n, norm, &lnf)
}

/// Photocount probabilities for `n = 0..=n_max`.
pub fn photocount_distribution(p: &SuperpositionParams, xi: f64, n_max: usize) -> Result<Vec<f64>> {
    p.validate()?;
    if n_max > N_MAX {
        return Err(Error::arg(format!("n_max = {n_max} exceeds N_MAX = {N_MAX}")));
    }
    if xi == 1.0 {
        return (0..=n_max).map(|n| photocount(p, xi, n)).collect();
    }
    if !(xi > 0.0 && xi < 1.0) {
        return Err(Error::arg(format!("efficiency xi must lie in (0, 1], got {xi}")));
    }
    let norm = normalization(p)?;
    let lnf = ln_factorial_table(n_max.max(p.m));
    (0..=n_max)
        .map(|n| photocount_with(p, xi, n, norm, &lnf))
        .collect()
}

fn photocount_with(p: &SuperpositionParams, xi: f64, n: usize, norm: f64, lnf: &[f64]) -> Result<f64> {
    let m = p.m;
    let cf = ClosedFormCoefficients::new(p);
    let pc = PhotocountCoefficients::new(p, xi, n, norm);
    let x = p.alpha0.norm_sqr();
    let kk = cf.k;
    let jj = pc.j;
    let h_direct_l = hermite_table(m, (kk - jj.conj()) / 2.0);
    let h_direct_k = hermite_table(m, (jj - kk.conj()) / 2.0);
    let h_cross_l = hermite_table(m, (kk + jj.conj()) / 2.0);
    let h_cross_k = hermite_table(m, (kk.conj() + jj) / 2.0);
    let w_direct = (-xi * x).exp();
    let w_cross = p.parity.cross_sign() * ((xi - 2.0) * x).exp();

    // The (1−ξ) powers of T, F and G combine to (1−ξ)^j, so every term is
    // finite as ξ → 1; the n-dependent magnitude
    // ξ^n |α₀|^{2n−l−k} n!/((n−l)!(n−k)!) is assembled in log space.
    let r = cf.r;
    let lm = m.min(n);
    let abs_a = p.alpha0.norm();
    let arg_a = p.alpha0.arg();
    let magnitude = |l: usize, k: usize| -> f64 {
        let e = 2 * n - l - k;
        if abs_a == 0.0 {
            return if e == 0 { xi.powi(n as i32) * (lnf[n] - lnf[n - l] - lnf[n - k]).exp() } else { 0.0 };
        }
        (n as f64 * xi.ln() + e as f64 * abs_a.ln() + lnf[n] - lnf[n - l] - lnf[n - k]).exp()
    };
    let neg_rc = -r.conj();
    let neg_r = -r;
    let one_minus = 1.0 - xi;

    let mut total = C64::new(0.0, 0.0);
    for l in 0..=lm {
        for k in 0..=lm {
            let mag = magnitude(l, k);
            if mag == 0.0 {
                continue;
            }
            let phase = C64::from_polar(1.0, arg_a * (k as f64 - l as f64));
            let cross_sign = sign(n - k);
            for j in 0..=(m - l.max(k)) {
                let denom = lnf[l] + lnf[j] + lnf[k] + lnf[m - l - j] + lnf[m - j - k];
                let coef = sign(j + k)
                    * one_minus.powi(j as i32)
                    * (-denom).exp()
                    * neg_rc.powu((j + l) as u32)
                    * neg_r.powu((j + k) as u32);
                let bracket = w_direct * h_direct_l[m - l - j] * h_direct_k[m - j - k]
                    + cross_sign * w_cross * h_cross_l[m - l - j] * h_cross_k[m - j - k];
                total += coef * mag * phase * bracket;
            }
        }
    }
    let value = total * 2.0 * cf.chi.powi(m as i32) * factorial(m).powi(2) / norm;
    let v = real_part("photocount", value)?;
    if v < -1e-10 {
        return Err(Error::consistency("photocount", format!("P({n}) = {v} is negative")));
    }
    Ok(v.max(0.0))
}
