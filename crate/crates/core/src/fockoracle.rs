//! Brute-force number-basis ground truth.
//!
//! Nothing here uses the Hermite closed forms: states are built by applying
//! the ladder-operator matrix of Ω to coherent amplitudes, Wigner values come
//! from the displaced-parity expectation with the displacement computed as a
//! truncated exponential, and the thermal channel is integrated with a
//! fixed-step RK4 on the density matrix.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phasespace::ThermalChannel;
use crate::special::ln_factorial_table;
use crate::state::SuperpositionParams;
use crate::C64;

/// Largest cutoff [`cutoff_select`] will return.
pub const MAX_CUTOFF: usize = 2048;

const ZERO: C64 = C64::new(0.0, 0.0);

/// Truncated state vector `Σ_{n ≤ cutoff} amps[n] |n⟩`, not necessarily
/// normalized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "FockVectorJson", try_from = "FockVectorJson")]
pub struct FockVector {
    cutoff: usize,
    amps: Vec<C64>,
}

#[derive(Serialize, Deserialize)]
struct FockVectorJson {
    cutoff: usize,
    amps: Vec<f64>,
}

impl From<FockVector> for FockVectorJson {
    fn from(v: FockVector) -> Self {
        FockVectorJson {
            cutoff: v.cutoff,
            amps: interleave(&v.amps),
        }
    }
}

impl TryFrom<FockVectorJson> for FockVector {
    type Error = Error;

    fn try_from(j: FockVectorJson) -> Result<Self> {
        let amps = deinterleave(&j.amps)?;
        FockVector::from_amplitudes(j.cutoff, amps)
    }
}

fn interleave(z: &[C64]) -> Vec<f64> {
    z.iter().flat_map(|c| [c.re, c.im]).collect()
}

fn deinterleave(x: &[f64]) -> Result<Vec<C64>> {
    if !x.len().is_multiple_of(2) {
        return Err(Error::arg("interleaved re/im array has odd length"));
    }
    Ok(x.chunks(2).map(|p| C64::new(p[0], p[1])).collect())
}

impl FockVector {
    pub fn from_amplitudes(cutoff: usize, amps: Vec<C64>) -> Result<Self> {
        if amps.len() != cutoff + 1 {
            return Err(Error::arg(format!(
                "cutoff {cutoff} needs {} amplitudes, got {}",
                cutoff + 1,
                amps.len()
            )));
        }
        Ok(FockVector { cutoff, amps })
    }

    pub fn vacuum(cutoff: usize) -> Self {
        let mut amps = vec![ZERO; cutoff + 1];
        amps[0] = C64::new(1.0, 0.0);
        FockVector { cutoff, amps }
    }

    /// Normalized coherent state `|α⟩`.
    pub fn coherent(alpha: C64, cutoff: usize) -> Self {
        FockVector {
            cutoff,
            amps: coherent_amplitudes(alpha, cutoff + 1),
        }
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm_sqr().sqrt();
        FockVector {
            cutoff: self.cutoff,
            amps: self.amps.iter().map(|a| a / n).collect(),
        }
    }

    /// `|⟨n|ψ⟩|² / ⟨ψ|ψ⟩`, zero beyond the cutoff.
    pub fn probability(&self, n: usize) -> f64 {
        self.amps.get(n).map_or(0.0, |a| a.norm_sqr()) / self.norm_sqr()
    }

    pub fn inner(&self, other: &Self) -> C64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Relative weight of the top `levels` amplitudes.
    pub fn tail_weight(&self, levels: usize) -> f64 {
        let start = self.amps.len().saturating_sub(levels);
        self.amps[start..].iter().map(|a| a.norm_sqr()).sum::<f64>() / self.norm_sqr()
    }
}

/// `e^{−|α|²/2} α^n / √(n!)` for `n < len`.
fn coherent_amplitudes(alpha: C64, len: usize) -> Vec<C64> {
    let mut out = Vec::with_capacity(len);
    let mut a = C64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    for n in 0..len {
        if n > 0 {
            a = a * alpha / (n as f64).sqrt();
        }
        out.push(a);
    }
    out
}

fn lower(v: &[C64]) -> Vec<C64> {
    (0..v.len())
        .map(|n| if n + 1 < v.len() { ((n + 1) as f64).sqrt() * v[n + 1] } else { ZERO })
        .collect()
}

fn raise_extend(v: &[C64]) -> Vec<C64> {
    let mut out = vec![ZERO; v.len() + 1];
    for (n, a) in v.iter().enumerate() {
        out[n + 1] = ((n + 1) as f64).sqrt() * a;
    }
    out
}

fn build_raw(p: &SuperpositionParams, cutoff: usize) -> FockVector {
    let m = p.m;
    let len = cutoff + 1 + m;
    let sigma = p.parity.cross_sign();
    let mut v: Vec<C64> = coherent_amplitudes(p.alpha0, len)
        .into_iter()
        .enumerate()
        .map(|(n, a)| {
            let mirror = if n % 2 == 0 { 1.0 } else { -1.0 };
            a * (1.0 + sigma * mirror)
        })
        .collect();
    let (s, c) = p.theta.sin_cos();
    let up = C64::from_polar(s, p.phi);
    // Level n of Ω v reads levels n ± 1 only, so after m applications the
    // first cutoff + 1 levels are exact even though the working vector is
    // truncated at cutoff + m.
    for _ in 0..m {
        let next: Vec<C64> = (0..len)
            .map(|n| {
                let down = if n + 1 < len { c * ((n + 1) as f64).sqrt() * v[n + 1] } else { ZERO };
                let raise = if n >= 1 { up * (n as f64).sqrt() * v[n - 1] } else { ZERO };
                down + raise
            })
            .collect();
        v = next;
    }
    v.truncate(cutoff + 1);
    FockVector { cutoff, amps: v }
}

/// Unnormalized `|ψ_m⟩` in the number basis up to `cutoff`.
pub fn build_state(p: &SuperpositionParams, cutoff: usize) -> Result<FockVector> {
    p.validate()?;
    if cutoff == 0 {
        return Err(Error::arg("cutoff must be positive"));
    }
    let v = build_raw(p, cutoff);
    // two levels so that a parity-forbidden top level cannot hide the tail
    let tail = v.tail_weight(2);
    if tail > 1e-14 {
        return Err(Error::CutoffTooSmall { cutoff, tail });
    }
    Ok(v)
}

/// Smallest cutoff `32·2^k` whose top eight levels carry relative weight
/// below `tol`.
pub fn cutoff_select(p: &SuperpositionParams, tol: f64) -> Result<usize> {
    p.validate()?;
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::arg("tolerance must be positive"));
    }
    let mut cutoff = 32;
    while cutoff <= MAX_CUTOFF {
        if build_raw(p, cutoff).tail_weight(8) < tol {
            return Ok(cutoff);
        }
        cutoff *= 2;
    }
    Err(Error::Resource(format!(
        "no cutoff up to {MAX_CUTOFF} reaches tail tolerance {tol:e}"
    )))
}

/// Builds the state at the cutoff chosen by [`cutoff_select`] for `tol`.
pub fn build_state_auto(p: &SuperpositionParams, tol: f64) -> Result<FockVector> {
    build_state(p, cutoff_select(p, tol)?)
}

/// `⟨a†^j a^k⟩` in the normalized state.
pub fn oracle_moment(v: &FockVector, j: usize, k: usize) -> Result<C64> {
    if 2 * (j + k) > v.cutoff {
        return Err(Error::arg(format!(
            "moment order {j}+{k} too high for cutoff {}",
            v.cutoff
        )));
    }
    let mut left = v.amps.clone();
    for _ in 0..j {
        left = lower(&left);
    }
    let mut right = v.amps.clone();
    for _ in 0..k {
        right = lower(&right);
    }
    let s: C64 = left.iter().zip(&right).map(|(a, b)| a.conj() * b).sum();
    Ok(s / v.norm_sqr())
}

/// Anti-normally ordered `⟨a^k a†^k⟩ = ‖a†^k ψ‖² / ‖ψ‖²`, raising into
/// levels above the cutoff as needed.
pub fn oracle_antinormal(v: &FockVector, k: usize) -> f64 {
    let mut w = v.amps.clone();
    for _ in 0..k {
        w = raise_extend(&w);
    }
    w.iter().map(|a| a.norm_sqr()).sum::<f64>() / v.norm_sqr()
}

/// `P(n) = Σ_{k ≥ n} C(k,n) ξ^n (1−ξ)^{k−n} |⟨k|ψ⟩|² / ⟨ψ|ψ⟩`.
pub fn oracle_photocount(v: &FockVector, xi: f64, n: usize) -> Result<f64> {
    if !(xi > 0.0 && xi <= 1.0) {
        return Err(Error::arg(format!("efficiency xi must lie in (0, 1], got {xi}")));
    }
    if n > v.cutoff {
        return Err(Error::arg(format!("n = {n} above cutoff {}", v.cutoff)));
    }
    if xi == 1.0 {
        return Ok(v.probability(n));
    }
    let lnf = ln_factorial_table(v.cutoff);
    let norm = v.norm_sqr();
    let mut total = 0.0;
    for k in n..=v.cutoff {
        let p = v.amps[k].norm_sqr();
        if p == 0.0 {
            continue;
        }
        let ln_w = lnf[k] - lnf[n] - lnf[k - n] + n as f64 * xi.ln() + (k - n) as f64 * (1.0 - xi).ln();
        total += ln_w.exp() * p;
    }
    Ok(total / norm)
}

/// `Tr(ρ_m ρ₀) / Tr(ρ₀²)` between the operated and unoperated states.
pub fn oracle_fidelity(p: &SuperpositionParams, tol: f64) -> Result<f64> {
    let v = build_state_auto(p, tol)?;
    let base = SuperpositionParams { m: 0, ..*p };
    let v0 = build_state(&base, v.cutoff)?;
    Ok(v0.inner(&v).norm_sqr() / (v.norm_sqr() * v0.norm_sqr()))
}

/// Highest index carrying non-negligible weight.
fn support(v: &[C64]) -> usize {
    let total: f64 = v.iter().map(|a| a.norm_sqr()).sum();
    v.iter()
        .rposition(|a| a.norm_sqr() > 1e-32 * total)
        .unwrap_or(0)
}

/// `D(β) v = exp(β a† − β* a) v` in a space padded far enough to hold the
/// displaced support. The exponential is taken in `steps` slices, each a
/// Taylor series run until the next term is negligible.
fn displace(v: &[C64], beta: C64) -> Result<Vec<C64>> {
    let ns = support(v) as f64;
    let reach = ns.sqrt() + beta.norm();
    let dim = ((reach * reach + 10.0 * reach + 24.0).ceil() as usize).max(v.len());
    let mut x = vec![ZERO; dim];
    x[..v.len()].copy_from_slice(v);
    let sqrt: Vec<f64> = (0..=dim).map(|n| (n as f64).sqrt()).collect();
    let bound = 2.0 * beta.norm() * sqrt[dim];
    let steps = ((bound / 4.0).ceil() as usize).max(1);
    let b = beta / steps as f64;
    let bc = b.conj();
    let norm0: f64 = x.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    let mut term = vec![ZERO; dim];
    let mut next = vec![ZERO; dim];
    for _ in 0..steps {
        term.copy_from_slice(&x);
        let mut k = 1.0;
        loop {
            for n in 0..dim {
                let up = if n >= 1 { b * sqrt[n] * term[n - 1] } else { ZERO };
                let down = if n + 1 < dim { bc * sqrt[n + 1] * term[n + 1] } else { ZERO };
                next[n] = (up - down) / k;
            }
            std::mem::swap(&mut term, &mut next);
            let mut tn = 0.0;
            for (xi, ti) in x.iter_mut().zip(&term) {
                *xi += ti;
                tn += ti.norm_sqr();
            }
            if tn.sqrt() < 1e-17 * norm0 || k > 200.0 {
                break;
            }
            k += 1.0;
        }
    }
    let total: f64 = x.iter().map(|a| a.norm_sqr()).sum();
    let tail: f64 = x[dim - 4..].iter().map(|a| a.norm_sqr()).sum::<f64>() / total;
    if tail > 1e-13 {
        return Err(Error::CutoffTooSmall { cutoff: dim, tail });
    }
    Ok(x)
}

fn parity_weight(x: &[C64]) -> f64 {
    x.iter()
        .enumerate()
        .map(|(n, a)| if n % 2 == 0 { a.norm_sqr() } else { -a.norm_sqr() })
        .sum()
}

fn check_displacement(alpha: C64, cutoff: usize) -> Result<()> {
    if alpha.norm() > (cutoff as f64).sqrt() / 2.0 {
        return Err(Error::arg(format!(
            "|alpha| = {} exceeds √cutoff/2 for cutoff {cutoff}",
            alpha.norm()
        )));
    }
    Ok(())
}

/// Wigner function by displaced parity, `(2/π) ⟨ψ|D(α) Π D†(α)|ψ⟩ / ⟨ψ|ψ⟩`.
pub fn oracle_wigner(v: &FockVector, alpha: C64) -> Result<f64> {
    check_displacement(alpha, v.cutoff)?;
    let x = displace(&v.amps, -alpha)?;
    Ok(2.0 / PI * parity_weight(&x) / v.norm_sqr())
}

/// Truncated density matrix, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "FockDensityJson", try_from = "FockDensityJson")]
pub struct FockDensity {
    cutoff: usize,
    matrix: Vec<C64>,
}

#[derive(Serialize, Deserialize)]
struct FockDensityJson {
    cutoff: usize,
    matrix: Vec<f64>,
}

impl From<FockDensity> for FockDensityJson {
    fn from(d: FockDensity) -> Self {
        FockDensityJson {
            cutoff: d.cutoff,
            matrix: interleave(&d.matrix),
        }
    }
}

impl TryFrom<FockDensityJson> for FockDensity {
    type Error = Error;

    fn try_from(j: FockDensityJson) -> Result<Self> {
        let matrix = deinterleave(&j.matrix)?;
        let d = j.cutoff + 1;
        if matrix.len() != d * d {
            return Err(Error::arg(format!(
                "cutoff {} needs {} matrix entries, got {}",
                j.cutoff,
                d * d,
                matrix.len()
            )));
        }
        Ok(FockDensity {
            cutoff: j.cutoff,
            matrix,
        })
    }
}

impl FockDensity {
    /// `|ψ⟩⟨ψ| / ⟨ψ|ψ⟩`.
    pub fn from_pure(v: &FockVector) -> Self {
        let d = v.cutoff + 1;
        let n = v.norm_sqr();
        let mut matrix = vec![ZERO; d * d];
        for i in 0..d {
            for j in 0..d {
                matrix[i * d + j] = v.amps[i] * v.amps[j].conj() / n;
            }
        }
        FockDensity {
            cutoff: v.cutoff,
            matrix,
        }
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    fn dim(&self) -> usize {
        self.cutoff + 1
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.matrix[i * self.dim() + j]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.get(i, i).re).sum()
    }

    /// Largest `|ρ_ij − ρ_ji*|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let d = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in i..d {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    pub fn min_diagonal(&self) -> f64 {
        (0..self.dim()).map(|i| self.get(i, i).re).fold(f64::INFINITY, f64::min)
    }

    /// `Tr(ρ a†^j a^k)`.
    pub fn moment(&self, j: usize, k: usize) -> C64 {
        // Tr(ρ a†^j a^k) = Σ_n ⟨n|a^k ρ a†^j|n⟩ = Σ_n √(P(n+k,k) P(n+j,j)) ρ_{n+k, n+j}
        let d = self.dim();
        let falling = |n: usize, r: usize| (0..r).map(|i| (n - i) as f64).product::<f64>();
        let mut s = ZERO;
        for n in 0..d {
            if n + k >= d || n + j >= d {
                break;
            }
            s += (falling(n + k, k) * falling(n + j, j)).sqrt() * self.get(n + k, n + j);
        }
        s
    }

    /// `ρ ≈ Σ_i w_i w_i†` by pivoted Cholesky, stopping once every remaining
    /// diagonal entry is below `tol`.
    pub fn factor(&self, tol: f64) -> Vec<Vec<C64>> {
        let d = self.dim();
        let mut diag: Vec<f64> = (0..d).map(|i| self.get(i, i).re).collect();
        let mut cols: Vec<Vec<C64>> = Vec::new();
        while cols.len() < d {
            let (p, &dp) = diag
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.total_cmp(b.1))
                .expect("non-empty");
            if dp <= tol {
                break;
            }
            let root = dp.sqrt();
            let mut col = vec![ZERO; d];
            for (i, ci) in col.iter_mut().enumerate() {
                let mut v = self.get(i, p);
                for prev in &cols {
                    v -= prev[i] * prev[p].conj();
                }
                *ci = v / root;
            }
            col[p] = C64::new(root, 0.0);
            for (di, ci) in diag.iter_mut().zip(&col) {
                *di -= ci.norm_sqr();
            }
            diag[p] = 0.0;
            cols.push(col);
        }
        cols
    }

    fn lindblad(&self, ch: &ThermalChannel) -> Vec<C64> {
        let d = self.dim();
        let loss = ch.nbar + 1.0;
        let gain = ch.nbar;
        let sq: Vec<f64> = (0..=d).map(|n| (n as f64).sqrt()).collect();
        // a†a = diag(n); aa† in the truncated space = diag(n+1) with the top
        // entry zero, which keeps the generator exactly trace preserving.
        let num = |n: usize| n as f64;
        let anum = |n: usize| if n + 1 < d { (n + 1) as f64 } else { 0.0 };
        let mut out = vec![ZERO; d * d];
        for i in 0..d {
            for j in 0..d {
                let r = self.matrix[i * d + j];
                let mut v = C64::new(0.0, 0.0);
                if i + 1 < d && j + 1 < d {
                    v += loss * 2.0 * sq[i + 1] * sq[j + 1] * self.matrix[(i + 1) * d + j + 1];
                }
                v -= loss * (num(i) + num(j)) * r;
                if i >= 1 && j >= 1 {
                    v += gain * 2.0 * sq[i] * sq[j] * self.matrix[(i - 1) * d + j - 1];
                }
                v -= gain * (anum(i) + anum(j)) * r;
                out[i * d + j] = v;
            }
        }
        out
    }
}

/// Number of RK4 steps meeting the stiffness guard
/// `κΔt (2n̄+1) cutoff ≤ 0.1`.
pub fn min_steps(ch: &ThermalChannel, cutoff: usize) -> usize {
    let need = ch.kappa_t * (2.0 * ch.nbar + 1.0) * cutoff as f64 / 0.1;
    (need.ceil() as usize).max(if ch.kappa_t > 0.0 { 1 } else { 0 })
}

/// Fixed-step RK4 integration of the thermal master equation up to the
/// dimensionless time `κt`.
pub fn evolve_master(rho: &FockDensity, ch: &ThermalChannel, steps: usize) -> Result<FockDensity> {
    ch.validate()?;
    if ch.kappa_t == 0.0 {
        return Ok(rho.clone());
    }
    if steps == 0 {
        return Err(Error::arg("positive evolution time needs at least one step"));
    }
    let dt = ch.kappa_t / steps as f64;
    if dt * (2.0 * ch.nbar + 1.0) * rho.cutoff as f64 > 0.1 + 1e-12 {
        return Err(Error::arg(format!(
            "{steps} steps violate the stiffness guard; need at least {}",
            min_steps(ch, rho.cutoff)
        )));
    }
    let tr0 = rho.trace();
    let mut cur = rho.clone();
    let axpy = |base: &FockDensity, k: &[C64], h: f64| FockDensity {
        cutoff: base.cutoff,
        matrix: base.matrix.iter().zip(k).map(|(a, b)| a + b * h).collect(),
    };
    for _ in 0..steps {
        let k1 = cur.lindblad(ch);
        let k2 = axpy(&cur, &k1, dt / 2.0).lindblad(ch);
        let k3 = axpy(&cur, &k2, dt / 2.0).lindblad(ch);
        let k4 = axpy(&cur, &k3, dt).lindblad(ch);
        for (i, r) in cur.matrix.iter_mut().enumerate() {
            *r += (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) * (dt / 6.0);
        }
    }
    let drift = (cur.trace() - tr0).abs();
    if drift > 1e-6 {
        return Err(Error::Integration(format!(
            "trace drifted by {drift:e}; increase the step count"
        )));
    }
    Ok(cur)
}

/// Displaced-parity Wigner function of a density matrix.
pub fn oracle_wigner_density(rho: &FockDensity, alpha: C64) -> Result<f64> {
    let factors = rho.factor(1e-16);
    oracle_wigner_factored(&factors, rho.cutoff, rho.trace(), alpha)
}

/// Wigner values at many points, factoring ρ once.
pub fn oracle_wigner_density_points(rho: &FockDensity, points: &[C64]) -> Result<Vec<f64>> {
    let factors = rho.factor(1e-16);
    let tr = rho.trace();
    points
        .iter()
        .map(|&a| oracle_wigner_factored(&factors, rho.cutoff, tr, a))
        .collect()
}

fn oracle_wigner_factored(factors: &[Vec<C64>], cutoff: usize, trace: f64, alpha: C64) -> Result<f64> {
    check_displacement(alpha, cutoff)?;
    let mut total = 0.0;
    for w in factors {
        total += parity_weight(&displace(w, -alpha)?);
    }
    Ok(2.0 / PI * total / trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::Parity;
    use std::f64::consts::PI;

    fn params(m: usize, alpha: C64) -> SuperpositionParams {
        SuperpositionParams::new(m, PI / 4.0, 0.3, alpha).unwrap()
    }

    #[test]
    fn parity_selection() {
        for m in 0..=4 {
            for parity in [Parity::Odd, Parity::Even] {
                let p = SuperpositionParams::with_parity(m, 0.6, 1.0, C64::new(1.2, -0.4), parity).unwrap();
                let v = build_state(&p, 64).unwrap();
                let allowed = match parity {
                    Parity::Odd => (1 + m) % 2,
                    Parity::Even => m % 2,
                };
                for (n, a) in v.amps().iter().enumerate() {
                    if n % 2 != allowed {
                        assert_eq!(a.norm(), 0.0, "m={m} n={n}");
                    }
                }
            }
        }
    }

    #[test]
    fn undersized_cutoff_is_reported() {
        let p = params(2, C64::new(3.0, 0.0));
        assert!(matches!(build_state(&p, 8), Err(Error::CutoffTooSmall { .. })));
        assert!(build_state(&p, 0).is_err());
    }

    #[test]
    fn cutoff_selection() {
        assert_eq!(cutoff_select(&params(0, C64::new(0.3, 0.0)), 1e-14).unwrap(), 32);
        let small = cutoff_select(&params(0, C64::new(0.3, 0.0)), 1e-8).unwrap();
        let big = cutoff_select(&params(4, C64::new(2.0, 0.0)), 1e-8).unwrap();
        assert!(big > small);
        for a in [0.5, 2.0, 4.0] {
            let p = params(3, C64::new(a, a));
            assert!(cutoff_select(&p, 1e-14).unwrap() >= cutoff_select(&p, 1e-8).unwrap());
        }
        assert!(matches!(
            cutoff_select(&params(0, C64::new(40.0, 0.0)), 1e-14),
            Err(Error::Resource(_))
        ));
        assert!(cutoff_select(&params(0, C64::new(1.0, 0.0)), 0.0).is_err());
    }

    #[test]
    fn moments_of_odd_cat() {
        let v = build_state(&params(0, C64::new(1.0, 0.0)), 64).unwrap();
        assert!((oracle_moment(&v, 0, 0).unwrap() - 1.0).norm() < 1e-14);
        assert!(oracle_moment(&v, 1, 0).unwrap().norm() < 1e-14);
        let n = oracle_moment(&v, 1, 1).unwrap();
        let e = (-2.0f64).exp();
        assert!((n.re - (1.0 + e) / (1.0 - e)).abs() < 1e-12);
        assert!(oracle_moment(&v, 20, 20).is_err());
    }

    #[test]
    fn antinormal_matches_commutator() {
        let v = build_state(&params(2, C64::new(0.8, 0.5)), 64).unwrap();
        let n = oracle_moment(&v, 1, 1).unwrap().re;
        let n2 = oracle_moment(&v, 2, 2).unwrap().re;
        assert!((oracle_antinormal(&v, 2) - (n2 + 4.0 * n + 2.0)).abs() < 1e-10);
        assert!((oracle_antinormal(&v, 1) - (n + 1.0)).abs() < 1e-12);
    }

    #[test]
    fn photocount_is_complete_and_reduces_to_pnd() {
        let v = build_state(&params(3, C64::new(1.0, 0.5)), 64).unwrap();
        for xi in [0.1, 0.5, 0.9] {
            let total: f64 = (0..=64).map(|n| oracle_photocount(&v, xi, n).unwrap()).sum();
            assert!((total - 1.0).abs() < 1e-12);
        }
        for n in 0..10 {
            assert_eq!(oracle_photocount(&v, 1.0, n).unwrap(), v.probability(n));
        }
        assert!(oracle_photocount(&v, 0.0, 1).is_err());
        assert!(oracle_photocount(&v, 0.5, 65).is_err());
    }

    #[test]
    fn wigner_at_origin_is_parity() {
        let vac = FockVector::vacuum(32);
        assert!((oracle_wigner(&vac, C64::new(0.0, 0.0)).unwrap() - 2.0 / PI).abs() < 1e-14);
        let cat = build_state(&params(0, C64::new(1.0, 0.0)), 64).unwrap();
        assert!((oracle_wigner(&cat, C64::new(0.0, 0.0)).unwrap() + 2.0 / PI).abs() < 1e-13);
        assert!(oracle_wigner(&vac, C64::new(3.0, 0.0)).is_err());
    }

    #[test]
    fn coherent_wigner_is_gaussian() {
        let a0 = C64::new(0.7, -0.4);
        let v = FockVector::coherent(a0, 64);
        for alpha in [C64::new(0.0, 0.0), C64::new(1.2, 0.3), C64::new(-2.0, 1.5)] {
            let w = oracle_wigner(&v, alpha).unwrap();
            let g = 2.0 / PI * (-2.0 * (alpha - a0).norm_sqr()).exp();
            assert!((w - g).abs() < 1e-12, "{w} vs {g}");
        }
    }

    #[test]
    fn oracle_wigner_integrates_to_one() {
        let v = build_state(&params(2, C64::new(0.6, 0.3)), 64).unwrap();
        let n = 48;
        let h = 10.0 / n as f64;
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                let a = C64::new(-5.0 + (i as f64 + 0.5) * h, -5.0 + (j as f64 + 0.5) * h);
                // outside the reach of the cutoff the state has no weight
                if a.norm() <= 4.0 {
                    s += oracle_wigner(&v, a).unwrap();
                }
            }
        }
        assert!((s * h * h - 1.0).abs() < 1e-3);
    }

    #[test]
    fn density_from_pure_state() {
        let v = build_state(&params(1, C64::new(0.9, 0.2)), 48).unwrap();
        let rho = FockDensity::from_pure(&v);
        assert!((rho.trace() - 1.0).abs() < 1e-12);
        assert!(rho.hermiticity_defect() < 1e-15);
        assert!(rho.min_diagonal() >= 0.0);
        let n = oracle_moment(&v, 1, 1).unwrap();
        assert!((rho.moment(1, 1) - n).norm() < 1e-12);
        assert!((rho.moment(2, 0) - oracle_moment(&v, 2, 0).unwrap()).norm() < 1e-12);
        let factors = rho.factor(1e-16);
        assert_eq!(factors.len(), 1);
        for alpha in [C64::new(0.1, 0.2), C64::new(-1.0, 0.5)] {
            let a = oracle_wigner(&v, alpha).unwrap();
            let b = oracle_wigner_density(&rho, alpha).unwrap();
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn pivoted_cholesky_reconstructs_mixture() {
        let a = FockDensity::from_pure(&FockVector::coherent(C64::new(0.5, 0.1), 24));
        let b = FockDensity::from_pure(&FockVector::coherent(C64::new(-0.3, 0.8), 24));
        let mix = FockDensity {
            cutoff: 24,
            matrix: a.matrix.iter().zip(&b.matrix).map(|(x, y)| 0.3 * x + 0.7 * y).collect(),
        };
        let f = mix.factor(1e-18);
        assert!(f.len() >= 2);
        for i in 0..25 {
            for j in 0..25 {
                let r: C64 = f.iter().map(|w| w[i] * w[j].conj()).sum();
                assert!((r - mix.get(i, j)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn master_equation_basics() {
        let vac = FockDensity::from_pure(&FockVector::vacuum(16));
        let zero = ThermalChannel::new(0.0, 0.5).unwrap();
        assert_eq!(evolve_master(&vac, &zero, 0).unwrap(), vac);
        let ch = ThermalChannel::new(0.5, 0.0).unwrap();
        let out = evolve_master(&vac, &ch, min_steps(&ch, 16)).unwrap();
        assert_eq!(out, vac);
        assert!(evolve_master(&vac, &ch, 1).is_err());
        assert!(evolve_master(&vac, &ch, 0).is_err());
    }

    #[test]
    fn amplitude_damping_of_coherent_state() {
        // at zero temperature |α⟩ stays coherent with α e^{−κt}
        let a0 = C64::new(1.0, 0.5);
        let rho = FockDensity::from_pure(&FockVector::coherent(a0, 40));
        let ch = ThermalChannel::new(0.3, 0.0).unwrap();
        let out = evolve_master(&rho, &ch, min_steps(&ch, 40)).unwrap();
        let expected = a0 * (-0.3f64).exp();
        assert!((out.moment(0, 1) - expected).norm() < 1e-9);
        assert!((out.moment(1, 1).re - expected.norm_sqr()).abs() < 1e-9);
    }

    #[test]
    fn thermal_relaxation_of_vacuum() {
        // ⟨n⟩(t) = n̄ Γ for an initial vacuum
        let rho = FockDensity::from_pure(&FockVector::vacuum(40));
        let ch = ThermalChannel::new(0.4, 0.5).unwrap();
        let out = evolve_master(&rho, &ch, min_steps(&ch, 40)).unwrap();
        let gamma = 1.0 - (-0.8f64).exp();
        assert!((out.moment(1, 1).re - 0.5 * gamma).abs() < 1e-9);
        assert!((out.trace() - 1.0).abs() < 1e-12);
        assert!(out.hermiticity_defect() < 1e-12);
    }

    #[test]
    fn zero_temperature_decay_is_monotone() {
        let v = build_state(&params(1, C64::new(1.0, 1.0)), 48).unwrap();
        let mut rho = FockDensity::from_pure(&v);
        let ch = ThermalChannel::new(0.02, 0.0).unwrap();
        let mut last = rho.moment(1, 1).re;
        for _ in 0..5 {
            rho = evolve_master(&rho, &ch, min_steps(&ch, 48)).unwrap();
            let n = rho.moment(1, 1).re;
            assert!(n < last);
            assert!(rho.hermiticity_defect() < 1e-12);
            assert!(rho.min_diagonal() >= -1e-10);
            last = n;
        }
    }

    #[test]
    fn json_layouts() {
        let v = FockVector::from_amplitudes(1, vec![C64::new(1.0, 2.0), C64::new(3.0, -4.0)]).unwrap();
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"{"cutoff":1,"amps":[1.0,2.0,3.0,-4.0]}"#);
        let back: FockVector = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
        assert!(serde_json::from_str::<FockVector>(r#"{"cutoff":2,"amps":[1.0,2.0]}"#).is_err());
        assert!(serde_json::from_str::<FockVector>(r#"{"cutoff":0,"amps":[1.0]}"#).is_err());

        let rho = FockDensity::from_pure(&FockVector::vacuum(1));
        let s = serde_json::to_string(&rho).unwrap();
        assert_eq!(s, r#"{"cutoff":1,"matrix":[1.0,0.0,0.0,0.0,0.0,0.0,0.0,0.0]}"#);
        assert_eq!(serde_json::from_str::<FockDensity>(&s).unwrap(), rho);
    }
}
