//! Wigner function of the operated cat state, before and after a thermal
//! channel, and the negative-volume measure built on it.

use std::f64::consts::PI;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::{factorial, hermite_table};
use crate::state::{normalization, ClosedFormCoefficients, SuperpositionParams};
use crate::C64;

/// Markovian damping into a thermal bath, parametrized by the dimensionless
/// time `κt` and the bath occupation `n̄`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThermalChannel {
    pub kappa_t: f64,
    pub nbar: f64,
}

impl ThermalChannel {
    pub fn new(kappa_t: f64, nbar: f64) -> Result<Self> {
        let ch = ThermalChannel { kappa_t, nbar };
        ch.validate()?;
        Ok(ch)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.kappa_t.is_finite() && self.kappa_t >= 0.0) {
            return Err(Error::arg(format!("kappa_t must be ≥ 0, got {}", self.kappa_t)));
        }
        if !(self.nbar.is_finite() && self.nbar >= 0.0) {
            return Err(Error::arg(format!("nbar must be ≥ 0, got {}", self.nbar)));
        }
        Ok(())
    }

    /// `Γ = 1 − e^{−2κt}`
    pub fn gamma(&self) -> f64 {
        -(-2.0 * self.kappa_t).exp_m1()
    }

    /// `V = 1/(2n̄Γ + 1)`
    pub fn v(&self) -> f64 {
        1.0 / (2.0 * self.nbar * self.gamma() + 1.0)
    }

    /// `U = 1 − e^{−2κt} V`
    pub fn u(&self) -> f64 {
        1.0 - (-2.0 * self.kappa_t).exp() * self.v()
    }
}

/// Wigner function of the bath's thermal state, the long-time limit of any
/// input.
pub fn thermal_wigner(nbar: f64, gamma: C64) -> f64 {
    let w = 2.0 * nbar + 1.0;
    2.0 / (PI * w) * (-2.0 * gamma.norm_sqr() / w).exp()
}

/// Rectangular phase-space region sampled at cell centers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    /// Square `[−half, half]²` with `n × n` cells.
    pub fn square(half: f64, n: usize) -> Self {
        GridSpec {
            re_min: -half,
            re_max: half,
            im_min: -half,
            im_max: half,
            nx: n,
            ny: n,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.re_min, self.re_max, self.im_min, self.im_max]
            .iter()
            .all(|x| x.is_finite());
        if !finite || self.re_min >= self.re_max || self.im_min >= self.im_max {
            return Err(Error::arg("grid bounds must be finite and ordered"));
        }
        if self.nx < 2 || self.ny < 2 {
            return Err(Error::arg("grids need at least 2 cells per axis"));
        }
        Ok(())
    }

    pub fn dx(&self) -> f64 {
        (self.re_max - self.re_min) / self.nx as f64
    }

    pub fn dy(&self) -> f64 {
        (self.im_max - self.im_min) / self.ny as f64
    }

    pub fn cell_area(&self) -> f64 {
        self.dx() * self.dy()
    }

    /// Center of cell `(ix, iy)`.
    pub fn point(&self, ix: usize, iy: usize) -> C64 {
        C64::new(
            self.re_min + (ix as f64 + 0.5) * self.dx(),
            self.im_min + (iy as f64 + 0.5) * self.dy(),
        )
    }

    /// All cell centers, `ix` major.
    pub fn points(&self) -> Vec<C64> {
        (0..self.nx)
            .flat_map(|ix| (0..self.ny).map(move |iy| (ix, iy)))
            .map(|(ix, iy)| self.point(ix, iy))
            .collect()
    }
}

/// Wigner samples over a [`GridSpec`]; `values[ix * ny + iy]` belongs to
/// the cell centered at [`GridSpec::point`]`(ix, iy)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WignerGrid {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub nx: usize,
    pub ny: usize,
    pub values: Vec<f64>,
}

impl WignerGrid {
    /// Samples `f` at every cell center.
    pub fn sample<F>(spec: &GridSpec, f: F) -> Result<Self>
    where
        F: Fn(C64) -> Result<f64> + Sync,
    {
        spec.validate()?;
        let values = spec
            .points()
            .par_iter()
            .map(|&a| f(a))
            .collect::<Result<Vec<f64>>>()?;
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::consistency("wigner_grid", format!("non-finite sample {bad}")));
        }
        Ok(WignerGrid {
            re_min: spec.re_min,
            re_max: spec.re_max,
            im_min: spec.im_min,
            im_max: spec.im_max,
            nx: spec.nx,
            ny: spec.ny,
            values,
        })
    }

    pub fn spec(&self) -> GridSpec {
        GridSpec {
            re_min: self.re_min,
            re_max: self.re_max,
            im_min: self.im_min,
            im_max: self.im_max,
            nx: self.nx,
            ny: self.ny,
        }
    }

    pub fn get(&self, ix: usize, iy: usize) -> f64 {
        self.values[ix * self.ny + iy]
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Position and value of the smallest sample.
    pub fn argmin(&self) -> (C64, f64) {
        let (i, v) = self
            .values
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("grid is non-empty");
        (self.spec().point(i / self.ny, i % self.ny), *v)
    }

    /// Midpoint-rule integral of the samples.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.spec().cell_area()
    }

    /// Midpoint-rule integral of `|W|`.
    pub fn abs_integral(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).sum::<f64>() * self.spec().cell_area()
    }

    /// Largest pointwise distance to `f`.
    pub fn sup_distance(&self, f: impl Fn(C64) -> f64) -> f64 {
        let spec = self.spec();
        spec.points()
            .iter()
            .zip(&self.values)
            .map(|(&a, v)| (v - f(a)).abs())
            .fold(0.0, f64::max)
    }

    /// CSV with header `re,im,w`, one row per cell center in `values` order.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "re,im,w")?;
        let spec = self.spec();
        for (a, v) in spec.points().iter().zip(&self.values) {
            writeln!(out, "{},{},{}", a.re, a.im, v)?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("grid serializes")
    }
}

fn sign(k: usize) -> f64 {
    if k.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `(2/π) N_m^{-1} (sin θ cos θ / 2)^m A_k` for `k = 0..=m`.
fn wigner_weights(p: &SuperpositionParams, norm: f64) -> Vec<f64> {
    let cf = ClosedFormCoefficients::new(p);
    let pref = 2.0 / PI / norm * cf.chi.abs().powi(p.m as i32);
    cf.a.iter().map(|a| pref * a).collect()
}

fn check_real(quantity: &'static str, w: C64, scale: f64) -> Result<f64> {
    if !(w.re.is_finite() && w.im.is_finite()) {
        return Err(Error::consistency(quantity, format!("non-finite value {w}")));
    }
    if w.im.abs() > 1e-10 * (1.0 + w.re.abs() + scale) {
        return Err(Error::consistency(
            quantity,
            format!("residual imaginary part {:e} on {}", w.im, w.re),
        ));
    }
    Ok(w.re)
}

/// Precomputed constants for repeated evaluation of the static Wigner
/// function at fixed parameters.
struct StaticWigner {
    p: SuperpositionParams,
    weights: Vec<f64>,
    mirror: [ClosedFormCoefficients; 2],
    r: C64,
}

impl StaticWigner {
    fn new(p: &SuperpositionParams) -> Result<Self> {
        let norm = normalization(p)?;
        let cf = ClosedFormCoefficients::new(p);
        Ok(StaticWigner {
            p: *p,
            weights: wigner_weights(p, norm),
            mirror: [cf.clone(), ClosedFormCoefficients::at(p, -p.alpha0)],
            r: cf.r,
        })
    }

    fn eval(&self, alpha: C64) -> Result<f64> {
        let m = self.p.m;
        let sigma = self.p.parity.cross_sign();
        let r = self.r;
        let mut total = C64::new(0.0, 0.0);
        let mut scale = 0.0;
        for (cf, b) in self.mirror.iter().zip([self.p.alpha0, -self.p.alpha0]) {
            let gauss = (-2.0 * (alpha - b).norm_sqr()).exp();
            let hd = hermite_table(m, -cf.c.conj() + r * alpha);
            let phase = (2.0 * b.conj() * alpha - 2.0 * alpha.conj() * b - 2.0 * alpha.norm_sqr()).exp();
            let h1 = hermite_table(m, cf.b.conj() - r.conj() * alpha.conj());
            let h2 = hermite_table(m, cf.b + r * alpha);
            for k in 0..=m {
                let d = self.weights[k];
                let direct = d * sign(k) * gauss * hd[m - k].norm_sqr();
                let cross = d * sign(m) * phase * h1[m - k] * h2[m - k];
                total += direct + sigma * cross;
                scale += direct.abs() + cross.norm();
            }
        }
        check_real("wigner", total, scale)
    }
}

/// Wigner function `W(α)` from the Hermite closed form.
pub fn wigner(p: &SuperpositionParams, alpha: C64) -> Result<f64> {
    StaticWigner::new(p)?.eval(alpha)
}

/// Samples [`wigner`] at the cell centers of `spec`.
pub fn wigner_grid(p: &SuperpositionParams, spec: &GridSpec) -> Result<WignerGrid> {
    let w = StaticWigner::new(p)?;
    WignerGrid::sample(spec, |a| w.eval(a))
}

/// Precomputed constants for the thermally evolved Wigner function.
struct EvolvedWigner {
    p: SuperpositionParams,
    /// `M_{k,l} V` in row `k`, column `l`.
    weights: Vec<Vec<f64>>,
    mirror: [ClosedFormCoefficients; 2],
    r: C64,
    v: f64,
    u: f64,
    decay: f64,
}

impl EvolvedWigner {
    fn new(p: &SuperpositionParams, ch: &ThermalChannel) -> Result<Self> {
        ch.validate()?;
        let norm = normalization(p)?;
        let m = p.m;
        let (s, c) = p.theta.sin_cos();
        let v = ch.v();
        let mf = factorial(m);
        let weights = (0..=m)
            .map(|k| {
                (0..=m - k)
                    .map(|l| {
                        let e = (2 * l + k) as i32 - m as i32;
                        2.0 / PI / norm * sign(k) * 2f64.powi(e) * mf * mf
                            / (factorial(k) * factorial(l) * factorial(m - k - l).powi(2))
                            * s.powi((k + l + m) as i32)
                            / c.powi(k as i32 + l as i32 - m as i32)
                            * v
                    })
                    .collect()
            })
            .collect();
        let cf = ClosedFormCoefficients::new(p);
        Ok(EvolvedWigner {
            p: *p,
            weights,
            mirror: [cf.clone(), ClosedFormCoefficients::at(p, -p.alpha0)],
            r: cf.r,
            v,
            u: ch.u(),
            decay: (-ch.kappa_t).exp(),
        })
    }

    fn eval(&self, gamma: C64) -> Result<f64> {
        let m = self.p.m;
        let (r, v, u, e) = (self.r, self.v, self.u, self.decay);
        let a0 = self.p.alpha0;
        let mut direct = 0.0;
        let mut scale = 0.0;
        for (cf, b) in self.mirror.iter().zip([a0, -a0]) {
            let gauss = (-2.0 * v * (gamma - b * e).norm_sqr()).exp();
            let h = hermite_table(m, -cf.c.conj() + r * b * u + r * gamma * e * v);
            for k in 0..=m {
                let mut up = 1.0;
                for l in 0..=m - k {
                    let t = self.weights[k][l] * up * gauss * h[m - k - l].norm_sqr();
                    direct += t;
                    scale += t.abs();
                    up *= u;
                }
            }
        }
        let cf = &self.mirror[0];
        let expo = -2.0 * gamma.norm_sqr() * v - 2.0 * a0.norm_sqr() * u
            + 2.0 * gamma * e * a0.conj() * v
            - 2.0 * gamma.conj() * e * a0 * v;
        let phase = expo.exp();
        let h1 = hermite_table(m, -cf.b.conj() + r.conj() * a0.conj() * u + r.conj() * gamma.conj() * e * v);
        let h2 = hermite_table(m, cf.b - r * a0 * u + r * gamma * e * v);
        let mut cross = C64::new(0.0, 0.0);
        for k in 0..=m {
            let mut up = 1.0;
            for l in 0..=m - k {
                let t = self.weights[k][l] * up * phase * h1[m - k - l] * h2[m - k - l];
                cross += t;
                scale += t.norm();
                up *= u;
            }
        }
        let total = C64::new(direct, 0.0) + self.p.parity.cross_sign() * (cross + cross.conj());
        check_real("wigner_evolved", total, scale)
    }
}

/// Wigner function after the thermal channel, `W(γ, κt)`, from the closed
/// form. At `κt = 0` this coincides with [`wigner`].
pub fn wigner_evolved(p: &SuperpositionParams, ch: &ThermalChannel, gamma: C64) -> Result<f64> {
    EvolvedWigner::new(p, ch)?.eval(gamma)
}

pub fn wigner_evolved_grid(
    p: &SuperpositionParams,
    ch: &ThermalChannel,
    spec: &GridSpec,
) -> Result<WignerGrid> {
    let w = EvolvedWigner::new(p, ch)?;
    WignerGrid::sample(spec, |a| w.eval(a))
}

/// Settings for the negative-volume quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureSettings {
    /// Initial half-width of the integration square; `None` uses
    /// `|α₀| + 6` for states and 6 for bare integrands.
    pub half_width: Option<f64>,
    /// Cells per side on the coarsest level.
    pub initial_cells: usize,
    /// Absolute tolerance on the extrapolated volume.
    pub tol: f64,
    /// Maximum number of resolution doublings.
    pub max_refinements: usize,
    /// The square grows until its outermost unit-width band holds less
    /// than this much `∫|W|`.
    pub annulus_tol: f64,
    pub max_growths: usize,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        QuadratureSettings {
            half_width: None,
            initial_cells: 64,
            tol: 1e-4,
            max_refinements: 6,
            annulus_tol: 1e-6,
            max_growths: 8,
        }
    }
}

/// Outcome of [`negative_volume_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NegativeVolume {
    /// `δ = (∫|W| − 1)/2`, never negative.
    pub delta: f64,
    /// `1 + 2δ`.
    pub abs_integral: f64,
    pub half_width: f64,
    /// Cells per side on the finest level used.
    pub cells: usize,
    /// Set when the extrapolation overshot below zero and was clamped.
    pub clamped: bool,
}

/// Coarse pass over `[−half, half]²` with `n` cells per side: the cell
/// center values, in [`GridSpec::point`] order, and the part of `∫|W|`
/// coming from the outermost unit-width band. With `symmetric` only half
/// the cells are evaluated, relying on `W(α) = W(−α)`.
fn coarse_pass<F>(f: &F, half: f64, n: usize, symmetric: bool) -> Result<(Vec<f64>, f64)>
where
    F: Fn(C64) -> Result<f64> + Sync,
{
    let spec = GridSpec::square(half, n);
    let cols = if symmetric { n / 2 } else { n };
    let mut values = (0..cols * n)
        .into_par_iter()
        .map(|i| f(spec.point(i / n, i % n)))
        .collect::<Result<Vec<f64>>>()?;
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::consistency("negative_volume", format!("non-finite sample {v}")));
    }
    if symmetric {
        let mirrored: Vec<f64> = values.iter().rev().copied().collect();
        values.extend(mirrored);
    }
    let band = (1.0 / spec.dx()).ceil() as usize;
    let outer: f64 = values
        .iter()
        .enumerate()
        .filter(|(i, _)| {
            let (ix, iy) = (i / n, i % n);
            ix.min(iy).min(n - 1 - ix).min(n - 1 - iy) < band
        })
        .map(|(_, v)| v.abs())
        .sum();
    Ok((values, outer * spec.cell_area()))
}

/// Coarse cells within two cells of a negative center value.
fn active_cells(values: &[f64], n: usize) -> Vec<(usize, usize)> {
    let negative = |ix: usize, iy: usize| values[ix * n + iy] < 0.0;
    let mut cells = Vec::new();
    for ix in 0..n {
        for iy in 0..n {
            let near = (ix.saturating_sub(2)..(ix + 3).min(n))
                .any(|jx| (iy.saturating_sub(2)..(iy + 3).min(n)).any(|jy| negative(jx, jy)));
            if near {
                cells.push((ix, iy));
            }
        }
    }
    cells
}

/// Mean of `max(c + a·s + b·t, 0)` for `s, t` uniform on `[−½, ½]`.
fn positive_part_mean(c: f64, a: f64, b: f64) -> f64 {
    let (a, b) = (a.abs().max(b.abs()), a.abs().min(b.abs()));
    if a <= 1e-12 * c.abs() {
        c.max(0.0)
    } else if b <= 1e-6 * a {
        let q = |z: f64| z.max(0.0).powi(2) / 2.0;
        (q(c + a / 2.0) - q(c - a / 2.0)) / a
    } else {
        let p = |z: f64| z.max(0.0).powi(3) / 6.0;
        let (ha, hb) = (a / 2.0, b / 2.0);
        (p(c + ha + hb) - p(c + ha - hb) - p(c - ha + hb) + p(c - ha - hb)) / (a * b)
    }
}

/// `∫max(−W, 0)` over the given coarse cells, each split into `k × k`
/// subcells. Subcells that may straddle a zero of `W` are integrated
/// exactly against the local linear model from central differences, the
/// rest by the midpoint rule.
fn negative_part<F>(f: &F, spec: &GridSpec, cells: &[(usize, usize)], k: usize) -> Result<f64>
where
    F: Fn(C64) -> Result<f64> + Sync,
{
    let h = spec.dx() / k as f64;
    let side = k + 2;
    let sum = cells
        .par_iter()
        .map(|&(ix, iy)| {
            let x0 = spec.re_min + ix as f64 * spec.dx() - 0.5 * h;
            let y0 = spec.im_min + iy as f64 * spec.dy() - 0.5 * h;
            let mut v = vec![0.0; side * side];
            for i in 0..side {
                for j in 0..side {
                    v[i * side + j] = -f(C64::new(x0 + i as f64 * h, y0 + j as f64 * h))?;
                }
            }
            let mut acc = 0.0;
            for i in 1..=k {
                for j in 1..=k {
                    let c = v[i * side + j];
                    let a = (v[(i + 1) * side + j] - v[(i - 1) * side + j]) / 2.0;
                    let b = (v[i * side + j + 1] - v[i * side + j - 1]) / 2.0;
                    acc += if c.abs() < (a.abs() + b.abs()) / 2.0 {
                        positive_part_mean(c, a, b)
                    } else {
                        c.max(0.0)
                    };
                }
            }
            Ok(acc)
        })
        .collect::<Result<Vec<f64>>>()?
        .iter()
        .sum::<f64>();
    Ok(sum * h * h)
}

/// Negative volume of an arbitrary Wigner function (assumed to integrate
/// to one), computed as `∫max(−W, 0)`. A coarse midpoint pass sizes the
/// square, growing it while the boundary band still carries weight, and
/// locates the negative region; only coarse cells near it are refined.
/// The integrand has kinks on the zero curves of `W`, so successive
/// differences need not contract at a fixed rate. They are extrapolated
/// with the observed ratio when it is steady and taken as they are
/// otherwise.
pub fn negative_volume_with<F>(f: F, quad: &QuadratureSettings) -> Result<NegativeVolume>
where
    F: Fn(C64) -> Result<f64> + Sync,
{
    negative_volume_impl(f, quad, false)
}

fn negative_volume_impl<F>(f: F, quad: &QuadratureSettings, symmetric: bool) -> Result<NegativeVolume>
where
    F: Fn(C64) -> Result<f64> + Sync,
{
    if quad.initial_cells < 2 || !quad.initial_cells.is_multiple_of(2) || quad.tol.is_nan() || quad.tol <= 0.0 {
        return Err(Error::arg("quadrature needs an even cell count ≥ 2 and a positive tolerance"));
    }
    let mut half = quad.half_width.unwrap_or(6.0);
    if !(half > 0.0 && half.is_finite()) {
        return Err(Error::arg("half-width must be positive"));
    }
    let h0 = 2.0 * half / quad.initial_cells as f64;
    let mut n = quad.initial_cells;
    let (mut values, mut outer) = coarse_pass(&f, half, n, symmetric)?;
    let mut growths = 0;
    while outer > quad.annulus_tol {
        if growths == quad.max_growths {
            return Err(Error::Convergence { refinements: growths, previous: quad.annulus_tol, last: outer });
        }
        half += 2.0;
        growths += 1;
        n = 2 * (half / h0).ceil() as usize;
        (values, outer) = coarse_pass(&f, half, n, symmetric)?;
    }
    let spec = GridSpec::square(half, n);
    let mut cells = active_cells(&values, n);
    let scale = if symmetric {
        cells.retain(|&(ix, _)| ix < n / 2);
        2.0
    } else {
        1.0
    };
    let mut raw = f64::NAN;
    let mut diff = f64::NAN;
    let mut estimates = [f64::NAN; 2];
    let mut k = 1;
    for r in 1..=quad.max_refinements {
        k *= 2;
        let next = scale * negative_part(&f, &spec, &cells, k)?;
        let d = next - raw;
        let ratio = diff / d;
        let estimate = if (2.0..=16.0).contains(&ratio) { next + d / (ratio - 1.0) } else { next };
        let spread = (estimate - estimates[1]).abs().min(d.abs());
        estimates = [estimates[1], estimate];
        if r >= 3 && spread < quad.tol {
            return Ok(NegativeVolume {
                delta: estimate.max(0.0),
                abs_integral: 1.0 + 2.0 * estimate.max(0.0),
                half_width: half,
                cells: n * k,
                clamped: estimate < 0.0,
            });
        }
        raw = next;
        diff = d;
    }
    Err(Error::Convergence { refinements: quad.max_refinements, previous: estimates[0], last: estimates[1] })
}

/// Negative volume `δ = (∫|W| d²α − 1)/2` of the operated cat state.
pub fn negative_volume(p: &SuperpositionParams, quad: &QuadratureSettings) -> Result<f64> {
    Ok(negative_volume_report(p, quad)?.delta)
}

pub fn negative_volume_report(p: &SuperpositionParams, quad: &QuadratureSettings) -> Result<NegativeVolume> {
    let w = StaticWigner::new(p)?;
    let settings = QuadratureSettings {
        half_width: Some(quad.half_width.unwrap_or(p.alpha0.norm() + 6.0)),
        ..*quad
    };
    negative_volume_impl(|a| w.eval(a), &settings, true)
}

/// Negative volume of the thermally evolved state.
pub fn negative_volume_evolved(
    p: &SuperpositionParams,
    ch: &ThermalChannel,
    quad: &QuadratureSettings,
) -> Result<f64> {
    let w = EvolvedWigner::new(p, ch)?;
    let spread = (2.0 * ch.nbar + 1.0).sqrt();
    let settings = QuadratureSettings {
        half_width: Some(quad.half_width.unwrap_or(p.alpha0.norm() + 6.0 * spread)),
        ..*quad
    };
    Ok(negative_volume_impl(|a| w.eval(a), &settings, true)?.delta)
}
