//! Parameter sets for the published figures, with the qualitative check
//! each figure supports.

use std::f64::consts::PI;
use std::path::PathBuf;

use mcso_core::phasespace::{thermal_wigner, GridSpec, ThermalChannel};
use mcso_core::{Parity, C64};

use crate::compute::Table;
use crate::config::{Axis, ParamAxes, Quantity, SweepConfig};

pub const NAMES: [&str; 32] = [
    "fig1a", "fig1b", "fig1c", "fig2a", "fig2b", "fig2c", "fig2d", "fig3a", "fig3b", "fig3c",
    "fig3d", "fig4a", "fig4b", "fig4c", "fig5a", "fig5b", "fig6a", "fig6b", "fig6c", "fig6d",
    "fig7a", "fig7b", "fig8a", "fig8b", "fig9a", "fig9b", "fig9c", "fig9d", "fig10a", "fig10b",
    "fig10c", "fig10d",
];

/// Outcome of a figure's qualitative check.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub claim: String,
    pub pass: bool,
    pub detail: String,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {} ({})", self.claim, if self.pass { "PASS" } else { "FAIL" }, self.detail)
    }
}

pub type Check = fn(&Table) -> Verdict;

pub struct Preset {
    pub name: &'static str,
    pub config: SweepConfig,
    pub check: Option<Check>,
}

fn values<T>(v: Vec<T>) -> Axis<T> {
    Axis::Values { values: v }
}

fn range(start: f64, stop: f64, count: usize) -> Axis<f64> {
    Axis::Range { start, stop, count }
}

fn real_range(start: f64, stop: f64, count: usize) -> Axis<C64> {
    Axis::Range { start: C64::new(start, 0.0), stop: C64::new(stop, 0.0), count }
}

fn config(quantity: Quantity, m: Axis<usize>, theta: Axis<f64>, phi: Axis<f64>, alpha0: Axis<C64>) -> SweepConfig {
    SweepConfig {
        quantity,
        params: ParamAxes { m, theta, phi, alpha0, parity: Parity::Odd },
        xi: None,
        n_max: None,
        grid: None,
        channel: None,
        quadrature: None,
        output: PathBuf::new(),
        oracle_check: false,
    }
}

fn photocount(m: usize, theta: f64, phi: f64, xi: f64) -> SweepConfig {
    SweepConfig {
        xi: Some(xi),
        n_max: Some(15),
        ..config(
            Quantity::Photocount,
            Axis::Scalar(m),
            Axis::Scalar(theta),
            Axis::Scalar(phi),
            Axis::Scalar(C64::new(0.5, 0.5)),
        )
    }
}

fn wigner(m: usize, theta: f64, alpha0: C64, half: f64, n: usize) -> SweepConfig {
    SweepConfig {
        grid: Some(GridSpec::square(half, n)),
        ..config(Quantity::Wigner, Axis::Scalar(m), Axis::Scalar(theta), Axis::Scalar(0.0), Axis::Scalar(alpha0))
    }
}

fn evolved(kappa_t: f64, nbar: f64) -> SweepConfig {
    SweepConfig {
        grid: Some(GridSpec::square(4.0, 101)),
        channel: Some(ThermalChannel { kappa_t, nbar }),
        ..config(
            Quantity::EvolvedWigner,
            Axis::Scalar(1),
            Axis::Scalar(PI / 3.0),
            Axis::Scalar(0.0),
            Axis::Scalar(C64::new(1.0, 1.0)),
        )
    }
}

/// Rows grouped by the value of `key`, in first-appearance order, as
/// `(x, y)` pairs.
fn curves(t: &Table, key: &str, x: &str, y: &str) -> Vec<(f64, Vec<(f64, f64)>)> {
    let (k, xi, yi) = (t.column(key).unwrap(), t.column(x).unwrap(), t.column(y).unwrap());
    let mut out: Vec<(f64, Vec<(f64, f64)>)> = Vec::new();
    for row in &t.rows {
        match out.iter_mut().find(|(v, _)| *v == row[k]) {
            Some((_, c)) => c.push((row[xi], row[yi])),
            None => out.push((row[k], vec![(row[xi], row[yi])])),
        }
    }
    out
}

fn verdict(claim: &str, pass: bool, detail: String) -> Verdict {
    Verdict { claim: claim.into(), pass, detail }
}

fn nondecreasing(c: &[(f64, f64)]) -> bool {
    c.windows(2).all(|w| w[1].1 >= w[0].1)
}

fn check_fig1a(t: &Table) -> Verdict {
    let cs = curves(t, "m", "alpha0_re", "fidelity");
    let curve = |m: f64| &cs.iter().find(|(k, _)| *k == m).unwrap().1;
    let unit = curve(0.0).iter().all(|&(_, f)| f == 1.0);
    let odd = [1.0, 3.0].iter().all(|&m| curve(m).iter().all(|&(_, f)| f.abs() <= 1e-14));
    let rising = nondecreasing(curve(2.0)) && nondecreasing(curve(4.0));
    let ordered = curve(2.0).iter().zip(curve(4.0)).all(|(a, b)| a.1 >= b.1);
    verdict(
        "F=1 at m=0, F=0 for odd m, F rising in α₀ and larger for smaller even m",
        unit && odd && rising && ordered,
        format!("m=0 unit {unit}, odd zero {odd}, rising {rising}, ordered {ordered}"),
    )
}

fn check_fig1b(t: &Table) -> Verdict {
    let cs = curves(t, "theta", "alpha0_re", "fidelity");
    let n = cs[0].1.len();
    let ok = (0..n).all(|i| cs.windows(2).all(|w| w[1].1[i].1 <= w[0].1[i].1));
    verdict("fidelity decreases as θ increases", ok, format!("{} θ curves", cs.len()))
}

fn check_fig2a(t: &Table) -> Verdict {
    let max = t.values("q").into_iter().fold(f64::NEG_INFINITY, f64::max);
    verdict("Q < 0 everywhere", max < 0.0, format!("max Q {}", max))
}

fn check_fig2b(t: &Table) -> Verdict {
    let q = t.values("q");
    let max = q.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = q.iter().copied().fold(f64::INFINITY, f64::min);
    verdict(
        "Q > 0 somewhere, range within [-1, 0.5]",
        max > 0.0 && max <= 0.5 && min >= -1.0,
        format!("Q in [{min:.4}, {max:.4}]"),
    )
}

fn check_fig2c(t: &Table) -> Verdict {
    let cs = curves(t, "theta", "alpha0_re", "q");
    let max = t.values("q").into_iter().fold(f64::NEG_INFINITY, f64::max);
    let sub = cs
        .iter()
        .filter(|(theta, _)| *theta >= PI / 4.0 - 1e-12)
        .all(|(_, c)| c.iter().all(|&(_, q)| q < 0.0));
    verdict(
        "sub-Poissonian for θ ≥ π/4, range within [-1, 0.7]",
        sub && max <= 0.7,
        format!("max Q {max:.4}"),
    )
}

fn check_fig3a(t: &Table) -> Verdict {
    let cs = curves(t, "m", "theta", "s");
    let mins: Vec<f64> = cs.iter().map(|(_, c)| c.iter().map(|p| p.1).fold(f64::INFINITY, f64::min)).collect();
    verdict(
        "squeezing (S < 0) for every odd m",
        mins.iter().all(|&s| s < -1e-10),
        format!("minima {mins:.3?}"),
    )
}

fn check_fig3b(t: &Table) -> Verdict {
    let min = t.values("s").into_iter().fold(f64::INFINITY, f64::min);
    verdict("no squeezing for even m", min >= -1e-10, format!("min S {min:.4}"))
}

fn check_fig3d(t: &Table) -> Verdict {
    let cs = curves(t, "phi", "theta", "s");
    let mut spread: f64 = 0.0;
    let mut same_region = true;
    for i in 0..cs[0].1.len() {
        let ys: Vec<f64> = cs.iter().map(|(_, c)| c[i].1).collect();
        let hi = ys.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = ys.iter().copied().fold(f64::INFINITY, f64::min);
        spread = spread.max(hi - lo);
        same_region &= (hi < 0.0) == (lo < 0.0);
    }
    verdict(
        "φ leaves the squeezed region unchanged",
        same_region,
        format!("max spread of S across φ {spread:.2e}"),
    )
}

fn peak(t: &Table) -> usize {
    let p = t.values("p");
    let n = t.values("n");
    let i = p.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).map(|(i, _)| i).unwrap();
    n[i] as usize
}

fn check_fig4a(t: &Table) -> Verdict {
    let n = peak(t);
    verdict("peak at n=1", n == 1, format!("peak at n={n}"))
}

fn check_fig4b(t: &Table) -> Verdict {
    let n = peak(t);
    verdict("peak at n=4", n == 4, format!("peak at n={n}"))
}

fn argmin(t: &Table) -> (f64, f64, f64) {
    let (re, im, w) = (t.values("re"), t.values("im"), t.values("w"));
    let i = w.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).map(|(i, _)| i).unwrap();
    (re[i], im[i], w[i])
}

fn check_center_min(t: &Table) -> Verdict {
    let (re, im, w) = argmin(t);
    verdict(
        "minimum at the center",
        re.hypot(im) < 1e-9,
        format!("min {w:.4} at ({re}, {im})"),
    )
}

fn check_off_center_min(t: &Table) -> Verdict {
    let (re, im, w) = argmin(t);
    verdict(
        "minimum away from the center",
        re.hypot(im) > 1e-9,
        format!("min {w:.4} at ({re}, {im})"),
    )
}

fn check_fig8a(t: &Table) -> Verdict {
    let cs = curves(t, "m", "theta", "delta");
    let window = |c: &[(f64, f64)]| -> Vec<(f64, f64)> {
        c.iter().copied().filter(|&(th, _)| (PI / 8.0 - 1e-12..=PI / 3.0 + 1e-12).contains(&th)).collect()
    };
    let rising: Vec<bool> = cs.iter().filter(|(m, _)| *m >= 1.0).map(|(_, c)| nondecreasing(&window(c))).collect();
    verdict(
        "δ increases with θ on [π/8, π/3] for m ≥ 1",
        rising.iter().all(|&r| r),
        format!("per m: {rising:?}"),
    )
}

fn check_fig9d(t: &Table) -> Verdict {
    let (re, im, w) = (t.values("re"), t.values("im"), t.values("w"));
    let dist = (0..w.len())
        .map(|i| (w[i] - thermal_wigner(0.2, C64::new(re[i], im[i]))).abs())
        .fold(0.0, f64::max);
    let min = w.iter().copied().fold(f64::INFINITY, f64::min);
    verdict(
        "reduced to the thermal state (sup distance < 5e-3, no negativity)",
        dist < 5e-3 && min >= -1e-4,
        format!("sup distance {dist:.4e}, min {min:.2e}"),
    )
}

pub fn preset(name: &str) -> Option<Preset> {
    let a = |x: f64, y: f64| C64::new(x, y);
    let alpha_axis = || real_range(0.1, 3.0, 60);
    let fid_alpha = || real_range(0.1, 4.0, 79);
    let thetas = || range(0.01, PI / 2.0 - 0.01, 100);
    let (config, check): (SweepConfig, Option<Check>) = match name {
        "fig1a" => (
            config(Quantity::Fidelity, values(vec![0, 1, 2, 3, 4]), Axis::Scalar(PI / 3.0), Axis::Scalar(0.0), fid_alpha()),
            Some(check_fig1a),
        ),
        "fig1b" => (
            config(
                Quantity::Fidelity,
                Axis::Scalar(2),
                values(vec![PI / 8.0, PI / 6.0, PI / 4.0, PI / 3.0]),
                Axis::Scalar(0.0),
                fid_alpha(),
            ),
            Some(check_fig1b),
        ),
        "fig1c" => (
            config(
                Quantity::Fidelity,
                Axis::Scalar(2),
                Axis::Scalar(PI / 3.0),
                values(vec![0.0, PI / 4.0, PI / 2.0, PI]),
                fid_alpha(),
            ),
            None,
        ),
        "fig2a" => (
            config(Quantity::MandelQ, values(vec![1, 2, 3, 4]), Axis::Scalar(PI / 4.0), Axis::Scalar(0.0), alpha_axis()),
            Some(check_fig2a),
        ),
        "fig2b" => (
            config(Quantity::MandelQ, values(vec![1, 2, 3, 4]), Axis::Scalar(PI / 8.0), Axis::Scalar(0.0), alpha_axis()),
            Some(check_fig2b),
        ),
        "fig2c" => (
            config(
                Quantity::MandelQ,
                Axis::Scalar(1),
                values(vec![PI / 8.0, PI / 4.0, PI / 3.0, PI / 2.1]),
                Axis::Scalar(0.0),
                alpha_axis(),
            ),
            Some(check_fig2c),
        ),
        "fig2d" => (
            config(
                Quantity::MandelQ,
                Axis::Scalar(1),
                Axis::Scalar(PI / 4.0),
                values(vec![PI / 3.0, PI / 4.0, PI / 6.0, 0.0]),
                alpha_axis(),
            ),
            None,
        ),
        "fig3a" => (
            config(Quantity::Squeezing, values(vec![1, 3, 5, 7]), thetas(), Axis::Scalar(0.0), Axis::Scalar(a(0.1, 0.0))),
            Some(check_fig3a),
        ),
        "fig3b" => (
            config(Quantity::Squeezing, values(vec![0, 2, 4, 10]), thetas(), Axis::Scalar(0.0), Axis::Scalar(a(0.1, 0.0))),
            Some(check_fig3b),
        ),
        "fig3c" => (
            config(
                Quantity::Squeezing,
                Axis::Scalar(1),
                thetas(),
                Axis::Scalar(0.0),
                values(vec![a(0.1, 0.0), a(0.5, 0.0), a(1.0, 0.0), a(1.5, 0.0)]),
            ),
            None,
        ),
        "fig3d" => (
            config(
                Quantity::Squeezing,
                Axis::Scalar(1),
                thetas(),
                values(vec![0.0, PI / 4.0, PI / 2.0, PI]),
                Axis::Scalar(a(0.1, 0.0)),
            ),
            Some(check_fig3d),
        ),
        "fig4a" => (photocount(4, PI / 4.0, 0.0, 0.2), Some(check_fig4a)),
        "fig4b" => (photocount(4, PI / 4.0, 0.0, 0.9), Some(check_fig4b)),
        "fig4c" => (photocount(1, PI / 4.0, 0.0, 0.2), None),
        "fig5a" => (photocount(4, PI / 8.0, 0.0, 0.9), None),
        "fig5b" => (photocount(4, PI / 8.0, PI / 2.0, 0.9), None),
        "fig6a" => (wigner(0, PI / 3.0, a(1.0, 1.0), 4.0, 101), Some(check_center_min)),
        "fig6b" => (wigner(1, PI / 3.0, a(1.0, 1.0), 4.0, 101), Some(check_off_center_min)),
        "fig6c" => (wigner(2, PI / 3.0, a(1.0, 1.0), 4.0, 101), Some(check_center_min)),
        "fig6d" => (wigner(3, PI / 3.0, a(1.0, 1.0), 4.0, 101), Some(check_off_center_min)),
        "fig7a" => (wigner(2, PI / 8.0, a(1.0, 1.0), 4.0, 101), None),
        "fig7b" => (wigner(2, PI / 3.0, a(2.0, 2.0), 6.0, 121), None),
        "fig8a" => (
            config(
                Quantity::Negativity,
                values(vec![0, 1, 2, 3]),
                range(PI / 16.0, 7.0 * PI / 16.0, 25),
                Axis::Scalar(0.0),
                Axis::Scalar(a(0.1, 0.0)),
            ),
            Some(check_fig8a),
        ),
        "fig8b" => (
            config(
                Quantity::Negativity,
                Axis::Scalar(1),
                range(PI / 16.0, 7.0 * PI / 16.0, 25),
                Axis::Scalar(0.0),
                values(vec![a(0.1, 0.0), a(0.5, 0.0), a(1.0, 0.0), a(1.5, 0.0)]),
            ),
            None,
        ),
        "fig9a" => (evolved(0.001, 0.2), None),
        "fig9b" => (evolved(0.05, 0.2), None),
        "fig9c" => (evolved(0.1, 0.2), None),
        "fig9d" => (evolved(3.0, 0.2), Some(check_fig9d)),
        "fig10a" => (evolved(0.05, 0.0), None),
        "fig10b" => (evolved(0.05, 0.5), None),
        "fig10c" => (evolved(0.05, 2.0), None),
        "fig10d" => (evolved(0.05, 8.0), None),
        _ => return None,
    };
    let name = NAMES.iter().find(|n| **n == name)?;
    Some(Preset { name, config: SweepConfig { output: PathBuf::from(format!("{name}.csv")), ..config }, check })
}
