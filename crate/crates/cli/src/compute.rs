//! Evaluates a [`SweepConfig`] into a table.

use std::io::Write;
use std::path::Path;

use mcso_core::fockoracle::{
    build_state, build_state_auto, cutoff_select, evolve_master, min_steps, oracle_fidelity,
    oracle_moment, oracle_photocount, oracle_wigner, oracle_wigner_density_points, FockDensity,
};
use mcso_core::phasespace::{
    negative_volume_report, wigner_evolved_grid, wigner_grid, GridSpec,
};
use mcso_core::state::{fidelity, mandel_q, normalization, photocount_distribution, squeezing};
use mcso_core::{SuperpositionParams, C64};
use rayon::prelude::*;

use crate::config::{Point, Quantity, SweepConfig};
use crate::Failure;

/// Relative tolerance of the per-row oracle comparison.
pub const ORACLE_REL_TOL: f64 = 1e-6;
/// Differences below this pass regardless of the oracle's magnitude.
pub const ORACLE_ABS_FLOOR: f64 = 1e-10;
const CUTOFF_TOL: f64 = 1e-18;

/// Column-labelled numeric rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

/// Shortest decimal that parses back to `x`; plain notation for moderate
/// magnitudes, exponent notation otherwise.
pub fn format_number(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:?}")
    }
}

impl Table {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn values(&self, name: &str) -> Vec<f64> {
        let i = self.column(name).unwrap_or_else(|| panic!("no column {name}"));
        self.rows.iter().map(|r| r[i]).collect()
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{}", self.header.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&x| format_number(x)).collect();
            writeln!(out, "{}", cells.join(","))?;
        }
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<(), Failure> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(|e| Failure::Io(format!("{}: {e}", dir.display())))?;
        }
        let file = std::fs::File::create(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
        let mut w = std::io::BufWriter::new(file);
        self.write_csv(&mut w)
            .and_then(|_| w.flush())
            .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
    }
}

/// Result of [`run`]: the table plus the number of rows whose oracle
/// comparison failed.
#[derive(Debug, Clone, PartialEq)]
pub struct Computed {
    pub table: Table,
    pub mismatches: usize,
}

fn numerical(p: &SuperpositionParams, e: mcso_core::Error) -> Failure {
    Failure::Numerical(format!(
        "at m={}, theta={}, phi={}, alpha0={}: {e}",
        p.m, p.theta, p.phi, p.alpha0
    ))
}

fn result_columns(q: Quantity) -> &'static [&'static str] {
    match q {
        Quantity::Normalization => &["normalization"],
        Quantity::Fidelity => &["fidelity"],
        Quantity::MandelQ => &["q"],
        Quantity::Squeezing => &["s"],
        Quantity::Photocount => &["n", "p"],
        Quantity::Wigner | Quantity::EvolvedWigner => &["re", "im", "w"],
        Quantity::Negativity => &["delta"],
    }
}

/// Oracle cutoff whose displacement reach covers every grid point.
fn cutoff_covering(p: &SuperpositionParams, grid: &GridSpec) -> mcso_core::Result<usize> {
    let corner = [grid.re_min.abs(), grid.re_max.abs()]
        .iter()
        .fold(0.0f64, |a, &b| a.max(b))
        .hypot([grid.im_min.abs(), grid.im_max.abs()].iter().fold(0.0f64, |a, &b| a.max(b)));
    let reach = (4.0 * corner * corner).ceil() as usize;
    Ok(cutoff_select(p, CUTOFF_TOL)?.max(reach))
}

/// Closed-form rows at one point, each paired with its oracle value when
/// requested.
fn evaluate(cfg: &SweepConfig, p: &SuperpositionParams) -> mcso_core::Result<Vec<(Vec<f64>, Option<f64>)>> {
    let check = cfg.oracle_check;
    let scalar = |v: f64, oracle: Option<f64>| vec![(vec![v], oracle)];
    let rows = match cfg.quantity {
        Quantity::Normalization => {
            let oracle = if check { Some(build_state_auto(p, CUTOFF_TOL)?.norm_sqr()) } else { None };
            scalar(normalization(p)?, oracle)
        }
        Quantity::Fidelity => {
            let oracle = if check { Some(oracle_fidelity(p, CUTOFF_TOL)?) } else { None };
            scalar(fidelity(p)?, oracle)
        }
        Quantity::MandelQ => {
            let oracle = if check {
                let v = build_state_auto(p, CUTOFF_TOL)?;
                let n = oracle_moment(&v, 1, 1)?.re;
                Some(oracle_moment(&v, 2, 2)?.re / n - n)
            } else {
                None
            };
            scalar(mandel_q(p)?, oracle)
        }
        Quantity::Squeezing => {
            let oracle = if check {
                let v = build_state_auto(p, CUTOFF_TOL)?;
                Some(2.0 * oracle_moment(&v, 1, 1)?.re - 2.0 * oracle_moment(&v, 2, 0)?.norm())
            } else {
                None
            };
            scalar(squeezing(p)?, oracle)
        }
        Quantity::Photocount => {
            let (xi, n_max) = (cfg.xi.unwrap_or(1.0), cfg.n_max.unwrap_or(0));
            let dist = photocount_distribution(p, xi, n_max)?;
            let v = if check {
                Some(build_state(p, cutoff_select(p, CUTOFF_TOL)?.max(n_max))?)
            } else {
                None
            };
            let mut rows = Vec::with_capacity(dist.len());
            for (n, pn) in dist.into_iter().enumerate() {
                let oracle = v.as_ref().map(|v| oracle_photocount(v, xi, n)).transpose()?;
                rows.push((vec![n as f64, pn], oracle));
            }
            rows
        }
        Quantity::Wigner => {
            let spec = cfg.grid.expect("validated");
            let grid = wigner_grid(p, &spec)?;
            let oracle = if check {
                let v = build_state(p, cutoff_covering(p, &spec)?)?;
                Some(spec.points().iter().map(|&a| oracle_wigner(&v, a)).collect::<mcso_core::Result<Vec<_>>>()?)
            } else {
                None
            };
            grid_rows(&spec, &grid.values, oracle)
        }
        Quantity::EvolvedWigner => {
            let spec = cfg.grid.expect("validated");
            let ch = cfg.channel.expect("validated");
            let grid = wigner_evolved_grid(p, &ch, &spec)?;
            let oracle = if check {
                let cutoff = cutoff_covering(p, &spec)?;
                let rho = FockDensity::from_pure(&build_state(p, cutoff)?.normalized());
                let rho = evolve_master(&rho, &ch, min_steps(&ch, cutoff))?;
                Some(oracle_wigner_density_points(&rho, &spec.points())?)
            } else {
                None
            };
            grid_rows(&spec, &grid.values, oracle)
        }
        Quantity::Negativity => {
            let quad = cfg.quadrature.unwrap_or_default();
            let r = negative_volume_report(p, &quad)?;
            if r.clamped {
                eprintln!(
                    "warning: negative volume at m={}, theta={}, alpha0={} was slightly below zero and clamped",
                    p.m, p.theta, p.alpha0
                );
            }
            scalar(r.delta, None)
        }
    };
    Ok(rows)
}

fn grid_rows(spec: &GridSpec, values: &[f64], oracle: Option<Vec<f64>>) -> Vec<(Vec<f64>, Option<f64>)> {
    spec.points()
        .iter()
        .zip(values)
        .enumerate()
        .map(|(i, (a, &w)): (usize, (&C64, &f64))| (vec![a.re, a.im, w], oracle.as_ref().map(|o| o[i])))
        .collect()
}

fn passes(closed: f64, oracle: f64) -> bool {
    let d = (closed - oracle).abs();
    d <= ORACLE_ABS_FLOOR || d <= ORACLE_REL_TOL * oracle.abs()
}

/// Evaluates every sweep point (in parallel, assembled in sweep order).
pub fn run(cfg: &SweepConfig) -> Result<Computed, Failure> {
    let points: Vec<Point> = cfg.points()?;
    let mut header: Vec<String> = cfg.swept_columns().iter().map(|s| s.to_string()).collect();
    header.extend(result_columns(cfg.quantity).iter().map(|s| s.to_string()));
    if cfg.oracle_check {
        header.push("oracle_abs_diff".into());
    }
    let per_point = points
        .par_iter()
        .map(|pt| evaluate(cfg, &pt.params).map_err(|e| numerical(&pt.params, e)))
        .collect::<Result<Vec<_>, Failure>>()?;
    let mut rows = Vec::new();
    let mut mismatches = 0;
    for (pt, results) in points.iter().zip(per_point) {
        for (values, oracle) in results {
            let mut row = pt.swept.clone();
            let closed = *values.last().expect("non-empty result");
            row.extend(values);
            if let Some(o) = oracle {
                if !passes(closed, o) {
                    mismatches += 1;
                }
                row.push((closed - o).abs());
            }
            rows.push(row);
        }
    }
    Ok(Computed { table: Table { header, rows }, mismatches })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for x in [0.0, 1.0, -2.5, 0.1, 1.0 / 3.0, 1e-20, -6.02e23, 123456.789, 1e-5, 9.99e-6] {
            let s = format_number(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(format_number(3.0), "3");
        assert_eq!(format_number(1e-20), "1e-20");
    }

    #[test]
    fn csv_layout() {
        let t = Table { header: vec!["m".into(), "q".into()], rows: vec![vec![1.0, -0.25], vec![2.0, 0.5]] };
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "m,q\n1,-0.25\n2,0.5\n");
        assert_eq!(t.values("q"), vec![-0.25, 0.5]);
    }

    #[test]
    fn oracle_tolerance() {
        assert!(passes(1.0, 1.0 + 5e-7));
        assert!(!passes(1.0, 1.0 + 5e-6));
        assert!(passes(3e-11, 0.0));
        assert!(!passes(1e-9, 0.0));
    }
}
