//! Closed form versus Fock oracle on a fixed parameter grid.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::Result;
use crate::fockoracle::{
    build_state_auto, oracle_antinormal, oracle_fidelity, oracle_moment, oracle_photocount,
};
use crate::state::{
    fidelity, mean_ad2, mean_photon, moment_a2ad2, normalization, photocount, Parity,
    SuperpositionParams,
};
use crate::C64;

/// Relative tolerance of the cross-check.
pub const REL_TOL: f64 = 1e-8;
/// Absolute floor below which differences always pass.
pub const ABS_FLOOR: f64 = 1e-10;
/// Tail weight tolerated by the oracle's cutoff choice.
pub const CUTOFF_TOL: f64 = 1e-18;
pub const PHOTOCOUNT_N_MAX: usize = 20;
pub const PHOTOCOUNT_XI: [f64; 2] = [0.2, 0.9];

/// One compared value.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub params: SuperpositionParams,
    pub quantity: String,
    pub closed: C64,
    pub oracle: C64,
}

impl Comparison {
    pub fn abs_error(&self) -> f64 {
        (self.closed - self.oracle).norm()
    }

    pub fn rel_error(&self) -> f64 {
        self.abs_error() / self.oracle.norm().max(f64::MIN_POSITIVE)
    }

    pub fn passes(&self) -> bool {
        let err = self.abs_error();
        err <= ABS_FLOOR || err <= REL_TOL * self.oracle.norm()
    }
}

/// The `m × θ × φ × α₀` grid for the given parity.
pub fn grid(parity: Parity) -> Vec<SuperpositionParams> {
    let thetas = [PI / 8.0, PI / 4.0, PI / 3.0];
    let phis = [0.0, PI / 4.0, PI / 2.0];
    let alphas = [
        C64::new(0.3, 0.0),
        C64::new(1.0, 0.0),
        C64::new(1.0, 1.0),
        C64::new(2.0, 0.0),
    ];
    let mut out = Vec::new();
    for m in 0..=4 {
        for &theta in &thetas {
            for &phi in &phis {
                for &alpha0 in &alphas {
                    out.push(SuperpositionParams { m, theta, phi, alpha0, parity });
                }
            }
        }
    }
    out
}

fn real(q: impl Into<String>, p: &SuperpositionParams, closed: f64, oracle: f64) -> Comparison {
    Comparison {
        params: *p,
        quantity: q.into(),
        closed: C64::new(closed, 0.0),
        oracle: C64::new(oracle, 0.0),
    }
}

/// Every closed-form quantity at `p` next to its oracle value. Fidelity is
/// included only for odd parity.
pub fn compare(p: &SuperpositionParams) -> Result<Vec<Comparison>> {
    let v = build_state_auto(p, CUTOFF_TOL)?;
    let mut out = vec![
        real("normalization", p, normalization(p)?, v.norm_sqr()),
        real("mean_photon", p, mean_photon(p)?, oracle_moment(&v, 1, 1)?.re),
        real("moment_a2ad2", p, moment_a2ad2(p)?, oracle_antinormal(&v, 2)),
        Comparison {
            params: *p,
            quantity: "mean_ad2".into(),
            closed: mean_ad2(p)?,
            oracle: oracle_moment(&v, 2, 0)?,
        },
    ];
    if p.parity == Parity::Odd {
        out.push(real("fidelity", p, fidelity(p)?, oracle_fidelity(p, CUTOFF_TOL)?));
    }
    for xi in PHOTOCOUNT_XI {
        for n in 0..=PHOTOCOUNT_N_MAX {
            out.push(real(
                format!("photocount(xi={xi},n={n})"),
                p,
                photocount(p, xi, n)?,
                oracle_photocount(&v, xi, n)?,
            ));
        }
    }
    Ok(out)
}

/// Runs [`compare`] over a whole grid; results keep the grid order.
pub fn run(points: &[SuperpositionParams]) -> Result<Vec<Comparison>> {
    let per_point = points
        .par_iter()
        .map(compare)
        .collect::<Result<Vec<_>>>()?;
    Ok(per_point.into_iter().flatten().collect())
}
