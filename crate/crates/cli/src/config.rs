//! Sweep configuration: parsing, validation and expansion into parameter
//! tuples.

use std::path::PathBuf;

use mcso_core::phasespace::{GridSpec, QuadratureSettings, ThermalChannel};
use mcso_core::state::N_MAX;
use mcso_core::{Parity, SuperpositionParams, C64};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    Normalization,
    Fidelity,
    MandelQ,
    Squeezing,
    Photocount,
    Wigner,
    Negativity,
    EvolvedWigner,
}

impl Quantity {
    pub fn name(self) -> &'static str {
        match self {
            Quantity::Normalization => "normalization",
            Quantity::Fidelity => "fidelity",
            Quantity::MandelQ => "mandel_q",
            Quantity::Squeezing => "squeezing",
            Quantity::Photocount => "photocount",
            Quantity::Wigner => "wigner",
            Quantity::Negativity => "negativity",
            Quantity::EvolvedWigner => "evolved_wigner",
        }
    }
}

/// A parameter given as one value, an evenly spaced range, or an explicit
/// list.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Axis<T> {
    Scalar(T),
    Range { start: T, stop: T, count: usize },
    Values { values: Vec<T> },
}

impl<T: DeserializeOwned> TryFrom<Value> for Axis<T> {
    type Error = String;

    fn try_from(v: Value) -> Result<Self, String> {
        let parse = |v: Value| T::deserialize(v).map_err(|e| e.to_string());
        if let Value::Object(map) = &v {
            let mut keys: Vec<&str> = map.keys().map(String::as_str).collect();
            keys.sort_unstable();
            match keys.as_slice() {
                ["count", "start", "stop"] => {
                    let count = map["count"]
                        .as_u64()
                        .ok_or("`count` must be a non-negative integer")?;
                    return Ok(Axis::Range {
                        start: parse(map["start"].clone()).map_err(|e| format!("`start`: {e}"))?,
                        stop: parse(map["stop"].clone()).map_err(|e| format!("`stop`: {e}"))?,
                        count: count as usize,
                    });
                }
                ["values"] => {
                    let Value::Array(items) = &map["values"] else {
                        return Err("`values` must be an array".into());
                    };
                    let values = items
                        .iter()
                        .enumerate()
                        .map(|(i, x)| parse(x.clone()).map_err(|e| format!("`values[{i}]`: {e}")))
                        .collect::<Result<Vec<T>, String>>()?;
                    return Ok(Axis::Values { values });
                }
                _ => {
                    return Err(format!(
                        "expected {{start, stop, count}} or {{values}}, found keys {keys:?}"
                    ))
                }
            }
        }
        parse(v).map(Axis::Scalar)
    }
}

impl<'de, T: DeserializeOwned> Deserialize<'de> for Axis<T> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        Axis::try_from(v).map_err(serde::de::Error::custom)
    }
}

impl<T> Axis<T> {
    pub fn is_swept(&self) -> bool {
        !matches!(self, Axis::Scalar(_))
    }
}

fn spaced<T>(field: &str, start: T, stop: T, count: usize, lerp: impl Fn(f64) -> T) -> Result<Vec<T>, String>
where
    T: Copy + PartialEq,
{
    match count {
        0 => Err(format!("`{field}.count` must be at least 1")),
        1 if start != stop => Err(format!("`{field}` has count 1 but start ≠ stop")),
        1 => Ok(vec![start]),
        _ => Ok((0..count).map(|i| lerp(i as f64 / (count - 1) as f64)).collect()),
    }
}

impl Axis<f64> {
    pub fn expand(&self, field: &str) -> Result<Vec<f64>, String> {
        let v = match self {
            Axis::Scalar(x) => vec![*x],
            Axis::Values { values } => values.clone(),
            Axis::Range { start, stop, count } => {
                spaced(field, *start, *stop, *count, |t| start + (stop - start) * t)?
            }
        };
        if v.is_empty() {
            return Err(format!("`{field}` has no values"));
        }
        Ok(v)
    }
}

impl Axis<C64> {
    pub fn expand(&self, field: &str) -> Result<Vec<C64>, String> {
        let v = match self {
            Axis::Scalar(x) => vec![*x],
            Axis::Values { values } => values.clone(),
            Axis::Range { start, stop, count } => {
                spaced(field, *start, *stop, *count, |t| start + (stop - start) * t)?
            }
        };
        if v.is_empty() {
            return Err(format!("`{field}` has no values"));
        }
        Ok(v)
    }
}

impl Axis<usize> {
    pub fn expand(&self, field: &str) -> Result<Vec<usize>, String> {
        let v = match self {
            Axis::Scalar(x) => vec![*x],
            Axis::Values { values } => values.clone(),
            Axis::Range { start, stop, count } => {
                if *count > 1 {
                    let span = *stop as i64 - *start as i64;
                    if span % (*count as i64 - 1) != 0 {
                        return Err(format!("`{field}` range does not land on integers"));
                    }
                }
                spaced(field, *start, *stop, *count, |t| {
                    (*start as f64 + (*stop as f64 - *start as f64) * t).round() as usize
                })?
            }
        };
        if v.is_empty() {
            return Err(format!("`{field}` has no values"));
        }
        Ok(v)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamAxes {
    pub m: Axis<usize>,
    pub theta: Axis<f64>,
    pub phi: Axis<f64>,
    pub alpha0: Axis<C64>,
    #[serde(default)]
    pub parity: Parity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub quantity: Quantity,
    pub params: ParamAxes,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub channel: Option<ThermalChannel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadrature: Option<QuadratureSettings>,
    pub output: PathBuf,
    #[serde(default)]
    pub oracle_check: bool,
}

/// One parameter tuple with the values of the swept axes, in column order.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    pub params: SuperpositionParams,
    pub swept: Vec<f64>,
}

impl SweepConfig {
    pub fn parse(text: &str) -> Result<Self, Failure> {
        let cfg: SweepConfig =
            serde_json::from_str(text).map_err(|e| Failure::Config(format!("invalid config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), Failure> {
        let q = self.quantity;
        let needs = |field: &str| -> bool {
            match field {
                "xi" | "n_max" => q == Quantity::Photocount,
                "grid" => matches!(q, Quantity::Wigner | Quantity::EvolvedWigner),
                "channel" => q == Quantity::EvolvedWigner,
                _ => false,
            }
        };
        let present = [
            ("xi", self.xi.is_some()),
            ("n_max", self.n_max.is_some()),
            ("grid", self.grid.is_some()),
            ("channel", self.channel.is_some()),
        ];
        for (field, there) in present {
            if needs(field) && !there {
                return Err(Failure::Config(format!("`{field}` is required for quantity `{}`", q.name())));
            }
            if !needs(field) && there {
                return Err(Failure::Config(format!("`{field}` is not used by quantity `{}`", q.name())));
            }
        }
        if self.quadrature.is_some() && q != Quantity::Negativity {
            return Err(Failure::Config(format!("`quadrature` is not used by quantity `{}`", q.name())));
        }
        if let Some(xi) = self.xi {
            if !(xi > 0.0 && xi <= 1.0) {
                return Err(Failure::Config(format!("`xi` must lie in (0, 1], got {xi}")));
            }
        }
        if let Some(n) = self.n_max {
            if n > N_MAX {
                return Err(Failure::Config(format!("`n_max` must be at most {N_MAX}, got {n}")));
            }
        }
        if let Some(grid) = &self.grid {
            grid.validate().map_err(|e| Failure::Config(format!("`grid`: {e}")))?;
        }
        if let Some(ch) = &self.channel {
            ch.validate().map_err(|e| Failure::Config(format!("`channel`: {e}")))?;
        }
        if self.params.parity == Parity::Even && q == Quantity::Fidelity {
            return Err(Failure::Config("fidelity is defined only for parity `odd`".into()));
        }
        if self.oracle_check && q == Quantity::Negativity {
            return Err(Failure::Config("`oracle_check` is not available for quantity `negativity`".into()));
        }
        for p in self.points()? {
            p.params.validate().map_err(|e| {
                Failure::Config(format!(
                    "`params` at m={}, theta={}, phi={}, alpha0={}: {e}",
                    p.params.m, p.params.theta, p.params.phi, p.params.alpha0
                ))
            })?;
        }
        Ok(())
    }

    /// Names of the swept parameter columns.
    pub fn swept_columns(&self) -> Vec<&'static str> {
        let a = &self.params;
        let mut cols = Vec::new();
        if a.m.is_swept() {
            cols.push("m");
        }
        if a.theta.is_swept() {
            cols.push("theta");
        }
        if a.phi.is_swept() {
            cols.push("phi");
        }
        if a.alpha0.is_swept() {
            cols.extend(["alpha0_re", "alpha0_im"]);
        }
        cols
    }

    /// Cartesian product of the axes, `m` outermost and `alpha0` innermost.
    pub fn points(&self) -> Result<Vec<Point>, Failure> {
        let a = &self.params;
        let ms = a.m.expand("params.m").map_err(Failure::Config)?;
        let thetas = a.theta.expand("params.theta").map_err(Failure::Config)?;
        let phis = a.phi.expand("params.phi").map_err(Failure::Config)?;
        let alphas = a.alpha0.expand("params.alpha0").map_err(Failure::Config)?;
        let mut out = Vec::with_capacity(ms.len() * thetas.len() * phis.len() * alphas.len());
        for &m in &ms {
            for &theta in &thetas {
                for &phi in &phis {
                    for &alpha0 in &alphas {
                        let mut swept = Vec::new();
                        if a.m.is_swept() {
                            swept.push(m as f64);
                        }
                        if a.theta.is_swept() {
                            swept.push(theta);
                        }
                        if a.phi.is_swept() {
                            swept.push(phi);
                        }
                        if a.alpha0.is_swept() {
                            swept.extend([alpha0.re, alpha0.im]);
                        }
                        out.push(Point {
                            params: SuperpositionParams { m, theta, phi, alpha0, parity: a.parity },
                            swept,
                        });
                    }
                }
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> Value {
        serde_json::json!({
            "quantity": "mandel_q",
            "params": {"m": 1, "theta": 0.7, "phi": 0.0, "alpha0": [1.0, 0.0]},
            "output": "out.csv"
        })
    }

    fn parse(v: Value) -> Result<SweepConfig, Failure> {
        SweepConfig::parse(&v.to_string())
    }

    #[test]
    fn axes_expand() {
        let r: Axis<f64> = serde_json::from_str(r#"{"start": 0, "stop": 1, "count": 5}"#).unwrap();
        assert_eq!(r.expand("x").unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let v: Axis<usize> = serde_json::from_str(r#"{"values": [1, 3, 5]}"#).unwrap();
        assert_eq!(v.expand("m").unwrap(), vec![1, 3, 5]);
        let m: Axis<usize> = serde_json::from_str(r#"{"start": 0, "stop": 4, "count": 5}"#).unwrap();
        assert_eq!(m.expand("m").unwrap(), vec![0, 1, 2, 3, 4]);
        let bad: Axis<usize> = serde_json::from_str(r#"{"start": 0, "stop": 4, "count": 4}"#).unwrap();
        assert!(bad.expand("m").is_err());
        let c: Axis<C64> = serde_json::from_str(r#"{"start": [0, 0], "stop": [1, 2], "count": 3}"#).unwrap();
        assert_eq!(c.expand("a").unwrap()[1], C64::new(0.5, 1.0));
        assert!(serde_json::from_str::<Axis<f64>>(r#"{"begin": 0}"#).is_err());
        let z: Axis<f64> = serde_json::from_str(r#"{"start": 0, "stop": 1, "count": 0}"#).unwrap();
        assert!(z.expand("x").is_err());
    }

    #[test]
    fn sweep_order_is_lexicographic() {
        let mut v = base();
        v["params"]["m"] = serde_json::json!({"values": [2, 1]});
        v["params"]["alpha0"] = serde_json::json!({"start": [0.5, 0], "stop": [1.5, 0], "count": 3});
        let cfg = parse(v).unwrap();
        assert_eq!(cfg.swept_columns(), vec!["m", "alpha0_re", "alpha0_im"]);
        let pts = cfg.points().unwrap();
        assert_eq!(pts.len(), 6);
        assert_eq!(pts[0].swept, vec![2.0, 0.5, 0.0]);
        assert_eq!(pts[3].swept, vec![1.0, 0.5, 0.0]);
        assert_eq!(pts[5].swept, vec![1.0, 1.5, 0.0]);
    }

    #[test]
    fn field_requirements() {
        let mut v = base();
        v["xi"] = serde_json::json!(0.5);
        assert!(matches!(parse(v), Err(Failure::Config(e)) if e.contains("`xi`")));
        let mut v = base();
        v["quantity"] = serde_json::json!("photocount");
        v["xi"] = serde_json::json!(0.5);
        assert!(matches!(parse(v), Err(Failure::Config(e)) if e.contains("`n_max`")));
        let mut v = base();
        v["quantity"] = serde_json::json!("wigner");
        assert!(matches!(parse(v), Err(Failure::Config(e)) if e.contains("`grid`")));
        let mut v = base();
        v["extra"] = serde_json::json!(1);
        assert!(matches!(parse(v), Err(Failure::Config(e)) if e.contains("unknown field")));
    }

    #[test]
    fn invalid_parameters_are_config_errors() {
        let mut v = base();
        v["params"]["theta"] = serde_json::json!(2.0);
        assert!(matches!(parse(v), Err(Failure::Config(e)) if e.contains("theta=2")));
        let mut v = base();
        v["params"]["alpha0"] = serde_json::json!([0.0, 0.0]);
        assert!(parse(v).is_err());
        let mut v = base();
        v["quantity"] = serde_json::json!("fidelity");
        v["params"]["parity"] = serde_json::json!("even");
        assert!(parse(v).is_err());
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = SweepConfig::parse("{\n  \"quantity\": \"fidelity\",\n  oops\n}").unwrap_err();
        assert!(matches!(err, Failure::Config(e) if e.contains("line 3")));
    }
}
