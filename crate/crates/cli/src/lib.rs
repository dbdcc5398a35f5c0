//! Library side of the `cellint` command: report types, verification suites and
//! the `xi` / `oracle` commands.

pub mod report;
pub mod suites;

use std::time::Instant;

use cellint::oracle::{
    xi_montecarlo, xi_montecarlo_conditional, xi_series, zlobin_i, zlobin_target, OracleReport, SeriesConfig,
    ZlobinMethod,
};
use cellint::xi::{xi_expand_mzv, xi_numeric, xi_symbolic};
use clap::ValueEnum;
use serde::Serialize;
use serde_json::json;

pub use report::{Check, RunReport};
pub use suites::{run_suites, Suite, VerifyOptions};

pub const DEFAULT_CUTOFF: usize = 20_000;
pub const DEFAULT_SAMPLES: u64 = 10_000_000;
pub const QUICK_CUTOFF: usize = 5_000;
pub const QUICK_SAMPLES: u64 = 1_000_000;
pub const MAX_SYMBOLIC_L: usize = 12;
pub const MAX_NUMERIC_L: usize = 6;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] cellint::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum XiFormat {
    Psi,
    Mzv,
    Numeric,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleMethod {
    Series,
    Mc,
    McConditional,
}

/// Reads a default budget from the environment, falling back to `default`.
pub fn env_budget(var: &str, default: u64) -> Result<u64, CliError> {
    match std::env::var(var) {
        Ok(s) => parse_count(&s).map_err(|e| CliError::Usage(format!("{var}: {e}"))),
        Err(_) => Ok(default),
    }
}

/// Accepts plain integers and integral scientific notation such as `1e7`.
pub fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(n) = s.parse::<u64>() {
        return Ok(n);
    }
    let x: f64 = s.parse().map_err(|_| format!("'{s}' is not a count"))?;
    if x.is_finite() && x >= 0.0 && x.fract() == 0.0 && x < 1.8e19 {
        Ok(x as u64)
    } else {
        Err(format!("'{s}' is not a nonnegative integer"))
    }
}

pub fn cmd_xi(l: usize, format: XiFormat, tol: f64, max_l: Option<usize>) -> Result<RunReport, CliError> {
    let start = Instant::now();
    let limit = max_l.unwrap_or(match format {
        XiFormat::Numeric => MAX_NUMERIC_L,
        _ => MAX_SYMBOLIC_L,
    });
    if l < 2 || l > limit {
        return Err(CliError::Usage(format!("l = {l} outside 2..={limit}")));
    }
    if !(tol > 0.0) {
        return Err(CliError::Usage(format!("tolerance {tol} must be positive")));
    }
    let inputs = json!({ "l": l, "format": format, "tol": tol });
    let mut checks = Vec::new();
    let outputs = match format {
        XiFormat::Psi => json!({ "value": xi_symbolic(l).to_string() }),
        XiFormat::Mzv => json!({ "value": xi_expand_mzv(l).to_string() }),
        XiFormat::Numeric => {
            let e = xi_numeric(l, tol)?;
            checks.push(Check::numeric(
                "xi.numeric-bound",
                "error bound within the requested tolerance",
                e.bound,
                tol,
                json!(e),
            ));
            json!({ "value": e.value, "bound": e.bound, "psi": xi_symbolic(l).to_string() })
        }
    };
    let mut r = RunReport::new("xi", inputs, outputs, checks, None);
    r.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(r)
}

#[derive(Clone, Debug)]
pub struct OracleArgs {
    pub l: usize,
    pub method: OracleMethod,
    pub zlobin: bool,
    pub cutoff: usize,
    pub levels: Option<usize>,
    pub samples: u64,
    pub seed: u64,
}

pub fn cmd_oracle(a: &OracleArgs) -> Result<RunReport, CliError> {
    let start = Instant::now();
    if a.l < 2 {
        return Err(CliError::Usage(format!("l = {} must be at least 2", a.l)));
    }
    let mut cfg = SeriesConfig { cutoff: a.cutoff, ..SeriesConfig::default() };
    if let Some(levels) = a.levels {
        cfg.levels = levels;
    }
    let is_series = a.method == OracleMethod::Series;
    if is_series {
        cfg.check().map_err(|e| CliError::Usage(e.to_string()))?;
    } else if a.samples < 10_000 {
        return Err(CliError::Usage(format!("{} samples is below the minimum of 10000", a.samples)));
    }
    let method_name = match a.method {
        OracleMethod::Series => "series",
        OracleMethod::Mc => "mc",
        OracleMethod::McConditional => "mc-conditional",
    };
    let inputs = json!({
        "l": a.l,
        "method": method_name,
        "zlobin": a.zlobin,
        "cutoff": if is_series { Some(cfg.cutoff) } else { None },
        "levels": if is_series { Some(cfg.levels) } else { None },
        "samples": if is_series { None } else { Some(a.samples) },
        "seed": if is_series { None } else { Some(a.seed) },
    });
    let mut checks = Vec::new();
    let report = if a.zlobin {
        let method = match a.method {
            OracleMethod::Series => ZlobinMethod::Series(cfg),
            OracleMethod::Mc => ZlobinMethod::MonteCarlo { samples: a.samples, seed: a.seed },
            OracleMethod::McConditional => ZlobinMethod::Conditional { samples: a.samples, seed: a.seed },
        };
        let r = zlobin_i(a.l, method)?;
        let target = zlobin_target(a.l, 1e-12)?;
        let res = (r.estimate.value - target.value).abs();
        let tol = 3.0 * r.estimate.bound.max(1e-12);
        let mut c = Check::numeric(
            "oracle.zlobin-target",
            "estimate against (l-1)! zeta(l)",
            res,
            tol,
            json!(target),
        );
        c.gating = false;
        checks.push(c);
        let mut rep = match (&r.series, &r.mc) {
            (Some(s), _) => OracleReport::from_series(a.l, method_name, &cfg, s),
            (_, Some(m)) => OracleReport::from_mc(a.l, method_name, m),
            _ => unreachable!("zlobin_i fills one of series or mc"),
        };
        rep.estimate = r.estimate.value;
        rep.error = r.estimate.bound;
        with_fields(&rep, json!({ "integral": "zlobin", "target": target.value }))
    } else {
        let rep = match a.method {
            OracleMethod::Series => {
                let s = xi_series(a.l, &cfg)?;
                let mut rep = OracleReport::from_series(a.l, method_name, &cfg, &s);
                rep.error = s.estimate.bound;
                let mut c = Check::exact(
                    "oracle.series-tolerance",
                    "tail bound within the configured tolerance",
                    s.within_tol,
                    json!({ "richardson": s.richardson, "tol": cfg.tol }),
                );
                c.gating = false;
                checks.push(c);
                rep
            }
            OracleMethod::Mc => {
                OracleReport::from_mc(a.l, method_name, &xi_montecarlo(a.l, a.samples, a.seed)?)
            }
            OracleMethod::McConditional => {
                OracleReport::from_mc(a.l, method_name, &xi_montecarlo_conditional(a.l, a.samples, a.seed)?)
            }
        };
        with_fields(&rep, json!({ "integral": "xi" }))
    };
    let seed = if is_series { None } else { Some(a.seed) };
    let mut r = RunReport::new("oracle", inputs, report, checks, seed);
    r.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(r)
}

fn with_fields(rep: &OracleReport, extra: serde_json::Value) -> serde_json::Value {
    let mut v = json!(rep);
    if let (serde_json::Value::Object(m), serde_json::Value::Object(e)) = (&mut v, extra) {
        m.extend(e);
    }
    v
}

pub fn cmd_verify(suite: Suite, o: &VerifyOptions) -> RunReport {
    let start = Instant::now();
    let checks = run_suites(suite, o);
    let failed: Vec<String> = checks.iter().filter(|c| c.blocks()).map(|c| c.id.clone()).collect();
    let outputs = json!({ "checks": checks.len(), "failed": failed });
    let mut r =
        RunReport::new("verify", json!({ "suite": suite, "options": o }), outputs, checks, Some(o.seed));
    r.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    r
}
