//! Independent re-derivation of a report's flags from its raw fields.
//!
//! Works on the text alone, so a report can be audited without rerunning the
//! pipeline.

use std::collections::HashMap;

use thiserror::Error;

use crate::report::Flag;
use spectral_forests::forests::ORDERING_ALPHA;

pub const FLAG_NAMES: [&str; 10] = [
    "foster",
    "prob_sum",
    "ordering",
    "forests",
    "forest_bound",
    "comparability",
    "density",
    "query_exact",
    "query_work",
    "cut_transfer",
];

#[derive(Debug, Error)]
pub enum CheckError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("missing field {0}")]
    Missing(String),
    #[error("field {key}: cannot parse {value:?}")]
    BadValue { key: String, value: String },
}

/// Recomputed flag next to the one the report claims.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlagVerdict {
    pub name: &'static str,
    pub reported: Flag,
    pub recomputed: Flag,
}

impl FlagVerdict {
    pub fn agrees(&self) -> bool {
        self.reported == self.recomputed
    }
}

struct Fields(HashMap<String, String>);

impl Fields {
    fn raw(&self, key: &str) -> Result<&str, CheckError> {
        self.0
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| CheckError::Missing(key.to_string()))
    }

    fn get<T: std::str::FromStr>(&self, key: &str) -> Result<T, CheckError> {
        let v = self.raw(key)?;
        v.parse().map_err(|_| CheckError::BadValue {
            key: key.to_string(),
            value: v.to_string(),
        })
    }

    /// `none` maps to `None`.
    fn opt<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, CheckError> {
        if self.raw(key)? == "none" {
            Ok(None)
        } else {
            self.get(key).map(Some)
        }
    }
}

struct Row {
    k: usize,
    scanned: usize,
    boundary_h: f64,
    exact_h: f64,
    cut_g: f64,
    degree_sum: f64,
}

fn parse_row(fields: &Fields, i: usize) -> Result<Row, CheckError> {
    let key = format!("query.{i}");
    let raw = fields.raw(&key)?;
    let bad = || CheckError::BadValue {
        key: key.clone(),
        value: raw.to_string(),
    };
    let toks: Vec<&str> = raw.split_whitespace().collect();
    if toks.len() != 6 {
        return Err(bad());
    }
    let real = |t: &str| t.parse::<f64>().map_err(|_| bad());
    Ok(Row {
        k: toks[0].parse().map_err(|_| bad())?,
        scanned: toks[1].parse().map_err(|_| bad())?,
        boundary_h: real(toks[2])?,
        exact_h: real(toks[3])?,
        cut_g: real(toks[4])?,
        degree_sum: real(toks[5])?,
    })
}

/// Parses `text` and recomputes every flag.
pub fn check_report(text: &str) -> Result<Vec<FlagVerdict>, CheckError> {
    let mut map = HashMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once(' ').ok_or_else(|| CheckError::Malformed {
            line: i + 1,
            msg: "expected `key value`".into(),
        })?;
        if map.insert(k.to_string(), v.trim().to_string()).is_some() {
            return Err(CheckError::Malformed {
                line: i + 1,
                msg: format!("duplicate key {k}"),
            });
        }
    }
    let f = Fields(map);

    let n: usize = f.get("n")?;
    let eps: f64 = f.get("epsilon")?;
    let hi = 1.0 + eps;
    let self_check: bool = f.get("self_check")?;
    let spectral_pass: bool = f.get("spectral_pass")?;
    let lambda_min: f64 = f.get("lambda_min")?;
    let lambda_max: f64 = f.get("lambda_max")?;
    let mfd: usize = f.get("max_forward_degree")?;
    let k: usize = f.get("forest_count")?;
    let rows = (0..f.get::<usize>("queries")?)
        .map(|i| parse_row(&f, i))
        .collect::<Result<Vec<_>, _>>()?;

    // the pass bit itself must follow from the eigenvalues
    let pass_recomputed =
        lambda_max <= hi * (1.0 + 1e-9) && lambda_min >= (1.0 / hi) * (1.0 - 1e-9);
    let certified = spectral_pass && pass_recomputed;
    let gate = |ok: bool| {
        if certified {
            Flag::from_bool(ok)
        } else {
            Flag::Skip
        }
    };
    let gate_sampled = |ok: bool| {
        if certified && !self_check {
            Flag::from_bool(ok)
        } else {
            Flag::Skip
        }
    };

    let foster = {
        let s: f64 = f.get("foster_sum")?;
        Flag::from_bool((s - (n as f64 - 1.0)).abs() <= 1e-8 * n.max(1) as f64)
    };
    let prob_sum = Flag::from_bool((f.get::<f64>("prob_sum")? - 1.0).abs() <= 1e-10);
    let ordering = {
        let ops: usize = f.get("ordering_ops")?;
        let m_h: usize = f.get("sparsifier_edges")?;
        Flag::from_bool(
            f.get::<bool>("ordering_verified")? && ops as f64 <= ORDERING_ALPHA * (n + m_h) as f64,
        )
    };
    let forests = Flag::from_bool(f.get::<bool>("forests_valid")? && k <= mfd);
    // recomputed from the sampler parameters rather than the reported field
    let forest_bound = if certified && !self_check {
        let c: f64 = f.get("C")?;
        let log = match f.raw("mode")? {
            "ss" => (n as f64).ln(),
            "mss" => 1.0,
            other => {
                return Err(CheckError::BadValue {
                    key: "mode".into(),
                    value: other.into(),
                })
            }
        };
        Flag::from_bool(k as f64 <= 2.0 * hi * 2.0 * c * log / (eps * eps))
    } else {
        Flag::Skip
    };
    let comparability = match (
        f.opt::<f64>("comparability_min")?,
        f.opt::<f64>("comparability_max")?,
    ) {
        (Some(lo), Some(up)) => gate(lo >= (1.0 / hi) * (1.0 - 1e-8) && up <= hi * (1.0 + 1e-8)),
        _ => gate(false),
    };
    let density = match f.opt::<f64>("density_max_ratio")? {
        Some(r) => gate_sampled(r <= 1.0 + 1e-12),
        None => gate_sampled(false),
    };
    let query_exact = Flag::from_bool(rows.iter().all(|r| {
        let scale = r.exact_h.abs().max(r.degree_sum).max(1.0);
        (r.boundary_h - r.exact_h).abs() <= 1e-12 * scale
    }));
    let query_work = Flag::from_bool(rows.iter().all(|r| r.scanned <= mfd * r.k));
    let cut_transfer = gate(rows.iter().all(|r| {
        let tol = 1e-8 * (1.0 + r.cut_g);
        r.boundary_h >= r.cut_g / hi - tol && r.boundary_h <= hi * r.cut_g + tol
    }));

    let recomputed = [
        foster,
        prob_sum,
        ordering,
        forests,
        forest_bound,
        comparability,
        density,
        query_exact,
        query_work,
        cut_transfer,
    ];
    FLAG_NAMES
        .iter()
        .zip(recomputed)
        .map(|(&name, recomputed)| {
            let key = format!("flag.{name}");
            let raw = f.raw(&key)?;
            let reported = Flag::parse(raw).ok_or_else(|| CheckError::BadValue {
                key,
                value: raw.to_string(),
            })?;
            Ok(FlagVerdict {
                name,
                reported,
                recomputed,
            })
        })
        .collect()
}
