//! Job configuration: a JSON file and command-line flags, flags taking precedence.

use std::path::{Path, PathBuf};

use clap::Args;
use num_rational::BigRational;
use qchev_core::{CartanDatum, Weight};
use serde::Deserialize;

use crate::Failure;

/// Flags shared by all subcommands.
#[derive(Args, Clone, Debug, Default)]
pub struct Flags {
    /// Cartan type such as A1, A2, B2, G2.
    #[arg(long = "type")]
    pub cartan_type: Option<String>,
    /// Highest weight (or lower corner of a range), comma separated: `2` or `1,0`.
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<String>,
    /// Upper corner of the highest-weight range.
    #[arg(long, allow_hyphen_values = true)]
    pub mu_max: Option<String>,
    /// Highest weight of the module V.
    #[arg(long = "v", allow_hyphen_values = true)]
    pub v: Option<String>,
    /// Truncation depth for the Verma series suite.
    #[arg(long)]
    pub depth: Option<usize>,
    /// Rational value of q at which generated functions are also evaluated.
    #[arg(long)]
    pub q: Option<String>,
    /// Seed for the randomized suites
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file (check, decompose) or directory (generate, verify-suite).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads (output order does not depend on it)
    #[arg(long)]
    pub jobs: Option<usize>,
    /// JSON file with any of the fields of a job configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Contents of a `--config` file.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub cartan_type: Option<String>,
    pub mu: Option<Vec<i64>>,
    pub mu_max: Option<Vec<i64>>,
    #[serde(rename = "V", alias = "V_spec")]
    pub v: Option<Vec<i64>>,
    pub depth: Option<usize>,
    pub q_eval: Option<String>,
    pub output_path: Option<PathBuf>,
    pub seed: Option<u64>,
    pub jobs: Option<usize>,
    pub suites: Option<Vec<String>>,
    pub samples: Option<usize>,
}

/// Fully resolved settings.
#[derive(Clone, Debug)]
pub struct Job {
    pub datum: CartanDatum,
    pub mu: Weight,
    pub mu_max: Weight,
    pub v: Weight,
    pub depth: Option<usize>,
    pub q: Option<BigRational>,
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub jobs: usize,
    pub suites: Option<Vec<String>>,
    pub samples: Option<usize>,
}

fn parse_weight(s: &str) -> Result<Vec<i64>, Failure> {
    let s = s.trim().trim_start_matches('[').trim_end_matches(']');
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|_| Failure::usage(format!("'{}' is not an integer weight", s))))
        .collect()
}

fn load_config(path: &Path) -> Result<JobConfig, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read config {}: {}", path.display(), e)))?;
    serde_json::from_str(&text).map_err(|e| Failure::usage(format!("invalid config {}: {}", path.display(), e)))
}

fn weight_for(datum: &CartanDatum, coords: Option<Vec<i64>>, what: &str) -> Result<Weight, Failure> {
    let c = coords.unwrap_or_else(|| vec![0; datum.rank]);
    if c.len() != datum.rank {
        return Err(Failure::usage(format!(
            "{} has {} coordinates but {} has rank {}",
            what,
            c.len(),
            datum.name,
            datum.rank
        )));
    }
    Ok(Weight(c))
}

impl Job {
    /// Merges flags over the config file. `default_type` is used when neither names a type.
    pub fn resolve(flags: &Flags, default_type: Option<&str>) -> Result<Job, Failure> {
        let cfg = match &flags.config {
            Some(p) => load_config(p)?,
            None => JobConfig::default(),
        };
        let name = flags
            .cartan_type
            .clone()
            .or(cfg.cartan_type)
            .or(default_type.map(str::to_string))
            .ok_or_else(|| Failure::usage("no Cartan type given (use --type)"))?;
        let datum = CartanDatum::from_name(&name).map_err(|e| Failure::usage(e.to_string()))?;
        let pick = |flag: &Option<String>, file: Option<Vec<i64>>| -> Result<Option<Vec<i64>>, Failure> {
            match flag {
                Some(s) => parse_weight(s).map(Some),
                None => Ok(file),
            }
        };
        let mu_coords = pick(&flags.mu, cfg.mu)?;
        let mu = weight_for(&datum, mu_coords, "mu")?;
        let mu_max = match pick(&flags.mu_max, cfg.mu_max)? {
            Some(c) => weight_for(&datum, Some(c), "mu-max")?,
            None => mu.clone(),
        };
        let v = weight_for(&datum, pick(&flags.v, cfg.v)?, "v")?;
        if !v.is_dominant() {
            return Err(Failure::usage(format!("highest weight of V {:?} is not dominant", v)));
        }
        let q = match flags.q.clone().or(cfg.q_eval) {
            Some(s) => Some(
                s.trim()
                    .parse::<BigRational>()
                    .map_err(|_| Failure::usage(format!("'{}' is not a rational number", s)))?,
            ),
            None => None,
        };
        Ok(Job {
            datum,
            mu,
            mu_max,
            v,
            depth: flags.depth.or(cfg.depth),
            q,
            out: flags.out.clone().or(cfg.output_path),
            seed: flags.seed.or(cfg.seed).unwrap_or(0),
            jobs: flags.jobs.or(cfg.jobs).unwrap_or(1).max(1),
            suites: cfg.suites,
            samples: cfg.samples,
        })
    }

    /// Dominant weights in the box `mu <= x <= mu_max`, in lexicographic order.
    pub fn mu_range(&self) -> Vec<Weight> {
        let mut out = vec![Vec::new()];
        for i in 0..self.datum.rank {
            let lo = self.mu.get(i).max(0);
            let hi = self.mu_max.get(i);
            out = out
                .into_iter()
                .flat_map(|c: Vec<i64>| {
                    (lo..=hi).map(move |k| {
                        let mut c = c.clone();
                        c.push(k);
                        c
                    })
                })
                .collect();
        }
        out.into_iter().map(Weight).collect()
    }
}
