// SPDX-License-Identifier: Apache-2.0

use std::path::{Path, PathBuf};

use addersim_core::metrics::ModelParams;
use serde::Deserialize;

use crate::Failure;

pub const DEFAULT_CONFIG: &str = "addersim.cfg";
pub const CONFIG_ENV: &str = "ADDERSIM_CONFIG";

/// Report layout for `compare`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Md,
    Csv,
}

/// Contents of a defaults file: `key = value` lines, every key optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub vdd: Option<f64>,
    pub vtn: Option<f64>,
    pub vtp: Option<f64>,
    pub rn: Option<f64>,
    pub rp: Option<f64>,
    pub cg: Option<f64>,
    pub csd: Option<f64>,
    pub freq: Option<f64>,
    pub period_ns: Option<f64>,
    pub k_layout: Option<f64>,
    pub format: Option<Format>,
}

/// Overrides given on the command line.
#[derive(Debug, Default, Clone, clap::Args)]
pub struct ParamFlags {
    /// Supply voltage, V
    #[arg(long, global = true)]
    pub vdd: Option<f64>,
    /// NMOS threshold, V
    #[arg(long, global = true)]
    pub vtn: Option<f64>,
    /// PMOS threshold magnitude, V
    #[arg(long, global = true)]
    pub vtp: Option<f64>,
    /// Operating frequency, Hz; sets the vector period
    #[arg(long, global = true)]
    pub freq: Option<f64>,
    /// Vector period, ns; takes precedence over the frequency
    #[arg(long = "period-ns", global = true)]
    pub period_ns: Option<f64>,
    /// Accepted for compatibility; every run is deterministic
    #[arg(long = "seedless-deterministic", global = true)]
    pub seedless_deterministic: bool,
}

#[derive(Debug)]
pub struct Settings {
    pub params: ModelParams,
    pub format: Option<Format>,
}

impl FileConfig {
    pub fn parse(text: &str, origin: &Path) -> Result<Self, Failure> {
        toml::from_str(text).map_err(|e| Failure::parse(format!("{}: {}", origin.display(), e.message())))
    }

    /// `$ADDERSIM_CONFIG` if set (and then it must exist), otherwise
    /// `./addersim.cfg` if present.
    pub fn discover() -> Result<Self, Failure> {
        let (path, required) = match std::env::var_os(CONFIG_ENV) {
            Some(p) => (PathBuf::from(p), true),
            None => (PathBuf::from(DEFAULT_CONFIG), false),
        };
        match std::fs::read_to_string(&path) {
            Ok(text) => Self::parse(&text, &path),
            Err(e) if !required && e.kind() == std::io::ErrorKind::NotFound => Ok(Self::default()),
            Err(e) => Err(Failure::io(&path, e)),
        }
    }
}

/// Defaults, then the file, then the flags.
pub fn resolve(file: FileConfig, flags: &ParamFlags) -> Result<Settings, Failure> {
    let mut p = ModelParams::default();
    let set = |slot: &mut f64, v: Option<f64>| {
        if let Some(v) = v {
            *slot = v;
        }
    };
    set(&mut p.vdd, file.vdd);
    set(&mut p.vtn, file.vtn);
    set(&mut p.vtp, file.vtp);
    set(&mut p.rn, file.rn);
    set(&mut p.rp, file.rp);
    set(&mut p.cg, file.cg);
    set(&mut p.csd, file.csd);
    set(&mut p.freq, file.freq);
    set(&mut p.k_layout, file.k_layout);
    p.period_ns = file.period_ns;
    set(&mut p.vdd, flags.vdd);
    set(&mut p.vtn, flags.vtn);
    set(&mut p.vtp, flags.vtp);
    if let Some(f) = flags.freq {
        p.freq = f;
        p.period_ns = None;
    }
    if flags.period_ns.is_some() {
        p.period_ns = flags.period_ns;
    }
    p.validate().map_err(|e| Failure::parse(e.to_string()))?;
    Ok(Settings {
        params: p,
        format: file.format,
    })
}
