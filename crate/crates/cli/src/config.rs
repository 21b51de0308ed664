use std::path::{Path, PathBuf};

use relhyp::constants::{measure, MeasureParams};
use relhyp::{Error, GroupSpec, HypConstants, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputMode {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub ball_radius: usize,
    pub exp_cap: u64,
    pub count_cap: usize,
    pub search_cap: usize,
    /// Ceiling for every radius above.
    pub global: usize,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub group: GroupSpec,
    pub constants_path: Option<PathBuf>,
    pub caps: Caps,
    pub seed: u64,
    pub workers: usize,
    pub output: OutputMode,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        let c = &self.caps;
        if c.exp_cap == 0 || c.count_cap == 0 || c.global == 0 || self.workers == 0 {
            return Err(Error::Config("caps and worker counts must be positive".into()));
        }
        if c.search_cap > c.global || c.ball_radius > c.global {
            return Err(Error::Config(format!(
                "radius {} / search cap {} exceeds the global cap {}",
                c.ball_radius, c.search_cap, c.global
            )));
        }
        Ok(())
    }

    /// Loaded from `--constants`, otherwise measured on finite balls.
    pub fn constants(&self) -> Result<HypConstants> {
        match &self.constants_path {
            Some(p) => HypConstants::from_json_file(p),
            None => measure(&self.group, &MeasureParams { cap: self.caps.global, ..MeasureParams::default() }),
        }
    }
}

/// Built-in names (`f2`, `z2z`, `z2z2`) or a path to a JSON group file.
pub fn load_group(arg: &str) -> Result<GroupSpec> {
    match arg {
        "f2" => Ok(GroupSpec::free_group()),
        "z2z" => Ok(GroupSpec::z2_star_z()),
        "z2z2" => Ok(GroupSpec::z2_star_z2()),
        path => {
            if !Path::new(path).exists() {
                return Err(Error::Config(format!("group file `{path}` not found")));
            }
            GroupSpec::from_json_file(path)
        }
    }
}
