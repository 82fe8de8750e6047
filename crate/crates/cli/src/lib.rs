//! Library half of the `orbhull` binary: config parsing, report envelopes,
//! subcommands and the fixture gallery.

pub mod commands;
pub mod config;
pub mod envelope;
pub mod gallery;

pub use commands::{Command, CommandError, Outcome};
pub use config::{ConfigError, Experiment, ExperimentConfig};
pub use envelope::{ReportEnvelope, SCHEMA_VERSION};

/// Command-line values that take precedence over the config file.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub degree_bound: Option<u32>,
    pub json: Option<String>,
}

impl Overrides {
    pub fn apply_to(&self, config: &mut ExperimentConfig) {
        if let Some(s) = self.seed {
            config.estimation.seed = s;
        }
        if let Some(n) = self.samples {
            config.estimation.samples = n;
            if let Some(g) = &mut config.gelfand {
                g.samples = Some(n);
            }
        }
        if let Some(d) = self.degree_bound {
            config.estimation.degree_bound = d;
        }
        if let Some(j) = &self.json {
            config.json = Some(j.clone());
        }
    }

    pub fn apply(&self, exp: &mut Experiment) {
        self.apply_to(&mut exp.config);
    }
}
