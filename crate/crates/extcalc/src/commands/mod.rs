//! One function per CLI verb. Each loads its inputs, calls into
//! `extcalc-core` and shapes the result as a JSON report.

pub mod algebra;
pub mod diagram;
pub mod ext;
pub mod schreier;
pub mod ses;

use std::path::Path;

use extcalc_core::algebra::builtins::named;
use extcalc_core::algebra::{Alg, Variety, VarietyPresentation};
use extcalc_core::{Error, Limits};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{CliError, Result};
use crate::format::{read_json, SesFile};

/// Settings shared by every command.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Settings {
    pub limits: Limits,
    pub workers: usize,
    pub seed: u64,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            limits: Limits::default(),
            workers: 1,
            seed: 0,
        }
    }
}

impl Settings {
    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

pub(crate) fn variety(name: &str) -> Result<Variety> {
    Ok(VarietyPresentation::builtin(name)?)
}

pub(crate) fn algebra(v: &Variety, name: &str) -> Result<Alg> {
    Ok(named(v, name)?)
}

pub(crate) fn load_ses(path: &Path, s: &Settings) -> Result<extcalc_core::ext1::ShortExactSeq> {
    read_json::<SesFile>(path)?.load(&s.limits)
}

/// Errors that say the input is not exact, as opposed to malformed.
pub(crate) fn exactness_error(e: &CliError) -> bool {
    matches!(
        e,
        CliError::Core(Error::NotExact(_) | Error::NotExactAt(_) | Error::NotNormal(_))
    )
}
