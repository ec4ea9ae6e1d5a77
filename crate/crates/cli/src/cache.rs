//! Optional on-disk memo of machine reports, keyed by a hash of the
//! command and the instance text. Enabled by `GCLH_CACHE_DIR`.

use std::fs;
use std::path::PathBuf;

use sha2::{Digest, Sha256};

use crate::report::{emit, parse_machine, Format, Report, SCHEMA_VERSION};

pub const ENV_VAR: &str = "GCLH_CACHE_DIR";

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn from_env() -> Option<Self> {
        let dir = std::env::var_os(ENV_VAR)?;
        if dir.is_empty() {
            return None;
        }
        Some(Cache { dir: dir.into() })
    }

    pub fn key(command: &str, instance_text: &str, characteristic: u64) -> String {
        let mut h = Sha256::new();
        h.update(SCHEMA_VERSION.to_le_bytes());
        h.update(characteristic.to_le_bytes());
        h.update(command.as_bytes());
        h.update([0]);
        h.update(instance_text.as_bytes());
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// A stored report, if present and readable. Damaged entries are ignored.
    pub fn load(&self, key: &str) -> Option<Report> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        parse_machine(&text).ok()
    }

    /// Best effort: a cache that cannot be written is simply skipped.
    pub fn store(&self, key: &str, report: &Report) {
        if fs::create_dir_all(&self.dir).is_ok() {
            let tmp = self.dir.join(format!("{key}.tmp{}", std::process::id()));
            if fs::write(&tmp, emit(report, Format::Machine)).is_ok() {
                let _ = fs::rename(&tmp, self.path(key));
            }
        }
    }
}
