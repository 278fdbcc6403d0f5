use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Environment variable selecting the default [`ValidationLevel`].
pub const VALIDATE_ENV: &str = "RV_VALIDATE";

/// When engines re-check their output partitions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ValidationLevel {
    Off,
    /// Only in builds with debug assertions (debug and test profiles).
    #[default]
    Debug,
    Always,
}

impl ValidationLevel {
    pub fn enabled(self) -> bool {
        match self {
            ValidationLevel::Off => false,
            ValidationLevel::Debug => cfg!(debug_assertions),
            ValidationLevel::Always => true,
        }
    }

    /// Level from `RV_VALIDATE`, read once per process. Unset or unparsable
    /// values fall back to [`ValidationLevel::Debug`].
    pub fn from_env() -> Self {
        static LEVEL: OnceLock<ValidationLevel> = OnceLock::new();
        *LEVEL.get_or_init(|| {
            std::env::var(VALIDATE_ENV)
                .ok()
                .and_then(|v| v.parse().ok())
                .unwrap_or_default()
        })
    }
}

impl FromStr for ValidationLevel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim() {
            "off" => Ok(ValidationLevel::Off),
            "debug" => Ok(ValidationLevel::Debug),
            "always" => Ok(ValidationLevel::Always),
            other => Err(Error::Config(format!("unknown validation level `{other}`"))),
        }
    }
}
