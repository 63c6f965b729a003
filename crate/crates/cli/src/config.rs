//! Flat `key = value` configuration with CLI-flag overrides.
//!
//! Defaults reproduce the low-SNR i.i.d. study: 4x32 antennas at -10 dB,
//! 100 iterations, 2000 runs, all algorithms. Unknown keys are rejected
//! with the expected form; the dB-to-linear conversion happens once, in
//! the harness.

use crate::harness::SimConfig;
use beamalign_core::aligners::AlignerKind;
use beamalign_core::channel::ChannelSpec;
use std::collections::BTreeMap;
use std::path::Path;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config file {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Syntax { line: usize, text: String },
    #[error("unknown key `{key}` (expected one of: {expected})")]
    UnknownKey { key: String, expected: String },
    #[error("key `{key}`: expected {expected}, got `{value}`")]
    BadValue {
        key: String,
        expected: &'static str,
        value: String,
    },
}

const KNOWN_KEYS: &[&str] = &[
    "mr",
    "mt",
    "snr_db",
    "snr_db_o",
    "snr_db_e",
    "kmax",
    "runs",
    "seed",
    "algos",
    "kswitch",
    "alpha_init",
    "channel",
    "b_bits",
    "noiseless",
    "common_noise",
    "lisp_zero_seeded_switch",
];

/// Raw key-value settings prior to materialization, so flags can override
/// file entries field by field.
#[derive(Debug, Clone, Default)]
pub struct Settings {
    entries: BTreeMap<String, String>,
}

impl Settings {
    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.entries.insert(key.to_string(), value.into());
    }

    pub fn merge_over(&mut self, overrides: &Settings) {
        for (k, v) in &overrides.entries {
            self.entries.insert(k.clone(), v.clone());
        }
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_str_contents(&text)
    }

    pub fn from_str_contents(text: &str) -> Result<Self, ConfigError> {
        let mut settings = Settings::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError::Syntax {
                    line: idx + 1,
                    text: raw.to_string(),
                });
            };
            let key = key.trim().to_string();
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(ConfigError::UnknownKey {
                    key,
                    expected: KNOWN_KEYS.join(", "),
                });
            }
            settings.set(&key, value.trim().to_string());
        }
        Ok(settings)
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|s| s.as_str())
    }

    fn parse<T: std::str::FromStr>(
        &self,
        key: &str,
        expected: &'static str,
        default: T,
    ) -> Result<T, ConfigError> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|_| ConfigError::BadValue {
                key: key.to_string(),
                expected,
                value: v.to_string(),
            }),
        }
    }

    fn parse_bool(&self, key: &str, default: bool) -> Result<bool, ConfigError> {
        match self.get(key) {
            None => Ok(default),
            Some("true") | Some("1") => Ok(true),
            Some("false") | Some("0") => Ok(false),
            Some(v) => Err(ConfigError::BadValue {
                key: key.to_string(),
                expected: "true or false",
                value: v.to_string(),
            }),
        }
    }

    /// Materialize a validated simulation configuration.
    pub fn build(&self) -> Result<SimConfig, ConfigError> {
        let m_r: usize = self.parse("mr", "a positive integer", 4)?;
        let m_t: usize = self.parse("mt", "a positive integer", 32)?;
        let snr_both: Option<f64> = match self.get("snr_db") {
            None => None,
            Some(v) => Some(v.parse().map_err(|_| ConfigError::BadValue {
                key: "snr_db".into(),
                expected: "an SNR in dB",
                value: v.to_string(),
            })?),
        };
        let snr_db_o = match self.get("snr_db_o") {
            Some(v) => v.parse().map_err(|_| ConfigError::BadValue {
                key: "snr_db_o".into(),
                expected: "an SNR in dB",
                value: v.to_string(),
            })?,
            None => snr_both.unwrap_or(-10.0),
        };
        let snr_db_e = match self.get("snr_db_e") {
            Some(v) => v.parse().map_err(|_| ConfigError::BadValue {
                key: "snr_db_e".into(),
                expected: "an SNR in dB",
                value: v.to_string(),
            })?,
            None => snr_both.unwrap_or(-10.0),
        };
        let k_max: usize = self.parse("kmax", "a positive integer", 100)?;
        let runs: usize = self.parse("runs", "a positive integer", 2000)?;
        let base_seed: u64 = self.parse("seed", "a 64-bit unsigned integer", 1)?;
        let b_bits: u32 = self.parse("b_bits", "a positive integer", 16)?;
        let k_switch: usize = self.parse("kswitch", "a positive integer", m_r.max(m_t))?;
        let alpha_init: f64 = self.parse("alpha_init", "a positive real", 1000.0)?;
        let noiseless = self.parse_bool("noiseless", false)?;
        let common_noise = self.parse_bool("common_noise", true)?;
        let lisp_zero_seeded_switch = self.parse_bool("lisp_zero_seeded_switch", false)?;

        let channel = match self.get("channel").unwrap_or("iid") {
            "iid" => ChannelSpec::iid(m_r, m_t),
            "sparse" => ChannelSpec::sparse(m_r, m_t, 3),
            v if v.starts_with("diag:") => {
                let gains: Result<Vec<f64>, _> = v["diag:".len()..]
                    .split(',')
                    .map(|g| g.trim().parse::<f64>())
                    .collect();
                match gains {
                    Ok(g) if !g.is_empty() => ChannelSpec::diagonal(g),
                    _ => {
                        return Err(ConfigError::BadValue {
                            key: "channel".into(),
                            expected: "diag:h1,h2,... with numeric gains",
                            value: v.to_string(),
                        })
                    }
                }
            }
            v => {
                return Err(ConfigError::BadValue {
                    key: "channel".into(),
                    expected: "iid, sparse, or diag:h1,h2,...",
                    value: v.to_string(),
                })
            }
        };

        let algorithms = parse_algos(
            self.get("algos").unwrap_or("all"),
            k_switch,
            alpha_init,
            k_max,
        )?;

        Ok(SimConfig {
            channel,
            snr_db_o,
            snr_db_e,
            k_max,
            runs,
            base_seed,
            algorithms,
            common_noise,
            b_bits,
            noiseless,
            lisp_zero_seeded_switch,
        })
    }
}

fn parse_algos(
    value: &str,
    k_switch: usize,
    alpha_init: f64,
    k_max: usize,
) -> Result<Vec<AlignerKind>, ConfigError> {
    let all = [
        AlignerKind::BatchLs,
        AlignerKind::SlsOptimal,
        AlignerKind::SlsSuboptimal { alpha_init },
        AlignerKind::SummedPower,
        AlignerKind::Lisp {
            k_switch,
            alpha_init,
        },
        AlignerKind::SimplePower,
        AlignerKind::PilotMmse { k_max },
    ];
    if value == "all" {
        return Ok(all.to_vec());
    }
    let mut kinds = Vec::new();
    for name in value.split(',') {
        let name = name.trim();
        match all.iter().find(|k| k.name() == name) {
            Some(kind) => kinds.push(kind.clone()),
            None => {
                return Err(ConfigError::BadValue {
                    key: "algos".into(),
                    expected: "comma list of batch_ls, sls_optimal, sls_suboptimal, \
                               summed_power, lisp, simple_power, pilot_mmse, or `all`",
                    value: name.to_string(),
                })
            }
        }
    }
    Ok(kinds)
}
