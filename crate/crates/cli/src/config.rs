//! Experiment settings from a flat `key=value` file and command-line flags.

use std::fmt;
use std::path::PathBuf;

use clap::ValueEnum;
use fogcache::SystemParams;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: expected key=value, got {text:?}")]
    Malformed { line: usize, text: String },
    #[error("unknown setting {0:?}")]
    UnknownKey(String),
    #[error("bad value {value:?} for {key}: {reason}")]
    BadValue { key: String, value: String, reason: String },
    #[error("{0}")]
    Conflict(String),
    #[error(transparent)]
    Model(#[from] fogcache::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    #[value(alias = "bit-exact")]
    Bitexact,
    Analytic,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Bitexact => "bitexact",
            Mode::Analytic => "analytic",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepAxis {
    L,
    M,
    #[value(alias = "delta-b")]
    Deltab,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScheduleMode {
    FixedL(usize),
    Random,
}

/// Partially specified settings. Layers merge with [`Settings::overlay`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub k: Option<usize>,
    pub n: Option<usize>,
    pub m: Option<f64>,
    pub f: Option<usize>,
    pub b: Option<usize>,
    pub delta_b: Option<Vec<usize>>,
    pub l: Option<usize>,
    pub random: Option<bool>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub mode: Option<Mode>,
    pub sweep: Option<SweepAxis>,
    pub values: Option<Vec<f64>>,
    pub out: Option<PathBuf>,
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ConfigError>
where
    T::Err: fmt::Display,
{
    value.trim().parse().map_err(|e: T::Err| ConfigError::BadValue {
        key: key.to_string(),
        value: value.to_string(),
        reason: e.to_string(),
    })
}

fn parse_list<T: std::str::FromStr>(key: &str, value: &str) -> Result<Vec<T>, ConfigError>
where
    T::Err: fmt::Display,
{
    value.split(',').filter(|v| !v.trim().is_empty()).map(|v| parse(key, v)).collect()
}

fn parse_enum<T: ValueEnum>(key: &str, value: &str) -> Result<T, ConfigError> {
    T::from_str(value.trim(), true).map_err(|reason| ConfigError::BadValue {
        key: key.to_string(),
        value: value.to_string(),
        reason,
    })
}

impl Settings {
    /// Desk-scale defaults for `simulate` and `sweep`.
    pub fn desk() -> Self {
        Settings {
            k: None,
            n: Some(20),
            m: Some(10.0),
            f: Some(10_000),
            b: Some(5),
            delta_b: Some(vec![2]),
            l: None,
            random: None,
            trials: Some(50),
            seed: Some(1),
            mode: Some(Mode::Bitexact),
            sweep: None,
            values: None,
            out: None,
        }
    }

    /// Four F-APs, four files, `M = 2`, `B = 4`, `delta_b = 2`, one request per slot.
    pub fn example() -> Self {
        Settings {
            k: Some(4),
            n: Some(4),
            m: Some(2.0),
            f: Some(16),
            b: Some(4),
            delta_b: Some(vec![2]),
            l: Some(1),
            random: Some(false),
            trials: Some(1),
            seed: Some(1),
            mode: Some(Mode::Analytic),
            sweep: None,
            values: None,
            out: None,
        }
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let key = key.trim();
        match key {
            "k" | "K" => self.k = Some(parse(key, value)?),
            "n" | "N" => self.n = Some(parse(key, value)?),
            "m" | "M" => self.m = Some(parse(key, value)?),
            "f" | "F" => self.f = Some(parse::<f64>(key, value).and_then(|x| whole(key, value, x))?),
            "b" | "B" => self.b = Some(parse(key, value)?),
            "delta-b" | "delta_b" | "deltaB" => self.delta_b = Some(parse_list(key, value)?),
            "l" | "L" => self.l = Some(parse(key, value)?),
            "random" => self.random = Some(parse(key, value)?),
            "trials" => self.trials = Some(parse(key, value)?),
            "seed" => self.seed = Some(parse(key, value)?),
            "mode" => self.mode = Some(parse_enum(key, value)?),
            "sweep" => self.sweep = Some(parse_enum(key, value)?),
            "values" => self.values = Some(parse_list(key, value)?),
            "out" => self.out = Some(PathBuf::from(value.trim())),
            _ => return Err(ConfigError::UnknownKey(key.to_string())),
        }
        Ok(())
    }

    /// Reads `key=value` lines; blank lines and `#` comments are ignored.
    pub fn parse_file(text: &str) -> Result<Self, ConfigError> {
        let mut settings = Settings::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError::Malformed {
                    line: i + 1,
                    text: raw.to_string(),
                });
            };
            settings.set(key, value)?;
        }
        Ok(settings)
    }

    /// Fields set in `top` win.
    pub fn overlay(self, top: Settings) -> Settings {
        Settings {
            k: top.k.or(self.k),
            n: top.n.or(self.n),
            m: top.m.or(self.m),
            f: top.f.or(self.f),
            b: top.b.or(self.b),
            delta_b: top.delta_b.or(self.delta_b),
            l: top.l.or(self.l),
            random: top.random.or(self.random),
            trials: top.trials.or(self.trials),
            seed: top.seed.or(self.seed),
            mode: top.mode.or(self.mode),
            sweep: top.sweep.or(self.sweep),
            values: top.values.or(self.values),
            out: top.out.or(self.out),
        }
    }

    pub fn resolve(&self) -> Result<ExperimentConfig, ConfigError> {
        let need = |name: &str| ConfigError::Conflict(format!("{name} is not set"));
        let b = self.b.ok_or_else(|| need("b"))?;
        let schedule = match (self.l, self.random) {
            (Some(_), Some(true)) => {
                return Err(ConfigError::Conflict("--l and --random are mutually exclusive".into()))
            }
            (Some(l), _) => ScheduleMode::FixedL(l),
            (None, _) => ScheduleMode::Random,
        };
        let k = match (self.k, schedule) {
            (Some(k), _) => k,
            (None, ScheduleMode::FixedL(l)) => b * l,
            (None, ScheduleMode::Random) => 10,
        };
        let delta_b = self.delta_b.clone().unwrap_or_else(|| vec![1]);
        if delta_b.is_empty() {
            return Err(need("delta-b"));
        }
        let trials = self.trials.unwrap_or(1);
        if trials == 0 {
            return Err(ConfigError::BadValue {
                key: "trials".into(),
                value: "0".into(),
                reason: "at least one trial is required".into(),
            });
        }
        let sweep = match (self.sweep, &self.values) {
            (None, None) => None,
            (None, Some(_)) => return Err(ConfigError::Conflict("--values needs --sweep".into())),
            (Some(_), None) => return Err(ConfigError::Conflict("--sweep needs --values".into())),
            (Some(axis), Some(values)) => {
                if values.is_empty() {
                    return Err(need("values"));
                }
                if axis != SweepAxis::M {
                    for &v in values {
                        if v < 1.0 || v.fract() != 0.0 {
                            return Err(ConfigError::BadValue {
                                key: "values".into(),
                                value: v.to_string(),
                                reason: "L and delta-b sweeps take positive integers".into(),
                            });
                        }
                    }
                }
                Some(Sweep {
                    axis,
                    values: values.clone(),
                })
            }
        };
        let config = ExperimentConfig {
            k,
            n: self.n.ok_or_else(|| need("n"))?,
            m: self.m.ok_or_else(|| need("m"))?,
            f: self.f.ok_or_else(|| need("f"))?,
            b,
            delta_b,
            schedule,
            mode: self.mode.unwrap_or(Mode::Bitexact),
            trials,
            seed: self.seed.unwrap_or(1),
            sweep,
            out: self.out.clone(),
        };
        if config.sweep.is_none() {
            for spec in config.cells() {
                spec.validate()?;
            }
        }
        Ok(config)
    }
}

fn whole(key: &str, value: &str, x: f64) -> Result<usize, ConfigError> {
    if x >= 1.0 && x.fract() == 0.0 && x <= usize::MAX as f64 {
        Ok(x as usize)
    } else {
        Err(ConfigError::BadValue {
            key: key.to_string(),
            value: value.to_string(),
            reason: "expected a positive whole number of bits".into(),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub k: usize,
    pub n: usize,
    pub m: f64,
    pub f: usize,
    pub b: usize,
    pub delta_b: Vec<usize>,
    pub schedule: ScheduleMode,
    pub mode: Mode,
    pub trials: usize,
    pub seed: u64,
    pub sweep: Option<Sweep>,
    pub out: Option<PathBuf>,
}

/// One fully specified run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub k: usize,
    pub n: usize,
    pub m: f64,
    pub f: usize,
    pub b: usize,
    pub delta_b: usize,
    pub schedule: ScheduleMode,
    pub mode: Mode,
    pub trials: usize,
    pub seed: u64,
}

impl RunSpec {
    pub fn params(&self) -> fogcache::Result<SystemParams> {
        SystemParams::new(self.k, self.n, self.m, self.f, self.b, self.delta_b)
    }

    /// Parameter checks plus `K = B L` for fixed-L schedules.
    pub fn validate(&self) -> fogcache::Result<SystemParams> {
        let params = self.params()?;
        if let ScheduleMode::FixedL(l) = self.schedule {
            if l == 0 || self.b * l != self.k {
                return Err(fogcache::Error::InvalidParams(format!(
                    "fixed-L schedule needs K = B L, got K = {}, B = {}, L = {l}",
                    self.k, self.b
                )));
            }
        }
        Ok(params)
    }

    pub fn l(&self) -> Option<usize> {
        match self.schedule {
            ScheduleMode::FixedL(l) => Some(l),
            ScheduleMode::Random => None,
        }
    }
}

impl ExperimentConfig {
    /// Runs in output order: sweep value outermost, then `delta_b`.
    pub fn cells(&self) -> Vec<RunSpec> {
        let base = RunSpec {
            k: self.k,
            n: self.n,
            m: self.m,
            f: self.f,
            b: self.b,
            delta_b: self.delta_b[0],
            schedule: self.schedule,
            mode: self.mode,
            trials: self.trials,
            seed: self.seed,
        };
        let per_delta = |spec: RunSpec| -> Vec<RunSpec> {
            self.delta_b
                .iter()
                .map(|&delta_b| RunSpec { delta_b, ..spec.clone() })
                .collect()
        };
        let Some(sweep) = &self.sweep else {
            return per_delta(base);
        };
        sweep
            .values
            .iter()
            .flat_map(|&v| match sweep.axis {
                SweepAxis::M => per_delta(RunSpec { m: v, ..base.clone() }),
                SweepAxis::L => {
                    let l = v as usize;
                    per_delta(RunSpec {
                        k: self.b * l,
                        schedule: ScheduleMode::FixedL(l),
                        ..base.clone()
                    })
                }
                SweepAxis::Deltab => vec![RunSpec {
                    delta_b: v as usize,
                    ..base.clone()
                }],
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_flags() {
        let file = Settings::parse_file("# desk run\nk = 8\nm=5\ndelta-b=1,3\nmode=analytic\n\nvalues=5, 10\nsweep=m\n").unwrap();
        assert_eq!(file.k, Some(8));
        assert_eq!(file.delta_b, Some(vec![1, 3]));
        let flags = Settings {
            m: Some(7.0),
            ..Default::default()
        };
        let merged = Settings::desk().overlay(file).overlay(flags);
        assert_eq!(merged.m, Some(7.0));
        assert_eq!(merged.n, Some(20));
        let config = merged.resolve().unwrap();
        assert_eq!(config.mode, Mode::Analytic);
        assert_eq!(config.schedule, ScheduleMode::Random);
        let cells = config.cells();
        assert_eq!(cells.len(), 4);
        assert_eq!((cells[0].m, cells[0].delta_b), (5.0, 1));
        assert_eq!((cells[3].m, cells[3].delta_b), (10.0, 3));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(Settings::parse_file("k 4"), Err(ConfigError::Malformed { line: 1, .. })));
        assert!(matches!(Settings::parse_file("colour=red"), Err(ConfigError::UnknownKey(_))));
        assert!(matches!(Settings::parse_file("k=four"), Err(ConfigError::BadValue { .. })));
        assert!(matches!(Settings::parse_file("mode=fast"), Err(ConfigError::BadValue { .. })));
        let both = Settings {
            l: Some(2),
            random: Some(true),
            ..Settings::desk()
        };
        assert!(matches!(both.resolve(), Err(ConfigError::Conflict(_))));
        let bad_l = Settings {
            k: Some(5),
            l: Some(2),
            ..Settings::desk()
        };
        assert!(matches!(bad_l.resolve(), Err(ConfigError::Model(fogcache::Error::InvalidParams(_)))));
        let zero = Settings {
            trials: Some(0),
            ..Settings::desk()
        };
        assert!(zero.resolve().is_err());
        let invalid = Settings {
            m: Some(30.0),
            ..Settings::desk()
        };
        assert!(matches!(invalid.resolve(), Err(ConfigError::Model(fogcache::Error::InvalidParams(_)))));
        let frac = Settings {
            sweep: Some(SweepAxis::L),
            values: Some(vec![1.5]),
            ..Settings::desk()
        };
        assert!(frac.resolve().is_err());
    }

    #[test]
    fn fixed_l_derives_k_and_l_sweeps_rescale_it() {
        let s = Settings {
            l: Some(2),
            sweep: Some(SweepAxis::L),
            values: Some(vec![1.0, 3.0]),
            ..Settings::desk()
        };
        let config = s.resolve().unwrap();
        assert_eq!(config.k, 10);
        let cells = config.cells();
        assert_eq!(cells.iter().map(|c| (c.k, c.l())).collect::<Vec<_>>(), [(5, Some(1)), (15, Some(3))]);
        let db = Settings {
            sweep: Some(SweepAxis::Deltab),
            values: Some(vec![1.0, 2.0, 5.0]),
            ..Settings::desk()
        };
        let cells = db.resolve().unwrap().cells();
        assert_eq!(cells.iter().map(|c| c.delta_b).collect::<Vec<_>>(), [1, 2, 5]);
    }

    #[test]
    fn example_layer() {
        let config = Settings::example().resolve().unwrap();
        assert_eq!(config.cells()[0].params().unwrap(), SystemParams::new(4, 4, 2.0, 16, 4, 2).unwrap());
    }
}
