//! Flat key-value configuration: `[section]` headers, `key = value` lines,
//! `#` comments. Each section describes one scan job.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::engine::SamplingPlan;
use crate::multiplier::{FiniteMeasureZ, KernelSpec};
use crate::sequences::{SequenceKind, WeightPreset};

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("section [{section}], key `{key}`: {message}")]
    Value {
        section: String,
        key: String,
        message: String,
    },
    #[error("section [{section}] is missing required key `{key}`")]
    Missing { section: String, key: String },
    #[error("config contains no scan sections")]
    Empty,
}

/// One `[name]` section with its raw key-value pairs.
#[derive(Clone, Debug)]
pub struct RawSection {
    pub name: String,
    pub line: usize,
    entries: BTreeMap<String, (String, usize)>,
}

impl RawSection {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|(v, _)| v.as_str())
    }

    pub fn require(&self, key: &str) -> Result<&str, ConfigError> {
        self.get(key).ok_or_else(|| ConfigError::Missing {
            section: self.name.clone(),
            key: key.to_string(),
        })
    }

    fn value_err(&self, key: &str, message: impl Into<String>) -> ConfigError {
        ConfigError::Value {
            section: self.name.clone(),
            key: key.to_string(),
            message: message.into(),
        }
    }

    pub fn parse<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError> {
        match self.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse::<T>()
                .map(Some)
                .map_err(|_| self.value_err(key, format!("cannot parse `{raw}`"))),
        }
    }

    pub fn parse_or<T: std::str::FromStr>(&self, key: &str, default: T) -> Result<T, ConfigError> {
        Ok(self.parse(key)?.unwrap_or(default))
    }
}

/// Splits a config text into sections; keys outside any section are errors.
pub fn parse_sections(text: &str) -> Result<Vec<RawSection>, ConfigError> {
    let mut sections: Vec<RawSection> = Vec::new();
    for (i, raw_line) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = match raw_line.find('#') {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let name = rest.strip_suffix(']').ok_or_else(|| ConfigError::Syntax {
                line: line_no,
                message: "unterminated section header".to_string(),
            })?;
            if name.trim().is_empty() {
                return Err(ConfigError::Syntax {
                    line: line_no,
                    message: "empty section name".to_string(),
                });
            }
            sections.push(RawSection {
                name: name.trim().to_string(),
                line: line_no,
                entries: BTreeMap::new(),
            });
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
            line: line_no,
            message: "expected `key = value`".to_string(),
        })?;
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if key.is_empty() {
            return Err(ConfigError::Syntax {
                line: line_no,
                message: "empty key".to_string(),
            });
        }
        let section = sections.last_mut().ok_or_else(|| ConfigError::Syntax {
            line: line_no,
            message: "key-value pair before any [section]".to_string(),
        })?;
        if section.entries.insert(key.clone(), (value, line_no)).is_some() {
            return Err(ConfigError::Syntax {
                line: line_no,
                message: format!("duplicate key `{key}`"),
            });
        }
    }
    Ok(sections)
}

// ─── typed scan jobs ────────────────────────────────────────────────────────

#[derive(Clone, Debug)]
pub struct ScanJob {
    pub name: String,
    pub kernel: KernelSpec,
    pub sequence: SequenceKind,
    pub weights: WeightPreset,
    /// Materialized sequence length: max(k_values)+1 unless overridden.
    pub count: usize,
    pub k_values: Vec<usize>,
    pub p: f64,
    pub plan: SamplingPlan,
    pub refine: bool,
}

fn parse_kernel(section: &RawSection, raw: &str) -> Result<KernelSpec, ConfigError> {
    let err = |m: &str| section_value_err(section, "kernel", m);
    match raw {
        "cesaro" => Ok(KernelSpec::Cesaro),
        "sinc-z" => Ok(KernelSpec::SincZ),
        "sinc-r" => Ok(KernelSpec::SincR),
        "smoothed" => Ok(KernelSpec::Smoothed),
        other => {
            let spec = other
                .strip_prefix("measure:")
                .ok_or_else(|| err("expected cesaro | sinc-z | sinc-r | smoothed | measure:…"))?;
            let measure = match spec {
                "bernoulli" => FiniteMeasureZ::bernoulli_step(),
                "symmetric-triple" => FiniteMeasureZ::symmetric_triple(),
                atoms => {
                    let pairs: Result<Vec<(i64, f64)>, ConfigError> = atoms
                        .split(',')
                        .map(|item| {
                            let (w, o) = item
                                .split_once('@')
                                .ok_or_else(|| err("atom syntax is weight@offset"))?;
                            let weight: f64 = w
                                .trim()
                                .parse()
                                .map_err(|_| err(&format!("bad weight `{w}`")))?;
                            let offset: i64 = o
                                .trim()
                                .parse()
                                .map_err(|_| err(&format!("bad offset `{o}`")))?;
                            Ok((offset, weight))
                        })
                        .collect();
                    FiniteMeasureZ::new(pairs?)
                        .map_err(|e| err(&format!("invalid measure: {e}")))?
                }
            };
            Ok(KernelSpec::MeasurePower(measure))
        }
    }
}

fn parse_sequence(section: &RawSection, raw: &str) -> Result<SequenceKind, ConfigError> {
    let err = |m: String| section_value_err(section, "sequence", &m);
    let (head, arg) = match raw.split_once(':') {
        Some((h, a)) => (h, Some(a)),
        None => (raw, None),
    };
    let need = |what: &str| err(format!("`{head}` needs an argument: {what}"));
    match head {
        "identity" => Ok(SequenceKind::Identity),
        "power" => {
            let p: f64 = arg.ok_or_else(|| need("exponent"))?.parse().map_err(|_| {
                err(format!("bad exponent in `{raw}`"))
            })?;
            Ok(SequenceKind::Power { p })
        }
        "geometric" => {
            let q: u32 = arg
                .ok_or_else(|| need("ratio"))?
                .parse()
                .map_err(|_| err(format!("bad ratio in `{raw}`")))?;
            Ok(SequenceKind::Geometric { q })
        }
        "double-exp" => {
            let q: u32 = arg
                .ok_or_else(|| need("base"))?
                .parse()
                .map_err(|_| err(format!("bad base in `{raw}`")))?;
            Ok(SequenceKind::DoubleExp { q })
        }
        "dyadic" => {
            let counts: Result<Vec<u64>, _> = arg
                .ok_or_else(|| need("comma-separated block counts"))?
                .split(',')
                .map(|c| c.trim().parse::<u64>())
                .collect();
            Ok(SequenceKind::DyadicBlocks {
                counts: counts.map_err(|_| err(format!("bad block counts in `{raw}`")))?,
            })
        }
        "reciprocal-dyadic" => Ok(SequenceKind::ReciprocalDyadic),
        "reciprocal-identity" => Ok(SequenceKind::ReciprocalIdentity),
        "reciprocal-ratio" => {
            let r: f64 = arg
                .ok_or_else(|| need("ratio in (0,1)"))?
                .parse()
                .map_err(|_| err(format!("bad ratio in `{raw}`")))?;
            Ok(SequenceKind::ReciprocalRatio { r })
        }
        _ => Err(err(format!("unknown sequence kind `{head}`"))),
    }
}

fn section_value_err(section: &RawSection, key: &str, message: &str) -> ConfigError {
    ConfigError::Value {
        section: section.name.clone(),
        key: key.to_string(),
        message: message.to_string(),
    }
}

impl ScanJob {
    pub fn from_section(section: &RawSection, default_seed: u64) -> Result<Self, ConfigError> {
        let kernel = parse_kernel(section, section.require("kernel")?)?;
        let sequence = parse_sequence(section, section.require("sequence")?)?;
        let weights = match section.get("weights").unwrap_or("unit") {
            "unit" => WeightPreset::Unit,
            "log" => WeightPreset::LogKPlus1,
            other => {
                return Err(section_value_err(
                    section,
                    "weights",
                    &format!("unknown preset `{other}` (use unit | log)"),
                ))
            }
        };

        let k_values: Vec<usize> = match section.get("k_list") {
            Some(raw) => {
                let parsed: Result<Vec<usize>, _> =
                    raw.split(',').map(|v| v.trim().parse()).collect();
                parsed.map_err(|_| {
                    section_value_err(section, "k_list", &format!("bad list `{raw}`"))
                })?
            }
            None => vec![section.parse_or("k_max", 0usize)?],
        };
        if k_values.is_empty() || k_values.contains(&0) {
            return Err(section_value_err(
                section,
                "k_max",
                "need k_max ≥ 1 or a nonempty k_list",
            ));
        }
        let max_k = *k_values.iter().max().unwrap();
        let count = section.parse_or("count", max_k + 1)?;
        let p = section.parse_or("p", 1.0f64)?;

        let seed = section.parse_or("seed", default_seed)?;
        let grid = section.parse_or("grid", 4096u64)?;
        let log_samples = section.parse_or("log_samples", 512usize)?;
        let plan = match &kernel {
            KernelSpec::Cesaro | KernelSpec::MeasurePower(_) => SamplingPlan::Torus {
                grid,
                log_samples,
                seed,
            },
            KernelSpec::SincZ | KernelSpec::Smoothed => SamplingPlan::Integers {
                dense_max: section.parse_or("dense_max", 10_000i64)?,
                sparse_max: section.parse_or("sparse_max", 1_000_000i64)?,
                sparse_count: section.parse_or("sparse_count", 2000usize)?,
            },
            KernelSpec::SincR => SamplingPlan::Reals {
                max: section.parse_or("real_max", 1000.0f64)?,
                grid: grid as usize,
                log_count: log_samples,
            },
        };
        Ok(ScanJob {
            name: section.name.clone(),
            kernel,
            sequence,
            weights,
            count,
            k_values,
            p,
            plan,
            refine: section.parse_or("refine", true)?,
        })
    }
}

/// Full config: every section becomes a scan job.
pub fn parse_scan_config(text: &str, default_seed: u64) -> Result<Vec<ScanJob>, ConfigError> {
    let sections = parse_sections(text)?;
    if sections.is_empty() {
        return Err(ConfigError::Empty);
    }
    sections
        .iter()
        .map(|s| ScanJob::from_section(s, default_seed))
        .collect()
}

/// One circle-rotation diagnostic run: tent pair of 2L tents, averages along
/// n_k = k up to k_max.
#[derive(Clone, Debug)]
pub struct RotationJob {
    pub name: String,
    pub l_half: usize,
    pub k_max: usize,
    /// None selects the golden-ratio conjugate.
    pub alpha: Option<f64>,
}

impl RotationJob {
    fn from_section(section: &RawSection) -> Result<Self, ConfigError> {
        let l_half: usize = section.parse_or("l_half", 1000)?;
        if l_half == 0 {
            return Err(section_value_err(section, "l_half", "must be at least 1"));
        }
        let k_max: usize = section.parse_or("k_max", 10)?;
        if k_max == 0 {
            return Err(section_value_err(section, "k_max", "must be at least 1"));
        }
        let alpha = match section.get("alpha") {
            None => None,
            Some("golden") => None,
            Some(_) => {
                let a: f64 = section.parse("alpha")?.unwrap();
                if !(a > 0.0 && a < 1.0) {
                    return Err(section_value_err(
                        section,
                        "alpha",
                        "must lie strictly between 0 and 1, or be `golden`",
                    ));
                }
                Some(a)
            }
        };
        Ok(RotationJob {
            name: section.name.clone(),
            l_half,
            k_max,
            alpha,
        })
    }
}

/// Full config: every section becomes a rotation diagnostic job.
pub fn parse_rotation_config(text: &str) -> Result<Vec<RotationJob>, ConfigError> {
    let sections = parse_sections(text)?;
    if sections.is_empty() {
        return Err(ConfigError::Empty);
    }
    sections.iter().map(RotationJob::from_section).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# two jobs
[lacunary]
kernel = cesaro
sequence = geometric:2
k_max = 20
p = 1
grid = 1024

[bernoulli-scan]
kernel = measure:bernoulli
sequence = double-exp:2
k_list = 3, 4
seed = 99
";

    #[test]
    fn parses_two_jobs() {
        let jobs = parse_scan_config(SAMPLE, 7).unwrap();
        assert_eq!(jobs.len(), 2);
        assert_eq!(jobs[0].name, "lacunary");
        assert_eq!(jobs[0].k_values, vec![20]);
        assert!(matches!(jobs[0].plan, SamplingPlan::Torus { grid: 1024, .. }));
        assert_eq!(jobs[1].k_values, vec![3, 4]);
        assert!(matches!(
            jobs[1].plan,
            SamplingPlan::Torus { seed: 99, .. }
        ));
    }

    #[test]
    fn custom_measure_atoms() {
        let text = "[m]\nkernel = measure:0.25@-1,0.5@0,0.25@1\nsequence = identity\nk_max = 3\n";
        let jobs = parse_scan_config(text, 0).unwrap();
        assert!(matches!(jobs[0].kernel, KernelSpec::MeasurePower(_)));
    }

    #[test]
    fn key_before_section_is_a_syntax_error() {
        let err = parse_sections("a = 1\n").unwrap_err();
        assert!(matches!(err, ConfigError::Syntax { line: 1, .. }));
    }

    #[test]
    fn duplicate_key_is_rejected() {
        let err = parse_sections("[s]\na = 1\na = 2\n").unwrap_err();
        assert!(matches!(err, ConfigError::Syntax { line: 3, .. }));
    }

    #[test]
    fn missing_kernel_is_reported_with_section() {
        let err = parse_scan_config("[probe]\nsequence = identity\nk_max = 2\n", 0).unwrap_err();
        assert_eq!(
            err,
            ConfigError::Missing {
                section: "probe".to_string(),
                key: "kernel".to_string()
            }
        );
    }

    #[test]
    fn comments_and_blanks_are_ignored() {
        let text = "\n# top\n[s]  # trailing\nkernel = cesaro # end\nsequence = identity\nk_max = 2\n";
        let jobs = parse_scan_config(text, 0).unwrap();
        assert_eq!(jobs[0].name, "s");
    }

    #[test]
    fn empty_config_is_an_error() {
        assert_eq!(parse_scan_config("# nothing\n", 0).unwrap_err(), ConfigError::Empty);
    }

    #[test]
    fn bad_sequence_argument_names_the_key() {
        let err =
            parse_scan_config("[s]\nkernel = cesaro\nsequence = geometric:x\nk_max = 2\n", 0)
                .unwrap_err();
        assert!(matches!(err, ConfigError::Value { ref key, .. } if key == "sequence"));
    }

    #[test]
    fn rotation_jobs_parse_with_defaults() {
        let jobs = parse_rotation_config("[tent]\nl_half = 50\n").unwrap();
        assert_eq!(jobs[0].name, "tent");
        assert_eq!(jobs[0].l_half, 50);
        assert_eq!(jobs[0].k_max, 10);
        assert!(jobs[0].alpha.is_none());

        let jobs = parse_rotation_config("[t]\nalpha = 0.37\nk_max = 4\n").unwrap();
        assert_eq!(jobs[0].alpha, Some(0.37));
        assert_eq!(jobs[0].k_max, 4);
    }

    #[test]
    fn rotation_alpha_must_be_interior() {
        let err = parse_rotation_config("[t]\nalpha = 1.5\n").unwrap_err();
        assert!(matches!(err, ConfigError::Value { ref key, .. } if key == "alpha"));
    }
}
