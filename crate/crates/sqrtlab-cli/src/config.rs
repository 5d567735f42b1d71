//! Line-oriented sweep configuration.
//!
//! Grammar (bit-exact, also documented in the README):
//!
//! ```text
//! file     := line*
//! line     := ws (comment | section | binding)? ws LF
//! comment  := '#' any*
//! section  := '[' name ']'
//! binding  := key ws '=' ws value
//! value    := intlist | range | word
//! intlist  := int (',' int)*
//! range    := int '..' int (' step ' int | ' mul ' int)?   (inclusive)
//! ```
//!
//! Unknown sections or keys are errors; grids must be nonempty; caps must
//! be positive.

use crate::rows::Format;
use std::collections::BTreeMap;
use std::path::PathBuf;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subject {
    Energy,
    Lattice,
    Bilinear,
    Sieve,
}

impl Subject {
    pub fn name(&self) -> &'static str {
        match self {
            Subject::Energy => "energy",
            Subject::Lattice => "lattice",
            Subject::Bilinear => "bilinear",
            Subject::Sieve => "sieve",
        }
    }

    /// Grid keys in their fixed odometer order (last key varies fastest).
    pub fn grid_keys(&self) -> &'static [&'static str] {
        match self {
            Subject::Energy => &["r", "j", "M", "H"],
            Subject::Lattice => &["r", "d", "k", "H", "M"],
            Subject::Bilinear => &["r", "j", "L", "M", "H"],
            Subject::Sieve => &["Q"],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EngineChoice {
    Convolution,
    Pairing,
    Spectral,
}

impl EngineChoice {
    pub fn parse(s: &str) -> Result<Self, String> {
        match s {
            "convolution" => Ok(EngineChoice::Convolution),
            "pairing" => Ok(EngineChoice::Pairing),
            "spectral" => Ok(EngineChoice::Spectral),
            other => Err(format!("unknown engine '{other}'")),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            EngineChoice::Convolution => "convolution",
            EngineChoice::Pairing => "pairing",
            EngineChoice::Spectral => "spectral",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AmplitudeChoice {
    Zero,
    /// The critical-point amplitude derived from `Q`.
    Critical { q: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoeffChoice {
    Ones,
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    pub brute_mass: u128,
    pub max_cells: u64,
    pub max_r: u64,
    pub sieve_q_squared: u64,
    pub sieve_n: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            brute_mass: 200,
            max_cells: 1_000_000,
            max_r: 10_000_000,
            sieve_q_squared: 10_000,
            sieve_n: 1_000_000,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub subject: Subject,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub mirror_jsonl: bool,
    pub threads: usize,
    pub seed: u64,
    pub engine: EngineChoice,
    pub eps: f64,
    pub nu: Option<f64>,
    pub unrestricted: bool,
    pub amplitude: AmplitudeChoice,
    pub coeffs: CoeffChoice,
    pub caps: Caps,
    pub grid: BTreeMap<String, Vec<u64>>,
    // Sieve-specific knobs.
    pub sieve_n: Option<u64>,
    pub sieve_r_min: u64,
    pub sieve_r_max: Option<u64>,
    pub z_points: u32,
    pub eta: f64,
}

impl SweepConfig {
    pub fn new(subject: Subject) -> Self {
        SweepConfig {
            subject,
            out: None,
            format: Format::Csv,
            mirror_jsonl: false,
            threads: 1,
            seed: 0,
            engine: EngineChoice::Convolution,
            eps: 0.01,
            nu: None,
            unrestricted: false,
            amplitude: AmplitudeChoice::Zero,
            coeffs: CoeffChoice::Ones,
            caps: Caps::default(),
            grid: BTreeMap::new(),
            sieve_n: None,
            sieve_r_min: 1,
            sieve_r_max: None,
            z_points: 8,
            eta: 0.1,
        }
    }

    /// Grid values for a key, in declaration order of the subject.
    pub fn grid_values(&self, key: &str) -> Result<&[u64], String> {
        self.grid
            .get(key)
            .map(|v| v.as_slice())
            .ok_or_else(|| format!("[grid] is missing key '{key}'"))
    }

    /// Total number of cells (the odometer product).
    pub fn cell_count(&self) -> Result<u64, String> {
        let mut total: u64 = 1;
        for key in self.subject.grid_keys() {
            let len = self.grid_values(key)?.len() as u64;
            if len == 0 {
                return Err(format!("grid for '{key}' is empty"));
            }
            total = total
                .checked_mul(len)
                .ok_or_else(|| "grid size overflows u64".to_string())?;
        }
        Ok(total)
    }

    /// The cell at odometer index `idx`, as (key, value) pairs in key order.
    pub fn cell(&self, idx: u64) -> Vec<(&'static str, u64)> {
        let keys = self.subject.grid_keys();
        let mut radix: Vec<&[u64]> = keys.iter().map(|k| &self.grid[*k][..]).collect();
        radix.reverse();
        let mut rem = idx;
        let mut rev: Vec<u64> = Vec::with_capacity(keys.len());
        for vals in &radix {
            let len = vals.len() as u64;
            rev.push(vals[(rem % len) as usize]);
            rem /= len;
        }
        rev.reverse();
        keys.iter().zip(rev).map(|(k, v)| (*k, v)).collect()
    }
}

/// Parses `a,b,c`, `lo..hi`, `lo..hi step k`, or `lo..hi mul k`.
pub fn parse_grid_values(s: &str) -> Result<Vec<u64>, String> {
    let s = s.trim();
    if let Some((lo, rest)) = s.split_once("..") {
        let lo: u64 = lo.trim().parse().map_err(|e| format!("range start: {e}"))?;
        let (hi_str, step) = if let Some((hi, step)) = rest.split_once(" step ") {
            (hi, Step::Add(step.trim().parse().map_err(|e| format!("step: {e}"))?))
        } else if let Some((hi, mul)) = rest.split_once(" mul ") {
            (hi, Step::Mul(mul.trim().parse().map_err(|e| format!("mul: {e}"))?))
        } else {
            (rest, Step::Add(1))
        };
        let hi: u64 = hi_str.trim().parse().map_err(|e| format!("range end: {e}"))?;
        match step {
            Step::Add(0) => return Err("step must be positive".into()),
            Step::Mul(m) if m < 2 => return Err("mul must be at least 2".into()),
            _ => {}
        }
        let mut vals = Vec::new();
        let mut v = lo;
        while v <= hi {
            vals.push(v);
            match step {
                Step::Add(k) => match v.checked_add(k) {
                    Some(next) => v = next,
                    None => break,
                },
                Step::Mul(k) => match v.checked_mul(k) {
                    Some(next) => v = next,
                    None => break,
                },
            }
        }
        if vals.is_empty() {
            return Err(format!("range '{s}' produces no values"));
        }
        return Ok(vals);
    }
    let vals: Result<Vec<u64>, _> = s.split(',').map(|p| p.trim().parse::<u64>()).collect();
    let vals = vals.map_err(|e| format!("list '{s}': {e}"))?;
    if vals.is_empty() {
        return Err("empty value list".into());
    }
    Ok(vals)
}

enum Step {
    Add(u64),
    Mul(u64),
}

/// Parses the whole config file.
pub fn parse_config(text: &str) -> Result<SweepConfig, String> {
    let mut subject: Option<Subject> = None;
    let mut bindings: Vec<(String, String, String)> = Vec::new(); // (section, key, value)
    let mut section = String::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            section = name.trim().to_string();
            match section.as_str() {
                "sweep" | "grid" | "caps" => {}
                other => return Err(format!("line {}: unknown section [{other}]", lineno + 1)),
            }
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected key = value", lineno + 1))?;
        if section.is_empty() {
            return Err(format!("line {}: binding before any [section]", lineno + 1));
        }
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if section == "sweep" && key == "subject" {
            subject = Some(match value.as_str() {
                "energy" => Subject::Energy,
                "lattice" => Subject::Lattice,
                "bilinear" => Subject::Bilinear,
                "sieve" => Subject::Sieve,
                other => return Err(format!("unknown subject '{other}'")),
            });
        }
        bindings.push((section.clone(), key, value));
    }
    let subject = subject.ok_or("missing 'subject' in [sweep]")?;
    let mut cfg = SweepConfig::new(subject);
    for (section, key, value) in bindings {
        apply_binding(&mut cfg, &section, &key, &value)?;
    }
    // Nonempty grids for every subject key.
    cfg.cell_count()?;
    Ok(cfg)
}

fn apply_binding(cfg: &mut SweepConfig, section: &str, key: &str, value: &str) -> Result<(), String> {
    let parse_f64 = |v: &str| v.parse::<f64>().map_err(|e| format!("{key}: {e}"));
    let parse_u64 = |v: &str| v.parse::<u64>().map_err(|e| format!("{key}: {e}"));
    match (section, key) {
        ("sweep", "subject") => {}
        ("sweep", "out") => cfg.out = Some(PathBuf::from(value)),
        ("sweep", "format") => {
            cfg.format = match value {
                "csv" => Format::Csv,
                "jsonl" => Format::Jsonl,
                other => return Err(format!("unknown format '{other}'")),
            }
        }
        ("sweep", "mirror_jsonl") => cfg.mirror_jsonl = parse_bool(value)?,
        ("sweep", "threads") => {
            cfg.threads = parse_u64(value)?.max(1) as usize;
        }
        ("sweep", "seed") => cfg.seed = parse_u64(value)?,
        ("sweep", "engine") => cfg.engine = EngineChoice::parse(value)?,
        ("sweep", "eps") => cfg.eps = parse_f64(value)?,
        ("sweep", "nu") => cfg.nu = Some(parse_f64(value)?),
        ("sweep", "unrestricted") => cfg.unrestricted = parse_bool(value)?,
        ("sweep", "amplitude") => {
            cfg.amplitude = match value {
                "zero" => AmplitudeChoice::Zero,
                other => {
                    let q = other
                        .strip_prefix("critical:")
                        .ok_or_else(|| format!("amplitude must be 'zero' or 'critical:<Q>', got '{other}'"))?;
                    AmplitudeChoice::Critical { q: q.parse().map_err(|e| format!("amplitude Q: {e}"))? }
                }
            }
        }
        ("sweep", "coeffs") => {
            cfg.coeffs = match value {
                "ones" => CoeffChoice::Ones,
                "random" => CoeffChoice::Random,
                other => return Err(format!("coeffs must be 'ones' or 'random', got '{other}'")),
            }
        }
        ("sweep", "N") => cfg.sieve_n = Some(parse_u64(value)?),
        ("sweep", "r_min") => cfg.sieve_r_min = parse_u64(value)?,
        ("sweep", "r_max") => cfg.sieve_r_max = Some(parse_u64(value)?),
        ("sweep", "z_points") => cfg.z_points = parse_u64(value)?.max(1) as u32,
        ("sweep", "eta") => cfg.eta = parse_f64(value)?,
        ("grid", k) => {
            if !cfg.subject.grid_keys().contains(&k) {
                return Err(format!(
                    "grid key '{k}' not used by subject '{}' (expected {:?})",
                    cfg.subject.name(),
                    cfg.subject.grid_keys()
                ));
            }
            cfg.grid.insert(k.to_string(), parse_grid_values(value)?);
        }
        ("caps", "brute_mass") => cfg.caps.brute_mass = positive(parse_u64(value)?)? as u128,
        ("caps", "max_cells") => cfg.caps.max_cells = positive(parse_u64(value)?)?,
        ("caps", "max_r") => cfg.caps.max_r = positive(parse_u64(value)?)?,
        ("caps", "sieve_q2") => cfg.caps.sieve_q_squared = positive(parse_u64(value)?)?,
        ("caps", "sieve_n") => cfg.caps.sieve_n = positive(parse_u64(value)?)?,
        (s, k) => return Err(format!("unknown key '{k}' in section [{s}]")),
    }
    Ok(())
}

fn positive(v: u64) -> Result<u64, String> {
    if v == 0 {
        Err("caps must be positive".into())
    } else {
        Ok(v)
    }
}

fn parse_bool(v: &str) -> Result<bool, String> {
    match v {
        "true" => Ok(true),
        "false" => Ok(false),
        other => Err(format!("expected true/false, got '{other}'")),
    }
}
