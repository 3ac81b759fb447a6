use std::str::FromStr;

use hakdyn::cantor::{Adjacency, CantorSystem};
use hakdyn::num::parse_rational;
use hakdyn::{AnnulusMap, Stage};
use ini::Ini;

use crate::error::{config, CliError, CliResult};
use crate::fixtures;

const SECTIONS: &[(&str, &[&str])] = &[
    ("map", &["map", "pipeline", "label", "breakpoints"]),
    ("cantor", &["kind", "k", "adjacency", "rules", "bases", "radius", "label"]),
    ("stage", &["eps", "band", "rot", "rotation", "alpha", "q", "support"]),
    ("stages", &["eps", "band", "rot", "rotation", "alpha", "q", "support"]),
    ("chain", &["links"]),
    (
        "experiment",
        &[
            "seed", "eps", "n", "budget", "horizon", "grid", "out", "t", "r", "band", "tail", "bits", "word", "alpha",
            "u", "v", "v_shift", "radius", "cloud", "k_max", "s_max", "p_max",
        ],
    ),
];

/// Parsed INI run configuration with command-line overrides applied.
pub struct RunConfig {
    ini: Ini,
    source: String,
}

/// Reads a path, or an embedded fixture given as `fixture:<name>`.
pub fn read_source(src: &str) -> CliResult<String> {
    match src.strip_prefix("fixture:") {
        Some(name) => fixtures::get(name)
            .map(str::to_string)
            .ok_or_else(|| config(format!("unknown fixture `{name}` (see --list-fixtures)"))),
        None => std::fs::read_to_string(src).map_err(|source| CliError::Io { path: src.to_string(), source }),
    }
}

impl RunConfig {
    pub fn empty() -> Self {
        Self { ini: Ini::new(), source: "<flags>".into() }
    }

    pub fn load(src: &str) -> CliResult<Self> {
        Self::parse(&read_source(src)?, src)
    }

    pub fn parse(text: &str, source: &str) -> CliResult<Self> {
        let ini = Ini::load_from_str(text).map_err(|e| config(format!("{source}: {e}")))?;
        for (name, props) in ini.iter() {
            let Some(name) = name else {
                if let Some((key, _)) = props.iter().next() {
                    return Err(config(format!("{source}: key `{key}` appears before any section")));
                }
                continue;
            };
            let Some((_, keys)) = SECTIONS.iter().find(|(s, _)| *s == name) else {
                return Err(config(format!("{source}: unknown section [{name}]")));
            };
            if let Some((key, _)) = props.iter().find(|(k, _)| !keys.contains(k)) {
                return Err(config(format!("{source}: unknown key `{key}` in [{name}]")));
            }
        }
        Ok(Self { ini, source: source.to_string() })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn set(&mut self, section: &str, key: &str, value: impl Into<String>) {
        self.ini.with_section(Some(section)).set(key, value.into());
    }

    pub fn has_section(&self, section: &str) -> bool {
        self.ini.section(Some(section)).is_some()
    }

    pub fn get(&self, section: &str, key: &str) -> Option<&str> {
        self.ini.section(Some(section)).and_then(|p| p.get(key)).map(str::trim)
    }

    pub fn require(&self, section: &str, key: &str) -> CliResult<&str> {
        self.get(section, key).ok_or_else(|| config(format!("{}: missing key `{key}` in [{section}]", self.source)))
    }

    pub fn value<T: FromStr>(&self, section: &str, key: &str) -> CliResult<Option<T>> {
        self.get(section, key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|_| config(format!("{}: key `{key}` in [{section}] has invalid value `{v}`", self.source)))
            })
            .transpose()
    }

    pub fn value_or<T: FromStr>(&self, section: &str, key: &str, default: T) -> CliResult<T> {
        Ok(self.value(section, key)?.unwrap_or(default))
    }

    /// Real number, also accepting `p/q`.
    pub fn real(&self, section: &str, key: &str) -> CliResult<Option<f64>> {
        self.get(section, key).map(|v| parse_real(v).ok_or_else(|| self.invalid(section, key, v))).transpose()
    }

    pub fn real_or(&self, section: &str, key: &str, default: f64) -> CliResult<f64> {
        Ok(self.real(section, key)?.unwrap_or(default))
    }

    pub fn reals(&self, section: &str, key: &str) -> CliResult<Option<Vec<f64>>> {
        self.get(section, key)
            .map(|v| {
                v.split(',')
                    .map(|x| parse_real(x).ok_or_else(|| self.invalid(section, key, v)))
                    .collect::<CliResult<Vec<f64>>>()
            })
            .transpose()
    }

    pub fn pair(&self, section: &str, key: &str) -> CliResult<Option<(f64, f64)>> {
        match self.reals(section, key)? {
            None => Ok(None),
            Some(v) if v.len() == 2 => Ok(Some((v[0], v[1]))),
            Some(_) => Err(config(format!("{}: key `{key}` in [{section}] must be `a,b`", self.source))),
        }
    }

    pub fn seed(&self) -> CliResult<u64> {
        self.value("experiment", "seed")?.ok_or_else(|| {
            config(format!("{}: missing key `seed` in [experiment] (required for sampled experiments)", self.source))
        })
    }

    fn invalid(&self, section: &str, key: &str, v: &str) -> CliError {
        config(format!("{}: key `{key}` in [{section}] has invalid value `{v}`", self.source))
    }

    pub fn map(&self) -> CliResult<AnnulusMap> {
        let key = if self.get("map", "pipeline").is_some() { "pipeline" } else { "map" };
        let text = self.require("map", key)?;
        let map = AnnulusMap::parse(text).map_err(|e| config(format!("{}: key `{key}` in [map]: {e}", self.source)))?;
        Ok(match self.get("map", "label") {
            Some(label) => map.with_label(label),
            None => map,
        })
    }

    pub fn cantor(&self) -> CliResult<CantorSystem> {
        let at = |key: &str, e: hakdyn::Error| config(format!("{}: key `{key}` in [cantor]: {e}", self.source));
        let kind = self.require("cantor", "kind")?;
        let sys = match kind {
            "fullshift" => {
                let k = self.value_or("cantor", "k", 2u32)?;
                CantorSystem::full_shift(k).map_err(|e| at("k", e))?
            }
            "sft" => {
                let adj = Adjacency::parse(self.require("cantor", "adjacency")?).map_err(|e| at("adjacency", e))?;
                CantorSystem::sft(adj).map_err(|e| at("adjacency", e))?
            }
            "substitution" => {
                let rules = CantorSystem::parse_rules(self.require("cantor", "rules")?).map_err(|e| at("rules", e))?;
                CantorSystem::substitution(rules).map_err(|e| at("rules", e))?
            }
            "odometer" => {
                let text = self.require("cantor", "bases")?;
                let bases = text
                    .split(',')
                    .map(|b| b.trim().parse::<u32>().map_err(|_| self.invalid("cantor", "bases", text)))
                    .collect::<CliResult<Vec<u32>>>()?;
                CantorSystem::odometer(bases).map_err(|e| at("bases", e))?
            }
            other => {
                return Err(config(format!(
                    "{}: key `kind` in [cantor] must be fullshift, sft, substitution or odometer, got `{other}`",
                    self.source
                )))
            }
        };
        Ok(match self.get("cantor", "label") {
            Some(label) => sys.with_label(label),
            None => sys,
        })
    }

    pub fn radius(&self) -> CliResult<usize> {
        self.value_or("cantor", "radius", hakdyn::cantor::DEFAULT_RADIUS)
    }

    pub fn stages(&self) -> CliResult<Vec<Stage>> {
        let mut out = Vec::new();
        let sections = self.ini.iter().filter(|(name, _)| matches!(*name, Some("stage" | "stages")));
        for (i, (_, props)) in sections.enumerate() {
            let n = i + 1;
            let key = |k: &str| {
                props
                    .get(k)
                    .map(str::trim)
                    .ok_or_else(|| config(format!("{}: missing key `{k}` in [stage] #{n}", self.source)))
            };
            let bad = |k: &str, v: &str| {
                config(format!("{}: key `{k}` in [stage] #{n} has invalid value `{v}`", self.source))
            };
            let real = |k: &str| -> CliResult<f64> {
                let v = key(k)?;
                parse_real(v).ok_or_else(|| bad(k, v))
            };
            let pair = |k: &str, v: &str| -> CliResult<(f64, f64)> {
                let parts: Vec<Option<f64>> = v.split(',').map(parse_real).collect();
                match parts.as_slice() {
                    [Some(a), Some(b)] => Ok((*a, *b)),
                    _ => Err(bad(k, v)),
                }
            };
            let eps = real("eps")?;
            let band = pair("band", key("band")?)?;
            let rot_key = if props.contains_key("rot") { "rot" } else { "rotation" };
            let rot_text = key(rot_key)?;
            let rot = parse_rational(rot_text)
                .filter(|q| *q.numer() >= 0 && *q.denom() > 0)
                .ok_or_else(|| bad(rot_key, rot_text))?;
            let (num, den) = match rot_text.split_once('/') {
                Some((a, b)) => (
                    a.trim().parse::<u64>().map_err(|_| bad(rot_key, rot_text))?,
                    b.trim().parse::<u64>().map_err(|_| bad(rot_key, rot_text))?,
                ),
                None => (*rot.numer() as u64, *rot.denom() as u64),
            };
            let alpha = match props.get("alpha") {
                Some(v) => parse_real(v).ok_or_else(|| bad("alpha", v))?,
                None => 1.0 / den as f64,
            };
            let q = match props.get("q") {
                Some(v) => v.trim().parse::<u64>().map_err(|_| bad("q", v))?,
                None => den,
            };
            let mut stage = Stage::new(eps, band, (num, den), alpha, q);
            if let Some(v) = props.get("support") {
                stage.support = Some(pair("support", v)?);
            }
            out.push(stage);
        }
        if out.is_empty() {
            return Err(config(format!("{}: no [stage] sections", self.source)));
        }
        Ok(out)
    }
}

pub fn parse_real(text: &str) -> Option<f64> {
    let t = text.trim();
    t.parse::<f64>().ok().filter(|x| x.is_finite()).or_else(|| {
        let q = parse_rational(t)?;
        Some(*q.numer() as f64 / *q.denom() as f64)
    })
}
