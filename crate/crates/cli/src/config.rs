//! Flat `key = value` run configuration.
//!
//! A config file and command-line flags feed the same key space; flags are
//! applied after the file. Every key is validated by [`RunConfig::from_map`]
//! before anything is computed.

use std::collections::BTreeMap;
use std::path::PathBuf;

use symsq_core::dirichlet::DirichletCharacter;
use symsq_core::exact::{is_prime_u64, is_squarefree, QuadraticNumber};
use symsq_core::modforms::SUPPORTED_WEIGHTS;
use symsq_core::padic::PadicEmbedding;

use crate::charspec::{self, CharEcho};
use crate::CliError;

/// Defaults, in the order they are echoed.
pub const DEFAULTS: [(&str, &str); 16] = [
    ("weight", "16"),
    ("level", "1"),
    ("form", ""),
    ("char", ""),
    ("char_gen", ""),
    ("field_d", "-3"),
    ("primes", "37:5,-2; 67:8,1; 439:14,9"),
    ("s", "22"),
    ("digits", "18"),
    ("padic_k", "12"),
    ("method", "both"),
    ("n_max", "10000"),
    ("l_max", "10000"),
    ("congruence", "3617"),
    ("exceptional", "2,3,5,7,11,31,59,3617"),
    ("out", ""),
];

const DEFAULT_CHAR: &str = "7.2";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Direct,
    Afe,
    Both,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Direct => "direct",
            Method::Afe => "afe",
            Method::Both => "both",
        }
    }

    pub fn direct(self) -> bool {
        self != Method::Afe
    }

    pub fn afe(self) -> bool {
        self != Method::Direct
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FormSpec {
    Builtin { weight: u32 },
    File { path: PathBuf, weight: u32, level: u64 },
}

impl FormSpec {
    pub fn weight(&self) -> u32 {
        match self {
            FormSpec::Builtin { weight } | FormSpec::File { weight, .. } => *weight,
        }
    }

    pub fn level(&self) -> u64 {
        match self {
            FormSpec::Builtin { .. } => 1,
            FormSpec::File { level, .. } => *level,
        }
    }
}

/// A prime `p` with the generator `a + b sqrt(d)` of a degree one prime above it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeSpec {
    pub p: u64,
    pub a: i64,
    pub b: i64,
}

impl PrimeSpec {
    pub fn generator(&self, d: i64) -> QuadraticNumber {
        QuadraticNumber::from_ints(d, self.a, self.b)
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub form: FormSpec,
    pub psi: DirichletCharacter,
    pub char_echo: CharEcho,
    pub field_d: i64,
    pub primes: Vec<PrimeSpec>,
    pub s: i64,
    pub digits: u32,
    pub padic_k: u32,
    pub method: Method,
    pub n_max: usize,
    pub l_max: u64,
    pub congruence: u64,
    pub exceptional: Vec<u64>,
    pub out: Option<PathBuf>,
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected key = value", i + 1)))?;
        let key = k.trim().replace('-', "_");
        if !DEFAULTS.iter().any(|(d, _)| *d == key) {
            return Err(CliError::Usage(format!("config line {}: unknown key {:?}", i + 1, key)));
        }
        map.insert(key, v.trim().to_string());
    }
    Ok(map)
}

fn num<T: std::str::FromStr>(map: &BTreeMap<String, String>, key: &str) -> Result<T, CliError> {
    let v = &map[key];
    v.trim().parse().map_err(|_| CliError::Usage(format!("{}: cannot parse {:?}", key, v)))
}

fn in_range<T: PartialOrd + std::fmt::Display>(key: &str, v: T, lo: T, hi: T) -> Result<T, CliError> {
    if v < lo || v > hi {
        return Err(CliError::Usage(format!("{} = {} outside [{}, {}]", key, v, lo, hi)));
    }
    Ok(v)
}

pub fn parse_primes(text: &str) -> Result<Vec<PrimeSpec>, CliError> {
    let mut out = Vec::new();
    for item in text.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        let bad = || CliError::Usage(format!("primes: expected p:a,b, found {:?}", item));
        let (p, g) = item.split_once(':').ok_or_else(bad)?;
        let (a, b) = g.split_once(',').ok_or_else(bad)?;
        let p: u64 = p.trim().parse().map_err(|_| bad())?;
        let a: i64 = a.trim().parse().map_err(|_| bad())?;
        let b: i64 = b.trim().parse().map_err(|_| bad())?;
        out.push(PrimeSpec { p, a, b });
    }
    Ok(out)
}

fn parse_u64_list(key: &str, text: &str) -> Result<Vec<u64>, CliError> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| CliError::Usage(format!("{}: bad entry {:?}", key, s))))
        .collect()
}

impl RunConfig {
    /// Merges `file` and `flags` over the defaults and validates.
    pub fn build(file: &BTreeMap<String, String>, flags: &BTreeMap<String, String>) -> Result<RunConfig, CliError> {
        let mut map: BTreeMap<String, String> = DEFAULTS.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        for (k, v) in file.iter().chain(flags.iter()) {
            if !map.contains_key(k) {
                return Err(CliError::Usage(format!("unknown key {:?}", k)));
            }
            map.insert(k.clone(), v.clone());
        }
        Self::from_map(&map)
    }

    pub fn from_map(map: &BTreeMap<String, String>) -> Result<RunConfig, CliError> {
        let weight = in_range("weight", num::<u32>(map, "weight")?, 2, 200)?;
        let level = in_range("level", num::<u64>(map, "level")?, 1, 1_000_000)?;
        let form = if map["form"].is_empty() {
            if level != 1 || !SUPPORTED_WEIGHTS.contains(&weight) {
                return Err(CliError::Usage(format!(
                    "no built-in eigenform of weight {} and level {}; built-in level 1 weights are {:?}",
                    weight, level, SUPPORTED_WEIGHTS
                )));
            }
            FormSpec::Builtin { weight }
        } else {
            FormSpec::File { path: PathBuf::from(&map["form"]), weight, level }
        };
        let (psi, char_echo) = match (map["char"].as_str(), map["char_gen"].as_str()) {
            ("", "") => charspec::from_label(DEFAULT_CHAR)?,
            (label, "") => charspec::from_label(label)?,
            ("", gen) => charspec::from_gen(gen)?,
            (label, gen) => {
                let (a, e) = charspec::from_label(label)?;
                let (b, _) = charspec::from_gen(gen)?;
                if a != b {
                    return Err(CliError::Usage(format!("char {} and char_gen {} describe different characters", label, gen)));
                }
                (a, e)
            }
        };
        let field_d: i64 = num(map, "field_d")?;
        if field_d == 0 || field_d == 1 || !is_squarefree(field_d) {
            return Err(CliError::Usage(format!("field_d = {} is not a squarefree integer other than 0, 1", field_d)));
        }
        let primes = parse_primes(&map["primes"])?;
        for ps in &primes {
            if !is_prime_u64(ps.p) {
                return Err(CliError::Usage(format!("primes: {} is not prime", ps.p)));
            }
            if psi.modulus() % ps.p == 0 {
                return Err(CliError::Usage(format!("primes: {} divides the character modulus", ps.p)));
            }
            let emb = PadicEmbedding::from_generator(&ps.generator(field_d), 1)
                .map_err(|e| CliError::Usage(format!("primes: generator {}+{}*sqrt({}): {}", ps.a, ps.b, field_d, e)))?;
            if emb.p() != ps.p {
                return Err(CliError::Usage(format!(
                    "primes: {}+{}*sqrt({}) generates a prime above {}, not {}",
                    ps.a,
                    ps.b,
                    field_d,
                    emb.p(),
                    ps.p
                )));
            }
        }
        let s: i64 = in_range("s", num(map, "s")?, -10_000, 10_000)?;
        let digits = in_range("digits", num(map, "digits")?, 1, 300)?;
        let padic_k = in_range("padic_k", num(map, "padic_k")?, 1, 400)?;
        let method = match map["method"].as_str() {
            "direct" => Method::Direct,
            "afe" => Method::Afe,
            "both" => Method::Both,
            m => return Err(CliError::Usage(format!("method must be direct, afe or both, not {:?}", m))),
        };
        let n_max = in_range("n_max", num(map, "n_max")?, 10, 2_000_000)?;
        let l_max = in_range("l_max", num(map, "l_max")?, 2, 2_000_000)?;
        let congruence = in_range("congruence", num(map, "congruence")?, 1, u64::MAX)?;
        let exceptional = parse_u64_list("exceptional", &map["exceptional"])?;
        let out = if map["out"].is_empty() { None } else { Some(PathBuf::from(&map["out"])) };
        Ok(RunConfig {
            form,
            psi,
            char_echo,
            field_d,
            primes,
            s,
            digits,
            padic_k,
            method,
            n_max,
            l_max,
            congruence,
            exceptional,
            out,
        })
    }

    /// Normalized key/value echo for reports.
    pub fn echo(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        let mut put = |k: &str, v: String| {
            m.insert(k.to_string(), v);
        };
        put("weight", self.form.weight().to_string());
        put("level", self.form.level().to_string());
        put(
            "form",
            match &self.form {
                FormSpec::Builtin { .. } => String::from("builtin"),
                FormSpec::File { path, .. } => path.display().to_string(),
            },
        );
        put("char", self.char_echo.label.clone());
        put("char_gen", self.char_echo.generators.clone());
        put("field_d", self.field_d.to_string());
        put(
            "primes",
            self.primes.iter().map(|p| format!("{}:{},{}", p.p, p.a, p.b)).collect::<Vec<_>>().join("; "),
        );
        put("s", self.s.to_string());
        put("digits", self.digits.to_string());
        put("padic_k", self.padic_k.to_string());
        put("method", self.method.name().to_string());
        put("n_max", self.n_max.to_string());
        put("l_max", self.l_max.to_string());
        put("congruence", self.congruence.to_string());
        put("exceptional", self.exceptional.iter().map(u64::to_string).collect::<Vec<_>>().join(","));
        m
    }

    /// The configuration all built-in fixtures were taken from.
    pub fn is_reference_setup(&self) -> bool {
        self.form == FormSpec::Builtin { weight: 16 } && self.psi.label() == DEFAULT_CHAR && self.field_d == -3
    }
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig::build(&BTreeMap::new(), &BTreeMap::new()).expect("defaults are valid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flags(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
        pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
    }

    #[test]
    fn defaults() {
        let c = RunConfig::default();
        assert!(c.is_reference_setup());
        assert_eq!(c.primes.len(), 3);
        assert_eq!(c.char_echo.generators, "7:3=zeta3");
    }

    #[test]
    fn flags_override_file() {
        let file = parse_config_text("digits = 30\n# comment\npadic_k = 5 # trailing\n").unwrap();
        let c = RunConfig::build(&file, &flags(&[("digits", "20")])).unwrap();
        assert_eq!(c.digits, 20);
        assert_eq!(c.padic_k, 5);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_config_text("colour = red").is_err());
        assert!(RunConfig::build(&BTreeMap::new(), &flags(&[("weight", "14")])).is_err());
        assert!(RunConfig::build(&BTreeMap::new(), &flags(&[("primes", "37:8,1")])).is_err());
        assert!(RunConfig::build(&BTreeMap::new(), &flags(&[("primes", "7:2,1")])).is_err());
        assert!(RunConfig::build(&BTreeMap::new(), &flags(&[("method", "fast")])).is_err());
        assert!(RunConfig::build(&BTreeMap::new(), &flags(&[("char", "7.2"), ("char_gen", "7:3=zeta3^2")])).is_err());
        assert!(RunConfig::build(&BTreeMap::new(), &flags(&[("char", "7.2"), ("char_gen", "7:3=zeta3")])).is_ok());
    }
}
