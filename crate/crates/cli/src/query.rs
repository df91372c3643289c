//! Normalized queries and their canonical string form, which doubles as the
//! cache key of the query's value.

use std::fmt;

use conic_floors::absolute::x6::X6Structure;
use conic_floors::absolute::x7::X7Structure;
use conic_floors::absolute::x8::X8Structure;
use conic_floors::homology::{format_class_literal, parse_class_literal};
use conic_floors::relative_real::Variant;
use conic_floors::{Error, MultiSeq, Result};

/// The computations offered on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    GwRel,
    Fw,
    GwX6,
    WX6,
    GwX7,
    WX7,
    GwX8,
    WX8,
    Diagrams,
}

impl Command {
    pub const ALL: [Command; 9] = [
        Command::GwRel,
        Command::Fw,
        Command::GwX6,
        Command::WX6,
        Command::GwX7,
        Command::WX7,
        Command::GwX8,
        Command::WX8,
        Command::Diagrams,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::GwRel => "gw-rel",
            Command::Fw => "fw",
            Command::GwX6 => "gw-x6",
            Command::WX6 => "w-x6",
            Command::GwX7 => "gw-x7",
            Command::WX7 => "w-x7",
            Command::GwX8 => "gw-x8",
            Command::WX8 => "w-x8",
            Command::Diagrams => "diagrams",
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == text)
            .ok_or_else(|| Error::Parse(format!("unknown command {text:?}")))
    }

    /// Number of exceptional coefficients of classes of the absolute surfaces.
    fn surface_points(self) -> Option<usize> {
        match self {
            Command::GwX6 | Command::WX6 => Some(6),
            Command::GwX7 | Command::WX7 => Some(7),
            Command::GwX8 | Command::WX8 => Some(8),
            _ => None,
        }
    }

    /// The real structures of the `w-*` commands.
    fn parse_structure(self, text: &str) -> Result<String> {
        Ok(match self {
            Command::WX6 => X6Structure::parse(text)?.name(),
            Command::WX7 => X7Structure::parse(text)?.name(),
            Command::WX8 => X8Structure::parse(text)?.name(),
            _ => return Err(Error::Parse(format!("{} takes no structure", self.name()))),
        })
    }
}

/// Tangency profiles `α`, `β` of the complex relative invariants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tangency {
    pub alpha: MultiSeq,
    pub beta: MultiSeq,
}

/// Real tangency profiles of the numbers `FW`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealTangency {
    pub alpha_re: MultiSeq,
    pub beta_re: MultiSeq,
    pub alpha_im: MultiSeq,
    pub beta_im: MultiSeq,
}

/// A fully normalized query: every field relevant to the command is set, and no
/// other.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuerySpec {
    pub command: Command,
    pub dd: i64,
    pub mu: Vec<i64>,
    pub genus: Option<i64>,
    pub s: Option<usize>,
    pub kappa: Option<usize>,
    pub variant: Option<Variant>,
    pub structure: Option<String>,
    pub tangency: Option<Tangency>,
    pub real_tangency: Option<RealTangency>,
    /// Digest of the provider table the value depends on (`gw-x8`, `w-x8`).
    pub provider: Option<String>,
}

/// Raw flag values, before normalization.
#[derive(Debug, Clone, Default)]
pub struct RawQuery {
    pub n: Option<usize>,
    pub kappa: Option<usize>,
    pub epsilon: Option<u8>,
    pub structure: Option<String>,
    pub class: Option<String>,
    pub genus: Option<i64>,
    pub s: Option<usize>,
    pub alpha: Option<String>,
    pub beta: Option<String>,
    pub alpha_re: Option<String>,
    pub beta_re: Option<String>,
    pub alpha_im: Option<String>,
    pub beta_im: Option<String>,
    pub variant: Option<String>,
    pub provider: Option<String>,
}

fn seq(text: &Option<String>) -> Result<MultiSeq> {
    text.as_deref().map(MultiSeq::parse).unwrap_or_else(|| Ok(MultiSeq::zero()))
}

fn seq_literal(s: &MultiSeq) -> String {
    if s.is_zero() {
        "0".into()
    } else {
        s.literal()
    }
}

fn parse_variant(text: &str, epsilon: Option<u8>) -> Result<Variant> {
    let eps = || epsilon.ok_or_else(|| Error::Parse(format!("variant {text} needs --epsilon")));
    match text {
        "plain" => Ok(Variant::Plain),
        "sided" => Ok(Variant::Sided(eps()?)),
        "sidedsided" => Ok(Variant::SidedSided(eps()?)),
        _ => {
            // canonical names `sided0`, `sidedsided1`, ...
            for (head, make) in [("sidedsided", Variant::SidedSided as fn(u8) -> Variant), ("sided", Variant::Sided)] {
                if let Some(e) = text.strip_prefix(head).and_then(|e| e.parse::<u8>().ok()) {
                    return Ok(make(e));
                }
            }
            Err(Error::Parse(format!("unknown variant {text:?} (plain, sided, sidedsided)")))
        }
    }
}

impl RawQuery {
    /// Normalize for `command`; flags the command does not use are rejected.
    pub fn normalize(&self, command: Command) -> Result<QuerySpec> {
        let mut used: Vec<&str> = vec!["class"];
        let class = self.class.as_deref().ok_or_else(|| Error::Parse("--class is required".into()))?;
        let (dd, mut mu) = parse_class_literal(class)?;
        let mut spec = QuerySpec {
            command,
            dd,
            mu: Vec::new(),
            genus: None,
            s: None,
            kappa: None,
            variant: None,
            structure: None,
            tangency: None,
            real_tangency: None,
            provider: None,
        };
        match command.surface_points() {
            Some(n) => {
                if mu.len() != n {
                    return Err(Error::Parse(format!(
                        "classes of X_{n} have {n} exceptional coefficients, got {}",
                        mu.len()
                    )));
                }
            }
            None => {
                used.push("n");
                let n = self.n.unwrap_or(mu.len());
                if mu.len() > n {
                    return Err(Error::Parse(format!("the class has {} coefficients but --n is {n}", mu.len())));
                }
                mu.resize(n, 0);
            }
        }
        spec.mu = mu;
        match command {
            Command::GwRel | Command::Diagrams => {
                used.extend(["genus", "alpha", "beta"]);
                spec.genus = Some(self.genus.unwrap_or(0));
                spec.tangency = Some(Tangency { alpha: seq(&self.alpha)?, beta: seq(&self.beta)? });
            }
            Command::Fw => {
                used.extend(["kappa", "s", "alpha-re", "beta-re", "alpha-im", "beta-im", "variant"]);
                spec.kappa = Some(self.kappa.unwrap_or(0));
                spec.s = Some(self.s.unwrap_or(0));
                let variant = self.variant.as_deref().unwrap_or("plain");
                if variant != "plain" {
                    used.push("epsilon");
                }
                spec.variant = Some(parse_variant(variant, self.epsilon)?);
                spec.real_tangency = Some(RealTangency {
                    alpha_re: seq(&self.alpha_re)?,
                    beta_re: seq(&self.beta_re)?,
                    alpha_im: seq(&self.alpha_im)?,
                    beta_im: seq(&self.beta_im)?,
                });
            }
            Command::GwX6 | Command::GwX7 | Command::GwX8 => {
                used.push("genus");
                spec.genus = Some(self.genus.unwrap_or(0));
            }
            Command::WX6 | Command::WX7 | Command::WX8 => {
                used.extend(["structure", "s"]);
                spec.s = Some(self.s.unwrap_or(0));
                let raw = self.structure.as_deref().ok_or_else(|| Error::Parse("--structure is required".into()))?;
                // `--structure kappa --kappa 2` is `--structure kappa=2`, and
                // `--structure plus-total --epsilon 1` is `--structure plus-total=1`
                let text = if raw.contains('=') {
                    raw.to_string()
                } else if raw.starts_with("kappa") && self.kappa.is_some() {
                    used.push("kappa");
                    format!("{raw}={}", self.kappa.unwrap())
                } else if let Some(e) = self.epsilon {
                    used.push("epsilon");
                    format!("{raw}={e}")
                } else {
                    raw.to_string()
                };
                spec.structure = Some(command.parse_structure(&text)?);
            }
        }
        if matches!(command, Command::GwX8 | Command::WX8) {
            used.push("provider");
            spec.provider = Some(self.provider.clone().unwrap_or_else(|| "none".into()));
        }
        let given = [
            ("n", self.n.is_some()),
            ("kappa", self.kappa.is_some()),
            ("epsilon", self.epsilon.is_some()),
            ("structure", self.structure.is_some()),
            ("genus", self.genus.is_some()),
            ("s", self.s.is_some()),
            ("alpha", self.alpha.is_some()),
            ("beta", self.beta.is_some()),
            ("alpha-re", self.alpha_re.is_some()),
            ("beta-re", self.beta_re.is_some()),
            ("alpha-im", self.alpha_im.is_some()),
            ("beta-im", self.beta_im.is_some()),
            ("variant", self.variant.is_some()),
        ];
        for (flag, present) in given {
            if present && !used.contains(&flag) {
                return Err(Error::Parse(format!("--{flag} is not used by {}", command.name())));
            }
        }
        Ok(spec)
    }
}

impl fmt::Display for QuerySpec {
    /// `command field=value …` with the fields in a fixed order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.command.name())?;
        if self.command.surface_points().is_none() {
            write!(f, " n={}", self.mu.len())?;
        }
        write!(f, " class={}", format_class_literal(self.dd, &self.mu))?;
        if let Some(g) = self.genus {
            write!(f, " genus={g}")?;
        }
        if let Some(k) = self.kappa {
            write!(f, " kappa={k}")?;
        }
        if let Some(s) = self.s {
            write!(f, " s={s}")?;
        }
        if let Some(st) = &self.structure {
            write!(f, " structure={st}")?;
        }
        if let Some(v) = self.variant {
            write!(f, " variant={}", v.name())?;
        }
        if let Some(t) = &self.tangency {
            write!(f, " alpha={} beta={}", seq_literal(&t.alpha), seq_literal(&t.beta))?;
        }
        if let Some(t) = &self.real_tangency {
            write!(
                f,
                " alpha-re={} beta-re={} alpha-im={} beta-im={}",
                seq_literal(&t.alpha_re),
                seq_literal(&t.beta_re),
                seq_literal(&t.alpha_im),
                seq_literal(&t.beta_im)
            )?;
        }
        if let Some(p) = &self.provider {
            write!(f, " provider={p}")?;
        }
        Ok(())
    }
}

impl QuerySpec {
    /// Parse the canonical form written by `Display`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut words = text.split_whitespace();
        let command = Command::parse(words.next().unwrap_or_default())?;
        let mut raw = RawQuery::default();
        let mut variant = None;
        for word in words {
            let (key, value) =
                word.split_once('=').ok_or_else(|| Error::Parse(format!("expected key=value, got {word:?}")))?;
            let value = value.to_string();
            let number = |v: &str| v.parse::<i64>().map_err(|_| Error::Parse(format!("bad number in {word:?}")));
            match key {
                "n" => raw.n = Some(number(&value)? as usize),
                "class" => raw.class = Some(value),
                "genus" => raw.genus = Some(number(&value)?),
                "kappa" => raw.kappa = Some(number(&value)? as usize),
                "s" => raw.s = Some(number(&value)? as usize),
                "structure" => raw.structure = Some(value),
                "variant" => variant = Some(value),
                "alpha" => raw.alpha = Some(value),
                "beta" => raw.beta = Some(value),
                "alpha-re" => raw.alpha_re = Some(value),
                "beta-re" => raw.beta_re = Some(value),
                "alpha-im" => raw.alpha_im = Some(value),
                "beta-im" => raw.beta_im = Some(value),
                "provider" => raw.provider = Some(value),
                _ => return Err(Error::Parse(format!("unknown field {key:?}"))),
            }
        }
        if let Some(v) = variant {
            let parsed = parse_variant(&v, None)?;
            match parsed {
                Variant::Plain => raw.variant = Some("plain".into()),
                Variant::Sided(e) | Variant::SidedSided(e) => {
                    raw.variant = Some(if matches!(parsed, Variant::Sided(_)) { "sided" } else { "sidedsided" }.into());
                    raw.epsilon = Some(e);
                }
            }
        }
        raw.normalize(command)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(command: Command, raw: RawQuery) -> QuerySpec {
        raw.normalize(command).unwrap()
    }

    fn class(text: &str) -> Option<String> {
        Some(text.to_string())
    }

    #[test]
    fn canonical_strings_round_trip() {
        let specs = vec![
            spec(
                Command::GwRel,
                RawQuery { n: Some(6), class: class("4:1,1,1,1,1,1"), beta: Some("1^2".into()), ..Default::default() },
            ),
            spec(
                Command::Fw,
                RawQuery {
                    class: class("4:1,1,1,1,1,1,1,1"),
                    kappa: Some(4),
                    s: Some(1),
                    variant: Some("sidedsided".into()),
                    epsilon: Some(1),
                    beta_im: Some("1^1,2^1".into()),
                    ..Default::default()
                },
            ),
            spec(
                Command::WX6,
                RawQuery { class: class("6:2,2,2,2,2,2"), structure: Some("kappa=0".into()), ..Default::default() },
            ),
            spec(
                Command::WX7,
                RawQuery { class: class("6:2,2,2,2,2,2,2"), structure: Some("minus-rp2".into()), s: Some(1), ..Default::default() },
            ),
            spec(
                Command::GwX8,
                RawQuery { class: class("6:2,2,2,2,2,2,2,2"), genus: Some(1), provider: Some("abc".into()), ..Default::default() },
            ),
            spec(Command::Diagrams, RawQuery { class: class("3:"), genus: Some(1), beta: Some("1^6".into()), ..Default::default() }),
        ];
        for s in specs {
            let text = s.to_string();
            assert_eq!(QuerySpec::parse(&text).unwrap(), s, "{text}");
            assert_eq!(QuerySpec::parse(&text).unwrap().to_string(), text);
        }
    }

    #[test]
    fn shorthand_structures_are_normalized() {
        let a = spec(
            Command::WX7,
            RawQuery { class: class("6:2,2,2,2,2,2,2"), structure: Some("kappa".into()), kappa: Some(2), ..Default::default() },
        );
        let b = spec(
            Command::WX7,
            RawQuery { class: class("6:2,2,2,2,2,2,2"), structure: Some("kappa=2".into()), ..Default::default() },
        );
        assert_eq!(a, b);
        let c = spec(
            Command::WX8,
            RawQuery { class: class("6:2,2,2,2,2,2,2,2"), structure: Some("plus-l".into()), epsilon: Some(1), ..Default::default() },
        );
        assert_eq!(c.structure.as_deref(), Some("plus-l=1"));
    }

    #[test]
    fn unused_flags_are_rejected() {
        let raw = RawQuery { class: class("6:2,2,2,2,2,2"), kappa: Some(1), ..Default::default() };
        assert!(matches!(raw.normalize(Command::GwX6), Err(Error::Parse(_))));
        let raw = RawQuery { class: class("2:"), n: Some(2), ..Default::default() };
        assert!(matches!(raw.normalize(Command::GwX7), Err(Error::Parse(_))));
    }

    #[test]
    fn short_classes_are_padded_to_n() {
        let s = spec(Command::GwRel, RawQuery { n: Some(3), class: class("2:1"), ..Default::default() });
        assert_eq!(s.mu, vec![1, 0, 0]);
        let raw = RawQuery { n: Some(1), class: class("2:1,1"), ..Default::default() };
        assert!(raw.normalize(Command::GwRel).is_err());
    }
}
