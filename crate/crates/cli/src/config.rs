//! Scenario config files: flat `key = value` lines with one `[section]` per
//! intermediate observer.
//!
//! ```text
//! # lines starting with # are comments
//! scenario = unilateral        # or bilateral
//! strategy = weak              # or ppm; default kind for every observer
//! theta    = pi/4              # radians or pi/4, pi/6, pi/12
//!
//! [A1]                         # intermediate observer on side A
//! kind  = weak                 # optional override of the top-level strategy
//! gain1 = 0.8                  # setting 1 (Z basis)
//! gain2 = 0.8                  # setting 2 (X basis)
//!
//! [B1]                         # bilateral scenarios only
//! gain1 = 0.8
//! gain2 = 0.8
//! ```
//!
//! Unknown keys and unknown sections are hard errors.

use entshare::quantum::{Basis, MeasurementStrategy, Side, StrategyKind};
use entshare::scenario::{ObserverSpec, Role, ScenarioConfig, ScenarioTag};

use crate::parse::{parse_angle, ParseResult};

#[derive(Clone, Copy, Debug, Default)]
struct ObserverEntry {
    kind: Option<StrategyKind>,
    gain1: Option<f64>,
    gain2: Option<f64>,
}

fn parse_kind(s: &str) -> ParseResult<StrategyKind> {
    match s {
        "weak" => Ok(StrategyKind::Weak),
        "ppm" => Ok(StrategyKind::Ppm),
        _ => Err(format!("invalid kind '{s}' (weak | ppm)")),
    }
}

pub fn load_scenario(text: &str) -> ParseResult<ScenarioConfig> {
    let mut scenario: Option<ScenarioTag> = None;
    let mut strategy: Option<StrategyKind> = None;
    let mut theta: Option<f64> = None;
    let mut a1 = ObserverEntry::default();
    let mut b1 = ObserverEntry::default();
    let mut section: Option<&str> = None;

    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| format!("line {}: {msg}", lineno + 1);
        if let Some(name) = line.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| err("unterminated section header".into()))?
                .trim();
            section = match name {
                "A1" => Some("A1"),
                "B1" => Some("B1"),
                _ => return Err(err(format!("unknown section '[{name}]'"))),
            };
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(format!("expected 'key = value', got '{line}'")))?;
        let key = key.trim();
        let value = value.trim();
        match section {
            None => match key {
                "scenario" => scenario = Some(crate::parse::parse_scenario(value).map_err(err)?),
                "strategy" => strategy = Some(parse_kind(value).map_err(err)?),
                "theta" => theta = Some(parse_angle(value).map_err(err)?),
                _ => return Err(err(format!("unknown key '{key}'"))),
            },
            Some(obs) => {
                let entry = if obs == "A1" { &mut a1 } else { &mut b1 };
                match key {
                    "kind" => entry.kind = Some(parse_kind(value).map_err(err)?),
                    "gain1" => {
                        entry.gain1 = Some(
                            value
                                .parse()
                                .map_err(|_| err(format!("invalid gain '{value}'")))?,
                        )
                    }
                    "gain2" => {
                        entry.gain2 = Some(
                            value
                                .parse()
                                .map_err(|_| err(format!("invalid gain '{value}'")))?,
                        )
                    }
                    _ => return Err(err(format!("unknown key '{key}' in [{obs}]"))),
                }
            }
        }
    }

    let scenario = scenario.ok_or("missing 'scenario'")?;
    let theta = theta.ok_or("missing 'theta'")?;
    let observer = |side: Side, entry: &ObserverEntry, name: &str| -> ParseResult<ObserverSpec> {
        let kind = entry.kind.or(strategy).ok_or(format!(
            "no strategy for [{name}] (set 'strategy' or 'kind')"
        ))?;
        let g1 = entry.gain1.ok_or(format!("missing gain1 in [{name}]"))?;
        let g2 = entry.gain2.ok_or(format!("missing gain2 in [{name}]"))?;
        Ok(ObserverSpec {
            side,
            index: 1,
            role: Role::Intermediate,
            settings: [
                MeasurementStrategy::new(kind, Basis::Z, g1).map_err(|e| e.to_string())?,
                MeasurementStrategy::new(kind, Basis::X, g2).map_err(|e| e.to_string())?,
            ],
        })
    };

    let final_obs = |side: Side, index: usize| ObserverSpec {
        side,
        index,
        role: Role::Final,
        settings: [
            MeasurementStrategy::projective(Basis::Z),
            MeasurementStrategy::projective(Basis::X),
        ],
    };

    let cfg = match scenario {
        ScenarioTag::Unilateral => {
            if b1.gain1.is_some() || b1.gain2.is_some() || b1.kind.is_some() {
                return Err("[B1] is not allowed in a unilateral scenario".into());
            }
            ScenarioConfig::new(
                theta,
                vec![observer(Side::A, &a1, "A1")?, final_obs(Side::A, 2)],
                vec![final_obs(Side::B, 1)],
                ScenarioTag::Unilateral,
            )
        }
        ScenarioTag::Bilateral => ScenarioConfig::new(
            theta,
            vec![observer(Side::A, &a1, "A1")?, final_obs(Side::A, 2)],
            vec![observer(Side::B, &b1, "B1")?, final_obs(Side::B, 2)],
            ScenarioTag::Bilateral,
        ),
    };
    cfg.map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loads_unilateral() {
        let cfg = load_scenario(
            "# point\nscenario = unilateral\nstrategy = weak\ntheta = pi/4\n\n[A1]\ngain1 = 0.8\ngain2 = 0.8\n",
        )
        .unwrap();
        assert_eq!(cfg.tag(), ScenarioTag::Unilateral);
        assert!((cfg.theta() - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
    }

    #[test]
    fn loads_bilateral_with_kind_override() {
        let cfg = load_scenario(
            "scenario = bilateral\nstrategy = weak\ntheta = 0.5\n[A1]\nkind = ppm\ngain1 = 0.3\ngain2 = 0.4\n[B1]\ngain1 = 0.5\ngain2 = 0.6\n",
        )
        .unwrap();
        assert_eq!(cfg.tag(), ScenarioTag::Bilateral);
        assert_eq!(cfg.chain(Side::A)[0].settings[0].kind, StrategyKind::Ppm);
        assert_eq!(cfg.chain(Side::B)[0].settings[0].kind, StrategyKind::Weak);
    }

    #[test]
    fn unknown_keys_are_hard_errors() {
        let err = load_scenario("scenario = unilateral\ntheta = 0.5\nbogus = 1\n").unwrap_err();
        assert!(err.contains("unknown key 'bogus'"), "{err}");

        let err = load_scenario(
            "scenario = unilateral\nstrategy = weak\ntheta = 0.5\n[A1]\ngain1 = 0.5\ngain2 = 0.5\nnoise = 2\n",
        )
        .unwrap_err();
        assert!(err.contains("unknown key 'noise'"), "{err}");

        let err =
            load_scenario("scenario = unilateral\ntheta = 0.5\n[C7]\ngain1 = 1\n").unwrap_err();
        assert!(err.contains("unknown section"), "{err}");
    }

    #[test]
    fn missing_fields_are_errors() {
        assert!(load_scenario("scenario = unilateral\ntheta = 0.5\n").is_err());
        assert!(load_scenario("theta = 0.5\n[A1]\ngain1 = 1\ngain2 = 1\n").is_err());
    }
}
