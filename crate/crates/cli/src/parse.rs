//! Flag-value parsers shared by the subcommands.

use entshare::criteria::{CriterionKind, Strategy};
use entshare::explore::{Axis, ParamName};
use entshare::scenario::ScenarioTag;

use std::f64::consts::PI;

pub type ParseResult<T> = Result<T, String>;

/// Angles are radians, or one of the exact tokens `pi/4`, `pi/6`, `pi/12`.
pub fn parse_angle(s: &str) -> ParseResult<f64> {
    match s {
        "pi/4" => return Ok(PI / 4.0),
        "pi/6" => return Ok(PI / 6.0),
        "pi/12" => return Ok(PI / 12.0),
        _ => {}
    }
    s.parse::<f64>()
        .map_err(|_| format!("invalid angle '{s}' (radians or pi/4, pi/6, pi/12)"))
}

pub fn parse_scenario(s: &str) -> ParseResult<ScenarioTag> {
    match s {
        "unilateral" => Ok(ScenarioTag::Unilateral),
        "bilateral" => Ok(ScenarioTag::Bilateral),
        _ => Err(format!("invalid scenario '{s}' (unilateral | bilateral)")),
    }
}

pub fn parse_strategy(s: &str) -> ParseResult<Strategy> {
    match s {
        "weak" => Ok(Strategy::Weak),
        "ppm" => Ok(Strategy::Ppm),
        _ => Err(format!("invalid strategy '{s}' (weak | ppm)")),
    }
}

pub fn parse_param(s: &str) -> ParseResult<ParamName> {
    s.parse::<ParamName>().map_err(|e| e.to_string())
}

/// `NAME=lo:hi:steps`
pub fn parse_axis(s: &str) -> ParseResult<Axis> {
    let (name, rest) = s
        .split_once('=')
        .ok_or_else(|| format!("invalid axis '{s}' (expected NAME=lo:hi:steps)"))?;
    let parts: Vec<&str> = rest.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("invalid axis '{s}' (expected NAME=lo:hi:steps)"));
    }
    Ok(Axis {
        param: parse_param(name)?,
        lo: parse_angle(parts[0])?,
        hi: parse_angle(parts[1])?,
        steps: parts[2]
            .parse::<usize>()
            .map_err(|_| format!("invalid step count '{}'", parts[2]))?,
    })
}

/// `NAME=value`
pub fn parse_fix(s: &str) -> ParseResult<(ParamName, f64)> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| format!("invalid fix '{s}' (expected NAME=value)"))?;
    Ok((parse_param(name)?, parse_angle(value)?))
}

/// `TARGET=SOURCE`
pub fn parse_tie(s: &str) -> ParseResult<(ParamName, ParamName)> {
    let (target, source) = s
        .split_once('=')
        .ok_or_else(|| format!("invalid tie '{s}' (expected TARGET=SOURCE)"))?;
    Ok((parse_param(target)?, parse_param(source)?))
}

/// `NAME=lo:hi`
pub fn parse_range(s: &str) -> ParseResult<(ParamName, f64, f64)> {
    let (name, rest) = s
        .split_once('=')
        .ok_or_else(|| format!("invalid range '{s}' (expected NAME=lo:hi)"))?;
    let (lo, hi) = rest
        .split_once(':')
        .ok_or_else(|| format!("invalid range '{s}' (expected NAME=lo:hi)"))?;
    Ok((parse_param(name)?, parse_angle(lo)?, parse_angle(hi)?))
}

pub fn parse_objective(s: &str) -> ParseResult<CriterionKind> {
    match s {
        "I" => Ok(CriterionKind::MutualInfo),
        "S" => Ok(CriterionKind::CondProbSum),
        "C" => Ok(CriterionKind::Pearson),
        _ => Err(format!("invalid objective '{s}' (I | S | C)")),
    }
}

/// `I1 | I2 | S1 | S2 | C1 | C2`
pub fn parse_criterion_selector(s: &str) -> ParseResult<(CriterionKind, usize)> {
    if s.len() != 2 {
        return Err(format!("invalid criterion '{s}' (I1, I2, S1, S2, C1, C2)"));
    }
    let kind = parse_objective(&s[..1])?;
    let k = match &s[1..] {
        "1" => 1,
        "2" => 2,
        _ => return Err(format!("invalid pair index in '{s}'")),
    };
    Ok((kind, k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angles() {
        assert_eq!(parse_angle("pi/4").unwrap(), PI / 4.0);
        assert_eq!(parse_angle("pi/6").unwrap(), PI / 6.0);
        assert_eq!(parse_angle("pi/12").unwrap(), PI / 12.0);
        assert_eq!(parse_angle("0.5").unwrap(), 0.5);
        assert!(parse_angle("pi/3").is_err());
    }

    #[test]
    fn axes_and_ranges() {
        let axis = parse_axis("G1=0:1:41").unwrap();
        assert_eq!(axis.param, ParamName::G1);
        assert_eq!(axis.steps, 41);
        assert!(parse_axis("G1=0:1").is_err());

        let (p, lo, hi) = parse_range("G2=0.1:0.9").unwrap();
        assert_eq!(p, ParamName::G2);
        assert_eq!((lo, hi), (0.1, 0.9));

        let (target, source) = parse_tie("G2=G1").unwrap();
        assert_eq!((target, source), (ParamName::G2, ParamName::G1));

        let (p, v) = parse_fix("theta=pi/4").unwrap();
        assert_eq!(p, ParamName::Theta);
        assert_eq!(v, PI / 4.0);
    }

    #[test]
    fn criterion_selectors() {
        assert_eq!(
            parse_criterion_selector("I2").unwrap(),
            (CriterionKind::MutualInfo, 2)
        );
        assert_eq!(
            parse_criterion_selector("S1").unwrap(),
            (CriterionKind::CondProbSum, 1)
        );
        assert!(parse_criterion_selector("X1").is_err());
        assert!(parse_criterion_selector("I3").is_err());
    }
}
