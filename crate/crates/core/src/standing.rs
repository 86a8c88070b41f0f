//! Three-way country standing from the mismanaged-plastic share.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Shares strictly above this are THIRD.
pub const THIRD_WORLD_ABOVE_PCT: f64 = 75.0;
/// Shares strictly below this are FIRST.
pub const FIRST_WORLD_BELOW_PCT: f64 = 25.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Standing {
    First,
    Third,
    Average,
}

impl Standing {
    pub fn as_str(self) -> &'static str {
        match self {
            Standing::First => "FIRST",
            Standing::Third => "THIRD",
            Standing::Average => "AVERAGE",
        }
    }
}

impl fmt::Display for Standing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown standing `{0}`")]
pub struct UnknownStanding(pub String);

impl FromStr for Standing {
    type Err = UnknownStanding;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "FIRST" => Ok(Standing::First),
            "THIRD" => Ok(Standing::Third),
            "AVERAGE" => Ok(Standing::Average),
            other => Err(UnknownStanding(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StandingResult {
    pub standing: Standing,
    /// `None` for the average range, which only has a long label.
    pub short_label: Option<String>,
    pub long_label: String,
    pub reason: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("percentage {0} is outside [0, 100]")]
pub struct PercentOutOfRange(pub f64);

impl PercentOutOfRange {
    pub fn code(&self) -> &'static str {
        "OutOfRange"
    }
}

/// Classifies a mismanaged share. Both thresholds fall into the average range.
pub fn classify(pct: f64) -> Result<StandingResult, PercentOutOfRange> {
    if !(0.0..=100.0).contains(&pct) {
        return Err(PercentOutOfRange(pct));
    }
    // Normalizes -0 so it renders as "0".
    let pct = pct + 0.0;
    let prefix = format!("Reason: Percent of inadequately managed plastic is {pct}% which is ");
    let result = if pct > THIRD_WORLD_ABOVE_PCT {
        StandingResult {
            standing: Standing::Third,
            short_label: Some("THIRD".into()),
            long_label: "Third World/Developing Country".into(),
            reason: prefix + "higher than 75%.",
        }
    } else if pct < FIRST_WORLD_BELOW_PCT {
        StandingResult {
            standing: Standing::First,
            short_label: Some("FIRST".into()),
            long_label: "First World/Developed Country".into(),
            reason: prefix + "lower than 25%.",
        }
    } else {
        StandingResult {
            standing: Standing::Average,
            short_label: None,
            long_label: "In the average range".into(),
            reason: prefix + "between 25% and 75%.",
        }
    };
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_rows() {
        let mexico = classify(12.0).unwrap();
        assert_eq!(mexico.standing, Standing::First);
        assert_eq!(mexico.short_label.as_deref(), Some("FIRST"));
        assert_eq!(mexico.long_label, "First World/Developed Country");
        assert_eq!(mexico.reason, "Reason: Percent of inadequately managed plastic is 12% which is lower than 25%.");

        let congo = classify(77.0).unwrap();
        assert_eq!(congo.standing, Standing::Third);
        assert_eq!(congo.long_label, "Third World/Developing Country");
        assert_eq!(congo.reason, "Reason: Percent of inadequately managed plastic is 77% which is higher than 75%.");

        let bulgaria = classify(31.0).unwrap();
        assert_eq!(bulgaria.standing, Standing::Average);
        assert_eq!(bulgaria.short_label, None);
        assert_eq!(bulgaria.long_label, "In the average range");
        assert_eq!(
            bulgaria.reason,
            "Reason: Percent of inadequately managed plastic is 31% which is between 25% and 75%."
        );
    }

    #[test]
    fn thresholds_are_average() {
        assert_eq!(classify(75.0).unwrap().standing, Standing::Average);
        assert_eq!(classify(25.0).unwrap().standing, Standing::Average);
        assert_eq!(classify(0.0).unwrap().standing, Standing::First);
        assert_eq!(classify(100.0).unwrap().standing, Standing::Third);
    }

    #[test]
    fn fractional_rendering() {
        assert!(classify(31.5).unwrap().reason.contains(" 31.5% "));
        assert!(classify(75.01).unwrap().reason.contains(" 75.01% "));
    }

    #[test]
    fn rejects_out_of_range() {
        for bad in [-0.5, 100.01, f64::NAN, f64::INFINITY] {
            assert!(classify(bad).is_err(), "{bad}");
        }
    }
}
