//! Scoring configuration: which member of the PESQ family is computed.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{PesqError, Result};

/// Listening bandwidth of the model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Band {
    /// Telephone handset listening (P.862 / P.862.1), 8 or 16 kHz.
    Narrow,
    /// Headphone listening (P.862.2), 16 kHz only.
    Wide,
}

/// Requested output scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputKind {
    Raw,
    MosLqo,
}

/// Full configuration of one scoring run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PesqConfig {
    pub rate: u32,
    pub band: Band,
    pub output: OutputKind,
    /// Use the corrected wideband input filter (P.862 Corrigendum 2).
    pub corrigendum2: bool,
}

impl PesqConfig {
    pub fn new(rate: u32, band: Band, output: OutputKind, corrigendum2: bool) -> Result<Self> {
        let cfg = Self {
            rate,
            band,
            output,
            corrigendum2,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.rate != 8000 && self.rate != 16000 {
            return Err(PesqError::InvalidRate(self.rate));
        }
        if self.band == Band::Wide && self.rate != 16000 {
            return Err(PesqError::InvalidConfig("wideband requires 16000 Hz".into()));
        }
        if self.corrigendum2 && self.band != Band::Wide {
            return Err(PesqError::InvalidConfig(
                "Corrigendum 2 only applies to the wideband mode".into(),
            ));
        }
        if self.band == Band::Wide && self.output != OutputKind::MosLqo {
            return Err(PesqError::InvalidConfig("wideband mode only produces MOS-LQO".into()));
        }
        Ok(())
    }

    /// The named mode this configuration corresponds to.
    pub fn mode(&self) -> Mode {
        match (self.band, self.output, self.corrigendum2) {
            (Band::Narrow, OutputKind::Raw, _) => Mode::NbRaw,
            (Band::Narrow, OutputKind::MosLqo, _) => Mode::NbLqo,
            (Band::Wide, _, false) => Mode::Wb,
            (Band::Wide, _, true) => Mode::WbC2,
        }
    }
}

/// The four PESQ variants, named the way the command line spells them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    /// P.862 raw score.
    #[serde(rename = "nb-raw")]
    NbRaw,
    /// P.862.1 narrowband MOS-LQO.
    #[serde(rename = "nb-lqo")]
    NbLqo,
    /// P.862.2 wideband MOS-LQO with the original input filter.
    #[serde(rename = "wb")]
    Wb,
    /// P.862.2 wideband MOS-LQO with the Corrigendum 2 input filter.
    #[serde(rename = "wb-c2")]
    WbC2,
}

impl Mode {
    pub const ALL: [Mode; 4] = [Mode::NbRaw, Mode::NbLqo, Mode::Wb, Mode::WbC2];

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::NbRaw => "nb-raw",
            Mode::NbLqo => "nb-lqo",
            Mode::Wb => "wb",
            Mode::WbC2 => "wb-c2",
        }
    }

    /// Human-readable provenance of the mode.
    pub fn description(self) -> &'static str {
        match self {
            Mode::NbRaw => "P.862 raw",
            Mode::NbLqo => "P.862.1 MOS-LQO",
            Mode::Wb => "P.862.2 MOS-LQO",
            Mode::WbC2 => "P.862.2 + Corrigendum 2 MOS-LQO",
        }
    }

    pub fn config(self, rate: u32) -> Result<PesqConfig> {
        match self {
            Mode::NbRaw => PesqConfig::new(rate, Band::Narrow, OutputKind::Raw, false),
            Mode::NbLqo => PesqConfig::new(rate, Band::Narrow, OutputKind::MosLqo, false),
            Mode::Wb => PesqConfig::new(rate, Band::Wide, OutputKind::MosLqo, false),
            Mode::WbC2 => PesqConfig::new(rate, Band::Wide, OutputKind::MosLqo, true),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = PesqError;

    fn from_str(s: &str) -> Result<Self> {
        Mode::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| PesqError::InvalidConfig(format!("unknown mode '{s}' (nb-raw, nb-lqo, wb, wb-c2)")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariants_enforced() {
        assert!(PesqConfig::new(8000, Band::Wide, OutputKind::MosLqo, false).is_err());
        assert!(PesqConfig::new(16000, Band::Narrow, OutputKind::Raw, true).is_err());
        assert!(PesqConfig::new(16000, Band::Wide, OutputKind::Raw, false).is_err());
        assert!(PesqConfig::new(44100, Band::Narrow, OutputKind::Raw, false).is_err());
        assert!(PesqConfig::new(8000, Band::Narrow, OutputKind::MosLqo, false).is_ok());
    }

    #[test]
    fn wideband_at_8k_message() {
        let err = Mode::Wb.config(8000).unwrap_err();
        assert!(err.to_string().contains("wideband requires 16000 Hz"));
    }

    #[test]
    fn mode_names_round_trip() {
        for m in Mode::ALL {
            assert_eq!(m.as_str().parse::<Mode>().unwrap(), m);
            assert_eq!(m.config(16000).unwrap().mode(), m);
        }
        assert!("wideband".parse::<Mode>().is_err());
    }
}
