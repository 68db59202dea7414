//! Logistic mappings from internal scores to MOS-LQO.

use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{PesqError, Result};

/// Lower asymptote of both mappings.
pub const MOS_FLOOR: f64 = 0.999;
/// Upper asymptote of both mappings.
pub const MOS_CEILING: f64 = 4.999;

// P.862.1 narrowband mapping.
const NB_SLOPE: f64 = 1.4945;
const NB_OFFSET: f64 = 4.6607;
// P.862.2 wideband mapping.
const WB_SLOPE: f64 = 1.3669;
const WB_OFFSET: f64 = 3.8224;

/// Which logistic parameter set to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MappingKind {
    /// P.862.1.
    Narrowband,
    /// P.862.2.
    Wideband,
}

impl MappingKind {
    fn params(self) -> (f64, f64) {
        match self {
            MappingKind::Narrowband => (NB_SLOPE, NB_OFFSET),
            MappingKind::Wideband => (WB_SLOPE, WB_OFFSET),
        }
    }

    /// Raw value mapped to the middle of the output range.
    pub fn midpoint(self) -> f64 {
        let (slope, offset) = self.params();
        offset / slope
    }

    /// Largest derivative of the mapping (at the midpoint).
    pub fn max_slope(self) -> f64 {
        self.params().0
    }

    pub fn map(self, raw: f64) -> f64 {
        let (slope, offset) = self.params();
        MOS_FLOOR + 4.0 / (1.0 + (-slope * raw + offset).exp())
    }
}

impl FromStr for MappingKind {
    type Err = PesqError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nb" => Ok(MappingKind::Narrowband),
            "wb" => Ok(MappingKind::Wideband),
            other => Err(PesqError::InvalidConfig(format!(
                "unknown mapping kind '{other}' (nb, wb)"
            ))),
        }
    }
}

/// Narrowband raw score to MOS-LQO.
pub fn map_nb_lqo(raw: f64) -> f64 {
    MappingKind::Narrowband.map(raw)
}

/// Wideband internal score to MOS-LQO.
pub fn map_wb_lqo(raw_internal: f64) -> f64 {
    MappingKind::Wideband.map(raw_internal)
}

/// One row of a mapping table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub raw: f64,
    pub mos: f64,
    pub diff: f64,
}

/// `n` evenly spaced points over `[lo, hi]`.
pub fn uniform_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

/// The default plotting grid: 1001 points over the raw score range.
pub fn default_grid() -> Vec<f64> {
    uniform_grid(-0.5, 4.5, 1001)
}

/// Evaluates the mapping on `grid`.
pub fn mapping_curve(kind: MappingKind, grid: &[f64]) -> Result<Vec<CurvePoint>> {
    if grid.is_empty() {
        return Err(PesqError::InvalidConfig("empty grid".into()));
    }
    if let Some(i) = grid.iter().position(|x| !x.is_finite()) {
        return Err(PesqError::NonFinite(i));
    }
    Ok(grid
        .iter()
        .map(|&raw| {
            let mos = kind.map(raw);
            CurvePoint {
                raw,
                mos,
                diff: mos - raw,
            }
        })
        .collect())
}

/// Writes a curve as CSV with header `raw,mos,diff`.
pub fn write_curve_csv<W: Write>(points: &[CurvePoint], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for p in points {
        w.serialize(p).map_err(|e| PesqError::InvalidConfig(e.to_string()))?;
    }
    w.flush().map_err(|e| PesqError::Wav(e.into()))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn known_values() {
        // Independent evaluation: 0.999 + 4 / (1 + e^(-1.4945*4.5 + 4.6607)).
        let expect = 0.999 + 4.0 / (1.0 + (-2.06455f64).exp());
        assert!((map_nb_lqo(4.5) - expect).abs() < 1e-12);
        assert!((map_nb_lqo(4.5) - 4.548_638_6).abs() < 1e-6);
        assert_eq!(map_wb_lqo(3.8224 / 1.3669), 0.999 + 2.0);
        assert!((map_wb_lqo(MappingKind::Wideband.midpoint()) - 2.999).abs() < 1e-12);
    }

    #[test]
    fn asymptotes() {
        for kind in [MappingKind::Narrowband, MappingKind::Wideband] {
            assert!((kind.map(-50.0) - MOS_FLOOR).abs() < 1e-12);
            assert!((kind.map(50.0) - MOS_CEILING).abs() < 1e-12);
        }
    }

    #[test]
    fn curve_csv() {
        let pts = mapping_curve(MappingKind::Narrowband, &[1.0]).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].diff, pts[0].mos - 1.0);
        let mut buf = Vec::new();
        write_curve_csv(&pts, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("raw,mos,diff\n1.0,"));
        assert!(mapping_curve(MappingKind::Wideband, &[]).is_err());
        assert!(mapping_curve(MappingKind::Wideband, &[f64::NAN]).is_err());
    }

    #[test]
    fn default_grid_spans_raw_range() {
        let g = default_grid();
        assert_eq!(g.len(), 1001);
        assert_eq!((g[0], g[1000]), (-0.5, 4.5));
        assert!((g[1] - g[0] - 0.005).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn strictly_increasing_and_bounded(a in -3.0f64..8.0, d in 1e-6f64..1.0) {
            for kind in [MappingKind::Narrowband, MappingKind::Wideband] {
                let (lo, hi) = (kind.map(a), kind.map(a + d));
                prop_assert!(hi > lo);
                prop_assert!(lo > MOS_FLOOR && hi < MOS_CEILING);
                prop_assert!(hi - lo <= kind.max_slope() * d + 1e-12);
            }
        }
    }
}
