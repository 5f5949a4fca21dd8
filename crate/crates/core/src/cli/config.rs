//! Run configuration files (TOML).
//!
//! ```toml
//! eps = 0.3          # optional, radians
//! n = 1              # optional cap on the alphabet bound
//!
//! [table]
//! kind = "stadium"   # stadium | mushroom | custom
//! length = 4.0
//! width = 1.0
//!
//! [grid]
//! position_step = 0.01
//! angle_step = 0.01
//!
//! [output]
//! dir = "out"
//! seed = 7
//! ```
//!
//! Custom tables give `walls = [x_min, x_max]`, a table-level `eps`, cap curves under
//! `[table.left]` and `[table.right]` (or `flat = "left" | "right"` with only the other
//! cap) and optional `[[table.untracked]]` pieces. Curves are `segment` (`start`,
//! `end`), `arc` (`center`, `radius`, `start_angle`, `sweep`) or `sampled`
//! (`points`, `tangents`, optional `max_turn`), each with `interior_left`.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::geometry::{make_mushroom, make_stadium, CapSide, Curve, Table, Vec2, Walls, DEFAULT_MAX_TURN, EPS_LIMIT};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {reason}")]
    Io { path: String, reason: String },
    #[error("invalid config: {0}")]
    Parse(String),
    #[error("invalid config: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<TableSpec>,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default)]
    pub output: OutputSpec,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub position_step: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle_step: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SideSpec {
    Left,
    Right,
}

impl From<SideSpec> for CapSide {
    fn from(s: SideSpec) -> Self {
        match s {
            SideSpec::Left => CapSide::Left,
            SideSpec::Right => CapSide::Right,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum TableSpec {
    Stadium {
        length: f64,
        width: f64,
    },
    Mushroom {
        stalk: f64,
        radius: f64,
    },
    Custom {
        walls: [f64; 2],
        eps: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        flat: Option<SideSpec>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        left: Option<CurveSpec>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        right: Option<CurveSpec>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        untracked: Vec<CurveSpec>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum CurveSpec {
    Segment {
        start: [f64; 2],
        end: [f64; 2],
        interior_left: bool,
    },
    Arc {
        center: [f64; 2],
        radius: f64,
        start_angle: f64,
        sweep: f64,
        interior_left: bool,
    },
    Sampled {
        points: Vec<[f64; 2]>,
        tangents: Vec<[f64; 2]>,
        interior_left: bool,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        max_turn: Option<f64>,
    },
}

fn v(p: [f64; 2]) -> Vec2 {
    Vec2::new(p[0], p[1])
}

impl CurveSpec {
    pub fn build(&self) -> Result<Curve, ConfigError> {
        let err = |e: crate::geometry::CurveError| ConfigError::Invalid(e.to_string());
        match self {
            CurveSpec::Segment { start, end, interior_left } => {
                Curve::segment(v(*start), v(*end), *interior_left).map_err(err)
            }
            CurveSpec::Arc { center, radius, start_angle, sweep, interior_left } => {
                Curve::arc(v(*center), *radius, *start_angle, *sweep, *interior_left).map_err(err)
            }
            CurveSpec::Sampled { points, tangents, interior_left, max_turn } => Curve::sampled_with_cap(
                points.iter().copied().map(v).collect(),
                tangents.iter().copied().map(v).collect(),
                *interior_left,
                max_turn.unwrap_or(DEFAULT_MAX_TURN),
            )
            .map_err(err),
        }
    }
}

fn positive(name: &str, x: f64) -> Result<(), ConfigError> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(ConfigError::Invalid(format!("{name} must be positive, got {x}")))
    }
}

fn check_eps(x: f64) -> Result<(), ConfigError> {
    if x > 0.0 && x < EPS_LIMIT {
        Ok(())
    } else {
        Err(ConfigError::Invalid(format!("eps must lie in (0, pi/6), got {x}")))
    }
}

impl TableSpec {
    pub fn build(&self) -> Result<Table, ConfigError> {
        let err = |e: crate::geometry::TableError| ConfigError::Invalid(e.to_string());
        match self {
            TableSpec::Stadium { length, width } => make_stadium(*length, *width).map_err(err),
            TableSpec::Mushroom { stalk, radius } => make_mushroom(*stalk, *radius).map_err(err),
            TableSpec::Custom { walls, eps, flat, left, right, untracked } => {
                let walls = Walls { x_min: walls[0], x_max: walls[1] };
                let untracked = untracked.iter().map(CurveSpec::build).collect::<Result<Vec<_>, _>>()?;
                let missing = |s: &str| ConfigError::Invalid(format!("custom table needs a {s} cap"));
                match flat {
                    None => {
                        let l = left.as_ref().ok_or_else(|| missing("left"))?.build()?;
                        let r = right.as_ref().ok_or_else(|| missing("right"))?.build()?;
                        Table::full(walls, l, r, untracked, *eps).map_err(err)
                    }
                    Some(side) => {
                        let cap = match side {
                            SideSpec::Left => right.as_ref().ok_or_else(|| missing("right"))?,
                            SideSpec::Right => left.as_ref().ok_or_else(|| missing("left"))?,
                        };
                        Table::semistadium(walls, cap.build()?, (*side).into(), untracked, *eps).map_err(err)
                    }
                }
            }
        }
    }

    fn validate(&self) -> Result<(), ConfigError> {
        match self {
            TableSpec::Stadium { length, width } => {
                positive("stadium length", *length)?;
                positive("stadium width", *width)
            }
            TableSpec::Mushroom { stalk, radius } => {
                positive("stalk length", *stalk)?;
                if !(*radius >= 0.25) || !radius.is_finite() {
                    return Err(ConfigError::Invalid(format!("cap radius must be at least 1/4, got {radius}")));
                }
                Ok(())
            }
            TableSpec::Custom { walls, eps, .. } => {
                check_eps(*eps)?;
                positive("wall length", walls[1] - walls[0])
            }
        }
    }

    /// One-line description for reports.
    pub fn describe(&self) -> String {
        use super::report::num;
        match self {
            TableSpec::Stadium { length, width } => format!("stadium {} x {}", num(*length), num(*width)),
            TableSpec::Mushroom { stalk, radius } => format!("mushroom stalk {} radius {}", num(*stalk), num(*radius)),
            TableSpec::Custom { flat: Some(_), .. } => "custom semistadium".into(),
            TableSpec::Custom { .. } => "custom".into(),
        }
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let cfg: Self = toml::from_str(text).map_err(|e| ConfigError::Parse(e.message().to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Io { path: path.display().to_string(), reason: e.to_string() })?;
        Self::parse(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if let Some(eps) = self.eps {
            check_eps(eps)?;
        }
        if let Some(t) = &self.table {
            t.validate()?;
        }
        if let Some(s) = self.grid.position_step {
            positive("position_step", s)?;
        }
        if let Some(s) = self.grid.angle_step {
            positive("angle_step", s)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const STADIUM: &str = r#"
eps = 0.3

[table]
kind = "stadium"
length = 4.0
width = 1.0

[grid]
position_step = 0.01
angle_step = 0.02

[output]
seed = 7
"#;

    const CUSTOM: &str = r#"
[table]
kind = "custom"
walls = [0.0, 2.0]
eps = 0.3
flat = "right"

[table.left]
kind = "arc"
center = [0.0, 0.5]
radius = 0.5
start_angle = 2.6179938779914944
sweep = 1.0471975511965976
interior_left = true

[[table.untracked]]
kind = "segment"
start = [0.0, 1.0]
end = [-0.1, 0.9]
interior_left = true
"#;

    #[test]
    fn parse_serialize_parse_is_identity() {
        for text in [STADIUM, CUSTOM, "", "[table]\nkind = \"mushroom\"\nstalk = 1.0\nradius = 0.5\n"] {
            let a = RunConfig::parse(text).unwrap();
            let b = RunConfig::parse(&a.to_toml()).unwrap();
            assert_eq!(a, b);
            assert_eq!(a.to_toml(), b.to_toml());
        }
    }

    #[test]
    fn builds_tables() {
        let cfg = RunConfig::parse(STADIUM).unwrap();
        let t = cfg.table.unwrap().build().unwrap();
        assert!((t.ell() - (4.0 + 3f64.sqrt() / 2.0)).abs() < 1e-12);
        let cfg = RunConfig::parse(CUSTOM).unwrap();
        let t = cfg.table.unwrap().build().unwrap();
        assert_eq!(t.flat_side(), Some(CapSide::Right));
        assert_eq!(t.untracked().len(), 1);
    }

    #[test]
    fn rejects_bad_values() {
        assert!(RunConfig::parse("eps = 0.6").is_err());
        assert!(RunConfig::parse("eps = -0.1").is_err());
        assert!(RunConfig::parse("[table]\nkind = \"stadium\"\nlength = -1.0\nwidth = 1.0").is_err());
        assert!(RunConfig::parse("[table]\nkind = \"mushroom\"\nstalk = 1.0\nradius = 0.2").is_err());
        assert!(RunConfig::parse("[grid]\nangle_step = 0.0").is_err());
        assert!(RunConfig::parse("colour = 3").is_err());
        assert!(RunConfig::parse("[table]\nkind = \"hexagon\"").is_err());
    }
}
