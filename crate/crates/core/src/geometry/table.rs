use std::f64::consts::{FRAC_PI_6, PI};
use std::fmt;

use super::curve::{Curve, CurveError};
use super::{Vec2, EPS_LIMIT, EPS_MARGIN};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TableError {
    #[error("eps must lie in (0, pi/6), got {0}")]
    BadEps(f64),
    #[error("walls need x_min < x_max, got [{0}, {1}]")]
    BadWalls(f64, f64),
    #[error("{0} cap leaves the strip 0 <= y <= 1 between the walls")]
    CapOutsideStrip(ArcId),
    #[error("{0} cap has its interior on the wrong side")]
    BadOrientation(ArcId),
    #[error("caps overlap horizontally (gap {0})")]
    CapsOverlap(f64),
    #[error("invalid dimensions: {0}")]
    BadDimensions(String),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TableClass {
    /// Two caps carrying free arcs.
    Full,
    /// One cap is a flat vertical segment.
    Semistadium,
}

impl fmt::Display for TableClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TableClass::Full => "full",
            TableClass::Semistadium => "semistadium",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CapSide {
    Left,
    Right,
}

impl CapSide {
    pub fn opposite(self) -> Self {
        match self {
            CapSide::Left => CapSide::Right,
            CapSide::Right => CapSide::Left,
        }
    }

    /// Horizontal direction of flights leaving this cap.
    pub fn heading(self) -> f64 {
        match self {
            CapSide::Left => 1.0,
            CapSide::Right => -1.0,
        }
    }
}

/// Boundary piece a collision lands on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ArcId {
    Bottom,
    Top,
    Left,
    Right,
    /// The flat vertical cap of a semistadium.
    Flat,
}

impl ArcId {
    pub fn is_wall(self) -> bool {
        matches!(self, ArcId::Bottom | ArcId::Top)
    }

    pub fn name(self) -> &'static str {
        match self {
            ArcId::Bottom => "bottom",
            ArcId::Top => "top",
            ArcId::Left => "left",
            ArcId::Right => "right",
            ArcId::Flat => "flat",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "bottom" => ArcId::Bottom,
            "top" => ArcId::Top,
            "left" => ArcId::Left,
            "right" => ArcId::Right,
            "flat" => ArcId::Flat,
            _ => return None,
        })
    }
}

impl fmt::Display for ArcId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Collision state: boundary piece, position `r` along it, reflection angle `phi`.
///
/// `phi` is measured from the inward normal to the outgoing direction, positive
/// towards the direction of increasing `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub arc: ArcId,
    pub r: f64,
    pub phi: f64,
}

impl PhasePoint {
    pub fn new(arc: ArcId, r: f64, phi: f64) -> Self {
        Self { arc, r, phi }
    }

    /// Same position with the time-reversed outgoing direction.
    pub fn reversed(self) -> Self {
        Self { phi: -self.phi, ..self }
    }
}

/// Straight flight between two consecutive collisions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySegment {
    pub start: PhasePoint,
    pub end: PhasePoint,
    pub from: Vec2,
    pub to: Vec2,
    pub argument: f64,
    pub length: f64,
}

impl TrajectorySegment {
    pub fn argument_of(&self) -> Result<f64, super::GeometryError> {
        super::argument_between(self.from, self.to)
    }
}

/// Horizontal extent of the walls `y = 0` and `y = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Walls {
    pub x_min: f64,
    pub x_max: f64,
}

/// How a table was built; selects the shape-specific certificates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TableShape {
    /// Rectangle of length `length` (in widths) with semicircular caps.
    Stadium {
        length: f64,
    },
    /// Stalk of length `stalk` (in widths) and a half-disk cap of radius `radius`.
    Mushroom {
        stalk: f64,
        radius: f64,
    },
    Custom,
}

/// Billiard table with walls on `y = 0` and `y = 1` and two caps.
///
/// Only the tracked pieces take part in the dynamics; `untracked` boundary pieces
/// absorb any ray that reaches them. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    walls: Walls,
    bottom: Curve,
    top: Curve,
    left: Curve,
    right: Curve,
    untracked: Vec<Curve>,
    flat: Option<CapSide>,
    eps: f64,
    ell: f64,
    shape: TableShape,
}

impl Table {
    /// Table of the full class: both caps carry free arcs.
    pub fn full(walls: Walls, left: Curve, right: Curve, untracked: Vec<Curve>, eps: f64) -> Result<Self, TableError> {
        Self::build(walls, left, right, untracked, None, eps)
    }

    /// Semistadium: the cap on side `flat` is replaced by the vertical segment closing the walls.
    pub fn semistadium(
        walls: Walls,
        cap: Curve,
        flat: CapSide,
        untracked: Vec<Curve>,
        eps: f64,
    ) -> Result<Self, TableError> {
        let x = match flat {
            CapSide::Left => walls.x_min,
            CapSide::Right => walls.x_max,
        };
        // interior lies towards the other end of the walls
        let upward = Vec2::new(x, 0.0);
        let segment = Curve::segment(upward, Vec2::new(x, 1.0), flat == CapSide::Right)?;
        let (left, right) = match flat {
            CapSide::Left => (segment, cap),
            CapSide::Right => (cap, segment),
        };
        Self::build(walls, left, right, untracked, Some(flat), eps)
    }

    fn build(
        walls: Walls,
        left: Curve,
        right: Curve,
        untracked: Vec<Curve>,
        flat: Option<CapSide>,
        eps: f64,
    ) -> Result<Self, TableError> {
        if !(eps > 0.0 && eps < EPS_LIMIT) {
            return Err(TableError::BadEps(eps));
        }
        if !(walls.x_min < walls.x_max) || !walls.x_min.is_finite() || !walls.x_max.is_finite() {
            return Err(TableError::BadWalls(walls.x_min, walls.x_max));
        }
        let bottom = Curve::segment(Vec2::new(walls.x_min, 0.0), Vec2::new(walls.x_max, 0.0), true)?;
        let top = Curve::segment(Vec2::new(walls.x_min, 1.0), Vec2::new(walls.x_max, 1.0), false)?;
        for (id, cap, side) in [(ArcId::Left, &left, CapSide::Left), (ArcId::Right, &right, CapSide::Right)] {
            let id = if flat == Some(side) { ArcId::Flat } else { id };
            let (y0, y1) = cap.y_range();
            if y0 < -1e-12 || y1 > 1.0 + 1e-12 {
                return Err(TableError::CapOutsideStrip(id));
            }
            if cap.inward_normal(cap.length() / 2.0).x * side.heading() <= 0.0 {
                return Err(TableError::BadOrientation(id));
            }
        }
        let ell = right.x_range().0 - left.x_range().1;
        if !(ell > 0.0) {
            return Err(TableError::CapsOverlap(ell));
        }
        Ok(Self { walls, bottom, top, left, right, untracked, flat, eps, ell, shape: TableShape::Custom })
    }

    pub fn with_eps(&self, eps: f64) -> Result<Self, TableError> {
        if !(eps > 0.0 && eps < EPS_LIMIT) {
            return Err(TableError::BadEps(eps));
        }
        Ok(Self { eps, ..self.clone() })
    }

    pub fn class(&self) -> TableClass {
        if self.flat.is_some() {
            TableClass::Semistadium
        } else {
            TableClass::Full
        }
    }

    pub fn flat_side(&self) -> Option<CapSide> {
        self.flat
    }

    pub fn walls(&self) -> Walls {
        self.walls
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Smallest horizontal distance between the two caps.
    pub fn ell(&self) -> f64 {
        self.ell
    }

    pub fn shape(&self) -> TableShape {
        self.shape
    }

    pub fn untracked(&self) -> &[Curve] {
        &self.untracked
    }

    pub fn curve(&self, arc: ArcId) -> &Curve {
        match arc {
            ArcId::Bottom => &self.bottom,
            ArcId::Top => &self.top,
            ArcId::Left => &self.left,
            ArcId::Right => &self.right,
            ArcId::Flat => match self.flat {
                Some(CapSide::Left) => &self.left,
                _ => &self.right,
            },
        }
    }

    pub fn cap_curve(&self, side: CapSide) -> &Curve {
        match side {
            CapSide::Left => &self.left,
            CapSide::Right => &self.right,
        }
    }

    /// Arc id under which collisions with the cap on `side` are reported.
    pub fn cap_id(&self, side: CapSide) -> ArcId {
        if self.flat == Some(side) {
            return ArcId::Flat;
        }
        match side {
            CapSide::Left => ArcId::Left,
            CapSide::Right => ArcId::Right,
        }
    }

    /// Side of a cap arc id; `None` for walls.
    pub fn side_of(&self, arc: ArcId) -> Option<CapSide> {
        match arc {
            ArcId::Left => Some(CapSide::Left),
            ArcId::Right => Some(CapSide::Right),
            ArcId::Flat => self.flat,
            _ => None,
        }
    }

    /// Caps that carry free arcs (both in the full class, the curved one otherwise).
    pub fn curved_caps(&self) -> Vec<CapSide> {
        [CapSide::Left, CapSide::Right].into_iter().filter(|&s| self.flat != Some(s)).collect()
    }

    /// All tracked pieces in a fixed order.
    pub fn arcs(&self) -> [ArcId; 4] {
        [ArcId::Bottom, ArcId::Top, self.cap_id(CapSide::Left), self.cap_id(CapSide::Right)]
    }

    pub fn point(&self, arc: ArcId, r: f64) -> Vec2 {
        self.curve(arc).point_at(r)
    }

    /// Full-class table obtained by mirroring a semistadium in its flat cap.
    ///
    /// Flights of the doubled table correspond one-to-one to cap-to-cap passages of
    /// the semistadium, with crossings of the mirror line standing for reflections
    /// off the flat cap.
    pub fn doubled(&self) -> Option<Self> {
        let flat = self.flat?;
        let axis = match flat {
            CapSide::Left => self.walls.x_min,
            CapSide::Right => self.walls.x_max,
        };
        let cap = self.cap_curve(flat.opposite());
        let mirror = cap.mirrored_x(axis);
        let (left, right, walls) = match flat {
            CapSide::Right => {
                (cap.clone(), mirror, Walls { x_min: self.walls.x_min, x_max: 2.0 * axis - self.walls.x_min })
            }
            CapSide::Left => {
                (mirror, cap.clone(), Walls { x_min: 2.0 * axis - self.walls.x_max, x_max: self.walls.x_max })
            }
        };
        let mut untracked = self.untracked.clone();
        untracked.extend(self.untracked.iter().map(|c| c.mirrored_x(axis)));
        let mut t = Self::build(walls, left, right, untracked, None, self.eps).ok()?;
        t.shape = TableShape::Custom;
        Some(t)
    }

    /// x coordinate of the mirror line of a semistadium.
    pub fn mirror_axis(&self) -> Option<f64> {
        self.flat.map(|side| match side {
            CapSide::Left => self.walls.x_min,
            CapSide::Right => self.walls.x_max,
        })
    }
}

/// Classical stadium with rectangle `length` by `width`, rescaled to unit width.
///
/// The caps are the arcs of the semicircles whose normals make an angle of at most
/// `pi/6` with the horizontal; the rest of each semicircle is untracked. The table
/// records the largest admissible `eps`, just below `pi/6`.
pub fn make_stadium(length: f64, width: f64) -> Result<Table, TableError> {
    if !(length > 0.0) || !(width > 0.0) || !length.is_finite() || !width.is_finite() {
        return Err(TableError::BadDimensions(format!(
            "stadium needs positive length and width, got {length} x {width}"
        )));
    }
    let l = length / width;
    let half = FRAC_PI_6;
    let left_center = Vec2::new(0.0, 0.5);
    let right_center = Vec2::new(l, 0.5);
    let left = Curve::arc(left_center, 0.5, PI - half, 2.0 * half, true)?;
    let right = Curve::arc(right_center, 0.5, -half, 2.0 * half, true)?;
    let rest = PI / 2.0 - half;
    let untracked = vec![
        Curve::arc(left_center, 0.5, PI / 2.0, rest, true)?,
        Curve::arc(left_center, 0.5, PI + half, rest, true)?,
        Curve::arc(right_center, 0.5, -PI / 2.0, rest, true)?,
        Curve::arc(right_center, 0.5, half, rest, true)?,
    ];
    let mut t = Table::full(Walls { x_min: 0.0, x_max: l }, left, right, untracked, FRAC_PI_6 - EPS_MARGIN)?;
    t.shape = TableShape::Stadium { length: l };
    Ok(t)
}

/// Mushroom: stalk of unit width and length `stalk`, half-disk cap of radius `radius`
/// on the left, flat end on the right.
///
/// The tracked arc is where rays with argument up to `eps` still enter the stalk,
/// `radius * sin(eps) = 1/4`; the recorded `eps` is that angle, capped below `pi/6`.
pub fn make_mushroom(stalk: f64, radius: f64) -> Result<Table, TableError> {
    if !(stalk > 0.0) || !stalk.is_finite() || !(radius >= 0.25) || !radius.is_finite() {
        return Err(TableError::BadDimensions(format!(
            "mushroom needs stalk > 0 and radius >= 1/4, got {stalk}, {radius}"
        )));
    }
    let eps_geom = (0.25 / radius).asin();
    let center = Vec2::new(0.0, 0.5);
    let cap = Curve::arc(center, radius, PI - eps_geom, 2.0 * eps_geom, true)?;
    let rest = PI / 2.0 - eps_geom;
    let mut untracked = Vec::new();
    if rest > 0.0 {
        untracked.push(Curve::arc(center, radius, PI / 2.0, rest, true)?);
        untracked.push(Curve::arc(center, radius, PI + eps_geom, rest, true)?);
    }
    // flat parts of the cap outside the stalk mouth, or of the stalk outside a narrow cap
    let (lo, hi) = (0.5 - radius, 0.5 + radius);
    if (hi - 1.0).abs() > 1e-15 {
        untracked.push(Curve::segment(Vec2::new(0.0, 1.0), Vec2::new(0.0, hi), true)?);
        untracked.push(Curve::segment(Vec2::new(0.0, lo), Vec2::new(0.0, 0.0), true)?);
    }
    let eps = eps_geom.min(FRAC_PI_6 - EPS_MARGIN);
    let walls = Walls { x_min: 0.0, x_max: stalk };
    let mut t = Table::semistadium(walls, cap, CapSide::Right, untracked, eps)?;
    t.shape = TableShape::Mushroom { stalk, radius };
    Ok(t)
}
