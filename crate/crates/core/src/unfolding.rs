//! Lifted billiard: reflections off the walls are replaced by straight flights
//! through stacked copies of the table.
//!
//! Copy `m` of the strip occupies `m <= Y <= m + 1` of the lifted plane, mirrored
//! when `m` is odd, so crossing `Y = n` stands for a bottom-wall reflection when `n`
//! is even and a top-wall reflection when `n` is odd. Levels are reported in the
//! coding convention: a flight landing in copy `m` has level difference `-m`, which
//! is positive exactly when its first wall reflection is off the bottom wall.
//!
//! Semistadia are lifted in their doubled table, so every flight runs between the
//! curved cap and its mirror image and crosses the mirror line once.

use crate::geometry::{
    line_argument, ArcId, CapSide, GeometryError, PhasePoint, Table, TableClass, Vec2, CORNER_TOL, POSITION_TOL,
    TANGENCY_TOL,
};

/// Rays start this far along their direction before hits are accepted.
const LAUNCH_OFFSET: f64 = 1e3 * POSITION_TOL;
/// Largest number of stacked copies a single flight may traverse.
const MAX_LEVELS: f64 = 1e6;

/// Point of a lifted cap copy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiftedPoint {
    pub arc: ArcId,
    pub level: i64,
    pub r: f64,
}

/// Straight cap-to-cap flight in the lifted plane.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftedSegment {
    pub source: LiftedPoint,
    pub target: LiftedPoint,
    /// Argument of the flight line.
    pub argument: f64,
    /// Endpoints in the lifted plane (of the doubled table for semistadia).
    pub from: Vec2,
    pub to: Vec2,
    /// Wall reflections of the folded flight, as `(wall, r)` in order.
    pub wall_collisions: Vec<(ArcId, f64)>,
    /// Whether the flight crosses the mirror line of a semistadium.
    pub crossed_midline: bool,
    /// Collisions of the folded flight after the start, ending with the target cap.
    pub folded: Vec<PhasePoint>,
}

impl LiftedSegment {
    pub fn level_difference(&self) -> i64 {
        self.target.level - self.source.level
    }

    /// Phase point at the target cap, in the original table.
    pub fn landing(&self) -> PhasePoint {
        *self.folded.last().expect("a flight always lands")
    }
}

/// Raw lifted hit of a ray launched from a cap, in the frame of a full-class table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct LiftedHit {
    /// Ray parameter of the landing point.
    pub t: f64,
    /// Copy index `m` of the landing copy.
    pub copy: i64,
    /// Arclength on the opposite cap; may leave `[0, length]` when slack is used.
    pub s: f64,
}

/// Maps a lifted-plane ray into the frame of copy `m`.
pub(crate) fn to_copy(m: i64, origin: Vec2, dir: Vec2) -> (Vec2, Vec2) {
    if m.rem_euclid(2) == 0 {
        (Vec2::new(origin.x, origin.y - m as f64), dir)
    } else {
        (Vec2::new(origin.x, m as f64 + 1.0 - origin.y), Vec2::new(dir.x, -dir.y))
    }
}

/// Lifted-plane point of a point of copy `m`.
pub(crate) fn from_copy(m: i64, p: Vec2) -> Vec2 {
    if m.rem_euclid(2) == 0 {
        Vec2::new(p.x, p.y + m as f64)
    } else {
        Vec2::new(p.x, m as f64 + 1.0 - p.y)
    }
}

/// First cap copy met by the ray `origin + t dir` leaving the cap on side `from`.
///
/// `work` must be of the full class. With `slack > 0` the opposite cap is extended
/// along its end tangents and checks on the landing point are skipped; the wall
/// crossings are never checked here.
pub(crate) fn lifted_hit(
    work: &Table,
    from: CapSide,
    origin: Vec2,
    dir: Vec2,
    slack: f64,
) -> Result<LiftedHit, GeometryError> {
    let own = work.cap_curve(from);
    let other = work.cap_curve(from.opposite());
    let (xa, xb) = other.x_range();
    let span = (xa - origin.x).abs().max((xb - origin.x).abs()) + slack;
    if dir.x.abs() < 1e-300 {
        return Err(GeometryError::Domain("vertical flight never reaches the opposite cap".into()));
    }
    let t_max = span / dir.x.abs();
    let (y0, y1) = (origin.y, origin.y + t_max * dir.y);
    let (lo, hi) = (y0.min(y1).floor() - 1.0, y0.max(y1).floor() + 1.0);
    if hi - lo > MAX_LEVELS {
        return Err(GeometryError::Domain("flight too steep to lift".into()));
    }

    // (t, copy, s, kind) with kind 0 = opposite cap, 1 = own cap, 2 = untracked
    let mut best: Option<(f64, i64, f64, u8)> = None;
    let mut consider = |cand: (f64, i64, f64, u8)| {
        if best.is_none_or(|b| cand.0 < b.0) {
            best = Some(cand);
        }
    };
    for m in lo as i64..=hi as i64 {
        let (o, d) = to_copy(m, origin, dir);
        if let Some(h) = other.intersect_ray(o, d, LAUNCH_OFFSET, slack) {
            consider((h.t, m, h.s, 0));
        }
        if let Some(h) = own.intersect_ray(o, d, LAUNCH_OFFSET, 0.0) {
            consider((h.t, m, h.s, 1));
        }
        for c in work.untracked() {
            if let Some(h) = c.intersect_ray(o, d, LAUNCH_OFFSET, 0.0) {
                // only the part of a blocker inside the strip is reachable by a folded flight
                let y = o.y + h.t * d.y;
                if (-POSITION_TOL..=1.0 + POSITION_TOL).contains(&y) {
                    consider((h.t, m, h.s, 2));
                }
            }
        }
    }
    match best {
        Some((t, copy, s, 0)) => Ok(LiftedHit { t, copy, s }),
        Some((_, _, _, 1)) => Err(GeometryError::Recollision { arc: work.cap_id(from) }),
        Some((t, _, _, _)) => {
            let p = origin + dir * t;
            Err(GeometryError::NoCollision { x: p.x, y: p.y })
        }
        None => Err(GeometryError::NoCollision { x: origin.x, y: origin.y }),
    }
}

/// Integer levels `Y = n` crossed by the lifted segment, with ray parameters, in order.
fn wall_crossings(origin: Vec2, dir: Vec2, t_end: f64) -> Vec<(i64, f64)> {
    let y_end = origin.y + dir.y * t_end;
    let (lo, hi) = (origin.y.min(y_end), origin.y.max(y_end));
    let mut out: Vec<(i64, f64)> = ((lo.ceil() as i64)..=(hi.floor() as i64))
        .filter(|&n| (n as f64) > lo && (n as f64) < hi)
        .map(|n| (n, (n as f64 - origin.y) / dir.y))
        .collect();
    out.sort_by(|a, b| a.1.total_cmp(&b.1));
    out
}

/// Full-class table in which the flights of `table` are straight cap-to-cap segments.
pub(crate) fn working_table(table: &Table) -> std::borrow::Cow<'_, Table> {
    match table.doubled() {
        Some(d) => std::borrow::Cow::Owned(d),
        None => std::borrow::Cow::Borrowed(table),
    }
}

/// Straight lifted flight from a cap point along a line of argument `outgoing_arg`,
/// heading towards the opposite cap.
pub fn unfold_flight(table: &Table, start: PhasePoint, outgoing_arg: f64) -> Result<LiftedSegment, GeometryError> {
    let side = match (start.arc, table.side_of(start.arc)) {
        (ArcId::Flat, _) | (_, None) => {
            return Err(GeometryError::Domain(format!("flights start on a curved cap, not on {}", start.arc)))
        }
        (_, Some(side)) => side,
    };
    if !(outgoing_arg.abs() < std::f64::consts::FRAC_PI_2) {
        return Err(GeometryError::Domain(format!("argument {outgoing_arg} is not below pi/2")));
    }
    let work = working_table(table);
    let cap = table.cap_curve(side);
    let len = cap.length();
    if !(start.r >= -CORNER_TOL && start.r <= len + CORNER_TOL) {
        return Err(GeometryError::Domain(format!("r = {} outside the cap", start.r)));
    }
    let origin = cap.point_at(start.r);
    let dir = Vec2::from_angle(outgoing_arg) * side.heading();
    if dir.dot(cap.inward_normal(start.r)) <= 0.0 {
        return Err(GeometryError::Domain("flight does not enter the table".into()));
    }
    let hit = lifted_hit(&work, side, origin, dir, 0.0)?;
    fold(table, &work, side, start.r, origin, dir, hit)
}

/// Checks a lifted hit against the walls and target cap and folds it back.
pub(crate) fn fold(
    table: &Table,
    work: &Table,
    side: CapSide,
    r0: f64,
    origin: Vec2,
    dir: Vec2,
    hit: LiftedHit,
) -> Result<LiftedSegment, GeometryError> {
    let walls = work.walls();
    let real_walls = table.walls();
    let axis = table.mirror_axis();
    let flat = table.flat_side();
    // whether a point of the doubled table lies in the mirror half
    let mirrored = |x: f64| match (axis, flat) {
        (Some(a), Some(CapSide::Right)) => x > a,
        (Some(a), Some(CapSide::Left)) => x < a,
        _ => false,
    };
    let fold_x = |x: f64| if mirrored(x) { 2.0 * axis.unwrap() - x } else { x };
    let fold_dir = |x: f64, d: Vec2| if mirrored(x) { Vec2::new(-d.x, d.y) } else { d };
    // folded direction of the flight while inside copy m
    let copy_dir = |m: i64| to_copy(m, Vec2::default(), dir).1;

    let crossings = wall_crossings(origin, dir, hit.t);
    let mut events: Vec<(f64, PhasePoint, ArcId)> = Vec::with_capacity(crossings.len() + 2);
    for &(n, t) in &crossings {
        let x = origin.x + t * dir.x;
        let wall = if n.rem_euclid(2) == 0 { ArcId::Bottom } else { ArcId::Top };
        let r = x - walls.x_min;
        let wall_len = walls.x_max - walls.x_min;
        if r < -CORNER_TOL || r > wall_len + CORNER_TOL {
            return Err(GeometryError::NoCollision { x, y: n as f64 });
        }
        let near_mirror = axis.is_some_and(|a| (x - a).abs() < CORNER_TOL);
        if r < CORNER_TOL || r > wall_len - CORNER_TOL || near_mirror {
            let real_r = fold_x(x) - real_walls.x_min;
            return Err(GeometryError::CornerHit { arc: wall, r: real_r });
        }
        // the copy entered after crossing Y = n
        let entered = if dir.y > 0.0 { n } else { n - 1 };
        let out = fold_dir(x, copy_dir(entered));
        let curve = table.curve(wall);
        let real_r = fold_x(x) - real_walls.x_min;
        let phi = out.dot(curve.tangent_at(real_r)).atan2(out.dot(curve.inward_normal(real_r)));
        events.push((t, PhasePoint::new(wall, real_r, phi), wall));
    }

    let mut crossed_midline = false;
    if let (Some(a), Some(_)) = (axis, flat) {
        let t = (a - origin.x) / dir.x;
        if t > 0.0 && t < hit.t {
            crossed_midline = true;
            let y_lift = origin.y + t * dir.y;
            let m = y_lift.floor() as i64;
            let local = to_copy(m, Vec2::new(a, y_lift), Vec2::default()).0;
            if local.y < CORNER_TOL || local.y > 1.0 - CORNER_TOL {
                return Err(GeometryError::CornerHit { arc: ArcId::Flat, r: local.y });
            }
            let d_in = copy_dir(m);
            let out = Vec2::new(-d_in.x, d_in.y);
            let curve = table.curve(ArcId::Flat);
            let phi = out.dot(curve.tangent_at(local.y)).atan2(out.dot(curve.inward_normal(local.y)));
            events.push((t, PhasePoint::new(ArcId::Flat, local.y, phi), ArcId::Flat));
        }
    }
    events.sort_by(|a, b| a.0.total_cmp(&b.0));

    let target_side = side.opposite();
    let target_curve = work.cap_curve(target_side);
    let s = hit.s;
    let target_id = if flat.is_some() { table.cap_id(side) } else { table.cap_id(target_side) };
    if s < CORNER_TOL || s > target_curve.length() - CORNER_TOL {
        return Err(GeometryError::CornerHit { arc: target_id, r: s });
    }
    let d_in = copy_dir(hit.copy);
    let n = target_curve.inward_normal(s);
    if d_in.dot(n).abs() < TANGENCY_TOL.sin() {
        return Err(GeometryError::TangentialCollision { arc: target_id, r: s });
    }
    let out = d_in.reflect(n);
    let phi = out.dot(target_curve.tangent_at(s)).atan2(out.dot(n));

    let mut folded: Vec<PhasePoint> = events.iter().map(|e| e.1).collect();
    folded.push(PhasePoint::new(target_id, s, phi));
    let wall_collisions = events.iter().filter(|e| e.2.is_wall()).map(|e| (e.2, e.1.r)).collect();
    Ok(LiftedSegment {
        source: LiftedPoint { arc: table.cap_id(side), level: 0, r: r0 },
        target: LiftedPoint { arc: target_id, level: -hit.copy, r: s },
        argument: line_argument(dir),
        from: origin,
        to: origin + dir * hit.t,
        wall_collisions,
        crossed_midline,
        folded,
    })
}

/// Signed wall-collision count of every cap-to-cap block of an orbit.
///
/// Collisions before the first and after the last cap collision are ignored;
/// flat-cap collisions of a semistadium belong to the surrounding block.
pub fn level_differences(table: &Table, orbit: &[PhasePoint]) -> Result<Vec<i64>, GeometryError> {
    let semistadium = table.class() == TableClass::Semistadium;
    let mut out = Vec::new();
    let mut block: Option<(i64, i64, Option<ArcId>)> = None; // (sign, count, last wall)
    for (i, p) in orbit.iter().enumerate() {
        match p.arc {
            ArcId::Flat if semistadium => {}
            ArcId::Flat => return Err(GeometryError::Domain(format!("collision {i} on a flat cap of a full table"))),
            ArcId::Left | ArcId::Right => {
                if let Some((sign, count, _)) = block {
                    out.push(sign * count);
                }
                block = Some((0, 0, None));
            }
            wall => {
                if let Some((sign, count, last)) = block.as_mut() {
                    if *last == Some(wall) {
                        return Err(GeometryError::Domain(format!("collision {i}: two consecutive hits on {wall}")));
                    }
                    if *count == 0 {
                        *sign = if wall == ArcId::Bottom { 1 } else { -1 };
                    }
                    *count += 1;
                    *last = Some(wall);
                }
            }
        }
    }
    Ok(out)
}

/// Phase point at a cap whose outgoing direction has line argument `arg`
/// and heads to the opposite cap.
pub fn cap_launch(table: &Table, side: CapSide, r: f64, arg: f64) -> Result<PhasePoint, GeometryError> {
    let dir = Vec2::from_angle(arg) * side.heading();
    crate::geometry::phase_point_from_direction(table, table.cap_id(side), r, dir)
}
