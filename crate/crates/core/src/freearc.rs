//! Sampled verification that a cap arc is eps-free, and the alphabet bound `N`.
//!
//! An arc is eps-free when it is a regular curve, every trajectory leaving it with
//! argument in `[-eps, eps]` reaches the opposite cap before returning to its own,
//! it contains points whose normal arguments reach `eps` and `-eps`, and it does not
//! touch the walls. The trajectory condition is checked on a finite grid only, so
//! every certificate is marked non-rigorous.

use std::fmt;

use rayon::prelude::*;

use crate::geometry::{
    next_collision, phase_point_from_direction, ArcId, CapSide, Curve, GeometryError, PhasePoint, Table, TableClass,
    Vec2, EPS_LIMIT,
};
use crate::unfolding::working_table;

/// Default number of position samples per cap.
pub const DEFAULT_POSITION_SAMPLES: usize = 512;
/// Default number of angle steps per `eps`.
pub const DEFAULT_ANGLE_SAMPLES: usize = 256;

const MARKER_SCAN: usize = 4096;
const MAX_FLIGHT_STEPS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FreeArcError {
    #[error("normal arguments on the arc span [{min}, {max}] and miss +/-{eps}")]
    NoMarker { eps: f64, min: f64, max: f64 },
    #[error("domain error: {0}")]
    Domain(String),
}

/// Condition of the eps-free definition that a witness violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FreeCondition {
    /// Regularity of the arc.
    Regular,
    /// Trajectories reach the opposite cap first.
    Reach,
    /// Normal arguments reach `eps` and `-eps`.
    Markers,
    /// The arc stays away from the walls.
    Disjoint,
}

impl fmt::Display for FreeCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FreeCondition::Regular => "regular",
            FreeCondition::Reach => "reach",
            FreeCondition::Markers => "markers",
            FreeCondition::Disjoint => "disjoint",
        })
    }
}

/// Sample that failed, with the position and argument where it failed.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub condition: FreeCondition,
    pub r: f64,
    pub theta: f64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FreeArcCertificate {
    pub arc: ArcId,
    pub eps: f64,
    pub p_plus: Option<f64>,
    pub p_minus: Option<f64>,
    pub position_grid_step: f64,
    pub angle_grid_step: f64,
    pub samples_checked: usize,
    /// Always false: the trajectory condition is only sampled.
    pub rigorous: bool,
    /// Sorted by condition, position, then angle.
    pub failures: Vec<Witness>,
}

impl FreeArcCertificate {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Positions on `curve` whose normal argument is at least `eps` and at most `-eps`.
pub fn find_marker_points(curve: &Curve, eps: f64) -> Result<(f64, f64), FreeArcError> {
    if !(eps > 0.0 && eps < EPS_LIMIT) {
        return Err(FreeArcError::Domain(format!("eps must lie in (0, pi/6), got {eps}")));
    }
    let plus = marker(curve, eps, 1.0);
    let minus = marker(curve, eps, -1.0);
    match (plus, minus) {
        (Some(p), Some(m)) => Ok((p, m)),
        _ => {
            let len = curve.length();
            let args: Vec<f64> =
                (0..=MARKER_SCAN).map(|k| curve.normal_argument(len * k as f64 / MARKER_SCAN as f64)).collect();
            let min = args.iter().copied().fold(f64::INFINITY, f64::min);
            let max = args.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            Err(FreeArcError::NoMarker { eps, min, max })
        }
    }
}

/// First position with `sign * normal_argument >= eps`.
fn marker(curve: &Curve, eps: f64, sign: f64) -> Option<f64> {
    let len = curve.length();
    let good = |s: f64| sign * curve.normal_argument(s) >= eps;
    if let Some(arc) = curve.as_arc() {
        // the inward normal line turns with the polar angle: solve polar angle = sign * eps (mod pi)
        let dir = arc.sweep.signum();
        let target = sign * eps;
        let base = (target - arc.start_angle) * dir;
        let period = std::f64::consts::PI;
        let k = (-base / period).ceil();
        let s = (base + k * period) * arc.radius;
        if s <= len {
            // land on the good side of the exact crossing despite rounding
            for nudge in [0.0, 1e-15, -1e-15, 1e-13, -1e-13, 1e-12, -1e-12] {
                let c = (s + nudge).clamp(0.0, len);
                if good(c) {
                    return Some(c);
                }
            }
        }
        return None;
    }
    let mut prev: Option<f64> = None;
    for k in 0..=MARKER_SCAN {
        let s = len * k as f64 / MARKER_SCAN as f64;
        if good(s) {
            let Some(mut lo) = prev else { return Some(s) };
            let mut hi = s;
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if good(mid) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return Some(hi);
        }
        prev = Some(s);
    }
    None
}

/// Arguments sampled from `[-eps, eps]` with step at most `grid`.
fn angle_samples(eps: f64, grid: f64) -> Vec<f64> {
    if eps == 0.0 {
        return vec![0.0];
    }
    let steps = ((2.0 * eps / grid).ceil() as usize).max(1);
    (0..=steps).map(|k| -eps + 2.0 * eps * k as f64 / steps as f64).collect()
}

/// Follows the trajectory from `p` until it meets a cap; true iff that is the opposite cap.
///
/// Untracked boundary beyond the middle of the walls belongs to the opposite cap curve,
/// so reaching it counts as success.
fn reaches_opposite(work: &Table, side: CapSide, p: PhasePoint) -> Result<(), String> {
    let target = work.cap_id(side.opposite());
    let own = work.cap_id(side);
    let walls = work.walls();
    let middle = 0.5 * (walls.x_min + walls.x_max);
    let mut cur = p;
    for _ in 0..MAX_FLIGHT_STEPS {
        let next = match next_collision(work, &cur) {
            Ok((next, _)) => next,
            Err(GeometryError::NoCollision { x, .. }) if (x - middle) * side.heading() > 0.0 => return Ok(()),
            Err(GeometryError::CornerHit { arc, .. } | GeometryError::TangentialCollision { arc, .. })
                if arc == target =>
            {
                return Ok(())
            }
            Err(e) => return Err(e.to_string()),
        };
        if next.arc == target {
            return Ok(());
        }
        if next.arc == own {
            return Err(format!("returns to its own cap at r = {}", next.r));
        }
        cur = next;
    }
    Err("no cap collision within the step limit".into())
}

/// Checks that trajectories leaving the cap at `r` with every sampled argument in
/// `[-eps, eps]` reach the opposite cap first.
pub fn verify_point_free(table: &Table, side: CapSide, r: f64, eps: f64, grid: f64) -> Result<usize, Witness> {
    let work = working_table(table);
    point_free_in(table, &work, side, r, eps, grid)
}

fn point_free_in(table: &Table, work: &Table, side: CapSide, r: f64, eps: f64, grid: f64) -> Result<usize, Witness> {
    let thetas = angle_samples(eps, grid);
    let fail = |theta: f64, reason: String| Witness { condition: FreeCondition::Reach, r, theta, reason };
    if table.flat_side() == Some(side) {
        return Err(fail(0.0, "the flat cap carries no free arc".into()));
    }
    for &theta in &thetas {
        let dir = Vec2::from_angle(theta) * side.heading();
        let p = phase_point_from_direction(work, work.cap_id(side), r, dir)
            .map_err(|_| fail(theta, "direction points out of the table".into()))?;
        reaches_opposite(work, side, p).map_err(|reason| fail(theta, reason))?;
    }
    Ok(thetas.len())
}

/// Sampled check of all conditions of the eps-free definition for the cap on `side`.
///
/// `position_step` and `angle_step` are the grid spacings along the arc and in argument.
pub fn verify_arc_free(
    table: &Table,
    side: CapSide,
    eps: f64,
    position_step: f64,
    angle_step: f64,
) -> FreeArcCertificate {
    let arc = table.cap_id(side);
    let curve = table.cap_curve(side);
    let len = curve.length();
    let mut failures = Vec::new();

    // regularity holds by construction of every curve kind; a flat cap cannot carry markers
    if !(0.0..EPS_LIMIT).contains(&eps) || !(position_step > 0.0) || !(angle_step > 0.0) {
        failures.push(Witness {
            condition: FreeCondition::Regular,
            r: 0.0,
            theta: eps,
            reason: "eps outside [0, pi/6) or non-positive grid".into(),
        });
        return FreeArcCertificate {
            arc,
            eps,
            p_plus: None,
            p_minus: None,
            position_grid_step: position_step,
            angle_grid_step: angle_step,
            samples_checked: 0,
            rigorous: false,
            failures,
        };
    }

    let work = working_table(table);
    let n_pos = ((len / position_step).ceil() as usize).max(1);
    let results: Vec<Result<usize, Witness>> = (0..=n_pos)
        .into_par_iter()
        .map(|k| point_free_in(table, &work, side, len * k as f64 / n_pos as f64, eps, angle_step))
        .collect();
    let mut samples_checked = 0;
    for res in results {
        match res {
            Ok(n) => samples_checked += n,
            Err(w) => failures.push(w),
        }
    }

    let (p_plus, p_minus) = if eps > 0.0 {
        match find_marker_points(curve, eps) {
            Ok((p, m)) => (Some(p), Some(m)),
            Err(e) => {
                failures.push(Witness { condition: FreeCondition::Markers, r: 0.0, theta: eps, reason: e.to_string() });
                (marker(curve, eps, 1.0), marker(curve, eps, -1.0))
            }
        }
    } else {
        (Some(0.0), Some(0.0))
    };

    let walls = table.walls();
    for (wall, y) in [(ArcId::Bottom, 0.0), (ArcId::Top, 1.0)] {
        let d = curve.distance_to_segment(Vec2::new(walls.x_min, y), Vec2::new(walls.x_max, y));
        if !(d > 0.0) {
            failures.push(Witness {
                condition: FreeCondition::Disjoint,
                r: 0.0,
                theta: 0.0,
                reason: format!("arc touches {wall}"),
            });
        }
    }

    failures.sort_by(|a, b| a.condition.cmp(&b.condition).then(a.r.total_cmp(&b.r)).then(a.theta.total_cmp(&b.theta)));
    FreeArcCertificate {
        arc,
        eps,
        p_plus,
        p_minus,
        position_grid_step: len / n_pos as f64,
        angle_grid_step: angle_step,
        samples_checked,
        rigorous: false,
        failures,
    }
}

/// [`verify_arc_free`] with the default grids: arc length / 512 and eps / 256.
pub fn verify_arc_free_default(table: &Table, side: CapSide, eps: f64) -> FreeArcCertificate {
    let len = table.cap_curve(side).length();
    let angle_step = if eps > 0.0 { eps / DEFAULT_ANGLE_SAMPLES as f64 } else { 1.0 };
    verify_arc_free(table, side, eps, len / DEFAULT_POSITION_SAMPLES as f64, angle_step)
}

/// Largest `N >= 0` with `N + 1 <= reach`, where the reach is `ell tan eps`,
/// doubled for semistadia; `-1` when there is none.
///
/// Products that land within a relative `1e-12` below an integer count as that
/// integer, so thresholds given in closed form are met exactly.
pub fn max_symbol_bound(ell: f64, eps: f64, class: TableClass) -> i64 {
    let reach = match class {
        TableClass::Full => ell * eps.tan(),
        TableClass::Semistadium => 2.0 * ell * eps.tan(),
    };
    if !reach.is_finite() || reach < 0.0 {
        return -1;
    }
    (reach + 1e-12 * reach.max(1.0)).floor() as i64 - 1
}
