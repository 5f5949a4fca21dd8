use std::f64::consts::FRAC_PI_2;

use super::table::{ArcId, PhasePoint, Table, TrajectorySegment};
use super::{line_argument, GeometryError, Vec2, CORNER_TOL, POSITION_TOL, TANGENCY_TOL};

/// Rays start this far along their direction before hits are accepted.
const LAUNCH_OFFSET: f64 = 1e3 * POSITION_TOL;

/// Position and unit outgoing direction of a phase point.
pub fn launch_direction(table: &Table, p: &PhasePoint) -> Result<(Vec2, Vec2), GeometryError> {
    let curve = table.curve(p.arc);
    let len = curve.length();
    if !(p.r >= -CORNER_TOL && p.r <= len + CORNER_TOL) {
        return Err(GeometryError::Domain(format!("r = {} outside [0, {len}] on {}", p.r, p.arc)));
    }
    if !(p.phi.abs() < FRAC_PI_2) {
        return Err(GeometryError::Domain(format!("reflection angle {} does not point into the table", p.phi)));
    }
    let (s, c) = p.phi.sin_cos();
    let dir = curve.inward_normal(p.r) * c + curve.tangent_at(p.r) * s;
    Ok((curve.point_at(p.r), dir))
}

/// Phase point at `(arc, r)` whose outgoing direction is `dir`.
pub fn phase_point_from_direction(table: &Table, arc: ArcId, r: f64, dir: Vec2) -> Result<PhasePoint, GeometryError> {
    let curve = table.curve(arc);
    let n = curve.inward_normal(r);
    let t = curve.tangent_at(r);
    let along_n = dir.dot(n);
    if !(along_n > 0.0) {
        return Err(GeometryError::Domain(format!("direction does not enter the table at {arc}, r = {r}")));
    }
    Ok(PhasePoint::new(arc, r, dir.dot(t).atan2(along_n)))
}

/// One step of the billiard map.
pub fn next_collision(table: &Table, p: &PhasePoint) -> Result<(PhasePoint, TrajectorySegment), GeometryError> {
    let (origin, dir) = launch_direction(table, p)?;

    // (ray parameter, tracked arc or None for untracked, curve parameter)
    let mut best: Option<(f64, Option<ArcId>, f64)> = None;
    for arc in table.arcs() {
        if let Some(hit) = table.curve(arc).intersect_ray(origin, dir, LAUNCH_OFFSET, 0.0) {
            if best.is_none_or(|b| hit.t < b.0) {
                best = Some((hit.t, Some(arc), hit.s));
            }
        }
    }
    for curve in table.untracked() {
        if let Some(hit) = curve.intersect_ray(origin, dir, LAUNCH_OFFSET, 0.0) {
            if best.is_none_or(|b| hit.t < b.0) {
                best = Some((hit.t, None, hit.s));
            }
        }
    }
    let Some((t, arc, s)) = best else {
        return Err(GeometryError::NoCollision { x: origin.x, y: origin.y });
    };
    let hit_point = origin + dir * t;
    let Some(arc) = arc else {
        return Err(GeometryError::NoCollision { x: hit_point.x, y: hit_point.y });
    };
    let curve = table.curve(arc);
    if s < CORNER_TOL || s > curve.length() - CORNER_TOL {
        return Err(GeometryError::CornerHit { arc, r: s });
    }
    let n = curve.inward_normal(s);
    if dir.dot(n).abs() < TANGENCY_TOL.sin() {
        return Err(GeometryError::TangentialCollision { arc, r: s });
    }
    let out = dir.reflect(n);
    let next = PhasePoint::new(arc, s, out.dot(curve.tangent_at(s)).atan2(out.dot(n)));
    let segment = TrajectorySegment {
        start: *p,
        end: next,
        from: origin,
        to: hit_point,
        argument: line_argument(dir),
        length: t,
    };
    Ok((next, segment))
}

/// Iterates the billiard map up to `steps` times; stops early at the first error.
///
/// The returned orbit starts with `start`.
pub fn trace_orbit(table: &Table, start: PhasePoint, steps: usize) -> (Vec<PhasePoint>, Option<GeometryError>) {
    let mut orbit = Vec::with_capacity(steps + 1);
    orbit.push(start);
    let mut cur = start;
    for _ in 0..steps {
        match next_collision(table, &cur) {
            Ok((next, _)) => {
                orbit.push(next);
                cur = next;
            }
            Err(e) => return (orbit, Some(e)),
        }
    }
    (orbit, None)
}

#[cfg(test)]
mod tests {
    use super::super::{make_mushroom, make_stadium, CapSide, Curve, Walls};
    use super::*;
    use std::f64::consts::PI;

    /// Independent ray/circle intersection: solve |o + t d - c|^2 = R^2 directly.
    fn ray_circle_oracle(o: Vec2, d: Vec2, c: Vec2, radius: f64) -> f64 {
        let a = d.dot(d);
        let b = 2.0 * d.dot(o - c);
        let cc = (o - c).dot(o - c) - radius * radius;
        let disc = (b * b - 4.0 * a * cc).sqrt();
        let roots = [(-b - disc) / (2.0 * a), (-b + disc) / (2.0 * a)];
        // the ray enters the disk inside the rectangle and leaves through the cap
        roots.into_iter().fold(f64::NEG_INFINITY, f64::max)
    }

    #[test]
    fn perpendicular_bounce_between_walls() {
        let t = make_stadium(3.0, 1.0).unwrap();
        let x0 = 1.25;
        let p = PhasePoint::new(ArcId::Bottom, x0, 0.0);
        let (q, seg) = next_collision(&t, &p).unwrap();
        assert_eq!(q.arc, ArcId::Top);
        assert!((q.r - x0).abs() < 1e-15);
        assert!(q.phi.abs() < 1e-15);
        assert_eq!(seg.argument, FRAC_PI_2);
        assert!((seg.length - 1.0).abs() < 1e-15);
    }

    #[test]
    fn flat_cap_normal_incidence_retraces() {
        let t = make_mushroom(2.0, 0.5).unwrap();
        let cap_len = t.curve(ArcId::Left).length();
        let p = phase_point_from_direction(&t, ArcId::Left, 0.3 * cap_len, Vec2::new(1.0, 0.0)).unwrap();
        let (q, seg) = next_collision(&t, &p).unwrap();
        assert_eq!(q.arc, ArcId::Flat);
        assert!(q.phi.abs() < 1e-15);
        let (back, seg_back) = next_collision(&t, &q).unwrap();
        assert_eq!(back.arc, ArcId::Left);
        assert!((back.r - p.r).abs() < 1e-12);
        assert!(seg_back.to.dist(seg.from) < 1e-12);
        assert!(seg_back.from.dist(seg.to) < 1e-15);
    }

    #[test]
    fn stadium_cap_reflection_matches_circle_oracle() {
        let t = make_stadium(2.0, 1.0).unwrap();
        let wall_len = t.curve(ArcId::Bottom).length();
        // from the bottom wall aimed at the right cap
        let p = PhasePoint::new(ArcId::Bottom, 1.7, 0.9);
        let (origin, dir) = launch_direction(&t, &p).unwrap();
        let (q, seg) = next_collision(&t, &p).unwrap();
        assert_eq!(q.arc, ArcId::Right);
        let t_oracle = ray_circle_oracle(origin, dir, Vec2::new(wall_len, 0.5), 0.5);
        assert!((seg.length - t_oracle).abs() < 1e-10);
        let hit = origin + dir * t_oracle;
        assert!(seg.to.dist(hit) < 1e-10);
        // specular law at the hit
        let n = (Vec2::new(wall_len, 0.5) - hit).normalized();
        let out = dir - n * (2.0 * dir.dot(n));
        let (_, out_dir) = launch_direction(&t, &q).unwrap();
        assert!(out.dist(out_dir) < 1e-10);
    }

    #[test]
    fn time_reversal_returns_to_start() {
        let t = make_stadium(2.0, 1.0).unwrap();
        let dir = Vec2::from_angle(0.05);
        let p = phase_point_from_direction(&t, ArcId::Left, 0.3, dir).unwrap();
        let (q, _) = next_collision(&t, &p).unwrap();
        assert!(!q.arc.is_wall() || q.arc == ArcId::Top);
        let (back, _) = next_collision(&t, &q.reversed()).unwrap();
        assert_eq!(back.arc, p.arc);
        assert!((back.r - p.r).abs() < 1e-9);
        assert!((back.phi + p.phi).abs() < 1e-9);
    }

    #[test]
    fn escaping_and_corner_rays_are_reported() {
        let t = make_stadium(2.0, 1.0).unwrap();
        // steep ray from the left cap hits the untracked part of the right semicircle
        let p = PhasePoint::new(ArcId::Left, 0.1, 1.2);
        let err = trace_orbit(&t, p, 50).1.unwrap();
        assert!(matches!(err, GeometryError::NoCollision { .. } | GeometryError::CornerHit { .. }));
        // straight at the end of the bottom wall
        let b = PhasePoint::new(ArcId::Top, 1.0, 0.0);
        let walls = Walls { x_min: 0.0, x_max: 1.0 };
        let cap_l = Curve::segment(Vec2::new(-0.5, 0.9), Vec2::new(-0.5, 0.1), true).unwrap();
        let cap_r = Curve::segment(Vec2::new(1.5, 0.1), Vec2::new(1.5, 0.9), true).unwrap();
        let box_table = super::super::Table::full(walls, cap_l, cap_r, vec![], 0.3).unwrap();
        let corner = PhasePoint::new(ArcId::Top, 1.0 - 1e-12, 0.0);
        assert!(matches!(next_collision(&box_table, &corner), Err(GeometryError::CornerHit { .. })));
        assert!(next_collision(&box_table, &b).is_err());
    }

    #[test]
    fn launch_rejects_bad_phase_points() {
        let t = make_stadium(2.0, 1.0).unwrap();
        assert!(launch_direction(&t, &PhasePoint::new(ArcId::Bottom, -1.0, 0.0)).is_err());
        assert!(launch_direction(&t, &PhasePoint::new(ArcId::Bottom, 1.0, FRAC_PI_2)).is_err());
        assert_eq!(t.cap_id(CapSide::Left), ArcId::Left);
        let dir = Vec2::from_angle(PI / 3.0);
        let p = phase_point_from_direction(&t, ArcId::Bottom, 1.0, dir).unwrap();
        let (_, d) = launch_direction(&t, &p).unwrap();
        assert!(d.dist(dir) < 1e-15);
    }
}
