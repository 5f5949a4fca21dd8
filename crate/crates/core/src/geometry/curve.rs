use std::f64::consts::{PI, TAU};

use super::{line_argument, Vec2, POSITION_TOL};

/// Default cap on the tangent turn between adjacent samples of a sampled curve.
pub const DEFAULT_MAX_TURN: f64 = 0.2;

/// Arclength slack accepted at the ends of an arc when intersecting rays.
const SEAM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CurveError {
    #[error("curve has zero or negative length")]
    Degenerate,
    #[error("sampled curve needs at least two samples, got {0}")]
    TooFewSamples(usize),
    #[error("samples {0} and {1} coincide")]
    RepeatedSample(usize, usize),
    #[error("tangent at sample {0} is zero or not finite")]
    BadTangent(usize),
    #[error("tangent turns by {turn} rad between samples {index} and {next} (cap {cap})", next = .index + 1)]
    TooSharp { index: usize, turn: f64, cap: f64 },
    #[error("tangent at sample {0} points against the chord")]
    Backtracking(usize),
    #[error("circular arc needs a positive radius and a sweep in (0, 2pi)")]
    BadArc,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LineSegment {
    pub start: Vec2,
    pub end: Vec2,
}

/// Arc of a circle. `sweep` is signed: positive runs counterclockwise from `start_angle`.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleArc {
    pub center: Vec2,
    pub radius: f64,
    pub start_angle: f64,
    pub sweep: f64,
}

/// C1 curve through sample points with prescribed unit tangents.
///
/// Consecutive samples are joined by cubic Hermite pieces. The curve parameter is
/// the cumulative chord length between samples, which stands in for arclength.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledCurve {
    points: Vec<Vec2>,
    tangents: Vec<Vec2>,
    /// cumulative[i] = parameter value at sample i
    cumulative: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
enum Shape {
    Segment(LineSegment),
    Arc(CircleArc),
    Sampled(SampledCurve),
}

/// A boundary curve together with the side on which the table interior lies.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    shape: Shape,
    interior_left: bool,
}

/// Intersection of a ray with a curve: ray parameter `t` and curve parameter `s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveHit {
    pub t: f64,
    pub s: f64,
}

impl Curve {
    pub fn segment(start: Vec2, end: Vec2, interior_left: bool) -> Result<Self, CurveError> {
        if !(start.dist(end) > 0.0) {
            return Err(CurveError::Degenerate);
        }
        Ok(Self { shape: Shape::Segment(LineSegment { start, end }), interior_left })
    }

    pub fn arc(
        center: Vec2,
        radius: f64,
        start_angle: f64,
        sweep: f64,
        interior_left: bool,
    ) -> Result<Self, CurveError> {
        if !(radius > 0.0) || !(sweep.abs() > 0.0) || !(sweep.abs() < TAU) || !start_angle.is_finite() {
            return Err(CurveError::BadArc);
        }
        Ok(Self { shape: Shape::Arc(CircleArc { center, radius, start_angle, sweep }), interior_left })
    }

    pub fn sampled(points: Vec<Vec2>, tangents: Vec<Vec2>, interior_left: bool) -> Result<Self, CurveError> {
        Self::sampled_with_cap(points, tangents, interior_left, DEFAULT_MAX_TURN)
    }

    pub fn sampled_with_cap(
        points: Vec<Vec2>,
        tangents: Vec<Vec2>,
        interior_left: bool,
        max_turn: f64,
    ) -> Result<Self, CurveError> {
        let n = points.len();
        if n < 2 || tangents.len() != n {
            return Err(CurveError::TooFewSamples(n.min(tangents.len())));
        }
        let mut units = Vec::with_capacity(n);
        for (i, t) in tangents.iter().enumerate() {
            let norm = t.norm();
            if !(norm > 0.0) || !norm.is_finite() {
                return Err(CurveError::BadTangent(i));
            }
            units.push(*t * (1.0 / norm));
        }
        let mut cumulative = Vec::with_capacity(n);
        cumulative.push(0.0);
        for i in 0..n - 1 {
            let chord = points[i + 1] - points[i];
            let h = chord.norm();
            if !(h > POSITION_TOL) {
                return Err(CurveError::RepeatedSample(i, i + 1));
            }
            if chord.dot(units[i]) <= 0.0 {
                return Err(CurveError::Backtracking(i));
            }
            if chord.dot(units[i + 1]) <= 0.0 {
                return Err(CurveError::Backtracking(i + 1));
            }
            let turn = units[i].cross(units[i + 1]).atan2(units[i].dot(units[i + 1])).abs();
            if turn > max_turn {
                return Err(CurveError::TooSharp { index: i, turn, cap: max_turn });
            }
            cumulative.push(cumulative[i] + h);
        }
        Ok(Self { shape: Shape::Sampled(SampledCurve { points, tangents: units, cumulative }), interior_left })
    }

    pub fn kind(&self) -> &'static str {
        match self.shape {
            Shape::Segment(_) => "segment",
            Shape::Arc(_) => "arc",
            Shape::Sampled(_) => "sampled",
        }
    }

    pub fn as_segment(&self) -> Option<&LineSegment> {
        match &self.shape {
            Shape::Segment(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_arc(&self) -> Option<&CircleArc> {
        match &self.shape {
            Shape::Arc(a) => Some(a),
            _ => None,
        }
    }

    pub fn as_sampled(&self) -> Option<&SampledCurve> {
        match &self.shape {
            Shape::Sampled(c) => Some(c),
            _ => None,
        }
    }

    pub fn interior_left(&self) -> bool {
        self.interior_left
    }

    pub fn length(&self) -> f64 {
        match &self.shape {
            Shape::Segment(l) => l.start.dist(l.end),
            Shape::Arc(a) => a.radius * a.sweep.abs(),
            Shape::Sampled(c) => *c.cumulative.last().unwrap(),
        }
    }

    pub fn start_point(&self) -> Vec2 {
        self.point_at(0.0)
    }

    pub fn end_point(&self) -> Vec2 {
        self.point_at(self.length())
    }

    /// Point at parameter `s`; values outside `[0, length]` continue along the end tangents.
    pub fn point_at(&self, s: f64) -> Vec2 {
        let len = self.length();
        if s < 0.0 {
            return self.point_inside(0.0) - self.tangent_inside(0.0) * (-s);
        }
        if s > len {
            return self.point_inside(len) + self.tangent_inside(len) * (s - len);
        }
        self.point_inside(s)
    }

    /// Unit tangent in the direction of increasing `s`.
    pub fn tangent_at(&self, s: f64) -> Vec2 {
        self.tangent_inside(s.clamp(0.0, self.length()))
    }

    /// Unit normal pointing into the table.
    pub fn inward_normal(&self, s: f64) -> Vec2 {
        let t = self.tangent_at(s);
        if self.interior_left {
            t.perp()
        } else {
            -t.perp()
        }
    }

    /// Argument of the normal line at `s`.
    pub fn normal_argument(&self, s: f64) -> f64 {
        line_argument(self.inward_normal(s))
    }

    fn point_inside(&self, s: f64) -> Vec2 {
        match &self.shape {
            Shape::Segment(l) => {
                let len = l.start.dist(l.end);
                l.start + (l.end - l.start) * (s / len)
            }
            Shape::Arc(a) => a.point_at_angle(a.angle_at(s)),
            Shape::Sampled(c) => {
                let (i, u) = c.locate(s);
                c.hermite(i, u)
            }
        }
    }

    fn tangent_inside(&self, s: f64) -> Vec2 {
        match &self.shape {
            Shape::Segment(l) => (l.end - l.start).normalized(),
            Shape::Arc(a) => {
                let (sn, cs) = a.angle_at(s).sin_cos();
                Vec2::new(-sn, cs) * a.sweep.signum()
            }
            Shape::Sampled(c) => {
                let (i, u) = c.locate(s);
                c.hermite_derivative(i, u).normalized()
            }
        }
    }

    /// Nearest crossing of the ray `origin + t * dir` (unit `dir`) with `t > t_min`.
    ///
    /// Crossings with the tangent extensions past the ends are reported as well when
    /// they lie within `slack` of the curve, with `s` outside `[0, length]`.
    pub fn intersect_ray(&self, origin: Vec2, dir: Vec2, t_min: f64, slack: f64) -> Option<CurveHit> {
        let len = self.length();
        let mut best = match &self.shape {
            Shape::Segment(l) => {
                segment_hit(l.start, l.end, origin, dir, t_min).map(|(t, u)| CurveHit { t, s: u * len })
            }
            Shape::Arc(a) => a.intersect(origin, dir, t_min),
            Shape::Sampled(c) => c.intersect(origin, dir, t_min),
        };
        if slack > 0.0 {
            let ends = [
                (self.point_inside(0.0), -self.tangent_inside(0.0), false),
                (self.point_inside(len), self.tangent_inside(len), true),
            ];
            // the extensions reach slightly back over the curve so no ray slips through the seam
            let overlap = 1e-9 * slack;
            for (p, t, at_end) in ends {
                if let Some((t_ray, u)) = segment_hit(p - t * overlap, p + t * slack, origin, dir, t_min) {
                    let along = u * (slack + overlap) - overlap;
                    let s = if at_end { len + along } else { -along };
                    if best.is_none_or(|b| t_ray < b.t) {
                        best = Some(CurveHit { t: t_ray, s });
                    }
                }
            }
        }
        best
    }

    /// The same curve mirrored in the vertical line `x = axis`, keeping its parameter.
    pub fn mirrored_x(&self, axis: f64) -> Self {
        let mirror = |p: Vec2| Vec2::new(2.0 * axis - p.x, p.y);
        let mirror_dir = |d: Vec2| Vec2::new(-d.x, d.y);
        let shape = match &self.shape {
            Shape::Segment(l) => Shape::Segment(LineSegment { start: mirror(l.start), end: mirror(l.end) }),
            Shape::Arc(a) => Shape::Arc(CircleArc {
                center: mirror(a.center),
                radius: a.radius,
                start_angle: PI - a.start_angle,
                sweep: -a.sweep,
            }),
            Shape::Sampled(c) => Shape::Sampled(SampledCurve {
                points: c.points.iter().copied().map(mirror).collect(),
                tangents: c.tangents.iter().copied().map(mirror_dir).collect(),
                cumulative: c.cumulative.clone(),
            }),
        };
        Self { shape, interior_left: !self.interior_left }
    }

    /// Dense polyline approximation, for drawing and coarse extent queries.
    pub fn polyline(&self, per_piece: usize) -> Vec<Vec2> {
        let per_piece = per_piece.max(1);
        match &self.shape {
            Shape::Segment(l) => vec![l.start, l.end],
            Shape::Arc(a) => {
                let n = ((a.sweep.abs() / (PI / 64.0)).ceil() as usize).max(2) * per_piece;
                (0..=n).map(|k| a.point_at_angle(a.start_angle + a.sweep * k as f64 / n as f64)).collect()
            }
            Shape::Sampled(c) => {
                let mut out = vec![c.points[0]];
                for i in 0..c.points.len() - 1 {
                    for k in 1..=per_piece {
                        out.push(c.hermite(i, k as f64 / per_piece as f64));
                    }
                }
                out
            }
        }
    }

    /// `(min, max)` of the x coordinate over the curve.
    pub fn x_range(&self) -> (f64, f64) {
        self.extent(|p| p.x, 0.0)
    }

    /// `(min, max)` of the y coordinate over the curve.
    pub fn y_range(&self) -> (f64, f64) {
        self.extent(|p| p.y, PI / 2.0)
    }

    fn extent(&self, coord: impl Fn(Vec2) -> f64, axis_angle: f64) -> (f64, f64) {
        let mut pts = vec![self.start_point(), self.end_point()];
        match &self.shape {
            Shape::Segment(_) => {}
            Shape::Arc(a) => {
                for k in -4..=4 {
                    let ang = axis_angle + k as f64 * PI;
                    if a.contains_angle(ang) {
                        pts.push(a.point_at_angle(ang));
                    }
                }
            }
            Shape::Sampled(_) => pts.extend(self.polyline(64)),
        }
        let lo = pts.iter().map(|&p| coord(p)).fold(f64::INFINITY, f64::min);
        let hi = pts.iter().map(|&p| coord(p)).fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    }

    /// Smallest distance between the curve and the segment `[a, b]`.
    ///
    /// Exact for segments and arcs; sampled curves are measured on a dense polyline.
    pub fn distance_to_segment(&self, a: Vec2, b: Vec2) -> f64 {
        match &self.shape {
            Shape::Segment(l) => segment_segment_distance(l.start, l.end, a, b),
            Shape::Arc(arc) => arc.distance_to_segment(a, b),
            Shape::Sampled(_) => {
                let poly = self.polyline(64);
                poly.windows(2).map(|w| segment_segment_distance(w[0], w[1], a, b)).fold(f64::INFINITY, f64::min)
            }
        }
    }
}

impl CircleArc {
    fn angle_at(&self, s: f64) -> f64 {
        self.start_angle + self.sweep.signum() * s / self.radius
    }

    fn point_at_angle(&self, ang: f64) -> Vec2 {
        self.center + Vec2::from_angle(ang) * self.radius
    }

    /// Signed offset of `ang` from the arc start, in sweep direction, with the
    /// wrap chosen closest to the arc's middle.
    fn param_of_angle(&self, ang: f64) -> f64 {
        let mid = self.start_angle + self.sweep / 2.0;
        let delta = wrap_pi(ang - mid);
        (delta * self.sweep.signum() + self.sweep.abs() / 2.0) * self.radius
    }

    fn contains_angle(&self, ang: f64) -> bool {
        let s = self.param_of_angle(ang);
        (0.0..=self.radius * self.sweep.abs()).contains(&s)
    }

    fn intersect(&self, origin: Vec2, dir: Vec2, t_min: f64) -> Option<CurveHit> {
        let oc = origin - self.center;
        let b = dir.dot(oc);
        let c = oc.dot(oc) - self.radius * self.radius;
        let disc = b * b - c;
        if disc < 0.0 {
            return None;
        }
        let sq = disc.sqrt();
        let q = -b - b.signum() * sq;
        let roots = if q == 0.0 { [-b, -b] } else { [q, c / q] };
        let len = self.radius * self.sweep.abs();
        let mut best: Option<CurveHit> = None;
        for t in roots {
            if !(t > t_min) {
                continue;
            }
            let p = origin + dir * t;
            let s = self.param_of_angle((p.y - self.center.y).atan2(p.x - self.center.x));
            // rounding in atan2 must not open a gap at the seam with a neighbouring piece
            if (-SEAM_TOL..=len + SEAM_TOL).contains(&s) && best.is_none_or(|h| t < h.t) {
                best = Some(CurveHit { t, s: s.clamp(0.0, len) });
            }
        }
        best
    }

    fn distance_to_point(&self, p: Vec2) -> f64 {
        let v = p - self.center;
        let mut best = p
            .dist(self.point_at_angle(self.start_angle))
            .min(p.dist(self.point_at_angle(self.start_angle + self.sweep)));
        if v.norm() > 0.0 && self.contains_angle(v.y.atan2(v.x)) {
            best = best.min((v.norm() - self.radius).abs());
        }
        best
    }

    fn distance_to_segment(&self, a: Vec2, b: Vec2) -> f64 {
        let d = b - a;
        let len = d.norm();
        let dir = d * (1.0 / len);
        // crossing of the segment and the arc
        let from_a = self.intersect(a, dir, -1.0).filter(|h| (0.0..=len).contains(&h.t));
        let from_b = self.intersect(b, -dir, -1.0).filter(|h| (0.0..=len).contains(&h.t));
        if from_a.is_some() || from_b.is_some() {
            return 0.0;
        }
        let mut best = self.distance_to_point(a).min(self.distance_to_point(b));
        for end in [self.point_at_angle(self.start_angle), self.point_at_angle(self.start_angle + self.sweep)] {
            best = best.min(point_segment_distance(end, a, b));
        }
        // arc points whose normal is perpendicular to the segment
        let n_ang = dir.perp().y.atan2(dir.perp().x);
        for ang in [n_ang, n_ang + PI] {
            if self.contains_angle(ang) {
                best = best.min(point_segment_distance(self.point_at_angle(ang), a, b));
            }
        }
        best
    }
}

impl SampledCurve {
    pub fn points(&self) -> &[Vec2] {
        &self.points
    }

    pub fn tangents(&self) -> &[Vec2] {
        &self.tangents
    }

    fn locate(&self, s: f64) -> (usize, f64) {
        let last = self.points.len() - 2;
        let i = match self.cumulative.binary_search_by(|c| c.partial_cmp(&s).unwrap()) {
            Ok(i) => i.min(last),
            Err(i) => i.saturating_sub(1).min(last),
        };
        let h = self.cumulative[i + 1] - self.cumulative[i];
        (i, ((s - self.cumulative[i]) / h).clamp(0.0, 1.0))
    }

    fn hermite(&self, i: usize, u: f64) -> Vec2 {
        let h = self.cumulative[i + 1] - self.cumulative[i];
        let (u2, u3) = (u * u, u * u * u);
        self.points[i] * (2.0 * u3 - 3.0 * u2 + 1.0)
            + self.tangents[i] * (h * (u3 - 2.0 * u2 + u))
            + self.points[i + 1] * (-2.0 * u3 + 3.0 * u2)
            + self.tangents[i + 1] * (h * (u3 - u2))
    }

    fn hermite_derivative(&self, i: usize, u: f64) -> Vec2 {
        let h = self.cumulative[i + 1] - self.cumulative[i];
        let u2 = u * u;
        self.points[i] * (6.0 * u2 - 6.0 * u)
            + self.tangents[i] * (h * (3.0 * u2 - 4.0 * u + 1.0))
            + self.points[i + 1] * (-6.0 * u2 + 6.0 * u)
            + self.tangents[i + 1] * (h * (3.0 * u2 - 2.0 * u))
    }

    /// Walks the pieces, brackets sign changes of the side function on a sub-grid,
    /// then bisects each bracket.
    fn intersect(&self, origin: Vec2, dir: Vec2, t_min: f64) -> Option<CurveHit> {
        const SUB: usize = 8;
        let side = |i: usize, u: f64| dir.cross(self.hermite(i, u) - origin);
        let mut best: Option<CurveHit> = None;
        for i in 0..self.points.len() - 1 {
            let h = self.cumulative[i + 1] - self.cumulative[i];
            // Hermite control polygon bounds the piece
            let ctrl = [
                self.points[i],
                self.points[i] + self.tangents[i] * (h / 3.0),
                self.points[i + 1] - self.tangents[i + 1] * (h / 3.0),
                self.points[i + 1],
            ];
            let sides: Vec<f64> = ctrl.iter().map(|&p| dir.cross(p - origin)).collect();
            if sides.iter().all(|&v| v > 0.0) || sides.iter().all(|&v| v < 0.0) {
                continue;
            }
            let mut prev_u = 0.0;
            let mut prev = side(i, 0.0);
            for k in 1..=SUB {
                let u = k as f64 / SUB as f64;
                let cur = side(i, u);
                let root = if prev == 0.0 {
                    Some(prev_u)
                } else if prev.signum() != cur.signum() {
                    Some(bisect_unit(|x| side(i, x), prev_u, u, prev, h))
                } else {
                    None
                };
                if let Some(ur) = root {
                    let p = self.hermite(i, ur);
                    let t = dir.dot(p - origin);
                    if t > t_min && best.is_none_or(|b| t < b.t) {
                        best = Some(CurveHit { t, s: self.cumulative[i] + ur * h });
                    }
                }
                prev_u = u;
                prev = cur;
            }
            if prev == 0.0 && i == self.points.len() - 2 {
                let p = self.hermite(i, 1.0);
                let t = dir.dot(p - origin);
                if t > t_min && best.is_none_or(|b| t < b.t) {
                    best = Some(CurveHit { t, s: self.cumulative[i + 1] });
                }
            }
        }
        best
    }
}

fn bisect_unit(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, f_lo: f64, scale: f64) -> f64 {
    let sign_lo = f_lo.signum();
    while (hi - lo) * scale > POSITION_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = f(mid);
        if v == 0.0 {
            return mid;
        }
        if v.signum() == sign_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn wrap_pi(a: f64) -> f64 {
    let mut x = (a + PI).rem_euclid(TAU) - PI;
    if x <= -PI {
        x += TAU;
    }
    x
}

/// Crossing of a ray with segment `[p, q]`: returns `(t, u)` with `u` in `[0, 1]`.
fn segment_hit(p: Vec2, q: Vec2, origin: Vec2, dir: Vec2, t_min: f64) -> Option<(f64, f64)> {
    let e = q - p;
    let denom = dir.cross(e);
    if denom == 0.0 {
        return None;
    }
    let w = p - origin;
    let t = w.cross(e) / denom;
    let u = w.cross(dir) / denom;
    if t > t_min && (0.0..=1.0).contains(&u) {
        Some((t, u))
    } else {
        None
    }
}

pub(crate) fn point_segment_distance(p: Vec2, a: Vec2, b: Vec2) -> f64 {
    let e = b - a;
    let u = ((p - a).dot(e) / e.dot(e)).clamp(0.0, 1.0);
    p.dist(a + e * u)
}

fn segment_segment_distance(p: Vec2, q: Vec2, a: Vec2, b: Vec2) -> f64 {
    let r = q - p;
    let e = b - a;
    let denom = r.cross(e);
    if denom != 0.0 {
        let u = (a - p).cross(e) / denom;
        let v = (a - p).cross(r) / denom;
        if (0.0..=1.0).contains(&u) && (0.0..=1.0).contains(&v) {
            return 0.0;
        }
    }
    point_segment_distance(p, a, b)
        .min(point_segment_distance(q, a, b))
        .min(point_segment_distance(a, p, q))
        .min(point_segment_distance(b, p, q))
}
