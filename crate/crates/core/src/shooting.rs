//! Constructive realization of itineraries by nested bisection over bundles of
//! trajectories.
//!
//! A bundle is a parameter interval together with a rule that evaluates each
//! parameter to a trajectory: start on a cap with horizontal incoming direction,
//! reflect, and fly to a prescribed copy of the opposite cap, once per completed step.
//! Every refinement keeps the parameters whose next flight leaves with argument in
//! `[-eps, eps]` and lands on the whole of the requested cap copy. The midpoint of
//! the last bundle is then simulated with the ordinary billiard map and checked.
//!
//! Semistadia are handled in their doubled table and re-simulated in the original.

use std::ops::Range;

use crate::coding::{encode, is_admissible, CodingError, SymbolWord};
use crate::freearc::max_symbol_bound;
use crate::geometry::{
    line_argument, next_collision, ArcId, CapSide, GeometryError, PhasePoint, Table, Vec2, EPS_LIMIT,
};
use crate::unfolding::{from_copy, level_differences, to_copy, working_table};

/// Grid cells used to locate sign changes before bisecting.
const GRID_CELLS: usize = 1024;
/// Length of the tangent extensions used when evaluating landings near cap ends.
const LANDING_SLACK: f64 = 0.1;
/// Collisions allowed per requested block when re-simulating.
const STEPS_PER_BLOCK: usize = 4;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ShootingError {
    #[error("block {block}: level difference {j} needs |j| + 1 <= {reach} (l tan eps)")]
    TargetUnreachable { block: usize, j: i64, reach: f64 },
    #[error("block {block}: bisection could not isolate the target")]
    BisectionStall { block: usize },
    #[error("word is not admissible: {0}")]
    Inadmissible(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Coding(#[from] CodingError),
}

/// Interval of parameters with its evaluation rule.
///
/// The parameter is the arclength on the starting cap; `copies[i]` is the copy index
/// of the cap copy hit by the `i`-th flight, relative to the copy it started from.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveBundle {
    /// Cap carrying the current image, in the working table.
    pub side: CapSide,
    /// Accumulated level in the coding convention.
    pub level: i64,
    pub a: f64,
    pub b: f64,
    pub eps: f64,
    start: CapSide,
    copies: Vec<i64>,
}

/// Trajectory of a bundle parameter after its last completed flight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BundleSample {
    /// Position on the current cap; outside `[0, length]` on the tangent extensions.
    pub s: f64,
    /// Argument of the incoming line.
    pub incoming: f64,
    /// Argument of the outgoing line after reflection.
    pub outgoing: f64,
}

#[derive(Debug, Clone, Copy)]
struct State {
    point: Vec2,
    s: f64,
    d_in: Vec2,
    out: Vec2,
}

impl CurveBundle {
    /// Horizontal incoming trajectories over the whole curved cap on `side`.
    pub fn initial(table: &Table, side: CapSide, eps: f64) -> Result<Self, ShootingError> {
        if table.flat_side() == Some(side) {
            return Err(GeometryError::Domain("bundles start on a curved cap".into()).into());
        }
        if !(eps > 0.0 && eps < EPS_LIMIT) {
            return Err(GeometryError::Domain(format!("eps must lie in (0, pi/6), got {eps}")).into());
        }
        let len = table.cap_curve(side).length();
        Ok(Self { side, level: 0, a: 0.0, b: len, eps, start: side, copies: Vec::new() })
    }

    pub fn steps(&self) -> usize {
        self.copies.len()
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.a + self.b)
    }

    fn state(&self, work: &Table, t: f64) -> Option<State> {
        let mut side = self.start;
        let mut s = t;
        let mut d_in = Vec2::new(-side.heading(), 0.0);
        for &m in &self.copies {
            let curve = work.cap_curve(side);
            let p = curve.point_at(s);
            let d = d_in.reflect(curve.inward_normal(s));
            if d.x * side.heading() <= 0.0 {
                return None;
            }
            let (o, dd) = to_copy(m, p, d);
            let hit = work.cap_curve(side.opposite()).intersect_ray(o, dd, 0.0, LANDING_SLACK)?;
            s = hit.s;
            d_in = dd;
            side = side.opposite();
        }
        let curve = work.cap_curve(side);
        let out = d_in.reflect(curve.inward_normal(s));
        (out.x * side.heading() > 0.0).then_some(State { point: curve.point_at(s), s, d_in, out })
    }

    /// Evaluates parameter `t`; `None` when its trajectory leaves the prescribed copies.
    pub fn sample(&self, table: &Table, t: f64) -> Option<BundleSample> {
        let work = working_table(table);
        self.state(&work, t).map(|st| BundleSample {
            s: st.s,
            incoming: line_argument(st.d_in),
            outgoing: line_argument(st.out),
        })
    }
}

fn grid(a: f64, b: f64) -> Vec<f64> {
    (0..=GRID_CELLS).map(|k| a + (b - a) * k as f64 / GRID_CELLS as f64).collect()
}

/// Bisects `[lo, hi]` to adjacent doubles; `inside(lo) != inside(hi)` on entry.
/// Returns the end for which `inside` holds. `None` if an evaluation fails.
fn bisect(inside: impl Fn(f64) -> Option<bool>, lo: f64, hi: f64) -> Option<f64> {
    let lo_in = inside(lo)?;
    let (mut a, mut b) = (lo, hi);
    loop {
        let mid = 0.5 * (a + b);
        if mid <= a.min(b) || mid >= a.max(b) {
            break;
        }
        if inside(mid)? == lo_in {
            a = mid;
        } else {
            b = mid;
        }
    }
    Some(if lo_in { a } else { b })
}

/// Sub-bundle whose next flight lands on the whole copy at level `level + j`.
pub fn refine_bundle(table: &Table, bundle: &CurveBundle, j: i64, block: usize) -> Result<CurveBundle, ShootingError> {
    let work = working_table(table);
    let eps = bundle.eps;
    let reach = work.ell() * eps.tan();
    if (j.unsigned_abs() + 1) as f64 > reach * (1.0 + 1e-12) {
        return Err(ShootingError::TargetUnreachable { block, j, reach });
    }
    let stall = ShootingError::BisectionStall { block };
    let arg = |t: f64| bundle.state(&work, t).map(|st| line_argument(st.out));

    // a run of parameters with |outgoing| < eps between one with outgoing >= eps
    // and one with outgoing <= -eps
    let ts = grid(bundle.a, bundle.b);
    let class: Vec<Option<i8>> = ts
        .iter()
        .map(|&t| {
            arg(t).map(|th| {
                if th >= eps {
                    1
                } else if th <= -eps {
                    -1
                } else {
                    0
                }
            })
        })
        .collect();
    let mut sweep = None;
    let mut last_extreme: Option<(usize, i8)> = None;
    for (i, c) in class.iter().enumerate() {
        match *c {
            None => last_extreme = None,
            Some(0) => {}
            Some(e) => {
                if let Some((p, pe)) = last_extreme {
                    if pe == -e {
                        sweep = Some((p, i));
                        break;
                    }
                }
                last_extreme = Some((i, e));
            }
        }
    }
    let (p, q) = sweep.ok_or(stall.clone())?;
    let (ep, eq) = (class[p].unwrap() as f64, class[q].unwrap() as f64);
    let a2 = bisect(|t| arg(t).map(|th| th * ep < eps), ts[p + 1].min(ts[q]), ts[p]).ok_or(stall.clone())?;
    let b2 = bisect(|t| arg(t).map(|th| th * eq < eps), ts[q - 1].max(a2), ts[q]).ok_or(stall.clone())?;
    if !(a2 < b2) {
        return Err(stall);
    }

    // parameters whose line passes between the endpoints of the target copy
    let m = -j;
    let target = work.cap_curve(bundle.side.opposite());
    let ends = [from_copy(m, target.start_point()), from_copy(m, target.end_point())];
    let sides = |t: f64| {
        bundle.state(&work, t).map(|st| {
            let h = |e: Vec2| st.out.cross(e - st.point) > 0.0;
            (h(ends[0]), h(ends[1]))
        })
    };
    let ts = grid(a2, b2);
    let hs: Vec<Option<(bool, bool)>> = ts.iter().map(|&t| sides(t)).collect();
    let landing = |h: Option<(bool, bool)>| h.is_some_and(|(x, y)| x != y);
    let mut i = 1;
    while i < ts.len() {
        if !landing(hs[i]) || hs[i - 1].is_none() || landing(hs[i - 1]) {
            i += 1;
            continue;
        }
        let mut k = i;
        while k + 1 < ts.len() && landing(hs[k + 1]) {
            k += 1;
        }
        if k + 1 == ts.len() || hs[k + 1].is_none() {
            break;
        }
        let (enter_prev, enter_in) = (hs[i - 1].unwrap(), hs[i].unwrap());
        let (exit_in, exit_next) = (hs[k].unwrap(), hs[k + 1].unwrap());
        let enter_via_first = enter_prev.0 != enter_in.0;
        let exit_via_first = exit_in.0 != exit_next.0;
        if enter_via_first != exit_via_first {
            let inside = |t: f64| sides(t).map(|(x, y)| x != y);
            let u = bisect(inside, ts[i], ts[i - 1]).ok_or(stall.clone())?;
            let v = bisect(inside, ts[k], ts[k + 1]).ok_or(stall.clone())?;
            if !(u < v) {
                return Err(stall);
            }
            let mut copies = bundle.copies.clone();
            copies.push(m);
            return Ok(CurveBundle {
                side: bundle.side.opposite(),
                level: bundle.level + j,
                a: u,
                b: v,
                eps,
                start: bundle.start,
                copies,
            });
        }
        i = k + 1;
    }
    Err(stall)
}

/// Orbit whose cap-to-cap blocks have the level differences `ks`.
///
/// The orbit starts on the curved (left, in a full table) cap and ends at the cap
/// collision closing the last block.
pub fn realize_itinerary(table: &Table, ks: &[i64], eps: f64, bound: i64) -> Result<Vec<PhasePoint>, ShootingError> {
    let side = table.curved_caps()[0];
    let work = working_table(table);
    let reach = work.ell() * eps.tan();
    let n_max = max_symbol_bound(table.ell(), eps, table.class()).min(bound);
    for (block, &j) in ks.iter().enumerate() {
        if j.abs() > n_max {
            return Err(ShootingError::TargetUnreachable { block, j, reach });
        }
    }
    let mut bundle = CurveBundle::initial(table, side, eps)?;
    for (block, &j) in ks.iter().enumerate() {
        bundle = refine_bundle(table, &bundle, j, block)?;
    }

    let r = bundle.a.min(bundle.b) + 0.5 * (bundle.b - bundle.a).abs();
    let cap = table.cap_curve(side);
    let out = Vec2::new(-side.heading(), 0.0).reflect(cap.inward_normal(r));
    let start = crate::geometry::phase_point_from_direction(table, table.cap_id(side), r, out)?;
    let mut orbit = vec![start];
    let mut cur = start;
    let mut caps = 0;
    let limit = STEPS_PER_BLOCK * ks.iter().map(|k| k.unsigned_abs() as usize + 1).sum::<usize>();
    while caps < ks.len() {
        if orbit.len() > limit + 1 {
            return Err(ShootingError::BisectionStall { block: caps });
        }
        let (next, _) = next_collision(table, &cur).map_err(|_| ShootingError::BisectionStall { block: caps })?;
        if matches!(next.arc, ArcId::Left | ArcId::Right) {
            caps += 1;
        }
        orbit.push(next);
        cur = next;
    }
    let got = level_differences(table, &orbit)?;
    if let Some(block) = got.iter().zip(ks).position(|(g, k)| g != k) {
        return Err(ShootingError::BisectionStall { block });
    }
    Ok(orbit)
}

/// Level differences of the blocks of `word`, after completing a partial first and
/// last block, and the number of symbols prepended.
pub fn word_blocks(word: &[i32]) -> (Vec<i64>, usize) {
    let mut full: Vec<i32> = Vec::with_capacity(word.len() + 2);
    let mut prefix = 0;
    if let Some(&first) = word.first() {
        if first != 0 {
            full.push(0);
            full.extend((1..first.abs()).map(|i| i * first.signum()));
            prefix = full.len();
        }
    }
    full.extend_from_slice(word);
    if word.last().is_some_and(|&s| s != 0) {
        full.push(0);
    }
    let mut blocks = Vec::new();
    let mut current: Option<i64> = None;
    for &s in &full {
        if s == 0 {
            if let Some(c) = current {
                blocks.push(c);
            }
            current = Some(0);
        } else if let Some(c) = current.as_mut() {
            *c = s as i64;
        }
    }
    (blocks, prefix)
}

/// Realized orbit of a symbol word with the position of the word in its code.
#[derive(Debug, Clone, PartialEq)]
pub struct RealizedWord {
    pub orbit: Vec<PhasePoint>,
    /// Code of the whole orbit.
    pub code: SymbolWord,
    /// Position of the requested word inside `code`.
    pub coded_range: Range<usize>,
    pub blocks: Vec<i64>,
}

impl RealizedWord {
    pub fn coded_word(&self) -> &[i32] {
        &self.code.symbols()[self.coded_range.clone()]
    }
}

/// Orbit whose code contains `word`.
pub fn realize_word(table: &Table, word: &SymbolWord, eps: f64) -> Result<RealizedWord, ShootingError> {
    if !is_admissible(word.symbols(), word.bound()) {
        return Err(ShootingError::Inadmissible(word.to_string()));
    }
    let bound = max_symbol_bound(table.ell(), eps, table.class());
    let (blocks, prefix) = word_blocks(word.symbols());
    let orbit = realize_itinerary(table, &blocks, eps, bound.max(0))?;
    let code_bound = word.bound().max(bound.max(0) as u32);
    let code = encode(table, &orbit, code_bound)?;
    let coded_range = prefix..prefix + word.len();
    if code.symbols().get(coded_range.clone()) != Some(word.symbols()) {
        return Err(ShootingError::BisectionStall { block: blocks.len().saturating_sub(1) });
    }
    Ok(RealizedWord { orbit, code, coded_range, blocks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coding::is_admissible;
    use crate::geometry::{make_mushroom, make_stadium, trace_orbit, TableClass};

    fn stadium() -> Table {
        make_stadium(4.0, 1.0).unwrap()
    }

    #[test]
    fn word_blocks_complete_partial_blocks() {
        assert_eq!(word_blocks(&[0, 1, 0]), (vec![1], 0));
        assert_eq!(word_blocks(&[0, 0]), (vec![0], 0));
        assert_eq!(word_blocks(&[2, 0, -1]), (vec![2, -1], 2));
        assert_eq!(word_blocks(&[1, 0, 1, 0, 1]), (vec![1, 1, 1], 1));
        assert_eq!(word_blocks(&[0]), (vec![], 0));
        assert_eq!(word_blocks(&[]), (vec![], 0));
    }

    #[test]
    fn refine_keeps_nesting_and_argument_bound() {
        let t = stadium();
        let eps = t.eps();
        let b0 = CurveBundle::initial(&t, CapSide::Left, eps).unwrap();
        let b1 = refine_bundle(&t, &b0, 0, 0).unwrap();
        assert!(b0.a <= b1.a.min(b1.b) && b1.a.max(b1.b) <= b0.b);
        let b2 = refine_bundle(&t, &b1, 1, 1).unwrap();
        assert!(b1.a.min(b1.b) <= b2.a.min(b2.b) && b2.a.max(b2.b) <= b1.a.max(b1.b));
        for k in 0..=100 {
            let s = b2.sample(&t, b2.a + (b2.b - b2.a) * k as f64 / 100.0).unwrap();
            assert!(s.incoming.abs() <= eps + 1e-9);
        }
    }

    #[test]
    fn refined_bundle_covers_the_opposite_cap() {
        let t = stadium();
        let b0 = CurveBundle::initial(&t, CapSide::Left, t.eps()).unwrap();
        let b1 = refine_bundle(&t, &b0, 0, 0).unwrap();
        let len = t.curve(ArcId::Right).length();
        let ss: Vec<f64> =
            (0..=100).map(|k| b1.sample(&t, b1.a + (b1.b - b1.a) * k as f64 / 100.0).unwrap().s).collect();
        let lo = ss.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = ss.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        assert!(lo.abs() < 1e-9 && (hi - len).abs() < 1e-9, "image [{lo}, {hi}] of [0, {len}]");
        // forward simulation of interior parameters lands on the right cap, level 0
        for k in 1..100 {
            let r = b1.a + (b1.b - b1.a) * k as f64 / 100.0;
            let out = Vec2::new(-1.0, 0.0).reflect(t.curve(ArcId::Left).inward_normal(r));
            let p = crate::geometry::phase_point_from_direction(&t, ArcId::Left, r, out).unwrap();
            let (q, _) = next_collision(&t, &p).unwrap();
            assert_eq!(q.arc, ArcId::Right);
        }
    }

    #[test]
    fn unreachable_targets_are_rejected() {
        // reach l tan eps just above 2: N = 1
        let t = make_stadium(2.0 * 3f64.sqrt() - 3f64.sqrt() / 2.0 + 1e-3, 1.0).unwrap();
        let b0 = CurveBundle::initial(&t, CapSide::Left, t.eps()).unwrap();
        assert!(refine_bundle(&t, &b0, 1, 0).is_ok());
        assert!(matches!(refine_bundle(&t, &b0, 3, 0), Err(ShootingError::TargetUnreachable { .. })));
        assert!(matches!(
            realize_itinerary(&t, &[2], t.eps(), 1),
            Err(ShootingError::TargetUnreachable { block: 0, j: 2, .. })
        ));
    }

    #[test]
    fn itinerary_examples() {
        let t = stadium();
        let eps = t.eps();
        for ks in [vec![0, 0, 0], vec![1, 0, -1], vec![-1, 1, 1, 0]] {
            let orbit = realize_itinerary(&t, &ks, eps, 1).unwrap();
            assert_eq!(level_differences(&t, &orbit).unwrap(), ks);
            let code = encode(&t, &orbit, 1).unwrap();
            assert!(is_admissible(code.symbols(), 1));
        }
    }

    #[test]
    fn realized_orbits_are_billiard_orbits() {
        let t = stadium();
        let orbit = realize_itinerary(&t, &[1, -1, 0], t.eps(), 1).unwrap();
        let (again, err) = trace_orbit(&t, orbit[0], orbit.len() - 1);
        assert!(err.is_none());
        for (a, b) in orbit.iter().zip(&again) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn words_round_trip() {
        let t = stadium();
        for text in ["0 1 0", "0 0", "1 0 -1 0 1", "-1 0 0 1"] {
            let w = SymbolWord::parse(text, 1).unwrap();
            let r = realize_word(&t, &w, t.eps()).unwrap();
            assert_eq!(r.coded_word(), w.symbols(), "{text}");
        }
        let bad = SymbolWord::parse("1 -1", 1).unwrap();
        assert!(matches!(realize_word(&t, &bad, t.eps()), Err(ShootingError::Inadmissible(_))));
    }

    #[test]
    fn semistadium_itineraries() {
        let t = make_mushroom(4.0, 0.5).unwrap();
        assert_eq!(t.class(), TableClass::Semistadium);
        let n = max_symbol_bound(t.ell(), t.eps(), t.class());
        assert!(n >= 2);
        for ks in [vec![0, 0], vec![2, -1, 0], vec![-2, 1]] {
            let orbit = realize_itinerary(&t, &ks, t.eps(), n).unwrap();
            assert_eq!(level_differences(&t, &orbit).unwrap(), ks);
            assert!(orbit.iter().any(|p| p.arc == ArcId::Flat));
        }
    }
}
