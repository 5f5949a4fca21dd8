//! Entropy of the symbolic system: adjacency matrix, spectral radius, the rome
//! method, the closed-form root equation and the certificate pipeline.
//!
//! Three independent routes compute the same growth rate for the alphabet bound
//! `N`: power iteration on the adjacency matrix, the largest zero of the rome
//! function over first-return path lengths, and the largest root of
//! `x^2 - 2x - 1 = -2 x^-N`. Bounds are in nats.

use std::f64::consts::{FRAC_PI_6, LN_2, SQRT_2};
use std::fmt;

use crate::coding::TransitionTable;
use crate::freearc::max_symbol_bound;
use crate::geometry::{Table, TableClass, TableShape, EPS_LIMIT};

const ROOT_TOL: f64 = 1e-15;
const POWER_TOL: f64 = 1e-12;
const POWER_MAX_ITER: usize = 100_000;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SftError {
    #[error("power iteration did not converge within {0} iterations")]
    NoConvergence(usize),
    #[error("refined certificate needs a classical stadium table")]
    ShapeUnsupported,
    #[error("domain error: {0}")]
    Domain(String),
}

/// 0/1 matrix given by successor lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjacencyMatrix {
    successors: Vec<Vec<usize>>,
}

impl AdjacencyMatrix {
    pub fn from_edges(dim: usize, edges: &[(usize, usize)]) -> Self {
        let mut successors = vec![Vec::new(); dim];
        for &(i, j) in edges {
            assert!(i < dim && j < dim, "edge ({i}, {j}) outside dimension {dim}");
            if !successors[i].contains(&j) {
                successors[i].push(j);
            }
        }
        for row in &mut successors {
            row.sort_unstable();
        }
        Self { successors }
    }

    pub fn dim(&self) -> usize {
        self.successors.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> u8 {
        u8::from(self.successors[i].contains(&j))
    }

    pub fn successors(&self, i: usize) -> &[usize] {
        &self.successors[i]
    }

    pub fn row_sums(&self) -> Vec<usize> {
        self.successors.iter().map(Vec::len).collect()
    }

    pub fn to_dense(&self) -> Vec<Vec<u8>> {
        (0..self.dim()).map(|i| (0..self.dim()).map(|j| self.entry(i, j)).collect()).collect()
    }
}

/// Adjacency matrix of the symbolic system with alphabet `-N..=N`.
///
/// States are ordered `0, 1, ..., N, -1, ..., -N`.
pub fn adjacency(n: u32) -> AdjacencyMatrix {
    let tt = TransitionTable::new(n);
    let states = tt.states();
    let mut edges = Vec::new();
    for (i, &a) in states.iter().enumerate() {
        for (j, &b) in states.iter().enumerate() {
            if tt.allows(a, b) {
                edges.push((i, j));
            }
        }
    }
    AdjacencyMatrix::from_edges(states.len(), &edges)
}

/// Dominant eigenvalue of a nonnegative primitive matrix.
///
/// Power iteration from the all-ones vector; stops when the Collatz-Wielandt
/// bounds `min (Mv)_i / v_i <= rho <= max (Mv)_i / v_i` agree to relative `1e-12`.
pub fn spectral_radius(m: &AdjacencyMatrix) -> Result<f64, SftError> {
    let dim = m.dim();
    if dim == 0 {
        return Err(SftError::Domain("empty matrix".into()));
    }
    let mut v = vec![1.0; dim];
    let mut w = vec![0.0; dim];
    for _ in 0..POWER_MAX_ITER {
        for (i, out) in w.iter_mut().enumerate() {
            *out = m.successors(i).iter().map(|&j| v[j]).sum();
        }
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        for i in 0..dim {
            let ratio = w[i] / v[i];
            lo = lo.min(ratio);
            hi = hi.max(ratio);
        }
        if hi - lo <= POWER_TOL * hi && lo > 0.0 {
            return Ok(0.5 * (lo + hi));
        }
        let norm: f64 = w.iter().sum();
        if !(norm > 0.0) {
            return Err(SftError::NoConvergence(0));
        }
        for i in 0..dim {
            v[i] = w[i] / norm;
        }
        if v.contains(&0.0) {
            // a zero component never recovers the ratio bounds
            return Err(SftError::NoConvergence(0));
        }
    }
    Err(SftError::NoConvergence(POWER_MAX_ITER))
}

/// Multiset of lengths of paths from state `0` back to `0` that avoid `0` in between,
/// as `(length, count)` pairs sorted by length.
pub fn first_return_lengths(n: u32) -> Vec<(usize, u64)> {
    let m = adjacency(n);
    let mut counts = std::collections::BTreeMap::new();
    // depth-first over paths leaving 0; the graph minus 0 is acyclic
    let mut stack: Vec<(usize, usize)> = m.successors(0).iter().map(|&j| (j, 1)).collect();
    while let Some((state, len)) = stack.pop() {
        if state == 0 {
            *counts.entry(len).or_insert(0u64) += 1;
            continue;
        }
        assert!(len <= m.dim(), "cycle avoiding state 0");
        stack.extend(m.successors(state).iter().map(|&j| (j, len + 1)));
    }
    counts.into_iter().collect()
}

/// Rome function `sum x^-p - 1` over first-return path lengths `p`.
pub fn rome_function(lengths: &[(usize, u64)], x: f64) -> f64 {
    lengths.iter().map(|&(p, c)| c as f64 * x.powi(-(p as i32))).sum::<f64>() - 1.0
}

/// Largest zero of the rome function of the system with bound `n`.
pub fn rome_largest_zero(n: u32) -> f64 {
    let lengths = first_return_lengths(n);
    let f = |x: f64| rome_function(&lengths, x);
    let (lo, hi) = (1.5, 2.5);
    assert!(f(lo) > 0.0 && f(hi) < 0.0, "rome function does not change sign on [1.5, 2.5]");
    bisect_decreasing(f, lo, hi)
}

/// Largest root of `x^2 - 2x - 1 + 2 x^-N = 0`.
///
/// Solved for the gap `d = (1 + sqrt 2) - x`, which keeps full relative precision
/// once the root is closer to `1 + sqrt 2` than a double can resolve.
pub fn largest_root_eq0(n: u32) -> f64 {
    (1.0 + SQRT_2) - eq0_gap(n)
}

/// Gap `(1 + sqrt 2) - x` between the limit and the largest root of the root equation.
///
/// With `x = s - d`, `s = 1 + sqrt 2`, the equation reads `2 sqrt(2) d - d^2 = 2 (s - d)^-N`.
pub fn eq0_gap(n: u32) -> f64 {
    let s = 1.0 + SQRT_2;
    let h = |d: f64| 2.0 * SQRT_2 * d - d * d - 2.0 * (s - d).powi(-(n as i32));
    let (lo, hi) = (0.0, s - 1.5);
    if 2.0 * s.powi(-(n as i32)) == 0.0 {
        return 0.0;
    }
    assert!(h(lo) < 0.0 && h(hi) > 0.0, "root equation does not change sign on [1.5, 1 + sqrt 2]");
    // bisect to adjacent doubles: the bracket shrinks geometrically towards zero,
    // so tiny gaps keep full relative precision
    let (mut a, mut b) = (lo, hi);
    loop {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            return 0.5 * (a + b);
        }
        if h(mid) < 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
}

fn bisect_decreasing(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    while hi - lo > ROOT_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Which computation produced a bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntropyMethod {
    Eq0Root,
    Rome,
    Spectral,
    WordCount,
}

impl fmt::Display for EntropyMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EntropyMethod::Eq0Root => "eq0-root",
            EntropyMethod::Rome => "rome",
            EntropyMethod::Spectral => "spectral",
            EntropyMethod::WordCount => "word-count",
        })
    }
}

/// Lower bound on topological entropy together with how it was obtained.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyCertificate {
    /// Bound in nats; zero when nothing is certified.
    pub bound: f64,
    pub certified: bool,
    pub method: EntropyMethod,
    pub ell: f64,
    pub eps: f64,
    /// Alphabet bound used; `-1` when even `N = 0` fails the reach condition.
    pub n: i64,
    pub class: TableClass,
    /// Growth rate `rho` with `bound = log rho` (halved for semistadia).
    pub root: Option<f64>,
    /// Inequalities applied, in order.
    pub chain: Vec<String>,
    /// False whenever the free-arc premise rests on sampling or is assumed.
    pub rigorous_geometry: bool,
}

impl EntropyCertificate {
    pub fn bound_bits(&self) -> f64 {
        self.bound / LN_2
    }
}

/// Topological entropy of the symbolic system with bound `n`, by the chosen route.
pub fn sft_entropy(n: u32, method: EntropyMethod) -> Result<f64, SftError> {
    if n == 0 {
        return Ok(0.0);
    }
    Ok(match method {
        EntropyMethod::Eq0Root => largest_root_eq0(n).ln(),
        EntropyMethod::Rome => rome_largest_zero(n).ln(),
        EntropyMethod::Spectral => spectral_radius(&adjacency(n))?.ln(),
        EntropyMethod::WordCount => {
            let len = 256;
            let count = crate::coding::count_words(n, len);
            crate::coding::log_biguint(&count) / len as f64
        }
    })
}

fn check_ell_eps(ell: f64, eps: f64) -> Result<(), SftError> {
    if !(ell > 0.0) || !ell.is_finite() {
        return Err(SftError::Domain(format!("ell must be positive, got {ell}")));
    }
    if !(eps > 0.0 && eps < EPS_LIMIT) {
        return Err(SftError::Domain(format!("eps must lie in (0, pi/6), got {eps}")));
    }
    Ok(())
}

/// Generic lower bound for a table with eps-free caps at horizontal distance `ell`.
pub fn entropy_lower_bound(ell: f64, eps: f64, class: TableClass) -> Result<EntropyCertificate, SftError> {
    check_ell_eps(ell, eps)?;
    let n = max_symbol_bound(ell, eps, class);
    let reach = match class {
        TableClass::Full => ell * eps.tan(),
        TableClass::Semistadium => 2.0 * ell * eps.tan(),
    };
    let mut chain = vec![format!("caps assumed eps-free for eps = {eps}, horizontal distance >= l = {ell}")];
    match class {
        TableClass::Full => chain.push(format!("reach l tan eps = {reach}")),
        TableClass::Semistadium => {
            chain.push("flat cap unfolded: distances double, 2 l replaces l".into());
            chain.push(format!("reach 2 l tan eps = {reach}"));
        }
    }
    if n < 1 {
        chain.push(format!("largest N with N + 1 <= reach is {n}; need N >= 1, no bound"));
        return Ok(EntropyCertificate {
            bound: 0.0,
            certified: false,
            method: EntropyMethod::Eq0Root,
            ell,
            eps,
            n,
            class,
            root: None,
            chain,
            rigorous_geometry: false,
        });
    }
    let root = largest_root_eq0(n as u32);
    chain.push(format!("N = {n} satisfies N + 1 <= reach"));
    chain.push(format!("every level difference in [-{n}, {n}] is realized: semiconjugacy onto the symbolic system"));
    chain.push(format!("h(symbolic) = log of largest root of x^2 - 2x - 1 = -2 x^-{n}, root = {root}"));
    let mut bound = root.ln();
    if class == TableClass::Semistadium {
        bound *= 0.5;
        chain.push("cylinders of length n need at most 2n collisions: halve the growth rate".into());
    }
    chain.push(format!("h >= {bound} nats"));
    Ok(EntropyCertificate {
        bound,
        certified: true,
        method: EntropyMethod::Eq0Root,
        ell,
        eps,
        n,
        class,
        root: Some(root),
        chain,
        rigorous_geometry: false,
    })
}

/// Refined certificate for the classical stadium with rectangle `length` by `width`.
///
/// Certifies `log 2` iff `length / width > sqrt 3`.
pub fn stadium_certificate(length: f64, width: f64) -> Result<EntropyCertificate, SftError> {
    if !(length > 0.0) || !(width > 0.0) || !length.is_finite() || !width.is_finite() {
        return Err(SftError::Domain(format!("stadium needs positive length and width, got {length} x {width}")));
    }
    let ratio = length / width;
    let sqrt3 = 3f64.sqrt();
    let ell = ratio + sqrt3 / 2.0;
    let certified = ratio > sqrt3;
    let mut chain = vec![
        format!("width rescaled to 1: rectangle length l' = {ratio}"),
        "semicircle arcs with normal argument within pi/6 are eps-free for every eps < pi/6".into(),
        "eps -> pi/6: tan eps = 1/sqrt 3".into(),
        format!("free arcs reach sqrt(3)/4 past the rectangle: l = l' + sqrt(3)/2 = {ell}"),
        "two stacked copies of a free arc span 3/2 vertically, which replaces N + 1 = 2".into(),
        "reach condition l tan eps > 3/2 is l' > sqrt 3".into(),
    ];
    if certified {
        chain.push(format!("l' = {ratio} > sqrt 3: N = 1, largest root of x^2 - 2x - 1 = -2/x is 2"));
        chain.push("h >= log 2".into());
    } else {
        chain.push(format!("l' = {ratio} <= sqrt 3: not certified"));
    }
    Ok(EntropyCertificate {
        bound: if certified { LN_2 } else { 0.0 },
        certified,
        method: EntropyMethod::Eq0Root,
        ell,
        eps: FRAC_PI_6,
        n: i64::from(certified),
        class: TableClass::Full,
        root: certified.then_some(2.0),
        chain,
        rigorous_geometry: true,
    })
}

/// [`stadium_certificate`] for a table built by `make_stadium`.
pub fn stadium_certificate_for(table: &Table) -> Result<EntropyCertificate, SftError> {
    match table.shape() {
        TableShape::Stadium { length } => stadium_certificate(length, 1.0),
        _ => Err(SftError::ShapeUnsupported),
    }
}

/// Refined certificate for a mushroom with stalk length `stalk` (unit stalk width)
/// and cap radius `radius`.
///
/// Certifies `(1/2) log 2` iff `stalk > sqrt(16 radius^2 - 1) / 2`.
pub fn mushroom_certificate(stalk: f64, radius: f64) -> Result<EntropyCertificate, SftError> {
    if !(radius >= 0.25) || !radius.is_finite() {
        return Err(SftError::Domain(format!("cap radius must be at least 1/4, got {radius}")));
    }
    if !(stalk > 0.0) || !stalk.is_finite() {
        return Err(SftError::Domain(format!("stalk length must be positive, got {stalk}")));
    }
    let root_term = (16.0 * radius * radius - 1.0).sqrt();
    let eps = (0.25 / radius).asin();
    let ell = stalk + 0.25 * root_term;
    let threshold = 0.5 * root_term;
    let certified = stalk > threshold;
    let mut chain = vec![
        format!("stalk width 1, stalk length l' = {stalk}, cap radius t = {radius}"),
        format!("largest eps with rays entering the stalk: t sin eps = 1/4, eps = {eps}"),
        format!("tan eps = 1/sqrt(16 t^2 - 1) = {}", 1.0 / root_term),
        format!("l = l' + t cos eps = {ell}"),
        "flat cap unfolded: 2 l replaces l; 3/2 replaces N + 1 = 2".into(),
        format!("reach condition l > (3/4) sqrt(16 t^2 - 1) is l' > {threshold}"),
    ];
    if eps >= FRAC_PI_6 {
        chain.push("cap radius below 1/2: eps reaches pi/6".into());
    }
    if certified {
        chain.push(format!("l' = {stalk} > {threshold}: N = 1, root 2, halved for the flat cap"));
        chain.push("h >= (1/2) log 2".into());
    } else {
        chain.push(format!("l' = {stalk} <= {threshold}: not certified"));
    }
    Ok(EntropyCertificate {
        bound: if certified { 0.5 * LN_2 } else { 0.0 },
        certified,
        method: EntropyMethod::Eq0Root,
        ell,
        eps,
        n: i64::from(certified),
        class: TableClass::Semistadium,
        root: certified.then_some(2.0),
        chain,
        rigorous_geometry: true,
    })
}

/// Limit of the bounds as the caps move apart.
pub fn limit_bound(class: TableClass) -> f64 {
    let full = (1.0 + SQRT_2).ln();
    match class {
        TableClass::Full => full,
        TableClass::Semistadium => 0.5 * full,
    }
}

/// Best available bound for a table: the shape-specific refinement when it applies,
/// otherwise (or when larger) the generic pipeline at the table's `ell` and `eps`.
pub fn certify_table(table: &Table) -> Result<EntropyCertificate, SftError> {
    let generic = entropy_lower_bound(table.ell(), table.eps(), table.class())?;
    let refined = match table.shape() {
        TableShape::Stadium { length } => Some(stadium_certificate(length, 1.0)?),
        TableShape::Mushroom { stalk, radius } => Some(mushroom_certificate(stalk, radius)?),
        TableShape::Custom => None,
    };
    Ok(match refined {
        Some(r) if r.bound >= generic.bound => r,
        Some(r) if generic.certified => EntropyCertificate { rigorous_geometry: r.rigorous_geometry, ..generic },
        _ => generic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent bisection on the polynomial form of the N = 2 root equation:
    /// multiplying by x^2 gives x^4 - 2x^3 - x^2 + 2 = 0.
    fn quartic_root_n2() -> f64 {
        let p = |x: f64| x.powi(4) - 2.0 * x.powi(3) - x * x + 2.0;
        let (mut lo, mut hi) = (2.0, 2.5);
        assert!(p(lo) < 0.0 && p(hi) > 0.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if p(mid) < 0.0 {
                lo = mid
            } else {
                hi = mid
            }
        }
        lo
    }

    #[test]
    fn adjacency_examples() {
        assert_eq!(adjacency(1).to_dense(), vec![vec![1, 1, 1], vec![1, 0, 0], vec![1, 0, 0]]);
        assert_eq!(adjacency(2).row_sums(), vec![3, 2, 1, 2, 1]);
    }

    #[test]
    fn adjacency_of_n1_has_characteristic_polynomial_roots() {
        // lambda (lambda - 2)(lambda + 1): check det(M - lambda I) = 0 at 0, 2, -1
        let m = adjacency(1).to_dense();
        let det = |l: f64| {
            let a: Vec<Vec<f64>> =
                (0..3).map(|i| (0..3).map(|j| m[i][j] as f64 - if i == j { l } else { 0.0 }).collect()).collect();
            a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
                + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
        };
        for l in [0.0, 2.0, -1.0] {
            assert!(det(l).abs() < 1e-12);
        }
        assert!((spectral_radius(&adjacency(1)).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn spectral_radius_fixtures() {
        let single = AdjacencyMatrix::from_edges(1, &[(0, 0)]);
        assert!((spectral_radius(&single).unwrap() - 1.0).abs() < 1e-12);
        let golden = AdjacencyMatrix::from_edges(2, &[(0, 0), (0, 1), (1, 0)]);
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((spectral_radius(&golden).unwrap() - phi).abs() < 1e-12);
        // period-2 irreducible matrix: the ratio bounds never meet
        let periodic = AdjacencyMatrix::from_edges(3, &[(0, 1), (0, 2), (1, 0), (2, 0)]);
        assert!(matches!(spectral_radius(&periodic), Err(SftError::NoConvergence(_))));
    }

    #[test]
    fn first_return_paths_match_the_rome_structure() {
        // one loop of length 1, two paths of each length 2..=N+1
        for n in 1..=6u32 {
            let mut expected = vec![(1usize, 1u64)];
            expected.extend((2..=n as usize + 1).map(|p| (p, 2u64)));
            assert_eq!(first_return_lengths(n), expected);
        }
    }

    #[test]
    fn rome_and_eq0_examples() {
        assert!((rome_largest_zero(1) - 2.0).abs() < 1e-12);
        assert!((largest_root_eq0(1) - 2.0).abs() < 1e-12);
        let oracle = quartic_root_n2();
        assert!((largest_root_eq0(2) - oracle).abs() < 1e-12);
        assert!((rome_largest_zero(2) - oracle).abs() < 1e-12);
        assert!((oracle - 2.27).abs() < 0.01);
        assert!((rome_largest_zero(40) - (1.0 + SQRT_2)).abs() < 1e-6);
    }

    #[test]
    fn eq0_gap_is_strictly_decreasing() {
        let gaps: Vec<f64> = (1..=80).map(eq0_gap).collect();
        assert!(gaps.windows(2).all(|w| w[1] < w[0]));
        assert!(gaps.iter().all(|&g| g > 0.0));
        // the gap equation itself, in high relative precision
        let s = 1.0 + SQRT_2;
        for n in [1u32, 10, 40, 60] {
            let d = eq0_gap(n);
            let lhs = 2.0 * SQRT_2 * d - d * d;
            let rhs = 2.0 * (s - d).powi(-(n as i32));
            assert!((lhs - rhs).abs() <= 1e-13 * rhs, "n = {n}");
        }
    }

    #[test]
    fn entropy_lower_bound_examples() {
        let eps = 0.4f64;
        let c = entropy_lower_bound(2.0 / eps.tan(), eps, TableClass::Full).unwrap();
        assert_eq!(c.n, 1);
        assert!((c.bound - LN_2).abs() < 1e-12);
        let s = entropy_lower_bound(1.0 / eps.tan(), eps, TableClass::Semistadium).unwrap();
        assert_eq!(s.n, 1);
        assert!((s.bound - 0.5 * LN_2).abs() < 1e-12);
        let none = entropy_lower_bound(1.5 / eps.tan(), eps, TableClass::Full).unwrap();
        assert_eq!(none.n, 0);
        assert_eq!(none.bound, 0.0);
        assert!(!none.certified);
        assert!(entropy_lower_bound(1.0, FRAC_PI_6, TableClass::Full).is_err());
    }

    #[test]
    fn stadium_threshold_is_strict() {
        let c = stadium_certificate(1.8, 1.0).unwrap();
        assert!(c.certified);
        assert!((c.bound - LN_2).abs() < 1e-15);
        assert!(!stadium_certificate(3f64.sqrt(), 1.0).unwrap().certified);
        assert!(!stadium_certificate(1.0, 1.0).unwrap().certified);
        assert!(stadium_certificate(3.6, 2.0).unwrap().certified);
        let mush = crate::geometry::make_mushroom(1.0, 0.5).unwrap();
        assert_eq!(stadium_certificate_for(&mush), Err(SftError::ShapeUnsupported));
    }

    #[test]
    fn mushroom_threshold() {
        assert!(mushroom_certificate(1.0, 0.5).unwrap().certified);
        assert!(!mushroom_certificate(0.8, 0.5).unwrap().certified);
        for t in [0.25, 0.3, 0.5, 1.0, 2.5, 10.0] {
            let c = mushroom_certificate(2.0 * t, t).unwrap();
            assert!(c.certified, "t = {t}");
            assert!((c.bound - 0.5 * LN_2).abs() < 1e-15);
        }
        assert!(mushroom_certificate(1.0, 0.2).is_err());
    }

    #[test]
    fn limit_bound_dominates_every_finite_n() {
        assert!((limit_bound(TableClass::Full) - 0.881373587).abs() < 1e-9);
        assert_eq!(limit_bound(TableClass::Semistadium), 0.5 * limit_bound(TableClass::Full));
        for n in 1..=60 {
            assert!(limit_bound(TableClass::Full) >= largest_root_eq0(n).ln());
        }
    }

    #[test]
    fn certify_table_prefers_the_larger_bound() {
        let short = crate::geometry::make_stadium(1.8, 1.0).unwrap();
        let c = certify_table(&short).unwrap();
        assert!((c.bound - LN_2).abs() < 1e-15);
        let long = crate::geometry::make_stadium(12.0, 1.0).unwrap();
        let c = certify_table(&long).unwrap();
        assert!(c.n > 1 && c.bound > LN_2);
    }

    proptest::proptest! {
        #[test]
        fn bound_is_monotone_and_below_the_limit(ell in 0.5f64..40.0, d_ell in 0.0f64..10.0, eps in 0.05f64..0.5) {
            let a = entropy_lower_bound(ell, eps, TableClass::Full).unwrap();
            let b = entropy_lower_bound(ell + d_ell, eps, TableClass::Full).unwrap();
            proptest::prop_assert!(a.bound <= b.bound);
            proptest::prop_assert!(b.bound <= limit_bound(TableClass::Full));
            let half = entropy_lower_bound(ell / 2.0, eps, TableClass::Semistadium).unwrap();
            proptest::prop_assert_eq!(half.n, a.n);
            proptest::prop_assert!((half.bound - 0.5 * a.bound).abs() <= 1e-15);
        }
    }
}
