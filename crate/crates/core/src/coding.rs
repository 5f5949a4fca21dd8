//! Symbolic coding of orbits by wall-collision blocks, and counting of admissible words.
//!
//! A cap collision gets the symbol `0`. The `i`-th collision of a run of consecutive
//! wall collisions gets `i` when the run starts on the bottom wall and `-i` when it
//! starts on the top wall. Collisions with the flat cap of a semistadium carry no symbol.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::geometry::{ArcId, PhasePoint, Table, TableClass};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CodingError {
    #[error("run of {length} wall collisions ending at index {index} exceeds the alphabet bound {bound}")]
    BlockTooLong { index: usize, length: usize, bound: u32 },
    #[error("collision {index} is not on a tracked arc of this table")]
    UntrackedCollision { index: usize },
    #[error("orbit starts inside a run of wall collisions (index {index})")]
    PartialBlock { index: usize },
    #[error("symbol {symbol} outside the alphabet -{bound}..={bound}")]
    SymbolOutOfRange { symbol: i32, bound: u32 },
    #[error("cannot parse symbol {0:?}")]
    Parse(String),
}

/// Finite word over the alphabet `-N..=N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymbolWord {
    symbols: Vec<i32>,
    bound: u32,
}

impl SymbolWord {
    pub fn new(symbols: Vec<i32>, bound: u32) -> Result<Self, CodingError> {
        if let Some(&s) = symbols.iter().find(|s| s.unsigned_abs() > bound) {
            return Err(CodingError::SymbolOutOfRange { symbol: s, bound });
        }
        Ok(Self { symbols, bound })
    }

    /// Whitespace- or comma-separated integers.
    pub fn parse(text: &str, bound: u32) -> Result<Self, CodingError> {
        let symbols = text
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<i32>().map_err(|_| CodingError::Parse(t.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(symbols, bound)
    }

    pub fn symbols(&self) -> &[i32] {
        &self.symbols
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn is_admissible(&self) -> bool {
        is_admissible(&self.symbols, self.bound)
    }
}

impl fmt::Display for SymbolWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.symbols.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Transition rules of the symbolic system with alphabet bound `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TransitionTable {
    bound: u32,
}

impl TransitionTable {
    pub fn new(bound: u32) -> Self {
        Self { bound }
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn contains(&self, s: i32) -> bool {
        s.unsigned_abs() <= self.bound
    }

    /// States in the order `0, 1, ..., N, -1, ..., -N`.
    pub fn states(&self) -> Vec<i32> {
        let n = self.bound as i32;
        std::iter::once(0).chain(1..=n).chain((1..=n).map(|i| -i)).collect()
    }

    pub fn allows(&self, a: i32, b: i32) -> bool {
        if !self.contains(a) || !self.contains(b) {
            return false;
        }
        if b == 0 {
            return true;
        }
        if a == 0 {
            return b.abs() == 1;
        }
        a.signum() == b.signum() && b.abs() == a.abs() + 1
    }

    pub fn successors(&self, a: i32) -> Vec<i32> {
        self.states().into_iter().filter(|&b| self.allows(a, b)).collect()
    }
}

/// True iff every symbol is in the alphabet and every adjacent pair is a transition.
pub fn is_admissible(word: &[i32], bound: u32) -> bool {
    let tt = TransitionTable::new(bound);
    word.iter().all(|&s| tt.contains(s)) && word.windows(2).all(|w| tt.allows(w[0], w[1]))
}

/// Code of an orbit; the orbit must start with a cap collision or a complete run.
pub fn encode(table: &Table, orbit: &[PhasePoint], bound: u32) -> Result<SymbolWord, CodingError> {
    let semistadium = table.class() == TableClass::Semistadium;
    let mut symbols = Vec::with_capacity(orbit.len());
    let mut run: Option<(i32, usize)> = None;
    let mut seen_cap = false;
    for (index, p) in orbit.iter().enumerate() {
        match p.arc {
            ArcId::Flat if semistadium => continue,
            ArcId::Flat => return Err(CodingError::UntrackedCollision { index }),
            ArcId::Left | ArcId::Right => {
                if table.side_of(p.arc).is_none() {
                    return Err(CodingError::UntrackedCollision { index });
                }
                seen_cap = true;
                run = None;
                symbols.push(0);
            }
            ArcId::Bottom | ArcId::Top => {
                if !seen_cap {
                    return Err(CodingError::PartialBlock { index });
                }
                let (sign, len) = match run {
                    Some((sign, len)) => (sign, len + 1),
                    None => (if p.arc == ArcId::Bottom { 1 } else { -1 }, 1),
                };
                if len > bound as usize {
                    return Err(CodingError::BlockTooLong { index, length: len, bound });
                }
                run = Some((sign, len));
                symbols.push(sign * len as i32);
            }
        }
    }
    Ok(SymbolWord { symbols, bound })
}

/// Exact number of admissible words of length `n`, `1^T M^(n-1) 1`.
pub fn count_words(bound: u32, n: usize) -> BigUint {
    if n == 0 {
        return BigUint::one();
    }
    let tt = TransitionTable::new(bound);
    let states = tt.states();
    let index = |s: i32| states.iter().position(|&x| x == s).unwrap();
    let succ: Vec<Vec<usize>> = states.iter().map(|&a| tt.successors(a).into_iter().map(index).collect()).collect();
    let mut v = vec![BigUint::one(); states.len()];
    for _ in 1..n {
        v = succ.iter().map(|row| row.iter().fold(BigUint::zero(), |acc, &j| acc + &v[j])).collect();
    }
    v.into_iter().sum()
}

/// Natural logarithm of a big integer, accurate to double precision.
pub fn log_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    (x >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{make_mushroom, make_stadium};
    use proptest::prelude::*;

    fn brute_force(bound: u32, n: usize) -> u64 {
        let alphabet: Vec<i32> = (-(bound as i32)..=bound as i32).collect();
        let mut count = 0;
        let mut word = vec![0usize; n];
        loop {
            let w: Vec<i32> = word.iter().map(|&i| alphabet[i]).collect();
            if is_admissible(&w, bound) {
                count += 1;
            }
            let mut k = 0;
            while k < n {
                word[k] += 1;
                if word[k] < alphabet.len() {
                    break;
                }
                word[k] = 0;
                k += 1;
            }
            if k == n {
                return count;
            }
        }
    }

    fn pp(arc: ArcId) -> PhasePoint {
        PhasePoint::new(arc, 0.1, 0.0)
    }

    #[test]
    fn admissibility_examples() {
        assert!(is_admissible(&[0, 1, 0], 1));
        assert!(!is_admissible(&[1, -1], 3));
        assert!(is_admissible(&[1, 2, 3, 0], 3));
        assert!(!is_admissible(&[1, 2, 3, 0], 2));
        assert!(!is_admissible(&[0, 2], 2));
        assert!(is_admissible(&[], 1));
    }

    #[test]
    fn encode_examples() {
        let t = make_stadium(3.0, 1.0).unwrap();
        let (l, r, b, top) = (ArcId::Left, ArcId::Right, ArcId::Bottom, ArcId::Top);
        let w = encode(&t, &[pp(l), pp(r), pp(l)], 2).unwrap();
        assert_eq!(w.symbols(), &[0, 0, 0]);
        assert_eq!(encode(&t, &[pp(l), pp(b), pp(r)], 1).unwrap().symbols(), &[0, 1, 0]);
        assert_eq!(encode(&t, &[pp(l), pp(top), pp(b), pp(r)], 2).unwrap().symbols(), &[0, -1, -2, 0]);
        assert!(matches!(
            encode(&t, &[pp(l), pp(top), pp(b), pp(r)], 1),
            Err(CodingError::BlockTooLong { length: 2, .. })
        ));
        assert!(matches!(encode(&t, &[pp(b), pp(l)], 1), Err(CodingError::PartialBlock { index: 0 })));
        assert!(matches!(encode(&t, &[pp(l), pp(ArcId::Flat)], 1), Err(CodingError::UntrackedCollision { index: 1 })));
    }

    #[test]
    fn encode_skips_the_flat_cap() {
        let t = make_mushroom(2.0, 0.5).unwrap();
        let orbit = [pp(ArcId::Left), pp(ArcId::Bottom), pp(ArcId::Flat), pp(ArcId::Top), pp(ArcId::Left)];
        assert_eq!(encode(&t, &orbit, 2).unwrap().symbols(), &[0, 1, 2, 0]);
    }

    #[test]
    fn count_words_examples() {
        assert_eq!(count_words(1, 1), BigUint::from(3u32));
        assert_eq!(count_words(1, 2), BigUint::from(5u32));
        assert_eq!(count_words(1, 3), BigUint::from(11u32));
    }

    #[test]
    fn count_words_matches_brute_force() {
        for bound in 1..=3u32 {
            let max_n = if bound == 3 { 7 } else { 10 };
            for n in 1..=max_n {
                assert_eq!(count_words(bound, n), BigUint::from(brute_force(bound, n)), "N = {bound}, n = {n}");
            }
        }
    }

    #[test]
    fn word_parse_and_display() {
        let w = SymbolWord::parse("0, 1 0", 1).unwrap();
        assert_eq!(w.to_string(), "0 1 0");
        assert!(matches!(SymbolWord::parse("0 2", 1), Err(CodingError::SymbolOutOfRange { symbol: 2, .. })));
        assert!(SymbolWord::parse("0 x", 1).is_err());
    }

    #[test]
    fn log_of_big_counts() {
        let big = count_words(1, 2000);
        // a_n = (2^(n+2) - (-1)^n) / 3 for N = 1
        let expected = (2000.0 + 2.0) * std::f64::consts::LN_2 - 3f64.ln();
        assert!((log_biguint(&big) - expected).abs() < 1e-12 * expected);
    }

    proptest! {
        #[test]
        fn admissible_words_extend_by_some_successor(word in proptest::collection::vec(-3i32..=3, 1..12)) {
            let tt = TransitionTable::new(3);
            if is_admissible(&word, 3) {
                let last = *word.last().unwrap();
                prop_assert!(tt.successors(last).contains(&0));
            }
        }
    }
}
