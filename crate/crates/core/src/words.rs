//! Words over `{N, E}` encoding monotone lattice paths.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Result, SandpileError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Step {
    /// Unit step `(1, 0)`.
    E,
    /// Unit step `(0, 1)`.
    N,
}

impl Step {
    pub fn as_char(self) -> char {
        match self {
            Step::E => 'E',
            Step::N => 'N',
        }
    }

    fn swapped(self) -> Step {
        match self {
            Step::E => Step::N,
            Step::N => Step::E,
        }
    }
}

/// A finite word over `{N, E}` with cached letter tallies.
///
/// Ordering is lexicographic with `E < N`, which is the order used for
/// reproducible enumeration output.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinomialWord {
    letters: Vec<Step>,
    e_count: usize,
    n_count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transform {
    /// ρ: reverse the letters.
    Reverse,
    /// κ: swap `N` and `E`.
    Complement,
}

impl BinomialWord {
    pub fn new(letters: Vec<Step>) -> Self {
        let e_count = letters.iter().filter(|&&s| s == Step::E).count();
        let n_count = letters.len() - e_count;
        BinomialWord {
            letters,
            e_count,
            n_count,
        }
    }

    pub fn empty() -> Self {
        BinomialWord::new(Vec::new())
    }

    pub fn letters(&self) -> &[Step] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn e_count(&self) -> usize {
        self.e_count
    }

    pub fn n_count(&self) -> usize {
        self.n_count
    }

    /// Membership in `B_{a,b}`: `a` east steps and `b` north steps.
    pub fn is_in(&self, a: usize, b: usize) -> bool {
        self.e_count == a && self.n_count == b
    }

    pub fn first(&self) -> Option<Step> {
        self.letters.first().copied()
    }

    pub fn last(&self) -> Option<Step> {
        self.letters.last().copied()
    }

    /// `prefix · self · suffix`.
    pub fn wrapped(&self, prefix: Option<Step>, suffix: Option<Step>) -> BinomialWord {
        let mut v = Vec::with_capacity(self.len() + 2);
        v.extend(prefix);
        v.extend_from_slice(&self.letters);
        v.extend(suffix);
        BinomialWord::new(v)
    }

    /// Drops the first letter.
    pub fn tail(&self) -> BinomialWord {
        BinomialWord::new(self.letters.iter().skip(1).copied().collect())
    }

    /// `E^a N^b` repeated: builds words from `(letter, run)` blocks.
    pub fn from_runs(runs: &[(Step, usize)]) -> BinomialWord {
        let mut v = Vec::new();
        for &(s, k) in runs {
            v.extend(std::iter::repeat_n(s, k));
        }
        BinomialWord::new(v)
    }

    pub fn repeat(&self, times: usize) -> BinomialWord {
        BinomialWord::new(self.letters.repeat(times))
    }

    pub fn rotate_left(&self, k: usize) -> BinomialWord {
        let mut v = self.letters.clone();
        if !v.is_empty() {
            let k = k % v.len();
            v.rotate_left(k);
        }
        BinomialWord::new(v)
    }

    pub fn transform(&self, t: Transform) -> BinomialWord {
        match t {
            Transform::Reverse => BinomialWord::new(self.letters.iter().rev().copied().collect()),
            Transform::Complement => {
                BinomialWord::new(self.letters.iter().map(|s| s.swapped()).collect())
            }
        }
    }

    /// ρ
    pub fn reversed(&self) -> BinomialWord {
        self.transform(Transform::Reverse)
    }

    /// κ
    pub fn complemented(&self) -> BinomialWord {
        self.transform(Transform::Complement)
    }

    /// Vertices visited by the path starting at the origin, endpoints included.
    pub fn vertices(&self) -> Vec<(i64, i64)> {
        let mut p = (0i64, 0i64);
        let mut out = Vec::with_capacity(self.len() + 1);
        out.push(p);
        for s in &self.letters {
            match s {
                Step::E => p.0 += 1,
                Step::N => p.1 += 1,
            }
            out.push(p);
        }
        out
    }

    /// All words of `B_{a,b}` in lexicographic order (`E < N`).
    pub fn all(a: usize, b: usize) -> Vec<BinomialWord> {
        let len = a + b;
        let mut out = Vec::new();
        // positions of the N letters, as an increasing combination of b out of len
        let mut pos: Vec<usize> = (0..b).collect();
        loop {
            let mut v = vec![Step::E; len];
            for &p in &pos {
                v[p] = Step::N;
            }
            out.push(BinomialWord::new(v));
            if !next_combination(&mut pos, len) {
                break;
            }
        }
        out.sort();
        out
    }
}

fn next_combination(pos: &mut [usize], len: usize) -> bool {
    let k = pos.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if pos[i] < len - (k - i) {
            pos[i] += 1;
            for j in i + 1..k {
                pos[j] = pos[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

impl fmt::Display for BinomialWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.letters {
            write!(f, "{}", s.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for BinomialWord {
    type Err = SandpileError;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|ch| match ch {
                'N' => Ok(Step::N),
                'E' => Ok(Step::E),
                other => Err(SandpileError::InvalidWord(format!(
                    "unexpected letter {other:?} in {s:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()
            .map(BinomialWord::new)
    }
}

impl Serialize for BinomialWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BinomialWord {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> BinomialWord {
        s.parse().unwrap()
    }

    #[test]
    fn parses_and_counts() {
        let u = w("ENNENENN");
        assert!(u.is_in(3, 5));
        assert_eq!(u.to_string(), "ENNENENN");
        assert!("ENX".parse::<BinomialWord>().is_err());
        assert!(w("").is_in(0, 0));
    }

    #[test]
    fn transforms() {
        assert_eq!(w("ENNENENN").reversed(), w("NNENENNE"));
        assert_eq!(w("NNEE").complemented(), w("EENN"));
    }

    #[test]
    fn enumerates_binomial_words() {
        let all = BinomialWord::all(2, 2);
        let s: Vec<String> = all.iter().map(|x| x.to_string()).collect();
        assert_eq!(s, ["EENN", "ENEN", "ENNE", "NEEN", "NENE", "NNEE"]);
        assert_eq!(BinomialWord::all(3, 0).len(), 1);
        assert_eq!(BinomialWord::all(0, 0), vec![BinomialWord::empty()]);
        assert_eq!(BinomialWord::all(3, 5).len(), 56);
    }

    fn arb_word() -> impl Strategy<Value = BinomialWord> {
        proptest::collection::vec(prop_oneof![Just(Step::E), Just(Step::N)], 0..24)
            .prop_map(BinomialWord::new)
    }

    proptest! {
        #[test]
        fn transforms_are_involutions(u in arb_word()) {
            prop_assert_eq!(u.reversed().reversed(), u.clone());
            prop_assert_eq!(u.complemented().complemented(), u.clone());
            prop_assert_eq!(u.complemented().e_count(), u.n_count());
        }

        #[test]
        fn display_parse_roundtrip(u in arb_word()) {
            prop_assert_eq!(u.to_string().parse::<BinomialWord>().unwrap(), u);
        }
    }
}
