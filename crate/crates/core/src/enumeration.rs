//! Counting parallelogram polyominoes: closed forms in exact arithmetic,
//! brute-force enumeration, cyclic patterns and the cyclic-lemma check.

use std::collections::{BTreeSet, HashMap};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::error::{Result, SandpileError};
use crate::frames::{cyclic_part, is_polyomino, polyomino_of_part, Polyomino};
use crate::limits::Limits;
use crate::words::{BinomialWord, Step};

/// `C(n, k)`, zero outside `0 ≤ k ≤ n`.
pub fn binomial(n: i64, k: i64) -> BigUint {
    if n < 0 || k < 0 || k > n {
        return BigUint::zero();
    }
    num_integer::binomial(BigUint::from(n as u64), BigUint::from(k as u64))
}

fn exact_div(num: BigUint, den: u64, what: &str) -> Result<BigUint> {
    let (q, r) = num.div_rem(&BigUint::from(den));
    if !r.is_zero() {
        return Err(SandpileError::Internal(format!(
            "{what}: division by {den} is not exact"
        )));
    }
    Ok(q)
}

fn require_positive(pairs: &[(&str, usize)]) -> Result<()> {
    for (name, v) in pairs {
        if *v == 0 {
            return Err(SandpileError::Unsupported(format!(
                "{name} must be at least 1"
            )));
        }
    }
    Ok(())
}

/// The 2×2 Lindström–Gessel–Viennot determinant
/// `C(s, m−1)² − C(s, m)·C(s, m−2)` with `s = m + n − 2`.
pub fn lgv_determinant(m: usize, n: usize) -> BigInt {
    let (m, s) = (m as i64, (m + n) as i64 - 2);
    let a = BigInt::from(binomial(s, m - 1));
    let b = BigInt::from(binomial(s, m));
    let c = BigInt::from(binomial(s, m - 2));
    &a * &a - b * c
}

/// `|Polyo_{m,n}| = C(m+n−2, m−1)·C(m+n−1, m−1) / m`, checked against the
/// determinant form.
pub fn count_polyominoes_formula(m: usize, n: usize) -> Result<BigUint> {
    require_positive(&[("m", m), ("n", n)])?;
    let (mi, ni) = (m as i64, n as i64);
    let product = binomial(mi + ni - 2, mi - 1) * binomial(mi + ni - 1, mi - 1);
    let count = exact_div(product, m as u64, "polyomino count")?;
    if BigInt::from(count.clone()) != lgv_determinant(m, n) {
        return Err(SandpileError::Internal(format!(
            "product formula and determinant disagree for ({m}, {n})"
        )));
    }
    Ok(count)
}

fn check_sum(m: usize, n: usize, cap: usize) -> Result<()> {
    if m + n > cap {
        return Err(SandpileError::BoundExceeded {
            what: "m + n",
            value: m + n,
            cap,
        });
    }
    Ok(())
}

fn with_pool<T: Send>(limits: &Limits, f: impl FnOnce() -> T + Send) -> Result<T> {
    match limits.threads {
        None => Ok(f()),
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build()
            .map(|pool| pool.install(f))
            .map_err(|e| SandpileError::Internal(format!("thread pool: {e}"))),
    }
}

/// All `m × n` parallelogram polyominoes in lexicographic order of
/// `(upper, lower)`, found by testing every pair of boundary words.
pub fn enumerate_polyominoes(m: usize, n: usize, limits: &Limits) -> Result<Vec<Polyomino>> {
    require_positive(&[("m", m), ("n", n)])?;
    check_sum(m, n, limits.enumeration_sum_cap)?;
    let inner = BinomialWord::all(m - 1, n - 1);
    let uppers: Vec<BinomialWord> = inner
        .iter()
        .map(|u| u.wrapped(Some(Step::N), Some(Step::E)))
        .collect();
    let lowers: Vec<BinomialWord> = inner
        .iter()
        .map(|l| l.wrapped(Some(Step::E), Some(Step::N)))
        .collect();
    with_pool(limits, || {
        uppers
            .par_iter()
            .flat_map_iter(|up| {
                lowers
                    .iter()
                    .filter(|lo| is_polyomino(up, lo).unwrap_or(false))
                    .map(|lo| Polyomino::new_unchecked(up.clone(), lo.clone()))
                    .collect::<Vec<_>>()
            })
            .collect()
    })
}

/// `E·w = f·g` with `g·f = p` for some split point.
pub fn cyc_matches(w: &BinomialWord, p: &BinomialWord) -> Result<bool> {
    if w.len() + 1 != p.len() {
        return Err(SandpileError::LengthMismatch {
            expected: w.len() + 1,
            found: p.len(),
        });
    }
    let ew = w.wrapped(Some(Step::E), None);
    let letters = ew.letters();
    Ok((0..=letters.len()).any(|i| {
        let (f, g) = letters.split_at(i);
        g.iter().chain(f).eq(p.letters().iter())
    }))
}

/// The set `Cyc[p]` of words `w` with `|w| + 1 = |p|` cyclically matching `p`.
pub fn cyc_set(p: &BinomialWord) -> Result<BTreeSet<BinomialWord>> {
    if p.e_count() == 0 {
        return Ok(BTreeSet::new());
    }
    let mut out = BTreeSet::new();
    for i in 0..p.len() {
        let r = p.rotate_left(i);
        if r.first() == Some(Step::E) && cyc_matches(&r.tail(), p)? {
            out.insert(r.tail());
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatternKind {
    /// `(E^a N^b)^c`
    Simple,
    /// `(E^a N^a E^b N^b)^c`, `a ≠ b`
    Double,
}

impl PatternKind {
    pub fn name(self) -> &'static str {
        match self {
            PatternKind::Simple => "simple",
            PatternKind::Double => "double",
        }
    }
}

/// The pattern word of the given shape.
pub fn pattern_word(a: usize, b: usize, c: usize, kind: PatternKind) -> BinomialWord {
    let block = match kind {
        PatternKind::Simple => BinomialWord::from_runs(&[(Step::E, a), (Step::N, b)]),
        PatternKind::Double => {
            BinomialWord::from_runs(&[(Step::E, a), (Step::N, a), (Step::E, b), (Step::N, b)])
        }
    };
    block.repeat(c)
}

/// Closed forms for `|Polyo[p]|` on simple and double patterns.
pub fn count_pattern_formula(a: usize, b: usize, c: usize, kind: PatternKind) -> Result<BigUint> {
    require_positive(&[("a", a), ("b", b), ("c", c)])?;
    let (ai, bi, ci) = (a as i64, b as i64, c as i64);
    match kind {
        PatternKind::Simple => exact_div(
            binomial(ci * (ai + bi) - 2, ci * ai - 1),
            c as u64,
            "simple pattern count",
        ),
        PatternKind::Double => {
            if a == b {
                return Err(SandpileError::Unsupported(
                    "the double-pattern formula requires a ≠ b".into(),
                ));
            }
            exact_div(
                binomial(2 * ci * (ai + bi) - 2, ci * (ai + bi) - 1),
                2 * c as u64,
                "double pattern count",
            )
        }
    }
}

/// Polyominoes whose lower boundary is exactly `p`, in lexicographic order.
pub fn enumerate_pattern(p: &BinomialWord, limits: &Limits) -> Result<Vec<Polyomino>> {
    if p.first() != Some(Step::E) || p.last() != Some(Step::N) {
        return Err(SandpileError::InvalidWord(format!(
            "pattern {p} must start with E and end with N"
        )));
    }
    let (m, n) = (p.e_count(), p.n_count());
    check_sum(m, n, limits.enumeration_sum_cap)?;
    let mut out = Vec::new();
    for u in BinomialWord::all(m - 1, n - 1) {
        let up = u.wrapped(Some(Step::N), Some(Step::E));
        if is_polyomino(&up, p)? {
            out.push(Polyomino::new_unchecked(up, p.clone()));
        }
    }
    Ok(out)
}

/// Formula against brute-force comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountReport {
    pub parameters: Vec<(&'static str, usize)>,
    pub pattern: Option<PatternKind>,
    pub formula: BigUint,
    pub brute: Option<BigUint>,
}

fn big_to_json(x: &BigUint) -> Value {
    match x.to_u64() {
        Some(v) => Value::from(v),
        None => Value::from(x.to_string()),
    }
}

impl CountReport {
    pub fn agreement(&self) -> bool {
        self.brute.as_ref() == Some(&self.formula)
    }

    /// Counts that do not fit in `u64` are emitted as decimal strings.
    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        for (k, v) in &self.parameters {
            map.insert((*k).to_string(), json!(v));
        }
        if let Some(kind) = self.pattern {
            map.insert("kind".into(), json!(kind.name()));
        }
        map.insert("formula".into(), big_to_json(&self.formula));
        map.insert(
            "brute".into(),
            self.brute.as_ref().map_or(Value::Null, big_to_json),
        );
        map.insert("agree".into(), json!(self.agreement()));
        Value::Object(map)
    }
}

pub fn count_polyominoes(m: usize, n: usize, brute: bool, limits: &Limits) -> Result<CountReport> {
    let formula = count_polyominoes_formula(m, n)?;
    let brute = if brute {
        Some(BigUint::from(enumerate_polyominoes(m, n, limits)?.len()))
    } else {
        None
    };
    Ok(CountReport {
        parameters: vec![("m", m), ("n", n)],
        pattern: None,
        formula,
        brute,
    })
}

pub fn count_pattern(
    a: usize,
    b: usize,
    c: usize,
    kind: PatternKind,
    brute: bool,
    limits: &Limits,
) -> Result<CountReport> {
    let formula = count_pattern_formula(a, b, c, kind)?;
    let brute = if brute {
        let p = pattern_word(a, b, c, kind);
        Some(BigUint::from(enumerate_pattern(&p, limits)?.len()))
    } else {
        None
    };
    Ok(CountReport {
        parameters: vec![("a", a), ("b", b), ("c", c)],
        pattern: Some(kind),
        formula,
        brute,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyMode {
    Exhaustive,
    Sample { count: usize, seed: u64 },
}

/// Outcome of a cyclic-lemma check over `B_{m−1,n−1} × B_{m−1,n}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicReport {
    pub m: usize,
    pub n: usize,
    pub exhaustive: bool,
    pub pairs_checked: usize,
    /// Distinct parts met; the full partition count in exhaustive mode.
    pub parts: usize,
    pub failures: Vec<String>,
    pub formula: BigUint,
}

impl CyclicReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty() && (!self.exhaustive || BigUint::from(self.parts) == self.formula)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "m": self.m,
            "n": self.n,
            "mode": if self.exhaustive { "exhaustive" } else { "sample" },
            "pairs_checked": self.pairs_checked,
            "parts": self.parts,
            "formula": big_to_json(&self.formula),
            "failures": self.failures,
            "ok": self.ok(),
        })
    }
}

type Pair = (BinomialWord, BinomialWord);

/// Checks the part of one pair: `m` distinct members including the pair,
/// and exactly one member bounding a polyomino, namely the selected one.
fn check_part(
    u: &BinomialWord,
    l: &BinomialWord,
    m: usize,
    failures: &mut Vec<String>,
) -> Result<Vec<Pair>> {
    let part = cyclic_part(u, l)?;
    let mut sorted = part.clone();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != m {
        failures.push(format!(
            "part of ({u}, {l}) has {} distinct members",
            sorted.len()
        ));
    }
    if !sorted.iter().any(|(a, b)| a == u && b == l) {
        failures.push(format!("({u}, {l}) is not in its own part"));
    }
    let polys: Vec<&Pair> = sorted
        .iter()
        .filter(|(a, b)| {
            let up = a.wrapped(Some(Step::N), Some(Step::E));
            let lo = b.wrapped(Some(Step::E), None);
            is_polyomino(&up, &lo).unwrap_or(false)
        })
        .collect();
    if polys.len() != 1 {
        failures.push(format!(
            "part of ({u}, {l}) has {} polyomino members",
            polys.len()
        ));
    } else {
        let chosen = polyomino_of_part(u, l)?;
        let (a, b) = polys[0];
        if chosen.upper().tail() != a.wrapped(None, Some(Step::E)) || chosen.lower().tail() != *b {
            failures.push(format!("part of ({u}, {l}) selects the wrong member"));
        }
    }
    Ok(sorted)
}

fn random_word(a: usize, b: usize, rng: &mut ChaCha8Rng) -> BinomialWord {
    let mut v = BinomialWord::from_runs(&[(Step::E, a), (Step::N, b)])
        .letters()
        .to_vec();
    v.shuffle(rng);
    BinomialWord::new(v)
}

/// Verifies both statements of the cyclic lemma for `(m, n)`.
pub fn verify_cyclic_lemma(
    m: usize,
    n: usize,
    mode: VerifyMode,
    limits: &Limits,
) -> Result<CyclicReport> {
    if m < 2 || n < 1 {
        return Err(SandpileError::Unsupported(
            "the cyclic lemma check needs m ≥ 2 and n ≥ 1".into(),
        ));
    }
    let formula = count_polyominoes_formula(m, n)?;
    let mut failures = Vec::new();
    let mut parts: HashMap<Pair, Vec<Pair>> = HashMap::new();
    let exhaustive = matches!(mode, VerifyMode::Exhaustive);
    let pairs: Vec<Pair> = match mode {
        VerifyMode::Exhaustive => {
            check_sum(m, n, limits.cyclic_sum_cap)?;
            let uppers = BinomialWord::all(m - 1, n - 1);
            let lowers = BinomialWord::all(m - 1, n);
            uppers
                .iter()
                .flat_map(|u| lowers.iter().map(move |l| (u.clone(), l.clone())))
                .collect()
        }
        VerifyMode::Sample { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..count)
                .map(|_| {
                    (
                        random_word(m - 1, n - 1, &mut rng),
                        random_word(m - 1, n, &mut rng),
                    )
                })
                .collect()
        }
    };
    for (u, l) in &pairs {
        if parts.contains_key(&(u.clone(), l.clone())) {
            continue;
        }
        let part = check_part(u, l, m, &mut failures)?;
        // every member must generate the very same part
        for member in &part {
            let other = check_part(&member.0, &member.1, m, &mut failures)?;
            if other != part {
                failures.push(format!(
                    "parts of ({u}, {l}) and ({}, {}) differ",
                    member.0, member.1
                ));
            }
        }
        for member in &part {
            parts.insert(member.clone(), part.clone());
        }
    }
    let distinct: BTreeSet<&Vec<Pair>> = parts.values().collect();
    if exhaustive && parts.len() != pairs.len() {
        failures.push(format!(
            "parts cover {} pairs out of {}",
            parts.len(),
            pairs.len()
        ));
    }
    Ok(CyclicReport {
        m,
        n,
        exhaustive,
        pairs_checked: pairs.len(),
        parts: distinct.len(),
        failures,
        formula,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> BinomialWord {
        s.parse().unwrap()
    }

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn polyomino_formula_values() {
        assert_eq!(count_polyominoes_formula(2, 2).unwrap(), big(3));
        assert_eq!(count_polyominoes_formula(3, 3).unwrap(), big(20));
        for n in 1..12 {
            assert_eq!(count_polyominoes_formula(1, n).unwrap(), big(1));
        }
        assert_eq!(count_polyominoes_formula(4, 6).unwrap(), big(1176));
        for m in 1..=30 {
            for n in 1..=30 {
                count_polyominoes_formula(m, n).unwrap();
            }
        }
        assert!(count_polyominoes_formula(0, 3).is_err());
    }

    #[test]
    fn brute_enumeration() {
        let limits = Limits::default();
        let got: Vec<String> = enumerate_polyominoes(2, 2, &limits)
            .unwrap()
            .iter()
            .map(|p| p.to_string())
            .collect();
        assert_eq!(got, ["(NENE, EENN)", "(NNEE, EENN)", "(NNEE, ENEN)"]);
        let unit = enumerate_polyominoes(1, 1, &limits).unwrap();
        assert_eq!(unit.len(), 1);
        assert_eq!(unit[0].upper(), &w("NE"));
        let big_one = enumerate_polyominoes(4, 6, &limits).unwrap();
        assert_eq!(big_one.len(), 1176);
        assert!(big_one
            .iter()
            .any(|p| p.upper() == &w("NENNNENNEE") && p.lower() == &w("EENENNENNN")));
        assert!(matches!(
            enumerate_polyominoes(8, 8, &limits),
            Err(SandpileError::BoundExceeded { .. })
        ));
    }

    #[test]
    fn serial_and_parallel_agree() {
        let serial = Limits {
            threads: Some(1),
            ..Limits::default()
        };
        let parallel = Limits {
            threads: Some(4),
            ..Limits::default()
        };
        assert_eq!(
            enumerate_polyominoes(4, 5, &serial).unwrap(),
            enumerate_polyominoes(4, 5, &parallel).unwrap()
        );
    }

    #[test]
    fn cyclic_matching() {
        assert!(cyc_matches(&w("NEN"), &w("ENEN")).unwrap());
        assert!(!cyc_matches(&w("NNE"), &w("ENEN")).unwrap());
        assert!(cyc_matches(&w("NE"), &w("ENEN")).is_err());
        for a in 1..4 {
            for b in 1..4 {
                for c in 1..3 {
                    let p = pattern_word(a, b, c, PatternKind::Simple);
                    assert_eq!(cyc_set(&p).unwrap().len(), a);
                }
            }
        }
    }

    #[test]
    fn pattern_formulas() {
        assert_eq!(
            count_pattern_formula(1, 1, 3, PatternKind::Simple).unwrap(),
            big(2)
        );
        assert_eq!(
            count_pattern_formula(2, 1, 2, PatternKind::Simple).unwrap(),
            big(2)
        );
        assert_eq!(
            count_pattern_formula(1, 2, 1, PatternKind::Double).unwrap(),
            big(3)
        );
        assert!(matches!(
            count_pattern_formula(2, 2, 1, PatternKind::Double),
            Err(SandpileError::Unsupported(_))
        ));
        let limits = Limits::default();
        assert_eq!(enumerate_pattern(&w("ENENEN"), &limits).unwrap().len(), 2);
        assert_eq!(enumerate_pattern(&w("EENN"), &limits).unwrap().len(), 2);
        assert_eq!(enumerate_pattern(&w("EN"), &limits).unwrap().len(), 1);
        assert!(enumerate_pattern(&w("NE"), &limits).is_err());
    }

    #[test]
    fn cyclic_lemma_small() {
        let limits = Limits::default();
        let r = verify_cyclic_lemma(2, 2, VerifyMode::Exhaustive, &limits).unwrap();
        assert_eq!((r.pairs_checked, r.parts), (6, 3));
        assert!(r.ok(), "{:?}", r.failures);
        let s =
            verify_cyclic_lemma(4, 6, VerifyMode::Sample { count: 20, seed: 7 }, &limits).unwrap();
        assert!(s.ok(), "{:?}", s.failures);
        assert!(matches!(
            verify_cyclic_lemma(6, 6, VerifyMode::Exhaustive, &limits),
            Err(SandpileError::BoundExceeded { .. })
        ));
    }

    #[test]
    fn report_json() {
        let r = count_polyominoes(2, 2, true, &Limits::default()).unwrap();
        assert_eq!(
            r.to_json(),
            json!({"m":2,"n":2,"formula":3,"brute":3,"agree":true})
        );
    }
}
