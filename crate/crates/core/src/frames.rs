//! Bi-infinite periodic path pairs, frames anchored on them, and the
//! parallelogram polyominoes they encode.
//!
//! A [`FramedPair`] with words `u″ ∈ B_{m−1,n−1}` and `ℓ′ ∈ B_{m−1,n}` stands
//! for two bi-infinite lattice paths through the origin: the red path repeats
//! `N·u″` (period vector `(m−1, n)`) and the green path repeats `E·ℓ′`
//! (period vector `(m, n)`). Each path has exactly one north step per
//! ordinate and one east step per abscissa, so steps are labelled by the
//! coordinate they leave from: `N_j` leaves height `j`, `E_i` leaves
//! abscissa `i`. Step coordinates are looked up from prefix tables of the
//! period words; the paths are never materialised.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bipartite::SortedBipartiteConfig;
use crate::error::{Result, SandpileError};
use crate::words::{BinomialWord, Step};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Point {
    pub x: i64,
    pub y: i64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0, y: 0 };

    pub fn new(x: i64, y: i64) -> Point {
        Point { x, y }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.x, self.y].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [x, y] = <[i64; 2]>::deserialize(d)?;
        Ok(Point { x, y })
    }
}

/// Coordinates of the steps of one period word, by occurrence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Period {
    /// Number of east steps preceding the r-th north step.
    north_x: Vec<i64>,
    /// Number of north steps preceding the r-th east step.
    east_y: Vec<i64>,
    /// Index in the word of the r-th north step.
    north_at: Vec<usize>,
    /// Index in the word of the r-th east step.
    east_at: Vec<usize>,
    word: BinomialWord,
}

impl Period {
    fn new(word: BinomialWord) -> Period {
        let mut p = Period {
            north_x: Vec::with_capacity(word.n_count()),
            east_y: Vec::with_capacity(word.e_count()),
            north_at: Vec::with_capacity(word.n_count()),
            east_at: Vec::with_capacity(word.e_count()),
            word,
        };
        let (mut e, mut n) = (0i64, 0i64);
        for (i, s) in p.word.letters().iter().enumerate() {
            match s {
                Step::E => {
                    p.east_y.push(n);
                    p.east_at.push(i);
                    e += 1;
                }
                Step::N => {
                    p.north_x.push(e);
                    p.north_at.push(i);
                    n += 1;
                }
            }
        }
        p
    }

    fn width(&self) -> i64 {
        self.east_y.len() as i64
    }

    fn height(&self) -> i64 {
        self.north_x.len() as i64
    }

    /// Abscissa of the north step leaving height `j`.
    fn north_step_x(&self, j: i64) -> i64 {
        let h = self.height();
        j.div_euclid(h) * self.width() + self.north_x[j.rem_euclid(h) as usize]
    }

    /// Ordinate of the east step leaving abscissa `i`.
    fn east_step_y(&self, i: i64) -> i64 {
        let w = self.width();
        i.div_euclid(w) * self.height() + self.east_y[i.rem_euclid(w) as usize]
    }

    /// The period read from the north step at height `j`.
    fn word_from_north(&self, j: i64) -> BinomialWord {
        self.word
            .rotate_left(self.north_at[j.rem_euclid(self.height()) as usize])
    }

    /// The period read from the east step at abscissa `i`.
    fn word_from_east(&self, i: i64) -> BinomialWord {
        self.word
            .rotate_left(self.east_at[i.rem_euclid(self.width()) as usize])
    }
}

/// The pair `((N·u″)^ℤ, (E·ℓ′)^ℤ)` with a frame anchored at a grid point.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FramedPair {
    upper: BinomialWord,
    lower: BinomialWord,
    anchor: Point,
    red: Period,
    green: Period,
}

#[derive(Serialize, Deserialize)]
struct RawPair {
    upper: BinomialWord,
    lower: BinomialWord,
    anchor: Point,
}

impl Serialize for FramedPair {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawPair {
            upper: self.upper.clone(),
            lower: self.lower.clone(),
            anchor: self.anchor,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FramedPair {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawPair::deserialize(d)?;
        FramedPair::new(raw.upper, raw.lower, raw.anchor).map_err(serde::de::Error::custom)
    }
}

/// Direction of a frame jump between stable intersections.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Down to the next lower stable intersection; realises φ.
    Next,
    /// Up to the next higher stable intersection; realises ψ.
    Prev,
}

impl FramedPair {
    /// Requires `upper ∈ B_{m−1,n−1}` and `lower ∈ B_{m−1,n}` with `m ≥ 2`.
    pub fn new(upper: BinomialWord, lower: BinomialWord, anchor: Point) -> Result<FramedPair> {
        if lower.e_count() == 0 {
            return Err(SandpileError::InvalidWord(
                "the lower word needs at least one east step (m ≥ 2)".into(),
            ));
        }
        if upper.e_count() != lower.e_count() || upper.n_count() + 1 != lower.n_count() {
            return Err(SandpileError::InvalidWord(format!(
                "tallies do not fit B_{{m-1,n-1}} x B_{{m-1,n}}: upper {upper} has ({},{}), lower {lower} has ({},{})",
                upper.e_count(),
                upper.n_count(),
                lower.e_count(),
                lower.n_count()
            )));
        }
        let red = Period::new(upper.wrapped(Some(Step::N), None));
        let green = Period::new(lower.wrapped(Some(Step::E), None));
        Ok(FramedPair {
            upper,
            lower,
            anchor,
            red,
            green,
        })
    }

    pub fn parse(upper: &str, lower: &str, anchor: Point) -> Result<FramedPair> {
        FramedPair::new(upper.parse()?, lower.parse()?, anchor)
    }

    pub fn upper(&self) -> &BinomialWord {
        &self.upper
    }

    pub fn lower(&self) -> &BinomialWord {
        &self.lower
    }

    pub fn anchor(&self) -> Point {
        self.anchor
    }

    pub fn m(&self) -> usize {
        self.lower.e_count() + 1
    }

    pub fn n(&self) -> usize {
        self.lower.n_count()
    }

    pub fn with_anchor(&self, anchor: Point) -> FramedPair {
        FramedPair {
            anchor,
            ..self.clone()
        }
    }

    /// `X₁(N_j)` on the red path.
    pub fn red_north_x(&self, j: i64) -> i64 {
        self.red.north_step_x(j)
    }

    /// `X₂(E_i)` on the red path.
    pub fn red_east_y(&self, i: i64) -> i64 {
        self.red.east_step_y(i)
    }

    /// `X₁(N_j)` on the green path.
    pub fn green_north_x(&self, j: i64) -> i64 {
        self.green.north_step_x(j)
    }

    /// `X₂(E_i)` on the green path.
    pub fn green_east_y(&self, i: i64) -> i64 {
        self.green.east_step_y(i)
    }

    /// Both paths pass through the anchor, leaving it north on the red path
    /// and east on the green path.
    pub fn is_stable_intersection(&self) -> bool {
        let Point { x, y } = self.anchor;
        self.red_north_x(y) == x && self.green_east_y(x) == y
    }

    /// The `m` stable intersections of the pair in its own coordinates,
    /// ordered from the highest `z(0)` down to the lowest `z(m−1)`.
    pub fn stable_intersections_raw(&self) -> Vec<Point> {
        let m = self.m() as i64;
        let mut out: Vec<Point> = (0..m)
            .map(|k| {
                // pos(k + m·t) = pos(k) + t, so the zero in this residue class is unique
                let j = k - m * pos(self, k);
                Point::new(j, self.green_east_y(j))
            })
            .collect();
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }

    /// As [`stable_intersections_raw`](Self::stable_intersections_raw),
    /// translated so that the lowest one sits at the origin.
    pub fn stable_intersections(&self) -> Vec<Point> {
        let raw = self.stable_intersections_raw();
        let base = raw[raw.len() - 1];
        raw.into_iter()
            .map(|p| Point::new(p.x - base.x, p.y - base.y))
            .collect()
    }

    /// The configuration read off the frame at the anchor.
    pub fn measure(&self) -> SortedBipartiteConfig {
        let Point { x, y } = self.anchor;
        let nonsink = (0..self.n() as i64)
            .map(|i| self.green_north_x(y + i) - x - 1)
            .collect();
        let sinkpart = (0..self.m() as i64 - 1)
            .map(|j| self.red_east_y(x + j) - y - 1)
            .collect();
        SortedBipartiteConfig::new(self.m(), self.n(), nonsink, sinkpart)
            .expect("step coordinates are monotone in the step index")
    }

    /// Moves the anchor to the neighbouring stable intersection, or leaves it
    /// in place at the end of the chain.
    pub fn jump(&self, direction: Direction) -> Result<FramedPair> {
        if !self.is_stable_intersection() {
            return Err(SandpileError::NotStableIntersection(
                self.anchor.x,
                self.anchor.y,
            ));
        }
        let zs = self.stable_intersections_raw();
        let target = match direction {
            Direction::Next => zs.iter().copied().find(|&z| z < self.anchor),
            Direction::Prev => zs.iter().rev().copied().find(|&z| z > self.anchor),
        };
        Ok(self.with_anchor(target.unwrap_or(self.anchor)))
    }

    /// The member `(v″, k′)` of the cyclic part read at stable intersection `z`:
    /// the red path after `(z₁, z₂+1)` and the green path after `(z₁+1, z₂)`.
    pub fn member_at(&self, z: Point) -> (BinomialWord, BinomialWord) {
        (
            self.red.word_from_north(z.y).tail(),
            self.green.word_from_east(z.x).tail(),
        )
    }

    /// The parallelogram polyomino `(N·v″·E, E·k′)` of the member at `z(0)`.
    pub fn polyomino(&self) -> Polyomino {
        let z0 = self.stable_intersections_raw()[0];
        let (upper, lower) = self.member_at(z0);
        Polyomino {
            upper: upper.wrapped(Some(Step::N), Some(Step::E)),
            lower: lower.wrapped(Some(Step::E), None),
        }
    }

    /// Number of east steps `E_{y₁+k}`, `0 ≤ k < m`, with positive relative position.
    pub fn grade(&self) -> usize {
        let x = self.anchor.x;
        (0..self.m() as i64)
            .filter(|&k| pos(self, x + k) >= 1)
            .count()
    }

    /// The anchored configuration is parking iff `pos(E_{y₁+i}) ≤ 0` for `1 ≤ i < m`.
    pub fn is_parking_anchor(&self) -> bool {
        let x = self.anchor.x;
        (1..self.m() as i64).all(|i| pos(self, x + i) <= 0)
    }
}

impl fmt::Display for FramedPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}) @ {}", self.upper, self.lower, self.anchor)
    }
}

/// Relative position of the green east step `E_j` against the red north step
/// at the same height.
pub fn pos(p: &FramedPair, j: i64) -> i64 {
    j - p.red_north_x(p.green_east_y(j))
}

/// `Σ_{k<m} pos(E_{j+k})`; grows by exactly one per step of `j`.
pub fn cumuledpos(p: &FramedPair, j: i64) -> i64 {
    (0..p.m() as i64).map(|k| pos(p, j + k)).sum()
}

/// The frame representation of a stable sorted configuration, anchored at the origin.
pub fn config_to_framed_pair(c: &SortedBipartiteConfig) -> Result<FramedPair> {
    if !c.is_stable() {
        return Err(SandpileError::NotStable);
    }
    let (m, n) = (c.m() as i64, c.n() as i64);
    let mut runs = Vec::with_capacity(2 * c.n() + 1);
    let mut prev = 0;
    for &h in c.nonsink() {
        runs.push((Step::E, (h - prev) as usize));
        runs.push((Step::N, 1));
        prev = h;
    }
    runs.push((Step::E, (m - 1 - prev) as usize));
    let lower = BinomialWord::from_runs(&runs);

    runs.clear();
    prev = 0;
    for &h in c.sinkpart() {
        runs.push((Step::N, (h - prev) as usize));
        runs.push((Step::E, 1));
        prev = h;
    }
    runs.push((Step::N, (n - 1 - prev) as usize));
    let upper = BinomialWord::from_runs(&runs);

    FramedPair::new(upper, lower, Point::ORIGIN)
}

/// The `m` members of the cyclic part containing `(upper, lower)`, listed from
/// the stable intersection `z(0)` down to `z(m−1)`.
pub fn cyclic_part(
    upper: &BinomialWord,
    lower: &BinomialWord,
) -> Result<Vec<(BinomialWord, BinomialWord)>> {
    let p = FramedPair::new(upper.clone(), lower.clone(), Point::ORIGIN)?;
    Ok(p.stable_intersections_raw()
        .into_iter()
        .map(|z| p.member_at(z))
        .collect())
}

/// The unique polyomino-encoding member of the cyclic part of `(upper, lower)`.
pub fn polyomino_of_part(upper: &BinomialWord, lower: &BinomialWord) -> Result<Polyomino> {
    Ok(FramedPair::new(upper.clone(), lower.clone(), Point::ORIGIN)?.polyomino())
}

/// True iff the two paths from the origin meet only at their endpoints.
///
/// Both words must lie in the same `B_{m,n}`. A pair whose upper word does
/// not have the shape `N…E` or whose lower word does not have the shape
/// `E…N` cannot bound a polyomino and yields `false`.
pub fn is_polyomino(upper: &BinomialWord, lower: &BinomialWord) -> Result<bool> {
    if upper.e_count() != lower.e_count() || upper.n_count() != lower.n_count() {
        return Err(SandpileError::InvalidWord(format!(
            "{upper} and {lower} do not have the same letter tallies"
        )));
    }
    if upper.is_empty() {
        return Ok(false);
    }
    if upper.first() != Some(Step::N)
        || upper.last() != Some(Step::E)
        || lower.first() != Some(Step::E)
        || lower.last() != Some(Step::N)
    {
        return Ok(false);
    }
    let a = upper.vertices();
    let b = lower.vertices();
    // both paths are monotone, so vertex k of each lies on the anti-diagonal x + y = k
    Ok(a[1..a.len() - 1]
        .iter()
        .zip(&b[1..b.len() - 1])
        .all(|(p, q)| p != q))
}

/// A parallelogram polyomino given by its upper and lower boundary paths.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawPolyomino")]
pub struct Polyomino {
    upper: BinomialWord,
    lower: BinomialWord,
}

#[derive(Deserialize)]
struct RawPolyomino {
    upper: BinomialWord,
    lower: BinomialWord,
}

impl TryFrom<RawPolyomino> for Polyomino {
    type Error = SandpileError;

    fn try_from(r: RawPolyomino) -> Result<Polyomino> {
        Polyomino::new(r.upper, r.lower)
    }
}

impl Polyomino {
    pub fn new(upper: BinomialWord, lower: BinomialWord) -> Result<Polyomino> {
        if is_polyomino(&upper, &lower)? {
            Ok(Polyomino { upper, lower })
        } else {
            Err(SandpileError::InvalidWord(format!(
                "({upper}, {lower}) does not bound a parallelogram polyomino"
            )))
        }
    }

    pub(crate) fn new_unchecked(upper: BinomialWord, lower: BinomialWord) -> Polyomino {
        Polyomino { upper, lower }
    }

    pub fn upper(&self) -> &BinomialWord {
        &self.upper
    }

    pub fn lower(&self) -> &BinomialWord {
        &self.lower
    }

    /// Width of the bounding box.
    pub fn m(&self) -> usize {
        self.upper.e_count()
    }

    /// Height of the bounding box.
    pub fn n(&self) -> usize {
        self.upper.n_count()
    }

    /// For each column `x`, the half-open row range `[bottom, top)` of its cells.
    pub fn columns(&self) -> Vec<(i64, i64)> {
        let tops = column_heights(&self.upper);
        let bottoms = column_heights(&self.lower);
        bottoms.into_iter().zip(tops).collect()
    }

    pub fn area(&self) -> i64 {
        self.columns().iter().map(|(b, t)| t - b).sum()
    }
}

/// Ordinate of each east step of a path from the origin.
fn column_heights(w: &BinomialWord) -> Vec<i64> {
    let mut y = 0;
    let mut out = Vec::with_capacity(w.e_count());
    for s in w.letters() {
        match s {
            Step::E => out.push(y),
            Step::N => y += 1,
        }
    }
    out
}

impl fmt::Display for Polyomino {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.upper, self.lower)
    }
}
