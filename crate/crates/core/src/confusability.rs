//! Structure of `B(x, y)`: segment-distance tuples, the eighteen ordered
//! subsets `B_1 … B_18` with their deletion-index pair sets `E_k`, the
//! closed-form predictions for `E_k`, and decompositions into ≤2-periodic
//! pieces.

use serde::Serialize;

use crate::ball::{self, shifted_left, shifted_right, BallView};
use crate::error::{Error, Result};
use crate::seq::{self, BinSeq};

/// Number of ordered subsets.
pub const SUBSETS: usize = 18;

/// Which deletion comes first in the tuple reading.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Side {
    /// `d_x ≤ d_y`
    XFirst,
    /// `d_x > d_y`
    YFirst,
}

/// Hamming distances of the prefix, shifted middle and suffix segments of
/// `x(d_x, 0)` against `y(d_y, 0)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TupleClass {
    pub d1: usize,
    pub d2: usize,
    pub d3: usize,
    pub side: Side,
}

impl TupleClass {
    pub fn total(&self) -> usize {
        self.d1 + self.d2 + self.d3
    }

    pub fn as_triple(&self) -> (usize, usize, usize) {
        (self.d1, self.d2, self.d3)
    }
}

/// The nine `(d1, d2, d3)` rows that can occur when the segment distances
/// add up to one or two. They are the same for both sides.
pub const SEGMENT_TUPLES: [(usize, usize, usize); 9] = [
    (1, 0, 0),
    (0, 0, 1),
    (0, 1, 0),
    (2, 0, 0),
    (0, 0, 2),
    (1, 0, 1),
    (1, 1, 0),
    (0, 1, 1),
    (0, 2, 0),
];

pub fn classify_tuple(x: &BinSeq, y: &BinSeq, dx: usize, dy: usize) -> Result<TupleClass> {
    seq::check_same_len(x, y)?;
    let n = x.len();
    for d in [dx, dy] {
        if d == 0 || d > n {
            return Err(Error::IndexOutOfRange { index: d, len: n });
        }
    }
    let seg = |a: usize, b: usize| seq::hamming_unchecked(&x.slice(a, b), &y.slice(a, b));
    Ok(if dx <= dy {
        TupleClass {
            d1: seg(1, dx - 1),
            d2: shifted_left(x, y, dx, dy),
            d3: seg(dy + 1, n),
            side: Side::XFirst,
        }
    } else {
        TupleClass {
            d1: seg(1, dy - 1),
            d2: shifted_right(x, y, dy, dx),
            d3: seg(dx + 1, n),
            side: Side::YFirst,
        }
    })
}

/// A quadruple with `x(d_x, e_x) = y(d_y, e_y)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Witness {
    pub dx: usize,
    pub ex: Option<usize>,
    pub dy: usize,
    pub ey: Option<usize>,
}

/// Ordering predicate of `B_k` applied to one witness. A missing
/// substitution index plays the role of 0; subsets 7 through 18 require
/// both substitutions to be present.
pub fn in_subset(k: usize, w: &Witness) -> bool {
    let (dx, dy) = (w.dx, w.dy);
    match (w.ex, w.ey) {
        (None, None) => false,
        (Some(ex), None) => match k {
            1 => ex < dx && dx < dy,
            2 => ex < dy && dy < dx,
            3 => dx < dy && dy < ex,
            4 => dy < dx && dx < ex,
            5 => dx < ex && ex <= dy,
            6 => dy <= ex && ex < dx,
            _ => false,
        },
        (None, Some(ey)) => match k {
            1 => ey < dx && dx < dy,
            2 => ey < dy && dy < dx,
            3 => dx < dy && dy < ey,
            4 => dy < dx && dx < ey,
            5 => dx <= ey && ey < dy,
            6 => dy < ey && ey <= dx,
            _ => false,
        },
        (Some(ex), Some(ey)) => match k {
            7 => ex < dx && ey < dx && dx <= dy,
            8 => ex < dy && ey < dy && dy <= dx,
            9 => dx <= dy && dy < ex && dy < ey,
            10 => dy <= dx && dx < ex && dx < ey,
            11 => (ex < dx && dx <= dy && dy < ey) || (ey < dx && dx <= dy && dy < ex),
            12 => (ex < dy && dy <= dx && dx < ey) || (ey < dy && dy <= dx && dx < ex),
            13 => (ex < dx && dx <= ey && ey < dy) || (ey < dx && dx < ex && ex <= dy),
            14 => (ex < dy && dy < ey && ey <= dx) || (ey < dy && dy <= ex && ex < dx),
            15 => (dx < ex && ex <= dy && dy < ey) || (dx <= ey && ey < dy && dy < ex),
            16 => (dy <= ex && ex < dx && dx < ey) || (dy < ey && ey <= dx && dx < ex),
            17 => dx < ex && ex <= dy && dx <= ey && ey < dy,
            18 => dy <= ex && ex < dx && dy < ey && ey <= dx,
            _ => false,
        },
    }
}

/// Index in `x` of position `p` of `x(d, 0)`.
#[inline]
fn lift(p: usize, d: usize) -> usize {
    if p < d {
        p
    } else {
        p + 1
    }
}

/// Position (1-based) of the single differing symbol, if any.
#[inline]
fn single_diff(a: &BinSeq, b: &BinSeq) -> Option<usize> {
    let diff = a.bits() ^ b.bits();
    (diff != 0).then(|| a.len() - diff.trailing_zeros() as usize)
}

/// Every `(z, witness)` with `z = x(d_x, e_x) = y(d_y, e_y)`.
///
/// For a fixed deletion pair the admissible `z` are exactly
/// `S(x(d_x, 0)) ∩ S(y(d_y, 0))`, and each such `z` fixes both
/// substitution indices, so looping over deletion pairs enumerates every
/// quadruple once.
pub fn witnesses(x: &BinSeq, y: &BinSeq) -> Result<Vec<(BinSeq, Witness)>> {
    seq::check_same_len(x, y)?;
    if x == y {
        return Err(Error::IdenticalInputs);
    }
    Ok(witnesses_unchecked(x, y))
}

pub(crate) fn witnesses_unchecked(x: &BinSeq, y: &BinSeq) -> Vec<(BinSeq, Witness)> {
    let n = x.len();
    let mut out = Vec::new();
    let ys: Vec<BinSeq> = (1..=n).map(|d| y.deleted(d)).collect();
    for dx in 1..=n {
        let u = x.deleted(dx);
        for (dy, v) in ys.iter().enumerate().map(|(i, v)| (i + 1, v)) {
            if seq::hamming_unchecked(&u, v) > 2 {
                continue;
            }
            for z in ball::substitution_midpoints(&u, v) {
                let ex = single_diff(&u, &z).map(|p| lift(p, dx));
                let ey = single_diff(v, &z).map(|p| lift(p, dy));
                out.push((z, Witness { dx, ex, dy, ey }));
            }
        }
    }
    out
}

/// The eighteen subsets of `B(x, y)` and their deletion-index pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubsetPartition {
    /// `subsets[k - 1] = B_k`.
    pub subsets: Vec<BallView>,
    /// `epairs[k - 1] = E_k`, sorted.
    pub epairs: Vec<Vec<(usize, usize)>>,
    /// `∪_k B_k`.
    pub union: BallView,
    /// `B(x, y)`, every `z` with at least one witness.
    pub intersection: BallView,
}

impl SubsetPartition {
    /// `B_k`, 1-based.
    pub fn b(&self, k: usize) -> &BallView {
        &self.subsets[k - 1]
    }

    /// `E_k`, 1-based.
    pub fn e(&self, k: usize) -> &[(usize, usize)] {
        &self.epairs[k - 1]
    }

    pub fn nonempty(&self, k: usize) -> bool {
        !self.subsets[k - 1].is_empty()
    }

    /// `|∪_{k ∈ ks} B_k|`.
    pub fn union_len(&self, ks: &[usize]) -> usize {
        let mut all: Vec<BinSeq> = ks
            .iter()
            .flat_map(|&k| self.b(k).elements.iter().copied())
            .collect();
        all.sort_unstable();
        all.dedup();
        all.len()
    }
}

pub fn subset_partition(x: &BinSeq, y: &BinSeq) -> Result<SubsetPartition> {
    let n = x.len();
    if n < 2 {
        return Err(Error::PreconditionViolated(
            "sequences need at least two symbols".into(),
        ));
    }
    let found = witnesses(x, y)?;
    Ok(partition_from_witnesses(&found, n))
}

pub(crate) fn partition_from_witnesses(found: &[(BinSeq, Witness)], n: usize) -> SubsetPartition {
    let mut subsets = vec![Vec::new(); SUBSETS];
    let mut epairs = vec![Vec::new(); SUBSETS];
    let mut all = Vec::with_capacity(found.len());
    for (z, w) in found {
        all.push(*z);
        for k in 1..=SUBSETS {
            if in_subset(k, w) {
                subsets[k - 1].push(*z);
                epairs[k - 1].push((w.dx, w.dy));
            }
        }
    }
    let subsets: Vec<BallView> = subsets
        .into_iter()
        .map(|v| BallView::from_unsorted(v, n))
        .collect();
    for e in &mut epairs {
        e.sort_unstable();
        e.dedup();
    }
    let union = BallView::from_unsorted(
        subsets
            .iter()
            .flat_map(|b| b.elements.iter().copied())
            .collect(),
        n,
    );
    SubsetPartition {
        subsets,
        epairs,
        union,
        intersection: BallView::from_unsorted(all, n),
    }
}

/// Closed-form prediction for `E_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosedFormE {
    /// Candidate deletion pairs, sorted.
    pub candidates: Vec<(usize, usize)>,
    /// True when the prediction is exact rather than a superset.
    pub determinate: bool,
}

impl ClosedFormE {
    fn exact(candidates: Vec<(usize, usize)>) -> Self {
        Self {
            candidates,
            determinate: true,
        }
    }

    fn superset(mut candidates: Vec<(usize, usize)>) -> Self {
        candidates.sort_unstable();
        candidates.dedup();
        Self {
            candidates,
            determinate: false,
        }
    }
}

/// Predicts `E_k` from shifted distances between disagreement indices.
///
/// Each odd `k` compares `x_{[j_a+1, j_b]}` with `y_{[j_a, j_b-1]}` for a
/// pair of disagreement indices fixed by `k`; each even `k` mirrors it with
/// the shift reversed and the pair swapped. The answer is a single pair or
/// empty, except in branches the closed form leaves open, where a scanned
/// superset is returned with `determinate = false`.
pub fn closed_form_e(x: &BinSeq, y: &BinSeq, k: usize) -> Result<ClosedFormE> {
    if !(1..=SUBSETS).contains(&k) {
        return Err(Error::ParamOutOfRange {
            name: "k",
            value: k as u64,
            min: 1,
            max: SUBSETS as u64,
        });
    }
    let p = seq::diff_profile(x, y)?;
    let dh = p.dh;
    let odd = k % 2 == 1;
    // (a, b) as offsets into j: positive values count from the front,
    // non-positive ones from the back (0 = j_{d_H}, -1 = j_{d_H - 1}).
    let (a, b, min_dh): (i64, i64, usize) = match k.div_ceil(2) {
        1 => (2, 0, 2),
        2 => (1, -1, 2),
        3 => (1, 0, 1),
        4 => (3, 0, 3),
        5 => (1, -2, 3),
        6 => (2, -1, 3),
        7 => (2, 0, 2),
        8 => (1, -1, 2),
        _ => (1, 0, 1),
    };
    if dh < min_dh {
        return Err(Error::PreconditionViolated(format!(
            "closed form for E_{k} needs d_H >= {min_dh}, got {dh}"
        )));
    }
    let idx = |o: i64| -> usize {
        if o > 0 {
            p.ji(o as usize)
        } else {
            p.ji((dh as i64 + o) as usize)
        }
    };
    let (ja, jb) = (idx(a), idx(b));
    let dist = if odd {
        shifted_left(x, y, ja, jb)
    } else {
        shifted_right(x, y, ja, jb)
    };
    let pair = if odd { (ja, jb) } else { (jb, ja) };
    // distance a nonempty E_k demands: 0 for k in {1..4, 7..12}, 1 for
    // {5, 6, 13..16}, 2 for {17, 18}
    let want = match k {
        1..=4 | 7..=12 => 0,
        5 | 6 | 13..=16 => 1,
        _ => 2,
    };
    let required_pair_distance = if k <= 6 { 1 } else { 2 };
    Ok(if dist == want {
        ClosedFormE::exact(vec![pair])
    } else if dist > want {
        ClosedFormE::exact(Vec::new())
    } else if k >= 17 && dist == 1 {
        // one deletion pinned at j_1 or j_{d_H}, the other beyond it
        let (j1, jd) = (p.first(), p.last());
        let n = x.len();
        let far =
            |dx: usize, dy: usize| seq::hamming_unchecked(&x.deleted(dx), &y.deleted(dy)) == 2;
        let mut c = Vec::new();
        if odd {
            c.extend((1..j1).filter(|&d| far(d, jd)).map(|d| (d, jd)));
            c.extend((jd + 1..=n).filter(|&d| far(j1, d)).map(|d| (j1, d)));
        } else {
            c.extend((1..j1).filter(|&d| far(jd, d)).map(|d| (jd, d)));
            c.extend((jd + 1..=n).filter(|&d| far(d, j1)).map(|d| (d, j1)));
        }
        ClosedFormE::superset(c)
    } else {
        // outside the closed-form cases: every pair at the distance B_k needs
        let n = x.len();
        let ys: Vec<BinSeq> = (1..=n).map(|d| y.deleted(d)).collect();
        let mut c = Vec::new();
        for dx in 1..=n {
            let u = x.deleted(dx);
            for dy in 1..=n {
                if seq::hamming_unchecked(&u, &ys[dy - 1]) == required_pair_distance {
                    c.push((dx, dy));
                }
            }
        }
        ClosedFormE::superset(c)
    })
}

/// `(run index of d_x in x, run index of d_y in y)`. Deleting anywhere in a
/// run gives the same sequence, so deletion pairs are compared by class.
pub fn run_class(x: &BinSeq, y: &BinSeq, pair: (usize, usize)) -> (usize, usize) {
    (x.run_index(pair.0), y.run_index(pair.1))
}

pub fn run_classes(x: &BinSeq, y: &BinSeq, pairs: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = pairs.iter().map(|&p| run_class(x, y, p)).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Minimum decomposition of `s` into consecutive substrings of period at
/// most two, as `(pieces of length ≥ 2, single symbols)`. Minimises the
/// total piece count, then the number of singles.
pub fn min_p2_decomposition(s: &BinSeq) -> (usize, usize) {
    let n = s.len();
    // best[i] = (total, singles) for the prefix of length i
    let mut best = vec![(usize::MAX, usize::MAX); n + 1];
    best[0] = (0, 0);
    for i in 1..=n {
        for j in 0..i {
            if best[j].0 == usize::MAX || !is_p2(s, j + 1, i) {
                continue;
            }
            let single = (i - j == 1) as usize;
            let cand = (best[j].0 + 1, best[j].1 + single);
            if cand < best[i] {
                best[i] = cand;
            }
        }
    }
    let (total, singles) = best[n];
    (total - singles, singles)
}

/// True iff some decomposition of `s` into ≤2-periodic pieces uses at most
/// `long_max` pieces of length ≥ 2 and at most `long_max + single_max`
/// pieces overall.
pub fn p2_budget_ok(s: &BinSeq, long_max: usize, single_max: usize) -> bool {
    let n = s.len();
    // min_long[i][k] = fewest long pieces covering the prefix of length i
    // with exactly k singles
    let inf = usize::MAX;
    let mut min_long = vec![vec![inf; n + 1]; n + 1];
    min_long[0][0] = 0;
    for i in 1..=n {
        for j in 0..i {
            if !is_p2(s, j + 1, i) {
                continue;
            }
            let single = i - j == 1;
            for k in 0..=j {
                let prev = min_long[j][k];
                if prev == inf {
                    continue;
                }
                let (nk, nl) = if single { (k + 1, prev) } else { (k, prev + 1) };
                if nl < min_long[i][nk] {
                    min_long[i][nk] = nl;
                }
            }
        }
    }
    (0..=n).any(|k| {
        let l = min_long[n][k];
        l != inf && l <= long_max && l + k <= long_max + single_max
    })
}

#[inline]
fn is_p2(s: &BinSeq, i: usize, j: usize) -> bool {
    seq::period(&s.slice(i, j)) <= 2
}

/// `(d_H(wβ, ᾱw), d_H(αw, wβ̄))` for symbols `α, β` and a word `w`.
pub fn run_parity_distances(alpha: u8, w: &BinSeq, beta: u8) -> (usize, usize) {
    let single = |b: u8| BinSeq::from_bits(b as u64, 1);
    let d1 = seq::hamming_unchecked(&w.concat(&single(beta)), &single(1 - alpha).concat(w));
    let d2 = seq::hamming_unchecked(&single(alpha).concat(w), &w.concat(&single(1 - beta)));
    (d1, d2)
}
