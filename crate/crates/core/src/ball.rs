//! Deletion, substitution and combined error balls, plus their pairwise
//! intersections.

use serde::Serialize;

use crate::error::Result;
use crate::seq::{self, BinSeq};

/// A sorted, duplicate-free set of equal-length sequences.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize)]
pub struct BallView {
    pub elements: Vec<BinSeq>,
    /// Length of the sequence the ball was built from.
    pub source_len: usize,
}

impl BallView {
    /// Sorts and deduplicates `elements`.
    pub fn from_unsorted(mut elements: Vec<BinSeq>, source_len: usize) -> Self {
        elements.sort_unstable();
        elements.dedup();
        Self {
            elements,
            source_len,
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, z: &BinSeq) -> bool {
        self.elements.binary_search(z).is_ok()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, BinSeq> {
        self.elements.iter()
    }

    pub fn intersect(&self, other: &BallView) -> BallView {
        BallView {
            elements: sorted_intersection(&self.elements, &other.elements),
            source_len: self.source_len,
        }
    }

    pub fn union(&self, other: &BallView) -> BallView {
        let mut elements = Vec::with_capacity(self.len() + other.len());
        let (a, b) = (&self.elements, &other.elements);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    elements.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    elements.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    elements.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        elements.extend_from_slice(&a[i..]);
        elements.extend_from_slice(&b[j..]);
        BallView {
            elements,
            source_len: self.source_len,
        }
    }
}

impl<'a> IntoIterator for &'a BallView {
    type Item = &'a BinSeq;
    type IntoIter = std::slice::Iter<'a, BinSeq>;

    fn into_iter(self) -> Self::IntoIter {
        self.elements.iter()
    }
}

/// Intersection of two sorted, duplicate-free slices.
pub fn sorted_intersection(a: &[BinSeq], b: &[BinSeq]) -> Vec<BinSeq> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Size of the intersection of two sorted, duplicate-free slices.
pub fn sorted_intersection_len(a: &[BinSeq], b: &[BinSeq]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// `D(x)`: one deletion per run, so `|D(x)| = r(x)`.
pub fn deletion_ball(x: &BinSeq) -> BallView {
    let n = x.len();
    let mut out = Vec::with_capacity(seq::run_count(x));
    for i in 1..=n {
        // last index of each run
        if i == n || x.get(i) != x.get(i + 1) {
            out.push(x.deleted(i));
        }
    }
    BallView::from_unsorted(out, n)
}

/// `S(x)`: `x` and its `n` single-flip neighbours.
pub fn substitution_ball(x: &BinSeq) -> BallView {
    let n = x.len();
    let mut out = Vec::with_capacity(n + 1);
    out.push(*x);
    out.extend((1..=n).map(|i| x.flipped(i)));
    BallView::from_unsorted(out, n)
}

/// `B(x) = ∪_{w ∈ D(x)} S(w)`.
pub fn ds_ball(x: &BinSeq) -> BallView {
    let n = x.len();
    let m = n.saturating_sub(1);
    let mut out = Vec::with_capacity(seq::run_count(x) * n);
    for w in deletion_ball(x).elements {
        out.push(w);
        out.extend((1..=m).map(|i| w.flipped(i)));
    }
    BallView::from_unsorted(out, n)
}

/// Every length-`|r| + 1` sequence whose ball contains `r`: insert one
/// symbol anywhere, then optionally flip one position.
pub fn inverse_ds_ball(r: &BinSeq) -> Vec<BinSeq> {
    let m = r.len();
    let mut out = Vec::with_capacity(2 * (m + 1) * (m + 2));
    for pos in 1..=m + 1 {
        for bit in 0..=1 {
            let w = r.inserted(pos, bit);
            out.push(w);
            out.extend((1..=m + 1).map(|i| w.flipped(i)));
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

fn check_pair(x: &BinSeq, y: &BinSeq) -> Result<()> {
    seq::check_same_len(x, y)?;
    if x == y {
        return Err(crate::Error::IdenticalInputs);
    }
    Ok(())
}

/// `D(x, y) = D(x) ∩ D(y)`.
pub fn deletion_intersection(x: &BinSeq, y: &BinSeq) -> Result<BallView> {
    check_pair(x, y)?;
    Ok(deletion_ball(x).intersect(&deletion_ball(y)))
}

/// Emptiness of `D(x, y)` decided from the two shifted distances across
/// the disagreement window, without building either ball.
pub fn is_deletion_intersection_empty(x: &BinSeq, y: &BinSeq) -> Result<bool> {
    let p = seq::diff_profile(x, y)?;
    Ok(shifted_left(x, y, p.first(), p.last()) >= 1
        && shifted_right(x, y, p.first(), p.last()) >= 1)
}

/// `d_H(x_{[a+1, b]}, y_{[a, b-1]})`; zero when `a >= b`.
#[inline]
pub(crate) fn shifted_left(x: &BinSeq, y: &BinSeq, a: usize, b: usize) -> usize {
    if a >= b {
        return 0;
    }
    seq::hamming_unchecked(&x.slice(a + 1, b), &y.slice(a, b - 1))
}

/// `d_H(x_{[a, b-1]}, y_{[a+1, b]})`; zero when `a >= b`.
#[inline]
pub(crate) fn shifted_right(x: &BinSeq, y: &BinSeq, a: usize, b: usize) -> usize {
    if a >= b {
        return 0;
    }
    seq::hamming_unchecked(&x.slice(a, b - 1), &y.slice(a + 1, b))
}

/// `S(x, y)`, which always has zero or two elements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubIntersection {
    pub size: usize,
    pub elements: Vec<BinSeq>,
}

pub fn substitution_intersection(x: &BinSeq, y: &BinSeq) -> Result<SubIntersection> {
    check_pair(x, y)?;
    let elements = substitution_midpoints(x, y);
    Ok(SubIntersection {
        size: elements.len(),
        elements,
    })
}

/// Sorted `S(u, v)` for equal-length `u, v`, including the case `u = v`
/// where it is the whole of `S(u)`.
pub(crate) fn substitution_midpoints(u: &BinSeq, v: &BinSeq) -> Vec<BinSeq> {
    let diff = u.bits() ^ v.bits();
    let mut out = match diff.count_ones() {
        0 => return substitution_ball(u).elements,
        1 => vec![*u, *v],
        2 => {
            let low = diff & diff.wrapping_neg();
            vec![
                BinSeq::from_bits(u.bits() ^ low, u.len()),
                BinSeq::from_bits(u.bits() ^ (diff ^ low), u.len()),
            ]
        }
        _ => Vec::new(),
    };
    out.sort_unstable();
    out
}

/// `B(x, y) = B(x) ∩ B(y)`.
pub fn ds_intersection(x: &BinSeq, y: &BinSeq) -> Result<BallView> {
    check_pair(x, y)?;
    Ok(ds_ball(x).intersect(&ds_ball(y)))
}
