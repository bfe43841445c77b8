//! Binary sequence primitives.
//!
//! [`BinSeq`] packs a sequence of at most [`MAX_LEN`] symbols into a machine
//! word with `x_1` in the most significant used bit, so comparing two
//! sequences of equal length numerically is the same as comparing them
//! lexicographically. Every public index is 1-based.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Longest sequence a [`BinSeq`] can hold.
pub const MAX_LEN: usize = 64;

#[inline]
pub(crate) fn mask(len: usize) -> u64 {
    if len >= 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

/// A binary sequence `x_1 x_2 ... x_n`.
///
/// Ordering is by length first, then lexicographic.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BinSeq {
    len: u8,
    bits: u64,
}

impl BinSeq {
    /// Builds a sequence from symbols in `{0, 1}`.
    pub fn new(symbols: &[u8]) -> Result<Self> {
        if symbols.len() > MAX_LEN {
            return Err(Error::TooLarge {
                n: symbols.len(),
                cap: MAX_LEN,
            });
        }
        let mut bits = 0u64;
        for &s in symbols {
            if s > 1 {
                return Err(Error::Parse(format!("symbol {s} is not binary")));
            }
            bits = (bits << 1) | s as u64;
        }
        Ok(Self {
            len: symbols.len() as u8,
            bits,
        })
    }

    /// Builds a sequence of length `len` from its packed form, `x_1` being
    /// bit `len - 1`. Bits above `len` are discarded.
    ///
    /// Panics if `len > MAX_LEN`.
    pub fn from_bits(bits: u64, len: usize) -> Self {
        assert!(len <= MAX_LEN, "sequence length {len} exceeds {MAX_LEN}");
        Self {
            len: len as u8,
            bits: bits & mask(len),
        }
    }

    pub fn zeros(len: usize) -> Self {
        Self::from_bits(0, len)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Packed representation; `x_1` is bit `len - 1`.
    #[inline]
    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// Symbol `x_i`, 1-based. Panics when `i` is out of range.
    #[inline]
    pub fn get(&self, i: usize) -> u8 {
        assert!(i >= 1 && i <= self.len(), "index {i} out of range");
        ((self.bits >> (self.len() - i)) & 1) as u8
    }

    /// Copy with `x_i` complemented.
    #[inline]
    pub fn flipped(&self, i: usize) -> Self {
        assert!(i >= 1 && i <= self.len(), "index {i} out of range");
        Self {
            len: self.len,
            bits: self.bits ^ (1u64 << (self.len() - i)),
        }
    }

    /// Copy with `x_d` removed.
    #[inline]
    pub fn deleted(&self, d: usize) -> Self {
        let n = self.len();
        assert!(d >= 1 && d <= n, "index {d} out of range");
        let low_len = n - d;
        let high = if low_len + 1 >= 64 {
            0
        } else {
            self.bits >> (low_len + 1)
        };
        let low = self.bits & mask(low_len);
        Self {
            len: self.len - 1,
            bits: (high << low_len) | low,
        }
    }

    /// Copy with `bit` inserted so that it lands at position `pos`
    /// (`1 ..= n + 1`).
    pub fn inserted(&self, pos: usize, bit: u8) -> Self {
        let n = self.len();
        assert!(n < MAX_LEN, "cannot grow past {MAX_LEN}");
        assert!(
            pos >= 1 && pos <= n + 1,
            "insert position {pos} out of range"
        );
        let low_len = n + 1 - pos;
        let high = if low_len >= 64 {
            0
        } else {
            self.bits >> low_len
        };
        let low = self.bits & mask(low_len);
        Self {
            len: self.len + 1,
            bits: (((high << 1) | (bit & 1) as u64) << low_len) | low,
        }
    }

    /// Substring `x_{[i, j]}`; empty when `i > j`.
    pub fn slice(&self, i: usize, j: usize) -> Self {
        if i > j {
            return Self::zeros(0);
        }
        assert!(i >= 1 && j <= self.len(), "slice [{i}, {j}] out of range");
        let width = j - i + 1;
        Self::from_bits(self.bits >> (self.len() - j), width)
    }

    pub fn concat(&self, other: &Self) -> Self {
        let n = self.len() + other.len();
        assert!(n <= MAX_LEN, "concatenation exceeds {MAX_LEN}");
        let shifted = if other.len() >= 64 {
            0
        } else {
            self.bits << other.len()
        };
        Self::from_bits(shifted | other.bits, n)
    }

    /// Hamming weight `wt(x)`.
    #[inline]
    pub fn weight(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
        (1..=self.len()).map(move |i| self.get(i))
    }

    pub fn to_vec(&self) -> Vec<u8> {
        self.iter().collect()
    }

    /// All of `Σ^n` in lexicographic order.
    pub fn all(n: usize) -> impl Iterator<Item = BinSeq> {
        assert!(n < 64, "cannot enumerate Σ^{n}");
        (0..(1u64 << n)).map(move |b| BinSeq::from_bits(b, n))
    }

    /// 1-based index of the run containing `x_i`.
    pub fn run_index(&self, i: usize) -> usize {
        assert!(i >= 1 && i <= self.len(), "index {i} out of range");
        // boundaries between positions (k-1, k) for k in 2..=i
        let n = self.len();
        let changes = (self.bits ^ (self.bits >> 1)) & mask(n - 1);
        // change bit at position n-k marks x_{k-1} != x_k
        let window = changes >> (n - i);
        1 + window.count_ones() as usize
    }
}

impl fmt::Display for BinSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in self.iter() {
            f.write_str(if s == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BinSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinSeq({self})")
    }
}

impl FromStr for BinSeq {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let symbols = s
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::Parse(format!(
                    "unexpected character {other:?} in {s:?}"
                ))),
            })
            .collect::<Result<Vec<u8>>>()?;
        BinSeq::new(&symbols)
    }
}

impl Serialize for BinSeq {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BinSeq {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One deletion and/or one substitution, both indexed on the original
/// sequence. `None` plays the role of index 0 in `x(d, e)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct ErrorOp {
    pub del: Option<usize>,
    pub sub: Option<usize>,
}

impl ErrorOp {
    pub fn new(del: Option<usize>, sub: Option<usize>) -> Self {
        Self { del, sub }
    }

    pub fn deletion(d: usize) -> Self {
        Self {
            del: Some(d),
            sub: None,
        }
    }

    pub fn substitution(e: usize) -> Self {
        Self {
            del: None,
            sub: Some(e),
        }
    }

    /// Reads the pair `(d, e)` where 0 means "absent".
    pub fn from_indices(d: usize, e: usize) -> Self {
        Self {
            del: (d != 0).then_some(d),
            sub: (e != 0).then_some(e),
        }
    }
}

/// Disagreement profile of two equal-length, distinct sequences.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffProfile {
    /// Hamming distance `d_H`.
    pub dh: usize,
    /// Disagreement indices `j_1 < ... < j_{d_H}`.
    pub j: Vec<usize>,
    /// `|a|`, the common prefix length, equal to `j_1 - 1`.
    pub prefix_len: usize,
    /// `|b|`, the common suffix length, equal to `n - j_{d_H}`.
    pub suffix_len: usize,
}

impl DiffProfile {
    /// `j_i`, 1-based.
    #[inline]
    pub fn ji(&self, i: usize) -> usize {
        self.j[i - 1]
    }

    pub fn first(&self) -> usize {
        self.j[0]
    }

    pub fn last(&self) -> usize {
        self.j[self.dh - 1]
    }

    /// Length of the middle parts `x~` and `y~`.
    pub fn middle_len(&self) -> usize {
        self.last() - self.first() + 1
    }
}

/// Runs of a sequence: their count `r(x)` and 1-based inclusive intervals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Runs {
    pub count: usize,
    pub intervals: Vec<(usize, usize)>,
}

pub fn complement(x: &BinSeq) -> BinSeq {
    BinSeq::from_bits(!x.bits, x.len())
}

pub fn reverse(x: &BinSeq) -> BinSeq {
    let n = x.len();
    if n == 0 {
        return *x;
    }
    BinSeq::from_bits(x.bits.reverse_bits() >> (64 - n), n)
}

pub fn hamming(x: &BinSeq, y: &BinSeq) -> Result<usize> {
    check_same_len(x, y)?;
    Ok(hamming_unchecked(x, y))
}

#[inline]
pub(crate) fn hamming_unchecked(x: &BinSeq, y: &BinSeq) -> usize {
    (x.bits ^ y.bits).count_ones() as usize
}

pub(crate) fn check_same_len(x: &BinSeq, y: &BinSeq) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    Ok(())
}

/// Number of runs `r(x)`.
#[inline]
pub fn run_count(x: &BinSeq) -> usize {
    let n = x.len();
    if n == 0 {
        return 0;
    }
    1 + ((x.bits ^ (x.bits >> 1)) & mask(n - 1)).count_ones() as usize
}

pub fn runs(x: &BinSeq) -> Runs {
    let mut intervals = Vec::new();
    let n = x.len();
    let mut start = 1;
    for i in 2..=n + 1 {
        if i == n + 1 || x.get(i) != x.get(i - 1) {
            intervals.push((start, i - 1));
            start = i;
        }
    }
    if n == 0 {
        intervals.clear();
    }
    Runs {
        count: intervals.len(),
        intervals,
    }
}

/// Smallest `t` with `x_i = x_{i+t}` for all `i ∈ [n - t]`.
pub fn period(x: &BinSeq) -> usize {
    let n = x.len();
    (1..=n).find(|&t| shift_matches(x, t)).unwrap_or(n)
}

#[inline]
fn shift_matches(x: &BinSeq, t: usize) -> bool {
    let n = x.len();
    if t >= n {
        return true;
    }
    (x.bits >> t) == (x.bits & mask(n - t))
}

/// `k`-th order VT syndrome, unreduced.
///
/// `VT^0` is the weight; for `k ≥ 1` position `i` carries weight
/// `Σ_{j ≤ i} j^{k-1}`. Panics if the result overflows `u64`, which does
/// not happen for `k ≤ 8` at any supported length.
pub fn vt_syndrome(x: &BinSeq, k: u32) -> u64 {
    if k == 0 {
        return x.weight() as u64;
    }
    let mut weight = 0u64;
    let mut total = 0u64;
    for i in 1..=x.len() {
        let term = (i as u64).checked_pow(k - 1).expect("VT syndrome overflow");
        weight = weight.checked_add(term).expect("VT syndrome overflow");
        if x.get(i) == 1 {
            total = total.checked_add(weight).expect("VT syndrome overflow");
        }
    }
    total
}

/// Differential sequence `ψ(x)` of length `n + 1`:
/// `ψ_i = x_{i-1} ⊕ x_i` with `x_0 = x_{n+1} = 0`.
#[inline]
pub fn differential(x: &BinSeq) -> BinSeq {
    let n = x.len();
    assert!(
        n < MAX_LEN,
        "differential of a {n}-symbol sequence does not fit"
    );
    BinSeq::from_bits(x.bits ^ (x.bits << 1), n + 1)
}

/// Applies `x(d, e)`: substitute `x_e`, then delete `x_d`, both on the
/// original indexing.
pub fn apply_error(x: &BinSeq, op: ErrorOp) -> Result<BinSeq> {
    let n = x.len();
    for idx in [op.del, op.sub].into_iter().flatten() {
        if idx == 0 || idx > n {
            return Err(Error::IndexOutOfRange { index: idx, len: n });
        }
    }
    if let (Some(d), Some(e)) = (op.del, op.sub) {
        if d == e {
            return Err(Error::DegenerateOp { index: d });
        }
    }
    let mut out = *x;
    if let Some(e) = op.sub {
        out = out.flipped(e);
    }
    if let Some(d) = op.del {
        out = out.deleted(d);
    }
    Ok(out)
}

pub fn diff_profile(x: &BinSeq, y: &BinSeq) -> Result<DiffProfile> {
    check_same_len(x, y)?;
    if x == y {
        return Err(Error::IdenticalInputs);
    }
    Ok(diff_profile_unchecked(x, y))
}

pub(crate) fn diff_profile_unchecked(x: &BinSeq, y: &BinSeq) -> DiffProfile {
    let n = x.len();
    let diff = x.bits ^ y.bits;
    let j: Vec<usize> = (1..=n).filter(|&i| (diff >> (n - i)) & 1 == 1).collect();
    DiffProfile {
        dh: j.len(),
        prefix_len: j[0] - 1,
        suffix_len: n - j[j.len() - 1],
        j,
    }
}

/// Length of the longest substring of `x` whose period is at most `tmax`.
pub fn max_periodic_run(x: &BinSeq, tmax: usize) -> usize {
    let n = x.len();
    let mut best = 0;
    for t in 1..=tmax.min(n) {
        best = best.max(t);
        let mut streak = 0;
        for k in 1..=n - t {
            if x.get(k) == x.get(k + t) {
                streak += 1;
                best = best.max(streak + t);
            } else {
                streak = 0;
            }
        }
    }
    best.max(n.min(tmax))
}

/// A rational `ε = num / den` in `[0, 1/2]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Eps {
    pub num: u64,
    pub den: u64,
}

impl Eps {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 || 2 * num > den {
            return Err(Error::PreconditionViolated(format!(
                "epsilon {num}/{den} must lie in [0, 1/2]"
            )));
        }
        Ok(Self { num, den })
    }
}

/// True iff every window of length `l' ≥ l` has weight within
/// `[(1/2 - ε) l', (1/2 + ε) l']`.
pub fn is_strong_locally_balanced(x: &BinSeq, l: usize, eps: Eps) -> bool {
    let n = x.len();
    let l = l.max(1);
    if l > n {
        return true;
    }
    let mut prefix = vec![0u64; n + 1];
    for i in 1..=n {
        prefix[i] = prefix[i - 1] + x.get(i) as u64;
    }
    let lo = eps.den - 2 * eps.num;
    let hi = eps.den + 2 * eps.num;
    for width in l..=n {
        let w = width as u64;
        for start in 1..=n - width + 1 {
            let wt = prefix[start + width - 1] - prefix[start - 1];
            let scaled = 2 * eps.den * wt;
            if scaled < lo * w || scaled > hi * w {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &str) -> BinSeq {
        v.parse().unwrap()
    }

    #[test]
    fn complement_and_reverse() {
        assert_eq!(complement(&s("0000")), s("1111"));
        assert_eq!(complement(&s("0110")), s("1001"));
        assert_eq!(reverse(&s("100")), s("001"));
        assert_eq!(reverse(&s("0110")), s("0110"));
        assert_eq!(reverse(&s("110100")), s("001011"));
    }

    #[test]
    fn hamming_examples() {
        assert_eq!(hamming(&s("0000"), &s("0000")).unwrap(), 0);
        assert_eq!(hamming(&s("0000"), &s("0011")).unwrap(), 2);
        assert_eq!(hamming(&s("10101"), &s("01010")).unwrap(), 5);
        assert_eq!(
            hamming(&s("01"), &s("011")),
            Err(Error::LengthMismatch { left: 2, right: 3 })
        );
    }

    #[test]
    fn run_examples() {
        let r = runs(&s("1111"));
        assert_eq!((r.count, r.intervals), (1, vec![(1, 4)]));
        assert_eq!(runs(&s("0011")).count, 2);
        assert_eq!(runs(&s("0101")).count, 4);
        assert_eq!(run_count(&s("0101")), 4);
        assert_eq!(
            runs(&s("0010111")).intervals,
            vec![(1, 2), (3, 3), (4, 4), (5, 7)]
        );
        let x = s("0010111");
        let idx: Vec<usize> = (1..=7).map(|i| x.run_index(i)).collect();
        assert_eq!(idx, vec![1, 1, 2, 3, 4, 4, 4]);
    }

    #[test]
    fn period_examples() {
        assert_eq!(period(&s("0000")), 1);
        assert_eq!(period(&s("0101")), 2);
        assert_eq!(period(&s("0110")), 3);
        assert_eq!(period(&s("0111")), 4);
        assert_eq!(period(&s("1")), 1);
    }

    #[test]
    fn vt_examples() {
        assert_eq!(vt_syndrome(&s("0000"), 1), 0);
        assert_eq!(vt_syndrome(&s("101"), 1), 4);
        assert_eq!(vt_syndrome(&s("011"), 2), 9);
        assert_eq!(vt_syndrome(&s("0111"), 0), 3);
        // position weights for k = 3 are 1, 5, 14
        assert_eq!(vt_syndrome(&s("111"), 3), 20);
    }

    #[test]
    fn differential_examples() {
        assert_eq!(differential(&s("0000")), s("00000"));
        assert_eq!(differential(&s("101")), s("1111"));
        assert_eq!(differential(&s("110")), s("1010"));
    }

    #[test]
    fn apply_error_examples() {
        let x = s("0110");
        assert_eq!(apply_error(&x, ErrorOp::deletion(1)).unwrap(), s("110"));
        assert_eq!(
            apply_error(&x, ErrorOp::substitution(2)).unwrap(),
            s("0010")
        );
        assert_eq!(
            apply_error(&x, ErrorOp::new(Some(4), Some(1))).unwrap(),
            s("111")
        );
        assert_eq!(
            apply_error(&x, ErrorOp::new(Some(2), Some(2))),
            Err(Error::DegenerateOp { index: 2 })
        );
        assert_eq!(
            apply_error(&x, ErrorOp::deletion(5)),
            Err(Error::IndexOutOfRange { index: 5, len: 4 })
        );
        assert_eq!(
            apply_error(&x, ErrorOp::substitution(0)),
            Err(Error::IndexOutOfRange { index: 0, len: 4 })
        );
    }

    #[test]
    fn diff_profile_examples() {
        let p = diff_profile(&s("0000"), &s("0110")).unwrap();
        assert_eq!(
            (p.dh, p.j.clone(), p.prefix_len, p.suffix_len),
            (2, vec![2, 3], 1, 1)
        );
        let p = diff_profile(&s("10000"), &s("00001")).unwrap();
        assert_eq!((p.dh, p.j.clone()), (2, vec![1, 5]));
        assert_eq!(p.middle_len(), 5);
        assert_eq!(
            diff_profile(&s("01"), &s("01")),
            Err(Error::IdenticalInputs)
        );
    }

    #[test]
    fn max_periodic_run_examples() {
        assert_eq!(max_periodic_run(&s("010101"), 2), 6);
        assert_eq!(max_periodic_run(&s("0011"), 1), 2);
        // 0110100 contains the alternating window 1010 at [3, 6]
        assert_eq!(max_periodic_run(&s("0110100"), 2), 4);
        assert_eq!(max_periodic_run(&s("0"), 3), 1);
    }

    #[test]
    fn locally_balanced_examples() {
        let zero = Eps::new(0, 1).unwrap();
        assert!(is_strong_locally_balanced(&s("0000"), 5, zero));
        assert!(is_strong_locally_balanced(&s("01"), 2, zero));
        assert!(!is_strong_locally_balanced(&s("00"), 2, zero));
        let eighteenth = Eps::new(1, 18).unwrap();
        assert!(is_strong_locally_balanced(&s("0110"), 4, eighteenth));
        assert!(!is_strong_locally_balanced(&s("0110"), 2, eighteenth));
        assert!(!is_strong_locally_balanced(&s("0111"), 4, eighteenth));
        assert!(Eps::new(2, 3).is_err());
    }

    #[test]
    fn packing_helpers() {
        let x = s("10110");
        assert_eq!(x.deleted(1), s("0110"));
        assert_eq!(x.deleted(5), s("1011"));
        assert_eq!(x.deleted(3), s("1010"));
        assert_eq!(x.inserted(1, 0), s("010110"));
        assert_eq!(x.inserted(6, 1), s("101101"));
        assert_eq!(x.inserted(3, 0), s("100110"));
        assert_eq!(x.slice(2, 4), s("011"));
        assert!(x.slice(4, 3).is_empty());
        assert_eq!(s("10").concat(&s("011")), s("10011"));
        assert_eq!(x.to_string(), "10110");
        assert!("10a".parse::<BinSeq>().is_err());
        let all: Vec<String> = BinSeq::all(2).map(|b| b.to_string()).collect();
        assert_eq!(all, vec!["00", "01", "10", "11"]);
    }

    #[test]
    fn full_width_sequences() {
        let x = BinSeq::from_bits(u64::MAX, 64);
        assert_eq!(x.len(), 64);
        assert_eq!(x.deleted(1).len(), 63);
        assert_eq!(x.deleted(64).weight(), 63);
        assert_eq!(reverse(&x), x);
        assert_eq!(complement(&x).weight(), 0);
    }
}
