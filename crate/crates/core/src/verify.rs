//! Exhaustive and sampled verification sweeps.
//!
//! Every check produces a [`VerifyReport`]. Bound checks report the largest
//! value seen against a bound; predicate checks report the number of
//! counterexamples against a bound of zero. Sweeps run on rayon and merge
//! deterministically, so a report depends only on its inputs and seed.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::ball;
use crate::codes::{self, CodeSpec, Family, Structural};
use crate::confusability::{self as conf, SubsetPartition, SEGMENT_TUPLES};
use crate::delta;
use crate::error::{Error, Result};
use crate::seq::{self, BinSeq, Eps, ErrorOp};

/// Witness lists keep at most this many entries.
pub const MAX_WITNESSES: usize = 10;

/// A pair that violated a check, or attained its extreme value.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct WitnessRecord {
    pub x: BinSeq,
    pub y: BinSeq,
    pub value: i64,
    pub detail: String,
}

impl WitnessRecord {
    pub fn new(x: BinSeq, y: BinSeq, value: i64, detail: impl Into<String>) -> Self {
        Self {
            x,
            y,
            value,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub check_id: String,
    pub n_range: (usize, usize),
    pub params: Value,
    pub pairs_scanned: u64,
    pub max_observed: i64,
    pub bound: i64,
    pub passed: bool,
    pub witnesses: Vec<WitnessRecord>,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl VerifyReport {
    /// One line summary for terminals and logs.
    pub fn summary(&self) -> String {
        format!(
            "{} {} n={}..{} scanned={} max={} bound={}",
            if self.passed { "PASS" } else { "FAIL" },
            self.check_id,
            self.n_range.0,
            self.n_range.1,
            self.pairs_scanned,
            self.max_observed,
            self.bound
        )
    }
}

/// Partial result of a sweep. Merging is associative and commutative.
#[derive(Clone, Debug, Default)]
struct Tally {
    scanned: u64,
    max: Option<i64>,
    extremal: Vec<WitnessRecord>,
    violations: u64,
    failing: Vec<WitnessRecord>,
}

fn trim(v: &mut Vec<WitnessRecord>) {
    v.sort_unstable();
    v.dedup();
    v.truncate(MAX_WITNESSES);
}

impl Tally {
    /// Records a value against a bound check.
    fn value(&mut self, value: i64, violated: bool, rec: impl FnOnce() -> WitnessRecord) {
        self.scanned += 1;
        let wanted_extremal = self.max.is_none_or(|m| value >= m);
        if violated || wanted_extremal {
            let r = rec();
            if violated {
                self.violations += 1;
                self.failing.push(r.clone());
                if self.failing.len() > 4 * MAX_WITNESSES {
                    trim(&mut self.failing);
                }
            }
            if wanted_extremal {
                if self.max.is_none_or(|m| value > m) {
                    self.max = Some(value);
                    self.extremal.clear();
                }
                self.extremal.push(r);
                if self.extremal.len() > 4 * MAX_WITNESSES {
                    trim(&mut self.extremal);
                }
            }
        }
    }

    /// Records one instance of a predicate check.
    fn check(&mut self, ok: bool, rec: impl FnOnce() -> WitnessRecord) {
        self.scanned += 1;
        if !ok {
            self.violations += 1;
            self.failing.push(rec());
            if self.failing.len() > 4 * MAX_WITNESSES {
                trim(&mut self.failing);
            }
        }
    }

    fn merge(mut self, mut other: Tally) -> Tally {
        self.scanned += other.scanned;
        self.violations += other.violations;
        self.failing.append(&mut other.failing);
        trim(&mut self.failing);
        match (self.max, other.max) {
            (_, None) => {}
            (None, Some(_)) => {
                self.max = other.max;
                self.extremal = other.extremal;
            }
            (Some(a), Some(b)) if b > a => {
                self.max = other.max;
                self.extremal = other.extremal;
            }
            (Some(a), Some(b)) if b == a => self.extremal.append(&mut other.extremal),
            _ => {}
        }
        trim(&mut self.extremal);
        self
    }
}

fn merge_all(mut a: Vec<Tally>, b: Vec<Tally>) -> Vec<Tally> {
    if a.len() < b.len() {
        a.resize_with(b.len(), Tally::default);
    }
    for (i, t) in b.into_iter().enumerate() {
        let cur = std::mem::take(&mut a[i]);
        a[i] = cur.merge(t);
    }
    a
}

fn ends(ns: &RangeInclusive<usize>) -> (usize, usize) {
    (*ns.start(), *ns.end())
}

fn bound_report(
    id: &str,
    ns: (usize, usize),
    params: Value,
    mut t: Tally,
    bound: i64,
    started: Instant,
) -> VerifyReport {
    trim(&mut t.failing);
    trim(&mut t.extremal);
    let passed = t.violations == 0;
    let r = VerifyReport {
        check_id: id.to_string(),
        n_range: ns,
        params,
        pairs_scanned: t.scanned,
        max_observed: t.max.unwrap_or(0),
        bound,
        passed,
        witnesses: if passed { t.extremal } else { t.failing },
        wall_time: started.elapsed(),
    };
    log::info!("{} in {:.2?}", r.summary(), r.wall_time);
    r
}

fn predicate_report(
    id: &str,
    ns: (usize, usize),
    params: Value,
    mut t: Tally,
    started: Instant,
) -> VerifyReport {
    trim(&mut t.failing);
    let r = VerifyReport {
        check_id: id.to_string(),
        n_range: ns,
        params,
        pairs_scanned: t.scanned,
        max_observed: t.violations as i64,
        bound: 0,
        passed: t.violations == 0,
        witnesses: t.failing,
        wall_time: started.elapsed(),
    };
    log::info!("{} in {:.2?}", r.summary(), r.wall_time);
    r
}

fn check_max(ns: &RangeInclusive<usize>, cap: usize) -> Result<()> {
    if *ns.end() > cap {
        return Err(Error::TooLarge { n: *ns.end(), cap });
    }
    codes::check_cap(*ns.end())
}

/// Runs `f(i, j, state)` over all `i < j` in parallel.
fn sweep_pairs<F>(len: usize, checks: usize, f: F) -> Vec<Tally>
where
    F: Fn(usize, usize, &mut [Tally]) + Sync,
{
    (0..len)
        .into_par_iter()
        .fold(
            || vec![Tally::default(); checks],
            |mut acc, i| {
                for j in i + 1..len {
                    f(i, j, &mut acc);
                }
                acc
            },
        )
        .reduce(|| vec![Tally::default(); checks], merge_all)
}

/// Structural parameters a sweep at length `n` should use: the prescribed
/// ones when `template` uses prescribed parameters, otherwise the template's own.
fn structural_for(template: &CodeSpec, n: usize) -> Structural {
    if template.structural.prescribed {
        Structural::prescribed(template.family, n)
    } else {
        template.structural
    }
}

/// Override parameters for the desk-scale regime: a short period cap
/// `t = 3` with the block length kept at `P ≥ 6t + 4`, and for `C9` a
/// balance window `l = 6` with `P = 4l`.
pub fn override_structural(family: Family) -> Structural {
    let t = 3;
    let (l, p) = if family == Family::C9 {
        (6, 24)
    } else {
        (6, 6 * t + 4)
    };
    Structural {
        t_prime: 2,
        t,
        p,
        l,
        eps: Eps { num: 1, den: 4 },
        prescribed: false,
    }
}

/// Largest `|B(x, y)|` over all residue tuples and distinct pairs of the
/// same class; passes iff it stays below `n_reads`.
pub fn verify_bound(
    template: &CodeSpec,
    n_reads: usize,
    ns: RangeInclusive<usize>,
) -> Result<VerifyReport> {
    let started = Instant::now();
    check_max(&ns, 14)?;
    if n_reads == 0 {
        return Err(Error::ParamOutOfRange {
            name: "reads",
            value: 0,
            min: 1,
            max: u64::MAX,
        });
    }
    let bound = n_reads as i64 - 1;
    let mut total = Tally::default();
    let mut classes_seen = 0usize;
    let mut structural = None;
    for n in ns.clone() {
        let s = structural_for(template, n);
        structural = Some(s);
        let spec = CodeSpec::new(template.family, n).with_structural(s);
        let classes = codes::residue_classes(&spec)?;
        classes_seen += classes.len();
        let t = classes
            .par_iter()
            .map(|(_, words)| {
                let balls: Vec<_> = words.iter().map(ball::ds_ball).collect();
                let mut t = sweep_pairs(words.len(), 1, |i, j, acc| {
                    let size = ball::sorted_intersection_len(&balls[i].elements, &balls[j].elements)
                        as i64;
                    acc[0].value(size, size > bound, || {
                        WitnessRecord::new(words[i], words[j], size, format!("n={n}"))
                    });
                });
                t.pop().unwrap_or_default()
            })
            .reduce(Tally::default, Tally::merge);
        total = total.merge(t);
    }
    let s = structural.unwrap_or_else(|| Structural::prescribed(template.family, *ns.start()));
    let params = json!({
        "family": template.family.to_string(),
        "reads": n_reads,
        "regime": s.regime(),
        "structural": if template.structural.prescribed { Value::Null } else { json!(s) },
        "residue_classes": classes_seen,
    });
    Ok(bound_report(
        &format!("bound.{}", template.family),
        ends(&ns),
        params,
        total,
        bound,
        started,
    ))
}

/// Bound reports for a family: the prescribed regime, plus the override
/// regime for the codes whose structural constraints are vacuous at desk
/// scale. The prescribed regime of those codes only certifies the
/// embedded `C1` bound.
pub fn bound_reports(family: Family, ns: RangeInclusive<usize>) -> Result<Vec<VerifyReport>> {
    let reads = family.reconstruction_reads().ok_or_else(|| {
        Error::PreconditionViolated(format!("{family} is not a reconstruction code"))
    })?;
    let prescribed = CodeSpec::new(family, *ns.start());
    match family {
        Family::C11 | Family::C9 => {
            let with_override = prescribed.with_structural(override_structural(family));
            // the override keeps P ≥ 6t + 4, which is all the N = 11 argument
            // needs; the N = 9 argument also needs balance at scale
            Ok(vec![
                verify_bound(&prescribed, 14, ns.clone())?,
                verify_bound(&with_override, 11, ns)?,
            ])
        }
        _ => Ok(vec![verify_bound(&prescribed, reads, ns)?]),
    }
}

/// `|B(x, y)|` over all pairs with empty deletion and substitution
/// intersections is at most 17.
pub fn verify_global_ball_bound(ns: RangeInclusive<usize>) -> Result<VerifyReport> {
    let started = Instant::now();
    check_max(&ns, 12)?;
    let mut total = Tally::default();
    for n in ns.clone() {
        let words: Vec<BinSeq> = BinSeq::all(n).collect();
        let balls: Vec<_> = words.iter().map(ball::ds_ball).collect();
        let dels: Vec<_> = words.iter().map(ball::deletion_ball).collect();
        let mut t = sweep_pairs(words.len(), 1, |i, j, acc| {
            let (x, y) = (&words[i], &words[j]);
            if seq::hamming_unchecked(x, y) < 3
                || ball::sorted_intersection_len(&dels[i].elements, &dels[j].elements) > 0
            {
                return;
            }
            let size = ball::sorted_intersection_len(&balls[i].elements, &balls[j].elements) as i64;
            acc[0].value(size, size > 17, || WitnessRecord::new(*x, *y, size, ""));
        });
        total = total.merge(t.pop().unwrap_or_default());
    }
    Ok(bound_report(
        "ball.global",
        ends(&ns),
        json!({ "condition": "empty deletion and substitution intersections" }),
        total,
        17,
        started,
    ))
}

/// Both decompositions of the disagreement windows fit the budget.
fn windows_fit(x: &BinSeq, y: &BinSeq, long_max: usize, single_max: usize) -> bool {
    let p = seq::diff_profile_unchecked(x, y);
    let (a, b) = (p.first(), p.last());
    conf::p2_budget_ok(&x.slice(a, b), long_max, single_max)
        && conf::p2_budget_ok(&y.slice(a, b), long_max, single_max)
}

/// Check ids of the battery over `C1` pairs, in report order.
pub const C1_BATTERY: [&str; 15] = [
    "c1.b1_to_b4_empty",
    "c1.union_b5_to_b18",
    "c1.bound_13",
    "c1.e_size",
    "c1.b11_excludes_b5_b7_b9",
    "c1.b7_b9_exclusive",
    "c1.b7_b13_union",
    "c1.b5_forces_b13_b15_b17",
    "c1.b5_family_union",
    "c1.b5_b6_bound",
    "c1.b11_b12_bound",
    "c1.b7_to_b10_bound",
    "c1.b5_to_b12_empty",
    "c1.b5_to_b16_empty",
    "c1.window_structure",
];

fn c1_pair_checks(x: &BinSeq, y: &BinSeq, part: &SubsetPartition, acc: &mut [Tally]) {
    let size = part.intersection.len();
    let ne = |k: usize| part.nonempty(k);
    let rec = |note: &str| WitnessRecord::new(*x, *y, size as i64, note);
    let dh = seq::hamming_unchecked(x, y);

    acc[0].check(!(1..=4).any(ne), || rec("some B_k with k <= 4 is nonempty"));
    acc[1].check(
        part.union_len(&(5..=18).collect::<Vec<_>>()) == size,
        || rec("union of B_5..B_18 differs"),
    );
    acc[2].value(size as i64, size > 13, || rec(""));

    let mut e_ok = true;
    for k in 5..=16 {
        if conf::run_classes(x, y, part.e(k)).len() > 1 || part.b(k).len() > 2 {
            e_ok = false;
        }
    }
    acc[3].check(e_ok, || rec("|E_k| > 1 or |B_k| > 2 for some 5 <= k <= 16"));

    if ne(11) || ne(12) {
        let ok = !(ne(11) && (ne(5) || ne(7) || ne(9))) && !(ne(12) && (ne(6) || ne(8) || ne(10)));
        acc[4].check(ok, || rec("B_11 or B_12 coexists with an excluded subset"));
    }
    if dh >= 5 {
        acc[5].check(!(ne(7) && ne(9)) && !(ne(8) && ne(10)), || {
            rec("B_7 and B_9 (or B_8 and B_10) both nonempty")
        });
    }
    for (a, b) in [(7, 13), (10, 16), (8, 14), (9, 15)] {
        if ne(a) && ne(b) {
            let u = part.union_len(&[a, b]);
            acc[6].check(u <= 3, || rec(&format!("|B_{a} ∪ B_{b}| = {u}")));
        }
    }
    for (lead, fam, p, q) in [
        (5, [5, 7, 9, 13, 15, 17], 7, 9),
        (6, [6, 8, 10, 14, 16, 18], 8, 10),
    ] {
        if ne(lead) {
            let all: Vec<usize> = fam.to_vec();
            let without = |drop: &[usize]| -> Vec<usize> {
                fam.iter().copied().filter(|k| !drop.contains(k)).collect()
            };
            let forced = fam[3..].iter().all(|&k| ne(k));
            acc[7].check(forced, || {
                rec(&format!(
                    "B_{lead} nonempty but one of B_{}, B_{}, B_{} empty",
                    fam[3], fam[4], fam[5]
                ))
            });
            let sizes = [
                part.union_len(&all),
                part.union_len(&without(&[p])),
                part.union_len(&without(&[q])),
                part.union_len(&without(&[p, q])),
            ];
            let ok = sizes[0] <= 8 && sizes[1] <= 7 && sizes[2] <= 7 && sizes[3] <= 6;
            acc[8].check(ok, || rec(&format!("B_{lead} family unions {sizes:?}")));
        }
    }
    if ne(5) || ne(6) {
        let ok = size <= 13 && (size <= 10 || windows_fit(x, y, 4, 0));
        acc[9].check(ok, || rec("B_5 or B_6 nonempty"));
    } else {
        if ne(11) || ne(12) {
            let ok = size <= 12 && (size <= 10 || windows_fit(x, y, 5, 2));
            acc[10].check(ok, || rec("B_11 or B_12 nonempty, B_5 and B_6 empty"));
        }
        if (7..=10).any(ne) {
            let ok = size <= 13 && (size <= 8 || windows_fit(x, y, 6, 4));
            acc[11].check(ok, || rec("some of B_7..B_10 nonempty, B_5 and B_6 empty"));
        }
    }
    if !(5..=12).any(ne) {
        acc[12].check(size <= 8, || rec("B_5..B_12 empty"));
    }
    if !(5..=16).any(ne) {
        acc[13].check(size <= 4, || rec("B_5..B_16 empty"));
    }
    let quiet = ![5, 6, 11, 12].into_iter().any(ne);
    if size > 10 || (quiet && size > 8) {
        acc[14].check(windows_fit(x, y, 6, 4), || {
            rec("windows need more than six pieces and four symbols")
        });
    }
}

/// The conditional battery over all pairs inside each `C1` residue
/// class. One report per entry of [`C1_BATTERY`].
pub fn verify_c1_battery(ns: RangeInclusive<usize>) -> Result<Vec<VerifyReport>> {
    let started = Instant::now();
    check_max(&ns, 12)?;
    let checks = C1_BATTERY.len();
    let mut total = vec![Tally::default(); checks];
    let mut pairs = 0u64;
    for n in ns.clone() {
        let classes = codes::residue_classes(&CodeSpec::new(Family::C1, n))?;
        let t = classes
            .par_iter()
            .map(|(_, words)| {
                sweep_pairs(words.len(), checks, |i, j, acc| {
                    let (x, y) = (&words[i], &words[j]);
                    let found = conf::witnesses_unchecked(x, y);
                    let part = conf::partition_from_witnesses(&found, n);
                    c1_pair_checks(x, y, &part, acc);
                })
            })
            .reduce(|| vec![Tally::default(); checks], merge_all);
        pairs += classes
            .iter()
            .map(|(_, w)| (w.len() * w.len().saturating_sub(1) / 2) as u64)
            .sum::<u64>();
        total = merge_all(total, t);
    }
    let params = json!({ "family": "c1", "pairs_total": pairs });
    Ok(C1_BATTERY
        .iter()
        .zip(total)
        .map(|(id, t)| {
            if *id == "c1.bound_13" {
                bound_report(id, ends(&ns), params.clone(), t, 13, started)
            } else {
                predicate_report(id, ends(&ns), params.clone(), t, started)
            }
        })
        .collect())
}

/// Pairs the alphabet-level structure claims apply to: distinct, at
/// Hamming distance at least three, with no common single-deletion output.
pub fn is_qualifying_pair(x: &BinSeq, y: &BinSeq) -> Result<bool> {
    seq::check_same_len(x, y)?;
    Ok(x != y && seq::hamming_unchecked(x, y) >= 3 && ball::is_deletion_intersection_empty(x, y)?)
}

/// Brute-force `E_k` against the closed form, compared by run class:
/// containment always, equality when the closed form is exact. Returns the
/// first failing `k`.
pub fn e_table_mismatch(x: &BinSeq, y: &BinSeq, part: &SubsetPartition) -> Option<usize> {
    for k in 1..=conf::SUBSETS {
        let Ok(c) = conf::closed_form_e(x, y, k) else {
            continue;
        };
        let brute = conf::run_classes(x, y, part.e(k));
        let cand = conf::run_classes(x, y, &c.candidates);
        let contained = brute.iter().all(|p| cand.binary_search(p).is_ok());
        if !contained || (c.determinate && brute != cand) {
            return Some(k);
        }
    }
    None
}

/// Check ids of the alphabet-level sweep, in report order.
pub const SIGMA_CHECKS: [&str; 3] = ["sigma.union", "sigma.segment_tuples", "sigma.e_closed_form"];

/// Over every qualifying pair of `Σ^n`: the eighteen subsets cover
/// `B(x, y)`, realised segment tuples lie in the segment-tuple table, and the closed-form
/// `E_k` agrees with brute force.
pub fn verify_sigma_partition(ns: RangeInclusive<usize>) -> Result<Vec<VerifyReport>> {
    let started = Instant::now();
    check_max(&ns, 10)?;
    let checks = SIGMA_CHECKS.len();
    let mut total = vec![Tally::default(); checks];
    for n in ns.clone() {
        let words: Vec<BinSeq> = BinSeq::all(n).collect();
        let dels: Vec<_> = words.iter().map(ball::deletion_ball).collect();
        let t = sweep_pairs(words.len(), checks, |i, j, acc| {
            let (x, y) = (&words[i], &words[j]);
            if seq::hamming_unchecked(x, y) < 3
                || ball::sorted_intersection_len(&dels[i].elements, &dels[j].elements) > 0
            {
                return;
            }
            let found = conf::witnesses_unchecked(x, y);
            let part = conf::partition_from_witnesses(&found, n);
            let size = part.intersection.len() as i64;
            acc[0].check(part.union == part.intersection, || {
                WitnessRecord::new(*x, *y, size, "union differs")
            });
            let mut table_ok = None;
            'outer: for dx in 1..=n {
                for dy in 1..=n {
                    let d = seq::hamming_unchecked(&x.deleted(dx), &y.deleted(dy));
                    if !(1..=2).contains(&d) || (d == 1 && dx == dy) {
                        continue;
                    }
                    let Ok(c) = conf::classify_tuple(x, y, dx, dy) else {
                        continue;
                    };
                    if !SEGMENT_TUPLES.contains(&c.as_triple()) {
                        table_ok = Some((dx, dy));
                        break 'outer;
                    }
                }
            }
            acc[1].check(table_ok.is_none(), || {
                let (dx, dy) = table_ok.unwrap_or_default();
                WitnessRecord::new(*x, *y, size, format!("dx={dx} dy={dy}"))
            });
            let mismatch = e_table_mismatch(x, y, &part);
            acc[2].check(mismatch.is_none(), || {
                WitnessRecord::new(*x, *y, size, format!("k={}", mismatch.unwrap_or_default()))
            });
        });
        total = merge_all(total, t);
    }
    Ok(SIGMA_CHECKS
        .iter()
        .zip(total)
        .map(|(id, t)| {
            predicate_report(id, ends(&ns), json!({ "pairs": "qualifying" }), t, started)
        })
        .collect())
}

/// Run-parity rule and its case table over all `α, β` and `|w| ≤ max_w`.
pub fn verify_run_parity(max_w: usize) -> VerifyReport {
    let started = Instant::now();
    let mut t = Tally::default();
    for len in 0..=max_w {
        for w in BinSeq::all(len) {
            let r = seq::run_count(&w);
            for alpha in 0..2u8 {
                for beta in 0..2u8 {
                    let (d1, d2) = conf::run_parity_distances(alpha, &w, beta);
                    let both_odd = d1 % 2 == 1 && d2 % 2 == 1;
                    let both_even = d1 % 2 == 0 && d2 % 2 == 0;
                    let cases = if alpha == beta {
                        ((d1 == 1 && d2 == 1) == (r <= 1))
                            && ((d1 >= 3 && d2 >= 3) == (r >= 3))
                            && ((d1 != d2 && [d1, d2].iter().all(|d| [1, 3].contains(d)))
                                == (r == 2))
                    } else {
                        ((d1 == 0 && d2 == 0) == (r == 0))
                            && ((d1 == 2 && d2 == 2) == (r == 2))
                            && ((d1 >= 4 && d2 >= 4) == (r >= 4))
                            && ((d1 != d2 && [d1, d2].iter().all(|d| [0, 2].contains(d)))
                                == (r == 1))
                            && ((d1 != d2 && [d1, d2].iter().all(|d| [2, 4].contains(d)))
                                == (r == 3))
                    };
                    let ok =
                        (both_odd == (alpha == beta)) && (both_even == (alpha != beta)) && cases;
                    t.check(ok, || {
                        WitnessRecord::new(
                            w,
                            w,
                            0,
                            format!("alpha={alpha} beta={beta} d1={d1} d2={d2}"),
                        )
                    });
                }
            }
        }
    }
    predicate_report(
        "sigma.run_parity",
        (0, max_w),
        json!({ "max_w": max_w }),
        t,
        started,
    )
}

/// If one shifted distance between disagreement indices `j_i < j_i'` is
/// zero, the opposite shift gives an even distance.
pub fn verify_shift_parity(ns: RangeInclusive<usize>) -> Result<VerifyReport> {
    let started = Instant::now();
    check_max(&ns, 10)?;
    let mut total = Tally::default();
    for n in ns.clone() {
        let words: Vec<BinSeq> = BinSeq::all(n).collect();
        let mut t = sweep_pairs(words.len(), 1, |i, j, acc| {
            let (x, y) = (&words[i], &words[j]);
            let p = seq::diff_profile_unchecked(x, y);
            for a in 1..=p.dh {
                for b in a + 1..=p.dh {
                    let (ja, jb) = (p.ji(a), p.ji(b));
                    let left = ball::shifted_left(x, y, ja, jb);
                    let right = ball::shifted_right(x, y, ja, jb);
                    let ok = (left != 0 || right.is_multiple_of(2))
                        && (right != 0 || left.is_multiple_of(2));
                    acc[0].check(ok, || {
                        WitnessRecord::new(*x, *y, 0, format!("i={a} i'={b}"))
                    });
                }
            }
        });
        total = total.merge(t.pop().unwrap_or_default());
    }
    Ok(predicate_report(
        "sigma.shift_parity",
        ends(&ns),
        Value::Null,
        total,
        started,
    ))
}

/// `x_[1,m-1] = y_[2,m]` and `x_[2,m] = y_[1,m-1]` force both sequences to
/// have period at most two. For each `x` the first condition leaves two
/// candidates for `y`.
pub fn verify_alternating(max_m: usize) -> Result<VerifyReport> {
    let started = Instant::now();
    codes::check_cap(max_m)?;
    let mut t = Tally::default();
    for m in 2..=max_m {
        for x in BinSeq::all(m) {
            for lead in 0..2u64 {
                let y = BinSeq::from_bits(lead, 1).concat(&x.slice(1, m - 1));
                if x.slice(2, m) == y.slice(1, m - 1) {
                    let ok = seq::period(&x) <= 2 && seq::period(&y) <= 2;
                    t.check(ok, || WitnessRecord::new(x, y, 0, ""));
                }
            }
        }
    }
    Ok(predicate_report(
        "sigma.alternating",
        (2, max_m),
        Value::Null,
        t,
        started,
    ))
}

/// The full structural suite: the `C1` battery over `ns`, the
/// alphabet-level sweep over `ns` capped at 10, and the sequence properties.
pub fn verify_structure(ns: RangeInclusive<usize>) -> Result<Vec<VerifyReport>> {
    check_max(&ns, 12)?;
    let mut out = verify_c1_battery(ns.clone())?;
    let small = *ns.start()..=(*ns.end()).min(10);
    if !small.is_empty() {
        out.extend(verify_sigma_partition(small.clone())?);
        out.push(verify_shift_parity(small)?);
    }
    out.push(verify_run_parity(10));
    out.push(verify_alternating(12)?);
    Ok(out)
}

#[derive(Clone, Copy)]
struct Quad {
    x: BinSeq,
    dx: usize,
    ex: Option<usize>,
    y: BinSeq,
    dy: usize,
    ey: Option<usize>,
}

/// `None` when the identity and every table cell hold, otherwise a note.
fn delta_failure(q: &Quad) -> Option<String> {
    match delta::delta_psi_decomposition(&q.x, &q.y, q.dx, q.ex, q.dy, q.ey) {
        Ok(b) if b.identity_holds() && delta::cells_match(&b, q.dx, q.ex, q.dy, q.ey) => None,
        Ok(b) if !b.identity_holds() => Some(format!("total {} != direct {}", b.total, b.direct)),
        Ok(_) => Some("table cell mismatch".into()),
        Err(e) => Some(e.to_string()),
    }
}

fn quad_record(q: &Quad, note: String) -> WitnessRecord {
    WitnessRecord::new(
        q.x,
        q.y,
        0,
        format!(
            "dx={} ex={:?} dy={} ey={:?}: {note}",
            q.dx, q.ex, q.dy, q.ey
        ),
    )
}

fn error_ops(n: usize) -> impl Iterator<Item = (usize, Option<usize>)> {
    (1..=n).flat_map(move |d| {
        std::iter::once((d, None))
            .chain((1..=n).filter(move |&e| e != d).map(move |e| (d, Some(e))))
    })
}

fn emit(x: &BinSeq, d: usize, e: Option<usize>) -> BinSeq {
    match e {
        Some(e) => x.flipped(e).deleted(d),
        None => x.deleted(d),
    }
}

/// A random confusable quadruple at length `n` with `d_x ≠ d_y`.
fn random_quad(n: usize, rng: &mut ChaCha8Rng) -> Quad {
    loop {
        let x = BinSeq::from_bits(rng.gen::<u64>(), n);
        let dx = rng.gen_range(1..=n);
        let ex = if rng.gen_range(0..n) == 0 {
            None
        } else {
            let e = rng.gen_range(1..n);
            Some(if e >= dx { e + 1 } else { e })
        };
        let z = emit(&x, dx, ex);
        let ys = ball::inverse_ds_ball(&z);
        let y = ys[rng.gen_range(0..ys.len())];
        let ops: Vec<_> = error_ops(n)
            .filter(|&(dy, ey)| {
                dy != dx && seq::apply_error(&y, ErrorOp::new(Some(dy), ey)).ok() == Some(z)
            })
            .collect();
        if !ops.is_empty() {
            let (dy, ey) = ops[rng.gen_range(0..ops.len())];
            return Quad {
                x,
                dx,
                ex,
                y,
                dy,
                ey,
            };
        }
    }
}

/// `(output, source, d, e)` of one error applied to one word.
type Emitted = (BinSeq, BinSeq, usize, Option<usize>);

/// The `Δψ` identity and its table cells over every confusable quadruple
/// with `d_x ≠ d_y` at each length in `exhaustive`, plus `samples` random
/// quadruples at length `sample_n`.
pub fn verify_delta(
    exhaustive: RangeInclusive<usize>,
    sample_n: usize,
    samples: usize,
    seed: u64,
) -> Result<VerifyReport> {
    let started = Instant::now();
    if !exhaustive.is_empty() {
        check_max(&exhaustive, 10)?;
    }
    if samples > 0 && !(2..seq::MAX_LEN).contains(&sample_n) {
        return Err(Error::ParamOutOfRange {
            name: "sample_n",
            value: sample_n as u64,
            min: 2,
            max: seq::MAX_LEN as u64 - 1,
        });
    }
    let mut total = Tally::default();
    for n in exhaustive.clone() {
        let mut outputs: Vec<Emitted> = BinSeq::all(n)
            .flat_map(|x| error_ops(n).map(move |(d, e)| (emit(&x, d, e), x, d, e)))
            .collect();
        outputs.sort_unstable();
        let groups: Vec<&[Emitted]> = outputs.chunk_by(|a, b| a.0 == b.0).collect();
        let t = groups
            .par_iter()
            .map(|g| {
                let mut t = Tally::default();
                for a in g.iter() {
                    for b in g.iter() {
                        if a.2 == b.2 {
                            continue;
                        }
                        let q = Quad {
                            x: a.1,
                            dx: a.2,
                            ex: a.3,
                            y: b.1,
                            dy: b.2,
                            ey: b.3,
                        };
                        let fail = delta_failure(&q);
                        t.check(fail.is_none(), || {
                            quad_record(&q, fail.clone().unwrap_or_default())
                        });
                    }
                }
                t
            })
            .reduce(Tally::default, Tally::merge);
        total = total.merge(t);
    }
    let exhaustive_count = total.scanned;
    if samples > 0 {
        let t = (0..samples as u64)
            .into_par_iter()
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(i);
                let q = random_quad(sample_n, &mut rng);
                let mut t = Tally::default();
                let fail = delta_failure(&q);
                t.check(fail.is_none(), || {
                    quad_record(&q, fail.clone().unwrap_or_default())
                });
                t
            })
            .reduce(Tally::default, Tally::merge);
        total = total.merge(t);
    }
    let (lo, hi) = if exhaustive.is_empty() {
        (sample_n, sample_n)
    } else {
        (
            *exhaustive.start(),
            (*exhaustive.end()).max(if samples > 0 { sample_n } else { 0 }),
        )
    };
    let params = json!({
        "exhaustive": [exhaustive.start(), exhaustive.end()],
        "exhaustive_quadruples": exhaustive_count,
        "sample_n": sample_n,
        "samples": samples,
        "seed": seed,
    });
    Ok(predicate_report(
        "delta.identity",
        (lo, hi),
        params,
        total,
        started,
    ))
}

/// `|R(n, 2, ⌈log2 n⌉ + 3)| ≥ 2^(n-1)` for each `n`.
pub fn verify_r_count(ns: RangeInclusive<usize>) -> Result<VerifyReport> {
    let started = Instant::now();
    check_max(&ns, 20)?;
    let mut t = Tally::default();
    let mut counts = BTreeMap::new();
    for n in ns.clone() {
        let spec = CodeSpec::new(Family::RConstrained, n);
        let size = codes::enumerate(&spec)?.len() as u64;
        let need = 1u64 << (n - 1);
        counts.insert(
            n.to_string(),
            json!({ "t": spec.structural.t, "size": size, "lower_bound": need }),
        );
        t.check(size >= need, || {
            WitnessRecord::new(
                BinSeq::zeros(n),
                BinSeq::zeros(n),
                size as i64,
                format!("n={n}"),
            )
        });
    }
    Ok(predicate_report(
        "counts.r_size",
        ends(&ns),
        json!(counts),
        t,
        started,
    ))
}

/// Best-residue redundancy of `family` against its bound, compared as
/// integers: `log2 n + 3` for `C14` and `3 log2 n + 4` for `CL`.
pub fn verify_redundancy(family: Family, ns: RangeInclusive<usize>) -> Result<VerifyReport> {
    let started = Instant::now();
    check_max(&ns, 16)?;
    // red ≤ a·log2 n + b  ⇔  2^n ≤ |C| · n^a · 2^b
    let (a, b) = match family {
        Family::C1 | Family::C14 => (1u32, 3u32),
        Family::Cl => (3, 4),
        other => {
            return Err(Error::PreconditionViolated(format!(
                "no redundancy bound for {other}"
            )));
        }
    };
    let mut t = Tally::default();
    let mut rows = BTreeMap::new();
    for n in ns.clone() {
        let row = codes::best_residues(family, n)?;
        let rhs = (row.code_size as u128 * (n as u128).pow(a)) << b;
        let ok = (1u128 << n) <= rhs;
        rows.insert(
            n.to_string(),
            json!({
                "code_size": row.code_size,
                "redundancy": row.redundancy,
                "bound": a as f64 * (n as f64).log2() + b as f64,
                "best_residues": row.best_residues,
            }),
        );
        t.check(ok, || {
            WitnessRecord::new(
                BinSeq::zeros(n),
                BinSeq::zeros(n),
                row.code_size as i64,
                format!("n={n}"),
            )
        });
    }
    Ok(predicate_report(
        &format!("counts.redundancy.{family}"),
        ends(&ns),
        json!(rows),
        t,
        started,
    ))
}

/// Counting suite: `R` sizes for `n ≤ 20` and redundancy rows for
/// `n ≤ 16`, each clipped to `ns`.
pub fn verify_counts(ns: RangeInclusive<usize>) -> Result<Vec<VerifyReport>> {
    if *ns.end() > 20 {
        return Err(Error::TooLarge {
            n: *ns.end(),
            cap: 20,
        });
    }
    let mut out = Vec::new();
    let r = *ns.start()..=(*ns.end()).min(20);
    if !r.is_empty() {
        out.push(verify_r_count(r)?);
    }
    let red = (*ns.start()).max(2)..=(*ns.end()).min(16);
    if !red.is_empty() {
        out.push(verify_redundancy(Family::C14, red.clone())?);
        out.push(verify_redundancy(Family::Cl, red)?);
    }
    Ok(out)
}

/// Every pair of `C_DS^P` members whose disagreement window has length at
/// most `P` has `B(x, y) = ∅`, for each block length in `ps`, over every
/// residue tuple at once: each pair of `Σ^n` with a window of length at
/// most `P` and a common output must fall in different residue classes.
/// `max_observed` is the largest common output among such pairs that share
/// a class.
pub fn verify_p_bounded(ps: &[usize], ns: RangeInclusive<usize>) -> Result<VerifyReport> {
    let started = Instant::now();
    check_max(&ns, 12)?;
    let mut total = Tally::default();
    let mut separated = 0u64;
    for &p in ps {
        for n in ns.clone() {
            let s = Structural {
                p,
                ..Structural::prescribed(Family::Cdsp, n)
            };
            let spec = CodeSpec::new(Family::Cdsp, n).with_structural(s);
            spec.validate()?;
            let words: Vec<BinSeq> = BinSeq::all(n).collect();
            let keys: Vec<_> = words.iter().map(|x| spec.residue_key(x)).collect();
            let balls: Vec<_> = words.iter().map(ball::ds_ball).collect();
            let mut t = sweep_pairs(words.len(), 1, |i, j, acc| {
                let (x, y) = (&words[i], &words[j]);
                if seq::diff_profile_unchecked(x, y).middle_len() > p {
                    return;
                }
                let size =
                    ball::sorted_intersection_len(&balls[i].elements, &balls[j].elements) as i64;
                if size == 0 {
                    return;
                }
                let shared = keys[i].is_some() && keys[i] == keys[j];
                let value = if shared { size } else { 0 };
                acc[0].value(value, shared, || {
                    WitnessRecord::new(*x, *y, value, format!("P={p} common={size}"))
                });
            });
            let t = t.pop().unwrap_or_default();
            separated += t.scanned - t.violations;
            total = total.merge(t);
        }
    }
    Ok(bound_report(
        "cdsp.p_bounded",
        ends(&ns),
        json!({ "p": ps, "regime": "override", "separated_pairs": separated }),
        total,
        0,
        started,
    ))
}

/// Exploratory: `B_5`, `B_6`, `B_11` and `B_12` are empty for every pair
/// of a `C9` class under `structural`.
pub fn verify_c9_quiet(structural: Structural, ns: RangeInclusive<usize>) -> Result<VerifyReport> {
    let started = Instant::now();
    check_max(&ns, 12)?;
    let mut total = Tally::default();
    for n in ns.clone() {
        let spec = CodeSpec::new(Family::C9, n).with_structural(structural);
        let classes = codes::residue_classes(&spec)?;
        let t = classes
            .par_iter()
            .map(|(_, words)| {
                let mut t = sweep_pairs(words.len(), 1, |i, j, acc| {
                    let (x, y) = (&words[i], &words[j]);
                    let part = conf::partition_from_witnesses(&conf::witnesses_unchecked(x, y), n);
                    let loud: Vec<usize> = [5, 6, 11, 12]
                        .into_iter()
                        .filter(|&k| part.nonempty(k))
                        .collect();
                    acc[0].check(loud.is_empty(), || {
                        WitnessRecord::new(
                            *x,
                            *y,
                            part.intersection.len() as i64,
                            format!("nonempty: {loud:?}"),
                        )
                    });
                });
                t.pop().unwrap_or_default()
            })
            .reduce(Tally::default, Tally::merge);
        total = total.merge(t);
    }
    let regime = CodeSpec::new(Family::C9, *ns.start())
        .with_structural(structural)
        .structural
        .regime();
    Ok(predicate_report(
        "c9.quiet_subsets",
        ends(&ns),
        json!({ "structural": structural, "regime": regime, "exploratory": true }),
        total,
        started,
    ))
}

/// Calls `f` on every `k`-subset of `0..m` in lexicographic order.
fn for_each_subset(m: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > m {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + m - k) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// End-to-end decoding: for every residue class of `family` and every
/// codeword `x` whose ball holds at least `n_reads` outputs, `trials`
/// random `n_reads`-subsets of `B(x)` decode to `x`. Balls with at most
/// `exhaustive_upto` elements are tried on every subset instead.
pub fn verify_reconstruction(
    family: Family,
    n_reads: usize,
    ns: RangeInclusive<usize>,
    trials: usize,
    exhaustive_upto: usize,
    seed: u64,
) -> Result<VerifyReport> {
    let started = Instant::now();
    check_max(&ns, 16)?;
    let mut total = Tally::default();
    let mut codewords = 0u64;
    let mut short_balls = 0u64;
    for n in ns.clone() {
        let classes = codes::residue_classes(&CodeSpec::new(family, n))?;
        let t = classes
            .par_iter()
            .map(|(key, words)| -> Result<(Tally, u64, u64)> {
                let spec =
                    CodeSpec::new(family, n).with_residues(codes::Residues::from_key(family, key));
                let decoder = crate::reconstruct::Decoder::new(&spec)?;
                let mut t = Tally::default();
                let mut short = 0;
                for x in words {
                    let b = ball::ds_ball(x);
                    if b.len() < n_reads {
                        short += 1;
                        continue;
                    }
                    let mut attempt = |reads: &[BinSeq]| {
                        let got = decoder.decode(reads);
                        t.check(got.as_ref() == Ok(x), || {
                            let note = match &got {
                                Ok(w) => format!("decoded {w}"),
                                Err(e) => e.to_string(),
                            };
                            WitnessRecord::new(*x, *x, reads.len() as i64, note)
                        });
                    };
                    if b.len() <= exhaustive_upto {
                        let mut reads = Vec::with_capacity(n_reads);
                        for_each_subset(b.len(), n_reads, |idx| {
                            reads.clear();
                            reads.extend(idx.iter().map(|&i| b.elements[i]));
                            attempt(&reads);
                        });
                    } else {
                        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ x.bits());
                        rng.set_stream(n as u64);
                        for _ in 0..trials {
                            let reads: Vec<BinSeq> =
                                rand::seq::index::sample(&mut rng, b.len(), n_reads)
                                    .into_iter()
                                    .map(|i| b.elements[i])
                                    .collect();
                            attempt(&reads);
                        }
                    }
                }
                Ok((t, words.len() as u64, short))
            })
            .try_reduce(
                || (Tally::default(), 0, 0),
                |a, b| Ok((a.0.merge(b.0), a.1 + b.1, a.2 + b.2)),
            )?;
        total = total.merge(t.0);
        codewords += t.1;
        short_balls += t.2;
    }
    let params = json!({
        "family": family.to_string(),
        "reads": n_reads,
        "trials": trials,
        "exhaustive_upto": exhaustive_upto,
        "seed": seed,
        "codewords": codewords,
        "balls_smaller_than_reads": short_balls,
    });
    Ok(predicate_report(
        &format!("reconstruct.{family}"),
        ends(&ns),
        params,
        total,
        started,
    ))
}
