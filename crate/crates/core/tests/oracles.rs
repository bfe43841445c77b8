//! Library results against independent, deliberately naive oracles that
//! work on `Vec<u8>` symbol lists.

use std::collections::BTreeSet;

use proptest::prelude::*;
use recon_ds::ball;
use recon_ds::codes::{self, CodeSpec, Family, Residues};
use recon_ds::confusability as conf;
use recon_ds::seq::{self, BinSeq};

fn syms(x: &BinSeq) -> Vec<u8> {
    x.to_vec()
}

fn word(v: &[u8]) -> String {
    v.iter().map(|b| if *b == 1 { '1' } else { '0' }).collect()
}

fn naive_ball(x: &[u8]) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for d in 0..x.len() {
        let mut s = x.to_vec();
        s.remove(d);
        out.insert(word(&s));
        for e in 0..s.len() {
            let mut t = s.clone();
            t[e] ^= 1;
            out.insert(word(&t));
        }
    }
    out
}

fn naive_vt(x: &[u8], k: u32) -> u64 {
    x.iter()
        .enumerate()
        .map(|(i, &b)| {
            let w: u64 = (1..=i as u64 + 1).map(|j| j.pow(k.saturating_sub(1))).sum();
            if k == 0 {
                b as u64
            } else {
                w * b as u64
            }
        })
        .sum()
}

fn naive_psi(x: &[u8]) -> Vec<u8> {
    let mut padded = vec![0];
    padded.extend_from_slice(x);
    padded.push(0);
    padded.windows(2).map(|w| w[0] ^ w[1]).collect()
}

#[test]
fn ball_matches_naive_enumeration() {
    for n in 1..=9 {
        for x in BinSeq::all(n) {
            let lib: BTreeSet<String> = ball::ds_ball(&x).iter().map(|z| z.to_string()).collect();
            assert_eq!(lib, naive_ball(&syms(&x)), "{x}");
        }
    }
}

#[test]
fn intersection_matches_naive_sets() {
    for n in 2..=7 {
        let all: Vec<BinSeq> = BinSeq::all(n).collect();
        for x in &all {
            let bx = naive_ball(&syms(x));
            for y in all.iter().filter(|y| *y != x) {
                let by = naive_ball(&syms(y));
                let lib: BTreeSet<String> = ball::ds_intersection(x, y)
                    .unwrap()
                    .iter()
                    .map(|z| z.to_string())
                    .collect();
                assert_eq!(
                    lib,
                    bx.intersection(&by).cloned().collect::<BTreeSet<_>>(),
                    "{x} {y}"
                );
            }
        }
    }
}

#[test]
fn syndromes_match_weighted_sums() {
    for n in 1..=10 {
        for x in BinSeq::all(n) {
            for k in 0..=3 {
                assert_eq!(seq::vt_syndrome(&x, k), naive_vt(&syms(&x), k), "{x} k={k}");
            }
        }
    }
}

#[test]
fn differential_matches_pairwise_xor() {
    for n in 1..=10 {
        for x in BinSeq::all(n) {
            assert_eq!(syms(&seq::differential(&x)), naive_psi(&syms(&x)), "{x}");
        }
    }
}

#[test]
fn c1_membership_matches_definition() {
    for n in [6, 9] {
        for s0 in 0..4 {
            for s1 in 0..2 * n as u64 {
                let spec = CodeSpec::new(Family::C1, n).with_residues(Residues {
                    s0,
                    s1,
                    ..Default::default()
                });
                let lib: Vec<BinSeq> = codes::enumerate(&spec).unwrap();
                let naive: Vec<BinSeq> = BinSeq::all(n)
                    .filter(|x| {
                        let v = syms(x);
                        naive_vt(&v, 0) % 4 == s0 && naive_vt(&v, 1) % (2 * n as u64) == s1
                    })
                    .collect();
                assert_eq!(lib, naive);
            }
        }
    }
}

#[test]
fn cl_pairs_share_at_most_four_outputs_by_naive_sets() {
    let n = 8;
    for (_, words) in codes::residue_classes(&CodeSpec::new(Family::Cl, n)).unwrap() {
        let balls: Vec<_> = words.iter().map(|x| naive_ball(&syms(x))).collect();
        for i in 0..balls.len() {
            for j in i + 1..balls.len() {
                assert!(
                    balls[i].intersection(&balls[j]).count() <= 4,
                    "{} {}",
                    words[i],
                    words[j]
                );
            }
        }
    }
}

/// The eighteen subsets by literal quadruple enumeration over symbol lists.
fn naive_subsets(x: &[u8], y: &[u8]) -> Vec<BTreeSet<String>> {
    let n = x.len();
    let out_of = |v: &[u8], d: usize, e: usize| {
        let mut t = v.to_vec();
        if e != 0 {
            t[e - 1] ^= 1;
        }
        t.remove(d - 1);
        word(&t)
    };
    let mut sets = vec![BTreeSet::new(); 18];
    for dx in 1..=n {
        for ex in 0..=n {
            if ex == dx {
                continue;
            }
            let zx = out_of(x, dx, ex);
            for dy in 1..=n {
                for ey in 0..=n {
                    if ey == dy || out_of(y, dy, ey) != zx {
                        continue;
                    }
                    let w = conf::Witness {
                        dx,
                        ex: (ex != 0).then_some(ex),
                        dy,
                        ey: (ey != 0).then_some(ey),
                    };
                    for k in 1..=18 {
                        if conf::in_subset(k, &w) {
                            sets[k - 1].insert(zx.clone());
                        }
                    }
                }
            }
        }
    }
    sets
}

#[test]
fn subsets_match_literal_enumeration() {
    let n = 6;
    let all: Vec<BinSeq> = BinSeq::all(n).collect();
    for (i, x) in all.iter().enumerate() {
        for y in &all[i + 1..] {
            let part = conf::subset_partition(x, y).unwrap();
            let naive = naive_subsets(&syms(x), &syms(y));
            for k in 1..=18 {
                let lib: BTreeSet<String> = part.b(k).iter().map(|z| z.to_string()).collect();
                assert_eq!(lib, naive[k - 1], "{x} {y} k={k}");
            }
        }
    }
}

fn seq_strategy() -> impl Strategy<Value = BinSeq> {
    (2usize..=16).prop_flat_map(|n| any::<u64>().prop_map(move |b| BinSeq::from_bits(b, n)))
}

proptest! {
    #[test]
    fn reversal_and_complement_preserve_intersections(x in seq_strategy(), b in any::<u64>()) {
        let y = BinSeq::from_bits(b, x.len());
        prop_assume!(x != y);
        let size = ball::ds_intersection(&x, &y).unwrap().len();
        let rx = seq::reverse(&x);
        let ry = seq::reverse(&y);
        prop_assert_eq!(ball::ds_intersection(&rx, &ry).unwrap().len(), size);
        let cx = seq::complement(&x);
        let cy = seq::complement(&y);
        prop_assert_eq!(ball::ds_intersection(&cx, &cy).unwrap().len(), size);
    }

    #[test]
    fn odd_and_even_subsets_swap_under_exchange(x in seq_strategy(), b in any::<u64>()) {
        // exchanging x and y swaps B_{2i-1} and B_{2i} for the index pairs
        // whose definitions are mirror images: 7/8, 9/10, 11/12, 17/18
        let y = BinSeq::from_bits(b, x.len());
        prop_assume!(x != y && x.len() <= 10);
        let a = conf::subset_partition(&x, &y).unwrap();
        let b = conf::subset_partition(&y, &x).unwrap();
        prop_assert_eq!(&a.intersection, &b.intersection);
        for (p, q) in [(7, 8), (9, 10), (11, 12), (17, 18)] {
            prop_assert_eq!(a.b(p), b.b(q));
            prop_assert_eq!(a.b(q), b.b(p));
        }
    }

    #[test]
    fn every_ball_element_has_a_preimage(x in seq_strategy()) {
        for z in ball::ds_ball(&x).iter() {
            prop_assert!(ball::inverse_ds_ball(z).contains(&x));
        }
    }
}
