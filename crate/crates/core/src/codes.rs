//! Code families defined by syndrome congruences and structural
//! constraints, with membership, enumeration and residue scans.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::ball;
use crate::error::{Error, Result};
use crate::seq::{self, BinSeq, Eps};

/// Default cap on `n` for anything that walks all of `Σ^n`.
pub const DEFAULT_MAX_N: usize = 24;

/// Cap on exhaustive `n`, read from `RECON_DS_MAX_N` when set.
pub fn max_exhaustive_n() -> usize {
    std::env::var("RECON_DS_MAX_N")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MAX_N)
        .min(seq::MAX_LEN - 1)
}

pub fn check_cap(n: usize) -> Result<()> {
    let cap = max_exhaustive_n();
    if n > cap {
        return Err(Error::TooLarge { n, cap });
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// `VT^1 ≡ s (mod 2n)`.
    Vt,
    /// Weight mod 4 and `VT^1` mod `2n`.
    C1,
    /// Same membership as [`Family::C1`], tagged as the `N = 14` code.
    C14,
    /// List-decodable code, also the `N = 5` code.
    Cl,
    /// Period-≤`t'` substrings no longer than `t`.
    RConstrained,
    /// `x` and `ψ(x)` both strong-`(l, ε)`-locally-balanced.
    LocBal,
    /// Block-pair syndromes, `P`-bounded.
    Cdsp,
    C11,
    C9,
}

impl Family {
    pub const ALL: [Family; 9] = [
        Family::Vt,
        Family::C1,
        Family::C14,
        Family::Cl,
        Family::RConstrained,
        Family::LocBal,
        Family::Cdsp,
        Family::C11,
        Family::C9,
    ];

    /// Read count `N` the family is built for, if it is a reconstruction
    /// code.
    pub fn reconstruction_reads(&self) -> Option<usize> {
        match self {
            Family::C1 | Family::C14 => Some(14),
            Family::C11 => Some(11),
            Family::C9 => Some(9),
            Family::Cl => Some(5),
            _ => None,
        }
    }

    /// Residue names in the order they appear in a residue key.
    pub fn residue_names(&self) -> &'static [&'static str] {
        const G: [&str; 6] = ["g1", "g2", "g3", "g1'", "g2'", "g3'"];
        match self {
            Family::Vt => &["s"],
            Family::C1 | Family::C14 => &["s0", "s1"],
            Family::Cl => &["s0", "s1", "s2"],
            Family::RConstrained | Family::LocBal => &[],
            Family::Cdsp => &G,
            Family::C11 => &["s0", "s1", "g1", "g2", "g3", "g1'", "g2'", "g3'"],
            Family::C9 => &[
                "s0", "s1", "h0", "h1", "g1", "g2", "g3", "g1'", "g2'", "g3'",
            ],
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Vt => "vt",
            Family::C1 => "c1",
            Family::C14 => "c14",
            Family::Cl => "cl",
            Family::RConstrained => "r",
            Family::LocBal => "locbal",
            Family::Cdsp => "cdsp",
            Family::C11 => "c11",
            Family::C9 => "c9",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "vt" => Family::Vt,
            "c1" => Family::C1,
            "c14" => Family::C14,
            "cl" | "c5" => Family::Cl,
            "r" | "rconstrained" | "r-constrained" => Family::RConstrained,
            "locbal" => Family::LocBal,
            "cdsp" => Family::Cdsp,
            "c11" => Family::C11,
            "c9" => Family::C9,
            other => return Err(Error::Parse(format!(
                "unknown family {other:?} (expected vt, c1, c14, cl, c5, r, locbal, cdsp, c11, c9)"
            ))),
        })
    }
}

/// Residue targets. Only the ones a family lists are read; the VT code
/// uses `s1` for its single residue.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct Residues {
    pub s0: u64,
    pub s1: u64,
    pub s2: u64,
    pub h0: u64,
    pub h1: u64,
    pub g: [u64; 3],
    pub g_prime: [u64; 3],
}

impl Residues {
    /// Residues as a key in [`Family::residue_names`] order.
    pub fn key(&self, family: Family) -> Vec<u64> {
        let g = self.g.iter().chain(self.g_prime.iter()).copied();
        match family {
            Family::Vt => vec![self.s1],
            Family::C1 | Family::C14 => vec![self.s0, self.s1],
            Family::Cl => vec![self.s0, self.s1, self.s2],
            Family::RConstrained | Family::LocBal => vec![],
            Family::Cdsp => g.collect(),
            Family::C11 => [self.s0, self.s1].into_iter().chain(g).collect(),
            Family::C9 => [self.s0, self.s1, self.h0, self.h1]
                .into_iter()
                .chain(g)
                .collect(),
        }
    }

    /// Inverse of [`Residues::key`].
    pub fn from_key(family: Family, key: &[u64]) -> Self {
        let mut r = Residues::default();
        let names = family.residue_names();
        for (name, &v) in names.iter().zip(key) {
            match *name {
                "s" | "s1" => r.s1 = v,
                "s0" => r.s0 = v,
                "s2" => r.s2 = v,
                "h0" => r.h0 = v,
                "h1" => r.h1 = v,
                "g1" => r.g[0] = v,
                "g2" => r.g[1] = v,
                "g3" => r.g[2] = v,
                "g1'" => r.g_prime[0] = v,
                "g2'" => r.g_prime[1] = v,
                "g3'" => r.g_prime[2] = v,
                _ => unreachable!("unknown residue name"),
            }
        }
        r
    }
}

/// Structural parameters. `prescribed` is false once any value is overridden.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Structural {
    pub t_prime: usize,
    pub t: usize,
    /// Block length of the block-pair syndromes.
    pub p: usize,
    /// Minimum balanced window length.
    pub l: usize,
    pub eps: Eps,
    pub prescribed: bool,
}

/// `⌈log2 n⌉`.
pub fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

impl Structural {
    /// Parameters the constructions prescribe for length `n`.
    pub fn prescribed(family: Family, n: usize) -> Self {
        let t_prime = 2;
        let t = ceil_log2(n) + t_prime + 1;
        let l = (1296.0 * (n.max(2) as f64).log2()).ceil() as usize;
        let p = match family {
            Family::C9 => 4 * l,
            _ => 6 * t + 4,
        };
        Structural {
            t_prime,
            t,
            p,
            l,
            eps: Eps { num: 1, den: 18 },
            prescribed: true,
        }
    }

    pub fn regime(&self) -> &'static str {
        if self.prescribed {
            "prescribed"
        } else {
            "override"
        }
    }
}

/// A code family at a fixed length with fixed residues.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CodeSpec {
    pub family: Family,
    pub n: usize,
    pub residues: Residues,
    pub structural: Structural,
}

impl CodeSpec {
    /// Zero residues and the prescribed structural parameters.
    pub fn new(family: Family, n: usize) -> Self {
        Self {
            family,
            n,
            residues: Residues::default(),
            structural: Structural::prescribed(family, n),
        }
    }

    pub fn with_residues(mut self, residues: Residues) -> Self {
        self.residues = residues;
        self
    }

    /// Replaces the structural parameters and marks the `CodeSpec` as overridden
    /// unless they coincide with the prescribed ones.
    pub fn with_structural(mut self, mut s: Structural) -> Self {
        let prescribed = Structural::prescribed(self.family, self.n);
        s.prescribed = Structural {
            prescribed: true,
            ..s
        } == prescribed;
        self.structural = s;
        self
    }

    /// Inclusive upper bound of each residue, in key order.
    pub fn residue_maxima(&self) -> Vec<u64> {
        let n = self.n as u64;
        let p = self.structural.p as u64;
        let g = (1..=3u32).map(|k| block_modulus(p, k) - 1);
        match self.family {
            Family::Vt => vec![2 * n - 1],
            Family::C1 | Family::C14 => vec![3, 2 * n - 1],
            Family::Cl => vec![3, 2 * n - 1, 2 * n * n - 1],
            Family::RConstrained | Family::LocBal => vec![],
            Family::Cdsp => g.clone().chain(g).collect(),
            Family::C11 => [3, 2 * n - 1]
                .into_iter()
                .chain(g.clone())
                .chain(g)
                .collect(),
            Family::C9 => [3, 3 * n, 6, 6 * (n + 1)]
                .into_iter()
                .chain(g.clone())
                .chain(g)
                .collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.n > seq::MAX_LEN - 1 {
            return Err(Error::ParamOutOfRange {
                name: "n",
                value: self.n as u64,
                min: 1,
                max: seq::MAX_LEN as u64 - 1,
            });
        }
        let s = &self.structural;
        for (name, v) in [("t'", s.t_prime), ("t", s.t), ("P", s.p), ("l", s.l)] {
            if v == 0 {
                return Err(Error::ParamOutOfRange {
                    name,
                    value: 0,
                    min: 1,
                    max: u64::MAX,
                });
            }
        }
        Eps::new(s.eps.num, s.eps.den)?;
        let key = self.residues.key(self.family);
        let names = self.family.residue_names();
        for ((&v, &max), &name) in key.iter().zip(self.residue_maxima().iter()).zip(names) {
            if v > max {
                return Err(Error::ParamOutOfRange {
                    name,
                    value: v,
                    min: 0,
                    max,
                });
            }
        }
        Ok(())
    }

    /// Residue key of `x`, or `None` when `x` fails a structural
    /// constraint of the family.
    pub fn residue_key(&self, x: &BinSeq) -> Option<Vec<u64>> {
        let n = self.n as u64;
        let st = &self.structural;
        let f = self.family;
        if matches!(f, Family::RConstrained | Family::C11 | Family::C9)
            && seq::max_periodic_run(x, st.t_prime) > st.t
        {
            return None;
        }
        if matches!(f, Family::LocBal | Family::C9) && !locally_balanced_pair(x, st.l, st.eps) {
            return None;
        }
        let wt4 = seq::vt_syndrome(x, 0) % 4;
        let vt1 = seq::vt_syndrome(x, 1);
        let blocks = || block_syndromes(x, st.p);
        Some(match f {
            Family::Vt => vec![vt1 % (2 * n)],
            Family::C1 | Family::C14 => vec![wt4, vt1 % (2 * n)],
            Family::Cl => vec![wt4, vt1 % (2 * n), seq::vt_syndrome(x, 2) % (2 * n * n)],
            Family::RConstrained | Family::LocBal => vec![],
            Family::Cdsp => blocks().to_vec(),
            Family::C11 => [wt4, vt1 % (2 * n)].into_iter().chain(blocks()).collect(),
            Family::C9 => {
                let psi = seq::differential(x);
                [
                    wt4,
                    vt1 % (3 * n + 1),
                    seq::vt_syndrome(&psi, 0) % 7,
                    seq::vt_syndrome(&psi, 1) % (6 * (n + 1) + 1),
                ]
                .into_iter()
                .chain(blocks())
                .collect()
            }
        })
    }
}

/// `3 (2P)^k`.
pub fn block_modulus(p: u64, k: u32) -> u64 {
    3 * (2 * p).pow(k)
}

/// Blocks `x^{(P, i)}` for `i = 1 ..= ⌊n/P⌋ + 1`; the last one holds the
/// remainder and may be empty.
pub fn blocks(x: &BinSeq, p: usize) -> Vec<BinSeq> {
    let n = x.len();
    let full = n / p;
    let mut out: Vec<BinSeq> = (1..=full)
        .map(|i| x.slice((i - 1) * p + 1, i * p))
        .collect();
    out.push(x.slice(full * p + 1, n));
    out
}

/// `[g1, g2, g3, g1', g2', g3']` of `x`: sums of `VT^k` over odd-led and
/// even-led adjacent block pairs, reduced mod `3(2P)^k`. Missing blocks
/// contribute nothing.
pub fn block_syndromes(x: &BinSeq, p: usize) -> [u64; 6] {
    let b = blocks(x, p);
    let get = |i: usize| b.get(i - 1).copied().unwrap_or_default();
    let m = b.len();
    let mut out = [0u64; 6];
    for k in 1..=3u32 {
        let modulus = block_modulus(p as u64, k);
        let odd: u64 = (1..)
            .map(|i| 2 * i - 1)
            .take_while(|&first| first <= m)
            .map(|first| seq::vt_syndrome(&get(first).concat(&get(first + 1)), k) % modulus)
            .fold(0, |acc, v| (acc + v) % modulus);
        let even: u64 = (1..)
            .map(|i| 2 * i)
            .take_while(|&first| first <= m)
            .map(|first| seq::vt_syndrome(&get(first).concat(&get(first + 1)), k) % modulus)
            .fold(0, |acc, v| (acc + v) % modulus);
        out[(k - 1) as usize] = odd;
        out[(k + 2) as usize] = even;
    }
    out
}

fn locally_balanced_pair(x: &BinSeq, l: usize, eps: Eps) -> bool {
    seq::is_strong_locally_balanced(x, l, eps)
        && seq::is_strong_locally_balanced(&seq::differential(x), l, eps)
}

pub fn member(x: &BinSeq, spec: &CodeSpec) -> Result<bool> {
    spec.validate()?;
    if x.len() != spec.n {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: spec.n,
        });
    }
    Ok(spec.residue_key(x) == Some(spec.residues.key(spec.family)))
}

/// All members in lexicographic order.
pub fn enumerate(spec: &CodeSpec) -> Result<Vec<BinSeq>> {
    spec.validate()?;
    check_cap(spec.n)?;
    let target = spec.residues.key(spec.family);
    let n = spec.n;
    Ok((0..1u64 << n)
        .into_par_iter()
        .map(|b| BinSeq::from_bits(b, n))
        .filter(|x| spec.residue_key(x).as_ref() == Some(&target))
        .collect())
}

/// Splits every structurally admissible sequence of length `spec.n` by
/// residue key. The residues stored in `spec` are ignored. Keys and the
/// members of each class are sorted.
pub fn residue_classes(spec: &CodeSpec) -> Result<Vec<(Vec<u64>, Vec<BinSeq>)>> {
    spec.validate()?;
    check_cap(spec.n)?;
    let n = spec.n;
    let keyed: Vec<(Vec<u64>, BinSeq)> = (0..1u64 << n)
        .into_par_iter()
        .filter_map(|b| {
            let x = BinSeq::from_bits(b, n);
            spec.residue_key(&x).map(|k| (k, x))
        })
        .collect();
    let mut map: HashMap<Vec<u64>, Vec<BinSeq>> = HashMap::new();
    for (k, x) in keyed {
        map.entry(k).or_default().push(x);
    }
    let mut out: Vec<(Vec<u64>, Vec<BinSeq>)> = map.into_iter().collect();
    out.sort_unstable_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

/// Largest residue class of a family at length `n`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RedundancyRow {
    pub family: Family,
    pub n: usize,
    /// `(name, value)` pairs of the winning residues.
    pub best_residues: Vec<(String, u64)>,
    pub code_size: u64,
    /// `n - log2(code_size)`.
    pub redundancy: f64,
}

/// Scans every residue tuple and returns the lexicographically first one
/// with the most members.
pub fn best_residues(family: Family, n: usize) -> Result<RedundancyRow> {
    best_residues_for(&CodeSpec::new(family, n))
}

/// As [`best_residues`], keeping the structural parameters of `spec`.
pub fn best_residues_for(spec: &CodeSpec) -> Result<RedundancyRow> {
    let classes = residue_classes(spec)?;
    let (key, members) = classes
        .iter()
        .fold(None::<&(Vec<u64>, Vec<BinSeq>)>, |best, c| match best {
            Some(b) if b.1.len() >= c.1.len() => Some(b),
            _ => Some(c),
        })
        .ok_or_else(|| {
            Error::PreconditionViolated(format!(
                "no sequence of length {} satisfies the constraints",
                spec.n
            ))
        })?;
    let size = members.len() as u64;
    Ok(RedundancyRow {
        family: spec.family,
        n: spec.n,
        best_residues: spec
            .family
            .residue_names()
            .iter()
            .zip(key)
            .map(|(name, &v)| (name.to_string(), v))
            .collect(),
        code_size: size,
        redundancy: spec.n as f64 - (size as f64).log2(),
    })
}

/// Pairwise requirement of a `P`-bounded code: `B(x, y) = ∅` whenever the
/// disagreement window `x~` has length at most `P`.
pub fn is_p_bounded_pair_safe(x: &BinSeq, y: &BinSeq, p: usize) -> Result<bool> {
    let profile = seq::diff_profile(x, y)?;
    if profile.middle_len() > p {
        return Ok(true);
    }
    Ok(ball::ds_intersection(x, y)?.is_empty())
}
