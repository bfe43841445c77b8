//! Noisy-read simulation and reconstruction from distinct reads.

use std::collections::HashMap;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::ball::{self, BallView};
use crate::codes::{self, CodeSpec, Family};
use crate::error::{Error, Result};
use crate::seq::BinSeq;

/// Distinct reads of a length-`n` codeword, each of length `n - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReadSet {
    /// Sorted, distinct.
    pub reads: Vec<BinSeq>,
    pub n: usize,
    pub claimed_n: usize,
}

impl ReadSet {
    /// Checks lengths and distinctness; the stored order is sorted.
    pub fn new(mut reads: Vec<BinSeq>, n: usize) -> Result<Self> {
        for r in &reads {
            if r.len() + 1 != n {
                return Err(Error::LengthMismatch {
                    left: r.len(),
                    right: n - 1,
                });
            }
        }
        let count = reads.len();
        reads.sort_unstable();
        reads.dedup();
        if reads.len() != count {
            return Err(Error::PreconditionViolated("reads must be distinct".into()));
        }
        Ok(Self {
            reads,
            n,
            claimed_n: count,
        })
    }

    pub fn len(&self) -> usize {
        self.reads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reads.is_empty()
    }
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// One pass through the channel: delete a uniform position `d`; with
/// probability `1/n` leave the rest alone, otherwise flip a uniform
/// position other than `d`. Every element of `B(x)` has positive
/// probability.
pub fn channel_emit_with<R: Rng + ?Sized>(x: &BinSeq, rng: &mut R) -> Result<BinSeq> {
    let n = x.len();
    if n < 2 {
        return Err(Error::PreconditionViolated(
            "the channel needs at least two symbols".into(),
        ));
    }
    let d = rng.gen_range(1..=n);
    if rng.gen_range(0..n) == 0 {
        return Ok(x.deleted(d));
    }
    let mut e = rng.gen_range(1..n);
    if e >= d {
        e += 1;
    }
    Ok(x.flipped(e).deleted(d))
}

pub fn channel_emit(x: &BinSeq, seed: u64) -> Result<BinSeq> {
    channel_emit_with(x, &mut rng_from_seed(seed))
}

/// `count` distinct elements of `B(x)`, uniformly without replacement.
pub fn sample_reads_with<R: Rng + ?Sized>(
    x: &BinSeq,
    count: usize,
    rng: &mut R,
) -> Result<ReadSet> {
    let ball = ball::ds_ball(x);
    if ball.len() < count {
        return Err(Error::BallTooSmall {
            ball: ball.len(),
            requested: count,
        });
    }
    let picked = index::sample(rng, ball.len(), count)
        .into_iter()
        .map(|i| ball.elements[i])
        .collect();
    ReadSet::new(picked, x.len())
}

pub fn sample_reads(x: &BinSeq, count: usize, seed: u64) -> Result<ReadSet> {
    sample_reads_with(x, count, &mut rng_from_seed(seed))
}

/// Codebook with precomputed balls and an index from ball elements back
/// to codewords. Codes longer than the exhaustive cap skip the codebook
/// and invert one read instead.
pub struct Decoder {
    spec: CodeSpec,
    codebook: Option<Codebook>,
}

struct Codebook {
    words: Vec<BinSeq>,
    balls: Vec<BallView>,
    index: HashMap<BinSeq, Vec<u32>>,
}

impl Decoder {
    pub fn new(spec: &CodeSpec) -> Result<Self> {
        spec.validate()?;
        let codebook = if spec.n <= codes::max_exhaustive_n() {
            let words = codes::enumerate(spec)?;
            let balls: Vec<BallView> = words.iter().map(ball::ds_ball).collect();
            let mut index: HashMap<BinSeq, Vec<u32>> = HashMap::new();
            for (i, b) in balls.iter().enumerate() {
                for z in b {
                    index.entry(*z).or_default().push(i as u32);
                }
            }
            Some(Codebook {
                words,
                balls,
                index,
            })
        } else {
            None
        };
        Ok(Self {
            spec: *spec,
            codebook,
        })
    }

    pub fn spec(&self) -> &CodeSpec {
        &self.spec
    }

    /// Codewords in the order they were enumerated, when a codebook exists.
    pub fn codewords(&self) -> Option<&[BinSeq]> {
        self.codebook.as_ref().map(|c| c.words.as_slice())
    }

    /// Every codeword whose ball contains all the reads, sorted.
    pub fn candidates(&self, reads: &[BinSeq]) -> Result<Vec<BinSeq>> {
        let Some(first) = reads.first() else {
            return Err(Error::PreconditionViolated(
                "at least one read is required".into(),
            ));
        };
        if first.len() + 1 != self.spec.n {
            return Err(Error::LengthMismatch {
                left: first.len(),
                right: self.spec.n - 1,
            });
        }
        let mut out = match &self.codebook {
            Some(book) => book
                .index
                .get(first)
                .map(|ids| {
                    ids.iter()
                        .filter(|&&i| reads.iter().all(|r| book.balls[i as usize].contains(r)))
                        .map(|&i| book.words[i as usize])
                        .collect()
                })
                .unwrap_or_default(),
            None => {
                let mut found = Vec::new();
                for w in ball::inverse_ds_ball(first) {
                    if codes::member(&w, &self.spec)? {
                        let b = ball::ds_ball(&w);
                        if reads.iter().all(|r| b.contains(r)) {
                            found.push(w);
                        }
                    }
                }
                found
            }
        };
        out.sort_unstable();
        Ok(out)
    }

    /// The unique codeword consistent with `reads`.
    pub fn decode(&self, reads: &[BinSeq]) -> Result<BinSeq> {
        let found = self.candidates(reads)?;
        match found.len() {
            0 => Err(Error::NoCandidate),
            1 => Ok(found[0]),
            count => Err(Error::Ambiguous { count }),
        }
    }
}

/// Decodes `reads` against `spec`, requiring exactly `count` reads.
pub fn decode(reads: &ReadSet, spec: &CodeSpec, count: usize) -> Result<BinSeq> {
    if reads.len() != count {
        return Err(Error::PreconditionViolated(format!(
            "{} reads supplied, {count} expected",
            reads.len()
        )));
    }
    Decoder::new(spec)?.decode(&reads.reads)
}

/// All list-decodable codewords whose ball contains `read`.
pub fn list_decode_single(read: &BinSeq, spec: &CodeSpec) -> Result<Vec<BinSeq>> {
    if spec.family != Family::Cl {
        return Err(Error::PreconditionViolated(format!(
            "list decoding needs the cl family, got {}",
            spec.family
        )));
    }
    spec.validate()?;
    if read.len() + 1 != spec.n {
        return Err(Error::LengthMismatch {
            left: read.len(),
            right: spec.n - 1,
        });
    }
    let mut out = Vec::new();
    for w in ball::inverse_ds_ball(read) {
        if codes::member(&w, spec)? {
            out.push(w);
        }
    }
    Ok(out)
}

/// Outcome counts of repeated encode, read and decode trials.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SimulationReport {
    pub family: String,
    pub n: usize,
    pub reads: usize,
    pub trials: usize,
    pub seed: u64,
    pub codebook_size: usize,
    pub decoded: usize,
    pub wrong: usize,
    pub ambiguous: usize,
    pub no_candidate: usize,
    /// Trials skipped because the ball was smaller than the read count.
    pub ball_too_small: usize,
}

/// Draws a uniform codeword per trial, samples `reads` distinct outputs
/// of its ball and decodes them.
pub fn simulate(
    spec: &CodeSpec,
    reads: usize,
    trials: usize,
    seed: u64,
) -> Result<SimulationReport> {
    let decoder = Decoder::new(spec)?;
    let words = decoder
        .codewords()
        .ok_or(Error::TooLarge {
            n: spec.n,
            cap: codes::max_exhaustive_n(),
        })?
        .to_vec();
    if words.is_empty() {
        return Err(Error::PreconditionViolated("the code is empty".into()));
    }
    let mut rng = rng_from_seed(seed);
    let mut report = SimulationReport {
        family: spec.family.to_string(),
        n: spec.n,
        reads,
        trials,
        seed,
        codebook_size: words.len(),
        ..Default::default()
    };
    for _ in 0..trials {
        let x = words[rng.gen_range(0..words.len())];
        let set = match sample_reads_with(&x, reads, &mut rng) {
            Ok(s) => s,
            Err(Error::BallTooSmall { .. }) => {
                report.ball_too_small += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        match decoder.decode(&set.reads) {
            Ok(w) if w == x => report.decoded += 1,
            Ok(_) => report.wrong += 1,
            Err(Error::Ambiguous { .. }) => report.ambiguous += 1,
            Err(Error::NoCandidate) => report.no_candidate += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::Residues;

    fn s(v: &str) -> BinSeq {
        v.parse().unwrap()
    }

    #[test]
    fn channel_output_stays_in_ball() {
        let x = s("011010011101");
        let b = ball::ds_ball(&x);
        let mut rng = rng_from_seed(3);
        for _ in 0..10_000 {
            assert!(b.contains(&channel_emit_with(&x, &mut rng).unwrap()));
        }
    }

    #[test]
    fn channel_reaches_whole_ball() {
        let x = s("0110");
        let b = ball::ds_ball(&x);
        let mut rng = rng_from_seed(11);
        let mut seen: Vec<BinSeq> = (0..5_000)
            .map(|_| channel_emit_with(&x, &mut rng).unwrap())
            .collect();
        seen.sort_unstable();
        seen.dedup();
        assert_eq!(seen, b.elements);
    }

    #[test]
    fn channel_smallest_and_deterministic() {
        for seed in 0..20 {
            let out = channel_emit(&s("10"), seed).unwrap();
            assert_eq!(out.len(), 1);
            assert_eq!(out, channel_emit(&s("10"), seed).unwrap());
        }
        assert!(channel_emit(&s("1"), 0).is_err());
    }

    #[test]
    fn sample_reads_contract() {
        let x = s("0110100");
        let b = ball::ds_ball(&x);
        let all = sample_reads(&x, b.len(), 5).unwrap();
        assert_eq!(all.reads, b.elements);
        let some = sample_reads(&x, 6, 5).unwrap();
        assert_eq!(some.len(), 6);
        assert!(some.reads.iter().all(|r| b.contains(r)));
        assert_eq!(some, sample_reads(&x, 6, 5).unwrap());
        assert_eq!(
            sample_reads(&x, b.len() + 1, 5),
            Err(Error::BallTooSmall {
                ball: b.len(),
                requested: b.len() + 1
            })
        );
    }

    #[test]
    fn read_set_validation() {
        assert!(ReadSet::new(vec![s("01"), s("01")], 3).is_err());
        assert!(ReadSet::new(vec![s("01"), s("011")], 3).is_err());
    }

    #[test]
    fn full_ball_decodes() {
        let spec = CodeSpec::new(Family::C14, 9).with_residues(Residues {
            s0: 1,
            s1: 3,
            ..Default::default()
        });
        let decoder = Decoder::new(&spec).unwrap();
        for x in decoder.codewords().unwrap() {
            assert_eq!(decoder.decode(&ball::ds_ball(x).elements).unwrap(), *x);
        }
    }

    #[test]
    fn inverse_route_agrees_with_codebook() {
        let spec = CodeSpec::new(Family::Cl, 9).with_residues(Residues {
            s0: 2,
            s1: 5,
            s2: 40,
            ..Default::default()
        });
        let decoder = Decoder::new(&spec).unwrap();
        let inverted = Decoder {
            spec,
            codebook: None,
        };
        for x in decoder.codewords().unwrap() {
            let reads = sample_reads(x, 5, 1).unwrap();
            assert_eq!(
                decoder.candidates(&reads.reads).unwrap(),
                inverted.candidates(&reads.reads).unwrap()
            );
            assert_eq!(decode(&reads, &spec, 5).unwrap(), *x);
        }
    }

    #[test]
    fn list_decoding() {
        let spec = CodeSpec::new(Family::Cl, 8);
        for x in codes::enumerate(&spec).unwrap() {
            for r in ball::ds_ball(&x).iter() {
                let list = list_decode_single(r, &spec).unwrap();
                assert!(list.contains(&x));
                assert!(list.len() <= 2);
            }
        }
        assert!(list_decode_single(&s("0101010"), &CodeSpec::new(Family::C1, 8)).is_err());
    }

    #[test]
    fn simulation_is_reproducible() {
        let spec = CodeSpec::new(Family::C14, 10);
        let a = simulate(&spec, 14, 50, 7).unwrap();
        assert_eq!(a, simulate(&spec, 14, 50, 7).unwrap());
        assert_eq!(a.wrong + a.ambiguous + a.no_candidate, 0);
    }
}
