//! Argument definitions and the translation of flags into a validated
//! [`CodeSpec`].

use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use recon_ds::seq::Eps;
use recon_ds::{BinSeq, CodeSpec, Family, Residues, Structural};

use crate::Failure;

#[derive(Parser, Debug)]
#[command(
    name = "recon-ds",
    version,
    about = "Reconstruction codes for one deletion plus one substitution"
)]
pub struct Cli {
    /// Output format for stdout.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List the codewords of one residue class.
    Enumerate {
        #[command(flatten)]
        code: CodeArgs,
        /// Write codewords here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Largest residue class and its redundancy for each length.
    Stats {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        /// Lengths, inclusive: `8..14`, `8..=14` or `12`.
        #[arg(long, value_parser = parse_range, conflicts_with = "n")]
        n_range: Option<RangeInclusive<usize>>,
        #[arg(long, value_parser = n_parser())]
        n: Option<usize>,
        #[command(flatten)]
        structural: StructuralArgs,
        /// Shorthand for `--format json`.
        #[arg(long)]
        json: bool,
    },
    /// Print `B(x)`, sorted, one element per line.
    Ball {
        #[arg(value_parser = parse_seq)]
        x: BinSeq,
    },
    /// Print `B(x) ∩ B(y)` and its size.
    Intersect {
        #[arg(value_parser = parse_seq)]
        x: BinSeq,
        #[arg(value_parser = parse_seq)]
        y: BinSeq,
        /// Emit the eighteen witness subsets and their index pairs as JSON.
        #[arg(long)]
        partition: bool,
    },
    /// Term-by-term split of the `ψ` syndrome difference of a quadruple.
    Delta {
        #[arg(long, value_parser = parse_seq)]
        x: BinSeq,
        #[arg(long, value_parser = parse_seq)]
        y: BinSeq,
        #[arg(long)]
        dx: usize,
        /// Substitution index on `x`, 0 for none.
        #[arg(long, default_value_t = 0)]
        ex: usize,
        #[arg(long)]
        dy: usize,
        /// Substitution index on `y`, 0 for none.
        #[arg(long, default_value_t = 0)]
        ey: usize,
        #[arg(long)]
        json: bool,
    },
    /// Encode, read and decode random codewords.
    Simulate {
        #[command(flatten)]
        code: CodeArgs,
        /// Distinct reads per trial; defaults to the family's read count.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=4096))]
        reads: Option<u64>,
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..=10_000_000))]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Decode a file of reads, one bit string per line.
    Decode {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long)]
        reads_file: PathBuf,
    },
    /// Run a verification suite; exits 1 if any report fails.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        /// Restrict `bounds` and `reconstruct` to one family.
        #[arg(long, value_parser = parse_family)]
        family: Option<Family>,
        #[arg(long, value_parser = n_parser(), conflicts_with = "n_range")]
        n: Option<usize>,
        /// Lengths, inclusive: `8..14`, `8..=14` or `12`.
        #[arg(long, value_parser = parse_range)]
        n_range: Option<RangeInclusive<usize>>,
        /// Worker threads for the sweeps.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=1024))]
        jobs: Option<u64>,
        /// Also write the JSON document to this path.
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
        /// Random quadruples for the `delta` suite.
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        /// Random read subsets per codeword for the `reconstruct` suite.
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Structural,
    Bounds,
    Delta,
    Counts,
    Reconstruct,
}

impl Suite {
    pub fn name(&self) -> &'static str {
        match self {
            Suite::Structural => "structural",
            Suite::Bounds => "bounds",
            Suite::Delta => "delta",
            Suite::Counts => "counts",
            Suite::Reconstruct => "reconstruct",
        }
    }
}

/// Family, length and every override needed to pin down one code.
#[derive(Args, Debug)]
pub struct CodeArgs {
    #[arg(long, value_parser = parse_family)]
    pub family: Family,
    #[arg(long, value_parser = n_parser())]
    pub n: usize,
    #[command(flatten)]
    pub residues: ResidueArgs,
    #[command(flatten)]
    pub structural: StructuralArgs,
}

#[derive(Args, Debug, Default)]
pub struct ResidueArgs {
    /// VT residue.
    #[arg(long)]
    pub s: Option<u64>,
    #[arg(long)]
    pub s0: Option<u64>,
    #[arg(long)]
    pub s1: Option<u64>,
    #[arg(long)]
    pub s2: Option<u64>,
    #[arg(long)]
    pub h0: Option<u64>,
    #[arg(long)]
    pub h1: Option<u64>,
    #[arg(long)]
    pub g1: Option<u64>,
    #[arg(long)]
    pub g2: Option<u64>,
    #[arg(long)]
    pub g3: Option<u64>,
    /// Even-pair block residue g1'.
    #[arg(long)]
    pub g1p: Option<u64>,
    #[arg(long)]
    pub g2p: Option<u64>,
    #[arg(long)]
    pub g3p: Option<u64>,
}

impl ResidueArgs {
    /// `(residue name, flag, value)` for every flag given.
    fn given(&self) -> Vec<(&'static str, &'static str, u64)> {
        [
            ("s", "--s", self.s),
            ("s0", "--s0", self.s0),
            ("s1", "--s1", self.s1),
            ("s2", "--s2", self.s2),
            ("h0", "--h0", self.h0),
            ("h1", "--h1", self.h1),
            ("g1", "--g1", self.g1),
            ("g2", "--g2", self.g2),
            ("g3", "--g3", self.g3),
            ("g1'", "--g1p", self.g1p),
            ("g2'", "--g2p", self.g2p),
            ("g3'", "--g3p", self.g3p),
        ]
        .into_iter()
        .filter_map(|(name, flag, v)| v.map(|v| (name, flag, v)))
        .collect()
    }
}

#[derive(Args, Debug, Default)]
pub struct StructuralArgs {
    /// Longest forbidden period (overrides the prescribed value).
    #[arg(long)]
    pub t_prime: Option<usize>,
    /// Longest allowed periodic run (overrides the prescribed value).
    #[arg(long)]
    pub t: Option<usize>,
    /// Block length of the block syndromes (overrides the prescribed value).
    #[arg(long)]
    pub p: Option<usize>,
    /// Balanced window length (overrides the prescribed value).
    #[arg(long)]
    pub l: Option<usize>,
    /// Balance slack as `num/den` (overrides the prescribed value).
    #[arg(long, value_parser = parse_eps)]
    pub eps: Option<Eps>,
}

impl StructuralArgs {
    fn any(&self) -> bool {
        self.t_prime.is_some()
            || self.t.is_some()
            || self.p.is_some()
            || self.l.is_some()
            || self.eps.is_some()
    }

    fn apply(&self, base: Structural) -> Structural {
        Structural {
            t_prime: self.t_prime.unwrap_or(base.t_prime),
            t: self.t.unwrap_or(base.t),
            p: self.p.unwrap_or(base.p),
            l: self.l.unwrap_or(base.l),
            eps: self.eps.unwrap_or(base.eps),
            prescribed: base.prescribed,
        }
    }
}

fn structured(family: Family) -> bool {
    matches!(
        family,
        Family::RConstrained | Family::LocBal | Family::Cdsp | Family::C11 | Family::C9
    )
}

/// Applies structural overrides, rejecting them for families without
/// structural constraints.
pub fn with_structural(spec: CodeSpec, args: &StructuralArgs) -> Result<CodeSpec, Failure> {
    if !args.any() {
        return Ok(spec);
    }
    if !structured(spec.family) {
        return Err(Failure::Usage(format!(
            "structural overrides (--t-prime, --t, --p, --l, --eps) do not apply to family {}",
            spec.family
        )));
    }
    Ok(spec.with_structural(args.apply(spec.structural)))
}

/// Builds the `CodeSpec` and validates every override before any computation.
pub fn build_spec(code: &CodeArgs) -> Result<CodeSpec, Failure> {
    let family = code.family;
    let names = family.residue_names();
    let mut key = vec![0u64; names.len()];
    for (name, flag, v) in code.residues.given() {
        // the VT code's single residue is also accepted as --s1
        let name = if family == Family::Vt && name == "s1" {
            "s"
        } else {
            name
        };
        match names.iter().position(|&m| m == name) {
            Some(i) => key[i] = v,
            None => {
                let valid: Vec<String> = names.iter().map(|m| flag_of(m)).collect();
                return Err(Failure::Usage(format!(
                    "{flag} is not a residue of family {family} (valid: {})",
                    if valid.is_empty() {
                        "none".to_string()
                    } else {
                        valid.join(", ")
                    }
                )));
            }
        }
    }
    let spec = CodeSpec::new(family, code.n).with_residues(Residues::from_key(family, &key));
    let spec = with_structural(spec, &code.structural)?;
    spec.validate().map_err(Failure::from)?;
    Ok(spec)
}

/// Command-line flag for a library parameter name.
pub fn flag_of(name: &str) -> String {
    match name {
        "t'" => "--t-prime".into(),
        "P" => "--p".into(),
        other if other.ends_with('\'') => format!("--{}p", other.trim_end_matches('\'')),
        other => format!("--{other}"),
    }
}

fn n_parser() -> clap::builder::RangedU64ValueParser<usize> {
    clap::builder::RangedU64ValueParser::<usize>::new().range(1..=63)
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: recon_ds::Error| e.to_string())
}

fn parse_seq(s: &str) -> Result<BinSeq, String> {
    s.parse().map_err(|e: recon_ds::Error| e.to_string())
}

fn parse_eps(s: &str) -> Result<Eps, String> {
    let (num, den) = s.split_once('/').ok_or("expected num/den, e.g. 1/4")?;
    let num = num
        .trim()
        .parse()
        .map_err(|_| format!("bad numerator {num:?}"))?;
    let den = den
        .trim()
        .parse()
        .map_err(|_| format!("bad denominator {den:?}"))?;
    Eps::new(num, den).map_err(|e| e.to_string())
}

/// `a..b` and `a..=b` are both inclusive; a bare `a` is `a..=a`.
pub fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let bound = |t: &str| -> Result<usize, String> {
        let v: usize = t.trim().parse().map_err(|_| format!("bad length {t:?}"))?;
        if (1..=63).contains(&v) {
            Ok(v)
        } else {
            Err(format!("length {v} outside [1, 63]"))
        }
    };
    let (lo, hi) = match s.split_once("..") {
        Some((lo, hi)) => (bound(lo)?, bound(hi.trim_start_matches('='))?),
        None => {
            let v = bound(s)?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(format!("empty range {lo}..{hi}"));
    }
    Ok(lo..=hi)
}
