//! One function per subcommand. Output is assembled into a string and
//! written once so identical arguments give identical bytes.

use std::fmt::Write as _;
use std::fs;
use std::ops::RangeInclusive;
use std::path::Path;
use std::time::Instant;

use recon_ds::reconstruct::{self, Decoder, ReadSet};
use recon_ds::verify::{self, VerifyReport};
use recon_ds::{ball, codes, confusability, delta, BinSeq, CodeSpec, Family};
use serde_json::{json, Map, Value};

use crate::args::{self, Cli, Command, Format, Suite};
use crate::{Failure, SCHEMA};

type Out = Result<(), Failure>;

pub fn run(cli: Cli) -> Out {
    let format = cli.format;
    match cli.command {
        Command::Enumerate { code, out } => {
            enumerate(&args::build_spec(&code)?, out.as_deref(), format)
        }
        Command::Stats {
            family,
            n_range,
            n,
            structural,
            json,
        } => {
            let ns = n_range
                .or(n.map(|n| n..=n))
                .ok_or_else(|| Failure::Usage("one of --n or --n-range is required".into()))?;
            stats(family, ns, &structural, pick(format, json))
        }
        Command::Ball { x } => ball_cmd(&x, format),
        Command::Intersect { x, y, partition } => intersect(&x, &y, partition, format),
        Command::Delta {
            x,
            y,
            dx,
            ex,
            dy,
            ey,
            json,
        } => delta_cmd(&x, &y, dx, ex, dy, ey, pick(format, json)),
        Command::Simulate {
            code,
            reads,
            trials,
            seed,
            json,
        } => {
            let spec = args::build_spec(&code)?;
            simulate(
                &spec,
                reads.map(|r| r as usize),
                trials as usize,
                seed,
                pick(format, json),
            )
        }
        Command::Decode { code, reads_file } => {
            decode(&args::build_spec(&code)?, &reads_file, format)
        }
        Command::Verify {
            suite,
            family,
            n,
            n_range,
            jobs,
            json,
            seed,
            samples,
            trials,
        } => {
            let opts = VerifyOpts {
                suite,
                family,
                ns: n_range.or(n.map(|n| n..=n)),
                seed,
                samples,
                trials,
            };
            let run = || verify_cmd(&opts, json.as_deref(), format);
            match jobs {
                Some(j) => rayon::ThreadPoolBuilder::new()
                    .num_threads(j as usize)
                    .build()
                    .map_err(|e| Failure::Usage(format!("--jobs: {e}")))?
                    .install(run),
                None => run(),
            }
        }
    }
}

fn pick(format: Format, json: bool) -> Format {
    if json {
        Format::Json
    } else {
        format
    }
}

fn emit(text: &str) {
    print!("{text}");
}

fn document(mut fields: Map<String, Value>) -> String {
    let mut doc = Map::new();
    doc.insert("schema".into(), json!(SCHEMA));
    doc.append(&mut fields);
    let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("json values serialize");
    s.push('\n');
    s
}

fn fields(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => unreachable!("documents are built from objects"),
    }
}

/// `key value` lines with strings unquoted.
fn kv_lines(v: Value, width: usize) -> String {
    let mut s = String::new();
    for (k, v) in fields(v) {
        let v = v
            .as_str()
            .map(str::to_string)
            .unwrap_or_else(|| v.to_string());
        let _ = writeln!(s, "{k:<width$} {v}");
    }
    s
}

fn residue_map(spec: &CodeSpec) -> Value {
    let names = spec.family.residue_names();
    let key = spec.residues.key(spec.family);
    Value::Object(
        names
            .iter()
            .zip(key)
            .map(|(n, v)| (n.to_string(), json!(v)))
            .collect(),
    )
}

fn enumerate(spec: &CodeSpec, out: Option<&Path>, format: Format) -> Out {
    let words = codes::enumerate(spec)?;
    let text = match format {
        Format::Text => words.iter().map(|w| format!("{w}\n")).collect(),
        Format::Json => document(fields(json!({
            "family": spec.family,
            "n": spec.n,
            "residues": residue_map(spec),
            "structural": spec.structural,
            "regime": spec.structural.regime(),
            "size": words.len(),
            "codewords": words,
        }))),
    };
    match out {
        Some(path) => {
            fs::write(path, text)
                .map_err(|e| Failure::Usage(format!("--out {}: {e}", path.display())))?;
            emit(&format!(
                "{} codewords written to {}\n",
                words.len(),
                path.display()
            ));
        }
        None => emit(&text),
    }
    Ok(())
}

fn stats(
    family: Family,
    ns: RangeInclusive<usize>,
    structural: &args::StructuralArgs,
    format: Format,
) -> Out {
    let mut rows = Vec::new();
    for n in ns {
        let spec = args::with_structural(CodeSpec::new(family, n), structural)?;
        spec.validate()?;
        rows.push(codes::best_residues_for(&spec)?);
    }
    let text = match format {
        Format::Json => document(fields(json!({ "rows": rows }))),
        Format::Text => {
            let mut s = format!(
                "{:<8} {:>3} {:>8} {:>10}  residues\n",
                "family", "n", "size", "redundancy"
            );
            for r in &rows {
                let res: Vec<String> = r
                    .best_residues
                    .iter()
                    .map(|(k, v)| format!("{k}={v}"))
                    .collect();
                let _ = writeln!(
                    s,
                    "{:<8} {:>3} {:>8} {:>10.4}  {}",
                    r.family.to_string(),
                    r.n,
                    r.code_size,
                    r.redundancy,
                    res.join(" ")
                );
            }
            s
        }
    };
    emit(&text);
    Ok(())
}

fn ball_cmd(x: &BinSeq, format: Format) -> Out {
    let b = ball::ds_ball(x);
    let text = match format {
        Format::Text => b.iter().map(|z| format!("{z}\n")).collect(),
        Format::Json => document(fields(
            json!({ "x": x, "size": b.len(), "elements": b.elements }),
        )),
    };
    emit(&text);
    Ok(())
}

fn intersect(x: &BinSeq, y: &BinSeq, partition: bool, format: Format) -> Out {
    if partition {
        let p = confusability::subset_partition(x, y)?;
        let keyed = |f: &dyn Fn(usize) -> Value| -> Value {
            Value::Object(
                (1..=confusability::SUBSETS)
                    .map(|k| (k.to_string(), f(k)))
                    .collect(),
            )
        };
        emit(&document(fields(json!({
            "x": x,
            "y": y,
            "B": keyed(&|k| json!(p.b(k).elements)),
            "E": keyed(&|k| json!(p.e(k))),
            "union_size": p.union.len(),
        }))));
        return Ok(());
    }
    let common = ball::ds_intersection(x, y)?;
    let text = match format {
        Format::Text => {
            let mut s: String = common.iter().map(|z| format!("{z}\n")).collect();
            let _ = writeln!(s, "size {}", common.len());
            s
        }
        Format::Json => document(fields(json!({
            "x": x,
            "y": y,
            "size": common.len(),
            "elements": common.elements,
        }))),
    };
    emit(&text);
    Ok(())
}

fn delta_cmd(
    x: &BinSeq,
    y: &BinSeq,
    dx: usize,
    ex: usize,
    dy: usize,
    ey: usize,
    format: Format,
) -> Out {
    let opt = |e: usize| (e != 0).then_some(e);
    let b = delta::delta_psi_decomposition(x, y, dx, opt(ex), dy, opt(ey))?;
    let holds = b.identity_holds();
    let text = match format {
        Format::Json => {
            let mut f = fields(json!({ "x": x, "y": y, "dx": dx, "ex": ex, "dy": dy, "ey": ey }));
            f.insert("breakdown".into(), json!(b));
            f.insert("identity_holds".into(), json!(holds));
            document(f)
        }
        Format::Text => {
            let mut s = kv_lines(json!(b), 20);
            let _ = writeln!(s, "{:<20} {holds}", "identity_holds");
            s
        }
    };
    emit(&text);
    if holds {
        Ok(())
    } else {
        Err(Failure::Failed(format!(
            "term sum {} differs from direct value {}",
            b.total, b.direct
        )))
    }
}

fn simulate(
    spec: &CodeSpec,
    reads: Option<usize>,
    trials: usize,
    seed: u64,
    format: Format,
) -> Out {
    let family_reads = spec.family.reconstruction_reads();
    let reads = reads
        .or(family_reads)
        .ok_or_else(|| Failure::Usage(format!("--reads is required for family {}", spec.family)))?;
    let started = Instant::now();
    let r = reconstruct::simulate(spec, reads, trials, seed)?;
    log::info!("simulated {trials} trials in {:?}", started.elapsed());
    let text = match format {
        Format::Json => document(fields(json!({ "report": r }))),
        Format::Text => kv_lines(json!(r), 16),
    };
    emit(&text);
    // with at least the designed read count every trial must decode
    let guaranteed = family_reads.is_some_and(|need| reads >= need);
    if guaranteed && r.decoded + r.ball_too_small != r.trials {
        return Err(Failure::Failed(format!(
            "{} of {} trials failed to decode with {reads} reads",
            r.trials - r.decoded - r.ball_too_small,
            r.trials
        )));
    }
    Ok(())
}

fn read_lines(path: &Path) -> Result<Vec<BinSeq>, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("--reads-file {}: {e}", path.display())))?;
    text.lines()
        .map(str::trim)
        .enumerate()
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .map(|(i, l)| {
            l.parse().map_err(|e| {
                Failure::Usage(format!(
                    "--reads-file {} line {}: {e}",
                    path.display(),
                    i + 1
                ))
            })
        })
        .collect()
}

fn decode(spec: &CodeSpec, path: &Path, format: Format) -> Out {
    let reads = ReadSet::new(read_lines(path)?, spec.n)?;
    if let Some(need) = spec.family.reconstruction_reads() {
        if reads.len() < need {
            log::warn!(
                "{} reads supplied, the {} code is built for {need}",
                reads.len(),
                spec.family
            );
        }
    }
    let decoder = Decoder::new(spec)?;
    let candidates = decoder.candidates(&reads.reads)?;
    let text = match format {
        Format::Json => document(fields(json!({
            "family": spec.family,
            "n": spec.n,
            "reads": reads.len(),
            "candidates": candidates,
            "decoded": (candidates.len() == 1).then(|| candidates[0]),
        }))),
        Format::Text if candidates.len() == 1 => format!("{}\n", candidates[0]),
        Format::Text => String::new(),
    };
    emit(&text);
    match candidates.len() {
        1 => Ok(()),
        0 => Err(Failure::Failed(
            "no codeword is consistent with the reads".into(),
        )),
        k => Err(Failure::Failed(format!(
            "{k} codewords are consistent with the reads"
        ))),
    }
}

struct VerifyOpts {
    suite: Suite,
    family: Option<Family>,
    ns: Option<RangeInclusive<usize>>,
    seed: u64,
    samples: usize,
    trials: usize,
}

fn reconstruction_families(
    family: Option<Family>,
    default: &[Family],
) -> Result<Vec<Family>, Failure> {
    match family {
        Some(f) if f.reconstruction_reads().is_none() => Err(Failure::Usage(format!(
            "--family {f} is not a reconstruction code (valid: c1, c14, cl, c11, c9)"
        ))),
        Some(f) => Ok(vec![f]),
        None => Ok(default.to_vec()),
    }
}

fn clip(ns: &RangeInclusive<usize>, cap: usize) -> Option<RangeInclusive<usize>> {
    let r = *ns.start()..=(*ns.end()).min(cap);
    (!r.is_empty()).then_some(r)
}

fn run_suite(o: &VerifyOpts) -> Result<Vec<VerifyReport>, Failure> {
    let mut reports = Vec::new();
    match o.suite {
        Suite::Structural => {
            reports = verify::verify_structure(o.ns.clone().unwrap_or(8..=10))?;
        }
        Suite::Bounds => {
            let ns = o.ns.clone().unwrap_or(8..=12);
            if o.family.is_none() {
                if let Some(small) = clip(&ns, 10) {
                    reports.push(verify::verify_global_ball_bound(small)?);
                }
            }
            for f in reconstruction_families(
                o.family,
                &[Family::C14, Family::Cl, Family::C11, Family::C9],
            )? {
                reports.extend(verify::bound_reports(f, ns.clone())?);
            }
        }
        Suite::Delta => {
            let max = o.ns.as_ref().map_or(9, |r| *r.end());
            reports.push(verify::verify_delta(2..=max, 20, o.samples, o.seed)?);
        }
        Suite::Counts => {
            reports = verify::verify_counts(o.ns.clone().unwrap_or(8..=14))?;
        }
        Suite::Reconstruct => {
            let ns = o.ns.clone().unwrap_or(8..=10);
            for f in reconstruction_families(o.family, &[Family::C14, Family::Cl])? {
                let reads = f.reconstruction_reads().expect("checked above");
                reports.push(verify::verify_reconstruction(
                    f,
                    reads,
                    ns.clone(),
                    o.trials,
                    20,
                    o.seed,
                )?);
            }
        }
    }
    Ok(reports)
}

fn verify_cmd(o: &VerifyOpts, json_path: Option<&Path>, format: Format) -> Out {
    let started = Instant::now();
    let reports = run_suite(o)?;
    let passed = reports.iter().all(|r| r.passed);
    for r in &reports {
        log::info!("{} in {:?}", r.check_id, r.wall_time);
    }
    log::info!("suite {} took {:?}", o.suite.name(), started.elapsed());
    let doc = document(fields(json!({
        "suite": o.suite.name(),
        "seed": o.seed,
        "passed": passed,
        "reports": reports,
    })));
    if let Some(path) = json_path {
        fs::write(path, &doc)
            .map_err(|e| Failure::Usage(format!("--json {}: {e}", path.display())))?;
    }
    let text = match format {
        Format::Json => doc,
        Format::Text => {
            let mut s = String::new();
            for r in &reports {
                let _ = writeln!(s, "{}", r.summary());
                if !r.passed {
                    for w in &r.witnesses {
                        let _ = writeln!(
                            s,
                            "    witness x={} y={} value={} {}",
                            w.x, w.y, w.value, w.detail
                        );
                    }
                }
            }
            let ok = reports.iter().filter(|r| r.passed).count();
            let _ = writeln!(s, "{ok}/{} reports passed", reports.len());
            s
        }
    };
    emit(&text);
    if passed {
        Ok(())
    } else {
        Err(Failure::Failed(String::new()))
    }
}
