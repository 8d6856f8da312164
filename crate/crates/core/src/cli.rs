//! Command-line surface: argument types and the commands behind them.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::code::{
    build_alrc, build_olrc, build_ulrc, build_unilrc, parity_bound_check, rate_check, sample_distance, verify_distance,
    CodeDefinition, ErasurePattern, Family, Stripe, DEFAULT_DISTANCE_BUDGET,
};
use crate::error::{Error, Result};
use crate::metrics::{compute_metrics, write_metrics_csv};
use crate::placement::{place_default, PlacementMap};
use crate::presets::{self, Scheme};
use crate::reliability::{decimal_ratio, mttdl, write_mttdl_csv, MarkovParams, SECONDS_PER_YEAR};
use crate::sim::{simulate, write_sim_csv, SimConfig, SimRow, Workload, DEFAULT_RATIOS, DEFAULT_SIZES};

#[derive(Debug, Parser)]
#[command(name = "unilrc", version, about = "Wide LRC construction, coding and analysis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a code and write its JSON definition.
    Construct(ConstructArgs),
    /// Split a file into stripes and write one file per block index.
    Encode(EncodeArgs),
    /// Rebuild one block file.
    Repair(RepairArgs),
    /// Recover the original file from the surviving block files.
    Decode(DecodeArgs),
    /// Check a code definition's structural properties and distance.
    Verify(VerifyArgs),
    /// Repair-cost and load-balance metrics as CSV.
    Analyze(AnalyzeArgs),
    /// Mean time to data loss as CSV.
    Mttdl(MttdlArgs),
    /// Simulated read and repair performance as CSV.
    Simulate(SimulateArgs),
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[arg(long)]
    pub family: Family,
    /// Width preset: 42, 136 or 210.
    #[arg(long)]
    pub preset: Option<Scheme>,
    #[arg(long)]
    pub alpha: Option<usize>,
    #[arg(long)]
    pub z: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    /// ALRC: data blocks per local group.
    #[arg(long)]
    pub group_data: Option<usize>,
    #[arg(long)]
    pub g: Option<usize>,
    /// OLRC: locality.
    #[arg(long)]
    pub r: Option<usize>,
    /// OLRC: number of local groups.
    #[arg(long)]
    pub l: Option<usize>,
    /// ULRC: `locality:count` pairs, e.g. `7:3,8:2`.
    #[arg(long, value_delimiter = ',')]
    pub localities: Vec<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EncodeArgs {
    #[arg(long)]
    pub code: PathBuf,
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 1 << 20)]
    pub block_size: usize,
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct RepairArgs {
    #[arg(long)]
    pub code: PathBuf,
    /// Directory written by `encode`.
    #[arg(long)]
    pub dir: PathBuf,
    #[arg(long)]
    pub block: usize,
    /// Further blocks to treat as lost even if their files exist.
    #[arg(long, value_delimiter = ',')]
    pub erase: Vec<usize>,
}

#[derive(Debug, Args)]
pub struct DecodeArgs {
    #[arg(long)]
    pub code: PathBuf,
    #[arg(long)]
    pub dir: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Blocks to treat as lost even if their files exist.
    #[arg(long, value_delimiter = ',')]
    pub erase: Vec<usize>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub code: PathBuf,
    /// Largest n for exhaustive distance search.
    #[arg(long, default_value_t = DEFAULT_DISTANCE_BUDGET)]
    pub budget: usize,
    /// Column subsets sampled when n exceeds the budget.
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

/// Which codes a report covers.
#[derive(Debug, Args)]
pub struct Selection {
    /// A code definition file.
    #[arg(long, conflicts_with_all = ["all_42", "family"])]
    pub code: Option<PathBuf>,
    /// A preset family; with --scheme, or every scheme when omitted.
    #[arg(long)]
    pub family: Option<Family>,
    #[arg(long)]
    pub scheme: Option<Scheme>,
    /// The four 42-block codes side by side.
    #[arg(long)]
    pub all_42: bool,
    /// Placement file; derived when omitted (native for UniLRC, ECWide otherwise).
    #[arg(long, requires = "code")]
    pub placement: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub select: Selection,
    /// CSV output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MttdlArgs {
    #[command(flatten)]
    pub select: Selection,
    /// Every family at every scheme with default parameters.
    #[arg(long)]
    pub defaults: bool,
    #[arg(long, default_value_t = 400)]
    pub nodes: u64,
    #[arg(long, default_value_t = 16.0)]
    pub capacity_tb: f64,
    #[arg(long, default_value_t = 1.0)]
    pub bandwidth_gbps: f64,
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    #[arg(long, default_value = "0.1")]
    pub delta: String,
    /// Multi-failure detect-and-trigger time, seconds.
    #[arg(long, default_value_t = 1800.0)]
    pub detect_time: f64,
    /// Mean node lifetime, years.
    #[arg(long, default_value_t = 4.0)]
    pub lifetime_years: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WorkloadKind {
    NormalRead,
    DegradedRead,
    Reconstruction,
    FullNode,
    ObjectRead,
    ObjectDegradedRead,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub select: Selection,
    #[arg(long, value_enum, default_value = "reconstruction")]
    pub workload: WorkloadKind,
    /// Cross-cluster bandwidth, Gb/s.
    #[arg(long, default_value_t = 1.0)]
    pub cross_bw: f64,
    /// Inner-cluster bandwidth, Gb/s.
    #[arg(long, default_value_t = 10.0)]
    pub inner_bw: f64,
    /// Multipliers of --cross-bw, `lo..hi` (six log-spaced points) or a comma list.
    #[arg(long)]
    pub sweep_cross_bw: Option<String>,
    #[arg(long, default_value_t = 1 << 20)]
    pub block_size: u64,
    /// Degraded-read requests or objects read.
    #[arg(long, default_value_t = 100)]
    pub requests: usize,
    /// Stripes for full-node recovery; n when omitted.
    #[arg(long)]
    pub stripes: Option<usize>,
    #[arg(long)]
    pub nodes_per_cluster: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write a JSON event trace of every run to this file.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Block file name for index `i`.
pub fn block_file(i: usize) -> String {
    format!("block_{i:04}.bin")
}

pub const MANIFEST_FILE: &str = "manifest.json";
pub const MANIFEST_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub schema_version: u32,
    /// SHA-256 of the code definition's canonical JSON.
    pub code_sha256: String,
    pub n: usize,
    pub k: usize,
    pub block_size: usize,
    pub original_length: u64,
    pub stripes: usize,
}

pub fn code_hash(code: &CodeDefinition) -> Result<String> {
    Ok(hex::encode(Sha256::digest(code.to_json()?.as_bytes())))
}

fn load_code(path: &Path) -> Result<CodeDefinition> {
    CodeDefinition::from_json(&fs::read_to_string(path)?)
}

fn load_manifest(dir: &Path, code: &CodeDefinition) -> Result<Manifest> {
    let m: Manifest = serde_json::from_str(&fs::read_to_string(dir.join(MANIFEST_FILE))?)?;
    if m.schema_version != MANIFEST_SCHEMA_VERSION {
        return Err(Error::Format(format!("unsupported manifest schema_version {}", m.schema_version)));
    }
    if m.code_sha256 != code_hash(code)? {
        return Err(Error::Format("code definition does not match the one used to encode".into()));
    }
    if (m.n, m.k) != (code.n(), code.k()) {
        return Err(Error::Format("manifest dimensions disagree with the code".into()));
    }
    Ok(m)
}

/// Block files present in `dir`, `None` where missing or listed in `erase`.
fn load_blocks(dir: &Path, m: &Manifest, erase: &[usize]) -> Result<Vec<Option<Vec<u8>>>> {
    let expected = m.block_size * m.stripes;
    (0..m.n)
        .map(|i| {
            if erase.contains(&i) {
                return Ok(None);
            }
            match fs::read(dir.join(block_file(i))) {
                Ok(bytes) if bytes.len() == expected => Ok(Some(bytes)),
                Ok(bytes) => {
                    Err(Error::Format(format!("{} has {} bytes, expected {expected}", block_file(i), bytes.len())))
                }
                Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
                Err(e) => Err(e.into()),
            }
        })
        .collect()
}

/// Slice of stripe `s` in every available block file.
fn stripe_view(blocks: &[Option<Vec<u8>>], s: usize, bs: usize) -> Vec<Option<&[u8]>> {
    blocks.iter().map(|b| b.as_ref().map(|v| &v[s * bs..(s + 1) * bs])).collect()
}

/// Outcome of a command: text for stdout and whether every check passed.
#[derive(Debug, Default)]
pub struct Outcome {
    pub stdout: String,
    pub success: bool,
}

impl Outcome {
    fn ok(stdout: String) -> Outcome {
        Outcome { stdout, success: true }
    }
}

pub fn execute(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Construct(a) => construct(a),
        Command::Encode(a) => encode(a),
        Command::Repair(a) => repair(a),
        Command::Decode(a) => decode(a),
        Command::Verify(a) => verify(a),
        Command::Analyze(a) => analyze(a),
        Command::Mttdl(a) => mttdl_cmd(a),
        Command::Simulate(a) => simulate_cmd(a),
    }
}

fn need(v: Option<usize>, name: &str, family: Family) -> Result<usize> {
    v.ok_or_else(|| Error::Parameter(format!("--{name} is required for {family}")))
}

fn parse_localities(items: &[String]) -> Result<Vec<(usize, usize)>> {
    items
        .iter()
        .map(|s| {
            let bad = || Error::Parameter(format!("locality spec {s:?} is not `locality:count`"));
            let (a, b) = s.split_once(':').ok_or_else(bad)?;
            Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
        })
        .collect()
}

fn construct(a: ConstructArgs) -> Result<Outcome> {
    let code = match (a.family, a.preset) {
        (f, Some(s)) => presets::build(f, s)?,
        (Family::UniLrc, None) => build_unilrc(need(a.alpha, "alpha", a.family)?, need(a.z, "z", a.family)?)?,
        (Family::Alrc, None) => build_alrc(
            need(a.k, "k", a.family)?,
            need(a.group_data, "group-data", a.family)?,
            need(a.g, "g", a.family)?,
        )?,
        (Family::Olrc, None) => build_olrc(
            need(a.k, "k", a.family)?,
            need(a.r, "r", a.family)?,
            need(a.g, "g", a.family)?,
            need(a.l, "l", a.family)?,
        )?,
        (Family::Ulrc, None) => match parse_localities(&a.localities)?.as_slice() {
            [(small, sc), (large, lc)] => build_ulrc(need(a.k, "k", a.family)?, *small, *sc, *large, *lc)?,
            _ => return Err(Error::Parameter("ULRC needs --localities small:count,large:count".into())),
        },
    };
    if let Some(out) = &a.out {
        fs::write(out, code.to_json()?)?;
    }
    Ok(Outcome::ok(format!("{}\n", code.spec.summary())))
}

fn encode(a: EncodeArgs) -> Result<Outcome> {
    let code = load_code(&a.code)?;
    if a.block_size == 0 {
        return Err(Error::Parameter("block size must be positive".into()));
    }
    let input = fs::read(&a.input)?;
    let (n, k, bs) = (code.n(), code.k(), a.block_size);
    let stripe_bytes = k * bs;
    let stripes = input.len().div_ceil(stripe_bytes).max(1);
    let encoded: Vec<Stripe> = (0..stripes)
        .into_par_iter()
        .map(|s| {
            let data: Vec<Vec<u8>> = (0..k)
                .map(|i| {
                    let start = (s * stripe_bytes + i * bs).min(input.len());
                    let end = (start + bs).min(input.len());
                    let mut block = input[start..end].to_vec();
                    block.resize(bs, 0);
                    block
                })
                .collect();
            code.encode(&data)
        })
        .collect::<Result<_>>()?;
    fs::create_dir_all(&a.out_dir)?;
    (0..n).into_par_iter().try_for_each(|i| -> Result<()> {
        let mut file = Vec::with_capacity(stripes * bs);
        for st in &encoded {
            file.extend_from_slice(&st.blocks[i]);
        }
        fs::write(a.out_dir.join(block_file(i)), file)?;
        Ok(())
    })?;
    let manifest = Manifest {
        schema_version: MANIFEST_SCHEMA_VERSION,
        code_sha256: code_hash(&code)?,
        n,
        k,
        block_size: bs,
        original_length: input.len() as u64,
        stripes,
    };
    let mut text = serde_json::to_string_pretty(&manifest)?;
    text.push('\n');
    fs::write(a.out_dir.join(MANIFEST_FILE), text)?;
    Ok(Outcome::ok(format!("stripes={stripes} blocks={n} block_size={bs} original_length={}\n", input.len())))
}

fn repair(a: RepairArgs) -> Result<Outcome> {
    let code = load_code(&a.code)?;
    let m = load_manifest(&a.dir, &code)?;
    if a.block >= m.n {
        return Err(Error::Parameter(format!("block {} out of range 0..{}", a.block, m.n)));
    }
    let mut erase = a.erase.clone();
    erase.push(a.block);
    let blocks = load_blocks(&a.dir, &m, &erase)?;
    let bs = m.block_size;
    let repairs = (0..m.stripes)
        .into_par_iter()
        .map(|s| code.repair(&stripe_view(&blocks, s, bs), a.block))
        .collect::<Result<Vec<_>>>()?;
    let mut file = Vec::with_capacity(m.stripes * bs);
    for r in &repairs {
        file.extend_from_slice(&r.block);
    }
    fs::write(a.dir.join(block_file(a.block)), file)?;
    let first = &repairs[0];
    Ok(Outcome::ok(format!("block={} helpers={}, xor_only={}\n", a.block, first.helpers.len(), first.xor_only)))
}

fn decode(a: DecodeArgs) -> Result<Outcome> {
    let code = load_code(&a.code)?;
    let m = load_manifest(&a.dir, &code)?;
    let blocks = load_blocks(&a.dir, &m, &a.erase)?;
    let erasures = ErasurePattern::new((0..m.n).filter(|&i| blocks[i].is_none()));
    let plan = code.decode_plan(&erasures)?;
    let bs = m.block_size;
    let data: Vec<Vec<Vec<u8>>> =
        (0..m.stripes).into_par_iter().map(|s| plan.decode(&stripe_view(&blocks, s, bs))).collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(m.stripes * m.k * bs);
    for stripe in data {
        for block in stripe {
            out.extend_from_slice(&block);
        }
    }
    out.truncate(m.original_length as usize);
    fs::write(&a.out, &out)?;
    Ok(Outcome::ok(format!("erased={erasures} bytes={}\n", out.len())))
}

fn verify(a: VerifyArgs) -> Result<Outcome> {
    let code = load_code(&a.code)?;
    let mut lines = vec![code.spec.summary()];
    let mut all = true;
    let mut check = |name: &str, pass: bool, detail: String| {
        all &= pass;
        let verdict = if pass { "PASS" } else { "FAIL" };
        lines.push(if detail.is_empty() { format!("{name} {verdict}") } else { format!("{name}={detail} {verdict}") });
    };
    check("parity_check_nullity", code.parity_check_nullity_holds(), String::new());
    check("group_xor", code.group_xor_identity_holds(), String::new());
    if code.spec.family == Family::UniLrc {
        match rate_check(&code.spec) {
            Ok(r) => check("rate", true, format!("{:.4}", r.as_f64())),
            Err(_) => check("rate", false, "forms disagree".into()),
        }
        check("parity_bound", parity_bound_check(&code.spec)?, format!("{}", code.n() - code.k()));
    }
    if code.n() <= a.budget {
        let rep = verify_distance(&code, a.budget);
        check("distance", rep.distance >= code.spec.d, format!("{} (exhaustive)", rep.distance));
    } else {
        let s = sample_distance(&code, a.samples, a.seed);
        check("distance", s.passed(), format!("{} (claimed, sampled {} column subsets)", s.claimed, s.samples));
    }
    Ok(Outcome { stdout: lines.join("\n") + "\n", success: all })
}

/// `(scheme label, code, placement)` for the selection.
fn selected(sel: &Selection, default_all: bool) -> Result<Vec<(String, CodeDefinition, PlacementMap)>> {
    let mut out = Vec::new();
    let mut push = |label: String, code: CodeDefinition, map: Option<PlacementMap>| -> Result<()> {
        let map = match map {
            Some(m) => m,
            None => place_default(&code)?,
        };
        out.push((label, code, map));
        Ok(())
    };
    if let Some(path) = &sel.code {
        let code = load_code(path)?;
        let map = sel.placement.as_ref().map(|p| PlacementMap::from_json(&fs::read_to_string(p)?)).transpose()?;
        push(format!("{}-of-{}", code.k(), code.n()), code, map)?;
        return Ok(out);
    }
    let schemes: Vec<Scheme> = match (sel.all_42, sel.scheme) {
        (true, _) => vec![Scheme::N42],
        (false, Some(s)) => vec![s],
        (false, None) if sel.family.is_some() || default_all => Scheme::ALL.to_vec(),
        _ => return Err(Error::Parameter("choose --code, --family, --scheme or --all-42".into())),
    };
    let families: Vec<Family> = sel.family.map_or(Family::ALL.to_vec(), |f| vec![f]);
    for s in schemes {
        for &f in &families {
            push(s.label(), presets::build(f, s)?, None)?;
        }
    }
    Ok(out)
}

fn emit(out: &Option<PathBuf>, bytes: Vec<u8>) -> Result<Outcome> {
    match out {
        Some(path) => {
            fs::write(path, &bytes)?;
            Ok(Outcome::ok(String::new()))
        }
        None => Ok(Outcome::ok(String::from_utf8(bytes).map_err(|e| Error::Format(e.to_string()))?)),
    }
}

fn analyze(a: AnalyzeArgs) -> Result<Outcome> {
    let rows = selected(&a.select, false)?
        .into_iter()
        .map(|(label, code, map)| Ok((code.spec.family.to_string(), label, compute_metrics(&code, &map)?)))
        .collect::<Result<Vec<_>>>()?;
    let mut buf = Vec::new();
    write_metrics_csv(&mut buf, &rows)?;
    emit(&a.out, buf)
}

fn mttdl_cmd(a: MttdlArgs) -> Result<Outcome> {
    let params = MarkovParams {
        nodes: a.nodes,
        capacity_bytes: a.capacity_tb * 1e12,
        bandwidth_bps: a.bandwidth_gbps * 1e9,
        epsilon: a.epsilon,
        delta: decimal_ratio(&a.delta)?,
        detect_time: a.detect_time,
        lambda: 1.0 / (a.lifetime_years * SECONDS_PER_YEAR),
        f: 1,
    };
    let rows = selected(&a.select, a.defaults)?
        .into_iter()
        .map(|(label, code, map)| Ok((label, code.spec.family.to_string(), mttdl(&code, &map, &params)?)))
        .collect::<Result<Vec<_>>>()?;
    let mut buf = Vec::new();
    write_mttdl_csv(&mut buf, &rows)?;
    emit(&a.out, buf)
}

/// `lo..hi` as six log-spaced points, or an explicit comma list.
pub fn parse_sweep(s: &str) -> Result<Vec<f64>> {
    let bad = || Error::Parameter(format!("bad sweep {s:?}; use lo..hi or a comma list"));
    let pts: Vec<f64> = if let Some((lo, hi)) = s.split_once("..") {
        let (lo, hi): (f64, f64) = (lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?);
        if !(lo > 0.0 && hi > lo) {
            return Err(bad());
        }
        (0..6).map(|i| lo * (hi / lo).powf(i as f64 / 5.0)).collect()
    } else {
        s.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?
    };
    if pts.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
        return Err(bad());
    }
    Ok(pts)
}

fn simulate_cmd(a: SimulateArgs) -> Result<Outcome> {
    let multipliers = match &a.sweep_cross_bw {
        Some(s) => parse_sweep(s)?,
        None => vec![1.0],
    };
    let workload = |code: &CodeDefinition| match a.workload {
        WorkloadKind::NormalRead => Ok(Workload::NormalRead),
        WorkloadKind::DegradedRead => Ok(Workload::DegradedRead { requests: a.requests }),
        WorkloadKind::Reconstruction => Ok(Workload::Reconstruction),
        WorkloadKind::FullNode => Ok(Workload::FullNode { stripes: a.stripes.unwrap_or(code.n()) }),
        WorkloadKind::ObjectRead | WorkloadKind::ObjectDegradedRead => {
            crate::sim::gen_workload(&DEFAULT_SIZES, &DEFAULT_RATIOS, a.requests, a.seed)
                .map(|sizes| Workload::ObjectRead { sizes, degraded: a.workload == WorkloadKind::ObjectDegradedRead })
        }
    };
    let mut rows = Vec::new();
    let mut traces = Vec::new();
    for (label, code, map) in selected(&a.select, false)? {
        for &mult in &multipliers {
            let mut cfg = SimConfig::new(code.clone(), map.clone(), workload(&code)?);
            cfg.topology.inner_bandwidth = a.inner_bw * 1e9 / 8.0;
            cfg.topology.cross_bandwidth = a.cross_bw * mult * 1e9 / 8.0;
            cfg.block_size = a.block_size;
            cfg.seed = a.seed;
            cfg.nodes_per_cluster = a.nodes_per_cluster;
            cfg.trace = a.trace.is_some();
            let mut result = simulate(&cfg)?;
            if let Some(t) = result.trace.take() {
                traces.push(serde_json::json!({
                    "scheme": label, "family": code.spec.family.to_string(),
                    "cross_bw": cfg.topology.cross_bandwidth, "events": t,
                }));
            }
            rows.push(SimRow {
                scheme: label.clone(),
                family: code.spec.family.to_string(),
                workload: cfg.workload.name().to_string(),
                cross_bandwidth: cfg.topology.cross_bandwidth,
                result,
            });
        }
    }
    if let Some(path) = &a.trace {
        let mut f = fs::File::create(path)?;
        serde_json::to_writer_pretty(&mut f, &traces)?;
        f.write_all(b"\n")?;
    }
    let mut buf = Vec::new();
    write_sim_csv(&mut buf, &rows)?;
    emit(&a.out, buf)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> Result<Outcome> {
        let mut v = vec!["unilrc"];
        v.extend_from_slice(args);
        execute(Cli::try_parse_from(v).map_err(|e| Error::Parameter(e.to_string()))?)
    }

    #[test]
    fn construct_summaries() {
        let o = run(&["construct", "--family", "unilrc", "--alpha", "1", "--z", "6"]).unwrap();
        assert_eq!(o.stdout, "family=UniLRC n=42 k=30 r=6 z=6 g=6 l=6 d=8 rate=0.7143\n");
        assert!(run(&["construct", "--family", "unilrc", "--alpha", "1", "--z", "1"]).is_err());
        let o = run(&["construct", "--family", "ulrc", "--k", "30", "--localities", "7:3,8:2"]).unwrap();
        assert!(o.stdout.contains("n=42 k=30"));
        let o = run(&["construct", "--family", "olrc", "--preset", "42"]).unwrap();
        assert!(o.stdout.contains("family=OLRC n=42 k=30 r=25"));
    }

    #[test]
    fn sweeps() {
        let s = parse_sweep("0.5..10").unwrap();
        assert_eq!(s.len(), 6);
        assert!((s[0] - 0.5).abs() < 1e-12 && (s[5] - 10.0).abs() < 1e-9);
        assert_eq!(parse_sweep("1,2").unwrap(), vec![1.0, 2.0]);
        assert!(parse_sweep("2..1").is_err());
    }

    #[test]
    fn analyze_all_42() {
        let o = run(&["analyze", "--all-42"]).unwrap();
        let rbar: Vec<&str> =
            o.stdout.lines().filter(|l| l.contains(",r_bar,")).map(|l| l.split(',').nth(3).unwrap()).collect();
        assert_eq!(rbar, vec!["8.57143", "25", "7.42857", "6"]);
    }
}
