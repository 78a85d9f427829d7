use std::io::Write;
use std::path::{Path, PathBuf};

use bandsim::knot_table::{
    identify_with, load_table, name_torus_link, seed_conformation, IdentifyOptions, KnotTable,
};
use bandsim::lattice::{read_polygons, write_polygons, ChainParams, CmcSampler, LatticePolygon, PolygonRecord};
use bandsim::obstructions::{run_all, BandingQuery, Mode, Operand};
use bandsim::reconnection::{
    random_site, read_event_log, reconnect, write_event_log, Alignment, ReconnectionEvent, SitePair,
};
use bandsim::stats::{TransitionNetwork, DEFAULT_BATCHES, DEFAULT_CONFIDENCE, UNKNOWN};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::ConfigFile;
use crate::{ChainArgs, CliError};

const SITE_POLICY: &str = "one uniformly random usable site per sampled conformation";
const RUN_PREFIX: &str = "# run ";
/// Conformations sampled before each parallel identification round.
const CHUNK: usize = 256;

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |e| CliError::Io(path.display().to_string(), e)
}

fn write_out(out: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, bytes).map_err(io_err(p)),
        None => std::io::stdout().write_all(bytes).map_err(|e| CliError::Io("stdout".into(), e)),
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(io_err(path))
}

fn pretty<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn chain_params(cfg: &ConfigFile, a: &ChainArgs) -> Result<ChainParams, CliError> {
    let d = ChainParams::default();
    let fugacities = match cfg.pick::<String>("fugacities", a.fugacities.clone())? {
        None => d.fugacities,
        Some(s) => s
            .split(',')
            .map(|x| x.trim().parse::<f64>().map_err(|_| CliError::Config(format!("bad fugacity {x}"))))
            .collect::<Result<_, _>>()?,
    };
    Ok(ChainParams {
        fugacities,
        swap_interval: cfg.pick_or("swap-interval", a.swap_interval, d.swap_interval)?,
        sample_interval: cfg.pick_or("sample-interval", a.sample_interval, d.sample_interval)?,
        burn_in: cfg.pick_or("burn-in", a.burn_in, d.burn_in)?,
        max_length: cfg.pick_or("max-length", a.max_length, d.max_length)?,
        rng_seed: cfg.pick_or("rng-seed", a.rng_seed, d.rng_seed)?,
    })
}

fn seed_for(knot: &str) -> Result<LatticePolygon, CliError> {
    seed_conformation(knot).ok_or_else(|| CliError::UnknownKnot(knot.to_string()))
}

fn positive(name: &str, v: u64) -> Result<u64, CliError> {
    if v == 0 {
        return Err(CliError::Config(format!("{name} must be at least 1")));
    }
    Ok(v)
}

pub fn sample(
    cfg: &ConfigFile,
    knot: Option<String>,
    samples: Option<u64>,
    out: Option<PathBuf>,
    chain: &ChainArgs,
) -> Result<(), CliError> {
    let knot: String = cfg.require("knot", knot)?;
    let n = positive("samples", cfg.require("samples", samples)?)?;
    let out = cfg.pick("out", out)?;
    let params = chain_params(cfg, chain)?;
    let mut sampler = CmcSampler::new(&seed_for(&knot)?, params.clone())?;
    let records: Vec<PolygonRecord> =
        (0..n).map(|_| PolygonRecord::new(knot.clone(), sampler.next_sample())).collect();
    let mut buf = Vec::new();
    write_polygons(&mut buf, &records, Some(&params)).map_err(|e| CliError::Io("buffer".into(), e))?;
    write_out(out.as_deref(), &buf)
}

struct Pending {
    polygon: LatticePolygon,
    site: SitePair,
    step: u64,
}

fn name_products(table: &KnotTable, p: &Pending) -> Result<ReconnectionEvent, CliError> {
    let out = reconnect(&p.polygon, &p.site)?;
    let product_knots = match p.site.alignment {
        Alignment::Parallel => {
            vec![identify_with(&out.products[0], table, IdentifyOptions::default()).label().to_string()]
        }
        Alignment::Antiparallel => vec![name_torus_link(&out.products).unwrap_or_else(|| UNKNOWN.to_string())],
    };
    Ok(ReconnectionEvent {
        substrate_knot: String::new(),
        substrate_length: p.polygon.length(),
        site_alignment: p.site.alignment,
        product_knots,
        product_lengths: out.products.iter().map(LatticePolygon::length).collect(),
        chain_id: 0,
        step: p.step,
    })
}

pub fn recombine(
    cfg: &ConfigFile,
    knot: Option<String>,
    events: Option<u64>,
    out: Option<PathBuf>,
    coherent: bool,
    workers: Option<usize>,
    chain: &ChainArgs,
) -> Result<(), CliError> {
    let knot: String = cfg.require("knot", knot)?;
    let budget = positive("events", cfg.require("events", events)?)?;
    let out: PathBuf = cfg.require("out", out)?;
    let coherent = cfg.flag("coherent", coherent)?;
    let workers = cfg.pick_or("workers", workers, 1usize)?.max(1);
    let params = chain_params(cfg, chain)?;
    let alignment = if coherent { Alignment::Antiparallel } else { Alignment::Parallel };

    let table = KnotTable::shipped();
    let mut sampler = CmcSampler::new(&seed_for(&knot)?, params.clone())?;
    let mut site_rng = ChaCha8Rng::seed_from_u64(params.rng_seed);
    site_rng.set_stream(1 << 32);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::Config(format!("worker pool: {e}")))?;

    let mut log: Vec<ReconnectionEvent> = Vec::with_capacity(budget as usize);
    let (mut attempted, mut no_site) = (0u64, 0u64);
    while (log.len() as u64) < budget {
        let mut pending = Vec::with_capacity(CHUNK);
        while pending.len() < CHUNK && ((log.len() + pending.len()) as u64) < budget {
            let polygon = sampler.next_sample();
            attempted += 1;
            match random_site(&polygon, alignment, &mut site_rng) {
                Some(site) => pending.push(Pending { polygon, site, step: sampler.stats().moves_per_chain }),
                None => no_site += 1,
            }
        }
        let named: Vec<Result<ReconnectionEvent, CliError>> =
            pool.install(|| pending.par_iter().map(|p| name_products(table, p)).collect());
        for e in named {
            let mut e = e?;
            e.substrate_knot = knot.clone();
            log.push(e);
        }
    }

    let run = json!({
        "command": "recombine",
        "knot": knot,
        "events": budget,
        "mode": if coherent { "coherent" } else { "non-coherent" },
        "site_policy": SITE_POLICY,
        "chain": params,
        "attempted": attempted,
        "no_site": no_site,
        "mean_lengths": sampler.stats().mean_lengths(),
    });
    let mut buf = format!("{RUN_PREFIX}{run}\n").into_bytes();
    write_event_log(&mut buf, &log).map_err(|e| CliError::Io("buffer".into(), e))?;
    write_out(Some(&out), &buf)?;
    write_out(None, pretty(&run).as_bytes())
}

pub fn network(
    cfg: &ConfigFile,
    input: Option<PathBuf>,
    out: Option<PathBuf>,
    substrate: Option<String>,
    batches: Option<usize>,
    confidence: Option<f64>,
) -> Result<(), CliError> {
    let input: PathBuf = cfg.require("input", input)?;
    let out: Option<PathBuf> = cfg.pick("out", out)?;
    let batches = cfg.pick_or("batches", batches, DEFAULT_BATCHES)?;
    let confidence = cfg.pick_or("confidence", confidence, DEFAULT_CONFIDENCE)?;
    if batches < 2 {
        return Err(CliError::Config("batches must be at least 2".into()));
    }
    let text = read_text(&input)?;
    let run: Value = text
        .lines()
        .find_map(|l| l.strip_prefix(RUN_PREFIX))
        .and_then(|j| serde_json::from_str(j).ok())
        .unwrap_or(Value::Null);
    let events = read_event_log(&text)?;
    let substrate = match cfg.pick::<String>("substrate", substrate)? {
        Some(s) => s,
        None => events
            .first()
            .map(|e| e.substrate_knot.clone())
            .or_else(|| run["knot"].as_str().map(str::to_string))
            .unwrap_or_default(),
    };
    let metadata = json!({
        "run": run,
        "batches": batches,
        "confidence": confidence,
        "unknown_policy": "excluded from the probability denominator, counted separately",
    });
    let mut net = TransitionNetwork::from_events(&substrate, &events, batches, metadata);
    if let Some(a) = run["attempted"].as_u64() {
        net.attempted = net.attempted.max(a);
    }
    let csv = net.csv_string(confidence);
    match out {
        Some(prefix) => {
            let with = |ext: &str| {
                let mut p = prefix.clone().into_os_string();
                p.push(ext);
                PathBuf::from(p)
            };
            write_out(Some(&with(".csv")), csv.as_bytes())?;
            write_out(Some(&with(".json")), (net.to_json() + "\n").as_bytes())
        }
        None => write_out(None, csv.as_bytes()),
    }
}

#[derive(Serialize)]
struct Identified {
    index: usize,
    label: String,
    length: usize,
    name: String,
    #[serde(flatten)]
    result: bandsim::knot_table::IdentificationResult,
}

pub fn identify(cfg: &ConfigFile, input: Option<PathBuf>, out: Option<PathBuf>) -> Result<(), CliError> {
    let input: PathBuf = cfg.require("input", input)?;
    let out: Option<PathBuf> = cfg.pick("out", out)?;
    let table = KnotTable::shipped();
    let rows: Vec<Identified> = read_polygons(&read_text(&input)?)?
        .into_iter()
        .enumerate()
        .map(|(index, r)| {
            let result = identify_with(&r.polygon, table, IdentifyOptions::default());
            Identified { index, label: r.knot, length: r.polygon.length(), name: result.label().to_string(), result }
        })
        .collect();
    write_out(out.as_deref(), pretty(&rows).as_bytes())
}

/// A table knot (mirrors as `K*`), or `T(2,n)`.
fn operand(table: &KnotTable, name: &str) -> Result<Operand, CliError> {
    Operand::named(table, name).ok_or_else(|| CliError::UnknownKnot(name.to_string()))
}

pub fn obstruct(
    cfg: &ConfigFile,
    k: &str,
    k_prime: &str,
    coherent: bool,
    out: Option<PathBuf>,
) -> Result<(), CliError> {
    let coherent = cfg.flag("coherent", coherent)?;
    let out: Option<PathBuf> = cfg.pick("out", out)?;
    let table = KnotTable::shipped();
    let mode = if coherent { Mode::Coherent } else { Mode::NonCoherent };
    let q = BandingQuery::new(operand(table, k)?, operand(table, k_prime)?, mode)?;
    write_out(out.as_deref(), (run_all(&q).to_json() + "\n").as_bytes())
}

pub fn validate_table(cfg: &ConfigFile, table: Option<PathBuf>, pd: Option<PathBuf>) -> Result<(), CliError> {
    let table_path: Option<PathBuf> = cfg.pick("table", table)?;
    let pd_path: Option<PathBuf> = cfg.pick("pd", pd)?;
    let (t, source) = match (table_path, pd_path) {
        (None, None) => {
            let t = KnotTable::shipped();
            t.validate()?;
            (t.clone(), "shipped".to_string())
        }
        (Some(a), Some(b)) => (load_table(&a, &b)?, a.display().to_string()),
        _ => return Err(CliError::Config("--table and --pd go together".into())),
    };
    let report = json!({ "status": "ok", "source": source, "records": t.len(), "mismatches": 0 });
    write_out(None, pretty(&report).as_bytes())
}
