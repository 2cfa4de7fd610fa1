//! Batch suites over seeded instances. Instance `i` of a run with seed `s`
//! uses seed `s + i`, so any failure replays alone with `--replay`.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use islands_core::discharging::discharge;
use islands_core::gadgets::{forward_coloring_girth8, hyper2color, reduce_girth8, reduce_planar};
use islands_core::generators::{hex_patch, hex_torus, hypergraph3, quadrangulation, triangulated_torus, triangulation};
use islands_core::islands::{find_island, guarantee_threshold, is_island, IslandCheck};
use islands_core::mc::{max_component, mc_optimize};
use islands_core::peel::{audit, color_four_plus_sink, color_from_lists, ListAssignment, PeelOptions};
use islands_core::{Embedding, Error, Graph, Regime};

use crate::report::{dump_violation, CmdResult, Ctx, Failure, EXIT_NO, EXIT_OK, EXIT_VIOLATION};

pub const SUITES: [&str; 10] = [
    "planar-A",
    "quad-B",
    "hex-C",
    "hex-torus",
    "four-sink",
    "torus-sink",
    "charges",
    "mc-oracle",
    "girth8",
    "planar-reduce",
];

#[derive(Parser, Debug)]
#[command(name = "suite", about = "Seeded batch suites")]
pub struct SuiteCli {
    /// Print the run report as JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Log progress to stderr.
    #[arg(long, short, global = true)]
    pub verbose: bool,
    #[command(subcommand)]
    pub cmd: SuiteCmd,
}

#[derive(Subcommand, Debug)]
pub enum SuiteCmd {
    /// Run a named suite.
    Run(RunArgs),
    /// List suite names.
    List,
}

#[derive(Args, Debug)]
pub struct RunArgs {
    #[arg(long)]
    pub name: String,
    #[arg(long, default_value_t = 100)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Run the single instance with this seed.
    #[arg(long, conflicts_with_all = ["count", "seed"])]
    pub replay: Option<u64>,
    #[arg(long, default_value = ".")]
    pub dump_dir: PathBuf,
}

#[derive(Debug, Clone, Serialize)]
pub struct InstanceResult {
    pub index: usize,
    pub seed: u64,
    pub pass: bool,
    pub detail: String,
    /// Set when the instance contradicts an island guarantee.
    #[serde(skip)]
    pub violation: Option<Box<islands_core::TheoremViolation>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub count: usize,
    pub passed: usize,
    pub failed: Vec<InstanceResult>,
    pub instances: Vec<InstanceResult>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.failed.is_empty()
    }
}

type Check = Result<String, String>;

fn fail<T>(msg: impl Into<String>) -> Result<T, String> {
    Err(msg.into())
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_c0de)
}

/// Island search plus re-verification.
fn island_check(g: &Graph, k: usize, s: usize) -> Result<usize, String> {
    let w = find_island(g, k, s).ok_or(format!("no {k}-island of size <= {s}"))?;
    match is_island(g, &w.members, k) {
        Ok(IslandCheck::Island(_)) => Ok(w.size()),
        _ => fail("witness does not re-verify"),
    }
}

fn list_check(g: &Graph, regime: Regime, chi: i64, list_size: usize, palette: u32, seed: u64) -> Check {
    let lists = ListAssignment::random(g.n(), list_size, palette, seed).map_err(|e| e.to_string())?;
    let out = color_from_lists(g, &lists, regime, chi, PeelOptions::default()).map_err(|e| e.to_string())?;
    let bound = (regime.size() as i64).max(guarantee_threshold(regime, chi)) as usize;
    let rep = audit(g, Some(&lists), &out.coloring, bound).map_err(|e| e.to_string())?;
    if !rep.list_violations.is_empty() {
        return fail(format!("{} list violations", rep.list_violations.len()));
    }
    if rep.max_component > bound {
        return fail(format!("component of size {} > {bound}", rep.max_component));
    }
    Ok(format!("max component {}", rep.max_component))
}

fn embedded(r: islands_core::Result<Embedding>) -> Result<Embedding, String> {
    r.map_err(|e| e.to_string())
}

fn planar_a(seed: u64) -> Check {
    let n = rng(seed).gen_range(20..=500);
    let e = embedded(triangulation(n, seed))?;
    let size = island_check(e.graph(), 4, 3)?;
    let c = list_check(e.graph(), Regime::A, 2, 5, 9, seed)?;
    Ok(format!("n={n} island={size} {c}"))
}

fn quad_b(seed: u64) -> Check {
    let n = rng(seed).gen_range(20..=500);
    let e = embedded(quadrangulation(n, seed))?;
    let size = island_check(e.graph(), 2, 10)?;
    let c = list_check(e.graph(), Regime::B, 2, 3, 6, seed)?;
    Ok(format!("n={n} island={size} {c}"))
}

fn hex_c(seed: u64) -> Check {
    let mut r = rng(seed);
    let (rows, cols) = (r.gen_range(3..=10), r.gen_range(3..=10));
    let deletions = r.gen_range(0..=rows * cols / 2);
    let e = embedded(hex_patch(rows, cols, deletions, seed))?;
    let size = island_check(e.graph(), 1, 16)?;
    let c = list_check(e.graph(), Regime::C, 2, 2, 4, seed)?;
    Ok(format!("{rows}x{cols}-{deletions} n={} island={size} {c}", e.graph().n()))
}

fn hex_torus_suite(seed: u64) -> Check {
    let mut r = rng(seed);
    let (rows, cols) = (r.gen_range(3..=8), r.gen_range(3..=8));
    let e = embedded(hex_torus(rows, cols))?;
    let size = island_check(e.graph(), 1, 16)?;
    let c = list_check(e.graph(), Regime::C, 0, 2, 4, seed)?;
    Ok(format!("{rows}x{cols} island={size} {c}"))
}

fn sink_check(e: &Embedding) -> Check {
    let chi = e.euler_characteristic().map_err(|e| e.to_string())?;
    let g = e.graph();
    let out = color_four_plus_sink(g, chi).map_err(|e| e.to_string())?;
    let sink_bound = 3.max(guarantee_threshold(Regime::A, chi)) as usize;
    let rep = audit(g, None, &out.coloring, sink_bound).map_err(|e| e.to_string())?;
    let (low, sink) = (rep.max_over(1..=4), rep.max_over([5]));
    if out.coloring.iter().any(|&c| !(1..=5).contains(&c)) {
        return fail("color outside 1..5");
    }
    if low > 3 || sink > sink_bound {
        return fail(format!("colors 1-4 max {low}, color 5 max {sink} (bound {sink_bound})"));
    }
    Ok(format!("chi={chi} max14={low} max5={sink}"))
}

fn four_sink(seed: u64) -> Check {
    let n = rng(seed).gen_range(20..=500);
    sink_check(&embedded(triangulation(n, seed))?)
}

fn torus_sink(seed: u64) -> Check {
    let mut r = rng(seed);
    let (rows, cols) = (r.gen_range(3..=12), r.gen_range(3..=12));
    sink_check(&embedded(triangulated_torus(rows, cols))?)
}

/// Every family the three charge schemes apply to, cycling by seed.
fn charges(seed: u64) -> Check {
    let mut r = rng(seed);
    let (e, regimes): (Embedding, &[Regime]) = match seed % 5 {
        0 => (embedded(triangulation(r.gen_range(4..=200), seed))?, &[Regime::A]),
        1 => (embedded(quadrangulation(r.gen_range(4..=200), seed))?, &[Regime::A, Regime::B]),
        2 => (
            embedded(hex_patch(r.gen_range(2..=6), r.gen_range(2..=6), r.gen_range(0..=6), seed))?,
            &[Regime::A, Regime::B, Regime::C],
        ),
        3 => (embedded(hex_torus(r.gen_range(3..=6), r.gen_range(3..=6)))?, &[Regime::A, Regime::B, Regime::C]),
        _ => (embedded(triangulated_torus(r.gen_range(3..=6), r.gen_range(3..=6)))?, &[Regime::A]),
    };
    let mut parts = Vec::new();
    for &regime in regimes {
        // discharge re-checks the identity and conservation exactly
        let s = discharge(&e, regime).map_err(|e| e.to_string())?;
        parts.push(format!("{regime}:{}", s.total()));
    }
    Ok(parts.join(" "))
}

fn brute_force_optimum(g: &Graph) -> usize {
    let n = g.n();
    (0u32..1 << n)
        .map(|mask| {
            let c: Vec<u8> = (0..n).map(|v| (mask >> v & 1) as u8).collect();
            max_component(g, &c)
        })
        .min()
        .unwrap_or(0)
}

fn mc_oracle(seed: u64) -> Check {
    let mut r = rng(seed);
    let n = r.gen_range(1..=12);
    let p = r.gen_range(0.1..0.9);
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if r.gen_bool(p) {
                g.add_edge(u, v).map_err(|e| e.to_string())?;
            }
        }
    }
    let opt = mc_optimize(&g, 10_000_000).map_err(|e| e.to_string())?;
    let want = brute_force_optimum(&g).max(1);
    if !opt.exact || opt.k != want || max_component(&g, &opt.coloring) > opt.k {
        return fail(format!("n={n}: solver k={} exact={} oracle {want}", opt.k, opt.exact));
    }
    Ok(format!("n={n} k={want}"))
}

/// A random 2-colorable instance: resample until `hyper2color` succeeds.
fn colorable_hypergraph(seed: u64, max_edges: usize) -> Result<(islands_core::gadgets::Hypergraph3, Vec<u8>), String> {
    let mut r = rng(seed);
    for attempt in 0..100u64 {
        let n = r.gen_range(3..=12);
        let m = r.gen_range(1..=max_edges);
        let h = hypergraph3(n, m, seed.wrapping_mul(101).wrapping_add(attempt)).map_err(|e| e.to_string())?;
        if let Some(c) = hyper2color(&h).map_err(|e| e.to_string())? {
            return Ok((h, c));
        }
    }
    fail("no 2-colorable hypergraph drawn")
}

fn girth8(seed: u64) -> Check {
    let (h, hcol) = colorable_hypergraph(seed, 1)?;
    let g = reduce_girth8(&h, 2).map_err(|e| e.to_string())?;
    let c = forward_coloring_girth8(&h, &hcol, &g).map_err(|e| e.to_string())?;
    let worst = max_component(&g.graph, &c);
    let girth = g.graph.girth();
    let (degeneracy, _) = g.graph.degeneracy_order();
    if worst > 2 || girth != Some(8) || degeneracy != 2 {
        return fail(format!("max component {worst}, girth {girth:?}, degeneracy {degeneracy}"));
    }
    Ok(format!("n={} m={} |V|={}", h.n, h.edges.len(), g.graph.n()))
}

fn planar_reduce(seed: u64) -> Check {
    let mut r = rng(seed);
    let n = r.gen_range(3..=6);
    let m = r.gen_range(1..=3);
    let h = hypergraph3(n, m, seed).map_err(|e| e.to_string())?;
    let g = reduce_planar(&h, 2).map_err(|e| format!("n={n} edges={:?}: {e}", h.edges))?;
    let chis = g
        .embedding
        .as_ref()
        .ok_or("no embedding")?
        .component_euler_characteristics()
        .map_err(|e| e.to_string())?;
    let girth = g.graph.girth();
    let (degeneracy, _) = g.graph.degeneracy_order();
    if chis.iter().any(|&c| c != 2) || girth.is_some_and(|x| x < 4) || degeneracy != 2 {
        return fail(format!("chi {chis:?}, girth {girth:?}, degeneracy {degeneracy}"));
    }
    Ok(format!("n={n} m={m} |V|={} uncrossers={}", g.graph.n(), g.uncrossers))
}

fn instance_fn(name: &str) -> Option<fn(u64) -> Check> {
    Some(match name {
        "planar-A" => planar_a,
        "quad-B" => quad_b,
        "hex-C" => hex_c,
        "hex-torus" => hex_torus_suite,
        "four-sink" => four_sink,
        "torus-sink" => torus_sink,
        "charges" => charges,
        "mc-oracle" => mc_oracle,
        "girth8" => girth8,
        "planar-reduce" => planar_reduce,
        _ => return None,
    })
}

fn classify(seed: u64, index: usize, r: Check) -> InstanceResult {
    let (pass, detail) = match r {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    InstanceResult {
        index,
        seed,
        pass,
        detail,
        violation: None,
    }
}

pub fn suite_run(name: &str, seeds: &[u64]) -> Option<SuiteReport> {
    let f = instance_fn(name)?;
    let instances: Vec<InstanceResult> = seeds
        .par_iter()
        .enumerate()
        .map(|(i, &s)| {
            let r = std::panic::catch_unwind(|| f(s)).unwrap_or_else(|_| fail("panicked"));
            let mut res = classify(s, i, r);
            if !res.pass {
                res.violation = find_violation(name, s);
            }
            res
        })
        .collect();
    let failed: Vec<InstanceResult> = instances.iter().filter(|r| !r.pass).cloned().collect();
    Some(SuiteReport {
        name: name.to_string(),
        count: seeds.len(),
        passed: instances.len() - failed.len(),
        failed,
        instances,
    })
}

/// Re-runs the peeling of a failed peeling-suite instance and returns the
/// residual if the failure was a theorem violation.
fn find_violation(name: &str, seed: u64) -> Option<Box<islands_core::TheoremViolation>> {
    let mut r = rng(seed);
    let (e, regime, chi) = match name {
        "planar-A" | "four-sink" => (triangulation(r.gen_range(20..=500), seed).ok()?, Regime::A, 2),
        "quad-B" => (quadrangulation(r.gen_range(20..=500), seed).ok()?, Regime::B, 2),
        "hex-C" => {
            let (rows, cols) = (r.gen_range(3..=10), r.gen_range(3..=10));
            let deletions = r.gen_range(0..=rows * cols / 2);
            (hex_patch(rows, cols, deletions, seed).ok()?, Regime::C, 2)
        }
        "hex-torus" => (hex_torus(r.gen_range(3..=8), r.gen_range(3..=8)).ok()?, Regime::C, 0),
        "torus-sink" => (triangulated_torus(r.gen_range(3..=12), r.gen_range(3..=12)).ok()?, Regime::A, 0),
        _ => return None,
    };
    match islands_core::peel::peel(e.graph(), regime, chi) {
        Err(Error::TheoremViolation(v)) => Some(v),
        _ => None,
    }
}

pub fn run(cli: SuiteCli, ctx: &mut Ctx) -> CmdResult {
    let a = match cli.cmd {
        SuiteCmd::List => {
            for s in SUITES {
                ctx.say(s);
            }
            ctx.verdict(SUITES);
            return Ok(EXIT_OK);
        }
        SuiteCmd::Run(a) => a,
    };
    let seeds: Vec<u64> = match a.replay {
        Some(s) => vec![s],
        None => (0..a.count as u64).map(|i| a.seed.wrapping_add(i)).collect(),
    };
    let rep = ctx
        .timed("suite", || suite_run(&a.name, &seeds))
        .ok_or_else(|| Failure::Usage(format!("unknown suite {:?}; known: {}", a.name, SUITES.join(", "))))?;
    for r in &rep.failed {
        ctx.say(format!("FAIL seed={} {}", r.seed, r.detail));
    }
    ctx.say(format!("suite {}: {}/{} passed", rep.name, rep.passed, rep.count));
    let mut code = if rep.ok() { EXIT_OK } else { EXIT_NO };
    let mut dumps = Vec::new();
    for r in &rep.failed {
        if let Some(v) = &r.violation {
            let path = dump_violation(ctx, &a.dump_dir, v)?;
            ctx.say(format!("theorem violation at seed {} dumped to {}", r.seed, path.display()));
            dumps.push(json!({ "seed": r.seed, "residual": path }));
            code = EXIT_VIOLATION;
        }
    }
    ctx.verdict(json!({ "suite": rep, "violations": dumps }));
    Ok(code)
}
