use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use islands_core::discharging::{charge_bounds_report, discharge};
use islands_core::embedding::{has_rotations, parse_embedding};
use islands_core::generators::{gen, GenSpec};
use islands_core::graph::parse_graph;
use islands_core::islands::{find_island, guarantee_threshold, is_island, IslandCheck};
use islands_core::peel::{
    audit, color_four_plus_sink, color_from_lists, coloring_to_text, parse_coloring, ListAssignment, PeelOptions,
};
use islands_core::{Embedding, Error, Graph, Regime};

use crate::report::{dump_violation, CmdResult, Ctx, Failure, EXIT_NO, EXIT_OK, EXIT_VIOLATION};

#[derive(Parser, Debug)]
#[command(name = "islands", about = "Bounded islands, island-peeling colorings and charge audits")]
pub struct IslandsCli {
    /// Print the run report as JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Log progress to stderr.
    #[arg(long, short, global = true)]
    pub verbose: bool,
    #[command(subcommand)]
    pub cmd: IslandsCmd,
}

#[derive(Subcommand, Debug)]
pub enum IslandsCmd {
    /// Search for a k-island of bounded size.
    Find(FindArgs),
    /// List-color by island peeling and audit the result.
    Color(ColorArgs),
    /// Check an island or a coloring given in files.
    Verify(VerifyArgs),
    /// Run the discharging rules with exact charges.
    Discharge(DischargeArgs),
    /// Generate an instance file.
    Gen(GenArgs),
}

#[derive(Args, Debug)]
pub struct FindArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub size: Option<usize>,
    /// Shorthand for the regime's (k, size).
    #[arg(long)]
    pub regime: Option<Regime>,
}

#[derive(Args, Debug)]
pub struct ColorArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, required_unless_present = "four_plus_sink")]
    pub lists: Option<PathBuf>,
    #[arg(long, default_value = "A")]
    pub regime: Regime,
    /// Euler characteristic; read from the rotation system when omitted.
    #[arg(long, allow_hyphen_values = true)]
    pub chi: Option<i64>,
    /// Colors 1 to 4 on islands and 5 on the base; ignores lists.
    #[arg(long)]
    pub four_plus_sink: bool,
    /// Regime C: islands of size at most 12 (planar, 2-edge-connected input).
    #[arg(long = "footnote-12")]
    pub small_islands: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Directory for counterexample dumps.
    #[arg(long, default_value = ".")]
    pub dump_dir: PathBuf,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// Space-separated vertex ids of a claimed island.
    #[arg(long, conflicts_with = "coloring", requires = "k")]
    pub island: Option<String>,
    #[arg(long)]
    pub k: Option<usize>,
    /// Coloring file of "v c" lines.
    #[arg(long, requires = "bound")]
    pub coloring: Option<PathBuf>,
    #[arg(long)]
    pub lists: Option<PathBuf>,
    /// Largest allowed monochromatic component.
    #[arg(long)]
    pub bound: Option<usize>,
}

#[derive(Args, Debug)]
pub struct DischargeArgs {
    #[arg(long)]
    pub embedding: PathBuf,
    #[arg(long)]
    pub regime: Regime,
    /// Print every transfer.
    #[arg(long)]
    pub log: bool,
    #[arg(long, default_value = ".")]
    pub dump_dir: PathBuf,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    /// triangulation | quadrangulation | hex_patch | hex_torus | triangulated_torus | hypergraph3 |
    /// k4 | icosahedron | cube
    #[arg(long)]
    pub family: String,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub rows: Option<usize>,
    #[arg(long)]
    pub cols: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub deletions: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(cli: IslandsCli, ctx: &mut Ctx) -> CmdResult {
    match cli.cmd {
        IslandsCmd::Find(a) => find(a, ctx),
        IslandsCmd::Color(a) => color(a, ctx),
        IslandsCmd::Verify(a) => verify(a, ctx),
        IslandsCmd::Discharge(a) => discharge_cmd(a, ctx),
        IslandsCmd::Gen(a) => gen_cmd(a, ctx),
    }
}

/// Reads a graph file; a rotation section, if present, is parsed too.
pub fn load(ctx: &mut Ctx, path: &Path) -> Result<(Graph, Option<Embedding>), Failure> {
    let text = ctx.read(path)?;
    if has_rotations(&text) {
        let e = parse_embedding(&text)?;
        Ok((e.graph().clone(), Some(e)))
    } else {
        Ok((parse_graph(&text)?, None))
    }
}

fn chi_of(chi: Option<i64>, e: Option<&Embedding>) -> Result<i64, Failure> {
    match (chi, e) {
        (Some(c), _) => Ok(c),
        (None, Some(e)) => Ok(e.euler_characteristic()?),
        (None, None) => Err(Failure::Usage(
            "--chi is required when the graph file has no rotation system".into(),
        )),
    }
}

fn find(a: FindArgs, ctx: &mut Ctx) -> CmdResult {
    let (k, s) = match (a.regime, a.k, a.size) {
        (_, Some(k), Some(s)) => (k, s),
        (Some(r), None, None) => (r.k(), r.size()),
        _ => return Err(Failure::Usage("give --regime or both --k and --size".into())),
    };
    let (g, _) = load(ctx, &a.graph)?;
    let w = ctx.timed("find", || find_island(&g, k, s));
    ctx.verdict(json!({ "k": k, "size": s, "island": w }));
    match w {
        Some(w) => {
            ctx.say(w.to_string());
            Ok(EXIT_OK)
        }
        None => {
            ctx.say(format!("no {k}-island of size <= {s}"));
            Ok(EXIT_NO)
        }
    }
}

fn report_violation(ctx: &mut Ctx, dir: &Path, e: Error) -> CmdResult {
    match e {
        Error::TheoremViolation(v) => {
            let path = dump_violation(ctx, dir, &v)?;
            ctx.say(v.to_string());
            ctx.say(format!("residual instance written to {}", path.display()));
            ctx.verdict(json!({ "theorem_violation": v.to_string(), "residual": path }));
            Ok(EXIT_VIOLATION)
        }
        e => Err(e.into()),
    }
}

fn color(a: ColorArgs, ctx: &mut Ctx) -> CmdResult {
    let (g, e) = load(ctx, &a.graph)?;
    let chi = chi_of(a.chi, e.as_ref())?;
    let threshold = guarantee_threshold(a.regime, chi);
    let lists = match (&a.lists, a.four_plus_sink) {
        (Some(path), false) => {
            let text = ctx.read(path)?;
            Some(ListAssignment::parse(&text, g.n())?)
        }
        _ => None,
    };
    let outcome = match &lists {
        None => ctx.timed("color", || color_four_plus_sink(&g, chi)),
        Some(lists) => {
            let opts = PeelOptions {
                small_islands: a.small_islands,
            };
            ctx.timed("color", || color_from_lists(&g, lists, a.regime, chi, opts))
        }
    };
    let outcome = match outcome {
        Ok(o) => o,
        Err(e) => return report_violation(ctx, &a.dump_dir, e),
    };
    let (island_bound, sink_bound) = if a.four_plus_sink {
        (3, 3.max(guarantee_threshold(Regime::A, chi)) as usize)
    } else {
        let b = (a.regime.size() as i64).max(threshold) as usize;
        (b, b)
    };
    let rep = audit(&g, lists.as_ref(), &outcome.coloring, sink_bound.max(island_bound))?;
    let ok = if a.four_plus_sink {
        rep.max_over(1..=4) <= island_bound && rep.max_over([5]) <= sink_bound
    } else {
        rep.max_component <= island_bound && rep.list_violations.is_empty()
    };
    if let Some(out) = &a.out {
        ctx.write(out, &coloring_to_text(&outcome.coloring))?;
    }
    ctx.say(format!(
        "layers: {} ; base: {} ; max component: {} ; list violations: {} ; bound: {}",
        outcome.decomposition.layers.len(),
        outcome.decomposition.base.len(),
        rep.max_component,
        rep.list_violations.len(),
        island_bound
    ));
    if a.four_plus_sink {
        ctx.say(format!(
            "colors 1-4 max component: {} ; color 5 max component: {}",
            rep.max_over(1..=4),
            rep.max_over([5])
        ));
    }
    ctx.verdict(json!({
        "chi": chi,
        "pass": ok,
        "layers": outcome.decomposition.layers.len(),
        "base": outcome.decomposition.base.len(),
        "fallbacks": outcome.decomposition.fallbacks,
        "audit": rep,
    }));
    Ok(if ok { EXIT_OK } else { EXIT_NO })
}

fn parse_ids(text: &str) -> Result<Vec<usize>, Failure> {
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| Failure::Usage(format!("bad vertex id {t:?}"))))
        .collect()
}

fn verify(a: VerifyArgs, ctx: &mut Ctx) -> CmdResult {
    let (g, _) = load(ctx, &a.graph)?;
    if let Some(island) = &a.island {
        let mut x = parse_ids(island)?;
        x.sort_unstable();
        x.dedup();
        let k = a.k.expect("clap enforces --k");
        let check = is_island(&g, &x, k)?;
        let ok = matches!(check, IslandCheck::Island(_));
        ctx.say(match &check {
            IslandCheck::Island(w) => w.to_string(),
            other => format!("not a {k}-island: {other:?}"),
        });
        ctx.verdict(json!({ "island": ok }));
        return Ok(if ok { EXIT_OK } else { EXIT_NO });
    }
    let Some(path) = &a.coloring else {
        return Err(Failure::Usage("give --island or --coloring".into()));
    };
    let text = ctx.read(path)?;
    let c = parse_coloring(&text, g.n())?;
    let lists = match &a.lists {
        Some(p) => {
            let t = ctx.read(p)?;
            Some(ListAssignment::parse(&t, g.n())?)
        }
        None => None,
    };
    let bound = a.bound.expect("clap enforces --bound");
    let rep = audit(&g, lists.as_ref(), &c, bound)?;
    let ok = rep.oversized.is_empty() && rep.list_violations.is_empty();
    ctx.say(format!(
        "max component: {} ; oversized: {} ; list violations: {}",
        rep.max_component,
        rep.oversized.len(),
        rep.list_violations.len()
    ));
    ctx.verdict(json!({ "pass": ok, "audit": rep }));
    Ok(if ok { EXIT_OK } else { EXIT_NO })
}

fn discharge_cmd(a: DischargeArgs, ctx: &mut Ctx) -> CmdResult {
    let text = ctx.read(&a.embedding)?;
    if !has_rotations(&text) {
        return Err(Failure::Usage(format!("{} has no rotation system", a.embedding.display())));
    }
    let e = parse_embedding(&text)?;
    let state = match ctx.timed("discharge", || discharge(&e, a.regime)) {
        Ok(s) => s,
        Err(Error::IdentityViolation(msg)) => {
            ctx.say(format!("charge identity violated: {msg}"));
            ctx.verdict(json!({ "identity_violation": msg }));
            return Ok(EXIT_NO);
        }
        Err(e) => return Err(e.into()),
    };
    if a.log {
        ctx.say(state.log_text());
    }
    let bounds = ctx.timed("bounds", || charge_bounds_report(&state, e.graph()));
    ctx.say(format!(
        "regime {} ; chi {} ; total {} ; transfers {} ; below bound {} ; contradiction {}",
        a.regime,
        state.chi,
        state.total(),
        state.transfer_log.len(),
        bounds.entries.len(),
        bounds.contradiction
    ));
    ctx.verdict(json!({
        "chi": state.chi,
        "total": state.total(),
        "transfers": state.transfer_log.len(),
        "bounds": bounds,
    }));
    if bounds.contradiction {
        let v = islands_core::TheoremViolation {
            k: a.regime.k(),
            size: a.regime.size(),
            threshold: guarantee_threshold(a.regime, state.chi),
            vertices: (0..e.graph().n()).collect(),
            residual: e.graph().clone(),
        };
        return report_violation(ctx, &a.dump_dir, Error::TheoremViolation(Box::new(v)));
    }
    Ok(EXIT_OK)
}

fn need(name: &str, v: Option<usize>) -> Result<usize, Failure> {
    v.ok_or_else(|| Failure::Usage(format!("--{name} is required for this family")))
}

pub fn gen_spec(a: &GenArgs) -> Result<GenSpec, Failure> {
    let seed = a.seed;
    Ok(match a.family.as_str() {
        "triangulation" => GenSpec::Triangulation { n: need("n", a.n)?, seed },
        "quadrangulation" => GenSpec::Quadrangulation { n: need("n", a.n)?, seed },
        "hex_patch" => GenSpec::HexPatch {
            rows: need("rows", a.rows)?,
            cols: need("cols", a.cols)?,
            deletions: a.deletions,
            seed,
        },
        "hex_torus" => GenSpec::HexTorus {
            rows: need("rows", a.rows)?,
            cols: need("cols", a.cols)?,
        },
        "triangulated_torus" => GenSpec::TriangulatedTorus {
            rows: need("rows", a.rows)?,
            cols: need("cols", a.cols)?,
        },
        "hypergraph3" => GenSpec::Hypergraph3 {
            n: need("n", a.n)?,
            m: need("m", a.m)?,
            seed,
        },
        "k4" => GenSpec::K4,
        "icosahedron" => GenSpec::Icosahedron,
        "cube" => GenSpec::Cube,
        other => return Err(Failure::Usage(format!("unknown family {other:?}"))),
    })
}

fn gen_cmd(a: GenArgs, ctx: &mut Ctx) -> CmdResult {
    let spec = gen_spec(&a)?;
    let out = ctx.timed("gen", || gen(&spec))?;
    ctx.write(&a.out, &out.to_text())?;
    ctx.say(format!("wrote {}", a.out.display()));
    ctx.verdict(json!({ "spec": spec }));
    Ok(EXIT_OK)
}
