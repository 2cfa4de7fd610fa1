use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use islands_core::gadgets::{
    build_equalizer, build_j, build_n, build_tree, build_uncrosser, forward_coloring_girth8, hyper2color,
    reduce_girth8, reduce_planar, validate_uncrosser, GadgetGraph, Hypergraph3,
};
use islands_core::graph::parse_terminals;
use islands_core::mc::{mc_decide, mc_local_search, mc_optimize, Verdict};
use islands_core::peel::coloring_to_text;

use crate::islands_cmd::load;
use crate::report::{CmdResult, Ctx, Failure, EXIT_NO, EXIT_OK};

#[derive(Parser, Debug)]
#[command(name = "mc", about = "MC(k)-coloring solver, gadgets and reductions")]
pub struct McCli {
    /// Print the run report as JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Log progress to stderr.
    #[arg(long, short, global = true)]
    pub verbose: bool,
    #[command(subcommand)]
    pub cmd: McCmd,
}

#[derive(Subcommand, Debug)]
pub enum McCmd {
    /// Decide, optimize or heuristically search MC(k)-colorings.
    Solve(SolveArgs),
    /// Build a gadget graph.
    Gadget(GadgetArgs),
    /// Reduce a 3-uniform hypergraph to a graph.
    Reduce(ReduceArgs),
    /// Exact 2-coloring of a 3-uniform hypergraph.
    Hyper2color(Hyper2colorArgs),
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, required_unless_present = "optimize")]
    pub k: Option<usize>,
    /// `v=c` with `v` a vertex id or a terminal name and `c` in {0, 1}.
    #[arg(long = "pin")]
    pub pins: Vec<String>,
    #[arg(long, default_value_t = 10_000_000)]
    pub budget: u64,
    /// Smallest k with an MC(k)-coloring.
    #[arg(long, conflicts_with = "heuristic")]
    pub optimize: bool,
    /// Local search; never reports infeasibility.
    #[arg(long)]
    pub heuristic: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 100_000)]
    pub iterations: usize,
    /// Coloring output file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum GadgetType {
    Tree,
    #[value(name = "J")]
    J,
    #[value(name = "N")]
    N,
    Equalizer,
    Uncrosser,
}

#[derive(Args, Debug)]
pub struct GadgetArgs {
    #[arg(long = "type", value_enum)]
    pub kind: GadgetType,
    /// Branching parameter for tree and J.
    #[arg(long)]
    pub t: Option<usize>,
    /// Component bound for N, equalizer and uncrosser.
    #[arg(long)]
    pub k: Option<usize>,
    /// Uncrosser only: check its two properties with the exact solver.
    #[arg(long)]
    pub validate: bool,
    #[arg(long, default_value_t = 10_000_000)]
    pub budget: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum Variant {
    Girth8,
    Planar,
}

#[derive(Args, Debug)]
pub struct ReduceArgs {
    #[arg(long, value_enum)]
    pub variant: Variant,
    #[arg(long)]
    pub hypergraph: PathBuf,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Girth-8 variant: write the coloring induced by a hypergraph 2-coloring.
    #[arg(long)]
    pub coloring_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct Hyper2colorArgs {
    #[arg(long)]
    pub hypergraph: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(cli: McCli, ctx: &mut Ctx) -> CmdResult {
    match cli.cmd {
        McCmd::Solve(a) => solve(a, ctx),
        McCmd::Gadget(a) => gadget(a, ctx),
        McCmd::Reduce(a) => reduce(a, ctx),
        McCmd::Hyper2color(a) => hyper2color_cmd(a, ctx),
    }
}

fn parse_pin(spec: &str, terminals: &BTreeMap<String, usize>) -> Result<(usize, u8), Failure> {
    let bad = || Failure::Usage(format!("bad pin {spec:?}, expected v=c"));
    let (v, c) = spec.split_once('=').ok_or_else(bad)?;
    let c: u8 = c.trim().parse().map_err(|_| bad())?;
    let v = match v.trim().parse::<usize>() {
        Ok(id) => id,
        Err(_) => *terminals
            .get(v.trim())
            .ok_or_else(|| Failure::Usage(format!("no terminal named {v:?}")))?,
    };
    Ok((v, c))
}

fn widen(c: &[u8]) -> Vec<u32> {
    c.iter().map(|&x| x as u32).collect()
}

fn solve(a: SolveArgs, ctx: &mut Ctx) -> CmdResult {
    let (g, _) = load(ctx, &a.graph)?;
    let text = std::fs::read_to_string(&a.graph).unwrap_or_default();
    let terminals = parse_terminals(&text);
    let pins = a
        .pins
        .iter()
        .map(|p| parse_pin(p, &terminals))
        .collect::<Result<Vec<_>, _>>()?;
    if a.optimize {
        let opt = ctx.timed("solve", || mc_optimize(&g, a.budget))?;
        ctx.say(format!(
            "optimum k: {} ; exact: {} ; nodes explored: {}",
            opt.k, opt.exact, opt.nodes_explored
        ));
        if let Some(out) = &a.out {
            ctx.write(out, &coloring_to_text(&widen(&opt.coloring)))?;
        }
        ctx.verdict(&opt);
        return Ok(EXIT_OK);
    }
    let k = a.k.expect("clap enforces --k");
    if a.heuristic {
        if !pins.is_empty() {
            return Err(Failure::Usage("--heuristic does not take pins".into()));
        }
        let (c, rep) = ctx.timed("solve", || mc_local_search(&g, k, a.seed, a.iterations))?;
        let found = rep.max_component <= k;
        ctx.say(format!(
            "verdict: {} ; best max component: {}",
            if found { "yes" } else { "unknown" },
            rep.max_component
        ));
        if let Some(out) = &a.out {
            ctx.write(out, &coloring_to_text(&widen(&c)))?;
        }
        ctx.verdict(json!({ "found": found, "seed": a.seed, "max_component": rep.max_component }));
        return Ok(if found { EXIT_OK } else { EXIT_NO });
    }
    let res = ctx.timed("solve", || mc_decide(&g, k, &pins, a.budget))?;
    let word = match &res.verdict {
        Verdict::Yes(_) => "yes",
        Verdict::No => "no",
        Verdict::Inconclusive => "inconclusive",
    };
    ctx.say(format!("verdict: {word} ; nodes explored: {}", res.nodes_explored));
    if let (Verdict::Yes(c), Some(out)) = (&res.verdict, &a.out) {
        ctx.write(out, &coloring_to_text(&widen(c)))?;
    }
    let code = if matches!(res.verdict, Verdict::Yes(_)) { EXIT_OK } else { EXIT_NO };
    ctx.verdict(&res);
    Ok(code)
}

fn need(name: &str, v: Option<usize>) -> Result<usize, Failure> {
    v.ok_or_else(|| Failure::Usage(format!("--{name} is required for this gadget")))
}

fn describe(ctx: &mut Ctx, g: &GadgetGraph) -> serde_json::Value {
    let girth = g.graph.girth();
    let (degeneracy, _) = g.graph.degeneracy_order();
    // per connected component; a plane output has every entry equal to 2
    let chi = g.embedding.as_ref().and_then(|e| e.component_euler_characteristics().ok());
    ctx.say(format!(
        "vertices: {} ; edges: {} ; girth: {} ; degeneracy: {} ; bipartite: {}{}",
        g.graph.n(),
        g.graph.num_edges(),
        girth.map_or("inf".to_string(), |x| x.to_string()),
        degeneracy,
        g.graph.is_bipartite(),
        chi.as_ref().map_or(String::new(), |c| format!(" ; chi per component: {c:?}"))
    ));
    json!({
        "vertices": g.graph.n(),
        "edges": g.graph.num_edges(),
        "girth": girth,
        "degeneracy": degeneracy,
        "bipartite": g.graph.is_bipartite(),
        "chi": chi,
        "terminals": g.terminals,
    })
}

fn gadget(a: GadgetArgs, ctx: &mut Ctx) -> CmdResult {
    let g = match a.kind {
        GadgetType::Tree => build_tree(need("t", a.t)?),
        GadgetType::J => build_j(need("t", a.t)?),
        GadgetType::N => build_n(need("k", a.k)?),
        GadgetType::Equalizer => build_equalizer(need("k", a.k)?),
        GadgetType::Uncrosser => build_uncrosser(need("k", a.k)?),
    }?;
    if let Some(out) = &a.out {
        ctx.write(out, &g.to_text())?;
    }
    let mut info = describe(ctx, &g);
    let mut code = EXIT_OK;
    if a.validate {
        let GadgetType::Uncrosser = a.kind else {
            return Err(Failure::Usage("--validate applies to the uncrosser only".into()));
        };
        let k = need("k", a.k)?;
        let rep = ctx.timed("validate", || validate_uncrosser(&g, k, a.budget))?;
        ctx.say(format!(
            "transfer: {:?} ; equal witness: {} ; distinct witness: {} ; nodes explored: {}",
            rep.transfer,
            rep.witness_equal.is_some(),
            rep.witness_distinct.is_some(),
            rep.nodes_explored
        ));
        if !rep.passed() {
            code = EXIT_NO;
        }
        info["validation"] = json!({ "passed": rep.passed(), "report": rep });
    }
    ctx.verdict(info);
    Ok(code)
}

fn load_hypergraph(ctx: &mut Ctx, path: &Path) -> Result<Hypergraph3, Failure> {
    let text = ctx.read(path)?;
    Ok(Hypergraph3::parse(&text)?)
}

fn reduce(a: ReduceArgs, ctx: &mut Ctx) -> CmdResult {
    let h = load_hypergraph(ctx, &a.hypergraph)?;
    let g = match a.variant {
        Variant::Girth8 => ctx.timed("reduce", || reduce_girth8(&h, a.k)),
        Variant::Planar => ctx.timed("reduce", || reduce_planar(&h, a.k)),
    }?;
    if let Some(out) = &a.out {
        ctx.write(out, &g.to_text())?;
    }
    let mut info = describe(ctx, &g);
    info["uncrossers"] = json!(g.uncrossers);
    if let Some(path) = &a.coloring_out {
        let Variant::Girth8 = a.variant else {
            return Err(Failure::Usage("--coloring-out applies to the girth8 variant".into()));
        };
        match hyper2color(&h)? {
            Some(hcol) => {
                let c = forward_coloring_girth8(&h, &hcol, &g)?;
                ctx.write(path, &coloring_to_text(&widen(&c)))?;
            }
            None => {
                ctx.say("hypergraph is not 2-colorable; no coloring written");
                ctx.verdict(info);
                return Ok(EXIT_NO);
            }
        }
    }
    ctx.verdict(info);
    Ok(EXIT_OK)
}

fn hyper2color_cmd(a: Hyper2colorArgs, ctx: &mut Ctx) -> CmdResult {
    let h = load_hypergraph(ctx, &a.hypergraph)?;
    let col = ctx.timed("hyper2color", || hyper2color(&h))?;
    ctx.verdict(json!({ "coloring": col }));
    match col {
        Some(c) => {
            ctx.say("2-colorable");
            if let Some(out) = &a.out {
                ctx.write(out, &coloring_to_text(&widen(&c)))?;
            }
            Ok(EXIT_OK)
        }
        None => {
            ctx.say("not 2-colorable");
            Ok(EXIT_NO)
        }
    }
}
