//! `hctk`: command-line front end for partial cubes and hypercellular graphs.
//!
//! Every command except `generate` (without `--json`) and the `--dot` variants
//! prints one JSON object `{command, status, payload}` with sorted keys.
//! Exit code 0 means ok, 1 a violated property, 2 an input or usage error.

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use hctk::analysis::{
    caratheodory_number, classify_graph, fixed_cell_of_map, helly_number, pasch_check, peano_check,
    radon_number, z_infinity, GraphMap,
};
use hctk::cells::{cell_complex, Factor};
use hctk::genlib::{self, RandomSpec};
use hctk::median::median_cell;
use hctk::minors::{is_hypercellular, pc_minor_witness, q3_minus};
use hctk::structure::{decompose, verify_tree};
use hctk::{recognize_partial_cube, Graph, PartialCube, VertexSet};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "hctk", version, about = "Partial cubes, cells and hypercellular graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Djoković–Winkler recognition with coordinates or a rejection certificate.
    Recognize { file: PathBuf },
    /// Membership in the hypercellular, cellular, median and Polat classes.
    Classify { file: PathBuf },
    /// The cells of a partial cube with their factor signatures.
    Cells {
        file: PathBuf,
        /// Only inclusion-maximal cells.
        #[arg(long)]
        maximal: bool,
    },
    /// Gated-amalgam decomposition tree of a hypercellular graph.
    Decompose {
        file: PathBuf,
        /// Print the tree as DOT instead of JSON.
        #[arg(long)]
        dot: bool,
    },
    /// Quasi-median, median cell and gates of a vertex triple.
    Median { file: PathBuf, u: usize, v: usize, w: usize },
    /// Z-infinity, or the invariant cell of a non-expansive map.
    FixedCell {
        file: PathBuf,
        /// Map file with lines `i f(i)`.
        #[arg(long)]
        map: Option<PathBuf>,
        /// Comma-separated vertex set stabilized by the map; defaults to its periodic points.
        #[arg(long, value_delimiter = ',', requires = "map")]
        fixedset: Option<Vec<usize>>,
    },
    /// Search for a pc-minor isomorphic to the target.
    Minors {
        file: PathBuf,
        /// `q3minus` or a graph file.
        #[arg(long)]
        target: String,
    },
    /// Helly, Carathéodory and Radon numbers, Pasch and Peano axioms. All when no flag is given.
    Invariants {
        file: PathBuf,
        #[arg(long)]
        helly: bool,
        #[arg(long)]
        caratheodory: bool,
        #[arg(long)]
        radon: bool,
        #[arg(long)]
        pasch: bool,
        #[arg(long)]
        peano: bool,
    },
    /// Emit a generated graph: `product C6 K2`, `named Q3_minus`, `subdivision 4`,
    /// `half-expanded 3 2`, `random BUDGET --seed N`, `catalog LAMBDA INDEX`.
    Generate {
        #[arg(required = true, num_args = 1..)]
        spec: Vec<String>,
        #[arg(long)]
        seed: Option<u64>,
        /// Longest cycle factor for `random`.
        #[arg(long, default_value_t = 8)]
        max_factor: usize,
        /// Vertex cap for `random`.
        #[arg(long, default_value_t = 150)]
        max_vertices: usize,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
        /// Print a JSON result with the generator spec and maximal-cell census.
        #[arg(long, conflicts_with = "dot")]
        json: bool,
        /// Print the graph as DOT instead of the text format.
        #[arg(long)]
        dot: bool,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Recognize { .. } => "recognize",
            Command::Classify { .. } => "classify",
            Command::Cells { .. } => "cells",
            Command::Decompose { .. } => "decompose",
            Command::Median { .. } => "median",
            Command::FixedCell { .. } => "fixed-cell",
            Command::Minors { .. } => "minors",
            Command::Invariants { .. } => "invariants",
            Command::Generate { .. } => "generate",
        }
    }
}

enum Output {
    Ok(Value),
    Violation(Value),
    Text(String),
}

fn read_graph(path: &Path) -> Result<Graph> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    Graph::parse(&text).with_context(|| format!("{}", path.display()))
}

fn read_cube(path: &Path) -> Result<PartialCube> {
    let g = read_graph(path)?;
    recognize_partial_cube(&g).map_err(|r| anyhow!("{} is not a partial cube: {r}", path.display()))
}

fn bits(pc: &PartialCube, v: usize) -> String {
    (0..pc.num_classes())
        .map(|f| if pc.sign(v, f).is_plus() { '1' } else { '0' })
        .collect()
}

fn merge(mut base: Value, extra: Value) -> Value {
    if let (Value::Object(b), Value::Object(e)) = (&mut base, extra) {
        b.extend(e);
    }
    base
}

fn recognize(file: &Path) -> Result<Output> {
    let g = read_graph(file)?;
    Ok(match recognize_partial_cube(&g) {
        Ok(pc) => Output::Ok(json!({
            "partial_cube": true,
            "n": pc.n(),
            "m": pc.graph().m(),
            "lambda": pc.num_classes(),
            "theta_classes": pc.class_edge_pairs(),
            "coordinates": (0..pc.n()).map(|v| bits(&pc, v)).collect::<Vec<_>>(),
        })),
        Err(r) => Output::Violation(merge(json!({"partial_cube": false}), serde_json::to_value(r)?)),
    })
}

fn cells(file: &Path, maximal: bool) -> Result<Output> {
    let pc = read_cube(file)?;
    let cx = cell_complex(&pc);
    let list: Vec<Value> = if maximal {
        cx.maximal_cells().map(serde_json::to_value).collect::<Result<_, _>>()?
    } else {
        cx.cells().iter().map(serde_json::to_value).collect::<Result<_, _>>()?
    };
    Ok(Output::Ok(json!({
        "count": list.len(),
        "dimension": cx.dimension(),
        "maximal_only": maximal,
        "cells": list,
    })))
}

fn decomposition(file: &Path, dot: bool) -> Result<Output> {
    let pc = read_cube(file)?;
    if let Err(v) = is_hypercellular(&pc) {
        return Ok(Output::Violation(json!({"hypercellular": false, "violation": v})));
    }
    let tree = decompose(&pc)?;
    if dot {
        return Ok(Output::Text(tree.to_dot()));
    }
    Ok(Output::Ok(json!({
        "hypercellular": true,
        "leaves": tree.leaf_count(),
        "nodes": tree.node_count(),
        "verified": verify_tree(&pc, &tree)?,
        "tree": tree,
    })))
}

fn median(file: &Path, u: usize, v: usize, w: usize) -> Result<Output> {
    let pc = read_cube(file)?;
    Ok(match median_cell(&pc, u, v, w)? {
        Ok(m) => Output::Ok(json!({
            "quasi_median": [m.triangle.x, m.triangle.y, m.triangle.z],
            "metric_triangle": m.triangle.is_metric_triangle(&pc),
            "median_cell": m.cell,
            "gates": m.gates,
        })),
        Err(e) => Output::Violation(json!({"no_median_cell": e})),
    })
}

fn read_map(path: &Path, n: usize) -> Result<Vec<usize>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let mut map = vec![None; n];
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let at = || format!("{}: line {}", path.display(), i + 1);
        let nums: Vec<usize> = line
            .split_whitespace()
            .map(|t| t.parse::<usize>())
            .collect::<Result<_, _>>()
            .with_context(at)?;
        let [x, y] = nums[..] else {
            bail!("{}: expected `i f(i)`", at());
        };
        if x >= n || y >= n {
            bail!("{}: vertex out of range 0..{n}", at());
        }
        if map[x].replace(y).is_some() {
            bail!("{}: vertex {x} mapped twice", at());
        }
    }
    map.into_iter()
        .enumerate()
        .map(|(i, y)| y.ok_or_else(|| anyhow!("{}: no image for vertex {i}", path.display())))
        .collect()
}

fn fixed_cell(file: &Path, map: Option<&Path>, fixedset: Option<Vec<usize>>) -> Result<Output> {
    let pc = read_cube(file)?;
    let Some(map_path) = map else {
        return Ok(Output::Ok(json!({"source": "z_infinity", "cell": z_infinity(&pc)?})));
    };
    let f = GraphMap::new(pc.graph(), read_map(map_path, pc.n())?)?;
    if !f.is_nonexpansive {
        bail!("{}: map is not non-expansive", map_path.display());
    }
    let s = match fixedset {
        Some(vs) => {
            if let Some(&bad) = vs.iter().find(|&&v| v >= pc.n()) {
                bail!("vertex {bad} out of range");
            }
            VertexSet::from_iter(pc.n(), vs)
        }
        None => f.periodic_points(),
    };
    let cell = fixed_cell_of_map(&pc, &f, &s)?;
    Ok(Output::Ok(json!({
        "source": "map",
        "automorphism": f.is_automorphism,
        "fixed_set": s.to_vec(),
        "cell": cell,
    })))
}

fn minors(file: &Path, target: &str) -> Result<Output> {
    let host = read_cube(file)?;
    let t = if target == "q3minus" { q3_minus() } else { read_cube(Path::new(target))? };
    Ok(match pc_minor_witness(&host, &t)? {
        Some(w) => Output::Violation(json!({"target": target, "found": true, "witness": w})),
        None => Output::Ok(json!({"target": target, "found": false})),
    })
}

fn invariants(file: &Path, mut flags: [bool; 5]) -> Result<Output> {
    let pc = read_cube(file)?;
    if !flags.iter().any(|&b| b) {
        flags = [true; 5];
    }
    let [h, c, r, pasch, peano] = flags;
    let mut out = serde_json::Map::new();
    if h {
        out.insert("helly".into(), helly_number(&pc)?.into());
    }
    if c {
        out.insert("caratheodory".into(), caratheodory_number(&pc)?.into());
    }
    if r {
        out.insert("radon".into(), radon_number(&pc)?.into());
    }
    let mut holds = true;
    for (on, key, check) in [(pasch, "pasch", pasch_check as fn(&PartialCube) -> _), (peano, "peano", peano_check)] {
        if on {
            let w = check(&pc)?;
            holds &= w.is_none();
            out.insert(key.into(), json!({"holds": w.is_none(), "witness": w}));
        }
    }
    let v = Value::Object(out);
    Ok(if holds { Output::Ok(v) } else { Output::Violation(v) })
}

fn parse_factor(s: &str) -> Result<Factor> {
    match s {
        "K2" | "E" | "edge" => Ok(Factor::Edge),
        _ => s
            .strip_prefix('C')
            .and_then(|n| n.parse().ok())
            .map(Factor::Cycle)
            .ok_or_else(|| anyhow!("unknown factor {s:?}; use K2 or C<even length>")),
    }
}

fn num(args: &[String], i: usize, what: &str) -> Result<usize> {
    args.get(i)
        .ok_or_else(|| anyhow!("missing {what}"))?
        .parse()
        .with_context(|| format!("{what} must be a non-negative integer"))
}

struct GenOpts {
    seed: Option<u64>,
    max_factor: usize,
    max_vertices: usize,
    output: Option<PathBuf>,
    json: bool,
    dot: bool,
}

fn generate(spec: &[String], o: GenOpts) -> Result<Output> {
    let kind = spec[0].as_str();
    let args = &spec[1..];
    let mut extra = json!({});
    let (graph, census) = match kind {
        "product" => {
            let fs = args.iter().map(|a| parse_factor(a)).collect::<Result<Vec<_>>>()?;
            (genlib::product(&fs)?.graph().clone(), None)
        }
        // Named graphs need not be partial cubes (`K2,3`, `C5`).
        "named" => (genlib::named_graph(args.first().ok_or_else(|| anyhow!("missing name"))?)?, None),
        "subdivision" => {
            let m = genlib::full_subdivision(num(args, 0, "m")?)?;
            extra = json!({"marked": m.marked});
            (m.cube.graph().clone(), None)
        }
        "half-expanded" => {
            let pc = genlib::half_expanded_cycle(num(args, 0, "n")?, num(args, 1, "l")?)?;
            (pc.graph().clone(), None)
        }
        "random" => {
            let seed = o.seed.ok_or_else(|| anyhow!("random generation requires --seed"))?;
            let rs = RandomSpec {
                seed,
                cell_budget: num(args, 0, "cell budget")?,
                max_factor: o.max_factor,
                max_vertices: o.max_vertices,
            };
            let g = genlib::random_hypercellular(&rs)?;
            (g.cube.graph().clone(), Some(g.census))
        }
        "catalog" => {
            let all = genlib::catalog_small(num(args, 0, "lambda")?)?;
            let i = num(args, 1, "index")?;
            let count = all.len();
            extra = json!({"catalog_size": count});
            let pc = all.into_iter().nth(i).ok_or_else(|| anyhow!("catalog index {i} out of range 0..{count}"))?;
            (pc.graph().clone(), None)
        }
        _ => bail!("unknown generator {kind:?}"),
    };
    let text = if o.dot { graph.to_dot("G") } else { graph.to_text() };
    if let Some(path) = &o.output {
        std::fs::write(path, &text).with_context(|| format!("cannot write {}", path.display()))?;
    }
    if !o.json {
        return Ok(Output::Text(if o.output.is_some() { String::new() } else { text }));
    }
    let census = census.or_else(|| {
        let pc = recognize_partial_cube(&graph).ok()?;
        is_hypercellular(&pc).ok()?;
        let mut c: Vec<Vec<String>> = cell_complex(&pc).maximal_cells().map(|c| c.signature()).collect();
        c.sort();
        Some(c)
    });
    Ok(Output::Ok(merge(
        json!({
            "spec": {"kind": kind, "args": args, "seed": o.seed},
            "n": graph.n(),
            "m": graph.m(),
            "graph": text,
            "census": census,
        }),
        extra,
    )))
}

fn run(cmd: Command) -> Result<Output> {
    match cmd {
        Command::Recognize { file } => recognize(&file),
        Command::Classify { file } => {
            let c = classify_graph(&read_graph(&file)?);
            Ok(Output::Ok(serde_json::to_value(c)?))
        }
        Command::Cells { file, maximal } => cells(&file, maximal),
        Command::Decompose { file, dot } => decomposition(&file, dot),
        Command::Median { file, u, v, w } => median(&file, u, v, w),
        Command::FixedCell { file, map, fixedset } => fixed_cell(&file, map.as_deref(), fixedset),
        Command::Minors { file, target } => minors(&file, &target),
        Command::Invariants {
            file,
            helly,
            caratheodory,
            radon,
            pasch,
            peano,
        } => invariants(&file, [helly, caratheodory, radon, pasch, peano]),
        Command::Generate {
            spec,
            seed,
            max_factor,
            max_vertices,
            output,
            json,
            dot,
        } => generate(
            &spec,
            GenOpts {
                seed,
                max_factor,
                max_vertices,
                output,
                json,
                dot,
            },
        ),
    }
}

fn envelope(command: &str, status: &str, payload: Value) -> String {
    let v = json!({"command": command, "status": status, "payload": payload});
    serde_json::to_string_pretty(&v).expect("json") + "\n"
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = cli.command.name();
    let (text, code) = match run(cli.command) {
        Ok(Output::Ok(p)) => (envelope(name, "ok", p), 0),
        Ok(Output::Violation(p)) => (envelope(name, "violation", p), 1),
        Ok(Output::Text(t)) => (t, 0),
        Err(e) => (envelope(name, "error", json!({"message": format!("{e:#}")})), 2),
    };
    print!("{text}");
    ExitCode::from(code)
}
