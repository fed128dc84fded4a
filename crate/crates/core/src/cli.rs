//! The `ctm` command line. Every command prints one JSON envelope on
//! stdout (or CSV rows where asked); verification commands also print one
//! PASS/FAIL line per check on stderr.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 bad input.

use std::io::{Read, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::colored_graph::{enumerate_graphs, ColoredGraph, GraphKey, MarkedKey, Vertex};
use crate::contraction::{contract, edge_cut, Edge};
use crate::error::{Error, Result};
use crate::flow::{self, FlowConvention, FlowState, Seed};
use crate::hopf::{self, Admissibility, HopfAlgebra, HopfElement, HopfMonomial};
use crate::json::{self as js, envelope};
use crate::poly::rat;
use crate::schwinger_dyson::{self as sd, ConstraintOperator, SdForm};
use crate::tensor_eval::gaussian_moment_bruteforce;
use crate::wick_series::moment_polynomial_of_graphs;

#[derive(Parser, Debug)]
#[command(name = "ctm", version, about = "Exact combinatorics of colored tensor models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Graph enumeration and canonical keys.
    #[command(subcommand)]
    Graphs(GraphsCmd),
    /// Exact Gaussian moment of a product of traces.
    Moments(MomentsArgs),
    /// Contract a white vertex with a black vertex.
    Contract(ContractArgs),
    /// Cut edges and close them with a new pair of vertices.
    Cut(CutArgs),
    /// Schwinger-Dyson constraints.
    #[command(subcommand)]
    Sd(SdCmd),
    /// Hopf algebra of marked graphs.
    #[command(subcommand)]
    Hopf(HopfCmd),
    /// Coupling flow.
    #[command(subcommand)]
    Flow(FlowCmd),
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct Input {
    /// JSON file, or `-` for stdin.
    #[arg(long, short)]
    input: Option<String>,
    /// Inline JSON or canonical key.
    #[arg(long)]
    graph: Option<String>,
}

#[derive(Subcommand, Debug)]
enum GraphsCmd {
    /// All graphs up to isomorphism.
    Enumerate {
        #[arg(long = "D")]
        d: usize,
        #[arg(long)]
        max_vertices: usize,
        #[arg(long)]
        connected: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Canonical key and automorphism count of one graph.
    Canonical {
        #[command(flatten)]
        input: Input,
    },
}

#[derive(Args, Debug)]
struct MomentsArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long = "N")]
    n: Option<u64>,
    /// Cross-check against the pairing brute force.
    #[arg(long)]
    check: bool,
}

#[derive(Args, Debug)]
struct ContractArgs {
    #[command(flatten)]
    input: Input,
    /// 1-based white vertex.
    #[arg(long)]
    white: usize,
    /// 1-based black vertex.
    #[arg(long)]
    black: usize,
}

#[derive(Args, Debug)]
struct CutArgs {
    #[command(flatten)]
    input: Input,
    /// Edges as `white:color` pairs, 1-based, comma separated.
    #[arg(long, default_value = "")]
    edges: String,
}

#[derive(Subcommand, Debug)]
enum SdCmd {
    /// Check constraints against the generating series.
    Verify {
        #[arg(long = "D")]
        d: usize,
        #[arg(long)]
        max_order: usize,
        /// Restrict to one graph (canonical key).
        #[arg(long)]
        graph: Option<String>,
        /// 1-based black vertex of `--graph`.
        #[arg(long)]
        vertex: Option<usize>,
        /// `z` (default) or `w`.
        #[arg(long, default_value = "z")]
        convention: String,
    },
    /// Structure constants of `[L_a, L_b]`.
    Bracket {
        /// Marked key, or a marked graph JSON.
        #[arg(long)]
        a: Option<String>,
        #[arg(long)]
        b: Option<String>,
        /// `D = 2` necklace lengths `m,n`.
        #[arg(long)]
        necklaces: Option<String>,
        /// Also solve for the bracket on traces up to this many vertices.
        #[arg(long)]
        max_order: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
enum HopfCmd {
    Coproduct(HopfArgs),
    Antipode(HopfArgs),
    /// `[δ_a, δ_b]` next to the Schwinger-Dyson bracket.
    Bracket {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, default_value = "")]
        convention: String,
    },
}

#[derive(Args, Debug)]
struct HopfArgs {
    #[command(flatten)]
    input: Input,
    /// Comma-separated: `single-vertices`, `complement`.
    #[arg(long, default_value = "")]
    convention: String,
}

#[derive(Subcommand, Debug)]
enum FlowCmd {
    /// Exact flow identity for the Wick effective action.
    Verify {
        #[arg(long = "D")]
        d: usize,
        #[arg(long)]
        max_order: usize,
        /// Seed JSON; defaults to a single quartic coupling.
        #[arg(long)]
        seed: Option<String>,
        /// Comma-separated: `no-k0`, `plus`, `half`, `double`.
        #[arg(long, default_value = "")]
        convention: String,
    },
    /// RK4 trajectory of the truncated flow.
    Integrate {
        #[arg(long = "D")]
        d: usize,
        #[arg(long = "N")]
        n: f64,
        #[arg(long)]
        t_end: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        seed: Option<String>,
        /// Graphs kept in the truncation; defaults to the largest seed graph.
        #[arg(long)]
        max_order: Option<usize>,
        #[arg(long, default_value = "")]
        convention: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

enum Outcome {
    Ok(Value),
    Csv(String),
    Failed(Value),
}

/// Runs the command line with process stdio.
pub fn run<I: IntoIterator<Item = String>>(args: I) -> i32 {
    let (mut out, mut err) = (std::io::stdout().lock(), std::io::stderr().lock());
    run_with(args, &mut out, &mut err)
}

pub fn run_with<I: IntoIterator<Item = String>>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    let name = command_name(&cli.command);
    match dispatch(cli.command, err) {
        Ok(Outcome::Ok(v)) => {
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&envelope(&name, v)).unwrap());
            0
        }
        Ok(Outcome::Csv(s)) => {
            let _ = write!(out, "{s}");
            0
        }
        Ok(Outcome::Failed(v)) => {
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&envelope(&name, v)).unwrap());
            1
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn command_name(c: &Command) -> String {
    match c {
        Command::Graphs(GraphsCmd::Enumerate { .. }) => "graphs enumerate",
        Command::Graphs(GraphsCmd::Canonical { .. }) => "graphs canonical",
        Command::Moments(_) => "moments",
        Command::Contract(_) => "contract",
        Command::Cut(_) => "cut",
        Command::Sd(SdCmd::Verify { .. }) => "sd verify",
        Command::Sd(SdCmd::Bracket { .. }) => "sd bracket",
        Command::Hopf(HopfCmd::Coproduct(_)) => "hopf coproduct",
        Command::Hopf(HopfCmd::Antipode(_)) => "hopf antipode",
        Command::Hopf(HopfCmd::Bracket { .. }) => "hopf bracket",
        Command::Flow(FlowCmd::Verify { .. }) => "flow verify",
        Command::Flow(FlowCmd::Integrate { .. }) => "flow integrate",
    }
    .to_string()
}

fn read_source(path: &str) -> Result<String> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Error::Input(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{path}: {e}")))
    }
}

/// Parses JSON; a bare hex string is accepted as a key.
fn parse_json(text: &str, origin: &str) -> Result<Value> {
    let t = text.trim();
    if !t.is_empty() && t.chars().all(|c| c.is_ascii_hexdigit()) {
        return Ok(Value::String(t.to_string()));
    }
    serde_json::from_str(t).map_err(|e| Error::Input(format!("{origin}: malformed JSON at line {}, column {}: {e}", e.line(), e.column())))
}

impl Input {
    fn value(&self) -> Result<Value> {
        match (&self.input, &self.graph) {
            (Some(p), None) => parse_json(&read_source(p)?, p),
            (None, Some(g)) => parse_json(g, "--graph"),
            _ => Err(Error::Input("give exactly one of --input or --graph".into())),
        }
    }

    fn graph(&self) -> Result<ColoredGraph> {
        let v = self.value()?;
        // A result envelope from a previous run is accepted as input.
        let v = v.get("result").cloned().unwrap_or(v);
        let v = v.get("graph").cloned().unwrap_or(v);
        js::graph_from_value(&v)
    }
}

fn dispatch(cmd: Command, err: &mut dyn Write) -> Result<Outcome> {
    match cmd {
        Command::Graphs(GraphsCmd::Enumerate { d, max_vertices, connected, format }) => {
            if d == 0 {
                return Err(Error::ZeroColors);
            }
            let keys = enumerate_graphs(d, max_vertices / 2, connected);
            if format == Format::Csv {
                let mut s = String::from("key,p,automorphisms\n");
                for k in &keys {
                    s += &format!("{},{},{}\n", k, k.p(), k.decode().automorphism_count());
                }
                return Ok(Outcome::Csv(s));
            }
            Ok(Outcome::Ok(Value::Array(keys.iter().map(|k| js::graph_to_value(&k.decode())).collect())))
        }
        Command::Graphs(GraphsCmd::Canonical { input }) => {
            let g = input.graph()?;
            Ok(Outcome::Ok(json!({
                "key": g.canonical_form().to_hex(),
                "automorphisms": g.automorphism_count(),
                "canonical": js::graph_to_value(&g.canonical_graph().with_loops(g.loops())),
            })))
        }
        Command::Moments(a) => {
            let v = a.input.value()?;
            let v = v.get("graphs").cloned().unwrap_or(v);
            let items = v.as_array().ok_or_else(|| Error::Input("moments: expected a list of graphs".into()))?;
            let graphs = items
                .iter()
                .enumerate()
                .map(|(i, x)| js::graph_from_value(x).map_err(|e| Error::Input(format!("graphs[{i}]: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            if let Some(g) = graphs.iter().find(|g| g.d() != graphs[0].d()) {
                return Err(Error::DimensionMismatch(graphs[0].d(), g.d()));
            }
            let poly = moment_polynomial_of_graphs(&graphs);
            let mut result = json!({"polynomial": poly.to_string()});
            if let Some(n) = a.n {
                let value = poly.eval_n(n as i64);
                result["N"] = n.into();
                result["value"] = value.to_string().into();
                if a.check {
                    let brute = gaussian_moment_bruteforce(&graphs, n)?;
                    let ok = value == crate::poly::Rational::from_integer(brute.clone());
                    let _ = writeln!(err, "{} moment N={n}: {value} vs brute force {brute}", if ok { "PASS" } else { "FAIL" });
                    if !ok {
                        return Ok(Outcome::Failed(result));
                    }
                }
            }
            Ok(Outcome::Ok(result))
        }
        Command::Contract(a) => {
            let g = a.input.graph()?;
            if a.white == 0 || a.black == 0 {
                return Err(Error::Input("vertex indices are 1-based".into()));
            }
            let r = contract(&g, a.white - 1, a.black - 1)?;
            let h = r.graph.clone().with_loops(g.loops() + r.new_loops);
            Ok(Outcome::Ok(json!({"graph": js::graph_to_value(&h), "new_loops": r.new_loops})))
        }
        Command::Cut(a) => {
            let g = a.input.graph()?;
            let edges = parse_edges(&a.edges)?;
            Ok(Outcome::Ok(js::graph_to_value(&edge_cut(&g, &edges)?)))
        }
        Command::Sd(SdCmd::Verify { d, max_order, graph, vertex, convention }) => sd_verify(d, max_order, graph, vertex, &convention, err),
        Command::Sd(SdCmd::Bracket { a, b, necklaces, max_order }) => sd_bracket(a, b, necklaces, max_order),
        Command::Hopf(HopfCmd::Coproduct(a)) => {
            let (mut alg, key) = hopf_input(&a)?;
            let cop = alg.coproduct(&key);
            let terms: Vec<Value> = cop
                .terms()
                .map(|(l, r, c)| json!({"left": hopf_monomial(l), "right": hopf_monomial(r), "coeff": c.to_string()}))
                .collect();
            Ok(Outcome::Ok(json!({"key": key.to_hex(), "terms": terms})))
        }
        Command::Hopf(HopfCmd::Antipode(a)) => {
            let (mut alg, key) = hopf_input(&a)?;
            let s = alg.antipode(&key)?;
            let (left, right) = alg.antipode_identities(&key)?;
            let ok = left.is_zero() && right.is_zero();
            let _ = writeln!(err, "{} antipode identities for {key}", if ok { "PASS" } else { "FAIL" });
            let result = json!({"key": key.to_hex(), "terms": hopf_element(&s)});
            Ok(if ok { Outcome::Ok(result) } else { Outcome::Failed(result) })
        }
        Command::Hopf(HopfCmd::Bracket { a, b, convention }) => {
            let mut alg = HopfAlgebra::new(parse_admissibility(&convention)?);
            let (ka, kb) = (marked_key(&a)?, marked_key(&b)?);
            if ka.d() != kb.d() {
                return Err(Error::DimensionMismatch(ka.d(), kb.d()));
            }
            let c = hopf::compare_brackets(&mut alg, &ka, &kb)?;
            let list = |xs: &[(MarkedKey, crate::poly::Rational)]| -> Value {
                Value::Array(xs.iter().map(|(k, v)| json!({"generator": k.to_hex(), "coeff": js::rational_to_value(v)})).collect())
            };
            Ok(Outcome::Ok(json!({
                "a": ka.to_hex(),
                "b": kb.to_hex(),
                "hopf": list(&c.hopf),
                "schwinger_dyson": list(&c.schwinger_dyson),
                "same_support": c.same_support,
            })))
        }
        Command::Flow(FlowCmd::Verify { d, max_order, seed, convention }) => {
            let seed = load_seed(d, seed.as_deref())?;
            let conv: FlowConvention = convention.parse()?;
            let report = flow::verify_flow(&seed, max_order, conv)?;
            for (m, r) in &report.residuals {
                let _ = writeln!(err, "FAIL {m}: residual {r}");
            }
            let _ = writeln!(
                err,
                "{} flow identity D={d} V_max={max_order} ({}): {} graphs checked, {} residuals",
                if report.is_zero() { "PASS" } else { "FAIL" },
                conv,
                report.checked,
                report.residuals.len()
            );
            let pair = |(m, p): &(crate::wick_series::Monomial, crate::poly::Poly)| json!({"graph": m.to_string(), "poly": p.to_string()});
            let result = json!({
                "convention": conv.to_string(),
                "checked": report.checked,
                "residuals": report.residuals.iter().map(pair).collect::<Vec<_>>(),
                "dropped": report.dropped.iter().map(pair).collect::<Vec<_>>(),
                "unchecked": report.unchecked.len(),
            });
            Ok(if report.is_zero() { Outcome::Ok(result) } else { Outcome::Failed(result) })
        }
        Command::Flow(FlowCmd::Integrate { d, n, t_end, steps, seed, max_order, convention, format }) => {
            let seed = load_seed(d, seed.as_deref())?;
            let conv: FlowConvention = convention.parse()?;
            let v_max = max_order.unwrap_or_else(|| seed.max_vertices().max(2));
            let state = FlowState::from_seed(&seed, n, v_max)?;
            let traj = flow::integrate_flow(&state, t_end, steps, conv)?;
            if let Some(e) = &traj.error {
                let _ = writeln!(err, "stopped early: {e}");
            }
            let key_of = |m: &crate::wick_series::Monomial| -> String { m.graph(d).canonical_form().to_hex() };
            if format == Format::Csv {
                let mut s = String::from("t,graph,value\n");
                for st in &traj.states {
                    for (m, v) in &st.values {
                        s += &format!("{},{},{}\n", st.t, key_of(m), v);
                    }
                }
                return Ok(Outcome::Csv(s));
            }
            let rows: Vec<Value> = traj
                .states
                .iter()
                .flat_map(|st| st.values.iter().map(move |(m, v)| (st.t, m, *v)))
                .map(|(t, m, v)| json!({"t": t, "graph": key_of(m), "value": v}))
                .collect();
            Ok(Outcome::Ok(json!({"rows": rows, "dropped_terms": traj.dropped_terms, "error": traj.error.map(|e| e.to_string())})))
        }
    }
}

fn parse_edges(s: &str) -> Result<Vec<Edge>> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|e| {
            let (w, c) = e.split_once(':').ok_or_else(|| Error::Input(format!("edge {e:?}: expected white:color")))?;
            let parse = |x: &str| -> Result<usize> {
                match x.trim().parse::<usize>() {
                    Ok(v) if v > 0 => Ok(v - 1),
                    _ => Err(Error::Input(format!("edge {e:?}: indices are positive integers"))),
                }
            };
            Ok(Edge { white: parse(w)?, color: parse(c)? })
        })
        .collect()
}

fn marked_key(s: &str) -> Result<MarkedKey> {
    Ok(js::marked_from_value(&parse_json(s, "marked graph")?)?.canonical_form())
}

fn parse_admissibility(s: &str) -> Result<Admissibility> {
    let mut a = Admissibility::default();
    for part in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        match part {
            "single-vertices" | "single" => a.single_vertices = true,
            "complement" => a.complement_of_mark = true,
            _ => return Err(Error::Input(format!("unknown Hopf convention switch {part:?}"))),
        }
    }
    Ok(a)
}

fn hopf_input(a: &HopfArgs) -> Result<(HopfAlgebra, MarkedKey)> {
    let v = a.input.value()?;
    let v = v.get("result").cloned().unwrap_or(v);
    // An unmarked graph is marked at its first white vertex.
    let marked = match js::marked_from_value(&v) {
        Ok(m) => m,
        Err(_) => crate::colored_graph::MarkedGraph::new(js::graph_from_value(&v)?, Vertex::White(0))?,
    };
    Ok((HopfAlgebra::new(parse_admissibility(&a.convention)?), marked.canonical_form()))
}

fn hopf_monomial(m: &HopfMonomial) -> Value {
    Value::Array(m.iter().map(|(k, e)| json!({"graph": k.to_hex(), "power": e})).collect())
}

fn hopf_element(x: &HopfElement) -> Value {
    Value::Array(x.terms().map(|(m, c)| json!({"monomial": hopf_monomial(m), "coeff": c.to_string()})).collect())
}

fn load_seed(d: usize, path: Option<&str>) -> Result<Seed> {
    let seed = match path {
        Some(p) => js::seed_from_value(&parse_json(&read_source(p)?, p)?)?,
        None => {
            // The single quartic interaction: the 2-necklace for D = 2, the
            // first connected two-white graph otherwise.
            let g = if d == 2 {
                ColoredGraph::necklace(2)
            } else {
                let k = crate::colored_graph::enumerate_graphs_of_size(d, 2, true)
                    .into_iter()
                    .next()
                    .ok_or_else(|| Error::Input(format!("no quartic graph for D = {d}")))?;
                k.decode()
            };
            Seed::new(d).with(&g, rat(1))?
        }
    };
    if seed.d != d {
        return Err(Error::DimensionMismatch(d, seed.d));
    }
    Ok(seed)
}

fn sd_verify(d: usize, max_order: usize, graph: Option<String>, vertex: Option<usize>, convention: &str, err: &mut dyn Write) -> Result<Outcome> {
    let form: SdForm = convention.parse()?;
    let ops: Vec<ConstraintOperator> = match graph {
        Some(k) => {
            let g = GraphKey::from_hex(k.trim())?.decode();
            if g.d() != d {
                return Err(Error::DimensionMismatch(d, g.d()));
            }
            match vertex {
                Some(0) => return Err(Error::Input("--vertex is 1-based".into())),
                Some(v) => vec![ConstraintOperator::new(&g, v - 1)?],
                None => sd::black_orbits(&g).into_iter().map(|v| ConstraintOperator::new(&g, v)).collect::<Result<_>>()?,
            }
        }
        None => sd::constraint_operators(d, max_order / 2),
    };
    let s = sd::generating_series(d, max_order, form);
    let mut rows = Vec::new();
    let mut all = true;
    for op in &ops {
        let r = sd::verify_with(op, &s)?;
        let ok = r.is_zero();
        all &= ok;
        let _ = writeln!(err, "{} {} ({} residual terms)", if ok { "PASS" } else { "FAIL" }, op, r.len());
        rows.push(json!({"constraint": op.key().to_hex(), "zero": ok, "residual": js::series_to_value(&r)}));
    }
    let result = json!({"form": format!("{form:?}"), "max_order": max_order, "constraints": rows});
    Ok(if all { Outcome::Ok(result) } else { Outcome::Failed(result) })
}

fn sd_bracket(a: Option<String>, b: Option<String>, necklaces: Option<String>, max_order: Option<usize>) -> Result<Outcome> {
    if let Some(s) = necklaces {
        let (m, n) = s
            .split_once(',')
            .and_then(|(m, n)| Some((m.trim().parse::<usize>().ok()?, n.trim().parse::<usize>().ok()?)))
            .ok_or_else(|| Error::Input(format!("--necklaces {s:?}: expected m,n")))?;
        if m == 0 || n == 0 {
            return Err(Error::Input("necklace lengths are positive".into()));
        }
        let rel = sd::necklace_relation(m, n)?;
        let terms: Vec<Value> = rel.iter().map(|(c, k)| json!({"necklace": k, "coeff": js::rational_to_value(c)})).collect();
        return Ok(Outcome::Ok(json!({"m": m, "n": n, "terms": terms})));
    }
    let (a, b) = match (a, b) {
        (Some(a), Some(b)) => (marked_key(&a)?, marked_key(&b)?),
        _ => return Err(Error::Input("give --a and --b, or --necklaces".into())),
    };
    if a.d() != b.d() {
        return Err(Error::DimensionMismatch(a.d(), b.d()));
    }
    let c = sd::symbolic_bracket(&a, &b)?;
    let terms = |c: &sd::OperatorCombination| -> Value {
        Value::Array(c.iter().map(|(k, v)| json!({"generator": k.to_hex(), "coeff": js::rational_to_value(v)})).collect())
    };
    let mut result = json!({"a": a.to_hex(), "b": b.to_hex(), "terms": terms(&c)});
    if let Some(v) = max_order {
        let r = sd::lie_bracket(&ConstraintOperator::from_key(a)?, &ConstraintOperator::from_key(b)?, v)?;
        result["solved"] = terms(&r.combination);
        result["closes"] = r.closes().into();
        if !r.closes() || r.combination != c {
            return Ok(Outcome::Failed(result));
        }
    }
    Ok(Outcome::Ok(result))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let argv = std::iter::once("ctm").chain(args.iter().copied()).map(String::from);
        let code = run_with(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn enumerate_counts() {
        let (code, out, _) = call(&["graphs", "enumerate", "--D", "3", "--max-vertices", "4", "--connected"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["result"].as_array().unwrap().len(), 4);
        assert_eq!(v["command"], "graphs enumerate");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(call(&["graphs", "enumerate", "--D", "3"]).0, 2);
        assert_eq!(call(&["moments", "--graph", "{not json"]).0, 2);
        assert_eq!(call(&["flow", "verify", "--D", "2", "--max-order", "4"]).0, 0);
        assert_eq!(call(&["flow", "verify", "--D", "2", "--max-order", "4", "--convention", "no-k0"]).0, 1);
    }
}
