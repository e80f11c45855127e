//! Command-line front end. [`run`] never prints; it returns the exit code and
//! the report, whose last line is a one-line summary meant for scripts.
//!
//! Exit codes: 0 affirmative, 1 negative (UNSAT, not equal, absent), 2 error.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::bits::{self, Set};
use crate::coloured::{cleft_search, coloured_sum, registry};
use crate::conviviality::{elementary_conviviality_graph, quotient_conviviality_graph};
use crate::formats;
use crate::gadgets::{
    build_h_gadget, build_lambda_gadget, find_dagger_params_extended, find_star_params, DaggerParams, Family, Gadget,
    HParams, LambdaParams, Layer,
};
use crate::gain::{amalgam_conditions, gain_graph_amalgam};
use crate::groups::{solves_pair, FiniteGroup, Word, WordSystem};
use crate::logic::{
    lambda_bound, parse_formula_with, satisfies, suggest_renaming, var_list, Formula, Interpretation, Var,
};
use crate::matroid::{proper_amalgam, Matroid};
use crate::Limits;

type R<T> = std::result::Result<T, String>;

fn lib<T>(r: crate::Result<T>) -> R<T> {
    r.map_err(|e| e.to_string())
}

#[derive(Parser, Debug)]
#[command(name = "workbench", version, about = "Desk-scale workbench for gain-graphic matroids and CMSO1 registries")]
struct Cli {
    /// key=value file overriding search caps
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Enable internal parallelism (results are identical either way)
    #[arg(long, global = true)]
    parallel: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Decide a formula on a matroid or hypergraph file, or on a coloured sum
    CheckSentence {
        #[arg(long)]
        matroid: Option<PathBuf>,
        #[arg(long, requires = "complement", conflicts_with = "matroid")]
        system: Option<PathBuf>,
        #[arg(long, requires = "system")]
        complement: Option<PathBuf>,
        /// Formula file, or the formula text itself
        #[arg(long)]
        formula: String,
        /// Values for free variables, e.g. `Z1=a,b` or `Z2=-`
        #[arg(long)]
        assign: Vec<String>,
    },
    /// Frame matroid of a gain graph
    FrameMatroid {
        #[arg(long)]
        gaingraph: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Proper amalgam of two matroids, or gluing of two gain graphs along a base
    Amalgam {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        /// Base vertices, for gain-graph inputs
        #[arg(long)]
        u: Option<String>,
        #[arg(long)]
        v: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Registry value of a coloured system
    Registry {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        formula: String,
        #[arg(long)]
        delta: Option<u32>,
        #[arg(long)]
        assign: Vec<String>,
    },
    /// Compare two coloured systems under a sentence
    Equiv {
        #[arg(long)]
        system_a: PathBuf,
        #[arg(long)]
        system_b: PathBuf,
        #[arg(long)]
        formula: String,
        #[arg(long)]
        delta: Option<u32>,
        /// Largest complement tried when the registries differ
        #[arg(long, default_value_t = 1)]
        max_ground: usize,
    },
    /// Exhaustive search for a cleft between two coloured systems
    CleftSearch {
        #[arg(long)]
        system_a: PathBuf,
        #[arg(long)]
        system_b: PathBuf,
        #[arg(long)]
        formula: String,
        #[arg(long)]
        max_ground: usize,
        #[arg(long)]
        assign_a: Vec<String>,
        #[arg(long)]
        assign_b: Vec<String>,
        /// Write the complement found here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build an H or Lambda gadget
    #[command(subcommand)]
    Gadget(GadgetCmd),
    /// Elementary and quotient conviviality graphs
    Conviviality {
        /// Ambient group H (file or spec such as `cyclic4`)
        #[arg(long)]
        group: String,
        /// The group F
        #[arg(long)]
        subgroup: String,
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long)]
        quotient_dot: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Find values satisfying word equalities and inequalities
    SolveWords {
        #[arg(long)]
        group: String,
        #[arg(long, num_args = 1..)]
        eq: Vec<String>,
        #[arg(long, num_args = 1..)]
        neq: Vec<String>,
        #[arg(long)]
        arity: Option<usize>,
    },
    /// The projective plane PG(2,p) as a matroid file
    Pg {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum GadgetCmd {
    H(HArgs),
    Lambda(LambdaArgs),
}

#[derive(Args, Debug)]
struct Common {
    #[arg(long)]
    group: String,
    /// Search for parameters instead of taking them from flags
    #[arg(long)]
    auto_params: bool,
    /// Build the starred gadget, without D edges and Q loops
    #[arg(long)]
    star_only: bool,
    /// Largest k tried for the group x Z_k fallback
    #[arg(long, default_value_t = 32)]
    max_k: usize,
    /// Element `M`
    #[arg(long)]
    m: Option<String>,
    /// D gains as `a:b` pairs, comma separated
    #[arg(long)]
    d: Option<String>,
    /// Q gains, comma separated
    #[arg(long)]
    q: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct HArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    gens: String,
    #[arg(long = "N")]
    n: usize,
    #[arg(long)]
    s: Option<String>,
}

#[derive(Args, Debug)]
struct LambdaArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    gamma1: String,
    #[arg(long)]
    gamma2: String,
}

struct Report {
    code: i32,
    text: String,
}

/// Runs one command; `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let mut text = e.render().to_string();
            if code == 2 {
                text.push_str("ERROR: bad arguments\n");
            }
            return (code, text);
        }
    };
    match execute(cli) {
        Ok(r) => (r.code, r.text),
        Err(msg) => (2, format!("ERROR: {msg}\n")),
    }
}

fn limits(cli: &Cli) -> R<Limits> {
    let mut lim = Limits::default();
    if let Some(path) = &cli.config {
        let text = read(path)?;
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(format!("{}: line {}: expected key=value", path.display(), i + 1));
            };
            lim.set(k.trim(), v.trim()).map_err(|e| format!("{}: line {}: {e}", path.display(), i + 1))?;
        }
    }
    lim.parallel |= cli.parallel;
    if lim.parallel {
        if let Ok(v) = std::env::var("WORKBENCH_THREADS") {
            let n: usize = v.parse().map_err(|_| format!("WORKBENCH_THREADS=`{v}` is not a number"))?;
            // a pool set up by an earlier call in the same process stays in place
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    Ok(lim)
}

fn read(path: &Path) -> R<String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load<T>(path: &Path, parse: impl FnOnce(&str) -> crate::Result<T>) -> R<T> {
    parse(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn write_out(path: &Path, text: &str) -> R<()> {
    fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
}

/// Writes to `out` when given, otherwise appends to the report.
fn emit(report: &mut String, out: &Option<PathBuf>, text: &str) -> R<()> {
    match out {
        Some(p) => {
            write_out(p, text)?;
            writeln!(report, "wrote {}", p.display()).unwrap();
        }
        None => report.push_str(text),
    }
    Ok(())
}

/// A group given as a file path or an inline spec.
fn group_arg(arg: &str, lim: &Limits) -> R<FiniteGroup> {
    let p = Path::new(arg);
    if p.is_file() {
        load(p, |t| formats::parse_group(t, lim))
    } else {
        formats::parse_group_spec(arg).map_err(|e| format!("group `{arg}`: {e}"))
    }
}

fn formula_arg(arg: &str, lim: &Limits) -> R<Formula> {
    let p = Path::new(arg);
    let (text, origin) =
        if p.is_file() { (read(p)?, p.display().to_string()) } else { (arg.to_string(), "formula".into()) };
    parse_formula_with(&text, lim).map_err(|e| match suggest_renaming(&text) {
        Ok(Some(f)) => format!("{origin}: {e} (try: {f})"),
        _ => format!("{origin}: {e}"),
    })
}

/// Splits on commas outside parentheses, so product names like `(0,1)` survive.
fn split_list(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out.retain(|x| !x.is_empty());
    out
}

fn elements(g: &FiniteGroup, list: &str) -> R<Vec<usize>> {
    split_list(list).into_iter().map(|n| lib(g.element(n))).collect()
}

fn element(g: &FiniteGroup, name: &str) -> R<usize> {
    lib(g.element(name))
}

fn pairs(g: &FiniteGroup, list: &str) -> R<Vec<[usize; 2]>> {
    split_list(list)
        .into_iter()
        .map(|p| {
            let (a, b) = p.split_once(':').ok_or_else(|| format!("D pair `{p}` must look like a:b"))?;
            Ok([element(g, a.trim())?, element(g, b.trim())?])
        })
        .collect()
}

fn parse_var(s: &str) -> R<Var> {
    let k =
        s.strip_prefix('Z').and_then(|k| k.parse().ok()).ok_or_else(|| format!("`{s}` is not a variable like Z1"))?;
    lib(Var::new(k))
}

/// `Z1=a,b` / `Z2=-` pairs over `ground`.
fn assignment(items: &[String], ground: &[String]) -> R<Interpretation> {
    let mut theta = Interpretation::empty();
    for item in items {
        let (v, labels) = item.split_once('=').ok_or_else(|| format!("assignment `{item}` must look like Z1=a,b"))?;
        let v = parse_var(v.trim())?;
        let labels: Vec<&str> = labels.split(',').map(str::trim).filter(|l| !l.is_empty() && *l != "-").collect();
        theta = theta.with(v, lib(bits::from_labels(&labels, ground))?);
    }
    Ok(theta)
}

fn need_free(f: &Formula, theta: &Interpretation, flag: &str) -> R<()> {
    if theta.domain() != f.free() {
        let names: Vec<String> = var_list(f.free()).iter().map(Var::to_string).collect();
        return Err(format!("give exactly the free variables [{}] with {flag}", names.join(",")));
    }
    Ok(())
}

fn set_names(x: Set, ground: &[String]) -> String {
    bits::braces(x, ground)
}

fn execute(cli: Cli) -> R<Report> {
    let lim = limits(&cli)?;
    let mut out = String::new();
    let code = match cli.cmd {
        Cmd::CheckSentence { matroid, system, complement, formula, assign } => {
            let h = match (matroid, system, complement) {
                (Some(path), None, None) => {
                    let (h, is_matroid) = load(&path, |t| formats::parse_hypergraph(t, &lim))?;
                    if is_matroid {
                        Matroid::validate(h.clone()).map_err(|e| format!("{}: {e}", path.display()))?;
                    }
                    h
                }
                (None, Some(s), Some(c)) => {
                    let m = load(&s, |t| formats::parse_system(t, &lim))?;
                    let pi = load(&c, |t| formats::parse_complement(t, &lim))?;
                    lib(coloured_sum(&m, &pi, &lim))?
                }
                _ => return Err("give --matroid, or --system with --complement".into()),
            };
            let f = formula_arg(&formula, &lim)?;
            let theta = assignment(&assign, h.ground())?;
            need_free(&f, &theta, "--assign")?;
            writeln!(out, "formula: {f}").unwrap();
            let sat = lib(satisfies(&h, &f, &theta))?;
            out.push_str(if sat { "SAT\n" } else { "UNSAT\n" });
            if sat {
                0
            } else {
                1
            }
        }
        Cmd::FrameMatroid { gaingraph, out: dest } => {
            let g = load(&gaingraph, |t| formats::parse_gaingraph(t, &lim))?;
            let m = lib(g.gaining.frame_matroid(&lim))?;
            emit(&mut out, &dest, &formats::write_matroid(&m))?;
            writeln!(out, "FRAME-MATROID elements={} rank={}", m.len(), m.rank(m.full())).unwrap();
            0
        }
        Cmd::Amalgam { left, right, u, v, out: dest } => {
            let first = read(&left)?;
            if first.lines().map(|l| l.split('#').next().unwrap().trim()).find(|l| !l.is_empty()) == Some("gaingraph") {
                let (Some(u), Some(v)) = (u, v) else {
                    return Err("gain-graph amalgams need --u and --v".into());
                };
                let a = formats::parse_gaingraph(&first, &lim).map_err(|e| format!("{}: {e}", left.display()))?;
                let b = load(&right, |t| formats::parse_gaingraph(t, &lim))?;
                let glued = lib(gain_graph_amalgam(&a.gaining, &b.gaining, &u, &v))?;
                let failed = lib(amalgam_conditions(&a.gaining, &b.gaining, &u, &v, &lim))?;
                emit(&mut out, &dest, &formats::write_gaingraph(&glued))?;
                match &failed {
                    None => writeln!(out, "AMALGAM gaingraph edges={} conditions=hold", glued.graph().edges().len()),
                    Some(why) => {
                        writeln!(out, "AMALGAM gaingraph edges={} conditions=fail ({why})", glued.graph().edges().len())
                    }
                }
                .unwrap();
                failed.is_some() as i32
            } else {
                let a = formats::parse_matroid(&first, &lim).map_err(|e| format!("{}: {e}", left.display()))?;
                let b = load(&right, |t| formats::parse_matroid(t, &lim))?;
                let m = lib(proper_amalgam(&a, &b, &lim))?;
                emit(&mut out, &dest, &formats::write_matroid(&m))?;
                writeln!(out, "AMALGAM matroid elements={} rank={}", m.len(), m.rank(m.full())).unwrap();
                0
            }
        }
        Cmd::Registry { system, formula, delta, assign } => {
            let m = load(&system, |t| formats::parse_system(t, &lim))?;
            let f = formula_arg(&formula, &lim)?;
            let delta = delta.unwrap_or(f.min_delta().max(1));
            let sigma = assignment(&assign, m.ground())?;
            need_free(&f, &sigma, "--assign")?;
            let r = lib(registry(&m, &f, &sigma, f.vars(), delta, &lim))?;
            writeln!(out, "formula: {f}\ndelta: {delta}").unwrap();
            let s = f.var_count().max(1) as u32;
            match lambda_bound(&f, s, m.colours().len() as u32, delta) {
                Ok(b) => {
                    let digits = b.to_string();
                    if digits.len() <= 40 {
                        writeln!(out, "lambda bound: {digits}").unwrap();
                    } else {
                        writeln!(out, "lambda bound: a {}-digit number", digits.len()).unwrap();
                    }
                }
                Err(crate::Error::Budget { .. }) => writeln!(out, "lambda bound: beyond 2^(2^24)").unwrap(),
                Err(e) => return Err(e.to_string()),
            }
            writeln!(out, "REGISTRY {r}").unwrap();
            0
        }
        Cmd::Equiv { system_a, system_b, formula, delta, max_ground } => {
            let a = load(&system_a, |t| formats::parse_system(t, &lim))?;
            let b = load(&system_b, |t| formats::parse_system(t, &lim))?;
            let f = formula_arg(&formula, &lim)?;
            if !f.is_sentence() {
                return Err("equiv needs a sentence".into());
            }
            if a.colours() != b.colours() {
                return Err("the two systems use different colour sets".into());
            }
            let delta = delta.unwrap_or(f.min_delta().max(1));
            let e = Interpretation::empty();
            let ra = lib(registry(&a, &f, &e, f.vars(), delta, &lim))?;
            let rb = lib(registry(&b, &f, &e, f.vars(), delta, &lim))?;
            if ra == rb {
                out.push_str("EQUAL (registry match)\n");
                0
            } else {
                match lib(cleft_search([&a, &b], &f, [&e, &e], max_ground, &lim))? {
                    Some(c) => {
                        out.push_str(&formats::write_complement(&c.complement));
                        writeln!(out, "NOT EQUAL (cleft at |V|={})", c.complement.ground().len()).unwrap();
                    }
                    None => writeln!(out, "REGISTRIES DIFFER (no cleft with |V|<={max_ground})").unwrap(),
                }
                1
            }
        }
        Cmd::CleftSearch { system_a, system_b, formula, max_ground, assign_a, assign_b, out: dest } => {
            let a = load(&system_a, |t| formats::parse_system(t, &lim))?;
            let b = load(&system_b, |t| formats::parse_system(t, &lim))?;
            let f = formula_arg(&formula, &lim)?;
            let sa = assignment(&assign_a, a.ground())?;
            let sb = assignment(&assign_b, b.ground())?;
            need_free(&f, &sa, "--assign-a")?;
            need_free(&f, &sb, "--assign-b")?;
            match lib(cleft_search([&a, &b], &f, [&sa, &sb], max_ground, &lim))? {
                Some(c) => {
                    for (v, y) in &c.tau.0 {
                        writeln!(out, "tau {v} = {}", set_names(*y, c.complement.ground())).unwrap();
                    }
                    emit(&mut out, &dest, &formats::write_complement(&c.complement))?;
                    let [x, y] = c.satisfied;
                    writeln!(out, "CLEFT |V|={} satisfied=({x},{y})", c.complement.ground().len()).unwrap();
                    0
                }
                None => {
                    writeln!(out, "NO CLEFT (|V|<={max_ground})").unwrap();
                    1
                }
            }
        }
        Cmd::Gadget(g) => gadget(g, &lim, &mut out)?,
        Cmd::Conviviality { group, subgroup, dot, quotient_dot, csv } => {
            let h = group_arg(&group, &lim)?;
            let f = group_arg(&subgroup, &lim)?;
            let g = lib(elementary_conviviality_graph(&h, &f, &lim))?;
            let q = quotient_conviviality_graph(&g);
            out.push_str("# finite restriction: Gamma ranges over subgroups of H up to isomorphism\n");
            for (i, v) in g.vertices.iter().enumerate() {
                writeln!(out, "v{i} {}", v.label()).unwrap();
            }
            emit(&mut out, &csv, &g.to_csv())?;
            for (i, cell) in q.cells.iter().enumerate() {
                let names: Vec<String> = cell.iter().map(|c| format!("v{c}")).collect();
                writeln!(out, "cell {i}: {}", names.join(" ")).unwrap();
            }
            if let Some(p) = &dot {
                write_out(p, &g.to_dot("elementary"))?;
                writeln!(out, "wrote {}", p.display()).unwrap();
            }
            if let Some(p) = &quotient_dot {
                write_out(p, &q.to_dot("quotient"))?;
                writeln!(out, "wrote {}", p.display()).unwrap();
            }
            let n = g.vertices.len();
            let cross = (0..n).map(|i| (i + 1..n).filter(|&j| g.adjacency[i][j]).count()).sum::<usize>();
            writeln!(out, "CONVIVIALITY vertices={n} cross-edges={cross} quotient-vertices={}", q.vertices.len())
                .unwrap();
            (n == 0) as i32
        }
        Cmd::SolveWords { group, eq, neq, arity } => {
            let g = group_arg(&group, &lim)?;
            let words = |ws: &[String]| ws.iter().map(|w| lib(Word::parse(w))).collect::<R<Vec<_>>>();
            let (eq, neq) = (words(&eq)?, words(&neq)?);
            let sys = match arity {
                Some(k) => lib(WordSystem::new(k, eq, neq))?,
                None => lib(WordSystem::inferred(eq, neq))?,
            };
            match lib(solves_pair(&g, &sys, &lim))? {
                Some(vals) => {
                    let parts: Vec<String> =
                        vals.iter().enumerate().map(|(i, &x)| format!("x{}={}", i + 1, g.name(x))).collect();
                    writeln!(out, "{}\nSOLVABLE", parts.join(" ")).unwrap();
                    0
                }
                None => {
                    out.push_str("UNSOLVABLE\n");
                    1
                }
            }
        }
        Cmd::Pg { p, out: dest } => {
            let m = lib(Matroid::projective_plane(p, &lim))?;
            emit(&mut out, &dest, &formats::write_matroid(&m))?;
            writeln!(out, "PG p={p} elements={} rank={}", m.len(), m.rank(m.full())).unwrap();
            0
        }
    };
    Ok(Report { code, text: out })
}

fn gadget_text(g: &Gadget) -> String {
    let mut t = formats::write_gaingraph(g.gaining());
    t.push_str(&g.manifest());
    t
}

fn layer_args(c: &Common, g: &FiniteGroup) -> R<(Vec<[usize; 2]>, Vec<usize>)> {
    match (&c.d, &c.q) {
        (Some(d), Some(q)) => Ok((pairs(g, d)?, elements(g, q)?)),
        _ => Err("give --d and --q, or use --auto-params or --star-only".into()),
    }
}

fn gadget(cmd: GadgetCmd, lim: &Limits, out: &mut String) -> R<i32> {
    let (common, family_name) = match &cmd {
        GadgetCmd::H(a) => (&a.common, "h"),
        GadgetCmd::Lambda(a) => (&a.common, "lambda"),
    };
    let base = group_arg(&common.group, lim)?;
    let family = match &cmd {
        GadgetCmd::H(a) => Family::H { gens: elements(&base, &a.gens)?, length: a.n },
        GadgetCmd::Lambda(a) => {
            Family::Lambda { gamma1: elements(&base, &a.gamma1)?, gamma2: elements(&base, &a.gamma2)? }
        }
    };
    let layer = if common.star_only { Layer::Star } else { Layer::Full };
    let (group, params) = if common.auto_params {
        let found = if common.star_only {
            lib(find_star_params(&base, &family))?.map(|p| (base.clone(), p))
        } else {
            lib(find_dagger_params_extended(&base, &family, common.max_k, lim))?
        };
        let Some((group, mut params)) = found else {
            writeln!(out, "ABSENT (no parameters satisfy the dagger condition)").unwrap();
            return Ok(1);
        };
        if group.order() != base.order() {
            writeln!(
                out,
                "note: the D/Q layer has no valid assignment in the given group; gains live in the group x Z{}, which contains it as (x,0)",
                group.order() / base.order()
            )
            .unwrap();
        }
        if common.star_only {
            match &mut params {
                DaggerParams::H(p) => (p.d.clear(), p.q.clear()),
                DaggerParams::Lambda(p) => (p.d.clear(), p.q.clear()),
            };
        }
        (group, params)
    } else {
        let g = &base;
        let m = element(g, common.m.as_deref().ok_or("give --m, or use --auto-params")?)?;
        let (d, q) = if common.star_only { (vec![], vec![]) } else { layer_args(common, g)? };
        let params = match (&cmd, family) {
            (GadgetCmd::H(a), Family::H { gens, length }) => {
                let s = element(g, a.s.as_deref().ok_or("give --s, or use --auto-params")?)?;
                DaggerParams::H(HParams { gens, s, m, d, q, length })
            }
            (_, Family::Lambda { gamma1, gamma2 }) => DaggerParams::Lambda(LambdaParams { gamma1, gamma2, m, d, q }),
            _ => unreachable!(),
        };
        (base.clone(), params)
    };
    let (gadget, summary) = match &params {
        DaggerParams::H(p) => {
            let h = lib(build_h_gadget(&group, p, layer, lim))?;
            let s = format!("s={} m={}", group.name(p.s), group.name(p.m));
            (h.gadget, s)
        }
        DaggerParams::Lambda(p) => {
            (lib(build_lambda_gadget(&group, p, layer, lim))?.gadget, format!("m={}", group.name(p.m)))
        }
    };
    emit(out, &common.out, &gadget_text(&gadget))?;
    let gr = gadget.gaining().graph();
    writeln!(
        out,
        "GADGET {family_name} vertices={} edges={} group-order={} {summary}",
        gr.vertices().len(),
        gr.edges().len(),
        group.order()
    )
    .unwrap();
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn go(args: &[&str]) -> (i32, String) {
        run(std::iter::once("workbench").chain(args.iter().copied()))
    }

    #[test]
    fn lists_keep_parenthesised_names() {
        assert_eq!(split_list("(0,1), (1,0),2"), vec!["(0,1)", "(1,0)", "2"]);
    }

    #[test]
    fn help_and_bad_args() {
        assert_eq!(go(&["--help"]).0, 0);
        let (code, text) = go(&["frobnicate"]);
        assert_eq!(code, 2);
        assert!(text.ends_with("ERROR: bad arguments\n"));
    }

    #[test]
    fn solve_words_and_pg() {
        let (c, t) = go(&["solve-words", "--group", "cyclic4", "--eq", "x1x1", "--neq", "x1"]);
        assert_eq!((c, t.as_str()), (0, "x1=2\nSOLVABLE\n"));
        let (c, t) = go(&["solve-words", "--group", "cyclic3", "--eq", "x1x1", "--neq", "x1"]);
        assert_eq!((c, t.as_str()), (1, "UNSOLVABLE\n"));
        let (c, t) = go(&["pg", "--p", "2"]);
        assert_eq!(c, 0);
        assert!(t.ends_with("PG p=2 elements=7 rank=3\n"));
    }
}
