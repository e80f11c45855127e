//! Line-oriented text formats for groups, gain graphs, matroids, coloured
//! systems and complements. Every writer's output is accepted by the
//! matching reader. `#` starts a comment.

use std::fmt::Write as _;

use crate::bits::{self, Set};
use crate::coloured::{ColouredComplement, ColouredSystem};
use crate::gain::Gaining;
use crate::groups::FiniteGroup;
use crate::matroid::{Hypergraph, Matroid};
use crate::multigraph::Multigraph;
use crate::{Error, Limits, Result};

#[derive(Clone, Copy, Debug)]
struct Tok<'a> {
    line: usize,
    col: usize,
    text: &'a str,
}

fn lex(text: &str) -> Vec<Vec<Tok<'_>>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap();
        let mut toks = Vec::new();
        let mut start = None;
        for (j, c) in body.char_indices().chain([(body.len(), ' ')]) {
            match (c.is_whitespace(), start) {
                (false, None) => start = Some(j),
                (true, Some(s)) => {
                    toks.push(Tok { line: i + 1, col: body[..s].chars().count() + 1, text: &body[s..j] });
                    start = None;
                }
                _ => {}
            }
        }
        if !toks.is_empty() {
            out.push(toks);
        }
    }
    out
}

fn err<T>(t: &Tok, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse { line: t.line, col: t.col, msg: msg.into() })
}

/// Re-tags library errors with the position of the line that caused them.
fn at<T>(t: &Tok, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse { .. } | Error::Budget { .. } => e,
        other => Error::Parse { line: t.line, col: t.col, msg: other.to_string() },
    })
}

fn header<'a>(lines: &'a [Vec<Tok<'a>>], want: &[&str]) -> Result<(&'a str, &'a [Vec<Tok<'a>>])> {
    let Some(first) = lines.first() else {
        return Err(Error::Parse { line: 1, col: 1, msg: format!("empty input, expected `{}`", want.join("` or `")) });
    };
    if first.len() != 1 || !want.contains(&first[0].text) {
        return err(&first[0], format!("expected header `{}`", want.join("` or `")));
    }
    Ok((first[0].text, &lines[1..]))
}

fn number(t: &Tok) -> Result<usize> {
    t.text.parse().or_else(|_| err(t, format!("`{}` is not a number", t.text)))
}

// ---------------------------------------------------------------- groups

/// `cyclic N`, `dihedral N`, `symmetric N`, `product A B`, with `cyclic20`
/// style shorthands accepted for the named families.
fn group_spec<'a>(toks: &mut std::slice::Iter<'a, Tok<'a>>, end: &Tok) -> Result<FiniteGroup> {
    let Some(t) = toks.next() else { return err(end, "missing group specification") };
    let split = t.text.find(|c: char| c.is_ascii_digit()).unwrap_or(t.text.len());
    let (kind, inline) = t.text.split_at(split);
    let mut size = || -> Result<usize> {
        if !inline.is_empty() {
            return number(&Tok { text: inline, ..*t });
        }
        match toks.next() {
            Some(n) => number(n),
            None => err(t, format!("`{kind}` needs a size")),
        }
    };
    let g = match kind {
        "cyclic" | "Z" => FiniteGroup::cyclic(size()?),
        "dihedral" | "D" => FiniteGroup::dihedral(size()?),
        "symmetric" | "S" => FiniteGroup::symmetric(size()?),
        "trivial" if inline.is_empty() => Ok(FiniteGroup::trivial()),
        "product" if inline.is_empty() => {
            let a = group_spec(toks, end)?;
            let b = group_spec(toks, end)?;
            return Ok(FiniteGroup::product(&a, &b));
        }
        _ => return err(t, format!("unknown group family `{}`", t.text)),
    };
    at(t, g)
}

/// Parses an inline specification such as `cyclic 20`, `cyclic20` or
/// `product cyclic2 cyclic4`.
pub fn parse_group_spec(spec: &str) -> Result<FiniteGroup> {
    let lines = lex(spec);
    let toks: Vec<Tok> = lines.into_iter().flatten().collect();
    let end = Tok { line: 1, col: spec.len() + 1, text: "" };
    let mut it = toks.iter();
    let g = group_spec(&mut it, &end)?;
    if let Some(t) = it.next() {
        return err(t, "trailing tokens after group specification");
    }
    Ok(g)
}

/// Reads a `group …` block starting at `lines[0]`; returns the group and the
/// number of lines consumed.
fn group_block(lines: &[Vec<Tok>], limits: &Limits) -> Result<(FiniteGroup, usize)> {
    let first = &lines[0];
    if first[0].text != "group" {
        return err(&first[0], "expected `group`");
    }
    if first.len() == 2 && first[1].text == "table" {
        let Some(el) = lines.get(1).filter(|l| l[0].text == "elements") else {
            return err(&first[1], "`group table` must be followed by an `elements` line");
        };
        let names: Vec<String> = el[1..].iter().map(|t| t.text.to_string()).collect();
        let n = names.len();
        let mut rows: Vec<Option<Vec<usize>>> = vec![None; n];
        let mut used = 2;
        for l in &lines[2..] {
            if l[0].text != "row" {
                break;
            }
            used += 1;
            let Some(head) = l.get(1) else { return err(&l[0], "row needs an element name") };
            let Some(name) = head.text.strip_suffix(':') else { return err(head, "row name must end with `:`") };
            let Some(i) = names.iter().position(|x| x == name) else {
                return err(head, format!("unknown element `{name}`"));
            };
            if rows[i].is_some() {
                return err(head, format!("duplicate row for `{name}`"));
            }
            if l.len() != n + 2 {
                return err(head, format!("row `{name}` needs {n} entries"));
            }
            let row = l[2..]
                .iter()
                .map(|t| {
                    names
                        .iter()
                        .position(|x| x == t.text)
                        .map_or_else(|| err(t, format!("unknown element `{}`", t.text)), Ok)
                })
                .collect::<Result<Vec<_>>>()?;
            rows[i] = Some(row);
        }
        if let Some(i) = rows.iter().position(|r| r.is_none()) {
            return err(&el[0], format!("missing row for `{}`", names[i]));
        }
        let g = at(&first[0], FiniteGroup::from_table(names, rows.into_iter().map(Option::unwrap).collect(), limits))?;
        return Ok((g, used));
    }
    let end = *first.last().unwrap();
    let mut it = first[1..].iter();
    let g = group_spec(&mut it, &end)?;
    if let Some(t) = it.next() {
        return err(t, "trailing tokens after group specification");
    }
    Ok((g, 1))
}

/// Reads a groups-format file.
pub fn parse_group(text: &str, limits: &Limits) -> Result<FiniteGroup> {
    let lines = lex(text);
    if lines.is_empty() {
        return Err(Error::Parse { line: 1, col: 1, msg: "empty group file".into() });
    }
    let (g, used) = group_block(&lines, limits)?;
    if let Some(l) = lines.get(used) {
        return err(&l[0], "unexpected line after the group");
    }
    Ok(g)
}

/// Always the explicit `group table` form.
pub fn write_group(g: &FiniteGroup) -> String {
    let mut out = String::from("group table\nelements");
    for n in g.names() {
        write!(out, " {n}").unwrap();
    }
    out.push('\n');
    for a in 0..g.order() {
        write!(out, "row {}:", g.name(a)).unwrap();
        for &b in g.row(a) {
            write!(out, " {}", g.name(b)).unwrap();
        }
        out.push('\n');
    }
    out
}

// ---------------------------------------------------------------- gain graphs

/// A gain graph plus any `collection NAME: labels…` lines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GainFile {
    pub gaining: Gaining,
    pub collections: Vec<(String, Vec<String>)>,
}

pub fn parse_gaingraph(text: &str, limits: &Limits) -> Result<GainFile> {
    let lines = lex(text);
    let (_, rest) = header(&lines, &["gaingraph"])?;
    let Some(gl) = rest.first() else {
        return Err(Error::Parse { line: 1, col: 1, msg: "missing `group` block".into() });
    };
    if gl[0].text != "group" {
        return err(&gl[0], "expected a `group` block after the header");
    }
    let (group, used) = group_block(rest, limits)?;
    let mut graph = Multigraph::default();
    let mut gains = Vec::new();
    let mut collections = Vec::new();
    for l in &rest[used..] {
        let kw = &l[0];
        let elem =
            |t: &Tok| group.index_of(t.text).map_or_else(|| err(t, format!("unknown group element `{}`", t.text)), Ok);
        match kw.text {
            "vertex" if l.len() == 2 => {
                at(&l[1], graph.add_vertex(l[1].text))?;
            }
            "edge" if l.len() == 5 => {
                at(&l[1], graph.add_edge(l[1].text, l[2].text, l[3].text))?;
                gains.push(elem(&l[4])?);
            }
            "loop" if l.len() == 4 => {
                at(&l[1], graph.add_edge(l[1].text, l[2].text, l[2].text))?;
                gains.push(elem(&l[3])?);
            }
            "collection" if l.len() >= 2 => {
                let Some(name) = l[1].text.strip_suffix(':') else {
                    return err(&l[1], "collection name must end with `:`");
                };
                for t in &l[2..] {
                    at(t, graph.edge_index(t.text))?;
                }
                collections.push((name.to_string(), l[2..].iter().map(|t| t.text.to_string()).collect()));
            }
            "vertex" | "edge" | "loop" | "collection" => {
                return err(kw, format!("wrong number of fields for `{}`", kw.text))
            }
            other => return err(kw, format!("unknown keyword `{other}`")),
        }
    }
    Ok(GainFile { gaining: Gaining::new(graph, group, gains)?, collections })
}

pub fn write_gaingraph(g: &Gaining) -> String {
    let mut out = String::from("gaingraph\n");
    out.push_str(&write_group(g.group()));
    let gr = g.graph();
    for v in gr.vertices() {
        writeln!(out, "vertex {v}").unwrap();
    }
    for (e, ed) in gr.edges().iter().enumerate() {
        let gain = g.group().name(g.gain(e));
        if ed.is_loop() {
            writeln!(out, "loop {} {} {gain}", ed.label, gr.vertices()[ed.u]).unwrap();
        } else {
            writeln!(out, "edge {} {} {} {gain}", ed.label, gr.vertices()[ed.u], gr.vertices()[ed.v]).unwrap();
        }
    }
    out
}

// ---------------------------------------------------------------- matroids

fn label_set(toks: &[Tok], ground: &[String]) -> Result<Set> {
    if toks.len() == 1 && toks[0].text == "-" {
        return Ok(0);
    }
    let mut x = 0;
    for t in toks {
        let Some(i) = ground.iter().position(|g| g == t.text) else {
            return err(t, format!("unknown element `{}`", t.text));
        };
        if bits::contains(x, i) {
            return err(t, format!("`{}` listed twice", t.text));
        }
        x |= bits::bit(i);
    }
    Ok(x)
}

fn ground_line(lines: &[Vec<Tok>], what: &str) -> Result<Vec<String>> {
    match lines.first() {
        Some(l) if l[0].text == "ground" => Ok(l[1..].iter().map(|t| t.text.to_string()).collect()),
        Some(l) => err(&l[0], format!("{what} needs a `ground` line first")),
        None => Err(Error::Parse { line: 1, col: 1, msg: format!("{what} needs a `ground` line") }),
    }
}

/// Reads a matroid or hypergraph file; the flag is true for a `matroid` header.
pub fn parse_hypergraph(text: &str, limits: &Limits) -> Result<(Hypergraph, bool)> {
    let lines = lex(text);
    let (kind, rest) = header(&lines, &["matroid", "hypergraph"])?;
    let ground = ground_line(rest, kind)?;
    let gl = &rest[0][0];
    let mut indep = Vec::new();
    let mut circuits = Vec::new();
    for l in &rest[1..] {
        match l[0].text {
            "indep" if l.len() >= 2 => indep.push(label_set(&l[1..], &ground)?),
            "circuit" if l.len() >= 2 => circuits.push(label_set(&l[1..], &ground)?),
            other => return err(&l[0], format!("expected `indep` or `circuit`, found `{other}`")),
        }
    }
    if !indep.is_empty() && !circuits.is_empty() {
        return err(gl, "use either `indep` or `circuit` lines, not both");
    }
    let h = if circuits.is_empty() {
        at(gl, Hypergraph::from_sets(ground, &indep, limits))?
    } else {
        at(gl, Hypergraph::from_fn(ground, limits, |x| !circuits.iter().any(|&c| bits::is_subset(c, x))))?
    };
    Ok((h, kind == "matroid"))
}

/// Reads a file with the `matroid` header and checks the axioms.
pub fn parse_matroid(text: &str, limits: &Limits) -> Result<Matroid> {
    let (h, is_matroid) = parse_hypergraph(text, limits)?;
    if !is_matroid {
        return Err(Error::Parse { line: 1, col: 1, msg: "expected a `matroid` file".into() });
    }
    Matroid::validate(h)
}

fn write_family(kind: &str, h: &Hypergraph) -> String {
    let mut out = format!("{kind}\nground");
    for g in h.ground() {
        write!(out, " {g}").unwrap();
    }
    out.push('\n');
    for x in h.hyperedges() {
        writeln!(out, "indep {}", bits::render(x, h.ground())).unwrap();
    }
    out
}

pub fn write_matroid(m: &Matroid) -> String {
    write_family("matroid", m.hypergraph())
}

pub fn write_hypergraph(h: &Hypergraph) -> String {
    write_family("hypergraph", h)
}

// ---------------------------------------------------------------- coloured

fn colours_line(lines: &[Vec<Tok>], what: &str) -> Result<Vec<String>> {
    match lines.get(1) {
        Some(l) if l[0].text == "colours" => Ok(l[1..].iter().map(|t| t.text.to_string()).collect()),
        Some(l) => err(&l[0], format!("{what} needs a `colours` line after `ground`")),
        None => Err(Error::Parse { line: 1, col: 1, msg: format!("{what} needs a `colours` line") }),
    }
}

fn colour_of(t: &Tok, colours: &[String]) -> Result<usize> {
    colours.iter().position(|c| c == t.text).map_or_else(|| err(t, format!("unknown colour `{}`", t.text)), Ok)
}

pub fn parse_system(text: &str, limits: &Limits) -> Result<ColouredSystem> {
    let lines = lex(text);
    let (_, rest) = header(&lines, &["system"])?;
    let ground = ground_line(rest, "system")?;
    let colours = colours_line(rest, "system")?;
    if ground.len() > limits.max_ground {
        return Err(Error::Budget { what: "system ground size", cap: limits.max_ground as u64 });
    }
    let mut table: Vec<Option<usize>> = vec![None; 1 << ground.len()];
    let mut default = None;
    for l in &rest[2..] {
        match l[0].text {
            "colour" if l.len() >= 3 => {
                let x = label_set(&l[1..l.len() - 1], &ground)?;
                let c = colour_of(l.last().unwrap(), &colours)?;
                if table[x as usize].replace(c).is_some() {
                    return err(&l[1], "subset coloured twice");
                }
            }
            "default" if l.len() == 2 => default = Some(colour_of(&l[1], &colours)?),
            other => return err(&l[0], format!("expected `colour` or `default`, found `{other}`")),
        }
    }
    let mut full = Vec::with_capacity(table.len());
    for (x, c) in table.into_iter().enumerate() {
        match c.or(default) {
            Some(c) => full.push(c),
            None => {
                let msg = format!("no colour for {} and no default", bits::braces(x as Set, &ground));
                return Err(Error::Parse { line: rest[0][0].line, col: 1, msg });
            }
        }
    }
    at(&rest[0][0], ColouredSystem::new(ground, colours, full, limits))
}

fn write_header(kind: &str, ground: &[String], colours: &[String]) -> String {
    let mut out = format!("{kind}\nground");
    for g in ground {
        write!(out, " {g}").unwrap();
    }
    out.push_str("\ncolours");
    for c in colours {
        write!(out, " {c}").unwrap();
    }
    out.push('\n');
    out
}

pub fn write_system(m: &ColouredSystem) -> String {
    let mut out = write_header("system", m.ground(), m.colours());
    for x in 0..=m.full() {
        writeln!(out, "colour {} {}", bits::render(x, m.ground()), m.colour_name(x)).unwrap();
    }
    out
}

pub fn parse_complement(text: &str, limits: &Limits) -> Result<ColouredComplement> {
    let lines = lex(text);
    let (_, rest) = header(&lines, &["complement"])?;
    let ground = ground_line(rest, "complement")?;
    let colours = colours_line(rest, "complement")?;
    if ground.len() > limits.max_ground {
        return Err(Error::Budget { what: "complement ground size", cap: limits.max_ground as u64 });
    }
    let k = colours.len();
    let mut table = vec![false; (1 << ground.len()) * k];
    for l in &rest[2..] {
        match l[0].text {
            "accept" if l.len() >= 3 => {
                let y = label_set(&l[1..l.len() - 1], &ground)?;
                let c = colour_of(l.last().unwrap(), &colours)?;
                if std::mem::replace(&mut table[y as usize * k + c], true) {
                    return err(&l[1], "pair accepted twice");
                }
            }
            other => return err(&l[0], format!("expected `accept`, found `{other}`")),
        }
    }
    at(&rest[0][0], ColouredComplement::new(ground, colours, table, limits))
}

pub fn write_complement(pi: &ColouredComplement) -> String {
    let mut out = write_header("complement", pi.ground(), pi.colours());
    for (y, c) in pi.accepted() {
        writeln!(out, "accept {} {}", bits::render(y, pi.ground()), pi.colours()[c]).unwrap();
    }
    out
}
