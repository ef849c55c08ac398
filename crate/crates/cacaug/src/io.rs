//! Text formats for instances and rooted trees.
//!
//! Instance format (hand-editable, comment lines start with `c`):
//!
//! ```text
//! c optional comment
//! p cacap <nodes> <edges> <links>
//! e <u> <v>      one line per edge (0-based node ids, repeats allowed)
//! l <u> <v>      one line per link
//! ```
//!
//! Tree format: one line per node, `<id> <kind> <parent>`, kind `s` or `t`
//! (`steiner`/`terminal` also accepted), parent `-1` for the root.

use thiserror::Error;

use crate::cactus::{validate_cactus, CacapInstance, CactusError};
use crate::marking::{NodeKind, RootedSteinerTree, TreeError};
use crate::steiner::SteinerInstance;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IoError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("semantic error: {0}")]
    Semantic(String),
    #[error(transparent)]
    Cactus(#[from] CactusError),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

#[derive(Debug)]
pub struct ParsedInstance {
    pub instance: CacapInstance,
    pub warnings: Vec<String>,
}

fn syntax(line: usize, msg: impl Into<String>) -> IoError {
    IoError::Syntax {
        line,
        msg: msg.into(),
    }
}

pub fn parse_instance(text: &str) -> Result<ParsedInstance, IoError> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut links: Vec<(usize, usize)> = Vec::new();
    let mut warnings = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let mut it = line.split_whitespace();
        let tag = it.next().unwrap();
        match tag {
            "p" => {
                if header.is_some() {
                    return Err(syntax(line_no, "duplicate header"));
                }
                if it.next() != Some("cacap") {
                    return Err(syntax(line_no, "expected `p cacap <n> <m> <l>`"));
                }
                let nums: Vec<usize> = it
                    .map(|x| x.parse().map_err(|_| syntax(line_no, "bad number")))
                    .collect::<Result<_, _>>()?;
                if nums.len() != 3 {
                    return Err(syntax(line_no, "expected three counts"));
                }
                header = Some((nums[0], nums[1], nums[2]));
            }
            "e" | "l" => {
                if header.is_none() {
                    return Err(syntax(line_no, "record before header"));
                }
                let nums: Vec<usize> = it
                    .map(|x| x.parse().map_err(|_| syntax(line_no, "bad number")))
                    .collect::<Result<_, _>>()?;
                if nums.len() != 2 {
                    return Err(syntax(line_no, "expected two endpoints"));
                }
                let n = header.unwrap().0;
                if nums[0] >= n || nums[1] >= n {
                    return Err(IoError::Semantic(format!(
                        "line {line_no}: endpoint out of range (n = {n})"
                    )));
                }
                if tag == "e" {
                    edges.push((nums[0], nums[1]));
                } else {
                    let link = (nums[0].min(nums[1]), nums[0].max(nums[1]));
                    if nums[0] == nums[1] {
                        return Err(IoError::Semantic(format!(
                            "line {line_no}: link endpoints coincide"
                        )));
                    }
                    if links.contains(&link) {
                        warnings.push(format!(
                            "line {line_no}: duplicate link ({}, {}) dropped",
                            link.0, link.1
                        ));
                    } else {
                        links.push(link);
                    }
                }
            }
            _ => return Err(syntax(line_no, format!("unknown record `{tag}`"))),
        }
    }
    let (n, m, l) = header.ok_or_else(|| syntax(0, "missing `p cacap` header"))?;
    if edges.len() != m {
        return Err(IoError::Semantic(format!(
            "header says {m} edges, found {}",
            edges.len()
        )));
    }
    if links.len() + warnings.len() != l {
        return Err(IoError::Semantic(format!(
            "header says {l} links, found {}",
            links.len() + warnings.len()
        )));
    }
    let graph = validate_cactus(n, &edges)?;
    let instance = CacapInstance::new(graph, links)?;
    Ok(ParsedInstance { instance, warnings })
}

/// Canonical text form; comments are not preserved.
pub fn write_instance(instance: &CacapInstance) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "p cacap {} {} {}\n",
        instance.graph.node_count,
        instance.graph.edges.len(),
        instance.links.len()
    ));
    for &(u, v) in &instance.graph.edges {
        out.push_str(&format!("e {u} {v}\n"));
    }
    for &(u, v) in &instance.links {
        out.push_str(&format!("l {u} {v}\n"));
    }
    out
}

pub fn parse_tree(text: &str) -> Result<RootedSteinerTree, IoError> {
    let mut rows: Vec<(usize, NodeKind, Option<usize>)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(syntax(line_no, "expected `<id> <kind> <parent>`"));
        }
        let id: usize = parts[0]
            .parse()
            .map_err(|_| syntax(line_no, "bad node id"))?;
        let kind = match parts[1] {
            "s" | "steiner" => NodeKind::Steiner,
            "t" | "terminal" => NodeKind::Terminal,
            other => return Err(syntax(line_no, format!("unknown kind `{other}`"))),
        };
        let parent = match parts[2] {
            "-1" => None,
            p => Some(
                p.parse::<usize>()
                    .map_err(|_| syntax(line_no, "bad parent id"))?,
            ),
        };
        rows.push((id, kind, parent));
    }
    let n = rows.len();
    if n == 0 {
        return Err(syntax(0, "empty tree file"));
    }
    let mut kinds = vec![None; n];
    let mut parents = vec![None; n];
    for (id, kind, parent) in rows {
        if id >= n {
            return Err(IoError::Semantic(format!(
                "node id {id} out of range for {n} rows"
            )));
        }
        if kinds[id].is_some() {
            return Err(IoError::Semantic(format!("node id {id} repeated")));
        }
        if let Some(p) = parent {
            if p >= n {
                return Err(IoError::Semantic(format!("parent {p} out of range")));
            }
        }
        kinds[id] = Some(kind);
        parents[id] = parent;
    }
    let kinds: Vec<NodeKind> = kinds.into_iter().map(|k| k.unwrap()).collect();
    Ok(RootedSteinerTree::new(kinds, parents)?)
}

pub fn write_tree(tree: &RootedSteinerTree) -> String {
    let mut out = String::new();
    for v in 0..tree.node_count() {
        let kind = match tree.kind(v) {
            NodeKind::Steiner => "s",
            NodeKind::Terminal => "t",
        };
        let parent = tree
            .parent(v)
            .map(|p| p.to_string())
            .unwrap_or_else(|| "-1".into());
        out.push_str(&format!("{v} {kind} {parent}\n"));
    }
    out
}

/// Text form of a reduced instance: terminals, Steiner nodes with their
/// original link endpoints, then terminal and Steiner-Steiner edges.
pub fn write_steiner_instance(st: &SteinerInstance) -> String {
    let mut terminal_edges = Vec::new();
    let mut steiner_edges = Vec::new();
    for (a, b) in st.edges() {
        if st.is_terminal(a) {
            terminal_edges.push((st.link_of_flat(b), st.terminal_label(a)));
        } else {
            steiner_edges.push((st.link_of_flat(a), st.link_of_flat(b)));
        }
    }
    terminal_edges.sort_unstable();
    steiner_edges.sort_unstable();
    let mut out = String::new();
    out.push_str(&format!(
        "p steiner {} {} {} {}\n",
        st.terminal_count(),
        st.steiner_count(),
        terminal_edges.len(),
        steiner_edges.len()
    ));
    for t in 0..st.terminal_count() {
        out.push_str(&format!("t {}\n", st.terminal_label(t)));
    }
    for s in 0..st.steiner_count() {
        let (u, v) = st.link_endpoints(s);
        out.push_str(&format!("s {s} {u} {v}\n"));
    }
    for (l, t) in terminal_edges {
        out.push_str(&format!("et {l} {t}\n"));
    }
    for (a, b) in steiner_edges {
        out.push_str(&format!("es {a} {b}\n"));
    }
    out
}
