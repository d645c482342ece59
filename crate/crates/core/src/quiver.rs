//! Finite quivers, dimension vectors and block layouts.
//!
//! Text format (UTF-8, line oriented, `#` starts a comment):
//!
//! ```text
//! vertices 1 2
//! arrow a 1 2
//! arrow b 1 2
//! ```
//!
//! Vertex order is declaration order; every block convention downstream
//! refers to it.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QuiverError {
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("quiver has a directed cycle through arrows {}", .0.join(", "))]
    Cycle(Vec<String>),
    #[error("duplicate identifier `{0}`")]
    DuplicateIdentifier(String),
    #[error("arrow `{arrow}` refers to undeclared vertex `{vertex}`")]
    UnknownVertex { arrow: String, vertex: String },
    #[error("invalid identifier `{0}`")]
    BadIdentifier(String),
    #[error("dimension vector keys {found:?} do not match quiver vertices {expected:?}")]
    KeyMismatch {
        expected: Vec<String>,
        found: Vec<String>,
    },
}

/// Identifiers are nonempty runs of ASCII alphanumerics, `_` and `'`.
pub fn is_identifier(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "QuiverText", into = "QuiverText")]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
}

impl Quiver {
    /// A validated acyclic quiver. Arrows are `(name, source, target)`.
    pub fn new<S: AsRef<str>>(vertices: &[S], arrows: &[(S, S, S)]) -> Result<Self, QuiverError> {
        let q = Self::with_cycles(vertices, arrows)?;
        if let Some(cycle) = q.find_cycle() {
            return Err(QuiverError::Cycle(cycle));
        }
        Ok(q)
    }

    /// Like [`Quiver::new`] but loops and cycles are permitted.
    pub fn with_cycles<S: AsRef<str>>(
        vertices: &[S],
        arrows: &[(S, S, S)],
    ) -> Result<Self, QuiverError> {
        let mut seen = BTreeSet::new();
        let vertices: Vec<String> = vertices.iter().map(|v| v.as_ref().to_string()).collect();
        for v in &vertices {
            if !is_identifier(v) {
                return Err(QuiverError::BadIdentifier(v.clone()));
            }
            if !seen.insert(v.clone()) {
                return Err(QuiverError::DuplicateIdentifier(v.clone()));
            }
        }
        let mut names = BTreeSet::new();
        let mut out = Vec::with_capacity(arrows.len());
        for (name, s, t) in arrows {
            let name = name.as_ref();
            if !is_identifier(name) {
                return Err(QuiverError::BadIdentifier(name.to_string()));
            }
            if !names.insert(name.to_string()) {
                return Err(QuiverError::DuplicateIdentifier(name.to_string()));
            }
            let lookup = |v: &str| {
                vertices
                    .iter()
                    .position(|x| x == v)
                    .ok_or_else(|| QuiverError::UnknownVertex {
                        arrow: name.to_string(),
                        vertex: v.to_string(),
                    })
            };
            out.push(Arrow {
                name: name.to_string(),
                source: lookup(s.as_ref())?,
                target: lookup(t.as_ref())?,
            });
        }
        Ok(Quiver {
            vertices,
            arrows: out,
        })
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    pub fn arrow(&self, name: &str) -> Option<&Arrow> {
        self.arrows.iter().find(|a| a.name == name)
    }

    pub fn source_name(&self, arrow: &Arrow) -> &str {
        &self.vertices[arrow.source]
    }

    pub fn target_name(&self, arrow: &Arrow) -> &str {
        &self.vertices[arrow.target]
    }

    pub fn is_acyclic(&self) -> bool {
        self.find_cycle().is_none()
    }

    /// A directed cycle as a list of arrow names, if one exists.
    pub fn find_cycle(&self) -> Option<Vec<String>> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            New,
            Active,
            Done,
        }
        let n = self.vertices.len();
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, a) in self.arrows.iter().enumerate() {
            out[a.source].push(i);
        }
        let mut mark = vec![Mark::New; n];
        // Iterative DFS; `path` holds the arrows on the current branch.
        for root in 0..n {
            if mark[root] != Mark::New {
                continue;
            }
            let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
            let mut path: Vec<usize> = Vec::new();
            mark[root] = Mark::Active;
            while let Some(&mut (v, ref mut next)) = stack.last_mut() {
                if *next < out[v].len() {
                    let arrow = out[v][*next];
                    *next += 1;
                    let w = self.arrows[arrow].target;
                    match mark[w] {
                        Mark::Active => {
                            let start = path
                                .iter()
                                .position(|&a| self.arrows[a].source == w)
                                .unwrap_or(path.len());
                            let cycle = path[start..]
                                .iter()
                                .chain(std::iter::once(&arrow))
                                .map(|&a| self.arrows[a].name.clone())
                                .collect();
                            return Some(cycle);
                        }
                        Mark::New => {
                            mark[w] = Mark::Active;
                            path.push(arrow);
                            stack.push((w, 0));
                        }
                        Mark::Done => {}
                    }
                } else {
                    mark[v] = Mark::Done;
                    stack.pop();
                    path.pop();
                }
            }
        }
        None
    }

    pub fn parse(text: &str) -> Result<Self, QuiverError> {
        let mut vertices: Option<Vec<String>> = None;
        let mut arrows: Vec<(String, String, String)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            let tokens = tokenize(line);
            let Some(&(col, keyword)) = tokens.first() else {
                continue;
            };
            let err = |column: usize, message: String| QuiverError::Parse {
                line: lineno + 1,
                column,
                message,
            };
            for &(c, tok) in &tokens[1..] {
                if !is_identifier(tok) {
                    return Err(err(c, format!("invalid identifier `{tok}`")));
                }
            }
            match keyword {
                "vertices" => {
                    if vertices.is_some() {
                        return Err(err(col, "`vertices` declared twice".into()));
                    }
                    if !arrows.is_empty() {
                        return Err(err(col, "`vertices` must precede arrows".into()));
                    }
                    vertices = Some(tokens[1..].iter().map(|t| t.1.to_string()).collect());
                }
                "arrow" => {
                    if vertices.is_none() {
                        return Err(err(col, "`arrow` before `vertices`".into()));
                    }
                    if tokens.len() != 4 {
                        let c = tokens.get(4).map_or(line.len() + 1, |t| t.0);
                        return Err(err(c, "expected `arrow <id> <source> <target>`".into()));
                    }
                    arrows.push((
                        tokens[1].1.to_string(),
                        tokens[2].1.to_string(),
                        tokens[3].1.to_string(),
                    ));
                }
                other => return Err(err(col, format!("unknown keyword `{other}`"))),
            }
        }
        let vertices = vertices.ok_or(QuiverError::Parse {
            line: 1,
            column: 1,
            message: "missing `vertices` line".into(),
        })?;
        let arrows: Vec<(&str, &str, &str)> = arrows
            .iter()
            .map(|(a, s, t)| (a.as_str(), s.as_str(), t.as_str()))
            .collect();
        Quiver::new(
            &vertices.iter().map(String::as_str).collect::<Vec<_>>(),
            &arrows,
        )
    }

    /// Canonical text form; [`Quiver::parse`] inverts it.
    pub fn to_text(&self) -> String {
        let mut s = String::from("vertices");
        for v in &self.vertices {
            s.push(' ');
            s.push_str(v);
        }
        s.push('\n');
        for a in &self.arrows {
            s.push_str(&format!(
                "arrow {} {} {}\n",
                a.name, self.vertices[a.source], self.vertices[a.target]
            ));
        }
        s
    }
}

/// `(1-based column, token)` pairs.
fn tokenize(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

impl fmt::Debug for Quiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Quiver({})",
            self.to_text().trim_end().replace('\n', " / ")
        )
    }
}

#[derive(Serialize, Deserialize)]
struct QuiverText {
    vertices: Vec<String>,
    arrows: Vec<(String, String, String)>,
}

impl From<Quiver> for QuiverText {
    fn from(q: Quiver) -> Self {
        QuiverText {
            arrows: q
                .arrows
                .iter()
                .map(|a| {
                    (
                        a.name.clone(),
                        q.vertices[a.source].clone(),
                        q.vertices[a.target].clone(),
                    )
                })
                .collect(),
            vertices: q.vertices,
        }
    }
}

impl TryFrom<QuiverText> for Quiver {
    type Error = QuiverError;

    fn try_from(t: QuiverText) -> Result<Self, Self::Error> {
        Quiver::with_cycles(&t.vertices, &t.arrows)
    }
}

/// Nonnegative dimension per vertex, keyed by vertex name.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct DimVector {
    dims: BTreeMap<String, usize>,
}

impl DimVector {
    pub fn from_pairs<S: AsRef<str>>(pairs: &[(S, usize)]) -> Self {
        DimVector {
            dims: pairs
                .iter()
                .map(|(v, d)| (v.as_ref().to_string(), *d))
                .collect(),
        }
    }

    /// Dimensions listed in the quiver's vertex order.
    pub fn from_ordered(q: &Quiver, dims: &[usize]) -> Result<Self, QuiverError> {
        if dims.len() != q.vertex_count() {
            return Err(QuiverError::KeyMismatch {
                expected: q.vertices().to_vec(),
                found: (0..dims.len()).map(|i| format!("#{i}")).collect(),
            });
        }
        Ok(DimVector {
            dims: q
                .vertices()
                .iter()
                .cloned()
                .zip(dims.iter().copied())
                .collect(),
        })
    }

    /// Parses `1=2 2=3` (separators: whitespace or commas).
    pub fn parse(text: &str) -> Result<Self, QuiverError> {
        let mut dims = BTreeMap::new();
        for (i, item) in text
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .enumerate()
        {
            let parsed = item
                .split_once('=')
                .and_then(|(v, d)| Some((v.to_string(), d.parse::<usize>().ok()?)));
            let Some((v, d)) = parsed else {
                return Err(QuiverError::Parse {
                    line: 1,
                    column: i + 1,
                    message: format!("expected `<vertex>=<dim>`, got `{item}`"),
                });
            };
            if dims.insert(v.clone(), d).is_some() {
                return Err(QuiverError::DuplicateIdentifier(v));
            }
        }
        Ok(DimVector { dims })
    }

    pub fn get(&self, vertex: &str) -> Option<usize> {
        self.dims.get(vertex).copied()
    }

    pub fn total(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, usize)> {
        self.dims.iter().map(|(v, d)| (v.as_str(), *d))
    }

    pub fn scaled(&self, factor: usize) -> Self {
        DimVector {
            dims: self
                .dims
                .iter()
                .map(|(v, d)| (v.clone(), d * factor))
                .collect(),
        }
    }

    /// Dimensions in `q`'s vertex order; keys must be exactly `q`'s vertices.
    pub fn in_order(&self, q: &Quiver) -> Result<Vec<usize>, QuiverError> {
        let expected: BTreeSet<&String> = q.vertices().iter().collect();
        let found: BTreeSet<&String> = self.dims.keys().collect();
        if expected != found {
            return Err(QuiverError::KeyMismatch {
                expected: q.vertices().to_vec(),
                found: self.dims.keys().cloned().collect(),
            });
        }
        Ok(q.vertices().iter().map(|v| self.dims[v]).collect())
    }

    /// `v=d` pairs in `q`'s vertex order.
    pub fn to_text(&self, q: &Quiver) -> String {
        q.vertices()
            .iter()
            .filter_map(|v| self.dims.get(v).map(|d| format!("{v}={d}")))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Placement of each vertex's coordinates inside the total space.
///
/// Vertex `v` occupies the 0-based index range `offset(v)..offset(v)+dim(v)`,
/// i.e. the 1-based coordinates `n_v+1 ..= n_v+α_v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockLayout {
    pub order: Vec<String>,
    pub dims: Vec<usize>,
    pub offsets: Vec<usize>,
    pub total: usize,
}

impl BlockLayout {
    pub fn from_dims(order: Vec<String>, dims: Vec<usize>) -> Self {
        let mut offsets = Vec::with_capacity(dims.len());
        let mut total = 0;
        for d in &dims {
            offsets.push(total);
            total += d;
        }
        BlockLayout {
            order,
            dims,
            offsets,
            total,
        }
    }

    pub fn range(&self, vertex: usize) -> Range<usize> {
        self.offsets[vertex]..self.offsets[vertex] + self.dims[vertex]
    }

    pub fn offset_of(&self, name: &str) -> Option<usize> {
        self.order
            .iter()
            .position(|v| v == name)
            .map(|i| self.offsets[i])
    }
}

pub fn block_layout(q: &Quiver, dims: &DimVector) -> Result<BlockLayout, QuiverError> {
    Ok(BlockLayout::from_dims(
        q.vertices().to_vec(),
        dims.in_order(q)?,
    ))
}
