//! Neuron networks as multigraphs partitioned into areas, and the free group
//! of their feedback loops.
//!
//! The loop group of a graph is free on the edges outside a spanning forest.
//! [`loop_basis`] fixes that forest by breadth-first search from the lowest
//! vertex id of each component, visiting incident edges in id order, so the
//! generator labels are reproducible. Generator `i` (letter `a`, `b`, ...) is
//! the `i`-th non-tree edge in id order; crossing it from its first endpoint
//! to its second reads the generator, the other way its inverse.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fpgroup::{Letter, Word};

pub type VertexId = u32;
pub type EdgeId = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("empty graph: no vertices")]
    EmptyGraph,
    #[error("unknown vertex {vertex} referenced by {context}")]
    UnknownVertex { vertex: VertexId, context: String },
    #[error("duplicate vertex id {0}")]
    DuplicateVertex(VertexId),
    #[error("duplicate edge id {0}")]
    DuplicateEdge(EdgeId),
    #[error("duplicate area label {0:?}")]
    DuplicateArea(String),
    #[error("vertex {vertex} assigned to both area {first:?} and area {second:?}")]
    VertexInTwoAreas { vertex: VertexId, first: String, second: String },
    #[error("vertex {0} is not assigned to any area")]
    VertexWithoutArea(VertexId),
    #[error("edge {0} is not in the network")]
    UnknownEdge(EdgeId),
    #[error("walk breaks at step {step}: edge {edge} does not start at vertex {at}")]
    Discontinuous { step: usize, edge: EdgeId, at: VertexId },
    #[error("walk is not closed: starts at {start}, ends at {end}")]
    NotClosed { start: VertexId, end: VertexId },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub id: EdgeId,
    pub tail: VertexId,
    pub head: VertexId,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.tail == self.head
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Area {
    pub label: String,
    pub vertices: Vec<VertexId>,
}

/// Unvalidated graph description, as read from a graph file.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkSpec {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<Edge>,
    pub areas: Vec<Area>,
}

impl NetworkSpec {
    /// Reads the line format `v <id>`, `e <id> <v1> <v2>`,
    /// `area <label> <v...>`; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let mut spec = NetworkSpec::default();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| GraphError::Parse { line: line_no, message };
            let num = |tok: &str| {
                tok.parse::<u32>().map_err(|_| err(format!("expected a nonnegative integer id, found {tok:?}")))
            };
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks[0] {
                "v" => {
                    if toks.len() != 2 {
                        return Err(err("expected `v <id>`".into()));
                    }
                    spec.vertices.push(num(toks[1])?);
                }
                "e" => {
                    if toks.len() != 4 {
                        return Err(err("expected `e <id> <v1> <v2>`".into()));
                    }
                    spec.edges.push(Edge { id: num(toks[1])?, tail: num(toks[2])?, head: num(toks[3])? });
                }
                "area" => {
                    if toks.len() < 2 {
                        return Err(err("expected `area <label> <v...>`".into()));
                    }
                    let vertices = toks[2..].iter().map(|t| num(t)).collect::<Result<_, _>>()?;
                    spec.areas.push(Area { label: toks[1].to_string(), vertices });
                }
                other => return Err(err(format!("unknown record {other:?}"))),
            }
        }
        Ok(spec)
    }
}

/// A validated network: a finite multigraph whose vertices are partitioned
/// into labeled areas.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Network {
    vertices: Vec<VertexId>,
    edges: Vec<Edge>,
    areas: Vec<Area>,
}

/// Label used for the single area when a description assigns none.
pub const DEFAULT_AREA: &str = "all";

pub fn build_network(spec: &NetworkSpec) -> Result<Network, GraphError> {
    if spec.vertices.is_empty() {
        return Err(GraphError::EmptyGraph);
    }
    let mut vertices = spec.vertices.clone();
    vertices.sort_unstable();
    if let Some(w) = vertices.windows(2).find(|w| w[0] == w[1]) {
        return Err(GraphError::DuplicateVertex(w[0]));
    }
    let known = |v: VertexId| vertices.binary_search(&v).is_ok();

    let mut edges = spec.edges.clone();
    edges.sort_by_key(|e| e.id);
    if let Some(w) = edges.windows(2).find(|w| w[0].id == w[1].id) {
        return Err(GraphError::DuplicateEdge(w[0].id));
    }
    for e in &edges {
        for v in [e.tail, e.head] {
            if !known(v) {
                return Err(GraphError::UnknownVertex { vertex: v, context: format!("edge {}", e.id) });
            }
        }
    }

    let areas = if spec.areas.is_empty() {
        vec![Area { label: DEFAULT_AREA.to_string(), vertices: vertices.clone() }]
    } else {
        let mut owner: BTreeMap<VertexId, &str> = BTreeMap::new();
        let mut labels = BTreeSet::new();
        for area in &spec.areas {
            if !labels.insert(area.label.as_str()) {
                return Err(GraphError::DuplicateArea(area.label.clone()));
            }
            for &v in &area.vertices {
                if !known(v) {
                    return Err(GraphError::UnknownVertex { vertex: v, context: format!("area {}", area.label) });
                }
                if let Some(first) = owner.insert(v, &area.label) {
                    return Err(GraphError::VertexInTwoAreas {
                        vertex: v,
                        first: first.to_string(),
                        second: area.label.clone(),
                    });
                }
            }
        }
        if let Some(&v) = vertices.iter().find(|v| !owner.contains_key(v)) {
            return Err(GraphError::VertexWithoutArea(v));
        }
        spec.areas.clone()
    };

    Ok(Network { vertices, edges, areas })
}

impl FromStr for Network {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        build_network(&NetworkSpec::parse(s)?)
    }
}

impl Network {
    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn areas(&self) -> &[Area] {
        &self.areas
    }

    pub fn edge(&self, id: EdgeId) -> Option<&Edge> {
        self.edges.binary_search_by_key(&id, |e| e.id).ok().map(|i| &self.edges[i])
    }

    pub fn area_of(&self, v: VertexId) -> Option<&Area> {
        self.areas.iter().find(|a| a.vertices.contains(&v))
    }

    /// Incident (edge, neighbour) pairs per vertex, in edge-id order. A
    /// self-loop appears once.
    fn adjacency(&self) -> BTreeMap<VertexId, Vec<(EdgeId, VertexId)>> {
        let mut adj: BTreeMap<VertexId, Vec<(EdgeId, VertexId)>> =
            self.vertices.iter().map(|&v| (v, Vec::new())).collect();
        for e in &self.edges {
            adj.get_mut(&e.tail).unwrap().push((e.id, e.head));
            if !e.is_loop() {
                adj.get_mut(&e.head).unwrap().push((e.id, e.tail));
            }
        }
        adj
    }

    /// Vertex sets of the connected components, ordered by lowest vertex.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let adj = self.adjacency();
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &root in &self.vertices {
            if !seen.insert(root) {
                continue;
            }
            let mut comp = vec![root];
            let mut queue = VecDeque::from([root]);
            while let Some(v) = queue.pop_front() {
                for &(_, u) in &adj[&v] {
                    if seen.insert(u) {
                        comp.push(u);
                        queue.push_back(u);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }
}

/// A spanning forest together with the free generators it determines.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoopBasis {
    pub spanning_tree: BTreeSet<EdgeId>,
    pub generators: Vec<EdgeId>,
    pub rank: usize,
    pub components: usize,
}

impl LoopBasis {
    pub fn generator_index(&self, edge: EdgeId) -> Option<usize> {
        self.generators.binary_search(&edge).ok()
    }
}

pub fn loop_basis(net: &Network) -> LoopBasis {
    let adj = net.adjacency();
    let mut seen = BTreeSet::new();
    let mut tree = BTreeSet::new();
    let mut components = 0;
    for &root in &net.vertices {
        if !seen.insert(root) {
            continue;
        }
        components += 1;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &(e, u) in &adj[&v] {
                if seen.insert(u) {
                    tree.insert(e);
                    queue.push_back(u);
                }
            }
        }
    }
    let generators: Vec<EdgeId> = net.edges.iter().map(|e| e.id).filter(|id| !tree.contains(id)).collect();
    let rank = generators.len();
    debug_assert_eq!(rank + net.vertices.len(), net.edges.len() + components);
    LoopBasis { spanning_tree: tree, generators, rank, components }
}

/// One edge traversal; `reversed` means head to tail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub edge: EdgeId,
    pub reversed: bool,
}

impl Step {
    pub fn forward(edge: EdgeId) -> Self {
        Step { edge, reversed: false }
    }

    pub fn backward(edge: EdgeId) -> Self {
        Step { edge, reversed: true }
    }
}

/// An edge sequence with explicit directions. Text form: whitespace or comma
/// separated edge ids, a leading `-` marks a reversed traversal.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Walk {
    pub steps: Vec<Step>,
}

impl Walk {
    pub fn new(steps: Vec<Step>) -> Self {
        Walk { steps }
    }

    /// Orients each edge from the current vertex, starting at `start`.
    /// Self-loops are taken forward.
    pub fn follow(net: &Network, start: VertexId, edges: &[EdgeId]) -> Result<Self, GraphError> {
        let mut at = start;
        let mut steps = Vec::with_capacity(edges.len());
        for (step, &id) in edges.iter().enumerate() {
            let e = net.edge(id).ok_or(GraphError::UnknownEdge(id))?;
            if e.tail == at {
                steps.push(Step::forward(id));
                at = e.head;
            } else if e.head == at {
                steps.push(Step::backward(id));
                at = e.tail;
            } else {
                return Err(GraphError::Discontinuous { step, edge: id, at });
            }
        }
        Ok(Walk { steps })
    }

    pub fn then(&self, other: &Walk) -> Walk {
        Walk { steps: self.steps.iter().chain(&other.steps).copied().collect() }
    }

    pub fn reversed(&self) -> Walk {
        Walk {
            steps: self.steps.iter().rev().map(|s| Step { edge: s.edge, reversed: !s.reversed }).collect(),
        }
    }
}

impl FromStr for Walk {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let steps = s
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| {
                let (reversed, digits) = match t.strip_prefix('-') {
                    Some(rest) => (true, rest),
                    None => (false, t),
                };
                digits
                    .parse::<EdgeId>()
                    .map(|edge| Step { edge, reversed })
                    .map_err(|_| GraphError::Parse { line: 1, message: format!("bad walk step {t:?}") })
            })
            .collect::<Result<_, _>>()?;
        Ok(Walk { steps })
    }
}

impl fmt::Display for Walk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.steps.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            if s.reversed {
                f.write_str("-")?;
            }
            write!(f, "{}", s.edge)?;
        }
        Ok(())
    }
}

/// Reads a closed walk as an element of the loop group.
pub fn walk_to_word(net: &Network, basis: &LoopBasis, walk: &Walk) -> Result<Word, GraphError> {
    let mut letters = Vec::new();
    let mut start = None;
    let mut at = None;
    for (step, s) in walk.steps.iter().enumerate() {
        let e = net.edge(s.edge).ok_or(GraphError::UnknownEdge(s.edge))?;
        let (from, to) = if s.reversed { (e.head, e.tail) } else { (e.tail, e.head) };
        match at {
            Some(v) if v != from => return Err(GraphError::Discontinuous { step, edge: s.edge, at: v }),
            None => start = Some(from),
            _ => {}
        }
        at = Some(to);
        if let Some(g) = basis.generator_index(s.edge) {
            letters.push(Letter::new(g, s.reversed));
        }
    }
    if let (Some(start), Some(end)) = (start, at) {
        if start != end {
            return Err(GraphError::NotClosed { start, end });
        }
    }
    Ok(Word::from_letters(letters))
}
