//! Dessins d'enfants from finite-index subgroups of the free group on `a, b`.
//!
//! A subgroup given by generating words is turned into its Stallings graph
//! by folding. When the graph is complete its vertices are the right cosets
//! of the subgroup, and following `a`- and `b`-edges gives the coset
//! permutations. Dart 1 (index 0 in the API) is always the subgroup itself.

use std::collections::hash_map::Entry;
use std::collections::{HashMap, VecDeque};
use std::fmt::{self, Write as _};

use serde::Serialize;
use thiserror::Error;

use crate::fpgroup::{GroupError, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DessinError {
    #[error("subgroup has infinite index: the folded graph is not complete")]
    InfiniteIndex,
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("permutations act on different sets ({0} and {1} points)")]
    LengthMismatch(usize, usize),
    #[error("not a permutation: {0}")]
    NotAPermutation(String),
    #[error("disconnected dessin: the permutations do not act transitively")]
    Disconnected,
    #[error("a dessin needs at least one dart")]
    Empty,
    #[error("Euler characteristic {0} gives no integral genus")]
    BadEuler(i64),
}

/// A permutation of `0..n`, printed 1-based in cycle notation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    /// `images[i]` is the image of `i`.
    pub fn new(images: Vec<usize>) -> Result<Self, DessinError> {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            if x >= images.len() || seen[x] {
                return Err(DessinError::NotAPermutation(format!("{images:?}")));
            }
            seen[x] = true;
        }
        Ok(Permutation(images))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    /// Builds a permutation of `n` points from 1-based cycles.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self, DessinError> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        for cycle in cycles {
            for (k, &x) in cycle.iter().enumerate() {
                let y = cycle[(k + 1) % cycle.len()];
                if x == 0 || x > n || y == 0 || y > n || touched[x - 1] {
                    return Err(DessinError::NotAPermutation(format!("{cycles:?} on {n} points")));
                }
                touched[x - 1] = true;
                images[x - 1] = y - 1;
            }
        }
        Permutation::new(images)
    }

    /// Parses cycle notation such as `(1 2 3)(4 5)`, or `()` for the
    /// identity. Without `n` the point count is the largest entry.
    pub fn parse(s: &str, n: Option<usize>) -> Result<Self, DessinError> {
        let bad = || DessinError::NotAPermutation(s.to_string());
        let mut cycles = Vec::new();
        let mut rest = s.trim();
        while !rest.is_empty() {
            let body = rest.strip_prefix('(').ok_or_else(bad)?;
            let close = body.find(')').ok_or_else(bad)?;
            let cycle = body[..close]
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<usize>().map_err(|_| bad()))
                .collect::<Result<Vec<_>, _>>()?;
            if !cycle.is_empty() {
                cycles.push(cycle);
            }
            rest = body[close + 1..].trim_start();
        }
        let largest = cycles.iter().flatten().copied().max().unwrap_or(0);
        let n = n.unwrap_or(largest.max(1));
        Permutation::from_cycles(n, &cycles)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.0[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x] = i;
        }
        Permutation(inv)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&x| self.0[x]).collect())
    }

    /// Cycles including fixed points, each starting at its least element,
    /// ordered by that element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x);
                x = self.0[x];
            }
            out.push(cycle);
        }
        out
    }

    /// Cycle lengths, longest first.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut any = false;
        for cycle in self.cycles().into_iter().filter(|c| c.len() > 1) {
            any = true;
            let body: Vec<String> = cycle.iter().map(|x| (x + 1).to_string()).collect();
            write!(f, "({})", body.join(" "))?;
        }
        if !any {
            f.write_str("()")?;
        }
        Ok(())
    }
}

/// Folded graph of a subgroup of F(a, b). Vertex 0 is the base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupGraph {
    // out[v][g] and inn[v][g]: head of the g-edge leaving v, tail of the one entering
    out: Vec<[Option<usize>; 2]>,
    inn: Vec<[Option<usize>; 2]>,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn fold(n: usize, edges: &[(usize, usize, usize)]) -> SubgroupGraph {
    let mut parent: Vec<usize> = (0..n).collect();
    let mut edges = edges.to_vec();
    'outer: loop {
        let mut out: HashMap<(usize, usize), usize> = HashMap::new();
        let mut inn: HashMap<(usize, usize), usize> = HashMap::new();
        for e in edges.iter_mut() {
            *e = (find(&mut parent, e.0), e.1, find(&mut parent, e.2));
        }
        for &(u, g, v) in &edges {
            let clash = match out.get(&(u, g)) {
                Some(&w) if w != v => Some((v, w)),
                _ => match inn.get(&(v, g)) {
                    Some(&w) if w != u => Some((u, w)),
                    _ => None,
                },
            };
            if let Some((x, y)) = clash {
                let (x, y) = (find(&mut parent, x), find(&mut parent, y));
                let (lo, hi) = (x.min(y), x.max(y));
                parent[hi] = lo;
                continue 'outer;
            }
            out.insert((u, g), v);
            inn.insert((v, g), u);
        }
        break;
    }
    edges.sort_unstable();
    edges.dedup();

    let root = find(&mut parent, 0);
    let mut out_of: HashMap<usize, [Option<usize>; 2]> = HashMap::new();
    let mut in_of: HashMap<usize, [Option<usize>; 2]> = HashMap::new();
    for &(u, g, v) in &edges {
        out_of.entry(u).or_default()[g] = Some(v);
        in_of.entry(v).or_default()[g] = Some(u);
    }
    // BFS renumbering; neighbors in the order out-a, out-b, in-a, in-b
    let mut label: HashMap<usize, usize> = HashMap::from([(root, 0)]);
    let mut order = vec![root];
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        let o = out_of.get(&v).copied().unwrap_or_default();
        let i = in_of.get(&v).copied().unwrap_or_default();
        for w in [o[0], o[1], i[0], i[1]].into_iter().flatten() {
            if let Entry::Vacant(e) = label.entry(w) {
                e.insert(order.len());
                order.push(w);
                queue.push_back(w);
            }
        }
    }
    let relabel = |x: Option<usize>| x.map(|x| label[&x]);
    let out = order
        .iter()
        .map(|v| out_of.get(v).copied().unwrap_or_default().map(relabel))
        .collect();
    let inn = order
        .iter()
        .map(|v| in_of.get(v).copied().unwrap_or_default().map(relabel))
        .collect();
    SubgroupGraph { out, inn }
}

/// Stallings graph of the subgroup generated by `generators` (rank-2 words).
///
/// Each generator becomes a loop at the base vertex; folding identifies
/// edges with equal label and equal tail (or head) until none remain.
/// Vertices are numbered by breadth-first search from the base.
pub fn fold_subgroup(generators: &[Word]) -> Result<SubgroupGraph, DessinError> {
    let mut n = 1;
    let mut edges = Vec::new();
    for w in generators {
        w.check_rank(2)?;
        let letters = w.letters();
        let mut cur = 0;
        for (k, l) in letters.iter().enumerate() {
            let next = if k + 1 == letters.len() {
                0
            } else {
                n += 1;
                n - 1
            };
            if l.inverse {
                edges.push((next, l.generator, cur));
            } else {
                edges.push((cur, l.generator, next));
            }
            cur = next;
        }
    }
    Ok(fold(n, &edges))
}

impl SubgroupGraph {
    pub fn n_vertices(&self) -> usize {
        self.out.len()
    }

    pub fn base(&self) -> usize {
        0
    }

    /// Head of the edge labeled `generator` (0 = a, 1 = b) leaving `v`.
    pub fn out_edge(&self, v: usize, generator: usize) -> Option<usize> {
        self.out[v][generator]
    }

    /// Tail of the edge labeled `generator` entering `v`.
    pub fn in_edge(&self, v: usize, generator: usize) -> Option<usize> {
        self.inn[v][generator]
    }

    /// Edges `(tail, generator, head)`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize, usize)> {
        let mut e: Vec<_> = self
            .out
            .iter()
            .enumerate()
            .flat_map(|(u, o)| (0..2).filter_map(move |g| o[g].map(|v| (u, g, v))))
            .collect();
        e.sort_unstable();
        e
    }

    pub fn is_folded(&self) -> bool {
        let mut heads = HashMap::new();
        for (u, g, v) in self.edges() {
            if heads.insert((v, g), u).is_some() {
                return false;
            }
        }
        true
    }

    /// Every vertex has all four directions.
    pub fn is_complete(&self) -> bool {
        self.out.iter().chain(&self.inn).all(|d| d[0].is_some() && d[1].is_some())
    }

    /// Index of the subgroup, `None` when infinite.
    pub fn index(&self) -> Option<usize> {
        self.is_complete().then_some(self.n_vertices())
    }

    /// Vertex reached by reading `w` from the base, if the path exists.
    /// `w` lies in the subgroup iff this is `Some(0)`.
    pub fn read(&self, w: &Word) -> Option<usize> {
        let mut v = 0;
        for l in w.letters() {
            if l.generator > 1 {
                return None;
            }
            v = if l.inverse { self.inn[v][l.generator]? } else { self.out[v][l.generator]? };
        }
        Some(v)
    }

    /// Folds this graph again; a no-op on any graph built here.
    pub fn refold(&self) -> SubgroupGraph {
        fold(self.n_vertices(), &self.edges())
    }
}

/// The right action of `a` and `b` on cosets, read off a complete graph.
pub fn coset_permutations(g: &SubgroupGraph) -> Result<(Permutation, Permutation), DessinError> {
    if !g.is_complete() {
        return Err(DessinError::InfiniteIndex);
    }
    let perm = |gen: usize| Permutation((0..g.n_vertices()).map(|v| g.out[v][gen].unwrap_or(v)).collect());
    Ok((perm(0), perm(1)))
}

/// Permutation `x ↦ x·w` of the right action where `a ↦ sigma_a`,
/// `b ↦ sigma_b`.
pub fn word_permutation(sigma_a: &Permutation, sigma_b: &Permutation, w: &Word) -> Result<Permutation, DessinError> {
    w.check_rank(2)?;
    if sigma_a.len() != sigma_b.len() {
        return Err(DessinError::LengthMismatch(sigma_a.len(), sigma_b.len()));
    }
    let inverses = [sigma_a.inverse(), sigma_b.inverse()];
    let mut acc = Permutation::identity(sigma_a.len());
    for l in w.letters() {
        let p = match (l.generator, l.inverse) {
            (0, false) => sigma_a,
            (1, false) => sigma_b,
            (g, _) => &inverses[g],
        };
        acc = p.compose(&acc);
    }
    Ok(acc)
}

/// Bipartite map: black vertices are cycles of `sigma_a`, white vertices
/// cycles of `sigma_b`, faces cycles of `sigma_a ∘ sigma_b`, darts are edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dessin {
    sigma_a: Permutation,
    sigma_b: Permutation,
    black: Vec<Vec<usize>>,
    white: Vec<Vec<usize>>,
    faces: Vec<Vec<usize>>,
    genus: usize,
}

fn is_transitive(a: &Permutation, b: &Permutation) -> bool {
    let n = a.len();
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    let mut count = 1;
    while let Some(x) = stack.pop() {
        for p in [a, b] {
            let y = p.apply(x);
            if !seen[y] {
                seen[y] = true;
                count += 1;
                stack.push(y);
            }
        }
    }
    count == n
}

pub fn build_dessin(sigma_a: Permutation, sigma_b: Permutation) -> Result<Dessin, DessinError> {
    if sigma_a.len() != sigma_b.len() {
        return Err(DessinError::LengthMismatch(sigma_a.len(), sigma_b.len()));
    }
    if sigma_a.is_empty() {
        return Err(DessinError::Empty);
    }
    if !is_transitive(&sigma_a, &sigma_b) {
        return Err(DessinError::Disconnected);
    }
    let black = sigma_a.cycles();
    let white = sigma_b.cycles();
    let faces = sigma_a.compose(&sigma_b).cycles();
    let chi = (black.len() + white.len()) as i64 - sigma_a.len() as i64 + faces.len() as i64;
    if chi > 2 || chi % 2 != 0 {
        return Err(DessinError::BadEuler(chi));
    }
    let genus = ((2 - chi) / 2) as usize;
    Ok(Dessin { sigma_a, sigma_b, black, white, faces, genus })
}

/// Counts written by [`Dessin::summary_json`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DessinSummary {
    pub darts: usize,
    pub vertices: usize,
    pub black_vertices: usize,
    pub white_vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub euler_characteristic: i64,
    pub genus: usize,
    pub sigma_a: String,
    pub sigma_b: String,
    pub black_degrees: Vec<usize>,
    pub white_degrees: Vec<usize>,
    pub face_degrees: Vec<usize>,
}

impl Dessin {
    pub fn n_darts(&self) -> usize {
        self.sigma_a.len()
    }

    pub fn sigma_a(&self) -> &Permutation {
        &self.sigma_a
    }

    pub fn sigma_b(&self) -> &Permutation {
        &self.sigma_b
    }

    pub fn black_vertices(&self) -> &[Vec<usize>] {
        &self.black
    }

    pub fn white_vertices(&self) -> &[Vec<usize>] {
        &self.white
    }

    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }

    pub fn n_vertices(&self) -> usize {
        self.black.len() + self.white.len()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.n_vertices() as i64 - self.n_darts() as i64 + self.faces.len() as i64
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn summary(&self) -> DessinSummary {
        DessinSummary {
            darts: self.n_darts(),
            vertices: self.n_vertices(),
            black_vertices: self.black.len(),
            white_vertices: self.white.len(),
            edges: self.n_darts(),
            faces: self.faces.len(),
            euler_characteristic: self.euler_characteristic(),
            genus: self.genus,
            sigma_a: self.sigma_a.to_string(),
            sigma_b: self.sigma_b.to_string(),
            black_degrees: self.sigma_a.cycle_type(),
            white_degrees: self.sigma_b.cycle_type(),
            face_degrees: self.sigma_a.compose(&self.sigma_b).cycle_type(),
        }
    }

    pub fn summary_json(&self) -> String {
        serde_json::to_string_pretty(&self.summary()).expect("summary serializes") + "\n"
    }

    /// Undirected DOT graph: filled black nodes `b1..`, white nodes `w1..`,
    /// one edge per dart labeled with its 1-based number.
    pub fn to_dot(&self) -> String {
        let owner = |cycles: &[Vec<usize>]| {
            let mut at = vec![0; self.n_darts()];
            for (k, c) in cycles.iter().enumerate() {
                for &d in c {
                    at[d] = k;
                }
            }
            at
        };
        let (bo, wo) = (owner(&self.black), owner(&self.white));
        let mut s = String::from("graph dessin {\n  node [label=\"\", shape=circle, width=0.2, style=filled];\n");
        for k in 0..self.black.len() {
            writeln!(s, "  b{} [fillcolor=black];", k + 1).unwrap();
        }
        for k in 0..self.white.len() {
            writeln!(s, "  w{} [fillcolor=white];", k + 1).unwrap();
        }
        for d in 0..self.n_darts() {
            writeln!(s, "  b{} -- w{} [label=\"{}\"];", bo[d] + 1, wo[d] + 1, d + 1).unwrap();
        }
        s.push_str("}\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpgroup::parse_word_list;

    fn words(s: &str) -> Vec<Word> {
        parse_word_list(s).unwrap()
    }

    #[test]
    fn whole_group_has_index_one() {
        let g = fold_subgroup(&words("a,b")).unwrap();
        assert_eq!(g.index(), Some(1));
        let (a, b) = coset_permutations(&g).unwrap();
        assert_eq!((a, b), (Permutation::identity(1), Permutation::identity(1)));
    }

    #[test]
    fn index_two_example() {
        let g = fold_subgroup(&words("aa,b,abA")).unwrap();
        assert_eq!(g.index(), Some(2));
        let (a, b) = coset_permutations(&g).unwrap();
        assert_eq!(a.to_string(), "(1 2)");
        assert_eq!(b, Permutation::identity(2));
    }

    #[test]
    fn cyclic_subgroup_is_infinite_index() {
        let g = fold_subgroup(&words("a")).unwrap();
        assert_eq!(g.n_vertices(), 1);
        assert_eq!(g.index(), None);
        assert_eq!(coset_permutations(&g).unwrap_err(), DessinError::InfiniteIndex);
        let trivial = fold_subgroup(&[]).unwrap();
        assert_eq!((trivial.n_vertices(), trivial.edges().len()), (1, 0));
    }

    #[test]
    fn conjugated_generator_folds_its_hair() {
        let g = fold_subgroup(&words("aba")).unwrap();
        assert!(g.is_folded());
        assert_eq!(g.read(&"aba".parse().unwrap()), Some(0));
        assert_eq!(g.read(&"ab".parse().unwrap()), Some(2));
    }

    #[test]
    fn rank_three_word_rejected() {
        assert!(matches!(fold_subgroup(&words("c")), Err(DessinError::Group(_))));
    }

    #[test]
    fn permutation_parsing() {
        let p = Permutation::parse("(1 2 3)(4 5)", None).unwrap();
        assert_eq!(p.images(), &[1, 2, 0, 4, 3]);
        assert_eq!(p.to_string(), "(1 2 3)(4 5)");
        assert_eq!(Permutation::parse("()", Some(3)).unwrap(), Permutation::identity(3));
        assert_eq!(Permutation::parse("(1,2)", Some(3)).unwrap().cycle_type(), vec![2, 1]);
        assert!(Permutation::parse("(1 2)(2 3)", None).is_err());
        assert!(Permutation::parse("(1 4)", Some(3)).is_err());
        assert!(Permutation::parse("1 2", None).is_err());
        assert!(Permutation::new(vec![0, 0]).is_err());
    }

    #[test]
    fn spec_dessins() {
        let d = build_dessin(Permutation::identity(1), Permutation::identity(1)).unwrap();
        assert_eq!((d.n_vertices(), d.n_darts(), d.faces().len(), d.genus()), (2, 1, 1, 0));
        let swap = Permutation::parse("(1 2)", None).unwrap();
        let d = build_dessin(swap, Permutation::identity(2)).unwrap();
        assert_eq!((d.n_vertices(), d.n_darts(), d.faces().len(), d.genus()), (3, 2, 1, 0));
        let c = Permutation::parse("(1 2 3)", None).unwrap();
        let d = build_dessin(c.clone(), c).unwrap();
        assert_eq!((d.n_vertices(), d.n_darts(), d.faces().len(), d.genus()), (2, 3, 1, 1));
    }

    #[test]
    fn disconnected_and_mismatched() {
        let id = Permutation::identity(2);
        assert_eq!(build_dessin(id.clone(), id.clone()).unwrap_err(), DessinError::Disconnected);
        assert_eq!(build_dessin(id, Permutation::identity(3)).unwrap_err(), DessinError::LengthMismatch(2, 3));
        assert_eq!(
            build_dessin(Permutation::identity(0), Permutation::identity(0)).unwrap_err(),
            DessinError::Empty
        );
    }

    #[test]
    fn dot_of_single_edge() {
        let d = build_dessin(Permutation::identity(1), Permutation::identity(1)).unwrap();
        let dot = d.to_dot();
        assert_eq!(dot.matches("fillcolor").count(), 2);
        assert_eq!(dot.matches(" -- ").count(), 1);
        assert_eq!(dot, d.clone().to_dot());
    }

    #[test]
    fn torus_summary() {
        let c = Permutation::parse("(1 2 3)", None).unwrap();
        let d = build_dessin(c.clone(), c).unwrap();
        let v: serde_json::Value = serde_json::from_str(&d.summary_json()).unwrap();
        assert_eq!(v["genus"], 1);
        assert_eq!(v["face_degrees"], serde_json::json!([3]));
        assert_eq!(d.summary_json(), d.summary_json());
    }
}
