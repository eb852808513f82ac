//! Simple undirected graphs in canonical form, the families the homology
//! engine is exercised on, and the structural operations between them
//! (edge deletion, disjoint union, bridges, vertex glue and split).

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Edge sets are stored as 64-bit masks throughout the chain layer.
pub const MAX_EDGES: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("edge ({0}, {1}) references a vertex outside 0..{2}")]
    BadIndex(usize, usize, usize),
    #[error("vertex index {0} out of range")]
    BadVertex(usize),
    #[error("edge index {0} out of range")]
    BadEdge(usize),
    #[error("{0} edges exceed the supported maximum of {MAX_EDGES}")]
    TooManyEdges(usize),
    #[error("{family} size {size} out of range")]
    SizeOutOfRange { family: &'static str, size: usize },
    #[error("vertices {0} and {1} are adjacent")]
    AdjacentVertices(usize, usize),
    #[error("vertices {0} and {1} share the neighbor {2}")]
    CommonNeighbor(usize, usize, usize),
    #[error("edges {0} and {1} share a vertex")]
    NotAMatching(usize, usize),
    #[error("edge assignment does not partition the edges at vertex {0}")]
    BadAssignment(usize),
    #[error("subgraph is not induced: {0}")]
    NotInduced(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid graph json: {0}")]
    Json(String),
}

/// Loop-free, multiplicity-free undirected graph with dense vertex indices.
///
/// Edges are stored as `(i, j)` with `i < j`, sorted lexicographically; the
/// position of an edge in that list is its index in the Koszul complex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    names: Vec<String>,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Builds a canonical graph; edge orientation is normalized.
    pub fn new(names: Vec<String>, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        let n = names.len();
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(GraphError::BadIndex(a, b, n));
            }
            if a == b {
                return Err(GraphError::Loop(a));
            }
            let e = (a.min(b), a.max(b));
            if !set.insert(e) {
                return Err(GraphError::DuplicateEdge(e.0, e.1));
            }
        }
        if set.len() > MAX_EDGES {
            return Err(GraphError::TooManyEdges(set.len()));
        }
        Ok(Graph { names, edges: set.into_iter().collect() })
    }

    /// Vertices named `t1..tn`.
    pub fn with_vertex_count(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        Self::new(default_names(n), edges)
    }

    pub fn empty(n: usize) -> Self {
        Graph { names: default_names(n), edges: Vec::new() }
    }

    pub fn validate(&self) -> Result<(), GraphError> {
        let n = self.vertex_count();
        for w in self.edges.windows(2) {
            if w[0] == w[1] {
                return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
            }
        }
        for &(a, b) in &self.edges {
            if a >= n || b >= n {
                return Err(GraphError::BadIndex(a, b, n));
            }
            if a == b {
                return Err(GraphError::Loop(a));
            }
            if a > b {
                return Err(GraphError::BadIndex(a, b, n));
            }
        }
        if !self.edges.windows(2).all(|w| w[0] < w[1]) {
            return Err(GraphError::DuplicateEdge(self.edges[0].0, self.edges[0].1));
        }
        if self.edges.len() > MAX_EDGES {
            return Err(GraphError::TooManyEdges(self.edges.len()));
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn edge_index(&self, a: usize, b: usize) -> Option<usize> {
        let key = (a.min(b), a.max(b));
        self.edges.binary_search(&key).ok()
    }

    pub fn is_adjacent(&self, a: usize, b: usize) -> bool {
        a != b && self.edge_index(a, b).is_some()
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| if a == v { Some(b) } else if b == v { Some(a) } else { None })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn incident_edges(&self, v: usize) -> Vec<usize> {
        (0..self.edges.len()).filter(|&e| self.edges[e].0 == v || self.edges[e].1 == v).collect()
    }

    pub fn valence(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    pub fn valences(&self) -> Vec<usize> {
        let mut val = vec![0; self.vertex_count()];
        for &(a, b) in &self.edges {
            val[a] += 1;
            val[b] += 1;
        }
        val
    }

    /// Path on `n` vertices `t1 - t2 - ... - tn`.
    pub fn path(n: usize) -> Result<Self, GraphError> {
        if n < 1 {
            return Err(GraphError::SizeOutOfRange { family: "path", size: n });
        }
        Self::with_vertex_count(n, (1..n).map(|i| (i - 1, i)))
    }

    /// Cycle `t1 - t2 - ... - tn - t1`.
    pub fn cycle(n: usize) -> Result<Self, GraphError> {
        if n < 3 {
            return Err(GraphError::SizeOutOfRange { family: "cycle", size: n });
        }
        Self::with_vertex_count(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    /// Star with center `c` (index 0) and leaves `l1..lk`.
    pub fn star(k: usize) -> Result<Self, GraphError> {
        if k < 1 {
            return Err(GraphError::SizeOutOfRange { family: "star", size: k });
        }
        let names = std::iter::once("c".to_string()).chain((1..=k).map(|i| format!("l{i}"))).collect();
        Self::new(names, (1..=k).map(|i| (0, i)))
    }

    /// Two cycles of lengths `n` and `m` sharing one vertex.
    ///
    /// Labelling: the shared vertex `g` is 0, then the first link
    /// `a1..a(n-1)`, then the second link `b1..b(m-1)`.
    pub fn figure_eight(n: usize, m: usize) -> Result<Self, GraphError> {
        for (s, family) in [(n, "figure-eight link"), (m, "figure-eight link")] {
            if s < 3 {
                return Err(GraphError::SizeOutOfRange { family, size: s });
            }
        }
        let mut names = vec!["g".to_string()];
        names.extend((1..n).map(|i| format!("a{i}")));
        names.extend((1..m).map(|i| format!("b{i}")));
        let mut edges = Vec::new();
        let a = |i: usize| if i == 0 || i == n { 0 } else { i };
        for i in 0..n {
            edges.push((a(i), a(i + 1)));
        }
        let b = |j: usize| if j == 0 || j == m { 0 } else { n - 1 + j };
        for j in 0..m {
            edges.push((b(j), b(j + 1)));
        }
        Self::new(names, edges)
    }

    pub fn disjoint_union(g1: &Graph, g2: &Graph) -> Graph {
        let off = g1.vertex_count();
        let mut names = g1.names.clone();
        for name in &g2.names {
            let mut candidate = name.clone();
            while names.contains(&candidate) {
                candidate.push('\'');
            }
            names.push(candidate);
        }
        let edges = g1.edges.iter().copied().chain(g2.edges.iter().map(|&(a, b)| (a + off, b + off)));
        Graph::new(names, edges).expect("union of valid graphs is valid")
    }

    /// Disjoint union plus the single edge joining `a` in `g1` to `b` in `g2`.
    pub fn bridge_join(g1: &Graph, g2: &Graph, a: usize, b: usize) -> Result<Graph, GraphError> {
        if a >= g1.vertex_count() {
            return Err(GraphError::BadVertex(a));
        }
        if b >= g2.vertex_count() {
            return Err(GraphError::BadVertex(b));
        }
        let u = Graph::disjoint_union(g1, g2);
        let mut edges = u.edges.clone();
        edges.push((a, g1.vertex_count() + b));
        Graph::new(u.names, edges)
    }

    /// Removes edge `e`; returns the smaller graph and, for every edge of
    /// `self`, its index in the smaller graph.
    pub fn delete_edge(&self, e: usize) -> Result<(Graph, Vec<Option<usize>>), GraphError> {
        if e >= self.edge_count() {
            return Err(GraphError::BadEdge(e));
        }
        let edges: Vec<_> = self.edges.iter().enumerate().filter(|&(i, _)| i != e).map(|(_, &x)| x).collect();
        let small = Graph::new(self.names.clone(), edges)?;
        let map = (0..self.edge_count())
            .map(|i| match i.cmp(&e) {
                std::cmp::Ordering::Less => Some(i),
                std::cmp::Ordering::Equal => None,
                std::cmp::Ordering::Greater => Some(i - 1),
            })
            .collect();
        Ok((small, map))
    }

    /// Induced subgraph on `vertices` (in the given order).
    pub fn induced(&self, vertices: &[usize]) -> Result<Graph, GraphError> {
        let mut pos = HashMap::new();
        for (i, &v) in vertices.iter().enumerate() {
            if v >= self.vertex_count() {
                return Err(GraphError::BadVertex(v));
            }
            pos.insert(v, i);
        }
        let names = vertices.iter().map(|&v| self.names[v].clone()).collect();
        let edges = self.edges.iter().filter_map(|&(a, b)| Some((*pos.get(&a)?, *pos.get(&b)?)));
        Graph::new(names, edges)
    }

    /// Checks that `sub`, placed via `vertex_map`, is an induced subgraph.
    pub fn check_induced(&self, sub: &Graph, vertex_map: &[usize]) -> Result<(), GraphError> {
        if vertex_map.len() != sub.vertex_count() {
            return Err(GraphError::NotInduced("vertex map length differs from subgraph size".into()));
        }
        let distinct: BTreeSet<_> = vertex_map.iter().collect();
        if distinct.len() != vertex_map.len() {
            return Err(GraphError::NotInduced("vertex map is not injective".into()));
        }
        let expected = self.induced(vertex_map)?;
        if expected.edges != sub.edges {
            return Err(GraphError::NotInduced("edge sets differ from the induced subgraph".into()));
        }
        Ok(())
    }

    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![s];
            let mut members = Vec::new();
            comp[s] = id;
            while let Some(v) = stack.pop() {
                members.push(v);
                for w in self.neighbors(v) {
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        stack.push(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_bridge(&self, e: usize) -> bool {
        match self.delete_edge(e) {
            Ok((g, _)) => g.connected_components().len() > self.connected_components().len(),
            Err(_) => false,
        }
    }

    pub fn is_tree(&self) -> bool {
        self.vertex_count() > 0
            && self.edge_count() + 1 == self.vertex_count()
            && self.connected_components().len() == 1
    }

    /// Identifies non-adjacent vertices `a` (becoming α) and `b` (β) that
    /// share no neighbor. The merged vertex γ takes the lower index.
    pub fn glue_vertices(&self, a: usize, b: usize) -> Result<GlueMap, GraphError> {
        let n = self.vertex_count();
        for v in [a, b] {
            if v >= n {
                return Err(GraphError::BadVertex(v));
            }
        }
        if a == b || self.is_adjacent(a, b) {
            return Err(GraphError::AdjacentVertices(a, b));
        }
        let na: BTreeSet<_> = self.neighbors(a).into_iter().collect();
        if let Some(&c) = self.neighbors(b).iter().find(|c| na.contains(c)) {
            return Err(GraphError::CommonNeighbor(a, b, c));
        }
        let (gamma, removed) = (a.min(b), a.max(b));
        let vertex_map: Vec<usize> = (0..n)
            .map(|v| match v.cmp(&removed) {
                std::cmp::Ordering::Less => v,
                std::cmp::Ordering::Equal => gamma,
                std::cmp::Ordering::Greater => v - 1,
            })
            .collect();
        let mut names: Vec<String> = (0..n).filter(|&v| v != removed).map(|v| self.names[v].clone()).collect();
        names[gamma] = if a < b { self.names[a].clone() } else { self.names[b].clone() };
        let mapped: Vec<(usize, usize)> =
            self.edges.iter().map(|&(x, y)| (vertex_map[x], vertex_map[y])).collect();
        let glued = Graph::new(names, mapped.iter().copied())?;
        let edge_map: Vec<usize> =
            mapped.iter().map(|&(x, y)| glued.edge_index(x, y).expect("mapped edge present")).collect();
        let mut alpha_edges = Vec::new();
        let mut beta_edges = Vec::new();
        for (e, &(x, y)) in self.edges.iter().enumerate() {
            if x == a || y == a {
                alpha_edges.push(edge_map[e]);
            } else if x == b || y == b {
                beta_edges.push(edge_map[e]);
            }
        }
        alpha_edges.sort_unstable();
        beta_edges.sort_unstable();
        Ok(GlueMap {
            glued,
            alpha: a,
            beta: b,
            vertex_map,
            edge_map,
            assignment: EdgeAssignment { gamma, alpha_edges, beta_edges },
        })
    }

    /// Splits `assignment.gamma` into α (keeping its index) and β (appended
    /// as the last vertex); β receives the edges listed in `beta_edges`.
    pub fn split_vertex(&self, assignment: &EdgeAssignment) -> Result<SplitMap, GraphError> {
        let gamma = assignment.gamma;
        if gamma >= self.vertex_count() {
            return Err(GraphError::BadVertex(gamma));
        }
        let mut at_gamma = self.incident_edges(gamma);
        let mut given: Vec<usize> =
            assignment.alpha_edges.iter().chain(&assignment.beta_edges).copied().collect();
        at_gamma.sort_unstable();
        given.sort_unstable();
        if at_gamma != given {
            return Err(GraphError::BadAssignment(gamma));
        }
        let beta = self.vertex_count();
        let mut names = self.names.clone();
        names[gamma] = format!("{}_a", self.names[gamma]);
        names.push(format!("{}_b", self.names[gamma]));
        let to_beta: BTreeSet<_> = assignment.beta_edges.iter().copied().collect();
        let moved: Vec<(usize, usize)> = self
            .edges
            .iter()
            .enumerate()
            .map(|(e, &(x, y))| {
                if to_beta.contains(&e) {
                    if x == gamma { (beta, y) } else { (x, beta) }
                } else {
                    (x, y)
                }
            })
            .collect();
        let split = Graph::new(names, moved.iter().copied())?;
        let edge_map = moved.iter().map(|&(x, y)| split.edge_index(x, y).unwrap()).collect();
        Ok(SplitMap { split, alpha: gamma, beta, edge_map })
    }

    /// All matchings with at most `max_size` edges, in lexicographic order
    /// of their sorted edge-index lists (the empty matching first).
    pub fn enumerate_matchings(&self, max_size: usize) -> Vec<Matching> {
        fn rec(g: &Graph, start: usize, used: &mut Vec<bool>, cur: &mut Vec<usize>, max: usize, out: &mut Vec<Matching>) {
            out.push(Matching(cur.clone()));
            if cur.len() == max {
                return;
            }
            for e in start..g.edge_count() {
                let (a, b) = g.edges[e];
                if used[a] || used[b] {
                    continue;
                }
                used[a] = true;
                used[b] = true;
                cur.push(e);
                rec(g, e + 1, used, cur, max, out);
                cur.pop();
                used[a] = false;
                used[b] = false;
            }
        }
        let mut out = Vec::new();
        rec(self, 0, &mut vec![false; self.vertex_count()], &mut Vec::new(), max_size, &mut out);
        out
    }

    /// Vertex triples `a < b < c` spanning a triangle, lexicographic.
    pub fn triangles(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for &(a, b) in &self.edges {
            for c in (b + 1)..self.vertex_count() {
                if self.is_adjacent(a, c) && self.is_adjacent(b, c) {
                    out.push((a, b, c));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// One representative of every isomorphism class of trees on `n` vertices.
    pub fn nonisomorphic_trees(n: usize) -> Vec<Graph> {
        if n == 0 {
            return Vec::new();
        }
        if n == 1 {
            return vec![Graph::empty(1)];
        }
        if n == 2 {
            return vec![Graph::path(2).unwrap()];
        }
        let mut seen = BTreeMap::new();
        let mut code = vec![0usize; n - 2];
        loop {
            let edges = prufer_edges(&code, n);
            let g = Graph::with_vertex_count(n, edges).expect("prufer tree valid");
            seen.entry(tree_canonical_form(&g)).or_insert(g);
            // next Prüfer code
            let mut i = 0;
            loop {
                if i == code.len() {
                    return seen.into_values().collect();
                }
                code[i] += 1;
                if code[i] < n {
                    break;
                }
                code[i] = 0;
                i += 1;
            }
        }
    }

    /// Text form: one edge per line `u v`, `#` comments, a single name
    /// declares an isolated vertex. Vertices are indexed by first appearance.
    pub fn parse_text(src: &str) -> Result<Graph, GraphError> {
        let mut names: Vec<String> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut edges = Vec::new();
        let mut intern = |s: &str, names: &mut Vec<String>| -> usize {
            *index.entry(s.to_string()).or_insert_with(|| {
                names.push(s.to_string());
                names.len() - 1
            })
        };
        for (ln, line) in src.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks.as_slice() {
                [v] => {
                    intern(v, &mut names);
                }
                [u, v] => {
                    let a = intern(u, &mut names);
                    let b = intern(v, &mut names);
                    edges.push((a, b));
                }
                _ => {
                    return Err(GraphError::Parse { line: ln + 1, msg: format!("expected `u v`, got {line:?}") })
                }
            }
        }
        Graph::new(names, edges).map_err(|e| match e {
            GraphError::Loop(_) | GraphError::DuplicateEdge(..) => e,
            other => GraphError::Parse { line: 0, msg: other.to_string() },
        })
    }

    pub fn parse_json(src: &str) -> Result<Graph, GraphError> {
        let raw: GraphJson = serde_json::from_str(src).map_err(|e| GraphError::Json(e.to_string()))?;
        Graph::new(raw.vertices, raw.edges.into_iter().map(|[a, b]| (a, b)))
    }

    /// Accepts either format; JSON is recognized by a leading `{`.
    pub fn parse(src: &str) -> Result<Graph, GraphError> {
        if src.trim_start().starts_with('{') {
            Self::parse_json(src)
        } else {
            Self::parse_text(src)
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(GraphJson {
            vertices: self.names.clone(),
            edges: self.edges.iter().map(|&(a, b)| [a, b]).collect(),
        })
        .expect("graph serializes")
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<String> =
            self.edges.iter().map(|&(a, b)| format!("{}{}", self.names[a], self.names[b])).collect();
        write!(f, "G[{} vertices; {}]", self.vertex_count(), edges.join(","))
    }
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    vertices: Vec<String>,
    edges: Vec<[usize; 2]>,
}

fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("t{i}")).collect()
}

fn prufer_edges(code: &[usize], n: usize) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; n];
    for &c in code {
        degree[c] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &c in code {
        let leaf = (0..n).find(|&v| degree[v] == 1).unwrap();
        edges.push((leaf, c));
        degree[leaf] -= 1;
        degree[c] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

/// AHU encoding rooted at the center(s); equal strings iff isomorphic trees.
fn tree_canonical_form(g: &Graph) -> String {
    let n = g.vertex_count();
    let adj: Vec<Vec<usize>> = (0..n).map(|v| g.neighbors(v)).collect();
    let mut deg: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut remaining = n;
    let mut layer: Vec<usize> = (0..n).filter(|&v| deg[v] <= 1).collect();
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &v in &layer {
            deg[v] = 0;
            for &w in &adj[v] {
                if deg[w] > 0 {
                    deg[w] -= 1;
                    if deg[w] == 1 {
                        next.push(w);
                    }
                }
            }
        }
        layer = next;
    }
    fn encode(adj: &[Vec<usize>], v: usize, parent: usize) -> String {
        let mut kids: Vec<String> =
            adj[v].iter().filter(|&&w| w != parent).map(|&w| encode(adj, w, v)).collect();
        kids.sort();
        format!("({})", kids.concat())
    }
    layer.iter().map(|&c| encode(&adj, c, usize::MAX)).min().unwrap_or_default()
}

/// A set of pairwise vertex-disjoint edges, as sorted edge indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Matching(Vec<usize>);

impl Matching {
    pub fn new(g: &Graph, edges: impl IntoIterator<Item = usize>) -> Result<Self, GraphError> {
        let mut es: Vec<usize> = edges.into_iter().collect();
        es.sort_unstable();
        es.dedup();
        for &e in &es {
            if e >= g.edge_count() {
                return Err(GraphError::BadEdge(e));
            }
        }
        for (i, &e) in es.iter().enumerate() {
            for &f in &es[i + 1..] {
                let (a, b) = g.edge(e);
                let (c, d) = g.edge(f);
                if a == c || a == d || b == c || b == d {
                    return Err(GraphError::NotAMatching(e, f));
                }
            }
        }
        Ok(Matching(es))
    }

    pub fn empty() -> Self {
        Matching(Vec::new())
    }

    pub fn edges(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, e: usize) -> bool {
        self.0.binary_search(&e).is_ok()
    }

    /// Same matching with `e` added (used for quotient towers).
    pub fn with(&self, g: &Graph, e: usize) -> Result<Self, GraphError> {
        Matching::new(g, self.0.iter().copied().chain(std::iter::once(e)))
    }

    pub fn without(&self, e: usize) -> Self {
        Matching(self.0.iter().copied().filter(|&f| f != e).collect())
    }
}

/// Which edges at the split vertex γ go to α and which to β, as edge
/// indices of the glued graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeAssignment {
    pub gamma: usize,
    pub alpha_edges: Vec<usize>,
    pub beta_edges: Vec<usize>,
}

/// Result of [`Graph::glue_vertices`].
#[derive(Debug, Clone)]
pub struct GlueMap {
    pub glued: Graph,
    pub alpha: usize,
    pub beta: usize,
    /// Vertex of the original graph -> vertex of the glued graph.
    pub vertex_map: Vec<usize>,
    /// Edge of the original graph -> edge of the glued graph.
    pub edge_map: Vec<usize>,
    pub assignment: EdgeAssignment,
}

/// Result of [`Graph::split_vertex`].
#[derive(Debug, Clone)]
pub struct SplitMap {
    pub split: Graph,
    pub alpha: usize,
    pub beta: usize,
    /// Edge of the glued graph -> edge of the split graph.
    pub edge_map: Vec<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validate_rejects_loops_and_duplicates() {
        assert!(Graph::with_vertex_count(3, [(0, 1), (1, 2)]).unwrap().validate().is_ok());
        assert_eq!(Graph::with_vertex_count(3, [(2, 2)]), Err(GraphError::Loop(2)));
        assert_eq!(Graph::with_vertex_count(3, [(0, 1), (0, 1)]), Err(GraphError::DuplicateEdge(0, 1)));
        assert_eq!(Graph::with_vertex_count(3, [(0, 1), (1, 0)]), Err(GraphError::DuplicateEdge(0, 1)));
        assert_eq!(Graph::with_vertex_count(2, [(0, 5)]), Err(GraphError::BadIndex(0, 5, 2)));
    }

    #[test]
    fn families() {
        let tri = Graph::cycle(3).unwrap();
        assert_eq!(tri.edge_count(), 3);
        let f = Graph::figure_eight(3, 3).unwrap();
        assert_eq!((f.vertex_count(), f.edge_count()), (5, 6));
        assert_eq!(f.valence(0), 4);
        let p2 = Graph::path(2).unwrap();
        assert_eq!(p2.edges(), &[(0, 1)]);
        assert!(Graph::cycle(2).is_err());
        assert!(Graph::path(0).is_err());
        assert!(Graph::figure_eight(2, 4).is_err());
        for g in [tri, f, p2, Graph::star(4).unwrap()] {
            assert!(g.validate().is_ok());
            let again = Graph::new(g.names().to_vec(), g.edges().iter().map(|&(a, b)| (b, a))).unwrap();
            assert_eq!(again, g);
        }
    }

    #[test]
    fn figure_eight_labelling() {
        let f = Graph::figure_eight(4, 5).unwrap();
        assert_eq!(f.names(), &["g", "a1", "a2", "a3", "b1", "b2", "b3", "b4"]);
        assert_eq!(f.neighbors(0), vec![1, 3, 4, 7]);
        assert_eq!(f.neighbors(2), vec![1, 3]);
        assert_eq!(f.neighbors(5), vec![4, 6]);
    }

    #[test]
    fn unions_and_bridges() {
        let e = Graph::path(2).unwrap();
        let u = Graph::disjoint_union(&e, &e);
        assert_eq!((u.vertex_count(), u.edge_count()), (4, 2));
        let tri = Graph::cycle(3).unwrap();
        let b = Graph::bridge_join(&tri, &tri, 0, 0).unwrap();
        assert_eq!((b.vertex_count(), b.edge_count()), (6, 7));
        let e03 = b.edge_index(0, 3).unwrap();
        assert!(b.is_bridge(e03));
        for e in 0..b.edge_count() {
            if e != e03 {
                assert!(!b.is_bridge(e));
            }
        }
        let p1 = Graph::path(1).unwrap();
        let j = Graph::bridge_join(&p1, &p1, 0, 0).unwrap();
        assert_eq!((j.vertex_count(), j.edges()), (2, &[(0, 1)][..]));
        assert_eq!(Graph::bridge_join(&p1, &p1, 1, 0).unwrap_err(), GraphError::BadVertex(1));
    }

    #[test]
    fn glue_path_endpoints_gives_cycle() {
        let p = Graph::path(5).unwrap();
        let gm = p.glue_vertices(0, 4).unwrap();
        let c4 = Graph::cycle(4).unwrap();
        assert_eq!(gm.glued.edges(), c4.edges());
        assert_eq!(gm.assignment.alpha_edges.len(), 1);
        assert_eq!(gm.assignment.beta_edges.len(), 1);
    }

    #[test]
    fn glue_isolated_vertices() {
        let g = Graph::with_vertex_count(4, [(0, 1)]).unwrap();
        let gm = g.glue_vertices(2, 3).unwrap();
        assert_eq!(gm.glued.vertex_count(), 3);
        assert_eq!(gm.glued.edges(), g.edges());
    }

    #[test]
    fn glue_errors() {
        let tri = Graph::cycle(3).unwrap();
        assert_eq!(tri.glue_vertices(0, 1).unwrap_err(), GraphError::AdjacentVertices(0, 1));
        let p3 = Graph::path(3).unwrap();
        assert_eq!(p3.glue_vertices(0, 2).unwrap_err(), GraphError::CommonNeighbor(0, 2, 1));
    }

    #[test]
    fn glue_then_split_round_trips() {
        let c1 = Graph::cycle(4).unwrap();
        let c2 = Graph::cycle(5).unwrap();
        let two = Graph::disjoint_union(&c1, &c2);
        let gm = two.glue_vertices(0, 4).unwrap();
        assert_eq!(gm.glued.edges(), Graph::figure_eight(4, 5).unwrap().edges());
        let sm = gm.glued.split_vertex(&gm.assignment).unwrap();
        let relabel = |v: usize| if v == gm.beta { sm.beta } else { gm.vertex_map[v] };
        let mut expect: Vec<(usize, usize)> = two
            .edges()
            .iter()
            .map(|&(a, b)| (relabel(a).min(relabel(b)), relabel(a).max(relabel(b))))
            .collect();
        expect.sort_unstable();
        assert_eq!(sm.split.edges(), &expect[..]);
        let back = sm.split.glue_vertices(sm.alpha, sm.beta).unwrap();
        assert_eq!(back.glued.edges(), gm.glued.edges());
    }

    #[test]
    fn matchings_of_small_graphs() {
        let c4 = Graph::cycle(4).unwrap();
        // brute force over all edge subsets
        let mut brute = Vec::new();
        for mask in 0u32..(1 << c4.edge_count()) {
            let es: Vec<usize> = (0..c4.edge_count()).filter(|&e| mask >> e & 1 == 1).collect();
            if Matching::new(&c4, es.clone()).is_ok() {
                brute.push(es);
            }
        }
        let found: Vec<Vec<usize>> = c4.enumerate_matchings(4).into_iter().map(|m| m.0).collect();
        let mut sorted_brute = brute.clone();
        sorted_brute.sort();
        let mut sorted_found = found.clone();
        sorted_found.sort();
        assert_eq!(sorted_found, sorted_brute);
        let maximal: Vec<&Vec<usize>> = found.iter().filter(|m| m.len() == 2).collect();
        // cycle(4) edges: (0,1)=e0,(0,3)=e1,(1,2)=e2,(2,3)=e3
        assert_eq!(maximal, vec![&vec![0, 3], &vec![1, 2]]);
        let p2 = Graph::path(2).unwrap();
        let m: Vec<Vec<usize>> = p2.enumerate_matchings(5).into_iter().map(|m| m.0).collect();
        assert_eq!(m, vec![vec![], vec![0]]);
        assert_eq!(Matching::new(&c4, [0, 1]).unwrap_err(), GraphError::NotAMatching(0, 1));
    }

    #[test]
    fn triangles_found() {
        assert_eq!(Graph::cycle(3).unwrap().triangles(), vec![(0, 1, 2)]);
        assert!(Graph::cycle(4).unwrap().triangles().is_empty());
        assert_eq!(Graph::figure_eight(3, 3).unwrap().triangles().len(), 2);
    }

    #[test]
    fn tree_counts() {
        let counts: Vec<usize> = (1..=7).map(|n| Graph::nonisomorphic_trees(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 1, 2, 3, 6, 11]);
        for g in Graph::nonisomorphic_trees(6) {
            assert!(g.is_tree());
        }
    }

    #[test]
    fn parse_formats() {
        let g = Graph::parse("# triangle\na b\nb c\nc a\nd\n").unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edges(), &[(0, 1), (0, 2), (1, 2)]);
        let j = Graph::parse(&g.to_json().to_string()).unwrap();
        assert_eq!(j, g);
        assert!(matches!(Graph::parse("a b c"), Err(GraphError::Parse { line: 1, .. })));
        assert_eq!(Graph::parse("a a"), Err(GraphError::Loop(0)));
    }
}
