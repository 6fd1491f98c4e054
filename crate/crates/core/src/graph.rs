//! Simplicial graphs, oriented edges, paths, ℓ-fragments, medians and group
//! actions by graph automorphisms.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt::Debug;
use std::hash::Hash;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use thiserror::Error;

/// Anything usable as a vertex.
pub trait Vertex: Clone + Eq + Ord + Hash + Debug + Send + Sync + 'static {}

impl<T: Clone + Eq + Ord + Hash + Debug + Send + Sync + 'static> Vertex for T {}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("path repeats vertex {0}")]
    RepeatedVertex(String),
    #[error("consecutive path vertices {0} and {1} are not adjacent")]
    NotAdjacent(String, String),
    #[error("vertex {0} is not on the path")]
    NotOnPath(String),
    #[error("vertices {0} and {1} are not connected")]
    Disconnected(String, String),
    #[error("no median for triple ({0}, {1}, {2})")]
    NoMedian(String, String, String),
    #[error("triple ({0}, {1}, {2}) has {3} medians")]
    MultipleMedians(String, String, String, usize),
    #[error("loop at vertex {0}")]
    Loop(String),
    #[error("edge {0}–{1} listed twice")]
    MultiEdge(String, String),
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("duplicate vertex name {0:?}")]
    DuplicateVertex(String),
    #[error("generator {0} is not a bijection of the vertex set")]
    NotBijective(String),
    #[error("generator {generator} does not map edge {edge} to an edge")]
    NotAutomorphism { generator: String, edge: String },
    #[error("invalid graph description: {0}")]
    Json(String),
}

/// An oriented edge `(α, ω)` with head `α` and tail `ω`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct OrientedEdge<V> {
    pub head: V,
    pub tail: V,
}

impl<V: Clone> OrientedEdge<V> {
    pub fn new(head: V, tail: V) -> Self {
        OrientedEdge { head, tail }
    }

    pub fn reversed(&self) -> Self {
        OrientedEdge {
            head: self.tail.clone(),
            tail: self.head.clone(),
        }
    }
}

/// A sequence of distinct vertices, consecutive ones adjacent.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Path<V> {
    vertices: Vec<V>,
}

impl<V: Vertex> Path<V> {
    /// Builds a path, checking only that vertices are distinct; use
    /// [`Path::in_graph`] to also check adjacency.
    pub fn new(vertices: Vec<V>) -> Result<Self, GraphError> {
        assert!(!vertices.is_empty(), "a path has at least one vertex");
        let mut seen: Vec<&V> = vertices.iter().collect();
        seen.sort();
        if let Some(w) = seen.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::RepeatedVertex(format!("{:?}", w[0])));
        }
        Ok(Path { vertices })
    }

    pub fn in_graph<G: Graph<Vertex = V> + ?Sized>(graph: &G, vertices: Vec<V>) -> Result<Self, GraphError> {
        let path = Path::new(vertices)?;
        for w in path.vertices.windows(2) {
            if !graph.is_adjacent(&w[0], &w[1]) {
                return Err(GraphError::NotAdjacent(format!("{:?}", w[0]), format!("{:?}", w[1])));
            }
        }
        Ok(path)
    }

    /// For callers that build paths which are distinct by construction.
    pub(crate) fn from_distinct(vertices: Vec<V>) -> Self {
        debug_assert!(Path::new(vertices.clone()).is_ok());
        Path { vertices }
    }

    pub fn trivial(v: V) -> Self {
        Path { vertices: vec![v] }
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.len() == 1
    }

    pub fn vertices(&self) -> &[V] {
        &self.vertices
    }

    pub fn start(&self) -> &V {
        &self.vertices[0]
    }

    pub fn end(&self) -> &V {
        self.vertices.last().unwrap()
    }

    pub fn edge(&self, i: usize) -> OrientedEdge<V> {
        OrientedEdge::new(self.vertices[i].clone(), self.vertices[i + 1].clone())
    }

    pub fn edges(&self) -> impl Iterator<Item = OrientedEdge<V>> + '_ {
        (0..self.len()).map(|i| self.edge(i))
    }

    pub fn reversed(&self) -> Self {
        Path {
            vertices: self.vertices.iter().rev().cloned().collect(),
        }
    }

    /// The subpath through vertices `i..=j` (reversed when `i > j`).
    pub fn subpath(&self, i: usize, j: usize) -> Self {
        if i <= j {
            Path {
                vertices: self.vertices[i..=j].to_vec(),
            }
        } else {
            Path {
                vertices: self.vertices[j..=i].iter().rev().cloned().collect(),
            }
        }
    }

    pub fn position(&self, v: &V) -> Option<usize> {
        self.vertices.iter().position(|w| w == v)
    }

    /// `self * other`, defined when `other` starts where `self` ends and the
    /// result has distinct vertices.
    pub fn concat(&self, other: &Path<V>) -> Option<Path<V>> {
        if self.end() != other.start() {
            return None;
        }
        let mut vertices = self.vertices.clone();
        vertices.extend(other.vertices[1..].iter().cloned());
        Path::new(vertices).ok()
    }

    pub fn map<W: Vertex>(&self, f: impl Fn(&V) -> W) -> Path<W> {
        Path {
            vertices: self.vertices.iter().map(f).collect(),
        }
    }
}

/// Strictly increasing edge positions of an ℓ-fragment.
pub type FragmentIndices = SmallVec<[usize; 8]>;

/// An ℓ-fragment of a path: ℓ of its edges, in path order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fragment<'p, V> {
    path: &'p Path<V>,
    indices: FragmentIndices,
}

impl<'p, V: Vertex> Fragment<'p, V> {
    pub fn new(path: &'p Path<V>, indices: FragmentIndices) -> Self {
        assert!(!indices.is_empty(), "fragments have at least one edge");
        assert!(indices.windows(2).all(|w| w[0] < w[1]), "fragment indices must increase");
        assert!(*indices.last().unwrap() < path.len(), "fragment index out of range");
        Fragment { path, indices }
    }

    pub fn path(&self) -> &'p Path<V> {
        self.path
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn size(&self) -> usize {
        self.indices.len()
    }

    /// `α(a)`, the start of the first chosen edge.
    pub fn head(&self) -> &'p V {
        &self.path.vertices[self.indices[0]]
    }

    /// `ω(a)`, the end of the last chosen edge.
    pub fn tail(&self) -> &'p V {
        &self.path.vertices[*self.indices.last().unwrap() + 1]
    }

    pub fn edges(&self) -> Vec<OrientedEdge<V>> {
        self.indices.iter().map(|&i| self.path.edge(i)).collect()
    }

    /// Whether `m` lies strictly between `α(a)` and `ω(a)` on the path.
    pub fn contains(&self, m: &V) -> Result<bool, GraphError> {
        let pos = self
            .path
            .position(m)
            .ok_or_else(|| GraphError::NotOnPath(format!("{m:?}")))?;
        Ok(self.contains_position(pos))
    }

    pub fn contains_position(&self, pos: usize) -> bool {
        self.indices[0] < pos && pos <= *self.indices.last().unwrap()
    }

    /// `ā`, as a fragment of `reversed` (which must be the reversal of the
    /// parent path).
    pub fn reversed_on<'q>(&self, reversed: &'q Path<V>) -> Fragment<'q, V> {
        debug_assert_eq!(reversed.len(), self.path.len());
        let n = self.path.len();
        Fragment {
            path: reversed,
            indices: self.indices.iter().rev().map(|&i| n - 1 - i).collect(),
        }
    }
}

/// All index sets of size `ell` from `0..n`, lexicographically.
pub fn fragment_indices(n: usize, ell: usize) -> impl Iterator<Item = FragmentIndices> {
    (0..n).combinations(ell).map(FragmentIndices::from_vec)
}

/// `p^(ℓ)` in lexicographic order; empty when `ℓ` exceeds the length.
pub fn fragments<V: Vertex>(p: &Path<V>, ell: usize) -> Vec<Fragment<'_, V>> {
    assert!(ell >= 1, "fragment size must be positive");
    if ell > p.len() {
        return Vec::new();
    }
    fragment_indices(p.len(), ell)
        .map(|indices| Fragment { path: p, indices })
        .collect()
}

/// An undirected simplicial graph, possibly infinite and generated lazily.
pub trait Graph {
    type Vertex: Vertex;

    fn is_adjacent(&self, u: &Self::Vertex, v: &Self::Vertex) -> bool;
}

/// A group acting on vertices through a finite list of generators. Inverses
/// of generators are not implied; actions that need them list them.
pub trait GraphAction<V>: Send + Sync {
    fn generator_count(&self) -> usize;

    fn generator_name(&self, i: usize) -> String;

    fn apply(&self, i: usize, v: &V) -> V;
}

/// The action of the trivial group.
#[derive(Clone, Copy, Debug, Default)]
pub struct TrivialAction;

impl<V> GraphAction<V> for TrivialAction {
    fn generator_count(&self) -> usize {
        0
    }

    fn generator_name(&self, _i: usize) -> String {
        unreachable!("the trivial action has no generators")
    }

    fn apply(&self, _i: usize, _v: &V) -> V {
        unreachable!("the trivial action has no generators")
    }
}

/// Generators given as permutations of `0..n`.
#[derive(Clone, Debug, Default)]
pub struct PermutationAction {
    names: Vec<String>,
    perms: Vec<Vec<usize>>,
}

impl PermutationAction {
    pub fn new() -> Self {
        PermutationAction::default()
    }

    pub fn with_generator(mut self, name: impl Into<String>, perm: Vec<usize>) -> Self {
        self.names.push(name.into());
        self.perms.push(perm);
        self
    }

    pub fn is_trivial(&self) -> bool {
        self.perms.is_empty()
    }

    pub fn permutations(&self) -> &[Vec<usize>] {
        &self.perms
    }

    /// Checks that each generator is a bijection that maps edges to edges.
    pub fn verify(&self, graph: &FiniteGraph) -> Result<(), GraphError> {
        let n = graph.vertex_count();
        for (name, perm) in self.names.iter().zip(&self.perms) {
            let mut hit = vec![false; n];
            if perm.len() != n {
                return Err(GraphError::NotBijective(name.clone()));
            }
            for &v in perm {
                if v >= n || std::mem::replace(&mut hit[v], true) {
                    return Err(GraphError::NotBijective(name.clone()));
                }
            }
            for (u, v) in graph.edges() {
                if !graph.is_adjacent(&perm[u], &perm[v]) {
                    return Err(GraphError::NotAutomorphism {
                        generator: name.clone(),
                        edge: format!("{}–{}", graph.name(u), graph.name(v)),
                    });
                }
            }
        }
        Ok(())
    }
}

impl GraphAction<usize> for PermutationAction {
    fn generator_count(&self) -> usize {
        self.perms.len()
    }

    fn generator_name(&self, i: usize) -> String {
        self.names[i].clone()
    }

    fn apply(&self, i: usize, v: &usize) -> usize {
        self.perms[i][*v]
    }
}

/// Checks on the given edges that every generator maps edges to edges.
pub fn check_automorphism_on<G, A>(graph: &G, action: &A, edges: &[(G::Vertex, G::Vertex)]) -> Option<String>
where
    G: Graph,
    A: GraphAction<G::Vertex> + ?Sized,
{
    for i in 0..action.generator_count() {
        for (u, v) in edges {
            if !graph.is_adjacent(&action.apply(i, u), &action.apply(i, v)) {
                return Some(format!("{} maps edge {u:?}–{v:?} to a non-edge", action.generator_name(i)));
            }
        }
    }
    None
}

/// JSON form of a finite graph with an optional group action.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphSpec {
    pub vertices: Vec<String>,
    pub edges: Vec<[String; 2]>,
    #[serde(default)]
    pub generators: Vec<GeneratorSpec>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub name: String,
    pub permutation: BTreeMap<String, String>,
}

/// A finite connected-or-not simplicial graph on vertices `0..n` with names
/// and an all-pairs distance table.
#[derive(Clone, Debug)]
pub struct FiniteGraph {
    names: Vec<String>,
    adjacency: Vec<Vec<usize>>,
    dist: Vec<Vec<u32>>,
}

pub const UNREACHABLE: u32 = u32::MAX;

impl FiniteGraph {
    pub fn new(names: Vec<String>, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let n = names.len();
        let mut index = HashMap::new();
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.as_str(), i).is_some() {
                return Err(GraphError::DuplicateVertex(name.clone()));
            }
        }
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::UnknownVertex(format!("{}", u.max(v))));
            }
            if u == v {
                return Err(GraphError::Loop(names[u].clone()));
            }
            if adjacency[u].contains(&v) {
                return Err(GraphError::MultiEdge(names[u].clone(), names[v].clone()));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        let dist = (0..n).map(|s| bfs(&adjacency, s)).collect();
        Ok(FiniteGraph { names, adjacency, dist })
    }

    /// A graph on `0..n` named by index.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        FiniteGraph::new((0..n).map(|i| i.to_string()).collect(), edges)
    }

    pub fn from_spec(spec: &GraphSpec) -> Result<(Self, PermutationAction), GraphError> {
        let index: HashMap<&str, usize> = spec
            .vertices
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        let lookup = |s: &str| index.get(s).copied().ok_or_else(|| GraphError::UnknownVertex(s.to_string()));
        let edges = spec
            .edges
            .iter()
            .map(|[u, v]| Ok((lookup(u)?, lookup(v)?)))
            .collect::<Result<Vec<_>, GraphError>>()?;
        let graph = FiniteGraph::new(spec.vertices.clone(), &edges)?;
        let mut action = PermutationAction::new();
        for g in &spec.generators {
            let mut perm = (0..graph.vertex_count()).collect::<Vec<_>>();
            for (from, to) in &g.permutation {
                perm[lookup(from)?] = lookup(to)?;
            }
            action = action.with_generator(g.name.clone(), perm);
        }
        action.verify(&graph)?;
        Ok((graph, action))
    }

    pub fn from_json(text: &str) -> Result<(Self, PermutationAction), GraphError> {
        let spec: GraphSpec = serde_json::from_str(text).map_err(|e| GraphError::Json(e.to_string()))?;
        FiniteGraph::from_spec(&spec)
    }

    pub fn path_graph(n_edges: usize) -> Self {
        let edges: Vec<_> = (0..n_edges).map(|i| (i, i + 1)).collect();
        FiniteGraph::from_edges(n_edges + 1, &edges).unwrap()
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3);
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        FiniteGraph::from_edges(n, &edges).unwrap()
    }

    pub fn complete(n: usize) -> Self {
        let edges: Vec<_> = (0..n).tuple_combinations().collect();
        FiniteGraph::from_edges(n, &edges).unwrap()
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn vertices(&self) -> Vec<usize> {
        (0..self.vertex_count()).collect()
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    /// Each edge once, as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (u, list) in self.adjacency.iter().enumerate() {
            out.extend(list.iter().filter(|&&v| u < v).map(|&v| (u, v)));
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Graph distance, [`UNREACHABLE`] across components.
    pub fn distance(&self, u: usize, v: usize) -> u32 {
        self.dist[u][v]
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count() == 0 || self.dist[0].iter().all(|&d| d != UNREACHABLE)
    }

    fn disconnected(&self, x: usize, y: usize) -> GraphError {
        GraphError::Disconnected(self.names[x].clone(), self.names[y].clone())
    }

    /// Every geodesic from `x` to `y`, in lexicographic order of vertex
    /// sequences.
    pub fn all_geodesics(&self, x: usize, y: usize) -> Result<Vec<Path<usize>>, GraphError> {
        if self.dist[x][y] == UNREACHABLE {
            return Err(self.disconnected(x, y));
        }
        let mut out = Vec::new();
        let mut stack = vec![x];
        self.extend_geodesics(y, &mut stack, &mut out, usize::MAX);
        Ok(out)
    }

    /// The lexicographically first geodesic from `x` to `y`.
    pub fn first_geodesic(&self, x: usize, y: usize) -> Result<Path<usize>, GraphError> {
        if self.dist[x][y] == UNREACHABLE {
            return Err(self.disconnected(x, y));
        }
        let mut v = x;
        let mut vertices = vec![x];
        while v != y {
            v = *self.adjacency[v]
                .iter()
                .find(|&&w| self.dist[w][y] + 1 == self.dist[v][y])
                .unwrap();
            vertices.push(v);
        }
        Ok(Path::from_distinct(vertices))
    }

    fn extend_geodesics(&self, y: usize, stack: &mut Vec<usize>, out: &mut Vec<Path<usize>>, limit: usize) {
        if out.len() >= limit {
            return;
        }
        let v = *stack.last().unwrap();
        if v == y {
            out.push(Path::from_distinct(stack.clone()));
            return;
        }
        for &w in &self.adjacency[v] {
            if self.dist[w][y] + 1 == self.dist[v][y] {
                stack.push(w);
                self.extend_geodesics(y, stack, out, limit);
                stack.pop();
            }
        }
    }

    pub fn is_geodesic(&self, p: &Path<usize>) -> bool {
        p.vertices().windows(2).all(|w| self.is_adjacent(&w[0], &w[1]))
            && self.dist[*p.start()][*p.end()] as usize == p.len()
    }

    /// Vertices on some geodesic between `x` and `y`.
    pub fn interval(&self, x: usize, y: usize) -> Vec<usize> {
        let d = self.dist[x][y];
        (0..self.vertex_count())
            .filter(|&m| self.dist[x][m].saturating_add(self.dist[m][y]) == d)
            .collect()
    }

    /// Candidates lying on geodesics between all three pairs.
    pub fn median_candidates(&self, x: usize, y: usize, z: usize) -> Vec<usize> {
        let between = |a: usize, b: usize, m: usize| self.dist[a][m].saturating_add(self.dist[m][b]) == self.dist[a][b];
        (0..self.vertex_count())
            .filter(|&m| between(x, y, m) && between(y, z, m) && between(x, z, m))
            .collect()
    }

    pub fn median(&self, x: usize, y: usize, z: usize) -> Result<usize, GraphError> {
        let names = || (self.names[x].clone(), self.names[y].clone(), self.names[z].clone());
        let candidates = self.median_candidates(x, y, z);
        match candidates.len() {
            1 => Ok(candidates[0]),
            0 => {
                let (a, b, c) = names();
                Err(GraphError::NoMedian(a, b, c))
            }
            k => {
                let (a, b, c) = names();
                Err(GraphError::MultipleMedians(a, b, c, k))
            }
        }
    }

    /// The first triple without a unique median, if any.
    pub fn median_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.vertex_count();
        for x in 0..n {
            for y in x..n {
                for z in y..n {
                    if self.median_candidates(x, y, z).len() != 1 {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    }

    pub fn is_median_graph(&self) -> bool {
        self.is_connected() && self.median_violation().is_none()
    }
}

fn bfs(adjacency: &[Vec<usize>], s: usize) -> Vec<u32> {
    let mut dist = vec![UNREACHABLE; adjacency.len()];
    dist[s] = 0;
    let mut queue = VecDeque::from([s]);
    while let Some(v) = queue.pop_front() {
        for &w in &adjacency[v] {
            if dist[w] == UNREACHABLE {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

impl Graph for FiniteGraph {
    type Vertex = usize;

    fn is_adjacent(&self, u: &usize, v: &usize) -> bool {
        self.adjacency[*u].binary_search(v).is_ok()
    }
}
