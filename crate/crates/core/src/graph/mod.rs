//! Tree-like networks: construction, validation and structural statistics.

mod edgelist;
mod generators;
mod stats;

use std::fmt;

pub use edgelist::{read_edge_list, write_edge_list, FORMAT_HEADER};
pub use generators::{
    generate_chain, generate_dendrimer, generate_sft, generate_star, generate_vicsek,
    dendrimer_node_count, vicsek_node_count, SftParams,
};
pub use stats::{structural_stats, StructuralStats};

use crate::{Error, Result};

/// Describes where a graph came from: family name, parameters and seed.
///
/// Stored as ordered `key=value` pairs so it can be carried verbatim in
/// edge-list header comments.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Label {
    entries: Vec<(String, String)>,
}

impl Label {
    pub fn new(family: &str) -> Self {
        Label {
            entries: vec![("family".to_owned(), family.to_owned())],
        }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.entries.push((key.to_owned(), value.to_string()));
        self
    }

    pub fn push(&mut self, key: &str, value: impl ToString) {
        self.entries.push((key.to_owned(), value.to_string()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn family(&self) -> Option<&str> {
        self.get("family")
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (k, v)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

/// An undirected graph stored as sorted adjacency lists.
///
/// A `TreeGraph` may hold an arbitrary simple-or-not graph so that
/// [`validate_tree`] can report what is wrong with it; every generator in this
/// crate returns a graph that passes validation, and readers validate on load.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeGraph {
    adjacency: Vec<Vec<usize>>,
    label: Label,
}

impl TreeGraph {
    /// Builds the adjacency lists from an edge list. Node indices must be
    /// below `n`; no other invariant is checked here.
    pub fn from_edges(n: usize, edges: &[(usize, usize)], label: Label) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidParameter(format!(
                    "edge ({u}, {v}) references a node outside 0..{n}"
                )));
            }
            adjacency[u].push(v);
            if u != v {
                adjacency[v].push(u);
            }
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(TreeGraph { adjacency, label })
    }

    pub(crate) fn from_adjacency(mut adjacency: Vec<Vec<usize>>, label: Label) -> Self {
        for list in &mut adjacency {
            list.sort_unstable();
        }
        TreeGraph { adjacency, label }
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.adjacency
    }

    pub fn neighbors(&self, j: usize) -> &[usize] {
        &self.adjacency[j]
    }

    /// Number of bonds of node `j`.
    pub fn functionality(&self, j: usize) -> usize {
        self.adjacency[j].len()
    }

    pub fn functionalities(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    pub fn is_leaf(&self, j: usize) -> bool {
        self.adjacency[j].len() == 1
    }

    pub fn label(&self) -> &Label {
        &self.label
    }

    pub fn set_label(&mut self, label: Label) {
        self.label = label;
    }

    /// Edges as `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut edges: Vec<(usize, usize)> = self
            .adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
            .collect();
        edges.sort_unstable();
        edges
    }

    pub fn edge_count(&self) -> usize {
        let ends: usize = self.adjacency.iter().map(Vec::len).sum();
        ends / 2
    }

    /// Relabels nodes in breadth-first order from `root`. Neighbors are
    /// visited in ascending index order.
    pub(crate) fn relabel_bfs(&self, root: usize) -> TreeGraph {
        let n = self.n();
        let mut order = Vec::with_capacity(n);
        let mut new_index = vec![usize::MAX; n];
        new_index[root] = 0;
        order.push(root);
        let mut head = 0;
        while head < order.len() {
            let u = order[head];
            head += 1;
            for &v in &self.adjacency[u] {
                if new_index[v] == usize::MAX {
                    new_index[v] = order.len();
                    order.push(v);
                }
            }
        }
        let adjacency = order
            .iter()
            .map(|&old| self.adjacency[old].iter().map(|&v| new_index[v]).collect())
            .collect();
        TreeGraph::from_adjacency(adjacency, self.label.clone())
    }
}

/// The first tree invariant a graph violates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeViolation {
    Empty,
    SelfLoop(usize),
    DuplicateEdge(usize, usize),
    Asymmetric(usize, usize),
    CycleDetected,
    Disconnected,
    EdgeCount { expected: usize, found: usize },
}

impl fmt::Display for TreeViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeViolation::Empty => write!(f, "graph has no nodes"),
            TreeViolation::SelfLoop(u) => write!(f, "self-loop at node {u}"),
            TreeViolation::DuplicateEdge(u, v) => write!(f, "duplicate edge {u}-{v}"),
            TreeViolation::Asymmetric(u, v) => {
                write!(f, "asymmetric adjacency: {u} lists {v} but not vice versa")
            }
            TreeViolation::CycleDetected => write!(f, "cycle detected"),
            TreeViolation::Disconnected => write!(f, "disconnected"),
            TreeViolation::EdgeCount { expected, found } => {
                write!(f, "edge count {found}, expected {expected}")
            }
        }
    }
}

impl std::error::Error for TreeViolation {}

/// Checks every tree invariant and names the first one violated.
pub fn validate_tree(g: &TreeGraph) -> std::result::Result<(), TreeViolation> {
    let n = g.n();
    if n == 0 {
        return Err(TreeViolation::Empty);
    }
    for (u, list) in g.adjacency.iter().enumerate() {
        for (i, &v) in list.iter().enumerate() {
            if v == u {
                return Err(TreeViolation::SelfLoop(u));
            }
            // lists are sorted, so duplicates are adjacent
            if i > 0 && list[i - 1] == v {
                return Err(TreeViolation::DuplicateEdge(u.min(v), u.max(v)));
            }
            if g.adjacency[v].binary_search(&u).is_err() {
                return Err(TreeViolation::Asymmetric(u, v));
            }
        }
    }

    // iterative DFS tracking the tree parent; any other visited neighbor closes a cycle
    let mut parent = vec![usize::MAX; n];
    let mut visited = vec![false; n];
    let mut stack = vec![0usize];
    visited[0] = true;
    let mut seen = 1;
    while let Some(u) = stack.pop() {
        for &v in &g.adjacency[u] {
            if !visited[v] {
                visited[v] = true;
                parent[v] = u;
                seen += 1;
                stack.push(v);
            } else if parent[u] != v {
                return Err(TreeViolation::CycleDetected);
            }
        }
    }
    if seen != n {
        return Err(TreeViolation::Disconnected);
    }
    let found = g.edge_count();
    if found != n - 1 {
        return Err(TreeViolation::EdgeCount {
            expected: n - 1,
            found,
        });
    }
    Ok(())
}

/// Validation as a crate [`Result`].
pub fn ensure_tree(g: &TreeGraph) -> Result<()> {
    validate_tree(g).map_err(Error::InvalidTree)
}
