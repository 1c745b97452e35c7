use std::collections::VecDeque;

use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Label, TreeGraph};
use crate::{Error, Result, DEFAULT_MAX_NODES};

/// Path graph `0 - 1 - ... - (n-1)`.
pub fn generate_chain(n: usize) -> Result<TreeGraph> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("chain needs n >= 2, got {n}")));
    }
    let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
    TreeGraph::from_edges(n, &edges, Label::new("chain").with("n", n))
}

/// Star with center 0 and leaves `1..n`.
pub fn generate_star(n: usize) -> Result<TreeGraph> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("star needs n >= 2, got {n}")));
    }
    let edges: Vec<_> = (1..n).map(|v| (0, v)).collect();
    TreeGraph::from_edges(n, &edges, Label::new("star").with("n", n))
}

/// `1 + f((f-1)^g - 1)/(f-2)`, or `None` on overflow.
pub fn dendrimer_node_count(f: usize, g: usize) -> Option<usize> {
    if f < 3 {
        return None;
    }
    let g = u32::try_from(g).ok()?;
    let power = (f - 1).checked_pow(g)?;
    f.checked_mul(power - 1)
        .map(|x| x / (f - 2))
        .and_then(|x| x.checked_add(1))
}

/// `(f+1)^g`, or `None` on overflow.
pub fn vicsek_node_count(f: usize, g: usize) -> Option<usize> {
    (f + 1).checked_pow(u32::try_from(g).ok()?)
}

fn check_family_params(family: &str, f: usize, g: usize) -> Result<()> {
    if f < 3 {
        return Err(Error::InvalidParameter(format!(
            "{family} needs functionality f >= 3, got {f}"
        )));
    }
    if g < 1 {
        return Err(Error::InvalidParameter(format!(
            "{family} needs generation g >= 1, got {g}"
        )));
    }
    Ok(())
}

fn check_size(what: &'static str, n: Option<usize>) -> Result<usize> {
    match n {
        Some(n) if n <= DEFAULT_MAX_NODES => Ok(n),
        Some(n) => Err(Error::SizeLimit {
            what,
            n,
            limit: DEFAULT_MAX_NODES,
        }),
        None => Err(Error::SizeLimit {
            what,
            n: usize::MAX,
            limit: DEFAULT_MAX_NODES,
        }),
    }
}

/// Dendrimer (Cayley tree) of functionality `f` and generation `g`.
///
/// The core has `f` branches, every internal node below depth `g` has `f - 1`
/// children and all nodes at depth `g` are leaves. Nodes are numbered
/// breadth-first from the core.
pub fn generate_dendrimer(f: usize, g: usize) -> Result<TreeGraph> {
    check_family_params("dendrimer", f, g)?;
    let n = check_size("dendrimer", dendrimer_node_count(f, g))?;

    let mut edges = Vec::with_capacity(n - 1);
    let mut shell = vec![0usize];
    let mut next_id = 1;
    for depth in 0..g {
        let branches = if depth == 0 { f } else { f - 1 };
        let mut next_shell = Vec::with_capacity(shell.len() * branches);
        for &u in &shell {
            for _ in 0..branches {
                edges.push((u, next_id));
                next_shell.push(next_id);
                next_id += 1;
            }
        }
        shell = next_shell;
    }
    debug_assert_eq!(next_id, n);
    TreeGraph::from_edges(n, &edges, Label::new("dendrimer").with("f", f).with("g", g))
}

/// Vicsek fractal built from `(f+1)`-node stars.
///
/// Generation 1 is a star. Generation `g` takes `f + 1` copies of generation
/// `g - 1`: a central copy and one peripheral copy per arm. Every structure
/// keeps `f` corner leaves, one per arm. Arm `i` of the central copy is bonded
/// to corner `(i + f/2) mod f` of peripheral copy `i`, whose corner `i` becomes
/// the new corner `i`. Nodes are renumbered breadth-first from the center.
pub fn generate_vicsek(f: usize, g: usize) -> Result<TreeGraph> {
    check_family_params("vicsek", f, g)?;
    let n = check_size("vicsek", vicsek_node_count(f, g))?;

    let mut edges: Vec<(usize, usize)> = (1..=f).map(|v| (0, v)).collect();
    let mut corners: Vec<usize> = (1..=f).collect();
    let mut size = f + 1;
    for _ in 1..g {
        let copy_edges = edges.clone();
        for copy in 1..=f {
            let offset = copy * size;
            edges.extend(copy_edges.iter().map(|&(u, v)| (u + offset, v + offset)));
        }
        let mut next_corners = Vec::with_capacity(f);
        for (arm, &corner) in corners.iter().enumerate() {
            let offset = (arm + 1) * size;
            let attach = corners[(arm + f / 2) % f] + offset;
            edges.push((corner, attach));
            next_corners.push(corner + offset);
        }
        corners = next_corners;
        size *= f + 1;
    }
    debug_assert_eq!(size, n);
    // copy 0 keeps indices 0..size at every level, so node 0 is the center
    let raw = TreeGraph::from_edges(n, &edges, Label::new("vicsek").with("f", f).with("g", g))?;
    Ok(raw.relabel_bfs(0))
}

/// Parameters of the scale-free tree grower.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SftParams {
    pub n: usize,
    pub s: f64,
    pub f_max: usize,
    pub seed: u64,
}

impl SftParams {
    /// `f_max` defaults to `n - 1`.
    pub fn new(n: usize, s: f64, seed: u64) -> Self {
        SftParams {
            n,
            s,
            f_max: n.saturating_sub(1),
            seed,
        }
    }

    pub fn with_f_max(mut self, f_max: usize) -> Self {
        self.f_max = f_max;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 3 {
            return Err(Error::InvalidParameter(format!(
                "scale-free tree needs n >= 3, got {}",
                self.n
            )));
        }
        if !(self.s.is_finite() && self.s > 1.0) {
            return Err(Error::InvalidParameter(format!(
                "scale-free exponent must satisfy s > 1, got {}",
                self.s
            )));
        }
        if self.f_max < 2 || self.f_max > self.n - 1 {
            return Err(Error::InvalidParameter(format!(
                "f_max must lie in 2..={}, got {}",
                self.n - 1,
                self.f_max
            )));
        }
        check_size("scale-free tree", Some(self.n))?;
        Ok(())
    }
}

/// Grows a scale-free tree shell by shell.
///
/// Every node draws a target functionality from `P(f) ∝ f^-s` on
/// `{2, ..., f_max}`. Nodes are processed in breadth-first order; each one
/// receives new children until its bond count reaches its target. Growth stops
/// as soon as `n` nodes exist, so the unprocessed frontier becomes the leaf set
/// and the node being filled at that moment may stay below its target.
pub fn generate_sft(params: &SftParams) -> Result<TreeGraph> {
    params.validate()?;
    let SftParams { n, s, f_max, seed } = *params;

    let weights: Vec<f64> = (2..=f_max).map(|f| (f as f64).powf(-s)).collect();
    let dist = WeightedIndex::new(&weights)
        .map_err(|e| Error::InvalidParameter(format!("functionality law: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || dist.sample(&mut rng) + 2;

    let mut adjacency: Vec<Vec<usize>> = Vec::with_capacity(n);
    let mut target = Vec::with_capacity(n);
    adjacency.push(Vec::new());
    target.push(draw());

    let mut queue = VecDeque::from([0usize]);
    'grow: while let Some(u) = queue.pop_front() {
        while adjacency[u].len() < target[u] {
            if adjacency.len() == n {
                break 'grow;
            }
            let v = adjacency.len();
            adjacency.push(vec![u]);
            adjacency[u].push(v);
            target.push(draw());
            queue.push_back(v);
        }
    }
    debug_assert_eq!(adjacency.len(), n);

    let label = Label::new("sft")
        .with("n", n)
        .with("s", s)
        .with("f_max", f_max)
        .with("seed", seed);
    Ok(TreeGraph::from_adjacency(adjacency, label))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::validate_tree;

    #[test]
    fn chain_shapes() {
        let g = generate_chain(2).unwrap();
        assert_eq!(g.edges(), vec![(0, 1)]);
        assert!(g.is_leaf(0) && g.is_leaf(1));
        assert_eq!(generate_chain(3).unwrap().functionalities(), vec![1, 2, 1]);
        assert!(generate_chain(1).is_err());
    }

    #[test]
    fn star_shapes() {
        assert_eq!(generate_star(4).unwrap().functionalities(), vec![3, 1, 1, 1]);
        // same tree as the 3-chain, centred on node 0
        let mut star = generate_star(3).unwrap().functionalities();
        let mut chain = generate_chain(3).unwrap().functionalities();
        star.sort_unstable();
        chain.sort_unstable();
        assert_eq!(star, chain);
        assert_eq!(generate_star(3).unwrap().edge_count(), 2);
        assert!(generate_star(0).is_err());
    }

    #[test]
    fn dendrimer_counts() {
        let d = generate_dendrimer(3, 1).unwrap();
        assert_eq!(d.edges(), generate_star(4).unwrap().edges());
        assert_eq!(generate_dendrimer(3, 2).unwrap().n(), 10);
        assert_eq!(generate_dendrimer(4, 3).unwrap().n(), 53);
        assert_eq!(generate_dendrimer(3, 5).unwrap().n(), 94);
        for f in 3..7 {
            for g in 1..6 {
                let d = generate_dendrimer(f, g).unwrap();
                assert_eq!(Some(d.n()), dendrimer_node_count(f, g));
                assert_eq!(validate_tree(&d), Ok(()));
            }
        }
    }

    #[test]
    fn dendrimer_rejects_bad_params_and_huge_sizes() {
        assert!(matches!(generate_dendrimer(2, 3), Err(Error::InvalidParameter(_))));
        assert!(matches!(generate_dendrimer(3, 0), Err(Error::InvalidParameter(_))));
        assert!(matches!(generate_dendrimer(3, 40), Err(Error::SizeLimit { .. })));
        assert!(matches!(generate_dendrimer(10, 200), Err(Error::SizeLimit { .. })));
    }

    #[test]
    fn vicsek_counts() {
        assert_eq!(generate_vicsek(4, 1).unwrap().edges(), generate_star(5).unwrap().edges());
        let v = generate_vicsek(3, 2).unwrap();
        assert_eq!(v.n(), 16);
        assert_eq!(v.edge_count(), 15);
        assert_eq!(validate_tree(&v), Ok(()));
        assert_eq!(generate_vicsek(4, 3).unwrap().n(), 125);
        for f in 3..7 {
            for g in 1..5 {
                let v = generate_vicsek(f, g).unwrap();
                assert_eq!(Some(v.n()), vicsek_node_count(f, g));
                assert_eq!(validate_tree(&v), Ok(()));
                // center keeps functionality f
                assert_eq!(v.functionality(0), f);
            }
        }
        assert!(matches!(generate_vicsek(4, 30), Err(Error::SizeLimit { .. })));
    }

    #[test]
    fn vicsek_nodes_have_degree_one_two_or_f() {
        let v = generate_vicsek(5, 3).unwrap();
        assert!(v.functionalities().iter().all(|&d| d == 1 || d == 2 || d == 5));
    }

    #[test]
    fn sft_three_nodes_is_a_path() {
        for seed in 0..5 {
            let g = generate_sft(&SftParams::new(3, 2.5, seed)).unwrap();
            let mut f = g.functionalities();
            f.sort_unstable();
            assert_eq!(f, vec![1, 1, 2]);
        }
    }

    #[test]
    fn sft_large_is_a_tree() {
        let g = generate_sft(&SftParams::new(10_000, 2.5, 7)).unwrap();
        assert_eq!(g.edge_count(), 9999);
        assert_eq!(validate_tree(&g), Ok(()));
    }

    #[test]
    fn sft_respects_f_max() {
        let g = generate_sft(&SftParams::new(500, 1.5, 3).with_f_max(6)).unwrap();
        assert!(g.functionalities().into_iter().all(|f| f <= 6));
    }

    #[test]
    fn sft_parameter_checks() {
        assert!(generate_sft(&SftParams::new(2, 2.5, 0)).is_err());
        assert!(generate_sft(&SftParams::new(10, 1.0, 0)).is_err());
        assert!(generate_sft(&SftParams::new(10, f64::NAN, 0)).is_err());
        assert!(generate_sft(&SftParams::new(10, 2.5, 0).with_f_max(10)).is_err());
        assert!(generate_sft(&SftParams::new(10, 2.5, 0).with_f_max(1)).is_err());
    }

    #[test]
    fn sft_is_reproducible() {
        let p = SftParams::new(300, 2.2, 12345);
        assert_eq!(generate_sft(&p).unwrap(), generate_sft(&p).unwrap());
        let q = SftParams { seed: 12346, ..p };
        assert_ne!(generate_sft(&p).unwrap().edges(), generate_sft(&q).unwrap().edges());
    }
}
