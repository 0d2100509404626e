//! Generalized independence complexes `Ind_k(G)`.
//!
//! Faces are vertex sets whose induced subgraph has every component of size
//! at most `k`. For a forest with a tree-compatible vertex order the
//! lexicographic order on facets is a shelling; the restriction map then
//! yields an optimal acyclic matching whose critical cells are the facets
//! fixed by the restriction map.
//!
//! Vertices are `0..n` in their linear order, faces are `u64` bitsets.

use crate::error::{Error, Result};

/// Graph with linearly ordered vertices `0..n` (at most 64).
#[derive(Clone, Debug)]
pub struct OrderedGraph {
    n: usize,
    adj: Vec<u64>,
    /// Display labels; defaults to `1..=n`.
    labels: Vec<u32>,
}

pub type Face = u64;

impl OrderedGraph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n > 64 {
            return Err(Error::OutOfRange(format!("{n} vertices > 64")));
        }
        let mut adj = vec![0u64; n];
        for &(u, v) in edges {
            if u >= n || v >= n || u == v {
                return Err(Error::Parse(format!("bad edge ({u},{v})")));
            }
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        let labels = (1..=n as u32).collect();
        Ok(OrderedGraph { n, adj, labels })
    }

    pub fn with_labels(mut self, labels: Vec<u32>) -> Self {
        assert_eq!(labels.len(), self.n);
        self.labels = labels;
        self
    }

    /// Parse the line-oriented graph format: first a vertex count, then
    /// `u v` edge lines (1-based labels), with an optional
    /// `order: v1 v2 ...` line giving the linear order on vertices.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let n: usize = lines
            .next()
            .ok_or_else(|| Error::Parse("empty graph file".into()))?
            .parse()
            .map_err(|_| Error::Parse("first line must be the vertex count".into()))?;
        let mut raw_edges = Vec::new();
        let mut order: Option<Vec<u32>> = None;
        for line in lines {
            if let Some(rest) = line.strip_prefix("order:") {
                let o: Vec<u32> = rest
                    .split_whitespace()
                    .map(|t| {
                        t.parse()
                            .map_err(|_| Error::Parse(format!("bad order entry `{t}`")))
                    })
                    .collect::<Result<_>>()?;
                order = Some(o);
                continue;
            }
            let mut it = line.split_whitespace();
            let u: u32 = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::Parse(format!("bad edge line `{line}`")))?;
            let v: u32 = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::Parse(format!("bad edge line `{line}`")))?;
            raw_edges.push((u, v));
        }
        let order = order.unwrap_or_else(|| (1..=n as u32).collect());
        if order.len() != n {
            return Err(Error::Parse("order line must list every vertex".into()));
        }
        let pos = |label: u32| -> Result<usize> {
            order
                .iter()
                .position(|&x| x == label)
                .ok_or_else(|| Error::Parse(format!("unknown vertex {label}")))
        };
        let edges: Vec<(usize, usize)> = raw_edges
            .iter()
            .map(|&(u, v)| Ok((pos(u)?, pos(v)?)))
            .collect::<Result<_>>()?;
        Ok(OrderedGraph::new(n, &edges)?.with_labels(order))
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    fn all_vertices(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    pub fn label(&self, v: usize) -> u32 {
        self.labels[v]
    }

    pub fn labels_of(&self, face: Face) -> Vec<u32> {
        let mut out: Vec<u32> = iter_bits(face).map(|v| self.labels[v]).collect();
        out.sort_unstable();
        out
    }

    pub fn adjacency(&self, v: usize) -> u64 {
        self.adj[v]
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in iter_bits(self.adj[u]) {
                if v > u {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Connected components of the induced subgraph `G[face]`.
    pub fn components(&self, face: Face) -> Vec<Face> {
        let mut out = Vec::new();
        let mut rest = face;
        while rest != 0 {
            let start = rest.trailing_zeros() as usize;
            let mut comp = 1u64 << start;
            loop {
                let mut grow = comp;
                for v in iter_bits(comp) {
                    grow |= self.adj[v] & face;
                }
                if grow == comp {
                    break;
                }
                comp = grow;
            }
            out.push(comp);
            rest &= !comp;
        }
        out
    }

    pub fn max_component_size(&self, face: Face) -> usize {
        self.components(face)
            .iter()
            .map(|c| c.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    /// Membership in `Ind_k(G)`.
    pub fn is_face(&self, face: Face, k: usize) -> bool {
        self.max_component_size(face) <= k
    }

    /// All faces of `Ind_k(G)` (including the empty face), generated by
    /// branch and bound over vertices with component-size pruning.
    pub fn faces(&self, k: usize) -> Vec<Face> {
        let mut out = Vec::new();
        let mut cur = 0u64;
        self.gen_faces(k, 0, &mut cur, &mut out);
        out
    }

    fn gen_faces(&self, k: usize, v: usize, cur: &mut Face, out: &mut Vec<Face>) {
        if v == self.n {
            out.push(*cur);
            return;
        }
        self.gen_faces(k, v + 1, cur, out);
        *cur |= 1 << v;
        // only the component of v can have grown
        let comp = self
            .components(*cur)
            .into_iter()
            .find(|c| c & (1 << v) != 0)
            .unwrap();
        if comp.count_ones() as usize <= k {
            self.gen_faces(k, v + 1, cur, out);
        }
        *cur &= !(1 << v);
    }

    /// Maximal faces of `Ind_k(G)`.
    pub fn facets(&self, k: usize) -> Vec<Face> {
        self.faces(k)
            .into_iter()
            .filter(|&f| (0..self.n).all(|v| f & (1 << v) != 0 || !self.is_face(f | 1 << v, k)))
            .collect()
    }

    pub fn is_forest(&self) -> bool {
        let edge_count: usize = (0..self.n)
            .map(|v| (self.adj[v]).count_ones() as usize)
            .sum::<usize>()
            / 2;
        edge_count + self.components(self.all_vertices()).len() == self.n
    }

    /// Tree-compatibility of the vertex order: in every component, each
    /// vertex except the component maximum has a neighbor later in the
    /// order (so paths toward the maximum are increasing).
    pub fn is_tree_compatible(&self) -> bool {
        for comp in self.components(self.all_vertices()) {
            let max = 63 - comp.leading_zeros() as usize;
            for v in iter_bits(comp) {
                if v != max && self.adj[v] >> (v + 1) == 0 {
                    return false;
                }
            }
        }
        true
    }
}

pub fn iter_bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let v = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(v)
        }
    })
}

/// `sigma < tau` iff the minimum of the symmetric difference lies in
/// `sigma` (lexicographic order on sorted vertex lists).
pub fn lex_face_cmp(a: Face, b: Face) -> std::cmp::Ordering {
    let diff = a ^ b;
    if diff == 0 {
        return std::cmp::Ordering::Equal;
    }
    if a & (diff & diff.wrapping_neg()) != 0 {
        std::cmp::Ordering::Less
    } else {
        std::cmp::Ordering::Greater
    }
}

/// A facet order together with its restriction sets.
#[derive(Clone, Debug)]
pub struct ShellingOrder {
    pub facets: Vec<Face>,
    pub restriction: Vec<Face>,
}

impl ShellingOrder {
    /// Facets fixed by the restriction map; these are the spanning facets.
    pub fn fixed_points(&self) -> Vec<Face> {
        self.facets
            .iter()
            .zip(&self.restriction)
            .filter(|(f, r)| f == r)
            .map(|(&f, _)| f)
            .collect()
    }
}

/// Lexicographic shelling of `Ind_k(F)` for a forest `F` with a
/// tree-compatible order. Restriction sets are computed from the
/// definition: `R(F_i) = { x in F_i : F_i - x lies in some earlier facet }`.
pub fn lex_shelling(g: &OrderedGraph, k: usize) -> Result<ShellingOrder> {
    if !g.is_forest() {
        return Err(Error::NotAForest);
    }
    if !g.is_tree_compatible() {
        return Err(Error::NotTreeCompatible);
    }
    let mut facets = g.facets(k);
    facets.sort_by(|&a, &b| lex_face_cmp(a, b));
    let restriction = restriction_map(&facets);
    Ok(ShellingOrder {
        facets,
        restriction,
    })
}

/// Restriction sets for an arbitrary facet order.
pub fn restriction_map(facets: &[Face]) -> Vec<Face> {
    facets
        .iter()
        .enumerate()
        .map(|(i, &f)| {
            let mut r = 0u64;
            for x in iter_bits(f) {
                let sub = f & !(1 << x);
                if facets[..i].iter().any(|&e| sub & !e == 0) {
                    r |= 1 << x;
                }
            }
            r
        })
        .collect()
}

/// Pairwise shelling criterion: for all `i < j` there is `l < j` with
/// `F_i ∩ F_j ⊆ F_l ∩ F_j` and `|F_l ∩ F_j| = |F_j| - 1`.
pub fn verify_shelling(facets: &[Face]) -> bool {
    for j in 1..facets.len() {
        let fj = facets[j];
        let need = fj.count_ones() - 1;
        for i in 0..j {
            let inter = facets[i] & fj;
            let ok = (0..j).any(|l| {
                let lj = facets[l] & fj;
                inter & !lj == 0 && lj.count_ones() == need
            });
            if !ok {
                return false;
            }
        }
    }
    true
}

/// Spanning facets by the structural predicate: all components of
/// `F[sigma]` have size exactly `k`, each component `C` has a lower private
/// neighbor (outside `sigma`, adjacent to `C` and to no other component,
/// earlier than `min C`), and every outside vertex is adjacent to some
/// component.
pub fn spanning_facets_predicate(g: &OrderedGraph, k: usize) -> Vec<Face> {
    let all = g.all_vertices();
    let mut out: Vec<Face> = g
        .faces(k)
        .into_iter()
        .filter(|&sigma| {
            let comps = g.components(sigma);
            if !comps.iter().all(|c| c.count_ones() as usize == k) {
                return false;
            }
            for v in iter_bits(all & !sigma) {
                if g.adjacency(v) & sigma == 0 {
                    return false;
                }
            }
            comps
                .iter()
                .all(|&c| lower_private_neighbors(g, sigma, &comps, c) != 0)
        })
        .collect();
    out.sort_by(|&a, &b| lex_face_cmp(a, b));
    out
}

/// `N^<(C)`: vertices not in `sigma`, adjacent to `C`, earlier than
/// `min C`, and adjacent to no other component.
fn lower_private_neighbors(g: &OrderedGraph, sigma: Face, comps: &[Face], c: Face) -> u64 {
    let min_c = c.trailing_zeros() as usize;
    let below = if min_c == 0 { 0 } else { (1u64 << min_c) - 1 };
    let mut cand = 0u64;
    for v in iter_bits(c) {
        cand |= g.adjacency(v);
    }
    cand &= !sigma & below;
    for &other in comps {
        if other == c {
            continue;
        }
        let mut adj_other = 0u64;
        for v in iter_bits(other) {
            adj_other |= g.adjacency(v);
        }
        cand &= !adj_other;
    }
    cand
}

/// Outcome of matching one face through a shelling.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatchOutcome {
    Critical,
    Partner(Face),
}

/// Match a face through the shelling-induced acyclic matching: find the
/// lexicographically first facet `F_j` containing it; inside the Boolean
/// fiber `[R(F_j), F_j]` toggle `x = min(F_j - R(F_j))`. Fibers of spanning
/// facets are singletons and stay critical.
pub fn shelling_match(order: &ShellingOrder, face: Face) -> MatchOutcome {
    let j = order
        .facets
        .iter()
        .position(|&f| face & !f == 0)
        .expect("face must lie in some facet");
    let (f, r) = (order.facets[j], order.restriction[j]);
    debug_assert!(r & !face == 0, "face must lie in its fiber interval");
    if f == r {
        debug_assert_eq!(face, f);
        return MatchOutcome::Critical;
    }
    let x = (f & !r).trailing_zeros();
    MatchOutcome::Partner(face ^ (1 << x))
}

/// The matching over nonempty faces of a standalone `Ind_k` complex. The
/// empty face is excluded, which frees its partner `{min F_1}` as the one
/// critical vertex; the other critical cells are the spanning facets.
#[allow(clippy::type_complexity)]
pub fn simplicial_matching(
    g: &OrderedGraph,
    k: usize,
) -> Result<(ShellingOrder, Vec<(Face, Face)>, Vec<Face>)> {
    let order = lex_shelling(g, k)?;
    let mut pairs = Vec::new();
    let mut critical = Vec::new();
    for face in g.faces(k) {
        if face == 0 {
            continue;
        }
        match shelling_match(&order, face) {
            MatchOutcome::Critical => critical.push(face),
            MatchOutcome::Partner(0) => critical.push(face),
            MatchOutcome::Partner(p) => {
                if face < p {
                    pairs.push((face, p));
                }
            }
        }
    }
    critical.sort_by(|&a, &b| lex_face_cmp(a, b));
    Ok((order, pairs, critical))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> OrderedGraph {
        OrderedGraph::new(3, &[(0, 1), (1, 2)]).unwrap()
    }

    /// The 9-vertex example: edges 14,24,34,45,58,68,78,89 on labels 1..9.
    fn nine_vertex() -> OrderedGraph {
        OrderedGraph::new(
            9,
            &[
                (0, 3),
                (1, 3),
                (2, 3),
                (3, 4),
                (4, 7),
                (5, 7),
                (6, 7),
                (7, 8),
            ],
        )
        .unwrap()
    }

    fn face_of(labels: &[u32]) -> Face {
        labels.iter().map(|&l| 1u64 << (l - 1)).sum()
    }

    #[test]
    fn edge_k1_facets() {
        let g = OrderedGraph::new(2, &[(0, 1)]).unwrap();
        let mut f = g.facets(1);
        f.sort_unstable();
        assert_eq!(f, vec![0b01, 0b10]);
    }

    #[test]
    fn path3_k2_facets() {
        let mut f = path3().facets(2);
        f.sort_unstable();
        assert_eq!(f, vec![0b011, 0b101, 0b110]);
    }

    #[test]
    fn nine_vertex_example_facets() {
        let g = nine_vertex();
        let facets = g.facets(3);
        assert!(facets.contains(&face_of(&[2, 3, 4, 7, 8, 9])));
        assert!(facets.contains(&face_of(&[4, 5, 8])));
    }

    #[test]
    fn path3_lex_shelling() {
        let order = lex_shelling(&path3(), 2).unwrap();
        assert_eq!(order.facets, vec![0b011, 0b101, 0b110]);
        assert_eq!(order.restriction, vec![0b000, 0b100, 0b110]);
        assert!(verify_shelling(&order.facets));
        assert_eq!(order.fixed_points(), vec![0b110]);
    }

    #[test]
    fn single_vertex_k1() {
        let g = OrderedGraph::new(1, &[]).unwrap();
        let order = lex_shelling(&g, 1).unwrap();
        assert_eq!(order.facets, vec![0b1]);
        assert_eq!(order.restriction, vec![0]);
        assert!(verify_shelling(&order.facets));
    }

    #[test]
    fn adversarial_order_fails() {
        // Ind_2 of the path 1-2-3-4 has facets {1,2,4}, {1,3,4}, {2,3};
        // starting with {2,3} breaks the pairwise criterion.
        let g = OrderedGraph::new(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let mut facets = g.facets(2);
        facets.sort_by(|&a, &b| lex_face_cmp(a, b));
        assert_eq!(facets, vec![0b1011, 0b1101, 0b0110]);
        assert!(verify_shelling(&facets));
        let bad = vec![0b0110, facets[0], facets[1]];
        assert!(!verify_shelling(&bad));
    }

    #[test]
    fn spanning_predicate_small() {
        // single edge rooted at 2, k = 1: spanning facet {2}
        let g = OrderedGraph::new(2, &[(0, 1)]).unwrap();
        assert_eq!(spanning_facets_predicate(&g, 1), vec![0b10]);
        let order = lex_shelling(&g, 1).unwrap();
        assert_eq!(order.fixed_points(), vec![0b10]);

        // path of 3, k = 2: spanning facet {2,3}
        assert_eq!(spanning_facets_predicate(&path3(), 2), vec![0b110]);
    }

    #[test]
    fn nine_vertex_spanning() {
        let g = nine_vertex();
        let mut expected = vec![face_of(&[4, 5, 8]), face_of(&[2, 3, 4, 7, 8, 9])];
        expected.sort_by(|&a, &b| lex_face_cmp(a, b));
        let predicate = spanning_facets_predicate(&g, 3);
        let mut via_restriction = lex_shelling(&g, 3).unwrap().fixed_points();
        via_restriction.sort_by(|&a, &b| lex_face_cmp(a, b));
        assert_eq!(predicate, expected);
        assert_eq!(via_restriction, expected);
    }

    #[test]
    fn cone_collapses_to_a_point() {
        // a single tree of size <= k is a simplex: no spanning facets,
        // everything matched except one vertex
        let g = path3();
        let (_, pairs, critical) = simplicial_matching(&g, 3).unwrap();
        assert_eq!(critical, vec![0b001]);
        assert_eq!(pairs.len(), 3);
    }

    #[test]
    fn path3_k2_matching_is_circle() {
        let (_, pairs, critical) = simplicial_matching(&path3(), 2).unwrap();
        // boundary of a triangle: one critical vertex, one critical edge
        assert_eq!(critical.len(), 2);
        assert_eq!(critical[0].count_ones(), 1);
        assert_eq!(critical[1], 0b110);
        assert_eq!(pairs.len(), 2);
    }

    #[test]
    fn nine_vertex_matching_criticals() {
        let g = nine_vertex();
        let (_, _, critical) = simplicial_matching(&g, 3).unwrap();
        let mut dims: Vec<u32> = critical.iter().map(|f| f.count_ones() - 1).collect();
        dims.sort_unstable();
        assert_eq!(dims, vec![0, 2, 5]);
    }

    #[test]
    fn parse_graph_file() {
        let g = OrderedGraph::parse("3\n1 2\n2 3\n").unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert!(g.is_forest());
        let g2 = OrderedGraph::parse("3\n1 2\n2 3\norder: 3 2 1\n").unwrap();
        assert_eq!(g2.label(0), 3);
        assert!(g2.is_tree_compatible());
    }

    #[test]
    fn not_a_forest_rejected() {
        let g = OrderedGraph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(matches!(lex_shelling(&g, 1), Err(Error::NotAForest)));
    }
}
