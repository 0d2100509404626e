//! Coxeter diagrams with an ordered generator set.
//!
//! Generators are identified with their position `0..n` in the linear
//! order. Edges carry the bond label `m(s,t) >= 3`; an absent pair means
//! `m = 2` (the generators commute). Construction recognizes the finite
//! type of every connected component and rejects anything else, and it
//! validates that the order is tree-compatible per component with
//! components forming consecutive blocks.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// A subset of generators as a bitmask over positions in the order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GenSet(pub u32);

impl GenSet {
    pub const EMPTY: GenSet = GenSet(0);

    pub fn singleton(s: usize) -> Self {
        GenSet(1 << s)
    }

    pub fn full(n: usize) -> Self {
        GenSet(if n == 32 { u32::MAX } else { (1 << n) - 1 })
    }

    #[allow(clippy::should_implement_trait)]
    pub fn from_iter<I: IntoIterator<Item = usize>>(it: I) -> Self {
        let mut m = 0;
        for s in it {
            m |= 1 << s;
        }
        GenSet(m)
    }

    pub fn contains(self, s: usize) -> bool {
        self.0 >> s & 1 == 1
    }

    pub fn insert(self, s: usize) -> Self {
        GenSet(self.0 | 1 << s)
    }

    pub fn remove(self, s: usize) -> Self {
        GenSet(self.0 & !(1 << s))
    }

    pub fn toggle(self, s: usize) -> Self {
        GenSet(self.0 ^ 1 << s)
    }

    pub fn union(self, o: GenSet) -> Self {
        GenSet(self.0 | o.0)
    }

    pub fn inter(self, o: GenSet) -> Self {
        GenSet(self.0 & o.0)
    }

    pub fn minus(self, o: GenSet) -> Self {
        GenSet(self.0 & !o.0)
    }

    pub fn is_subset(self, o: GenSet) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn min(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut m = self.0;
        std::iter::from_fn(move || {
            if m == 0 {
                None
            } else {
                let s = m.trailing_zeros() as usize;
                m &= m - 1;
                Some(s)
            }
        })
    }

    /// All subsets of `self`, including empty and full.
    pub fn subsets(self) -> impl Iterator<Item = GenSet> {
        let full = self.0;
        let mut sub = 0u32;
        let mut done = false;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let out = GenSet(sub);
            if sub == full {
                done = true;
            } else {
                sub = (sub.wrapping_sub(full)) & full;
            }
            Some(out)
        })
    }

    /// Lexicographic comparison as sorted element lists.
    ///
    /// The set containing the smallest element of the symmetric difference
    /// is the smaller one; equal sets compare equal.
    pub fn lex_cmp(self, o: GenSet) -> std::cmp::Ordering {
        let diff = self.0 ^ o.0;
        if diff == 0 {
            return std::cmp::Ordering::Equal;
        }
        let low = diff & diff.wrapping_neg();
        if self.0 & low != 0 {
            std::cmp::Ordering::Less
        } else {
            std::cmp::Ordering::Greater
        }
    }
}

impl fmt::Display for GenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, s) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", s + 1)?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for GenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Irreducible finite Coxeter types.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IrreducibleType {
    A(usize),
    B(usize),
    D(usize),
    E(usize),
    F4,
    H(usize),
    I2(u32),
}

impl IrreducibleType {
    pub fn order(self) -> u64 {
        fn fact(n: usize) -> u64 {
            (1..=n as u64).product()
        }
        match self {
            IrreducibleType::A(n) => fact(n + 1),
            IrreducibleType::B(n) => (1u64 << n) * fact(n),
            IrreducibleType::D(n) => (1u64 << (n - 1)) * fact(n),
            IrreducibleType::E(6) => 51_840,
            IrreducibleType::E(7) => 2_903_040,
            IrreducibleType::E(8) => 696_729_600,
            IrreducibleType::E(_) => unreachable!(),
            IrreducibleType::F4 => 1_152,
            IrreducibleType::H(2) => 10,
            IrreducibleType::H(3) => 120,
            IrreducibleType::H(4) => 14_400,
            IrreducibleType::H(_) => unreachable!(),
            IrreducibleType::I2(m) => 2 * m as u64,
        }
    }

    pub fn rank(self) -> usize {
        match self {
            IrreducibleType::A(n) | IrreducibleType::B(n) | IrreducibleType::D(n) => n,
            IrreducibleType::E(n) | IrreducibleType::H(n) => n,
            IrreducibleType::F4 => 4,
            IrreducibleType::I2(_) => 2,
        }
    }
}

impl fmt::Display for IrreducibleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IrreducibleType::A(n) => write!(f, "A{n}"),
            IrreducibleType::B(n) => write!(f, "B{n}"),
            IrreducibleType::D(n) => write!(f, "D{n}"),
            IrreducibleType::E(n) => write!(f, "E{n}"),
            IrreducibleType::F4 => write!(f, "F4"),
            IrreducibleType::H(n) => write!(f, "H{n}"),
            IrreducibleType::I2(m) => write!(f, "I2({m})"),
        }
    }
}

/// A Coxeter diagram: ordered generators plus labeled bonds.
#[derive(Clone, Debug)]
pub struct CoxeterDiagram {
    n: usize,
    bonds: BTreeMap<(usize, usize), u32>,
    adj: Vec<GenSet>,
    /// Connected components in block order, each sorted.
    components: Vec<Vec<usize>>,
    /// Recognized type per component, aligned with `components`.
    comp_types: Vec<IrreducibleType>,
    type_label: String,
}

impl CoxeterDiagram {
    /// Build and validate a diagram from an ordered generator count and a
    /// bond list `(s, t, m)` with `m >= 3`.
    pub fn new(n: usize, bond_list: &[(usize, usize, u32)]) -> Result<Self> {
        if n == 0 || n > 16 {
            return Err(Error::OutOfRange(format!("rank {n} not in 1..=16")));
        }
        let mut bonds = BTreeMap::new();
        let mut adj = vec![GenSet::EMPTY; n];
        for &(s, t, m) in bond_list {
            if s >= n || t >= n || s == t {
                return Err(Error::Parse(format!("bad bond ({s},{t})")));
            }
            if m < 3 {
                return Err(Error::Parse(format!("bond label m = {m} < 3")));
            }
            let key = (s.min(t), s.max(t));
            if bonds.insert(key, m).is_some() {
                return Err(Error::Parse(format!("duplicate bond {key:?}")));
            }
            adj[s] = adj[s].insert(t);
            adj[t] = adj[t].insert(s);
        }

        let components = connected_components(n, &adj);
        let mut comp_types = Vec::new();
        for comp in &components {
            comp_types.push(recognize(comp, &adj, &bonds)?);
        }
        let type_label = comp_types
            .iter()
            .map(|t| t.to_string())
            .collect::<Vec<_>>()
            .join("x");

        let d = CoxeterDiagram {
            n,
            bonds,
            adj,
            components,
            comp_types,
            type_label,
        };
        d.validate_order()?;
        Ok(d)
    }

    /// Parse a type expression: `A3`, `B4`, `I2(7)`, or products like `A2xA1`.
    pub fn parse(spec: &str) -> Result<Self> {
        let mut offset = 0usize;
        let mut bond_list = Vec::new();
        for part in spec.split(['x', 'X']) {
            let part = part.trim();
            let (rank, bonds) = standard_bonds(part)?;
            for (s, t, m) in bonds {
                bond_list.push((s + offset, t + offset, m));
            }
            offset += rank;
        }
        CoxeterDiagram::new(offset, &bond_list)
    }

    /// Rebuild this diagram with generators permuted: `perm[i]` is the old
    /// generator placed at new position `i`. Fails if the new order is not
    /// tree-compatible.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::Parse("order permutation has wrong length".into()));
        }
        let mut pos = vec![usize::MAX; self.n];
        for (i, &g) in perm.iter().enumerate() {
            if g >= self.n || pos[g] != usize::MAX {
                return Err(Error::Parse("order is not a permutation".into()));
            }
            pos[g] = i;
        }
        let bond_list: Vec<(usize, usize, u32)> = self
            .bonds
            .iter()
            .map(|(&(s, t), &m)| (pos[s], pos[t], m))
            .collect();
        CoxeterDiagram::new(self.n, &bond_list)
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn type_label(&self) -> &str {
        &self.type_label
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn component_types(&self) -> &[IrreducibleType] {
        &self.comp_types
    }

    pub fn bond(&self, s: usize, t: usize) -> u32 {
        if s == t {
            return 1;
        }
        *self.bonds.get(&(s.min(t), s.max(t))).unwrap_or(&2)
    }

    pub fn bonds(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.bonds.iter().map(|(&(s, t), &m)| (s, t, m))
    }

    pub fn neighbors(&self, s: usize) -> GenSet {
        self.adj[s]
    }

    pub fn adjacent(&self, s: usize, t: usize) -> bool {
        self.adj[s].contains(t)
    }

    /// Group order: product of component type orders.
    pub fn group_order(&self) -> u64 {
        self.comp_types.iter().map(|t| t.order()).product()
    }

    /// Connected components of the induced subdiagram `D[I]`, each as a GenSet.
    pub fn induced_components(&self, set: GenSet) -> Vec<GenSet> {
        let mut out = Vec::new();
        let mut seen = GenSet::EMPTY;
        for s in set.iter() {
            if seen.contains(s) {
                continue;
            }
            let mut comp = GenSet::singleton(s);
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for u in self.adj[v].inter(set).iter() {
                    if !comp.contains(u) {
                        comp = comp.insert(u);
                        stack.push(u);
                    }
                }
            }
            seen = seen.union(comp);
            out.push(comp);
        }
        out
    }

    pub fn is_connected_subset(&self, set: GenSet) -> bool {
        !set.is_empty() && self.induced_components(set).len() == 1
    }

    /// Largest component size of `D[I]`; 0 for the empty set.
    pub fn max_component_size(&self, set: GenSet) -> usize {
        self.induced_components(set)
            .iter()
            .map(|c| c.len())
            .max()
            .unwrap_or(0)
    }

    /// `I` indexes a cell of `Perm_k(W)` iff no sub-coset is k-parabolic,
    /// i.e. every component of `D[I]` has at most `k-2` vertices.
    pub fn admissible(&self, set: GenSet, k: usize) -> bool {
        k >= 2 && self.max_component_size(set) <= k - 2
    }

    /// Standard k-parabolic test: `|J| = k-1` and `D[J]` connected.
    pub fn is_k_parabolic_standard(&self, set: GenSet, k: usize) -> bool {
        set.len() == k.wrapping_sub(1) && self.is_connected_subset(set)
    }

    /// Order of the standard parabolic subgroup `W_I`.
    pub fn parabolic_order(&self, set: GenSet) -> Result<u64> {
        let mut order = 1u64;
        for comp in self.induced_components(set) {
            let verts: Vec<usize> = comp.iter().collect();
            let ty = recognize(&verts, &self.adj, &self.bonds)?;
            order *= ty.order();
        }
        Ok(order)
    }

    /// Tree-compatibility: within each component every vertex except the
    /// component maximum has a neighbor later in the order (equivalently,
    /// paths toward the component maximum are increasing), and components
    /// occupy consecutive blocks of the order.
    fn validate_order(&self) -> Result<()> {
        for comp in &self.components {
            let lo = *comp.first().unwrap();
            let hi = *comp.last().unwrap();
            if hi - lo + 1 != comp.len() {
                return Err(Error::InvalidOrder(format!(
                    "component {:?} is not a consecutive block",
                    comp.iter().map(|s| s + 1).collect::<Vec<_>>()
                )));
            }
            for &v in comp {
                if v == hi {
                    continue;
                }
                if self.adj[v].iter().all(|u| u < v) {
                    return Err(Error::InvalidOrder(format!(
                        "generator {} has no later neighbor in its component",
                        v + 1
                    )));
                }
            }
        }
        Ok(())
    }
}

fn connected_components(n: usize, adj: &[GenSet]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; n];
    let mut comps = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut comp = vec![s];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for u in adj[v].iter() {
                if !seen[u] {
                    seen[u] = true;
                    comp.push(u);
                    stack.push(u);
                }
            }
        }
        comp.sort_unstable();
        comps.push(comp);
    }
    comps.sort_by_key(|c| c[0]);
    comps
}

/// Recognize the finite type of one connected component, or fail with
/// `InfiniteGroup`. The classification is complete, so failure really does
/// mean the group is infinite.
fn recognize(
    verts: &[usize],
    adj: &[GenSet],
    bonds: &BTreeMap<(usize, usize), u32>,
) -> Result<IrreducibleType> {
    let n = verts.len();
    let vset = GenSet::from_iter(verts.iter().copied());
    let infinite = |why: &str| Error::InfiniteGroup(format!("component {vset}: {why}"));

    // collect internal edges with labels
    let mut edges = Vec::new();
    for (i, &s) in verts.iter().enumerate() {
        for &t in &verts[i + 1..] {
            if adj[s].contains(t) {
                edges.push((s, t, *bonds.get(&(s.min(t), s.max(t))).unwrap()));
            }
        }
    }
    if edges.len() + 1 != n {
        return Err(infinite("diagram contains a cycle"));
    }

    if n == 1 {
        return Ok(IrreducibleType::A(1));
    }
    if n == 2 {
        let m = edges[0].2;
        return Ok(match m {
            3 => IrreducibleType::A(2),
            4 => IrreducibleType::B(2),
            5 => IrreducibleType::H(2),
            m => IrreducibleType::I2(m),
        });
    }

    let degree = |v: usize| adj[v].inter(vset).len();
    let max_deg = verts.iter().map(|&v| degree(v)).max().unwrap();
    if max_deg > 3 {
        return Err(infinite("vertex of degree > 3"));
    }
    let big_bonds: Vec<_> = edges.iter().filter(|e| e.2 > 3).collect();
    if big_bonds.len() > 1 {
        return Err(infinite("more than one bond above 3"));
    }

    if max_deg == 3 {
        // branching diagram: only simply-laced D / E qualify
        if !big_bonds.is_empty() {
            return Err(infinite("branch vertex with a labeled bond"));
        }
        let branch_nodes: Vec<usize> = verts.iter().copied().filter(|&v| degree(v) == 3).collect();
        if branch_nodes.len() != 1 {
            return Err(infinite("more than one branch vertex"));
        }
        let b = branch_nodes[0];
        // walk the three branches to their leaf ends
        let mut arms: Vec<usize> = adj[b]
            .inter(vset)
            .iter()
            .map(|start| {
                let mut len = 1;
                let mut prev = b;
                let mut cur = start;
                loop {
                    let next: Vec<usize> =
                        adj[cur].inter(vset).iter().filter(|&u| u != prev).collect();
                    match next.as_slice() {
                        [] => break,
                        [u] => {
                            prev = cur;
                            cur = *u;
                            len += 1;
                        }
                        _ => unreachable!("second branch vertex"),
                    }
                }
                len
            })
            .collect();
        arms.sort_unstable();
        return match arms.as_slice() {
            [1, 1, _] => Ok(IrreducibleType::D(n)),
            [1, 2, 2] => Ok(IrreducibleType::E(6)),
            [1, 2, 3] => Ok(IrreducibleType::E(7)),
            [1, 2, 4] => Ok(IrreducibleType::E(8)),
            _ => Err(infinite("branch arm lengths outside D/E")),
        };
    }

    // a path; find an end and read off the bond sequence
    let end = verts.iter().copied().find(|&v| degree(v) == 1).unwrap();
    let mut path = vec![end];
    let mut prev = usize::MAX;
    let mut cur = end;
    for _ in 1..n {
        let next = adj[cur]
            .inter(vset)
            .iter()
            .find(|&u| u != prev)
            .expect("path continues");
        path.push(next);
        prev = cur;
        cur = next;
    }
    let labels: Vec<u32> = path
        .windows(2)
        .map(|w| *bonds.get(&(w[0].min(w[1]), w[0].max(w[1]))).unwrap())
        .collect();

    if labels.iter().all(|&m| m == 3) {
        return Ok(IrreducibleType::A(n));
    }
    let pos = labels.iter().position(|&m| m != 3).unwrap();
    let m = labels[pos];
    let at_end = pos == 0 || pos == n - 2;
    match (m, at_end) {
        (4, true) => Ok(IrreducibleType::B(n)),
        (4, false) if n == 4 && pos == 1 => Ok(IrreducibleType::F4),
        (5, true) if n <= 4 => Ok(IrreducibleType::H(n)),
        _ => Err(infinite("bond labels outside the finite classification")),
    }
}

/// Canonical bond lists for the named types, in the crate's default
/// generator orders (all tree-compatible with root at the last generator).
#[allow(clippy::type_complexity)]
fn standard_bonds(part: &str) -> Result<(usize, Vec<(usize, usize, u32)>)> {
    let bad = || Error::UnknownType(part.to_string());
    if let Some(rest) = part.strip_prefix("I2(") {
        let m: u32 = rest
            .strip_suffix(')')
            .ok_or_else(bad)?
            .parse()
            .map_err(|_| bad())?;
        if m < 3 {
            return Err(bad());
        }
        return Ok((2, vec![(0, 1, m)]));
    }
    if part == "G2" {
        return Ok((2, vec![(0, 1, 6)]));
    }
    let (family, rank_str) = part.split_at(1);
    let n: usize = rank_str.parse().map_err(|_| bad())?;
    let path = |m_first: u32, n: usize| -> Vec<(usize, usize, u32)> {
        (0..n - 1)
            .map(|i| (i, i + 1, if i == 0 { m_first } else { 3 }))
            .collect()
    };
    match (family, n) {
        ("A", 1..) => Ok((n, if n == 1 { vec![] } else { path(3, n) })),
        ("B" | "C", 2..) => Ok((n, path(4, n))),
        ("D", 4..) => {
            // two fork leaves first, then the path toward the far end
            let mut b = vec![(0, 2, 3), (1, 2, 3)];
            for i in 2..n - 1 {
                b.push((i, i + 1, 3));
            }
            Ok((n, b))
        }
        ("E", 6..=8) => {
            // leaf-to-root elimination order of the E tree: the short-arm
            // leaf is generator 2, attached to generator 4 of the long path
            let mut b = vec![(0, 2, 3), (1, 3, 3), (2, 3, 3)];
            for i in 3..n - 1 {
                b.push((i, i + 1, 3));
            }
            Ok((n, b))
        }
        ("F", 4) => Ok((4, vec![(0, 1, 3), (1, 2, 4), (2, 3, 3)])),
        ("H", 2..=4) => Ok((n, path(5, n))),
        _ => Err(bad()),
    }
}

/// Explicit JSON diagram form: `{"generators": [...], "bonds": [[s,t,m], ...]}`
/// where bond endpoints are generator names or 0-based indices.
pub fn parse_explicit_json(text: &str) -> Result<CoxeterDiagram> {
    let v: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("bad JSON: {e}")))?;
    let gens = v["generators"]
        .as_array()
        .ok_or_else(|| Error::Parse("missing `generators` array".into()))?;
    let names: Vec<String> = gens
        .iter()
        .map(|g| {
            g.as_str()
                .map(str::to_owned)
                .ok_or_else(|| Error::Parse("generator names must be strings".into()))
        })
        .collect::<Result<_>>()?;
    let lookup = |val: &serde_json::Value| -> Result<usize> {
        if let Some(s) = val.as_str() {
            names
                .iter()
                .position(|n| n == s)
                .ok_or_else(|| Error::Parse(format!("unknown generator `{s}`")))
        } else if let Some(i) = val.as_u64() {
            Ok(i as usize)
        } else {
            Err(Error::Parse("bond endpoint must be a name or index".into()))
        }
    };
    let mut bond_list = Vec::new();
    for b in v["bonds"]
        .as_array()
        .ok_or_else(|| Error::Parse("missing `bonds` array".into()))?
    {
        let arr = b
            .as_array()
            .filter(|a| a.len() == 3)
            .ok_or_else(|| Error::Parse("bond must be [s, t, m]".into()))?;
        let s = lookup(&arr[0])?;
        let t = lookup(&arr[1])?;
        let m = arr[2]
            .as_u64()
            .ok_or_else(|| Error::Parse("bond label must be an integer".into()))?
            as u32;
        bond_list.push((s, t, m));
    }
    CoxeterDiagram::new(names.len(), &bond_list)
}
