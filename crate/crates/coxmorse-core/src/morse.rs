//! Discrete Morse matchings on `Perm_k(W)`.
//!
//! The coset matching processes generators in order: skip ascents, remove
//! the first removable generator of `I`, and when adding a descent would
//! leave the complex, discard the lexicographically least obstruction
//! before moving on. The same matching arises fiber-by-fiber from the
//! shellings of `Ind_{k-2}(D[Des(w)])`, and both constructions are kept and
//! compared cell for cell.
//!
//! For `k = 3` the complex is cubical and the module also provides the
//! ascending-block alternating paths and the Morse boundary as a sum of
//! signed path weights.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::coxeter::{CoxeterSystem, GroupElement};
use crate::diagram::{CoxeterDiagram, GenSet};
use crate::error::{Error, Result};
use crate::homology::SparseIntMatrix;
use crate::ind_complex::{lex_shelling, shelling_match, MatchOutcome, OrderedGraph, ShellingOrder};
use crate::perm_complex::{admissibility_table, check_k, PermComplex};

/// What the matching does to one coset.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatchStep {
    /// Matched with `w W_{I + s}`.
    Up(usize),
    /// Matched with `w W_{I - s}`.
    Down(usize),
    Critical,
}

impl MatchStep {
    pub fn apply(self, gens: GenSet) -> Option<GenSet> {
        match self {
            MatchStep::Up(s) => Some(gens.insert(s)),
            MatchStep::Down(s) => Some(gens.remove(s)),
            MatchStep::Critical => None,
        }
    }
}

/// The coset matching algorithm. `admissible` is the subset table for
/// (diagram, k); `des` must be the descent set of the maximal-length
/// representative and `gens` an admissible subset of it.
pub fn match_coset(
    diagram: &CoxeterDiagram,
    k: usize,
    admissible: &[bool],
    des: GenSet,
    gens: GenSet,
) -> MatchStep {
    debug_assert!(gens.is_subset(des));
    let mut live = GenSet::full(diagram.rank());
    while let Some(s) = live.min() {
        if !des.contains(s) {
            live = live.remove(s);
        } else if gens.contains(s) {
            return MatchStep::Down(s);
        } else if !admissible[gens.insert(s).0 as usize] {
            let j = min_obstruction(diagram, gens, s, k);
            live = live.minus(j).remove(s);
        } else {
            return MatchStep::Up(s);
        }
    }
    MatchStep::Critical
}

/// `min P(w W_I, s)`: the lexicographically least `J` inside `I` such that
/// `W_{J + s}` is k-parabolic, i.e. `D[J + s]` is connected with `k - 1`
/// vertices.
fn min_obstruction(diagram: &CoxeterDiagram, gens: GenSet, s: usize, k: usize) -> GenSet {
    let mut best: Option<GenSet> = None;
    for j in gens.subsets() {
        if j.len() != k - 2 {
            continue;
        }
        if !diagram.is_connected_subset(j.insert(s)) {
            continue;
        }
        if best.is_none_or(|b| j.lex_cmp(b) == std::cmp::Ordering::Less) {
            best = Some(j);
        }
    }
    best.expect("an obstruction exists when the extension is inadmissible")
}

/// Fiber-wise matching: per descent set, the shelling-induced matching on
/// `Ind_{k-2}(D[Des(w)])` with the induced (tree-compatible) vertex order.
/// Shellings are cached per descent set.
pub struct FiberMatcher<'d> {
    diagram: &'d CoxeterDiagram,
    k: usize,
    cache: HashMap<GenSet, (Vec<usize>, ShellingOrder)>,
}

impl<'d> FiberMatcher<'d> {
    pub fn new(diagram: &'d CoxeterDiagram, k: usize) -> Self {
        FiberMatcher {
            diagram,
            k,
            cache: HashMap::new(),
        }
    }

    fn fiber(&mut self, des: GenSet) -> &(Vec<usize>, ShellingOrder) {
        if !self.cache.contains_key(&des) {
            let verts: Vec<usize> = des.iter().collect();
            let mut edges = Vec::new();
            for (a, &va) in verts.iter().enumerate() {
                for (b, &vb) in verts.iter().enumerate().skip(a + 1) {
                    if self.diagram.adjacent(va, vb) {
                        edges.push((a, b));
                    }
                }
            }
            let g = OrderedGraph::new(verts.len(), &edges).unwrap();
            let order = lex_shelling(&g, self.k - 2)
                .expect("induced order on an induced forest is tree-compatible");
            self.cache.insert(des, (verts, order));
        }
        &self.cache[&des]
    }

    pub fn step(&mut self, des: GenSet, gens: GenSet) -> MatchStep {
        let k = self.k;
        debug_assert!(gens.is_subset(des));
        let (verts, order) = self.fiber(des);
        let face: u64 = gens
            .iter()
            .map(|s| 1u64 << verts.iter().position(|&v| v == s).unwrap())
            .sum();
        debug_assert!(face.count_ones() as usize == gens.len());
        let _ = k;
        match shelling_match(order, face) {
            MatchOutcome::Critical => MatchStep::Critical,
            MatchOutcome::Partner(p) => {
                let local = (face ^ p).trailing_zeros() as usize;
                let s = verts[local];
                if gens.contains(s) {
                    MatchStep::Down(s)
                } else {
                    MatchStep::Up(s)
                }
            }
        }
    }
}

/// Structural criticality of a pair `(w, T)`, phrased on descent sets:
/// components of `D[T]` all have size `k - 2`; each component `C` has an
/// earlier private neighbor inside the descent set; and every descent
/// outside `T` is adjacent to some component.
pub fn critical_predicate(diagram: &CoxeterDiagram, des: GenSet, t_set: GenSet, k: usize) -> bool {
    if !t_set.is_subset(des) {
        return false;
    }
    let comps = diagram.induced_components(t_set);
    if !comps.iter().all(|c| c.len() == k - 2) {
        return false;
    }
    // adjacency masks per component
    let neighbor_mask = |c: GenSet| -> GenSet {
        let mut m = GenSet::EMPTY;
        for v in c.iter() {
            m = m.union(diagram.neighbors(v));
        }
        m.minus(t_set)
    };
    let masks: Vec<(GenSet, GenSet)> = comps.iter().map(|&c| (c, neighbor_mask(c))).collect();
    for (i, &(c, nb)) in masks.iter().enumerate() {
        let min_c = c.min().unwrap();
        let below = GenSet(if min_c == 0 { 0 } else { (1u32 << min_c) - 1 });
        let mut private = nb.inter(below);
        for (j, &(_, other_nb)) in masks.iter().enumerate() {
            if i != j {
                private = private.minus(other_nb);
            }
        }
        if private.inter(des).is_empty() {
            return false;
        }
    }
    let adjacent_any = masks
        .iter()
        .fold(GenSet::EMPTY, |acc, &(_, nb)| acc.union(nb));
    des.minus(t_set).is_subset(adjacent_any)
}

/// A matching on a built complex: `partner[c]` is the matched cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    pub partner: Vec<Option<usize>>,
}

impl Matching {
    pub fn critical_cells(&self) -> Vec<usize> {
        (0..self.partner.len())
            .filter(|&c| self.partner[c].is_none())
            .collect()
    }

    pub fn critical_counts(&self, complex: &PermComplex) -> Vec<usize> {
        let mut counts = vec![0usize; complex.top_dim() + 1];
        for c in self.critical_cells() {
            counts[complex.cell(c).dim()] += 1;
        }
        counts
    }

    pub fn matched_count(&self) -> usize {
        self.partner.iter().filter(|p| p.is_some()).count()
    }

    /// Involution moving every matched cell along a cover relation.
    pub fn validate(&self, complex: &PermComplex) -> bool {
        for c in 0..self.partner.len() {
            if let Some(p) = self.partner[c] {
                if self.partner[p] != Some(c) || p == c {
                    return false;
                }
                let (lo, hi) = if complex.cell(c).dim() < complex.cell(p).dim() {
                    (c, p)
                } else {
                    (p, c)
                };
                if complex.cell(hi).dim() != complex.cell(lo).dim() + 1
                    || !complex.covers_of(hi).contains(&lo)
                {
                    return false;
                }
            }
        }
        true
    }
}

/// Run the coset matching over every cell of a built complex.
pub fn matching_algorithm(complex: &PermComplex) -> Matching {
    matching_from(complex, |des, gens, adm, diagram, k| {
        match_coset(diagram, k, adm, des, gens)
    })
}

/// Assemble the fiber-wise matching over every cell of a built complex.
pub fn matching_via_fibers(complex: &PermComplex) -> Matching {
    let mut fibers = FiberMatcher::new(complex.sys.diagram(), complex.k);
    matching_from(complex, move |des, gens, _, _, _| fibers.step(des, gens))
}

fn matching_from<F>(complex: &PermComplex, mut step: F) -> Matching
where
    F: FnMut(GenSet, GenSet, &[bool], &CoxeterDiagram, usize) -> MatchStep,
{
    let diagram = complex.sys.diagram();
    let adm = admissibility_table(diagram, complex.k);
    let mut partner = vec![None; complex.cell_count()];
    for (id, slot) in partner.iter_mut().enumerate() {
        let cell = complex.cell(id);
        let des = complex.sys.descent_set(&cell.rep);
        if let Some(new_gens) = step(des, cell.gens, &adm, diagram, complex.k).apply(cell.gens) {
            let p = complex
                .find(&cell.rep, new_gens)
                .expect("partner cell exists in the complex");
            *slot = Some(p);
        }
    }
    Matching { partner }
}

/// No directed cycle through matched edges: in the Hasse diagram between
/// consecutive dimensions, reverse matched covers and topologically sort.
pub fn verify_acyclic(complex: &PermComplex, matching: &Matching) -> bool {
    for d in 1..=complex.top_dim() {
        let uppers = &complex.by_dim()[d];
        let lowers = &complex.by_dim()[d - 1];
        let node_pos: HashMap<usize, usize> = uppers
            .iter()
            .chain(lowers.iter())
            .enumerate()
            .map(|(i, &c)| (c, i))
            .collect();
        let n = node_pos.len();
        let mut out_edges: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut indeg = vec![0usize; n];
        for &u in uppers {
            for &l in complex.covers_of(u) {
                let (from, to) = if matching.partner[l] == Some(u) {
                    (node_pos[&l], node_pos[&u])
                } else {
                    (node_pos[&u], node_pos[&l])
                };
                out_edges[from].push(to);
                indeg[to] += 1;
            }
        }
        let mut stack: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for &to in &out_edges[v] {
                indeg[to] -= 1;
                if indeg[to] == 0 {
                    stack.push(to);
                }
            }
        }
        if seen != n {
            return false;
        }
    }
    true
}

/// Streamed critical-cell census for large groups: no complex is stored;
/// each element contributes its admissible descent subsets. Also compares
/// the algorithm against the fiber matching and the critical predicate on
/// every cell.
#[derive(Clone, Debug)]
pub struct StreamAudit {
    pub cells: u64,
    pub critical_by_dim: Vec<usize>,
    pub m_equals_mprime: bool,
    pub critical_equals_predicate: bool,
}

pub fn stream_audit(sys: &CoxeterSystem, k: usize, budget: u64) -> Result<StreamAudit> {
    check_k(sys.diagram(), k)?;
    let diagram = sys.diagram();
    let n = diagram.rank();
    let adm = admissibility_table(diagram, k);
    let elements = sys.enumerate(budget)?;

    // one shelling per distinct descent set, built up front
    let mut fibers = FiberMatcher::new(diagram, k);
    let mut distinct: Vec<GenSet> = Vec::new();
    for mask in 0u32..1 << n {
        distinct.push(GenSet(mask));
    }
    for &des in &distinct {
        fibers.fiber(des);
    }
    let fibers = &fibers.cache;

    let audit = elements
        .par_iter()
        .map(|w| {
            let des = sys.descent_set(w);
            let (verts, order) = &fibers[&des];
            let mut counts = vec![0usize; n + 1];
            let mut cells = 0u64;
            let mut top = 0usize;
            let mut m_eq = true;
            let mut pred_eq = true;
            for gens in des.subsets() {
                if !adm[gens.0 as usize] {
                    continue;
                }
                cells += 1;
                top = top.max(gens.len());
                let step = match_coset(diagram, k, &adm, des, gens);
                let face: u64 = gens
                    .iter()
                    .map(|s| 1u64 << verts.iter().position(|&v| v == s).unwrap())
                    .sum();
                let fiber_step = match shelling_match(order, face) {
                    MatchOutcome::Critical => MatchStep::Critical,
                    MatchOutcome::Partner(p) => {
                        let s = verts[(face ^ p).trailing_zeros() as usize];
                        if gens.contains(s) {
                            MatchStep::Down(s)
                        } else {
                            MatchStep::Up(s)
                        }
                    }
                };
                if step != fiber_step {
                    m_eq = false;
                }
                let is_critical = step == MatchStep::Critical;
                if is_critical {
                    counts[gens.len()] += 1;
                }
                if is_critical != critical_predicate(diagram, des, gens, k) {
                    pred_eq = false;
                }
            }
            (cells, counts, top, m_eq, pred_eq)
        })
        .reduce(
            || (0u64, vec![0usize; n + 1], 0usize, true, true),
            |mut a, b| {
                a.0 += b.0;
                for (x, y) in a.1.iter_mut().zip(&b.1) {
                    *x += y;
                }
                a.2 = a.2.max(b.2);
                a.3 &= b.3;
                a.4 &= b.4;
                (a.0, a.1, a.2, a.3, a.4)
            },
        );

    let (cells, mut counts, top, m_eq, pred_eq) = audit;
    counts.truncate(top + 1);
    Ok(StreamAudit {
        cells,
        critical_by_dim: counts,
        m_equals_mprime: m_eq,
        critical_equals_predicate: pred_eq,
    })
}

// ---------------------------------------------------------------------------
// type A: set compositions
// ---------------------------------------------------------------------------

/// An ordered set partition of `[n+1]`; each block is stored in decreasing
/// order, matching how a maximal-length representative reads off.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SetComposition(pub Vec<Vec<u32>>);

impl SetComposition {
    pub fn normalize(blocks: Vec<Vec<u32>>) -> Self {
        let mut out = blocks;
        for b in &mut out {
            b.sort_unstable_by(|a, b| b.cmp(a));
        }
        SetComposition(out)
    }
}

impl std::fmt::Display for SetComposition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|b| b.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(""))
            .collect();
        write!(f, "({})", parts.join("|"))
    }
}

/// The matching in set-composition form (type A only): scan adjacent block
/// pairs; split a non-singleton block at its maximum, step over ascents,
/// step over full `k-1` blocks, otherwise merge.
pub fn match_set_composition(c: &SetComposition, k: usize) -> Result<Option<SetComposition>> {
    for b in &c.0 {
        if b.len() > k - 1 {
            return Err(Error::BlockTooLarge {
                size: b.len(),
                max: k - 1,
            });
        }
        assert!(!b.is_empty());
    }
    let blocks = &c.0;
    let mut i = 0;
    loop {
        if i >= blocks.len() {
            return Ok(None);
        }
        if blocks[i].len() > 1 {
            // split off the maximum
            let mut out: Vec<Vec<u32>> = blocks[..i].to_vec();
            out.push(vec![blocks[i][0]]);
            out.push(blocks[i][1..].to_vec());
            out.extend_from_slice(&blocks[i + 1..]);
            return Ok(Some(SetComposition(out)));
        }
        if i + 1 >= blocks.len() {
            return Ok(None);
        }
        if blocks[i][0] < blocks[i + 1][0] {
            // ascent between the singleton and the next block's maximum
            i += 1;
        } else if blocks[i + 1].len() == k - 1 {
            i += 2;
        } else {
            let mut merged = blocks[i].clone();
            merged.extend_from_slice(&blocks[i + 1]);
            merged.sort_unstable_by(|a, b| b.cmp(a));
            let mut out: Vec<Vec<u32>> = blocks[..i].to_vec();
            out.push(merged);
            out.extend_from_slice(&blocks[i + 1..].iter().skip(1).cloned().collect::<Vec<_>>());
            return Ok(Some(SetComposition(out)));
        }
    }
}

/// One-line permutations for every element of a type-A system, keyed by
/// element key. BFS mirrors the group enumeration: left multiplication by
/// generator `i` swaps the values `i+1` and `i+2`.
pub fn type_a_permutations(
    sys: &CoxeterSystem,
    budget: u64,
) -> Result<HashMap<GroupElement, Vec<u32>>> {
    if sys.diagram().components().len() != 1
        || sys.diagram().bonds().any(|(s, t, m)| m != 3 || t != s + 1)
    {
        return Err(Error::OutOfRange(
            "set compositions need an irreducible type A system in path order".into(),
        ));
    }
    let n = sys.rank();
    let mut map: HashMap<GroupElement, Vec<u32>> = HashMap::new();
    let id = sys.identity();
    let mut queue = vec![id.clone()];
    map.insert(id, (1..=n as u32 + 1).collect());
    let mut head = 0;
    if sys.order() > budget {
        return Err(Error::BudgetExceeded {
            order: sys.order(),
            budget,
        });
    }
    while head < queue.len() {
        let w = queue[head].clone();
        head += 1;
        let perm = map[&w].clone();
        for s in 0..n {
            let ws = sys.right_mul(&w, s);
            if !map.contains_key(&ws) {
                // right multiplication swaps positions s, s+1
                let mut p = perm.clone();
                p.swap(s, s + 1);
                map.insert(ws.clone(), p);
                queue.push(ws);
            }
        }
    }
    // descents of the one-line notation match the root criterion
    debug_assert!(map
        .iter()
        .all(|(w, p)| { (0..n).all(|s| (p[s] > p[s + 1]) == sys.is_descent(w, s)) }));
    Ok(map)
}

/// The face bijection: coset `(w, I)` to the set composition whose blocks
/// are the runs of `I`-linked positions of the one-line notation of `w`.
pub fn composition_of(perm: &[u32], gens: GenSet) -> SetComposition {
    let mut blocks = Vec::new();
    let mut cur = vec![perm[0]];
    for (pos, &value) in perm.iter().enumerate().skip(1) {
        if gens.contains(pos - 1) {
            cur.push(value);
        } else {
            blocks.push(std::mem::take(&mut cur));
            cur.push(value);
        }
    }
    blocks.push(cur);
    SetComposition::normalize(blocks)
}

// ---------------------------------------------------------------------------
// k = 3: ascending blocks, alternating paths, Morse boundary
// ---------------------------------------------------------------------------

/// Sign of the facet obtained by removing `s` from a cell with generator
/// set `gens` (a cube when `k = 3`): `(-1)^{#{r in gens: r < s}}` on the
/// face keeping the same representative, the opposite on the parallel one.
pub fn cube_sign(gens: GenSet, s: usize, same_rep: bool) -> i64 {
    let below = gens.iter().take_while(|&r| r < s).count();
    let sign = if below % 2 == 0 { 1 } else { -1 };
    if same_rep {
        sign
    } else {
        -sign
    }
}

/// The matched generator `m(w W_I)` of a coset, or `None` when critical.
pub fn threshold(
    diagram: &CoxeterDiagram,
    k: usize,
    adm: &[bool],
    des: GenSet,
    gens: GenSet,
) -> Option<usize> {
    match match_coset(diagram, k, adm, des, gens) {
        MatchStep::Up(s) | MatchStep::Down(s) => Some(s),
        MatchStep::Critical => None,
    }
}

/// The ascending block containing `s`, as an inclusive position interval
/// `[lo, s]`: it starts two past the previous element of `I`.
fn ascending_block(gens: GenSet, s: usize) -> (usize, usize) {
    let prev = gens.iter().take_while(|&r| r < s).last();
    let lo = prev.map_or(0, |p| p + 2);
    assert!(lo <= s, "ascending blocks separate the elements of I");
    (lo, s)
}

/// One alternating directed path for `k = 3`: start at `w W_I`, step down
/// through the `s`-facet (`hat` picks the parallel side), then repeatedly
/// follow the matching up and cross to the opposite facet while the
/// matched generator stays in the ascending block of `s`.
#[derive(Clone, Debug)]
pub struct AlternatingPath {
    /// Cells along the path, starting at the source, ending at a facet.
    pub cells: Vec<(GroupElement, GenSet)>,
    pub weight: i64,
}

impl AlternatingPath {
    pub fn endpoint(&self) -> &(GroupElement, GenSet) {
        self.cells.last().unwrap()
    }
}

pub fn alternating_path(
    sys: &CoxeterSystem,
    adm: &[bool],
    cell: (&GroupElement, GenSet),
    s: usize,
    hat: bool,
) -> Result<AlternatingPath> {
    let k = 3;
    let diagram = sys.diagram();
    let (w, i_set) = cell;
    let des = sys.descent_set(w);
    if !i_set.contains(s) {
        return Err(Error::InvalidGenerator(s));
    }
    if let Some(m) = threshold(diagram, k, adm, des, i_set) {
        if s > m {
            return Err(Error::InvalidGenerator(s));
        }
    }
    let (lo, hi) = ascending_block(i_set, s);
    let sub = i_set.remove(s);

    let mut cells = vec![(w.clone(), i_set)];
    let mut weight = cube_sign(i_set, s, !hat);
    let mut u = if hat { sys.right_mul(w, s) } else { w.clone() };
    debug_assert!(sys.is_max_rep(&u, sub));
    cells.push((u.clone(), sub));

    loop {
        let u_des = sys.descent_set(&u);
        let step = match_coset(diagram, k, adm, u_des, sub);
        let MatchStep::Up(r) = step else { break };
        if r < lo || r > hi {
            break;
        }
        let upper = sub.insert(r);
        cells.push((u.clone(), upper));
        // up through the matching, then down the parallel r-facet
        weight *= -cube_sign(upper, r, true);
        weight *= cube_sign(upper, r, false);
        let ur = sys.right_mul(&u, r);
        u = sys.max_length_rep(&ur, sub);
        debug_assert_eq!(u, ur, "the crossed representative is already maximal");
        cells.push((u.clone(), sub));
    }
    Ok(AlternatingPath { cells, weight })
}

/// Morse boundary entry `[tau : sigma]` as the signed sum over alternating
/// paths, for a built `k = 3` complex.
pub fn morse_boundary(
    complex: &PermComplex,
    matching: &Matching,
    sigma: usize,
    tau: usize,
) -> Result<i64> {
    let (ds, dt) = (complex.cell(sigma).dim(), complex.cell(tau).dim());
    if ds != dt + 1 {
        return Err(Error::DimensionMismatch {
            expected: dt + 1,
            got: ds,
        });
    }
    let facets = |id: usize| complex.facets_signed(id);
    let mut total = 0i64;
    // stack of (upper cell, facet to skip, accumulated weight)
    let mut stack: Vec<(usize, Option<usize>, i64)> = vec![(sigma, None, 1)];
    while let Some((upper, avoid, wt)) = stack.pop() {
        for (f, sign) in facets(upper)? {
            if Some(f) == avoid {
                continue;
            }
            if f == tau {
                total += wt * sign;
                continue;
            }
            if let Some(b) = matching.partner[f] {
                if complex.cell(b).dim() == complex.cell(f).dim() + 1 {
                    let up_sign = complex.cubical_incidence(b, f)?;
                    stack.push((b, Some(f), wt * sign * -up_sign));
                }
            }
        }
    }
    Ok(total)
}

/// Morse boundary over an arbitrary signed complex, for fixtures and
/// cross-checks: `facets_signed(c)` lists codim-1 faces with incidence
/// signs, `partner` is the matching.
pub fn morse_boundary_generic<F>(
    facets_signed: &F,
    dim: &[usize],
    partner: &[Option<usize>],
    sigma: usize,
    tau: usize,
) -> i64
where
    F: Fn(usize) -> Vec<(usize, i64)>,
{
    let mut total = 0i64;
    let mut stack: Vec<(usize, Option<usize>, i64)> = vec![(sigma, None, 1)];
    while let Some((upper, avoid, wt)) = stack.pop() {
        for (f, sign) in facets_signed(upper) {
            if Some(f) == avoid {
                continue;
            }
            if f == tau {
                total += wt * sign;
                continue;
            }
            if let Some(b) = partner[f] {
                if dim[b] == dim[f] + 1 {
                    let up_sign = facets_signed(b)
                        .into_iter()
                        .find(|&(x, _)| x == f)
                        .expect("matched facet")
                        .1;
                    stack.push((b, Some(f), wt * sign * -up_sign));
                }
            }
        }
    }
    total
}

/// All Morse boundary matrices of a `k = 3` complex between consecutive
/// critical dimensions.
pub fn morse_boundary_matrices(
    complex: &PermComplex,
    matching: &Matching,
) -> Result<Vec<SparseIntMatrix>> {
    let counts = matching.critical_counts(complex);
    let mut by_dim: Vec<Vec<usize>> = vec![Vec::new(); counts.len()];
    for c in matching.critical_cells() {
        by_dim[complex.cell(c).dim()].push(c);
    }
    let mut out = vec![SparseIntMatrix::zero(0, counts[0])];
    for d in 1..counts.len() {
        let mut triplets = Vec::new();
        for (ci, &sigma) in by_dim[d].iter().enumerate() {
            for (ri, &tau) in by_dim[d - 1].iter().enumerate() {
                let v = morse_boundary(complex, matching, sigma, tau)?;
                if v != 0 {
                    triplets.push((ri, ci, v));
                }
            }
        }
        out.push(SparseIntMatrix::from_triplets(
            counts[d - 1],
            counts[d],
            triplets,
        ));
    }
    Ok(out)
}

/// Full verification bundle behind the `verify` command.
#[derive(Clone, Debug, serde::Serialize)]
pub struct MatchingAudit {
    pub cells: usize,
    pub matched: usize,
    pub critical_by_dim: Vec<usize>,
    pub involution: bool,
    pub acyclic: bool,
    pub m_equals_mprime: bool,
    pub critical_equals_predicate: bool,
    /// `Some` only for k = 3, where boundary entries are path sums.
    pub boundary_zero: Option<bool>,
}

impl MatchingAudit {
    pub fn all_passed(&self) -> bool {
        self.involution
            && self.acyclic
            && self.m_equals_mprime
            && self.critical_equals_predicate
            && self.boundary_zero.unwrap_or(true)
    }
}

pub fn audit(complex: &PermComplex) -> Result<MatchingAudit> {
    let matching = matching_algorithm(complex);
    let fibers = matching_via_fibers(complex);
    let involution = matching.validate(complex);
    let acyclic = verify_acyclic(complex, &matching);
    let m_equals_mprime = matching == fibers;

    let diagram = complex.sys.diagram();
    let mut critical_equals_predicate = true;
    for id in 0..complex.cell_count() {
        let cell = complex.cell(id);
        let des = complex.sys.descent_set(&cell.rep);
        let is_critical = matching.partner[id].is_none();
        if is_critical != critical_predicate(diagram, des, cell.gens, complex.k) {
            critical_equals_predicate = false;
            break;
        }
    }

    let boundary_zero = if complex.k == 3 {
        let mats = morse_boundary_matrices(complex, &matching)?;
        Some(mats.iter().all(|m| m.is_zero()))
    } else {
        None
    };

    Ok(MatchingAudit {
        cells: complex.cell_count(),
        matched: matching.matched_count(),
        critical_by_dim: matching.critical_counts(complex),
        involution,
        acyclic,
        m_equals_mprime,
        critical_equals_predicate,
        boundary_zero,
    })
}
