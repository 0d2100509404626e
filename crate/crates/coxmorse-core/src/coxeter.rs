//! Finite Coxeter systems with exact root bookkeeping.
//!
//! Elements are stored as the tuple of images of the simple roots (root
//! indices), which determines the element. Multiplication by a generator on
//! either side goes through precomputed root permutation tables; no
//! floating point appears anywhere.
//!
//! Roots of the crystallographic and H-type components are coordinate
//! vectors over [`Phi`](crate::phi::Phi) in the simple-root basis, closed
//! under the simple reflections. Rank-2 components are modeled directly as
//! dihedral root circles, which keeps `I2(m)` exact for every `m`.

use std::collections::HashMap;
use std::fmt;

use crate::diagram::{CoxeterDiagram, GenSet};
use crate::error::{Error, Result};
use crate::phi::{Phi, ONE, ZERO};

/// A group element: images `w(alpha_s)` of the simple roots, plus length.
#[derive(Clone, Debug)]
pub struct GroupElement {
    img: Box<[u16]>,
    len: u32,
}

impl PartialEq for GroupElement {
    fn eq(&self, other: &Self) -> bool {
        self.img == other.img
    }
}
impl Eq for GroupElement {}

impl std::hash::Hash for GroupElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.img.hash(state);
    }
}

impl GroupElement {
    pub fn length(&self) -> usize {
        self.len as usize
    }

    /// Canonical key: the simple-image tuple.
    pub fn key(&self) -> &[u16] {
        &self.img
    }

    /// Compact printable key, dot-separated root indices.
    pub fn key_string(&self) -> String {
        self.img
            .iter()
            .map(|r| r.to_string())
            .collect::<Vec<_>>()
            .join(".")
    }
}

enum Model {
    Ring {
        /// Global generator ids of this component, in order.
        gens: Vec<usize>,
        /// Root coordinates in the local simple-root basis.
        coords: Vec<Vec<Phi>>,
        index: HashMap<Vec<Phi>, u16>,
        /// Local Cartan rows: `s_i(v) = v - (sum_j v_j cartan[i][j]) alpha_i`.
        cartan: Vec<Vec<Phi>>,
        base: u16,
    },
    Dihedral {
        m: u32,
        base: u16,
        g0: usize,
        g1: usize,
    },
}

/// A finite Coxeter system: diagram, roots, permutation tables, order.
pub struct CoxeterSystem {
    diagram: CoxeterDiagram,
    models: Vec<Model>,
    comp_of_gen: Vec<usize>,
    comp_of_root: Vec<usize>,
    simple_perm: Vec<Vec<u16>>,
    neg_of: Vec<u16>,
    positive: Vec<bool>,
    simple_idx: Vec<u16>,
    order: u64,
    parabolic_orders: Vec<u64>,
}

impl fmt::Debug for CoxeterSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "CoxeterSystem({}, |W| = {}, {} roots)",
            self.diagram.type_label(),
            self.order,
            self.comp_of_root.len()
        )
    }
}

impl CoxeterSystem {
    /// Build a system from a type expression (`"A3"`, `"B4xA1"`, `"I2(7)"`).
    pub fn parse(spec: &str) -> Result<Self> {
        Self::build(CoxeterDiagram::parse(spec)?)
    }

    /// Build a system from a validated diagram.
    pub fn build(diagram: CoxeterDiagram) -> Result<Self> {
        let n = diagram.rank();
        let mut comp_of_gen = vec![0usize; n];
        for (ci, comp) in diagram.components().iter().enumerate() {
            for &g in comp {
                comp_of_gen[g] = ci;
            }
        }

        let mut models = Vec::new();
        let mut comp_of_root = Vec::new();
        let mut simple_idx = vec![0u16; n];
        for (ci, comp) in diagram.components().iter().enumerate() {
            let base = comp_of_root.len() as u16;
            if comp.len() == 2 {
                let m = diagram.bond(comp[0], comp[1]);
                simple_idx[comp[0]] = base;
                simple_idx[comp[1]] = base + (m - 1) as u16;
                comp_of_root.extend(std::iter::repeat_n(ci, 2 * m as usize));
                models.push(Model::Dihedral {
                    m,
                    base,
                    g0: comp[0],
                    g1: comp[1],
                });
            } else {
                let gens = comp.clone();
                let cartan = local_cartan(&diagram, &gens);
                let (coords, index) = close_roots(&cartan)?;
                for (li, &g) in gens.iter().enumerate() {
                    simple_idx[g] = base + local_simple_index(&coords, li);
                }
                comp_of_root.extend(std::iter::repeat_n(ci, coords.len()));
                models.push(Model::Ring {
                    gens,
                    coords,
                    index,
                    cartan,
                    base,
                });
            }
        }

        let n_roots = comp_of_root.len();
        let expected: usize = diagram
            .component_types()
            .iter()
            .map(|t| root_count(*t))
            .sum();
        debug_assert_eq!(n_roots, expected, "root closure size mismatch");

        // permutation tables and sign data
        let mut simple_perm = vec![vec![0u16; n_roots]; n];
        let mut positive = vec![false; n_roots];
        let mut neg_of = vec![0u16; n_roots];
        for model in &models {
            match model {
                Model::Ring {
                    gens,
                    coords,
                    index,
                    cartan,
                    base,
                } => {
                    for (li, v) in coords.iter().enumerate() {
                        let r = *base as usize + li;
                        positive[r] = vec_sign(v) > 0;
                        let negv: Vec<Phi> = v.iter().map(|&c| -c).collect();
                        neg_of[r] = base + index[&negv];
                        for (gi, &g) in gens.iter().enumerate() {
                            let w = reflect(v, gi, cartan);
                            simple_perm[g][r] = base + index[&w];
                        }
                    }
                    // generators outside this component fix its roots
                    for (g, perm) in simple_perm.iter_mut().enumerate() {
                        if !gens.contains(&g) {
                            for li in 0..coords.len() {
                                let r = *base as usize + li;
                                perm[r] = r as u16;
                            }
                        }
                    }
                }
                Model::Dihedral { m, base, g0, g1 } => {
                    let m = *m as i64;
                    for j in 0..2 * m {
                        let r = *base as usize + j as usize;
                        positive[r] = j < m;
                        neg_of[r] = base + ((j + m) % (2 * m)) as u16;
                        for (g, perm) in simple_perm.iter_mut().enumerate() {
                            let jj = if g == *g0 {
                                (m - j).rem_euclid(2 * m)
                            } else if g == *g1 {
                                (m - 2 - j).rem_euclid(2 * m)
                            } else {
                                j
                            };
                            perm[r] = base + jj as u16;
                        }
                    }
                }
            }
        }

        let order = diagram.group_order();
        let parabolic_orders = parabolic_order_table(&diagram)?;
        let sys = CoxeterSystem {
            diagram,
            models,
            comp_of_gen,
            comp_of_root,
            simple_perm,
            neg_of,
            positive,
            simple_idx,
            order,
            parabolic_orders,
        };
        debug_assert!(sys.tables_consistent());
        Ok(sys)
    }

    /// Table invariants: each generator acts as an involution on roots and
    /// negates exactly one positive root (its own simple root), and
    /// negation itself is an involution.
    pub fn tables_consistent(&self) -> bool {
        let nr = self.comp_of_root.len();
        for r in 0..nr {
            let neg = self.neg_of[r] as usize;
            if self.neg_of[neg] as usize != r || self.positive[r] == self.positive[neg] {
                return false;
            }
        }
        for s in 0..self.rank() {
            let perm = &self.simple_perm[s];
            if (0..nr).any(|r| perm[perm[r] as usize] as usize != r) {
                return false;
            }
            let flipped: Vec<usize> = (0..nr)
                .filter(|&r| self.positive[r] && !self.positive[perm[r] as usize])
                .collect();
            if flipped != vec![self.simple_idx[s] as usize] {
                return false;
            }
            if perm[self.simple_idx[s] as usize] != self.neg_of[self.simple_idx[s] as usize] {
                return false;
            }
        }
        true
    }

    pub fn diagram(&self) -> &CoxeterDiagram {
        &self.diagram
    }

    pub fn rank(&self) -> usize {
        self.diagram.rank()
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn root_count(&self) -> usize {
        self.comp_of_root.len()
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            img: self.simple_idx.clone().into_boxed_slice(),
            len: 0,
        }
    }

    /// `s` is a (right) descent of `w` iff `w(alpha_s)` is negative.
    pub fn is_descent(&self, w: &GroupElement, s: usize) -> bool {
        !self.positive[w.img[s] as usize]
    }

    pub fn descent_set(&self, w: &GroupElement) -> GenSet {
        GenSet::from_iter((0..self.rank()).filter(|&s| self.is_descent(w, s)))
    }

    /// Image of an arbitrary root under `w`, resolved through the stored
    /// simple images.
    fn apply_to_root(&self, w: &GroupElement, r: u16) -> u16 {
        let ci = self.comp_of_root[r as usize];
        match &self.models[ci] {
            Model::Ring {
                gens,
                coords,
                index,
                base,
                ..
            } => {
                let v = &coords[(r - base) as usize];
                let rank = gens.len();
                let mut acc = vec![ZERO; rank];
                for (j, &c) in v.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let img = &coords[(w.img[gens[j]] - base) as usize];
                    for (t, &x) in img.iter().enumerate() {
                        acc[t] += c * x;
                    }
                }
                base + index[&acc]
            }
            Model::Dihedral { m, base, g0, g1 } => {
                let m = *m as i64;
                let a = (w.img[*g0] - base) as i64;
                let b = (w.img[*g1] - base) as i64;
                let j = (r - base) as i64;
                let jj = if (b - a).rem_euclid(2 * m) == m - 1 {
                    (j + a).rem_euclid(2 * m)
                } else {
                    debug_assert_eq!((a - b).rem_euclid(2 * m), m - 1);
                    (a - j).rem_euclid(2 * m)
                };
                base + jj as u16
            }
        }
    }

    /// `w * s`. Length changes by +1 exactly when `s` is not a descent.
    pub fn right_mul(&self, w: &GroupElement, s: usize) -> GroupElement {
        let len = if self.is_descent(w, s) {
            w.len - 1
        } else {
            w.len + 1
        };
        let cs = self.comp_of_gen[s];
        let img = (0..self.rank())
            .map(|t| {
                if self.comp_of_gen[t] != cs {
                    w.img[t]
                } else {
                    let r = self.simple_perm[s][self.simple_idx[t] as usize];
                    self.apply_to_root(w, r)
                }
            })
            .collect();
        GroupElement { img, len }
    }

    /// `s * w`, with the caller supplying the new length.
    fn left_mul(&self, s: usize, w: &GroupElement, len: u32) -> GroupElement {
        let img = w
            .img
            .iter()
            .map(|&r| self.simple_perm[s][r as usize])
            .collect();
        GroupElement { img, len }
    }

    /// The unique maximal-length element of the coset `w W_I`, reached by
    /// greedily multiplying ascents from `I` on the right. Idempotent.
    pub fn max_length_rep(&self, w: &GroupElement, set: GenSet) -> GroupElement {
        let mut cur = w.clone();
        'outer: loop {
            for s in set.iter() {
                if !self.is_descent(&cur, s) {
                    cur = self.right_mul(&cur, s);
                    continue 'outer;
                }
            }
            return cur;
        }
    }

    /// Whether `w` is the maximal-length representative of `w W_I`.
    pub fn is_max_rep(&self, w: &GroupElement, set: GenSet) -> bool {
        set.iter().all(|s| self.is_descent(w, s))
    }

    /// The longest element `w_0`.
    pub fn longest_element(&self) -> GroupElement {
        self.max_length_rep(&self.identity(), GenSet::full(self.rank()))
    }

    /// Enumerate the whole group by breadth-first search over the Cayley
    /// graph; the BFS level is the length. Deterministic order.
    pub fn enumerate(&self, budget: u64) -> Result<Vec<GroupElement>> {
        if self.order > budget {
            return Err(Error::BudgetExceeded {
                order: self.order,
                budget,
            });
        }
        let n = self.rank();
        let mut seen: HashMap<Box<[u16]>, ()> = HashMap::with_capacity(self.order as usize * 2);
        let id = self.identity();
        seen.insert(id.img.clone(), ());
        let mut out = vec![id];
        let mut head = 0;
        while head < out.len() {
            let w = out[head].clone();
            head += 1;
            for s in 0..n {
                let next = self.left_mul(s, &w, w.len + 1);
                if !seen.contains_key(&next.img) {
                    seen.insert(next.img.clone(), ());
                    out.push(next);
                }
            }
        }
        debug_assert_eq!(out.len() as u64, self.order);
        Ok(out)
    }

    /// All elements of the coset `w W_I` (orbit of `w` under right
    /// multiplication by `I`).
    pub fn coset_elements(&self, w: &GroupElement, set: GenSet) -> Vec<GroupElement> {
        let mut seen: HashMap<Box<[u16]>, ()> = HashMap::new();
        seen.insert(w.img.clone(), ());
        let mut out = vec![w.clone()];
        let mut head = 0;
        while head < out.len() {
            let cur = out[head].clone();
            head += 1;
            for s in set.iter() {
                let next = self.right_mul(&cur, s);
                if !seen.contains_key(&next.img) {
                    seen.insert(next.img.clone(), ());
                    out.push(next);
                }
            }
        }
        out
    }

    /// `|W_I|` from the precomputed table.
    pub fn parabolic_order(&self, set: GenSet) -> u64 {
        self.parabolic_orders[set.0 as usize]
    }

    /// Number of elements with descent set exactly `J`, by inclusion-
    /// exclusion over coset counts; needs no enumeration.
    pub fn count_exact_descent(&self, j: GenSet) -> i128 {
        count_exact_descent(self.rank(), &self.parabolic_orders, self.order, j)
    }
}

/// Exact-descent-set count from a parabolic order table:
/// `#{w : Des(w) = J} = sum_{K >= J} (-1)^{|K \ J|} |W| / |W_K|`.
pub fn count_exact_descent(rank: usize, orders: &[u64], group_order: u64, j: GenSet) -> i128 {
    let rest = GenSet::full(rank).minus(j);
    let mut total = 0i128;
    for extra in rest.subsets() {
        let k = j.union(extra);
        let cosets = (group_order / orders[k.0 as usize]) as i128;
        if extra.len() % 2 == 0 {
            total += cosets;
        } else {
            total -= cosets;
        }
    }
    total
}

/// Orders of all `2^n` standard parabolic subgroups.
pub fn parabolic_order_table(diagram: &CoxeterDiagram) -> Result<Vec<u64>> {
    let n = diagram.rank();
    let mut table = vec![1u64; 1 << n];
    for mask in 1..(1u32 << n) {
        table[mask as usize] = diagram.parabolic_order(GenSet(mask))?;
    }
    Ok(table)
}

fn local_cartan(diagram: &CoxeterDiagram, gens: &[usize]) -> Vec<Vec<Phi>> {
    let rank = gens.len();
    let mut cartan = vec![vec![ZERO; rank]; rank];
    for i in 0..rank {
        cartan[i][i] = Phi::int(2);
        for j in 0..rank {
            if i == j {
                continue;
            }
            let m = diagram.bond(gens[i], gens[j]);
            cartan[i][j] = match m {
                2 => ZERO,
                3 => Phi::int(-1),
                // one short / one long root; orient by generator order
                4 => Phi::int(if gens[i] < gens[j] { -1 } else { -2 }),
                5 => -Phi::phi(),
                6 => Phi::int(if gens[i] < gens[j] { -1 } else { -3 }),
                _ => unreachable!("bond {m} inside a rank>2 component"),
            };
        }
    }
    cartan
}

/// `s_i(v) = v - (sum_j v_j c_ij) alpha_i` in local coordinates.
fn reflect(v: &[Phi], i: usize, cartan: &[Vec<Phi>]) -> Vec<Phi> {
    let mut c = ZERO;
    for (j, &x) in v.iter().enumerate() {
        if !x.is_zero() {
            c += x * cartan[i][j];
        }
    }
    let mut w = v.to_vec();
    w[i] -= c;
    w
}

type RootTable = (Vec<Vec<Phi>>, HashMap<Vec<Phi>, u16>);

/// Close the simple roots under the simple reflections.
fn close_roots(cartan: &[Vec<Phi>]) -> Result<RootTable> {
    let rank = cartan.len();
    let mut coords: Vec<Vec<Phi>> = Vec::new();
    let mut index: HashMap<Vec<Phi>, u16> = HashMap::new();
    for i in 0..rank {
        let mut v = vec![ZERO; rank];
        v[i] = ONE;
        index.insert(v.clone(), coords.len() as u16);
        coords.push(v);
    }
    let mut head = 0;
    while head < coords.len() {
        let v = coords[head].clone();
        head += 1;
        for i in 0..rank {
            let w = reflect(&v, i, cartan);
            if !index.contains_key(&w) {
                if coords.len() > 1 << 14 {
                    return Err(Error::InfiniteGroup(
                        "root closure does not terminate".into(),
                    ));
                }
                index.insert(w.clone(), coords.len() as u16);
                coords.push(w);
            }
        }
    }
    // every root is a uniformly signed combination of simple roots
    debug_assert!(coords.iter().all(|v| vec_sign(v) != 0));
    Ok((coords, index))
}

fn local_simple_index(coords: &[Vec<Phi>], li: usize) -> u16 {
    // simple roots were inserted first, in order
    debug_assert!(coords[li].iter().enumerate().all(|(j, c)| if j == li {
        *c == ONE
    } else {
        c.is_zero()
    }));
    li as u16
}

/// Sign of a root vector: sign of its first nonzero coordinate. Roots have
/// all coordinates of one sign.
fn vec_sign(v: &[Phi]) -> i32 {
    for c in v {
        let s = c.signum();
        if s != 0 {
            debug_assert!(v.iter().all(|x| x.signum() * s >= 0));
            return s;
        }
    }
    0
}

fn root_count(t: crate::diagram::IrreducibleType) -> usize {
    use crate::diagram::IrreducibleType::*;
    match t {
        A(n) => n * (n + 1),
        B(n) => 2 * n * n,
        D(n) => 2 * n * (n - 1),
        E(6) => 72,
        E(7) => 126,
        E(8) => 240,
        E(_) => unreachable!(),
        F4 => 48,
        H(2) => 10,
        H(3) => 30,
        H(4) => 120,
        H(_) => unreachable!(),
        I2(m) => 2 * m as usize,
    }
}
