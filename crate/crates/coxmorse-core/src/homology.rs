//! Integral homology: sparse Smith normal form, chain complexes, the
//! order-complex (barycentric subdivision) oracle, and Morse homology.
//!
//! Entries are arbitrary-precision integers. Elimination pivots on unit
//! entries first, which keeps fill and coefficient growth low on
//! incidence-like matrices; whatever survives is finished off by a dense
//! textbook reduction.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Sparse integer matrix in row-major form.
#[derive(Clone, Debug)]
pub struct SparseIntMatrix {
    pub nrows: usize,
    pub ncols: usize,
    rows: Vec<BTreeMap<usize, BigInt>>,
}

impl SparseIntMatrix {
    pub fn zero(nrows: usize, ncols: usize) -> Self {
        SparseIntMatrix {
            nrows,
            ncols,
            rows: vec![BTreeMap::new(); nrows],
        }
    }

    pub fn from_triplets<I>(nrows: usize, ncols: usize, items: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, i64)>,
    {
        let mut m = Self::zero(nrows, ncols);
        for (r, c, v) in items {
            assert!(r < nrows && c < ncols);
            let e = m.rows[r].entry(c).or_insert_with(BigInt::zero);
            *e += v;
            if e.is_zero() {
                m.rows[r].remove(&c);
            }
        }
        m
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn row(&self, r: usize) -> &BTreeMap<usize, BigInt> {
        &self.rows[r]
    }

    /// Invariant factors `d_1 | d_2 | ...` of the Smith normal form.
    pub fn smith_normal_form(&self) -> Vec<BigInt> {
        use std::cmp::Reverse;
        use std::collections::BinaryHeap;

        let mut rows = self.rows.clone();
        let mut col_rows: Vec<Vec<usize>> = vec![Vec::new(); self.ncols];
        for (r, row) in rows.iter().enumerate() {
            for &c in row.keys() {
                col_rows[c].push(r);
            }
        }

        // lazy Markowitz queue of unit-pivot candidates; entries are
        // validated on pop, so staleness is harmless
        let mut heap: BinaryHeap<Reverse<(usize, usize, usize)>> = BinaryHeap::new();
        let cost_of =
            |rows: &[BTreeMap<usize, BigInt>], col_rows: &[Vec<usize>], r: usize, c: usize| {
                (rows[r].len() - 1) * col_rows[c].len().saturating_sub(1)
            };
        for (r, row) in rows.iter().enumerate() {
            for (&c, v) in row {
                if v.magnitude().is_one() {
                    heap.push(Reverse((cost_of(&rows, &col_rows, r, c), r, c)));
                }
            }
        }

        let mut unit_pivots = 0usize;
        while let Some(Reverse((popped_cost, pr, pc))) = heap.pop() {
            let Some(v) = rows[pr].get(&pc) else { continue };
            if !v.magnitude().is_one() {
                continue;
            }
            let cost = cost_of(&rows, &col_rows, pr, pc);
            if cost > popped_cost {
                heap.push(Reverse((cost, pr, pc)));
                continue;
            }
            let pivot = v.clone(); // +-1
            let pivot_row = std::mem::take(&mut rows[pr]);
            let victims: Vec<usize> = std::mem::take(&mut col_rows[pc])
                .into_iter()
                .filter(|&r| r != pr)
                .collect();
            for r in victims {
                let Some(coef) = rows[r].get(&pc).cloned() else {
                    continue;
                };
                // factor = coef / pivot, and the pivot is a unit
                let factor = &coef * &pivot;
                for (&c, v) in &pivot_row {
                    let e = rows[r].entry(c).or_insert_with(BigInt::zero);
                    let was_zero = e.is_zero();
                    *e -= &factor * v;
                    if e.is_zero() {
                        rows[r].remove(&c);
                    } else {
                        if was_zero {
                            col_rows[c].push(r);
                        }
                        if rows[r][&c].magnitude().is_one() {
                            heap.push(Reverse((cost_of(&rows, &col_rows, r, c), r, c)));
                        }
                    }
                }
                debug_assert!(!rows[r].contains_key(&pc));
            }
            // clearing the pivot row afterwards is a column operation that
            // touches nothing else, so just drop it
            for &c in pivot_row.keys() {
                col_rows[c].retain(|&r| r != pr && rows[r].contains_key(&c));
            }
            unit_pivots += 1;
        }

        // dense remainder
        let live_rows: Vec<usize> = (0..self.nrows).filter(|&r| !rows[r].is_empty()).collect();
        let mut live_cols: Vec<usize> = live_rows
            .iter()
            .flat_map(|&r| rows[r].keys().copied())
            .collect();
        live_cols.sort_unstable();
        live_cols.dedup();
        let mut dense: Vec<Vec<BigInt>> = live_rows
            .iter()
            .map(|&r| {
                live_cols
                    .iter()
                    .map(|c| rows[r].get(c).cloned().unwrap_or_else(BigInt::zero))
                    .collect()
            })
            .collect();
        let rest = dense_snf(&mut dense);

        let mut factors = vec![BigInt::one(); unit_pivots];
        factors.extend(rest);
        factors
    }

    pub fn rank(&self) -> usize {
        self.smith_normal_form().len()
    }

    /// `self * other`, used for boundary-squared checks.
    pub fn multiply(&self, other: &SparseIntMatrix) -> SparseIntMatrix {
        assert_eq!(self.ncols, other.nrows);
        let mut out = SparseIntMatrix::zero(self.nrows, other.ncols);
        for r in 0..self.nrows {
            let mut acc: BTreeMap<usize, BigInt> = BTreeMap::new();
            for (&k, v) in &self.rows[r] {
                for (&c, w) in &other.rows[k] {
                    let e = acc.entry(c).or_insert_with(BigInt::zero);
                    *e += v * w;
                }
            }
            acc.retain(|_, v| !v.is_zero());
            out.rows[r] = acc;
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    /// Sparse triplet export: a `dims rows cols nnz` header then one
    /// `row col value` line per entry.
    pub fn export_triplets(&self) -> String {
        let mut out = format!("dims {} {} {}\n", self.nrows, self.ncols, self.nnz());
        for (r, row) in self.rows.iter().enumerate() {
            for (c, v) in row {
                out.push_str(&format!("{r} {c} {v}\n"));
            }
        }
        out
    }
}

/// Textbook Smith reduction on a dense block; returns the diagonal
/// (absolute values; the divisibility chain holds by construction).
#[allow(clippy::needless_range_loop)]
fn dense_snf(a: &mut [Vec<BigInt>]) -> Vec<BigInt> {
    let nr = a.len();
    let nc = if nr == 0 { 0 } else { a[0].len() };
    let mut out = Vec::new();
    let mut t = 0;
    while t < nr.min(nc) {
        let mut best: Option<(usize, usize)> = None;
        for i in t..nr {
            for j in t..nc {
                if !a[i][j].is_zero()
                    && best.is_none_or(|(bi, bj)| a[i][j].magnitude() < a[bi][bj].magnitude())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        for row in a.iter_mut() {
            row.swap(t, bj);
        }
        'reduce: loop {
            for i in t + 1..nr {
                if !a[i][t].is_zero() {
                    let q = &a[i][t] / &a[t][t];
                    if !q.is_zero() {
                        for j in t..nc {
                            let sub = &q * &a[t][j];
                            a[i][j] -= sub;
                        }
                    }
                    if !a[i][t].is_zero() {
                        a.swap(t, i);
                        continue 'reduce;
                    }
                }
            }
            for j in t + 1..nc {
                if !a[t][j].is_zero() {
                    let q = &a[t][j] / &a[t][t];
                    if !q.is_zero() {
                        for i in t..nr {
                            let sub = &q * &a[i][t];
                            a[i][j] -= sub;
                        }
                    }
                    if !a[t][j].is_zero() {
                        for row in a.iter_mut() {
                            row.swap(t, j);
                        }
                        continue 'reduce;
                    }
                }
            }
            // divisibility: fold an offending row into the pivot row
            for i in t + 1..nr {
                if a[i][t + 1..nc].iter().any(|x| !(x % &a[t][t]).is_zero()) {
                    for jj in t..nc {
                        let add = a[i][jj].clone();
                        a[t][jj] += add;
                    }
                    continue 'reduce;
                }
            }
            break;
        }
        out.push(a[t][t].abs());
        t += 1;
    }
    out
}

/// A chain complex of free abelian groups: `boundaries[d]` maps d-chains to
/// (d-1)-chains; `boundaries[0]` has zero rows.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    pub dims: Vec<usize>,
    pub boundaries: Vec<SparseIntMatrix>,
}

impl ChainComplex {
    pub fn top_dim(&self) -> usize {
        self.dims.len().saturating_sub(1)
    }

    pub fn euler_characteristic(&self) -> i128 {
        self.dims
            .iter()
            .enumerate()
            .map(|(d, &n)| if d % 2 == 0 { n as i128 } else { -(n as i128) })
            .sum()
    }

    pub fn verify_dd_zero(&self) -> Result<()> {
        for d in 1..self.boundaries.len() {
            if !self.boundaries[d - 1]
                .multiply(&self.boundaries[d])
                .is_zero()
            {
                return Err(Error::BoundaryConditionViolated(d));
            }
        }
        Ok(())
    }
}

/// Free ranks and torsion, one slot per dimension of the complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyResult {
    /// Unreduced Betti numbers.
    pub betti: Vec<u64>,
    /// Torsion coefficients (invariant factors > 1) per dimension.
    pub torsion: Vec<Vec<BigInt>>,
}

impl HomologyResult {
    /// Reduced Betti numbers of a nonempty complex: `betti` with the rank
    /// in dimension 0 lowered by one.
    pub fn reduced_betti(&self) -> Vec<u64> {
        let mut out = self.betti.clone();
        if !out.is_empty() {
            out[0] -= 1;
        }
        out
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion.iter().all(|t| t.is_empty())
    }

    /// Reduced rank in `dim`, 0 beyond the top dimension.
    pub fn reduced_rank(&self, dim: usize) -> u64 {
        *self.reduced_betti().get(dim).unwrap_or(&0)
    }
}

/// Homology of a verified chain complex: `beta_d = nullity(d_d) -
/// rank(d_{d+1})`, torsion from the invariant factors of `d_{d+1}`.
pub fn integral_homology(c: &ChainComplex) -> Result<HomologyResult> {
    c.verify_dd_zero()?;
    let top = c.dims.len();
    let mut snfs: Vec<Vec<BigInt>> = Vec::with_capacity(top);
    for d in 0..top {
        snfs.push(c.boundaries[d].smith_normal_form());
    }
    let mut betti = Vec::with_capacity(top);
    let mut torsion = Vec::with_capacity(top);
    for d in 0..top {
        let rank_d = snfs[d].len();
        let rank_up = if d + 1 < top { snfs[d + 1].len() } else { 0 };
        betti.push((c.dims[d] - rank_d - rank_up) as u64);
        let tors = if d + 1 < top {
            snfs[d + 1]
                .iter()
                .filter(|f| !f.magnitude().is_one())
                .cloned()
                .collect()
        } else {
            Vec::new()
        };
        torsion.push(tors);
    }
    Ok(HomologyResult { betti, torsion })
}

/// Chain complex of an abstract simplicial complex given by its faces as
/// vertex bitsets (the empty face is ignored). Orientation: vertices in
/// increasing order, boundary signs alternate by position.
pub fn simplicial_chain_complex(faces: &[u64]) -> ChainComplex {
    let top = faces
        .iter()
        .map(|f| f.count_ones() as usize)
        .max()
        .unwrap_or(0);
    if top == 0 {
        return ChainComplex {
            dims: vec![],
            boundaries: vec![],
        };
    }
    let mut by_dim: Vec<Vec<u64>> = vec![Vec::new(); top];
    for &f in faces {
        if f != 0 {
            by_dim[f.count_ones() as usize - 1].push(f);
        }
    }
    for list in &mut by_dim {
        list.sort_unstable();
        list.dedup();
    }
    let index: Vec<HashMap<u64, usize>> = by_dim
        .iter()
        .map(|list| list.iter().enumerate().map(|(i, &f)| (f, i)).collect())
        .collect();

    let dims: Vec<usize> = by_dim.iter().map(|l| l.len()).collect();
    let mut boundaries = vec![SparseIntMatrix::zero(0, dims[0])];
    for d in 1..top {
        let mut triplets = Vec::new();
        for (ci, &f) in by_dim[d].iter().enumerate() {
            for (pos, v) in crate::ind_complex::iter_bits(f).enumerate() {
                let sub = f & !(1 << v);
                let ri = index[d - 1][&sub];
                triplets.push((ri, ci, if pos % 2 == 0 { 1 } else { -1 }));
            }
        }
        boundaries.push(SparseIntMatrix::from_triplets(
            dims[d - 1],
            dims[d],
            triplets,
        ));
    }
    ChainComplex { dims, boundaries }
}

/// The face poset of a regular CW complex: cell dimensions plus, for every
/// cell, the list of all its proper faces (transitively closed).
#[derive(Clone, Debug)]
pub struct FacePoset {
    pub dim: Vec<usize>,
    pub faces_below: Vec<Vec<usize>>,
}

/// Barycentric subdivision: simplices are strictly increasing chains of
/// cells, so the result is simplicial and homeomorphic to the original
/// regular CW complex; boundary signs alternate by chain position.
pub fn order_complex(poset: &FacePoset) -> ChainComplex {
    let n = poset.dim.len();
    let mut chains_at: Vec<Vec<Vec<usize>>> = vec![Vec::new(); n];
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&c| poset.dim[c]);
    for &c in &order {
        let mut mine = vec![vec![c]];
        for &f in &poset.faces_below[c] {
            for ch in &chains_at[f] {
                let mut ext = ch.clone();
                ext.push(c);
                mine.push(ext);
            }
        }
        chains_at[c] = mine;
    }
    let top = chains_at
        .iter()
        .flat_map(|l| l.iter().map(|ch| ch.len()))
        .max()
        .unwrap_or(0);
    let mut by_dim: Vec<Vec<Vec<usize>>> = vec![Vec::new(); top];
    for list in chains_at {
        for ch in list {
            by_dim[ch.len() - 1].push(ch);
        }
    }
    for list in &mut by_dim {
        list.sort_unstable();
    }
    let index: Vec<HashMap<&[usize], usize>> = by_dim
        .iter()
        .map(|list| {
            list.iter()
                .enumerate()
                .map(|(i, ch)| (ch.as_slice(), i))
                .collect()
        })
        .collect();
    let dims: Vec<usize> = by_dim.iter().map(|l| l.len()).collect();
    let mut boundaries = vec![SparseIntMatrix::zero(0, dims[0])];
    for d in 1..top {
        let mut triplets = Vec::new();
        for (ci, ch) in by_dim[d].iter().enumerate() {
            for drop in 0..ch.len() {
                let mut sub = ch.clone();
                sub.remove(drop);
                let ri = index[d - 1][sub.as_slice()];
                triplets.push((ri, ci, if drop % 2 == 0 { 1 } else { -1 }));
            }
        }
        boundaries.push(SparseIntMatrix::from_triplets(
            dims[d - 1],
            dims[d],
            triplets,
        ));
    }
    ChainComplex { dims, boundaries }
}

/// Homology of a Morse complex: with no boundary data the chain groups are
/// already the homology (`H_i = Z^{c_i}`); otherwise run the full integral
/// computation on the provided boundary matrices.
pub fn morse_homology(
    critical_counts: &[usize],
    boundaries: Option<Vec<SparseIntMatrix>>,
) -> Result<HomologyResult> {
    match boundaries {
        None => Ok(HomologyResult {
            betti: critical_counts.iter().map(|&c| c as u64).collect(),
            torsion: vec![Vec::new(); critical_counts.len()],
        }),
        Some(bnd) => integral_homology(&ChainComplex {
            dims: critical_counts.to_vec(),
            boundaries: bnd,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn snf_i64(m: &SparseIntMatrix) -> Vec<i64> {
        m.smith_normal_form()
            .iter()
            .map(|f| i64::try_from(f).unwrap())
            .collect()
    }

    #[test]
    fn snf_basics() {
        let m = SparseIntMatrix::from_triplets(1, 1, [(0, 0, 2)]);
        assert_eq!(snf_i64(&m), vec![2]);

        let id3 = SparseIntMatrix::from_triplets(3, 3, [(0, 0, 1), (1, 1, 1), (2, 2, 1)]);
        assert_eq!(snf_i64(&id3), vec![1, 1, 1]);

        let m = SparseIntMatrix::from_triplets(2, 2, [(0, 0, 2), (0, 1, 4), (1, 0, 6), (1, 1, 8)]);
        assert_eq!(snf_i64(&m), vec![2, 4]);
    }

    #[test]
    fn snf_divisibility_chain() {
        let m = SparseIntMatrix::from_triplets(
            3,
            3,
            [(0, 0, 2), (1, 1, 6), (2, 2, 10), (0, 1, 4), (1, 2, 2)],
        );
        let f = m.smith_normal_form();
        for w in f.windows(2) {
            assert!((&w[1] % &w[0]).is_zero(), "chain broken: {f:?}");
        }
    }

    #[test]
    fn point_homology() {
        let c = simplicial_chain_complex(&[0b1]);
        let h = integral_homology(&c).unwrap();
        assert_eq!(h.betti, vec![1]);
        assert_eq!(h.reduced_betti(), vec![0]);
    }

    #[test]
    fn circle_homology() {
        // boundary of a triangle
        let faces = [0b011u64, 0b101, 0b110, 0b001, 0b010, 0b100];
        let c = simplicial_chain_complex(&faces);
        let h = integral_homology(&c).unwrap();
        assert_eq!(h.reduced_betti(), vec![0, 1]);
        assert!(h.is_torsion_free());
    }

    #[test]
    fn two_sphere_homology() {
        // boundary of a tetrahedron: all proper nonempty subsets of {0,1,2,3}
        let faces: Vec<u64> = (1u64..15).collect();
        let c = simplicial_chain_complex(&faces);
        let h = integral_homology(&c).unwrap();
        assert_eq!(h.reduced_betti(), vec![0, 0, 1]);
    }

    #[test]
    fn projective_plane_torsion() {
        // antipodal quotient of the icosahedron, 6 vertices and 10 triangles
        let tris: [[usize; 3]; 10] = [
            [0, 1, 3],
            [0, 1, 4],
            [0, 2, 3],
            [0, 2, 5],
            [0, 4, 5],
            [1, 2, 4],
            [1, 2, 5],
            [1, 3, 5],
            [2, 3, 4],
            [3, 4, 5],
        ];
        let mut faces = Vec::new();
        for t in tris {
            let f = (1u64 << t[0]) | (1u64 << t[1]) | (1u64 << t[2]);
            faces.push(f);
            for v in t {
                faces.push(f & !(1 << v));
                faces.push(1 << v);
            }
        }
        let c = simplicial_chain_complex(&faces);
        let h = integral_homology(&c).unwrap();
        assert_eq!(h.reduced_betti(), vec![0, 0, 0]);
        assert_eq!(h.torsion[1].len(), 1);
        assert_eq!(i64::try_from(&h.torsion[1][0]).unwrap(), 2);
    }

    #[test]
    fn order_complex_of_an_edge_is_contractible() {
        // one edge with two vertices: subdivision is a path of 2 edges
        let poset = FacePoset {
            dim: vec![0, 0, 1],
            faces_below: vec![vec![], vec![], vec![0, 1]],
        };
        let c = order_complex(&poset);
        assert_eq!(c.dims, vec![3, 2]);
        let h = integral_homology(&c).unwrap();
        assert_eq!(h.reduced_betti(), vec![0, 0]);
    }

    #[test]
    fn order_complex_of_square_boundary_is_circle() {
        // 4 vertices, 4 edges in a cycle
        let poset = FacePoset {
            dim: vec![0, 0, 0, 0, 1, 1, 1, 1],
            faces_below: vec![
                vec![],
                vec![],
                vec![],
                vec![],
                vec![0, 1],
                vec![1, 2],
                vec![2, 3],
                vec![3, 0],
            ],
        };
        let c = order_complex(&poset);
        let h = integral_homology(&c).unwrap();
        assert_eq!(h.reduced_betti(), vec![0, 1]);
        assert!(h.is_torsion_free());
    }

    #[test]
    fn nine_vertex_ind3_is_wedge_of_two_spheres() {
        let g = crate::ind_complex::OrderedGraph::new(
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
        .unwrap();
        let c = simplicial_chain_complex(&g.faces(3));
        let h = integral_homology(&c).unwrap();
        assert_eq!(h.reduced_betti(), vec![0, 0, 1, 0, 0, 1, 0]);
        assert!(h.is_torsion_free());
    }
}
