//! The regular CW face poset of `Perm_k(W)`.
//!
//! Cells are parabolic cosets `w W_I` stored by their maximal-length
//! representative, with `I` admissible: every component of `D[I]` has at
//! most `k-2` vertices, i.e. no sub-coset is k-parabolic. Cover relations
//! are codimension-one containments; for `k = 3` every cell is a cube and
//! carries standard cubical incidence signs.

use std::collections::HashMap;

use crate::coxeter::{CoxeterSystem, GroupElement};
use crate::diagram::{CoxeterDiagram, GenSet};
use crate::error::{Error, Result};
use crate::homology::FacePoset;

/// One cell: maximal-length coset representative plus generator subset.
#[derive(Clone, Debug)]
pub struct Cell {
    pub rep: GroupElement,
    pub gens: GenSet,
}

impl Cell {
    pub fn dim(&self) -> usize {
        self.gens.len()
    }

    pub fn key_string(&self) -> String {
        format!("{}|{}", self.rep.key_string(), self.gens.0)
    }
}

/// Cell counts per dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FVector(pub Vec<u64>);

impl FVector {
    /// `-1 + sum (-1)^i f_i`.
    pub fn reduced_euler(&self) -> i128 {
        reduced_euler(&self.0)
    }
}

pub fn reduced_euler(f: &[u64]) -> i128 {
    let mut total: i128 = -1;
    for (i, &fi) in f.iter().enumerate() {
        if i % 2 == 0 {
            total += fi as i128;
        } else {
            total -= fi as i128;
        }
    }
    total
}

impl std::fmt::Display for FVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "({})",
            self.0
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        )
    }
}

/// The built complex. Cells are indexed flat; `by_dim` groups ids by
/// dimension and `covers` lists the distinct codim-1 faces of each cell.
pub struct PermComplex<'a> {
    pub sys: &'a CoxeterSystem,
    pub k: usize,
    cells: Vec<Cell>,
    by_dim: Vec<Vec<usize>>,
    index: HashMap<(Box<[u16]>, GenSet), usize>,
    covers: Vec<Vec<usize>>,
}

/// Check preconditions shared by complex construction and matching:
/// `2 <= k <= rank`, and some component big enough that the arrangement is
/// nonempty.
pub fn check_k(diagram: &CoxeterDiagram, k: usize) -> Result<()> {
    if k < 2 || k > diagram.rank() {
        return Err(Error::OutOfRange(format!(
            "k = {k} must satisfy 2 <= k <= rank = {}",
            diagram.rank()
        )));
    }
    if !diagram.components().iter().any(|c| c.len() >= k - 1) {
        return Err(Error::EmptyArrangement { k });
    }
    Ok(())
}

impl<'a> PermComplex<'a> {
    /// Build the full face poset: one cell per pair (max-length rep `w`,
    /// admissible `I` contained in `Des(w)`), plus cover relations.
    pub fn build(sys: &'a CoxeterSystem, k: usize, budget: u64) -> Result<Self> {
        check_k(sys.diagram(), k)?;
        let n = sys.rank();
        let admissible = admissibility_table(sys.diagram(), k);
        let elements = sys.enumerate(budget)?;

        let mut cells = Vec::new();
        let mut by_dim: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
        let mut index = HashMap::new();
        for w in &elements {
            let des = sys.descent_set(w);
            for i_set in des.subsets() {
                if !admissible[i_set.0 as usize] {
                    continue;
                }
                let id = cells.len();
                by_dim[i_set.len()].push(id);
                index.insert((w.key().to_vec().into_boxed_slice(), i_set), id);
                cells.push(Cell {
                    rep: w.clone(),
                    gens: i_set,
                });
            }
        }
        while by_dim.last().is_some_and(|v| v.is_empty()) {
            by_dim.pop();
        }

        // cover relations: for each direction s, the maximal-length
        // representatives of the W_{I-s}-cosets inside w W_I
        let mut covers = vec![Vec::new(); cells.len()];
        for id in 0..cells.len() {
            let (rep, gens) = (cells[id].rep.clone(), cells[id].gens);
            if gens.is_empty() {
                continue;
            }
            let coset = sys.coset_elements(&rep, gens);
            for s in gens.iter() {
                let sub = gens.remove(s);
                let mut seen: Vec<usize> = Vec::new();
                for x in &coset {
                    let facet_rep = sys.max_length_rep(x, sub);
                    let fid = index[&(facet_rep.key().to_vec().into_boxed_slice(), sub)];
                    if !seen.contains(&fid) {
                        seen.push(fid);
                    }
                }
                covers[id].extend(seen);
            }
            covers[id].sort_unstable();
        }

        Ok(PermComplex {
            sys,
            k,
            cells,
            by_dim,
            index,
            covers,
        })
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    pub fn cell(&self, id: usize) -> &Cell {
        &self.cells[id]
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn by_dim(&self) -> &[Vec<usize>] {
        &self.by_dim
    }

    pub fn top_dim(&self) -> usize {
        self.by_dim.len().saturating_sub(1)
    }

    pub fn covers_of(&self, id: usize) -> &[usize] {
        &self.covers[id]
    }

    pub fn find(&self, rep: &GroupElement, gens: GenSet) -> Option<usize> {
        self.index
            .get(&(rep.key().to_vec().into_boxed_slice(), gens))
            .copied()
    }

    pub fn fvector(&self) -> FVector {
        FVector(self.by_dim.iter().map(|v| v.len() as u64).collect())
    }

    /// Incidence sign of a codim-1 face when `k = 3` (cubes): removing `s`
    /// from `w W_I` leaves the parallel pair `w W_{I-s}` (sign
    /// `(-1)^{#{r in I : r < s}}`) and `ws W_{I-s}` (opposite sign).
    pub fn cubical_incidence(&self, upper: usize, lower: usize) -> Result<i64> {
        if self.k != 3 {
            return Err(Error::NotCubical(self.k));
        }
        let up = &self.cells[upper];
        let low = &self.cells[lower];
        if low.gens.len() + 1 != up.gens.len() || !low.gens.is_subset(up.gens) {
            return Err(Error::DimensionMismatch {
                expected: up.gens.len().saturating_sub(1),
                got: low.gens.len(),
            });
        }
        let s = up.gens.minus(low.gens).min().unwrap();
        let sign = if up.gens.iter().take_while(|&r| r < s).count() % 2 == 0 {
            1
        } else {
            -1
        };
        if low.rep == up.rep {
            Ok(sign)
        } else {
            debug_assert_eq!(low.rep, self.sys.right_mul(&up.rep, s));
            Ok(-sign)
        }
    }

    /// All codim-1 faces of a cell with their cubical signs (`k = 3`).
    pub fn facets_signed(&self, id: usize) -> Result<Vec<(usize, i64)>> {
        if self.k != 3 {
            return Err(Error::NotCubical(self.k));
        }
        let cell = &self.cells[id];
        let mut out = Vec::with_capacity(2 * cell.gens.len());
        for s in cell.gens.iter() {
            let sub = cell.gens.remove(s);
            let sign = if cell.gens.iter().take_while(|&r| r < s).count() % 2 == 0 {
                1
            } else {
                -1
            };
            let same = self.find(&cell.rep, sub).expect("facet in complex");
            let other_rep = self.sys.right_mul(&cell.rep, s);
            let other = self.find(&other_rep, sub).expect("facet in complex");
            out.push((same, sign));
            out.push((other, -sign));
        }
        Ok(out)
    }

    /// Boundary matrices with cubical signs (`k = 3` only).
    pub fn cubical_chain_complex(&self) -> Result<crate::homology::ChainComplex> {
        use crate::homology::SparseIntMatrix;
        let dims: Vec<usize> = self.by_dim.iter().map(|v| v.len()).collect();
        let pos: HashMap<usize, usize> = self
            .by_dim
            .iter()
            .flat_map(|v| v.iter().enumerate().map(|(i, &id)| (id, i)))
            .collect();
        let mut boundaries = vec![SparseIntMatrix::zero(0, dims[0])];
        for d in 1..dims.len() {
            let mut triplets = Vec::new();
            for (ci, &id) in self.by_dim[d].iter().enumerate() {
                for (fid, sign) in self.facets_signed(id)? {
                    triplets.push((pos[&fid], ci, sign));
                }
            }
            boundaries.push(SparseIntMatrix::from_triplets(
                dims[d - 1],
                dims[d],
                triplets,
            ));
        }
        Ok(crate::homology::ChainComplex { dims, boundaries })
    }

    /// Transitively closed face lists, shaped for [`FacePoset`].
    pub fn face_poset(&self) -> FacePoset {
        let n = self.cells.len();
        let mut faces_below: Vec<Vec<usize>> = vec![Vec::new(); n];
        for d in 1..self.by_dim.len() {
            for &id in &self.by_dim[d] {
                let mut acc: Vec<usize> = Vec::new();
                for &f in &self.covers[id] {
                    acc.push(f);
                    acc.extend(faces_below[f].iter().copied());
                }
                acc.sort_unstable();
                acc.dedup();
                faces_below[id] = acc;
            }
        }
        FacePoset {
            dim: self.cells.iter().map(|c| c.dim()).collect(),
            faces_below,
        }
    }

    /// Regular CW sanity: every 1-cell has exactly two vertices, and every
    /// length-2 interval of the face poset is a diamond.
    pub fn check_diamond_property(&self) -> bool {
        for d in 1..self.by_dim.len() {
            for &id in &self.by_dim[d] {
                if d == 1 && self.covers[id].len() != 2 {
                    return false;
                }
                let mut counts: HashMap<usize, usize> = HashMap::new();
                for &mid in &self.covers[id] {
                    for &low in &self.covers[mid] {
                        *counts.entry(low).or_insert(0) += 1;
                    }
                }
                if counts.values().any(|&c| c != 2) {
                    return false;
                }
            }
        }
        true
    }

    /// JSON-lines face poset export: `{dim, key, covers: [keys]}`.
    pub fn export_poset_jsonl(&self) -> String {
        let mut out = String::new();
        for cell_id in 0..self.cells.len() {
            let covers: Vec<String> = self.covers[cell_id]
                .iter()
                .map(|&f| self.cells[f].key_string())
                .collect();
            let line = serde_json::json!({
                "dim": self.cells[cell_id].dim(),
                "key": self.cells[cell_id].key_string(),
                "covers": covers,
            });
            out.push_str(&line.to_string());
            out.push('\n');
        }
        out
    }
}

/// Admissibility of every generator subset, as a lookup table.
pub fn admissibility_table(diagram: &CoxeterDiagram, k: usize) -> Vec<bool> {
    let n = diagram.rank();
    (0u32..1 << n)
        .map(|mask| diagram.admissible(GenSet(mask), k))
        .collect()
}

/// f-vector by coset counting, no enumeration:
/// `f_i = sum over admissible |I| = i of |W| / |W_I|`.
pub fn fvector_formula(diagram: &CoxeterDiagram, k: usize) -> Result<FVector> {
    check_k(diagram, k)?;
    let n = diagram.rank();
    let orders = crate::coxeter::parabolic_order_table(diagram)?;
    let group_order = diagram.group_order();
    let mut f = vec![0u64; n];
    let mut top = 0;
    for mask in 0u32..1 << n {
        let set = GenSet(mask);
        if diagram.admissible(set, k) {
            let i = set.len();
            f[i] += group_order / orders[mask as usize];
            top = top.max(i);
        }
    }
    f.truncate(top + 1);
    Ok(FVector(f))
}
