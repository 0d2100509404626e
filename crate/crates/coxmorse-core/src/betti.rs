//! Betti numbers of the arrangement complement, by several routes.
//!
//! * Closed forms for the classical families (type A; the printed type B
//!   and type D `k = 3` formulas, which run in verify-and-flag mode).
//! * The descent-counting method: summing exact-descent-class sizes over
//!   admissible component sets, by inclusion-exclusion over parabolic
//!   coset counts. Needs no group enumeration, so it reaches E7 and E8.
//! * Euler-characteristic completion from the coset-counting f-vector.
//!
//! Entries are reported unreduced: dimension 0 carries the single critical
//! vertex, and each `t >= 1` contributes at dimension `t(k-2)`.

use std::collections::BTreeMap;

use crate::coxeter::{count_exact_descent, parabolic_order_table};
use crate::diagram::{CoxeterDiagram, GenSet};
use crate::error::{Error, Result};
use crate::morse::critical_predicate;
use crate::perm_complex::fvector_formula;

/// A computed Betti table for one `(W, k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiTable {
    pub group: String,
    pub k: usize,
    pub method: String,
    /// dimension -> unreduced rank; dimension 0 is always 1
    pub entries: BTreeMap<usize, i128>,
    pub flags: Vec<String>,
}

impl BettiTable {
    pub fn to_json(&self) -> serde_json::Value {
        let entries: serde_json::Map<String, serde_json::Value> = self
            .entries
            .iter()
            .map(|(d, r)| (d.to_string(), serde_json::Value::String(r.to_string())))
            .collect();
        serde_json::json!({
            "group": self.group,
            "k": self.k,
            "method": self.method,
            "entries": entries,
            "flags": self.flags,
        })
    }

    /// Reduced rank at a positive dimension (dimension 0 is the reduced
    /// rank 0 slot in this convention).
    pub fn rank(&self, dim: usize) -> i128 {
        *self.entries.get(&dim).unwrap_or(&0)
    }
}

fn factorial(n: usize) -> i128 {
    (1..=n as i128).product()
}

fn binom(n: i128, k: i128) -> i128 {
    if k < 0 || k > n {
        return 0;
    }
    let mut out = 1i128;
    for i in 0..k {
        out = out * (n - i) / (i + 1);
    }
    out
}

fn multinomial(n: usize, parts: &[usize]) -> i128 {
    debug_assert_eq!(parts.iter().sum::<usize>(), n);
    let mut out = factorial(n);
    for &p in parts {
        out /= factorial(p);
    }
    out
}

/// Weak compositions of `total` into `len` parts with per-part minimums
/// decided by `min_of(index)`.
fn compositions(total: usize, len: usize, min_of: &dyn Fn(usize) -> usize) -> Vec<Vec<usize>> {
    fn rec(
        idx: usize,
        len: usize,
        remaining: usize,
        min_of: &dyn Fn(usize) -> usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if idx == len {
            if remaining == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let lo = min_of(idx);
        if lo > remaining {
            return;
        }
        for part in lo..=remaining {
            cur.push(part);
            rec(idx + 1, len, remaining - part, min_of, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, len, total, min_of, &mut Vec::new(), &mut out);
    out
}

fn check_kn(n: usize, k: usize) -> Result<()> {
    if k < 3 || k > n {
        return Err(Error::OutOfRange(format!(
            "need 3 <= k <= n, got k = {k}, n = {n}"
        )));
    }
    Ok(())
}

/// Type A rank in dimension `t(k-2)`:
/// `sum over mu |= n+1, l(mu) = t+1, mu_m >= k for m <= t` of
/// `C(n+1; mu) prod_{m<=t} C(mu_m - 1, k - 1)`.
pub fn betti_type_a(n: usize, k: usize, t: usize) -> Result<i128> {
    check_kn(n, k)?;
    if t == 0 {
        return Ok(1);
    }
    let mut total = 0i128;
    for mu in compositions(n + 1, t + 1, &|m| if m < t { k } else { 0 }) {
        let mut term = multinomial(n + 1, &mu);
        for &part in &mu[..t] {
            term *= binom(part as i128 - 1, k as i128 - 1);
        }
        total += term;
    }
    Ok(total)
}

/// The printed type B rank formula, evaluated verbatim.
pub fn betti_type_b(n: usize, k: usize, t: usize) -> Result<i128> {
    check_kn(n, k)?;
    if t == 0 {
        return Ok(1);
    }
    let mut total = 0i128;
    for mu in compositions(n, t + 1, &|m| if m < t { k } else { 0 }) {
        let mut term = multinomial(n, &mu) * (1i128 << (n - mu[0] + k - 1));
        for &part in &mu[..t] {
            term *= binom(part as i128 - 1, k as i128 - 1);
        }
        total += term;
    }
    for mu in compositions(n, t + 1, &|m| match m {
        0 => k - 1,
        m if m < t => k,
        _ => 0,
    }) {
        if mu[0] != k - 1 {
            continue;
        }
        let mut term = multinomial(n, &mu) * (1i128 << (n - k + 1));
        for &part in &mu[1..t] {
            term *= binom(part as i128 - 1, k as i128 - 1);
        }
        total += term;
    }
    Ok(total)
}

/// The printed type D rank formula for `k = 3`, evaluated verbatim.
pub fn betti_type_d3(n: usize, t: usize) -> Result<i128> {
    if n < 4 {
        return Err(Error::OutOfRange(format!("type D needs n >= 4, got {n}")));
    }
    if t == 0 {
        return Ok(1);
    }
    let mut total = 0i128;
    for mu in compositions(n, t + 1, &|m| match m {
        0 => 4,
        m if m < t => 3,
        _ => 0,
    }) {
        let mut term = multinomial(n, &mu) * (1i128 << (n - mu[0] + 2));
        for &part in &mu[..t] {
            term *= binom(part as i128 - 1, 2);
        }
        total += term;
    }
    for mu in compositions(n, t + 1, &|m| match m {
        0 => 3,
        m if m < t => 3,
        _ => 0,
    }) {
        if mu[0] != 3 {
            continue;
        }
        let mut term = multinomial(n, &mu) * 7 * (1i128 << (n - 3));
        for &part in &mu[1..t] {
            term *= binom(part as i128 - 1, 2);
        }
        total += term;
    }
    Ok(total)
}

/// All component sets `T` with `t` components of size `k-2`.
fn component_sets(diagram: &CoxeterDiagram, k: usize, t: usize) -> Vec<GenSet> {
    let n = diagram.rank();
    let size = t * (k - 2);
    if size > n {
        return Vec::new();
    }
    (0u32..1 << n)
        .map(GenSet)
        .filter(|&s| {
            s.len() == size && {
                let comps = diagram.induced_components(s);
                comps.len() == t && comps.iter().all(|c| c.len() == k - 2)
            }
        })
        .collect()
}

/// Rank in dimension `t(k-2)` by descent counting: over all admissible
/// `T` and all descent sets `J` making `(w, T)` critical, add the number
/// of elements with descent set exactly `J` (inclusion-exclusion over
/// parabolic coset counts; no enumeration).
pub fn betti_descent_count(diagram: &CoxeterDiagram, k: usize, t: usize) -> Result<i128> {
    check_kn(diagram.rank(), k)?;
    let orders = parabolic_order_table(diagram)?;
    Ok(descent_count_with(diagram, &orders, k, t))
}

fn descent_count_with(diagram: &CoxeterDiagram, orders: &[u64], k: usize, t: usize) -> i128 {
    let n = diagram.rank();
    let group_order = diagram.group_order();
    let mut total = 0i128;
    for t_set in component_sets(diagram, k, t) {
        // descents outside T are confined to neighbors of the components
        let mut allowed = GenSet::EMPTY;
        for v in t_set.iter() {
            allowed = allowed.union(diagram.neighbors(v));
        }
        let allowed = allowed.minus(t_set);
        for extra in allowed.subsets() {
            let des = t_set.union(extra);
            if critical_predicate(diagram, des, t_set, k) {
                total += count_exact_descent(n, orders, group_order, des);
            }
        }
    }
    total
}

/// Dimensions `t(k-2)` that can carry rank: `t = 0` always, plus each `t`
/// admitting a component set with nonempty earlier private neighborhoods.
pub fn nonzero_dims(diagram: &CoxeterDiagram, k: usize) -> Vec<(usize, usize)> {
    let n = diagram.rank();
    let mut out = vec![(0, 0)];
    for t in 1..=n / (k - 2).max(1) {
        let any = component_sets(diagram, k, t).into_iter().any(|t_set| {
            let mut allowed = GenSet::EMPTY;
            for v in t_set.iter() {
                allowed = allowed.union(diagram.neighbors(v));
            }
            let allowed = allowed.minus(t_set);
            allowed
                .subsets()
                .any(|extra| critical_predicate(diagram, t_set.union(extra), t_set, k))
        });
        if any {
            out.push((t, t * (k - 2)));
        }
    }
    out
}

/// Full descent-method table.
pub fn descent_table(diagram: &CoxeterDiagram, label: &str, k: usize) -> Result<BettiTable> {
    check_kn(diagram.rank(), k)?;
    let orders = parabolic_order_table(diagram)?;
    let mut entries = BTreeMap::new();
    for (t, dim) in nonzero_dims(diagram, k) {
        let rank = if t == 0 {
            1
        } else {
            descent_count_with(diagram, &orders, k, t)
        };
        entries.insert(dim, rank);
    }
    Ok(BettiTable {
        group: label.to_string(),
        k,
        method: "descent".into(),
        entries,
        flags: Vec::new(),
    })
}

/// The reduced Euler characteristic identity for a table:
/// `sum_{d>0} (-1)^d beta_d = -1 + sum (-1)^i f_i`.
pub fn euler_identity_holds(
    diagram: &CoxeterDiagram,
    k: usize,
    table: &BettiTable,
) -> Result<bool> {
    let chi = fvector_formula(diagram, k)?.reduced_euler();
    let mut sum = 0i128;
    for (&d, &r) in &table.entries {
        if d == 0 {
            continue;
        }
        if d % 2 == 0 {
            sum += r;
        } else {
            sum -= r;
        }
    }
    Ok(sum == chi)
}

/// Fill at most one unknown rank from the reduced Euler characteristic of
/// the coset-counting f-vector; `known` maps positive dimensions to ranks.
pub fn betti_from_euler(
    diagram: &CoxeterDiagram,
    label: &str,
    k: usize,
    known: &BTreeMap<usize, i128>,
) -> Result<BettiTable> {
    check_kn(diagram.rank(), k)?;
    let chi = fvector_formula(diagram, k)?.reduced_euler();
    let dims = nonzero_dims(diagram, k);
    let mut entries = BTreeMap::new();
    entries.insert(0, 1);
    let mut unknown: Vec<usize> = Vec::new();
    let mut partial = 0i128;
    for &(t, dim) in &dims {
        if t == 0 {
            continue;
        }
        match known.get(&dim) {
            Some(&r) => {
                entries.insert(dim, r);
                partial += if dim % 2 == 0 { r } else { -r };
            }
            None => unknown.push(dim),
        }
    }
    let mut flags = Vec::new();
    match unknown.as_slice() {
        [] => {
            if partial != chi {
                flags.push(format!(
                    "euler identity violated: alternating sum {partial} != chi {chi}"
                ));
            }
        }
        [dim] => {
            let need = chi - partial;
            let rank = if dim % 2 == 0 { need } else { -need };
            if rank < 0 {
                flags.push(format!("negative rank {rank} inferred at dimension {dim}"));
            }
            entries.insert(*dim, rank);
        }
        more => {
            return Err(Error::Underdetermined {
                unknown: more.len(),
            })
        }
    }
    Ok(BettiTable {
        group: label.to_string(),
        k,
        method: "euler".into(),
        entries,
        flags,
    })
}

// ---------------------------------------------------------------------------
// golden data: nonzero ranks of the exceptional groups
// ---------------------------------------------------------------------------

/// One printed row: group, k, dimension, rank, plus a scrutiny note for
/// rows under suspicion.
#[derive(Clone, Copy, Debug)]
pub struct GoldenRow {
    pub group: &'static str,
    pub k: usize,
    pub dim: usize,
    pub rank: i128,
    pub note: Option<&'static str>,
}

pub const EXCEPTIONAL_RANKS: &[GoldenRow] = &[
    GoldenRow { group: "H3", k: 3, dim: 1, rank: 31, note: None },
    GoldenRow { group: "H4", k: 3, dim: 1, rank: 3601, note: None },
    GoldenRow { group: "H4", k: 4, dim: 2, rank: 719, note: None },
    GoldenRow { group: "F4", k: 3, dim: 1, rank: 289, note: None },
    GoldenRow { group: "F4", k: 4, dim: 2, rank: 47, note: None },
    GoldenRow { group: "E6", k: 3, dim: 1, rank: 7201, note: None },
    GoldenRow { group: "E6", k: 3, dim: 2, rank: 720, note: None },
    GoldenRow { group: "E6", k: 4, dim: 2, rank: 5039, note: None },
    GoldenRow { group: "E6", k: 5, dim: 3, rank: 1441, note: None },
    GoldenRow { group: "E6", k: 6, dim: 4, rank: 125, note: None },
    GoldenRow {
        group: "E7",
        k: 3,
        dim: 1,
        rank: 135_073,
        note: Some("descent count, Euler identity and the enumerated matching census all give 155233"),
    },
    GoldenRow {
        group: "E7",
        k: 3,
        dim: 2,
        rank: 135_072,
        note: Some("descent count, Euler identity and the enumerated matching census all give 155232"),
    },
    GoldenRow { group: "E7", k: 4, dim: 2, rank: 141_119, note: None },
    GoldenRow { group: "E7", k: 5, dim: 3, rank: 60_481, note: None },
    GoldenRow { group: "E7", k: 6, dim: 4, rank: 11_591, note: None },
    GoldenRow { group: "E7", k: 7, dim: 5, rank: 757, note: None },
    GoldenRow { group: "E8", k: 3, dim: 1, rank: 10_946_881, note: None },
    GoldenRow { group: "E8", k: 3, dim: 2, rank: 54_492_480, note: None },
    GoldenRow { group: "E8", k: 4, dim: 2, rank: 12_337_919, note: None },
    GoldenRow { group: "E8", k: 4, dim: 4, rank: 2_177_280, note: None },
    GoldenRow { group: "E8", k: 5, dim: 3, rank: 7_257_601, note: None },
    GoldenRow {
        group: "E8",
        k: 6,
        dim: 4,
        rank: 2_600_639,
        note: Some("descent count and Euler identity agree on 2298239"),
    },
    GoldenRow {
        group: "E8",
        k: 7,
        dim: 5,
        rank: 2_600_639,
        note: Some("reference value repeats the k=6 entry verbatim; descent count and Euler identity agree on 362881"),
    },
    GoldenRow {
        group: "E8",
        k: 8,
        dim: 6,
        rank: 60_481,
        note: Some("reference value coincides with the E7 k=5 entry; descent count and Euler identity agree on 19679"),
    },
];

/// Outcome of checking one golden row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RowStatus {
    Match,
    /// Computed value differs; `euler_confirms` records whether the Euler
    /// identity certifies the computed table.
    Flag {
        computed: i128,
        euler_confirms: bool,
    },
}

#[derive(Clone, Debug)]
pub struct RowReport {
    pub row: GoldenRow,
    pub status: RowStatus,
}

impl RowReport {
    /// A row is acceptable if it matches, or if it was explicitly under
    /// scrutiny and two independent in-repo methods agree against it.
    pub fn acceptable(&self) -> bool {
        match &self.status {
            RowStatus::Match => true,
            RowStatus::Flag { euler_confirms, .. } => self.row.note.is_some() && *euler_confirms,
        }
    }
}

/// Compare every golden row against the descent method, cross-checking
/// each flagged table with the Euler identity.
pub fn appendix_check() -> Result<Vec<RowReport>> {
    let mut out = Vec::new();
    let mut tables: BTreeMap<(String, usize), BettiTable> = BTreeMap::new();
    for row in EXCEPTIONAL_RANKS {
        let key = (row.group.to_string(), row.k);
        if !tables.contains_key(&key) {
            let diagram = CoxeterDiagram::parse(row.group)?;
            let table = descent_table(&diagram, row.group, row.k)?;
            tables.insert(key.clone(), table);
        }
        let table = &tables[&key];
        let computed = table.rank(row.dim);
        let status = if computed == row.rank {
            RowStatus::Match
        } else {
            let diagram = CoxeterDiagram::parse(row.group)?;
            RowStatus::Flag {
                computed,
                euler_confirms: euler_identity_holds(&diagram, row.k, table)?,
            }
        };
        out.push(RowReport { row: *row, status });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn type_a_small_values() {
        assert_eq!(betti_type_a(3, 3, 1).unwrap(), 7);
        assert_eq!(betti_type_a(4, 4, 1).unwrap(), 9);
        assert_eq!(betti_type_a(3, 3, 0).unwrap(), 1);
        assert_eq!(betti_type_a(4, 3, 1).unwrap(), 31);
        assert!(betti_type_a(2, 3, 1).is_err());
    }

    #[test]
    fn type_b_printed_value_b3() {
        // the printed formula gives 10 here; the in-repo oracle gives 13
        // and the comparison harness flags the gap
        assert_eq!(betti_type_b(3, 3, 1).unwrap(), 10);
        // B4 k=4 t=1 printed value, compared against the oracle downstream
        assert_eq!(betti_type_b(4, 4, 1).unwrap(), 16);
    }

    #[test]
    fn type_d_printed_value_d4() {
        assert_eq!(betti_type_d3(4, 1).unwrap(), 68);
        assert_eq!(betti_type_d3(4, 0).unwrap(), 1);
        assert!(betti_type_d3(3, 1).is_err());
    }

    #[test]
    fn descent_count_small() {
        let a3 = CoxeterDiagram::parse("A3").unwrap();
        assert_eq!(betti_descent_count(&a3, 3, 1).unwrap(), 7);
        let b3 = CoxeterDiagram::parse("B3").unwrap();
        assert_eq!(betti_descent_count(&b3, 3, 1).unwrap(), 13);
        let d4 = CoxeterDiagram::parse("D4").unwrap();
        assert_eq!(betti_descent_count(&d4, 3, 1).unwrap(), 73);
        let h3 = CoxeterDiagram::parse("H3").unwrap();
        assert_eq!(betti_descent_count(&h3, 3, 1).unwrap(), 31);
    }

    #[test]
    fn descent_count_matches_type_a() {
        for n in 3..=6 {
            let d = CoxeterDiagram::parse(&format!("A{n}")).unwrap();
            for k in 3..=n {
                for t in 0..=2 {
                    let formula = betti_type_a(n, k, t).unwrap();
                    let descent = if t == 0 {
                        1
                    } else {
                        betti_descent_count(&d, k, t).unwrap()
                    };
                    assert_eq!(formula, descent, "A{n} k={k} t={t}");
                }
            }
        }
    }

    #[test]
    fn euler_table_single_rank() {
        let f4 = CoxeterDiagram::parse("F4").unwrap();
        let t = betti_from_euler(&f4, "F4", 4, &BTreeMap::new()).unwrap();
        assert_eq!(t.rank(2), 47);
        let h4 = CoxeterDiagram::parse("H4").unwrap();
        let t = betti_from_euler(&h4, "H4", 3, &BTreeMap::new()).unwrap();
        assert_eq!(t.rank(1), 3601);
    }

    #[test]
    fn euler_table_with_supplement() {
        let e6 = CoxeterDiagram::parse("E6").unwrap();
        // two nonzero ranks: underdetermined without help
        assert!(matches!(
            betti_from_euler(&e6, "E6", 3, &BTreeMap::new()),
            Err(Error::Underdetermined { unknown: 2 })
        ));
        let mut known = BTreeMap::new();
        known.insert(2usize, 720i128);
        let t = betti_from_euler(&e6, "E6", 3, &known).unwrap();
        assert_eq!(t.rank(1), 7201);
        assert!(t.flags.is_empty());
    }

    #[test]
    fn exceptional_small_rows() {
        for (group, k, dim, expect) in [
            ("H3", 3, 1, 31i128),
            ("H4", 3, 1, 3601),
            ("H4", 4, 2, 719),
            ("F4", 3, 1, 289),
            ("F4", 4, 2, 47),
            ("E6", 6, 4, 125),
        ] {
            let d = CoxeterDiagram::parse(group).unwrap();
            let table = descent_table(&d, group, k).unwrap();
            assert_eq!(table.rank(dim), expect, "{group} k={k}");
            assert!(euler_identity_holds(&d, k, &table).unwrap());
        }
    }

    #[test]
    fn e7_e8_descent_tables_satisfy_euler_identity() {
        for group in ["E7", "E8"] {
            let d = CoxeterDiagram::parse(group).unwrap();
            for k in 3..=d.rank() {
                let table = descent_table(&d, group, k).unwrap();
                assert!(
                    euler_identity_holds(&d, k, &table).unwrap(),
                    "{group} k = {k}"
                );
            }
        }
    }

    #[test]
    fn table_json_shape() {
        let d = CoxeterDiagram::parse("A3").unwrap();
        let t = descent_table(&d, "A3", 3).unwrap();
        let v = t.to_json();
        assert_eq!(v["entries"]["1"], "7");
        assert_eq!(v["method"], "descent");
    }
}
