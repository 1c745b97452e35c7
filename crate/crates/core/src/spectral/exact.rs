//! Exact eigenvalue multiplicities.
//!
//! The multiplicity of `e` equals the nullity of `H - e I`. With rational `H`
//! and `e` every row is scaled to integers and the rank is found by
//! fraction-free elimination on sparse rows: a row update is
//! `row_i <- p * row_i - a * pivot_row` followed by division by the row's
//! content. Pivots are chosen Markowitz-style (shortest row, then the column
//! touching the fewest rows), which on trees peels leaves first and produces
//! no fill-in.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use super::{Hamiltonian, PotentialKind};
use crate::graph::TreeGraph;
use crate::{Error, Result};

/// Largest denominator accepted when reading a float as a rational.
pub const MAX_DENOMINATOR: i64 = 1_000_000;

type SparseRow = Vec<(usize, BigInt)>;

/// Smallest-denominator rational `p/q` with `q <= 10^6` whose nearest double
/// is exactly `x`, found from the continued-fraction convergents of `x`.
///
/// Returns `None` for non-finite input and for values (such as `sqrt(2)`) that
/// no such fraction reproduces.
pub fn rational_from_f64(x: f64) -> Option<Ratio<i64>> {
    if !x.is_finite() {
        return None;
    }
    if x.fract() == 0.0 && x.abs() < 9.0e15 {
        return Some(Ratio::from_integer(x as i64));
    }
    // convergents h_k / k_k
    let (mut h_prev, mut h) = (1i128, x.floor() as i128);
    let (mut k_prev, mut k) = (0i128, 1i128);
    let mut rest = x - x.floor();
    loop {
        if (h as f64) / (k as f64) == x {
            return Some(Ratio::new(h as i64, k as i64));
        }
        if rest == 0.0 {
            return None;
        }
        let inv = 1.0 / rest;
        let a = inv.floor();
        rest = inv - a;
        let a = a as i128;
        let h_next = a.checked_mul(h)?.checked_add(h_prev)?;
        let k_next = a.checked_mul(k)?.checked_add(k_prev)?;
        if k_next > MAX_DENOMINATOR as i128 || h_next.abs() > i64::MAX as i128 {
            return None;
        }
        (h_prev, h) = (h, h_next);
        (k_prev, k) = (k, k_next);
    }
}

fn exact_entry(x: f64, what: &str) -> Result<Ratio<i64>> {
    rational_from_f64(x).ok_or_else(|| {
        Error::UnsupportedExactMode(format!("{what} {x} is not a small-denominator rational"))
    })
}

/// Scales a row of rationals by the lcm of its denominators.
fn integer_row(entries: impl IntoIterator<Item = (usize, Ratio<i64>)>) -> SparseRow {
    let entries: Vec<(usize, Ratio<i64>)> =
        entries.into_iter().filter(|(_, v)| !v.is_zero()).collect();
    let lcm = entries
        .iter()
        .fold(BigInt::one(), |acc, (_, v)| acc.lcm(&BigInt::from(*v.denom())));
    entries
        .into_iter()
        .map(|(c, v)| {
            let scaled = BigInt::from(*v.numer()) * (&lcm / BigInt::from(*v.denom()));
            (c, scaled)
        })
        .collect()
}

/// Exact multiplicity of `e` as an eigenvalue of `h`.
pub fn multiplicity_exact(h: &Hamiltonian, e: Ratio<i64>) -> Result<usize> {
    let n = h.n();
    let m = h.matrix();
    let mut rows = Vec::with_capacity(n);
    for j in 0..n {
        let mut entries = Vec::new();
        for k in 0..n {
            let x = m[(j, k)];
            if x == 0.0 && j != k {
                continue;
            }
            let mut v = exact_entry(x, "matrix entry")?;
            if j == k {
                v -= e;
            }
            entries.push((k, v));
        }
        rows.push(integer_row(entries));
    }
    Ok(nullity_exact(rows, n))
}

/// Exact multiplicity of `E* = H(1)`.
pub fn multiplicity_exact_at_e_star(h: &Hamiltonian) -> Result<usize> {
    let e = exact_entry(h.e_star(), "E*")?;
    multiplicity_exact(h, e)
}

/// Same as [`multiplicity_exact`] but assembled straight from the tree, so it
/// works beyond the dense-matrix limit.
pub fn multiplicity_exact_on_tree(
    g: &TreeGraph,
    potential: &PotentialKind,
    e: Ratio<i64>,
) -> Result<usize> {
    let n = g.n();
    let mut rows = Vec::with_capacity(n);
    for j in 0..n {
        let diag = exact_entry(potential.value(g.functionality(j))?, "potential value")? - e;
        let mut entries: Vec<(usize, Ratio<i64>)> = g
            .neighbors(j)
            .iter()
            .map(|&k| (k, Ratio::from_integer(1)))
            .collect();
        entries.push((j, diag));
        entries.sort_by_key(|&(c, _)| c);
        rows.push(integer_row(entries));
    }
    Ok(nullity_exact(rows, n))
}

/// `E*` multiplicity assembled from the tree.
pub fn multiplicity_exact_at_e_star_on_tree(
    g: &TreeGraph,
    potential: &PotentialKind,
) -> Result<usize> {
    let e = exact_entry(potential.e_star()?, "E*")?;
    multiplicity_exact_on_tree(g, potential, e)
}

/// Nullity `ncols - rank` of an integer matrix given as sparse rows
/// (column-sorted, zero entries allowed).
pub fn nullity_exact(rows: Vec<SparseRow>, ncols: usize) -> usize {
    let mut rows: Vec<SparseRow> = rows
        .into_iter()
        .map(|r| r.into_iter().filter(|(_, v)| !v.is_zero()).collect())
        .collect();
    let mut col_rows: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    let mut queue: BTreeSet<(usize, usize)> = BTreeSet::new();
    for (i, row) in rows.iter().enumerate() {
        if row.is_empty() {
            continue;
        }
        queue.insert((row.len(), i));
        for (c, _) in row {
            col_rows.entry(*c).or_default().insert(i);
        }
    }

    let mut rank = 0;
    while let Some((_, r)) = queue.pop_first() {
        let pivot_row = std::mem::take(&mut rows[r]);
        for (c, _) in &pivot_row {
            if let Some(set) = col_rows.get_mut(c) {
                set.remove(&r);
            }
        }
        rank += 1;

        let (pivot_col, pivot) = pivot_row
            .iter()
            .min_by_key(|(c, _)| (col_rows.get(c).map_or(0, BTreeSet::len), *c))
            .map(|(c, v)| (*c, v.clone()))
            .expect("queued rows are non-empty");

        let targets: Vec<usize> = col_rows
            .get(&pivot_col)
            .map(|s| s.iter().copied().collect())
            .unwrap_or_default();
        for i in targets {
            let old = std::mem::take(&mut rows[i]);
            queue.remove(&(old.len(), i));
            let a = old
                .iter()
                .find(|(c, _)| *c == pivot_col)
                .map(|(_, v)| v.clone())
                .expect("column index is consistent");
            let new = eliminate(&old, &pivot_row, &pivot, &a);
            for (c, _) in &old {
                if let Some(set) = col_rows.get_mut(c) {
                    set.remove(&i);
                }
            }
            for (c, _) in &new {
                col_rows.entry(*c).or_default().insert(i);
            }
            if !new.is_empty() {
                queue.insert((new.len(), i));
            }
            rows[i] = new;
        }
    }
    ncols - rank
}

/// `p * row - a * pivot_row`, divided by its content.
fn eliminate(row: &SparseRow, pivot_row: &SparseRow, p: &BigInt, a: &BigInt) -> SparseRow {
    let mut out = Vec::with_capacity(row.len() + pivot_row.len());
    let (mut x, mut y) = (row.iter().peekable(), pivot_row.iter().peekable());
    loop {
        let entry = match (x.peek(), y.peek()) {
            (None, None) => break,
            (Some(&(cx, vx)), Some(&(cy, _))) if cx < cy => {
                x.next();
                (*cx, vx * p)
            }
            (Some(&(cx, vx)), None) => {
                x.next();
                (*cx, vx * p)
            }
            (Some(&(cx, vx)), Some(&(cy, vy))) if cx == cy => {
                x.next();
                y.next();
                (*cx, vx * p - vy * a)
            }
            (_, Some(&(cy, vy))) => {
                y.next();
                (*cy, -(vy * a))
            }
        };
        if !entry.1.is_zero() {
            out.push(entry);
        }
    }
    let content = out
        .iter()
        .fold(BigInt::zero(), |g, (_, v)| g.gcd(v));
    if !content.is_zero() && !content.is_one() {
        for (_, v) in &mut out {
            *v /= &content;
        }
    }
    if out.first().is_some_and(|(_, v)| v.is_negative()) {
        for (_, v) in &mut out {
            *v = -&*v;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_chain, generate_dendrimer, generate_star};
    use crate::spectral::{
        bin_degeneracies, build_hamiltonian, default_tolerance, eigendecompose,
    };
    use std::collections::BTreeMap;

    fn one() -> Ratio<i64> {
        Ratio::from_integer(1)
    }

    #[test]
    fn rational_recovery() {
        assert_eq!(rational_from_f64(3.0), Some(Ratio::from_integer(3)));
        assert_eq!(rational_from_f64(-0.5), Some(Ratio::new(-1, 2)));
        assert_eq!(rational_from_f64(0.1), Some(Ratio::new(1, 10)));
        assert_eq!(rational_from_f64(1.0 / 3.0), Some(Ratio::new(1, 3)));
        assert_eq!(rational_from_f64(-7.25), Some(Ratio::new(-29, 4)));
        assert_eq!(rational_from_f64(2f64.sqrt()), None);
        assert_eq!(rational_from_f64(std::f64::consts::PI), None);
        assert_eq!(rational_from_f64(f64::NAN), None);
    }

    #[test]
    fn small_examples() {
        let conn = PotentialKind::Connectivity;
        let h = build_hamiltonian(&generate_star(4).unwrap(), &conn).unwrap();
        assert_eq!(multiplicity_exact(&h, one()).unwrap(), 2);
        let h = build_hamiltonian(&generate_chain(3).unwrap(), &conn).unwrap();
        assert_eq!(multiplicity_exact(&h, one()).unwrap(), 1);
        assert_eq!(multiplicity_exact(&h, Ratio::from_integer(2)).unwrap(), 0);
    }

    #[test]
    fn star_multiplicity_pattern_matches_solver() {
        for n in 3..=64 {
            let h = build_hamiltonian(&generate_star(n).unwrap(), &PotentialKind::Connectivity)
                .unwrap();
            let exact = multiplicity_exact_at_e_star(&h).unwrap();
            let es = eigendecompose(&h).unwrap();
            let sp = bin_degeneracies(&es, default_tolerance(es.eigenvalues())).unwrap();
            assert_eq!(exact, n - 2);
            assert_eq!(sp.multiplicity_at(1.0), n - 2);
        }
    }

    #[test]
    fn dense_and_tree_assembly_agree() {
        let g = generate_dendrimer(3, 5).unwrap();
        for p in [PotentialKind::Connectivity, PotentialKind::Adjacency] {
            let h = build_hamiltonian(&g, &p).unwrap();
            assert_eq!(
                multiplicity_exact_at_e_star(&h).unwrap(),
                multiplicity_exact_at_e_star_on_tree(&g, &p).unwrap()
            );
        }
    }

    #[test]
    fn rational_potential() {
        // chain(3) with H(1)=1/2, H(2)=3/2 is the connectivity matrix shifted by -1/2
        let table = BTreeMap::from([(1, 0.5), (2, 1.5)]);
        let h = build_hamiltonian(&generate_chain(3).unwrap(), &PotentialKind::Custom(table))
            .unwrap();
        assert_eq!(multiplicity_exact(&h, Ratio::new(5, 2)).unwrap(), 1);
        assert_eq!(multiplicity_exact(&h, Ratio::new(-1, 2)).unwrap(), 1);
        assert_eq!(multiplicity_exact(&h, Ratio::new(1, 3)).unwrap(), 0);
    }

    #[test]
    fn irrational_potential_is_unsupported() {
        let table = BTreeMap::from([(1, 2f64.sqrt()), (2, 1.0)]);
        let h = build_hamiltonian(&generate_chain(3).unwrap(), &PotentialKind::Custom(table))
            .unwrap();
        assert!(matches!(
            multiplicity_exact_at_e_star(&h),
            Err(Error::UnsupportedExactMode(_))
        ));
    }

    #[test]
    fn dense_integer_matrices() {
        let to_rows = |m: &[&[i64]]| -> Vec<SparseRow> {
            m.iter()
                .map(|r| r.iter().enumerate().map(|(c, &v)| (c, BigInt::from(v))).collect())
                .collect()
        };
        assert_eq!(nullity_exact(to_rows(&[&[1, 2], &[2, 4]]), 2), 1);
        assert_eq!(nullity_exact(to_rows(&[&[0, 0], &[0, 0]]), 2), 2);
        assert_eq!(nullity_exact(to_rows(&[&[2, 1, 0], &[1, 2, 1], &[0, 1, 2]]), 3), 0);
        assert_eq!(
            nullity_exact(to_rows(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]), 3),
            1
        );
    }
}
