//! Exact nullspace of sparse integer matrices.
//!
//! Rows are eliminated fraction-free (integer row combinations followed by
//! content division), so intermediate entries stay integral until the final
//! back-substitution produces rational kernel vectors.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

/// A sparse row: `(column, value)` pairs sorted by column, no zero values.
pub type SparseRow = Vec<(usize, BigInt)>;

fn normalize(row: &mut SparseRow) {
    row.retain(|(_, v)| !v.is_zero());
    let mut g = BigInt::zero();
    for (_, v) in row.iter() {
        g = g.gcd(v);
        if g.is_one() {
            break;
        }
    }
    if !g.is_zero() && !g.is_one() {
        for (_, v) in row.iter_mut() {
            *v /= &g;
        }
    }
    if let Some((_, lead)) = row.first() {
        if lead.is_negative() {
            for (_, v) in row.iter_mut() {
                *v = -&*v;
            }
        }
    }
}

/// `a·row − b·pivot`, where `a`, `b` are chosen to cancel the entry at `col`.
fn eliminate(row: &SparseRow, pivot: &SparseRow, col: usize) -> SparseRow {
    let a = pivot.iter().find(|(c, _)| *c == col).map(|(_, v)| v.clone()).unwrap();
    let b = match row.iter().find(|(c, _)| *c == col) {
        Some((_, v)) => v.clone(),
        None => return row.clone(),
    };
    let g = a.gcd(&b);
    let (a, b) = (&a / &g, &b / &g);
    let mut out: SparseRow = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        let ci = row.get(i).map(|x| x.0).unwrap_or(usize::MAX);
        let cj = pivot.get(j).map(|x| x.0).unwrap_or(usize::MAX);
        if ci < cj {
            out.push((ci, &a * &row[i].1));
            i += 1;
        } else if cj < ci {
            out.push((cj, -(&b * &pivot[j].1)));
            j += 1;
        } else {
            let v = &a * &row[i].1 - &b * &pivot[j].1;
            if !v.is_zero() {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    normalize(&mut out);
    out
}

/// Reduced row echelon form keyed by pivot column.
pub fn row_reduce(rows: impl IntoIterator<Item = SparseRow>) -> BTreeMap<usize, SparseRow> {
    let mut pivots: BTreeMap<usize, SparseRow> = BTreeMap::new();
    for mut row in rows {
        row.sort_by_key(|x| x.0);
        normalize(&mut row);
        while let Some(&(lead, _)) = row.first() {
            match pivots.get(&lead) {
                Some(p) => row = eliminate(&row, p, lead),
                None => {
                    pivots.insert(lead, row);
                    break;
                }
            }
        }
    }
    // back elimination, highest pivot first
    let cols: Vec<usize> = pivots.keys().rev().copied().collect();
    for &col in &cols {
        let pivot = pivots[&col].clone();
        for (_, other) in pivots.range_mut(..col) {
            if other.iter().any(|(c, _)| *c == col) {
                *other = eliminate(other, &pivot, col);
            }
        }
    }
    pivots
}

/// Basis of `{x : M x = 0}` for the matrix given by its rows, one vector per
/// free column, in increasing free-column order. Each vector has a 1 at its
/// free column.
pub fn nullspace(rows: impl IntoIterator<Item = SparseRow>, ncols: usize) -> Vec<Vec<Rational>> {
    let pivots = row_reduce(rows);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains_key(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![Rational::zero(); ncols];
            x[f] = Rational::one();
            for (&p, row) in &pivots {
                if let Some((_, v)) = row.iter().find(|(c, _)| *c == f) {
                    let lead = &row[0].1;
                    x[p] = -Rational::new(v.clone(), lead.clone());
                }
            }
            x
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(entries: &[(usize, i64)]) -> SparseRow {
        entries.iter().map(|&(c, v)| (c, BigInt::from(v))).collect()
    }

    fn apply(rows: &[SparseRow], x: &[Rational]) -> Vec<Rational> {
        rows.iter()
            .map(|r| r.iter().map(|(c, v)| Rational::from_integer(v.clone()) * &x[*c]).sum())
            .collect()
    }

    #[test]
    fn kernel_of_small_matrix() {
        // [1 2 3; 2 4 6] has a 2-dimensional kernel
        let rows = vec![row(&[(0, 1), (1, 2), (2, 3)]), row(&[(0, 2), (1, 4), (2, 6)])];
        let ker = nullspace(rows.clone(), 3);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert!(apply(&rows, v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn full_rank_has_trivial_kernel() {
        let rows = vec![row(&[(0, 2), (1, 1)]), row(&[(0, 1), (1, 3)])];
        assert!(nullspace(rows, 2).is_empty());
    }

    #[test]
    fn rational_kernel_entries() {
        // 2x - 5y = 0 → (5/2, 1)
        let ker = nullspace(vec![row(&[(0, 2), (1, -5)])], 2);
        assert_eq!(ker, vec![vec![Rational::new(5.into(), 2.into()), Rational::one()]]);
    }
}
