//! Sparse integer matrices and their exact rank.
//!
//! Rational rank runs in two phases. Pivots of absolute value one are
//! eliminated first on sparse `i64` rows; this keeps every entry integral
//! and handles almost all of a Khovanov differential. Whatever survives is
//! densified into big integers and finished with fraction-free (Bareiss)
//! elimination. If the sparse phase would overflow, the whole matrix goes
//! through Bareiss instead.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    /// Row-major sparse storage, columns ascending, no explicit zeros.
    data: Vec<Vec<(usize, i64)>>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> IntMatrix {
        IntMatrix { rows, cols, data: vec![Vec::new(); rows] }
    }

    pub fn identity(n: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i].push((i, 1));
        }
        m
    }

    /// Builds a matrix from `(row, col, value)` triplets; repeated positions add up.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize, i64)>,
    ) -> IntMatrix {
        let mut acc: Vec<BTreeMap<usize, i64>> = vec![BTreeMap::new(); rows];
        for (r, c, v) in entries {
            assert!(r < rows && c < cols, "entry ({r}, {c}) outside a {rows}x{cols} matrix");
            *acc[r].entry(c).or_insert(0) += v;
        }
        let data = acc.into_iter().map(|row| row.into_iter().filter(|&(_, v)| v != 0).collect()).collect();
        IntMatrix { rows, cols, data }
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> IntMatrix {
        let cols = rows.first().map_or(0, Vec::len);
        let entries = rows.iter().enumerate().flat_map(|(r, row)| {
            assert_eq!(row.len(), cols, "ragged dense matrix");
            row.iter().enumerate().map(move |(c, &v)| (r, c, v))
        });
        IntMatrix::from_triplets(rows.len(), cols, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r].binary_search_by_key(&c, |&(k, _)| k).map_or(0, |i| self.data[r][i].1)
    }

    pub fn row(&self, r: usize) -> &[(usize, i64)] {
        &self.data[r]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    /// Matrix product `self · rhs`.
    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in product");
        let entries = self.data.iter().enumerate().flat_map(|(r, row)| {
            row.iter().flat_map(move |&(k, a)| rhs.data[k].iter().map(move |&(c, b)| (r, c, a * b)))
        });
        IntMatrix::from_triplets(self.rows, rhs.cols, entries.collect::<Vec<_>>())
    }

    pub fn transpose(&self) -> IntMatrix {
        let entries = self.data.iter().enumerate().flat_map(|(r, row)| row.iter().map(move |&(c, v)| (c, r, v)));
        IntMatrix::from_triplets(self.cols, self.rows, entries.collect::<Vec<_>>())
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        matrix_rank(self)
    }

    /// Rank over the field with two elements.
    pub fn rank_gf2(&self) -> usize {
        rank_gf2(self)
    }
}

type SparseRows = Vec<Vec<(usize, i64)>>;

/// Exact rank over the rationals.
pub fn matrix_rank(m: &IntMatrix) -> usize {
    match unit_pivot_phase(m) {
        Some((rank, rest)) => rank + bareiss_rank(rest),
        None => bareiss_rank(m.data.iter().filter(|r| !r.is_empty()).cloned().collect()),
    }
}

/// Eliminates ±1 pivots. Returns the rank found and the remaining rows, or
/// `None` on arithmetic overflow.
fn unit_pivot_phase(m: &IntMatrix) -> Option<(usize, SparseRows)> {
    let mut rows: Vec<Option<Vec<(usize, i64)>>> =
        m.data.iter().map(|r| if r.is_empty() { None } else { Some(r.clone()) }).collect();
    let mut col_rows: Vec<Vec<usize>> = vec![Vec::new(); m.cols];
    for (r, row) in m.data.iter().enumerate() {
        for &(c, _) in row {
            col_rows[c].push(r);
        }
    }

    let mut rank = 0;
    loop {
        // Pick the unit entry whose column is shortest, ties by row length.
        let mut best: Option<(usize, usize, usize, usize)> = None;
        for (r, row) in rows.iter().enumerate() {
            let Some(row) = row else { continue };
            for &(c, v) in row {
                if v.abs() == 1 {
                    let key = (col_rows[c].len(), row.len());
                    if best.is_none_or(|(_, _, a, b)| key < (a, b)) {
                        best = Some((r, c, key.0, key.1));
                    }
                }
            }
        }
        let Some((pr, pc, _, _)) = best else { break };
        let pivot_row = rows[pr].take().expect("pivot row present");
        let pv = pivot_row.iter().find(|&&(c, _)| c == pc).expect("pivot entry").1;
        for &(c, _) in &pivot_row {
            col_rows[c].retain(|&r| r != pr);
        }
        let targets: Vec<usize> = col_rows[pc].clone();
        for r in targets {
            let row = rows[r].as_mut().expect("live row");
            let v = row.iter().find(|&&(c, _)| c == pc).expect("column entry").1;
            // row ← row − (v / pv)·pivot_row, with pv = ±1
            let factor = v.checked_mul(pv)?;
            let (new_row, added, removed) = axpy(row, &pivot_row, factor)?;
            *row = new_row;
            for c in added {
                col_rows[c].push(r);
            }
            for c in removed {
                col_rows[c].retain(|&x| x != r);
            }
            if row.is_empty() {
                rows[r] = None;
            }
        }
        rank += 1;
    }
    Some((rank, rows.into_iter().flatten().collect()))
}

type AxpyResult = (Vec<(usize, i64)>, Vec<usize>, Vec<usize>);

/// `a − f·b` on sorted sparse rows, reporting columns that appeared or vanished.
fn axpy(a: &[(usize, i64)], b: &[(usize, i64)], f: i64) -> Option<AxpyResult> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut added, mut removed) = (Vec::new(), Vec::new());
    let (mut i, mut k) = (0, 0);
    while i < a.len() || k < b.len() {
        let ca = a.get(i).map_or(usize::MAX, |e| e.0);
        let cb = b.get(k).map_or(usize::MAX, |e| e.0);
        if ca < cb {
            out.push(a[i]);
            i += 1;
        } else if cb < ca {
            let v = b[k].1.checked_mul(f)?.checked_neg()?;
            out.push((cb, v));
            added.push(cb);
            k += 1;
        } else {
            let v = a[i].1.checked_sub(b[k].1.checked_mul(f)?)?;
            if v != 0 {
                out.push((ca, v));
            } else {
                removed.push(ca);
            }
            i += 1;
            k += 1;
        }
    }
    Some((out, added, removed))
}

fn to_dense(rows: Vec<Vec<(usize, i64)>>) -> Vec<Vec<BigInt>> {
    let mut cols: Vec<usize> = rows.iter().flatten().map(|&(c, _)| c).collect();
    cols.sort_unstable();
    cols.dedup();
    rows.iter()
        .map(|row| {
            let mut dense = vec![BigInt::zero(); cols.len()];
            for &(c, v) in row {
                dense[cols.binary_search(&c).expect("collected column")] = BigInt::from(v);
            }
            dense
        })
        .collect()
}

fn bareiss_rank(rest: Vec<Vec<(usize, i64)>>) -> usize {
    bareiss_rank_dense(to_dense(rest))
}

/// Fraction-free Gaussian elimination. Every intermediate entry is a minor
/// of the input, so each division below is exact.
pub fn bareiss_rank_dense(mut m: Vec<Vec<BigInt>>) -> usize {
    let n_rows = m.len();
    let n_cols = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..n_cols {
        if r == n_rows {
            break;
        }
        let Some(p) = (r..n_rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let (top, bottom) = m.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let pivot = pivot_row[c].clone();
        for row in bottom.iter_mut() {
            let lead = std::mem::take(&mut row[c]);
            for k in c + 1..n_cols {
                let num = &pivot * &row[k] - &lead * &pivot_row[k];
                let (q, rem) = num.div_rem(&prev);
                debug_assert!(rem.is_zero(), "inexact Bareiss step");
                row[k] = q;
            }
        }
        prev = pivot;
        r += 1;
    }
    r
}

/// Rank over GF(2), on bit-packed rows.
pub fn rank_gf2(m: &IntMatrix) -> usize {
    let words = m.cols.div_ceil(64);
    let mut rows: Vec<Vec<u64>> = m
        .data
        .iter()
        .filter_map(|row| {
            let mut bits = vec![0u64; words];
            for &(c, v) in row {
                if v.rem_euclid(2) == 1 {
                    bits[c / 64] ^= 1 << (c % 64);
                }
            }
            bits.iter().any(|&w| w != 0).then_some(bits)
        })
        .collect();
    let mut rank = 0;
    for c in 0..m.cols {
        let (w, b) = (c / 64, 1u64 << (c % 64));
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][w] & b != 0) else { continue };
        rows.swap(rank, p);
        let (top, bottom) = rows.split_at_mut(rank + 1);
        let pivot = &top[rank];
        for row in bottom.iter_mut() {
            if row[w] & b != 0 {
                for (x, y) in row.iter_mut().zip(pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}
