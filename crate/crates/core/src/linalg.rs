//! Exact dense linear algebra over the rationals.

use num_traits::{One, Zero};

use crate::rational::{dot, zeros, Rat};

/// Reduced row echelon form. Returns the reduced matrix (zero rows dropped)
/// and the pivot column of each remaining row.
pub fn rref(rows: &[Vec<Rat>], ncols: usize) -> (Vec<Vec<Rat>>, Vec<usize>) {
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Rat::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[Vec<Rat>], ncols: usize) -> usize {
    rref(rows, ncols).1.len()
}

/// Basis of `{x : row . x = 0 for every row}`, one vector per free column,
/// in increasing order of the free column.
pub fn null_space(rows: &[Vec<Rat>], ncols: usize) -> Vec<Vec<Rat>> {
    let (m, pivots) = rref(rows, ncols);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = zeros(ncols);
        v[free] = Rat::one();
        for (row, &p) in m.iter().zip(&pivots) {
            v[p] = -row[free].clone();
        }
        basis.push(v);
    }
    basis
}

pub fn transpose(m: &[Vec<Rat>], ncols: usize) -> Vec<Vec<Rat>> {
    (0..ncols)
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn mat_vec(m: &[Vec<Rat>], v: &[Rat]) -> Vec<Rat> {
    m.iter().map(|row| dot(row, v)).collect()
}

/// `v^T m` for a matrix stored by rows.
pub fn vec_mat(v: &[Rat], m: &[Vec<Rat>], ncols: usize) -> Vec<Rat> {
    let mut out = zeros(ncols);
    for (vi, row) in v.iter().zip(m) {
        if vi.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(row) {
            *o += vi * x;
        }
    }
    out
}

/// Solves the square system `m x = b`; `None` when singular.
pub fn solve(m: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let n = m.len();
    let aug: Vec<Vec<Rat>> = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (red, pivots) = rref(&aug, n + 1);
    if pivots.len() != n || pivots.contains(&n) {
        return None;
    }
    Some(red.iter().map(|row| row[n].clone()).collect())
}

/// Orthogonal projection of `v` onto the orthogonal complement of
/// `span(basis)` (standard inner product). `basis` must be independent.
pub fn project_out(v: &[Rat], basis: &[Vec<Rat>]) -> Vec<Rat> {
    if basis.is_empty() {
        return v.to_vec();
    }
    let gram: Vec<Vec<Rat>> = basis
        .iter()
        .map(|a| basis.iter().map(|b| dot(a, b)).collect())
        .collect();
    let rhs: Vec<Rat> = basis.iter().map(|a| dot(a, v)).collect();
    let coef = solve(&gram, &rhs).expect("independent basis");
    let mut out = v.to_vec();
    for (c, b) in coef.iter().zip(basis) {
        for (o, x) in out.iter_mut().zip(b) {
            *o -= c * x;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn null_space_of_price_row() {
        let basis = null_space(&[vec![rat(1, 3), rat(1, 3), rat(1, 3)]], 3);
        assert_eq!(basis.len(), 2);
        for b in &basis {
            assert!(dot(b, &[int(1), int(1), int(1)]).is_zero());
        }
        assert_eq!(
            null_space(&[vec![int(1), int(0)]], 2),
            vec![vec![int(0), int(1)]]
        );
    }

    #[test]
    fn rank_and_solve() {
        let m = vec![vec![int(1), int(2)], vec![int(2), int(4)]];
        assert_eq!(rank(&m, 2), 1);
        assert!(solve(&m, &[int(1), int(2)]).is_none());
        let m = vec![vec![int(2), int(1)], vec![int(1), int(3)]];
        assert_eq!(
            solve(&m, &[int(3), int(5)]).unwrap(),
            vec![rat(4, 5), rat(7, 5)]
        );
    }

    #[test]
    fn projection_removes_component() {
        let p = project_out(&[int(1), int(2)], &[vec![int(0), int(1)]]);
        assert_eq!(p, vec![int(1), int(0)]);
    }
}
