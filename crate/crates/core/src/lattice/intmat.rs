//! Integer matrix reductions: column Hermite form with unimodular transform,
//! and the canonical row Hermite normal form used to identify sublattices.

use num_integer::Integer;

pub type IntMatrix = Vec<Vec<i64>>;

/// Result of reducing a `k × r` integer matrix `A` by column operations:
/// `A U = [L | 0]` with `L` lower triangular, `U` unimodular, `V = U^{-1}`.
pub struct ColumnReduction {
    pub lower: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let e = a.extended_gcd(&b);
    (e.gcd, e.x, e.y)
}

pub fn identity(n: usize) -> IntMatrix {
    (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect()
}

/// Column-reduce `a`; `None` if the rows are linearly dependent.
pub fn column_reduce(a: &IntMatrix, cols: usize) -> Option<ColumnReduction> {
    let k = a.len();
    let mut m = a.clone();
    let mut u = identity(cols);
    let mut v = identity(cols);
    for i in 0..k {
        if i >= cols {
            return None;
        }
        for j in i + 1..cols {
            let (x0, y0) = (m[i][i], m[i][j]);
            if y0 == 0 {
                continue;
            }
            let (g, x, y) = ext_gcd(x0, y0);
            let (p, q) = (x0 / g, y0 / g);
            for row in m.iter_mut().chain(u.iter_mut()) {
                let (ci, cj) = (row[i], row[j]);
                row[i] = x * ci + y * cj;
                row[j] = -q * ci + p * cj;
            }
            let (ri, rj) = (v[i].clone(), v[j].clone());
            for c in 0..cols {
                v[i][c] = p * ri[c] + q * rj[c];
                v[j][c] = -y * ri[c] + x * rj[c];
            }
        }
        if m[i][i] == 0 {
            return None;
        }
        if m[i][i] < 0 {
            for row in m.iter_mut().chain(u.iter_mut()) {
                row[i] = -row[i];
            }
            for x in v[i].iter_mut() {
                *x = -*x;
            }
        }
    }
    let lower = m.iter().map(|row| row[..k].to_vec()).collect();
    Some(ColumnReduction { lower, u, v })
}

/// Canonical row Hermite normal form of a full-row-rank matrix: echelon,
/// positive pivots, entries above each pivot reduced into `[0, pivot)`.
pub fn row_hnf(a: &IntMatrix) -> IntMatrix {
    let mut m = a.clone();
    let k = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut row = 0;
    for col in 0..cols {
        if row == k {
            break;
        }
        loop {
            let nz: Vec<usize> = (row..k).filter(|&r| m[r][col] != 0).collect();
            if nz.is_empty() {
                break;
            }
            let piv = *nz.iter().min_by_key(|&&r| m[r][col].abs()).expect("nonempty");
            m.swap(row, piv);
            let mut done = true;
            for r in row + 1..k {
                let f = Integer::div_floor(&m[r][col], &m[row][col]);
                if f != 0 {
                    let src = m[row].clone();
                    for (x, s) in m[r].iter_mut().zip(&src) {
                        *x -= f * s;
                    }
                }
                if m[r][col] != 0 {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if m[row][col] == 0 {
            continue;
        }
        if m[row][col] < 0 {
            for x in m[row].iter_mut() {
                *x = -*x;
            }
        }
        for r in 0..row {
            let f = Integer::div_floor(&m[r][col], &m[row][col]);
            if f != 0 {
                let src = m[row].clone();
                for (x, s) in m[r].iter_mut().zip(&src) {
                    *x -= f * s;
                }
            }
        }
        row += 1;
    }
    m.truncate(row);
    m
}

pub fn mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let m = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| (0..m).map(|j| row.iter().zip(b).map(|(x, brow)| x * brow[j]).sum()).collect())
        .collect()
}

pub fn gcd_of(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, x| g.gcd(x))
}

/// Normalize sign so the first nonzero entry is positive.
pub fn canonical_sign(v: &mut [i64]) {
    if let Some(&f) = v.iter().find(|&&x| x != 0) {
        if f < 0 {
            for x in v.iter_mut() {
                *x = -*x;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn column_reduction_identities() {
        let a = vec![vec![2, 4, 6], vec![1, 3, 8]];
        let red = column_reduce(&a, 3).unwrap();
        assert_eq!(mul(&red.u, &red.v), identity(3));
        let au = mul(&a, &red.u);
        assert_eq!(au[0][1..], [0, 0]);
        assert_eq!(au[1][2], 0);
        assert_eq!(red.lower, vec![vec![2, 0], vec![au[1][0], au[1][1]]]);
        assert!(column_reduce(&vec![vec![1, 2], vec![2, 4]], 2).is_none());
    }

    #[test]
    fn hnf_is_canonical() {
        let a = vec![vec![1, 2, 3], vec![0, 1, 1]];
        let b = vec![vec![1, 3, 4], vec![2, 5, 7]];
        assert_eq!(row_hnf(&a), row_hnf(&b));
        assert_eq!(row_hnf(&a), vec![vec![1, 0, 1], vec![0, 1, 1]]);
        assert_eq!(row_hnf(&vec![vec![-2, 0]]), vec![vec![2, 0]]);
    }
}
