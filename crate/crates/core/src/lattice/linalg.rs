//! Exact integer and rational matrix routines used by the lattice layer.
//!
//! Matrices are plain row vectors; sizes here are at most around ten, so
//! the simple cubic algorithms are adequate.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;
pub type RatMatrix = Vec<Vec<BigRational>>;

pub fn to_rational(m: &[Vec<BigInt>]) -> RatMatrix {
    m.iter()
        .map(|row| row.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect()
}

/// Counts of positive, negative and zero pivots of a symmetric matrix after
/// congruence diagonalization over the rationals.
///
/// Pivots are taken from the diagonal, first nonzero in row order. When the
/// remaining diagonal is all zero but an off-diagonal entry `a_ij` is not,
/// row/column `j` is added to row/column `i`, which puts `2 a_ij` on the
/// diagonal.
pub fn inertia(m: &[Vec<BigInt>]) -> (usize, usize, usize) {
    let mut a = to_rational(m);
    let n = a.len();
    let (mut pos, mut neg) = (0, 0);
    let mut k = 0;
    while k < n {
        let pivot = (k..n).find(|&i| !a[i][i].is_zero());
        let pivot = match pivot {
            Some(i) => i,
            None => {
                let off = (k..n)
                    .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                    .find(|&(i, j)| !a[i][j].is_zero());
                match off {
                    Some((i, j)) => {
                        add_symmetric(&mut a, i, j);
                        i
                    }
                    None => break,
                }
            }
        };
        swap_symmetric(&mut a, k, pivot);
        let p = a[k][k].clone();
        if p.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &p;
            for j in k..n {
                let t = &f * &a[k][j];
                a[i][j] -= t;
            }
        }
        for i in k + 1..n {
            a[k][i] = BigRational::zero();
            a[i][k] = BigRational::zero();
        }
        k += 1;
    }
    (pos, neg, n - pos - neg)
}

fn swap_symmetric(a: &mut RatMatrix, i: usize, j: usize) {
    if i == j {
        return;
    }
    a.swap(i, j);
    for row in a.iter_mut() {
        row.swap(i, j);
    }
}

/// Congruence by the elementary matrix adding basis vector `j` to `i`.
fn add_symmetric(a: &mut RatMatrix, i: usize, j: usize) {
    let n = a.len();
    for c in 0..n {
        let t = a[j][c].clone();
        a[i][c] += t;
    }
    for r in 0..n {
        let t = a[r][j].clone();
        a[r][i] += t;
    }
}

/// Row-style Hermite normal form. Returns only the nonzero rows; pivots are
/// positive and entries above each pivot are reduced into `[0, pivot)`.
pub fn row_hnf(mut rows: IntMatrix) -> IntMatrix {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut top = 0;
    for col in 0..ncols {
        if top == rows.len() {
            break;
        }
        loop {
            let best = (top..rows.len())
                .filter(|&r| !rows[r][col].is_zero())
                .min_by(|&a, &b| rows[a][col].abs().cmp(&rows[b][col].abs()));
            let Some(best) = best else { break };
            rows.swap(top, best);
            let mut done = true;
            for r in top + 1..rows.len() {
                if rows[r][col].is_zero() {
                    continue;
                }
                let q = rows[r][col].div_floor(&rows[top][col]);
                sub_multiple(&mut rows, r, top, &q);
                if !rows[r][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if rows[top][col].is_zero() {
            continue;
        }
        if rows[top][col].is_negative() {
            for x in rows[top].iter_mut() {
                *x = -&*x;
            }
        }
        for r in 0..top {
            let q = rows[r][col].div_floor(&rows[top][col]);
            if !q.is_zero() {
                sub_multiple(&mut rows, r, top, &q);
            }
        }
        top += 1;
    }
    rows.truncate(top);
    rows
}

fn sub_multiple(rows: &mut IntMatrix, target: usize, source: usize, q: &BigInt) {
    let src = rows[source].clone();
    for (x, s) in rows[target].iter_mut().zip(&src) {
        *x -= q * s;
    }
}

/// Integer solution data for a linear form `w -> form . w`.
#[derive(Clone, Debug)]
pub struct LinearFormKernel {
    /// gcd of the coefficients (0 when the form is zero).
    pub gcd: BigInt,
    /// A vector `x` with `form . x = gcd` (zero when the form is zero).
    pub particular: Vec<BigInt>,
    /// A basis of the integer kernel, in row Hermite normal form.
    pub basis: IntMatrix,
}

pub fn linear_form_kernel(form: &[BigInt]) -> LinearFormKernel {
    let n = form.len();
    let augmented: IntMatrix = (0..n)
        .map(|i| {
            let mut row = Vec::with_capacity(n + 1);
            row.push(form[i].clone());
            row.extend((0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            row
        })
        .collect();
    let reduced = row_hnf(augmented);
    let mut rows = reduced.into_iter();
    let (gcd, particular, rest): (BigInt, Vec<BigInt>, Vec<Vec<BigInt>>) =
        if form.iter().all(Zero::is_zero) {
            (BigInt::zero(), vec![BigInt::zero(); n], rows.collect())
        } else {
            let first = rows.next().expect("nonzero form has a pivot row");
            (first[0].clone(), first[1..].to_vec(), rows.collect())
        };
    let kernel_rows: IntMatrix = rest.into_iter().map(|r| r[1..].to_vec()).collect();
    LinearFormKernel {
        gcd,
        particular,
        basis: row_hnf(kernel_rows),
    }
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: IntMatrix = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = t / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Solves `m x = b` for a nonsingular rational matrix.
pub fn solve(m: &RatMatrix, b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = m.len();
    let mut a: RatMatrix = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    for k in 0..n {
        let p = (k..n).find(|&i| !a[i][k].is_zero())?;
        a.swap(k, p);
        let pivot = a[k][k].clone();
        for x in a[k].iter_mut() {
            *x /= &pivot;
        }
        for i in 0..n {
            if i == k || a[i][k].is_zero() {
                continue;
            }
            let f = a[i][k].clone();
            for j in k..=n {
                let t = &f * &a[k][j];
                a[i][j] -= t;
            }
        }
    }
    Some(a.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

/// `basis . gram . basis^T`.
pub fn congruence(gram: &[Vec<BigInt>], basis: &[Vec<BigInt>]) -> IntMatrix {
    let gb: IntMatrix = basis.iter().map(|b| mat_vec(gram, b)).collect();
    basis
        .iter()
        .map(|bi| gb.iter().map(|gbj| dot(bi, gbj)).collect())
        .collect()
}

pub fn mat_vec(m: &[Vec<BigInt>], v: &[BigInt]) -> Vec<BigInt> {
    m.iter().map(|row| dot(row, v)).collect()
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
