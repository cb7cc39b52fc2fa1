//! Exact Fincke-Pohst enumeration of integer points in a rational ellipsoid.

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::lattice::linalg::{to_rational, RatMatrix};

/// A positive definite integer form `Q`, completed to squares as
/// `Q(y) = sum_i d_i (y_i + sum_{j>i} mu_ij y_j)^2` in a permuted basis.
#[derive(Debug, Clone)]
pub(crate) struct Ellipsoid {
    /// `order[k]` is the original coordinate at permuted position `k`.
    order: Vec<usize>,
    diag: Vec<BigRational>,
    mu: RatMatrix,
}

impl Ellipsoid {
    /// Returns `None` when `form` is not positive definite.
    ///
    /// Coordinates are visited in order of decreasing diagonal entry (ties by
    /// index): the first visited is the last position of the permuted basis.
    pub(crate) fn new(form: &[Vec<BigInt>]) -> Option<Self> {
        let n = form.len();
        let mut visit: Vec<usize> = (0..n).collect();
        visit.sort_by(|&a, &b| form[b][b].abs().cmp(&form[a][a].abs()).then(a.cmp(&b)));
        let order: Vec<usize> = visit.into_iter().rev().collect();

        let q = to_rational(form);
        let mut a: RatMatrix = order
            .iter()
            .map(|&i| order.iter().map(|&j| q[i][j].clone()).collect())
            .collect();
        let mut diag = Vec::with_capacity(n);
        let mut mu = vec![vec![BigRational::zero(); n]; n];
        for i in 0..n {
            let d = a[i][i].clone();
            if !d.is_positive() {
                return None;
            }
            for j in i + 1..n {
                mu[i][j] = &a[i][j] / &d;
            }
            for r in i + 1..n {
                for c in i + 1..n {
                    let t = &mu[i][r] * &a[i][c];
                    a[r][c] -= t;
                }
            }
            diag.push(d);
        }
        Some(Self { order, diag, mu })
    }

    pub(crate) fn dim(&self) -> usize {
        self.order.len()
    }

    /// All integer `x` with `Q(x - center) <= radius`, in original coordinates.
    pub(crate) fn points_within(&self, center: &[BigRational], radius: &BigRational) -> Vec<Vec<BigInt>> {
        let n = self.dim();
        let mut out = Vec::new();
        if radius.is_negative() {
            return out;
        }
        let c: Vec<BigRational> = self.order.iter().map(|&i| center[i].clone()).collect();
        let mut y = vec![BigInt::zero(); n];
        self.descend(n, &c, radius.clone(), &mut y, &mut out);
        out
    }

    fn descend(
        &self,
        level: usize,
        c: &[BigRational],
        budget: BigRational,
        y: &mut Vec<BigInt>,
        out: &mut Vec<Vec<BigInt>>,
    ) {
        if level == 0 {
            let mut x = vec![BigInt::zero(); y.len()];
            for (k, &i) in self.order.iter().enumerate() {
                x[i] = y[k].clone();
            }
            out.push(x);
            return;
        }
        let i = level - 1;
        let mut centre = c[i].clone();
        for j in i + 1..y.len() {
            let shift = BigRational::from_integer(y[j].clone()) - &c[j];
            centre -= &self.mu[i][j] * shift;
        }
        // (y_i - centre)^2 <= budget / d_i
        let slack = &budget / &self.diag[i];
        let reach: BigInt = Roots::sqrt(&slack.ceil().to_integer()) + 1;
        let lo: BigInt = centre.floor().to_integer() - &reach;
        let hi = centre.ceil().to_integer() + &reach;
        let mut v = lo;
        while v <= hi {
            let off = BigRational::from_integer(v.clone()) - &centre;
            let used = &self.diag[i] * &off * &off;
            if used <= budget {
                y[i] = v.clone();
                self.descend(i, c, &budget - used, y, out);
            }
            v += 1;
        }
        y[i] = BigInt::zero();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().copied().map(BigInt::from).collect())
            .collect()
    }

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn rejects_indefinite() {
        assert!(Ellipsoid::new(&int(&[&[0, 1], &[1, 0]])).is_none());
        assert!(Ellipsoid::new(&int(&[&[2, 1], &[1, -2]])).is_none());
    }

    #[test]
    fn counts_points_in_a_disc() {
        // x^2 + y^2 <= 2 has 9 integer points
        let e = Ellipsoid::new(&int(&[&[1, 0], &[0, 1]])).unwrap();
        assert_eq!(e.points_within(&[rat(0), rat(0)], &rat(2)).len(), 9);
        // shifted centre (1/2, 0): (x-1/2)^2 + y^2 <= 1/4 gives (0,0) and (1,0)
        let half = BigRational::new(1.into(), 2.into());
        let quarter = BigRational::new(1.into(), 4.into());
        let mut pts = e.points_within(&[half, rat(0)], &quarter);
        pts.sort();
        assert_eq!(pts, int(&[&[0, 0], &[1, 0]]));
    }

    #[test]
    fn zero_dimensional() {
        let e = Ellipsoid::new(&[]).unwrap();
        assert_eq!(e.points_within(&[], &rat(0)).len(), 1);
        assert!(e.points_within(&[], &rat(-1)).is_empty());
    }
}
