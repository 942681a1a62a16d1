use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Row-style Hermite normal form of an integer matrix.
///
/// `rows` are the nonzero rows in echelon order, pivots positive, entries
/// above each pivot reduced into `[0, pivot)`. `transform[i]` expresses
/// `rows[i]` as an integer combination of the input rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hnf {
    pub rows: Vec<Vec<BigInt>>,
    pub pivots: Vec<usize>,
    pub transform: Vec<Vec<BigInt>>,
}

fn combine(a: &[BigInt], b: &[BigInt], s: &BigInt, t: &BigInt) -> Vec<BigInt> {
    a.iter().zip(b).map(|(x, y)| s * x + t * y).collect()
}

fn axpy(target: &mut [BigInt], q: &BigInt, src: &[BigInt]) {
    for (x, y) in target.iter_mut().zip(src) {
        *x -= q * y;
    }
}

pub fn hermite_normal_form(input: &[Vec<BigInt>]) -> Hnf {
    let nrows = input.len();
    let ncols = input.first().map_or(0, |r| r.len());
    let mut a: Vec<Vec<BigInt>> = input.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..nrows)
        .map(|i| (0..nrows).map(|j| BigInt::from((i == j) as i32)).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut pr = 0;
    for col in 0..ncols {
        if pr == nrows {
            break;
        }
        for i in pr + 1..nrows {
            if a[i][col].is_zero() {
                continue;
            }
            if a[pr][col].is_zero() {
                a.swap(pr, i);
                u.swap(pr, i);
                continue;
            }
            let x = a[pr][col].clone();
            let y = a[i][col].clone();
            let eg = x.extended_gcd(&y);
            let (g, s, t) = (eg.gcd, eg.x, eg.y);
            let xg = &x / &g;
            let yg = &y / &g;
            let new_p = combine(&a[pr], &a[i], &s, &t);
            let new_i = combine(&a[i], &a[pr], &xg, &-&yg);
            a[pr] = new_p;
            a[i] = new_i;
            let new_up = combine(&u[pr], &u[i], &s, &t);
            let new_ui = combine(&u[i], &u[pr], &xg, &-&yg);
            u[pr] = new_up;
            u[i] = new_ui;
        }
        if a[pr][col].is_zero() {
            continue;
        }
        if a[pr][col].is_negative() {
            a[pr].iter_mut().for_each(|x| *x = -&*x);
            u[pr].iter_mut().for_each(|x| *x = -&*x);
        }
        let piv = a[pr][col].clone();
        let (prow, urow) = (a[pr].clone(), u[pr].clone());
        for k in 0..pr {
            let q = a[k][col].div_floor(&piv);
            if !q.is_zero() {
                axpy(&mut a[k], &q, &prow);
                axpy(&mut u[k], &q, &urow);
            }
        }
        pivots.push(col);
        pr += 1;
    }
    a.truncate(pr);
    u.truncate(pr);
    Hnf { rows: a, pivots, transform: u }
}

impl Hnf {
    /// Lattice membership of `v` by reduction against the echelon rows.
    pub fn contains(&self, v: &[BigInt]) -> bool {
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let (q, r) = v[p].div_rem(&row[p]);
            if !r.is_zero() {
                return false;
            }
            if !q.is_zero() {
                axpy(&mut v, &q, row);
            }
        }
        v.iter().all(Zero::is_zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    fn mul_row(t: &[BigInt], a: &[Vec<BigInt>]) -> Vec<BigInt> {
        let n = a[0].len();
        (0..n).map(|j| t.iter().zip(a).map(|(c, r)| c * &r[j]).sum()).collect()
    }

    #[test]
    fn small_hnf() {
        let a = m(&[&[2, 3, 6], &[4, 5, 7], &[6, 7, 11]]);
        let h = hermite_normal_form(&a);
        assert_eq!(h.rows.len(), 3);
        for (row, t) in h.rows.iter().zip(&h.transform) {
            assert_eq!(&mul_row(t, &a), row);
        }
        for (i, &p) in h.pivots.iter().enumerate() {
            assert!(h.rows[i][p] > BigInt::zero());
            for k in 0..i {
                assert!(h.rows[k][p] >= BigInt::zero() && h.rows[k][p] < h.rows[i][p]);
            }
        }
    }

    #[test]
    fn rank_deficient() {
        let a = m(&[&[1, 2], &[2, 4], &[3, 6]]);
        let h = hermite_normal_form(&a);
        assert_eq!(h.rows, m(&[&[1, 2]]));
        assert!(h.contains(&m(&[&[5, 10]])[0]));
        assert!(!h.contains(&m(&[&[1, 3]])[0]));
    }

    #[test]
    fn membership() {
        let a = m(&[&[2, 0], &[0, 3]]);
        let h = hermite_normal_form(&a);
        assert!(h.contains(&m(&[&[4, 9]])[0]));
        assert!(!h.contains(&m(&[&[1, 0]])[0]));
    }
}
