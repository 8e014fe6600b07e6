//! Gaussian elimination over the rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::matrix::{RatMatrix, RatVector};
use super::AlgebraError;

/// Reduced row echelon form together with its pivot columns.
pub fn rref(a: &RatMatrix) -> (RatMatrix, Vec<usize>) {
    let mut m = a.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols() {
        if r == m.rows() {
            break;
        }
        let Some(p) = (r..m.rows()).find(|&i| !m.get(i, c).is_zero()) else { continue };
        if p != r {
            for j in 0..m.cols() {
                let tmp = m.get(p, j).clone();
                m.set(p, j, m.get(r, j).clone());
                m.set(r, j, tmp);
            }
        }
        let inv = m.get(r, c).recip();
        for j in c..m.cols() {
            let v = m.get(r, j) * &inv;
            m.set(r, j, v);
        }
        for i in 0..m.rows() {
            if i == r || m.get(i, c).is_zero() {
                continue;
            }
            let f = m.get(i, c).clone();
            for j in c..m.cols() {
                let v = m.get(i, j) - &f * m.get(r, j);
                m.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

pub fn rank(a: &RatMatrix) -> usize {
    rref(a).1.len()
}

/// Exact solution of `A x = b`, or `None` when the system is inconsistent.
/// Free variables are set to zero.
pub fn solve_rational(a: &RatMatrix, b: &[BigRational]) -> Result<Option<RatVector>, AlgebraError> {
    if b.len() != a.rows() {
        return Err(AlgebraError::DimensionMismatch { expected: a.rows(), found: b.len() });
    }
    let aug = a.hstack(&RatMatrix::from_columns(a.rows(), &[b.to_vec()]));
    let (r, pivots) = rref(&aug);
    if pivots.last() == Some(&a.cols()) {
        return Ok(None);
    }
    let mut x = vec![BigRational::zero(); a.cols()];
    for (row, &c) in pivots.iter().enumerate() {
        x[c] = r.get(row, a.cols()).clone();
    }
    Ok(Some(x))
}

/// Inverse of a square matrix, `None` when singular.
pub fn inverse(a: &RatMatrix) -> Option<RatMatrix> {
    let n = a.rows();
    assert!(a.is_square(), "inverse of a non-square matrix");
    let (r, pivots) = rref(&a.hstack(&RatMatrix::identity(n)));
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    let rows: Vec<usize> = (0..n).collect();
    let cols: Vec<usize> = (n..2 * n).collect();
    Some(r.select(&rows, &cols))
}

/// Basis of the right null space, one vector per free column.
pub fn nullspace(a: &RatMatrix) -> Vec<RatVector> {
    let (r, pivots) = rref(a);
    let free: Vec<usize> = (0..a.cols()).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); a.cols()];
            v[f] = BigRational::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -r.get(row, f).clone();
            }
            v
        })
        .collect()
}

/// Scales a rational vector to a primitive integer vector with the same direction.
pub fn primitive_integer_vector(v: &[BigRational]) -> Vec<BigInt> {
    use num_integer::Integer;
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        ints
    } else {
        ints.into_iter().map(|x| x / &g).collect()
    }
}

/// Parses `"p/q"`, `"p"` or `"-p/q"`; the denominator must be positive.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q <= BigInt::zero() {
                return None;
            }
            Some(BigRational::new(p, q))
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

pub fn format_rational(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    fn rm(rows: &[&[i64]]) -> RatMatrix {
        RatMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x, 1)).collect()).collect())
    }

    #[test]
    fn inverse_examples() {
        let a = rm(&[&[2, 1], &[1, 1]]);
        let inv = inverse(&a).unwrap();
        assert_eq!(&a * &inv, RatMatrix::identity(2));
        assert!(inverse(&rm(&[&[1, 2], &[2, 4]])).is_none());
    }

    #[test]
    fn solve_examples() {
        assert_eq!(solve_rational(&rm(&[&[2]]), &[q(3, 1)]).unwrap(), Some(vec![q(3, 2)]));
        assert_eq!(solve_rational(&rm(&[&[0]]), &[q(1, 1)]).unwrap(), None);
        let a = rm(&[&[1, 1], &[2, 2]]);
        let b = [q(1, 1), q(2, 1)];
        let x = solve_rational(&a, &b).unwrap().expect("consistent");
        assert_eq!(a.mul_vec(&x), b.to_vec());
        assert!(matches!(
            solve_rational(&a, &[q(1, 1)]),
            Err(AlgebraError::DimensionMismatch { expected: 2, found: 1 })
        ));
    }

    #[test]
    fn nullspace_is_annihilated() {
        let a = rm(&[&[1, 2, 3], &[2, 4, 6]]);
        let ns = nullspace(&a);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(a.mul_vec(&v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn rational_strings() {
        assert_eq!(parse_rational("3/6"), Some(q(1, 2)));
        assert_eq!(parse_rational("-4"), Some(q(-4, 1)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("1/-2"), None);
        assert_eq!(parse_rational("0.5"), None);
        assert_eq!(format_rational(&q(-2, 4)), "-1/2");
        assert_eq!(format_rational(&q(6, 3)), "2");
    }
}
