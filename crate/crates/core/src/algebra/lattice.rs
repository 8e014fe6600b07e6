//! Integer linear systems and kernels, all through the Smith form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::matrix::{IntMatrix, IntVector};
use super::snf::smith_normal_form;
use super::AlgebraError;

/// Solves `A x = b` over the integers. Any returned `x` satisfies the system
/// exactly; `None` means no integer solution exists.
pub fn solve_integer(a: &IntMatrix, b: &[BigInt]) -> Result<Option<IntVector>, AlgebraError> {
    if b.len() != a.rows() {
        return Err(AlgebraError::DimensionMismatch { expected: a.rows(), found: b.len() });
    }
    let s = smith_normal_form(a);
    let ub = s.u.mul_vec(b);
    let mut y = vec![BigInt::zero(); a.cols()];
    for (i, c) in ub.iter().enumerate() {
        let d = s.invariant_factors.get(i).cloned().unwrap_or_default();
        if d.is_zero() {
            if !c.is_zero() {
                return Ok(None);
            }
        } else {
            let (q, r) = c.div_rem(&d);
            if !r.is_zero() {
                return Ok(None);
            }
            y[i] = q;
        }
    }
    let x = s.v.mul_vec(&y);
    debug_assert_eq!(a.mul_vec(&x), b);
    Ok(Some(x))
}

/// Basis of `{x in Z^cols : A x = 0}`, as the columns of the result.
pub fn integer_kernel(a: &IntMatrix) -> IntMatrix {
    let s = smith_normal_form(a);
    let r = s.rank();
    let cols: Vec<usize> = (r..a.cols()).collect();
    let rows: Vec<usize> = (0..a.cols()).collect();
    s.v.select(&rows, &cols)
}

/// Basis of `{y : y A = 0}`, as the rows of the result.
pub fn integer_left_kernel(a: &IntMatrix) -> IntMatrix {
    integer_kernel(&a.transpose()).transpose()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::matrix::int_vec;

    #[test]
    fn solve_examples() {
        let a = IntMatrix::from_i64_rows(&[&[2]]);
        assert_eq!(solve_integer(&a, &int_vec(&[4])).unwrap(), Some(int_vec(&[2])));
        assert_eq!(solve_integer(&a, &int_vec(&[3])).unwrap(), None);
        let a = IntMatrix::from_i64_rows(&[&[6, 10]]);
        let x = solve_integer(&a, &int_vec(&[2])).unwrap().expect("gcd divides");
        assert_eq!(a.mul_vec(&x), int_vec(&[2]));
        assert!(solve_integer(&a, &int_vec(&[1, 2])).is_err());
    }

    #[test]
    fn kernel_of_rank_one_map() {
        let a = IntMatrix::from_i64_rows(&[&[2, 4, 6]]);
        let k = integer_kernel(&a);
        assert_eq!(k.cols(), 2);
        assert!((&a * &k).is_zero());
        // the kernel is saturated: its Smith invariants are all one
        let s = smith_normal_form(&k);
        assert!(s.invariant_factors.iter().all(|d| d == &BigInt::from(1)));
    }
}
