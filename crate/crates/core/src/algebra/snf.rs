//! Smith normal form over the integers.
//!
//! Pivoting always picks the entry of smallest nonzero absolute value in the
//! active block and clears its row and column with rounded quotients. The
//! elimination runs first on `i128` with checked arithmetic; on overflow it is
//! restarted on `BigInt`, so results are exact at any size.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::matrix::IntMatrix;

/// `U * A * V = D` with `U`, `V` unimodular and `D` diagonal in Smith form.
#[derive(Clone, Debug, PartialEq)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
    pub d: IntMatrix,
    /// Diagonal of `D`, length `min(rows, cols)`: `d_1 | d_2 | ...`, zeros last.
    pub invariant_factors: Vec<BigInt>,
}

impl SmithDecomposition {
    pub fn rank(&self) -> usize {
        self.invariant_factors.iter().take_while(|d| !d.is_zero()).count()
    }
}

/// Computes the full decomposition, including both transforms.
pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let (d, t) = run(a, true);
    let t = t.expect("transforms requested");
    let m = a.rows();
    let n = a.cols();
    let k = m.min(n);
    let d_mat = IntMatrix::from_fn(m, n, |i, j| if i == j { d[i].clone() } else { BigInt::zero() });
    SmithDecomposition {
        u: IntMatrix::new(m, m, t.u),
        u_inv: IntMatrix::new(m, m, t.u_inv),
        v: IntMatrix::new(n, n, t.v),
        d: d_mat,
        invariant_factors: d[..k].to_vec(),
    }
}

/// Invariant factors only (diagonal of the Smith form, length `min(rows, cols)`).
pub fn smith_invariants(a: &IntMatrix) -> Vec<BigInt> {
    run(a, false).0
}

struct Transforms<T> {
    u: Vec<T>,
    u_inv: Vec<T>,
    v: Vec<T>,
}

fn run(a: &IntMatrix, transforms: bool) -> (Vec<BigInt>, Option<Transforms<BigInt>>) {
    let small: Option<Vec<i128>> = a.data().iter().map(|x| x.to_i128()).collect();
    if let Some(entries) = small {
        let mut w = Work::new(a.rows(), a.cols(), entries, transforms);
        if w.eliminate().is_ok() {
            return w.finish().map_big();
        }
    }
    let mut w = Work::new(a.rows(), a.cols(), a.data().to_vec(), transforms);
    w.eliminate().expect("bigint elimination cannot overflow");
    w.finish()
}

trait Finished {
    fn map_big(self) -> (Vec<BigInt>, Option<Transforms<BigInt>>);
}

impl Finished for (Vec<i128>, Option<Transforms<i128>>) {
    fn map_big(self) -> (Vec<BigInt>, Option<Transforms<BigInt>>) {
        let conv = |v: Vec<i128>| v.into_iter().map(BigInt::from).collect::<Vec<_>>();
        let t = self.1.map(|t| Transforms { u: conv(t.u), u_inv: conv(t.u_inv), v: conv(t.v) });
        (conv(self.0), t)
    }
}

#[derive(Debug)]
struct Overflow;

/// Integer arithmetic with overflow detection.
trait SnfInt: Clone + PartialEq {
    fn nil() -> Self;
    fn unit() -> Self;
    fn is_nil(&self) -> bool;
    fn is_neg(&self) -> bool;
    fn cmp_abs(&self, other: &Self) -> Ordering;
    fn neg(&self) -> Result<Self, Overflow>;
    /// `self - q * b`
    fn sub_mul(&self, q: &Self, b: &Self) -> Result<Self, Overflow>;
    /// Quotient rounded to nearest, so the remainder is at most `|b| / 2`.
    fn round_div(&self, b: &Self) -> Result<Self, Overflow>;
    fn divides(&self, a: &Self) -> bool;
}

impl SnfInt for i128 {
    fn nil() -> Self {
        0
    }
    fn unit() -> Self {
        1
    }
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn is_neg(&self) -> bool {
        *self < 0
    }
    fn cmp_abs(&self, other: &Self) -> Ordering {
        self.unsigned_abs().cmp(&other.unsigned_abs())
    }
    fn neg(&self) -> Result<Self, Overflow> {
        self.checked_neg().ok_or(Overflow)
    }
    fn sub_mul(&self, q: &Self, b: &Self) -> Result<Self, Overflow> {
        q.checked_mul(*b).and_then(|p| self.checked_sub(p)).ok_or(Overflow)
    }
    fn round_div(&self, b: &Self) -> Result<Self, Overflow> {
        let mut q = self.checked_div_euclid(*b).ok_or(Overflow)?;
        let r = self.checked_rem_euclid(*b).ok_or(Overflow)?;
        // 0 <= r < |b|
        if r.unsigned_abs() * 2 > b.unsigned_abs() {
            q = if *b > 0 { q.checked_add(1) } else { q.checked_sub(1) }.ok_or(Overflow)?;
        }
        Ok(q)
    }
    fn divides(&self, a: &Self) -> bool {
        *self != 0 && a % self == 0
    }
}

impl SnfInt for BigInt {
    fn nil() -> Self {
        <BigInt as Zero>::zero()
    }
    fn unit() -> Self {
        <BigInt as One>::one()
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_neg(&self) -> bool {
        Signed::is_negative(self)
    }
    fn cmp_abs(&self, other: &Self) -> Ordering {
        self.magnitude().cmp(other.magnitude())
    }
    fn neg(&self) -> Result<Self, Overflow> {
        Ok(-self)
    }
    fn sub_mul(&self, q: &Self, b: &Self) -> Result<Self, Overflow> {
        Ok(self - q * b)
    }
    fn round_div(&self, b: &Self) -> Result<Self, Overflow> {
        let (mut q, r) = self.div_mod_floor(b);
        // r carries the sign of b, |r| < |b|
        if r.magnitude() * 2u32 > *b.magnitude() {
            q += 1;
        }
        Ok(q)
    }
    fn divides(&self, a: &Self) -> bool {
        !Zero::is_zero(self) && Zero::is_zero(&(a % self))
    }
}

struct Work<T> {
    m: usize,
    n: usize,
    a: Vec<T>,
    t: Option<Transforms<T>>,
}

fn identity<T: SnfInt>(n: usize) -> Vec<T> {
    let mut v = vec![T::nil(); n * n];
    for i in 0..n {
        v[i * n + i] = T::unit();
    }
    v
}

impl<T: SnfInt> Work<T> {
    fn new(m: usize, n: usize, a: Vec<T>, transforms: bool) -> Self {
        let t = transforms.then(|| Transforms { u: identity(m), u_inv: identity(m), v: identity(n) });
        Work { m, n, a, t }
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> &T {
        &self.a[i * self.n + j]
    }

    fn swap_rows(&mut self, i: usize, k: usize) {
        if i == k {
            return;
        }
        let (m, n) = (self.m, self.n);
        for j in 0..n {
            self.a.swap(i * n + j, k * n + j);
        }
        if let Some(t) = &mut self.t {
            for j in 0..m {
                t.u.swap(i * m + j, k * m + j);
                t.u_inv.swap(j * m + i, j * m + k);
            }
        }
    }

    fn swap_cols(&mut self, j: usize, k: usize) {
        if j == k {
            return;
        }
        let n = self.n;
        for i in 0..self.m {
            self.a.swap(i * n + j, i * n + k);
        }
        if let Some(t) = &mut self.t {
            for i in 0..n {
                t.v.swap(i * n + j, i * n + k);
            }
        }
    }

    /// row_i -= q * row_k, starting at column `from` in the work matrix.
    fn row_sub(&mut self, i: usize, k: usize, q: &T, from: usize) -> Result<(), Overflow> {
        let (m, n) = (self.m, self.n);
        for j in from..n {
            let b = self.a[k * n + j].clone();
            if !b.is_nil() {
                self.a[i * n + j] = self.a[i * n + j].sub_mul(q, &b)?;
            }
        }
        if let Some(t) = &mut self.t {
            for j in 0..m {
                let b = t.u[k * m + j].clone();
                if !b.is_nil() {
                    t.u[i * m + j] = t.u[i * m + j].sub_mul(q, &b)?;
                }
                // inverse: column k += q * column i
                let c = t.u_inv[j * m + i].clone();
                if !c.is_nil() {
                    let mq = q.neg()?;
                    t.u_inv[j * m + k] = t.u_inv[j * m + k].sub_mul(&mq, &c)?;
                }
            }
        }
        Ok(())
    }

    /// col_j -= q * col_k, starting at row `from` in the work matrix.
    fn col_sub(&mut self, j: usize, k: usize, q: &T, from: usize) -> Result<(), Overflow> {
        let n = self.n;
        for i in from..self.m {
            let b = self.a[i * n + k].clone();
            if !b.is_nil() {
                self.a[i * n + j] = self.a[i * n + j].sub_mul(q, &b)?;
            }
        }
        if let Some(t) = &mut self.t {
            for i in 0..n {
                let b = t.v[i * n + k].clone();
                if !b.is_nil() {
                    t.v[i * n + j] = t.v[i * n + j].sub_mul(q, &b)?;
                }
            }
        }
        Ok(())
    }

    fn negate_row(&mut self, i: usize) -> Result<(), Overflow> {
        let (m, n) = (self.m, self.n);
        for j in 0..n {
            self.a[i * n + j] = self.a[i * n + j].neg()?;
        }
        if let Some(t) = &mut self.t {
            for j in 0..m {
                t.u[i * m + j] = t.u[i * m + j].neg()?;
                t.u_inv[j * m + i] = t.u_inv[j * m + i].neg()?;
            }
        }
        Ok(())
    }

    fn smallest_in_block(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.m {
            for j in t..self.n {
                let v = self.at(i, j);
                if v.is_nil() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if v.cmp_abs(self.at(bi, bj)) != Ordering::Less => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        best
    }

    fn eliminate(&mut self) -> Result<(), Overflow> {
        let k = self.m.min(self.n);
        for t in 0..k {
            let Some((pi, pj)) = self.smallest_in_block(t) else { break };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                // clear column t below the pivot
                let mut residue = false;
                for i in t + 1..self.m {
                    if self.at(i, t).is_nil() {
                        continue;
                    }
                    let q = self.at(i, t).round_div(self.at(t, t))?;
                    self.row_sub(i, t, &q, t)?;
                    residue |= !self.at(i, t).is_nil();
                }
                if residue {
                    let i = (t + 1..self.m)
                        .filter(|&i| !self.at(i, t).is_nil())
                        .min_by(|&x, &y| self.at(x, t).cmp_abs(self.at(y, t)))
                        .expect("residue present");
                    self.swap_rows(t, i);
                    continue;
                }
                // clear row t right of the pivot
                for j in t + 1..self.n {
                    if self.at(t, j).is_nil() {
                        continue;
                    }
                    let q = self.at(t, j).round_div(self.at(t, t))?;
                    self.col_sub(j, t, &q, t)?;
                    residue |= !self.at(t, j).is_nil();
                }
                if residue {
                    let j = (t + 1..self.n)
                        .filter(|&j| !self.at(t, j).is_nil())
                        .min_by(|&x, &y| self.at(t, x).cmp_abs(self.at(t, y)))
                        .expect("residue present");
                    self.swap_cols(t, j);
                    continue;
                }
                // the pivot must divide the whole remaining block
                let bad = (t + 1..self.m).find(|&i| {
                    (t + 1..self.n).any(|j| !self.at(t, t).divides(self.at(i, j)))
                });
                match bad {
                    Some(i) => {
                        let minus_one = T::unit().neg()?;
                        self.row_sub(t, i, &minus_one, t)?;
                    }
                    None => break,
                }
            }
            if self.at(t, t).is_neg() {
                self.negate_row(t)?;
            }
        }
        Ok(())
    }

    fn finish(self) -> (Vec<T>, Option<Transforms<T>>) {
        let k = self.m.min(self.n);
        let d = (0..k).map(|i| self.at(i, i).clone()).collect();
        (d, self.t)
    }
}

impl Finished for (Vec<BigInt>, Option<Transforms<BigInt>>) {
    fn map_big(self) -> (Vec<BigInt>, Option<Transforms<BigInt>>) {
        self
    }
}
