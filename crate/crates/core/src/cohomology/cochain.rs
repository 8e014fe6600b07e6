//! Inhomogeneous bar cochains and their differentials.
//!
//! An `n`-cochain is a function `G^n -> M`, stored as a flat vector of
//! length `r * |G|^n`: tuple `(g_1, ..., g_n)` has index
//! `((g_1 * |G| + g_2) * |G| + ...)` and occupies `r` consecutive slots.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::module::GModule;
use super::CohomologyError;
use crate::algebra::IntMatrix;

/// Largest dense differential (entries) the library will assemble.
pub const MAX_DIFFERENTIAL_ENTRIES: usize = 4_000_000;

/// Highest cochain degree handled.
pub const MAX_DEGREE: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BarCochain {
    degree: usize,
    rank: usize,
    order: usize,
    values: Vec<BigInt>,
}

pub(crate) fn tuple_count(order: usize, degree: usize) -> Result<usize, CohomologyError> {
    order
        .checked_pow(degree as u32)
        .ok_or(CohomologyError::SizeBudget { degree, entries: usize::MAX })
}

pub(crate) fn decode(order: usize, degree: usize, mut idx: usize) -> Vec<usize> {
    let mut t = vec![0; degree];
    for k in (0..degree).rev() {
        t[k] = idx % order;
        idx /= order;
    }
    t
}

pub(crate) fn encode(order: usize, tuple: &[usize]) -> usize {
    tuple.iter().fold(0, |acc, &g| acc * order + g)
}

impl BarCochain {
    pub fn zero(module: &GModule, degree: usize) -> Result<Self, CohomologyError> {
        let len = tuple_count(module.group().order(), degree)? * module.rank();
        Ok(BarCochain { degree, rank: module.rank(), order: module.group().order(), values: vec![BigInt::zero(); len] })
    }

    /// Wraps a flat value vector; its length must be `r * |G|^degree`.
    pub fn from_values(module: &GModule, degree: usize, values: Vec<BigInt>) -> Result<Self, CohomologyError> {
        let expected = tuple_count(module.group().order(), degree)? * module.rank();
        if values.len() != expected {
            return Err(CohomologyError::Dimension { expected, found: values.len() });
        }
        Ok(BarCochain { degree, rank: module.rank(), order: module.group().order(), values })
    }

    /// Builds a cochain from a function on tuples.
    pub fn from_fn(
        module: &GModule,
        degree: usize,
        mut f: impl FnMut(&[usize]) -> Vec<BigInt>,
    ) -> Result<Self, CohomologyError> {
        let count = tuple_count(module.group().order(), degree)?;
        let mut values = Vec::with_capacity(count * module.rank());
        for idx in 0..count {
            let t = decode(module.group().order(), degree, idx);
            let v = f(&t);
            if v.len() != module.rank() {
                return Err(CohomologyError::Dimension { expected: module.rank(), found: v.len() });
            }
            values.extend(v);
        }
        Ok(BarCochain { degree, rank: module.rank(), order: module.group().order(), values })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    pub fn into_values(self) -> Vec<BigInt> {
        self.values
    }

    /// The value at a tuple of group elements.
    pub fn at(&self, tuple: &[usize]) -> &[BigInt] {
        assert_eq!(tuple.len(), self.degree);
        let i = encode(self.order, tuple) * self.rank;
        &self.values[i..i + self.rank]
    }

    /// Vanishes whenever some argument is the identity.
    pub fn is_normalized(&self, identity: usize) -> bool {
        let count = self.values.len() / self.rank.max(1);
        (0..count).all(|idx| {
            let t = decode(self.order, self.degree, idx);
            !t.contains(&identity) || self.at(&t).iter().all(Zero::is_zero)
        })
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.degree, self.rank, self.order), (other.degree, other.rank, other.order));
        BarCochain { values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(), ..self.clone() }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        BarCochain { values: self.values.iter().map(|a| a * k).collect(), ..self.clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }
}

/// `d f` for an `n`-cochain `f`:
/// `(df)(g_1..g_{n+1}) = g_1 f(g_2..) + sum_i (-1)^i f(.., g_i g_{i+1}, ..) + (-1)^{n+1} f(g_1..g_n)`.
/// Values are not reduced modulo the module's relations.
pub fn coboundary(module: &GModule, f: &BarCochain) -> Result<BarCochain, CohomologyError> {
    let g = module.group();
    let n = f.degree;
    let r = module.rank();
    BarCochain::from_fn(module, n + 1, |t| {
        let mut out = module.act(t[0], f.at(&t[1..]));
        let mut inner = Vec::with_capacity(n);
        for i in 1..=n {
            inner.clear();
            inner.extend_from_slice(&t[..i - 1]);
            inner.push(g.mul(t[i - 1], t[i]));
            inner.extend_from_slice(&t[i + 1..]);
            let v = f.at(&inner);
            for k in 0..r {
                if i % 2 == 1 {
                    out[k] -= &v[k];
                } else {
                    out[k] += &v[k];
                }
            }
        }
        let last = f.at(&t[..n]);
        for k in 0..r {
            if (n + 1) % 2 == 1 {
                out[k] -= &last[k];
            } else {
                out[k] += &last[k];
            }
        }
        out
    })
}

/// True when `d f` vanishes in `M` (i.e. modulo the relations).
pub fn is_cocycle(module: &GModule, f: &BarCochain) -> Result<bool, CohomologyError> {
    let df = coboundary(module, f)?;
    let r = module.rank();
    Ok(df.values.chunks(r.max(1)).all(|v| module.reduce(v).iter().all(Zero::is_zero)))
}

/// Dense matrix of `d^n : C^n -> C^{n+1}`.
pub fn differential_matrix(module: &GModule, n: usize) -> Result<IntMatrix, CohomologyError> {
    if n > MAX_DEGREE {
        return Err(CohomologyError::DegreeOutOfRange(n));
    }
    let g = module.group();
    let order = g.order();
    let r = module.rank();
    let src = tuple_count(order, n)?;
    let dst = tuple_count(order, n + 1)?;
    let entries = (src * r).saturating_mul(dst * r);
    if entries > MAX_DIFFERENTIAL_ENTRIES {
        return Err(CohomologyError::SizeBudget { degree: n, entries });
    }
    let mut d = IntMatrix::zeros(dst * r, src * r);
    let one = BigInt::one();
    for out in 0..dst {
        let t = decode(order, n + 1, out);
        // g_1 . f(g_2, ..)
        let s = encode(order, &t[1..]);
        let a = module.action(t[0]);
        for i in 0..r {
            for j in 0..r {
                let v = a.get(i, j);
                if !v.is_zero() {
                    *d.get_mut(out * r + i, s * r + j) += v;
                }
            }
        }
        let mut add_identity = |src_idx: usize, sign_negative: bool| {
            for i in 0..r {
                let e = d.get_mut(out * r + i, src_idx * r + i);
                if sign_negative {
                    *e -= &one;
                } else {
                    *e += &one;
                }
            }
        };
        for i in 1..=n {
            let mut inner = t[..i - 1].to_vec();
            inner.push(g.mul(t[i - 1], t[i]));
            inner.extend_from_slice(&t[i + 1..]);
            add_identity(encode(order, &inner), i % 2 == 1);
        }
        add_identity(encode(order, &t[..n]), (n + 1) % 2 == 1);
    }
    Ok(d)
}
