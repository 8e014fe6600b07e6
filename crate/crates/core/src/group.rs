//! Finite groups as multiplication tables, and their characters with values
//! in `Q/Z`.

use std::collections::VecDeque;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::{format_rational, FgAbelianGroup, IntMatrix};

/// Largest supported group order.
pub const MAX_GROUP_ORDER: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("group order {0} exceeds the supported maximum {MAX_GROUP_ORDER}")]
    TooLarge(usize),
    #[error("invariant factor {0} is smaller than 2")]
    BadFactor(u64),
    #[error("multiplication table is not a group law: {0}")]
    NotAGroup(String),
    #[error("group is not abelian")]
    NotAbelian,
    #[error("character is not a homomorphism: {0}")]
    NotAHomomorphism(String),
}

/// A finite group given by its full multiplication table. Elements are the
/// indices `0..order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
    generators: Vec<usize>,
    /// Cyclic factors when built by [`FiniteGroup::abelian`]; element `x` has
    /// mixed-radix digits in these factors, first factor fastest.
    factors: Option<Vec<u64>>,
    abelianization: Abelianization,
}

/// `G^ab` in invariant-factor form plus the normal-form image of each element.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Abelianization {
    invariants: Vec<BigInt>,
    coords: Vec<Vec<BigInt>>,
}

impl FiniteGroup {
    /// Validates a multiplication table: `table[a][b]` is the index of `a*b`.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::NotAGroup("empty table".into()));
        }
        if n > MAX_GROUP_ORDER {
            return Err(GroupError::TooLarge(n));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(GroupError::NotAGroup(format!("row {i} has length {}, expected {n}", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                return Err(GroupError::NotAGroup(format!("entry {bad} in row {i} is out of range")));
            }
        }
        let mul: Vec<usize> = table.into_iter().flatten().collect();
        let m = |a: usize, b: usize| mul[a * n + b];
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| m(e, x) == x && m(x, e) == x))
            .ok_or_else(|| GroupError::NotAGroup("no identity element".into()))?;
        let mut inverse = Vec::with_capacity(n);
        for a in 0..n {
            let inv = (0..n)
                .find(|&b| m(a, b) == identity && m(b, a) == identity)
                .ok_or_else(|| GroupError::NotAGroup(format!("element {a} has no inverse")))?;
            inverse.push(inv);
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if m(m(a, b), c) != m(a, m(b, c)) {
                        return Err(GroupError::NotAGroup(format!("associativity fails at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        Ok(Self::assemble(n, mul, identity, inverse, None))
    }

    /// `Z/d_1 + ... + Z/d_k`; each factor at least 2.
    pub fn abelian(factors: &[u64]) -> Result<Self, GroupError> {
        if let Some(&f) = factors.iter().find(|&&f| f < 2) {
            return Err(GroupError::BadFactor(f));
        }
        let n = factors.iter().try_fold(1usize, |acc, &f| {
            acc.checked_mul(f as usize).filter(|&p| p <= MAX_GROUP_ORDER).ok_or(())
        });
        let n = n.map_err(|_| GroupError::TooLarge(factors.iter().map(|&f| f as usize).product()))?;
        let digits = |mut x: usize| {
            factors
                .iter()
                .map(|&f| {
                    let d = x % f as usize;
                    x /= f as usize;
                    d
                })
                .collect::<Vec<_>>()
        };
        let index = |d: &[usize]| d.iter().zip(factors).rev().fold(0, |acc, (&x, &f)| acc * f as usize + x);
        let mut mul = Vec::with_capacity(n * n);
        for a in 0..n {
            let da = digits(a);
            for b in 0..n {
                let db = digits(b);
                let s: Vec<usize> =
                    da.iter().zip(&db).zip(factors).map(|((x, y), &f)| (x + y) % f as usize).collect();
                mul.push(index(&s));
            }
        }
        let inverse = (0..n)
            .map(|a| {
                let d: Vec<usize> = digits(a).iter().zip(factors).map(|(&x, &f)| (f as usize - x) % f as usize).collect();
                index(&d)
            })
            .collect();
        Ok(Self::assemble(n, mul, 0, inverse, Some(factors.to_vec())))
    }

    /// The trivial group.
    pub fn trivial() -> Self {
        Self::assemble(1, vec![0], 0, vec![0], Some(Vec::new()))
    }

    fn assemble(n: usize, mul: Vec<usize>, identity: usize, inverse: Vec<usize>, factors: Option<Vec<u64>>) -> Self {
        let mut g = FiniteGroup {
            order: n,
            mul,
            identity,
            inverse,
            generators: Vec::new(),
            factors,
            abelianization: Abelianization { invariants: Vec::new(), coords: Vec::new() },
        };
        g.generators = match &g.factors {
            Some(f) => (0..f.len())
                .map(|i| f[..i].iter().map(|&x| x as usize).product::<usize>())
                .collect(),
            None => g.greedy_generators(),
        };
        g.abelianization = g.compute_abelianization();
        g
    }

    fn greedy_generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = self.closure(&gens);
        for x in 0..self.order {
            if !span[x] {
                gens.push(x);
                span = self.closure(&gens);
            }
        }
        gens
    }

    /// Membership mask of the subgroup generated by `gens`.
    pub fn closure(&self, gens: &[usize]) -> Vec<bool> {
        let mut seen = vec![false; self.order];
        seen[self.identity] = true;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &s in gens {
                let y = self.mul(x, s);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        seen
    }

    /// `Z^G` modulo `e_g + e_h - e_gh`: the abelianization with coordinates.
    fn compute_abelianization(&self) -> Abelianization {
        let n = self.order;
        let mut rel = IntMatrix::zeros(n, n * n);
        for g in 0..n {
            for h in 0..n {
                let c = g * n + h;
                let gh = self.mul(g, h);
                *rel.get_mut(g, c) += 1;
                *rel.get_mut(h, c) += 1;
                *rel.get_mut(gh, c) -= 1;
            }
        }
        let ab = FgAbelianGroup::cokernel(&rel);
        debug_assert!(ab.is_finite());
        let coords = (0..n)
            .map(|g| {
                let mut e = vec![BigInt::zero(); n];
                e[g] = BigInt::one();
                ab.coordinates(&e).expect("witness present")
            })
            .collect();
        Abelianization { invariants: ab.torsion().to_vec(), coords }
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    #[inline]
    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    /// Multiplication table rows.
    pub fn table(&self) -> Vec<Vec<usize>> {
        self.mul.chunks(self.order).map(<[usize]>::to_vec).collect()
    }

    /// Cyclic factors if the group was built from them.
    pub fn factors(&self) -> Option<&[u64]> {
        self.factors.as_deref()
    }

    pub fn pow(&self, g: usize, k: usize) -> usize {
        (0..k).fold(self.identity, |acc, _| self.mul(acc, g))
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> usize {
        self.elements().map(|g| self.element_order(g)).fold(1, |a, b| a.lcm(&b))
    }

    pub fn is_abelian(&self) -> bool {
        self.elements().all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// An element generating the whole group, if the group is cyclic.
    pub fn cyclic_generator(&self) -> Option<usize> {
        self.elements().find(|&g| self.element_order(g) == self.order)
    }

    pub fn is_cyclic(&self) -> bool {
        self.cyclic_generator().is_some()
    }

    /// Invariant factors of `G^ab`.
    pub fn abelianization_invariants(&self) -> &[BigInt] {
        &self.abelianization.invariants
    }

    /// Image of `g` in `G^ab`, in normal-form coordinates.
    pub fn abelianization_coords(&self, g: usize) -> &[BigInt] {
        &self.abelianization.coords[g]
    }

    /// Textual key of an element used in input files.
    pub fn element_key(&self, g: usize) -> String {
        match &self.factors {
            Some(f) if !f.is_empty() => {
                let mut x = g;
                let digits: Vec<String> = f
                    .iter()
                    .map(|&d| {
                        let r = x % d as usize;
                        x /= d as usize;
                        r.to_string()
                    })
                    .collect();
                digits.join(",")
            }
            _ => g.to_string(),
        }
    }

    pub fn parse_key(&self, key: &str) -> Option<usize> {
        self.elements().find(|&g| self.element_key(g) == key.trim().replace(' ', ""))
    }
}

/// A homomorphism `G -> Q/Z`, stored by its values in `[0, 1)`. Through
/// `t -> exp(2 pi i t)` these are the characters `G -> C*`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QmodZCharacter {
    values: Vec<BigRational>,
}

fn frac(x: &BigRational) -> BigRational {
    x - BigRational::from_integer(x.floor().to_integer())
}

impl QmodZCharacter {
    pub fn trivial(g: &FiniteGroup) -> Self {
        QmodZCharacter { values: vec![BigRational::zero(); g.order()] }
    }

    /// Checks the homomorphism property; values are reduced mod 1.
    pub fn from_values(g: &FiniteGroup, values: Vec<BigRational>) -> Result<Self, GroupError> {
        if values.len() != g.order() {
            return Err(GroupError::NotAHomomorphism(format!(
                "expected {} values, found {}",
                g.order(),
                values.len()
            )));
        }
        let values: Vec<BigRational> = values.iter().map(frac).collect();
        for a in g.elements() {
            for b in g.elements() {
                if frac(&(&values[a] + &values[b])) != values[g.mul(a, b)] {
                    return Err(GroupError::NotAHomomorphism(format!("fails on ({a}, {b})")));
                }
            }
        }
        Ok(QmodZCharacter { values })
    }

    /// Extends values prescribed on `g.generators()` to a homomorphism.
    pub fn from_generator_values(g: &FiniteGroup, gen_values: &[BigRational]) -> Result<Self, GroupError> {
        let gens = g.generators();
        if gen_values.len() != gens.len() {
            return Err(GroupError::NotAHomomorphism(format!(
                "expected {} generator values, found {}",
                gens.len(),
                gen_values.len()
            )));
        }
        let mut values: Vec<Option<BigRational>> = vec![None; g.order()];
        values[g.identity()] = Some(BigRational::zero());
        let mut queue = VecDeque::from([g.identity()]);
        while let Some(x) = queue.pop_front() {
            let vx = values[x].clone().expect("visited");
            for (&s, vs) in gens.iter().zip(gen_values) {
                let y = g.mul(x, s);
                let vy = frac(&(&vx + vs));
                match &values[y] {
                    None => {
                        values[y] = Some(vy);
                        queue.push_back(y);
                    }
                    Some(old) if *old != vy => {
                        return Err(GroupError::NotAHomomorphism(format!(
                            "generator values are inconsistent at element {}",
                            g.element_key(y)
                        )));
                    }
                    Some(_) => {}
                }
            }
        }
        let values = values.into_iter().map(|v| v.expect("generators span the group")).collect();
        Self::from_values(g, values)
    }

    pub fn value(&self, g: usize) -> &BigRational {
        &self.values[g]
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    pub fn generator_values(&self, g: &FiniteGroup) -> Vec<BigRational> {
        g.generators().iter().map(|&s| self.values[s].clone()).collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    /// `chi = conj(chi)`, i.e. every value is `0` or `1/2`.
    pub fn is_real_valued(&self) -> bool {
        self.values.iter().all(|v| frac(&(v * BigRational::from_integer(2.into()))).is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        QmodZCharacter { values: self.values.iter().zip(&other.values).map(|(a, b)| frac(&(a + b))).collect() }
    }

    /// `k * chi`.
    pub fn times(&self, k: i64) -> Self {
        let k = BigRational::from_integer(k.into());
        QmodZCharacter { values: self.values.iter().map(|a| frac(&(a * &k))).collect() }
    }

    /// The complex conjugate character.
    pub fn conj(&self) -> Self {
        self.times(-1)
    }

    /// Order in the character group.
    pub fn order(&self) -> u64 {
        let l = self.values.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        l.try_into().expect("order fits in u64")
    }
}

impl fmt::Debug for QmodZCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.values.iter().map(format_rational).collect();
        write!(f, "chi[{}]", v.join(", "))
    }
}

/// All `|G|` characters of an abelian group, trivial first.
pub fn character_group(g: &FiniteGroup) -> Result<Vec<QmodZCharacter>, GroupError> {
    if !g.is_abelian() {
        return Err(GroupError::NotAbelian);
    }
    Ok(abelianization_characters(g))
}

/// Characters of `G^ab` pulled back to `G`; these are all of `Hom(G, Q/Z)`.
pub fn abelianization_characters(g: &FiniteGroup) -> Vec<QmodZCharacter> {
    let inv = g.abelianization_invariants();
    let total: usize = inv.iter().map(|d| usize::try_from(d).expect("small factor")).product();
    (0..total)
        .map(|mut idx| {
            // mixed-radix digits c_i in Z/d_i, first fastest
            let c: Vec<BigInt> = inv
                .iter()
                .map(|d| {
                    let d = usize::try_from(d).expect("small factor");
                    let r = idx % d;
                    idx /= d;
                    BigInt::from(r)
                })
                .collect();
            let values = g
                .elements()
                .map(|x| {
                    let coords = g.abelianization_coords(x);
                    let v = c
                        .iter()
                        .zip(coords)
                        .zip(inv)
                        .fold(BigRational::zero(), |acc, ((ci, xi), d)| acc + BigRational::new(ci * xi, d.clone()));
                    frac(&v)
                })
                .collect();
            QmodZCharacter { values }
        })
        .collect()
}
