//! Random generators shared by the integration tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;

use hyperell::algebra::rational::inverse;
use hyperell::algebra::{IntMatrix, RatVector};
use hyperell::cohomology::GModule;
use hyperell::crystal::{validate, CrystalData, TangentCharacter};
use hyperell::group::{FiniteGroup, QmodZCharacter};

/// Cyclotomic polynomials, constant term first, for the orders used here.
pub fn cyclotomic(d: u64) -> Vec<i64> {
    match d {
        1 => vec![-1, 1],
        2 => vec![1, 1],
        3 => vec![1, 1, 1],
        4 => vec![1, 0, 1],
        5 => vec![1, 1, 1, 1, 1],
        6 => vec![1, -1, 1],
        7 => vec![1, 1, 1, 1, 1, 1, 1],
        8 => vec![1, 0, 0, 0, 1],
        9 => vec![1, 0, 0, 1, 0, 0, 1],
        10 => vec![1, -1, 1, -1, 1],
        11 => vec![1; 11],
        12 => vec![1, 0, -1, 0, 1],
        _ => panic!("no table entry for {d}"),
    }
}

fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut c = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            c[i + j] += x * y;
        }
    }
    c
}

/// Companion matrix of a monic polynomial given constant term first.
pub fn companion(f: &[i64]) -> Vec<Vec<i64>> {
    let k = f.len() - 1;
    let mut c = vec![vec![0; k]; k];
    for i in 1..k {
        c[i][i - 1] = 1;
    }
    for i in 0..k {
        c[i][k - 1] = -f[i];
    }
    c
}

pub fn int_matrix(rows: &[Vec<i64>]) -> IntMatrix {
    IntMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
}

fn block_diag(blocks: &[Vec<Vec<i64>>]) -> Vec<Vec<i64>> {
    let n: usize = blocks.iter().map(Vec::len).sum();
    let mut m = vec![vec![0; n]; n];
    let mut o = 0;
    for b in blocks {
        for (i, row) in b.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                m[o + i][o + j] = x;
            }
        }
        o += b.len();
    }
    m
}

pub fn divisors(m: u64) -> Vec<u64> {
    (1..=m).filter(|d| m.is_multiple_of(*d)).collect()
}

/// A block of a cyclic action: the companion matrix of a product of distinct
/// cyclotomic polynomials, so it is generally not a direct sum over Z.
#[derive(Clone, Debug)]
pub struct Block {
    pub orders: Vec<u64>,
}

impl Block {
    pub fn rank(&self) -> usize {
        self.orders.iter().map(|&d| cyclotomic(d).len() - 1).sum()
    }

    pub fn matrix(&self) -> Vec<Vec<i64>> {
        let f = self.orders.iter().fold(vec![1], |acc, &d| poly_mul(&acc, &cyclotomic(d)));
        companion(&f)
    }
}

/// A random block with factors among the divisors of `m`, of rank at most `budget`.
pub fn random_block<R: Rng>(rng: &mut R, m: u64, budget: usize) -> Option<Block> {
    let mut ds = divisors(m);
    ds.shuffle(rng);
    let take = rng.gen_range(1..=ds.len().min(3));
    let mut orders = Vec::new();
    let mut rank = 0;
    for d in ds.into_iter().take(take) {
        let k = cyclotomic(d).len() - 1;
        if rank + k <= budget {
            orders.push(d);
            rank += k;
        }
    }
    if orders.is_empty() {
        None
    } else {
        orders.sort();
        Some(Block { orders })
    }
}

/// A random unimodular matrix with its inverse, as a product of shears and a permutation.
pub fn random_unimodular<R: Rng>(rng: &mut R, n: usize) -> (IntMatrix, IntMatrix) {
    let mut s = IntMatrix::identity(n);
    if n >= 2 {
        for _ in 0..rng.gen_range(0..=2 * n) {
            let i = rng.gen_range(0..n);
            let mut j = rng.gen_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            let c: i64 = *[-2, -1, 1, 2].choose(rng).unwrap();
            let mut e = IntMatrix::identity(n);
            e.set(i, j, BigInt::from(c));
            s = &s * &e;
        }
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(rng);
        let p = IntMatrix::from_fn(n, n, |i, j| BigInt::from((perm[i] == j) as i64));
        s = &s * &p;
    }
    let inv = inverse(&s.to_rat()).expect("unimodular").to_int().expect("integral inverse");
    (s, inv)
}

/// Powers `L^0, ..., L^(m-1)` of `S^-1 L S` for the block diagonal `L`.
pub fn cyclic_action<R: Rng>(rng: &mut R, blocks: &[Block], m: usize) -> Vec<IntMatrix> {
    let l = int_matrix(&block_diag(&blocks.iter().map(Block::matrix).collect::<Vec<_>>()));
    let (s, s_inv) = random_unimodular(rng, l.rows());
    let conj = &(&s_inv * &l) * &s;
    (0..m).map(|k| conj.pow(k as u32)).collect()
}

/// A random lattice module for `Z/m` of rank at most `max_rank`.
pub fn random_cyclic_module<R: Rng>(rng: &mut R, m: u64, max_rank: usize) -> GModule {
    let group = FiniteGroup::abelian(&[m]).unwrap();
    let mut blocks = Vec::new();
    let mut rank = 0;
    let target = rng.gen_range(1..=max_rank);
    while rank < target {
        match random_block(rng, m, target - rank) {
            Some(b) => {
                rank += b.rank();
                blocks.push(b);
            }
            None => break,
        }
    }
    if blocks.is_empty() {
        blocks.push(Block { orders: vec![1] });
    }
    let action = cyclic_action(rng, &blocks, m as usize);
    let action = group.elements().map(|g| action[element_exponent(&group, g)].clone()).collect();
    GModule::lattice(&group, action).unwrap()
}

/// The `k` with `g = gen^k` in a cyclic group.
pub fn element_exponent(group: &FiniteGroup, g: usize) -> usize {
    let gen = group.cyclic_generator().expect("cyclic");
    (0..group.order()).find(|&k| group.pow(gen, k) == g).expect("generator powers cover the group")
}

fn lcm(a: u64, b: u64) -> u64 {
    a / num_integer::gcd(a, b) * b
}

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// A random valid datum with cyclic `G = Z/m`: the action is a sum of
/// companion blocks with an even-dimensional fixed part and an even number of
/// `-1` eigenvalues, conjugated by a random unimodular matrix. Translations are
/// sampled in `(1/m) Z^r` until closure and freeness hold; the tangent
/// characters are a random admissible split.
pub fn random_bdf<R: Rng>(rng: &mut R, m: u64, max_rank: usize) -> CrystalData {
    let group = FiniteGroup::abelian(&[m]).unwrap();
    'outer: loop {
        let mut blocks = Vec::new();
        let mut rank = 0;
        let target = rng.gen_range(4..=max_rank);
        while rank < target {
            match random_block(rng, m, target - rank) {
                Some(b) => {
                    rank += b.rank();
                    blocks.push(b);
                }
                None => break,
            }
        }
        let count = |d: u64| blocks.iter().flat_map(|b| b.orders.iter()).filter(|&&x| x == d).count();
        let order = blocks.iter().flat_map(|b| b.orders.iter()).fold(1, |a, &d| lcm(a, d));
        if order != m || count(1) < 2 || count(1) % 2 == 1 || count(2) % 2 == 1 || rank > max_rank || rank % 2 == 1 {
            continue;
        }
        let powers = cyclic_action(rng, &blocks, m as usize);
        let linear: Vec<IntMatrix> = group.elements().map(|g| powers[element_exponent(&group, g)].clone()).collect();

        // multiplicity of the character k/m in the rational representation
        let mult: Vec<usize> = (0..m)
            .map(|k| {
                let d = m / num_integer::gcd(k, m);
                count(d)
            })
            .collect();
        let mut p = vec![0usize; m as usize];
        for k in 0..m as usize {
            let kk = (m as usize - k) % m as usize;
            if kk == k {
                p[k] = mult[k] / 2;
            } else if k < kk {
                p[k] = rng.gen_range(0..=mult[k]);
                p[kk] = mult[k] - p[k];
            }
        }
        let tangent: Vec<TangentCharacter> = (0..m as usize)
            .filter(|&k| p[k] > 0)
            .map(|k| TangentCharacter {
                character: QmodZCharacter::from_generator_values(&group, &[rat(k as i64, m as i64)]).unwrap(),
                multiplicity: p[k],
            })
            .collect();

        for _ in 0..200 {
            let u: RatVector = (0..rank).map(|_| rat(rng.gen_range(0..m as i64), m as i64)).collect();
            // u_{g^k} = sum_{j<k} L^j u
            let mut partial = vec![rat(0, 1); rank];
            let mut by_power = Vec::with_capacity(m as usize);
            for k in 0..m as usize {
                by_power.push(partial.clone());
                let lu = powers[k].to_rat().mul_vec(&u);
                partial = partial.iter().zip(&lu).map(|(a, b)| a + b).collect();
            }
            if !partial.iter().all(BigRational::is_integer) {
                continue;
            }
            let translation = group.elements().map(|g| by_power[element_exponent(&group, g)].clone()).collect();
            let Ok(d) = CrystalData::new(group.clone(), linear.clone(), translation, None, Some(tangent.clone())) else {
                continue;
            };
            if validate(&d).is_valid() {
                return d;
            }
        }
        continue 'outer;
    }
}

/// Independent test for `c_1(L_chi) = 0`: the flat bundle of `chi` has zero
/// first Chern class iff `chi`, pulled back to `Gamma^ab`, kills its torsion.
pub fn c1_vanishes_via_gamma(d: &CrystalData, chi: &QmodZCharacter) -> bool {
    let gab = hyperell::crystal::gamma_abelianized(d);
    let w = gab.witness().expect("cokernel carries a witness");
    let r = d.rank();
    (0..gab.torsion().len()).all(|i| {
        let value: BigRational = d
            .group()
            .elements()
            .map(|g| chi.value(g) * BigRational::from_integer(w.lifts.get(r + g, i).clone()))
            .fold(BigRational::from_integer(BigInt::from(0)), |a, b| a + b);
        value.is_integer()
    })
}
