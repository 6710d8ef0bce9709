//! Kernels by elimination modulo word-size primes.
//!
//! The kernel is computed modulo several primes, lifted by Chinese
//! remaindering and rational reconstruction, and every lifted vector is then
//! checked exactly against the integer rows. Over any prime the kernel is at
//! least as large as over the rationals, so `dim` verified independent
//! vectors prove the lift is the whole rational kernel.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::SparseRow;
use super::rational::Rational;

const MAX_PRIMES: usize = 200;

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// The `MAX_PRIMES` largest primes below `2^31`, largest first.
fn primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        (1u64..(1 << 31))
            .rev()
            .filter(|&n| n % 2 == 1 && is_prime(n))
            .take(MAX_PRIMES)
            .collect()
    })
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn reduce(x: &BigInt, p: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(p));
    u64::try_from(r).expect("residue fits")
}

/// Echelon form modulo `p` with monic, dense pivot rows.
struct ModEchelon {
    p: u64,
    cols: usize,
    pivots: BTreeMap<usize, Vec<u64>>,
}

impl ModEchelon {
    fn insert(&mut self, sparse: &[(usize, u64)]) {
        let p = self.p;
        let Some(&(first, _)) = sparse.first() else {
            return;
        };
        let mut row = vec![0u64; self.cols];
        for &(c, a) in sparse {
            row[c] = a;
        }
        for c in first..self.cols {
            let a = row[c];
            if a == 0 {
                continue;
            }
            match self.pivots.get(&c) {
                Some(pivot) => {
                    let neg = p - a;
                    for (x, &y) in row[c..].iter_mut().zip(&pivot[c..]) {
                        *x = (*x + neg * y) % p;
                    }
                }
                None => {
                    let inv = inv_mod(a, p);
                    for x in row[c..].iter_mut() {
                        *x = *x * inv % p;
                    }
                    self.pivots.insert(c, row);
                    return;
                }
            }
        }
    }

    /// One vector per free column `f`: 1 at `f`, 0 at the other free
    /// columns.
    fn null_space(&self) -> (Vec<usize>, Vec<Vec<u64>>) {
        let p = self.p;
        let cols = self.cols;
        let free: Vec<usize> = (0..cols).filter(|c| !self.pivots.contains_key(c)).collect();
        let basis = free
            .iter()
            .map(|&f| {
                let mut v = vec![0u64; cols];
                v[f] = 1;
                for (&pc, row) in self.pivots.range(..f).rev() {
                    let mut s = 0u64;
                    for c in pc + 1..cols {
                        if v[c] != 0 && row[c] != 0 {
                            s = (s + row[c] * v[c]) % p;
                        }
                    }
                    v[pc] = (p - s) % p;
                }
                v
            })
            .collect();
        (free, basis)
    }
}

/// `r/s` with `r = s * a (mod m)` and `|r|, s <= sqrt(m / 2)`, if any.
fn rational_reconstruction(a: &BigInt, m: &BigInt) -> Option<Rational> {
    let bound = (m >> 1usize).sqrt();
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut s0, mut s1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let s2 = &s0 - &q * &s1;
        r0 = std::mem::replace(&mut r1, r2);
        s0 = std::mem::replace(&mut s1, s2);
    }
    if s1.is_zero() || s1.abs() > bound || !r1.gcd(&s1).is_one() {
        return None;
    }
    Some(Rational::new(r1, s1))
}

/// Word-size version of [`rational_reconstruction`] for `m < 2^126`.
fn rational_reconstruction_small(a: i128, m: i128) -> Option<(i128, i128)> {
    let bound = isqrt(m / 2);
    let (mut r0, mut r1) = (m, a.rem_euclid(m));
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 > bound {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if s1 == 0 || s1.abs() > bound || r1.gcd(&s1) != 1 {
        return None;
    }
    Some((r1, s1))
}

fn isqrt(n: i128) -> i128 {
    let mut x = (n as f64).sqrt() as i128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

fn reconstruct_all(residues: &[Vec<BigInt>], modulus: &BigInt) -> Option<Vec<Vec<Rational>>> {
    if modulus.bits() <= 125 {
        let m = i128::try_from(modulus).expect("fits");
        residues
            .iter()
            .map(|res| {
                res.iter()
                    .map(|x| {
                        let a = i128::try_from(x).expect("residue below modulus");
                        if a == 0 {
                            return Some(Rational::zero());
                        }
                        rational_reconstruction_small(a, m)
                            .map(|(r, s)| Rational::new(BigInt::from(r), BigInt::from(s)))
                    })
                    .collect()
            })
            .collect()
    } else {
        residues
            .iter()
            .map(|res| res.iter().map(|x| rational_reconstruction(x, modulus)).collect())
            .collect()
    }
}

fn satisfies(rows: &[SparseRow], v: &[Rational]) -> bool {
    let den = super::rational::common_denominator(v.iter());
    let w: Vec<BigInt> = v.iter().map(|q| q.numer() * (&den / q.denom())).collect();
    rows.iter().all(|r| {
        r.entries()
            .iter()
            .fold(BigInt::zero(), |acc, (c, a)| if w[*c].is_zero() { acc } else { acc + a * &w[*c] })
            .is_zero()
    })
}

/// Kernel basis normalized to the identity on the free columns, or `None`
/// if no verified lift was found within the prime budget.
pub(crate) fn kernel_modular(cols: usize, rows: &[SparseRow]) -> Option<Vec<Vec<Rational>>> {
    // best (fewest free columns, then lexicographically smallest) pattern
    // seen so far, with its accumulated residues
    let mut free_cols: Option<Vec<usize>> = None;
    let mut modulus = BigInt::one();
    let mut residues: Vec<Vec<BigInt>> = Vec::new();
    for &p in primes() {
        let mut ech = ModEchelon {
            p,
            cols,
            pivots: BTreeMap::new(),
        };
        for r in rows {
            let row: Vec<(usize, u64)> = r
                .entries()
                .iter()
                .map(|(c, a)| (*c, reduce(a, p)))
                .filter(|(_, a)| *a != 0)
                .collect();
            ech.insert(&row);
            if ech.pivots.len() == cols {
                return Some(Vec::new());
            }
        }
        let (free, basis) = ech.null_space();
        match &free_cols {
            Some(prev) if free.len() > prev.len() || (free.len() == prev.len() && free > *prev) => continue,
            Some(prev) if *prev == free => {}
            _ => {
                free_cols = Some(free.clone());
                modulus = BigInt::one();
                residues = vec![vec![BigInt::zero(); cols]; free.len()];
            }
        }
        let pb = BigInt::from(p);
        // x = r (mod M), x = b (mod p)  =>  x = r + M * ((b - r) * M^-1 mod p)
        let m_inv = inv_mod(reduce(&modulus, p), p);
        for (res, b) in residues.iter_mut().zip(&basis) {
            for (x, &bv) in res.iter_mut().zip(b) {
                let xr = reduce(x, p);
                let t = (bv + p - xr) % p * m_inv % p;
                if t != 0 {
                    *x += &modulus * BigInt::from(t);
                }
            }
        }
        modulus *= &pb;

        if let Some(vs) = reconstruct_all(&residues, &modulus) {
            if vs.iter().all(|v| satisfies(rows, v)) {
                return Some(vs);
            }
        }
    }
    None
}
