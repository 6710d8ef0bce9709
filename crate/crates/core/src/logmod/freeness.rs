//! Freeness decisions against a hypothesized exponent multiset.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::derivation::Derivation;
use super::graded::{graded_dimension, spanning_set, DerivationSpace};
use super::saito::saito_constant;
use super::LogTarget;
use crate::error::{Error, Result};
use crate::exactalg::{monomials_of_degree, Echelon, Polynomial, Rational};

pub const DEFAULT_SEED: u64 = 20240517;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreenessOptions {
    /// Highest degree whose graded piece is computed. `None` means one more
    /// than the largest hypothesized exponent.
    pub max_degree: Option<u32>,
    pub seed: u64,
    pub trials: usize,
}

impl Default for FreenessOptions {
    fn default() -> Self {
        FreenessOptions {
            max_degree: None,
            seed: DEFAULT_SEED,
            trials: 5,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FreenessStatus {
    Free,
    NotFree,
    Unknown,
}

/// A degree by which every exponent multiset of the right size and sum has
/// been contradicted by the observed graded dimensions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FreenessCertificate {
    pub degree: u32,
    pub observed_dimension: usize,
    /// Dimension a free module with the hypothesized exponents would have.
    pub hypothesized_dimension: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FreenessVerdict {
    pub status: FreenessStatus,
    /// Sorted exponents when free, empty otherwise.
    pub exponents: Vec<u32>,
    pub certificate_degree: Option<u32>,
    pub certificate: Option<FreenessCertificate>,
    /// Graded dimensions at degrees `0..=max_degree`.
    pub dimensions: Vec<usize>,
    /// Saito-verified basis when free.
    pub basis: Vec<Derivation>,
    #[serde(with = "opt_rational")]
    pub saito_constant: Option<Rational>,
}

mod opt_rational {
    use super::Rational;
    use crate::exactalg::{format_rational, parse_rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match q {
            Some(q) => s.serialize_some(&format_rational(q)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| parse_rational(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}

fn binomial(n: i64, k: i64) -> i128 {
    if k < 0 || n < k {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    acc
}

/// `dim` of the degree-`d` piece of a free module of rank `n` with the
/// given exponents.
pub fn free_hilbert_function(exponents: &[u32], n: usize, d: u32) -> usize {
    exponents
        .iter()
        .map(|&e| {
            if d < e {
                0
            } else {
                binomial((d - e) as i64 + n as i64 - 1, n as i64 - 1) as usize
            }
        })
        .sum()
}

/// Whether some multiset of `n` nonnegative integers with sum `total`
/// reproduces `dims[0..=upto]` as a free Hilbert function.
///
/// Multiplying the Hilbert series by `(1-t)^n` recovers, degree by degree,
/// how many exponents each degree must hold; the rest must fit above `upto`.
fn some_multiset_fits(dims: &[usize], n: usize, total: usize, upto: usize) -> bool {
    let mut count = 0i128;
    let mut sum = 0i128;
    for d in 0..=upto {
        let mut nd = 0i128;
        for j in 0..=d.min(n) {
            let term = binomial(n as i64, j as i64) * dims[d - j] as i128;
            nd += if j % 2 == 0 { term } else { -term };
        }
        if nd < 0 {
            return false;
        }
        count += nd;
        sum += nd * d as i128;
    }
    let (n, total) = (n as i128, total as i128);
    if count > n || sum > total {
        return false;
    }
    let rest = n - count;
    let room = total - sum;
    if rest == 0 {
        room == 0
    } else {
        room >= rest * (upto as i128 + 1)
    }
}

/// Smallest degree by which every admissible multiset is contradicted.
fn refuting_degree(dims: &[usize], n: usize, total: usize) -> Option<usize> {
    (0..dims.len()).find(|&d| !some_multiset_fits(dims, n, total, d))
}

/// Decides freeness of `target`, trying to realize `hypothesized` as the
/// degrees of a basis.
pub fn decide_freeness<T: LogTarget + Sync + ?Sized>(
    target: &T,
    hypothesized: &[u32],
    options: &FreenessOptions,
) -> Result<FreenessVerdict> {
    let n = target.arity();
    let total = target.total_multiplicity();
    let sum: usize = hypothesized.iter().map(|&e| e as usize).sum();
    if sum != total {
        return Err(Error::DegreeSumMismatch { got: sum, expected: total });
    }
    if hypothesized.len() != n {
        return Err(Error::InvalidParameter(format!(
            "{} hypothesized exponents for a module of rank {n}",
            hypothesized.len()
        )));
    }
    let top = hypothesized.iter().copied().max().unwrap_or(0);
    let max_degree = options.max_degree.unwrap_or(top + 1);
    if max_degree < top {
        return Err(Error::InvalidParameter(format!(
            "search cap {max_degree} is below the largest hypothesized exponent {top}"
        )));
    }

    let dimensions: Vec<usize> = (0..=max_degree)
        .into_par_iter()
        .map(|d| graded_dimension(target, d))
        .collect::<Result<_>>()?;

    let mut verdict = FreenessVerdict {
        status: FreenessStatus::Unknown,
        exponents: Vec::new(),
        certificate_degree: None,
        certificate: None,
        dimensions,
        basis: Vec::new(),
        saito_constant: None,
    };

    if let Some(d) = refuting_degree(&verdict.dimensions, n, total) {
        verdict.status = FreenessStatus::NotFree;
        verdict.certificate_degree = Some(d as u32);
        verdict.certificate = Some(FreenessCertificate {
            degree: d as u32,
            observed_dimension: verdict.dimensions[d],
            hypothesized_dimension: free_hilbert_function(hypothesized, n, d as u32),
        });
        return Ok(verdict);
    }

    let mut sorted = hypothesized.to_vec();
    sorted.sort_unstable();
    let mut distinct = sorted.clone();
    distinct.dedup();
    let spanning: BTreeMap<u32, Vec<Derivation>> = distinct
        .par_iter()
        .map(|&e| Ok((e, spanning_set(target, e)?)))
        .collect::<Result<_>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    for _ in 0..options.trials {
        let Some(candidate) = generic_generators(n, &spanning, &sorted, &mut rng)? else {
            break;
        };
        if let Some(c) = saito_constant(&candidate, target)? {
            verdict.status = FreenessStatus::Free;
            verdict.exponents = sorted;
            verdict.basis = candidate;
            verdict.saito_constant = Some(c);
            return Ok(verdict);
        }
    }
    Ok(verdict)
}

/// Picks, degree by degree, random combinations of the graded basis that are
/// independent modulo multiples of the generators already chosen. `None`
/// when some quotient is too small, which no retry can fix.
fn generic_generators(
    n: usize,
    spanning: &BTreeMap<u32, Vec<Derivation>>,
    exponents: &[u32],
    rng: &mut ChaCha8Rng,
) -> Result<Option<Vec<Derivation>>> {
    let mut wanted: BTreeMap<u32, usize> = BTreeMap::new();
    for &e in exponents {
        *wanted.entry(e).or_default() += 1;
    }
    let mut chosen: Vec<Derivation> = Vec::new();
    for (&e, &count) in &wanted {
        let space = DerivationSpace::new(n, e);
        let mut lower = Echelon::new(space.dim());
        for theta in &chosen {
            for m in monomials_of_degree(n, e - theta.degree()) {
                let multiple = theta.mul_poly(&Polynomial::term(m, Rational::from_integer(1.into())))?;
                lower.insert_rational(&space.to_vector(&multiple)?);
            }
        }
        let basis: Vec<Vec<Rational>> = spanning[&e]
            .iter()
            .map(|t| space.to_vector(t))
            .collect::<Result<_>>()?;
        let mut probe = lower.clone();
        let quotient = basis.iter().filter(|v| probe.insert_rational(v)).count();
        if quotient < count {
            return Ok(None);
        }
        let mut picked = 0;
        let mut attempts = 0;
        while picked < count {
            attempts += 1;
            if attempts > 50 * count {
                return Ok(None);
            }
            let mut v = vec![Rational::zero(); space.dim()];
            for b in &basis {
                let r = Rational::from_integer(rng.gen_range(-9i64..=9).into());
                if r.is_zero() {
                    continue;
                }
                for (x, y) in v.iter_mut().zip(b) {
                    if !y.is_zero() {
                        *x += &r * y;
                    }
                }
            }
            if lower.insert_rational(&v) {
                chosen.push(space.from_vector(&v));
                picked += 1;
            }
        }
    }
    Ok(Some(chosen))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{added_root, b_gamma, cone, deleted_root, shi_arrangement, Sign};
    use crate::logmod::graded_derivations;
    use crate::rootsys::{build_root_system, Family};

    fn multisets(n: usize, total: usize, min: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return if total == 0 { vec![vec![]] } else { vec![] };
        }
        (min..=total)
            .flat_map(|first| {
                multisets(n - 1, total - first, first).into_iter().map(move |mut rest| {
                    rest.insert(0, first);
                    rest
                })
            })
            .collect()
    }

    #[test]
    fn fit_test_matches_enumeration() {
        let cases: Vec<(usize, usize, Vec<usize>)> = vec![
            (3, 7, vec![0, 1, 3, 8, 15]),
            (3, 7, vec![0, 1, 3, 6, 10]),
            (3, 8, vec![0, 1, 3, 6, 12]),
            (2, 4, vec![0, 0, 1, 2, 4, 6]),
            (3, 8, vec![0, 1, 3, 7, 13, 21]),
        ];
        for (n, total, dims) in cases {
            for upto in 0..dims.len() {
                let brute = multisets(n, total, 0).iter().any(|ms| {
                    let e: Vec<u32> = ms.iter().map(|&x| x as u32).collect();
                    (0..=upto).all(|d| free_hilbert_function(&e, n, d as u32) == dims[d])
                });
                assert_eq!(some_multiset_fits(&dims, n, total, upto), brute, "{dims:?} upto {upto}");
            }
        }
    }

    #[test]
    fn a2_cone_is_free() {
        let rs = build_root_system(Family::A, 2).unwrap();
        let c = cone(&shi_arrangement(&rs, 1).unwrap());
        let v = decide_freeness(&c, &[1, 3, 3], &FreenessOptions::default()).unwrap();
        assert_eq!(v.status, FreenessStatus::Free);
        assert_eq!(v.exponents, vec![1, 3, 3]);
        assert!(v.saito_constant.is_some());
        assert!(matches!(
            decide_freeness(&c, &[1, 3, 4], &FreenessOptions::default()),
            Err(Error::DegreeSumMismatch { got: 8, expected: 7 })
        ));
    }

    #[test]
    fn a2_gamma_plus_is_free() {
        let rs = build_root_system(Family::A, 2).unwrap();
        let b = b_gamma(&rs, 1, &[1], Sign::Plus).unwrap();
        let v = decide_freeness(&b, &[1, 3, 4], &FreenessOptions::default()).unwrap();
        assert_eq!(v.status, FreenessStatus::Free);
    }

    #[test]
    fn a2_highest_root_edits_are_not_free() {
        let rs = build_root_system(Family::A, 2).unwrap();
        let added = added_root(&rs, 1, &[1, 1]).unwrap();
        let v = decide_freeness(&added, &[1, 3, 4], &FreenessOptions::default()).unwrap();
        assert_eq!(v.status, FreenessStatus::NotFree);
        let d = v.certificate_degree.unwrap();
        let again = graded_derivations(&added, d, false).unwrap().dimension();
        assert_eq!(again, v.certificate.unwrap().observed_dimension);

        let deleted = deleted_root(&rs, 1, &[1, 1]).unwrap();
        let v = decide_freeness(&deleted, &[1, 2, 3], &FreenessOptions::default()).unwrap();
        assert_eq!(v.status, FreenessStatus::NotFree);

        let deleted = deleted_root(&rs, 1, &[1, 0]).unwrap();
        let v = decide_freeness(&deleted, &[1, 2, 3], &FreenessOptions::default()).unwrap();
        assert_eq!(v.status, FreenessStatus::Free);
    }

    #[test]
    fn verdict_json_fields() {
        let rs = build_root_system(Family::A, 1).unwrap();
        let c = cone(&shi_arrangement(&rs, 1).unwrap());
        let v = decide_freeness(&c, &[1, 2], &FreenessOptions::default()).unwrap();
        let j = serde_json::to_value(&v).unwrap();
        assert_eq!(j["status"], "Free");
        assert_eq!(j["exponents"], serde_json::json!([1, 2]));
        assert!(j["certificateDegree"].is_null());
    }
}
