//! Irreducible crystallographic root systems in simple-root coordinates.
//!
//! A root `sum c_j alpha_j` is stored as its integer coordinate vector
//! `(c_1, ..., c_l)`; since the coordinate functionals are the simple roots,
//! the same vector is the coefficient vector of the linear form
//! `sum c_j x_j`. Simple roots follow Bourbaki numbering; `B_l` has
//! `alpha_l` short, `C_l` has `alpha_l` long and `G2` has `alpha_1` short.
//! The invariant form is scaled so that long roots have squared length 2.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{format_rational, rat, ratio, Rational, RationalMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    G,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
            Family::G => "G",
        };
        f.write_str(s)
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Family::A),
            "B" => Ok(Family::B),
            "C" => Ok(Family::C),
            "D" => Ok(Family::D),
            "G" => Ok(Family::G),
            other => Err(Error::Unsupported {
                family: other.to_string(),
                rank: 0,
            }),
        }
    }
}

pub fn is_supported(family: Family, rank: usize) -> bool {
    match family {
        Family::A | Family::B | Family::C => (1..=4).contains(&rank),
        Family::D => rank == 4,
        Family::G => rank == 2,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSystem {
    family: Family,
    rank: usize,
    positive_roots: Vec<Vec<i64>>,
    gram_dual: RationalMatrix,
    cartan: Vec<Vec<i64>>,
    coxeter_number: usize,
    exponents: Vec<usize>,
    simple_reflections: Vec<Vec<Vec<i64>>>,
}

/// The dual basis vector `alpha_i^*` of the simple roots, acting as the
/// coordinate derivation `d/dx_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DualBasisVector {
    pub index: usize,
}

impl DualBasisVector {
    /// `<root, alpha_i^*>`, the `i`-th simple-root coordinate of `root`.
    pub fn pair(&self, root: &[i64]) -> i64 {
        root[self.index - 1]
    }
}

fn gram_for(family: Family, rank: usize) -> RationalMatrix {
    let l = rank;
    let mut g = RationalMatrix::zeros(l, l);
    let edge = |g: &mut RationalMatrix, i: usize, j: usize, v: Rational| {
        g.set(i, j, v.clone());
        g.set(j, i, v);
    };
    match family {
        Family::A => {
            for i in 0..l {
                g.set(i, i, rat(2));
            }
            for i in 0..l.saturating_sub(1) {
                edge(&mut g, i, i + 1, rat(-1));
            }
        }
        Family::B => {
            for i in 0..l {
                g.set(i, i, rat(2));
            }
            if l > 1 {
                g.set(l - 1, l - 1, rat(1));
                for i in 0..l - 1 {
                    edge(&mut g, i, i + 1, rat(-1));
                }
            }
        }
        Family::C => {
            for i in 0..l {
                g.set(i, i, rat(1));
            }
            g.set(l - 1, l - 1, rat(2));
            if l > 1 {
                for i in 0..l - 2 {
                    edge(&mut g, i, i + 1, ratio(-1, 2));
                }
                edge(&mut g, l - 2, l - 1, rat(-1));
            }
        }
        Family::D => {
            for i in 0..l {
                g.set(i, i, rat(2));
            }
            for i in 0..l - 2 {
                edge(&mut g, i, i + 1, rat(-1));
            }
            edge(&mut g, l - 3, l - 1, rat(-1));
        }
        Family::G => {
            g.set(0, 0, ratio(2, 3));
            g.set(1, 1, rat(2));
            edge(&mut g, 0, 1, rat(-1));
        }
    }
    g
}

fn cartan_from_gram(g: &RationalMatrix) -> Vec<Vec<i64>> {
    let l = g.rows();
    (0..l)
        .map(|i| {
            (0..l)
                .map(|j| {
                    let v = rat(2) * g.get(i, j) / g.get(i, i);
                    assert!(v.is_integer(), "non-integral Cartan entry");
                    i64::try_from(v.to_integer()).expect("small Cartan entry")
                })
                .collect()
        })
        .collect()
}

fn reflect(cartan: &[Vec<i64>], i: usize, root: &[i64]) -> Vec<i64> {
    let pairing: i64 = root.iter().zip(&cartan[i]).map(|(c, a)| c * a).sum();
    let mut out = root.to_vec();
    out[i] -= pairing;
    out
}

/// Closes `seed` under the simple reflections, keeping images with
/// nonnegative coordinates.
fn close_positive(cartan: &[Vec<i64>], seed: impl IntoIterator<Item = Vec<i64>>) -> BTreeSet<Vec<i64>> {
    let mut roots: BTreeSet<Vec<i64>> = seed.into_iter().collect();
    let mut frontier: Vec<Vec<i64>> = roots.iter().cloned().collect();
    while let Some(r) = frontier.pop() {
        for i in 0..cartan.len() {
            let img = reflect(cartan, i, &r);
            if img.iter().all(|&c| c >= 0) && img.iter().any(|&c| c > 0) && roots.insert(img.clone()) {
                frontier.push(img);
            }
        }
    }
    roots
}

fn height(root: &[i64]) -> i64 {
    root.iter().sum()
}

/// Exponents from the height distribution: the number of exponents `>= t`
/// equals the number of positive roots of height `t`.
fn exponents_from_heights(roots: &[Vec<i64>], rank: usize) -> Vec<usize> {
    let max_h = roots.iter().map(|r| height(r)).max().unwrap_or(0) as usize;
    let mut counts = vec![0usize; max_h + 1];
    for r in roots {
        counts[height(r) as usize] += 1;
    }
    let mut exps: Vec<usize> = (1..=rank)
        .map(|i| (1..=max_h).filter(|&t| counts[t] >= i).count())
        .collect();
    exps.sort_unstable();
    exps
}

/// Builds the root system of the given type.
pub fn build_root_system(family: Family, rank: usize) -> Result<RootSystem> {
    if !is_supported(family, rank) {
        return Err(Error::Unsupported {
            family: family.to_string(),
            rank,
        });
    }
    let gram = gram_for(family, rank);
    let cartan = cartan_from_gram(&gram);
    let simple = (0..rank).map(|i| {
        let mut e = vec![0; rank];
        e[i] = 1;
        e
    });
    let mut positive_roots: Vec<Vec<i64>> = close_positive(&cartan, simple).into_iter().collect();
    positive_roots.sort_by(|a, b| height(a).cmp(&height(b)).then_with(|| b.cmp(a)));

    let n_pos = positive_roots.len();
    let coxeter_number = 2 * n_pos / rank;
    let exponents = exponents_from_heights(&positive_roots, rank);
    let simple_reflections = (0..rank)
        .map(|i| {
            (0..rank)
                .map(|j| {
                    // s_i(x_j) = x_j - cartan(i, j) x_i
                    let mut row = vec![0; rank];
                    row[j] += 1;
                    row[i] -= cartan[i][j];
                    row
                })
                .collect()
        })
        .collect();

    Ok(RootSystem {
        family,
        rank,
        positive_roots,
        gram_dual: gram,
        cartan,
        coxeter_number,
        exponents,
        simple_reflections,
    })
}

impl RootSystem {
    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn name(&self) -> String {
        format!("{}{}", self.family, self.rank)
    }

    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive_roots
    }

    pub fn num_positive_roots(&self) -> usize {
        self.positive_roots.len()
    }

    pub fn simple_root(&self, i: usize) -> Vec<i64> {
        let mut e = vec![0; self.rank];
        e[i - 1] = 1;
        e
    }

    pub fn is_simple(&self, root: &[i64]) -> bool {
        height(root) == 1
    }

    pub fn is_positive_root(&self, root: &[i64]) -> bool {
        self.positive_roots.iter().any(|r| r == root)
    }

    /// Index (1-based) of a simple root, if `root` is simple.
    pub fn simple_index(&self, root: &[i64]) -> Option<usize> {
        if self.is_simple(root) {
            root.iter().position(|&c| c == 1).map(|p| p + 1)
        } else {
            None
        }
    }

    pub fn gram_dual(&self) -> &RationalMatrix {
        &self.gram_dual
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn coxeter_number(&self) -> usize {
        self.coxeter_number
    }

    pub fn exponents(&self) -> &[usize] {
        &self.exponents
    }

    pub fn dual_basis(&self) -> Vec<DualBasisVector> {
        (1..=self.rank).map(|index| DualBasisVector { index }).collect()
    }

    /// Matrix `R` of the simple reflection `s_i` (1-based `i`) on coordinate
    /// functionals: `s_i(x_j) = sum_m R[j][m] x_m`.
    pub fn simple_reflection_matrix(&self, i: usize) -> Result<&[Vec<i64>]> {
        if i == 0 || i > self.rank {
            return Err(Error::IndexOutOfRange {
                index: i,
                max: self.rank,
            });
        }
        Ok(&self.simple_reflections[i - 1])
    }

    /// `s_i(root)` for a 1-based simple index.
    pub fn reflect_root(&self, i: usize, root: &[i64]) -> Vec<i64> {
        reflect(&self.cartan, i - 1, root)
    }

    /// Re-runs the reflection closure from the stored positive roots.
    pub fn closure_of_positive_roots(&self) -> Vec<Vec<i64>> {
        let mut v: Vec<Vec<i64>> = close_positive(&self.cartan, self.positive_roots.iter().cloned())
            .into_iter()
            .collect();
        v.sort_by(|a, b| height(a).cmp(&height(b)).then_with(|| b.cmp(a)));
        v
    }

    /// `I*(a, b)` for roots in simple-root coordinates.
    pub fn inner_product(&self, a: &[i64], b: &[i64]) -> Rational {
        let mut s = Rational::zero();
        for (i, &ai) in a.iter().enumerate() {
            for (j, &bj) in b.iter().enumerate() {
                if ai != 0 && bj != 0 {
                    s += rat(ai * bj) * self.gram_dual.get(i, j);
                }
            }
        }
        s
    }

    pub fn is_long(&self, root: &[i64]) -> bool {
        self.inner_product(root, root) == rat(2)
    }

    pub fn to_json(&self) -> RootSystemJson {
        RootSystemJson {
            family: self.family,
            rank: self.rank,
            positive_roots: self.positive_roots.clone(),
            gram_dual: (0..self.rank)
                .map(|i| (0..self.rank).map(|j| format_rational(self.gram_dual.get(i, j))).collect())
                .collect(),
            cartan: self.cartan.clone(),
            coxeter_number: self.coxeter_number,
            exponents: self.exponents.clone(),
            simple_reflections: self.simple_reflections.clone(),
        }
    }

    /// Plain-text summary.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("root system {}\n", self.name()));
        out.push_str(&format!("positive roots ({}):\n", self.num_positive_roots()));
        for r in &self.positive_roots {
            let form = crate::exactalg::Polynomial::linear(r).to_string();
            out.push_str(&format!("  {:?}  {}\n", r, form));
        }
        out.push_str(&format!("coxeter number: {}\n", self.coxeter_number));
        out.push_str(&format!("exponents: {:?}\n", self.exponents));
        out.push_str("cartan:\n");
        for row in &self.cartan {
            out.push_str(&format!("  {row:?}\n"));
        }
        out.push_str("gram (dual):\n");
        for i in 0..self.rank {
            let row: Vec<String> = (0..self.rank).map(|j| format_rational(self.gram_dual.get(i, j))).collect();
            out.push_str(&format!("  [{}]\n", row.join(", ")));
        }
        out
    }
}

/// Serialized form of a [`RootSystem`]; matrices are row-major.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "camelCase")]
pub struct RootSystemJson {
    pub family: Family,
    pub rank: usize,
    pub positive_roots: Vec<Vec<i64>>,
    pub gram_dual: Vec<Vec<String>>,
    pub cartan: Vec<Vec<i64>>,
    pub coxeter_number: usize,
    pub exponents: Vec<usize>,
    pub simple_reflections: Vec<Vec<Vec<i64>>>,
}

/// Convenience: `true` when the leading principal minors are all positive.
pub fn is_positive_definite(m: &RationalMatrix) -> bool {
    m.leading_minors().iter().all(|d| d > &Rational::zero())
}
