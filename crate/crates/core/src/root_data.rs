//! Root systems from Cartan data: positive roots in simple-root coordinates
//! and the Killing-dual Gram matrix of the simple roots.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, ParseError, Result};
use crate::linalg::Mat;
use crate::scalar::{Surd, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Series {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Series {
    pub fn letter(self) -> char {
        match self {
            Series::A => 'A',
            Series::B => 'B',
            Series::C => 'C',
            Series::D => 'D',
            Series::E => 'E',
            Series::F => 'F',
            Series::G => 'G',
        }
    }

    pub fn admits(self, n: usize) -> bool {
        match self {
            Series::A => n >= 1,
            Series::B => n >= 2,
            Series::C => n >= 3,
            Series::D => n >= 4,
            Series::E => (6..=8).contains(&n),
            Series::F => n == 4,
            Series::G => n == 2,
        }
    }

    /// Number of positive roots of the irreducible system of rank `n`.
    pub fn positive_root_count(self, n: usize) -> usize {
        match self {
            Series::A => n * (n + 1) / 2,
            Series::B | Series::C => n * n,
            Series::D => n * (n - 1),
            Series::E => match n {
                6 => 36,
                7 => 63,
                _ => 120,
            },
            Series::F => 24,
            Series::G => 6,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Factor {
    pub series: Series,
    pub rank: usize,
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.series.letter(), self.rank)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CartanSpec {
    pub factors: Vec<Factor>,
}

impl CartanSpec {
    pub fn simple(series: Series, rank: usize) -> Self {
        CartanSpec { factors: vec![Factor { series, rank }] }
    }

    pub fn rank(&self) -> usize {
        self.factors.iter().map(|f| f.rank).sum()
    }

    pub fn validate(&self) -> Result<()> {
        if self.factors.is_empty() {
            return Err(ParseError::Schema { path: "factors".into(), message: "empty".into() }.into());
        }
        for (index, f) in self.factors.iter().enumerate() {
            if !f.series.admits(f.rank) {
                return Err(Error::Inadmissible { index, series: f.series.letter(), rank: f.rank });
            }
        }
        Ok(())
    }
}

impl fmt::Display for CartanSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join("x"))
    }
}

/// Accepts `B4`, `A2xA2`, `A2*A2` or the JSON form.
impl FromStr for CartanSpec {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, ParseError> {
        let s = s.trim();
        if s.starts_with('{') {
            return serde_json::from_str(s)
                .map_err(|e| ParseError::Schema { path: "group".into(), message: e.to_string() });
        }
        let mut factors = Vec::new();
        for (i, part) in s.split(['x', '*', '×']).enumerate() {
            let part = part.trim();
            let bad = || ParseError::Schema {
                path: format!("factors[{i}]"),
                message: format!("cannot parse `{part}`"),
            };
            let mut chars = part.chars();
            let series = match chars.next().map(|c| c.to_ascii_uppercase()) {
                Some('A') => Series::A,
                Some('B') => Series::B,
                Some('C') => Series::C,
                Some('D') => Series::D,
                Some('E') => Series::E,
                Some('F') => Series::F,
                Some('G') => Series::G,
                _ => return Err(bad()),
            };
            let rank = chars.as_str().trim_start_matches('_').parse().map_err(|_| bad())?;
            factors.push(Factor { series, rank });
        }
        Ok(CartanSpec { factors })
    }
}

/// W-invariant inner product on the simple roots of one irreducible factor
/// (Bourbaki numbering), scaled so that all entries are small rationals.
fn dynkin_form(f: Factor) -> Vec<Vec<Q>> {
    let n = f.rank;
    let q = |a: i128, b: i128| Q::new(a, b);
    let mut s = vec![vec![Q::zero(); n]; n];
    let link = |s: &mut Vec<Vec<Q>>, i: usize, j: usize, v: Q| {
        s[i][j] = v;
        s[j][i] = v;
    };
    match f.series {
        Series::A | Series::D | Series::E => {
            for row in s.iter_mut().enumerate() {
                row.1[row.0] = q(2, 1);
            }
            match f.series {
                Series::A => (0..n - 1).for_each(|i| link(&mut s, i, i + 1, q(-1, 1))),
                Series::D => {
                    (0..n - 2).for_each(|i| link(&mut s, i, i + 1, q(-1, 1)));
                    link(&mut s, n - 3, n - 1, q(-1, 1));
                }
                _ => {
                    link(&mut s, 0, 2, q(-1, 1));
                    link(&mut s, 1, 3, q(-1, 1));
                    (2..n - 1).for_each(|i| link(&mut s, i, i + 1, q(-1, 1)));
                }
            }
        }
        Series::B => {
            (0..n).for_each(|i| s[i][i] = q(2, 1));
            s[n - 1][n - 1] = q(1, 1);
            (0..n - 1).for_each(|i| link(&mut s, i, i + 1, q(-1, 1)));
        }
        Series::C => {
            (0..n).for_each(|i| s[i][i] = q(2, 1));
            s[n - 1][n - 1] = q(4, 1);
            (0..n - 2).for_each(|i| link(&mut s, i, i + 1, q(-1, 1)));
            link(&mut s, n - 2, n - 1, q(-2, 1));
        }
        Series::F => {
            let d = [2, 2, 1, 1];
            (0..4).for_each(|i| s[i][i] = q(d[i], 1));
            link(&mut s, 0, 1, q(-1, 1));
            link(&mut s, 1, 2, q(-1, 1));
            link(&mut s, 2, 3, q(-1, 2));
        }
        Series::G => {
            s[0][0] = q(2, 1);
            s[1][1] = q(6, 1);
            link(&mut s, 0, 1, q(-3, 1));
        }
    }
    s
}

fn ip(s: &[Vec<Q>], a: &[i64], b: &[i64]) -> Q {
    let mut acc = Q::zero();
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            if bj != 0 {
                acc += s[i][j] * Q::from_integer((ai * bj) as i128);
            }
        }
    }
    acc
}

/// Positive roots of an irreducible factor by closure over simple reflections' strings.
fn enumerate_positive(s: &[Vec<Q>]) -> Vec<Vec<i64>> {
    let n = s.len();
    let mut roots: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    let mut known: std::collections::HashSet<Vec<i64>> = roots.iter().cloned().collect();
    let mut layer = roots.clone();
    while !layer.is_empty() {
        let mut next = Vec::new();
        for beta in &layer {
            for i in 0..n {
                // p = length of the α_i-string below β
                let mut p = 0;
                let mut down = beta.clone();
                loop {
                    down[i] -= 1;
                    if known.contains(&down) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                let pairing = Q::from_integer(2) * ip(s, beta, &(0..n).map(|j| i64::from(i == j)).collect::<Vec<_>>())
                    / s[i][i];
                assert!(pairing.is_integer(), "Cartan integer must be integral");
                let q = p - *pairing.numer() as i64;
                if q > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    if known.insert(up.clone()) {
                        next.push(up);
                    }
                }
            }
        }
        roots.extend(next.iter().cloned());
        layer = next;
    }
    roots
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RootSystem {
    pub spec: CartanSpec,
    /// Number of simple roots `r`.
    pub rank: usize,
    /// Positive roots in simple-root coordinates, height-major then lexicographically descending.
    pub positive_roots: Vec<Vec<i64>>,
    /// Simple factor of each positive root.
    pub factor_of_root: Vec<usize>,
    /// Simple factor of each simple root index.
    pub factor_of_simple: Vec<usize>,
    /// `G_jk = B(H_{α_j}, H_{α_k})`.
    #[serde(serialize_with = "crate::report::ser_qmat")]
    pub gram: Vec<Vec<Q>>,
    #[serde(skip)]
    index: HashMap<Vec<i64>, usize>,
}

pub fn height(x: &[i64]) -> i64 {
    x.iter().sum()
}

impl RootSystem {
    pub fn p(&self) -> usize {
        self.positive_roots.len()
    }

    pub fn factors(&self) -> usize {
        self.spec.factors.len()
    }

    /// Index of a positive root from its coordinates.
    pub fn index_of(&self, x: &[i64]) -> Option<usize> {
        self.index.get(x).copied()
    }

    /// Signed lookup: `Some((i, +1))` for a positive root, `Some((i, -1))` for its negative.
    pub fn signed_index(&self, x: &[i64]) -> Option<(usize, i64)> {
        if let Some(i) = self.index_of(x) {
            return Some((i, 1));
        }
        let neg: Vec<i64> = x.iter().map(|v| -v).collect();
        self.index_of(&neg).map(|i| (i, -1))
    }

    /// Killing inner product `(x, y)_K` of root-lattice vectors.
    pub fn killing_ip(&self, x: &[i64], y: &[i64]) -> Q {
        ip(&self.gram, x, y)
    }

    /// `B(H_{α_j}, H_α) = Σ_l x_α^l G_jl`.
    pub fn pairing(&self, j: usize, alpha: usize) -> Q {
        let x = &self.positive_roots[alpha];
        x.iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(|(l, &v)| self.gram[j][l] * Q::from_integer(v as i128))
            .sum()
    }

    /// Cartan integer `⟨α_i, α_j^∨⟩`.
    pub fn cartan(&self, i: usize, j: usize) -> i64 {
        let c = Q::from_integer(2) * self.gram[i][j] / self.gram[j][j];
        debug_assert!(c.is_integer());
        *c.numer() as i64
    }

    pub fn gram_matrix(&self) -> Mat<Surd> {
        Mat::from_fn(self.rank, self.rank, |i, j| Surd::from_q(self.gram[i][j]))
    }

    /// Indices of positive roots ordered by decreasing height (stable).
    pub fn by_height_desc(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.p()).collect();
        idx.sort_by_key(|&a| std::cmp::Reverse(height(&self.positive_roots[a])));
        idx
    }
}

/// Scale `c` with `(·,·)_K = c·S`, from `(λ,λ)_K = Σ_{γ∈Φ} (γ,λ)_K²`.
fn killing_scale(s: &[Vec<Q>], roots: &[Vec<i64>]) -> Result<Q> {
    let n = s.len();
    let e = |i: usize| -> Vec<i64> { (0..n).map(|j| i64::from(i == j)).collect() };
    let sum_sq = |a: &[i64], b: &[i64]| -> Q {
        Q::from_integer(2) * roots.iter().map(|g| ip(s, g, a) * ip(s, g, b)).sum::<Q>()
    };
    let c = s[0][0] / sum_sq(&e(0), &e(0));
    for i in 0..n {
        for j in 0..n {
            if c * s[i][j] != c * c * sum_sq(&e(i), &e(j)) {
                return Err(Error::Consistency(format!(
                    "trace identity fails for simple pair ({i}, {j})"
                )));
            }
        }
    }
    Ok(c)
}

pub fn build_root_system(spec: &CartanSpec) -> Result<RootSystem> {
    spec.validate()?;
    let r = spec.rank();
    let mut positive_roots = Vec::new();
    let mut factor_of_root = Vec::new();
    let mut factor_of_simple = Vec::new();
    let mut gram = vec![vec![Q::zero(); r]; r];
    let mut offset = 0;
    for (fi, f) in spec.factors.iter().enumerate() {
        let s = dynkin_form(*f);
        let mut roots = enumerate_positive(&s);
        if roots.len() != f.series.positive_root_count(f.rank) {
            return Err(Error::Consistency(format!(
                "{f}: enumerated {} positive roots, expected {}",
                roots.len(),
                f.series.positive_root_count(f.rank)
            )));
        }
        let c = killing_scale(&s, &roots)?;
        for i in 0..f.rank {
            for j in 0..f.rank {
                gram[offset + i][offset + j] = c * s[i][j];
            }
            factor_of_simple.push(fi);
        }
        roots.sort_by(|a, b| height(a).cmp(&height(b)).then_with(|| b.cmp(a)));
        for x in roots {
            let mut full = vec![0; r];
            full[offset..offset + f.rank].copy_from_slice(&x);
            positive_roots.push(full);
            factor_of_root.push(fi);
        }
        offset += f.rank;
    }
    // simple roots of all factors first, then the rest by height
    let mut order: Vec<usize> = (0..positive_roots.len()).collect();
    order.sort_by(|&a, &b| {
        let (x, y) = (&positive_roots[a], &positive_roots[b]);
        height(x).cmp(&height(y)).then_with(|| y.cmp(x))
    });
    let positive_roots: Vec<Vec<i64>> = order.iter().map(|&i| positive_roots[i].clone()).collect();
    let factor_of_root: Vec<usize> = order.iter().map(|&i| factor_of_root[i]).collect();
    let index = positive_roots.iter().enumerate().map(|(i, x)| (x.clone(), i)).collect();
    Ok(RootSystem { spec: spec.clone(), rank: r, positive_roots, factor_of_root, factor_of_simple, gram, index })
}

/// Gram matrix computed both from the trace identity on root data and from
/// adjoint traces of the built compact algebra; errors unless they agree exactly.
pub fn killing_gram(spec: &CartanSpec) -> Result<Vec<Vec<Q>>> {
    let rs = build_root_system(spec)?;
    let alg = crate::compact_algebra::build_compact_form(&rs)?;
    let traced = alg.gram_from_traces()?;
    for j in 0..rs.rank {
        for k in 0..rs.rank {
            if Surd::from_q(rs.gram[j][k]) != traced[(j, k)] {
                return Err(Error::Consistency(format!(
                    "Killing Gram entry ({j}, {k}): root data {} vs adjoint trace {}",
                    rs.gram[j][k], traced[(j, k)]
                )));
            }
        }
    }
    Ok(rs.gram)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(s: &str) -> RootSystem {
        build_root_system(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn a2_roots() {
        let a2 = rs("A2");
        assert_eq!(a2.positive_roots, vec![vec![1, 0], vec![0, 1], vec![1, 1]]);
        assert_eq!(a2.gram[0][0], Q::new(1, 3));
        assert_eq!(a2.gram[0][1], Q::new(-1, 6));
    }

    #[test]
    fn classical_counts() {
        for (s, p) in [("B4", 16), ("G2", 6), ("C3", 9), ("D4", 12), ("F4", 24), ("E6", 36), ("E7", 63), ("E8", 120)] {
            assert_eq!(rs(s).p(), p, "{s}");
        }
    }

    #[test]
    fn b4_long_roots_have_norm_one_seventh() {
        let b4 = rs("B4");
        assert_eq!(b4.gram[0][0], Q::new(1, 7));
        assert_eq!(b4.gram[3][3], Q::new(1, 14));
        let highest = b4.positive_roots.last().unwrap();
        assert_eq!(highest, &vec![1, 2, 2, 2]);
    }

    #[test]
    fn product_is_block_diagonal() {
        let p = rs("A1xA1");
        assert_eq!(p.positive_roots, vec![vec![1, 0], vec![0, 1]]);
        assert!(p.gram[0][1].is_zero());
        assert_eq!(p.factor_of_root, vec![0, 1]);
    }

    #[test]
    fn inadmissible_reports_factor() {
        let err = build_root_system(&"A2xC2".parse().unwrap()).unwrap_err();
        assert!(matches!(err, Error::Inadmissible { index: 1, series: 'C', rank: 2 }));
    }

    #[test]
    fn gram_positive_definite_and_linear() {
        for s in ["A2", "B2", "G2", "B4", "F4", "A2xA2"] {
            let r = rs(s);
            assert!(r.gram_matrix().is_positive_definite(), "{s}");
            for a in 0..r.p() {
                for j in 0..r.rank {
                    let x: Vec<i64> = (0..r.rank).map(|i| i64::from(i == j)).collect();
                    assert_eq!(r.pairing(j, a), r.killing_ip(&x, &r.positive_roots[a]));
                }
            }
        }
    }

    #[test]
    fn json_spec_parses() {
        let s: CartanSpec = r#"{"factors":[{"series":"B","rank":4}]}"#.parse().unwrap();
        assert_eq!(s, CartanSpec::simple(Series::B, 4));
    }
}
