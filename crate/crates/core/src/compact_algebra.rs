//! Compact real forms: structure constants in the ordered basis
//! `(T_1..T_r; X_α..; Y_α..)` with `T_j = iH_{α_j}`, `X_α = (E_α − E_{−α})/√2`,
//! `Y_α = i(E_α + E_{−α})/√2` and `B(E_α, E_{−α}) = 1`.

use std::collections::HashMap;

use num_complex::Complex;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::root_data::RootSystem;
use crate::scalar::{Scalar, Surd, Q};

pub type SparseVec<S> = Vec<(usize, S)>;

/// A real Lie algebra with a distinguished torus and root planes `(X_α, Y_α)`
/// on which the torus acts by `[T, X_α] = ᾱ(T) Y_α`, `[T, Y_α] = −ᾱ(T) X_α`.
#[derive(Clone, Debug)]
pub struct CompactAlgebra<S> {
    pub rank: usize,
    /// Root of each plane in simple-root coordinates.
    pub root_coords: Vec<Vec<i64>>,
    pub factor_of_torus: Vec<usize>,
    pub factor_of_root: Vec<usize>,
    pub labels: Vec<String>,
    table: Vec<SparseVec<S>>,
    killing: Mat<S>,
}

impl<S: Scalar> CompactAlgebra<S> {
    /// Assemble from brackets of basis pairs `i < j`; the Killing form is traced here.
    pub fn from_brackets(
        rank: usize,
        root_coords: Vec<Vec<i64>>,
        factor_of_torus: Vec<usize>,
        factor_of_root: Vec<usize>,
        labels: Vec<String>,
        upper: impl Fn(usize, usize) -> SparseVec<S>,
    ) -> Self {
        let n = rank + 2 * root_coords.len();
        let mut table = vec![Vec::new(); n * n];
        for i in 0..n {
            for j in i + 1..n {
                let mut v: SparseVec<S> = upper(i, j).into_iter().filter(|(_, c)| !c.is_zero()).collect();
                v.sort_by_key(|t| t.0);
                table[j * n + i] = v.iter().map(|(k, c)| (*k, -c.clone())).collect();
                table[i * n + j] = v;
            }
        }
        let mut alg = CompactAlgebra {
            rank,
            root_coords,
            factor_of_torus,
            factor_of_root,
            labels,
            table,
            killing: Mat::zeros(0, 0),
        };
        alg.killing = alg.trace_killing();
        alg
    }

    pub fn dim(&self) -> usize {
        self.rank + 2 * self.root_coords.len()
    }

    pub fn p(&self) -> usize {
        self.root_coords.len()
    }

    pub fn x(&self, a: usize) -> usize {
        self.rank + a
    }

    pub fn y(&self, a: usize) -> usize {
        self.rank + self.p() + a
    }

    pub fn is_torus(&self, i: usize) -> bool {
        i < self.rank
    }

    /// Root-plane index of a basis vector, if it is an `X` or `Y`.
    pub fn plane_of(&self, i: usize) -> Option<usize> {
        (i >= self.rank).then(|| (i - self.rank) % self.p())
    }

    /// `[e_i, e_j]` as a sparse vector.
    pub fn bracket(&self, i: usize, j: usize) -> &SparseVec<S> {
        &self.table[i * self.dim() + j]
    }

    /// `c^k_{ij}`.
    pub fn constant(&self, i: usize, j: usize, k: usize) -> S {
        self.bracket(i, j)
            .iter()
            .find(|(m, _)| *m == k)
            .map_or_else(S::zero, |(_, c)| c.clone())
    }

    /// Bracket of arbitrary dense vectors.
    pub fn bracket_vec(&self, u: &[S], v: &[S]) -> Vec<S> {
        let n = self.dim();
        let mut out = vec![S::zero(); n];
        for (i, a) in u.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in v.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                let ab = a.clone() * b;
                for (k, c) in self.bracket(i, j) {
                    out[*k] += ab.clone() * c;
                }
            }
        }
        out
    }

    pub fn adjoint_matrix(&self, i: usize) -> Result<Mat<S>> {
        let n = self.dim();
        if i >= n {
            return Err(Error::Index { index: i, dim: n });
        }
        let mut m = Mat::zeros(n, n);
        for j in 0..n {
            for (k, c) in self.bracket(i, j) {
                m[(*k, j)] = c.clone();
            }
        }
        Ok(m)
    }

    fn trace_killing(&self) -> Mat<S> {
        let n = self.dim();
        let rows: Vec<Vec<S>> = (0..n)
            .into_par_iter()
            .map(|i| {
                (0..n)
                    .map(|j| {
                        // Σ_m Σ_l c^l_{jm} c^m_{il}
                        let mut acc = S::zero();
                        for m in 0..n {
                            for (l, c) in self.bracket(j, m) {
                                for (mm, d) in self.bracket(i, *l) {
                                    if *mm == m {
                                        acc += c.clone() * d;
                                    }
                                }
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        Mat::from_rows(rows)
    }

    pub fn killing(&self) -> &Mat<S> {
        &self.killing
    }

    /// `n_α = −B(X_α, X_α)`.
    pub fn plane_norm(&self, a: usize) -> S {
        -self.killing[(self.x(a), self.x(a))].clone()
    }

    /// `ᾱ(T_k)`: coefficient of `Y_α` in `[T_k, X_α]`.
    pub fn root_on_torus(&self, a: usize, k: usize) -> S {
        self.constant(k, self.x(a), self.y(a))
    }

    /// `(ᾱ_j(T_k))_{jk}` for the simple roots (the planes whose coordinates are unit vectors).
    pub fn simple_root_matrix(&self) -> Result<Mat<S>> {
        let r = self.rank;
        let mut m = Mat::zeros(r, r);
        for j in 0..r {
            let unit: Vec<i64> = (0..r).map(|i| i64::from(i == j)).collect();
            let a = self
                .root_coords
                .iter()
                .position(|x| *x == unit)
                .ok_or_else(|| Error::Consistency(format!("simple root {j} has no plane")))?;
            for k in 0..r {
                m[(j, k)] = self.root_on_torus(a, k);
            }
        }
        Ok(m)
    }

    /// Simple-root Killing Gram `G = A (−K_t)^{-1} Aᵀ` with `A_jk = ᾱ_j(T_k)`,
    /// independent of the torus basis.
    pub fn gram_from_traces(&self) -> Result<Mat<S>> {
        let r = self.rank;
        let a = self.simple_root_matrix()?;
        let kt = Mat::from_fn(r, r, |i, j| -self.killing[(i, j)].clone());
        let inv = kt.inverse().ok_or_else(|| Error::Consistency("degenerate torus Killing form".into()))?;
        Ok(a.mul(&inv).mul(&a.transpose()))
    }

    /// First Jacobi violation over basis triples.
    pub fn check_jacobi(&self) -> Result<()> {
        let n = self.dim();
        let bad = (0..n).into_par_iter().find_map_first(|i| {
            for j in i + 1..n {
                for k in j + 1..n {
                    let mut acc = vec![S::zero(); n];
                    for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                        for (m, x) in self.bracket(a, b) {
                            for (l, y) in self.bracket(*m, c) {
                                acc[*l] += x.clone() * y;
                            }
                        }
                    }
                    if acc.iter().any(|v| !v.is_zero()) {
                        return Some((i, j, k));
                    }
                }
            }
            None
        });
        match bad {
            Some((i, j, k)) => Err(Error::Jacobi(i, j, k)),
            None => Ok(()),
        }
    }

    /// `B([x,y],z) = B(x,[y,z])` on all basis triples.
    pub fn check_invariance(&self) -> Result<()> {
        let n = self.dim();
        let kz = |v: &SparseVec<S>, z: usize| -> S {
            let mut acc = S::zero();
            for (m, c) in v {
                acc += c.clone() * &self.killing[(*m, z)];
            }
            acc
        };
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let lhs = kz(self.bracket(x, y), z);
                    let rhs = kz(self.bracket(y, z), x);
                    if lhs != rhs {
                        return Err(Error::Consistency(format!("Killing form not invariant on ({x}, {y}, {z})")));
                    }
                }
            }
        }
        Ok(())
    }

    /// `−B` positive definite.
    pub fn killing_negative_definite(&self) -> bool {
        self.killing.scale(&S::from_i64(-1)).is_positive_definite()
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> CompactAlgebra<T> {
        CompactAlgebra {
            rank: self.rank,
            root_coords: self.root_coords.clone(),
            factor_of_torus: self.factor_of_torus.clone(),
            factor_of_root: self.factor_of_root.clone(),
            labels: self.labels.clone(),
            table: self.table.iter().map(|v| v.iter().map(|(k, c)| (*k, f(c))).collect()).collect(),
            killing: self.killing.map(&f),
        }
    }

    pub fn to_f64(&self) -> CompactAlgebra<f64> {
        self.map(Scalar::to_f64)
    }

    /// Rescale basis vectors `e_i ↦ d_i e_i`.
    pub fn rescale(&self, d: &[S]) -> Result<Self> {
        let inv: Vec<S> = d
            .iter()
            .map(|x| x.inv().ok_or_else(|| Error::Consistency("zero scale".into())))
            .collect::<Result<_>>()?;
        Ok(Self::from_brackets(
            self.rank,
            self.root_coords.clone(),
            self.factor_of_torus.clone(),
            self.factor_of_root.clone(),
            self.labels.clone(),
            |i, j| {
                self.bracket(i, j)
                    .iter()
                    .map(|(k, c)| (*k, d[i].clone() * &d[j] * c * &inv[*k]))
                    .collect()
            },
        ))
    }

    /// Nonzero constants `(i, j, k, c^k_{ij})` for `i < j`.
    pub fn constants(&self) -> Vec<(usize, usize, usize, S)> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for (k, c) in self.bracket(i, j) {
                    out.push((i, j, *k, c.clone()));
                }
            }
        }
        out
    }
}

/// Chevalley structure constants `N_{α,β}` by Carter's extraspecial-pair rule.
struct Chevalley<'a> {
    rs: &'a RootSystem,
    memo: HashMap<(Vec<i64>, Vec<i64>), i64>,
}

fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn neg(a: &[i64]) -> Vec<i64> {
    a.iter().map(|x| -x).collect()
}

fn unit(r: usize, i: usize) -> Vec<i64> {
    (0..r).map(|j| i64::from(i == j)).collect()
}

impl<'a> Chevalley<'a> {
    fn is_root(&self, x: &[i64]) -> bool {
        self.rs.signed_index(x).is_some()
    }

    fn positive(x: &[i64]) -> bool {
        x.iter().any(|v| *v > 0)
    }

    fn norm(&self, x: &[i64]) -> Q {
        self.rs.killing_ip(x, x)
    }

    /// Extraspecial pair `(α_i, ξ − α_i)` of a non-simple positive root.
    fn extraspecial(&self, xi: &[i64]) -> (Vec<i64>, Vec<i64>) {
        let r = self.rs.rank;
        for i in 0..r {
            let d: Vec<i64> = add(xi, &neg(&unit(r, i)));
            if self.rs.index_of(&d).is_some() {
                return (unit(r, i), d);
            }
        }
        unreachable!("every non-simple positive root has an extraspecial pair")
    }

    fn string_below(&self, gamma: &[i64], delta: &[i64]) -> i64 {
        let mut p = 0;
        let mut cur = delta.to_vec();
        loop {
            cur = add(&cur, &neg(gamma));
            if self.is_root(&cur) {
                p += 1;
            } else {
                return p;
            }
        }
    }

    fn n(&mut self, a: &[i64], b: &[i64]) -> i64 {
        let s = add(a, b);
        if s.iter().all(|v| *v == 0) || !self.is_root(&s) {
            return 0;
        }
        let key = (a.to_vec(), b.to_vec());
        if let Some(v) = self.memo.get(&key) {
            return *v;
        }
        let v = self.compute(a, b, &s);
        self.memo.insert(key, v);
        v
    }

    fn scaled(&self, num: Q, factor: i64) -> i64 {
        let v = num * Q::from_integer(factor as i128);
        assert!(v.is_integer(), "non-integral structure constant");
        *v.numer() as i64
    }

    fn compute(&mut self, a: &[i64], b: &[i64], s: &[i64]) -> i64 {
        let (pa, pb) = (Self::positive(a), Self::positive(b));
        match (pa, pb) {
            (true, true) => {
                let (g, d) = self.extraspecial(s);
                let p = self.string_below(&g, &d);
                if a == g.as_slice() && b == d.as_slice() {
                    return p + 1;
                }
                if a == d.as_slice() && b == g.as_slice() {
                    return -(p + 1);
                }
                // relation on α + β + (−γ) + (−δ) = 0
                let (ng, nd) = (neg(&g), neg(&d));
                let mut acc = Q::zero();
                let bg = add(b, &ng);
                if self.is_root(&bg) {
                    let t = self.n(b, &ng) * self.n(a, &nd);
                    acc += Q::from_integer(t as i128) / self.norm(&bg);
                }
                let ag = add(a, &ng);
                if self.is_root(&ag) {
                    let t = self.n(&ng, a) * self.n(b, &nd);
                    acc += Q::from_integer(t as i128) / self.norm(&ag);
                }
                let v = acc * self.norm(s) / Q::from_integer((p + 1) as i128);
                self.scaled(v, 1)
            }
            (false, false) => -self.n(&neg(a), &neg(b)),
            (true, false) => {
                if Self::positive(s) {
                    // N_{α,β} = −(ζ,ζ)/(α,α) N_{−β,ζ}
                    let v = -self.norm(s) / self.norm(a);
                    let m = self.n(&neg(b), s);
                    self.scaled(v, m)
                } else {
                    // N_{α,β} = (ζ,ζ)/(β,β) N_{−ζ,α}
                    let v = self.norm(s) / self.norm(b);
                    let m = self.n(&neg(s), a);
                    self.scaled(v, m)
                }
            }
            (false, true) => -self.n(b, a),
        }
    }
}

type Cq = Complex<Q>;

/// Complex Chevalley basis: `h_j` (j < r), `e_α` (r + a), `e_{−α}` (r + p + a).
struct ChevalleyAlgebra {
    r: usize,
    p: usize,
    roots: Vec<Vec<i64>>,
    table: HashMap<(usize, usize), Vec<(usize, Q)>>,
}

impl ChevalleyAlgebra {
    fn build(rs: &RootSystem) -> Self {
        let (r, p) = (rs.rank, rs.p());
        let mut ch = Chevalley { rs, memo: HashMap::new() };
        let signed = |idx: usize| -> (Vec<i64>, usize) {
            if idx < r + p {
                (rs.positive_roots[idx - r].clone(), idx)
            } else {
                (neg(&rs.positive_roots[idx - r - p]), idx)
            }
        };
        let index_of = |x: &[i64]| -> usize {
            match rs.signed_index(x) {
                Some((i, 1)) => r + i,
                Some((i, _)) => r + p + i,
                None => unreachable!(),
            }
        };
        let mut table = HashMap::new();
        let n = r + 2 * p;
        for u in 0..n {
            for v in 0..n {
                let mut out: Vec<(usize, Q)> = Vec::new();
                match (u < r, v < r) {
                    (true, true) => {}
                    (true, false) => {
                        let (beta, _) = signed(v);
                        let c = Q::from_integer(2) * rs.killing_ip(&beta, &unit(r, u)) / rs.gram[u][u];
                        out.push((v, c));
                    }
                    (false, true) => {
                        let (beta, _) = signed(u);
                        let c = Q::from_integer(2) * rs.killing_ip(&beta, &unit(r, v)) / rs.gram[v][v];
                        out.push((u, -c));
                    }
                    (false, false) => {
                        let (a, _) = signed(u);
                        let (b, _) = signed(v);
                        let s = add(&a, &b);
                        if s.iter().all(|x| *x == 0) {
                            // h_α = Σ_j x^j (α_j,α_j)/(α,α) h_j
                            let na = rs.killing_ip(&a, &a);
                            for j in 0..r {
                                if a[j] != 0 {
                                    out.push((j, Q::from_integer(a[j] as i128) * rs.gram[j][j] / na));
                                }
                            }
                        } else {
                            let nv = ch.n(&a, &b);
                            if nv != 0 {
                                out.push((index_of(&s), Q::from_integer(nv as i128)));
                            }
                        }
                    }
                }
                out.retain(|(_, c)| !c.is_zero());
                if !out.is_empty() {
                    table.insert((u, v), out);
                }
            }
        }
        ChevalleyAlgebra { r, p, roots: rs.positive_roots.clone(), table }
    }

    /// Complex coordinates of the real basis vector `k` of the compact form.
    fn real_basis(&self, k: usize) -> Vec<(usize, Cq)> {
        let (r, p) = (self.r, self.p);
        let one = Cq::new(Q::one(), Q::zero());
        let i = Cq::new(Q::zero(), Q::one());
        if k < r {
            vec![(k, i)]
        } else if k < r + p {
            vec![(k, one), (k + p, -one)]
        } else {
            vec![(k - p, i), (k, i)]
        }
    }

    /// Bracket of real basis vectors, converted back to real coordinates.
    fn real_bracket(&self, a: usize, b: usize) -> Result<SparseVec<Q>> {
        let (r, p) = (self.r, self.p);
        let mut acc: HashMap<usize, Cq> = HashMap::new();
        for (u, cu) in self.real_basis(a) {
            for (v, cv) in self.real_basis(b) {
                if let Some(terms) = self.table.get(&(u, v)) {
                    for (w, c) in terms {
                        *acc.entry(*w).or_insert_with(Cq::zero) += cu * cv * Cq::new(*c, Q::zero());
                    }
                }
            }
        }
        let get = |k: usize| acc.get(&k).copied().unwrap_or_else(Cq::zero);
        let half = Q::new(1, 2);
        let mut out = Vec::new();
        let mut push = |k: usize, z: Cq| -> Result<()> {
            if !z.im.is_zero() {
                return Err(Error::Consistency(format!("bracket ({a}, {b}) has a non-real component on {k}")));
            }
            if !z.re.is_zero() {
                out.push((k, z.re));
            }
            Ok(())
        };
        for j in 0..r {
            // h_j = −i T_j
            push(j, get(j) * Cq::new(Q::zero(), -Q::one()))?;
        }
        for t in 0..p {
            let (c, cm) = (get(r + t), get(r + p + t));
            push(r + t, (c - cm) * Cq::new(half, Q::zero()))?;
            push(r + p + t, (c + cm) * Cq::new(Q::zero(), -half))?;
        }
        out.sort_by_key(|t| t.0);
        Ok(out)
    }
}

fn labels(r: usize, roots: &[Vec<i64>]) -> Vec<String> {
    let fmt = |x: &[i64]| x.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
    (0..r)
        .map(|j| format!("T{}", j + 1))
        .chain(roots.iter().map(|x| format!("X[{}]", fmt(x))))
        .chain(roots.iter().map(|x| format!("Y[{}]", fmt(x))))
        .collect()
}

/// Build the compact real form in the normalized basis.
///
/// The unnormalized basis `(i h_j, e_α − e_{−α}, i(e_α + e_{−α}))` has rational
/// constants; its Killing form is traced, and the rescaling to `iH_{α_j}` and
/// unit `−B`-norm root vectors uses only those traces.
pub fn build_compact_form(rs: &RootSystem) -> Result<CompactAlgebra<Surd>> {
    let ch = ChevalleyAlgebra::build(rs);
    let (r, p) = (ch.r, ch.p);
    let n = r + 2 * p;
    let mut pairs = HashMap::new();
    for a in 0..n {
        for b in a + 1..n {
            pairs.insert((a, b), ch.real_bracket(a, b)?);
        }
    }
    let raw = CompactAlgebra::from_brackets(
        r,
        ch.roots.clone(),
        rs.factor_of_simple.clone(),
        rs.factor_of_root.clone(),
        labels(r, &ch.roots),
        |i, j| pairs[&(i, j)].iter().map(|(k, c)| (*k, Surd::from_q(*c))).collect(),
    );
    raw.check_jacobi()?;
    let g = raw.gram_from_traces()?;
    // T_j = iH_{α_j} = ((α_j,α_j)/2) i h_j ; X_α scaled by √((α,α))/2
    let mut d = Vec::with_capacity(n);
    for j in 0..r {
        d.push(g[(j, j)].clone() * Surd::frac(1, 2));
    }
    let norm = |x: &[i64]| -> Q {
        let mut acc = Surd::zero();
        for (i, a) in x.iter().enumerate() {
            for (j, b) in x.iter().enumerate() {
                acc += g[(i, j)].clone() * Surd::int(a * b);
            }
        }
        acc.as_rational().expect("rational Gram")
    };
    for _ in 0..2 {
        for x in &ch.roots {
            let s = Surd::sqrt_q(&norm(x))
                .ok_or_else(|| Error::Consistency("root norm outside supported radicals".into()))?;
            d.push(s * Surd::frac(1, 2));
        }
    }
    let alg = raw.rescale(&d)?;
    for a in 0..p {
        if alg.plane_norm(a) != Surd::int(1) || alg.killing()[(alg.y(a), alg.y(a))] != Surd::int(-1) {
            return Err(Error::Consistency(format!("root plane {a} not unit normalized")));
        }
    }
    Ok(alg)
}

#[derive(Serialize)]
pub struct ConstantEntry {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub a: String,
    pub b: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
}

/// Dump `c^k_{ij} = a + b√2` for `i < j`; values outside ℚ(√2) carry a `value` string instead.
pub fn dump_constants(alg: &CompactAlgebra<Surd>) -> Vec<ConstantEntry> {
    alg.constants()
        .into_iter()
        .map(|(i, j, k, c)| match c.as_q_sqrt2() {
            Some((a, b)) => ConstantEntry { i, j, k, a: crate::scalar::fmt_q(&a), b: crate::scalar::fmt_q(&b), value: None },
            None => ConstantEntry { i, j, k, a: String::new(), b: String::new(), value: Some(c.to_string()) },
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_data::build_root_system;

    fn alg(s: &str) -> CompactAlgebra<Surd> {
        build_compact_form(&build_root_system(&s.parse().unwrap()).unwrap()).unwrap()
    }

    #[test]
    fn a2_is_a_lie_algebra_with_unit_planes() {
        let a = alg("A2");
        assert_eq!(a.dim(), 8);
        a.check_jacobi().unwrap();
        a.check_invariance().unwrap();
        assert!(a.killing_negative_definite());
        for t in 0..a.p() {
            assert_eq!(a.plane_norm(t), Surd::int(1));
        }
    }

    #[test]
    fn torus_is_abelian_and_preserves_planes() {
        let a = alg("G2");
        for i in 0..a.rank {
            for j in 0..a.rank {
                assert!(a.bracket(i, j).is_empty());
            }
            for t in 0..a.p() {
                for (k, _) in a.bracket(i, a.x(t)) {
                    assert_eq!(*k, a.y(t));
                }
            }
        }
    }

    #[test]
    fn x_y_bracket_lands_on_coroot_direction() {
        // [X_α, Y_α] = T_α = iH_α = Σ_j x^j T_j
        let a = alg("A2");
        let t = 2;
        let v = a.bracket(a.x(t), a.y(t));
        assert_eq!(v, &vec![(0, Surd::int(1)), (1, Surd::int(1))]);
    }

    #[test]
    fn torus_root_values_are_gram_pairings() {
        let rs = build_root_system(&"B2".parse().unwrap()).unwrap();
        let a = build_compact_form(&rs).unwrap();
        for t in 0..a.p() {
            for k in 0..a.rank {
                assert_eq!(a.root_on_torus(t, k), Surd::from_q(rs.pairing(k, t)));
            }
        }
    }

    #[test]
    fn adjoint_of_x_has_trace_square_minus_one() {
        let a = alg("B2");
        let ad = a.adjoint_matrix(a.x(0)).unwrap();
        let sq = ad.mul(&ad);
        let tr: Surd = (0..a.dim()).map(|i| sq[(i, i)].clone()).sum();
        assert_eq!(tr, Surd::int(-1));
        assert!(a.adjoint_matrix(99).is_err());
    }

    #[test]
    fn gram_matches_root_data_for_several_types() {
        for s in ["A2", "B2", "G2", "C3", "A1xA1", "A2xA2"] {
            let rs = build_root_system(&s.parse().unwrap()).unwrap();
            let a = build_compact_form(&rs).unwrap();
            assert_eq!(a.gram_from_traces().unwrap(), rs.gram_matrix(), "{s}");
        }
    }
}
