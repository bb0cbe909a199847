//! Left-invariant forms on a Lie algebra: dense alternating coefficients
//! indexed by increasing tuples, wedge product, the Chevalley–Eilenberg
//! differential and the per-argument action of an endomorphism.
//!
//! The differential follows the sign convention
//! `dF(X,Y,Z) = F([X,Y],Z) + F([Y,Z],X) + F([Z,X],Y)`, so `dθ(X,Y) = θ([X,Y])`.

use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

use crate::compact_algebra::CompactAlgebra;
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::scalar::{Scalar, Surd};

pub const MAX_DEGREE: usize = 4;
const MAX_DIM: usize = 256;
const MAX_COEFFS: usize = 8_000_000;

fn binom_table() -> &'static Vec<[usize; MAX_DEGREE + 2]> {
    static T: OnceLock<Vec<[usize; MAX_DEGREE + 2]>> = OnceLock::new();
    T.get_or_init(|| {
        let mut t = vec![[0usize; MAX_DEGREE + 2]; MAX_DIM + 1];
        for n in 0..=MAX_DIM {
            t[n][0] = 1;
            for k in 1..MAX_DEGREE + 2 {
                t[n][k] = if n == 0 { 0 } else { t[n - 1][k - 1] + t[n - 1][k] };
            }
        }
        t
    })
}

pub fn binom(n: usize, k: usize) -> usize {
    binom_table()[n][k]
}

/// Colexicographic rank of a strictly increasing tuple.
fn rank(t: &[usize]) -> usize {
    t.iter().enumerate().map(|(i, &a)| binom(a, i + 1)).sum()
}

fn unrank(mut r: usize, k: usize, out: &mut [usize]) {
    let mut hi = MAX_DIM;
    for i in (1..=k).rev() {
        let mut c = i - 1;
        while c + 1 < hi && binom(c + 1, i) <= r {
            c += 1;
        }
        out[i - 1] = c;
        r -= binom(c, i);
        hi = c;
    }
}

/// Sort a small index tuple, returning the permutation sign, or `None` on a repeat.
pub fn sort_signed(t: &mut [usize]) -> Option<i32> {
    let mut sign = 1;
    for i in 1..t.len() {
        let mut j = i;
        while j > 0 && t[j - 1] > t[j] {
            t.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    t.windows(2).all(|w| w[0] != w[1]).then_some(sign)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Form<S> {
    dim: usize,
    degree: usize,
    coeffs: Vec<S>,
}

impl<S: Scalar> Form<S> {
    pub fn zero(dim: usize, degree: usize) -> Result<Self> {
        if degree > MAX_DEGREE || dim > MAX_DIM || binom(dim, degree) > MAX_COEFFS {
            return Err(Error::TooLarge { degree, dim });
        }
        Ok(Form { dim, degree, coeffs: vec![S::zero(); binom(dim, degree)] })
    }

    pub fn constant(dim: usize, c: S) -> Self {
        Form { dim, degree: 0, coeffs: vec![c] }
    }

    /// Dual basis covector `e^i`.
    pub fn covector(dim: usize, i: usize) -> Self {
        let mut f = Self::zero(dim, 1).expect("1-forms always fit");
        f.coeffs[i] = S::one();
        f
    }

    /// Linear combination of dual covectors.
    pub fn one_form(coeffs: Vec<S>) -> Self {
        Form { dim: coeffs.len(), degree: 1, coeffs }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Coefficient on an arbitrary index tuple (antisymmetrized).
    pub fn get(&self, idx: &[usize]) -> S {
        debug_assert_eq!(idx.len(), self.degree);
        let mut t = [0usize; MAX_DEGREE];
        let t = &mut t[..idx.len()];
        t.copy_from_slice(idx);
        match sort_signed(t) {
            None => S::zero(),
            Some(1) => self.coeffs[rank(t)].clone(),
            Some(_) => -self.coeffs[rank(t)].clone(),
        }
    }

    /// Add `c` to the coefficient of `e^{idx}` (any order).
    pub fn add_term(&mut self, idx: &[usize], c: S) {
        let mut t = [0usize; MAX_DEGREE];
        let t = &mut t[..idx.len()];
        t.copy_from_slice(idx);
        if let Some(s) = sort_signed(t) {
            let r = rank(t);
            if s == 1 {
                self.coeffs[r] += c;
            } else {
                self.coeffs[r] -= c;
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    /// Nonzero coefficients with their increasing index tuples.
    pub fn entries(&self) -> Vec<(Vec<usize>, S)> {
        let mut t = vec![0; self.degree];
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(r, c)| {
                unrank(r, self.degree, &mut t);
                (t.clone(), c.clone())
            })
            .collect()
    }

    pub fn first_nonzero(&self) -> Option<(Vec<usize>, S)> {
        let r = self.coeffs.iter().position(|c| !c.is_zero())?;
        let mut t = vec![0; self.degree];
        unrank(r, self.degree, &mut t);
        Some((t, self.coeffs[r].clone()))
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Form<T> {
        Form { dim: self.dim, degree: self.degree, coeffs: self.coeffs.iter().map(f).collect() }
    }

    pub fn to_f64(&self) -> Form<f64> {
        self.map(Scalar::to_f64)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.to_f64().abs()).fold(0.0, f64::max)
    }

    fn zip(&self, o: &Self, f: impl Fn(&S, &S) -> S) -> Self {
        assert_eq!((self.dim, self.degree), (o.dim, o.degree), "form shape mismatch");
        Form { dim: self.dim, degree: self.degree, coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| f(a, b)).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a.clone() + b)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a.clone() - b)
    }

    pub fn scale(&self, s: &S) -> Self {
        self.map(|a| a.clone() * s)
    }

    pub fn wedge(&self, o: &Self) -> Result<Self> {
        assert_eq!(self.dim, o.dim);
        let mut out = Self::zero(self.dim, self.degree + o.degree)?;
        let (a, b) = (self.entries(), o.entries());
        let mut idx = Vec::with_capacity(out.degree);
        for (ta, ca) in &a {
            for (tb, cb) in &b {
                idx.clear();
                idx.extend_from_slice(ta);
                idx.extend_from_slice(tb);
                out.add_term(&idx, ca.clone() * cb);
            }
        }
        Ok(out)
    }

    /// Chevalley–Eilenberg differential with the sign fixed by `dθ(X,Y) = θ([X,Y])`.
    pub fn d(&self, alg: &CompactAlgebra<S>) -> Result<Self> {
        assert_eq!(self.dim, alg.dim());
        let k = self.degree;
        let mut out = Self::zero(self.dim, k + 1)?;
        if k == 0 {
            return Ok(out);
        }
        out.coeffs = (0..out.coeffs.len())
            .into_par_iter()
            .map(|r| {
                let mut t = [0usize; MAX_DEGREE + 1];
                unrank(r, k + 1, &mut t[..k + 1]);
                let t = &t[..k + 1];
                let mut acc = S::zero();
                let mut rest = [0usize; MAX_DEGREE];
                for i in 0..=k {
                    for j in i + 1..=k {
                        let br = alg.bracket(t[i], t[j]);
                        if br.is_empty() {
                            continue;
                        }
                        let mut n = 1;
                        for (s, &v) in t.iter().enumerate() {
                            if s != i && s != j {
                                rest[n] = v;
                                n += 1;
                            }
                        }
                        let mut sub = S::zero();
                        for (m, c) in br {
                            rest[0] = *m;
                            let v = self.get(&rest[..k]);
                            if !v.is_zero() {
                                sub += v * c;
                            }
                        }
                        // −(−1)^{i+j}
                        if (i + j) % 2 == 0 {
                            acc -= sub;
                        } else {
                            acc += sub;
                        }
                    }
                }
                acc
            })
            .collect();
        Ok(out)
    }

    /// `(Aω)(X_1,…,X_k) = ω(AX_1,…,AX_k)` for an endomorphism given by its matrix
    /// (column `j` holds the coordinates of `A e_j`).
    pub fn act(&self, a: &Mat<S>) -> Self {
        let k = self.degree;
        let cols: Vec<Vec<(usize, S)>> = (0..self.dim)
            .map(|j| (0..self.dim).filter(|&i| !a[(i, j)].is_zero()).map(|i| (i, a[(i, j)].clone())).collect())
            .collect();
        let coeffs = (0..self.coeffs.len())
            .into_par_iter()
            .map(|r| {
                let mut t = [0usize; MAX_DEGREE];
                unrank(r, k, &mut t[..k]);
                let mut acc = S::zero();
                let mut idx = [0usize; MAX_DEGREE];
                self.expand(&cols, &t[..k], 0, &mut idx, S::one(), &mut acc);
                acc
            })
            .collect();
        Form { dim: self.dim, degree: k, coeffs }
    }

    fn expand(&self, cols: &[Vec<(usize, S)>], t: &[usize], s: usize, idx: &mut [usize; MAX_DEGREE], w: S, acc: &mut S) {
        if s == t.len() {
            let v = self.get(&idx[..t.len()]);
            if !v.is_zero() {
                *acc += v * &w;
            }
            return;
        }
        for (m, c) in &cols[t[s]] {
            if idx[..s].contains(m) {
                continue;
            }
            idx[s] = *m;
            self.expand(cols, t, s + 1, idx, w.clone() * c, acc);
        }
    }

    /// Evaluate on vectors given in basis coordinates.
    pub fn eval(&self, vs: &[Vec<S>]) -> S {
        assert_eq!(vs.len(), self.degree);
        let cols: Vec<Vec<(usize, S)>> = vs
            .iter()
            .map(|v| v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect())
            .collect();
        let mut acc = S::zero();
        let mut idx = [0usize; MAX_DEGREE];
        let t: Vec<usize> = (0..vs.len()).collect();
        self.expand(&cols, &t, 0, &mut idx, S::one(), &mut acc);
        acc
    }
}

/// Check `F(Ie_i, Ie_j) = F(e_i, e_j)` on all basis pairs.
pub fn check_one_one<S: Scalar>(f: &Form<S>, i_mat: &Mat<S>) -> Result<()> {
    let fi = f.act(i_mat);
    match fi.sub(f).first_nonzero() {
        None => Ok(()),
        Some((t, _)) => Err(Error::NotOneOne(t[0], t[1])),
    }
}

/// `d^cF = −I(dF)`.
pub fn dc<S: Scalar>(f: &Form<S>, i_mat: &Mat<S>, alg: &CompactAlgebra<S>) -> Result<Form<S>> {
    Ok(f.d(alg)?.act(i_mat).scale(&S::from_i64(-1)))
}

/// `dd^cF` for a (1,1)-form `F`.
pub fn ddc<S: Scalar>(f: &Form<S>, i_mat: &Mat<S>, alg: &CompactAlgebra<S>) -> Result<Form<S>> {
    check_one_one(f, i_mat)?;
    dc(f, i_mat, alg)?.d(alg)
}

#[derive(Serialize)]
pub struct FormEntry {
    pub idx: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
}

#[derive(Serialize)]
pub struct FormDump {
    pub degree: usize,
    pub entries: Vec<FormEntry>,
}

pub fn dump_exact(f: &Form<Surd>) -> FormDump {
    let entries = f
        .entries()
        .into_iter()
        .map(|(idx, c)| match c.as_q_sqrt2() {
            Some((a, b)) => FormEntry {
                idx,
                a: Some(crate::scalar::fmt_q(&a)),
                b: Some(crate::scalar::fmt_q(&b)),
                value: None,
            },
            None => FormEntry { idx, a: None, b: None, value: Some(c.to_string()) },
        })
        .collect();
    FormDump { degree: f.degree(), entries }
}

pub fn dump_float(f: &Form<f64>) -> FormDump {
    let entries = f
        .entries()
        .into_iter()
        .map(|(idx, c)| FormEntry { idx, a: None, b: None, value: Some(crate::report::fmt_f64(c)) })
        .collect();
    FormDump { degree: f.degree(), entries }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compact_algebra::build_compact_form;
    use crate::root_data::build_root_system;

    #[test]
    fn rank_unrank_round_trip() {
        let mut t = [0usize; 3];
        for r in 0..binom(9, 3) {
            unrank(r, 3, &mut t);
            assert!(t[0] < t[1] && t[1] < t[2]);
            assert_eq!(rank(&t), r);
        }
    }

    #[test]
    fn wedge_of_covectors_evaluates_to_one() {
        let e1 = Form::<Surd>::covector(4, 0);
        let e2 = Form::<Surd>::covector(4, 1);
        let w = e1.wedge(&e2).unwrap();
        let u = |i: usize| (0..4).map(|j| Surd::int(i64::from(i == j))).collect::<Vec<_>>();
        assert_eq!(w.eval(&[u(0), u(1)]), Surd::int(1));
        assert_eq!(w.eval(&[u(1), u(0)]), Surd::int(-1));
        assert_eq!(w.get(&[1, 0]), Surd::int(-1));
    }

    #[test]
    fn d_of_covector_is_dual_bracket() {
        let rs = build_root_system(&"B2".parse().unwrap()).unwrap();
        let alg = build_compact_form(&rs).unwrap();
        let n = alg.dim();
        for k in 0..n {
            let dk = Form::covector(n, k).d(&alg).unwrap();
            for i in 0..n {
                for j in 0..n {
                    assert_eq!(dk.get(&[i, j]), if i == j { Surd::zero() } else { alg.constant(i, j, k) });
                }
            }
            assert!(dk.d(&alg).unwrap().is_zero());
        }
    }

    #[test]
    fn degree_cap() {
        assert!(Form::<f64>::zero(10, 5).is_err());
        assert!(Form::constant(3, 2.0).d(&build_compact_form(&build_root_system(&"A1".parse().unwrap()).unwrap()).unwrap().to_f64()).unwrap().is_zero());
    }
}
