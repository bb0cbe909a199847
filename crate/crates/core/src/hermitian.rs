//! Samelson complex structures and invariant Hermitian metrics: fundamental
//! form, codifferential, Chern and Bismut Ricci forms, Bismut connection and
//! curvature.
//!
//! A metric is `g = −B(Λ·,·)` with `Λ = Λ_t` on the torus and `Λ = λ_α` on the
//! plane of `α`. The complex structure is `J` on the torus and `I X_α = Y_α`.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::compact_algebra::CompactAlgebra;
use crate::error::{Error, Result};
use crate::exterior::Form;
use crate::linalg::Mat;
use crate::root_data::RootSystem;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct HermitianStructure<S> {
    /// Column `j` holds `J T_j` in torus coordinates.
    pub torus_j: Mat<S>,
    /// Column `j` holds `Λ T_j` in torus coordinates.
    pub lambda_t: Mat<S>,
    /// `λ_α` per root plane.
    pub lambda: Vec<S>,
}

fn minus_killing_torus<S: Scalar>(alg: &CompactAlgebra<S>) -> Mat<S> {
    Mat::from_fn(alg.rank, alg.rank, |i, j| -alg.killing()[(i, j)].clone())
}

/// Gram–Schmidt in `g`, pivoting through the coordinate vectors in order;
/// returns an orthogonal (not normalized) basis as columns.
fn gram_schmidt<S: Scalar>(g: &Mat<S>, mut next: impl FnMut(&[Vec<S>]) -> Option<Vec<S>>) -> Vec<Vec<S>> {
    let n = g.rows;
    let ip = |u: &[S], v: &[S]| -> S {
        let gv = g.mul_vec(v);
        u.iter().zip(&gv).fold(S::zero(), |acc, (a, b)| acc + a.clone() * b)
    };
    let mut basis: Vec<Vec<S>> = Vec::new();
    let mut pivot = 0;
    while basis.len() < n {
        let candidate = match next(&basis) {
            Some(v) => v,
            None => {
                let v: Vec<S> = (0..n).map(|i| if i == pivot { S::one() } else { S::zero() }).collect();
                pivot += 1;
                v
            }
        };
        let mut v = candidate;
        for b in &basis {
            let c = ip(&v, b) * &ip(b, b).inv().expect("nonzero norm");
            v = v.iter().zip(b).map(|(x, y)| x.clone() - c.clone() * y).collect();
        }
        if v.iter().any(|x| !x.is_zero()) {
            basis.push(v);
        }
    }
    basis
}

/// A complex structure on the torus orthogonal for the positive definite `g`:
/// orthonormalize `T_1, T_2, …` and rotate consecutive pairs.
pub fn default_torus_j<S: Scalar>(g: &Mat<S>) -> Result<Mat<S>> {
    let r = g.rows;
    if r % 2 == 1 {
        return Err(Error::OddRank(r));
    }
    let basis = gram_schmidt(g, |_| None);
    let mut w = Mat::zeros(r, r);
    for (c, b) in basis.iter().enumerate() {
        let gb = g.mul_vec(b);
        let nrm = b.iter().zip(&gb).fold(S::zero(), |a, (x, y)| a + x.clone() * y);
        let s = nrm
            .sqrt()
            .and_then(|s| s.inv())
            .ok_or_else(|| Error::Hermitian("torus norm has no exact square root".into()))?;
        for i in 0..r {
            w[(i, c)] = b[i].clone() * &s;
        }
    }
    let mut rot = Mat::zeros(r, r);
    for l in 0..r / 2 {
        rot[(2 * l + 1, 2 * l)] = S::one();
        rot[(2 * l, 2 * l + 1)] = S::from_i64(-1);
    }
    let winv = w.inverse().ok_or_else(|| Error::Consistency("singular frame".into()))?;
    Ok(w.mul(&rot).mul(&winv))
}

impl<S: Scalar> HermitianStructure<S> {
    /// Bi-invariant metric `−B` with a compatible torus structure.
    pub fn bi_invariant(alg: &CompactAlgebra<S>) -> Result<Self> {
        let torus_j = default_torus_j(&minus_killing_torus(alg))?;
        Ok(HermitianStructure { torus_j, lambda_t: Mat::identity(alg.rank), lambda: vec![S::one(); alg.p()] })
    }

    /// Scalar `ν_i` on each factor's torus block and given root weights.
    pub fn scalar_torus(alg: &CompactAlgebra<S>, torus_j: Mat<S>, nu: &[S], lambda: Vec<S>) -> Self {
        let r = alg.rank;
        let lambda_t =
            Mat::from_fn(r, r, |i, j| if i == j { nu[alg.factor_of_torus[i]].clone() } else { S::zero() });
        HermitianStructure { torus_j, lambda_t, lambda }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> HermitianStructure<T> {
        HermitianStructure {
            torus_j: self.torus_j.map(&f),
            lambda_t: self.lambda_t.map(&f),
            lambda: self.lambda.iter().map(&f).collect(),
        }
    }

    /// `g_t(T_a, T_b) = −B(Λ T_a, T_b)`.
    pub fn torus_metric(&self, alg: &CompactAlgebra<S>) -> Mat<S> {
        self.lambda_t.transpose().mul(&minus_killing_torus(alg))
    }

    pub fn validate(&self, alg: &CompactAlgebra<S>) -> Result<()> {
        let r = alg.rank;
        if self.torus_j.rows != r || self.torus_j.cols != r || self.lambda_t.rows != r || self.lambda_t.cols != r {
            return Err(Error::Hermitian(format!("torus matrices must be {r}x{r}")));
        }
        if self.lambda.len() != alg.p() {
            return Err(Error::Hermitian(format!("expected {} root weights, got {}", alg.p(), self.lambda.len())));
        }
        let jj = self.torus_j.mul(&self.torus_j);
        if jj != Mat::identity(r).scale(&S::from_i64(-1)) {
            return Err(Error::Hermitian("torus_J does not square to -Id".into()));
        }
        if let Some(a) = self.lambda.iter().position(|l| !l.is_positive()) {
            return Err(Error::Hermitian(format!("lambda[{a}] is not positive")));
        }
        let g = self.torus_metric(alg);
        if !g.is_symmetric() {
            return Err(Error::Hermitian("Lambda_t is not symmetric for the Killing form".into()));
        }
        if !g.is_positive_definite() {
            return Err(Error::Hermitian("torus metric is not positive definite".into()));
        }
        if self.torus_j.transpose().mul(&g).mul(&self.torus_j) != g {
            return Err(Error::Hermitian("torus metric is not torus_J-invariant".into()));
        }
        Ok(())
    }

    /// Matrix of `I` on the whole algebra.
    pub fn complex_structure(&self, alg: &CompactAlgebra<S>) -> Mat<S> {
        let n = alg.dim();
        let mut m = Mat::zeros(n, n);
        for i in 0..alg.rank {
            for j in 0..alg.rank {
                m[(i, j)] = self.torus_j[(i, j)].clone();
            }
        }
        for a in 0..alg.p() {
            m[(alg.y(a), alg.x(a))] = S::one();
            m[(alg.x(a), alg.y(a))] = S::from_i64(-1);
        }
        m
    }

    pub fn metric(&self, alg: &CompactAlgebra<S>) -> Mat<S> {
        let n = alg.dim();
        let gt = self.torus_metric(alg);
        let mut m = Mat::zeros(n, n);
        for i in 0..alg.rank {
            for j in 0..alg.rank {
                m[(i, j)] = gt[(i, j)].clone();
            }
        }
        for a in 0..alg.p() {
            let v = self.lambda[a].clone() * &alg.plane_norm(a);
            m[(alg.x(a), alg.x(a))] = v.clone();
            m[(alg.y(a), alg.y(a))] = v;
        }
        m
    }

    /// `F(X,Y) = g(IX, Y)`.
    pub fn fundamental_form(&self, alg: &CompactAlgebra<S>) -> Result<Form<S>> {
        self.validate(alg)?;
        let f = self.complex_structure(alg).transpose().mul(&self.metric(alg));
        let n = alg.dim();
        let mut out = Form::zero(n, 2)?;
        for i in 0..n {
            for j in i + 1..n {
                if f[(i, j)] != -f[(j, i)].clone() {
                    return Err(Error::Consistency(format!("F not alternating on ({i}, {j})")));
                }
                if !f[(i, j)].is_zero() {
                    out.add_term(&[i, j], f[(i, j)].clone());
                }
            }
        }
        Ok(out)
    }

    /// `½ Σ_l dF(e_l, Ie_l, X)` over a unitary frame `{e_l, Ie_l}`, i.e. the form `I δF`.
    fn i_codifferential_sum(&self, alg: &CompactAlgebra<S>, df: &Form<S>) -> Form<S> {
        let n = alg.dim();
        let im = self.complex_structure(alg);
        let g = self.metric(alg);
        // orthogonal basis of the torus block adapted to J: u, Ju, u', Ju', …
        let gt = self.torus_metric(alg);
        let tj = self.torus_j.clone();
        let torus = gram_schmidt(&gt, |basis| {
            if basis.len() % 2 == 1 {
                Some(tj.mul_vec(basis.last().unwrap()))
            } else {
                None
            }
        });
        let mut frame: Vec<(Vec<S>, S)> = Vec::new();
        for u in torus.into_iter().step_by(2) {
            let mut full = vec![S::zero(); n];
            full[..alg.rank].clone_from_slice(&u);
            let norm = full.iter().zip(g.mul_vec(&full)).fold(S::zero(), |a, (x, y)| a + x.clone() * &y);
            frame.push((full, norm));
        }
        for a in 0..alg.p() {
            let i = alg.x(a);
            let e: Vec<S> = (0..n).map(|k| if k == i { S::one() } else { S::zero() }).collect();
            frame.push((e, g[(i, i)].clone()));
        }
        let half = S::from_q(&crate::scalar::Q::new(1, 2));
        let mut out = Form::zero(n, 1).expect("1-form");
        for (u, norm) in &frame {
            let iu = im.mul_vec(u);
            let w = half.clone() * &norm.inv().expect("positive norm");
            for x in 0..n {
                let ex: Vec<S> = (0..n).map(|k| if k == x { S::one() } else { S::zero() }).collect();
                let v = df.eval(&[u.clone(), iu.clone(), ex]);
                if !v.is_zero() {
                    out.add_term(&[x], v * &w);
                }
            }
        }
        out
    }

    /// `δF` from the frame sum: `δF(Y) = −(IδF)(IY)`.
    pub fn codifferential_sum(&self, alg: &CompactAlgebra<S>) -> Result<Form<S>> {
        let df = self.fundamental_form(alg)?.d(alg)?;
        let s = self.i_codifferential_sum(alg, &df);
        Ok(s.act(&self.complex_structure(alg)).scale(&S::from_i64(-1)))
    }

    /// Closed form `δF = −½ Σ_α (1/λ_α) α∘Λ`.
    pub fn codifferential_closed(&self, alg: &CompactAlgebra<S>) -> Result<Form<S>> {
        let mut acc = Form::zero(alg.dim(), 1)?;
        for a in 0..alg.p() {
            let w = self.lambda[a].inv().ok_or_else(|| Error::Hermitian(format!("lambda[{a}] = 0")))?;
            acc = acc.add(&root_form_composed(alg, a, &self.lambda_t).scale(&w));
        }
        Ok(acc.scale(&S::from_q(&crate::scalar::Q::new(-1, 2))))
    }

    /// `δF`, computed by both routes and required to agree.
    pub fn codifferential(&self, alg: &CompactAlgebra<S>) -> Result<Form<S>> {
        let a = self.codifferential_sum(alg)?;
        let b = self.codifferential_closed(alg)?;
        if !agree(&a, &b) {
            return Err(Error::Consistency("codifferential frame sum differs from closed form".into()));
        }
        Ok(b)
    }

    /// `ρ^B = ρ^Ch + dδF`, cross-checked against `½ Σ_α (dα − (1/λ_α) d(α∘Λ))`.
    pub fn bismut_ricci(&self, alg: &CompactAlgebra<S>) -> Result<Form<S>> {
        let rho = chern_ricci(alg)?.add(&self.codifferential(alg)?.d(alg)?);
        let mut other = Form::zero(alg.dim(), 2)?;
        for a in 0..alg.p() {
            let w = self.lambda[a].inv().expect("validated");
            let term = root_form(alg, a).sub(&root_form_composed(alg, a, &self.lambda_t).scale(&w));
            other = other.add(&term.d(alg)?);
        }
        let other = other.scale(&S::from_q(&crate::scalar::Q::new(1, 2)));
        if !agree(&rho, &other) {
            return Err(Error::Consistency("Bismut Ricci form differs between the two expressions".into()));
        }
        Ok(rho)
    }

    /// `ρ^Ch + dδF` with the closed-form codifferential, without validation.
    pub fn ricci_closed(&self, alg: &CompactAlgebra<S>) -> Result<Form<S>> {
        Ok(chern_ricci(alg)?.add(&self.codifferential_closed(alg)?.d(alg)?))
    }

    /// `dd^cF`.
    pub fn ddc(&self, alg: &CompactAlgebra<S>) -> Result<Form<S>> {
        crate::exterior::ddc(&self.fundamental_form(alg)?, &self.complex_structure(alg), alg)
    }

    /// Torsion 3-form `H(X,Y,Z) = g(T^B(X,Y),Z) = −dF(IX,IY,IZ)`.
    pub fn torsion_form(&self, alg: &CompactAlgebra<S>) -> Result<Form<S>> {
        Ok(self.fundamental_form(alg)?.d(alg)?.act(&self.complex_structure(alg)).scale(&S::from_i64(-1)))
    }

    /// Bismut connection `∇^B = ∇^LC + ½ g⁻¹H`.
    pub fn bismut_connection(&self, alg: &CompactAlgebra<S>) -> Result<Connection<S>> {
        let h = self.torsion_form(alg)?;
        let g = self.metric(alg);
        let ginv = g.inverse().ok_or_else(|| Error::Hermitian("degenerate metric".into()))?;
        let n = alg.dim();
        let half = S::from_q(&crate::scalar::Q::new(1, 2));
        // g([a,b], c)
        let gb = |a: usize, b: usize, c: usize| -> S {
            alg.bracket(a, b).iter().fold(S::zero(), |acc, (m, x)| acc + x.clone() * &g[(*m, c)])
        };
        let gamma: Vec<Mat<S>> = (0..n)
            .into_par_iter()
            .map(|i| {
                let omega = Mat::from_fn(n, n, |j, k| {
                    let koszul = gb(i, j, k) - gb(j, k, i) + gb(k, i, j);
                    (koszul + h.get(&[i, j, k])) * &half
                });
                // column j: coordinates of ∇_{e_i} e_j
                ginv.mul(&omega.transpose())
            })
            .collect();
        Ok(Connection { gamma })
    }

    pub fn bismut_curvature(&self, alg: &CompactAlgebra<S>) -> Result<Curvature<S>> {
        Ok(self.bismut_connection(alg)?.curvature(alg))
    }
}

fn agree<S: Scalar>(a: &Form<S>, b: &Form<S>) -> bool {
    let d = a.sub(b);
    match std::any::type_name::<S>() {
        "f64" => d.max_abs() <= 1e-9 * (1.0 + a.max_abs()),
        _ => d.is_zero(),
    }
}

/// Connection coefficients: `gamma[i]` is the matrix of `∇_{e_i}`.
#[derive(Clone, Debug)]
pub struct Connection<S> {
    pub gamma: Vec<Mat<S>>,
}

impl<S: Scalar> Connection<S> {
    /// `R(e_i,e_j) = [∇_i, ∇_j] − ∇_{[e_i,e_j]}` for `i < j`.
    pub fn curvature(&self, alg: &CompactAlgebra<S>) -> Curvature<S> {
        let n = alg.dim();
        let rows: Vec<Vec<(Index4, S)>> = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut out = Vec::new();
                for j in i + 1..n {
                    let mut r = self.gamma[i].mul(&self.gamma[j]).sub(&self.gamma[j].mul(&self.gamma[i]));
                    for (m, c) in alg.bracket(i, j) {
                        r = r.sub(&self.gamma[*m].scale(c));
                    }
                    for k in 0..n {
                        for l in 0..n {
                            if !r[(l, k)].is_zero() {
                                out.push(((i, j, k, l), r[(l, k)].clone()));
                            }
                        }
                    }
                }
                out
            })
            .collect();
        Curvature { dim: n, entries: rows.into_iter().flatten().collect() }
    }

    /// `g(∇_X Y, Z) + g(Y, ∇_X Z) = 0` on basis vectors.
    pub fn preserves_metric(&self, g: &Mat<S>) -> bool {
        self.gamma.iter().all(|gi| {
            let a = g.mul(gi);
            a.add(&a.transpose()).is_zero()
        })
    }

    /// `∇ I = I ∇`.
    pub fn preserves(&self, i_mat: &Mat<S>) -> bool {
        self.gamma.iter().all(|gi| gi.mul(i_mat) == i_mat.mul(gi))
    }
}

type Index4 = (usize, usize, usize, usize);

/// Nonzero components `R(e_i,e_j)e_k = Σ_l R^l e_l`, keyed by `(i, j, k, l)` with `i < j`.
#[derive(Clone, Debug)]
pub struct Curvature<S> {
    pub dim: usize,
    pub entries: BTreeMap<Index4, S>,
}

impl<S: Scalar> Curvature<S> {
    pub fn is_flat(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> S {
        use std::cmp::Ordering;
        match i.cmp(&j) {
            Ordering::Equal => S::zero(),
            Ordering::Less => self.entries.get(&(i, j, k, l)).cloned().unwrap_or_else(S::zero),
            Ordering::Greater => -self.entries.get(&(j, i, k, l)).cloned().unwrap_or_else(S::zero),
        }
    }
}

/// Root functional of plane `a` as a 1-form supported on the torus.
pub fn root_form<S: Scalar>(alg: &CompactAlgebra<S>, a: usize) -> Form<S> {
    let mut c = vec![S::zero(); alg.dim()];
    for (k, slot) in c.iter_mut().enumerate().take(alg.rank) {
        *slot = alg.root_on_torus(a, k);
    }
    Form::one_form(c)
}

/// `α∘Λ_t` as a torus 1-form.
pub fn root_form_composed<S: Scalar>(alg: &CompactAlgebra<S>, a: usize, lambda_t: &Mat<S>) -> Form<S> {
    let r = alg.rank;
    let vals: Vec<S> = (0..r).map(|m| alg.root_on_torus(a, m)).collect();
    let mut c = vec![S::zero(); alg.dim()];
    for (k, slot) in c.iter_mut().enumerate().take(r) {
        *slot = (0..r).fold(S::zero(), |acc, m| acc + lambda_t[(m, k)].clone() * &vals[m]);
    }
    Form::one_form(c)
}

/// Simple root `α_j` as a 1-form.
pub fn simple_root_form<S: Scalar>(alg: &CompactAlgebra<S>, j: usize) -> Result<Form<S>> {
    let a = alg.simple_root_matrix()?;
    let mut c = vec![S::zero(); alg.dim()];
    for (k, slot) in c.iter_mut().enumerate().take(alg.rank) {
        *slot = a[(j, k)].clone();
    }
    Ok(Form::one_form(c))
}

/// Closed form `dα_j = Σ_α B(H_{α_j}, H_α) n_α X^α ∧ Y^α` from root data.
pub fn droot<S: Scalar>(rs: &RootSystem, alg: &CompactAlgebra<S>, j: usize) -> Result<Form<S>> {
    let mut out = Form::zero(alg.dim(), 2)?;
    for a in 0..alg.p() {
        let idx = rs
            .index_of(&alg.root_coords[a])
            .ok_or_else(|| Error::Consistency(format!("plane {a} is not a root of the system")))?;
        let c = S::from_q(&rs.pairing(j, idx)) * &alg.plane_norm(a);
        if !c.is_zero() {
            out.add_term(&[alg.x(a), alg.y(a)], c);
        }
    }
    let generic = simple_root_form(alg, j)?.d(alg)?;
    if !agree(&generic, &out) {
        return Err(Error::Consistency(format!("closed form of dα_{j} differs from generic d")));
    }
    Ok(out)
}

/// `ρ^Ch = ½ Σ_α dα`.
pub fn chern_ricci<S: Scalar>(alg: &CompactAlgebra<S>) -> Result<Form<S>> {
    let mut sum = Form::zero(alg.dim(), 1)?;
    for a in 0..alg.p() {
        sum = sum.add(&root_form(alg, a));
    }
    Ok(sum.d(alg)?.scale(&S::from_q(&crate::scalar::Q::new(1, 2))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compact_algebra::build_compact_form;
    use crate::root_data::build_root_system;
    use crate::scalar::Surd;

    fn setup(s: &str) -> (RootSystem, CompactAlgebra<Surd>) {
        let rs = build_root_system(&s.parse().unwrap()).unwrap();
        let alg = build_compact_form(&rs).unwrap();
        (rs, alg)
    }

    fn su3(lambda: [(i64, i64); 3]) -> (CompactAlgebra<Surd>, HermitianStructure<Surd>) {
        let (_, alg) = setup("A2");
        let mut h = HermitianStructure::bi_invariant(&alg).unwrap();
        h.lambda = lambda.iter().map(|&(n, d)| Surd::frac(n, d)).collect();
        (alg, h)
    }

    #[test]
    fn bi_invariant_metric_is_flat_and_ricci_flat() {
        for s in ["A2", "B2", "G2"] {
            let (_, alg) = setup(s);
            let h = HermitianStructure::bi_invariant(&alg).unwrap();
            h.validate(&alg).unwrap();
            assert!(h.bismut_ricci(&alg).unwrap().is_zero(), "{s}");
            assert!(h.ddc(&alg).unwrap().is_zero(), "{s}");
            assert!(h.bismut_curvature(&alg).unwrap().is_flat(), "{s}");
        }
    }

    #[test]
    fn su3_cyt_worked_case() {
        let (alg, h) = su3([(2, 1), (2, 1), (2, 3)]);
        assert!(h.bismut_ricci(&alg).unwrap().is_zero());
        let (alg, h) = su3([(2, 1), (2, 1), (2, 1)]);
        assert!(!h.bismut_ricci(&alg).unwrap().is_zero());
    }

    #[test]
    fn bismut_connection_is_hermitian() {
        let (alg, h) = su3([(3, 1), (1, 2), (5, 4)]);
        let c = h.bismut_connection(&alg).unwrap();
        assert!(c.preserves_metric(&h.metric(&alg)));
        assert!(c.preserves(&h.complex_structure(&alg)));
        assert!(!c.curvature(&alg).is_flat());
    }

    #[test]
    fn fundamental_form_is_one_one() {
        let (alg, h) = su3([(3, 1), (1, 2), (5, 4)]);
        let f = h.fundamental_form(&alg).unwrap();
        assert_eq!(f.act(&h.complex_structure(&alg)), f);
        assert_eq!(f.get(&[alg.x(0), alg.y(0)]), Surd::int(3));
    }

    #[test]
    fn codifferential_is_torus_supported() {
        let (alg, h) = su3([(3, 1), (1, 2), (5, 4)]);
        let df = h.codifferential(&alg).unwrap();
        for (idx, _) in df.entries() {
            assert!(alg.is_torus(idx[0]));
        }
    }

    #[test]
    fn droot_matches_generic_d() {
        for s in ["A2", "B2", "G2", "A2xA2"] {
            let (rs, alg) = setup(s);
            for j in 0..rs.rank {
                droot(&rs, &alg, j).unwrap();
            }
        }
    }

    #[test]
    fn invalid_structures_are_rejected() {
        let (_, alg) = setup("A2");
        let mut h = HermitianStructure::bi_invariant(&alg).unwrap();
        h.lambda[1] = Surd::int(-1);
        assert!(h.validate(&alg).is_err());
        let mut h = HermitianStructure::bi_invariant(&alg).unwrap();
        h.torus_j = Mat::identity(2);
        assert!(h.validate(&alg).is_err());
    }
}
