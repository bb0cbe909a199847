//! SKT family, CYT equations and the combined rigidity system.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::compact_algebra::CompactAlgebra;
use crate::error::{Error, Result};
use crate::hermitian::HermitianStructure;
use crate::linalg::Mat;
use crate::report::{ser_qvec, surd_rows};
use crate::root_data::{height, RootSystem};
use crate::scalar::{rationalize, Scalar, Surd, Q};

/// One affine generator: derivative of `(λ_α, ν_c)` along a parameter.
#[derive(Clone, Debug, Serialize)]
pub struct Generator {
    pub parameter: String,
    #[serde(serialize_with = "ser_qvec")]
    pub lambda: Vec<Q>,
    #[serde(serialize_with = "ser_qvec")]
    pub nu: Vec<Q>,
}

/// `Σ_k coefficients[k] θ_k > 0`.
#[derive(Clone, Debug, Serialize)]
pub struct Inequality {
    pub quantity: String,
    #[serde(serialize_with = "ser_qvec")]
    pub coefficients: Vec<Q>,
}

/// SKT metrics `λ_α = ν_c + Σ_j N_j B(H_{α_j}, H_α)`, `Λ|_𝔱 = ν_c` on each scale class `c`,
/// linear in `θ = (N_1..N_r, ν_1..ν_m)`.
#[derive(Clone, Debug, Serialize)]
pub struct MetricFamily {
    pub group: String,
    pub rank: usize,
    pub roots: Vec<Vec<i64>>,
    /// Simple factors sharing one torus scale (linked by the torus complex structure).
    pub scale_classes: Vec<Vec<usize>>,
    pub parameters: Vec<String>,
    #[serde(serialize_with = "ser_qvec")]
    pub base: Vec<Q>,
    #[serde(serialize_with = "ser_qvec")]
    pub lambda_tilde_base: Vec<Q>,
    #[serde(serialize_with = "ser_qvec")]
    pub n_tilde_base: Vec<Q>,
    #[serde(serialize_with = "ser_qvec")]
    pub nu_base: Vec<Q>,
    pub generators: Vec<Generator>,
    pub positivity: Vec<Inequality>,
    pub torus_j: Vec<Vec<String>>,
    #[serde(skip)]
    class_of_torus: Vec<usize>,
    #[serde(skip)]
    torus_j_exact: Mat<Surd>,
}

fn scale_classes<S: Scalar>(alg: &CompactAlgebra<S>, j: &Mat<S>, factors: usize) -> (Vec<Vec<usize>>, Vec<usize>) {
    let mut parent: Vec<usize> = (0..factors).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for a in 0..alg.rank {
        for b in 0..alg.rank {
            if !j[(a, b)].is_zero() {
                let (x, y) = (find(&mut parent, alg.factor_of_torus[a]), find(&mut parent, alg.factor_of_torus[b]));
                parent[x.max(y)] = x.min(y);
            }
        }
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut class_of_factor = vec![0; factors];
    for f in 0..factors {
        let root = find(&mut parent, f);
        match classes.iter().position(|c| c[0] == root) {
            Some(c) => {
                classes[c].push(f);
                class_of_factor[f] = c;
            }
            None => {
                class_of_factor[f] = classes.len();
                classes.push(vec![f]);
            }
        }
    }
    (classes, class_of_factor)
}

fn check_planes(rs: &RootSystem, alg: &CompactAlgebra<Surd>) -> Result<()> {
    if rs.rank % 2 == 1 {
        return Err(Error::OddRank(rs.rank));
    }
    if alg.root_coords != rs.positive_roots || alg.rank != rs.rank {
        return Err(Error::Consistency("algebra planes do not follow the root system order".into()));
    }
    Ok(())
}

/// The exact SKT family on a Samelson structure with the default torus `J`.
pub fn solve_skt(rs: &RootSystem, alg: &CompactAlgebra<Surd>) -> Result<MetricFamily> {
    check_planes(rs, alg)?;
    let h = HermitianStructure::bi_invariant(alg)?;
    solve_skt_with(rs, alg, h.torus_j)
}

pub fn solve_skt_with(rs: &RootSystem, alg: &CompactAlgebra<Surd>, torus_j: Mat<Surd>) -> Result<MetricFamily> {
    check_planes(rs, alg)?;
    let (r, p) = (rs.rank, rs.p());
    let (classes, class_of_factor) = scale_classes(alg, &torus_j, rs.factors());
    let m = classes.len();
    let class_of_root: Vec<usize> = rs.factor_of_root.iter().map(|&f| class_of_factor[f]).collect();
    let class_of_torus: Vec<usize> = alg.factor_of_torus.iter().map(|&f| class_of_factor[f]).collect();

    let mut parameters: Vec<String> = (1..=r).map(|j| format!("N{j}")).collect();
    parameters.extend((1..=m).map(|c| format!("nu{c}")));
    let mut generators = Vec::new();
    for j in 0..r {
        generators.push(Generator {
            parameter: parameters[j].clone(),
            lambda: (0..p).map(|a| rs.pairing(j, a)).collect(),
            nu: vec![Q::from_integer(0); m],
        });
    }
    for c in 0..m {
        generators.push(Generator {
            parameter: parameters[r + c].clone(),
            lambda: (0..p).map(|a| Q::from_integer(i128::from(class_of_root[a] == c))).collect(),
            nu: (0..m).map(|d| Q::from_integer(i128::from(c == d))).collect(),
        });
    }
    let mut positivity: Vec<Inequality> = (0..p)
        .map(|a| Inequality {
            quantity: format!("lambda[{}]", alg.labels[alg.x(a)].trim_start_matches('X')),
            coefficients: generators.iter().map(|g| g.lambda[a]).collect(),
        })
        .collect();
    for c in 0..m {
        positivity.push(Inequality {
            quantity: format!("nu{}", c + 1),
            coefficients: generators.iter().map(|g| g.nu[c]).collect(),
        });
    }
    let mut base = vec![Q::from_integer(0); r];
    base.extend(vec![Q::from_integer(1); m]);
    Ok(MetricFamily {
        group: rs.spec.to_string(),
        rank: r,
        roots: rs.positive_roots.clone(),
        scale_classes: classes,
        parameters,
        base,
        lambda_tilde_base: vec![Q::from_integer(1); p],
        n_tilde_base: vec![Q::from_integer(0); r],
        nu_base: vec![Q::from_integer(1); m],
        generators,
        positivity,
        torus_j: surd_rows(&torus_j),
        class_of_torus,
        torus_j_exact: torus_j,
    })
}

impl MetricFamily {
    pub fn dimension(&self) -> usize {
        self.generators.len()
    }

    pub fn lambda_at(&self, theta: &[Q]) -> Vec<Q> {
        (0..self.roots.len())
            .map(|a| self.generators.iter().zip(theta).map(|(g, t)| g.lambda[a] * t).sum())
            .collect()
    }

    pub fn nu_at(&self, theta: &[Q]) -> Vec<Q> {
        theta[self.rank..].to_vec()
    }

    pub fn is_positive(&self, theta: &[Q]) -> bool {
        self.positivity
            .iter()
            .all(|ineq| ineq.coefficients.iter().zip(theta).map(|(c, t)| c * t).sum::<Q>() > Q::from_integer(0))
    }

    pub fn structure(&self, alg: &CompactAlgebra<Surd>, theta: &[Q]) -> Result<HermitianStructure<Surd>> {
        if theta.len() != self.dimension() {
            return Err(Error::Index { index: theta.len(), dim: self.dimension() });
        }
        let nu: Vec<Surd> = self.nu_at(theta).into_iter().map(Surd::from_q).collect();
        let r = self.rank;
        let lambda_t =
            Mat::from_fn(r, r, |i, j| if i == j { nu[self.class_of_torus[i]].clone() } else { Surd::zero() });
        let h = HermitianStructure {
            torus_j: self.torus_j_exact.clone(),
            lambda_t,
            lambda: self.lambda_at(theta).into_iter().map(Surd::from_q).collect(),
        };
        h.validate(alg)?;
        Ok(h)
    }

    /// Random rational parameter points strictly inside the positivity region.
    pub fn sample(&self, rng: &mut impl Rng, count: usize) -> Vec<Vec<Q>> {
        let r = self.rank;
        let spread: Q = (0..self.roots.len())
            .map(|a| self.generators[..r].iter().map(|g| num_traits::Signed::abs(&g.lambda[a])).sum::<Q>())
            .max()
            .unwrap_or_else(|| Q::from_integer(1));
        let mut out = Vec::new();
        while out.len() < count {
            let mut theta: Vec<Q> = (0..self.dimension())
                .map(|k| {
                    if k < r {
                        Q::new(rng.gen_range(-20..=20), 24) / spread
                    } else {
                        Q::new(rng.gen_range(10..=30), 10)
                    }
                })
                .collect();
            if !self.is_positive(&theta) {
                for t in theta.iter_mut().take(r) {
                    *t /= Q::from_integer(2);
                }
            }
            if self.is_positive(&theta) {
                out.push(theta);
            }
        }
        out
    }

    /// `dd^cF = 0` exactly at a parameter point.
    pub fn verify_point(&self, alg: &CompactAlgebra<Surd>, theta: &[Q]) -> Result<bool> {
        Ok(self.structure(alg, theta)?.ddc(alg)?.is_zero())
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct NewtonOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions { tol: 1e-12, max_iter: 100 }
    }
}

#[derive(Clone, Debug)]
struct NewtonResult {
    u: Vec<f64>,
    iterations: usize,
    residual: f64,
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Damped Newton with pseudo-inverse steps: least-norm when underdetermined,
/// least squares when overdetermined. `f` returns `None` outside the feasible set.
fn damped_newton(
    u0: Vec<f64>,
    f: impl Fn(&[f64]) -> Option<Vec<f64>>,
    jac: impl Fn(&[f64]) -> DMatrix<f64>,
    opts: NewtonOptions,
) -> Result<NewtonResult> {
    let mut u = u0;
    let mut res = f(&u).ok_or_else(|| Error::Hermitian("starting point is not positive".into()))?;
    let mut norm = inf_norm(&res);
    for it in 0..=opts.max_iter {
        if norm < opts.tol {
            return Ok(NewtonResult { u, iterations: it, residual: norm });
        }
        if it == opts.max_iter {
            break;
        }
        let j = jac(&u);
        let rhs = DVector::from_iterator(res.len(), res.iter().map(|x| -x));
        let step = j
            .svd(true, true)
            .solve(&rhs, 1e-14)
            .map_err(|e| Error::Consistency(format!("newton step: {e}")))?;
        let mut t = 1.0;
        loop {
            let cand: Vec<f64> = u.iter().zip(step.iter()).map(|(a, s)| a + t * s).collect();
            if let Some(r) = f(&cand) {
                let n = inf_norm(&r);
                if n < norm {
                    u = cand;
                    res = r;
                    norm = n;
                    break;
                }
            }
            t *= 0.5;
            if t < 1e-12 {
                return Err(Error::NoConvergence { iterations: it, residual: norm });
            }
        }
    }
    Err(Error::NoConvergence { iterations: opts.max_iter, residual: norm })
}

/// `R_k(λ) = Σ_α (ᾱ(T_k) − (1/λ_α) ᾱ(Λ T_k))`; `ρ^B = 0` iff `R = 0`.
pub struct CytEquations {
    a: Vec<Vec<f64>>,
    a_lambda: Vec<Vec<f64>>,
}

impl CytEquations {
    pub fn new<S: Scalar>(alg: &CompactAlgebra<S>, lambda_t: &Mat<S>) -> Self {
        let (r, p) = (alg.rank, alg.p());
        let a: Vec<Vec<f64>> = (0..p).map(|al| (0..r).map(|k| alg.root_on_torus(al, k).to_f64()).collect()).collect();
        let lt = lambda_t.map(Scalar::to_f64);
        let a_lambda = a.iter().map(|row| (0..r).map(|k| (0..r).map(|m| row[m] * lt[(m, k)]).sum()).collect()).collect();
        CytEquations { a, a_lambda }
    }

    pub fn residual(&self, lambda: &[f64]) -> Vec<f64> {
        let r = self.a.first().map_or(0, Vec::len);
        (0..r)
            .map(|k| self.a.iter().zip(&self.a_lambda).zip(lambda).map(|((a, al), l)| a[k] - al[k] / l).sum())
            .collect()
    }

    /// `∂R_k/∂λ_α`.
    pub fn jacobian(&self, lambda: &[f64]) -> DMatrix<f64> {
        let r = self.a.first().map_or(0, Vec::len);
        DMatrix::from_fn(r, lambda.len(), |k, al| self.a_lambda[al][k] / (lambda[al] * lambda[al]))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CytSolution {
    pub lambda: Vec<f64>,
    pub fixed: Vec<usize>,
    pub iterations: usize,
    pub residual: f64,
    /// Max coefficient of `ρ^B` evaluated in floating point.
    pub ricci_max: f64,
    /// Rational point on the slice with `ρ^B = 0` exactly, when found.
    #[serde(serialize_with = "ser_opt_qvec")]
    pub certified: Option<Vec<Q>>,
}

fn ser_opt_qvec<Ser: serde::Serializer>(v: &Option<Vec<Q>>, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
    match v {
        Some(v) => ser_qvec(v, s),
        None => s.serialize_none(),
    }
}

/// Coordinates fixed by default: the `p − r` roots of greatest height.
pub fn default_slice(alg: &CompactAlgebra<Surd>) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..alg.p()).collect();
    idx.sort_by_key(|&a| std::cmp::Reverse(height(&alg.root_coords[a])));
    let mut fixed: Vec<usize> = idx.into_iter().take(alg.p().saturating_sub(alg.rank)).collect();
    fixed.sort_unstable();
    fixed
}

/// Solve the CYT equations for `λ` with `Λ_t` and the fixed coordinates of `init` held.
pub fn solve_cyt(
    alg: &CompactAlgebra<Surd>,
    init: &HermitianStructure<Surd>,
    fixed: Option<Vec<usize>>,
    opts: NewtonOptions,
) -> Result<CytSolution> {
    init.validate(alg)?;
    let p = alg.p();
    let fixed = fixed.unwrap_or_else(|| default_slice(alg));
    if let Some(&bad) = fixed.iter().find(|&&a| a >= p) {
        return Err(Error::Index { index: bad, dim: p });
    }
    let free: Vec<usize> = (0..p).filter(|a| !fixed.contains(a)).collect();
    let eqs = CytEquations::new(alg, &init.lambda_t);
    let lam0: Vec<f64> = init.lambda.iter().map(Scalar::to_f64).collect();
    let assemble = |u: &[f64]| -> Vec<f64> {
        let mut l = lam0.clone();
        for (k, &a) in free.iter().enumerate() {
            l[a] = u[k];
        }
        l
    };
    let f = |u: &[f64]| -> Option<Vec<f64>> {
        u.iter().all(|&x| x > 0.0).then(|| eqs.residual(&assemble(u)))
    };
    let jac = |u: &[f64]| -> DMatrix<f64> {
        let full = eqs.jacobian(&assemble(u));
        DMatrix::from_fn(full.nrows(), free.len(), |i, k| full[(i, free[k])])
    };
    let u0: Vec<f64> = free.iter().map(|&a| lam0[a]).collect();
    let nr = damped_newton(u0, f, jac, opts)?;
    let lambda = assemble(&nr.u);

    let lt_f = init.lambda_t.map(Scalar::to_f64);
    let alg_f = alg.to_f64();
    let hf = HermitianStructure { torus_j: init.torus_j.map(Scalar::to_f64), lambda_t: lt_f, lambda: lambda.clone() };
    let ricci_max = hf.ricci_closed(&alg_f)?.max_abs();

    let mut candidate = init.lambda.clone();
    let mut rational = true;
    for &a in &free {
        match rationalize(lambda[a], 1_000_000) {
            Some(q) if q > Q::from_integer(0) => candidate[a] = Surd::from_q(q),
            _ => rational = false,
        }
    }
    let certified = if rational {
        let h = HermitianStructure { lambda: candidate.clone(), ..init.clone() };
        if h.validate(alg).is_ok() && h.bismut_ricci(alg)?.is_zero() {
            candidate.iter().map(Surd::as_rational).collect()
        } else {
            None
        }
    } else {
        None
    };
    Ok(CytSolution { lambda, fixed, iterations: nr.iterations, residual: nr.residual, ricci_max, certified })
}

#[derive(Clone, Debug, Serialize)]
pub struct Trajectory {
    pub restart: usize,
    pub seed: u64,
    pub start: Vec<f64>,
    pub end: Vec<f64>,
    pub iterations: usize,
    pub residual: f64,
    pub converged: bool,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct RigidityOptions {
    pub restarts: usize,
    pub seed: u64,
    pub newton: NewtonOptions,
    pub l_samples: usize,
    pub dedup: f64,
    /// Also evaluate the Bismut curvature exactly at the bi-invariant point.
    pub exact_curvature: bool,
}

impl Default for RigidityOptions {
    fn default() -> Self {
        RigidityOptions {
            restarts: 100,
            seed: 20_160_510,
            newton: NewtonOptions::default(),
            l_samples: 50,
            dedup: 1e-9,
            exact_curvature: true,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RigidityReport {
    pub group: String,
    pub rank: usize,
    pub positive_roots: usize,
    pub options: RigidityOptions,
    pub converged: usize,
    /// Distinct converged solutions `Ñ` after rounding.
    pub solutions: Vec<Vec<f64>>,
    /// Solutions other than `Ñ = 0`; nonempty would contradict rigidity.
    pub counterexamples: Vec<Vec<f64>>,
    pub unique_bi_invariant: bool,
    /// The residual vanishes exactly at `Ñ = 0`.
    pub origin_exact: bool,
    pub bismut_flat_at_origin: Option<bool>,
    pub l_min_eigenvalue: f64,
    pub l_min_eigenvalue_at_one: f64,
    pub trajectories: Vec<Trajectory>,
}

/// `L_il = Σ_α x_α^i x_α^l / λ̃_α`.
pub fn l_matrix(rs: &RootSystem, lambda_tilde: &[f64]) -> DMatrix<f64> {
    let r = rs.rank;
    DMatrix::from_fn(r, r, |i, l| {
        rs.positive_roots.iter().zip(lambda_tilde).map(|(x, lt)| (x[i] * x[l]) as f64 / lt).sum()
    })
}

pub fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}

/// Combined SKT + CYT system in the unknowns `Ñ`:
/// `Σ_α (1 − 1/λ̃_α) ᾱ(T_k) = 0`, `λ̃_α = 1 + Σ_j Ñ_j B(H_{α_j}, H_α)`.
pub struct CombinedSystem {
    g: Vec<Vec<f64>>,
    a: Vec<Vec<f64>>,
}

impl CombinedSystem {
    pub fn new(rs: &RootSystem, alg: &CompactAlgebra<Surd>) -> Self {
        let (r, p) = (rs.rank, rs.p());
        let g = (0..p).map(|a| (0..r).map(|j| *rs.pairing(j, a).numer() as f64 / *rs.pairing(j, a).denom() as f64).collect()).collect();
        let a = (0..p).map(|al| (0..r).map(|k| alg.root_on_torus(al, k).to_f64()).collect()).collect();
        CombinedSystem { g, a }
    }

    pub fn lambda_tilde(&self, n: &[f64]) -> Vec<f64> {
        self.g.iter().map(|row| 1.0 + row.iter().zip(n).map(|(g, x)| g * x).sum::<f64>()).collect()
    }

    pub fn residual(&self, n: &[f64]) -> Option<Vec<f64>> {
        let lt = self.lambda_tilde(n);
        if lt.iter().any(|&l| l <= 0.0) {
            return None;
        }
        let r = n.len();
        Some((0..r).map(|k| self.a.iter().zip(&lt).map(|(a, l)| (1.0 - 1.0 / l) * a[k]).sum()).collect())
    }

    pub fn jacobian(&self, n: &[f64]) -> DMatrix<f64> {
        let lt = self.lambda_tilde(n);
        let r = n.len();
        DMatrix::from_fn(r, r, |k, j| {
            self.a.iter().zip(&self.g).zip(&lt).map(|((a, g), l)| g[j] * a[k] / (l * l)).sum()
        })
    }

    /// Random point with every `λ̃_α > 0`.
    pub fn random_start(&self, rng: &mut impl Rng) -> Vec<f64> {
        let r = self.g.first().map_or(0, Vec::len);
        let spread = self.g.iter().map(|row| row.iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max);
        let safe = 0.95 / spread;
        for _ in 0..64 {
            let s = safe * rng.gen_range(0.5..4.0);
            let n: Vec<f64> = (0..r).map(|_| s * rng.gen_range(-1.0..1.0)).collect();
            if self.residual(&n).is_some() {
                return n;
            }
        }
        (0..r).map(|_| safe * rng.gen_range(-1.0..1.0)).collect()
    }
}

pub fn solve_skt_cyt(rs: &RootSystem, alg: &CompactAlgebra<Surd>, opts: RigidityOptions) -> Result<RigidityReport> {
    check_planes(rs, alg)?;
    let sys = CombinedSystem::new(rs, alg);
    let trajectories: Vec<Trajectory> = (0..opts.restarts)
        .into_par_iter()
        .map(|restart| {
            let seed = opts.seed.wrapping_add(restart as u64);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let start = sys.random_start(&mut rng);
            match damped_newton(start.clone(), |n| sys.residual(n), |n| sys.jacobian(n), opts.newton) {
                Ok(nr) => Trajectory {
                    restart,
                    seed,
                    start,
                    end: nr.u,
                    iterations: nr.iterations,
                    residual: nr.residual,
                    converged: true,
                },
                Err(e) => {
                    let (iterations, residual) = match e {
                        Error::NoConvergence { iterations, residual } => (iterations, residual),
                        _ => (0, f64::NAN),
                    };
                    Trajectory { restart, seed, end: start.clone(), start, iterations, residual, converged: false }
                }
            }
        })
        .collect();

    let round = |x: f64| (x / opts.dedup).round() * opts.dedup + 0.0;
    let mut solutions: Vec<Vec<f64>> = Vec::new();
    for t in trajectories.iter().filter(|t| t.converged) {
        let key: Vec<f64> = t.end.iter().map(|&x| round(x)).collect();
        if !solutions.iter().any(|s| s.iter().zip(&key).all(|(a, b)| (a - b).abs() <= opts.dedup)) {
            solutions.push(key);
        }
    }
    solutions.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let counterexamples: Vec<Vec<f64>> =
        solutions.iter().filter(|s| s.iter().any(|x| x.abs() > opts.dedup)).cloned().collect();
    let converged = trajectories.iter().filter(|t| t.converged).count();

    let bi = HermitianStructure::bi_invariant(alg)?;
    let origin_exact = bi.bismut_ricci(alg)?.is_zero();
    let bismut_flat_at_origin = if opts.exact_curvature { Some(bi.bismut_curvature(alg)?.is_flat()) } else { None };

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x4c4d_4154);
    let l_min_eigenvalue = (0..opts.l_samples)
        .map(|_| {
            let lt: Vec<f64> = (0..rs.p()).map(|_| rng.gen_range(-3.0f64..3.0).exp()).collect();
            min_eigenvalue(&l_matrix(rs, &lt))
        })
        .fold(f64::INFINITY, f64::min);
    let l_min_eigenvalue_at_one = min_eigenvalue(&l_matrix(rs, &vec![1.0; rs.p()]));

    Ok(RigidityReport {
        group: rs.spec.to_string(),
        rank: rs.rank,
        positive_roots: rs.p(),
        options: opts,
        converged,
        unique_bi_invariant: converged > 0 && counterexamples.is_empty(),
        solutions,
        counterexamples,
        origin_exact,
        bismut_flat_at_origin,
        l_min_eigenvalue,
        l_min_eigenvalue_at_one,
        trajectories,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compact_algebra::build_compact_form;
    use crate::root_data::build_root_system;

    fn setup(s: &str) -> (RootSystem, CompactAlgebra<Surd>) {
        let rs = build_root_system(&s.parse().unwrap()).unwrap();
        let alg = build_compact_form(&rs).unwrap();
        (rs, alg)
    }

    #[test]
    fn skt_family_dimension() {
        for (s, dim) in [("A2", 3), ("B2", 3), ("G2", 3), ("A2xA2", 6), ("A1xA1", 3)] {
            let (rs, alg) = setup(s);
            assert_eq!(solve_skt(&rs, &alg).unwrap().dimension(), dim, "{s}");
        }
    }

    #[test]
    fn skt_base_point_is_bi_invariant() {
        let (rs, alg) = setup("A2");
        let fam = solve_skt(&rs, &alg).unwrap();
        assert!(fam.lambda_at(&fam.base).iter().all(|l| *l == Q::from_integer(1)));
        let h = fam.structure(&alg, &fam.base).unwrap();
        assert_eq!(h, HermitianStructure::bi_invariant(&alg).unwrap());
    }

    #[test]
    fn skt_a2_top_root_coefficient() {
        let (rs, alg) = setup("A2");
        let fam = solve_skt(&rs, &alg).unwrap();
        let theta = vec![Q::new(1, 3), Q::new(-1, 5), Q::from_integer(1)];
        let top = rs.index_of(&[1, 1]).unwrap();
        let g = &rs.gram;
        let want = Q::from_integer(1) + theta[0] * (g[0][0] + g[0][1]) + theta[1] * (g[1][0] + g[1][1]);
        assert_eq!(fam.lambda_at(&theta)[top], want);
    }

    #[test]
    fn skt_samples_are_pluriclosed() {
        for s in ["A2", "B2", "A1xA1"] {
            let (rs, alg) = setup(s);
            let fam = solve_skt(&rs, &alg).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(3);
            for theta in fam.sample(&mut rng, 3) {
                assert!(fam.verify_point(&alg, &theta).unwrap(), "{s} {theta:?}");
            }
        }
    }

    #[test]
    fn generic_metric_is_not_pluriclosed() {
        let (_, alg) = setup("A2");
        let mut h = HermitianStructure::bi_invariant(&alg).unwrap();
        h.lambda = vec![Surd::int(1), Surd::int(2), Surd::int(5)];
        assert!(!h.ddc(&alg).unwrap().is_zero());
    }

    #[test]
    fn odd_rank_rejected() {
        let (rs, alg) = setup("A3");
        assert!(matches!(solve_skt(&rs, &alg), Err(Error::OddRank(3))));
    }

    #[test]
    fn cyt_su3_slice() {
        let (_, alg) = setup("A2");
        let mut h = HermitianStructure::bi_invariant(&alg).unwrap();
        h.lambda = vec![Surd::int(2), Surd::int(2), Surd::int(1)];
        let sol = solve_cyt(&alg, &h, Some(vec![0, 1]), NewtonOptions::default()).unwrap();
        assert!((sol.lambda[2] - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(sol.certified.unwrap()[2], Q::new(2, 3));
    }

    #[test]
    fn cyt_exact_root_takes_no_steps() {
        let (_, alg) = setup("B2");
        let h = HermitianStructure::bi_invariant(&alg).unwrap();
        let sol = solve_cyt(&alg, &h, None, NewtonOptions::default()).unwrap();
        assert_eq!(sol.iterations, 0);
    }

    #[test]
    fn cyt_default_slice_converges() {
        let (_, alg) = setup("G2");
        let mut h = HermitianStructure::bi_invariant(&alg).unwrap();
        h.lambda = (0..6).map(|a| Surd::frac(a + 2, 3)).collect();
        let sol = solve_cyt(&alg, &h, None, NewtonOptions::default()).unwrap();
        assert!(sol.residual < 1e-12);
        assert!(sol.ricci_max < 1e-10);
    }

    #[test]
    fn rigidity_su3() {
        let (rs, alg) = setup("A2");
        let opts = RigidityOptions { restarts: 20, ..Default::default() };
        let rep = solve_skt_cyt(&rs, &alg, opts).unwrap();
        assert!(rep.unique_bi_invariant);
        assert_eq!(rep.solutions.len(), 1);
        assert!(rep.l_min_eigenvalue > 0.0);
        assert_eq!(rep.bismut_flat_at_origin, Some(true));
    }

    #[test]
    fn l_at_one_is_gram_of_coordinate_vectors() {
        let (rs, _) = setup("B2");
        let l = l_matrix(&rs, &[1.0; 4]);
        let v: Vec<Vec<f64>> = (0..2).map(|i| rs.positive_roots.iter().map(|x| x[i] as f64).collect()).collect();
        for i in 0..2 {
            for k in 0..2 {
                let dot: f64 = v[i].iter().zip(&v[k]).map(|(a, b)| a * b).sum();
                assert_eq!(l[(i, k)], dot);
            }
        }
    }
}
