//! The SO(9) example: a 9×9 matrix realization of `so(9)`, its complex
//! structure equations and a five-parameter family of SKT metrics.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::compact_algebra::{CompactAlgebra, SparseVec};
use crate::error::{Error, ParseError, Result};
use crate::exterior::Form;
use crate::hermitian::HermitianStructure;
use crate::linalg::Mat;
use crate::root_data::RootSystem;
use crate::scalar::{fmt_q, Surd, Q};
use crate::solvers::solve_skt;

pub const FIXTURE: &str = include_str!("../data/so9_fixture.toml");
pub const FIXTURE_SHA256: &str = "67161a1065f5fad0bf0b358b77bda11891ef226fa0a5a333c1715a05c82e1e27";

const DIM: usize = 36;
const RANK: usize = 4;
const PLANES: usize = 16;

/// `a + ib` over [`Surd`].
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CSurd {
    pub re: Surd,
    pub im: Surd,
}

impl CSurd {
    pub fn new(re: Surd, im: Surd) -> Self {
        CSurd { re, im }
    }

    pub fn real(re: Surd) -> Self {
        CSurd { re, im: Surd::zero() }
    }

    pub fn i() -> Self {
        CSurd { re: Surd::zero(), im: Surd::int(1) }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        CSurd { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn norm_sq(&self) -> Surd {
        self.re.clone() * &self.re + self.im.clone() * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        let n = self.norm_sq().inv()?;
        Some(CSurd { re: self.re.clone() * &n, im: -self.im.clone() * &n })
    }
}

impl Add for CSurd {
    type Output = CSurd;
    fn add(self, o: CSurd) -> CSurd {
        CSurd { re: self.re + o.re, im: self.im + o.im }
    }
}

impl Sub for CSurd {
    type Output = CSurd;
    fn sub(self, o: CSurd) -> CSurd {
        CSurd { re: self.re - o.re, im: self.im - o.im }
    }
}

impl Neg for CSurd {
    type Output = CSurd;
    fn neg(self) -> CSurd {
        CSurd { re: -self.re, im: -self.im }
    }
}

impl Mul for CSurd {
    type Output = CSurd;
    fn mul(self, o: CSurd) -> CSurd {
        CSurd {
            re: self.re.clone() * &o.re - self.im.clone() * &o.im,
            im: self.re * &o.im + self.im * &o.re,
        }
    }
}

impl fmt::Display for CSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "i({})", self.im),
            (false, false) => write!(f, "{} + i({})", self.re, self.im),
        }
    }
}

impl std::str::FromStr for CSurd {
    type Err = ParseError;
    /// `"1/2"`, `"-i/2"`, `"√2/2"`, `"i"`.
    fn from_str(s: &str) -> std::result::Result<Self, ParseError> {
        let t = s.trim();
        let (neg, body) = match t.strip_prefix('-') {
            Some(b) => (true, b),
            None => (false, t),
        };
        let (imag, body) = match body.strip_prefix('i') {
            Some(rest) => (true, format!("1{rest}")),
            None => (false, body.to_string()),
        };
        let mut v: Surd = body.parse()?;
        if neg {
            v = -v;
        }
        Ok(if imag { CSurd::new(Surd::zero(), v) } else { CSurd::real(v) })
    }
}

/// `φ_k` or its conjugate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Phi {
    pub k: usize,
    pub bar: bool,
}

impl std::str::FromStr for Phi {
    type Err = ParseError;
    fn from_str(s: &str) -> std::result::Result<Self, ParseError> {
        let (body, bar) = match s.strip_suffix('b') {
            Some(b) => (b, true),
            None => (s, false),
        };
        let k: usize = body.parse().map_err(|_| ParseError::Number(s.to_string()))?;
        if !(1..=18).contains(&k) {
            return Err(ParseError::Number(s.to_string()));
        }
        Ok(Phi { k, bar })
    }
}

impl fmt::Display for Phi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bar {
            write!(f, "conj(phi{})", self.k)
        } else {
            write!(f, "phi{}", self.k)
        }
    }
}

#[derive(Deserialize)]
struct RawFixture {
    coframe: RawCoframe,
    basis: Vec<RawMatrix>,
    planes: RawPlanes,
    equation: Vec<RawEquation>,
    erratum: Vec<RawErratum>,
    family: RawFamily,
    witness: RawWitness,
}

#[derive(Deserialize)]
struct RawCoframe {
    torus_pairs: Vec<[usize; 2]>,
    plane_sign: i64,
}

#[derive(Deserialize)]
struct RawMatrix {
    name: String,
    entries: Vec<(usize, usize, String)>,
}

#[derive(Deserialize)]
struct RawPlanes {
    roots: Vec<[i64; 4]>,
}

#[derive(Deserialize)]
struct RawEquation {
    k: usize,
    terms: Vec<(String, String, String)>,
}

#[derive(Deserialize)]
struct RawErratum {
    k: usize,
    term: usize,
    right: String,
}

#[derive(Deserialize)]
struct RawFamily {
    parameters: Vec<String>,
    free: Vec<usize>,
    coefficient: Vec<RawCoefficient>,
}

#[derive(Deserialize)]
struct RawCoefficient {
    k: usize,
    prefactor: String,
    b: [i64; 5],
}

#[derive(Deserialize)]
struct RawWitness {
    scale: [i64; 5],
    term: Vec<RawWitnessTerm>,
    erratum: Vec<RawWitnessErratum>,
}

#[derive(Deserialize)]
struct RawWitnessTerm {
    prefactor: String,
    b: [i64; 5],
    form: Vec<(String, String)>,
}

#[derive(Deserialize)]
struct RawWitnessErratum {
    term: usize,
    prefactor: String,
}

#[derive(Clone, Debug)]
pub struct Term {
    pub coef: CSurd,
    pub left: Phi,
    pub right: Phi,
}

#[derive(Clone, Debug)]
pub struct Equation {
    pub k: usize,
    pub terms: Vec<Term>,
}

#[derive(Clone, Debug)]
pub struct Erratum {
    pub k: usize,
    pub term: usize,
    pub right: Phi,
}

#[derive(Clone, Debug)]
pub struct FamilyCoefficient {
    pub k: usize,
    pub prefactor: CSurd,
    pub b: [i64; 5],
}

#[derive(Clone, Debug)]
pub struct WitnessTerm {
    pub prefactor: CSurd,
    pub b: [i64; 5],
    pub form: Vec<(CSurd, Phi)>,
}

/// Parsed fixture.
#[derive(Clone, Debug)]
pub struct So9GoldenData {
    pub torus_pairs: Vec<[usize; 2]>,
    pub plane_sign: i64,
    /// `iH_1..iH_4, X_1..X_16, Y_1..Y_16`.
    pub matrix_basis: Vec<(String, Mat<Surd>)>,
    /// Root of `X_k` in the weights `f^1..f^4`.
    pub roots_f: Vec<[i64; 4]>,
    pub structure_equations: Vec<Equation>,
    pub errata: Vec<Erratum>,
    pub parameters: Vec<String>,
    pub free: Vec<usize>,
    pub family_coefficients: Vec<FamilyCoefficient>,
    pub witness_scale: [i64; 5],
    pub witness: Vec<WitnessTerm>,
    pub witness_errata: Vec<(usize, CSurd)>,
}

fn schema(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse(ParseError::Schema { path: path.into(), message: message.into() })
}

pub fn checksum(text: &str) -> String {
    let digest = Sha256::digest(text.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

impl So9GoldenData {
    pub fn load() -> Result<Self> {
        let sum = checksum(FIXTURE);
        if sum != FIXTURE_SHA256 {
            return Err(Error::Fixture(format!("checksum mismatch: {sum}")));
        }
        Self::parse(FIXTURE)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawFixture = toml::from_str(text).map_err(|e| schema("$", e.to_string()))?;
        let order: Vec<String> = (1..=4)
            .map(|j| format!("iH{j}"))
            .chain((1..=16).map(|k| format!("X{k}")))
            .chain((1..=16).map(|k| format!("Y{k}")))
            .collect();
        let mut matrix_basis = Vec::new();
        for name in &order {
            let (i, m) = raw
                .basis
                .iter()
                .enumerate()
                .find(|(_, m)| &m.name == name)
                .ok_or_else(|| schema("basis", format!("missing {name}")))?;
            let mut mat = Mat::zeros(9, 9);
            for (e, (r, c, v)) in m.entries.iter().enumerate() {
                if !(1..=9).contains(r) || !(1..=9).contains(c) {
                    return Err(schema(format!("basis[{i}].entries[{e}]"), "index out of range"));
                }
                mat[(r - 1, c - 1)] += v.parse::<Surd>().map_err(|x| schema(format!("basis[{i}].entries[{e}]"), x.to_string()))?;
            }
            matrix_basis.push((name.clone(), mat));
        }
        if raw.planes.roots.len() != PLANES {
            return Err(schema("planes.roots", format!("expected {PLANES} roots")));
        }
        let phi = |p: &str, path: String| p.parse::<Phi>().map_err(|e| schema(path, e.to_string()));
        let coef = |c: &str, path: String| c.parse::<CSurd>().map_err(|e| schema(path, e.to_string()));
        let mut structure_equations = Vec::new();
        for (i, eq) in raw.equation.iter().enumerate() {
            let mut terms = Vec::new();
            for (t, (c, l, r)) in eq.terms.iter().enumerate() {
                let path = format!("equation[{i}].terms[{t}]");
                terms.push(Term { coef: coef(c, path.clone())?, left: phi(l, path.clone())?, right: phi(r, path)? });
            }
            structure_equations.push(Equation { k: eq.k, terms });
        }
        let errata = raw
            .erratum
            .iter()
            .enumerate()
            .map(|(i, e)| Ok(Erratum { k: e.k, term: e.term, right: phi(&e.right, format!("erratum[{i}].right"))? }))
            .collect::<Result<Vec<_>>>()?;
        let family_coefficients = raw
            .family
            .coefficient
            .iter()
            .enumerate()
            .map(|(i, c)| {
                Ok(FamilyCoefficient {
                    k: c.k,
                    prefactor: coef(&c.prefactor, format!("family.coefficient[{i}].prefactor"))?,
                    b: c.b,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let witness = raw
            .witness
            .term
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let form = t
                    .form
                    .iter()
                    .enumerate()
                    .map(|(j, (c, p))| {
                        let path = format!("witness.term[{i}].form[{j}]");
                        Ok((coef(c, path.clone())?, phi(p, path)?))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(WitnessTerm { prefactor: coef(&t.prefactor, format!("witness.term[{i}].prefactor"))?, b: t.b, form })
            })
            .collect::<Result<Vec<_>>>()?;
        let witness_errata = raw
            .witness
            .erratum
            .iter()
            .enumerate()
            .map(|(i, e)| Ok((e.term, coef(&e.prefactor, format!("witness.erratum[{i}]"))?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(So9GoldenData {
            torus_pairs: raw.coframe.torus_pairs,
            plane_sign: raw.coframe.plane_sign,
            matrix_basis,
            roots_f: raw.planes.roots,
            structure_equations,
            errata,
            parameters: raw.family.parameters,
            free: raw.family.free,
            family_coefficients,
            witness_scale: raw.witness.scale,
            witness,
            witness_errata,
        })
    }

    /// Equations with the errata applied.
    pub fn corrected_equations(&self) -> Vec<Equation> {
        let mut eqs = self.structure_equations.clone();
        for e in &self.errata {
            if let Some(eq) = eqs.iter_mut().find(|q| q.k == e.k) {
                if let Some(t) = eq.terms.get_mut(e.term) {
                    t.right = e.right;
                }
            }
        }
        eqs
    }

    /// Root of `φ_k` in `f`-coordinates (zero on the torus), negated for a conjugate.
    pub fn weight(&self, p: Phi) -> [i64; 4] {
        let w = if p.k <= 2 { [0; 4] } else { self.roots_f[p.k - 3] };
        if p.bar {
            w.map(|x| -x)
        } else {
            w
        }
    }
}

/// `f`-coordinates to simple-root coordinates for `α_i = f^i − f^{i+1}`, `α_4 = f^4`.
pub fn simple_coords(f: &[i64; 4]) -> Vec<i64> {
    (0..4).map(|i| f[..=i].iter().sum()).collect()
}

fn trace_form(a: &Mat<Surd>, b: &Mat<Surd>) -> Surd {
    let p = a.mul(b);
    -(0..9).fold(Surd::zero(), |acc, i| acc + p[(i, i)].clone()) * &Surd::frac(1, 2)
}

/// The algebra spanned by the fixture matrices, in coordinates orthonormal for `−tr(AB)/2`.
pub fn fixture_algebra(data: &So9GoldenData) -> Result<CompactAlgebra<Surd>> {
    let basis: Vec<&Mat<Surd>> = data.matrix_basis.iter().map(|(_, m)| m).collect();
    for (name, m) in &data.matrix_basis {
        if m.add(&m.transpose()) != Mat::zeros(9, 9) {
            return Err(Error::Fixture(format!("{name} is not antisymmetric")));
        }
    }
    for i in 0..DIM {
        for j in 0..DIM {
            let want = if i == j { Surd::int(1) } else { Surd::zero() };
            if trace_form(basis[i], basis[j]) != want {
                return Err(Error::Fixture(format!(
                    "basis not orthonormal at ({}, {})",
                    data.matrix_basis[i].0, data.matrix_basis[j].0
                )));
            }
        }
    }
    let coords = |m: &Mat<Surd>| -> SparseVec<Surd> {
        (0..DIM).map(|k| (k, trace_form(m, basis[k]))).filter(|(_, c)| !c.is_zero()).collect()
    };
    let mut upper = vec![Vec::new(); DIM * DIM];
    for i in 0..DIM {
        for j in i + 1..DIM {
            let c = basis[i].mul(basis[j]).sub(&basis[j].mul(basis[i]));
            let v = coords(&c);
            let back = v.iter().fold(Mat::zeros(9, 9), |acc, (k, x)| acc.add(&basis[*k].scale(x)));
            if back != c {
                return Err(Error::Fixture(format!("bracket of {i}, {j} leaves the span")));
            }
            upper[i * DIM + j] = v;
        }
    }
    let root_coords: Vec<Vec<i64>> = data.roots_f.iter().map(simple_coords).collect();
    let labels = data.matrix_basis.iter().map(|(n, _)| n.clone()).collect();
    let alg = CompactAlgebra::from_brackets(RANK, root_coords, vec![0; RANK], vec![0; PLANES], labels, |i, j| {
        upper[i * DIM + j].clone()
    });
    for (k, f) in data.roots_f.iter().enumerate() {
        for j in 0..RANK {
            if alg.root_on_torus(k, j) != Surd::int(f[j]) {
                return Err(Error::Fixture(format!("X{} does not carry the root {:?}", k + 1, f)));
            }
        }
    }
    Ok(alg)
}

/// `I(iH_1) = iH_2`, `I(iH_3) = iH_4`.
pub fn fixture_torus_j(data: &So9GoldenData) -> Mat<Surd> {
    let mut j = Mat::zeros(RANK, RANK);
    for [a, b] in &data.torus_pairs {
        j[(b - 1, a - 1)] = Surd::int(1);
        j[(a - 1, b - 1)] = Surd::int(-1);
    }
    j
}

/// Complex 1-form as real and imaginary coefficient vectors.
#[derive(Clone, Debug)]
struct C1 {
    re: Vec<Surd>,
    im: Vec<Surd>,
}

/// Complex 2-form.
#[derive(Clone, Debug)]
struct C2 {
    re: Form<Surd>,
    im: Form<Surd>,
}

impl C2 {
    fn zero() -> Self {
        C2 { re: Form::zero(DIM, 2).expect("2-forms"), im: Form::zero(DIM, 2).expect("2-forms") }
    }

    fn add(&self, o: &C2) -> C2 {
        C2 { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    fn sub(&self, o: &C2) -> C2 {
        C2 { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }

    fn scale(&self, c: &CSurd) -> C2 {
        C2 {
            re: self.re.scale(&c.re).sub(&self.im.scale(&c.im)),
            im: self.re.scale(&c.im).add(&self.im.scale(&c.re)),
        }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// Bilinear extension to complex vectors.
    fn eval(&self, u: &C1, w: &C1) -> CSurd {
        let ev = |f: &Form<Surd>, a: &[Surd], b: &[Surd]| f.eval(&[a.to_vec(), b.to_vec()]);
        let rr = |f: &Form<Surd>| ev(f, &u.re, &w.re) - ev(f, &u.im, &w.im);
        let ii = |f: &Form<Surd>| ev(f, &u.re, &w.im) + ev(f, &u.im, &w.re);
        CSurd::new(rr(&self.re) - ii(&self.im), ii(&self.re) + rr(&self.im))
    }
}

/// Real and imaginary basis indices and scale of `φ_k`.
fn phi_slots(data: &So9GoldenData, k: usize) -> (usize, usize, i64) {
    if k <= 2 {
        let [a, b] = data.torus_pairs[k - 1];
        (a - 1, b - 1, 1)
    } else {
        (RANK + k - 3, RANK + PLANES + k - 3, data.plane_sign)
    }
}

fn coframe(data: &So9GoldenData, p: Phi) -> C1 {
    let (x, y, s) = phi_slots(data, p.k);
    let mut re = vec![Surd::zero(); DIM];
    let mut im = vec![Surd::zero(); DIM];
    re[x] = Surd::int(s);
    im[y] = Surd::int(if p.bar { -s } else { s });
    C1 { re, im }
}

/// Vector `v` with `φ_k(v) = 1` and every other `φ`, `φ̄` zero on it (or the conjugate).
fn dual(data: &So9GoldenData, p: Phi) -> C1 {
    let (x, y, s) = phi_slots(data, p.k);
    let h = Surd::frac(1, 2 * s);
    let mut re = vec![Surd::zero(); DIM];
    let mut im = vec![Surd::zero(); DIM];
    re[x] = h.clone();
    im[y] = if p.bar { h } else { -h };
    C1 { re, im }
}

fn wedge(a: &C1, b: &C1) -> C2 {
    let f = |v: &[Surd]| Form::one_form(v.to_vec());
    let w = |x: &[Surd], y: &[Surd]| f(x).wedge(&f(y)).expect("2-form");
    C2 { re: w(&a.re, &b.re).sub(&w(&a.im, &b.im)), im: w(&a.re, &b.im).add(&w(&a.im, &b.re)) }
}

fn d1(alg: &CompactAlgebra<Surd>, a: &C1) -> Result<C2> {
    Ok(C2 {
        re: Form::one_form(a.re.clone()).d(alg)?,
        im: Form::one_form(a.im.clone()).d(alg)?,
    })
}

fn all_phis() -> Vec<Phi> {
    (1..=18).map(|k| Phi { k, bar: false }).chain((1..=18).map(|k| Phi { k, bar: true })).collect()
}

/// Expansion of a complex 2-form in the `φ ∧ φ`, `φ ∧ φ̄`, `φ̄ ∧ φ̄` basis.
fn expand(data: &So9GoldenData, w: &C2) -> Vec<(Phi, Phi, CSurd)> {
    let phis = all_phis();
    let duals: Vec<C1> = phis.iter().map(|&p| dual(data, p)).collect();
    let mut out = Vec::new();
    for i in 0..phis.len() {
        for j in i + 1..phis.len() {
            let c = w.eval(&duals[i], &duals[j]);
            if !c.is_zero() {
                out.push((phis[i], phis[j], c));
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct CoefficientMismatch {
    pub left: String,
    pub right: String,
    /// Computed minus displayed.
    pub difference: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct InadmissibleTerm {
    pub term: usize,
    pub left: String,
    pub right: String,
    pub reason: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct EquationCheck {
    pub k: usize,
    pub terms: usize,
    pub verbatim: bool,
    pub corrected: bool,
    pub mismatches: Vec<CoefficientMismatch>,
    pub inadmissible: Vec<InadmissibleTerm>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StructureReport {
    pub checksum: String,
    pub equations: Vec<EquationCheck>,
    pub verbatim_pass: usize,
    pub corrected_pass: usize,
    pub total: usize,
    pub corrected_admissible: bool,
    /// Brackets of the abstract `B_4` build carried exactly onto the matrix build.
    pub isomorphic: bool,
    /// Images of the abstract torus basis in the fixture torus.
    pub torus_map: Vec<Vec<String>>,
}

fn display_side(data: &So9GoldenData, terms: &[Term]) -> C2 {
    terms.iter().fold(C2::zero(), |acc, t| {
        acc.add(&wedge(&coframe(data, t.left), &coframe(data, t.right)).scale(&t.coef))
    })
}

fn admissibility(data: &So9GoldenData, eq: &Equation) -> Vec<InadmissibleTerm> {
    let target = data.weight(Phi { k: eq.k, bar: false });
    let mut out = Vec::new();
    for (i, t) in eq.terms.iter().enumerate() {
        let (a, b) = (data.weight(t.left), data.weight(t.right));
        let sum: Vec<i64> = (0..4).map(|j| a[j] + b[j]).collect();
        let reason = if t.left.bar && t.right.bar {
            Some("(0,2) term".to_string())
        } else if sum != target {
            Some(format!("weight {sum:?} differs from {target:?}"))
        } else {
            None
        };
        if let Some(reason) = reason {
            out.push(InadmissibleTerm { term: i, left: t.left.to_string(), right: t.right.to_string(), reason });
        }
    }
    out
}

/// `d φ_k` from the fixture brackets against every displayed equation.
pub fn verify_structure_equations(
    data: &So9GoldenData,
    fixture: &CompactAlgebra<Surd>,
    abstract_b4: &CompactAlgebra<Surd>,
) -> Result<StructureReport> {
    let corrected = data.corrected_equations();
    let mut equations = Vec::new();
    for (eq, fixed) in data.structure_equations.iter().zip(&corrected) {
        let lhs = d1(fixture, &coframe(data, Phi { k: eq.k, bar: false }))?;
        let diff = lhs.sub(&display_side(data, &eq.terms));
        let verbatim = diff.is_zero();
        let mismatches = if verbatim {
            Vec::new()
        } else {
            expand(data, &diff)
                .into_iter()
                .map(|(l, r, c)| CoefficientMismatch { left: l.to_string(), right: r.to_string(), difference: c.to_string() })
                .collect()
        };
        let corrected_ok = lhs.sub(&display_side(data, &fixed.terms)).is_zero();
        equations.push(EquationCheck {
            k: eq.k,
            terms: eq.terms.len(),
            verbatim,
            corrected: corrected_ok,
            mismatches,
            inadmissible: admissibility(data, eq),
        });
    }
    let corrected_admissible = corrected.iter().all(|e| admissibility(data, e).is_empty());
    let (psi, isomorphic) = match isomorphism(abstract_b4, fixture) {
        Ok(m) => (Some(m), true),
        Err(_) => (None, false),
    };
    let torus_map = psi
        .map(|m| (0..RANK).map(|j| (0..RANK).map(|i| m[(i, j)].to_string()).collect()).collect())
        .unwrap_or_default();
    Ok(StructureReport {
        checksum: checksum(FIXTURE),
        verbatim_pass: equations.iter().filter(|e| e.verbatim).count(),
        corrected_pass: equations.iter().filter(|e| e.corrected).count(),
        total: equations.len(),
        equations,
        corrected_admissible,
        isomorphic,
        torus_map,
    })
}

/// Exact Lie algebra isomorphism between two compact forms with the same root planes:
/// root functionals fix the torus, simple planes scale by `√(n/n')` to keep the Killing
/// form, the other planes
/// follow from brackets with simple planes. Every bracket is checked.
pub fn isomorphism(from: &CompactAlgebra<Surd>, to: &CompactAlgebra<Surd>) -> Result<Mat<Surd>> {
    let (r, p) = (from.rank, from.p());
    if to.rank != r || to.p() != p {
        return Err(Error::Consistency("algebras differ in rank or dimension".into()));
    }
    let target: Vec<usize> = (0..p)
        .map(|a| {
            to.root_coords
                .iter()
                .position(|x| *x == from.root_coords[a])
                .ok_or_else(|| Error::Consistency(format!("root {:?} missing in target", from.root_coords[a])))
        })
        .collect::<Result<_>>()?;
    let af = from.simple_root_matrix()?;
    let at = to.simple_root_matrix()?;
    let psi_t = at.inverse().ok_or_else(|| Error::Consistency("degenerate simple roots".into()))?.mul(&af);

    let proj = |alg: &CompactAlgebra<Surd>, u: usize, v: usize, b: usize| -> CSurd {
        let mut c = CSurd::default();
        for (k, x) in alg.bracket(u, v) {
            if *k == alg.x(b) {
                c.re = x.clone();
            } else if *k == alg.y(b) {
                c.im = x.clone();
            }
        }
        c
    };
    let mut z: Vec<Option<CSurd>> = vec![None; p];
    let mut order: Vec<usize> = (0..p).collect();
    order.sort_by_key(|&a| from.root_coords[a].iter().sum::<i64>());
    for &b in &order {
        let x = &from.root_coords[b];
        if x.iter().sum::<i64>() == 1 {
            let s = (from.plane_norm(b) * &to.plane_norm(target[b]).inv().expect("nonzero"))
                .sqrt()
                .ok_or_else(|| Error::Consistency("plane norm ratio has no square root".into()))?;
            z[b] = Some(CSurd::real(s));
            continue;
        }
        let mut found = None;
        for i in 0..r {
            let mut g = x.clone();
            g[i] -= 1;
            let Some(gamma) = from.root_coords.iter().position(|y| *y == g) else { continue };
            let Some(alpha) = from.root_coords.iter().position(|y| y.iter().enumerate().all(|(j, v)| *v == i64::from(j == i))) else {
                continue;
            };
            let (Some(za), Some(zg)) = (z[alpha].clone(), z[gamma].clone()) else { continue };
            let wa = proj(from, from.x(alpha), from.x(gamma), b);
            let wt = proj(to, to.x(target[alpha]), to.x(target[gamma]), target[b]);
            if let Some(inv) = wa.inv() {
                found = Some(za * zg * wt * inv);
                break;
            }
        }
        z[b] = Some(found.ok_or_else(|| Error::Consistency(format!("no bracket reaches root {x:?}")))?);
    }
    let n = from.dim();
    let mut m = Mat::zeros(n, n);
    for j in 0..r {
        for i in 0..r {
            m[(i, j)] = psi_t[(i, j)].clone();
        }
    }
    for a in 0..p {
        let c = z[a].clone().expect("all planes assigned");
        let (tx, ty) = (to.x(target[a]), to.y(target[a]));
        m[(tx, from.x(a))] = c.re.clone();
        m[(ty, from.x(a))] = c.im.clone();
        m[(tx, from.y(a))] = -c.im.clone();
        m[(ty, from.y(a))] = c.re;
    }
    let col = |j: usize| m.column(j);
    for i in 0..n {
        for j in i + 1..n {
            let lhs = m.mul_vec(&from.bracket_vec(&unit_n(n, i), &unit_n(n, j)));
            let rhs = to.bracket_vec(&col(i), &col(j));
            if lhs != rhs {
                return Err(Error::Consistency(format!("bracket ({}, {}) not preserved", from.labels[i], from.labels[j])));
            }
        }
    }
    Ok(m)
}

fn unit_n(n: usize, i: usize) -> Vec<Surd> {
    (0..n).map(|k| if k == i { Surd::int(1) } else { Surd::zero() }).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct CoefficientCheck {
    pub k: usize,
    pub free: bool,
    /// Displayed value as prefactor and `b`-vector.
    pub displayed: String,
    /// Computed coefficient of `φ_k ∧ φ̄_k` over `(b_6, b_15, b_16, b_17, b_18)`.
    pub computed: String,
    pub verbatim: bool,
    pub matches: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyReport {
    pub dimension: usize,
    pub coefficients: Vec<CoefficientCheck>,
    pub determined_pass: usize,
    pub determined_total: usize,
    pub free_pass: usize,
    pub free_total: usize,
    /// Mixed `φ_a ∧ φ̄_b` terms found in `F`; zero for a diagonal family.
    pub off_diagonal_terms: usize,
    pub bi_invariant_recovered: bool,
    pub samples: Vec<Vec<String>>,
    pub ddc_zero: Vec<bool>,
    pub witness_verbatim: bool,
    pub witness_corrected: bool,
}

fn fmt_bvec(names: &[String], v: &[Q]) -> String {
    let parts: Vec<String> =
        v.iter().zip(names).filter(|(c, _)| **c != Q::from_integer(0)).map(|(c, n)| format!("{}*{n}", fmt_q(c))).collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

/// Fixture Hermitian structure from the SKT family at the point where the free
/// coefficients take the values `b`.
struct FamilyMap {
    /// `θ = M⁻¹ b`.
    theta_of_b: Mat<Surd>,
    family: crate::solvers::MetricFamily,
    abstract_index: Vec<usize>,
}

impl FamilyMap {
    fn theta(&self, b: &[Q]) -> Vec<Q> {
        let v: Vec<Surd> = b.iter().map(|q| Surd::from_q(*q)).collect();
        self.theta_of_b.mul_vec(&v).iter().map(|x| x.as_rational().expect("rational")).collect()
    }

    fn structure(&self, data: &So9GoldenData, b: &[Q]) -> HermitianStructure<Surd> {
        let theta = self.theta(b);
        let lam = self.family.lambda_at(&theta);
        let nu = Surd::from_q(self.family.nu_at(&theta)[0]);
        HermitianStructure {
            torus_j: fixture_torus_j(data),
            lambda_t: Mat::identity(RANK).scale(&nu),
            lambda: self.abstract_index.iter().map(|&a| Surd::from_q(lam[a])).collect(),
        }
    }
}

fn family_map(data: &So9GoldenData, rs: &RootSystem, abstract_b4: &CompactAlgebra<Surd>, fixture: &CompactAlgebra<Surd>) -> Result<FamilyMap> {
    let family = solve_skt(rs, abstract_b4)?;
    let abstract_index: Vec<usize> = fixture
        .root_coords
        .iter()
        .map(|x| rs.index_of(x).ok_or_else(|| Error::Fixture(format!("fixture root {x:?} is not a B4 root"))))
        .collect::<Result<_>>()?;
    let dim = family.dimension();
    if data.free.len() != dim {
        return Err(Error::Fixture(format!("{} free coefficients for a {dim}-parameter family", data.free.len())));
    }
    // λ of the plane carrying each free φ_k, as a linear form in θ
    let m = Mat::from_fn(dim, dim, |row, col| {
        let k = data.free[row];
        let a = abstract_index[k - 3];
        Surd::from_q(family.generators[col].lambda[a])
    });
    let theta_of_b = m.inverse().ok_or_else(|| Error::Fixture("free coefficients do not parametrize the family".into()))?;
    Ok(FamilyMap { theta_of_b, family, abstract_index })
}

pub fn verify_family(
    data: &So9GoldenData,
    rs: &RootSystem,
    abstract_b4: &CompactAlgebra<Surd>,
    fixture: &CompactAlgebra<Surd>,
    rng: &mut impl Rng,
) -> Result<FamilyReport> {
    let fm = family_map(data, rs, abstract_b4, fixture)?;
    let nb = data.parameters.len();
    let norm = fixture.plane_norm(0).inv().expect("nonzero");
    let f_of = |b: &[Q]| -> Result<C2> {
        let h = fm.structure(data, b);
        let f = h.fundamental_form(fixture)?.scale(&norm);
        Ok(C2 { re: f, im: Form::zero(DIM, 2)? })
    };

    // F at b = 1 + e_j/10 determines the linear coefficients
    let probes: Vec<Vec<Q>> = (0..nb)
        .map(|j| (0..nb).map(|i| Q::from_integer(1) + if i == j { Q::new(1, 10) } else { Q::from_integer(0) }).collect())
        .collect();
    let pm = Mat::from_fn(nb, nb, |i, j| Surd::from_q(probes[i][j]));
    let pinv = pm.inverse().expect("probe matrix invertible");
    let mut values: Vec<Vec<CSurd>> = vec![Vec::new(); 18];
    let mut off_diagonal_terms = 0;
    for b in &probes {
        let mut row = vec![CSurd::default(); 18];
        for (l, r, c) in expand(data, &f_of(b)?) {
            if l.k == r.k && l.bar != r.bar {
                row[l.k - 1] = c;
            } else {
                off_diagonal_terms += 1;
            }
        }
        for (v, c) in values.iter_mut().zip(row) {
            v.push(c);
        }
    }
    let half_i = CSurd::new(Surd::zero(), Surd::frac(1, 2));
    let mut coefficients = Vec::new();
    for fc in &data.family_coefficients {
        let vals = &values[fc.k - 1];
        let solve = |part: fn(&CSurd) -> Surd| -> Vec<Surd> { pinv.mul_vec(&vals.iter().map(part).collect::<Vec<_>>()) };
        let re = solve(|c| c.re.clone());
        let im = solve(|c| c.im.clone());
        let computed: Vec<CSurd> = re.into_iter().zip(im).map(|(a, b)| CSurd::new(a, b)).collect();
        let displayed: Vec<CSurd> = fc.b.iter().map(|&x| fc.prefactor.clone() * CSurd::real(Surd::int(x))).collect();
        let read: Vec<CSurd> = fc.b.iter().map(|&x| half_i.clone() * CSurd::real(Surd::int(x))).collect();
        let free = data.free.contains(&fc.k);
        let verbatim = computed == displayed;
        // every coefficient is (i/2) times a real combination of b
        let real_part: Vec<Q> = computed.iter().map(|c| (c.im.clone() * &Surd::int(2)).as_rational().unwrap_or_default()).collect();
        coefficients.push(CoefficientCheck {
            k: fc.k,
            free,
            displayed: format!("{} * ({})", fc.prefactor, fmt_bvec(&data.parameters, &fc.b.map(|x| Q::from_integer(x.into())))),
            computed: format!("i/2 * ({})", fmt_bvec(&data.parameters, &real_part)),
            verbatim,
            matches: verbatim || (free && computed == read),
        });
    }
    let det: Vec<&CoefficientCheck> = coefficients.iter().filter(|c| !c.free).collect();
    let fr: Vec<&CoefficientCheck> = coefficients.iter().filter(|c| c.free).collect();

    let ones: Vec<Q> = vec![Q::from_integer(1); nb];
    let bi = HermitianStructure { torus_j: fixture_torus_j(data), lambda_t: Mat::identity(RANK), lambda: vec![Surd::int(1); PLANES] };
    let bi_invariant_recovered =
        fm.theta(&ones) == fm.family.base && fm.structure(data, &ones).fundamental_form(fixture)? == bi.fundamental_form(fixture)?;

    let mut samples = Vec::new();
    while samples.len() < 5 {
        let b: Vec<Q> = (0..nb).map(|_| Q::new(rng.gen_range(16..=24), 20)).collect();
        if fm.family.is_positive(&fm.theta(&b)) {
            samples.push(b);
        }
    }
    let mut ddc_zero = Vec::new();
    let (mut witness_verbatim, mut witness_corrected) = (true, true);
    let f0 = C2 { re: bi.fundamental_form(fixture)?.scale(&norm), im: Form::zero(DIM, 2)? };
    for b in &samples {
        let h = fm.structure(data, b);
        h.validate(fixture)?;
        ddc_zero.push(h.ddc(fixture)?.is_zero());
        let dot = |v: &[i64; 5]| -> Q { v.iter().zip(b).map(|(x, y)| Q::from_integer((*x).into()) * y).sum() };
        let scale = CSurd::real(Surd::from_q(dot(&data.witness_scale)));
        let lhs = f_of(b)?.sub(&f0.scale(&scale));
        let mut rhs_v = C2::zero();
        let mut rhs_c = C2::zero();
        for (t, term) in data.witness.iter().enumerate() {
            let form = term.form.iter().fold(C1 { re: vec![Surd::zero(); DIM], im: vec![Surd::zero(); DIM] }, |acc, (c, p)| {
                let phi = coframe(data, *p);
                let re: Vec<Surd> = (0..DIM).map(|i| acc.re[i].clone() + c.re.clone() * &phi.re[i] - c.im.clone() * &phi.im[i]).collect();
                let im: Vec<Surd> = (0..DIM).map(|i| acc.im[i].clone() + c.re.clone() * &phi.im[i] + c.im.clone() * &phi.re[i]).collect();
                C1 { re, im }
            });
            let dform = d1(fixture, &form)?.scale(&CSurd::real(Surd::from_q(dot(&term.b))));
            rhs_v = rhs_v.add(&dform.scale(&term.prefactor));
            let pre = data.witness_errata.iter().find(|(i, _)| *i == t).map_or(term.prefactor.clone(), |(_, p)| p.clone());
            rhs_c = rhs_c.add(&dform.scale(&pre));
        }
        witness_verbatim &= lhs.sub(&rhs_v).is_zero();
        witness_corrected &= lhs.sub(&rhs_c).is_zero();
    }
    Ok(FamilyReport {
        dimension: fm.family.dimension(),
        determined_pass: det.iter().filter(|c| c.matches).count(),
        determined_total: det.len(),
        free_pass: fr.iter().filter(|c| c.matches).count(),
        free_total: fr.len(),
        coefficients,
        off_diagonal_terms,
        bi_invariant_recovered,
        samples: samples.iter().map(|b| b.iter().map(fmt_q).collect()).collect(),
        ddc_zero,
        witness_verbatim,
        witness_corrected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checksum_and_parse() {
        let d = So9GoldenData::load().unwrap();
        assert_eq!(d.matrix_basis.len(), DIM);
        assert_eq!(d.structure_equations.len(), 18);
        assert_eq!(d.family_coefficients.len(), 18);
    }

    #[test]
    fn tampered_fixture_is_rejected() {
        let bad = FIXTURE.replace("plane_sign = -1", "plane_sign = \"x\"");
        assert!(matches!(So9GoldenData::parse(&bad), Err(Error::Parse(ParseError::Schema { .. }))));
        assert_ne!(checksum(&bad), FIXTURE_SHA256);
    }

    #[test]
    fn complex_coefficients_parse() {
        assert_eq!("-i/2".parse::<CSurd>().unwrap(), CSurd::new(Surd::zero(), Surd::frac(-1, 2)));
        assert_eq!("-√2/2".parse::<CSurd>().unwrap(), CSurd::real(-Surd::sqrt2() * &Surd::frac(1, 2)));
        assert_eq!("13b".parse::<Phi>().unwrap(), Phi { k: 13, bar: true });
    }

    #[test]
    fn simple_coordinates() {
        assert_eq!(simple_coords(&[1, 1, 0, 0]), vec![1, 2, 2, 2]);
        assert_eq!(simple_coords(&[0, 0, 1, -1]), vec![0, 0, 1, 0]);
    }

    #[test]
    fn dual_vectors() {
        let d = So9GoldenData::load().unwrap();
        for p in all_phis() {
            for q in all_phis() {
                let (a, v) = (coframe(&d, p), dual(&d, q));
                let dot = |x: &[Surd], y: &[Surd]| x.iter().zip(y).fold(Surd::zero(), |s, (a, b)| s + a.clone() * b);
                let c = CSurd::new(dot(&a.re, &v.re) - dot(&a.im, &v.im), dot(&a.re, &v.im) + dot(&a.im, &v.re));
                let want = if p == q { CSurd::real(Surd::int(1)) } else { CSurd::default() };
                assert_eq!(c, want, "{p} on dual of {q}");
            }
        }
    }

    #[test]
    fn inadmissible_terms_are_the_errata() {
        let d = So9GoldenData::load().unwrap();
        let bad: Vec<(usize, usize)> = d
            .structure_equations
            .iter()
            .flat_map(|e| admissibility(&d, e).into_iter().map(move |t| (e.k, t.term)))
            .collect();
        let errata: Vec<(usize, usize)> = d.errata.iter().map(|e| (e.k, e.term)).collect();
        assert_eq!(bad, errata);
    }
}
