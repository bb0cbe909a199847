//! Exact and floating scalars.
//!
//! [`Surd`] is an element of the multi-quadratic field generated over ℚ by
//! square roots of small primes: a finite sum `Σ q_m √m` with `m` squarefree.
//! The representation is canonical, so structural equality is numeric equality.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};
use smallvec::SmallVec;

use crate::error::ParseError;

/// Exact rational number.
pub type Q = Ratio<i128>;

/// Primes available as radicands; bit `b` of a mask stands for `PRIMES[b]`.
pub const PRIMES: [i128; 32] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
    97, 101, 103, 107, 109, 113, 127, 131,
];

fn radicand(mask: u32) -> i128 {
    let mut r = 1i128;
    for (b, p) in PRIMES.iter().enumerate() {
        if mask & (1 << b) != 0 {
            r *= p;
        }
    }
    r
}

/// Squarefree decomposition `n = s² · m`, returning `(s, mask of m)`.
fn squarefree(mut n: i128) -> Option<(i128, u32)> {
    debug_assert!(n > 0);
    let mut outside = 1i128;
    let mut mask = 0u32;
    for (b, &p) in PRIMES.iter().enumerate() {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        outside *= p.pow(e / 2);
        if e % 2 == 1 {
            mask |= 1 << b;
        }
    }
    (n == 1).then_some((outside, mask))
}

type Terms = SmallVec<[(u32, Q); 1]>;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Surd {
    terms: Terms,
}

impl Surd {
    pub fn zero() -> Self {
        Surd { terms: Terms::new() }
    }

    pub fn from_q(q: Q) -> Self {
        let mut terms = Terms::new();
        if !q.is_zero() {
            terms.push((0, q));
        }
        Surd { terms }
    }

    pub fn int(n: i64) -> Self {
        Self::from_q(Q::from_integer(n as i128))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Self::from_q(Q::new(n as i128, d as i128))
    }

    /// `√q` for a non-negative rational whose numerator and denominator
    /// factor over [`PRIMES`].
    pub fn sqrt_q(q: &Q) -> Option<Self> {
        if q.is_negative() {
            return None;
        }
        if q.is_zero() {
            return Some(Self::zero());
        }
        // √(a/b) = √(ab) / b
        let (a, b) = (*q.numer(), *q.denom());
        let (s, mask) = squarefree(a.checked_mul(b)?)?;
        let mut terms = Terms::new();
        terms.push((mask, Q::new(s, b)));
        Some(Surd { terms })
    }

    pub fn sqrt2() -> Self {
        Self::sqrt_q(&Q::from_integer(2)).unwrap()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_rational(&self) -> bool {
        self.terms.iter().all(|(m, _)| *m == 0)
    }

    pub fn as_rational(&self) -> Option<Q> {
        match self.terms.as_slice() {
            [] => Some(Q::zero()),
            [(0, q)] => Some(*q),
            _ => None,
        }
    }

    /// Coordinates `(a, b)` with `self = a + b√2`, if the value lies in ℚ(√2).
    pub fn as_q_sqrt2(&self) -> Option<(Q, Q)> {
        let (mut a, mut b) = (Q::zero(), Q::zero());
        for (m, q) in &self.terms {
            match m {
                0 => a = *q,
                1 => b = *q,
                _ => return None,
            }
        }
        Some((a, b))
    }

    pub fn terms(&self) -> impl Iterator<Item = (i128, &Q)> {
        self.terms.iter().map(|(m, q)| (radicand(*m), q))
    }

    fn push_term(acc: &mut Vec<(u32, Q)>, m: u32, q: Q) {
        match acc.binary_search_by_key(&m, |t| t.0) {
            Ok(i) => {
                acc[i].1 += q;
                if acc[i].1.is_zero() {
                    acc.remove(i);
                }
            }
            Err(i) => {
                if !q.is_zero() {
                    acc.insert(i, (m, q));
                }
            }
        }
    }

    fn from_sorted(v: Vec<(u32, Q)>) -> Self {
        Surd { terms: v.into_iter().collect() }
    }

    fn highest_bit(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| *m).filter(|m| *m != 0).map(|m| 31 - m.leading_zeros()).max()
    }

    /// Split as `a + b√p` where `p` is the prime for `bit`.
    fn split(&self, bit: u32) -> (Surd, Surd) {
        let mut a = Vec::new();
        let mut b = Vec::new();
        for (m, q) in &self.terms {
            if m & (1 << bit) != 0 {
                b.push((m & !(1 << bit), *q));
            } else {
                a.push((*m, *q));
            }
        }
        b.sort_by_key(|t| t.0);
        (Surd::from_sorted(a), Surd::from_sorted(b))
    }

    fn conjugate(&self, bit: u32) -> Surd {
        Surd {
            terms: self
                .terms
                .iter()
                .map(|(m, q)| if m & (1 << bit) != 0 { (*m, -*q) } else { (*m, *q) })
                .collect(),
        }
    }

    pub fn inv(&self) -> Option<Surd> {
        if self.is_zero() {
            return None;
        }
        if let [(m, q)] = self.terms.as_slice() {
            let r = Q::from_integer(radicand(*m));
            let mut terms = Terms::new();
            terms.push((*m, (q * r).recip()));
            return Some(Surd { terms });
        }
        let bit = self.highest_bit().expect("multi-term surd has a radical");
        let c = self.conjugate(bit);
        let norm = self * &c;
        Some(norm.inv()? * c)
    }

    /// Exact sign: -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        let Some(bit) = self.highest_bit() else {
            return match self.terms.first() {
                None => 0,
                Some((_, q)) if q.is_positive() => 1,
                _ => -1,
            };
        };
        let (a, b) = self.split(bit);
        let (sa, sb) = (a.signum(), b.signum());
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return if sa == 0 { sb } else { sa };
        }
        let p = Surd::from_q(Q::from_integer(PRIMES[bit as usize]));
        let d = &a * &a - &(&p * &(&b * &b));
        sa * d.signum()
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(m, q)| q.to_f64().unwrap_or(f64::NAN) * (radicand(*m) as f64).sqrt())
            .sum()
    }

    pub fn sqrt(&self) -> Option<Surd> {
        Surd::sqrt_q(&self.as_rational()?)
    }
}

impl<'a> Add<&'a Surd> for &'a Surd {
    type Output = Surd;
    fn add(self, o: &Surd) -> Surd {
        let mut out: Vec<(u32, Q)> = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &o.terms);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i]);
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push(b[j]);
                j += 1;
            } else {
                let s = a[i].1 + b[j].1;
                if !s.is_zero() {
                    out.push((a[i].0, s));
                }
                i += 1;
                j += 1;
            }
        }
        Surd::from_sorted(out)
    }
}

impl<'a> Mul<&'a Surd> for &'a Surd {
    type Output = Surd;
    fn mul(self, o: &Surd) -> Surd {
        if self.is_zero() || o.is_zero() {
            return Surd::zero();
        }
        if let ([(0, p)], [(0, q)]) = (self.terms.as_slice(), o.terms.as_slice()) {
            return Surd::from_q(p * q);
        }
        let mut acc: Vec<(u32, Q)> = Vec::new();
        for (m1, q1) in &self.terms {
            for (m2, q2) in &o.terms {
                let common = radicand(m1 & m2);
                Surd::push_term(&mut acc, m1 ^ m2, q1 * q2 * Q::from_integer(common));
            }
        }
        Surd::from_sorted(acc)
    }
}

impl Neg for &Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd { terms: self.terms.iter().map(|(m, q)| (*m, -*q)).collect() }
    }
}

impl<'a> Sub<&'a Surd> for &'a Surd {
    type Output = Surd;
    fn sub(self, o: &Surd) -> Surd {
        self + &(-o)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<Surd> for Surd {
            type Output = Surd;
            fn $m(self, o: Surd) -> Surd {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a Surd> for Surd {
            type Output = Surd;
            fn $m(self, o: &Surd) -> Surd {
                (&self).$m(o)
            }
        }
    };
}
forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        -&self
    }
}

impl AddAssign for Surd {
    fn add_assign(&mut self, o: Surd) {
        *self = &*self + &o;
    }
}
impl SubAssign for Surd {
    fn sub_assign(&mut self, o: Surd) {
        *self = &*self - &o;
    }
}
impl MulAssign for Surd {
    fn mul_assign(&mut self, o: Surd) {
        *self = &*self * &o;
    }
}

impl Sum for Surd {
    fn sum<I: Iterator<Item = Surd>>(iter: I) -> Surd {
        iter.fold(Surd::zero(), |a, b| a + b)
    }
}

impl From<Q> for Surd {
    fn from(q: Q) -> Self {
        Surd::from_q(q)
    }
}

impl From<i64> for Surd {
    fn from(n: i64) -> Self {
        Surd::int(n)
    }
}

pub fn fmt_q(q: &Q) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, q)) in self.terms.iter().enumerate() {
            let neg = q.is_negative();
            let a = q.abs();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if *m == 0 {
                write!(f, "{}", fmt_q(&a))?;
            } else if a.is_one() {
                write!(f, "√{}", radicand(*m))?;
            } else {
                write!(f, "{}√{}", fmt_q(&a), radicand(*m))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

pub fn parse_q(s: &str) -> Result<Q, ParseError> {
    let s = s.trim();
    let bad = || ParseError::Number(s.to_string());
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i128 = n.trim().parse().map_err(|_| bad())?;
            let d: i128 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Parses sums of terms like `1/2`, `-3/4√2`, `2*sqrt(3)`, `sqrt(2)/2`.
impl FromStr for Surd {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, ParseError> {
        let bad = || ParseError::Number(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad());
        }
        let mut pieces = Vec::new();
        let mut cur = String::new();
        for (i, c) in compact.char_indices() {
            if (c == '+' || c == '-') && i > 0 {
                pieces.push(std::mem::take(&mut cur));
            }
            cur.push(c);
        }
        pieces.push(cur);
        let mut total = Surd::zero();
        for p in pieces {
            let (sign, body) = match p.strip_prefix('-') {
                Some(b) => (-1, b),
                None => (1, p.strip_prefix('+').unwrap_or(&p)),
            };
            let body = body.replace("sqrt(", "√").replace(')', "");
            let (coef, rad) = match body.split_once('√') {
                None => (body.clone(), None),
                Some((c, r)) => {
                    let c = c.trim_end_matches('*').to_string();
                    let (r, div) = match r.split_once('/') {
                        Some((r, d)) => (r.to_string(), Some(d.to_string())),
                        None => (r.to_string(), None),
                    };
                    let c = match (c.is_empty(), div) {
                        (true, None) => "1".to_string(),
                        (true, Some(d)) => format!("1/{d}"),
                        (false, None) => c,
                        (false, Some(d)) => {
                            let q = parse_q(&c)? / parse_q(&d)?;
                            format!("{}/{}", q.numer(), q.denom())
                        }
                    };
                    (c, Some(r))
                }
            };
            let q = parse_q(&coef)? * Q::from_integer(sign);
            let term = match rad {
                None => Surd::from_q(q),
                Some(r) => {
                    let r: i128 = r.parse().map_err(|_| bad())?;
                    Surd::from_q(q) * Surd::sqrt_q(&Q::from_integer(r)).ok_or_else(bad)?
                }
            };
            total += term;
        }
        Ok(total)
    }
}

/// Scalar field shared by the exact and floating code paths.
pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + AddAssign
    + SubAssign
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_q(q: &Q) -> Self;
    fn from_surd(s: &Surd) -> Self;
    fn inv(&self) -> Option<Self>;
    fn sqrt(&self) -> Option<Self>;
    fn to_f64(&self) -> f64;
    fn is_positive(&self) -> bool;

    fn from_i64(n: i64) -> Self {
        Self::from_q(&Q::from_integer(n as i128))
    }
}

impl Scalar for Surd {
    fn zero() -> Self {
        Surd::zero()
    }
    fn one() -> Self {
        Surd::int(1)
    }
    fn is_zero(&self) -> bool {
        Surd::is_zero(self)
    }
    fn from_q(q: &Q) -> Self {
        Surd::from_q(*q)
    }
    fn from_surd(s: &Surd) -> Self {
        s.clone()
    }
    fn inv(&self) -> Option<Self> {
        Surd::inv(self)
    }
    fn sqrt(&self) -> Option<Self> {
        Surd::sqrt(self)
    }
    fn to_f64(&self) -> f64 {
        Surd::to_f64(self)
    }
    fn is_positive(&self) -> bool {
        Surd::is_positive(self)
    }
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn from_q(q: &Q) -> Self {
        q.to_f64().unwrap_or(f64::NAN)
    }
    fn from_surd(s: &Surd) -> Self {
        s.to_f64()
    }
    fn inv(&self) -> Option<Self> {
        (*self != 0.0).then(|| 1.0 / self)
    }
    fn sqrt(&self) -> Option<Self> {
        (*self >= 0.0).then(|| f64::sqrt(*self))
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_positive(&self) -> bool {
        *self > 0.0
    }
}

/// Best rational approximation with bounded denominator (continued fractions).
pub fn rationalize(x: f64, max_den: i128) -> Option<Q> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1, mut k0, mut k1) = (0i128, 1i128, 1i128, 0i128);
    let mut v = x;
    for _ in 0..64 {
        let a = v.floor();
        if a.abs() > 1e18 {
            break;
        }
        let a = a as i128;
        let (h2, k2) = (a * h1 + h0, a * k1 + k0);
        if k2 > max_den {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = v - a as f64;
        if frac.abs() < 1e-15 {
            break;
        }
        v = 1.0 / frac;
    }
    (k1 != 0).then(|| Q::new(h1, k1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> Surd {
        x.parse().unwrap()
    }

    #[test]
    fn sqrt2_squares_to_two() {
        let r = Surd::sqrt2();
        assert_eq!(&r * &r, Surd::int(2));
    }

    #[test]
    fn mixed_radicals_multiply() {
        let a = s("1 + √2");
        let b = s("√3 - √6");
        assert_eq!(a * b, s("-√3"));
    }

    #[test]
    fn inverse_of_multi_quadratic() {
        let x = s("1 + √2 + √3");
        let y = x.inv().unwrap();
        assert_eq!(&x * &y, Surd::int(1));
    }

    #[test]
    fn exact_sign() {
        assert_eq!(s("√2 - 7/5").signum(), 1);
        assert_eq!(s("√2 - 3/2").signum(), -1);
        assert_eq!(s("√3 - √2 - 1/3").signum(), -1);
        assert_eq!(s("0").signum(), 0);
    }

    #[test]
    fn sqrt_of_rational_reduces() {
        assert_eq!(Surd::sqrt_q(&Q::new(1, 2)).unwrap(), s("1/2√2"));
        assert_eq!(Surd::sqrt_q(&Q::from_integer(12)).unwrap(), s("2√3"));
        assert_eq!(Surd::sqrt_q(&Q::new(9, 4)).unwrap(), s("3/2"));
    }

    #[test]
    fn display_round_trip() {
        for t in ["-1/2", "3/4√2 - 5", "√7", "-√14 + 1/3√2"] {
            let v = s(t);
            assert_eq!(s(&v.to_string()), v);
        }
        assert_eq!(s("sqrt(2)/2"), s("1/2√2"));
        assert_eq!(s("-2*sqrt(3)"), s("-2√3"));
    }

    #[test]
    fn rationalize_finds_two_thirds() {
        assert_eq!(rationalize(2.0 / 3.0, 1000), Some(Q::new(2, 3)));
    }
}
