//! Serialization helpers for exact numbers.

use serde::ser::{SerializeSeq, Serializer};

use crate::linalg::Mat;
use crate::scalar::{fmt_q, Surd, Q};

pub fn ser_qmat<S: Serializer>(m: &[Vec<Q>], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(m.len()))?;
    for row in m {
        let row: Vec<String> = row.iter().map(fmt_q).collect();
        seq.serialize_element(&row)?;
    }
    seq.end()
}

pub fn ser_q<S: Serializer>(q: &Q, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_q(q))
}

pub fn ser_qvec<S: Serializer>(v: &[Q], s: S) -> Result<S::Ok, S::Error> {
    let v: Vec<String> = v.iter().map(fmt_q).collect();
    s.collect_seq(v)
}

pub fn ser_surd<S: Serializer>(x: &Surd, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub fn surd_rows(m: &Mat<Surd>) -> Vec<Vec<String>> {
    (0..m.rows).map(|i| m.row(i).iter().map(ToString::to_string).collect()).collect()
}

/// Float with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}
