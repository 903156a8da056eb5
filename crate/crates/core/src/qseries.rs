//! Truncated q-expansions with exact rational coefficients.

use std::ops::{Add, Neg, Sub};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{format_rational, int, parse_rational, Rational, SparseVec};

/// `sum_{n < precision} coeffs[n] q^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QSeries {
    coeffs: Vec<Rational>,
}

impl QSeries {
    pub fn zero(precision: usize) -> Self {
        Self {
            coeffs: vec![Rational::zero(); precision],
        }
    }

    pub fn constant(c: Rational, precision: usize) -> Self {
        let mut s = Self::zero(precision);
        if precision > 0 {
            s.coeffs[0] = c;
        }
        s
    }

    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self {
            coeffs: coeffs.iter().map(|&c| int(c)).collect(),
        }
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &Rational {
        &self.coeffs[n]
    }

    pub fn set_coeff(&mut self, n: usize, c: Rational) {
        self.coeffs[n] = c;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn truncate(&self, precision: usize) -> Self {
        Self {
            coeffs: self.coeffs.iter().take(precision).cloned().collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Coefficient vector as a sparse element of `Q^precision`.
    pub fn to_sparse(&self) -> SparseVec {
        SparseVec::from_dense(&self.coeffs)
    }

    pub fn from_sparse(v: &SparseVec, precision: usize) -> Self {
        Self {
            coeffs: v.to_dense(precision),
        }
    }

    fn check_same(&self, other: &QSeries) -> Result<()> {
        if self.precision() != other.precision() {
            return Err(Error::PrecisionMismatch {
                left: self.precision(),
                right: other.precision(),
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &QSeries) -> Result<QSeries> {
        self.check_same(other)?;
        Ok(self + other)
    }

    pub fn checked_sub(&self, other: &QSeries) -> Result<QSeries> {
        self.check_same(other)?;
        Ok(self - other)
    }

    /// `q d/dq`: multiplies the n-th coefficient by n.
    pub fn theta(&self) -> QSeries {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(n, c)| c * int(n as i64))
                .collect(),
        }
    }

    /// Truncated Cauchy product.
    pub fn mul(&self, other: &QSeries) -> Result<QSeries> {
        self.check_same(other)?;
        let n = self.precision();
        let mut out = vec![Rational::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..n - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Ok(Self { coeffs: out })
    }

    /// `f(q^k)`, truncated at the same precision.
    pub fn substitute_power(&self, k: usize) -> QSeries {
        assert!(k >= 1, "substitution exponent must be positive");
        let n = self.precision();
        let mut out = vec![Rational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            let target = i * k;
            if target >= n {
                break;
            }
            out[target] = c.clone();
        }
        Self { coeffs: out }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(SeriesRecord::from(self)).expect("series serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<QSeries> {
        let rec: SeriesRecord = serde_json::from_value(value.clone())
            .map_err(|e| Error::ParseRational(e.to_string()))?;
        rec.try_into()
    }
}

/// `(1/2 pi i) W(f, g)` written in q: `theta(f) g - f theta(g)`.
pub fn wronskian_q(f: &QSeries, g: &QSeries) -> Result<QSeries> {
    Ok(f.theta().mul(g)? - f.mul(&g.theta())?)
}

/// JSON form `{"precision": N, "coeffs": ["num/den", ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeriesRecord {
    pub precision: usize,
    pub coeffs: Vec<String>,
}

impl From<&QSeries> for SeriesRecord {
    fn from(s: &QSeries) -> Self {
        Self {
            precision: s.precision(),
            coeffs: s.coeffs.iter().map(format_rational).collect(),
        }
    }
}

impl TryFrom<SeriesRecord> for QSeries {
    type Error = Error;

    fn try_from(rec: SeriesRecord) -> Result<Self> {
        if rec.coeffs.len() != rec.precision {
            return Err(Error::DimensionMismatch {
                expected: rec.precision,
                found: rec.coeffs.len(),
            });
        }
        let coeffs = rec
            .coeffs
            .iter()
            .map(|c| parse_rational(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(QSeries { coeffs })
    }
}

// Operator impls truncate to the shorter precision.
impl Add for &QSeries {
    type Output = QSeries;

    fn add(self, rhs: &QSeries) -> QSeries {
        QSeries {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &QSeries {
    type Output = QSeries;

    fn sub(self, rhs: &QSeries) -> QSeries {
        QSeries {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Add for QSeries {
    type Output = QSeries;

    fn add(self, rhs: QSeries) -> QSeries {
        &self + &rhs
    }
}

impl Sub for QSeries {
    type Output = QSeries;

    fn sub(self, rhs: QSeries) -> QSeries {
        &self - &rhs
    }
}

impl Neg for &QSeries {
    type Output = QSeries;

    fn neg(self) -> QSeries {
        QSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;
    use proptest::prelude::*;

    fn series(coeffs: &[(i64, i64)]) -> QSeries {
        QSeries::from_coeffs(coeffs.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    fn arb_series(n: usize) -> impl Strategy<Value = QSeries> {
        prop::collection::vec((-20i64..20, 1i64..6), n)
            .prop_map(|v| QSeries::from_coeffs(v.into_iter().map(|(a, b)| rat(a, b)).collect()))
    }

    #[test]
    fn theta_termwise() {
        let f = series(&[(3, 10), (1, 1), (1, 1)]);
        assert_eq!(f.theta(), QSeries::from_ints(&[0, 1, 2]));
        assert!(QSeries::constant(rat(5, 7), 6).theta().is_zero());
    }

    #[test]
    fn products() {
        let a = QSeries::from_ints(&[1, 1, 0, 0]);
        let b = QSeries::from_ints(&[1, -1, 0, 0]);
        assert_eq!(a.mul(&b).unwrap(), QSeries::from_ints(&[1, 0, -1, 0]));
        assert_eq!(
            a.mul(&QSeries::zero(3)),
            Err(Error::PrecisionMismatch { left: 4, right: 3 })
        );
    }

    #[test]
    fn substitution() {
        let f = QSeries::from_ints(&[1, 1, 0, 0, 0]);
        assert_eq!(f.substitute_power(1), f);
        assert_eq!(f.substitute_power(2), QSeries::from_ints(&[1, 0, 1, 0, 0]));
        let g = QSeries::from_ints(&[1, 2, 3, 4, 5, 6, 7]);
        assert_eq!(g.substitute_power(3), QSeries::from_ints(&[1, 0, 0, 2, 0, 0, 3]));
    }

    #[test]
    fn json_shape() {
        let f = series(&[(3, 10), (-1, 1)]);
        let j = f.to_json();
        assert_eq!(j, serde_json::json!({"precision": 2, "coeffs": ["3/10", "-1/1"]}));
        assert_eq!(QSeries::from_json(&j).unwrap(), f);
        let bad = serde_json::json!({"precision": 3, "coeffs": ["1/1"]});
        assert!(QSeries::from_json(&bad).is_err());
    }

    proptest! {
        #[test]
        fn leibniz_rule(f in arb_series(12), g in arb_series(12)) {
            let lhs = f.mul(&g).unwrap().theta();
            let rhs = f.theta().mul(&g).unwrap() + f.mul(&g.theta()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn product_commutes(f in arb_series(10), g in arb_series(10)) {
            prop_assert_eq!(f.mul(&g).unwrap(), g.mul(&f).unwrap());
        }

        #[test]
        fn wronskian_alternating_and_cuspidal(f in arb_series(10), g in arb_series(10)) {
            let w = wronskian_q(&f, &g).unwrap();
            prop_assert!(w.coeff(0).is_zero());
            prop_assert_eq!(&w, &-&wronskian_q(&g, &f).unwrap());
            prop_assert!(wronskian_q(&f, &f).unwrap().is_zero());
        }

        #[test]
        fn wronskian_bilinear(
            f in arb_series(9), g in arb_series(9), h in arb_series(9),
            a in -5i64..5, b in 1i64..5,
        ) {
            let c = rat(a, b);
            let lhs = wronskian_q(&(&f.scale(&c) + &g), &h).unwrap();
            let rhs = wronskian_q(&f, &h).unwrap().scale(&c) + wronskian_q(&g, &h).unwrap();
            prop_assert_eq!(lhs, rhs);
            let lhs = wronskian_q(&h, &(&f.scale(&c) + &g)).unwrap();
            let rhs = wronskian_q(&h, &f).unwrap().scale(&c) + wronskian_q(&h, &g).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
