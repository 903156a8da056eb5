//! Weight-one and weight-two Eisenstein q-series of level `l`, fractional-part
//! helpers, and the space of lower-weight forms used for congruences.
//!
//! For `a mod l` the weight-one series is
//!
//! ```text
//! s_a = (1/2 - {a/l}) + sum_{n>0} q^n sum_{d | n} ([d = a] - [d = -a])     (a != 0 mod l)
//! s_0 = 0
//! ```
//!
//! and the weight-two series `t_a`, `r_a` are only built without their constant
//! terms, with divisor weights `n/d` and `d` respectively.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{int, rat, Rational, Subspace};
use crate::qseries::{wronskian_q, QSeries};

/// A rational in `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FracValue(Rational);

impl FracValue {
    pub fn value(&self) -> &Rational {
        &self.0
    }

    pub fn into_inner(self) -> Rational {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

/// Fractional part `{x} = x - floor(x)`.
pub fn frac(x: &Rational) -> FracValue {
    FracValue(x - x.floor())
}

fn frac_of(num: i64, den: u64) -> Rational {
    let den = den as i64;
    rat(num.mod_floor(&den), den)
}

pub(crate) fn residue(a: i64, l: u64) -> u64 {
    a.mod_floor(&(l as i64)) as u64
}

fn check_level(l: u64) -> Result<()> {
    if l < 2 {
        return Err(Error::LevelTooSmall(l));
    }
    Ok(())
}

/// `ceil(l^2/3 * prod_{p | l} (1 - 1/p^2)) + 10`: a weight-four Sturm-type bound plus margin.
pub fn default_precision(l: u64) -> usize {
    let mut index = rat((l * l) as i64, 3);
    let mut m = l;
    let mut p = 2;
    while m > 1 {
        if m.is_multiple_of(p) {
            index *= rat((p * p - 1) as i64, (p * p) as i64);
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
        p += 1;
    }
    let bound = index.ceil().to_integer();
    usize::try_from(bound).expect("bound fits in usize") + 10
}

/// Sum over `d | n`, `0 < n < precision`, of `weight(n, d)` for divisors in the
/// residue classes `a` and `-a` (with signs `plus`, `minus`).
fn divisor_series(
    a: i64,
    l: u64,
    precision: usize,
    plus: i64,
    minus: i64,
    weight: impl Fn(usize, usize) -> i64,
) -> QSeries {
    let ra = residue(a, l);
    let rm = residue(-a, l);
    let mut coeffs = vec![0i64; precision];
    for d in 1..precision {
        let rd = (d as u64) % l;
        let sign = if rd == ra { plus } else { 0 } + if rd == rm { minus } else { 0 };
        if sign == 0 {
            continue;
        }
        for n in (d..precision).step_by(d) {
            coeffs[n] += sign * weight(n, d);
        }
    }
    QSeries::from_coeffs(coeffs.into_iter().map(int).collect())
}

pub fn s_series(a: i64, l: u64, precision: usize) -> Result<QSeries> {
    check_level(l)?;
    if residue(a, l) == 0 {
        return Ok(QSeries::zero(precision));
    }
    let mut s = divisor_series(a, l, precision, 1, -1, |_, _| 1);
    if precision > 0 {
        s.set_coeff(0, rat(1, 2) - frac_of(a, l));
    }
    Ok(s)
}

/// `t_a` without its constant: `sum_n q^n sum_{d | n} (n/d)([d = a] + [d = -a])`.
pub fn t_nonconst(a: i64, l: u64, precision: usize) -> Result<QSeries> {
    check_level(l)?;
    Ok(divisor_series(a, l, precision, 1, 1, |n, d| (n / d) as i64))
}

/// `r_a` without its constant: `sum_n q^n sum_{d | n} d([d = a] + [d = -a])`.
pub fn r_nonconst(a: i64, l: u64, precision: usize) -> Result<QSeries> {
    check_level(l)?;
    Ok(divisor_series(a, l, precision, 1, 1, |_, d| d as i64))
}

/// Closed form of `#{0 < k <= d : k = u mod l}`: `d/l - {(d-u)/l} + {-u/l}`.
pub fn residue_count(d: u64, u: i64, l: u64) -> Rational {
    rat(d as i64, l as i64) - frac_of(d as i64 - u, l) + frac_of(-u, l)
}

/// Closed form of `sum_{0 < k <= d, k = u mod l} (2k/d - 1)`.
pub fn residue_weighted(d: u64, u: i64, l: u64) -> Rational {
    let a = frac_of(d as i64 - u, l);
    let b = frac_of(-u, l);
    let quad = &a * &a - &a - &b * &b + &b;
    rat(l as i64, d as i64) * quad + (Rational::one() - a - b)
}

/// Weight-one and weight-two series for every residue class at one level and precision.
#[derive(Clone, Debug)]
pub struct EisensteinFamily {
    level: u64,
    precision: usize,
    s: Vec<QSeries>,
    t_nc: Vec<QSeries>,
    r_nc: Vec<QSeries>,
    // W(s_a, s_b) for representatives 1 <= a < b <= l/2.
    wronskians: BTreeMap<(u64, u64), QSeries>,
}

impl EisensteinFamily {
    pub fn new(level: u64, precision: usize) -> Result<Self> {
        check_level(level)?;
        let l = level as i64;
        let s: Vec<QSeries> = (0..l).map(|a| s_series(a, level, precision)).collect::<Result<_>>()?;
        let t_nc = (0..l).map(|a| t_nonconst(a, level, precision)).collect::<Result<_>>()?;
        let r_nc = (0..l).map(|a| r_nonconst(a, level, precision)).collect::<Result<_>>()?;
        let half = level / 2;
        let mut wronskians = BTreeMap::new();
        for a in 1..=half {
            for b in a + 1..=half {
                let w = wronskian_q(&s[a as usize], &s[b as usize])?;
                wronskians.insert((a, b), w);
            }
        }
        Ok(Self {
            level,
            precision,
            s,
            t_nc,
            r_nc,
            wronskians,
        })
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    pub fn s(&self, a: i64) -> &QSeries {
        &self.s[residue(a, self.level) as usize]
    }

    pub fn t_nc(&self, a: i64) -> &QSeries {
        &self.t_nc[residue(a, self.level) as usize]
    }

    pub fn r_nc(&self, a: i64) -> &QSeries {
        &self.r_nc[residue(a, self.level) as usize]
    }

    /// `theta(s_u) s_v - s_u theta(s_v)`, assembled from cached representatives.
    pub fn wronskian(&self, u: i64, v: i64) -> QSeries {
        let (a, sa) = self.representative(u);
        let (b, sb) = self.representative(v);
        let sign = sa * sb;
        if sign == 0 || a == b {
            return QSeries::zero(self.precision);
        }
        let (lo, hi, sign) = if a < b { (a, b, sign) } else { (b, a, -sign) };
        let w = &self.wronskians[&(lo, hi)];
        if sign > 0 {
            w.clone()
        } else {
            -w
        }
    }

    // s_{-a} = -s_a; s_0 and s_{l/2} vanish.
    fn representative(&self, a: i64) -> (u64, i64) {
        let r = residue(a, self.level);
        if r == 0 || 2 * r == self.level {
            (0, 0)
        } else if 2 * r < self.level {
            (r, 1)
        } else {
            (self.level - r, -1)
        }
    }
}

/// Generators of the lower-weight space: `1`, every `s_a`, `theta s_a`,
/// `t_a`, `r_a` (non-constant parts) and every product `s_a s_b`.
pub fn junk_generators(l: u64, precision: usize) -> Result<Vec<QSeries>> {
    let fam = EisensteinFamily::new(l, precision)?;
    junk_generators_from(&fam)
}

pub fn junk_generators_from(fam: &EisensteinFamily) -> Result<Vec<QSeries>> {
    let l = fam.level() as i64;
    let n = fam.precision();
    let mut out = vec![QSeries::constant(Rational::one(), n)];
    for a in 0..l {
        out.push(fam.s(a).clone());
        out.push(fam.s(a).theta());
        out.push(fam.t_nc(a).clone());
        out.push(fam.r_nc(a).clone());
    }
    for a in 0..l {
        for b in a..l {
            out.push(fam.s(a).mul(fam.s(b))?);
        }
    }
    out.retain(|s| !s.is_zero());
    Ok(out)
}

pub fn junk_space(l: u64, precision: usize) -> Result<Subspace> {
    let gens = junk_generators(l, precision)?;
    Subspace::span(precision, &gens.iter().map(QSeries::to_sparse).collect::<Vec<_>>())
}

pub fn junk_space_from(fam: &EisensteinFamily) -> Result<Subspace> {
    let gens = junk_generators_from(fam)?;
    Subspace::span(fam.precision(), &gens.iter().map(QSeries::to_sparse).collect::<Vec<_>>())
}

/// `sigma_1(n)` for `n < precision` as a series with zero constant term.
pub fn sigma1_series(precision: usize) -> QSeries {
    let mut c = vec![0i64; precision];
    for d in 1..precision {
        for n in (d..precision).step_by(d) {
            c[n] += d as i64;
        }
    }
    QSeries::from_coeffs(c.into_iter().map(int).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn count_brute(d: u64, u: i64, l: u64) -> Rational {
        int((1..=d).filter(|&k| residue(k as i64, l) == residue(u, l)).count() as i64)
    }

    fn weighted_brute(d: u64, u: i64, l: u64) -> Rational {
        (1..=d)
            .filter(|&k| residue(k as i64, l) == residue(u, l))
            .fold(Rational::zero(), |acc, k| acc + rat(2 * k as i64, d as i64) - int(1))
    }

    #[test]
    fn frac_examples() {
        assert_eq!(frac(&rat(7, 5)).into_inner(), rat(2, 5));
        assert_eq!(frac(&rat(-3, 5)).into_inner(), rat(2, 5));
        assert!(frac(&int(0)).is_zero());
        assert!(frac(&int(-4)).is_zero());
    }

    #[test]
    fn s_series_level_five() {
        let s1 = s_series(1, 5, 6).unwrap();
        let mut expect = QSeries::from_ints(&[0, 1, 1, 1, 0, 1]);
        expect.set_coeff(0, rat(3, 10));
        assert_eq!(s1, expect);

        let s2 = s_series(2, 5, 6).unwrap();
        let mut expect = QSeries::from_ints(&[0, 0, 1, -1, 1, 0]);
        expect.set_coeff(0, rat(1, 10));
        assert_eq!(s2, expect);

        assert!(s_series(0, 5, 6).unwrap().is_zero());
        assert!(s_series(10, 5, 6).unwrap().is_zero());
        assert_eq!(s_series(1, 1, 4), Err(Error::LevelTooSmall(1)));
    }

    #[test]
    fn theta_of_s1() {
        let s1 = s_series(1, 5, 6).unwrap();
        assert_eq!(s1.theta(), QSeries::from_ints(&[0, 1, 2, 3, 0, 5]));
    }

    #[test]
    fn s_product_constant() {
        let p = s_series(1, 5, 6).unwrap().mul(&s_series(2, 5, 6).unwrap()).unwrap();
        assert_eq!(p.coeff(0), &rat(3, 100));
    }

    #[test]
    fn wronskian_level_five() {
        let w = wronskian_q(&s_series(1, 5, 6).unwrap(), &s_series(2, 5, 6).unwrap()).unwrap();
        let expect = QSeries::from_coeffs(vec![
            int(0),
            rat(1, 10),
            rat(-2, 5),
            rat(1, 5),
            rat(4, 5),
            rat(-1, 2),
        ]);
        assert_eq!(w, expect);
        let fam = EisensteinFamily::new(5, 6).unwrap();
        assert_eq!(fam.wronskian(1, 2), expect);
        assert_eq!(fam.wronskian(2, 1), -&expect);
        assert_eq!(fam.wronskian(4, 2), -&expect);
        assert_eq!(fam.wronskian(-1, 3), expect);
        assert!(fam.wronskian(0, 2).is_zero());
        assert!(fam.wronskian(2, 2).is_zero());
    }

    #[test]
    fn family_wronskian_matches_direct_product() {
        for l in [6u64, 7, 8, 9] {
            let fam = EisensteinFamily::new(l, 15).unwrap();
            for u in -3..(l as i64 + 2) {
                for v in 0..l as i64 {
                    let direct = wronskian_q(fam.s(u), fam.s(v)).unwrap();
                    assert_eq!(fam.wronskian(u, v), direct, "l={l} u={u} v={v}");
                }
            }
        }
    }

    #[test]
    fn r_and_t_examples() {
        assert_eq!(r_nonconst(1, 5, 4).unwrap(), QSeries::from_ints(&[0, 1, 1, 1]));
        assert_eq!(r_nonconst(1, 5, 5).unwrap().coeff(4), &int(5));
        for l in [2u64, 5, 7, 12] {
            assert_eq!(t_nonconst(0, l, 3 * l as usize).unwrap().coeff(l as usize), &int(2));
        }
    }

    #[test]
    fn r_sum_is_twice_sigma() {
        for l in [3u64, 5, 8] {
            let n = 25;
            let total = (0..l as i64).fold(QSeries::zero(n), |acc, a| acc + r_nonconst(a, l, n).unwrap());
            assert_eq!(total, sigma1_series(n).scale(&int(2)));
        }
    }

    #[test]
    fn residue_examples() {
        assert_eq!(residue_count(7, 2, 5), int(2));
        for l in 2..12u64 {
            for u in -3..15 {
                assert_eq!(residue_count(l, u, l), int(1));
            }
        }
        assert_eq!(residue_count(3, 4, 5), int(0));
        assert_eq!(residue_weighted(6, 1, 4), int(0));
        assert_eq!(residue_weighted(5, 5, 5), int(1));
        assert_eq!(residue_weighted(3, 4, 5), int(0));
        assert_eq!(weighted_brute(3, 4, 5), int(0));
    }

    #[test]
    fn residue_closed_forms_match_brute_force_small() {
        for l in 2..=12u64 {
            for d in 1..=40u64 {
                for u in 0..l as i64 {
                    assert_eq!(residue_count(d, u, l), count_brute(d, u, l));
                    assert_eq!(residue_weighted(d, u, l), weighted_brute(d, u, l));
                }
            }
        }
    }

    #[test]
    fn s_series_symmetry_and_constant() {
        for l in 2..=30u64 {
            for a in 0..l as i64 {
                let s = s_series(a, l, 12).unwrap();
                assert_eq!(s_series(-a, l, 12).unwrap(), -&s);
                if a != 0 {
                    assert_eq!(s.coeff(0), &(rat(1, 2) - frac(&rat(a, l as i64)).into_inner()));
                }
                assert_eq!(t_nonconst(-a, l, 12).unwrap(), t_nonconst(a, l, 12).unwrap());
                assert_eq!(r_nonconst(-a, l, 12).unwrap(), r_nonconst(a, l, 12).unwrap());
            }
        }
    }

    #[test]
    fn level_pushforward() {
        let n = 40;
        for (m, l) in [(5u64, 10u64), (3, 9), (7, 14)] {
            for b in 0..m as i64 {
                let total = (0..l as i64)
                    .filter(|a| residue(*a, m) == residue(b, m))
                    .fold(QSeries::zero(n), |acc, a| acc + s_series(a, l, n).unwrap());
                assert_eq!(total, s_series(b, m, n).unwrap(), "m={m} l={l} b={b}");
            }
        }
    }

    #[test]
    fn level_lift() {
        let n = 20;
        assert_eq!(
            s_series(1, 5, n).unwrap().substitute_power(2),
            s_series(2, 10, n).unwrap()
        );
        for (level, k) in [(5u64, 2u64), (5, 3), (7, 2), (4, 3), (3, 5)] {
            for i in 0..level as i64 {
                let lifted = s_series(i, level, n).unwrap().substitute_power(k as usize);
                let direct = s_series(k as i64 * i, k * level, n).unwrap();
                assert_eq!(lifted, direct, "level={level} k={k} i={i}");
            }
        }
    }

    #[test]
    fn junk_contents() {
        let j = junk_space(5, 18).unwrap();
        assert!(j.contains(&QSeries::constant(int(1), 18).to_sparse()).unwrap());
        assert!(j.contains(&s_series(1, 5, 18).unwrap().theta().to_sparse()).unwrap());
        assert_eq!(j.dim(), JUNK_DIM_5_18);
    }

    // constants (1) + s_a (2) + theta s_a (2) + weight-two quasimodular (4)
    const JUNK_DIM_5_18: usize = 9;

    #[test]
    fn default_precisions() {
        assert_eq!(default_precision(5), 18);
        assert_eq!(default_precision(7), 26);
        assert_eq!(default_precision(11), 50);
        assert_eq!(default_precision(13), 66);
        assert_eq!(default_precision(2), 11);
        // 36 * (3/4) * (8/9) / 3 = 8
        assert_eq!(default_precision(6), 18);
    }

    proptest! {
        #[test]
        fn frac_plus_frac_of_negative(n in -500i64..500, d in 1i64..60) {
            let t = rat(n, d);
            let lhs = frac(&t).into_inner() + frac(&-t.clone()).into_inner();
            let expect = if t.is_integer() { int(0) } else { int(1) };
            prop_assert_eq!(lhs, expect);
        }

        #[test]
        fn frac_is_in_unit_interval(n in -500i64..500, d in 1i64..60) {
            let x = rat(n, d);
            let f = frac(&x).into_inner();
            prop_assert!(f >= int(0) && f < int(1));
            prop_assert!((x - f).is_integer());
        }
    }
}
