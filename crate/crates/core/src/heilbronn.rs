//! Heilbronn-type tuples `H(n)`, the Euclid family `I(n)` with its `up` map,
//! the Hecke image of the winding symbol and the diamond action.

use std::collections::HashSet;

use num_integer::Integer;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Rational;
use crate::modsym::{Quadratic, SymbolVector};

/// `(a, b, c, d)` with `ad - bc = n`, `a > b >= 0`, `d > c >= 0`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct HeilbronnTuple {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl HeilbronnTuple {
    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    /// `(ax + by)(cx + dy)`.
    pub fn quadratic(&self) -> Quadratic {
        Quadratic::product(self.a, self.b, self.c, self.d)
    }
}

/// `(m1, k1, m2, k2)`, all positive, with `m1 k1 + m2 k2 = n`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct EuclidTuple {
    pub m1: i64,
    pub k1: i64,
    pub m2: i64,
    pub k2: i64,
}

impl EuclidTuple {
    pub fn weight(&self) -> i64 {
        self.m1 * self.k1 + self.m2 * self.k2
    }
}

/// `H(n)` in lexicographic order. Empty for `n < 1`.
pub fn enumerate_h(n: i64) -> Vec<HeilbronnTuple> {
    let mut out = Vec::new();
    for a in 1..=n {
        for b in 0..a {
            // n = ad - bc >= d(a - b) + b because c <= d - 1
            let d_max = (n - b) / (a - b);
            for d in 1..=d_max {
                if b == 0 {
                    if a * d == n {
                        out.extend((0..d).map(|c| HeilbronnTuple { a, b, c, d }));
                    }
                    continue;
                }
                let r = a * d - n;
                if r >= 0 && r % b == 0 && r / b < d {
                    out.push(HeilbronnTuple { a, b, c: r / b, d });
                }
            }
        }
    }
    out.sort();
    out
}

/// `I(n)` in lexicographic order.
pub fn enumerate_i(n: i64) -> Vec<EuclidTuple> {
    let mut out = Vec::new();
    for m1 in 1..n {
        for k1 in 1..=(n - 1) / m1 {
            let r = n - m1 * k1;
            for m2 in 1..=r {
                if r % m2 == 0 {
                    out.push(EuclidTuple { m1, k1, m2, k2: r / m2 });
                }
            }
        }
    }
    out
}

/// The Euclid step; `None` when `m1 = m2`, where runs end.
pub fn up(t: &EuclidTuple) -> Option<EuclidTuple> {
    use std::cmp::Ordering::*;
    match t.m1.cmp(&t.m2) {
        Greater => Some(EuclidTuple {
            m1: t.m2,
            k1: t.k1 + t.k2,
            m2: t.m1 - t.m2,
            k2: t.k1,
        }),
        Less => Some(EuclidTuple {
            m1: t.m2 - t.m1,
            k1: t.k2,
            m2: t.m1,
            k2: t.k1 + t.k2,
        }),
        Equal => None,
    }
}

/// Orbits of `up` starting at the tuples with `k1 = k2` (which have no preimage).
/// Each run is listed from its start to its terminal tuple with `m1 = m2`.
/// Since `m1 + m2` strictly decreases along `up`, every run is finite.
pub fn run_decomposition(n: i64) -> Vec<Vec<EuclidTuple>> {
    enumerate_i(n)
        .into_iter()
        .filter(|t| t.k1 == t.k2)
        .map(|start| {
            let mut run = vec![start];
            while let Some(next) = up(run.last().expect("nonempty")) {
                run.push(next);
            }
            run
        })
        .collect()
}

/// Structural facts about `up` on `I(n)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EuclidReport {
    pub n: i64,
    pub size: usize,
    pub runs: usize,
    /// Every run ends at `m1 = m2` and the runs cover `I(n)` without overlap.
    pub partition: bool,
    /// `up` maps `{m1 != m2}` bijectively onto `{k1 != k2}`.
    pub bijection: bool,
}

impl EuclidReport {
    pub fn passed(&self) -> bool {
        self.partition && self.bijection
    }
}

pub fn euclid_check(n: i64) -> EuclidReport {
    let all = enumerate_i(n);
    let runs = run_decomposition(n);

    let mut seen = HashSet::new();
    let mut partition = true;
    for run in &runs {
        let last = run.last().expect("nonempty");
        partition &= last.m1 == last.m2 && run.len() as i64 <= n;
        for t in run {
            partition &= t.weight() == n && seen.insert(*t);
        }
    }
    partition &= seen.len() == all.len();

    let domain: Vec<&EuclidTuple> = all.iter().filter(|t| t.m1 != t.m2).collect();
    let target: HashSet<EuclidTuple> = all.iter().filter(|t| t.k1 != t.k2).copied().collect();
    let image: HashSet<EuclidTuple> = domain.iter().filter_map(|t| up(t)).collect();
    let bijection = image.len() == domain.len() && image == target;

    EuclidReport {
        n,
        size: all.len(),
        runs: runs.len(),
        partition,
        bijection,
    }
}

/// First embedding of `I(n)` into two copies of `H(n)`, split by `m1 >= m2`.
pub fn embed_by_m(t: &EuclidTuple) -> (usize, HeilbronnTuple) {
    if t.m1 >= t.m2 {
        let (a, c) = (t.m1, t.k2);
        (0, HeilbronnTuple { a, b: a - t.m2, c, d: t.k1 + c })
    } else {
        let (a, c) = (t.m2, t.k1);
        (1, HeilbronnTuple { a, b: a - t.m1, c, d: t.k2 + c })
    }
}

/// Second embedding, split by `k1 > k2`.
pub fn embed_by_k(t: &EuclidTuple) -> (usize, HeilbronnTuple) {
    if t.k1 > t.k2 {
        let (b, d) = (t.m2, t.k1);
        (0, HeilbronnTuple { a: t.m1 + b, b, c: d - t.k2, d })
    } else {
        let (b, d) = (t.m1, t.k2);
        (1, HeilbronnTuple { a: t.m2 + b, b, c: d - t.k1, d })
    }
}

/// `(sum_{H(n)} (ax+by)(cx+dy)(c,d))_-`; tuples with `gcd(c,d,l) > 1` drop out.
pub fn hecke_on_e0(n: i64, l: u64) -> SymbolVector {
    let mut w = SymbolVector::new(l);
    let one = Rational::one();
    for t in enumerate_h(n) {
        w.add_quadratic(t.quadratic(), t.c, t.d, &one);
    }
    w.symmetrize(false)
}

/// `P(u,v) -> P(ju, jv)`.
pub fn diamond(j: i64, w: &SymbolVector) -> Result<SymbolVector> {
    let l = w.level();
    if j.gcd(&(l as i64)) != 1 {
        return Err(Error::NotAUnit { j, level: l });
    }
    let mut out = SymbolVector::new(l);
    for (k, x) in w.terms() {
        out.add_term(k.monomial, j * k.u as i64, j * k.v as i64, x.clone());
    }
    Ok(out)
}

/// Units of `Z/l` in `[1, l)`.
pub fn units(l: u64) -> Vec<i64> {
    let l = l as i64;
    (1..l.max(2)).filter(|j| j.gcd(&l) == 1).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;
    use crate::modsym::{cusp_eval, Monomial, PresentedSpace};

    fn brute_h(n: i64) -> Vec<HeilbronnTuple> {
        let mut out = Vec::new();
        for a in 0..=2 * n {
            for b in 0..=2 * n {
                for c in 0..=2 * n {
                    for d in 0..=2 * n {
                        if a > b && d > c && a * d - b * c == n {
                            out.push(HeilbronnTuple { a, b, c, d });
                        }
                    }
                }
            }
        }
        out
    }

    fn brute_i(n: i64) -> Vec<EuclidTuple> {
        let mut out = Vec::new();
        for m1 in 1..=n {
            for k1 in 1..=n {
                for m2 in 1..=n {
                    for k2 in 1..=n {
                        if m1 * k1 + m2 * k2 == n {
                            out.push(EuclidTuple { m1, k1, m2, k2 });
                        }
                    }
                }
            }
        }
        out
    }

    #[test]
    fn h_small_cases() {
        assert_eq!(enumerate_h(1), vec![HeilbronnTuple { a: 1, b: 0, c: 0, d: 1 }]);
        assert_eq!(
            enumerate_h(2),
            vec![
                HeilbronnTuple { a: 1, b: 0, c: 0, d: 2 },
                HeilbronnTuple { a: 1, b: 0, c: 1, d: 2 },
                HeilbronnTuple { a: 2, b: 0, c: 0, d: 1 },
                HeilbronnTuple { a: 2, b: 1, c: 0, d: 1 },
            ]
        );
        // determinant 3, so it first appears in H(3)
        assert!(enumerate_h(3).contains(&HeilbronnTuple { a: 2, b: 1, c: 1, d: 2 }));
        for n in 1..=12 {
            assert_eq!(enumerate_h(n), brute_h(n), "n={n}");
        }
        for n in 1..=60 {
            assert!(enumerate_h(n).iter().all(|t| t.det() == n));
        }
    }

    #[test]
    fn i_small_cases() {
        assert_eq!(
            enumerate_i(3),
            vec![
                EuclidTuple { m1: 1, k1: 1, m2: 1, k2: 2 },
                EuclidTuple { m1: 1, k1: 1, m2: 2, k2: 1 },
                EuclidTuple { m1: 1, k1: 2, m2: 1, k2: 1 },
                EuclidTuple { m1: 2, k1: 1, m2: 1, k2: 1 },
            ]
        );
        assert_eq!(enumerate_i(4).len(), 8);
        assert!(enumerate_i(1).is_empty());
        for n in 1..=16 {
            assert_eq!(enumerate_i(n), brute_i(n), "n={n}");
        }
    }

    #[test]
    fn up_examples() {
        let t = |m1, k1, m2, k2| EuclidTuple { m1, k1, m2, k2 };
        assert_eq!(up(&t(2, 1, 1, 1)), Some(t(1, 2, 1, 1)));
        assert_eq!(up(&t(1, 1, 2, 1)), Some(t(1, 1, 1, 2)));
        assert_eq!(up(&t(1, 2, 1, 2)), None);
    }

    #[test]
    fn runs_at_three() {
        let runs = run_decomposition(3);
        let covered: usize = runs.iter().map(Vec::len).sum();
        assert_eq!(covered, 4);
        assert!(euclid_check(3).passed());
    }

    #[test]
    fn euclid_structure_up_to_300() {
        for n in 1..=300 {
            let r = euclid_check(n);
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn embeddings_are_bijective() {
        for n in 1..=40 {
            let h = enumerate_h(n);
            let by_m: Vec<_> = enumerate_i(n).iter().map(embed_by_m).collect();
            let by_k: Vec<_> = enumerate_i(n).iter().map(embed_by_k).collect();
            for (_, t) in by_m.iter().chain(&by_k) {
                assert!(h.contains(t), "n={n} {t:?}");
            }
            let image = |emb: &[(usize, HeilbronnTuple)], copy| -> HashSet<HeilbronnTuple> {
                emb.iter().filter(|(c, _)| *c == copy).map(|(_, t)| *t).collect()
            };
            let subset = |f: &dyn Fn(&HeilbronnTuple) -> bool| -> HashSet<HeilbronnTuple> {
                h.iter().filter(|t| f(t)).copied().collect()
            };
            assert_eq!(image(&by_m, 0), subset(&|t| t.c > 0));
            assert_eq!(image(&by_m, 1), subset(&|t| t.b * t.c > 0));
            assert_eq!(image(&by_k, 0), subset(&|t| t.b * t.c > 0));
            assert_eq!(image(&by_k, 1), subset(&|t| t.b > 0));
            let total = image(&by_m, 0).len() + image(&by_m, 1).len();
            assert_eq!(total, enumerate_i(n).len());
            let total = image(&by_k, 0).len() + image(&by_k, 1).len();
            assert_eq!(total, enumerate_i(n).len());
        }
    }

    #[test]
    fn hecke_first_terms() {
        let e0 = SymbolVector::generator(5, Monomial::XY, 0, 1).symmetrize(false);
        assert_eq!(hecke_on_e0(1, 5), e0);

        let t = HeilbronnTuple { a: 2, b: 1, c: 1, d: 2 };
        assert_eq!(t.quadratic(), Quadratic::new(2, 5, 2));
        let mut raw = SymbolVector::new(5);
        for h in enumerate_h(3) {
            raw.add_quadratic(h.quadratic(), h.c, h.d, &int(1));
        }
        let key = |m| crate::modsym::SymbolKey { monomial: m, u: 1, v: 2 };
        assert_eq!(raw.terms()[&key(Monomial::X2)], int(2));
        assert_eq!(raw.terms()[&key(Monomial::XY)], int(5));
        assert_eq!(raw.terms()[&key(Monomial::Y2)], int(2));
        assert_eq!(raw.symmetrize(false), hecke_on_e0(3, 5));
    }

    #[test]
    fn hecke_image_is_cuspidal_minus() {
        for l in [5u64, 7] {
            let s = PresentedSpace::build(l).unwrap();
            let (_, minus) = s.plus_minus_subspaces();
            for n in 1..=20 {
                let w = hecke_on_e0(n, l);
                for c in s.cusps() {
                    assert_eq!(cusp_eval(c, &w).unwrap(), int(0));
                }
                assert!(minus.contains(&s.coords(&w).unwrap()).unwrap(), "l={l} n={n}");
            }
        }
    }

    #[test]
    fn hecke_drops_non_admissible() {
        let w = hecke_on_e0(6, 6);
        for k in w.terms().keys() {
            assert!(crate::modsym::admissible(k.u as i64, k.v as i64, 6));
        }
    }

    #[test]
    fn diamond_action() {
        let mut w = SymbolVector::generator(7, Monomial::XY, 1, 2);
        w.add_term(Monomial::X2, 3, 5, int(2));
        assert_eq!(diamond(1, &w).unwrap(), w);
        for j in units(7) {
            for k in units(7) {
                let lhs = diamond(j, &diamond(k, &w).unwrap()).unwrap();
                assert_eq!(lhs, diamond(j * k, &w).unwrap());
            }
            assert_eq!(diamond(j, &w.involution()).unwrap(), diamond(j, &w).unwrap().involution());
        }
        assert_eq!(diamond(3, &SymbolVector::new(6)), Err(Error::NotAUnit { j: 3, level: 6 }));
    }

    #[test]
    fn diamond_descends() {
        for l in [5u64, 7] {
            let s = PresentedSpace::build(l).unwrap();
            for j in units(l) {
                for r in s.relations().row_vecs() {
                    let mut w = SymbolVector::new(l);
                    for (c, x) in r.entries() {
                        let k = s.key_of(*c);
                        w.add_term(k.monomial, k.u as i64, k.v as i64, x.clone());
                    }
                    assert!(s.coords(&diamond(j, &w).unwrap()).unwrap().is_zero());
                }
            }
        }
    }
}
