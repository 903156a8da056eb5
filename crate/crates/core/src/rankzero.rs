//! Wronskian spans, the Hecke-cyclic module of the winding symbol and the
//! comparison between them.

use serde::Serialize;

use crate::eisenstein::{junk_space_from, EisensteinFamily};
use crate::error::Result;
use crate::heilbronn::{diamond, hecke_on_e0, units};
use crate::linalg::{format_rational, EchelonSolver, SparseVec, Subspace};
use crate::modsym::PresentedSpace;
use crate::pdmu::{composition_b_from_table, hecke_table, DualFunctional};
use crate::qseries::QSeries;

/// Span of `W(s_a, s_b)` over all `a, b mod l`, as coefficient vectors.
pub fn wronskian_span(fam: &EisensteinFamily) -> Result<Subspace> {
    let l = fam.level() as i64;
    let mut gens = Vec::new();
    for a in 0..l {
        for b in 0..l {
            gens.push(fam.wronskian(a, b).to_sparse());
        }
    }
    Subspace::span(fam.precision(), &gens)
}

/// The same span from the representatives `1 <= a < b <= l/2` only.
pub fn wronskian_span_reduced(fam: &EisensteinFamily) -> Result<Subspace> {
    let half = fam.level() as i64 / 2;
    let mut gens = Vec::new();
    for a in 1..=half {
        for b in a + 1..=half {
            gens.push(fam.wronskian(a, b).to_sparse());
        }
    }
    Subspace::span(fam.precision(), &gens)
}

/// `sum_{j in (Z/l)^*} W(s_{aj}, s_{bj})`.
pub fn gamma0_generator(fam: &EisensteinFamily, a: i64, b: i64) -> QSeries {
    units(fam.level())
        .into_iter()
        .fold(QSeries::zero(fam.precision()), |acc, j| acc + fam.wronskian(a * j, b * j))
}

pub fn gamma0_span(fam: &EisensteinFamily) -> Result<Subspace> {
    let l = fam.level() as i64;
    let mut gens = Vec::new();
    for a in 0..l {
        for b in 0..l {
            gens.push(gamma0_generator(fam, a, b).to_sparse());
        }
    }
    Subspace::span(fam.precision(), &gens)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CyclicReport {
    pub dim: usize,
    pub n_max: usize,
    /// Dimension after each `n = 1..=n_max`.
    pub history: Vec<usize>,
    /// No growth over the last ten values of `n`.
    pub stabilized: bool,
}

/// Dimension of span{diamond(j, hecke_on_e0(n, l))} inside `S_4(l)_-`.
pub fn cyclic_dim(space: &PresentedSpace, n_max: usize) -> Result<CyclicReport> {
    let (_, minus) = space.plus_minus_subspaces();
    let units = units(space.level());
    let mut solver = EchelonSolver::new();
    let mut history = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let w = hecke_on_e0(n as i64, space.level());
        for &j in &units {
            let c = minus.membership(&space.coords(&diamond(j, &w)?)?)?;
            solver.insert(&SparseVec::from_dense(&c));
        }
        history.push(solver.rank());
    }
    let dim = solver.rank();
    let last_change = history.iter().position(|&d| d == dim).map_or(0, |i| i + 1);
    Ok(CyclicReport {
        dim,
        n_max,
        stabilized: n_max >= last_change + 10,
        history,
    })
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Match,
    Mismatch,
    Indeterminate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SpanReport {
    pub level: u64,
    pub precision: usize,
    pub prime: bool,
    pub wronskian_dim: usize,
    pub cyclic_dim: usize,
    pub cyclic_stabilized: bool,
    pub n_max: usize,
    pub b_span_dim_mod_junk: usize,
    pub junk_dim: usize,
    /// `span{B(phi_i)} + J == wronskian_span + J`.
    pub bridge: bool,
    pub verdict: Verdict,
    pub caveat: Option<String>,
    /// Reduced basis of the Wronskian span, coefficients as "num/den".
    pub witnesses: Vec<Vec<String>>,
}

pub fn is_prime(l: u64) -> bool {
    l >= 2 && (2..).take_while(|p| p * p <= l).all(|p| !l.is_multiple_of(p))
}

pub fn theorem_check(space: &PresentedSpace, fam: &EisensteinFamily, n_max: usize) -> Result<SpanReport> {
    let l = space.level();
    let n = fam.precision();
    let wspan = wronskian_span(fam)?;
    let junk = junk_space_from(fam)?;

    let table = hecke_table(space, n)?;
    let bs = DualFunctional::minus_basis(space)
        .iter()
        .map(|phi| Ok(composition_b_from_table(space, phi, &table)?.to_sparse()))
        .collect::<Result<Vec<_>>>()?;
    let b_plus_j = Subspace::span(n, &bs)?.sum(&junk)?;
    let w_plus_j = wspan.sum(&junk)?;
    let bridge = b_plus_j.equals(&w_plus_j)?;

    let cyclic = cyclic_dim(space, n_max)?;
    let prime = is_prime(l);
    let dims_agree = wspan.dim() == cyclic.dim;
    let verdict = if !bridge || (prime && cyclic.stabilized && !dims_agree) {
        Verdict::Mismatch
    } else if prime && !cyclic.stabilized {
        Verdict::Indeterminate
    } else {
        Verdict::Match
    };
    let caveat = (!prime).then(|| {
        format!(
            "composite level: only the span comparison is decisive (wronskian dim {}, cyclic dim {})",
            wspan.dim(),
            cyclic.dim
        )
    });

    Ok(SpanReport {
        level: l,
        precision: n,
        prime,
        wronskian_dim: wspan.dim(),
        cyclic_dim: cyclic.dim,
        cyclic_stabilized: cyclic.stabilized,
        n_max,
        b_span_dim_mod_junk: b_plus_j.dim() - junk.dim(),
        junk_dim: junk.dim(),
        bridge,
        verdict,
        caveat,
        witnesses: wspan
            .basis()
            .iter()
            .map(|b| b.to_dense(n).iter().map(format_rational).collect())
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eisenstein::default_precision;
    use crate::linalg::rat;

    fn setup(l: u64) -> (PresentedSpace, EisensteinFamily) {
        (
            PresentedSpace::build(l).unwrap(),
            EisensteinFamily::new(l, default_precision(l)).unwrap(),
        )
    }

    #[test]
    fn level_five_wronskian_span() {
        let (_, fam) = setup(5);
        let w = wronskian_span(&fam).unwrap();
        assert_eq!(w.dim(), 1);
        let b = w.basis()[0].to_dense(18);
        let expected = [0, 1, -4, 2, 8, -5];
        for (n, e) in expected.iter().enumerate() {
            assert_eq!(b[n], rat(*e, 1));
        }
        assert!(w.basis().iter().all(|v| v.get(0) == rat(0, 1)));
    }

    #[test]
    fn reduced_generators_suffice() {
        for l in 2..=13u64 {
            let fam = EisensteinFamily::new(l, default_precision(l)).unwrap();
            let full = wronskian_span(&fam).unwrap();
            assert!(full.equals(&wronskian_span_reduced(&fam).unwrap()).unwrap(), "l={l}");
        }
    }

    #[test]
    fn cyclic_level_five() {
        let (s, _) = setup(5);
        let r = cyclic_dim(&s, 20).unwrap();
        assert_eq!(r.dim, 1);
        assert!(r.stabilized);
        assert!(r.history.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn cyclic_bounded_by_minus_dim() {
        for l in [7u64, 8, 9] {
            let (s, _) = setup(l);
            let r = cyclic_dim(&s, 20).unwrap();
            assert!(r.dim <= s.plus_minus_subspaces().1.dim());
        }
    }

    #[test]
    fn theorem_level_five() {
        let (s, fam) = setup(5);
        let r = theorem_check(&s, &fam, 18).unwrap();
        assert_eq!(r.wronskian_dim, 1);
        assert_eq!(r.cyclic_dim, 1);
        assert_eq!(r.b_span_dim_mod_junk, 1);
        assert!(r.bridge);
        assert_eq!(r.verdict, Verdict::Match);
    }

    #[test]
    fn theorem_degenerate_level() {
        let (s, fam) = setup(2);
        let r = theorem_check(&s, &fam, 11).unwrap();
        assert_eq!(r.wronskian_dim, 0);
        assert_eq!(r.cyclic_dim, 0);
    }

    #[test]
    fn gamma0_level_five() {
        let (_, fam) = setup(5);
        let g = gamma0_span(&fam).unwrap();
        let w = wronskian_span(&fam).unwrap();
        assert!(w.contains_subspace(&g).unwrap());
        assert!(g.equals(&w).unwrap());
        for a in 0..5 {
            for b in 0..5 {
                for j in [2, 3, 4] {
                    assert_eq!(gamma0_generator(&fam, a, b), gamma0_generator(&fam, a * j, b * j));
                }
            }
        }
    }

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }
}
