//! Poincare duality on functionals, the Wronskian map on cuspidal symbols and
//! the Hecke-side series `B(phi)`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::eisenstein::EisensteinFamily;
use crate::error::{Error, Result};
use crate::heilbronn::hecke_on_e0;
use crate::linalg::{format_rational, kernel, rank, rat, Rational, SparseMatrix, SparseVec, Subspace};
use crate::modsym::{Monomial, PresentedSpace, Quadratic, SymbolVector};
use crate::qseries::QSeries;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub enum DualSpace {
    /// Functionals on `M_4(l)`, given on quotient coordinates.
    M4,
    /// Functionals on `S_4(l)_-`, given on its reduced basis.
    S4Minus,
}

impl DualSpace {
    fn name(self) -> &'static str {
        match self {
            DualSpace::M4 => "M4",
            DualSpace::S4Minus => "S4-",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualFunctional {
    pub level: u64,
    pub space: DualSpace,
    pub coords: Vec<Rational>,
}

impl DualFunctional {
    pub fn on_m4(space: &PresentedSpace, coords: Vec<Rational>) -> Result<Self> {
        check_len(space.dim(), coords.len())?;
        Ok(Self {
            level: space.level(),
            space: DualSpace::M4,
            coords,
        })
    }

    pub fn on_minus(space: &PresentedSpace, coords: Vec<Rational>) -> Result<Self> {
        check_len(space.plus_minus_subspaces().1.dim(), coords.len())?;
        Ok(Self {
            level: space.level(),
            space: DualSpace::S4Minus,
            coords,
        })
    }

    /// Dual basis of `M_4(l)^*`.
    pub fn m4_basis(space: &PresentedSpace) -> Vec<Self> {
        let n = space.dim();
        (0..n)
            .map(|i| Self::on_m4(space, unit_dense(n, i)).expect("length matches"))
            .collect()
    }

    /// Dual basis of `S_4(l)_-^*` relative to the reduced basis of `S_4(l)_-`.
    pub fn minus_basis(space: &PresentedSpace) -> Vec<Self> {
        let n = space.plus_minus_subspaces().1.dim();
        (0..n)
            .map(|i| Self::on_minus(space, unit_dense(n, i)).expect("length matches"))
            .collect()
    }

    pub fn cusp_functional(space: &PresentedSpace, index: usize) -> Self {
        Self::on_m4(space, space.cusp_functional(index).to_vec()).expect("length matches")
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// Value on a vector given in the coordinates of the tagged space.
    pub fn eval(&self, x: &SparseVec) -> Rational {
        x.dot_dense(&self.coords)
    }

    fn expect_space(&self, space: &PresentedSpace, expected: DualSpace) -> Result<()> {
        if self.level != space.level() {
            return Err(Error::LevelMismatch {
                left: space.level(),
                right: self.level,
            });
        }
        if self.space != expected {
            return Err(Error::WrongDualSpace {
                expected: expected.name(),
                found: self.space.name(),
            });
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "level": self.level,
            "space": self.space.name(),
            "coords": self.coords.iter().map(format_rational).collect::<Vec<_>>(),
        })
    }
}

fn unit_dense(n: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[i] = Rational::one();
    v
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

// Templates for the arguments of phi: (y-x)^2, (y+x)^2, y(y-x), (-y)(y+x), y^2.
const Y_MINUS_X_SQ: Quadratic = Quadratic::new(1, -2, 1);
const Y_PLUS_X_SQ: Quadratic = Quadratic::new(1, 2, 1);
const Y_TIMES_Y_MINUS_X: Quadratic = Quadratic::new(0, -1, 1);
const MINUS_Y_TIMES_Y_PLUS_X: Quadratic = Quadratic::new(0, -1, -1);
const Y_SQ: Quadratic = Quadratic::new(0, 0, 1);

/// `PD(phi)` for a functional on `M_4(l)`.
pub fn pd(space: &PresentedSpace, phi: &DualFunctional) -> Result<SymbolVector> {
    phi.expect_space(space, DualSpace::M4)?;
    Ok(pd_raw(space, &phi.coords))
}

fn pd_raw(space: &PresentedSpace, phi: &[Rational]) -> SymbolVector {
    let l = space.level();
    let li = l as i64;
    let mut out = SymbolVector::new(l);
    let w = rat(1, 24);
    let ev = |p, u, v| space.eval_quadratic(phi, p, u, v);
    for u in 0..li {
        for v in 0..li {
            if !crate::modsym::admissible(u, v, l) {
                continue;
            }
            let x2 = ev(Y_MINUS_X_SQ, -v, u + v) - ev(Y_PLUS_X_SQ, v, v - u);
            let xy = ev(Y_TIMES_Y_MINUS_X, -v, u + v) - ev(MINUS_Y_TIMES_Y_PLUS_X, v, v - u);
            let y2 = ev(Y_SQ, -v, u + v) - ev(Y_SQ, v, v - u);
            out.add_term(Monomial::X2, u, v, &w * x2);
            out.add_term(Monomial::XY, u, v, &w * xy * rat(-2, 1));
            out.add_term(Monomial::Y2, u, v, &w * y2);
        }
    }
    out
}

/// `PD(phi)` in quotient coordinates.
pub fn pd_coords(space: &PresentedSpace, phi: &DualFunctional) -> Result<SparseVec> {
    space.coords(&pd(space, phi)?)
}

/// `lambda(PD(phi))`.
pub fn pd_pairing(space: &PresentedSpace, phi: &DualFunctional, lambda: &DualFunctional) -> Result<Rational> {
    if phi.level != lambda.level {
        return Err(Error::LevelMismatch {
            left: phi.level,
            right: lambda.level,
        });
    }
    lambda.expect_space(space, DualSpace::M4)?;
    Ok(lambda.eval(&pd_coords(space, phi)?))
}

/// `(f - f o i)/2` for a functional on `M_4(l)`.
pub fn antisymmetrize(space: &PresentedSpace, f: &[Rational]) -> Vec<Rational> {
    let fi = space.involution_pullback(f);
    let half = rat(1, 2);
    f.iter().zip(fi).map(|(a, b)| (a - b) * &half).collect()
}

/// `(f + f o i)/2` for a functional on `M_4(l)`.
pub fn symmetrize_functional(space: &PresentedSpace, f: &[Rational]) -> Vec<Rational> {
    let fi = space.involution_pullback(f);
    let half = rat(1, 2);
    f.iter().zip(fi).map(|(a, b)| (a + b) * &half).collect()
}

/// Extension of a functional on `S_4(l)_-` to `M_4(l)`: the value at the pivot
/// coordinates of the reduced `S_4(l)_-` basis, zero elsewhere.
pub fn extend_by_zero(space: &PresentedSpace, phi: &DualFunctional) -> Result<Vec<Rational>> {
    phi.expect_space(space, DualSpace::S4Minus)?;
    let (_, minus) = space.plus_minus_subspaces();
    let mut f = vec![Rational::zero(); space.dim()];
    for (&p, c) in minus.pivots().iter().zip(&phi.coords) {
        f[p] = c.clone();
    }
    Ok(f)
}

/// `PD` applied to the antisymmetrized extension of `phi`, in `M_4(l)` coordinates.
pub fn pd_of_minus(space: &PresentedSpace, phi: &DualFunctional) -> Result<SparseVec> {
    let f = extend_by_zero(space, phi)?;
    pd_of_extension(space, &f)
}

/// `PD((f - f o i)/2)` for an arbitrary extension `f` on `M_4(l)`.
pub fn pd_of_extension(space: &PresentedSpace, f: &[Rational]) -> Result<SparseVec> {
    check_len(space.dim(), f.len())?;
    space.coords(&pd_raw(space, &antisymmetrize(space, f)))
}

/// Matrix of the induced map `S_4(l)_-^* -> S_4(l)_+`; row `i` holds the
/// `S_4(l)_+` coordinates of the image of the `i`-th dual basis vector.
pub fn pd_minus_to_plus(space: &PresentedSpace) -> Result<SparseMatrix> {
    let (plus, _) = space.plus_minus_subspaces();
    let rows = DualFunctional::minus_basis(space)
        .iter()
        .map(|phi| {
            let img = pd_of_minus(space, phi)?;
            Ok(SparseVec::from_dense(&plus.membership(&img)?))
        })
        .collect::<Result<Vec<_>>>()?;
    SparseMatrix::from_rows(plus.dim(), rows)
}

/// `sum c_{u,v} W(s_u, s_v)` for a cuspidal class, via its `xy` reduction.
pub fn mu_cuspidal(space: &PresentedSpace, fam: &EisensteinFamily, coords: &SparseVec) -> Result<QSeries> {
    if space.level() != fam.level() {
        return Err(Error::LevelMismatch {
            left: space.level(),
            right: fam.level(),
        });
    }
    Ok(mu_from_pairs(fam, &space.xy_reduce(coords)?))
}

/// `xy(u,v) -> W(s_u, s_v)` applied termwise to a formal `xy` combination, with
/// no reduction in `M_4(l)`.
pub fn mu_xy_direct(fam: &EisensteinFamily, w: &SymbolVector) -> Result<QSeries> {
    if w.level() != fam.level() {
        return Err(Error::LevelMismatch {
            left: w.level(),
            right: fam.level(),
        });
    }
    let mut pairs = BTreeMap::new();
    for (k, c) in w.terms() {
        if k.monomial != Monomial::XY {
            return Err(Error::NotXyCombination);
        }
        pairs.insert((k.u, k.v), c.clone());
    }
    Ok(mu_from_pairs(fam, &pairs))
}

fn mu_from_pairs(fam: &EisensteinFamily, pairs: &BTreeMap<(u64, u64), Rational>) -> QSeries {
    let mut acc = vec![Rational::zero(); fam.precision()];
    for ((u, v), c) in pairs {
        let w = fam.wronskian(*u as i64, *v as i64);
        for (a, x) in acc.iter_mut().zip(w.coeffs()) {
            if !x.is_zero() {
                *a += c * x;
            }
        }
    }
    QSeries::from_coeffs(acc)
}

/// `S_4(l)_-` coordinates of `hecke_on_e0(n, l)` for `1 <= n < precision`;
/// entry `0` is unused and empty.
pub fn hecke_table(space: &PresentedSpace, precision: usize) -> Result<Vec<Vec<Rational>>> {
    let (_, minus) = space.plus_minus_subspaces();
    let mut out = vec![Vec::new()];
    for n in 1..precision {
        let w = hecke_on_e0(n as i64, space.level());
        out.push(minus.membership(&space.coords(&w)?)?);
    }
    Ok(out)
}

/// `sum_{n >= 1} phi(hecke_on_e0(n)) q^n`.
pub fn composition_b(space: &PresentedSpace, phi: &DualFunctional, precision: usize) -> Result<QSeries> {
    let table = hecke_table(space, precision)?;
    composition_b_from_table(space, phi, &table)
}

pub fn composition_b_from_table(
    space: &PresentedSpace,
    phi: &DualFunctional,
    table: &[Vec<Rational>],
) -> Result<QSeries> {
    phi.expect_space(space, DualSpace::S4Minus)?;
    let mut coeffs = vec![Rational::zero(); table.len()];
    for (n, row) in table.iter().enumerate().skip(1) {
        coeffs[n] = row
            .iter()
            .zip(&phi.coords)
            .map(|(a, b)| a * b)
            .fold(Rational::zero(), |s, t| s + t);
    }
    Ok(QSeries::from_coeffs(coeffs))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositionResult {
    pub passed: bool,
    pub mu_pd: QSeries,
    pub b: QSeries,
    /// `mu(PD(phi)) - B(phi)` reduced modulo the junk space; zero on success.
    pub residual: SparseVec,
}

/// Tests `mu(PD(phi)) - B(phi)` for membership in `junk`.
pub fn composition_check(
    space: &PresentedSpace,
    fam: &EisensteinFamily,
    junk: &Subspace,
    table: &[Vec<Rational>],
    phi: &DualFunctional,
) -> Result<CompositionResult> {
    let image = pd_of_minus(space, phi)?;
    let mu_pd = mu_cuspidal(space, fam, &image)?;
    let b = composition_b_from_table(space, phi, table)?;
    let diff = mu_pd.checked_sub(&b)?;
    let residual = junk.residual(&diff.to_sparse())?;
    Ok(CompositionResult {
        passed: residual.is_zero(),
        mu_pd,
        b,
        residual,
    })
}

/// Outcome of the exact duality checks at one level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PdReport {
    pub level: u64,
    pub antisymmetry: bool,
    pub cusp_vanishing: bool,
    pub cusp_functionals_killed: bool,
    pub extension_independence: bool,
    pub parity: bool,
    pub induced_rank: usize,
    pub dim_minus: usize,
    pub dim_plus: usize,
    /// `(i, j)` pairs of dual basis indices where antisymmetry failed.
    pub failures: Vec<String>,
}

impl PdReport {
    pub fn passed(&self) -> bool {
        self.antisymmetry
            && self.cusp_vanishing
            && self.cusp_functionals_killed
            && self.extension_independence
            && self.parity
            && self.induced_rank == self.dim_minus
            && self.dim_minus == self.dim_plus
    }
}

pub fn pd_suite(space: &PresentedSpace) -> Result<PdReport> {
    let dim = space.dim();
    let (plus, minus) = space.plus_minus_subspaces();
    let mut failures = Vec::new();

    // Full matrix P[i] = PD(e_i^*) in coordinates; lambda_j(PD(phi_i)) = P[i][j].
    let basis = DualFunctional::m4_basis(space);
    let images: Vec<SparseVec> = basis.iter().map(|phi| pd_coords(space, phi)).collect::<Result<_>>()?;
    let mut antisymmetry = true;
    for i in 0..dim {
        for j in i..dim {
            if images[i].get(j) + images[j].get(i) != Rational::zero() {
                antisymmetry = false;
                failures.push(format!("antisymmetry({i},{j})"));
            }
        }
    }

    let cuspidal = space.cuspidal_subspace();
    let mut cusp_vanishing = true;
    for (i, img) in images.iter().enumerate() {
        if !cuspidal.contains(img)? {
            cusp_vanishing = false;
            failures.push(format!("cusp_eval(PD(e{i}))"));
        }
    }

    let mut cusp_functionals_killed = true;
    for c in 0..space.cusps().len() {
        let psi = DualFunctional::cusp_functional(space, c);
        if !pd_coords(space, &psi)?.is_zero() {
            cusp_functionals_killed = false;
            failures.push(format!("PD(cusp {})", space.cusps()[c]));
        }
    }

    // Perturb each extension by every basis vector of the annihilator of S_4(l)_-.
    let annihilator = kernel(&minus.basis_matrix());
    let mut extension_independence = true;
    for (i, phi) in DualFunctional::minus_basis(space).iter().enumerate() {
        let f = extend_by_zero(space, phi)?;
        let base = pd_of_extension(space, &f)?;
        for (k, g) in annihilator.basis().iter().enumerate() {
            let f2: Vec<Rational> = f.iter().zip(g.to_dense(dim)).map(|(a, b)| a + b).collect();
            if pd_of_extension(space, &f2)? != base {
                extension_independence = false;
                failures.push(format!("extension({i},{k})"));
            }
        }
    }

    let mut parity = true;
    for (i, phi) in basis.iter().enumerate() {
        let fp = symmetrize_functional(space, &phi.coords);
        let fm = antisymmetrize(space, &phi.coords);
        let ip = space.coords(&pd_raw(space, &fp))?;
        let im = space.coords(&pd_raw(space, &fm))?;
        if !minus.contains(&ip)? || !plus.contains(&im)? {
            parity = false;
            failures.push(format!("parity(e{i})"));
        }
    }

    let induced_rank = rank(&pd_minus_to_plus(space)?);
    Ok(PdReport {
        level: space.level(),
        antisymmetry,
        cusp_vanishing,
        cusp_functionals_killed,
        extension_independence,
        parity,
        induced_rank,
        dim_minus: minus.dim(),
        dim_plus: plus.dim(),
        failures,
    })
}
