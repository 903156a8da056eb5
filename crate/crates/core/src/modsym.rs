//! Weight-four modular symbols for `Gamma_1(l)` in the Manin presentation.
//!
//! Generators are `x^2(u,v)`, `xy(u,v)`, `y^2(u,v)` for `(u,v) in (Z/l)^2` with
//! `gcd(u,v,l) = 1`. The quotient is taken by, for every such `(u,v)`:
//!
//! ```text
//! x^2(u,v) + y^2(v,-u)        xy(u,v) - xy(v,-u)        y^2(u,v) + x^2(v,-u)
//! xy(v,-u-v) - xy(-u-v,u) + y^2(-u-v,u) + x^2(u,v) - xy(u,v)
//! ```
//!
//! Quotient coordinates use the non-pivot generator columns of the reduced
//! relation matrix as basis. Columns are ordered `y^2` block, `x^2` block, `xy`
//! block so that pivots land on `y^2` and `x^2` generators first.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use num_integer::Integer;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::eisenstein::residue;
use crate::error::{Error, Result};
use crate::linalg::{
    format_rational, kernel, parse_rational, rat, EchelonSolver, Rational, SparseMatrix, SparseVec,
    Subspace,
};

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Monomial {
    X2,
    XY,
    Y2,
}

impl Monomial {
    pub const ALL: [Monomial; 3] = [Monomial::X2, Monomial::XY, Monomial::Y2];

    pub fn as_str(self) -> &'static str {
        match self {
            Monomial::X2 => "x2",
            Monomial::XY => "xy",
            Monomial::Y2 => "y2",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "x2" => Some(Monomial::X2),
            "xy" => Some(Monomial::XY),
            "y2" => Some(Monomial::Y2),
            _ => None,
        }
    }

    fn block(self) -> usize {
        match self {
            Monomial::Y2 => 0,
            Monomial::X2 => 1,
            Monomial::XY => 2,
        }
    }
}

/// A binary quadratic form `x2*x^2 + xy*xy + y2*y^2` with integer coefficients.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Default)]
pub struct Quadratic {
    pub x2: i64,
    pub xy: i64,
    pub y2: i64,
}

impl Quadratic {
    pub const fn new(x2: i64, xy: i64, y2: i64) -> Self {
        Self { x2, xy, y2 }
    }

    /// `(a x + b y)(c x + d y)`.
    pub fn product(a: i64, b: i64, c: i64, d: i64) -> Self {
        Self::new(a * c, a * d + b * c, b * d)
    }

    pub fn terms(self) -> [(Monomial, i64); 3] {
        [(Monomial::X2, self.x2), (Monomial::XY, self.xy), (Monomial::Y2, self.y2)]
    }
}

pub fn admissible(u: i64, v: i64, l: u64) -> bool {
    let l = l as i64;
    u.gcd(&v).gcd(&l) == 1
}

/// Generator `P(u,v)` with `u, v` reduced into `[0, l)`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SymbolKey {
    pub monomial: Monomial,
    pub u: u64,
    pub v: u64,
}

impl fmt::Display for SymbolKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({},{})", self.monomial.as_str(), self.u, self.v)
    }
}

/// Finite rational combination of generators at a fixed level.
///
/// Terms with `gcd(u,v,l) > 1` are dropped on insertion: such symbols are
/// treated as zero throughout.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolVector {
    level: u64,
    terms: BTreeMap<SymbolKey, Rational>,
}

impl SymbolVector {
    pub fn new(level: u64) -> Self {
        Self {
            level,
            terms: BTreeMap::new(),
        }
    }

    pub fn generator(level: u64, monomial: Monomial, u: i64, v: i64) -> Self {
        let mut w = Self::new(level);
        w.add_term(monomial, u, v, Rational::one());
        w
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn terms(&self) -> &BTreeMap<SymbolKey, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, monomial: Monomial, u: i64, v: i64, c: Rational) {
        if c.is_zero() || !admissible(u, v, self.level) {
            return;
        }
        let key = SymbolKey {
            monomial,
            u: residue(u, self.level),
            v: residue(v, self.level),
        };
        self.add_key(key, c);
    }

    fn add_key(&mut self, key: SymbolKey, c: Rational) {
        let entry = self.terms.entry(key).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// Adds `c * P(u,v)` for a quadratic form `P`.
    pub fn add_quadratic(&mut self, p: Quadratic, u: i64, v: i64, c: &Rational) {
        for (m, k) in p.terms() {
            if k != 0 {
                self.add_term(m, u, v, c * rat(k, 1));
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::new(self.level);
        }
        Self {
            level: self.level,
            terms: self.terms.iter().map(|(k, x)| (*k, x * c)).collect(),
        }
    }

    pub fn add_scaled(&self, c: &Rational, other: &SymbolVector) -> Result<Self> {
        check_level(self.level, other.level)?;
        let mut out = self.clone();
        for (k, x) in &other.terms {
            out.add_key(*k, x * c);
        }
        Ok(out)
    }

    pub fn add(&self, other: &SymbolVector) -> Result<Self> {
        self.add_scaled(&Rational::one(), other)
    }

    pub fn sub(&self, other: &SymbolVector) -> Result<Self> {
        self.add_scaled(&-Rational::one(), other)
    }

    /// `x^2(u,v) -> x^2(-u,v)`, `xy(u,v) -> -xy(-u,v)`, `y^2(u,v) -> y^2(-u,v)`.
    pub fn involution(&self) -> Self {
        let mut out = Self::new(self.level);
        for (k, x) in &self.terms {
            let c = if k.monomial == Monomial::XY { -x } else { x.clone() };
            out.add_term(k.monomial, -(k.u as i64), k.v as i64, c);
        }
        out
    }

    /// `(w + i(w))/2` for `plus`, `(w - i(w))/2` otherwise.
    pub fn symmetrize(&self, plus: bool) -> Self {
        let sign = if plus { Rational::one() } else { -Rational::one() };
        self.add_scaled(&sign, &self.involution())
            .expect("same level")
            .scale(&rat(1, 2))
    }

    /// `[["x2"|"xy"|"y2", u, v, "num/den"], ...]`
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(k, x)| json!([k.monomial.as_str(), k.u, k.v, format_rational(x)]))
                .collect(),
        )
    }

    pub fn from_json(level: u64, value: &Value) -> Result<Self> {
        let bad = || Error::ParseRational(value.to_string());
        let mut out = Self::new(level);
        for t in value.as_array().ok_or_else(bad)? {
            let t = t.as_array().ok_or_else(bad)?;
            if t.len() != 4 {
                return Err(bad());
            }
            let m = Monomial::parse(t[0].as_str().ok_or_else(bad)?).ok_or_else(bad)?;
            let u = t[1].as_i64().ok_or_else(bad)?;
            let v = t[2].as_i64().ok_or_else(bad)?;
            let c = parse_rational(t[3].as_str().ok_or_else(bad)?)?;
            out.add_term(m, u, v, c);
        }
        Ok(out)
    }
}

fn check_level(left: u64, right: u64) -> Result<()> {
    if left != right {
        return Err(Error::LevelMismatch { left, right });
    }
    Ok(())
}

/// Cusp `(a, b)` with `a mod l`, `b` a unit mod `gcd(a, l)`, identified with `(-a, -b)`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CuspClass {
    pub level: u64,
    pub a: u64,
    pub b: u64,
}

impl CuspClass {
    /// Canonical class of `(a, b)`: the lexicographically smaller of `(a,b)`, `(-a,-b)`.
    pub fn new(level: u64, a: i64, b: i64) -> Self {
        let ra = residue(a, level);
        let g = cusp_modulus(ra, level);
        let rb = residue(b, g);
        let na = residue(-a, level);
        let nb = residue(-b, g);
        let (a, b) = if (ra, rb) <= (na, nb) { (ra, rb) } else { (na, nb) };
        Self { level, a, b }
    }

    /// `gcd(a, l)`, with `gcd(0, l) = l`.
    pub fn modulus(&self) -> u64 {
        cusp_modulus(self.a, self.level)
    }
}

fn cusp_modulus(a: u64, l: u64) -> u64 {
    a.gcd(&l)
}

impl fmt::Display for CuspClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

/// All cusp classes of `X_1(l)`, in lexicographic order of canonical representatives.
pub fn cusps(l: u64) -> Result<Vec<CuspClass>> {
    if l < 2 {
        return Err(Error::LevelTooSmall(l));
    }
    let mut out = Vec::new();
    for a in 0..l {
        let g = cusp_modulus(a, l);
        for b in 0..g {
            if b.gcd(&g) != 1 {
                continue;
            }
            let c = CuspClass::new(l, a as i64, b as i64);
            if c.a == a && c.b == b {
                out.push(c);
            }
        }
    }
    Ok(out)
}

fn cusp_value_on_key(c: &CuspClass, key: &SymbolKey) -> i64 {
    let l = c.level;
    let g = c.modulus();
    let a = c.a as i64;
    let b = c.b as i64;
    let eq_l = |x: u64, y: i64| x == residue(y, l);
    let eq_g = |x: u64, y: i64| residue(x as i64, g) == residue(y, g);
    match key.monomial {
        Monomial::X2 => {
            i64::from(eq_l(key.u, a) && eq_g(key.v, b)) + i64::from(eq_l(key.u, -a) && eq_g(key.v, -b))
        }
        Monomial::Y2 => {
            -i64::from(eq_l(key.v, a) && eq_g(key.u, -b)) - i64::from(eq_l(key.v, -a) && eq_g(key.u, b))
        }
        Monomial::XY => 0,
    }
}

/// Evaluation of a symbol at a cusp.
pub fn cusp_eval(c: &CuspClass, w: &SymbolVector) -> Result<Rational> {
    check_level(c.level, w.level)?;
    Ok(w.terms
        .iter()
        .map(|(k, x)| x * rat(cusp_value_on_key(c, k), 1))
        .fold(Rational::zero(), |acc, t| acc + t))
}

/// `sum_{k=0}^{l-1} (xy(v+ku, -(k+1)u-v) - xy(-(k+1)u-v, u) - xy(u, v+ku))`.
pub fn extra_relation(u: i64, v: i64, l: u64) -> SymbolVector {
    let mut w = SymbolVector::new(l);
    let one = Rational::one();
    for k in 0..l as i64 {
        w.add_term(Monomial::XY, v + k * u, -(k + 1) * u - v, one.clone());
        w.add_term(Monomial::XY, -(k + 1) * u - v, u, -one.clone());
        w.add_term(Monomial::XY, u, v + k * u, -one.clone());
    }
    w
}

/// The presented space `M_4(l)` together with lazily derived cuspidal data.
#[derive(Debug)]
pub struct PresentedSpace {
    level: u64,
    pairs: Vec<(u64, u64)>,
    pair_index: Vec<Option<usize>>,
    relations: SparseMatrix,
    relation_space: Subspace,
    free_cols: Vec<usize>,
    generator_coords: Vec<SparseVec>,
    derived: OnceLock<Derived>,
}

#[derive(Debug)]
struct Derived {
    cusps: Vec<CuspClass>,
    cusp_functionals: Vec<Vec<Rational>>,
    involution_images: Vec<SparseVec>,
    cuspidal: Subspace,
    plus: Subspace,
    minus: Subspace,
    xy_keys: Vec<(u64, u64)>,
    xy_solver: EchelonSolver,
}

impl PresentedSpace {
    pub fn build(l: u64) -> Result<Self> {
        if l < 2 {
            return Err(Error::LevelTooSmall(l));
        }
        let mut pairs = Vec::new();
        let mut pair_index = vec![None; (l * l) as usize];
        for u in 0..l {
            for v in 0..l {
                if admissible(u as i64, v as i64, l) {
                    pair_index[(u * l + v) as usize] = Some(pairs.len());
                    pairs.push((u, v));
                }
            }
        }
        let n = pairs.len();
        let column = |m: Monomial, u: i64, v: i64| -> usize {
            let idx = pair_index[(residue(u, l) * l + residue(v, l)) as usize]
                .expect("relations preserve admissibility");
            m.block() * n + idx
        };

        let mut rows = Vec::with_capacity(4 * n);
        for &(u, v) in &pairs {
            let (u, v) = (u as i64, v as i64);
            let w = -u - v;
            let one = || Rational::one();
            let neg = || -Rational::one();
            let rels = [
                vec![(column(Monomial::X2, u, v), one()), (column(Monomial::Y2, v, -u), one())],
                vec![(column(Monomial::XY, u, v), one()), (column(Monomial::XY, v, -u), neg())],
                vec![(column(Monomial::Y2, u, v), one()), (column(Monomial::X2, v, -u), one())],
                vec![
                    (column(Monomial::XY, v, w), one()),
                    (column(Monomial::XY, w, u), neg()),
                    (column(Monomial::Y2, w, u), one()),
                    (column(Monomial::X2, u, v), one()),
                    (column(Monomial::XY, u, v), neg()),
                ],
            ];
            for r in rels {
                let r = SparseVec::from_entries(r);
                if !r.is_zero() {
                    rows.push(r);
                }
            }
        }
        let cols = 3 * n;
        let relations = SparseMatrix::from_rows(cols, rows)?;
        let relation_space = Subspace::span(cols, relations.row_vecs())?;

        let mut is_pivot = vec![false; cols];
        for &p in relation_space.pivots() {
            is_pivot[p] = true;
        }
        let free_cols: Vec<usize> = (0..cols).filter(|&c| !is_pivot[c]).collect();
        let mut free_pos = vec![usize::MAX; cols];
        for (i, &c) in free_cols.iter().enumerate() {
            free_pos[c] = i;
        }
        let mut generator_coords = vec![SparseVec::new(); cols];
        for &c in &free_cols {
            generator_coords[c] = SparseVec::unit(free_pos[c]);
        }
        for (row, &p) in relation_space.basis().iter().zip(relation_space.pivots()) {
            generator_coords[p] = SparseVec::from_entries(
                row.entries()
                    .iter()
                    .filter(|(c, _)| *c != p)
                    .map(|(c, x)| (free_pos[*c], -x.clone())),
            );
        }

        Ok(Self {
            level: l,
            pairs,
            pair_index,
            relations,
            relation_space,
            free_cols,
            generator_coords,
            derived: OnceLock::new(),
        })
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    /// `dim M_4(l)`.
    pub fn dim(&self) -> usize {
        self.free_cols.len()
    }

    pub fn generator_count(&self) -> usize {
        3 * self.pairs.len()
    }

    pub fn pairs(&self) -> &[(u64, u64)] {
        &self.pairs
    }

    pub fn relations(&self) -> &SparseMatrix {
        &self.relations
    }

    /// Row space of the relations inside the free module on generators.
    pub fn relation_space(&self) -> &Subspace {
        &self.relation_space
    }

    pub fn column(&self, key: &SymbolKey) -> Option<usize> {
        let idx = self.pair_index[(key.u * self.level + key.v) as usize]?;
        Some(key.monomial.block() * self.pairs.len() + idx)
    }

    pub fn key_of(&self, col: usize) -> SymbolKey {
        let n = self.pairs.len();
        let monomial = match col / n {
            0 => Monomial::Y2,
            1 => Monomial::X2,
            _ => Monomial::XY,
        };
        let (u, v) = self.pairs[col % n];
        SymbolKey { monomial, u, v }
    }

    /// The generators whose classes form the coordinate basis of the quotient.
    pub fn basis_keys(&self) -> Vec<SymbolKey> {
        self.free_cols.iter().map(|&c| self.key_of(c)).collect()
    }

    /// `w` as a vector in the free module (before quotienting).
    pub fn free_vector(&self, w: &SymbolVector) -> Result<SparseVec> {
        check_level(self.level, w.level)?;
        Ok(SparseVec::from_entries(w.terms.iter().map(|(k, x)| {
            (self.column(k).expect("stored keys are admissible"), x.clone())
        })))
    }

    pub fn key_coords(&self, key: &SymbolKey) -> &SparseVec {
        &self.generator_coords[self.column(key).expect("stored keys are admissible")]
    }

    /// Quotient coordinates of `w`.
    pub fn coords(&self, w: &SymbolVector) -> Result<SparseVec> {
        check_level(self.level, w.level)?;
        Ok(w.terms.iter().fold(SparseVec::new(), |acc, (k, x)| {
            acc.add_scaled(x, self.key_coords(k))
        }))
    }

    /// A symbol representing the coordinate vector, built on basis generators.
    pub fn symbol_of(&self, coords: &SparseVec) -> SymbolVector {
        let mut w = SymbolVector::new(self.level);
        for (i, x) in coords.entries() {
            w.add_key(self.key_of(self.free_cols[*i]), x.clone());
        }
        w
    }

    /// `phi(P(u,v))` for a functional given on quotient coordinates; zero when
    /// `gcd(u,v,l) > 1`.
    pub fn eval_quadratic(&self, phi: &[Rational], p: Quadratic, u: i64, v: i64) -> Rational {
        if !admissible(u, v, self.level) {
            return Rational::zero();
        }
        let (u, v) = (residue(u, self.level), residue(v, self.level));
        let mut acc = Rational::zero();
        for (m, k) in p.terms() {
            if k != 0 {
                let key = SymbolKey { monomial: m, u, v };
                acc += self.key_coords(&key).dot_dense(phi) * rat(k, 1);
            }
        }
        acc
    }

    fn derived(&self) -> &Derived {
        self.derived.get_or_init(|| self.derive())
    }

    fn derive(&self) -> Derived {
        let l = self.level;
        let dim = self.dim();
        let cusps = cusps(l).expect("level checked at build");
        let cusp_functionals: Vec<Vec<Rational>> = cusps
            .iter()
            .map(|c| {
                self.free_cols
                    .iter()
                    .map(|&col| rat(cusp_value_on_key(c, &self.key_of(col)), 1))
                    .collect()
            })
            .collect();
        let involution_images: Vec<SparseVec> = self
            .free_cols
            .iter()
            .map(|&col| {
                let g = self.key_of(col);
                let w = SymbolVector::generator(l, g.monomial, g.u as i64, g.v as i64);
                self.coords(&w.involution()).expect("same level")
            })
            .collect();

        let cusp_rows: Vec<SparseVec> = cusp_functionals.iter().map(|f| SparseVec::from_dense(f)).collect();
        let cuspidal = kernel(&SparseMatrix::from_rows(dim, cusp_rows.clone()).expect("dims agree"));

        // Rows of (M - sign*I), where column j of M is the image of basis vector j.
        let inv_t = SparseMatrix::from_rows(dim, involution_images.clone())
            .expect("dims agree")
            .transpose();
        let eigen = |sign: i64| {
            let mut rows = cusp_rows.clone();
            for (r, row) in inv_t.row_vecs().iter().enumerate() {
                rows.push(row.add_scaled(&rat(-sign, 1), &SparseVec::unit(r)));
            }
            kernel(&SparseMatrix::from_rows(dim, rows).expect("dims agree"))
        };
        let plus = eigen(1);
        let minus = eigen(-1);

        let mut xy_keys = Vec::with_capacity(self.pairs.len());
        let mut xy_solver = EchelonSolver::new();
        for &(u, v) in &self.pairs {
            let key = SymbolKey {
                monomial: Monomial::XY,
                u,
                v,
            };
            xy_solver.insert(self.key_coords(&key));
            xy_keys.push((u, v));
        }

        Derived {
            cusps,
            cusp_functionals,
            involution_images,
            cuspidal,
            plus,
            minus,
            xy_keys,
            xy_solver,
        }
    }

    pub fn cusps(&self) -> &[CuspClass] {
        &self.derived().cusps
    }

    /// The cusp evaluation as a row vector on quotient coordinates.
    pub fn cusp_functional(&self, index: usize) -> &[Rational] {
        &self.derived().cusp_functionals[index]
    }

    /// `S_4(l)`: common kernel of all cusp evaluations.
    pub fn cuspidal_subspace(&self) -> &Subspace {
        &self.derived().cuspidal
    }

    /// `(S_4(l)_+, S_4(l)_-)`.
    pub fn plus_minus_subspaces(&self) -> (&Subspace, &Subspace) {
        let d = self.derived();
        (&d.plus, &d.minus)
    }

    /// The induced involution on quotient coordinates.
    pub fn involution_coords(&self, x: &SparseVec) -> SparseVec {
        let images = &self.derived().involution_images;
        x.entries()
            .iter()
            .fold(SparseVec::new(), |acc, (j, c)| acc.add_scaled(c, &images[*j]))
    }

    /// `f o i` for a functional `f` on quotient coordinates.
    pub fn involution_pullback(&self, f: &[Rational]) -> Vec<Rational> {
        self.derived()
            .involution_images
            .iter()
            .map(|img| img.dot_dense(f))
            .collect()
    }

    /// Writes a cuspidal class as a combination of `xy(u,v)` generators.
    pub fn xy_reduce(&self, coords: &SparseVec) -> Result<BTreeMap<(u64, u64), Rational>> {
        let d = self.derived();
        if !d.cuspidal.contains(coords)? {
            return Err(Error::NotCuspidal);
        }
        let combo = d
            .xy_solver
            .solve(coords)
            .expect("cuspidal symbols are spanned by xy generators");
        Ok(combo
            .entries()
            .iter()
            .map(|(k, x)| (d.xy_keys[*k], x.clone()))
            .collect())
    }

    pub fn xy_reduce_symbol(&self, w: &SymbolVector) -> Result<BTreeMap<(u64, u64), Rational>> {
        self.xy_reduce(&self.coords(w)?)
    }

    /// Span of the classes of all `xy(u,v)`.
    pub fn xy_span(&self) -> Subspace {
        let vectors: Vec<SparseVec> = self
            .pairs
            .iter()
            .map(|&(u, v)| {
                self.key_coords(&SymbolKey {
                    monomial: Monomial::XY,
                    u,
                    v,
                })
                .clone()
            })
            .collect();
        Subspace::span(self.dim(), &vectors).expect("coordinates fit")
    }
}

/// Dimension summary reported by `modsym dims`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Dimensions {
    pub level: u64,
    #[serde(rename = "dimM4")]
    pub dim_m4: usize,
    #[serde(rename = "dimS4")]
    pub dim_s4: usize,
    #[serde(rename = "dimS4plus")]
    pub dim_s4_plus: usize,
    #[serde(rename = "dimS4minus")]
    pub dim_s4_minus: usize,
    pub cusps: usize,
}

impl PresentedSpace {
    pub fn dimensions(&self) -> Dimensions {
        let (plus, minus) = self.plus_minus_subspaces();
        Dimensions {
            level: self.level,
            dim_m4: self.dim(),
            dim_s4: self.cuspidal_subspace().dim(),
            dim_s4_plus: plus.dim(),
            dim_s4_minus: minus.dim(),
            cusps: self.cusps().len(),
        }
    }
}
