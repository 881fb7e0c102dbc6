//! Dominant regions of the `k`-Catalan arrangement, built from geometric
//! chains, with their walls, floors, ceilings and boundedness.
//!
//! Points are written in the basis dual to the simple roots, so `<x, α>` is
//! `c(α)·t` with `c(α)` the coefficient vector of `α` and every hyperplane
//! `H_{α,i}` reads `c(α)·t = i`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{invariant, Error, Result};
use crate::nonnesting::{self, FilterChain};
use crate::poly::UniPoly;
use crate::rootsys::RootSystem;

/// `a·t > b` (strict) or `a·t >= b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Inequality {
    pub a: Vec<BigInt>,
    pub b: BigRational,
    pub strict: bool,
}

impl Inequality {
    pub fn new(a: Vec<i64>, b: i64, strict: bool) -> Self {
        Inequality {
            a: a.into_iter().map(BigInt::from).collect(),
            b: BigRational::from_integer(b.into()),
            strict,
        }
    }

    fn negated_closed(&self) -> Self {
        Inequality {
            a: self.a.iter().map(|x| -x).collect(),
            b: -&self.b,
            strict: false,
        }
    }

    fn closed(&self) -> Self {
        Inequality {
            strict: false,
            ..self.clone()
        }
    }

    /// Divides through by the gcd of `a`, leaving a primitive direction.
    fn normalised(mut self) -> Self {
        let g = self.a.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        if !g.is_zero() && !g.is_one() {
            self.a.iter_mut().for_each(|x| *x /= &g);
            self.b /= BigRational::from_integer(g);
        }
        self
    }
}

/// Keeps the strongest inequality per primitive direction.
fn prune(ineqs: impl IntoIterator<Item = Inequality>) -> Option<Vec<Inequality>> {
    let mut best: HashMap<Vec<BigInt>, (BigRational, bool)> = HashMap::new();
    for q in ineqs {
        let q = q.normalised();
        if q.a.iter().all(Zero::is_zero) {
            let ok = if q.strict { q.b.is_negative() } else { !q.b.is_positive() };
            if !ok {
                return None;
            }
            continue;
        }
        best.entry(q.a)
            .and_modify(|(b, s)| {
                if q.b > *b || (q.b == *b && q.strict) {
                    *b = q.b.clone();
                    *s = q.strict;
                }
            })
            .or_insert((q.b, q.strict));
    }
    Some(best.into_iter().map(|(a, (b, strict))| Inequality { a, b, strict }).collect())
}

/// Exact Fourier–Motzkin feasibility over the rationals.
pub fn feasible(ineqs: &[Inequality]) -> bool {
    let Some(mut sys) = prune(ineqs.iter().cloned()) else {
        return false;
    };
    let n = ineqs.first().map_or(0, |q| q.a.len());
    for j in 0..n {
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for q in sys {
            match q.a[j].sign() {
                num_bigint::Sign::Plus => pos.push(q),
                num_bigint::Sign::Minus => neg.push(q),
                num_bigint::Sign::NoSign => rest.push(q),
            }
        }
        for p in &pos {
            for q in &neg {
                let (fp, fq) = (-&q.a[j], p.a[j].clone());
                let a = p.a.iter().zip(&q.a).map(|(x, y)| x * &fp + y * &fq).collect();
                let b = &p.b * BigRational::from_integer(fp.clone()) + &q.b * BigRational::from_integer(fq.clone());
                rest.push(Inequality {
                    a,
                    b,
                    strict: p.strict || q.strict,
                });
            }
        }
        match prune(rest) {
            Some(s) => sys = s,
            None => return false,
        }
    }
    true
}

/// Affine dimension of `{t : ineqs}`, or `None` when empty.
///
/// Non-strict inequalities that cannot be made strict are the implicit
/// equalities; the dimension is `n` minus the rank of those.
pub fn affine_dim(ineqs: &[Inequality], n: usize) -> Option<usize> {
    if !feasible(ineqs) {
        return None;
    }
    let mut equalities: Vec<Vec<BigRational>> = Vec::new();
    for (i, q) in ineqs.iter().enumerate() {
        if q.strict {
            continue;
        }
        let mut tight = ineqs.to_vec();
        tight[i].strict = true;
        if !feasible(&tight) {
            equalities.push(q.a.iter().map(|x| BigRational::from_integer(x.clone())).collect());
        }
    }
    Some(n - rank(equalities))
}

fn rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let mut r = 0;
    let cols = rows.first().map_or(0, Vec::len);
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = &rows[i][c] / &rows[r][c];
                for j in 0..cols {
                    let d = &rows[r][j] * &f;
                    rows[i][j] -= d;
                }
            }
        }
        r += 1;
    }
    r
}

/// Affine dimension of `closure(region) ∩ {a·t = b}`.
pub fn affine_dim_on_hyperplane(ineqs: &[Inequality], a: &[i64], b: i64) -> Option<usize> {
    let n = a.len();
    let h = Inequality::new(a.to_vec(), b, false);
    let mut sys: Vec<Inequality> = ineqs.iter().map(Inequality::closed).collect();
    sys.push(h.negated_closed());
    sys.push(h);
    affine_dim(&sys, n)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    pub k: usize,
    /// `levels[α]` = number of hyperplanes `H_{α,1..k}` below the region.
    pub levels: Vec<usize>,
    pub inequalities: Vec<Inequality>,
}

fn coeffs(rs: &RootSystem, a: usize) -> Vec<i64> {
    rs.root(a).coeffs().to_vec()
}

fn neg(v: &[i64]) -> Vec<i64> {
    v.iter().map(|x| -x).collect()
}

/// The region `φ^{-1}(I)`: `i < <x, α> < i + 1` when `α` has level `i < k`
/// and `<x, α> > k` at level `k`.
pub fn region_from_chain(rs: &RootSystem, c: &FilterChain) -> Result<Region> {
    let k = c.k();
    let levels: Vec<usize> = (0..rs.num_positive()).map(|a| c.max_level(a)).collect();
    let mut inequalities = Vec::new();
    for (a, &m) in levels.iter().enumerate() {
        let v = coeffs(rs, a);
        inequalities.push(Inequality::new(v.clone(), m as i64, true));
        if m < k {
            inequalities.push(Inequality::new(neg(&v), -(m as i64 + 1), true));
        }
    }
    invariant!(feasible(&inequalities), "chain maps to an empty region");
    Ok(Region {
        k,
        levels,
        inequalities,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WallReport {
    /// `(root, i)` for each wall `H_{root,i}`.
    pub walls: Vec<(usize, usize)>,
    pub floors: Vec<(usize, usize)>,
    pub ceilings: Vec<(usize, usize)>,
    pub bounded: bool,
    /// Number of ceilings of colour `k`.
    pub cl_k: usize,
}

pub fn wall_report(rs: &RootSystem, r: &Region) -> WallReport {
    let n = rs.rank();
    let mut walls = Vec::new();
    for a in 0..rs.num_positive() {
        let v = coeffs(rs, a);
        for i in 0..=r.k {
            if affine_dim_on_hyperplane(&r.inequalities, &v, i as i64) == Some(n - 1) {
                walls.push((a, i));
            }
        }
    }
    // The region lies above H_{α,i} iff i <= level; the origin is below
    // every hyperplane of positive colour.
    let floors: Vec<(usize, usize)> = walls.iter().copied().filter(|&(a, i)| i >= 1 && i <= r.levels[a]).collect();
    let ceilings: Vec<(usize, usize)> = walls.iter().copied().filter(|&(a, i)| i >= 1 && i > r.levels[a]).collect();
    let cl_k = ceilings.iter().filter(|&&(_, i)| i == r.k).count();
    WallReport {
        walls,
        floors,
        ceilings,
        bounded: is_bounded(rs, r),
        cl_k,
    }
}

/// The recession cone `{d : c(α)·d = 0 below level k, >= 0 at level k}` is
/// trivial.
pub fn is_bounded(rs: &RootSystem, r: &Region) -> bool {
    let mut cone = Vec::new();
    for (a, &m) in r.levels.iter().enumerate() {
        let v = coeffs(rs, a);
        cone.push(Inequality::new(v.clone(), 0, false));
        if m < r.k {
            cone.push(Inequality::new(neg(&v), 0, false));
        }
    }
    affine_dim(&cone, rs.rank()) == Some(0)
}

/// All dominant regions, in chain order.
pub fn regions(rs: &RootSystem, k: usize) -> Result<Vec<(FilterChain, Region)>> {
    nonnesting::enumerate_nn(rs, k)?
        .into_iter()
        .map(|c| region_from_chain(rs, &c).map(|r| (c, r)))
        .collect()
}

/// `sum over bounded dominant regions of x^{CL_k}`.
pub fn ceilings_poly(rs: &RootSystem, k: usize) -> Result<UniPoly> {
    let mut p = UniPoly::zero();
    for (_, r) in regions(rs, k)? {
        if is_bounded(rs, &r) {
            p.add_term(wall_report(rs, &r).cl_k as u32, BigInt::one());
        }
    }
    Ok(p)
}

/// A chain whose region's floors differ from its indecomposables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiCounterexample {
    pub chain: FilterChain,
    pub floors: Vec<(usize, usize)>,
    pub indecomposables: Vec<(usize, usize)>,
}

/// Checks that `H_{α,i}` is a floor exactly when `α` is a rank-`i`
/// indecomposable, for every chain.
pub fn verify_phi(rs: &RootSystem, k: usize) -> Result<std::result::Result<(), PhiCounterexample>> {
    for (c, r) in regions(rs, k)? {
        let mut floors = wall_report(rs, &r).floors;
        floors.sort();
        let report = nonnesting::indecomposable_report(rs, &c);
        let mut ind: Vec<(usize, usize)> = (1..=k)
            .flat_map(|l| report.rank(l).0.iter().map(move |a| (a, l)))
            .collect();
        ind.sort();
        if floors != ind {
            return Ok(Err(PhiCounterexample {
                chain: c,
                floors,
                indecomposables: ind,
            }));
        }
    }
    Ok(Ok(()))
}

/// Some pair of distinct regions intersecting, if any.
pub fn overlapping_pair(regions: &[(FilterChain, Region)]) -> Option<(usize, usize)> {
    for i in 0..regions.len() {
        for j in i + 1..regions.len() {
            let both: Vec<Inequality> = regions[i]
                .1
                .inequalities
                .iter()
                .chain(&regions[j].1.inequalities)
                .cloned()
                .collect();
            if feasible(&both) {
                return Some((i, j));
            }
        }
    }
    None
}

pub fn region_json(r: &Region, w: &WallReport) -> serde_json::Value {
    serde_json::json!({
        "levels": r.levels,
        "walls": w.walls,
        "floors": w.floors,
        "ceilings": w.ceilings,
        "bounded": w.bounded,
        "cl_k": w.cl_k,
    })
}

pub fn regions_json(rs: &RootSystem, k: usize) -> Result<String> {
    let v: Vec<serde_json::Value> = regions(rs, k)?
        .iter()
        .map(|(_, r)| region_json(r, &wall_report(rs, r)))
        .collect();
    serde_json::to_string(&v).map_err(|e| Error::Invariant(e.to_string()))
}
