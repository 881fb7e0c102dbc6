//! Cross-family identity checks and the verification grids.

use std::cell::OnceCell;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;

use crate::arrangement;
use crate::cluster::{self, ClusterComplex};
use crate::ehrhart;
use crate::error::{invariant, Error, Result};
use crate::noncrossing::NcPoset;
use crate::nonnesting::{self, FilterChain};
use crate::poly::{self, BivarPoly, KFamily, UniPoly};
use crate::rootsys::{RootSystem, TypeSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Identity {
    HF,
    HM,
    MF,
    K1,
    Recip,
    Dual,
    Y1Nar,
    LatticeNar,
    Pos,
    Ceil,
    Final,
    Dh,
    Df,
    Bij,
    Phi,
    Counts,
}

impl Identity {
    pub const ALL: [Identity; 16] = [
        Identity::Counts,
        Identity::Y1Nar,
        Identity::LatticeNar,
        Identity::HF,
        Identity::HM,
        Identity::MF,
        Identity::Dh,
        Identity::Df,
        Identity::Bij,
        Identity::K1,
        Identity::Dual,
        Identity::Recip,
        Identity::Pos,
        Identity::Ceil,
        Identity::Final,
        Identity::Phi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::HF => "h=f",
            Identity::HM => "h=m",
            Identity::MF => "m=f",
            Identity::K1 => "k1",
            Identity::Recip => "recip",
            Identity::Dual => "dual",
            Identity::Y1Nar => "y1-nar",
            Identity::LatticeNar => "lattice-nar",
            Identity::Pos => "pos",
            Identity::Ceil => "ceil",
            Identity::Final => "final",
            Identity::Dh => "dh",
            Identity::Df => "df",
            Identity::Bij => "bij",
            Identity::Phi => "phi",
            Identity::Counts => "counts",
        }
    }

    /// Rejects tasks outside the identity's range of validity.
    pub fn validate(self, rs: &RootSystem, k: usize) -> Result<()> {
        if k == 0 {
            return Err(Error::Usage("k must be at least 1".into()));
        }
        match self {
            Identity::K1 | Identity::Dual | Identity::Final if k != 1 => {
                Err(Error::Usage(format!("{} holds for k = 1 only", self.name())))
            }
            Identity::LatticeNar if !rs.is_irreducible() => {
                Err(Error::Usage("lattice-nar needs an irreducible type".into()))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Identity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Identity::ALL
            .into_iter()
            .find(|i| i.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown identity {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Verified,
    /// A human-readable counterexample.
    Violated(String),
}

impl Outcome {
    pub fn is_verified(&self) -> bool {
        matches!(self, Outcome::Verified)
    }
}

fn expect_eq<T: PartialEq + fmt::Display>(what: &str, lhs: &T, rhs: &T) -> Outcome {
    if lhs == rhs {
        Outcome::Verified
    } else {
        Outcome::Violated(format!("{what}: {lhs} != {rhs}"))
    }
}

fn from_identity(what: &str, r: poly::IdentityResult) -> Outcome {
    match r {
        Ok(()) => Outcome::Verified,
        Err(diff) => Outcome::Violated(format!("{what}: difference {diff}")),
    }
}

fn seq<T: fmt::Debug>(v: &[T]) -> String {
    format!("{v:?}")
}

/// Fuß–Catalan number `prod_i (kh + d_i) / d_i`, multiplied over components.
pub fn fuss_catalan(rs: &RootSystem, k: usize) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for comp in rs.components() {
        let h = comp.coxeter_number as u64;
        for d in comp.factor.degrees() {
            num *= k as u64 * h + d;
            den *= d;
        }
    }
    num / den
}

/// Lazily computed objects for one `(type, k)` cell, with the support
/// conditions on each triangle checked as it is built.
pub struct Case<'a> {
    pub rs: &'a RootSystem,
    pub k: usize,
    nn: OnceCell<Vec<FilterChain>>,
    h: OnceCell<BivarPoly>,
    complex: OnceCell<ClusterComplex>,
    f: OnceCell<BivarPoly>,
    nc: OnceCell<NcPoset>,
    m: OnceCell<BivarPoly>,
}

fn cached<'c, T>(cell: &'c OnceCell<T>, init: impl FnOnce() -> Result<T>) -> Result<&'c T> {
    if let Some(v) = cell.get() {
        return Ok(v);
    }
    let v = init()?;
    Ok(cell.get_or_init(|| v))
}

impl<'a> Case<'a> {
    pub fn new(rs: &'a RootSystem, k: usize) -> Self {
        Case {
            rs,
            k,
            nn: OnceCell::new(),
            h: OnceCell::new(),
            complex: OnceCell::new(),
            f: OnceCell::new(),
            nc: OnceCell::new(),
            m: OnceCell::new(),
        }
    }

    fn n(&self) -> u32 {
        self.rs.rank() as u32
    }

    pub fn nn(&self) -> Result<&Vec<FilterChain>> {
        cached(&self.nn, || nonnesting::enumerate_nn(self.rs, self.k))
    }

    pub fn h(&self) -> Result<&BivarPoly> {
        cached(&self.h, || {
            let h = nonnesting::h_triangle_of(self.rs, self.nn()?);
            invariant!(h.is_h_supported(), "H-triangle has a monomial with ydeg > xdeg");
            Ok(h)
        })
    }

    pub fn complex(&self) -> Result<&ClusterComplex> {
        cached(&self.complex, || cluster::build_complex(self.rs, self.k))
    }

    pub fn f(&self) -> Result<&BivarPoly> {
        cached(&self.f, || {
            let f = self.complex()?.f_triangle();
            invariant!(f.is_f_supported(self.n()), "F-triangle has a monomial of degree above n");
            Ok(f)
        })
    }

    pub fn nc(&self) -> Result<&NcPoset> {
        cached(&self.nc, || NcPoset::new(self.rs, self.k))
    }

    pub fn m(&self) -> Result<&BivarPoly> {
        cached(&self.m, || {
            let m = self.nc()?.m_triangle();
            invariant!(m.is_m_supported(self.n()), "M-triangle has a monomial with ydeg < xdeg");
            Ok(m)
        })
    }

    pub fn narayana(&self) -> Result<Vec<u64>> {
        Ok(self.nc()?.narayana_numbers().into_iter().map(|v| v as u64).collect())
    }

    pub fn facets(&self) -> Result<usize> {
        Ok(self.complex()?.faces.iter().filter(|f| f.len() == self.rs.rank()).count())
    }

    pub fn verify(&self, id: Identity) -> Result<Outcome> {
        id.validate(self.rs, self.k)?;
        let n = self.n();
        let rs = self.rs;
        let k = self.k;
        Ok(match id {
            Identity::Counts => {
                let cat = fuss_catalan(rs, k);
                let nn = BigInt::from(self.nn()?.len());
                let facets = BigInt::from(self.facets()?);
                let nc = BigInt::from(self.nc()?.len());
                if nn == cat && facets == cat && nc == cat {
                    Outcome::Verified
                } else {
                    Outcome::Violated(format!("|NN| = {nn}, facets = {facets}, |NC| = {nc}, Cat = {cat}"))
                }
            }
            Identity::Y1Nar => {
                let nar = self.narayana()?;
                let hist = nonnesting::indecomposable_histogram(rs, self.nn()?);
                let h1 = self.h()?.at_y_one();
                let nar_poly = UniPoly::from_coeffs(nar.iter().copied());
                let mut hv = cluster::h_vector(self.f()?, n)?;
                hv.reverse();
                let nar_big: Vec<BigInt> = nar.iter().map(|&v| v.into()).collect();
                if hist != nar {
                    Outcome::Violated(format!("indecomposable histogram {} != Narayana {}", seq(&hist), seq(&nar)))
                } else if hv != nar_big {
                    Outcome::Violated(format!("reversed h-vector {} != Narayana {}", seq(&hv), seq(&nar)))
                } else {
                    expect_eq("H(x,1) vs Narayana polynomial", &h1, &nar_poly)
                }
            }
            Identity::LatticeNar => {
                let lattice = ehrhart::n_k_i(rs, k)?;
                let hist = nonnesting::indecomposable_histogram(rs, self.nn()?);
                let nar = self.narayana()?;
                if lattice == hist && hist == nar {
                    Outcome::Verified
                } else {
                    Outcome::Violated(format!(
                        "lattice {} / histogram {} / Narayana {}",
                        seq(&lattice),
                        seq(&hist),
                        seq(&nar)
                    ))
                }
            }
            Identity::HF => expect_eq("hf(F) vs H", &poly::hf_transform(self.f()?, n)?, self.h()?),
            Identity::HM => {
                let h = self.h()?;
                let m = self.m()?;
                match expect_eq("hm(M) vs H", &poly::hm_transform(m, n)?, h) {
                    Outcome::Verified => expect_eq("mh(H) vs M", &poly::mh_transform(h, n)?, m),
                    v => v,
                }
            }
            Identity::MF => from_identity("F vs fm(M)", poly::fm_check(self.f()?, self.m()?, n)?),
            Identity::K1 => from_identity("H vs k=1 form of F", poly::k1_form_check(self.h()?, self.f()?, n)?),
            Identity::Dual => {
                let f = self.f()?;
                match from_identity("H duality", poly::dual_check(self.h()?, n)?) {
                    Outcome::Verified => expect_eq("F vs its dual", &poly::f_dual(f, n), f),
                    v => v,
                }
            }
            Identity::Recip => self.recip()?,
            Identity::Dh => {
                let lhs = self.h()?.derivative_y();
                let mut rhs = BivarPoly::zero();
                for a in 0..rs.rank() {
                    rhs += &parabolic_triangle(rs, a, k, Triangle::H)?;
                }
                expect_eq("dH/dy vs x * sum of parabolic H", &lhs, &(&BivarPoly::x() * &rhs))
            }
            Identity::Df => {
                let lhs = self.f()?.derivative_y();
                let mut rhs = BivarPoly::zero();
                for a in 0..rs.rank() {
                    rhs += &parabolic_triangle(rs, a, k, Triangle::F)?;
                }
                expect_eq("dF/dy vs sum of parabolic F", &lhs, &rhs)
            }
            Identity::Bij => self.bij()?,
            Identity::Pos => {
                let ceil = arrangement::ceilings_poly(rs, k)?;
                expect_eq("positive h-polynomial vs bounded-region census", &cluster::positive_h(self.f()?, n)?, &ceil)
            }
            Identity::Ceil => {
                let ceil = arrangement::ceilings_poly(rs, k)?;
                expect_eq("H(x, 1 - 1/x) vs bounded-region census", &poly::ceil_specialise(self.h()?)?, &ceil)
            }
            Identity::Final => {
                let ceil = arrangement::ceilings_poly(rs, k)?;
                expect_eq("x^n H(1/x, 0) vs bounded-region census", &poly::final_specialise(self.h()?, n)?, &ceil)
            }
            Identity::Phi => match arrangement::verify_phi(rs, k)? {
                Ok(()) => Outcome::Verified,
                Err(ce) => Outcome::Violated(format!(
                    "chain {:?}: floors {:?}, indecomposables {:?}",
                    ce.chain.filters().iter().map(|f| f.iter().collect::<Vec<_>>()).collect::<Vec<_>>(),
                    ce.floors,
                    ce.indecomposables
                )),
            },
        })
    }

    /// Reciprocity over the family `k = 1..=n+3`: degree `n` fits leave two
    /// held-out samples. The cell's own `k` is ignored.
    fn recip(&self) -> Result<Outcome> {
        let n = self.rs.rank();
        let mut samples = BTreeMap::new();
        for k in 1..=n + 3 {
            let h = if k == self.k {
                self.h()?.clone()
            } else {
                nonnesting::h_triangle(self.rs, k)?
            };
            samples.insert(k as i64, h);
        }
        let fam = KFamily::fit(samples, n, 2)?;
        Ok(match poly::recip_check(&fam, n as u32)? {
            Ok(()) => Outcome::Verified,
            Err((k, diff)) => Outcome::Violated(format!("reciprocity fails at k = {k}: difference {diff}")),
        })
    }

    /// `Θ` against `Ψ` for every chain and every simple root in `I_k`.
    fn bij(&self) -> Result<Outcome> {
        let rs = self.rs;
        let k = self.k;
        let chains = self.nn()?;
        for a in 0..rs.rank() {
            let sub = rs.parabolic(a)?;
            let sub_chains = nonnesting::enumerate_nn(&sub.system, k)?;
            let mut image = Vec::new();
            for c in chains.iter().filter(|c| c.level(k).contains(a)) {
                let t = nonnesting::theta(rs, &sub, c, a)?;
                if !nonnesting::is_geometric(&sub.system, &t) {
                    return Ok(Outcome::Violated(format!("theta leaves NN at simple root {}", a + 1)));
                }
                if &nonnesting::psi(rs, &sub, &t, a)? != c {
                    return Ok(Outcome::Violated(format!("psi(theta(I)) != I at simple root {}", a + 1)));
                }
                let before = nonnesting::indecomposable_report(rs, c);
                let after = nonnesting::indecomposable_report(&sub.system, &t);
                for l in 1..=k {
                    let mut expect = before.rank(l).0;
                    if l == k {
                        expect.remove(a);
                    }
                    if sub.push_set(after.rank(l).0) != expect {
                        return Ok(Outcome::Violated(format!(
                            "rank-{l} indecomposables not preserved at simple root {}",
                            a + 1
                        )));
                    }
                }
                image.push(t);
            }
            image.sort();
            if image != sub_chains {
                return Ok(Outcome::Violated(format!(
                    "theta at simple root {} is not onto NN of the parabolic ({} vs {})",
                    a + 1,
                    image.len(),
                    sub_chains.len()
                )));
            }
            for t in &sub_chains {
                let back = nonnesting::psi(rs, &sub, t, a)?;
                if nonnesting::theta(rs, &sub, &back, a)? != *t {
                    return Ok(Outcome::Violated(format!("theta(psi(I')) != I' at simple root {}", a + 1)));
                }
            }
        }
        Ok(Outcome::Verified)
    }
}

#[derive(Clone, Copy)]
enum Triangle {
    H,
    F,
}

/// Triangle of the parabolic subsystem omitting simple root `a`, as the
/// product over its irreducible components.
fn parabolic_triangle(rs: &RootSystem, a: usize, k: usize, which: Triangle) -> Result<BivarPoly> {
    let sub = rs.parabolic(a)?;
    let mut parts = Vec::new();
    for comp in sub.system.factor_systems()? {
        parts.push(match which {
            Triangle::H => nonnesting::h_triangle(&comp.system, k)?,
            Triangle::F => cluster::f_triangle(&comp.system, k)?,
        });
    }
    Ok(poly::product(&parts))
}

/// One row of a grid run.
#[derive(Debug, Clone)]
pub struct GridRow {
    pub type_spec: TypeSpec,
    pub k: usize,
    pub nn: usize,
    pub facets: usize,
    pub nc: usize,
    pub verdicts: Vec<(String, Outcome)>,
}

impl GridRow {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|(_, o)| o.is_verified())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Acceptance,
    Extended,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "acceptance" => Ok(Suite::Acceptance),
            "extended" => Ok(Suite::Extended),
            _ => Err(Error::Usage(format!("unknown suite {s:?}"))),
        }
    }
}

/// `(type, k)` cells: rank <= 3 types for `k <= 3`, `D4` and `F4` for
/// `k <= 2`.
pub fn acceptance_cells() -> Vec<(TypeSpec, usize)> {
    let mut out = Vec::new();
    for t in ["A1", "A2", "A3", "B2", "B3", "G2"] {
        for k in 1..=3 {
            out.push((t.parse().unwrap(), k));
        }
    }
    for t in ["D4", "F4"] {
        for k in 1..=2 {
            out.push((t.parse().unwrap(), k));
        }
    }
    out
}

/// Identities checked on a cell of the acceptance grid.
pub fn identities_for(rs: &RootSystem, k: usize) -> Vec<Identity> {
    let arrangement_ok = rs.rank() <= 3 && k <= 2;
    Identity::ALL
        .into_iter()
        .filter(|id| match id {
            Identity::K1 | Identity::Dual => k == 1,
            Identity::Final => k == 1 && arrangement_ok,
            Identity::Pos | Identity::Ceil | Identity::Phi => arrangement_ok,
            Identity::LatticeNar => k <= 2 && rs.is_irreducible(),
            // the family check covers every k at once
            Identity::Recip => k == 1,
            _ => true,
        })
        .collect()
}

/// Holds the quasipolynomial fit of every `N^(k)(i)` with a period of 1 or 2.
pub fn quasipolynomial_check(rs: &RootSystem) -> Result<Outcome> {
    let model = ehrhart::SimplexModel::new(rs)?;
    let p = model.reduced_period();
    if p != 1 && p != 2 {
        return Ok(Outcome::Violated(format!("reduced period {p}")));
    }
    let kmax = (rs.rank() as i64 + 1) * p + 2;
    for i in 0..=rs.rank() {
        let fit = ehrhart::fit_quasipolynomial(rs, i, kmax)?;
        if !fit.passes() {
            return Ok(Outcome::Violated(format!("fit of N_{i} misses a held-out sample")));
        }
        for &(k, count) in &fit.samples {
            if k <= 2 {
                let nar = NcPoset::new(rs, k as usize)?.narayana(i) as u64;
                if nar != count {
                    return Ok(Outcome::Violated(format!("N_{i} at k = {k}: {count} != Narayana {nar}")));
                }
            }
        }
    }
    Ok(Outcome::Verified)
}

pub fn run_cell(t: &TypeSpec, k: usize, ids: Option<&[Identity]>) -> Result<GridRow> {
    let rs = RootSystem::new(t)?;
    let case = Case::new(&rs, k);
    let ids = ids.map_or_else(|| identities_for(&rs, k), <[Identity]>::to_vec);
    let mut verdicts = Vec::new();
    for id in ids {
        verdicts.push((id.name().to_string(), case.verify(id)?));
    }
    if k == 1 && ["G2", "F4"].contains(&t.to_string().as_str()) {
        verdicts.push(("quasi".to_string(), quasipolynomial_check(&rs)?));
    }
    Ok(GridRow {
        type_spec: t.clone(),
        k,
        nn: case.nn()?.len(),
        facets: case.facets()?,
        nc: case.nc()?.len(),
        verdicts,
    })
}

pub fn run_suite(suite: Suite) -> Result<Vec<GridRow>> {
    let mut rows = Vec::new();
    for (t, k) in acceptance_cells() {
        rows.push(run_cell(&t, k, None)?);
    }
    if suite == Suite::Extended {
        let e6: TypeSpec = "E6".parse()?;
        rows.push(run_cell(&e6, 1, Some(&[Identity::Counts]))?);
    }
    Ok(rows)
}
