//! Coroot-lattice points in dilations of the fundamental simplex, counted by
//! the walls they lie on.
//!
//! Points are enumerated in the coordinates `z = A^T y`, where the simplex
//! becomes `z >= 0, c·z <= t` and the lattice condition becomes
//! `A^{-T} z ∈ Z^n`. Wall `j < n` is `z_j = 0`; wall `n` is `c·z = t`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{invariant, Error, Result};
use crate::poly;
use crate::rootsys::RootSystem;

#[derive(Debug, Clone)]
pub struct SimplexModel {
    pub n: usize,
    pub cartan: Vec<Vec<i64>>,
    /// Highest-root coefficients.
    pub c: Vec<i64>,
    pub h: i64,
    pub det: i64,
    /// `|det| · A^{-T}`, an integer matrix.
    scaled_inverse: Vec<Vec<i64>>,
    /// `A^{-T}` exactly.
    inverse: Vec<Vec<BigRational>>,
}

impl SimplexModel {
    pub fn new(rs: &RootSystem) -> Result<Self> {
        let h = rs.coxeter_number()? as i64;
        let c = rs.highest_root()?.coeffs().to_vec();
        invariant!(c.iter().all(|&x| x >= 1), "highest root misses a simple root");
        invariant!(h == 1 + c.iter().sum::<i64>(), "h != 1 + sum of highest-root coefficients");
        let n = rs.rank();
        let cartan = rs.cartan().to_vec();
        let at: Vec<Vec<BigRational>> = (0..n)
            .map(|i| (0..n).map(|j| BigRational::from_integer(cartan[j][i].into())).collect())
            .collect();
        let (inverse, det) = invert(at).ok_or_else(|| Error::Invariant("singular Cartan matrix".into()))?;
        let det = i64::try_from(det.to_integer()).expect("small determinant");
        let scale = BigRational::from_integer(det.abs().into());
        let scaled_inverse = inverse
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| {
                        let v = x * &scale;
                        assert!(v.is_integer());
                        i64::try_from(v.to_integer()).expect("small entry")
                    })
                    .collect()
            })
            .collect();
        Ok(SimplexModel {
            n,
            cartan,
            c,
            h,
            det,
            scaled_inverse,
            inverse,
        })
    }

    fn in_lattice(&self, z: &[i64]) -> bool {
        let d = self.det.abs();
        self.scaled_inverse
            .iter()
            .all(|row| row.iter().zip(z).map(|(a, b)| a * b).sum::<i64>() % d == 0)
    }

    /// Calls `visit(z, walls)` for every lattice point of `tP`, `walls`
    /// being the bitmask of incident walls.
    pub fn for_each_point(&self, t: i64, mut visit: impl FnMut(&[i64], u32)) {
        let mut z = vec![0; self.n];
        self.rec(0, t, t, &mut z, &mut visit);
    }

    fn rec(&self, j: usize, t: i64, budget: i64, z: &mut Vec<i64>, visit: &mut impl FnMut(&[i64], u32)) {
        if j == self.n {
            if self.in_lattice(z) {
                let mut walls = 0u32;
                for (i, &zi) in z.iter().enumerate() {
                    if zi == 0 {
                        walls |= 1 << i;
                    }
                }
                if budget == 0 {
                    walls |= 1 << self.n;
                }
                visit(z, walls);
            }
            return;
        }
        for v in 0..=budget / self.c[j] {
            z[j] = v;
            self.rec(j + 1, t, budget - v * self.c[j], z, visit);
        }
        z[j] = 0;
    }

    /// Vertices of `P` in `y` coordinates: the origin and `A^{-T} e_i / c_i`.
    pub fn vertices(&self) -> Vec<Vec<BigRational>> {
        let mut out = vec![vec![BigRational::zero(); self.n]];
        for i in 0..self.n {
            let ci = BigRational::from_integer(self.c[i].into());
            out.push((0..self.n).map(|r| &self.inverse[r][i] / &ci).collect());
        }
        out
    }

    /// Lcm of the denominators of the vertices of `P`.
    pub fn period(&self) -> i64 {
        let mut p = BigInt::one();
        for v in self.vertices() {
            for x in v {
                p = p.lcm(x.denom());
            }
        }
        i64::try_from(p).expect("small period")
    }

    /// `lcm(p, h) / h`, the period in `k` of the counts at `t = kh + 1`.
    pub fn reduced_period(&self) -> i64 {
        self.period().lcm(&self.h) / self.h
    }
}

/// Gauss–Jordan inverse and determinant over the rationals.
fn invert(mut m: Vec<Vec<BigRational>>) -> Option<(Vec<Vec<BigRational>>, BigRational)> {
    let n = m.len();
    let mut inv: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
        .collect();
    let mut det = BigRational::one();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        if piv != col {
            m.swap(piv, col);
            inv.swap(piv, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= &p;
        for j in 0..n {
            m[col][j] = &m[col][j] / &p;
            inv[col][j] = &inv[col][j] / &p;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for j in 0..n {
                    let (a, b) = (&m[col][j] * &f, &inv[col][j] * &f);
                    m[r][j] -= a;
                    inv[r][j] -= b;
                }
            }
        }
    }
    Some((inv, det))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WallIncidenceCount {
    pub t: i64,
    /// `counts[i]` = points on exactly `i` walls. Has `n + 1` entries, or
    /// `n + 2` when `t = 0` (the origin then lies on all `n + 1` walls).
    pub counts: Vec<u64>,
}

impl WallIncidenceCount {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

pub fn count_by_walls(rs: &RootSystem, t: i64) -> Result<WallIncidenceCount> {
    if t < 0 {
        return Err(Error::Precondition("negative dilation".into()));
    }
    let model = SimplexModel::new(rs)?;
    Ok(count_with(&model, t))
}

fn count_with(model: &SimplexModel, t: i64) -> WallIncidenceCount {
    let len = if t == 0 { model.n + 2 } else { model.n + 1 };
    let mut counts = vec![0; len];
    model.for_each_point(t, |_, walls| counts[walls.count_ones() as usize] += 1);
    WallIncidenceCount { t, counts }
}

/// `(N_0, ..., N_n)` at `t = kh + 1`.
pub fn n_k_i(rs: &RootSystem, k: usize) -> Result<Vec<u64>> {
    if k == 0 {
        return Err(Error::Precondition("k must be at least 1".into()));
    }
    let model = SimplexModel::new(rs)?;
    Ok(count_with(&model, k as i64 * model.h + 1).counts)
}

/// Per face (keyed by its sorted wall set): `(f_B, g_B)`, the number of
/// points in the closed face and in its relative interior.
pub fn count_by_faces(rs: &RootSystem, t: i64) -> Result<BTreeMap<Vec<usize>, (u64, u64)>> {
    if t < 1 {
        return Err(Error::Precondition("face counts need t >= 1".into()));
    }
    let model = SimplexModel::new(rs)?;
    let n = model.n;
    let mut exact: BTreeMap<u32, u64> = BTreeMap::new();
    model.for_each_point(t, |_, walls| *exact.entry(walls).or_default() += 1);
    let mut out = BTreeMap::new();
    for mask in 0u32..1 << (n + 1) {
        if mask.count_ones() as usize > n {
            continue;
        }
        let g = exact.get(&mask).copied().unwrap_or(0);
        let f = exact
            .iter()
            .filter(|(&w, _)| w & mask == mask)
            .map(|(_, &c)| c)
            .sum();
        out.insert(wall_list(mask), (f, g));
    }
    Ok(out)
}

fn wall_list(mask: u32) -> Vec<usize> {
    (0..32).filter(|&i| mask >> i & 1 == 1).collect()
}

/// `g_B = sum over faces C ⊆ B of (-1)^(dim B - dim C) f_C` for every face.
pub fn inclusion_exclusion_holds(faces: &BTreeMap<Vec<usize>, (u64, u64)>) -> bool {
    faces.iter().all(|(b, &(_, g))| {
        let sum: i64 = faces
            .iter()
            .filter(|(c, _)| b.iter().all(|w| c.contains(w)))
            .map(|(c, &(f, _))| {
                let sign = if (c.len() - b.len()) % 2 == 0 { 1 } else { -1 };
                sign * f as i64
            })
            .sum();
        sum == g as i64
    })
}

/// `N_i` recovered from face interiors of dimension `n - i`.
pub fn counts_from_faces(faces: &BTreeMap<Vec<usize>, (u64, u64)>, n: usize) -> Vec<u64> {
    let mut out = vec![0; n + 1];
    for (b, &(_, g)) in faces {
        out[b.len()] += g;
    }
    out
}

/// Rows `t,i,N_i` with a header line.
pub fn counts_csv(counts: &[WallIncidenceCount]) -> String {
    let mut s = String::from("t,i,N\n");
    for c in counts {
        for (i, v) in c.counts.iter().enumerate() {
            writeln!(s, "{},{},{}", c.t, i, v).unwrap();
        }
    }
    s
}

/// A quasipolynomial in `k`: `residues[r]` holds the coefficients (lowest
/// first) used when `k ≡ r (mod period)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasiPolynomial {
    pub period: i64,
    pub residues: Vec<Vec<BigRational>>,
}

impl QuasiPolynomial {
    pub fn eval(&self, k: i64) -> BigRational {
        let r = k.rem_euclid(self.period) as usize;
        poly::eval_rational(&self.residues[r], &BigRational::from_integer(k.into()))
    }
}

#[derive(Debug, Clone)]
pub struct QuasiFit {
    pub quasi: QuasiPolynomial,
    /// Held-out samples: `(k, predicted, counted)`.
    pub held_out: Vec<(i64, BigRational, u64)>,
    pub samples: Vec<(i64, u64)>,
}

impl QuasiFit {
    pub fn passes(&self) -> bool {
        self.held_out
            .iter()
            .all(|(_, p, c)| *p == BigRational::from_integer((*c).into()))
    }
}

/// Fits `k -> N^(k)(i)` for `k = 1..=kmax` by a polynomial of degree `<= n`
/// on each residue class mod the reduced period, holding out the rest.
pub fn fit_quasipolynomial(rs: &RootSystem, i: usize, kmax: i64) -> Result<QuasiFit> {
    let model = SimplexModel::new(rs)?;
    let n = model.n;
    if i > n {
        return Err(Error::Precondition(format!("i = {i} exceeds the rank")));
    }
    let period = model.reduced_period();
    let needed = (n as i64 + 1) * period + 2;
    if kmax < needed {
        return Err(Error::Precondition(format!("kmax must be at least {needed}")));
    }
    let samples: Vec<(i64, u64)> = (1..=kmax)
        .map(|k| (k, count_with(&model, k * model.h + 1).counts[i]))
        .collect();
    let mut residues = Vec::new();
    let mut held_out = Vec::new();
    for r in 0..period {
        let class: Vec<&(i64, u64)> = samples.iter().filter(|(k, _)| k.rem_euclid(period) == r).collect();
        let pts: Vec<(BigRational, BigRational)> = class[..n + 1]
            .iter()
            .map(|&&(k, v)| (BigRational::from_integer(k.into()), BigRational::from_integer(v.into())))
            .collect();
        let coeffs = poly::interpolate(&pts)?;
        for &&(k, v) in &class[n + 1..] {
            let p = poly::eval_rational(&coeffs, &BigRational::from_integer(k.into()));
            held_out.push((k, p, v));
        }
        residues.push(coeffs);
    }
    Ok(QuasiFit {
        quasi: QuasiPolynomial { period, residues },
        held_out,
        samples,
    })
}
