//! The generalised cluster complex: coloured almost positive roots,
//! compatibility via the coloured rotation, faces and the F-triangle.

use std::fmt;

use num_bigint::BigInt;

use crate::error::{invariant, Error, Result};
use crate::poly::{self, BivarPoly, UniPoly};
use crate::rootsys::RootSystem;

/// A negative simple root or a positive root.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AlmostPositive {
    NegSimple(usize),
    Positive(usize),
}

/// A vertex of the complex: an uncoloured negative simple root or a positive
/// root carrying a colour in `1..=k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Vertex {
    Neg(usize),
    Pos { root: usize, colour: usize },
}

impl Vertex {
    pub fn is_positive(self) -> bool {
        matches!(self, Vertex::Pos { .. })
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Vertex::Neg(i) => write!(f, "-a{}", i + 1),
            Vertex::Pos { root, colour } => write!(f, "r{root}^{colour}"),
        }
    }
}

fn to_vector(rs: &RootSystem, v: AlmostPositive) -> Vec<i64> {
    match v {
        AlmostPositive::NegSimple(i) => rs.root(i).neg().coeffs().to_vec(),
        AlmostPositive::Positive(r) => rs.root(r).coeffs().to_vec(),
    }
}

fn from_vector(rs: &RootSystem, v: Vec<i64>) -> Result<AlmostPositive> {
    let root = crate::rootsys::Root::new(v);
    if let Some(r) = rs.index_of(&root) {
        return Ok(AlmostPositive::Positive(r));
    }
    let neg = root.neg();
    match rs.index_of(&neg) {
        Some(i) if i < rs.rank() => Ok(AlmostPositive::NegSimple(i)),
        _ => Err(Error::Invariant(format!(
            "{root} is not an almost positive root"
        ))),
    }
}

/// `tau_+` (`plus = true`) or `tau_-`: the product of the simple
/// reflections in that part, except that negative simple roots from the
/// other part are fixed.
pub fn tau(rs: &RootSystem, plus: bool, v: AlmostPositive) -> Result<AlmostPositive> {
    if let AlmostPositive::NegSimple(i) = v {
        if rs.in_plus_part(i) != plus {
            return Ok(v);
        }
    }
    let mut w = to_vector(rs, v);
    for i in 0..rs.rank() {
        if rs.in_plus_part(i) == plus {
            w = rs.reflect_simple(i, &w);
        }
    }
    from_vector(rs, w)
}

/// `R = tau_- tau_+`.
pub fn rotation(rs: &RootSystem, v: AlmostPositive) -> Result<AlmostPositive> {
    tau(rs, false, tau(rs, true, v)?)
}

/// The coloured rotation on vertices of the `k`-th complex.
pub fn gamma(rs: &RootSystem, k: usize, v: Vertex) -> Result<Vertex> {
    Ok(match v {
        Vertex::Pos { root, colour } if colour < k => Vertex::Pos {
            root,
            colour: colour + 1,
        },
        Vertex::Pos { root, .. } => colour_one(rotation(rs, AlmostPositive::Positive(root))?),
        Vertex::Neg(i) => colour_one(rotation(rs, AlmostPositive::NegSimple(i))?),
    })
}

fn colour_one(v: AlmostPositive) -> Vertex {
    match v {
        AlmostPositive::Positive(root) => Vertex::Pos { root, colour: 1 },
        AlmostPositive::NegSimple(i) => Vertex::Neg(i),
    }
}

fn step_bound(rs: &RootSystem, k: usize) -> usize {
    k * (rs.max_coxeter_number() + 2) + k
}

fn base_rule(rs: &RootSystem, u: Vertex, v: Vertex) -> Option<bool> {
    match (u, v) {
        (Vertex::Neg(_), Vertex::Neg(_)) => Some(true),
        (Vertex::Neg(i), Vertex::Pos { root, .. }) | (Vertex::Pos { root, .. }, Vertex::Neg(i)) => {
            Some(rs.root(root).coeffs()[i] == 0)
        }
        _ => None,
    }
}

/// Compatibility of two distinct vertices: rotate both until one is a
/// negative simple root, then read off the support condition.
pub fn compatible(rs: &RootSystem, k: usize, u: Vertex, v: Vertex) -> Result<bool> {
    if u == v {
        return Ok(false);
    }
    let (mut a, mut b) = (u, v);
    for _ in 0..=step_bound(rs, k) {
        if let Some(verdict) = base_rule(rs, a, b) {
            return Ok(verdict);
        }
        a = gamma(rs, k, a)?;
        b = gamma(rs, k, b)?;
    }
    Err(Error::Invariant(format!(
        "no negative simple root reached from {u}, {v}"
    )))
}

/// Length of the orbit of `v` under [`gamma`].
pub fn orbit_length(rs: &RootSystem, k: usize, v: Vertex) -> Result<usize> {
    let bound = 2 * step_bound(rs, k) + 2;
    let mut w = gamma(rs, k, v)?;
    for len in 1..=bound {
        if w == v {
            return Ok(len);
        }
        w = gamma(rs, k, w)?;
    }
    Err(Error::Invariant(format!("orbit of {v} longer than {bound}")))
}

/// Every vertex of the `k`-th complex: negative simples, then positive roots
/// by index with colours `1..=k`.
pub fn vertices(rs: &RootSystem, k: usize) -> Vec<Vertex> {
    let mut out: Vec<Vertex> = (0..rs.rank()).map(Vertex::Neg).collect();
    for root in 0..rs.num_positive() {
        out.extend((1..=k).map(|colour| Vertex::Pos { root, colour }));
    }
    out
}

#[derive(Debug, Clone)]
pub struct ClusterComplex {
    pub k: usize,
    pub vertices: Vec<Vertex>,
    adjacent: Vec<Vec<bool>>,
    /// Every face (including the empty one) as sorted vertex indices.
    pub faces: Vec<Vec<usize>>,
}

impl ClusterComplex {
    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adjacent[a][b]
    }

    /// Faces not contained in any larger face.
    pub fn maximal_faces(&self) -> Vec<&[usize]> {
        let nv = self.vertices.len();
        self.faces
            .iter()
            .filter(|f| !(0..nv).any(|v| !f.contains(&v) && f.iter().all(|&u| self.adjacent[u][v])))
            .map(|f| f.as_slice())
            .collect()
    }

    pub fn f_triangle(&self) -> BivarPoly {
        let mut p = BivarPoly::zero();
        for f in &self.faces {
            let pos = f.iter().filter(|&&v| self.vertices[v].is_positive()).count();
            p.add_term(pos as u32, (f.len() - pos) as u32, 1.into());
        }
        p
    }
}

/// The compatibility graph and its clique complex.
pub fn build_complex(rs: &RootSystem, k: usize) -> Result<ClusterComplex> {
    if k == 0 {
        return Err(Error::Precondition("k must be at least 1".into()));
    }
    let vertices = vertices(rs, k);
    let nv = vertices.len();
    let mut adjacent = vec![vec![false; nv]; nv];
    for a in 0..nv {
        for b in a + 1..nv {
            let c = compatible(rs, k, vertices[a], vertices[b])?;
            adjacent[a][b] = c;
            adjacent[b][a] = c;
        }
    }
    let mut faces = Vec::new();
    let mut clique = Vec::new();
    let all: Vec<usize> = (0..nv).collect();
    cliques(&adjacent, &mut clique, &all, &mut faces);
    for f in &faces {
        invariant!(f.len() <= rs.rank(), "face of size {} exceeds rank", f.len());
    }
    Ok(ClusterComplex {
        k,
        vertices,
        adjacent,
        faces,
    })
}

fn cliques(adj: &[Vec<bool>], clique: &mut Vec<usize>, cand: &[usize], out: &mut Vec<Vec<usize>>) {
    out.push(clique.clone());
    for (pos, &v) in cand.iter().enumerate() {
        let next: Vec<usize> = cand[pos + 1..].iter().copied().filter(|&w| adj[v][w]).collect();
        clique.push(v);
        cliques(adj, clique, &next, out);
        clique.pop();
    }
}

/// Checks that the compatibility verdict is the same at every point of the
/// joint rotation orbit where one vertex is a negative simple root.
pub fn check_well_defined(rs: &RootSystem, k: usize) -> Result<()> {
    let vs = vertices(rs, k);
    let orbits: Vec<usize> = vs.iter().map(|&v| orbit_length(rs, k, v)).collect::<Result<_>>()?;
    for a in 0..vs.len() {
        for b in a + 1..vs.len() {
            let period = num_integer::lcm(orbits[a], orbits[b]);
            let (mut u, mut v) = (vs[a], vs[b]);
            let mut seen = None;
            for _ in 0..period {
                if let Some(verdict) = base_rule(rs, u, v) {
                    invariant!(
                        seen.is_none_or(|s| s == verdict),
                        "compatibility of {} and {} depends on the rotation step",
                        vs[a],
                        vs[b]
                    );
                    seen = Some(verdict);
                }
                u = gamma(rs, k, u)?;
                v = gamma(rs, k, v)?;
            }
        }
    }
    Ok(())
}

/// `F^k(x, y)`, counting faces by positive and negative vertices.
pub fn f_triangle(rs: &RootSystem, k: usize) -> Result<BivarPoly> {
    Ok(build_complex(rs, k)?.f_triangle())
}

/// `(h_0, ..., h_n)` with `sum_i h_i x^(n-i) = sum_i f_(i-1) (x-1)^(n-i)`.
pub fn h_vector(f: &BivarPoly, n: u32) -> Result<Vec<BigInt>> {
    let h = poly::h_polynomial(f, n)?;
    Ok(h.descending(n))
}

pub fn positive_h_vector(f: &BivarPoly, n: u32) -> Result<Vec<BigInt>> {
    Ok(positive_h(f, n)?.descending(n))
}

pub fn positive_h(f: &BivarPoly, n: u32) -> Result<UniPoly> {
    poly::positive_h_polynomial(f, n)
}

/// `{"f":[[l,m,count],...]}`.
pub fn f_json(f: &BivarPoly) -> String {
    serde_json::to_string(&serde_json::json!({ "f": f.to_json_terms() })).expect("json")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::build_root_system;

    fn rs(s: &str) -> RootSystem {
        build_root_system(&s.parse().unwrap()).unwrap()
    }

    fn p(t: &[(u32, u32, i64)]) -> BivarPoly {
        BivarPoly::from_terms(t.iter().copied())
    }

    #[test]
    fn tau_is_an_involution() {
        for t in ["A3", "B3", "D4", "G2", "F4", "A1xA2"] {
            let r = rs(t);
            let mut all: Vec<AlmostPositive> = (0..r.rank()).map(AlmostPositive::NegSimple).collect();
            all.extend((0..r.num_positive()).map(AlmostPositive::Positive));
            for &v in &all {
                for plus in [true, false] {
                    assert_eq!(tau(&r, plus, tau(&r, plus, v).unwrap()).unwrap(), v, "{t}");
                }
            }
        }
    }

    #[test]
    fn a1_complex() {
        let r = rs("A1");
        for k in 1..=4 {
            assert_eq!(f_triangle(&r, k).unwrap(), p(&[(0, 0, 1), (1, 0, k as i64), (0, 1, 1)]));
        }
    }

    #[test]
    fn a2_complex() {
        let r = rs("A2");
        let f = f_triangle(&r, 1).unwrap();
        assert_eq!(f, p(&[(0, 0, 1), (1, 0, 3), (0, 1, 2), (2, 0, 2), (1, 1, 2), (0, 2, 1)]));
        let h = h_vector(&f, 2).unwrap();
        assert_eq!(h, vec![1.into(), 3.into(), 1.into()]);
        assert_eq!(f_json(&f), r#"{"f":[[0,0,1],[0,1,2],[0,2,1],[1,0,3],[1,1,2],[2,0,2]]}"#);
    }

    #[test]
    fn facets_are_fuss_catalan() {
        for (t, k, cat) in [("A2", 2, 12), ("A2", 3, 22), ("B2", 2, 15), ("G2", 2, 21), ("A3", 2, 55), ("B3", 1, 20), ("D4", 1, 50)] {
            let r = rs(t);
            let c = build_complex(&r, k).unwrap();
            let facets = c.faces.iter().filter(|f| f.len() == r.rank()).count();
            assert_eq!(facets, cat, "{t} k={k}");
        }
    }

    #[test]
    fn complex_is_pure() {
        for (t, k) in [("A3", 2), ("B3", 1), ("G2", 3), ("A1xA2", 2)] {
            let r = rs(t);
            let c = build_complex(&r, k).unwrap();
            assert!(c.maximal_faces().iter().all(|f| f.len() == r.rank()), "{t}");
        }
    }

    #[test]
    fn compatibility_is_well_defined() {
        for (t, k) in [("A3", 2), ("B3", 2), ("G2", 3), ("D4", 1), ("A1xA2", 2), ("F4", 1)] {
            check_well_defined(&rs(t), k).unwrap();
        }
    }

    #[test]
    fn swapping_bipartition_keeps_f() {
        for (t, k) in [("A3", 2), ("B3", 1), ("G2", 2), ("A1xA2", 1)] {
            let r = rs(t);
            assert_eq!(f_triangle(&r, k).unwrap(), f_triangle(&r.with_swapped_bipartition(), k).unwrap());
        }
    }

    #[test]
    fn negative_part_of_f_is_boolean() {
        // faces made only of negative simple roots form a simplex
        let r = rs("B3");
        let f = f_triangle(&r, 2).unwrap();
        for m in 0..=3u32 {
            let binom = [1, 3, 3, 1][m as usize];
            assert_eq!(f.coeff(0, m), binom.into());
        }
    }
}
