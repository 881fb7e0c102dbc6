//! Weyl group elements, reflections, absolute length and absolute order.

use std::collections::{HashSet, VecDeque};
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::rootsys::{Root, RootSystem};

/// Default cap on the number of group elements [`Weyl::generate_group`] will
/// produce.
pub const DEFAULT_GROUP_BOUND: usize = 1_000_000;

/// Signed positive-root index: `r + 1` stands for root `r`, `-(r + 1)` for its
/// negative.
pub type SignedRoot = i32;

fn signed(r: usize, positive: bool) -> SignedRoot {
    let s = r as i32 + 1;
    if positive {
        s
    } else {
        -s
    }
}

/// An element of the Weyl group.
///
/// `perm[r]` is the image of positive root `r`; `matrix` is the action on
/// simple-root coordinates (row-major, column `j` is the image of simple
/// root `j`). Equality and hashing use `perm`.
#[derive(Debug, Clone)]
pub struct GroupElement {
    matrix: Vec<i64>,
    perm: Vec<SignedRoot>,
    n: usize,
}

impl PartialEq for GroupElement {
    fn eq(&self, other: &Self) -> bool {
        self.perm == other.perm
    }
}

impl Eq for GroupElement {}

impl Hash for GroupElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.perm.hash(state);
    }
}

impl GroupElement {
    pub fn matrix(&self) -> &[i64] {
        &self.matrix
    }

    pub fn perm(&self) -> &[SignedRoot] {
        &self.perm
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(r, &s)| s == r as i32 + 1)
    }

    /// Apply to a coefficient vector.
    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        let n = self.n;
        (0..n)
            .map(|i| (0..n).map(|j| self.matrix[i * n + j] * v[j]).sum())
            .collect()
    }

    /// Absolute length `l_T(w)`: the codimension of the fixed space, i.e. the
    /// rank of `w - 1`.
    pub fn absolute_length(&self) -> usize {
        let n = self.n;
        let mut m: Vec<Vec<i128>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| self.matrix[i * n + j] as i128 - i128::from(i == j))
                    .collect()
            })
            .collect();
        rank_i128(&mut m)
    }
}

/// Rank by fraction-free elimination.
fn rank_i128(m: &mut [Vec<i128>]) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(rank, p);
        for r in rank + 1..rows {
            if m[r][c] == 0 {
                continue;
            }
            let (a, b) = (m[rank][c], m[r][c]);
            let g = gcd(a, b);
            let (fa, fb) = (a / g, b / g);
            for k in c..cols {
                m[r][k] = m[r][k] * fa - m[rank][k] * fb;
            }
        }
        rank += 1;
    }
    rank
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// The reflections of the group, one per positive root.
#[derive(Debug, Clone)]
pub struct ReflectionSet {
    pub reflections: Vec<GroupElement>,
}

/// Group operations for the Weyl group of a fixed root system.
#[derive(Debug, Clone, Copy)]
pub struct Weyl<'a> {
    rs: &'a RootSystem,
}

impl<'a> Weyl<'a> {
    pub fn new(rs: &'a RootSystem) -> Self {
        Weyl { rs }
    }

    pub fn root_system(&self) -> &'a RootSystem {
        self.rs
    }

    fn signed_lookup(&self, v: &[i64]) -> Option<SignedRoot> {
        let r = Root::new(v.to_vec());
        if let Some(i) = self.rs.index_of(&r) {
            return Some(signed(i, true));
        }
        self.rs.index_of(&r.neg()).map(|i| signed(i, false))
    }

    /// Element with the given matrix; fails if it does not permute the roots.
    pub fn from_matrix(&self, matrix: Vec<i64>) -> Result<GroupElement> {
        let n = self.rs.rank();
        let mut el = GroupElement {
            matrix,
            perm: Vec::new(),
            n,
        };
        let mut perm = Vec::with_capacity(self.rs.num_positive());
        for r in self.rs.positive_roots() {
            let img = el.apply(r.coeffs());
            perm.push(self.signed_lookup(&img).ok_or_else(|| {
                Error::Invariant(format!("matrix sends root {r} outside the root system"))
            })?);
        }
        el.perm = perm;
        Ok(el)
    }

    pub fn identity(&self) -> GroupElement {
        let n = self.rs.rank();
        GroupElement {
            matrix: (0..n * n).map(|k| i64::from(k / n == k % n)).collect(),
            perm: (0..self.rs.num_positive()).map(|r| signed(r, true)).collect(),
            n,
        }
    }

    /// Reflection in the positive root with index `b`.
    pub fn reflection(&self, b: usize) -> GroupElement {
        let n = self.rs.rank();
        let beta = self.rs.root(b).coeffs();
        let mut matrix = vec![0; n * n];
        for j in 0..n {
            let mut e = vec![0; n];
            e[j] = 1;
            let p = self.rs.root_coroot_pairing(b, &e);
            for i in 0..n {
                matrix[i * n + j] = e[i] - p * beta[i];
            }
        }
        self.from_matrix(matrix).expect("reflections permute roots")
    }

    pub fn simple_reflection(&self, i: usize) -> GroupElement {
        self.reflection(i)
    }

    pub fn reflections(&self) -> ReflectionSet {
        ReflectionSet {
            reflections: (0..self.rs.num_positive()).map(|b| self.reflection(b)).collect(),
        }
    }

    /// `a * b` (apply `b` first).
    pub fn mul(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        let n = self.rs.rank();
        let mut matrix = vec![0; n * n];
        for i in 0..n {
            for k in 0..n {
                let x = a.matrix[i * n + k];
                if x == 0 {
                    continue;
                }
                for j in 0..n {
                    matrix[i * n + j] += x * b.matrix[k * n + j];
                }
            }
        }
        let perm = b
            .perm
            .iter()
            .map(|&s| {
                let img = a.perm[(s.unsigned_abs() - 1) as usize];
                if s > 0 {
                    img
                } else {
                    -img
                }
            })
            .collect();
        GroupElement { matrix, perm, n }
    }

    pub fn inverse(&self, w: &GroupElement) -> GroupElement {
        let n = self.rs.rank();
        let m = self.rs.num_positive();
        let mut perm = vec![0; m];
        for (r, &s) in w.perm.iter().enumerate() {
            let target = (s.unsigned_abs() - 1) as usize;
            perm[target] = signed(r, s > 0);
        }
        let mut matrix = vec![0; n * n];
        for j in 0..n {
            let s = perm[j];
            let root = self.rs.root((s.unsigned_abs() - 1) as usize).coeffs();
            let sign = if s > 0 { 1 } else { -1 };
            for i in 0..n {
                matrix[i * n + j] = sign * root[i];
            }
        }
        GroupElement { matrix, perm, n }
    }

    /// `u <=_T v` iff `l_T(u) + l_T(u^{-1} v) = l_T(v)`.
    pub fn absolute_leq(&self, u: &GroupElement, v: &GroupElement) -> bool {
        let q = self.mul(&self.inverse(u), v);
        u.absolute_length() + q.absolute_length() == v.absolute_length()
    }

    /// Product of the simple reflections in index order, `s_1 s_2 ... s_n`.
    pub fn coxeter_element(&self) -> GroupElement {
        let order: Vec<usize> = (0..self.rs.rank()).collect();
        self.coxeter_element_in_order(&order)
    }

    /// Product of the simple reflections in the given order; `order` must be
    /// a permutation of `0..rank`.
    pub fn coxeter_element_in_order(&self, order: &[usize]) -> GroupElement {
        order.iter().fold(self.identity(), |acc, &i| {
            self.mul(&acc, &self.simple_reflection(i))
        })
    }

    pub fn multiplicative_order(&self, w: &GroupElement) -> usize {
        let mut p = w.clone();
        let mut k = 1;
        while !p.is_identity() {
            p = self.mul(&p, w);
            k += 1;
        }
        k
    }

    /// All group elements, identity first, by breadth-first closure under the
    /// simple reflections.
    pub fn generate_group(&self, bound: usize) -> Result<Vec<GroupElement>> {
        let gens: Vec<GroupElement> = (0..self.rs.rank()).map(|i| self.simple_reflection(i)).collect();
        let id = self.identity();
        let mut seen: HashSet<GroupElement> = HashSet::from([id.clone()]);
        let mut out = vec![id.clone()];
        let mut queue = VecDeque::from([id]);
        while let Some(w) = queue.pop_front() {
            for g in &gens {
                let next = self.mul(&w, g);
                if seen.insert(next.clone()) {
                    if out.len() >= bound {
                        return Err(Error::Resource(format!(
                            "Weyl group of {} has more than {bound} elements",
                            self.rs.type_spec()
                        )));
                    }
                    out.push(next.clone());
                    queue.push_back(next);
                }
            }
        }
        Ok(out)
    }

    /// A shortest factorisation `w = t_1 t_2 ... t_l` into reflections, as
    /// positive-root indices.
    pub fn reflection_word(&self, w: &GroupElement) -> Vec<usize> {
        let mut word = Vec::new();
        let mut cur = w.clone();
        let mut len = cur.absolute_length();
        while len > 0 {
            let (b, next) = (0..self.rs.num_positive())
                .map(|b| (b, self.mul(&self.reflection(b), &cur)))
                .find(|(_, nx)| nx.absolute_length() + 1 == len)
                .expect("some reflection shortens a non-identity element");
            word.push(b);
            cur = next;
            len -= 1;
        }
        word
    }

    /// Elements of the interval `[e, c]` in absolute order, found by
    /// stripping reflections off the right of `c` one at a time.
    pub fn interval_below(&self, c: &GroupElement) -> Vec<GroupElement> {
        let refl = self.reflections().reflections;
        let mut level = vec![c.clone()];
        let mut seen: HashSet<GroupElement> = HashSet::from([c.clone()]);
        let mut out = vec![c.clone()];
        let mut len = c.absolute_length();
        while len > 0 {
            let mut next_level = Vec::new();
            for w in &level {
                for t in &refl {
                    let u = self.mul(w, t);
                    if u.absolute_length() + 1 == len && seen.insert(u.clone()) {
                        next_level.push(u.clone());
                        out.push(u);
                    }
                }
            }
            level = next_level;
            len -= 1;
        }
        out
    }
}

/// Convenience wrapper over [`Weyl::generate_group`].
pub fn generate_group(rs: &RootSystem, bound: usize) -> Result<Vec<GroupElement>> {
    Weyl::new(rs).generate_group(bound)
}
