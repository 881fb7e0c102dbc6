//! Crystallographic root systems given by Cartan matrices.
//!
//! Roots live only as integer coefficient vectors over the simple roots.
//! Cartan matrices use Bourbaki numbering and the convention
//! `a[i][j] = <alpha_i^vee, alpha_j>`, so the simple reflection acts by
//! `s_i(v) = v - (sum_j a[i][j] v_j) alpha_i`.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use crate::error::{invariant, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }

    fn from_letter(c: char) -> Option<Self> {
        Some(match c.to_ascii_uppercase() {
            'A' => Family::A,
            'B' => Family::B,
            'C' => Family::C,
            'D' => Family::D,
            'E' => Family::E,
            'F' => Family::F,
            'G' => Family::G,
            _ => return None,
        })
    }

    pub fn valid_rank(self, n: usize) -> bool {
        match self {
            Family::A => n >= 1,
            Family::B | Family::C => n >= 2,
            Family::D => n >= 4,
            Family::E => (6..=8).contains(&n),
            Family::F => n == 4,
            Family::G => n == 2,
        }
    }
}

/// One irreducible factor of a [`TypeSpec`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Factor {
    pub family: Family,
    pub rank: usize,
}

impl Factor {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        if !family.valid_rank(rank) {
            return Err(Error::Usage(format!(
                "no root system of type {}{rank}",
                family.letter()
            )));
        }
        Ok(Factor { family, rank })
    }

    pub fn positive_root_count(self) -> usize {
        let n = self.rank;
        match self.family {
            Family::A => n * (n + 1) / 2,
            Family::B | Family::C => n * n,
            Family::D => n * (n - 1),
            Family::E => match n {
                6 => 36,
                7 => 63,
                _ => 120,
            },
            Family::F => 24,
            Family::G => 6,
        }
    }

    /// Degrees of the basic invariants.
    pub fn degrees(self) -> Vec<u64> {
        let n = self.rank as u64;
        match self.family {
            Family::A => (2..=n + 1).collect(),
            Family::B | Family::C => (1..=n).map(|i| 2 * i).collect(),
            Family::D => {
                let mut d: Vec<u64> = (1..n).map(|i| 2 * i).collect();
                d.push(n);
                d.sort_unstable();
                d
            }
            Family::E => match n {
                6 => vec![2, 5, 6, 8, 9, 12],
                7 => vec![2, 6, 8, 10, 12, 14, 18],
                _ => vec![2, 8, 12, 14, 18, 20, 24, 30],
            },
            Family::F => vec![2, 6, 8, 12],
            Family::G => vec![2, 6],
        }
    }

    fn bourbaki_cartan(self) -> Vec<Vec<i64>> {
        let n = self.rank;
        let mut a = vec![vec![0i64; n]; n];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        let link = |a: &mut Vec<Vec<i64>>, i: usize, j: usize| {
            a[i][j] = -1;
            a[j][i] = -1;
        };
        match self.family {
            Family::A => (0..n - 1).for_each(|i| link(&mut a, i, i + 1)),
            Family::B => {
                (0..n - 1).for_each(|i| link(&mut a, i, i + 1));
                // alpha_n short
                a[n - 1][n - 2] = -2;
            }
            Family::C => {
                (0..n - 1).for_each(|i| link(&mut a, i, i + 1));
                // alpha_n long
                a[n - 2][n - 1] = -2;
            }
            Family::D => {
                (0..n - 2).for_each(|i| link(&mut a, i, i + 1));
                link(&mut a, n - 3, n - 1);
            }
            Family::E => {
                link(&mut a, 0, 2);
                link(&mut a, 1, 3);
                (2..n - 1).for_each(|i| link(&mut a, i, i + 1));
            }
            Family::F => {
                link(&mut a, 0, 1);
                link(&mut a, 1, 2);
                link(&mut a, 2, 3);
                // alpha_3, alpha_4 short
                a[2][1] = -2;
            }
            Family::G => {
                // alpha_1 short
                a[0][1] = -3;
                a[1][0] = -1;
            }
        }
        a
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.rank)
    }
}

/// Cartan type of a (possibly reducible) root system, e.g. `B3` or `A1xA1`.
///
/// The rank-0 system prints as `trivial`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct TypeSpec {
    factors: Vec<Factor>,
}

impl TypeSpec {
    pub fn new(factors: Vec<Factor>) -> Self {
        TypeSpec { factors }
    }

    pub fn irreducible(family: Family, rank: usize) -> Result<Self> {
        Ok(TypeSpec {
            factors: vec![Factor::new(family, rank)?],
        })
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.iter().map(|f| f.rank).sum()
    }

    pub fn is_irreducible(&self) -> bool {
        self.factors.len() == 1
    }
}

impl FromStr for TypeSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("trivial") {
            return Ok(TypeSpec::default());
        }
        let mut factors = Vec::new();
        for part in s.split(['x', 'X']) {
            let mut chars = part.chars();
            let family = chars
                .next()
                .and_then(Family::from_letter)
                .ok_or_else(|| Error::Usage(format!("bad type factor {part:?} in {s:?}")))?;
            let rank: usize = chars
                .as_str()
                .parse()
                .map_err(|_| Error::Usage(format!("bad rank in factor {part:?}")))?;
            factors.push(Factor::new(family, rank)?);
        }
        Ok(TypeSpec { factors })
    }
}

impl fmt::Display for TypeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("trivial");
        }
        for (i, factor) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str("x")?;
            }
            write!(f, "{factor}")?;
        }
        Ok(())
    }
}

/// A root written in the basis of simple roots.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Root(Vec<i64>);

impl Root {
    pub fn new(coeffs: Vec<i64>) -> Self {
        Root(coeffs)
    }

    pub fn simple(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        Root(v)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn height(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|&c| c >= 0) && self.0.iter().any(|&c| c > 0)
    }

    pub fn neg(&self) -> Root {
        Root(self.0.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if c < 0 {
                f.write_str("-")?;
            } else if !first {
                f.write_str("+")?;
            }
            if c.abs() != 1 {
                write!(f, "{}", c.abs())?;
            }
            write!(f, "a{}", i + 1)?;
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// A set of positive roots as a bitmask over root indices.
///
/// Capacity is 128 roots, enough for every type up to `E8`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct RootSet(u128);

impl RootSet {
    pub const EMPTY: RootSet = RootSet(0);

    pub fn full(len: usize) -> Self {
        if len == 128 {
            RootSet(u128::MAX)
        } else {
            RootSet((1u128 << len) - 1)
        }
    }

    pub fn from_bits(bits: u128) -> Self {
        RootSet(bits)
    }

    pub fn bits(self) -> u128 {
        self.0
    }

    pub fn singleton(i: usize) -> Self {
        RootSet(1u128 << i)
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1u128 << i;
    }

    pub fn remove(&mut self, i: usize) {
        self.0 &= !(1u128 << i);
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: RootSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: RootSet) -> Self {
        RootSet(self.0 | other.0)
    }

    pub fn intersection(self, other: RootSet) -> Self {
        RootSet(self.0 & other.0)
    }

    pub fn difference(self, other: RootSet) -> Self {
        RootSet(self.0 & !other.0)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(i)
        })
    }
}

impl FromIterator<usize> for RootSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        let mut s = RootSet::EMPTY;
        for i in iter {
            s.insert(i);
        }
        s
    }
}

/// An irreducible component of a root system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub factor: Factor,
    /// Simple-root indices of the component, ascending.
    pub simple: Vec<usize>,
    /// Positive-root indices supported on the component.
    pub roots: Vec<usize>,
    pub highest_root: usize,
    pub coxeter_number: usize,
}

#[derive(Debug, Clone)]
pub struct RootSystem {
    type_spec: TypeSpec,
    cartan: Vec<Vec<i64>>,
    form: Vec<Vec<i64>>,
    roots: Vec<Root>,
    lookup: HashMap<Root, usize>,
    components: Vec<Component>,
    plus_part: Vec<bool>,
    sums: Vec<(usize, usize, usize)>,
    sums_to: Vec<Vec<(usize, usize)>>,
}

/// A parabolic subsystem together with its embedding into the parent.
#[derive(Debug, Clone)]
pub struct Parabolic {
    pub system: RootSystem,
    /// Parent simple-root index of each simple root of `system`.
    pub kept: Vec<usize>,
    /// Parent positive-root index of each positive root of `system`.
    pub embed: Vec<usize>,
}

impl Parabolic {
    /// Index in the subsystem of a parent root, if it lies in the subsystem.
    pub fn pull(&self, parent_root: usize) -> Option<usize> {
        self.embed.iter().position(|&p| p == parent_root)
    }

    pub fn push_set(&self, set: RootSet) -> RootSet {
        set.iter().map(|i| self.embed[i]).collect()
    }

    pub fn pull_set(&self, set: RootSet) -> RootSet {
        self.embed
            .iter()
            .enumerate()
            .filter(|(_, &p)| set.contains(p))
            .map(|(i, _)| i)
            .collect()
    }
}

/// Build the root system of a given Cartan type.
pub fn build_root_system(t: &TypeSpec) -> Result<RootSystem> {
    RootSystem::new(t)
}

impl RootSystem {
    pub fn new(t: &TypeSpec) -> Result<Self> {
        let n = t.rank();
        let mut cartan = vec![vec![0; n]; n];
        let mut offset = 0;
        for factor in t.factors() {
            let block = factor.bourbaki_cartan();
            for (i, row) in block.iter().enumerate() {
                for (j, &a) in row.iter().enumerate() {
                    cartan[offset + i][offset + j] = a;
                }
            }
            offset += factor.rank;
        }
        let rs = Self::with_type(cartan, t.clone())?;
        for (comp, factor) in rs.components.iter().zip(t.factors()) {
            invariant!(
                comp.factor.rank == factor.rank,
                "component decomposition of {t} does not match its factors"
            );
        }
        Ok(rs)
    }

    /// Build from an arbitrary finite-type Cartan matrix; the type is read off
    /// the Coxeter diagram.
    pub fn from_cartan(cartan: Vec<Vec<i64>>) -> Result<Self> {
        let comps = connected_components(&cartan);
        let mut factors = Vec::with_capacity(comps.len());
        for nodes in &comps {
            factors.push(classify_component(&cartan, nodes)?);
        }
        Self::with_type(cartan, TypeSpec::new(factors))
    }

    fn with_type(cartan: Vec<Vec<i64>>, type_spec: TypeSpec) -> Result<Self> {
        let n = cartan.len();
        let comp_nodes = connected_components(&cartan);
        invariant!(
            comp_nodes.len() == type_spec.factors().len(),
            "Cartan matrix has {} components but type {type_spec} has {}",
            comp_nodes.len(),
            type_spec.factors().len()
        );
        let form = symmetrise(&cartan)?;

        let mut roots: Vec<Root> = (0..n).map(|i| Root::simple(n, i)).collect();
        let mut lookup: HashMap<Root, usize> =
            roots.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
        let mut queue: VecDeque<usize> = (0..n).collect();
        while let Some(r) = queue.pop_front() {
            for i in 0..n {
                let image = Root(reflect(&cartan, i, roots[r].coeffs()));
                if image.is_positive() && !lookup.contains_key(&image) {
                    invariant!(roots.len() < 128, "more than 128 positive roots");
                    lookup.insert(image.clone(), roots.len());
                    queue.push_back(roots.len());
                    roots.push(image);
                }
            }
        }
        roots.sort_by(|a, b| a.height().cmp(&b.height()).then_with(|| b.cmp(a)));
        let lookup: HashMap<Root, usize> =
            roots.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();

        let mut sums = Vec::new();
        let mut sums_to = vec![Vec::new(); roots.len()];
        for a in 0..roots.len() {
            for b in a + 1..roots.len() {
                let s = Root(
                    roots[a]
                        .coeffs()
                        .iter()
                        .zip(roots[b].coeffs())
                        .map(|(x, y)| x + y)
                        .collect(),
                );
                if let Some(&c) = lookup.get(&s) {
                    sums.push((a, b, c));
                    sums_to[c].push((a, b));
                }
            }
        }

        let mut components = Vec::new();
        for (nodes, factor) in comp_nodes.iter().zip(type_spec.factors()) {
            let comp_roots: Vec<usize> = (0..roots.len())
                .filter(|&r| nodes.contains(&first_support(&roots[r])))
                .collect();
            invariant!(
                comp_roots.len() == factor.positive_root_count(),
                "{factor} produced {} positive roots, expected {}",
                comp_roots.len(),
                factor.positive_root_count()
            );
            let highest = *comp_roots.last().expect("nonempty component");
            components.push(Component {
                factor: *factor,
                simple: nodes.clone(),
                coxeter_number: 2 * comp_roots.len() / nodes.len(),
                highest_root: highest,
                roots: comp_roots,
            });
        }

        let mut plus_part = vec![false; n];
        let mut seen = vec![false; n];
        for nodes in &comp_nodes {
            let start = nodes[0];
            seen[start] = true;
            plus_part[start] = true;
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for v in 0..n {
                    if v != u && cartan[u][v] != 0 {
                        if !seen[v] {
                            seen[v] = true;
                            plus_part[v] = !plus_part[u];
                            queue.push_back(v);
                        }
                        invariant!(plus_part[v] != plus_part[u], "Coxeter diagram not bipartite");
                    }
                }
            }
        }

        Ok(RootSystem {
            type_spec,
            cartan,
            form,
            roots,
            lookup,
            components,
            plus_part,
            sums,
            sums_to,
        })
    }

    pub fn type_spec(&self) -> &TypeSpec {
        &self.type_spec
    }

    pub fn rank(&self) -> usize {
        self.cartan.len()
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    /// Symmetrised bilinear form on the simple roots, scaled to integers.
    pub fn form(&self) -> &[Vec<i64>] {
        &self.form
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn num_positive(&self) -> usize {
        self.roots.len()
    }

    pub fn root(&self, i: usize) -> &Root {
        &self.roots[i]
    }

    pub fn index_of(&self, r: &Root) -> Option<usize> {
        self.lookup.get(r).copied()
    }

    pub fn all_roots(&self) -> RootSet {
        RootSet::full(self.roots.len())
    }

    /// Simple roots carry indices `0..rank`.
    pub fn simple_roots(&self) -> RootSet {
        RootSet::full(self.rank())
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn is_irreducible(&self) -> bool {
        self.components.len() == 1
    }

    /// Coxeter number of an irreducible system.
    pub fn coxeter_number(&self) -> Result<usize> {
        match self.components.as_slice() {
            [c] => Ok(c.coxeter_number),
            _ => Err(Error::Precondition(format!(
                "{} is not irreducible",
                self.type_spec
            ))),
        }
    }

    /// Largest Coxeter number among the components (0 for rank 0).
    pub fn max_coxeter_number(&self) -> usize {
        self.components
            .iter()
            .map(|c| c.coxeter_number)
            .max()
            .unwrap_or(0)
    }

    pub fn highest_root(&self) -> Result<&Root> {
        match self.components.as_slice() {
            [c] => Ok(&self.roots[c.highest_root]),
            _ => Err(Error::Precondition(format!(
                "{} is not irreducible",
                self.type_spec
            ))),
        }
    }

    /// Whether simple root `i` lies in the `+` part of the bipartition.
    pub fn in_plus_part(&self, i: usize) -> bool {
        self.plus_part[i]
    }

    pub fn bipartition(&self) -> &[bool] {
        &self.plus_part
    }

    /// The same root system with the two parts of the bipartition swapped.
    pub fn with_swapped_bipartition(&self) -> Self {
        let mut rs = self.clone();
        rs.plus_part.iter_mut().for_each(|p| *p = !*p);
        rs
    }

    pub fn root_leq(&self, a: usize, b: usize) -> bool {
        self.roots[a]
            .coeffs()
            .iter()
            .zip(self.roots[b].coeffs())
            .all(|(x, y)| x <= y)
    }

    pub fn support(&self, b: usize) -> Vec<usize> {
        self.roots[b]
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, _)| i)
            .collect()
    }

    /// All positive roots having simple root `a` in their support.
    pub fn filter_generated(&self, a: usize) -> RootSet {
        (0..self.roots.len())
            .filter(|&r| self.roots[r].coeffs()[a] != 0)
            .collect()
    }

    /// Unordered triples `(a, b, c)` with `a < b` and `root a + root b = root c`.
    pub fn sum_triples(&self) -> &[(usize, usize, usize)] {
        &self.sums
    }

    /// Unordered pairs of positive roots summing to root `c`.
    pub fn sums_to(&self, c: usize) -> &[(usize, usize)] {
        &self.sums_to[c]
    }

    /// `(A + B) ∩ Φ⁺` for root sets `A`, `B`.
    pub fn sumset(&self, a: RootSet, b: RootSet) -> RootSet {
        let mut out = RootSet::EMPTY;
        for &(x, y, z) in &self.sums {
            if (a.contains(x) && b.contains(y)) || (a.contains(y) && b.contains(x)) {
                out.insert(z);
            }
        }
        out
    }

    /// `<alpha_i^vee, v>` for `v` in simple-root coordinates.
    pub fn coroot_pairing(&self, i: usize, v: &[i64]) -> i64 {
        self.cartan[i].iter().zip(v).map(|(a, x)| a * x).sum()
    }

    pub fn reflect_simple(&self, i: usize, v: &[i64]) -> Vec<i64> {
        reflect(&self.cartan, i, v)
    }

    /// Symmetric bilinear form evaluated on coefficient vectors.
    pub fn inner(&self, u: &[i64], v: &[i64]) -> i64 {
        let mut s = 0;
        for (i, &ui) in u.iter().enumerate() {
            if ui == 0 {
                continue;
            }
            for (j, &vj) in v.iter().enumerate() {
                s += ui * self.form[i][j] * vj;
            }
        }
        s
    }

    /// `<beta^vee, v>` for the positive root with index `b`.
    pub fn root_coroot_pairing(&self, b: usize, v: &[i64]) -> i64 {
        let beta = self.roots[b].coeffs();
        let num = 2 * self.inner(beta, v);
        let den = self.inner(beta, beta);
        debug_assert_eq!(num % den, 0);
        num / den
    }

    /// Squared length of a root under [`RootSystem::form`].
    pub fn norm(&self, b: usize) -> i64 {
        let beta = self.roots[b].coeffs();
        self.inner(beta, beta)
    }

    /// Long roots of the component containing `b`; in simply-laced
    /// components every root counts as long.
    pub fn is_long(&self, b: usize) -> bool {
        let comp = self
            .components
            .iter()
            .find(|c| c.roots.contains(&b))
            .expect("root belongs to a component");
        let max = comp.roots.iter().map(|&r| self.norm(r)).max().unwrap();
        self.norm(b) == max
    }

    /// Subsystem spanned by the simple roots in `keep`, in the given order.
    pub fn restrict(&self, keep: &[usize]) -> Result<Parabolic> {
        let cartan: Vec<Vec<i64>> = keep
            .iter()
            .map(|&i| keep.iter().map(|&j| self.cartan[i][j]).collect())
            .collect();
        let system = RootSystem::from_cartan(cartan)?;
        let mut embed = Vec::with_capacity(system.num_positive());
        for r in system.positive_roots() {
            let mut coeffs = vec![0; self.rank()];
            for (k, &i) in keep.iter().enumerate() {
                coeffs[i] = r.coeffs()[k];
            }
            let parent = self.index_of(&Root(coeffs)).ok_or_else(|| {
                Error::Invariant(format!("subsystem root {r} missing from {}", self.type_spec))
            })?;
            embed.push(parent);
        }
        Ok(Parabolic {
            system,
            kept: keep.to_vec(),
            embed,
        })
    }

    /// The parabolic subsystem with simple system `S \ {remove}`.
    pub fn parabolic(&self, remove: usize) -> Result<Parabolic> {
        if remove >= self.rank() {
            return Err(Error::Precondition(format!(
                "simple index {remove} out of range for rank {}",
                self.rank()
            )));
        }
        let keep: Vec<usize> = (0..self.rank()).filter(|&i| i != remove).collect();
        self.restrict(&keep)
    }

    /// The irreducible components as standalone systems.
    pub fn factor_systems(&self) -> Result<Vec<Parabolic>> {
        self.components.iter().map(|c| self.restrict(&c.simple)).collect()
    }
}

fn reflect(cartan: &[Vec<i64>], i: usize, v: &[i64]) -> Vec<i64> {
    let p: i64 = cartan[i].iter().zip(v).map(|(a, x)| a * x).sum();
    let mut out = v.to_vec();
    out[i] -= p;
    out
}

fn first_support(r: &Root) -> usize {
    r.coeffs().iter().position(|&c| c != 0).expect("nonzero root")
}

fn connected_components(cartan: &[Vec<i64>]) -> Vec<Vec<usize>> {
    let n = cartan.len();
    let mut comp = vec![usize::MAX; n];
    let mut out = Vec::new();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut nodes = vec![s];
        comp[s] = id;
        let mut k = 0;
        while k < nodes.len() {
            let u = nodes[k];
            for v in 0..n {
                if v != u && cartan[u][v] != 0 && comp[v] == usize::MAX {
                    comp[v] = id;
                    nodes.push(v);
                }
            }
            k += 1;
        }
        nodes.sort_unstable();
        out.push(nodes);
    }
    out
}

/// Scale factors `d_i` with `d_i a[i][j] = d_j a[j][i]`, returned as the
/// integer symmetric matrix `d_i a[i][j]`.
fn symmetrise(cartan: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    let n = cartan.len();
    // d as fractions num/den
    let mut d: Vec<Option<(i64, i64)>> = vec![None; n];
    for nodes in connected_components(cartan) {
        d[nodes[0]] = Some((1, 1));
        let mut stack = vec![nodes[0]];
        while let Some(u) = stack.pop() {
            let (p, q) = d[u].unwrap();
            for v in 0..n {
                if v == u || cartan[u][v] == 0 {
                    continue;
                }
                // d_v = d_u a[u][v] / a[v][u]
                let (mut p2, mut q2) = (p * cartan[u][v], q * cartan[v][u]);
                if q2 < 0 {
                    p2 = -p2;
                    q2 = -q2;
                }
                let g = p2.gcd(&q2);
                let dv = (p2 / g, q2 / g);
                match d[v] {
                    None => {
                        d[v] = Some(dv);
                        stack.push(v);
                    }
                    Some(old) => invariant!(old == dv, "Cartan matrix is not symmetrisable"),
                }
            }
        }
    }
    let lcm = d.iter().fold(1i64, |acc, x| acc.lcm(&x.unwrap().1));
    let scale: Vec<i64> = d.iter().map(|x| x.unwrap().0 * lcm / x.unwrap().1).collect();
    let form: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| scale[i] * cartan[i][j]).collect())
        .collect();
    for i in 0..n {
        for j in 0..n {
            invariant!(form[i][j] == form[j][i], "symmetrisation failed");
        }
    }
    Ok(form)
}

/// Identify the Cartan type of a connected Coxeter diagram.
fn classify_component(cartan: &[Vec<i64>], nodes: &[usize]) -> Result<Factor> {
    let n = nodes.len();
    let bad = || Error::Invariant(format!("Cartan submatrix on {nodes:?} is not of finite type"));
    if n == 1 {
        return Factor::new(Family::A, 1);
    }
    let mut edges = Vec::new();
    let mut degree: HashMap<usize, usize> = nodes.iter().map(|&u| (u, 0)).collect();
    for (x, &u) in nodes.iter().enumerate() {
        for &v in &nodes[x + 1..] {
            if cartan[u][v] != 0 {
                let mult = cartan[u][v] * cartan[v][u];
                edges.push((u, v, mult));
                *degree.get_mut(&u).unwrap() += 1;
                *degree.get_mut(&v).unwrap() += 1;
            }
        }
    }
    if edges.len() != n - 1 {
        return Err(bad());
    }
    let heavy: Vec<_> = edges.iter().filter(|e| e.2 > 1).collect();
    let max_degree = degree.values().copied().max().unwrap();
    match heavy.as_slice() {
        [] => {
            if max_degree <= 2 {
                return Factor::new(Family::A, n);
            }
            let branch: Vec<usize> = degree
                .iter()
                .filter(|(_, &d)| d == 3)
                .map(|(&u, _)| u)
                .collect();
            if branch.len() != 1 || max_degree > 3 {
                return Err(bad());
            }
            let b = branch[0];
            let mut arms = Vec::new();
            for &(u, v, _) in &edges {
                let start = if u == b {
                    v
                } else if v == b {
                    u
                } else {
                    continue;
                };
                // walk the arm away from the branch node
                let (mut prev, mut cur, mut len) = (b, start, 1);
                loop {
                    let next = nodes
                        .iter()
                        .copied()
                        .find(|&w| w != prev && w != cur && cartan[cur][w] != 0);
                    match next {
                        Some(w) => {
                            prev = cur;
                            cur = w;
                            len += 1;
                        }
                        None => break,
                    }
                }
                arms.push(len);
            }
            arms.sort_unstable();
            match arms.as_slice() {
                [1, 1, _] => Factor::new(Family::D, n),
                [1, 2, 2] => Factor::new(Family::E, 6),
                [1, 2, 3] => Factor::new(Family::E, 7),
                [1, 2, 4] => Factor::new(Family::E, 8),
                _ => Err(bad()),
            }
        }
        [&(u, v, 2)] => {
            if max_degree > 2 {
                return Err(bad());
            }
            if n == 2 {
                return Factor::new(Family::B, 2);
            }
            let (du, dv) = (degree[&u], degree[&v]);
            if du == 2 && dv == 2 {
                return if n == 4 { Factor::new(Family::F, 4) } else { Err(bad()) };
            }
            let (end, inner) = if du == 1 { (u, v) } else { (v, u) };
            // a[end][inner] = -2 means the end root is short
            if cartan[end][inner] == -2 {
                Factor::new(Family::B, n)
            } else {
                Factor::new(Family::C, n)
            }
        }
        [&(_, _, 3)] if n == 2 => Factor::new(Family::G, 2),
        _ => Err(bad()),
    }
}
