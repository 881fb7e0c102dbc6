//! `k`-divisible noncrossing partitions as `k`-delta sequences, their rank
//! function, Möbius function and the M-triangle.

use std::collections::HashMap;

use crate::error::{invariant, Error, Result};
use crate::poly::BivarPoly;
use crate::rootsys::RootSystem;
use crate::weyl::{GroupElement, Weyl};

/// The interval `[e, c]` in absolute order, with its order relation and the
/// quotients `u^{-1} v` for `u <= v`.
#[derive(Debug, Clone)]
pub struct NcInterval {
    pub coxeter: GroupElement,
    pub elements: Vec<GroupElement>,
    pub lengths: Vec<usize>,
    index: HashMap<GroupElement, usize>,
    /// `quotient[u][v] = Some(index of u^{-1} v)` iff `u <=_T v`.
    quotient: Vec<Vec<Option<usize>>>,
}

impl NcInterval {
    pub fn new(rs: &RootSystem, c: GroupElement) -> Result<Self> {
        let w = Weyl::new(rs);
        invariant!(c.absolute_length() == rs.rank(), "c has absolute length below the rank");
        let elements = w.interval_below(&c);
        let lengths: Vec<usize> = elements.iter().map(|e| e.absolute_length()).collect();
        let index: HashMap<GroupElement, usize> =
            elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let inverses: Vec<GroupElement> = elements.iter().map(|e| w.inverse(e)).collect();
        let m = elements.len();
        let mut quotient = vec![vec![None; m]; m];
        for u in 0..m {
            for v in 0..m {
                if lengths[u] > lengths[v] {
                    continue;
                }
                let q = w.mul(&inverses[u], &elements[v]);
                if lengths[u] + q.absolute_length() == lengths[v] {
                    let qi = index.get(&q).copied();
                    invariant!(qi.is_some(), "quotient escaped the interval");
                    quotient[u][v] = qi;
                }
            }
        }
        Ok(NcInterval {
            coxeter: c,
            elements,
            lengths,
            index,
            quotient,
        })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, w: &GroupElement) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn leq(&self, u: usize, v: usize) -> bool {
        self.quotient[u][v].is_some()
    }

    pub fn identity(&self) -> usize {
        self.lengths.iter().position(|&l| l == 0).expect("identity in [e, c]")
    }

    pub fn top(&self) -> usize {
        self.index[&self.coxeter]
    }
}

/// `(δ_0, δ_1, ..., δ_k)` as indices into an [`NcInterval`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DeltaSequence {
    pub parts: Vec<usize>,
}

/// Every length-additive factorisation `c = δ_0 δ_1 ... δ_k`.
pub fn enumerate_delta_sequences(iv: &NcInterval, k: usize) -> Vec<DeltaSequence> {
    fn rec(iv: &NcInterval, k: usize, rest: usize, parts: &mut Vec<usize>, out: &mut Vec<DeltaSequence>) {
        if parts.len() == k {
            parts.push(rest);
            out.push(DeltaSequence { parts: parts.clone() });
            parts.pop();
            return;
        }
        for d in 0..iv.len() {
            if let Some(q) = iv.quotient[d][rest] {
                parts.push(d);
                rec(iv, k, q, parts, out);
                parts.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(iv, k, iv.top(), &mut Vec::with_capacity(k + 1), &mut out);
    out
}

#[derive(Debug, Clone)]
pub struct NcPoset {
    pub k: usize,
    pub n: usize,
    pub interval: NcInterval,
    pub elements: Vec<DeltaSequence>,
    pub ranks: Vec<usize>,
}

impl NcPoset {
    /// `NC_(k)` for the Coxeter element `s_1 s_2 ... s_n`.
    pub fn new(rs: &RootSystem, k: usize) -> Result<Self> {
        Self::with_coxeter(rs, k, Weyl::new(rs).coxeter_element())
    }

    pub fn with_coxeter(rs: &RootSystem, k: usize, c: GroupElement) -> Result<Self> {
        if k == 0 {
            return Err(Error::Precondition("k must be at least 1".into()));
        }
        let interval = NcInterval::new(rs, c)?;
        let elements = enumerate_delta_sequences(&interval, k);
        let n = rs.rank();
        let ranks = elements.iter().map(|d| n - interval.lengths[d.parts[0]]).collect();
        Ok(NcPoset {
            k,
            n,
            interval,
            elements,
            ranks,
        })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn rank(&self, a: usize) -> usize {
        self.ranks[a]
    }

    /// `δ <= ε` iff `δ_i <=_T ε_i` for `i = 1..=k`.
    pub fn leq(&self, a: usize, b: usize) -> bool {
        let (d, e) = (&self.elements[a].parts, &self.elements[b].parts);
        (1..=self.k).all(|i| self.interval.leq(d[i], e[i]))
    }

    /// Elements of rank `n - i`.
    pub fn narayana(&self, i: usize) -> usize {
        self.ranks.iter().filter(|&&r| r + i == self.n).count()
    }

    pub fn narayana_numbers(&self) -> Vec<usize> {
        (0..=self.n).map(|i| self.narayana(i)).collect()
    }

    /// Principal up-sets sorted by rank, `ups[a]` starting with `a`.
    fn up_sets(&self) -> Vec<Vec<usize>> {
        let mut by_rank: Vec<usize> = (0..self.len()).collect();
        by_rank.sort_by_key(|&a| self.ranks[a]);
        (0..self.len())
            .map(|a| by_rank.iter().copied().filter(|&b| self.leq(a, b)).collect())
            .collect()
    }

    /// `μ(a, b)` for every comparable pair, row `a` aligned with the up-set
    /// of `a`.
    pub fn moebius_table(&self) -> Vec<Vec<(usize, i64)>> {
        self.up_sets()
            .into_iter()
            .map(|up| {
                let mut mu: Vec<i64> = Vec::with_capacity(up.len());
                for (j, &b) in up.iter().enumerate() {
                    if j == 0 {
                        mu.push(1);
                        continue;
                    }
                    let s: i64 = (0..j)
                        .filter(|&i| up[i] != b && self.ranks[up[i]] < self.ranks[b] && self.leq(up[i], b))
                        .map(|i| mu[i])
                        .sum();
                    mu.push(-s);
                }
                up.into_iter().zip(mu).collect()
            })
            .collect()
    }

    pub fn moebius(&self, a: usize, b: usize) -> Result<i64> {
        if !self.leq(a, b) {
            return Err(Error::Precondition("Möbius function of an incomparable pair".into()));
        }
        let up = self.up_sets().swap_remove(a);
        let mut mu: HashMap<usize, i64> = HashMap::from([(a, 1)]);
        for &y in up.iter().skip(1) {
            if !self.leq(y, b) {
                continue;
            }
            let s: i64 = mu
                .iter()
                .filter(|&(&z, _)| self.ranks[z] < self.ranks[y] && self.leq(z, y))
                .map(|(_, m)| m)
                .sum();
            mu.insert(y, -s);
        }
        Ok(mu[&b])
    }

    /// `M = sum over δ <= ε of μ(δ, ε) x^(n - rk ε) y^(n - rk δ)`.
    pub fn m_triangle(&self) -> BivarPoly {
        let mut p = BivarPoly::zero();
        for (a, row) in self.moebius_table().into_iter().enumerate() {
            for (b, mu) in row {
                p.add_term(
                    (self.n - self.ranks[b]) as u32,
                    (self.n - self.ranks[a]) as u32,
                    mu.into(),
                );
            }
        }
        p
    }

    /// Every cover relation raises the rank by one and `(c, e, ..., e)` is
    /// the unique minimum.
    pub fn check_graded(&self) -> Result<()> {
        let e = self.interval.identity();
        let c = self.interval.top();
        let mut bottom = vec![e; self.k + 1];
        bottom[0] = c;
        let bottoms: Vec<usize> = (0..self.len()).filter(|&a| self.ranks[a] == 0).collect();
        invariant!(
            bottoms.len() == 1 && self.elements[bottoms[0]].parts == bottom,
            "minimum of NC_(k) is not (c, e, ..., e)"
        );
        invariant!((0..self.len()).all(|a| self.leq(bottoms[0], a)), "(c, e, ..., e) is not below everything");
        for up in self.up_sets() {
            let a = up[0];
            for &b in &up[1..] {
                let covered = !up[1..]
                    .iter()
                    .any(|&z| z != b && self.ranks[z] < self.ranks[b] && self.leq(z, b));
                if covered {
                    invariant!(
                        self.ranks[b] == self.ranks[a] + 1,
                        "cover relation jumps from rank {} to {}",
                        self.ranks[a],
                        self.ranks[b]
                    );
                }
            }
        }
        Ok(())
    }

    /// Elements as lists of reflection words (positive-root indices).
    pub fn to_json(&self, rs: &RootSystem) -> String {
        let w = Weyl::new(rs);
        let words: Vec<Vec<usize>> = self.interval.elements.iter().map(|g| w.reflection_word(g)).collect();
        let v: Vec<Vec<&Vec<usize>>> = self
            .elements
            .iter()
            .map(|d| d.parts.iter().map(|&p| &words[p]).collect())
            .collect();
        serde_json::to_string(&v).expect("json")
    }
}

pub fn m_triangle(rs: &RootSystem, k: usize) -> Result<BivarPoly> {
    Ok(NcPoset::new(rs, k)?.m_triangle())
}

pub fn narayana(rs: &RootSystem, k: usize, i: usize) -> Result<usize> {
    if i > rs.rank() {
        return Err(Error::Precondition(format!("i = {i} exceeds the rank")));
    }
    Ok(NcPoset::new(rs, k)?.narayana(i))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::build_root_system;

    fn rs(s: &str) -> RootSystem {
        build_root_system(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn sequence_counts() {
        let a1 = rs("A1");
        let p = NcPoset::new(&a1, 2).unwrap();
        assert_eq!(p.len(), 3);
        let mut ranks = p.ranks.clone();
        ranks.sort();
        assert_eq!(ranks, vec![0, 1, 1]);
        assert_eq!(NcPoset::new(&rs("A2"), 1).unwrap().len(), 5);
        assert_eq!(NcPoset::new(&rs("A2"), 2).unwrap().len(), 12);
        for (t, k, cat) in [("B2", 2, 15), ("G2", 3, 40), ("A3", 3, 140), ("B3", 2, 84), ("D4", 1, 50)] {
            assert_eq!(NcPoset::new(&rs(t), k).unwrap().len(), cat, "{t}");
        }
    }

    #[test]
    fn products_recover_c() {
        let r = rs("B3");
        let w = Weyl::new(&r);
        let p = NcPoset::new(&r, 2).unwrap();
        for d in &p.elements {
            let prod = d
                .parts
                .iter()
                .fold(w.identity(), |acc, &i| w.mul(&acc, &p.interval.elements[i]));
            assert_eq!(prod, p.interval.coxeter);
            let total: usize = d.parts.iter().map(|&i| p.interval.lengths[i]).sum();
            assert_eq!(total, 3);
        }
    }

    #[test]
    fn narayana_small() {
        for k in 1..=4 {
            let p = NcPoset::new(&rs("A1"), k).unwrap();
            assert_eq!(p.narayana_numbers(), vec![k, 1]);
        }
        assert_eq!(NcPoset::new(&rs("A2"), 1).unwrap().narayana_numbers(), vec![1, 3, 1]);
        assert_eq!(NcPoset::new(&rs("A2"), 2).unwrap().narayana_numbers().iter().sum::<usize>(), 12);
    }

    #[test]
    fn moebius_small() {
        let a1 = rs("A1");
        let p = NcPoset::new(&a1, 1).unwrap();
        let bot = (0..2).find(|&a| p.ranks[a] == 0).unwrap();
        let top = 1 - bot;
        assert_eq!(p.moebius(bot, top).unwrap(), -1);
        assert_eq!(p.moebius(top, top).unwrap(), 1);
        assert!(p.moebius(top, bot).is_err());
        let a2 = NcPoset::new(&rs("A2"), 1).unwrap();
        let bot = (0..5).find(|&a| a2.ranks[a] == 0).unwrap();
        let top = (0..5).find(|&a| a2.ranks[a] == 2).unwrap();
        assert_eq!(a2.moebius(bot, top).unwrap(), 2);
    }

    #[test]
    fn moebius_table_matches_pointwise() {
        let p = NcPoset::new(&rs("B2"), 2).unwrap();
        for (a, row) in p.moebius_table().into_iter().enumerate() {
            for (b, mu) in row {
                assert_eq!(p.moebius(a, b).unwrap(), mu);
            }
        }
    }

    #[test]
    fn m_triangles_small() {
        let p = |t: &[(u32, u32, i64)]| BivarPoly::from_terms(t.iter().copied());
        assert_eq!(m_triangle(&rs("A1"), 1).unwrap(), p(&[(0, 0, 1), (0, 1, -1), (1, 1, 1)]));
        for k in 1..=4i64 {
            assert_eq!(m_triangle(&rs("A1"), k as usize).unwrap(), p(&[(0, 0, k), (0, 1, -k), (1, 1, 1)]));
        }
        for (t, k) in [("A3", 2), ("B3", 1), ("G2", 2)] {
            let m = m_triangle(&rs(t), k).unwrap();
            assert!(m.terms().all(|(a, b, _)| b >= a), "{t}");
        }
    }

    #[test]
    fn graded() {
        for (t, k) in [("A3", 2), ("B3", 2), ("G2", 3), ("D4", 1), ("A1xA2", 2)] {
            NcPoset::new(&rs(t), k).unwrap().check_graded().unwrap();
        }
    }

    #[test]
    fn other_coxeter_element_same_counts() {
        for (t, order) in [("A3", vec![1, 0, 2]), ("B3", vec![2, 1, 0])] {
            let r = rs(t);
            let c = Weyl::new(&r).coxeter_element_in_order(&order);
            for k in 1..=2 {
                let a = NcPoset::new(&r, k).unwrap();
                let b = NcPoset::with_coxeter(&r, k, c.clone()).unwrap();
                assert_eq!(a.narayana_numbers(), b.narayana_numbers(), "{t}");
            }
        }
    }

    #[test]
    fn json_dump() {
        let a1 = rs("A1");
        let p = NcPoset::new(&a1, 2).unwrap();
        let s = p.to_json(&a1);
        let v: Vec<Vec<Vec<usize>>> = serde_json::from_str(&s).unwrap();
        assert_eq!(v.len(), 3);
        assert!(v.iter().all(|d| d.len() == 3 && d.iter().map(Vec::len).sum::<usize>() == 1));
    }
}
