//! Finite root systems: construction by type, root strings, and
//! classification of a finite vector set.
//!
//! Roots are stored in simple-root coordinates. The Gram matrix is built from
//! the Dynkin data with short simple roots of squared length 2, so every
//! pairing of integral vectors is an integer.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lattice::Form;
use crate::linalg::Matrix;
use crate::scalar::{q, rational_to_i64};

/// Half-width of the enumeration window used for root strings.
pub const STRING_WINDOW: i64 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    BC,
}

impl Family {
    fn name(self) -> &'static str {
        match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
            Family::E => "E",
            Family::F => "F",
            Family::G => "G",
            Family::BC => "BC",
        }
    }

    /// Families with more than one root length.
    pub fn has_long_roots(self) -> bool {
        matches!(self, Family::B | Family::C | Family::F | Family::G | Family::BC)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteType {
    family: Family,
    rank: usize,
}

impl FiniteType {
    /// Validates the rank. `D3` is returned as `A3`.
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A | Family::BC => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 3,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if !ok || rank > 16 {
            return Err(Error::IllegalType(format!("{}{rank}", family.name())));
        }
        if family == Family::D && rank == 3 {
            return Ok(FiniteType { family: Family::A, rank: 3 });
        }
        Ok(FiniteType { family, rank })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Squared lengths of the simple roots.
    fn simple_lengths(&self) -> Vec<i64> {
        let l = self.rank;
        match self.family {
            Family::A | Family::D | Family::E => vec![2; l],
            Family::B | Family::BC => (0..l).map(|i| if i + 1 < l { 4 } else { 2 }).collect(),
            Family::C => (0..l).map(|i| if i + 1 < l { 2 } else { 4 }).collect(),
            Family::F => vec![4, 4, 2, 2],
            Family::G => vec![2, 6],
        }
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        let l = self.rank;
        match self.family {
            Family::A | Family::B | Family::C | Family::BC | Family::F | Family::G => {
                (1..l).map(|i| (i - 1, i)).collect()
            }
            Family::D => {
                let mut e: Vec<_> = (1..l - 1).map(|i| (i - 1, i)).collect();
                e.push((l - 3, l - 1));
                e
            }
            Family::E => {
                // 1-3-4-5-6(-7-8) with 2 attached to 4
                let mut e = vec![(0, 2), (1, 3), (2, 3)];
                e.extend((4..l).map(|i| (i - 1, i)));
                e
            }
        }
    }

    /// Gram matrix of the simple roots.
    pub fn gram(&self) -> Vec<Vec<i64>> {
        let d = self.simple_lengths();
        let l = self.rank;
        let mut g = vec![vec![0; l]; l];
        for i in 0..l {
            g[i][i] = d[i];
        }
        for (i, j) in self.edges() {
            let v = -d[i].max(d[j]) / 2;
            g[i][j] = v;
            g[j][i] = v;
        }
        g
    }

    pub fn gram_matrix(&self) -> Matrix<BigRational> {
        let g = self.gram();
        Matrix::from_fn(self.rank, self.rank, |i, j| q(g[i][j]))
    }

    pub fn roots(&self) -> FiniteRootSystem {
        FiniteRootSystem::build(*self)
    }
}

impl fmt::Display for FiniteType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.name(), self.rank)
    }
}

impl FromStr for FiniteType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let split = s.find(|c: char| c.is_ascii_digit()).ok_or_else(|| Error::IllegalType(s.into()))?;
        let (fam, rank) = s.split_at(split);
        let family = match fam {
            "A" => Family::A,
            "B" => Family::B,
            "C" => Family::C,
            "D" => Family::D,
            "E" => Family::E,
            "F" => Family::F,
            "G" => Family::G,
            "BC" => Family::BC,
            _ => return Err(Error::IllegalType(s.into())),
        };
        let rank: usize = rank.parse().map_err(|_| Error::IllegalType(s.into()))?;
        FiniteType::new(family, rank)
    }
}

impl Serialize for FiniteType {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for FiniteType {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LengthClass {
    Short,
    Long,
    Extra,
}

/// The roots of a finite type in simple-root coordinates.
#[derive(Clone, Debug)]
pub struct FiniteRootSystem {
    ty: FiniteType,
    gram: Vec<Vec<i64>>,
    roots: Vec<Vec<i64>>,
    classes: HashMap<Vec<i64>, LengthClass>,
}

fn pair_int(gram: &[Vec<i64>], a: &[i64], b: &[i64]) -> i64 {
    let mut s = 0;
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            s += x * gram[i][j] * y;
        }
    }
    s
}

impl FiniteRootSystem {
    fn build(ty: FiniteType) -> Self {
        let gram = ty.gram();
        let l = ty.rank;
        let simple: Vec<Vec<i64>> = (0..l).map(|i| (0..l).map(|j| i64::from(i == j)).collect()).collect();
        let mut seen: HashSet<Vec<i64>> = simple.iter().cloned().collect();
        let mut frontier = simple.clone();
        while let Some(beta) = frontier.pop() {
            for (i, a) in simple.iter().enumerate() {
                let c = 2 * pair_int(&gram, &beta, a) / gram[i][i];
                let mut r = beta.clone();
                r[i] -= c;
                if seen.insert(r.clone()) {
                    frontier.push(r);
                }
            }
        }
        let reduced: Vec<Vec<i64>> = seen.into_iter().collect();
        let norms: Vec<i64> = reduced.iter().map(|r| pair_int(&gram, r, r)).collect();
        let min = *norms.iter().min().unwrap();
        let mut classes = HashMap::new();
        for (r, n) in reduced.iter().zip(&norms) {
            let c = if *n == min { LengthClass::Short } else { LengthClass::Long };
            classes.insert(r.clone(), c);
        }
        if ty.family == Family::BC {
            for (r, n) in reduced.iter().zip(&norms) {
                if *n == min {
                    classes.insert(r.iter().map(|x| 2 * x).collect(), LengthClass::Extra);
                }
            }
        }
        let mut roots: Vec<Vec<i64>> = classes.keys().cloned().collect();
        roots.sort();
        FiniteRootSystem { ty, gram, roots, classes }
    }

    pub fn finite_type(&self) -> FiniteType {
        self.ty
    }

    pub fn rank(&self) -> usize {
        self.ty.rank
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn form(&self) -> Form<BigRational> {
        Form::new(self.ty.gram_matrix(), self.ty.rank).expect("Cartan Gram matrices are positive definite")
    }

    /// All roots, sorted lexicographically.
    pub fn roots(&self) -> &[Vec<i64>] {
        &self.roots
    }

    pub fn class_of(&self, v: &[i64]) -> Option<LengthClass> {
        self.classes.get(v).copied()
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.classes.contains_key(v)
    }

    pub fn of_class(&self, c: LengthClass) -> Vec<Vec<i64>> {
        self.roots.iter().filter(|r| self.classes[*r] == c).cloned().collect()
    }

    pub fn pair(&self, a: &[i64], b: &[i64]) -> i64 {
        pair_int(&self.gram, a, b)
    }

    /// `r_α(β) = β − 2(β,α)/(α,α)·α`; `None` when the coefficient is not integral.
    pub fn reflect(&self, alpha: &[i64], beta: &[i64]) -> Option<Vec<i64>> {
        let num = 2 * self.pair(beta, alpha);
        let den = self.pair(alpha, alpha);
        if den == 0 || num % den != 0 {
            return None;
        }
        let c = num / den;
        Some(beta.iter().zip(alpha).map(|(b, a)| b - c * a).collect())
    }

    /// Unbroken string of `β` through `α` inside `R ∪ {0}`.
    pub fn root_string(&self, alpha: &[i64], beta: &[i64]) -> Result<RootString> {
        let aa = self.pair(alpha, alpha);
        if aa == 0 {
            return Err(Error::Precondition("root string needs a nonisotropic alpha".into()));
        }
        let ratio = BigRational::new((2 * self.pair(alpha, beta)).into(), aa.into());
        root_string_by(
            |n| {
                let v: Vec<i64> = beta.iter().zip(alpha).map(|(b, a)| b + n * a).collect();
                v.iter().all(|&x| x == 0) || self.contains(&v)
            },
            &ratio,
        )
    }
}

/// Root string data `(d, u)` with `d − u = 2(α,β)/(α,α)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootString {
    pub d: i64,
    pub u: i64,
}

/// Computes the string `{β + nα}` given a membership predicate for `n ↦ β + nα`
/// and the expected value of `2(α,β)/(α,α)`.
pub fn root_string_by(member: impl Fn(i64) -> bool, ratio: &BigRational) -> Result<RootString> {
    if !member(0) {
        return Err(Error::StringAnomaly("beta is not in the set".into()));
    }
    let mut d = 0;
    while d < STRING_WINDOW && member(-(d + 1)) {
        d += 1;
    }
    let mut u = 0;
    while u < STRING_WINDOW && member(u + 1) {
        u += 1;
    }
    if d == STRING_WINDOW || u == STRING_WINDOW {
        return Err(Error::StringAnomaly(format!("string reaches the window bound {STRING_WINDOW}")));
    }
    if let Some(n) = (-STRING_WINDOW..=STRING_WINDOW).find(|&n| (n < -d || n > u) && member(n)) {
        return Err(Error::StringAnomaly(format!("broken string: gap before n = {n}")));
    }
    if BigRational::from_integer((d - u).into()) != *ratio {
        return Err(Error::StringAnomaly(format!("d - u = {} but 2(a,b)/(a,a) = {ratio}", d - u)));
    }
    Ok(RootString { d, u })
}

/// One orthogonality component found by [`classify`].
#[derive(Clone, Debug, PartialEq)]
pub struct Component {
    pub ty: FiniteType,
    /// Indices into the classified vector list, in input order.
    pub members: Vec<usize>,
    /// Indices of a simple system, in increasing order of the positivity functional.
    pub simple: Vec<usize>,
    /// Length class of each member, aligned with `members`.
    pub classes: Vec<LengthClass>,
}

type QVec = Vec<BigRational>;

fn is_positive(v: &[BigRational]) -> bool {
    v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_positive())
}

fn scaled(a: &[BigRational], c: &BigRational) -> QVec {
    a.iter().map(|x| x * c).collect()
}

/// Splits a finite set of nonisotropic vectors into irreducible root systems.
///
/// The vectors must be closed under negation and under their own reflections.
/// Simple systems are chosen with respect to lexicographic positivity.
pub fn classify(vectors: &[QVec], form: &Form<BigRational>) -> Result<Vec<Component>> {
    let n = vectors.len();
    let index: HashMap<&QVec, usize> = vectors.iter().enumerate().map(|(i, v)| (v, i)).collect();
    if index.len() != n {
        return Err(Error::NotARootSystem("duplicate vectors".into()));
    }
    let norms: Vec<BigRational> = vectors.iter().map(|v| form.pair(v, v)).collect();
    for (i, v) in vectors.iter().enumerate() {
        if norms[i].is_zero() {
            return Err(Error::Precondition(format!("isotropic vector at index {i}")));
        }
        let neg: QVec = v.iter().map(|x| -x).collect();
        if !index.contains_key(&neg) {
            return Err(Error::NotARootSystem(format!("not closed under negation at index {i}")));
        }
    }
    let mut pairing = vec![vec![BigRational::zero(); n]; n];
    let mut uf = UnionFind::<usize>::new(n);
    for i in 0..n {
        for j in i..n {
            let p = form.pair(&vectors[i], &vectors[j]);
            if !p.is_zero() {
                uf.union(i, j);
            }
            pairing[i][j] = p.clone();
            pairing[j][i] = p;
        }
    }
    // Reflection closure: r_a(b) must be another member.
    for a in 0..n {
        for b in 0..n {
            let c = q(2) * &pairing[a][b] / &norms[a];
            if !c.is_integer() {
                return Err(Error::NotARootSystem(format!("2(b,a)/(a,a) = {c} is not an integer")));
            }
            if c.is_zero() {
                continue;
            }
            let r: QVec = vectors[b].iter().zip(&vectors[a]).map(|(x, y)| x - &c * y).collect();
            if !index.contains_key(&r) {
                return Err(Error::NotARootSystem(format!("reflection of vector {b} in vector {a} is missing")));
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut group_of: HashMap<usize, usize> = HashMap::new();
    for i in 0..n {
        let root = uf.find(i);
        let g = *group_of.entry(root).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[g].push(i);
    }
    groups.into_iter().map(|members| classify_component(vectors, form, &norms, &pairing, &index, members)).collect()
}

fn classify_component(
    vectors: &[QVec],
    form: &Form<BigRational>,
    norms: &[BigRational],
    pairing: &[Vec<BigRational>],
    index: &HashMap<&QVec, usize>,
    members: Vec<usize>,
) -> Result<Component> {
    let two = q(2);
    let half = BigRational::new(1.into(), 2.into());
    let member_set: HashSet<usize> = members.iter().copied().collect();
    let doubled: HashSet<usize> = members
        .iter()
        .copied()
        .filter(|&i| index.get(&scaled(&vectors[i], &half)).is_some_and(|j| member_set.contains(j)))
        .collect();
    let is_bc = !doubled.is_empty();
    let reduced: Vec<usize> = members.iter().copied().filter(|i| !doubled.contains(i)).collect();
    let reduced_set: HashSet<usize> = reduced.iter().copied().collect();

    let positive: Vec<usize> = reduced.iter().copied().filter(|&i| is_positive(&vectors[i])).collect();
    let positive_set: HashSet<usize> = positive.iter().copied().collect();
    let mut simple: Vec<usize> = positive
        .iter()
        .copied()
        .filter(|&i| {
            !positive.iter().any(|&j| {
                let diff: QVec = vectors[i].iter().zip(&vectors[j]).map(|(x, y)| x - y).collect();
                index.get(&diff).is_some_and(|k| positive_set.contains(k))
            })
        })
        .collect();
    simple.sort_by(|&a, &b| vectors[a].cmp(&vectors[b]));
    let l = simple.len();

    // Cartan matrix a_ij = 2(α_i, α_j)/(α_j, α_j)
    let mut cartan = vec![vec![0i64; l]; l];
    for (i, &a) in simple.iter().enumerate() {
        for (j, &b) in simple.iter().enumerate() {
            let c = &two * &pairing[a][b] / &norms[b];
            cartan[i][j] = rational_to_i64(&c).ok_or_else(|| Error::NotARootSystem("non-integral Cartan entry".into()))?;
        }
    }
    let lengths: Vec<BigRational> = simple.iter().map(|&s| norms[s].clone()).collect();
    let ty = identify(&cartan, &lengths, is_bc)?;

    // The simple system must regenerate exactly the reduced set.
    let mut generated: HashSet<QVec> = simple.iter().map(|&s| vectors[s].clone()).collect();
    let mut frontier: Vec<QVec> = generated.iter().cloned().collect();
    while let Some(beta) = frontier.pop() {
        for &s in &simple {
            let a = &vectors[s];
            let c = &two * form.pair(&beta, a) / &norms[s];
            let r: QVec = beta.iter().zip(a).map(|(x, y)| x - &c * y).collect();
            if generated.insert(r.clone()) {
                frontier.push(r);
            }
        }
    }
    let expected = ty.roots().roots().len() - if is_bc { 2 * ty.rank() } else { 0 };
    let all_present = generated.iter().all(|g| index.get(g).is_some_and(|k| reduced_set.contains(k)));
    if generated.len() != reduced.len() || !all_present || reduced.len() != expected {
        return Err(Error::NotARootSystem(format!("component does not match {ty}")));
    }
    if is_bc {
        // Doubles must be exactly twice the short roots.
        let min = reduced.iter().map(|&i| norms[i].clone()).min().unwrap();
        let short: HashSet<usize> = reduced.iter().copied().filter(|&i| norms[i] == min).collect();
        let doubles_of_short = doubled
            .iter()
            .all(|&i| index.get(&scaled(&vectors[i], &half)).is_some_and(|j| short.contains(j)));
        if !doubles_of_short || doubled.len() != short.len() {
            return Err(Error::NotARootSystem("doubled roots are not twice the short roots".into()));
        }
    }
    let min = reduced.iter().map(|&i| norms[i].clone()).min().unwrap();
    let classes = members
        .iter()
        .map(|i| {
            if doubled.contains(i) {
                LengthClass::Extra
            } else if norms[*i] == min {
                LengthClass::Short
            } else {
                LengthClass::Long
            }
        })
        .collect();
    Ok(Component { ty, members, simple, classes })
}

fn identify(cartan: &[Vec<i64>], lengths: &[BigRational], is_bc: bool) -> Result<FiniteType> {
    let l = cartan.len();
    let bad = || Error::NotARootSystem("Cartan matrix does not match a finite type".into());
    if l == 0 {
        return Err(bad());
    }
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); l];
    let mut bonds: HashMap<(usize, usize), i64> = HashMap::new();
    for i in 0..l {
        for j in i + 1..l {
            let m = cartan[i][j] * cartan[j][i];
            if m == 0 {
                continue;
            }
            if !(1..=3).contains(&m) {
                return Err(bad());
            }
            adj[i].push(j);
            adj[j].push(i);
            bonds.insert((i, j), m);
        }
    }
    if bonds.len() != l - 1 {
        return Err(bad());
    }
    let ty = if l == 1 {
        FiniteType::new(Family::A, 1)?
    } else if bonds.values().any(|&m| m == 3) {
        if l != 2 {
            return Err(bad());
        }
        FiniteType::new(Family::G, 2)?
    } else if let Some((&(a, b), _)) = bonds.iter().find(|(_, &m)| m == 2) {
        if adj.iter().any(|n| n.len() > 2) {
            return Err(bad());
        }
        let ends: Vec<usize> = (0..l).filter(|&i| adj[i].len() == 1).collect();
        let at_end = |x: usize| ends.contains(&x);
        if l == 2 {
            FiniteType::new(Family::B, 2)?
        } else if at_end(a) || at_end(b) {
            let end = if at_end(a) { a } else { b };
            let other = if end == a { b } else { a };
            if lengths[end] < lengths[other] {
                FiniteType::new(Family::B, l)?
            } else {
                FiniteType::new(Family::C, l)?
            }
        } else if l == 4 {
            FiniteType::new(Family::F, 4)?
        } else {
            return Err(bad());
        }
    } else {
        let branch: Vec<usize> = (0..l).filter(|&i| adj[i].len() >= 3).collect();
        match branch.as_slice() {
            [] => FiniteType::new(Family::A, l)?,
            [c] if adj[*c].len() == 3 => {
                let mut arms: Vec<usize> = adj[*c].iter().map(|&start| arm_length(&adj, *c, start)).collect();
                arms.sort();
                match arms.as_slice() {
                    [1, 1, k] => FiniteType::new(Family::D, k + 3)?,
                    [1, 2, 2] => FiniteType::new(Family::E, 6)?,
                    [1, 2, 3] => FiniteType::new(Family::E, 7)?,
                    [1, 2, 4] => FiniteType::new(Family::E, 8)?,
                    _ => return Err(bad()),
                }
            }
            _ => return Err(bad()),
        }
    };
    if is_bc {
        if !(ty.family == Family::B || (ty.family == Family::A && l == 1)) {
            return Err(Error::NotARootSystem(format!("doubled roots on a component of type {ty}")));
        }
        return FiniteType::new(Family::BC, l);
    }
    Ok(ty)
}

fn arm_length(adj: &[Vec<usize>], center: usize, start: usize) -> usize {
    let (mut prev, mut cur, mut len) = (center, start, 1);
    loop {
        let next: Vec<usize> = adj[cur].iter().copied().filter(|&x| x != prev).collect();
        match next.as_slice() {
            [n] => {
                prev = cur;
                cur = *n;
                len += 1;
            }
            _ => return len,
        }
    }
}

/// Converts integer coordinates to rationals.
pub fn to_rational_vec(v: &[i64]) -> QVec {
    v.iter().map(|&x| q(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_types() -> Vec<FiniteType> {
        let mut out = Vec::new();
        for l in 1..=8 {
            out.push(FiniteType::new(Family::A, l).unwrap());
            out.push(FiniteType::new(Family::BC, l).unwrap());
            if l >= 2 {
                out.push(FiniteType::new(Family::B, l).unwrap());
                out.push(FiniteType::new(Family::C, l).unwrap());
            }
            if l >= 4 {
                out.push(FiniteType::new(Family::D, l).unwrap());
            }
        }
        for l in 6..=8 {
            out.push(FiniteType::new(Family::E, l).unwrap());
        }
        out.push(FiniteType::new(Family::F, 4).unwrap());
        out.push(FiniteType::new(Family::G, 2).unwrap());
        out
    }

    fn classical_count(t: FiniteType) -> usize {
        let l = t.rank();
        match (t.family(), l) {
            (Family::A, _) => l * (l + 1),
            (Family::B | Family::C, _) => 2 * l * l,
            (Family::D, _) => 2 * l * (l - 1),
            (Family::BC, _) => 2 * l * (l + 1),
            (Family::E, 6) => 72,
            (Family::E, 7) => 126,
            (Family::E, 8) => 240,
            (Family::F, _) => 48,
            (Family::G, _) => 12,
            _ => unreachable!(),
        }
    }

    #[test]
    fn parse_and_display() {
        for s in ["A1", "B2", "C3", "D4", "E8", "F4", "G2", "BC8"] {
            assert_eq!(s.parse::<FiniteType>().unwrap().to_string(), s);
        }
        assert_eq!("D3".parse::<FiniteType>().unwrap().to_string(), "A3");
        assert!("D2".parse::<FiniteType>().is_err());
        assert!("E5".parse::<FiniteType>().is_err());
        assert!("G3".parse::<FiniteType>().is_err());
        assert!("X2".parse::<FiniteType>().is_err());
    }

    #[test]
    fn root_counts_match_classical_cardinalities() {
        for t in all_types() {
            assert_eq!(t.roots().roots().len(), classical_count(t), "{t}");
        }
    }

    #[test]
    fn length_classes() {
        let a2 = FiniteType::new(Family::A, 2).unwrap().roots();
        assert_eq!(a2.of_class(LengthClass::Short).len(), 6);
        let b2 = FiniteType::new(Family::B, 2).unwrap().roots();
        assert_eq!(b2.of_class(LengthClass::Short).len(), 4);
        assert_eq!(b2.of_class(LengthClass::Long).len(), 4);
        let bc1 = FiniteType::new(Family::BC, 1).unwrap().roots();
        assert_eq!(bc1.roots(), &[vec![-2], vec![-1], vec![1], vec![2]]);
        assert_eq!(bc1.of_class(LengthClass::Extra), vec![vec![-2], vec![2]]);
        assert!(bc1.of_class(LengthClass::Long).is_empty());
    }

    #[test]
    fn closed_under_reflections() {
        for t in all_types() {
            let sys = t.roots();
            let reduced: Vec<&Vec<i64>> = sys.roots().iter().collect();
            for a in &reduced {
                for b in &reduced {
                    let r = sys.reflect(a, b).expect("integral");
                    assert!(sys.contains(&r), "{t}: r_{a:?}({b:?})");
                }
            }
        }
    }

    #[test]
    fn root_strings() {
        let a2 = FiniteType::new(Family::A, 2).unwrap().roots();
        assert_eq!(a2.root_string(&[1, 0], &[0, 1]).unwrap(), RootString { d: 0, u: 1 });
        assert_eq!(a2.root_string(&[1, 0], &[1, 0]).unwrap(), RootString { d: 2, u: 0 });
        let bc1 = FiniteType::new(Family::BC, 1).unwrap().roots();
        let s = bc1.root_string(&[1], &[2]).unwrap();
        assert_eq!(s.d - s.u, 4);
        for t in all_types() {
            let sys = t.roots();
            for a in sys.roots() {
                for b in sys.roots() {
                    sys.root_string(a, b).unwrap_or_else(|e| panic!("{t} {a:?} {b:?}: {e}"));
                }
            }
        }
    }

    #[test]
    fn broken_string_is_an_anomaly() {
        let err = root_string_by(|n| n == 0 || n == 2, &q(0)).unwrap_err();
        assert!(matches!(err, Error::StringAnomaly(_)));
        let err = root_string_by(|_| true, &q(0)).unwrap_err();
        assert!(matches!(err, Error::StringAnomaly(_)));
    }

    #[test]
    fn classify_round_trip() {
        for t in all_types() {
            let sys = t.roots();
            let vecs: Vec<QVec> = sys.roots().iter().map(|r| to_rational_vec(r)).collect();
            let comps = classify(&vecs, &sys.form()).unwrap();
            assert_eq!(comps.len(), 1, "{t}");
            let expected = if t.family() == Family::C && t.rank() == 2 { "B2".parse().unwrap() } else { t };
            assert_eq!(comps[0].ty, expected, "{t}");
            assert_eq!(comps[0].members.len(), vecs.len());
            assert_eq!(comps[0].simple.len(), t.rank());
        }
    }

    #[test]
    fn classify_splits_orthogonal_pieces() {
        let a3 = FiniteType::new(Family::A, 3).unwrap().roots();
        // keep the roots on which the character α₁↦1, α₂↦-1, α₃↦1 is trivial
        let kept: Vec<QVec> =
            a3.roots().iter().filter(|r| r[1].rem_euclid(2) == 0).map(|r| to_rational_vec(r)).collect();
        assert_eq!(kept.len(), 4);
        let comps = classify(&kept, &a3.form()).unwrap();
        assert_eq!(comps.len(), 2);
        assert!(comps.iter().all(|c| c.ty.to_string() == "A1"));
    }

    #[test]
    fn classify_d4_in_epsilon_coordinates() {
        let mut vecs = Vec::new();
        for i in 0..4 {
            for j in i + 1..4 {
                for (si, sj) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                    let mut v = vec![0i64; 4];
                    v[i] = si;
                    v[j] = sj;
                    vecs.push(to_rational_vec(&v));
                }
            }
        }
        let form = Form::new(Matrix::identity(4), 4).unwrap();
        let comps = classify(&vecs, &form).unwrap();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].ty.to_string(), "D4");
        assert_eq!(comps[0].members.len(), 24);
    }

    #[test]
    fn classify_rejects_missing_reflections() {
        let a2 = FiniteType::new(Family::A, 2).unwrap().roots();
        let vecs: Vec<QVec> = a2.roots().iter().filter(|r| r != &&vec![1, 1] && r != &&vec![-1, -1]).map(|r| to_rational_vec(r)).collect();
        assert!(matches!(classify(&vecs, &a2.form()), Err(Error::NotARootSystem(_))));
    }
}
