//! Fixed points of character automorphisms.
//!
//! A character `φ: Q → μ_m` acts on each root space `G_α` by `φ(α)`, so the
//! fixed root system is `R^σ = {α ∈ R | φ(α) = 1}`. Membership in `R`
//! depends on the isotropic part modulo 2 and `φ` on it modulo `m`; both are
//! therefore periodic modulo `M = lcm(2, m)`. Every existential question
//! about `R^σ` (isolation, fibres over the finite quotient, spans) is decided
//! by enumerating finite roots times residues in `[0, M)^ν`.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::ears::{rank_two_type, EarsPresentation, IsoClassification, ResidueClass, Root, RootOracle, Verdict};
use crate::error::{Error, Result};
use crate::finroot::{self, Family, FiniteRootSystem, FiniteType};
use crate::lattice::{box_points, CosetEnumerator, IntLattice, IntVector};

/// `φ(α_i) = ζ_m^{alpha[i]}`, `φ(δ_j) = ζ_m^{delta[j]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CharacterRepr")]
pub struct Character {
    order: i64,
    alpha: Vec<i64>,
    delta: Vec<i64>,
}

#[derive(Deserialize)]
struct CharacterRepr {
    order: i64,
    alpha: Vec<i64>,
    #[serde(default)]
    delta: Vec<i64>,
}

impl TryFrom<CharacterRepr> for Character {
    type Error = Error;
    fn try_from(r: CharacterRepr) -> Result<Self> {
        Character::new(r.order, r.alpha, r.delta)
    }
}

impl Character {
    pub fn new(order: i64, alpha: Vec<i64>, delta: Vec<i64>) -> Result<Self> {
        if order < 1 {
            return Err(Error::Invalid(format!("character order {order} must be positive")));
        }
        let alpha = alpha.iter().map(|x| x.rem_euclid(order)).collect();
        let delta = delta.iter().map(|x| x.rem_euclid(order)).collect();
        Ok(Character { order, alpha, delta })
    }

    pub fn trivial(rank: usize, nullity: usize) -> Self {
        Character { order: 1, alpha: vec![0; rank], delta: vec![0; nullity] }
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn alpha(&self) -> &[i64] {
        &self.alpha
    }

    pub fn delta(&self) -> &[i64] {
        &self.delta
    }

    /// Exponent `k` with `φ(x) = ζ_m^k`, in `[0, m)`.
    pub fn eval(&self, x: &Root) -> Result<i64> {
        if x.finite.len() != self.alpha.len() {
            return Err(Error::RankMismatch { expected: self.alpha.len(), got: x.finite.len() });
        }
        if x.iso.len() != self.delta.len() {
            return Err(Error::RankMismatch { expected: self.delta.len(), got: x.iso.len() });
        }
        Ok(self.eval_unchecked(x))
    }

    fn eval_unchecked(&self, x: &Root) -> i64 {
        let s: i64 = x.finite.iter().zip(&self.alpha).map(|(a, b)| a * b).sum::<i64>()
            + x.iso.entries().iter().zip(&self.delta).map(|(a, b)| a * b).sum::<i64>();
        s.rem_euclid(self.order)
    }
}

/// `R^σ` for a character automorphism of a presented root system.
#[derive(Clone, Debug)]
pub struct FixedRootSystem {
    base: EarsPresentation,
    chi: Character,
}

impl FixedRootSystem {
    pub fn new(base: EarsPresentation, chi: Character) -> Result<Self> {
        if chi.alpha.len() != base.rank() {
            return Err(Error::RankMismatch { expected: base.rank(), got: chi.alpha.len() });
        }
        if chi.delta.len() != base.nullity() {
            return Err(Error::RankMismatch { expected: base.nullity(), got: chi.delta.len() });
        }
        Ok(FixedRootSystem { base, chi })
    }

    pub fn base(&self) -> &EarsPresentation {
        &self.base
    }

    pub fn character(&self) -> &Character {
        &self.chi
    }

    /// Period `lcm(2, m)` of membership in the isotropic directions.
    pub fn modulus(&self) -> i64 {
        2.lcm(&self.chi.order)
    }

    pub fn contains(&self, x: &Root) -> Result<bool> {
        Ok(self.base.contains(x)? && self.chi.eval_unchecked(x) == 0)
    }

    fn contains_unchecked(&self, x: &Root) -> bool {
        self.base.contains_unchecked(x) && self.chi.eval_unchecked(x) == 0
    }

    pub fn window_roots(&self, r: i64) -> Vec<Root> {
        self.base.window_roots(r).into_iter().filter(|x| self.chi.eval_unchecked(x) == 0).collect()
    }

    fn residues(&self) -> Vec<Vec<i64>> {
        CosetEnumerator::new(self.modulus(), self.base.nullity()).collect()
    }

    /// Nonisotropic roots `α̇ + μ` with `μ ∈ [0, M)^ν`, one per residue class.
    pub fn nonisotropic_representatives(&self) -> Vec<Root> {
        let residues = self.residues();
        let mut out = Vec::new();
        for alpha in self.base.finite_roots().roots().iter().rev() {
            for mu in &residues {
                let x = Root::new(alpha.clone(), mu.clone());
                if self.contains_unchecked(&x) {
                    out.push(x);
                }
            }
        }
        out
    }

    /// Isotropic residue classes modulo `M` that lie in `R^σ`.
    pub fn isotropic_classes(&self) -> Vec<ResidueClass> {
        let rank = self.base.rank();
        self.residues()
            .into_iter()
            .filter(|d| self.contains_unchecked(&Root::isotropic(rank, d.clone())))
            .map(|d| ResidueClass::new(self.modulus(), d))
            .collect()
    }

    /// Decides whether an isotropic `δ ∈ R^σ` is isolated, i.e. whether no
    /// `α ∈ (R^σ)^×` has `α + δ ∈ R^σ`. Both conditions on `α = α̇ + μ` only
    /// depend on `μ` and `δ` modulo `M`, so the search is complete.
    pub fn is_isolated_exact(&self, delta: &Root) -> Result<IsoClassification> {
        if !delta.is_isotropic() || !self.contains(delta)? {
            return Err(Error::Precondition(format!("{delta} is not an isotropic root of R^sigma")));
        }
        Ok(self.isolation_of(delta.iso.entries()))
    }

    fn isolation_of(&self, delta: &[i64]) -> IsoClassification {
        let shift = Root::isotropic(self.base.rank(), delta.to_vec());
        for alpha in self.nonisotropic_representatives() {
            if self.contains_unchecked(&alpha.add(&shift)) {
                return IsoClassification::nonisolated(alpha);
            }
        }
        IsoClassification::isolated()
    }

    /// Isotropic residue classes of `R^σ` that are isolated.
    pub fn isolated_classes(&self) -> Vec<ResidueClass> {
        self.isotropic_classes().into_iter().filter(|c| self.isolation_of(c.residue.entries()).is_isolated()).collect()
    }

    /// Window check that the nonisotropic part behaves like a SEARS.
    pub fn sears_check(&self, r: i64) -> SearsReport {
        let roots = self.window_roots(r.max(1));
        sears_check_on(&roots, |x| self.contains_unchecked(x), self.base.finite_roots())
    }

    /// The decomposition `R^σ = ∪ R_i^σ ⊎ R^σ_iso` with the dimension
    /// bookkeeping of the corresponding fixed-point subalgebra.
    pub fn decompose_fixed(&self, dim_h_sigma: usize) -> Result<DecompositionReport> {
        let reps = self.nonisotropic_representatives();
        if reps.is_empty() {
            return Err(Error::EmptyNonisotropic);
        }
        let rank = self.base.rank();
        let nu = self.base.nullity();
        let m = self.modulus();
        let finite = self.base.finite_roots();

        let mut fibres: BTreeMap<Vec<i64>, Vec<Vec<i64>>> = BTreeMap::new();
        for x in &reps {
            fibres.entry(x.finite.clone()).or_default().push(x.iso.0.clone());
        }
        let bars: Vec<Vec<i64>> = fibres.keys().cloned().collect();
        let qbars: Vec<Vec<BigRational>> = bars.iter().map(|b| finroot::to_rational_vec(b)).collect();
        let comps = finroot::classify(&qbars, &finite.form())?;

        let mut components = Vec::new();
        let mut spans: Vec<IntLattice> = Vec::new();
        for comp in &comps {
            let members: Vec<&Vec<i64>> = comp.members.iter().map(|&i| &bars[i]).collect();
            let mut diffs = IntLattice::new(nu);
            let mut span = IntLattice::new(rank + nu);
            for j in 0..nu {
                let mut e = vec![0; nu];
                e[j] = m;
                diffs.insert(&e);
                let mut full = vec![0; rank + nu];
                full[rank + j] = m;
                span.insert(&full);
            }
            for b in &members {
                let fibre = &fibres[*b];
                for mu in fibre {
                    let d: Vec<i64> = mu.iter().zip(&fibre[0]).map(|(x, y)| x - y).collect();
                    diffs.insert(&d);
                    span.insert(&Root::new((*b).clone(), mu.clone()).coords());
                }
            }
            let simple_preimage: Vec<Root> = comp.simple.iter().map(|&s| self.preimage(&bars[s])).collect();
            let mut ty = comp.ty;
            if ty.family() == Family::B && ty.rank() == 2 {
                ty = self.refine_rank_two(&members, finite);
            }
            let l_i = comp.simple.len();
            let nu_i = diffs.rank();
            components.push(FixedComponent {
                ty,
                l_i,
                nu_i,
                dim_h_i: l_i + 2 * nu_i,
                simple_preimage,
                iso_basis: diffs.basis().into_iter().map(IntVector).collect(),
            });
            spans.push(span);
        }

        let mut isolated = Vec::new();
        for class in self.isotropic_classes() {
            if !self.isolation_of(class.residue.entries()).is_isolated() {
                continue;
            }
            let v = Root::isotropic(rank, class.residue.0.clone()).coords();
            let internal = spans.iter().any(|s| s.contains(&v));
            isolated.push(IsolatedClass {
                class: class.label(),
                residue: class,
                kind: if internal { IsolationKind::Internal } else { IsolationKind::External },
            });
        }

        let used: usize = components.iter().map(|c| c.dim_h_i).sum();
        if used > dim_h_sigma {
            return Err(Error::Precondition(format!("dim H^sigma = {dim_h_sigma} is smaller than the components need ({used})")));
        }
        let has_i = isolated.iter().any(|c| c.kind == IsolationKind::External);
        Ok(DecompositionReport { k: components.len(), modulus: m, components, isolated, dim_w: dim_h_sigma - used, has_i })
    }

    /// Preimage of a finite root with the smallest isotropic part: least
    /// `L1` norm, then coordinates ordered by `|n|` with positive before negative.
    fn preimage(&self, bar: &[i64]) -> Root {
        let m = self.modulus();
        box_points(m - 1, self.base.nullity())
            .map(|d| Root::new(bar.to_vec(), d))
            .filter(|x| self.contains_unchecked(x))
            .min_by_key(|x| {
                let e = x.iso.entries();
                (e.iter().map(|v| v.abs()).sum::<i64>(), e.iter().map(|&v| (v.abs(), v < 0)).collect::<Vec<_>>())
            })
            .expect("every fibre meets the box")
    }

    fn refine_rank_two(&self, members: &[&Vec<i64>], finite: &FiniteRootSystem) -> FiniteType {
        let norm = |b: &Vec<i64>| finite.pair(b, b);
        let min = members.iter().map(|b| norm(b)).min().expect("nonempty");
        let pick = |short: bool| members.iter().find(|b| (norm(b) == min) == short).map(|b| self.preimage(b));
        let (Some(s), Some(l)) = (pick(true), pick(false)) else {
            return FiniteType::new(Family::B, 2).expect("legal");
        };
        let m = self.modulus();
        let translates = |alpha: &Root| -> BTreeSet<Vec<i64>> {
            CosetEnumerator::new(m, self.base.nullity())
                .filter(|d| self.contains_unchecked(&alpha.add(&Root::isotropic(alpha.finite.len(), d.clone()))))
                .collect()
        };
        rank_two_type(&translates(&s), &translates(&l))
    }
}

impl RootOracle for FixedRootSystem {
    fn contains(&self, v: &[BigRational]) -> Option<bool> {
        let ints: Option<Vec<i64>> = v.iter().map(crate::scalar::rational_to_i64).collect();
        let Some(ints) = ints else {
            return Some(false);
        };
        let (fin, iso) = ints.split_at(self.base.rank());
        Some(self.contains_unchecked(&Root::new(fin.to_vec(), iso.to_vec())))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IsolationKind {
    /// Lies in the Z-span of some component.
    #[serde(rename = "internal-isolated")]
    Internal,
    #[serde(rename = "external-isolated")]
    External,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsolatedClass {
    pub class: String,
    pub residue: ResidueClass,
    pub kind: IsolationKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedComponent {
    #[serde(rename = "type")]
    pub ty: FiniteType,
    pub l_i: usize,
    pub nu_i: usize,
    #[serde(rename = "dim_H_i")]
    pub dim_h_i: usize,
    pub simple_preimage: Vec<Root>,
    pub iso_basis: Vec<IntVector>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionReport {
    pub k: usize,
    pub modulus: i64,
    pub components: Vec<FixedComponent>,
    pub isolated: Vec<IsolatedClass>,
    #[serde(rename = "dim_W")]
    pub dim_w: usize,
    #[serde(rename = "has_I")]
    pub has_i: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearsReport {
    pub pass: bool,
    pub verdicts: Vec<Verdict>,
}

/// Integrality, reflection closure and indecomposability of the
/// nonisotropic roots in a window, with exact membership for reflections.
pub fn sears_check_on(roots: &[Root], contains: impl Fn(&Root) -> bool, finite: &FiniteRootSystem) -> SearsReport {
    let nonisotropic: Vec<&Root> = roots.iter().filter(|x| !x.is_isotropic()).collect();
    let mut integral = None;
    let mut reflection = None;
    for a in &nonisotropic {
        let aa = finite.pair(&a.finite, &a.finite);
        for b in &nonisotropic {
            let ab = finite.pair(&a.finite, &b.finite);
            if (2 * ab) % aa != 0 {
                integral.get_or_insert_with(|| format!("2(b,a)/(a,a) not integral for a = {a}, b = {b}"));
                continue;
            }
            let reflected = b.add(&a.scale(-(2 * ab) / aa));
            if !contains(&reflected) {
                reflection.get_or_insert_with(|| format!("reflection of {b} in {a} gives {reflected}, not a root"));
            }
        }
    }
    let mut uf = UnionFind::<usize>::new(nonisotropic.len());
    for (i, a) in nonisotropic.iter().enumerate() {
        for (j, b) in nonisotropic.iter().enumerate().skip(i + 1) {
            if finite.pair(&a.finite, &b.finite) != 0 {
                uf.union(i, j);
            }
        }
    }
    let pieces: BTreeSet<usize> = (0..nonisotropic.len()).map(|i| uf.find(i)).collect();
    let indecomposable = pieces.len() == 1;
    let verdicts = vec![
        Verdict { axiom: "integrality".into(), pass: integral.is_none(), witness: integral },
        Verdict { axiom: "reflection".into(), pass: reflection.is_none(), witness: reflection },
        Verdict {
            axiom: "indecomposable".into(),
            pass: indecomposable,
            witness: (!indecomposable).then(|| format!("{} orthogonal pieces", pieces.len())),
        },
    ];
    SearsReport { pass: verdicts.iter().all(|v| v.pass), verdicts }
}

/// Brute-force isolation test over a box of isotropic parts, used to
/// cross-check the residue-class decision.
pub fn isolated_by_search(f: &FixedRootSystem, delta: &[i64], radius: i64) -> bool {
    let rank = f.base.rank();
    let shift = Root::isotropic(rank, delta.to_vec());
    !f.base.finite_roots().roots().iter().any(|a| {
        box_points(radius, f.base.nullity()).any(|mu| {
            let x = Root::new(a.clone(), mu);
            f.contains_unchecked(&x) && f.contains_unchecked(&x.add(&shift))
        })
    })
}

/// For nullity zero: the orthogonal complement of the fixed roots in the
/// Cartan subalgebra has dimension `dim_W` and every fixed root vanishes on it.
pub fn complement_centralizes(f: &FixedRootSystem, report: &DecompositionReport) -> bool {
    if f.base.nullity() != 0 {
        return false;
    }
    let finite = f.base.finite_roots();
    let form = finite.form();
    let roots: Vec<Vec<BigRational>> =
        f.nonisotropic_representatives().iter().map(|r| finroot::to_rational_vec(&r.finite)).collect();
    // h ∈ W iff (h, α) = 0 for all fixed α: kernel of (roots × Gram).
    let rows: Vec<Vec<BigRational>> = roots.iter().map(|r| form.gram().mul_vec(r)).collect();
    let kernel = crate::linalg::Matrix::from_rows(rows).nullspace();
    kernel.len() == report.dim_w
        && kernel.iter().all(|h| roots.iter().all(|r| form.pair(h, r).is_zero()))
}
