//! Extended affine root systems.
//!
//! Two representations are supported. An [`EarsPresentation`] describes an
//! infinite root system by a finite type and the semilattices attached to
//! each root length; all questions about it reduce to parity classes and are
//! answered exactly. Explicit window sets (fixed points discovered pointwise)
//! are handled by [`decompose`] through the [`RootOracle`] trait.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finroot::{self, Family, FiniteRootSystem, FiniteType, LengthClass};
use crate::lattice::{box_points, mask_of, mask_string, Form, IntLattice, IntVector, Semilattice};
use crate::linalg::{EchelonBasis, Matrix};
use crate::scalar::q;

pub const DEFAULT_WINDOW: i64 = 3;

/// A root `α̇ + δ`: finite part in simple-root coordinates (all zero for
/// isotropic roots) and isotropic part in `Z^ν`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Root {
    pub finite: Vec<i64>,
    pub iso: IntVector,
}

impl Root {
    pub fn new(finite: Vec<i64>, iso: Vec<i64>) -> Self {
        Root { finite, iso: IntVector(iso) }
    }

    pub fn isotropic(rank: usize, iso: Vec<i64>) -> Self {
        Root { finite: vec![0; rank], iso: IntVector(iso) }
    }

    pub fn is_isotropic(&self) -> bool {
        self.finite.iter().all(|&x| x == 0)
    }

    pub fn neg(&self) -> Root {
        Root { finite: self.finite.iter().map(|x| -x).collect(), iso: -&self.iso }
    }

    pub fn add(&self, other: &Root) -> Root {
        Root { finite: self.finite.iter().zip(&other.finite).map(|(a, b)| a + b).collect(), iso: &self.iso + &other.iso }
    }

    pub fn scale(&self, k: i64) -> Root {
        Root { finite: self.finite.iter().map(|x| k * x).collect(), iso: self.iso.scale(k) }
    }

    /// Concatenated coordinates `(finite, iso)`.
    pub fn coords(&self) -> Vec<i64> {
        self.finite.iter().chain(self.iso.entries()).copied().collect()
    }

    pub fn to_rational(&self) -> Vec<BigRational> {
        self.coords().into_iter().map(q).collect()
    }
}

impl std::fmt::Display for Root {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        for (i, &c) in self.finite.iter().enumerate() {
            if c != 0 {
                parts.push(term(c, &format!("a{}", i + 1)));
            }
        }
        for (i, &c) in self.iso.entries().iter().enumerate() {
            if c != 0 {
                parts.push(term(c, &format!("d{}", i + 1)));
            }
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{}", parts.join(" + ").replace("+ -", "- "))
    }
}

fn term(c: i64, name: &str) -> String {
    match c {
        1 => name.to_string(),
        -1 => format!("-{name}"),
        _ => format!("{c}{name}"),
    }
}

/// The residue class `residue + modulus·Z^ν`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ResidueClass {
    pub modulus: i64,
    pub residue: IntVector,
}

impl ResidueClass {
    pub fn new(modulus: i64, residue: Vec<i64>) -> Self {
        let residue = IntVector(residue).residues(modulus);
        ResidueClass { modulus, residue }
    }

    pub fn contains(&self, delta: &[i64]) -> bool {
        delta.len() == self.residue.len()
            && delta.iter().zip(self.residue.entries()).all(|(d, r)| d.rem_euclid(self.modulus) == *r)
    }

    pub fn negated(&self) -> Self {
        ResidueClass::new(self.modulus, (-&self.residue).0)
    }

    /// Display form `residue mod modulus`, coordinates as in coset strings.
    pub fn label(&self) -> String {
        if self.modulus == 2 {
            mask_string(self.residue.mod2(), self.residue.len())
        } else {
            format!("{} mod {}", self.residue, self.modulus)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IsoKind {
    Isolated,
    Nonisolated,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoClassification {
    pub kind: IsoKind,
    pub witness: Option<Root>,
}

impl IsoClassification {
    pub fn isolated() -> Self {
        IsoClassification { kind: IsoKind::Isolated, witness: None }
    }

    pub fn nonisolated(witness: Root) -> Self {
        IsoClassification { kind: IsoKind::Nonisolated, witness: Some(witness) }
    }

    pub fn is_isolated(&self) -> bool {
        self.kind == IsoKind::Isolated
    }
}

#[derive(Serialize, Deserialize)]
struct PresentationRepr {
    #[serde(rename = "type")]
    ty: FiniteType,
    nullity: usize,
    #[serde(rename = "S")]
    s: Vec<String>,
    #[serde(rename = "L", default)]
    l: Option<Vec<String>>,
    #[serde(rename = "E", default)]
    e: Option<Vec<String>>,
    #[serde(default)]
    extra_isolated: Vec<ResidueClass>,
}

/// `R = (S+S) ∪ (Ṙ_sh+S) ∪ (Ṙ_lg+L) ∪ (Ṙ_ex+E)`, plus optionally adjoined
/// isolated isotropic classes.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "PresentationRepr", into = "PresentationRepr")]
pub struct EarsPresentation {
    ty: FiniteType,
    nullity: usize,
    s: Semilattice,
    l: Option<Semilattice>,
    e: Option<Semilattice>,
    extra_isolated: Vec<ResidueClass>,
    finite: FiniteRootSystem,
    iso_masks: BTreeSet<u64>,
}

impl TryFrom<PresentationRepr> for EarsPresentation {
    type Error = Error;
    fn try_from(r: PresentationRepr) -> Result<Self> {
        let s = Semilattice::from_strings(r.nullity, &r.s, false)?;
        let l = r.l.map(|l| Semilattice::from_strings(r.nullity, &l, false)).transpose()?;
        let e = r.e.map(|e| Semilattice::from_strings(r.nullity, &e, true)).transpose()?;
        EarsPresentation::new(r.ty, s, l, e, r.extra_isolated)
    }
}

impl From<EarsPresentation> for PresentationRepr {
    fn from(p: EarsPresentation) -> Self {
        PresentationRepr {
            ty: p.ty,
            nullity: p.nullity,
            s: p.s.to_strings(),
            l: p.l.as_ref().map(Semilattice::to_strings),
            e: p.e.as_ref().map(Semilattice::to_strings),
            extra_isolated: p.extra_isolated,
        }
    }
}

impl EarsPresentation {
    pub fn new(
        ty: FiniteType,
        s: Semilattice,
        l: Option<Semilattice>,
        e: Option<Semilattice>,
        extra_isolated: Vec<ResidueClass>,
    ) -> Result<Self> {
        let nullity = s.nullity();
        if s.is_translated() {
            return Err(Error::Invalid("S must contain the zero coset".into()));
        }
        let needs_l = ty.family().has_long_roots() && !(ty.family() == Family::BC && ty.rank() == 1);
        let needs_e = ty.family() == Family::BC;
        match (&l, needs_l) {
            (Some(_), false) => return Err(Error::Invalid(format!("type {ty} takes no L"))),
            (None, true) => return Err(Error::Invalid(format!("type {ty} requires L"))),
            _ => {}
        }
        match (&e, needs_e) {
            (Some(_), false) => return Err(Error::Invalid(format!("type {ty} takes no E"))),
            (None, true) => return Err(Error::Invalid(format!("type {ty} requires E"))),
            _ => {}
        }
        for x in l.iter().chain(e.iter()) {
            if x.nullity() != nullity {
                return Err(Error::RankMismatch { expected: nullity, got: x.nullity() });
            }
        }
        let e = e.map(|e| Semilattice::translated(nullity, e.cosets().iter().copied())).transpose()?;
        let iso_masks = s.sum(&s)?.cosets().clone();
        let mut p = EarsPresentation { ty, nullity, s, l, e, extra_isolated: Vec::new(), finite: ty.roots(), iso_masks };
        let mut extras = BTreeSet::new();
        for c in extra_isolated {
            if c.modulus <= 0 || c.modulus % 2 != 0 || c.residue.len() != nullity {
                return Err(Error::Invalid(format!("extra isolated class {} needs an even modulus and rank {nullity}", c.label())));
            }
            let mask = c.residue.mod2();
            if p.iso_masks.contains(&mask) || p.witness_mask(mask).is_some() {
                return Err(Error::Invalid(format!("class {} is not isolated", c.label())));
            }
            extras.insert(c);
        }
        for c in &extras {
            if !extras.contains(&c.negated()) {
                return Err(Error::Invalid(format!("extra isolated classes not closed under negation at {}", c.label())));
            }
        }
        p.extra_isolated = extras.into_iter().collect();
        Ok(p)
    }

    /// The presentation with only `S` given (simply laced or `A1`).
    pub fn simple(ty: FiniteType, s: Semilattice) -> Result<Self> {
        Self::new(ty, s, None, None, Vec::new())
    }

    pub fn finite_type(&self) -> FiniteType {
        self.ty
    }

    pub fn nullity(&self) -> usize {
        self.nullity
    }

    pub fn rank(&self) -> usize {
        self.ty.rank()
    }

    pub fn s(&self) -> &Semilattice {
        &self.s
    }

    pub fn l(&self) -> Option<&Semilattice> {
        self.l.as_ref()
    }

    pub fn e(&self) -> Option<&Semilattice> {
        self.e.as_ref()
    }

    pub fn extra_isolated(&self) -> &[ResidueClass] {
        &self.extra_isolated
    }

    pub fn finite_roots(&self) -> &FiniteRootSystem {
        &self.finite
    }

    /// Parity classes of `S + S`.
    pub fn isotropic_masks(&self) -> &BTreeSet<u64> {
        &self.iso_masks
    }

    /// Semilattice attached to a length class.
    pub fn class_set(&self, c: LengthClass) -> &Semilattice {
        match c {
            LengthClass::Short => &self.s,
            LengthClass::Long => self.l.as_ref().unwrap_or(&self.s),
            LengthClass::Extra => self.e.as_ref().expect("extra-long roots only in BC"),
        }
    }

    /// Length classes that occur, each with a fixed representative root.
    pub fn class_representatives(&self) -> Vec<(LengthClass, Vec<i64>)> {
        [LengthClass::Short, LengthClass::Long, LengthClass::Extra]
            .into_iter()
            .filter_map(|c| self.finite.of_class(c).into_iter().max().map(|r| (c, r)))
            .collect()
    }

    /// Full form: the finite Gram matrix with a zero radical block.
    pub fn form(&self) -> Form<BigRational> {
        Form::with_radical(&self.ty.gram_matrix(), self.nullity).expect("valid Gram")
    }

    fn check_dims(&self, x: &Root) -> Result<()> {
        if x.finite.len() != self.rank() {
            return Err(Error::RankMismatch { expected: self.rank(), got: x.finite.len() });
        }
        if x.iso.len() != self.nullity {
            return Err(Error::RankMismatch { expected: self.nullity, got: x.iso.len() });
        }
        Ok(())
    }

    pub fn contains(&self, x: &Root) -> Result<bool> {
        self.check_dims(x)?;
        Ok(self.contains_unchecked(x))
    }

    pub(crate) fn contains_unchecked(&self, x: &Root) -> bool {
        let mask = x.iso.mod2();
        if x.is_isotropic() {
            return self.iso_masks.contains(&mask) || self.extra_isolated.iter().any(|c| c.contains(x.iso.entries()));
        }
        match self.finite.class_of(&x.finite) {
            Some(c) => self.class_set(c).contains_mask(mask),
            None => false,
        }
    }

    /// A nonisotropic root `α` with `α + δ ∈ R` for an isotropic `δ` of the
    /// given parity, if one exists. Membership of `α̇ + μ` depends only on
    /// `μ mod 2`, so the search over classes and parity cosets is complete.
    fn witness_mask(&self, delta_mask: u64) -> Option<Root> {
        for (c, rep) in self.class_representatives() {
            let set = self.class_set(c);
            for &mu in set.cosets() {
                if set.contains_mask(mu ^ delta_mask) {
                    let iso: Vec<i64> = (0..self.nullity).map(|i| (mu >> i & 1) as i64).collect();
                    return Some(Root::new(rep, iso));
                }
            }
        }
        None
    }

    pub fn classify_isotropic(&self, delta: &Root) -> Result<IsoClassification> {
        self.check_dims(delta)?;
        if !delta.is_isotropic() || !self.contains_unchecked(delta) {
            return Err(Error::Precondition(format!("{delta} is not an isotropic root")));
        }
        Ok(match self.witness_mask(delta.iso.mod2()) {
            Some(w) => IsoClassification::nonisolated(w),
            None => IsoClassification::isolated(),
        })
    }

    /// `R_t`: the presentation with adjoined isolated classes removed.
    pub fn tame_core(&self) -> EarsPresentation {
        let mut p = self.clone();
        p.extra_isolated.clear();
        p
    }

    /// Roots with isotropic part in `[-r, r]^ν`, nonisotropic first.
    pub fn window_roots(&self, r: i64) -> Vec<Root> {
        let boxed: Vec<Vec<i64>> = box_points(r, self.nullity).collect();
        let mut out = Vec::new();
        for alpha in self.finite.roots() {
            for d in &boxed {
                let x = Root::new(alpha.clone(), d.clone());
                if self.contains_unchecked(&x) {
                    out.push(x);
                }
            }
        }
        for d in &boxed {
            let x = Root::isotropic(self.rank(), d.clone());
            if self.contains_unchecked(&x) {
                out.push(x);
            }
        }
        out
    }

    /// Window verification of R1 through R7.
    pub fn axioms_check(&self, r: i64) -> AxiomReport {
        let r = r.max(1);
        let window = self.window_roots(r);
        let mut report = AxiomReport { window: r, verdicts: Vec::new() };

        let r1 = window.iter().find(|x| !self.contains_unchecked(&x.neg()));
        report.push("R1", r1.is_none(), r1.map(|x| format!("{} has no negative", x)));

        // S contains 2Z^ν, so radius 2 always exhibits a spanning set.
        let span_window = if r < 2 { self.window_roots(2) } else { window.clone() };
        let mut span = EchelonBasis::new(self.rank() + self.nullity);
        for x in &span_window {
            span.insert(&x.to_rational());
        }
        let full = span.rank() == self.rank() + self.nullity;
        report.push("R2", full, (!full).then(|| format!("span has rank {}", span.rank())));

        report.push("R3", true, None);

        let nonisotropic: Vec<&Root> = window.iter().filter(|x| !x.is_isotropic()).collect();
        let bad = nonisotropic.par_iter().find_map_first(|alpha| {
            window.iter().find_map(|beta| self.string_check(alpha, beta).err().map(|e| format!("alpha = {alpha}, beta = {beta}: {e}")))
        });
        report.push("R4", bad.is_none(), bad);

        let isolated = self.isolated_classes();
        report.push("R5", isolated.is_empty(), isolated.first().map(|c| format!("isolated class {}", c.label())));

        let bars: Vec<Vec<BigRational>> = self.finite.roots().iter().map(|r| finroot::to_rational_vec(r)).collect();
        let (count, note) = match finroot::classify(&bars, &self.finite.form()) {
            Ok(c) => (c.len(), None),
            Err(e) => (0, Some(e.to_string())),
        };
        report.push("R6", count == 1, note.or_else(|| (count != 1).then(|| format!("{count} components"))));

        let doubled = window.iter().filter(|x| !x.is_isotropic()).find(|x| self.contains_unchecked(&x.scale(2)));
        report.push("R7", doubled.is_none(), doubled.map(|x| format!("{x} and twice it are roots")));
        report
    }

    fn string_check(&self, alpha: &Root, beta: &Root) -> Result<finroot::RootString> {
        let aa = self.finite.pair(&alpha.finite, &alpha.finite);
        let ab = self.finite.pair(&alpha.finite, &beta.finite);
        let ratio = BigRational::new((2 * ab).into(), aa.into());
        finroot::root_string_by(|n| self.contains_unchecked(&beta.add(&alpha.scale(n))), &ratio)
    }

    /// Isotropic parity classes (and adjoined classes) that are isolated.
    pub fn isolated_classes(&self) -> Vec<ResidueClass> {
        let mut out: Vec<ResidueClass> = self
            .iso_masks
            .iter()
            .filter(|&&m| self.witness_mask(m).is_none())
            .map(|&m| ResidueClass::new(2, (0..self.nullity).map(|i| (m >> i & 1) as i64).collect()))
            .collect();
        out.extend(self.extra_isolated.iter().cloned());
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub axiom: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub window: i64,
    pub verdicts: Vec<Verdict>,
}

impl AxiomReport {
    fn push(&mut self, axiom: &str, pass: bool, witness: Option<String>) {
        self.verdicts.push(Verdict { axiom: axiom.into(), pass, witness });
    }

    pub fn passed(&self, axiom: &str) -> bool {
        self.verdicts.iter().any(|v| v.axiom == axiom && v.pass)
    }

    /// R1 through R4: the EARS axioms proper.
    pub fn is_ears(&self) -> bool {
        ["R1", "R2", "R3", "R4"].iter().all(|a| self.passed(a))
    }
}

type QVec = Vec<BigRational>;

/// Membership queries for a root set known only partially.
pub trait RootOracle: Sync {
    /// `Some(answer)` when decidable, `None` outside the known region.
    fn contains(&self, v: &[BigRational]) -> Option<bool>;
}

/// Finite list of roots whose isotropic coordinates are known in a box.
#[derive(Clone, Debug)]
pub struct WindowRootSet {
    roots: Vec<QVec>,
    set: HashSet<QVec>,
    finite_dim: usize,
    radius: BigRational,
}

impl WindowRootSet {
    /// `roots` must contain every root whose coordinates past `finite_dim`
    /// lie in `[-radius, radius]`.
    pub fn new(roots: Vec<QVec>, finite_dim: usize, radius: i64) -> Self {
        let set = roots.iter().cloned().collect();
        WindowRootSet { roots, set, finite_dim, radius: q(radius) }
    }

    pub fn roots(&self) -> &[QVec] {
        &self.roots
    }
}

impl RootOracle for WindowRootSet {
    fn contains(&self, v: &[BigRational]) -> Option<bool> {
        if v[self.finite_dim..].iter().any(|x| x.abs() > self.radius) {
            return None;
        }
        Some(self.set.contains(v))
    }
}

/// An irreducible piece `R_i` of an explicit root set.
#[derive(Clone, Debug)]
pub struct EarsComponent {
    pub ty: FiniteType,
    pub nonisotropic: Vec<QVec>,
    /// Isotropic `δ` with `α + δ ∈ R` for some `α ∈ R_i^×`.
    pub isotropic: Vec<QVec>,
    /// Isotropic roots of the window lying in the Z-span of `R_i`.
    pub span_isotropic: Vec<QVec>,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub components: Vec<EarsComponent>,
    pub isolated: Vec<QVec>,
    /// Isotropic roots the window cannot classify.
    pub unresolved: Vec<QVec>,
    /// Root strings skipped because they leave the known region.
    pub inconclusive_strings: usize,
}

impl Decomposition {
    pub fn types(&self) -> Vec<FiniteType> {
        self.components.iter().map(|c| c.ty).collect()
    }
}

fn qadd(a: &[BigRational], b: &[BigRational]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn qscale(a: &[BigRational], k: i64) -> QVec {
    let k = q(k);
    a.iter().map(|x| x * &k).collect()
}

fn is_zero(v: &[BigRational]) -> bool {
    v.iter().all(|x| x.is_zero())
}

/// Splits an explicit root set into orthogonal irreducible pieces and the
/// isolated isotropic roots.
pub fn decompose(roots: &[QVec], form: &Form<BigRational>, oracle: &dyn RootOracle) -> Result<Decomposition> {
    let f = form.finite_dim();
    let bar = |v: &[BigRational]| -> QVec { v[..f].to_vec() };
    let norms: Vec<BigRational> = roots.iter().map(|v| form.pair(v, v)).collect();
    let (nonisotropic, isotropic): (Vec<usize>, Vec<usize>) = (0..roots.len()).partition(|&i| !norms[i].is_zero());
    if nonisotropic.is_empty() {
        return Err(Error::NotAnEars("no nonisotropic roots".into()));
    }
    for v in roots {
        let neg = qscale(v, -1);
        if oracle.contains(&neg) == Some(false) {
            return Err(Error::NotAnEars(format!("R1 fails at {}", fmt_qvec(v))));
        }
    }

    let bar_set: HashSet<QVec> = nonisotropic.iter().map(|&i| bar(&roots[i])).collect();
    let inconclusive = std::sync::atomic::AtomicUsize::new(0);
    let failure = nonisotropic.par_iter().find_map_first(|&a| {
        let alpha = &roots[a];
        for beta in roots {
            let member = |n: i64| -> Option<bool> {
                let v = qadd(beta, &qscale(alpha, n));
                if is_zero(&v) {
                    return Some(true);
                }
                let b = bar(&v);
                if !is_zero(&b) && !bar_set.contains(&b) {
                    return Some(false);
                }
                oracle.contains(&v)
            };
            let known: Option<Vec<bool>> = (-finroot::STRING_WINDOW..=finroot::STRING_WINDOW).map(member).collect();
            let Some(known) = known else {
                inconclusive.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                continue;
            };
            let ratio = q(2) * form.pair(alpha, beta) / &norms[a];
            let lookup = |n: i64| known[(n + finroot::STRING_WINDOW) as usize];
            if let Err(e) = finroot::root_string_by(lookup, &ratio) {
                return Some(format!("alpha = {}, beta = {}: {e}", fmt_qvec(alpha), fmt_qvec(beta)));
            }
        }
        None
    });
    if let Some(msg) = failure {
        return Err(Error::NotAnEars(format!("R4 fails: {msg}")));
    }

    // Components of the finite quotient.
    let bars: Vec<QVec> = {
        let mut b: Vec<QVec> = bar_set.iter().cloned().collect();
        b.sort();
        b
    };
    let bar_form = Form::new(Matrix::from_fn(f, f, |i, j| form.gram()[(i, j)].clone()), f)?;
    let comps = finroot::classify(&bars, &bar_form)?;
    let mut comp_of_bar: HashMap<QVec, usize> = HashMap::new();
    for (ci, c) in comps.iter().enumerate() {
        for &m in &c.members {
            comp_of_bar.insert(bars[m].clone(), ci);
        }
    }
    // Order components by their first nonisotropic root in input order.
    let mut order: Vec<usize> = Vec::new();
    for &i in &nonisotropic {
        let c = comp_of_bar[&bar(&roots[i])];
        if !order.contains(&c) {
            order.push(c);
        }
    }
    let mut components: Vec<EarsComponent> = order
        .iter()
        .map(|&c| EarsComponent { ty: comps[c].ty, nonisotropic: Vec::new(), isotropic: Vec::new(), span_isotropic: Vec::new() })
        .collect();
    let slot: HashMap<usize, usize> = order.iter().enumerate().map(|(k, &c)| (c, k)).collect();
    for &i in &nonisotropic {
        components[slot[&comp_of_bar[&bar(&roots[i])]]].nonisotropic.push(roots[i].clone());
    }

    let mut isolated = Vec::new();
    let mut unresolved = Vec::new();
    for &d in &isotropic {
        let delta = &roots[d];
        let mut attached = BTreeSet::new();
        let mut unknown = false;
        for &a in &nonisotropic {
            match oracle.contains(&qadd(&roots[a], delta)) {
                Some(true) => {
                    attached.insert(slot[&comp_of_bar[&bar(&roots[a])]]);
                }
                Some(false) => {}
                None => unknown = true,
            }
        }
        if attached.is_empty() {
            if unknown {
                unresolved.push(delta.clone());
            } else {
                isolated.push(delta.clone());
            }
        }
        for k in attached {
            components[k].isotropic.push(delta.clone());
        }
    }

    // R'_i = R_i^× ∪ (⟨R_i⟩ ∩ R^0), with the Z-span computed after clearing denominators.
    let denom = roots.iter().flatten().fold(num_bigint::BigInt::from(1), |acc, x| acc.lcm(x.denom()));
    let to_int = |v: &[BigRational]| -> Option<Vec<i64>> {
        v.iter().map(|x| crate::scalar::rational_to_i64(&(x * BigRational::from_integer(denom.clone())))).collect()
    };
    for comp in &mut components {
        let mut lattice = IntLattice::new(roots[0].len());
        for v in comp.nonisotropic.iter().chain(&comp.isotropic) {
            lattice.insert(&to_int(v).ok_or_else(|| Error::Invalid("coordinates too large".into()))?);
        }
        comp.span_isotropic = isotropic
            .iter()
            .map(|&d| &roots[d])
            .filter(|d| to_int(d).is_some_and(|v| lattice.contains(&v)))
            .cloned()
            .collect();
    }
    for comp in &mut components {
        if comp.ty.family() == Family::B && comp.ty.rank() == 2 {
            comp.ty = refine_rank_two(comp, form, oracle);
        }
    }

    Ok(Decomposition { components, isolated, unresolved, inconclusive_strings: inconclusive.into_inner() })
}

/// `B2` and `C2` share a finite root system; at the extended level the type
/// is `C2` when the long roots carry the strictly smaller set of isotropic
/// translates, and `B2` otherwise.
fn refine_rank_two(comp: &EarsComponent, form: &Form<BigRational>, oracle: &dyn RootOracle) -> FiniteType {
    let f = form.finite_dim();
    let nu = form.dim() - f;
    let norm = |v: &QVec| form.pair(v, v);
    let min = comp.nonisotropic.iter().map(norm).min().expect("nonempty");
    let iso_size = |v: &&QVec| v[f..].iter().map(|x| x.abs()).sum::<BigRational>();
    let pick = |short: bool| comp.nonisotropic.iter().filter(|v| (norm(v) == min) == short).min_by_key(iso_size).cloned();
    let (Some(s), Some(l)) = (pick(true), pick(false)) else {
        return FiniteType::new(Family::B, 2).expect("legal");
    };
    let shifted = |alpha: &QVec, d: &[i64]| -> Option<bool> {
        let mut v = alpha.clone();
        for (k, x) in d.iter().enumerate() {
            v[f + k] += q(*x);
        }
        oracle.contains(&v)
    };
    // Radius 2 so that translates by 2Λ are seen when roots only occur with even iso parts.
    let (mut short, mut long) = (BTreeSet::new(), BTreeSet::new());
    for d in box_points(2, nu) {
        if let (Some(a), Some(b)) = (shifted(&s, &d), shifted(&l, &d)) {
            if a {
                short.insert(d.clone());
            }
            if b {
                long.insert(d);
            }
        }
    }
    rank_two_type(&short, &long)
}

/// Type naming rule for a rank-two component with two root lengths.
pub fn rank_two_type<T: Ord>(short: &BTreeSet<T>, long: &BTreeSet<T>) -> FiniteType {
    if long.is_subset(short) && long.len() < short.len() {
        FiniteType::new(Family::C, 2).expect("legal")
    } else {
        FiniteType::new(Family::B, 2).expect("legal")
    }
}

/// Exact oracle for a presentation, for use with [`decompose`].
impl RootOracle for EarsPresentation {
    fn contains(&self, v: &[BigRational]) -> Option<bool> {
        let ints: Option<Vec<i64>> = v.iter().map(crate::scalar::rational_to_i64).collect();
        let Some(ints) = ints else {
            return Some(false);
        };
        let (fin, iso) = ints.split_at(self.rank());
        Some(self.contains_unchecked(&Root::new(fin.to_vec(), iso.to_vec())))
    }
}

pub fn fmt_qvec(v: &[BigRational]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

/// Parity classes of a list of isotropic vectors, as coset strings.
pub fn parity_labels(deltas: &[IntVector]) -> BTreeMap<String, usize> {
    let mut out = BTreeMap::new();
    for d in deltas {
        *out.entry(mask_string(mask_of(d.entries()), d.len())).or_insert(0) += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn example_35() -> EarsPresentation {
        let s = Semilattice::parse(&["000", "100", "010", "001"], false).unwrap();
        EarsPresentation::simple("A1".parse().unwrap(), s).unwrap()
    }

    #[test]
    fn membership_follows_the_semilattices() {
        let p = example_35();
        assert!(p.contains(&Root::new(vec![1], vec![1, 0, 0])).unwrap());
        assert!(p.contains(&Root::isotropic(1, vec![1, 1, 0])).unwrap());
        assert!(!p.contains(&Root::new(vec![1], vec![1, 1, 1])).unwrap());
        assert!(!p.contains(&Root::isotropic(1, vec![1, 1, 1])).unwrap());
        assert!(!p.contains(&Root::new(vec![2], vec![0, 0, 0])).unwrap());
        assert!(p.contains(&Root::new(vec![1], vec![0, 0])).is_err());
    }

    #[test]
    fn isotropic_classification() {
        let p = example_35();
        let c = p.classify_isotropic(&Root::isotropic(1, vec![1, 1, 0])).unwrap();
        assert_eq!(c, IsoClassification::nonisolated(Root::new(vec![1], vec![1, 0, 0])));
        assert!(!p.classify_isotropic(&Root::isotropic(1, vec![0, 0, 0])).unwrap().is_isolated());
        assert!(p.classify_isotropic(&Root::isotropic(1, vec![1, 1, 1])).is_err());
    }

    #[test]
    fn adjoined_classes_are_isolated_and_break_tameness() {
        // A1, ν = 1, S = 2Z: the odd isotropic class can be adjoined.
        let s = Semilattice::even(1);
        let p = EarsPresentation::new("A1".parse().unwrap(), s, None, None, vec![ResidueClass::new(2, vec![1])]).unwrap();
        assert!(p.classify_isotropic(&Root::isotropic(1, vec![3])).unwrap().is_isolated());
        let report = p.axioms_check(2);
        assert!(!report.passed("R5"));
        assert!(report.passed("R1"));
        let core = p.tame_core();
        assert!(core.axioms_check(2).passed("R5"));
        assert!(core.tame_core().extra_isolated().is_empty());
        // an adjoined class already in S+S is rejected
        assert!(EarsPresentation::new("A1".parse().unwrap(), Semilattice::full(1), None, None, vec![ResidueClass::new(2, vec![1])]).is_err());
    }

    #[test]
    fn example_presentation_satisfies_axioms() {
        let report = example_35().axioms_check(2);
        for v in &report.verdicts {
            assert!(v.pass, "{v:?}");
        }
    }

    #[test]
    fn presentation_json_round_trip() {
        let text = r#"{"type":"A1","nullity":3,"S":["000","100","010","001"],"L":null,"E":null,"extra_isolated":[]}"#;
        let p: EarsPresentation = serde_json::from_str(text).unwrap();
        assert_eq!(p.nullity(), 3);
        assert_eq!(serde_json::to_string(&p).unwrap(), text);
        let bad = r#"{"type":"B2","nullity":1,"S":["0","1"],"L":null,"E":null}"#;
        assert!(serde_json::from_str::<EarsPresentation>(bad).is_err());
    }

    #[test]
    fn bc_reducedness_depends_on_e() {
        let bc: FiniteType = "BC1".parse().unwrap();
        let odd = Semilattice::parse(&["1"], true).unwrap();
        let p = EarsPresentation::new(bc, Semilattice::full(1), None, Some(odd), vec![]).unwrap();
        let report = p.axioms_check(2);
        assert!(report.is_ears(), "{report:?}");
        assert!(report.passed("R7"));
        let even = Semilattice::parse(&["0"], true).unwrap();
        let p = EarsPresentation::new(bc, Semilattice::full(1), None, Some(even), vec![]).unwrap();
        let report = p.axioms_check(2);
        assert!(report.is_ears(), "{report:?}");
        assert!(!report.passed("R7"));
    }

    #[test]
    fn incompatible_semilattices_fail_root_strings() {
        // B2 with long roots on all of Z but short roots only on 2Z breaks R4:
        // the string of a long root through a short root jumps parity.
        let b2: FiniteType = "B2".parse().unwrap();
        let p = EarsPresentation::new(b2, Semilattice::even(1), Some(Semilattice::full(1)), None, vec![]).unwrap();
        assert!(!p.axioms_check(2).passed("R4"));
    }

    #[test]
    fn decompose_finite_subsystem() {
        let a3: FiniteType = "A3".parse().unwrap();
        let sys = a3.roots();
        let kept: Vec<QVec> =
            sys.roots().iter().filter(|r| r[1].rem_euclid(2) == 0).map(|r| finroot::to_rational_vec(r)).collect();
        let oracle = WindowRootSet::new(kept.clone(), 3, 0);
        let d = decompose(&kept, &sys.form(), &oracle).unwrap();
        assert_eq!(d.components.len(), 2);
        assert!(d.isolated.is_empty());
        for a in &d.components[0].nonisotropic {
            for b in &d.components[1].nonisotropic {
                assert!(sys.form().pair(a, b).is_zero());
            }
        }
    }

    #[test]
    fn decompose_presentation_window() {
        let p = example_35();
        let roots: Vec<QVec> = p.window_roots(2).iter().map(Root::to_rational).collect();
        let d = decompose(&roots, &p.form(), &p).unwrap();
        assert_eq!(d.components.len(), 1);
        assert_eq!(d.components[0].ty.to_string(), "A1");
        assert!(d.isolated.is_empty());
        assert_eq!(d.inconclusive_strings, 0);
    }
}
