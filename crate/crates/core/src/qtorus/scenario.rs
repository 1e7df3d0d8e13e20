//! Matrix involutions of `sl_n(A)` and their fixed points on a grading window.
//!
//! Every recipe grades `x^δ e_pq` by `2δ + λ_p - λ_q`. The involutions
//! preserve both the grading and the fixed Cartan `ḣ^σ`, so fixed points are
//! computed block by block: one block per `(ḣ^σ`-weight, degree`)` pair,
//! spanned by the matrix units of that weight and degree.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Display;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::matrix::{Block, TorusMatrix};
use super::torus::{TorusElement, TorusPresentation};
use crate::ears::{self, WindowRootSet};
use crate::error::{Error, Result};
use crate::finroot::FiniteType;
use crate::lattice::{box_points, mask_of, Form};
use crate::linalg::{EchelonBasis, Matrix};
use crate::scalar::{q, Field};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExampleId {
    /// `σ(Y) = -K Yᵗ K` on `sl_2ℓ` over Laurent polynomials.
    #[serde(rename = "3.6")]
    Orthogonal,
    /// `σ(Y) = -G⁻¹ Ȳᵗ G` on `sl_{2ℓ+m}(A)`.
    #[serde(rename = "3.7")]
    BarUnitary,
    /// `σ(Y) = -K⁻¹ Ȳᵗ K` on `sl_2ℓ(A)`, `K` skew.
    #[serde(rename = "3.8")]
    BarSymplectic,
    /// `σ(Y) = K Y K` on the orthogonal algebra `o_2n` over Laurent polynomials.
    #[serde(rename = "3.9")]
    TwistedOrthogonal,
    /// `σ(Y) = -K⁻¹ Ȳᵗ K` on the symplectic-type subalgebra of `sl_2n(A)`.
    #[serde(rename = "3.11")]
    TwistedSymplectic,
}

impl ExampleId {
    pub fn label(self) -> &'static str {
        match self {
            ExampleId::Orthogonal => "3.6",
            ExampleId::BarUnitary => "3.7",
            ExampleId::BarSymplectic => "3.8",
            ExampleId::TwistedOrthogonal => "3.9",
            ExampleId::TwistedSymplectic => "3.11",
        }
    }

    fn uses_tau(self) -> bool {
        matches!(self, ExampleId::BarUnitary | ExampleId::TwistedOrthogonal | ExampleId::TwistedSymplectic)
    }
}

/// A validated example instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ScenarioRepr", into = "ScenarioRepr")]
pub struct ExampleScenario {
    example: ExampleId,
    l: usize,
    m: usize,
    tau: Vec<Vec<i64>>,
    torus: TorusPresentation,
    window: i64,
}

#[derive(Clone, Serialize, Deserialize)]
struct ScenarioRepr {
    example: ExampleId,
    l: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tau: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    nu: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    e: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    q: Option<Vec<Vec<i64>>>,
    #[serde(default = "default_window")]
    window: i64,
}

fn default_window() -> i64 {
    2
}

impl TryFrom<ScenarioRepr> for ExampleScenario {
    type Error = Error;
    fn try_from(r: ScenarioRepr) -> Result<Self> {
        let nu = r.nu.or(r.e.as_ref().map(Vec::len)).unwrap_or(1);
        let e = r.e.unwrap_or_else(|| vec![1; nu]);
        let q = r.q.unwrap_or_else(|| vec![vec![1; e.len()]; e.len()]);
        if e.len() != nu {
            return Err(Error::RankMismatch { expected: nu, got: e.len() });
        }
        let torus = TorusPresentation::new(e, q)?;
        ExampleScenario::new(r.example, r.l, r.m.unwrap_or(1), r.tau, torus, r.window)
    }
}

impl From<ExampleScenario> for ScenarioRepr {
    fn from(s: ExampleScenario) -> Self {
        ScenarioRepr {
            example: s.example,
            l: s.l,
            m: s.example.uses_tau().then_some(s.m),
            tau: s.example.uses_tau().then_some(s.tau),
            nu: None,
            e: Some(s.torus.e().to_vec()),
            q: Some(s.torus.q().to_vec()),
            window: s.window,
        }
    }
}

impl ExampleScenario {
    /// `tau = None` picks the first admissible coset representatives in
    /// increasing mask order, with `τ₁ = 0` where required.
    pub fn new(
        example: ExampleId,
        l: usize,
        m: usize,
        tau: Option<Vec<Vec<i64>>>,
        torus: TorusPresentation,
        window: i64,
    ) -> Result<Self> {
        if l == 0 {
            return Err(Error::Invalid("l must be at least 1".into()));
        }
        if window < 0 {
            return Err(Error::Invalid("window radius must be nonnegative".into()));
        }
        let nu = torus.nu();
        match example {
            ExampleId::Orthogonal | ExampleId::TwistedOrthogonal if !torus.has_trivial_involution() => {
                return Err(Error::Invalid(format!("example {} needs a commutative torus with e = 1", example.label())));
            }
            ExampleId::BarSymplectic if l < 2 => {
                return Err(Error::Invalid("example 3.8 needs l >= 2".into()));
            }
            ExampleId::TwistedSymplectic if torus.has_trivial_involution() => {
                return Err(Error::Invalid("example 3.11 needs e != 1 or q != 1".into()));
            }
            _ => {}
        }
        let admissible = |mask: u64| -> bool {
            match example {
                ExampleId::BarUnitary => torus.z_eq().contains_mask(mask),
                ExampleId::TwistedSymplectic => !torus.z_eq().contains_mask(mask),
                _ => true,
            }
        };
        let tau = if !example.uses_tau() {
            Vec::new()
        } else if let Some(tau) = tau {
            if tau.len() != m {
                return Err(Error::Invalid(format!("expected {m} coset representatives, got {}", tau.len())));
            }
            for t in &tau {
                if t.len() != nu {
                    return Err(Error::RankMismatch { expected: nu, got: t.len() });
                }
                if !admissible(mask_of(t)) {
                    return Err(Error::Invalid(format!("tau {t:?} is not an admissible coset representative")));
                }
            }
            let mut masks: Vec<u64> = tau.iter().map(|t| mask_of(t)).collect();
            masks.sort();
            masks.dedup();
            if masks.len() != tau.len() {
                return Err(Error::Invalid("tau must represent distinct cosets of 2Z^nu".into()));
            }
            if example != ExampleId::TwistedSymplectic && tau[0].iter().any(|&x| x != 0) {
                return Err(Error::Invalid("tau_1 must be 0".into()));
            }
            tau
        } else {
            let masks: Vec<u64> = (0..1u64 << nu).filter(|&c| admissible(c)).take(m).collect();
            if masks.len() < m {
                return Err(Error::Invalid(format!("only {} admissible cosets available for m = {m}", masks.len())));
            }
            masks.iter().map(|&c| (0..nu).map(|i| ((c >> i) & 1) as i64).collect()).collect()
        };
        if example.uses_tau() && m == 0 {
            return Err(Error::Invalid("m must be at least 1".into()));
        }
        Ok(ExampleScenario { example, l, m, tau, torus, window })
    }

    pub fn example(&self) -> ExampleId {
        self.example
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn tau(&self) -> &[Vec<i64>] {
        &self.tau
    }

    pub fn torus(&self) -> &TorusPresentation {
        &self.torus
    }

    pub fn window(&self) -> i64 {
        self.window
    }

    pub fn with_window(&self, window: i64) -> Self {
        ExampleScenario { window, ..self.clone() }
    }

    pub fn nu(&self) -> usize {
        self.torus.nu()
    }

    /// Matrix size of the ambient `M_N(A)`.
    pub fn size(&self) -> usize {
        match self.example {
            ExampleId::Orthogonal | ExampleId::BarSymplectic => 2 * self.l,
            ExampleId::BarUnitary => 2 * self.l + self.m,
            ExampleId::TwistedOrthogonal | ExampleId::TwistedSymplectic => 2 * (self.l + self.m),
        }
    }
}

/// `y ↦ sign · left · op(y) · right`.
#[derive(Clone, Debug)]
pub struct Involution<T> {
    sign: i64,
    left: TorusMatrix<T>,
    right: TorusMatrix<T>,
    op: MatrixOp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum MatrixOp {
    Plain,
    Transpose,
    BarTranspose,
}

impl<T: Field> Involution<T> {
    pub fn apply(&self, t: &TorusPresentation, y: &TorusMatrix<T>) -> TorusMatrix<T> {
        let inner = match self.op {
            MatrixOp::Plain => y.clone(),
            MatrixOp::Transpose => y.transpose(),
            MatrixOp::BarTranspose => y.bar(t).transpose(),
        };
        self.left.mul(t, &inner).mul(t, &self.right).scale(&T::from_i64(self.sign))
    }
}

/// A matrix unit `x^δ e_pq`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Unit {
    pub p: usize,
    pub q: usize,
    pub delta: Vec<i64>,
}

impl Unit {
    pub fn matrix<T: Field>(&self, n: usize) -> TorusMatrix<T> {
        TorusMatrix::unit(n, self.p, self.q, self.delta.clone(), T::one())
    }
}

type BlockKey = (Vec<i64>, Vec<i64>);

/// All data of one example: grading shifts, Cartan subalgebras and involutions.
#[derive(Clone, Debug)]
pub struct Setup<T> {
    pub scenario: ExampleScenario,
    n: usize,
    lambda: Vec<Vec<i64>>,
    fixed_cartan: Vec<Vec<i64>>,
    full_cartan: Vec<Vec<i64>>,
    ambient: Vec<Involution<T>>,
    sigma: Involution<T>,
    f: Vec<TorusElement<T>>,
}

fn diag_block<T: Field>(entries: Vec<TorusElement<T>>, nu: usize) -> TorusMatrix<T> {
    let n = entries.len();
    let mut m = TorusMatrix::zero(n, nu);
    for (i, e) in entries.into_iter().enumerate() {
        m.set(i, i, e);
    }
    m
}

fn scaled_identity<T: Field>(n: usize, nu: usize, s: i64) -> TorusMatrix<T> {
    TorusMatrix::identity(n, nu).scale(&T::from_i64(s))
}

impl<T: Field> Setup<T> {
    pub fn new(sc: &ExampleScenario) -> Result<Self> {
        let t = sc.torus();
        let nu = sc.nu();
        let (l, m) = (sc.l, sc.m);
        let n = sc.size();
        let zero = vec![0; nu];
        let f: Vec<TorusElement<T>> = sc.tau.iter().map(|d| TorusElement::monomial(d.clone(), T::one())).collect();
        let f_inv: Vec<TorusElement<T>> = f.iter().map(|x| t.inverse_monomial(x).expect("monomial")).collect();
        let id = |k: usize| Some(TorusMatrix::<T>::identity(k, nu));
        let neg_id = |k: usize| Some(scaled_identity::<T>(k, nu, -1));
        let fm = || Some(diag_block(f.clone(), nu));
        let fm_inv = || Some(diag_block(f_inv.clone(), nu));
        let neg_fm_inv = || Some(diag_block(f_inv.clone(), nu).neg());
        let unit_vec = |k: usize, i: usize| -> Vec<i64> { (0..k).map(|j| i64::from(j == i)).collect() };
        let diff_vec = |k: usize, i: usize, j: usize| -> Vec<i64> {
            (0..k).map(|x| i64::from(x == i) - i64::from(x == j)).collect()
        };
        let sl_cartan: Vec<Vec<i64>> = (0..n).map(|i| unit_vec(n, i)).collect();
        let swap = |k: usize, sign: i64| -> TorusMatrix<T> {
            let lower = if sign > 0 { id(k) } else { neg_id(k) };
            TorusMatrix::from_blocks(&[k, k], nu, &[vec![None, id(k)], vec![lower, None]])
        };
        let invol = |sign, left: TorusMatrix<T>, right, op| Involution { sign, left, right, op };
        let inverse = |k: &TorusMatrix<T>| -> Result<TorusMatrix<T>> {
            k.inverse_monomial(t).ok_or_else(|| Error::Invalid("structure matrix is not invertible".into()))
        };

        let setup = match sc.example {
            ExampleId::Orthogonal => {
                let k = swap(l, 1);
                Setup {
                    scenario: sc.clone(),
                    n,
                    lambda: vec![zero.clone(); n],
                    fixed_cartan: (0..l).map(|i| diff_vec(n, i, l + i)).collect(),
                    full_cartan: sl_cartan,
                    ambient: Vec::new(),
                    sigma: invol(-1, k.clone(), k, MatrixOp::Transpose),
                    f,
                }
            }
            ExampleId::BarUnitary => {
                let g = TorusMatrix::from_blocks(
                    &[l, l, m],
                    nu,
                    &[vec![None, id(l), None], vec![id(l), None, None], vec![None, None, fm()]],
                );
                let mut lambda = vec![zero.clone(); 2 * l];
                lambda.extend(sc.tau.iter().cloned());
                Setup {
                    scenario: sc.clone(),
                    n,
                    lambda,
                    fixed_cartan: (0..l).map(|i| diff_vec(n, i, l + i)).collect(),
                    full_cartan: sl_cartan,
                    ambient: Vec::new(),
                    sigma: invol(-1, inverse(&g)?, g, MatrixOp::BarTranspose),
                    f,
                }
            }
            ExampleId::BarSymplectic => {
                let k = swap(l, -1);
                Setup {
                    scenario: sc.clone(),
                    n,
                    lambda: vec![zero.clone(); n],
                    fixed_cartan: (0..l).map(|i| diff_vec(n, i, l + i)).collect(),
                    full_cartan: sl_cartan,
                    ambient: Vec::new(),
                    sigma: invol(-1, inverse(&k)?, k, MatrixOp::BarTranspose),
                    f,
                }
            }
            ExampleId::TwistedOrthogonal | ExampleId::TwistedSymplectic => {
                let half = l + m;
                let mut lambda = vec![zero.clone(); n];
                for (i, tau) in sc.tau.iter().enumerate() {
                    lambda[l + i] = tau.iter().map(|x| -x).collect();
                    lambda[half + l + i] = tau.clone();
                }
                let sizes = [l, m, l, m];
                let (ambient, sigma) = if sc.example == ExampleId::TwistedOrthogonal {
                    let k0 = swap(half, 1);
                    let k = TorusMatrix::from_blocks(
                        &sizes,
                        nu,
                        &[
                            vec![id(l), None, None, None],
                            vec![None, None, None, fm()],
                            vec![None, None, id(l), None],
                            vec![None, fm_inv(), None, None],
                        ],
                    );
                    (invol(-1, k0.clone(), k0, MatrixOp::Transpose), invol(1, k.clone(), k, MatrixOp::Plain))
                } else {
                    let k0 = swap(half, -1);
                    let k = TorusMatrix::from_blocks(
                        &sizes,
                        nu,
                        &[
                            vec![None, None, id(l), None],
                            vec![None, neg_fm_inv(), None, None],
                            vec![neg_id(l), None, None, None],
                            vec![None, None, None, fm()],
                        ],
                    );
                    (
                        invol(-1, inverse(&k0)?, k0, MatrixOp::BarTranspose),
                        invol(-1, inverse(&k)?, k, MatrixOp::BarTranspose),
                    )
                };
                Setup {
                    scenario: sc.clone(),
                    n,
                    lambda,
                    fixed_cartan: (0..l).map(|i| diff_vec(n, i, half + i)).collect(),
                    full_cartan: (0..half).map(|i| diff_vec(n, i, half + i)).collect(),
                    ambient: vec![ambient],
                    sigma,
                    f,
                }
            }
        };
        Ok(setup)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn torus(&self) -> &TorusPresentation {
        self.scenario.torus()
    }

    pub fn sigma(&self, y: &TorusMatrix<T>) -> TorusMatrix<T> {
        self.sigma.apply(self.torus(), y)
    }

    /// Involutions cutting the ambient algebra `K` out of `gl_N(A)`.
    pub fn ambient(&self) -> &[Involution<T>] {
        &self.ambient
    }

    /// `F = diag(x^{τ_1}, …, x^{τ_m})`.
    pub fn f_block(&self) -> Block<T> {
        Block::diagonal(self.f.clone(), self.scenario.nu())
    }

    pub fn degree(&self, u: &Unit) -> Vec<i64> {
        (0..self.scenario.nu()).map(|k| 2 * u.delta[k] + self.lambda[u.p][k] - self.lambda[u.q][k]).collect()
    }

    fn weight_in(cartan: &[Vec<i64>], u: &Unit) -> Vec<i64> {
        cartan.iter().map(|h| h[u.p] - h[u.q]).collect()
    }

    /// `ḣ^σ`-weight.
    pub fn weight(&self, u: &Unit) -> Vec<i64> {
        Self::weight_in(&self.fixed_cartan, u)
    }

    pub fn full_weight(&self, u: &Unit) -> Vec<i64> {
        Self::weight_in(&self.full_cartan, u)
    }

    /// Units whose degree lies in `[-r, r]^ν`.
    pub fn units_in_window(&self, r: i64) -> Vec<Unit> {
        let nu = self.scenario.nu();
        let mut out = Vec::new();
        for gamma in box_points(r, nu) {
            for p in 0..self.n {
                for qq in 0..self.n {
                    let twice: Vec<i64> = (0..nu).map(|k| gamma[k] - self.lambda[p][k] + self.lambda[qq][k]).collect();
                    if twice.iter().all(|x| x.rem_euclid(2) == 0) {
                        out.push(Unit { p, q: qq, delta: twice.iter().map(|x| x / 2).collect() });
                    }
                }
            }
        }
        out
    }

    /// Whether `y` lies in `K`: fixed by the ambient involutions and with
    /// trace in `[A, A]`.
    pub fn in_ambient(&self, y: &TorusMatrix<T>) -> bool {
        let t = self.torus();
        self.ambient.iter().all(|a| &a.apply(t, y) == y)
            && y.trace().terms().keys().all(|d| t.in_commutator(d))
    }

    pub fn in_fixed(&self, y: &TorusMatrix<T>) -> bool {
        self.in_ambient(y) && &self.sigma(y) == y
    }

    /// Splits a matrix into its units.
    fn units_of(y: &TorusMatrix<T>) -> Vec<(Unit, T)> {
        let mut out = Vec::new();
        for (&(p, qq), e) in y.entries() {
            for (d, c) in e.terms() {
                out.push((Unit { p, q: qq, delta: d.clone() }, c.clone()));
            }
        }
        out
    }
}

/// One `(weight, degree)` block of `K^σ`.
#[derive(Clone, Debug)]
pub struct FixedBlock<T> {
    pub weight: Vec<i64>,
    pub degree: Vec<i64>,
    pub units: Vec<Unit>,
    pub basis: Vec<Vec<T>>,
}

impl<T: Field> FixedBlock<T> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn element(&self, coords: &[T], n: usize, nu: usize) -> TorusMatrix<T> {
        let mut m = TorusMatrix::zero(n, nu);
        for (u, c) in self.units.iter().zip(coords) {
            if !c.is_zero() {
                m = m.add(&TorusMatrix::unit(n, u.p, u.q, u.delta.clone(), c.clone()));
            }
        }
        m
    }

    pub fn is_root(&self) -> bool {
        self.dim() > 0 && (self.weight.iter().any(|&x| x != 0) || self.degree.iter().any(|&x| x != 0))
    }
}

/// Graded basis of `K^σ` on a window, with the automorphism checks.
#[derive(Clone, Debug)]
pub struct FixedSubalgebra<T> {
    pub setup: Setup<T>,
    pub window: i64,
    pub blocks: Vec<FixedBlock<T>>,
    pub shape: ShapeCheck,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShapeCheck {
    pub checked: usize,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

fn coords_in<T: Field>(index: &HashMap<Unit, usize>, len: usize, y: &TorusMatrix<T>) -> Option<Vec<T>> {
    let mut v = vec![T::zero(); len];
    for (u, c) in Setup::units_of(y) {
        let i = *index.get(&u)?;
        v[i] = v[i].clone() + c;
    }
    Some(v)
}

/// Fixed points of `σ` on `K` by blocks, after checking `σ² = 1`,
/// compatibility with the ambient involutions, and grading/Cartan
/// preservation on every unit of the window.
pub fn fixed_subalgebra<T: Field>(sc: &ExampleScenario) -> Result<FixedSubalgebra<T>> {
    let setup = Setup::<T>::new(sc)?;
    let t = setup.torus();
    let n = setup.n;
    let units = setup.units_in_window(sc.window);
    for u in &units {
        let y = u.matrix::<T>(n);
        let s = setup.sigma(&y);
        if setup.sigma(&s) != y {
            return Err(Error::AutomorphismAxiom(format!("A1: sigma^2 differs from the identity on x^{:?} e_{},{}", u.delta, u.p + 1, u.q + 1)));
        }
        for a in &setup.ambient {
            if a.apply(t, &a.apply(t, &y)) != y || a.apply(t, &s) != setup.sigma(&a.apply(t, &y)) {
                return Err(Error::AutomorphismAxiom("A1: sigma does not preserve the ambient algebra".into()));
            }
        }
    }

    let mut grouped: BTreeMap<BlockKey, Vec<Unit>> = BTreeMap::new();
    for u in units {
        grouped.entry((setup.weight(&u), setup.degree(&u))).or_default().push(u);
    }
    let mut blocks = Vec::new();
    for ((weight, degree), units) in grouped {
        let basis = block_fixed_space(&setup, &units, &degree, true)?;
        blocks.push(FixedBlock { weight, degree, units, basis });
    }
    let mut fixed = FixedSubalgebra { setup, window: sc.window, blocks, shape: ShapeCheck { checked: 0, pass: true, witness: None } };
    fixed.shape = check_shapes(&fixed);
    Ok(fixed)
}

/// Nullspace of the involution and trace constraints on one block.
fn block_fixed_space<T: Field>(setup: &Setup<T>, units: &[Unit], degree: &[i64], with_sigma: bool) -> Result<Vec<Vec<T>>> {
    let t = setup.torus();
    let n = setup.n;
    let len = units.len();
    let index: HashMap<Unit, usize> = units.iter().cloned().enumerate().map(|(i, u)| (u, i)).collect();
    let mut rows: Vec<Vec<T>> = Vec::new();
    let maps: Vec<&Involution<T>> = setup.ambient.iter().chain(with_sigma.then_some(&setup.sigma)).collect();
    for inv in maps {
        let mut cols: Vec<Vec<T>> = Vec::with_capacity(len);
        for u in units {
            let img = inv.apply(t, &u.matrix::<T>(n));
            let v = coords_in(&index, len, &img).ok_or_else(|| {
                Error::AutomorphismAxiom(format!(
                    "A2: image of x^{:?} e_{},{} leaves its weight and degree",
                    u.delta,
                    u.p + 1,
                    u.q + 1
                ))
            })?;
            cols.push(v);
        }
        for i in 0..len {
            rows.push((0..len).map(|j| cols[j][i].clone() - if i == j { T::one() } else { T::zero() }).collect());
        }
    }
    // tr(X) ≡ 0 mod [A, A]; only diagonal units of even degree contribute.
    let diagonal: Vec<usize> = (0..len).filter(|&i| units[i].p == units[i].q).collect();
    if !diagonal.is_empty() {
        let half: Vec<i64> = degree.iter().map(|x| x / 2).collect();
        if !t.in_commutator(&half) {
            rows.push((0..len).map(|i| if diagonal.contains(&i) { T::one() } else { T::zero() }).collect());
        }
    }
    if rows.is_empty() {
        return Ok((0..len).map(|i| (0..len).map(|j| if i == j { T::one() } else { T::zero() }).collect()).collect());
    }
    Ok(Matrix::from_rows(rows).nullspace())
}

impl<T: Field> FixedSubalgebra<T> {
    pub fn nu(&self) -> usize {
        self.setup.scenario.nu()
    }

    pub fn size(&self) -> usize {
        self.setup.n
    }

    pub fn block(&self, weight: &[i64], degree: &[i64]) -> Option<&FixedBlock<T>> {
        self.blocks.iter().find(|b| b.weight == weight && b.degree == degree)
    }

    /// Every basis element as a matrix, with its block.
    pub fn elements(&self) -> Vec<(&FixedBlock<T>, TorusMatrix<T>)> {
        let (n, nu) = (self.size(), self.nu());
        self.blocks.iter().flat_map(|b| b.basis.iter().map(move |v| (b, b.element(v, n, nu)))).collect()
    }

    /// `dim K^σ` summed over weights, per degree.
    pub fn dims_by_degree(&self) -> BTreeMap<Vec<i64>, usize> {
        let mut out = BTreeMap::new();
        for b in &self.blocks {
            *out.entry(b.degree.clone()).or_insert(0) += b.dim();
        }
        out
    }

    /// `0 ≠ α ∈ R ⇒ α|_{H^σ} ≠ 0`, with the roots of `K` computed on the window.
    pub fn a4_check(&self) -> Result<Option<String>> {
        let s = &self.setup;
        let mut grouped: BTreeMap<BlockKey, Vec<Unit>> = BTreeMap::new();
        for u in s.units_in_window(self.window) {
            grouped.entry((s.full_weight(&u), s.degree(&u))).or_default().push(u);
        }
        for ((w, d), units) in grouped {
            if w.iter().all(|&x| x == 0) && d.iter().all(|&x| x == 0) {
                continue;
            }
            if block_fixed_space(s, &units, &d, false)?.is_empty() {
                continue;
            }
            let restricted = s.weight(&units[0]);
            if restricted.iter().all(|&x| x == 0) && d.iter().all(|&x| x == 0) {
                return Ok(Some(format!("root with weight {w:?} restricts to zero")));
            }
        }
        Ok(None)
    }
}

pub fn fmt_matrix<T: Field + Display>(y: &TorusMatrix<T>) -> String {
    let parts: Vec<String> = y.entries().iter().map(|(&(i, j), v)| format!("e{},{}: {v}", i + 1, j + 1)).collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("; ")
    }
}

/// Block-shape descriptions of the fixed elements, one predicate per recipe.
fn shape_violation<T: Field>(setup: &Setup<T>, x: &TorusMatrix<T>) -> Option<&'static str> {
    let sc = &setup.scenario;
    let t = sc.torus();
    let (l, m) = (sc.l, sc.m);
    let f = setup.f_block();
    let f_inv = Block::diagonal(setup.f.iter().map(|e| t.inverse_monomial(e).expect("monomial")).collect(), sc.nu());
    let check = |ok: bool, msg: &'static str| if ok { None } else { Some(msg) };
    match sc.example {
        ExampleId::Orthogonal => {
            let a = x.block(0, l, 0, l);
            let b = x.block(0, l, l, l);
            let c = x.block(l, l, 0, l);
            let d = x.block(l, l, l, l);
            check(d == a.transpose().neg(), "lower right block is not -A^t")
                .or(check(b.transpose() == b.neg(), "B^t != -B"))
                .or(check(c.transpose() == c.neg(), "C^t != -C"))
        }
        ExampleId::BarSymplectic => {
            let a = x.block(0, l, 0, l);
            let s = x.block(0, l, l, l);
            let tt = x.block(l, l, 0, l);
            let d = x.block(l, l, l, l);
            check(d == a.bar_t(t).neg(), "lower right block is not -bar(A)^t")
                .or(check(s.bar_t(t) == s, "bar(S)^t != S"))
                .or(check(tt.bar_t(t) == tt, "bar(T)^t != T"))
        }
        ExampleId::BarUnitary => {
            let o = [0, l, 2 * l];
            let sz = [l, l, m];
            let blk = |i: usize, j: usize| x.block(o[i], sz[i], o[j], sz[j]);
            let (a, s, tt) = (blk(0, 0), blk(0, 1), blk(1, 0));
            let (c, d, b) = (blk(2, 0), blk(2, 1), blk(2, 2));
            check(blk(0, 2) == d.bar_t(t).mul(t, &f).neg(), "upper right block is not -bar(D)^t F")
                .or(check(blk(1, 1) == a.bar_t(t).neg(), "middle block is not -bar(A)^t"))
                .or(check(blk(1, 2) == c.bar_t(t).mul(t, &f).neg(), "block (2,3) is not -bar(C)^t F"))
                .or(check(s.bar_t(t) == s.neg(), "bar(S)^t != -S"))
                .or(check(tt.bar_t(t) == tt.neg(), "bar(T)^t != -T"))
                .or(check(f_inv.mul(t, &b.bar_t(t)).mul(t, &f) == b.neg(), "F^-1 bar(B)^t F != -B"))
        }
        ExampleId::TwistedOrthogonal => {
            let o = [0, l, l + m, 2 * l + m];
            let sz = [l, m, l, m];
            let blk = |i: usize, j: usize| x.block(o[i], sz[i], o[j], sz[j]);
            let (a, s, tt) = (blk(0, 0), blk(0, 2), blk(2, 0));
            let (c, p, d, b) = (blk(3, 0), blk(3, 1), blk(3, 2), blk(3, 3));
            let tr = |y: &Block<T>| y.transpose();
            check(blk(0, 1) == tr(&d).neg(), "block (1,2) is not -D^t")
                .or(check(blk(0, 3) == tr(&d).mul(t, &f).neg(), "block (1,4) is not -D^t F"))
                .or(check(blk(1, 0) == f.mul(t, &c), "block (2,1) is not F C"))
                .or(check(blk(1, 1) == tr(&b).neg(), "block (2,2) is not -B^t"))
                .or(check(blk(1, 2) == f.mul(t, &d), "block (2,3) is not F D"))
                .or(check(blk(1, 3) == f.mul(t, &p).mul(t, &f), "block (2,4) is not F P F"))
                .or(check(blk(2, 1) == tr(&c).neg(), "block (3,2) is not -C^t"))
                .or(check(blk(2, 2) == tr(&a).neg(), "block (3,3) is not -A^t"))
                .or(check(blk(2, 3) == tr(&c).mul(t, &f).neg(), "block (3,4) is not -C^t F"))
                .or(check(tr(&s) == s.neg(), "S^t != -S"))
                .or(check(tr(&tt) == tt.neg(), "T^t != -T"))
                .or(check(tr(&p) == p.neg(), "P^t != -P"))
                .or(check(f_inv.mul(t, &tr(&b)).mul(t, &f) == b.neg(), "F^-1 B^t F != -B"))
        }
        ExampleId::TwistedSymplectic => {
            let o = [0, l, l + m, 2 * l + m];
            let sz = [l, m, l, m];
            let blk = |i: usize, j: usize| x.block(o[i], sz[i], o[j], sz[j]);
            let (a, s, tt) = (blk(0, 0), blk(0, 2), blk(2, 0));
            let (c, p, d, b) = (blk(3, 0), blk(3, 1), blk(3, 2), blk(3, 3));
            let bt = |y: &Block<T>| y.bar_t(t);
            // The upper right corner carries a factor F, as in the untwisted-bar shape.
            check(blk(0, 1) == bt(&d).neg(), "block (1,2) is not -bar(D)^t")
                .or(check(blk(0, 3) == bt(&d).mul(t, &f), "block (1,4) is not bar(D)^t F"))
                .or(check(blk(1, 0) == f.mul(t, &c).neg(), "block (2,1) is not -F C"))
                .or(check(blk(1, 1) == bt(&b).neg(), "block (2,2) is not -bar(B)^t"))
                .or(check(blk(1, 2) == f.mul(t, &d).neg(), "block (2,3) is not -F D"))
                .or(check(blk(1, 3) == f.mul(t, &p).mul(t, &f), "block (2,4) is not F P F"))
                .or(check(blk(2, 1) == bt(&c), "block (3,2) is not bar(C)^t"))
                .or(check(blk(2, 2) == bt(&a).neg(), "block (3,3) is not -bar(A)^t"))
                .or(check(blk(2, 3) == bt(&c).mul(t, &f).neg(), "block (3,4) is not -bar(C)^t F"))
                .or(check(bt(&s) == s, "bar(S)^t != S"))
                .or(check(bt(&tt) == tt, "bar(T)^t != T"))
                .or(check(bt(&p) == p, "bar(P)^t != P"))
                .or(check(f_inv.mul(t, &bt(&b)).mul(t, &f) == b.neg(), "F^-1 bar(B)^t F != -B"))
        }
    }
}

fn check_shapes<T: Field>(fixed: &FixedSubalgebra<T>) -> ShapeCheck {
    let mut checked = 0;
    for (b, x) in fixed.elements() {
        checked += 1;
        if let Some(msg) = shape_violation(&fixed.setup, &x) {
            return ShapeCheck {
                checked,
                pass: false,
                witness: Some(format!("{msg} (weight {:?}, degree {:?})", b.weight, b.degree)),
            };
        }
    }
    ShapeCheck { checked, pass: true, witness: None }
}

/// A root of `G^σ` seen in the window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WindowRoot {
    pub weight: Vec<i64>,
    pub degree: Vec<i64>,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootsReport {
    pub example: ExampleId,
    pub window: i64,
    pub a4: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a4_witness: Option<String>,
    pub shape: ShapeCheck,
    pub dims_by_degree: BTreeMap<String, usize>,
    pub roots: Vec<WindowRoot>,
    pub k: usize,
    pub types: Vec<FiniteType>,
    pub isolated_in_window: Vec<Vec<i64>>,
    pub unresolved_in_window: usize,
}

fn degree_label(d: &[i64]) -> String {
    let parts: Vec<String> = d.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

/// Window roots of the fixed algebra with respect to `H^σ` and their
/// decomposition into irreducible components.
pub fn roots_of_fixed(sc: &ExampleScenario) -> Result<RootsReport> {
    let fixed = fixed_subalgebra::<BigRational>(sc)?;
    roots_report(&fixed)
}

pub fn roots_report<T: Field>(fixed: &FixedSubalgebra<T>) -> Result<RootsReport> {
    let sc = &fixed.setup.scenario;
    let a4_witness = fixed.a4_check()?;
    let roots: Vec<WindowRoot> = fixed
        .blocks
        .iter()
        .filter(|b| b.is_root())
        .map(|b| WindowRoot { weight: b.weight.clone(), degree: b.degree.clone(), multiplicity: b.dim() })
        .collect();
    let dims_by_degree = fixed.dims_by_degree().into_iter().map(|(d, n)| (degree_label(&d), n)).collect();
    let mut report = RootsReport {
        example: sc.example,
        window: fixed.window,
        a4: a4_witness.is_none(),
        a4_witness,
        shape: fixed.shape.clone(),
        dims_by_degree,
        roots,
        k: 0,
        types: Vec::new(),
        isolated_in_window: Vec::new(),
        unresolved_in_window: 0,
    };
    if !report.a4 {
        return Ok(report);
    }
    let vectors: Vec<Vec<BigRational>> =
        report.roots.iter().map(|r| r.weight.iter().chain(&r.degree).map(|&x| q(x)).collect()).collect();
    let form = Form::with_radical(&Matrix::identity(sc.l), sc.nu())?;
    let oracle = WindowRootSet::new(vectors.clone(), sc.l, fixed.window);
    let dec = ears::decompose(&vectors, &form, &oracle)?;
    report.k = dec.components.len();
    report.types = dec.types();
    let to_ints = |v: &Vec<BigRational>| v.iter().map(|x| crate::scalar::rational_to_i64(x).expect("integral")).collect();
    report.isolated_in_window = dec.isolated.iter().map(to_ints).collect();
    report.unresolved_in_window = dec.unresolved.len();
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TamenessVerdict {
    Equal,
    ProperInclusion,
    InconclusiveAtRadius,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoreWitness {
    pub weight: Vec<i64>,
    pub degree: Vec<i64>,
    pub element: String,
}

/// The fixed element with `P = I_m`, `B = F`, `A = S = T = C = D = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExplicitWitness {
    pub element: String,
    pub degree: Vec<i64>,
    pub in_fixed: bool,
    pub in_core: bool,
    pub orthogonal_to_core: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TamenessReport {
    pub example: ExampleId,
    pub window: i64,
    pub generator_window: i64,
    pub verdict: TamenessVerdict,
    pub summary: String,
    pub core_dims: BTreeMap<String, usize>,
    pub fixed_dims: BTreeMap<String, usize>,
    pub core_central_rank: usize,
    pub core_is_fixed: bool,
    pub truncated_brackets: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<CoreWitness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub explicit_witness: Option<ExplicitWitness>,
}

/// Window core `G_c^σ` (bracket closure of the nonisotropic fixed root
/// spaces) compared with `G^σ ∩ G_c = K^σ ⊕ C`.
///
/// Generators are taken on the window of radius `2r`; brackets leaving it are
/// dropped and counted. The comparison is made on radius `r`.
pub fn core_and_tameness(sc: &ExampleScenario) -> Result<TamenessReport> {
    core_and_tameness_generic::<BigRational>(sc)
}

pub fn core_and_tameness_generic<T: Field + Display>(sc: &ExampleScenario) -> Result<TamenessReport> {
    let r = sc.window;
    let wide_r = 2 * r;
    let mut report = TamenessReport {
        example: sc.example,
        window: r,
        generator_window: wide_r,
        verdict: TamenessVerdict::InconclusiveAtRadius,
        summary: format!("window radius {r} is too small to decide"),
        core_dims: BTreeMap::new(),
        fixed_dims: BTreeMap::new(),
        core_central_rank: 0,
        core_is_fixed: true,
        truncated_brackets: 0,
        witness: None,
        explicit_witness: None,
    };
    if r < 2 {
        return Ok(report);
    }
    let fixed = fixed_subalgebra::<T>(&sc.with_window(wide_r))?;
    let setup = &fixed.setup;
    let t = setup.torus();
    let (n, nu) = (fixed.size(), fixed.nu());

    let key_of: HashMap<BlockKey, usize> =
        fixed.blocks.iter().enumerate().map(|(i, b)| ((b.weight.clone(), b.degree.clone()), i)).collect();
    let indexes: Vec<HashMap<Unit, usize>> =
        fixed.blocks.iter().map(|b| b.units.iter().cloned().enumerate().map(|(i, u)| (u, i)).collect()).collect();
    let mut core: Vec<EchelonBasis<T>> = fixed.blocks.iter().map(|b| EchelonBasis::new(b.units.len())).collect();
    let mut members: Vec<Vec<TorusMatrix<T>>> = vec![Vec::new(); fixed.blocks.len()];

    let generators: Vec<(usize, TorusMatrix<T>)> = fixed
        .blocks
        .iter()
        .enumerate()
        .filter(|(_, b)| b.weight.iter().any(|&x| x != 0))
        .flat_map(|(i, b)| b.basis.iter().map(move |v| (i, b.element(v, n, nu))))
        .collect();
    let mut work: Vec<(usize, TorusMatrix<T>)> = Vec::new();
    for (i, g) in &generators {
        let v = coords_in(&indexes[*i], fixed.blocks[*i].units.len(), g).expect("own block");
        if core[*i].insert(&v) {
            members[*i].push(g.clone());
            work.push((*i, g.clone()));
        }
    }
    let mut truncated = 0;
    while let Some((ci, c)) = work.pop() {
        for (gi, g) in &generators {
            let w: Vec<i64> = fixed.blocks[*gi].weight.iter().zip(&fixed.blocks[ci].weight).map(|(a, b)| a + b).collect();
            let d: Vec<i64> = fixed.blocks[*gi].degree.iter().zip(&fixed.blocks[ci].degree).map(|(a, b)| a + b).collect();
            if d.iter().any(|x| x.abs() > wide_r) {
                truncated += 1;
                continue;
            }
            let b = g.bracket(t, &c);
            if b.is_zero() {
                continue;
            }
            let Some(&bi) = key_of.get(&(w, d)) else {
                return Err(Error::Invalid("bracket landed outside every block".into()));
            };
            let v = coords_in(&indexes[bi], fixed.blocks[bi].units.len(), &b).expect("homogeneous bracket");
            if core[bi].insert(&v) {
                members[bi].push(b.clone());
                work.push((bi, b));
            }
        }
    }
    report.truncated_brackets = truncated;

    // Central part of the core: [x, y]_G picks up Σ_i (d_i x, y) c_i = (x, y) deg(x).
    let mut central = EchelonBasis::<T>::new(nu);
    for (bi, b) in fixed.blocks.iter().enumerate() {
        if b.degree.iter().all(|&x| x == 0) || members[bi].is_empty() {
            continue;
        }
        let neg_w: Vec<i64> = b.weight.iter().map(|x| -x).collect();
        let neg_d: Vec<i64> = b.degree.iter().map(|x| -x).collect();
        let Some(&oi) = key_of.get(&(neg_w, neg_d)) else { continue };
        if members[bi].iter().any(|x| members[oi].iter().any(|y| !x.form(t, y).is_zero())) {
            central.insert(&b.degree.iter().map(|&x| T::from_i64(x)).collect::<Vec<_>>());
        }
    }
    report.core_central_rank = central.rank();
    report.core_is_fixed = members.iter().flatten().all(|x| setup.in_fixed(x));

    let inner = |d: &[i64]| d.iter().all(|x| x.abs() <= r);
    let mut witness = None;
    for (bi, b) in fixed.blocks.iter().enumerate() {
        if !inner(&b.degree) {
            continue;
        }
        let label = degree_label(&b.degree);
        *report.core_dims.entry(label.clone()).or_insert(0) += core[bi].rank();
        *report.fixed_dims.entry(label).or_insert(0) += b.dim();
        if witness.is_none() && core[bi].rank() < b.dim() {
            let v = b.basis.iter().find(|v| !core[bi].contains(v)).expect("dimension gap");
            witness = Some(CoreWitness {
                weight: b.weight.clone(),
                degree: b.degree.clone(),
                element: fmt_matrix(&b.element(v, n, nu)),
            });
        }
    }
    let equal = witness.is_none() && report.core_central_rank == nu;
    report.verdict = if equal { TamenessVerdict::Equal } else { TamenessVerdict::ProperInclusion };
    report.summary = if equal { "core = G^sigma ∩ G_c".into() } else { "core ≠ G^sigma ∩ G_c".into() };
    report.witness = witness;

    if sc.example == ExampleId::TwistedSymplectic {
        let (l, m) = (sc.l, sc.m);
        // Fill in the dependent blocks: -bar(B)^t at (2,2) and F P F at (2,4).
        let mut x = TorusMatrix::<T>::zero(n, nu);
        let off = 2 * l + m;
        for i in 0..m {
            let f = &setup.f[i];
            x.set(off + i, l + i, TorusElement::one(nu));
            x.set(off + i, off + i, f.clone());
            x.set(l + i, l + i, t.bar(f).neg());
            x.set(l + i, off + i, t.mul_unchecked(f, f));
        }
        let units = Setup::units_of(&x);
        let (w, d) = (setup.weight(&units[0].0), setup.degree(&units[0].0));
        let in_core = match key_of.get(&(w, d.clone())) {
            Some(&bi) => coords_in(&indexes[bi], fixed.blocks[bi].units.len(), &x).is_some_and(|v| core[bi].contains(&v)),
            None => false,
        };
        let orthogonal = members.iter().flatten().all(|y| x.form(t, y).is_zero());
        report.explicit_witness = Some(ExplicitWitness {
            element: fmt_matrix(&x),
            degree: d,
            in_fixed: setup.in_fixed(&x),
            in_core,
            orthogonal_to_core: orthogonal,
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn scenario(json: &str) -> ExampleScenario {
        serde_json::from_str(json).unwrap()
    }

    #[test]
    fn scenario_defaults_and_validation() {
        let sc = scenario(r#"{"example":"3.7","l":1,"e":[-1],"q":[[1]]}"#);
        assert_eq!(sc.tau(), &[vec![0]]);
        assert_eq!(sc.window(), 2);
        let sc = scenario(r#"{"example":"3.11","l":1,"e":[1,1],"q":[[1,-1],[-1,1]]}"#);
        assert_eq!(sc.tau(), &[vec![1, 1]]);
        assert!(serde_json::from_str::<ExampleScenario>(r#"{"example":"3.6","l":1,"e":[-1]}"#).is_err());
        assert!(serde_json::from_str::<ExampleScenario>(r#"{"example":"3.11","l":1,"e":[1]}"#).is_err());
        assert!(serde_json::from_str::<ExampleScenario>(r#"{"example":"3.9","l":1,"m":2,"tau":[[0],[2]]}"#).is_err());
        let back: ExampleScenario = serde_json::from_str(&serde_json::to_string(&sc).unwrap()).unwrap();
        assert_eq!(back, sc);
    }

    #[test]
    fn orthogonal_degree_zero() {
        let sc = scenario(r#"{"example":"3.6","l":1,"window":0}"#);
        let fixed = fixed_subalgebra::<Rational>(&sc).unwrap();
        let dims = fixed.dims_by_degree();
        assert_eq!(dims[&vec![0]], 1);
        let (_, x) = &fixed.elements()[0];
        let mut h = TorusMatrix::<Rational>::unit(2, 0, 0, vec![0], q(1));
        h.set(1, 1, TorusElement::monomial(vec![0], q(-1)));
        let ratio = x.get(0, 0).coefficient(&[0]);
        assert_eq!(x, &h.scale(&ratio));
    }

    #[test]
    fn orthogonal_fixes_cartan_difference() {
        let sc = scenario(r#"{"example":"3.6","l":2,"window":0}"#);
        let setup = Setup::<Rational>::new(&sc).unwrap();
        let mut h = TorusMatrix::<Rational>::unit(4, 0, 0, vec![0], q(1));
        h.set(2, 2, TorusElement::monomial(vec![0], q(-1)));
        assert_eq!(setup.sigma(&h), h);
    }

    #[test]
    fn twisted_orthogonal_shape() {
        let sc = scenario(r#"{"example":"3.9","l":1,"m":1,"window":2}"#);
        let fixed = fixed_subalgebra::<Rational>(&sc).unwrap();
        assert!(fixed.shape.pass, "{:?}", fixed.shape);
        assert!(fixed.shape.checked > 0);
    }

    #[test]
    fn every_recipe_has_matching_shape() {
        for json in [
            r#"{"example":"3.6","l":2,"window":2}"#,
            r#"{"example":"3.7","l":1,"e":[-1],"window":2}"#,
            r#"{"example":"3.7","l":1,"m":2,"e":[1,1],"q":[[1,-1],[-1,1]],"window":1}"#,
            r#"{"example":"3.8","l":2,"e":[1,1],"q":[[1,-1],[-1,1]],"window":2}"#,
            r#"{"example":"3.9","l":2,"m":2,"window":2}"#,
            r#"{"example":"3.11","l":1,"e":[1,1],"q":[[1,-1],[-1,1]],"window":2}"#,
        ] {
            let fixed = fixed_subalgebra::<Rational>(&scenario(json)).unwrap();
            assert!(fixed.shape.pass, "{json}: {:?}", fixed.shape);
        }
    }

    #[test]
    fn small_types() {
        let rep = roots_of_fixed(&scenario(r#"{"example":"3.6","l":2,"window":2}"#)).unwrap();
        assert!(rep.a4);
        assert_eq!(rep.types.iter().map(|t| t.to_string()).collect::<Vec<_>>(), vec!["A1", "A1"]);
        let rep = roots_of_fixed(&scenario(r#"{"example":"3.7","l":1,"e":[-1],"window":2}"#)).unwrap();
        assert_eq!(rep.types.iter().map(|t| t.to_string()).collect::<Vec<_>>(), vec!["BC1"]);
        let rep = roots_of_fixed(&scenario(r#"{"example":"3.9","l":1,"m":1,"window":2}"#)).unwrap();
        assert_eq!(rep.types.iter().map(|t| t.to_string()).collect::<Vec<_>>(), vec!["A1"]);
    }

    #[test]
    fn tameness_probe() {
        let rep = core_and_tameness(&scenario(r#"{"example":"3.9","l":1,"m":1,"window":2}"#)).unwrap();
        assert_eq!(rep.verdict, TamenessVerdict::Equal, "{rep:?}");
        let rep = core_and_tameness(&scenario(r#"{"example":"3.9","l":1,"m":2,"window":2}"#)).unwrap();
        assert_eq!(rep.verdict, TamenessVerdict::ProperInclusion, "{rep:?}");
        assert!(rep.witness.is_some());
        let rep = core_and_tameness(&scenario(r#"{"example":"3.9","l":1,"m":1,"window":1}"#)).unwrap();
        assert_eq!(rep.verdict, TamenessVerdict::InconclusiveAtRadius);
    }
}
