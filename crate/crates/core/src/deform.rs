//! Cohomology of a codifferential and order-by-order construction of
//! miniversal deformations with their relations.
//!
//! Conventions. Cochains with parameters are written cochain-then-parameter
//! (`φθ`). The obstruction at order `n` is `½[dₙ,dₙ]`, split as
//! `−D(αₙ₊₁) + Σ δᵢRⁱ` plus a part that vanishes modulo the relations.
//! On spaces with an even part, `L` is an infinite product; every result is
//! exact modulo `L_{>K}`, where `K` is the stable arity of the window.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::cochain::{basis_keys, bracket, check_codifferential, ArityWindow, BasisKey, Cochain};
use crate::error::{Error, Result};
use crate::exactla::{Echelon, PivotRule, RatMatrix};
use crate::gspace::{frac, sign, GradedSpace, Parity, Scalar};
use crate::paramring::{ParamMonomial, ParamPoly, ParamRing, RelationIdeal};

/// An element of `L ⊗ A`: one coefficient cochain per parameter monomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamCochain {
    space: GradedSpace,
    ring: Arc<ParamRing>,
    parity: Parity,
    terms: BTreeMap<ParamMonomial, Cochain>,
}

impl ParamCochain {
    pub fn zero(space: &GradedSpace, ring: &Arc<ParamRing>) -> Self {
        ParamCochain {
            space: space.clone(),
            ring: ring.clone(),
            parity: Parity::Even,
            terms: BTreeMap::new(),
        }
    }

    /// A parameter-free cochain, viewed with coefficient 1.
    pub fn constant(c: &Cochain, ring: &Arc<ParamRing>) -> Self {
        let mut out = ParamCochain::zero(c.space(), ring);
        out.add_cochain_monomial(c, ParamMonomial::one(ring), &Scalar::one())
            .expect("a single homogeneous term");
        out
    }

    /// `c·p` for a cochain `c` and a polynomial `p`.
    pub fn term(c: &Cochain, p: &ParamPoly) -> Result<Self> {
        let mut out = ParamCochain::zero(c.space(), p.ring());
        out.add_term(c, p)?;
        Ok(out)
    }

    pub fn add_term(&mut self, c: &Cochain, p: &ParamPoly) -> Result<()> {
        if c.space() != &self.space {
            return Err(Error::SpaceMismatch);
        }
        if p.ring() != &self.ring {
            return Err(Error::RingMismatch);
        }
        for (m, x) in p.terms() {
            self.add_cochain_monomial(c, m.clone(), x)?;
        }
        Ok(())
    }

    pub(crate) fn add_cochain_monomial(&mut self, c: &Cochain, m: ParamMonomial, x: &Scalar) -> Result<()> {
        if c.is_zero() || x.is_zero() {
            return Ok(());
        }
        let p = c.parity() + m.parity(&self.ring);
        if self.terms.is_empty() {
            self.parity = p;
        } else if p != self.parity {
            return Err(Error::MixedParity);
        }
        let slot = self.terms.entry(m.clone()).or_insert_with(|| Cochain::zero(&self.space));
        *slot = slot.add(&c.scale(x))?;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
        if self.terms.is_empty() {
            self.parity = Parity::Even;
        }
        Ok(())
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn ring(&self) -> &Arc<ParamRing> {
        &self.ring
    }

    /// Total parity (cochain parity plus parameter parity); even for zero.
    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient cochain of each parameter monomial.
    pub fn terms(&self) -> &BTreeMap<ParamMonomial, Cochain> {
        &self.terms
    }

    /// The cochain with every parameter sent to zero.
    pub fn augment(&self) -> Cochain {
        self.terms
            .get(&ParamMonomial::one(&self.ring))
            .cloned()
            .unwrap_or_else(|| Cochain::zero(&self.space))
    }

    /// Coefficient polynomial of each basis cochain.
    pub fn by_basis(&self) -> BTreeMap<BasisKey, ParamPoly> {
        let mut out: BTreeMap<BasisKey, ParamPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            for (key, x) in c.coordinates() {
                out.entry(key)
                    .or_insert_with(|| ParamPoly::zero(&self.ring))
                    .add_term(m.clone(), x);
            }
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    /// Rebuilds an element from basis-cochain coefficients.
    pub fn from_basis(space: &GradedSpace, ring: &Arc<ParamRing>, coeffs: &BTreeMap<BasisKey, ParamPoly>) -> Result<Self> {
        let mut out = ParamCochain::zero(space, ring);
        for (key, p) in coeffs {
            out.add_term(&Cochain::from_key(space, key)?, p)?;
        }
        Ok(out)
    }

    pub fn add(&self, other: &ParamCochain) -> Result<ParamCochain> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_cochain_monomial(c, m.clone(), &Scalar::one())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &ParamCochain) -> Result<ParamCochain> {
        self.add(&other.scale(&-Scalar::one()))
    }

    pub fn scale(&self, x: &Scalar) -> ParamCochain {
        let mut out = ParamCochain::zero(&self.space, &self.ring);
        for (m, c) in &self.terms {
            out.add_cochain_monomial(c, m.clone(), x).expect("scaling keeps parity");
        }
        out
    }

    fn filtered(&self, keep: impl Fn(&ParamMonomial) -> bool) -> ParamCochain {
        let mut out = ParamCochain::zero(&self.space, &self.ring);
        for (m, c) in self.terms.iter().filter(|(m, _)| keep(m)) {
            out.add_cochain_monomial(c, m.clone(), &Scalar::one()).expect("subset keeps parity");
        }
        out
    }

    /// Terms of parameter degree at most `max_degree`.
    pub fn truncate_degree(&self, max_degree: u32) -> ParamCochain {
        self.filtered(|m| m.degree() <= max_degree)
    }

    /// Terms of parameter degree exactly `degree`.
    pub fn homogeneous(&self, degree: u32) -> ParamCochain {
        self.filtered(|m| m.degree() == degree)
    }

    pub fn truncate_arity(&self, window: ArityWindow) -> ParamCochain {
        let mut out = ParamCochain::zero(&self.space, &self.ring);
        for (m, c) in &self.terms {
            out.add_cochain_monomial(&c.truncate(window), m.clone(), &Scalar::one())
                .expect("subset keeps parity");
        }
        out
    }

    /// Highest parameter degree present.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(ParamMonomial::degree).max().unwrap_or(0)
    }

    /// Applies `f` to every basis-cochain coefficient; the result lives over `target`.
    pub fn map_coefficients<F>(&self, target: &Arc<ParamRing>, f: F) -> Result<ParamCochain>
    where
        F: Fn(&ParamPoly) -> Result<ParamPoly>,
    {
        let mut out = ParamCochain::zero(&self.space, target);
        for (key, p) in self.by_basis() {
            out.add_term(&Cochain::from_key(&self.space, &key)?, &f(&p)?)?;
        }
        Ok(out)
    }

    fn check_compatible(&self, other: &ParamCochain) -> Result<()> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        Ok(())
    }
}

/// `[x·p, y·q] = (−1)^{|p||y|} [x,y]·pq`, truncated to the arity window and
/// to parameter degree `max_degree`.
pub fn param_bracket(a: &ParamCochain, b: &ParamCochain, window: ArityWindow, max_degree: u32) -> Result<ParamCochain> {
    a.check_compatible(b)?;
    let ring = &a.ring;
    let mut out = ParamCochain::zero(&a.space, ring);
    for (p, x) in &a.terms {
        for (q, y) in &b.terms {
            if p.degree() + q.degree() > max_degree {
                continue;
            }
            let Some((neg, pq)) = p.mul(q, ring) else {
                continue;
            };
            let br = bracket(x, y, window)?;
            let s = sign(neg != p.parity(ring).koszul(y.parity()));
            out.add_cochain_monomial(&br, pq, &s)?;
        }
    }
    Ok(out)
}

/// Number of independent elements of each order and parity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Counts {
    pub even: usize,
    pub odd: usize,
}

impl Counts {
    pub fn total(&self) -> usize {
        self.even + self.odd
    }

    fn bump(&mut self, p: Parity) {
        match p {
            Parity::Even => self.even += 1,
            Parity::Odd => self.odd += 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ArityDims {
    pub arity: u32,
    pub cocycles: Counts,
    pub coboundaries: Counts,
    pub cohomology: Counts,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Role {
    Coboundary(usize),
    Delta(usize),
    Spurious,
    Complement(usize),
}

/// Cocycles, coboundaries with preimages, and a complement `δ` of the
/// coboundaries in the cocycles, all within a window.
#[derive(Debug, Clone)]
pub struct CohomologyData {
    d: Cochain,
    window: ArityWindow,
    stable: u32,
    cocycles: Vec<Cochain>,
    coboundaries: Vec<Cochain>,
    preimages: Vec<Cochain>,
    deltas: Vec<Cochain>,
    complement: Vec<Cochain>,
    dims: Vec<ArityDims>,
    basis: Echelon<BasisKey>,
    roles: Vec<Role>,
}

/// Largest arity at which results in the window are exact: `D` raises arity
/// by at most `a − 1` for the top arity `a` of `d`.
pub fn stable_arity(d: &Cochain, window: ArityWindow) -> u32 {
    let space = d.space();
    if space.even_dim() == 0 && window.max() >= space.odd_dim() as u32 {
        return window.max();
    }
    let top = d.max_arity().unwrap_or(1);
    (window.max() + 1).saturating_sub(top)
}

/// Cohomology of `D = [d, ·]` computed arity by arity inside the window.
///
/// Columns are eliminated in reverse canonical order, so preimages are taken
/// among the latest basis cochains and each cocycle is normalized on its
/// earliest basis cochain.
pub fn cohomology(d: &Cochain, window: ArityWindow) -> Result<CohomologyData> {
    let report = check_codifferential(d, window)?;
    if !report.holds() {
        let why = if report.odd {
            format!("[d,d] has {} nonzero values in arities {window}", report.square.values().len())
        } else {
            "d is even".to_string()
        };
        return Err(Error::NotCodifferential(why));
    }
    let space = d.space();
    let stable = stable_arity(d, window);
    if stable < window.min() {
        return Err(Error::InvalidWindow {
            min: window.min() as usize,
            max: window.max() as usize,
        });
    }
    let keys = basis_keys(space, window);
    let n = keys.len();
    let index: BTreeMap<&BasisKey, usize> = keys.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let rev = |j: usize| n - 1 - j;

    let mut matrix = RatMatrix::zeros(n, n);
    for (j, key) in keys.iter().enumerate() {
        let image = bracket(d, &Cochain::from_key(space, key)?, window)?;
        for (k, x) in image.coordinates() {
            matrix.set(index[&k], rev(j), x);
        }
    }
    let (_, pivots) = matrix.rref();
    let pivot_cols: Vec<usize> = {
        let mut v: Vec<usize> = pivots.iter().map(|&p| rev(p)).collect();
        v.sort_unstable();
        v
    };
    let mut kernel: Vec<(usize, Cochain)> = Vec::new();
    let free: Vec<usize> = (0..n).filter(|j| !pivot_cols.contains(j)).collect();
    let kernel_vectors = matrix.kernel_basis();
    for (&j, v) in free.iter().rev().zip(kernel_vectors.iter()) {
        // kernel_basis lists free columns in increasing reversed order
        let coords: BTreeMap<BasisKey, Scalar> = v
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(c, x)| (keys[rev(c)].clone(), x.clone()))
            .collect();
        kernel.push((j, Cochain::from_coordinates(space, &coords)?));
    }
    kernel.sort_by_key(|(j, _)| *j);

    let mut basis = Echelon::new(PivotRule::First);
    let mut roles = Vec::new();
    let mut dims: BTreeMap<u32, ArityDims> = BTreeMap::new();
    let mut bump = |arity: u32, f: &dyn Fn(&mut ArityDims)| {
        let e = dims.entry(arity).or_insert(ArityDims {
            arity,
            ..Default::default()
        });
        f(e);
    };

    let mut coboundaries = Vec::new();
    let mut preimages = Vec::new();
    for &j in &pivot_cols {
        let pre = Cochain::from_key(space, &keys[j])?;
        let image = bracket(d, &pre, window)?;
        basis.insert(&image.coordinates(), roles.len());
        roles.push(Role::Coboundary(coboundaries.len()));
        let (order, parity) = (image.order().unwrap_or(0), image.parity());
        bump(order, &|e| e.coboundaries.bump(parity));
        coboundaries.push(image);
        preimages.push(pre);
    }
    let mut deltas = Vec::new();
    let mut cocycles = Vec::new();
    for (_, z) in &kernel {
        let (order, parity) = (z.order().unwrap_or(0), z.parity());
        bump(order, &|e| e.cocycles.bump(parity));
        cocycles.push(z.clone());
        if basis.insert(&z.coordinates(), roles.len()) {
            if order <= stable {
                roles.push(Role::Delta(deltas.len()));
                bump(order, &|e| e.cohomology.bump(parity));
                deltas.push(z.clone());
            } else {
                roles.push(Role::Spurious);
            }
        } else {
            roles.push(Role::Spurious);
        }
    }
    let mut complement = Vec::new();
    for &j in &pivot_cols {
        let c = Cochain::from_key(space, &keys[j])?;
        if basis.insert(&c.coordinates(), roles.len()) {
            roles.push(Role::Complement(complement.len()));
            complement.push(c);
        } else {
            roles.push(Role::Spurious);
        }
    }
    if basis.rank() != n {
        return Err(Error::Internal(format!(
            "cocycles and complement span {} of {n} dimensions",
            basis.rank()
        )));
    }
    let dims = dims.into_values().filter(|e| e.arity <= stable).collect();
    Ok(CohomologyData {
        d: d.clone(),
        window,
        stable,
        cocycles,
        coboundaries,
        preimages,
        deltas,
        complement,
        dims,
        basis,
        roles,
    })
}

/// Coordinates of a cochain against the cohomology splitting.
#[derive(Debug, Clone)]
pub struct Splitting {
    /// Coefficient of each `δᵢ`.
    pub delta: BTreeMap<usize, Scalar>,
    /// `x` with `D(x)` equal to the coboundary part.
    pub preimage: Cochain,
    /// Non-cocycle part in arities where `D` is exact.
    pub non_cocycle: Cochain,
}

impl CohomologyData {
    pub fn codifferential(&self) -> &Cochain {
        &self.d
    }

    pub fn window(&self) -> ArityWindow {
        self.window
    }

    /// Arities up to which cohomology is reported (the stable arity).
    pub fn stable_arity(&self) -> u32 {
        self.stable
    }

    pub fn cocycle_basis(&self) -> &[Cochain] {
        &self.cocycles
    }

    pub fn coboundary_basis(&self) -> &[Cochain] {
        &self.coboundaries
    }

    /// `preimages()[j]` maps to `coboundary_basis()[j]` under `D`.
    pub fn preimages(&self) -> &[Cochain] {
        &self.preimages
    }

    pub fn delta_basis(&self) -> &[Cochain] {
        &self.deltas
    }

    pub fn complement(&self) -> &[Cochain] {
        &self.complement
    }

    pub fn dimensions(&self) -> &[ArityDims] {
        &self.dims
    }

    /// Total cohomology dimension in arities up to the stable arity.
    pub fn dimension(&self) -> Counts {
        self.dims.iter().fold(Counts::default(), |acc, e| Counts {
            even: acc.even + e.cohomology.even,
            odd: acc.odd + e.cohomology.odd,
        })
    }

    /// Splits `c` (truncated to the stable arities) along the cohomology.
    pub fn split(&self, c: &Cochain) -> Result<Splitting> {
        let space = self.d.space();
        if c.space() != space {
            return Err(Error::SpaceMismatch);
        }
        let exact = ArityWindow::up_to(self.stable)?;
        let check = ArityWindow::up_to(stable_arity(&self.d, exact).max(1))?;
        let (rem, coords) = self.basis.reduce(&c.truncate(exact).coordinates());
        if !rem.is_empty() {
            return Err(Error::Internal("cochain outside the window basis".into()));
        }
        let mut out = Splitting {
            delta: BTreeMap::new(),
            preimage: Cochain::zero(space),
            non_cocycle: Cochain::zero(space),
        };
        for (tag, x) in coords {
            match self.roles[tag] {
                Role::Delta(i) => {
                    out.delta.insert(i, x);
                }
                Role::Coboundary(j) => {
                    out.preimage = out.preimage.add(&self.preimages[j].scale(&x))?;
                }
                Role::Complement(k) => {
                    let part = self.complement[k].scale(&x).truncate(check);
                    out.non_cocycle = out.non_cocycle.add(&part)?;
                }
                Role::Spurious => {}
            }
        }
        out.preimage = out.preimage.truncate(exact);
        Ok(out)
    }
}

/// A deformation parameter dual to a delta cochain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parameter {
    pub name: String,
    pub delta: usize,
    pub parity: Parity,
    pub arity: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    /// More orders may be needed.
    InProgress,
    /// The last obstruction had no coboundary part: the deformation is miniversal.
    Miniversal,
    /// Stopped at the configured maximal order with coboundary terms left.
    Truncated,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::InProgress => "in progress",
            Status::Miniversal => "miniversal",
            Status::Truncated => "truncated",
        })
    }
}

/// `d + α₁ + … + αₙ` over a parameter ring, with the relations found so far.
#[derive(Debug, Clone)]
pub struct Deformation {
    base: Cochain,
    cohomology: Arc<CohomologyData>,
    parameters: Vec<Parameter>,
    ring: Arc<ParamRing>,
    current: ParamCochain,
    alphas: Vec<ParamCochain>,
    relations: BTreeMap<usize, ParamPoly>,
    order: u32,
    truncation: u32,
    status: Status,
}

/// Result of splitting an obstruction.
#[derive(Debug, Clone)]
pub struct ObstructionSplit {
    /// `αₙ₊₁ = −(preimage of the coboundary part)`.
    pub alpha: ParamCochain,
    /// `Rⁱ`, keyed by delta index; zero relations are omitted.
    pub relations: BTreeMap<usize, ParamPoly>,
    /// Part outside the cocycles; must vanish modulo the relations.
    pub non_cocycle: ParamCochain,
}

/// Splits `obs = −D(α) + Σ δᵢRⁱ + (non-cocycle part)` per parameter monomial.
pub fn decompose_obstruction(obs: &ParamCochain, h: &CohomologyData) -> Result<ObstructionSplit> {
    let ring = obs.ring();
    let space = obs.space();
    let mut out = ObstructionSplit {
        alpha: ParamCochain::zero(space, ring),
        relations: BTreeMap::new(),
        non_cocycle: ParamCochain::zero(space, ring),
    };
    for (m, c) in obs.terms() {
        let s = h.split(c)?;
        out.alpha.add_cochain_monomial(&s.preimage, m.clone(), &-Scalar::one())?;
        out.non_cocycle.add_cochain_monomial(&s.non_cocycle, m.clone(), &Scalar::one())?;
        for (i, x) in s.delta {
            out.relations
                .entry(i)
                .or_insert_with(|| ParamPoly::zero(ring))
                .add_term(m.clone(), x);
        }
    }
    out.relations.retain(|_, p| !p.is_zero());
    Ok(out)
}

fn parameter_names(h: &CohomologyData) -> Vec<Parameter> {
    let mut groups: BTreeMap<(u32, Parity), usize> = BTreeMap::new();
    let specs: Vec<(u32, Parity)> = h
        .deltas
        .iter()
        .map(|z| {
            let p = Parity::from_bool(!z.parity().is_odd());
            let a = z.order().unwrap_or(0);
            *groups.entry((a, p)).or_default() += 1;
            (a, p)
        })
        .collect();
    let mut seen: BTreeMap<(u32, Parity), usize> = BTreeMap::new();
    specs
        .into_iter()
        .enumerate()
        .map(|(i, (a, p))| {
            let pos = seen.entry((a, p)).or_default();
            *pos += 1;
            let stem = if p.is_odd() { "theta" } else { "t" };
            let name = if groups[&(a, p)] == 1 {
                format!("{stem}{a}")
            } else {
                format!("{stem}{a}_{pos}")
            };
            Parameter {
                name,
                delta: i,
                parity: p,
                arity: a,
            }
        })
        .collect()
}

/// `d₁ = d + Σ δᵢuⁱ` with one parameter per delta, of opposite parity.
pub fn universal_infinitesimal(d: &Cochain, h: &CohomologyData, truncation: u32) -> Result<Deformation> {
    if h.codifferential() != d {
        return Err(Error::Internal("cohomology was computed for another codifferential".into()));
    }
    let parameters = parameter_names(h);
    let even: Vec<&str> = parameters.iter().filter(|p| !p.parity.is_odd()).map(|p| p.name.as_str()).collect();
    let odd: Vec<&str> = parameters.iter().filter(|p| p.parity.is_odd()).map(|p| p.name.as_str()).collect();
    let ring = ParamRing::new(&even, &odd)?;
    let mut alpha1 = ParamCochain::zero(d.space(), &ring);
    for p in &parameters {
        alpha1.add_term(&h.deltas[p.delta], &ParamPoly::generator(&ring, &p.name)?)?;
    }
    let current = ParamCochain::constant(d, &ring).add(&alpha1)?;
    let (order, status) = if parameters.is_empty() {
        (0, Status::Miniversal)
    } else {
        (1, Status::InProgress)
    };
    Ok(Deformation {
        base: d.clone(),
        cohomology: Arc::new(h.clone()),
        parameters,
        ring,
        current,
        alphas: if alpha1.is_zero() { vec![] } else { vec![alpha1] },
        relations: BTreeMap::new(),
        order,
        truncation,
        status,
    })
}

/// Outcome of one order of the construction.
#[derive(Debug, Clone)]
pub struct Step {
    pub obstruction: ParamCochain,
    pub split: ObstructionSplit,
    /// Degree `n+1` part of the coboundary correction that was added.
    pub alpha: ParamCochain,
}

impl Deformation {
    pub fn base(&self) -> &Cochain {
        &self.base
    }

    pub fn cohomology(&self) -> &CohomologyData {
        &self.cohomology
    }

    pub fn parameters(&self) -> &[Parameter] {
        &self.parameters
    }

    pub fn ring(&self) -> &Arc<ParamRing> {
        &self.ring
    }

    /// `dₙ = d + α₁ + … + αₙ`.
    pub fn current(&self) -> &ParamCochain {
        &self.current
    }

    /// `α₁, …, αₙ` (zero corrections omitted).
    pub fn alphas(&self) -> &[ParamCochain] {
        &self.alphas
    }

    /// Relation polynomials keyed by delta index.
    pub fn relations(&self) -> &BTreeMap<usize, ParamPoly> {
        &self.relations
    }

    pub fn relation_ideal(&self) -> Result<RelationIdeal> {
        RelationIdeal::new(&self.ring, self.relations.values().cloned().collect(), self.truncation)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn status(&self) -> Status {
        self.status
    }

    /// Arity window in which the deformation is exact.
    pub fn window(&self) -> ArityWindow {
        ArityWindow::up_to(self.cohomology.stable.max(1)).expect("positive arity")
    }

    /// `½[dₙ, dₙ]` truncated at the working degree.
    pub fn obstruction(&self) -> Result<ParamCochain> {
        Ok(param_bracket(&self.current, &self.current, self.window(), self.truncation)?.scale(&frac(1, 2)))
    }

    /// Replaces the current cochain and relations (used by push-outs).
    pub(crate) fn with_current(&self, ring: &Arc<ParamRing>, current: ParamCochain, relations: BTreeMap<usize, ParamPoly>) -> Deformation {
        Deformation {
            ring: ring.clone(),
            alphas: Vec::new(),
            current,
            relations,
            ..self.clone()
        }
    }

    fn step(&self) -> Result<Step> {
        let n = self.order;
        let obs = self.obstruction()?;
        let split = decompose_obstruction(&obs, &self.cohomology)?;
        let low: Vec<ParamPoly> = split.relations.values().map(|r| r.truncated(n + 1)).collect();
        let ideal = RelationIdeal::new(&self.ring, low, n + 1)?;
        for (key, p) in split.non_cocycle.truncate_degree(n + 1).by_basis() {
            let r = ideal.reduce(&p)?;
            if !r.is_zero() {
                let name = format!("{} (basis cochain {:?} -> {})", r, key.0.exps(), key.1);
                return Err(Error::NotCocycle { monomial: name });
            }
        }
        let alpha = split.alpha.homogeneous(n + 1);
        Ok(Step {
            obstruction: obs,
            split,
            alpha,
        })
    }

    /// One order of the construction: computes `½[dₙ,dₙ]`, adds `αₙ₊₁` and
    /// replaces the relations by the new ones (truncated at `n+1`).
    pub fn extend_order(&self) -> Result<Deformation> {
        let step = self.step()?;
        Ok(self.apply(&step))
    }

    fn apply(&self, step: &Step) -> Deformation {
        let n = self.order;
        let mut next = self.clone();
        next.current = self.current.add(&step.alpha).expect("same ring and parity");
        if !step.alpha.is_zero() {
            next.alphas.push(step.alpha.clone());
        }
        next.relations = step
            .split
            .relations
            .iter()
            .map(|(&i, r)| (i, r.truncated(n + 1)))
            .filter(|(_, r)| !r.is_zero())
            .collect();
        next.order = n + 1;
        next
    }

    /// Finishes at the current order: relations from the full obstruction,
    /// and a check that every leftover term vanishes modulo them.
    fn finalize(&mut self, step: &Step) -> Result<bool> {
        self.relations = step.split.relations.clone();
        let ideal = self.relation_ideal()?;
        let leftovers = step.split.alpha.add(&step.split.non_cocycle.scale(&-Scalar::one()));
        let leftovers = match leftovers {
            Ok(l) => l,
            // parities differ: check the two parts separately
            Err(_) => {
                for part in [&step.split.alpha, &step.split.non_cocycle] {
                    for p in part.by_basis().values() {
                        if !ideal.contains(p)? {
                            return Ok(false);
                        }
                    }
                }
                return Ok(true);
            }
        };
        for p in leftovers.by_basis().values() {
            if !ideal.contains(p)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Coefficients of the non-cocycle part of the final obstruction, reduced
    /// modulo the relation ideal (all zero for a miniversal deformation).
    pub fn residuals(&self) -> Result<BTreeMap<BasisKey, ParamPoly>> {
        let split = decompose_obstruction(&self.obstruction()?, &self.cohomology)?;
        let ideal = self.relation_ideal()?;
        let mut out = BTreeMap::new();
        for (key, p) in split.non_cocycle.by_basis() {
            out.insert(key, ideal.reduce(&p)?);
        }
        Ok(out)
    }

    /// Coefficients of the non-cocycle part of the final obstruction before reduction.
    pub fn non_cocycle_terms(&self) -> Result<BTreeMap<BasisKey, ParamPoly>> {
        Ok(decompose_obstruction(&self.obstruction()?, &self.cohomology)?
            .non_cocycle
            .by_basis())
    }
}

/// Miniversal deformation with the default working degree `max_order + 2`.
pub fn miniversal(d: &Cochain, max_order: u32, window: ArityWindow) -> Result<Deformation> {
    miniversal_with_truncation(d, max_order, window, max_order + 2)
}

/// Iterates [`Deformation::extend_order`] until an obstruction has no
/// coboundary part (status miniversal) or `max_order` is reached.
pub fn miniversal_with_truncation(d: &Cochain, max_order: u32, window: ArityWindow, truncation: u32) -> Result<Deformation> {
    let h = cohomology(d, window)?;
    let defm = universal_infinitesimal(d, &h, truncation)?;
    if defm.status == Status::Miniversal {
        return Ok(defm);
    }
    run(defm, max_order)
}

/// Extends an arbitrary first-order deformation `d₁` of `d` (not necessarily
/// universal) order by order, cancelling coboundary terms as they appear.
/// The result carries no delta parameters; its relations are keyed by delta
/// index as usual. Reaching the working degree gives status truncated.
pub fn formal_extension(d1: &ParamCochain, h: &CohomologyData, max_order: u32, truncation: u32) -> Result<Deformation> {
    if &d1.augment() != h.codifferential() {
        return Err(Error::Internal("d₁ does not reduce to the codifferential".into()));
    }
    if d1.parity() != Parity::Odd {
        return Err(Error::NotCodifferential("d₁ is even".into()));
    }
    let d = h.codifferential();
    let alpha1 = d1.sub(&ParamCochain::constant(d, d1.ring()))?;
    let defm = Deformation {
        base: d.clone(),
        cohomology: Arc::new(h.clone()),
        parameters: Vec::new(),
        ring: d1.ring().clone(),
        current: d1.truncate_degree(1),
        alphas: if alpha1.is_zero() { vec![] } else { vec![alpha1] },
        relations: BTreeMap::new(),
        order: 1,
        truncation,
        status: Status::InProgress,
    };
    run(defm, max_order)
}

fn run(mut defm: Deformation, max_order: u32) -> Result<Deformation> {
    loop {
        let step = defm.step()?;
        if step.alpha.is_zero() && defm.order < defm.truncation {
            let mut done = defm.clone();
            if done.finalize(&step)? {
                done.status = Status::Miniversal;
                return Ok(done);
            }
        }
        if defm.order >= max_order || defm.order >= defm.truncation {
            let mut done = defm.clone();
            done.relations = step.split.relations.clone();
            done.status = Status::Truncated;
            return Ok(done);
        }
        defm = defm.apply(&step);
    }
}
