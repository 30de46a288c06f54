//! Coalgebra morphisms of `S(W)⊗A`, their inverses, push-outs along
//! morphisms of parameter rings, and transport of codifferentials.
//!
//! Elements of `S(W)⊗A` are written `Σ m·p` (monomial, then parameter) and
//! all maps are right `A`-linear. A cochain term `φθ` acts on a monomial `m`
//! as `(−1)^{|θ||m|} φ(m)θ`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::cochain::{tilde, ArityWindow, Cochain};
use crate::deform::{Deformation, ParamCochain};
use crate::error::{Error, Result};
use crate::exactla::{RatMatrix, Solution};
use crate::gspace::{sign, GradedSpace, Parity, Scalar};
use crate::paramring::{ParamMonomial, ParamPoly, ParamRing, RelationIdeal};
use crate::symw::{enumerate_monomials, product_raw, splittings, Monomial};

/// An element of `S(W)⊗A`.
pub type Element = BTreeMap<Monomial, ParamPoly>;

fn add_into(out: &mut Element, m: Monomial, p: &ParamPoly) {
    if p.is_zero() {
        return;
    }
    let slot = out.entry(m.clone()).or_insert_with(|| ParamPoly::zero(p.ring()));
    slot.add_assign(p);
    if slot.is_zero() {
        out.remove(&m);
    }
}

fn scale_element(x: &Element, c: &Scalar) -> Element {
    x.iter()
        .map(|(m, p)| (m.clone(), p.scale(c)))
        .filter(|(_, p)| !p.is_zero())
        .collect()
}

fn add_elements(a: &Element, b: &Element) -> Element {
    let mut out = a.clone();
    for (m, p) in b {
        add_into(&mut out, m.clone(), p);
    }
    out
}

/// `(m p)(m' p') = (−1)^{|p||m'|} (m m')(p p')`.
pub fn element_product(space: &GradedSpace, a: &Element, b: &Element, max_degree: u32) -> Element {
    let mut out = Element::new();
    for (m1, p1) in a {
        for (m2, p2) in b {
            let Some((neg, m)) = product_raw(space, m1, m2) else {
                continue;
            };
            let m2_odd = m2.parity(space).is_odd();
            for (q, x) in p1.terms() {
                let q_odd = q.parity(p1.ring()).is_odd();
                let s = sign(neg != (q_odd && m2_odd));
                let lhs = ParamPoly::monomial(p1.ring(), q.clone(), s * x);
                add_into(&mut out, m.clone(), &lhs.mul_bounded(p2, max_degree));
            }
        }
    }
    out
}

fn param_sign(ring: &ParamRing, q: &ParamMonomial, m_odd: bool) -> Scalar {
    sign(m_odd && q.parity(ring).is_odd())
}

/// Right-linear action of a cochain with parameters on one monomial.
pub fn act(x: &ParamCochain, m: &Monomial) -> Element {
    let space = x.space();
    let ring = x.ring();
    let m_odd = m.parity(space).is_odd();
    let mut out = Element::new();
    for (q, c) in x.terms() {
        let s = param_sign(ring, q, m_odd);
        for (i, v) in c.eval(m) {
            let p = ParamPoly::monomial(ring, q.clone(), &s * v);
            add_into(&mut out, Monomial::basis(space, i), &p);
        }
    }
    out
}

/// Right-linear action of the coderivation extending `x` on one monomial.
pub fn act_lifted(x: &ParamCochain, m: &Monomial) -> Element {
    let ring = x.ring();
    let m_odd = m.parity(x.space()).is_odd();
    let mut out = Element::new();
    for (q, c) in x.terms() {
        let s = param_sign(ring, q, m_odd);
        for (w, v) in tilde(c, m) {
            add_into(&mut out, w, &ParamPoly::monomial(ring, q.clone(), &s * v));
        }
    }
    out
}

/// Applies a right-linear map, given on monomials, to an element.
fn apply_right<F>(f: F, y: &Element, max_degree: u32) -> Element
where
    F: Fn(&Monomial) -> Element,
{
    let mut out = Element::new();
    for (m, p) in y {
        for (w, q) in f(m) {
            add_into(&mut out, w, &q.mul_bounded(p, max_degree));
        }
    }
    out
}

/// Rebuilds a cochain with parameters from its right-linear values,
/// keeping only the components landing in `W`.
fn to_param_cochain<'a, I>(space: &GradedSpace, ring: &Arc<ParamRing>, values: I) -> Result<ParamCochain>
where
    I: IntoIterator<Item = (&'a Monomial, &'a Element)>,
{
    let mut per: BTreeMap<ParamMonomial, Cochain> = BTreeMap::new();
    for (m, el) in values {
        let m_odd = m.parity(space).is_odd();
        for (w, p) in el {
            let Some(i) = w.as_basis() else {
                continue;
            };
            for (q, x) in p.terms() {
                let c = per.entry(q.clone()).or_insert_with(|| Cochain::zero(space));
                c.add_value(m.clone(), i, param_sign(ring, q, m_odd) * x)?;
            }
        }
    }
    let mut out = ParamCochain::zero(space, ring);
    for (q, c) in per {
        out.add_term(&c, &ParamPoly::monomial(ring, q, Scalar::one()))?;
    }
    Ok(out)
}

fn window_monomials(space: &GradedSpace, window: ArityWindow) -> Vec<Monomial> {
    (1..=window.max())
        .flat_map(|k| enumerate_monomials(space, k).unwrap_or_default())
        .collect()
}

/// An even map `g: S(W) → W⊗A` with invertible linear part, standing for the
/// coalgebra automorphism `ĝ` it extends to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    map: ParamCochain,
    window: ArityWindow,
    truncation: u32,
}

/// Values of `ĝ` on every monomial of the window.
#[derive(Debug, Clone)]
pub struct Extension {
    space: GradedSpace,
    values: BTreeMap<Monomial, Element>,
}

impl Extension {
    pub fn values(&self) -> &BTreeMap<Monomial, Element> {
        &self.values
    }

    /// `ĝ(m)`; the unit is fixed.
    pub fn eval(&self, m: &Monomial) -> Element {
        if m.is_one() {
            return BTreeMap::new();
        }
        self.values.get(m).cloned().unwrap_or_default()
    }

    fn eval_with_unit(&self, m: &Monomial, ring: &Arc<ParamRing>) -> Element {
        if m.is_one() {
            return [(m.clone(), ParamPoly::one(ring))].into_iter().collect();
        }
        self.eval(m)
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }
}

impl Morphism {
    pub fn new(map: ParamCochain, window: ArityWindow, truncation: u32) -> Result<Self> {
        if map.parity() != Parity::Even {
            return Err(Error::OddMorphism);
        }
        let g = Morphism {
            map,
            window,
            truncation,
        };
        if g.linear_part().rank() != g.space().dim() {
            return Err(Error::NotInvertible);
        }
        Ok(g)
    }

    /// `I + x`, where `x` is even.
    pub fn identity_plus(x: &ParamCochain, window: ArityWindow, truncation: u32) -> Result<Self> {
        let id = ParamCochain::constant(&identity_cochain(x.space()), x.ring());
        Morphism::new(id.add(x)?, window, truncation)
    }

    pub fn identity(space: &GradedSpace, ring: &Arc<ParamRing>, window: ArityWindow, truncation: u32) -> Self {
        Morphism {
            map: ParamCochain::constant(&identity_cochain(space), ring),
            window,
            truncation,
        }
    }

    pub fn map(&self) -> &ParamCochain {
        &self.map
    }

    pub fn space(&self) -> &GradedSpace {
        self.map.space()
    }

    pub fn ring(&self) -> &Arc<ParamRing> {
        self.map.ring()
    }

    pub fn window(&self) -> ArityWindow {
        self.window
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    /// Matrix of the linear part with all parameters set to zero;
    /// column `j` is the image of the `j`-th basis vector.
    pub fn linear_part(&self) -> RatMatrix {
        let n = self.space().dim();
        let g0 = self.map.augment();
        let mut a = RatMatrix::zeros(n, n);
        for j in 0..n {
            for (i, x) in g0.eval(&Monomial::basis(self.space(), j)) {
                a.set(i, j, x);
            }
        }
        a
    }

    /// `ĝ = Σ_k (1/k!) μ_k ∘ g^{⊗k} ∘ Δ^{k−1}` on the window.
    pub fn extend(&self) -> Extension {
        let space = self.space().clone();
        let monos = window_monomials(&space, self.window);
        // powers[k][m]: sum over ordered splittings of m into k factors
        let mut powers: Vec<BTreeMap<Monomial, Element>> = vec![BTreeMap::new()];
        let first: BTreeMap<Monomial, Element> = monos.iter().map(|m| (m.clone(), act(&self.map, m))).collect();
        powers.push(first);
        let top = self.window.max();
        for k in 2..=top {
            let mut layer = BTreeMap::new();
            for m in monos.iter().filter(|m| m.degree() >= k) {
                let mut acc = Element::new();
                for j in 1..=(m.degree() - k + 1) {
                    for (c, mu, rho) in splittings(&space, m, j) {
                        let Some(rest) = powers[(k - 1) as usize].get(&rho) else {
                            continue;
                        };
                        let head = &powers[1][&mu];
                        let prod = element_product(&space, head, rest, self.truncation);
                        acc = add_elements(&acc, &scale_element(&prod, &c));
                    }
                }
                if !acc.is_empty() {
                    layer.insert(m.clone(), acc);
                }
            }
            powers.push(layer);
        }
        let mut values = BTreeMap::new();
        let mut fact = Scalar::one();
        for (k, layer) in powers.iter().enumerate().skip(1) {
            fact *= Scalar::from_integer((k as i64).into());
            let inv = fact.recip();
            for (m, el) in layer {
                let slot: &mut Element = values.entry(m.clone()).or_default();
                *slot = add_elements(slot, &scale_element(el, &inv));
            }
        }
        values.retain(|_, el: &mut Element| !el.is_empty());
        Extension { space, values }
    }

    /// The inverse morphism, through a Neumann series around the
    /// parameter-free linear part.
    pub fn inverse(&self) -> Result<Morphism> {
        let space = self.space();
        let ring = self.ring();
        let n = space.dim();
        let a0 = self.linear_part();
        let mut inv0 = Cochain::zero(space);
        for j in 0..n {
            let mut e = vec![Scalar::zero(); n];
            e[j] = Scalar::one();
            match a0.solve_particular(&e)? {
                Solution::Unique(x) => {
                    for (i, xi) in x.into_iter().enumerate() {
                        inv0.add_value(Monomial::basis(space, j), i, xi)?;
                    }
                }
                Solution::Inconsistent { .. } => return Err(Error::NotInvertible),
            }
        }
        let b = Morphism::new(ParamCochain::constant(&self.map.augment().arity_part(1), ring), self.window, self.truncation)?
            .extend();
        let b_inv = Morphism::new(ParamCochain::constant(&inv0, ring), self.window, self.truncation)?.extend();
        let full = self.extend();
        let d = self.truncation;
        let steps = self.window.max() + d + 2;
        let mut values = BTreeMap::new();
        for m in window_monomials(space, self.window) {
            let mut x = b_inv.eval(&m);
            let mut total = x.clone();
            let mut converged = false;
            for _ in 0..steps {
                let gx = apply_right(|w| full.eval(w), &x, d);
                let bx = apply_right(|w| b.eval(w), &x, d);
                let nx = add_elements(&gx, &scale_element(&bx, &-Scalar::one()));
                x = scale_element(&apply_right(|w| b_inv.eval(w), &nx, d), &-Scalar::one());
                if x.is_empty() {
                    converged = true;
                    break;
                }
                total = add_elements(&total, &x);
            }
            if !converged {
                return Err(Error::Internal("Neumann series did not terminate".into()));
            }
            values.insert(m, total);
        }
        let map = to_param_cochain(space, ring, values.iter())?;
        Morphism::new(map, self.window, self.truncation)
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &Morphism) -> Result<Morphism> {
        if self.ring() != other.ring() {
            return Err(Error::RingMismatch);
        }
        let inner = other.extend();
        let d = self.truncation.min(other.truncation);
        let values: BTreeMap<Monomial, Element> = window_monomials(self.space(), self.window)
            .into_iter()
            .map(|m| {
                let v = apply_right(|w| act(&self.map, w), &inner.eval(&m), d);
                (m, v)
            })
            .collect();
        Morphism::new(to_param_cochain(self.space(), self.ring(), values.iter())?, self.window, d)
    }

    /// Checks `Δ∘ĝ = (ĝ⊗ĝ)∘Δ` on every monomial of the window.
    pub fn satisfies_coalgebra_law(&self) -> bool {
        let ext = self.extend();
        let space = self.space();
        let ring = self.ring();
        let d = self.truncation;
        for m in window_monomials(space, self.window) {
            let mut lhs: BTreeMap<(Monomial, Monomial), ParamPoly> = BTreeMap::new();
            for (w, p) in ext.eval(&m) {
                for k in 0..=w.degree() {
                    for (c, mu, rho) in splittings(space, &w, k) {
                        add_pair(&mut lhs, mu, rho, &p.scale(&c));
                    }
                }
            }
            let mut rhs: BTreeMap<(Monomial, Monomial), ParamPoly> = BTreeMap::new();
            for k in 0..=m.degree() {
                for (c, mu, rho) in splittings(space, &m, k) {
                    let a = ext.eval_with_unit(&mu, ring);
                    let b = ext.eval_with_unit(&rho, ring);
                    for (wa, pa) in &a {
                        for (wb, pb) in &b {
                            let wb_odd = wb.parity(space).is_odd();
                            for (q, x) in pa.terms() {
                                let s = param_sign(ring, q, wb_odd) * x * &c;
                                let lead = ParamPoly::monomial(ring, q.clone(), s);
                                add_pair(&mut rhs, wa.clone(), wb.clone(), &lead.mul_bounded(pb, d));
                            }
                        }
                    }
                }
            }
            if lhs != rhs {
                return false;
            }
        }
        true
    }
}

fn add_pair(out: &mut BTreeMap<(Monomial, Monomial), ParamPoly>, a: Monomial, b: Monomial, p: &ParamPoly) {
    if p.is_zero() {
        return;
    }
    let key = (a, b);
    let slot = out.entry(key.clone()).or_insert_with(|| ParamPoly::zero(p.ring()));
    slot.add_assign(p);
    if slot.is_zero() {
        out.remove(&key);
    }
}

/// `Σᵢ (wᵢ ↦ wᵢ)`.
pub fn identity_cochain(space: &GradedSpace) -> Cochain {
    let mut c = Cochain::zero(space);
    for i in 0..space.dim() {
        c.add_value(Monomial::basis(space, i), i, Scalar::one())
            .expect("identity is even");
    }
    c
}

/// Which side the inverse sits on when conjugating a codifferential.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Conjugation {
    /// `g^{-1}∘d̃∘ĝ`, corestricted.
    InverseFirst,
    /// `g∘d̃∘ĝ^{-1}`, corestricted.
    InverseLast,
}

/// `g*(d)`: conjugates the coderivation of `d` by `ĝ` and corestricts.
pub fn transport(d: &ParamCochain, g: &Morphism, order: Conjugation) -> Result<ParamCochain> {
    if d.space() != g.space() {
        return Err(Error::SpaceMismatch);
    }
    if d.ring() != g.ring() {
        return Err(Error::RingMismatch);
    }
    let h = g.inverse()?;
    let (outer, inner) = match order {
        Conjugation::InverseFirst => (&h, g),
        Conjugation::InverseLast => (g, &h),
    };
    let ext = inner.extend();
    let dd = g.truncation();
    let mut values = BTreeMap::new();
    for m in window_monomials(g.space(), g.window()) {
        let y = ext.eval(&m);
        let z = apply_right(|w| act_lifted(d, w), &y, dd);
        let v = apply_right(|w| act(outer.map(), w), &z, dd);
        values.insert(m, v);
    }
    to_param_cochain(g.space(), g.ring(), values.iter())
}

/// An even algebra morphism `λ: A → A'` given on generators, with images in
/// the maximal ideal, applied modulo `𝔪'^{D+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingMorphism {
    source: Arc<ParamRing>,
    target: Arc<ParamRing>,
    images: Vec<ParamPoly>,
    truncation: u32,
}

impl RingMorphism {
    pub fn new(source: &Arc<ParamRing>, target: &Arc<ParamRing>, images: Vec<ParamPoly>, truncation: u32) -> Result<Self> {
        if images.len() != source.dim() {
            return Err(Error::DimensionMismatch {
                expected: source.dim(),
                found: images.len(),
            });
        }
        for (i, p) in images.iter().enumerate() {
            if p.ring() != target {
                return Err(Error::RingMismatch);
            }
            if !p.augment().is_zero() {
                return Err(Error::BadImage(format!("{} has a constant term", source.name(i))));
            }
            if let Some(par) = p.parity() {
                if !p.is_zero() && par != source.parity(i) {
                    return Err(Error::BadImage(format!("{} changes parity", source.name(i))));
                }
            } else {
                return Err(Error::BadImage(format!("{} is not homogeneous", source.name(i))));
            }
        }
        Ok(RingMorphism {
            source: source.clone(),
            target: target.clone(),
            images,
            truncation,
        })
    }

    /// Builds the morphism from `(name, image)` pairs; unnamed generators map to zero.
    pub fn from_named(source: &Arc<ParamRing>, target: &Arc<ParamRing>, named: &[(&str, ParamPoly)], truncation: u32) -> Result<Self> {
        let mut images = vec![ParamPoly::zero(target); source.dim()];
        for (name, p) in named {
            images[source.index_of(name)?] = p.clone();
        }
        RingMorphism::new(source, target, images, truncation)
    }

    pub fn source(&self) -> &Arc<ParamRing> {
        &self.source
    }

    pub fn target(&self) -> &Arc<ParamRing> {
        &self.target
    }

    pub fn images(&self) -> &[ParamPoly] {
        &self.images
    }

    pub fn apply(&self, p: &ParamPoly) -> Result<ParamPoly> {
        if p.ring() != &self.source {
            return Err(Error::RingMismatch);
        }
        p.substitute(&self.target, &self.images, self.truncation)
    }

    /// `λ_*(x)`: applies `λ` to every coefficient.
    pub fn pushout(&self, x: &ParamCochain) -> Result<ParamCochain> {
        if x.ring() != &self.source {
            return Err(Error::RingMismatch);
        }
        x.map_coefficients(&self.target, |p| self.apply(p))
    }

    /// Pushes a deformation and its relations forward along `λ`. Every
    /// relation must map into `target_relations`.
    pub fn pushout_deformation(&self, defm: &Deformation, target_relations: &RelationIdeal) -> Result<Deformation> {
        if defm.ring() != &self.source || target_relations.ring() != &self.target {
            return Err(Error::RingMismatch);
        }
        let current = self.pushout(defm.current())?;
        let mut relations = BTreeMap::new();
        for (&i, r) in defm.relations() {
            let image = self.apply(r)?;
            if !target_relations.reduce(&image.truncated(target_relations.truncation()))?.is_zero() {
                let name = defm
                    .parameters()
                    .iter()
                    .find(|p| p.delta == i)
                    .map(|p| p.name.clone())
                    .unwrap_or_else(|| i.to_string());
                return Err(Error::RelationViolated(format!("{r} (relation of {name})")));
            }
            if !image.is_zero() {
                relations.insert(i, image);
            }
        }
        Ok(defm.with_current(&self.target, current, relations))
    }
}
