//! Gröbner bases for ideals and graded submodules, with cofactor tracking,
//! syzygies and Hilbert series.
//!
//! Computations modulo ring relations install a Gröbner basis of the
//! relations in every component, so a single engine over `Q` serves both `Q`
//! and `A = Q/(f)`.

mod engine;
mod hilbert;

use std::cmp::Ordering;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::polyring::{Monomial, Poly, Ring};
use crate::resolution::{CIPresentation, GradedMatrix};

pub(crate) use engine::{MTerm, MVec};
use engine::{Buchberger, TrackMode};
pub(crate) use hilbert::check_regular_sequence;
pub use hilbert::{
    format_zpoly, hilbert_numerator_of_monomials, hilbert_series, is_regular_sequence,
    product_formula, quotient_hilbert, HilbertData,
};

/// Which family a [`MonomialOrder`] belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderKind {
    Degrevlex,
    SchreyerInduced,
}

/// Term order on a graded free module.
///
/// `Degrevlex` compares twisted degree, then the monomial in degrevlex, then
/// the position (lower index is larger). `SchreyerInduced` compares the images
/// `m * lead(g_i)` in a base module, breaking ties by position.
#[derive(Clone, Debug, PartialEq)]
pub struct MonomialOrder {
    twists: Vec<i64>,
    schreyer: Option<Box<Schreyer>>,
}

#[derive(Clone, Debug, PartialEq)]
struct Schreyer {
    leads: Vec<MTerm>,
    base: MonomialOrder,
}

impl MonomialOrder {
    pub fn degrevlex(rank: usize) -> Self {
        MonomialOrder { twists: vec![0; rank], schreyer: None }
    }

    pub fn degrevlex_twisted(twists: Vec<i64>) -> Self {
        MonomialOrder { twists, schreyer: None }
    }

    /// Order induced on `F' -> F`, `e_i -> g_i`, from the leading terms
    /// `leads[i] = (position, monomial)` of the `g_i` in `base`.
    pub fn schreyer(base: MonomialOrder, leads: Vec<(usize, Monomial)>) -> Self {
        let twists = leads
            .iter()
            .map(|&(c, m)| base.twists[c] + m.degree() as i64)
            .collect();
        let leads = leads.into_iter().map(|(c, mono)| MTerm { comp: c as u32, mono }).collect();
        MonomialOrder { twists, schreyer: Some(Box::new(Schreyer { leads, base })) }
    }

    pub fn kind(&self) -> OrderKind {
        if self.schreyer.is_some() {
            OrderKind::SchreyerInduced
        } else {
            OrderKind::Degrevlex
        }
    }

    pub fn rank(&self) -> usize {
        self.twists.len()
    }

    pub fn twists(&self) -> &[i64] {
        &self.twists
    }

    pub(crate) fn twisted_degree(&self, t: &MTerm) -> i64 {
        t.mono.degree() as i64 + self.twists[t.comp as usize]
    }

    pub(crate) fn cmp_terms(&self, a: &MTerm, b: &MTerm) -> Ordering {
        match &self.schreyer {
            None => self
                .twisted_degree(a)
                .cmp(&self.twisted_degree(b))
                .then_with(|| a.mono.cmp(&b.mono))
                .then_with(|| b.comp.cmp(&a.comp)),
            Some(s) => {
                let image = |t: &MTerm| {
                    let l = s.leads[t.comp as usize];
                    MTerm { comp: l.comp, mono: t.mono.mul(&l.mono) }
                };
                s.base.cmp_terms(&image(a), &image(b)).then_with(|| b.comp.cmp(&a.comp))
            }
        }
    }
}

/// Element of a free module `Q^r`, stored as its coordinate polynomials.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FreeModuleElement {
    ring: Ring,
    components: Vec<Poly>,
}

impl FreeModuleElement {
    pub fn new(ring: &Ring, components: Vec<Poly>) -> Result<Self> {
        if components.iter().any(|p| !p.ring().same(ring)) {
            return Err(Error::RingMismatch);
        }
        Ok(FreeModuleElement { ring: ring.clone(), components })
    }

    pub fn zero(ring: &Ring, rank: usize) -> Self {
        FreeModuleElement { ring: ring.clone(), components: vec![ring.zero(); rank] }
    }

    pub fn basis_vector(ring: &Ring, rank: usize, i: usize) -> Self {
        let mut v = Self::zero(ring, rank);
        v.components[i] = ring.one();
        v
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Poly] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &Poly {
        &self.components[i]
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Poly::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let components = self.components.iter().zip(&other.components).map(|(a, b)| a.add(b)).collect();
        FreeModuleElement { ring: self.ring.clone(), components }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let components = self.components.iter().zip(&other.components).map(|(a, b)| a.sub(b)).collect();
        FreeModuleElement { ring: self.ring.clone(), components }
    }

    pub fn mul_poly(&self, p: &Poly) -> Self {
        let components = self.components.iter().map(|a| a.mul(p)).collect();
        FreeModuleElement { ring: self.ring.clone(), components }
    }

    /// Twisted degree when homogeneous and nonzero.
    pub fn degree(&self, twists: &[i64]) -> Option<i64> {
        if !self.is_homogeneous(twists) {
            return None;
        }
        self.components
            .iter()
            .zip(twists)
            .find_map(|(p, t)| p.degree().map(|d| d as i64 + t))
    }

    pub fn is_homogeneous(&self, twists: &[i64]) -> bool {
        let mut deg = None;
        for (p, &t) in self.components.iter().zip(twists) {
            if p.is_zero() {
                continue;
            }
            if !p.is_homogeneous() {
                return false;
            }
            let d = p.degree().unwrap() as i64 + t;
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => return false,
                _ => {}
            }
        }
        true
    }

    pub(crate) fn to_mvec(&self, order: &MonomialOrder) -> MVec {
        let mut v: MVec = self
            .components
            .iter()
            .enumerate()
            .flat_map(|(c, p)| p.terms().iter().map(move |&(mono, k)| (MTerm { comp: c as u32, mono }, k)))
            .collect();
        v.sort_by(|a, b| order.cmp_terms(&b.0, &a.0));
        v
    }

    pub(crate) fn from_mvec(ring: &Ring, rank: usize, v: &[(MTerm, u32)]) -> Self {
        let mut comps: Vec<Vec<(Monomial, u32)>> = vec![Vec::new(); rank];
        for &(t, c) in v {
            comps[t.comp as usize].push((t.mono, c));
        }
        let components = comps.into_iter().map(|terms| ring.from_terms(terms)).collect();
        FreeModuleElement { ring: ring.clone(), components }
    }
}

/// Reduced Gröbner basis of an ideal of `Q`, remembering how each basis
/// element is written in terms of the input generators.
#[derive(Clone)]
pub struct IdealBasis(Arc<IdealData>);

struct IdealData {
    ring: Ring,
    generators: Vec<Poly>,
    gb: Vec<Poly>,
    representation: Vec<Vec<Poly>>,
    vecs: Vec<MVec>,
}

impl std::fmt::Debug for IdealBasis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.0.gb.iter().map(|p| p.to_string())).finish()
    }
}

impl PartialEq for IdealBasis {
    fn eq(&self, other: &Self) -> bool {
        self.0.gb == other.0.gb
    }
}

impl IdealBasis {
    pub fn new(ring: &Ring, generators: &[Poly]) -> Result<Self> {
        if generators.iter().any(|p| !p.ring().same(ring)) {
            return Err(Error::RingMismatch);
        }
        let order = MonomialOrder::degrevlex(1);
        let track_order = MonomialOrder::degrevlex(generators.len());
        let fp = ring.field();
        let mut bb = Buchberger::new(fp, &order, &track_order, TrackMode::Exact, &[], false);
        for (j, g) in generators.iter().enumerate() {
            if g.is_zero() {
                continue;
            }
            let v = FreeModuleElement::new(ring, vec![g.clone()])?.to_mvec(&order);
            let t = vec![(MTerm { comp: j as u32, mono: Monomial::one() }, 1)];
            bb.add_input(v, t);
        }
        bb.run();
        let reduced = bb.reduced_basis();
        let mut gb = Vec::with_capacity(reduced.len());
        let mut representation = Vec::with_capacity(reduced.len());
        let mut vecs = Vec::with_capacity(reduced.len());
        for e in reduced {
            gb.push(FreeModuleElement::from_mvec(ring, 1, &e.v).components[0].clone());
            representation.push(
                FreeModuleElement::from_mvec(ring, generators.len(), &e.t).components,
            );
            vecs.push(e.v);
        }
        Ok(IdealBasis(Arc::new(IdealData {
            ring: ring.clone(),
            generators: generators.to_vec(),
            gb,
            representation,
            vecs,
        })))
    }

    pub fn ring(&self) -> &Ring {
        &self.0.ring
    }

    pub fn generators(&self) -> &[Poly] {
        &self.0.generators
    }

    /// Reduced, monic basis sorted ascending by leading monomial.
    pub fn elements(&self) -> &[Poly] {
        &self.0.gb
    }

    /// Row `l` writes `elements()[l]` in terms of `generators()`.
    pub fn representation(&self) -> &[Vec<Poly>] {
        &self.0.representation
    }

    pub(crate) fn vecs(&self) -> &[MVec] {
        &self.0.vecs
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.0.gb.is_empty()
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.0.gb.iter().any(|p| p.is_constant())
    }

    pub fn lead_monomials(&self) -> Vec<Monomial> {
        self.0.gb.iter().filter_map(Poly::leading_monomial).collect()
    }

    /// Not divisible by any leading monomial of the basis.
    pub fn is_standard(&self, m: &Monomial) -> bool {
        !self.0.vecs.iter().any(|g| g[0].0.mono.divides(m))
    }

    pub fn standard_monomials(&self, degree: u32) -> Vec<Monomial> {
        Monomial::all_of_degree(self.0.ring.nvars(), degree)
            .into_iter()
            .filter(|m| self.is_standard(m))
            .collect()
    }

    /// Division by the basis: cofactors per basis element and the remainder.
    pub fn divide(&self, p: &Poly) -> (Vec<Poly>, Poly) {
        let ring = &self.0.ring;
        let fp = ring.field();
        let mut cof: Vec<Vec<(Monomial, u32)>> = vec![Vec::new(); self.0.gb.len()];
        let mut rem: Vec<(Monomial, u32)> = Vec::new();
        let mut v: Vec<(Monomial, u32)> = p.terms().to_vec();
        let mut start = 0;
        while start < v.len() {
            let (m, c) = v[start];
            match self.0.gb.iter().position(|g| g.leading_monomial().unwrap().divides(&m)) {
                Some(l) => {
                    let lm = self.0.gb[l].leading_monomial().unwrap();
                    let q = lm.quotient_of(&m);
                    cof[l].push((q, c));
                    let rest = v.split_off(start);
                    v = crate::polyring::merge_scaled(fp, &rest, fp.neg(c), &q, self.0.gb[l].terms());
                    start = 0;
                }
                None => {
                    rem.push((m, c));
                    start += 1;
                }
            }
        }
        let cofactors = cof.into_iter().map(|t| ring.from_terms(t)).collect();
        (cofactors, Poly::from_sorted(ring, rem))
    }

    /// Normal form modulo the ideal.
    pub fn reduce(&self, p: &Poly) -> Poly {
        if self.0.gb.is_empty() {
            return p.clone();
        }
        self.divide(p).1
    }

    pub fn contains(&self, p: &Poly) -> bool {
        self.reduce(p).is_zero()
    }

    pub fn contains_ideal(&self, other: &IdealBasis) -> bool {
        other.elements().iter().all(|p| self.contains(p))
    }

    /// Cofactors `c_j` with `p = sum_j c_j * generators()[j]`. Division runs
    /// over the Gröbner basis in its stored order and is mapped back through
    /// the recorded representation, so the result is deterministic.
    pub fn generator_cofactors(&self, p: &Poly) -> Result<Vec<Poly>> {
        let (cof, rem) = self.divide(p);
        if !rem.is_zero() {
            return Err(Error::NonzeroRemainder(format!("{p} is not in the ideal (remainder {rem})")));
        }
        let ring = &self.0.ring;
        let mut out = vec![ring.zero(); self.0.generators.len()];
        for (c, rep) in cof.iter().zip(&self.0.representation) {
            if c.is_zero() {
                continue;
            }
            for (o, r) in out.iter_mut().zip(rep) {
                *o = o.add(&c.mul(r));
            }
        }
        Ok(out)
    }
}

/// A Gröbner basis of a submodule of a graded free module, optionally over
/// `Q/(modulus)`.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    ring: Ring,
    order: MonomialOrder,
    elements: Vec<FreeModuleElement>,
    vecs: Vec<MVec>,
    modulus: Option<IdealBasis>,
}

impl GroebnerBasis {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn elements(&self) -> &[FreeModuleElement] {
        &self.elements
    }

    pub fn modulus(&self) -> Option<&IdealBasis> {
        self.modulus.as_ref()
    }

    pub fn rank(&self) -> usize {
        self.order.rank()
    }

    /// Leading terms as `(position, monomial)`, including those of the ring
    /// relations installed in every position.
    pub fn lead_terms(&self) -> Vec<(usize, Monomial)> {
        let mut out: Vec<(usize, Monomial)> =
            self.vecs.iter().map(|v| (v[0].0.comp as usize, v[0].0.mono)).collect();
        if let Some(m) = &self.modulus {
            for c in 0..self.rank() {
                out.extend(m.lead_monomials().into_iter().map(|mono| (c, mono)));
            }
        }
        out
    }

    /// Checks Buchberger's criterion: every S-vector reduces to zero.
    pub fn is_groebner(&self) -> bool {
        let fp = self.ring.field();
        let ring_vecs: Vec<MVec> = self.modulus.as_ref().map_or(Vec::new(), |m| m.vecs().to_vec());
        let mut all: Vec<MVec> = self.vecs.clone();
        for c in 0..self.rank() as u32 {
            for g in &ring_vecs {
                all.push(g.iter().map(|&(t, k)| (MTerm { comp: c, mono: t.mono }, k)).collect());
            }
        }
        let minus = fp.neg(1);
        for i in 0..all.len() {
            for j in i + 1..all.len() {
                let (li, lj) = (all[i][0], all[j][0]);
                if li.0.comp != lj.0.comp {
                    continue;
                }
                let lcm = li.0.mono.lcm(&lj.0.mono);
                let qi = li.0.mono.quotient_of(&lcm);
                let qj = lj.0.mono.quotient_of(&lcm);
                let ci = fp.inv(li.1);
                let cj = fp.mul(minus, fp.inv(lj.1));
                let s = engine::axpy(fp, &self.order, &[], ci, &qi, &all[i], None);
                let s = engine::axpy(fp, &self.order, &s, cj, &qj, &all[j], None);
                if !reduce_vec(fp, &self.order, s, &all).0.is_empty() {
                    return false;
                }
            }
        }
        true
    }
}

/// Full reduction against arbitrary reducers; returns the remainder and, per
/// reducer, the accumulated quotient terms `(component-free monomial, coeff)`.
fn reduce_vec(
    fp: crate::polyring::PrimeField,
    order: &MonomialOrder,
    mut v: MVec,
    reducers: &[MVec],
) -> (MVec, Vec<Vec<(Monomial, u32)>>) {
    let mut quotients = vec![Vec::new(); reducers.len()];
    let mut rem = Vec::new();
    let mut start = 0;
    while start < v.len() {
        let (t, c) = v[start];
        let hit = reducers.iter().position(|g| g[0].0.comp == t.comp && g[0].0.mono.divides(&t.mono));
        match hit {
            Some(k) => {
                let g = &reducers[k];
                let q = g[0].0.mono.quotient_of(&t.mono);
                let f = fp.mul(c, fp.inv(g[0].1));
                quotients[k].push((q, f));
                let rest = v.split_off(start);
                v = engine::axpy(fp, order, &rest, fp.neg(f), &q, g, None);
                start = 0;
            }
            None => {
                rem.push((t, c));
                start += 1;
            }
        }
    }
    (rem, quotients)
}

/// Gröbner basis of the submodule generated by `gens`, over `Q/(modulus)`
/// when a modulus is given. Pairs are selected by lowest twisted lcm degree,
/// ties broken by index.
pub fn groebner_basis(
    ring: &Ring,
    gens: &[FreeModuleElement],
    order: &MonomialOrder,
    modulus: Option<&IdealBasis>,
) -> Result<GroebnerBasis> {
    if gens.iter().any(|g| !g.ring().same(ring) || g.rank() != order.rank()) {
        return Err(Error::Shape("generators must share the ambient free module".into()));
    }
    let ring_vecs: Vec<MVec> = modulus.map_or(Vec::new(), |m| m.vecs().to_vec());
    let track_order = MonomialOrder::degrevlex(0);
    let mut bb = Buchberger::new(ring.field(), order, &track_order, TrackMode::Off, &ring_vecs, false);
    for g in gens {
        let v = g.to_mvec(order);
        if !v.is_empty() {
            bb.add_input(v, Vec::new());
        }
    }
    bb.run();
    let reduced = bb.reduced_basis();
    let elements = reduced
        .iter()
        .map(|e| FreeModuleElement::from_mvec(ring, order.rank(), &e.v))
        .collect();
    let vecs = reduced.into_iter().map(|e| e.v).collect();
    Ok(GroebnerBasis {
        ring: ring.clone(),
        order: order.clone(),
        elements,
        vecs,
        modulus: modulus.cloned(),
    })
}

/// Result of dividing a vector by a Gröbner basis:
/// `v = sum cofactors[i] * elements[i] + modulus_part + remainder`, where
/// `modulus_part` lies in `(modulus) * Q^r`.
#[derive(Clone, Debug)]
pub struct Division {
    pub remainder: FreeModuleElement,
    pub cofactors: Vec<Poly>,
    pub modulus_part: FreeModuleElement,
}

pub fn normal_form(v: &FreeModuleElement, gb: &GroebnerBasis) -> Result<Division> {
    if !v.ring().same(&gb.ring) || v.rank() != gb.rank() {
        return Err(Error::Shape("vector is not in the ambient module of the basis".into()));
    }
    let fp = gb.ring.field();
    let mut reducers = gb.vecs.clone();
    if let Some(m) = &gb.modulus {
        for c in 0..gb.rank() as u32 {
            for g in m.vecs() {
                reducers.push(g.iter().map(|&(t, k)| (MTerm { comp: c, mono: t.mono }, k)).collect());
            }
        }
    }
    let (rem, quotients) = reduce_vec(fp, &gb.order, v.to_mvec(&gb.order), &reducers);
    let remainder = FreeModuleElement::from_mvec(&gb.ring, gb.rank(), &rem);
    let cofactors: Vec<Poly> = quotients[..gb.vecs.len()]
        .iter()
        .map(|q| gb.ring.from_terms(q.iter().copied()))
        .collect();
    let mut combo = FreeModuleElement::zero(&gb.ring, gb.rank());
    for (c, e) in cofactors.iter().zip(&gb.elements) {
        combo = combo.add(&e.mul_poly(c));
    }
    let modulus_part = v.sub(&combo).sub(&remainder);
    Ok(Division { remainder, cofactors, modulus_part })
}

/// Equality of the images of `(I)` and `(J)` in `A = Q/(f)`.
pub fn ideal_equal(i: &[Poly], j: &[Poly], ci: &CIPresentation) -> Result<bool> {
    Ok(ideal_in_quotient(i, ci)? == ideal_in_quotient(j, ci)?)
}

/// Reduced basis of `(gens) + (f)`.
pub fn ideal_in_quotient(gens: &[Poly], ci: &CIPresentation) -> Result<IdealBasis> {
    let mut all: Vec<Poly> = gens.to_vec();
    all.extend(ci.relations().iter().cloned());
    IdealBasis::new(ci.ring(), &all)
}

/// Generators of the kernel of `m` acting on columns, over `Q` or over
/// `Q/(modulus)`. Output columns are homogeneous with induced twists, sorted
/// by degree and then by discovery order.
pub fn syzygies(m: &GradedMatrix, modulus: Option<&IdealBasis>) -> Result<GradedMatrix> {
    if !m.is_homogeneous() {
        return Err(Error::NotHomogeneous("syzygies need a homogeneous matrix".into()));
    }
    let ring = m.ring();
    let value_order = MonomialOrder::degrevlex_twisted(m.row_twists().to_vec());
    let track_order = MonomialOrder::degrevlex_twisted(m.col_twists().to_vec());
    let ring_vecs: Vec<MVec> = modulus.map_or(Vec::new(), |md| md.vecs().to_vec());
    let mode = if modulus.is_some() { TrackMode::ModRing } else { TrackMode::Exact };
    let mut bb = Buchberger::new(ring.field(), &value_order, &track_order, mode, &ring_vecs, true);
    for j in 0..m.ncols() {
        let v = m.column(j).to_mvec(&value_order);
        let t = vec![(MTerm { comp: j as u32, mono: Monomial::one() }, 1)];
        bb.add_input(v, t);
    }
    bb.run();
    let mut syz: Vec<(i64, usize, MVec)> = bb
        .syzygies
        .into_iter()
        .enumerate()
        .map(|(k, s)| (track_order.twisted_degree(&s[0].0), k, s))
        .collect();
    syz.sort_by_key(|(d, k, _)| (*d, *k));
    let cols: Vec<FreeModuleElement> =
        syz.iter().map(|(_, _, s)| FreeModuleElement::from_mvec(ring, m.ncols(), s)).collect();
    let twists: Vec<i64> = syz.iter().map(|(d, _, _)| *d).collect();
    GradedMatrix::from_columns(ring, &cols, m.col_twists().to_vec(), twists)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::DEFAULT_CHARACTERISTIC;

    fn ring(vars: &[&str]) -> Ring {
        Ring::new(DEFAULT_CHARACTERISTIC, vars).unwrap()
    }

    fn polys(r: &Ring, s: &[&str]) -> Vec<Poly> {
        s.iter().map(|t| r.parse(t).unwrap()).collect()
    }

    fn strings(ps: &[Poly]) -> Vec<String> {
        ps.iter().map(|p| p.to_string()).collect()
    }

    #[test]
    fn monomial_ideal_is_its_own_basis() {
        let r = ring(&["x", "y"]);
        let i = IdealBasis::new(&r, &polys(&r, &["x^2", "x*y"])).unwrap();
        assert_eq!(strings(i.elements()), ["x*y", "x^2"]);
    }

    #[test]
    fn row_reduced_quadrics() {
        let r = ring(&["x", "y"]);
        let i = IdealBasis::new(&r, &polys(&r, &["x^2-y^2", "x^2+y^2"])).unwrap();
        assert_eq!(strings(i.elements()), ["y^2", "x^2"]);
    }

    #[test]
    fn representation_recovers_basis() {
        let r = ring(&["x", "y", "z"]);
        let gens = polys(&r, &["x^2+y*z", "x*y-z^2", "y^3+x*z^2"]);
        let i = IdealBasis::new(&r, &gens).unwrap();
        for (g, rep) in i.elements().iter().zip(i.representation()) {
            let mut acc = r.zero();
            for (c, f) in rep.iter().zip(&gens) {
                acc = acc.add(&c.mul(f));
            }
            assert_eq!(&acc, g);
        }
        let p = gens[0].mul(&r.parse("x+z").unwrap()).add(&gens[2].mul(&r.parse("y").unwrap()));
        let cof = i.generator_cofactors(&p).unwrap();
        let mut acc = r.zero();
        for (c, f) in cof.iter().zip(&gens) {
            acc = acc.add(&c.mul(f));
        }
        assert_eq!(acc, p);
    }

    #[test]
    fn submodule_over_quotient() {
        let r = ring(&["x"]);
        let f = IdealBasis::new(&r, &polys(&r, &["x^2"])).unwrap();
        let x = r.parse("x").unwrap();
        let gens = vec![
            FreeModuleElement::new(&r, vec![x.clone(), r.zero()]).unwrap(),
            FreeModuleElement::new(&r, vec![r.zero(), x.clone()]).unwrap(),
        ];
        let gb = groebner_basis(&r, &gens, &MonomialOrder::degrevlex(2), Some(&f)).unwrap();
        let leads = gb.lead_terms();
        assert!(leads.contains(&(0, Monomial::var(0))));
        assert!(leads.contains(&(1, Monomial::var(0))));
        assert_eq!(gb.elements().len(), 2);
        assert!(gb.is_groebner());
    }

    #[test]
    fn normal_form_examples() {
        let r = ring(&["x", "y"]);
        let gb1 = groebner_basis(
            &r,
            &[FreeModuleElement::new(&r, polys(&r, &["x^2-y"])).unwrap()],
            &MonomialOrder::degrevlex(1),
            None,
        )
        .unwrap();
        let d = normal_form(&FreeModuleElement::new(&r, polys(&r, &["x^2"])).unwrap(), &gb1).unwrap();
        assert_eq!(d.remainder.component(0), &r.parse("y").unwrap());
        assert_eq!(d.cofactors, polys(&r, &["1"]));

        let gens: Vec<FreeModuleElement> = ["x^3", "y^3"]
            .iter()
            .map(|s| FreeModuleElement::new(&r, polys(&r, &[s])).unwrap())
            .collect();
        let gb2 = groebner_basis(&r, &gens, &MonomialOrder::degrevlex(1), None).unwrap();
        let v = FreeModuleElement::new(&r, polys(&r, &["x^2*y^2"])).unwrap();
        let d = normal_form(&v, &gb2).unwrap();
        assert_eq!(d.remainder, v);
        assert!(d.cofactors.iter().all(Poly::is_zero));
        let member = FreeModuleElement::new(&r, polys(&r, &["x^4+x*y^3"])).unwrap();
        assert!(normal_form(&member, &gb2).unwrap().remainder.is_zero());
    }

    #[test]
    fn koszul_syzygy() {
        let r = ring(&["x", "y"]);
        let m = GradedMatrix::from_strings(&r, &[vec!["x", "y"]], None).unwrap();
        let s = syzygies(&m, None).unwrap();
        assert_eq!(s.ncols(), 1);
        let col = s.column(0);
        // (y, -x) up to a scalar
        let lead = col.component(0).leading_term().unwrap().1;
        let scaled: Vec<Poly> = col.components().iter().map(|p| p.scale(r.field().inv(lead))).collect();
        assert_eq!(scaled, polys(&r, &["y", "-x"]));
        assert!(m.mul(&s).unwrap().is_zero());
    }

    #[test]
    fn syzygy_over_quotient() {
        let r = ring(&["x"]);
        let f = IdealBasis::new(&r, &polys(&r, &["x^2"])).unwrap();
        let m = GradedMatrix::from_strings(&r, &[vec!["x"]], None).unwrap();
        let s = syzygies(&m, Some(&f)).unwrap();
        assert_eq!(s.ncols(), 1);
        assert_eq!(s.entry(0, 0).monic(), r.parse("x").unwrap());
    }
}
