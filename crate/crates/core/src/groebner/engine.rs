//! Buchberger's algorithm on sparse module vectors.
//!
//! Every basis element carries a `track`: its expression in terms of the input
//! generators. When a value reduces to zero the track is a syzygy of the
//! inputs, which is how both cofactor tracking and syzygy modules are produced
//! from the same loop.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};

use crate::polyring::{Monomial, PrimeField};

use super::MonomialOrder;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub(crate) struct MTerm {
    pub comp: u32,
    pub mono: Monomial,
}

/// Sparse module vector, terms strictly descending in some [`MonomialOrder`].
pub(crate) type MVec = Vec<(MTerm, u32)>;

/// `a + c * q * b`, where `b`'s terms are placed into component `comp` when
/// given. The shifted `b` must stay sorted, which holds for any module order.
pub(crate) fn axpy(
    fp: PrimeField,
    order: &MonomialOrder,
    a: &[(MTerm, u32)],
    c: u32,
    q: &Monomial,
    b: &[(MTerm, u32)],
    comp: Option<u32>,
) -> MVec {
    if c == 0 || b.is_empty() {
        return a.to_vec();
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut i = 0;
    for &(bt, bc) in b {
        let t = MTerm { comp: comp.unwrap_or(bt.comp), mono: bt.mono.mul(q) };
        let v = fp.mul(bc, c);
        loop {
            if i < a.len() {
                match order.cmp_terms(&a[i].0, &t) {
                    Ordering::Greater => {
                        out.push(a[i]);
                        i += 1;
                        continue;
                    }
                    Ordering::Equal => {
                        let s = fp.add(a[i].1, v);
                        if s != 0 {
                            out.push((t, s));
                        }
                        i += 1;
                    }
                    Ordering::Less => out.push((t, v)),
                }
            } else {
                out.push((t, v));
            }
            break;
        }
    }
    out.extend_from_slice(&a[i..]);
    out
}

pub(crate) fn scale(fp: PrimeField, v: &mut MVec, c: u32) {
    if c == 1 {
        return;
    }
    for t in v.iter_mut() {
        t.1 = fp.mul(t.1, c);
    }
}

/// Fully reduces `v` against rank-one ring reducers applied in any component.
pub(crate) fn reduce_mod_ring(
    fp: PrimeField,
    order: &MonomialOrder,
    mut v: MVec,
    ring: &[MVec],
) -> MVec {
    if ring.is_empty() {
        return v;
    }
    let mut out: MVec = Vec::new();
    let mut start = 0;
    while start < v.len() {
        let (t, c) = v[start];
        match ring.iter().find(|g| g[0].0.mono.divides(&t.mono)) {
            Some(g) => {
                let q = g[0].0.mono.quotient_of(&t.mono);
                let rest = v.split_off(start);
                v = axpy(fp, order, &rest, fp.neg(c), &q, g, Some(t.comp));
                start = 0;
            }
            None => {
                out.push((t, c));
                start += 1;
            }
        }
    }
    out
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub(crate) enum TrackMode {
    /// No tracking.
    Off,
    /// Exact tracks over the polynomial ring.
    Exact,
    /// Tracks reduced modulo the ring relations after each step.
    ModRing,
}

#[derive(Clone, Debug)]
pub(crate) struct Elem {
    pub v: MVec,
    pub t: MVec,
    pub ring: bool,
}

impl Elem {
    fn lead(&self) -> MTerm {
        self.v[0].0
    }
}

pub(crate) struct Buchberger<'a> {
    fp: PrimeField,
    order: &'a MonomialOrder,
    track_order: &'a MonomialOrder,
    mode: TrackMode,
    ring: &'a [MVec],
    collect_syzygies: bool,
    product_criterion: bool,
    pub elems: Vec<Elem>,
    by_comp: Vec<Vec<usize>>,
    pub syzygies: Vec<MVec>,
    inputs: Vec<Option<(MVec, MVec)>>,
    queue: BTreeSet<(i64, u8, usize, usize)>,
    pending: HashSet<(usize, usize)>,
}

impl<'a> Buchberger<'a> {
    /// `ring` holds a reduced Gröbner basis of the ring relations as rank-one
    /// vectors; they are installed in every component of the value module.
    pub fn new(
        fp: PrimeField,
        order: &'a MonomialOrder,
        track_order: &'a MonomialOrder,
        mode: TrackMode,
        ring: &'a [MVec],
        collect_syzygies: bool,
    ) -> Self {
        let rank = order.rank();
        let mut b = Buchberger {
            fp,
            order,
            track_order,
            mode,
            ring,
            collect_syzygies,
            product_criterion: rank == 1 && !collect_syzygies,
            elems: Vec::new(),
            by_comp: vec![Vec::new(); rank],
            syzygies: Vec::new(),
            inputs: Vec::new(),
            queue: BTreeSet::new(),
            pending: HashSet::new(),
        };
        for comp in 0..rank as u32 {
            for g in ring {
                let v: MVec =
                    g.iter().map(|&(t, c)| (MTerm { comp, mono: t.mono }, c)).collect();
                b.push_elem(Elem { v, t: Vec::new(), ring: true });
            }
        }
        b
    }

    pub fn add_input(&mut self, v: MVec, t: MVec) {
        let idx = self.inputs.len();
        let deg = v.first().map_or(i64::MIN, |(t, _)| self.order.twisted_degree(t));
        self.inputs.push(Some((v, t)));
        self.queue.insert((deg, 0, idx, 0));
    }

    pub fn run(&mut self) {
        while let Some(item) = self.queue.pop_first() {
            let (_, kind, i, j) = item;
            let (v, t) = if kind == 0 {
                self.inputs[i].take().expect("input consumed twice")
            } else {
                self.pending.remove(&(i, j));
                if self.chain_criterion(i, j) {
                    continue;
                }
                self.spair(i, j)
            };
            self.process(v, t);
        }
    }

    fn process(&mut self, mut v: MVec, mut t: MVec) {
        self.top_reduce(&mut v, &mut t);
        if self.mode == TrackMode::ModRing {
            t = reduce_mod_ring(self.fp, self.track_order, t, self.ring);
        }
        if v.is_empty() {
            if self.collect_syzygies && !t.is_empty() {
                self.syzygies.push(t);
            }
            return;
        }
        let inv = self.fp.inv(v[0].1);
        scale(self.fp, &mut v, inv);
        scale(self.fp, &mut t, inv);
        let idx = self.push_elem(Elem { v, t, ring: false });
        self.make_pairs(idx);
    }

    fn push_elem(&mut self, e: Elem) -> usize {
        let idx = self.elems.len();
        self.by_comp[e.lead().comp as usize].push(idx);
        self.elems.push(e);
        idx
    }

    fn make_pairs(&mut self, new: usize) {
        let lead = self.elems[new].lead();
        for &k in &self.by_comp[lead.comp as usize] {
            if k == new {
                continue;
            }
            let lk = self.elems[k].lead();
            if self.product_criterion && lk.mono.is_coprime(&lead.mono) {
                continue;
            }
            let lcm = MTerm { comp: lead.comp, mono: lk.mono.lcm(&lead.mono) };
            let deg = self.order.twisted_degree(&lcm);
            let (a, b) = (k.min(new), k.max(new));
            self.queue.insert((deg, 1, a, b));
            self.pending.insert((a, b));
        }
    }

    fn chain_criterion(&self, i: usize, j: usize) -> bool {
        let (li, lj) = (self.elems[i].lead(), self.elems[j].lead());
        let lcm = li.mono.lcm(&lj.mono);
        self.by_comp[li.comp as usize].iter().any(|&k| {
            k != i
                && k != j
                && self.elems[k].lead().mono.divides(&lcm)
                && !self.pending.contains(&(i.min(k), i.max(k)))
                && !self.pending.contains(&(j.min(k), j.max(k)))
        })
    }

    fn spair(&self, i: usize, j: usize) -> (MVec, MVec) {
        let (ei, ej) = (&self.elems[i], &self.elems[j]);
        let lcm = ei.lead().mono.lcm(&ej.lead().mono);
        let qi = ei.lead().mono.quotient_of(&lcm);
        let qj = ej.lead().mono.quotient_of(&lcm);
        let fp = self.fp;
        let minus = fp.neg(1);
        let v = axpy(fp, self.order, &shift(&ei.v, &qi), minus, &qj, &ej.v, None);
        let t = if self.mode == TrackMode::Off {
            Vec::new()
        } else {
            axpy(fp, self.track_order, &shift(&ei.t, &qi), minus, &qj, &ej.t, None)
        };
        (v, t)
    }

    fn find_reducer(&self, t: &MTerm) -> Option<usize> {
        self.by_comp[t.comp as usize]
            .iter()
            .copied()
            .find(|&k| self.elems[k].lead().mono.divides(&t.mono))
    }

    fn top_reduce(&self, v: &mut MVec, t: &mut MVec) {
        while let Some(&(lt, lc)) = v.first() {
            let Some(k) = self.find_reducer(&lt) else {
                break;
            };
            let e = &self.elems[k];
            let q = e.lead().mono.quotient_of(&lt.mono);
            let c = self.fp.neg(lc);
            *v = axpy(self.fp, self.order, v, c, &q, &e.v, None);
            if self.mode != TrackMode::Off && !e.t.is_empty() {
                *t = axpy(self.fp, self.track_order, t, c, &q, &e.t, None);
            }
        }
    }

    /// Minimal, tail-reduced, monic basis of the non-ring elements, sorted
    /// ascending by leading term.
    pub fn reduced_basis(&self) -> Vec<Elem> {
        let n = self.elems.len();
        let keep: Vec<usize> = (0..n)
            .filter(|&i| !self.elems[i].ring)
            .filter(|&i| {
                let li = self.elems[i].lead();
                !self.by_comp[li.comp as usize].iter().any(|&k| {
                    let lk = self.elems[k].lead();
                    k != i && lk.mono.divides(&li.mono) && (lk.mono != li.mono || k < i)
                })
            })
            .collect();
        let reducers: Vec<usize> = (0..n).filter(|&i| self.elems[i].ring || keep.contains(&i)).collect();
        let mut out: Vec<Elem> = keep
            .iter()
            .map(|&i| {
                let e = &self.elems[i];
                let (head, tail) = e.v.split_at(1);
                let mut t = e.t.clone();
                let tail = self.full_reduce(tail.to_vec(), &mut t, &reducers, i);
                let mut v = head.to_vec();
                v.extend(tail);
                if self.mode == TrackMode::ModRing {
                    t = reduce_mod_ring(self.fp, self.track_order, t, self.ring);
                }
                Elem { v, t, ring: false }
            })
            .collect();
        out.sort_by(|a, b| self.order.cmp_terms(&a.lead(), &b.lead()));
        out
    }

    fn full_reduce(&self, mut v: MVec, t: &mut MVec, reducers: &[usize], skip: usize) -> MVec {
        let mut out = Vec::new();
        let mut start = 0;
        while start < v.len() {
            let (lt, lc) = v[start];
            let hit = reducers.iter().copied().find(|&k| {
                k != skip && {
                    let l = self.elems[k].lead();
                    l.comp == lt.comp && l.mono.divides(&lt.mono)
                }
            });
            match hit {
                Some(k) => {
                    let e = &self.elems[k];
                    let q = e.lead().mono.quotient_of(&lt.mono);
                    let c = self.fp.neg(lc);
                    let rest = v.split_off(start);
                    v = axpy(self.fp, self.order, &rest, c, &q, &e.v, None);
                    start = 0;
                    if self.mode != TrackMode::Off && !e.t.is_empty() {
                        *t = axpy(self.fp, self.track_order, t, c, &q, &e.t, None);
                    }
                }
                None => {
                    out.push((lt, lc));
                    start += 1;
                }
            }
        }
        out
    }
}

fn shift(v: &MVec, q: &Monomial) -> MVec {
    v.iter().map(|&(t, c)| (MTerm { comp: t.comp, mono: t.mono.mul(q) }, c)).collect()
}
