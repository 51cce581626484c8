//! Complete intersections, minimal graded free resolutions over them, order
//! of matrices and ideals of minors.

mod matrix;
mod minimal;

use std::collections::HashMap;
use std::fmt::Write as _;

pub use matrix::GradedMatrix;
pub(crate) use minimal::minimal_generators;
pub use minimal::minimalize;

use crate::error::{Error, Result};
use crate::groebner::{check_regular_sequence, format_zpoly, syzygies, HilbertData, IdealBasis};
use crate::polyring::{OrdValue, Poly, Ring};

/// `A = Q/(f_1, ..., f_c)` for a homogeneous regular sequence with
/// `deg f_1 >= ... >= deg f_c >= 2`.
#[derive(Clone, Debug)]
pub struct CIPresentation {
    ring: Ring,
    f: Vec<Poly>,
    degrees: Vec<u32>,
    ideal: IdealBasis,
    hilbert: HilbertData,
}

impl CIPresentation {
    /// Sorts `f` by degree, descending (stable), and certifies regularity by
    /// the Hilbert series of `Q/(f)`.
    pub fn new(ring: &Ring, f: Vec<Poly>) -> Result<Self> {
        let mut f = f;
        for p in &f {
            if !p.ring().same(ring) {
                return Err(Error::RingMismatch);
            }
            if p.is_zero() || !p.is_homogeneous() {
                return Err(Error::NotHomogeneous(format!("relation {p} must be a nonzero form")));
            }
            if p.degree() < Some(2) {
                return Err(Error::Precondition(format!("relation {p} must lie in the square of the maximal ideal")));
            }
        }
        f.sort_by_key(|p| std::cmp::Reverse(p.degree()));
        let check = check_regular_sequence(ring, &f)?;
        if !check.regular {
            let mut found = format_zpoly(&check.found.numerator);
            if check.found.dim > 0 {
                found.push_str(&format!(" over (1-z)^{}", check.found.dim));
            }
            let mut expected = format_zpoly(&check.expected);
            let want_dim = ring.nvars().saturating_sub(f.len());
            if want_dim > 0 {
                expected.push_str(&format!(" over (1-z)^{want_dim}"));
            }
            return Err(Error::NotRegularSequence { expected, found });
        }
        let degrees = f.iter().map(|p| p.degree().unwrap()).collect();
        let ideal = IdealBasis::new(ring, &f)?;
        Ok(CIPresentation { ring: ring.clone(), f, degrees, ideal, hilbert: check.found })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn relations(&self) -> &[Poly] {
        &self.f
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn codim(&self) -> usize {
        self.f.len()
    }

    /// `s_1 = deg f_1`, or `None` when `c = 0`.
    pub fn max_degree(&self) -> Option<u32> {
        self.degrees.first().copied()
    }

    pub fn ideal(&self) -> &IdealBasis {
        &self.ideal
    }

    pub fn hilbert(&self) -> &HilbertData {
        &self.hilbert
    }

    pub fn reduce(&self, p: &Poly) -> Poly {
        self.ideal.reduce(p)
    }

    /// `Q/(f_1, ..., f_k)`.
    pub fn prefix(&self, k: usize) -> Result<CIPresentation> {
        CIPresentation::new(&self.ring, self.f[..k].to_vec())
    }
}

/// Minimal graded free resolution `F_N -> ... -> F_1 -> F_0` over `A`.
#[derive(Clone, Debug)]
pub struct MinimalResolution {
    ci: CIPresentation,
    diffs: Vec<GradedMatrix>,
    betti: Vec<usize>,
}

impl MinimalResolution {
    /// Wraps differentials `d_1..d_N`, checking composability, `d_i d_{i+1} = 0`
    /// in `A`, normal-form entries and the absence of unit entries.
    pub fn from_differentials(ci: &CIPresentation, diffs: Vec<GradedMatrix>) -> Result<Self> {
        if diffs.is_empty() {
            return Err(Error::Precondition("a resolution needs at least one differential".into()));
        }
        for (i, w) in diffs.windows(2).enumerate() {
            let prod = w[0].mul(&w[1])?;
            if !prod.is_zero_mod(ci.ideal()) {
                return Err(Error::Precondition(format!("d_{} d_{} is not zero", i + 1, i + 2)));
            }
        }
        for (i, d) in diffs.iter().enumerate() {
            if d.entries().any(|p| !p.is_zero() && p.is_constant()) {
                return Err(Error::NotMinimal(format!("d_{} has a unit entry", i + 1)));
            }
        }
        let mut betti = vec![diffs[0].nrows()];
        betti.extend(diffs.iter().map(GradedMatrix::ncols));
        let diffs = diffs.iter().map(|d| d.reduce(ci.ideal())).collect();
        Ok(MinimalResolution { ci: ci.clone(), diffs, betti })
    }

    pub fn ci(&self) -> &CIPresentation {
        &self.ci
    }

    pub fn length(&self) -> usize {
        self.diffs.len()
    }

    /// `d_i : F_i -> F_{i-1}` for `1 <= i <= length`.
    pub fn differential(&self, i: usize) -> &GradedMatrix {
        &self.diffs[i - 1]
    }

    pub fn differentials(&self) -> &[GradedMatrix] {
        &self.diffs
    }

    /// `beta_0, ..., beta_N`.
    pub fn betti(&self) -> &[usize] {
        &self.betti
    }

    /// Generator degrees of `F_i`.
    pub fn twists(&self, i: usize) -> &[i64] {
        if i == 0 {
            self.diffs[0].row_twists()
        } else {
            self.diffs[i - 1].col_twists()
        }
    }

    /// `ord d_i` for `i = 1..=N`.
    pub fn ord_profile(&self) -> Vec<OrdValue> {
        self.diffs.iter().map(GradedMatrix::ord).collect()
    }

    /// Presentation of the syzygy module `M_n = im d_n`, namely `d_{n+1}`.
    pub fn syzygy_presentation(&self, n: usize) -> Result<&GradedMatrix> {
        if n + 1 > self.length() {
            return Err(Error::OutOfRange(format!("M_{n} needs d_{} (length {})", n + 1, self.length())));
        }
        Ok(&self.diffs[n])
    }

    /// Whether the resolution reached a zero module.
    pub fn is_finite(&self) -> bool {
        self.betti.last() == Some(&0)
    }

    /// CSV with header `i,beta_i,ord_partial_i`; row `i` carries `beta_i`
    /// and `ord d_i`, with `d_0 = 0`.
    pub fn betti_csv(&self) -> String {
        let mut s = String::from("i,beta_i,ord_partial_i\n");
        let ords = self.ord_profile();
        for (i, b) in self.betti.iter().enumerate() {
            let o = if i == 0 { OrdValue::Infinite } else { ords[i - 1] };
            let _ = writeln!(s, "{i},{b},{o}");
        }
        s
    }
}

/// Minimal graded free resolution of `coker(presentation)` over `A` up to
/// homological degree `length`.
pub fn minimal_resolution(presentation: &GradedMatrix, ci: &CIPresentation, length: usize) -> Result<MinimalResolution> {
    if length == 0 {
        return Err(Error::Precondition("length must be at least 1".into()));
    }
    if !presentation.ring().same(ci.ring()) {
        return Err(Error::RingMismatch);
    }
    if !presentation.is_homogeneous() {
        return Err(Error::NotHomogeneous("presentation matrix".into()));
    }
    let ideal = ci.ideal();
    let first = minimalize(&[presentation.reduce(ideal)], Some(ideal))?.remove(0);
    let keep = minimal_generators(&first, ci);
    let mut diffs = vec![first.select_cols(&keep)];
    while diffs.len() < length {
        let prev = diffs.last().unwrap();
        let next = if prev.ncols() == 0 {
            GradedMatrix::zero(ci.ring(), Vec::new(), Vec::new())
        } else {
            let syz = syzygies(prev, Some(ideal))?.reduce(ideal);
            let keep = minimal_generators(&syz, ci);
            syz.select_cols(&keep)
        };
        log::debug!("d_{}: {}x{}", diffs.len() + 1, next.nrows(), next.ncols());
        diffs.push(next);
    }
    let mut betti = vec![diffs[0].nrows()];
    betti.extend(diffs.iter().map(GradedMatrix::ncols));
    Ok(MinimalResolution { ci: ci.clone(), diffs, betti })
}

/// Order of a matrix over `A`: least degree of a nonzero normal-form entry.
pub fn ord_matrix(m: &GradedMatrix, ci: &CIPresentation) -> OrdValue {
    m.reduce(ci.ideal()).ord()
}

/// All `r x r` minors of `m`, reduced modulo `f`, in a deterministic order.
pub fn minors(m: &GradedMatrix, r: usize, ci: &CIPresentation) -> Result<Vec<Poly>> {
    if r == 0 || r > m.nrows().min(m.ncols()) {
        return Err(Error::OutOfRange(format!(
            "minor size {r} for a {}x{} matrix",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.ncols() > 63 {
        return Err(Error::OutOfRange("more than 63 columns".into()));
    }
    let m = m.reduce(ci.ideal());
    let mut out = Vec::new();
    for rows in subsets(m.nrows(), r) {
        // expansion along the last row, keyed by column mask
        let mut level: HashMap<u64, Poly> = HashMap::new();
        for j in 0..m.ncols() {
            let p = m.entry(rows[0], j);
            if !p.is_zero() {
                level.insert(1 << j, p.clone());
            }
        }
        for (k, &row) in rows.iter().enumerate().skip(1) {
            let mut next: HashMap<u64, Poly> = HashMap::new();
            for (&mask, det) in &level {
                for j in 0..m.ncols() {
                    if mask & (1 << j) != 0 {
                        continue;
                    }
                    let a = m.entry(row, j);
                    if a.is_zero() {
                        continue;
                    }
                    let full = mask | (1 << j);
                    let pos = (full & ((1u64 << j) - 1)).count_ones() as usize;
                    let term = det.mul(a);
                    let term = if (k + pos) % 2 == 1 { term.neg() } else { term };
                    let e = next.entry(full).or_insert_with(|| m.ring().zero());
                    *e = e.add(&term);
                }
            }
            level = next.into_iter().map(|(k, v)| (k, ci.reduce(&v))).filter(|(_, v)| !v.is_zero()).collect();
        }
        let mut dets: Vec<(u64, Poly)> = level.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        dets.sort_by_key(|(k, _)| *k);
        out.extend(dets.into_iter().map(|(_, v)| v));
    }
    Ok(out)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Ideal of `r x r` minors of `m` in `A`, as a reduced basis containing `f`.
pub fn minor_ideal(m: &GradedMatrix, r: usize, ci: &CIPresentation) -> Result<IdealBasis> {
    let mut gens = minors(m, r, ci)?;
    gens.extend(ci.relations().iter().cloned());
    IdealBasis::new(ci.ring(), &gens)
}

/// `I^r_i` for `i = 1..=N`. When `r` exceeds the size of `d_i` the ideal is
/// zero in `A`.
#[derive(Clone, Debug)]
pub struct MinorIdealChain {
    pub r: usize,
    pub ideals: Vec<IdealBasis>,
    pub stabilization: Option<usize>,
}

impl MinorIdealChain {
    /// `I^r_i` for `1 <= i <= N`.
    pub fn ideal(&self, i: usize) -> &IdealBasis {
        &self.ideals[i - 1]
    }
}

pub fn minor_ideal_chain(res: &MinimalResolution, r: usize) -> Result<MinorIdealChain> {
    let ci = res.ci();
    let ideals = res
        .differentials()
        .iter()
        .map(|d| {
            if r == 0 {
                Err(Error::OutOfRange("minor size 0".into()))
            } else if r > d.nrows().min(d.ncols()) {
                Ok(ci.ideal().clone())
            } else {
                minor_ideal(d, r, ci)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let n = ideals.len();
    let stabilization = (1..n.saturating_sub(1)).find(|&n0| (n0..=n - 2).all(|i| ideals[i - 1] == ideals[i + 1]));
    Ok(MinorIdealChain { r, ideals, stabilization })
}

/// Complexity read off a Betti sequence: 0 when the sequence ends in zero,
/// otherwise one more than the degree of polynomial growth of the even and
/// odd subsequences over the last eight entries.
pub fn complexity_estimate(betti: &[usize]) -> Result<usize> {
    const WINDOW: usize = 8;
    if betti.len() < WINDOW {
        return Err(Error::Precondition(format!("need at least {WINDOW} Betti numbers, got {}", betti.len())));
    }
    if betti.last() == Some(&0) {
        return Ok(0);
    }
    let tail = &betti[betti.len() - WINDOW..];
    let growth = |seq: Vec<i64>| {
        let mut d = 0;
        let mut cur = seq;
        loop {
            let diff: Vec<i64> = cur.windows(2).map(|w| w[1] - w[0]).collect();
            if diff.iter().all(|&x| x == 0) || diff.len() <= 1 {
                return if diff.iter().all(|&x| x == 0) { d } else { d + 1 };
            }
            d += 1;
            cur = diff;
        }
    };
    let even: Vec<i64> = tail.iter().step_by(2).map(|&b| b as i64).collect();
    let odd: Vec<i64> = tail.iter().skip(1).step_by(2).map(|&b| b as i64).collect();
    Ok(growth(even).max(growth(odd)) + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::DEFAULT_CHARACTERISTIC;

    fn setup(vars: &[&str], f: &[&str]) -> (Ring, CIPresentation) {
        let r = Ring::new(DEFAULT_CHARACTERISTIC, vars).unwrap();
        let f = f.iter().map(|s| r.parse(s).unwrap()).collect();
        let ci = CIPresentation::new(&r, f).unwrap();
        (r, ci)
    }

    #[test]
    fn relations_sorted_and_checked() {
        let (r, ci) = setup(&["x", "y"], &["y^2", "x^3"]);
        assert_eq!(ci.degrees(), &[3, 2]);
        assert_eq!(ci.relations()[0], r.parse("x^3").unwrap());
        let bad = CIPresentation::new(&r, vec![r.parse("x^2").unwrap(), r.parse("x*y").unwrap()]);
        assert!(matches!(bad, Err(Error::NotRegularSequence { .. })));
        assert!(CIPresentation::new(&r, vec![]).is_ok());
    }

    #[test]
    fn periodic_rank_one() {
        let (r, ci) = setup(&["x"], &["x^2"]);
        let pres = GradedMatrix::from_strings(&r, &[vec!["x"]], None).unwrap();
        let res = minimal_resolution(&pres, &ci, 6).unwrap();
        assert_eq!(res.betti(), &[1; 7]);
        assert!(res.differentials().iter().all(|d| d.entry(0, 0).monic() == r.parse("x").unwrap()));
    }

    #[test]
    fn residue_field_of_two_squares() {
        let (r, ci) = setup(&["x", "y"], &["x^2", "y^2"]);
        let pres = GradedMatrix::from_strings(&r, &[vec!["x", "y"]], None).unwrap();
        let res = minimal_resolution(&pres, &ci, 6).unwrap();
        assert_eq!(res.betti(), &[1, 2, 3, 4, 5, 6, 7]);
        for w in res.differentials().windows(2) {
            assert!(w[0].mul(&w[1]).unwrap().is_zero_mod(ci.ideal()));
        }
        assert!(res.ord_profile().iter().all(|o| *o == OrdValue::Finite(1)));
        assert!(res.betti_csv().starts_with("i,beta_i,ord_partial_i\n0,1,inf\n1,2,1\n2,3,1\n"));
    }

    #[test]
    fn free_module_has_no_syzygies() {
        let (r, ci) = setup(&["x", "y"], &["x^2", "y^2"]);
        let pres = GradedMatrix::zero(&r, vec![0], vec![]);
        let res = minimal_resolution(&pres, &ci, 3).unwrap();
        assert_eq!(res.betti(), &[1, 0, 0, 0]);
        assert!(res.is_finite());
    }

    #[test]
    fn ord_examples() {
        let (r, ci) = setup(&["x", "y"], &["x^3", "y^2"]);
        let free = CIPresentation::new(&r, vec![]).unwrap();
        let m = GradedMatrix::from_strings(&r, &[vec!["x", "y^2"], vec!["0", "x^2"]], None).unwrap();
        assert_eq!(ord_matrix(&m, &free), OrdValue::Finite(1));
        let z = GradedMatrix::zero(&r, vec![0], vec![1]);
        assert_eq!(ord_matrix(&z, &ci), OrdValue::Infinite);
        let c = GradedMatrix::from_strings(&r, &[vec!["x^3"]], None).unwrap();
        assert_eq!(ord_matrix(&c, &ci), OrdValue::Infinite);
    }

    #[test]
    fn minor_examples() {
        let (r, _) = setup(&["x", "y"], &["x^3", "y^3"]);
        let free = CIPresentation::new(&r, vec![]).unwrap();
        let m = GradedMatrix::from_strings(&r, &[vec!["x", "y"], vec!["y", "x"]], None).unwrap();
        let i = minor_ideal(&m, 2, &free).unwrap();
        assert_eq!(i.elements(), &[r.parse("x^2-y^2").unwrap()]);
        let row = GradedMatrix::from_strings(&r, &[vec!["x", "y"]], None).unwrap();
        assert_eq!(minor_ideal(&row, 1, &free).unwrap().elements(), &[r.parse("y").unwrap(), r.parse("x").unwrap()]);
        assert!(matches!(minor_ideal(&m, 3, &free), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn three_by_three_determinant() {
        let (r, _) = setup(&["x", "y", "z"], &[]);
        let free = CIPresentation::new(&r, vec![]).unwrap();
        let m = GradedMatrix::from_strings(
            &r,
            &[vec!["x", "y", "0"], vec!["0", "y", "z"], vec!["z", "0", "x"]],
            None,
        )
        .unwrap();
        let d = minors(&m, 3, &free).unwrap();
        // x*(y*x - 0) - y*(0 - z*z) = x^2*y + y*z^2
        assert_eq!(d, vec![r.parse("x^2*y+y*z^2").unwrap()]);
    }

    #[test]
    fn complexity_examples() {
        assert_eq!(complexity_estimate(&[1, 0, 0, 0, 0, 0, 0, 0]).unwrap(), 0);
        assert_eq!(complexity_estimate(&[1; 8]).unwrap(), 1);
        assert_eq!(complexity_estimate(&[1, 2, 3, 4, 5, 6, 7, 8]).unwrap(), 2);
        assert_eq!(complexity_estimate(&[1, 2, 1, 2, 1, 2, 1, 2]).unwrap(), 1);
        assert_eq!(complexity_estimate(&[1, 3, 6, 10, 15, 21, 28, 36]).unwrap(), 3);
        assert!(complexity_estimate(&[1, 2]).is_err());
    }
}
