//! Hilbert series from leading-term monomial ideals.

use std::fmt;

use serde::Serialize;

use super::{groebner_basis, FreeModuleElement, IdealBasis, MonomialOrder};
use crate::error::{Error, Result};
use crate::polyring::{Monomial, Poly, Ring};
use crate::resolution::{CIPresentation, GradedMatrix};

/// `H_M(z) = numerator(z) / (1 - z)^dim` with `numerator(1) != 0` (for
/// nonzero `M`). `length` is `numerator(1)` when `dim == 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HilbertData {
    pub numerator: Vec<i64>,
    pub dim: usize,
    pub length: Option<u64>,
}

impl HilbertData {
    fn from_numerator(nvars: usize, mut num: Vec<i64>, dim: usize) -> Self {
        trim(&mut num);
        for _ in dim..nvars {
            num = divide_one_minus_z(&num).expect("pole order and dimension disagree");
        }
        let length = (dim == 0).then(|| num.iter().sum::<i64>() as u64);
        HilbertData { numerator: num, dim, length }
    }

    /// First `count` values of the Hilbert function.
    pub fn coefficients(&self, count: usize) -> Vec<i64> {
        let mut c: Vec<i64> = (0..count).map(|i| self.numerator.get(i).copied().unwrap_or(0)).collect();
        for _ in 0..self.dim {
            for i in 1..count {
                c[i] += c[i - 1];
            }
        }
        c
    }
}

impl fmt::Display for HilbertData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_zpoly(&self.numerator))
    }
}

/// Integer polynomial in `z`, lowest degree first, e.g. `1+2z+z^2`.
pub fn format_zpoly(c: &[i64]) -> String {
    let mut s = String::new();
    for (i, &a) in c.iter().enumerate() {
        if a == 0 {
            continue;
        }
        if !s.is_empty() || a < 0 {
            s.push(if a < 0 { '-' } else { '+' });
        }
        let m = a.unsigned_abs();
        match i {
            0 => s.push_str(&m.to_string()),
            _ => {
                if m != 1 {
                    s.push_str(&m.to_string());
                }
                s.push('z');
                if i > 1 {
                    s.push_str(&format!("^{i}"));
                }
            }
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

fn trim(v: &mut Vec<i64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn divide_one_minus_z(num: &[i64]) -> Option<Vec<i64>> {
    if num.is_empty() {
        return Some(Vec::new());
    }
    // q(z)(1 - z) = num  =>  q_i = sum_{k <= i} num_k
    let mut q = Vec::with_capacity(num.len());
    let mut acc = 0;
    for &a in &num[..num.len() - 1] {
        acc += a;
        q.push(acc);
    }
    (acc + num[num.len() - 1] == 0).then(|| {
        let mut q = q;
        trim(&mut q);
        q
    })
}

fn mul_zpoly(a: &[i64], b: &[i64]) -> Vec<i64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn add_shifted(acc: &mut Vec<i64>, p: &[i64], shift: usize, sign: i64) {
    if acc.len() < p.len() + shift {
        acc.resize(p.len() + shift, 0);
    }
    for (i, &a) in p.iter().enumerate() {
        acc[i + shift] += sign * a;
    }
}

fn minimal_monomials(gens: &[Monomial]) -> Vec<Monomial> {
    let mut g: Vec<Monomial> = gens.to_vec();
    g.sort_by_key(|m| (m.degree(), *m));
    g.dedup();
    let mut out: Vec<Monomial> = Vec::new();
    for m in g {
        if !out.iter().any(|o| o.divides(&m)) {
            out.push(m);
        }
    }
    out
}

/// Numerator `K(z)` of `H_{Q/J}(z) = K(z) / (1 - z)^n` for the monomial ideal
/// `J` generated by `gens`.
pub fn hilbert_numerator_of_monomials(gens: &[Monomial]) -> Vec<i64> {
    let mut g = minimal_monomials(gens);
    if g.is_empty() {
        return vec![1];
    }
    let coprime = (0..g.len()).all(|i| (i + 1..g.len()).all(|j| g[i].is_coprime(&g[j])));
    if coprime {
        let mut acc = vec![1];
        for m in &g {
            let mut f = vec![0; m.degree() as usize + 1];
            f[0] = 1;
            f[m.degree() as usize] -= 1;
            acc = mul_zpoly(&acc, &f);
        }
        trim(&mut acc);
        return acc;
    }
    let pivot = g.pop().unwrap();
    let colon: Vec<Monomial> = g.iter().map(|m| m.gcd(&pivot).quotient_of(m)).collect();
    let mut out = hilbert_numerator_of_monomials(&g);
    add_shifted(&mut out, &hilbert_numerator_of_monomials(&colon), pivot.degree() as usize, -1);
    trim(&mut out);
    out
}

/// Krull dimension of `Q/J` for a monomial ideal `J`: the largest set of
/// variables containing the support of no generator. `None` when `J = Q`.
pub(crate) fn monomial_dimension(nvars: usize, gens: &[Monomial]) -> Option<usize> {
    let supports: Vec<u32> = gens.iter().map(Monomial::support).collect();
    if supports.contains(&0) {
        return None;
    }
    (0u32..1 << nvars)
        .filter(|s| supports.iter().all(|g| g & !s != 0))
        .map(|s| s.count_ones() as usize)
        .max()
}

/// Hilbert data of `Q/I`.
pub fn quotient_hilbert(ideal: &IdealBasis) -> HilbertData {
    let n = ideal.ring().nvars();
    let leads = ideal.lead_monomials();
    match monomial_dimension(n, &leads) {
        None => HilbertData { numerator: Vec::new(), dim: 0, length: Some(0) },
        Some(dim) => HilbertData::from_numerator(n, hilbert_numerator_of_monomials(&leads), dim),
    }
}

/// Hilbert data of `coker(pres)` over `Q`, or over `A` when a presentation of
/// the complete intersection is supplied. Row twists must be nonnegative.
pub fn hilbert_series(pres: &GradedMatrix, ci: Option<&CIPresentation>) -> Result<HilbertData> {
    if !pres.is_homogeneous() {
        return Err(Error::NotHomogeneous("presentation matrix".into()));
    }
    if pres.row_twists().iter().any(|&t| t < 0) {
        return Err(Error::Precondition("row twists must be nonnegative".into()));
    }
    let ring = pres.ring();
    let n = ring.nvars();
    let order = MonomialOrder::degrevlex_twisted(pres.row_twists().to_vec());
    let cols: Vec<FreeModuleElement> = (0..pres.ncols()).map(|j| pres.column(j)).collect();
    let gb = groebner_basis(ring, &cols, &order, ci.map(|c| c.ideal()))?;
    let mut per_comp: Vec<Vec<Monomial>> = vec![Vec::new(); pres.nrows()];
    for (c, m) in gb.lead_terms() {
        per_comp[c].push(m);
    }
    let mut num = Vec::new();
    let mut dim = None;
    for (c, leads) in per_comp.iter().enumerate() {
        if let Some(d) = monomial_dimension(n, leads) {
            dim = dim.max(Some(d));
            let k = hilbert_numerator_of_monomials(leads);
            add_shifted(&mut num, &k, pres.row_twists()[c] as usize, 1);
        }
    }
    trim(&mut num);
    match dim {
        None => Ok(HilbertData { numerator: Vec::new(), dim: 0, length: Some(0) }),
        Some(d) => Ok(HilbertData::from_numerator(n, num, d)),
    }
}

/// `prod_i (1 + z + ... + z^{s_i - 1})`.
pub fn product_formula(degrees: &[u32]) -> Vec<i64> {
    degrees.iter().fold(vec![1], |acc, &s| mul_zpoly(&acc, &vec![1; s as usize]))
}

pub(crate) struct RegularityCheck {
    pub regular: bool,
    pub found: HilbertData,
    pub expected: Vec<i64>,
}

pub(crate) fn check_regular_sequence(ring: &Ring, f: &[Poly]) -> Result<RegularityCheck> {
    for p in f {
        if !p.ring().same(ring) {
            return Err(Error::RingMismatch);
        }
        if !p.is_homogeneous() || p.is_constant() {
            return Err(Error::NotHomogeneous(format!("{p} must be a nonconstant form")));
        }
    }
    let ideal = IdealBasis::new(ring, f)?;
    let found = quotient_hilbert(&ideal);
    let degrees: Vec<u32> = f.iter().map(|p| p.degree().unwrap()).collect();
    let expected = product_formula(&degrees);
    let regular = ring.nvars() >= f.len()
        && found.dim == ring.nvars() - f.len()
        && found.numerator == expected;
    Ok(RegularityCheck { regular, found, expected })
}

/// Whether homogeneous `f` is a regular sequence, decided by comparing the
/// Hilbert series of `Q/(f)` with the product formula.
pub fn is_regular_sequence(ring: &Ring, f: &[Poly]) -> Result<bool> {
    Ok(check_regular_sequence(ring, f)?.regular)
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

    fn quotient(r: &Ring, s: &[&str]) -> HilbertData {
        quotient_hilbert(&IdealBasis::new(r, &polys(r, s)).unwrap())
    }

    #[test]
    fn worked_quotients() {
        let r = ring(&["x", "y"]);
        let h = quotient(&r, &["x^3", "y^2"]);
        assert_eq!(h.numerator, [1, 2, 2, 1]);
        assert_eq!((h.dim, h.length), (0, Some(6)));
        assert_eq!(quotient(&r, &["x^2", "y^2"]).numerator, [1, 2, 1]);
        let free = quotient(&r, &[]);
        assert_eq!((free.numerator.as_slice(), free.dim), (&[1][..], 2));
        assert_eq!(h.to_string(), "1+2z+2z^2+z^3");
    }

    #[test]
    fn regular_sequences() {
        let r = ring(&["x", "y"]);
        assert!(is_regular_sequence(&r, &polys(&r, &["x^2", "y^2"])).unwrap());
        assert!(!is_regular_sequence(&r, &polys(&r, &["x^2", "x*y"])).unwrap());
        assert!(is_regular_sequence(&r, &polys(&r, &["x^2+y^2", "x*y"])).unwrap());
        assert!(is_regular_sequence(&r, &polys(&r, &["x^2+y"])).is_err());
    }

    #[test]
    fn dimension_agrees_with_pole_order() {
        let r = ring(&["x", "y", "z"]);
        for gens in [vec!["x^2", "x*y"], vec!["x*y*z"], vec!["x^2", "y^3", "x*z"], vec!["x*y", "y*z", "x*z"]] {
            let ideal = IdealBasis::new(&r, &polys(&r, &gens)).unwrap();
            let leads = ideal.lead_monomials();
            let mut num = hilbert_numerator_of_monomials(&leads);
            let mut pole = 3;
            while let Some(q) = divide_one_minus_z(&num) {
                if q.is_empty() {
                    break;
                }
                num = q;
                pole -= 1;
            }
            assert_eq!(Some(pole), monomial_dimension(3, &leads), "{gens:?}");
        }
    }

    #[test]
    fn hilbert_function_counts() {
        let r = ring(&["x", "y"]);
        let h = quotient(&r, &["x^2", "x*y"]);
        // 1, x, y, y^2, y^3, ...
        assert_eq!(h.coefficients(5), [1, 2, 1, 1, 1]);
        assert_eq!(h.dim, 1);
    }

    #[test]
    fn module_series() {
        let r = ring(&["x", "y"]);
        let ci = CIPresentation::new(&r, polys(&r, &["x^2", "y^2"])).unwrap();
        let m = GradedMatrix::from_strings(&r, &[vec!["x", "y"]], None).unwrap();
        let h = hilbert_series(&m, Some(&ci)).unwrap();
        assert_eq!((h.numerator.as_slice(), h.dim), (&[1][..], 0));
        let a = GradedMatrix::zero(&r, vec![0], vec![]);
        assert_eq!(hilbert_series(&a, Some(&ci)).unwrap().numerator, [1, 2, 1]);
    }
}
