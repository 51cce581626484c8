//! Matrix factorizations of a hypersurface and their 2-periodic resolutions.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::ci::adjugate;
use crate::error::{Error, Result};
use crate::linalg::FpMatrix;
use crate::polyring::{Monomial, OrdValue, Poly, Ring};
use crate::resolution::{minimalize, CIPresentation, GradedMatrix, MinimalResolution};

/// A pair `phi : G -> H`, `psi : H(-d) -> G` with `phi psi = f I` and
/// `psi phi = f I`, where `d = deg f`.
#[derive(Clone, Debug)]
pub struct MatrixFactorization {
    phi: GradedMatrix,
    psi: GradedMatrix,
    f: Poly,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MfJson {
    pub f: String,
    pub phi: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi: Option<Vec<Vec<String>>>,
}

impl MatrixFactorization {
    /// Checks both product identities. The twists of `psi` are recomputed
    /// from those of `phi`.
    pub fn new(phi: GradedMatrix, psi: GradedMatrix, f: Poly) -> Result<Self> {
        if !mf_validate(&phi, &psi, &f)? {
            return Err(Error::Precondition("phi psi and psi phi must both equal f I".into()));
        }
        let d = f.degree().ok_or(Error::ZeroPolynomial)? as i64;
        let psi = psi.with_twists(phi.col_twists().to_vec(), phi.row_twists().iter().map(|t| t + d).collect());
        if !phi.is_homogeneous() || !psi.is_homogeneous() {
            return Err(Error::NotHomogeneous("matrix factorization must be graded".into()));
        }
        Ok(MatrixFactorization { phi, psi, f })
    }

    pub fn phi(&self) -> &GradedMatrix {
        &self.phi
    }

    pub fn psi(&self) -> &GradedMatrix {
        &self.psi
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    pub fn size(&self) -> usize {
        self.phi.nrows()
    }

    pub fn to_json(&self) -> MfJson {
        MfJson { f: self.f.to_string(), phi: self.phi.to_strings(), psi: Some(self.psi.to_strings()) }
    }

    /// Parses `{"f", "phi", "psi"?}`; a missing `psi` is solved for.
    pub fn from_json(ring: &Ring, j: &MfJson) -> Result<Self> {
        let f = ring.parse(&j.f)?;
        let phi = GradedMatrix::from_strings(ring, &j.phi, None)?;
        match &j.psi {
            Some(p) => {
                let entries = p
                    .iter()
                    .map(|r| r.iter().map(|s| ring.parse(s)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                let n = phi.nrows();
                let psi = GradedMatrix::new(ring, entries, vec![0; n], vec![0; n])?;
                Self::new(phi, psi, f)
            }
            None => mf_from_projdim1(&phi, &f),
        }
    }
}

/// Whether `phi psi = psi phi = f I` exactly. Both matrices must be square
/// of the same size.
pub fn mf_validate(phi: &GradedMatrix, psi: &GradedMatrix, f: &Poly) -> Result<bool> {
    let n = phi.nrows();
    if phi.ncols() != n || psi.nrows() != n || psi.ncols() != n {
        return Err(Error::Shape(format!(
            "phi is {}x{}, psi is {}x{}",
            phi.nrows(),
            phi.ncols(),
            psi.nrows(),
            psi.ncols()
        )));
    }
    let is_scalar = |a: &GradedMatrix, b: &GradedMatrix| {
        (0..n).all(|i| {
            (0..n).all(|k| {
                let mut acc = f.ring().zero();
                for j in 0..n {
                    acc = acc.add(&a.entry(i, j).mul(b.entry(j, k)));
                }
                if i == k { acc == *f } else { acc.is_zero() }
            })
        })
    };
    Ok(is_scalar(phi, psi) && is_scalar(psi, phi))
}

/// The complex `... -> G -phi-> H -psi-> G -phi-> H` reduced into `A`,
/// with `length` differentials, as a minimal resolution of `coker phi`.
pub fn mf_periodic_resolution(mf: &MatrixFactorization, ci: &CIPresentation, length: usize) -> Result<MinimalResolution> {
    if length == 0 {
        return Err(Error::OutOfRange("length must be at least 1".into()));
    }
    if !ci.ideal().contains(&mf.f) {
        return Err(Error::Precondition(format!("{} is not in the defining ideal", mf.f)));
    }
    let phi = mf.phi.reduce(ci.ideal());
    let psi = mf.psi.reduce(ci.ideal());
    for (name, m) in [("phi", &phi), ("psi", &psi)] {
        if m.entries().any(|p| !p.is_zero() && p.is_constant()) {
            return Err(Error::NotMinimal(format!("{name} has a unit entry; coker phi has a free summand")));
        }
    }
    let d = mf.f.degree().unwrap_or(0) as i64;
    let shift = |t: &[i64], k: i64| t.iter().map(|x| x + k).collect::<Vec<_>>();
    let diffs = (0..length)
        .map(|i| {
            let k = (i / 2) as i64 * d;
            if i % 2 == 0 {
                phi.clone().with_twists(shift(phi.row_twists(), k), shift(phi.col_twists(), k))
            } else {
                psi.clone().with_twists(shift(psi.row_twists(), k), shift(psi.col_twists(), k))
            }
        })
        .collect();
    MinimalResolution::from_differentials(ci, diffs)
}

/// Completes a presentation of projective dimension one over `Q`, annihilated
/// by `f`, to a matrix factorization. `psi` is found column by column from
/// the graded linear systems `phi v = f e_k`.
pub fn mf_from_projdim1(pres: &GradedMatrix, f: &Poly) -> Result<MatrixFactorization> {
    let phi = minimalize(std::slice::from_ref(pres), None)?.remove(0);
    if phi.nrows() != phi.ncols() {
        return Err(Error::NoSolution(format!("minimal presentation is {}x{}, not square", phi.nrows(), phi.ncols())));
    }
    let ring = phi.ring().clone();
    let fp = ring.field();
    let n = ring.nvars();
    let d = f.degree().ok_or(Error::ZeroPolynomial)? as i64;
    let size = phi.nrows();
    let mut psi = vec![vec![ring.zero(); size]; size];
    for k in 0..size {
        let target = phi.row_twists()[k] + d;
        let mut unknowns: Vec<(usize, Monomial)> = Vec::new();
        for j in 0..size {
            let e = target - phi.col_twists()[j];
            if e >= 0 {
                unknowns.extend(Monomial::all_of_degree(n, e as u32).into_iter().map(|m| (j, m)));
            }
        }
        let mut eq_index: HashMap<(usize, Monomial), usize> = HashMap::new();
        for i in 0..size {
            let e = target - phi.row_twists()[i];
            if e >= 0 {
                for m in Monomial::all_of_degree(n, e as u32) {
                    let len = eq_index.len();
                    eq_index.insert((i, m), len);
                }
            }
        }
        let mut a = FpMatrix::zeros(eq_index.len(), unknowns.len());
        for (col, (j, u)) in unknowns.iter().enumerate() {
            for i in 0..size {
                for &(m, c) in phi.entry(i, *j).terms() {
                    let key = (i, m.mul(u));
                    let row = *eq_index
                        .get(&key)
                        .ok_or_else(|| Error::NotHomogeneous("presentation is not graded".into()))?;
                    a.set(row, col, fp.add(a.get(row, col), c));
                }
            }
        }
        let mut b = vec![0; eq_index.len()];
        for &(m, c) in f.terms() {
            let row = *eq_index.get(&(k, m)).ok_or_else(|| Error::NotHomogeneous(format!("{f} is not homogeneous")))?;
            b[row] = c;
        }
        let x = a
            .solve(&b, fp)
            .ok_or_else(|| Error::NoSolution(format!("f e_{k} is not in the image of phi")))?;
        for (col, (j, u)) in unknowns.iter().enumerate() {
            if x[col] != 0 {
                psi[*j][k] = psi[*j][k].add(&ring.term(*u, x[col]));
            }
        }
    }
    let psi = GradedMatrix::new(&ring, psi, vec![0; size], vec![0; size])?;
    MatrixFactorization::new(phi, psi, f.clone()).map_err(|e| match e {
        Error::Precondition(_) => Error::NoSolution("psi phi is not f I".into()),
        e => e,
    })
}

/// Constructive families with `ord phi = deg f_1 - 1` and `ord psi = 1`.
#[derive(Clone, Debug)]
pub enum UlrichKind {
    /// `f_1` is the product of the given linear forms, up to a unit.
    LinearProduct(Vec<Poly>),
    /// `f_1 = det L` up to a unit, `L` square with linear entries.
    Determinantal(Vec<Vec<Poly>>),
}

/// Matrix factorization of `f_1` from the given family: `phi = l_1 ... l_{d-1}`,
/// `psi = l_d`, or `phi = adj L`, `psi = L`.
pub fn ulrich_example(ci: &CIPresentation, kind: &UlrichKind) -> Result<MatrixFactorization> {
    let f1 = ci
        .relations()
        .first()
        .ok_or_else(|| Error::Precondition("no relations".into()))?
        .clone();
    let ring = ci.ring().clone();
    let fp = ring.field();
    let linear = |p: &Poly| p.is_homogeneous() && p.degree() == Some(1);
    // unit u with target = u * f1
    let unit_ratio = |target: &Poly| -> Result<u32> {
        let (m, c) = f1.leading_term().ok_or(Error::ZeroPolynomial)?;
        let t = target.terms().iter().find(|(tm, _)| *tm == m).map(|&(_, tc)| tc).unwrap_or(0);
        let u = fp.mul(t, fp.inv(c));
        if u == 0 || f1.scale(u) != *target {
            return Err(Error::Precondition(format!("{target} is not a unit multiple of f_1 = {f1}")));
        }
        Ok(u)
    };
    let (phi, psi) = match kind {
        UlrichKind::LinearProduct(ls) => {
            if ls.len() < 2 || !ls.iter().all(linear) {
                return Err(Error::Precondition("need at least two linear forms".into()));
            }
            let (last, rest) = ls.split_last().unwrap();
            let head = rest.iter().fold(ring.one(), |acc, l| acc.mul(l));
            let u = unit_ratio(&head.mul(last))?;
            let psi = last.scale(fp.inv(u));
            let d = rest.len() as i64;
            (
                GradedMatrix::homogeneous(&ring, vec![vec![head]], vec![0], vec![d])?,
                GradedMatrix::homogeneous(&ring, vec![vec![psi]], vec![d], vec![d + 1])?,
            )
        }
        UlrichKind::Determinantal(l) => {
            let n = l.len();
            if n == 0 || l.iter().any(|r| r.len() != n) {
                return Err(Error::Shape("L must be square".into()));
            }
            if !l.iter().flatten().all(|p| p.is_zero() || linear(p)) {
                return Err(Error::Precondition("L must have linear entries".into()));
            }
            let det = crate::ci::poly_det(l, &ring);
            if det.is_zero() {
                return Err(Error::Precondition("det L is zero".into()));
            }
            let u_inv = fp.inv(unit_ratio(&det)?);
            let adj: Vec<Vec<Poly>> = adjugate(l, &ring)
                .into_iter()
                .map(|r| r.into_iter().map(|p| p.scale(u_inv)).collect())
                .collect();
            let d = n as i64;
            (
                GradedMatrix::homogeneous(&ring, adj, vec![0; n], vec![d - 1; n])?,
                GradedMatrix::homogeneous(&ring, l.to_vec(), vec![d - 1; n], vec![d; n])?,
            )
        }
    };
    let mf = MatrixFactorization::new(phi, psi, f1)?;
    debug_assert_eq!(mf.phi.ord(), OrdValue::Finite(mf.f.degree().unwrap() - 1));
    Ok(mf)
}
