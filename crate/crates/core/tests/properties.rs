use cires_core::ci::{operators_change_basis, operators_for_relations, resolution_operators, section_construction, ExtAction};
use cires_core::groebner::{groebner_basis, normal_form, product_formula, syzygies, FreeModuleElement, IdealBasis, MonomialOrder};
use cires_core::io::{InputSpec, ModuleSpec};
use cires_core::mf::{mf_from_projdim1, mf_periodic_resolution, mf_validate};
use cires_core::polyring::{Monomial, OrdValue, Poly, Ring, DEFAULT_CHARACTERISTIC};
use cires_core::resolution::{minimal_resolution, ord_matrix, CIPresentation, GradedMatrix};
use cires_core::verify::verify_ord_descent;
use proptest::prelude::*;

const P: u32 = DEFAULT_CHARACTERISTIC;

fn ring(n: usize) -> Ring {
    let names: Vec<String> = ["x", "y", "z", "w"][..n].iter().map(|s| s.to_string()).collect();
    Ring::new(P, &names).unwrap()
}

fn ci(r: &Ring, f: &[&str]) -> CIPresentation {
    CIPresentation::new(r, f.iter().map(|s| r.parse(s).unwrap()).collect()).unwrap()
}

/// Coefficients for every monomial of a degree; about half are zero.
fn arb_coeffs(count: usize) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(prop_oneof![Just(0u32), 1..P], count)
}

fn form(r: &Ring, d: u32, coeffs: &[u32]) -> Poly {
    r.from_terms(Monomial::all_of_degree(r.nvars(), d).into_iter().zip(coeffs.iter().copied()))
}

fn n_monomials(n: usize, d: u32) -> usize {
    Monomial::all_of_degree(n, d).len()
}

/// Three forms in three variables of degrees 2, 2, 3.
fn arb_forms() -> impl Strategy<Value = Vec<Vec<u32>>> {
    (arb_coeffs(n_monomials(3, 2)), arb_coeffs(n_monomials(3, 2)), arb_coeffs(n_monomials(3, 3)))
        .prop_map(|(a, b, c)| vec![a, b, c])
}

fn forms(r: &Ring, c: &[Vec<u32>]) -> Vec<Poly> {
    vec![form(r, 2, &c[0]), form(r, 2, &c[1]), form(r, 3, &c[2])]
}

/// A `rows x cols` matrix of linear forms in `n` variables.
fn arb_linear_matrix(n: usize, rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<Vec<u32>>>> {
    prop::collection::vec(prop::collection::vec(arb_coeffs(n), cols), rows)
}

fn linear_matrix(r: &Ring, c: &[Vec<Vec<u32>>]) -> Vec<Vec<Poly>> {
    c.iter().map(|row| row.iter().map(|e| form(r, 1, e)).collect()).collect()
}

fn sum_mul(a: &[Poly], b: &[Poly], r: &Ring) -> Poly {
    a.iter().zip(b).fold(r.zero(), |acc, (x, y)| acc.add(&x.mul(y)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn groebner_bases_pass_buchberger_and_division_is_exact(c in arb_forms(), p in arb_coeffs(n_monomials(3, 4))) {
        let r = ring(3);
        let gens = forms(&r, &c);
        let ideal = IdealBasis::new(&r, &gens).unwrap();
        let vecs: Vec<FreeModuleElement> = gens.iter().map(|g| FreeModuleElement::new(&r, vec![g.clone()]).unwrap()).collect();
        let gb = groebner_basis(&r, &vecs, &MonomialOrder::degrevlex(1), None).unwrap();
        prop_assert!(gb.is_groebner());

        let p = form(&r, 4, &p);
        let (cof, rem) = ideal.divide(&p);
        prop_assert_eq!(sum_mul(&cof, ideal.elements(), &r).add(&rem), p.clone());
        prop_assert!(rem.terms().iter().all(|(m, _)| ideal.is_standard(m)));

        let v = FreeModuleElement::new(&r, vec![p.clone()]).unwrap();
        let d = normal_form(&v, &gb).unwrap();
        let combo = gb.elements().iter().zip(&d.cofactors).fold(d.remainder.clone(), |acc, (g, q)| acc.add(&g.mul_poly(q)));
        prop_assert_eq!(combo, v);

        let q = sum_mul(&gens, &[p.clone(), r.parse("x").unwrap().pow(2), r.zero()], &r);
        let back = ideal.generator_cofactors(&q).unwrap();
        prop_assert_eq!(sum_mul(&back, &gens, &r), q);
    }

    #[test]
    fn syzygies_annihilate(c in arb_linear_matrix(3, 1, 3)) {
        let r = ring(3);
        let m = GradedMatrix::with_row_twists(&r, linear_matrix(&r, &c), None);
        prop_assume!(m.is_ok());
        let m = m.unwrap();
        let syz = syzygies(&m, None).unwrap();
        prop_assert!(m.mul(&syz).unwrap().is_zero());
        let a = ci(&r, &["x^2", "y^2", "z^2"]);
        let syz = syzygies(&m.reduce(a.ideal()), Some(a.ideal())).unwrap();
        prop_assert!(m.mul(&syz).unwrap().is_zero_mod(a.ideal()));
    }

    #[test]
    fn regular_sequences_satisfy_the_product_formula(c in arb_forms()) {
        let r = ring(3);
        let f = forms(&r, &c);
        if let Ok(a) = CIPresentation::new(&r, f) {
            prop_assert_eq!(&a.hilbert().numerator, &product_formula(a.degrees()));
            if a.codim() > 0 {
                let b = a.prefix(a.codim() - 1).unwrap();
                let s = *a.degrees().last().unwrap() as usize;
                let mut expected = vec![0i64; b.hilbert().numerator.len() + s - 1];
                for (i, x) in b.hilbert().numerator.iter().enumerate() {
                    for e in &mut expected[i..i + s] {
                        *e += x;
                    }
                }
                prop_assert_eq!(&a.hilbert().numerator, &expected);
            }
        }
    }

    #[test]
    fn resolutions_are_minimal_complexes(c in arb_linear_matrix(3, 2, 3)) {
        let r = ring(3);
        let a = ci(&r, &["x^2", "y^2", "z^2"]);
        let m = GradedMatrix::with_row_twists(&r, linear_matrix(&r, &c), None).unwrap();
        let res = minimal_resolution(&m, &a, 4).unwrap();
        for w in res.differentials().windows(2) {
            prop_assert!(w[0].mul(&w[1]).unwrap().is_zero_mod(a.ideal()));
        }
        for d in res.differentials() {
            prop_assert!(d.is_zero() || ord_matrix(d, &a) >= OrdValue::Finite(1));
        }
    }

    #[test]
    fn ord_is_invariant_under_change_of_basis(
        c in arb_linear_matrix(2, 2, 2),
        u in prop::collection::vec(arb_coeffs(3), 4),
        v in prop::collection::vec(arb_coeffs(3), 4),
    ) {
        let r = ring(2);
        let a = ci(&r, &["x^3", "y^2"]);
        let m = GradedMatrix::new(&r, linear_matrix(&r, &c), vec![0, 0], vec![1, 1]).unwrap();
        let m = m.map_entries(|p| p.mul(&r.parse("x").unwrap()).add(&p.mul(p)));
        let unipotent = |coef: &[Vec<u32>]| {
            let entries = (0..2)
                .map(|i| {
                    (0..2)
                        .map(|j| {
                            let off = form(&r, 1, &coef[2 * i + j][..2]).add(&form(&r, 2, &coef[2 * i + j]));
                            if i == j { r.one().add(&off) } else { off }
                        })
                        .collect()
                })
                .collect();
            GradedMatrix::new(&r, entries, vec![0, 0], vec![0, 0]).unwrap()
        };
        let (u, v) = (unipotent(&u), unipotent(&v));
        let moved = u.mul(&m).unwrap().mul(&v).unwrap();
        prop_assert_eq!(ord_matrix(&moved, &a), ord_matrix(&m, &a));
    }

    #[test]
    fn low_degree_elements_keep_their_order(b in arb_coeffs(n_monomials(3, 1))) {
        let r = ring(3);
        let a = ci(&r, &["x^3", "y^2+z^2"]);
        let b = form(&r, 1, &b);
        prop_assume!(!b.is_zero());
        prop_assert!(verify_ord_descent(&a, &b).unwrap());
    }

    #[test]
    fn operators_satisfy_identity_and_are_chain_maps(c in arb_linear_matrix(3, 1, 2)) {
        let r = ring(3);
        let a = ci(&r, &["x^2", "y^2", "z^2"]);
        let m = GradedMatrix::with_row_twists(&r, linear_matrix(&r, &c), None).unwrap();
        let res = minimal_resolution(&m, &a, 5).unwrap();
        let ops = resolution_operators(&res).unwrap();
        prop_assert!(ops.identity_holds().unwrap());
        prop_assert!(ops.is_chain_map().unwrap());
        prop_assert!(ExtAction::new(&ops).commutators_vanish());
    }

    #[test]
    fn change_of_basis_matches_direct_operators(entries in prop::collection::vec(0..P, 4)) {
        let r = ring(2);
        let a = ci(&r, &["x^2", "y^2"]);
        let fp = r.field();
        prop_assume!(fp.sub(fp.mul(entries[0], entries[3]), fp.mul(entries[1], entries[2])) != 0);
        let m = GradedMatrix::from_strings(&r, &[vec!["x", "y"]], None).unwrap();
        let res = minimal_resolution(&m, &a, 6).unwrap();
        let ops = resolution_operators(&res).unwrap();
        let alpha: Vec<Vec<Poly>> = (0..2).map(|i| (0..2).map(|j| r.term(Monomial::one(), entries[2 * i + j])).collect()).collect();
        let changed = operators_change_basis(&ops, &alpha).unwrap();
        let direct = operators_for_relations(ops.lifted_all(), &a, changed.relations()).unwrap();
        let (e1, e2) = (ExtAction::new(&changed), ExtAction::new(&direct));
        for j in 0..2 {
            for n in 0..=4 {
                prop_assert_eq!(e1.map(j, n), e2.map(j, n));
            }
        }
    }

    #[test]
    fn kernel_complex_ranks(xi in (1..P, 1..P)) {
        let r = ring(2);
        let a = ci(&r, &["x^2", "y^2"]);
        let m = GradedMatrix::from_strings(&r, &[vec!["x", "y"]], None).unwrap();
        let res = minimal_resolution(&m, &a, 8).unwrap();
        let ops = resolution_operators(&res).unwrap();
        let ext = ExtAction::new(&ops);
        let xi = vec![xi.0, xi.1];
        prop_assume!((0..=6).all(|n| ext.is_injective(&xi, n)));
        let s = section_construction(&res, &ops, &xi, (0, 6)).unwrap();
        let b = res.betti();
        for n in s.n0..=s.hi {
            prop_assert_eq!(b[n + 2], b[n] + s.kernel_rank(n));
        }
        prop_assert!(s.delta_is_complex && s.delta_is_minimal && s.block_identity);
    }

    #[test]
    fn completed_factorizations_are_periodic(c in arb_linear_matrix(2, 2, 2)) {
        let r = ring(2);
        let phi = GradedMatrix::with_row_twists(&r, linear_matrix(&r, &c), None);
        prop_assume!(phi.is_ok());
        let phi = phi.unwrap();
        prop_assume!(phi.ncols() == 2 && phi.col_twists() == [1, 1]);
        let rows = phi.rows_vec();
        let f = rows[0][0].mul(&rows[1][1]).sub(&rows[0][1].mul(&rows[1][0]));
        prop_assume!(!f.is_zero());
        let mf = mf_from_projdim1(&phi, &f).unwrap();
        prop_assert!(mf_validate(mf.phi(), mf.psi(), &f).unwrap());
        let d = f.degree().unwrap();
        let ord_sum = mf.phi().ord().finite().unwrap() + mf.psi().ord().finite().unwrap();
        prop_assert!(ord_sum <= d);
        let a = CIPresentation::new(&r, vec![f.clone()]).unwrap();
        let res = mf_periodic_resolution(&mf, &a, 5).unwrap();
        for w in res.differentials().windows(2) {
            prop_assert!(w[0].mul(&w[1]).unwrap().is_zero_mod(a.ideal()));
        }
        prop_assert_eq!(res.betti(), &[2; 6][..]);
    }

    #[test]
    fn canonical_serialization_is_idempotent(c in arb_forms(), m in arb_linear_matrix(3, 1, 2)) {
        let r = ring(3);
        let f = forms(&r, &c);
        let spaced = |p: &Poly| p.to_string().replace('+', " + ");
        let spec = InputSpec {
            characteristic: P,
            variables: r.var_names().to_vec(),
            ci: f.iter().map(spaced).collect(),
            module: Some(ModuleSpec { matrix: linear_matrix(&r, &m).iter().map(|row| row.iter().map(spaced).collect()).collect(), row_twists: None }),
            mf: None,
            ulrich: None,
            params: None,
        };
        let canon = spec.canonical().unwrap();
        prop_assert_eq!(&canon.canonical().unwrap(), &canon);
        let reparsed = InputSpec::parse(&canon.canonical_json().unwrap()).unwrap();
        prop_assert_eq!(&reparsed, &canon);
        prop_assert_eq!(spec.content_hash().unwrap(), reparsed.content_hash().unwrap());
    }
}
