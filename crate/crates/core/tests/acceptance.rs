//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails. Every comparison is exact.

use std::collections::HashMap;
use std::path::PathBuf;
use std::time::Instant;

use cires_core::ci::{filter_regular_search, operators_change_basis, operators_for_relations, resolution_operators, section_construction, ExtAction, DEFAULT_ATTEMPTS};
use cires_core::groebner::{product_formula, IdealBasis};
use cires_core::io::{run, run_cached, Cache, Command, Format, InputSpec, Overrides, Settings};
use cires_core::linalg::FpMatrix;
use cires_core::mf::{mf_from_projdim1, mf_periodic_resolution};
use cires_core::polyring::{Monomial, OrdValue, Poly, Ring, DEFAULT_CHARACTERISTIC};
use cires_core::resolution::{complexity_estimate, minimal_resolution, minor_ideal_chain, CIPresentation, GradedMatrix, MinimalResolution};
use cires_core::verify::{verify_example_sharpness, verify_main_theorem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// Tolerance for every criterion: exact equality, no floating-point quantities.
const SEED: u64 = 20_240_601;
const TIME_LIMIT_SECS: u64 = 60;

const RANDOM_CIS: usize = 5;
const RESIDUE_LENGTH: usize = 10;
const SHARP_TOP_I: usize = 4;
const IDENTITY_DEGREE: usize = 8;
const BASIS_CHANGES: usize = 3;
const BASIS_EXT_DEGREE: usize = 6;
const SECTION_LENGTH: usize = 12;
const SWEEP_LENGTH: usize = 12;
const SWEEP_WINDOW: usize = 6;
const MIN_CORPUS: usize = 10;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond { Ok(()) } else { Err(msg()) }
}

fn ring(vars: &[&str]) -> Ring {
    Ring::new(DEFAULT_CHARACTERISTIC, vars).unwrap()
}

fn ci(r: &Ring, f: &[&str]) -> CIPresentation {
    CIPresentation::new(r, f.iter().map(|s| r.parse(s).unwrap()).collect()).unwrap()
}

fn corpus() -> Vec<(String, InputSpec)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus");
    let mut files: Vec<PathBuf> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    files.sort();
    files
        .into_iter()
        .map(|p| (p.file_stem().unwrap().to_string_lossy().into_owned(), InputSpec::from_file(&p).unwrap()))
        .collect()
}

/// `dim_k (Q/(f))_d` as `dim Q_d - rank span{m f_i}`.
fn hilbert_function_oracle(r: &Ring, f: &[Poly], d: u32) -> u64 {
    let fp = r.field();
    let basis = Monomial::all_of_degree(r.nvars(), d);
    let index: HashMap<Monomial, usize> = basis.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let mut rows = Vec::new();
    for p in f {
        let s = p.degree().unwrap();
        if s > d {
            continue;
        }
        for m in Monomial::all_of_degree(r.nvars(), d - s) {
            let mut v = vec![0; basis.len()];
            for &(t, c) in p.mul_term(&m, 1).terms() {
                v[index[&t]] = c;
            }
            rows.push(v);
        }
    }
    let rank = if rows.is_empty() { 0 } else { FpMatrix::from_rows(&rows, basis.len()).rank(fp) };
    (basis.len() - rank) as u64
}

fn random_form(r: &Ring, d: u32, rng: &mut ChaCha8Rng) -> Poly {
    let p = r.characteristic();
    r.from_terms(Monomial::all_of_degree(r.nvars(), d).into_iter().map(|m| (m, rng.random_range(0..p))))
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut lines = Vec::new();
    let mut cases: Vec<CIPresentation> = Vec::new();
    while cases.len() < RANDOM_CIS {
        let n = rng.random_range(2..=4usize);
        let c = rng.random_range(1..=n.min(3));
        let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        let r = Ring::new(DEFAULT_CHARACTERISTIC, &names).unwrap();
        let f: Vec<Poly> = (0..c).map(|_| random_form(&r, rng.random_range(2..=4), &mut rng)).collect();
        if let Ok(a) = CIPresentation::new(&r, f) {
            cases.push(a);
        }
    }
    let r = ring(&["x", "y"]);
    let worked = ci(&r, &["x^3", "y^2"]);
    ensure(worked.hilbert().numerator == [1, 2, 2, 1], || format!("(x^3, y^2): h = {:?}", worked.hilbert().numerator))?;
    cases.push(worked);
    for a in &cases {
        let h = &a.hilbert().numerator;
        let expected = product_formula(a.degrees());
        ensure(*h == expected, || format!("degrees {:?}: h = {h:?}, product {expected:?}", a.degrees()))?;
        let top = a.degrees().iter().map(|s| s - 1).sum::<u32>() + 2;
        let series = a.hilbert().coefficients(top as usize + 1);
        for d in 0..=top {
            let o = hilbert_function_oracle(a.ring(), a.relations(), d);
            ensure(series[d as usize] == o as i64, || {
                format!("degrees {:?}: H({d}) = {} but linear algebra gives {o}", a.degrees(), series[d as usize])
            })?;
        }
        lines.push(format!("n={} s={:?}", a.ring().nvars(), a.degrees()));
    }
    Ok(format!("{} cases: {}", cases.len(), lines.join("; ")))
}

/// `dim ker (d_i)` in internal degree `deg` over `k[x,y]/(x^2,y^2)`, with
/// multiplication truncated by hand.
fn kernel_dim_truncated(d: &GradedMatrix, deg: i64) -> usize {
    let fp = d.ring().field();
    let nv = d.ring().nvars();
    let std = |e: i64| -> Vec<Monomial> {
        if e < 0 {
            return Vec::new();
        }
        Monomial::all_of_degree(nv, e as u32).into_iter().filter(|m| (0..nv).all(|v| m.exponent(v) < 2)).collect()
    };
    let mut src = Vec::new();
    for (j, &t) in d.col_twists().iter().enumerate() {
        src.extend(std(deg - t).into_iter().map(|m| (j, m)));
    }
    let mut tgt = HashMap::new();
    for (i, &t) in d.row_twists().iter().enumerate() {
        for m in std(deg - t) {
            let k = tgt.len();
            tgt.insert((i, m), k);
        }
    }
    let mut a = FpMatrix::zeros(tgt.len(), src.len());
    for (col, (j, u)) in src.iter().enumerate() {
        for i in 0..d.nrows() {
            for &(m, c) in d.entry(i, *j).terms() {
                let prod = m.mul(u);
                if let Some(&row) = tgt.get(&(i, prod)) {
                    a.set(row, col, fp.add(a.get(row, col), c));
                }
            }
        }
    }
    src.len() - a.rank(fp)
}

fn criterion_2() -> Outcome {
    let r = ring(&["x", "y"]);
    let a = ci(&r, &["x^2", "y^2"]);
    let m = GradedMatrix::from_strings(&r, &[vec!["x", "y"]], None).unwrap();
    let res = minimal_resolution(&m, &a, RESIDUE_LENGTH).unwrap();
    for n in 0..=RESIDUE_LENGTH {
        let b = res.betti()[n];
        ensure(b == n + 1, || format!("beta_{n} = {b}, expected {}", n + 1))?;
    }
    for i in 1..RESIDUE_LENGTH {
        let d = res.differential(i);
        let low = kernel_dim_truncated(d, i as i64);
        let gens = kernel_dim_truncated(d, i as i64 + 1);
        ensure(low == 0 && gens == res.betti()[i + 1], || {
            format!("ker d_{i}: {low} in degree {i}, {gens} in degree {} vs beta_{} = {}", i + 1, i + 1, res.betti()[i + 1])
        })?;
    }
    for (i, o) in res.ord_profile().iter().enumerate() {
        ensure(*o == OrdValue::Finite(1), || format!("ord d_{} = {o}", i + 1))?;
    }
    let maximal = IdealBasis::new(&r, &[r.parse("x").unwrap(), r.parse("y").unwrap()]).unwrap();
    let chain = minor_ideal_chain(&res, 1).unwrap();
    for n in 1..=RESIDUE_LENGTH - 2 {
        ensure(*chain.ideal(n) == maximal, || format!("I^1_{n} is not (x, y)"))?;
        ensure(chain.ideal(n) == chain.ideal(n + 2), || format!("I^1_{n} differs from I^1_{}", n + 2))?;
    }
    Ok(format!("beta_n = n+1 and ord = 1 for n <= {RESIDUE_LENGTH}; I^1_n = (x,y) = I^1_(n+2) for n <= {}", RESIDUE_LENGTH - 2))
}

fn criterion_3() -> Outcome {
    let r = ring(&["x", "y"]);
    let a = ci(&r, &["x^3", "y^2"]);
    let phi = GradedMatrix::from_strings(&r, &[vec!["x^2"]], None).unwrap();
    let mf = mf_from_projdim1(&phi, &r.parse("x^3").unwrap()).unwrap();
    ensure(mf.psi().to_strings() == [["x"]], || format!("psi = {:?}", mf.psi().to_strings()))?;
    let length = 2 * SHARP_TOP_I + 2;
    let res = minimal_resolution(&phi.reduce(a.ideal()), &a, length).unwrap();
    let ords = res.ord_profile();
    for i in 0..=SHARP_TOP_I {
        ensure(ords[2 * i] == OrdValue::Finite(2), || format!("ord d_{} = {}", 2 * i + 1, ords[2 * i]))?;
        ensure(ords[2 * i + 1] == OrdValue::Finite(1), || format!("ord d_{} = {}", 2 * i + 2, ords[2 * i + 1]))?;
    }
    let periodic = mf_periodic_resolution(&mf, &a, length).unwrap();
    ensure(periodic.ord_profile() == ords, || "periodic and computed resolutions differ".into())?;
    let report = verify_example_sharpness(&a, &mf, length).unwrap();
    ensure(report.pass, || format!("sharpness report failed: {:?}", report.witness))?;
    Ok(format!("ord profile {:?}", ords.iter().map(|o| o.to_string()).collect::<Vec<_>>()))
}

fn criterion_4() -> Outcome {
    let files = corpus();
    ensure(files.len() >= MIN_CORPUS, || format!("corpus has {} modules", files.len()))?;
    let mut commuting_windows = 0;
    for (name, spec) in &files {
        let p = spec.build().map_err(|e| format!("{name}: {e}"))?;
        let res = minimal_resolution(p.module.as_ref().unwrap(), &p.ci, IDENTITY_DEGREE).map_err(|e| format!("{name}: {e}"))?;
        let ops = resolution_operators(&res).map_err(|e| format!("{name}: {e}"))?;
        for i in 2..=IDENTITY_DEGREE {
            let defect = ops.identity_defect(i).unwrap();
            ensure(defect.is_zero(), || format!("{name}: identity fails at degree {i}"))?;
        }
        let ext = ExtAction::new(&ops);
        if let Some((a, b, n)) = ext.commutator_witness() {
            return Err(format!("{name}: T_{a} T_{b} != T_{b} T_{a} on Ext^{n}"));
        }
        if ops.codim() > 1 {
            commuting_windows += 1;
        }
    }
    Ok(format!("{} modules, identity at degrees 2..={IDENTITY_DEGREE}; commutators vanish ({commuting_windows} with c > 1)", files.len()))
}

fn random_invertible(c: usize, rng: &mut ChaCha8Rng, r: &Ring) -> FpMatrix {
    let fp = r.field();
    loop {
        let rows: Vec<Vec<u32>> = (0..c).map(|_| (0..c).map(|_| rng.random_range(0..r.characteristic())).collect()).collect();
        let m = FpMatrix::from_rows(&rows, c);
        if m.rank(fp) == c {
            return m;
        }
    }
}

fn ext_agree(a: &ExtAction, b: &ExtAction, top: usize) -> Option<(usize, usize)> {
    for j in 0..a.codim() {
        for n in 0..=top {
            if a.map(j, n) != b.map(j, n) {
                return Some((j, n));
            }
        }
    }
    None
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 5);
    let length = BASIS_EXT_DEGREE + 2;
    type Case<'a> = (&'a [&'a str], &'a [&'a str], Vec<Vec<&'a str>>);
    let cases: [Case; 2] = [
        (&["x", "y"], &["x^2", "y^2"], vec![vec!["x", "y"]]),
        (&["x", "y", "z"], &["x^2", "y^2", "z^2"], vec![vec!["x", "y"]]),
    ];
    let mut checked = 0;
    for (vars, f, m) in &cases {
        let r = ring(vars);
        let a = ci(&r, f);
        let m = GradedMatrix::from_strings(&r, m, None).unwrap();
        let res = minimal_resolution(&m, &a, length).unwrap();
        let ops = resolution_operators(&res).unwrap();
        for _ in 0..BASIS_CHANGES {
            let alpha_k = random_invertible(a.codim(), &mut rng, &r);
            let alpha: Vec<Vec<Poly>> = (0..a.codim())
                .map(|i| (0..a.codim()).map(|j| r.term(Monomial::one(), alpha_k.get(i, j))).collect())
                .collect();
            let changed = operators_change_basis(&ops, &alpha).map_err(|e| e.to_string())?;
            let direct = operators_for_relations(ops.lifted_all(), &a, changed.relations()).map_err(|e| e.to_string())?;
            ensure(direct.identity_holds().unwrap() && changed.identity_holds().unwrap(), || "identity fails after basis change".into())?;
            if let Some((j, n)) = ext_agree(&ExtAction::new(&changed), &ExtAction::new(&direct), BASIS_EXT_DEGREE) {
                return Err(format!("c = {}: T'_{j} differs on Ext^{n}", a.codim()));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} random alpha, Ext degrees 0..={BASIS_EXT_DEGREE}"))
}

fn criterion_6() -> Outcome {
    let r = ring(&["x", "y"]);
    let a = ci(&r, &["x^2", "y^2"]);
    let m = GradedMatrix::from_strings(&r, &[vec!["x", "y"]], None).unwrap();
    let res: MinimalResolution = minimal_resolution(&m, &a, SECTION_LENGTH).unwrap();
    let ops = resolution_operators(&res).unwrap();
    let ext = ExtAction::new(&ops);
    let window = (0, SECTION_LENGTH - 2);
    let xi = filter_regular_search(&ext, window, DEFAULT_ATTEMPTS, SEED).map_err(|e| e.to_string())?;
    let s = section_construction(&res, &ops, &xi, window).map_err(|e| e.to_string())?;
    let b = res.betti();
    ensure(s.split_ok, || "F_{n+2} (x) k -> F_n (x) k not split onto".into())?;
    for n in s.n0..=s.hi {
        ensure(s.kernel_rank(n) == b[n + 2] - b[n], || format!("rank G_{n} = {}, expected {}", s.kernel_rank(n), b[n + 2] - b[n]))?;
    }
    ensure(s.block_identity, || "block form of d_{n+2} fails".into())?;
    ensure(s.delta_is_complex && s.delta_is_minimal, || "kernel complex is not a minimal complex".into())?;
    let cx_m = complexity_estimate(b).unwrap();
    ensure(s.l_complexity == Some(1) && cx_m == 2, || format!("cx L = {:?}, cx M = {cx_m}", s.l_complexity))?;
    Ok(format!("xi = {xi:?}, n0 = {}, rank G_n = 2 on [{}, {}], cx L = 1 = cx M - 1", s.n0, s.n0, s.hi))
}

fn criterion_7() -> Outcome {
    let files = corpus();
    ensure(files.len() >= MIN_CORPUS, || format!("corpus has {} modules", files.len()))?;
    for (name, spec) in &files {
        let p = spec.build().map_err(|e| format!("{name}: {e}"))?;
        let report = verify_main_theorem(&p.ci, p.module.as_ref().unwrap(), SWEEP_LENGTH, SWEEP_WINDOW).map_err(|e| format!("{name}: {e}"))?;
        ensure(report.pass, || format!("{name}: witness {}", report.witness.as_ref().unwrap()))?;
    }
    Ok(format!("{} modules at N = {SWEEP_LENGTH}, W = {SWEEP_WINDOW}", files.len()))
}

fn criterion_8() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let cache = Cache::new(dir.path());
    let mut runs = 0;
    for (name, spec) in corpus() {
        let mut jobs: Vec<(Command, Overrides)> = vec![
            (Command::Resolve, Overrides { format: Some(Format::Csv), ..Default::default() }),
            (Command::Resolve, Overrides { format: Some(Format::Json), ..Default::default() }),
            (Command::Operators, Overrides { length: Some(6), ..Default::default() }),
            (Command::Minors, Overrides { length: Some(8), r_max: Some(2), ..Default::default() }),
            (Command::Hilbert, Overrides { format: Some(Format::Json), ..Default::default() }),
            (Command::Verify, Overrides { experiment: Some("main".into()), ..Default::default() }),
            (Command::Verify, Overrides { experiment: Some("minors".into()), ..Default::default() }),
        ];
        if spec.ci.len() > 1 && name.starts_with("k_") {
            jobs.push((Command::Verify, Overrides { experiment: Some("section".into()), seed: Some(SEED), length: Some(10), ..Default::default() }));
        }
        if spec.ulrich.is_some() {
            jobs.push((Command::Mf, Overrides::default()));
            jobs.push((Command::Verify, Overrides { experiment: Some("sharpness".into()), ..Default::default() }));
        }
        for (cmd, o) in jobs {
            let s = Settings::resolve(&spec, &o);
            let first = run(cmd, &spec, &s).map_err(|e| format!("{name} {}: {e}", cmd.name()))?;
            let second = run(cmd, &spec, &s).unwrap();
            let cold = run_cached(cmd, &spec, &s, Some(&cache)).unwrap();
            let warm = run_cached(cmd, &spec, &s, Some(&cache)).unwrap();
            ensure(first == second && first == cold && first == warm, || format!("{name} {}: artifacts differ", cmd.name()))?;
            runs += 1;
        }
    }
    Ok(format!("{runs} command runs byte-identical across repeats and cache on/off"))
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 8] = [
        ("hilbert product formula", criterion_1),
        ("residue field over (x^2, y^2)", criterion_2),
        ("sharpness for (x^2, x) over (x^3, y^2)", criterion_3),
        ("operator identity and commutators", criterion_4),
        ("change of basis", criterion_5),
        ("kernel complex construction", criterion_6),
        ("ord bound sweep over the corpus", criterion_7),
        ("determinism", criterion_8),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = start.elapsed().as_secs_f64();
        let outcome = match outcome {
            Ok(m) if secs > TIME_LIMIT_SECS as f64 => Err(format!("took {secs:.1}s (limit {TIME_LIMIT_SECS}s): {m}")),
            o => o,
        };
        match outcome {
            Ok(detail) => println!("criterion {} PASS  {name} ({secs:.2}s): {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} FAIL  {name} ({secs:.2}s): {detail}", k + 1);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
