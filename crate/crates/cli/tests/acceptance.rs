//! Acceptance suite: nine criteria, each checked exactly over ℚ and reported
//! on one line. Runs without the libtest harness so the lines are always shown;
//! the process fails if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::{Duration, Instant};

use lr_core::adjoints::{lie_adjoint, verify_adjunction, Variant, VerifyOptions};
use lr_core::algebras::{flatten, AlgebraPresentation};
use lr_core::exactla::{Matrix, Scalar};
use lr_core::fixtures;
use lr_core::gauge::{
    atiyah, compare_gauge_routes, gauge_algebra, gauge_algebra_direct, gauge_algebra_product, gauge_module,
    gauge_universal, AModule, LieModuleStructure,
};
use lr_core::liecore::{functor_f_unit, AnchoredLieAlgebra, LieMorphism, LieRinehartAlgebra, LieStructure};
use lr_core::pbw::{
    bracket_identities, enveloping_suite, ring_suite, verify_cm_iso, SuiteOptions, UniversalEnveloping,
};
use lr_core::Report;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn passed(r: &Report, what: &str) -> Result<(), String> {
    ensure(r.all_passed(), || {
        format!(
            "{what}: {}",
            r.failures()
                .next()
                .map(|c| format!("{} {:?}", c.name, c.witness))
                .unwrap_or_default()
        )
    })
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:?}, limit {limit:?}"))
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn der_a3() -> AnchoredLieAlgebra {
    fixtures::derivation_algebra(3).anchored().clone()
}

// 1. Axiom suite on the fixtures and the injected faults.
fn axiom_suite() -> Outcome {
    let start = Instant::now();
    let fx = fixtures::axiom_fixtures();
    for (name, s) in &fx {
        passed(&s.validate(), name)?;
    }
    let faults = fixtures::injected_faults();
    ensure(faults.len() == 10, || format!("{} faults", faults.len()))?;
    for f in &faults {
        let r = f.structure.validate();
        let hit = r
            .failures()
            .find(|c| c.name == f.expected || c.name.ends_with(&format!(".{}", f.expected)));
        let c = hit.ok_or_else(|| format!("{}: `{}` did not fail", f.name, f.expected))?;
        ensure(c.witness.as_deref().is_some_and(|w| !w.is_empty()), || {
            format!("{}: no witness", f.name)
        })?;
    }
    within(start, Duration::from_secs(5))?;
    Ok(format!(
        "{} fixtures valid, {} faults caught with witnesses",
        fx.len(),
        faults.len()
    ))
}

/// Derivations as the nullspace of the Leibniz constraints on all `n×n`
/// matrices, written out directly from the structure constants.
fn leibniz_nullspace(a: &AlgebraPresentation) -> usize {
    let n = a.dim();
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            // δ(e_i e_j) - δ(e_i) e_j - e_i δ(e_j) = 0, coordinate k; unknown δ[r][c] at r*n+c
            for k in 0..n {
                let mut row = vec![Scalar::zero(); n * n];
                for (l, c) in a.basis_product(i, j).iter().enumerate() {
                    row[k * n + l] += c;
                }
                for r in 0..n {
                    row[r * n + i] -= a.structure_constant(r, j, k);
                    row[r * n + j] -= a.structure_constant(i, r, k);
                }
                rows.push(row);
            }
        }
    }
    Matrix::from_rows(&rows).nullspace().dim()
}

// 2. Derivation dimensions and the bracket on Der(A3).
fn derivations() -> Outcome {
    let start = Instant::now();
    for (a, expected) in [
        (fixtures::truncated(2), 1),
        (fixtures::truncated(3), 2),
        (AlgebraPresentation::split(2), 0),
    ] {
        let d = a.derivation_space().dim();
        let oracle = leibniz_nullspace(&a);
        ensure(d == expected && oracle == expected, || {
            format!("{}: dim {d}, oracle {oracle}, expected {expected}", a.name())
        })?;
    }
    let a3 = fixtures::truncated(3);
    let ders = a3.derivation_space();
    ensure(ders.basis_names() == ["x∂", "x²∂"], || {
        format!("basis {:?}", ders.basis_names())
    })?;
    let (d1, d2) = (ders.basis_derivation(0), ders.basis_derivation(1));
    let commutator = d1.mul(&d2).sub(&d2.mul(&d1));
    ensure(commutator == d2, || "[x∂, x²∂] ≠ x²∂ as matrices".into())?;
    ensure(
        ders.bracket_coordinates(0, 1).map_err(|e| e.to_string())? == vec![Scalar::zero(), Scalar::one()],
        || "bracket coordinates".into(),
    )?;
    let m2 = AlgebraPresentation::matrix_algebra(2);
    let ad_columns: Vec<Vec<Scalar>> = (0..4)
        .map(|i| {
            let e = m2.basis_vector(i);
            flatten(&m2.left_multiplication(&e).sub(&m2.right_multiplication(&e)))
        })
        .collect();
    let inner = Matrix::from_columns(16, &ad_columns).rank();
    let via_anchor = AnchoredLieAlgebra::commutator_anchor(&m2).anchor().rank();
    ensure(inner == 3 && via_anchor == 3, || {
        format!("inner rank {inner} / {via_anchor}")
    })?;
    ensure(m2.derivation_space().dim() == 3 && leibniz_nullspace(&m2) == 3, || {
        "Der(M2) dim".into()
    })?;
    within(start, Duration::from_secs(1))?;
    Ok("dims 1, 2, 0; [x∂, x²∂] = x²∂; inner rank 3 (nullspace oracle agrees)".into())
}

// 3. PBW engine suites.
fn pbw_engine() -> Outcome {
    let start = Instant::now();
    let opts = SuiteOptions::default();
    ensure(
        opts.trials == 200 && opts.pairs == 100 && opts.degree == 3 && opts.word_length == 6,
        || format!("{opts:?}"),
    )?;
    let structures: [(&str, AnchoredLieAlgebra); 2] = [
        ("heisenberg", fixtures::heisenberg().anchored().clone()),
        ("derA3", der_a3()),
    ];
    for (i, (name, l)) in structures.iter().enumerate() {
        let env = UniversalEnveloping::new(l.lie().clone());
        passed(&enveloping_suite(&env, &opts, &mut rng(11 + i as u64)), name)?;
        passed(
            &ring_suite(l, &opts, &mut rng(21 + i as u64)).map_err(|e| e.to_string())?,
            name,
        )?;
    }
    within(start, Duration::from_secs(60))?;
    Ok("200 words, 200 triples per product, 100 coproduct pairs over Heisenberg and Der(A3)".into())
}

// 4. Bracket identities on the A3 fixture.
fn brackets() -> Outcome {
    let r = bracket_identities(&der_a3()).map_err(|e| e.to_string())?;
    passed(&r, "bracket identities")?;
    Ok("smash and CM identities on all basis X, a, b".into())
}

// 5. The comparison isomorphism.
fn cm_iso() -> Outcome {
    let r = verify_cm_iso(&der_a3(), 3, 100, 2, &mut rng(5)).map_err(|e| e.to_string())?;
    passed(&r, "cm_iso")?;
    for d in 0..=3 {
        ensure(
            r.checks.iter().any(|c| c.name == format!("bijective_degree_{d}")),
            || format!("no degree {d} check"),
        )?;
    }
    Ok("bijective on degrees 0..=3, multiplicative on 100 pairs".into())
}

// 6. The adjunction on (A3, Der A3, id) with R = End(A3).
fn adjunction() -> Outcome {
    let start = Instant::now();
    let (l, carrier, psi) = fixtures::adjunction_fixture().map_err(|e| e.to_string())?;
    let square = fixtures::kernel_inclusion(&l).map_err(|e| e.to_string())?;
    let opts = VerifyOptions::default();
    let r = verify_adjunction(&l, &carrier, &[psi], &[square], opts, &mut rng(6));
    passed(&r, "adjunction")?;
    for name in [
        "psi0.round_trip",
        "psi0.multiplicative",
        "generation",
        "naturality0.square",
    ] {
        ensure(r.checks.iter().any(|c| c.name == name), || {
            format!("missing check {name}")
        })?;
    }
    // ker ω is zero for Der(A3); first-order operators have a 3-dim kernel.
    let fo: LieStructure = LieRinehartAlgebra::first_order_operators(&fixtures::truncated(3))
        .map_err(|e| e.to_string())?
        .into();
    let square = fixtures::kernel_inclusion(&fo).map_err(|e| e.to_string())?;
    ensure(square.source.dim() == 3, || {
        format!("kernel dim {}", square.source.dim())
    })?;
    let fo_carrier = lie_adjoint(
        &fixtures::endomorphism_ring(&fixtures::truncated(3)),
        Variant::LieRinehart,
    )
    .map_err(|e| e.to_string())?;
    let fo_psi = lr_core::adjoints::canonical_psi(&fo, &fo_carrier).map_err(|e| e.to_string())?;
    passed(
        &verify_adjunction(&fo, &fo_carrier, &[fo_psi], &[square], opts, &mut rng(66)),
        "first-order operators",
    )?;
    within(start, Duration::from_secs(30))?;
    Ok("round trip, 100 multiplicative pairs, generation at degree 3, naturality along ker ω".into())
}

// 7. The unit of F_A ⊣ E_A.
fn unit_iso() -> Outcome {
    let l = der_a3();
    let (fe, unit) = functor_f_unit(&l).map_err(|e| e.to_string())?;
    ensure(fe.dim() == l.dim(), || {
        format!("dim F(E(L)) = {}, dim L = {}", fe.dim(), l.dim())
    })?;
    ensure(unit.rank() == l.dim(), || "unit is not injective".into())?;
    let ders = l.base().derivation_space();
    for x in 0..l.dim() {
        let v = fe.embed(&unit.column(x));
        ensure(fe.component(0, &v) == l.lie().basis_vector(x).as_slice(), || {
            "first component is not X".into()
        })?;
        let w = ders.coordinates(&l.omega(x)).ok_or("anchor is not a derivation")?;
        ensure(fe.component(1, &v) == w.as_slice(), || {
            "second component is not ω(X)".into()
        })?;
    }
    let violations = l.lie().morphism_violations(fe.lie(), &unit);
    ensure(violations.is_empty(), || violations.join("; "))?;
    Ok(format!(
        "dim {} = dim {}, membership and brackets preserved",
        fe.dim(),
        l.dim()
    ))
}

// 8. The gauge suite.
fn gauge() -> Outcome {
    let start = Instant::now();
    let l = fixtures::derivation_algebra(3);
    let a3 = fixtures::truncated(3);
    let m = AModule::regular(&a3);
    let at = atiyah(&m).map_err(|e| e.to_string())?;
    let dop = gauge_algebra(&l, &m).map_err(|e| e.to_string())?;
    ensure(at.dim() == 5 && dop.dim() == 5, || {
        format!("dims {} and {}", at.dim(), dop.dim())
    })?;
    let direct = gauge_algebra_direct(&l, &m).map_err(|e| e.to_string())?;
    let product = gauge_algebra_product(&l, &m).map_err(|e| e.to_string())?;
    // the product lives in 𝓛(End M) ⊕ L; the comparison maps it into End M ⊕ L
    let routes = compare_gauge_routes(&direct, &product, &m).map_err(|e| e.to_string())?;
    passed(&routes, "routes")?;
    ensure(routes.checks.iter().any(|c| c.name == "canonical_subspace"), || {
        "no subspace comparison".into()
    })?;
    let via_end = lie_adjoint(&m.endomorphism_ring().map_err(|e| e.to_string())?, Variant::LieRinehart)
        .map_err(|e| e.to_string())?;
    ensure(at.carrier() == via_end.carrier(), || {
        "atiyah ≠ lie_adjoint(End M)".into()
    })?;

    // three test actions
    let (dop_full, s) = gauge_module(&l, &m).map_err(|e| e.to_string())?;
    let taut = LieModuleStructure::tautological(l.clone().into());
    let fo = LieRinehartAlgebra::first_order_operators(&a3).map_err(|e| e.to_string())?;
    let ders = a3.derivation_space();
    let mut rho_cols: Vec<Vec<Scalar>> = (0..3)
        .map(|b| flatten(&a3.left_multiplication(&a3.basis_vector(b))))
        .collect();
    rho_cols.extend((0..ders.dim()).map(|k| flatten(&ders.basis_derivation(k))));
    let mut forget = Matrix::zeros(2, 5);
    forget[(0, 3)] = Scalar::one();
    forget[(1, 4)] = Scalar::one();
    let fo_action =
        LieModuleStructure::new(fo.into(), m.clone(), Matrix::from_columns(9, &rho_cols)).map_err(|e| e.to_string())?;
    let actions = [
        ("DO itself", s, LieMorphism::new(dop_full.projection(1).clone())),
        ("tautological", taut, LieMorphism::identity(2)),
        ("first-order operators", fo_action, LieMorphism::new(forget)),
    ];
    for (name, action, f) in &actions {
        let fac = gauge_universal(&l, action, f).map_err(|e| format!("{name}: {e}"))?;
        ensure(fac.map.is_some(), || format!("{name}: no factorization"))?;
        passed(&fac.report, name)?;
        ensure(fac.report.checks.iter().any(|c| c.name == "unique"), || {
            format!("{name}: no uniqueness check")
        })?;
    }
    within(start, Duration::from_secs(10))?;
    Ok("dim 𝒜 = dim DO = 5, DO = product, 3 factorizations unique, atiyah = 𝓛(End M)".into())
}

fn cli(dir: &Path, args: &[&str]) -> lr_cli::Execution {
    let mut full = vec!["lr".to_string()];
    full.extend(
        args.iter()
            .map(|a| a.replace("{}", dir.to_str().expect("utf-8 temp path"))),
    );
    lr_cli::execute(full, |_| None)
}

// 9. The CLI pipeline.
fn cli_pipeline() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let dir = tmp.path();
    let expect = |args: &[&str], code: i32| -> Result<lr_cli::Execution, String> {
        let run = cli(dir, args);
        ensure(run.code == code, || {
            format!(
                "{args:?} exited {} (want {code}): {}{}",
                run.code, run.stdout, run.stderr
            )
        })?;
        Ok(run)
    };
    expect(&["fixtures", "--out", "{}"], 0)?;
    for f in [
        "A3.json",
        "A3-derA3.json",
        "heisenberg.json",
        "M2-commutator.json",
        "EndA3-ring.json",
        "psi.json",
    ] {
        expect(&["validate", &format!("{{}}/{f}")], 0)?;
    }
    let fault = expect(
        &["validate", "{}/faults/free_rank1_leibniz.json", "--format", "json"],
        1,
    )?;
    ensure(fault.stdout.contains("\"leibniz_2\""), || {
        "fault report does not cite leibniz_2".into()
    })?;
    let der = expect(
        &["compute", "derivations", "{}/A3.json", "--out", "{}/out/derA3.json"],
        0,
    )?;
    ensure(
        der.stdout.contains("dim 2") && der.stdout.contains("x∂, x²∂"),
        || der.stdout.clone(),
    )?;
    let written = std::fs::read_to_string(dir.join("out/derA3.json")).map_err(|e| e.to_string())?;
    let reparsed = lr_cli::format::load(&dir.join("out/derA3.json")).map_err(|e| e.to_string())?;
    ensure(lr_cli::format::render(&reparsed) == written, || {
        "round trip is not bit-identical".into()
    })?;
    expect(&["validate", "{}/out/derA3.json"], 0)?;
    let at = expect(&["compute", "atiyah", "{}/A3.json", "{}/A3-as-module.json"], 0)?;
    ensure(at.stdout.contains("dim 5"), || at.stdout.clone())?;
    let adj = expect(
        &["compute", "adjoint", "--variant", "lie_rinehart", "{}/EndA3-ring.json"],
        0,
    )?;
    ensure(adj.stdout.contains("dim 5"), || adj.stdout.clone())?;
    expect(
        &[
            "verify",
            "adjunction",
            "{}/A3-derA3.json",
            "{}/EndA3-ring.json",
            "{}/psi.json",
        ],
        0,
    )?;
    expect(&["verify", "cm_iso", "{}/A3-derA3.json", "--degree", "3"], 0)?;
    expect(
        &[
            "verify",
            "do_universal",
            "{}/A3-derA3.json",
            "{}/tautological-action.json",
        ],
        0,
    )?;
    let args = [
        "verify",
        "pbw",
        "{}/heisenberg.json",
        "--trials",
        "200",
        "--seed",
        "7",
        "--format",
        "json",
    ];
    let first = expect(&args, 0)?;
    let second = expect(&args, 0)?;
    ensure(first.stdout == second.stdout, || {
        "reports differ under a fixed seed".into()
    })?;
    Ok("fixtures → validate → compute → verify exit 0; round trip bit-identical; seeded reports identical".into())
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("axiom suite", axiom_suite),
        ("derivation computations", derivations),
        ("PBW engine", pbw_engine),
        ("bracket identities", brackets),
        ("comparison isomorphism", cm_iso),
        ("adjunction", adjunction),
        ("unit of F ⊣ E", unit_iso),
        ("gauge suite", gauge),
        ("CLI contract", cli_pipeline),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let t = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {}: PASS {name} ({t:.2} s): {detail}", i + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {}: FAIL {name} ({t:.2} s): {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
