//! The subcommands, as functions from parsed inputs to an [`Outcome`].

use std::fs;
use std::path::{Path, PathBuf};

use lr_core::adjoints::{
    canonical_psi, enveloping_adjoint, lie_adjoint, verify_adjunction, AdjointCarrier, NaturalitySquare, Variant,
    VerifyOptions,
};
use lr_core::algebras::{ARing, AlgebraMorphism, AlgebraPresentation};
use lr_core::fixtures;
use lr_core::gauge::{atiyah, atiyah_universal, check_module, gauge_algebra, AModule, LieModuleStructure};
use lr_core::liecore::{
    base_change, product, product_lie_rinehart, AnchoredLieAlgebra, LieMorphism, LieRinehartAlgebra, LieStructure,
    PullbackLie,
};
use lr_core::pbw::{enveloping_suite, ring_suite, verify_cm_iso, SuiteOptions, UniversalEnveloping};
use lr_core::Report;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{CliError, CliResult};
use crate::format::{self, ModuleFile, MorphismFile, Object, Writer};
use crate::output::{Outcome, Summary};

/// The carrier `𝓛_A(R)` matching the flavour of `l`: Lie–Rinehart for
/// Lie–Rinehart sources, anchored otherwise.
pub fn adjoint_for(l: &LieStructure, phi: &AlgebraMorphism) -> lr_core::Result<AdjointCarrier> {
    let ring = ARing::new(phi.clone())?;
    let variant = match l {
        LieStructure::LieRinehart(_) => Variant::LieRinehart,
        LieStructure::Anchored(_) => Variant::Anchored,
    };
    lie_adjoint(&ring, variant)
}

/// Settings shared by the randomized commands.
#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    pub degree: u32,
    pub seed: u64,
    pub trials: usize,
}

impl RunOptions {
    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

fn display(p: &Path) -> String {
    p.display().to_string()
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn expect_arity(what: &str, files: &[PathBuf], min: usize, max: usize) -> CliResult<()> {
    if files.len() < min || files.len() > max {
        let expected = if min == max {
            min.to_string()
        } else {
            format!("{min} to {max}")
        };
        return Err(usage(format!("{what} takes {expected} file(s), got {}", files.len())));
    }
    Ok(())
}

fn lie_structure(path: &Path) -> CliResult<LieStructure> {
    let o = format::load(path)?;
    o.lie_structure().ok_or_else(|| {
        usage(format!(
            "{}: expected an anchored or lie_rinehart file, found {}",
            display(path),
            o.kind()
        ))
    })
}

fn lie_rinehart(path: &Path) -> CliResult<LieRinehartAlgebra> {
    match format::load(path)? {
        Object::LieRinehart(l) => Ok(l),
        o => Err(usage(format!(
            "{}: expected a lie_rinehart file, found {}",
            display(path),
            o.kind()
        ))),
    }
}

fn algebra(path: &Path) -> CliResult<AlgebraPresentation> {
    match format::load(path)? {
        Object::Algebra(a) => Ok(a),
        o => Err(usage(format!(
            "{}: expected an algebra file, found {}",
            display(path),
            o.kind()
        ))),
    }
}

fn module(path: &Path) -> CliResult<ModuleFile> {
    match format::load(path)? {
        Object::Module(m) => Ok(m),
        o => Err(usage(format!(
            "{}: expected a module file, found {}",
            display(path),
            o.kind()
        ))),
    }
}

fn morphism(path: &Path) -> CliResult<MorphismFile> {
    match format::load(path)? {
        Object::Morphism(m) => Ok(m),
        o => Err(usage(format!(
            "{}: expected a morphism file, found {}",
            display(path),
            o.kind()
        ))),
    }
}

fn a_ring(path: &Path) -> CliResult<ARing> {
    match format::load(path)? {
        Object::ARing(phi) => Ok(ARing::new(phi)?),
        o => Err(usage(format!(
            "{}: expected an a_ring file, found {}",
            display(path),
            o.kind()
        ))),
    }
}

/// The structure a pullback carries, preferring the Lie–Rinehart one.
pub fn pullback_structure(p: &PullbackLie) -> LieStructure {
    match p.lie_rinehart() {
        Some(lr) => lr.clone().into(),
        None => p.anchored().clone().into(),
    }
}

// ---------------------------------------------------------------- validate

/// Validates each file with the validator for its kind. Check names carry the
/// file path as a prefix when more than one file is given.
pub fn validate(files: &[PathBuf]) -> CliResult<Outcome> {
    if files.is_empty() {
        return Err(usage("validate needs at least one file"));
    }
    let mut report = Report::new();
    for path in files {
        let r = validate_object(&format::load(path)?)?;
        if files.len() == 1 {
            report = r;
        } else {
            report.merge(&display(path), r);
        }
    }
    Ok(Outcome::Report {
        command: "validate".into(),
        report,
    })
}

pub fn validate_object(o: &Object) -> CliResult<Report> {
    Ok(match o {
        Object::Algebra(a) => a.validate(),
        Object::Lie(l) => l.validate(),
        Object::Anchored(a) => a.validate(),
        Object::LieRinehart(l) => l.validate(),
        Object::ARing(phi) => {
            let mut r = Report::new();
            r.merge("base", phi.source().validate());
            r.merge("ring", phi.target().validate());
            r.merge("structure_map", phi.validate());
            r
        }
        Object::Module(mf) => {
            let mut r = mf.module.validate();
            if let Some(s) = mf.structure() {
                match s {
                    Ok(s) => r.merge("action", check_module(&s)),
                    Err(e) => r.fail("action", e.to_string()),
                }
            }
            r
        }
        Object::Morphism(mf) => validate_morphism(mf)?,
    })
}

fn validate_morphism(mf: &MorphismFile) -> CliResult<Report> {
    let f = LieMorphism::new(mf.matrix.clone());
    match (mf.source.as_ref(), mf.target.as_ref()) {
        (Object::Algebra(a), Object::Algebra(b)) => {
            Ok(AlgebraMorphism::new_unchecked(a.clone(), b.clone(), mf.matrix.clone())?.validate())
        }
        (Object::Lie(a), Object::Lie(b)) => Ok(f.check_lie(a, b)),
        (s, Object::ARing(phi)) if s.lie_structure().is_some() => {
            let l = s.lie_structure().expect("guarded");
            let carrier = adjoint_for(&l, phi)?;
            Ok(l.check_morphism(&carrier.structure(), &f))
        }
        (s, t) => match (s.lie_structure(), t.lie_structure()) {
            (Some(a), Some(b)) => Ok(a.check_morphism(&b, &f)),
            _ => Err(usage(format!(
                "no validator for a morphism from {} to {}",
                s.kind(),
                t.kind()
            ))),
        },
    }
}

// ----------------------------------------------------------------- compute

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum ComputeWhat {
    Derivations,
    Adjoint,
    Atiyah,
    Gauge,
    Product,
    #[value(name = "base_change")]
    BaseChange,
}

pub fn compute(what: ComputeWhat, files: &[PathBuf], variant: Variant, out: Option<&Path>) -> CliResult<Outcome> {
    let (name, summary) = match what {
        ComputeWhat::Derivations => {
            expect_arity("compute derivations", files, 1, 1)?;
            let a = algebra(&files[0])?;
            let l = AnchoredLieAlgebra::derivations(&a);
            let structure: LieStructure = if a.is_commutative() {
                LieRinehartAlgebra::derivations(&a)?.into()
            } else {
                l.into()
            };
            let mut facts = Vec::new();
            if !a.is_commutative() {
                let inner = AnchoredLieAlgebra::commutator_anchor(&a).anchor().rank();
                facts.push(("inner derivations".to_string(), inner.to_string()));
            }
            ("compute derivations", Summary { structure, facts })
        }
        ComputeWhat::Adjoint => {
            let carrier = match variant {
                Variant::EnvelopingBase => {
                    expect_arity("compute adjoint --variant enveloping_base", files, 2, 2)?;
                    enveloping_adjoint(&a_ring(&files[0])?, &algebra(&files[1])?)?
                }
                v => {
                    expect_arity("compute adjoint", files, 1, 1)?;
                    lie_adjoint(&a_ring(&files[0])?, v)?
                }
            };
            (
                "compute adjoint",
                Summary {
                    structure: carrier.structure(),
                    facts: vec![("variant".into(), carrier.variant().to_string())],
                },
            )
        }
        ComputeWhat::Atiyah => {
            expect_arity("compute atiyah", files, 1, 2)?;
            let m = module(files.last().expect("arity"))?.module;
            if files.len() == 2 {
                let a = algebra(&files[0])?;
                if &a != m.base() {
                    return Err(lr_core::Error::BaseMismatch(format!("{} vs {}", a.name(), m.base().name())).into());
                }
            }
            let carrier = atiyah(&m)?;
            (
                "compute atiyah",
                Summary {
                    structure: carrier.structure(),
                    facts: Vec::new(),
                },
            )
        }
        ComputeWhat::Gauge => {
            expect_arity("compute gauge", files, 2, 2)?;
            let l = lie_rinehart(&files[0])?;
            let m = module(&files[1])?.module;
            let g = gauge_algebra(&l, &m)?;
            (
                "compute gauge",
                Summary {
                    structure: pullback_structure(&g),
                    facts: Vec::new(),
                },
            )
        }
        ComputeWhat::Product => {
            expect_arity("compute product", files, 2, 2)?;
            let (l1, l2) = (lie_structure(&files[0])?, lie_structure(&files[1])?);
            let p = match (l1.lie_rinehart(), l2.lie_rinehart()) {
                (Some(a), Some(b)) => product_lie_rinehart(a, b)?,
                _ => product(l1.anchored(), l2.anchored())?,
            };
            (
                "compute product",
                Summary {
                    structure: pullback_structure(&p),
                    facts: Vec::new(),
                },
            )
        }
        ComputeWhat::BaseChange => {
            expect_arity("compute base_change", files, 2, 2)?;
            let mf = morphism(&files[0])?;
            let phi = match (*mf.source, *mf.target) {
                (Object::Algebra(a), Object::Algebra(b)) => AlgebraMorphism::new(a, b, mf.matrix)?,
                _ => return Err(usage("base_change needs a morphism between algebras")),
            };
            let l2 = lie_rinehart(&files[1])?;
            let p = base_change(&phi, &l2)?;
            (
                "compute base_change",
                Summary {
                    structure: pullback_structure(&p),
                    facts: Vec::new(),
                },
            )
        }
    };
    if let Some(out) = out {
        write_file(out, &format::render(&Object::from(summary.structure.clone())))?;
    }
    Ok(Outcome::Structure {
        command: name.into(),
        summary,
    })
}

// ------------------------------------------------------------------ verify

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum VerifyWhat {
    Adjunction,
    #[value(name = "cm_iso")]
    CmIso,
    #[value(name = "do_universal")]
    DoUniversal,
    Pbw,
}

pub fn verify(what: VerifyWhat, files: &[PathBuf], squares: &[PathBuf], opts: RunOptions) -> CliResult<Outcome> {
    let mut rng = opts.rng();
    let (name, report) = match what {
        VerifyWhat::Adjunction => {
            if files.len() < 2 {
                return Err(usage("verify adjunction takes L RING [PSI...]"));
            }
            let l = lie_structure(&files[0])?;
            let ring = match format::load(&files[1])? {
                Object::ARing(phi) => phi,
                o => {
                    return Err(usage(format!(
                        "{}: expected an a_ring file, found {}",
                        display(&files[1]),
                        o.kind()
                    )))
                }
            };
            let carrier = adjoint_for(&l, &ring)?;
            let mut psis = Vec::new();
            for p in &files[2..] {
                psis.push(LieMorphism::new(morphism(p)?.matrix));
            }
            if psis.is_empty() {
                psis.push(canonical_psi(&l, &carrier)?);
            }
            let mut sq = vec![fixtures::kernel_inclusion(&l)?];
            for p in squares {
                let mf = morphism(p)?;
                if mf.target.lie_structure().as_ref() != Some(&l) {
                    return Err(usage(format!("{}: a square's target must be L", display(p))));
                }
                let source = mf
                    .source
                    .lie_structure()
                    .ok_or_else(|| usage(format!("{}: a square's source must be a Lie structure", display(p))))?;
                sq.push(NaturalitySquare {
                    source,
                    map: LieMorphism::new(mf.matrix),
                });
            }
            let vo = VerifyOptions {
                degree: opts.degree,
                trials: opts.trials,
                pair_degree: 2,
            };
            (
                "verify adjunction",
                verify_adjunction(&l, &carrier, &psis, &sq, vo, &mut rng),
            )
        }
        VerifyWhat::CmIso => {
            expect_arity("verify cm_iso", files, 1, 1)?;
            let l = lie_structure(&files[0])?;
            (
                "verify cm_iso",
                verify_cm_iso(l.anchored(), opts.degree, opts.trials, 2, &mut rng)?,
            )
        }
        VerifyWhat::DoUniversal => {
            expect_arity("verify do_universal", files, 2, 3)?;
            ("verify do_universal", do_universal(files)?)
        }
        VerifyWhat::Pbw => {
            expect_arity("verify pbw", files, 1, 1)?;
            let l = lie_structure(&files[0])?;
            let so = SuiteOptions {
                trials: opts.trials,
                pairs: opts.trials.div_ceil(2),
                degree: opts.degree,
                word_length: 6,
            };
            let mut report = enveloping_suite(&UniversalEnveloping::new(l.lie().clone()), &so, &mut rng);
            let ring = ring_suite(l.anchored(), &so, &mut rng)?;
            report.merge("", ring);
            ("verify pbw", report)
        }
    };
    Ok(Outcome::Report {
        command: name.into(),
        report,
    })
}

/// `L MODULE [F]`: the module file carries the acting structure `(L′, ρ)` and
/// `F: L′ → L` defaults to the identity when `L′ = L`. Failed preconditions
/// are reported as failing checks.
fn do_universal(files: &[PathBuf]) -> CliResult<Report> {
    let l = lie_rinehart(&files[0])?;
    let mf = module(&files[1])?;
    let other = match mf.structure() {
        Some(s) => s?,
        None => {
            return Err(usage(format!(
                "{}: the module file carries no Lie action",
                display(&files[1])
            )))
        }
    };
    let f = match files.get(2) {
        Some(p) => LieMorphism::new(morphism(p)?.matrix),
        None if other.lie == LieStructure::from(l.clone()) => LieMorphism::identity(l.dim()),
        None => return Err(usage("the acting structure differs from L; pass the morphism F")),
    };
    let mut report = Report::new();
    match lr_core::gauge::gauge_universal(&l, &other, &f) {
        Ok(fac) => report.merge("gauge", fac.report),
        Err(e) => report.fail("gauge.precondition", e.to_string()),
    }
    match atiyah_universal(&other) {
        Ok((_, r)) => report.merge("atiyah", r),
        Err(e) => report.fail("atiyah.precondition", e.to_string()),
    }
    Ok(report)
}

// ---------------------------------------------------------------- fixtures

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| CliError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
    }
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes the fixture corpus into `dir`. Shared sub-objects are written once
/// and referenced by relative path.
pub fn write_fixtures(dir: &Path) -> CliResult<Outcome> {
    let mut files = Vec::new();
    let mut writer = Writer::new();
    let mut fault_writer = Writer::new();
    let mut emit = |writer: &mut Writer, fault_writer: &mut Writer, name: &str, o: Object, register: bool| {
        let path = dir.join(name);
        write_file(&path, &writer.render(&o))?;
        if register {
            writer.register(o.clone(), name);
            fault_writer.register(o, format!("../{name}"));
        }
        files.push(display(&path));
        CliResult::Ok(())
    };

    let algebras = [
        ("A2.json", fixtures::truncated(2)),
        ("A3.json", fixtures::truncated(3)),
        ("A4.json", fixtures::truncated(4)),
        ("Q.json", AlgebraPresentation::ground_field()),
        ("QxQ.json", AlgebraPresentation::split(2)),
        ("M2.json", AlgebraPresentation::matrix_algebra(2)),
    ];
    for (name, a) in algebras {
        emit(&mut writer, &mut fault_writer, name, Object::Algebra(a), true)?;
    }
    for n in 2..=4 {
        let lr = fixtures::derivation_algebra(n);
        let lie_name = format!("derA{n}-lie.json");
        emit(
            &mut writer,
            &mut fault_writer,
            &lie_name,
            Object::Lie(lr.lie().clone()),
            true,
        )?;
        emit(
            &mut writer,
            &mut fault_writer,
            &format!("A{n}-derA{n}.json"),
            Object::LieRinehart(lr),
            true,
        )?;
    }
    emit(
        &mut writer,
        &mut fault_writer,
        "heisenberg.json",
        Object::LieRinehart(fixtures::heisenberg()),
        true,
    )?;
    let m2 = fixtures::matrix_commutator(2);
    emit(
        &mut writer,
        &mut fault_writer,
        "M2-commutator.json",
        Object::Anchored(m2),
        true,
    )?;

    let a3 = fixtures::truncated(3);
    let end_ring = fixtures::endomorphism_ring(&a3);
    let end_alg = end_ring.ring().clone().with_name("End(A3)");
    let structure_map = AlgebraMorphism::new(a3.clone(), end_alg.clone(), end_ring.structure_map().matrix().clone())?;
    emit(
        &mut writer,
        &mut fault_writer,
        "EndA3.json",
        Object::Algebra(end_alg),
        true,
    )?;
    emit(
        &mut writer,
        &mut fault_writer,
        "EndA3-ring.json",
        Object::ARing(structure_map.clone()),
        true,
    )?;

    let regular = AModule::regular(&a3).with_name("A3");
    emit(
        &mut writer,
        &mut fault_writer,
        "A3-as-module.json",
        Object::Module(ModuleFile {
            module: regular.clone().left_only(),
            action: None,
        }),
        false,
    )?;
    let der_a3: LieStructure = fixtures::derivation_algebra(3).into();
    let taut = LieModuleStructure::tautological(der_a3.clone());
    emit(
        &mut writer,
        &mut fault_writer,
        "tautological-action.json",
        Object::Module(ModuleFile {
            module: taut.module.clone(),
            action: Some((taut.lie.clone(), taut.rho.clone())),
        }),
        false,
    )?;
    let carrier = adjoint_for(&der_a3, &structure_map)?;
    let psi = canonical_psi(&der_a3, &carrier)?;
    emit(
        &mut writer,
        &mut fault_writer,
        "psi.json",
        Object::Morphism(MorphismFile {
            source: Box::new(der_a3.clone().into()),
            target: Box::new(Object::ARing(structure_map)),
            matrix: psi.matrix().clone(),
        }),
        false,
    )?;
    emit(
        &mut writer,
        &mut fault_writer,
        "identity-derA3.json",
        Object::Morphism(MorphismFile {
            source: Box::new(der_a3.clone().into()),
            target: Box::new(der_a3.clone().into()),
            matrix: LieMorphism::identity(der_a3.dim()).matrix().clone(),
        }),
        false,
    )?;
    let diffops: LieStructure = LieRinehartAlgebra::first_order_operators(&a3)?.into();
    emit(
        &mut writer,
        &mut fault_writer,
        "A3-diffops.json",
        diffops.clone().into(),
        true,
    )?;
    let square = fixtures::kernel_inclusion(&diffops)?;
    emit(
        &mut writer,
        &mut fault_writer,
        "A3-diffops-kernel.json",
        Object::Morphism(MorphismFile {
            source: Box::new(square.source.into()),
            target: Box::new(diffops.into()),
            matrix: square.map.matrix().clone(),
        }),
        false,
    )?;

    for fault in fixtures::injected_faults() {
        emit(
            &mut fault_writer,
            &mut Writer::new(),
            &format!("faults/{}.json", fault.name),
            fault.structure.into(),
            false,
        )?;
    }
    Ok(Outcome::Written {
        command: "fixtures".into(),
        files,
    })
}
