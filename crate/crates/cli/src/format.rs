//! The JSON presentation format.
//!
//! Every file is a JSON object with `"format": 1` and a `"kind"`. Rationals are
//! strings `"p/q"` (or `"p"`); structure-constant tables are sparse lists of
//! `[i, j, k, "c"]` quadruples and linear maps are `[source, target, "c"]`
//! triples. Wherever an object is expected, a string is read as a path
//! relative to the referencing file and loaded in its place.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use lr_core::algebras::{AlgebraMorphism, AlgebraPresentation};
use lr_core::exactla::{Matrix, Scalar};
use lr_core::gauge::{AModule, LieModuleStructure};
use lr_core::liecore::{AnchoredLieAlgebra, LieAlgebra, LieRinehartAlgebra, LieStructure};
use serde_json::{json, Map, Value};

use crate::error::{CliError, CliResult};

pub const FORMAT_VERSION: u64 = 1;

/// A module file, optionally carrying a Lie structure acting through `ρ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleFile {
    pub module: AModule,
    pub action: Option<(LieStructure, Matrix)>,
}

impl ModuleFile {
    pub fn structure(&self) -> Option<lr_core::Result<LieModuleStructure>> {
        self.action
            .as_ref()
            .map(|(l, rho)| LieModuleStructure::new(l.clone(), self.module.clone(), rho.clone()))
    }
}

/// A linear map between two presented objects; `matrix` is `target × source`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismFile {
    pub source: Box<Object>,
    pub target: Box<Object>,
    pub matrix: Matrix,
}

/// One parsed presentation. `ARing` holds its structure map unvalidated so
/// that `validate` can report on it.
#[derive(Clone, Debug, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum Object {
    Algebra(AlgebraPresentation),
    Lie(LieAlgebra),
    Anchored(AnchoredLieAlgebra),
    LieRinehart(LieRinehartAlgebra),
    ARing(AlgebraMorphism),
    Module(ModuleFile),
    Morphism(MorphismFile),
}

impl Object {
    pub fn kind(&self) -> &'static str {
        match self {
            Object::Algebra(_) => "algebra",
            Object::Lie(_) => "lie",
            Object::Anchored(_) => "anchored",
            Object::LieRinehart(_) => "lie_rinehart",
            Object::ARing(_) => "a_ring",
            Object::Module(_) => "module",
            Object::Morphism(_) => "morphism",
        }
    }

    pub fn lie_structure(&self) -> Option<LieStructure> {
        match self {
            Object::Anchored(a) => Some(LieStructure::Anchored(a.clone())),
            Object::LieRinehart(l) => Some(LieStructure::LieRinehart(l.clone())),
            _ => None,
        }
    }
}

impl From<LieStructure> for Object {
    fn from(s: LieStructure) -> Self {
        match s {
            LieStructure::Anchored(a) => Object::Anchored(a),
            LieStructure::LieRinehart(l) => Object::LieRinehart(l),
        }
    }
}

/// Loads and interprets one file, resolving references recursively.
pub fn load(path: &Path) -> CliResult<Object> {
    Loader { stack: Vec::new() }.file(path)
}

/// Parses a document held in memory; references resolve against `dir`.
pub fn parse_str(text: &str, path: &Path) -> CliResult<Object> {
    let mut loader = Loader {
        stack: vec![path.to_path_buf()],
    };
    loader.document(text, path)
}

struct Loader {
    stack: Vec<PathBuf>,
}

struct Ctx<'a> {
    path: &'a Path,
}

impl Ctx<'_> {
    fn schema(&self, pointer: &str, message: impl Into<String>) -> CliError {
        CliError::Schema {
            path: self.path.to_path_buf(),
            pointer: if pointer.is_empty() {
                "/".into()
            } else {
                pointer.to_string()
            },
            message: message.into(),
        }
    }

    fn dir(&self) -> PathBuf {
        self.path.parent().map(Path::to_path_buf).unwrap_or_default()
    }
}

impl Loader {
    fn file(&mut self, path: &Path) -> CliResult<Object> {
        let key = path.canonicalize().unwrap_or_else(|_| path.to_path_buf());
        if self.stack.contains(&key) {
            return Err(CliError::Reference {
                path: self.stack.last().cloned().unwrap_or_default(),
                target: path.display().to_string(),
                message: "reference cycle".into(),
            });
        }
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        self.stack.push(key);
        let out = self.document(&text, path);
        self.stack.pop();
        out
    }

    fn document(&mut self, text: &str, path: &Path) -> CliResult<Object> {
        let value: Value = serde_json::from_str(text).map_err(|e| CliError::Syntax {
            path: path.to_path_buf(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        let ctx = Ctx { path };
        let map = value
            .as_object()
            .ok_or_else(|| ctx.schema("", "expected a JSON object"))?;
        match map.get("format") {
            Some(v) if v.as_u64() == Some(FORMAT_VERSION) => {}
            Some(v) => return Err(ctx.schema("/format", format!("unsupported format {v}"))),
            None => return Err(ctx.schema("/format", "missing \"format\": 1")),
        }
        self.object(&value, &ctx, "")
    }

    fn reference(&mut self, v: &Value, ctx: &Ctx, pointer: &str) -> CliResult<Object> {
        match v {
            Value::String(rel) => {
                let target = ctx.dir().join(rel);
                if !target.exists() {
                    return Err(CliError::Reference {
                        path: ctx.path.to_path_buf(),
                        target: rel.clone(),
                        message: "no such file".into(),
                    });
                }
                self.file(&target)
            }
            Value::Object(_) => self.object(v, ctx, pointer),
            _ => Err(ctx.schema(pointer, "expected an object or a path")),
        }
    }

    fn object(&mut self, v: &Value, ctx: &Ctx, pointer: &str) -> CliResult<Object> {
        let map = v.as_object().ok_or_else(|| ctx.schema(pointer, "expected an object"))?;
        let kind = field(map, "kind", ctx, pointer)?
            .as_str()
            .ok_or_else(|| ctx.schema(&format!("{pointer}/kind"), "expected a string"))?;
        match kind {
            "algebra" => algebra(map, ctx, pointer).map(Object::Algebra),
            "lie" => lie(map, ctx, pointer).map(Object::Lie),
            "anchored" => self.anchored(map, ctx, pointer).map(Object::Anchored),
            "lie_rinehart" => {
                let anchored = self.anchored(map, ctx, pointer)?;
                let n = anchored.dim();
                let a = anchored.base().dim();
                let action = table(map, "action", [a, n, n], ctx, pointer)?;
                Ok(Object::LieRinehart(
                    LieRinehartAlgebra::new(anchored, action).map_err(|e| ctx.schema(pointer, e.to_string()))?,
                ))
            }
            "a_ring" => {
                let base = self.algebra_ref(map, "base", ctx, pointer)?;
                let ring = self.algebra_ref(map, "ring", ctx, pointer)?;
                let m = linear_map(map, "map", base.dim(), ring.dim(), ctx, pointer)?;
                AlgebraMorphism::new_unchecked(base, ring, m)
                    .map(Object::ARing)
                    .map_err(|e| ctx.schema(pointer, e.to_string()))
            }
            "module" => self.module(map, ctx, pointer).map(Object::Module),
            "morphism" => {
                let source = self.reference(field(map, "source", ctx, pointer)?, ctx, &format!("{pointer}/source"))?;
                let target = self.reference(field(map, "target", ctx, pointer)?, ctx, &format!("{pointer}/target"))?;
                let (cols, rows) = (object_dim(&source), morphism_target_dim(&source, &target));
                let rows = rows.map_err(|e| ctx.schema(pointer, e.to_string()))?;
                let matrix = linear_map(map, "map", cols, rows, ctx, pointer)?;
                Ok(Object::Morphism(MorphismFile {
                    source: Box::new(source),
                    target: Box::new(target),
                    matrix,
                }))
            }
            other => Err(ctx.schema(&format!("{pointer}/kind"), format!("unknown kind {other:?}"))),
        }
    }

    fn algebra_ref(
        &mut self,
        map: &Map<String, Value>,
        key: &str,
        ctx: &Ctx,
        pointer: &str,
    ) -> CliResult<AlgebraPresentation> {
        let p = format!("{pointer}/{key}");
        match self.reference(field(map, key, ctx, pointer)?, ctx, &p)? {
            Object::Algebra(a) => Ok(a),
            o => Err(ctx.schema(&p, format!("expected an algebra, found {}", o.kind()))),
        }
    }

    fn anchored(&mut self, map: &Map<String, Value>, ctx: &Ctx, pointer: &str) -> CliResult<AnchoredLieAlgebra> {
        let base = self.algebra_ref(map, "base", ctx, pointer)?;
        let p = format!("{pointer}/lie");
        let lie = match self.reference(field(map, "lie", ctx, pointer)?, ctx, &p)? {
            Object::Lie(l) => l,
            o => return Err(ctx.schema(&p, format!("expected a lie algebra, found {}", o.kind()))),
        };
        let n = base.dim();
        let anchor = quadruple_matrix(map, "anchor", lie.dim(), n, ctx, pointer)?;
        AnchoredLieAlgebra::new(lie, base, anchor).map_err(|e| ctx.schema(pointer, e.to_string()))
    }

    fn module(&mut self, map: &Map<String, Value>, ctx: &Ctx, pointer: &str) -> CliResult<ModuleFile> {
        let base = self.algebra_ref(map, "base", ctx, pointer)?;
        let names = basis_names(map, "m", ctx, pointer)?;
        let d = names.len();
        let name = optional_str(map, "name", ctx, pointer)?.unwrap_or("M").to_string();
        let left = table(map, "left", [base.dim(), d, d], ctx, pointer)?;
        let right = match map.get("right") {
            Some(_) => Some(table(map, "right", [base.dim(), d, d], ctx, pointer)?),
            None => None,
        };
        let module = AModule::new(name, base, names, left, right).map_err(|e| ctx.schema(pointer, e.to_string()))?;
        let action = match map.get("lie") {
            None => {
                if map.contains_key("rho") {
                    return Err(ctx.schema(&format!("{pointer}/rho"), "\"rho\" needs \"lie\""));
                }
                None
            }
            Some(v) => {
                let p = format!("{pointer}/lie");
                let lie = self
                    .reference(v, ctx, &p)?
                    .lie_structure()
                    .ok_or_else(|| ctx.schema(&p, "expected an anchored or lie_rinehart structure"))?;
                let rho = quadruple_matrix(map, "rho", lie.dim(), d, ctx, pointer)?;
                Some((lie, rho))
            }
        };
        Ok(ModuleFile { module, action })
    }
}

fn field<'a>(map: &'a Map<String, Value>, key: &str, ctx: &Ctx, pointer: &str) -> CliResult<&'a Value> {
    map.get(key)
        .ok_or_else(|| ctx.schema(pointer, format!("missing field {key:?}")))
}

fn optional_str<'a>(map: &'a Map<String, Value>, key: &str, ctx: &Ctx, pointer: &str) -> CliResult<Option<&'a str>> {
    match map.get(key) {
        None => Ok(None),
        Some(Value::String(s)) => Ok(Some(s)),
        Some(_) => Err(ctx.schema(&format!("{pointer}/{key}"), "expected a string")),
    }
}

fn scalar(v: &Value, ctx: &Ctx, pointer: &str) -> CliResult<Scalar> {
    match v {
        Value::String(s) => s
            .parse()
            .map_err(|e: lr_core::Error| ctx.schema(pointer, e.to_string())),
        Value::Number(n) if n.is_i64() => Ok(Scalar::from(n.as_i64().unwrap())),
        _ => Err(ctx.schema(pointer, "expected a rational string \"p/q\" or an integer")),
    }
}

fn index(v: &Value, bound: usize, ctx: &Ctx, pointer: &str) -> CliResult<usize> {
    let i = v
        .as_u64()
        .ok_or_else(|| ctx.schema(pointer, "expected a non-negative integer index"))? as usize;
    if i >= bound {
        return Err(ctx.schema(pointer, format!("index {i} out of range 0..{bound}")));
    }
    Ok(i)
}

/// `basis_names`, or `prefix0, prefix1, …` from `dim`; both must agree when present.
fn basis_names(map: &Map<String, Value>, prefix: &str, ctx: &Ctx, pointer: &str) -> CliResult<Vec<String>> {
    let dim = match map.get("dim") {
        Some(v) => Some(
            v.as_u64()
                .ok_or_else(|| ctx.schema(&format!("{pointer}/dim"), "expected a non-negative integer"))?
                as usize,
        ),
        None => None,
    };
    let names = match map.get("basis_names") {
        Some(Value::Array(a)) => {
            let mut out = Vec::with_capacity(a.len());
            for (i, v) in a.iter().enumerate() {
                let s = v
                    .as_str()
                    .ok_or_else(|| ctx.schema(&format!("{pointer}/basis_names/{i}"), "expected a string"))?;
                out.push(s.to_string());
            }
            Some(out)
        }
        Some(_) => return Err(ctx.schema(&format!("{pointer}/basis_names"), "expected an array of strings")),
        None => None,
    };
    match (dim, names) {
        (Some(d), Some(n)) if d != n.len() => Err(ctx.schema(
            &format!("{pointer}/basis_names"),
            format!("{} names for dim {d}", n.len()),
        )),
        (_, Some(n)) => {
            let distinct: BTreeSet<&String> = n.iter().collect();
            if distinct.len() != n.len() {
                return Err(ctx.schema(&format!("{pointer}/basis_names"), "basis names must be distinct"));
            }
            Ok(n)
        }
        (Some(d), None) => Ok((0..d).map(|i| format!("{prefix}{i}")).collect()),
        (None, None) => Err(ctx.schema(pointer, "missing \"dim\" or \"basis_names\"")),
    }
}

/// A dense table of size `shape[0]·shape[1]·shape[2]` from sparse quadruples.
fn table(map: &Map<String, Value>, key: &str, shape: [usize; 3], ctx: &Ctx, pointer: &str) -> CliResult<Vec<Scalar>> {
    let p = format!("{pointer}/{key}");
    let mut out = vec![Scalar::zero(); shape[0] * shape[1] * shape[2]];
    let entries = match map.get(key) {
        None => return Ok(out),
        Some(Value::Array(a)) => a,
        Some(_) => return Err(ctx.schema(&p, "expected an array of [i, j, k, \"c\"] entries")),
    };
    let mut seen = BTreeSet::new();
    for (e, entry) in entries.iter().enumerate() {
        let ep = format!("{p}/{e}");
        let q = entry
            .as_array()
            .filter(|q| q.len() == 4)
            .ok_or_else(|| ctx.schema(&ep, "expected [i, j, k, \"c\"]"))?;
        let i = index(&q[0], shape[0], ctx, &format!("{ep}/0"))?;
        let j = index(&q[1], shape[1], ctx, &format!("{ep}/1"))?;
        let k = index(&q[2], shape[2], ctx, &format!("{ep}/2"))?;
        if !seen.insert((i, j, k)) {
            return Err(ctx.schema(&ep, format!("duplicate entry ({i}, {j}, {k})")));
        }
        out[(i * shape[1] + j) * shape[2] + k] = scalar(&q[3], ctx, &format!("{ep}/3"))?;
    }
    Ok(out)
}

/// Quadruples `[x, m, k, c]` meaning "the image of basis `m` under the `x`-th
/// operator has coefficient `c` on basis `k`", as a `d² × count` matrix of
/// flattened operators.
fn quadruple_matrix(
    map: &Map<String, Value>,
    key: &str,
    count: usize,
    d: usize,
    ctx: &Ctx,
    pointer: &str,
) -> CliResult<Matrix> {
    let t = table(map, key, [count, d, d], ctx, pointer)?;
    Ok(Matrix::from_fn(d * d, count, |row, x| {
        let (k, m) = (row / d, row % d);
        t[(x * d + m) * d + k].clone()
    }))
}

/// Triples `[j, i, c]`: the image of source basis `j` has coefficient `c` on target basis `i`.
fn linear_map(
    map: &Map<String, Value>,
    key: &str,
    cols: usize,
    rows: usize,
    ctx: &Ctx,
    pointer: &str,
) -> CliResult<Matrix> {
    let p = format!("{pointer}/{key}");
    let mut m = Matrix::zeros(rows, cols);
    let entries = match map.get(key) {
        None => return Ok(m),
        Some(Value::Array(a)) => a,
        Some(_) => return Err(ctx.schema(&p, "expected an array of [source, target, \"c\"] entries")),
    };
    let mut seen = BTreeSet::new();
    for (e, entry) in entries.iter().enumerate() {
        let ep = format!("{p}/{e}");
        let t = entry
            .as_array()
            .filter(|t| t.len() == 3)
            .ok_or_else(|| ctx.schema(&ep, "expected [source, target, \"c\"]"))?;
        let j = index(&t[0], cols, ctx, &format!("{ep}/0"))?;
        let i = index(&t[1], rows, ctx, &format!("{ep}/1"))?;
        if !seen.insert((j, i)) {
            return Err(ctx.schema(&ep, format!("duplicate entry ({j}, {i})")));
        }
        m[(i, j)] = scalar(&t[2], ctx, &format!("{ep}/2"))?;
    }
    Ok(m)
}

fn algebra(map: &Map<String, Value>, ctx: &Ctx, pointer: &str) -> CliResult<AlgebraPresentation> {
    let names = basis_names(map, "e", ctx, pointer)?;
    let n = names.len();
    let name = optional_str(map, "name", ctx, pointer)?.unwrap_or("A").to_string();
    let mul = table(map, "mul", [n, n, n], ctx, pointer)?;
    let p = format!("{pointer}/unit");
    let unit = match field(map, "unit", ctx, pointer)? {
        Value::Array(a) if a.len() == n => a
            .iter()
            .enumerate()
            .map(|(i, v)| scalar(v, ctx, &format!("{p}/{i}")))
            .collect::<CliResult<Vec<_>>>()?,
        _ => return Err(ctx.schema(&p, format!("expected {n} coefficients"))),
    };
    let generator = match map.get("generator") {
        None => None,
        Some(v) => Some(index(v, n, ctx, &format!("{pointer}/generator"))?),
    };
    AlgebraPresentation::new(name, names, mul, unit)
        .map(|a| a.with_generator(generator))
        .map_err(|e| ctx.schema(pointer, e.to_string()))
}

fn lie(map: &Map<String, Value>, ctx: &Ctx, pointer: &str) -> CliResult<LieAlgebra> {
    let names = basis_names(map, "X", ctx, pointer)?;
    let n = names.len();
    let name = optional_str(map, "name", ctx, pointer)?.unwrap_or("L").to_string();
    let bracket = table(map, "bracket", [n, n, n], ctx, pointer)?;
    LieAlgebra::new(name, names, bracket).map_err(|e| ctx.schema(pointer, e.to_string()))
}

fn object_dim(o: &Object) -> usize {
    match o {
        Object::Algebra(a) => a.dim(),
        Object::Lie(l) => l.dim(),
        Object::Anchored(a) => a.dim(),
        Object::LieRinehart(l) => l.dim(),
        Object::ARing(m) => m.target().dim(),
        Object::Module(m) => m.module.dim(),
        Object::Morphism(m) => m.matrix.cols(),
    }
}

/// Rows of a morphism's matrix. A Lie structure mapping into an `A`-ring maps
/// into its adjoint carrier, whose dimension has to be computed.
fn morphism_target_dim(source: &Object, target: &Object) -> lr_core::Result<usize> {
    match (source.lie_structure(), target) {
        (Some(l), Object::ARing(phi)) => Ok(crate::commands::adjoint_for(&l, phi)?.dim()),
        _ => Ok(object_dim(target)),
    }
}

/// Serializes objects, replacing sub-objects equal to a registered one by its path.
#[derive(Default)]
pub struct Writer {
    refs: Vec<(Object, String)>,
}

impl Writer {
    pub fn new() -> Self {
        Writer::default()
    }

    /// Later occurrences of `object` inside other objects are written as `path`.
    pub fn register(&mut self, object: Object, path: impl Into<String>) {
        self.refs.push((object, path.into()));
    }

    /// The full document for `o`, pretty-printed with a trailing newline.
    pub fn render(&self, o: &Object) -> String {
        let mut doc = Map::new();
        doc.insert("format".into(), json!(FORMAT_VERSION));
        if let Value::Object(body) = self.body(o) {
            doc.extend(body);
        }
        pretty(&Value::Object(doc))
    }

    fn sub(&self, o: &Object) -> Value {
        match self.refs.iter().find(|(r, _)| r == o) {
            Some((_, path)) => Value::String(path.clone()),
            None => self.body(o),
        }
    }

    fn body(&self, o: &Object) -> Value {
        match o {
            Object::Algebra(a) => {
                let n = a.dim();
                let mut m = json!({
                    "kind": "algebra",
                    "name": a.name(),
                    "dim": n,
                    "basis_names": a.basis_names(),
                    "unit": a.unit().iter().map(Scalar::to_string).collect::<Vec<_>>(),
                    "mul": write_table(a.structure_constants(), [n, n, n]),
                });
                if let Some(g) = a.generator() {
                    m["generator"] = json!(g);
                }
                m
            }
            Object::Lie(l) => {
                let n = l.dim();
                json!({
                    "kind": "lie",
                    "name": l.name(),
                    "dim": n,
                    "basis_names": l.basis_names(),
                    "bracket": write_table(l.structure_constants(), [n, n, n]),
                })
            }
            Object::Anchored(a) => self.anchored_body(a, "anchored"),
            Object::LieRinehart(l) => {
                let mut m = self.anchored_body(l.anchored(), "lie_rinehart");
                let (a, n) = (l.base().dim(), l.dim());
                m["action"] = write_table(l.action_constants(), [a, n, n]);
                m
            }
            Object::ARing(phi) => json!({
                "kind": "a_ring",
                "base": self.sub(&Object::Algebra(phi.source().clone())),
                "ring": self.sub(&Object::Algebra(phi.target().clone())),
                "map": write_linear_map(phi.matrix()),
            }),
            Object::Module(mf) => {
                let md = &mf.module;
                let (a, d) = (md.base().dim(), md.dim());
                let mut m = json!({
                    "kind": "module",
                    "name": md.name(),
                    "base": self.sub(&Object::Algebra(md.base().clone())),
                    "dim": d,
                    "basis_names": md.basis_names(),
                    "left": write_table(md.left_constants(), [a, d, d]),
                });
                if let Some(r) = md.right_constants() {
                    m["right"] = write_table(r, [a, d, d]);
                }
                if let Some((lie, rho)) = &mf.action {
                    m["lie"] = self.sub(&Object::from(lie.clone()));
                    m["rho"] = write_quadruple_matrix(rho, d);
                }
                m
            }
            Object::Morphism(mf) => json!({
                "kind": "morphism",
                "source": self.sub(&mf.source),
                "target": self.sub(&mf.target),
                "map": write_linear_map(&mf.matrix),
            }),
        }
    }

    fn anchored_body(&self, a: &AnchoredLieAlgebra, kind: &str) -> Value {
        json!({
            "kind": kind,
            "base": self.sub(&Object::Algebra(a.base().clone())),
            "lie": self.sub(&Object::Lie(a.lie().clone())),
            "anchor": write_quadruple_matrix(a.anchor(), a.base().dim()),
        })
    }
}

fn write_table(t: &[Scalar], shape: [usize; 3]) -> Value {
    let mut out = Vec::new();
    for i in 0..shape[0] {
        for j in 0..shape[1] {
            for k in 0..shape[2] {
                let c = &t[(i * shape[1] + j) * shape[2] + k];
                if !c.is_zero() {
                    out.push(json!([i, j, k, c.to_string()]));
                }
            }
        }
    }
    Value::Array(out)
}

fn write_quadruple_matrix(m: &Matrix, d: usize) -> Value {
    let mut out = Vec::new();
    for x in 0..m.cols() {
        for mm in 0..d {
            for k in 0..d {
                let c = &m[(k * d + mm, x)];
                if !c.is_zero() {
                    out.push(json!([x, mm, k, c.to_string()]));
                }
            }
        }
    }
    Value::Array(out)
}

fn write_linear_map(m: &Matrix) -> Value {
    let mut out = Vec::new();
    for j in 0..m.cols() {
        for i in 0..m.rows() {
            let c = &m[(i, j)];
            if !c.is_zero() {
                out.push(json!([j, i, c.to_string()]));
            }
        }
    }
    Value::Array(out)
}

/// Indented JSON with a trailing newline; arrays of scalars stay on one line
/// so that table entries read as tuples.
pub fn pretty(v: &Value) -> String {
    fn go(v: &Value, indent: usize, out: &mut String) {
        let pad = "  ".repeat(indent + 1);
        match v {
            Value::Object(m) if !m.is_empty() => {
                out.push_str("{\n");
                for (i, (k, x)) in m.iter().enumerate() {
                    out.push_str(&pad);
                    out.push_str(&Value::String(k.clone()).to_string());
                    out.push_str(": ");
                    go(x, indent + 1, out);
                    out.push_str(if i + 1 < m.len() { ",\n" } else { "\n" });
                }
                out.push_str(&"  ".repeat(indent));
                out.push('}');
            }
            Value::Array(a) if a.iter().any(|x| x.is_array() || x.is_object()) => {
                out.push_str("[\n");
                for (i, x) in a.iter().enumerate() {
                    out.push_str(&pad);
                    go(x, indent + 1, out);
                    out.push_str(if i + 1 < a.len() { ",\n" } else { "\n" });
                }
                out.push_str(&"  ".repeat(indent));
                out.push(']');
            }
            Value::Array(a) => {
                let items: Vec<String> = a.iter().map(Value::to_string).collect();
                out.push_str(&format!("[{}]", items.join(", ")));
            }
            scalar => out.push_str(&scalar.to_string()),
        }
    }
    let mut out = String::new();
    go(v, 0, &mut out);
    out.push('\n');
    out
}

/// Renders `o` self-contained, with every sub-object inlined.
pub fn render(o: &Object) -> String {
    Writer::new().render(o)
}
