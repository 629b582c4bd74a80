use std::fs;
use std::io::{self, Write};
use std::path::Path;

use num_complex::Complex64;
use ptolemy_core::algebra::MonomialOrder;
use ptolemy_core::avariety::{compute_avariety, weil_symmetry_report, AVarietyOptions};
use ptolemy_core::groebner::{groebner_basis, Budget};
use ptolemy_core::holonomy::{
    eigenvalues, holonomy, matrix_json, natural_cocycle, trace, Holonomy,
};
use ptolemy_core::ideal::{
    build_ideal, elimination_order, parse_json, reduce_and_saturate, Format, IdealBundle, Mode,
    Role,
};
use ptolemy_core::numeric::{solve_point, NumericPoint};
use ptolemy_core::shapes::{
    check_gluing_equations, dehn_report, numeric_shapes, shape_relation_residual, symbolic_gluing,
    Certificate, SymbolicCoordinates,
};
use ptolemy_core::triangulation::{
    abelianization, build_point_classes, edge_cycles, face_pairing_presentation, PointClasses,
    Presentation, Triangulation,
};
use ptolemy_core::Error;
use serde_json::{json, Value};

use crate::{
    ApolyArgs, BudgetArgs, Cli, Command, DehnArgs, Failure, FormatArg, GbArgs, GenerateArgs,
    HolonomyArgs, InputArgs, ModeArg, PinArgs, ReductionArgs, ShapesArgs, Stage,
};

pub fn run(cli: &Cli, config: &Value) -> Result<(), Failure> {
    let out = Output {
        json: cli.json,
        config,
    };
    match &cli.command {
        Command::Generate(a) => generate(a, config),
        Command::Validate(a) => validate(a, &out),
        Command::Gb(a) => gb(a, &out),
        Command::Apoly(a) => apoly(a, &out),
        Command::Shapes(a) => shapes(a, &out),
        Command::Dehn(a) => dehn(a, &out),
        Command::Holonomy(a) => holonomy_cmd(a, &out),
    }
}

/// Prints either `{config, result}` or the config header followed by text.
struct Output<'a> {
    json: bool,
    config: &'a Value,
}

impl Output<'_> {
    fn emit(&self, text: &str, result: Value) {
        let body = if self.json {
            let doc = json!({ "config": self.config, "result": result });
            format!("{}\n", serde_json::to_string_pretty(&doc).expect("json"))
        } else {
            format!("# config {}\n{text}", self.config)
        };
        print_out(&body);
    }
}

fn print_out(text: &str) {
    let mut stdout = io::stdout().lock();
    if let Err(e) = stdout
        .write_all(text.as_bytes())
        .and_then(|_| stdout.flush())
    {
        // a closed pipe means the reader has what it wanted
        if e.kind() != io::ErrorKind::BrokenPipe {
            log::error!("cannot write output: {e}");
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))
        .stage("input")
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text)
        .map_err(|e| Error::Invalid(format!("cannot write {}: {e}", path.display())))
        .stage("output")
}

fn load(input: &InputArgs) -> Result<Triangulation, Failure> {
    let tri = Triangulation::parse(&read(&input.input)?).stage("parse")?;
    match input.n {
        Some(n) => tri.with_n(n).stage("parse"),
        None => Ok(tri),
    }
}

fn mode(m: ModeArg) -> Mode {
    match m {
        ModeArg::Standard => Mode::Standard,
        ModeArg::Enhanced => Mode::Enhanced,
    }
}

fn fix_names(r: &ReductionArgs) -> Vec<String> {
    r.fixes
        .iter()
        .map(|f| match f.split_once('=') {
            Some((name, _)) => name.trim().to_string(),
            None => f.trim().to_string(),
        })
        .collect()
}

fn check_fixes(r: &ReductionArgs) -> Result<(), Failure> {
    for f in &r.fixes {
        if let Some((_, v)) = f.split_once('=') {
            if v.trim() != "1" {
                return Err(Error::Invalid(format!(
                    "`--fix {f}`: coordinates can only be fixed to 1"
                )))
                .stage("reduce");
            }
        }
    }
    Ok(())
}

/// Builds the ideal and, when fixes are given or `saturate` is set, appends
/// the fixes and the saturation witnesses.
fn bundle_for(
    tri: &Triangulation,
    m: Mode,
    r: &ReductionArgs,
    saturate: bool,
) -> Result<(IdealBundle, PointClasses), Failure> {
    check_fixes(r)?;
    let (raw, classes) = build_ideal(tri, m).stage("ideal")?;
    let fixes = fix_names(r);
    if fixes.is_empty() && !saturate {
        return Ok((raw, classes));
    }
    let b =
        reduce_and_saturate(&raw, &classes, tri, &fixes, r.saturation.into()).stage("reduce")?;
    Ok((b, classes))
}

fn budget(b: &BudgetArgs) -> Budget {
    b.into()
}

fn generate(a: &GenerateArgs, config: &Value) -> Result<(), Failure> {
    let tri = load(&a.input)?;
    let (bundle, _) = bundle_for(&tri, mode(a.mode), &a.reduction, a.saturate)?;
    let format = match a.format {
        FormatArg::Plain => Format::Plain,
        FormatArg::Magma => Format::Magma,
        FormatArg::Singular => Format::Singular,
        FormatArg::Json => Format::Json,
    };
    let body = bundle.export(format);
    let text = match a.format {
        FormatArg::Json => {
            let mut doc: Value = serde_json::from_str(&body).stage("export")?;
            doc["config"] = config.clone();
            serde_json::to_string_pretty(&doc).expect("json") + "\n"
        }
        FormatArg::Plain => format!("# config {config}\n{body}"),
        FormatArg::Magma | FormatArg::Singular => format!("// config {config}\n{body}"),
    };
    match &a.out {
        Some(path) => {
            write(path, &text)?;
            log::info!(
                "wrote {} generators to {}",
                bundle.generators.len(),
                path.display()
            );
            Ok(())
        }
        None => {
            print_out(&text);
            Ok(())
        }
    }
}

fn presentation_text(p: &Presentation) -> String {
    let gens: Vec<&str> = p.generators.iter().map(|&g| p.labels[g].as_str()).collect();
    let rels: Vec<String> = p.relators.iter().map(|r| p.render(r)).collect();
    format!("<{} | {}>", gens.join(", "), rels.join(", "))
}

fn abelian_text(rank: usize, torsion: &[i64]) -> String {
    let mut parts = Vec::new();
    match rank {
        0 => {}
        1 => parts.push("Z".to_string()),
        r => parts.push(format!("Z^{r}")),
    }
    parts.extend(torsion.iter().map(|t| format!("Z/{t}")));
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn validate(a: &InputArgs, out: &Output) -> Result<(), Failure> {
    let tri = load(a)?;
    let classes = build_point_classes(&tri).stage("classes")?;
    let cycles = edge_cycles(&tri);
    let names = tri.eigen_names(true);
    let products: Vec<String> = cycles
        .iter()
        .map(|c| c.product(&tri).render(&names))
        .collect();
    let trivial = cycles.iter().all(|c| c.product(&tri).is_one());
    let pres = face_pairing_presentation(&tri).stage("presentation")?;
    let (rank, torsion) = abelianization(&pres);
    let mut text = format!(
        "{}: {} tetrahedra, {} cusp(s), n = {}\n",
        tri.name,
        tri.tetrahedra,
        tri.cusp_count(),
        tri.n
    );
    text += &format!(
        "{} point classes over {} points, {} cycle checks passed\n",
        classes.classes.len(),
        classes.total_members(),
        classes.cycle_checks
    );
    if trivial {
        text += &format!("{} edge classes, cycle products trivial\n", cycles.len());
    } else {
        text += &format!(
            "{} edge classes, cycle products: {}\n",
            cycles.len(),
            products.join(", ")
        );
    }
    text += &format!("presentation {}\n", presentation_text(&pres));
    text += &format!("abelianization {}\n", abelian_text(rank, &torsion));
    out.emit(
        &text,
        json!({
            "name": tri.name,
            "tetrahedra": tri.tetrahedra,
            "cusps": tri.cusp_count(),
            "n": tri.n,
            "point_classes": classes.classes.len(),
            "cycle_checks": classes.cycle_checks,
            "edge_classes": cycles.len(),
            "cycle_products": products,
            "cycle_products_trivial": trivial,
            "generators": pres.generators.iter().map(|&g| &pres.labels[g]).collect::<Vec<_>>(),
            "relators": pres.relators.iter().map(|r| pres.render(r)).collect::<Vec<_>>(),
            "abelianization": { "rank": rank, "torsion": torsion },
        }),
    );
    if trivial {
        Ok(())
    } else {
        Err(Error::Triangulation(format!(
            "edge cycle products are not trivial: {}",
            products.join(", ")
        )))
        .stage("validate")
    }
}

fn gb(a: &GbArgs, out: &Output) -> Result<(), Failure> {
    let text = read(&a.input.input)?;
    let doc: Value = serde_json::from_str(&text).stage("parse")?;
    let bundle = if doc.get("generators").is_some() && doc.get("variables").is_some() {
        if !a.reduction.fixes.is_empty() {
            log::warn!("--fix is ignored for an ideal file");
        }
        parse_json(&text).stage("parse")?
    } else {
        let tri = load(&a.input)?;
        bundle_for(&tri, mode(a.mode), &a.reduction, false)?.0
    };
    let order = match a.order.as_str() {
        "elim" => elimination_order(&bundle),
        spec => MonomialOrder::parse(spec, &bundle.registry).stage("order")?,
    };
    let basis = groebner_basis(&bundle.generators, &order, &budget(&a.budget)).stage("groebner")?;
    let audit = basis.s_pair_audit();
    let eliminated = order.eliminated().to_vec();
    let free: Vec<String> = if eliminated.is_empty() {
        Vec::new()
    } else {
        basis
            .free_of(&eliminated)
            .iter()
            .map(|p| p.to_string())
            .collect()
    };
    let polys: Vec<String> = basis.polys.iter().map(|p| p.to_string()).collect();
    let mut text = format!(
        "# order {}\n# {} polynomials, reduced: {}, s-pair audit: {}/{} zero\n",
        order.describe(&bundle.registry),
        polys.len(),
        basis.is_reduced(),
        audit.pairs_checked - audit.failures.len(),
        audit.pairs_checked
    );
    for p in &polys {
        text += p;
        text.push('\n');
    }
    if !eliminated.is_empty() {
        text += &format!("# elimination ideal: {} generators\n", free.len());
        for p in &free {
            text += &format!("{p}\n");
        }
    }
    out.emit(
        &text,
        json!({
            "order": order.describe(&bundle.registry),
            "basis": polys,
            "elimination_ideal": free,
            "reduced": basis.is_reduced(),
            "s_pair_audit": audit,
            "stats": basis.stats,
        }),
    );
    if audit.passed() {
        Ok(())
    } else {
        Err(Error::Invalid(format!(
            "{} S-pairs do not reduce to zero",
            audit.failures.len()
        )))
        .stage("groebner")
    }
}

fn write_scripts(dir: &Path, name: &str, bundle: &IdealBundle) -> Result<Vec<String>, Failure> {
    fs::create_dir_all(dir)
        .map_err(|e| Error::Invalid(format!("cannot create {}: {e}", dir.display())))
        .stage("output")?;
    let mut written = Vec::new();
    for (ext, format) in [("magma", Format::Magma), ("sing", Format::Singular)] {
        let path = dir.join(format!("{name}_n{}.{ext}", bundle.n));
        write(&path, &bundle.export(format))?;
        written.push(path.display().to_string());
    }
    Ok(written)
}

fn apoly(a: &ApolyArgs, out: &Output) -> Result<(), Failure> {
    check_fixes(&a.reduction)?;
    let tri = load(&a.input)?;
    let opts = AVarietyOptions {
        fixes: fix_names(&a.reduction),
        saturation: a.reduction.saturation.into(),
        budget: budget(&a.budget),
        allow_unreduced: a.allow_unreduced,
    };
    let result = compute_avariety(&tri, &opts).stage("avariety")?;
    if let Some(err) = result.failure {
        let dir = a.emit_scripts.clone().unwrap_or_else(|| ".".into());
        let scripts = write_scripts(&dir, &tri.name, &result.bundle)?;
        let text = format!(
            "# elimination stopped on its budget\n# scripts written: {}\n",
            scripts.join(", ")
        );
        out.emit(
            &text,
            json!({ "status": "budget-exceeded", "error": err.to_string(), "scripts": scripts }),
        );
        return Err(err).stage("groebner");
    }
    let scripts = match &a.emit_scripts {
        Some(dir) => write_scripts(dir, &tri.name, &result.bundle)?,
        None => Vec::new(),
    };
    let generators: Vec<String> = result.generators.iter().map(|g| g.to_string()).collect();
    let candidate = result.candidate.as_ref().map(|c| c.to_string());
    let weil = if result.candidate.is_some() {
        Some(weil_symmetry_report(&result).stage("avariety")?)
    } else {
        None
    };
    let audit = result.basis.as_ref().map(|b| b.s_pair_audit());
    let mut text = String::new();
    if let Some(c) = &candidate {
        text += &format!("{c}\n");
    }
    text += &format!("# {}\n", result.dimension_note);
    text += &format!("# eliminated generators ({}):\n", generators.len());
    for (g, s) in generators.iter().zip(&result.support) {
        text += &format!("#   {g}    [{}]\n", s.join(", "));
    }
    for b in &result.back_substitution {
        text += &format!(
            "# {} = ({}) / ({})\n",
            b.variable, b.numerator, b.denominator
        );
    }
    if let Some(w) = &weil {
        text += &format!("# weil symmetry: {}\n", w.symmetry);
        text += &format!("# with l -> 1/l: {}\n", w.longitude_flipped);
    }
    text += "# components missed by the elimination image cannot be detected here\n";
    for s in &scripts {
        text += &format!("# wrote {s}\n");
    }
    out.emit(
        &text,
        json!({
            "status": if result.is_empty() { "empty" } else { "ok" },
            "candidate": candidate,
            "generators": generators,
            "support": result.support,
            "back_substitution": result.back_substitution,
            "dimension_note": result.dimension_note,
            "weil_symmetry": weil,
            "basis_size": result.basis.as_ref().map(|b| b.polys.len()),
            "stats": result.basis.as_ref().map(|b| &b.stats),
            "s_pair_audit": audit,
            "scripts": scripts,
        }),
    );
    Ok(())
}

fn pins_text(pins: &PinArgs) -> String {
    pins.pins
        .iter()
        .map(|(n, z)| format!("{n}={}", cfmt(*z)))
        .collect::<Vec<_>>()
        .join(" ")
}

fn cfmt(z: Complex64) -> String {
    // keep rounding noise from printing as -0.000000000000
    let clean = |x: f64| if x.abs() < 5e-13 { 0.0 } else { x };
    format!("{:.12}{:+.12}i", clean(z.re), clean(z.im))
}

fn cjson(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

/// Points from a point file, or solved from the pins. Without an explicit
/// fix the first Ptolemy coordinate is set to one: the diagonal action moves
/// every point there without changing shapes or holonomy.
fn numeric_points(
    tri: &Triangulation,
    m: Mode,
    r: &ReductionArgs,
    pins: &PinArgs,
    point: Option<&Path>,
    b: &BudgetArgs,
) -> Result<(IdealBundle, PointClasses, Vec<NumericPoint>), Failure> {
    if let Some(path) = point {
        let (bundle, classes) = bundle_for(tri, m, r, !r.fixes.is_empty())?;
        let p = NumericPoint::from_json(&read(path)?, &bundle).stage("point")?;
        return Ok((bundle, classes, vec![p]));
    }
    let mut r2 = ReductionArgs {
        fixes: r.fixes.clone(),
        saturation: r.saturation,
    };
    if r2.fixes.is_empty() {
        let (raw, _) = build_ideal(tri, m).stage("ideal")?;
        let first = raw.names_with(Role::Ptolemy)[0].clone();
        log::info!("no fix given; fixing {first} = 1");
        r2.fixes.push(first);
    }
    let (bundle, classes) = bundle_for(tri, m, &r2, true)?;
    let pts = solve_point(&bundle, &pins.pins, &budget(b)).stage("solve")?;
    if pts.is_empty() {
        return Err(Error::Numeric(format!(
            "no point with nonzero coordinates at {}",
            pins_text(pins)
        )))
        .stage("solve");
    }
    Ok((bundle, classes, pts))
}

fn shapes(a: &ShapesArgs, out: &Output) -> Result<(), Failure> {
    let tri = load(&a.input)?;
    if a.symbolic {
        let classes = build_point_classes(&tri).stage("classes")?;
        let sc = SymbolicCoordinates::new(&tri, &classes, true).stage("shapes")?;
        let (sa, certs) = sc.shapes();
        let names = sc.registry.names();
        let gluing = symbolic_gluing(&classes, &sa, names.len());
        let mut text = String::new();
        for s in &sa.shapes {
            text += &format!(
                "tet {} s {}: z = {}, z' = {}, z'' = {}\n",
                s.tet,
                s.s.iter().map(|d| d.to_string()).collect::<String>(),
                s.z.render(names),
                s.z_prime.render(names),
                s.z_dprime.render(names)
            );
        }
        for (class, f) in &gluing {
            text += &format!("gluing {class}: {}\n", f.render(names));
        }
        text += &serde_json::to_string_pretty(&certs).expect("json");
        text.push('\n');
        out.emit(
            &text,
            json!({
                "certificates": certs,
                "gluing": gluing.iter().map(|(c, f)| (c, f.render(names))).collect::<Vec<_>>(),
            }),
        );
        return Ok(());
    }
    let (bundle, classes, points) = numeric_points(
        &tri,
        mode(a.mode),
        &a.reduction,
        &a.pins,
        a.point.as_deref(),
        &a.budget,
    )?;
    let mut text = String::new();
    let mut results = Vec::new();
    let mut worst: f64 = 0.0;
    for (i, p) in points.iter().enumerate() {
        let sa = numeric_shapes(&tri, &classes, &bundle, p).stage("shapes")?;
        let rel = shape_relation_residual(&sa);
        let gl = check_gluing_equations(&classes, &sa);
        let gmax = gl.iter().map(|g| g.residual).fold(0.0, f64::max);
        worst = worst.max(p.residual).max(rel).max(gmax);
        text += &format!(
            "point {i}: ideal residual {:.2e}, shape relations {:.2e}, gluing {:.2e}\n",
            p.residual, rel, gmax
        );
        for s in &sa.shapes {
            text += &format!(
                "  tet {} s {}: z = {}  |z| = {:.12}  arg z = {:.12}\n",
                s.tet,
                s.s.iter().map(|d| d.to_string()).collect::<String>(),
                cfmt(s.z),
                s.z.norm(),
                s.z.arg()
            );
        }
        results.push(json!({
            "point": serde_json::from_str::<Value>(&p.to_json(&bundle)).expect("json"),
            "ideal_residual": p.residual,
            "shapes": sa.shapes.iter().map(|s| json!({
                "tet": s.tet, "s": s.s,
                "z": cjson(s.z), "z_prime": cjson(s.z_prime), "z_dprime": cjson(s.z_dprime),
            })).collect::<Vec<_>>(),
            "shape_relation_residual": rel,
            "gluing": gl,
        }));
    }
    out.emit(&text, json!({ "points": results, "max_residual": worst }));
    if worst > a.tolerance {
        return Err(Error::Numeric(format!(
            "residual {worst:.2e} exceeds tolerance {:.0e}",
            a.tolerance
        )))
        .stage("shapes");
    }
    Ok(())
}

fn dehn(a: &DehnArgs, out: &Output) -> Result<(), Failure> {
    let tri = load(&a.input)?;
    let (bundle, classes) = build_ideal(&tri, mode(a.mode)).stage("ideal")?;
    let certs: Option<Vec<Certificate>> = match &a.certificates {
        Some(path) => {
            // a bare list, or the document written by `--json shapes --symbolic`
            let mut v: Value = serde_json::from_str(&read(path)?).stage("parse")?;
            if let Some(inner) = v.pointer_mut("/result/certificates") {
                v = inner.take();
            }
            Some(serde_json::from_value(v).stage("parse")?)
        }
        None => None,
    };
    let report =
        dehn_report(&tri, &classes, &bundle, certs.as_deref(), budget(&a.budget)).stage("dehn")?;
    let mut text = String::new();
    for c in &report.certificates {
        text += &format!(
            "tet {} s {}: z = {}, 1 - z = {} ({:?})\n",
            c.certificate.tet,
            c.certificate
                .s
                .iter()
                .map(|d| d.to_string())
                .collect::<String>(),
            c.certificate.z,
            c.certificate.one_minus_z,
            c.membership
        );
    }
    text += &format!(
        "primed:   lhs {}\n          rhs {}\n          {:?}\n",
        report.lhs_primed, report.rhs_primed, report.verdict_primed
    );
    text += &format!(
        "unprimed: lhs {}\n          rhs {}\n          {:?}\n",
        report.lhs, report.rhs, report.verdict
    );
    out.emit(&text, serde_json::to_value(&report).expect("json"));
    Ok(())
}

fn holonomy_json(h: &Holonomy, words: &[(String, ptolemy_core::holonomy::M2)]) -> Value {
    let p = &h.presentation;
    json!({
        "generators": p.generators.iter().map(|&g| json!({
            "label": p.labels[g],
            "matrix": matrix_json(&h.images[g]),
            "trace": cjson(trace(&h.images[g])),
        })).collect::<Vec<_>>(),
        "relators": p.relators.iter().map(|r| p.render(r)).collect::<Vec<_>>(),
        "relator_residual": h.relator_residual,
        "det_residual": h.det_residual,
        "corner_spread": h.corner_spread,
        "word_spread": h.word_spread,
        "cocycle": {
            "hexagons": h.cocycle.hexagons,
            "triangles": h.cocycle.triangles,
            "long_squares": h.cocycle.long_squares,
            "short_squares": h.cocycle.short_squares,
            "polygons": h.cocycle.polygons,
        },
        "peripheral": h.peripheral.iter().map(|c| {
            let mut v = serde_json::to_value(c).expect("json");
            v["mu_eigenvalues"] = json!(eigenvalues(&c.mu).map(cjson));
            v["lambda_eigenvalues"] = json!(eigenvalues(&c.lambda).map(cjson));
            v
        }).collect::<Vec<_>>(),
        "words": words.iter().map(|(w, m)| json!({
            "word": w, "matrix": matrix_json(m), "trace": cjson(trace(m)),
        })).collect::<Vec<_>>(),
    })
}

fn holonomy_cmd(a: &HolonomyArgs, out: &Output) -> Result<(), Failure> {
    let tri = load(&a.input)?;
    if tri.n != 2 {
        return Err(Error::Invalid(format!(
            "holonomy is built for n = 2 only, not n = {}",
            tri.n
        )))
        .stage("holonomy");
    }
    let (bundle, classes, points) = numeric_points(
        &tri,
        Mode::Enhanced,
        &a.reduction,
        &a.pins,
        a.point.as_deref(),
        &a.budget,
    )?;
    let mut text = String::new();
    let mut results = Vec::new();
    for (i, p) in points.iter().enumerate() {
        let co = natural_cocycle(&tri, &classes, &bundle, p).stage("cocycle")?;
        let h = holonomy(&tri, &co, a.tolerance).stage("holonomy")?;
        let words = a
            .words
            .iter()
            .map(|w| Ok((w.clone(), h.word(w)?)))
            .collect::<ptolemy_core::Result<Vec<_>>>()
            .stage("holonomy")?;
        text += &format!(
            "point {i}: relators {:.2e}, det {:.2e}, cocycle {:.2e}\n",
            h.relator_residual,
            h.det_residual,
            h.cocycle.max()
        );
        let pr = &h.presentation;
        for &g in &pr.generators {
            let m = &h.images[g];
            text += &format!(
                "  {} = [[{}, {}], [{}, {}]]  tr {}\n",
                pr.labels[g],
                cfmt(m[(0, 0)]),
                cfmt(m[(0, 1)]),
                cfmt(m[(1, 0)]),
                cfmt(m[(1, 1)]),
                cfmt(trace(m))
            );
        }
        for c in &h.peripheral {
            let [e0, e1] = eigenvalues(&c.mu);
            let [f0, f1] = eigenvalues(&c.lambda);
            text += &format!(
                "  cusp {}: mu = {}, lambda = {}, eigenvalues mu {{{}, {}}} lambda {{{}, {}}}, commutator {:.2e}\n",
                c.cusp, c.mu_word, c.lambda_word,
                cfmt(e0), cfmt(e1), cfmt(f0), cfmt(f1), c.commutator
            );
        }
        for (w, m) in &words {
            text += &format!("  word {w}: tr {}\n", cfmt(trace(m)));
        }
        results.push(json!({
            "point": serde_json::from_str::<Value>(&p.to_json(&bundle)).expect("json"),
            "holonomy": holonomy_json(&h, &words),
        }));
    }
    out.emit(&text, json!({ "points": results }));
    Ok(())
}
