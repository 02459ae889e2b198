//! The `orbikit` subcommands, run in-process.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde_json::{json, Value as Json};
use sha2::{Digest, Sha256};

use orbikit::category::{validate_category, FiniteCategory};
use orbikit::complexes::{grothendieck, try_into_groupoid};
use orbikit::group::GroupDesc;
use orbikit::groupoid::FiniteGroupoid;
use orbikit::gspaces::{
    covering_from_gxset, fiber_functor, gxset_isomorphism, invariant_sections, pi1, stalk_derived_q, CohomologyOptions,
    GxSet,
};
use orbikit::inertia::{bredon_h0, center_dimension, convolution_algebra, inertia_groupoid, k0_rank};
use orbikit::linalg::abelian::AbelianGroup;
use orbikit::morphisms::{is_equivalence, morita_equivalent, MoritaVerdict};
use orbikit::nerve::homology;

use crate::gspec::{as_groupoid, parse_gspec_bytes, Diagnostic, DiagnosticKind, GspecDocument, Value};
use crate::report::{InputDigest, ReportDocument, Status, SCHEMA};

/// Largest fundamental group whose subgroup lattice `cover` will list.
pub const MAX_COVER_GROUP: usize = 128;

#[derive(Parser, Debug)]
#[command(name = "orbikit", version, about = "Finite groupoids and orbifold invariants from GSPEC files")]
struct Cli {
    /// print the versioned JSON report instead of text
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Parse and validate every declaration
    Validate { file: PathBuf },
    /// Orbits and isotropy groups
    Info { file: PathBuf, name: String },
    /// Decide Morita equivalence of two groupoids
    Morita { file: PathBuf, left: String, right: String },
    /// Integral homology of the nerve
    Homology {
        file: PathBuf,
        name: String,
        #[arg(long, default_value_t = 3)]
        max_degree: usize,
    },
    /// The inertia groupoid and its orbits
    Inertia { file: PathBuf, name: String },
    /// Convolution algebra and its degree-0 invariants
    Convolution { file: PathBuf, name: String },
    /// Grothendieck construction of a complex of groups
    Groth { file: PathBuf, name: String },
    /// Fiber of a G-space, or the connected covers of a groupoid
    Cover {
        file: PathBuf,
        name: String,
        #[arg(long)]
        object: String,
    },
    /// Cohomology of the isotropy groups with coefficients in a G-module
    Cohomology {
        file: PathBuf,
        name: String,
        #[arg(long)]
        module: String,
        #[arg(long)]
        degree: usize,
    },
}

impl Cmd {
    fn file(&self) -> &PathBuf {
        match self {
            Cmd::Validate { file }
            | Cmd::Info { file, .. }
            | Cmd::Morita { file, .. }
            | Cmd::Homology { file, .. }
            | Cmd::Inertia { file, .. }
            | Cmd::Convolution { file, .. }
            | Cmd::Groth { file, .. }
            | Cmd::Cover { file, .. }
            | Cmd::Cohomology { file, .. } => file,
        }
    }
}

enum Failure {
    Usage(String),
    Parse(String, Diagnostic),
    Domain(String),
}

type Run<T> = Result<T, Failure>;

/// A computed payload with its text rendering.
struct Answer {
    result: Json,
    text: String,
}

/// Runs one invocation. `argv[0]` is the program name.
pub fn run_command<I, T>(argv: I) -> (ReportDocument, i32)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let command: Vec<String> = argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let json = command.iter().any(|a| a == "--json");
    let mut report = ReportDocument {
        schema: SCHEMA,
        command,
        inputs: Vec::new(),
        status: Status::Ok,
        exit_code: 0,
        result: None,
        diagnostic: None,
        message: None,
        text: String::new(),
        json,
    };
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let shown = e.render().to_string();
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                report.text = shown;
                report.message = Some(report.text.trim_end().to_string());
                return (report, 0);
            }
            report.status = Status::Error;
            report.exit_code = 2;
            report.message = Some(shown.trim_end().to_string());
            report.text = shown;
            return (report, 2);
        }
    };
    let outcome = execute(&cli.cmd, &mut report.inputs);
    match outcome {
        Ok(a) => {
            report.result = Some(a.result);
            report.text = a.text;
        }
        Err(f) => {
            let (status, text) = match f {
                Failure::Usage(m) => {
                    report.message = Some(m.clone());
                    (Status::Error, format!("error: {m}\n"))
                }
                Failure::Domain(m) => {
                    report.message = Some(m.clone());
                    (Status::Invalid, format!("failed: {m}\n"))
                }
                Failure::Parse(path, d) => {
                    let status = if d.kind == DiagnosticKind::Semantic { Status::Invalid } else { Status::Error };
                    let text = format!("{path}:{d}\n");
                    report.diagnostic = Some(d);
                    (status, text)
                }
            };
            report.status = status;
            report.text = text;
        }
    }
    report.exit_code = report.status.exit_code();
    let code = report.exit_code;
    (report, code)
}

fn load(path: &PathBuf, inputs: &mut Vec<InputDigest>) -> Run<GspecDocument> {
    let shown = path.display().to_string();
    let bytes = std::fs::read(path).map_err(|e| Failure::Usage(format!("cannot read {shown}: {e}")))?;
    inputs.push(InputDigest {
        path: shown.clone(),
        sha256: hex::encode(Sha256::digest(&bytes)),
    });
    parse_gspec_bytes(&bytes).map_err(|d| Failure::Parse(shown, d))
}

fn lookup<'a>(doc: &'a GspecDocument, name: &str) -> Run<&'a Value> {
    doc.get(name).ok_or_else(|| Failure::Usage(format!("no declaration named `{name}`")))
}

fn groupoid_of(doc: &GspecDocument, name: &str) -> Run<Arc<FiniteGroupoid>> {
    let v = lookup(doc, name)?;
    as_groupoid(v).map_err(|e| match v {
        Value::GModule(_) | Value::Hom(_) => Failure::Usage(format!("`{name}`: {e}")),
        _ => Failure::Domain(format!("`{name}`: {e}")),
    })
}

/// Groupoids give their own category, complexes their Grothendieck category.
fn category_of(doc: &GspecDocument, name: &str) -> Run<FiniteCategory> {
    match lookup(doc, name)? {
        Value::Complex(c) => grothendieck(c).map_err(|e| Failure::Domain(e.to_string())),
        _ => Ok(groupoid_of(doc, name)?.category().clone()),
    }
}

fn object(g: &FiniteGroupoid, name: &str) -> Run<usize> {
    g.object_index(name).ok_or_else(|| Failure::Usage(format!("no object named `{name}`")))
}

fn execute(cmd: &Cmd, inputs: &mut Vec<InputDigest>) -> Run<Answer> {
    let doc = load(cmd.file(), inputs)?;
    match cmd {
        Cmd::Validate { .. } => Ok(validate(&doc)),
        Cmd::Info { name, .. } => info(&*groupoid_of(&doc, name)?),
        Cmd::Morita { left, right, .. } => morita(&*groupoid_of(&doc, left)?, &*groupoid_of(&doc, right)?),
        Cmd::Homology { name, max_degree, .. } => nerve_homology(&category_of(&doc, name)?, *max_degree),
        Cmd::Inertia { name, .. } => inertia(&groupoid_of(&doc, name)?),
        Cmd::Convolution { name, .. } => convolution(&groupoid_of(&doc, name)?),
        Cmd::Groth { name, .. } => groth(&doc, name),
        Cmd::Cover { name, object, .. } => cover(&doc, name, object),
        Cmd::Cohomology { name, module, degree, .. } => cohomology(&doc, name, module, *degree),
    }
}

fn domain<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Domain(e.to_string())
}

fn group_json(k: &GroupDesc) -> Json {
    json!({
        "order": k.order(),
        "abelian": k.is_abelian(),
        "conjugacy_classes": k.conjugacy_classes().len(),
        "element_orders": k.order_profile(),
    })
}

fn abelian_json(degree: usize, a: &AbelianGroup) -> Json {
    json!({ "degree": degree, "group": a.to_string() })
}

fn validate(doc: &GspecDocument) -> Answer {
    let mut decls = Vec::new();
    let mut text = String::new();
    for (name, kind, v) in doc.entries() {
        let summary = match v {
            Value::Group(k) => json!({ "order": k.order(), "abelian": k.is_abelian() }),
            Value::Action(a) => json!({ "group_order": a.group().order(), "points": a.carrier().len() }),
            Value::Groupoid(g) => json!({ "objects": g.num_objects(), "arrows": g.num_arrows(), "orbits": g.num_orbits() }),
            Value::GSpace(e) => json!({ "base_objects": e.base().num_objects(), "points": e.len() }),
            Value::GModule(m) => json!({
                "base_objects": m.base().num_objects(),
                "fibers": m.fibers().iter().map(|f| f.to_string()).collect::<Vec<_>>(),
            }),
            Value::Complex(c) => json!({
                "index_objects": c.index().num_objects(),
                "index_arrows": c.index().num_arrows(),
            }),
            Value::Hom(h) => json!({
                "source_objects": h.source().num_objects(),
                "target_objects": h.target().num_objects(),
                "equivalence": matches!(is_equivalence(h), Ok(Ok(()))),
            }),
        };
        let fields: Vec<String> = summary
            .as_object()
            .expect("summary object")
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        let _ = writeln!(text, "{:<9} {name}: {}", kind.keyword(), fields.join(" "));
        let mut entry = json!({ "name": name, "kind": kind.keyword() });
        entry.as_object_mut().expect("object").extend(summary.as_object().expect("object").clone());
        decls.push(entry);
    }
    let _ = writeln!(text, "ok: {} declaration(s)", decls.len());
    Answer {
        result: json!({ "valid": true, "declarations": decls }),
        text,
    }
}

fn info(g: &FiniteGroupoid) -> Run<Answer> {
    let mut orbits = Vec::new();
    let mut text = format!(
        "{} objects, {} arrows, {} orbit(s){}\n",
        g.num_objects(),
        g.num_arrows(),
        g.num_orbits(),
        if g.is_connected() { ", connected" } else { "" }
    );
    for orbit in g.orbits() {
        let k = g.isotropy(orbit[0]).map_err(domain)?;
        let names: Vec<&str> = orbit.iter().map(|&x| g.object_name(x)).collect();
        let _ = writeln!(
            text,
            "  orbit {{{}}}: isotropy of order {}{}, {} conjugacy class(es)",
            names.join(", "),
            k.order(),
            if k.is_abelian() { " (abelian)" } else { "" },
            k.conjugacy_classes().len()
        );
        orbits.push(json!({
            "objects": names,
            "representative": names[0],
            "isotropy": group_json(&k),
        }));
    }
    Ok(Answer {
        result: json!({
            "objects": g.num_objects(),
            "arrows": g.num_arrows(),
            "connected": g.is_connected(),
            "orbits": orbits,
        }),
        text,
    })
}

fn morita(g: &FiniteGroupoid, h: &FiniteGroupoid) -> Run<Answer> {
    Ok(match morita_equivalent(g, h) {
        MoritaVerdict::Equivalent(matches) => {
            let mut text = String::from("Morita equivalent\n");
            let mut witness = Vec::new();
            for m in &matches {
                let a = g.isotropy(object(g, &m.left)?).map_err(domain)?;
                let b = h.isotropy(object(h, &m.right)?).map_err(domain)?;
                let pairs = m.iso.named_pairs(&a, &b);
                let shown: Vec<String> = pairs.iter().map(|(x, y)| format!("{x}->{y}")).collect();
                let _ = writeln!(text, "  {} ~ {}: {}", m.left, m.right, shown.join(", "));
                witness.push(json!({ "left": m.left, "right": m.right, "isomorphism": pairs }));
            }
            Answer {
                result: json!({ "equivalent": true, "witness": witness }),
                text,
            }
        }
        MoritaVerdict::NotEquivalent(reason) => Answer {
            text: format!("not Morita equivalent: {reason}\n"),
            result: json!({ "equivalent": false, "reason": reason }),
        },
    })
}

fn nerve_homology(c: &FiniteCategory, max_degree: usize) -> Run<Answer> {
    // the core reports degrees below its bound; the flag is inclusive
    let h = homology(c, max_degree.saturating_add(1)).map_err(domain)?;
    let mut text = String::new();
    let mut table = Vec::new();
    for n in 0..h.len() {
        let _ = writeln!(text, "H{n} = {}", h.degree(n));
        table.push(abelian_json(n, h.degree(n)));
    }
    Ok(Answer {
        result: json!({ "max_degree": max_degree, "homology": table }),
        text,
    })
}

fn inertia(g: &Arc<FiniteGroupoid>) -> Run<Answer> {
    let (lam, _) = inertia_groupoid(g).map_err(domain)?;
    let mut per_orbit = Vec::new();
    let mut text = format!(
        "inertia groupoid: {} objects, {} arrows, {} orbit(s)\n",
        lam.num_objects(),
        lam.num_arrows(),
        lam.num_orbits()
    );
    // Λ-orbits over each orbit of G are the conjugacy classes of its isotropy
    for orbit in g.orbits() {
        let classes = g.isotropy(orbit[0]).map_err(domain)?.conjugacy_classes().len();
        let _ = writeln!(text, "  over {}: {} class(es)", g.object_name(orbit[0]), classes);
        per_orbit.push(json!({ "representative": g.object_name(orbit[0]), "classes": classes }));
    }
    Ok(Answer {
        result: json!({
            "objects": lam.num_objects(),
            "arrows": lam.num_arrows(),
            "orbits": lam.num_orbits(),
            "by_orbit": per_orbit,
        }),
        text,
    })
}

fn convolution(g: &Arc<FiniteGroupoid>) -> Run<Answer> {
    let alg = convolution_algebra(g).map_err(domain)?;
    let center = center_dimension(&alg);
    let (lam, _) = inertia_groupoid(g).map_err(domain)?;
    let lambda_orbits = lam.num_orbits();
    let h0 = bredon_h0(g).map_err(domain)?;
    let k0 = k0_rank(g).map_err(domain)?;
    let agree = center == lambda_orbits && center == h0 && center == k0;
    let text = format!(
        "dimension {}\ncenter dimension {center}\ninertia orbits {lambda_orbits}\nBredon H^0 rank {h0}\nK^0 rank {k0}\n{}\n",
        alg.dim(),
        if agree { "all four agree" } else { "MISMATCH" }
    );
    Ok(Answer {
        result: json!({
            "dimension": alg.dim(),
            "center_dimension": center,
            "inertia_orbits": lambda_orbits,
            "bredon_h0": h0,
            "k0_rank": k0,
            "agree": agree,
        }),
        text,
    })
}

fn groth(doc: &GspecDocument, name: &str) -> Run<Answer> {
    let Value::Complex(c) = lookup(doc, name)? else {
        return Err(Failure::Usage(format!("`{name}` is not a complex of groups")));
    };
    let total = grothendieck(c).map_err(domain)?;
    let report = validate_category(&total);
    let valid = report.is_valid();
    let (objects, arrows) = (total.num_objects(), total.num_arrows());
    let pairs = total.composition_table().len();
    let mut hom_sizes = Vec::new();
    let mut text = format!("{objects} objects, {arrows} arrows, {pairs} composable pairs\n");
    for x in 0..objects {
        for y in 0..objects {
            let n = total.hom(x, y).count();
            if n > 0 {
                let _ = writeln!(text, "  |hom({}, {})| = {n}", total.object_name(x), total.object_name(y));
                hom_sizes.push(json!({ "from": total.object_name(x), "to": total.object_name(y), "size": n }));
            }
        }
    }
    let objects_json: Vec<String> = total.objects().to_vec();
    let groupoid = try_into_groupoid(total).is_some();
    let _ = writeln!(
        text,
        "category axioms {}; {}",
        if valid { "hold" } else { "FAIL" },
        if groupoid { "a groupoid" } else { "not a groupoid" }
    );
    let answer = Answer {
        result: json!({
            "objects": objects_json,
            "arrows": arrows,
            "composable_pairs": pairs,
            "hom_sizes": hom_sizes,
            "category_valid": valid,
            "groupoid": groupoid,
        }),
        text,
    };
    if !valid {
        return Err(Failure::Domain(format!("Grothendieck category of `{name}` is not a category")));
    }
    Ok(answer)
}

fn gxset_json(s: &GxSet) -> Json {
    let orbits: Vec<Vec<&str>> = s
        .orbits()
        .iter()
        .map(|o| o.iter().map(|&p| s.points()[p].as_str()).collect())
        .collect();
    let stabilizers: Vec<usize> = s.orbits().iter().map(|o| s.stabilizer(o[0]).len()).collect();
    json!({
        "group_order": s.group().order(),
        "points": s.points(),
        "orbits": orbits,
        "stabilizer_orders": stabilizers,
    })
}

fn cover(doc: &GspecDocument, name: &str, obj: &str) -> Run<Answer> {
    if let Value::GSpace(e) = lookup(doc, name)? {
        let base = e.base();
        let x = object(base, obj)?;
        let fiber = fiber_functor(e, x).map_err(domain)?;
        let rebuilt = covering_from_gxset(base, x, &fiber).map_err(domain)?;
        let again = fiber_functor(&rebuilt, x).map_err(domain)?;
        let round_trip = gxset_isomorphism(&fiber, &again).is_some();
        let text = format!(
            "fiber over {obj}: {} point(s) in {} orbit(s) under a group of order {}\nround trip through the covering: {}\n",
            fiber.len(),
            fiber.orbits().len(),
            fiber.group().order(),
            if round_trip { "isomorphic" } else { "NOT isomorphic" }
        );
        let answer = Answer {
            result: json!({ "kind": "gspace", "object": obj, "fiber": gxset_json(&fiber), "round_trip": round_trip }),
            text,
        };
        if !round_trip {
            return Err(Failure::Domain("fiber of the rebuilt covering is not isomorphic".into()));
        }
        return Ok(answer);
    }
    let g = groupoid_of(doc, name)?;
    let x = object(&g, obj)?;
    let k = pi1(&g, x).map_err(domain)?;
    if k.order() > MAX_COVER_GROUP {
        return Err(Failure::Domain(format!(
            "fundamental group of order {} exceeds {MAX_COVER_GROUP}",
            k.order()
        )));
    }
    // connected covers of the component of x correspond to subgroups up to conjugacy
    let classes = subgroup_classes(&k);
    let mut text = format!(
        "fundamental group at {obj}: order {}\n{} connected cover(s) of the component, up to isomorphism\n",
        k.order(),
        classes.len()
    );
    let mut covers = Vec::new();
    for (h, conjugates) in &classes {
        let _ = writeln!(text, "  subgroup of order {}, sheets {}, conjugates {conjugates}", h.len(), k.order() / h.len());
        let cosets = GxSet::cosets(k.clone(), h).map_err(domain)?;
        covers.push(json!({
            "subgroup_order": h.len(),
            "sheets": k.order() / h.len(),
            "conjugates": conjugates,
            "fiber": gxset_json(&cosets),
        }));
    }
    Ok(Answer {
        result: json!({ "kind": "groupoid", "object": obj, "pi1_order": k.order(), "covers": covers }),
        text,
    })
}

/// One representative per conjugacy class of subgroups, with the class size.
fn subgroup_classes(k: &GroupDesc) -> Vec<(Vec<usize>, usize)> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for h in k.subgroups() {
        if seen.contains(&h) {
            continue;
        }
        let mut class = std::collections::BTreeSet::new();
        for g in 0..k.order() {
            let mut c: Vec<usize> = h.iter().map(|&a| k.mul(k.mul(g, a), k.inv(g))).collect();
            c.sort_unstable();
            class.insert(c);
        }
        let size = class.len();
        seen.extend(class);
        out.push((h, size));
    }
    out
}

fn cohomology(doc: &GspecDocument, name: &str, module: &str, degree: usize) -> Run<Answer> {
    let g = groupoid_of(doc, name)?;
    let Value::GModule(a) = lookup(doc, module)? else {
        return Err(Failure::Usage(format!("`{module}` is not a gmodule")));
    };
    let base = a.base();
    if base.objects() != g.objects() || base.arrows() != g.arrows() {
        return Err(Failure::Usage(format!("`{module}` is not a module over `{name}`")));
    }
    let opts = CohomologyOptions::default();
    let mut total = AbelianGroup::zero();
    let mut per_orbit = Vec::new();
    let mut text = String::new();
    for orbit in g.orbits() {
        let x = orbit[0];
        let h = stalk_derived_q(a, x, degree, opts).map_err(domain)?;
        let _ = writeln!(text, "  at {}: H^{degree}(isotropy; A) = {h}", g.object_name(x));
        per_orbit.push(json!({
            "representative": g.object_name(x),
            "isotropy_order": g.isotropy(x).map_err(domain)?.order(),
            "fiber": a.fiber(x).to_string(),
            "group": h.to_string(),
        }));
        total = total.direct_sum(&h);
    }
    text = format!("H^{degree} = {total}, one summand per orbit\n{text}");
    let mut result = json!({ "degree": degree, "total": total.to_string(), "by_orbit": per_orbit });
    if degree == 0 {
        let sections = invariant_sections(a).map_err(domain)?;
        let agree = sections == total;
        let _ = writeln!(text, "global invariant sections: {sections}{}", if agree { "" } else { " (MISMATCH)" });
        result["invariant_sections"] = json!(sections.to_string());
        if !agree {
            return Err(Failure::Domain("invariant sections disagree with the stalk decomposition".into()));
        }
    }
    Ok(Answer { result, text })
}
