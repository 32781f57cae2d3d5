use std::fs;
use std::path::{Path, PathBuf};

use locally_lattice::cayley::{
    build_example_group, build_product_extension, commutator_subgroup, enumerate_relators, order_modulo,
    verify_counterexample,
};
use locally_lattice::cover::{
    classify_2d, classify_d, default_radius, extend_cover, recover_deck_group, seed_map, CoverStatus,
};
use locally_lattice::families::{
    build_gen_torus, build_grid, build_klein, build_strange, build_torus, procedure_i, procedure_ii,
};
use locally_lattice::graph::{isomorphic, parse_edge_list, write_edge_list};
use locally_lattice::lattice::{build_quotient, is_torsion_free, min_displacement, parse_group, SubgroupSpec};
use locally_lattice::local::{is_locally_grid, is_r_locally, is_weakly_r_locally, opposite_partition};
use locally_lattice::surface::{find_wheel_family_with_budget, glue_surface, vertex_rotation_check, WheelSearch};
use locally_lattice::{Error, Graph};

use crate::report::{Report, Status};
use crate::{Command, GroupAction, Strength};

pub enum Failure {
    Lib(Error),
    Io(PathBuf, std::io::Error),
}

impl Failure {
    pub fn code(&self) -> &'static str {
        match self {
            Failure::Lib(e) => e.code(),
            Failure::Io(..) => "IO",
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Lib(e) => write!(f, "{e}"),
            Failure::Io(p, e) => write!(f, "{}: {e}", p.display()),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

/// A report plus data meant for stdout when no output file was given.
pub struct Outcome {
    pub report: Report,
    pub payload: Option<String>,
}

impl From<Report> for Outcome {
    fn from(report: Report) -> Self {
        Outcome { report, payload: None }
    }
}

type Res<T> = Result<T, Failure>;

fn read(path: &Path) -> Res<String> {
    fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn write(path: &Path, text: &str) -> Res<()> {
    fs::write(path, text).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn read_graph(path: &Path) -> Res<Graph> {
    Ok(parse_edge_list(&read(path)?)?)
}

fn ints(params: &[String], n: usize, family: &str) -> Res<Vec<i64>> {
    if params.len() != n {
        return Err(Error::BadParameters(format!("{family} takes {n} parameters, got {}", params.len())).into());
    }
    params
        .iter()
        .map(|p| {
            p.parse::<i64>()
                .map_err(|_| Error::BadParameters(format!("`{p}` is not an integer")).into())
        })
        .collect()
}

pub fn run(cmd: Command) -> Res<Outcome> {
    match cmd {
        Command::Build { family, params, out } => build(&family, &params, out.as_deref()),
        Command::Check {
            graph,
            dim,
            radius,
            strength,
        } => check(&graph, dim, radius, strength).map(Into::into),
        Command::Cover {
            graph,
            dim,
            radius,
            vertex,
            dump,
        } => cover(&graph, dim, radius, vertex, dump.as_deref()).map(Into::into),
        Command::Group { file, action, out } => group(&file, action, out.as_deref()).map(Into::into),
        Command::Wheel { graph, budget } => wheel(&graph, budget).map(Into::into),
        Command::Example3 { out } => example3(out.as_deref()),
        Command::Exampled { d, cap, out } => exampled(d, cap, out.as_deref()),
    }
}

fn emit(mut report: Report, g: &Graph, out: Option<&Path>) -> Res<Outcome> {
    let text = write_edge_list(g);
    match out {
        Some(p) => {
            write(p, &text)?;
            report.input("out", p.display().to_string());
            Ok(report.into())
        }
        None => Ok(Outcome {
            report,
            payload: Some(text),
        }),
    }
}

fn graph_summary(r: &mut Report, g: &Graph) {
    r.result("vertices", g.vertex_count())
        .result("edges", g.edge_count())
        .result("regular_degree", g.regular_degree())
        .result("connected", g.is_connected());
}

fn build(family: &str, params: &[String], out: Option<&Path>) -> Res<Outcome> {
    let mut r = Report::new("build");
    r.input("family", family).input("params", params);
    let g = match family {
        "grid" => {
            let p = ints(params, 2, family)?;
            build_grid(p[0], p[1])?
        }
        "torus" => {
            let p = ints(params, 3, family)?;
            build_torus(p[0], p[1], p[2])?
        }
        "klein" => {
            let p = ints(params, 3, family)?;
            let t = u8::try_from(p[2]).map_err(|_| Error::BadParameters(format!("bad Klein type {}", p[2])))?;
            build_klein(p[0], p[1], t)?
        }
        "strange" => {
            let p = ints(params, 2, family)?;
            build_strange(p[0], p[1])?
        }
        "gentorus" => {
            let p = ints(params, 4, family)?;
            build_gen_torus([p[0], p[1]], [p[2], p[3]])?
        }
        "proc1" | "proc2" | "proc2r" => {
            let p = ints(params, 3, family)?;
            let spec = match family {
                "proc1" => procedure_i(p[0], p[1], p[2])?,
                "proc2" => procedure_ii(p[0], p[1], p[2], false)?,
                _ => procedure_ii(p[0], p[1], p[2], true)?,
            };
            quotient_graph(&mut r, &spec)?
        }
        "group" => {
            let [file] = params else {
                return Err(Error::BadParameters("group takes one file path".into()).into());
            };
            let spec = parse_group(&read(Path::new(file))?)?;
            quotient_graph(&mut r, &spec)?
        }
        "example3" => {
            ints(params, 0, family)?;
            build_example_group().cayley.graph
        }
        "exampled" => {
            let p = ints(params, 1, family)?;
            let d = usize::try_from(p[0]).map_err(|_| Error::BadParameters(format!("bad dimension {}", p[0])))?;
            build_product_extension(d, locally_lattice::cayley::DEFAULT_PRODUCT_CAP)?.graph
        }
        other => return Err(Error::BadParameters(format!("unknown family `{other}`")).into()),
    };
    graph_summary(&mut r, &g);
    r.results.entry("loops".into()).or_insert(false.into());
    r.results.entry("multi_edges".into()).or_insert(false.into());
    emit(r, &g, out)
}

fn quotient_graph(r: &mut Report, spec: &SubgroupSpec) -> Res<Graph> {
    let q = build_quotient(spec)?;
    r.result("loops", q.loops_found).result("multi_edges", q.multi_edges_found);
    Ok(q.graph)
}

fn check(path: &Path, d: usize, radius: usize, strength: Strength) -> Res<Report> {
    let g = read_graph(path)?;
    let mut r = Report::new("check");
    r.input("graph", path.display().to_string());
    let verdict = match strength {
        Strength::Strong | Strength::Weak => {
            r.input("d", d).input("r", radius);
            if strength == Strength::Strong {
                r.input("strength", "strong");
                is_r_locally(&g, d, radius)?
            } else {
                r.input("strength", "weak");
                is_weakly_r_locally(&g, d, radius)?
            }
        }
        Strength::Grid => {
            r.input("strength", "grid");
            is_locally_grid(&g)
        }
    };
    r.result("holds", verdict.holds).result("failing_vertex", verdict.failing_vertex);
    r.verdict = Some(verdict.holds);
    Ok(r)
}

fn cover(path: &Path, d: usize, radius: Option<usize>, v0: usize, dump: Option<&Path>) -> Res<Report> {
    let g = read_graph(path)?;
    g.check_vertex(v0)?;
    let radius = radius.unwrap_or_else(|| default_radius(&g, v0));
    let mut r = Report::new("cover");
    r.input("graph", path.display().to_string())
        .input("d", d)
        .input("radius", radius)
        .input("vertex", v0);
    let seed = seed_map(&g, v0, d)?;
    let pc = extend_cover(&g, &seed, radius)?;
    if let Some(p) = dump {
        write(p, &pc.dump())?;
    }
    r.result("cover_status", pc.status).result("assigned", pc.assigned_count());
    if pc.status != CoverStatus::Valid {
        r.status = Status::Obstructed;
        r.result("obstruction", &pc.obstruction);
        return Ok(r);
    }
    let dg = recover_deck_group(&pc, &g)?;
    let spec = dg.spec();
    let iso = isomorphic(&build_quotient(&spec)?.graph, &g).is_some();
    r.result("deck_generators", dg.generators.iter().map(|a| a.to_string()).collect::<Vec<_>>())
        .result("deck_group", &dg)
        .result("quotient_isomorphic", iso);
    let class = if d == 2 {
        classify_2d(&dg).map(|k| serde_json::to_value(k).unwrap())
    } else {
        classify_d(&spec).map(|k| serde_json::to_value(k).unwrap())
    };
    match class {
        Ok(k) => r.result("classification", k),
        Err(e) => r.result("classification_error", e.code()),
    };
    Ok(r)
}

fn group(path: &Path, action: GroupAction, out: Option<&Path>) -> Res<Report> {
    let spec = parse_group(&read(path)?)?;
    let mut r = Report::new("group");
    r.input("file", path.display().to_string())
        .input("d", spec.dim())
        .input("generators", spec.generators().iter().map(|a| a.to_string()).collect::<Vec<_>>());
    match action {
        GroupAction::Displacement => {
            r.input("action", "displacement");
            r.result("min_displacement", min_displacement(&spec)?);
        }
        GroupAction::Rank => {
            r.input("action", "rank");
            r.result("rank", spec.rank())
                .result("cocompact", spec.is_cocompact())
                .result("lattice_basis", spec.lattice_basis())
                .result("point_group_order", spec.point_group().len());
            if spec.is_cocompact() {
                r.result("lattice_index", spec.lattice_index()?);
            }
        }
        GroupAction::Torsion => {
            r.input("action", "torsion");
            let t = is_torsion_free(&spec)?;
            r.result("torsion_free", t.torsion_free);
            if let Some((w, k)) = &t.witness {
                r.result("witness", w.to_string()).result("witness_order", k);
            }
        }
        GroupAction::Quotient => {
            r.input("action", "quotient");
            let g = quotient_graph(&mut r, &spec)?;
            graph_summary(&mut r, &g);
            if let Some(p) = out {
                write(p, &write_edge_list(&g))?;
                r.input("out", p.display().to_string());
            }
        }
        GroupAction::Classify => {
            r.input("action", "classify");
            r.result("classification", classify_d(&spec)?);
        }
    }
    Ok(r)
}

fn wheel(path: &Path, budget: u64) -> Res<Report> {
    let g = read_graph(path)?;
    let mut r = Report::new("wheel");
    r.input("graph", path.display().to_string()).input("budget", budget);
    match find_wheel_family_with_budget(&g, budget) {
        WheelSearch::Found(cert) => {
            let s = glue_surface(&cert)?;
            r.result("faces", cert.family.len())
                .result("rotation_ok", vertex_rotation_check(&cert, &g))
                .result("surface", &s);
            r.verdict = Some(true);
        }
        WheelSearch::NotWheel => {
            r.result("surface", "NOT_A_WHEEL_GRAPH");
            r.verdict = Some(false);
        }
        WheelSearch::Indeterminate => {
            r.status = Status::Error;
            r.result("error", "INDETERMINATE").result("message", "search budget exhausted");
        }
    }
    Ok(r)
}

fn example3(out: Option<&Path>) -> Res<Outcome> {
    let eg = build_example_group();
    let cg = &eg.cayley;
    let mut r = Report::new("example3");
    let rep = verify_counterexample(cg, 3)?;
    let rel = enumerate_relators(cg, 4)?;
    let comm = commutator_subgroup(&eg);
    let ab = eg.elements.len() / comm.len();
    let pairs = opposite_partition(&cg.graph, cg.identity, 3)?
        .map(|p| {
            p.pairs
                .iter()
                .map(|&(a, b)| [cg.graph.label(a), cg.graph.label(b)])
                .collect::<Vec<_>>()
        })
        .unwrap_or_default();
    r.result("order", eg.elements.len())
        .result("report", &rep)
        .result("relators_length_4", rel.nontrivial.len())
        .result("abelianization_order", ab)
        .result("abelianization_cyclic", order_modulo(&eg.generators[0], &comm) == ab)
        .result("opposite_pairs_at_identity", pairs);
    if rep.cover_status != CoverStatus::Valid {
        r.status = Status::Obstructed;
    }
    emit_optional(r, &cg.graph, out)
}

fn exampled(d: usize, cap: usize, out: Option<&Path>) -> Res<Outcome> {
    let cg = build_product_extension(d, cap)?;
    let mut r = Report::new("exampled");
    r.input("d", d).input("cap", cap);
    let rep = verify_counterexample(&cg, d)?;
    r.result("report", &rep);
    if rep.cover_status != CoverStatus::Valid {
        r.status = Status::Obstructed;
    }
    emit_optional(r, &cg.graph, out)
}

fn emit_optional(mut r: Report, g: &Graph, out: Option<&Path>) -> Res<Outcome> {
    if let Some(p) = out {
        write(p, &write_edge_list(g))?;
        r.input("out", p.display().to_string());
    }
    Ok(r.into())
}
