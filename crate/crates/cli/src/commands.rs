use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::json;

use schottky_scale::colors::{refine_dart_colors, DartColoring};
use schottky_scale::enumerate::{certificate_for, enumerate_rank_with_ceiling};
use schottky_scale::multigraph::{GraphRecord, Multigraph};
use schottky_scale::scale::{
    oracle_scale_with_budget, ramification_profile, scale_hyperbolic, Isometry, OracleScale,
    RamificationProfile, ScaleValue,
};
use schottky_scale::schottky::{default_orientation, schottky_basis, spanning_trees, SpanningTree};
use schottky_scale::volumes::{
    build_bs, build_cycle_gadget, build_rose, prime_spectrum_of, verify_explicit_bounds,
    volume_report, volumes_of,
};
use schottky_scale::Error;

use crate::report::{join, to_value, Report};
use crate::{CliError, Command, Family, Format, RunConfig, Status};

pub fn execute(config: &RunConfig) -> Result<(Report, Status), CliError> {
    let ceiling = config.rank_ceiling;
    match &config.command {
        Command::Enumerate { rank, out } => {
            enumerate(config, rank.rank, out.as_deref()).map(|r| (r, Status::Success))
        }
        Command::Basis {
            graph,
            tree,
            all_trees,
        } => basis(&load_graph(&graph.graph)?, *tree, *all_trees).map(|r| (r, Status::Success)),
        Command::Colors { graph } => {
            colors(&load_graph(&graph.graph)?).map(|r| (r, Status::Success))
        }
        Command::Scale {
            graph,
            tree,
            element,
            all: _,
            oracle,
            oracle_budget,
        } => scale(
            &load_graph(&graph.graph)?,
            *tree,
            *element,
            *oracle,
            *oracle_budget,
        ),
        Command::Svol { rank } => svol(rank.rank, ceiling),
        Command::Primes { rank } => primes(rank.rank, ceiling),
        Command::Verify { rank } => verify(rank.rank, ceiling),
        Command::Build { family, rank, s } => {
            build(*family, rank.rank, *s).map(|r| (r, Status::Success))
        }
    }
}

fn status(ok: bool) -> Status {
    if ok {
        Status::Success
    } else {
        Status::VerificationFailed
    }
}

/// Reads a text graph file, or a JSON record when the name ends in `.json`.
pub fn load_graph(path: &Path) -> Result<Multigraph, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let located = |e: Error| CliError::Usage(format!("{}: {e}", path.display()));
    if path.extension().is_some_and(|x| x == "json") {
        let record: GraphRecord = serde_json::from_str(&text).map_err(|source| CliError::Json {
            path: path.to_path_buf(),
            source,
        })?;
        Multigraph::try_from(record).map_err(located)
    } else {
        text.parse().map_err(located)
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn factorization(s: &ScaleValue) -> String {
    if s.factors().is_empty() {
        return "1".into();
    }
    s.factors()
        .iter()
        .map(|(p, e)| {
            if *e == 1 {
                p.to_string()
            } else {
                format!("{p}^{e}")
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

fn select_trees(
    g: &Multigraph,
    tree: usize,
    all: bool,
) -> Result<Vec<(usize, SpanningTree)>, CliError> {
    let trees = spanning_trees(g)?;
    if all {
        return Ok(trees.into_iter().enumerate().collect());
    }
    let count = trees.len();
    trees
        .into_iter()
        .nth(tree)
        .map(|t| vec![(tree, t)])
        .ok_or_else(|| {
            CliError::Usage(format!(
                "tree index {tree} out of range ({count} spanning trees)"
            ))
        })
}

#[derive(Serialize)]
struct GraphEntry {
    index: usize,
    key: String,
    vertices: usize,
    edges: usize,
    degrees: Vec<usize>,
    graph: GraphRecord,
    #[serde(skip_serializing_if = "Option::is_none")]
    file: Option<String>,
}

fn enumerate(config: &RunConfig, rank: usize, out: Option<&Path>) -> Result<Report, CliError> {
    let graphs = enumerate_rank_with_ceiling(rank, config.rank_ceiling)?;
    let certificate = certificate_for(rank, &graphs)?;
    let ext = match config.format {
        Format::Json => "json",
        Format::Text => "txt",
    };
    let entries: Vec<GraphEntry> = graphs
        .iter()
        .enumerate()
        .map(|(i, g)| {
            Ok(GraphEntry {
                index: i,
                key: g.canonical_key()?.to_hex(),
                vertices: g.vertex_count(),
                edges: g.edge_count(),
                degrees: g.degrees(),
                graph: GraphRecord::from(g),
                file: out.map(|_| format!("rank{rank}-{i:04}.{ext}")),
            })
        })
        .collect::<Result<_, Error>>()?;

    let summary = |report: Report| {
        report
            .summary("rank", rank)
            .summary("graph_count", certificate.graph_count)
            .summary(
                "max_vertices",
                format!(
                    "{} <= {}",
                    certificate.max_vertices, certificate.vertex_bound
                ),
            )
            .summary(
                "max_edges",
                format!("{} <= {}", certificate.max_edges, certificate.edge_bound),
            )
            .summary(
                "max_degree",
                format!("{} <= {}", certificate.max_degree, certificate.degree_bound),
            )
            .summary(
                "max_translation_length",
                format!(
                    "{} <= {}",
                    certificate.max_translation_length, certificate.translation_length_bound
                ),
            )
            .summary("within_bounds", certificate.within_bounds())
    };

    if let Some(dir) = out {
        fs::create_dir_all(dir).map_err(|source| CliError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        for (entry, g) in entries.iter().zip(&graphs) {
            let contents = match config.format {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&entry.graph)
                        .expect("graph records serialize");
                    s.push('\n');
                    s
                }
                Format::Text => format!("# key {}\n{}", entry.key, g.to_text()),
            };
            write_file(
                &dir.join(entry.file.as_ref().expect("file set with --out")),
                &contents,
            )?;
        }
        let cert = summary(Report::new("certificate", &certificate)?);
        write_file(
            &dir.join(format!("certificate.{ext}")),
            &cert.render(config)?,
        )?;
    }

    let rows = entries
        .iter()
        .map(|e| {
            vec![
                e.index.to_string(),
                e.key.clone(),
                e.vertices.to_string(),
                e.edges.to_string(),
                join(&e.degrees),
                e.file.clone().unwrap_or_else(|| "-".into()),
            ]
        })
        .collect();
    let result = json!({ "rank": rank, "certificate": certificate, "graphs": entries });
    Ok(summary(Report::new("enumerate", result)?).table(
        vec!["index", "key", "vertices", "edges", "degrees", "file"],
        rows,
    ))
}

fn basis(g: &Multigraph, tree: usize, all_trees: bool) -> Result<Report, CliError> {
    let mut records = Vec::new();
    let mut rows = Vec::new();
    for (t, tree) in select_trees(g, tree, all_trees)? {
        let orientation = default_orientation(g, &tree);
        let forward = schottky_basis(g, &tree, &orientation)?;
        let reversed = orientation.iter().map(|(&e, &d)| (e, d ^ 1)).collect();
        let backward = schottky_basis(g, &tree, &reversed)?;
        let mut elements = Vec::new();
        for (i, (f, b)) in forward.elements.iter().zip(&backward.elements).enumerate() {
            for (label, el) in [("forward", f), ("backward", b)] {
                rows.push(vec![
                    t.to_string(),
                    i.to_string(),
                    el.edge.to_string(),
                    label.to_string(),
                    el.dart.to_string(),
                    el.translation_length.to_string(),
                    join(el.axis.darts()),
                ]);
                elements.push(json!({
                    "element": i,
                    "edge": el.edge,
                    "orientation": label,
                    "dart": el.dart,
                    "translation_length": el.translation_length,
                    "axis": el.axis.darts(),
                }));
            }
        }
        records.push(json!({ "tree": t, "tree_edges": tree.edges(), "elements": elements }));
    }
    Ok(Report::new("basis", json!({ "trees": records }))?
        .summary("vertices", g.vertex_count())
        .summary("edges", g.edge_count())
        .table(
            vec![
                "tree",
                "element",
                "edge",
                "orientation",
                "dart",
                "translation_length",
                "axis",
            ],
            rows,
        ))
}

fn colors(g: &Multigraph) -> Result<Report, CliError> {
    let c = refine_dart_colors(g)?;
    let darts: Vec<_> = g
        .darts()
        .map(|d| json!({ "dart": d, "tail": g.tail(d), "head": g.head(d), "color": c.color(d) }))
        .collect();
    let profiles: Vec<_> = c
        .profiles()
        .iter()
        .enumerate()
        .map(|(color, p)| json!({ "color": color, "continuations": p }))
        .collect();
    let rows = g
        .darts()
        .map(|d| {
            vec![
                d.to_string(),
                g.tail(d).to_string(),
                g.head(d).to_string(),
                c.color(d).to_string(),
            ]
        })
        .collect();
    let mut report = Report::new(
        "colors",
        json!({ "rounds": c.rounds(), "class_count": c.class_count(), "darts": darts, "profiles": profiles }),
    )?
    .summary("rounds", c.rounds())
    .summary("class_count", c.class_count());
    for (color, p) in c.profiles().iter().enumerate() {
        let text = join(p.iter().map(|(k, v)| format!("{k}:{v}")));
        report = report.summary(&format!("profile {color}"), text);
    }
    Ok(report.table(vec!["dart", "tail", "head", "color"], rows))
}

#[derive(Serialize)]
struct OrientedScale {
    dart: usize,
    axis: Vec<usize>,
    profile: RamificationProfile,
    scale: ScaleValue,
    factorization: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<OracleScale>,
}

#[derive(Serialize)]
struct ElementRecord {
    element: usize,
    edge: usize,
    translation_length: usize,
    forward: OrientedScale,
    backward: OrientedScale,
}

fn oriented(
    g: &Multigraph,
    colors: &DartColoring,
    tree: &SpanningTree,
    dart: usize,
    oracle: Option<(usize, usize)>,
) -> Result<OrientedScale, CliError> {
    let el = schottky_scale::schottky::SchottkyElement::new(g, &tree.mask(g), dart)?;
    let profile = ramification_profile(g, colors, &el.axis)?;
    let scale = scale_hyperbolic(&profile);
    let oracle = oracle
        .map(|(periods, budget)| {
            oracle_scale_with_budget(g, colors, Isometry::Hyperbolic(&el.axis), periods, budget)
        })
        .transpose()?;
    Ok(OrientedScale {
        dart,
        axis: el.axis.darts().to_vec(),
        factorization: factorization(&scale),
        profile,
        scale,
        oracle,
    })
}

fn scale(
    g: &Multigraph,
    tree: usize,
    element: Option<usize>,
    oracle: Option<usize>,
    budget: usize,
) -> Result<(Report, Status), CliError> {
    let colors = refine_dart_colors(g)?;
    let (t, tree) = select_trees(g, tree, false)?.remove(0);
    let complement = tree.complement(g);
    let chosen: Vec<usize> = match element {
        Some(i) if i >= complement.len() => {
            return Err(CliError::Usage(format!(
                "element index {i} out of range ({} elements)",
                complement.len()
            )))
        }
        Some(i) => vec![i],
        None => (0..complement.len()).collect(),
    };
    let oracle = oracle.map(|p| (p, budget));
    let mut records = Vec::new();
    for i in chosen {
        let e = complement[i];
        let forward = oriented(g, &colors, &tree, 2 * e, oracle)?;
        let backward = oriented(g, &colors, &tree, 2 * e + 1, oracle)?;
        records.push(ElementRecord {
            element: i,
            edge: e,
            translation_length: forward.axis.len(),
            forward,
            backward,
        });
    }
    let agrees = |o: &OrientedScale| o.oracle.as_ref().is_none_or(|x| x.agrees_with(&o.scale));
    let all_agree = records
        .iter()
        .all(|r| agrees(&r.forward) && agrees(&r.backward));
    let oracle_cell = |o: &OrientedScale| match &o.oracle {
        Some(x) => format!(
            "{}{}",
            x.ratio().map_or("-".into(), ToString::to_string),
            if x.stabilized { "" } else { "?" }
        ),
        None => "-".into(),
    };
    let rows = records
        .iter()
        .flat_map(|r| {
            [("forward", &r.forward), ("backward", &r.backward)].map(|(label, o)| {
                vec![
                    r.element.to_string(),
                    r.edge.to_string(),
                    label.to_string(),
                    o.dart.to_string(),
                    r.translation_length.to_string(),
                    join(o.profile.values()),
                    o.scale.to_string(),
                    o.factorization.clone(),
                    oracle_cell(o),
                ]
            })
        })
        .collect();
    let mut report = Report::new(
        "scale",
        json!({ "tree": t, "tree_edges": tree.edges(), "elements": records }),
    )?
    .summary("tree", t)
    .summary("color_classes", colors.class_count());
    if oracle.is_some() {
        report = report.summary("oracle_agrees", all_agree);
    }
    let report = report.table(
        vec![
            "element",
            "edge",
            "orientation",
            "dart",
            "translation_length",
            "profile",
            "scale",
            "factorization",
            "oracle_ratio",
        ],
        rows,
    );
    Ok((report, status(all_agree)))
}

fn svol(rank: usize, ceiling: usize) -> Result<(Report, Status), CliError> {
    let graphs = enumerate_rank_with_ceiling(rank, ceiling)?;
    let volumes = volumes_of(&graphs)?;
    let r = volume_report(rank, volumes)?;
    let rows = r
        .graphs
        .iter()
        .map(|g| {
            vec![
                g.key.to_hex(),
                g.vertices.to_string(),
                g.edges.to_string(),
                g.tree_volumes.len().to_string(),
                g.volume.to_string(),
                g.best_tree.to_string(),
                g.max_translation_length.to_string(),
                join(&g.primes),
            ]
        })
        .collect();
    let ok = r.in_bracket;
    let report = Report::new("svol", &r)?
        .summary("rank", rank)
        .summary("graph_count", r.graphs.len())
        .summary("svol_schottky", &r.svol_schottky)
        .summary("svol_graph", &r.svol_graph)
        .summary("lower_bound", &r.lower_bound)
        .summary("upper_bound", &r.upper_bound)
        .summary("in_bracket", r.in_bracket)
        .summary("rose_volume", &r.rose_volume)
        .summary(
            "conjecture",
            format!("{:e} ({})", r.conjecture.value, r.conjecture.status),
        )
        .summary("primes", join(&r.primes))
        .table(
            vec![
                "key",
                "vertices",
                "edges",
                "trees",
                "volume",
                "best_tree",
                "max_translation_length",
                "primes",
            ],
            rows,
        );
    Ok((report, status(ok)))
}

fn primes(rank: usize, ceiling: usize) -> Result<(Report, Status), CliError> {
    let graphs = enumerate_rank_with_ceiling(rank, ceiling)?;
    let volumes = volumes_of(&graphs)?;
    let spectrum = prime_spectrum_of(rank, &volumes)?;
    let rows = spectrum
        .witnesses
        .iter()
        .map(|w| {
            vec![
                w.prime.to_string(),
                w.family.clone(),
                w.translation_length.to_string(),
                w.scale.to_string(),
                factorization(&w.scale),
            ]
        })
        .collect();
    let ok = spectrum.matches();
    let mut result = to_value(&spectrum)?;
    result["matches"] = json!(ok);
    let mut report = Report::new("primes", result)?
        .summary("rank", rank)
        .summary("primes", join(&spectrum.primes))
        .summary("expected", join(&spectrum.expected))
        .summary("matches", ok);
    report = report.table(
        vec![
            "prime",
            "family",
            "translation_length",
            "scale",
            "factorization",
        ],
        rows,
    );
    Ok((report, status(ok)))
}

fn verify(rank: usize, ceiling: usize) -> Result<(Report, Status), CliError> {
    if rank > ceiling {
        return Err(Error::RankAboveCeiling { rank, ceiling }.into());
    }
    let r = verify_explicit_bounds(rank)?;
    let ok = r.passed();
    let rows = r
        .checks
        .iter()
        .map(|c| {
            vec![
                c.part.to_string(),
                c.name.clone(),
                if c.passed { "pass" } else { "FAIL" }.to_string(),
                c.detail.clone(),
            ]
        })
        .collect();
    let mut result = to_value(&r)?;
    result["passed"] = json!(ok);
    let report = Report::new("verify", result)?
        .summary("rank", rank)
        .summary("passed", ok)
        .table(vec!["part", "check", "result", "detail"], rows);
    Ok((report, status(ok)))
}

fn build(family: Family, rank: usize, s: Option<usize>) -> Result<Report, CliError> {
    let g = match (family, s) {
        (Family::Rose, None) => build_rose(rank)?,
        (Family::Cycle, None) => build_cycle_gadget(rank)?,
        (Family::Bs, Some(s)) => build_bs(s, rank)?,
        (Family::Bs, None) => return Err(CliError::Usage("--family bs needs --s".into())),
        (_, Some(_)) => return Err(CliError::Usage("--s applies only to --family bs".into())),
    };
    let key = g.canonical_key()?.to_hex();
    let mut report = Report::new(
        "build",
        json!({ "family": family, "rank": rank, "s": s, "key": key, "graph": GraphRecord::from(&g) }),
    )?
    .summary("key", &key);
    report.raw = Some(g.to_text());
    Ok(report)
}
