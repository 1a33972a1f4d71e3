use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use comednet::algebra::{self, ShiftDirection};
use comednet::atc::AtcLevel;
use comednet::community::{self, CommunityPartition, LouvainOptions};
use comednet::ingest::{self, EpisodeParams, ExclusionList, ParseMode, ParseOptions};
use comednet::io::{csv_files, explorer, gexf, pajek};
use comednet::metrics::{self, CentralityOptions, CentralityReport, EigenScale, EigenvectorOptions, PathMode};
use comednet::{Network, NetworkBuilder};
use log::{debug, info, warn};
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::config::*;
use crate::table::{render_table, Ranking, ShiftTable, ToTable};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Data(#[from] comednet::Error),
    #[error("{path}: {source}")]
    File { path: PathBuf, source: io::Error },
    #[error("{0}")]
    Output(#[from] io::Error),
    #[error("{0}")]
    Json(#[from] serde_json::Error),
    #[error("could not start worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

impl CliError {
    /// Every runtime failure is a data error; usage errors never get here.
    pub fn exit_code(&self) -> i32 {
        1
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|source| CliError::File { path: path.to_owned(), source })
}

/// Write through a temp file in the destination directory, then rename, so a
/// failed run never leaves a truncated artifact behind.
fn write_atomic(path: &Path, body: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let file_err = |source| CliError::File { path: path.to_owned(), source };
    let tmp = tempfile::NamedTempFile::new_in(dir).map_err(file_err)?;
    {
        let mut w = BufWriter::new(tmp.as_file());
        body(&mut w)?;
        w.flush().map_err(file_err)?;
    }
    tmp.persist(path).map_err(|e| file_err(e.error))?;
    info!("wrote {}", path.display());
    Ok(())
}

fn emit(out: Option<&Path>, body: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match out {
        Some(path) => write_atomic(path, body),
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            body(&mut lock)?;
            lock.flush()?;
            Ok(())
        }
    }
}

fn emit_text(out: Option<&Path>, text: &str) -> Result<()> {
    emit(out, |w| Ok(w.write_all(text.as_bytes())?))
}

fn emit_json(out: Option<&Path>, value: &impl Serialize) -> Result<()> {
    emit(out, |w| {
        serde_json::to_writer_pretty(&mut *w, value)?;
        w.write_all(b"\n")?;
        Ok(())
    })
}

fn emit_report<T: Serialize + ToTable + ?Sized>(output: &ReportOutput, report: &T) -> Result<()> {
    match output.format {
        ReportFormat::Json => emit_json(output.out.as_deref(), &report),
        ReportFormat::Table => emit_text(output.out.as_deref(), &render_table(report)),
    }
}

fn load_network(input: &NetworkInput) -> Result<Network> {
    let nodes = match &input.nodes {
        Some(p) => Some(csv_files::read_node_table(open(p)?)?),
        None => None,
    };
    let net = csv_files::read_edge_list(open(&input.edges)?, input.directed, !input.unweighted, nodes.as_deref())?;
    debug!(
        "loaded {} ({} nodes, {} edges)",
        input.edges.display(),
        net.node_count(),
        net.edge_count()
    );
    Ok(net)
}

pub fn dispatch(config: RunConfig) -> Result<()> {
    match config.threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build()?;
            pool.install(|| run_command(config.command))
        }
        None => run_command(config.command),
    }
}

fn run_command(command: Command) -> Result<()> {
    match command {
        Command::Build(a) => build(a),
        Command::Stats(a) => stats(a),
        Command::Centrality(a) => centrality(a),
        Command::Assortativity(a) => assortativity(a),
        Command::Communities(a) => communities(a),
        Command::Compare(a) => compare(a),
        Command::Combine(a) => combine(a),
        Command::Ego(a) => ego(a),
        Command::Export(a) => export(a),
    }
}

fn build(args: BuildArgs) -> Result<()> {
    let mode = if args.lenient { ParseMode::Lenient } else { ParseMode::Strict };
    let parsed = ingest::parse_dispensing(
        open(&args.input)?,
        &ParseOptions {
            delimiter: args.delimiter,
            mode,
        },
    )?;
    for d in &parsed.diagnostics {
        warn!("{}: skipped {d}", args.input.display());
    }
    if parsed.skipped > 0 {
        eprintln!("skipped {} malformed row(s)", parsed.skipped);
    }

    let records: Vec<_> = parsed
        .records
        .into_iter()
        .filter(|r| {
            args.filters
                .iter()
                .all(|(col, value)| r.field(col).is_some_and(|v| v == value.as_str()))
        })
        .collect();
    info!("{} record(s) after filters", records.len());

    let params = EpisodeParams {
        adherence_factor: args.adherence_factor,
        gap_days: args.gap_days,
    };
    let episodes = ingest::build_episodes(&records, &params)?;
    let active = ingest::active_at(&episodes, args.index_date);
    let exclusions = match &args.exclusions {
        Some(p) => ExclusionList::parse(open(p)?)?,
        None => ExclusionList::default(),
    };
    let edges = ingest::build_edge_list(&active, &exclusions);

    let names = ingest::drug_names(&records);
    let mut builder = NetworkBuilder::new(false, true);
    for drug in ingest::cohort_drugs(&active, &exclusions) {
        builder.node(&drug);
        if let Some(name) = names.get(&drug) {
            builder.set_label(&drug, name.clone());
        }
    }
    for e in &edges {
        builder.edge(&e.drug_a, &e.drug_b, e.weight as f64)?;
    }
    let net = builder.build();
    info!(
        "{} patient(s) active at {}, {} drug(s), {} edge(s)",
        active.len(),
        args.index_date,
        net.node_count(),
        net.edge_count()
    );

    write_atomic(&args.out, |w| Ok(csv_files::write_edge_list(&net, w)?))?;
    if let Some(path) = &args.nodes_out {
        write_atomic(path, |w| Ok(csv_files::write_node_table(&net, w)?))?;
    }
    Ok(())
}

fn stats(args: StatsArgs) -> Result<()> {
    let net = load_network(&args.input)?;
    let summary = metrics::summarize(&net)?;
    emit_report(&args.output, &summary)
}

fn centrality_options(args: &CentralityArgs) -> CentralityOptions {
    CentralityOptions {
        measures: args.measures.clone(),
        paths: if args.weighted_paths { PathMode::InverseWeight } else { PathMode::Hops },
        normalized_betweenness: args.normalized_betweenness,
        eigenvector: EigenvectorOptions {
            use_weights: args.weighted_eigenvector,
            ..EigenvectorOptions::default()
        },
    }
}

fn centrality(args: CentralityArgs) -> Result<()> {
    let net = load_network(&args.input)?;
    let report = metrics::centrality_report(&net, &centrality_options(&args))?;
    let Some(k) = args.top_k else {
        return emit_report(&args.output, &report);
    };

    let mut measures = args.measures.clone();
    measures.dedup();
    match args.output.format {
        ReportFormat::Json => {
            let ranked: serde_json::Map<String, serde_json::Value> = measures
                .iter()
                .map(|&m| {
                    let list: Vec<_> = report
                        .top_k(m, k)
                        .into_iter()
                        .map(|(id, v)| json!({ "id": id, "value": v }))
                        .collect();
                    (m.name().to_owned(), list.into())
                })
                .collect();
            emit_json(args.output.out.as_deref(), &ranked)
        }
        ReportFormat::Table => {
            let text: Vec<String> = measures
                .iter()
                .map(|&m| {
                    render_table(&Ranking {
                        measure: m,
                        entries: report.top_k(m, k),
                    })
                })
                .collect();
            emit_text(args.output.out.as_deref(), &text.join("\n"))
        }
    }
}

fn assortativity(args: AssortativityArgs) -> Result<()> {
    let net = load_network(&args.input)?;
    let reference = match args.reference_density {
        Some(d) => d,
        None => metrics::density(&net)?,
    };
    let level: AtcLevel = args.level.into();
    let rows = metrics::attribute_assortativity(&net, level.attribute_key(), reference)?;
    emit_report(&args.output, &rows)
}

#[derive(Serialize)]
struct CommunitiesReport<'a> {
    seed: u64,
    resolution: f64,
    modularity: f64,
    module_count: usize,
    module_sizes: &'a [usize],
    assignment: Vec<NodeModule<'a>>,
}

#[derive(Serialize)]
struct NodeModule<'a> {
    id: &'a str,
    module: usize,
}

impl ToTable for CommunitiesReport<'_> {
    fn to_table(&self) -> crate::table::Table {
        let mut t = crate::table::Table::new(["module", "nodes"]);
        for (m, &size) in self.module_sizes.iter().enumerate() {
            t.push(vec![m.into(), size.into()]);
        }
        t
    }
}

fn detect(net: &Network, resolution: f64, seed: u64) -> Result<CommunityPartition> {
    let partition = community::louvain(
        net,
        &LouvainOptions {
            resolution,
            seed,
            ..LouvainOptions::default()
        },
    )?;
    info!(
        "{} module(s), Q = {:.6}, seed {seed}",
        partition.module_count(),
        partition.modularity
    );
    Ok(partition)
}

fn communities(args: CommunitiesArgs) -> Result<()> {
    let net = load_network(&args.input)?;
    let partition = detect(&net, args.resolution, args.seed)?;
    if let Some(path) = &args.partition_out {
        write_atomic(path, |w| Ok(csv_files::write_partition(&partition, w)?))?;
    }
    let report = CommunitiesReport {
        seed: args.seed,
        resolution: partition.resolution,
        modularity: partition.modularity,
        module_count: partition.module_count(),
        module_sizes: &partition.module_sizes,
        assignment: partition
            .assignment
            .iter()
            .map(|(id, module)| NodeModule { id, module: *module })
            .collect(),
    };
    match args.output.format {
        ReportFormat::Json => emit_json(args.output.out.as_deref(), &report),
        ReportFormat::Table => {
            let text = format!(
                "seed {}  resolution {:.6}  modularity {:.6}\n{}",
                args.seed,
                partition.resolution,
                partition.modularity,
                render_table(&report)
            );
            emit_text(args.output.out.as_deref(), &text)
        }
    }
}

fn compare(args: CompareArgs) -> Result<()> {
    let read = |p: &Path| -> Result<Network> { Ok(csv_files::read_edge_list(open(p)?, false, true, None)?) };
    let (a, b) = (read(&args.a)?, read(&args.b)?);
    let result = algebra::compare(&a, &b, args.mode.into())?;
    let shifted = match args.mode {
        Mode::Ratio => Some((
            algebra::top_shifted(&result, ShiftDirection::AOverB, args.top_k)?,
            algebra::top_shifted(&result, ShiftDirection::BOverA, args.top_k)?,
        )),
        Mode::Difference => None,
    };

    match args.output.format {
        ReportFormat::Json => {
            let mut doc = serde_json::to_value(&result)?;
            if let Some((up, down)) = &shifted {
                let list = |v: &[(&algebra::MatchedEdge, f64)]| -> serde_json::Value {
                    v.iter()
                        .map(|(m, r)| {
                            json!({ "a": m.pair.a, "b": m.pair.b, "weight_a": m.weight_a, "weight_b": m.weight_b, "ratio": r })
                        })
                        .collect()
                };
                doc["top_a_over_b"] = list(up);
                doc["top_b_over_a"] = list(down);
            }
            emit_json(args.output.out.as_deref(), &doc)
        }
        ReportFormat::Table => {
            let mut text = render_table(&result);
            if let Some((up, down)) = shifted {
                text.push_str("\nhighest a/b\n");
                text.push_str(&render_table(&ShiftTable { entries: up }));
                text.push_str("\nhighest b/a\n");
                text.push_str(&render_table(&ShiftTable { entries: down }));
            }
            emit_text(args.output.out.as_deref(), &text)
        }
    }
}

fn combine(args: CombineArgs) -> Result<()> {
    let net = load_network(&args.input)?;
    let mask = csv_files::read_ddi_catalog(open(&args.ddi)?)?;
    let kept = algebra::combine_intersection(&net, &mask)?;
    info!(
        "{} of {} edge(s) appear in the interaction catalog",
        kept.edge_count(),
        net.edge_count()
    );
    write_atomic(&args.out, |w| Ok(csv_files::write_edge_list(&kept, w)?))
}

fn ego(args: EgoArgs) -> Result<()> {
    let net = load_network(&args.input)?;
    let ego = net.ego(&args.node)?;
    let out = args.out.as_deref();
    match args.format {
        EgoFormat::Csv => emit(out, |w| Ok(csv_files::write_edge_list(&ego.subgraph, w)?)),
        EgoFormat::Pajek => emit(out, |w| Ok(pajek::write_pajek(&ego.subgraph, w)?)),
        EgoFormat::Json => {
            let mut doc = explorer::explorer_document(&ego.subgraph, None, None)?;
            doc["meta"]["focus"] = json!(ego.focus);
            emit_json(out, &doc)
        }
    }
}

fn export(args: ExportArgs) -> Result<()> {
    let net = load_network(&args.input)?;
    let out = args.out.as_deref();
    if args.format != ExportFormat::Json && (args.with_measures || args.with_communities) {
        warn!("--with-measures and --with-communities only apply to JSON export");
    }
    match args.format {
        ExportFormat::Pajek => emit(out, |w| Ok(pajek::write_pajek(&net, w)?)),
        ExportFormat::Gexf => emit(out, |w| Ok(gexf::write_gexf(&net, w)?)),
        ExportFormat::Json => {
            let report: Option<CentralityReport> = if args.with_measures {
                let options = CentralityOptions {
                    eigenvector: EigenvectorOptions {
                        scale: EigenScale::Max,
                        ..EigenvectorOptions::default()
                    },
                    ..CentralityOptions::default()
                };
                Some(metrics::centrality_report(&net, &options)?)
            } else {
                None
            };
            let partition = if args.with_communities {
                Some(detect(&net, args.resolution, args.seed)?)
            } else {
                None
            };
            emit(out, |w| {
                explorer::write_explorer_json(&net, report.as_ref(), partition.as_ref(), &mut *w)?;
                w.write_all(b"\n")?;
                Ok(())
            })
        }
    }
}
