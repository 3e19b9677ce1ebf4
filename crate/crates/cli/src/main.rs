use std::io::{self, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use frameshift_core::annotation::FrameInventory;
use frameshift_core::coding::{agreement, code_session, confusion, draw_sample, SampleSpec};
use frameshift_core::config::RunConfig;
use frameshift_core::corpus::{clean, extract_target_sentences, CorpusSnapshot, Period, SENTENCES_FILE};
use frameshift_core::pipeline::{
    annotate_with_lexicon, import_file, ingest_file, load_sentences, load_store, open_sessions, save_store, Layout,
    Pipeline, Stage, StageStatus, ANALYSIS_FILE, ANNOTATION_REJECTIONS_FILE, EXIT_CODING, EXIT_CONFIG, EXIT_SERVE,
};
use frameshift_core::report::{emit_tables, fmt_p, fmt_pct, fmt_ratio, fmt_share, ReportInputs};
use frameshift_core::stats::{
    compare_frame_shares, compare_tables, curate_candidates, descriptive_stats, extract_target_fe_pairs,
    frame_frequencies, frameset_article_share, frameset_occurrence_share, frameset_sentence_presence, top_k_union,
    Comparison, CountingMode, RegexMode,
};
use frameshift_core::{io as fio, Error};

#[derive(Parser)]
#[command(name = "frameshift", version, about = "Frame-semantic narrative analysis of news corpora")]
struct Cli {
    /// Run configuration (JSON). Falls back to $FRAMESHIFT_CONFIG, then defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Run directory.
    #[arg(long, global = true, default_value = "frameshift-run")]
    out: PathBuf,
    /// Overrides the configured seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Only print warnings and errors to stderr.
    #[arg(long, short, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct DirArg {
    /// Run directory; defaults to --out.
    dir: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Read a JSONL article stream into <out>/ingest.
    Ingest { input: PathBuf },
    /// Language, near-duplicate and keyword cleaning into <dir>/corpus.
    Clean(DirArg),
    /// Extract target sentences from the cleaned corpus.
    Sentences(DirArg),
    /// Attach frame annotations with a trigger lexicon or from an interchange file.
    Annotate {
        #[command(flatten)]
        dir: DirArg,
        #[arg(long, conflicts_with = "import")]
        lexicon: Option<PathBuf>,
        #[arg(long)]
        import: Option<PathBuf>,
        /// Reject frames missing from the shipped inventory.
        #[arg(long)]
        strict: bool,
    },
    /// Print a statistical comparison.
    Stats {
        #[arg(value_enum)]
        kind: StatsKind,
        #[command(flatten)]
        dir: DirArg,
        /// Frame set name (danger, anthropomorphism) or file.
        #[arg(long)]
        frameset: Option<String>,
        /// Significance level; the configured alpha when absent.
        #[arg(long)]
        alpha: Option<f64>,
        /// Target term for frame-element filtering.
        #[arg(long)]
        target: Option<String>,
        /// How the target term is turned into a pattern.
        #[arg(long, value_enum)]
        regex_mode: Option<Mode>,
        /// Print JSON instead of a table.
        #[arg(long)]
        json: bool,
    },
    /// List frequent frames as candidates for a curated frame set.
    Curate {
        #[command(flatten)]
        dir: DirArg,
        #[arg(long, default_value_t = 1)]
        min_count: u64,
        /// Print JSON instead of a table.
        #[arg(long)]
        json: bool,
    },
    /// Draw a seeded coding sample from a frame set's matching sentences.
    Sample {
        #[command(flatten)]
        dir: DirArg,
        #[arg(long, default_value = "danger")]
        frameset: String,
        /// Sentences per period; defaults to the configured sample size.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Code a session in the terminal.
    Code {
        #[command(flatten)]
        dir: DirArg,
        #[arg(long)]
        session: Option<String>,
        /// Create the session on this sample if it does not exist.
        #[arg(long)]
        sample: Option<String>,
        #[arg(long)]
        annotator: Option<String>,
        /// Coding schema; defaults to the sample's frame set name.
        #[arg(long)]
        schema: Option<String>,
    },
    /// Agreement between two coding sessions.
    Agree {
        #[command(flatten)]
        dir: DirArg,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        json: bool,
    },
    /// Write report tables. With <dir>, --out is the report destination.
    Report {
        #[command(flatten)]
        dir: DirArg,
        /// Significance level; the configured alpha when absent.
        #[arg(long)]
        alpha: Option<f64>,
    },
    /// Serve coding sessions over HTTP.
    Serve {
        #[command(flatten)]
        dir: DirArg,
        #[arg(long)]
        host: Option<String>,
        #[arg(long)]
        port: Option<u16>,
        /// Allow binding a non-loopback address. The service has no authentication.
        #[arg(long)]
        allow_lan: bool,
        #[arg(long)]
        static_dir: Option<PathBuf>,
    },
    /// Run every stage, skipping those already up to date.
    Run {
        input: PathBuf,
        /// Rerun stages even when up to date.
        #[arg(long)]
        force: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum StatsKind {
    Frames,
    Pairs,
    Frameset,
    Descriptive,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Canonical,
    Literal,
}

/// An error with the process exit code it maps to.
struct Failure {
    code: i32,
    message: String,
}

type Outcome = Result<(), Failure>;

fn at<E: std::fmt::Display>(code: i32) -> impl Fn(E) -> Failure {
    move |e| Failure {
        code,
        message: e.to_string(),
    }
}

fn stage(s: Stage) -> impl Fn(Error) -> Failure {
    at(s.exit_code())
}

struct Ctx {
    config: RunConfig,
    out: PathBuf,
}

impl Ctx {
    fn root(&self, dir: &DirArg) -> PathBuf {
        dir.dir.clone().unwrap_or_else(|| self.out.clone())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = if cli.quiet { log::LevelFilter::Warn } else { log::LevelFilter::Info };
    env_logger::Builder::new()
        .filter_level(level)
        .format_timestamp(None)
        .format_target(false)
        .init();

    let result = RunConfig::discover(cli.config.as_deref())
        .map_err(at(EXIT_CONFIG))
        .and_then(|mut config| {
            if let Some(seed) = cli.seed {
                config.seed = seed;
            }
            let ctx = Ctx { config, out: cli.out };
            dispatch(&ctx, cli.command)
        });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(u8::try_from(f.code).unwrap_or(1))
        }
    }
}

fn dispatch(ctx: &Ctx, command: Command) -> Outcome {
    match command {
        Command::Ingest { input } => ingest(ctx, &input),
        Command::Clean(dir) => clean_cmd(ctx, &ctx.root(&dir)),
        Command::Sentences(dir) => sentences(ctx, &ctx.root(&dir)),
        Command::Annotate {
            dir,
            lexicon,
            import,
            strict,
        } => annotate(ctx, &ctx.root(&dir), lexicon, import, strict),
        Command::Stats {
            kind,
            dir,
            frameset,
            alpha,
            target,
            regex_mode,
            json,
        } => {
            let mut config = ctx.config.clone();
            if let Some(a) = alpha {
                config.alpha = a;
            }
            if let Some(t) = target {
                config.target.term = t;
            }
            if let Some(m) = regex_mode {
                config.target.mode = match m {
                    Mode::Canonical => RegexMode::Canonical,
                    Mode::Literal => RegexMode::Literal,
                };
            }
            config.validate().map_err(at(EXIT_CONFIG))?;
            stats(&config, &ctx.root(&dir), kind, frameset.as_deref(), json)
        }
        Command::Curate { dir, min_count, json } => curate(&ctx.root(&dir), min_count, json),
        Command::Sample { dir, frameset, n } => sample(ctx, &ctx.root(&dir), &frameset, n),
        Command::Code {
            dir,
            session,
            sample,
            annotator,
            schema,
        } => code(ctx, &ctx.root(&dir), session, sample, annotator, schema),
        Command::Agree { dir, a, b, json } => agree(ctx, &ctx.root(&dir), &a, &b, json),
        Command::Report { dir, alpha } => {
            let (root, dest) = match dir.dir {
                Some(d) => (d, ctx.out.clone()),
                None => (ctx.out.clone(), Layout::new(&ctx.out).report_dir()),
            };
            report(ctx, &root, &dest, alpha)
        }
        Command::Serve {
            dir,
            host,
            port,
            allow_lan,
            static_dir,
        } => serve(ctx, &ctx.root(&dir), host, port, allow_lan, static_dir),
        Command::Run { input, force } => run(ctx, input, force),
    }
}

fn ingest(ctx: &Ctx, input: &Path) -> Outcome {
    let snap = ingest_file(input, &ctx.config).map_err(stage(Stage::Ingest))?;
    let dir = Layout::new(&ctx.out).ingest_dir();
    snap.save(&dir).map_err(stage(Stage::Ingest))?;
    for r in &snap.rejections {
        log::warn!("line {}: {}", r.line, r.reason);
    }
    log::info!(
        "ingested {} articles ({} lines rejected) into {}",
        snap.articles.len(),
        snap.rejections.len(),
        dir.display()
    );
    Ok(())
}

fn clean_cmd(_ctx: &Ctx, root: &Path) -> Outcome {
    let l = Layout::new(root);
    let snap = CorpusSnapshot::load(&l.ingest_dir()).map_err(stage(Stage::Clean))?;
    let cleaned = clean(&snap);
    cleaned.save(&l.corpus_dir()).map_err(stage(Stage::Clean))?;
    let log = cleaned.log.unwrap_or_default();
    println!("ingested\t{}", log.ingested);
    println!("removed_non_english\t{}", log.removed.non_english);
    println!("removed_duplicate\t{}", log.removed.duplicate);
    println!("removed_no_explicit_mention\t{}", log.removed.no_explicit_mention);
    println!("retained_mentions_ai\t{}", log.retained.mentions_ai);
    println!("retained_chatgpt_only\t{}", log.retained.mentions_chatgpt_only);
    if !log.flagged_undetermined.is_empty() {
        log::warn!("language undetermined (kept): {}", log.flagged_undetermined.join(", "));
    }
    Ok(())
}

fn sentences(_ctx: &Ctx, root: &Path) -> Outcome {
    let dir = Layout::new(root).corpus_dir();
    let snap = CorpusSnapshot::load(&dir).map_err(stage(Stage::Sentences))?;
    let sentences = extract_target_sentences(&snap);
    fio::write_jsonl(&dir.join(SENTENCES_FILE), &sentences).map_err(stage(Stage::Sentences))?;
    log::info!("{} target sentences", sentences.len());
    Ok(())
}

fn annotate(ctx: &Ctx, root: &Path, lexicon: Option<PathBuf>, import: Option<PathBuf>, strict: bool) -> Outcome {
    let fail = stage(Stage::Annotate);
    let dir = Layout::new(root).corpus_dir();
    let sentences = load_sentences(&dir).map_err(&fail)?;
    let import = import.or_else(|| if lexicon.is_none() { ctx.config.annotations.clone() } else { None });
    let lexicon = lexicon.or_else(|| ctx.config.lexicon.clone());
    let inventory = (strict || ctx.config.strict_frames).then(FrameInventory::builtin);
    let (store, rejections) = match (import, lexicon) {
        (Some(path), _) => import_file(&path, &sentences, inventory.as_ref()).map_err(&fail)?,
        (None, Some(lex)) => {
            let lexicon = frameshift_core::annotation::TriggerLexicon::load(&lex).map_err(&fail)?;
            (annotate_with_lexicon(&sentences, &lexicon).map_err(&fail)?, Vec::new())
        }
        (None, None) => {
            return Err(fail(Error::MissingInput(
                "no lexicon (--lexicon) and no annotation file (--import)".into(),
            )))
        }
    };
    save_store(&store, &dir).map_err(&fail)?;
    fio::write_jsonl(&dir.join(ANNOTATION_REJECTIONS_FILE), &rejections).map_err(&fail)?;
    for r in &rejections {
        log::warn!("line {} rejected: {}", r.line, r.reason);
    }
    let occurrences: u64 = store.totals().annotations.iter().sum();
    log::info!(
        "{} frame occurrences over {} sentences; {} lines rejected",
        occurrences,
        store.len(),
        rejections.len()
    );
    Ok(())
}

fn print_json<T: serde::Serialize>(v: &T) -> Outcome {
    let text = serde_json::to_string_pretty(v).map_err(at(1))?;
    println!("{text}");
    Ok(())
}

fn print_rows<K: std::fmt::Display>(header: &str, rows: &[Comparison<K>], alpha: f64) {
    println!("{header}\tcount_before\tcount_after\tshare_before\tshare_after\tratio\tp_value\tsignificant");
    for r in rows {
        let t = &r.table;
        println!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            r.key,
            t.a,
            t.c,
            fmt_share(t.share_before),
            fmt_share(t.share_after),
            fmt_ratio(t.share_ratio),
            fmt_p(t.p_value),
            t.is_significant(alpha)
        );
    }
}

fn warn_skipped<K: std::fmt::Display>(skipped: &[K], totals: [u64; 2]) {
    if skipped.is_empty() {
        return;
    }
    let keys: Vec<String> = skipped.iter().map(K::to_string).collect();
    log::warn!(
        "not tested (period totals {} / {}): {}",
        totals[0],
        totals[1],
        keys.join(", ")
    );
}

fn stats(config: &RunConfig, root: &Path, kind: StatsKind, frameset: Option<&str>, json: bool) -> Outcome {
    let fail = stage(Stage::Stats);
    let dir = Layout::new(root).corpus_dir();
    let corpus = CorpusSnapshot::load(&dir).map_err(&fail)?;
    let opts = config.analysis_options();
    let alpha = opts.alpha;
    match kind {
        StatsKind::Descriptive => {
            let d = descriptive_stats(&corpus);
            if json {
                return print_json(&d);
            }
            println!("articles\t{}\t{}", d.articles[0], d.articles[1]);
            println!("monthly_average\t{:.1}\t{:.1}", d.monthly_average[0], d.monthly_average[1]);
            println!("mean_mentions\t{:.2}\t{:.2}", d.mentions.means[0], d.mentions.means[1]);
            if let Some(t) = &d.mentions.mann_whitney {
                println!("mann_whitney_p\t{}", fmt_p(t.p_value));
            }
            if let Some(t) = &d.mentions.welch {
                println!("welch_p\t{}", fmt_p(t.p_value));
            }
            println!("agi_share\t{}\t{}", fmt_pct(d.agi_share[0]), fmt_pct(d.agi_share[1]));
            println!("month\tbefore\tafter");
            for m in &d.monthly {
                println!("{}\t{}\t{}", m.month, m.before, m.after);
            }
            Ok(())
        }
        StatsKind::Frames => {
            let store = load_store(&dir).map_err(&fail)?;
            let before = frame_frequencies(&store, Period::Before);
            let after = frame_frequencies(&store, Period::After);
            let keys = top_k_union(&before, &after, opts.top_k_frames);
            let cmp = compare_frame_shares(&store, &keys, opts.correction);
            warn_skipped(&cmp.skipped, [before.total, after.total]);
            if json {
                return print_json(&cmp);
            }
            print_rows("frame", &cmp.rows, alpha);
            Ok(())
        }
        StatsKind::Pairs => {
            let store = load_store(&dir).map_err(&fail)?;
            let [b, a] = extract_target_fe_pairs(&store, &opts.target).map_err(&fail)?;
            let (rows, skipped) = compare_tables(&b, &a, &top_k_union(&b, &a, opts.top_k_pairs), opts.correction);
            warn_skipped(&skipped, [b.total, a.total]);
            if json {
                return print_json(&rows);
            }
            print_rows("pair", &rows, alpha);
            Ok(())
        }
        StatsKind::Frameset => {
            let store = load_store(&dir).map_err(&fail)?;
            let spec = config.frameset_by_name(frameset.unwrap_or("danger")).map_err(at(EXIT_CONFIG))?;
            match spec.counting_mode {
                CountingMode::FrameOccurrence => {
                    let share = frameset_occurrence_share(&store, &spec, opts.correction).map_err(&fail)?;
                    if json {
                        return print_json(&share);
                    }
                    println!(
                        "{}\tshare {} -> {}\tp {}",
                        share.name,
                        fmt_pct(share.shares[0]),
                        fmt_pct(share.shares[1]),
                        fmt_p(share.table.p_value)
                    );
                    print_rows("frame", &share.rows, alpha);
                }
                CountingMode::PairSentencePresence => {
                    let p = frameset_sentence_presence(&store, &spec).map_err(&fail)?;
                    if json {
                        return print_json(&p);
                    }
                    let agg = p.aggregate(opts.correction).map_err(&fail)?;
                    println!(
                        "{}\tshare {} -> {}\tp {}",
                        p.name,
                        fmt_pct(p.shares[0]),
                        fmt_pct(p.shares[1]),
                        fmt_p(agg.p_value)
                    );
                    print_rows("pair", &p.comparisons(opts.correction), alpha);
                }
                CountingMode::ArticlePresence => {
                    let s = frameset_article_share(&store, &corpus, &spec).map_err(&fail)?;
                    if json {
                        return print_json(&s);
                    }
                    println!(
                        "{}\tarticles {}/{} -> {}/{}\tshare {} -> {}",
                        s.name,
                        s.articles_with_member[0],
                        s.articles[0],
                        s.articles_with_member[1],
                        s.articles[1],
                        fmt_pct(s.shares[0]),
                        fmt_pct(s.shares[1])
                    );
                }
            }
            Ok(())
        }
    }
}

fn curate(root: &Path, min_count: u64, json: bool) -> Outcome {
    let store = load_store(&Layout::new(root).corpus_dir()).map_err(stage(Stage::Stats))?;
    let candidates = curate_candidates(&store, min_count);
    if json {
        return print_json(&candidates);
    }
    println!("frame\tcount_before\tcount_after\ttotal");
    for c in candidates {
        println!("{}\t{}\t{}\t{}", c.frame, c.count_before, c.count_after, c.total);
    }
    Ok(())
}

fn sample(ctx: &Ctx, root: &Path, frameset: &str, n: Option<usize>) -> Outcome {
    let fail = at(EXIT_CODING);
    let l = Layout::new(root);
    let store = load_store(&l.corpus_dir()).map_err(&fail)?;
    let spec = ctx.config.frameset_by_name(frameset).map_err(at(EXIT_CONFIG))?;
    let sspec = SampleSpec::new(&spec.name, n.unwrap_or(ctx.config.sample_size), ctx.config.seed).map_err(&fail)?;
    let sample = draw_sample(&store, &spec, &sspec).map_err(&fail)?;
    let sessions = open_sessions(&l.coding_dir(), &ctx.config).map_err(&fail)?;
    let path = sessions.save_sample(&sample).map_err(&fail)?;
    log::info!(
        "{} sentences ({} before of {}, {} after of {}) written to {}",
        sample.len(),
        sample.before.len(),
        sample.population[0],
        sample.after.len(),
        sample.population[1],
        path.display()
    );
    println!("{}", sample.sample_id);
    Ok(())
}

fn code(
    ctx: &Ctx,
    root: &Path,
    session: Option<String>,
    sample: Option<String>,
    annotator: Option<String>,
    schema: Option<String>,
) -> Outcome {
    let fail = at(EXIT_CODING);
    let store = open_sessions(&Layout::new(root).coding_dir(), &ctx.config).map_err(&fail)?;
    let exists = session.as_deref().is_some_and(|id| store.load(id).is_ok());
    let id = if exists {
        session.expect("checked")
    } else {
        let (Some(sample_id), Some(annotator)) = (sample, annotator) else {
            return Err(Failure {
                code: EXIT_CODING,
                message: match session {
                    Some(id) => format!("unknown session `{id}` (pass --sample and --annotator to create it)"),
                    None => "pass --session, or --sample and --annotator to start one".into(),
                },
            });
        };
        let schema = match schema {
            Some(s) => s,
            None => store.load_sample(&sample_id).map_err(&fail)?.spec.frameset,
        };
        let s = store
            .create_session(&sample_id, &annotator, &schema, session.as_deref())
            .map_err(&fail)?;
        log::info!("created session {}", s.session_id);
        s.session_id
    };
    let stdin = io::stdin();
    let outcome = code_session(&store, &id, stdin.lock(), io::stdout()).map_err(&fail)?;
    io::stdout().flush().map_err(at(EXIT_CODING))?;
    log::info!(
        "labeled {} this run; {}/{} in session {id}",
        outcome.labeled_now,
        outcome.labeled,
        outcome.total
    );
    Ok(())
}

fn agree(ctx: &Ctx, root: &Path, a: &str, b: &str, json: bool) -> Outcome {
    let fail = at(EXIT_CODING);
    let store = open_sessions(&Layout::new(root).coding_dir(), &ctx.config).map_err(&fail)?;
    let sa = store.load(a).map_err(&fail)?;
    let sb = store.load(b).map_err(&fail)?;
    let schema = store.schema(&sa.schema).map_err(&fail)?;
    let report = agreement(&confusion(&sa, &sb, &schema).map_err(&fail)?).map_err(&fail)?;
    if json {
        return print_json(&report);
    }
    println!("items\t{}", report.total);
    println!("observed_agreement\t{:.4}", report.p_o);
    println!("expected_agreement\t{:.4}", report.p_e);
    match report.kappa {
        Some(k) => println!("kappa\t{k:.4}"),
        None => println!("kappa\tundefined"),
    }
    let cats = &report.matrix.categories;
    println!("{a} \\ {b}\t{}", cats.join("\t"));
    for (cat, row) in cats.iter().zip(&report.matrix.counts) {
        let cells: Vec<String> = row.iter().map(u64::to_string).collect();
        println!("{cat}\t{}", cells.join("\t"));
    }
    Ok(())
}

fn report(ctx: &Ctx, root: &Path, dest: &Path, alpha: Option<f64>) -> Outcome {
    let fail = stage(Stage::Report);
    let l = Layout::new(root);
    let path = l.stats_dir().join(ANALYSIS_FILE);
    if !path.exists() {
        return Err(fail(Error::MissingInput(format!(
            "{} (run `frameshift run` or the stats stage first)",
            path.display()
        ))));
    }
    let mut inputs: ReportInputs = fio::read_json(&path).map_err(&fail)?;
    inputs.alpha = alpha.unwrap_or(ctx.config.alpha);
    if !(inputs.alpha > 0.0 && inputs.alpha < 1.0) {
        return Err(at(EXIT_CONFIG)("alpha must lie in (0, 1)"));
    }
    if l.coding_dir().join("sessions").is_dir() {
        let sessions = open_sessions(&l.coding_dir(), &ctx.config).map_err(&fail)?;
        inputs.coding = frameshift_core::pipeline::coding_summaries(&sessions).map_err(&fail)?;
    }
    inputs.metadata.seeds.insert("default".into(), ctx.config.seed);
    let bundle = emit_tables(&inputs, dest).map_err(&fail)?;
    for o in &bundle.omitted {
        log::warn!("omitted {}: {}", o.name, o.reason);
    }
    log::info!("{} files written to {}", bundle.files.len(), dest.display());
    Ok(())
}

fn serve(
    ctx: &Ctx,
    root: &Path,
    host: Option<String>,
    port: Option<u16>,
    allow_lan: bool,
    static_dir: Option<PathBuf>,
) -> Outcome {
    let svc = &ctx.config.service;
    let host = host.unwrap_or_else(|| svc.host.clone());
    let port = port.unwrap_or(svc.port);
    let ip = host
        .parse()
        .map_err(|e| at(EXIT_CONFIG)(format!("invalid host `{host}`: {e}")))?;
    let opts = frameshift_service::ServeOptions {
        addr: SocketAddr::new(ip, port),
        coding_dir: Layout::new(root).coding_dir(),
        static_dir: static_dir.or_else(|| svc.static_dir.clone()),
        allow_lan,
    };
    let rt = tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()
        .map_err(at(EXIT_SERVE))?;
    rt.block_on(async move {
        let shutdown = async {
            let _ = tokio::signal::ctrl_c().await;
            log::info!("shutting down");
        };
        frameshift_service::serve(opts, shutdown).await
    })
    .map_err(at(EXIT_SERVE))
}

fn run(ctx: &Ctx, input: PathBuf, force: bool) -> Outcome {
    let mut pipeline = Pipeline::new(ctx.config.clone(), Some(input), &ctx.out);
    pipeline.force = force;
    let result = pipeline.run_with(|o| {
        let status = match o.status {
            StageStatus::Ran => "ran",
            StageStatus::UpToDate => "ok",
        };
        println!("{:<10} {status:<4} {}", o.stage.name(), o.detail);
    });
    result.map(|_| ()).map_err(|f| Failure {
        code: f.stage.exit_code(),
        message: f.to_string(),
    })
}
