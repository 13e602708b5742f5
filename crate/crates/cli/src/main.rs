use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hypernet::degeneration::{
    sweep, tree_limit_check, AbelianFamily, LaurentFamily, RepFamily, SchottkyFamily,
};
use hypernet::dessin::{build_dessin, coset_permutations, fold_subgroup, Permutation};
use hypernet::fpgroup::{enumerate_classes, parse_word_list};
use hypernet::limitset::{
    box_dimension, circle_deviation, enumerate_limit_set_with, render, EnumConfig, GroupSpec, LimitError,
    MarkovRoot, Window,
};
use hypernet::netgraph::{loop_basis, walk_to_word, Network, Walk};
use hypernet::numfmt::g9;
use hypernet::qnet::{Circuit, DEFAULT_AREA_CAP};
use hypernet::sl2rep::{classify, repfile};
use hypernet::{Matrix2C, Word};

/// Environment variable holding the worker thread count for limit sets.
const THREADS_ENV: &str = "HYPERNET_THREADS";

#[derive(Parser, Debug)]
#[command(name = "hypernet", version, about = "Loop groups of networks, their representations and limit sets")]
struct Cli {
    /// Log level: error, warn, info, debug or trace.
    #[arg(long, global = true, default_value = "warn")]
    log: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Loop basis of a network file; optionally turn walks into words.
    Graph {
        #[arg(long)]
        input: PathBuf,
        /// Closed walk as signed edge ids, e.g. "1 -2 3"; repeatable.
        #[arg(long)]
        walk: Vec<String>,
    },
    /// Characters, Morgan-Shalen coordinates and translation lengths.
    Character {
        #[arg(long)]
        rep: PathBuf,
        /// Comma-separated words, e.g. "a,ab,abAB".
        #[arg(long, conflicts_with = "max_len", required_unless_present = "max_len")]
        words: Option<String>,
        /// All conjugacy classes up to this length instead of --words.
        #[arg(long)]
        max_len: Option<usize>,
        /// Conjugate the representation by a random element drawn from this seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rescaled length vectors along a diverging family.
    Degenerate {
        /// "schottky", "abelian", or a family file.
        #[arg(long, default_value = "schottky")]
        family: String,
        /// Comma-separated increasing parameter values.
        #[arg(long, default_value = "5,10,15,20")]
        t: String,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
        /// Speed of the built-in families.
        #[arg(long, default_value_t = 1.0)]
        speed: f64,
        /// Length vectors as CSV.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Tree-limit report as JSON.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Limit set of a two-generator group.
    Limitset {
        /// Traces "x,y,z" or "x,y"; entries like 3, 3+0.2i, -1.5i.
        #[arg(long, conflicts_with = "rep", required_unless_present = "rep")]
        traces: Option<String>,
        /// Root of the Markov equation used when z is omitted.
        #[arg(long, value_enum, default_value_t = RootArg::Larger)]
        root: RootArg,
        /// Representation file with two generators, used as given.
        #[arg(long)]
        rep: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-3)]
        eps: f64,
        #[arg(long, default_value_t = 30)]
        depth: usize,
        /// Soft cap on the number of points.
        #[arg(long, default_value_t = 1_000_000)]
        cap: usize,
        /// PPM image output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Point cloud CSV output.
        #[arg(long)]
        cloud: Option<PathBuf>,
        #[arg(long, default_value_t = 800)]
        width: usize,
        #[arg(long, default_value_t = 800)]
        height: usize,
        /// "re_min,re_max,im_min,im_max".
        #[arg(long, default_value = "-1.5,1.5,-1.5,1.5")]
        window: String,
    },
    /// Dessin of a subgroup of F(a, b) or of a permutation pair.
    Dessin {
        /// Comma-separated generating words of a finite-index subgroup.
        #[arg(long, conflicts_with_all = ["sigma_a", "sigma_b"], required_unless_present = "sigma_a")]
        subgroup: Option<String>,
        /// Cycle notation, e.g. "(1 2 3)".
        #[arg(long, requires = "sigma_b")]
        sigma_a: Option<String>,
        #[arg(long, requires = "sigma_a")]
        sigma_b: Option<String>,
        /// Number of darts when the cycles do not show it.
        #[arg(long)]
        darts: Option<usize>,
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run a circuit file on the tensor state of the areas.
    Qnet {
        #[arg(long)]
        circuit: PathBuf,
        /// Amplitudes CSV; printed to stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_AREA_CAP)]
        cap: usize,
    },
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum RootArg {
    Larger,
    Smaller,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

/// Parses `3`, `-2.5`, `0.2i`, `3+0.2i`, `1e-3-4i`, `i`, `-i`.
fn parse_complex(s: &str) -> Result<Complex64> {
    let s = s.trim();
    let bad = || anyhow::anyhow!("bad complex number {s:?}");
    let Some(body) = s.strip_suffix('i') else {
        return Ok(Complex64::new(s.parse().map_err(|_| bad())?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        t => t.parse().map_err(|_| bad())?,
    };
    Ok(Complex64::new(re.parse().map_err(|_| bad())?, im))
}

fn parse_floats(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().with_context(|| format!("bad number {t:?}")))
        .collect()
}

fn run_graph(input: &Path, walks: &[String]) -> Result<()> {
    let net: Network = read(input)?.parse()?;
    let basis = loop_basis(&net);
    let ids = |v: &mut dyn Iterator<Item = u32>| v.map(|x| x.to_string()).collect::<Vec<_>>().join(",");
    println!("vertices {}", net.vertices().len());
    println!("edges {}", net.edges().len());
    println!("areas {}", net.areas().len());
    println!("components {}", basis.components);
    println!("rank {}", basis.rank);
    println!("tree {}", ids(&mut basis.spanning_tree.iter().copied()));
    println!("generators {}", ids(&mut basis.generators.iter().copied()));
    for w in walks {
        let walk: Walk = w.parse()?;
        println!("word {} {}", walk, walk_to_word(&net, &basis, &walk)?);
    }
    Ok(())
}

fn run_character(rep: &Path, words: Option<&str>, max_len: Option<usize>, seed: Option<u64>) -> Result<String> {
    let mut rep = repfile::parse(&read(rep)?)?;
    if let Some(seed) = seed {
        let g = Matrix2C::random_sl2(&mut ChaCha8Rng::seed_from_u64(seed), 2.0);
        rep = rep.conjugate(&g);
    }
    let words: Vec<Word> = match (words, max_len) {
        (Some(ws), _) => parse_word_list(ws)?,
        (None, Some(l)) => enumerate_classes(rep.rank(), l)?.representatives().to_vec(),
        (None, None) => bail!("give --words or --max-len"),
    };
    let mut out = String::from("word,re,im,theta,kind,length\n");
    for w in &words {
        let chi = rep.character(w)?;
        let class = classify(&rep.evaluate(w)?)?;
        out += &format!(
            "{w},{},{},{},{},{}\n",
            g9(chi.re),
            g9(chi.im),
            g9((chi.norm() + 2.0).ln()),
            class.kind.as_str(),
            g9(class.translation_length)
        );
    }
    Ok(out)
}

fn run_degenerate(
    family: &str,
    t: &str,
    max_len: usize,
    speed: f64,
    out: Option<&Path>,
    report: Option<&Path>,
) -> Result<()> {
    let fam: Box<dyn RepFamily> = match family {
        "schottky" => Box::new(SchottkyFamily { speed }),
        "abelian" => Box::new(AbelianFamily { speed }),
        path => Box::new(LaurentFamily::parse(&read(Path::new(path))?)?),
    };
    let ts = parse_floats(t)?;
    let rank = fam.at(*ts.first().context("no parameter values")?)?.rank();
    let classes = Arc::new(enumerate_classes(rank, max_len)?);
    let sw = sweep(fam.as_ref(), &classes, &ts)?;
    let check = tree_limit_check(&sw, &classes);
    println!("classes {}", classes.len());
    for (k, v) in sw.vectors.iter().enumerate() {
        println!("t {} lambda {}", g9(sw.t_values[k]), g9(v.scale));
    }
    for (k, d) in sw.deltas.iter().enumerate() {
        println!("delta {}..{} {}", g9(sw.t_values[k]), g9(sw.t_values[k + 1]), g9(*d));
    }
    println!("converged {}", check.converged);
    println!("oracle_distance {}", g9(check.oracle_distance));
    println!("tree_limit {}", if check.passed { "pass" } else { "fail" });
    if let Some(p) = out {
        write(p, sw.to_csv().as_bytes())?;
    }
    if let Some(p) = report {
        write(p, (check.to_json() + "\n").as_bytes())?;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn run_limitset(
    traces: Option<&str>,
    root: RootArg,
    rep: Option<&Path>,
    cfg: &EnumConfig,
    out: Option<&Path>,
    cloud_out: Option<&Path>,
    size: (usize, usize),
    window: &str,
) -> Result<()> {
    let window: Window = window.parse()?;
    let group = match (traces, rep) {
        (Some(tr), _) => {
            let v = tr.split(',').map(parse_complex).collect::<Result<Vec<_>>>()?;
            match v[..] {
                [x, y, z] => GroupSpec::from_traces(x, y, z)?,
                [x, y] => {
                    let root = match root {
                        RootArg::Larger => MarkovRoot::Larger,
                        RootArg::Smaller => MarkovRoot::Smaller,
                    };
                    GroupSpec::from_trace_pair(x, y, root)?
                }
                _ => bail!("--traces takes two or three values, got {}", v.len()),
            }
        }
        (None, Some(path)) => {
            let rep = repfile::parse(&read(path)?)?;
            match rep.images() {
                [a, b] => GroupSpec::new(*a, *b)?,
                [a] => GroupSpec::single(*a)?,
                other => bail!("limit sets need one or two generators, got {}", other.len()),
            }
        }
        (None, None) => bail!("give --traces or --rep"),
    };
    let cloud = match enumerate_limit_set_with(&group, cfg) {
        Err(LimitError::Elementary { points }) => {
            let shown: Vec<String> = points
                .iter()
                .map(|p| p.to_plane().map_or("inf".to_string(), |z| format!("{}{:+}i", g9(z.re), g9(z.im))))
                .collect();
            bail!("elementary group: limit set is {{{}}}", shown.join(", "));
        }
        other => other?,
    };
    println!("points {}", cloud.len());
    println!("truncated {}", cloud.truncated);
    match circle_deviation(&cloud) {
        Ok(d) => println!("circle_deviation {}", g9(d)),
        Err(e) => println!("circle_deviation n/a ({e})"),
    }
    match box_dimension(&cloud) {
        Ok(d) => println!("box_dimension {}", g9(d)),
        Err(e) => println!("box_dimension n/a ({e})"),
    }
    if let Some(p) = out {
        write(p, &render(&cloud, size.0, size.1, &window)?)?;
    }
    if let Some(p) = cloud_out {
        write(p, cloud.to_csv().as_bytes())?;
    }
    Ok(())
}

fn run_dessin(
    subgroup: Option<&str>,
    sigmas: Option<(&str, &str)>,
    darts: Option<usize>,
    dot: Option<&Path>,
    json: Option<&Path>,
) -> Result<()> {
    let (sa, sb) = match (subgroup, sigmas) {
        (Some(words), _) => {
            let graph = fold_subgroup(&parse_word_list(words)?)?;
            coset_permutations(&graph)?
        }
        (None, Some((a, b))) => {
            let (pa, pb) = (Permutation::parse(a, darts)?, Permutation::parse(b, darts)?);
            let n = darts.unwrap_or(pa.len().max(pb.len()));
            (Permutation::parse(a, Some(n))?, Permutation::parse(b, Some(n))?)
        }
        (None, None) => bail!("give --subgroup or --sigma-a/--sigma-b"),
    };
    let d = build_dessin(sa, sb)?;
    let s = d.summary();
    println!("index {}", s.darts);
    println!("sigma_a {}", s.sigma_a);
    println!("sigma_b {}", s.sigma_b);
    println!("vertices {} ({} black, {} white)", s.vertices, s.black_vertices, s.white_vertices);
    println!("edges {}", s.edges);
    println!("faces {}", s.faces);
    println!("genus {}", s.genus);
    if let Some(p) = dot {
        write(p, d.to_dot().as_bytes())?;
    }
    if let Some(p) = json {
        write(p, d.summary_json().as_bytes())?;
    }
    Ok(())
}

fn run_qnet(circuit: &Path, out: Option<&Path>, cap: usize) -> Result<()> {
    let c = Circuit::parse(&read(circuit)?)?;
    let state = c.run(cap)?;
    let csv = state.to_csv();
    match out {
        Some(p) => {
            write(p, csv.as_bytes())?;
            println!("areas {}", state.n_areas());
            println!("gates {}", c.gates.len());
            println!("norm {}", g9(state.norm()));
        }
        None => print!("{csv}"),
    }
    Ok(())
}

fn threads() -> Result<usize> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => bail!("{THREADS_ENV} must be a positive integer, got {v:?}"),
        },
        Err(_) => Ok(EnumConfig::default().threads),
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Graph { input, walk } => run_graph(&input, &walk),
        Command::Character { rep, words, max_len, seed, out } => {
            let csv = run_character(&rep, words.as_deref(), max_len, seed)?;
            match out {
                Some(p) => write(&p, csv.as_bytes()),
                None => {
                    print!("{csv}");
                    Ok(())
                }
            }
        }
        Command::Degenerate { family, t, max_len, speed, out, report } => {
            run_degenerate(&family, &t, max_len, speed, out.as_deref(), report.as_deref())
        }
        Command::Limitset { traces, root, rep, eps, depth, cap, out, cloud, width, height, window } => {
            let cfg = EnumConfig { epsilon: eps, max_depth: depth, point_cap: cap, threads: threads()? };
            run_limitset(
                traces.as_deref(),
                root,
                rep.as_deref(),
                &cfg,
                out.as_deref(),
                cloud.as_deref(),
                (width, height),
                &window,
            )
        }
        Command::Dessin { subgroup, sigma_a, sigma_b, darts, dot, json } => {
            let sigmas = sigma_a.as_deref().zip(sigma_b.as_deref());
            run_dessin(subgroup.as_deref(), sigmas, darts, dot.as_deref(), json.as_deref())
        }
        Command::Qnet { circuit, out, cap } => run_qnet(&circuit, out.as_deref(), cap),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    env_logger::Builder::new().parse_filters(&cli.log).init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
