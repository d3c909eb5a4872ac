mod cache;

use std::collections::BTreeSet;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use num_traits::Signed;
use meander_core::arccore::{ChordDiagram, Partition, Stratum};
use meander_core::census::{census_table, CensusConfig, CensusTable};
use meander_core::freqlab::{self, format_significant, FreqConfig, FrequencySeries};
use meander_core::linvol::LinearInvolution;
use meander_core::mvconst::{self, PiExpression};
use meander_core::planetree::{PlaneTree, SeparatrixDiagram};

use cache::Cache;

#[derive(Parser)]
#[command(name = "meanders", version, about = "Meander censuses, Masur-Veech constants and convergence series")]
struct Cli {
    /// Directory of the result cache; caching is off when unset.
    #[arg(long, global = true, env = "MEANDERS_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    /// Ignore the cache for this run.
    #[arg(long, global = true)]
    no_cache: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum What {
    Vol,
    Cyl1,
    Cyl11,
    P1,
    #[value(name = "coeff+")]
    CoeffPlus,
    #[value(name = "coeff-", alias = "coeff−")]
    CoeffMinus,
}

#[derive(Subcommand)]
enum Command {
    /// Number of meanders with n arcs, split by number of poles.
    Census {
        #[arg(long)]
        n_max: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        jobs: Option<usize>,
        /// Largest n accepted.
        #[arg(long, default_value_t = 11)]
        cap: usize,
        /// Only count meanders with these pole numbers, e.g. `4,5`.
        #[arg(long, value_delimiter = ',')]
        poles: Option<Vec<usize>>,
    },
    /// Exact constants of a stratum, e.g. `--stratum 1^2,-1^6 --what p1`.
    Constants {
        #[arg(long, conflicts_with = "poles", required_unless_present = "poles", allow_hyphen_values = true)]
        stratum: Option<String>,
        /// Number of poles `p`; selects the principal stratum `Q(1^(p-4), -1^p)`
        /// or, for coefficients, the count by `p` minimal arcs.
        #[arg(long)]
        poles: Option<u32>,
        #[arg(long, value_enum)]
        what: What,
        /// Significant digits of the decimal value.
        #[arg(long, default_value_t = 12)]
        precision: usize,
    },
    /// Cumulative proportion of connected gluings as a CSV series.
    Converge {
        /// Two tree codes, e.g. `(()()),(()())`.
        #[arg(long, conflicts_with = "leaves", required_unless_present = "leaves")]
        trees: Option<String>,
        /// Total number of leaves; sums over all tree pairs.
        #[arg(long)]
        leaves: Option<usize>,
        /// Equator-dual diagram to count, e.g. `{(()()), ()}`; needs `--trees`.
        #[arg(long, requires = "trees")]
        diagram: Option<String>,
        #[arg(long = "N", short = 'N')]
        n_max: usize,
        /// Output file; stdout when unset.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        jobs: Option<usize>,
        /// Stop after this many seconds, keeping the rows finished so far.
        #[arg(long)]
        time_limit: Option<f64>,
        #[arg(long, default_value_t = 12)]
        precision: usize,
    },
    /// Two-row linear involution of a pair of arc systems.
    Involution {
        /// Top and bottom arc systems as parenthesis words, `TOP/BOTTOM`.
        #[arg(long)]
        meander: String,
        /// Also check that decoding gives back the same pair.
        #[arg(long)]
        round_trip: bool,
    },
}

fn main() -> ExitCode {
    std::panic::set_hook(Box::new(|info| {
        let report = serde_json::json!({ "status": "error", "kind": "invariant", "message": info.to_string() });
        eprintln!("{report}");
    }));
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let chain: Vec<String> = e.chain().map(|c| c.to_string()).collect();
            eprintln!("{}", serde_json::json!({ "status": "error", "kind": "usage", "message": chain }));
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let cache = match (&cli.cache_dir, cli.no_cache) {
        (Some(dir), false) => Some(Cache::open(dir)?),
        _ => None,
    };
    let mut stdout = std::io::stdout().lock();
    match cli.command {
        Command::Census { n_max, format, jobs, cap, poles } => {
            let mut cfg = CensusConfig::default().with_cap(cap);
            if let Some(j) = jobs {
                cfg = cfg.with_jobs(j);
            }
            if let Some(p) = &poles {
                cfg = cfg.with_poles(p.iter().copied());
            }
            let fmt = match format {
                Format::Csv => "csv",
                Format::Json => "json",
            };
            let params = format!("n_max={n_max};format={fmt};cap={cap};poles={poles:?}");
            let compute = || -> Result<String> {
                let table = census_table(n_max, &cfg)?;
                Ok(match format {
                    Format::Csv => census_csv(&table, poles.as_deref())?,
                    Format::Json => serde_json::to_string_pretty(&table)? + "\n",
                })
            };
            let out = match &cache {
                Some(c) => c.get_or_compute("census", &params, compute)?,
                None => compute()?,
            };
            stdout.write_all(out.as_bytes())?;
        }
        Command::Constants { stratum, poles, what, precision } => {
            let out = constants(stratum.as_deref(), poles, what, precision)?;
            stdout.write_all(out.as_bytes())?;
        }
        Command::Converge { trees, leaves, diagram, n_max, out, jobs, time_limit, precision } => {
            let mut cfg = FreqConfig::default();
            if let Some(j) = jobs {
                cfg.jobs = j.max(1);
            }
            cfg.deadline = time_limit.map(|s| Instant::now() + Duration::from_secs_f64(s));
            let compute = || -> Result<(FrequencySeries, String)> {
                let series = converge(trees.as_deref(), leaves, diagram.as_deref(), n_max, &cfg)?;
                let mut buf = Vec::new();
                series.write_csv(&mut buf, precision)?;
                Ok((series, String::from_utf8(buf)?))
            };
            let params = format!("trees={trees:?};leaves={leaves:?};diagram={diagram:?};N={n_max};precision={precision}");
            let hit = cache.as_ref().and_then(|c| c.get("converge", &params));
            let csv = match hit {
                Some(h) => h,
                None => {
                    let (series, csv) = compute()?;
                    if series.rows.is_empty() {
                        eprintln!("warning: N = {n_max} is below the number of edges of the trees; the series is empty");
                    } else if series.truncated {
                        eprintln!(
                            "warning: time limit reached; series stops at n = {} of {n_max}",
                            series.n_reached().unwrap_or(0)
                        );
                    }
                    if let (Some(c), false) = (&cache, series.truncated) {
                        c.put("converge", &params, &csv)?;
                    }
                    csv
                }
            };
            match out {
                Some(path) => std::fs::write(&path, csv).with_context(|| format!("writing {}", path.display()))?,
                None => stdout.write_all(csv.as_bytes())?,
            }
        }
        Command::Involution { meander, round_trip } => {
            let (top, bottom) = parse_pair(&meander)?;
            let li = LinearInvolution::from_pair(&top, &bottom)?;
            writeln!(stdout, "{li}")?;
            if round_trip {
                if li.to_pair() != (top, bottom) {
                    bail!("decoding the involution does not give back the pair");
                }
                writeln!(stdout, "ok")?;
            }
        }
    }
    Ok(())
}

/// One row per `n` with `M_{n,p}` for `p = 4..` and the total.
fn census_csv(table: &CensusTable, poles: Option<&[usize]>) -> Result<String> {
    let columns: Vec<usize> = match poles {
        Some(p) => p.iter().copied().collect::<BTreeSet<_>>().into_iter().collect(),
        None => {
            let observed = table.rows.iter().flat_map(|r| r.by_poles.keys().copied()).max().unwrap_or(4);
            (4..=observed.max(8)).collect()
        }
    };
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let mut header = vec!["n".to_string()];
    header.extend(columns.iter().map(|p| format!("p{p}")));
    if poles.is_none() {
        header.push("total".into());
    }
    w.write_record(&header)?;
    for row in &table.rows {
        let mut rec = vec![row.n.to_string()];
        rec.extend(columns.iter().map(|&p| row.poles(p).to_string()));
        if poles.is_none() {
            rec.push(row.total.to_string());
        }
        w.write_record(&rec)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

/// Decimal rendering that survives powers of pi far outside the `f64` range.
fn decimal(e: &PiExpression, digits: usize) -> String {
    if let Some(ln) = e.ln_abs() {
        let l10 = ln / std::f64::consts::LN_10;
        let exponent = l10.floor();
        if !(-6.0..15.0).contains(&exponent) {
            let (q, _) = e.as_monomial().expect("single term");
            let sign = if q.is_negative() { "-" } else { "" };
            let mantissa = 10f64.powf(l10 - exponent);
            return format!("{sign}{mantissa:.prec$}e{exponent}", prec = digits.saturating_sub(1));
        }
    }
    format_significant(e.to_f64(), digits)
}

fn constants(stratum: Option<&str>, poles: Option<u32>, what: What, digits: usize) -> Result<String> {
    let stratum: Stratum = match (stratum, poles) {
        (Some(s), _) => s.parse().with_context(|| format!("parsing stratum {s:?}"))?,
        (None, Some(p)) if p >= 4 => Stratum { zeros: Partition::power(1, p - 4), poles: p as usize },
        (None, Some(p)) if matches!(what, What::CoeffPlus) => {
            Stratum { zeros: Partition::empty(), poles: p as usize }
        }
        (None, Some(p)) => bail!("a stratum needs at least 4 poles, got {p}"),
        (None, None) => bail!("give --stratum or --poles"),
    };
    let nu = &stratum.zeros;
    let mut out = format!("stratum: {}\n", stratum.label());
    let mut value = |name: &str, e: &PiExpression| {
        out += &format!("{name}: {e}\ndecimal: {}\n", decimal(e, digits));
    };
    match what {
        What::Vol => value("vol", &mvconst::volume(nu)),
        What::Cyl1 => value("cyl1", &PiExpression::integer(mvconst::cyl1(nu))),
        What::Cyl11 => value("cyl11", &mvconst::cyl11(nu)),
        What::P1 => value("p1", &mvconst::p1(nu)),
        What::CoeffPlus | What::CoeffMinus => {
            let c = match (what, poles) {
                (What::CoeffPlus, Some(p)) => mvconst::mplus_coefficient(p)?,
                (_, Some(p)) => mvconst::mminus_coefficient(p)?,
                (What::CoeffPlus, None) => mvconst::mplus_nu_coefficient(nu)?,
                (_, None) => mvconst::mminus_nu_coefficient(nu)?,
            };
            value(if what == What::CoeffPlus { "coeff+" } else { "coeff-" }, &c.leading);
            out += &format!("exponent: {}\ncounts: {}\n", c.exponent, c.description);
        }
    }
    Ok(out)
}

fn parse_tree(code: &str) -> Result<PlaneTree> {
    PlaneTree::from_code(code.trim()).map_err(|e| anyhow!("invalid tree {code:?}: {e}"))
}

fn parse_tree_pair(text: &str) -> Result<(PlaneTree, PlaneTree)> {
    let body = text.trim().trim_start_matches('{').trim_end_matches('}');
    let parts: Vec<&str> = body.split(',').collect();
    if parts.len() != 2 {
        bail!("expected two comma-separated tree codes, got {text:?}");
    }
    Ok((parse_tree(parts[0])?, parse_tree(parts[1])?))
}

fn converge(
    trees: Option<&str>,
    leaves: Option<usize>,
    diagram: Option<&str>,
    n_max: usize,
    cfg: &FreqConfig,
) -> Result<FrequencySeries> {
    if let Some(p) = leaves {
        return Ok(freqlab::p_connected_total(p, n_max, cfg)?);
    }
    let (top, bottom) = parse_tree_pair(trees.expect("clap requires trees or leaves"))?;
    Ok(match diagram {
        Some(d) => {
            let (a, b) = parse_tree_pair(d)?;
            freqlab::p_diagram_series(&top, &bottom, &SeparatrixDiagram::new(a, b), n_max, cfg)?
        }
        None => freqlab::p_connected_series(&top, &bottom, n_max, cfg)?,
    })
}

fn parse_pair(text: &str) -> Result<(ChordDiagram, ChordDiagram)> {
    let (t, b) = text.split_once('/').ok_or_else(|| anyhow!("expected TOP/BOTTOM, got {text:?}"))?;
    let top = ChordDiagram::from_dyck_word(t.trim()).with_context(|| format!("top word {t:?}"))?;
    let bottom = ChordDiagram::from_dyck_word(b.trim()).with_context(|| format!("bottom word {b:?}"))?;
    Ok((top, bottom))
}
