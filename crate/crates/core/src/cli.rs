//! Command-line front end.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Read as _, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::benchmark::load_design;
use crate::design::SocDesign;
use crate::oracle::{random_instance, validate, InstanceBounds};
use crate::rectangles::prepare;
use crate::render::{ascii_gantt, svg_gantt};
use crate::report::{build_report, render_text, render_tsv, Baselines, Cell};
use crate::scheduler::{schedule_run, Limits, Schedule};
use crate::wrapper::wrapper_sweep;

type CliResult<T> = std::result::Result<T, Box<dyn std::error::Error>>;

#[derive(Debug, Parser)]
#[command(
    name = "soctam",
    version,
    about = "SOC wrapper/TAM design and power-constrained test scheduling"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Svg,
    Tsv,
}

#[derive(Debug, Args)]
pub struct DesignArgs {
    /// Design file, ITC'02 `.soc` or native `.core`.
    #[arg(long, required_unless_present = "seed")]
    pub design: Option<PathBuf>,
    /// Per-core power file (`core_id mW` lines).
    #[arg(long)]
    pub power: Option<PathBuf>,
    /// Use a generated random design instead of `--design`.
    #[arg(long, conflicts_with = "design")]
    pub seed: Option<u64>,
    /// Core count for `--seed` designs.
    #[arg(long, default_value_t = 8)]
    pub cores: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Load a design and list its cores.
    Parse {
        #[command(flatten)]
        design: DesignArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Wrapper design results of one core across TAM widths 1..=wmax.
    WrapperTable {
        #[command(flatten)]
        design: DesignArgs,
        #[arg(long)]
        core: u32,
        #[arg(long, default_value_t = 64)]
        wmax: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Rectangle sets, T_min and diagonal order.
    Rects {
        #[command(flatten)]
        design: DesignArgs,
        #[arg(long)]
        wmax: u32,
    },
    /// Pack the design under the TAM width and optional power cap.
    Schedule {
        #[command(flatten)]
        design: DesignArgs,
        #[arg(long)]
        wmax: u32,
        #[arg(long)]
        pmax: Option<u64>,
        /// Render a chart; to FILE if given, else after the schedule.
        #[arg(long, num_args = 0..=1, default_missing_value = "-")]
        gantt: Option<String>,
        /// Chart style: text (ASCII) or svg.
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Check a schedule export; exit status 0 iff it has no violations.
    Validate {
        #[command(flatten)]
        design: DesignArgs,
        #[arg(long)]
        wmax: u32,
        #[arg(long)]
        pmax: Option<u64>,
        /// Schedule export file, `-` for stdin.
        #[arg(long)]
        schedule: String,
    },
    /// Compare our makespans with published values.
    Report {
        #[command(flatten)]
        design: DesignArgs,
        /// Baseline file; the bundled d695 table is used when omitted.
        #[arg(long)]
        baselines: Option<PathBuf>,
        /// Widths to report; defaults to the widths in the baseline file.
        #[arg(long, value_delimiter = ',')]
        wmax: Vec<u32>,
        /// Power caps to report (`none` for uncapped); defaults likewise.
        #[arg(long, value_delimiter = ',')]
        pmax: Vec<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn load(args: &DesignArgs) -> CliResult<SocDesign> {
    let power = args.power.as_deref().map(read).transpose()?;
    if let Some(seed) = args.seed {
        let mut design = random_instance(
            seed,
            InstanceBounds {
                n_cores: args.cores,
                max_chains: 12,
                max_len: 200,
                max_patterns: 300,
                max_power: 800,
            },
        );
        if let Some(text) = power {
            let p = crate::benchmark::parse_power_file(&text)?;
            crate::benchmark::merge_power(&mut design, &p)?;
        }
        return Ok(design);
    }
    let path = args.design.as_deref().ok_or("--design is required")?;
    Ok(load_design(&read(path)?, power.as_deref())?)
}

fn emit(out: &mut dyn Write, path: Option<&str>, text: &str) -> CliResult<()> {
    match path {
        None | Some("-") => out.write_all(text.as_bytes())?,
        Some(p) => fs::write(p, text).map_err(|e| format!("{p}: {e}"))?,
    }
    Ok(())
}

/// Run one command, writing its output to `out`. Returns the exit status.
pub fn execute(cli: Cli, out: &mut dyn Write) -> CliResult<i32> {
    match cli.command {
        Command::Parse { design, format } => {
            let d = load(&design)?;
            let sep = if format == Format::Tsv { "\t" } else { " " };
            let mut text = String::new();
            if format != Format::Tsv {
                let _ = writeln!(text, "design {} ({} cores)", d.name, d.len());
            }
            let header = [
                "core", "inputs", "outputs", "bidirs", "chains", "scan_ff", "patterns", "power",
            ];
            let _ = writeln!(text, "{}", header.join(sep));
            for c in &d.cores {
                let row = [
                    c.id as u64,
                    c.num_inputs as u64,
                    c.num_outputs as u64,
                    c.num_bidirs as u64,
                    c.scan_chain_lengths.len() as u64,
                    c.total_scan_length(),
                    c.num_patterns as u64,
                    c.power_mw as u64,
                ];
                let cells: Vec<String> = row.iter().map(u64::to_string).collect();
                let _ = writeln!(text, "{}", cells.join(sep));
            }
            out.write_all(text.as_bytes())?;
            Ok(0)
        }
        Command::WrapperTable {
            design,
            core,
            wmax,
            format,
        } => {
            let d = load(&design)?;
            if wmax == 0 {
                return Err(crate::error::Error::ZeroWidth.into());
            }
            let c = d.core(core).ok_or(crate::error::Error::UnknownCore(core))?;
            let mut rows = wrapper_sweep(c, wmax);
            rows.reverse();
            let mut text = String::new();
            let tsv = format == Format::Tsv;
            if tsv {
                text.push_str("tam_width\ttam_u\tlongest_chain\ttest_time\n");
            } else {
                let _ = writeln!(
                    text,
                    "{:>9} {:>6} {:>14} {:>10}",
                    "TAM width", "TAM_u", "longest chain", "test time"
                );
            }
            for r in rows {
                let range = if r.w_lo == r.w_hi {
                    r.w_lo.to_string()
                } else {
                    format!("{}-{}", r.w_lo, r.w_hi)
                };
                if tsv {
                    let _ = writeln!(
                        text,
                        "{range}\t{}\t{}\t{}",
                        r.tam_u, r.longest_chain, r.test_time
                    );
                } else {
                    let _ = writeln!(
                        text,
                        "{range:>9} {:>6} {:>14} {:>10}",
                        r.tam_u, r.longest_chain, r.test_time
                    );
                }
            }
            out.write_all(text.as_bytes())?;
            Ok(0)
        }
        Command::Rects { design, wmax } => {
            let d = load(&design)?;
            let packing = prepare(&d, wmax)?;
            let mut text = format!("tmin {}\n", packing.t_min);
            for (set, key) in packing.sets.iter().zip(&packing.keys) {
                let pts: Vec<String> = set
                    .points
                    .iter()
                    .map(|p| format!("{}:{}", p.tam_u, p.test_time))
                    .collect();
                let _ = writeln!(
                    text,
                    "core {} peak {} diagonal {:.2} rects {}",
                    set.core_id,
                    set.max_tam_u,
                    key.diagonal,
                    pts.join(" ")
                );
            }
            let order: Vec<String> = packing.order.iter().map(u32::to_string).collect();
            let _ = writeln!(text, "order: {}", order.join(" "));
            out.write_all(text.as_bytes())?;
            Ok(0)
        }
        Command::Schedule {
            design,
            wmax,
            pmax,
            gantt,
            format,
        } => {
            let d = load(&design)?;
            let limits = Limits::new(wmax, pmax);
            let run = schedule_run(&d, &limits)?;
            let s = &run.schedule;
            let mut text = s.to_export();
            let order: Vec<String> = run.packing.order.iter().map(u32::to_string).collect();
            let _ = writeln!(
                text,
                "# makespan {}  tmin {}  order: {}",
                s.makespan(),
                run.packing.t_min,
                order.join(" ")
            );
            let violations = validate(s, &d, &limits);
            for v in &violations {
                let _ = writeln!(text, "# violation: {v}");
            }
            out.write_all(text.as_bytes())?;
            if let Some(target) = gantt {
                let chart = match format {
                    Format::Svg => svg_gantt(s, wmax),
                    _ => ascii_gantt(s, wmax, 100),
                };
                emit(out, Some(&target), &chart)?;
            }
            Ok(if violations.is_empty() { 0 } else { 1 })
        }
        Command::Validate {
            design,
            wmax,
            pmax,
            schedule,
        } => {
            let d = load(&design)?;
            let text = if schedule == "-" {
                let mut buf = String::new();
                io::stdin().read_to_string(&mut buf)?;
                buf
            } else {
                read(Path::new(&schedule))?
            };
            let s = Schedule::parse_export(&text)?;
            let violations = validate(&s, &d, &Limits::new(wmax, pmax));
            let mut report = String::new();
            for v in &violations {
                let _ = writeln!(report, "{v}");
            }
            if violations.is_empty() {
                let _ = writeln!(
                    report,
                    "ok: {} cores, makespan {}",
                    s.placements.len(),
                    s.makespan()
                );
            } else {
                let _ = writeln!(report, "{} violation(s)", violations.len());
            }
            out.write_all(report.as_bytes())?;
            Ok(if violations.is_empty() { 0 } else { 1 })
        }
        Command::Report {
            design,
            baselines,
            wmax,
            pmax,
            format,
        } => {
            let d = load(&design)?;
            let baselines = match baselines {
                Some(p) => Baselines::parse(&read(&p)?)?,
                None => Baselines::d695(),
            };
            let caps: Vec<Option<u64>> = pmax
                .iter()
                .map(|p| match p.as_str() {
                    "none" => Ok(None),
                    v => v
                        .parse()
                        .map(Some)
                        .map_err(|_| format!("bad --pmax value {v:?}")),
                })
                .collect::<std::result::Result<_, _>>()?;
            let mut cells: Vec<Cell> = baselines
                .cells()
                .into_iter()
                .filter(|c| wmax.is_empty() || wmax.contains(&c.1))
                .filter(|c| caps.is_empty() || caps.contains(&c.0))
                .collect();
            if cells.is_empty() {
                let widths = if wmax.is_empty() {
                    vec![16, 24, 32, 40, 48, 64]
                } else {
                    wmax
                };
                let caps = if caps.is_empty() { vec![None] } else { caps };
                cells = caps
                    .iter()
                    .flat_map(|&p| widths.iter().map(move |&w| (p, w)))
                    .collect();
            }
            let rows = build_report(&d, &cells, &baselines)?;
            let text = match format {
                Format::Tsv => render_tsv(&rows),
                _ => render_text(&rows),
            };
            out.write_all(text.as_bytes())?;
            Ok(0)
        }
    }
}

/// Parse `args` and run; errors are printed to stderr with status 2.
pub fn main_with<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
