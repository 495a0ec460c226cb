//! Command-line front end: design verification, trade detection, matrix
//! construction, girth measurement, QC bounds/search/lifting, SC assembly
//! and channel simulation.
//!
//! Exit codes: 0 success, 1 validation failure, 2 usage error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use trade_ldpc::alist::{parse_alist, write_alist};
use trade_ldpc::builder::parity_check_from_design;
use trade_ldpc::design::{verify_design, verify_super_simple, Design};
use trade_ldpc::matrix::{weight_profile, Regularity, SparseBinaryMatrix};
use trade_ldpc::qc;
use trade_ldpc::sc;
use trade_ldpc::sim;
use trade_ldpc::tanner::{girth_report, tanner_girth};
use trade_ldpc::trades::{build_trade_graph, find_volume2_trades};

#[derive(Parser, Debug)]
#[command(
    name = "trade-ldpc",
    version,
    about = "trade-based LDPC construction toolkit"
)]
struct Cli {
    /// Emit machine-readable JSON lines instead of plain text
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Develop base blocks and print the resulting block list
    Develop {
        design: PathBuf,
        /// write the developed design (explicit blocks) to a file
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check pair coverage and the super-simple property
    VerifyDesign { design: PathBuf },
    /// Detect volume-2 trades and print trade-graph statistics
    Trades {
        design: PathBuf,
        /// write an edge list: one `blockA blockB x y` line per trade
        #[arg(long)]
        edges: Option<PathBuf>,
    },
    /// Build the pair-by-block matrix and derived parity-check matrix
    BuildMatrix {
        design: PathBuf,
        /// which stage to export
        #[arg(long, value_enum, default_value_t = Stage::H)]
        stage: Stage,
        /// write the chosen stage in alist format
        #[arg(long)]
        alist: Option<PathBuf>,
        /// print a labeled 0/1 dump
        #[arg(long)]
        dump: bool,
    },
    /// Tanner girth (and short-cycle counts) of a matrix
    Girth {
        #[command(flatten)]
        input: MatrixInput,
        /// also count cycles up to girth + 4
        #[arg(long)]
        counts: bool,
    },
    /// Lifting-degree lower bounds for a base matrix
    QcBounds {
        /// base matrix file
        #[arg(long)]
        base: PathBuf,
        #[arg(long, value_enum, default_value_t = GirthArg::Six)]
        girth: GirthArg,
    },
    /// Search an exponent matrix for a base matrix
    QcSearch {
        /// base matrix file (alternative: --from-design)
        #[arg(long, conflicts_with = "from_design")]
        base: Option<PathBuf>,
        /// build the base matrix from a design file first
        #[arg(long)]
        from_design: Option<PathBuf>,
        /// row-shifted copies to request when building from a design
        #[arg(long, default_value_t = 1)]
        copies: usize,
        /// column weight target when building from a design
        #[arg(long, default_value_t = 3)]
        column_weight: u32,
        #[arg(long)]
        lifting_degree: usize,
        #[arg(long, value_enum, default_value_t = GirthArg::Six)]
        girth: GirthArg,
        /// partition the first free exponent across threads
        #[arg(long)]
        parallel: bool,
        /// abort after this many explored nodes
        #[arg(long)]
        node_cap: Option<u64>,
        /// write the found exponent matrix
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lift an exponent matrix to its parity-check matrix
    QcLift {
        #[arg(long)]
        exponent: PathBuf,
        #[arg(long)]
        alist: Option<PathBuf>,
    },
    /// Assemble a terminated time-varying SC-LDPC parity-check matrix
    ScBuild {
        design: PathBuf,
        /// rows per syndrome matrix
        #[arg(long)]
        m: usize,
        /// syndrome memory for the feasibility report (defaults to rows/m - 1)
        #[arg(long)]
        mh: Option<usize>,
        /// termination length
        #[arg(long = "L", default_value_t = 1)]
        l: usize,
        #[arg(long, value_enum, default_value_t = PolicyArg::Fixed)]
        policy: PolicyArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        attempts: u64,
        /// use an explicit schedule file instead of a policy
        #[arg(long)]
        schedule: Option<PathBuf>,
        /// write the schedule that was used
        #[arg(long)]
        schedule_out: Option<PathBuf>,
        #[arg(long)]
        alist: Option<PathBuf>,
    },
    /// Monte-Carlo BER/FER sweep with sum-product decoding
    Simulate {
        /// parity-check matrix in alist format
        #[arg(long)]
        matrix: PathBuf,
        /// Eb/N0 sweep `start:end:step` in dB, or a single value
        #[arg(long)]
        ebno: String,
        #[arg(long, default_value_t = 100)]
        min_fe: u64,
        #[arg(long, default_value_t = 1_000_000)]
        max_frames: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        iters: usize,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Stage {
    A,
    C,
    H,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum GirthArg {
    #[value(name = "6")]
    Six,
    #[value(name = "8")]
    Eight,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum PolicyArg {
    Fixed,
    Search,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    eprintln!("# config: {:?}", cli);
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn regularity_text(h: &SparseBinaryMatrix) -> String {
    match weight_profile(h).classify() {
        Regularity::Regular { column, row } => format!("({column},{row})-regular"),
        Regularity::Irregular => "irregular".into(),
    }
}

fn girth_text(g: Option<usize>) -> String {
    g.map_or_else(|| "infinity".into(), |g| g.to_string())
}

fn run(cli: &Cli) -> anyhow::Result<bool> {
    match &cli.command {
        Command::Develop { design, out } => {
            let d = Design::from_path(design)?;
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "type": "develop",
                        "v": d.v, "k": d.k, "lambda": d.lambda,
                        "blocks": d.blocks.iter().map(|b| b.elements.clone()).collect::<Vec<_>>(),
                    })
                );
            } else {
                println!("{} blocks over {} points", d.blocks.len(), d.v);
                for b in &d.blocks {
                    println!("{}", b.label());
                }
            }
            if let Some(path) = out {
                let explicit = Design::explicit(
                    d.v,
                    d.k,
                    d.lambda,
                    d.groups.clone(),
                    d.blocks.iter().map(|b| b.elements.clone()).collect(),
                )?;
                std::fs::write(path, explicit.to_toml_string())?;
            }
            Ok(true)
        }
        Command::VerifyDesign { design } => {
            let d = Design::from_path(design)?;
            let report = verify_design(&d);
            let super_simple = verify_super_simple(&d);
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "type": "verify",
                        "valid": report.is_valid(),
                        "super_simple": super_simple,
                        "defects": report.defects.iter().map(|p| {
                            json!({"pair": [p.x, p.y], "found": p.found, "expected": p.expected})
                        }).collect::<Vec<_>>(),
                        "duplicate_blocks": report.duplicate_blocks,
                    })
                );
            } else {
                println!(
                    "coverage: {}",
                    if report.is_valid() {
                        "valid"
                    } else {
                        "INVALID"
                    }
                );
                for p in report.defects.iter().take(20) {
                    println!(
                        "  pair ({},{}) covered {} times, expected {}",
                        p.x, p.y, p.found, p.expected
                    );
                }
                if report.defects.len() > 20 {
                    println!("  .. and {} more", report.defects.len() - 20);
                }
                for (a, b) in &report.duplicate_blocks {
                    println!("  blocks {a} and {b} are identical");
                }
                println!("super-simple: {super_simple}");
            }
            Ok(report.is_valid())
        }
        Command::Trades { design, edges } => {
            let d = Design::from_path(design)?;
            let trades = find_volume2_trades(&d)?;
            let graph = build_trade_graph(&d, &trades);
            let girth = graph.girth();
            let bound = graph.defining_set_lower_bound();
            if let Some(path) = edges {
                let mut text = String::new();
                for t in &trades {
                    text.push_str(&format!(
                        "{} {} {} {}\n",
                        t.block_a, t.block_b, t.pair.0, t.pair.1
                    ));
                }
                std::fs::write(path, text)?;
            }
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "type": "trades",
                        "trades": trades.len(),
                        "vertices": graph.n_vertices,
                        "girth": girth,
                        "defining_set_lower_bound": bound,
                    })
                );
            } else {
                println!("{} trades, graph girth {}", trades.len(), girth_text(girth));
                println!(
                    "graph: {} vertices, {} edges, defining-set lower bound {}",
                    graph.n_vertices,
                    trades.len(),
                    bound
                );
                for t in &trades {
                    println!(
                        "  {} ~ {}  on ({},{})",
                        d.blocks[t.block_a].label(),
                        d.blocks[t.block_b].label(),
                        t.pair.0,
                        t.pair.1
                    );
                }
            }
            Ok(true)
        }
        Command::BuildMatrix {
            design,
            stage,
            alist,
            dump,
        } => {
            let d = Design::from_path(design)?;
            let m = parity_check_from_design(&d)?;
            let chosen = match stage {
                Stage::A => &m.a,
                Stage::C => &m.c,
                Stage::H => &m.h,
            };
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "type": "matrix",
                        "stage": format!("{stage:?}"),
                        "rows": chosen.n_rows(),
                        "cols": chosen.n_cols(),
                        "ones": chosen.count_ones(),
                        "regularity": regularity_text(chosen),
                    })
                );
            } else {
                println!(
                    "A {}x{}, C {}x{}, H {}x{} ({})",
                    m.a.n_rows(),
                    m.a.n_cols(),
                    m.c.n_rows(),
                    m.c.n_cols(),
                    m.h.n_rows(),
                    m.h.n_cols(),
                    regularity_text(&m.h)
                );
            }
            if *dump {
                print!("{}", chosen.dump());
            }
            if let Some(path) = alist {
                std::fs::write(path, write_alist(chosen))?;
            }
            Ok(true)
        }
        Command::Girth { input, counts } => {
            let (h, origin) = input.load()?;
            if *counts {
                let report = girth_report(&h, 4);
                if cli.json {
                    println!(
                        "{}",
                        json!({
                            "type": "girth",
                            "source": origin,
                            "girth": report.girth,
                            "cycle_counts": report.cycle_counts,
                        })
                    );
                } else {
                    println!("Tanner girth {}", girth_text(report.girth));
                    for (len, count) in &report.cycle_counts {
                        println!("  cycles of length {len}: {count}");
                    }
                }
            } else {
                let g = tanner_girth(&h);
                if cli.json {
                    println!("{}", json!({"type": "girth", "source": origin, "girth": g}));
                } else {
                    println!("Tanner girth {}", girth_text(g));
                }
            }
            Ok(true)
        }
        Command::QcBounds { base, girth } => {
            let w = qc::parse_base_matrix(&std::fs::read_to_string(base)?)?;
            match girth {
                GirthArg::Six => {
                    let b = qc::bound_girth6(&w);
                    let trade_based = qc::bound_girth6_tradebased(&w).ok();
                    if cli.json {
                        println!(
                            "{}",
                            json!({
                                "type": "bounds", "girth": 6,
                                "x": b.x, "y": b.y, "z": b.z, "n_lower": b.n_lower,
                                "trade_based_n_lower": trade_based.map(|t| t.n_lower),
                            })
                        );
                    } else {
                        println!("X={} Y={} Z={} N>={}", b.x, b.y, b.z, b.n_lower);
                        if let Some(t) = trade_based {
                            println!("trade-based: N>=max(2X,2Y)={}", t.n_lower);
                        }
                    }
                }
                GirthArg::Eight => {
                    let b = qc::bound_girth8(&w)?;
                    if cli.json {
                        println!(
                            "{}",
                            json!({
                                "type": "bounds", "girth": 8,
                                "x": b.x, "y": b.y, "m": b.m, "z": b.z, "n_lower": b.n_lower,
                            })
                        );
                    } else {
                        println!(
                            "X'={} Y'={} M={} Z'={} N>={}",
                            b.x, b.y, b.m, b.z, b.n_lower
                        );
                    }
                }
            }
            Ok(true)
        }
        Command::QcSearch {
            base,
            from_design,
            copies,
            column_weight,
            lifting_degree,
            girth,
            parallel,
            node_cap,
            out,
        } => {
            let w = match (base, from_design) {
                (Some(path), None) => qc::parse_base_matrix(&std::fs::read_to_string(path)?)?,
                (None, Some(path)) => {
                    let d = Design::from_path(path)?;
                    let m = parity_check_from_design(&d)?;
                    let p = qc::build_p(&m.h, *copies)?;
                    if p.copies() < *copies {
                        eprintln!(
                            "note: only {} of {} copies are feasible",
                            p.copies(),
                            copies
                        );
                    }
                    let cap = if *girth == GirthArg::Eight { 2 } else { 3 };
                    qc::assign_weights(&p, *column_weight, cap)?
                }
                _ => anyhow::bail!("give exactly one of --base or --from-design"),
            };
            let target = match girth {
                GirthArg::Six => qc::GirthTarget::Six,
                GirthArg::Eight => qc::GirthTarget::Eight,
            };
            let config = qc::SearchConfig {
                node_cap: *node_cap,
                parallel: *parallel,
            };
            match qc::search_exponent_with(&w, *lifting_degree, target, config) {
                Ok(outcome) => {
                    if cli.json {
                        println!(
                            "{}",
                            json!({
                                "type": "search",
                                "assigned_entries": outcome.stats.assigned_entries,
                                "total_entries": outcome.stats.total_entries,
                                "explored_nodes": outcome.stats.explored_nodes,
                            })
                        );
                    } else {
                        println!(
                            "found: {} assigned entries ({} replicated), {} nodes",
                            outcome.stats.assigned_entries,
                            outcome.stats.total_entries,
                            outcome.stats.explored_nodes
                        );
                    }
                    let text = qc::write_exponent_matrix(&outcome.exponent);
                    match out {
                        Some(path) => std::fs::write(path, text)?,
                        None => print!("{text}"),
                    }
                    Ok(true)
                }
                Err(trade_ldpc::Error::SearchExhausted { explored }) => {
                    eprintln!("search exhausted after {explored} nodes");
                    Ok(false)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::QcLift { exponent, alist } => {
            let b = qc::parse_exponent_matrix(&std::fs::read_to_string(exponent)?)?;
            let h = b.lift();
            let g = tanner_girth(&h);
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "type": "lift",
                        "rows": h.n_rows(), "cols": h.n_cols(),
                        "regularity": regularity_text(&h),
                        "girth": g,
                    })
                );
            } else {
                println!(
                    "lifted {}x{} ({}), Tanner girth {}",
                    h.n_rows(),
                    h.n_cols(),
                    regularity_text(&h),
                    girth_text(g)
                );
            }
            if let Some(path) = alist {
                std::fs::write(path, write_alist(&h))?;
            }
            Ok(true)
        }
        Command::ScBuild {
            design,
            m,
            mh,
            l,
            policy,
            seed,
            attempts,
            schedule,
            schedule_out,
            alist,
        } => {
            let d = Design::from_path(design)?;
            let mats = parity_check_from_design(&d)?;
            let c = &mats.c;
            let report_mh = mh.unwrap_or_else(|| (c.n_rows() / m.max(&1)).saturating_sub(1));
            let feasibility = sc::sc_feasibility(&d, *m, report_mh)?;
            let sched = match schedule {
                Some(path) => sc::SCSchedule::from_path(c, path)?,
                None => {
                    let policy = match policy {
                        PolicyArg::Fixed => sc::SchedulePolicy::Fixed,
                        PolicyArg::Search => sc::SchedulePolicy::Search {
                            seed: *seed,
                            attempts: *attempts,
                        },
                    };
                    sc::schedule_times(c, *m, *l, policy)?
                }
            };
            let coupling = sc::check_coupling(c, &sched)?;
            let assembled = sc::assemble_hl(c, &sched)?;
            let girth = tanner_girth(&assembled.h);
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "type": "sc",
                        "rows": assembled.h.n_rows(), "cols": assembled.h.n_cols(),
                        "m": assembled.m, "mh": assembled.m_h, "L": assembled.l,
                        "constraint_length": assembled.constraint_length(),
                        "coupling_clean": coupling.ok(),
                        "feasible": feasibility.feasible,
                        "girth": girth,
                    })
                );
            } else {
                println!(
                    "H_[{}]: {}x{}, m={} mh={} constraint length {}",
                    assembled.l,
                    assembled.h.n_rows(),
                    assembled.h.n_cols(),
                    assembled.m,
                    assembled.m_h,
                    assembled.constraint_length()
                );
                println!(
                    "feasibility: blocks-in-trades={} pairs-in-trades={} rows-available={} feasible={} (min mh {})",
                    feasibility.blocks_in_trades,
                    feasibility.pairs_in_trades,
                    feasibility.rows_available,
                    feasibility.feasible,
                    feasibility.min_m_h
                );
                println!(
                    "coupling: {} ({} violations), Tanner girth {}",
                    if coupling.ok() { "clean" } else { "VIOLATED" },
                    coupling.violations.len(),
                    girth_text(girth)
                );
            }
            if let Some(path) = schedule_out {
                std::fs::write(path, sched.to_toml_string(c))?;
            }
            if let Some(path) = alist {
                std::fs::write(path, write_alist(&assembled.h))?;
            }
            Ok(coupling.ok())
        }
        Command::Simulate {
            matrix,
            ebno,
            min_fe,
            max_frames,
            seed,
            iters,
        } => {
            let h = parse_alist(&std::fs::read_to_string(matrix)?)?;
            sim::validate_for_decoding(&h)?;
            let points = parse_sweep(ebno)?;
            let stop = sim::SweepStop {
                min_frame_errors: *min_fe,
                max_frames: *max_frames,
            };
            let results = sim::ber_sweep(&h, &points, stop, *seed, *iters)?;
            if cli.json {
                for p in &results {
                    println!(
                        "{}",
                        json!({
                            "type": "sweep_point",
                            "ebno_db": p.eb_n0_db, "ber": p.ber, "fer": p.fer,
                            "frames": p.frames, "bit_errors": p.bit_errors,
                            "frame_errors": p.frame_errors,
                        })
                    );
                }
            } else {
                println!("{}", sim::SWEEP_CSV_HEADER);
                for p in &results {
                    println!("{}", p.csv_row());
                }
            }
            Ok(true)
        }
    }
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct MatrixInput {
    /// derive the parity-check matrix from a design file
    #[arg(long)]
    from_design: Option<PathBuf>,
    /// read a matrix in alist format
    #[arg(long)]
    alist: Option<PathBuf>,
}

impl MatrixInput {
    fn load(&self) -> anyhow::Result<(SparseBinaryMatrix, String)> {
        match (&self.from_design, &self.alist) {
            (Some(path), None) => {
                let d = Design::from_path(path)?;
                Ok((parity_check_from_design(&d)?.h, path.display().to_string()))
            }
            (None, Some(path)) => Ok((
                parse_alist(&std::fs::read_to_string(path)?)?,
                path.display().to_string(),
            )),
            _ => anyhow::bail!("give exactly one of --from-design or --alist"),
        }
    }
}

/// `a:b:step` inclusive sweep, or a single dB value.
fn parse_sweep(spec: &str) -> anyhow::Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        [one] => Ok(vec![one.parse()?]),
        [a, b, step] => {
            let (a, b, step): (f64, f64, f64) = (a.parse()?, b.parse()?, step.parse()?);
            anyhow::ensure!(step > 0.0, "sweep step must be positive");
            let mut out = Vec::new();
            let mut x = a;
            while x <= b + 1e-9 {
                out.push((x * 1e6).round() / 1e6);
                x += step;
            }
            Ok(out)
        }
        _ => anyhow::bail!("expected `value` or `start:end:step`"),
    }
}
