//! Command-line front end.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use log::info;
use serde::Serialize;

use crate::certifier::{find_n0, full_proof, GapBoundParams, ProofConfig, DEFAULT_TAIL_START};
use crate::error::{Error, Result};
use crate::exact_volume::{gap_rows, verify_range, volume_rows};
use crate::pipeline::{sweep, CoeffTable, PipelineConfig, SweepResult};
use crate::quadrature::{enclose_i, QuadratureConfig};
use crate::series_bounds::remainder_curves;

#[derive(Debug, Parser)]
#[command(name = "cubeslice", version, about = "Certified monotonicity of diagonal cube sections")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Right end of the t domain.
    #[arg(long, global = true, default_value_t = 1.1)]
    pub a: f64,
    /// Taylor order carried through the pipeline.
    #[arg(long, global = true, default_value_t = 7)]
    pub order: usize,
    /// Truncation index of the building-block series.
    #[arg(long, global = true, default_value_t = 20)]
    pub truncation: u32,
    #[arg(long, global = true, default_value_t = 0.001)]
    pub subdiv_width: f64,
    /// First n covered by the tail certificate.
    #[arg(long, global = true, default_value_t = DEFAULT_TAIL_START)]
    pub n_tail: u32,
    /// Quadrature panels for the cross-check.
    #[arg(long, global = true, default_value_t = 10_000)]
    pub panels: usize,
    #[arg(long, global = true, default_value = ".")]
    pub out_dir: PathBuf,
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, env = "CUBESLICE_JOBS", default_value_t = 0)]
    pub jobs: usize,
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
}

impl GlobalOpts {
    pub fn pipeline(&self) -> PipelineConfig {
        PipelineConfig {
            a: self.a,
            subdiv_width: self.subdiv_width,
            truncation: self.truncation,
            order: self.order,
            ..PipelineConfig::default()
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run every stage and write proof_report.json.
    Prove,
    /// Sweep the domain and print R.
    BoundR,
    /// Find n0 from R (swept unless given).
    FindN0 {
        #[arg(long)]
        r: Option<f64>,
    },
    /// Write table_x.csv and table_t.csv.
    Tables,
    /// Check monotonicity exactly and write gaps.csv.
    VerifyExact {
        #[arg(long, default_value_t = 200)]
        max_n: u32,
    },
    /// Write volumes.csv, gaps.csv and remainders.csv.
    Figures {
        #[arg(long, default_value_t = 60)]
        max_n: u32,
    },
    /// Compare quadrature enclosures with exact volumes.
    Quadrature {
        #[arg(long, value_delimiter = ',', default_value = "3,5,10,25,50")]
        n: Vec<u32>,
    },
}

#[derive(Debug, Serialize)]
struct TableRecord {
    order: usize,
    lo: f64,
    hi: f64,
    mag: f64,
}

fn write_table(path: &Path, table: &CoeffTable) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for (order, c) in table.hulls.iter().enumerate() {
        w.serialize(TableRecord {
            order,
            lo: c.lo(),
            hi: c.hi(),
            mag: c.mag(),
        })?;
    }
    w.flush()?;
    Ok(())
}

fn write_rows<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

fn write_tables(dir: &Path, s: &SweepResult) -> Result<()> {
    write_table(&dir.join("table_x.csv"), &s.x_table)?;
    write_table(&dir.join("table_t.csv"), &s.t_table)
}

/// Runs a parsed command and returns the process exit code.
pub fn run(cli: Cli) -> Result<i32> {
    let g = &cli.global;
    if g.jobs > 0 {
        // fails only if a pool already exists, which is harmless
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(g.jobs)
            .build_global();
    }
    fs::create_dir_all(&g.out_dir)?;
    let pipeline = g.pipeline();

    match cli.command {
        Command::Prove => {
            let cfg = ProofConfig {
                pipeline,
                n_tail: g.n_tail,
                r_override: None,
            };
            let report = full_proof(&cfg);
            for s in &report.stages {
                println!("{:<14} {}  {}", s.name, if s.passed { "ok  " } else { "FAIL" }, s.detail);
            }
            if let (Some(x), Some(t)) = (&report.x_hulls, &report.t_hulls) {
                let table = |h: &Vec<crate::Interval>| CoeffTable {
                    hulls: h.clone(),
                    rows: Vec::new(),
                };
                write_table(&g.out_dir.join("table_x.csv"), &table(x))?;
                write_table(&g.out_dir.join("table_t.csv"), &table(t))?;
            }
            let json = serde_json::to_string_pretty(&report)?;
            fs::write(g.out_dir.join("proof_report.json"), json)?;
            println!("verdict: {}", if report.verdict { "PROVED" } else { "NOT PROVED" });
            Ok(if report.verdict { 0 } else { 1 })
        }
        Command::BoundR => {
            let s = sweep(&pipeline)?;
            info!("{} subintervals, {} direct cross-checks", s.subintervals, s.direct_cross_checks);
            println!("top derivative enclosure: {}", s.top_derivative);
            println!("R = {}", s.derivative_bound);
            Ok(0)
        }
        Command::FindN0 { r } => {
            let r = match r {
                Some(r) => r,
                None => sweep(&pipeline)?.derivative_bound,
            };
            let cert = find_n0(&GapBoundParams::new(r)?, g.n_tail)?;
            println!("R = {r}");
            println!("n0 = {}", cert.n0);
            println!(
                "tail from {}: ratio sum {:.6}, geometric ratios {:.6} {:.6}",
                cert.n_tail, cert.tail.ratio_sum, cert.tail.geometric_ratio_a, cert.tail.geometric_ratio_exp
            );
            Ok(if cert.verdict { 0 } else { 1 })
        }
        Command::Tables => {
            let s = sweep(&pipeline)?;
            write_tables(&g.out_dir, &s)?;
            for (k, (x, t)) in s.x_table.hulls.iter().zip(&s.t_table.hulls).enumerate() {
                println!("{k}  x: {x}  t: {t}");
            }
            Ok(0)
        }
        Command::VerifyExact { max_n } => {
            if max_n < 4 {
                return Err(Error::InvalidParameter(format!("max-n = {max_n} must be at least 4")));
            }
            let rows = gap_rows(2, max_n, 30)?;
            write_rows(&g.out_dir.join("gaps.csv"), &rows)?;
            let cert = verify_range(3, max_n)?;
            match cert.steps.iter().find(|s| !s.increasing) {
                None => println!("I(n+1) > I(n) for 3 <= n < {max_n}"),
                Some(s) => println!("step at n = {} is not increasing", s.n),
            }
            Ok(if cert.verdict { 0 } else { 1 })
        }
        Command::Figures { max_n } => {
            if max_n < 4 {
                return Err(Error::InvalidParameter(format!("max-n = {max_n} must be at least 4")));
            }
            write_rows(&g.out_dir.join("volumes.csv"), &volume_rows(1, max_n, 30)?)?;
            write_rows(&g.out_dir.join("gaps.csv"), &gap_rows(2, max_n, 30)?)?;
            let curves = remainder_curves(&[5, 10, 15, 20], &[0, 3, 7], 0.95, 50)?;
            write_rows(&g.out_dir.join("remainders.csv"), &curves)?;
            println!("wrote volumes.csv, gaps.csv, remainders.csv to {}", g.out_dir.display());
            Ok(0)
        }
        Command::Quadrature { n } => {
            let cfg = QuadratureConfig {
                panels: g.panels,
                a: g.a,
            };
            let mut all = true;
            for n in n {
                let q = enclose_i(n, &cfg)?;
                let exact = crate::exact_volume::volume_interval(n)?;
                let ok = q.overlaps(&exact);
                all &= ok;
                println!("n = {n}: quadrature {q}, exact {exact}, {}", if ok { "consistent" } else { "INCONSISTENT" });
            }
            Ok(if all { 0 } else { 1 })
        }
    }
}
