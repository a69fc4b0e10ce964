//! Command-line front end. Every subcommand validates its whole
//! configuration first, then computes, then writes CSV tables, a
//! two-column `.dat` file where a curve makes sense, and `manifest.json`.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::bounds_lab::{
    corollary_chain_check, gap_scaling, literature_comparison, proposition1_table, trial_state_upper_bound,
};
use crate::error::{Error, Result};
use crate::exact_diag::{diagonalize_sectors, full_spectrum};
use crate::holstein_primakoff::{
    build_h0, build_k, interaction_bound_check, projection_inequality_check, proposition2_survey,
    verify_equivalence_all, FockBasis, EQUIVALENCE_TOLERANCE,
};
use crate::lattice::{Boundary, Lattice, LatticeSpec};
use crate::spin_hilbert::{build_hamiltonian, build_sector, SpinSector, SpinValue};
use crate::spin_wave::{c0_constant, f0_finite, f0_limit, neumann_modes, periodic_modes, scaling_check, QuadratureOptions};

pub const THREADS_ENV: &str = "HEISENBERG_LAB_THREADS";
pub const MANIFEST_FILE: &str = "manifest.json";
pub const MANIFEST_SCHEMA: u32 = 1;

#[derive(Debug, Parser)]
#[command(name = "heisenberg-lab", version, about = "Numerical checks for the quantum Heisenberg ferromagnet")]
pub struct Cli {
    /// Directory receiving CSV, .dat and manifest files
    #[arg(long, global = true, default_value = ".")]
    pub output: PathBuf,
    /// Worker threads (default: $HEISENBERG_LAB_THREADS, else all cores)
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

/// Lattice and spin, e.g. `d=1,L=4,bc=periodic 2S=1`.
#[derive(Debug, Clone, Args, Serialize)]
pub struct SystemArgs {
    /// Lattice as "d=<1..3>,L=<side>,bc=<free|periodic>"
    pub lattice: String,
    /// Spin as "2S=<k>" (also "S=1/2", "S=1")
    pub spin: String,
}

/// Inverse temperatures.
#[derive(Debug, Clone, Args, Serialize)]
pub struct BetaArgs {
    /// "b", a comma list "0.5,1,inf", or a geometric grid "start:stop:points"
    #[arg(long, default_value = "1")]
    pub beta: String,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct QuadratureArgs {
    /// Gauss-Legendre points per axis and cell
    #[arg(long, default_value_t = 6)]
    pub order: usize,
    /// Relative tolerance of the Brillouin-zone integral
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Maximum number of live cubature cells
    #[arg(long, default_value_t = 40_000)]
    pub max_cells: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenvalues of H (all sectors, or one with --sector)
    Spectrum {
        #[command(flatten)]
        system: SystemArgs,
        /// Restrict to 2·S3_T = this value
        #[arg(long, allow_hyphen_values = true)]
        sector: Option<i64>,
        /// Also write H as "i j value" triplets (needs --sector)
        #[arg(long)]
        export_operator: bool,
    },
    /// Free energy and energy per site from exact diagonalization
    FreeEnergy {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        beta: BetaArgs,
    },
    /// Thermal two-point function <S_x.S_y>
    TwoPoint {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        beta: BetaArgs,
        /// Site pair "x,y"; default: all pairs
        #[arg(long)]
        pair: Option<String>,
    },
    /// One-magnon energies: plane waves (periodic) or cosine modes (free)
    SwDispersion {
        #[command(flatten)]
        system: SystemArgs,
    },
    /// Spin-wave free energy on the lattice's momentum grid, or in infinite volume
    SwFreeEnergy {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        beta: BetaArgs,
        /// Infinite-volume integral instead of the finite grid
        #[arg(long)]
        limit: bool,
        #[command(flatten)]
        quadrature: QuadratureArgs,
    },
    /// The low-temperature constant C0 by two independent routes
    C0 {
        /// Required agreement between the routes (>= 1e-10)
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// S^{3/2} beta^{5/2} f0 against C0 along a beta grid
    Scaling {
        /// Spin as "2S=<k>"
        spin: String,
        #[arg(long, default_value = "1:10000:9")]
        beta: String,
        #[command(flatten)]
        quadrature: QuadratureArgs,
    },
    /// Spectra of H and H0 + K agree in every particle-number block
    HpVerify {
        #[command(flatten)]
        system: SystemArgs,
        /// Also write H0 and K of this block as triplets
        #[arg(long)]
        export_block: Option<u64>,
    },
    /// Projection and interaction operator inequalities, two-particle density survey
    Inequalities {
        #[command(flatten)]
        system: SystemArgs,
        /// Occupancy cap for the projection inequality
        #[arg(long, default_value_t = 4)]
        n_max: u32,
        /// Largest particle number for the interaction bound
        #[arg(long, default_value_t = 4)]
        max_total_n: u64,
        /// Particle number of the density survey block
        #[arg(long, default_value_t = 2)]
        density_block: u64,
        /// Upper end of the survey energy window
        #[arg(long, default_value_t = f64::INFINITY)]
        max_energy: f64,
    },
    /// Lowest energy per total spin against the spin deficit
    Prop1 {
        #[command(flatten)]
        system: SystemArgs,
    },
    /// One-magnon gap of free-boundary boxes, gap·l²/S against pi²
    Gap {
        /// Spin as "2S=<k>"
        spin: String,
        #[arg(long, default_value_t = 1)]
        dim: usize,
        /// Comma-separated box sides
        #[arg(long, default_value = "2,4,6,8,10")]
        sides: String,
    },
    /// Gibbs variational bound from the projected magnon trial state
    TrialBound {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        beta: BetaArgs,
        /// Per-site occupancy cap of the boson space (default: exact)
        #[arg(long)]
        n_max: Option<u32>,
    },
    /// f0 in infinite volume next to the reference low-temperature curves
    Compare {
        /// Spin as "2S=<k>"
        spin: String,
        #[arg(long, default_value = "1:1000:7")]
        beta: String,
        /// Constant for the -C S (ln(S beta)/(S beta))^{5/2} reference curve
        #[arg(long)]
        prelim_c: Option<f64>,
        #[command(flatten)]
        quadrature: QuadratureArgs,
    },
    /// S² - <S_x.S_y> against |x-y|² e(beta) for all pairs
    Corollary {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long, default_value = "0,0.5,1,2,5,inf")]
        beta: String,
    },
    /// Re-run the command recorded in a manifest
    Replay {
        manifest: PathBuf,
    },
}

/// Inverse temperature grid.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaGrid(pub Vec<f64>);

impl FromStr for BetaGrid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::Config(format!("beta grid {s:?}: {why}"));
        let values: Vec<f64> = if s.contains(':') {
            let parts: Vec<&str> = s.split(':').collect();
            if parts.len() != 3 {
                return Err(bad("expected start:stop:points"));
            }
            let start: f64 = parts[0].trim().parse().map_err(|_| bad("bad start"))?;
            let stop: f64 = parts[1].trim().parse().map_err(|_| bad("bad stop"))?;
            let points: usize = parts[2].trim().parse().map_err(|_| bad("bad point count"))?;
            if !(start > 0.0 && stop > start && stop.is_finite()) || points < 2 {
                return Err(bad("need 0 < start < stop and at least 2 points"));
            }
            let ratio = (stop / start).ln() / (points - 1) as f64;
            (0..points)
                .map(|i| if i + 1 == points { stop } else { start * (ratio * i as f64).exp() })
                .collect()
        } else {
            s.split(',')
                .map(|p| p.trim().parse::<f64>().map_err(|_| bad("not a number")))
                .collect::<Result<_>>()?
        };
        if values.is_empty() || values.iter().any(|b| b.is_nan() || *b < 0.0) {
            return Err(bad("values must be non-negative"));
        }
        Ok(BetaGrid(values))
    }
}

impl BetaGrid {
    fn finite_positive(&self) -> Result<&[f64]> {
        if self.0.iter().any(|b| !(*b > 0.0 && b.is_finite())) {
            return Err(Error::Config("this command needs positive finite beta values".into()));
        }
        Ok(&self.0)
    }

    fn increasing(&self) -> Result<&[f64]> {
        if self.0.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Config("beta grid must be strictly increasing".into()));
        }
        Ok(&self.0)
    }
}

/// Shortest round-trip decimal; `-0` prints as `0`.
pub fn num(x: f64) -> String {
    if x == 0.0 {
        "0".into()
    } else {
        format!("{x}")
    }
}

/// Eigenvalue formatting: values within 1e-9 of an integer print as that
/// integer, others with 12 significant digits.
pub fn eig(x: f64) -> String {
    let r = x.round();
    if (x - r).abs() < 1e-9 {
        num(r)
    } else {
        let short: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
        num(short)
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn parse_system(args: &SystemArgs) -> Result<(Lattice, SpinValue)> {
    let spec: LatticeSpec = args.lattice.parse()?;
    let spin: SpinValue = args.spin.parse()?;
    Ok((spec.build()?, spin))
}

/// Files produced by one run, relative to the output directory.
struct Outputs {
    dir: PathBuf,
    files: Vec<String>,
}

impl Outputs {
    fn write(&mut self, name: &str, contents: &str) -> Result<()> {
        fs::write(self.dir.join(name), contents)?;
        self.files.push(name.to_string());
        Ok(())
    }

    fn table(&mut self, name: &str, header: &str, rows: &[Vec<String>]) -> Result<()> {
        let mut out = String::new();
        writeln!(out, "{header}").unwrap();
        for row in rows {
            writeln!(out, "{}", row.join(",")).unwrap();
        }
        self.write(name, &out)
    }

    fn curve(&mut self, name: &str, comment: &str, points: &[(f64, f64)]) -> Result<()> {
        let mut out = format!("# {comment}\n");
        for (x, y) in points {
            writeln!(out, "{} {}", num(*x), num(*y)).unwrap();
        }
        self.write(name, &out)
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Manifest {
    pub schema: u32,
    pub command: String,
    /// arguments after the program name, as given
    pub args: Vec<String>,
    pub version: String,
    pub tolerances: serde_json::Value,
    pub threads: usize,
    pub wall_time_seconds: f64,
    pub outputs: Vec<String>,
}

/// Parses `argv` (including the program name) and runs it. Returns the
/// process exit code: 0 success, 1 usage, 2 configuration, 3 infeasible
/// size, 4 numerical failure.
pub fn main_with_args(argv: Vec<String>) -> i32 {
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run(cli, argv.get(1..).unwrap_or_default().to_vec()) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn thread_count(flag: Option<usize>) -> Result<usize> {
    let from_env = match std::env::var(THREADS_ENV) {
        Ok(v) => Some(
            v.parse::<usize>()
                .map_err(|_| Error::Config(format!("{THREADS_ENV}={v:?} is not a thread count")))?,
        ),
        Err(_) => None,
    };
    let n = flag.or(from_env).unwrap_or(0);
    Ok(if n == 0 {
        std::thread::available_parallelism().map_or(1, |n| n.get())
    } else {
        n
    })
}

pub fn run(cli: Cli, args: Vec<String>) -> Result<()> {
    if let Command::Replay { manifest } = &cli.command {
        let recorded = read_manifest(manifest)?;
        if recorded.schema != MANIFEST_SCHEMA {
            return Err(Error::Config(format!("unsupported manifest schema {}", recorded.schema)));
        }
        let mut argv = vec!["heisenberg-lab".to_string()];
        argv.extend(recorded.args.iter().cloned());
        // an explicit --output on the replay wins over the recorded one
        if args.iter().any(|a| a == "--output" || a.starts_with("--output=")) {
            argv.push("--output".into());
            argv.push(cli.output.display().to_string());
        }
        let replayed = Cli::try_parse_from(&argv).map_err(|e| Error::Config(format!("recorded arguments: {e}")))?;
        if matches!(replayed.command, Command::Replay { .. }) {
            return Err(Error::Config("a manifest cannot record a replay".into()));
        }
        return run(replayed, argv[1..].to_vec());
    }

    let threads = thread_count(cli.threads)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let started = Instant::now();
    fs::create_dir_all(&cli.output)?;
    let mut out = Outputs {
        dir: cli.output.clone(),
        files: Vec::new(),
    };
    let (name, tolerances) = pool.install(|| execute(&cli.command, &mut out))?;
    let manifest = Manifest {
        schema: MANIFEST_SCHEMA,
        command: name.to_string(),
        args,
        version: env!("CARGO_PKG_VERSION").to_string(),
        tolerances,
        threads,
        wall_time_seconds: started.elapsed().as_secs_f64(),
        outputs: out.files.clone(),
    };
    let json = serde_json::to_string_pretty(&manifest).map_err(|e| Error::Numerical(e.to_string()))?;
    fs::write(out.dir.join(MANIFEST_FILE), json + "\n")?;
    Ok(())
}

fn quadrature_options(q: &QuadratureArgs) -> Result<QuadratureOptions> {
    if q.order == 0 || q.tol.is_nan() || q.tol <= 0.0 || q.max_cells == 0 {
        return Err(Error::Config("quadrature needs order >= 1, tol > 0, max-cells >= 1".into()));
    }
    Ok(QuadratureOptions {
        order: q.order,
        tolerance: q.tol,
        max_cells: q.max_cells,
    })
}

fn quadrature_json(q: &QuadratureOptions) -> serde_json::Value {
    serde_json::json!({"order": q.order, "relative": q.tolerance, "max_cells": q.max_cells})
}

fn execute(command: &Command, out: &mut Outputs) -> Result<(&'static str, serde_json::Value)> {
    use serde_json::json;
    match command {
        Command::Spectrum {
            system,
            sector,
            export_operator,
        } => {
            let (lattice, spin) = parse_system(system)?;
            if *export_operator && sector.is_none() {
                return Err(Error::Config("--export-operator needs --sector".into()));
            }
            let values = match sector {
                Some(m2) => {
                    let sec = build_sector(&lattice, spin, Some(*m2))?;
                    let h = build_hamiltonian(&sec);
                    if *export_operator {
                        let mut buf = Vec::new();
                        h.write_triplets(&mut buf)?;
                        out.write("hamiltonian.txt", &String::from_utf8(buf).expect("ascii"))?;
                    }
                    full_spectrum(&h, false)?.eigenvalues
                }
                None => diagonalize_sectors(&lattice, spin, false)?.all_eigenvalues(),
            };
            let formatted: Vec<String> = values.iter().map(|&v| eig(v)).collect();
            out.write("spectrum.csv", &format!("{}\n", formatted.join(",")))?;
            out.write("spectrum.txt", &(formatted.join("\n") + "\n"))?;
            let points: Vec<(f64, f64)> = values.iter().enumerate().map(|(i, &v)| (i as f64, v)).collect();
            out.curve("spectrum.dat", "index eigenvalue", &points)?;
            let e0 = values.first().copied().unwrap_or(f64::NAN);
            let deg = values.iter().filter(|&&v| v - e0 <= 1e-9).count();
            println!("dim = {}, E0 = {}, degeneracy = {deg}", values.len(), eig(e0));
            Ok(("spectrum", json!({"degeneracy_window": 1e-9})))
        }
        Command::FreeEnergy { system, beta } => {
            let (lattice, spin) = parse_system(system)?;
            let grid: BetaGrid = beta.beta.parse()?;
            let betas = grid.finite_positive()?;
            let diag = diagonalize_sectors(&lattice, spin, false)?;
            let results = diag.thermal_grid(betas)?;
            let s = spin.value();
            let rows: Vec<Vec<String>> = results
                .iter()
                .map(|r| {
                    vec![
                        num(r.beta),
                        num(r.free_energy_per_site),
                        num(r.energy_per_site),
                        num(s.powf(1.5) * r.beta.powf(2.5) * r.free_energy_per_site),
                    ]
                })
                .collect();
            out.table("free_energy.csv", "beta,f,e,beta_power_check", &rows)?;
            let points: Vec<(f64, f64)> = results.iter().map(|r| (r.beta, r.free_energy_per_site)).collect();
            out.curve("free_energy.dat", "beta f", &points)?;
            Ok(("free-energy", json!({})))
        }
        Command::TwoPoint { system, beta, pair } => {
            let (lattice, spin) = parse_system(system)?;
            let grid: BetaGrid = beta.beta.parse()?;
            let n = lattice.num_sites();
            let pairs: Vec<(usize, usize)> = match pair {
                Some(p) => {
                    let parts: Vec<usize> = p
                        .split(',')
                        .map(|s| s.trim().parse::<usize>())
                        .collect::<std::result::Result<_, _>>()
                        .map_err(|_| Error::Config(format!("pair {p:?} is not \"x,y\"")))?;
                    if parts.len() != 2 || parts[0] == parts[1] || parts.iter().any(|&s| s >= n) {
                        return Err(Error::Config(format!("pair {p:?} must name two distinct sites below {n}")));
                    }
                    vec![(parts[0], parts[1])]
                }
                None => (0..n).flat_map(|x| (x + 1..n).map(move |y| (x, y))).collect(),
            };
            let diag = diagonalize_sectors(&lattice, spin, true)?;
            let mut rows = Vec::new();
            let mut points = Vec::new();
            for &(x, y) in &pairs {
                let pe = diag.pair_expectations(x, y)?;
                for &b in &grid.0 {
                    let v = pe.average(b);
                    rows.push(vec![num(b), x.to_string(), y.to_string(), num(lattice.distance_squared(x, y)), num(v)]);
                    if pairs.len() == 1 {
                        points.push((b, v));
                    }
                }
            }
            out.table("two_point.csv", "beta,x,y,distance_squared,s_dot_s", &rows)?;
            if !points.is_empty() {
                out.curve("two_point.dat", "beta <S_x.S_y>", &points)?;
            }
            Ok(("two-point", json!({"ground_multiplet_window": crate::exact_diag::GROUND_TOLERANCE})))
        }
        Command::SwDispersion { system } => {
            let (lattice, spin) = parse_system(system)?;
            let sector = SpinSector::one_magnon(&lattice, spin)?;
            let rows: Vec<Vec<String>> = match lattice.boundary() {
                Boundary::Periodic => periodic_modes(&sector)?
                    .iter()
                    .map(|m| mode_row("plane_wave", m.label, m.energy, m.residual))
                    .collect(),
                Boundary::Free => neumann_modes(&sector)?
                    .iter()
                    .map(|m| mode_row("neumann", m.quantum_numbers, m.energy, m.residual))
                    .collect(),
            };
            out.table("sw_dispersion.csv", "kind,n1,n2,n3,energy,residual", &rows)?;
            Ok(("sw-dispersion", json!({"residual": crate::spin_wave::MAGNON_TOLERANCE})))
        }
        Command::SwFreeEnergy {
            system,
            beta,
            limit,
            quadrature,
        } => {
            let (lattice, spin) = parse_system(system)?;
            let grid: BetaGrid = beta.beta.parse()?;
            let betas = grid.finite_positive()?;
            let opts = quadrature_options(quadrature)?;
            let mut rows = Vec::new();
            let mut points = Vec::new();
            for &b in betas {
                let f0 = if *limit {
                    f0_limit(b, spin, &opts)?
                } else {
                    f0_finite(&lattice, spin, b)?
                };
                rows.push(vec![num(b), num(f0.value), num(f0.error_bound), opt(f0.excluded_zero_mode)]);
                points.push((b, f0.value));
            }
            out.table("sw_free_energy.csv", "beta,f0,error_bound,zero_mode", &rows)?;
            out.curve("sw_free_energy.dat", "beta f0", &points)?;
            Ok(("sw-free-energy", quadrature_json(&opts)))
        }
        Command::C0 { tol } => {
            let c0 = c0_constant(*tol)?;
            let err = c0.quadrature_error.max((c0.quadrature - c0.closed_form).abs());
            println!("C0 = {} +/- {:.1e}", c0.closed_form, err);
            out.table(
                "c0.csv",
                "quadrature,quadrature_error,closed_form,closed_form_error",
                &[vec![
                    num(c0.quadrature),
                    num(c0.quadrature_error),
                    num(c0.closed_form),
                    num(c0.closed_form_error),
                ]],
            )?;
            Ok(("c0", json!({"agreement": tol})))
        }
        Command::Scaling { spin, beta, quadrature } => {
            let spin: SpinValue = spin.parse()?;
            let grid: BetaGrid = beta.parse()?;
            let opts = quadrature_options(quadrature)?;
            let rows = scaling_check(spin, grid.finite_positive()?, &opts)?;
            let table: Vec<Vec<String>> = rows
                .iter()
                .map(|r| vec![num(r.beta), num(r.spin), num(r.f0), num(r.rescaled), num(r.deviation)])
                .collect();
            out.table("scaling.csv", "beta,S,f0,rescaled,deviation", &table)?;
            let points: Vec<(f64, f64)> = rows.iter().map(|r| (r.beta * r.spin, r.rescaled)).collect();
            out.curve("scaling.dat", "beta*S S^{3/2}beta^{5/2}f0", &points)?;
            Ok(("scaling", quadrature_json(&opts)))
        }
        Command::HpVerify { system, export_block } => {
            let (lattice, spin) = parse_system(system)?;
            if let Some(total_n) = export_block {
                let fock = FockBasis::hard_core(&lattice, spin, Some(*total_n))?;
                for (name, op) in [("h0.txt", build_h0(&fock)), ("k.txt", build_k(&fock)?)] {
                    let mut buf = Vec::new();
                    op.write_triplets(&mut buf)?;
                    out.write(name, &String::from_utf8(buf).expect("ascii"))?;
                }
            }
            let blocks = verify_equivalence_all(&lattice, spin)?;
            let rows: Vec<Vec<String>> = blocks
                .iter()
                .map(|b| vec![b.total_n.to_string(), b.dim.to_string(), num(b.deviation)])
                .collect();
            out.table("hp_verify.csv", "total_n,dim,deviation", &rows)?;
            let worst = blocks.iter().map(|b| b.deviation).fold(0.0, f64::max);
            println!("max_deviation < {EQUIVALENCE_TOLERANCE:e}");
            println!("max_deviation = {worst:e} over {} blocks", blocks.len());
            Ok(("hp-verify", json!({"equivalence": EQUIVALENCE_TOLERANCE})))
        }
        Command::Inequalities {
            system,
            n_max,
            max_total_n,
            density_block,
            max_energy,
        } => {
            let (lattice, spin) = parse_system(system)?;
            let free = FockBasis::uncapped(&lattice, spin, *n_max, None)?;
            let projection = projection_inequality_check(&free);
            let mut rows = vec![vec!["projection".to_string(), String::new(), num(projection)]];
            let top = (spin.twice() as u64 * lattice.num_sites() as u64).min(*max_total_n);
            for total_n in 0..=top {
                let fock = FockBasis::hard_core(&lattice, spin, Some(total_n))?;
                rows.push(vec!["interaction".into(), total_n.to_string(), num(interaction_bound_check(&fock)?)]);
            }
            out.table("inequalities.csv", "check,total_n,min_eigenvalue", &rows)?;
            let survey = proposition2_survey(&lattice, spin, *density_block, (0.0, *max_energy))?;
            let table: Vec<Vec<String>> = survey
                .iter()
                .map(|r| vec![num(r.energy), num(r.rho_inf), num(r.rho_1), num(r.ratio)])
                .collect();
            out.table("prop2.csv", "E,rho_inf,rho_1,ratio", &table)?;
            let worst = rows[1..].iter().map(|r| r[2].parse::<f64>().unwrap()).fold(f64::INFINITY, f64::min);
            println!("projection min = {}, interaction min = {}", num(projection), num(worst));
            if let Some(c) = survey.iter().map(|r| r.ratio).reduce(f64::max) {
                println!("density survey: {} states, max ratio {c:.3}", survey.len());
            }
            Ok(("inequalities", json!({"interaction_floor": -1e-10})))
        }
        Command::Prop1 { system } => {
            let (lattice, spin) = parse_system(system)?;
            let table = proposition1_table(&lattice, spin)?;
            let rows: Vec<Vec<String>> = table
                .rows
                .iter()
                .map(|r| vec![num(r.s_t), num(r.e_min), num(r.deficit), opt(r.ratio), opt(r.cross_check)])
                .collect();
            out.table("prop1.csv", "S_T,E_min,deficit,ratio,cross_check", &rows)?;
            let points: Vec<(f64, f64)> = table.rows.iter().map(|r| (r.deficit, r.e_min)).collect();
            out.curve("prop1.dat", "deficit E_min", &points)?;
            println!("empirical C = {:.3} (monotone: {})", table.empirical_c, table.monotone);
            Ok(("prop1", json!({"monotonicity": 1e-10})))
        }
        Command::Gap { spin, dim, sides } => {
            let spin: SpinValue = spin.parse()?;
            let sides: Vec<usize> = sides
                .split(',')
                .map(|s| s.trim().parse::<usize>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::Config(format!("sides {sides:?} is not a comma list of integers")))?;
            Lattice::new(*dim, 2, Boundary::Free)?;
            let rows = gap_scaling(*dim, spin, &sides)?;
            let table: Vec<Vec<String>> = rows
                .iter()
                .map(|r| vec![r.side.to_string(), num(r.gap), num(r.scaled), num(r.neumann)])
                .collect();
            out.table("gap.csv", "side,gap,scaled,neumann", &table)?;
            let points: Vec<(f64, f64)> = rows.iter().map(|r| (r.side as f64, r.scaled)).collect();
            out.curve("gap.dat", "side gap*side^2/S", &points)?;
            Ok(("gap", json!({"lanczos_residual": 1e-10})))
        }
        Command::TrialBound { system, beta, n_max } => {
            let (lattice, spin) = parse_system(system)?;
            let grid: BetaGrid = beta.beta.parse()?;
            let betas = grid.finite_positive()?;
            let mut rows = Vec::new();
            for &b in betas {
                let r = trial_state_upper_bound(&lattice, spin, b, *n_max)?;
                rows.push(vec![
                    num(r.beta),
                    num(r.f_exact),
                    num(r.f_trial_upper),
                    num(r.slack),
                    opt(r.f0_reference),
                    num(r.literature_upper),
                ]);
            }
            out.table("trial_bound.csv", "beta,f_exact,f_trial,slack,f0_reference,literature_upper", &rows)?;
            Ok((
                "trial-bound",
                json!({"slack": crate::bounds_lab::VARIATIONAL_SLACK, "truncation": crate::bounds_lab::TRUNCATION_TOLERANCE}),
            ))
        }
        Command::Compare {
            spin,
            beta,
            prelim_c,
            quadrature,
        } => {
            let spin: SpinValue = spin.parse()?;
            let grid: BetaGrid = beta.parse()?;
            let opts = quadrature_options(quadrature)?;
            let rows = literature_comparison(grid.finite_positive()?, spin, *prelim_c, &opts)?;
            let table: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        num(r.beta),
                        num(r.spin),
                        num(r.f0_limit),
                        num(r.c0_curve),
                        num(r.literature_curve),
                        opt(r.preliminary_curve),
                        num(r.ratio),
                    ]
                })
                .collect();
            out.table(
                "compare.csv",
                "beta,S,f0_limit,c0_curve,literature_curve,preliminary_curve,ratio",
                &table,
            )?;
            let points: Vec<(f64, f64)> = rows.iter().map(|r| (r.beta, r.ratio)).collect();
            out.curve("compare.dat", "beta f0/(C0 S^{-3/2} beta^{-5/2})", &points)?;
            Ok(("compare", quadrature_json(&opts)))
        }
        Command::Corollary { system, beta } => {
            let (lattice, spin) = parse_system(system)?;
            let grid: BetaGrid = beta.parse()?;
            let report = corollary_chain_check(&lattice, spin, grid.increasing()?)?;
            let rows: Vec<Vec<String>> = report
                .rows
                .iter()
                .map(|r| {
                    vec![
                        num(r.beta),
                        r.x.to_string(),
                        r.y.to_string(),
                        num(r.distance_squared),
                        num(r.lhs),
                        num(r.energy_per_site),
                        opt(r.ratio),
                    ]
                })
                .collect();
            out.table("corollary.csv", "beta,x,y,distance_squared,lhs,e,ratio", &rows)?;
            println!(
                "max ratio = {:.3}, sum rule deviation = {:.1e}, monotone = {}",
                report.max_ratio, report.sum_rule_deviation, report.monotone
            );
            Ok(("corollary", json!({"nonnegativity": -1e-10})))
        }
        Command::Replay { .. } => unreachable!("handled before dispatch"),
    }
}

fn mode_row(kind: &str, label: [usize; 3], energy: f64, residual: f64) -> Vec<String> {
    vec![
        kind.to_string(),
        label[0].to_string(),
        label[1].to_string(),
        label[2].to_string(),
        num(energy),
        num(residual),
    ]
}

/// Reads a manifest written by [`run`].
pub fn read_manifest(path: &Path) -> Result<Manifest> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Config(format!("unreadable manifest: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beta_grids() {
        assert_eq!("2".parse::<BetaGrid>().unwrap().0, vec![2.0]);
        let g: BetaGrid = "1:100:3".parse().unwrap();
        assert!((g.0[1] - 10.0).abs() < 1e-12 && g.0[2] == 100.0);
        let l: BetaGrid = "0,1,inf".parse().unwrap();
        assert!(l.0[2].is_infinite());
        assert!(l.finite_positive().is_err());
        assert!("1:1:3".parse::<BetaGrid>().is_err());
        assert!("-1".parse::<BetaGrid>().is_err());
        assert!("x".parse::<BetaGrid>().is_err());
    }

    #[test]
    fn formatting() {
        assert_eq!(eig(-1e-16), "0");
        assert_eq!(eig(0.9999999999999998), "1");
        assert_eq!(eig(0.1464466094067262), "0.146446609407");
        assert_eq!(num(-0.0), "0");
        assert_eq!(num(0.25), "0.25");
    }

    #[test]
    fn exit_codes() {
        let args = |s: &str| s.split_whitespace().map(String::from).collect::<Vec<_>>();
        assert_eq!(main_with_args(args("heisenberg-lab frobnicate")), 1);
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().display().to_string();
        assert_eq!(main_with_args(args(&format!("heisenberg-lab --output {out} spectrum d=4,L=2,bc=free 2S=1"))), 2);
        assert_eq!(main_with_args(args(&format!("heisenberg-lab --output {out} spectrum d=1,L=2,bc=free 2S=x"))), 2);
        assert_eq!(main_with_args(args(&format!("heisenberg-lab --output {out} c0 --tol 1e-13"))), 2);
    }
}
