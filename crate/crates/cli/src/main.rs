use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rmfcond::conditioning::{kappa_structured, StructuredValue};
use rmfcond::eigensolve::{solve_all_detailed, Eigentriplet};
use rmfcond::generate::{
    fluid_solid, fluid_structure, loaded_random, random_structured, scalar_example,
    FluidSolidParams, FluidStructureParams,
};
use rmfcond::problem::{parse_problem, write_problem};
use rmfcond::report::{analyze, fmt_complex, fmt_sig, fmt_structured, render_json, render_table};
use rmfcond::structure::validate_structure_with;
use rmfcond::verify::{
    extremal_tuple, first_order_experiment, random_unit_tuple, structured_oracle,
    sup_oracle_sampling,
};
use rmfcond::{Error, Result, Rmf, StructureTag, Tolerances};

#[derive(Parser)]
#[command(
    name = "rmfcond",
    version,
    about = "Eigenvalue condition numbers of structured rational matrix functions"
)]
struct Cli {
    #[command(flatten)]
    tol: TolArgs,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args)]
struct TolArgs {
    /// Relative residual accepted for eigentriplets.
    #[arg(long, global = true, default_value_t = 1e-8)]
    eig_tol: f64,
    /// Tolerance of structure validation.
    #[arg(long, global = true, default_value_t = 1e-10)]
    struct_tol: f64,
    /// Relative pole tolerance.
    #[arg(long, global = true, default_value_t = 1e-12)]
    pole_tol: f64,
}

impl TolArgs {
    fn tolerances(&self) -> Tolerances {
        Tolerances {
            eig: self.eig_tol,
            structure: self.struct_tol,
            pole: self.pole_tol,
            ..Tolerances::default()
        }
    }
}

fn tag_arg(s: &str) -> std::result::Result<StructureTag, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Clone, Debug)]
struct EpsList(Vec<f64>);

fn eps_arg(s: &str) -> std::result::Result<EpsList, String> {
    s.split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|e| format!("'{v}': {e}")))
        .collect::<std::result::Result<_, _>>()
        .map(EpsList)
}

#[derive(Subcommand)]
enum Command {
    /// Solve and report κ and the structured condition number per eigenvalue.
    Analyze {
        file: PathBuf,
        #[arg(long, value_parser = tag_arg)]
        structure: Option<StructureTag>,
        #[arg(long)]
        json: bool,
        /// Attach grid-oracle estimates.
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value_t = 4096)]
        grid: usize,
    },
    /// Compare the formula with the grid and sampling oracles at one eigenvalue.
    Verify {
        file: PathBuf,
        #[arg(long)]
        eig: usize,
        #[arg(long, value_parser = tag_arg)]
        structure: StructureTag,
        #[arg(long, default_value_t = 4096)]
        grid: usize,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// First-order perturbation experiment at one eigenvalue.
    Perturb {
        file: PathBuf,
        #[arg(long)]
        eig: usize,
        /// Use the extremal perturbation of this structure instead of a random one.
        #[arg(long, value_parser = tag_arg)]
        structured: Option<StructureTag>,
        #[arg(long, value_parser = eps_arg, default_value = "1e-3,1e-4,1e-5,1e-6")]
        eps: EpsList,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write an example problem file.
    Example {
        /// fluid-structure, fluid-solid, loaded-random, random-structured or scalar.
        name: String,
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_parser = tag_arg)]
        structure: Option<StructureTag>,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// Validate a structure.
    Check {
        file: PathBuf,
        #[arg(long, value_parser = tag_arg)]
        structure: StructureTag,
    },
}

fn triplet(g: &Rmf, index: usize, tol: &Tolerances) -> Result<Eigentriplet> {
    let solved = solve_all_detailed(g, tol)?;
    let count = solved.triplets.len();
    solved.triplets.into_iter().nth(index).ok_or_else(|| {
        Error::BadParams(format!(
            "eigenvalue index {index} out of range ({count} eigenvalues)"
        ))
    })
}

fn run(cli: Cli) -> Result<()> {
    let tol = cli.tol.tolerances();
    match cli.cmd {
        Command::Analyze {
            file,
            structure,
            json,
            oracle,
            grid,
        } => {
            let g = parse_problem(&file)?;
            let report = analyze(&g, structure, oracle.then_some(grid), &tol)?;
            print!(
                "{}",
                if json {
                    render_json(&report)
                } else {
                    render_table(&report)
                }
            );
        }
        Command::Verify {
            file,
            eig,
            structure,
            grid,
            samples,
            seed,
        } => {
            let g = parse_problem(&file)?;
            let t = triplet(&g, eig, &tol)?;
            let rep = kappa_structured(&g, &t, structure, &tol)?;
            let grid_r = structured_oracle(&g, &t, structure, grid, &tol)?;
            let samp = sup_oracle_sampling(&g, &t, structure, samples, seed, &tol)?;
            println!("eigenvalue {eig}: lambda = {}", fmt_complex(t.lambda));
            println!("structure   {structure}");
            println!("kappa       {}", fmt_sig(rep.kappa, 6));
            println!("formula     {}", fmt_structured(&rep.structured));
            println!(
                "grid        {} ({} points, psi = {})",
                fmt_sig(grid_r.value, 6),
                grid_r.grid_points,
                fmt_sig(grid_r.argmax_phase, 6)
            );
            println!(
                "sampling    {} ({samples} samples, seed {seed})",
                fmt_sig(samp.value, 6)
            );
            let verdict = match rep.structured {
                StructuredValue::Exact { value } => {
                    let rel = (value - grid_r.value).abs() / value.max(f64::MIN_POSITIVE);
                    format!(
                        "relative difference {rel:.3e}: {}",
                        if rel <= 1e-6 { "agree" } else { "DISAGREE" }
                    )
                }
                StructuredValue::Interval { lo, hi } => {
                    let inside = grid_r.value >= lo - 1e-8 && grid_r.value <= hi + 1e-8;
                    format!(
                        "oracle {} the interval",
                        if inside { "inside" } else { "OUTSIDE" }
                    )
                }
            };
            println!("check       {verdict}");
            println!(
                "equality    {}",
                if rep.equality.holds {
                    rep.equality.reason.describe()
                } else {
                    "no"
                }
            );
            for w in &rep.warnings {
                eprintln!("warning: {w}");
            }
        }
        Command::Perturb {
            file,
            eig,
            structured,
            eps,
            seed,
        } => {
            let g = parse_problem(&file)?;
            let t = triplet(&g, eig, &tol)?;
            let dg = match structured {
                Some(tag) => {
                    let psi = structured_oracle(&g, &t, tag, 4096, &tol)?.argmax_phase;
                    extremal_tuple(&g, &t, tag, psi, &tol)?
                }
                None => random_unit_tuple(&g, seed),
            };
            let rep = first_order_experiment(&g, &t, &dg, &eps.0, &tol)?;
            println!("eigenvalue {eig}: lambda = {}", fmt_complex(t.lambda));
            println!(
                "{:<12}  {:<28}  {:<28}  remainder",
                "eps", "predicted", "actual"
            );
            for ((e, p), (a, r)) in rep
                .eps_list
                .iter()
                .zip(&rep.predicted_shifts)
                .zip(rep.actual_shifts.iter().zip(rep.remainders()))
            {
                println!(
                    "{:<12}  {:<28}  {:<28}  {}",
                    fmt_sig(*e, 6),
                    fmt_complex(*p),
                    fmt_complex(*a),
                    fmt_sig(r, 6)
                );
            }
            for e in &rep.dropped {
                eprintln!("warning: eps = {e:e} dropped (no convergence)");
            }
            match rep.remainder_slope {
                Some(s) => println!("remainder slope {}", fmt_sig(s, 6)),
                None if rep.exact_match => println!("remainder slope undefined: exact match"),
                None => println!("remainder slope undefined"),
            }
        }
        Command::Example {
            name,
            n,
            m,
            d,
            seed,
            structure,
            output,
        } => {
            let key = name.to_lowercase().replace('_', "-");
            let g = match key.as_str() {
                "fluid-structure" => fluid_structure(FluidStructureParams {
                    n,
                    seed,
                    ..Default::default()
                })?,
                "fluid-solid" => fluid_solid(&FluidSolidParams::with_terms(n, m, seed))?,
                "loaded-random" => loaded_random(n, d, m, seed)?,
                "random-structured" => {
                    let tag = structure.ok_or_else(|| {
                        Error::BadParams("random-structured needs --structure".into())
                    })?;
                    random_structured(tag, n, d, m, seed)?
                }
                "scalar" => scalar_example(),
                _ => return Err(Error::BadParams(format!("unknown example '{name}'"))),
            };
            write_problem(&g, &output)?;
        }
        Command::Check { file, structure } => {
            let g = parse_problem(&file)?;
            let rep = validate_structure_with(&g, structure, tol.structure);
            for r in &rep.matrix_residuals {
                println!("{:<6} {:.3e}", r.name, r.residual);
            }
            for v in &rep.weight_violations {
                println!("w_{}   {}", v.term, v.condition);
            }
            if !rep.ok {
                return Err(Error::StructureMismatch(format!(
                    "{} fails {structure} (largest residual {:.3e})",
                    file.display(),
                    rep.max_residual()
                )));
            }
            println!("ok: {structure}");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_input_error() { 2 } else { 1 })
        }
    }
}
