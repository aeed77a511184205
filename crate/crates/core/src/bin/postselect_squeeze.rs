//! Command-line front end for postselected-squeezing sweeps and figure data.

use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use postselect_squeeze::config::RunConfig;
use postselect_squeeze::runner::{self, SingleQuery, FIGURE_NAMES};
use postselect_squeeze::Error;

#[derive(Parser)]
#[command(
    name = "postselect-squeeze",
    about = "Conditional spin squeezing from postselected photon detections",
    long_about = None,
    version
)]
struct Cli {
    /// Worker threads for sweeps (default: machine parallelism). Output
    /// bytes do not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Execute the sweep described by a JSON config file; writes the CSV to
    /// the config's `output` path.
    Run {
        /// Path to a JSON run config (see README for the schema).
        config: PathBuf,
    },
    /// Emit one of the built-in figure datasets as CSV.
    ///
    /// Grids are fixed: polar sweeps use a π/180 step (180 or 181 points),
    /// saturation sweeps 61 points log-spaced over [1e-3, 1e3]; the random
    /// sphere uses a fixed documented seed. fig2a: chains N ∈
    /// {50,100,200,400,800}, CSS, ν=1, everything along x̂. fig2b: N=10
    /// chain, ν=1..8, exact. fig2c: steady states, drive polar π/3, ν=1.
    /// fig2d: N=10 chain, ν ∈ {1,3,5,8}, exact, with purity. fig3:
    /// population closed form, N=100, ν ∈ {10,...,90,99}. fig4a: population
    /// sphere N=100, θ̄=π/3, ν=50, detection polar ∈ {π/4,π/2,3π/4}. fig4b:
    /// ring N=10, CSS θ=3π/4, ν=5 along the drive (polar π/4), with
    /// intensity after one detection. fig4c: same ring, same-direction vs
    /// spread detection angles {0,π/3,π/2,3π/2,π}, ν ∈ {1,3,5}.
    Figure {
        /// One of: fig2a, fig2b, fig2c, fig2d, fig3, fig4a, fig4b, fig4c.
        name: String,
        /// Output directory for `<name>.csv`.
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate one closed-form case and print a single machine-readable
    /// line (`key=value` pairs).
    Single {
        /// Closed-form case to evaluate.
        #[arg(long = "analytic", value_enum)]
        analytic: AnalyticCase,
        /// Number of emitters N.
        #[arg(long)]
        n: usize,
        /// Number of detected photons ν.
        #[arg(long)]
        nu: Option<usize>,
        /// Population angle θ̄ in radians.
        #[arg(long = "theta-bar")]
        theta_bar: Option<f64>,
        /// Structure factor f(k_d − k_w); defaults to N(N−1), i.e. k_w = k_d.
        #[arg(long)]
        f: Option<f64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum AnalyticCase {
    /// ξ² = (N−2ν)²/N² for the fully excited state.
    FullyExcited,
    /// ξ² of the fully mixed state after ν detections.
    FullyMixed,
    /// ξ² of a population state at θ̄ after ν detections (k_d = k_w).
    Population,
    /// Smallest ν that squeezes a population state at θ̄.
    PopulationThreshold,
}

fn main() {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .ok();
    }
    if let Err(e) = dispatch(cli.command) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}

fn dispatch(cmd: Cmd) -> Result<(), Error> {
    match cmd {
        Cmd::Run { config } => {
            let text = fs::read_to_string(&config)
                .map_err(|e| Error::InvalidConfig(format!("{}: {e}", config.display())))?;
            let cfg = RunConfig::from_json(&text)?;
            let path = runner::run(&cfg)?;
            println!("{}", path.display());
            Ok(())
        }
        Cmd::Figure { name, out } => {
            if !FIGURE_NAMES.contains(&name.as_str()) {
                return Err(Error::InvalidConfig(format!(
                    "unknown figure `{name}`; available: {}",
                    FIGURE_NAMES.join(", ")
                )));
            }
            let path = runner::figure(&name, &out)?;
            println!("{}", path.display());
            Ok(())
        }
        Cmd::Single {
            analytic,
            n,
            nu,
            theta_bar,
            f,
        } => {
            let need_nu =
                || nu.ok_or_else(|| Error::InvalidConfig("this case requires --nu".to_string()));
            let need_theta = || {
                theta_bar.ok_or_else(|| {
                    Error::InvalidConfig("this case requires --theta-bar".to_string())
                })
            };
            let query = match analytic {
                AnalyticCase::FullyExcited => SingleQuery::FullyExcited { n, nu: need_nu()? },
                AnalyticCase::FullyMixed => SingleQuery::FullyMixed {
                    n,
                    nu: need_nu()?,
                    f,
                },
                AnalyticCase::Population => SingleQuery::Population {
                    n,
                    nu: need_nu()?,
                    theta_bar: need_theta()?,
                },
                AnalyticCase::PopulationThreshold => SingleQuery::PopulationThreshold {
                    n,
                    theta_bar: need_theta()?,
                },
            };
            println!("{}", runner::single(&query)?);
            Ok(())
        }
    }
}
