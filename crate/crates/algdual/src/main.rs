use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use algdual::algebra::homs_fp_to_model;
use algdual::config::RunConfig;
use algdual::presheaf::{exp_const, exp_end, exp_repr, forgetful_r, yoneda, Exponential};
use algdual::realize::realize;
use algdual::runner::run_verify;

#[derive(Parser)]
#[command(name = "algdual", about = "Verification runner for algebra dualities over finite site samples", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the verification suites in a config and write the report.
    Verify {
        #[arg(long)]
        config: PathBuf,
        /// Report destination; overrides the config's output path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Realize a presentation and print its carrier and tables.
    Realize {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        presentation: String,
        /// Congruence-closure bound; overrides the config's.
        #[arg(long)]
        bound: Option<usize>,
    },
    /// Print the homomorphisms from a presentation into a realized
    /// presentation, as generator images.
    Homs {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Print an exponential's value tables.
    Exp {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        kind: ExpKind,
        /// Exponent presentation, for end and repr.
        #[arg(long)]
        c: Option<String>,
        /// Exponent set size, for const.
        #[arg(long)]
        size: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ExpKind {
    End,
    Repr,
    Const,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Verify { config, out } => run_verify(&config, out.as_deref()),
        Command::Realize {
            config,
            presentation,
            bound,
        } => inspect(&config, |cfg, theory| {
            let pres = cfg.presentation(theory, &presentation)?;
            let obj = realize(&pres, bound.unwrap_or(cfg.site.bound))?;
            println!("carrier: {}", obj.model.size);
            for (v, label) in obj.labels.iter().enumerate() {
                println!("  {v}: {label}");
            }
            for (op, decl) in theory.ops.iter().enumerate() {
                println!("{} (arity {}): {:?}", decl.symbol, decl.arity, obj.model.tables[op]);
            }
            Ok(())
        }),
        Command::Homs { config, from, to } => inspect(&config, |cfg, theory| {
            // The source stays a presentation: its homs are generator
            // assignments, so it never needs a finite carrier itself.
            let src = cfg.presentation(theory, &from)?;
            let dst = realize(&cfg.presentation(theory, &to)?, cfg.site.bound)?;
            let homs = homs_fp_to_model(&src, &dst.model)?;
            println!("{} homomorphism(s) {from} -> {to}, as generator images", homs.len());
            for h in &homs {
                let labels: Vec<&str> =
                    h.iter().map(|&v| dst.labels[v].as_str()).collect();
                println!("  {h:?} = {labels:?}");
            }
            Ok(())
        }),
        Command::Exp {
            config,
            kind,
            c,
            size,
        } => inspect(&config, |cfg, theory| {
            let site = cfg.build_site(theory)?;
            let r = forgetful_r(&site);
            let exp = match kind {
                ExpKind::Const => {
                    let size = size.ok_or("exp --kind const requires --size")?;
                    exp_const(size, &r, cfg.budget)?
                }
                ExpKind::End => {
                    let c = c.as_deref().ok_or("exp --kind end requires --c")?;
                    let yon = yoneda(&cfg.presentation(theory, c)?, &site)?;
                    exp_end(&yon.copresheaf, &r, cfg.budget)?
                }
                ExpKind::Repr => {
                    let c = c.as_deref().ok_or("exp --kind repr requires --c")?;
                    exp_repr(&cfg.presentation(theory, c)?, &site, cfg.site.bound)?.exp
                }
            };
            print_exponential(&exp);
            Ok(())
        }),
    };
    ExitCode::from(code as u8)
}

fn print_exponential(exp: &Exponential) {
    let site = &exp.object.site;
    for b in 0..site.object_count() {
        println!("{}: {} element(s)", site.names[b], exp.object.sizes[b]);
        let coslice = site.coslice(b);
        for (w, family) in exp.families[b].iter().enumerate() {
            for (pos, &g) in coslice.iter().enumerate() {
                let m = &site.morphisms[g];
                println!(
                    "  [{w}] g{} ({} -> {}): {:?}",
                    g, site.names[m.src], site.names[m.dst], family.components[pos]
                );
            }
        }
    }
}

/// Shared plumbing for the inspection subcommands: config errors exit
/// 2, realization and budget errors exit 3.
fn inspect<F>(config: &std::path::Path, body: F) -> i32
where
    F: FnOnce(
        &RunConfig,
        &std::sync::Arc<algdual::theory::TheoryPresentation>,
    ) -> Result<(), Box<dyn std::error::Error>>,
{
    let cfg = match RunConfig::load(config) {
        Ok(c) => c,
        Err(err) => {
            eprintln!("config error: {err}");
            return 2;
        }
    };
    let theory = match cfg.theory() {
        Ok(t) => t,
        Err(err) => {
            eprintln!("config error: {err}");
            return 2;
        }
    };
    match body(&cfg, &theory) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            3
        }
    }
}
