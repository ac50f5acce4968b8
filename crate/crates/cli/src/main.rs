mod args;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use qutrit_lab::experiments::format_sig;
use qutrit_lab::{run_sweep, write_table, DsdEvent, Error, SweepOutput};

use crate::args::Args;

const THREADS_VAR: &str = "QUTRIT_LAB_THREADS";

fn configure_threads() -> Result<(), Error> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Config(format!("{THREADS_VAR} must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Config(format!("cannot configure thread pool: {e}")))
}

fn print_summary(out: &SweepOutput, w: &mut dyn Write) -> io::Result<()> {
    writeln!(w, "generator: {}", out.generator)?;
    if let Some(r) = &out.resolution {
        writeln!(
            w,
            "  resolved against the analytic solution: gellmann residual {:.3e}, spin1 residual {:.3e}",
            r.gell_mann_residual, r.spin1_residual
        )?;
    }
    for c in &out.curves {
        let [e1, e2, e3] = c.eps;
        writeln!(
            w,
            "eps=({}, {}, {}) D={}: max n1 {} at t={}; n2 in [{}, {}] (t=0: {}); realignment in [{}, {}]",
            format_sig(e1),
            format_sig(e2),
            format_sig(e3),
            format_sig(c.d),
            format_sig(c.max_n1),
            format_sig(c.t_at_max_n1),
            format_sig(c.min_n2),
            format_sig(c.max_n2),
            format_sig(c.initial_n2),
            format_sig(c.realignment_range.0),
            format_sig(c.realignment_range.1),
        )?;
        for e in &c.events {
            match e {
                DsdEvent::FreeToBound { t, n2 } => {
                    writeln!(w, "  DSD: free -> bound at t={} (n2={})", format_sig(*t), format_sig(*n2))?
                }
                DsdEvent::DetectionGap { start, end } => {
                    writeln!(w, "  detection gap: t in [{}, {}]", format_sig(*start), format_sig(*end))?
                }
            }
        }
    }
    Ok(())
}

fn run(args: &Args) -> Result<(), Error> {
    let config = args.to_config()?;
    let out = run_sweep(&config)?;
    if config.output_path.is_none() {
        write_table(&out.records, io::stdout().lock(), config.output_format)?;
    }
    if args.summary {
        if config.output_path.is_some() {
            print_summary(&out, &mut io::stdout().lock())?;
        } else {
            print_summary(&out, &mut io::stderr().lock())?;
        }
    } else if let Some(r) = &out.resolution {
        eprintln!(
            "generator: {} (gellmann residual {:.3e}, spin1 residual {:.3e})",
            out.generator, r.gell_mann_residual, r.spin1_residual
        );
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    let result = configure_threads().and_then(|()| run(&args));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ Error::Config(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
