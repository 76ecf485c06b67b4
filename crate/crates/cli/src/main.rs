// SPDX-License-Identifier: Apache-2.0

mod config;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use hopfdisc::analysis::{scan, FamilyContext};

use config::{resolve, Cli, CommandKind, Format};

const EXIT_CONFIG: u8 = 3;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (kind, args) = cli.command.split();
    let cfg = match resolve(kind, args) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };

    let ctx = match FamilyContext::new(cfg.family_def.clone()) {
        Ok(ctx) => ctx,
        Err(e) => {
            eprintln!("family setup failed: {e}");
            return ExitCode::from(if e.is_computational() { 2 } else { 1 });
        }
    };
    let report = scan(&ctx, &cfg.points, &cfg.options());

    let rendered = match cfg.format {
        Format::Json => report::to_json(&cfg, &report),
        Format::Csv => report::to_csv(&cfg, &report),
    };
    let mut summary = match kind {
        CommandKind::AnalyzeFiber => {
            report
                .records
                .iter()
                .map(report::fiber_summary)
                .collect::<Vec<_>>()
                .join("\n")
                + "\n"
        }
        CommandKind::ScanFamily => report::strata_summary(&report),
        CommandKind::VerifyTheorems => {
            report::strata_summary(&report) + &report::suite_table(&report)
        }
    };
    let failing = report.failing_labels();
    if !failing.is_empty() {
        summary.push_str(&format!("failing checks: {}\n", failing.join(", ")));
    }

    match &cfg.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, rendered) {
                eprintln!("cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_CONFIG);
            }
            print!("{summary}");
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(rendered.as_bytes());
            eprint!("{summary}");
        }
    }
    ExitCode::from(report.status.exit_code() as u8)
}
