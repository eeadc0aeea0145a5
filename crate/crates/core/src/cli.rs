//! Command-line front end.
//!
//! Exit codes: 0 when everything ran and every check passed, 1 when a
//! verification failed, 2 for unusable input. Batch input (`--file`, or `-`
//! for stdin) is read one Gauss code per line; blank lines and lines starting
//! with `#` are skipped, so write the trivial knot as `*`. Bad lines are
//! reported with their line number and the remaining lines are still
//! processed.

use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::catalog::{Catalog, EntryCheck};
use crate::coloring::{check_consistency, fuzz_random, invariant_with_side, ConsistencyConfig, ConsistencyReport};
use crate::gauss::{u_polynomial, GaussDiagram, Side};
use crate::laurent::LaurentPoly;
use crate::semiquandle::{check_axioms, SnSemiquandle};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "flatcolor", version, about = "S_n-coloring invariant of flat virtual knots")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Coloring invariant and u-polynomial of each input diagram.
    Invariant {
        #[command(flatten)]
        input: Input,
        #[arg(short = 'n', long = "order", default_value_t = 2)]
        order: usize,
        #[arg(long, value_enum, default_value_t = SideArg::HeadToTail)]
        side: SideArg,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// u-polynomial of each input diagram.
    Upoly {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = SideArg::HeadToTail)]
        side: SideArg,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Checks the semiquandle axioms of S_n on random elements.
    Axioms {
        #[arg(short = 'n', long = "order", default_value_t = 2)]
        order: usize,
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Checks that the coloring polynomials do not depend on the start arc,
    /// fake vertices or moves.
    Fuzz {
        #[command(flatten)]
        input: Input,
        /// Use this many random diagrams instead of --code/--file.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 5)]
        max_arrows: usize,
        #[arg(short = 'n', long = "order", default_value_t = 2)]
        order: usize,
        /// Random move sequences per diagram.
        #[arg(long, default_value_t = 30, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, default_value_t = 5)]
        max_moves: usize,
        #[arg(long, default_value_t = 20)]
        fake_trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Lists the bundled catalog or checks its entries.
    Catalog {
        /// Check only this entry.
        #[arg(long)]
        name: Option<String>,
        #[arg(short = 'n', long = "order", default_value_t = 2)]
        order: usize,
        /// Overlay catalog supplying external codes.
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Debug, Args)]
pub struct Input {
    /// A Gauss code, e.g. "-1 -2 -3 1 3 2". May be repeated.
    #[arg(long, allow_hyphen_values = true)]
    pub code: Vec<String>,
    /// File with one Gauss code per line, or `-` for stdin.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    TailToHead,
    HeadToTail,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Self {
        match s {
            SideArg::TailToHead => Side::TailToHead,
            SideArg::HeadToTail => Side::HeadToTail,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}

// One line of input: where it came from and its text.
struct Item {
    label: String,
    text: String,
}

fn for_each_input(
    input: &Input,
    mut f: impl FnMut(&str, Result<GaussDiagram, String>) -> io::Result<()>,
) -> io::Result<bool> {
    if input.code.is_empty() && input.file.is_none() {
        return Err(io::Error::new(io::ErrorKind::InvalidInput, "give --code or --file"));
    }
    let mut ok = true;
    let mut handle = |item: Item, f: &mut dyn FnMut(&str, Result<GaussDiagram, String>) -> io::Result<()>| {
        let parsed = item
            .text
            .parse::<GaussDiagram>()
            .map_err(|e| format!("{}: {e}", item.label));
        ok &= parsed.is_ok();
        f(&item.text, parsed)
    };
    for (i, code) in input.code.iter().enumerate() {
        let item = Item {
            label: format!("--code #{}", i + 1),
            text: code.clone(),
        };
        handle(item, &mut f)?;
    }
    if let Some(path) = &input.file {
        let reader: Box<dyn BufRead> = if path.as_os_str() == "-" {
            Box::new(BufReader::new(io::stdin()))
        } else {
            Box::new(BufReader::new(File::open(path).map_err(|e| {
                io::Error::new(e.kind(), format!("{}: {e}", path.display()))
            })?))
        };
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let text = line.trim();
            if text.is_empty() || text.starts_with('#') {
                continue;
            }
            let item = Item {
                label: format!("line {}", i + 1),
                text: text.to_string(),
            };
            handle(item, &mut f)?;
        }
    }
    Ok(ok)
}

// One CSV record, quoted as needed, so rows can be streamed.
fn csv_row(fields: &[&str]) -> io::Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(fields)?;
    w.into_inner().map_err(|e| io::Error::other(e.to_string()))
}

fn polys_text(ps: &[LaurentPoly]) -> String {
    ps.iter().map(|p| p.to_string()).collect::<Vec<_>>().join("; ")
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> io::Result<i32> {
    match command {
        Command::Invariant {
            input,
            order,
            side,
            format,
        } => cmd_invariant(&input, order, side.into(), format, out, err),
        Command::Upoly { input, side, format } => cmd_upoly(&input, side.into(), format, out, err),
        Command::Axioms {
            order,
            trials,
            seed,
            format,
        } => cmd_axioms(order, trials as usize, seed, format, out),
        Command::Fuzz {
            input,
            random,
            max_arrows,
            order,
            trials,
            max_moves,
            fake_trials,
            seed,
            format,
        } => {
            let cfg = ConsistencyConfig {
                order,
                fake_trials,
                max_fakes: 4,
                move_sequences: trials as usize,
                max_moves,
                seed,
            };
            cmd_fuzz(&input, random, max_arrows, &cfg, format, out, err)
        }
        Command::Catalog {
            name,
            order,
            file,
            format,
        } => cmd_catalog(name.as_deref(), order, file, format, out),
    }
}

fn cmd_invariant(
    input: &Input,
    order: usize,
    side: Side,
    format: Format,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> io::Result<i32> {
    let mut checks_ok = true;
    if format == Format::Csv {
        writeln!(out, "code,order,defined_polys,upoly,representative,checks_passed")?;
    }
    let inputs_ok = for_each_input(input, |text, parsed| {
        let d = match parsed {
            Ok(d) => d,
            Err(msg) => return writeln!(err, "error: {msg}"),
        };
        let r = invariant_with_side(&d, order, side);
        let pi0_zero = r.representative.pi0().is_zero();
        // The identity is a property of the calibrated default side.
        let f1_identity = (order >= 1).then(|| {
            r.representative.coeff(1) == u_polynomial(&d, Side::default()).antisymmetrized()
        });
        let passed = pi0_zero && f1_identity != Some(false);
        checks_ok &= passed;
        match format {
            Format::Json => {
                let record = json!({
                    "code": text,
                    "order": order,
                    "representative": r.representative,
                    "defined_polys": r.defined_polys,
                    "upoly": r.upoly,
                    "checks": {"pi0_zero": pi0_zero, "f1_equals_u_identity": f1_identity},
                });
                writeln!(out, "{record}")
            }
            Format::Csv => out.write_all(&csv_row(&[
                text,
                &order.to_string(),
                &polys_text(&r.defined_polys),
                &r.upoly.to_string(),
                &r.representative.to_string(),
                &passed.to_string(),
            ])?),
            Format::Text => {
                writeln!(out, "code: {text}")?;
                writeln!(out, "  F (n = {order}): {}", r.representative)?;
                for (i, p) in r.defined_polys.iter().enumerate() {
                    writeln!(out, "  f{}: {p}", i + 1)?;
                }
                writeln!(out, "  u: {}", r.upoly)?;
                if !passed {
                    writeln!(out, "  CHECK FAILED")?;
                }
                Ok(())
            }
        }
    })?;
    Ok(if !inputs_ok {
        EXIT_INPUT
    } else if !checks_ok {
        EXIT_CHECK_FAILED
    } else {
        EXIT_OK
    })
}

fn cmd_upoly(input: &Input, side: Side, format: Format, out: &mut dyn Write, err: &mut dyn Write) -> io::Result<i32> {
    let side_name = match side {
        Side::TailToHead => "tail-to-head",
        Side::HeadToTail => "head-to-tail",
    };
    if format == Format::Csv {
        writeln!(out, "code,side,upoly")?;
    }
    let ok = for_each_input(input, |text, parsed| {
        let d = match parsed {
            Ok(d) => d,
            Err(msg) => return writeln!(err, "error: {msg}"),
        };
        let u = u_polynomial(&d, side);
        match format {
            Format::Json => writeln!(out, "{}", json!({"code": text, "side": side_name, "upoly": u})),
            Format::Csv => out.write_all(&csv_row(&[text, side_name, &u.to_string()])?),
            Format::Text => writeln!(out, "{text}\t{u}"),
        }
    })?;
    Ok(if ok { EXIT_OK } else { EXIT_INPUT })
}

fn cmd_axioms(order: usize, trials: usize, seed: u64, format: Format, out: &mut dyn Write) -> io::Result<i32> {
    let report = check_axioms(&SnSemiquandle::new(order), trials, seed);
    match format {
        Format::Json => writeln!(out, "{}", json!({"order": order, "passed": report.passed(), "report": report}))?,
        Format::Csv => {
            writeln!(out, "axiom,checked,failures")?;
            for o in &report.outcomes {
                writeln!(out, "{},{},{}", o.axiom, o.checked, o.failures)?;
            }
        }
        Format::Text => write!(out, "axioms of S_{order}, {trials} trials, seed {seed}\n{report}")?,
    }
    Ok(if report.passed() { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn write_fuzz_report(r: &ConsistencyReport, format: Format, out: &mut dyn Write) -> io::Result<()> {
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string(r).map_err(io::Error::other)?),
        Format::Csv => out.write_all(&csv_row(&[
            &r.code,
            &r.start_arcs.to_string(),
            &r.fake_trials.to_string(),
            &r.move_sequences.to_string(),
            &r.mismatches.len().to_string(),
            &r.passed().to_string(),
        ])?),
        Format::Text => {
            writeln!(
                out,
                "{:<30} {} ({} start arcs, {} fake trials, {} move sequences)",
                format!("\"{}\"", r.code),
                if r.passed() { "ok" } else { "MISMATCH" },
                r.start_arcs,
                r.fake_trials,
                r.move_sequences
            )?;
            for m in &r.mismatches {
                writeln!(out, "  [{}] {} :: {}", m.check, m.diagram, m.detail)?;
            }
            Ok(())
        }
    }
}

fn cmd_fuzz(
    input: &Input,
    random: Option<usize>,
    max_arrows: usize,
    cfg: &ConsistencyConfig,
    format: Format,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> io::Result<i32> {
    if format == Format::Csv {
        writeln!(out, "code,start_arcs,fake_trials,move_sequences,mismatches,passed")?;
    }
    let mut all_passed = true;
    let inputs_ok = if let Some(count) = random {
        for r in fuzz_random(count, max_arrows, cfg) {
            all_passed &= r.passed();
            write_fuzz_report(&r, format, out)?;
        }
        true
    } else {
        for_each_input(input, |_, parsed| {
            let d = match parsed {
                Ok(d) => d,
                Err(msg) => return writeln!(err, "error: {msg}"),
            };
            let r = check_consistency(&d, cfg);
            all_passed &= r.passed();
            write_fuzz_report(&r, format, out)
        })?
    };
    Ok(if !inputs_ok {
        EXIT_INPUT
    } else if !all_passed {
        EXIT_CHECK_FAILED
    } else {
        EXIT_OK
    })
}

#[derive(Serialize)]
struct CatalogLine<'a> {
    name: &'a str,
    code: Option<String>,
    external: bool,
    source: &'a str,
    check: EntryCheck,
}

fn cmd_catalog(
    name: Option<&str>,
    order: usize,
    file: Option<PathBuf>,
    format: Format,
    out: &mut dyn Write,
) -> io::Result<i32> {
    let mut catalog = Catalog::load().map_err(io::Error::other)?;
    if let Some(path) = file {
        catalog.merge_file(&path).map_err(io::Error::other)?;
    }
    let entries: Vec<_> = match name {
        Some(n) => vec![catalog.lookup(n).map_err(io::Error::other)?.clone()],
        None => catalog.entries().to_vec(),
    };
    if format == Format::Csv {
        writeln!(out, "name,code,external,check")?;
    }
    let mut failed = false;
    for e in &entries {
        let check = e.check(order);
        failed |= matches!(check, EntryCheck::Fail(_));
        let code = e.code.as_ref().map(|d| d.to_string());
        match format {
            Format::Json => {
                let line = CatalogLine {
                    name: &e.name,
                    code,
                    external: e.external,
                    source: &e.source,
                    check,
                };
                writeln!(out, "{}", serde_json::to_string(&line).map_err(io::Error::other)?)?;
            }
            Format::Csv => out.write_all(&csv_row(&[
                &e.name,
                &code.unwrap_or_default(),
                &e.external.to_string(),
                &check.to_string(),
            ])?)?,
            Format::Text => writeln!(
                out,
                "{:<22} {:<24} {}",
                e.name,
                code.map_or("(no code)".to_string(), |c| format!("\"{c}\"")),
                check
            )?,
        }
    }
    Ok(if failed { EXIT_CHECK_FAILED } else { EXIT_OK })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["flatcolor"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn invariant_json_record() {
        let (code, out, _) = run_str(&["invariant", "--code", "-1 -2 -3 1 3 2", "-n", "1"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
        assert_eq!(v["code"], "-1 -2 -3 1 3 2");
        assert_eq!(v["order"], 1);
        assert_eq!(v["defined_polys"][0], json!([[-2, "1"], [-1, "-2"], [1, "2"], [2, "-1"]]));
        assert_eq!(v["upoly"], json!([[1, "2"], [2, "-1"]]));
        assert_eq!(v["checks"]["f1_equals_u_identity"], true);
    }

    #[test]
    fn empty_code_is_trivial() {
        let (code, out, _) = run_str(&["invariant", "--code", "", "-n", "3", "--format", "text"]);
        assert_eq!(code, 0);
        assert!(out.contains("F (n = 3): 0"), "{out}");
    }

    #[test]
    fn bad_input_exits_2() {
        let (code, _, err) = run_str(&["invariant", "--code", "-1 -1 2 -2"]);
        assert_eq!(code, 2);
        assert!(err.contains("--code #1"), "{err}");
        let (code, _, _) = run_str(&["invariant"]);
        assert_eq!(code, 2);
        let (code, _, _) = run_str(&["nonsense"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn side_flag_flips_upoly() {
        let (_, a, _) = run_str(&["upoly", "--code", "-1 -2 -3 1 3 2", "--format", "text"]);
        let (_, b, _) = run_str(&["upoly", "--code", "-1 -2 -3 1 3 2", "--side", "tail-to-head", "--format", "text"]);
        assert_eq!(a.trim(), "-1 -2 -3 1 3 2\t2*s - s^2");
        assert_eq!(b.trim(), "-1 -2 -3 1 3 2\t-2*s + s^2");
    }

    #[test]
    fn axioms_and_catalog() {
        let (code, out, _) = run_str(&["axioms", "-n", "1", "--trials", "20"]);
        assert_eq!(code, 0, "{out}");
        let (code, out, _) = run_str(&["catalog"]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("skipped"));
        let (code, _, _) = run_str(&["catalog", "--name", "nope"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn fuzz_small() {
        let (code, out, _) = run_str(&["fuzz", "--code", "-1 -2 -3 1 3 2", "--trials", "3", "--fake-trials", "2"]);
        assert_eq!(code, 0, "{out}");
        let (code, _, _) = run_str(&["fuzz", "--random", "3", "--trials", "2", "--format", "json"]);
        assert_eq!(code, 0);
    }
}
