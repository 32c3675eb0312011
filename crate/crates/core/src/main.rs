use clap::{Parser, ValueEnum};
use logfano::cli::{self, document};
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_VALIDATION: u8 = 2;
const EXIT_COMPUTATION: u8 = 3;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Text,
}

/// Exact eta invariants, Donaldson-Futaki coefficients and stability verdicts
/// for log Fano pairs.
#[derive(Parser, Debug)]
#[command(name = "logfano", version)]
struct Args {
    /// JSON input document (surface, toric or bundle)
    input: PathBuf,
    /// Cone angle parameter, as "p/q"
    #[arg(long)]
    beta: Option<String>,
    /// Range of beta values, "lo:hi:step"
    #[arg(long)]
    beta_scan: Option<String>,
    /// Positive integer or "auto"
    #[arg(long)]
    r: Option<String>,
    /// Cross-check v0 and v1 by section counting up to this k (toric input)
    #[arg(long)]
    verify_toric: Option<u64>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write the computed profile as a bundle document
    #[arg(long)]
    emit_bundle: Option<PathBuf>,
}

fn fail(code: u8, msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let text = match std::fs::read_to_string(&args.input) {
        Ok(t) => t,
        Err(e) => return fail(EXIT_VALIDATION, &format!("{}: {e}", args.input.display())),
    };
    let mut value: Value = match serde_json::from_str(&text) {
        Ok(v) => v,
        Err(e) => return fail(EXIT_VALIDATION, &format!("{}: invalid JSON: {e}", args.input.display())),
    };
    if let Some(obj) = value.as_object_mut() {
        if let Some(b) = &args.beta {
            obj.insert("beta".into(), json!(b));
        }
        if let Some(s) = &args.beta_scan {
            obj.insert("beta_scan".into(), json!(s));
        }
        if let Some(r) = &args.r {
            let v = r.parse::<u64>().map(Value::from).unwrap_or_else(|_| json!(r));
            obj.insert("r".into(), v);
        }
        if let Some(k) = args.verify_toric {
            obj.insert("verify_toric".into(), json!(k));
        }
    }

    let doc = match document::parse_document(&value) {
        Ok(d) => d,
        Err(diags) => {
            for d in &diags {
                eprintln!("{d}");
            }
            return ExitCode::from(EXIT_VALIDATION);
        }
    };
    let diags = document::semantic_checks(&doc);
    if !diags.is_empty() {
        for d in &diags {
            eprintln!("{d}");
        }
        return ExitCode::from(EXIT_VALIDATION);
    }

    let out = match cli::run(&doc) {
        Ok(o) => o,
        Err(e) => return fail(EXIT_COMPUTATION, &e.to_string()),
    };
    if let Some(path) = &args.emit_bundle {
        let written = document::bundle_document(&out.profile, &doc.raw_options)
            .map_err(|e| e.to_string())
            .and_then(|b| std::fs::write(path, cli::to_json_string(&b)).map_err(|e| e.to_string()));
        if let Err(e) = written {
            return fail(EXIT_COMPUTATION, &format!("cannot emit bundle: {e}"));
        }
    }
    match args.format {
        Format::Json => print!("{}", cli::to_json_string(&out.report)),
        Format::Text => print!("{}", cli::render_text(&out.report)),
    }
    if out.had_errors {
        ExitCode::from(EXIT_COMPUTATION)
    } else {
        ExitCode::SUCCESS
    }
}
