//! `zeck`: Zeckendorf arithmetic from the command line.
//!
//! Results go to stdout, one per line. Traces and benchmark lines go to
//! stderr. Exit status is 0 on success, 1 on a usage error and 2 when an
//! operand or input file is rejected.

use std::fs;
use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use rand::rngs::StdRng;
use rand::SeedableRng;

use zeck_core::adder::{stage1_eliminate_traced, stage2_left_to_right_traced, stage2_right_to_left_traced};
use zeck_core::automaton::{compiled, run_parallel_prefix, run_scan};
use zeck_core::convert::{natural_to_zeck, zeck_to_natural};
use zeck_core::fibcodec::{decode_stream, encode_stream, CodeStream};
use zeck_core::seq::canonical_violation;
use zeck_core::signed::{add_signed_traced, preliminary_pass_traced, subtract_traced};
use zeck_core::{
    binary_to_zeck, divrem, mul_binary, mul_fenwick, sample, sqrt_rem, zeck_to_binary, BitSeq, PassId, PassTrace,
    Sign, SignedZeck, TernSeq, WorkSeq, ZeckError, ZeckSeq,
};

#[derive(Parser)]
#[command(name = "zeck", version, about = "Arithmetic on Zeckendorf (Fibonacci) representations")]
struct Cli {
    /// Read numeric operands as decimal integers instead of digit strings
    #[arg(long, global = true)]
    dec: bool,

    /// Print every rule firing of add/sub to stderr
    #[arg(long, global = true)]
    trace: bool,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Signed sum
    Add {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Signed difference a - b
    Sub {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Signed product
    Mul {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
        #[arg(long, value_enum, default_value_t = Method::Fenwick)]
        method: Method,
    },
    /// Quotient and remainder (printed on two lines)
    Divrem {
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        d: String,
    },
    /// Integer square root and remainder (printed on two lines)
    Sqrtrem {
        #[arg(allow_hyphen_values = true)]
        x: String,
    },
    /// Binary (or, with --dec, decimal) to Zeckendorf
    Tozeck { n: String },
    /// Zeckendorf to binary (or, with --dec, decimal)
    Tobin { z: String },
    /// Check that a digit string is canonical
    Validate { s: String },
    /// Run one pass over a working sequence, printing every firing and then the output
    Trace {
        #[arg(value_parser = parse_pass)]
        pass: PassId,
        digits: String,
    },
    /// Time a compiled pass on random inputs
    Bench {
        #[arg(long, value_parser = parse_pass)]
        pass: PassId,
        #[arg(long)]
        digits: usize,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        /// Use parallel-prefix composition instead of a sequential scan
        #[arg(long)]
        prefix: bool,
        #[arg(long, default_value_t = 64)]
        chunk: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Fibonacci-code stream files
    Codec {
        #[command(subcommand)]
        op: CodecOp,
    },
}

#[derive(Subcommand)]
enum CodecOp {
    /// Newline-separated decimal integers (each >= 1) to a code stream
    Encode { input: String, output: String },
    /// Code stream back to newline-separated decimals
    Decode { input: String, output: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Fenwick,
    Binary,
}

fn parse_pass(s: &str) -> Result<PassId, String> {
    s.parse().map_err(|_| format!("expected one of {}", PassId::ALL.map(|p| p.as_str()).join(", ")))
}

enum Failure {
    Zeck(ZeckError),
    Io(String),
    /// Already reported on stdout.
    Rejected,
}

impl From<ZeckError> for Failure {
    fn from(e: ZeckError) -> Self {
        Failure::Zeck(e)
    }
}

type Outcome = Result<(), Failure>;

fn decimal(s: &str) -> Result<BigUint, ZeckError> {
    s.parse()
        .map_err(|_| ZeckError::Parse { input: s.into(), reason: "not a non-negative decimal integer".into() })
}

fn operand(s: &str, dec: bool) -> Result<SignedZeck, ZeckError> {
    if !dec {
        return s.parse();
    }
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (Sign::NonPos, rest),
        None => (Sign::NonNeg, s.strip_prefix('+').unwrap_or(s)),
    };
    let magnitude = natural_to_zeck(&decimal(body)?)?;
    Ok(SignedZeck::new(sign, magnitude))
}

fn natural(s: &str, dec: bool) -> Result<ZeckSeq, ZeckError> {
    let v = operand(s, dec)?;
    if v.sign() == Sign::NonPos {
        return Err(ZeckError::Domain(format!("{s} is negative")));
    }
    Ok(v.magnitude().clone())
}

fn print_traces(traces: &[PassTrace]) {
    for t in traces {
        for line in t.lines() {
            eprintln!("{line}");
        }
    }
}

fn trace_pass(pass: PassId, digits: &str) -> Result<(String, PassTrace), ZeckError> {
    Ok(match pass {
        PassId::Stage1 => {
            let (w, t) = stage1_eliminate_traced(digits.parse::<WorkSeq>()?, true)?;
            (w.to_string(), t)
        }
        PassId::Stage2Rl => {
            let (w, t) = stage2_right_to_left_traced(digits.parse::<WorkSeq>()?, true)?;
            (w.to_string(), t)
        }
        PassId::Stage2Lr => {
            let (z, t) = stage2_left_to_right_traced(digits.parse::<WorkSeq>()?, true)?;
            (z.to_string(), t)
        }
        PassId::SignedPrelim => {
            let (w, t) = preliminary_pass_traced(&digits.parse::<TernSeq>()?, true)?;
            (w.to_string(), t)
        }
    })
}

fn bench(pass: PassId, digits: usize, trials: usize, prefix: bool, chunk: usize, seed: u64) -> Outcome {
    let t = compiled(pass);
    let mut rng = StdRng::seed_from_u64(seed);
    for _ in 0..trials {
        let input = sample::pass_input(&mut rng, pass, digits);
        let start = Instant::now();
        let run = if prefix { run_parallel_prefix(t, &input, chunk)? } else { run_scan(t, &input)? };
        let ns = start.elapsed().as_nanos() as f64 / input.len() as f64;
        let c = run.cost;
        // a scan has no composition tree
        let height = c.tree_height.map_or_else(|| "-".to_string(), |h| h.to_string());
        eprintln!(
            "pass={} n={} placements={} firings={} height={} ns_per_digit={:.2}",
            c.pass, c.n, c.placements, c.firings, height, ns
        );
    }
    Ok(())
}

fn codec(op: CodecOp) -> Outcome {
    match op {
        CodecOp::Encode { input, output } => {
            let text = fs::read_to_string(&input).map_err(|e| Failure::Io(format!("{input}: {e}")))?;
            let values = text
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .map(decimal)
                .collect::<Result<Vec<_>, _>>()?;
            let bytes = encode_stream(&values)?.to_bytes();
            fs::write(&output, bytes).map_err(|e| Failure::Io(format!("{output}: {e}")))?;
        }
        CodecOp::Decode { input, output } => {
            let bytes = fs::read(&input).map_err(|e| Failure::Io(format!("{input}: {e}")))?;
            let values = decode_stream(&CodeStream::from_bytes(&bytes)?)?;
            let text: String = values.iter().map(|v| format!("{v}\n")).collect();
            fs::write(&output, text).map_err(|e| Failure::Io(format!("{output}: {e}")))?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    let dec = cli.dec;
    match cli.cmd {
        Cmd::Add { a, b } => {
            let (r, traces) = add_signed_traced(&operand(&a, dec)?, &operand(&b, dec)?, cli.trace)?;
            print_traces(&traces);
            println!("{r}");
        }
        Cmd::Sub { a, b } => {
            let (r, traces) = subtract_traced(&operand(&a, dec)?, &operand(&b, dec)?, cli.trace)?;
            print_traces(&traces);
            println!("{r}");
        }
        Cmd::Mul { a, b, method } => {
            let (a, b) = (operand(&a, dec)?, operand(&b, dec)?);
            let mag = match method {
                Method::Fenwick => mul_fenwick(a.magnitude(), b.magnitude())?,
                Method::Binary => mul_binary(a.magnitude(), b.magnitude())?,
            };
            let sign = if a.sign() == b.sign() { Sign::NonNeg } else { Sign::NonPos };
            println!("{}", SignedZeck::new(sign, mag));
        }
        Cmd::Divrem { x, d } => {
            let (q, r) = divrem(&natural(&x, dec)?, &natural(&d, dec)?)?;
            println!("{q}\n{r}");
        }
        Cmd::Sqrtrem { x } => {
            let (s, r) = sqrt_rem(&natural(&x, dec)?)?;
            println!("{s}\n{r}");
        }
        Cmd::Tozeck { n } => {
            let z = if dec { natural_to_zeck(&decimal(&n)?)? } else { binary_to_zeck(&n.parse::<BitSeq>()?)? };
            println!("{z}");
        }
        Cmd::Tobin { z } => {
            let z: ZeckSeq = z.parse()?;
            if dec {
                println!("{}", zeck_to_natural(&z)?);
            } else {
                println!("{}", zeck_to_binary(&z)?);
            }
        }
        Cmd::Validate { s } => {
            let w: WorkSeq = s.parse()?;
            match canonical_violation(w.digits()) {
                None => println!("canonical"),
                Some(v) => {
                    println!("non-canonical: {v}");
                    return Err(Failure::Rejected);
                }
            }
        }
        Cmd::Trace { pass, digits } => {
            let (out, trace) = trace_pass(pass, &digits)?;
            for line in trace.lines() {
                println!("{line}");
            }
            println!("{out}");
        }
        Cmd::Bench { pass, digits, trials, prefix, chunk, seed } => bench(pass, digits, trials, prefix, chunk, seed)?,
        Cmd::Codec { op } => codec(op)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match f {
                Failure::Zeck(e) => eprintln!("error: {e}"),
                Failure::Io(msg) => eprintln!("error: {msg}"),
                Failure::Rejected => {}
            }
            ExitCode::from(2)
        }
    }
}
