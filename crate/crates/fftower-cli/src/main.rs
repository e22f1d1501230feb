//! Batch command-line front end: every verifier and table generator, with
//! deterministic TSV output (JSON behind a flag).
//!
//! Exit codes: 0 all checks passed, 1 a verification failed, 2 bad
//! configuration, 3 precision or constant-field overflow abort.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use fftower::census::{self, CensusError};
use fftower::engine::EngineError;
use fftower::gf::FieldCtx;
use fftower::symbolic;

#[derive(Parser)]
#[command(
    name = "fftower",
    version,
    about = "Exact splitting laboratory for the tower y^2 + y = x/(x^2+x+1) over GF(2^s)"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct RunArgs {
    /// Extension degree s of the constant field GF(2^s)
    #[arg(long)]
    s: u32,
    /// Number of tower levels to climb
    #[arg(long, default_value_t = 10)]
    depth: u32,
    /// Series window (guaranteed coefficients per local expansion)
    #[arg(long, env = "FFTOWER_PRECISION", default_value_t = 64)]
    precision: usize,
    /// Override the irreducible modulus (bitmask, decimal or 0x-hex)
    #[arg(long, value_parser = parse_mask)]
    modulus: Option<u64>,
    /// Emit JSON instead of TSV
    #[arg(long)]
    json: bool,
    /// Seed for the randomized numeric spot checks
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the S-set: elements with h(beta) != 0 and Tr(f(beta)) = 0
    SSet(RunArgs),
    /// Rational place counts, genus, and rate columns per level
    Census(RunArgs),
    /// Genus columns per level (Riemann-Hurwitz over the locus trees)
    Genus(RunArgs),
    /// Run one of the tower verifiers
    Verify {
        #[command(flatten)]
        run: RunArgs,
        /// Which verifier to run
        #[arg(long, value_enum)]
        which: Which,
    },
    /// Verify the closed-form identity catalog (exact + numeric spot check)
    Identities {
        /// Seed for the numeric spot check over GF(2^10)
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Compare engine counts against the brute-force chain oracle
    Oracle(RunArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    /// Constant place count 2(|S|+1) for odd s
    Odd,
    /// Complete splitting above the poles of x_2 for even s
    Even,
    /// Ramification confined to the five-point locus
    Locus,
    /// Every different exponent equals 2(e-1)
    Weakram,
}

fn parse_mask(s: &str) -> Result<u64, String> {
    let t = s.trim();
    if let Some(hex) = t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        u64::from_str_radix(hex, 16).map_err(|e| e.to_string())
    } else {
        t.parse()
            .map_err(|e: std::num::ParseIntError| e.to_string())
    }
}

const EXIT_OK: u8 = 0;
const EXIT_VERIFY_FAIL: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

fn exit_code_for(err: &CensusError) -> u8 {
    match err {
        CensusError::NeedOdd(_) | CensusError::NeedEven(_) => EXIT_CONFIG,
        CensusError::ConstantFieldOverflow(_) => EXIT_RESOURCE,
        CensusError::Engine(EngineError::Precision(_)) => EXIT_RESOURCE,
        _ => EXIT_VERIFY_FAIL,
    }
}

fn field(args: &RunArgs) -> Result<FieldCtx, u8> {
    if args.s == 0 || args.s > 32 {
        eprintln!("error: --s must lie in 1..=32 (got {})", args.s);
        return Err(EXIT_CONFIG);
    }
    if args.precision < 16 {
        eprintln!(
            "error: --precision must be at least 16 (got {})",
            args.precision
        );
        return Err(EXIT_CONFIG);
    }
    let ctx = match args.modulus {
        Some(m) => FieldCtx::with_modulus(args.s, m as u128),
        None => FieldCtx::new(args.s),
    };
    ctx.map_err(|e| {
        eprintln!("error: {e}");
        EXIT_CONFIG
    })
}

fn cmd_s_set(args: &RunArgs) -> u8 {
    let ctx = match field(args) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let set = census::compute_s_set(&ctx);
    if args.json {
        let members: Vec<u64> = set.members.iter().map(|m| m.bits()).collect();
        println!(
            "{}",
            serde_json::json!({ "s": set.s, "members": members, "size": set.size() })
        );
    } else {
        let members: Vec<String> = set.members.iter().map(|m| m.to_string()).collect();
        println!("S = {{{}}}", members.join(", "));
        println!("|S| = {}", set.size());
    }
    EXIT_OK
}

fn cmd_census(args: &RunArgs) -> u8 {
    let ctx = match field(args) {
        Ok(c) => c,
        Err(code) => return code,
    };
    match census::limit_report(&ctx, args.depth, args.precision) {
        Ok(report) => {
            if args.json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.to_tsv());
            }
            if report.all_pass() {
                EXIT_OK
            } else {
                EXIT_VERIFY_FAIL
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn cmd_genus(args: &RunArgs) -> u8 {
    let ctx = match field(args) {
        Ok(c) => c,
        Err(code) => return code,
    };
    match census::genus_table(&ctx, args.depth, args.precision) {
        Ok(table) => {
            if args.json {
                println!(
                    "{}",
                    serde_json::json!({
                        "s": ctx.degree(),
                        "constant_degree": table.constant_degree,
                        "g": table.g,
                        "step_diff": table.step_diff,
                        "riemann_hurwitz_consistent": table.cumulative_consistent,
                        "weakly_ramified": table.weakly_ramified,
                    })
                );
            } else {
                println!("i\tg\tgamma");
                for (i, g) in table.g.iter().enumerate() {
                    println!("{i}\t{g}\t{:.6}", *g as f64 / (1u64 << i) as f64);
                }
                println!(
                    "# constant field degree {} ; RH cross-check {}",
                    table.constant_degree,
                    if table.cumulative_consistent {
                        "PASS"
                    } else {
                        "FAIL"
                    }
                );
            }
            if table.cumulative_consistent && table.weakly_ramified {
                EXIT_OK
            } else {
                EXIT_VERIFY_FAIL
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn cmd_verify(args: &RunArgs, which: Which) -> u8 {
    let ctx = match field(args) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let (w, d) = (args.precision, args.depth);
    let outcome: Result<(bool, String), CensusError> = match which {
        Which::Odd => census::verify_odd_case(&ctx, d, w).map(|v| {
            (
                v.ok(),
                format!(
                    "odd case: |S| = {}, N constant at {} over {} levels",
                    v.s_size,
                    2 * (v.s_size + 1),
                    d
                ),
            )
        }),
        Which::Even => census::verify_even_splitting(&ctx, d, w).and_then(|v| {
            let report = census::limit_report(&ctx, d, w)?;
            let lambda_ok = *report
                .verdicts
                .get("lambda_at_least_one_eighth")
                .unwrap_or(&false);
            Ok((
                v.ok() && lambda_ok,
                format!(
                    "even case: {} poles of x_2 over the zero of x_0+1, descendants split: {}, N_i >= 2^(i-1): {}, lambda >= 1/8: {}",
                    v.pole_count, v.all_descendants_split, v.n_lower_bound_ok, lambda_ok
                ),
            ))
        }),
        Which::Locus => census::rational_census(&ctx, d, w).map(|c| {
            (
                c.locus_confined,
                "ramification confined to {0, 1, h-roots, infinity}".to_string(),
            )
        }),
        Which::Weakram => census::rational_census(&ctx, d, w).and_then(|c| {
            let genus = census::genus_table(&ctx, d, w)?;
            Ok((
                c.weakly_ramified && genus.weakly_ramified,
                "every different exponent equals 2(e-1)".to_string(),
            ))
        }),
    };
    match outcome {
        Ok((ok, detail)) => {
            println!("{} — {detail}", if ok { "PASS" } else { "FAIL" });
            if ok {
                EXIT_OK
            } else {
                EXIT_VERIFY_FAIL
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn cmd_identities(seed: u64, json: bool) -> u8 {
    let results = symbolic::run_catalog();
    let ctx = FieldCtx::new(10).expect("GF(2^10)");
    let numeric = symbolic::numeric_crosscheck(&ctx, seed, 25);
    let passed = results
        .iter()
        .filter(|(_, ok, mutated)| *ok && !mutated)
        .count();
    if json {
        let items: Vec<_> = results
            .iter()
            .map(|(id, ok, mutated)| {
                serde_json::json!({
                    "name": id.name(), "holds": ok, "mutation_holds": mutated
                })
            })
            .collect();
        println!(
            "{}",
            serde_json::json!({
                "identities": items,
                "passed": passed,
                "total": results.len(),
                "numeric_points": numeric.as_ref().ok(),
            })
        );
    } else {
        for (id, ok, mutated) in &results {
            println!(
                "{}\t{}\tmutation {}",
                id.name(),
                if *ok { "PASS" } else { "FAIL" },
                if *mutated { "UNDETECTED" } else { "detected" }
            );
        }
        match &numeric {
            Ok(points) => {
                println!("numeric spot check: {points} points over GF(2^10), seed {seed}")
            }
            Err(e) => println!("numeric spot check failed: {e}"),
        }
        println!("{passed}/{} identities verified", results.len());
    }
    if passed == results.len() && numeric.is_ok() {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAIL
    }
}

fn cmd_oracle(args: &RunArgs) -> u8 {
    let ctx = match field(args) {
        Ok(c) => c,
        Err(code) => return code,
    };
    if args.s > 8 {
        eprintln!("error: the chain oracle is exponential; --s must be <= 8");
        return EXIT_CONFIG;
    }
    let oracle = census::oracle_chain_count(&ctx, args.depth);
    match census::rational_census(&ctx, args.depth, args.precision) {
        Ok(c) => {
            let mut all_equal = true;
            println!("i\tengine\toracle\tmatch");
            for i in 0..=args.depth as usize {
                let e = c.finite_nonroot[i];
                let o = oracle[i];
                if e != o {
                    all_equal = false;
                }
                println!("{i}\t{e}\t{o}\t{}", if e == o { "yes" } else { "NO" });
            }
            if all_equal {
                EXIT_OK
            } else {
                EXIT_VERIFY_FAIL
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match &cli.cmd {
        Cmd::SSet(args) => cmd_s_set(args),
        Cmd::Census(args) => cmd_census(args),
        Cmd::Genus(args) => cmd_genus(args),
        Cmd::Verify { run, which } => cmd_verify(run, *which),
        Cmd::Identities { seed, json } => cmd_identities(*seed, *json),
        Cmd::Oracle(args) => cmd_oracle(args),
    };
    ExitCode::from(code)
}
