use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use skein_torsion::cheby;
use skein_torsion::chvar::{self, ScanConfig, Tangle};
use skein_torsion::ncrewrite::{derive_e_n, verify_commute_many, Mutation, Outcome, Route};
use skein_torsion::skein::{verify_fixture, verify_fixture_dir, Diagram, SkeinAlgebra, SkeinElement, IDENTITY_FILE};
use skein_torsion::suite::{self, Config};

#[derive(Parser)]
#[command(name = "sktor", version, about = "Skein algebra and character variety checks for Montesinos knot exteriors")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run suites.
    Verify {
        #[command(subcommand)]
        what: VerifyCmd,
    },
    /// Chebyshev identities.
    Cheby {
        #[command(subcommand)]
        what: ChebyCmd,
    },
    /// The commutation identity and the torsion family, per n.
    Ncverify {
        #[arg(long, default_value_t = 32)]
        max_n: usize,
        #[arg(long, value_enum, default_value_t = RouteArg::Both)]
        route: RouteArg,
    },
    /// Diagram resolution and products.
    Skein {
        #[command(subcommand)]
        what: SkeinCmd,
    },
    /// SL(2,C) scans.
    Chvar {
        #[command(subcommand)]
        what: ChvarCmd,
    },
    /// Fixture scaffolding.
    Fixtures {
        #[command(subcommand)]
        what: FixturesCmd,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Every suite; exit status 1 on any failure, 2 on a configuration error.
    All {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        max_n: Option<usize>,
    },
}

#[derive(Subcommand)]
enum ChebyCmd {
    Verify {
        #[arg(long, default_value_t = 64)]
        max_n: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum RouteArg {
    A,
    B,
    Both,
}

#[derive(Subcommand)]
enum SkeinCmd {
    /// Expand a diagram file in the multicurve basis.
    Resolve {
        file: PathBuf,
        #[arg(long, default_value_t = skein_torsion::skein::DEFAULT_STATE_CAP)]
        state_cap: usize,
    },
    /// Product of two diagrams, the first stacked over the second.
    Multiply {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = skein_torsion::skein::DEFAULT_STATE_CAP)]
        state_cap: usize,
    },
    /// Check one fixture directory, or every fixture below a directory.
    VerifyFixture {
        dir: PathBuf,
        #[arg(long, default_value_t = skein_torsion::skein::DEFAULT_STATE_CAP)]
        state_cap: usize,
    },
}

#[derive(Subcommand)]
enum ChvarCmd {
    Scan {
        #[arg(long, default_value = "1/3,1/3,1/3,1/3")]
        tangles: String,
        #[arg(long, default_value_t = 8)]
        t_samples: usize,
        #[arg(long, default_value_t = 100)]
        b_samples: usize,
        #[arg(long, default_value_t = 16)]
        n_max: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    Fricke {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 10)]
        t_count: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum FixturesCmd {
    Emit {
        dir: PathBuf,
        #[arg(long)]
        force: bool,
    },
}

fn fail_input(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn status(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn read_diagram(path: &Path) -> Result<Diagram, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Diagram::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn print_element(e: &SkeinElement) {
    print!("{e}");
    if !e.to_string().ends_with('\n') {
        println!();
    }
}

fn label(o: &Option<Outcome>) -> &'static str {
    o.as_ref().map(Outcome::label).unwrap_or("PASS")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Verify { what: VerifyCmd::All { config, seed, max_n } } => {
            let mut cfg = match config {
                Some(p) => match Config::load(&p) {
                    Ok(c) => c,
                    Err(e) => return fail_input(e),
                },
                None => Config::default(),
            };
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(n) = max_n {
                cfg.max_n = n.max(1);
            }
            let report = suite::run_all(&cfg);
            print!("{report}");
            eprint!("{}", report.timings());
            ExitCode::from(report.exit_code() as u8)
        }
        Cmd::Cheby { what: ChebyCmd::Verify { max_n } } => {
            let rows = cheby::verify_identities(max_n);
            let mut ok = true;
            for r in &rows {
                ok &= r.pass;
                let mark = if r.pass { "PASS" } else { "FAIL" };
                match &r.detail {
                    Some(d) => println!("{} n={} {mark} {d}", r.identity, r.n),
                    None => println!("{} n={} {mark}", r.identity, r.n),
                }
            }
            status(ok)
        }
        Cmd::Ncverify { max_n, route } => {
            let route = match route {
                RouteArg::A => Route::Commutative,
                RouteArg::B => Route::Rewriting,
                RouteArg::Both => Route::Both,
            };
            let mut ok = true;
            for n in 1..=max_n {
                let cm = match verify_commute_many(n, route, Mutation::None) {
                    Ok(r) => r,
                    Err(e) => return fail_input(e),
                };
                let e_n = match derive_e_n(n) {
                    Ok(r) => r.outcome,
                    Err(e) => return fail_input(e),
                };
                let cm_label = if cm.passed() { "PASS" } else { "FAIL" };
                ok &= cm.passed() && e_n.passed();
                let mut line = format!("n={n} commute_many={cm_label} e_n={}", e_n.label());
                if matches!(route, Route::Both) {
                    line += &format!(" route_a={} route_b={}", label(&cm.commutative), label(&cm.rewriting));
                }
                println!("{line}");
            }
            status(ok)
        }
        Cmd::Skein { what } => match what {
            SkeinCmd::Resolve { file, state_cap } => {
                let d = match read_diagram(&file) {
                    Ok(d) => d,
                    Err(e) => return fail_input(e),
                };
                match SkeinAlgebra::with_cap(d.board.n, state_cap).resolve(&d) {
                    Ok(e) => {
                        print_element(&e);
                        ExitCode::SUCCESS
                    }
                    Err(e) => fail_input(e),
                }
            }
            SkeinCmd::Multiply { a, b, state_cap } => {
                let (da, db) = match (read_diagram(&a), read_diagram(&b)) {
                    (Ok(x), Ok(y)) => (x, y),
                    (Err(e), _) | (_, Err(e)) => return fail_input(e),
                };
                let alg = SkeinAlgebra::with_cap(da.board.n, state_cap);
                let prod = alg
                    .resolve(&da)
                    .and_then(|ea| alg.resolve(&db).and_then(|eb| alg.multiply(&ea, &eb)));
                match prod {
                    Ok(e) => {
                        print_element(&e);
                        ExitCode::SUCCESS
                    }
                    Err(e) => fail_input(e),
                }
            }
            SkeinCmd::VerifyFixture { dir, state_cap } => {
                let list = if dir.join(IDENTITY_FILE).exists() {
                    let name = dir.file_name().unwrap_or_default().to_string_lossy().into_owned();
                    vec![(name, verify_fixture(&dir, state_cap))]
                } else {
                    match verify_fixture_dir(&dir, state_cap) {
                        Ok(l) => l,
                        Err(e) => return fail_input(e),
                    }
                };
                let mut ok = true;
                for (name, st) in list {
                    ok &= st.label() != "FAIL";
                    println!("{name}: {st}");
                }
                status(ok)
            }
        },
        Cmd::Chvar { what } => match what {
            ChvarCmd::Scan { tangles, t_samples, b_samples, n_max, seed } => {
                let parsed: Result<Vec<Tangle>, _> = tangles.split(',').map(str::parse).collect();
                let tangles: [Tangle; 4] = match parsed {
                    Ok(v) => match v.try_into() {
                        Ok(t) => t,
                        Err(_) => return fail_input("expected four tangles"),
                    },
                    Err(e) => return fail_input(e),
                };
                let cfg = ScanConfig { tangles, t_samples, b_samples, n_max, seed, ..Default::default() };
                match chvar::nonvanishing_scan(&cfg) {
                    Ok(r) => {
                        print!("{}", chvar::render_scan(&r));
                        let s = chvar::summarize(&r);
                        println!(
                            "nonvanishing={:.3} zeros={} unexplained_zeros={} ratio_ok={}",
                            s.nonvanishing_fraction, s.zeros, s.unexplained_zeros, s.ratio_ok && s.route_ok
                        );
                        status(s.nonvanishing_fraction >= 0.95 && s.unexplained_zeros == 0 && s.ratio_ok && s.route_ok)
                    }
                    Err(e) => fail_input(e),
                }
            }
            ChvarCmd::Fricke { trials, t_count, seed } => {
                let worst = chvar::fricke_trials(trials, t_count, seed);
                let ok = worst < 1e-8;
                println!("fricke trials={trials} t_count={t_count} max_abs_f={worst:e} {}", if ok { "PASS" } else { "FAIL" });
                status(ok)
            }
        },
        Cmd::Fixtures { what: FixturesCmd::Emit { dir, force } } => match suite::emit_templates(&dir, force) {
            Ok(lines) => {
                for l in lines {
                    println!("{l}");
                }
                ExitCode::SUCCESS
            }
            Err(e) => fail_input(e),
        },
    }
}
