use clap::{Args, ValueEnum};
use gramlaw::montecarlo::McConfig;
use gramlaw::special::alpha_constant;
use gramlaw::special_unitary::{mc_distribution_su, prob_su_corollary, quad_prob_su, x2_integral};
use gramlaw::unitary::ArcInterval;

use crate::{parse_count, Failure};

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub(crate) enum Suite {
    Lemma1,
    Theorem1,
    Asymptotics,
    All,
}

#[derive(Args)]
pub(crate) struct VerifyArgs {
    #[arg(value_enum)]
    suite: Suite,
    /// Matrix sizes (comma separated); each suite has its own default
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    #[arg(long, value_parser = parse_count, default_value = "1e6")]
    samples: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..))]
    workers: u64,
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn sizes(args: &VerifyArgs, default: &[usize]) -> Vec<usize> {
    if args.n.is_empty() {
        default.to_vec()
    } else {
        args.n.clone()
    }
}

/// U(N)-side Monte Carlo against SU(N)-side quadrature, k = 0..3.
fn lemma1(args: &VerifyArgs) -> Result<bool, Failure> {
    let cfg = McConfig::new(args.samples, args.seed).with_workers(args.workers as usize);
    let mut all = true;
    for n in sizes(args, &[3, 4, 5]) {
        let est = mc_distribution_su(n, &cfg)?;
        for k in 0..=n.min(3) {
            let q = quad_prob_su(n, k)?;
            let e = est[k];
            let sig = e.sigmas_from(q);
            let ok = sig < 4.0;
            all &= ok;
            println!(
                "lemma1 N={n} k={k}: mc={:.6} quad={q:.6} |delta|={:.2e} sigma={:.2} {}",
                e.value,
                (e.value - q).abs(),
                sig,
                verdict(ok)
            );
        }
    }
    Ok(all)
}

/// Generating-function route against direct quadrature.
fn theorem1(args: &VerifyArgs) -> Result<bool, Failure> {
    let mut all = true;
    for n in sizes(args, &[3]) {
        let arc = ArcInterval::gram(n);
        for k in 0..=n {
            let c = prob_su_corollary(n, k, &arc)?;
            let q = quad_prob_su(n, k)?;
            let ok = (c - q).abs() < 1e-6;
            all &= ok;
            println!(
                "theorem1 N={n} k={k}: corollary={c:.9} quad={q:.9} |delta|={:.2e} {}",
                (c - q).abs(),
                verdict(ok)
            );
        }
    }
    Ok(all)
}

/// |N ∫X² + α| < 5/N².
fn asymptotics(args: &VerifyArgs) -> Result<bool, Failure> {
    let alpha = alpha_constant();
    let mut all = true;
    for n in sizes(args, &[50]) {
        let v = x2_integral(n)?.value;
        let gap = (n as f64 * v + alpha).abs();
        let bound = 5.0 / (n * n) as f64;
        let ok = gap < bound;
        all &= ok;
        println!(
            "asymptotics N={n}: N*x2={:.9} alpha={alpha:.9} |delta|={gap:.2e} bound={bound:.2e} {}",
            n as f64 * v,
            verdict(ok)
        );
    }
    Ok(all)
}

pub(crate) fn run(args: VerifyArgs) -> Result<(), Failure> {
    let ok = match args.suite {
        Suite::Lemma1 => lemma1(&args)?,
        Suite::Theorem1 => theorem1(&args)?,
        Suite::Asymptotics => asymptotics(&args)?,
        Suite::All => {
            if !args.n.is_empty() {
                return Err(Failure::Usage("--n cannot be combined with `all`".into()));
            }
            let a = lemma1(&args)?;
            let b = theorem1(&args)?;
            let c = asymptotics(&args)?;
            a && b && c
        }
    };
    println!("{}", verdict(ok));
    if ok {
        Ok(())
    } else {
        Err(Failure::Verify)
    }
}
