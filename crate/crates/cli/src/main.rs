//! `rcx`: relaxation complexity from the command line.
//!
//! Exit codes: 0 success, verified or converged; 1 fails or bound only; 2 input error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand};
use sha2::{Digest, Sha256};

use relaxcomp::bounds::{chromatic_number, hiding_graph, max_clique};
use relaxcomp::fixtures;
use relaxcomp::halfspace::HPolyhedron;
use relaxcomp::lattice::{
    ball, box_set, cross, cube, debruijn_set, delta3_certificate, observers_in_region,
    parity_candidates, simplex,
};
use relaxcomp::rat::{self, Rat};
use relaxcomp::rc2d::rc_2d_report;
use relaxcomp::relaxations::{
    box_simplex, cross_relaxation, iterative_rc, verify_relaxation, IterOutcome, Verification,
};
use relaxcomp::separation::{
    eps_region, observer_superset, rc_eps_with, rc_finite_with, CoverOptions,
    SeparationCertificate,
};
use relaxcomp::{Error, LatticeSet};

#[derive(Parser)]
#[command(name = "rcx", version, about = "Exact relaxation complexity of lattice point sets")]
struct Cli {
    /// Worker threads for hiding graphs and separation LPs (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Planar pipeline: observers, maximal arcs and a minimum circular cover.
    Rc2d {
        input: PathBuf,
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// rc(X, Y) for a finite Y.
    Rc {
        input: PathBuf,
        /// ball:t, file:PATH or parity-obs. Balls grow as (2t+1)^d points.
        #[arg(long, default_value = "ball:1")]
        against: String,
        #[arg(long)]
        cert: Option<PathBuf>,
        /// Start the search from the chromatic number instead of the clique number.
        #[arg(long)]
        chromatic: bool,
    },
    /// rc_eps(X, Y); Y defaults to the finite certificate region.
    RcEps {
        input: PathBuf,
        /// Rational epsilon, such as 1/4.
        #[arg(long)]
        eps: String,
        #[arg(long)]
        against: Option<String>,
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Clique and chromatic lower bounds from the hiding graph.
    Bounds {
        input: PathBuf,
        #[arg(long, default_value = "ball:1")]
        against: String,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Check Q ∩ Z^d = X.
    Verify { polyhedron: PathBuf, input: PathBuf },
    /// Print a named point set or polyhedron.
    ///
    /// simplex D | cross D | cube D T | box A:B [A:B ...] | debruijn D | delta3-cert |
    /// four-facet I | pentagon | box-simplex L B | cross-relaxation D
    Gen {
        name: String,
        params: Vec<String>,
    },
    /// Alternate exact rc(X, Y) with harvesting violated points.
    Iterate {
        input: PathBuf,
        #[arg(long, default_value = "ball:1")]
        start: String,
        #[arg(long = "box", default_value_t = 4)]
        box_t: i64,
        #[arg(long, default_value_t = 10)]
        rounds: usize,
    },
}

/// Failure classes mapped to exit codes.
enum Failure {
    Input(anyhow::Error),
    Negative,
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.into())
    }
}

type Run = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let start = Instant::now();
    let res = run(cli.cmd);
    eprintln!("time: {:.3}s", start.elapsed().as_secs_f64());
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Negative) => ExitCode::from(1),
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Cmd) -> Run {
    match cmd {
        Cmd::Rc2d { input, cert } => {
            let x = read_set(&input)?;
            if x.dim() != 2 {
                return Err(anyhow!("rc2d needs a planar set, got dimension {}", x.dim()).into());
            }
            let r = rc_2d_report(&x)?;
            println!("command: rc2d");
            print_digest(&[&input])?;
            println!("observers = {}", r.observers.len());
            println!("arcs = {}", r.arcs.len());
            println!("rc = {}", r.k);
            write_cert(cert.as_deref(), &r.certificate)?;
        }
        Cmd::Rc {
            input,
            against,
            cert,
            chromatic,
        } => {
            let x = read_set(&input)?;
            let y = against_set(&x, &against)?;
            let opts = CoverOptions {
                chromatic_bound: chromatic,
            };
            let r = rc_finite_with(&x, &y, opts)?;
            println!("command: rc --against {against}");
            print_digest(&inputs(&input, Some(&against)))?;
            println!("outer points = {}", r.stats.outer_points);
            println!("after reduction = {}", r.stats.reduced_points);
            println!("lower bound = {}", r.stats.lower_bound);
            println!("rc = {}", r.k);
            write_cert(cert.as_deref(), &r.certificate)?;
        }
        Cmd::RcEps {
            input,
            eps,
            against,
            cert,
        } => {
            let x = read_set(&input)?;
            let e = parse_eps(&eps)?;
            let region = eps_region(&x, &e)?;
            let y = match &against {
                Some(source) => against_set(&x, source)?,
                None => match observer_superset(&x)? {
                    Some(s) => region.certificate_set.intersection(&s)?,
                    None => region.certificate_set.clone(),
                },
            };
            let r = rc_eps_with(&x, &e, &y, CoverOptions::default())?;
            match &against {
                Some(a) => println!("command: rc-eps --eps {} --against {a}", rat::fmt_rat(&e)),
                None => println!("command: rc-eps --eps {}", rat::fmt_rat(&e)),
            }
            print_digest(&inputs(&input, against.as_deref()))?;
            println!("constant = {}", rat::fmt_rat(&region.constant));
            println!("region points = {}", region.certificate_set.len());
            println!("outer points = {}", r.stats.outer_points);
            println!("k = {}", r.k);
            write_cert(cert.as_deref(), &r.certificate)?;
        }
        Cmd::Bounds {
            input,
            against,
            dot,
        } => {
            let x = read_set(&input)?;
            let y = against_set(&x, &against)?;
            let g = hiding_graph(&x, &y)?;
            let (w, _) = max_clique(&g);
            let (chi, _) = chromatic_number(&g);
            println!("command: bounds --against {against}");
            print_digest(&inputs(&input, Some(&against)))?;
            println!("vertices = {} edges = {}", g.len(), g.edge_count());
            println!("clique={w} chromatic={chi}");
            if let Some(p) = dot {
                fs::write(&p, g.to_dot()).with_context(|| format!("writing {}", p.display()))?;
                println!("dot: {}", p.display());
            }
        }
        Cmd::Verify { polyhedron, input } => {
            let q = read_poly(&polyhedron)?;
            let x = read_set(&input)?;
            println!("command: verify");
            print_digest(&[&polyhedron, &input])?;
            match verify_relaxation(&q, &x) {
                Ok(Verification::Verified) => println!("verified"),
                Ok(Verification::Fails(p)) => {
                    println!("fails at {}", fmt_point(&p));
                    return Err(Failure::Negative);
                }
                Err(Error::Unbounded) => {
                    println!("fails: unbounded");
                    return Err(Failure::Negative);
                }
                Err(e) => return Err(e.into()),
            }
        }
        Cmd::Gen { name, params } => print!("{}", generate(&name, &params)?),
        Cmd::Iterate {
            input,
            start,
            box_t,
            rounds,
        } => {
            let x = read_set(&input)?;
            let y0 = against_set(&x, &start)?;
            let out = iterative_rc(&x, &y0, box_t, rounds)?;
            println!("command: iterate --start {start} --box {box_t} --rounds {rounds}");
            print_digest(&inputs(&input, Some(&start)))?;
            match out {
                IterOutcome::Converged { k, q, rounds } => {
                    println!("converged after {rounds} rounds");
                    println!("rc = {k}");
                    print!("{}", q.to_text());
                }
                IterOutcome::BoundOnly { k, rounds } => {
                    println!("bound only after {rounds} rounds");
                    println!("rc >= {k}");
                    return Err(Failure::Negative);
                }
            }
        }
    }
    Ok(())
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_set(path: &Path) -> anyhow::Result<LatticeSet> {
    LatticeSet::parse(&read(path)?).with_context(|| path.display().to_string())
}

fn read_poly(path: &Path) -> anyhow::Result<HPolyhedron> {
    HPolyhedron::parse(&read(path)?).with_context(|| path.display().to_string())
}

/// The input file plus the point file named by a `file:` source.
fn inputs<'a>(input: &'a Path, source: Option<&'a str>) -> Vec<&'a Path> {
    let mut v = vec![input];
    if let Some(p) = source.and_then(|s| s.strip_prefix("file:")) {
        v.push(Path::new(p));
    }
    v
}

fn print_digest(paths: &[&Path]) -> anyhow::Result<()> {
    let mut h = Sha256::new();
    for p in paths {
        h.update(fs::read(p).with_context(|| format!("reading {}", p.display()))?);
    }
    println!("input sha256: {}", hex::encode(h.finalize()));
    Ok(())
}

fn write_cert(path: Option<&Path>, cert: &SeparationCertificate) -> anyhow::Result<()> {
    if let Some(p) = path {
        fs::write(p, cert.to_json() + "\n").with_context(|| format!("writing {}", p.display()))?;
        println!("certificate: {}", p.display());
    }
    Ok(())
}

fn fmt_point(p: &[i64]) -> String {
    let s: Vec<String> = p.iter().map(|v| v.to_string()).collect();
    format!("({})", s.join(","))
}

fn parse_eps(s: &str) -> anyhow::Result<Rat> {
    let e = rat::parse_rat(s).ok_or_else(|| anyhow!("cannot parse epsilon {s:?}"))?;
    if e <= rat::zero() {
        bail!("epsilon must be positive");
    }
    Ok(e)
}

fn against_set(x: &LatticeSet, source: &str) -> anyhow::Result<LatticeSet> {
    if source == "parity-obs" {
        let cand = parity_candidates(x)
            .ok_or_else(|| anyhow!("set does not meet every residue class mod 2"))?;
        return Ok(observers_in_region(x, &cand)?);
    }
    if let Some(t) = source.strip_prefix("ball:") {
        let t: i64 = t.parse().with_context(|| format!("bad radius in {source:?}"))?;
        if t < 1 {
            bail!("ball radius must be at least 1");
        }
        return Ok(ball(x, t)?);
    }
    if let Some(p) = source.strip_prefix("file:") {
        let y = read_set(Path::new(p))?;
        if y.dim() != x.dim() {
            bail!("{p} has dimension {}, expected {}", y.dim(), x.dim());
        }
        return Ok(y);
    }
    bail!("unknown point source {source:?}; use ball:t, file:PATH or parity-obs")
}

fn generate(name: &str, params: &[String]) -> anyhow::Result<String> {
    let int = |i: usize| -> anyhow::Result<i64> {
        let s = params
            .get(i)
            .ok_or_else(|| anyhow!("{name} needs parameter {}", i + 1))?;
        s.parse().with_context(|| format!("bad integer {s:?}"))
    };
    let dim = |i: usize| -> anyhow::Result<usize> {
        let v = int(i)?;
        if v < 1 {
            bail!("dimension must be positive");
        }
        Ok(v as usize)
    };
    let set = match name {
        "simplex" => simplex(dim(0)?),
        "cross" => cross(dim(0)?),
        "cube" => cube(dim(0)?, int(1)?)?,
        "box" => {
            if params.is_empty() {
                bail!("box needs segments A:B");
            }
            let segs = params
                .iter()
                .map(|s| {
                    let (a, b) = s
                        .split_once(':')
                        .ok_or_else(|| anyhow!("segment {s:?} is not A:B"))?;
                    Ok((a.parse()?, b.parse()?))
                })
                .collect::<anyhow::Result<Vec<(i64, i64)>>>()?;
            box_set(&segs)?
        }
        "debruijn" => debruijn_set(dim(0)?)?,
        "delta3-cert" => delta3_certificate(),
        "four-facet" => fixtures::four_facet_set(int(0)? as usize)?,
        "pentagon" => fixtures::pentagon(),
        "box-simplex" => return Ok(box_simplex(int(0)? as usize, int(1)?)?.to_text()),
        "cross-relaxation" => return Ok(cross_relaxation(dim(0)?)?.to_text()),
        _ => bail!("unknown generator {name:?}"),
    };
    Ok(set.to_string())
}
