//! Command-line front-end: parsing, property reports, statement checking,
//! searches and the built-in demo corpus.
//!
//! Exit codes: 0 success; 1 a property asserted via `--assert` was false;
//! 2 usage error; 3 a proved statement returned a counterexample verdict
//! (which indicates a bug, not mathematics).

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};

use covers::analysis::IndexSet;
use covers::exec::{self, ExecMode};
use covers::groups::{CosetSystem, FiniteGroup, Subgroup};
use covers::mycielski;
use covers::search::{self, GroupBounds, HuntTarget, Predicate, ZBounds};
use covers::verifiers::{self, Outcome, Verdict};
use covers::zsystems::{ZSystem, DEFAULT_PERIOD_CAP};
use covers::{corpus, PropertyReport};

const USAGE_ERROR: u8 = 2;
const COUNTEREXAMPLE_ERROR: u8 = 3;

#[derive(Parser)]
#[command(
    name = "covers",
    version,
    about = "Finite covers of groups by cosets: analysis, checking, search"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Emit JSON instead of text
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for enumeration; 1 forces the sequential path
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Property report: multiplicity, m-cover, exact, minimal, regular,
    /// partition
    Check {
        /// Inline residue-class system, e.g. "0/2,0/3,1/4,5/6,7/12"
        #[arg(long)]
        z: Option<String>,
        /// JSON input file (residue classes or a coset system)
        #[arg(long)]
        input: Option<PathBuf>,
        /// Queried covering multiplicity
        #[arg(long, default_value_t = 1)]
        m: usize,
        /// Comma-separated properties that must hold (exit 1 otherwise):
        /// cover, m-cover, exact, minimal, regular, regular-cover, partition
        #[arg(long)]
        assert: Option<String>,
        /// Period cap for residue-class systems
        #[arg(long, default_value_t = DEFAULT_PERIOD_CAP)]
        max_period: u64,
    },
    /// Factorization and the additive function f
    F { n: u64 },
    /// Group facts: order, center, solvability, subgroup lattice
    Group {
        spec: String,
        /// List the full subgroup lattice
        #[arg(long)]
        lattice: bool,
        /// Order cap override
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Run a statement checker against a system
    Verify {
        /// One of: tomkinson, 1.1, 1.2, 1.3, 1.4, 1.5, 2.1, 2.2, c1.1, c1.2
        #[arg(long)]
        theorem: String,
        #[arg(long)]
        z: Option<String>,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        m: usize,
        /// Index subset for 2.1, e.g. "0,2" (default: all subsets)
        #[arg(long)]
        subset: Option<String>,
        /// Subgroup elements for 2.2/1.5, e.g. "0,2,4"
        #[arg(long)]
        h: Option<String>,
        /// For residue-class systems: also run the transported check and
        /// require agreement
        #[arg(long)]
        cross_check: bool,
    },
    /// Enumerate systems by predicate, or hunt a conjecture
    Search {
        /// Enumerate residue-class systems up to this period
        #[arg(long)]
        max_period: Option<u64>,
        /// Enumerate coset systems in this group
        #[arg(long)]
        group: Option<String>,
        #[arg(long, default_value_t = 3)]
        max_k: usize,
        /// Multiplicity for the minimal/exact predicates
        #[arg(long, default_value_t = 1)]
        m: usize,
        /// One of: minimal, exact, regular-cover, disjoint, any
        #[arg(long, default_value = "minimal")]
        predicate: String,
        /// Hunt a conjecture instead of listing: c1.1 or c1.2
        #[arg(long)]
        hunt: Option<String>,
        /// Stop listing after this many systems (0 = unlimited)
        #[arg(long, default_value_t = 0)]
        limit: usize,
        /// Write the report/listing to a file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Built-in demo instances: classic_cover, regular_noncover, example21,
    /// klein_cover, q8_cover, centralizer_cover
    Demo {
        name: String,
        /// Letters for example21
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Group spec for centralizer_cover
        #[arg(long, default_value = "S3")]
        group: String,
        /// Also run a statement checker on the instance
        #[arg(long)]
        verify: Option<String>,
        #[arg(long, default_value_t = 1)]
        m: usize,
    },
}

enum SysInput {
    Z(ZSystem),
    Group(Box<CosetSystem>),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        exec::configure_threads(jobs);
    }
    let mode = match cli.jobs {
        Some(1) => ExecMode::Sequential,
        _ => ExecMode::Parallel,
    };
    match run(cli, mode) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(USAGE_ERROR)
        }
    }
}

fn run(cli: Cli, mode: ExecMode) -> Result<u8> {
    match cli.cmd {
        Cmd::Check {
            z,
            input,
            m,
            assert,
            max_period,
        } => cmd_check(z, input, m, assert, max_period, cli.json),
        Cmd::F { n } => cmd_f(n, cli.json),
        Cmd::Group { spec, lattice, cap } => cmd_group(&spec, lattice, cap, cli.json),
        Cmd::Verify {
            theorem,
            z,
            input,
            m,
            subset,
            h,
            cross_check,
        } => cmd_verify(&theorem, z, input, m, subset, h, cross_check, cli.json),
        Cmd::Search {
            max_period,
            group,
            max_k,
            m,
            predicate,
            hunt,
            limit,
            out,
        } => cmd_search(
            max_period, group, max_k, m, &predicate, hunt, limit, out, mode, cli.json,
        ),
        Cmd::Demo {
            name,
            k,
            group,
            verify,
            m,
        } => cmd_demo(&name, k, &group, verify, m, cli.json),
    }
}

fn load_system(
    z: Option<String>,
    input: Option<PathBuf>,
    max_period: u64,
) -> Result<SysInput> {
    match (z, input) {
        (Some(text), None) => Ok(SysInput::Z(
            ZSystem::parse_with_cap(&text, max_period).context("--z")?,
        )),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(&path)
                .with_context(|| format!("--input {}", path.display()))?;
            let value: serde_json::Value = serde_json::from_str(&text).context("--input")?;
            if value.get("classes").is_some() {
                let zs: ZSystem = serde_json::from_value(value).context("--input")?;
                Ok(SysInput::Z(zs))
            } else if value.get("cosets").is_some() {
                let sys: CosetSystem = serde_json::from_value(value).context("--input")?;
                Ok(SysInput::Group(Box::new(sys)))
            } else {
                bail!("--input: expected a \"classes\" or \"group\"/\"cosets\" object")
            }
        }
        (Some(_), Some(_)) => bail!("pass either --z or --input, not both"),
        (None, None) => bail!("one of --z or --input is required"),
    }
}

fn cmd_check(
    z: Option<String>,
    input: Option<PathBuf>,
    m: usize,
    assert: Option<String>,
    max_period: u64,
    json: bool,
) -> Result<u8> {
    let sys = load_system(z, input, max_period)?;
    let (report, value) = match &sys {
        SysInput::Z(zs) => {
            let report = zs.to_instance()?.report(m);
            let mut value = serde_json::to_value(zs)?;
            value["report"] = serde_json::to_value(&report)?;
            (report, value)
        }
        SysInput::Group(gs) => {
            let report = gs.to_instance()?.report(m);
            let mut value = serde_json::to_value(gs.as_ref())?;
            value["report"] = serde_json::to_value(&report)?;
            (report, value)
        }
    };
    if json {
        println!("{}", serde_json::to_string_pretty(&value)?);
    } else {
        match &sys {
            SysInput::Z(zs) => println!("system: {zs} (period {})", zs.period()),
            SysInput::Group(gs) => println!("system: {gs}"),
        }
        print_report(&report);
    }
    if let Some(props) = assert {
        for prop in props.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let ok = match prop {
                "cover" => report.multiplicity >= 1,
                "m-cover" => report.m_cover,
                "exact" => report.exact_m_cover,
                "minimal" => report.minimal_m_cover,
                "regular" => report.regular == Some(true),
                "regular-cover" => report.regular_cover == Some(true),
                "partition" => report.partition,
                other => bail!("--assert: unknown property {other:?}"),
            };
            if !ok {
                eprintln!("assertion failed: {prop}");
                return Ok(1);
            }
        }
    }
    Ok(0)
}

fn print_report(r: &PropertyReport) {
    println!("k = {}, carrier = {}, multiplicity = {}", r.k, r.carrier, r.multiplicity);
    println!(
        "m = {}: m-cover = {}, exact = {}, minimal = {}",
        r.m, r.m_cover, r.exact_m_cover, r.minimal_m_cover
    );
    let show = |o: Option<bool>| match o {
        Some(b) => b.to_string(),
        None => "skipped (k over cap)".to_owned(),
    };
    println!(
        "regular = {}, regular-cover = {}, partition = {}",
        show(r.regular),
        show(r.regular_cover),
        r.partition
    );
}

fn cmd_f(n: u64, json: bool) -> Result<u8> {
    let fact = mycielski::factorize(n)?;
    let f = mycielski::mycielski_f(n)?;
    let bound = mycielski::conjecture11_bound(n)?;
    if json {
        println!(
            "{}",
            serde_json::json!({
                "n": n,
                "factorization": fact.to_string(),
                "f": f,
                "excess_bound": bound,
            })
        );
    } else {
        println!("{n} = {fact}, f = {f}");
    }
    Ok(0)
}

fn cmd_group(spec: &str, lattice: bool, cap: Option<usize>, json: bool) -> Result<u8> {
    let g = match cap {
        Some(c) => FiniteGroup::parse_spec_with_cap(spec, c)?,
        None => FiniteGroup::parse_spec(spec)?,
    };
    let center = g.center();
    let derived = g.derived_subgroup();
    let subgroup_count = g.all_subgroups().map(|s| s.len()).ok();
    if json {
        let mut value = serde_json::json!({
            "group": g.label(),
            "order": g.order(),
            "abelian": g.is_abelian(),
            "cyclic": g.is_cyclic(),
            "solvable": g.is_solvable(),
            "center_order": center.order(),
            "derived_order": derived.order(),
            "subgroups": subgroup_count,
        });
        if lattice {
            let lat = g.lattice()?;
            value["lattice"] = serde_json::to_value(
                lat.subgroups
                    .iter()
                    .enumerate()
                    .map(|(i, s)| {
                        serde_json::json!({
                            "subgroup": s.elements().to_vec(),
                            "order": s.order(),
                            "normal": lat.normal[i],
                            "subnormal": lat.subnormal[i],
                            "maximal": lat.maximal[i],
                        })
                    })
                    .collect::<Vec<_>>(),
            )?;
        }
        println!("{}", serde_json::to_string_pretty(&value)?);
    } else {
        println!("{}: order {}", g.label(), g.order());
        println!(
            "abelian = {}, cyclic = {}, solvable = {}",
            g.is_abelian(),
            g.is_cyclic(),
            g.is_solvable()
        );
        println!(
            "center order {}, derived subgroup order {}",
            center.order(),
            derived.order()
        );
        match subgroup_count {
            Some(c) => println!("subgroups: {c}"),
            None => println!("subgroups: not enumerated (order over lattice cap)"),
        }
        if lattice {
            let lat = g.lattice()?;
            for (i, s) in lat.subgroups.iter().enumerate() {
                println!(
                    "  order {:>3} normal={} subnormal={} maximal={} {:?}",
                    s.order(),
                    lat.normal[i] as u8,
                    lat.subnormal[i] as u8,
                    lat.maximal[i] as u8,
                    s.elements()
                );
            }
        }
    }
    Ok(0)
}

fn parse_elems(g: &FiniteGroup, text: &str, flag: &str) -> Result<Subgroup> {
    let elems: Vec<usize> = text
        .split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|e| anyhow!("{flag}: {e}")))
        .collect::<Result<_>>()?;
    Ok(g.subgroup_from_elements(&elems).context(flag.to_owned())?)
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    theorem: &str,
    z: Option<String>,
    input: Option<PathBuf>,
    m: usize,
    subset: Option<String>,
    h: Option<String>,
    cross_check: bool,
    json: bool,
) -> Result<u8> {
    let sys = load_system(z, input, DEFAULT_PERIOD_CAP)?;

    if cross_check {
        let SysInput::Z(zs) = &sys else {
            bail!("--cross-check applies to residue-class systems only");
        };
        let rows = verifiers::cross_check_z(zs)?;
        let mut ok = true;
        for (claim, native, transported) in &rows {
            let agree = native == transported;
            ok &= agree;
            println!("{claim}: native {native:?}, transported {transported:?}, agree = {agree}");
        }
        return Ok(if ok { 0 } else { COUNTEREXAMPLE_ERROR });
    }

    let verdicts: Vec<Verdict> = match &sys {
        SysInput::Z(zs) => match theorem {
            "tomkinson" => vec![verifiers::verify_tomkinson_z(zs, m)],
            "1.1" => vec![verifiers::verify_thm11_z(zs, m)],
            "1.2" => vec![verifiers::verify_thm12_z(zs, m)],
            "1.3" => vec![verifiers::verify_thm13_z(zs)?],
            "c1.1" => vec![verifiers::check_conjecture11_z(zs, m)],
            "c1.2" => vec![verifiers::check_conjecture12_z(zs)],
            "1.4" | "1.5" | "2.1" | "2.2" => {
                let (_, gsys) = CosetSystem::from_zsystem(zs)
                    .context("transporting to the cyclic group of the period")?;
                verify_group_side(theorem, &gsys, m, &subset, &h)?
            }
            other => bail!("--theorem: unknown statement {other:?}"),
        },
        SysInput::Group(gs) => match theorem {
            "tomkinson" => vec![verifiers::verify_tomkinson(gs, m)],
            "c1.1" => vec![verifiers::check_conjecture11(gs, m)],
            "c1.2" => vec![verifiers::check_conjecture12(gs)],
            _ => verify_group_side(theorem, gs, m, &subset, &h)?,
        },
    };

    if json {
        println!("{}", serde_json::to_string_pretty(&verdicts)?);
    } else {
        for v in &verdicts {
            let mut line = format!(
                "{}: {:?} (hypotheses {}, conclusion {})",
                v.claim, v.outcome, v.hypotheses_hold, v.conclusion_holds
            );
            if !v.notes.is_empty() {
                line.push_str(&format!(" — {}", v.notes.join("; ")));
            }
            println!("{line}");
            if let Some(w) = &v.witness {
                println!("  witness: {}", serde_json::to_string(w)?);
            }
        }
    }
    let proved = !theorem.starts_with('c');
    let bad = proved && verdicts.iter().any(|v| v.outcome == Outcome::Counterexample);
    Ok(if bad { COUNTEREXAMPLE_ERROR } else { 0 })
}

fn verify_group_side(
    theorem: &str,
    sys: &CosetSystem,
    m: usize,
    subset: &Option<String>,
    h: &Option<String>,
) -> Result<Vec<Verdict>> {
    let g = sys.group();
    Ok(match theorem {
        "1.1" => vec![verifiers::verify_thm11(sys, m)?],
        "1.2" => vec![verifiers::verify_thm12(sys, m)],
        "1.3" => vec![verifiers::verify_thm13(sys)?],
        "1.4" => vec![verifiers::verify_thm14(sys, m)?],
        "1.5" => {
            let base = match h {
                Some(text) => parse_elems(g, text, "--h")?,
                None => g.trivial_subgroup(),
            };
            let subs: Vec<Subgroup> =
                sys.items().iter().map(|c| c.subgroup().clone()).collect();
            let reps: Vec<usize> = sys.items().iter().map(|c| c.rep()).collect();
            vec![verifiers::verify_thm15(g, &base, &subs, &reps)?]
        }
        "2.1" => match subset {
            Some(text) => {
                let ids: Vec<usize> = text
                    .split(',')
                    .map(|t| t.trim().parse::<usize>().map_err(|e| anyhow!("--subset: {e}")))
                    .collect::<Result<_>>()?;
                vec![verifiers::verify_thm21(sys, IndexSet::from_indices(&ids))?]
            }
            None => {
                if sys.k() > 12 {
                    bail!("--subset is required for k > 12 (2^k subsets otherwise)");
                }
                let full = IndexSet::full(sys.k()).bits();
                let is_cover = sys.to_instance()?.multiplicity() >= 1;
                let mut out = Vec::new();
                for bits in 1..=full {
                    if bits == full && !is_cover {
                        continue;
                    }
                    out.push(verifiers::verify_thm21(sys, IndexSet::from_bits(bits))?);
                }
                out
            }
        },
        "2.2" => match h {
            Some(text) => {
                let sub = parse_elems(g, text, "--h")?;
                vec![verifiers::verify_thm22(sys, &sub)?]
            }
            None => {
                let lat = g.lattice()?;
                let mut out = Vec::new();
                for (i, sub) in lat.subgroups.iter().enumerate() {
                    if lat.maximal[i] || lat.maximal_normal[i] {
                        out.push(verifiers::verify_thm22(sys, sub)?);
                    }
                }
                out
            }
        },
        other => bail!("--theorem: statement {other:?} is not defined for this input"),
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_search(
    max_period: Option<u64>,
    group: Option<String>,
    max_k: usize,
    m: usize,
    predicate: &str,
    hunt: Option<String>,
    limit: usize,
    out: Option<PathBuf>,
    mode: ExecMode,
    json: bool,
) -> Result<u8> {
    let mut sink: Box<dyn std::io::Write> = match &out {
        Some(path) => Box::new(std::fs::File::create(path)?),
        None => Box::new(std::io::stdout().lock()),
    };
    let pred = match predicate {
        "minimal" => Predicate::MinimalMCover(m),
        "exact" => Predicate::ExactMCover(m),
        "regular-cover" => Predicate::RegularCover,
        "disjoint" => Predicate::PairwiseDisjoint,
        "any" => Predicate::Any,
        other => bail!("--predicate: unknown predicate {other:?}"),
    };
    let target = match hunt.as_deref() {
        Some("c1.1") => Some(HuntTarget::Conjecture11 { max_m: m }),
        Some("c1.2") => Some(HuntTarget::Conjecture12),
        Some(other) => bail!("--hunt: unknown conjecture {other:?}"),
        None => None,
    };

    match (max_period, group) {
        (Some(p), None) => {
            let bounds = ZBounds::new(p, max_k);
            if let Some(target) = target {
                let report = search::hunt_zsystems(&bounds, target, mode)?;
                if json {
                    writeln!(sink, "{}", serde_json::to_string_pretty(&report)?)?;
                } else {
                    writeln!(sink, "{report}")?;
                }
            } else {
                let systems = search::enumerate_zsystems(&bounds, pred, mode)?;
                let shown = if limit == 0 { systems.len() } else { limit };
                for zs in systems.iter().take(shown) {
                    if json {
                        writeln!(sink, "{}", serde_json::to_string(zs)?)?;
                    } else {
                        writeln!(sink, "{zs}")?;
                    }
                }
                writeln!(sink, "# {} systems", systems.len())?;
            }
        }
        (None, Some(spec)) => {
            let g = Arc::new(FiniteGroup::parse_spec(&spec)?);
            let bounds = GroupBounds::new(max_k);
            if let Some(target) = target {
                let report = search::hunt_cosetsystems(&g, &bounds, target, mode)?;
                if json {
                    writeln!(sink, "{}", serde_json::to_string_pretty(&report)?)?;
                } else {
                    writeln!(sink, "{report}")?;
                }
            } else {
                let systems = search::enumerate_cosetsystems(&g, &bounds, pred, mode)?;
                let shown = if limit == 0 { systems.len() } else { limit };
                for sys in systems.iter().take(shown) {
                    if json {
                        writeln!(sink, "{}", serde_json::to_string(sys)?)?;
                    } else {
                        writeln!(sink, "{sys}")?;
                    }
                }
                writeln!(sink, "# {} systems", systems.len())?;
            }
        }
        _ => bail!("pass exactly one of --max-period (residue classes) or --group (cosets)"),
    }
    Ok(0)
}

fn cmd_demo(
    name: &str,
    k: usize,
    group: &str,
    verify: Option<String>,
    m: usize,
    json: bool,
) -> Result<u8> {
    enum Demo {
        Z(ZSystem),
        G(CosetSystem),
    }
    let demo = match name {
        "classic_cover" => Demo::Z(corpus::classic_cover()),
        "regular_noncover" => Demo::Z(corpus::regular_noncover()),
        "example21" => Demo::G(corpus::example21(k)?),
        "klein_cover" => Demo::G(corpus::klein_cover()),
        "q8_cover" => Demo::G(corpus::q8_cover()),
        "centralizer_cover" => Demo::G(corpus::centralizer_cover_of(group)?),
        other => bail!(
            "unknown demo {other:?}; available: {}",
            corpus::DEMO_NAMES.join(", ")
        ),
    };
    match &demo {
        Demo::Z(zs) => {
            if !json {
                println!("system: {zs} (period {})", zs.period());
            }
            let report = zs.to_instance()?.report(m);
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                print_report(&report);
            }
            if let Some(theorem) = verify {
                return cmd_verify(
                    &theorem,
                    Some(zs.to_string()),
                    None,
                    m,
                    None,
                    None,
                    false,
                    json,
                );
            }
        }
        Demo::G(sys) => {
            if !json {
                println!("system: {sys}");
            }
            let report = sys.to_instance()?.report(m);
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                print_report(&report);
            }
            if let Some(theorem) = verify {
                let verdicts = match theorem.as_str() {
                    "tomkinson" => vec![verifiers::verify_tomkinson(sys, m)],
                    "c1.1" => vec![verifiers::check_conjecture11(sys, m)],
                    "c1.2" => vec![verifiers::check_conjecture12(sys)],
                    t => verify_group_side(t, sys, m, &None, &None)?,
                };
                for v in &verdicts {
                    println!(
                        "{}: {:?} (hypotheses {}, conclusion {})",
                        v.claim, v.outcome, v.hypotheses_hold, v.conclusion_holds
                    );
                }
                let proved = !theorem.starts_with('c');
                if proved && verdicts.iter().any(|v| v.outcome == Outcome::Counterexample) {
                    return Ok(COUNTEREXAMPLE_ERROR);
                }
            }
        }
    }
    Ok(0)
}
