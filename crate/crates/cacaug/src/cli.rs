//! Command-line front end. Exit codes: 0 success, 1 infeasible input or
//! failed validation/verification, 2 usage error.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::cactus::CacapInstance;
use crate::io::ParsedInstance;
use crate::irr::SolveMethod;
use crate::report::BenchRow;
use crate::{bounds, exact, gen, io, irr, marking, par, reduction, report};

const USAGE: &str = "usage: cacaug <command> [args]

commands:
  validate <file>                      check a cactus instance file
  cuts <file>                          list every 2-edge-cut
  reduce <file> [--out FILE]           write the Steiner instance
  solve <file> --method exact|irr|greedy
        [--k K] [--seed S] [--reps R] [--prune]
  marking analyze <treefile> [--samples N] [--seed S] [--p P]
  bounds verify [--grid-step G] [--imax I] [--samples N] [--out FILE]
  gen --cycles C --max-cycle-len M --links L --seed S [--out FILE]
  bench --dir DIR --out CSV [--k K] [--reps R] [--seed S] [--no-times]
";

pub fn run(args: Vec<String>) -> i32 {
    match dispatch(&args) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("{msg}");
            eprintln!("{USAGE}");
            2
        }
        Err(CliError::Failure(msg)) => {
            eprintln!("{msg}");
            1
        }
    }
}

enum CliError {
    Usage(String),
    Failure(String),
}

fn fail(msg: impl Into<String>) -> CliError {
    CliError::Failure(msg.into())
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

struct Flags {
    positional: Vec<String>,
    named: BTreeMap<String, String>,
    switches: Vec<String>,
}

fn parse_flags(args: &[String], switch_names: &[&str]) -> Result<Flags, CliError> {
    let mut flags = Flags {
        positional: Vec::new(),
        named: BTreeMap::new(),
        switches: Vec::new(),
    };
    let mut i = 0;
    while i < args.len() {
        let a = &args[i];
        if let Some(name) = a.strip_prefix("--") {
            if switch_names.contains(&name) {
                flags.switches.push(name.to_string());
                i += 1;
            } else {
                let value = args
                    .get(i + 1)
                    .ok_or_else(|| usage(format!("--{name} needs a value")))?;
                flags.named.insert(name.to_string(), value.clone());
                i += 2;
            }
        } else {
            flags.positional.push(a.clone());
            i += 1;
        }
    }
    Ok(flags)
}

impl Flags {
    fn get_parse<T: std::str::FromStr>(&self, name: &str, default: T) -> Result<T, CliError> {
        match self.named.get(name) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| usage(format!("--{name}: cannot parse `{v}`"))),
        }
    }

    fn has(&self, name: &str) -> bool {
        self.switches.iter().any(|s| s == name)
    }
}

fn load_instance(path: &str) -> Result<ParsedInstance, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| fail(format!("cannot read {path}: {e}")))?;
    let parsed = io::parse_instance(&text).map_err(|e| fail(format!("{path}: {e}")))?;
    for w in &parsed.warnings {
        eprintln!("warning: {w}");
    }
    Ok(parsed)
}

fn emit(out: Option<&String>, content: &str) -> Result<(), CliError> {
    match out {
        None => {
            print!("{content}");
            Ok(())
        }
        Some(path) => std::fs::write(path, content)
            .map_err(|e| fail(format!("cannot write {path}: {e}"))),
    }
}

fn dispatch(args: &[String]) -> Result<i32, CliError> {
    let Some(command) = args.first() else {
        return Err(usage("missing command"));
    };
    match command.as_str() {
        "validate" => cmd_validate(&args[1..]),
        "cuts" => cmd_cuts(&args[1..]),
        "reduce" => cmd_reduce(&args[1..]),
        "solve" => cmd_solve(&args[1..]),
        "marking" => {
            if args.get(1).map(String::as_str) != Some("analyze") {
                return Err(usage("expected `marking analyze <treefile>`"));
            }
            cmd_marking_analyze(&args[2..])
        }
        "bounds" => {
            if args.get(1).map(String::as_str) != Some("verify") {
                return Err(usage("expected `bounds verify`"));
            }
            cmd_bounds_verify(&args[2..])
        }
        "gen" => cmd_gen(&args[1..]),
        "bench" => cmd_bench(&args[1..]),
        other => Err(usage(format!("unknown command `{other}`"))),
    }
}

fn cmd_validate(args: &[String]) -> Result<i32, CliError> {
    let flags = parse_flags(args, &[])?;
    let [path] = flags.positional.as_slice() else {
        return Err(usage("validate takes exactly one file"));
    };
    let parsed = load_instance(path)?;
    let inst = &parsed.instance;
    let feasible = inst.is_feasible();
    println!(
        "valid cactus: nodes={} edges={} cycles={} links={} cuts={} feasible={}",
        inst.graph.node_count,
        inst.graph.edges.len(),
        inst.graph.cycles.len(),
        inst.links.len(),
        inst.graph.cuts().len(),
        feasible
    );
    if !feasible {
        eprintln!("links do not cover every 2-edge-cut");
        return Ok(1);
    }
    Ok(0)
}

fn cmd_cuts(args: &[String]) -> Result<i32, CliError> {
    let flags = parse_flags(args, &[])?;
    let [path] = flags.positional.as_slice() else {
        return Err(usage("cuts takes exactly one file"));
    };
    let parsed = load_instance(path)?;
    let cuts = parsed.instance.graph.cuts();
    println!("cuts {}", cuts.len());
    for cut in cuts {
        let left: Vec<String> = cut.left.iter().map(|v| v.to_string()).collect();
        println!(
            "cut {} {} cycle {} left {}",
            cut.edge_a,
            cut.edge_b,
            cut.cycle,
            left.join(" ")
        );
    }
    Ok(0)
}

fn cmd_reduce(args: &[String]) -> Result<i32, CliError> {
    let flags = parse_flags(args, &[])?;
    let [path] = flags.positional.as_slice() else {
        return Err(usage("reduce takes exactly one file"));
    };
    let parsed = load_instance(path)?;
    let st = reduction::build_steiner_instance(&parsed.instance)
        .map_err(|e| fail(format!("{e}")))?;
    emit(flags.named.get("out"), &io::write_steiner_instance(&st))?;
    Ok(0)
}

fn cmd_solve(args: &[String]) -> Result<i32, CliError> {
    let flags = parse_flags(args, &["prune"])?;
    let [path] = flags.positional.as_slice() else {
        return Err(usage("solve takes exactly one file"));
    };
    let method = flags
        .named
        .get("method")
        .ok_or_else(|| usage("solve requires --method exact|irr|greedy"))?;
    let k: usize = flags.get_parse("k", 3)?;
    let seed: u64 = flags.get_parse("seed", 0)?;
    let reps: usize = flags.get_parse("reps", 1)?;
    let parsed = load_instance(path)?;
    let inst = &parsed.instance;
    match method.as_str() {
        "exact" => {
            let links = exact::brute_force_cacap(inst).map_err(|e| fail(format!("{e}")))?;
            print_solution(inst, SolveMethod::Exact, &links, Some(links.len()), None);
            Ok(0)
        }
        "greedy" => {
            let links = irr::greedy_cover(inst).map_err(|e| fail(format!("{e}")))?;
            let optimum = exact::brute_force_cacap(inst).ok().map(|o| o.len());
            print_solution(inst, SolveMethod::Greedy, &links, optimum, None);
            Ok(0)
        }
        "irr" => {
            let outcome = irr::solve_cacap(inst, k, seed, reps, flags.has("prune"))
                .map_err(|e| fail(format!("{e}")))?;
            if outcome.report.fell_back_to_greedy {
                eprintln!("warning: instance beyond LP caps; greedy cover used instead");
            }
            print_solution(
                inst,
                outcome.report.method,
                &outcome.links,
                outcome.report.optimum,
                Some(&outcome.report),
            );
            Ok(0)
        }
        other => Err(usage(format!("unknown method `{other}`"))),
    }
}

fn print_solution(
    inst: &CacapInstance,
    method: SolveMethod,
    links: &[usize],
    optimum: Option<usize>,
    report: Option<&irr::SolveReport>,
) {
    println!("method {method}");
    println!("cost {}", links.len());
    let ids: Vec<String> = links.iter().map(|l| l.to_string()).collect();
    println!("links {}", ids.join(" "));
    if let Some(o) = optimum {
        println!("optimum {o}");
    }
    println!(
        "terminals {}",
        inst.graph.degree_two_nodes().len()
    );
    println!("cuts {}", inst.graph.cuts().len());
    if let Some(rep) = report {
        println!("k {}", rep.k);
        println!("seed {}", rep.seed);
        println!("reps {}", rep.per_run_costs.len());
        if !rep.per_run_costs.is_empty() {
            let runs: Vec<String> = rep.per_run_costs.iter().map(|c| c.to_string()).collect();
            println!("runs {}", runs.join(" "));
        }
    }
}

fn cmd_marking_analyze(args: &[String]) -> Result<i32, CliError> {
    let flags = parse_flags(args, &[])?;
    let [path] = flags.positional.as_slice() else {
        return Err(usage("marking analyze takes exactly one tree file"));
    };
    let samples: usize = flags.get_parse("samples", 1000)?;
    let seed: u64 = flags.get_parse("seed", 0)?;
    let (p_star, rho) = bounds::optimal_present_and_constant();
    let p: f64 = flags.get_parse("p", p_star)?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| fail(format!("cannot read {path}: {e}")))?;
    let tree = io::parse_tree(&text).map_err(|e| fail(format!("{path}: {e}")))?;
    let ws = marking::is_well_structured(&tree);
    println!(
        "tree steiner={} terminals={} root={} well_structured={}",
        tree.steiner_count(),
        tree.terminal_count(),
        tree.root(),
        ws
    );
    let class = marking::classify(&tree);
    let enumerated = marking::expected_costs_by_enumeration(&tree).ok();
    let mut total = 0.0;
    for v in tree.steiner_nodes() {
        let cost = marking::expected_cost_exact(&tree, v).map_err(|e| fail(format!("{e}")))?;
        total += cost.value;
        let cap = bounds::h_hat_f64(tree.d(v) as u64);
        let enum_txt = enumerated
            .as_ref()
            .map(|m| format!(" enum={}", m[&v].value))
            .unwrap_or_default();
        println!(
            "node {v}: d={} s={} t={} good={} good_father={} leaf_steiner={} cost={}{} cap={}",
            tree.d(v),
            tree.s(v),
            tree.t(v),
            class.good[v],
            class.good_father[v],
            class.leaf_steiner[v],
            cost.value,
            enum_txt,
            cap
        );
    }
    println!(
        "average_cost {}",
        total / tree.steiner_count() as f64
    );
    if ws {
        let bound = marking::tree_bound(&tree, p).map_err(|e| fail(format!("{e}")))?;
        println!(
            "tree_bound p={p} case_bound={} max_group_average={} true_average={} rho={} within_rho={}",
            bound.case_bound,
            bound.max_group_average,
            bound.true_average,
            rho,
            bound.case_bound <= rho + 1e-12
        );
        let grouping = marking::build_groups(&tree).map_err(|e| fail(format!("{e}")))?;
        for (v, members) in &grouping.groups {
            let ids: Vec<String> = members.iter().map(|m| m.to_string()).collect();
            println!("group {v}: {}", ids.join(" "));
        }
        println!("leftover {}", grouping.leftover);
    }
    if samples > 0 {
        let mc = marking::monte_carlo_costs(&tree, samples, seed)
            .map_err(|e| fail(format!("{e}")))?;
        for (v, (mean, stderr)) in mc {
            println!("monte_carlo node {v}: mean={mean} stderr={stderr} samples={samples} seed={seed}");
        }
    }
    Ok(0)
}

fn cmd_bounds_verify(args: &[String]) -> Result<i32, CliError> {
    let flags = parse_flags(args, &[])?;
    if !flags.positional.is_empty() {
        return Err(usage("bounds verify takes no positional arguments"));
    }
    let grid_step: f64 = flags.get_parse("grid-step", 1e-3)?;
    let imax: u64 = flags.get_parse("imax", 10_000)?;
    let samples: usize = flags.get_parse("samples", 10_000)?;
    let seed: u64 = flags.get_parse("seed", 0)?;
    let report = bounds::run_full_verification(grid_step, imax, samples, seed);
    let json = report::verification_json(&report);
    emit(flags.named.get("out"), &json)?;
    for check in &report.checks {
        eprintln!(
            "{} {} (residual {:.3e})",
            if check.pass { "pass" } else { "FAIL" },
            check.name,
            check.residual
        );
    }
    Ok(if report.all_pass() { 0 } else { 1 })
}

fn cmd_gen(args: &[String]) -> Result<i32, CliError> {
    let flags = parse_flags(args, &[])?;
    if !flags.positional.is_empty() {
        return Err(usage("gen takes no positional arguments"));
    }
    let cycles: usize = flags.get_parse("cycles", 3)?;
    let max_cycle_len: usize = flags.get_parse("max-cycle-len", 5)?;
    let links: usize = flags.get_parse("links", 4)?;
    let seed: u64 = flags.get_parse("seed", 0)?;
    let instance = gen::gen_instance(cycles, max_cycle_len, links, seed);
    emit(flags.named.get("out"), &io::write_instance(&instance))?;
    Ok(0)
}

fn cmd_bench(args: &[String]) -> Result<i32, CliError> {
    let flags = parse_flags(args, &["no-times"])?;
    let dir = flags
        .named
        .get("dir")
        .ok_or_else(|| usage("bench requires --dir"))?;
    let out = flags
        .named
        .get("out")
        .cloned();
    let k: usize = flags.get_parse("k", 3)?;
    let reps: usize = flags.get_parse("reps", 5)?;
    let seed: u64 = flags.get_parse("seed", 0)?;
    let no_times = flags.has("no-times");
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| fail(format!("cannot read {dir}: {e}")))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().map(|x| x == "cacap").unwrap_or(false))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(fail(format!("no .cacap files under {dir}")));
    }
    let rows: Vec<Result<Vec<BenchRow>, String>> = par::par_map(&files, |_, path| {
        bench_one(path, k, reps, seed, no_times).map_err(|e| match e {
            CliError::Usage(m) | CliError::Failure(m) => m,
        })
    });
    let mut csv = String::from(report::BENCH_HEADER);
    csv.push('\n');
    for row_set in rows {
        let row_set = row_set.map_err(fail)?;
        for row in row_set {
            csv.push_str(&row.to_csv());
            csv.push('\n');
        }
    }
    emit(out.as_ref(), &csv)?;
    Ok(0)
}

fn bench_one(
    path: &Path,
    k: usize,
    reps: usize,
    seed: u64,
    no_times: bool,
) -> Result<Vec<BenchRow>, CliError> {
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().to_string())
        .unwrap_or_else(|| path.display().to_string());
    let text = std::fs::read_to_string(path)
        .map_err(|e| fail(format!("cannot read {}: {e}", path.display())))?;
    let parsed = io::parse_instance(&text).map_err(|e| fail(format!("{name}: {e}")))?;
    let inst = parsed.instance;
    let mut rows = Vec::new();
    let clock = std::time::Instant::now();
    let greedy = irr::greedy_cover(&inst).map_err(|e| fail(format!("{name}: {e}")))?;
    let greedy_ms = clock.elapsed().as_millis();
    let clock = std::time::Instant::now();
    let outcome =
        irr::solve_cacap(&inst, k, seed, reps, true).map_err(|e| fail(format!("{name}: {e}")))?;
    let irr_ms = clock.elapsed().as_millis();
    let base = BenchRow {
        instance: name,
        node_count: inst.graph.node_count,
        terminal_count: inst.graph.degree_two_nodes().len(),
        link_count: inst.links.len(),
        cut_count: inst.graph.cuts().len(),
        method: String::new(),
        cost: 0,
        optimum: outcome.report.optimum,
        wall_ms: None,
        seed,
    };
    rows.push(BenchRow {
        method: "greedy".into(),
        cost: greedy.len(),
        wall_ms: (!no_times).then_some(greedy_ms),
        ..base.clone()
    });
    rows.push(BenchRow {
        method: outcome.report.method.to_string(),
        cost: outcome.links.len(),
        wall_ms: (!no_times).then_some(irr_ms),
        ..base
    });
    Ok(rows)
}
