//! The ten acceptance criteria. Each runs to completion, prints one PASS or
//! FAIL line, and the test fails if any criterion failed.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use mbsd::automata::{build_dfa, minimize};
use mbsd::batch;
use mbsd::domains::{gen_pacman, PacmanConfig};
use mbsd::games::{solve, Player};
use mbsd::ltlf::{eval_word, Letter, Proposition};
use mbsd::oracle::{minmax_decide, oracle_mbsd};
use mbsd::qbf::{cnf_to_cnf1, eval_qbf, example_f, qbf1_to_mbsd};
use mbsd::reductions::{
    build_target_game, build_tree_game, simulate, solve_mbsd, verify_mbsd, Adversary, Agent,
    MappingSpec, MbsdInstance, SolveMode,
};

type Check = Result<String, String>;

const BUDGET: usize = 5_000_000;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// First failure among per-item results, or the number of items checked.
fn all_ok(results: Vec<Result<(), String>>) -> Result<usize, String> {
    let n = results.len();
    results.into_iter().collect::<Result<Vec<()>, String>>()?;
    Ok(n)
}

fn target_bound(p: &MbsdInstance) -> usize {
    let k = p.mapping().conjuncts().len() as u32;
    2 * p.domain_a().num_states() * p.domain_b().num_states() * 4usize.pow(k)
}

fn dfa_soundness() -> Check {
    let seeds: Vec<u64> = (0..500).collect();
    let results = batch::map(&seeds, |&seed| {
        let mut r = common::rng(seed);
        let n = 1 + (seed % 3) as usize;
        let props = common::props("p", n);
        let f = common::formula(&mut r, &props, 4, true);
        let dfa = build_dfa(&f, &props, 12).map_err(|e| format!("seed {seed}: {e}"))?;
        let min = minimize(&dfa);
        for w in common::all_words(&props, 5) {
            let idx: Vec<usize> = w.iter().map(|l| dfa.letter_index(l).unwrap()).collect();
            let want = eval_word(&f, &w).unwrap();
            ensure(
                dfa.accepts_indices(&idx) == want && min.accepts_indices(&idx) == want,
                || format!("seed {seed}: {f} disagrees on {w:?}"),
            )?;
        }
        Ok(())
    });
    Ok(format!("{} formulas, 0 mismatches", all_ok(results)?))
}

fn game_determinacy() -> Check {
    let seeds: Vec<u64> = (0..200).collect();
    let results = batch::map(&seeds, |&seed| {
        let a = common::arena(seed, 30);
        for w in common::objectives(seed, a.num_p1()) {
            let attr = solve(&a, &w).unwrap().strategy.is_some();
            let mm = minmax_decide(&a, &w, 2 * a.num_nodes()).unwrap();
            ensure(attr == (mm.winner == Player::P2), || {
                format!("seed {seed} {:?}", w.kind)
            })?;
        }
        Ok(())
    });
    Ok(format!("{} arenas x 2 objectives agree", all_ok(results)?))
}

fn pointwise_vs_general() -> Check {
    let seeds: Vec<u64> = (0..100).collect();
    let results = batch::map(&seeds, |&seed| {
        let p = common::pointwise(seed, 5, 2);
        let pw = solve_mbsd(&p, SolveMode::PointWise).map_err(|e| e.to_string())?;
        let gen = solve_mbsd(&p, SolveMode::General).map_err(|e| e.to_string())?;
        ensure(pw.realizable == gen.realizable, || {
            format!("seed {seed}: decisions differ")
        })?;
        for r in [&pw, &gen] {
            if let Some(st) = &r.strategy {
                ensure(verify_mbsd(&p, st, BUDGET).unwrap(), || {
                    format!("seed {seed}: {} strategy fails verification", r.stats.path)
                })?;
            }
        }
        Ok(())
    });
    Ok(format!(
        "{} instances agree, strategies verified",
        all_ok(results)?
    ))
}

fn target_vs_general_vs_oracle(sizes: &mut Vec<(usize, usize)>) -> Check {
    let seeds: Vec<u64> = (0..100).collect();
    let results = batch::map(&seeds, |&seed| {
        let p = common::target(seed, 4, 2, false);
        let g = build_target_game(&p).map_err(|e| e.to_string())?;
        let tg = solve_mbsd(&p, SolveMode::Target).map_err(|e| e.to_string())?;
        let gen = solve_mbsd(&p, SolveMode::General).map_err(|e| e.to_string())?;
        let pairs = p.domain_a().num_states() * p.domain_b().num_states();
        let k = p.mapping().conjuncts().len();
        let oracle = oracle_mbsd(&p, Some(2 * pairs * 2 * k)).map_err(|e| e.to_string())?;
        ensure(
            tg.realizable == gen.realizable && gen.realizable == oracle,
            || {
                format!(
                    "seed {seed}: target {} general {} oracle {oracle}",
                    tg.realizable, gen.realizable
                )
            },
        )?;
        Ok::<_, String>((g.arena.num_nodes(), target_bound(&p)))
    });
    let mut n = 0;
    for r in results {
        sizes.push(r?);
        n += 1;
    }
    Ok(format!("{n} instances agree"))
}

fn tree_fast_path(sizes: &mut Vec<(usize, usize)>) -> Check {
    let seeds: Vec<u64> = (0..100).collect();
    let results = batch::map(&seeds, |&seed| {
        let p = common::target(seed, 6, 3, true);
        let fast = solve_mbsd(&p, SolveMode::Tree).map_err(|e| e.to_string())?;
        let bits = solve_mbsd(&p, SolveMode::Target).map_err(|e| e.to_string())?;
        ensure(fast.realizable == bits.realizable, || {
            format!("seed {seed}: tree and memory-bit paths differ")
        })?;
        Ok::<_, String>((bits.stats.arena_nodes, target_bound(&p)))
    });
    let mut n = 0;
    for r in results {
        sizes.push(r?);
        n += 1;
    }
    let wide: Vec<u64> = (0..10).collect();
    let results = batch::map(&wide, |&seed| {
        let p = common::target_with_k(seed + 500, 6, 8, true);
        let pairs = p.domain_a().num_states() * p.domain_b().num_states();
        let tree = build_tree_game(&p).map_err(|e| e.to_string())?;
        let bits = build_target_game(&p).map_err(|e| e.to_string())?;
        ensure(tree.arena.num_nodes() <= 2 * pairs, || {
            format!(
                "seed {seed}: tree arena {} > 2|S||T| = {}",
                tree.arena.num_nodes(),
                2 * pairs
            )
        })?;
        Ok::<_, String>((
            tree.arena.num_nodes(),
            bits.arena.num_nodes(),
            target_bound(&p),
        ))
    });
    let mut max_tree = 0;
    let mut max_bits = 0;
    for r in results {
        let (t, b, bound) = r?;
        sizes.push((b, bound));
        max_tree = max_tree.max(t);
        max_bits = max_bits.max(b);
    }
    Ok(format!(
        "{n} instances agree; k = 8: tree arenas <= {max_tree} nodes, memory-bit arenas <= {max_bits} nodes"
    ))
}

fn arena_bounds(sizes: &[(usize, usize)]) -> Check {
    for &(nodes, bound) in sizes {
        ensure(nodes <= bound, || {
            format!("{nodes} reachable nodes exceed {bound}")
        })?;
    }
    ensure(!sizes.is_empty(), || "no target arenas were built".into())?;
    Ok(format!("{} target arenas within 2|S||T|4^k", sizes.len()))
}

fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn instances_dir() -> PathBuf {
    manifest_dir().join("../../instances")
}

fn mbsd_cli(args: &[&str]) -> (Option<i32>, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_mbsd"))
        .args(args)
        .output()
        .unwrap();
    (out.status.code(), out.stdout)
}

fn qbf_end_to_end() -> Check {
    let seeds: Vec<u64> = (0..200).collect();
    let results = batch::map(&seeds, |&seed| {
        let q = common::qbf_cnf1(seed, 3, 4);
        let truth = eval_qbf(q.inner()).unwrap();
        let real = solve_mbsd(&qbf1_to_mbsd(&q), SolveMode::Auto)
            .map_err(|e| e.to_string())?
            .realizable;
        ensure(truth == real, || {
            format!("seed {seed}: QBF {truth}, realizable {real}")
        })
    });
    let n = all_ok(results)?;
    ensure(!eval_qbf(example_f().inner()).unwrap(), || {
        "example F evaluates to true".into()
    })?;
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("f.json");
    let input = instances_dir().join("qbf_example_f.qdimacs");
    let (code, _) = mbsd_cli(&["gen", "qbf", "--input", s(&input), "--out", s(&out)]);
    ensure(code == Some(0), || format!("gen qbf exited {code:?}"))?;
    let (code, _) = mbsd_cli(&["solve", "--instance", s(&out)]);
    ensure(code == Some(1), || {
        format!("solve on example F exited {code:?}")
    })?;
    Ok(format!(
        "{n} instances agree; example F is false and solve exits 1"
    ))
}

fn cnf1_truth() -> Check {
    let seeds: Vec<u64> = (0..200).collect();
    let results = batch::map(&seeds, |&seed| {
        let q = common::qbf(seed, 6, 5);
        let (a, b) = (
            eval_qbf(&q).unwrap(),
            eval_qbf(cnf_to_cnf1(&q).inner()).unwrap(),
        );
        ensure(a == b, || format!("seed {seed}: {q}"))
    });
    Ok(format!("{} formulas preserved", all_ok(results)?))
}

fn cell_props(prefix: &str, n: usize) -> Vec<Proposition> {
    (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .map(|(x, y)| Proposition::new(&format!("{prefix}_{x}_{y}")).unwrap())
        .collect()
}

fn collides(letter: &Letter, ghost: &[Proposition], pac: &[Proposition]) -> bool {
    ghost
        .iter()
        .zip(pac)
        .any(|(g, p)| letter.contains(g) && letter.contains(p))
}

fn pacman() -> Check {
    let start = Instant::now();
    let inst = gen_pacman(&PacmanConfig::new(3, 1)).map_err(|e| e.to_string())?;
    let p = MbsdInstance::new(
        inst.ghosts,
        inst.pacman,
        MappingSpec::PointWise(inst.conjuncts),
        Agent::A,
    )
    .map_err(|e| e.to_string())?;
    let r = solve_mbsd(&p, SolveMode::Auto).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(30), || {
        format!("solver took {elapsed:?}")
    })?;
    let gen = solve_mbsd(&p, SolveMode::General).map_err(|e| e.to_string())?;
    ensure(gen.realizable == r.realizable, || {
        "general mode disagrees".into()
    })?;
    let Some(st) = r.strategy else {
        return Ok(format!(
            "unrealizable (general mode agrees), solved in {elapsed:?}"
        ));
    };
    ensure(verify_mbsd(&p, &st, BUDGET).unwrap(), || {
        "strategy fails verification".into()
    })?;
    let (ghost, pac) = (cell_props("bk", 3), cell_props("p", 3));
    let seeds: Vec<u64> = (0..1000).collect();
    let results = batch::map(&seeds, |&seed| {
        let sim = simulate(&p, &st, Adversary::Seeded(seed), 30).map_err(|e| e.to_string())?;
        ensure(sim.satisfied, || {
            format!("seed {seed}: play violates the mapping")
        })?;
        ensure(
            !sim.word(&p).iter().any(|l| collides(l, &ghost, &pac)),
            || format!("seed {seed}: Pac-Man meets the ghost"),
        )
    });
    let n = all_ok(results)?;
    Ok(format!(
        "realizable, {} arena nodes, solved in {elapsed:?}, {n} simulations collision-free",
        r.stats.arena_nodes
    ))
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn determinism() -> Check {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let inst = instances_dir();
    let script = d.join("script.json");
    std::fs::write(&script, r#"["2.1", "2.2", "2.1", "1.1"]"#).unwrap();
    let runs: Vec<(Vec<String>, Vec<PathBuf>)> = vec![
        (
            vec![
                "gen",
                "random",
                "--states",
                "12",
                "--props",
                "3",
                "--tree",
                "--seed",
                "9",
                "--out",
                "{d}/r.json",
            ],
            vec![d.join("r.json")],
        ),
        (
            vec![
                "gen",
                "pacman",
                "--n",
                "3",
                "--ghosts",
                "1",
                "--out-prefix",
                "{d}/pac",
            ],
            vec![d.join("pac.json"), d.join("pac_pacman.json")],
        ),
        (
            vec![
                "gen",
                "qbf",
                "--input",
                "{i}/qbf_example_f.qdimacs",
                "--to-cnf1",
                "--out",
                "{d}/q.json",
            ],
            vec![d.join("q.json")],
        ),
        (
            vec![
                "solve",
                "--instance",
                "{i}/pacman3.json",
                "--strategy-out",
                "{d}/st.json",
            ],
            vec![d.join("st.json")],
        ),
        (
            vec![
                "solve",
                "--instance",
                "{i}/qbf_example_f.json",
                "--mode",
                "general",
            ],
            vec![],
        ),
        (
            vec![
                "verify",
                "--instance",
                "{i}/pacman3.json",
                "--strategy",
                "{d}/st.json",
            ],
            vec![],
        ),
        (
            vec![
                "simulate",
                "--instance",
                "{i}/pacman3.json",
                "--strategy",
                "{d}/st.json",
                "--seed",
                "5",
                "--steps",
                "25",
            ],
            vec![],
        ),
        (
            vec![
                "simulate",
                "--instance",
                "{i}/pacman3.json",
                "--strategy",
                "{d}/st.json",
                "--script",
                "{d}/script.json",
            ],
            vec![],
        ),
        (
            vec![
                "ltlf2dfa",
                "--formula",
                "G (p -> X q) & F r",
                "--props",
                "p,q,r",
                "--minimize",
                "--dot",
                "{d}/a.dot",
            ],
            vec![d.join("a.dot")],
        ),
        (
            vec!["oracle", "--instance", "{i}/qbf_example_f.json"],
            vec![],
        ),
    ]
    .into_iter()
    .map(|(args, files)| {
        let args = args
            .into_iter()
            .map(|a| a.replace("{d}", s(d)).replace("{i}", s(&inst)))
            .collect();
        (args, files)
    })
    .collect();
    for (args, files) in &runs {
        let argv: Vec<&str> = args.iter().map(String::as_str).collect();
        let (c1, o1) = mbsd_cli(&argv);
        let first: Vec<Vec<u8>> = files.iter().map(|f| std::fs::read(f).unwrap()).collect();
        let (c2, o2) = mbsd_cli(&argv);
        let second: Vec<Vec<u8>> = files.iter().map(|f| std::fs::read(f).unwrap()).collect();
        ensure(matches!(c1, Some(0) | Some(1)), || {
            format!("`{}` exited {c1:?}", args.join(" "))
        })?;
        ensure(c1 == c2 && o1 == o2 && first == second, || {
            format!("`{}` is not reproducible", args.join(" "))
        })?;
    }
    Ok(format!(
        "{} commands byte-identical across runs",
        runs.len()
    ))
}

fn guarded(f: impl FnOnce() -> Check) -> Check {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(r) => r,
        Err(e) => Err(e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panicked".into())),
    }
}

#[test]
fn acceptance() {
    let mut sizes = Vec::new();
    let mut outcomes: Vec<(&str, Check, Duration)> = Vec::new();
    let mut run = |name: &'static str, f: &mut dyn FnMut() -> Check| {
        let t = Instant::now();
        let r = guarded(f);
        outcomes.push((name, r, t.elapsed()));
    };
    run("LTLf to DFA soundness", &mut dfa_soundness);
    run("attractor vs bounded min-max", &mut game_determinacy);
    run("point-wise vs general", &mut pointwise_vs_general);
    run("target vs general vs oracle", &mut || {
        target_vs_general_vs_oracle(&mut sizes)
    });
    run("tree-like fast path", &mut || tree_fast_path(&mut sizes));
    let sizes_now = sizes.clone();
    run("target arena size bound", &mut || arena_bounds(&sizes_now));
    run("QBF end to end", &mut qbf_end_to_end);
    run("CNF to CNF-1 truth", &mut cnf1_truth);
    run("Pac-Man 3x3, one ghost", &mut pacman);
    run("CLI determinism", &mut determinism);

    let mut failed = 0;
    for (i, (name, r, t)) in outcomes.iter().enumerate() {
        match r {
            Ok(detail) => println!(
                "criterion {:>2} PASS  {name}: {detail} [{:.1}s]",
                i + 1,
                t.as_secs_f64()
            ),
            Err(why) => {
                failed += 1;
                println!(
                    "criterion {:>2} FAIL  {name}: {why} [{:.1}s]",
                    i + 1,
                    t.as_secs_f64()
                );
            }
        }
    }
    assert_eq!(failed, 0, "{failed} acceptance criteria failed");
}
